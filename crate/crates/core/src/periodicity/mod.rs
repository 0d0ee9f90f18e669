//! Virtual periodicity: extension-closure certificates, their transport
//! along syzygies, and the probes built on top of them.

pub mod closure;

pub use closure::{extension_closure_member, ClosureNode, Limits};
pub mod vp;

pub use vp::{
    certify_virtually_periodic, derive_nd_certificate, detect_periodicity, PdWitness, VPCertificate, VpOptions,
    VpOutcome,
};
pub mod probes;

pub use probes::{
    gamma_table, hom_finiteness_probe, presilting_probe, syzygy_finite_probe, ultimately_closed_probe,
    virtually_uc_probe, GammaTable, PresiltingVerdict, ProbeOptions, TrichotomyVerdict,
};
