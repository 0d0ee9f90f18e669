//! Searches built on syzygy chains: ultimately-closed and syzygy-finite
//! witnesses, Γ(M; d) tables, the presilting probe and the Hom-finiteness
//! trichotomy.

use std::sync::Arc;

use serde::Serialize;

use super::closure::{extension_closure_member, ClosureNode, Limits};
use crate::algebra::Algebra;
use crate::decompose::{decompose_summands, is_isomorphic};
use crate::error::{Error, Result};
use crate::homology::{
    arrow_matrix, pd_status, pd_status_chain, semisimple_omega, semisimple_route, semisimple_vector,
    sg_hom_chains, sg_hom_semisimple, PdStatus, SgHomReport, SgStatus, SyzygyChain, MAX_CHAIN_DIM,
};
use crate::module::{Module, ModuleMap};

/// Cutoff, stabilization window and shift bound shared by the table-based
/// probes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeOptions {
    pub cutoff: usize,
    pub window: usize,
    pub bound: i64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions { cutoff: 8, window: 3, bound: 5 }
    }
}

/// Indecomposable summands up to isomorphism; semisimple modules are read
/// off their dimension vector.
fn summand_classes(x: &Module) -> Result<Vec<Module>> {
    if x.is_zero() {
        return Ok(Vec::new());
    }
    if x.is_semisimple() {
        let alg = x.algebra();
        let mut out = Vec::new();
        for (i, &d) in x.dim_vector().iter().enumerate() {
            if d > 0 {
                out.push(Module::simple(alg, i)?);
            }
        }
        return Ok(out);
    }
    let mut out: Vec<Module> = Vec::new();
    for s in decompose_summands(x)? {
        if position(&out, &s.module)?.is_none() {
            out.push(s.module);
        }
    }
    Ok(out)
}

fn find_iso(x: &Module, y: &Module) -> Result<Option<ModuleMap>> {
    if x.dim() != y.dim() || x.dim_vector() != y.dim_vector() {
        return Ok(None);
    }
    Ok(is_isomorphic(x, y)?.witness().cloned())
}

fn position(list: &[Module], m: &Module) -> Result<Option<usize>> {
    for (i, y) in list.iter().enumerate() {
        if find_iso(m, y)?.is_some() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Extends a chain one stage at a time, stopping early at the size cap.
/// Returns the depth reached.
fn extend_capped(ch: &mut SyzygyChain, dmax: usize) -> Result<usize> {
    for k in 1..=dmax {
        if ch.syzygy(k - 1).dim() > MAX_CHAIN_DIM {
            return Ok(k - 1);
        }
        ch.extend_to(k)?;
    }
    Ok(dmax)
}

/// One matched summand of `Ω^d M`: it is isomorphic to a summand of
/// `Ω^earlier M` via `iso`.
#[derive(Clone, Debug)]
pub struct UcMatch {
    pub summand: Module,
    pub earlier: usize,
    pub iso: ModuleMap,
}

#[derive(Clone, Debug)]
pub struct UcWitness {
    pub d: usize,
    pub matches: Vec<UcMatch>,
    /// `E = M ⊕ ΩM ⊕ … ⊕ Ω^{d−1} M` (stripped syzygies).
    pub e: Module,
}

fn prefix_sum(ch: &SyzygyChain, d: usize) -> Module {
    let parts: Vec<Module> = (0..d).map(|i| ch.syzygy(i).clone()).collect();
    Module::direct_sum(ch.algebra(), &parts).0
}

/// First `d ≤ dmax` such that every indecomposable summand of `Ω^d M` is
/// isomorphic to a summand of some `Ω^i M` with `i < d`.
pub fn ultimately_closed_probe(m: &Module, dmax: usize) -> Result<Option<UcWitness>> {
    if dmax == 0 {
        return Err(Error::InvalidArgument("dmax must be at least 1".into()));
    }
    let mut ch = SyzygyChain::new(m)?;
    let reached = extend_capped(&mut ch, dmax)?;
    let mut earlier: Vec<Vec<Module>> = vec![summand_classes(ch.syzygy(0))?];
    for d in 1..=reached {
        let classes = summand_classes(ch.syzygy(d))?;
        let mut matches = Vec::new();
        'outer: for s in &classes {
            for (i, list) in earlier.iter().enumerate() {
                for y in list {
                    if let Some(iso) = find_iso(s, y)? {
                        matches.push(UcMatch { summand: s.clone(), earlier: i, iso });
                        continue 'outer;
                    }
                }
            }
            break;
        }
        if matches.len() == classes.len() {
            return Ok(Some(UcWitness { d, matches, e: prefix_sum(&ch, d) }));
        }
        earlier.push(classes);
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct InventoryClass {
    pub module: Module,
    pub first_seen: usize,
    pub seed: usize,
}

#[derive(Clone, Debug)]
pub struct SyzygyInventory {
    pub dmax: usize,
    pub window: usize,
    pub classes: Vec<InventoryClass>,
    /// New classes found at each degree `1..=dmax`.
    pub new_per_degree: Vec<usize>,
    /// Last degree that contributed a class, if nothing new appeared in
    /// the `window` degrees after it.
    pub stabilized_at: Option<usize>,
    /// First degree at which every seed's syzygy vanishes.
    pub vanishes_from: Option<usize>,
    /// Every class is a summand of `Ω E`, `E` the sum of the classes.
    pub e_in_omega_image: bool,
    pub e: Module,
    /// Some seed chain hit the size cap before `dmax`.
    pub truncated: bool,
}

/// Inventory of indecomposable summands of `Ω^d S` over all simples `S`.
pub fn syzygy_finite_probe(alg: &Arc<Algebra>, dmax: usize, window: usize) -> Result<SyzygyInventory> {
    if dmax == 0 {
        return Err(Error::InvalidArgument("dmax must be at least 1".into()));
    }
    let (simples, _) = Module::simples(alg)?;
    let mut chains = Vec::new();
    let mut truncated = false;
    for s in &simples {
        let mut ch = SyzygyChain::new(s)?;
        let r = extend_capped(&mut ch, dmax)?;
        truncated |= r < dmax;
        chains.push((ch, r));
    }
    let mut classes: Vec<InventoryClass> = Vec::new();
    let mut new_per_degree = Vec::new();
    let mut vanishes_from = None;
    for d in 1..=dmax {
        let mut new = 0;
        let mut all_zero = true;
        for (seed, (ch, r)) in chains.iter().enumerate() {
            if d > *r {
                all_zero = false;
                continue;
            }
            let x = ch.syzygy(d);
            all_zero &= x.is_zero();
            for c in summand_classes(x)? {
                let known: Vec<Module> = classes.iter().map(|k| k.module.clone()).collect();
                if position(&known, &c)?.is_none() {
                    classes.push(InventoryClass { module: c, first_seen: d, seed });
                    new += 1;
                }
            }
        }
        if all_zero && vanishes_from.is_none() {
            vanishes_from = Some(d);
        }
        new_per_degree.push(new);
    }
    let last_new = new_per_degree.iter().rposition(|&n| n > 0).map(|i| i + 1).unwrap_or(0);
    let stabilized_at = (dmax >= last_new + window).then_some(last_new);
    let parts: Vec<Module> = classes.iter().map(|c| c.module.clone()).collect();
    let e = Module::direct_sum(alg, &parts).0;
    let e_in_omega_image = if parts.is_empty() {
        true
    } else {
        let mut ch = SyzygyChain::new(&e)?;
        ch.extend_to(1)?;
        let image = summand_classes(ch.syzygy(1))?;
        let mut ok = true;
        for p in &parts {
            ok &= position(&image, p)?.is_some();
        }
        ok
    };
    Ok(SyzygyInventory { dmax, window, classes, new_per_degree, stabilized_at, vanishes_from, e_in_omega_image, e, truncated })
}

#[derive(Clone, Debug)]
pub struct VucWitness {
    pub d: usize,
    /// `⊕_{i<d} Ω^i M`.
    pub generator: Module,
    pub certificate: Arc<ClosureNode>,
}

/// First `d ≤ dmax` with `Ω^d M ∈ ⟨M ⊕ ΩM ⊕ … ⊕ Ω^{d−1} M⟩`.
pub fn virtually_uc_probe(m: &Module, dmax: usize, limits: &Limits) -> Result<Option<VucWitness>> {
    if dmax == 0 {
        return Err(Error::InvalidArgument("dmax must be at least 1".into()));
    }
    let mut ch = SyzygyChain::new(m)?;
    let reached = extend_capped(&mut ch, dmax)?;
    for d in 1..=reached {
        let gen = prefix_sum(&ch, d);
        if gen.is_zero() {
            continue;
        }
        if let Some(t) = extension_closure_member(ch.syzygy(d), &gen, limits)? {
            return Ok(Some(VucWitness { d, generator: gen, certificate: t }));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaCell {
    pub n: i64,
    pub report: SgHomReport,
}

/// Dimensions of `Γ(M; d)_n = Hom_{D_sg}(M, Σ^{nd} M)` for `|n| ≤ N`.
#[derive(Clone, Debug, Serialize)]
pub struct GammaTable {
    pub dim_vector: Vec<usize>,
    pub d: usize,
    pub bound: i64,
    pub cells: Vec<GammaCell>,
    /// Every cell is known to be nonzero.
    pub all_nonzero: bool,
    pub all_certified: bool,
    pub any_growing: bool,
}

impl GammaTable {
    pub fn cell(&self, n: i64) -> Option<&SgHomReport> {
        self.cells.iter().find(|c| c.n == n).map(|c| &c.report)
    }
}

/// Builds Γ(M; d). Each cell uses cutoff `K + max(0, −nd)` so that every
/// cell sees the same number of stages. With `vp_certified`, a certified
/// zero cell contradicts the non-vanishing theorem and is reported as
/// [`Error::TheoremViolation`].
pub fn gamma_table(m: &Module, d: usize, opts: &ProbeOptions, vp_certified: bool) -> Result<GammaTable> {
    if m.is_zero() {
        return Err(Error::InvalidArgument("Γ(M; d) needs a nonzero module".into()));
    }
    if d == 0 || opts.bound < 0 {
        return Err(Error::InvalidArgument("need d ≥ 1 and N ≥ 0".into()));
    }
    let route = semisimple_route(m, m);
    let mut chain = if route.is_none() { Some(SyzygyChain::new(m)?) } else { None };
    let mut cells = Vec::new();
    for n in -opts.bound..=opts.bound {
        let shift = n * d as i64;
        let cutoff = opts.cutoff + (-shift).max(0) as usize;
        let report = match (&route, chain.as_mut()) {
            (Some((x, _)), _) => sg_hom_semisimple(m.algebra(), x, x, shift, cutoff, opts.window)?,
            (None, Some(ch)) => sg_hom_chains(ch, None, shift, cutoff, opts.window)?,
            (None, None) => unreachable!(),
        };
        if vp_certified && report.is_certified() && report.value == 0 {
            return Err(Error::TheoremViolation { n });
        }
        cells.push(GammaCell { n, report });
    }
    let known_nonzero = |r: &SgHomReport| r.nonzero_certified || (r.is_certified() && r.value > 0);
    Ok(GammaTable {
        dim_vector: m.dim_vector(),
        d,
        bound: opts.bound,
        all_nonzero: cells.iter().all(|c| known_nonzero(&c.report)),
        all_certified: cells.iter().all(|c| c.report.is_certified()),
        any_growing: cells.iter().any(|c| c.report.status == SgStatus::GrowingAtCutoff),
        cells,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PresiltingVerdict {
    /// `Hom_{D_sg}(X, Σ^n X) ≠ 0`, so `X` is not presilting.
    NonvanishingWitness { n: i64, dim: u64, report: SgHomReport },
    /// `pd X < ∞`: `X` is zero in the singularity category.
    ZeroObject { pd: usize },
    /// Nothing certified up to `nmax`; this is not evidence that `X` is
    /// presilting.
    Unknown { nmax: i64 },
}

pub fn presilting_probe(x: &Module, nmax: i64, opts: &ProbeOptions) -> Result<PresiltingVerdict> {
    if nmax < 1 {
        return Err(Error::InvalidArgument("nmax must be at least 1".into()));
    }
    let route = semisimple_route(x, x);
    let mut chain = SyzygyChain::new(x)?;
    if route.is_none() {
        if let Some(pd) = pd_status_chain(&mut chain, opts.cutoff)?.finite() {
            return Ok(PresiltingVerdict::ZeroObject { pd });
        }
    } else if let Some(pd) = pd_status(x, opts.cutoff)?.finite() {
        return Ok(PresiltingVerdict::ZeroObject { pd });
    }
    for n in 1..=nmax {
        let report = match &route {
            Some((v, _)) => sg_hom_semisimple(x.algebra(), v, v, n, opts.cutoff, opts.window)?,
            None => sg_hom_chains(&mut chain, None, n, opts.cutoff, opts.window)?,
        };
        if report.nonzero_certified || (report.is_certified() && report.value > 0) {
            return Ok(PresiltingVerdict::NonvanishingWitness { n, dim: report.value, report });
        }
    }
    Ok(PresiltingVerdict::Unknown { nmax })
}

/// Growth of the `n = 0` column of Γ(Λ₀; 1) at the cutoff.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthWitness {
    /// `d_k = dim Hom(Ω^k Λ₀, Ω^k Λ₀)` modulo projectives, `k = 0..=cutoff`.
    pub stable_dims: Vec<u64>,
    /// Dimensions of the stripped syzygies `Ω^k Λ₀`.
    pub syzygy_dims: Vec<u64>,
    pub cutoff: usize,
    /// Always true: growth up to a cutoff is evidence, not proof.
    pub cutoff_relative: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TrichotomyVerdict {
    FiniteGlobalDimension { d: usize },
    /// `pd Λ₀ = ∞` and every cell of Γ(Λ₀; 1) is certified.
    InfiniteGlDimHomFinite { pd: PdStatus, values: Vec<(i64, u64)> },
    NotHomFinite { growth: GrowthWitness },
    Undetermined { cutoff: usize, bound: i64 },
}

fn syzygy_dims(l0: &Module, cutoff: usize) -> Result<Vec<u64>> {
    let alg = l0.algebra();
    if let Some(x) = semisimple_vector(l0).filter(|_| alg.is_radical_square_zero()) {
        let (a, proj) = arrow_matrix(alg);
        let mut cur: Vec<u64> = x.iter().zip(&proj).map(|(&v, &p)| if p { 0 } else { v }).collect();
        let mut out = Vec::new();
        for _ in 0..=cutoff {
            out.push(cur.iter().sum());
            cur = semisimple_omega(&a, &proj, &cur)?;
        }
        return Ok(out);
    }
    let mut ch = SyzygyChain::new(l0)?;
    let r = extend_capped(&mut ch, cutoff)?;
    Ok((0..=r).map(|k| ch.syzygy(k).dim() as u64).collect())
}

/// Classifies the algebra by the global dimension and Hom-finiteness of its
/// singularity category.
pub fn hom_finiteness_probe(alg: &Arc<Algebra>, opts: &ProbeOptions) -> Result<TrichotomyVerdict> {
    let (_, l0) = Module::simples(alg)?;
    let pd = pd_status(&l0, opts.cutoff)?;
    if let Some(d) = pd.finite() {
        return Ok(TrichotomyVerdict::FiniteGlobalDimension { d });
    }
    let table = gamma_table(&l0, 1, opts, false)?;
    if table.all_certified && table.cells.iter().all(|c| c.report.status == SgStatus::StabilizedCertified) {
        let values = table.cells.iter().map(|c| (c.n, c.report.value)).collect();
        return Ok(TrichotomyVerdict::InfiniteGlDimHomFinite { pd, values });
    }
    if table.any_growing {
        let col = table.cell(0).expect("n = 0 is always in the table");
        let growth = GrowthWitness {
            stable_dims: col.dims.clone(),
            syzygy_dims: syzygy_dims(&l0, opts.cutoff)?,
            cutoff: col.cutoff,
            cutoff_relative: true,
        };
        return Ok(TrichotomyVerdict::NotHomFinite { growth });
    }
    Ok(TrichotomyVerdict::Undetermined { cutoff: opts.cutoff, bound: opts.bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn uc_witnesses() {
        let alg = corpus::truncated(3);
        let k = Module::simple(&alg, 0).unwrap();
        let w = ultimately_closed_probe(&k, 4).unwrap().unwrap();
        assert_eq!(w.d, 2);
        assert_eq!(w.matches[0].earlier, 0);
        assert_eq!(w.e.dim(), 3);

        let tl = corpus::two_loop();
        let s = Module::simple(&tl, 0).unwrap();
        let w = ultimately_closed_probe(&s, 3).unwrap().unwrap();
        assert_eq!(w.d, 1);
    }

    #[test]
    fn inventories() {
        let inv = syzygy_finite_probe(&corpus::truncated(3), 6, 2).unwrap();
        let mut dims: Vec<usize> = inv.classes.iter().map(|c| c.module.dim()).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 2]);
        assert_eq!(inv.stabilized_at, Some(2));
        assert!(inv.e_in_omega_image);

        let inv = syzygy_finite_probe(&corpus::two_loop(), 5, 2).unwrap();
        assert_eq!(inv.classes.len(), 1);
        assert_eq!(inv.stabilized_at, Some(1));

        let inv = syzygy_finite_probe(&corpus::a2(), 3, 2).unwrap();
        assert!(inv.classes.is_empty());
        assert_eq!(inv.vanishes_from, Some(1));
    }

    #[test]
    fn virtually_uc() {
        let alg = corpus::truncated(3);
        let k = Module::simple(&alg, 0).unwrap();
        let w = virtually_uc_probe(&k, 2, &Limits::default()).unwrap().unwrap();
        assert!(w.d <= 2);
        w.certificate.verify(&w.generator).unwrap();
    }

    #[test]
    fn gamma_examples() {
        let opts = ProbeOptions { bound: 3, ..ProbeOptions::default() };
        let dn = corpus::truncated(2);
        let k = Module::simple(&dn, 0).unwrap();
        let t = gamma_table(&k, 1, &opts, true).unwrap();
        assert!(t.cells.iter().all(|c| c.report.value == 1 && c.report.is_certified()));

        let t3 = corpus::truncated(3);
        let (_, l0) = Module::simples(&t3).unwrap();
        let t = gamma_table(&l0, 1, &opts, true).unwrap();
        assert!(t.all_certified && t.all_nonzero);

        let a2 = corpus::a2();
        let s = Module::simple(&a2, 0).unwrap();
        let t = gamma_table(&s, 1, &opts, false).unwrap();
        assert!(t.cells.iter().all(|c| c.report.status == SgStatus::ZeroCertified));
    }

    #[test]
    fn presilting() {
        let dn = corpus::truncated(2);
        let k = Module::simple(&dn, 0).unwrap();
        match presilting_probe(&k, 3, &ProbeOptions::default()).unwrap() {
            PresiltingVerdict::NonvanishingWitness { n, dim, .. } => assert_eq!((n, dim), (1, 1)),
            v => panic!("{v:?}"),
        }
        let p = Module::regular(&dn);
        assert!(matches!(presilting_probe(&p, 3, &ProbeOptions::default()).unwrap(), PresiltingVerdict::ZeroObject { pd: 0 }));
    }

    #[test]
    fn trichotomy() {
        let o = ProbeOptions::default();
        assert!(matches!(hom_finiteness_probe(&corpus::a2(), &o).unwrap(), TrichotomyVerdict::FiniteGlobalDimension { d: 1 }));
        assert!(matches!(
            hom_finiteness_probe(&corpus::truncated(3), &o).unwrap(),
            TrichotomyVerdict::InfiniteGlDimHomFinite { .. }
        ));
        match hom_finiteness_probe(&corpus::two_loop(), &o).unwrap() {
            TrichotomyVerdict::NotHomFinite { growth } => {
                assert_eq!(&growth.syzygy_dims[..4], &[1, 2, 4, 8]);
                assert_eq!(&growth.stable_dims[..4], &[1, 4, 16, 64]);
            }
            v => panic!("{v:?}"),
        }
    }
}
