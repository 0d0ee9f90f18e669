use std::fs;

use serde_json::{json, Value};
use sgcat::homology::pd_status;
use sgcat::leavitt::LeavittPresentation;
use sgcat::periodicity::{
    certify_virtually_periodic, gamma_table, hom_finiteness_probe, presilting_probe, Limits, ProbeOptions,
    VPCertificate, VpOptions, VpOutcome,
};
use sgcat::{Error, Module};

use crate::input::{load_algebra, load_module};
use crate::{ChainKnobs, CliError, Command, LengthKnobs};

type Outcome = Result<Value, (Option<Value>, CliError)>;

fn positive(name: &str, v: usize) -> Result<(), CliError> {
    if v == 0 {
        return Err(CliError::Input(format!("--{name} must be positive")));
    }
    Ok(())
}

fn check_chain(k: &ChainKnobs) -> Result<(), CliError> {
    positive("cutoff", k.cutoff)?;
    positive("window", k.window)
}

fn check_lengths(l: &LengthKnobs, range: i64) -> Result<(), CliError> {
    positive("lmax", l.lmax)?;
    positive("mmax", l.mmax)?;
    if range < 0 {
        return Err(CliError::Input("--range must be non-negative".into()));
    }
    Ok(())
}

fn probe_options(k: &ChainKnobs, range: i64) -> Result<ProbeOptions, CliError> {
    check_chain(k)?;
    if range < 0 {
        return Err(CliError::Input("--range must be non-negative".into()));
    }
    Ok(ProbeOptions { cutoff: k.cutoff, window: k.window, bound: range })
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

pub fn run(cmd: &Command) -> Outcome {
    match cmd {
        Command::Verify { files } => verify(files),
        _ => dispatch(cmd).map_err(|e| (None, e)),
    }
}

fn dispatch(cmd: &Command) -> Result<Value, CliError> {
    match cmd {
        Command::Analyze { alg, knobs, range } => {
            let opts = probe_options(knobs, *range)?;
            let alg = load_algebra(&alg.algebra)?;
            let (simples, top) = Module::simples(&alg)?;
            let vertices = alg.vertices();
            let projectives: Vec<Value> = (0..alg.num_vertices())
                .map(|v| {
                    let p = Module::projective(&alg, v);
                    json!({"vertex": vertices[v], "dim": p.dim(), "dim_vector": p.dim_vector()})
                })
                .collect();
            let simples: Vec<Value> = simples
                .iter()
                .enumerate()
                .map(|(v, s)| json!({"vertex": vertices[v], "dim": s.dim()}))
                .collect();
            Ok(json!({
                "dimension": alg.dim(),
                "field": alg.field(),
                "vertices": vertices,
                "loewy_length": alg.loewy_length(),
                "radical_square_zero": alg.is_radical_square_zero(),
                "simples": simples,
                "projectives": projectives,
                "pd_top": to_value(&pd_status(&top, knobs.cutoff)?),
                "trichotomy": to_value(&hom_finiteness_probe(&alg, &opts)?),
            }))
        }
        Command::Gamma { alg, module, d, range, knobs } => {
            positive("d", *d)?;
            let opts = probe_options(knobs, *range)?;
            let alg = load_algebra(&alg.algebra)?;
            let m = load_module(&alg, module)?;
            let vp = match certify_virtually_periodic(&m, *d, &VpOptions { cutoff: knobs.cutoff, ..Default::default() }) {
                Ok(VpOutcome::Certified(_)) => true,
                Ok(VpOutcome::Unknown { .. }) | Err(Error::FinitePd(_)) => false,
                Err(e) => return Err(e.into()),
            };
            let table = gamma_table(&m, *d, &opts, vp)?;
            Ok(json!({"virtually_periodic": vp, "table": to_value(&table)}))
        }
        Command::CertifyVp { alg, module, d, cutoff, max_dim, max_depth, max_classes } => {
            for (n, v) in [("d", d), ("cutoff", cutoff), ("max-dim", max_dim), ("max-depth", max_depth), ("max-classes", max_classes)] {
                positive(n, *v)?;
            }
            let alg = load_algebra(&alg.algebra)?;
            let m = load_module(&alg, module)?;
            let limits = Limits { max_dim: *max_dim, max_depth: *max_depth, max_classes: *max_classes };
            match certify_virtually_periodic(&m, *d, &VpOptions { cutoff: *cutoff, limits }) {
                Ok(VpOutcome::Certified(cert)) => {
                    Ok(json!({"outcome": "certified", "certificate": cert.to_json()}))
                }
                Ok(VpOutcome::Unknown { reason }) => Ok(json!({"outcome": "unknown", "reason": reason})),
                Err(Error::FinitePd(pd)) => Ok(json!({"outcome": "finite_pd", "pd": pd})),
                Err(e) => Err(e.into()),
            }
        }
        Command::Presilting { alg, module, nmax, knobs } => {
            if *nmax < 1 {
                return Err(CliError::Input("--nmax must be positive".into()));
            }
            let opts = probe_options(knobs, 0)?;
            let alg = load_algebra(&alg.algebra)?;
            let m = load_module(&alg, module)?;
            Ok(to_value(&presilting_probe(&m, *nmax, &opts)?))
        }
        Command::Leavitt { alg, range, lengths, axioms } => {
            check_lengths(lengths, *range)?;
            let alg = load_algebra(&alg.algebra)?;
            let p = LeavittPresentation::new(&alg)?;
            let axioms = p.verify_dg_axioms(*axioms)?;
            let coh = p.cohomology_report(-range, *range, lengths.lmax, lengths.mmax)?;
            Ok(json!({
                "presentation": p.to_json(),
                "axioms": to_value(&axioms),
                "cohomology": to_value(&coh),
            }))
        }
        Command::Crosscheck { alg, range, lengths, knobs } => {
            check_lengths(lengths, *range)?;
            let opts = probe_options(knobs, *range)?;
            let alg = load_algebra(&alg.algebra)?;
            let p = LeavittPresentation::new(&alg)?;
            Ok(to_value(&p.crosscheck_lemma(*range, lengths.lmax, lengths.mmax, &opts)?))
        }
        Command::Verify { .. } => unreachable!("handled in run"),
    }
}

/// A bare certificate, or the one embedded in a `certify-vp` report.
fn certificate_of(v: &Value) -> Option<&Value> {
    if v.get("format").is_some() {
        return Some(v);
    }
    v.get("result").and_then(|r| r.get("certificate"))
}

fn verify(files: &[std::path::PathBuf]) -> Outcome {
    let mut results = Vec::new();
    let mut failed = 0;
    for path in files {
        let shown = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|e| (None, CliError::Input(format!("{shown}: {e}"))))?;
        let v: Value = serde_json::from_str(&text)
            .map_err(|e| (None, CliError::Input(format!("{shown}:{}:{}: {e}", e.line(), e.column()))))?;
        let cert = certificate_of(&v)
            .ok_or_else(|| (None, CliError::Input(format!("{shown}: no certificate found"))))?;
        let checked = VPCertificate::from_json(cert).and_then(|c| {
            c.verify()?;
            Ok(c)
        });
        match checked {
            Ok(c) => results.push(json!({"file": shown, "ok": true, "period": c.period})),
            Err(e) => {
                failed += 1;
                results.push(json!({"file": shown, "ok": false, "error": e.to_string()}));
            }
        }
    }
    let report = json!({"all_ok": failed == 0, "results": results});
    if failed > 0 {
        let msg = format!("{failed} of {} certificates failed to replay", files.len());
        return Err((Some(report), CliError::Verification(msg)));
    }
    Ok(report)
}
