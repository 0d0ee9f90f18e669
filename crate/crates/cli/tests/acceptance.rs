//! End-to-end acceptance run. Prints one `PASS`/`FAIL` line per criterion and
//! fails if any criterion is red.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use sgcat::decompose::is_projective;
use sgcat::homology::{sg_hom, stable_hom, SgHomReport, SgStatus};
use sgcat::leavitt::{Comparison, LeavittPresentation, PairingConvention, Semantics};
use sgcat::periodicity::{
    certify_virtually_periodic, derive_nd_certificate, gamma_table, hom_finiteness_probe, presilting_probe,
    PresiltingVerdict, ProbeOptions, TrichotomyVerdict, VPCertificate, VpOptions, VpOutcome,
};
use sgcat::{corpus, Algebra, Module};

type Verdict = Result<String, String>;

fn load(name: &str) -> Arc<Algebra> {
    Algebra::load(&corpus::by_name(name).unwrap().spec).unwrap()
}

fn top(alg: &Arc<Algebra>) -> Module {
    Module::simples(alg).unwrap().1
}

fn infinite_gl_dim() -> Vec<&'static str> {
    corpus::all().into_iter().filter(|e| e.infinite_gl_dim).map(|e| e.name).collect()
}

fn known_nonzero(r: &SgHomReport) -> bool {
    r.nonzero_certified || (r.is_certified() && r.value > 0)
}

fn certify(m: &Module, d: usize) -> Result<VPCertificate, String> {
    match certify_virtually_periodic(m, d, &VpOptions::default()) {
        Ok(VpOutcome::Certified(c)) => Ok(*c),
        Ok(VpOutcome::Unknown { reason }) => Err(format!("unknown: {reason}")),
        Err(e) => Err(e.to_string()),
    }
}

fn periodic_nonvanishing() -> Verdict {
    let names = ["dual-numbers", "truncated-3", "truncated-4", "two-loop", "nakayama-cyclic-2", "nakayama-cyclic-3"];
    let mut slowest = Duration::ZERO;
    for name in names {
        let clock = Instant::now();
        let l0 = top(&load(name));
        certify(&l0, 1).map_err(|e| format!("{name}: {e}"))?;
        let opts = ProbeOptions { bound: 5, ..Default::default() };
        let table = gamma_table(&l0, 1, &opts, true).map_err(|e| format!("{name}: {e}"))?;
        for c in &table.cells {
            if c.report.status == SgStatus::ZeroCertified {
                return Err(format!("{name}: certified zero at n = {}", c.n));
            }
            if c.report.is_certified() && c.report.value < 1 {
                return Err(format!("{name}: certified value 0 at n = {}", c.n));
            }
        }
        let t = clock.elapsed();
        if t >= Duration::from_secs(10) {
            return Err(format!("{name}: {t:?}"));
        }
        slowest = slowest.max(t);
    }
    Ok(format!("{} algebras, slowest {slowest:.2?}", names.len()))
}

fn silting_obstruction() -> Verdict {
    let mut slowest = Duration::ZERO;
    let names = infinite_gl_dim();
    for &name in &names {
        let l0 = top(&load(name));
        for big_n in [5, 10, 20] {
            let clock = Instant::now();
            let opts = ProbeOptions { bound: big_n, ..Default::default() };
            let table = gamma_table(&l0, 1, &opts, false).map_err(|e| format!("{name}: {e}"))?;
            let cell = table.cell(big_n).unwrap();
            if !known_nonzero(cell) {
                return Err(format!("{name}: n = {big_n} not certified nonzero ({:?})", cell.status));
            }
            let t = clock.elapsed();
            if big_n == 20 && t >= Duration::from_secs(60) {
                return Err(format!("{name}: {t:?} at N = 20"));
            }
            slowest = slowest.max(t);
        }
    }
    Ok(format!("{} algebras, slowest table {slowest:.2?}", names.len()))
}

fn presilting() -> Verdict {
    let mut report = Vec::new();
    for name in ["truncated-3", "truncated-4"] {
        let alg = load(name);
        let nonproj: Vec<Module> =
            support::test_family(&alg).into_iter().filter(|x| !is_projective(x).unwrap()).collect();
        let bound = 2 * nonproj.len() as i64;
        let mut worst = 0;
        for x in &nonproj {
            match presilting_probe(x, bound, &ProbeOptions::default()).map_err(|e| e.to_string())? {
                PresiltingVerdict::NonvanishingWitness { n, .. } if n <= bound => worst = worst.max(n),
                v => return Err(format!("{name}: dim {} gives {v:?}", x.dim())),
            }
        }
        report.push(format!("{name}: {} modules, largest n = {worst} (bound {bound})", nonproj.len()));
    }
    Ok(report.join("; "))
}

fn acyclicity() -> Verdict {
    for name in ["a2", "commutative-square"] {
        let p = LeavittPresentation::new(&load(name)).map_err(|e| e.to_string())?;
        if !p.is_collapsed() {
            return Err(format!("{name}: presentation did not collapse"));
        }
        let coh = p.cohomology_report(-5, 5, 8, 4).map_err(|e| e.to_string())?;
        for h in &coh.degrees {
            if h.semantics != Semantics::Exact || h.exact_dim != Some(0) {
                return Err(format!("{name}: degree {} gives {:?} {:?}", h.degree, h.semantics, h.exact_dim));
            }
        }
    }
    let p = LeavittPresentation::new(&load("dual-numbers")).map_err(|e| e.to_string())?;
    let coh = p.cohomology_report(-5, 5, 8, 4).map_err(|e| e.to_string())?;
    for h in &coh.degrees {
        if h.semantics != Semantics::Exact || h.exact_dim != Some(1) {
            return Err(format!("dual-numbers: degree {} gives {:?} {:?}", h.degree, h.semantics, h.exact_dim));
        }
    }
    Ok("a2 and commutative-square collapse to zero; dual numbers exact 1 in |n| ≤ 5".into())
}

fn crosscheck() -> Verdict {
    for name in ["dual-numbers", "a2"] {
        let p = LeavittPresentation::new(&load(name)).map_err(|e| e.to_string())?;
        let r = p.crosscheck_lemma(5, 8, 4, &ProbeOptions::default()).map_err(|e| format!("{name}: {e}"))?;
        if r.degrees.len() != 11 || !r.degrees.iter().all(|c| matches!(c, Comparison::Match { .. })) {
            return Err(format!("{name}: {:?}", r.degrees));
        }
    }
    Ok("11 matching degrees on dual-numbers and a2".into())
}

fn trichotomy() -> Verdict {
    let opts = ProbeOptions::default();
    let probe = |name: &str| hom_finiteness_probe(&load(name), &opts).map_err(|e| e.to_string());
    match probe("a2")? {
        TrichotomyVerdict::FiniteGlobalDimension { .. } => {}
        v => return Err(format!("a2: {v:?}")),
    }
    match probe("truncated-3")? {
        TrichotomyVerdict::InfiniteGlDimHomFinite { .. } => {}
        v => return Err(format!("truncated-3: {v:?}")),
    }
    match probe("two-loop")? {
        TrichotomyVerdict::NotHomFinite { growth } => {
            let d = &growth.stable_dims[..4.min(growth.stable_dims.len())];
            let s = &growth.syzygy_dims[..4.min(growth.syzygy_dims.len())];
            if d == [1, 2, 4, 8] {
                Ok(format!("classes right; two-loop d_k = {d:?}"))
            } else {
                Err(format!("classes right, but two-loop d_k = {d:?} (syzygy dims {s:?}), expected [1, 2, 4, 8]"))
            }
        }
        v => Err(format!("two-loop: {v:?}")),
    }
}

fn transport() -> Verdict {
    let names = infinite_gl_dim();
    for &name in &names {
        let l0 = top(&load(name));
        let cert = certify(&l0, 1).map_err(|e| format!("{name}: {e}"))?;
        for n in 1..=4 {
            let derived = derive_nd_certificate(&cert, n).map_err(|e| format!("{name} n = {n}: {e}"))?;
            derived.verify().map_err(|e| format!("{name} n = {n}: {e}"))?;
            let direct = certify(&l0, n).is_ok();
            if !direct || derived.period != n * cert.period {
                return Err(format!("{name} n = {n}: direct search certified = {direct}"));
            }
        }
    }
    Ok(format!("{} certificates, n = 1..4", names.len()))
}

fn oracle() -> Verdict {
    let mut pairs = 0;
    for entry in corpus::all() {
        let alg = Algebra::load(&entry.spec).unwrap();
        let family = support::test_family(&alg);
        for x in &family {
            for y in &family {
                let lib = stable_hom(x, y).map_err(|e| e.to_string())?;
                let (hom, factoring) = support::oracle_stable_hom(x, y);
                if lib.hom_dim != hom || lib.stable_dim != hom - factoring {
                    return Err(format!("{}: {:?} → {:?}", entry.name, x.dim_vector(), y.dim_vector()));
                }
                pairs += 1;
            }
        }
    }
    let fixtures = support::fixtures::fixtures();
    for fx in &fixtures {
        let alg = (fx.algebra)();
        let (m, n) = (fx.modules)(&alg);
        for shift in -5i64..=5 {
            let r = sg_hom(&m, shift, &n, 12, 3).map_err(|e| e.to_string())?;
            let settled = matches!(r.status, SgStatus::StabilizedCertified | SgStatus::ZeroCertified);
            if !settled || r.value != (fx.expected)(shift) {
                return Err(format!("{} at n = {shift}: {:?} {} ({})", fx.name, r.status, r.value, fx.derivation));
            }
        }
    }
    Ok(format!("{pairs} stable Hom pairs, {} fixtures", fixtures.len()))
}

fn dg_axioms() -> Verdict {
    for entry in corpus::all() {
        let alg = Algebra::load(&entry.spec).unwrap();
        let p = LeavittPresentation::new(&alg).map_err(|e| format!("{}: {e}", entry.name))?;
        p.verify_dg_axioms(6).map_err(|e| format!("{}: {e}", entry.name))?;
    }
    let mutant = LeavittPresentation::with_pairing(&corpus::truncated(3), PairingConvention::Transposed)
        .and_then(|p| p.verify_dg_axioms(6));
    match mutant {
        Err(e) => Ok(format!("all corpus presentations pass; mutant rejected ({e})")),
        Ok(_) => Err("all corpus presentations pass, but the transposed mutant passes on truncated-3".into()),
    }
}

fn sgcat(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_sgcat")).args(args).env_remove("SGCAT_OUT_DIR").output().unwrap()
}

fn entry_pointers(v: &Value, path: String, out: &mut Vec<String>) {
    match v {
        Value::Object(m) if m.contains_key("rows") && m.contains_key("entries") => {
            let len = m["entries"].as_array().unwrap().len();
            out.extend((0..len).map(|i| format!("{path}/entries/{i}")));
        }
        Value::Object(m) => m.iter().for_each(|(k, x)| entry_pointers(x, format!("{path}/{k}"), out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| entry_pointers(x, format!("{path}/{i}"), out)),
        _ => {}
    }
}

fn replay() -> Verdict {
    const CORRUPTIONS_PER_CERTIFICATE: usize = 10;
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (mut replayed, mut caught) = (0, 0);
    for name in infinite_gl_dim() {
        let path = dir.path().join(format!("{name}.json"));
        let path_s = path.to_str().unwrap();
        let out = sgcat(&["certify-vp", "-a", &format!("corpus:{name}"), "--out", path_s]);
        if !out.status.success() {
            return Err(format!("{name}: certify-vp exited {:?}", out.status.code()));
        }
        let out = sgcat(&["verify", path_s]);
        if out.status.code() != Some(0) {
            return Err(format!("{name}: verify exited {:?}", out.status.code()));
        }
        replayed += 1;

        let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let mut pointers = Vec::new();
        entry_pointers(&report["result"]["certificate"], "/result/certificate".into(), &mut pointers);
        for _ in 0..CORRUPTIONS_PER_CERTIFICATE {
            let ptr = &pointers[rng.gen_range(0..pointers.len())];
            let mut bad = report.clone();
            corrupt(&mut bad, ptr);
            let bad_path = dir.path().join("corrupt.json");
            std::fs::write(&bad_path, serde_json::to_string(&bad).unwrap()).unwrap();
            let code = sgcat(&["verify", bad_path.to_str().unwrap()]).status.code();
            if code != Some(1) {
                return Err(format!("{name}: corruption at {ptr} gave exit {code:?}"));
            }
            caught += 1;
        }
    }
    Ok(format!("{replayed}/{replayed} certificates replay; {caught} corruptions caught"))
}

fn corrupt(v: &mut Value, pointer: &str) {
    let e = v.pointer_mut(pointer).unwrap();
    let x: i64 = e.as_str().unwrap().parse().unwrap();
    *e = Value::String((x + 1).rem_euclid(101).to_string());
}

#[test]
fn acceptance_criteria() {
    assert!(Path::new(env!("CARGO_BIN_EXE_sgcat")).exists());
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("non-vanishing on periodic corpus", periodic_nonvanishing),
        ("silting obstruction for N in {5, 10, 20}", silting_obstruction),
        ("presilting probe on truncated polynomials", presilting),
        ("Leavitt acyclicity dichotomy", acyclicity),
        ("Leavitt cohomology crosscheck", crosscheck),
        ("trichotomy", trichotomy),
        ("nd-periodicity transport", transport),
        ("oracle equivalence", oracle),
        ("dg axioms", dg_axioms),
        ("certificate replay", replay),
    ];
    println!();
    let mut red = Vec::new();
    for (i, (title, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {title}: {detail}", i + 1),
            Err(detail) => {
                println!("criterion {}: FAIL {title}: {detail}", i + 1);
                red.push(i + 1);
            }
        }
    }
    assert!(red.is_empty(), "failing criteria: {red:?}");
}
