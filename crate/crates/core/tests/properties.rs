mod support;

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use sgcat::decompose::is_isomorphic;
use sgcat::homology::{projective_cover, stable_hom};
use sgcat::leavitt::{LeavittPresentation, Letter, Lin};
use sgcat::{corpus, hom_dim, Algebra, Module};

struct Case {
    alg: Arc<Algebra>,
    family: Vec<Module>,
}

fn cases() -> &'static [Case] {
    static CASES: OnceLock<Vec<Case>> = OnceLock::new();
    CASES.get_or_init(|| {
        corpus::all()
            .into_iter()
            .map(|e| {
                let alg = Algebra::load(&e.spec).unwrap();
                let family = support::test_family(&alg);
                Case { alg, family }
            })
            .collect()
    })
}

fn pick(case: &Case, i: usize) -> &Module {
    &case.family[i % case.family.len()]
}

fn sum(alg: &Arc<Algebra>, a: &Module, b: &Module) -> Module {
    Module::direct_sum(alg, &[a.clone(), b.clone()]).0
}

fn omega(m: &Module) -> Module {
    projective_cover(m).epi.kernel().0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn omega_is_additive(c in 0usize..9, i in 0usize..16, j in 0usize..16) {
        let case = &cases()[c];
        let (m, n) = (pick(case, i), pick(case, j));
        let lhs = omega(&sum(&case.alg, m, n));
        let rhs = sum(&case.alg, &omega(m), &omega(n));
        prop_assert_eq!(lhs.dim(), rhs.dim());
        prop_assert!(is_isomorphic(&lhs, &rhs).unwrap().is_yes());
    }

    #[test]
    fn hom_is_additive(c in 0usize..9, i in 0usize..16, j in 0usize..16, k in 0usize..16) {
        let case = &cases()[c];
        let (m, n, l) = (pick(case, i), pick(case, j), pick(case, k));
        let mn = sum(&case.alg, m, n);
        prop_assert_eq!(hom_dim(&mn, l).unwrap(), hom_dim(m, l).unwrap() + hom_dim(n, l).unwrap());
        prop_assert_eq!(hom_dim(l, &mn).unwrap(), hom_dim(l, m).unwrap() + hom_dim(l, n).unwrap());
        let st = |a: &Module, b: &Module| stable_hom(a, b).unwrap().stable_dim;
        prop_assert_eq!(st(&mn, l), st(m, l) + st(n, l));
    }

    #[test]
    fn isomorphism_is_an_equivalence(c in 0usize..9, i in 0usize..16, j in 0usize..16, seed in any::<u64>()) {
        let case = &cases()[c];
        let (m, n) = (pick(case, i), pick(case, j));
        let t = support::twist(m, seed);
        prop_assert!(is_isomorphic(m, &t).unwrap().is_yes());
        prop_assert!(is_isomorphic(&t, m).unwrap().is_yes());
        prop_assert_eq!(is_isomorphic(m, n).unwrap().is_yes(), is_isomorphic(n, m).unwrap().is_yes());
        prop_assert_eq!(is_isomorphic(&t, n).unwrap().is_yes(), is_isomorphic(m, n).unwrap().is_yes());
        prop_assert_eq!(stable_hom(&t, n).unwrap().stable_dim, stable_hom(m, n).unwrap().stable_dim);
    }

    #[test]
    fn normal_form_is_idempotent_and_linear(c in 0usize..9, raw in prop::collection::vec((0usize..12, any::<bool>()), 0..7), raw2 in prop::collection::vec((0usize..12, any::<bool>()), 0..7)) {
        let alg = &cases()[c].alg;
        let p = LeavittPresentation::new(alg).unwrap();
        let n = p.num_letters();
        let word = |r: &[(usize, bool)]| -> Lin {
            let letters: Vec<Letter> = r.iter().map(|&(i, g)| if g { Letter::G(i % n) } else { Letter::A(i % n) }).collect();
            p.word(&letters).map(|w| p.single(w)).unwrap_or_default()
        };
        let (u, v) = (word(&raw), word(&raw2));
        let nu = p.normal_form(&u).unwrap();
        prop_assert_eq!(p.normal_form(&nu).unwrap(), nu.clone());
        for w in nu.keys() {
            prop_assert!(p.is_normal(w));
        }
        let mut uv = u.clone();
        for (w, c) in &v {
            let s = uv.get(w).map_or(c.clone(), |x| x + c);
            uv.insert(w.clone(), s);
        }
        uv.retain(|_, c| !c.is_zero());
        let mut sum_nf = nu;
        for (w, c) in p.normal_form(&v).unwrap() {
            let s = sum_nf.get(&w).map_or(c.clone(), |x| x + &c);
            sum_nf.insert(w, s);
        }
        sum_nf.retain(|_, c| !c.is_zero());
        prop_assert_eq!(p.normal_form(&uv).unwrap(), sum_nf);
    }

    #[test]
    fn differential_squares_to_zero(c in 0usize..9, raw in prop::collection::vec((0usize..12, any::<bool>()), 1..6)) {
        let alg = &cases()[c].alg;
        let p = LeavittPresentation::new(alg).unwrap();
        let n = p.num_letters();
        let letters: Vec<Letter> = raw.iter().map(|&(i, g)| if g { Letter::G(i % n) } else { Letter::A(i % n) }).collect();
        if let Some(w) = p.word(&letters) {
            let d = p.differential(&p.single(w)).unwrap();
            prop_assert!(p.differential(&d).unwrap().is_empty());
            for (x, _) in &d {
                prop_assert_eq!(x.degree(), w_degree(&letters) + 1);
            }
        }
    }
}

fn w_degree(ls: &[Letter]) -> i64 {
    ls.iter().map(|l| l.degree()).sum()
}
