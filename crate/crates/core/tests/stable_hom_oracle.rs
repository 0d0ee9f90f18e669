mod support;

use sgcat::corpus;
use sgcat::homology::stable_hom;
use sgcat::Algebra;
use support::{oracle_stable_hom, test_family};

#[test]
fn stable_hom_matches_brute_force_on_every_corpus_family() {
    for entry in corpus::all() {
        let alg = Algebra::load(&entry.spec).unwrap();
        let family = test_family(&alg);
        assert!(family.len() >= 2, "{}", entry.name);
        for x in &family {
            for y in &family {
                let lib = stable_hom(x, y).unwrap();
                let (hom, factoring) = oracle_stable_hom(x, y);
                assert_eq!(lib.hom_dim, hom, "{}: Hom dims {:?} → {:?}", entry.name, x.dim_vector(), y.dim_vector());
                assert_eq!(
                    lib.stable_dim,
                    hom - factoring,
                    "{}: stable Hom dims {:?} → {:?}",
                    entry.name,
                    x.dim_vector(),
                    y.dim_vector()
                );
            }
        }
    }
}

#[test]
fn family_of_truncated_polynomials_is_complete() {
    // k[x]/(x^n) has exactly the n indecomposables k[x]/(x^i)
    for n in 2..=4 {
        let fam = test_family(&corpus::truncated(n));
        let mut dims: Vec<usize> = fam.iter().map(|m| m.dim()).collect();
        dims.sort();
        assert_eq!(dims, (1..=n).collect::<Vec<_>>());
    }
}

#[test]
fn oracle_sanity() {
    use sgcat::Module;
    let alg = corpus::truncated(2);
    let (s, _) = Module::simples(&alg).unwrap();
    let p = Module::regular(&alg);
    assert_eq!(oracle_stable_hom(&s[0], &s[0]), (1, 0));
    assert_eq!(oracle_stable_hom(&p, &p), (2, 2));
    assert_eq!(oracle_stable_hom(&s[0], &p), (1, 1));
}
