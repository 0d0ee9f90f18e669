//! Stabilized singularity-category Hom dimensions worked out by hand. Each
//! fixture carries its derivation.

use std::sync::Arc;

use sgcat::corpus;
use sgcat::{Algebra, Matrix, Module};

pub struct Fixture {
    pub name: &'static str,
    pub derivation: &'static str,
    pub algebra: fn() -> Arc<Algebra>,
    /// Builds `(M, N)`.
    pub modules: fn(&Arc<Algebra>) -> (Module, Module),
    pub expected: fn(i64) -> u64,
}

fn simple(alg: &Arc<Algebra>, v: usize) -> Module {
    Module::simple(alg, v).unwrap()
}

/// `Λ / Λx^k` over `k[x]/(x^n)`.
fn cyclic(alg: &Arc<Algebra>, k: usize) -> Module {
    let reg = Module::regular(alg);
    let x = alg.label_index("x").unwrap();
    let mut gen = Matrix::unit_vector(alg.field(), alg.dim(), alg.idempotents()[0]);
    for _ in 0..k {
        gen = reg.action(x) * &gen;
    }
    reg.quotient(&reg.generated(&gen)).0
}

pub fn fixtures() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "dual numbers, k to k",
            derivation: "Ωk = xΛ ≅ k and the stable endomorphisms of k are k, so every shift gives 1",
            algebra: || corpus::truncated(2),
            modules: |a| (simple(a, 0), simple(a, 0)),
            expected: |_| 1,
        },
        Fixture {
            name: "k[x]/(x³), k to k",
            derivation: "Ωk ≅ k[x]/(x²), Ω²k ≅ k; the top map k[x]/(x²) → k and id_k do not factor \
                         through Λ since every map into Λ from either lands in the radical",
            algebra: || corpus::truncated(3),
            modules: |a| (simple(a, 0), simple(a, 0)),
            expected: |_| 1,
        },
        Fixture {
            name: "k[x]/(x³), k[x]/(x²) to k",
            derivation: "Ω k[x]/(x²) ≅ k and Ωk ≅ k[x]/(x²); both stable Homs k[x]/(x²) → k and k → k are 1-dimensional",
            algebra: || corpus::truncated(3),
            modules: |a| (cyclic(a, 2), simple(a, 0)),
            expected: |_| 1,
        },
        Fixture {
            name: "k[x]/(x⁴), k[x]/(x²) to itself",
            derivation: "Ω k[x]/(x²) = x²Λ ≅ k[x]/(x²); Hom is spanned by 1 and x, and a map through Λ \
                         must send the generator into the x²-torsion span{x², x³}, which every map Λ → k[x]/(x²) kills",
            algebra: || corpus::truncated(4),
            modules: |a| (cyclic(a, 2), cyclic(a, 2)),
            expected: |_| 2,
        },
        Fixture {
            name: "cyclic Nakayama with J² = 0, S₁ to S₁",
            derivation: "ΩS_i is the simple at the next vertex around the 3-cycle and Hom(S_i, S_j) = δ_ij, \
                         so the value is 1 exactly when 3 divides n",
            algebra: || corpus::cyclic_nakayama(2),
            modules: |a| (simple(a, 0), simple(a, 0)),
            expected: |n| u64::from(n.rem_euclid(3) == 0),
        },
        Fixture {
            name: "A₂, top to top",
            derivation: "gl.dim = 1, so every module is perfect and the singularity category is zero",
            algebra: corpus::a2,
            modules: |a| (Module::simples(a).unwrap().1, Module::simples(a).unwrap().1),
            expected: |_| 0,
        },
        Fixture {
            name: "commutative square, top to top",
            derivation: "the commutativity relation gives gl.dim = 2, so the singularity category is zero",
            algebra: corpus::commutative_square,
            modules: |a| (Module::simples(a).unwrap().1, Module::simples(a).unwrap().1),
            expected: |_| 0,
        },
    ]
}
