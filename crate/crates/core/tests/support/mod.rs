//! Shared test helpers: module families and a brute-force stable Hom oracle
//! written against raw `u64` arithmetic so it shares no linear algebra with
//! the library.

#![allow(dead_code)]

pub mod fixtures;

use std::sync::Arc;

use sgcat::decompose::{decompose, is_isomorphic};
use sgcat::homology::projective_cover;
use sgcat::{Algebra, Matrix, Module};

/// `J^k M` as columns in `M`'s coordinates.
pub fn radical_power(m: &Module, k: usize) -> Matrix {
    let f = m.field();
    let mut basis = Matrix::identity(f, m.dim());
    for _ in 0..k {
        if basis.cols() == 0 {
            break;
        }
        let parts: Vec<Matrix> = m.algebra().radical().iter().map(|&r| m.action(r) * &basis).collect();
        let refs: Vec<&Matrix> = parts.iter().collect();
        basis = if refs.is_empty() { Matrix::zeros(f, m.dim(), 0) } else { Matrix::hstack(f, m.dim(), &refs).column_basis() };
    }
    basis
}

/// Indecomposable summands of `P_i / J^k P_i`, `J^k P_i`, `Λ/Λr` for radical
/// basis elements `r` and the first two syzygies of each simple, up to
/// isomorphism. For Nakayama algebras this is every indecomposable.
pub fn test_family(alg: &Arc<Algebra>) -> Vec<Module> {
    let mut raw = Vec::new();
    let (simples, _) = Module::simples(alg).unwrap();
    for v in 0..alg.num_vertices() {
        let p = Module::projective(alg, v);
        for k in 1..=alg.loewy_length() {
            let r = radical_power(&p, k);
            raw.push(p.quotient(&r).0);
            raw.push(p.submodule(&r).0);
        }
        let o1 = projective_cover(&simples[v]).epi.kernel().0;
        let o2 = projective_cover(&o1).epi.kernel().0;
        raw.push(o1);
        raw.push(o2);
    }
    let reg = Module::regular(alg);
    for &r in alg.radical() {
        let e = Matrix::unit_vector(alg.field(), alg.dim(), r);
        raw.push(reg.quotient(&reg.generated(&e)).0);
    }
    let mut family: Vec<Module> = Vec::new();
    for m in raw.into_iter().filter(|m| !m.is_zero()) {
        for (x, _) in decompose(&m).unwrap() {
            let mut seen = false;
            for y in &family {
                if is_isomorphic(&x, y).unwrap().is_yes() {
                    seen = true;
                    break;
                }
            }
            if !seen {
                family.push(x);
            }
        }
    }
    family
}

pub type Mat = Vec<Vec<u64>>;

pub fn modulus(alg: &Algebra) -> u64 {
    match alg.field() {
        sgcat::Field::Prime { p } => p,
        sgcat::Field::Rational => panic!("the oracle works over prime fields"),
    }
}

fn raw(m: &Matrix, p: u64) -> Mat {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m[(r, c)].as_i64().unwrap().rem_euclid(p as i64) as u64).collect())
        .collect()
}

fn inv(a: u64, p: u64) -> u64 {
    let (mut b, mut e, mut r) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Row-reduce in place; returns pivot columns.
fn reduce(rows: &mut [Vec<u64>], ncols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else { continue };
        rows.swap(r, k);
        let s = inv(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * s % p;
        }
        for k in 0..rows.len() {
            if k != r && rows[k][c] != 0 {
                let t = rows[k][c];
                for j in 0..ncols {
                    rows[k][j] = (rows[k][j] + p * p - t * rows[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(vectors: &[Vec<u64>], p: u64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut rows = vectors.to_vec();
    let n = rows[0].len();
    reduce(&mut rows, n, p).len()
}

/// Basis of the solution space of `rows · x = 0`.
fn nullspace(mut rows: Vec<Vec<u64>>, ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let pivots = reduce(&mut rows, ncols, p);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![0u64; ncols];
            x[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = (p - rows[r][fc]) % p;
            }
            x
        })
        .collect()
}

/// A representation by generator matrices.
pub struct Rep {
    pub dim: usize,
    pub acts: Vec<Mat>,
}

pub fn rep_of(m: &Module) -> Rep {
    let p = modulus(m.algebra());
    Rep { dim: m.dim(), acts: m.algebra().generators().iter().map(|&g| raw(m.action(g), p)).collect() }
}

/// Intertwiners `X: M → N` (`X M_a = N_a X` for each generator), as
/// row-major vectors of length `dim N · dim M`.
pub fn hom_basis(m: &Rep, n: &Rep, p: u64) -> Vec<Vec<u64>> {
    let (dm, dn) = (m.dim, n.dim);
    let unknowns = dm * dn;
    let mut eqs = Vec::new();
    for (ma, na) in m.acts.iter().zip(&n.acts) {
        for i in 0..dn {
            for j in 0..dm {
                let mut row = vec![0u64; unknowns];
                for k in 0..dn {
                    row[k * dm + j] = (row[k * dm + j] + na[i][k]) % p;
                }
                for k in 0..dm {
                    row[i * dm + k] = (row[i * dm + k] + p - ma[k][j]) % p;
                }
                if row.iter().any(|&x| x != 0) {
                    eqs.push(row);
                }
            }
        }
    }
    nullspace(eqs, unknowns, p)
}

/// Column basis of `M_e` (the vectors `e·v`).
fn image_basis(a: &Mat, p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let cols: Vec<Vec<u64>> = (0..n).map(|c| (0..n).map(|r| a[r][c]).collect()).collect();
    let mut out: Vec<Vec<u64>> = Vec::new();
    for c in cols {
        let mut trial = out.clone();
        trial.push(c.clone());
        if rank(&trial, p) > out.len() {
            out.push(c);
        }
    }
    out
}

/// `dim Hom(M, N)` and `dim` of the maps factoring through a projective,
/// via the (non-minimal) epimorphism `⊕_i (Λe_i)^{dim e_i N} → N`.
pub fn oracle_stable_hom(m: &Module, n: &Module) -> (usize, usize) {
    let alg = m.algebra();
    let p = modulus(alg);
    let dl = alg.dim();
    let gens = alg.generators();
    let rm = rep_of(m);
    let rn = rep_of(n);
    let hom = hom_basis(&rm, &rn, p);

    // left multiplication on Λ, restricted to Λe_i = span{b : b e_i = b}
    let lmul = |a: usize| -> Mat {
        let mut out = vec![vec![0u64; dl]; dl];
        for b in 0..dl {
            for (c, x) in alg.mul_basis(a, b).into_iter().enumerate() {
                out[c][b] = x.as_i64().unwrap().rem_euclid(p as i64) as u64;
            }
        }
        out
    };
    let mut blocks: Vec<(Vec<usize>, Vec<u64>)> = Vec::new(); // (basis of Λe_i, generator image)
    for (i, &e) in alg.idempotents().iter().enumerate() {
        let lam_e: Vec<usize> = (0..dl).filter(|&b| alg.frame(b).map(|(_, s)| s) == Some(i)).collect();
        for v in image_basis(&raw(n.action(e), p), p) {
            blocks.push((lam_e.clone(), v));
        }
    }
    let dp: usize = blocks.iter().map(|(b, _)| b.len()).sum();
    let mut pacts = Vec::new();
    for &g in gens {
        let lg = lmul(g);
        let mut a = vec![vec![0u64; dp]; dp];
        let mut off = 0;
        for (basis, _) in &blocks {
            for (cj, &bj) in basis.iter().enumerate() {
                for (ci, &bi) in basis.iter().enumerate() {
                    a[off + ci][off + cj] = lg[bi][bj];
                }
            }
            off += basis.len();
        }
        pacts.push(a);
    }
    // π: b ⊗ v ↦ N_b v
    let mut pi = vec![vec![0u64; dp]; n.dim()];
    let mut off = 0;
    for (basis, v) in &blocks {
        for (cb, &b) in basis.iter().enumerate() {
            let nb = raw(n.action(b), p);
            for r in 0..n.dim() {
                pi[r][off + cb] = (0..n.dim()).map(|k| nb[r][k] * v[k] % p).sum::<u64>() % p;
            }
        }
        off += basis.len();
    }
    let rp = Rep { dim: dp, acts: pacts };
    let to_p = hom_basis(&rm, &rp, p);
    let dm = m.dim();
    let composites: Vec<Vec<u64>> = to_p
        .iter()
        .map(|g| {
            let mut out = vec![0u64; n.dim() * dm];
            for r in 0..n.dim() {
                for c in 0..dm {
                    out[r * dm + c] = (0..dp).map(|k| pi[r][k] * g[k * dm + c] % p).sum::<u64>() % p;
                }
            }
            out
        })
        .collect();
    (hom.len(), rank(&composites, p))
}

/// `M` transported along a random invertible change of basis.
pub fn twist(m: &Module, seed: u64) -> Module {
    use rand::SeedableRng;
    let f = m.field();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = m.dim();
    let g = loop {
        let data = (0..n * n).map(|_| f.random(&mut rng)).collect();
        let g = Matrix::from_vec(f, n, n, data);
        if g.is_invertible() {
            break g;
        }
    };
    let gi = g.inverse().unwrap();
    let acts = m.actions().iter().map(|a| &(&g * a) * &gi).collect();
    Module::new(m.algebra().clone(), acts).unwrap()
}
