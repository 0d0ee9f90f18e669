//! Krull–Schmidt toolkit: Fitting decomposition into indecomposables,
//! isomorphism testing, retractions and projective-summand stripping.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;
use crate::module::{hom_dim, hom_matrices, Module, ModuleMap};

/// Settings for [`is_isomorphic_with`].
#[derive(Clone, Debug)]
pub struct IsoConfig {
    /// Largest Hom space (in candidates) searched exhaustively.
    pub budget: u64,
    pub samples: usize,
    pub seed: u64,
    /// Fall back to comparing decompositions when sampling is inconclusive.
    pub fallback: bool,
}

impl Default for IsoConfig {
    fn default() -> Self {
        IsoConfig { budget: 1_000_000, samples: 48, seed: 0x5eed, fallback: true }
    }
}

#[derive(Clone, Debug)]
pub enum IsoDecision {
    Isomorphic(ModuleMap),
    NotIsomorphic(String),
}

impl IsoDecision {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoDecision::Isomorphic(_))
    }

    pub fn witness(&self) -> Option<&ModuleMap> {
        match self {
            IsoDecision::Isomorphic(w) => Some(w),
            IsoDecision::NotIsomorphic(_) => None,
        }
    }
}

/// An indecomposable summand `X` of some module `M`, with `p ∘ i = id_X`.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: Module,
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

fn random_combination(f: Field, basis: &[Matrix], rng: &mut ChaCha8Rng) -> Matrix {
    let mut acc = Matrix::zeros(f, basis[0].rows(), basis[0].cols());
    for b in basis {
        acc = &acc + &b.scale(&f.random(rng));
    }
    acc
}

fn eval(poly: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = x.field().zero();
    for c in poly.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// How an endomorphism looks after the eigenvalue scan.
enum Fitting {
    /// `(φ - λ)^n` has a proper nonzero kernel.
    Split(Matrix),
    /// `φ = λ + nilpotent`.
    ScalarPlusNilpotent,
    /// No eigenvalue found among the scanned candidates.
    Unresolved,
}

fn fitting(phi: &Matrix) -> Fitting {
    let f = phi.field();
    let n = phi.rows();
    let cp = phi.charpoly();
    for lam in f.scan_values(16) {
        if !eval(&cp, &lam).is_zero() {
            continue;
        }
        let shifted = phi - &Matrix::identity(f, n).scale(&lam);
        let power = shifted.pow(n);
        let r = power.rank();
        if r == 0 {
            return Fitting::ScalarPlusNilpotent;
        }
        if r < n {
            return Fitting::Split(power);
        }
    }
    Fitting::Unresolved
}

/// Splits `M` into indecomposable summands with inclusion and projection
/// maps, so that `Σ i_k p_k = id_M`.
pub fn decompose_summands(m: &Module) -> Result<Vec<Summand>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xdec0);
    let mut out = Vec::new();
    split_rec(m, &ModuleMap::identity(m), &ModuleMap::identity(m), &mut rng, &mut out)?;
    Ok(out)
}

fn split_rec(
    x: &Module,
    inc: &ModuleMap,
    proj: &ModuleMap,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Summand>,
) -> Result<()> {
    if x.dim() == 0 {
        return Ok(());
    }
    let f = x.field();
    let end = hom_matrices(x, x)?;
    if end.len() > 1 {
        let mut candidates: Vec<Matrix> = end.clone();
        for _ in 0..8 {
            candidates.push(random_combination(f, &end, rng));
        }
        let mut unresolved = false;
        for (ci, phi) in candidates.iter().enumerate() {
            match fitting(phi) {
                Fitting::Split(power) => {
                    let img = power.column_basis();
                    let ker = power.nullspace();
                    let full = Matrix::hstack(f, x.dim(), &[&img, &ker]);
                    let t = full.inverse().expect("Fitting decomposition");
                    let k = img.cols();
                    let (a, ia) = x.submodule(&img);
                    let (b, ib) = x.submodule(&ker);
                    let pa = ModuleMap::new_unchecked(x.clone(), a.clone(), t.block(0, k, 0, x.dim()));
                    let pb = ModuleMap::new_unchecked(x.clone(), b.clone(), t.block(k, x.dim(), 0, x.dim()));
                    split_rec(&a, &inc.compose(&ia), &pa.compose(proj), rng, out)?;
                    split_rec(&b, &inc.compose(&ib), &pb.compose(proj), rng, out)?;
                    return Ok(());
                }
                Fitting::ScalarPlusNilpotent => {}
                Fitting::Unresolved => {
                    if ci < end.len() {
                        unresolved = true;
                    }
                }
            }
        }
        if unresolved {
            return Err(Error::DecompositionInconclusive);
        }
    }
    out.push(Summand { module: x.clone(), inclusion: inc.clone(), projection: proj.clone() });
    Ok(())
}

/// Decides `X ≅ Y` for indecomposable `X`: some basis pair `f: X → Y`,
/// `g: Y → X` has `g ∘ f` invertible, and then `f` is an isomorphism.
pub fn indecomposable_iso(x: &Module, y: &Module) -> Result<Option<ModuleMap>> {
    if x.dim() != y.dim() || x.dim_vector() != y.dim_vector() {
        return Ok(None);
    }
    if x.dim() == 0 {
        return Ok(Some(ModuleMap::zero(x, y)));
    }
    let fs = hom_matrices(x, y)?;
    if fs.is_empty() {
        return Ok(None);
    }
    for fm in &fs {
        if fm.is_invertible() {
            return Ok(Some(ModuleMap::new_unchecked(x.clone(), y.clone(), fm.clone())));
        }
    }
    let gs = hom_matrices(y, x)?;
    for fm in &fs {
        for gm in &gs {
            if (gm * fm).is_invertible() {
                return Ok(Some(ModuleMap::new_unchecked(x.clone(), y.clone(), fm.clone())));
            }
        }
    }
    Ok(None)
}

/// Indecomposable summands grouped up to isomorphism, with multiplicities.
pub fn decompose(m: &Module) -> Result<Vec<(Module, usize)>> {
    let mut groups: Vec<(Module, usize)> = Vec::new();
    for s in decompose_summands(m)? {
        let mut placed = false;
        for (rep, count) in groups.iter_mut() {
            if indecomposable_iso(&s.module, rep)?.is_some() {
                *count += 1;
                placed = true;
                break;
            }
        }
        if !placed {
            groups.push((s.module, 1));
        }
    }
    Ok(groups)
}

/// Matches the summands of `xs` injectively into those of `ys`; returns, per
/// summand of `xs`, the index in `ys` and an isomorphism.
fn match_summands(xs: &[Summand], ys: &[Summand]) -> Result<Option<Vec<(usize, ModuleMap)>>> {
    let mut used = vec![false; ys.len()];
    let mut out = Vec::new();
    for x in xs {
        let mut hit = None;
        for (j, y) in ys.iter().enumerate() {
            if used[j] {
                continue;
            }
            if let Some(iso) = indecomposable_iso(&x.module, &y.module)? {
                hit = Some((j, iso));
                break;
            }
        }
        match hit {
            Some((j, iso)) => {
                used[j] = true;
                out.push((j, iso));
            }
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Maps `i: X → Y`, `p: Y → X` with `p ∘ i = id_X`, when `X` is a direct
/// summand of `Y`.
pub fn find_retraction(x: &Module, y: &Module) -> Result<Option<(ModuleMap, ModuleMap)>> {
    let xs = decompose_summands(x)?;
    let ys = decompose_summands(y)?;
    let Some(matching) = match_summands(&xs, &ys)? else { return Ok(None) };
    let f = x.field();
    let mut i = Matrix::zeros(f, y.dim(), x.dim());
    let mut p = Matrix::zeros(f, x.dim(), y.dim());
    for (xk, (j, iso)) in xs.iter().zip(&matching) {
        let yk = &ys[*j];
        let inv = iso.inverse().expect("matched summands are isomorphic");
        i = &i + &(&(&yk.inclusion.matrix * &iso.matrix) * &xk.projection.matrix);
        p = &p + &(&(&xk.inclusion.matrix * &inv.matrix) * &yk.projection.matrix);
    }
    Ok(Some((
        ModuleMap::new_unchecked(x.clone(), y.clone(), i),
        ModuleMap::new_unchecked(y.clone(), x.clone(), p),
    )))
}

pub fn is_isomorphic(m: &Module, n: &Module) -> Result<IsoDecision> {
    is_isomorphic_with(m, n, &IsoConfig::default())
}

pub fn is_isomorphic_with(m: &Module, n: &Module, cfg: &IsoConfig) -> Result<IsoDecision> {
    if !m.algebra().same_as(n.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    if m.dim() != n.dim() {
        return Ok(IsoDecision::NotIsomorphic(format!("dimensions {} and {}", m.dim(), n.dim())));
    }
    if m.dim_vector() != n.dim_vector() {
        return Ok(IsoDecision::NotIsomorphic("dimension vectors differ".into()));
    }
    if m.dim() == 0 {
        return Ok(IsoDecision::Isomorphic(ModuleMap::zero(m, n)));
    }
    if m.top_vector() != n.top_vector() {
        return Ok(IsoDecision::NotIsomorphic("tops differ".into()));
    }
    if hom_dim(m, m)? != hom_dim(n, m)? || hom_dim(m, n)? != hom_dim(n, n)? {
        return Ok(IsoDecision::NotIsomorphic("Hom dimensions differ".into()));
    }
    let f = m.field();
    let basis = hom_matrices(m, n)?;
    if basis.is_empty() {
        return Ok(IsoDecision::NotIsomorphic("no nonzero maps".into()));
    }
    let wrap = |x: Matrix| IsoDecision::Isomorphic(ModuleMap::new_unchecked(m.clone(), n.clone(), x));
    for b in &basis {
        if b.is_invertible() {
            return Ok(wrap(b.clone()));
        }
    }
    let space = f.cardinality().and_then(|p| p.checked_pow(basis.len() as u32));
    if space.is_some_and(|t| t <= cfg.budget) {
        for coeffs in f.enumerate_vectors(basis.len()).unwrap() {
            let mut acc = Matrix::zeros(f, n.dim(), m.dim());
            for (c, b) in coeffs.iter().zip(&basis) {
                if !c.is_zero() {
                    acc = &acc + &b.scale(c);
                }
            }
            if acc.is_invertible() {
                return Ok(wrap(acc));
            }
        }
        return Ok(IsoDecision::NotIsomorphic("exhaustive search found no invertible map".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.samples {
        let acc = random_combination(f, &basis, &mut rng);
        if acc.is_invertible() {
            return Ok(wrap(acc));
        }
    }
    if !cfg.fallback {
        return Err(Error::BudgetExceeded);
    }
    let ms = decompose_summands(m)?;
    let ns = decompose_summands(n)?;
    if ms.len() != ns.len() {
        return Ok(IsoDecision::NotIsomorphic("different numbers of indecomposable summands".into()));
    }
    let Some(matching) = match_summands(&ms, &ns)? else {
        return Ok(IsoDecision::NotIsomorphic("indecomposable summands do not match".into()));
    };
    let mut w = Matrix::zeros(f, n.dim(), m.dim());
    for (mk, (j, iso)) in ms.iter().zip(&matching) {
        w = &w + &(&(&ns[*j].inclusion.matrix * &iso.matrix) * &mk.projection.matrix);
    }
    Ok(wrap(w))
}

/// An indecomposable is projective iff its top is simple `S_i` and it has
/// the dimension of `P_i`.
pub fn projective_vertex(x: &Module) -> Option<usize> {
    let top = x.top_vector();
    if top.iter().sum::<usize>() != 1 {
        return None;
    }
    let i = top.iter().position(|&t| t == 1)?;
    (Module::projective(x.algebra(), i).dim() == x.dim()).then_some(i)
}

/// `X = X' ⊕ Q` with `Q` projective and `X'` without projective summands.
#[derive(Clone, Debug)]
pub struct Stripped {
    pub core: Module,
    /// `s: X' → X`.
    pub section: ModuleMap,
    /// `r: X → X'`, `r ∘ s = id`.
    pub retraction: ModuleMap,
    /// Multiplicity of each `P_i` in `Q`.
    pub projective: Vec<usize>,
    /// `Q → X` and `X → Q` for the projective complement, `Q = ⊕ P_i^{m_i}`
    /// in vertex order.
    pub q_in: ModuleMap,
    pub q_out: ModuleMap,
}

/// Finds `f: P_i → X`, `g: X → P_i` with `g ∘ f` invertible.
fn projective_summand(alg: &Arc<Algebra>, x: &Module, i: usize, rng: &mut ChaCha8Rng) -> Result<Option<(ModuleMap, ModuleMap)>> {
    let p = Module::projective(alg, i);
    if x.dim() < p.dim() || x.top_vector()[i] == 0 {
        return Ok(None);
    }
    let fs = hom_matrices(&p, x)?;
    let gs = hom_matrices(x, &p)?;
    if fs.is_empty() || gs.is_empty() {
        return Ok(None);
    }
    let f = x.field();
    let wrap = |fm: Matrix, gm: Matrix| {
        (ModuleMap::new_unchecked(p.clone(), x.clone(), fm), ModuleMap::new_unchecked(x.clone(), p.clone(), gm))
    };
    for _ in 0..4 {
        let fm = random_combination(f, &fs, rng);
        let gm = random_combination(f, &gs, rng);
        if (&gm * &fm).is_invertible() {
            return Ok(Some(wrap(fm, gm)));
        }
    }
    for fm in &fs {
        for gm in &gs {
            if (gm * fm).is_invertible() {
                return Ok(Some(wrap(fm.clone(), gm.clone())));
            }
        }
    }
    Ok(None)
}

/// Removes all projective summands of `X`.
pub fn strip_projective(x: &Module) -> Result<Stripped> {
    let alg = x.algebra().clone();
    let f = x.field();
    let nv = alg.num_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5712);
    let mut core = x.clone();
    let mut s = Matrix::identity(f, x.dim()); // core → X
    let mut r = Matrix::identity(f, x.dim()); // X → core
    let mut found: Vec<Vec<(Matrix, Matrix)>> = vec![Vec::new(); nv]; // (P_i → X, X → P_i)
    loop {
        let mut progress = false;
        for i in 0..nv {
            let Some((fm, gm)) = projective_summand(&alg, &core, i, &mut rng)? else { continue };
            // e = f (g f)^{-1} g is an idempotent of core with image ≅ P_i
            let gf_inv = (&gm.matrix * &fm.matrix).inverse().unwrap();
            let proj_p = &gf_inv * &gm.matrix; // core → P_i, proj_p ∘ f = id
            let e = &fm.matrix * &proj_p;
            let comp = &Matrix::identity(f, core.dim()) - &e;
            let kb = comp.column_basis();
            let (next, inc) = core.submodule(&kb);
            let left = kb.left_inverse().unwrap();
            let to_next = &left * &comp; // core → next
            found[i].push((&s * &fm.matrix, &proj_p * &r));
            s = &s * &inc.matrix;
            r = &to_next * &r;
            core = next;
            progress = true;
            break;
        }
        if !progress {
            break;
        }
    }
    let projective: Vec<usize> = found.iter().map(|v| v.len()).collect();
    let q = Module::projective_sum(&alg, &projective);
    let ins: Vec<&Matrix> = found.iter().flatten().map(|(a, _)| a).collect();
    let outs: Vec<&Matrix> = found.iter().flatten().map(|(_, b)| b).collect();
    let q_in = if ins.is_empty() { Matrix::zeros(f, x.dim(), 0) } else { Matrix::hstack(f, x.dim(), &ins) };
    let q_out = if outs.is_empty() { Matrix::zeros(f, 0, x.dim()) } else { Matrix::vstack(f, x.dim(), &outs) };
    Ok(Stripped {
        section: ModuleMap::new_unchecked(core.clone(), x.clone(), s),
        retraction: ModuleMap::new_unchecked(x.clone(), core.clone(), r),
        core,
        projective,
        q_in: ModuleMap::new_unchecked(q.clone(), x.clone(), q_in),
        q_out: ModuleMap::new_unchecked(x.clone(), q, q_out),
    })
}

/// Is `X` projective? (Decides by stripping.)
pub fn is_projective(x: &Module) -> Result<bool> {
    Ok(strip_projective(x)?.core.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraSpec, RelationSpec};

    fn f() -> Field {
        Field::prime(101).unwrap()
    }

    fn mono(s: &str) -> RelationSpec {
        RelationSpec::Monomial(s.into())
    }

    fn truncated(n: usize) -> Arc<Algebra> {
        let rel = mono(&vec!["x"; n].join("*"));
        Algebra::load(&AlgebraSpec::quiver(f(), &["1"], &[("x", "1", "1")], vec![rel], n)).unwrap()
    }

    fn two_loop() -> Arc<Algebra> {
        let rels = ["x*x", "x*y", "y*x", "y*y"].iter().map(|s| mono(s)).collect();
        Algebra::load(&AlgebraSpec::quiver(f(), &["1"], &[("x", "1", "1"), ("y", "1", "1")], rels, 2)).unwrap()
    }

    #[test]
    fn local_algebra_is_indecomposable() {
        let t = truncated(3);
        let d = decompose(&Module::regular(&t)).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].1, 1);
    }

    #[test]
    fn radical_of_two_loop_projective() {
        let a = two_loop();
        let p = Module::projective(&a, 0);
        let (rad, _) = p.submodule(&p.radical_basis());
        let d = decompose(&rad).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].0.dim(), d[0].1), (1, 2));
    }

    #[test]
    fn constructed_sum_splits() {
        let t = truncated(2);
        let s = Module::simple(&t, 0).unwrap();
        let l = Module::regular(&t);
        let m = Module::direct_sum(&t, &[s.clone(), l.clone(), s.clone()]).0;
        let mut d: Vec<(usize, usize)> = decompose(&m).unwrap().iter().map(|(x, k)| (x.dim(), *k)).collect();
        d.sort();
        assert_eq!(d, vec![(1, 2), (2, 1)]);
        let summands = decompose_summands(&m).unwrap();
        let mut total = Matrix::zeros(f(), m.dim(), m.dim());
        for s in &summands {
            assert!((&s.projection.matrix * &s.inclusion.matrix).is_identity());
            assert!(s.inclusion.is_homomorphism() && s.projection.is_homomorphism());
            total = &total + &(&s.inclusion.matrix * &s.projection.matrix);
        }
        assert!(total.is_identity());
    }

    #[test]
    fn syzygy_of_simple_over_dual_numbers() {
        let t = truncated(2);
        let s = Module::simple(&t, 0).unwrap();
        let p = Module::projective(&t, 0);
        let (omega, _) = p.submodule(&p.radical_basis());
        let d = is_isomorphic(&omega, &s).unwrap();
        assert!(d.witness().unwrap().is_isomorphism());
        assert!(d.witness().unwrap().is_homomorphism());
    }

    #[test]
    fn different_vertices_are_not_isomorphic() {
        let a = Algebra::load(&AlgebraSpec::quiver(f(), &["1", "2"], &[("a", "1", "2")], vec![], 2)).unwrap();
        let (s, _) = Module::simples(&a).unwrap();
        assert!(!is_isomorphic(&s[0], &s[1]).unwrap().is_yes());
        assert!(is_isomorphic(&s[0], &s[0]).unwrap().is_yes());
    }

    #[test]
    fn fallback_is_deterministic_and_budget_reported() {
        let t = truncated(2);
        let s = Module::simple(&t, 0).unwrap();
        let l = Module::regular(&t);
        let a = Module::direct_sum(&t, &[s.clone(), l.clone(), s.clone()]).0;
        let b = Module::direct_sum(&t, &[l.clone(), s.clone(), s.clone()]).0;
        let cfg = IsoConfig { budget: 0, samples: 0, seed: 1, fallback: true };
        let w = is_isomorphic_with(&a, &b, &cfg).unwrap();
        assert!(w.witness().unwrap().is_isomorphism() && w.witness().unwrap().is_homomorphism());
        let cfg = IsoConfig { fallback: false, ..cfg };
        assert!(matches!(is_isomorphic_with(&a, &b, &cfg), Err(Error::BudgetExceeded)));
    }

    #[test]
    fn retraction_and_stripping() {
        let t = truncated(2);
        let s = Module::simple(&t, 0).unwrap();
        let l = Module::regular(&t);
        let m = Module::direct_sum(&t, &[l.clone(), s.clone(), l.clone()]).0;
        let (i, p) = find_retraction(&s, &m).unwrap().unwrap();
        assert!(p.compose(&i).matrix.is_identity());
        assert!(i.is_homomorphism() && p.is_homomorphism());
        assert!(find_retraction(&m, &s).unwrap().is_none());
        let st = strip_projective(&m).unwrap();
        assert_eq!(st.core.dim(), 1);
        assert_eq!(st.projective, vec![2]);
        assert!(st.retraction.compose(&st.section).matrix.is_identity());
        assert!(st.section.is_homomorphism() && st.retraction.is_homomorphism());
        assert!(st.q_in.is_homomorphism() && st.q_out.is_homomorphism());
        assert!(st.q_out.compose(&st.q_in).matrix.is_identity());
        assert!(st.q_out.compose(&st.section).matrix.is_zero());
        assert_eq!(projective_vertex(&l), Some(0));
        assert_eq!(projective_vertex(&s), None);
    }
}
