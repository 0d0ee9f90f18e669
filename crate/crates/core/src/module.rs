//! Finite-dimensional left modules as matrix representations, module maps,
//! Hom spaces and the radical filtration.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;

/// Change of basis to one adapted to the vertex idempotents, plus the
/// generator actions written in that basis.
#[derive(Debug)]
struct Adapted {
    basis: Matrix,
    inverse: Matrix,
    offsets: Vec<usize>,
    dims: Vec<usize>,
    gens: Vec<Matrix>,
}

/// A left module, stored as one action matrix per algebra basis element.
#[derive(Clone)]
pub struct Module {
    alg: Arc<Algebra>,
    dim: usize,
    action: Arc<Vec<Matrix>>,
    adapted: Arc<OnceLock<Adapted>>,
}

impl PartialEq for Module {
    fn eq(&self, other: &Module) -> bool {
        self.alg.same_as(&other.alg) && self.dim == other.dim && self.action == other.action
    }
}

impl Eq for Module {}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module(dim {}, dims {:?})", self.dim, self.dim_vector())
    }
}

/// JSON form: `{"dims": [...], "action": {label: row-major matrix}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub dims: Vec<usize>,
    #[serde(default)]
    pub action: BTreeMap<String, Vec<Vec<serde_json::Value>>>,
}

fn parse_entry(field: Field, v: &serde_json::Value) -> Result<Scalar> {
    match v {
        serde_json::Value::String(s) => field.parse(s),
        serde_json::Value::Number(n) => field.parse(&n.to_string()),
        _ => Err(Error::Parse(format!("bad matrix entry {v}"))),
    }
}

fn parse_matrix(field: Field, rows: &[Vec<serde_json::Value>], ncols: Option<usize>) -> Result<Matrix> {
    let r = rows.len();
    let c = rows.first().map(|x| x.len()).or(ncols).unwrap_or(0);
    let mut data = Vec::with_capacity(r * c);
    for row in rows {
        if row.len() != c {
            return Err(Error::Parse("ragged matrix".into()));
        }
        for v in row {
            data.push(parse_entry(field, v)?);
        }
    }
    Ok(Matrix::from_vec(field, r, c, data))
}

impl Module {
    /// Builds a module from one action matrix per basis element and checks
    /// that it is a representation.
    pub fn new(alg: Arc<Algebra>, action: Vec<Matrix>) -> Result<Module> {
        if action.len() != alg.dim() {
            return Err(Error::BadModule(format!("expected {} action matrices, got {}", alg.dim(), action.len())));
        }
        let dim = action.first().map(|m| m.rows()).unwrap_or(0);
        if action.iter().any(|m| m.rows() != dim || m.cols() != dim || m.field() != alg.field()) {
            return Err(Error::BadModule("action matrices must be square of equal size over the algebra field".into()));
        }
        let m = Module::new_unchecked(alg, action);
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(alg: Arc<Algebra>, action: Vec<Matrix>) -> Module {
        let dim = action.first().map(|m| m.rows()).unwrap_or(0);
        Module { alg, dim, action: Arc::new(action), adapted: Arc::new(OnceLock::new()) }
    }

    /// Checks `ρ(1) = id` and `ρ(a)ρ(b) = ρ(ab)` on all basis pairs.
    pub fn validate(&self) -> Result<()> {
        let f = self.field();
        let mut one = Matrix::zeros(f, self.dim, self.dim);
        for &e in self.alg.idempotents() {
            one = &one + &self.action[e];
        }
        if !one.is_identity() {
            return Err(Error::BadModule("the unit does not act as the identity".into()));
        }
        for a in 0..self.alg.dim() {
            for b in 0..self.alg.dim() {
                let lhs = &self.action[a] * &self.action[b];
                let rhs = self.act_element(&self.alg.mul_basis(a, b));
                if lhs != rhs {
                    let l = self.alg.labels();
                    return Err(Error::BadModule(format!("ρ({})ρ({}) ≠ ρ({}·{})", l[a], l[b], l[a], l[b])));
                }
            }
        }
        Ok(())
    }

    pub fn zero(alg: &Arc<Algebra>) -> Module {
        let f = alg.field();
        Module::new_unchecked(alg.clone(), vec![Matrix::zeros(f, 0, 0); alg.dim()])
    }

    /// The regular module `Λ` acting on itself by left multiplication.
    pub fn regular(alg: &Arc<Algebra>) -> Module {
        let action = (0..alg.dim()).map(|a| alg.left_mult(a).clone()).collect();
        Module::new_unchecked(alg.clone(), action)
    }

    /// The indecomposable projective `Λe_i`.
    pub fn projective(alg: &Arc<Algebra>, i: usize) -> Module {
        assert!(i < alg.num_vertices(), "vertex index out of range");
        Module::regular(alg).submodule(&alg.projective_basis(i)).0
    }

    /// `⊕ P_i^{mult[i]}`.
    pub fn projective_sum(alg: &Arc<Algebra>, mult: &[usize]) -> Module {
        let mut parts = Vec::new();
        for (i, &m) in mult.iter().enumerate() {
            for _ in 0..m {
                parts.push(Module::projective(alg, i));
            }
        }
        Module::direct_sum(alg, &parts).0
    }

    /// The simple module at vertex `i` (basic algebras only).
    pub fn simple(alg: &Arc<Algebra>, i: usize) -> Result<Module> {
        if !alg.is_basic() {
            return Err(Error::NonBasicUnsupported);
        }
        let f = alg.field();
        let e = alg.idempotents()[i];
        let action = (0..alg.dim())
            .map(|a| Matrix::from_vec(f, 1, 1, vec![if a == e { f.one() } else { f.zero() }]))
            .collect();
        Ok(Module::new_unchecked(alg.clone(), action))
    }

    /// All simples, and their sum `Λ₀`.
    pub fn simples(alg: &Arc<Algebra>) -> Result<(Vec<Module>, Module)> {
        let s: Vec<Module> = (0..alg.num_vertices()).map(|i| Module::simple(alg, i)).collect::<Result<_>>()?;
        let sum = Module::direct_sum(alg, &s).0;
        Ok((s, sum))
    }

    /// `⊕ S_i^{mult[i]}`.
    pub fn semisimple(alg: &Arc<Algebra>, mult: &[usize]) -> Result<Module> {
        let mut parts = Vec::new();
        for (i, &m) in mult.iter().enumerate() {
            for _ in 0..m {
                parts.push(Module::simple(alg, i)?);
            }
        }
        Ok(Module::direct_sum(alg, &parts).0)
    }

    /// Direct sum with its injections and projections.
    pub fn direct_sum(alg: &Arc<Algebra>, parts: &[Module]) -> (Module, Vec<ModuleMap>, Vec<ModuleMap>) {
        let f = alg.field();
        let action = (0..alg.dim())
            .map(|a| {
                let blocks: Vec<&Matrix> = parts.iter().map(|p| &p.action[a]).collect();
                Matrix::block_diag(f, &blocks)
            })
            .collect();
        let sum = Module::new_unchecked(alg.clone(), action);
        let mut inj = Vec::new();
        let mut proj = Vec::new();
        let mut off = 0;
        for p in parts {
            let mut i = Matrix::zeros(f, sum.dim, p.dim);
            i.set_block(off, 0, &Matrix::identity(f, p.dim));
            proj.push(ModuleMap::new_unchecked(sum.clone(), p.clone(), i.transpose()));
            inj.push(ModuleMap::new_unchecked(p.clone(), sum.clone(), i));
            off += p.dim;
        }
        (sum, inj, proj)
    }

    /// `M^r`.
    pub fn power(&self, r: usize) -> Module {
        Module::direct_sum(&self.alg, &vec![self.clone(); r]).0
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn field(&self) -> Field {
        self.alg.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn action(&self, a: usize) -> &Matrix {
        &self.action[a]
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.action
    }

    /// Action of an algebra element given in coordinates.
    pub fn act_element(&self, coords: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.field(), self.dim, self.dim);
        for (a, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                m = &m + &self.action[a].scale(c);
            }
        }
        m
    }

    /// `dim e_i M` for each vertex.
    pub fn dim_vector(&self) -> Vec<usize> {
        self.adapted().dims.clone()
    }

    fn adapted(&self) -> &Adapted {
        self.adapted.get_or_init(|| {
            let f = self.field();
            let mut parts = Vec::new();
            let mut offsets = Vec::new();
            let mut dims = Vec::new();
            let mut off = 0;
            for &e in self.alg.idempotents() {
                let img = self.action[e].column_basis();
                offsets.push(off);
                dims.push(img.cols());
                off += img.cols();
                parts.push(img);
            }
            let refs: Vec<&Matrix> = parts.iter().collect();
            let basis = Matrix::hstack(f, self.dim, &refs);
            let inverse = basis.inverse().expect("vertex idempotents split the module");
            let gens = self
                .alg
                .generators()
                .iter()
                .map(|&g| &(&inverse * &self.action[g]) * &basis)
                .collect();
            Adapted { basis, inverse, offsets, dims, gens }
        })
    }

    /// Submodule with the given basis (columns spanning an invariant
    /// subspace), together with its inclusion.
    pub fn submodule(&self, basis: &Matrix) -> (Module, ModuleMap) {
        let f = self.field();
        if basis.cols() == 0 {
            let z = Module::zero(&self.alg);
            let inc = ModuleMap::new_unchecked(z.clone(), self.clone(), Matrix::zeros(f, self.dim, 0));
            return (z, inc);
        }
        let left = basis.left_inverse().expect("submodule basis must be independent");
        let action = self.action.iter().map(|a| &(&left * a) * basis).collect();
        let sub = Module::new_unchecked(self.alg.clone(), action);
        let inc = ModuleMap::new_unchecked(sub.clone(), self.clone(), basis.clone());
        (sub, inc)
    }

    /// Quotient by the submodule spanned by `basis`, with the projection.
    pub fn quotient(&self, basis: &Matrix) -> (Module, ModuleMap) {
        let f = self.field();
        let basis = basis.column_basis();
        let comp = basis.complement_columns();
        let full = Matrix::hstack(f, self.dim, &[&basis, &comp]);
        let t = full.inverse().expect("basis plus complement is invertible");
        let pr = t.block(basis.cols(), self.dim, 0, self.dim);
        let action = self.action.iter().map(|a| &(&pr * a) * &comp).collect();
        let q = Module::new_unchecked(self.alg.clone(), action);
        let map = ModuleMap::new_unchecked(self.clone(), q.clone(), pr);
        (q, map)
    }

    /// Smallest invariant subspace containing the columns of `vectors`.
    pub fn generated(&self, vectors: &Matrix) -> Matrix {
        let f = self.field();
        let mut cur = vectors.column_basis();
        loop {
            let mut parts = vec![cur.clone()];
            for &g in self.alg.generators() {
                parts.push(&self.action[g] * &cur);
            }
            let refs: Vec<&Matrix> = parts.iter().collect();
            let next = Matrix::hstack(f, self.dim, &refs).column_basis();
            if next.cols() == cur.cols() {
                return next;
            }
            cur = next;
        }
    }

    /// Basis of `JM`.
    pub fn radical_basis(&self) -> Matrix {
        let f = self.field();
        let parts: Vec<&Matrix> = self.alg.radical().iter().map(|&r| &self.action[r]).collect();
        if parts.is_empty() {
            return Matrix::zeros(f, self.dim, 0);
        }
        Matrix::hstack(f, self.dim, &parts).column_basis()
    }

    /// `M/JM` and the projection onto it.
    pub fn top(&self) -> (Module, ModuleMap) {
        self.quotient(&self.radical_basis())
    }

    /// Multiplicities of the simples in the top.
    pub fn top_vector(&self) -> Vec<usize> {
        self.top().0.dim_vector()
    }

    pub fn is_semisimple(&self) -> bool {
        self.radical_basis().cols() == 0
    }

    /// The radical filtration `M = R_0 ⊃ JM = R_1 ⊃ … ⊃ R_t = 0`.
    pub fn radical_series(&self) -> RadicalSeries {
        let f = self.field();
        let mut layers = vec![Matrix::identity(f, self.dim)];
        loop {
            let cur = layers.last().unwrap();
            if cur.cols() == 0 {
                break;
            }
            let parts: Vec<Matrix> = self.alg.radical().iter().map(|&r| &self.action[r] * cur).collect();
            let refs: Vec<&Matrix> = parts.iter().collect();
            let next = if refs.is_empty() {
                Matrix::zeros(f, self.dim, 0)
            } else {
                Matrix::hstack(f, self.dim, &refs).column_basis()
            };
            layers.push(next);
        }
        let mut quotients = Vec::new();
        for w in layers.windows(2) {
            let (big, _) = self.submodule(&w[0]);
            let small_in_big = w[0].left_inverse().map(|l| &l * &w[1]).unwrap_or_else(|| Matrix::zeros(f, 0, 0));
            let (q, _) = big.quotient(&small_in_big);
            quotients.push(q.dim_vector());
        }
        RadicalSeries { layers, quotients }
    }

    /// Parses the JSON module format. In quiver mode, actions missing from
    /// `action` are derived: idempotents project onto the vertex blocks and
    /// paths act as products of arrows. Arrow matrices may be given either
    /// as full `dim × dim` matrices or as `dims[t] × dims[s]` blocks.
    pub fn from_spec(alg: &Arc<Algebra>, spec: &ModuleSpec) -> Result<Module> {
        let f = alg.field();
        if spec.dims.len() != alg.num_vertices() {
            return Err(Error::BadModule(format!("expected {} vertex dimensions", alg.num_vertices())));
        }
        let dim: usize = spec.dims.iter().sum();
        let offsets: Vec<usize> = spec.dims.iter().scan(0, |s, &d| { let o = *s; *s += d; Some(o) }).collect();
        for l in spec.action.keys() {
            if alg.label_index(l).is_none() {
                return Err(Error::BadModule(format!("unknown basis label {l:?}")));
            }
        }
        let mut action: Vec<Option<Matrix>> = vec![None; alg.dim()];
        for (b, slot) in action.iter_mut().enumerate() {
            let label = &alg.labels()[b];
            let Some(rows) = spec.action.get(label) else { continue };
            let m = parse_matrix(f, rows, None)?;
            if m.rows() == dim && m.cols() == dim {
                *slot = Some(m);
            } else if let Some((t, s)) = alg.frame(b) {
                if m.rows() != spec.dims[t] || (m.cols() != spec.dims[s] && !(m.rows() == 0)) {
                    return Err(Error::BadModule(format!("matrix for {label:?} has the wrong shape")));
                }
                let mut full = Matrix::zeros(f, dim, dim);
                if m.rows() > 0 {
                    full.set_block(offsets[t], offsets[s], &m);
                }
                *slot = Some(full);
            } else {
                return Err(Error::BadModule(format!("matrix for {label:?} has the wrong shape")));
            }
        }
        for (v, &e) in alg.idempotents().iter().enumerate() {
            if action[e].is_none() {
                let mut m = Matrix::zeros(f, dim, dim);
                for k in 0..spec.dims[v] {
                    m[(offsets[v] + k, offsets[v] + k)] = f.one();
                }
                action[e] = Some(m);
            }
        }
        for b in 0..alg.dim() {
            if action[b].is_some() {
                continue;
            }
            let label = &alg.labels()[b];
            let parts: Vec<&str> = label.split('*').collect();
            if parts.len() < 2 {
                if alg.frame(b).is_some() && alg.loewy_level(b) > 0 {
                    // an arrow with no matrix acts by zero
                    action[b] = Some(Matrix::zeros(f, dim, dim));
                    continue;
                }
                return Err(Error::BadModule(format!("missing action for {label:?}")));
            }
            let mut m = Matrix::identity(f, dim);
            for p in parts {
                let i = alg.label_index(p).ok_or_else(|| Error::BadModule(format!("cannot derive action for {label:?}")))?;
                let a = match &action[i] {
                    Some(a) => a.clone(),
                    None => Matrix::zeros(f, dim, dim),
                };
                if action[i].is_none() {
                    action[i] = Some(a.clone());
                }
                m = &a * &m;
            }
            action[b] = Some(m);
        }
        let action: Vec<Matrix> = action.into_iter().map(|m| m.unwrap()).collect();
        let module = Module::new(alg.clone(), action)?;
        if module.dim_vector() != spec.dims {
            return Err(Error::BadModule("idempotent ranks disagree with `dims`".into()));
        }
        Ok(module)
    }

    pub fn to_spec(&self) -> ModuleSpec {
        let action = self
            .alg
            .labels()
            .iter()
            .zip(self.action.iter())
            .map(|(l, m)| {
                let rows = m
                    .rows_as_strings()
                    .into_iter()
                    .map(|r| r.into_iter().map(serde_json::Value::String).collect())
                    .collect();
                (l.clone(), rows)
            })
            .collect();
        ModuleSpec { dims: self.dim_vector(), action }
    }
}

/// The radical filtration: `layers[i]` is a basis of `J^i M` (as columns in
/// `M`), `quotients[i]` the dimension vector of `J^i M / J^{i+1} M`.
#[derive(Clone, Debug)]
pub struct RadicalSeries {
    pub layers: Vec<Matrix>,
    pub quotients: Vec<Vec<usize>>,
}

/// A module homomorphism `source → target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub source: Module,
    pub target: Module,
    pub matrix: Matrix,
}

impl ModuleMap {
    pub fn new(source: Module, target: Module, matrix: Matrix) -> Result<ModuleMap> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::BadModule("map matrix has the wrong shape".into()));
        }
        if !source.algebra().same_as(target.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        let m = ModuleMap { source, target, matrix };
        if !m.is_homomorphism() {
            return Err(Error::BadModule("matrix does not intertwine the actions".into()));
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(source: Module, target: Module, matrix: Matrix) -> ModuleMap {
        debug_assert_eq!((matrix.rows(), matrix.cols()), (target.dim(), source.dim()));
        ModuleMap { source, target, matrix }
    }

    pub fn identity(m: &Module) -> ModuleMap {
        ModuleMap::new_unchecked(m.clone(), m.clone(), Matrix::identity(m.field(), m.dim()))
    }

    pub fn zero(source: &Module, target: &Module) -> ModuleMap {
        let f = source.field();
        ModuleMap::new_unchecked(source.clone(), target.clone(), Matrix::zeros(f, target.dim(), source.dim()))
    }

    /// `f ρ_M(a) = ρ_N(a) f` for every basis element `a`.
    pub fn is_homomorphism(&self) -> bool {
        let alg = self.source.algebra();
        (0..alg.dim()).all(|a| &self.matrix * self.source.action(a) == self.target.action(a) * &self.matrix)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleMap) -> ModuleMap {
        assert_eq!(other.target.dim(), self.source.dim());
        ModuleMap::new_unchecked(other.source.clone(), self.target.clone(), &self.matrix * &other.matrix)
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap::new_unchecked(self.source.clone(), self.target.clone(), &self.matrix + &other.matrix)
    }

    pub fn scale(&self, s: &Scalar) -> ModuleMap {
        ModuleMap::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.scale(s))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.dim() == self.target.dim() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<ModuleMap> {
        let inv = self.matrix.inverse()?;
        Some(ModuleMap::new_unchecked(self.target.clone(), self.source.clone(), inv))
    }

    /// Kernel with its inclusion into the source.
    pub fn kernel(&self) -> (Module, ModuleMap) {
        self.source.submodule(&self.matrix.nullspace())
    }

    /// Image with its inclusion into the target.
    pub fn image(&self) -> (Module, ModuleMap) {
        self.target.submodule(&self.matrix.column_basis())
    }

    pub fn cokernel(&self) -> (Module, ModuleMap) {
        self.target.quotient(&self.matrix.column_basis())
    }
}

/// A basis of `Hom_Λ(M, N)`.
pub fn hom_space(m: &Module, n: &Module) -> Result<Vec<ModuleMap>> {
    Ok(hom_matrices(m, n)?.into_iter().map(|x| ModuleMap::new_unchecked(m.clone(), n.clone(), x)).collect())
}

pub fn hom_dim(m: &Module, n: &Module) -> Result<usize> {
    Ok(hom_matrices(m, n)?.len())
}

/// Basis of `Hom_Λ(M, N)` as bare matrices. The intertwiner system is
/// solved in bases adapted to the vertex idempotents, so the unknowns are
/// only the vertex blocks and only the generators of `J` contribute
/// equations.
pub fn hom_matrices(m: &Module, n: &Module) -> Result<Vec<Matrix>> {
    if !m.algebra().same_as(n.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    let f = m.field();
    let alg = m.algebra();
    let (am, an) = (m.adapted(), n.adapted());
    let nv = alg.num_vertices();
    // unknown X_v is an an.dims[v] × am.dims[v] block
    let mut uoff = Vec::with_capacity(nv);
    let mut total = 0;
    for v in 0..nv {
        uoff.push(total);
        total += an.dims[v] * am.dims[v];
    }
    if total == 0 {
        return Ok(vec![]);
    }
    let vertex_of = |offsets: &[usize], dims: &[usize], idx: usize| -> usize {
        (0..nv).find(|&v| idx >= offsets[v] && idx < offsets[v] + dims[v]).unwrap()
    };
    let mut rows: Vec<Scalar> = Vec::new();
    let mut nrows = 0;
    for (gi, &g) in alg.generators().iter().enumerate() {
        if alg.idempotents().contains(&g) {
            continue;
        }
        let (gm, gn) = (&am.gens[gi], &an.gens[gi]);
        let (row_range, col_range) = match alg.frame(g) {
            Some((t, s)) => (
                (an.offsets[t]..an.offsets[t] + an.dims[t]),
                (am.offsets[s]..am.offsets[s] + am.dims[s]),
            ),
            None => (0..n.dim(), 0..m.dim()),
        };
        for r in row_range.clone() {
            let vr = vertex_of(&an.offsets, &an.dims, r);
            let rr = r - an.offsets[vr];
            for c in col_range.clone() {
                let vc = vertex_of(&am.offsets, &am.dims, c);
                let cc = c - am.offsets[vc];
                // (X gm)[r,c] - (gn X)[r,c]
                let mut row = vec![f.zero(); total];
                let mut nonzero = false;
                // X[r,k] nonzero only for k in vertex vr of M
                for k in am.offsets[vr]..am.offsets[vr] + am.dims[vr] {
                    let a = &gm[(k, c)];
                    if a.is_zero() {
                        continue;
                    }
                    let u = uoff[vr] + rr * am.dims[vr] + (k - am.offsets[vr]);
                    row[u] = &row[u] + a;
                    nonzero = true;
                }
                for k in an.offsets[vc]..an.offsets[vc] + an.dims[vc] {
                    let a = &gn[(r, k)];
                    if a.is_zero() {
                        continue;
                    }
                    let u = uoff[vc] + (k - an.offsets[vc]) * am.dims[vc] + cc;
                    row[u] = &row[u] - a;
                    nonzero = true;
                }
                if nonzero {
                    rows.extend(row);
                    nrows += 1;
                }
            }
        }
    }
    let sys = Matrix::from_vec(f, nrows, total, rows);
    let ker = sys.nullspace();
    let mut out = Vec::with_capacity(ker.cols());
    for j in 0..ker.cols() {
        let mut x = Matrix::zeros(f, n.dim(), m.dim());
        for v in 0..nv {
            for r in 0..an.dims[v] {
                for c in 0..am.dims[v] {
                    x[(an.offsets[v] + r, am.offsets[v] + c)] = ker[(uoff[v] + r * am.dims[v] + c, j)].clone();
                }
            }
        }
        out.push(&(&an.basis * &x) * &am.inverse);
    }
    Ok(out)
}
