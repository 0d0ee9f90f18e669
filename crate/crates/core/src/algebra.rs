//! Finite-dimensional algebras, loaded from a bound quiver presentation or
//! from raw structure constants.
//!
//! Path convention: the path label `"x*y"` means `x` first, then `y`. On a
//! left module an arrow `x: i -> j` maps the vertex-`i` component to the
//! vertex-`j` component, so the algebra product `b·a` of two paths is the
//! path "`a` then `b`".

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowSpec {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverSpec {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowSpec>,
}

/// A relation: either a single path (`"x*x"`) or a list of `[coeff, path]` terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RelationSpec {
    Monomial(String),
    Terms(Vec<(String, String)>),
}

/// Raw structure constants. `table` lists the nonzero products as
/// `[a, b, [[coeff, c], …]]`, meaning `a·b = Σ coeff·c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSpec {
    pub basis: Vec<String>,
    pub idempotents: Vec<String>,
    pub semisimple: Vec<String>,
    pub table: Vec<(String, String, Vec<(String, String)>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub field: Field,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quiver: Option<QuiverSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<RelationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nilpotency_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<RawSpec>,
}

impl AlgebraSpec {
    pub fn quiver(
        field: Field,
        vertices: &[&str],
        arrows: &[(&str, &str, &str)],
        relations: Vec<RelationSpec>,
        bound: usize,
    ) -> AlgebraSpec {
        AlgebraSpec {
            field,
            quiver: Some(QuiverSpec {
                vertices: vertices.iter().map(|v| v.to_string()).collect(),
                arrows: arrows
                    .iter()
                    .map(|(n, s, t)| ArrowSpec { name: n.to_string(), source: s.to_string(), target: t.to_string() })
                    .collect(),
            }),
            relations,
            nilpotency_bound: Some(bound),
            raw: None,
        }
    }
}

/// A finite-dimensional basic-or-not algebra with a fixed ordered basis.
#[derive(Debug, PartialEq, Eq)]
pub struct Algebra {
    field: Field,
    labels: Vec<String>,
    vertices: Vec<String>,
    idempotents: Vec<usize>,
    semisimple: Vec<usize>,
    radical: Vec<usize>,
    /// `left_mult[a]` is the matrix of `b ↦ a·b` in the basis.
    left_mult: Vec<Matrix>,
    loewy: Vec<usize>,
    loewy_length: usize,
    /// `(target, source)` vertices of each basis element, when it is
    /// homogeneous (`e_t · b · e_s = b`).
    frames: Vec<Option<(usize, usize)>>,
    generators: Vec<usize>,
    basic: bool,
}

fn parse_path(
    s: &str,
    arrow_index: &BTreeMap<&str, usize>,
    arrows: &[(usize, usize)],
) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in s.split('*') {
        let part = part.trim();
        let &a = arrow_index.get(part).ok_or_else(|| Error::Parse(format!("unknown arrow {part:?} in {s:?}")))?;
        if let Some(&prev) = out.last() {
            let prev: usize = prev;
            if arrows[prev].1 != arrows[a].0 {
                return Err(Error::Parse(format!("path {s:?} is not composable")));
            }
        }
        out.push(a);
    }
    Ok(out)
}

impl Algebra {
    pub fn load(spec: &AlgebraSpec) -> Result<Arc<Algebra>> {
        spec.field.validate()?;
        let alg = match (&spec.quiver, &spec.raw) {
            (Some(q), None) => {
                let bound = spec
                    .nilpotency_bound
                    .ok_or_else(|| Error::Parse("quiver presentation needs nilpotency_bound".into()))?;
                Self::from_quiver(spec.field, q, &spec.relations, bound)?
            }
            (None, Some(raw)) => Self::from_raw(spec.field, raw)?,
            _ => return Err(Error::Parse("exactly one of `quiver` or `raw` must be given".into())),
        };
        alg.check_associative()?;
        Ok(Arc::new(alg))
    }

    fn from_quiver(field: Field, q: &QuiverSpec, relations: &[RelationSpec], bound: usize) -> Result<Algebra> {
        if bound == 0 {
            return Err(Error::Parse("nilpotency_bound must be positive".into()));
        }
        let vindex: BTreeMap<&str, usize> = q.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        if vindex.len() != q.vertices.len() || q.vertices.is_empty() {
            return Err(Error::Parse("vertex names must be distinct and nonempty".into()));
        }
        let mut arrows = Vec::new();
        let mut arrow_index = BTreeMap::new();
        for (i, a) in q.arrows.iter().enumerate() {
            let s = *vindex.get(a.source.as_str()).ok_or_else(|| Error::Parse(format!("unknown vertex {:?}", a.source)))?;
            let t = *vindex.get(a.target.as_str()).ok_or_else(|| Error::Parse(format!("unknown vertex {:?}", a.target)))?;
            if a.name.contains('*') || a.name.starts_with("e_") || arrow_index.insert(a.name.as_str(), i).is_some() {
                return Err(Error::Parse(format!("bad or duplicate arrow name {:?}", a.name)));
            }
            arrows.push((s, t));
        }

        // all nontrivial paths of length <= bound
        let mut paths: Vec<Vec<usize>> = Vec::new();
        let mut frontier: Vec<Vec<usize>> = (0..arrows.len()).map(|a| vec![a]).collect();
        for _ in 0..bound {
            let mut next = Vec::new();
            for p in &frontier {
                let end = arrows[*p.last().unwrap()].1;
                for (a, &(s, _)) in arrows.iter().enumerate() {
                    if s == end {
                        let mut np = p.clone();
                        np.push(a);
                        next.push(np);
                    }
                }
            }
            paths.append(&mut frontier);
            frontier = next;
        }
        // column order: longest first, then lexicographically largest first
        paths.sort_by(|a, b| b.len().cmp(&a.len()).then(b.cmp(a)));
        let col: BTreeMap<Vec<usize>, usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let src = |p: &[usize]| arrows[p[0]].0;
        let tgt = |p: &[usize]| arrows[*p.last().unwrap()].1;

        let mut rels: Vec<Vec<(Scalar, Vec<usize>)>> = Vec::new();
        for r in relations {
            let terms: Vec<(String, String)> = match r {
                RelationSpec::Monomial(p) => vec![("1".into(), p.clone())],
                RelationSpec::Terms(t) => t.clone(),
            };
            let mut parsed = Vec::new();
            for (c, p) in &terms {
                if p.trim().starts_with("e_") {
                    return Err(Error::NonAdmissible(p.clone()));
                }
                let path = parse_path(p, &arrow_index, &arrows)?;
                if path.len() < 2 {
                    return Err(Error::NonAdmissible(p.clone()));
                }
                parsed.push((field.parse(c)?, path));
            }
            if let Some((_, first)) = parsed.first() {
                let (s0, t0) = (src(first), tgt(first));
                if parsed.iter().any(|(_, p)| src(p) != s0 || tgt(p) != t0) {
                    return Err(Error::Parse("relation terms must share source and target".into()));
                }
            }
            rels.push(parsed);
        }

        // spanning set of the ideal, truncated at length `bound`
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        words.extend(paths.iter().cloned());
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for r in &rels {
            if r.is_empty() {
                continue;
            }
            let (rs, rt) = (src(&r[0].1), tgt(&r[0].1));
            let minlen = r.iter().map(|(_, p)| p.len()).min().unwrap();
            for u in &words {
                if !u.is_empty() && tgt(u) != rs {
                    continue;
                }
                for v in &words {
                    if !v.is_empty() && src(v) != rt {
                        continue;
                    }
                    if u.len() + v.len() + minlen > bound {
                        continue;
                    }
                    let mut row = vec![field.zero(); paths.len()];
                    for (c, p) in r {
                        let full: Vec<usize> = u.iter().chain(p).chain(v).copied().collect();
                        if full.len() <= bound {
                            let i = col[&full];
                            row[i] = &row[i] + c;
                        }
                    }
                    rows.push(row);
                }
            }
        }
        // paths of length exactly `bound` are forced into the ideal only
        // if they already lie in the relation span
        let ideal = if rows.is_empty() {
            Matrix::zeros(field, 0, paths.len())
        } else {
            let n = rows.len();
            Matrix::from_vec(field, n, paths.len(), rows.into_iter().flatten().collect())
        };
        let ech = ideal.echelon();
        for (i, p) in paths.iter().enumerate() {
            if p.len() == bound && !ech.pivots.contains(&i) {
                return Err(Error::NotFiniteDimensional { bound, path: path_label(p, &q.arrows) });
            }
        }
        let mut reduced: Vec<Vec<usize>> =
            (0..paths.len()).filter(|i| !ech.pivots.contains(i)).map(|i| paths[i].clone()).collect();
        reduced.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));

        let nv = q.vertices.len();
        let dim = nv + reduced.len();
        let mut labels: Vec<String> = q.vertices.iter().map(|v| format!("e_{v}")).collect();
        labels.extend(reduced.iter().map(|p| path_label(p, &q.arrows)));
        let basis_index: BTreeMap<Vec<usize>, usize> =
            reduced.iter().cloned().enumerate().map(|(i, p)| (p, nv + i)).collect();

        // coordinates of an arbitrary path (possibly longer than `bound`)
        let coords_of = |p: &[usize]| -> Vec<Scalar> {
            let mut v = vec![field.zero(); dim];
            if p.len() >= bound {
                return v;
            }
            if let Some(&i) = basis_index.get(p) {
                v[i] = field.one();
                return v;
            }
            let c = col[p];
            let row = ech.pivots.iter().position(|&x| x == c).expect("non-basis path is a pivot");
            for (j, other) in paths.iter().enumerate() {
                if j == c || ech.rref[(row, j)].is_zero() {
                    continue;
                }
                let bi = basis_index[other];
                v[bi] = -&ech.rref[(row, j)];
            }
            v
        };

        // basis elements as (source, target, path); idempotents have empty path
        let elem = |i: usize| -> (usize, usize, Vec<usize>) {
            if i < nv {
                (i, i, vec![])
            } else {
                let p = &reduced[i - nv];
                (src(p), tgt(p), p.clone())
            }
        };
        let mut left_mult = vec![Matrix::zeros(field, dim, dim); dim];
        for (a, lm) in left_mult.iter_mut().enumerate() {
            let (sa, _, pa) = elem(a);
            for b in 0..dim {
                let (sb, tb, pb) = elem(b);
                // a·b = "b then a"
                if tb != sa {
                    continue;
                }
                let prod: Vec<usize> = pb.iter().chain(&pa).copied().collect();
                let v = if prod.is_empty() {
                    let mut v = vec![field.zero(); dim];
                    v[sb] = field.one();
                    v
                } else {
                    coords_of(&prod)
                };
                for (c, x) in v.into_iter().enumerate() {
                    lm[(c, b)] = x;
                }
            }
        }
        let loewy: Vec<usize> = (0..dim).map(|i| elem(i).2.len()).collect();
        let frames = (0..dim).map(|i| { let (s, t, _) = elem(i); Some((t, s)) }).collect();
        let mut alg = Algebra {
            field,
            labels,
            vertices: q.vertices.clone(),
            idempotents: (0..nv).collect(),
            semisimple: (0..nv).collect(),
            radical: (nv..dim).collect(),
            left_mult,
            loewy,
            loewy_length: 0,
            frames,
            generators: Vec::new(),
            basic: true,
        };
        alg.finish()?;
        Ok(alg)
    }

    fn from_raw(field: Field, raw: &RawSpec) -> Result<Algebra> {
        let dim = raw.basis.len();
        let index: BTreeMap<&str, usize> = raw.basis.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        if index.len() != dim || dim == 0 {
            return Err(Error::Parse("basis labels must be distinct and nonempty".into()));
        }
        let look = |l: &str| index.get(l).copied().ok_or_else(|| Error::Parse(format!("unknown basis label {l:?}")));
        let mut left_mult = vec![Matrix::zeros(field, dim, dim); dim];
        for (a, b, terms) in &raw.table {
            let (a, b) = (look(a)?, look(b)?);
            for (c, l) in terms {
                let ci = look(l)?;
                let v = &left_mult[a][(ci, b)] + &field.parse(c)?;
                left_mult[a][(ci, b)] = v;
            }
        }
        let idempotents: Vec<usize> = raw.idempotents.iter().map(|l| look(l)).collect::<Result<_>>()?;
        let semisimple: Vec<usize> = raw.semisimple.iter().map(|l| look(l)).collect::<Result<_>>()?;
        if idempotents.is_empty() {
            return Err(Error::BadIdempotents("no idempotents given".into()));
        }
        let unit_vec = |i: usize| {
            let mut v = vec![field.zero(); dim];
            v[i] = field.one();
            v
        };
        for &e in &idempotents {
            for &f in &idempotents {
                let prod = left_mult[e].column_entries(f);
                let want = if e == f { unit_vec(e) } else { vec![field.zero(); dim] };
                if prod != want {
                    return Err(Error::BadIdempotents(format!(
                        "{}·{} is not {}",
                        raw.basis[e],
                        raw.basis[f],
                        if e == f { "idempotent" } else { "zero" }
                    )));
                }
            }
        }
        let mut one = Matrix::zeros(field, dim, dim);
        for &e in &idempotents {
            one = &one + &left_mult[e];
        }
        if !one.is_identity() {
            return Err(Error::BadIdempotents("idempotents do not sum to the unit".into()));
        }
        for &e in &idempotents {
            if !semisimple.contains(&e) {
                return Err(Error::SplitFailure("idempotents must lie in the semisimple part".into()));
            }
        }
        let radical: Vec<usize> = (0..dim).filter(|i| !semisimple.contains(i)).collect();
        let in_span = |set: &[usize], v: &[Scalar]| v.iter().enumerate().all(|(i, x)| x.is_zero() || set.contains(&i));
        for &a in &semisimple {
            for &b in &semisimple {
                if !in_span(&semisimple, &left_mult[a].column_entries(b)) {
                    return Err(Error::SplitFailure(format!(
                        "{}·{} leaves the semisimple part",
                        raw.basis[a], raw.basis[b]
                    )));
                }
            }
        }
        for a in 0..dim {
            for &r in &radical {
                if !in_span(&radical, &left_mult[a].column_entries(r)) || !in_span(&radical, &left_mult[r].column_entries(a)) {
                    return Err(Error::SplitFailure("radical part is not a two-sided ideal".into()));
                }
            }
        }
        let mut alg = Algebra {
            field,
            labels: raw.basis.clone(),
            vertices: idempotents.iter().map(|&e| raw.basis[e].clone()).collect(),
            basic: semisimple.len() == idempotents.len(),
            idempotents,
            semisimple,
            radical,
            left_mult,
            loewy: vec![0; dim],
            loewy_length: 0,
            frames: vec![None; dim],
            generators: Vec::new(),
        };
        // frames
        for b in 0..dim {
            for (t, &et) in alg.idempotents.iter().enumerate() {
                for (s, &es) in alg.idempotents.iter().enumerate() {
                    let eb = alg.left_mult[et].column_entries(b);
                    let ebe = alg.mul_vec(&eb, &unit_vec(es));
                    if ebe == unit_vec(b) {
                        alg.frames[b] = Some((t, s));
                    }
                }
            }
        }
        // loewy levels from the powers of J
        let powers = alg.radical_powers()?;
        for b in 0..dim {
            let v = Matrix::column_vector(field, unit_vec(b));
            alg.loewy[b] = powers.iter().rposition(|p| p.cols() > 0 && p.spans(&v)).unwrap_or(0);
        }
        alg.finish()?;
        Ok(alg)
    }

    /// Bases of `J^0 = Λ, J^1, …` down to (excluding) zero.
    fn radical_powers(&self) -> Result<Vec<Matrix>> {
        let dim = self.dim();
        let field = self.field;
        let mut powers = vec![Matrix::identity(field, dim)];
        let jbasis = Matrix::identity(field, dim).select_columns(&self.radical);
        let mut cur = jbasis.clone();
        for _ in 0..=dim {
            if cur.cols() == 0 {
                return Ok(powers);
            }
            powers.push(cur.clone());
            let mut cols = Vec::new();
            for &r in &self.radical {
                cols.push(&self.left_mult[r] * &cur);
            }
            let refs: Vec<&Matrix> = cols.iter().collect();
            cur = Matrix::hstack(field, dim, &refs).column_basis();
        }
        Err(Error::NotFiniteDimensional { bound: dim, path: "radical is not nilpotent".into() })
    }

    fn finish(&mut self) -> Result<()> {
        let powers = self.radical_powers()?;
        self.loewy_length = powers.len();
        // generators: idempotents plus a lift of a basis of J/J²
        let dim = self.dim();
        let mut gens = self.idempotents.clone();
        let mut span = if powers.len() > 2 { powers[2].clone() } else { Matrix::zeros(self.field, dim, 0) };
        for &r in &self.radical {
            let v = Matrix::unit_vector(self.field, dim, r);
            if span.cols() == 0 || !span.spans(&v) {
                gens.push(r);
                span = Matrix::hstack(self.field, dim, &[&span, &v]);
            }
        }
        for &s in &self.semisimple {
            if !gens.contains(&s) {
                gens.push(s);
            }
        }
        self.generators = gens;
        Ok(())
    }

    fn check_associative(&self) -> Result<()> {
        let dim = self.dim();
        for a in 0..dim {
            for b in 0..dim {
                let ab = self.left_mult[a].column_entries(b);
                let lab = self.left_of(&ab);
                let lhs = &lab;
                let rhs = &self.left_mult[a] * &self.left_mult[b];
                if *lhs != rhs {
                    let c = (0..dim).find(|&c| lhs.column(c) != rhs.column(c)).unwrap_or(0);
                    return Err(Error::NotAssociative(
                        self.labels[a].clone(),
                        self.labels[b].clone(),
                        self.labels[c].clone(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, l: &str) -> Option<usize> {
        self.labels.iter().position(|x| x == l)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.idempotents.len()
    }

    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    pub fn semisimple_part(&self) -> &[usize] {
        &self.semisimple
    }

    pub fn radical(&self) -> &[usize] {
        &self.radical
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn is_basic(&self) -> bool {
        self.basic
    }

    /// Smallest `N` with `J^N = 0`.
    pub fn loewy_length(&self) -> usize {
        self.loewy_length
    }

    pub fn loewy_level(&self, b: usize) -> usize {
        self.loewy[b]
    }

    pub fn is_radical_square_zero(&self) -> bool {
        self.loewy_length <= 2
    }

    /// `(target, source)` of a homogeneous basis element.
    pub fn frame(&self, b: usize) -> Option<(usize, usize)> {
        self.frames[b]
    }

    pub fn left_mult(&self, a: usize) -> &Matrix {
        &self.left_mult[a]
    }

    /// Left multiplication by an arbitrary element given in coordinates.
    pub fn left_of(&self, coords: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.dim(), self.dim());
        for (a, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                m = &m + &self.left_mult[a].scale(c);
            }
        }
        m
    }

    /// Coordinates of the product of two basis elements.
    pub fn mul_basis(&self, a: usize, b: usize) -> Vec<Scalar> {
        self.left_mult[a].column_entries(b)
    }

    pub fn mul_vec(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let m = self.left_of(a);
        (&m * &Matrix::column_vector(self.field, b.to_vec())).column_entries(0)
    }

    /// Basis of `Λ e_i` (as columns, in algebra coordinates).
    pub fn projective_basis(&self, i: usize) -> Matrix {
        let dim = self.dim();
        let e = self.idempotents[i];
        // right multiplication by e: column b is b·e
        let mut right = Matrix::zeros(self.field, dim, dim);
        for b in 0..dim {
            for (c, x) in self.mul_basis(b, e).into_iter().enumerate() {
                right[(c, b)] = x;
            }
        }
        right.column_basis()
    }

    /// Serialize as raw structure constants (used to embed the algebra
    /// inside certificates).
    pub fn to_raw_spec(&self) -> AlgebraSpec {
        let mut table = Vec::new();
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                let terms: Vec<(String, String)> = self
                    .mul_basis(a, b)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(c, x)| (x.to_string(), self.labels[c].clone()))
                    .collect();
                if !terms.is_empty() {
                    table.push((self.labels[a].clone(), self.labels[b].clone(), terms));
                }
            }
        }
        AlgebraSpec {
            field: self.field,
            quiver: None,
            relations: vec![],
            nilpotency_bound: None,
            raw: Some(RawSpec {
                basis: self.labels.clone(),
                idempotents: self.idempotents.iter().map(|&e| self.labels[e].clone()).collect(),
                semisimple: self.semisimple.iter().map(|&e| self.labels[e].clone()).collect(),
                table,
            }),
        }
    }

    /// Same multiplication table (used when checking that two modules live
    /// over the same algebra).
    pub fn same_as(&self, other: &Algebra) -> bool {
        std::ptr::eq(self, other) || (self.field == other.field && self.left_mult == other.left_mult)
    }
}

fn path_label(p: &[usize], arrows: &[ArrowSpec]) -> String {
    p.iter().map(|&a| arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
}
