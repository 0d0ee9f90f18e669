//! The dg Leavitt algebra `L = T_{Λ₀}(J ⊕ J*) / (a⊗g − g(a), 1 − c)` as a
//! rewriting system on tensor words.
//!
//! Letters are the radical basis elements `α_i` (degree −1) and their duals
//! `α_i*` (degree +1). The dual basis is left `Λ₀`-linear:
//! `α_i*(α_j) = δ_ij e_{t(i)}`, so `α_i*` runs from `t(i)` back to `s(i)`.
//! Two families of rules:
//!
//! * `α_j α_i* → δ_ij e_{t(i)}`
//! * per vertex `v`, with pivot `p` the block member with the largest label,
//!   `α_p* α_p → e_v − Σ_{i ≠ p, s(i) = v} α_i* α_i`.
//!
//! Normal words are therefore `g…g a…a` with no pivot pair at the junction.
//! A vertex whose Casimir block is empty is zero in `L`; killing it kills
//! every letter through it, which can empty further blocks. The presentation
//! iterates this to a fixpoint.
//!
//! The differential is `∂₊` on duals, and on `J` the unique value forced by
//! `∂(1 − c) = 0` together with the first family of relations:
//! `∂(α_a) = Σ_{q,i} [α_q α_a]_i · α_q* α_i`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::homology::SgStatus;
use crate::matrix::Matrix;
use crate::module::Module;
use crate::periodicity::{gamma_table, GammaTable, ProbeOptions};

/// Rewrite steps allowed per normalization before giving up.
pub const REWRITE_BUDGET: usize = 5_000_000;

/// Largest ambient component used for a cohomology approximant; longer
/// truncations are shortened until they fit.
pub const MAX_COMPONENT_DIM: usize = 600;

/// Leibniz checks sampled by [`LeavittPresentation::verify_dg_axioms`].
pub const LEIBNIZ_SAMPLES: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// `α_i*`, degree +1.
    G(usize),
    /// `α_i`, degree −1.
    A(usize),
}

impl Letter {
    pub fn degree(self) -> i64 {
        match self {
            Letter::G(_) => 1,
            Letter::A(_) => -1,
        }
    }
}

/// A composable word `e_left · l₁ ⋯ l_k · e_right`. The empty word is the
/// idempotent `e_left`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    pub left: usize,
    pub right: usize,
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn unit(v: usize) -> Word {
        Word { left: v, right: v, letters: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.letters.iter().map(|l| l.degree()).sum()
    }

    fn key(&self) -> (usize, &[Letter], usize, usize) {
        (self.letters.len(), &self.letters, self.left, self.right)
    }
}

// Shorter words first, so a sorted component lists F_0 ⊂ F_1 ⊂ … as prefixes.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Formal linear combination of words.
pub type Lin = BTreeMap<Word, Scalar>;

fn add_term(lin: &mut Lin, w: Word, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match lin.entry(w) {
        Entry::Occupied(mut e) => {
            let s = e.get() + &c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

fn concat(u: &Word, v: &Word) -> Option<Word> {
    if u.right != v.left {
        return None;
    }
    let mut letters = u.letters.clone();
    letters.extend_from_slice(&v.letters);
    Some(Word { left: u.left, right: v.right, letters })
}

/// Which tensor factor of `∂₊(g) = Σ g₁ ⊗ g₂` is applied first in
/// `g(ab) = Σ g₂(a g₁(b))`. `Transposed` exists only to show that the
/// defining-identity check catches the swap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairingConvention {
    Literal,
    Transposed,
}

/// A rewrite rule `lhs → rhs`.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub lhs: Word,
    pub rhs: Lin,
}

#[derive(Debug)]
pub struct LeavittPresentation {
    alg: Arc<Algebra>,
    pairing: PairingConvention,
    /// Algebra basis index of `α_i`.
    radical: Vec<usize>,
    labels: Vec<String>,
    /// `(t(i), s(i))` with `α_i = e_t α_i e_s`.
    frames: Vec<(usize, usize)>,
    /// `mult[a][b]`: `α_a α_b` in radical coordinates.
    mult: Vec<Vec<Vec<(usize, Scalar)>>>,
    /// `∂₊(α_k*) = Σ c · α_p* ⊗ α_q*`, stored as `(p, q, c)`.
    dplus: Vec<Vec<(usize, usize, Scalar)>>,
    vertex_alive: Vec<bool>,
    letter_alive: Vec<bool>,
    /// Alive letters `i` with `s(i) = v`.
    blocks: Vec<Vec<usize>>,
    pivots: Vec<Option<usize>>,
    d_a: Vec<Lin>,
    d_g: Vec<Lin>,
}

impl LeavittPresentation {
    pub fn new(alg: &Arc<Algebra>) -> Result<LeavittPresentation> {
        Self::with_pairing(alg, PairingConvention::Literal)
    }

    pub fn with_pairing(alg: &Arc<Algebra>, pairing: PairingConvention) -> Result<LeavittPresentation> {
        if !alg.is_basic() {
            return Err(Error::NonBasicUnsupported);
        }
        let radical = alg.radical().to_vec();
        let pos: HashMap<usize, usize> = radical.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let labels: Vec<String> = radical.iter().map(|&b| alg.labels()[b].clone()).collect();
        let mut frames = Vec::with_capacity(radical.len());
        for (i, &b) in radical.iter().enumerate() {
            let f = alg.frame(b).ok_or_else(|| {
                Error::SplitFailure(format!("radical element {} is not idempotent-homogeneous", labels[i]))
            })?;
            frames.push(f);
        }
        let n = radical.len();
        let mut mult = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for b in 0..n {
                for (c, x) in alg.mul_basis(radical[a], radical[b]).into_iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let k = *pos.get(&c).ok_or_else(|| {
                        Error::SplitFailure(format!("{}·{} leaves the radical", labels[a], labels[b]))
                    })?;
                    mult[a][b].push((k, x));
                }
            }
        }
        // ∂₊ is dual to multiplication: the coefficient of α_k in α_a α_b
        // lands on α_b* ⊗ α_a*, since g₁ must eat b and g₂ must eat a.
        let mut dplus = vec![Vec::new(); n];
        for a in 0..n {
            for b in 0..n {
                for (k, x) in &mult[a][b] {
                    let (p, q) = match pairing {
                        PairingConvention::Literal => (b, a),
                        PairingConvention::Transposed => (a, b),
                    };
                    dplus[*k].push((p, q, x.clone()));
                }
            }
        }

        let nv = alg.num_vertices();
        let mut vertex_alive = vec![true; nv];
        let mut letter_alive = vec![true; n];
        loop {
            let mut changed = false;
            for i in 0..n {
                let (t, s) = frames[i];
                if letter_alive[i] && !(vertex_alive[t] && vertex_alive[s]) {
                    letter_alive[i] = false;
                    changed = true;
                }
            }
            for v in 0..nv {
                if vertex_alive[v] && !(0..n).any(|i| letter_alive[i] && frames[i].1 == v) {
                    vertex_alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut blocks = vec![Vec::new(); nv];
        for i in 0..n {
            if letter_alive[i] {
                blocks[frames[i].1].push(i);
            }
        }
        let pivots = blocks
            .iter()
            .map(|b| b.iter().copied().max_by(|&x, &y| labels[x].cmp(&labels[y]).then(x.cmp(&y))))
            .collect();

        let mut p = LeavittPresentation {
            alg: alg.clone(),
            pairing,
            radical,
            labels,
            frames,
            mult,
            dplus,
            vertex_alive,
            letter_alive,
            blocks,
            pivots,
            d_a: Vec::new(),
            d_g: Vec::new(),
        };
        p.check_confluence()?;
        p.build_differential()?;
        Ok(p)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn field(&self) -> Field {
        self.alg.field()
    }

    pub fn pairing(&self) -> PairingConvention {
        self.pairing
    }

    /// Number of radical basis elements (dead ones included).
    pub fn num_letters(&self) -> usize {
        self.radical.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn letter_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_vertex_alive(&self, v: usize) -> bool {
        self.vertex_alive[v]
    }

    pub fn is_letter_alive(&self, i: usize) -> bool {
        self.letter_alive[i]
    }

    /// Every idempotent is zero, so `L = 0`.
    pub fn is_collapsed(&self) -> bool {
        !self.vertex_alive.iter().any(|&a| a)
    }

    pub fn pivot(&self, v: usize) -> Option<usize> {
        self.pivots[v]
    }

    pub fn block(&self, v: usize) -> &[usize] {
        &self.blocks[v]
    }

    /// `∂₊(α_k*)` as `(p, q, c)` triples meaning `c · α_p* ⊗ α_q*`.
    pub fn dplus(&self, k: usize) -> &[(usize, usize, Scalar)] {
        &self.dplus[k]
    }

    /// `α_i*(α_j)`: the idempotent `e_{t(i)}` when `i = j`.
    pub fn pairing_value(&self, i: usize, j: usize) -> Option<usize> {
        (i == j).then_some(self.frames[i].0)
    }

    fn letter_frame(&self, l: Letter) -> (usize, usize) {
        match l {
            Letter::A(i) => self.frames[i],
            Letter::G(i) => (self.frames[i].1, self.frames[i].0),
        }
    }

    fn letter_is_alive(&self, l: Letter) -> bool {
        match l {
            Letter::A(i) | Letter::G(i) => self.letter_alive[i],
        }
    }

    /// The word on `letters`, or `None` if empty or not composable.
    pub fn word(&self, letters: &[Letter]) -> Option<Word> {
        let first = *letters.first()?;
        let mut right = self.letter_frame(first).1;
        for &l in &letters[1..] {
            let (a, b) = self.letter_frame(l);
            if a != right {
                return None;
            }
            right = b;
        }
        Some(Word { left: self.letter_frame(first).0, right, letters: letters.to_vec() })
    }

    fn alive(&self, w: &Word) -> bool {
        self.vertex_alive[w.left] && self.vertex_alive[w.right] && w.letters.iter().all(|&l| self.letter_is_alive(l))
    }

    fn is_pivot_pair(&self, g: usize, a: usize) -> bool {
        g == a && self.pivots[self.frames[g].1] == Some(g)
    }

    fn is_redex(&self, l1: Letter, l2: Letter) -> bool {
        match (l1, l2) {
            (Letter::A(_), Letter::G(_)) => true,
            (Letter::G(p), Letter::A(q)) => self.is_pivot_pair(p, q),
            _ => false,
        }
    }

    fn first_redex(&self, w: &Word) -> Option<usize> {
        w.letters.windows(2).position(|p| self.is_redex(p[0], p[1]))
    }

    fn rewrite_at(&self, w: &Word, k: usize) -> Vec<(Word, Scalar)> {
        let f = self.field();
        let splice = |mid: &[Letter]| {
            let mut letters = w.letters[..k].to_vec();
            letters.extend_from_slice(mid);
            letters.extend_from_slice(&w.letters[k + 2..]);
            Word { left: w.left, right: w.right, letters }
        };
        match (w.letters[k], w.letters[k + 1]) {
            (Letter::A(j), Letter::G(i)) => {
                if i == j {
                    vec![(splice(&[]), f.one())]
                } else {
                    vec![]
                }
            }
            (Letter::G(p), Letter::A(_)) => {
                let mut out = vec![(splice(&[]), f.one())];
                for &i in &self.blocks[self.frames[p].1] {
                    if i != p {
                        out.push((splice(&[Letter::G(i), Letter::A(i)]), -&f.one()));
                    }
                }
                out
            }
            _ => unreachable!("not a redex"),
        }
    }

    /// Leftmost rewriting to the normal form. Dead words vanish.
    pub fn normal_form(&self, lin: &Lin) -> Result<Lin> {
        self.normalize(lin.iter().map(|(w, c)| (w.clone(), c.clone())).collect())
    }

    fn normalize(&self, mut stack: Vec<(Word, Scalar)>) -> Result<Lin> {
        let mut out = Lin::new();
        let mut steps = 0usize;
        while let Some((w, c)) = stack.pop() {
            if c.is_zero() || !self.alive(&w) {
                continue;
            }
            steps += 1;
            if steps > REWRITE_BUDGET {
                return Err(Error::RewriteBudget(REWRITE_BUDGET));
            }
            match self.first_redex(&w) {
                None => add_term(&mut out, w, c),
                Some(k) => {
                    for (w2, c2) in self.rewrite_at(&w, k) {
                        stack.push((w2, &c * &c2));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.alive(w) && self.first_redex(w).is_none()
    }

    pub fn single(&self, w: Word) -> Lin {
        let mut l = Lin::new();
        l.insert(w, self.field().one());
        l
    }

    /// Product in `L`, normalized.
    pub fn multiply(&self, u: &Lin, v: &Lin) -> Result<Lin> {
        let mut raw = Vec::new();
        for (x, a) in u {
            for (y, b) in v {
                if let Some(w) = concat(x, y) {
                    raw.push((w, a * b));
                }
            }
        }
        self.normalize(raw)
    }

    fn alive_letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for i in 0..self.radical.len() {
            if self.letter_alive[i] {
                out.push(Letter::G(i));
                out.push(Letter::A(i));
            }
        }
        out
    }

    /// Resolve every overlap `l₁l₂l₃` in which both `l₁l₂` and `l₂l₃` are
    /// redexes.
    fn check_confluence(&self) -> Result<()> {
        let letters = self.alive_letters();
        for &l1 in &letters {
            for &l2 in &letters {
                if !self.is_redex(l1, l2) {
                    continue;
                }
                for &l3 in &letters {
                    if !self.is_redex(l2, l3) {
                        continue;
                    }
                    let Some(w) = self.word(&[l1, l2, l3]) else { continue };
                    let left = self.normalize(self.rewrite_at(&w, 0))?;
                    let right = self.normalize(self.rewrite_at(&w, 1))?;
                    if left != right {
                        return Err(Error::ConfluenceFailure(format!(
                            "{} resolves to {} and {}",
                            self.show(&w),
                            self.show_lin(&left),
                            self.show_lin(&right)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn build_differential(&mut self) -> Result<()> {
        let n = self.radical.len();
        let mut d_g = Vec::with_capacity(n);
        for k in 0..n {
            let raw = self.dplus[k]
                .iter()
                .filter_map(|(p, q, c)| Some((self.word(&[Letter::G(*p), Letter::G(*q)])?, c.clone())))
                .collect();
            d_g.push(self.normalize(raw)?);
        }
        // ∂(α_a) = Σ_i α_a · ∂₊(α_i*) · α_i, the value that keeps ∂(1 − c)
        // and ∂(α_a α_b* − δ_ab) at zero.
        let mut d_a = Vec::with_capacity(n);
        for a in 0..n {
            let mut raw = Vec::new();
            for i in 0..n {
                for (p, q, c) in &self.dplus[i] {
                    let letters = [Letter::A(a), Letter::G(*p), Letter::G(*q), Letter::A(i)];
                    if let Some(w) = self.word(&letters) {
                        raw.push((w, c.clone()));
                    }
                }
            }
            d_a.push(self.normalize(raw)?);
        }
        self.d_g = d_g;
        self.d_a = d_a;
        Ok(())
    }

    /// `∂` of a single letter, in normal form.
    pub fn d_letter(&self, l: Letter) -> &Lin {
        match l {
            Letter::A(i) => &self.d_a[i],
            Letter::G(i) => &self.d_g[i],
        }
    }

    /// Graded Leibniz rule letter by letter, then normal form.
    pub fn differential(&self, lin: &Lin) -> Result<Lin> {
        let mut raw = Vec::new();
        for (w, c) in lin {
            let mut prefix_deg = 0i64;
            for k in 0..w.len() {
                let l = w.letters[k];
                let sign = if prefix_deg % 2 == 0 { c.clone() } else { -c };
                prefix_deg += l.degree();
                for (x, cx) in self.d_letter(l) {
                    let mut letters = w.letters[..k].to_vec();
                    letters.extend_from_slice(&x.letters);
                    letters.extend_from_slice(&w.letters[k + 1..]);
                    raw.push((Word { left: w.left, right: w.right, letters }, &sign * cx));
                }
            }
        }
        self.normalize(raw)
    }

    /// The rule set, first family then pivot rules.
    pub fn rules(&self) -> Vec<RewriteRule> {
        let mut out = Vec::new();
        for j in 0..self.radical.len() {
            for i in 0..self.radical.len() {
                if let Some(w) = self.word(&[Letter::A(j), Letter::G(i)]) {
                    if self.alive(&w) {
                        let rhs = self.rewrite_at(&w, 0).into_iter().collect();
                        out.push(RewriteRule { lhs: w, rhs });
                    }
                }
            }
        }
        for p in self.pivots.iter().flatten() {
            let w = self.word(&[Letter::G(*p), Letter::A(*p)]).expect("pivot pair composes");
            let mut rhs = Lin::new();
            for (x, c) in self.rewrite_at(&w, 0) {
                add_term(&mut rhs, x, c);
            }
            out.push(RewriteRule { lhs: w, rhs });
        }
        out
    }

    /// Normal words of degree `n` and length exactly `len`, sorted.
    pub fn normal_words(&self, n: i64, len: usize) -> Vec<Word> {
        let total = len as i64;
        if n.abs() > total || (total + n) % 2 != 0 {
            return Vec::new();
        }
        if len == 0 {
            return (0..self.vertex_alive.len()).filter(|&v| self.vertex_alive[v]).map(Word::unit).collect();
        }
        let r = ((total + n) / 2) as usize;
        let s = len - r;
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(len);
        self.extend_normal(&mut prefix, None, r, s, &mut out);
        out.sort();
        out
    }

    fn extend_normal(&self, prefix: &mut Vec<Letter>, right: Option<usize>, r: usize, s: usize, out: &mut Vec<Word>) {
        if r == 0 && s == 0 {
            out.push(self.word(prefix).expect("composable by construction"));
            return;
        }
        for i in 0..self.radical.len() {
            if !self.letter_alive[i] {
                continue;
            }
            let l = if r > 0 { Letter::G(i) } else { Letter::A(i) };
            let (a, b) = self.letter_frame(l);
            if right.is_some_and(|x| x != a) {
                continue;
            }
            if let (Some(&Letter::G(g)), Letter::A(_)) = (prefix.last(), l) {
                if self.is_pivot_pair(g, i) {
                    continue;
                }
            }
            prefix.push(l);
            if r > 0 {
                self.extend_normal(prefix, Some(b), r - 1, s, out);
            } else {
                self.extend_normal(prefix, Some(b), 0, s - 1, out);
            }
            prefix.pop();
        }
    }

    /// Basis of `F_ℓ Lⁿ`: normal words of degree `n` and length `≤ ℓ`.
    pub fn truncated_component(&self, n: i64, l: usize) -> TruncatedComponent {
        let mut basis = Vec::new();
        let mut prefix_dims = Vec::with_capacity(l + 1);
        for len in 0..=l {
            basis.extend(self.normal_words(n, len));
            prefix_dims.push(basis.len());
        }
        TruncatedComponent { degree: n, length_bound: l, basis, prefix_dims }
    }

    /// `Lⁿ` is spanned by words of length `≤ ℓ − 2` whenever there are no
    /// normal words of degree `n` at lengths `ℓ − 1` and `ℓ`: stripping the
    /// first dual letter and the last radical letter of a normal word keeps it
    /// normal, so a longer word would leave a trace in that window.
    pub fn component_is_finite_at(&self, n: i64, l: usize) -> bool {
        l as i64 >= n.abs() + 2 && self.normal_words(n, l - 1).is_empty() && self.normal_words(n, l).is_empty()
    }

    /// Matrix of `∂ : F_ℓ Lⁿ → F_{ℓ+1} Lⁿ⁺¹` in the normal-word bases.
    pub fn differential_matrix(&self, n: i64, l: usize) -> Result<Matrix> {
        let src = self.truncated_component(n, l);
        let tgt = self.truncated_component(n + 1, l + 1);
        self.differential_between(&src, &tgt)
    }

    fn differential_between(&self, src: &TruncatedComponent, tgt: &TruncatedComponent) -> Result<Matrix> {
        let index: HashMap<&Word, usize> = tgt.basis.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut m = Matrix::zeros(self.field(), tgt.dim(), src.dim());
        for (col, w) in src.basis.iter().enumerate() {
            for (x, c) in self.differential(&self.single(w.clone()))? {
                let row = *index.get(&x).ok_or_else(|| {
                    Error::AxiomFailure(format!("∂({}) has the term {} outside the target", self.show(w), self.show(&x)))
                })?;
                m[(row, col)] = c;
            }
        }
        Ok(m)
    }

    fn all_normal_words(&self, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        for len in 0..=max_len {
            let l = len as i64;
            let mut n = -l;
            while n <= l {
                out.extend(self.normal_words(n, len));
                n += 2;
            }
        }
        out
    }

    /// Check the dg axioms within words of length `≤ lmax`.
    pub fn verify_dg_axioms(&self, lmax: usize) -> Result<DgAxiomReport> {
        let mut report = DgAxiomReport { lmax, ..Default::default() };
        let n = self.radical.len();
        let f = self.field();

        // ∂₊ defining identity g(ab) = Σ g₂(a g₁(b)), on the full J.
        for k in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let lhs = self.mult[a][b].iter().find(|(x, _)| *x == k).map_or(f.zero(), |(_, c)| c.clone());
                    let mut rhs = f.zero();
                    if self.frames[a].1 == self.frames[b].0 {
                        for (p, q, c) in &self.dplus[k] {
                            if *p == b && *q == a {
                                rhs = &rhs + c;
                            }
                        }
                    }
                    if lhs != rhs {
                        return Err(Error::AxiomFailure(format!(
                            "defining identity for ∂₊ fails at g = {}*, a = {}, b = {}: {} ≠ {}",
                            self.labels[k], self.labels[a], self.labels[b], lhs, rhs
                        )));
                    }
                    report.defining_identity += 1;
                }
            }
        }

        for rule in self.rules() {
            let mut rel = self.single(rule.lhs.clone());
            for (w, c) in &rule.rhs {
                add_term(&mut rel, w.clone(), -c);
            }
            let d = self.differential(&rel)?;
            if !d.is_empty() {
                return Err(Error::AxiomFailure(format!(
                    "∂ of the relation {} − ({}) is {}",
                    self.show(&rule.lhs),
                    self.show_lin(&rule.rhs),
                    self.show_lin(&d)
                )));
            }
            report.relations += 1;
        }

        let words = self.all_normal_words(lmax);
        for w in &words {
            let dd = self.differential(&self.differential(&self.single(w.clone()))?)?;
            if !dd.is_empty() {
                return Err(Error::AxiomFailure(format!("∂²({}) = {}", self.show(w), self.show_lin(&dd))));
            }
            report.d_squared += 1;
        }

        let mut pairs: Vec<(&Word, &Word)> = Vec::new();
        for u in &words {
            for v in &words {
                if u.right == v.left && u.len() + v.len() <= lmax && !u.is_empty() && !v.is_empty() {
                    pairs.push((u, v));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        pairs.shuffle(&mut rng);
        pairs.truncate(LEIBNIZ_SAMPLES);
        for (u, v) in pairs {
            let (lu, lv) = (self.single(u.clone()), self.single(v.clone()));
            let lhs = self.differential(&self.multiply(&lu, &lv)?)?;
            let mut rhs = self.multiply(&self.differential(&lu)?, &lv)?;
            let second = self.multiply(&lu, &self.differential(&lv)?)?;
            let odd = u.degree() % 2 != 0;
            for (w, c) in second {
                add_term(&mut rhs, w, if odd { -&c } else { c });
            }
            if lhs != rhs {
                return Err(Error::AxiomFailure(format!(
                    "Leibniz fails on ({}, {}): {} vs {}",
                    self.show(u),
                    self.show(v),
                    self.show_lin(&lhs),
                    self.show_lin(&rhs)
                )));
            }
            report.leibniz += 1;
        }
        Ok(report)
    }

    /// Cohomology approximants for each degree in `lo..=hi`.
    pub fn cohomology_report(&self, lo: i64, hi: i64, lmax: usize, mmax: usize) -> Result<CohomologyReport> {
        let mut degrees = Vec::new();
        for n in lo..=hi {
            degrees.push(self.degree_cohomology(n, lmax, mmax)?);
        }
        Ok(CohomologyReport { lmax, mmax, collapsed: self.is_collapsed(), degrees })
    }

    fn degree_cohomology(&self, n: i64, mut lmax: usize, mut mmax: usize) -> Result<DegreeCohomology> {
        let f = self.field();
        while lmax.max(mmax) > 0 && self.truncated_component(n, lmax.max(mmax) + 1).dim() > MAX_COMPONENT_DIM {
            let top = lmax.max(mmax) - 1;
            lmax = lmax.min(top);
            mmax = mmax.min(top);
        }
        let top = lmax.max(mmax);
        let here = self.truncated_component(n, lmax);
        let ambient = self.truncated_component(n, top + 1);
        let prev = self.truncated_component(n - 1, top);
        let dn = self.differential_between(&here, &self.truncated_component(n + 1, lmax + 1))?;
        let dprev = self.differential_between(&prev, &ambient)?;
        let amb = ambient.dim();

        let cycles: Vec<Matrix> = (0..=lmax)
            .map(|l| {
                let c = here.prefix_dims[l];
                let ns = dn.select_columns(&(0..c).collect::<Vec<_>>()).nullspace();
                let mut z = Matrix::zeros(f, amb, ns.cols());
                z.set_block(0, 0, &ns);
                z
            })
            .collect();
        let boundary = |m: usize| dprev.select_columns(&(0..prev.prefix_dims[m]).collect::<Vec<_>>());
        let cycle_dims: Vec<usize> = cycles.iter().map(|z| z.cols()).collect();
        let boundaries: Vec<Matrix> = (0..=mmax).map(boundary).collect();
        let boundary_dims: Vec<usize> = boundaries.iter().map(|b| b.rank()).collect();
        let mut intersection_dims = Vec::new();
        let mut surviving = Vec::new();
        for (l, z) in cycles.iter().enumerate() {
            let mut irow = Vec::new();
            let mut srow = Vec::new();
            for (m, b) in boundaries.iter().enumerate() {
                let joint = Matrix::hstack(f, amb, &[z, b]).rank();
                irow.push(cycle_dims[l] + boundary_dims[m] - joint);
                srow.push(joint - boundary_dims[m]);
            }
            intersection_dims.push(irow);
            surviving.push(srow);
        }

        let exact = self.component_is_finite_at(n, lmax) && self.component_is_finite_at(n - 1, lmax);
        let exact_dim = if exact {
            let z = &cycles[lmax];
            let b = boundary(lmax);
            let rb = b.rank();
            Some(Matrix::hstack(f, amb, &[z, &b]).rank() - rb)
        } else {
            None
        };
        Ok(DegreeCohomology {
            degree: n,
            lmax,
            mmax,
            component_dims: here.prefix_dims.clone(),
            cycle_dims,
            boundary_dims,
            intersection_dims,
            surviving,
            differential_zero: dn.is_zero() && dprev.is_zero(),
            semantics: if exact { Semantics::Exact } else { Semantics::ApproximantOnly },
            exact_dim,
        })
    }

    /// Compare `dim Hⁿ(L)` with `dim Hom_{D_sg}(Λ₀, Σⁿ Λ₀)` for `|n| ≤ bound`.
    /// A disagreement between an exact cohomology value and a certified Hom
    /// value is an error.
    pub fn crosscheck_lemma(&self, bound: i64, lmax: usize, mmax: usize, opts: &ProbeOptions) -> Result<CrosscheckReport> {
        let (_, lambda0) = Module::simples(&self.alg)?;
        let gamma = gamma_table(&lambda0, 1, &ProbeOptions { bound, ..*opts }, false)?;
        let cohomology = self.cohomology_report(-bound, bound, lmax, mmax)?;
        let mut degrees = Vec::new();
        for h in &cohomology.degrees {
            let cell = gamma.cell(h.degree).expect("gamma table covers the range");
            match (h.exact_dim, cell.is_certified()) {
                (Some(d), true) => {
                    if d as u64 != cell.value {
                        return Err(Error::CrosscheckMismatch { degree: h.degree, cohomology: d, sg_hom: cell.value });
                    }
                    degrees.push(Comparison::Match { degree: h.degree, dim: d });
                }
                _ => degrees.push(Comparison::Incomparable {
                    degree: h.degree,
                    cohomology: h.exact_dim,
                    approximant: h.surviving[h.lmax][h.mmax],
                    cohomology_growing: h.is_growing(),
                    sg_hom_status: cell.status,
                    sg_hom_value: cell.value,
                    sg_hom_nonzero: cell.nonzero_certified,
                }),
            }
        }
        let all_match = degrees.iter().all(|c| matches!(c, Comparison::Match { .. }));
        Ok(CrosscheckReport { bound, degrees, all_match, cohomology, gamma })
    }

    pub fn letter_label(&self, l: Letter) -> String {
        match l {
            Letter::G(i) => format!("g:{}", self.labels[i]),
            Letter::A(i) => format!("a:{}", self.labels[i]),
        }
    }

    pub fn word_labels(&self, w: &Word) -> Vec<String> {
        if w.is_empty() {
            return vec![format!("e_{}", self.alg.vertices()[w.left])];
        }
        w.letters.iter().map(|&l| self.letter_label(l)).collect()
    }

    pub fn show(&self, w: &Word) -> String {
        self.word_labels(w).join(" ")
    }

    pub fn show_lin(&self, lin: &Lin) -> String {
        if lin.is_empty() {
            return "0".into();
        }
        lin.iter().map(|(w, c)| format!("{}·[{}]", c, self.show(w))).collect::<Vec<_>>().join(" + ")
    }

    pub fn lin_to_json(&self, lin: &Lin) -> Value {
        Value::Array(lin.iter().map(|(w, c)| json!({"coeff": c.to_string(), "word": self.word_labels(w)})).collect())
    }

    pub fn to_json(&self) -> Value {
        let vertices = self.alg.vertices();
        let letters: Vec<Value> = (0..self.radical.len())
            .map(|i| {
                json!({
                    "label": self.labels[i],
                    "target": vertices[self.frames[i].0],
                    "source": vertices[self.frames[i].1],
                    "alive": self.letter_alive[i],
                })
            })
            .collect();
        let blocks: Vec<Value> = (0..vertices.len())
            .map(|v| {
                json!({
                    "vertex": vertices[v],
                    "alive": self.vertex_alive[v],
                    "block": self.blocks[v].iter().map(|&i| &self.labels[i]).collect::<Vec<_>>(),
                    "pivot": self.pivots[v].map(|i| &self.labels[i]),
                })
            })
            .collect();
        let dplus: Vec<Value> = (0..self.radical.len())
            .map(|k| {
                json!({
                    "dual": self.labels[k],
                    "terms": self.dplus[k].iter().map(|(p, q, c)| json!({
                        "coeff": c.to_string(),
                        "word": [self.letter_label(Letter::G(*p)), self.letter_label(Letter::G(*q))],
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        let d_radical: Vec<Value> = (0..self.radical.len())
            .map(|k| json!({"letter": self.labels[k], "d": self.lin_to_json(&self.d_a[k])}))
            .collect();
        let rules: Vec<Value> = self
            .rules()
            .iter()
            .map(|r| json!({"lhs": self.word_labels(&r.lhs), "rhs": self.lin_to_json(&r.rhs)}))
            .collect();
        json!({
            "field": self.field(),
            "pairing": self.pairing,
            "collapsed": self.is_collapsed(),
            "letters": letters,
            "vertices": blocks,
            "dplus": dplus,
            "d_radical": d_radical,
            "rules": rules,
        })
    }
}

impl fmt::Display for LeavittPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alive = self.letter_alive.iter().filter(|&&a| a).count();
        write!(f, "Leavitt presentation: {} of {} radical letters alive", alive, self.radical.len())?;
        if self.is_collapsed() {
            write!(f, " (total collapse)")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct TruncatedComponent {
    pub degree: i64,
    pub length_bound: usize,
    /// Normal words, shortest first.
    pub basis: Vec<Word>,
    /// `prefix_dims[ℓ] = dim F_ℓ`.
    pub prefix_dims: Vec<usize>,
}

impl TruncatedComponent {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn to_json(&self, p: &LeavittPresentation) -> Value {
        json!({
            "degree": self.degree,
            "length_bound": self.length_bound,
            "dims": self.prefix_dims,
            "basis": self.basis.iter().map(|w| p.word_labels(w)).collect::<Vec<_>>(),
        })
    }
}

/// Counts of checks performed by [`LeavittPresentation::verify_dg_axioms`].
#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct DgAxiomReport {
    pub lmax: usize,
    pub defining_identity: usize,
    pub relations: usize,
    pub d_squared: usize,
    pub leibniz: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Semantics {
    /// `Lⁿ` and `Lⁿ⁻¹` are finite and fully enumerated, so `Hⁿ` is exact.
    Exact,
    ApproximantOnly,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeCohomology {
    pub degree: i64,
    /// Truncation actually used (at most the requested one).
    pub lmax: usize,
    pub mmax: usize,
    /// `dim F_ℓ Lⁿ` for `ℓ = 0..=lmax`.
    pub component_dims: Vec<usize>,
    /// `dim Z_ℓ`, cycles of length `≤ ℓ`.
    pub cycle_dims: Vec<usize>,
    /// `dim B_m = dim ∂(F_m Lⁿ⁻¹)`.
    pub boundary_dims: Vec<usize>,
    /// `dim Z_ℓ ∩ B_m`, indexed `[ℓ][m]`.
    pub intersection_dims: Vec<Vec<usize>>,
    /// `dim Z_ℓ − dim Z_ℓ ∩ B_m`.
    pub surviving: Vec<Vec<usize>>,
    pub differential_zero: bool,
    pub semantics: Semantics,
    pub exact_dim: Option<usize>,
}

impl DegreeCohomology {
    /// Component dimensions still increasing at the largest computed length.
    pub fn is_growing(&self) -> bool {
        let d = &self.component_dims;
        d.len() >= 3 && d[d.len() - 1] > d[d.len() - 3]
    }

    /// Surviving counts are non-increasing in `m` and non-decreasing in `ℓ`.
    pub fn is_monotone(&self) -> bool {
        let s = &self.surviving;
        let rows = s.iter().all(|r| r.windows(2).all(|w| w[1] <= w[0]));
        let cols = s.windows(2).all(|w| w[0].iter().zip(&w[1]).all(|(a, b)| b >= a));
        rows && cols
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub lmax: usize,
    pub mmax: usize,
    pub collapsed: bool,
    pub degrees: Vec<DegreeCohomology>,
}

impl CohomologyReport {
    pub fn degree(&self, n: i64) -> Option<&DegreeCohomology> {
        self.degrees.iter().find(|d| d.degree == n)
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict")]
pub enum Comparison {
    Match {
        degree: i64,
        dim: usize,
    },
    Incomparable {
        degree: i64,
        cohomology: Option<usize>,
        approximant: usize,
        cohomology_growing: bool,
        sg_hom_status: SgStatus,
        sg_hom_value: u64,
        sg_hom_nonzero: bool,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    pub bound: i64,
    pub degrees: Vec<Comparison>,
    pub all_match: bool,
    pub cohomology: CohomologyReport,
    pub gamma: GammaTable,
}
