//! The example algebras used throughout the docs and tests, all over
//! `GF(101)` unless a field is passed explicitly.

use std::sync::Arc;

use crate::algebra::{Algebra, AlgebraSpec, RelationSpec};
use crate::field::Field;

pub fn default_field() -> Field {
    Field::Prime { p: 101 }
}

fn mono(paths: &[&str]) -> Vec<RelationSpec> {
    paths.iter().map(|p| RelationSpec::Monomial(p.to_string())).collect()
}

fn load(spec: AlgebraSpec) -> Arc<Algebra> {
    Algebra::load(&spec).expect("corpus algebra loads")
}

/// `k[x]/(x^n)`.
pub fn truncated_spec(field: Field, n: usize) -> AlgebraSpec {
    let rel = vec!["x"; n].join("*");
    AlgebraSpec::quiver(field, &["1"], &[("x", "1", "1")], mono(&[&rel]), n)
}

pub fn truncated(n: usize) -> Arc<Algebra> {
    load(truncated_spec(default_field(), n))
}

/// `k⟨x, y⟩/(x, y)²`.
pub fn two_loop_spec(field: Field) -> AlgebraSpec {
    AlgebraSpec::quiver(field, &["1"], &[("x", "1", "1"), ("y", "1", "1")], mono(&["x*x", "x*y", "y*x", "y*y"]), 2)
}

pub fn two_loop() -> Arc<Algebra> {
    load(two_loop_spec(default_field()))
}

/// The path algebra of `1 → 2`.
pub fn a2_spec(field: Field) -> AlgebraSpec {
    AlgebraSpec::quiver(field, &["1", "2"], &[("a", "1", "2")], vec![], 2)
}

pub fn a2() -> Arc<Algebra> {
    load(a2_spec(default_field()))
}

/// Cyclic Nakayama algebra on three vertices with all paths of length
/// `loewy` killed.
pub fn cyclic_nakayama_spec(field: Field, loewy: usize) -> AlgebraSpec {
    let arrows = ["a", "b", "c"];
    let rels: Vec<String> = (0..3)
        .map(|i| (0..loewy).map(|j| arrows[(i + j) % 3]).collect::<Vec<_>>().join("*"))
        .collect();
    let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
    AlgebraSpec::quiver(field, &["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")], mono(&rels), loewy)
}

pub fn cyclic_nakayama(loewy: usize) -> Arc<Algebra> {
    load(cyclic_nakayama_spec(default_field(), loewy))
}

/// A loop `x` at 1 with `x² = 0` and a tail `a: 1 → 2`.
pub fn loop_with_tail_spec(field: Field) -> AlgebraSpec {
    AlgebraSpec::quiver(field, &["1", "2"], &[("x", "1", "1"), ("a", "1", "2")], mono(&["x*x"]), 3)
}

pub fn loop_with_tail() -> Arc<Algebra> {
    load(loop_with_tail_spec(default_field()))
}

/// The commutative square `1 → 2 → 4`, `1 → 3 → 4` with `ab = cd`.
pub fn commutative_square_spec(field: Field) -> AlgebraSpec {
    AlgebraSpec::quiver(
        field,
        &["1", "2", "3", "4"],
        &[("a", "1", "2"), ("b", "2", "4"), ("c", "1", "3"), ("d", "3", "4")],
        vec![RelationSpec::Terms(vec![("1".into(), "a*b".into()), ("-1".into(), "c*d".into())])],
        3,
    )
}

pub fn commutative_square() -> Arc<Algebra> {
    load(commutative_square_spec(default_field()))
}

/// A named corpus entry.
pub struct Entry {
    pub name: &'static str,
    pub spec: AlgebraSpec,
    pub infinite_gl_dim: bool,
}

/// Every corpus algebra by name.
pub fn all() -> Vec<Entry> {
    let f = default_field();
    vec![
        Entry { name: "dual-numbers", spec: truncated_spec(f, 2), infinite_gl_dim: true },
        Entry { name: "truncated-3", spec: truncated_spec(f, 3), infinite_gl_dim: true },
        Entry { name: "truncated-4", spec: truncated_spec(f, 4), infinite_gl_dim: true },
        Entry { name: "two-loop", spec: two_loop_spec(f), infinite_gl_dim: true },
        Entry { name: "nakayama-cyclic-2", spec: cyclic_nakayama_spec(f, 2), infinite_gl_dim: true },
        Entry { name: "nakayama-cyclic-3", spec: cyclic_nakayama_spec(f, 3), infinite_gl_dim: true },
        Entry { name: "loop-with-tail", spec: loop_with_tail_spec(f), infinite_gl_dim: true },
        Entry { name: "a2", spec: a2_spec(f), infinite_gl_dim: false },
        Entry { name: "commutative-square", spec: commutative_square_spec(f), infinite_gl_dim: false },
    ]
}

pub fn by_name(name: &str) -> Option<Entry> {
    all().into_iter().find(|e| e.name == name)
}
