//! Virtual periodicity certificates. A module `M` is virtually periodic
//! when `pd M = ∞` and `Ω^d M ∈ ⟨M⟩` for some `d ≥ 1`. A certificate
//! carries the syzygy chain up to the needed depth, a witness for infinite
//! projective dimension, and a closure tree for `Ω^d M`; every piece is
//! replayable from the embedded algebra.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::closure::{extension_closure_member, relabel, split_sum, ClosureNode, Limits};
use crate::algebra::{Algebra, AlgebraSpec};
use crate::decompose::{find_retraction, is_isomorphic, strip_projective};
use crate::error::{Error, Result};
use crate::homology::{
    arrow_matrix, is_short_exact, map_from_generators, pd_status_chain, projective_cover, semisimple_omega,
    semisimple_vector, PdStatus, SyzygyChain,
};
use crate::matrix::Matrix;
use crate::module::{Module, ModuleMap, ModuleSpec};

pub const FORMAT: &str = "sgcat-certificate";
pub const VERSION: u64 = 1;

/// `0 → X_{k+1} ⊕ Q → P → X_k → 0`, given by `epi: P → X_k` and
/// `embed: X_{k+1} ⊕ Q → P`.
#[derive(Clone, Debug)]
pub struct StageWitness {
    pub cover_mult: Vec<usize>,
    pub epi: Matrix,
    pub q_mult: Vec<usize>,
    pub embed: Matrix,
    pub next: Module,
}

/// Why `pd M = ∞`.
#[derive(Clone, Debug, PartialEq)]
pub enum PdWitness {
    /// `iso: Ω^a M → Ω^b M` with `a < b` and `Ω^a M` not projective.
    Recurrence { a: usize, b: usize, iso: Matrix },
    /// Radical-square-zero algebra, semisimple `M`: the supports of the
    /// stripped syzygies (simples) repeat at steps `a < b` without
    /// becoming empty.
    SupportCycle { a: usize, b: usize, supports: Vec<Vec<usize>> },
}

#[derive(Clone, Debug)]
pub struct VPCertificate {
    pub module: Module,
    pub period: usize,
    /// `X_0`, the module with its projective summands removed.
    pub base: Module,
    pub base_q: Vec<usize>,
    /// `X_0 ⊕ Q_0 → M`, an isomorphism.
    pub base_iso: Matrix,
    pub stages: Vec<StageWitness>,
    pub pd: PdWitness,
    /// Tree whose root is exactly `X_period`.
    pub closure: Arc<ClosureNode>,
}

#[derive(Clone, Debug)]
pub enum VpOutcome {
    Certified(Box<VPCertificate>),
    Unknown { reason: String },
}

#[derive(Clone, Copy, Debug)]
pub struct VpOptions {
    /// Depth for the projective dimension recurrence search.
    pub cutoff: usize,
    pub limits: Limits,
}

impl Default for VpOptions {
    fn default() -> Self {
        VpOptions { cutoff: 12, limits: Limits::default() }
    }
}

fn fail(msg: impl Into<String>) -> Error {
    Error::Verification(msg.into())
}

fn stage_witnesses(chain: &mut SyzygyChain, depth: usize) -> Result<Vec<StageWitness>> {
    chain.extend_to(depth)?;
    let f = chain.base.field();
    let mut out = Vec::new();
    for k in 0..depth {
        let st = chain.stage(k);
        let mut cover_mult = vec![0; chain.algebra().num_vertices()];
        for &v in &st.cover.vertices {
            cover_mult[v] += 1;
        }
        let s = &st.inclusion.matrix * &st.strip.section.matrix;
        let q = &st.inclusion.matrix * &st.strip.q_in.matrix;
        out.push(StageWitness {
            cover_mult,
            epi: st.cover.epi.matrix.clone(),
            q_mult: st.strip.projective.clone(),
            embed: Matrix::hstack(f, st.cover.module.dim(), &[&s, &q]),
            next: st.strip.core.clone(),
        });
    }
    Ok(out)
}

/// Supports of the stripped syzygies of a semisimple module over a
/// radical-square-zero algebra, until they vanish or repeat.
pub fn support_sequence(alg: &Algebra, x: &[u64], max_steps: usize) -> Result<(Vec<Vec<usize>>, Option<(usize, usize)>)> {
    let (a, proj) = arrow_matrix(alg);
    let supp = |v: &[u64]| -> Vec<usize> { (0..v.len()).filter(|&i| v[i] > 0 && !proj[i]).collect() };
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut seq = vec![supp(x)];
    loop {
        let cur = seq.last().unwrap().clone();
        if cur.is_empty() {
            return Ok((seq, None));
        }
        if let Some(&a0) = seen.get(&cur) {
            let b = seq.len() - 1;
            return Ok((seq, Some((a0, b))));
        }
        if seq.len() > max_steps {
            return Ok((seq, None));
        }
        seen.insert(cur.clone(), seq.len() - 1);
        let mut ind = vec![0u64; x.len()];
        for &i in &cur {
            ind[i] = 1;
        }
        seq.push(supp(&semisimple_omega(&a, &proj, &ind)?));
    }
}

/// Tries to certify `Ω^d M ∈ ⟨M⟩` together with `pd M = ∞`.
pub fn certify_virtually_periodic(m: &Module, d: usize, opts: &VpOptions) -> Result<VpOutcome> {
    if d == 0 {
        return Err(Error::InvalidArgument("period must be at least 1".into()));
    }
    let mut chain = SyzygyChain::new(m)?;
    let alg = m.algebra();
    // semisimple modules over radical-square-zero algebras: the support
    // sequence decides pd exactly and avoids building large syzygies
    let support = match semisimple_vector(m).filter(|_| alg.is_radical_square_zero()) {
        Some(x) => Some(support_sequence(alg, &x, 1 << 12)?),
        None => None,
    };
    let pd = match support {
        Some((supports, Some((a, b)))) => PdWitness::SupportCycle { a, b, supports },
        Some((supports, None)) if supports.last().is_some_and(|s| s.is_empty()) => {
            return Err(Error::FinitePd(supports.len() - 1))
        }
        Some(_) => return Ok(VpOutcome::Unknown { reason: "projective dimension undecided".into() }),
        None => match pd_status_chain(&mut chain, opts.cutoff)? {
            PdStatus::Finite { d } => return Err(Error::FinitePd(d)),
            PdStatus::Infinite { a, b, witness, .. } => PdWitness::Recurrence { a, b, iso: witness },
            PdStatus::Unknown { .. } => {
                return Ok(VpOutcome::Unknown { reason: format!("no syzygy recurrence within cutoff {}", opts.cutoff) })
            }
        },
    };
    let depth = match &pd {
        PdWitness::Recurrence { b, .. } => d.max(*b),
        PdWitness::SupportCycle { .. } => d,
    };
    let stages = stage_witnesses(&mut chain, depth)?;
    let target = chain.syzygy(d).clone();
    let Some(closure) = extension_closure_member(&target, m, &opts.limits)? else {
        return Ok(VpOutcome::Unknown { reason: format!("closure search for Ω^{d} M exhausted its limits") });
    };
    Ok(VpOutcome::Certified(Box::new(build(&chain, m, d, stages, pd, closure))))
}

fn build(
    chain: &SyzygyChain,
    m: &Module,
    d: usize,
    stages: Vec<StageWitness>,
    pd: PdWitness,
    closure: Arc<ClosureNode>,
) -> VPCertificate {
    let bs = &chain.base_strip;
    let f = m.field();
    VPCertificate {
        module: m.clone(),
        period: d,
        base: bs.core.clone(),
        base_q: bs.projective.clone(),
        base_iso: Matrix::hstack(f, m.dim(), &[&bs.section.matrix, &bs.q_in.matrix]),
        stages,
        pd,
        closure,
    }
}

impl VPCertificate {
    pub fn algebra(&self) -> &Arc<Algebra> {
        self.module.algebra()
    }

    pub fn syzygy(&self, k: usize) -> &Module {
        if k == 0 {
            &self.base
        } else {
            &self.stages[k - 1].next
        }
    }

    /// Replays the certificate from scratch.
    pub fn verify(&self) -> Result<()> {
        let alg = self.algebra().clone();
        let nv = alg.num_vertices();
        if self.period == 0 {
            return Err(fail("period is zero"));
        }
        let need = match &self.pd {
            PdWitness::Recurrence { b, .. } => self.period.max(*b),
            PdWitness::SupportCycle { .. } => self.period,
        };
        if self.stages.len() < need {
            return Err(fail(format!("{} chain stages recorded, {need} needed", self.stages.len())));
        }
        // M ≅ X_0 ⊕ Q_0
        if self.base_q.len() != nv {
            return Err(fail("base multiplicities have the wrong length"));
        }
        let q0 = Module::projective_sum(&alg, &self.base_q);
        let sum0 = Module::direct_sum(&alg, &[self.base.clone(), q0]).0;
        let iso = ModuleMap::new(sum0, self.module.clone(), self.base_iso.clone()).map_err(|e| fail(format!("base: {e}")))?;
        if !iso.is_isomorphism() {
            return Err(fail("base: X_0 ⊕ Q_0 → M is not an isomorphism"));
        }
        // 0 → X_{k+1} ⊕ Q → P → X_k → 0
        for (k, st) in self.stages.iter().enumerate() {
            if st.cover_mult.len() != nv || st.q_mult.len() != nv {
                return Err(fail(format!("stage {k}: multiplicities have the wrong length")));
            }
            st.next.validate().map_err(|e| fail(format!("stage {k}: {e}")))?;
            let p = Module::projective_sum(&alg, &st.cover_mult);
            let q = Module::projective_sum(&alg, &st.q_mult);
            let left = Module::direct_sum(&alg, &[st.next.clone(), q]).0;
            let x = self.syzygy(k);
            let epi = ModuleMap::new(p.clone(), x.clone(), st.epi.clone()).map_err(|e| fail(format!("stage {k} cover: {e}")))?;
            let emb = ModuleMap::new(left, p, st.embed.clone()).map_err(|e| fail(format!("stage {k} kernel: {e}")))?;
            if !is_short_exact(&emb, &epi) {
                return Err(fail(format!("stage {k}: kernel sequence is not exact")));
            }
        }
        match &self.pd {
            PdWitness::Recurrence { a, b, iso } => {
                if a >= b {
                    return Err(fail("recurrence needs a < b"));
                }
                let xa = self.syzygy(*a);
                let st = &self.stages[*a];
                let p_dim = Module::projective_sum(&alg, &st.cover_mult).dim();
                if xa.is_zero() || st.cover_mult != xa.top_vector() || p_dim == xa.dim() {
                    return Err(fail(format!("Ω^{a} M is not shown to be non-projective")));
                }
                let w = ModuleMap::new(xa.clone(), self.syzygy(*b).clone(), iso.clone())
                    .map_err(|e| fail(format!("recurrence: {e}")))?;
                if !w.is_isomorphism() {
                    return Err(fail("recurrence: witness is not an isomorphism"));
                }
            }
            PdWitness::SupportCycle { a, b, supports } => {
                if !alg.is_radical_square_zero() {
                    return Err(fail("support cycle needs a radical-square-zero algebra"));
                }
                let x = semisimple_vector(&self.module).ok_or_else(|| fail("support cycle needs a semisimple module"))?;
                let (seq, cyc) = support_sequence(&alg, &x, 1 << 12)?;
                if cyc != Some((*a, *b)) || &seq != supports {
                    return Err(fail("support sequence does not match"));
                }
            }
        }
        if self.closure.module() != self.syzygy(self.period) {
            return Err(fail("closure root is not the recorded syzygy"));
        }
        self.closure.verify(&self.module)
    }

    fn payload(&self) -> Value {
        let spec = |m: &Module| serde_json::to_value(m.to_spec()).expect("module spec serializes");
        let stages: Vec<Value> = self
            .stages
            .iter()
            .map(|s| {
                json!({"cover_mult": s.cover_mult, "epi": s.epi, "q_mult": s.q_mult,
                       "embed": s.embed, "next": spec(&s.next)})
            })
            .collect();
        let pd = match &self.pd {
            PdWitness::Recurrence { a, b, iso } => json!({"kind": "recurrence", "a": a, "b": b, "iso": iso}),
            PdWitness::SupportCycle { a, b, supports } => {
                json!({"kind": "support-cycle", "a": a, "b": b, "supports": supports})
            }
        };
        json!({
            "algebra": self.algebra().to_raw_spec(),
            "module": spec(&self.module),
            "period": self.period,
            "base": spec(&self.base),
            "base_q": self.base_q,
            "base_iso": self.base_iso,
            "stages": stages,
            "pd": pd,
            "closure": self.closure.to_json(),
        })
    }

    pub fn to_json(&self) -> Value {
        let payload = self.payload();
        json!({
            "format": FORMAT,
            "version": VERSION,
            "kind": "virtually-periodic",
            "digest": digest(&payload),
            "payload": payload,
        })
    }

    /// Parses a certificate; the digest is checked here, the mathematics in
    /// [`VPCertificate::verify`].
    pub fn from_json(v: &Value) -> Result<VPCertificate> {
        if v.get("format").and_then(Value::as_str) != Some(FORMAT) {
            return Err(Error::Parse("not an sgcat certificate".into()));
        }
        if v.get("version").and_then(Value::as_u64) != Some(VERSION) {
            return Err(Error::Parse("unsupported certificate version".into()));
        }
        let payload = v.get("payload").ok_or_else(|| Error::Parse("missing payload".into()))?;
        let recorded = v.get("digest").and_then(Value::as_str).unwrap_or("");
        if recorded != digest(payload) {
            return Err(fail("digest mismatch"));
        }
        let get = |k: &str| payload.get(k).ok_or_else(|| Error::Parse(format!("payload: missing {k:?}")));
        let aspec: AlgebraSpec = serde_json::from_value(get("algebra")?.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let alg = Algebra::load(&aspec)?;
        let f = alg.field();
        let module_of = |x: &Value| -> Result<Module> {
            let s: ModuleSpec = serde_json::from_value(x.clone()).map_err(|e| Error::Parse(e.to_string()))?;
            Module::from_spec(&alg, &s)
        };
        let uvec = |x: &Value| -> Result<Vec<usize>> {
            serde_json::from_value(x.clone()).map_err(|e| Error::Parse(e.to_string()))
        };
        let uint = |x: &Value| x.as_u64().map(|u| u as usize).ok_or_else(|| Error::Parse("expected integer".into()));
        let mut stages = Vec::new();
        for s in get("stages")?.as_array().ok_or_else(|| Error::Parse("stages".into()))? {
            let field = |k: &str| s.get(k).ok_or_else(|| Error::Parse(format!("stage: missing {k:?}")));
            stages.push(StageWitness {
                cover_mult: uvec(field("cover_mult")?)?,
                epi: Matrix::from_json(f, field("epi")?)?,
                q_mult: uvec(field("q_mult")?)?,
                embed: Matrix::from_json(f, field("embed")?)?,
                next: module_of(field("next")?)?,
            });
        }
        let pdv = get("pd")?;
        let pget = |k: &str| pdv.get(k).ok_or_else(|| Error::Parse(format!("pd: missing {k:?}")));
        let pd = match pget("kind")?.as_str() {
            Some("recurrence") => PdWitness::Recurrence {
                a: uint(pget("a")?)?,
                b: uint(pget("b")?)?,
                iso: Matrix::from_json(f, pget("iso")?)?,
            },
            Some("support-cycle") => PdWitness::SupportCycle {
                a: uint(pget("a")?)?,
                b: uint(pget("b")?)?,
                supports: serde_json::from_value(pget("supports")?.clone()).map_err(|e| Error::Parse(e.to_string()))?,
            },
            _ => return Err(Error::Parse("unknown pd witness".into())),
        };
        Ok(VPCertificate {
            module: module_of(get("module")?)?,
            period: uint(get("period")?)?,
            base: module_of(get("base")?)?,
            base_q: uvec(get("base_q")?)?,
            base_iso: Matrix::from_json(f, get("base_iso")?)?,
            stages,
            pd,
            closure: Arc::new(ClosureNode::from_json(&alg, get("closure")?)?),
        })
    }
}

/// SHA-256 over the canonical (key-sorted, compact) JSON text.
pub fn digest(payload: &Value) -> String {
    let text = serde_json::to_string(payload).expect("json value serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// One horseshoe step: from `0 → A → B → C → 0` to the sequence of kernels
/// of the covers `P_A → A`, `P_A ⊕ P_C → B`, `P_C → C`.
pub fn horseshoe_step(f: &ModuleMap, g: &ModuleMap) -> Result<(ModuleMap, ModuleMap)> {
    let (a, b, c) = (&f.source, &f.target, &g.target);
    let alg = b.algebra();
    let fld = b.field();
    let ca = projective_cover(a);
    let cc = projective_cover(c);
    let mut images = Vec::new();
    for (&v, y) in cc.vertices.iter().zip(&cc.generators) {
        let z = g
            .matrix
            .solve(y)
            .ok_or_else(|| Error::TransportFailure("horseshoe: g is not surjective".into()))?;
        images.push(b.action(alg.idempotents()[v]) * &z);
    }
    let lambda = map_from_generators(alg, b, &cc.vertices, &images);
    let (p, inj, proj) = Module::direct_sum(alg, &[ca.module.clone(), cc.module.clone()]);
    let phi = Matrix::hstack(fld, b.dim(), &[&(&f.matrix * &ca.epi.matrix), &lambda]);
    let (kb, ib) = ModuleMap::new_unchecked(p, b.clone(), phi).kernel();
    let (ka, ia) = ca.epi.kernel();
    let (kc, ic) = cc.epi.kernel();
    let ib_left = ib.matrix.left_inverse().expect("kernel inclusion is injective");
    let ic_left = ic.matrix.left_inverse().expect("kernel inclusion is injective");
    let f2 = &ib_left * &(&inj[0].matrix * &ia.matrix);
    let g2 = &ic_left * &(&proj[1].matrix * &ib.matrix);
    let f2 = ModuleMap::new_unchecked(ka, kb.clone(), f2);
    let g2 = ModuleMap::new_unchecked(kb, kc, g2);
    if !is_short_exact(&f2, &g2) {
        return Err(Error::TransportFailure("horseshoe: kernel sequence is not exact".into()));
    }
    Ok((f2, g2))
}

fn omega(x: &Module, d: usize) -> Result<Module> {
    let mut ch = SyzygyChain::new(x)?;
    ch.extend_to(d)?;
    Ok(ch.syzygy(d).clone())
}

fn find_iso(x: &Module, y: &Module) -> Result<Option<ModuleMap>> {
    if x.dim() != y.dim() || x.dim_vector() != y.dim_vector() {
        return Ok(None);
    }
    Ok(is_isomorphic(x, y)?.witness().cloned())
}

/// Tree for an unstripped module `K` from a tree whose root is isomorphic
/// to the core of `K`.
fn unstrip(k: &Module, core_tree: Arc<ClosureNode>) -> Result<Arc<ClosureNode>> {
    let alg = k.algebra();
    let fld = k.field();
    let st = strip_projective(k)?;
    let iso = find_iso(&st.core, core_tree.module())?
        .ok_or_else(|| Error::TransportFailure("transported tree does not match the syzygy".into()))?;
    let core_node = relabel(&st.core, core_tree, &iso)?;
    let q = st.q_out.target.clone();
    let qleaf = Arc::new(ClosureNode::ProjectiveLeaf {
        iso: Matrix::identity(fld, q.dim()),
        module: q,
        mult: st.projective.clone(),
    });
    let sum = split_sum(alg, vec![core_node, qleaf]);
    let inc = Matrix::vstack(fld, k.dim(), &[&st.retraction.matrix, &st.q_out.matrix]);
    let proj = Matrix::hstack(fld, k.dim(), &[&st.section.matrix, &st.q_in.matrix]);
    Ok(Arc::new(ClosureNode::Summand { module: k.clone(), inc, proj, child: sum }))
}

struct Transport<'a> {
    d: usize,
    base: &'a Arc<ClosureNode>,
    memo: HashMap<*const ClosureNode, Arc<ClosureNode>>,
}

impl Transport<'_> {
    /// Tree for a module isomorphic to the stripped `Ω^d` of the node's
    /// module, built from the tree of `Ω^d M`.
    fn run(&mut self, node: &Arc<ClosureNode>) -> Result<Arc<ClosureNode>> {
        let key = Arc::as_ptr(node);
        if let Some(t) = self.memo.get(&key) {
            return Ok(t.clone());
        }
        let alg = node.module().algebra().clone();
        let out = match node.as_ref() {
            ClosureNode::ProjectiveLeaf { .. } => split_sum(&alg, Vec::new()),
            ClosureNode::AddLeaf { module, r, .. } => {
                let y = omega(module, self.d)?;
                let copies = split_sum(&alg, vec![self.base.clone(); *r]);
                self.summand_of(&y, copies)?
            }
            ClosureNode::Summand { module, child, .. } => {
                let y = omega(module, self.d)?;
                let t = self.run(child)?;
                self.summand_of(&y, t)?
            }
            ClosureNode::Extension { module, f, g, left, right } => {
                let ta = self.run(left)?;
                let tc = self.run(right)?;
                let mut fm = ModuleMap::new_unchecked(left.module().clone(), module.clone(), f.clone());
                let mut gm = ModuleMap::new_unchecked(module.clone(), right.module().clone(), g.clone());
                for _ in 0..self.d {
                    (fm, gm) = horseshoe_step(&fm, &gm)?;
                }
                let la = unstrip(&fm.source, ta)?;
                let lc = unstrip(&gm.target, tc)?;
                let kb = fm.target.clone();
                let ext = Arc::new(ClosureNode::Extension { module: kb.clone(), f: fm.matrix, g: gm.matrix, left: la, right: lc });
                let st = strip_projective(&kb)?;
                Arc::new(ClosureNode::Summand {
                    module: st.core.clone(),
                    inc: st.section.matrix.clone(),
                    proj: st.retraction.matrix.clone(),
                    child: ext,
                })
            }
        };
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    fn summand_of(&self, y: &Module, t: Arc<ClosureNode>) -> Result<Arc<ClosureNode>> {
        if y.is_zero() {
            return Ok(split_sum(y.algebra(), Vec::new()));
        }
        let (i, p) = find_retraction(y, t.module())?
            .ok_or_else(|| Error::TransportFailure("syzygy of a summand is not a summand".into()))?;
        Ok(Arc::new(ClosureNode::Summand { module: y.clone(), inc: i.matrix, proj: p.matrix, child: t }))
    }
}

/// From a certificate for period `d`, a certificate for period `n·d`:
/// `Ω^d` is applied to the closure tree `n − 1` times, transporting
/// extensions with the horseshoe lemma.
pub fn derive_nd_certificate(cert: &VPCertificate, n: usize) -> Result<VPCertificate> {
    if n == 0 {
        return Err(Error::InvalidArgument("multiplier must be at least 1".into()));
    }
    let d = cert.period;
    let mut chain = SyzygyChain::new(&cert.module)?;
    let depth = match &cert.pd {
        PdWitness::Recurrence { b, .. } => (n * d).max(*b),
        PdWitness::SupportCycle { .. } => n * d,
    };
    let stages = stage_witnesses(&mut chain, depth)?;
    let mut tr = Transport { d, base: &cert.closure, memo: HashMap::new() };
    let mut cur = cert.closure.clone();
    for _ in 1..n {
        cur = tr.run(&cur)?;
        tr.memo.clear();
    }
    let target = chain.syzygy(n * d).clone();
    let closure = if cur.module() == &target {
        cur
    } else {
        let iso = find_iso(&target, cur.module())?
            .ok_or_else(|| Error::TransportFailure("derived tree does not match Ω^{nd} M".into()))?;
        relabel(&target, cur, &iso)?
    };
    Ok(build(&chain, &cert.module, n * d, stages, cert.pd.clone(), closure))
}

/// Smallest `d ≤ dmax` with `Ω^d M ≅ M` (up to projective summands).
pub fn detect_periodicity(m: &Module, dmax: usize) -> Result<Option<(usize, ModuleMap)>> {
    let mut ch = SyzygyChain::new(m)?;
    ch.extend_to(dmax)?;
    let x0 = ch.syzygy(0).clone();
    if x0.is_zero() {
        return Ok(None);
    }
    for d in 1..=dmax {
        if let Some(w) = find_iso(&x0, ch.syzygy(d))? {
            return Ok(Some((d, w)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn certified(m: &Module, d: usize) -> VPCertificate {
        match certify_virtually_periodic(m, d, &VpOptions::default()).unwrap() {
            VpOutcome::Certified(c) => *c,
            VpOutcome::Unknown { reason } => panic!("not certified: {reason}"),
        }
    }

    #[test]
    fn truncated_simple_is_periodic_and_certified() {
        let alg = corpus::truncated(3);
        let s = Module::simple(&alg, 0).unwrap();
        assert_eq!(detect_periodicity(&s, 4).unwrap().map(|p| p.0), Some(2));
        let c = certified(&s, 2);
        c.verify().unwrap();
        assert!(matches!(c.pd, PdWitness::Recurrence { a: 0, b: 2, .. }));
    }

    #[test]
    fn two_loop_uses_support_cycle() {
        let alg = corpus::two_loop();
        let s = Module::simple(&alg, 0).unwrap();
        assert!(detect_periodicity(&s, 4).unwrap().is_none());
        let c = certified(&s, 1);
        assert_eq!(c.pd, PdWitness::SupportCycle { a: 0, b: 1, supports: vec![vec![0], vec![0]] });
        c.verify().unwrap();
        let c3 = derive_nd_certificate(&c, 3).unwrap();
        assert_eq!(c3.period, 3);
        assert_eq!(c3.syzygy(3).dim(), 8);
        c3.verify().unwrap();
    }

    #[test]
    fn finite_pd_is_rejected() {
        let alg = corpus::a2();
        let s = Module::simple(&alg, 0).unwrap();
        let s = if Module::projective(&alg, 0).dim() == 1 { Module::simple(&alg, 1).unwrap() } else { s };
        let r = certify_virtually_periodic(&s, 1, &VpOptions::default());
        assert!(matches!(r, Err(Error::FinitePd(1))));
    }

    #[test]
    fn json_roundtrip_and_digest() {
        let alg = corpus::truncated(3);
        let s = Module::simple(&alg, 0).unwrap();
        let c = certified(&s, 2);
        let v = c.to_json();
        let back = VPCertificate::from_json(&v).unwrap();
        back.verify().unwrap();
        assert_eq!(back.to_json(), v);
        let mut bad = v.clone();
        bad["payload"]["period"] = json!(4);
        assert!(matches!(VPCertificate::from_json(&bad), Err(Error::Verification(_))));
    }

    #[test]
    fn derived_certificates_replay() {
        for alg in [corpus::truncated(3), corpus::loop_with_tail()] {
            let s = Module::simple(&alg, 0).unwrap();
            let per = detect_periodicity(&s, 6).unwrap();
            let d = per.map(|p| p.0).unwrap_or(1);
            let c = certified(&s, d);
            for n in 2..=3 {
                let cn = derive_nd_certificate(&c, n).unwrap();
                assert_eq!(cn.period, n * d);
                cn.verify().unwrap();
            }
        }
    }

    #[test]
    fn horseshoe_on_split_sequence() {
        let alg = corpus::truncated(3);
        let s = Module::simple(&alg, 0).unwrap();
        let reg = Module::regular(&alg);
        let (_, inj, proj) = Module::direct_sum(&alg, &[s.clone(), reg]);
        let (f2, g2) = horseshoe_step(&inj[0], &proj[1]).unwrap();
        assert!(is_short_exact(&f2, &g2));
        assert_eq!(f2.source.dim(), 2);
    }
}
