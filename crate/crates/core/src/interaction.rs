//! The interaction group `V^ω` extending the shift endomorphisms:
//! `V_t = L_r ∘ α_s` for `t = s − r`, where `L_r` is the transfer operator
//! weighted by `ω(r, ·)`.

use std::collections::HashMap;
use std::sync::RwLock;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cocycle::{Cocycle, CocycleMode};
use crate::cylinder::{CylinderFunction, ShiftSystem};
use crate::error::{Error, Result};
use crate::lattice::{ball, semigroup_box, LatticeElement};
use crate::linalg::{join, relations, FunctionSpan};
use crate::report::{function_json, CheckEntry, Tally, VerificationReport};
use crate::scalar::Scalar;

/// Default word-length bound of the coherence check run on construction.
pub const COHERENCE_BOUND: u32 = 2;

pub struct InteractionSystem<S> {
    cocycle: Cocycle<S>,
    validation: VerificationReport,
    coherence: VerificationReport,
    weights: RwLock<HashMap<LatticeElement, CylinderFunction<S>>>,
}

impl<S: Scalar> std::fmt::Debug for InteractionSystem<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InteractionSystem")
            .field("cocycle", &self.cocycle)
            .field("valid", &self.validation.all_ok())
            .field("coherent", &self.coherence.all_ok())
            .finish()
    }
}

impl<S: Scalar> InteractionSystem<S> {
    pub fn new(cocycle: Cocycle<S>) -> Self {
        Self::with_coherence_bound(cocycle, COHERENCE_BOUND)
    }

    /// Runs validation and the coherence check and keeps both reports. An
    /// invalid cocycle is still accepted so the suites can report on it.
    pub fn with_coherence_bound(cocycle: Cocycle<S>, bound: u32) -> Self {
        let validation = cocycle.validate();
        let coherence = cocycle.check_coherence(bound);
        InteractionSystem {
            cocycle,
            validation,
            coherence,
            weights: RwLock::new(HashMap::new()),
        }
    }

    pub fn cocycle(&self) -> &Cocycle<S> {
        &self.cocycle
    }

    pub fn system(&self) -> &ShiftSystem {
        self.cocycle.system()
    }

    pub fn rank(&self) -> usize {
        self.system().rank()
    }

    pub fn validation(&self) -> &VerificationReport {
        &self.validation
    }

    pub fn coherence(&self) -> &VerificationReport {
        &self.coherence
    }

    /// `ω(t, ·)` for `t ∈ P`.
    pub fn weight(&self, t: &LatticeElement) -> Result<CylinderFunction<S>> {
        if let Some(w) = self.weights.read().expect("weight cache").get(t) {
            return Ok(w.clone());
        }
        let w = self.cocycle.extend(t)?;
        self.weights
            .write()
            .expect("weight cache")
            .insert(t.clone(), w.clone());
        Ok(w)
    }

    fn check_rank(&self, t: &LatticeElement) -> Result<()> {
        if t.rank() == self.rank() {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                expected: self.rank(),
                found: t.rank(),
            })
        }
    }

    /// `α_t(a) = a ∘ θ_t`.
    pub fn alpha(
        &self,
        t: &LatticeElement,
        a: &CylinderFunction<S>,
    ) -> Result<CylinderFunction<S>> {
        self.check_rank(t)?;
        a.shift_pullback(t)
    }

    /// `L_t(b)(x) = Σ_{θ_t(y) = x} ω(t, y) b(y)`.
    pub fn transfer(
        &self,
        t: &LatticeElement,
        b: &CylinderFunction<S>,
    ) -> Result<CylinderFunction<S>> {
        self.check_rank(t)?;
        let shift = t.to_depth()?;
        if t.is_zero() {
            return Ok(b.clone());
        }
        let w = self.weight(t)?;
        let m = w.join_depth(b);
        // deep enough to strip `t` symbols
        let depth: Vec<usize> = m.iter().zip(&shift).map(|(a, s)| *a.max(s)).collect();
        let product = w
            .raise_depth(&depth)?
            .checked_mul(&b.raise_depth(&depth)?)?;
        product.sum_over_prefixes(&shift)
    }

    /// `V_t(a)` through the minimal decomposition of `t`.
    pub fn v_apply(
        &self,
        t: &LatticeElement,
        a: &CylinderFunction<S>,
    ) -> Result<CylinderFunction<S>> {
        self.check_rank(t)?;
        let (r, s) = t.decompose();
        self.v_apply_via(&r, &s, a)
    }

    /// `L_r(α_s(a))`, which is `V_{s−r}(a)` for any decomposition.
    pub fn v_apply_via(
        &self,
        r: &LatticeElement,
        s: &LatticeElement,
        a: &CylinderFunction<S>,
    ) -> Result<CylinderFunction<S>> {
        self.transfer(r, &self.alpha(s, a)?)
    }

    /// `E_t = α_t ∘ L_t` for `t ∈ P`.
    pub fn expectation(
        &self,
        t: &LatticeElement,
        a: &CylinderFunction<S>,
    ) -> Result<CylinderFunction<S>> {
        self.alpha(t, &self.transfer(t, a)?)
    }

    /// `E_t = V_t V_{−t}` for any `t ∈ G`.
    pub fn group_expectation(
        &self,
        t: &LatticeElement,
        a: &CylinderFunction<S>,
    ) -> Result<CylinderFunction<S>> {
        self.v_apply(t, &self.v_apply(&-t, a)?)
    }

    /// Watatani index of `E_r`: the pointwise reciprocal of `ω(r, ·)`.
    pub fn index(&self, r: &LatticeElement) -> Result<CylinderFunction<S>> {
        self.weight(r)?
            .recip()
            .ok_or_else(|| Error::ZeroWeight(format!("ω{r} vanishes somewhere")))
    }

    fn basis(&self, depth: usize) -> Result<Vec<CylinderFunction<S>>> {
        CylinderFunction::basis(self.system(), &self.system().uniform_depth(depth))
    }

    /// `A_t` truncated to the image of the depth-`depth` functions.
    pub fn range_space(&self, t: &LatticeElement, depth: usize) -> Result<FunctionSpan<S>> {
        let images = self
            .basis(depth)?
            .iter()
            .map(|b| self.v_apply(t, b))
            .collect::<Result<Vec<_>>>()?;
        FunctionSpan::new(images)
    }

    /// The interaction group axioms, checked exhaustively on the indicator
    /// basis of depth `depth` and every `s, t` with `|s|, |t| ≤ bound`.
    pub fn axiom_suite(&self, depth: usize, bound: u32) -> VerificationReport {
        let mut report = VerificationReport::new();
        let basis = match self.basis(depth) {
            Ok(b) => b,
            Err(e) => {
                let mut tally = Tally::new("axioms");
                tally.error(e);
                report.push(tally.finish());
                return report;
            }
        };
        let group = ball(bound, self.rank());
        let zero = LatticeElement::zero(self.rank());

        let mut identity = Tally::new("identity");
        for b in &basis {
            let ok = self.v_apply(&zero, b).map(|v| &v == b);
            observe(&mut identity, ok, || case(&zero, &zero, b, None, None));
        }
        report.push(identity.finish());

        let pairs: Vec<(&LatticeElement, &LatticeElement)> = group
            .iter()
            .flat_map(|s| group.iter().map(move |t| (s, t)))
            .collect();
        let entries: Vec<Vec<CheckEntry>> = pairs
            .par_iter()
            .map(|&(s, t)| self.representation_laws(s, t, &basis))
            .collect();
        report.checks.extend(entries.into_iter().flatten());

        let entries: Vec<Vec<CheckEntry>> = group
            .par_iter()
            .map(|t| self.single_shift_axioms(t, &basis, bound))
            .collect();
        report.checks.extend(entries.into_iter().flatten());
        report
    }

    fn representation_laws(
        &self,
        s: &LatticeElement,
        t: &LatticeElement,
        basis: &[CylinderFunction<S>],
    ) -> Vec<CheckEntry> {
        let st = s + t;
        let neg_s = -s;
        let neg_t = -t;
        let mut left = Tally::new("partial_rep_left").param("s", s).param("t", t);
        let mut right = Tally::new("partial_rep_right").param("s", s).param("t", t);
        for b in basis {
            // V_{−s} V_s V_t = V_{−s} V_{s+t}
            let sides = (|| {
                let lhs = self.v_apply(&neg_s, &self.v_apply(s, &self.v_apply(t, b)?)?)?;
                let rhs = self.v_apply(&neg_s, &self.v_apply(&st, b)?)?;
                Ok::<_, Error>((lhs, rhs))
            })();
            compare_sides(&mut left, sides, |l, r| case(s, t, b, Some(l), Some(r)));

            // V_s V_t V_{−t} = V_{s+t} V_{−t}
            let sides = (|| {
                let inner = self.v_apply(&neg_t, b)?;
                let lhs = self.v_apply(s, &self.v_apply(t, &inner)?)?;
                let rhs = self.v_apply(&st, &inner)?;
                Ok::<_, Error>((lhs, rhs))
            })();
            compare_sides(&mut right, sides, |l, r| case(s, t, b, Some(l), Some(r)));
        }
        vec![left.finish(), right.finish()]
    }

    fn single_shift_axioms(
        &self,
        t: &LatticeElement,
        basis: &[CylinderFunction<S>],
        bound: u32,
    ) -> Vec<CheckEntry> {
        let zero = LatticeElement::zero(self.rank());
        let one = CylinderFunction::one(self.system());
        let mut out = Vec::new();

        let mut unital = Tally::new("unital").param("t", t);
        let ok = self.v_apply(t, &one).map(|v| v == one);
        observe(&mut unital, ok, || case(&zero, t, &one, None, None));
        out.push(unital.finish());

        let mut positive = Tally::new("positive").param("t", t);
        for b in basis {
            match self.v_apply(t, b) {
                Ok(v) => {
                    let ok = v.is_positive();
                    positive.observe(ok, || case(&zero, t, b, Some(&v), None));
                }
                Err(e) => positive.error(e),
            }
        }
        out.push(positive.finish());

        // V_t(ab) = V_t(a)V_t(b) whenever a lies in the range of V_{−t}
        let neg_t = -t;
        let mut multiplicative = Tally::new("multiplicative").param("t", t);
        for x in basis {
            let a = match self.v_apply(&neg_t, x) {
                Ok(a) => a,
                Err(e) => {
                    multiplicative.error(e);
                    continue;
                }
            };
            for b in basis {
                for (p, q) in [(&a, b), (b, &a)] {
                    let sides = (|| {
                        let lhs = self.v_apply(t, &p.checked_mul(q)?)?;
                        let rhs = self.v_apply(t, p)?.checked_mul(&self.v_apply(t, q)?)?;
                        Ok::<_, Error>((lhs, rhs))
                    })();
                    compare_sides(&mut multiplicative, sides, |l, r| {
                        let mut w = case(&zero, t, b, Some(l), Some(r));
                        w["range_element_of"] = json!(x.to_string_word());
                        w
                    });
                }
            }
        }
        out.push(multiplicative.finish());

        let mut independence = Tally::new("decomposition_independence").param("t", t);
        for b in basis {
            let minimal = match self.v_apply(t, b) {
                Ok(v) => v,
                Err(e) => {
                    independence.error(e);
                    continue;
                }
            };
            for (r, s) in t.decompositions(bound) {
                match self.v_apply_via(&r, &s, b) {
                    Ok(v) => independence.observe(v == minimal, || {
                        let mut w = case(&zero, t, b, Some(&v), Some(&minimal));
                        w["decomposition"] = json!([r.to_string(), s.to_string()]);
                        w
                    }),
                    Err(e) => independence.error(e),
                }
            }
        }
        out.push(independence.finish());
        out
    }

    /// The partial action `γ` on the ranges `A_t` and the commuting family
    /// of conditional expectations.
    pub fn partial_action_suite(&self, depth: usize, bound: u32) -> VerificationReport {
        let mut report = VerificationReport::new();
        let group = ball(bound, self.rank());
        let entries: Vec<Vec<CheckEntry>> = group
            .par_iter()
            .map(|t| self.partial_action_at(t, &group, depth))
            .collect();
        report.checks.extend(entries.into_iter().flatten());

        let semigroup: Vec<LatticeElement> =
            group.iter().filter(|t| t.is_semigroup()).cloned().collect();
        let basis = self.basis(depth).unwrap_or_default();
        let pairs: Vec<(&LatticeElement, &LatticeElement)> = semigroup
            .iter()
            .flat_map(|r| semigroup.iter().map(move |s| (r, s)))
            .collect();
        let entries: Vec<CheckEntry> = pairs
            .par_iter()
            .map(|&(r, s)| {
                let mut tally = Tally::new("expectations_commute")
                    .param("r", r)
                    .param("s", s);
                for b in &basis {
                    let sides = (|| {
                        let lhs = self.expectation(r, &self.expectation(s, b)?)?;
                        let rhs = self.expectation(s, &self.expectation(r, b)?)?;
                        Ok::<_, Error>((lhs, rhs))
                    })();
                    compare_sides(&mut tally, sides, |l, rr| case(r, s, b, Some(l), Some(rr)));
                }
                tally.finish()
            })
            .collect();
        report.checks.extend(entries);
        report
    }

    fn partial_action_at(
        &self,
        t: &LatticeElement,
        group: &[LatticeElement],
        depth: usize,
    ) -> Vec<CheckEntry> {
        match self.try_partial_action_at(t, group, depth) {
            Ok(entries) => entries,
            Err(e) => {
                let mut tally = Tally::new("partial_action").param("t", t);
                tally.error(e);
                vec![tally.finish()]
            }
        }
    }

    fn try_partial_action_at(
        &self,
        t: &LatticeElement,
        group: &[LatticeElement],
        depth: usize,
    ) -> Result<Vec<CheckEntry>> {
        let zero = LatticeElement::zero(self.rank());
        let neg_t = -t;
        let basis = self.basis(depth)?;
        let mut out = Vec::new();

        // A_t for t ∈ P is the range of α_t
        if t.is_semigroup() {
            let mut tally = Tally::new("range_of_shift").param("t", t);
            let a_t = self.range_space(t, depth)?;
            let tail = self.tail_space(t, depth)?;
            let ok = a_t.same_as(&tail)?;
            tally.observe(ok, || {
                json!({ "t": t.to_string(), "dim_range": a_t.dim(), "dim_expected": tail.dim() })
            });
            out.push(tally.finish());

            let mut formula = Tally::new("expectation_formula").param("t", t);
            for b in &basis {
                let sides = self
                    .expectation(t, b)
                    .and_then(|l| Ok((l, self.group_expectation(t, b)?)));
                compare_sides(&mut formula, sides, |l, r| {
                    case(&zero, t, b, Some(l), Some(r))
                });
            }
            out.push(formula.finish());
        }

        // γ_t: A_{−t} → A_t with inverse γ_{−t}
        let domain: Vec<CylinderFunction<S>> = basis
            .iter()
            .map(|b| self.v_apply(&neg_t, b))
            .collect::<Result<_>>()?;
        let domain_span = FunctionSpan::new(domain.clone())?;
        let images: Vec<CylinderFunction<S>> = domain
            .iter()
            .map(|v| self.v_apply(t, v))
            .collect::<Result<_>>()?;
        // every image and every E_t(b) is V_t of something this deep
        let domain_depth = domain
            .iter()
            .fold(vec![0; self.rank()], |d, v| join(&d, v.depth()));
        let target = self.range_at_depth(t, &domain_depth)?;

        let mut inverse = Tally::new("gamma_inverse").param("t", t);
        for ((v, w), b) in domain.iter().zip(&images).zip(&basis) {
            let back = self.v_apply(&neg_t, w)?;
            let member = target.contains(w)?;
            inverse.observe(member && &back == v, || {
                json!({
                    "t": t.to_string(),
                    "basis": b.to_string_word(),
                    "element": function_json(v),
                    "image": function_json(w),
                    "image_in_range": member,
                    "round_trip": function_json(&back),
                })
            });
        }
        out.push(inverse.finish());

        let mut bijective = Tally::new("gamma_bijective").param("t", t);
        let image_span = FunctionSpan::new(images.clone())?;
        bijective.observe(image_span.dim() == domain_span.dim(), || {
            json!({ "t": t.to_string(), "dim_domain": domain_span.dim(), "dim_image": image_span.dim() })
        });
        out.push(bijective.finish());

        let mut idempotent = Tally::new("expectation_idempotent").param("t", t);
        let mut range = Tally::new("expectation_range").param("t", t);
        for (b, w) in basis.iter().zip(&images) {
            let e = self.group_expectation(t, b)?;
            let ee = self.group_expectation(t, &e)?;
            idempotent.observe(ee == e, || case(&zero, t, b, Some(&ee), Some(&e)));
            // E_t(b) ∈ A_t, and every generator V_t V_{−t}(b) of A_t is fixed
            let fixed = self.group_expectation(t, w)?;
            let member = target.contains(&e)?;
            range.observe(member && &fixed == w, || {
                json!({
                    "t": t.to_string(),
                    "basis": b.to_string_word(),
                    "expectation_in_range": member,
                    "generator": function_json(w),
                    "expectation_of_generator": function_json(&fixed),
                })
            });
        }
        out.push(idempotent.finish());
        out.push(range.finish());

        // E_t(w b) = w E_t(b) and E_t(b w) = E_t(b) w for w ∈ A_t
        let mut bimodule = Tally::new("expectation_bimodule").param("t", t);
        for w in &images {
            for b in &basis {
                let sides = (|| {
                    let lhs = self.group_expectation(t, &w.checked_mul(b)?)?;
                    let rhs = w.checked_mul(&self.group_expectation(t, b)?)?;
                    Ok::<_, Error>((lhs, rhs))
                })();
                compare_sides(&mut bimodule, sides, |l, r| {
                    case(&zero, t, b, Some(l), Some(r))
                });
            }
        }
        out.push(bimodule.finish());

        for s in group {
            out.push(self.composition_check(s, t, &domain, &images)?);
        }
        Ok(out)
    }

    /// `γ_{s+t}` extends `γ_s γ_t`: on every `c ∈ A_{−t}` with
    /// `γ_t(c) ∈ A_{−s}`, `c ∈ A_{−(s+t)}` and `V_s V_t c = V_{s+t} c`.
    fn composition_check(
        &self,
        s: &LatticeElement,
        t: &LatticeElement,
        domain: &[CylinderFunction<S>],
        images: &[CylinderFunction<S>],
    ) -> Result<CheckEntry> {
        let st = s + t;
        let neg_st = -&st;
        let mut tally = Tally::new("gamma_composition").param("s", s).param("t", t);

        // A_{−s} generated deep enough to contain every γ_s γ_t(c) preimage
        let pushed: Vec<CylinderFunction<S>> = images
            .iter()
            .map(|u| self.v_apply(s, u))
            .collect::<Result<_>>()?;
        let deep = pushed
            .iter()
            .chain(images)
            .fold(vec![0; self.rank()], |d, v| join(&d, v.depth()));
        let generators: Vec<CylinderFunction<S>> = CylinderFunction::basis(self.system(), &deep)?
            .iter()
            .map(|b| self.v_apply(&-s, b))
            .collect::<Result<_>>()?;
        let common = generators
            .iter()
            .chain(images)
            .fold(vec![0; self.rank()], |d, v| join(&d, v.depth()));
        let mut vectors = Vec::with_capacity(images.len() + generators.len());
        for u in images {
            vectors.push(u.raise_depth(&common)?.into_table());
        }
        for g in &generators {
            vectors.push(g.raise_depth(&common)?.into_table());
        }

        // relations λ with Σ λ_j u_j ∈ span(generators) give the domain
        let n = images.len();
        let mut seen = FunctionSpan::new(vec![CylinderFunction::zero(self.system())])?;
        for rel in relations(&vectors) {
            let mut c = CylinderFunction::zero(self.system());
            for (lambda, d) in rel[..n].iter().zip(domain) {
                if !lambda.is_zero() {
                    c = c.checked_add(&d.scale(lambda))?;
                }
            }
            if c.is_zero() || seen.contains(&c)? {
                continue;
            }
            let mut gens = seen.generators().to_vec();
            gens.push(c.clone());
            seen = FunctionSpan::new(gens)?;

            let lhs = self.v_apply(s, &self.v_apply(t, &c)?)?;
            let rhs = self.v_apply(&st, &c)?;
            let in_domain = self.group_expectation(&neg_st, &c)? == c;
            tally.observe(in_domain && lhs == rhs, || {
                json!({
                    "s": s.to_string(),
                    "t": t.to_string(),
                    "element": function_json(&c),
                    "in_domain_of_product": in_domain,
                    "lhs": function_json(&lhs),
                    "rhs": function_json(&rhs),
                })
            });
        }
        Ok(tally.finish())
    }

    fn range_at_depth(&self, t: &LatticeElement, depth: &[usize]) -> Result<FunctionSpan<S>> {
        let images = CylinderFunction::basis(self.system(), depth)?
            .iter()
            .map(|b| self.v_apply(t, b))
            .collect::<Result<Vec<_>>>()?;
        FunctionSpan::new(images)
    }

    /// Functions of depth `depth + t` that ignore the first `t` symbols,
    /// built directly as sums of indicators.
    fn tail_space(&self, t: &LatticeElement, depth: usize) -> Result<FunctionSpan<S>> {
        let shift = t.to_depth()?;
        let inner = self.system().uniform_depth(depth);
        let outer: Vec<usize> = inner.iter().zip(&shift).map(|(a, b)| a + b).collect();
        let gens = self
            .system()
            .words(&inner)
            .into_iter()
            .map(|u| {
                CylinderFunction::from_fn(self.system(), outer.clone(), |w| {
                    if w.shift(&shift).expect("covers shift") == u {
                        S::one()
                    } else {
                        S::zero()
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FunctionSpan::new(gens)
    }
}

/// `V_t(a)` against `V'_{−r}((Index E'_r / Index E_r) · α_s(a))`, the form
/// any other interaction group extending the same shift takes.
pub fn compare<S: Scalar>(
    is: &InteractionSystem<S>,
    other: &InteractionSystem<S>,
    t: &LatticeElement,
    a: &CylinderFunction<S>,
) -> Result<(CylinderFunction<S>, CylinderFunction<S>)> {
    if is.system() != other.system() {
        return Err(Error::SystemMismatch);
    }
    for sys in [is, other] {
        if sys.cocycle().mode() == CocycleMode::Relaxed {
            return Err(Error::ZeroWeight("relaxed cocycle has no index".into()));
        }
    }
    let (r, s) = t.decompose();
    let lhs = is.v_apply(t, a)?;
    let ratio = other.index(&r)?.checked_mul(
        &is.index(&r)?
            .recip()
            .ok_or_else(|| Error::ZeroWeight("index vanishes".into()))?,
    )?;
    let rhs = other.transfer(&r, &ratio.checked_mul(&is.alpha(&s, a)?)?)?;
    Ok((lhs, rhs))
}

/// [`compare`] on every depth-`depth` indicator and every `|t| ≤ bound`.
pub fn compare_suite<S: Scalar>(
    is: &InteractionSystem<S>,
    other: &InteractionSystem<S>,
    depth: usize,
    bound: u32,
) -> VerificationReport {
    let mut report = VerificationReport::new();
    let zero = LatticeElement::zero(is.rank());
    let basis = match is.basis(depth) {
        Ok(b) => b,
        Err(e) => {
            let mut tally = Tally::new("compare");
            tally.error(e);
            report.push(tally.finish());
            return report;
        }
    };
    for t in ball(bound, is.rank()) {
        let mut tally = Tally::new("compare").param("t", &t);
        for b in &basis {
            let sides = compare(is, other, &t, b);
            compare_sides(&mut tally, sides, |l, r| {
                case(&zero, &t, b, Some(l), Some(r))
            });
        }
        report.push(tally.finish());
    }
    report
}

/// Levels `r ≤ n·1` in lexicographic order.
pub(crate) fn levels(n: u32, rank: usize) -> Vec<LatticeElement> {
    semigroup_box(n as i64, rank)
}

fn observe(tally: &mut Tally, ok: Result<bool>, witness: impl FnOnce() -> Value) {
    match ok {
        Ok(ok) => tally.observe(ok, witness),
        Err(e) => tally.error(e),
    }
}

fn compare_sides<S: Scalar>(
    tally: &mut Tally,
    sides: Result<(CylinderFunction<S>, CylinderFunction<S>)>,
    witness: impl FnOnce(&CylinderFunction<S>, &CylinderFunction<S>) -> Value,
) {
    match sides {
        Ok((l, r)) => tally.observe(l == r, || witness(&l, &r)),
        Err(e) => tally.error(e),
    }
}

fn case<S: Scalar>(
    s: &LatticeElement,
    t: &LatticeElement,
    basis: &CylinderFunction<S>,
    lhs: Option<&CylinderFunction<S>>,
    rhs: Option<&CylinderFunction<S>>,
) -> Value {
    let mut w = json!({
        "s": s.to_string(),
        "t": t.to_string(),
        "basis": basis.to_string_word(),
    });
    if let Some(l) = lhs {
        w["lhs"] = function_json(l);
    }
    if let Some(r) = rhs {
        w["rhs"] = function_json(r);
    }
    w
}

trait BasisLabel {
    fn to_string_word(&self) -> String;
}

impl<S: Scalar> BasisLabel for CylinderFunction<S> {
    /// The cylinder word of an indicator, else the table.
    fn to_string_word(&self) -> String {
        let ones: Vec<_> = self.entries().filter(|(_, v)| !v.is_zero()).collect();
        match ones.as_slice() {
            [(w, v)] if v.is_one() => format!("1[{w}]"),
            _ => function_json(self).to_string(),
        }
    }
}
