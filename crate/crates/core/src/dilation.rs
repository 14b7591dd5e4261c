//! The minimal admissible dilation `(B, β, F)` as a direct limit of copies
//! of the cylinder algebra glued along the shift endomorphisms.
//!
//! The spectrum of `B` is never built as a point set; cylinder masses and
//! evaluation of representatives are all the checks need.

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cocycle::CocycleMode;
use crate::cylinder::{CylinderFunction, Word};
use crate::error::{Error, Result};
use crate::interaction::{levels, InteractionSystem};
use crate::lattice::{ball, LatticeElement};
use crate::linalg::{join, relations, FunctionSpan};
use crate::report::{function_json, CheckEntry, Status, Tally, VerificationReport};
use crate::scalar::Scalar;

/// `(r, a)` stands for `β_{−r}(i(a))`; `(r, a)` and `(r + u, α_u(a))` are
/// the same element.
#[derive(Clone)]
pub struct DilationElement<S> {
    level: LatticeElement,
    func: CylinderFunction<S>,
}

impl<S: Scalar> DilationElement<S> {
    pub fn new(level: LatticeElement, func: CylinderFunction<S>) -> Result<Self> {
        level.require_semigroup()?;
        if level.rank() != func.system().rank() {
            return Err(Error::RankMismatch {
                expected: func.system().rank(),
                found: level.rank(),
            });
        }
        Ok(DilationElement { level, func })
    }

    /// `i(a)`.
    pub fn embed(func: CylinderFunction<S>) -> Self {
        DilationElement {
            level: LatticeElement::zero(func.system().rank()),
            func,
        }
    }

    pub fn level(&self) -> &LatticeElement {
        &self.level
    }

    pub fn func(&self) -> &CylinderFunction<S> {
        &self.func
    }

    /// The representative at a level above the current one.
    pub fn raise_to(&self, level: &LatticeElement) -> Result<Self> {
        let u = level.checked_sub(&self.level)?;
        if !u.is_semigroup() {
            return Err(Error::DepthDecrease {
                from: self.level.to_depth()?,
                to: level.to_depth().unwrap_or_default(),
            });
        }
        Ok(DilationElement {
            level: level.clone(),
            func: self.func.shift_pullback(&u)?,
        })
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        if self.func.system() != other.func.system() {
            return Err(Error::SystemMismatch);
        }
        let level = self.level.join(&other.level)?;
        Ok((self.raise_to(&level)?, other.raise_to(&level)?))
    }

    /// `β_u`.
    pub fn beta(&self, u: &LatticeElement) -> Result<Self> {
        let w = u.checked_sub(&self.level)?.positive_part();
        let level = &(&self.level + &w) - u;
        Ok(DilationElement {
            level,
            func: self.func.shift_pullback(&w)?,
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        Ok(DilationElement {
            func: a.func.checked_add(&b.func)?,
            level: a.level,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        Ok(DilationElement {
            func: a.func.checked_sub(&b.func)?,
            level: a.level,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        Ok(DilationElement {
            func: a.func.checked_mul(&b.func)?,
            level: a.level,
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        DilationElement {
            level: self.level.clone(),
            func: self.func.scale(c),
        }
    }

    pub fn conj(&self) -> Self {
        DilationElement {
            level: self.level.clone(),
            func: self.func.conj(),
        }
    }

    /// Entrywise `≥ 0`; raising does not change the set of entries.
    pub fn is_positive(&self) -> bool {
        self.func.is_positive()
    }

    pub fn is_zero(&self) -> bool {
        self.func.is_zero()
    }

    /// `a` with `self = i(a)`, if the element lies in `i(A)`.
    pub fn as_embedded(&self) -> Result<Option<CylinderFunction<S>>> {
        self.func.shift_preimage(&self.level)
    }
}

impl<S: Scalar> PartialEq for DilationElement<S> {
    fn eq(&self, other: &Self) -> bool {
        match self.aligned(other) {
            Ok((a, b)) => a.func == b.func,
            Err(_) => false,
        }
    }
}

impl<S: Scalar> std::fmt::Debug for DilationElement<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DilationElement(level={}, {:?})", self.level, self.func)
    }
}

/// The dilation of an interaction system.
pub struct Dilation<'a, S> {
    system: &'a InteractionSystem<S>,
}

impl<S> Clone for Dilation<'_, S> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<S> Copy for Dilation<'_, S> {}

impl<S: Scalar> std::fmt::Debug for Dilation<'_, S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Dilation")
            .field("system", self.system)
            .finish()
    }
}

impl<'a, S: Scalar> Dilation<'a, S> {
    pub fn new(system: &'a InteractionSystem<S>) -> Self {
        Dilation { system }
    }

    pub fn interaction(&self) -> &'a InteractionSystem<S> {
        self.system
    }

    pub fn one(&self) -> DilationElement<S> {
        DilationElement::embed(CylinderFunction::one(self.system.system()))
    }

    /// `F((t, a)) = i(L_t(a))`.
    pub fn expectation(&self, e: &DilationElement<S>) -> Result<DilationElement<S>> {
        Ok(DilationElement::embed(
            self.system.transfer(&e.level, &e.func)?,
        ))
    }

    /// `F_t = β_t F β_{−t}`.
    pub fn expectation_at(
        &self,
        t: &LatticeElement,
        e: &DilationElement<S>,
    ) -> Result<DilationElement<S>> {
        self.expectation(&e.beta(&-t)?)?.beta(t)
    }

    /// `F ∘ β_t ∘ i`, read back in `A`.
    pub fn induced(
        &self,
        t: &LatticeElement,
        a: &CylinderFunction<S>,
    ) -> Result<CylinderFunction<S>> {
        let e = self.expectation(&DilationElement::embed(a.clone()).beta(t)?)?;
        Ok(e.as_embedded()?.expect("F lands in i(A)"))
    }

    /// `μ_x` of the cylinder over the lift `y` at level `r`: `ω(r, y)`.
    pub fn fiber_measure(&self, x: &Word, r: &LatticeElement, y: &Word) -> Result<S> {
        let shift = r.to_depth()?;
        let lifted = y.lengths().iter().zip(&shift).all(|(a, b)| a >= b) && y.shift(&shift)? == *x;
        if !lifted {
            return Err(Error::NotALift {
                base: x.to_string(),
                level: r.to_string(),
                lift: y.to_string(),
            });
        }
        self.system.weight(r)?.evaluate(y)
    }

    fn spanning(&self, depth: usize, bound: u32) -> Result<Vec<DilationElement<S>>> {
        let basis = CylinderFunction::basis(
            self.system.system(),
            &self.system.system().uniform_depth(depth),
        )?;
        Ok(levels(bound, self.system.rank())
            .into_iter()
            .flat_map(|r| {
                basis.iter().map(move |a| DilationElement {
                    level: r.clone(),
                    func: a.clone(),
                })
            })
            .collect())
    }

    /// The dilation law, admissibility, the restriction residual, the
    /// induced interaction group and the restricted partial action, for
    /// every `|t| ≤ bound` and spanning elements `(r, a)` with `r ≤ bound·1`
    /// and `a` an indicator of depth `depth`.
    pub fn dilation_suite(&self, depth: usize, bound: u32) -> VerificationReport {
        let mut report = VerificationReport::new();
        let (basis, spanning) = match CylinderFunction::basis(
            self.system.system(),
            &self.system.system().uniform_depth(depth),
        )
        .and_then(|b| Ok((b, self.spanning(depth, bound)?)))
        {
            Ok(v) => v,
            Err(e) => {
                let mut tally = Tally::new("dilation");
                tally.error(e);
                report.push(tally.finish());
                return report;
            }
        };
        let group = ball(bound, self.system.rank());
        let entries: Vec<Vec<CheckEntry>> = group
            .par_iter()
            .map(|t| self.families_at(t, &group, &basis, &spanning))
            .collect();
        report.checks.extend(entries.into_iter().flatten());
        report
            .checks
            .extend(self.structure_checks(&group, &basis, &spanning));
        report
    }

    fn families_at(
        &self,
        t: &LatticeElement,
        group: &[LatticeElement],
        basis: &[CylinderFunction<S>],
        spanning: &[DilationElement<S>],
    ) -> Vec<CheckEntry> {
        let one = self.one();
        let mut out = Vec::new();

        // (1) F β_t i = i V_t
        let mut law = Tally::new("dilation_law").param("t", t);
        for a in basis {
            let sides = (|| {
                let lhs = self.expectation(&DilationElement::embed(a.clone()).beta(t)?)?;
                let rhs = DilationElement::embed(self.system.v_apply(t, a)?);
                Ok::<_, Error>((lhs, rhs))
            })();
            compare_elements(
                &mut law,
                sides,
                || json!({ "t": t.to_string(), "a": function_json(a) }),
            );
        }
        out.push(law.finish());

        // (2) F F_t = F_t F and (4) F(d* d) = 0 for d = (F F_t − F_t F)(b)
        let mut commute = Tally::new("admissible_commute").param("t", t);
        let mut residual = Tally::new("restriction_residual").param("t", t);
        for e in spanning {
            let sides = (|| {
                let lhs = self.expectation(&self.expectation_at(t, e)?)?;
                let rhs = self.expectation_at(t, &self.expectation(e)?)?;
                Ok::<_, Error>((lhs, rhs))
            })();
            match sides {
                Ok((lhs, rhs)) => {
                    commute.observe(lhs == rhs, || element_case(t, e, &lhs, &rhs));
                    let value = lhs
                        .checked_sub(&rhs)
                        .and_then(|d| self.expectation(&d.conj().checked_mul(&d)?));
                    match value {
                        Ok(v) => residual.observe(v.is_zero(), || {
                            json!({
                                "t": t.to_string(),
                                "element": element_json(e),
                                "value": element_json(&v),
                            })
                        }),
                        Err(err) => residual.error(err),
                    }
                }
                Err(err) => {
                    commute.error(err.clone());
                    residual.error(err);
                }
            }
        }
        out.push(commute.finish());
        out.push(residual.finish());

        // (3) F β_t F(1) = F(1)
        let mut unit = Tally::new("admissible_unit").param("t", t);
        let sides = (|| {
            let f1 = self.expectation(&one)?;
            Ok::<_, Error>((self.expectation(&f1.beta(t)?)?, f1))
        })();
        compare_elements(&mut unit, sides, || json!({ "t": t.to_string() }));
        out.push(unit.finish());

        // (5) the induced map t ↦ F β_t i is V and satisfies both laws
        let mut induced = Tally::new("induced_map").param("t", t);
        for a in basis {
            let sides = self
                .induced(t, a)
                .and_then(|l| Ok((l, self.system.v_apply(t, a)?)));
            compare_functions(
                &mut induced,
                sides,
                || json!({ "t": t.to_string(), "a": function_json(a) }),
            );
        }
        out.push(induced.finish());
        let mut laws = Tally::new("induced_partial_rep").param("t", t);
        for s in group {
            let st = s + t;
            for a in basis {
                let sides = (|| {
                    let lhs = self.induced(&-s, &self.induced(s, &self.induced(t, a)?)?)?;
                    let rhs = self.induced(&-s, &self.induced(&st, a)?)?;
                    Ok::<_, Error>((lhs, rhs))
                })();
                compare_functions(
                    &mut laws,
                    sides,
                    || json!({ "law": "left", "s": s.to_string(), "t": t.to_string(), "a": function_json(a) }),
                );
                let sides = (|| {
                    let inner = self.induced(&-t, a)?;
                    let lhs = self.induced(s, &self.induced(t, &inner)?)?;
                    let rhs = self.induced(&st, &inner)?;
                    Ok::<_, Error>((lhs, rhs))
                })();
                compare_functions(
                    &mut laws,
                    sides,
                    || json!({ "law": "right", "s": s.to_string(), "t": t.to_string(), "a": function_json(a) }),
                );
            }
        }
        out.push(laws.finish());

        // (6) i(A) ∩ β_t(i(A)) = i(A_t)
        let mut restriction = Tally::new("restriction_ranges").param("t", t);
        match self.restricted_range(t, basis) {
            Ok((meet, range)) => {
                let ok = meet.same_as(&range).unwrap_or(false);
                restriction.observe(ok, || {
                    json!({
                        "t": t.to_string(),
                        "dim_intersection": meet.dim(),
                        "dim_range": range.dim(),
                    })
                });
            }
            Err(e) => restriction.error(e),
        }
        out.push(restriction.finish());
        out
    }

    /// `{c : i(c) = β_t(i(a))}` for `a` in the span of `basis`, next to
    /// `A_t` computed from the same functions.
    fn restricted_range(
        &self,
        t: &LatticeElement,
        basis: &[CylinderFunction<S>],
    ) -> Result<(FunctionSpan<S>, FunctionSpan<S>)> {
        let sys = self.system.system();
        let images: Vec<DilationElement<S>> = basis
            .iter()
            .map(|a| DilationElement::embed(a.clone()).beta(t))
            .collect::<Result<_>>()?;
        // every image sits at the same level r
        let r = images[0].level.clone();
        let depth = images
            .iter()
            .fold(r.to_depth()?, |d, e| join(&d, e.func.depth()));
        let shift = r.to_depth()?;
        let inner: Vec<usize> = depth.iter().zip(&shift).map(|(a, b)| a - b).collect();
        // range of α_r at this depth
        let tails: Vec<CylinderFunction<S>> = CylinderFunction::basis(sys, &inner)?
            .iter()
            .map(|g| g.shift_pullback(&r))
            .collect::<Result<_>>()?;
        let mut vectors = Vec::with_capacity(images.len() + tails.len());
        for e in &images {
            vectors.push(e.func.raise_depth(&depth)?.into_table());
        }
        for g in &tails {
            vectors.push(g.raise_depth(&depth)?.into_table());
        }
        let n = images.len();
        let mut meet = vec![CylinderFunction::zero(sys)];
        for rel in relations(&vectors) {
            let mut combo = CylinderFunction::zero(sys);
            for (lambda, e) in rel[..n].iter().zip(&images) {
                if !lambda.is_zero() {
                    combo = combo.checked_add(&e.func.scale(lambda))?;
                }
            }
            let c = combo
                .shift_preimage(&r)?
                .expect("combination lies in the range of the shift");
            meet.push(c);
        }
        let range = basis
            .iter()
            .map(|a| self.system.v_apply(t, a))
            .collect::<Result<Vec<_>>>()?;
        Ok((FunctionSpan::new(meet)?, FunctionSpan::new(range)?))
    }

    fn structure_checks(
        &self,
        group: &[LatticeElement],
        basis: &[CylinderFunction<S>],
        spanning: &[DilationElement<S>],
    ) -> Vec<CheckEntry> {
        let mut out = Vec::new();

        let mut action = Tally::new("beta_action");
        for u in group {
            for v in group {
                let uv = u + v;
                for e in spanning {
                    let sides = e
                        .beta(v)
                        .and_then(|x| x.beta(u))
                        .and_then(|l| Ok((l, e.beta(&uv)?)));
                    compare_elements(
                        &mut action,
                        sides,
                        || json!({ "u": u.to_string(), "v": v.to_string(), "element": element_json(e) }),
                    );
                }
            }
        }
        out.push(action.finish());

        let mut automorphism = Tally::new("beta_multiplicative");
        for u in group {
            for e in spanning {
                for f in spanning {
                    let sides = (|| {
                        let lhs = e.checked_mul(f)?.beta(u)?;
                        let rhs = e.beta(u)?.checked_mul(&f.beta(u)?)?;
                        Ok::<_, Error>((lhs, rhs))
                    })();
                    compare_elements(
                        &mut automorphism,
                        sides,
                        || json!({ "u": u.to_string(), "e": element_json(e), "f": element_json(f) }),
                    );
                }
            }
        }
        out.push(automorphism.finish());

        let mut unital = Tally::new("expectation_unital");
        let one = self.one();
        compare_elements(
            &mut unital,
            self.expectation(&one).map(|f| (f, one.clone())),
            || json!({}),
        );
        out.push(unital.finish());

        let mut idempotent = Tally::new("expectation_idempotent");
        let mut positive = Tally::new("expectation_positive");
        let mut bimodule = Tally::new("expectation_bimodule");
        for e in spanning {
            match self.expectation(e) {
                Ok(fe) => {
                    positive.observe(fe.is_positive(), || element_json(e));
                    compare_elements(
                        &mut idempotent,
                        self.expectation(&fe).map(|ffe| (ffe, fe.clone())),
                        || element_json(e),
                    );
                    for a in basis {
                        for b in basis {
                            let (ia, ib) = (
                                DilationElement::embed(a.clone()),
                                DilationElement::embed(b.clone()),
                            );
                            let sides = (|| {
                                let lhs =
                                    self.expectation(&ia.checked_mul(e)?.checked_mul(&ib)?)?;
                                let rhs = ia.checked_mul(&fe)?.checked_mul(&ib)?;
                                Ok::<_, Error>((lhs, rhs))
                            })();
                            compare_elements(&mut bimodule, sides, || {
                                json!({
                                    "element": element_json(e),
                                    "a": function_json(a),
                                    "b": function_json(b),
                                })
                            });
                        }
                    }
                }
                Err(err) => positive.error(err),
            }
        }
        out.push(idempotent.finish());
        out.push(positive.finish());
        out.push(bimodule.finish());

        let mut representatives = Tally::new("expectation_well_defined");
        for e in spanning {
            for u in levels(1, self.system.rank()) {
                let sides = e
                    .raise_to(&(&e.level + &u))
                    .and_then(|raised| Ok((self.expectation(&raised)?, self.expectation(e)?)));
                compare_elements(
                    &mut representatives,
                    sides,
                    || json!({ "element": element_json(e), "raised_by": u.to_string() }),
                );
            }
        }
        out.push(representatives.finish());
        out
    }

    /// Strict cocycles get a certificate: every weight up to level `n` is
    /// positive, so each `F((r, 1_w))` is a nonzero positive function and
    /// no positive combination is annihilated. Otherwise levels `≤ n` and
    /// cylinders of depth `≤ depth` are searched for `b ≥ 0` with
    /// `F(b*b) = 0`.
    pub fn faithfulness(&self, n: u32, depth: usize) -> VerificationReport {
        let mut report = VerificationReport::new();
        let mode = self.system.cocycle().mode();
        let tally = Tally::new("faithfulness")
            .param("level_bound", n)
            .param("depth", depth)
            .param("mode", format!("{mode:?}").to_lowercase());
        report.push(match self.faithfulness_entry(tally, n, depth, mode) {
            Ok(entry) => entry,
            Err((mut tally, e)) => {
                tally.error(e);
                (*tally).finish()
            }
        });
        report
    }

    fn faithfulness_entry(
        &self,
        mut tally: Tally,
        n: u32,
        depth: usize,
        mode: CocycleMode,
    ) -> std::result::Result<CheckEntry, (Box<Tally>, Error)> {
        let sys = self.system.system();
        let lv = levels(n, self.system.rank());
        let mut certified = mode == CocycleMode::Strict;
        if certified {
            for r in &lv {
                let w = match self.system.weight(r) {
                    Ok(w) => w,
                    Err(e) => return Err((Box::new(tally), e)),
                };
                let ok = w.min_entry().is_positive();
                tally.observe(
                    ok,
                    || json!({ "level": r.to_string(), "min_weight": w.min_entry().to_string() }),
                );
                certified &= ok;
            }
            if certified {
                let basis = match CylinderFunction::basis(sys, &sys.uniform_depth(depth)) {
                    Ok(b) => b,
                    Err(e) => return Err((Box::new(tally), e)),
                };
                for r in &lv {
                    for a in &basis {
                        let b = DilationElement {
                            level: r.clone(),
                            func: a.clone(),
                        };
                        let value = b
                            .conj()
                            .checked_mul(&b)
                            .and_then(|bb| self.expectation(&bb));
                        let ok = matches!(&value, Ok(v) if v.is_positive() && !v.is_zero());
                        tally.observe(ok, || element_json(&b));
                        certified &= ok;
                    }
                }
                if certified {
                    return Ok(tally
                        .note("all weights positive; F(b*b) has a positive entry on every spanning indicator")
                        .finish_with(Status::Certificate));
                }
                return Ok(tally.finish());
            }
        }

        for r in &lv {
            for len in 0..=depth {
                let words = sys.words(&sys.uniform_depth(len));
                for w in words {
                    let a = match CylinderFunction::indicator(sys, &w) {
                        Ok(a) => a,
                        Err(e) => return Err((Box::new(tally), e)),
                    };
                    let b = DilationElement {
                        level: r.clone(),
                        func: a,
                    };
                    let value = match b
                        .conj()
                        .checked_mul(&b)
                        .and_then(|bb| self.expectation(&bb))
                    {
                        Ok(v) => v,
                        Err(e) => return Err((Box::new(tally), e)),
                    };
                    tally.observe(true, || json!(null));
                    if value.is_zero() {
                        let witness = json!({
                            "b": element_json(&b),
                            "F(b*b)": element_json(&value),
                        });
                        return Ok(tally
                            .note("b is nonzero and positive with F(b*b) = 0")
                            .finish_witness(Status::Witness, witness));
                    }
                }
            }
        }
        Ok(tally.note("none found within bounds").finish())
    }

    /// Fiber masses sum to one over the lifts of every word, and integrating
    /// against them reproduces `F`, for every level `r ≤ n·1`.
    pub fn fiber_suite(&self, n: u32, depth: usize) -> VerificationReport {
        let mut report = VerificationReport::new();
        let sys = self.system.system();
        for r in levels(n, self.system.rank()) {
            let mut sums = Tally::new("fiber_sum").param("r", &r);
            let mut integral = Tally::new("fiber_expectation").param("r", &r);
            let run = (|| {
                let shift = r.to_depth()?;
                let w = self.system.weight(&r)?;
                let len: Vec<usize> = w
                    .depth()
                    .iter()
                    .zip(&shift)
                    .map(|(d, s)| d.saturating_sub(*s).max(depth))
                    .collect();
                let lifts = sys.words(&shift);
                let basis = CylinderFunction::basis(sys, &sys.uniform_depth(depth))?;
                let expectations: Vec<CylinderFunction<S>> = basis
                    .iter()
                    .map(|a| {
                        let e = self.expectation(&DilationElement::new(r.clone(), a.clone())?)?;
                        Ok(e.func)
                    })
                    .collect::<Result<_>>()?;
                for x in sys.words(&len) {
                    let mut total = S::zero();
                    let mut masses = Vec::with_capacity(lifts.len());
                    for p in &lifts {
                        let y = x.prepend(p);
                        let m = self.fiber_measure(&x, &r, &y)?;
                        total = total + m.clone();
                        masses.push((y, m));
                    }
                    sums.observe(
                        total.is_one(),
                        || json!({ "x": x.to_string(), "sum": total.to_string() }),
                    );
                    for (a, fa) in basis.iter().zip(&expectations) {
                        let mut acc = S::zero();
                        for (y, m) in &masses {
                            acc = acc + m.clone() * a.evaluate(y)?;
                        }
                        let expected = fa.evaluate(&x)?;
                        integral.observe(acc == expected, || {
                            json!({
                                "x": x.to_string(),
                                "a": function_json(a),
                                "integral": acc.to_string(),
                                "expectation": expected.to_string(),
                            })
                        });
                    }
                }
                Ok::<_, Error>(())
            })();
            if let Err(e) = run {
                sums.error(e);
            }
            report.push(sums.finish());
            report.push(integral.finish());
        }
        report
    }

    /// The dilation law alone pins down `F` on spanning elements:
    /// `(r, a) = β_{−r}(i(a))` must go to `i(V_{−r}(a))`, whichever
    /// representative is used.
    pub fn expectation_forcing(&self, depth: usize, bound: u32) -> VerificationReport {
        let mut report = VerificationReport::new();
        let sys = self.system.system();
        let basis = match CylinderFunction::basis(sys, &sys.uniform_depth(depth)) {
            Ok(b) => b,
            Err(e) => {
                let mut tally = Tally::new("expectation_forcing");
                tally.error(e);
                report.push(tally.finish());
                return report;
            }
        };
        for r in levels(bound, self.system.rank()) {
            let mut tally = Tally::new("expectation_forcing").param("r", &r);
            for a in &basis {
                for u in levels(bound, self.system.rank()) {
                    let sides = (|| {
                        let e = DilationElement::new(r.clone(), a.clone())?.raise_to(&(&r + &u))?;
                        let forced =
                            DilationElement::embed(self.system.v_apply(&-&e.level, &e.func)?);
                        Ok::<_, Error>((forced, self.expectation(&e)?))
                    })();
                    compare_elements(
                        &mut tally,
                        sides,
                        || json!({ "r": r.to_string(), "u": u.to_string(), "a": function_json(a) }),
                    );
                }
            }
            report.push(tally.finish());
        }
        report
    }
}

pub fn element_json<S: Scalar>(e: &DilationElement<S>) -> Value {
    json!({ "level": e.level.coords(), "fn": function_json(&e.func) })
}

fn element_case<S: Scalar>(
    t: &LatticeElement,
    e: &DilationElement<S>,
    lhs: &DilationElement<S>,
    rhs: &DilationElement<S>,
) -> Value {
    json!({
        "t": t.to_string(),
        "element": element_json(e),
        "lhs": element_json(lhs),
        "rhs": element_json(rhs),
    })
}

fn compare_elements<S: Scalar>(
    tally: &mut Tally,
    sides: Result<(DilationElement<S>, DilationElement<S>)>,
    context: impl FnOnce() -> Value,
) {
    match sides {
        Ok((l, r)) => tally.observe(l == r, || {
            let mut w = context();
            w["lhs"] = element_json(&l);
            w["rhs"] = element_json(&r);
            w
        }),
        Err(e) => tally.error(e),
    }
}

fn compare_functions<S: Scalar>(
    tally: &mut Tally,
    sides: Result<(CylinderFunction<S>, CylinderFunction<S>)>,
    context: impl FnOnce() -> Value,
) {
    match sides {
        Ok((l, r)) => tally.observe(l == r, || {
            let mut w = context();
            w["lhs"] = function_json(&l);
            w["rhs"] = function_json(&r);
            w
        }),
        Err(e) => tally.error(e),
    }
}
