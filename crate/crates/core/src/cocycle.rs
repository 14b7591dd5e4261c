//! Normalized cocycles `ω: P × X → [0,1]` for the shift action.
//!
//! A cocycle is given by one table per generator `e_i` of `ℕᵏ`; the value
//! at any `t ∈ ℕᵏ` follows from the multiplicative law
//! `ω(r + s, x) = ω(r, x) · ω(s, θ_r(x))`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cylinder::{CylinderFunction, ShiftSystem, Word};
use crate::error::{Error, Result};
use crate::lattice::{semigroup_box, LatticeElement};
use crate::report::{Tally, VerificationReport};
use crate::scalar::Scalar;

/// Whether zero weights are admitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CocycleMode {
    /// Every weight strictly positive.
    #[default]
    Strict,
    /// Zero weights allowed; only useful to exhibit non-faithful
    /// expectations.
    Relaxed,
}

impl std::fmt::Display for CocycleMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CocycleMode::Strict => "strict",
            CocycleMode::Relaxed => "relaxed",
        })
    }
}

#[derive(Clone)]
pub struct Cocycle<S> {
    system: ShiftSystem,
    generators: Vec<CylinderFunction<S>>,
    mode: CocycleMode,
}

impl<S: Scalar> std::fmt::Debug for Cocycle<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Cocycle")
            .field("system", &self.system)
            .field("generators", &self.generators)
            .field("mode", &self.mode)
            .finish()
    }
}

impl<S: Scalar> Cocycle<S> {
    /// No value checks happen here; see [`validate`](Self::validate).
    pub fn new(
        system: ShiftSystem,
        generators: Vec<CylinderFunction<S>>,
        mode: CocycleMode,
    ) -> Result<Self> {
        if generators.len() != system.rank() {
            return Err(Error::GeneratorCount {
                expected: system.rank(),
                found: generators.len(),
            });
        }
        if generators.iter().any(|g| g.system() != &system) {
            return Err(Error::SystemMismatch);
        }
        Ok(Cocycle {
            system,
            generators,
            mode,
        })
    }

    /// `ω(e_i, ·) ≡ 1/d_i`.
    pub fn fair(system: &ShiftSystem) -> Self {
        let generators = system
            .alphabets()
            .iter()
            .map(|&d| CylinderFunction::constant(system, S::from_ratio(1, d as i64)))
            .collect();
        Cocycle {
            system: system.clone(),
            generators,
            mode: CocycleMode::Strict,
        }
    }

    pub fn system(&self) -> &ShiftSystem {
        &self.system
    }

    pub fn generators(&self) -> &[CylinderFunction<S>] {
        &self.generators
    }

    pub fn mode(&self) -> CocycleMode {
        self.mode
    }

    pub fn with_mode(mut self, mode: CocycleMode) -> Self {
        self.mode = mode;
        self
    }

    /// Replaces one generator table.
    pub fn with_generator(mut self, factor: usize, table: CylinderFunction<S>) -> Result<Self> {
        if table.system() != &self.system {
            return Err(Error::SystemMismatch);
        }
        self.generators[factor] = table;
        Ok(self)
    }

    /// Normalization per factor and word, value range, and positivity.
    pub fn validate(&self) -> VerificationReport {
        let mut report = VerificationReport::new();
        for (i, g) in self.generators.iter().enumerate() {
            report.push(self.normalization_check(i, g));
        }

        let mut range = Tally::new("weight_range");
        let mut positivity = Tally::new("positivity").param("mode", self.mode);
        for (i, g) in self.generators.iter().enumerate() {
            for (word, v) in g.entries() {
                let in_range = !v.is_negative() && *v <= S::one();
                range.observe(
                    in_range,
                    || json!({ "factor": i, "word": word.to_string(), "value": v.to_string() }),
                );
                let positive = match self.mode {
                    CocycleMode::Strict => v.is_positive(),
                    CocycleMode::Relaxed => true,
                };
                positivity.observe(
                    positive,
                    || json!({ "factor": i, "word": word.to_string(), "value": v.to_string() }),
                );
            }
        }
        report.push(range.finish());
        if self.mode == CocycleMode::Relaxed {
            positivity = positivity.note("relaxed mode admits zero weights");
        }
        report.push(positivity.finish());
        report
    }

    fn normalization_check(
        &self,
        factor: usize,
        g: &CylinderFunction<S>,
    ) -> crate::report::CheckEntry {
        let mut tally = Tally::new("normalization").param("factor", factor);
        let mut depth = g.depth().to_vec();
        depth[factor] = depth[factor].max(1);
        let mut step = vec![0; self.system.rank()];
        step[factor] = 1;
        let sums = g
            .raise_depth(&depth)
            .and_then(|r| r.sum_over_prefixes(&step));
        match sums {
            Ok(sums) => {
                for (word, s) in sums.entries() {
                    tally.observe(
                        s.is_one(),
                        || json!({ "word": word.to_string(), "sum": s.to_string() }),
                    );
                }
            }
            Err(e) => tally.error(e),
        }
        tally.finish()
    }

    /// `ω(t, ·)` along the given sequence of generators.
    pub fn extend_along(&self, order: &[usize]) -> Result<CylinderFunction<S>> {
        let rank = self.system.rank();
        let mut acc = CylinderFunction::one(&self.system);
        let mut offset = LatticeElement::zero(rank);
        for &i in order {
            let step = self.generators[i].shift_pullback(&offset)?;
            acc = acc.checked_mul(&step)?;
            offset = &offset + &LatticeElement::generator(rank, i, 1);
        }
        Ok(acc)
    }

    /// `ω(t, ·)` for `t ∈ ℕᵏ`, built along the canonical order (all of
    /// factor 0, then factor 1, …). For rank ≥ 2 every other order of the
    /// generators is computed too and must agree.
    pub fn extend(&self, t: &LatticeElement) -> Result<CylinderFunction<S>> {
        let counts = t.to_depth()?;
        if counts.len() != self.system.rank() {
            return Err(Error::RankMismatch {
                expected: self.system.rank(),
                found: counts.len(),
            });
        }
        let orders = interleavings(&counts);
        let canonical = self.extend_along(&orders[0])?;
        for order in &orders[1..] {
            let other = self.extend_along(order)?;
            if other != canonical {
                let depth = canonical.join_depth(&other);
                let (a, b) = (canonical.raise_depth(&depth)?, other.raise_depth(&depth)?);
                let idx = a
                    .table()
                    .iter()
                    .zip(b.table())
                    .position(|(x, y)| x != y)
                    .expect("tables differ");
                return Err(Error::InconsistentExtension {
                    level: t.to_string(),
                    first: orders[0].clone(),
                    second: order.clone(),
                    word: self.system.word_at(&depth, idx).to_string(),
                });
            }
        }
        Ok(canonical)
    }

    /// Factorization independence of [`extend`](Self::extend) for every
    /// level in `{0,…,bound}ᵏ`.
    pub fn check_extension_consistency(&self, bound: u32) -> VerificationReport {
        let mut report = VerificationReport::new();
        let mut tally = Tally::new("extension_consistency").param("bound", bound);
        for t in semigroup_box(bound as i64, self.system.rank()) {
            match self.extend(&t) {
                Ok(_) => tally.observe(true, || json!(null)),
                Err(e) => tally.error(e),
            }
        }
        report.push(tally.finish());
        report
    }

    /// The coherence identity
    /// `ω(s,x)·W_r(C_x^s ∩ C_y^r) = ω(r,x)·W_s(C_x^r ∩ C_y^s)` for all
    /// `r, s ∈ {0,…,bound}ᵏ` and all pairs of words long enough to
    /// determine every quantity involved.
    pub fn check_coherence(&self, bound: u32) -> VerificationReport {
        let mut report = VerificationReport::new();
        let levels = semigroup_box(bound as i64, self.system.rank());
        let mut weights = BTreeMap::new();
        for t in &levels {
            match self.extend(t) {
                Ok(w) => {
                    weights.insert(t.clone(), w);
                }
                Err(e) => {
                    let mut tally = Tally::new("coherence").param("level", t);
                    tally.error(e);
                    report.push(tally.finish());
                    return report;
                }
            }
        }
        for r in &levels {
            for s in &levels {
                report.push(self.coherence_pair(r, s, &weights[r], &weights[s]));
            }
        }
        report
    }

    fn coherence_pair(
        &self,
        r: &LatticeElement,
        s: &LatticeElement,
        wr: &CylinderFunction<S>,
        ws: &CylinderFunction<S>,
    ) -> crate::report::CheckEntry {
        let rd = r.to_depth().expect("semigroup level");
        let sd = s.to_depth().expect("semigroup level");
        let len: Vec<usize> = (0..self.system.rank())
            .map(|i| rd[i].max(sd[i]).max(wr.depth()[i]).max(ws.depth()[i]))
            .collect();
        let words = self.system.words(&len);
        let mut tally = Tally::new("coherence").param("r", r).param("s", s);
        for x in &words {
            for y in &words {
                let lhs = ws.evaluate(x).expect("long word")
                    * fiber_weight(&self.system, wr, x, &sd, y, &rd);
                let rhs = wr.evaluate(x).expect("long word")
                    * fiber_weight(&self.system, ws, x, &rd, y, &sd);
                tally.observe(lhs == rhs, || {
                    json!({
                        "x": x.to_string(),
                        "y": y.to_string(),
                        "lhs": lhs.to_string(),
                        "rhs": rhs.to_string(),
                    })
                });
            }
        }
        tally.finish()
    }
}

/// `Σ_{z ∈ C_x^a ∩ C_y^b} weight(z)` where `C_x^a` replaces the first `a`
/// symbols of `x`. Both words have the same lengths and share their
/// (implicit) infinite tail.
fn fiber_weight<S: Scalar>(
    system: &ShiftSystem,
    weight: &CylinderFunction<S>,
    x: &Word,
    a: &[usize],
    y: &Word,
    b: &[usize],
) -> S {
    let tail = x.shift(a).expect("word covers level");
    let mut acc = S::zero();
    system.for_each_word(a, |p| {
        let z = tail.prepend(p);
        let agrees = z
            .factors()
            .iter()
            .zip(y.factors())
            .zip(b)
            .all(|((zf, yf), &n)| zf[n..] == yf[n..]);
        if agrees {
            acc = acc.clone() + weight.evaluate(&z).expect("long word");
        }
    });
    acc
}

/// Distinct orderings of the multiset with `counts[i]` copies of `i`,
/// canonical (sorted) order first.
pub fn interleavings(counts: &[usize]) -> Vec<Vec<usize>> {
    fn go(counts: &mut [usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if counts.iter().all(|&c| c == 0) {
            out.push(cur.clone());
            return;
        }
        for i in 0..counts.len() {
            if counts[i] > 0 {
                counts[i] -= 1;
                cur.push(i);
                go(counts, cur, out);
                cur.pop();
                counts[i] += 1;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut counts.to_vec(), &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn bin() -> ShiftSystem {
        ShiftSystem::full_shift(2).unwrap()
    }

    fn depth1(a: Rational, b: Rational) -> CylinderFunction<Rational> {
        CylinderFunction::new(bin(), vec![1], vec![a, b]).unwrap()
    }

    fn single(table: CylinderFunction<Rational>, mode: CocycleMode) -> Cocycle<Rational> {
        Cocycle::new(bin(), vec![table], mode).unwrap()
    }

    fn lvl(n: i64) -> LatticeElement {
        LatticeElement::new(vec![n])
    }

    #[test]
    fn validate_examples() {
        assert!(Cocycle::<Rational>::fair(&bin()).validate().all_ok());
        let biased = single(depth1(q(1, 3), q(2, 3)), CocycleMode::Strict);
        assert!(biased.validate().all_ok());

        let third = single(
            CylinderFunction::constant(&bin(), q(1, 3)),
            CocycleMode::Strict,
        );
        let report = third.validate();
        let norm = report.named("normalization").next().unwrap();
        assert_eq!(norm.status, Status::Fail);
        assert_eq!(norm.witness.as_ref().unwrap()["sum"], "2/3");
    }

    #[test]
    fn positivity_depends_on_mode() {
        let planted = depth1(q(0, 1), q(1, 1));
        assert!(!single(planted.clone(), CocycleMode::Strict)
            .validate()
            .all_ok());
        assert!(single(planted, CocycleMode::Relaxed).validate().all_ok());
    }

    #[test]
    fn extend_examples() {
        let fair = Cocycle::<Rational>::fair(&bin());
        assert_eq!(
            fair.extend(&lvl(2)).unwrap(),
            CylinderFunction::constant(&bin(), q(1, 4))
        );
        let biased = single(depth1(q(1, 3), q(2, 3)), CocycleMode::Strict);
        let w2 = biased.extend(&lvl(2)).unwrap();
        assert_eq!(w2.depth(), &[2]);
        assert_eq!(w2.table(), &[q(1, 9), q(2, 9), q(2, 9), q(4, 9)]);
        let total = w2.table().iter().fold(q(0, 1), |a, b| a + b.clone());
        assert_eq!(total, q(1, 1));
        assert_eq!(
            biased.extend(&lvl(0)).unwrap(),
            CylinderFunction::one(&bin())
        );
    }

    #[test]
    fn extension_satisfies_cocycle_law_and_normalization() {
        let biased = single(depth1(q(1, 3), q(2, 3)), CocycleMode::Strict);
        for t in 0..4 {
            for u in 0..4 {
                let wt = biased.extend(&lvl(t)).unwrap();
                let wu = biased.extend(&lvl(u)).unwrap();
                let composed = &wt * &wu.shift_pullback(&lvl(t)).unwrap();
                assert_eq!(biased.extend(&lvl(t + u)).unwrap(), composed);
            }
            let w = biased.extend(&lvl(t)).unwrap();
            let depth = [w.depth()[0].max(t as usize)];
            let sums = w
                .raise_depth(&depth)
                .unwrap()
                .sum_over_prefixes(&[t as usize])
                .unwrap();
            assert_eq!(sums, CylinderFunction::one(&bin()));
            assert!(w.table().iter().all(|v| v.is_positive()));
        }
    }

    #[test]
    fn inconsistent_two_factor_data_is_rejected() {
        let sys = ShiftSystem::new(vec![2, 2]).unwrap();
        // factor 0 weight reads factor 1's first symbol, which θ_{e_1} moves
        let g0 = CylinderFunction::from_fn(&sys, vec![1, 1], |w| {
            let a = if w.factors()[1][0] == 0 {
                q(1, 3)
            } else {
                q(1, 2)
            };
            if w.factors()[0][0] == 0 {
                a
            } else {
                q(1, 1) - a
            }
        })
        .unwrap();
        let g1 = CylinderFunction::constant(&sys, q(1, 2));
        let c = Cocycle::new(sys.clone(), vec![g0, g1], CocycleMode::Strict).unwrap();
        assert!(c.validate().all_ok());
        let err = c.extend(&LatticeElement::new(vec![1, 1])).unwrap_err();
        assert!(matches!(err, Error::InconsistentExtension { .. }));
        assert!(!c.check_extension_consistency(1).all_ok());

        let product = Cocycle::<Rational>::fair(&sys);
        assert!(product.check_extension_consistency(2).all_ok());
    }

    #[test]
    fn coherence_examples() {
        assert!(Cocycle::<Rational>::fair(&bin())
            .check_coherence(2)
            .all_ok());
        let biased = single(depth1(q(1, 3), q(2, 3)), CocycleMode::Strict);
        let report = biased.check_coherence(2);
        assert_eq!(report.checks.len(), 9);
        assert!(report.all_ok(), "{:?}", report.failures().next());
    }

    #[test]
    fn coherence_disjoint_pairs_are_zero() {
        let fair = Cocycle::<Rational>::fair(&bin());
        let w1 = fair.extend(&lvl(1)).unwrap();
        // x and y differ beyond the first symbol: both intersections empty
        let x = bin().parse_word("00").unwrap();
        let y = bin().parse_word("11").unwrap();
        assert_eq!(fiber_weight(&bin(), &w1, &x, &[1], &y, &[1]), q(0, 1));
    }

    #[test]
    fn interleavings_enumerate_multiset_orders() {
        assert_eq!(interleavings(&[2]), vec![vec![0, 0]]);
        let orders = interleavings(&[2, 1]);
        assert_eq!(orders, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        assert_eq!(interleavings(&[2, 2]).len(), 6);
    }
}
