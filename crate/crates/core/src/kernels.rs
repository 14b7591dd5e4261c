//! Positive unital maps `C(Z) → C(X)` on finite sets, given by probability
//! rows `μ_x` over `Z` and a surjection `π: Z → X`.
//!
//! On finite discrete spaces continuity is automatic and "nowhere dense"
//! means empty, so faithfulness reduces to every weight being positive.

use std::collections::HashSet;

use serde_json::json;

use crate::error::{Error, Result};
use crate::report::{Status, Tally, VerificationReport};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteKernel<S> {
    z: Vec<String>,
    x: Vec<String>,
    pi: Vec<usize>,
    rows: Vec<Vec<S>>,
}

/// Index of a conditional expectation at one point of `Z`.
#[derive(Clone, Debug, PartialEq)]
pub enum PointIndex<S> {
    Finite(S),
    Infinite,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Faithfulness<S> {
    pub faithful: bool,
    pub index: Vec<PointIndex<S>>,
    /// A point whose indicator `b` has `F(b*b) = 0`.
    pub witness: Option<usize>,
}

impl<S: Scalar> FiniteKernel<S> {
    /// `pi[j]` is the index in `x` of the image of `z[j]`; `rows[i]` is the
    /// measure attached to `x[i]`.
    pub fn new(z: Vec<String>, x: Vec<String>, pi: Vec<usize>, rows: Vec<Vec<S>>) -> Result<Self> {
        for (name, labels) in [("Z", &z), ("X", &x)] {
            if labels.is_empty() {
                return Err(Error::InvalidKernel(format!("{name} is empty")));
            }
            let unique: HashSet<&String> = labels.iter().collect();
            if unique.len() != labels.len() {
                return Err(Error::InvalidKernel(format!("duplicate label in {name}")));
            }
        }
        if pi.len() != z.len() || pi.iter().any(|&i| i >= x.len()) {
            return Err(Error::InvalidKernel(
                "pi must map every point of Z into X".into(),
            ));
        }
        let hit: HashSet<usize> = pi.iter().copied().collect();
        if let Some(i) = (0..x.len()).find(|i| !hit.contains(i)) {
            return Err(Error::InvalidKernel(format!(
                "pi is not onto: {} has no preimage",
                x[i]
            )));
        }
        if rows.len() != x.len() {
            return Err(Error::InvalidKernel(format!(
                "expected {} rows, found {}",
                x.len(),
                rows.len()
            )));
        }
        for (label, row) in x.iter().zip(&rows) {
            let fail = |reason: String| Error::NotProbability {
                row: label.clone(),
                reason,
            };
            if row.len() != z.len() {
                return Err(fail(format!(
                    "{} entries for {} points",
                    row.len(),
                    z.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| v.is_negative() || **v > S::one()) {
                return Err(fail(format!("entry {v} outside [0,1]")));
            }
            let sum = row.iter().fold(S::zero(), |a, v| a + v.clone());
            if !sum.is_one() {
                return Err(fail(format!("entries sum to {sum}")));
            }
        }
        Ok(FiniteKernel { z, x, pi, rows })
    }

    /// Recovers the kernel of a positive unital map from its values on
    /// point indicators: `μ_x({z}) = F(1_z)(x)`.
    pub fn from_map(
        z: Vec<String>,
        x: Vec<String>,
        pi: Vec<usize>,
        map: impl Fn(&[S]) -> Vec<S>,
    ) -> Result<Self> {
        let n = z.len();
        let columns: Vec<Vec<S>> = (0..n).map(|j| map(&indicator(n, j))).collect();
        let rows = (0..x.len())
            .map(|i| columns.iter().map(|c| c[i].clone()).collect())
            .collect();
        Self::new(z, x, pi, rows)
    }

    pub fn z_labels(&self) -> &[String] {
        &self.z
    }

    pub fn x_labels(&self) -> &[String] {
        &self.x
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    /// `ω(z) = μ_{π(z)}({z})`.
    pub fn weight(&self, z: usize) -> S {
        self.rows[self.pi[z]][z].clone()
    }

    pub fn weights(&self) -> Vec<S> {
        (0..self.z.len()).map(|j| self.weight(j)).collect()
    }

    /// `F(b)(x) = Σ_z μ_x(z) b(z)`.
    pub fn apply(&self, b: &[S]) -> Vec<S> {
        assert_eq!(b.len(), self.z.len(), "function on Z has the wrong length");
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(b)
                    .fold(S::zero(), |acc, (m, v)| acc + m.clone() * v.clone())
            })
            .collect()
    }

    /// `a ∘ π`.
    pub fn pullback(&self, a: &[S]) -> Vec<S> {
        self.pi.iter().map(|&i| a[i].clone()).collect()
    }

    /// `supp(μ_x) ⊆ π⁻¹(x)` for every `x`.
    pub fn supported_on_fibers(&self) -> bool {
        self.support_violation().is_none()
    }

    fn support_violation(&self) -> Option<(usize, usize)> {
        self.rows.iter().enumerate().find_map(|(i, row)| {
            row.iter()
                .enumerate()
                .find(|(j, v)| !v.is_zero() && self.pi[*j] != i)
                .map(|(j, _)| (i, j))
        })
    }

    /// The support condition row by row, then idempotence, the bimodule
    /// law and `F(a ∘ π) = a` on indicators.
    pub fn conditional_expectation_report(&self) -> VerificationReport {
        let mut report = VerificationReport::new();
        let mut support = Tally::new("support").note(
            "on a finite discrete space weak* continuity is automatic; only the support condition remains",
        );
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let ok = v.is_zero() || self.pi[j] == i;
                support.observe(ok, || {
                    json!({
                        "x": self.x[i],
                        "z": self.z[j],
                        "mass": v.to_string(),
                        "pi(z)": self.x[self.pi[j]],
                    })
                });
            }
        }
        let supported = !support.failed();
        report.push(support.finish());
        if !supported {
            return report;
        }

        let (nz, nx) = (self.z.len(), self.x.len());
        let mut fixes = Tally::new("fixes_range");
        let mut idempotent = Tally::new("idempotent");
        let mut bimodule = Tally::new("bimodule");
        for i in 0..nx {
            let a = indicator::<S>(nx, i);
            let lhs = self.apply(&self.pullback(&a));
            fixes.observe(lhs == a, || json!({ "a": self.x[i] }));
        }
        for j in 0..nz {
            let b = indicator::<S>(nz, j);
            let fb = self.apply(&b);
            let ffb = self.apply(&self.pullback(&fb));
            idempotent.observe(ffb == fb, || json!({ "b": self.z[j] }));
            for i in 0..nx {
                let a = indicator::<S>(nx, i);
                let ab: Vec<S> = self
                    .pullback(&a)
                    .into_iter()
                    .zip(&b)
                    .map(|(p, q)| p * q.clone())
                    .collect();
                let lhs = self.apply(&ab);
                let rhs: Vec<S> = a
                    .iter()
                    .zip(&fb)
                    .map(|(p, q)| p.clone() * q.clone())
                    .collect();
                bimodule.observe(lhs == rhs, || json!({ "a": self.x[i], "b": self.z[j] }));
            }
        }
        report.push(fixes.finish());
        report.push(idempotent.finish());
        report.push(bimodule.finish());
        report
    }

    /// Faithful iff no weight vanishes; the index is `1/ω` pointwise.
    pub fn faithfulness_and_index(&self) -> Result<Faithfulness<S>> {
        if let Some((i, j)) = self.support_violation() {
            return Err(Error::NotConditionalExpectation(format!(
                "row {} charges {} outside its fiber",
                self.x[i], self.z[j]
            )));
        }
        let weights = self.weights();
        let index = weights
            .iter()
            .map(|w| {
                if w.is_zero() {
                    PointIndex::Infinite
                } else {
                    PointIndex::Finite(S::one() / w.clone())
                }
            })
            .collect();
        let witness = weights.iter().position(|w| w.is_zero());
        if let Some(j) = witness {
            // b = 1_z is positive and b*b = b
            let b = indicator::<S>(self.z.len(), j);
            if self.apply(&b).iter().any(|v| !v.is_zero()) {
                return Err(Error::InvalidKernel(format!(
                    "zero weight at {} but F(b*b) does not vanish",
                    self.z[j]
                )));
            }
        }
        Ok(Faithfulness {
            faithful: witness.is_none(),
            index,
            witness,
        })
    }

    /// [`faithfulness_and_index`](Self::faithfulness_and_index) as a report
    /// entry: certificate, or witness.
    pub fn faithfulness_report(&self) -> VerificationReport {
        let mut report = VerificationReport::new();
        let tally = Tally::new("faithfulness")
            .note("on a finite discrete space the zero set of ω is nowhere dense only if empty");
        let entry = match self.faithfulness_and_index() {
            Ok(f) => {
                let index: serde_json::Map<String, serde_json::Value> = self
                    .z
                    .iter()
                    .zip(&f.index)
                    .map(|(z, i)| {
                        let v = match i {
                            PointIndex::Finite(v) => v.to_string(),
                            PointIndex::Infinite => "infinite".to_string(),
                        };
                        (z.clone(), json!(v))
                    })
                    .collect();
                let mut tally = tally;
                tally.observe(true, || json!(null));
                match f.witness {
                    None => tally.finish_witness(Status::Certificate, json!({ "index": index })),
                    Some(j) => tally.finish_witness(
                        Status::Witness,
                        json!({ "b": format!("1[{}]", self.z[j]), "F(b*b)": "0", "index": index }),
                    ),
                }
            }
            Err(e) => {
                let mut tally = tally;
                tally.error(e);
                tally.finish()
            }
        };
        report.push(entry);
        report
    }
}

fn indicator<S: Scalar>(n: usize, j: usize) -> Vec<S> {
    (0..n)
        .map(|i| if i == j { S::one() } else { S::zero() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn kernel(row1: [Rational; 3]) -> Result<FiniteKernel<Rational>> {
        FiniteKernel::new(
            labels(&["z1", "z2", "z3"]),
            labels(&["x1", "x2"]),
            vec![0, 0, 1],
            vec![row1.to_vec(), vec![q(0, 1), q(0, 1), q(1, 1)]],
        )
    }

    fn example() -> FiniteKernel<Rational> {
        kernel([q(2, 3), q(1, 3), q(0, 1)]).unwrap()
    }

    #[test]
    fn map_examples() {
        let k = example();
        assert_eq!(
            k.apply(&[q(1, 1), q(0, 1), q(0, 1)]),
            vec![q(2, 3), q(0, 1)]
        );
        assert_eq!(k.apply(&vec![q(1, 1); 3]), vec![q(1, 1); 2]);
    }

    #[test]
    fn dirac_rows_evaluate() {
        let k = FiniteKernel::new(
            labels(&["a", "b"]),
            labels(&["a", "b"]),
            vec![0, 1],
            vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]],
        )
        .unwrap();
        assert_eq!(k.apply(&[q(5, 1), q(7, 1)]), vec![q(5, 1), q(7, 1)]);
        assert!(k.conditional_expectation_report().all_ok());
        let f = k.faithfulness_and_index().unwrap();
        assert!(f.faithful);
        assert_eq!(f.index, vec![PointIndex::Finite(q(1, 1)); 2]);
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(matches!(
            kernel([q(2, 3), q(2, 3), q(0, 1)]),
            Err(Error::NotProbability { .. })
        ));
        assert!(matches!(
            kernel([q(3, 2), q(-1, 2), q(0, 1)]),
            Err(Error::NotProbability { .. })
        ));
        assert!(matches!(
            FiniteKernel::<Rational>::new(labels(&["z"]), labels(&["x", "y"]), vec![0], vec![]),
            Err(Error::InvalidKernel(_))
        ));
    }

    #[test]
    fn conditional_expectation_examples() {
        assert!(example().conditional_expectation_report().all_ok());
        let off = kernel([q(1, 2), q(0, 1), q(1, 2)]).unwrap();
        let report = off.conditional_expectation_report();
        assert!(!report.all_ok());
        let w = report.checks[0].witness.as_ref().unwrap();
        assert_eq!(w["z"], "z3");
        assert!(matches!(
            off.faithfulness_and_index(),
            Err(Error::NotConditionalExpectation(_))
        ));
    }

    #[test]
    fn faithfulness_examples() {
        let f = example().faithfulness_and_index().unwrap();
        assert!(f.faithful);
        assert_eq!(
            f.index,
            vec![
                PointIndex::Finite(q(3, 2)),
                PointIndex::Finite(q(3, 1)),
                PointIndex::Finite(q(1, 1)),
            ]
        );
        let degenerate = kernel([q(1, 1), q(0, 1), q(0, 1)]).unwrap();
        let f = degenerate.faithfulness_and_index().unwrap();
        assert!(!f.faithful);
        assert_eq!(f.witness, Some(1));
        assert_eq!(f.index[1], PointIndex::Infinite);
        let entry = &degenerate.faithfulness_report().checks[0];
        assert_eq!(entry.status, Status::Witness);
    }

    #[test]
    fn round_trips() {
        let k = example();
        let back = FiniteKernel::from_map(
            k.z_labels().to_vec(),
            k.x_labels().to_vec(),
            k.pi().to_vec(),
            |b| k.apply(b),
        )
        .unwrap();
        assert_eq!(back, k);
    }

    proptest! {
        #[test]
        fn map_round_trip_on_all_functions(
            w in 1i64..6, b in prop::collection::vec(-5i64..6, 3)
        ) {
            let k = kernel([q(w, 6), q(6 - w, 6), q(0, 1)]).unwrap();
            let b: Vec<Rational> = b.into_iter().map(|v| q(v, 1)).collect();
            let back = FiniteKernel::from_map(
                k.z_labels().to_vec(), k.x_labels().to_vec(), k.pi().to_vec(), |f| k.apply(f),
            ).unwrap();
            prop_assert_eq!(back.apply(&b), k.apply(&b));
            // bimodule law for an arbitrary function on X
            let a = vec![q(w, 1), q(-2, 1)];
            let ab: Vec<Rational> = k.pullback(&a).into_iter().zip(&b).map(|(p, q)| p * q).collect();
            let rhs: Vec<Rational> = a.iter().zip(k.apply(&b)).map(|(p, q)| p * q).collect();
            prop_assert_eq!(k.apply(&ab), rhs);
            prop_assert_eq!(k.apply(&k.pullback(&a)), a);
        }
    }
}
