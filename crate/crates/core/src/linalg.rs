//! Exact linear algebra over a [`Scalar`] field: row reduction, spans,
//! membership and linear relations. Used to compute the ranges `A_t` and
//! the domains of composed partial maps.

use crate::cylinder::CylinderFunction;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A subspace of `S^n` kept in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Span<S> {
    dim: usize,
    rows: Vec<Vec<S>>,
    pivots: Vec<usize>,
}

impl<S: Scalar> Span<S> {
    pub fn new(dim: usize, vectors: impl IntoIterator<Item = Vec<S>>) -> Self {
        let mut span = Span {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        };
        for v in vectors {
            span.insert(v);
        }
        span
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<S>] {
        &self.rows
    }

    // Reduces `v` against the current rows.
    fn reduce(&self, mut v: Vec<S>) -> Vec<S> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row).skip(p) {
                if !r.is_zero() {
                    *x = x.clone() - c.clone() * r.clone();
                }
            }
        }
        v
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<S>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = S::one() / v[p].clone();
        for x in v.iter_mut().skip(p) {
            *x = x.clone() * inv.clone();
        }
        // keep the rows fully reduced
        for row in &mut self.rows {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v).skip(p) {
                if !r.is_zero() {
                    *x = x.clone() - c.clone() * r.clone();
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, v);
        self.pivots.insert(at, p);
        true
    }

    pub fn contains(&self, v: &[S]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }

    pub fn contains_span(&self, other: &Span<S>) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn same_as(&self, other: &Span<S>) -> bool {
        self.rank() == other.rank() && self.contains_span(other)
    }
}

/// Basis of `{λ : Σ_j λ_j v_j = 0}` for vectors of common length.
pub fn relations<S: Scalar>(vectors: &[Vec<S>]) -> Vec<Vec<S>> {
    let m = vectors.len();
    if m == 0 {
        return Vec::new();
    }
    let n = vectors[0].len();
    // Reduce the augmented rows [v_j | e_j]; rows whose left part vanishes
    // carry the relations.
    let mut rows: Vec<Vec<S>> = vectors
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let mut row = v.clone();
            row.extend((0..m).map(|i| if i == j { S::one() } else { S::zero() }));
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..n {
        let Some(p) = (pivot_row..m).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, p);
        let inv = S::one() / rows[pivot_row][col].clone();
        for x in rows[pivot_row].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot = rows[pivot_row].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == pivot_row || row[col].is_zero() {
                continue;
            }
            let c = row[col].clone();
            for (x, r) in row.iter_mut().zip(&pivot) {
                if !r.is_zero() {
                    *x = x.clone() - c.clone() * r.clone();
                }
            }
        }
        pivot_row += 1;
    }
    let null: Vec<Vec<S>> = rows[pivot_row..].iter().map(|r| r[n..].to_vec()).collect();
    // tidy to echelon form for deterministic output
    Span::new(m, null).basis().to_vec()
}

/// Coefficients `λ` with `Σ λ_j g_j = target`, if any.
pub fn solve<S: Scalar>(generators: &[Vec<S>], target: &[S]) -> Option<Vec<S>> {
    let mut vectors = generators.to_vec();
    vectors.push(target.iter().map(|x| S::zero() - x.clone()).collect());
    let m = generators.len();
    // a relation with last coefficient 1 gives the combination
    relations(&vectors)
        .into_iter()
        .find(|rel| !rel[m].is_zero())
        .map(|rel| {
            let c = rel[m].clone();
            rel[..m].iter().map(|x| x.clone() / c.clone()).collect()
        })
}

/// A finite-dimensional space of cylinder functions, compared at whatever
/// depth the operands require.
#[derive(Clone)]
pub struct FunctionSpan<S> {
    generators: Vec<CylinderFunction<S>>,
    depth: Vec<usize>,
    span: Span<S>,
}

impl<S: Scalar> FunctionSpan<S> {
    /// Needs at least one generator to fix the shift system.
    pub fn new(generators: Vec<CylinderFunction<S>>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::Parse("empty generator list".into()))?;
        let depth = generators
            .iter()
            .fold(first.depth().to_vec(), |d, g| join(&d, g.depth()));
        let system = first.system().clone();
        let dim = system.table_len(&depth)?;
        let mut rows = Vec::with_capacity(generators.len());
        for g in &generators {
            if g.system() != &system {
                return Err(Error::SystemMismatch);
            }
            rows.push(g.raise_depth(&depth)?.into_table());
        }
        Ok(FunctionSpan {
            span: Span::new(dim, rows),
            generators,
            depth,
        })
    }

    pub fn dim(&self) -> usize {
        self.span.rank()
    }

    pub fn depth(&self) -> &[usize] {
        &self.depth
    }

    pub fn generators(&self) -> &[CylinderFunction<S>] {
        &self.generators
    }

    /// Reduced basis as functions at [`depth`](Self::depth).
    pub fn basis(&self) -> Vec<CylinderFunction<S>> {
        let system = self.generators[0].system();
        self.span
            .basis()
            .iter()
            .map(|row| {
                CylinderFunction::new(system.clone(), self.depth.clone(), row.clone())
                    .expect("basis row has the span's shape")
            })
            .collect()
    }

    fn at_depth(&self, depth: &[usize]) -> Result<Span<S>> {
        if depth == self.depth.as_slice() {
            return Ok(self.span.clone());
        }
        let system = self.generators[0].system();
        let dim = system.table_len(depth)?;
        let mut rows = Vec::with_capacity(self.span.rank());
        for f in self.basis() {
            rows.push(f.raise_depth(depth)?.into_table());
        }
        Ok(Span::new(dim, rows))
    }

    pub fn contains(&self, f: &CylinderFunction<S>) -> Result<bool> {
        let depth = join(&self.depth, f.depth());
        let span = self.at_depth(&depth)?;
        Ok(span.contains(f.raise_depth(&depth)?.table()))
    }

    pub fn contains_span(&self, other: &FunctionSpan<S>) -> Result<bool> {
        let depth = join(&self.depth, &other.depth);
        Ok(self
            .at_depth(&depth)?
            .contains_span(&other.at_depth(&depth)?))
    }

    pub fn same_as(&self, other: &FunctionSpan<S>) -> Result<bool> {
        Ok(self.dim() == other.dim() && self.contains_span(other)?)
    }
}

impl<S: Scalar> std::fmt::Debug for FunctionSpan<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FunctionSpan")
            .field("depth", &self.depth)
            .field("basis", &self.basis())
            .finish()
    }
}

pub(crate) fn join(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn rank_and_membership() {
        let s = Span::new(3, vec![v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[0, 1, 1])]);
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&v(&[1, 3, 4])));
        assert!(!s.contains(&v(&[0, 0, 1])));
    }

    #[test]
    fn relations_and_solve() {
        let vs = vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1])];
        let rel = relations(&vs);
        assert_eq!(rel.len(), 1);
        let r = &rel[0];
        let combo: Vec<Rational> = (0..2)
            .map(|i| (0..3).fold(q(0), |acc, j| acc + r[j].clone() * vs[j][i].clone()))
            .collect();
        assert_eq!(combo, v(&[0, 0]));

        let lambda = solve(&vs[..2], &v(&[3, -2])).unwrap();
        assert_eq!(lambda, v(&[3, -2]));
        assert!(solve(&[v(&[1, 1])], &v(&[1, 0])).is_none());
    }

    proptest! {
        #[test]
        fn relations_really_vanish(
            vals in prop::collection::vec(prop::collection::vec(-3i64..4, 4), 1..6)
        ) {
            let vs: Vec<Vec<Rational>> = vals.iter().map(|r| v(r)).collect();
            let rels = relations(&vs);
            let rank = Span::new(4, vs.clone()).rank();
            prop_assert_eq!(rels.len(), vs.len() - rank);
            for r in rels {
                for i in 0..4 {
                    let s = (0..vs.len())
                        .fold(q(0), |acc, j| acc + r[j].clone() * vs[j][i].clone());
                    prop_assert_eq!(s, q(0));
                }
            }
        }
    }
}
