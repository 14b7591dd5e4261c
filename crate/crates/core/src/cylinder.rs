//! Locally constant functions on a product of one-sided full shifts.
//!
//! `X = Π_i {0,…,d_i−1}^ℕ` and `θ_t` is the product shift, shifting factor
//! `i` by `t_i` places. A [`CylinderFunction`] of depth `n` depends only on
//! the first `n_i` symbols of each factor; its table is indexed by the
//! words of exactly those lengths, factor 0 most significant.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::LatticeElement;
use crate::scalar::Scalar;

const MAX_TABLE_LEN: usize = 1 << 24;
const SYMBOLS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// The alphabet sizes `d_i` of the factors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ShiftSystem {
    alphabets: Arc<[usize]>,
}

impl ShiftSystem {
    pub fn new(alphabets: Vec<usize>) -> Result<Self> {
        if alphabets.is_empty() {
            return Err(Error::EmptySystem);
        }
        if let Some(&d) = alphabets
            .iter()
            .find(|&&d| !(2..=SYMBOLS.len()).contains(&d))
        {
            return Err(Error::InvalidAlphabet(d));
        }
        Ok(ShiftSystem {
            alphabets: alphabets.into(),
        })
    }

    /// The one-factor full shift on `d` symbols.
    pub fn full_shift(d: usize) -> Result<Self> {
        Self::new(vec![d])
    }

    pub fn rank(&self) -> usize {
        self.alphabets.len()
    }

    pub fn alphabets(&self) -> &[usize] {
        &self.alphabets
    }

    pub fn alphabet(&self, factor: usize) -> usize {
        self.alphabets[factor]
    }

    pub fn uniform_depth(&self, n: usize) -> Vec<usize> {
        vec![n; self.rank()]
    }

    /// Number of words with the given per-factor lengths.
    pub fn table_len(&self, depth: &[usize]) -> Result<usize> {
        self.check_depth(depth)?;
        let mut len: usize = 1;
        for (&d, &n) in self.alphabets.iter().zip(depth) {
            len = u32::try_from(n)
                .ok()
                .and_then(|n| d.checked_pow(n))
                .and_then(|p| len.checked_mul(p))
                .filter(|&l| l <= MAX_TABLE_LEN)
                .ok_or_else(|| Error::TableTooLarge(depth.to_vec()))?;
        }
        Ok(len)
    }

    fn check_depth(&self, depth: &[usize]) -> Result<()> {
        if depth.len() == self.rank() {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                expected: self.rank(),
                found: depth.len(),
            })
        }
    }

    /// Table index of the truncation of `word` to `depth`.
    ///
    /// `word` must be at least `depth` long in every factor.
    pub fn index_of(&self, depth: &[usize], word: &Word) -> usize {
        let mut idx = 0;
        for (i, &n) in depth.iter().enumerate() {
            let d = self.alphabets[i];
            for &s in &word.factors[i][..n] {
                idx = idx * d + s as usize;
            }
        }
        idx
    }

    /// Inverse of [`index_of`](Self::index_of).
    pub fn word_at(&self, depth: &[usize], mut idx: usize) -> Word {
        let mut factors: Vec<Vec<u8>> = depth.iter().map(|&n| vec![0; n]).collect();
        for i in (0..self.rank()).rev() {
            let d = self.alphabets[i];
            for j in (0..depth[i]).rev() {
                factors[i][j] = (idx % d) as u8;
                idx /= d;
            }
        }
        Word { factors }
    }

    /// Calls `f` on every word of the given lengths, in table order.
    pub fn for_each_word(&self, lengths: &[usize], mut f: impl FnMut(&Word)) {
        let mut w = Word {
            factors: lengths.iter().map(|&n| vec![0; n]).collect(),
        };
        loop {
            f(&w);
            if !self.advance(&mut w) {
                return;
            }
        }
    }

    /// All words of the given lengths, in table order.
    pub fn words(&self, lengths: &[usize]) -> Vec<Word> {
        let mut out = Vec::new();
        self.for_each_word(lengths, |w| out.push(w.clone()));
        out
    }

    // Odometer step; false once every word has been visited.
    fn advance(&self, w: &mut Word) -> bool {
        for i in (0..self.rank()).rev() {
            let d = self.alphabets[i] as u8;
            for s in w.factors[i].iter_mut().rev() {
                *s += 1;
                if *s < d {
                    return true;
                }
                *s = 0;
            }
        }
        false
    }

    /// Parses a word written as per-factor strings joined by `|`.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let parts: Vec<&str> = s.split('|').collect();
        if parts.len() != self.rank() {
            return Err(Error::Parse(format!(
                "word {s:?} has {} factors, expected {}",
                parts.len(),
                self.rank()
            )));
        }
        let mut factors = Vec::with_capacity(parts.len());
        for (part, &d) in parts.iter().zip(self.alphabets.iter()) {
            let mut syms = Vec::with_capacity(part.len());
            for c in part.chars() {
                let v =
                    c.to_digit(36)
                        .filter(|&v| (v as usize) < d)
                        .ok_or(Error::InvalidSymbol {
                            symbol: c,
                            alphabet: d,
                        })?;
                syms.push(v as u8);
            }
            factors.push(syms);
        }
        Ok(Word { factors })
    }
}

impl fmt::Debug for ShiftSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ShiftSystem{:?}", &self.alphabets[..])
    }
}

/// A finite prefix of a point of `X`: one string per factor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    factors: Vec<Vec<u8>>,
}

impl Word {
    pub fn new(factors: Vec<Vec<u8>>) -> Self {
        Word { factors }
    }

    /// Single-factor word from symbol values.
    pub fn single(symbols: &[u8]) -> Self {
        Word {
            factors: vec![symbols.to_vec()],
        }
    }

    pub fn factors(&self) -> &[Vec<u8>] {
        &self.factors
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.factors.iter().map(Vec::len).collect()
    }

    pub fn covers(&self, depth: &[usize]) -> bool {
        self.factors.len() == depth.len()
            && self.factors.iter().zip(depth).all(|(f, &n)| f.len() >= n)
    }

    /// Prefix of the given lengths.
    pub fn truncate(&self, lengths: &[usize]) -> Word {
        Word {
            factors: self
                .factors
                .iter()
                .zip(lengths)
                .map(|(f, &n)| f[..n.min(f.len())].to_vec())
                .collect(),
        }
    }

    /// `prefix · self`, factor by factor.
    pub fn prepend(&self, prefix: &Word) -> Word {
        Word {
            factors: prefix
                .factors
                .iter()
                .zip(&self.factors)
                .map(|(p, f)| {
                    let mut v = p.clone();
                    v.extend_from_slice(f);
                    v
                })
                .collect(),
        }
    }

    /// `σ^t(self)`: drops the first `t_i` symbols of factor `i`.
    pub fn shift(&self, t: &[usize]) -> Result<Word> {
        if !self.covers(t) {
            return Err(Error::WordTooShort {
                word: self.to_string(),
                required: t.to_vec(),
            });
        }
        Ok(Word {
            factors: self
                .factors
                .iter()
                .zip(t)
                .map(|(f, &n)| f[n..].to_vec())
                .collect(),
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            for &s in factor {
                write!(f, "{}", SYMBOLS[s as usize] as char)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// A function on `X` depending on the first `depth[i]` symbols of each
/// factor.
#[derive(Clone)]
pub struct CylinderFunction<S> {
    system: ShiftSystem,
    depth: Vec<usize>,
    table: Vec<S>,
}

impl<S: Scalar> CylinderFunction<S> {
    pub fn new(system: ShiftSystem, depth: Vec<usize>, table: Vec<S>) -> Result<Self> {
        let expected = system.table_len(&depth)?;
        if table.len() != expected {
            return Err(Error::TableShape {
                depth,
                len: table.len(),
                expected,
            });
        }
        Ok(CylinderFunction {
            system,
            depth,
            table,
        })
    }

    pub fn constant(system: &ShiftSystem, c: S) -> Self {
        CylinderFunction {
            depth: vec![0; system.rank()],
            system: system.clone(),
            table: vec![c],
        }
    }

    pub fn one(system: &ShiftSystem) -> Self {
        Self::constant(system, S::one())
    }

    pub fn zero(system: &ShiftSystem) -> Self {
        Self::constant(system, S::zero())
    }

    /// Indicator of the cylinder set of points starting with `word`.
    pub fn indicator(system: &ShiftSystem, word: &Word) -> Result<Self> {
        let depth = word.lengths();
        let len = system.table_len(&depth)?;
        let mut table = vec![S::zero(); len];
        table[system.index_of(&depth, word)] = S::one();
        Ok(CylinderFunction {
            system: system.clone(),
            depth,
            table,
        })
    }

    /// Tabulates `f` over the words of the given depth.
    pub fn from_fn(
        system: &ShiftSystem,
        depth: Vec<usize>,
        mut f: impl FnMut(&Word) -> S,
    ) -> Result<Self> {
        let mut table = Vec::with_capacity(system.table_len(&depth)?);
        system.for_each_word(&depth, |w| table.push(f(w)));
        Ok(CylinderFunction {
            system: system.clone(),
            depth,
            table,
        })
    }

    /// Indicator basis of the functions of the given depth, in table order.
    pub fn basis(system: &ShiftSystem, depth: &[usize]) -> Result<Vec<Self>> {
        let len = system.table_len(depth)?;
        Ok((0..len)
            .map(|i| {
                let mut table = vec![S::zero(); len];
                table[i] = S::one();
                CylinderFunction {
                    system: system.clone(),
                    depth: depth.to_vec(),
                    table,
                }
            })
            .collect())
    }

    pub fn system(&self) -> &ShiftSystem {
        &self.system
    }

    pub fn depth(&self) -> &[usize] {
        &self.depth
    }

    pub fn table(&self) -> &[S] {
        &self.table
    }

    pub fn into_table(self) -> Vec<S> {
        self.table
    }

    /// `(word, value)` pairs in table order.
    pub fn entries(&self) -> impl Iterator<Item = (Word, &S)> + '_ {
        self.table
            .iter()
            .enumerate()
            .map(|(i, v)| (self.system.word_at(&self.depth, i), v))
    }

    pub fn evaluate(&self, word: &Word) -> Result<S> {
        if !word.covers(&self.depth) {
            return Err(Error::WordTooShort {
                word: word.to_string(),
                required: self.depth.clone(),
            });
        }
        Ok(self.table[self.system.index_of(&self.depth, word)].clone())
    }

    /// Same function, tabulated at a deeper depth.
    pub fn raise_depth(&self, depth: &[usize]) -> Result<Self> {
        self.system.check_depth(depth)?;
        if depth.iter().zip(&self.depth).any(|(new, old)| new < old) {
            return Err(Error::DepthDecrease {
                from: self.depth.clone(),
                to: depth.to_vec(),
            });
        }
        if depth == self.depth.as_slice() {
            return Ok(self.clone());
        }
        let mut table = Vec::with_capacity(self.system.table_len(depth)?);
        self.system.for_each_word(depth, |w| {
            table.push(self.table[self.system.index_of(&self.depth, w)].clone());
        });
        Ok(CylinderFunction {
            system: self.system.clone(),
            depth: depth.to_vec(),
            table,
        })
    }

    pub fn join_depth(&self, other: &Self) -> Vec<usize> {
        self.depth
            .iter()
            .zip(&other.depth)
            .map(|(a, b)| *a.max(b))
            .collect()
    }

    fn check_system(&self, other: &Self) -> Result<()> {
        if self.system == other.system {
            Ok(())
        } else {
            Err(Error::SystemMismatch)
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self> {
        self.check_system(other)?;
        let depth = self.join_depth(other);
        let a = self.raise_depth(&depth)?;
        let b = other.raise_depth(&depth)?;
        let table = a.table.iter().zip(&b.table).map(|(x, y)| f(x, y)).collect();
        Ok(CylinderFunction {
            system: self.system.clone(),
            depth,
            table,
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() * b.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    /// Involution; scalars are real so this is the identity.
    pub fn conj(&self) -> Self {
        self.clone()
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        CylinderFunction {
            system: self.system.clone(),
            depth: self.depth.clone(),
            table: self.table.iter().map(f).collect(),
        }
    }

    /// `α_t(f) = f ∘ θ_t`; depth grows by `t`.
    pub fn shift_pullback(&self, t: &LatticeElement) -> Result<Self> {
        let shift = t.to_depth()?;
        self.system.check_depth(&shift)?;
        if shift.iter().all(|&s| s == 0) {
            return Ok(self.clone());
        }
        let depth: Vec<usize> = self.depth.iter().zip(&shift).map(|(a, b)| a + b).collect();
        let mut table = Vec::with_capacity(self.system.table_len(&depth)?);
        // the first `shift` symbols are skipped when reading the old table
        let d = self.system.alphabets();
        self.system.for_each_word(&depth, |w| {
            let mut idx = 0;
            for (i, &n) in self.depth.iter().enumerate() {
                for &s in &w.factors[i][shift[i]..shift[i] + n] {
                    idx = idx * d[i] + s as usize;
                }
            }
            table.push(self.table[idx].clone());
        });
        Ok(CylinderFunction {
            system: self.system.clone(),
            depth,
            table,
        })
    }

    /// `g` with `α_t(g) = self`, if `self` does not depend on the first
    /// `t` symbols of any factor (the range of `α_t`); `None` otherwise.
    pub fn shift_preimage(&self, t: &LatticeElement) -> Result<Option<Self>> {
        let shift = t.to_depth()?;
        self.system.check_depth(&shift)?;
        let depth: Vec<usize> = self
            .depth
            .iter()
            .zip(&shift)
            .map(|(a, b)| *a.max(b))
            .collect();
        let raised = self.raise_depth(&depth)?;
        let inner: Vec<usize> = depth.iter().zip(&shift).map(|(a, b)| a - b).collect();
        let len = self.system.table_len(&inner)?;
        let mut table: Vec<Option<S>> = vec![None; len];
        let mut consistent = true;
        self.system.for_each_word(&depth, |w| {
            if !consistent {
                return;
            }
            let tail = w.shift(&shift).expect("word covers shift");
            let slot = &mut table[self.system.index_of(&inner, &tail)];
            let v = &raised.table[self.system.index_of(&depth, w)];
            match slot {
                Some(prev) if prev != v => consistent = false,
                Some(_) => {}
                None => *slot = Some(v.clone()),
            }
        });
        if !consistent {
            return Ok(None);
        }
        Ok(Some(CylinderFunction {
            system: self.system.clone(),
            depth: inner,
            table: table.into_iter().map(|v| v.expect("filled")).collect(),
        }))
    }

    /// `x ↦ Σ_p self(p·x)` over all prefixes `p` of lengths `t`.
    ///
    /// Depth must be at least `t`; the result has depth `depth − t`.
    pub fn sum_over_prefixes(&self, t: &[usize]) -> Result<Self> {
        self.system.check_depth(t)?;
        if t.iter().zip(&self.depth).any(|(a, b)| a > b) {
            return Err(Error::DepthDecrease {
                from: self.depth.clone(),
                to: t.to_vec(),
            });
        }
        let depth: Vec<usize> = self.depth.iter().zip(t).map(|(a, b)| a - b).collect();
        let prefixes = self.system.words(t);
        let mut table = Vec::with_capacity(self.system.table_len(&depth)?);
        self.system.for_each_word(&depth, |x| {
            let mut acc = S::zero();
            for p in &prefixes {
                let y = x.prepend(p);
                acc = acc + self.table[self.system.index_of(&self.depth, &y)].clone();
            }
            table.push(acc);
        });
        Ok(CylinderFunction {
            system: self.system.clone(),
            depth,
            table,
        })
    }

    /// Pointwise reciprocal; `None` if some entry vanishes.
    pub fn recip(&self) -> Option<Self> {
        if self.table.iter().any(|v| v.is_zero()) {
            return None;
        }
        Some(self.map(|v| S::one() / v.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|v| v.is_zero())
    }

    /// Positive as an element of `C(X)`: every entry `≥ 0`.
    pub fn is_positive(&self) -> bool {
        self.table.iter().all(|v| !v.is_negative())
    }

    pub fn min_entry(&self) -> S {
        self.table
            .iter()
            .cloned()
            .reduce(|a, b| if b < a { b } else { a })
            .expect("tables are never empty")
    }

    pub fn is_constant(&self) -> Option<&S> {
        let first = &self.table[0];
        self.table.iter().all(|v| v == first).then_some(first)
    }

    /// Same function at the smallest depth that still represents it,
    /// dropping trailing symbols the table does not depend on. Display
    /// only; equality never needs it.
    pub fn normalized(&self) -> Self {
        let mut cur = self.clone();
        'outer: loop {
            for i in 0..cur.system.rank() {
                if cur.depth[i] == 0 {
                    continue;
                }
                let mut lower = cur.depth.clone();
                lower[i] -= 1;
                let candidate = CylinderFunction::from_fn(&cur.system, lower, |w| {
                    // any extension works if the table ignores the symbol
                    let mut ext = w.clone();
                    ext.factors[i].push(0);
                    cur.table[cur.system.index_of(&cur.depth, &ext)].clone()
                })
                .expect("smaller table fits");
                if candidate.raise_depth(&cur.depth).expect("raise") == cur {
                    cur = candidate;
                    continue 'outer;
                }
            }
            return cur;
        }
    }
}

impl<S: Scalar> PartialEq for CylinderFunction<S> {
    /// Equality as functions on `X`: compared at the join depth.
    fn eq(&self, other: &Self) -> bool {
        if self.system != other.system {
            return false;
        }
        if self.depth == other.depth {
            return self.table == other.table;
        }
        let depth = self.join_depth(other);
        match (self.raise_depth(&depth), other.raise_depth(&depth)) {
            (Ok(a), Ok(b)) => a.table == b.table,
            _ => false,
        }
    }
}

impl<S: fmt::Display> fmt::Debug for CylinderFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CylinderFunction(depth={:?}, {{", self.depth)?;
        for (i, v) in self.table.iter().enumerate() {
            let w = self.system.word_at(&self.depth, i);
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w}: {v}")?;
        }
        write!(f, "}})")
    }
}

impl<S: Scalar> Add for &CylinderFunction<S> {
    type Output = CylinderFunction<S>;
    fn add(self, rhs: Self) -> CylinderFunction<S> {
        self.checked_add(rhs).expect("shift system mismatch")
    }
}

impl<S: Scalar> Sub for &CylinderFunction<S> {
    type Output = CylinderFunction<S>;
    fn sub(self, rhs: Self) -> CylinderFunction<S> {
        self.checked_sub(rhs).expect("shift system mismatch")
    }
}

impl<S: Scalar> Mul for &CylinderFunction<S> {
    type Output = CylinderFunction<S>;
    fn mul(self, rhs: Self) -> CylinderFunction<S> {
        self.checked_mul(rhs).expect("shift system mismatch")
    }
}

impl<S: Scalar> Neg for &CylinderFunction<S> {
    type Output = CylinderFunction<S>;
    fn neg(self) -> CylinderFunction<S> {
        self.map(|v| S::zero() - v.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use proptest::prelude::*;

    type F = CylinderFunction<Rational>;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn bin() -> ShiftSystem {
        ShiftSystem::full_shift(2).unwrap()
    }

    fn ind(s: &str) -> F {
        F::indicator(&bin(), &bin().parse_word(s).unwrap()).unwrap()
    }

    fn w(s: &str) -> Word {
        bin().parse_word(s).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(ind("0").evaluate(&w("01")).unwrap(), q(1, 1));
        assert_eq!(F::one(&bin()).evaluate(&w("1")).unwrap(), q(1, 1));
        assert_eq!(ind("0").evaluate(&w("10")).unwrap(), q(0, 1));
        assert!(matches!(
            ind("01").evaluate(&w("0")),
            Err(Error::WordTooShort { .. })
        ));
    }

    #[test]
    fn raise_depth_examples() {
        let half = F::constant(&bin(), q(1, 2)).raise_depth(&[2]).unwrap();
        assert_eq!(half.table(), &[q(1, 2), q(1, 2), q(1, 2), q(1, 2)]);
        let r = ind("0").raise_depth(&[2]).unwrap();
        assert_eq!(r.table(), &[q(1, 1), q(1, 1), q(0, 1), q(0, 1)]);
        for word in bin().words(&[3]) {
            assert_eq!(
                r.evaluate(&word).unwrap(),
                ind("0").evaluate(&word).unwrap()
            );
        }
        assert!(matches!(
            r.raise_depth(&[1]),
            Err(Error::DepthDecrease { .. })
        ));
    }

    #[test]
    fn algebra_examples() {
        assert_eq!(&ind("0") + &ind("1"), F::one(&bin()));
        assert!((&ind("0") * &ind("1")).is_zero());
        assert_eq!(F::one(&bin()).scale(&q(1, 3)), F::constant(&bin(), q(1, 3)));
        let other = F::one(&ShiftSystem::full_shift(3).unwrap());
        assert_eq!(ind("0").checked_add(&other), Err(Error::SystemMismatch));
    }

    #[test]
    fn pullback_examples() {
        let one = LatticeElement::new(vec![1]);
        let two = LatticeElement::new(vec![2]);
        let shifted = ind("0").shift_pullback(&one).unwrap();
        assert_eq!(shifted, &ind("00") + &ind("10"));
        assert_eq!(shifted.depth(), &[2]);
        assert_eq!(F::one(&bin()).shift_pullback(&two).unwrap(), F::one(&bin()));
        let twice = ind("0").shift_pullback(&two).unwrap();
        assert_eq!(twice, shifted.shift_pullback(&one).unwrap());
        assert_eq!(twice.evaluate(&w("110")).unwrap(), q(1, 1));
        assert_eq!(twice.evaluate(&w("001")).unwrap(), q(0, 1));
        assert!(ind("0")
            .shift_pullback(&LatticeElement::new(vec![-1]))
            .is_err());
    }

    #[test]
    fn preimage_detects_range_of_shift() {
        let one = LatticeElement::new(vec![1]);
        let f = ind("01");
        let g = f.shift_pullback(&one).unwrap();
        assert_eq!(g.shift_preimage(&one).unwrap(), Some(f));
        assert_eq!(ind("0").shift_preimage(&one).unwrap(), None);
        // constants are in every range
        let c = F::constant(&bin(), q(2, 5));
        assert_eq!(
            c.shift_preimage(&LatticeElement::new(vec![3])).unwrap(),
            Some(c)
        );
    }

    #[test]
    fn sum_over_prefixes_is_fiber_sum() {
        let f = F::from_fn(&bin(), vec![2], |w| {
            q(w.factors()[0][0] as i64 + 2 * w.factors()[0][1] as i64, 1)
        })
        .unwrap();
        let s = f.sum_over_prefixes(&[1]).unwrap();
        // x = 0: f(00) + f(10) = 0 + 1; x = 1: f(01) + f(11) = 2 + 3
        assert_eq!(s.table(), &[q(1, 1), q(5, 1)]);
    }

    #[test]
    fn two_factor_words_and_layout() {
        let sys = ShiftSystem::new(vec![2, 3]).unwrap();
        let word = sys.parse_word("1|20").unwrap();
        assert_eq!(word.to_string(), "1|20");
        let f = F::indicator(&sys, &word).unwrap();
        assert_eq!(f.table().len(), 2 * 9);
        assert_eq!(sys.word_at(&[1, 2], sys.index_of(&[1, 2], &word)), word);
        let all = sys.words(&[1, 1]);
        assert_eq!(all.len(), 6);
        assert_eq!(all[1].to_string(), "0|1");
        assert!(sys.parse_word("2|0").is_err());
        assert!(sys.parse_word("0").is_err());
    }

    #[test]
    fn normalized_reduces_depth_for_display() {
        let f = ind("1").raise_depth(&[3]).unwrap();
        let n = f.normalized();
        assert_eq!(n.depth(), &[1]);
        assert_eq!(n, f);
        assert_eq!(ind("01").normalized().depth(), &[2]);
    }

    fn arb_fn(max_depth: usize) -> impl Strategy<Value = F> {
        (0..=max_depth).prop_flat_map(|n| {
            prop::collection::vec(-3i64..4, 1 << n).prop_map(move |vals| {
                F::new(bin(), vec![n], vals.into_iter().map(|v| q(v, 2)).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn evaluation_respects_ring_operations(f in arb_fn(3), g in arb_fn(3)) {
            for word in bin().words(&[3]) {
                let (a, b) = (f.evaluate(&word).unwrap(), g.evaluate(&word).unwrap());
                prop_assert_eq!((&f + &g).evaluate(&word).unwrap(), a.clone() + b.clone());
                prop_assert_eq!((&f * &g).evaluate(&word).unwrap(), a.clone() * b.clone());
                prop_assert_eq!((&f - &g).evaluate(&word).unwrap(), a - b);
            }
        }

        #[test]
        fn pullback_is_injective_positive_and_a_homomorphism(
            f in arb_fn(2), g in arb_fn(2), t in 0i64..3
        ) {
            let t = LatticeElement::new(vec![t]);
            let (af, ag) = (f.shift_pullback(&t).unwrap(), g.shift_pullback(&t).unwrap());
            prop_assert_eq!(af == ag, f == g);
            prop_assert_eq!(af.is_positive(), f.is_positive());
            prop_assert_eq!((&f * &g).shift_pullback(&t).unwrap(), &af * &ag);
            prop_assert_eq!(af.shift_preimage(&t).unwrap(), Some(f.clone()));
        }

        #[test]
        fn indicators_partition_unity(n in 0usize..4) {
            let sum = F::basis(&bin(), &[n]).unwrap()
                .iter()
                .fold(F::zero(&bin()), |acc, b| &acc + b);
            prop_assert_eq!(sum, F::one(&bin()));
        }
    }
}
