//! The lattice `ℕᵏ ⊂ ℤᵏ`: the Ore semigroup shipped with the crate and its
//! enveloping group.
//!
//! A [`LatticeElement`] is always a group element; it is a semigroup element
//! when every coordinate is non-negative. The partial order is
//! `r ≤ s ⇔ s − r ∈ ℕᵏ`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Operations the rest of the crate needs from an Ore semigroup `P` sitting
/// inside its enveloping group `G = P⁻¹P`.
///
/// Only the abelian lattice is implemented; another Ore semigroup can be
/// plugged in by implementing this trait for its group elements.
pub trait OreSemigroup: Clone + Eq + Sized {
    /// Unit `e` of the same shape as `self`.
    fn unit_like(&self) -> Self;
    /// Group law.
    fn compose(&self, other: &Self) -> Result<Self>;
    fn inverse(&self) -> Self;
    /// Membership in `P`.
    fn in_semigroup(&self) -> bool;
    /// `self ≤ other`, i.e. `other ∈ P·self`.
    fn precedes(&self, other: &Self) -> bool;
    /// Least common upper bound of two semigroup elements.
    fn join(&self, other: &Self) -> Result<Self>;
    /// Write `self = r⁻¹s` with `r, s ∈ P`.
    fn decompose(&self) -> (Self, Self);
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeElement(Vec<i64>);

impl LatticeElement {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticeElement(coords)
    }

    /// A semigroup element; fails on a negative coordinate.
    pub fn semigroup(coords: Vec<i64>) -> Result<Self> {
        let t = LatticeElement(coords);
        t.require_semigroup()?;
        Ok(t)
    }

    pub fn zero(rank: usize) -> Self {
        LatticeElement(vec![0; rank])
    }

    /// `n·e_i`.
    pub fn generator(rank: usize, i: usize, n: i64) -> Self {
        let mut c = vec![0; rank];
        c[i] = n;
        LatticeElement(c)
    }

    /// `(n, …, n)`.
    pub fn uniform(rank: usize, n: i64) -> Self {
        LatticeElement(vec![n; rank])
    }

    pub fn from_depth(depth: &[usize]) -> Self {
        LatticeElement(depth.iter().map(|&d| d as i64).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_semigroup(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn require_semigroup(&self) -> Result<()> {
        if self.is_semigroup() {
            Ok(())
        } else {
            Err(Error::NotSemigroup(self.to_string()))
        }
    }

    /// Coordinates as a depth vector; only defined on the semigroup.
    pub fn to_depth(&self) -> Result<Vec<usize>> {
        self.require_semigroup()?;
        Ok(self.0.iter().map(|&c| c as usize).collect())
    }

    /// Max-norm.
    pub fn norm(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    /// Sum of coordinates (word length for the generators `e_i`).
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank() == other.rank() {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                expected: self.rank(),
                found: other.rank(),
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    fn zip(&self, other: &Self, f: impl Fn(i64, i64) -> i64) -> Self {
        LatticeElement(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    /// `r ≤ s` in the semigroup order.
    pub fn le(&self, other: &Self) -> bool {
        self.rank() == other.rank() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise maximum of two semigroup elements.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        self.require_semigroup()?;
        other.require_semigroup()?;
        Ok(self.zip(other, i64::max))
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        Ok(self.zip(other, i64::min))
    }

    /// Positive part `max(t, 0)`.
    pub fn positive_part(&self) -> Self {
        LatticeElement(self.0.iter().map(|&c| c.max(0)).collect())
    }

    /// Negative part `max(−t, 0)`.
    pub fn negative_part(&self) -> Self {
        LatticeElement(self.0.iter().map(|&c| (-c).max(0)).collect())
    }

    /// The coordinatewise-minimal `(r, s)` with `t = s − r`, `r, s ≥ 0`.
    pub fn decompose(&self) -> (Self, Self) {
        (self.negative_part(), self.positive_part())
    }

    /// Every decomposition `(r + w, s + w)` with `w ∈ ℕᵏ`, `|w| ≤ bound`, the
    /// minimal one first.
    pub fn decompositions(&self, bound: u32) -> Vec<(Self, Self)> {
        let (r, s) = self.decompose();
        semigroup_box(bound as i64, self.rank())
            .into_iter()
            .map(|w| (&r + &w, &s + &w))
            .collect()
    }
}

impl OreSemigroup for LatticeElement {
    fn unit_like(&self) -> Self {
        LatticeElement::zero(self.rank())
    }

    fn compose(&self, other: &Self) -> Result<Self> {
        self.checked_add(other)
    }

    fn inverse(&self) -> Self {
        -self
    }

    fn in_semigroup(&self) -> bool {
        self.is_semigroup()
    }

    fn precedes(&self, other: &Self) -> bool {
        self.le(other)
    }

    fn join(&self, other: &Self) -> Result<Self> {
        LatticeElement::join(self, other)
    }

    fn decompose(&self) -> (Self, Self) {
        LatticeElement::decompose(self)
    }
}

/// All group elements of max-norm at most `radius`, lexicographic.
pub fn ball(radius: u32, rank: usize) -> Vec<LatticeElement> {
    let r = radius as i64;
    lattice_box(-r, r, rank)
}

/// Semigroup elements with every coordinate in `0..=bound`, lexicographic.
pub fn semigroup_box(bound: i64, rank: usize) -> Vec<LatticeElement> {
    lattice_box(0, bound, rank)
}

fn lattice_box(lo: i64, hi: i64, rank: usize) -> Vec<LatticeElement> {
    let mut out = vec![Vec::with_capacity(rank)];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (lo..=hi).map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(LatticeElement).collect()
}

impl Add for &LatticeElement {
    type Output = LatticeElement;
    fn add(self, rhs: &LatticeElement) -> LatticeElement {
        self.checked_add(rhs).expect("lattice rank mismatch")
    }
}

impl Sub for &LatticeElement {
    type Output = LatticeElement;
    fn sub(self, rhs: &LatticeElement) -> LatticeElement {
        self.checked_sub(rhs).expect("lattice rank mismatch")
    }
}

impl Neg for &LatticeElement {
    type Output = LatticeElement;
    fn neg(self) -> LatticeElement {
        LatticeElement(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for LatticeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for LatticeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
