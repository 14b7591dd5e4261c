//! The doubling map on the circle and its inverse limit, the solenoid.
//!
//! Cocycles for `z ↦ z²` are piecewise linear in the angle, with rational
//! breakpoints measured in units of `π`; the zero set is found exactly. The
//! operators themselves are evaluated in floating point.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{Float, FloatConst, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::report::{Tally, VerificationReport};
use crate::scalar::{format_rational, parse_rational};
use crate::Rational;

/// Allowed distance of an input point from the unit circle.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// `ω'` on `[0, π]`, interpolated linearly between breakpoints; on
/// `(π, 2π]` the value is `1 − ω'(t − π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinearCocycle {
    /// Angles in units of `π`, from 0 to 1.
    breakpoints: Vec<Rational>,
    values: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleClass {
    IndexFinite,
    FaithfulNotIndexFinite,
    NotFaithful,
}

impl fmt::Display for CircleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CircleClass::IndexFinite => "index_finite",
            CircleClass::FaithfulNotIndexFinite => "faithful_not_index_finite",
            CircleClass::NotFaithful => "not_faithful",
        })
    }
}

/// Zeros of `ω` on `[0, 2)` (units of `π`).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ZeroSet {
    pub points: Vec<Rational>,
    pub intervals: Vec<(Rational, Rational)>,
}

impl PiecewiseLinearCocycle {
    pub fn new(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidPiecewise(msg.to_string()));
        if breakpoints.len() < 2 || breakpoints.len() != values.len() {
            return bad("need at least two breakpoints, one value each");
        }
        if !breakpoints[0].is_zero() || !breakpoints[breakpoints.len() - 1].is_one() {
            return bad("breakpoints must run from 0 to 1 (units of π)");
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return bad("breakpoints must increase strictly");
        }
        if values
            .iter()
            .any(|v| v.is_negative() || *v > Rational::one())
        {
            return bad("values must lie in [0, 1]");
        }
        if values[values.len() - 1] != Rational::one() - &values[0] {
            return bad("continuity needs ω'(π) = 1 − ω'(0)");
        }
        Ok(PiecewiseLinearCocycle {
            breakpoints,
            values,
        })
    }

    /// The named examples `w1`, `w2`, `w3`.
    pub fn preset(name: &str) -> Result<Self> {
        let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
        match name {
            // ≡ 1/2
            "w1" => Self::new(vec![r(0, 1), r(1, 1)], vec![r(1, 2), r(1, 2)]),
            // t/π
            "w2" => Self::new(vec![r(0, 1), r(1, 1)], vec![r(0, 1), r(1, 1)]),
            // 0 on [0, π/2], then 2t/π − 1
            "w3" => Self::new(
                vec![r(0, 1), r(1, 2), r(1, 1)],
                vec![r(0, 1), r(0, 1), r(1, 1)],
            ),
            other => Err(Error::InvalidPiecewise(format!("unknown preset {other}"))),
        }
    }

    /// Preset name, or `"a:v,b:v,…"` with angles in units of `π`.
    pub fn parse(spec: &str) -> Result<Self> {
        if let Ok(p) = Self::preset(spec) {
            return Ok(p);
        }
        let mut bps = Vec::new();
        let mut vals = Vec::new();
        for pair in spec.split(',') {
            let (a, v) = pair.split_once(':').ok_or_else(|| {
                Error::InvalidPiecewise(format!("expected angle:value, got {pair}"))
            })?;
            bps.push(parse_rational(a.trim())?);
            vals.push(parse_rational(v.trim())?);
        }
        Self::new(bps, vals)
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `"a:v,…"`, the form [`parse`](Self::parse) reads back.
    pub fn describe(&self) -> String {
        self.breakpoints
            .iter()
            .zip(&self.values)
            .map(|(a, v)| format!("{}:{}", format_rational(a), format_rational(v)))
            .collect::<Vec<_>>()
            .join(",")
    }

    fn on_half(&self, u: &Rational) -> Rational {
        let i = self
            .breakpoints
            .windows(2)
            .position(|w| *u <= w[1])
            .unwrap_or(self.breakpoints.len() - 2);
        let (a, b) = (&self.breakpoints[i], &self.breakpoints[i + 1]);
        let (va, vb) = (&self.values[i], &self.values[i + 1]);
        va + (vb - va) * (u - a) / (b - a)
    }

    /// `ω` at the angle `u·π`, exactly.
    pub fn value_exact(&self, u: &Rational) -> Rational {
        let two = Rational::from_integer(BigInt::from(2));
        let mut u = u % &two;
        if u.is_negative() {
            u += &two;
        }
        if u <= Rational::one() {
            self.on_half(&u)
        } else {
            Rational::one() - self.on_half(&(u - Rational::one()))
        }
    }

    /// `ω` at the angle `t` (radians).
    pub fn value<F: Float + FloatConst>(&self, t: F) -> F {
        let two_pi = F::PI() + F::PI();
        let mut u = (t % two_pi) / F::PI();
        if u < F::zero() {
            u = u + F::one() + F::one();
        }
        let (u, flip) = if u <= F::one() {
            (u, false)
        } else {
            (u - F::one(), true)
        };
        let f = |r: &Rational| F::from(r.to_f64().expect("finite rational")).expect("float");
        let i = self
            .breakpoints
            .iter()
            .skip(1)
            .position(|b| u <= f(b))
            .unwrap_or(self.breakpoints.len() - 2);
        let (a, b) = (f(&self.breakpoints[i]), f(&self.breakpoints[i + 1]));
        let (va, vb) = (f(&self.values[i]), f(&self.values[i + 1]));
        let v = va + (vb - va) * (u - a) / (b - a);
        if flip {
            F::one() - v
        } else {
            v
        }
    }

    /// Zeros of `ω` on the circle. On `[0, π]` these are zeros of `ω'`; on
    /// `(π, 2π)` they are the points where `ω'` equals 1, shifted by `π`.
    pub fn zero_set(&self) -> ZeroSet {
        let mut set = ZeroSet::default();
        let one = Rational::one();
        for (target, offset) in [
            (Rational::zero(), Rational::zero()),
            (one.clone(), one.clone()),
        ] {
            for (i, w) in self.breakpoints.windows(2).enumerate() {
                let (va, vb) = (&self.values[i], &self.values[i + 1]);
                let (a, b) = (&w[0], &w[1]);
                if *va == target && *vb == target {
                    set.intervals.push((a + &offset, b + &offset));
                } else if *va == target {
                    set.points.push(a + &offset);
                } else if *vb == target {
                    set.points.push(b + &offset);
                }
                // values stay in [0,1], so 0 and 1 are only met at endpoints
                // or along flat pieces
            }
        }
        let two = Rational::from_integer(BigInt::from(2));
        let wrap = |u: Rational| if u >= two { u - &two } else { u };
        let mut points: Vec<Rational> = set.points.into_iter().map(wrap).collect();
        points.sort();
        points.dedup();
        // isolated zeros at the end of a flat piece are already covered
        points.retain(|p| !set.intervals.iter().any(|(a, b)| a <= p && p <= b));
        set.points = points;
        set.intervals.sort();
        set
    }

    pub fn classify(&self) -> CircleClass {
        let zeros = self.zero_set();
        if !zeros.intervals.is_empty() {
            CircleClass::NotFaithful
        } else if !zeros.points.is_empty() {
            CircleClass::FaithfulNotIndexFinite
        } else {
            CircleClass::IndexFinite
        }
    }

    /// `L(b)(x) = ω(y)b(y) + ω(−y)b(−y)` with `y² = x`.
    pub fn transfer<F: Float + FloatConst>(
        &self,
        b: impl Fn(Complex<F>) -> Complex<F>,
        x: Complex<F>,
    ) -> Result<Complex<F>> {
        check_unit(x)?;
        let y = x.sqrt();
        let mut acc = Complex::new(F::zero(), F::zero());
        for z in [y, -y] {
            acc = acc + b(z).scale(self.value(z.arg()));
        }
        Ok(acc)
    }
}

fn check_unit<F: Float>(x: Complex<F>) -> Result<()> {
    let modulus = x.norm().to_f64().unwrap_or(f64::NAN);
    if (modulus - 1.0).abs() <= UNIT_TOLERANCE {
        Ok(())
    } else {
        Err(Error::NonUnitModulus { modulus })
    }
}

/// A finitely supported `m: ℕ → ℤ`, the exponent of the monomial
/// `b_m(z) = Π_k z(k)^{m(k)}` on the solenoid.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialIndex {
    m: BTreeMap<usize, i64>,
}

impl MonomialIndex {
    pub fn new(pairs: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut m = BTreeMap::new();
        for (k, v) in pairs {
            *m.entry(k).or_insert(0) += v;
        }
        m.retain(|_, v| *v != 0);
        MonomialIndex { m }
    }

    /// `δ_k`.
    pub fn delta(k: usize) -> Self {
        Self::new([(k, 1)])
    }

    pub fn get(&self, k: usize) -> i64 {
        self.m.get(&k).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.m.iter().map(|(&k, &v)| (k, v))
    }

    /// Largest `k` with `m(k) ≠ 0`; 0 for the empty index.
    pub fn mbar(&self) -> usize {
        self.m.keys().next_back().copied().unwrap_or(0)
    }

    /// `c = Σ_k m(k) d^{m̄−k}`.
    pub fn c(&self, d: u32) -> i64 {
        let mbar = self.mbar();
        self.support()
            .map(|(k, v)| v * (d as i64).pow((mbar - k) as u32))
            .sum()
    }

    /// Every index with support in `0..len` and entries in `−bound..=bound`.
    pub fn enumerate(len: usize, bound: i64) -> Vec<MonomialIndex> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    (-bound..=bound).map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(|vals| Self::new(vals.into_iter().enumerate()))
            .collect()
    }

    pub fn checked_add(&self, other: &Self) -> Self {
        Self::new(self.support().chain(other.support()))
    }

    /// `b_m* = b_{−m}`.
    pub fn conj(&self) -> Self {
        Self::new(self.support().map(|(k, v)| (k, -v)))
    }
}

impl FromStr for MonomialIndex {
    type Err = Error;

    /// `"k:v,k:v"`; the empty string is the zero index.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::default());
        }
        let mut pairs = Vec::new();
        for pair in s.split(',') {
            let (k, v) = pair
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected k:v, got {pair:?}")))?;
            let k = k
                .trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("index {k:?}: {e}")))?;
            let v = v
                .trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("exponent {v:?}: {e}")))?;
            pairs.push((k, v));
        }
        Ok(Self::new(pairs))
    }
}

impl fmt::Display for MonomialIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.support().map(|(k, v)| format!("{k}:{v}")).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolenoidMode {
    Sum,
    ClosedForm,
}

/// `F(b_m)(x)` for the fair cocycle `ω(n, ·) = d^{−n}` of `z ↦ z^d`.
pub fn solenoid_expectation<F: Float + FloatConst>(
    m: &MonomialIndex,
    x: Complex<F>,
    mode: SolenoidMode,
    d: u32,
) -> Result<Complex<F>> {
    check_unit(x)?;
    let n = (d as i64).pow(m.mbar() as u32);
    let c = m.c(d);
    match mode {
        SolenoidMode::ClosedForm => {
            if c % n == 0 {
                Ok(x.powi((c / n) as i32))
            } else {
                Ok(Complex::new(F::zero(), F::zero()))
            }
        }
        SolenoidMode::Sum => Ok(root_sum(
            m,
            x.powf(F::one() / F::from(n).expect("float")),
            d,
        )),
    }
}

/// `N⁻¹ Σ y^c` over `y = base·ζ^j`, `ζ = e^{2πi/N}`; `base` must be an
/// `N`-th root of the point.
pub fn root_sum<F: Float + FloatConst>(m: &MonomialIndex, base: Complex<F>, d: u32) -> Complex<F> {
    let n = (d as i64).pow(m.mbar() as u32);
    let c = m.c(d) as i32;
    let nf = F::from(n).expect("float");
    let step = F::TAU() / nf;
    let mut acc = Complex::new(F::zero(), F::zero());
    for j in 0..n {
        let zeta = Complex::from_polar(F::one(), step * F::from(j).expect("float"));
        acc = acc + (base * zeta).powi(c);
    }
    acc.unscale(nf)
}

/// `x_j = e^{2πij/n}`.
pub fn unit_samples(n: usize) -> Vec<Complex<f64>> {
    (0..n)
        .map(|j| Complex::from_polar(1.0, std::f64::consts::TAU * j as f64 / n as f64))
        .collect()
}

/// For each monomial and sample: both evaluation modes agree, the value
/// does not depend on the root used as base point, `F` fixes its range and
/// is a bimodule map over `b_{kδ₀}`, `F(1) = 1`.
pub fn solenoid_suite(
    monomials: &[MonomialIndex],
    samples: usize,
    tol: f64,
    d: u32,
) -> VerificationReport {
    let mut report = VerificationReport::new();
    let xs = unit_samples(samples);
    let close = |a: Complex<f64>, b: Complex<f64>| (a - b).norm() <= tol;
    let num = |z: Complex<f64>| json!({ "re": z.re, "im": z.im });

    let mut agree = Tally::new("modes_agree").param("tol", tol).param("d", d);
    let mut labels = Tally::new("root_labeling_invariant")
        .param("tol", tol)
        .param("d", d);
    let mut idempotent = Tally::new("idempotent").param("tol", tol).param("d", d);
    let mut bimodule = Tally::new("bimodule").param("tol", tol).param("d", d);
    let mut unital = Tally::new("unital").param("tol", tol).param("d", d);
    let f = |m: &MonomialIndex, x, mode| solenoid_expectation::<f64>(m, x, mode, d);

    for &x in &xs {
        match f(&MonomialIndex::default(), x, SolenoidMode::Sum) {
            Ok(v) => unital.observe(
                close(v, Complex::one()),
                || json!({ "x": num(x), "F(1)": num(v) }),
            ),
            Err(e) => unital.error(e),
        }
    }
    for m in monomials {
        let n = (d as i64).pow(m.mbar() as u32);
        for &x in &xs {
            let (sum, closed) = match (
                f(m, x, SolenoidMode::Sum),
                f(m, x, SolenoidMode::ClosedForm),
            ) {
                (Ok(s), Ok(c)) => (s, c),
                (Err(e), _) | (_, Err(e)) => {
                    agree.error(e);
                    continue;
                }
            };
            agree.observe(close(sum, closed), || {
                json!({ "m": m.to_string(), "x": num(x), "sum": num(sum), "closed_form": num(closed) })
            });

            let base = x.powf(1.0 / n as f64);
            for k in 0..n {
                let zeta = Complex::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
                let v = root_sum(m, base * zeta, d);
                labels.observe(
                    close(v, sum),
                    || json!({ "m": m.to_string(), "x": num(x), "base_root": k, "value": num(v) }),
                );
            }

            // F(b_m) is 0 or x^{c/N} = b_{(c/N)δ₀}, which F fixes
            let c = m.c(d);
            let range = if c % n == 0 {
                f(&MonomialIndex::new([(0, c / n)]), x, SolenoidMode::Sum)
            } else {
                Ok(Complex::new(0.0, 0.0))
            };
            match range {
                Ok(v) => idempotent.observe(close(v, sum), || {
                    json!({ "m": m.to_string(), "x": num(x), "F(F(b))": num(v), "F(b)": num(sum) })
                }),
                Err(e) => idempotent.error(e),
            }

            for k in [-2i64, -1, 1, 2] {
                let shifted = m.checked_add(&MonomialIndex::new([(0, k)]));
                match f(&shifted, x, SolenoidMode::Sum) {
                    Ok(lhs) => {
                        let rhs = x.powi(k as i32) * sum;
                        bimodule.observe(close(lhs, rhs), || {
                            json!({ "m": m.to_string(), "k": k, "x": num(x), "lhs": num(lhs), "rhs": num(rhs) })
                        });
                    }
                    Err(e) => bimodule.error(e),
                }
            }
        }
    }
    for t in [agree, labels, idempotent, bimodule, unital] {
        report.push(t.finish());
    }
    report
}

/// The exact zero-set classification as a report entry.
pub fn classify_entry(name: &str, w: &PiecewiseLinearCocycle) -> crate::report::CheckEntry {
    let zeros = w.zero_set();
    let class = w.classify();
    let mut tally = Tally::new("classify")
        .param("omega", name)
        .param("class", class)
        .note(format!(
            "zero points {:?}, zero intervals {:?} (units of π)",
            zeros.points.iter().map(format_rational).collect::<Vec<_>>(),
            zeros
                .intervals
                .iter()
                .map(|(a, b)| format!("[{},{}]", format_rational(a), format_rational(b)))
                .collect::<Vec<_>>()
        ));
    tally.observe(true, || json!(null));
    tally.finish()
}
