//! Exact arithmetic substrate: rationals, dense polynomials in `t`, and
//! truncated series in `t` whose coefficients are integer polynomials in `z`.
//!
//! Everything here is immutable after construction. Operations return new
//! values and never mutate their inputs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigUint, One, Signed, Zero};
use thiserror::Error;

pub use num::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericsError {
    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },
    #[error("negative coefficient at t^{t_degree} z^{z_degree}")]
    NegativeCoefficient { t_degree: usize, z_degree: usize },
}

/// Shorthand for the rational `num / den`.
pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Exact binomial coefficient, zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

// ---------------------------------------------------------------------------
// TPoly
// ---------------------------------------------------------------------------

/// Dense univariate polynomial in `t` with rational coefficients.
///
/// `coeffs[i]` is the coefficient of `t^i`. The zero polynomial has no
/// coefficients; otherwise the last coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct TPoly {
    coeffs: Vec<BigRational>,
}

impl TPoly {
    pub fn zero() -> Self {
        TPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * t^degree`
    pub fn monomial(c: BigRational, degree: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        TPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// `1 - t`
    pub fn one_minus_t() -> Self {
        Self::from_ints(&[1, -1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TPoly { coeffs }
    }

    /// Coefficients as integers, or `None` if any coefficient is fractional.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match i {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => {}
                _ => write!(f, "{mag}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add<&TPoly> for &TPoly {
    type Output = TPoly;
    fn add(self, rhs: &TPoly) -> TPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        TPoly::from_coeffs((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&TPoly> for &TPoly {
    type Output = TPoly;
    fn sub(self, rhs: &TPoly) -> TPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        TPoly::from_coeffs((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&TPoly> for &TPoly {
    type Output = TPoly;
    fn mul(self, rhs: &TPoly) -> TPoly {
        if self.is_zero() || rhs.is_zero() {
            return TPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        TPoly::from_coeffs(out)
    }
}

impl Neg for &TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        TPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<TPoly> for TPoly {
            type Output = TPoly;
            fn $method(self, rhs: TPoly) -> TPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&TPoly> for TPoly {
            type Output = TPoly;
            fn $method(self, rhs: &TPoly) -> TPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

// ---------------------------------------------------------------------------
// ZPoly
// ---------------------------------------------------------------------------

/// Dense polynomial in `z` with non-negative integer coefficients (counts).
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct ZPoly {
    coeffs: Vec<BigUint>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    /// `z^k`
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigUint::zero(); k + 1];
        coeffs[k] = BigUint::one();
        ZPoly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigUint>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_counts(counts: &[u64]) -> Self {
        Self::from_coeffs(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigUint {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Multiply by `z^a`.
    pub fn shift(&self, a: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigUint::zero(); a];
        coeffs.extend(self.coeffs.iter().cloned());
        ZPoly { coeffs }
    }

    pub fn add(&self, rhs: &ZPoly) -> ZPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        ZPoly::from_coeffs((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }

    /// Coefficientwise difference; `Err(k)` names the first `z^k` that would
    /// go negative.
    pub fn checked_sub(&self, rhs: &ZPoly) -> Result<ZPoly, usize> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for k in 0..len {
            let (a, b) = (self.coeff(k), rhs.coeff(k));
            if a < b {
                return Err(k);
            }
            out.push(a - b);
        }
        Ok(ZPoly::from_coeffs(out))
    }

    pub fn eval(&self, z: &BigUint) -> BigUint {
        self.coeffs
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, c| acc * z + c)
    }

    /// Value at `z = 1`.
    pub fn sum(&self) -> BigUint {
        self.coeffs.iter().sum()
    }
}

// ---------------------------------------------------------------------------
// ZTSeries
// ---------------------------------------------------------------------------

/// Series in `t` truncated after `t^truncation`; each `t`-coefficient is a
/// [`ZPoly`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZTSeries {
    truncation: usize,
    coeffs: Vec<ZPoly>,
}

impl ZTSeries {
    pub fn zero(truncation: usize) -> Self {
        ZTSeries { truncation, coeffs: vec![ZPoly::zero(); truncation + 1] }
    }

    pub fn one(truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        s.coeffs[0] = ZPoly::one();
        s
    }

    /// Terms beyond `t^truncation` are dropped; missing terms are zero.
    pub fn from_coeffs(truncation: usize, mut coeffs: Vec<ZPoly>) -> Self {
        coeffs.resize(truncation + 1, ZPoly::zero());
        ZTSeries { truncation, coeffs }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn coeffs(&self) -> &[ZPoly] {
        &self.coeffs
    }

    /// Coefficient of `t^s`; zero past the truncation.
    pub fn coeff(&self, s: usize) -> ZPoly {
        self.coeffs.get(s).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(ZPoly::is_zero)
    }

    fn check_truncation(&self, rhs: &ZTSeries) -> Result<(), NumericsError> {
        if self.truncation != rhs.truncation {
            return Err(NumericsError::TruncationMismatch {
                left: self.truncation,
                right: rhs.truncation,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, rhs: &ZTSeries) -> Result<ZTSeries, NumericsError> {
        self.check_truncation(rhs)?;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.add(b)).collect();
        Ok(ZTSeries { truncation: self.truncation, coeffs })
    }

    pub fn checked_sub(&self, rhs: &ZTSeries) -> Result<ZTSeries, NumericsError> {
        self.check_truncation(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .enumerate()
            .map(|(s, (a, b))| {
                a.checked_sub(b)
                    .map_err(|k| NumericsError::NegativeCoefficient { t_degree: s, z_degree: k })
            })
            .collect::<Result<_, _>>()?;
        Ok(ZTSeries { truncation: self.truncation, coeffs })
    }

    /// Multiply by `z^a t^shift_t`, re-truncating at the same level.
    pub fn mul_scalar_zpow(&self, a: usize, shift_t: usize) -> ZTSeries {
        let mut out = Self::zero(self.truncation);
        for s in shift_t..=self.truncation {
            out.coeffs[s] = self.coeffs[s - shift_t].shift(a);
        }
        out
    }

    /// Divide by `1 - z^a t`: `y_0 = x_0`, `y_s = x_s + z^a y_{s-1}`.
    pub fn div_one_minus_zt(&self, a: usize) -> ZTSeries {
        let mut coeffs: Vec<ZPoly> = Vec::with_capacity(self.truncation + 1);
        for (s, x) in self.coeffs.iter().enumerate() {
            let y = match s {
                0 => x.clone(),
                _ => x.add(&coeffs[s - 1].shift(a)),
            };
            coeffs.push(y);
        }
        ZTSeries { truncation: self.truncation, coeffs }
    }

    /// Specialize `z`, leaving the integer `t`-coefficients.
    pub fn eval_z(&self, z: &BigUint) -> Vec<BigUint> {
        self.coeffs.iter().map(|c| c.eval(z)).collect()
    }

    /// Largest `z`-degree over all retained terms.
    pub fn max_z_degree(&self) -> Option<usize> {
        self.coeffs.iter().filter_map(ZPoly::degree).max()
    }
}
