//! Generating functions for the distribution of discrete EMD values.
//!
//! `H_{p,q}(z, t)` has as its `t^s` coefficient the polynomial
//! `sum z^{EMD(mu, nu)}` over all pairs `(mu, nu)` in `C(s,p) x C(s,q)`. It
//! satisfies
//!
//! ```text
//! H_{p,q} = (H_{p-1,q} + H_{p,q-1} - H_{p-1,q-1}) / (1 - z^{|p-q|} t),   H_{1,1} = 1/(1-t)
//! ```
//!
//! with `H = 0` whenever an index is not positive. Specializing at `z = 1`
//! and differentiating in `z` gives numerator polynomials `W_{p,q}(t)` and
//! `N_{p,q}(t)` over `(1-t)^{p+q-1}` and `(1-t)^{p+q}`; the `N` recursion
//! yields exact total and mean distances for any `s` without touching the
//! full series.

use std::collections::HashMap;

use num::{BigInt, BigRational, BigUint, Zero};
use thiserror::Error;

use crate::emd::Composition;
use crate::numerics::{binomial, TPoly, ZTSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenfunError {
    #[error("normalization undefined for n = {n}, s = {s}")]
    NormalizationUndefined { n: usize, s: u64 },
    #[error("indices must be positive (got p = {p}, q = {q})")]
    NonPositiveIndex { p: usize, q: usize },
}

/// Key of a memoized series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HSeriesKey {
    pub p: usize,
    pub q: usize,
    pub truncation: usize,
}

/// Memo table of `H_{p,q}` at one truncation level.
///
/// Filling is single-threaded (`&mut self`); once built the table is only
/// read, so it can be shared across threads.
#[derive(Debug, Clone)]
pub struct HSeriesTable {
    truncation: usize,
    table: HashMap<(usize, usize), ZTSeries>,
}

impl HSeriesTable {
    pub fn new(truncation: usize) -> Self {
        HSeriesTable { truncation, table: HashMap::new() }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn get(&self, p: usize, q: usize) -> Option<&ZTSeries> {
        self.table.get(&(p, q))
    }

    /// Keys of every series filled so far.
    pub fn keys(&self) -> impl Iterator<Item = HSeriesKey> + '_ {
        self.table
            .keys()
            .map(|&(p, q)| HSeriesKey { p, q, truncation: self.truncation })
    }

    fn lookup(&self, p: usize, q: usize) -> ZTSeries {
        if p == 0 || q == 0 {
            return ZTSeries::zero(self.truncation);
        }
        self.table[&(p, q)].clone()
    }

    /// Fills every `(p', q') <= (p, q)` in order of increasing `p' + q'`.
    pub fn build(&mut self, p: usize, q: usize) -> &ZTSeries {
        for total in 2..=p + q {
            for pp in 1..=p.min(total - 1) {
                let qq = total - pp;
                if qq == 0 || qq > q || self.table.contains_key(&(pp, qq)) {
                    continue;
                }
                let series = self.step(pp, qq);
                self.table.insert((pp, qq), series);
            }
        }
        &self.table[&(p, q)]
    }

    fn step(&self, p: usize, q: usize) -> ZTSeries {
        if (p, q) == (1, 1) {
            return ZTSeries::one(self.truncation).div_one_minus_zt(0);
        }
        // H_{p-1,q} dominates H_{p-1,q-1} coefficientwise (pad nu with a
        // zero part), so the difference below never goes negative.
        let numerator = self
            .lookup(p - 1, q)
            .checked_sub(&self.lookup(p - 1, q - 1))
            .and_then(|d| d.checked_add(&self.lookup(p, q - 1)))
            .expect("H_{p-1,q} - H_{p-1,q-1} is coefficientwise non-negative");
        numerator.div_one_minus_zt(p.abs_diff(q))
    }
}

/// `H_{p,q}(z, t)` truncated after `t^truncation`; the zero series if either
/// index is zero.
pub fn h_series(p: usize, q: usize, truncation: usize) -> ZTSeries {
    if p == 0 || q == 0 {
        return ZTSeries::zero(truncation);
    }
    HSeriesTable::new(truncation).build(p, q).clone()
}

// ---------------------------------------------------------------------------
// Histograms
// ---------------------------------------------------------------------------

/// Exact counts of ordered pairs in `C(s,n) x C(s,n)` by EMD value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmdHistogram {
    pub s: u64,
    pub n: usize,
    /// `counts[k]` for `k = 0..=s(n-1)`.
    pub counts: Vec<BigUint>,
}

impl EmdHistogram {
    pub fn count(&self, k: usize) -> BigUint {
        self.counts.get(k).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// `sum_k k * counts[k]`
    pub fn weighted_sum(&self) -> BigUint {
        self.counts.iter().enumerate().map(|(k, c)| c * BigUint::from(k)).sum()
    }

    pub fn mean(&self) -> BigRational {
        BigRational::new(self.weighted_sum().into(), self.total().into())
    }

    /// Mean of the unit-normalized distance, `mean / (s (n-1))`.
    pub fn unit_normalized_mean(&self) -> Result<BigRational, GenfunError> {
        if self.n < 2 || self.s == 0 {
            return Err(GenfunError::NormalizationUndefined { n: self.n, s: self.s });
        }
        Ok(self.mean() / BigRational::from_integer(BigInt::from(self.s) * BigInt::from(self.n - 1)))
    }
}

/// Histogram of EMD values over `C(s,n) x C(s,n)`, read off the `t^s`
/// coefficient of `H_{n,n}`.
pub fn histogram(s: u64, n: usize) -> Result<EmdHistogram, GenfunError> {
    if n == 0 {
        return Err(GenfunError::NonPositiveIndex { p: n, q: n });
    }
    let s_idx = s as usize;
    let series = h_series(n, n, s_idx);
    let poly = series.coeff(s_idx);
    let len = s_idx * (n - 1) + 1;
    let mut counts = poly.coeffs().to_vec();
    counts.resize(len.max(counts.len()), BigUint::zero());
    Ok(EmdHistogram { s, n, counts })
}

// ---------------------------------------------------------------------------
// Numerator polynomials
// ---------------------------------------------------------------------------

/// `W_{p',q'}` and `N_{p',q'}` for every `p' <= p`, `q' <= q`; row and column
/// zero hold the zero polynomial.
#[derive(Debug, Clone)]
pub struct NumeratorTable {
    w: Vec<Vec<TPoly>>,
    n: Vec<Vec<TPoly>>,
}

impl NumeratorTable {
    pub fn new(p: usize, q: usize) -> Self {
        let mut w = vec![vec![TPoly::zero(); q + 1]; p + 1];
        let mut n = vec![vec![TPoly::zero(); q + 1]; p + 1];
        let one_minus_t = TPoly::one_minus_t();
        for i in 1..=p {
            for j in 1..=q {
                if (i, j) == (1, 1) {
                    w[1][1] = TPoly::one();
                    continue;
                }
                w[i][j] = &(&w[i - 1][j] + &w[i][j - 1]) - &(&one_minus_t * &w[i - 1][j - 1]);
                let gap = BigRational::from_integer(i.abs_diff(j).into());
                let inhomogeneous = w[i][j].shift(1).scale(&gap);
                n[i][j] = &(&(&n[i - 1][j] + &n[i][j - 1]) - &(&one_minus_t * &n[i - 1][j - 1]))
                    + &inhomogeneous;
            }
        }
        NumeratorTable { w, n }
    }

    pub fn w(&self, p: usize, q: usize) -> &TPoly {
        &self.w[p][q]
    }

    pub fn n(&self, p: usize, q: usize) -> &TPoly {
        &self.n[p][q]
    }
}

/// Numerator of `H_{p,q}(1, t) = W_{p,q}(t) / (1-t)^{p+q-1}`.
pub fn w_poly(p: usize, q: usize) -> TPoly {
    NumeratorTable::new(p, q).w(p, q).clone()
}

/// Numerator of `dH_{p,q}/dz (1, t) = N_{p,q}(t) / (1-t)^{p+q}`.
pub fn n_poly(p: usize, q: usize) -> TPoly {
    NumeratorTable::new(p, q).n(p, q).clone()
}

/// Coefficient of `t^s` in `poly / (1-t)^order`, for a polynomial with
/// integer coefficients.
fn coefficient_over_pole(poly: &TPoly, order: u64, s: u64) -> BigInt {
    poly.integer_coeffs()
        .expect("integer numerator")
        .iter()
        .enumerate()
        .take_while(|(i, _)| *i as u64 <= s)
        .map(|(i, c)| c * BigInt::from(binomial(s - i as u64 + order - 1, order as i64 - 1)))
        .sum()
}

/// Total EMD over all pairs in `C(s,p) x C(s,q)`.
pub fn sum_emd(p: usize, q: usize, s: u64) -> BigUint {
    if p == 0 || q == 0 {
        return BigUint::zero();
    }
    let n = n_poly(p, q);
    coefficient_over_pole(&n, (p + q) as u64, s)
        .to_biguint()
        .expect("total distance is non-negative")
}

/// Exact mean of the discrete EMD over `C(s,p) x C(s,q)`.
pub fn mean_emd_discrete(p: usize, q: usize, s: u64) -> Result<BigRational, GenfunError> {
    if p == 0 || q == 0 {
        return Err(GenfunError::NonPositiveIndex { p, q });
    }
    let pairs = Composition::count(s, p) * Composition::count(s, q);
    Ok(BigRational::new(sum_emd(p, q, s).into(), pairs.into()))
}

/// Mean unit-normalized EMD over `C(s,n) x C(s,n)`.
pub fn mean_emd_unit_normalized(n: usize, s: u64) -> Result<BigRational, GenfunError> {
    if n < 2 || s == 0 {
        return Err(GenfunError::NormalizationUndefined { n, s });
    }
    let scale = BigRational::from_integer(BigInt::from(s) * BigInt::from(n - 1));
    Ok(mean_emd_discrete(n, n, s)? / scale)
}

/// `(palindromic, unimodal)` over the span from the lowest to the highest
/// nonzero coefficient. A zero strictly inside the span makes the sequence
/// non-unimodal.
pub fn check_palindromic_unimodal(poly: &TPoly) -> (bool, bool) {
    let coeffs = poly.coeffs();
    let Some(lo) = coeffs.iter().position(|c| !c.is_zero()) else {
        return (true, true);
    };
    let span = &coeffs[lo..];
    let palindromic = span.iter().eq(span.iter().rev());

    let has_internal_zero = span.iter().any(Zero::is_zero);
    let peak = span
        .windows(2)
        .position(|w| w[1] < w[0])
        .map_or(span.len() - 1, |i| i);
    let falls = span[peak..].windows(2).all(|w| w[1] <= w[0]);
    (palindromic, falls && !has_internal_zero)
}
