//! One-dimensional Earth Mover's Distance on the ground metric `|i - j|`.
//!
//! The closed form used throughout is the sum of absolute prefix sums of
//! `mu - nu`. The exhaustive transport search in [`emd_oracle`] computes the
//! same quantity directly from the definition (minimum of `<J, C>` over all
//! non-negative integer matrices with the given margins) and exists to check
//! the closed form on small instances.
//!
//! Indices are 0-based in code. The cost `|i - j|` is translation invariant so
//! this agrees with the 1-based convention of the grade examples.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, BigUint, Signed, Zero};
use thiserror::Error;

use crate::numerics::binomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmdError {
    #[error("margins differ: {left} vs {right}")]
    MarginsDiffer { left: u64, right: u64 },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("normalization undefined for n = {parts}, s = {sum}")]
    NormalizationUndefined { parts: usize, sum: u64 },
    #[error("oracle cap exceeded: s = {sum}, p*q = {cells}")]
    OracleCapExceeded { sum: u64, cells: usize },
    #[error("not a chain matrix")]
    NotChain,
    #[error("invalid probability vector: {0}")]
    InvalidProbVector(String),
    #[error("invalid joint matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid composition {0:?}")]
    InvalidComposition(String),
}

// ---------------------------------------------------------------------------
// Compositions
// ---------------------------------------------------------------------------

/// An ordered tuple of non-negative integers: an unnormalized distribution
/// of `sum()` units over `len()` bins.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<u64>,
}

impl Composition {
    pub fn new(parts: Vec<u64>) -> Self {
        Composition { parts }
    }

    /// Builds a composition and checks it sums to `sum`.
    pub fn with_sum(parts: Vec<u64>, sum: u64) -> Result<Self, EmdError> {
        let c = Composition { parts };
        if c.sum() != sum {
            return Err(EmdError::MarginsDiffer { left: c.sum(), right: sum });
        }
        Ok(c)
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Parts right-padded with zeros to length `n` (never truncates).
    pub fn padded(&self, n: usize) -> Vec<u64> {
        let mut v = self.parts.clone();
        if v.len() < n {
            v.resize(n, 0);
        }
        v
    }

    /// The weakly increasing word in which bin `k` (1-based) appears
    /// `parts[k-1]` times, e.g. `(3,0,2,1,0)` gives `111334`.
    pub fn word(&self) -> Vec<usize> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(k, &m)| std::iter::repeat_n(k + 1, m as usize))
            .collect()
    }

    /// Every composition of `s` into `n` parts, in reverse lexicographic
    /// order (starting from `(s, 0, ..., 0)`).
    pub fn all(s: u64, n: usize) -> Vec<Composition> {
        fn rec(s: u64, n: usize, prefix: &mut Vec<u64>, out: &mut Vec<Composition>) {
            if n == 1 {
                prefix.push(s);
                out.push(Composition::new(prefix.clone()));
                prefix.pop();
                return;
            }
            for first in (0..=s).rev() {
                prefix.push(first);
                rec(s - first, n - 1, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        match n {
            0 if s == 0 => out.push(Composition::new(Vec::new())),
            0 => {}
            _ => rec(s, n, &mut Vec::with_capacity(n), &mut out),
        }
        out
    }

    /// `|C(s, n)| = binom(s + n - 1, n - 1)`.
    pub fn count(s: u64, n: usize) -> BigUint {
        if n == 0 {
            return BigUint::from(u8::from(s == 0));
        }
        binomial(s + n as u64 - 1, n as i64 - 1)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Composition {
    type Err = EmdError;

    /// Accepts `0,19,8,2,1` with optional surrounding parentheses.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        if inner.trim().is_empty() {
            return Err(EmdError::InvalidComposition(s.to_string()));
        }
        inner
            .split(',')
            .map(|p| p.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map(Composition::new)
            .map_err(|_| EmdError::InvalidComposition(s.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Probability vectors
// ---------------------------------------------------------------------------

/// A probability measure on `{1, ..., n}` with exact rational weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProbVector {
    weights: Vec<BigRational>,
}

/// Tolerance on the total mass of floating-point probability vectors.
pub const REAL_MASS_TOLERANCE: f64 = 1e-12;

impl ProbVector {
    pub fn new(weights: Vec<BigRational>) -> Result<Self, EmdError> {
        if weights.is_empty() {
            return Err(EmdError::InvalidProbVector("empty".into()));
        }
        if weights.iter().any(Signed::is_negative) {
            return Err(EmdError::InvalidProbVector("negative weight".into()));
        }
        let total: BigRational = weights.iter().sum();
        if total != BigRational::from_integer(1.into()) {
            return Err(EmdError::InvalidProbVector(format!("weights sum to {total}")));
        }
        Ok(ProbVector { weights })
    }

    /// `counts / sum(counts)`; the total must be positive.
    pub fn from_counts(counts: &[u64]) -> Result<Self, EmdError> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(EmdError::InvalidProbVector("zero total mass".into()));
        }
        let total = BigInt::from(total);
        Ok(ProbVector {
            weights: counts
                .iter()
                .map(|&c| BigRational::new(c.into(), total.clone()))
                .collect(),
        })
    }

    pub fn from_composition(c: &Composition) -> Result<Self, EmdError> {
        Self::from_counts(c.parts())
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Closed-form distances
// ---------------------------------------------------------------------------

/// Discrete EMD between two compositions of the same total. The shorter one
/// is padded with zeros on the right.
pub fn emd_discrete(mu: &Composition, nu: &Composition) -> Result<u64, EmdError> {
    if mu.sum() != nu.sum() {
        return Err(EmdError::MarginsDiffer { left: mu.sum(), right: nu.sum() });
    }
    let n = mu.len().max(nu.len());
    let (a, b) = (mu.padded(n), nu.padded(n));
    let mut prefix: i128 = 0;
    let mut total: u128 = 0;
    for (x, y) in a.iter().zip(&b) {
        prefix += *x as i128 - *y as i128;
        total += prefix.unsigned_abs();
    }
    Ok(total as u64)
}

/// EMD between two probability vectors on `{1, ..., n}`, exact.
pub fn emd_continuous(mu: &ProbVector, nu: &ProbVector) -> Result<BigRational, EmdError> {
    if mu.len() != nu.len() {
        return Err(EmdError::LengthMismatch { left: mu.len(), right: nu.len() });
    }
    let mut prefix = BigRational::zero();
    let mut total = BigRational::zero();
    for (x, y) in mu.weights.iter().zip(&nu.weights) {
        prefix += x - y;
        total += prefix.abs();
    }
    Ok(total)
}

/// `emd_continuous / (n - 1)`: distances in `[0, 1]`.
pub fn emd_continuous_unit(mu: &ProbVector, nu: &ProbVector) -> Result<BigRational, EmdError> {
    let d = emd_continuous(mu, nu)?;
    if mu.len() < 2 {
        return Err(EmdError::NormalizationUndefined { parts: mu.len(), sum: 1 });
    }
    Ok(d / BigRational::from_integer((mu.len() - 1).into()))
}

fn check_real_prob(v: &[f64]) -> Result<(), EmdError> {
    if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(EmdError::InvalidProbVector("negative or non-finite weight".into()));
    }
    let total: f64 = v.iter().sum();
    if (total - 1.0).abs() > REAL_MASS_TOLERANCE {
        return Err(EmdError::InvalidProbVector(format!("weights sum to {total}")));
    }
    Ok(())
}

/// Floating-point EMD for sampled probability vectors.
pub fn emd_continuous_real(mu: &[f64], nu: &[f64]) -> Result<f64, EmdError> {
    if mu.len() != nu.len() {
        return Err(EmdError::LengthMismatch { left: mu.len(), right: nu.len() });
    }
    check_real_prob(mu)?;
    check_real_prob(nu)?;
    Ok(prefix_abs_sum(mu, nu))
}

pub(crate) fn prefix_abs_sum(mu: &[f64], nu: &[f64]) -> f64 {
    let mut prefix = 0.0;
    let mut total = 0.0;
    for (x, y) in mu.iter().zip(nu) {
        prefix += x - y;
        total += f64::abs(prefix);
    }
    total
}

/// `emd_discrete / (s (n - 1))`, defined for equal part counts `n >= 2` and
/// `s >= 1`.
pub fn emd_unit_normalized(mu: &Composition, nu: &Composition) -> Result<BigRational, EmdError> {
    if mu.len() != nu.len() {
        return Err(EmdError::LengthMismatch { left: mu.len(), right: nu.len() });
    }
    let d = emd_discrete(mu, nu)?;
    let (n, s) = (mu.len(), mu.sum());
    if n < 2 || s == 0 {
        return Err(EmdError::NormalizationUndefined { parts: n, sum: s });
    }
    Ok(BigRational::new(d.into(), (BigInt::from(s) * BigInt::from(n - 1)).clone()))
}

// ---------------------------------------------------------------------------
// Cost and joint matrices
// ---------------------------------------------------------------------------

/// The `p x q` ground-cost matrix with entries `|i - j|`, computed on demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostMatrix {
    pub p: usize,
    pub q: usize,
}

impl CostMatrix {
    pub fn new(p: usize, q: usize) -> Self {
        CostMatrix { p, q }
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        i.abs_diff(j) as u64
    }
}

/// Non-negative integer `rows x cols` matrix, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JointMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl JointMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        JointMatrix { rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn new(rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self, EmdError> {
        if entries.len() != rows * cols {
            return Err(EmdError::InvalidMatrix(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(JointMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self, EmdError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(EmdError::InvalidMatrix("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    fn get_mut(&mut self, i: usize, j: usize) -> &mut u64 {
        &mut self.entries[i * self.cols + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.cols.max(1)).map(<[u64]>::to_vec).collect()
    }

    pub fn row_sums(&self) -> Composition {
        Composition::new((0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).sum()).collect())
    }

    pub fn col_sums(&self) -> Composition {
        Composition::new((0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j)).sum()).collect())
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().sum()
    }

    /// `<J, C>` for the `|i - j|` cost.
    pub fn cost(&self) -> u64 {
        let c = CostMatrix::new(self.rows, self.cols);
        self.support().map(|(i, j)| self.get(i, j) * c.entry(i, j)).sum()
    }

    /// Positive cells in lexicographic order.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows)
            .flat_map(move |i| (0..self.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| self.get(i, j) > 0)
    }

    /// First pair of support cells, in lexicographic scan order, that is
    /// incomparable in the product order. The first cell of the pair is the
    /// upper-right one.
    fn first_incomparable(&self) -> Option<((usize, usize), (usize, usize))> {
        let support: Vec<_> = self.support().collect();
        for (k, &a) in support.iter().enumerate() {
            for &b in &support[k + 1..] {
                if a.0 < b.0 && a.1 > b.1 {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Whether the support is totally ordered by `(i,j) <= (i',j')` iff
    /// `i <= i'` and `j <= j'`.
    pub fn is_chain(&self) -> bool {
        self.first_incomparable().is_none()
    }
}

impl fmt::Display for JointMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_rows() {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Chain repair and the word bijection
// ---------------------------------------------------------------------------

/// Rewrites `j` into a chain-supported matrix with the same margins and no
/// larger cost.
pub fn chain_repair(j: &JointMatrix) -> JointMatrix {
    chain_repair_counted(j).0
}

/// [`chain_repair`] that also reports how many exchange moves were applied.
///
/// Each move takes the first incomparable support pair `(i',j')`, `(i,j)`
/// with `i' < i`, `j < j'`, shifts `m = min(J[i'][j'], J[i][j])` onto the
/// comparable corners `(i',j)` and `(i,j')`. The quantity
/// `sum J_ij (i - j)^2` drops by `2m(i - i')(j' - j)` each time, so the loop
/// terminates.
pub fn chain_repair_counted(j: &JointMatrix) -> (JointMatrix, usize) {
    let mut out = j.clone();
    let mut moves = 0;
    while let Some((upper, lower)) = out.first_incomparable() {
        let m = out.get(upper.0, upper.1).min(out.get(lower.0, lower.1));
        *out.get_mut(upper.0, upper.1) -= m;
        *out.get_mut(lower.0, lower.1) -= m;
        *out.get_mut(upper.0, lower.1) += m;
        *out.get_mut(lower.0, upper.1) += m;
        moves += 1;
    }
    (out, moves)
}

/// Pairs the sorted words of `mu` (rows) and `nu` (columns) position by
/// position; `J_ij` counts the positions carrying `(i, j)`. This is the
/// monotone coupling, hence an optimal transport plan.
pub fn rsk_phi(mu: &Composition, nu: &Composition) -> Result<JointMatrix, EmdError> {
    if mu.sum() != nu.sum() {
        return Err(EmdError::MarginsDiffer { left: mu.sum(), right: nu.sum() });
    }
    let mut out = JointMatrix::zeros(mu.len(), nu.len());
    let (mut i, mut j) = (0, 0);
    let (mut left_i, mut left_j) = (
        mu.parts().first().copied().unwrap_or(0),
        nu.parts().first().copied().unwrap_or(0),
    );
    // walk both words in step without materializing them
    while i < mu.len() && j < nu.len() {
        if left_i == 0 {
            i += 1;
            left_i = mu.parts().get(i).copied().unwrap_or(0);
            continue;
        }
        if left_j == 0 {
            j += 1;
            left_j = nu.parts().get(j).copied().unwrap_or(0);
            continue;
        }
        let m = left_i.min(left_j);
        *out.get_mut(i, j) += m;
        left_i -= m;
        left_j -= m;
    }
    Ok(out)
}

/// Recovers `(row sums, column sums)` from a chain-supported matrix.
pub fn rsk_phi_inverse(j: &JointMatrix) -> Result<(Composition, Composition), EmdError> {
    if !j.is_chain() {
        return Err(EmdError::NotChain);
    }
    Ok((j.row_sums(), j.col_sums()))
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

/// Size limits for [`emd_oracle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCap {
    pub max_sum: u64,
    pub max_cells: usize,
}

impl Default for OracleCap {
    fn default() -> Self {
        OracleCap { max_sum: 6, max_cells: 16 }
    }
}

/// Calls `visit` on every non-negative integer matrix with row sums `mu` and
/// column sums `nu`. Rows are filled in order; each entry is bounded by the
/// remaining column capacity.
pub fn for_each_transport_plan(
    mu: &Composition,
    nu: &Composition,
    mut visit: impl FnMut(&JointMatrix),
) -> Result<(), EmdError> {
    if mu.sum() != nu.sum() {
        return Err(EmdError::MarginsDiffer { left: mu.sum(), right: nu.sum() });
    }
    let mut m = JointMatrix::zeros(mu.len(), nu.len());
    let mut cap = nu.parts().to_vec();
    fill(mu.parts(), 0, 0, mu.parts().first().copied().unwrap_or(0), &mut cap, &mut m, &mut visit);
    Ok(())
}

fn fill(
    rows: &[u64],
    i: usize,
    j: usize,
    row_left: u64,
    cap: &mut [u64],
    m: &mut JointMatrix,
    visit: &mut impl FnMut(&JointMatrix),
) {
    if i == rows.len() {
        visit(m);
        return;
    }
    let cols = cap.len();
    if j == cols {
        if row_left == 0 {
            let next = rows.get(i + 1).copied().unwrap_or(0);
            fill(rows, i + 1, 0, next, cap, m, visit);
        }
        return;
    }
    if row_left > cap[j..].iter().sum::<u64>() {
        return;
    }
    let hi = row_left.min(cap[j]);
    for x in 0..=hi {
        *m.get_mut(i, j) = x;
        cap[j] -= x;
        fill(rows, i, j + 1, row_left - x, cap, m, visit);
        cap[j] += x;
    }
    *m.get_mut(i, j) = 0;
}

/// Minimum of `<J, C>` over every transport plan, by exhaustive enumeration.
pub fn emd_oracle(mu: &Composition, nu: &Composition, cap: OracleCap) -> Result<u64, EmdError> {
    if mu.sum() != nu.sum() {
        return Err(EmdError::MarginsDiffer { left: mu.sum(), right: nu.sum() });
    }
    let cells = mu.len() * nu.len();
    if mu.sum() > cap.max_sum || cells > cap.max_cells {
        return Err(EmdError::OracleCapExceeded { sum: mu.sum(), cells });
    }
    let mut best = u64::MAX;
    for_each_transport_plan(mu, nu, |j| best = best.min(j.cost()))?;
    Ok(if best == u64::MAX { 0 } else { best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ratio;

    fn c(parts: &[u64]) -> Composition {
        Composition::new(parts.to_vec())
    }

    #[test]
    fn grade_examples() {
        let x = c(&[0, 19, 8, 2, 1]);
        let y = c(&[12, 2, 5, 11, 0]);
        let z = c(&[2, 20, 2, 3, 3]);
        assert_eq!(emd_discrete(&x, &y), Ok(26));
        assert_eq!(emd_discrete(&x, &z), Ok(10));
        assert_eq!(emd_discrete(&y, &z), Ok(26));
        assert_eq!(emd_discrete(&x, &x), Ok(0));
    }

    #[test]
    fn mismatched_margins() {
        assert_eq!(
            emd_discrete(&c(&[1, 0]), &c(&[1, 1])),
            Err(EmdError::MarginsDiffer { left: 1, right: 2 })
        );
        assert!(emd_oracle(&c(&[1]), &c(&[2]), OracleCap::default()).is_err());
        assert!(rsk_phi(&c(&[1]), &c(&[2])).is_err());
    }

    #[test]
    fn zero_padding_for_unequal_lengths() {
        assert_eq!(emd_discrete(&c(&[2]), &c(&[0, 0, 2])), Ok(4));
        assert_eq!(emd_discrete(&c(&[1, 1]), &c(&[1, 0, 1])), Ok(1));
    }

    #[test]
    fn continuous_examples() {
        let a = ProbVector::from_counts(&[1, 0]).unwrap();
        let b = ProbVector::from_counts(&[0, 1]).unwrap();
        let half = ProbVector::from_counts(&[1, 1]).unwrap();
        assert_eq!(emd_continuous(&a, &b).unwrap(), ratio(1, 1));
        assert_eq!(emd_continuous(&half, &b).unwrap(), ratio(1, 2));
        assert!(emd_continuous(&half, &half).unwrap().is_zero());
        let three = ProbVector::from_counts(&[1, 1, 1]).unwrap();
        assert_eq!(
            emd_continuous(&a, &three),
            Err(EmdError::LengthMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn real_inputs_are_validated() {
        assert_eq!(emd_continuous_real(&[0.5, 0.5], &[0.0, 1.0]), Ok(0.5));
        assert!(emd_continuous_real(&[0.5, 0.6], &[0.0, 1.0]).is_err());
        assert!(emd_continuous_real(&[1.5, -0.5], &[0.0, 1.0]).is_err());
        assert!(emd_continuous_real(&[1.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn prob_vector_validation() {
        assert!(ProbVector::new(vec![ratio(1, 2), ratio(1, 3)]).is_err());
        assert!(ProbVector::new(vec![ratio(3, 2), ratio(-1, 2)]).is_err());
        assert!(ProbVector::new(vec![]).is_err());
        assert!(ProbVector::from_counts(&[0, 0]).is_err());
        assert!(ProbVector::new(vec![ratio(1, 2), ratio(1, 2)]).is_ok());
    }

    #[test]
    fn unit_normalized_examples() {
        let x = c(&[0, 19, 8, 2, 1]);
        let y = c(&[12, 2, 5, 11, 0]);
        assert_eq!(emd_unit_normalized(&x, &y).unwrap(), ratio(26, 120));
        let all_a = c(&[30, 0, 0, 0, 0]);
        let all_f = c(&[0, 0, 0, 0, 30]);
        assert_eq!(emd_unit_normalized(&all_a, &all_f).unwrap(), ratio(1, 1));
        assert!(emd_unit_normalized(&x, &x).unwrap().is_zero());
        assert!(matches!(
            emd_unit_normalized(&c(&[3]), &c(&[3])),
            Err(EmdError::NormalizationUndefined { .. })
        ));
        assert!(matches!(
            emd_unit_normalized(&c(&[0, 0]), &c(&[0, 0])),
            Err(EmdError::NormalizationUndefined { .. })
        ));
    }

    #[test]
    fn oracle_examples() {
        let cap = OracleCap::default();
        assert_eq!(emd_oracle(&c(&[1, 0]), &c(&[0, 1]), cap), Ok(1));
        assert_eq!(emd_oracle(&c(&[2, 0, 0]), &c(&[0, 0, 2]), cap), Ok(4));
        for mu in Composition::all(3, 3) {
            for nu in Composition::all(3, 3) {
                assert_eq!(emd_oracle(&mu, &nu, cap), emd_discrete(&mu, &nu));
            }
        }
    }

    #[test]
    fn oracle_cap() {
        let big = c(&[7, 0]);
        assert_eq!(
            emd_oracle(&big, &big, OracleCap::default()),
            Err(EmdError::OracleCapExceeded { sum: 7, cells: 4 })
        );
        let wide = c(&[1, 0, 0, 0, 0]);
        assert!(emd_oracle(&wide, &wide, OracleCap::default()).is_err());
        let loose = OracleCap { max_sum: 7, max_cells: 25 };
        assert_eq!(emd_oracle(&big, &big, loose), Ok(0));
        assert_eq!(emd_oracle(&wide, &wide, loose), Ok(0));
    }

    #[test]
    fn transport_plans_have_the_right_margins() {
        let (mu, nu) = (c(&[2, 1]), c(&[1, 1, 1]));
        let mut count = 0;
        for_each_transport_plan(&mu, &nu, |j| {
            assert_eq!(j.row_sums(), mu);
            assert_eq!(j.col_sums(), nu);
            count += 1;
        })
        .unwrap();
        // first row takes two of the three unit columns
        assert_eq!(count, 3);
    }

    #[test]
    fn chain_repair_examples() {
        let j = JointMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(j.cost(), 2);
        let (r, moves) = chain_repair_counted(&j);
        assert_eq!(r, JointMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap());
        assert_eq!(r.cost(), 0);
        assert_eq!(moves, 1);

        let chain = JointMatrix::from_rows(&[vec![2, 1, 0], vec![0, 3, 0], vec![0, 0, 1]]).unwrap();
        assert!(chain.is_chain());
        assert_eq!(chain_repair(&chain), chain);
    }

    #[test]
    fn word_example() {
        assert_eq!(c(&[3, 0, 2, 1, 0]).word(), vec![1, 1, 1, 3, 3, 4]);
        assert!(c(&[0, 0]).word().is_empty());
    }

    #[test]
    fn phi_reproduces_grade_conversion_matrix() {
        let x = c(&[0, 19, 8, 2, 1]);
        let y = c(&[12, 2, 5, 11, 0]);
        let j = rsk_phi(&x, &y).unwrap();
        let expect = JointMatrix::from_rows(&[
            vec![0, 0, 0, 0, 0],
            vec![12, 2, 5, 0, 0],
            vec![0, 0, 0, 8, 0],
            vec![0, 0, 0, 2, 0],
            vec![0, 0, 0, 1, 0],
        ])
        .unwrap();
        assert_eq!(j, expect);
        assert_eq!(j.cost(), 26);
        assert_eq!(rsk_phi_inverse(&expect).unwrap(), (x, y));
    }

    #[test]
    fn phi_of_equal_pair_is_diagonal() {
        let mu = c(&[2, 0, 3, 1]);
        let j = rsk_phi(&mu, &mu).unwrap();
        for i in 0..4 {
            for k in 0..4 {
                assert_eq!(j.get(i, k), if i == k { mu.parts()[i] } else { 0 });
            }
        }
    }

    #[test]
    fn phi_inverse_examples() {
        let d = JointMatrix::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(rsk_phi_inverse(&d).unwrap(), (c(&[2, 1]), c(&[2, 1])));
        let anti = JointMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(rsk_phi_inverse(&anti), Err(EmdError::NotChain));
    }

    #[test]
    fn composition_enumeration() {
        assert_eq!(Composition::all(2, 3).len(), 6);
        assert_eq!(Composition::all(0, 3), vec![c(&[0, 0, 0])]);
        assert_eq!(Composition::all(0, 0), vec![c(&[])]);
        assert!(Composition::all(1, 0).is_empty());
        assert_eq!(Composition::all(3, 1), vec![c(&[3])]);
        assert_eq!(Composition::all(30, 5).len(), 46376);
        assert_eq!(Composition::count(30, 5), BigUint::from(46376u32));
    }

    #[test]
    fn composition_parsing() {
        assert_eq!("0,19,8,2,1".parse::<Composition>().unwrap(), c(&[0, 19, 8, 2, 1]));
        assert_eq!("(1, 2)".parse::<Composition>().unwrap(), c(&[1, 2]));
        assert!("1,-1".parse::<Composition>().is_err());
        assert!("".parse::<Composition>().is_err());
        assert_eq!(c(&[1, 2]).to_string(), "(1,2)");
    }
}
