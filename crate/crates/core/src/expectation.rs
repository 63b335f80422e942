//! Limiting expected EMD on the probability simplex.
//!
//! `M_{p,q}` is computed two ways: by its three-term recursion and from
//! `N_{p,q}(1)` with factorial weights. Monte Carlo over uniform simplex
//! samples gives an independent statistical check.

use num::{BigInt, BigRational, One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use thiserror::Error;

use crate::emd::prefix_abs_sum;
use crate::genfun::n_poly;
use crate::numerics::factorial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpectationError {
    #[error("n must be at least {min} (got {n})")]
    DimensionTooSmall { n: usize, min: usize },
    #[error("at least one trial is required")]
    NoTrials,
    #[error("batch size must be positive")]
    EmptyBatch,
}

/// One entry of the `M_{p,q}` table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MValue {
    pub p: usize,
    pub q: usize,
    pub value: BigRational,
}

/// `M_{i,j}` for `0 <= i <= p`, `0 <= j <= q` (row and column zero are 0).
pub fn m_grid(p: usize, q: usize) -> Vec<Vec<BigRational>> {
    let mut m = vec![vec![BigRational::zero(); q + 1]; p + 1];
    for i in 1..=p {
        for j in 1..=q {
            let num = BigRational::from_integer((i - 1).into()) * &m[i - 1][j]
                + BigRational::from_integer((j - 1).into()) * &m[i][j - 1]
                + BigRational::from_integer(i.abs_diff(j).into());
            m[i][j] = num / BigRational::from_integer((i + j - 1).into());
        }
    }
    m
}

/// `M_{p,q} = ((p-1) M_{p-1,q} + (q-1) M_{p,q-1} + |p-q|) / (p+q-1)`, zero
/// when either index is zero.
pub fn m_value(p: usize, q: usize) -> BigRational {
    m_grid(p, q)[p][q].clone()
}

/// Every `M_{p,q}` with `1 <= p <= pmax`, `1 <= q <= qmax`, row-major.
pub fn m_table(pmax: usize, qmax: usize) -> Vec<MValue> {
    let grid = m_grid(pmax, qmax);
    (1..=pmax)
        .flat_map(|p| (1..=qmax).map(move |q| (p, q)))
        .map(|(p, q)| MValue { p, q, value: grid[p][q].clone() })
        .collect()
}

/// `M_{p,q} = (p-1)! (q-1)! / (p+q-1)! * N_{p,q}(1)`.
pub fn m_value_via_n(p: usize, q: usize) -> BigRational {
    if p == 0 || q == 0 {
        return BigRational::zero();
    }
    let weight = BigRational::new(
        BigInt::from(factorial(p as u64 - 1) * factorial(q as u64 - 1)),
        BigInt::from(factorial((p + q) as u64 - 1)),
    );
    weight * n_poly(p, q).eval(&BigRational::one())
}

/// Expected unit-normalized EMD, `M_{n,n} / (n-1)`.
pub fn m_tilde(n: usize) -> Result<BigRational, ExpectationError> {
    if n < 2 {
        return Err(ExpectationError::DimensionTooSmall { n, min: 2 });
    }
    Ok(m_value(n, n) / BigRational::from_integer((n - 1).into()))
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// A point of the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexSample {
    pub point: Vec<f64>,
}

/// Uniform sampler on the simplex: `n` independent standard exponentials
/// divided by their sum.
///
/// The stream is ChaCha8 seeded with `seed_from_u64(seed)` on stream
/// `stream`, so `(seed, stream)` fixes every draw.
#[derive(Debug, Clone)]
pub struct SimplexSampler {
    n: usize,
    rng: ChaCha8Rng,
}

impl SimplexSampler {
    pub fn new(n: usize, seed: u64) -> Result<Self, ExpectationError> {
        Self::with_stream(n, seed, 0)
    }

    pub fn with_stream(n: usize, seed: u64, stream: u64) -> Result<Self, ExpectationError> {
        if n == 0 {
            return Err(ExpectationError::DimensionTooSmall { n, min: 1 });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Ok(SimplexSampler { n, rng })
    }

    /// Overwrites `buf` (length `n`) with a fresh sample.
    pub fn fill(&mut self, buf: &mut [f64]) {
        debug_assert_eq!(buf.len(), self.n);
        let mut total = 0.0;
        for x in buf.iter_mut() {
            *x = Exp1.sample(&mut self.rng);
            total += *x;
        }
        for x in buf.iter_mut() {
            *x /= total;
        }
    }

    pub fn sample(&mut self) -> SimplexSample {
        let mut point = vec![0.0; self.n];
        self.fill(&mut point);
        SimplexSample { point }
    }
}

/// First draw of [`SimplexSampler::new`].
pub fn sample_uniform_simplex(n: usize, seed: u64) -> Result<SimplexSample, ExpectationError> {
    Ok(SimplexSampler::new(n, seed)?.sample())
}

/// Monte Carlo estimate of the expected EMD between independent uniform
/// points of the simplex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    /// Standard error of the mean; NaN when `trials == 1`.
    pub std_error: f64,
    pub trials: u64,
}

pub const DEFAULT_BATCH: u64 = 1 << 16;

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2
            + other.m2
            + delta * delta * self.count as f64 * other.count as f64 / count as f64;
        Moments { count, mean, m2 }
    }
}

/// [`monte_carlo_mean_emd_batched`] with [`DEFAULT_BATCH`].
pub fn monte_carlo_mean_emd(n: usize, trials: u64, seed: u64) -> Result<McEstimate, ExpectationError> {
    monte_carlo_mean_emd_batched(n, trials, seed, DEFAULT_BATCH)
}

/// Batch `b` draws its pairs from stream `b` of `seed`; batches run in
/// parallel and are merged in index order, so `(seed, trials, batch)`
/// determines the result.
pub fn monte_carlo_mean_emd_batched(
    n: usize,
    trials: u64,
    seed: u64,
    batch: u64,
) -> Result<McEstimate, ExpectationError> {
    if n < 2 {
        return Err(ExpectationError::DimensionTooSmall { n, min: 2 });
    }
    if trials == 0 {
        return Err(ExpectationError::NoTrials);
    }
    if batch == 0 {
        return Err(ExpectationError::EmptyBatch);
    }
    let batches = trials.div_ceil(batch);
    let per_batch: Vec<Moments> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let len = batch.min(trials - b * batch);
            let mut sampler = SimplexSampler::with_stream(n, seed, b).expect("n >= 2");
            let (mut mu, mut nu) = (vec![0.0; n], vec![0.0; n]);
            let mut m = Moments::default();
            for _ in 0..len {
                sampler.fill(&mut mu);
                sampler.fill(&mut nu);
                m.push(prefix_abs_sum(&mu, &nu));
            }
            m
        })
        .collect();
    let total = per_batch.into_iter().fold(Moments::default(), Moments::merge);
    let std_error = if total.count > 1 {
        (total.m2 / (total.count - 1) as f64 / total.count as f64).sqrt()
    } else {
        f64::NAN
    };
    Ok(McEstimate { estimate: total.mean, std_error, trials })
}
