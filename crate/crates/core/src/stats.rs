//! Goodness-of-fit helpers for comparing sampled outcomes with exact laws.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Minimum expected count per bin before pooling.
pub const MIN_EXPECTED: f64 = 5.0;

/// Half the L1 distance between two distributions on the same support.
pub fn tv_distance(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "support mismatch");
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Normalizes a histogram.
pub fn empirical(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return vec![0.0; counts.len()];
    }
    counts.iter().map(|&k| k as f64 / total as f64).collect()
}

/// Standard error of a binomial proportion.
pub fn binomial_std_error(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub critical: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub rejected: bool,
}

/// Pearson χ² test of `observed` against `probs`.
///
/// Adjacent bins are pooled until each pool expects at least
/// [`MIN_EXPECTED`] counts; a trailing underfull pool joins the last full
/// one. An observation in a zero-probability bin rejects outright.
pub fn chi_square_test(observed: &[u64], probs: &[f64], alpha: f64) -> Result<ChiSquareTest> {
    if observed.len() != probs.len() {
        return Err(Error::DimMismatch {
            expected: probs.len(),
            actual: observed.len(),
        });
    }
    let n: u64 = observed.iter().sum();
    let impossible = observed.iter().zip(probs).any(|(&o, &p)| o > 0 && p <= 0.0);

    let mut pools: Vec<(f64, f64)> = Vec::new();
    let (mut exp, mut obs) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probs) {
        exp += p * n as f64;
        obs += o as f64;
        if exp >= MIN_EXPECTED {
            pools.push((obs, exp));
            exp = 0.0;
            obs = 0.0;
        }
    }
    match pools.last_mut() {
        Some(last) => {
            last.0 += obs;
            last.1 += exp;
        }
        None => pools.push((obs, exp)),
    }

    let dof = pools.len().saturating_sub(1);
    let statistic = if impossible {
        f64::INFINITY
    } else {
        pools.iter().map(|(o, e)| (o - e) * (o - e) / e).sum()
    };
    if dof == 0 {
        // a single pool carries no information
        return Ok(ChiSquareTest {
            statistic: if impossible { f64::INFINITY } else { 0.0 },
            dof,
            critical: f64::INFINITY,
            p_value: if impossible { 0.0 } else { 1.0 },
            alpha,
            rejected: impossible,
        });
    }
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let critical = dist.inverse_cdf(1.0 - alpha);
    Ok(ChiSquareTest {
        statistic,
        dof,
        critical,
        p_value: if statistic.is_finite() {
            1.0 - dist.cdf(statistic)
        } else {
            0.0
        },
        alpha,
        rejected: statistic > critical,
    })
}
