//! Statistical summaries of observed reconstruction errors.
//!
//! A Gaussian kernel density estimate and a right-closed empirical CDF,
//! exactly as used to summarize the channel simulations. The ECDF counts
//! `value ≤ ρ` (Heaviside with `H(0) = 1`) so "error within ρ" matches the
//! non-strict reconstruction criterion.

use alloc::vec::Vec;

use crate::adversary::AttackSpec;
use crate::error::{Error, Result};
use crate::graph::GraphModel;

const SQRT_TAU: f64 = 2.506_628_274_631_000_7;

/// Default evaluation grid: `[0, 0.2]` with 512 points covers every error
/// mode the simulations produce.
pub const DEFAULT_GRID_END: f64 = 0.2;
pub const DEFAULT_GRID_POINTS: usize = 512;

/// `points` evenly spaced values from `start` to `end` inclusive.
pub fn linear_grid(start: f64, end: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return alloc::vec![start];
    }
    let step = (end - start) / (points - 1) as f64;
    (0..points).map(|i| start + step * i as f64).collect()
}

/// Where a batch of error observations came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleMeta {
    pub k_copies: usize,
    pub nu: f64,
    pub attack: AttackSpec,
    pub graph_model: GraphModel,
    pub num_vertices: usize,
}

/// Normalized ℓ₁ reconstruction errors from `M` simulated transmissions.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSample {
    values: Vec<f64>,
    meta: SampleMeta,
}

impl ErrorSample {
    /// Every value must lie in `[0, 1]`.
    pub fn new(values: Vec<f64>, meta: SampleMeta) -> Result<Self> {
        for &v in &values {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::OutOfRange {
                    name: "error value",
                    value: v,
                    range: "[0, 1]",
                });
            }
        }
        Ok(ErrorSample { values, meta })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn meta(&self) -> &SampleMeta {
        &self.meta
    }

    /// `M`, the number of observations.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn kde(&self, bandwidth: f64, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
        kde(&self.values, bandwidth, grid)
    }

    pub fn ecdf(&self, rho: f64) -> Result<f64> {
        ecdf(&self.values, rho)
    }

    pub fn quantile(&self, q: f64) -> Result<f64> {
        quantile(&self.values, q)
    }

    pub fn mean(&self) -> Result<f64> {
        if self.values.is_empty() {
            return Err(Error::EmptySample);
        }
        Ok(self.values.iter().sum::<f64>() / self.values.len() as f64)
    }
}

/// Gaussian KDE
/// `f̂(ρ) = (1 / (√(2π)·h·M)) Σ_m exp(−(v_m − ρ)² / (2h²))`
/// evaluated at each grid point.
pub fn kde(values: &[f64], bandwidth: f64, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if bandwidth <= 0.0 {
        return Err(Error::OutOfRange {
            name: "bandwidth",
            value: bandwidth,
            range: "(0, inf)",
        });
    }
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let scale = 1.0 / (SQRT_TAU * bandwidth * values.len() as f64);
    let inv_2h2 = 1.0 / (2.0 * bandwidth * bandwidth);
    Ok(grid
        .iter()
        .map(|&rho| {
            let mut density = 0.0;
            for &v in values {
                let d = v - rho;
                density += libm::exp(-d * d * inv_2h2);
            }
            (rho, density * scale)
        })
        .collect())
}

/// Right-closed ECDF: fraction of values `≤ ρ`.
pub fn ecdf(values: &[f64], rho: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let count = values.iter().filter(|&&v| v <= rho).count();
    Ok(count as f64 / values.len() as f64)
}

/// Smallest observed value whose ECDF reaches `q ∈ (0, 1]` — the
/// order-statistic inverse of the right-closed ECDF.
pub fn quantile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    if !(0.0 < q && q <= 1.0) {
        return Err(Error::OutOfRange {
            name: "q",
            value: q,
            range: "(0, 1]",
        });
    }
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let m = sorted.len() as f64;
    let index = (libm::ceil(q * m) as usize).max(1) - 1;
    Ok(sorted[index.min(sorted.len() - 1)])
}
