//! Decoding success probabilities, estimators, and copy-count selection.
//!
//! With both perturbations active, each transmitted bit differs from its
//! source with probability `μ = β(1−ν) + (1−β)ν`. A block decodes correctly
//! when fewer than half of its `K` copies flipped, so the per-block success
//! probability is the binomial tail `p_K = Σ_{j≤K/2−1} C(K,j) μ^j (1−μ)^{K−j}`.
//! The receiver cannot see `μ`, so `p_K` and `μ` are estimated from the
//! received copies alone by splitting each block's sample into two
//! independent half-means and plugging those into the tail formula ([`p_hat`],
//! [`mu_hat`]). A bounded-differences constant [`delta_k`] caps how far one
//! flipped bit moves the estimator within a fixed majority partition, which
//! yields a closed-form copy count [`k_bound`]; [`k_line_search`] then finds
//! the smallest copy count whose predicted tail reaches the reconstruction
//! target.

use alloc::vec::Vec;

use crate::bits::BitVec;
use crate::codec::{self, Transmission};
use crate::error::{Error, Result};
use crate::graph::EdgeVector;

const SQRT_TAU: f64 = 2.506_628_274_631_000_7;

/// Majority outcome of a block: `Zero` when the copy mean is ≤ 0.5.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockClass {
    Zero,
    One,
}

/// Everything the receiver learns from one transmission.
///
/// Per block `n`: the decoded bit, the copy mean `R_{n,K}`, the two
/// half-sample means with `R_{n,K} = (R_{n,K₁} + R_{n,K₂})/2` holding
/// exactly, and the majority class. Plus the two whole-transmission
/// estimators `p̂_K` (not clamped to [0, 1]) and `μ̂ ∈ [0, 0.5]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeReport {
    s_hat: BitVec,
    block_means: Vec<f64>,
    first_half_means: Vec<f64>,
    second_half_means: Vec<f64>,
    p_hat: f64,
    mu_hat: f64,
    num_copies: usize,
}

impl DecodeReport {
    /// Assemble the report from per-block one-counts of the two half samples.
    ///
    /// The majority decision compares integer counts (`2·ones > K`), exactly
    /// the real-arithmetic rule; floating block means are derived afterwards.
    pub(crate) fn from_half_counts(num_copies: usize, first: &[u32], second: &[u32]) -> Self {
        debug_assert_eq!(first.len(), second.len());
        debug_assert!(num_copies >= 2 && num_copies.is_multiple_of(2));
        let n = first.len();
        let half = (num_copies / 2) as f64;
        let binomials = binomial_row(num_copies);

        let mut s_hat = BitVec::zeros(n);
        let mut block_means = Vec::with_capacity(n);
        let mut first_half_means = Vec::with_capacity(n);
        let mut second_half_means = Vec::with_capacity(n);
        let mut p_sum = KahanSum::default();
        let mut mu_sum = KahanSum::default();

        for block in 0..n {
            let c1 = first[block];
            let c2 = second[block];
            let ones = c1 + c2;
            let majority_one = 2 * ones as usize > num_copies;
            if majority_one {
                s_hat.set(block, true);
            }
            let r1 = c1 as f64 / half;
            let r2 = c2 as f64 / half;
            let mean = (r1 + r2) / 2.0;
            let (a, b, mu_term) = if majority_one {
                (1.0 - r1, r2, 1.0 - mean)
            } else {
                (r1, 1.0 - r2, mean)
            };
            p_sum.add(weighted_tail(a, b, num_copies, &binomials));
            mu_sum.add(mu_term);
            block_means.push(mean);
            first_half_means.push(r1);
            second_half_means.push(r2);
        }

        DecodeReport {
            s_hat,
            block_means,
            first_half_means,
            second_half_means,
            p_hat: p_sum.value() / n as f64,
            mu_hat: mu_sum.value() / n as f64,
            num_copies,
        }
    }

    /// Decoded bit sequence, one bit per block.
    pub fn s_hat(&self) -> &BitVec {
        &self.s_hat
    }

    pub fn num_blocks(&self) -> usize {
        self.block_means.len()
    }

    pub fn num_copies(&self) -> usize {
        self.num_copies
    }

    /// `R_{n,K}`, the mean of block `n` across all copies.
    pub fn block_mean(&self, block: usize) -> f64 {
        self.block_means[block]
    }

    /// `(R_{n,K₁}, R_{n,K₂})`, the two half-sample means of block `n`.
    pub fn half_means(&self, block: usize) -> (f64, f64) {
        (self.first_half_means[block], self.second_half_means[block])
    }

    pub fn block_class(&self, block: usize) -> BlockClass {
        if self.s_hat.get(block) {
            BlockClass::One
        } else {
            BlockClass::Zero
        }
    }

    /// Sizes of the majority-zero and majority-one block sets.
    pub fn class_counts(&self) -> (usize, usize) {
        let ones = self.s_hat.count_ones();
        (self.num_blocks() - ones, ones)
    }

    /// Split-sample estimator `p̂_K`; may leave [0, 1].
    pub fn p_hat(&self) -> f64 {
        self.p_hat
    }

    /// Flip-probability estimator `μ̂ ∈ [0, 0.5]`.
    pub fn mu_hat(&self) -> f64 {
        self.mu_hat
    }

    /// Decoded bits as an edge vector, when the block count is a pair count.
    pub fn decoded_edge_vector(&self, num_vertices: usize) -> Result<EdgeVector> {
        EdgeVector::from_bits(num_vertices, self.s_hat.clone())
    }

    /// Normalized ℓ₁ distance between the decoded bits and `original`.
    pub fn error_against(&self, original: &EdgeVector) -> Result<f64> {
        codec::hamming_error_bits(&self.s_hat, original.bits())
    }
}

/// Effective flip probability `μ = β(1−ν) + (1−β)ν` of the combined
/// sender/attacker perturbation; always in `[ν, 0.5)`.
pub fn mu_effective(beta: f64, nu: f64) -> Result<f64> {
    check_half_open(beta, "beta")?;
    check_half_open(nu, "nu")?;
    Ok(beta * (1.0 - nu) + (1.0 - beta) * nu)
}

/// Per-block majority success probability
/// `p_K = Σ_{j=0}^{K/2−1} C(K,j) μ^j (1−μ)^{K−j}`.
///
/// Exact integer binomials up to `K = 64`; log-space terms with compensated
/// summation beyond, where `C(K,j)` overflows.
pub fn p_success(mu: f64, k_copies: usize) -> Result<f64> {
    check_half_open(mu, "mu")?;
    if k_copies < 2 || !k_copies.is_multiple_of(2) {
        return Err(Error::InvalidCopyCount { k_copies });
    }
    let row = binomial_row(k_copies);
    Ok(weighted_tail(mu, 1.0 - mu, k_copies, &row))
}

/// `p̂_K` of a transmission (decodes it; see [`DecodeReport::p_hat`]).
pub fn p_hat(r: &Transmission) -> f64 {
    codec::decode(r).p_hat()
}

/// `μ̂` of a transmission (decodes it; see [`DecodeReport::mu_hat`]).
pub fn mu_hat(r: &Transmission) -> f64 {
    codec::decode(r).mu_hat()
}

/// Bounded-difference constant `Δ_K = 8e²/(N·K·(K+2))`: how much one
/// flipped bit can move `p̂_K`.
pub fn delta_k(num_blocks: usize, k_copies: usize) -> Result<f64> {
    if num_blocks == 0 {
        return Err(Error::EmptySample);
    }
    if k_copies < 2 || !k_copies.is_multiple_of(2) {
        return Err(Error::InvalidCopyCount { k_copies });
    }
    let e2 = core::f64::consts::E * core::f64::consts::E;
    Ok(8.0 * e2 / (num_blocks as f64 * k_copies as f64 * (k_copies as f64 + 2.0)))
}

/// Reconstruction targets: error threshold `ρ`, estimator tolerance
/// `ε_tol < ρ`, and failure probability `η`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobustnessParams {
    rho: f64,
    eps_tol: f64,
    eta: f64,
}

impl RobustnessParams {
    pub fn new(rho: f64, eps_tol: f64, eta: f64) -> Result<Self> {
        if !(0.0 < rho && rho < 1.0) {
            return Err(Error::OutOfRange {
                name: "rho",
                value: rho,
                range: "(0, 1)",
            });
        }
        if !(0.0 < eps_tol && eps_tol < rho) {
            return Err(Error::OutOfRange {
                name: "eps_tol",
                value: eps_tol,
                range: "(0, rho)",
            });
        }
        if !(0.0 < eta && eta < 1.0) {
            return Err(Error::OutOfRange {
                name: "eta",
                value: eta,
                range: "(0, 1)",
            });
        }
        Ok(RobustnessParams { rho, eps_tol, eta })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn eps_tol(&self) -> f64 {
        self.eps_tol
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// The tail value condition (ii) demands: `1 + ε_tol − ρ`.
    pub fn tail_target(&self) -> f64 {
        1.0 + self.eps_tol - self.rho
    }
}

/// Smallest even `K` with `K² + 2K ≥ (32e⁴ / (ε_tol²·N)) · ln(2/η)`, the
/// concentration bound guaranteeing `|p̂_K − p_K| < ε_tol` w.p. `≥ 1 − η`.
pub fn k_bound(params: &RobustnessParams, num_blocks: usize) -> Result<usize> {
    if num_blocks == 0 {
        return Err(Error::EmptySample);
    }
    let e4 = libm::pow(core::f64::consts::E, 4.0);
    let rhs = 32.0 * e4 * libm::log(2.0 / params.eta())
        / (params.eps_tol() * params.eps_tol() * num_blocks as f64);
    let satisfies = |k: usize| {
        let kf = k as f64;
        kf * kf + 2.0 * kf >= rhs
    };
    // Closed-form start, then fix up to the minimal even solution.
    let root = libm::sqrt(1.0 + rhs) - 1.0;
    let mut k = (libm::ceil(root) as usize).max(2);
    if k % 2 == 1 {
        k += 1;
    }
    while !satisfies(k) {
        k += 2;
    }
    while k > 2 && satisfies(k - 2) {
        k -= 2;
    }
    Ok(k)
}

/// Cap for the copy-count line search; `μ̂` close to 0.5 can push the
/// required count past any practical value.
pub const LINE_SEARCH_LIMIT: usize = 1 << 20;

/// Smallest even `K̃` with `p_success(μ̂, K̃) ≥ 1 + ε_tol − ρ`.
///
/// Doubles the copy count until the target is met, bisects on even values,
/// then fixes up locally so the returned count is minimal.
pub fn k_line_search(mu_est: f64, params: &RobustnessParams) -> Result<usize> {
    if !(0.0..0.5).contains(&mu_est) {
        return Err(Error::UnreliableChannel { mu_hat: mu_est });
    }
    let target = params.tail_target();
    let reaches = |k: usize| -> Result<bool> { Ok(p_success(mu_est, k)? >= target) };

    if reaches(2)? {
        return Ok(2);
    }
    let mut lo = 2usize; // fails
    let mut hi = 4usize;
    while !reaches(hi)? {
        lo = hi;
        hi *= 2;
        if hi > LINE_SEARCH_LIMIT {
            return Err(Error::SearchExhausted {
                limit: LINE_SEARCH_LIMIT,
            });
        }
    }
    while hi - lo > 2 {
        let mid = (lo + hi) / 2;
        let mid = if mid % 2 == 1 { mid + 1 } else { mid };
        if mid >= hi {
            break;
        }
        if reaches(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // The tail is monotone in K for μ < 0.5 on even steps; the fix-up
    // guards the boundary arithmetic rather than the search logic.
    while hi > 2 && reaches(hi - 2)? {
        hi -= 2;
    }
    while !reaches(hi)? {
        hi += 2;
    }
    Ok(hi)
}

/// How [`select_k`] arrived at its recommendation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KSelection {
    /// Recommended copy count.
    pub k: usize,
    /// The concentration-bound count it started from.
    pub bound_k: usize,
    /// Whether the line search had to raise the count.
    pub escalated: bool,
}

/// Full selection workflow: start from the concentration bound, test the
/// tail condition with the estimated `μ̂`, escalate via line search if the
/// condition fails.
pub fn select_k(params: &RobustnessParams, num_blocks: usize, mu_est: f64) -> Result<KSelection> {
    let bound_k = k_bound(params, num_blocks)?;
    if !(0.0..0.5).contains(&mu_est) {
        return Err(Error::UnreliableChannel { mu_hat: mu_est });
    }
    if p_success(mu_est, bound_k)? >= params.tail_target() {
        return Ok(KSelection {
            k: bound_k,
            bound_k,
            escalated: false,
        });
    }
    let searched = k_line_search(mu_est, params)?;
    Ok(KSelection {
        k: searched.max(bound_k),
        bound_k,
        escalated: true,
    })
}

/// Randomized-smoothing certification radius
/// `(σ/2)(Φ⁻¹(p*) − Φ⁻¹(p̃))`.
pub fn rs_radius(p_star: f64, p_tilde: f64, sigma: f64) -> Result<f64> {
    for (name, value) in [("p_star", p_star), ("p_tilde", p_tilde)] {
        if !(0.0 < value && value < 1.0) {
            return Err(Error::OutOfRange {
                name,
                value,
                range: "(0, 1)",
            });
        }
    }
    if p_star < p_tilde {
        return Err(Error::OutOfRange {
            name: "p_tilde",
            value: p_tilde,
            range: "[0, p_star]",
        });
    }
    if sigma <= 0.0 {
        return Err(Error::OutOfRange {
            name: "sigma",
            value: sigma,
            range: "(0, inf)",
        });
    }
    Ok(sigma / 2.0 * (normal_quantile(p_star)? - normal_quantile(p_tilde)?))
}

/// Standard normal quantile `Φ⁻¹(p)` for `p ∈ (0, 1)`.
///
/// Rational initial estimate (Acklam's piecewise approximation) polished by
/// two Newton steps against an `erfc`-based `Φ`; absolute error is far below
/// the documented `1e−9` everywhere in the open interval.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(0.0 < p && p < 1.0) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            range: "(0, 1)",
        });
    }
    let mut x = acklam_estimate(p);
    for _ in 0..2 {
        let cdf = 0.5 * libm::erfc(-x / core::f64::consts::SQRT_2);
        let pdf = libm::exp(-0.5 * x * x) / SQRT_TAU;
        if pdf == 0.0 {
            break;
        }
        x -= (cdf - p) / pdf;
    }
    Ok(x)
}

fn acklam_estimate(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383_577_518_672_69e2,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = libm::sqrt(-2.0 * libm::log(p));
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -acklam_estimate(1.0 - p)
    }
}

fn check_half_open(value: f64, name: &'static str) -> Result<()> {
    if !(0.0..0.5).contains(&value) {
        return Err(Error::OutOfRange {
            name,
            value,
            range: "[0, 0.5)",
        });
    }
    Ok(())
}

const EXACT_BINOMIAL_MAX: usize = 64;

/// `C(k, 0..=k/2−1)` as f64; exact for `k ≤ 64` (largest value `C(64,31)`
/// fits in u128 and converts with one rounding), running log-recurrence
/// beyond.
fn binomial_row(k: usize) -> Vec<f64> {
    let half = k / 2;
    let mut row = Vec::with_capacity(half);
    if k <= EXACT_BINOMIAL_MAX {
        let mut c: u128 = 1;
        for j in 0..half {
            if j > 0 {
                c = c * (k as u128 - j as u128 + 1) / j as u128;
            }
            row.push(c as f64);
        }
    } else {
        let mut ln_c = 0.0f64;
        for j in 0..half {
            if j > 0 {
                ln_c += libm::log((k - j + 1) as f64) - libm::log(j as f64);
            }
            row.push(ln_c);
        }
    }
    row
}

/// `Σ_{j=0}^{k/2−1} C(k,j) a^j b^{k−j}` with the row produced by
/// [`binomial_row`] for the same `k` (raw values ≤ 64, logs above).
fn weighted_tail(a: f64, b: f64, k: usize, row: &[f64]) -> f64 {
    let mut sum = KahanSum::default();
    if k <= EXACT_BINOMIAL_MAX {
        for (j, &c) in row.iter().enumerate() {
            sum.add(c * pow_nonneg(a, j) * pow_nonneg(b, k - j));
        }
    } else {
        for (j, &ln_c) in row.iter().enumerate() {
            let term = if (a == 0.0 && j > 0) || b == 0.0 {
                0.0
            } else {
                let ln_a = if j == 0 { 0.0 } else { j as f64 * libm::log(a) };
                libm::exp(ln_c + ln_a + (k - j) as f64 * libm::log(b))
            };
            sum.add(term);
        }
    }
    sum.value()
}

/// `x^j` for `x ≥ 0` with `0^0 = 1`.
fn pow_nonneg(x: f64, j: usize) -> f64 {
    if j == 0 {
        1.0
    } else if x == 0.0 {
        0.0
    } else {
        libm::pow(x, j as f64)
    }
}

#[derive(Default)]
struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{decode, Transmission};
    use crate::rng::RngSeed;
    use rand::distributions::{Bernoulli, Distribution};

    fn transmission_from_bools(n: usize, k: usize, bits: &[bool]) -> Transmission {
        Transmission::new(n, k, BitVec::from_bools(bits)).unwrap()
    }

    /// All-zero source passed through a channel flipping each bit w.p. `mu`.
    fn random_channel(n: usize, k: usize, mu: f64, seed: RngSeed) -> Transmission {
        let mut rng = seed.rng();
        let dist = Bernoulli::new(mu).unwrap();
        let mut bits = BitVec::zeros(n * k);
        for i in 0..n * k {
            if dist.sample(&mut rng) {
                bits.set(i, true);
            }
        }
        Transmission::new(n, k, bits).unwrap()
    }

    #[test]
    fn mu_effective_values() {
        assert_eq!(mu_effective(0.0, 0.0).unwrap(), 0.0);
        assert!((mu_effective(0.2, 0.1).unwrap() - 0.26).abs() < 1e-15);
        assert!((mu_effective(0.2, 0.01).unwrap() - 0.206).abs() < 1e-15);
        assert!(matches!(
            mu_effective(0.5, 0.1),
            Err(Error::OutOfRange { name: "beta", .. })
        ));
        assert!(matches!(
            mu_effective(0.1, 0.6),
            Err(Error::OutOfRange { name: "nu", .. })
        ));
    }

    #[test]
    fn mu_effective_stays_in_band() {
        // μ ∈ [ν, 0.5) across the whole parameter grid.
        for bi in 0..50 {
            for ni in 0..50 {
                let beta = bi as f64 * 0.01;
                let nu = ni as f64 * 0.01;
                let mu = mu_effective(beta, nu).unwrap();
                assert!(mu >= nu - 1e-15 && mu < 0.5);
            }
        }
    }

    #[test]
    fn p_success_hand_values() {
        assert_eq!(p_success(0.0, 2).unwrap(), 1.0);
        assert_eq!(p_success(0.0, 10).unwrap(), 1.0);
        assert!((p_success(0.25, 2).unwrap() - 0.5625).abs() < 1e-15);
        assert!((p_success(0.2, 4).unwrap() - 0.8192).abs() < 1e-15);
        assert!(matches!(
            p_success(0.5, 4),
            Err(Error::OutOfRange { name: "mu", .. })
        ));
        assert!(matches!(
            p_success(0.2, 5),
            Err(Error::InvalidCopyCount { k_copies: 5 })
        ));
    }

    #[test]
    fn p_success_matches_exhaustive_enumeration() {
        // Weighted count over all 2^K flip patterns.
        for k in [2usize, 4, 6, 8, 10] {
            for &mu in &[0.1, 0.2, 0.3, 0.49] {
                let mut expect = 0.0f64;
                for pattern in 0u32..(1 << k) {
                    let flips = pattern.count_ones() as usize;
                    if flips < k / 2 {
                        let mut w = 1.0;
                        for i in 0..k {
                            w *= if pattern >> i & 1 == 1 { mu } else { 1.0 - mu };
                        }
                        expect += w;
                    }
                }
                let got = p_success(mu, k).unwrap();
                assert!(
                    (got - expect).abs() < 1e-12,
                    "k={k} mu={mu}: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn p_success_decreasing_in_mu() {
        // Strictly decreasing once below 1.0; at tiny μ and larger K the
        // tail saturates to 1.0 in f64 (missing mass below one ulp).
        for k in [2usize, 4, 8, 14] {
            let mut prev = p_success(0.0, k).unwrap();
            let mut mu = 0.001;
            while mu < 0.5 {
                let cur = p_success(mu, k).unwrap();
                assert!(cur <= prev, "k={k} mu={mu}");
                if prev < 1.0 {
                    assert!(cur < prev, "k={k} mu={mu} stalled at {cur}");
                }
                prev = cur;
                mu += 0.001;
            }
            assert!(prev < 0.6, "k={k} should have left saturation");
        }
    }

    #[test]
    fn log_space_path_agrees_with_exact_path_at_boundary() {
        // Dual route: exact u128 binomials vs log-space terms.
        for k in [56usize, 60, 64] {
            for &mu in &[0.05, 0.2, 0.4, 0.49] {
                let exact = p_success(mu, k).unwrap();
                let logged = {
                    let half = k / 2;
                    let mut ln_c = 0.0f64;
                    let mut sum = KahanSum::default();
                    for j in 0..half {
                        if j > 0 {
                            ln_c += libm::log((k - j + 1) as f64) - libm::log(j as f64);
                        }
                        let ln_term = if mu == 0.0 && j > 0 {
                            f64::NEG_INFINITY
                        } else {
                            let la = if j == 0 {
                                0.0
                            } else {
                                j as f64 * libm::log(mu)
                            };
                            ln_c + la + (k - j) as f64 * libm::log(1.0 - mu)
                        };
                        sum.add(libm::exp(ln_term));
                    }
                    sum.value()
                };
                assert!(
                    (exact - logged).abs() < 1e-12,
                    "k={k} mu={mu}: {exact} vs {logged}"
                );
            }
        }
        // And large-K values stay in (0, 1] and increase with K.
        let a = p_success(0.3, 200).unwrap();
        let b = p_success(0.3, 400).unwrap();
        assert!(0.0 < a && a < b && b <= 1.0);
    }

    #[test]
    fn p_hat_trivial_and_hand_cases() {
        // N=1, K=2, all-zero: every statistic zero, p̂ = 1.
        let r = transmission_from_bools(1, 2, &[false, false]);
        assert_eq!(p_hat(&r), 1.0);

        // N=1, K=4, block (1,0,0,0): R₁ = 0.5, R₂ = 0, majority zero,
        // p̂ = C(4,0)·1 + C(4,1)·0.5 = 3. Shows p̂ can exceed 1.
        let r = transmission_from_bools(1, 4, &[true, false, false, false]);
        let report = decode(&r);
        assert_eq!(report.half_means(0), (0.5, 0.0));
        assert_eq!(report.block_class(0), BlockClass::Zero);
        assert_eq!(report.p_hat(), 3.0);
    }

    /// Exact `E[p̂]` per block of an all-zero source through a Bernoulli(μ)
    /// channel: weighted enumeration of all `2^K` flip patterns, evaluating
    /// the same split-half formula from the pattern's raw bits.
    fn expected_p_hat_enumeration(k: usize, mu: f64) -> f64 {
        let half = k / 2;
        let row = binomial_row(k);
        let mut total = 0.0;
        for pattern in 0u32..(1 << k) {
            let mut weight = 1.0;
            let mut c1 = 0u32;
            let mut c2 = 0u32;
            for i in 0..k {
                if pattern >> i & 1 == 1 {
                    weight *= mu;
                    if i < half {
                        c1 += 1;
                    } else {
                        c2 += 1;
                    }
                } else {
                    weight *= 1.0 - mu;
                }
            }
            let r1 = c1 as f64 / half as f64;
            let r2 = c2 as f64 / half as f64;
            let (a, b) = if 2 * (c1 + c2) as usize > k {
                (1.0 - r1, r2)
            } else {
                (r1, 1.0 - r2)
            };
            let mut term = 0.0;
            for (j, &c) in row.iter().enumerate() {
                term += c * pow_nonneg(a, j) * pow_nonneg(b, k - j);
            }
            total += weight * term;
        }
        total
    }

    #[test]
    fn p_hat_mean_matches_enumeration_oracle() {
        // Monte Carlo mean of p̂ against the exact expectation of the
        // split-half formula. Note the formula's expectation is NOT the
        // binomial tail p_K: plug-in powers of half-means inflate the
        // moments (E[R₁ᵏ] > μᵏ for k ≥ 2), so p̂ overshoots p_K at small K.
        let n = 20;
        let k = 8;
        let mu = 0.2;
        let trials = 4_000u64;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for t in 0..trials {
            let r = random_channel(n, k, mu, RngSeed::new(777, t));
            let p = p_hat(&r);
            sum += p;
            sum_sq += p * p;
        }
        let mean = sum / trials as f64;
        let var = (sum_sq / trials as f64 - mean * mean).max(0.0);
        let se = libm::sqrt(var / trials as f64);
        let expect = expected_p_hat_enumeration(k, mu);
        assert!(
            (mean - expect).abs() < 4.0 * se,
            "mean {mean} vs exact {expect} (se {se})"
        );
        // The systematic gap to the tail is real and large at K = 8.
        assert!(expect - p_success(mu, k).unwrap() > 1.0);
    }

    #[test]
    fn mu_hat_cases() {
        let r = transmission_from_bools(2, 2, &[false; 4]);
        assert_eq!(mu_hat(&r), 0.0);

        // Blocks (0,1) and (1,1): copy-major bits [b0c0, b1c0, b0c1, b1c1].
        let r = transmission_from_bools(2, 2, &[false, true, true, true]);
        let report = decode(&r);
        assert_eq!(report.block_class(0), BlockClass::Zero);
        assert_eq!(report.block_class(1), BlockClass::One);
        assert_eq!(report.mu_hat(), 0.25);
    }

    #[test]
    fn mu_hat_concentrates_at_bound_k() {
        // With K from the concentration bound, |μ̂ − μ| < ε_tol in ≥ 99 of
        // 100 seeded channels.
        let params = RobustnessParams::new(0.05, 0.04, 0.01).unwrap();
        let n = 100;
        let k = k_bound(&params, n).unwrap();
        let mu = 0.21;
        let mut within = 0;
        for t in 0..100u64 {
            let r = random_channel(n, k, mu, RngSeed::new(31337, t));
            if libm::fabs(mu_hat(&r) - mu) < params.eps_tol() {
                within += 1;
            }
        }
        assert!(within >= 99, "only {within}/100 within eps_tol");
    }

    #[test]
    fn mu_hat_never_exceeds_half() {
        for t in 0..50u64 {
            let r = random_channel(9, 6, 0.45, RngSeed::new(5, t));
            let m = mu_hat(&r);
            assert!((0.0..=0.5).contains(&m), "mu_hat {m}");
        }
    }

    #[test]
    fn block_mean_is_exactly_average_of_half_means() {
        for t in 0..20u64 {
            let r = random_channel(7, 6, 0.3, RngSeed::new(91, t));
            let report = decode(&r);
            for b in 0..7 {
                let (r1, r2) = report.half_means(b);
                assert_eq!(report.block_mean(b), (r1 + r2) / 2.0);
                // Class boundary consistent with the stored mean.
                match report.block_class(b) {
                    BlockClass::Zero => assert!(report.block_mean(b) <= 0.5),
                    BlockClass::One => assert!(report.block_mean(b) > 0.5),
                }
            }
        }
    }

    #[test]
    fn delta_k_formula_and_monotonicity() {
        let e2 = core::f64::consts::E * core::f64::consts::E;
        assert!((delta_k(1, 2).unwrap() - e2).abs() < 1e-12);
        for (n, k) in [(1usize, 2usize), (4, 6), (10, 8)] {
            assert!(delta_k(n, k).unwrap() > delta_k(n, k + 2).unwrap());
            assert!(delta_k(n, k).unwrap() > delta_k(2 * n, k).unwrap());
        }
    }

    #[test]
    fn single_flip_sensitivity_can_exceed_delta_k() {
        // Δ_K is the closed-form constant the copy-count bound plugs into,
        // but it does not cap the estimator's actual single-flip movement:
        // extreme half-splits move p̂ further. Deterministic witness at
        // N = 1, K = 4: block (1,0 | 0,0) has term 1 + 4·0.5 = 3; flipping
        // one second-half bit yields (1,0 | 1,0), still majority-zero, with
        // term 0.5⁴ + 4·0.5·0.5³ = 0.3125.
        let before = transmission_from_bools(1, 4, &[true, false, false, false]);
        let after = transmission_from_bools(1, 4, &[true, false, true, false]);
        assert_eq!(decode(&before).block_class(0), BlockClass::Zero);
        assert_eq!(decode(&after).block_class(0), BlockClass::Zero);
        let moved = libm::fabs(p_hat(&after) - p_hat(&before));
        assert!((moved - 2.6875).abs() < 1e-12);
        let bound = delta_k(1, 4).unwrap();
        assert!((bound - 2.463_018_699_643_549_8).abs() < 1e-9);
        assert!(moved > bound);
    }

    #[test]
    fn k_bound_reproduces_published_prescriptions() {
        let params = RobustnessParams::new(0.05, 0.04, 0.01).unwrap();
        assert_eq!(k_bound(&params, 100).unwrap(), 240);
        assert_eq!(k_bound(&params, 50).unwrap(), 340);
    }

    #[test]
    fn k_bound_minimal_and_even() {
        let e4 = libm::pow(core::f64::consts::E, 4.0);
        for (eps, eta, n) in [
            (0.04, 0.01, 100usize),
            (0.04, 0.01, 50),
            (0.025, 0.001, 1000),
            (0.1, 0.05, 10),
        ] {
            let params = RobustnessParams::new(0.2, eps, eta).unwrap();
            let k = k_bound(&params, n).unwrap();
            let rhs = 32.0 * e4 * libm::log(2.0 / eta) / (eps * eps * n as f64);
            assert_eq!(k % 2, 0);
            let kf = k as f64;
            assert!(kf * kf + 2.0 * kf >= rhs);
            if k > 2 {
                let prev = (k - 2) as f64;
                assert!(prev * prev + 2.0 * prev < rhs, "k={k} not minimal");
            }
        }
    }

    #[test]
    fn line_search_examples() {
        let params = RobustnessParams::new(0.05, 0.025, 0.01).unwrap();
        assert_eq!(k_line_search(0.0, &params).unwrap(), 2);

        // Target 0.975: tail at K=10 ≈ 0.963, at K=12 ≈ 0.978.
        let k = k_line_search(0.206, &params).unwrap();
        assert_eq!(k, 12);
        assert!(p_success(0.206, 10).unwrap() < params.tail_target());
        assert!(p_success(0.206, 12).unwrap() >= params.tail_target());

        assert!(matches!(
            k_line_search(0.5, &params),
            Err(Error::UnreliableChannel { .. })
        ));
    }

    #[test]
    fn line_search_result_is_minimal() {
        for &(mu, rho, eps) in &[
            (0.1, 0.05, 0.025),
            (0.206, 0.05, 0.025),
            (0.3, 0.1, 0.05),
            (0.45, 0.2, 0.1),
            (0.37, 0.02, 0.005),
        ] {
            let params = RobustnessParams::new(rho, eps, 0.01).unwrap();
            let k = k_line_search(mu, &params).unwrap();
            assert!(p_success(mu, k).unwrap() >= params.tail_target());
            if k > 2 {
                assert!(
                    p_success(mu, k - 2).unwrap() < params.tail_target(),
                    "mu={mu}: k={k} not minimal"
                );
            }
        }
    }

    #[test]
    fn select_k_escalates_only_when_needed() {
        let params = RobustnessParams::new(0.05, 0.025, 0.01).unwrap();
        // Large N drives the bound K low; a hot channel must escalate.
        let quiet = select_k(&params, 500_000, 0.01).unwrap();
        assert!(!quiet.escalated);
        assert_eq!(quiet.k, quiet.bound_k);

        let hot = select_k(&params, 500_000, 0.45).unwrap();
        assert!(hot.escalated);
        assert!(hot.k > hot.bound_k);
        assert_eq!(hot.k, k_line_search(0.45, &params).unwrap());

        // Small N drives the bound K high enough on its own.
        let bound_heavy = select_k(&params, 10, 0.01).unwrap();
        assert!(!bound_heavy.escalated);
    }

    #[test]
    fn rs_radius_cases() {
        assert_eq!(rs_radius(0.7, 0.7, 1.0).unwrap(), 0.0);
        let r = rs_radius(0.9, 0.1, 1.0).unwrap();
        assert!((r - 1.2815515655446004).abs() < 1e-9, "radius {r}");
        // Linear in sigma.
        let r2 = rs_radius(0.9, 0.1, 2.5).unwrap();
        assert!((r2 - 2.5 * r).abs() < 1e-12);

        assert!(rs_radius(0.1, 0.9, 1.0).is_err());
        assert!(rs_radius(1.0, 0.5, 1.0).is_err());
        assert!(rs_radius(0.9, 0.0, 1.0).is_err());
        assert!(rs_radius(0.9, 0.1, 0.0).is_err());
    }

    #[test]
    fn normal_quantile_known_values() {
        let cases = [
            (0.5, 0.0),
            (0.9, 1.2815515655446004),
            (0.975, 1.959963984540054),
            (0.99, 2.3263478740408408),
            (0.025, -1.959963984540054),
            (1e-9, -5.997807015007619),
        ];
        for (p, expect) in cases {
            let got = normal_quantile(p).unwrap();
            assert!(
                (got - expect).abs() < 1e-9,
                "quantile({p}) = {got}, want {expect}"
            );
        }
        assert!(normal_quantile(0.0).is_err());
        assert!(normal_quantile(1.0).is_err());
    }

    #[test]
    fn error_bridge_counts_complement() {
        // error ≤ ρ exactly when the correctly decoded fraction ≥ 1 − ρ.
        for t in 0..20u64 {
            let n = 30;
            let r = random_channel(n, 6, 0.35, RngSeed::new(222, t));
            let report = decode(&r);
            let wrong = report.s_hat().count_ones(); // true s is all-zero
            let error = wrong as f64 / n as f64;
            let correct_fraction = (n - wrong) as f64 / n as f64;
            for rho_step in 0..=10 {
                let rho = rho_step as f64 / 10.0;
                assert_eq!(error <= rho, correct_fraction >= 1.0 - rho);
            }
        }
    }
}
