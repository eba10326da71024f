//! Repetition encoding with sender-assigned noise; majority-vote decoding.
//!
//! The encoder transmits `K` copies of an edge vector, flipping every
//! transmitted bit independently with probability `ν < 0.5` so the attacker
//! cannot spot the repetition. The decoder takes, per block (vertex pair),
//! the majority across the `K` received copies; a tied block decodes to 0,
//! which favors absent edges at ties.

use rand::distributions::{Bernoulli, Distribution};

use crate::analysis::DecodeReport;
use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::graph::EdgeVector;
use crate::rng::RngSeed;

/// Sender-assigned flip probability `ν ∈ [0, 0.5)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    nu: f64,
}

impl NoiseSpec {
    pub fn new(nu: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&nu) {
            return Err(Error::OutOfRange {
                name: "nu",
                value: nu,
                range: "[0, 0.5)",
            });
        }
        Ok(NoiseSpec { nu })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
}

/// `K` noisy copies of an `N`-bit sequence crossing the channel.
///
/// Storage is copy-major: copy `k` is the contiguous bit run
/// `[k·N, (k+1)·N)`, and block `n` of copy `k` is bit `k·N + n`. `K` is
/// always even so a strict majority is well defined against the tie rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transmission {
    num_blocks: usize,
    num_copies: usize,
    bits: BitVec,
}

impl Transmission {
    pub fn new(num_blocks: usize, num_copies: usize, bits: BitVec) -> Result<Self> {
        if num_copies < 2 || !num_copies.is_multiple_of(2) {
            return Err(Error::InvalidCopyCount {
                k_copies: num_copies,
            });
        }
        if num_blocks == 0 {
            return Err(Error::LengthMismatch {
                expected: 1,
                actual: 0,
            });
        }
        let expected = num_blocks * num_copies;
        if bits.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: bits.len(),
            });
        }
        Ok(Transmission {
            num_blocks,
            num_copies,
            bits,
        })
    }

    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    pub fn num_copies(&self) -> usize {
        self.num_copies
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    /// Bit `r_{n,k}` for block `n`, copy `k`.
    pub fn get(&self, block: usize, copy: usize) -> bool {
        debug_assert!(block < self.num_blocks && copy < self.num_copies);
        self.bits.get(copy * self.num_blocks + block)
    }

    pub fn set(&mut self, block: usize, copy: usize, value: bool) {
        debug_assert!(block < self.num_blocks && copy < self.num_copies);
        self.bits.set(copy * self.num_blocks + block, value);
    }

    pub(crate) fn flip_raw(&mut self, raw_index: usize) {
        self.bits.flip(raw_index);
    }

    /// The `N` bits of copy `k` as a standalone vector.
    pub fn copy_bits(&self, copy: usize) -> BitVec {
        let mut out = BitVec::zeros(self.num_blocks);
        let base = copy * self.num_blocks;
        for n in 0..self.num_blocks {
            if self.bits.get(base + n) {
                out.set(n, true);
            }
        }
        out
    }
}

/// Encode `K` copies of `s`, each bit XORed with an independent
/// Bernoulli(`ν`) draw. Draws follow storage order (copy-major), so the
/// output is a pure function of `(s, k_copies, noise, seed)`.
pub fn encode(
    s: &EdgeVector,
    k_copies: usize,
    noise: &NoiseSpec,
    seed: RngSeed,
) -> Result<Transmission> {
    if k_copies < 2 || !k_copies.is_multiple_of(2) {
        return Err(Error::InvalidCopyCount { k_copies });
    }
    let n = s.len();
    if n == 0 {
        // A single-vertex graph has no pairs to transmit.
        return Err(Error::EmptySample);
    }
    let mut rng = seed.rng();
    let dist = Bernoulli::new(noise.nu()).expect("validated probability");
    let mut bits = BitVec::zeros(n * k_copies);
    for copy in 0..k_copies {
        let base = copy * n;
        for block in 0..n {
            let flipped = s.get(block) ^ dist.sample(&mut rng);
            if flipped {
                bits.set(base + block, true);
            }
        }
    }
    Transmission::new(n, k_copies, bits)
}

/// Majority-vote decode, with all per-block statistics.
///
/// Block `n` decodes to 1 exactly when its copy mean exceeds 0.5; the tied
/// mean 0.5 decodes to 0. The comparison is done on integer counts
/// (`2·ones > K`), which equals the real-arithmetic rule with no rounding.
pub fn decode(r: &Transmission) -> DecodeReport {
    let n = r.num_blocks();
    let k = r.num_copies();
    let half = k / 2;
    let mut first = alloc::vec![0u32; n];
    let mut second = alloc::vec![0u32; n];
    for copy in 0..k {
        let counts = if copy < half { &mut first } else { &mut second };
        let base = copy * n;
        for (block, count) in counts.iter_mut().enumerate() {
            if r.bits().get(base + block) {
                *count += 1;
            }
        }
    }
    DecodeReport::from_half_counts(k, &first, &second)
}

/// Normalized ℓ₁ distance between two edge vectors: mismatches / N.
pub fn hamming_error(a: &EdgeVector, b: &EdgeVector) -> Result<f64> {
    hamming_error_bits(a.bits(), b.bits())
}

/// Normalized ℓ₁ distance between raw bit sequences of equal length.
pub fn hamming_error_bits(a: &BitVec, b: &BitVec) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(a.hamming(b) as f64 / a.len() as f64)
}
