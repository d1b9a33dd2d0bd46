//! ADC power: `P = c B 2^b` per active converter, the normalized power
//! `xi` against an all-`b_ref` receiver, and the largest number of
//! high-resolution antennas that keeps `xi <= 1`.

use crate::error::{Error, Result};
use crate::quantize::MAX_BITS;

/// Default Walden figure of merit, joules per conversion step.
pub const DEFAULT_WALDEN_FOM: f64 = 1e-12;
/// Default sampling bandwidth, Hz.
pub const DEFAULT_BANDWIDTH: f64 = 1e9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerModel {
    walden_fom: f64,
    bandwidth: f64,
}

impl PowerModel {
    pub fn new(walden_fom: f64, bandwidth: f64) -> Result<Self> {
        if !(walden_fom > 0.0 && walden_fom.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "walden_fom must be positive, got {walden_fom}"
            )));
        }
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "bandwidth must be positive, got {bandwidth}"
            )));
        }
        Ok(Self {
            walden_fom,
            bandwidth,
        })
    }

    pub fn walden_fom(&self) -> f64 {
        self.walden_fom
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }
}

impl Default for PowerModel {
    fn default() -> Self {
        Self {
            walden_fom: DEFAULT_WALDEN_FOM,
            bandwidth: DEFAULT_BANDWIDTH,
        }
    }
}

/// Reference resolution and the two resolutions of the variable receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResolutionLevels {
    b_ref: u32,
    b_low: u32,
    b_high: u32,
}

impl ResolutionLevels {
    /// Requires `1 <= b_low <= b_ref <= b_high <= MAX_BITS`.
    pub fn new(b_ref: u32, b_low: u32, b_high: u32) -> Result<Self> {
        if b_low == 0 {
            return Err(Error::InvalidParameter("b_low must be at least 1".into()));
        }
        if b_high > MAX_BITS {
            return Err(Error::InvalidParameter(format!(
                "b_high ({b_high}) exceeds the supported maximum of {MAX_BITS} bits"
            )));
        }
        if !(b_low <= b_ref && b_ref <= b_high) {
            return Err(Error::LevelOrder {
                b_low,
                b_ref,
                b_high,
            });
        }
        Ok(Self {
            b_ref,
            b_low,
            b_high,
        })
    }

    pub fn b_ref(&self) -> u32 {
        self.b_ref
    }

    pub fn b_low(&self) -> u32 {
        self.b_low
    }

    pub fn b_high(&self) -> u32 {
        self.b_high
    }

    pub fn is_degenerate(&self) -> bool {
        self.b_high == self.b_low
    }
}

/// Per-antenna ADC resolutions with cached counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitAllocation {
    bits: Vec<u32>,
    n_high: usize,
    n_on: usize,
}

impl BitAllocation {
    /// All antennas at `b_ref`.
    pub fn reference(n_antennas: usize, b_ref: u32) -> Self {
        Self {
            bits: vec![b_ref; n_antennas],
            n_high: 0,
            n_on: if b_ref > 0 { n_antennas } else { 0 },
        }
    }

    /// A variable-resolution allocation whose entries must all lie in
    /// `{0, b_low, b_high}`. With `b_low == b_high` nothing counts as high.
    pub fn variable(bits: Vec<u32>, levels: &ResolutionLevels) -> Result<Self> {
        let mut n_high = 0;
        let mut n_on = 0;
        for (i, &b) in bits.iter().enumerate() {
            if b == 0 {
                continue;
            }
            if b == levels.b_high && !levels.is_degenerate() {
                n_high += 1;
            } else if b != levels.b_low {
                return Err(Error::InconsistentAllocation(format!(
                    "antenna {i} has {b} bits, expected 0, {} or {}",
                    levels.b_low, levels.b_high
                )));
            }
            n_on += 1;
        }
        Ok(Self { bits, n_high, n_on })
    }

    pub fn bits(&self) -> &[u32] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn n_high(&self) -> usize {
        self.n_high
    }

    pub fn n_on(&self) -> usize {
        self.n_on
    }
}

/// Power drawn by one ADC; a switched-off converter (`b = 0`) draws nothing.
pub fn adc_power(b: u32, model: &PowerModel) -> f64 {
    if b == 0 {
        0.0
    } else {
        model.walden_fom * model.bandwidth * (b as f64).exp2()
    }
}

pub fn total_power(alloc: &BitAllocation, model: &PowerModel) -> f64 {
    alloc.bits.iter().map(|&b| adc_power(b, model)).sum()
}

/// `xi = [n_high 2^b_high + (n_on - n_high) 2^b_low] / (N 2^b_ref)`.
pub fn normalized_power_from_counts(
    n_high: usize,
    n_on: usize,
    n_antennas: usize,
    levels: &ResolutionLevels,
) -> Result<f64> {
    if n_antennas == 0 {
        return Err(Error::InconsistentAllocation("no antennas".into()));
    }
    if n_high > n_on || n_on > n_antennas {
        return Err(Error::InconsistentAllocation(format!(
            "need n_high <= n_on <= n_antennas, got {n_high}, {n_on}, {n_antennas}"
        )));
    }
    let high = n_high as f64 * (levels.b_high as f64 - levels.b_ref as f64).exp2();
    let low = (n_on - n_high) as f64 * (levels.b_low as f64 - levels.b_ref as f64).exp2();
    Ok((high + low) / n_antennas as f64)
}

/// Normalized power of an allocation. A reference allocation (every entry
/// at `b_ref`) evaluates to exactly 1.
pub fn normalized_power(alloc: &BitAllocation, levels: &ResolutionLevels) -> Result<f64> {
    let n = alloc.len();
    if n > 0 && alloc.bits.iter().all(|&b| b == levels.b_ref) {
        return Ok(1.0);
    }
    // Recount against these levels rather than trusting the cached counts.
    let checked = BitAllocation::variable(alloc.bits.clone(), levels)?;
    normalized_power_from_counts(checked.n_high, checked.n_on, n, levels)
}

/// `floor(N (2^(b_ref - b_low) - 1) / (2^(b_high - b_low) - 1))`.
pub fn max_high_count(n_antennas: usize, levels: &ResolutionLevels) -> Result<usize> {
    if levels.is_degenerate() {
        return Err(Error::DegenerateLevelPair(levels.b_high));
    }
    // Exact integer arithmetic; b_high <= MAX_BITS keeps this in range.
    let num = (1u128 << (levels.b_ref - levels.b_low)) - 1;
    let den = (1u128 << (levels.b_high - levels.b_low)) - 1;
    Ok((n_antennas as u128 * num / den) as usize)
}
