//! Additive quantization noise model.
//!
//! A `b`-bit ADC scales its input by `1 - eta(b)` and adds independent
//! Gaussian distortion, so an antenna with unquantized SNR `gamma` delivers
//! `(1 - eta) gamma / (1 + eta gamma)` after quantization. Under rank-one
//! beamforming with maximum ratio combining the per-antenna terms add.

use std::f64::consts::PI;

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::power::BitAllocation;
use crate::sum::NeumaierSum;

/// Distortion factors for Gaussian inputs, `b = 1..=5`.
pub const ETA_TABLE: [f64; 5] = [0.3634, 0.1175, 0.03454, 0.009497, 0.002499];

/// `pi * sqrt(3) / 2`, the high-resolution coefficient of `eta(b) ~ c 2^(-2b)`.
pub const ETA_ASYMPTOTIC_COEFFICIENT: f64 = PI * 1.732_050_807_568_877_2 / 2.0;

/// Largest resolution accepted by configurations.
pub const MAX_BITS: u32 = 15;

/// Inverse signal-to-quantization-noise ratio of a `b`-bit ADC. `b = 0` is a
/// switched-off antenna and maps to 1.
pub fn eta(b: u32) -> f64 {
    match b {
        0 => 1.0,
        1..=5 => ETA_TABLE[(b - 1) as usize],
        _ => ETA_ASYMPTOTIC_COEFFICIENT * (-2.0 * b as f64).exp2(),
    }
}

/// `eta` for a signed bit count, rejecting negatives.
pub fn eta_checked(b: i64) -> Result<f64> {
    u32::try_from(b)
        .map(eta)
        .map_err(|_| Error::InvalidParameter(format!("bit count must be non-negative, got {b}")))
}

pub fn quantized_snr_per_antenna(gamma: f64, b: u32) -> f64 {
    if b == 0 {
        return 0.0;
    }
    let e = eta(b);
    (1.0 - e) * gamma / (1.0 + e * gamma)
}

/// `gamma_i = |u_i|^2 sigma^2 * link_snr`.
pub fn per_antenna_unquantized_snr(realization: &ChannelRealization, link_snr: f64) -> Vec<f64> {
    let gain = realization.sigma_max * realization.sigma_max * link_snr;
    realization
        .rx_mode
        .iter()
        .map(|u| u.norm_sqr() * gain)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedLinkState {
    pub per_antenna_unq_snr: Vec<f64>,
    pub per_antenna_bits: Vec<u32>,
    pub per_antenna_q_snr: Vec<f64>,
    pub aggregate_q_snr: f64,
}

/// Sum of quantized per-antenna SNRs for arbitrary bit depths.
pub fn sum_quantized_snr(gamma: &[f64], bits: &[u32]) -> Result<f64> {
    if gamma.len() != bits.len() {
        return Err(Error::LengthMismatch {
            expected: gamma.len(),
            actual: bits.len(),
        });
    }
    Ok(gamma
        .iter()
        .zip(bits)
        .map(|(&g, &b)| quantized_snr_per_antenna(g, b))
        .collect::<NeumaierSum>()
        .value())
}

pub fn aggregate_snr(
    realization: &ChannelRealization,
    link_snr: f64,
    bits: &BitAllocation,
) -> Result<QuantizedLinkState> {
    let gamma = per_antenna_unquantized_snr(realization, link_snr);
    quantized_state(gamma, bits.bits())
}

/// Builds the full link state from an unquantized SNR vector.
pub fn quantized_state(gamma: Vec<f64>, bits: &[u32]) -> Result<QuantizedLinkState> {
    if gamma.len() != bits.len() {
        return Err(Error::LengthMismatch {
            expected: gamma.len(),
            actual: bits.len(),
        });
    }
    let q: Vec<f64> = gamma
        .iter()
        .zip(bits)
        .map(|(&g, &b)| quantized_snr_per_antenna(g, b))
        .collect();
    let aggregate_q_snr = q.iter().copied().collect::<NeumaierSum>().value();
    Ok(QuantizedLinkState {
        per_antenna_unq_snr: gamma,
        per_antenna_bits: bits.to_vec(),
        per_antenna_q_snr: q,
        aggregate_q_snr,
    })
}

/// `log2(1 + gamma_q)` in bits/s/Hz.
pub fn spectral_efficiency(gamma_q: f64) -> f64 {
    gamma_q.ln_1p() / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn eta_table_and_formula() {
        assert_eq!(eta(1), 0.3634);
        assert_eq!(eta(2), 0.1175);
        assert_eq!(eta(3), 0.03454);
        assert_eq!(eta(4), 0.009497);
        assert_eq!(eta(5), 0.002499);
        assert!(close(eta(6), 6.6423e-4, 5e-9));
        assert!(close(eta(7), 1.6606e-4, 5e-9));
        assert_eq!(eta(0), 1.0);
        assert!(close(
            ETA_ASYMPTOTIC_COEFFICIENT,
            PI * 3f64.sqrt() / 2.0,
            1e-15
        ));
    }

    #[test]
    fn eta_rejects_negative_bits() {
        assert!(eta_checked(-1).is_err());
        assert_eq!(eta_checked(2).unwrap(), 0.1175);
    }

    #[test]
    fn eta_is_strictly_decreasing() {
        for b in 1..MAX_BITS {
            assert!(eta(b + 1) < eta(b), "b = {b}");
            assert!(eta(b) > 0.0 && eta(b) < 1.0);
        }
        // Table and formula agree within a factor of two at the boundary.
        let formula_at_5 = ETA_ASYMPTOTIC_COEFFICIENT * 2f64.powi(-10);
        let ratio = eta(5) / formula_at_5;
        assert!(ratio > 0.5 && ratio < 2.0, "ratio {ratio}");
    }

    #[test]
    fn per_antenna_examples() {
        assert!(close(
            quantized_snr_per_antenna(1.0, 1),
            (1.0 - 0.3634) / (1.0 + 0.3634),
            1e-15
        ));
        assert!(close(quantized_snr_per_antenna(1.0, 1), 0.46692, 5e-6));
        assert_eq!(quantized_snr_per_antenna(123.0, 0), 0.0);
        assert!(close(quantized_snr_per_antenna(2.0, 15), 2.0, 1e-7));
    }

    #[test]
    fn aggregate_example() {
        let s = sum_quantized_snr(&[4.0, 1.0], &[3, 1]).unwrap();
        // 3.3930 + 0.46692; hand value 3.85998 to five digits.
        assert!(close(s, 3.859976390893814, 1e-12));
        assert!(close(s, 3.8599, 1e-4));
        assert!(close(quantized_snr_per_antenna(4.0, 3), 3.3930, 1e-4));
        assert_eq!(sum_quantized_snr(&[4.0, 1.0], &[0, 0]).unwrap(), 0.0);
        assert!(sum_quantized_snr(&[4.0, 1.0], &[3]).is_err());
    }

    #[test]
    fn uniform_bits_aggregate() {
        let gamma = vec![2.5; 16];
        let bits = vec![3; 16];
        let e = eta(3);
        let want = 16.0 * (1.0 - e) * 2.5 / (1.0 + e * 2.5);
        assert!(close(
            sum_quantized_snr(&gamma, &bits).unwrap(),
            want,
            1e-12
        ));
    }

    #[test]
    fn spectral_efficiency_examples() {
        assert_eq!(spectral_efficiency(0.0), 0.0);
        assert!(close(spectral_efficiency(1.0), 1.0, 1e-15));
        assert!(close(spectral_efficiency(3.8599), 2.2810, 1e-4));
        assert!(close(
            spectral_efficiency(3.859976390893814),
            2.280949305431232,
            1e-12
        ));
    }

    #[test]
    fn gain_ordering_over_grid() {
        let grid = [0.0, 0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0, 1e3, 1e4];
        for b in 1..8 {
            for b2 in (b + 1)..10 {
                for (i, &lo) in grid.iter().enumerate() {
                    for &hi in &grid[i + 1..] {
                        let d_hi =
                            quantized_snr_per_antenna(hi, b2) - quantized_snr_per_antenna(hi, b);
                        let d_lo =
                            quantized_snr_per_antenna(lo, b2) - quantized_snr_per_antenna(lo, b);
                        assert!(d_hi > d_lo, "b={b} b'={b2} lo={lo} hi={hi}");
                    }
                }
            }
        }
    }
}
