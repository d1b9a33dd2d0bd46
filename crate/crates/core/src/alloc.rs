//! Fixed-resolution reference and the two greedy bit allocators.
//!
//! Both allocators visit antennas strongest-first (descending unquantized
//! SNR, ties broken by ascending antenna index):
//!
//! * [`gba`] keeps every antenna on, starts everyone at `b_low`, and upgrades
//!   antennas to `b_high` one at a time until the quantized SNR of the
//!   reference receiver is reached.
//! * [`gasba`] starts with every antenna off and switches them on one at a
//!   time, at `b_high` while the power budget allows and at `b_low`
//!   afterwards, until the reference is reached or every antenna is on.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::power::{max_high_count, normalized_power_from_counts, BitAllocation, ResolutionLevels};
use crate::quantize::quantized_snr_per_antenna;
use crate::sum::NeumaierSum;

/// Relative slack used when comparing an achieved SNR against the reference.
/// Sums of a few hundred terms carry rounding far above a fixed 1e-12
/// absolute slack once SNRs reach 1e4, so the slack scales with the target.
pub const MATCH_SLACK: f64 = 1e-12;

/// `achieved >= target` up to [`MATCH_SLACK`].
pub fn meets_reference(achieved: f64, target: f64) -> bool {
    achieved >= target - MATCH_SLACK * target.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Gba,
    Gasba,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Gba => "GBA",
            Algorithm::Gasba => "GASBA",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gba" => Ok(Algorithm::Gba),
            "gasba" => Ok(Algorithm::Gasba),
            other => Err(Error::InvalidParameter(format!(
                "unknown algorithm '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocOutcome {
    pub allocation: BitAllocation,
    pub achieved_q_snr: f64,
    pub reference_q_snr: f64,
    pub matched: bool,
    pub xi: f64,
}

/// Quantized SNR of the all-`b_ref` receiver on this realization.
pub fn reference_snr(gamma: &[f64], b_ref: u32) -> f64 {
    gamma
        .iter()
        .map(|&g| quantized_snr_per_antenna(g, b_ref))
        .collect::<NeumaierSum>()
        .value()
}

/// Antenna indices by descending SNR; equal SNRs keep ascending index order.
pub fn strength_order(gamma: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..gamma.len()).collect();
    order.sort_by(|&a, &b| gamma[b].partial_cmp(&gamma[a]).unwrap_or(Ordering::Equal));
    order
}

fn validate_gamma(gamma: &[f64]) -> Result<()> {
    if gamma.is_empty() {
        return Err(Error::InvalidParameter("no antennas".into()));
    }
    if let Some(g) = gamma.iter().find(|g| !g.is_finite() || **g < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "per-antenna SNR must be finite and non-negative, got {g}"
        )));
    }
    Ok(())
}

/// Greedy Bit Allocation.
pub fn gba(gamma: &[f64], levels: &ResolutionLevels, gamma_ref: f64) -> Result<AllocOutcome> {
    validate_gamma(gamma)?;
    let (b_low, b_high) = (levels.b_low(), levels.b_high());
    let order = strength_order(gamma);
    let mut bits = vec![b_low; gamma.len()];

    let mut achieved: NeumaierSum = order
        .iter()
        .map(|&i| quantized_snr_per_antenna(gamma[i], b_low))
        .collect();
    let mut next = order.iter();
    while !meets_reference(achieved.value(), gamma_ref) {
        let Some(&i) = next.next() else {
            return Err(Error::UnreachableReference {
                achieved: achieved.value(),
                target: gamma_ref,
            });
        };
        achieved.add(
            quantized_snr_per_antenna(gamma[i], b_high)
                - quantized_snr_per_antenna(gamma[i], b_low),
        );
        bits[i] = b_high;
    }

    let allocation = BitAllocation::variable(bits, levels)?;
    let xi =
        normalized_power_from_counts(allocation.n_high(), allocation.n_on(), gamma.len(), levels)?;
    Ok(AllocOutcome {
        achieved_q_snr: achieved.value(),
        reference_q_snr: gamma_ref,
        matched: true,
        xi,
        allocation,
    })
}

/// Greedy Antenna Selection and Bit Allocation.
pub fn gasba(gamma: &[f64], levels: &ResolutionLevels, gamma_ref: f64) -> Result<AllocOutcome> {
    validate_gamma(gamma)?;
    let n = gamma.len();
    let cap = max_high_count(n, levels)?;
    let order = strength_order(gamma);
    let mut bits = vec![0; n];
    let mut n_high = 0;

    let mut achieved = NeumaierSum::new();
    for &i in &order {
        if meets_reference(achieved.value(), gamma_ref) {
            break;
        }
        let b = if n_high < cap {
            n_high += 1;
            levels.b_high()
        } else {
            levels.b_low()
        };
        bits[i] = b;
        achieved.add(quantized_snr_per_antenna(gamma[i], b));
    }

    let allocation = BitAllocation::variable(bits, levels)?;
    let xi = normalized_power_from_counts(allocation.n_high(), allocation.n_on(), n, levels)?;
    let achieved_q_snr = achieved.value();
    Ok(AllocOutcome {
        matched: meets_reference(achieved_q_snr, gamma_ref),
        achieved_q_snr,
        reference_q_snr: gamma_ref,
        xi,
        allocation,
    })
}

pub fn allocate(
    algorithm: Algorithm,
    gamma: &[f64],
    levels: &ResolutionLevels,
    gamma_ref: f64,
) -> Result<AllocOutcome> {
    match algorithm {
        Algorithm::Gba => gba(gamma, levels, gamma_ref),
        Algorithm::Gasba => gasba(gamma, levels, gamma_ref),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(b_ref: u32, b_low: u32, b_high: u32) -> ResolutionLevels {
        ResolutionLevels::new(b_ref, b_low, b_high).unwrap()
    }

    #[test]
    fn reference_snr_examples() {
        assert_eq!(reference_snr(&[0.0; 8], 5), 0.0);
        let r = reference_snr(&[4.0, 1.0], 2);
        assert!((r - 3.191069716477195).abs() < 1e-12, "{r}");
        let g = [3.0, 0.5, 7.0];
        assert!((reference_snr(&g, 15) - 10.5).abs() < 1e-6);
    }

    #[test]
    fn gba_two_antenna_trace() {
        let gamma = [4.0, 1.0];
        let r = reference_snr(&gamma, 2);
        let out = gba(&gamma, &lv(2, 1, 3), r).unwrap();
        assert_eq!(out.allocation.bits(), &[3, 1]);
        assert_eq!(out.allocation.n_high(), 1);
        assert!((out.achieved_q_snr - 3.859976390893814).abs() < 1e-12);
        assert!(out.matched);
        assert!(out.achieved_q_snr >= r);
    }

    #[test]
    fn gba_low_equal_ref_stops_immediately() {
        let gamma = [0.3, 12.0, 5.5, 0.01, 7.25, 3.3];
        let r = reference_snr(&gamma, 4);
        let out = gba(&gamma, &lv(4, 4, 6), r).unwrap();
        assert_eq!(out.allocation.n_high(), 0);
        assert_eq!(out.xi, 1.0);
    }

    #[test]
    fn gba_degenerate_pair_upgrades_nothing() {
        let gamma = [2.0, 77.0, 470.0];
        let out = gba(&gamma, &lv(6, 6, 6), reference_snr(&gamma, 6)).unwrap();
        assert_eq!(out.allocation.n_high(), 0);
        assert_eq!(out.allocation.n_on(), 3);
        assert_eq!(out.xi, 1.0);
    }

    #[test]
    fn gba_unreachable_reference() {
        let gamma = [1.0, 2.0];
        let err = gba(&gamma, &lv(3, 1, 3), 100.0).unwrap_err();
        assert!(matches!(err, Error::UnreachableReference { .. }));
    }

    #[test]
    fn gasba_zero_reference_activates_nothing() {
        let out = gasba(&[1.0, 2.0, 3.0], &lv(5, 4, 6), 0.0).unwrap();
        assert_eq!(out.allocation.n_on(), 0);
        assert_eq!(out.xi, 0.0);
        assert!(out.matched);
    }

    #[test]
    fn gasba_two_antenna_trace() {
        let gamma = [4.0, 1.0];
        let r = reference_snr(&gamma, 2);
        let out = gasba(&gamma, &lv(2, 1, 3), r).unwrap();
        assert_eq!(out.allocation.bits(), &[1, 1]);
        assert!((out.achieved_q_snr - 1.5047429088339015).abs() < 1e-12);
        assert!(!out.matched);
        assert_eq!(out.xi, 0.5);
    }

    #[test]
    fn gasba_saturated_antennas_use_only_high() {
        let gamma = vec![1e12; 64];
        let l = lv(5, 4, 6);
        let r = reference_snr(&gamma, 5);
        let out = gasba(&gamma, &l, r).unwrap();
        assert!(out.matched);
        assert_eq!(out.allocation.n_on(), out.allocation.n_high());
        assert!(out.allocation.n_on() < 64);
        assert!(out.xi < 1.0);
    }

    #[test]
    fn gasba_degenerate_pair() {
        assert_eq!(
            gasba(&[1.0], &lv(5, 5, 5), 1.0).unwrap_err(),
            Error::DegenerateLevelPair(5)
        );
    }

    #[test]
    fn strength_order_is_stable() {
        assert_eq!(
            strength_order(&[1.0, 3.0, 1.0, 3.0, 2.0]),
            vec![1, 3, 4, 0, 2]
        );
    }

    #[test]
    fn rejects_bad_gamma() {
        assert!(gba(&[], &lv(5, 4, 6), 0.0).is_err());
        assert!(gba(&[f64::NAN], &lv(5, 4, 6), 0.0).is_err());
        assert!(gasba(&[-1.0], &lv(5, 4, 6), 0.0).is_err());
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in [Algorithm::Gba, Algorithm::Gasba] {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("foo".parse::<Algorithm>().is_err());
    }
}
