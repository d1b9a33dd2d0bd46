//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;

use varres::linalg::CMatrix;
use varres::power::ResolutionLevels;

/// Largest singular value by power iteration on `H^H H`.
pub fn power_iteration(h: &CMatrix) -> f64 {
    let n = h.cols();
    let mut v: Vec<Complex64> = (0..n)
        .map(|k| Complex64::new(1.0, 0.1 * k as f64))
        .collect();
    let mut lambda = 0.0;
    for _ in 0..100_000 {
        let w = h.adjoint_mul_vec(&h.mul_vec(&v));
        let nw = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let next: Vec<Complex64> = w.into_iter().map(|z| z / nw).collect();
        let diff: f64 = next
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        v = next;
        let converged = (nw - lambda).abs() <= 1e-15 * nw && diff < 1e-13;
        lambda = nw;
        if converged {
            break;
        }
    }
    // Rayleigh quotient on the converged vector.
    let hv = h.mul_vec(&v);
    hv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn q(gamma: f64, eta: f64) -> f64 {
    (1.0 - eta) * gamma / (1.0 + eta * gamma)
}

/// Distortion factor written out from the published table and formula.
pub fn eta_oracle(b: u32) -> f64 {
    match b {
        0 => 1.0,
        1 => 0.3634,
        2 => 0.1175,
        3 => 0.03454,
        4 => 0.009497,
        5 => 0.002499,
        _ => std::f64::consts::PI * 3f64.sqrt() / 2.0 * 4f64.powi(-(b as i32)),
    }
}

pub fn quantized_sum(gamma: &[f64], bits: &[u32]) -> f64 {
    gamma
        .iter()
        .zip(bits)
        .map(|(&g, &b)| if b == 0 { 0.0 } else { q(g, eta_oracle(b)) })
        .sum()
}

/// Indices sorted strongest first, ties by index, via a full scan.
pub fn descending(gamma: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..gamma.len()).collect();
    // Insertion sort: stable by construction.
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && gamma[idx[j - 1]] < gamma[idx[j]] {
            idx.swap(j - 1, j);
            j -= 1;
        }
    }
    idx
}

/// Smallest `n` such that the top-`n` antennas at `b_high` plus the rest at
/// `b_low` reach `target`, found by evaluating every `n` from scratch.
pub fn min_high_exhaustive(gamma: &[f64], levels: &ResolutionLevels, target: f64) -> Option<usize> {
    let order = descending(gamma);
    (0..=gamma.len()).find(|&n| {
        let mut bits = vec![levels.b_low(); gamma.len()];
        for &i in &order[..n] {
            bits[i] = levels.b_high();
        }
        let s = quantized_sum(gamma, &bits);
        s >= target - 1e-12 * target.abs().max(1.0)
    })
}

/// Random allocator instance: `(gamma, levels)` with `N <= max_n` and
/// SNRs log-uniform over 1e-3..1e4.
pub fn random_instance<R: rand::Rng>(
    rng: &mut R,
    max_n: usize,
    allow_degenerate: bool,
) -> (Vec<f64>, ResolutionLevels) {
    let n = rng.random_range(1..=max_n);
    let gamma = (0..n)
        .map(|_| 10f64.powf(rng.random_range(-3.0..4.0)))
        .collect();
    loop {
        let b_low = rng.random_range(1..=8u32);
        let b_high = rng.random_range(b_low..=10);
        let b_ref = rng.random_range(b_low..=b_high);
        if !allow_degenerate && b_low == b_high {
            continue;
        }
        return (gamma, ResolutionLevels::new(b_ref, b_low, b_high).unwrap());
    }
}

/// Bits read along the strongest-first order never increase.
pub fn is_sorted_prefix(gamma: &[f64], bits: &[u32]) -> bool {
    let order = descending(gamma);
    order.windows(2).all(|w| bits[w[0]] >= bits[w[1]])
}
