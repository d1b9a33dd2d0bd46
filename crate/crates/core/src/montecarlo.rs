//! Seeded Monte Carlo sweeps.
//!
//! Trial `t` always draws its channel from the stream `(master_seed, t)`, so
//! every cell of a sweep (SNR point, level pair, algorithm) sees the same
//! channel realizations, and results do not depend on how trials are
//! scheduled across workers. Per-cell means are accumulated in trial order
//! with compensated summation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alloc::{allocate, reference_snr, Algorithm};
use crate::channel::{
    draw_channel, ArrayGeometry, ChannelRealization, ClusterModelParams, SignatureNorm,
};
use crate::error::{Error, Result};
use crate::power::{max_high_count, total_power, PowerModel, ResolutionLevels};
use crate::quantize::{per_antenna_unquantized_snr, spectral_efficiency};
use crate::sum::NeumaierSum;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n_tx: usize,
    pub n_rx: usize,
    /// Array element spacing in wavelengths, both ends.
    pub element_spacing: f64,
    pub signature_norm: SignatureNorm,
    pub bandwidth: f64,
    pub walden_fom: f64,
    pub snr_grid_db: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    pub b_ref: u32,
    /// `(b_low, b_high)` pairs.
    pub level_pairs: Vec<(u32, u32)>,
    pub algorithms: Vec<Algorithm>,
    pub channel: ClusterModelParams,
}

/// `start, start + step, ..., stop` inclusive.
pub fn snr_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step).round() as i64;
    (0..=n).map(|k| start + step * k as f64).collect()
}

/// Default `(b_low, b_high)` pairs.
pub const DEFAULT_PAIRS: [(u32, u32); 5] = [(1, 8), (2, 8), (4, 8), (2, 6), (4, 6)];

impl Default for SweepConfig {
    /// GBA, `Nr = 64`, `b_ref = 5`, -20..30 dB in 5 dB steps, 1000 trials.
    fn default() -> Self {
        Self {
            n_tx: 4,
            n_rx: 64,
            element_spacing: 0.5,
            signature_norm: SignatureNorm::UnitModulus,
            bandwidth: crate::power::DEFAULT_BANDWIDTH,
            walden_fom: crate::power::DEFAULT_WALDEN_FOM,
            snr_grid_db: snr_grid(-20.0, 30.0, 5.0),
            trials: 1000,
            master_seed: 1,
            b_ref: 5,
            level_pairs: DEFAULT_PAIRS.to_vec(),
            algorithms: vec![Algorithm::Gba],
            channel: ClusterModelParams::default(),
        }
    }
}

impl SweepConfig {
    pub fn tx_geometry(&self) -> Result<ArrayGeometry> {
        Ok(ArrayGeometry::new(self.n_tx, self.element_spacing)?.with_norm(self.signature_norm))
    }

    pub fn rx_geometry(&self) -> Result<ArrayGeometry> {
        Ok(ArrayGeometry::new(self.n_rx, self.element_spacing)?.with_norm(self.signature_norm))
    }

    pub fn power_model(&self) -> Result<PowerModel> {
        PowerModel::new(self.walden_fom, self.bandwidth)
    }

    /// Checks the configuration and returns the validated level sets in
    /// `level_pairs` order.
    pub fn validate(&self) -> Result<Vec<ResolutionLevels>> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.snr_grid_db.is_empty() {
            return Err(Error::InvalidParameter("SNR grid is empty".into()));
        }
        if let Some(x) = self
            .snr_grid_db
            .iter()
            .find(|x| x.is_nan() || **x == f64::INFINITY)
        {
            return Err(Error::InvalidParameter(format!(
                "invalid SNR grid value {x}"
            )));
        }
        if self.level_pairs.is_empty() {
            return Err(Error::InvalidParameter("no level pairs".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::InvalidParameter("no algorithms selected".into()));
        }
        self.tx_geometry()?;
        self.rx_geometry()?;
        self.power_model()?;
        self.channel.validate()?;
        let levels = self
            .level_pairs
            .iter()
            .map(|&(lo, hi)| ResolutionLevels::new(self.b_ref, lo, hi))
            .collect::<Result<Vec<_>>>()?;
        if self.algorithms.contains(&Algorithm::Gasba) {
            if let Some(l) = levels.iter().find(|l| l.is_degenerate()) {
                return Err(Error::DegenerateLevelPair(l.b_high()));
            }
        }
        Ok(levels)
    }
}

/// How trials are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses the ambient rayon pool; falls back to sequential when the
    /// `parallel` feature is disabled.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Independent random stream for one trial.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

/// `10^(db/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub xi: f64,
    pub achieved_q_snr: f64,
    pub reference_q_snr: f64,
    pub se_reference: f64,
    pub se_variable: f64,
    pub matched: bool,
    pub n_high: usize,
    pub n_on: usize,
    /// Absolute ADC power of the variable receiver, watts.
    pub power_w: f64,
}

fn draw_trial_channel(config: &SweepConfig, trial_index: u64) -> Result<ChannelRealization> {
    let mut rng = trial_rng(config.master_seed, trial_index);
    draw_channel(
        &config.channel,
        &config.tx_geometry()?,
        &config.rx_geometry()?,
        &mut rng,
    )
}

fn evaluate(
    gamma: &[f64],
    gamma_ref: f64,
    levels: &ResolutionLevels,
    algorithm: Algorithm,
    power: &PowerModel,
    trial_index: u64,
) -> Result<TrialRecord> {
    let out = allocate(algorithm, gamma, levels, gamma_ref)?;
    Ok(TrialRecord {
        trial_index,
        xi: out.xi,
        achieved_q_snr: out.achieved_q_snr,
        reference_q_snr: gamma_ref,
        se_reference: spectral_efficiency(gamma_ref),
        se_variable: spectral_efficiency(out.achieved_q_snr),
        matched: out.matched,
        n_high: out.allocation.n_high(),
        n_on: out.allocation.n_on(),
        power_w: total_power(&out.allocation, power),
    })
}

/// One trial of one cell, drawing its own channel.
pub fn run_trial(
    config: &SweepConfig,
    snr_db: f64,
    pair: (u32, u32),
    algorithm: Algorithm,
    trial_index: u64,
) -> Result<TrialRecord> {
    let levels = ResolutionLevels::new(config.b_ref, pair.0, pair.1)?;
    if algorithm == Algorithm::Gasba {
        max_high_count(config.n_rx, &levels)?;
    }
    let channel = draw_trial_channel(config, trial_index)?;
    let gamma = per_antenna_unquantized_snr(&channel, db_to_linear(snr_db));
    let gamma_ref = reference_snr(&gamma, config.b_ref);
    evaluate(
        &gamma,
        gamma_ref,
        &levels,
        algorithm,
        &config.power_model()?,
        trial_index,
    )
}

/// Aggregated results of one `(snr, pair, algorithm)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub snr_db: f64,
    pub algorithm: Algorithm,
    pub b_ref: u32,
    pub b_low: u32,
    pub b_high: u32,
    pub n_rx: usize,
    pub mean_xi: f64,
    pub mean_se_ref: f64,
    pub mean_se_var: f64,
    pub match_rate: f64,
    pub mean_n_high: f64,
    pub mean_n_on: f64,
    pub mean_power_w: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub rows: Vec<SweepRow>,
}

impl SweepSummary {
    pub fn find(&self, algorithm: Algorithm, pair: (u32, u32), snr_db: f64) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.algorithm == algorithm && (r.b_low, r.b_high) == pair && r.snr_db == snr_db)
    }
}

/// Every cell of one trial, in `(snr, pair, algorithm)` order.
fn trial_cells(
    config: &SweepConfig,
    levels: &[ResolutionLevels],
    power: &PowerModel,
    trial_index: u64,
) -> Result<Vec<TrialRecord>> {
    let channel = draw_trial_channel(config, trial_index)?;
    let mut out =
        Vec::with_capacity(config.snr_grid_db.len() * levels.len() * config.algorithms.len());
    for &snr_db in &config.snr_grid_db {
        let gamma = per_antenna_unquantized_snr(&channel, db_to_linear(snr_db));
        let gamma_ref = reference_snr(&gamma, config.b_ref);
        for l in levels {
            for &alg in &config.algorithms {
                out.push(evaluate(&gamma, gamma_ref, l, alg, power, trial_index)?);
            }
        }
    }
    Ok(out)
}

fn map_trials<T, F>(trials: usize, execution: Execution, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..trials as u64).into_par_iter().map(f).collect()
        }
        _ => (0..trials as u64).map(f).collect(),
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepSummary> {
    run_sweep_with(config, Execution::default())
}

pub fn run_sweep_with(config: &SweepConfig, execution: Execution) -> Result<SweepSummary> {
    let levels = config.validate()?;
    let power = config.power_model()?;
    let per_trial = map_trials(config.trials, execution, |t| {
        trial_cells(config, &levels, &power, t)
    })?;

    let mut rows = Vec::new();
    let mut cell = 0;
    for &snr_db in &config.snr_grid_db {
        for l in &levels {
            for &alg in &config.algorithms {
                rows.push(aggregate_cell(
                    config,
                    snr_db,
                    l,
                    alg,
                    per_trial.iter().map(|t| &t[cell]),
                ));
                cell += 1;
            }
        }
    }
    Ok(SweepSummary { rows })
}

fn aggregate_cell<'a>(
    config: &SweepConfig,
    snr_db: f64,
    levels: &ResolutionLevels,
    algorithm: Algorithm,
    records: impl Iterator<Item = &'a TrialRecord>,
) -> SweepRow {
    let mut xi = NeumaierSum::new();
    let mut se_ref = NeumaierSum::new();
    let mut se_var = NeumaierSum::new();
    let mut n_high = NeumaierSum::new();
    let mut n_on = NeumaierSum::new();
    let mut power = NeumaierSum::new();
    let mut matched = 0usize;
    let mut count = 0usize;
    for r in records {
        xi.add(r.xi);
        se_ref.add(r.se_reference);
        se_var.add(r.se_variable);
        n_high.add(r.n_high as f64);
        n_on.add(r.n_on as f64);
        power.add(r.power_w);
        matched += r.matched as usize;
        count += 1;
    }
    let n = count as f64;
    SweepRow {
        snr_db,
        algorithm,
        b_ref: levels.b_ref(),
        b_low: levels.b_low(),
        b_high: levels.b_high(),
        n_rx: config.n_rx,
        mean_xi: xi.value() / n,
        mean_se_ref: se_ref.value() / n,
        mean_se_var: se_var.value() / n,
        match_rate: matched as f64 / n,
        mean_n_high: n_high.value() / n,
        mean_n_on: n_on.value() / n,
        mean_power_w: power.value() / n,
        trials: count,
    }
}

/// How often the dominant eigenmode carries more than half and more than
/// three quarters of the channel energy.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenStats {
    pub draws: usize,
    pub p_over_half: f64,
    pub p_over_three_quarters: f64,
    pub mean_fraction: f64,
}

impl EigenStats {
    fn std_err(p: f64, n: usize) -> f64 {
        (p * (1.0 - p) / n as f64).sqrt()
    }

    pub fn std_err_half(&self) -> f64 {
        Self::std_err(self.p_over_half, self.draws)
    }

    pub fn std_err_three_quarters(&self) -> f64 {
        Self::std_err(self.p_over_three_quarters, self.draws)
    }
}

/// Draws `draws` channels from the configured model (trial streams
/// `0..draws`, the same realizations a sweep would use).
pub fn summarize_eigen_stats(
    config: &SweepConfig,
    draws: usize,
    execution: Execution,
) -> Result<EigenStats> {
    if draws == 0 {
        return Err(Error::NoDraws);
    }
    config.channel.validate()?;
    let fractions = map_trials(draws, execution, |t| {
        draw_trial_channel(config, t).map(|c| c.dominant_energy_fraction)
    })?;
    let n = fractions.len() as f64;
    let over = |x: f64| fractions.iter().filter(|&&f| f > x).count() as f64 / n;
    Ok(EigenStats {
        draws,
        p_over_half: over(0.5),
        p_over_three_quarters: over(0.75),
        mean_fraction: fractions.iter().copied().collect::<NeumaierSum>().value() / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> SweepConfig {
        SweepConfig {
            n_rx: 16,
            trials: 6,
            snr_grid_db: vec![-10.0, 0.0, 10.0],
            level_pairs: vec![(4, 6), (1, 8)],
            algorithms: vec![Algorithm::Gba, Algorithm::Gasba],
            ..Default::default()
        }
    }

    #[test]
    fn grid_helper() {
        assert_eq!(snr_grid(-20.0, 20.0, 5.0).len(), 9);
        assert_eq!(snr_grid(-20.0, 30.0, 5.0).last(), Some(&30.0));
    }

    #[test]
    fn db_conversion() {
        assert_eq!(db_to_linear(0.0), 1.0);
        assert!((db_to_linear(20.0) - 100.0).abs() < 1e-12);
        assert_eq!(db_to_linear(f64::NEG_INFINITY), 0.0);
    }

    #[test]
    fn trial_is_deterministic() {
        let c = small_config();
        let a = run_trial(&c, 5.0, (4, 6), Algorithm::Gasba, 3).unwrap();
        let b = run_trial(&c, 5.0, (4, 6), Algorithm::Gasba, 3).unwrap();
        assert_eq!(a, b);
        assert!(
            run_trial(&c, 5.0, (4, 6), Algorithm::Gba, 3)
                .unwrap()
                .matched
        );
    }

    #[test]
    fn silent_link_turns_everything_off() {
        let c = small_config();
        let r = run_trial(&c, f64::NEG_INFINITY, (4, 6), Algorithm::Gasba, 0).unwrap();
        assert_eq!(r.reference_q_snr, 0.0);
        assert_eq!(r.n_on, 0);
        assert_eq!(r.xi, 0.0);
    }

    #[test]
    fn sweep_matches_individual_trials() {
        let c = small_config();
        let s = run_sweep_with(&c, Execution::Sequential).unwrap();
        assert_eq!(s.rows.len(), 3 * 2 * 2);
        let row = s.find(Algorithm::Gasba, (1, 8), 10.0).unwrap();
        let recs: Vec<_> = (0..c.trials as u64)
            .map(|t| run_trial(&c, 10.0, (1, 8), Algorithm::Gasba, t).unwrap())
            .collect();
        let mean_xi =
            recs.iter().map(|r| r.xi).collect::<NeumaierSum>().value() / recs.len() as f64;
        assert_eq!(row.mean_xi, mean_xi);
    }

    #[test]
    fn single_trial_summary_is_that_trial() {
        let c = SweepConfig {
            trials: 1,
            snr_grid_db: vec![0.0],
            level_pairs: vec![(2, 6)],
            ..small_config()
        };
        let s = run_sweep(&c).unwrap();
        let r = run_trial(&c, 0.0, (2, 6), Algorithm::Gba, 0).unwrap();
        let row = s.find(Algorithm::Gba, (2, 6), 0.0).unwrap();
        assert_eq!(row.mean_xi, r.xi);
        assert_eq!(row.mean_se_ref, r.se_reference);
        assert_eq!(row.mean_se_var, r.se_variable);
        assert_eq!(row.mean_n_high, r.n_high as f64);
        assert_eq!(row.trials, 1);
    }

    #[test]
    fn reference_pair_gives_unit_power() {
        let c = SweepConfig {
            level_pairs: vec![(5, 5)],
            algorithms: vec![Algorithm::Gba],
            ..small_config()
        };
        let s = run_sweep(&c).unwrap();
        assert!(s
            .rows
            .iter()
            .all(|r| r.mean_xi == 1.0 && r.match_rate == 1.0));
    }

    #[test]
    fn parallel_equals_sequential() {
        let c = small_config();
        assert_eq!(
            run_sweep_with(&c, Execution::Sequential).unwrap(),
            run_sweep_with(&c, Execution::Parallel).unwrap()
        );
    }

    #[test]
    fn config_validation() {
        let mut c = small_config();
        c.trials = 0;
        assert!(c.validate().is_err());
        let mut c = small_config();
        c.level_pairs = vec![(6, 8)];
        assert!(matches!(c.validate(), Err(Error::LevelOrder { .. })));
        let mut c = small_config();
        c.level_pairs = vec![(5, 5)];
        assert_eq!(c.validate(), Err(Error::DegenerateLevelPair(5)));
        let mut c = small_config();
        c.snr_grid_db.clear();
        assert!(c.validate().is_err());
    }

    #[test]
    fn eigen_stats_rank_one_and_errors() {
        let mut c = small_config();
        c.channel.num_clusters = 1;
        c.channel.paths_per_cluster = 1;
        let s = summarize_eigen_stats(&c, 50, Execution::default()).unwrap();
        assert_eq!(s.p_over_half, 1.0);
        assert_eq!(s.p_over_three_quarters, 1.0);
        assert_eq!(
            summarize_eigen_stats(&c, 0, Execution::default()),
            Err(Error::NoDraws)
        );
    }
}
