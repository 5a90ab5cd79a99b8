//! Canned experiment definitions reproducing the benchmark figures.
//!
//! Each preset pins the parameters that define its figure (element counts,
//! impairment levels, power split, sweep variable) and takes everything else
//! — geometry, trial budget, seed, evaluation mode — from the active config.

use uavris_core::Scheme;

use crate::config::{grid, ExperimentConfig, SweepVar};
use crate::rows::Engine;
use crate::runner::{EngineSet, RowUsers, Series};

const NON_IDEAL_K: f64 = 0.15;
const NON_IDEAL_CELLS: u32 = 3;

fn snr_grid(cfg: &ExperimentConfig) -> Vec<f64> {
    if cfg.sweep_var == SweepVar::Snr {
        cfg.sweep_values.clone()
    } else {
        grid(0.0, 5.0, 70.0)
    }
}

fn altitude_grid(cfg: &ExperimentConfig) -> Vec<f64> {
    if cfg.sweep_var == SweepVar::Altitude {
        cfg.sweep_values.clone()
    } else {
        grid(20.0, 10.0, 100.0)
    }
}

fn ris_series(
    experiment: &str,
    cfg: &ExperimentConfig,
    n_elements: usize,
    k: f64,
    cells: u32,
    eps2: f64,
) -> Series {
    let mut s = Series::noma(experiment, cfg);
    s.n_elements = n_elements;
    s.k = k;
    s.cells = cells;
    s.eps2 = eps2;
    s.sweep_var = SweepVar::Snr;
    s.values = snr_grid(cfg);
    s
}

fn no_ris_series(experiment: &str, cfg: &ExperimentConfig, k: f64, cells: u32) -> Series {
    let mut s = ris_series(experiment, cfg, 1, k, cells, 0.2);
    s.engines = EngineSet::NO_UPPER;
    s.analytic_engine = Engine::NoRisAnalytic;
    s.mc_engine = Engine::NoRisMc;
    s
}

/// SNR sweep under hardware impairments and inter-cell interference:
/// element counts 16/32/64 with the default power split, a 64-element curve
/// at the alternative split, and the single-path no-RIS baseline.
pub fn fig2(cfg: &ExperimentConfig) -> Vec<Series> {
    let mut series: Vec<Series> = [16, 32, 64]
        .iter()
        .map(|&n| ris_series("fig2", cfg, n, NON_IDEAL_K, NON_IDEAL_CELLS, 0.2))
        .collect();
    series.push(ris_series(
        "fig2",
        cfg,
        64,
        NON_IDEAL_K,
        NON_IDEAL_CELLS,
        0.1,
    ));
    series.push(no_ris_series("fig2", cfg, NON_IDEAL_K, NON_IDEAL_CELLS));
    series
}

/// SNR sweep contrasting ideal hardware with the impaired configuration for
/// element counts 16/32/64, plus the no-RIS baseline.
pub fn fig3(cfg: &ExperimentConfig) -> Vec<Series> {
    let mut series = Vec::new();
    for &n in &[16, 32, 64] {
        series.push(ris_series("fig3", cfg, n, NON_IDEAL_K, NON_IDEAL_CELLS, 0.2));
        series.push(ris_series("fig3", cfg, n, 0.0, 0, 0.2));
    }
    series.push(no_ris_series("fig3", cfg, NON_IDEAL_K, NON_IDEAL_CELLS));
    series
}

/// Altitude sweep of the system BER at a fixed SNR: both access schemes,
/// two line-of-sight probabilities, and the four impairment combinations.
pub fn fig4(cfg: &ExperimentConfig) -> Vec<Series> {
    let values = altitude_grid(cfg);
    let mut series = Vec::new();
    for &plos in &[0.1, 0.3] {
        for &(k, cells) in &[(0.0, 0), (NON_IDEAL_K, 0), (0.0, NON_IDEAL_CELLS), (NON_IDEAL_K, NON_IDEAL_CELLS)] {
            let mut noma = Series::noma("fig4", cfg);
            noma.n_elements = 32;
            noma.k = k;
            noma.cells = cells;
            noma.plos_override = Some(plos);
            noma.sweep_var = SweepVar::Altitude;
            noma.values = values.clone();
            noma.engines = EngineSet::NO_UPPER;
            noma.users = RowUsers::SystemOnly;
            let mut oma = noma.clone();
            oma.scheme = Scheme::Oma;
            oma.analytic_engine = Engine::OmaAnalytic;
            oma.mc_engine = Engine::OmaMc;
            series.push(noma);
            series.push(oma);
        }
    }
    series
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig2_spans_element_counts_power_splits_and_the_baseline() {
        let cfg = ExperimentConfig::default();
        let series = fig2(&cfg);
        assert_eq!(series.len(), 5);
        let counts: Vec<usize> = series.iter().map(|s| s.n_elements).collect();
        assert_eq!(counts, vec![16, 32, 64, 64, 1]);
        assert!(series.iter().all(|s| s.k == 0.15 && s.cells == 3));
        assert_eq!(series[3].eps2, 0.1);
        assert_eq!(series[4].analytic_engine, Engine::NoRisAnalytic);
        assert_eq!(series[0].values.len(), 15);
        assert_eq!(series[0].values[14], 70.0);
    }

    #[test]
    fn fig3_pairs_each_element_count_with_an_ideal_twin() {
        let cfg = ExperimentConfig::default();
        let series = fig3(&cfg);
        assert_eq!(series.len(), 7);
        let ideal: Vec<usize> = series
            .iter()
            .filter(|s| s.k == 0.0 && s.cells == 0)
            .map(|s| s.n_elements)
            .collect();
        assert_eq!(ideal, vec![16, 32, 64]);
    }

    #[test]
    fn fig4_covers_schemes_los_probabilities_and_impairment_corners() {
        let cfg = ExperimentConfig::default();
        let series = fig4(&cfg);
        assert_eq!(series.len(), 16);
        assert!(series.iter().all(|s| s.n_elements == 32));
        assert!(series.iter().all(|s| s.users == RowUsers::SystemOnly));
        assert!(series.iter().all(|s| s.sweep_var == SweepVar::Altitude));
        assert_eq!(series[0].values, grid(20.0, 10.0, 100.0));
        let oma = series.iter().filter(|s| s.scheme == Scheme::Oma).count();
        assert_eq!(oma, 8);
        let overrides: std::collections::BTreeSet<String> = series
            .iter()
            .map(|s| format!("{:?}", s.plos_override))
            .collect();
        assert_eq!(overrides.len(), 2);
    }

    #[test]
    fn a_matching_config_sweep_replaces_the_default_grid() {
        let mut cfg = ExperimentConfig {
            sweep_values: vec![10.0, 20.0],
            ..ExperimentConfig::default()
        };
        let series = fig2(&cfg);
        assert_eq!(series[0].values, vec![10.0, 20.0]);
        cfg.sweep_var = SweepVar::Altitude;
        cfg.sweep_values = vec![30.0];
        let series = fig2(&cfg);
        assert_eq!(series[0].values.len(), 15);
        let series = fig4(&cfg);
        assert_eq!(series[0].values, vec![30.0]);
    }
}
