//! Turns experiment descriptions into result rows.
//!
//! A [`Series`] fixes everything except the swept variable; the runner
//! resolves each sweep value into a concrete operating point, evaluates the
//! requested engines (closed-form average, closed-form upper bound,
//! Monte-Carlo), and emits the rows. Monte-Carlo trial streams are keyed by a
//! content hash of the physical point, so identical points reproduce
//! identical counts no matter which verb, ordering, or worker count produced
//! them.

use thiserror::Error;
use uavris_core::{
    ber_average, ber_system, ber_upper, clt_stats, run_point, AnalyticError, ChannelRealization,
    GeometryError, ImpairmentProfile, McError, PathLossParams, PowerAllocation, ScenarioGeometry,
    Scheme, SimPoint, TermTable, TransceiverError, User, VarianceTerms,
};

use crate::config::{ExperimentConfig, SweepVar};
use crate::rows::{CsvError, Engine, ResultRow};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Simulation(#[from] McError),
    #[error(transparent)]
    Transceiver(#[from] TransceiverError),
    #[error(transparent)]
    Csv(#[from] CsvError),
}

/// Which BER evaluations a series emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineSet {
    pub analytic: bool,
    pub mc: bool,
    /// Closed-form upper bound; emitted for the far user only, whose term
    /// table is all-positive so the bound argument applies.
    pub upper: bool,
}

impl EngineSet {
    pub const FULL: EngineSet = EngineSet {
        analytic: true,
        mc: true,
        upper: true,
    };
    pub const NO_UPPER: EngineSet = EngineSet {
        analytic: true,
        mc: true,
        upper: false,
    };
}

/// Which user rows a series emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowUsers {
    /// `u1` and `u2` rows.
    PerUser,
    /// A single `system` row (either user in error).
    SystemOnly,
    /// `u1`, `u2`, and `system` rows.
    All,
}

/// One curve of an experiment: everything fixed except the sweep variable.
#[derive(Debug, Clone)]
pub struct Series {
    pub experiment: String,
    pub scheme: Scheme,
    pub n_elements: usize,
    pub k: f64,
    pub cells: u32,
    pub eps2: f64,
    /// Replaces the config's LoS-probability override when set.
    pub plos_override: Option<f64>,
    /// Base SNR, used when the sweep variable is not SNR.
    pub snr_db: f64,
    pub sweep_var: SweepVar,
    pub values: Vec<f64>,
    pub engines: EngineSet,
    pub users: RowUsers,
    pub analytic_engine: Engine,
    pub mc_engine: Engine,
}

impl Series {
    /// A NOMA curve with the standard engine labels.
    pub fn noma(experiment: &str, cfg: &ExperimentConfig) -> Self {
        Series {
            experiment: experiment.to_string(),
            scheme: Scheme::Noma,
            n_elements: cfg.n_elements,
            k: cfg.k,
            cells: cfg.cells,
            eps2: cfg.eps2,
            plos_override: None,
            snr_db: cfg.snr_db,
            sweep_var: cfg.sweep_var,
            values: cfg.sweep_values.clone(),
            engines: EngineSet::FULL,
            users: RowUsers::PerUser,
            analytic_engine: Engine::Analytic,
            mc_engine: Engine::Mc,
        }
    }
}

/// A fully resolved operating point of one series.
struct PointParams {
    geometry: ScenarioGeometry,
    path_loss: PathLossParams,
    n_elements: usize,
    snr_db: f64,
    k: f64,
    cells: u32,
    alloc: PowerAllocation,
    profile: ImpairmentProfile,
    plos: f64,
    p_s: f64,
    point_id: u64,
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn resolve_point(
    cfg: &ExperimentConfig,
    series: &Series,
    value: f64,
) -> Result<PointParams, RunError> {
    let mut geometry = cfg.geometry.clone();
    let mut path_loss = cfg.path_loss.clone();
    if let Some(p) = series.plos_override {
        path_loss.plos_override = Some(p);
    }
    let mut n_elements = series.n_elements;
    let mut snr_db = series.snr_db;
    let mut k = series.k;
    let mut cells = series.cells;
    let mut eps2 = series.eps2;
    match series.sweep_var {
        SweepVar::Snr => snr_db = value,
        SweepVar::Altitude => geometry.uav.height = value,
        SweepVar::NElements => n_elements = value as usize,
        SweepVar::K => k = value,
        SweepVar::Cells => cells = value as u32,
        SweepVar::Eps2 => eps2 = value,
    }
    let p_s = 10f64.powf(snr_db / 10.0);
    let alloc = PowerAllocation::new(eps2).map_err(RunError::Transceiver)?;
    let profile =
        ImpairmentProfile::symmetric(k, cells as usize, p_s).map_err(RunError::Transceiver)?;
    let plos = path_loss.los_probability()?;
    // The id covers every physical input so that equal points share trial
    // streams and distinct points never collide by construction order.
    let g = &geometry;
    let descriptor = format!(
        "{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{:?}|{n_elements}|{snr_db:?}|{k:?}|{cells}|{eps2:?}|{:?}|{}|{}",
        g.uav.radius,
        g.uav.height,
        g.uav.angle,
        g.source,
        g.user1,
        g.user2,
        g.neighbor_source_distance,
        g.neighbor_user_distance,
        path_loss.exponent_slope,
        path_loss.exponent_offset,
        path_loss.env_scale,
        path_loss.env_rate,
        cfg.noise_var,
        series.scheme as u8,
        cfg.sic_replica,
    );
    let descriptor = format!(
        "{descriptor}|{:?}|{:?}|{plos:?}",
        path_loss.elevation, path_loss.plos_override
    );
    Ok(PointParams {
        geometry,
        path_loss,
        n_elements,
        snr_db,
        k,
        cells,
        alloc,
        profile,
        plos,
        p_s,
        point_id: fnv1a64(descriptor.as_bytes()),
    })
}

fn user_tag(user: User) -> String {
    user.to_string()
}

/// Runs one series and returns its rows, unsorted.
pub fn run_series(cfg: &ExperimentConfig, series: &Series) -> Result<Vec<ResultRow>, RunError> {
    let mut rows = Vec::new();
    for &value in &series.values {
        let p = resolve_point(cfg, series, value)?;
        let stats = clt_stats(p.n_elements, cfg.mode);
        let row = |user: &str, engine: Engine, ber: f64, ci: Option<(f64, f64)>| {
            ResultRow {
                experiment: series.experiment.clone(),
                user: user.to_string(),
                engine,
                mode: cfg.mode,
                sweep_var: series.sweep_var.as_str().to_string(),
                sweep_value: value,
                n_elements: p.n_elements,
                snr_db: p.snr_db,
                k: p.k,
                cells: p.cells,
                eps2: p.alloc.eps2(),
                plos: p.plos,
                ber,
                ci,
                trials: cfg.trials,
                seed: cfg.seed,
            }
            .quantized()
        };

        if series.engines.analytic || series.engines.upper {
            let psi1 = p.geometry.link_gain(&p.path_loss, User::U1)?;
            let psi2 = p.geometry.link_gain(&p.path_loss, User::U2)?;
            let iota = p.geometry.neighbor_link_gain(&p.path_loss)?;
            let mut per_user = [0.0f64; 2];
            for user in User::ALL {
                let psi = if user == User::U1 { psi1 } else { psi2 };
                let vt =
                    VarianceTerms::averaged(&stats, &p.profile, psi, iota, p.p_s, cfg.noise_var);
                let table = match series.scheme {
                    Scheme::Noma => TermTable::for_user(user, &p.alloc, cfg.mode),
                    Scheme::Oma => TermTable::single_stream(cfg.mode),
                };
                let ber = ber_average(&table, &stats, &vt, p.p_s)?;
                per_user[user as usize] = ber;
                if series.engines.analytic && series.users != RowUsers::SystemOnly {
                    rows.push(row(&user_tag(user), series.analytic_engine, ber, None));
                }
                if series.engines.upper && user == User::U1 && series.scheme == Scheme::Noma {
                    let bound = ber_upper(&table, &stats, &vt, p.p_s)?;
                    rows.push(row(&user_tag(user), Engine::Upper, bound, None));
                }
            }
            if series.engines.analytic && series.users != RowUsers::PerUser {
                let system = ber_system(per_user[0], per_user[1])?;
                rows.push(row("system", series.analytic_engine, system, None));
            }
        }

        if series.engines.mc {
            let point = SimPoint {
                point_id: p.point_id,
                master_seed: cfg.seed,
                trials: cfg.trials,
                snr_db: p.snr_db,
                noise_var: cfg.noise_var,
                n_elements: p.n_elements,
                alloc: p.alloc,
                profile: p.profile.clone(),
                geometry: p.geometry.clone(),
                path_loss: p.path_loss.clone(),
                sic_replica: cfg.sic_replica,
                scheme: series.scheme,
                channel: ChannelRealization::Random,
            };
            let estimate = run_point(&point)?;
            if series.users != RowUsers::SystemOnly {
                for user in User::ALL {
                    rows.push(row(
                        &user_tag(user),
                        series.mc_engine,
                        estimate.ber(user),
                        Some(estimate.ci(user)),
                    ));
                }
            }
            if series.users != RowUsers::PerUser {
                rows.push(row(
                    "system",
                    series.mc_engine,
                    estimate.ber_system(),
                    Some(estimate.ci_system()),
                ));
            }
        }
    }
    Ok(rows)
}

/// Runs a set of series and returns all rows in emission order.
pub fn run_all(cfg: &ExperimentConfig, series: &[Series]) -> Result<Vec<ResultRow>, RunError> {
    let mut rows = Vec::new();
    for s in series {
        rows.extend(run_series(cfg, s)?);
    }
    crate::rows::sort_rows(&mut rows);
    Ok(rows)
}

/// Rows for the `point` verb: one operating point, every engine and user.
pub fn point_rows(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>, RunError> {
    let mut series = Series::noma("point", cfg);
    series.sweep_var = SweepVar::Snr;
    series.values = vec![cfg.snr_db];
    series.users = RowUsers::All;
    run_all(cfg, &[series])
}

/// Rows for the `sweep` verb: the config's sweep, every engine and user.
pub fn sweep_rows(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>, RunError> {
    let mut series = Series::noma("sweep", cfg);
    series.users = RowUsers::All;
    run_all(cfg, &[series])
}
