//! Flat-key experiment configuration files.
//!
//! A config file is a list of `section.key = value` lines with `#` comments.
//! Every key has a benchmark default, so an empty file is a complete,
//! runnable configuration. Errors carry the offending line number.

use std::f64::consts::FRAC_PI_4;
use std::str::FromStr;

use thiserror::Error;
use uavris_core::{
    EvalMode, PathLossParams, Position3, ScenarioGeometry, SicReplica, UavPlacement,
};

/// Quantity swept by the `sweep` verb and by the figure presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    Snr,
    Altitude,
    NElements,
    K,
    Cells,
    Eps2,
}

impl SweepVar {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepVar::Snr => "snr",
            SweepVar::Altitude => "altitude",
            SweepVar::NElements => "n_elements",
            SweepVar::K => "k",
            SweepVar::Cells => "L",
            SweepVar::Eps2 => "eps2",
        }
    }
}

impl FromStr for SweepVar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "snr" => Ok(SweepVar::Snr),
            "altitude" => Ok(SweepVar::Altitude),
            "n_elements" => Ok(SweepVar::NElements),
            "k" => Ok(SweepVar::K),
            "L" | "l" | "cells" => Ok(SweepVar::Cells),
            "eps2" => Ok(SweepVar::Eps2),
            other => Err(format!(
                "unknown sweep variable `{other}` (expected snr, altitude, n_elements, k, L, or eps2)"
            )),
        }
    }
}

/// A fully resolved experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub geometry: ScenarioGeometry,
    pub path_loss: PathLossParams,
    /// Symmetric hardware-impairment level applied at both transmit and
    /// receive sides of every node.
    pub k: f64,
    /// Number of interfering neighbor cells.
    pub cells: u32,
    /// Power fraction of the near user's stream.
    pub eps2: f64,
    pub n_elements: usize,
    pub snr_db: f64,
    pub noise_var: f64,
    pub mode: EvalMode,
    pub sic_replica: SicReplica,
    pub trials: u64,
    pub seed: u64,
    pub sweep_var: SweepVar,
    pub sweep_values: Vec<f64>,
    /// Output path from the config file, if any; verb defaults apply otherwise.
    pub output: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            geometry: ScenarioGeometry {
                uav: UavPlacement {
                    radius: 5.0,
                    height: 20.0,
                    angle: FRAC_PI_4,
                },
                source: Position3::new(-5.0, 0.0, 0.0),
                user1: Position3::new(10.0, 0.0, -10.0),
                user2: Position3::new(5.0, 0.0, 5.0),
                neighbor_source_distance: 100.0,
                neighbor_user_distance: 100.0,
            },
            path_loss: PathLossParams {
                exponent_slope: -1.5,
                exponent_offset: 3.5,
                env_scale: 2.0,
                env_rate: 0.16,
                elevation: 1.2,
                plos_override: None,
            },
            k: 0.15,
            cells: 3,
            eps2: 0.2,
            n_elements: 32,
            snr_db: 50.0,
            noise_var: 1.0,
            mode: EvalMode::Consistent,
            sic_replica: SicReplica::Corrected,
            trials: 100_000,
            seed: 42,
            sweep_var: SweepVar::Snr,
            sweep_values: grid(0.0, 5.0, 70.0),
            output: None,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `section.key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: ambiguous key `{key}` (candidates: {candidates})")]
    AmbiguousKey {
        line: usize,
        key: String,
        candidates: String,
    },
    #[error("line {line}: invalid value for `{key}`: {message}")]
    InvalidValue {
        line: usize,
        key: String,
        message: String,
    },
    #[error("line {line}: `{key} = {value}` violates {constraint}")]
    Invariant {
        line: usize,
        key: String,
        value: String,
        constraint: String,
    },
}

const KEYS: [&str; 30] = [
    "geometry.radius",
    "geometry.height",
    "geometry.angle",
    "geometry.source_x",
    "geometry.source_y",
    "geometry.source_z",
    "geometry.user1_x",
    "geometry.user1_y",
    "geometry.user1_z",
    "geometry.user2_x",
    "geometry.user2_y",
    "geometry.user2_z",
    "geometry.neighbor_source_distance",
    "geometry.neighbor_user_distance",
    "pathloss.exponent_slope",
    "pathloss.exponent_offset",
    "pathloss.env_scale",
    "pathloss.env_rate",
    "pathloss.elevation",
    "pathloss.plos_override",
    "impairment.k",
    "impairment.cells",
    "allocation.eps2",
    "model.n_elements",
    "model.snr_db",
    "model.noise_var",
    "engine.mode",
    "engine.trials",
    "engine.seed",
    "engine.sic_replica",
];

const SWEEP_KEYS: [&str; 2] = ["sweep.variable", "sweep.grid"];

/// Default grid used when a sweep variable is chosen without an explicit
/// `sweep.grid`.
pub fn default_grid(var: SweepVar) -> Vec<f64> {
    match var {
        SweepVar::Snr => grid(0.0, 5.0, 70.0),
        SweepVar::Altitude => grid(20.0, 10.0, 100.0),
        SweepVar::NElements => vec![16.0, 32.0, 64.0, 128.0],
        SweepVar::K => grid(0.0, 0.05, 0.3),
        SweepVar::Cells => grid(0.0, 1.0, 6.0),
        SweepVar::Eps2 => grid(0.05, 0.05, 0.45),
    }
}

/// Inclusive `start:step:stop` grid.
pub fn grid(start: f64, step: f64, stop: f64) -> Vec<f64> {
    let mut values = Vec::new();
    let mut i = 0u32;
    loop {
        let v = start + step * f64::from(i);
        if (step > 0.0 && v > stop + 1e-9 * step.abs())
            || (step < 0.0 && v < stop - 1e-9 * step.abs())
        {
            break;
        }
        values.push(v);
        i += 1;
        if i > 1_000_000 {
            break;
        }
    }
    values
}

fn parse_grid(value: &str) -> Result<Vec<f64>, String> {
    let parse_num = |s: &str| -> Result<f64, String> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| format!("`{}` is not a number", s.trim()))?;
        if !v.is_finite() {
            return Err(format!("`{}` is not finite", s.trim()));
        }
        Ok(v)
    };
    let parts: Vec<&str> = value.split(':').collect();
    let values = match parts.len() {
        3 => {
            let (start, step, stop) = (parse_num(parts[0])?, parse_num(parts[1])?, parse_num(parts[2])?);
            if step == 0.0 {
                return Err("grid step must be nonzero".into());
            }
            if (stop - start) * step < 0.0 {
                return Err("grid step points away from the stop value".into());
            }
            grid(start, step, stop)
        }
        1 => value.split(',').map(parse_num).collect::<Result<_, _>>()?,
        _ => return Err("expected `start:step:stop` or a comma-separated list".into()),
    };
    if values.is_empty() {
        return Err("grid is empty".into());
    }
    Ok(values)
}

fn resolve_key(line: usize, raw: &str) -> Result<String, ConfigError> {
    let all = KEYS.iter().chain(SWEEP_KEYS.iter());
    if raw.contains('.') {
        if KEYS.contains(&raw) || SWEEP_KEYS.contains(&raw) || raw == "output.path" {
            return Ok(raw.to_string());
        }
        return Err(ConfigError::UnknownKey {
            line,
            key: raw.to_string(),
        });
    }
    // Bare keys are accepted when the suffix is unambiguous, e.g. `eps2`.
    let matches: Vec<&str> = all
        .chain(std::iter::once(&"output.path"))
        .filter(|k| k.split_once('.').map(|(_, suffix)| suffix) == Some(raw))
        .copied()
        .collect();
    match matches.as_slice() {
        [unique] => Ok((*unique).to_string()),
        [] => Err(ConfigError::UnknownKey {
            line,
            key: raw.to_string(),
        }),
        many => Err(ConfigError::AmbiguousKey {
            line,
            key: raw.to_string(),
            candidates: many.join(", "),
        }),
    }
}

fn invariant(
    line: usize,
    key: &str,
    value: &str,
    ok: bool,
    constraint: &str,
) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::Invariant {
            line,
            key: key.to_string(),
            value: value.to_string(),
            constraint: constraint.to_string(),
        })
    }
}

/// Parses a config file, starting from the benchmark defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = ExperimentConfig::default();
    let mut grid_line: Option<usize> = None;
    let mut var_line: Option<usize> = None;
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((raw_key, raw_value)) = content.split_once('=') else {
            return Err(ConfigError::Syntax {
                line,
                text: content.to_string(),
            });
        };
        let key = resolve_key(line, raw_key.trim())?;
        let value = raw_value.trim();
        let bad = |message: String| ConfigError::InvalidValue {
            line,
            key: key.clone(),
            message,
        };
        let float = || -> Result<f64, ConfigError> {
            let v: f64 = value
                .parse()
                .map_err(|_| bad(format!("`{value}` is not a number")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(bad(format!("`{value}` is not finite")))
            }
        };
        match key.as_str() {
            "geometry.radius" => {
                let v = float()?;
                invariant(line, &key, value, v > 0.0, "radius > 0")?;
                cfg.geometry.uav.radius = v;
            }
            "geometry.height" => {
                let v = float()?;
                invariant(line, &key, value, v > 0.0, "height > 0")?;
                cfg.geometry.uav.height = v;
            }
            "geometry.angle" => cfg.geometry.uav.angle = float()?,
            "geometry.source_x" => cfg.geometry.source.x = float()?,
            "geometry.source_y" => cfg.geometry.source.y = float()?,
            "geometry.source_z" => cfg.geometry.source.z = float()?,
            "geometry.user1_x" => cfg.geometry.user1.x = float()?,
            "geometry.user1_y" => cfg.geometry.user1.y = float()?,
            "geometry.user1_z" => cfg.geometry.user1.z = float()?,
            "geometry.user2_x" => cfg.geometry.user2.x = float()?,
            "geometry.user2_y" => cfg.geometry.user2.y = float()?,
            "geometry.user2_z" => cfg.geometry.user2.z = float()?,
            "geometry.neighbor_source_distance" => {
                let v = float()?;
                invariant(line, &key, value, v > 0.0, "distance > 0")?;
                cfg.geometry.neighbor_source_distance = v;
            }
            "geometry.neighbor_user_distance" => {
                let v = float()?;
                invariant(line, &key, value, v > 0.0, "distance > 0")?;
                cfg.geometry.neighbor_user_distance = v;
            }
            "pathloss.exponent_slope" => cfg.path_loss.exponent_slope = float()?,
            "pathloss.exponent_offset" => cfg.path_loss.exponent_offset = float()?,
            "pathloss.env_scale" => cfg.path_loss.env_scale = float()?,
            "pathloss.env_rate" => cfg.path_loss.env_rate = float()?,
            "pathloss.elevation" => cfg.path_loss.elevation = float()?,
            "pathloss.plos_override" => {
                if value == "none" {
                    cfg.path_loss.plos_override = None;
                } else {
                    let v = float()?;
                    invariant(line, &key, value, (0.0..=1.0).contains(&v), "0 <= plos <= 1")?;
                    cfg.path_loss.plos_override = Some(v);
                }
            }
            "impairment.k" => {
                let v = float()?;
                invariant(line, &key, value, (0.0..1.0).contains(&v), "0 <= k < 1")?;
                cfg.k = v;
            }
            "impairment.cells" => {
                cfg.cells = value
                    .parse()
                    .map_err(|_| bad(format!("`{value}` is not a non-negative integer")))?;
            }
            "allocation.eps2" => {
                let v = float()?;
                invariant(
                    line,
                    &key,
                    value,
                    v > 0.0 && v < 0.5,
                    "0 < eps2 < 0.5 (the far user must hold the larger share)",
                )?;
                cfg.eps2 = v;
            }
            "model.n_elements" => {
                let v: usize = value
                    .parse()
                    .map_err(|_| bad(format!("`{value}` is not a positive integer")))?;
                invariant(line, &key, value, v >= 1, "n_elements >= 1")?;
                cfg.n_elements = v;
            }
            "model.snr_db" => cfg.snr_db = float()?,
            "model.noise_var" => {
                let v = float()?;
                invariant(line, &key, value, v > 0.0, "noise_var > 0")?;
                cfg.noise_var = v;
            }
            "engine.mode" => {
                cfg.mode = value.parse().map_err(bad)?;
            }
            "engine.trials" => {
                let v: u64 = value
                    .parse()
                    .map_err(|_| bad(format!("`{value}` is not a positive integer")))?;
                invariant(line, &key, value, v >= 1, "trials >= 1")?;
                cfg.trials = v;
            }
            "engine.seed" => {
                cfg.seed = value
                    .parse()
                    .map_err(|_| bad(format!("`{value}` is not a u64")))?;
            }
            "engine.sic_replica" => {
                cfg.sic_replica = value.parse().map_err(bad)?;
            }
            "sweep.variable" => {
                cfg.sweep_var = value.parse().map_err(bad)?;
                var_line = Some(line);
                if grid_line.is_none() {
                    cfg.sweep_values = default_grid(cfg.sweep_var);
                }
            }
            "sweep.grid" => {
                cfg.sweep_values = parse_grid(value).map_err(bad)?;
                grid_line = Some(line);
            }
            "output.path" => cfg.output = Some(value.to_string()),
            _ => unreachable!("resolve_key only returns known keys"),
        }
    }
    // Grid values must satisfy the bounds of the swept variable; blame the
    // most recent sweep line for any conflict.
    let sweep_line = grid_line.max(var_line).unwrap_or(0);
    validate_sweep(sweep_line, &cfg)?;
    Ok(cfg)
}

fn validate_sweep(line: usize, cfg: &ExperimentConfig) -> Result<(), ConfigError> {
    let constraint = |v: f64| -> Option<&'static str> {
        match cfg.sweep_var {
            SweepVar::Snr => None,
            SweepVar::Altitude => (v <= 0.0).then_some("altitude > 0"),
            SweepVar::NElements => {
                (v < 1.0 || v.fract() != 0.0).then_some("n_elements is a positive integer")
            }
            SweepVar::K => (!(0.0..1.0).contains(&v)).then_some("0 <= k < 1"),
            SweepVar::Cells => {
                (v < 0.0 || v.fract() != 0.0).then_some("L is a non-negative integer")
            }
            SweepVar::Eps2 => (!(v > 0.0 && v < 0.5)).then_some("0 < eps2 < 0.5"),
        }
    };
    for &v in &cfg.sweep_values {
        if let Some(c) = constraint(v) {
            return Err(ConfigError::Invariant {
                line,
                key: "sweep.grid".to_string(),
                value: crate::rows::fmt_sig10(v),
                constraint: c.to_string(),
            });
        }
    }
    Ok(())
}
