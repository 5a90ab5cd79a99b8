//! Seeded Monte-Carlo estimation of the per-user and system BER.
//!
//! Every trial gets its own ChaCha stream derived from `(master_seed,
//! point_id, trial_index)`, so results are bit-identical no matter how the
//! trial range is partitioned across threads — the estimate is a pure
//! function of the point definition.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::channel::{aligned_cascade_gain, draw_fading, CascadeGain};
use crate::geometry::{GeometryError, PathLossParams, ScenarioGeometry};
use crate::transceiver::{
    detect_bpsk, detect_s1, detect_s2, ici_sample, received_sample, sic_subtract,
    sic_subtract_printed, superpose, ImpairmentProfile, PowerAllocation, SicReplica,
};
use crate::User;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum McError {
    #[error("a simulation point needs at least one trial")]
    NoTrials,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Multiple-access scheme simulated at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Scheme {
    /// Superposition coding with SIC at the near user.
    #[default]
    Noma,
    /// Two TDMA slots, each carrying one user's stream at full power.
    Oma,
}

/// How the cascade fading is realized per trial.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelRealization {
    /// Fresh independent draws every trial (fast fading).
    Random,
    /// Degenerate variance-zero fading pinned to the given aligned
    /// amplitudes — used to compare against conditional expressions.
    Fixed {
        serving_u1: f64,
        serving_u2: f64,
        interferers: Vec<f64>,
    },
}

/// Full definition of one Monte-Carlo operating point.
///
/// `snr_db` is referenced to unit noise variance: the serving (and, via the
/// profile, interfering) transmit power is `10^(snr/10)` regardless of
/// `noise_var`, which stays at 1 in the benchmark configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct SimPoint {
    pub point_id: u64,
    pub master_seed: u64,
    pub trials: u64,
    pub snr_db: f64,
    pub noise_var: f64,
    pub n_elements: usize,
    pub alloc: PowerAllocation,
    pub profile: ImpairmentProfile,
    pub geometry: ScenarioGeometry,
    pub path_loss: PathLossParams,
    pub sic_replica: SicReplica,
    pub scheme: Scheme,
    pub channel: ChannelRealization,
}

impl SimPoint {
    /// Serving transmit power implied by the SNR definition `γ = P/σ²` with
    /// `σ² = 1`.
    pub fn serving_power(&self) -> f64 {
        10f64.powf(self.snr_db / 10.0)
    }
}

/// Error counters and provenance of one simulated point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BerEstimate {
    pub point_id: u64,
    pub master_seed: u64,
    pub trials: u64,
    pub errors_u1: u64,
    pub errors_u2: u64,
    /// Trials in which at least one user decoded its own symbol wrongly.
    pub errors_system: u64,
}

impl BerEstimate {
    pub fn ber(&self, user: User) -> f64 {
        let errors = match user {
            User::U1 => self.errors_u1,
            User::U2 => self.errors_u2,
        };
        errors as f64 / self.trials as f64
    }

    pub fn ber_system(&self) -> f64 {
        self.errors_system as f64 / self.trials as f64
    }

    /// 95% Wilson score interval for one user's BER.
    pub fn ci(&self, user: User) -> (f64, f64) {
        let errors = match user {
            User::U1 => self.errors_u1,
            User::U2 => self.errors_u2,
        };
        wilson_interval(errors, self.trials)
    }

    pub fn ci_system(&self) -> (f64, f64) {
        wilson_interval(self.errors_system, self.trials)
    }
}

/// 95% Wilson score interval for `errors` successes in `trials` draws.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    assert!(trials >= 1 && errors <= trials);
    const Z: f64 = 1.96;
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs all trials of one point and returns the error counters.
///
/// Deterministic for a fixed `(master_seed, point_id)` pair at any level of
/// parallelism: trial `t` always draws from ChaCha stream `t` of the
/// point-keyed seed.
pub fn run_point(point: &SimPoint) -> Result<BerEstimate, McError> {
    if point.trials == 0 {
        return Err(McError::NoTrials);
    }
    let psi1 = point.geometry.link_gain(&point.path_loss, User::U1)?;
    let psi2 = point.geometry.link_gain(&point.path_loss, User::U2)?;
    let iota = point.geometry.neighbor_link_gain(&point.path_loss)?;
    let p_s = point.serving_power();
    let base = ChaCha8Rng::seed_from_u64(splitmix64(point.master_seed ^ splitmix64(point.point_id)));

    let (errors_u1, errors_u2, errors_system) = (0..point.trials as usize)
        .into_par_iter()
        .with_min_len(512)
        .map(|trial| {
            let mut rng = base.clone();
            rng.set_stream(trial as u64);
            run_trial(point, psi1, psi2, iota, p_s, &mut rng)
        })
        .reduce(
            || (0u64, 0u64, 0u64),
            |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2),
        );

    Ok(BerEstimate {
        point_id: point.point_id,
        master_seed: point.master_seed,
        trials: point.trials,
        errors_u1,
        errors_u2,
        errors_system,
    })
}

fn bpsk<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.gen::<bool>() {
        1.0
    } else {
        -1.0
    }
}

fn run_trial(
    point: &SimPoint,
    psi1: f64,
    psi2: f64,
    iota: f64,
    p_s: f64,
    rng: &mut ChaCha8Rng,
) -> (u64, u64, u64) {
    let (gain1, gain2) = match &point.channel {
        ChannelRealization::Random => {
            let draw = draw_fading(point.n_elements, point.profile.cells, rng);
            (
                aligned_cascade_gain(&draw, User::U1),
                aligned_cascade_gain(&draw, User::U2),
            )
        }
        ChannelRealization::Fixed {
            serving_u1,
            serving_u2,
            interferers,
        } => (
            CascadeGain {
                serving: *serving_u1,
                interferers: interferers.clone(),
            },
            CascadeGain {
                serving: *serving_u2,
                interferers: interferers.clone(),
            },
        ),
    };
    let s1 = bpsk(rng);
    let s2 = bpsk(rng);
    let alloc = &point.alloc;
    let profile = &point.profile;
    let ref1 = (psi1 * p_s).sqrt() * gain1.serving;
    let ref2 = (psi2 * p_s).sqrt() * gain2.serving;

    let (e1, e2) = match point.scheme {
        Scheme::Noma => {
            let x = superpose(s1, s2, alloc).expect("symbols are BPSK by construction").x;

            let ici1 = ici_sample(profile, &gain1.interferers, iota, alloc, rng);
            let y1 = received_sample(x, gain1.serving, psi1, p_s, profile, ici1, point.noise_var, rng);
            let e1 = detect_s1(y1, ref1, alloc) != s1;

            let ici2 = ici_sample(profile, &gain2.interferers, iota, alloc, rng);
            let y2 = received_sample(x, gain2.serving, psi2, p_s, profile, ici2, point.noise_var, rng);
            let s1_at_u2 = detect_s1(y2, ref2, alloc);
            let cleaned = match point.sic_replica {
                SicReplica::Corrected => sic_subtract(y2, ref2, alloc, s1_at_u2),
                SicReplica::Printed => sic_subtract_printed(y2, ref1, s1_at_u2),
            }
            .expect("detected symbol is BPSK by construction");
            let e2 = detect_s2(cleaned, ref2, alloc) != s2;
            (e1, e2)
        }
        Scheme::Oma => {
            // Two TDMA slots with independent interference and noise; each
            // stream gets the full transmit power.
            let ici1 = ici_sample(profile, &gain1.interferers, iota, alloc, rng);
            let y1 = received_sample(s1, gain1.serving, psi1, p_s, profile, ici1, point.noise_var, rng);
            let e1 = detect_bpsk(y1, ref1) != s1;

            let ici2 = ici_sample(profile, &gain2.interferers, iota, alloc, rng);
            let y2 = received_sample(s2, gain2.serving, psi2, p_s, profile, ici2, point.noise_var, rng);
            let e2 = detect_bpsk(y2, ref2) != s2;
            (e1, e2)
        }
    };

    (u64::from(e1), u64::from(e2), u64::from(e1 || e2))
}

/// Runs a list of points in order, isolating failures per point.
///
/// Each result is identical to an isolated [`run_point`] call: the random
/// streams are keyed by `(master_seed, point_id)`, never by list position.
pub fn run_sweep(points: &[SimPoint]) -> Vec<Result<BerEstimate, McError>> {
    points.iter().map(run_point).collect()
}
