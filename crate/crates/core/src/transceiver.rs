//! Signal-path building blocks for the Monte-Carlo chain: superposition
//! coding, hardware-distortion injection, inter-cell interference, and the
//! maximum-likelihood / SIC detectors.
//!
//! Complex-baseband convention: additive noise variances are totals
//! (half per real dimension) and BPSK decisions act on the real part.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransceiverError {
    #[error("power split eps2 = {eps2} is invalid: need 0 < eps2 < 0.5 so eps1 > eps2 > 0")]
    InvalidAllocation { eps2: f64 },
    #[error("impairment level {value} is invalid: levels are squared magnitudes and must be finite and >= 0")]
    InvalidImpairment { value: f64 },
    #[error("BPSK symbol must be -1 or +1, got {value}")]
    NonBpskSymbol { value: f64 },
}

/// NOMA power split between the two users' streams.
///
/// Constructed from the weak-stream share `eps2`; the invariants
/// `eps1 + eps2 = 1` and `eps1 > eps2 > 0` are enforced at construction so
/// downstream code can rely on them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerAllocation {
    eps1: f64,
    eps2: f64,
}

impl PowerAllocation {
    pub fn new(eps2: f64) -> Result<Self, TransceiverError> {
        if eps2 > 0.0 && eps2 < 0.5 && eps2.is_finite() {
            Ok(Self {
                eps1: 1.0 - eps2,
                eps2,
            })
        } else {
            Err(TransceiverError::InvalidAllocation { eps2 })
        }
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    pub fn eps2(&self) -> f64 {
        self.eps2
    }

    /// Amplitude weight `√eps1` of the strong (U1) stream.
    pub fn amp1(&self) -> f64 {
        self.eps1.sqrt()
    }

    /// Amplitude weight `√eps2` of the weak (U2) stream.
    pub fn amp2(&self) -> f64 {
        self.eps2.sqrt()
    }
}

/// Squared hardware-impairment levels and the interference environment.
///
/// `kt2_*`/`kr2_*` are the squared transmit/receive distortion levels
/// (`k_t²`, `k_r²`); `serving` applies to the own-cell link, `neighbor` to
/// the interfering cells. `cells` is the interferer count and `p_neighbor`
/// the per-cell interferer transmit power, which the benchmark
/// configurations tie to the serving power.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpairmentProfile {
    pub kt2_serving: f64,
    pub kr2_serving: f64,
    pub kt2_neighbor: f64,
    pub kr2_neighbor: f64,
    pub cells: usize,
    pub p_neighbor: f64,
}

impl ImpairmentProfile {
    pub fn new(
        kt2_serving: f64,
        kr2_serving: f64,
        kt2_neighbor: f64,
        kr2_neighbor: f64,
        cells: usize,
        p_neighbor: f64,
    ) -> Result<Self, TransceiverError> {
        for &level in &[kt2_serving, kr2_serving, kt2_neighbor, kr2_neighbor, p_neighbor] {
            if !(level.is_finite() && level >= 0.0) {
                return Err(TransceiverError::InvalidImpairment { value: level });
            }
        }
        Ok(Self {
            kt2_serving,
            kr2_serving,
            kt2_neighbor,
            kr2_neighbor,
            cells,
            p_neighbor,
        })
    }

    /// Same scalar level `k` on every distortion source, the shape the
    /// benchmark configurations use: `k_t = k_r = k` on both link classes.
    pub fn symmetric(k: f64, cells: usize, p_neighbor: f64) -> Result<Self, TransceiverError> {
        let k2 = k * k;
        Self::new(k2, k2, k2, k2, cells, p_neighbor)
    }

    /// Ideal hardware and no interfering cells.
    pub fn ideal() -> Self {
        Self {
            kt2_serving: 0.0,
            kr2_serving: 0.0,
            kt2_neighbor: 0.0,
            kr2_neighbor: 0.0,
            cells: 0,
            p_neighbor: 0.0,
        }
    }

    /// Aggregate serving-link distortion level `K_a² = k_t² + k_r²`.
    pub fn ka2(&self) -> f64 {
        self.kt2_serving + self.kr2_serving
    }

    /// Aggregate neighbour-link distortion level `K_b²`.
    pub fn kb2(&self) -> f64 {
        self.kt2_neighbor + self.kr2_neighbor
    }
}

/// A superposition-coded BPSK pair and its composite transmit value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperposedSymbol {
    pub s1: f64,
    pub s2: f64,
    /// `√eps1·s1 + √eps2·s2`; real-valued for BPSK, unit power on average
    /// over the four equiprobable symbol pairs.
    pub x: f64,
}

/// Builds the composite NOMA symbol `x = √eps1·s1 + √eps2·s2`.
pub fn superpose(
    s1: f64,
    s2: f64,
    alloc: &PowerAllocation,
) -> Result<SuperposedSymbol, TransceiverError> {
    check_bpsk(s1)?;
    check_bpsk(s2)?;
    Ok(SuperposedSymbol {
        s1,
        s2,
        x: alloc.amp1() * s1 + alloc.amp2() * s2,
    })
}

fn check_bpsk(s: f64) -> Result<(), TransceiverError> {
    if s == 1.0 || s == -1.0 {
        Ok(())
    } else {
        Err(TransceiverError::NonBpskSymbol { value: s })
    }
}

/// Zero-mean complex Gaussian with total variance `var`.
fn complex_gaussian<R: Rng + ?Sized>(var: f64, rng: &mut R) -> Complex64 {
    let scale = (var / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(scale * re, scale * im)
}

/// Aggregate inter-cell interference sample seen by one user.
///
/// Each neighbour cell contributes `(√P_j·X_j + η_t)·q_j + η_r`, where `X_j`
/// is that cell's own NOMA superposition (independent symbols, same power
/// split), `q_j = √iota·A_j` is its aligned cascade amplitude, and the
/// distortions have variances `P_j·k_t²` and `P_j·k_r²·q_j²`.
pub fn ici_sample<R: Rng + ?Sized>(
    profile: &ImpairmentProfile,
    interferer_gains: &[f64],
    iota: f64,
    alloc: &PowerAllocation,
    rng: &mut R,
) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    let p_j = profile.p_neighbor;
    for &a_j in interferer_gains {
        let q_j = iota.sqrt() * a_j;
        let s1 = bpsk_symbol(rng);
        let s2 = bpsk_symbol(rng);
        let x_j = alloc.amp1() * s1 + alloc.amp2() * s2;
        let eta_t = complex_gaussian(p_j * profile.kt2_neighbor, rng);
        let eta_r = complex_gaussian(p_j * profile.kr2_neighbor * q_j * q_j, rng);
        total += (Complex64::new(p_j.sqrt() * x_j, 0.0) + eta_t) * q_j + eta_r;
    }
    total
}

fn bpsk_symbol<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.gen::<bool>() {
        1.0
    } else {
        -1.0
    }
}

/// One received complex sample over the serving cascade.
///
/// `y = √(psi·P_s)·a1·x + η_t·√psi·a1 + η_r + ici + w`, with transmit
/// distortion `η_t ~ CN(0, P_s·k_t²)` riding the channel, receive distortion
/// `η_r ~ CN(0, P_s·k_r²·psi·a1²)`, and AWGN `w ~ CN(0, noise_var)`.
#[allow(clippy::too_many_arguments)]
pub fn received_sample<R: Rng + ?Sized>(
    x: f64,
    serving_gain: f64,
    psi: f64,
    p_s: f64,
    profile: &ImpairmentProfile,
    ici: Complex64,
    noise_var: f64,
    rng: &mut R,
) -> Complex64 {
    let channel = psi.sqrt() * serving_gain;
    let eta_t = complex_gaussian(p_s * profile.kt2_serving, rng);
    let eta_r = complex_gaussian(p_s * profile.kr2_serving * psi * serving_gain * serving_gain, rng);
    let w = complex_gaussian(noise_var, rng);
    Complex64::new(p_s.sqrt() * channel * x, 0.0) + eta_t * channel + eta_r + ici + w
}

/// Maximum-likelihood BPSK decision: the candidate `m ∈ {−1,+1}` whose
/// constellation point `amplitude·m` is closest to `y`.
pub fn detect_bpsk(y: Complex64, amplitude: f64) -> f64 {
    let d_plus = (y - Complex64::new(amplitude, 0.0)).norm_sqr();
    let d_minus = (y + Complex64::new(amplitude, 0.0)).norm_sqr();
    if d_plus <= d_minus {
        1.0
    } else {
        -1.0
    }
}

/// Detects the strong stream `s1`, treating the weak stream as noise.
/// `ref_gain` is the received amplitude `√(psi·P_s)·a1` before power
/// allocation.
pub fn detect_s1(y: Complex64, ref_gain: f64, alloc: &PowerAllocation) -> f64 {
    debug_assert!(ref_gain > 0.0);
    detect_bpsk(y, ref_gain * alloc.amp1())
}

/// Removes the detected strong stream from U2's sample:
/// `ŷ = y − ref_gain·√eps1·s1_hat`, with `ref_gain = √(psi₂·P_s)·a1` taken
/// from U2's own channel, so a correct `s1_hat` cancels the strong stream
/// exactly in the noiseless limit.
pub fn sic_subtract(
    y: Complex64,
    ref_gain: f64,
    alloc: &PowerAllocation,
    s1_hat: f64,
) -> Result<Complex64, TransceiverError> {
    check_bpsk(s1_hat)?;
    Ok(y - Complex64::new(ref_gain * alloc.amp1() * s1_hat, 0.0))
}

/// Variant of [`sic_subtract`] that reproduces a published replica rule kept
/// for comparison: the subtracted term is `u1_ref_gain·s1_hat`, built from
/// U1's channel and without the `√eps1` stream weight.
pub fn sic_subtract_printed(
    y: Complex64,
    u1_ref_gain: f64,
    s1_hat: f64,
) -> Result<Complex64, TransceiverError> {
    check_bpsk(s1_hat)?;
    Ok(y - Complex64::new(u1_ref_gain * s1_hat, 0.0))
}

/// Which SIC replica the U2 receiver subtracts.
///
/// `Corrected` uses U2's own received replica with the `√eps1` weight (the
/// form the six-term error analysis assumes); `Printed` reproduces the
/// published rule, which scales by U1's channel and omits the stream weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SicReplica {
    #[default]
    Corrected,
    Printed,
}

impl std::str::FromStr for SicReplica {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "corrected" => Ok(SicReplica::Corrected),
            "paper" => Ok(SicReplica::Printed),
            other => Err(format!(
                "unknown sic_replica `{other}` (expected `corrected` or `paper`)"
            )),
        }
    }
}

impl std::fmt::Display for SicReplica {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SicReplica::Corrected => write!(f, "corrected"),
            SicReplica::Printed => write!(f, "paper"),
        }
    }
}

/// Detects the weak stream after SIC. `ref_gain` is U2's received amplitude
/// `√(psi₂·P_s)·a1` before power allocation.
pub fn detect_s2(y_after_sic: Complex64, ref_gain: f64, alloc: &PowerAllocation) -> f64 {
    debug_assert!(ref_gain > 0.0);
    detect_bpsk(y_after_sic, ref_gain * alloc.amp2())
}
