//! Signed Q-function term tables for the three detectors and the
//! noise-variance bookkeeping shared by the conditional and averaged forms.

use crate::channel::CltStats;
use crate::transceiver::{ImpairmentProfile, PowerAllocation};
use crate::{EvalMode, User};

/// One signed Q-function term of a BER expression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    /// ±1 weight of the term in the sum.
    pub sign: f64,
    /// Coefficient of the effective signal power inside the Q argument.
    pub zeta: f64,
    /// Coefficient of the amplitude-coupled interferer-distortion entry in
    /// this term's noise variance.
    pub delta: f64,
}

/// The full signed term set of one detector, with its outer prefactor.
///
/// `for_user(U1)` is the two-term direct-detection set (the weak stream's
/// two signs split the effective amplitude); `for_user(U2)` is the six-term
/// correct/erroneous-SIC set; `single_stream` is the one-term full-power
/// set used by the TDMA baseline.
///
/// In `Consistent` mode every `zeta` is the squared effective amplitude
/// produced by the conditional-error enumeration. In `Paper` mode the
/// published entries are kept verbatim: the amplitude sums enter unsquared,
/// and the fourth SIC entry reads `√(2ε₁)+√ε₂` where the enumeration gives
/// `2√ε₁+√ε₂` — the two tables deliberately disagree there so the variants
/// can be compared.
#[derive(Debug, Clone, PartialEq)]
pub struct TermTable {
    pub mode: EvalMode,
    pub prefactor: f64,
    pub terms: Vec<Term>,
}

impl TermTable {
    pub fn for_user(user: User, alloc: &PowerAllocation, mode: EvalMode) -> Self {
        let a = alloc.amp1();
        let b = alloc.amp2();
        match user {
            User::U1 => {
                let amplitudes = [a + b, a - b];
                let terms = amplitudes
                    .iter()
                    .map(|&amp| {
                        let zeta = match mode {
                            EvalMode::Consistent => amp * amp,
                            EvalMode::Paper => amp,
                        };
                        Term {
                            sign: 1.0,
                            zeta,
                            delta: zeta,
                        }
                    })
                    .collect();
                Self {
                    mode,
                    prefactor: 0.5,
                    terms,
                }
            }
            User::U2 => {
                let signs = [1.0, 1.0, -1.0, 1.0, 1.0, -1.0];
                let zetas = match mode {
                    // Squared effective amplitudes of the six SIC outcomes:
                    // two clean detections, then the erroneous/correct
                    // subtraction images of the strong stream.
                    EvalMode::Consistent => [
                        b * b,
                        b * b,
                        (a + b) * (a + b),
                        (2.0 * a + b) * (2.0 * a + b),
                        (a - b) * (a - b),
                        (2.0 * a - b) * (2.0 * a - b),
                    ],
                    // Published entries, kept verbatim: the first two are
                    // power-type (ε₂ = b²), the rest amplitude-type, and the
                    // fourth uses √2·√ε₁ in place of 2√ε₁.
                    EvalMode::Paper => [
                        b * b,
                        b * b,
                        a + b,
                        std::f64::consts::SQRT_2 * a + b,
                        a - b,
                        2.0 * a - b,
                    ],
                };
                // Amplitude factors of the interferer-distortion coupling,
                // the same linear entries in both modes.
                let deltas = [a - b, a + b, a + b, a + b, a - b, a - b];
                let terms = (0..6)
                    .map(|i| Term {
                        sign: signs[i],
                        zeta: zetas[i],
                        delta: deltas[i],
                    })
                    .collect();
                Self {
                    mode,
                    prefactor: 0.5,
                    terms,
                }
            }
        }
    }

    /// Single-stream (TDMA slot) detector: full power, no intra-cell
    /// interference, one positive term.
    pub fn single_stream(mode: EvalMode) -> Self {
        Self {
            mode,
            prefactor: 1.0,
            terms: vec![Term {
                sign: 1.0,
                zeta: 1.0,
                delta: 1.0,
            }],
        }
    }
}

/// Inputs of the per-term noise variance `σ_W`.
///
/// `varpi` is the received serving-signal power factor `P_s·E[A₁²]` (or the
/// instantaneous `P_s·λ` for conditional evaluation) and `aleph` the
/// aggregate interferer power `Σ_j ι·P_j·E[A₂ⱼ²]`; both carry whichever
/// second moment the evaluation mode prescribes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceTerms {
    /// Serving-link large-scale gain `ψ_i`.
    pub psi: f64,
    /// Interferer cascaded large-scale gain `ι`.
    pub iota: f64,
    /// `P_s · (cascade power)` — averaged or instantaneous.
    pub varpi: f64,
    /// `Σ_j ι · P_j · (interferer cascade power)`.
    pub aleph: f64,
    /// Serving-link aggregate distortion level `K_a²`.
    pub ka2: f64,
    /// Neighbour-link aggregate distortion level `K_b²`.
    pub kb2: f64,
    /// AWGN variance `σ²`.
    pub noise_var: f64,
}

impl VarianceTerms {
    /// Ensemble-averaged bookkeeping: cascade powers are replaced by the
    /// CLT second moment of the evaluation mode carried by `stats`.
    pub fn averaged(
        stats: &CltStats,
        profile: &ImpairmentProfile,
        psi: f64,
        iota: f64,
        p_s: f64,
        noise_var: f64,
    ) -> Self {
        let m2 = stats.second_moment();
        Self {
            psi,
            iota,
            varpi: p_s * m2,
            aleph: profile.cells as f64 * iota * profile.p_neighbor * m2,
            ka2: profile.ka2(),
            kb2: profile.kb2(),
            noise_var,
        }
    }

    /// Fixed-realization bookkeeping for conditional evaluation: `lambda`
    /// is the squared serving cascade amplitude and `interferers` the
    /// squared aligned amplitude of each neighbour cell.
    pub fn instantaneous(
        profile: &ImpairmentProfile,
        psi: f64,
        iota: f64,
        p_s: f64,
        lambda: f64,
        interferers_sq: &[f64],
        noise_var: f64,
    ) -> Self {
        let cascade_power: f64 = interferers_sq.iter().sum();
        Self {
            psi,
            iota,
            varpi: p_s * lambda,
            aleph: iota * profile.p_neighbor * cascade_power,
            ka2: profile.ka2(),
            kb2: profile.kb2(),
            noise_var,
        }
    }

    /// Per-term noise variance
    /// `σ_W = ψ·ϖ·K_a² + δ·ℵ·K_b² + ℵ·K_b² + σ²`, where `δ` is the term's
    /// amplitude-coupling entry.
    pub fn sigma_w(&self, term: &Term) -> f64 {
        self.psi * self.varpi * self.ka2
            + term.delta * self.aleph * self.kb2
            + self.aleph * self.kb2
            + self.noise_var
    }
}
