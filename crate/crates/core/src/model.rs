//! Physical parameters, unit normalization, and the classical steady state.
//!
//! Every quantity downstream of this module is expressed in units of the
//! mechanical frequency (`omega_m` == 1). Laboratory units enter only
//! through [`normalize_params`], which converts drive powers, wavelength,
//! and bath temperature into dimensionless rates.

use crate::error::{Error, Result};

/// Fundamental constants in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant (J s).
    pub hbar: f64,
    /// Boltzmann constant (J/K).
    pub kb: f64,
    /// Speed of light in vacuum (m/s).
    pub c: f64,
}

impl PhysicalConstants {
    /// CODATA values (`hbar` and `kb` are exact in the 2019 SI).
    pub const fn si() -> Self {
        Self {
            hbar: 1.054_571_817e-34,
            kb: 1.380_649e-23,
            c: 2.997_924_58e8,
        }
    }

    fn validate(&self) -> Result<()> {
        for (field, value) in [("hbar", self.hbar), ("kb", self.kb), ("c", self.c)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter { field, value });
            }
        }
        Ok(())
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::si()
    }
}

/// Laboratory-unit description of the device and its drives.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhysicalParams {
    /// Mechanical angular frequency (rad/s).
    pub omega_m_hz: f64,
    /// Wavelength of the red-detuned drive laser (m); fixes the absolute
    /// optical frequency.
    pub lambda_minus_m: f64,
    /// Power of the blue-detuned drive (W).
    pub power_plus_w: f64,
    /// Power of the red-detuned drive (W).
    pub power_minus_w: f64,
    /// Mechanical bath temperature (K).
    pub temperature_k: f64,
    /// Cavity decay rate over `omega_m`.
    pub kappa_ratio: f64,
    /// Mechanical decay rate over `omega_m`.
    pub gamma_ratio: f64,
    /// Single-photon coupling over `omega_m`.
    pub g0_ratio: f64,
    /// Parametric gain over `omega_m`.
    pub gain_ratio: f64,
    /// Pump phase (rad).
    pub theta: f64,
}

impl PhysicalParams {
    fn validate(&self) -> Result<()> {
        let fields = [
            ("omega_m_hz", self.omega_m_hz),
            ("lambda_minus_m", self.lambda_minus_m),
            ("power_plus_w", self.power_plus_w),
            ("power_minus_w", self.power_minus_w),
            ("temperature_k", self.temperature_k),
            ("kappa_ratio", self.kappa_ratio),
            ("gamma_ratio", self.gamma_ratio),
            ("g0_ratio", self.g0_ratio),
            ("gain_ratio", self.gain_ratio),
            ("theta", self.theta),
        ];
        for (field, value) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidParameter { field, value });
            }
        }
        if self.omega_m_hz <= 0.0 {
            return Err(Error::InvalidParameter {
                field: "omega_m_hz",
                value: self.omega_m_hz,
            });
        }
        if self.lambda_minus_m <= 0.0 {
            return Err(Error::InvalidParameter {
                field: "lambda_minus_m",
                value: self.lambda_minus_m,
            });
        }
        for (field, value) in [
            ("power_plus_w", self.power_plus_w),
            ("power_minus_w", self.power_minus_w),
            ("temperature_k", self.temperature_k),
            ("kappa_ratio", self.kappa_ratio),
            ("gamma_ratio", self.gamma_ratio),
            ("g0_ratio", self.g0_ratio),
            ("gain_ratio", self.gain_ratio),
        ] {
            if value < 0.0 {
                return Err(Error::InvalidParameter { field, value });
            }
        }
        Ok(())
    }
}

/// Dimensionless model parameters; every rate is in units of `omega_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SystemParams {
    /// Cavity decay rate.
    pub kappa: f64,
    /// Mechanical decay rate.
    pub gamma_m: f64,
    /// Single-photon optomechanical coupling.
    pub g0: f64,
    /// Effective coupling of the red-detuned tone.
    pub g_minus: f64,
    /// Effective coupling of the blue-detuned tone.
    pub g_plus: f64,
    /// Parametric gain of the intracavity amplifier.
    pub gain: f64,
    /// Pump phase (rad), stored reduced to `[0, 2pi)`.
    pub theta: f64,
    /// Mean thermal phonon number of the mechanical bath.
    pub n_th: f64,
    /// Pump frequency `2 * omega_c_eff` in units of `omega_m`; known only
    /// when the steady state was solved from physical inputs.
    pub pump_freq: Option<f64>,
}

impl SystemParams {
    /// Checks invariants and reduces the phase to `[0, 2pi)`.
    ///
    /// The reduction uses the exact IEEE remainder, so two phases that
    /// differ by a representable multiple of `2pi` produce bit-identical
    /// downstream results.
    pub fn validated(mut self) -> Result<Self> {
        let fields = [
            ("kappa", self.kappa),
            ("gamma_m", self.gamma_m),
            ("g0", self.g0),
            ("g_minus", self.g_minus),
            ("g_plus", self.g_plus),
            ("gain", self.gain),
            ("theta", self.theta),
            ("n_th", self.n_th),
        ];
        for (field, value) in fields {
            if !value.is_finite() {
                return Err(Error::InvalidParameter { field, value });
            }
        }
        if self.kappa <= 0.0 {
            return Err(Error::InvalidParameter {
                field: "kappa",
                value: self.kappa,
            });
        }
        for (field, value) in [
            ("gamma_m", self.gamma_m),
            ("g0", self.g0),
            ("g_minus", self.g_minus),
            ("g_plus", self.g_plus),
            ("gain", self.gain),
            ("n_th", self.n_th),
        ] {
            if value < 0.0 {
                return Err(Error::InvalidParameter { field, value });
            }
        }
        self.theta = reduce_phase(self.theta);
        Ok(self)
    }

    /// Installs the effective couplings and the matched pump frequency
    /// obtained from a solved steady state.
    pub fn with_couplings(mut self, couplings: &Couplings, steady: &SteadyState) -> Self {
        self.g_minus = couplings.g_minus;
        self.g_plus = couplings.g_plus;
        self.pump_freq = Some(2.0 * steady.omega_c_eff);
        self
    }

    /// Full pipeline from laboratory units: normalization, classical
    /// steady state, and effective couplings.
    pub fn from_physical(
        params: &PhysicalParams,
        constants: &PhysicalConstants,
    ) -> Result<(Self, SteadyState)> {
        let (base, drives) = normalize_params(params, constants)?;
        let steady = solve_steady_amplitudes(&base, &drives)?;
        let couplings = couplings(&steady, base.g0)?;
        Ok((base.with_couplings(&couplings, &steady), steady))
    }
}

impl Default for SystemParams {
    /// Reference parameter set used by the built-in presets: sideband-
    /// resolved cavity with a red/blue ratio of 0.28 and gain 0.4 kappa.
    fn default() -> Self {
        Self {
            kappa: 0.05,
            gamma_m: 1e-6,
            g0: 2e-5,
            g_minus: 0.01,
            g_plus: 0.0028,
            gain: 0.02,
            theta: 0.0,
            n_th: 0.0,
            pump_freq: None,
        }
    }
}

/// Reduces an angle to `[0, 2pi)` without introducing rounding error:
/// IEEE `fmod` is exact, and negative residues are folded up by one period.
fn reduce_phase(theta: f64) -> f64 {
    let r = theta % core::f64::consts::TAU;
    if r < 0.0 {
        r + core::f64::consts::TAU
    } else {
        r
    }
}

/// Normalized drive strengths and the absolute cavity frequency, all in
/// units of `omega_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Drives {
    /// Blue-detuned drive strength.
    pub eps_plus: f64,
    /// Red-detuned drive strength.
    pub eps_minus: f64,
    /// Bare cavity frequency.
    pub omega_c: f64,
}

/// Classical steady state of the driven cavity and oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SteadyState {
    /// Field amplitude of the blue sideband component (real, >= 0).
    pub alpha_plus: f64,
    /// Field amplitude of the red sideband component (real, >= 0).
    pub alpha_minus: f64,
    /// Static mechanical displacement.
    pub beta: f64,
    /// Effective cavity frequency after the radiation-pressure shift,
    /// in units of `omega_m`.
    pub omega_c_eff: f64,
    /// Fixed-point iterations used.
    pub iterations: u32,
}

/// Effective couplings and the squeezed-mode quantities derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Couplings {
    pub g_minus: f64,
    pub g_plus: f64,
    /// Squeezing coefficient of the Bogoliubov mode; `None` when
    /// `g_plus >= g_minus` (outside the stable working regime).
    pub r: Option<f64>,
    /// Coupling to the Bogoliubov mode, `sqrt(g_minus^2 - g_plus^2)`;
    /// `None` under the same condition as `r`.
    pub g_eff: Option<f64>,
}

impl Couplings {
    /// Builds the coupling record directly from the two tone rates.
    pub fn from_rates(g_minus: f64, g_plus: f64) -> Self {
        let (r, g_eff) = if g_plus < g_minus {
            let r = 0.5 * libm::log((g_minus + g_plus) / (g_minus - g_plus));
            let g_eff = libm::sqrt(g_minus * g_minus - g_plus * g_plus);
            (Some(r), Some(g_eff))
        } else {
            (None, None)
        };
        Self {
            g_minus,
            g_plus,
            r,
            g_eff,
        }
    }

    /// True when the Bogoliubov quantities are defined (`g_plus < g_minus`).
    pub fn bogoliubov_defined(&self) -> bool {
        self.r.is_some()
    }
}

/// Converts laboratory units into `omega_m`-normalized parameters plus the
/// normalized drive strengths.
///
/// The red laser sits one mechanical frequency below the cavity, so the
/// bare cavity frequency is `2 pi c / lambda_minus + omega_m`. Drive
/// strengths follow `eps = sqrt(kappa P / (hbar omega_drive))`, and the
/// thermal occupation is the Bose factor, with `T = 0` mapping to
/// `n_th = 0` exactly.
pub fn normalize_params(
    params: &PhysicalParams,
    constants: &PhysicalConstants,
) -> Result<(SystemParams, Drives)> {
    params.validate()?;
    constants.validate()?;

    let omega_m = params.omega_m_hz;
    let omega_minus = core::f64::consts::TAU * constants.c / params.lambda_minus_m;
    let omega_c = omega_minus + omega_m;
    let omega_plus = omega_c + omega_m;
    let kappa_abs = params.kappa_ratio * omega_m;

    let drive = |power: f64, omega_drive: f64| {
        libm::sqrt(kappa_abs * power / (constants.hbar * omega_drive)) / omega_m
    };
    let eps_plus = drive(params.power_plus_w, omega_plus);
    let eps_minus = drive(params.power_minus_w, omega_minus);

    let n_th = if params.temperature_k == 0.0 {
        0.0
    } else {
        let x = constants.hbar * omega_m / (constants.kb * params.temperature_k);
        // expm1 keeps the high-temperature limit accurate; overflow at low
        // temperature gives +inf and therefore n_th = 0.
        1.0 / libm::expm1(x)
    };

    let base = SystemParams {
        kappa: params.kappa_ratio,
        gamma_m: params.gamma_ratio,
        g0: params.g0_ratio,
        g_minus: 0.0,
        g_plus: 0.0,
        gain: params.gain_ratio,
        theta: params.theta,
        n_th,
        pump_freq: None,
    }
    .validated()?;

    Ok((
        base,
        Drives {
            eps_plus,
            eps_minus,
            omega_c: omega_c / omega_m,
        },
    ))
}

const FIXED_POINT_TOL: f64 = 1e-10;
const FIXED_POINT_CAP: u32 = 100;
const DENOMINATOR_FLOOR: f64 = 1e-9;

/// Solves the classical fixed point for the sideband amplitudes, the
/// static displacement, and the shifted cavity frequency.
///
/// The displacement feeds back on the detunings through
/// `omega_c_eff = omega_c - 2 g0 beta`, so the amplitudes are iterated to a
/// relative tolerance of 1e-10. The returned amplitudes are magnitudes;
/// `|alpha|^2` is evaluated as `alpha_plus^2 + alpha_minus^2`, dropping the
/// component beating at twice the mechanical frequency.
pub fn solve_steady_amplitudes(params: &SystemParams, drives: &Drives) -> Result<SteadyState> {
    for (field, value) in [
        ("eps_plus", drives.eps_plus),
        ("eps_minus", drives.eps_minus),
        ("omega_c", drives.omega_c),
    ] {
        if !value.is_finite() {
            return Err(Error::InvalidParameter { field, value });
        }
    }
    for (field, value) in [
        ("eps_plus", drives.eps_plus),
        ("eps_minus", drives.eps_minus),
    ] {
        if value < 0.0 {
            return Err(Error::InvalidParameter { field, value });
        }
    }

    let gain2 = 4.0 * params.gain * params.gain;
    let kappa2 = params.kappa * params.kappa;
    let amplitude = |eps: f64, detuning: f64| -> Result<f64> {
        let den = gain2 - kappa2 - 4.0 * detuning * detuning;
        if den.abs() < DENOMINATOR_FLOOR {
            return Err(Error::Singularity {
                context: "steady-state denominator",
                value: den,
            });
        }
        Ok(2.0 * eps * libm::sqrt(kappa2 + 4.0 * detuning * detuning) / den.abs())
    };

    let mut beta = 0.0_f64;
    for iteration in 1..=FIXED_POINT_CAP {
        let shift = 2.0 * params.g0 * beta;
        let alpha_plus = amplitude(drives.eps_plus, 1.0 + shift)?;
        let alpha_minus = amplitude(drives.eps_minus, -1.0 + shift)?;
        let next = params.g0 * (alpha_plus * alpha_plus + alpha_minus * alpha_minus);
        if (next - beta).abs() <= FIXED_POINT_TOL * next.abs().max(1.0) {
            return Ok(SteadyState {
                alpha_plus,
                alpha_minus,
                beta: next,
                omega_c_eff: drives.omega_c - 2.0 * params.g0 * next,
                iterations: iteration,
            });
        }
        beta = next;
    }
    Err(Error::Convergence {
        iterations: FIXED_POINT_CAP,
    })
}

/// Effective couplings `g = g0 alpha` for both tones, plus the Bogoliubov
/// squeezing coefficient and effective coupling when they are defined.
pub fn couplings(steady: &SteadyState, g0: f64) -> Result<Couplings> {
    if !g0.is_finite() || g0 < 0.0 {
        return Err(Error::InvalidParameter {
            field: "g0",
            value: g0,
        });
    }
    Ok(Couplings::from_rates(
        g0 * steady.alpha_minus,
        g0 * steady.alpha_plus,
    ))
}
