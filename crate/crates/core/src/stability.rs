//! Stability analysis of the rotating-wave drift matrix: closed-form
//! Routh-Hurwitz inequalities, the eigenvalue test, and the simple
//! sufficient condition `gain < kappa/2` with `g_plus < g_minus`.

use crate::dynamics::{drift_rwa, DriftMatrix};
use crate::error::{Error, Result};
use crate::model::SystemParams;

/// A Routh-Hurwitz value this close to zero marks the point as marginal;
/// the combined terms span roughly twelve orders of magnitude, so only an
/// exact tie is treated as undecidable.
const MARGINAL_TOL: f64 = 1e-18;
/// Eigenvalue verdict threshold: stable means `max Re < -1e-12`.
const EIG_TOL: f64 = -1e-12;

/// Combined stability verdicts for one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StabilityReport {
    /// Left-hand sides of the three closed-form inequalities
    /// (powers of `omega_m`); all positive means stable.
    pub rh_values: [f64; 3],
    pub rh_stable: bool,
    /// True when any inequality value sits within the marginal band.
    pub marginal: bool,
    /// Largest real part over the four drift eigenvalues.
    pub max_real_eig: f64,
    pub eig_stable: bool,
    /// `gain < kappa/2` and `g_plus < g_minus`.
    pub sufficient: bool,
}

/// Evaluates the three closed-form inequalities together with the
/// eigenvalue test on the rotating-wave drift.
///
/// The phase does not enter the inequalities, so `rh_values` are
/// bit-identical across `theta`. The eigenvalue verdict is the one other
/// modules rely on.
pub fn routh_hurwitz(sp: &SystemParams) -> Result<StabilityReport> {
    let kappa = sp.kappa;
    let gamma = sp.gamma_m;
    let dg2 = sp.g_minus * sp.g_minus - sp.g_plus * sp.g_plus;
    let k2 = kappa * kappa - 4.0 * sp.gain * sp.gain;

    let rh_values = [
        gamma * gamma / 16.0 * k2 + 0.5 * kappa * gamma * dg2 + dg2 * dg2,
        0.25 * kappa * k2
            + (dg2 + 0.25 * (gamma * gamma + 3.0 * kappa * gamma)) * (kappa + gamma)
            + 0.25 * kappa * kappa * gamma,
        (kappa * gamma * k2
            + 4.0 * dg2 * (kappa + gamma) * (kappa + gamma)
            + kappa * gamma * gamma * gamma
            + 2.0 * kappa * kappa * gamma * gamma)
            * (k2 + gamma * gamma + 2.0 * kappa * gamma)
            / 16.0,
    ];
    let rh_stable = rh_values.iter().all(|v| *v > MARGINAL_TOL);
    let marginal = rh_values.iter().any(|v| v.abs() <= MARGINAL_TOL);

    let (max_real_eig, eig_stable) = eigen_stable(&drift_rwa(sp))?;

    Ok(StabilityReport {
        rh_values,
        rh_stable,
        marginal,
        max_real_eig,
        eig_stable,
        sufficient: sp.gain < 0.5 * sp.kappa && sp.g_plus < sp.g_minus,
    })
}

/// Largest real part of the drift eigenvalues and the stability verdict.
/// Only stationary (rotating-wave) builds are accepted.
pub fn eigen_stable(drift: &DriftMatrix) -> Result<(f64, bool)> {
    if !drift.is_stationary() {
        return Err(Error::Domain {
            context: "eigenvalue test requires the stationary drift matrix",
        });
    }
    let schur = drift
        .matrix()
        .try_schur(f64::EPSILON, 10_000)
        .ok_or(Error::Numerical {
            context: "drift eigenvalue solve",
        })?;
    let max_real_eig = schur
        .complex_eigenvalues()
        .iter()
        .map(|c| c.re)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok((max_real_eig, max_real_eig < EIG_TOL))
}
