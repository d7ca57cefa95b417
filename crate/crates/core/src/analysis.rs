//! Squeezing measures, the weak-coupling closed-form solution obtained by
//! adiabatically eliminating the cavity, Wigner-function grids, and the
//! optimal-ratio search.

use alloc::vec::Vec;
use nalgebra::{Complex, Matrix2};

use crate::dynamics::{steady_state_covariance, CovarianceMatrix};
use crate::error::{Error, Result};
use crate::model::SystemParams;

/// Vacuum variance of a quadrature in this convention.
const VACUUM_VARIANCE: f64 = 0.5;

/// Squeezing of a variance relative to vacuum, in dB. Positive values mean
/// squeezed below the vacuum level; 3.0103 dB is half the vacuum variance.
pub fn squeezing_db(variance: f64) -> Result<f64> {
    if !variance.is_finite() || variance <= 0.0 {
        return Err(Error::InvalidParameter {
            field: "variance",
            value: variance,
        });
    }
    Ok(-10.0 * libm::log10(variance / VACUUM_VARIANCE))
}

/// Numeric and closed-form position statistics for one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SqueezingReport {
    pub variance_q_numeric: f64,
    pub variance_q_analytic: f64,
    pub s_db_numeric: f64,
    pub s_db_analytic: f64,
    pub params_echo: SystemParams,
}

/// Builds the combined report from the stationary covariance and the
/// closed-form variance.
pub fn squeezing_report(sp: &SystemParams) -> Result<SqueezingReport> {
    let v = steady_state_covariance(sp)?;
    let variance_q_numeric = v.variance_q();
    let variance_q_analytic = analytic_variance_q(sp)?;
    Ok(SqueezingReport {
        variance_q_numeric,
        variance_q_analytic,
        s_db_numeric: squeezing_db(variance_q_numeric)?,
        s_db_analytic: squeezing_db(variance_q_analytic)?,
        params_echo: *sp,
    })
}

/// Coefficients of the effective mechanical equation of motion after the
/// cavity has been eliminated at its instantaneous steady state.
///
/// `coef_a`/`coef_b` multiply the slow mechanical operator and its
/// conjugate (units of `omega_m`); `coef_c`/`coef_d` scale the optical
/// input noise and `coef_e` the mechanical one (units of `sqrt(omega_m)`).
/// `q_drift_rate` is the resulting relaxation rate of the position
/// variance and `noise_q_optical`/`noise_q_thermal` the two white-noise
/// powers feeding it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiabaticModel {
    pub coef_a: Complex<f64>,
    pub coef_b: Complex<f64>,
    pub coef_c: Complex<f64>,
    pub coef_d: Complex<f64>,
    pub coef_e: f64,
    pub q_drift_rate: f64,
    pub noise_q_optical: f64,
    pub noise_q_thermal: f64,
}

/// Evaluates the adiabatic coefficients. Valid away from the parametric
/// instability edge `kappa = 2 gain`; the weak-coupling assumption
/// (`g_minus, g_plus << kappa`) is the caller's responsibility.
pub fn adiabatic_model(sp: &SystemParams) -> Result<AdiabaticModel> {
    let kappa = sp.kappa;
    let gain = sp.gain;
    let den = kappa * kappa - 4.0 * gain * gain;
    if den.abs() < 1e-12 {
        return Err(Error::Singularity {
            context: "adiabatic denominator kappa^2 - 4 gain^2",
            value: den,
        });
    }
    let gm = sp.g_minus;
    let gp = sp.g_plus;
    let phase = Complex::new(libm::cos(sp.theta), libm::sin(sp.theta));
    let phase_conj = phase.conj();

    let coef_a = (-gm * (Complex::new(2.0 * kappa * gm, 0.0) - 4.0 * gain * gp * phase)
        + gp * (Complex::new(2.0 * kappa * gp, 0.0) - 4.0 * gain * gm * phase_conj))
        / den;
    let coef_b = (-gm * (Complex::new(2.0 * kappa * gp, 0.0) - 4.0 * gain * gm * phase)
        + gp * (Complex::new(2.0 * kappa * gm, 0.0) - 4.0 * gain * gp * phase_conj))
        / den;
    let sqrt_kappa = libm::sqrt(kappa);
    let coef_c = Complex::new(0.0, sqrt_kappa)
        * (4.0 * gain * gp * phase_conj + Complex::new(2.0 * kappa * gm, 0.0))
        / den;
    let coef_d = Complex::new(0.0, sqrt_kappa)
        * (4.0 * gain * gm * phase + Complex::new(2.0 * kappa * gp, 0.0))
        / den;

    let dg2 = gm * gm - gp * gp;
    let q_drift_rate = -2.0 * dg2 / (kappa + 2.0 * gain);
    let noise_q_optical =
        2.0 * kappa * (gm - gp) * (gm - gp) / ((kappa + 2.0 * gain) * (kappa + 2.0 * gain));
    let noise_q_thermal = 0.5 * sp.gamma_m * (2.0 * sp.n_th + 1.0);

    Ok(AdiabaticModel {
        coef_a,
        coef_b,
        coef_c,
        coef_d,
        coef_e: libm::sqrt(sp.gamma_m),
        q_drift_rate,
        noise_q_optical,
        noise_q_thermal,
    })
}

/// Closed-form stationary position variance in the weak-coupling limit,
/// including the thermal-occupation factor.
pub fn analytic_variance_q(sp: &SystemParams) -> Result<f64> {
    if sp.g_plus >= sp.g_minus {
        return Err(Error::Domain {
            context: "closed-form variance needs g_plus < g_minus",
        });
    }
    if sp.kappa + 2.0 * sp.gain <= 0.0 {
        return Err(Error::Domain {
            context: "closed-form variance needs kappa + 2 gain > 0",
        });
    }
    let dg2 = sp.g_minus * sp.g_minus - sp.g_plus * sp.g_plus;
    Ok(sp.kappa * (sp.g_minus - sp.g_plus)
        / (2.0 * (sp.kappa + 2.0 * sp.gain) * (sp.g_minus + sp.g_plus))
        + sp.gamma_m * (sp.kappa + 2.0 * sp.gain) * (2.0 * sp.n_th + 1.0) / (8.0 * dg2))
}

/// Companion closed form for the momentum variance, derived by the same
/// elimination with the anti-squeezed cavity quadrature; used to
/// cross-check `V44`.
pub fn analytic_variance_p(sp: &SystemParams) -> Result<f64> {
    if sp.g_plus >= sp.g_minus {
        return Err(Error::Domain {
            context: "closed-form variance needs g_plus < g_minus",
        });
    }
    if sp.kappa <= 2.0 * sp.gain {
        return Err(Error::Domain {
            context: "closed-form momentum variance needs kappa > 2 gain",
        });
    }
    let dg2 = sp.g_minus * sp.g_minus - sp.g_plus * sp.g_plus;
    Ok(sp.kappa * (sp.g_minus + sp.g_plus)
        / (2.0 * (sp.kappa - 2.0 * sp.gain) * (sp.g_minus - sp.g_plus))
        + sp.gamma_m * (sp.kappa - 2.0 * sp.gain) * (2.0 * sp.n_th + 1.0) / (8.0 * dg2))
}

/// Closed-form squeezing degree in dB.
pub fn analytic_squeezing_db(sp: &SystemParams) -> Result<f64> {
    squeezing_db(analytic_variance_q(sp)?)
}

/// Which 2x2 block of the covariance matrix a Wigner grid describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum CovBlock {
    Mechanical,
    Cavity,
}

/// Axis ranges and resolution for a Wigner grid. Ranges left as `None`
/// default to +-5 standard deviations of the corresponding quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerGridSpec {
    pub q_range: Option<(f64, f64)>,
    pub p_range: Option<(f64, f64)>,
    pub points: usize,
}

impl Default for WignerGridSpec {
    fn default() -> Self {
        Self {
            q_range: None,
            p_range: None,
            points: 201,
        }
    }
}

/// Gaussian Wigner function sampled on a rectangular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub q_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    /// Row-major over `q`: `values[iq * p_axis.len() + ip]`.
    pub values: Vec<f64>,
    pub block: CovBlock,
    /// Determinant of the selected covariance block.
    pub det: f64,
    /// Set when either axis spans less than two standard deviations.
    pub undersized: bool,
}

impl WignerGrid {
    pub fn value(&self, iq: usize, ip: usize) -> f64 {
        self.values[iq * self.p_axis.len() + ip]
    }

    /// Trapezoidal integral over the grid; close to one when the grid
    /// covers the distribution.
    pub fn integral(&self) -> f64 {
        let nq = self.q_axis.len();
        let np = self.p_axis.len();
        if nq < 2 || np < 2 {
            return 0.0;
        }
        let hq = (self.q_axis[nq - 1] - self.q_axis[0]) / (nq - 1) as f64;
        let hp = (self.p_axis[np - 1] - self.p_axis[0]) / (np - 1) as f64;
        let mut sum = 0.0;
        for iq in 0..nq {
            let wq = if iq == 0 || iq == nq - 1 { 0.5 } else { 1.0 };
            for ip in 0..np {
                let wp = if ip == 0 || ip == np - 1 { 0.5 } else { 1.0 };
                sum += wq * wp * self.value(iq, ip);
            }
        }
        sum * hq * hp
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + i as f64 * step).collect()
}

/// Evaluates the Gaussian Wigner function of one covariance block:
/// `exp(-r^T B^-1 r / 2) / (2 pi sqrt(det B))`.
pub fn wigner(v: &CovarianceMatrix, block: CovBlock, grid: &WignerGridSpec) -> Result<WignerGrid> {
    if grid.points < 2 {
        return Err(Error::InvalidParameter {
            field: "points",
            value: grid.points as f64,
        });
    }
    let b: Matrix2<f64> = match block {
        CovBlock::Mechanical => v.mechanical_block(),
        CovBlock::Cavity => v.cavity_block(),
    };
    let det = b.determinant();
    if det <= 1e-10 {
        return Err(Error::Singularity {
            context: "covariance block determinant",
            value: det,
        });
    }
    let inv = b.try_inverse().ok_or(Error::Singularity {
        context: "covariance block inverse",
        value: det,
    })?;

    let sigma_q = libm::sqrt(b[(0, 0)]);
    let sigma_p = libm::sqrt(b[(1, 1)]);
    let auto = 5.0 * sigma_q.max(sigma_p);
    let (q_lo, q_hi) = grid.q_range.unwrap_or((-auto, auto));
    let (p_lo, p_hi) = grid.p_range.unwrap_or((-auto, auto));
    for (field, (lo, hi)) in [("q_range", (q_lo, q_hi)), ("p_range", (p_lo, p_hi))] {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::InvalidParameter {
                field,
                value: hi - lo,
            });
        }
    }
    let undersized = (q_hi - q_lo) < 2.0 * sigma_q || (p_hi - p_lo) < 2.0 * sigma_p;

    let q_axis = linspace(q_lo, q_hi, grid.points);
    let p_axis = linspace(p_lo, p_hi, grid.points);
    let norm = 1.0 / (core::f64::consts::TAU * libm::sqrt(det));
    let mut values = Vec::with_capacity(q_axis.len() * p_axis.len());
    for &q in &q_axis {
        for &p in &p_axis {
            let quad = inv[(0, 0)] * q * q + 2.0 * inv[(0, 1)] * q * p + inv[(1, 1)] * p * p;
            values.push(norm * libm::exp(-0.5 * quad));
        }
    }
    Ok(WignerGrid {
        q_axis,
        p_axis,
        values,
        block,
        det,
        undersized,
    })
}

/// Clamp keeping the ratio search away from the `g_plus -> g_minus`
/// divergence of the thermal term.
const RATIO_CLAMP: f64 = 1.0 - 1e-4;
const RATIO_TOL: f64 = 1e-6;

/// Golden-section minimization of the closed-form position variance over
/// the tone ratio `x = g_plus / g_minus`, at fixed `g_minus`.
///
/// Returns the optimal ratio and the squeezing there in dB. Deterministic;
/// ties resolve toward the lower ratio.
pub fn optimal_ratio_search(sp_template: &SystemParams, lo: f64, hi: f64) -> Result<(f64, f64)> {
    if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || hi >= 1.0 || lo >= hi {
        return Err(Error::Domain {
            context: "ratio range must satisfy 0 < lo < hi < 1",
        });
    }
    let hi = hi.min(RATIO_CLAMP);
    if lo >= hi {
        return Err(Error::Domain {
            context: "ratio range empty after clamping",
        });
    }
    let objective = |x: f64| -> Result<f64> {
        let sp = SystemParams {
            g_plus: x * sp_template.g_minus,
            ..*sp_template
        };
        analytic_variance_q(&sp)
    };

    let inv_phi = (libm::sqrt(5.0) - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    while b - a > RATIO_TOL {
        let c1 = b - inv_phi * (b - a);
        let c2 = a + inv_phi * (b - a);
        if objective(c1)? <= objective(c2)? {
            b = c2;
        } else {
            a = c1;
        }
    }
    let x_star = 0.5 * (a + b);
    let s_star = squeezing_db(objective(x_star)?)?;
    Ok((x_star, s_star))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn defaults() -> SystemParams {
        SystemParams::default().validated().unwrap()
    }

    #[test]
    fn vacuum_is_zero_db() {
        assert_eq!(squeezing_db(0.5).unwrap(), 0.0);
    }

    #[test]
    fn half_vacuum_is_the_three_db_limit() {
        assert_relative_eq!(
            squeezing_db(0.25).unwrap(),
            3.010_299_956_639_812,
            max_relative = 1e-14
        );
    }

    #[test]
    fn reported_variance_converts_to_reported_db() {
        let s = squeezing_db(0.1565).unwrap();
        assert_abs_diff_eq!(s, 5.04, epsilon = 0.01);
    }

    #[test]
    fn nonpositive_variance_is_rejected() {
        assert!(squeezing_db(0.0).is_err());
        assert!(squeezing_db(-1.0).is_err());
        assert!(squeezing_db(f64::NAN).is_err());
    }

    #[test]
    fn adiabatic_coefficients_without_gain() {
        let sp = SystemParams {
            g_plus: 0.0,
            gain: 0.0,
            ..defaults()
        }
        .validated()
        .unwrap();
        let model = adiabatic_model(&sp).unwrap();
        let expected_a = -2.0 * sp.g_minus * sp.g_minus / sp.kappa;
        assert_relative_eq!(model.coef_a.re, expected_a, max_relative = 1e-12);
        assert_abs_diff_eq!(model.coef_a.im, 0.0, epsilon = 1e-18);
        assert_abs_diff_eq!(model.coef_b.re, 0.0, epsilon = 1e-18);
        assert_abs_diff_eq!(model.coef_b.im, 0.0, epsilon = 1e-18);
        assert_relative_eq!(model.q_drift_rate, expected_a, max_relative = 1e-12);
        assert_eq!(model.coef_e, libm::sqrt(sp.gamma_m));
    }

    #[test]
    fn adiabatic_rate_and_noise_match_independent_arithmetic() {
        let model = adiabatic_model(&defaults()).unwrap();
        // 2 (g_plus^2 - g_minus^2) / (kappa + 2 gain)
        assert_relative_eq!(model.q_drift_rate, -2.048e-3, max_relative = 1e-10);
        // 2 kappa (g_minus - g_plus)^2 / (kappa + 2 gain)^2
        assert_relative_eq!(model.noise_q_optical, 6.4e-4, max_relative = 1e-10);
        assert_relative_eq!(model.noise_q_thermal, 5e-7, max_relative = 1e-12);
    }

    #[test]
    fn adiabatic_sum_rule_at_zero_phase() {
        for (gm, gp, gain) in [
            (0.01, 0.0028, 0.02),
            (0.008, 0.001, 0.0),
            (0.01, 0.009, 0.01),
        ] {
            let sp = SystemParams {
                g_minus: gm,
                g_plus: gp,
                gain,
                theta: 0.0,
                ..defaults()
            }
            .validated()
            .unwrap();
            let model = adiabatic_model(&sp).unwrap();
            let sum = model.coef_a + model.coef_b;
            assert_relative_eq!(sum.re, model.q_drift_rate, max_relative = 1e-12);
            assert_abs_diff_eq!(sum.im, 0.0, epsilon = 1e-18);
        }
    }

    #[test]
    fn adiabatic_model_rejects_instability_edge() {
        let sp = SystemParams {
            gain: 0.025,
            ..defaults()
        };
        assert!(matches!(
            adiabatic_model(&sp),
            Err(Error::Singularity { .. })
        ));
    }

    #[test]
    fn closed_form_variance_values() {
        let no_gain = SystemParams {
            gain: 0.0,
            ..defaults()
        };
        assert_relative_eq!(
            analytic_variance_q(&no_gain).unwrap(),
            0.281_317_816_840_277_8,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            analytic_variance_q(&defaults()).unwrap(),
            0.156_372_070_312_5,
            max_relative = 1e-12
        );
        let cooling = SystemParams {
            g_plus: 0.0,
            gain: 0.0,
            ..defaults()
        };
        assert_relative_eq!(
            analytic_variance_q(&cooling).unwrap(),
            0.500_062_5,
            max_relative = 1e-12
        );
    }

    #[test]
    fn closed_form_momentum_values() {
        let vp = analytic_variance_p(&defaults()).unwrap();
        assert_abs_diff_eq!(vp, 4.444, epsilon = 1e-3);
        let vq = analytic_variance_q(&defaults()).unwrap();
        assert!(vq * vp >= 0.25);
        assert_abs_diff_eq!(vq * vp, 0.695, epsilon = 1e-3);

        let cooling = SystemParams {
            g_plus: 0.0,
            gain: 0.0,
            ..defaults()
        };
        assert_abs_diff_eq!(analytic_variance_p(&cooling).unwrap(), 0.5, epsilon = 1e-4);
    }

    #[test]
    fn closed_forms_reject_out_of_domain_parameters() {
        let flipped = SystemParams {
            g_plus: 0.02,
            ..defaults()
        };
        assert!(matches!(
            analytic_variance_q(&flipped),
            Err(Error::Domain { .. })
        ));
        let over_gain = SystemParams {
            gain: 0.03,
            ..defaults()
        };
        assert!(matches!(
            analytic_variance_p(&over_gain),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn labeled_points_reproduce_quoted_squeezing() {
        // {ratio, gain/kappa} -> quoted dB
        let cases = [
            (0.28, 0.06, 3.00),
            (0.0, 0.06, 0.49),
            (0.0, 0.40, 2.55),
            (0.28, 0.40, 5.05),
        ];
        for (ratio, gain_frac, quoted) in cases {
            let sp = SystemParams {
                g_plus: ratio * 0.01,
                gain: gain_frac * 0.05,
                ..defaults()
            }
            .validated()
            .unwrap();
            let s = analytic_squeezing_db(&sp).unwrap();
            assert_abs_diff_eq!(s, quoted, epsilon = 0.02);
        }
    }

    #[test]
    fn squeezing_grows_monotonically_with_gain() {
        let mut last = f64::NEG_INFINITY;
        for i in 0..=40 {
            let gain = 0.45 * 0.05 * i as f64 / 40.0;
            let sp = SystemParams { gain, ..defaults() };
            let s = analytic_squeezing_db(&sp).unwrap();
            assert!(s > last);
            last = s;
        }
    }

    #[test]
    fn thermal_occupation_keeps_strong_squeezing() {
        let sp = SystemParams {
            n_th: 100.0,
            ..defaults()
        };
        let s = analytic_squeezing_db(&sp).unwrap();
        assert_abs_diff_eq!(s, 4.418, epsilon = 2e-3);
        assert!(s > 3.0);
    }

    #[test]
    fn wigner_vacuum_peak() {
        let v = crate::dynamics::initial_covariance(0.0).unwrap();
        let grid = wigner(&v, CovBlock::Mechanical, &WignerGridSpec::default()).unwrap();
        // Odd point count puts a sample exactly at the origin.
        let mid = grid.q_axis.len() / 2;
        assert_relative_eq!(
            grid.value(mid, mid),
            core::f64::consts::FRAC_1_PI,
            max_relative = 1e-12
        );
        assert!(!grid.undersized);
    }

    #[test]
    fn wigner_peak_identity_and_normalization() {
        let v = steady_state_covariance(&defaults()).unwrap();
        for block in [CovBlock::Mechanical, CovBlock::Cavity] {
            let grid = wigner(&v, block, &WignerGridSpec::default()).unwrap();
            let mid = grid.q_axis.len() / 2;
            let expected_peak = 1.0 / (core::f64::consts::TAU * libm::sqrt(grid.det));
            assert_relative_eq!(grid.value(mid, mid), expected_peak, max_relative = 1e-12);
            let integral = grid.integral();
            assert!((0.99..=1.01).contains(&integral), "integral = {integral}");
        }
    }

    #[test]
    fn wigner_shape_shows_position_squeezing() {
        // Narrow along Q, wide along P at the reference point.
        let v = steady_state_covariance(&defaults()).unwrap();
        let b = v.mechanical_block();
        assert!(b[(0, 0)] < 0.5 && 0.5 < b[(1, 1)]);
        let grid = wigner(&v, CovBlock::Mechanical, &WignerGridSpec::default()).unwrap();
        let mid = grid.q_axis.len() / 2;
        // Value drops faster along q than along p at equal offsets.
        let dq = grid.value(mid + 10, mid);
        let dp = grid.value(mid, mid + 10);
        assert!(dq < dp);
    }

    #[test]
    fn wigner_flags_undersized_grids() {
        let v = crate::dynamics::initial_covariance(0.0).unwrap();
        let spec = WignerGridSpec {
            q_range: Some((-0.5, 0.5)),
            p_range: Some((-0.5, 0.5)),
            points: 21,
        };
        let grid = wigner(&v, CovBlock::Mechanical, &spec).unwrap();
        assert!(grid.undersized);
    }

    #[test]
    fn wigner_rejects_singular_blocks() {
        let v = CovarianceMatrix::from_diagonal([0.5, 0.5, 1e-8, 1e-8]);
        assert!(matches!(
            wigner(&v, CovBlock::Mechanical, &WignerGridSpec::default()),
            Err(Error::Singularity { .. })
        ));
    }

    #[test]
    fn ratio_search_finds_the_strong_squeezing_peak() {
        let (x_star, s_star) = optimal_ratio_search(&defaults(), 1e-6, 0.9999).unwrap();
        assert!((19.2..=19.7).contains(&s_star), "s* = {s_star}");
        assert!((0.95..=0.999).contains(&x_star), "x* = {x_star}");
        assert_abs_diff_eq!(x_star, 0.9801, epsilon = 1e-3);
    }

    #[test]
    fn ratio_search_without_thermal_term_hits_the_clamp() {
        let sp = SystemParams {
            gamma_m: 0.0,
            ..defaults()
        };
        let (x_star, _) = optimal_ratio_search(&sp, 0.1, 0.9999).unwrap();
        // Variance is monotone decreasing in x, so the optimum is the
        // clamped upper edge.
        assert!(x_star > RATIO_CLAMP - 1e-4);
    }

    #[test]
    fn ratio_search_rejects_bad_ranges() {
        assert!(optimal_ratio_search(&defaults(), 0.5, 0.5).is_err());
        assert!(optimal_ratio_search(&defaults(), 0.0, 0.5).is_err());
        assert!(optimal_ratio_search(&defaults(), 0.2, 1.0).is_err());
        assert!(optimal_ratio_search(&defaults(), 0.99995, 0.99999).is_err());
    }

    #[test]
    fn report_combines_numeric_and_analytic_paths() {
        let report = squeezing_report(&defaults()).unwrap();
        assert_abs_diff_eq!(report.variance_q_numeric, 0.1565, epsilon = 1e-3);
        assert_relative_eq!(
            report.variance_q_analytic,
            0.156_372_070_312_5,
            max_relative = 1e-12
        );
        assert!((report.s_db_numeric - report.s_db_analytic).abs() < 0.1);
        assert_eq!(report.params_echo, defaults());
    }

    #[test]
    fn phase_sweep_is_periodic_with_maximum_at_zero() {
        let s_at = |theta: f64| {
            let sp = SystemParams {
                theta,
                ..defaults()
            }
            .validated()
            .unwrap();
            let v = steady_state_covariance(&sp).unwrap();
            squeezing_db(v.variance_q()).unwrap()
        };
        let s0 = s_at(0.0);
        let tau = core::f64::consts::TAU;
        for k in 1..=12 {
            let theta = k as f64 * core::f64::consts::FRAC_PI_6;
            let s = s_at(theta);
            assert!(s0 >= s, "S(0) = {s0} < S({theta}) = {s}");
            let shifted = theta + tau;
            if shifted - tau == theta {
                // The addition was exact, so the reduced phase and hence
                // the whole pipeline must match bit for bit.
                assert_eq!(s.to_bits(), s_at(shifted).to_bits());
            } else {
                assert_relative_eq!(s, s_at(shifted), max_relative = 1e-12);
            }
        }
    }
}
