//! Property tests for the invariants that should hold across the whole
//! stable parameter region, not just at hand-picked points.

use optomech_core::{
    analysis, diffusion, drift_rwa, drift_time_dependent, initial_covariance, normalize_params,
    routh_hurwitz, steady_state_covariance, CovBlock, PhysicalConstants, PhysicalParams,
    SystemParams, WignerGridSpec,
};
use proptest::prelude::*;

fn stable_params() -> impl Strategy<Value = SystemParams> {
    // kappa anywhere in the sideband-resolved range, couplings well below
    // it, gain below the parametric threshold: the sufficient stability
    // condition holds by construction.
    (
        0.01..0.1f64,                // kappa
        0.0..1.0f64,                 // gamma scale
        0.05..0.2f64,                // g_minus / kappa
        0.0..0.95f64,                // ratio
        0.0..0.45f64,                // gain / kappa
        0.0..core::f64::consts::TAU, // theta
        0.0..100.0f64,               // n_th
    )
        .prop_map(
            |(kappa, gamma_scale, gm_frac, ratio, gain_frac, theta, n_th)| {
                let g_minus = gm_frac * kappa;
                SystemParams {
                    kappa,
                    gamma_m: 1e-4 * kappa * gamma_scale,
                    g0: 2e-5,
                    g_minus,
                    g_plus: ratio * g_minus,
                    gain: gain_frac * kappa,
                    theta,
                    n_th,
                    pump_freq: None,
                }
                .validated()
                .unwrap()
            },
        )
}

fn max_abs(m: &nalgebra::Matrix4<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stationary_covariance_is_physical(sp in stable_params()) {
        let report = routh_hurwitz(&sp).unwrap();
        prop_assume!(report.eig_stable);
        let v = steady_state_covariance(&sp).unwrap();

        // Symmetric, positive semidefinite, and obeying the mechanical
        // uncertainty bound.
        let asym = max_abs(&(v.matrix() - v.matrix().transpose()));
        prop_assert!(asym < 1e-12);
        prop_assert!(v.min_eigenvalue() > -1e-10);
        prop_assert!(v.mechanical_det() >= 0.25 - 1e-8);

        // Residual of the stationary equation stays at solver precision.
        let m = drift_rwa(&sp);
        let d = diffusion(&sp);
        let residual = m.matrix() * v.matrix()
            + v.matrix() * m.matrix().transpose()
            + d.matrix();
        prop_assert!(max_abs(&residual) < 1e-10);
    }

    #[test]
    fn drift_period_average_is_the_rwa_matrix(sp in stable_params()) {
        let period = core::f64::consts::PI;
        let n = 64;
        let mut acc = nalgebra::Matrix4::<f64>::zeros();
        for i in 0..n {
            let t = (i as f64 + 0.5) * period / n as f64;
            acc += drift_time_dependent(&sp, t).matrix();
        }
        acc /= n as f64;
        prop_assert!(max_abs(&(acc - drift_rwa(&sp).matrix())) < 1e-8);
    }

    #[test]
    fn routh_hurwitz_values_are_phase_blind(sp in stable_params()) {
        let base = routh_hurwitz(&sp).unwrap();
        for theta in [0.0, core::f64::consts::FRAC_PI_3, core::f64::consts::PI] {
            let rotated = SystemParams { theta, ..sp }.validated().unwrap();
            let report = routh_hurwitz(&rotated).unwrap();
            for k in 0..3 {
                prop_assert_eq!(report.rh_values[k].to_bits(), base.rh_values[k].to_bits());
            }
        }
    }

    #[test]
    fn sufficient_condition_implies_eigen_stability(sp in stable_params()) {
        let report = routh_hurwitz(&sp).unwrap();
        prop_assert!(report.sufficient);
        prop_assert!(report.eig_stable);
    }

    #[test]
    fn wigner_peak_matches_the_block_determinant(sp in stable_params()) {
        let report = routh_hurwitz(&sp).unwrap();
        prop_assume!(report.eig_stable);
        let v = steady_state_covariance(&sp).unwrap();
        for block in [CovBlock::Mechanical, CovBlock::Cavity] {
            let grid = analysis::wigner(&v, block, &WignerGridSpec::default()).unwrap();
            let mid = grid.q_axis.len() / 2;
            let expected = 1.0 / (core::f64::consts::TAU * grid.det.sqrt());
            prop_assert!((grid.value(mid, mid) / expected - 1.0).abs() < 1e-12);
            let integral = grid.integral();
            prop_assert!((0.99..=1.01).contains(&integral));
        }
    }

    #[test]
    fn trajectories_stay_physical(sp in stable_params(), n0 in 0.0..20.0f64) {
        let v0 = initial_covariance(n0).unwrap();
        let tr = optomech_core::evolve(&sp, &v0, 200.0, 0.02, true, 200).unwrap();
        for (t, state) in tr.times.iter().zip(&tr.states) {
            prop_assert!(t.is_finite());
            let asym = max_abs(&(state.matrix() - state.matrix().transpose()));
            prop_assert!(asym < 1e-12);
            prop_assert!(state.min_eigenvalue() > -1e-10);
            prop_assert!(state.mechanical_det() >= 0.25 - 1e-8);
        }
    }

    #[test]
    fn normalization_is_invariant_under_common_rescaling(
        scale in 0.1..10.0f64,
        power in 1e-6..1e-2f64,
        temperature in 0.0..1.0f64,
    ) {
        let constants = PhysicalConstants::si();
        let base = PhysicalParams {
            omega_m_hz: core::f64::consts::TAU * 25.45e6,
            lambda_minus_m: 1564.25e-9,
            power_plus_w: 0.3 * power,
            power_minus_w: power,
            temperature_k: temperature,
            kappa_ratio: 0.05,
            gamma_ratio: 1e-6,
            g0_ratio: 2e-5,
            gain_ratio: 0.02,
            theta: 0.0,
        };
        let scaled = PhysicalParams {
            omega_m_hz: base.omega_m_hz * scale,
            temperature_k: base.temperature_k * scale,
            lambda_minus_m: base.lambda_minus_m / scale,
            power_plus_w: base.power_plus_w * scale * scale,
            power_minus_w: base.power_minus_w * scale * scale,
            ..base
        };
        let (sp_a, dr_a) = normalize_params(&base, &constants).unwrap();
        let (sp_b, dr_b) = normalize_params(&scaled, &constants).unwrap();
        prop_assert!((sp_a.n_th - sp_b.n_th).abs() <= 1e-12 * sp_a.n_th.abs().max(1.0));
        prop_assert!((dr_a.eps_minus / dr_b.eps_minus - 1.0).abs() < 1e-12);
        prop_assert!((dr_a.eps_plus / dr_b.eps_plus - 1.0).abs() < 1e-12);
        prop_assert!((dr_a.omega_c / dr_b.omega_c - 1.0).abs() < 1e-12);
        prop_assert_eq!(sp_a.kappa, sp_b.kappa);
    }

    #[test]
    fn analytic_and_numeric_squeezing_agree_when_weakly_coupled(
        gain_frac in 0.0..0.45f64,
        ratio in 0.0..0.95f64,
    ) {
        let sp = SystemParams {
            gain: gain_frac * 0.05,
            g_plus: ratio * 0.01,
            ..SystemParams::default()
        }
        .validated()
        .unwrap();
        let v = steady_state_covariance(&sp).unwrap();
        let s_numeric = analysis::squeezing_db(v.variance_q()).unwrap();
        let s_analytic = analysis::analytic_squeezing_db(&sp).unwrap();
        prop_assert!((s_numeric - s_analytic).abs() < 0.1);
    }
}
