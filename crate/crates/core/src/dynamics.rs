//! Drift and diffusion matrices for the quadrature fluctuations, time
//! integration of the covariance motion equation, and the stationary
//! Lyapunov solve.
//!
//! Quadrature ordering is `(dX, dY, dQ, dP)`: cavity amplitude and phase,
//! then mechanical position and momentum.

use alloc::vec::Vec;
use nalgebra::{Complex, Matrix2, Matrix4, SMatrix, SVector, Vector4};

use crate::error::{Error, Result};
use crate::model::SystemParams;

/// Entry magnitude beyond which a trajectory is declared divergent.
const DIVERGENCE_THRESHOLD: f64 = 1e8;
/// Largest step allowed when the oscillating coupling terms are retained;
/// fifty steps per `2 omega_m` period.
pub const NON_RWA_MAX_DT: f64 = core::f64::consts::PI / 50.0;
/// Max-norm bound on the residual of the stationary solve.
const LYAPUNOV_RESIDUAL_TOL: f64 = 1e-10;

/// Drift matrix of the quadrature fluctuations (units of `omega_m`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix {
    matrix: Matrix4<f64>,
    /// Evaluation time for a time-dependent build; `None` marks the
    /// stationary rotating-wave form.
    time: Option<f64>,
}

impl DriftMatrix {
    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.matrix
    }

    #[cfg(test)]
    pub(crate) fn stationary_for_tests(matrix: Matrix4<f64>) -> Self {
        Self { matrix, time: None }
    }

    /// `None` for the rotating-wave build, `Some(t)` otherwise.
    pub fn time_tag(&self) -> Option<f64> {
        self.time
    }

    pub fn is_stationary(&self) -> bool {
        self.time.is_none()
    }
}

/// Diagonal diffusion matrix fixed by the input-noise correlators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionMatrix {
    matrix: Matrix4<f64>,
}

impl DiffusionMatrix {
    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.matrix
    }
}

/// Symmetric 4x4 second-moment matrix of the quadrature fluctuations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix {
    matrix: Matrix4<f64>,
}

impl CovarianceMatrix {
    /// Wraps a matrix, symmetrizing it first.
    pub fn new(matrix: Matrix4<f64>) -> Self {
        Self {
            matrix: 0.5 * (matrix + matrix.transpose()),
        }
    }

    pub fn from_diagonal(d: [f64; 4]) -> Self {
        Self {
            matrix: Matrix4::from_diagonal(&Vector4::new(d[0], d[1], d[2], d[3])),
        }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.matrix
    }

    /// Position variance of the mechanical oscillator, `V33`.
    pub fn variance_q(&self) -> f64 {
        self.matrix[(2, 2)]
    }

    /// Momentum variance of the mechanical oscillator, `V44`.
    pub fn variance_p(&self) -> f64 {
        self.matrix[(3, 3)]
    }

    /// 2x2 mechanical block (rows and columns 3-4).
    pub fn mechanical_block(&self) -> Matrix2<f64> {
        self.matrix.fixed_view::<2, 2>(2, 2).into_owned()
    }

    /// 2x2 cavity block (rows and columns 1-2).
    pub fn cavity_block(&self) -> Matrix2<f64> {
        self.matrix.fixed_view::<2, 2>(0, 0).into_owned()
    }

    /// Determinant of the mechanical block; at least 1/4 for a physical
    /// Gaussian state.
    pub fn mechanical_det(&self) -> f64 {
        self.mechanical_block().determinant()
    }

    /// Smallest eigenvalue of the (symmetric) matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Sampled covariance evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Sample times in units of `1/omega_m`, strictly increasing.
    pub times: Vec<f64>,
    pub states: Vec<CovarianceMatrix>,
    /// Whether the rotating-wave drift was used.
    pub rwa: bool,
}

impl Trajectory {
    pub fn final_state(&self) -> &CovarianceMatrix {
        self.states
            .last()
            .expect("trajectory holds at least one sample")
    }
}

/// Stationary drift matrix with the terms oscillating at `2 omega_m`
/// dropped.
pub fn drift_rwa(sp: &SystemParams) -> DriftMatrix {
    let (sin, cos) = (libm::sin(sp.theta), libm::cos(sp.theta));
    let gc = sp.gain * cos;
    let gs = sp.gain * sin;
    let half_kappa = 0.5 * sp.kappa;
    let half_gamma = 0.5 * sp.gamma_m;
    let diff = sp.g_plus - sp.g_minus;
    let sum = sp.g_plus + sp.g_minus;
    #[rustfmt::skip]
    let matrix = Matrix4::new(
        gc - half_kappa, gs,              0.0,         diff,
        gs,              -gc - half_kappa, sum,        0.0,
        0.0,             diff,            -half_gamma, 0.0,
        sum,             0.0,             0.0,         -half_gamma,
    );
    DriftMatrix { matrix, time: None }
}

/// Full time-dependent drift matrix at time `t`.
///
/// The three coupling combinations carry the beat between the two drive
/// tones at `2 omega_m`; the parametric-gain block is already frequency
/// matched and stays constant.
pub fn drift_time_dependent(sp: &SystemParams, t: f64) -> DriftMatrix {
    let phase = 2.0 * t;
    let rot = Complex::new(libm::cos(phase), libm::sin(phase));
    let f1 = Complex::new(sp.g_minus, 0.0) + sp.g_plus * rot;
    let f2 = Complex::new(sp.g_plus, 0.0) + sp.g_minus * rot;
    let f3 = Complex::new(sp.g_minus, 0.0) + sp.g_plus * rot.conj();

    let (sin, cos) = (libm::sin(sp.theta), libm::cos(sp.theta));
    let gc = sp.gain * cos;
    let gs = sp.gain * sin;
    let half_kappa = 0.5 * sp.kappa;
    let half_gamma = 0.5 * sp.gamma_m;

    let f23p = f2 + f3;
    let f23m = f2 - f3;
    let f12p = f1 + f2;
    let f21m = f2 - f1;

    #[rustfmt::skip]
    let matrix = Matrix4::new(
        gc - half_kappa, gs,              -f23p.im,    f23m.re,
        gs,              -gc - half_kappa, f23p.re,    f23m.im,
        -f12p.im,        f21m.re,         -half_gamma, 0.0,
        f12p.re,         f21m.im,         0.0,         -half_gamma,
    );
    DriftMatrix {
        matrix,
        time: Some(t),
    }
}

/// Diagonal diffusion matrix: vacuum noise on the cavity quadratures and
/// thermal noise on the mechanical ones.
pub fn diffusion(sp: &SystemParams) -> DiffusionMatrix {
    let cavity = 0.5 * sp.kappa;
    let mech = 0.5 * sp.gamma_m * (2.0 * sp.n_th + 1.0);
    DiffusionMatrix {
        matrix: Matrix4::from_diagonal(&Vector4::new(cavity, cavity, mech, mech)),
    }
}

/// Uncorrelated initial state: cavity vacuum and a mechanical thermal
/// state with `n_th` phonons.
pub fn initial_covariance(n_th: f64) -> Result<CovarianceMatrix> {
    if !n_th.is_finite() || n_th < 0.0 {
        return Err(Error::InvalidParameter {
            field: "n_th",
            value: n_th,
        });
    }
    Ok(CovarianceMatrix::from_diagonal([
        0.5,
        0.5,
        n_th + 0.5,
        n_th + 0.5,
    ]))
}

fn check_state(v: &Matrix4<f64>, t: f64) -> Result<()> {
    for entry in v.iter() {
        if entry.is_nan() {
            return Err(Error::Numerical {
                context: "covariance integration",
            });
        }
        if entry.abs() > DIVERGENCE_THRESHOLD {
            return Err(Error::Divergence { time: t });
        }
    }
    Ok(())
}

/// Integrates `dV/dt = M V + V M^T + D` with the classical fourth-order
/// scheme at a fixed step.
///
/// The requested step is shrunk so that `t_end` is an exact multiple of
/// it; every stored state is symmetrized. The trajectory always contains
/// the samples at `t = 0` and `t = t_end`.
pub fn evolve(
    sp: &SystemParams,
    v0: &CovarianceMatrix,
    t_end: f64,
    dt: f64,
    rwa: bool,
    sample_every: usize,
) -> Result<Trajectory> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::InvalidParameter {
            field: "dt",
            value: dt,
        });
    }
    if !t_end.is_finite() || t_end < 0.0 {
        return Err(Error::InvalidParameter {
            field: "t_end",
            value: t_end,
        });
    }
    if sample_every == 0 {
        return Err(Error::InvalidParameter {
            field: "sample_every",
            value: 0.0,
        });
    }
    if !rwa && dt > NON_RWA_MAX_DT * (1.0 + 1e-12) {
        return Err(Error::InvalidParameter {
            field: "dt",
            value: dt,
        });
    }

    let mut trajectory = Trajectory {
        times: alloc::vec![0.0],
        states: alloc::vec![*v0],
        rwa,
    };
    if t_end == 0.0 {
        return Ok(trajectory);
    }

    let steps = libm::ceil(t_end / dt - 1e-9).max(1.0) as usize;
    let h = t_end / steps as f64;

    let stationary = drift_rwa(sp);
    let noise = *diffusion(sp).matrix();
    let drift_at = |t: f64| -> Matrix4<f64> {
        if rwa {
            *stationary.matrix()
        } else {
            *drift_time_dependent(sp, t).matrix()
        }
    };
    let derivative = |t: f64, v: &Matrix4<f64>| -> Matrix4<f64> {
        let m = drift_at(t);
        m * v + v * m.transpose() + noise
    };

    let mut v = *v0.matrix();
    for step in 0..steps {
        let t = step as f64 * h;
        let k1 = derivative(t, &v);
        let k2 = derivative(t + 0.5 * h, &(v + 0.5 * h * k1));
        let k3 = derivative(t + 0.5 * h, &(v + 0.5 * h * k2));
        let k4 = derivative(t + h, &(v + h * k3));
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        v = 0.5 * (v + v.transpose());

        let t_next = (step + 1) as f64 * h;
        check_state(&v, t_next)?;
        if (step + 1) % sample_every == 0 || step + 1 == steps {
            trajectory.times.push(t_next);
            trajectory.states.push(CovarianceMatrix::new(v));
        }
    }
    Ok(trajectory)
}

/// Solves the stationary equation `M V + V M^T = -D` by stacking it into a
/// 16-unknown linear system (columnwise vectorization).
fn lyapunov_solve(m: &Matrix4<f64>, d: &Matrix4<f64>) -> Option<Matrix4<f64>> {
    let mut a = SMatrix::<f64, 16, 16>::zeros();
    for j in 0..4 {
        for i in 0..4 {
            let row = 4 * j + i;
            for k in 0..4 {
                a[(row, 4 * j + k)] += m[(i, k)];
            }
            for l in 0..4 {
                a[(row, 4 * l + i)] += m[(j, l)];
            }
        }
    }
    let mut rhs = SVector::<f64, 16>::zeros();
    for j in 0..4 {
        for i in 0..4 {
            rhs[4 * j + i] = -d[(i, j)];
        }
    }
    let x = a.lu().solve(&rhs)?;
    let mut v = Matrix4::zeros();
    for j in 0..4 {
        for i in 0..4 {
            v[(i, j)] = x[4 * j + i];
        }
    }
    Some(0.5 * (v + v.transpose()))
}

fn lyapunov_residual(m: &Matrix4<f64>, d: &Matrix4<f64>, v: &Matrix4<f64>) -> f64 {
    (m * v + v * m.transpose() + d)
        .iter()
        .fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Stationary covariance of the rotating-wave dynamics.
///
/// Requires an asymptotically stable drift; falls back to long-time
/// integration if the direct linear solve degenerates.
pub fn steady_state_covariance(sp: &SystemParams) -> Result<CovarianceMatrix> {
    let drift = drift_rwa(sp);
    let (max_real_eig, stable) = crate::stability::eigen_stable(&drift)?;
    if !stable {
        return Err(Error::Unstable { max_real_eig });
    }
    let d = diffusion(sp);

    if let Some(v) = lyapunov_solve(drift.matrix(), d.matrix()) {
        if lyapunov_residual(drift.matrix(), d.matrix(), &v) < LYAPUNOV_RESIDUAL_TOL {
            return Ok(CovarianceMatrix::new(v));
        }
    }

    // Degenerate solve: integrate until the motion equation balances.
    let mut state = initial_covariance(sp.n_th)?;
    let chunk = 1e4;
    let mut elapsed = 0.0;
    while elapsed < 1e6 {
        let trajectory = evolve(sp, &state, chunk, 1e-2, true, usize::MAX)?;
        state = *trajectory.final_state();
        elapsed += chunk;
        if lyapunov_residual(drift.matrix(), d.matrix(), state.matrix()) < LYAPUNOV_RESIDUAL_TOL {
            return Ok(state);
        }
    }
    Err(Error::Convergence { iterations: 100 })
}
