//! Deterministic parameter grids over the model, plus the named presets
//! behind the standard squeezing-versus-gain and squeezing-versus-ratio
//! curves.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::analysis::{analytic_squeezing_db, squeezing_db};
use crate::dynamics::steady_state_covariance;
use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::stability::routh_hurwitz;

/// A parameter that can serve as a sweep axis. `Ratio` sets
/// `g_plus = value * g_minus` at the template's `g_minus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Axis {
    Kappa,
    GammaM,
    G0,
    GMinus,
    GPlus,
    Gain,
    Theta,
    NTh,
    Ratio,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::Kappa => "kappa",
            Axis::GammaM => "gamma_m",
            Axis::G0 => "g0",
            Axis::GMinus => "g_minus",
            Axis::GPlus => "g_plus",
            Axis::Gain => "gain",
            Axis::Theta => "theta",
            Axis::NTh => "n_th",
            Axis::Ratio => "ratio",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "kappa" => Axis::Kappa,
            "gamma_m" => Axis::GammaM,
            "g0" => Axis::G0,
            "g_minus" => Axis::GMinus,
            "g_plus" => Axis::GPlus,
            "gain" => Axis::Gain,
            "theta" => Axis::Theta,
            "n_th" => Axis::NTh,
            "ratio" => Axis::Ratio,
            _ => return None,
        })
    }

    fn apply(&self, sp: &mut SystemParams, value: f64) {
        match self {
            Axis::Kappa => sp.kappa = value,
            Axis::GammaM => sp.gamma_m = value,
            Axis::G0 => sp.g0 = value,
            Axis::GMinus => sp.g_minus = value,
            Axis::GPlus => sp.g_plus = value,
            Axis::Gain => sp.gain = value,
            Axis::Theta => sp.theta = value,
            Axis::NTh => sp.n_th = value,
            Axis::Ratio => sp.g_plus = value * sp.g_minus,
        }
    }
}

/// Output columns a sweep can compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Column {
    SNumeric,
    SAnalytic,
    VarianceQ,
    VarianceP,
    Stable,
    RhValues,
    MaxRealEig,
}

impl Column {
    pub fn name(&self) -> &'static str {
        match self {
            Column::SNumeric => "s_numeric",
            Column::SAnalytic => "s_analytic",
            Column::VarianceQ => "variance_q",
            Column::VarianceP => "variance_p",
            Column::Stable => "stable",
            Column::RhValues => "rh_values",
            Column::MaxRealEig => "max_real_eig",
        }
    }
}

/// Grid description: a base parameter set and ordered axes. Rows are
/// produced row-major over the axes as listed (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepSpec {
    pub base: SystemParams,
    pub axes: Vec<(Axis, Vec<f64>)>,
    pub outputs: Vec<Column>,
}

impl SweepSpec {
    pub fn row_count(&self) -> usize {
        self.axes.iter().map(|(_, v)| v.len()).product()
    }

    fn validate(&self) -> Result<()> {
        self.base.validated()?;
        if self.axes.is_empty() {
            return Err(Error::Domain {
                context: "sweep needs at least one axis",
            });
        }
        for (axis, values) in &self.axes {
            if values.is_empty() {
                return Err(Error::Domain {
                    context: "sweep axis has no values",
                });
            }
            for (index, value) in values.iter().enumerate() {
                if !value.is_finite() {
                    return Err(Error::InvalidAxis {
                        axis: axis.name().to_string(),
                        index,
                        value: *value,
                    });
                }
            }
        }
        Ok(())
    }

    /// Parameter set at one flat grid index.
    pub fn point(&self, flat: usize) -> Result<(Vec<f64>, SystemParams)> {
        let mut coords = Vec::with_capacity(self.axes.len());
        let mut sp = self.base;
        let mut rem = flat;
        let mut strides = Vec::with_capacity(self.axes.len());
        let mut stride = 1;
        for (_, values) in self.axes.iter().rev() {
            strides.push(stride);
            stride *= values.len();
        }
        strides.reverse();
        for ((axis, values), stride) in self.axes.iter().zip(strides) {
            let idx = rem / stride;
            rem %= stride;
            let value = values[idx];
            coords.push(value);
            axis.apply(&mut sp, value);
        }
        let sp = sp.validated().map_err(|e| match e {
            Error::InvalidParameter { field, value } => Error::InvalidAxis {
                axis: field.to_string(),
                index: flat,
                value,
            },
            other => other,
        })?;
        Ok((coords, sp))
    }
}

/// One evaluated grid point. Squeezing and variance cells stay `None`
/// on unstable points so stability boundaries remain visible.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepRow {
    pub coords: Vec<f64>,
    pub stable: bool,
    pub s_numeric: Option<f64>,
    pub s_analytic: Option<f64>,
    pub variance_q: Option<f64>,
    pub variance_p: Option<f64>,
    pub rh_values: [f64; 3],
    pub max_real_eig: f64,
}

/// Evaluated grid with its provenance.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepTable {
    /// Axis names followed by the requested output columns.
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
    pub spec: SweepSpec,
    pub code_version: String,
}

/// Evaluates a single grid point: stability first, then the stationary
/// covariance and both squeezing measures where they apply.
pub fn evaluate_point(spec: &SweepSpec, flat: usize) -> Result<SweepRow> {
    let (coords, sp) = spec.point(flat)?;
    let report = routh_hurwitz(&sp)?;
    let mut row = SweepRow {
        coords,
        stable: report.eig_stable,
        s_numeric: None,
        s_analytic: None,
        variance_q: None,
        variance_p: None,
        rh_values: report.rh_values,
        max_real_eig: report.max_real_eig,
    };
    if report.eig_stable {
        if let Ok(v) = steady_state_covariance(&sp) {
            row.variance_q = Some(v.variance_q());
            row.variance_p = Some(v.variance_p());
            row.s_numeric = squeezing_db(v.variance_q()).ok();
        }
    }
    // The closed form exists independently of the eigen verdict but only
    // inside its own domain.
    row.s_analytic = analytic_squeezing_db(&sp).ok();
    Ok(row)
}

/// Runs the whole grid serially in deterministic row order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let n = spec.row_count();
    let mut rows = Vec::with_capacity(n);
    for flat in 0..n {
        rows.push(evaluate_point(spec, flat)?);
    }
    let mut columns: Vec<String> = spec
        .axes
        .iter()
        .map(|(axis, _)| axis.name().to_string())
        .collect();
    for output in &spec.outputs {
        columns.push(output.name().to_string());
    }
    Ok(SweepTable {
        columns,
        rows,
        spec: spec.clone(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + i as f64 * step).collect()
}

/// Number of phase samples used by the phase-sweep presets.
pub const PRESET_THETA_POINTS: usize = 7;
const PRESET_POINTS: usize = 200;

/// Named presets reproducing the standard figure grids: squeezing versus
/// gain, versus tone ratio, and robustness scans over phase, mechanical
/// decay, and thermal occupation.
pub fn figure_preset(name: &str) -> Result<SweepSpec> {
    let base = SystemParams::default();
    let kappa = base.kappa;
    let gain_axis = linspace(0.0, 0.45 * kappa, PRESET_POINTS);
    let ratio_axis = linspace(0.0, 0.99, PRESET_POINTS);
    let theta_axis = linspace(0.0, core::f64::consts::PI, PRESET_THETA_POINTS);
    let gamma_axis = alloc::vec![1e-4, 1e-5, 1e-6];
    let nth_axis = alloc::vec![0.0, 10.0, 100.0];
    let standard = alloc::vec![Column::Stable, Column::SNumeric, Column::VarianceQ];
    let both_solutions = alloc::vec![Column::Stable, Column::SNumeric, Column::SAnalytic];

    let (axes, outputs) = match name {
        "fig3a" => (
            alloc::vec![
                (Axis::Gain, gain_axis),
                (Axis::Ratio, alloc::vec![0.0, 0.28]),
            ],
            standard,
        ),
        "fig3b" => (
            alloc::vec![
                (Axis::Ratio, ratio_axis),
                (Axis::Gain, alloc::vec![0.0, 0.4 * kappa]),
            ],
            standard,
        ),
        "fig5a" => (
            alloc::vec![(Axis::Theta, theta_axis), (Axis::Gain, gain_axis)],
            standard,
        ),
        "fig5b" => (
            alloc::vec![(Axis::Theta, theta_axis), (Axis::Ratio, ratio_axis)],
            standard,
        ),
        "fig5c" => (
            alloc::vec![(Axis::GammaM, gamma_axis), (Axis::Gain, gain_axis)],
            standard,
        ),
        "fig5d" => (
            alloc::vec![(Axis::GammaM, gamma_axis), (Axis::Ratio, ratio_axis)],
            standard,
        ),
        "fig5e" => (
            alloc::vec![(Axis::NTh, nth_axis), (Axis::Gain, gain_axis)],
            standard,
        ),
        "fig5f" => (
            alloc::vec![(Axis::NTh, nth_axis), (Axis::Ratio, ratio_axis)],
            standard,
        ),
        "fig6a" => (
            alloc::vec![
                (Axis::Gain, gain_axis),
                (Axis::Ratio, alloc::vec![0.0, 0.28]),
            ],
            both_solutions,
        ),
        "fig6b" => (
            alloc::vec![
                (Axis::Ratio, ratio_axis),
                (Axis::Gain, alloc::vec![0.0, 0.4 * kappa]),
            ],
            both_solutions,
        ),
        _ => {
            return Err(Error::UnknownPreset {
                name: name.to_string(),
            })
        }
    };
    Ok(SweepSpec {
        base,
        axes,
        outputs,
    })
}

/// All preset names, in presentation order.
pub const PRESET_NAMES: [&str; 10] = [
    "fig3a", "fig3b", "fig5a", "fig5b", "fig5c", "fig5d", "fig5e", "fig5f", "fig6a", "fig6b",
];

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn single_axis(axis: Axis, values: Vec<f64>) -> SweepSpec {
        SweepSpec {
            base: SystemParams::default(),
            axes: alloc::vec![(axis, values)],
            outputs: alloc::vec![Column::Stable, Column::SNumeric, Column::SAnalytic],
        }
    }

    #[test]
    fn gain_free_point_matches_closed_form() {
        let table = run_sweep(&single_axis(Axis::Gain, alloc::vec![0.0])).unwrap();
        assert_eq!(table.rows.len(), 1);
        let s = table.rows[0].s_analytic.unwrap();
        // -10 log10(2 * 0.28132) evaluated independently
        assert_abs_diff_eq!(s, 2.4977, epsilon = 1e-3);
        assert!(table.rows[0].stable);
    }

    #[test]
    fn labeled_points_appear_in_sweep_rows() {
        let spec = SweepSpec {
            base: SystemParams::default(),
            axes: alloc::vec![
                (Axis::Ratio, alloc::vec![0.28]),
                (Axis::Gain, alloc::vec![0.003, 0.02]),
            ],
            outputs: alloc::vec![Column::SNumeric, Column::SAnalytic],
        };
        let table = run_sweep(&spec).unwrap();
        assert_eq!(table.rows.len(), 2);
        assert_abs_diff_eq!(table.rows[0].s_numeric.unwrap(), 3.00, epsilon = 0.05);
        assert_abs_diff_eq!(table.rows[1].s_numeric.unwrap(), 5.05, epsilon = 0.05);
    }

    #[test]
    fn unstable_rows_carry_null_squeezing() {
        let table = run_sweep(&single_axis(Axis::Gain, alloc::vec![0.03])).unwrap();
        let row = &table.rows[0];
        assert!(!row.stable);
        assert_eq!(row.s_numeric, None);
        assert_eq!(row.variance_q, None);
        assert!(row.max_real_eig > 0.0);
    }

    #[test]
    fn rows_follow_row_major_axis_order() {
        let spec = SweepSpec {
            base: SystemParams::default(),
            axes: alloc::vec![
                (Axis::Gain, alloc::vec![0.0, 0.01]),
                (Axis::Ratio, alloc::vec![0.1, 0.2, 0.3]),
            ],
            outputs: alloc::vec![Column::Stable],
        };
        let table = run_sweep(&spec).unwrap();
        assert_eq!(table.rows.len(), 6);
        let coords: Vec<(f64, f64)> = table
            .rows
            .iter()
            .map(|r| (r.coords[0], r.coords[1]))
            .collect();
        assert_eq!(
            coords,
            alloc::vec![
                (0.0, 0.1),
                (0.0, 0.2),
                (0.0, 0.3),
                (0.01, 0.1),
                (0.01, 0.2),
                (0.01, 0.3)
            ]
        );
        assert_eq!(table.columns[0], "gain");
        assert_eq!(table.columns[1], "ratio");
    }

    #[test]
    fn sweeps_are_bit_for_bit_deterministic() {
        let spec = figure_preset("fig3a").unwrap();
        let a = run_sweep(&spec).unwrap();
        let b = run_sweep(&spec).unwrap();
        assert_eq!(a.rows.len(), b.rows.len());
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert_eq!(ra, rb);
            if let (Some(x), Some(y)) = (ra.s_numeric, rb.s_numeric) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn invalid_axis_values_are_reported_with_location() {
        let err = run_sweep(&single_axis(Axis::Gain, alloc::vec![0.0, f64::NAN])).unwrap_err();
        match err {
            Error::InvalidAxis { axis, index, .. } => {
                assert_eq!(axis, "gain");
                assert_eq!(index, 1);
            }
            other => panic!("unexpected error {other:?}"),
        }
        // Negative rates surface as axis errors too.
        let err = run_sweep(&single_axis(Axis::Kappa, alloc::vec![-1.0])).unwrap_err();
        assert!(matches!(err, Error::InvalidAxis { .. }));
    }

    #[test]
    fn preset_shapes_match_their_figures() {
        let fig3b = figure_preset("fig3b").unwrap();
        assert_eq!(fig3b.axes[0].0, Axis::Ratio);
        assert_eq!(fig3b.axes[0].1.len(), 200);
        assert_eq!(fig3b.axes[1].1, alloc::vec![0.0, 0.4 * 0.05]);

        let fig5e = figure_preset("fig5e").unwrap();
        assert_eq!(fig5e.axes[0].0, Axis::NTh);
        assert_eq!(fig5e.axes[0].1, alloc::vec![0.0, 10.0, 100.0]);

        let fig5c = figure_preset("fig5c").unwrap();
        assert_eq!(fig5c.axes[0].0, Axis::GammaM);
        assert_eq!(fig5c.axes[0].1, alloc::vec![1e-4, 1e-5, 1e-6]);

        let fig6b = figure_preset("fig6b").unwrap();
        assert!(fig6b.outputs.contains(&Column::SAnalytic));
        assert!(fig6b.outputs.contains(&Column::SNumeric));

        assert!(matches!(
            figure_preset("fig7"),
            Err(Error::UnknownPreset { .. })
        ));
    }

    #[test]
    fn ratio_scan_reaches_the_quoted_maximum() {
        let table = run_sweep(&figure_preset("fig6b").unwrap()).unwrap();
        // Rows with gain = 0.4 kappa are the odd-indexed ones (gain is the
        // fastest axis).
        let strong_gain = 0.4 * 0.05;
        let max_numeric = table
            .rows
            .iter()
            .filter(|r| r.coords[1] == strong_gain)
            .filter_map(|r| r.s_numeric)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((19.2..=19.7).contains(&max_numeric), "max = {max_numeric}");
    }

    #[test]
    fn gain_scan_is_monotone_for_both_ratios() {
        let table = run_sweep(&figure_preset("fig3a").unwrap()).unwrap();
        for target in [0.0, 0.28] {
            let series: Vec<f64> = table
                .rows
                .iter()
                .filter(|r| r.coords[1] == target)
                .filter_map(|r| r.s_numeric)
                .collect();
            assert_eq!(series.len(), 200);
            for w in series.windows(2) {
                assert!(w[1] >= w[0] - 1e-12, "not monotone: {} -> {}", w[0], w[1]);
            }
        }
    }

    #[test]
    fn instability_flags_match_the_eigen_test() {
        let spec = single_axis(Axis::Gain, linspace(0.0, 0.05, 21));
        let table = run_sweep(&spec).unwrap();
        for row in &table.rows {
            assert_eq!(row.stable, row.max_real_eig < -1e-12);
            assert_eq!(row.s_numeric.is_some(), row.stable);
        }
    }
}
