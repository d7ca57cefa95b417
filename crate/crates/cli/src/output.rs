//! CSV and JSON rendering. Every floating-point value is printed with 12
//! significant digits so artifact diffs are reproducible across runs.

use optomech_core::{Column, CovBlock, CovarianceMatrix, SweepTable, Trajectory, WignerGrid};

/// 12 significant digits in scientific notation. Negative zero prints as
/// zero so symmetrized matrices do not leak sign noise into diffs.
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

fn fmt_cell(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Serializes a JSON value with all floats at 12 significant digits.
/// Object keys come out in sorted order, which keeps output deterministic.
pub fn json_12sig(value: &serde_json::Value) -> String {
    let mut out = String::new();
    write_value(value, &mut out);
    out
}

fn write_value(value: &serde_json::Value, out: &mut String) {
    match value {
        serde_json::Value::Null => out.push_str("null"),
        serde_json::Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&fmt_f64(n.as_f64().expect("finite float")));
            }
        }
        serde_json::Value::String(s) => {
            out.push_str(&serde_json::Value::String(s.clone()).to_string())
        }
        serde_json::Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        serde_json::Value::Object(map) => {
            out.push('{');
            for (i, (key, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::Value::String(key.clone()).to_string());
                out.push(':');
                write_value(item, out);
            }
            out.push('}');
        }
    }
}

/// Renders any serializable report as deterministic JSON.
pub fn to_json_string<T: serde::Serialize>(value: &T) -> serde_json::Result<String> {
    Ok(json_12sig(&serde_json::to_value(value)?))
}

const MATRIX_HEADER: &str = "V11,V12,V13,V14,V21,V22,V23,V24,V31,V32,V33,V34,V41,V42,V43,V44";

fn matrix_row(v: &CovarianceMatrix) -> String {
    let m = v.matrix();
    let mut cells = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            cells.push(fmt_f64(m[(i, j)]));
        }
    }
    cells.join(",")
}

/// Single covariance matrix: one header row, one data row.
pub fn covariance_csv(v: &CovarianceMatrix) -> String {
    format!("{MATRIX_HEADER}\n{}\n", matrix_row(v))
}

/// Sampled trajectory: `t` plus the sixteen matrix entries per row.
pub fn trajectory_csv(trajectory: &Trajectory) -> String {
    let mut out = String::with_capacity(64 * trajectory.times.len());
    out.push_str("t,");
    out.push_str(MATRIX_HEADER);
    out.push('\n');
    for (t, state) in trajectory.times.iter().zip(&trajectory.states) {
        out.push_str(&fmt_f64(*t));
        out.push(',');
        out.push_str(&matrix_row(state));
        out.push('\n');
    }
    out
}

/// Wigner grid: a `#` provenance line with the block tag and determinant,
/// then `q,p,w` rows (q is the slow axis).
pub fn wigner_csv(grid: &WignerGrid) -> String {
    let tag = match grid.block {
        CovBlock::Mechanical => "mech",
        CovBlock::Cavity => "cav",
    };
    let mut out = String::with_capacity(24 * grid.values.len());
    out.push_str(&format!("# block={tag} det={}\n", fmt_f64(grid.det)));
    out.push_str("q,p,w\n");
    for (iq, q) in grid.q_axis.iter().enumerate() {
        for (ip, p) in grid.p_axis.iter().enumerate() {
            out.push_str(&fmt_f64(*q));
            out.push(',');
            out.push_str(&fmt_f64(*p));
            out.push(',');
            out.push_str(&fmt_f64(grid.value(iq, ip)));
            out.push('\n');
        }
    }
    out
}

/// Sweep table: axis columns then the requested outputs; unstable points
/// leave their squeezing cells empty.
pub fn sweep_csv(table: &SweepTable) -> String {
    let mut header: Vec<String> = table
        .spec
        .axes
        .iter()
        .map(|(axis, _)| axis.name().to_string())
        .collect();
    for column in &table.spec.outputs {
        match column {
            Column::RhValues => {
                header.extend(["rh1".to_string(), "rh2".to_string(), "rh3".to_string()])
            }
            other => header.push(other.name().to_string()),
        }
    }
    let mut out = String::with_capacity(32 * table.rows.len());
    out.push_str(&header.join(","));
    out.push('\n');
    for row in &table.rows {
        let mut cells: Vec<String> = row.coords.iter().map(|c| fmt_f64(*c)).collect();
        for column in &table.spec.outputs {
            match column {
                Column::SNumeric => cells.push(fmt_cell(row.s_numeric)),
                Column::SAnalytic => cells.push(fmt_cell(row.s_analytic)),
                Column::VarianceQ => cells.push(fmt_cell(row.variance_q)),
                Column::VarianceP => cells.push(fmt_cell(row.variance_p)),
                Column::Stable => cells.push(row.stable.to_string()),
                Column::RhValues => {
                    cells.extend(row.rh_values.iter().map(|v| fmt_f64(*v)));
                }
                Column::MaxRealEig => cells.push(fmt_f64(row.max_real_eig)),
            }
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
