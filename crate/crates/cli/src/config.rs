//! Strict parser for the plain-text run configuration.
//!
//! The format is line based: `[section]` headers, `key = value` pairs,
//! `#` comments, and blank lines. Sections are `[mode]`, `[params]` (or
//! `[physical]`), and `[output]`. Unknown sections and keys are fatal, as
//! are duplicate keys; a silently ignored typo is worse than a loud error
//! in a physics run.

use std::collections::BTreeMap;
use std::path::PathBuf;

use optomech_core::{CovBlock, PhysicalParams, SystemParams, PRESET_NAMES};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Steady,
    Evolve,
    Sweep,
    Wigner,
    Stability,
    Check,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Steady => "steady",
            Mode::Evolve => "evolve",
            Mode::Sweep => "sweep",
            Mode::Wigner => "wigner",
            Mode::Stability => "stability",
            Mode::Check => "check",
        }
    }

    fn parse(text: &str) -> Option<Self> {
        Some(match text {
            "steady" => Mode::Steady,
            "evolve" => Mode::Evolve,
            "sweep" => Mode::Sweep,
            "wigner" => Mode::Wigner,
            "stability" => Mode::Stability,
            "check" => Mode::Check,
            _ => return None,
        })
    }
}

/// Either parameter flavor; physical parameters are resolved through the
/// classical steady state at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamSource {
    Dimensionless(SystemParams),
    Physical(PhysicalParams),
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct EvolveOptions {
    pub t_end: f64,
    pub dt: f64,
    pub rwa: bool,
    pub sample_every: usize,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SweepOptions {
    pub preset: String,
    pub theta_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct WignerOptions {
    pub block: CovBlock,
    pub points: usize,
    pub q_min: Option<f64>,
    pub q_max: Option<f64>,
    pub p_min: Option<f64>,
    pub p_max: Option<f64>,
}

/// Fully validated run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub params: ParamSource,
    pub evolve: Option<EvolveOptions>,
    pub sweep: Option<SweepOptions>,
    pub wigner: Option<WignerOptions>,
    pub out_dir: PathBuf,
}

const MODE_KEYS: &[&str] = &[
    "mode",
    "t_end",
    "dt",
    "rwa",
    "sample_every",
    "preset",
    "theta_points",
    "block",
    "points",
    "q_min",
    "q_max",
    "p_min",
    "p_max",
];
const PARAMS_KEYS: &[&str] = &[
    "kappa", "gamma_m", "g0", "g_minus", "g_plus", "gain", "theta", "n_th",
];
const PHYSICAL_KEYS: &[&str] = &[
    "omega_m_hz",
    "lambda_minus_m",
    "power_plus_w",
    "power_minus_w",
    "temperature_k",
    "kappa_ratio",
    "gamma_ratio",
    "g0_ratio",
    "gain_ratio",
    "theta",
];
const OUTPUT_KEYS: &[&str] = &["dir"];
const SECTIONS: &[&str] = &["mode", "params", "physical", "output"];

fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn suggest<'a>(unknown: &str, known: &[&'a str]) -> Option<&'a str> {
    known
        .iter()
        .map(|k| (levenshtein(unknown, k), *k))
        .filter(|(d, _)| *d <= 2)
        .min_by_key(|(d, _)| *d)
        .map(|(_, k)| k)
}

fn unknown_key_error(line: usize, section: &str, key: &str, known: &[&str]) -> CliError {
    match suggest(key, known) {
        Some(hint) => CliError::config_at(
            line,
            format!("unknown key `{key}` in [{section}]; did you mean `{hint}`?"),
        ),
        None => CliError::config_at(line, format!("unknown key `{key}` in [{section}]")),
    }
}

struct Entry {
    value: String,
    line: usize,
    used: bool,
}

type Section = BTreeMap<String, Entry>;

fn parse_sections(text: &str) -> Result<BTreeMap<String, Section>, CliError> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| CliError::config_at(line_no, "unterminated section header"))?
                .trim()
                .to_string();
            if !SECTIONS.contains(&name.as_str()) {
                return Err(match suggest(&name, SECTIONS) {
                    Some(hint) => CliError::config_at(
                        line_no,
                        format!("unknown section `[{name}]`; did you mean `[{hint}]`?"),
                    ),
                    None => CliError::config_at(line_no, format!("unknown section `[{name}]`")),
                });
            }
            if sections.contains_key(&name) {
                return Err(CliError::config_at(
                    line_no,
                    format!("duplicate section `[{name}]`"),
                ));
            }
            sections.insert(name.clone(), Section::new());
            current = Some(name);
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::config_at(line_no, format!("expected `key = value`, got `{line}`"))
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() {
            return Err(CliError::config_at(line_no, "empty key"));
        }
        let section_name = current
            .clone()
            .ok_or_else(|| CliError::config_at(line_no, "key before any [section] header"))?;
        let section = sections.get_mut(&section_name).expect("section exists");
        if section.contains_key(&key) {
            return Err(CliError::config_at(
                line_no,
                format!("duplicate key `{key}` in [{section_name}]"),
            ));
        }
        section.insert(
            key,
            Entry {
                value,
                line: line_no,
                used: false,
            },
        );
    }
    Ok(sections)
}

fn check_known_keys(name: &str, section: &Section, known: &[&str]) -> Result<(), CliError> {
    for (key, entry) in section {
        if !known.contains(&key.as_str()) {
            return Err(unknown_key_error(entry.line, name, key, known));
        }
    }
    Ok(())
}

struct SectionReader<'a> {
    name: &'a str,
    section: Option<&'a mut Section>,
}

impl<'a> SectionReader<'a> {
    fn raw(&mut self, key: &str) -> Option<(String, usize)> {
        let section = self.section.as_mut()?;
        let entry = section.get_mut(key)?;
        entry.used = true;
        Some((entry.value.clone(), entry.line))
    }

    fn f64(&mut self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some((text, line)) => text.parse::<f64>().map_err(|_| {
                CliError::config_at(
                    line,
                    format!("key `{key}` in [{}]: `{text}` is not a number", self.name),
                )
            }),
        }
    }

    fn opt_f64(&mut self, key: &str) -> Result<Option<f64>, CliError> {
        match self.raw(key) {
            None => Ok(None),
            Some((text, line)) => text.parse::<f64>().map(Some).map_err(|_| {
                CliError::config_at(
                    line,
                    format!("key `{key}` in [{}]: `{text}` is not a number", self.name),
                )
            }),
        }
    }

    fn usize(&mut self, key: &str, default: usize) -> Result<usize, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some((text, line)) => text.parse::<usize>().map_err(|_| {
                CliError::config_at(
                    line,
                    format!(
                        "key `{key}` in [{}]: `{text}` is not a non-negative integer",
                        self.name
                    ),
                )
            }),
        }
    }

    fn bool(&mut self, key: &str, default: bool) -> Result<bool, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some((text, line)) => match text.as_str() {
                "true" => Ok(true),
                "false" => Ok(false),
                _ => Err(CliError::config_at(
                    line,
                    format!(
                        "key `{key}` in [{}]: expected `true` or `false`, got `{text}`",
                        self.name
                    ),
                )),
            },
        }
    }

    /// Keys that were never read are invalid for the selected mode.
    fn reject_unused(&self) -> Result<(), CliError> {
        if let Some(section) = &self.section {
            for (key, entry) in section.iter() {
                if !entry.used {
                    return Err(CliError::config_at(
                        entry.line,
                        format!("key `{key}` is not valid here"),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let mut sections = parse_sections(text)?;

    if let Some(section) = sections.get("mode") {
        check_known_keys("mode", section, MODE_KEYS)?;
    }
    if let Some(section) = sections.get("params") {
        check_known_keys("params", section, PARAMS_KEYS)?;
    }
    if let Some(section) = sections.get("physical") {
        check_known_keys("physical", section, PHYSICAL_KEYS)?;
    }
    if let Some(section) = sections.get("output") {
        check_known_keys("output", section, OUTPUT_KEYS)?;
    }

    let has_params = sections.contains_key("params");
    let has_physical = sections.contains_key("physical");
    if has_params && has_physical {
        return Err(CliError::config(
            "give either [params] or [physical], not both",
        ));
    }
    if !has_params && !has_physical {
        return Err(CliError::config(
            "a [params] or [physical] section is required",
        ));
    }

    let mut mode_section = SectionReader {
        name: "mode",
        section: sections.get_mut("mode"),
    };
    let (mode_text, mode_line) = mode_section
        .raw("mode")
        .ok_or_else(|| CliError::config("missing `mode` key in [mode] section"))?;
    let mode = Mode::parse(&mode_text).ok_or_else(|| {
        CliError::config_at(
            mode_line,
            format!(
                "unknown mode `{mode_text}`; valid modes: steady, evolve, sweep, wigner, \
                 stability, check"
            ),
        )
    })?;

    let mut evolve = None;
    let mut sweep = None;
    let mut wigner = None;
    match mode {
        Mode::Evolve => {
            let rwa = mode_section.bool("rwa", true)?;
            let default_dt = if rwa {
                1e-2
            } else {
                core::f64::consts::PI / 100.0
            };
            let options = EvolveOptions {
                t_end: mode_section.f64("t_end", 3000.0)?,
                dt: mode_section.f64("dt", default_dt)?,
                rwa,
                sample_every: mode_section.usize("sample_every", 100)?,
            };
            if !(options.t_end.is_finite() && options.t_end >= 0.0) {
                return Err(CliError::domain("t_end", "t_end must be finite and >= 0"));
            }
            if !(options.dt.is_finite() && options.dt > 0.0) {
                return Err(CliError::domain("dt", "dt must be finite and > 0"));
            }
            if !options.rwa && options.dt > optomech_core::dynamics::NON_RWA_MAX_DT {
                return Err(CliError::domain(
                    "dt",
                    format!(
                        "dt must not exceed {:.6} when rwa = false, so the fast beat is resolved",
                        optomech_core::dynamics::NON_RWA_MAX_DT
                    ),
                ));
            }
            if options.sample_every == 0 {
                return Err(CliError::domain(
                    "sample_every",
                    "sample_every must be >= 1",
                ));
            }
            evolve = Some(options);
        }
        Mode::Sweep => {
            let (preset, line) = mode_section
                .raw("preset")
                .ok_or_else(|| CliError::config("mode sweep requires a `preset` key"))?;
            if !PRESET_NAMES.contains(&preset.as_str()) {
                return Err(CliError::config_at(
                    line,
                    format!(
                        "unknown preset `{preset}`; valid presets: {}",
                        PRESET_NAMES.join(", ")
                    ),
                ));
            }
            let theta_points =
                mode_section.usize("theta_points", optomech_core::sweep::PRESET_THETA_POINTS)?;
            if theta_points < 2 {
                return Err(CliError::domain(
                    "theta_points",
                    "theta_points must be >= 2",
                ));
            }
            sweep = Some(SweepOptions {
                preset,
                theta_points,
            });
        }
        Mode::Wigner => {
            let block = match mode_section.raw("block") {
                None => CovBlock::Mechanical,
                Some((text, line)) => match text.as_str() {
                    "mechanical" => CovBlock::Mechanical,
                    "cavity" => CovBlock::Cavity,
                    _ => {
                        return Err(CliError::config_at(
                            line,
                            format!("block must be `mechanical` or `cavity`, got `{text}`"),
                        ))
                    }
                },
            };
            let options = WignerOptions {
                block,
                points: mode_section.usize("points", 201)?,
                q_min: mode_section.opt_f64("q_min")?,
                q_max: mode_section.opt_f64("q_max")?,
                p_min: mode_section.opt_f64("p_min")?,
                p_max: mode_section.opt_f64("p_max")?,
            };
            if options.points < 2 {
                return Err(CliError::domain("points", "points must be >= 2"));
            }
            for (name, lo, hi) in [
                ("q", options.q_min, options.q_max),
                ("p", options.p_min, options.p_max),
            ] {
                match (lo, hi) {
                    (None, None) => {}
                    (Some(lo), Some(hi)) if hi > lo => {}
                    _ => {
                        return Err(CliError::domain(
                            format!("{name}_min/{name}_max"),
                            "axis range needs both bounds with max > min",
                        ))
                    }
                }
            }
            wigner = Some(options);
        }
        Mode::Steady | Mode::Stability | Mode::Check => {}
    }
    mode_section.reject_unused()?;

    let params = if has_params {
        let mut reader = SectionReader {
            name: "params",
            section: sections.get_mut("params"),
        };
        let defaults = SystemParams::default();
        let sp = SystemParams {
            kappa: reader.f64("kappa", defaults.kappa)?,
            gamma_m: reader.f64("gamma_m", defaults.gamma_m)?,
            g0: reader.f64("g0", defaults.g0)?,
            g_minus: reader.f64("g_minus", defaults.g_minus)?,
            g_plus: reader.f64("g_plus", defaults.g_plus)?,
            gain: reader.f64("gain", defaults.gain)?,
            theta: reader.f64("theta", defaults.theta)?,
            n_th: reader.f64("n_th", defaults.n_th)?,
            pump_freq: None,
        };
        let sp = sp.validated().map_err(CliError::from)?;
        ParamSource::Dimensionless(sp)
    } else {
        let mut reader = SectionReader {
            name: "physical",
            section: sections.get_mut("physical"),
        };
        let pp = PhysicalParams {
            omega_m_hz: reader.f64("omega_m_hz", core::f64::consts::TAU * 25.45e6)?,
            lambda_minus_m: reader.f64("lambda_minus_m", 1564.25e-9)?,
            power_plus_w: reader.f64("power_plus_w", 0.0)?,
            power_minus_w: reader.f64("power_minus_w", 0.0)?,
            temperature_k: reader.f64("temperature_k", 0.0)?,
            kappa_ratio: reader.f64("kappa_ratio", 0.05)?,
            gamma_ratio: reader.f64("gamma_ratio", 1e-6)?,
            g0_ratio: reader.f64("g0_ratio", 2e-5)?,
            gain_ratio: reader.f64("gain_ratio", 0.02)?,
            theta: reader.f64("theta", 0.0)?,
        };
        ParamSource::Physical(pp)
    };

    // Mode-specific semantic checks on the parameter values.
    if mode == Mode::Check {
        if let ParamSource::Dimensionless(sp) = &params {
            if sp.g_plus >= sp.g_minus {
                return Err(CliError::domain(
                    "g_plus",
                    "mode check requires g_plus < g_minus",
                ));
            }
            if sp.theta != 0.0 {
                return Err(CliError::domain(
                    "theta",
                    "mode check compares against the zero-phase closed form; set theta = 0",
                ));
            }
        }
    }

    let out_dir = {
        let mut reader = SectionReader {
            name: "output",
            section: sections.get_mut("output"),
        };
        match reader.raw("dir") {
            Some((dir, _)) => PathBuf::from(dir),
            None => PathBuf::from("."),
        }
    };

    Ok(RunConfig {
        mode,
        params,
        evolve,
        sweep,
        wigner,
        out_dir,
    })
}

/// Run configuration equivalent to `--preset <name>`: a sweep over the
/// reference parameters.
pub fn preset_config(name: &str) -> Result<RunConfig, CliError> {
    if !PRESET_NAMES.contains(&name) {
        return Err(CliError::config(format!(
            "unknown preset `{name}`; valid presets: {}",
            PRESET_NAMES.join(", ")
        )));
    }
    Ok(RunConfig {
        mode: Mode::Sweep,
        params: ParamSource::Dimensionless(SystemParams::default()),
        evolve: None,
        sweep: Some(SweepOptions {
            preset: name.to_string(),
            theta_points: optomech_core::sweep::PRESET_THETA_POINTS,
        }),
        wigner: None,
        out_dir: PathBuf::from("."),
    })
}
