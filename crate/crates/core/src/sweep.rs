//! Photon-number sweeps, the summary table and figure data, with CSV/JSON
//! output and a flat key-value configuration format.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detection::{self, benchmark_limits};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::states::{self, CombinedStateParams, StateFamily};

/// Phase used by `fixed` mode when none is given.
pub const DEFAULT_FIXED_PHI: f64 = 1e-4;

pub const CSV_HEADER: [&str; 9] =
    ["N", "phi", "expectation", "derivative", "variance", "delta_phi", "shot_noise", "heisenberg", "bw_povm"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhiMode {
    /// Evaluate at one phase.
    Fixed(f64),
    /// Extrapolate `phi -> 0`.
    Limit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown format `{other}` (expected csv or json)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub state_label: String,
    pub n_min: u32,
    pub n_max: u32,
    pub phi_mode: PhiMode,
    pub combined_params: Option<CombinedStateParams>,
    /// `None` writes to standard output.
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

impl SweepConfig {
    pub fn family(&self) -> Result<StateFamily> {
        StateFamily::from_label(&self.state_label, self.combined_params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_min == 0 {
            return Err(Error::Config("n_min must be at least 1".into()));
        }
        if self.n_min > self.n_max {
            return Err(Error::Config(format!("n_min = {} exceeds n_max = {}", self.n_min, self.n_max)));
        }
        if let PhiMode::Fixed(phi) = self.phi_mode {
            if !phi.is_finite() {
                return Err(Error::Config(format!("phi must be finite, got {phi}")));
            }
        }
        self.family().map(|_| ())
    }
}

/// Values read from a configuration file. Every key is optional so that
/// command-line flags can fill or override them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub state_label: Option<String>,
    pub n_min: Option<u32>,
    pub n_max: Option<u32>,
    /// `Some(true)` for the small-phase limit.
    pub limit: Option<bool>,
    pub phi: Option<f64>,
    pub alpha_mag: Option<f64>,
    pub beta_mag: Option<f64>,
    pub theta: Option<f64>,
    pub output_path: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value.parse().map_err(|_| Error::Config(format!("line {line}: cannot parse `{value}` for `{key}`")))
}

impl ConfigFile {
    /// Parse `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ConfigFile::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| Error::Config(format!("line {line_no}: expected `key = value`")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "state_label" => cfg.state_label = Some(value.to_owned()),
                "n_min" => cfg.n_min = Some(parse_value(key, value, line_no)?),
                "n_max" => cfg.n_max = Some(parse_value(key, value, line_no)?),
                "phi_mode" => {
                    cfg.limit = Some(match value {
                        "limit" => true,
                        "fixed" => false,
                        _ => return Err(Error::Config(format!("line {line_no}: phi_mode is `limit` or `fixed`"))),
                    })
                }
                "phi" => cfg.phi = Some(parse_value(key, value, line_no)?),
                "alpha_mag" => cfg.alpha_mag = Some(parse_value(key, value, line_no)?),
                "beta_mag" => cfg.beta_mag = Some(parse_value(key, value, line_no)?),
                "theta" => cfg.theta = Some(parse_value(key, value, line_no)?),
                "output_path" => cfg.output_path = Some(PathBuf::from(value)),
                "format" => cfg.format = Some(value.parse()?),
                other => return Err(Error::Config(format!("line {line_no}: unknown key `{other}`"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// `self` overridden by every value present in `over`.
    pub fn merged(self, over: ConfigFile) -> ConfigFile {
        ConfigFile {
            state_label: over.state_label.or(self.state_label),
            n_min: over.n_min.or(self.n_min),
            n_max: over.n_max.or(self.n_max),
            limit: over.limit.or(self.limit),
            phi: over.phi.or(self.phi),
            alpha_mag: over.alpha_mag.or(self.alpha_mag),
            beta_mag: over.beta_mag.or(self.beta_mag),
            theta: over.theta.or(self.theta),
            output_path: over.output_path.or(self.output_path),
            format: over.format.or(self.format),
        }
    }

    /// Resolve into a validated sweep configuration. Without an explicit
    /// phase the small-phase limit is used; `n_max` defaults to `n_min`.
    pub fn into_sweep_config(self) -> Result<SweepConfig> {
        let state_label = self.state_label.ok_or_else(|| Error::Config("no state given".into()))?;
        let n_min = self.n_min.ok_or_else(|| Error::Config("no n_min given".into()))?;
        let n_max = self.n_max.unwrap_or(n_min);
        let phi_mode = match (self.limit, self.phi) {
            (Some(true), Some(_)) => {
                return Err(Error::Config("a fixed phi and the phi -> 0 limit are mutually exclusive".into()))
            }
            (Some(false), phi) => PhiMode::Fixed(phi.unwrap_or(DEFAULT_FIXED_PHI)),
            (None, Some(phi)) => PhiMode::Fixed(phi),
            (_, None) => PhiMode::Limit,
        };
        let combined_params = match (self.alpha_mag, self.beta_mag, self.theta) {
            (None, None, None) => None,
            (Some(a), Some(b), theta) => Some(CombinedStateParams::new(a, b, theta.unwrap_or(0.0))?),
            _ => return Err(Error::Config("combined state needs both alpha and beta".into())),
        };
        let config = SweepConfig {
            state_label,
            n_min,
            n_max,
            phi_mode,
            combined_params,
            output_path: self.output_path,
            format: self.format.unwrap_or(OutputFormat::Csv),
        };
        config.validate()?;
        Ok(config)
    }
}

/// One photon number of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    #[serde(rename = "N")]
    pub n: u32,
    /// Absent for small-phase-limit records.
    pub phi: Option<f64>,
    pub expectation: Option<f64>,
    pub derivative: Option<f64>,
    pub variance: Option<f64>,
    pub delta_phi: f64,
    pub shot_noise: f64,
    pub heisenberg: f64,
    pub bw_povm: Option<f64>,
}

/// Compute one record.
pub fn evaluate(family: &StateFamily, n: u32, phi_mode: PhiMode) -> Result<SweepRecord> {
    let state = family.build(n)?;
    let limits = benchmark_limits(n)?;
    let mut record = SweepRecord {
        n,
        phi: None,
        expectation: None,
        derivative: None,
        variance: None,
        delta_phi: f64::INFINITY,
        shot_noise: limits.shot_noise,
        heisenberg: limits.heisenberg,
        bw_povm: Some(limits.bw_povm),
    };
    match phi_mode {
        PhiMode::Fixed(phi) => {
            let r = detection::phase_uncertainty(&state, phi)?;
            record.phi = Some(phi);
            record.expectation = Some(r.expectation);
            record.derivative = Some(r.derivative);
            record.variance = Some(r.variance);
            record.delta_phi = r.delta_phi;
        }
        PhiMode::Limit => record.delta_phi = detection::phase_uncertainty_limit(&state)?,
    }
    Ok(record)
}

/// Evaluate every photon number in `ns` that the family admits, in parallel,
/// returning records ordered as `ns`. Others are skipped with a warning on
/// standard error.
pub fn sweep_family(
    family: &StateFamily,
    ns: impl IntoIterator<Item = u32>,
    phi_mode: PhiMode,
) -> Result<Vec<SweepRecord>> {
    let (valid, skipped): (Vec<u32>, Vec<u32>) = ns.into_iter().partition(|&n| family.accepts(n));
    if !skipped.is_empty() {
        eprintln!(
            "warning: skipping N = {} (outside the photon-number class of `{}`)",
            compress_ranges(&skipped),
            family.label()
        );
    }
    valid.into_par_iter().map(|n| evaluate(family, n, phi_mode)).collect()
}

fn compress_ranges(ns: &[u32]) -> String {
    if ns.len() <= 6 {
        return ns.iter().map(u32::to_string).collect::<Vec<_>>().join(", ");
    }
    format!("{}, {}, ..., {} ({} values)", ns[0], ns[1], ns[ns.len() - 1], ns.len())
}

pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    sweep_family(&config.family()?, config.n_min..=config.n_max, config.phi_mode)
}

/// Round-trip-exact float text: 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn format_opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

pub fn write_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.n.to_string(),
            format_opt(r.phi),
            format_opt(r.expectation),
            format_opt(r.derivative),
            format_opt(r.variance),
            format_float(r.delta_phi),
            format_float(r.shot_noise),
            format_float(r.heisenberg),
            format_opt(r.bw_povm),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn parse_field(field: &str, column: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        return Ok(None);
    }
    field.parse().map(Some).map_err(|_| Error::Config(format!("column {column}: cannot parse `{field}`")))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(Error::Config(format!("unexpected CSV header {header:?}")));
    }
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let get = |i: usize| parse_field(&row[i], CSV_HEADER[i]);
        let required = |i: usize| get(i)?.ok_or_else(|| Error::Config(format!("column {} is empty", CSV_HEADER[i])));
        out.push(SweepRecord {
            n: row[0].parse().map_err(|_| Error::Config(format!("bad N `{}`", &row[0])))?,
            phi: get(1)?,
            expectation: get(2)?,
            derivative: get(3)?,
            variance: get(4)?,
            delta_phi: required(5)?,
            shot_noise: required(6)?,
            heisenberg: required(7)?,
            bw_povm: get(8)?,
        });
    }
    Ok(out)
}

/// JSON array of records; infinite values become `null`.
pub fn write_json<W: Write>(records: &[SweepRecord], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, records)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn create_file(path: &Path) -> Result<io::BufWriter<fs::File>> {
    fs::File::create(path).map(io::BufWriter::new).map_err(|source| Error::Output { path: path.to_owned(), source })
}

/// Write records to `path`, or to standard output when `path` is `None`.
pub fn write_records(records: &[SweepRecord], path: Option<&Path>, format: OutputFormat) -> Result<()> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(create_file(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let result = match format {
        OutputFormat::Csv => write_csv(records, sink),
        OutputFormat::Json => write_json(records, sink),
    };
    match (result, path) {
        (Err(Error::Io(source)), Some(p)) => Err(Error::Output { path: p.to_owned(), source }),
        (other, _) => other,
    }
}

/// One line of the summary table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub row: u32,
    pub state: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub fock_notation: String,
    pub delta_phi: f64,
    /// Quoted closed form where the table gives one.
    pub closed_form: Option<f64>,
    pub abs_diff: Option<f64>,
    pub shot_noise: f64,
    pub heisenberg: f64,
}

/// The eight families of the summary table, at N = 8 (N = 9 for the
/// odd-only modified Yuen state, mean photon number 8 for the coherent
/// state).
pub const TABLE_ROWS: [(&str, u32); 8] = [
    ("coherent", 8),
    ("single-fock", 8),
    ("dual-fock", 8),
    ("yurke", 8),
    ("modified-yuen", 9),
    ("pezze-smerzi", 8),
    ("berry-wiseman", 8),
    ("noon-internal", 8),
];

pub fn compute_table() -> Result<Vec<TableRow>> {
    TABLE_ROWS
        .par_iter()
        .enumerate()
        .map(|(idx, &(label, n))| {
            let family = StateFamily::from_label(label, None)?;
            let state = family.build(n)?;
            let delta_phi = detection::phase_uncertainty_limit(&state)?;
            let limits = benchmark_limits(n)?;
            let closed_form = detection::closed_form_limit(label, n);
            let fock_notation =
                if label == "coherent" { format!("|alpha>_a|0>_b, |alpha|^2 = {n}") } else { state.fock_notation() };
            Ok(TableRow {
                row: idx as u32 + 1,
                state: label.to_owned(),
                n,
                fock_notation,
                delta_phi,
                closed_form,
                abs_diff: closed_form.map(|c| (c - delta_phi).abs()),
                shot_noise: limits.shot_noise,
                heisenberg: limits.heisenberg,
            })
        })
        .collect()
}

pub fn write_table<W: Write>(rows: &[TableRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "row",
        "state",
        "N",
        "fock_notation",
        "delta_phi",
        "closed_form",
        "abs_diff",
        "shot_noise",
        "heisenberg",
    ])?;
    for r in rows {
        w.write_record([
            r.row.to_string(),
            r.state.clone(),
            r.n.to_string(),
            r.fock_notation.clone(),
            format_float(r.delta_phi),
            format_opt(r.closed_form),
            format_opt(r.abs_diff),
            format_float(r.shot_noise),
            format_float(r.heisenberg),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Compute the table and write it to `path` (standard output if `None`).
pub fn reproduce_table(path: Option<&Path>) -> Result<Vec<TableRow>> {
    let rows = compute_table()?;
    match path {
        Some(p) => write_table(&rows, create_file(p)?).map_err(|e| match e {
            Error::Io(source) => Error::Output { path: p.to_owned(), source },
            other => other,
        })?,
        None => write_table(&rows, io::stdout().lock())?,
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2" => Ok(FigureId::Fig2),
            "fig3" => Ok(FigureId::Fig3),
            "fig4" => Ok(FigureId::Fig4),
            other => Err(Error::Config(format!("unknown figure `{other}` (expected fig2, fig3 or fig4)"))),
        }
    }
}

/// Largest photon number plotted in the N-sweep figures.
pub const FIGURE_N_MAX: u32 = 100;
/// Photon number of the input-coefficient figure.
pub const FIG2_N: u32 = 100;

/// A table of curves sharing an N axis: one column per curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<(u32, Vec<Option<f64>>)>,
}

impl CurveTable {
    pub fn column(&self, name: &str) -> Option<Vec<(u32, Option<f64>)>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|(n, v)| (*n, v[idx])).collect())
    }

    fn write<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["N".to_owned()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header)?;
        for (n, values) in &self.rows {
            let mut record = vec![n.to_string()];
            record.extend(values.iter().map(|v| format_opt(*v)));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// A curve to compute for a figure panel.
struct Curve {
    name: &'static str,
    family: StateFamily,
}

fn combined(alpha: f64, beta: f64, theta: f64) -> StateFamily {
    StateFamily::Combined(CombinedStateParams { alpha_mag: alpha, beta_mag: beta, theta })
}

fn curve_table(name: &str, ns: &[u32], curves: &[Curve], with_povm: bool) -> Result<CurveTable> {
    let mut columns: Vec<String> = curves.iter().map(|c| c.name.to_owned()).collect();
    let computed: Vec<Vec<Option<f64>>> = curves
        .iter()
        .map(|c| {
            ns.par_iter()
                .map(|&n| {
                    if c.family.accepts(n) {
                        let state = c.family.build(n)?;
                        detection::phase_uncertainty_limit(&state).map(Some)
                    } else {
                        Ok(None)
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    columns.push("shot_noise".into());
    columns.push("heisenberg".into());
    if with_povm {
        columns.push("bw_povm".into());
    }
    let rows = ns
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let limits = benchmark_limits(n)?;
            let mut values: Vec<Option<f64>> = computed.iter().map(|col| col[i]).collect();
            values.push(Some(limits.shot_noise));
            values.push(Some(limits.heisenberg));
            if with_povm {
                values.push(Some(limits.bw_povm));
            }
            Ok((n, values))
        })
        .collect::<Result<_>>()?;
    Ok(CurveTable { name: name.to_owned(), columns, rows })
}

/// Input coefficients `A_mu` of the state that becomes a NOON state after
/// the first beam splitter, `N = 100`.
pub fn fig2_data() -> Result<Vec<(HalfInt, Complex64)>> {
    let coeffs = states::noon_input_coefficients(FIG2_N)?;
    let j = HalfInt::spin_of(FIG2_N);
    Ok(j.projections().zip(coeffs).collect())
}

pub fn fig3_data() -> Result<Vec<CurveTable>> {
    let even: Vec<u32> = (2..=FIGURE_N_MAX).step_by(2).collect();
    let (two_thirds, one_third) = ((2.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt());
    Ok(vec![
        curve_table("fig3_I", &even, &[Curve { name: "dual_fock", family: StateFamily::DualFock }], false)?,
        curve_table(
            "fig3_II",
            &even,
            &[
                Curve { name: "combined_a", family: combined(two_thirds, one_third, 0.0) },
                Curve { name: "combined_b", family: combined(one_third, two_thirds, 0.0) },
            ],
            false,
        )?,
        curve_table(
            "fig3_III",
            &even,
            &[
                Curve { name: "theta_0", family: combined(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0) },
                Curve { name: "theta_pi", family: combined(FRAC_1_SQRT_2, FRAC_1_SQRT_2, PI) },
                Curve { name: "theta_pi_4", family: combined(FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_PI_4) },
            ],
            false,
        )?,
    ])
}

pub fn fig4_data() -> Result<Vec<CurveTable>> {
    let odd: Vec<u32> = (1..=FIGURE_N_MAX).step_by(2).collect();
    let even: Vec<u32> = (2..=FIGURE_N_MAX).step_by(2).collect();
    let all: Vec<u32> = (1..=FIGURE_N_MAX).collect();
    Ok(vec![
        curve_table("fig4_a", &odd, &[Curve { name: "modified_yuen", family: StateFamily::ModifiedYuen }], false)?,
        curve_table("fig4_b", &even, &[Curve { name: "pezze_smerzi", family: StateFamily::PezzeSmerzi }], false)?,
        curve_table("fig4_c", &all, &[Curve { name: "berry_wiseman", family: StateFamily::BerryWiseman }], true)?,
    ])
}

/// Write the data of one figure into directory `dir` (created if needed),
/// returning the files written.
pub fn emit_figure_data(figure: FigureId, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|source| Error::Output { path: dir.to_owned(), source })?;
    let mut written = Vec::new();
    match figure {
        FigureId::Fig2 => {
            let path = dir.join("fig2.csv");
            let mut w = csv::Writer::from_writer(create_file(&path)?);
            w.write_record(["mu", "re_A", "im_A", "abs_A"])?;
            for (mu, a) in fig2_data()? {
                w.write_record([mu.to_string(), format_float(a.re), format_float(a.im), format_float(a.norm())])?;
            }
            w.flush().map_err(|source| Error::Output { path: path.clone(), source })?;
            written.push(path);
        }
        FigureId::Fig3 | FigureId::Fig4 => {
            let tables = if figure == FigureId::Fig3 { fig3_data()? } else { fig4_data()? };
            for table in tables {
                let path = dir.join(format!("{}.csv", table.name));
                table.write(create_file(&path)?).map_err(|e| match e {
                    Error::Io(source) => Error::Output { path: path.clone(), source },
                    other => other,
                })?;
                written.push(path);
            }
        }
    }
    Ok(written)
}
