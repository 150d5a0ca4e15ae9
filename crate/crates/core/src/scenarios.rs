//! Parameter sweeps over the two-state discriminator, the N-state report,
//! and CSV/SVG rendering of the resulting tables.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use crate::detection::{analytic_nstate_success, analytic_p1, analytic_p2, DetectorModel, InterferenceModel};
use crate::discriminator::NStatePlan;
use crate::drift::{DriftModel, StabilizerConfig};
use crate::error::{config, Error, Result};
use crate::montecarlo::{
    run_experiment_with, Execution, ExperimentConfig, ExperimentResult, DEFAULT_BLOCKS, DEFAULT_DARK_MEAN,
    DEFAULT_EFFICIENCY, DEFAULT_TRIALS_PER_BLOCK, DEFAULT_VISIBILITY,
};
use crate::optics::{from_intensity_phase, ComplexAmplitude};

type Amplitude = ComplexAmplitude<f64>;

/// Fixed intensity of the first program state in the ratio sweep.
pub const RATIO_SWEEP_ALPHA1_INTENSITY: f64 = 1.33;

/// Illustrative intensities for the equal-intensity phase sweep.
pub const PHASE_SWEEP_INTENSITIES: [f64; 3] = [0.25, 0.5, 1.0];

/// Coherent state given by mean photon number and phase in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateSpec {
    pub intensity: f64,
    pub phase_deg: f64,
}

impl StateSpec {
    pub fn new(intensity: f64, phase_deg: f64) -> Self {
        Self { intensity, phase_deg }
    }

    pub fn amplitude(&self) -> Result<Amplitude> {
        from_intensity_phase(self.intensity, self.phase_deg.to_radians())
    }
}

/// Everything a sweep holds fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub t0: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub dark: f64,
    pub vis1: f64,
    pub vis2: f64,
    pub alpha1: StateSpec,
    pub alpha2: StateSpec,
    pub trials_per_block: u64,
    pub blocks: u32,
    pub seed: u64,
    pub drift_sigma: f64,
    pub stabilize: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            t0: 0.5,
            eta1: DEFAULT_EFFICIENCY,
            eta2: DEFAULT_EFFICIENCY,
            dark: DEFAULT_DARK_MEAN,
            vis1: DEFAULT_VISIBILITY,
            vis2: DEFAULT_VISIBILITY,
            alpha1: StateSpec::new(1.0, 0.0),
            alpha2: StateSpec::new(1.0, 180.0),
            trials_per_block: DEFAULT_TRIALS_PER_BLOCK,
            blocks: DEFAULT_BLOCKS,
            seed: 0,
            drift_sigma: 0.0,
            stabilize: false,
        }
    }
}

impl Settings {
    /// Ideal detectors and interference: `η = 1`, no dark counts, `V = 1`.
    pub fn ideal() -> Self {
        Self {
            eta1: 1.0,
            eta2: 1.0,
            dark: 0.0,
            vis1: 1.0,
            vis2: 1.0,
            ..Self::default()
        }
    }

    /// `α₂` phase minus `α₁` phase, in degrees.
    pub fn phase_difference_deg(&self) -> f64 {
        self.alpha2.phase_deg - self.alpha1.phase_deg
    }

    /// Two-state experiment with the given program states.
    pub fn experiment(&self, alpha_1: Amplitude, alpha_2: Amplitude) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::two_state(alpha_1, alpha_2, self.t0)?;
        cfg.detectors = vec![DetectorModel::new(self.eta1, self.dark)?, DetectorModel::new(self.eta2, self.dark)?];
        cfg.interference = vec![InterferenceModel::new(self.vis1)?, InterferenceModel::new(self.vis2)?];
        cfg.trials_per_block = self.trials_per_block;
        cfg.blocks = self.blocks;
        cfg.seed = self.seed;
        cfg.drift = DriftModel::new(self.drift_sigma)?;
        cfg.stabilizer = if self.stabilize {
            StabilizerConfig::default()
        } else {
            StabilizerConfig::disabled()
        };
        Ok(cfg)
    }
}

/// Swept quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    /// Phase of `α₂` relative to `α₁`, degrees.
    PhaseDifference,
    /// Common mean photon number `|α₁|² = |α₂|²`.
    Intensity,
    /// `|α₂|²/|α₁|²`.
    IntensityRatio,
    NStates,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl SweepRange {
    pub fn new(start: f64, stop: f64, points: usize) -> Result<Self> {
        let range = Self { start, stop, points };
        range.validate()?;
        Ok(range)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(config(format!("a sweep needs at least 2 points, got {}", self.points)));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(config("sweep bounds must be finite"));
        }
        Ok(())
    }

    /// Evenly spaced points, both ends included.
    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.stop } else { self.start + step * i as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub range: SweepRange,
    pub settings: Settings,
}

impl SweepSpec {
    pub fn new(variable: SweepVariable, range: SweepRange, settings: Settings) -> Self {
        Self {
            variable,
            range,
            settings,
        }
    }

    /// Runs the sweep its variable names. `NStates` has its own report.
    pub fn run(&self, execution: Execution) -> Result<Table> {
        match self.variable {
            SweepVariable::PhaseDifference => sweep_phase(self, execution),
            SweepVariable::Intensity => sweep_intensity(self, execution),
            SweepVariable::IntensityRatio => sweep_ratio(self, execution),
            SweepVariable::NStates => Err(config("use nstate_report for state-count scans")),
        }
    }
}

/// Column names shared by every two-state sweep, in output order.
pub const RESULT_COLUMNS: [&str; 13] = [
    "x",
    "p_plus_1",
    "p_minus_1",
    "p_plus_2",
    "p_minus_2",
    "p_inconclusive",
    "analytic_p1",
    "analytic_p2",
    "stderr_plus_1",
    "stderr_minus_1",
    "stderr_plus_2",
    "stderr_minus_2",
    "stderr_inconclusive",
];

/// One sweep point: measured fractions, analytic overlay, and standard
/// errors. `p_plus_j`/`p_minus_j` come from a run in which every pulse
/// carries program `j`; `p_inconclusive` averages the two runs.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub x: f64,
    pub p_plus: [f64; 2],
    pub p_minus: [f64; 2],
    pub p_inconclusive: f64,
    pub analytic_p1: f64,
    pub analytic_p2: f64,
    pub stderr_plus: [f64; 2],
    pub stderr_minus: [f64; 2],
    pub stderr_inconclusive: f64,
    /// Sweep-specific columns after the shared ones.
    pub extra: Vec<f64>,
}

impl ResultRow {
    fn values(&self) -> Vec<f64> {
        let mut v = vec![
            self.x,
            self.p_plus[0],
            self.p_minus[0],
            self.p_plus[1],
            self.p_minus[1],
            self.p_inconclusive,
            self.analytic_p1,
            self.analytic_p2,
            self.stderr_plus[0],
            self.stderr_minus[0],
            self.stderr_plus[1],
            self.stderr_minus[1],
            self.stderr_inconclusive,
        ];
        v.extend(&self.extra);
        v
    }

    /// Measured conclusive fraction for hypothesis `j` (0-based).
    pub fn conclusive(&self, j: usize) -> f64 {
        self.p_plus[j] + self.p_minus[j]
    }
}

/// Named numeric columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Invariant(format!(
                "row has {} values for {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        if let Some(bad) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::Invariant(format!("non-finite value in column {}", self.columns[bad])));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

fn two_state_table(extra_columns: &[&str], rows: Vec<ResultRow>) -> Result<Table> {
    let columns = RESULT_COLUMNS
        .iter()
        .chain(extra_columns)
        .map(|s| s.to_string())
        .collect();
    let mut table = Table::new(columns);
    for row in rows {
        for p in row.p_plus.iter().chain(&row.p_minus).chain([&row.p_inconclusive]) {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::Invariant(format!("fraction {p} outside [0, 1] at x = {}", row.x)));
            }
        }
        table.push(row.values())?;
    }
    Ok(table)
}

/// Sub-seed for sweep row `row`, hypothesis `truth`.
fn derive_seed(seed: u64, row: usize, truth: usize) -> u64 {
    // SplitMix64 finalizer over the packed indices.
    let mut z = seed
        .wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(((row as u64) << 8 | truth as u64) + 1));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs one experiment per hypothesis and assembles the shared columns.
pub fn measure_row(
    settings: &Settings,
    x: f64,
    alpha_1: Amplitude,
    alpha_2: Amplitude,
    row: usize,
    execution: Execution,
) -> Result<ResultRow> {
    let base = settings.experiment(alpha_1, alpha_2)?;
    let runs: Vec<ExperimentResult> = (0..2)
        .map(|truth| {
            let cfg = base
                .clone()
                .with_truth(truth)
                .with_seed(derive_seed(settings.seed, row, truth));
            run_experiment_with(&cfg, execution)
        })
        .collect::<Result<_>>()?;

    let f = |j: usize| &runs[j].fractions;
    Ok(ResultRow {
        x,
        p_plus: [f(0).p_plus[0], f(1).p_plus[1]],
        p_minus: [f(0).p_minus[0], f(1).p_minus[1]],
        p_inconclusive: 0.5 * (f(0).p_inconclusive + f(1).p_inconclusive),
        analytic_p1: analytic_p1(alpha_1, alpha_2, settings.t0, settings.eta2),
        analytic_p2: analytic_p2(alpha_1, alpha_2, settings.t0, settings.eta1),
        stderr_plus: [f(0).stderr_plus[0], f(1).stderr_plus[1]],
        stderr_minus: [f(0).stderr_minus[0], f(1).stderr_minus[1]],
        stderr_inconclusive: 0.5 * f(0).stderr_inconclusive.hypot(f(1).stderr_inconclusive),
        extra: Vec::new(),
    })
}

/// Sweeps the phase of `α₂` relative to `α₁` over the range (degrees),
/// keeping both intensities, which are echoed in the last two columns.
pub fn sweep_phase(spec: &SweepSpec, execution: Execution) -> Result<Table> {
    spec.range.validate()?;
    let s = &spec.settings;
    let alpha_1 = s.alpha1.amplitude()?;
    let rows = spec
        .range
        .values()
        .into_iter()
        .enumerate()
        .map(|(i, dphi)| {
            let alpha_2 = StateSpec::new(s.alpha2.intensity, s.alpha1.phase_deg + dphi).amplitude()?;
            let mut row = measure_row(s, dphi, alpha_1, alpha_2, i, execution)?;
            row.extra = vec![s.alpha1.intensity, s.alpha2.intensity];
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    two_state_table(&["intensity_1", "intensity_2"], rows)
}

/// Sweeps the common intensity `|α₁|² = |α₂|²` at the configured phase
/// difference, with an ideal-detector overlay.
pub fn sweep_intensity(spec: &SweepSpec, execution: Execution) -> Result<Table> {
    spec.range.validate()?;
    let s = &spec.settings;
    let rows = spec
        .range
        .values()
        .into_iter()
        .enumerate()
        .map(|(i, n)| {
            let alpha_1 = StateSpec::new(n, s.alpha1.phase_deg).amplitude()?;
            let alpha_2 = StateSpec::new(n, s.alpha2.phase_deg).amplitude()?;
            let mut row = measure_row(s, n, alpha_1, alpha_2, i, execution)?;
            row.extra = vec![
                analytic_p1(alpha_1, alpha_2, s.t0, 1.0),
                analytic_p2(alpha_1, alpha_2, s.t0, 1.0),
            ];
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    two_state_table(&["analytic_p1_ideal", "analytic_p2_ideal"], rows)
}

/// Equal-prior conclusive probability `(p₁ + p₂)/2`.
fn mean_success(s: &Settings, alpha_1: Amplitude, alpha_2: Amplitude) -> f64 {
    0.5 * (analytic_p1(alpha_1, alpha_2, s.t0, s.eta2) + analytic_p2(alpha_1, alpha_2, s.t0, s.eta1))
}

/// Sweeps `r = |α₂|²/|α₁|²` with `|α₁|²` fixed, adding the analytic
/// curves for phase differences of 180° and 0°.
pub fn sweep_ratio(spec: &SweepSpec, execution: Execution) -> Result<Table> {
    spec.range.validate()?;
    if spec.range.start < 0.0 || spec.range.stop < 0.0 {
        return Err(config("intensity ratio must be non-negative"));
    }
    let s = &spec.settings;
    let n1 = s.alpha1.intensity;
    let alpha_1 = s.alpha1.amplitude()?;
    let rows = spec
        .range
        .values()
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let alpha_2 = StateSpec::new(r * n1, s.alpha2.phase_deg).amplitude()?;
            let mut row = measure_row(s, r, alpha_1, alpha_2, i, execution)?;
            let opposite = StateSpec::new(r * n1, s.alpha1.phase_deg + 180.0).amplitude()?;
            let aligned = StateSpec::new(r * n1, s.alpha1.phase_deg).amplitude()?;
            row.extra = vec![mean_success(s, alpha_1, opposite), mean_success(s, alpha_1, aligned)];
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    two_state_table(&["analytic_180", "analytic_0"], rows)
}

/// `n` states of equal intensity spread evenly in phase.
pub fn symmetric_programs(n: usize, intensity: f64) -> Result<Vec<Amplitude>> {
    (0..n)
        .map(|k| from_intensity_phase(intensity, std::f64::consts::TAU * k as f64 / n as f64))
        .collect()
}

pub const NSTATE_COLUMNS: [&str; 8] = [
    "hypothesis",
    "analytic_success",
    "p_plus",
    "p_minus",
    "p_inconclusive",
    "stderr_plus",
    "stderr_minus",
    "stderr_inconclusive",
];

/// Per-hypothesis analytic success (no dark counts) next to Monte Carlo
/// fractions from the exclusion classifier. Each hypothesis gets its own
/// run in which every pulse carries that program state.
pub fn nstate_report(
    programs: &[Amplitude],
    det: &DetectorModel<f64>,
    settings: &Settings,
    execution: Execution,
) -> Result<Table> {
    let plan = NStatePlan::new(programs.len())?;
    let mut base = ExperimentConfig::n_state(programs.to_vec())?
        .with_detectors(*det)
        .with_visibility(InterferenceModel::new(settings.vis1)?)
        .with_trials(settings.trials_per_block, settings.blocks);
    base.drift = DriftModel::new(settings.drift_sigma)?;
    if settings.stabilize {
        base.stabilizer = StabilizerConfig::default();
    }
    let ideal_dark = DetectorModel { dark_mean: 0.0, ..*det };

    let mut table = Table::new(NSTATE_COLUMNS.iter().map(|s| s.to_string()).collect());
    for k in 0..programs.len() {
        let cfg = base.clone().with_truth(k).with_seed(derive_seed(settings.seed, 0, k));
        let r = run_experiment_with(&cfg, execution)?;
        let f = &r.fractions;
        table.push(vec![
            (k + 1) as f64,
            analytic_nstate_success(programs, k, &plan, &ideal_dark)?,
            f.p_plus[k],
            f.p_minus[k],
            f.p_inconclusive,
            f.stderr_plus[k],
            f.stderr_minus[k],
            f.stderr_inconclusive,
        ])?;
    }
    Ok(table)
}

/// Concatenates tables with identical columns.
pub fn stack(tables: Vec<Table>) -> Result<Table> {
    let mut iter = tables.into_iter();
    let mut out = iter.next().ok_or_else(|| config("nothing to stack"))?;
    for t in iter {
        if t.columns != out.columns {
            return Err(Error::Invariant("stacked tables have different columns".into()));
        }
        out.rows.extend(t.rows);
    }
    Ok(out)
}

/// Output encodings of a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Svg,
}

/// Comma-separated, header row first, LF line endings.
pub fn to_csv(table: &Table) -> String {
    let mut out = table.columns.join(",");
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

const SVG_WIDTH: f64 = 720.0;
const SVG_HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Standalone SVG line chart of every column except the first (the x axis),
/// the `stderr_*` columns and echoed inputs. Measured columns are drawn as markers,
/// analytic ones as lines.
pub fn to_svg(table: &Table, title: &str) -> String {
    let xs: Vec<f64> = table.rows.iter().map(|r| r[0]).collect();
    let series: Vec<usize> = (1..table.columns.len())
        .filter(|&i| {
            let name = &table.columns[i];
            !name.starts_with("stderr") && !name.starts_with("intensity") && name != "hypothesis"
        })
        .collect();

    let (x_min, x_max) = bounds(xs.iter().copied());
    let (y_lo, y_hi) = bounds(series.iter().flat_map(|&i| table.rows.iter().map(move |r| r[i])));
    let (y_min, y_max) = (y_lo.min(0.0), y_hi.max(1.0));
    let plot_w = SVG_WIDTH - 2.0 * MARGIN;
    let plot_h = SVG_HEIGHT - 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - x_min) / (x_max - x_min) * plot_w;
    let py = |y: f64| SVG_HEIGHT - MARGIN - (y - y_min) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        SVG_WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<path d="M{m:.2} {top:.2} L{m:.2} {bot:.2} L{right:.2} {bot:.2}" stroke="black" fill="none"/>"#,
        m = MARGIN,
        top = MARGIN,
        bot = SVG_HEIGHT - MARGIN,
        right = SVG_WIDTH - MARGIN
    );
    for k in 0..=4 {
        let fx = x_min + (x_max - x_min) * k as f64 / 4.0;
        let fy = y_min + (y_max - y_min) * k as f64 / 4.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            px(fx),
            SVG_HEIGHT - MARGIN + 16.0,
            tick(fx)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            MARGIN - 6.0,
            py(fy) + 4.0,
            tick(fy)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
        SVG_WIDTH / 2.0,
        SVG_HEIGHT - 16.0,
        escape(&table.columns[0])
    );

    for (k, &col) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let name = &table.columns[col];
        let measured = name.starts_with("p_");
        if measured {
            for (x, row) in xs.iter().zip(&table.rows) {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                    px(*x),
                    py(row[col])
                );
            }
        } else {
            // Stacked sweeps restart x; each restart opens a new subpath.
            let mut d = String::new();
            for (i, (x, row)) in xs.iter().zip(&table.rows).enumerate() {
                let op = if i == 0 || *x < xs[i - 1] { 'M' } else { 'L' };
                let _ = write!(d, "{op}{:.2} {:.2} ", px(*x), py(row[col]));
            }
            let _ = writeln!(
                svg,
                r#"<path d="{}" stroke="{color}" stroke-width="2" fill="none"/>"#,
                d.trim_end()
            );
        }
        let ly = MARGIN + 16.0 * k as f64;
        let _ = writeln!(
            svg,
            r#"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="{color}"/>"#,
            SVG_WIDTH - MARGIN - 150.0,
            ly - 9.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">{}</text>"#,
            SVG_WIDTH - MARGIN - 135.0,
            ly,
            escape(name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `table` in `format`.
pub fn render(table: &Table, format: Format, title: &str) -> String {
    match format {
        Format::Csv => to_csv(table),
        Format::Svg => to_svg(table, title),
    }
}

/// Writes the rendered table to `path`.
pub fn emit(table: &Table, format: Format, title: &str, path: &Path) -> io::Result<()> {
    std::fs::write(path, render(table, format, title))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(settings: Settings) -> Settings {
        Settings {
            trials_per_block: 2_000,
            blocks: 4,
            ..settings
        }
    }

    #[test]
    fn range_validation() {
        assert!(SweepRange::new(0.0, 1.0, 1).is_err());
        assert!(SweepRange::new(0.0, f64::NAN, 5).is_err());
        let r = SweepRange::new(0.0, 360.0, 5).unwrap();
        assert_eq!(r.values(), vec![0.0, 90.0, 180.0, 270.0, 360.0]);
    }

    #[test]
    fn phase_sweep_analytic_points() {
        let spec = SweepSpec::new(
            SweepVariable::PhaseDifference,
            SweepRange::new(0.0, 360.0, 5).unwrap(),
            quick(Settings { vis1: 1.0, vis2: 1.0, ..Settings::default() }),
        );
        let t = spec.run(Execution::Sequential).unwrap();
        let p1 = t.column("analytic_p1").unwrap();
        assert!(p1[0].abs() < 1e-15);
        assert!((p1[2] - 0.5067).abs() < 5e-5);
        // Symmetric about 180°.
        assert!((p1[1] - p1[3]).abs() < 1e-12);
        assert!(p1[4].abs() < 1e-12);
        // Identical states: conclusive only through dark counts.
        let c = t.column("p_plus_1").unwrap()[0] + t.column("p_minus_1").unwrap()[0];
        assert!(c < 1e-3);
    }

    #[test]
    fn intensity_sweep_points() {
        let spec = SweepSpec::new(
            SweepVariable::Intensity,
            SweepRange::new(0.0, 2.0, 3).unwrap(),
            quick(Settings::default()),
        );
        let t = spec.run(Execution::Sequential).unwrap();
        let p1 = t.column("analytic_p1").unwrap();
        let ideal = t.column("analytic_p1_ideal").unwrap();
        assert_eq!(p1[0], 0.0);
        assert!((p1[2] - 0.7567).abs() < 5e-5);
        assert!((ideal[1] - 0.7364).abs() < 5e-5);
    }

    #[test]
    fn ratio_sweep_points() {
        let settings = Settings {
            alpha1: StateSpec::new(RATIO_SWEEP_ALPHA1_INTENSITY, 0.0),
            ..quick(Settings::default())
        };
        let spec = SweepSpec::new(SweepVariable::IntensityRatio, SweepRange::new(0.0, 1.0, 2).unwrap(), settings);
        let t = spec.run(Execution::Sequential).unwrap();
        let up = t.column("analytic_180").unwrap();
        let down = t.column("analytic_0").unwrap();
        assert!((up[0] - down[0]).abs() < 1e-15);
        assert!((up[0] - 0.2094).abs() < 5e-5);
        assert!(down[1].abs() < 1e-15);
        assert!((up[1] - 0.6093).abs() < 5e-5);
        assert!(SweepSpec::new(SweepVariable::IntensityRatio, SweepRange::new(-1.0, 1.0, 2).unwrap(), quick(Settings::default()))
            .run(Execution::Sequential)
            .is_err());
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec!["x".into(), "y".into()]);
        t.push(vec![0.5, 1.0]).unwrap();
        t.push(vec![1e-7, -2.25]).unwrap();
        assert_eq!(to_csv(&t), "x,y\n0.5,1\n0.0000001,-2.25\n");
        assert!(t.push(vec![1.0]).is_err());
        assert!(t.push(vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn svg_is_standalone() {
        let mut t = Table::new(vec!["x".into(), "p_plus_1".into(), "analytic_p1".into(), "stderr_plus_1".into()]);
        t.push(vec![0.0, 0.1, 0.0, 0.01]).unwrap();
        t.push(vec![1.0, 0.5, 0.4, 0.01]).unwrap();
        let svg = to_svg(&t, "a <b>");
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(!svg.contains("href"));
        assert!(svg.contains("a &lt;b&gt;"));
        assert!(!svg.contains(">stderr_plus_1<"));
        assert_eq!(svg, to_svg(&t, "a <b>"));
    }

    #[test]
    fn nstate_identical_programs_are_inconclusive() {
        let a = Amplitude::new(1.0, 0.0);
        let det = DetectorModel::new(0.53, 0.0).unwrap();
        let settings = Settings { vis1: 1.0, ..quick(Settings::default()) };
        let t = nstate_report(&[a; 3], &det, &settings, Execution::Sequential).unwrap();
        assert_eq!(t.rows.len(), 3);
        for row in &t.rows {
            assert_eq!(row[1], 0.0);
            assert_eq!(row[4], 1.0);
        }
    }

    #[test]
    fn sub_seeds_differ() {
        assert_ne!(derive_seed(1, 0, 0), derive_seed(1, 0, 1));
        assert_ne!(derive_seed(1, 0, 0), derive_seed(1, 1, 0));
        assert_eq!(derive_seed(5, 3, 1), derive_seed(5, 3, 1));
    }
}
