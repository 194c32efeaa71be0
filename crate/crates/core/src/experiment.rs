//! State-count experiments: per-pattern and incrementally merged pipelines,
//! growth classification and report files.
//!
//! Each row runs `compile → epsilon removal + trim → optimize_nfa →
//! determinize → minimize`. Brzozowski produces the reported minimal DFA;
//! Hopcroft runs on the same DFA and must give an isomorphic result.
//! Counts exclude unreachable states and the implicit dead state.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::automaton::{Automaton, StartKind};
use crate::error::{Error, Result};
use crate::generators::{Pattern, SplitMix64};
use crate::io::write_atomic;
use crate::transform::{
    determinize_with, equivalent_with, merge_patterns, minimize_brzozowski_with, minimize_hopcroft,
    optimize_nfa, remove_epsilon, DeterminizeOptions, DEFAULT_STATE_CAP,
};

pub const PIPELINE: &[&str] = &[
    "compile",
    "remove_epsilon",
    "trim",
    "optimize_nfa",
    "determinize",
    "minimize_brzozowski",
    "check_hopcroft",
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthThresholds {
    /// Log-log slope above which growth is Polynomial.
    pub polynomial_slope: f64,
    /// Lower end of the Linear slope band, reported in diagnostics.
    pub linear_slope_min: f64,
    /// Semi-log R² lead over log-log R² required for Exponential.
    pub r2_margin: f64,
}

impl Default for GrowthThresholds {
    fn default() -> Self {
        GrowthThresholds { polynomial_slope: 1.2, linear_slope_min: 0.8, r2_margin: 0.05 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub start_kind: StartKind,
    pub cap: usize,
    pub seed: u64,
    /// Probability that a row is spot-checked with `equivalent`.
    pub spot_check_rate: f64,
    /// Emit measured stage times instead of `NA`.
    pub timings: bool,
    pub thresholds: GrowthThresholds,
}

impl ExperimentConfig {
    pub fn new(start_kind: StartKind, seed: u64) -> Self {
        ExperimentConfig {
            start_kind,
            cap: DEFAULT_STATE_CAP,
            seed,
            spot_check_rate: 0.25,
            timings: false,
            thresholds: GrowthThresholds::default(),
        }
    }

    fn opts(&self) -> DeterminizeOptions {
        DeterminizeOptions { cap: self.cap }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell {
    Count(usize),
    CapExceeded,
    Error,
}

impl Cell {
    pub fn count(self) -> Option<usize> {
        match self {
            Cell::Count(n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Count(n) => write!(f, "{n}"),
            Cell::CapExceeded => f.write_str("CAP_EXCEEDED"),
            Cell::Error => f.write_str("ERROR"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    CapExceeded,
    Error(String),
}

impl RowStatus {
    fn tag(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::CapExceeded => "cap_exceeded",
            RowStatus::Error(_) => "error",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StageTimes {
    pub compile: f64,
    pub optimize: f64,
    pub determinize: f64,
    pub minimize: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    /// Pattern id, or merge step `k`.
    pub key: u64,
    /// Pattern size (per-pattern rows) or `k` (merge rows).
    pub x: f64,
    pub nfa_states: Cell,
    pub opt_nfa_states: Cell,
    pub dfa_states: Cell,
    pub mdfa_states: Cell,
    pub nfa_max_fanout: Cell,
    pub mdfa_max_fanout: Cell,
    pub times: StageTimes,
    pub status: RowStatus,
    pub spot_checked: bool,
}

impl ReportRow {
    fn failed(key: u64, x: f64, message: String) -> Self {
        ReportRow {
            key,
            x,
            nfa_states: Cell::Error,
            opt_nfa_states: Cell::Error,
            dfa_states: Cell::Error,
            mdfa_states: Cell::Error,
            nfa_max_fanout: Cell::Error,
            mdfa_max_fanout: Cell::Error,
            times: StageTimes::default(),
            status: RowStatus::Error(message),
            spot_checked: false,
        }
    }
}

fn max_fanout(a: &Automaton) -> usize {
    a.merge_parallel_edges().stats().max_fanout
}

fn spot_check(cfg: &ExperimentConfig, key: u64) -> bool {
    let mut rng = SplitMix64::new(cfg.seed ^ key.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    u < cfg.spot_check_rate
}

fn pipeline(compiled: Automaton, key: u64, x: f64, compile_time: f64, cfg: &ExperimentConfig) -> ReportRow {
    let opts = cfg.opts();
    let mut row = ReportRow::failed(key, x, String::new());
    row.status = RowStatus::Ok;
    row.times.compile = compile_time;

    let nfa = remove_epsilon(&compiled).trim();
    row.nfa_states = Cell::Count(nfa.state_count());
    row.nfa_max_fanout = Cell::Count(max_fanout(&nfa));

    let t = Instant::now();
    let opt = optimize_nfa(&nfa);
    row.times.optimize = t.elapsed().as_secs_f64();
    row.opt_nfa_states = Cell::Count(opt.state_count());

    let cap_hit = |mut row: ReportRow, err: Error| {
        if err.is_cap_exceeded() {
            row.status = RowStatus::CapExceeded;
            row.dfa_states = if row.dfa_states == Cell::Error { Cell::CapExceeded } else { row.dfa_states };
            row.mdfa_states = Cell::CapExceeded;
            row.mdfa_max_fanout = Cell::CapExceeded;
        } else {
            row.status = RowStatus::Error(err.to_string());
        }
        row
    };

    let t = Instant::now();
    let dfa = match determinize_with(&opt, opts) {
        Ok(d) => d.dfa,
        Err(e) => return cap_hit(row, e),
    };
    row.times.determinize = t.elapsed().as_secs_f64();
    row.dfa_states = Cell::Count(dfa.state_count());

    let t = Instant::now();
    let mdfa = match minimize_brzozowski_with(&dfa, opts) {
        Ok(m) => m,
        Err(e) => return cap_hit(row, e),
    };
    row.times.minimize = t.elapsed().as_secs_f64();
    row.mdfa_states = Cell::Count(mdfa.state_count());
    row.mdfa_max_fanout = Cell::Count(max_fanout(&mdfa));

    match minimize_hopcroft(&dfa).and_then(|h| h.isomorphic(&mdfa)) {
        Ok(true) => {}
        Ok(false) => {
            row.status = RowStatus::Error("Hopcroft and Brzozowski results differ".into());
            return row;
        }
        Err(e) => return cap_hit(row, e),
    }

    if spot_check(cfg, key) {
        row.spot_checked = true;
        let same = equivalent_with(&compiled, &opt, opts).and_then(|ok| {
            Ok(ok && equivalent_with(&opt, &mdfa, opts)? && equivalent_with(&dfa, &mdfa, opts)?)
        });
        match same {
            Ok(true) => {}
            Ok(false) => row.status = RowStatus::Error("equivalence spot check failed".into()),
            Err(e) if e.is_cap_exceeded() => row.spot_checked = false,
            Err(e) => row.status = RowStatus::Error(e.to_string()),
        }
    }
    row
}

fn compile_timed(p: &Pattern, start: StartKind) -> (Result<Automaton>, f64) {
    let t = Instant::now();
    let a = p.compile(start);
    (a, t.elapsed().as_secs_f64())
}

/// One row per pattern, ordered by pattern id. Failures become rows with
/// `CAP_EXCEEDED` or `ERROR` cells.
pub fn per_pattern_experiment(ps: &[Pattern], cfg: &ExperimentConfig) -> Vec<ReportRow> {
    let mut rows: Vec<ReportRow> = ps
        .par_iter()
        .map(|p| {
            let key = p.id as u64;
            let x = match p.size() {
                Ok(x) => x,
                Err(e) => return ReportRow::failed(key, f64::NAN, e.to_string()),
            };
            match compile_timed(p, cfg.start_kind) {
                (Ok(a), t) => pipeline(a, key, x, t, cfg),
                (Err(e), _) => ReportRow::failed(key, x, e.to_string()),
            }
        })
        .collect();
    rows.sort_by_key(|r| r.key);
    rows
}

/// Row `k` (for `k = 1..=|ps|`) runs the pipeline on the merge of the first
/// `k` patterns.
pub fn incremental_merge_experiment(ps: &[Pattern], cfg: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    if ps.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "incremental merge needs at least 2 patterns, got {}",
            ps.len()
        )));
    }
    let compiled: Vec<(Result<Automaton>, f64)> =
        ps.par_iter().map(|p| compile_timed(p, cfg.start_kind)).collect();
    Ok((1..=ps.len())
        .into_par_iter()
        .map(|k| {
            let key = k as u64;
            let x = k as f64;
            let t = Instant::now();
            let mut parts = Vec::with_capacity(k);
            let mut compile_time = 0.0;
            for (i, (a, ct)) in compiled[..k].iter().enumerate() {
                match a {
                    Ok(a) => parts.push(a.clone()),
                    Err(e) => return ReportRow::failed(key, x, format!("pattern {}: {e}", ps[i].id)),
                }
                compile_time += ct;
            }
            let merged = merge_patterns(&parts);
            pipeline(merged, key, x, compile_time + t.elapsed().as_secs_f64(), cfg)
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GrowthClass {
    Equal,
    Linear,
    Polynomial,
    Exponential,
}

impl fmt::Display for GrowthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Least-squares line `y = slope * x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn least_squares(x: &[f64], y: &[f64]) -> Fit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Fit { slope, intercept, r2 }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthFit {
    pub class: GrowthClass,
    pub points: usize,
    /// ln y against ln x.
    pub log_log: Fit,
    /// ln y against x.
    pub semi_log: Fit,
    /// Whether y equals the baseline at every point.
    pub equal_to_baseline: Option<bool>,
}

/// Classifies the growth of `y` over strictly increasing `x`.
///
/// Equal when a baseline is given and matches `y` everywhere. Otherwise
/// Exponential when the semi-log R² beats the log-log R² by the margin and
/// the semi-log slope is positive, Polynomial when the log-log slope exceeds
/// the polynomial threshold, and Linear below it.
pub fn classify_growth(
    x: &[f64],
    y: &[f64],
    baseline: Option<&[f64]>,
    th: &GrowthThresholds,
) -> Result<GrowthFit> {
    const NEEDED: usize = 4;
    if x.len() != y.len() || baseline.is_some_and(|b| b.len() != y.len()) {
        return Err(Error::InvalidArgument("series lengths differ".into()));
    }
    if x.len() < NEEDED {
        return Err(Error::TooFewPoints { needed: NEEDED, got: x.len() });
    }
    if x.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("x values must be strictly increasing".into()));
    }
    if x.iter().chain(y).any(|&v| !v.is_finite() || v <= 0.0) {
        return Err(Error::InvalidArgument("x and y values must be positive".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let log_log = least_squares(&lx, &ly);
    let semi_log = least_squares(x, &ly);
    let equal = baseline.map(|b| b.iter().zip(y).all(|(b, y)| b == y));
    let class = if equal == Some(true) {
        GrowthClass::Equal
    } else if semi_log.r2 - log_log.r2 >= th.r2_margin && semi_log.slope > 0.0 {
        GrowthClass::Exponential
    } else if log_log.slope > th.polynomial_slope {
        GrowthClass::Polynomial
    } else {
        GrowthClass::Linear
    };
    Ok(GrowthFit { class, points: x.len(), log_log, semi_log, equal_to_baseline: equal })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Series {
    Nfa,
    OptNfa,
    Dfa,
    Mdfa,
}

impl Series {
    fn cell(self, r: &ReportRow) -> Cell {
        match self {
            Series::Nfa => r.nfa_states,
            Series::OptNfa => r.opt_nfa_states,
            Series::Dfa => r.dfa_states,
            Series::Mdfa => r.mdfa_states,
        }
    }
}

/// Mean of `series` (and of `baseline`) per distinct `x` over rows whose
/// cells are all counts, in increasing `x`.
pub fn series_points(rows: &[ReportRow], series: Series, baseline: Option<Series>) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut groups: BTreeMap<u64, (f64, f64, f64, usize)> = BTreeMap::new();
    for r in rows {
        let y = series.cell(r).count();
        let b = baseline.map_or(Some(0), |s| s.cell(r).count());
        if let (Some(y), Some(b)) = (y, b) {
            if r.x.is_finite() {
                let g = groups.entry(r.x.to_bits()).or_insert((r.x, 0.0, 0.0, 0));
                g.1 += y as f64;
                g.2 += b as f64;
                g.3 += 1;
            }
        }
    }
    let mut pts: Vec<(f64, f64, f64)> =
        groups.values().map(|&(x, y, b, n)| (x, y / n as f64, b / n as f64)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    (pts.iter().map(|p| p.0).collect(), pts.iter().map(|p| p.1).collect(), pts.iter().map(|p| p.2).collect())
}

/// Growth of `series` over the rows' `x`; `baseline` enables the Equal test.
pub fn classify_rows(
    rows: &[ReportRow],
    series: Series,
    baseline: Option<Series>,
    th: &GrowthThresholds,
) -> Result<GrowthFit> {
    let (x, y, b) = series_points(rows, series, baseline);
    classify_growth(&x, &y, baseline.map(|_| b.as_slice()), th)
}

/// CSV with the fixed column set. Stage times are `NA` unless timings are on.
pub fn render_csv(rows: &[ReportRow], timings: bool) -> String {
    let mut out = String::from(
        "key,nfa_states,opt_nfa_states,dfa_states,mdfa_states,nfa_max_fanout,mdfa_max_fanout,\
         t_compile_s,t_optimize_s,t_determinize_s,t_minimize_s,status\n",
    );
    for r in rows {
        let t = |v: f64| if timings { format!("{v:.6}") } else { "NA".to_string() };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.key,
            r.nfa_states,
            r.opt_nfa_states,
            r.dfa_states,
            r.mdfa_states,
            r.nfa_max_fanout,
            r.mdfa_max_fanout,
            t(r.times.compile),
            t(r.times.optimize),
            t(r.times.determinize),
            t(r.times.minimize),
            r.status.tag()
        ));
    }
    out
}

/// Tab-separated plot data: x, optimized NFA and minimal DFA counts, each
/// with its base-10 logarithm.
pub fn render_plot_data(rows: &[ReportRow]) -> String {
    let (x, y_mdfa, y_nfa) = series_points(rows, Series::Mdfa, Some(Series::OptNfa));
    let mut out = String::from("x\tlog10_x\ty_nfa\tlog10_y_nfa\ty_mdfa\tlog10_y_mdfa\n");
    for i in 0..x.len() {
        out.push_str(&format!(
            "{}\t{:.6}\t{}\t{:.6}\t{}\t{:.6}\n",
            x[i],
            x[i].log10(),
            y_nfa[i],
            y_nfa[i].log10(),
            y_mdfa[i],
            y_mdfa[i].log10()
        ));
    }
    out
}

#[derive(Serialize)]
struct RowError<'a> {
    key: u64,
    message: &'a str,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    experiment: &'a str,
    seed: u64,
    start_kind: StartKind,
    determinization_cap: usize,
    pipeline: &'static [&'static str],
    component_order: &'static str,
    counting_rule: &'static str,
    spot_check_rate: f64,
    spot_checked_rows: Vec<u64>,
    thresholds: GrowthThresholds,
    growth: BTreeMap<&'a str, Option<GrowthFit>>,
    rows: usize,
    row_errors: Vec<RowError<'a>>,
}

/// Files written by [`emit_report`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportPaths {
    pub csv: PathBuf,
    pub plot: PathBuf,
    pub manifest: PathBuf,
}

impl ReportPaths {
    /// `rows.csv` → `rows.csv`, `rows.plot.tsv`, `rows.manifest.json`.
    pub fn for_csv(csv: &Path) -> Self {
        let stem = csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        ReportPaths {
            csv: csv.to_path_buf(),
            plot: csv.with_file_name(format!("{stem}.plot.tsv")),
            manifest: csv.with_file_name(format!("{stem}.manifest.json")),
        }
    }
}

/// Growth of the optimized NFA (no baseline) and minimal DFA (baseline:
/// optimized NFA) series. `None` where classification is impossible.
pub fn growth_summary(rows: &[ReportRow], th: &GrowthThresholds) -> BTreeMap<&'static str, Option<GrowthFit>> {
    BTreeMap::from([
        ("opt_nfa_states", classify_rows(rows, Series::OptNfa, None, th).ok()),
        ("mdfa_states", classify_rows(rows, Series::Mdfa, Some(Series::OptNfa), th).ok()),
    ])
}

/// Writes the CSV, plot data and run manifest atomically.
pub fn emit_report(
    rows: &[ReportRow],
    experiment: &str,
    cfg: &ExperimentConfig,
    csv: &Path,
) -> Result<ReportPaths> {
    let paths = ReportPaths::for_csv(csv);
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        experiment,
        seed: cfg.seed,
        start_kind: cfg.start_kind,
        determinization_cap: cfg.cap,
        pipeline: PIPELINE,
        component_order: "each pattern is compiled as its own component; merge rows optimize the merged automaton",
        counting_rule: "epsilon-free trimmed states; unreachable states and the implicit dead state excluded",
        spot_check_rate: cfg.spot_check_rate,
        spot_checked_rows: rows.iter().filter(|r| r.spot_checked).map(|r| r.key).collect(),
        thresholds: cfg.thresholds,
        growth: growth_summary(rows, &cfg.thresholds).into_iter().collect(),
        rows: rows.len(),
        row_errors: rows
            .iter()
            .filter_map(|r| match &r.status {
                RowStatus::Error(m) => Some(RowError { key: r.key, message: m }),
                _ => None,
            })
            .collect(),
    };
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    write_atomic(&paths.csv, render_csv(rows, cfg.timings).as_bytes())?;
    write_atomic(&paths.plot, render_plot_data(rows).as_bytes())?;
    write_atomic(&paths.manifest, json.as_bytes())?;
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ExperimentConfig {
        let mut c = ExperimentConfig::new(StartKind::StartOfData, 42);
        c.spot_check_rate = 1.0;
        c
    }

    fn counts(r: &ReportRow) -> [Cell; 4] {
        [r.nfa_states, r.opt_nfa_states, r.dfa_states, r.mdfa_states]
    }

    #[test]
    fn literal_row() {
        let rows = per_pattern_experiment(&[Pattern::regex(0, "ab")], &cfg());
        assert_eq!(counts(&rows[0]), [Cell::Count(3); 4]);
        assert_eq!(rows[0].status, RowStatus::Ok);
        assert!(rows[0].spot_checked);
    }

    #[test]
    fn rows_ordered_and_invariants_hold() {
        let ps: Vec<Pattern> = ["(a|b)*a(a|b){3}", "abc|abd", "x+y*", "[0-9]{2,4}"]
            .iter()
            .enumerate()
            .rev()
            .map(|(i, t)| Pattern::regex(i as u32, *t))
            .collect();
        let rows = per_pattern_experiment(&ps, &cfg());
        assert_eq!(rows.iter().map(|r| r.key).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        for r in &rows {
            assert_eq!(r.status, RowStatus::Ok, "{r:?}");
            let [n, o, d, m] = counts(r).map(|c| c.count().unwrap());
            assert!(o <= n && m <= d && m >= 1);
        }
        assert_eq!(rows[0].mdfa_states, Cell::Count(16));
    }

    #[test]
    fn cap_exceeded_is_recorded() {
        let mut c = cfg();
        c.cap = 8;
        let rows = per_pattern_experiment(&[Pattern::regex(0, "(a|b)*a(a|b){5}")], &c);
        assert_eq!(rows[0].status, RowStatus::CapExceeded);
        assert_eq!(rows[0].mdfa_states, Cell::CapExceeded);
        assert!(render_csv(&rows, false).contains(",CAP_EXCEEDED,"));
    }

    #[test]
    fn bad_pattern_is_an_error_row() {
        let rows = per_pattern_experiment(&[Pattern::regex(0, "(a")], &cfg());
        assert!(matches!(rows[0].status, RowStatus::Error(_)));
        assert!(render_csv(&rows, false).lines().nth(1).unwrap().ends_with(",error"));
    }

    #[test]
    fn repeated_literal_merge_is_constant() {
        let ps: Vec<Pattern> = (0..4).map(|i| Pattern::regex(i, "abc")).collect();
        let rows = incremental_merge_experiment(&ps, &cfg()).unwrap();
        let m: Vec<Cell> = rows.iter().map(|r| r.mdfa_states).collect();
        assert_eq!(m, vec![Cell::Count(4); 4]);
        assert!(incremental_merge_experiment(&ps[..1], &cfg()).is_err());
    }

    #[test]
    fn synthetic_growth_classes() {
        let th = GrowthThresholds::default();
        let x: Vec<f64> = (1..=8).map(f64::from).collect();
        let lin: Vec<f64> = x.clone();
        let cube: Vec<f64> = x.iter().map(|v| v.powi(3)).collect();
        let exp: Vec<f64> = x.iter().map(|v| 2f64.powf(*v)).collect();
        assert_eq!(classify_growth(&x, &lin, None, &th).unwrap().class, GrowthClass::Linear);
        assert_eq!(classify_growth(&x, &cube, None, &th).unwrap().class, GrowthClass::Polynomial);
        assert_eq!(classify_growth(&x, &exp, None, &th).unwrap().class, GrowthClass::Exponential);
        assert_eq!(classify_growth(&x, &lin, Some(&lin), &th).unwrap().class, GrowthClass::Equal);
        let fit = classify_growth(&x, &lin, None, &th).unwrap();
        assert!((fit.log_log.slope - 1.0).abs() < 1e-12 && (fit.log_log.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn growth_preconditions() {
        let th = GrowthThresholds::default();
        assert!(matches!(
            classify_growth(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], None, &th),
            Err(Error::TooFewPoints { needed: 4, got: 3 })
        ));
        assert!(classify_growth(&[1.0, 2.0, 2.0, 3.0], &[1.0; 4], None, &th).is_err());
    }

    #[test]
    fn report_files_are_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let ps: Vec<Pattern> = ["ab", "a(b|c)*d", "xyz"]
            .iter()
            .enumerate()
            .map(|(i, t)| Pattern::regex(i as u32, *t))
            .collect();
        let c = cfg();
        let csv = dir.path().join("rows.csv");
        let paths = emit_report(&per_pattern_experiment(&ps, &c), "per_pattern", &c, &csv).unwrap();
        let first: Vec<String> = [&paths.csv, &paths.plot, &paths.manifest]
            .iter()
            .map(|p| std::fs::read_to_string(p).unwrap())
            .collect();
        assert_eq!(first[0].lines().count(), 4);
        emit_report(&per_pattern_experiment(&ps, &c), "per_pattern", &c, &csv).unwrap();
        let second: Vec<String> = [&paths.csv, &paths.plot, &paths.manifest]
            .iter()
            .map(|p| std::fs::read_to_string(p).unwrap())
            .collect();
        assert_eq!(first, second);
        assert!(first[2].contains("\"seed\": 42"));
    }
}
