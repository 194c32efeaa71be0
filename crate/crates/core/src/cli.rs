//! Command-line front end. Every command is one library call plus I/O.
//!
//! Exit codes: 0 success, 1 domain error (including "not equivalent"),
//! 2 usage error. Diagnostics go to stderr; data goes to `--out` or stdout.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::automaton::{Automaton, StartKind};
use crate::error::{Error, Result};
use crate::experiment::{
    emit_report, incremental_merge_experiment, per_pattern_experiment, ExperimentConfig, GrowthThresholds,
};
use crate::generators::{
    gen_dotstar, gen_mesh_patterns, gen_random_regexes, MeshKind, Pattern, PatternSource, RandomRecipe,
    SplitMix64,
};
use crate::io::{
    automaton_to_json, load_automaton, load_patterns, save_automaton, save_patterns, write_atomic,
    PatternSetDocument,
};
use crate::regex::compile_regex;
use crate::simulate::{active_rule_frequency, run as simulate};
use crate::transform::{
    connected_components, determinize_with, equivalent_with, merge_patterns, minimize, optimize_nfa,
    DeterminizeOptions, Minimizer, DEFAULT_STATE_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StartArg {
    StartOfData,
    AllInput,
}

impl From<StartArg> for StartKind {
    fn from(s: StartArg) -> Self {
        match s {
            StartArg::StartOfData => StartKind::StartOfData,
            StartArg::AllInput => StartKind::AllInput,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MinimizerArg {
    Brzozowski,
    Hopcroft,
}

impl From<MinimizerArg> for Minimizer {
    fn from(m: MinimizerArg) -> Self {
        match m {
            MinimizerArg::Brzozowski => Minimizer::Brzozowski,
            MinimizerArg::Hopcroft => Minimizer::Hopcroft,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Dotstar,
    Hamming,
    Levenshtein,
    RandomRegex,
    RandomAutomaton,
}

#[derive(Parser, Debug)]
#[command(name = "statecount", version, about = "NFA/DFA state-count workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct OutArg {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CapArg {
    /// Determinization state cap.
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    cap: usize,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct InputArg {
    /// Input bytes from a file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Input bytes given inline.
    #[arg(long)]
    text: Option<String>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Pattern set document.
    patterns: PathBuf,
    #[arg(long)]
    seed: u64,
    /// Overrides the document's start kind.
    #[arg(long, value_enum)]
    start_kind: Option<StartArg>,
    #[command(flatten)]
    cap: CapArg,
    /// CSV path; plot data and manifest are written next to it.
    #[arg(long)]
    out: PathBuf,
    /// Record stage times instead of NA.
    #[arg(long)]
    timings: bool,
    #[arg(long, default_value_t = 0.25)]
    spot_check_rate: f64,
    #[arg(long, default_value_t = 1.2)]
    polynomial_slope: f64,
    #[arg(long, default_value_t = 0.05)]
    r2_margin: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a regex, or a pattern set merged under one start.
    Compile {
        #[arg(long, conflicts_with = "patterns", required_unless_present = "patterns")]
        regex: Option<String>,
        #[arg(long)]
        patterns: Option<PathBuf>,
        #[arg(long, value_enum, required_unless_present = "patterns")]
        start_kind: Option<StartArg>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Generate a seeded pattern set document.
    Generate {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum)]
        start_kind: StartArg,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        alphabet: usize,
        #[arg(long, default_value_t = 4)]
        min_len: usize,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        /// Mesh distances to draw from.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        distance: Vec<u32>,
        #[arg(long, default_value_t = 2)]
        prefix_len: usize,
        #[arg(long, default_value_t = 2)]
        suffix_len: usize,
        #[arg(long, default_value_t = 4)]
        depth: u32,
        #[arg(long, default_value_t = 12)]
        states: usize,
        #[arg(long, default_value_t = 1.25)]
        density: f64,
        #[arg(long, default_value_t = 0.5)]
        accept_density: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Merge states with identical outgoing behavior.
    Optimize {
        input: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Subset construction to a partial DFA.
    Determinize {
        input: PathBuf,
        #[command(flatten)]
        cap: CapArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Minimal DFA.
    Minimize {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "brzozowski")]
        minimizer: MinimizerArg,
        #[command(flatten)]
        cap: CapArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Split into connected components, one document each.
    Components {
        input: PathBuf,
        /// Output directory; a JSON array on stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Union of automata under a shared StartOfData state.
    Merge {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Exit 0 and print "equivalent" when the languages are equal.
    Equivalent {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Per-cycle trace: cycle, active count, reports.
    Simulate {
        automaton: PathBuf,
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Active-rule counts over rules given as separate documents.
    ActiveRules {
        #[arg(required = true)]
        rules: Vec<PathBuf>,
        /// Split each document into its connected components.
        #[arg(long)]
        split: bool,
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// One report row per pattern.
    ReportPerPattern(ReportArgs),
    /// One report row per prefix of the pattern list, merged.
    ReportMerge(ReportArgs),
    /// State, transition, fan-out and start/accept counts as JSON.
    Stats {
        input: PathBuf,
    },
}

fn emit(out: &OutArg, text: &str) -> Result<()> {
    match &out.out {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn emit_automaton(out: &OutArg, a: &Automaton) -> Result<()> {
    match &out.out {
        Some(p) => save_automaton(a, p),
        None => emit(out, &automaton_to_json(a)),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

fn read_input(input: &InputArg) -> Result<Vec<u8>> {
    match (&input.input, &input.text) {
        (Some(p), _) => std::fs::read(p).map_err(|e| Error::io(p, e)),
        (None, Some(t)) => Ok(t.clone().into_bytes()),
        (None, None) => unreachable!("clap enforces one input source"),
    }
}

fn generate(kind: GenKind, seed: u64, args: &GenerateParams) -> Result<Vec<Pattern>> {
    match kind {
        GenKind::Dotstar => gen_dotstar(args.count, args.prefix_len, args.suffix_len, args.alphabet, seed),
        GenKind::Hamming | GenKind::Levenshtein => {
            let mesh = if kind == GenKind::Hamming { MeshKind::Hamming } else { MeshKind::Levenshtein };
            gen_mesh_patterns(mesh, args.count, args.min_len, args.max_len, &args.distance, seed)
        }
        GenKind::RandomRegex => {
            if args.alphabet == 0 || args.alphabet > 256 {
                return Err(Error::InvalidArgument("alphabet must lie in 1..=256".into()));
            }
            Ok(gen_random_regexes(args.count, args.depth, args.alphabet, seed))
        }
        GenKind::RandomAutomaton => {
            let mut rng = SplitMix64::new(seed);
            Ok((0..args.count)
                .map(|i| Pattern {
                    id: i as u32,
                    source: PatternSource::Random(RandomRecipe {
                        states: args.states,
                        density: args.density,
                        accept_density: args.accept_density,
                        alphabet_size: args.alphabet,
                        seed: rng.next_u64(),
                    }),
                })
                .collect())
        }
    }
}

struct GenerateParams {
    count: usize,
    alphabet: usize,
    min_len: usize,
    max_len: usize,
    distance: Vec<u32>,
    prefix_len: usize,
    suffix_len: usize,
    depth: u32,
    states: usize,
    density: f64,
    accept_density: f64,
}

fn report(args: &ReportArgs, merge: bool) -> Result<()> {
    let doc = load_patterns(&args.patterns)?;
    let start = args.start_kind.map_or(doc.start_kind, StartKind::from);
    let mut cfg = ExperimentConfig::new(start, args.seed);
    cfg.cap = args.cap.cap;
    cfg.timings = args.timings;
    if !(0.0..=1.0).contains(&args.spot_check_rate) {
        return Err(Error::InvalidArgument("spot-check rate must lie in [0, 1]".into()));
    }
    cfg.spot_check_rate = args.spot_check_rate;
    cfg.thresholds = GrowthThresholds {
        polynomial_slope: args.polynomial_slope,
        r2_margin: args.r2_margin,
        ..GrowthThresholds::default()
    };
    let (rows, name) = if merge {
        (incremental_merge_experiment(&doc.patterns, &cfg)?, "incremental_merge")
    } else {
        (per_pattern_experiment(&doc.patterns, &cfg), "per_pattern")
    };
    let paths = emit_report(&rows, name, &cfg, &args.out)?;
    for r in &rows {
        if let crate::experiment::RowStatus::Error(m) = &r.status {
            eprintln!("row {}: {m}", r.key);
        }
    }
    eprintln!("wrote {} rows to {}", rows.len(), paths.csv.display());
    Ok(())
}

fn load_all(paths: &[PathBuf]) -> Result<Vec<Automaton>> {
    paths.iter().map(|p| load_automaton(p)).collect()
}

fn execute(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Compile { regex, patterns, start_kind, out } => {
            let a = match (regex, patterns) {
                (Some(r), _) => compile_regex(&r, start_kind.expect("clap requires a start kind").into())?,
                (None, Some(p)) => {
                    let doc = load_patterns(&p)?;
                    let start = start_kind.map_or(doc.start_kind, StartKind::from);
                    let parts: Vec<Automaton> =
                        doc.patterns.iter().map(|p| p.compile(start)).collect::<Result<_>>()?;
                    merge_patterns(&parts)
                }
                (None, None) => unreachable!("clap requires a source"),
            };
            emit_automaton(&out, &a)?;
        }
        Command::Generate {
            kind,
            seed,
            start_kind,
            count,
            alphabet,
            min_len,
            max_len,
            distance,
            prefix_len,
            suffix_len,
            depth,
            states,
            density,
            accept_density,
            out,
        } => {
            let params = GenerateParams {
                count,
                alphabet,
                min_len,
                max_len,
                distance,
                prefix_len,
                suffix_len,
                depth,
                states,
                density,
                accept_density,
            };
            let doc = PatternSetDocument::new(start_kind.into(), Some(seed), generate(kind, seed, &params)?);
            match &out.out {
                Some(p) => save_patterns(&doc, p)?,
                None => emit(&out, &crate::io::patterns_to_json(&doc))?,
            }
        }
        Command::Optimize { input, out } => {
            emit_automaton(&out, &optimize_nfa(&load_automaton(&input)?))?;
        }
        Command::Determinize { input, cap, out } => {
            let d = determinize_with(&load_automaton(&input)?, DeterminizeOptions { cap: cap.cap })?;
            emit_automaton(&out, &d.dfa)?;
        }
        Command::Minimize { input, minimizer, cap, out } => {
            let m = minimize(&load_automaton(&input)?, minimizer.into(), DeterminizeOptions { cap: cap.cap })?;
            emit_automaton(&out, &m)?;
        }
        Command::Components { input, out } => {
            let comps = connected_components(&load_automaton(&input)?);
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                    for (i, c) in comps.iter().enumerate() {
                        save_automaton(c, &dir.join(format!("component-{i:04}.json")))?;
                    }
                    eprintln!("wrote {} components to {}", comps.len(), dir.display());
                }
                None => {
                    let values: Vec<serde_json::Value> = comps
                        .iter()
                        .map(|c| serde_json::from_str(&automaton_to_json(c)).expect("round-trips"))
                        .collect();
                    emit(&OutArg { out: None }, &json(&values))?;
                }
            }
        }
        Command::Merge { inputs, out } => {
            emit_automaton(&out, &merge_patterns(&load_all(&inputs)?))?;
        }
        Command::Equivalent { a, b, cap } => {
            let same = equivalent_with(&load_automaton(&a)?, &load_automaton(&b)?, DeterminizeOptions { cap: cap.cap })?;
            emit(&OutArg { out: None }, if same { "equivalent\n" } else { "not equivalent\n" })?;
            return Ok(if same { 0 } else { 1 });
        }
        Command::Simulate { automaton, input, out } => {
            let a = load_automaton(&automaton)?;
            emit(&out, &simulate(&a, &read_input(&input)?).to_lines())?;
        }
        Command::ActiveRules { rules, split, input, out } => {
            let mut components = load_all(&rules)?;
            if split {
                components = components.iter().flat_map(connected_components).collect();
            }
            let stats = active_rule_frequency(&components, &read_input(&input)?);
            emit(&out, &json(&stats))?;
        }
        Command::ReportPerPattern(args) => report(&args, false)?,
        Command::ReportMerge(args) => report(&args, true)?,
        Command::Stats { input } => {
            let a = load_automaton(&input)?;
            emit(&OutArg { out: None }, &json(&a.stats()))?;
        }
    }
    Ok(0)
}

/// Parses `argv` and runs the command, returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
