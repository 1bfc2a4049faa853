use std::fs;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use factorcrit::extremal::{thresholds_with_tolerance, HPrimeBound, CONSISTENCY_TOL};
use factorcrit::verifier::{
    check_hypotheses, sharpness_report, CorpusSource, VerifyError, THRESHOLD_SLACK,
};
use factorcrit::{
    build_h, emit_graph6_string, generate_corpus, is_kfc_matching, is_kfc_tutte, parse_graph6, q,
    rho, verify_lemma_grid, verify_theorem, BoundMode, CorpusFilter, CorpusSpec, ExtremalParams,
    Graph, Lemma, LemmaGridConfig, ParamError, ThresholdError, TutteOptions, VerifyOptions, Which,
};

const EXIT_FOUND: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;

const PARAM_HINT: &str = "H(n,delta,k) needs 0 <= k < delta and n >= 2*delta - k + 2";

#[derive(Parser)]
#[command(name = "factorcrit", version, about = "Spectral thresholds and k-factor-criticality of graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report order, size, minimum degree, ρ, q and connectivity of graph6 input.
    Analyze(AnalyzeArgs),
    /// Compute ρ(H(n,δ,k)) and q(H(n,δ,k)) three ways and cross-check them.
    Threshold(ThresholdArgs),
    /// Print H(n,δ,k) = K_δ ∨ ((δ−k+1)K_1 ∪ K_{n−2δ+k−1}) as graph6.
    Extremal(ParamArgs),
    /// Search for counterexamples or check lemma inequalities.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Record,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// graph6 file, one graph per line; reads stdin when absent or `-`.
    input: Option<PathBuf>,
    /// Also decide k-factor-criticality with both deciders.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
    /// Largest |S| tried by the odd-component decider (default n−2).
    #[arg(long)]
    max_s: Option<usize>,
    /// Subsets the odd-component decider may inspect per graph.
    #[arg(long, default_value_t = factorcrit::criticality::DEFAULT_SUBSET_BUDGET)]
    budget: u64,
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    n: usize,
    delta: usize,
    k: usize,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Only print this threshold's three values.
    which: Option<Which>,
    /// Largest allowed disagreement between the three routes.
    #[arg(long, default_value_t = CONSISTENCY_TOL)]
    tolerance: f64,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CorpusKind {
    Random,
    Exhaustive,
    Perturbed,
    Graph6,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundArg {
    Comparison,
    CaseAnalysis,
}

#[derive(Args)]
#[command(group(ArgGroup::new("task").required(true).args(["lemma", "theorem", "sharpness"])))]
struct VerifyArgs {
    /// Lemma grid to check: h1, h2, h3, sp, ge or inequit.
    #[arg(long)]
    lemma: Option<Lemma>,
    /// Falsification search for the ρ or q theorem.
    #[arg(long)]
    theorem: Option<Which>,
    /// Check that H(n,δ,k) sits on both thresholds and fails through its out copy.
    #[arg(long)]
    sharpness: bool,

    /// Order of the graphs.
    #[arg(long)]
    n: Option<usize>,
    /// Minimum degree, or an inclusive range `a..b` for lemma grids.
    #[arg(long, value_parser = parse_range)]
    delta: Option<RangeInclusive<usize>>,
    /// Number of deleted vertices in the criticality condition.
    #[arg(long)]
    k: Option<usize>,

    #[arg(long, value_enum, default_value = "random")]
    corpus: CorpusKind,
    /// graph6 file for `--corpus graph6`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Graphs to draw for random and perturbed corpora.
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// Seed for corpus sampling and randomized lemma trials.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.3)]
    p_min: f64,
    #[arg(long, default_value_t = 0.95)]
    p_max: f64,
    /// Largest number of vertex pairs toggled in a perturbed graph.
    #[arg(long, default_value_t = 6)]
    max_flips: usize,
    /// Lower bound on n: strict, relaxed (k >= 1 only) or exploratory (none).
    #[arg(long, default_value = "strict")]
    mode: BoundMode,
    /// Worker threads for corpus classification (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,

    /// A graph is above the threshold when its value ≥ threshold − slack.
    #[arg(long, default_value_t = THRESHOLD_SLACK)]
    slack: f64,
    /// Largest allowed disagreement between the three threshold routes.
    #[arg(long, default_value_t = CONSISTENCY_TOL)]
    consistency_tol: f64,
    /// Required strict margin in the h1/h2/h3 inequalities.
    #[arg(long, default_value_t = LemmaGridConfig::default().margin)]
    margin: f64,
    /// Required strict increase in the sp/ge/inequit checks.
    #[arg(long, default_value_t = LemmaGridConfig::default().increase)]
    increase: f64,
    /// Randomized trials for sp, ge and inequit.
    #[arg(long, default_value_t = LemmaGridConfig::default().trials)]
    trials: usize,
    /// How far past the smallest admissible n the lemma grids go.
    #[arg(long, default_value_t = LemmaGridConfig::default().extra_n)]
    extra_n: usize,
    /// Order bound used by the h2 grid.
    #[arg(long, value_enum, default_value = "comparison")]
    h2_bound: BoundArg,
    /// Also run h1/h3 at k = 0, where the inequality is not claimed.
    #[arg(long)]
    include_k_zero: bool,
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = |_| format!("expected an integer or a range `a..b`, got `{s}`");
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b) = (a.parse().map_err(bad)?, b.parse().map_err(bad)?);
            if a > b {
                return Err(format!("empty range `{s}`"));
            }
            Ok(a..=b)
        }
        None => {
            let v = s.parse().map_err(bad)?;
            Ok(v..=v)
        }
    }
}

/// An error carrying the exit code it should produce.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Exit(EXIT_USAGE, msg.into()).into()
}

fn param_usage(e: ParamError) -> anyhow::Error {
    usage(format!("{e}\nhint: {PARAM_HINT}"))
}

fn threshold_failure(e: ThresholdError) -> anyhow::Error {
    match e {
        ThresholdError::Inconsistent { .. } => Exit(EXIT_INCONSISTENT, e.to_string()).into(),
        ThresholdError::Params(p) => param_usage(p),
        other => usage(other.to_string()),
    }
}

fn verify_failure(e: VerifyError) -> anyhow::Error {
    match e {
        VerifyError::Threshold(t) => threshold_failure(t),
        VerifyError::Criticality(c) => anyhow::Error::new(c),
        VerifyError::Params(p) => param_usage(p),
        other => usage(other.to_string()),
    }
}

fn params(p: ParamArgs) -> ExtremalParams {
    ExtremalParams::new(p.n, p.delta, p.k)
}

fn read_input(path: Option<&PathBuf>) -> Result<Box<dyn BufRead>> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            let file = fs::File::open(p).with_context(|| format!("cannot open {}", p.display()))?;
            Ok(Box::new(BufReader::new(file)))
        }
        _ => Ok(Box::new(BufReader::new(io::stdin()))),
    }
}

fn analyze(args: AnalyzeArgs, out: &mut impl Write) -> Result<()> {
    let reader = read_input(args.input.as_ref())?;
    let mut warnings = 0usize;
    let mut index = 0usize;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.context("reading input")?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let g = match parse_graph6(text.as_bytes()) {
            Ok(g) => g,
            Err(e) => {
                warnings += 1;
                eprintln!("error: line {}: {e}", lineno + 1);
                continue;
            }
        };
        index += 1;
        match analyze_graph(&g, &args) {
            Ok(fields) => write_record(out, args.format, index, text, &fields)?,
            Err(e) => {
                warnings += 1;
                eprintln!("error: line {}: {e}", lineno + 1);
            }
        }
    }
    if warnings > 0 {
        eprintln!("warning: {warnings} line(s) skipped");
    }
    Ok(())
}

fn analyze_graph(g: &Graph, args: &AnalyzeArgs) -> Result<Vec<(&'static str, String)>> {
    let mut fields = vec![
        ("order", g.order().to_string()),
        ("size", g.size().to_string()),
        ("min_degree", g.min_degree().to_string()),
        ("rho", format!("{:.12}", rho(g))),
        ("q", format!("{:.12}", q(g))),
        ("connected", g.is_connected().to_string()),
    ];
    if let Some(k) = args.k {
        let by_matching = is_kfc_matching(g, k)?;
        let opts = TutteOptions { max_s: args.max_s, budget: args.budget };
        let by_tutte = is_kfc_tutte(g, k, opts)?;
        fields.push(("k", k.to_string()));
        fields.push(("verdict_matching", by_matching.verdict.to_string()));
        fields.push(("verdict_tutte", by_tutte.verdict.to_string()));
        for (name, cert) in [("matching", &by_matching), ("tutte", &by_tutte)] {
            if let Some(w) = &cert.witness {
                let key = if name == "matching" { "witness_matching" } else { "witness_tutte" };
                fields.push((key, format!("{}:{}", w.kind(), w.set())));
            }
        }
    }
    Ok(fields)
}

fn write_record(
    out: &mut impl Write,
    format: Format,
    index: usize,
    graph6: &str,
    fields: &[(&str, String)],
) -> io::Result<()> {
    match format {
        Format::Record => {
            write!(out, "graph6={graph6}")?;
            for (key, value) in fields {
                write!(out, " {key}={value}")?;
            }
            writeln!(out)
        }
        Format::Plain => {
            writeln!(out, "graph {index}: {graph6}")?;
            for (key, value) in fields {
                writeln!(out, "  {key:<17}{value}")?;
            }
            Ok(())
        }
    }
}

fn threshold(args: ThresholdArgs, out: &mut impl Write) -> Result<()> {
    let p = params(args.params);
    let report = thresholds_with_tolerance(&p, args.tolerance).map_err(threshold_failure)?;
    let rows = [
        (Which::Rho, [report.rho_root, report.rho_quotient, report.rho_dense]),
        (Which::Q, [report.q_root, report.q_quotient, report.q_dense]),
    ];
    let rows = rows.iter().filter(|(w, _)| args.which.is_none_or(|only| only == *w));
    match args.format {
        Format::Record => {
            write!(out, "n={} delta={} k={}", p.n, p.delta, p.k)?;
            for (w, [root, quotient, dense]) in rows {
                write!(out, " {w}_root={root:.12} {w}_quotient={quotient:.12} {w}_dense={dense:.12}")?;
            }
            writeln!(out, " max_discrepancy={:.3e}", report.max_discrepancy)?;
        }
        Format::Plain => {
            writeln!(out, "H({},{},{})", p.n, p.delta, p.k)?;
            for (w, [root, quotient, dense]) in rows {
                writeln!(out, "  {w:<3} cubic root      {root:.12}")?;
                writeln!(out, "  {w:<3} quotient matrix {quotient:.12}")?;
                writeln!(out, "  {w:<3} dense matrix    {dense:.12}")?;
            }
            writeln!(out, "  max discrepancy     {:.3e}", report.max_discrepancy)?;
        }
    }
    Ok(())
}

fn extremal(args: ParamArgs, out: &mut impl Write) -> Result<()> {
    let h = build_h(&params(args)).map_err(param_usage)?;
    writeln!(out, "{}", emit_graph6_string(&h))?;
    Ok(())
}

fn theorem_params(args: &VerifyArgs) -> Result<ExtremalParams> {
    let (Some(n), Some(delta), Some(k)) = (args.n, args.delta.clone(), args.k) else {
        return Err(usage("--n, --delta and --k are required"));
    };
    if delta.start() != delta.end() {
        return Err(usage("--delta must be a single value here"));
    }
    Ok(ExtremalParams::new(n, *delta.start(), k))
}

fn corpus_spec(args: &VerifyArgs, p: &ExtremalParams) -> Result<CorpusSpec> {
    let source = match args.corpus {
        CorpusKind::Random => CorpusSource::Random {
            n: p.n,
            p_min: args.p_min,
            p_max: args.p_max,
            count: args.count,
            seed: args.seed,
        },
        CorpusKind::Exhaustive => CorpusSource::Exhaustive { n: p.n },
        CorpusKind::Perturbed => CorpusSource::Perturbed {
            base: build_h(p).map_err(param_usage)?,
            max_flips: args.max_flips,
            count: args.count,
            seed: args.seed,
        },
        CorpusKind::Graph6 => {
            let path = args.input.clone().ok_or_else(|| usage("--corpus graph6 needs --input"))?;
            if path.as_os_str() == "-" {
                let mut text = String::new();
                io::stdin().read_to_string(&mut text)?;
                CorpusSource::Graph6Text(text)
            } else {
                CorpusSource::Graph6File(path)
            }
        }
    };
    Ok(CorpusSpec { source, filter: CorpusFilter { min_degree: Some(p.delta), connected: None } })
}

fn verify(args: VerifyArgs, out: &mut impl Write) -> Result<bool> {
    if let Some(lemma) = args.lemma {
        let cfg = LemmaGridConfig {
            deltas: args.delta.clone().unwrap_or(LemmaGridConfig::default().deltas),
            extra_n: args.extra_n,
            hprime_bound: match args.h2_bound {
                BoundArg::Comparison => HPrimeBound::Comparison,
                BoundArg::CaseAnalysis => HPrimeBound::CaseAnalysis,
            },
            include_k_zero: args.include_k_zero,
            trials: args.trials,
            seed: args.seed,
            margin: args.margin,
            increase: args.increase,
            ..LemmaGridConfig::default()
        };
        let report = verify_lemma_grid(lemma, &cfg);
        writeln!(out, "{report}")?;
        return Ok(report.passed());
    }

    let p = theorem_params(&args)?;
    if args.sharpness {
        let r = sharpness_report(&p).map_err(verify_failure)?;
        let witness = r.witness.as_ref().map_or("none".to_string(), ToString::to_string);
        writeln!(out, "sharpness n={} delta={} k={}", p.n, p.delta, p.k)?;
        writeln!(out, "witness={witness}")?;
        writeln!(out, "odd_components={}", r.odd_components)?;
        writeln!(out, "rho_gap={:.3e}", r.rho_gap)?;
        writeln!(out, "q_gap={:.3e}", r.q_gap)?;
        writeln!(out, "status={}", if r.sharp { "pass" } else { "fail" })?;
        return Ok(r.sharp);
    }

    let which = args.theorem.expect("clap requires one task");
    check_hypotheses(&p, which, args.mode).map_err(verify_failure)?;
    let spec = corpus_spec(&args, &p)?;
    let opts = VerifyOptions { mode: args.mode, slack: args.slack, consistency_tol: args.consistency_tol };
    let run = || -> Result<_> {
        let corpus = generate_corpus(&spec).map_err(|e| usage(e.to_string()))?;
        verify_theorem(corpus, &p, which, &opts).map_err(verify_failure)
    };
    let report = match args.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .context("building thread pool")?
            .install(run)?,
        None => run()?,
    };
    writeln!(out, "{report}")?;
    Ok(report.passed())
}

fn run(cli: Cli) -> Result<bool> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Analyze(args) => analyze(args, &mut out).map(|()| true),
        Command::Threshold(args) => threshold(args, &mut out).map(|()| true),
        Command::Extremal(args) => extremal(args, &mut out).map(|()| true),
        Command::Verify(args) => verify(args, &mut out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FOUND),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Exit>() {
                Some(Exit(code, _)) => ExitCode::from(*code),
                None => ExitCode::from(EXIT_USAGE),
            }
        }
    }
}
