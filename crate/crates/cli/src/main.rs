//! `insuperable` command-line tool.
//!
//! Exit codes: 0 success, 2 input error, 3 domain or cap error, 4 failed
//! property check.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use insuperable::catalog::{catalog, CatalogParams};
use insuperable::game::GameFile;
use insuperable::market::{analyze_market, OnePeriodMarket};
use insuperable::moran::{
    critical_sizes, fixation_probabilities, weak_selection_scan_with, CriticalSizes, FixationVector,
    SelectionIntensity, TwoByTwoPayoff, WeakSelectionScan,
};
use insuperable::multiplayer::{
    is_reducible, n_catalog, n_player_classify, normalize_extremes, propagation_check, NPlayerReport,
    NPlayerTwoStrategyGame, PropagationReport,
};
use insuperable::nash::{nash_vs_insuperable, ComparisonReport};
use insuperable::sim::{
    moran_monte_carlo, ultimatum_tournament, RoleMode, StopReason, ThresholdRange, UltimatumConfig,
};
use insuperable::{BimatrixGame, Error, Matrix, Rational};

use output::Sink;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Domain(String),
    Check(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Check(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Domain(m) | CliError::Check(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Dimension(_) | Error::UnknownCatalog(_) => CliError::Input(e.to_string()),
            Error::Domain(_) | Error::Cap { .. } | Error::InvalidParameter(_) => CliError::Domain(e.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "insuperable",
    version,
    about = "Insuperable strategies, Nash equilibria, Moran fixation and related analyses"
)]
struct Cli {
    /// Output directory for report files and the run manifest (default:
    /// $INSUPERABLE_OUT_DIR).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Insuperability classification, Nash equilibria and their comparison.
    Analyze(AnalyzeArgs),
    /// Fixation probabilities, weak-selection scans and critical sizes.
    Moran(MoranArgs),
    /// Two-strategy N-player games and their reduction.
    Nplayer(NPlayerArgs),
    /// State prices, arbitrage and the trivial-outcome theorem.
    Market(MarketArgs),
    /// Seeded simulations.
    #[command(subcommand)]
    Simulate(SimulateCommand),
}

#[derive(Args, Clone, Default)]
struct CatalogArgs {
    /// Named catalog entry.
    #[arg(long)]
    catalog: Option<String>,
    #[arg(long = "G")]
    g: Option<Rational>,
    #[arg(long = "C")]
    c_cost: Option<Rational>,
    #[arg(long = "M")]
    m: Option<Rational>,
    #[arg(long)]
    a: Option<Rational>,
    #[arg(long)]
    b: Option<Rational>,
    #[arg(long)]
    c: Option<Rational>,
    #[arg(long)]
    d: Option<Rational>,
}

impl CatalogArgs {
    fn params(&self) -> CatalogParams {
        let mut p = CatalogParams::new();
        for (k, v) in [
            ("G", &self.g),
            ("C", &self.c_cost),
            ("M", &self.m),
            ("a", &self.a),
            ("b", &self.b),
            ("c", &self.c),
            ("d", &self.d),
        ] {
            if let Some(v) = v {
                p.insert(k.to_string(), v.clone());
            }
        }
        p
    }

    fn game(&self, sink: &mut Sink) -> CliResult<Option<BimatrixGame>> {
        let Some(name) = &self.catalog else { return Ok(None) };
        let params = self.params();
        sink.param("catalog", name);
        sink.param("catalog_params", &params);
        Ok(Some(catalog(name, &params)?))
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Game JSON file `{"A": [[...]], "B": [[...]]}`.
    #[arg(long, conflicts_with = "catalog")]
    game: Option<PathBuf>,
    #[command(flatten)]
    catalog: CatalogArgs,
}

#[derive(Args)]
struct MoranArgs {
    /// Symmetric 2x2 payoffs `a,b,c,d`.
    #[arg(long, conflicts_with = "catalog")]
    payoff: Option<String>,
    #[command(flatten)]
    catalog: CatalogArgs,
    /// Population size for the fixation vector.
    #[arg(long = "N")]
    n: Option<usize>,
    /// Use weak-selection payoffs `1 + w·payoff`.
    #[arg(long)]
    weak: bool,
    /// Selection intensity: `per-population` (w = 1/N) or a fixed rational w.
    #[arg(long, default_value = "per-population")]
    intensity: String,
    /// Single-mutant scan over N = 2..=Nmax.
    #[arg(long)]
    scan: bool,
    #[arg(long = "Nmax", default_value_t = 30)]
    n_max: usize,
    /// Critical population sizes.
    #[arg(long)]
    critical: bool,
}

#[derive(Args)]
struct NPlayerArgs {
    /// N-player game JSON file `{"N": .., "a": [...], "b": [...]}`.
    #[arg(long, conflicts_with = "catalog")]
    file: Option<PathBuf>,
    /// pgg, zerinho_original, zerinho_modified or zerinho_n.
    #[arg(long)]
    catalog: Option<String>,
    #[arg(long)]
    r: Option<Rational>,
    #[arg(long = "N")]
    n: Option<Rational>,
    #[arg(long)]
    alpha: Option<Rational>,
    /// Replace a[N-1] and b[0] by affine extrapolation first.
    #[arg(long)]
    normalize: bool,
    /// Include the reduced two-player game.
    #[arg(long)]
    reduce: bool,
    /// Analyze the reduced two-player game.
    #[arg(long)]
    analyze: bool,
}

#[derive(Args)]
struct MarketArgs {
    /// Market JSON file `{"D": [[...]], "p": [...]}`.
    #[arg(long, conflicts_with_all = ["d", "p"])]
    file: Option<PathBuf>,
    /// Cash-flow matrix as JSON.
    #[arg(long = "D", requires = "p")]
    d: Option<String>,
    /// Price vector as JSON.
    #[arg(long, requires = "d")]
    p: Option<String>,
    /// Exit with 4 when the theorem verdict disagrees with the arbitrage search.
    #[arg(long)]
    check_theorem: bool,
}

#[derive(Subcommand)]
enum SimulateCommand {
    /// Ultimatum tournament.
    Ultimatum(UltimatumArgs),
    /// Monte-Carlo Moran fixation.
    MoranMc(MoranMcArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum RoleArg {
    Single,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThresholdArg {
    Full,
    Interior,
}

#[derive(Args)]
struct UltimatumArgs {
    #[arg(long = "M")]
    m: usize,
    #[arg(long, default_value_t = 5)]
    copies: usize,
    /// Step budget; accepts forms like `2e6`.
    #[arg(long, default_value = "1e6", value_parser = parse_count)]
    steps: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 0, value_parser = parse_count)]
    snapshot_every: u64,
    #[arg(long, value_enum, default_value = "single")]
    role_mode: RoleArg,
    #[arg(long, value_enum, default_value = "full")]
    thresholds: ThresholdArg,
    /// Exit with 4 unless every survivor satisfies m <= M/2 <= m'.
    #[arg(long)]
    check_survivors: bool,
}

#[derive(Args)]
struct MoranMcArgs {
    #[arg(long, conflicts_with = "catalog")]
    payoff: Option<String>,
    #[command(flatten)]
    catalog: CatalogArgs,
    #[arg(long = "N")]
    n: usize,
    #[arg(long)]
    i0: usize,
    #[arg(long, default_value = "1e5", value_parser = parse_count)]
    reps: u64,
    #[arg(long)]
    seed: u64,
}

fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 => Ok(v as u64),
        _ => Err(format!("expected a nonnegative integer, got {s:?}")),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text, &path.display().to_string())
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, origin: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("{origin}: {e}")))
}

fn parse_payoff(s: &str) -> CliResult<TwoByTwoPayoff> {
    let v: Vec<Rational> = s
        .split(',')
        .map(|t| t.trim().parse::<Rational>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Input(format!("--payoff: {e}")))?;
    match <[Rational; 4]>::try_from(v) {
        Ok([a, b, c, d]) => Ok(TwoByTwoPayoff::new(a, b, c, d)),
        Err(v) => Err(CliError::Input(format!("--payoff needs four entries a,b,c,d, got {}", v.len()))),
    }
}

fn payoff_source(payoff: &Option<String>, cat: &CatalogArgs, sink: &mut Sink) -> CliResult<TwoByTwoPayoff> {
    if let Some(s) = payoff {
        sink.param("payoff", s);
        return parse_payoff(s);
    }
    match cat.game(sink)? {
        Some(g) => Ok(TwoByTwoPayoff::from_game(&g)?),
        None => Err(CliError::Input("give --payoff or --catalog".into())),
    }
}

#[derive(Serialize)]
struct AnalyzeReport {
    game: GameFile,
    #[serde(flatten)]
    comparison: ComparisonReport,
}

fn cmd_analyze(args: &AnalyzeArgs, mut sink: Sink) -> CliResult {
    let game = match (&args.game, args.catalog.game(&mut sink)?) {
        (Some(path), _) => {
            sink.input(path);
            let file: GameFile = read_json(path)?;
            BimatrixGame::try_from(file)?
        }
        (None, Some(g)) => g,
        (None, None) => return Err(CliError::Input("give --game FILE or --catalog NAME".into())),
    };
    let comparison = nash_vs_insuperable(&game)?;
    sink.finish("report.json", &AnalyzeReport { game: GameFile::from(&game), comparison })
}

#[derive(Serialize)]
struct MoranReport {
    payoff: TwoByTwoPayoff,
    #[serde(skip_serializing_if = "Option::is_none")]
    intensity: Option<SelectionIntensity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fixation: Option<FixationVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scan: Option<WeakSelectionScan>,
    #[serde(skip_serializing_if = "Option::is_none")]
    critical: Option<CriticalSizes>,
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(&r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

fn cmd_moran(args: &MoranArgs, mut sink: Sink) -> CliResult {
    let payoff = payoff_source(&args.payoff, &args.catalog, &mut sink)?;
    let intensity = match args.intensity.as_str() {
        "per-population" | "1/N" => SelectionIntensity::PerPopulation,
        w => SelectionIntensity::Fixed(w.parse().map_err(|e| CliError::Input(format!("--intensity: {e}")))?),
    };
    if !(args.scan || args.critical || args.n.is_some()) {
        return Err(CliError::Input("nothing to compute: give --N, --scan or --critical".into()));
    }
    sink.param("weak", args.weak);
    sink.param("intensity", &intensity);
    let mut report =
        MoranReport { payoff: payoff.clone(), intensity: None, fixation: None, scan: None, critical: None };
    if let Some(n) = args.n {
        sink.param("N", n);
        let p = if args.weak { payoff.with_intensity(&intensity.at(n)) } else { payoff.clone() };
        let f = fixation_probabilities(&p, n)?;
        let rows = f.f.iter().enumerate().map(|(i, v)| vec![i.to_string(), v.to_string(), v.to_f64().to_string()]);
        sink.file("fixation.csv", &csv_text(&["i", "F", "F_decimal"], rows))?;
        report.fixation = Some(f);
    }
    if args.scan {
        sink.param("Nmax", args.n_max);
        let scan = weak_selection_scan_with(&payoff, args.n_max, &intensity)?;
        let rows = scan.rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                r.f1.as_ref().map(ToString::to_string).unwrap_or_default(),
                r.neutral.to_string(),
                r.delta_sign.map(|s| s.to_string()).unwrap_or_default(),
            ]
        });
        sink.file("scan.csv", &csv_text(&["N", "F1", "neutral", "delta_sign"], rows))?;
        report.scan = Some(scan);
    }
    if args.weak || args.scan {
        report.intensity = Some(intensity);
    }
    if args.critical {
        report.critical = Some(critical_sizes(&payoff)?);
    }
    sink.finish("report.json", &report)
}

#[derive(Serialize)]
struct Reduction {
    reducible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Matrix>,
}

#[derive(Serialize)]
struct NPlayerOutput {
    game: NPlayerTwoStrategyGame,
    classification: NPlayerReport,
    reduction: Reduction,
    #[serde(skip_serializing_if = "Option::is_none")]
    two_player_analysis: Option<ComparisonReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    propagation: Option<PropagationReport>,
}

fn cmd_nplayer(args: &NPlayerArgs, mut sink: Sink) -> CliResult {
    let mut game = match (&args.file, &args.catalog) {
        (Some(path), _) => {
            sink.input(path);
            read_json::<NPlayerTwoStrategyGame>(path)?
        }
        (None, Some(name)) => {
            let mut params = CatalogParams::new();
            for (k, v) in [("r", &args.r), ("N", &args.n), ("alpha", &args.alpha)] {
                if let Some(v) = v {
                    params.insert(k.to_string(), v.clone());
                }
            }
            sink.param("catalog", name);
            sink.param("catalog_params", &params);
            n_catalog(name, &params)?
        }
        (None, None) => return Err(CliError::Input("give --file FILE or --catalog NAME".into())),
    };
    sink.param("normalize", args.normalize);
    if args.normalize {
        game = normalize_extremes(&game)?;
    }
    let red = is_reducible(&game);
    let two_player_analysis = match (&red.two_player, args.analyze) {
        (Some(two), true) => Some(nash_vs_insuperable(two)?),
        _ => None,
    };
    let out = NPlayerOutput {
        classification: n_player_classify(&game),
        reduction: Reduction {
            reducible: red.reducible,
            matrix: red.two_player.filter(|_| args.reduce || args.analyze).map(|g| g.a().clone()),
        },
        two_player_analysis,
        propagation: (game.players() == 3).then(|| propagation_check(&game)),
        game,
    };
    sink.finish("report.json", &out)
}

fn cmd_market(args: &MarketArgs, mut sink: Sink) -> CliResult {
    let mkt: OnePeriodMarket = match (&args.file, &args.d, &args.p) {
        (Some(path), _, _) => {
            sink.input(path);
            read_json(path)?
        }
        (None, Some(d), Some(p)) => {
            sink.param("D", d);
            sink.param("p", p);
            let d: Vec<Vec<Rational>> = parse_json(d, "--D")?;
            let p: Vec<Rational> = parse_json(p, "--p")?;
            OnePeriodMarket::new(Matrix::from_rows(d)?, p)?
        }
        _ => return Err(CliError::Input("give --file FILE or --D and --p".into())),
    };
    let analysis = analyze_market(&mkt);
    let agrees = analysis.theorem_agrees;
    #[derive(Serialize)]
    struct Out<'a> {
        market: &'a OnePeriodMarket,
        #[serde(flatten)]
        analysis: insuperable::market::MarketAnalysis,
    }
    sink.finish("report.json", &Out { market: &mkt, analysis })?;
    if args.check_theorem && !agrees {
        return Err(CliError::Check("theorem verdict disagrees with the arbitrage search".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct UltimatumSummary {
    config: UltimatumConfig,
    population: usize,
    steps_run: u64,
    stop_reason: StopReason,
    survivors: Vec<(usize, usize)>,
    survivors_within_bounds: bool,
}

fn cmd_simulate(cmd: &SimulateCommand, out: Option<PathBuf>) -> CliResult {
    match cmd {
        SimulateCommand::Ultimatum(a) => {
            let mut sink = Sink::new(out, "simulate ultimatum");
            let mut cfg = UltimatumConfig::new(a.m, a.copies, a.steps, a.seed);
            cfg.snapshot_every = a.snapshot_every;
            cfg.role_mode = match a.role_mode {
                RoleArg::Single => RoleMode::SingleRole,
                RoleArg::Both => RoleMode::BothRoles,
            };
            cfg.thresholds = match a.thresholds {
                ThresholdArg::Full => ThresholdRange::Full,
                ThresholdArg::Interior => ThresholdRange::Interior,
            };
            sink.param("config", &cfg);
            sink.seed(a.seed);
            let trace = ultimatum_tournament(&cfg)?;
            sink.file("trace.csv", &trace.to_csv())?;
            let ok = trace.survivors_within_bounds();
            let summary = UltimatumSummary {
                population: cfg.population(),
                steps_run: trace.steps_run,
                stop_reason: trace.stop_reason,
                survivors: trace.survivors(),
                survivors_within_bounds: ok,
                config: cfg,
            };
            sink.finish("summary.json", &summary)?;
            if a.check_survivors && !ok {
                return Err(CliError::Check("a survivor violates m <= M/2 <= m'".into()));
            }
            Ok(())
        }
        SimulateCommand::MoranMc(a) => {
            let mut sink = Sink::new(out, "simulate moran-mc");
            let payoff = payoff_source(&a.payoff, &a.catalog, &mut sink)?;
            sink.param("N", a.n);
            sink.param("i0", a.i0);
            sink.param("reps", a.reps);
            sink.seed(a.seed);
            let est = moran_monte_carlo(&payoff, a.n, a.i0, a.reps, a.seed)?;
            sink.finish("estimate.json", &est)
        }
    }
}

fn run(cli: Cli) -> CliResult {
    match &cli.command {
        Command::Analyze(a) => cmd_analyze(a, Sink::new(cli.out.clone(), "analyze")),
        Command::Moran(a) => cmd_moran(a, Sink::new(cli.out.clone(), "moran")),
        Command::Nplayer(a) => cmd_nplayer(a, Sink::new(cli.out.clone(), "nplayer")),
        Command::Market(a) => cmd_market(a, Sink::new(cli.out.clone(), "market")),
        Command::Simulate(s) => cmd_simulate(s, cli.out.clone()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
