//! Command-line interface and result artifact writing.
//!
//! Subcommands: `run` (full assignment, emits `iterations.csv`, `flows.csv`
//! and, with cognition on, `library.json`), `validate` (network
//! diagnostics), `routes` (priced route set for one OD pair), `choice`
//! (Logit/Kirchhoff probabilities for a cost list) and `compare`
//! (cognition on vs. off, side by side).
//!
//! Exit codes: 0 on success, 1 on input errors, 2 on internal errors.
//! All output files are written to a temporary name and renamed into
//! place, so they are complete or absent, never partial.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::assignment::{
    compare_cognition, summarize, AssignmentError, Averaging, CognitionMode, DemandMode, RunResult,
    RunSummary, Simulation, SimulationConfig,
};
use crate::choice::{
    kirchhoff_as_logit, kirchhoff_probabilities, logit_probabilities, utilities, ChoiceModelKind,
};
use crate::cognition::FeatureLibrary;
use crate::cost::free_flow_edge_costs;
use crate::network::{load_network, validate_network, Network, FIXTURE_NETWORK_JSON};
use crate::od::{parse_od, OdMatrix, FIXTURE_OD_TEXT};
use crate::routing::{k_shortest_routes, RouteQuery};

#[derive(Parser)]
#[command(
    name = "routecog",
    version,
    about = "Mesoscopic route-choice assignment with driver behavior cognition",
    after_help = "Network and OD default to the bundled 12-zone fixture when not given."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the iterative assignment and write result artifacts.
    Run(RunArgs),
    /// Check a network document and print diagnostics.
    Validate(ValidateArgs),
    /// Print the priced candidate route set for one OD pair.
    Routes(RoutesArgs),
    /// Print choice probabilities for a list of route costs.
    Choice(ChoiceArgs),
    /// Run cognition on vs. off and print a side-by-side summary.
    Compare(CompareArgs),
}

#[derive(Args, Clone)]
struct ScenarioArgs {
    /// Network document (JSON); bundled fixture when omitted.
    #[arg(long)]
    network: Option<PathBuf>,
    /// OD demand table; bundled flat-period table when omitted.
    #[arg(long)]
    od: Option<PathBuf>,
    /// Run configuration file (JSON); explicit flags win on conflict.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Demand regime.
    #[arg(long, value_parser = clap::value_parser!(DemandMode))]
    mode: Option<DemandMode>,
    /// Use the driver feature library.
    #[arg(long, value_parser = clap::value_parser!(CognitionMode))]
    cognition: Option<CognitionMode>,
    /// Choice model.
    #[arg(long, value_parser = clap::value_parser!(ChoiceModelKind))]
    model: Option<ChoiceModelKind>,
    /// Choice sensitivity (mu for logit, k for kirchhoff).
    #[arg(long)]
    sensitivity: Option<f64>,
    /// Candidate routes per OD pair.
    #[arg(long)]
    k_routes: Option<usize>,
    /// Random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Iteration budget.
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,
    /// Convergence threshold on relative average-cost change.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Volume blending between iterations.
    #[arg(long, value_parser = clap::value_parser!(Averaging))]
    averaging: Option<Averaging>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Seed the feature library from a previous export.
    #[arg(long)]
    library_in: Option<PathBuf>,
    /// Output directory for iterations.csv, flows.csv and library.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    /// Network document (JSON); bundled fixture when omitted.
    #[arg(long)]
    network: Option<PathBuf>,
}

#[derive(Args)]
struct RoutesArgs {
    /// Network document (JSON); bundled fixture when omitted.
    #[arg(long)]
    network: Option<PathBuf>,
    /// Origin zone id.
    #[arg(long)]
    origin: String,
    /// Destination zone id.
    #[arg(long)]
    dest: String,
    /// Number of routes.
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// Run configuration file supplying cost weights.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ChoiceArgs {
    /// Comma-separated route general costs, e.g. 5,10.
    #[arg(long)]
    costs: String,
    /// Sensitivity (mu for logit, k for kirchhoff).
    #[arg(long)]
    sensitivity: f64,
    /// Print only this model's probabilities; both when omitted.
    #[arg(long, value_parser = clap::value_parser!(ChoiceModelKind))]
    model: Option<ChoiceModelKind>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Optional output directory for compare.csv and both iteration series.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<AssignmentError> for CliError {
    fn from(err: AssignmentError) -> Self {
        match err {
            AssignmentError::Config(_) | AssignmentError::Od(_) | AssignmentError::Routing(_) => {
                CliError::Input(err.to_string())
            }
            other => CliError::Internal(other.to_string()),
        }
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                return 0;
            }
            let line = err
                .to_string()
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments")
                .to_string();
            eprintln!("{line} (try --help)");
            return 1;
        }
    };
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Validate(args) => validate(args),
        Command::Routes(args) => routes(args),
        Command::Choice(args) => choice(args),
        Command::Compare(args) => compare(args),
    };
    match result {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {}", err.message());
            err.code()
        }
    }
}

fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_network_arg(path: &Option<PathBuf>) -> Result<Network, CliError> {
    let text = match path {
        Some(path) => read_to_string(path)?,
        None => FIXTURE_NETWORK_JSON.to_string(),
    };
    load_network(&text).map_err(|e| CliError::Input(e.to_string()))
}

fn load_od_arg(path: &Option<PathBuf>) -> Result<OdMatrix, CliError> {
    let text = match path {
        Some(path) => read_to_string(path)?,
        None => FIXTURE_OD_TEXT.to_string(),
    };
    parse_od(&text).map_err(|e| CliError::Input(e.to_string()))
}

/// Base config from file (or defaults), explicit flags applied on top.
fn resolve_config(args: &ScenarioArgs) -> Result<SimulationConfig, CliError> {
    let mut config = match &args.config {
        Some(path) => serde_json::from_str(&read_to_string(path)?)
            .map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))?,
        None => SimulationConfig::default(),
    };
    apply_flags(&mut config, args);
    Ok(config)
}

fn apply_flags(config: &mut SimulationConfig, args: &ScenarioArgs) {
    if let Some(mode) = args.mode {
        config.mode = mode;
    }
    if let Some(cognition) = args.cognition {
        config.cognition = cognition;
    }
    if let Some(model) = args.model {
        config.choice.model = model;
    }
    if let Some(sensitivity) = args.sensitivity {
        config.choice.sensitivity = sensitivity;
    }
    if let Some(k) = args.k_routes {
        config.k_routes = k;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(max_iter) = args.max_iter {
        config.max_iterations = max_iter;
    }
    if let Some(epsilon) = args.epsilon {
        config.epsilon = epsilon;
    }
    if let Some(averaging) = args.averaging {
        config.averaging = averaging;
    }
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let network = load_network_arg(&args.scenario.network)?;
    let od = load_od_arg(&args.scenario.od)?;
    let config = resolve_config(&args.scenario)?;
    let library = match &args.library_in {
        Some(path) => FeatureLibrary::import_json(&read_to_string(path)?)
            .map_err(|e| CliError::Input(e.to_string()))?,
        None => FeatureLibrary::new(),
    };

    let cognition = config.cognition;
    let mut simulation = Simulation::with_library(&network, &od, config, library)?;
    simulation.run().map_err(CliError::from)?;
    let result = simulation.into_result();

    fs::create_dir_all(&args.out)
        .map_err(|e| CliError::Internal(format!("cannot create {}: {e}", args.out.display())))?;
    write_atomic(&args.out.join("iterations.csv"), &iterations_csv(&result))?;
    write_atomic(&args.out.join("flows.csv"), &flows_csv(&result))?;
    if cognition == CognitionMode::On {
        write_atomic(
            &args.out.join("library.json"),
            &result.library.export_json(),
        )?;
    }

    let last = result.reports.last().expect("at least one iteration");
    println!(
        "{} after {} iterations; avg travel cost {:.3}, variance {:.3}",
        if result.converged {
            "converged"
        } else {
            "stopped (budget exhausted)"
        },
        result.reports.len(),
        last.average_travel_cost,
        last.cost_variance,
    );
    println!("artifacts written to {}", args.out.display());
    Ok(())
}

fn validate(args: ValidateArgs) -> Result<(), CliError> {
    let text = match &args.network {
        Some(path) => read_to_string(path)?,
        None => FIXTURE_NETWORK_JSON.to_string(),
    };
    match load_network(&text) {
        Ok(network) => {
            // load_network has already validated; report the counts.
            let diags = validate_network(&network);
            if diags.is_empty() {
                println!(
                    "network ok: {} zones, {} nodes, {} links, {} edges",
                    network.zones().len(),
                    network.nodes().len(),
                    network.links().len(),
                    network.edges().len()
                );
                Ok(())
            } else {
                for d in &diags {
                    println!("{d}");
                }
                Err(CliError::Input(format!("{} diagnostics", diags.len())))
            }
        }
        Err(e) => Err(CliError::Input(e.to_string())),
    }
}

fn routes(args: RoutesArgs) -> Result<(), CliError> {
    let network = load_network_arg(&args.network)?;
    let config = match &args.config {
        Some(path) => serde_json::from_str::<SimulationConfig>(&read_to_string(path)?)
            .map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))?,
        None => SimulationConfig::default(),
    };
    let weights = config.weights_for("default");
    let cost_map = free_flow_edge_costs(&network, weights);
    let query = RouteQuery {
        origin_zone: args.origin.clone(),
        dest_zone: args.dest.clone(),
        k: args.k,
        cost_map: cost_map.clone(),
    };
    let routes = k_shortest_routes(&network, &query).map_err(|e| CliError::Input(e.to_string()))?;
    println!(
        "{} routes {} -> {} at free-flow general cost:",
        routes.len(),
        args.origin,
        args.dest
    );
    for (i, route) in routes.iter().enumerate() {
        let cost: f64 = route.edge_ids.iter().map(|e| cost_map[e]).sum();
        println!(
            "{:>2}. cost {:>10.3}  {}",
            i + 1,
            cost,
            route.edge_ids.join(" ")
        );
    }
    Ok(())
}

fn format_probabilities(values: &[f64]) -> String {
    values
        .iter()
        .map(|p| format!("{p:.6}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn choice(args: ChoiceArgs) -> Result<(), CliError> {
    let costs: Vec<f64> = args
        .costs
        .split(',')
        .map(|field| {
            field
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::Input(format!("cost {field:?} is not a number")))
        })
        .collect::<Result<_, _>>()?;
    let u = utilities(&costs).map_err(|e| CliError::Input(e.to_string()))?;
    match args.model {
        Some(ChoiceModelKind::Logit) => {
            let p = logit_probabilities(&u, args.sensitivity)
                .map_err(|e| CliError::Input(e.to_string()))?;
            println!("{}", format_probabilities(&p));
        }
        Some(ChoiceModelKind::Kirchhoff) => {
            let p = kirchhoff_probabilities(&u, args.sensitivity)
                .map_err(|e| CliError::Input(e.to_string()))?;
            println!("{}", format_probabilities(&p));
        }
        None => {
            println!("utilities:          {}", format_probabilities(&u));
            let logit = logit_probabilities(&u, args.sensitivity)
                .map_err(|e| CliError::Input(e.to_string()))?;
            println!("logit:              {}", format_probabilities(&logit));
            let kirchhoff = kirchhoff_probabilities(&u, args.sensitivity)
                .map_err(|e| CliError::Input(e.to_string()))?;
            println!("kirchhoff:          {}", format_probabilities(&kirchhoff));
            let as_logit = kirchhoff_as_logit(&u, args.sensitivity)
                .map_err(|e| CliError::Input(e.to_string()))?;
            println!("kirchhoff-as-logit: {}", format_probabilities(&as_logit));
        }
    }
    Ok(())
}

fn compare(args: CompareArgs) -> Result<(), CliError> {
    let network = load_network_arg(&args.scenario.network)?;
    let od = load_od_arg(&args.scenario.od)?;
    let config = resolve_config(&args.scenario)?;
    let (on, off) = compare_cognition(&network, &od, &config).map_err(CliError::from)?;
    let summary_on = summarize(&on);
    let summary_off = summarize(&off);

    println!(
        "{:<24} {:>16} {:>16}",
        "metric", "cognition on", "cognition off"
    );
    for (name, a, b) in summary_rows(&summary_on, &summary_off) {
        println!("{name:<24} {a:>16} {b:>16}");
    }

    if let Some(out) = &args.out {
        fs::create_dir_all(out)
            .map_err(|e| CliError::Internal(format!("cannot create {}: {e}", out.display())))?;
        write_atomic(
            &out.join("compare.csv"),
            &compare_csv(&summary_on, &summary_off),
        )?;
        write_atomic(
            &out.join("iterations_cognition_on.csv"),
            &iterations_csv(&on),
        )?;
        write_atomic(
            &out.join("iterations_cognition_off.csv"),
            &iterations_csv(&off),
        )?;
        println!("artifacts written to {}", out.display());
    }
    Ok(())
}

fn summary_rows(on: &RunSummary, off: &RunSummary) -> Vec<(&'static str, String, String)> {
    let f = |x: f64| format!("{x:.4}");
    vec![
        (
            "iterations",
            on.iterations.to_string(),
            off.iterations.to_string(),
        ),
        (
            "converged",
            on.converged.to_string(),
            off.converged.to_string(),
        ),
        ("mean_avg_cost", f(on.mean_avg_cost), f(off.mean_avg_cost)),
        (
            "final_avg_cost",
            f(on.final_avg_cost),
            f(off.final_avg_cost),
        ),
        ("mean_variance", f(on.mean_variance), f(off.mean_variance)),
        (
            "final_cache_hit_rate",
            f(on.final_cache_hit_rate),
            f(off.final_cache_hit_rate),
        ),
        (
            "total_search_ms",
            f(on.total_search_ms),
            f(off.total_search_ms),
        ),
        (
            "search_cv_last10",
            f(on.search_cv_last10),
            f(off.search_cv_last10),
        ),
    ]
}

/// CSV for one run's iteration series. Numeric fields use the shortest
/// round-trip decimal form; `route_search_ms` is wall clock and is the one
/// column excluded from determinism comparisons.
pub fn iterations_csv(result: &RunResult) -> String {
    let mut out = String::from(
        "iteration,avg_travel_cost,cost_variance,route_search_ms,cache_hit_rate,converged\n",
    );
    for r in &result.reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.iteration,
            r.average_travel_cost,
            r.cost_variance,
            r.route_search_time.as_secs_f64() * 1000.0,
            r.cache_hit_rate,
            r.converged
        );
    }
    out
}

/// CSV of final route flows; edge ids within a route are `|`-separated.
pub fn flows_csv(result: &RunResult) -> String {
    let mut out = String::from("od_origin,od_dest,route_edge_ids,demand\n");
    for flow in &result.flows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            flow.origin_zone,
            flow.dest_zone,
            flow.route.edge_ids.join("|"),
            flow.demand
        );
    }
    out
}

fn compare_csv(on: &RunSummary, off: &RunSummary) -> String {
    let mut out = String::from("metric,cognition_on,cognition_off\n");
    for (name, a, b) in summary_rows(on, off) {
        let _ = writeln!(out, "{name},{a},{b}");
    }
    out
}

/// Writes via a temporary file in the same directory plus rename, so the
/// target is complete or absent.
fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().to_string())
        .unwrap_or_else(|| "out".to_string());
    let tmp = dir.join(format!(".{file_name}.tmp"));
    fs::write(&tmp, contents)
        .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::Internal(format!("cannot move into {}: {e}", path.display()))
    })?;
    Ok(())
}
