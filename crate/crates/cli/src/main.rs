//! `qbio` — one deterministic command-line entry point per library module.
//!
//! Every subcommand renders a rectangular table in CSV (default) or JSON;
//! identical invocations produce byte-identical output. Exit codes follow a
//! fixed contract: 0 on success, 1 when flag values violate a domain
//! constraint (timescale hierarchy, enumeration cap, infeasible dynamics),
//! 2 on usage errors and unparsable or invalid input files.

mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use output::{emit, format_float, OutputFormat, Table};
use qbio_core::aminoacids::{canonical_table, signal_count_for_queries, validate_partition};
use qbio_core::evolution::{
    self, ConvergenceParams, ConvergenceReport, EvolutionError, EvolutionMatrix, NegativityPolicy,
    PopulationVector,
};
use qbio_core::lattice::{self, RamachandranPoint, STAR_ANGLES_DEG};
use qbio_core::replication::hierarchy_sweep;
use qbio_core::search::{
    apply_diffusion, apply_oracle, grover_iterate, optimal_queries, uniform_state, SearchProblem,
    SearchState,
};

/// Deterministic search, evolution, folding, and code-table toolkit.
#[derive(Parser)]
#[command(name = "qbio", version, propagate_version = true)]
struct Cli {
    /// Output format for result tables.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,

    /// Write output to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    /// Reserved for future randomized features; accepted and ignored
    /// because every current computation is deterministic.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Worker threads for conformation counting; results are identical
    /// for any thread count.
    #[arg(long, global = true, default_value_t = 1, value_name = "N")]
    threads: usize,

    /// Interpret --target flags as one-based indices.
    #[arg(long, global = true)]
    one_based: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the paired-reflection database search.
    Grover(GroverArgs),
    /// Tabulate the alphabet sizes pinned down by query budgets.
    Sizes(SizesArgs),
    /// Run linear population dynamics: trajectory, convergence report, or
    /// coupling sweep.
    Evolve(EvolveArgs),
    /// Enumerate self-avoiding backbone conformations, or discretize
    /// torsion angles onto the star grid.
    Fold(FoldArgs),
    /// Sweep the damped-measurement model over timescale-hierarchy ratios.
    Replication(ReplicationArgs),
    /// Export or validate the canonical amino-acid class table.
    Aminoacids(AminoAcidArgs),
}

#[derive(Args)]
#[command(group = ArgGroup::new("mode").required(true).args(["queries", "optimal"]))]
struct GroverArgs {
    /// Database size N.
    #[arg(long)]
    n: usize,

    /// Marked item index.
    #[arg(long)]
    target: usize,

    /// Simulate exactly this many oracle-plus-reflection iterations.
    #[arg(long)]
    queries: Option<u32>,

    /// Solve for the optimal iteration count instead of simulating.
    #[arg(long)]
    optimal: bool,

    /// Emit one amplitude row per operator application.
    #[arg(long, requires = "queries", conflicts_with = "optimal")]
    trace: bool,
}

#[derive(Args)]
struct SizesArgs {
    /// Largest query budget to tabulate.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    q_max: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    /// Abort when a signed step drives a species negative.
    Strict,
    /// Clamp negatives to zero and rescale to the budget.
    Projected,
}

impl From<PolicyArg> for NegativityPolicy {
    fn from(policy: PolicyArg) -> Self {
        match policy {
            PolicyArg::Strict => NegativityPolicy::Strict,
            PolicyArg::Projected => NegativityPolicy::Projected,
        }
    }
}

#[derive(Args)]
struct EvolveArgs {
    /// Matrix file: one whitespace-separated row per line, unit column
    /// sums; entries outside [0, 1] switch the dynamics to signed mode.
    #[arg(long, value_name = "FILE")]
    matrix: PathBuf,

    /// Population file: non-negative numbers, any line layout.
    #[arg(long, value_name = "FILE")]
    pop: PathBuf,

    /// Emit a step-by-step trajectory of this length instead of a
    /// convergence report.
    #[arg(long, conflicts_with = "speedup")]
    steps: Option<u64>,

    /// Resolution policy for negative components of signed dynamics.
    #[arg(long, value_enum, default_value_t = PolicyArg::Strict)]
    policy: PolicyArg,

    /// Budget share a species must hold to be declared the winner.
    #[arg(long, default_value_t = 0.99)]
    threshold: f64,

    /// Stationarity tolerance on the relative L1 change per step.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,

    /// Step budget for the convergence search.
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: u64,

    /// Sweep matrix = base + lambda * perturbation over --lambdas.
    #[arg(long, requires = "perturbation", requires = "lambdas")]
    speedup: bool,

    /// Perturbation matrix file with zero column sums.
    #[arg(long, value_name = "FILE", requires = "speedup")]
    perturbation: Option<PathBuf>,

    /// Coupling strengths for the sweep (comma-separated).
    #[arg(
        long,
        requires = "speedup",
        value_delimiter = ',',
        num_args = 1..,
        allow_negative_numbers = true
    )]
    lambdas: Vec<f64>,
}

#[derive(Args)]
struct FoldArgs {
    #[command(subcommand)]
    action: Option<FoldAction>,

    /// Number of peptide units to enumerate.
    #[arg(long)]
    units: Option<usize>,

    /// Also branch over the eclipsed (cis) continuation set.
    #[arg(long)]
    allow_cis: bool,

    /// Emit per-site coordinates for every conformation.
    #[arg(long, conflicts_with = "count_only")]
    emit_coords: bool,

    /// Emit only the total conformation count.
    #[arg(long)]
    count_only: bool,
}

#[derive(Subcommand)]
enum FoldAction {
    /// Assign continuous (phi, psi) pairs to the nearest star orientation.
    Discretize(DiscretizeArgs),
}

#[derive(Args)]
struct DiscretizeArgs {
    /// CSV file of phi,psi pairs in degrees (optional header row).
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
}

#[derive(Args)]
struct ReplicationArgs {
    /// Database size N.
    #[arg(long)]
    n: usize,

    /// Marked item index.
    #[arg(long)]
    target: usize,

    /// Hierarchy ratios t_osc/t_r to sweep (comma-separated, in (0, 1]).
    #[arg(long, required = true, value_delimiter = ',', num_args = 1..)]
    ratios: Vec<f64>,
}

#[derive(Args)]
#[command(group = ArgGroup::new("action").required(true).args(["validate", "export"]))]
struct AminoAcidArgs {
    /// Emit the four partition checks and per-group statistics.
    #[arg(long)]
    validate: bool,

    /// Emit the canonical 20-row table.
    #[arg(long)]
    export: bool,
}

/// Failures that terminate the process, sorted by exit code.
enum CliError {
    /// Exit 1: flag values violate a domain constraint.
    Domain(String),
    /// Exit 2: bad usage or unparsable/invalid input files.
    Usage(String),
}

fn domain<E: std::fmt::Display>(error: E) -> CliError {
    CliError::Domain(error.to_string())
}

/// Classifies an evolution error by origin: matrix/population shape and
/// validation problems come from input files (usage), everything else from
/// the dynamics or flag values (domain).
fn map_evolution_error(error: EvolutionError) -> CliError {
    use EvolutionError::*;
    match error {
        EmptyPopulation
        | NegativePopulation { .. }
        | NonPositiveTotal { .. }
        | EmptyMatrix
        | NotSquare { .. }
        | ColumnSumViolation { .. }
        | EntryOutOfRange { .. }
        | DimensionMismatch { .. }
        | PerturbationColumnSum { .. }
        | BaseNotStochastic => CliError::Usage(error.to_string()),
        other => CliError::Domain(other.to_string()),
    }
}

fn resolve_target(target: usize, one_based: bool) -> Result<usize, CliError> {
    if !one_based {
        return Ok(target);
    }
    target
        .checked_sub(1)
        .ok_or_else(|| CliError::Domain("one-based target must be at least 1".to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let table = match &cli.command {
        Command::Grover(args) => run_grover(args, cli.one_based),
        Command::Sizes(args) => Ok(run_sizes(args)),
        Command::Evolve(args) => run_evolve(args),
        Command::Fold(args) => run_fold(args, cli.threads),
        Command::Replication(args) => run_replication(args, cli.one_based),
        Command::Aminoacids(args) => Ok(run_aminoacids(args)),
    };
    match table {
        Ok(table) => {
            let rendered = table.render(cli.format);
            if let Err(error) = emit(&rendered, cli.output.as_deref()) {
                eprintln!("error: could not write output: {error}");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Domain(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run_grover(args: &GroverArgs, one_based: bool) -> Result<Table, CliError> {
    let target = resolve_target(args.target, one_based)?;
    let problem = SearchProblem::new(args.n, target).map_err(domain)?;

    if args.optimal {
        let solution = optimal_queries(args.n).map_err(domain)?;
        let mut table = Table::new(vec!["n", "target", "q_real", "q_int", "residual_error"]);
        table.push(vec![
            args.n.to_string(),
            target.to_string(),
            format_float(solution.q_real),
            solution.q_int.to_string(),
            format_float(solution.residual_error),
        ]);
        return Ok(table);
    }

    let queries = args.queries.expect("clap enforces one of queries/optimal");
    if args.trace {
        return Ok(trace_table(args.n, target, queries));
    }

    let state = grover_iterate(problem, queries);
    let mut table = Table::new(vec!["index", "amplitude", "probability"]);
    for (index, amplitude) in state.amplitudes().iter().enumerate() {
        table.push(vec![
            index.to_string(),
            format_float(*amplitude),
            format_float(amplitude * amplitude),
        ]);
    }
    Ok(table)
}

/// Amplitude table with one row per operator application.
fn trace_table(n: usize, target: usize, queries: u32) -> Table {
    let mut columns = vec!["query".to_string(), "operation".to_string()];
    columns.extend((0..n).map(|i| format!("amplitude_{i}")));
    columns.push("success_probability".to_string());
    let mut table = Table::new(columns);

    let push = |table: &mut Table, query: u32, operation: &str, state: &SearchState| {
        let mut row = vec![query.to_string(), operation.to_string()];
        row.extend(state.amplitudes().iter().map(|a| format_float(*a)));
        row.push(format_float(
            state.probability(target).expect("validated target"),
        ));
        table.push(row);
    };

    let mut state = uniform_state(n).expect("validated size");
    push(&mut table, 0, "initial", &state);
    for query in 1..=queries {
        state = apply_oracle(&state, target).expect("validated target");
        push(&mut table, query, "oracle", &state);
        state = apply_diffusion(&state);
        push(&mut table, query, "diffusion", &state);
    }
    table
}

fn run_sizes(args: &SizesArgs) -> Table {
    let mut table = Table::new(vec![
        "queries",
        "exact_n",
        "rounded_alphabet",
        "interpretation",
    ]);
    for q in 1..=args.q_max {
        let row = signal_count_for_queries(q);
        table.push(vec![
            q.to_string(),
            format_float(row.exact_n.expect("query rows carry a size")),
            row.rounded_alphabet.to_string(),
            row.interpretation,
        ]);
    }
    table
}

/// Renders an optional step count / species index with the unreached marker.
fn marker<T: ToString>(value: Option<T>) -> String {
    value.map_or_else(|| "unreached".to_string(), |v| v.to_string())
}

fn report_cells(report: &ConvergenceReport) -> [String; 4] {
    [
        marker(report.steps_to_winner),
        marker(report.winner),
        marker(report.stationarity_steps),
        report.negativity_events.to_string(),
    ]
}

/// Loads a unit-column-sum matrix; entries outside [0, 1] make it signed.
fn load_matrix(path: &std::path::Path) -> Result<EvolutionMatrix, CliError> {
    let rows = input::read_matrix(path).map_err(CliError::Usage)?;
    let in_unit_range = rows.iter().flatten().all(|v| (0.0..=1.0).contains(v));
    let matrix = if in_unit_range {
        EvolutionMatrix::stochastic(rows)
    } else {
        EvolutionMatrix::signed(rows)
    };
    matrix.map_err(map_evolution_error)
}

fn run_evolve(args: &EvolveArgs) -> Result<Table, CliError> {
    let matrix = load_matrix(&args.matrix)?;
    let pop_values = input::read_vector(&args.pop).map_err(CliError::Usage)?;
    let pop = PopulationVector::new(pop_values).map_err(map_evolution_error)?;
    let policy = NegativityPolicy::from(args.policy);
    let params = ConvergenceParams {
        winner_threshold: args.threshold,
        stationarity_tol: args.tol,
        max_steps: args.max_steps,
    };

    if args.speedup {
        let perturbation_path = args.perturbation.as_ref().expect("clap requires the file");
        let perturbation = input::read_matrix(perturbation_path).map_err(CliError::Usage)?;
        let rows = evolution::speedup_experiment(
            &matrix,
            &perturbation,
            &args.lambdas,
            &pop,
            policy,
            params,
        )
        .map_err(map_evolution_error)?;
        let mut table = Table::new(vec![
            "lambda",
            "steps_to_winner",
            "winner",
            "stationarity_steps",
            "negativity_events",
        ]);
        for row in rows {
            let cells = match &row.report {
                Some(report) => report_cells(report),
                None => std::array::from_fn(|_| "infeasible".to_string()),
            };
            let mut line = vec![format_float(row.lambda)];
            line.extend(cells);
            table.push(line);
        }
        return Ok(table);
    }

    if let Some(steps) = args.steps {
        let trajectory =
            evolution::evolve(&pop, &matrix, steps, policy).map_err(map_evolution_error)?;
        let mut columns = vec!["step".to_string()];
        columns.extend((0..pop.len()).map(|i| format!("species_{i}")));
        let mut table = Table::new(columns);
        for (step, state) in trajectory.iter().enumerate() {
            let mut row = vec![step.to_string()];
            row.extend(state.phi().iter().map(|v| format_float(*v)));
            table.push(row);
        }
        return Ok(table);
    }

    let report =
        evolution::convergence_time(&pop, &matrix, policy, params).map_err(map_evolution_error)?;
    let mut table = Table::new(vec![
        "steps_to_winner",
        "winner",
        "stationarity_steps",
        "negativity_events",
    ]);
    table.push(report_cells(&report).into());
    Ok(table)
}

fn run_fold(args: &FoldArgs, threads: usize) -> Result<Table, CliError> {
    if let Some(FoldAction::Discretize(discretize)) = &args.action {
        let pairs = input::read_angle_pairs(&discretize.input).map_err(CliError::Usage)?;
        let mut table = Table::new(vec!["phi", "psi", "star_phi", "star_psi", "distance"]);
        for (phi, psi) in pairs {
            // Non-finite angles come from the input file, so they are a
            // usage error like any other parse failure.
            let point =
                RamachandranPoint::new(phi, psi).map_err(|e| CliError::Usage(e.to_string()))?;
            let assignment = lattice::discretize_angles(point);
            table.push(vec![
                format_float(phi),
                format_float(psi),
                format_float(STAR_ANGLES_DEG[assignment.choice.phi_index() as usize]),
                format_float(STAR_ANGLES_DEG[assignment.choice.psi_index() as usize]),
                format_float(assignment.distance_deg),
            ]);
        }
        return Ok(table);
    }

    let units = args.units.ok_or_else(|| {
        CliError::Usage("fold needs --units N (or the discretize subcommand)".to_string())
    })?;

    if args.count_only {
        let count = lattice::count_conformations_parallel(units, args.allow_cis, threads)
            .map_err(domain)?;
        let mut table = Table::new(vec!["units", "allow_cis", "count"]);
        table.push(vec![
            units.to_string(),
            args.allow_cis.to_string(),
            count.to_string(),
        ]);
        return Ok(table);
    }

    if args.emit_coords {
        // Raw lattice coordinates: bond length √3 keeps the scale factor 1.
        let mut table = Table::new(vec!["conformation", "site", "x", "y", "z"]);
        let mut id = 0u64;
        lattice::visit_conformations(units, args.allow_cis, |conf| {
            let coords = lattice::conformation_to_coordinates(conf, 3.0f64.sqrt());
            for (site, [x, y, z]) in coords.iter().enumerate() {
                table.push(vec![
                    id.to_string(),
                    site.to_string(),
                    format_float(*x),
                    format_float(*y),
                    format_float(*z),
                ]);
            }
            id += 1;
        })
        .map_err(domain)?;
        return Ok(table);
    }

    let mut table = Table::new(vec!["conformation", "choices"]);
    let mut id = 0u64;
    lattice::visit_conformations(units, args.allow_cis, |conf| {
        let choices: Vec<String> = conf
            .choices()
            .iter()
            .map(|c| {
                let omega = match c.omega() {
                    lattice::Omega::Trans => "trans",
                    lattice::Omega::Cis => "cis",
                };
                format!("{}:{}:{omega}", c.phi_index(), c.psi_index())
            })
            .collect();
        table.push(vec![id.to_string(), choices.join(";")]);
        id += 1;
    })
    .map_err(domain)?;
    Ok(table)
}

fn run_replication(args: &ReplicationArgs, one_based: bool) -> Result<Table, CliError> {
    let target = resolve_target(args.target, one_based)?;
    let sweep = hierarchy_sweep(args.n, target, &args.ratios).map_err(domain)?;
    let mut table = Table::new(vec!["ratio", "success_probability"]);
    for (ratio, probability) in sweep {
        table.push(vec![format_float(ratio), format_float(probability)]);
    }
    Ok(table)
}

fn run_aminoacids(args: &AminoAcidArgs) -> Table {
    if args.export {
        let mut table = Table::new(vec!["code3", "name", "property", "mol_wt", "class"]);
        for record in canonical_table() {
            table.push(vec![
                record.code3.to_string(),
                record.name.to_string(),
                record.property.label().to_string(),
                format_float(record.mol_wt),
                record.class.label().to_string(),
            ]);
        }
        return table;
    }

    let report = validate_partition(canonical_table()).expect("canonical table has 20 records");
    let mut table = Table::new(vec!["item", "value"]);
    let mut push = |item: &str, value: String| table.push(vec![item.to_string(), value]);
    push("class_balance", report.class_balance.to_string());
    push(
        "per_property_balance",
        report.per_property_balance.to_string(),
    );
    push("heavier_class_one", report.heavier_class_one.to_string());
    push(
        "sulphur_in_class_one",
        report.sulphur_in_class_one.to_string(),
    );
    push("all_pass", report.all_pass().to_string());
    for group in &report.group_stats {
        let label = group.property.label();
        push(
            &format!("{label}_class_I_count"),
            group.class_one_count.to_string(),
        );
        push(
            &format!("{label}_class_II_count"),
            group.class_two_count.to_string(),
        );
        push(
            &format!("{label}_class_I_mean_wt"),
            group
                .class_one_mean_wt
                .map_or_else(|| "none".to_string(), format_float),
        );
        push(
            &format!("{label}_class_II_mean_wt"),
            group
                .class_two_mean_wt
                .map_or_else(|| "none".to_string(), format_float),
        );
    }
    table
}
