//! Pipeline driver: decompose a network, build the reconfiguration HUBO,
//! count logical resources, estimate physical resources, solve small cases
//! classically, and emit the combined report tables.
//!
//! All outputs are byte-deterministic for a fixed configuration; components
//! are processed in parallel under `--jobs N` with order-stable assembly.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dnr_core::formulate::{
    assemble, build_variables, default_weights, AssembledHubo, FormulateOptions,
    VariableRegistry, Weights,
};
use dnr_core::ising::{counting_mode, CountingBudget, IsingSummary};
use dnr_core::network::{load_ieee33, parse_network_csv, parse_network_json, Network};
use dnr_core::oracle;
use dnr_core::qre::{
    builtin_profiles, load_profiles, tradeoff_region, EstimateOptions, HardwareProfile,
    PhysicalEstimate,
};
use dnr_core::reduce::{decompose, CycleStrategy, Decomposition, DecomposeOptions, ReducedComponent};
use rayon::prelude::*;
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

/// Reference row for the built-in 33-bus case, used to flag deviations.
const IEEE33_REFERENCE_QUBITS: f64 = 667.0;
const IEEE33_REFERENCE_INTERACTIONS: f64 = 33_616.0;

#[derive(Parser)]
#[command(
    name = "dnr",
    about = "Distribution network reconfiguration: HUBO formulation and quantum resource estimates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a network into reduced components
    Decompose(CommonArgs),
    /// Build the component HUBOs and write them with their sidecars
    BuildHubo(CommonArgs),
    /// Count logical resources of one optimisation layer per component
    Counts(CommonArgs),
    /// Estimate physical resources per component and hardware profile
    Qre(CommonArgs),
    /// Enumerate radial configurations and report the classical optimum
    SolveClassical(CommonArgs),
    /// Emit the combined statistics table (and, with --all, the QRE data)
    Report(ReportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    /// enumerate every simple cycle (correctness reference)
    AllSimple,
    /// fundamental basis plus virtual-edge blockers (scalable)
    Basis,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct CommonArgs {
    /// Network input: a JSON file, a directory with nodes.csv + edges.csv,
    /// or the literal `ieee33` for the built-in benchmark case
    #[arg(short, long)]
    input: String,

    /// Output directory
    #[arg(short, long, default_value = "dnr-out")]
    outdir: PathBuf,

    /// Penalty weights file (JSON); defaults derive from the loss bound
    #[arg(long)]
    weights: Option<PathBuf>,

    /// Cycle-set construction strategy
    #[arg(long, value_enum, default_value = "all-simple")]
    cycle_strategy: StrategyArg,

    /// Cap on enumerated simple cycles per component
    #[arg(long, default_value_t = 10_000)]
    cycle_cap: usize,

    /// Cap on path monomials per arc in the loss expansion
    #[arg(long, default_value_t = 100_000)]
    path_cap: usize,

    /// Cap on classical configurations enumerated per component
    #[arg(long, default_value_t = 10_000_000)]
    config_cap: u64,

    /// Memory budget for exact Pauli-term aggregation
    #[arg(long, default_value_t = 80_000_000)]
    max_ising_terms: usize,

    /// Hardware profiles file (JSON array); defaults to the six built-ins
    #[arg(long)]
    profiles: Option<PathBuf>,

    /// Total error budget for the physical estimates
    #[arg(long, default_value_t = 0.333)]
    budget: f64,

    /// Worker threads for per-component parallelism
    #[arg(long, default_value_t = 1)]
    jobs: usize,

    /// Report format
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Also emit the QRE trade-off table
    #[arg(long)]
    all: bool,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decompose(args) => run(&args, cmd_decompose),
        Command::BuildHubo(args) => run(&args, cmd_build_hubo),
        Command::Counts(args) => run(&args, cmd_counts),
        Command::Qre(args) => run(&args, cmd_qre),
        Command::SolveClassical(args) => run(&args, cmd_solve_classical),
        Command::Report(args) => run(&args.common, |ctx| cmd_report(ctx, args.all)),
    };
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

/// Everything a command needs, resolved once.
struct Ctx {
    input_name: String,
    is_builtin_ieee33: bool,
    decomposition: Decomposition,
    weights: Option<Weights>,
    formulate: FormulateOptions,
    counting: CountingBudget,
    estimate: EstimateOptions,
    profiles: Vec<HardwareProfile>,
    config_cap: u64,
    format: FormatArg,
}

fn run(
    args: &CommonArgs,
    f: impl FnOnce(&Ctx) -> Result<Vec<(String, String)>> + Send,
) -> Result<()> {
    let ctx = build_ctx(args)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()
        .context("cli: building the worker pool")?;
    let files = pool.install(|| f(&ctx))?;
    write_outputs(&args.outdir, &files)
}

fn build_ctx(args: &CommonArgs) -> Result<Ctx> {
    let (network, input_name, is_builtin) = load_network(&args.input)?;
    let strategy = match args.cycle_strategy {
        StrategyArg::AllSimple => CycleStrategy::AllSimpleCycles,
        StrategyArg::Basis => CycleStrategy::BasisWithVirtualEdges,
    };
    let decomposition = decompose(
        &network,
        &DecomposeOptions {
            strategy,
            cycle_cap: args.cycle_cap,
        },
    )?;
    let weights = match &args.weights {
        None => None,
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cli: reading weights file {}", path.display()))?;
            let w: Weights = serde_json::from_str(&text)
                .map_err(|e| anyhow!("cli: malformed weights file {}: {e}", path.display()))?;
            w.validate()?;
            Some(w)
        }
    };
    let profiles = match &args.profiles {
        None => builtin_profiles(),
        Some(path) => {
            let file = fs::File::open(path)
                .with_context(|| format!("cli: opening profiles file {}", path.display()))?;
            load_profiles(file)?
        }
    };
    if profiles.is_empty() {
        bail!("qre: the profiles file declares no hardware profiles");
    }
    if !(args.budget > 0.0 && args.budget < 1.0) {
        bail!("qre: --budget must lie strictly between 0 and 1");
    }
    Ok(Ctx {
        input_name,
        is_builtin_ieee33: is_builtin,
        decomposition,
        weights,
        formulate: FormulateOptions {
            path_cap: args.path_cap,
        },
        counting: CountingBudget {
            max_terms: args.max_ising_terms,
            ..CountingBudget::default()
        },
        estimate: EstimateOptions {
            budget: args.budget,
            ..EstimateOptions::default()
        },
        profiles,
        config_cap: args.config_cap,
        format: args.format,
    })
}

fn load_network(input: &str) -> Result<(Network, String, bool)> {
    if input == "ieee33" {
        return Ok((load_ieee33(), "ieee33".to_string(), true));
    }
    let path = Path::new(input);
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| input.to_string());
    if path.is_dir() {
        let nodes = fs::File::open(path.join("nodes.csv"))
            .with_context(|| format!("network: opening {}/nodes.csv", path.display()))?;
        let edges = fs::File::open(path.join("edges.csv"))
            .with_context(|| format!("network: opening {}/edges.csv", path.display()))?;
        Ok((parse_network_csv(nodes, edges)?, name, false))
    } else {
        let file = fs::File::open(path)
            .with_context(|| format!("network: opening {}", path.display()))?;
        Ok((parse_network_json(file)?, name, false))
    }
}

/// Writes every output in one pass; on any failure the files created by
/// this invocation are removed so no partial outputs remain.
fn write_outputs(outdir: &Path, files: &[(String, String)]) -> Result<()> {
    fs::create_dir_all(outdir)
        .with_context(|| format!("cli: creating output directory {}", outdir.display()))?;
    let mut written: Vec<PathBuf> = Vec::new();
    for (name, content) in files {
        let path = outdir.join(name);
        if let Err(e) = fs::write(&path, content) {
            for w in &written {
                let _ = fs::remove_file(w);
            }
            let _ = fs::remove_file(&path);
            return Err(e).with_context(|| format!("cli: writing {}", path.display()));
        }
        written.push(path);
    }
    for (name, _) in files {
        println!("wrote {}", outdir.join(name).display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// per-component processing shared by counts / qre / report

struct ComponentCounts {
    registry_len: usize,
    summary: IsingSummary,
    counts: dnr_core::formulate::FamilyCounts,
    degree_histogram: Vec<usize>,
}

fn component_weights(ctx: &Ctx, rc: &ReducedComponent) -> Weights {
    ctx.weights.unwrap_or_else(|| default_weights(rc))
}

fn build_component(ctx: &Ctx, rc: &ReducedComponent) -> Result<(VariableRegistry, AssembledHubo)> {
    let reg = build_variables(rc)?;
    let weights = component_weights(ctx, rc);
    let hubo = assemble(rc, &reg, &weights, &ctx.formulate)?;
    Ok((reg, hubo))
}

fn count_component(ctx: &Ctx, rc: &ReducedComponent) -> Result<ComponentCounts> {
    let (reg, hubo) = build_component(ctx, rc)?;
    let summary = counting_mode(&hubo.polynomial, ctx.counting);
    Ok(ComponentCounts {
        registry_len: reg.len(),
        summary,
        counts: hubo.family_counts(),
        degree_histogram: hubo.polynomial.degree_histogram(),
    })
}

fn all_component_counts(ctx: &Ctx) -> Result<Vec<ComponentCounts>> {
    ctx.decomposition
        .components
        .par_iter()
        .map(|rc| count_component(ctx, rc))
        .collect()
}

fn counts_csv(ctx: &Ctx, counted: &[ComponentCounts]) -> String {
    let mut csv = String::from(
        "component,nodes_gc,nodes_g0,edges_gc,edges_g0,interactions,logical_qubits,\
         logical_rotation_gates,pauli_terms,interactions_degree_ge2,interactions_streamed,exact_counts\n",
    );
    for (i, (rc, cc)) in ctx
        .decomposition
        .components
        .iter()
        .zip(counted)
        .enumerate()
    {
        let degree_ge2: usize = cc.degree_histogram.iter().skip(2).sum();
        csv.push_str(&format!(
            "c{i},{},{},{},{},{},{},{},{},{},{},{}\n",
            rc.gc_node_count(),
            rc.minor_node_count(),
            rc.gc_edge_count(),
            rc.minor_edge_count(),
            cc.summary.hubo_interactions,
            cc.summary.logical_qubits,
            cc.summary.rotation_gates_one_layer,
            cc.summary.pauli_terms,
            degree_ge2,
            cc.counts.family_sum,
            cc.summary.exact,
        ));
    }
    csv
}

// ---------------------------------------------------------------------------
// commands

#[derive(Serialize)]
struct MinorEdgeDto {
    u: String,
    v: String,
    chain: Vec<String>,
    segment_resistances: Vec<f64>,
}

#[derive(Serialize)]
struct ComponentDto {
    index: usize,
    root: String,
    nodes_gc: usize,
    edges_gc: usize,
    nodes_g0: usize,
    edges_g0: usize,
    minor_nodes: Vec<String>,
    minor_edges: Vec<MinorEdgeDto>,
    aggregated_currents_a: std::collections::BTreeMap<String, f64>,
    cycle_strategy: CycleStrategy,
    cycles: usize,
    basis_cycles: usize,
    composite_blockers: usize,
}

#[derive(Serialize)]
struct DecompositionDto {
    input: String,
    total_current_a: f64,
    articulation_points: Vec<String>,
    fixed_edges: Vec<dnr_core::reduce::FixedEdge>,
    fixed_loss_w: f64,
    components: Vec<ComponentDto>,
}

fn component_dto(index: usize, rc: &ReducedComponent) -> ComponentDto {
    ComponentDto {
        index,
        root: rc.minor_id(rc.root).to_string(),
        nodes_gc: rc.gc_node_count(),
        edges_gc: rc.gc_edge_count(),
        nodes_g0: rc.minor_node_count(),
        edges_g0: rc.minor_edge_count(),
        minor_nodes: (0..rc.minor_node_count())
            .map(|p| rc.minor_id(p).to_string())
            .collect(),
        minor_edges: rc
            .minor_edges
            .iter()
            .map(|e| MinorEdgeDto {
                u: rc.minor_id(e.u).to_string(),
                v: rc.minor_id(e.v).to_string(),
                chain: e.internal.iter().map(|&m| rc.nodes[m].id.clone()).collect(),
                segment_resistances: e.segment_resistances.clone(),
            })
            .collect(),
        aggregated_currents_a: rc
            .nodes
            .iter()
            .map(|n| (n.id.clone(), n.current))
            .collect(),
        cycle_strategy: rc.strategy,
        cycles: rc.cycles.len(),
        basis_cycles: rc.basis_cycle_count(),
        composite_blockers: rc.blocker_count(),
    }
}

fn cmd_decompose(ctx: &Ctx) -> Result<Vec<(String, String)>> {
    let dto = DecompositionDto {
        input: ctx.input_name.clone(),
        total_current_a: ctx.decomposition.total_current,
        articulation_points: ctx.decomposition.articulation_points.clone(),
        fixed_edges: ctx.decomposition.fixed_edges.clone(),
        fixed_loss_w: ctx.decomposition.fixed_loss(),
        components: ctx
            .decomposition
            .components
            .iter()
            .enumerate()
            .map(|(i, rc)| component_dto(i, rc))
            .collect(),
    };
    Ok(vec![(
        "decomposition.json".to_string(),
        to_json_pretty(&dto)?,
    )])
}

#[derive(Serialize)]
struct HuboSidecar {
    component: String,
    variables: usize,
    variable_names: Vec<String>,
    weights: Weights,
    family_term_counts: dnr_core::formulate::FamilyCounts,
    degree_histogram: Vec<usize>,
}

fn cmd_build_hubo(ctx: &Ctx) -> Result<Vec<(String, String)>> {
    let built: Vec<(VariableRegistry, AssembledHubo)> = ctx
        .decomposition
        .components
        .par_iter()
        .map(|rc| build_component(ctx, rc))
        .collect::<Result<_>>()?;
    let mut files = Vec::new();
    for (i, (reg, hubo)) in built.iter().enumerate() {
        files.push((format!("hubo_c{i}.txt"), hubo.polynomial.dump()));
        let sidecar = HuboSidecar {
            component: format!("c{i}"),
            variables: reg.len(),
            variable_names: reg.pool().vars().map(|v| reg.name(v).to_string()).collect(),
            weights: hubo.weights,
            family_term_counts: hubo.family_counts(),
            degree_histogram: hubo.polynomial.degree_histogram(),
        };
        files.push((format!("hubo_c{i}.json"), to_json_pretty(&sidecar)?));
    }
    Ok(files)
}

#[derive(Serialize)]
struct CountsSidecar {
    component: String,
    variables: usize,
    #[serde(flatten)]
    summary: IsingSummary,
    interactions_degree_ge2: usize,
    interactions_streamed: usize,
}

fn cmd_counts(ctx: &Ctx) -> Result<Vec<(String, String)>> {
    let counted = all_component_counts(ctx)?;
    let mut files = Vec::new();
    for (i, cc) in counted.iter().enumerate() {
        let sidecar = CountsSidecar {
            component: format!("c{i}"),
            variables: cc.registry_len,
            summary: cc.summary,
            interactions_degree_ge2: cc.degree_histogram.iter().skip(2).sum(),
            interactions_streamed: cc.counts.family_sum,
        };
        files.push((format!("counts_c{i}.json"), to_json_pretty(&sidecar)?));
    }
    files.push(("counts.csv".to_string(), counts_csv(ctx, &counted)));
    Ok(files)
}

fn qre_csv_row(component: &str, p: &PhysicalEstimate) -> String {
    format!(
        "{component},{},{},{},{},{},{:.6e},{}\n",
        p.profile,
        p.code_distance,
        p.logical_qubits,
        p.physical_qubits,
        p.t_count,
        p.runtime_s,
        p.exact_counts,
    )
}

const QRE_HEADER: &str =
    "component,profile,code_distance,logical_qubits,physical_qubits,t_count,runtime_s,exact_counts\n";

fn cmd_qre(ctx: &Ctx) -> Result<Vec<(String, String)>> {
    let counted = all_component_counts(ctx)?;
    let mut csv = String::from(QRE_HEADER);
    for (i, cc) in counted.iter().enumerate() {
        for profile in &ctx.profiles {
            let est = dnr_core::qre::physical_estimate(&cc.summary, profile, &ctx.estimate)?;
            csv.push_str(&qre_csv_row(&format!("c{i}"), &est));
        }
    }
    Ok(vec![("qre.csv".to_string(), csv)])
}

#[derive(Serialize)]
struct SolveComponentDto {
    component: String,
    root: String,
    closed_arcs: Vec<(String, String)>,
    open_positions: Vec<OpenPositionDto>,
    loss_w: f64,
    n_configurations: u64,
    ties: bool,
}

#[derive(Serialize)]
struct OpenPositionDto {
    u: String,
    v: String,
    position: usize,
}

#[derive(Serialize)]
struct SolveDto {
    input: String,
    components: Vec<SolveComponentDto>,
    fixed_loss_w: f64,
    total_loss_w: f64,
}

fn cmd_solve_classical(ctx: &Ctx) -> Result<Vec<(String, String)>> {
    let solved: Vec<SolveComponentDto> = ctx
        .decomposition
        .components
        .par_iter()
        .enumerate()
        .map(|(i, rc)| -> Result<SolveComponentDto> {
            let (cfg, loss, count, ties) = oracle::optimal_configuration(rc, ctx.config_cap)?;
            Ok(SolveComponentDto {
                component: format!("c{i}"),
                root: rc.minor_id(rc.root).to_string(),
                closed_arcs: cfg
                    .configuration
                    .arcs
                    .iter()
                    .map(|&(u, v)| (rc.minor_id(u).to_string(), rc.minor_id(v).to_string()))
                    .collect(),
                open_positions: cfg
                    .configuration
                    .open_positions
                    .iter()
                    .map(|(&ei, &b)| OpenPositionDto {
                        u: rc.minor_id(rc.minor_edges[ei].u).to_string(),
                        v: rc.minor_id(rc.minor_edges[ei].v).to_string(),
                        position: b,
                    })
                    .collect(),
                loss_w: loss,
                n_configurations: count,
                ties,
            })
        })
        .collect::<Result<_>>()?;
    let fixed = ctx.decomposition.fixed_loss();
    let total = fixed + solved.iter().map(|s| s.loss_w).sum::<f64>();
    let dto = SolveDto {
        input: ctx.input_name.clone(),
        components: solved,
        fixed_loss_w: fixed,
        total_loss_w: total,
    };
    Ok(vec![("solve.json".to_string(), to_json_pretty(&dto)?)])
}

#[derive(Serialize)]
struct DeviationDto {
    reference_logical_qubits: f64,
    reference_interactions: f64,
    reported_logical_qubits: usize,
    reported_interactions: usize,
    qubit_ratio: f64,
    interaction_ratio: f64,
}

#[derive(Serialize)]
struct ReportRowDto {
    component: String,
    nodes_gc: usize,
    nodes_g0: usize,
    edges_gc: usize,
    edges_g0: usize,
    interactions: usize,
    logical_qubits: usize,
    logical_rotation_gates: usize,
    pauli_terms: usize,
    interactions_degree_ge2: usize,
    interactions_streamed: usize,
    exact_counts: bool,
}

fn cmd_report(ctx: &Ctx, all: bool) -> Result<Vec<(String, String)>> {
    let counted = all_component_counts(ctx)?;
    let mut files = vec![("report.csv".to_string(), counts_csv(ctx, &counted))];
    if ctx.format == FormatArg::Json {
        let rows: Vec<ReportRowDto> = ctx
            .decomposition
            .components
            .iter()
            .zip(&counted)
            .enumerate()
            .map(|(i, (rc, cc))| ReportRowDto {
                component: format!("c{i}"),
                nodes_gc: rc.gc_node_count(),
                nodes_g0: rc.minor_node_count(),
                edges_gc: rc.gc_edge_count(),
                edges_g0: rc.minor_edge_count(),
                interactions: cc.summary.hubo_interactions,
                logical_qubits: cc.summary.logical_qubits,
                logical_rotation_gates: cc.summary.rotation_gates_one_layer,
                pauli_terms: cc.summary.pauli_terms,
                interactions_degree_ge2: cc.degree_histogram.iter().skip(2).sum(),
                interactions_streamed: cc.counts.family_sum,
                exact_counts: cc.summary.exact,
            })
            .collect();
        files.push(("report.json".to_string(), to_json_pretty(&rows)?));
    }
    if ctx.is_builtin_ieee33 {
        if let Some(cc) = counted.first() {
            let dev = DeviationDto {
                reference_logical_qubits: IEEE33_REFERENCE_QUBITS,
                reference_interactions: IEEE33_REFERENCE_INTERACTIONS,
                reported_logical_qubits: cc.summary.logical_qubits,
                reported_interactions: cc.summary.hubo_interactions,
                qubit_ratio: ratio(cc.summary.logical_qubits as f64, IEEE33_REFERENCE_QUBITS),
                interaction_ratio: ratio(
                    cc.summary.hubo_interactions as f64,
                    IEEE33_REFERENCE_INTERACTIONS,
                ),
            };
            files.push(("table_deviation.json".to_string(), to_json_pretty(&dev)?));
        }
    }
    if all {
        let mut csv = String::from(QRE_HEADER);
        for (i, cc) in counted.iter().enumerate() {
            let points = tradeoff_region(&cc.summary, &ctx.profiles, &ctx.estimate)?;
            for p in &points {
                csv.push_str(&qre_csv_row(&format!("c{i}"), p));
            }
        }
        files.push(("tradeoff.csv".to_string(), csv));
    }
    Ok(files)
}

/// Deviation ratio >= 1 in either direction.
fn ratio(reported: f64, reference: f64) -> f64 {
    let r = reported / reference;
    if r < 1.0 {
        1.0 / r
    } else {
        r
    }
}

fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).context("cli: serialising output")?;
    s.push('\n');
    Ok(s)
}
