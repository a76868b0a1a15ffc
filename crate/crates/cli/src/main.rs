use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use qmorph_core::analysis::{significance_matrix, Axis, ExperimentGrid, ALPHA};
use qmorph_core::anneal::{morph, AnnealConfig};
use qmorph_core::app::{
    load_results_dir, render, run_experiment, run_sequence, write_result, write_sequence, AppConfig,
    FrameSequence, GraphSource, LoadedGraph, TargetSource,
};
use qmorph_core::graph::{dual_barabasi_albert, force_layout, random_layout, shortest_paths, DualBaParams};
use qmorph_core::metrics::{evaluate_one, MetricId, MetricSet};
use qmorph_core::shapes::{generate_with, ShapeLabel};
use qmorph_core::similarity::SimilarityKind;
use qmorph_core::{io, Error};

#[derive(Parser)]
#[command(name = "qmorph", version, about = "Morph graph drawings into target shapes under metric constraints")]
struct Cli {
    /// Base random seed (overrides the config file)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON config with `anneal`, `experiment`, `layout`, `render` sections
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Only print errors and requested values
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a start drawing for a graph and write it as coordinate CSV
    Layout(LayoutArgs),
    /// Print the four quality metrics of a drawing
    Metrics(DrawingArgs),
    /// Target shape utilities
    Shapes {
        #[command(subcommand)]
        command: ShapesCommand,
    },
    /// Morph one drawing toward one target
    Morph(MorphArgs),
    /// Run a grid of morphs over graphs, targets, metric combinations and seeds
    Experiment(ExperimentArgs),
    /// Morph through a sequence of target frames
    Sequence(SequenceArgs),
    /// Significance matrices over experiment results
    Analyze(AnalyzeArgs),
    /// Render a drawing as SVG
    Render(RenderArgs),
    /// Generate a synthetic graph as an edge list
    Generate(GenerateArgs),
}

#[derive(Args)]
struct GraphArg {
    /// Edge list, one `i j` pair per line
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct DrawingArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Coordinate CSV with an `x,y` header
    #[arg(long)]
    coords: PathBuf,
    /// Print JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct LayoutArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Spring-embedder iterations
    #[arg(long)]
    iterations: Option<usize>,
    /// Uniform random positions instead of a spring embedding
    #[arg(long)]
    random: bool,
}

#[derive(Subcommand)]
enum ShapesCommand {
    /// Write `n` points of a built-in shape as a target CSV
    Emit {
        label: String,
        n: usize,
        /// Parallel lines in VERT and HOR
        #[arg(long)]
        lines: Option<usize>,
    },
    /// List the built-in shapes
    List,
}

#[derive(Args)]
struct AnnealArgs {
    /// Annealing iterations
    #[arg(long)]
    n_max: Option<u64>,
    #[arg(long)]
    t_init: Option<f64>,
    #[arg(long)]
    t_final: Option<f64>,
    /// greedy, mse or procrustes
    #[arg(long)]
    similarity: Option<SimilarityKind>,
    /// Stress tolerance (`inf` for none)
    #[arg(long)]
    eps_st: Option<f64>,
    /// Edge-length deviation tolerance
    #[arg(long)]
    eps_eld: Option<f64>,
    /// Angular resolution tolerance
    #[arg(long)]
    eps_ar: Option<f64>,
    /// Crossing tolerance as a fraction of the starting count
    #[arg(long)]
    eps_cn: Option<f64>,
    /// Keep every k-th iteration in the trace
    #[arg(long)]
    trace_every: Option<u64>,
}

impl AnnealArgs {
    fn apply(&self, cfg: &mut AnnealConfig) {
        let set = |dst: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *dst = v;
            }
        };
        if let Some(n) = self.n_max {
            cfg.n_max = n;
        }
        set(&mut cfg.t_init, self.t_init);
        set(&mut cfg.t_final, self.t_final);
        if let Some(s) = self.similarity {
            cfg.similarity = s;
        }
        set(&mut cfg.tolerances.stress, self.eps_st);
        set(&mut cfg.tolerances.edge_length_deviation, self.eps_eld);
        set(&mut cfg.tolerances.angular_resolution, self.eps_ar);
        set(&mut cfg.tolerances.crossing_fraction, self.eps_cn);
        if let Some(t) = self.trace_every {
            cfg.trace_every = t;
        }
    }
}

#[derive(Args)]
struct MorphArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Start coordinates; a spring layout is computed when omitted
    #[arg(long)]
    coords: Option<PathBuf>,
    /// Built-in shape label or target CSV
    #[arg(long)]
    target: String,
    /// Constrained metrics, e.g. `ELD` or `ST-CN`
    #[arg(long, default_value = "ST-ELD-CN-AR")]
    qm: MetricSet,
    #[command(flatten)]
    anneal: AnnealArgs,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Edge-list files (repeatable)
    #[arg(long)]
    graph: Vec<PathBuf>,
    /// Add a dual Barabási–Albert graph with this many nodes
    #[arg(long)]
    dual_ba: Option<usize>,
    /// Add a ROWSxCOLS lattice graph
    #[arg(long)]
    grid_graph: Option<String>,
    /// Targets (repeatable); all built-in shapes by default
    #[arg(long)]
    target: Vec<String>,
    /// Metric combinations (repeatable); all 15 by default
    #[arg(long)]
    qm: Vec<MetricSet>,
    /// Runs per cell
    #[arg(long)]
    seeds: Option<u64>,
    /// Concurrent cells
    #[arg(long)]
    threads: Option<usize>,
    /// Recompute cells whose results already exist
    #[arg(long)]
    force: bool,
    #[command(flatten)]
    anneal: AnnealArgs,
}

#[derive(Args)]
struct SequenceArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long)]
    coords: Option<PathBuf>,
    /// Target CSV files in frame order
    #[arg(long, num_args = 1.., required = true)]
    frames: Vec<PathBuf>,
    #[arg(long, default_value = "ST-ELD-CN-AR")]
    qm: MetricSet,
    /// Start every frame from the original drawing
    #[arg(long)]
    no_chain: bool,
    /// Hold each frame to its own start's metrics instead of the original's
    #[arg(long)]
    rebaseline: bool,
    #[command(flatten)]
    anneal: AnnealArgs,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Results directory (JSON files) or consolidated results CSV
    #[arg(long)]
    results: PathBuf,
    /// metric, target or graph
    #[arg(long, default_value = "metric")]
    axis: Axis,
    #[arg(long, default_value_t = ALPHA)]
    alpha: f64,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long)]
    coords: PathBuf,
    /// Canvas size in pixels
    #[arg(long)]
    size: Option<f64>,
}

#[derive(Args)]
struct GenerateArgs {
    /// `dual-ba` or `grid`
    kind: String,
    /// Node count for dual-ba
    #[arg(long, default_value_t = DualBaParams::default().n)]
    n: usize,
    #[arg(long, default_value_t = DualBaParams::default().m1)]
    m1: usize,
    #[arg(long, default_value_t = DualBaParams::default().m2)]
    m2: usize,
    #[arg(long, default_value_t = DualBaParams::default().p)]
    p: f64,
    /// Lattice size for grid, e.g. 12x12
    #[arg(long, default_value = "10x10")]
    dims: String,
}

struct Ctx {
    config: AppConfig,
    out: PathBuf,
    quiet: bool,
}

impl Ctx {
    fn info(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn out_path(&self, name: &str) -> anyhow::Result<PathBuf> {
        fs::create_dir_all(&self.out).with_context(|| format!("creating {}", self.out.display()))?;
        Ok(self.out.join(name))
    }

    fn load(&self, graph: &Path, coords: Option<&Path>) -> anyhow::Result<LoadedGraph> {
        let source = GraphSource::File {
            name: None,
            edges: graph.to_path_buf(),
            coords: coords.map(Path::to_path_buf),
        };
        Ok(source.load(&self.config.layout)?)
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into())
}

fn parse_dims(s: &str) -> anyhow::Result<(usize, usize)> {
    let (r, c) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| Error::InvalidParameter(format!("expected ROWSxCOLS, got `{s}`")))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidParameter(format!("bad lattice size `{s}`")))
    };
    Ok((parse(r)?, parse(c)?))
}

fn cmd_layout(ctx: &Ctx, args: &LayoutArgs) -> anyhow::Result<()> {
    let g = io::read_edge_list(&args.graph.graph)?;
    let seed = ctx.config.layout.seed;
    let d = if args.random {
        random_layout(g.node_count(), seed)
    } else {
        let iterations = args.iterations.unwrap_or(ctx.config.layout.iterations);
        force_layout(&g, iterations, seed)?
    };
    let path = ctx.out_path(&format!("{}_layout.csv", stem(&args.graph.graph)))?;
    io::write_coords(&path, d.coords())?;
    ctx.info(format!("wrote {}", path.display()));
    Ok(())
}

fn cmd_metrics(args: &DrawingArgs) -> anyhow::Result<()> {
    let g = io::read_edge_list(&args.graph.graph)?;
    let d = io::read_coords(&args.coords)?;
    d.check_for(&g)?;
    let dist = shortest_paths(&g)?;
    let values: Vec<Option<f64>> = MetricId::ALL
        .iter()
        .map(|&id| match evaluate_one(id, &g, &d, &dist) {
            Ok(v) => Ok(Some(v)),
            Err(Error::MetricUndefined { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_, _>>()?;
    if args.json {
        let map: serde_json::Map<String, serde_json::Value> = MetricId::ALL
            .iter()
            .zip(&values)
            .map(|(id, v)| (id.short_name().to_string(), serde_json::json!(v)))
            .collect();
        println!("{}", serde_json::to_string_pretty(&map)?);
    } else {
        for (id, v) in MetricId::ALL.iter().zip(&values) {
            match v {
                Some(v) => println!("{:<4}{v}", id.short_name()),
                None => println!("{:<4}undefined", id.short_name()),
            }
        }
    }
    Ok(())
}

fn cmd_shapes(ctx: &Ctx, cmd: &ShapesCommand) -> anyhow::Result<()> {
    match cmd {
        ShapesCommand::List => {
            for l in ShapeLabel::BUILT_IN {
                println!("{l}");
            }
        }
        ShapesCommand::Emit { label, n, lines } => {
            let label: ShapeLabel = label.parse()?;
            let mut params = ctx.config.shape_params;
            if let Some(l) = lines {
                params.line_count = *l;
            }
            let shape = generate_with(label, *n, &params)?;
            let path = ctx.out_path(&format!("{label}_{n}.csv"))?;
            io::write_coords(&path, &shape.points)?;
            ctx.info(format!("wrote {}", path.display()));
        }
    }
    Ok(())
}

fn cmd_morph(ctx: &Ctx, args: &MorphArgs) -> anyhow::Result<()> {
    let lg = ctx.load(&args.graph.graph, args.coords.as_deref())?;
    let source = TargetSource::from(args.target.clone());
    let target = source.resolve(lg.graph.node_count(), &ctx.config.shape_params)?;
    let mut cfg = ctx.config.anneal.clone();
    args.anneal.apply(&mut cfg);
    ctx.info(format!(
        "morphing {} ({} nodes) toward {} under {} for {} iterations",
        lg.name,
        lg.graph.node_count(),
        source.name(),
        args.qm,
        cfg.n_max
    ));
    let result = morph(&lg.graph, &lg.dist, &lg.start, &target, args.qm, &cfg)?;
    let base = format!("{}__{}__{}__s{}", lg.name, source.name(), args.qm, cfg.seed);
    let json = ctx.out_path(&format!("{base}.json"))?;
    write_result(&json, &result)?;
    let final_drawing = result.final_drawing()?;
    io::write_coords(&ctx.out_path(&format!("{base}_final.csv"))?, final_drawing.coords())?;
    let svg = ctx.out_path(&format!("{base}.svg"))?;
    render(&final_drawing, &lg.graph, &svg, &ctx.config.render)?;
    ctx.info(format!("wrote {} and {}", json.display(), svg.display()));
    println!("final percent {:.2}", result.summary.final_percent);
    for m in &result.metrics {
        println!("{:<4}start {} final {} band {}", m.metric.short_name(), m.start, m.end, m.band);
    }
    Ok(())
}

fn cmd_experiment(ctx: &Ctx, args: &ExperimentArgs) -> anyhow::Result<()> {
    let mut plan = ctx.config.experiment.clone();
    plan.anneal = ctx.config.anneal.clone();
    args.anneal.apply(&mut plan.anneal);
    if let Some(t) = args.anneal.trace_every {
        plan.trace_every = t;
    }
    for g in &args.graph {
        plan.graphs.push(GraphSource::File {
            name: None,
            edges: g.clone(),
            coords: None,
        });
    }
    if let Some(n) = args.dual_ba {
        let d = DualBaParams::default();
        plan.graphs.push(GraphSource::DualBa {
            name: format!("dualba{n}"),
            n,
            m1: d.m1,
            m2: d.m2,
            p: d.p,
            seed: plan.anneal.seed,
        });
    }
    if let Some(dims) = &args.grid_graph {
        let (rows, cols) = parse_dims(dims)?;
        plan.graphs.push(GraphSource::Grid {
            name: format!("grid{rows}x{cols}"),
            rows,
            cols,
        });
    }
    if !args.target.is_empty() {
        plan.targets = args.target.iter().cloned().map(TargetSource::from).collect();
    }
    if !args.qm.is_empty() {
        plan.combos = args.qm.clone();
    }
    if let Some(s) = args.seeds {
        plan.seeds = s;
    }
    if args.threads.is_some() {
        plan.threads = args.threads;
    }
    plan.force |= args.force;
    plan.out_dir = ctx.out.clone();
    plan.layout = ctx.config.layout;
    plan.render = ctx.config.render.clone();
    plan.validate()?;
    ctx.info(format!("running {} cells into {}", plan.cell_count(), plan.out_dir.display()));
    let outcome = run_experiment(&plan)?;
    ctx.info(format!(
        "{} computed, {} reused, {} failed",
        outcome.computed,
        outcome.skipped,
        outcome.failures.len()
    ));
    for f in &outcome.failures {
        eprintln!("cell {}/{}/{}/s{} failed: {}", f.graph, f.target, f.combo, f.seed, f.error);
    }
    if !outcome.failures.is_empty() {
        bail!(Runtime(format!("{} cells failed", outcome.failures.len())));
    }
    Ok(())
}

fn cmd_sequence(ctx: &Ctx, args: &SequenceArgs) -> anyhow::Result<()> {
    let lg = ctx.load(&args.graph.graph, args.coords.as_deref())?;
    let mut frames = FrameSequence::load(&args.frames, !args.no_chain)?;
    frames.rebaseline = args.rebaseline;
    let mut cfg = ctx.config.anneal.clone();
    args.anneal.apply(&mut cfg);
    ctx.info(format!("morphing through {} frames", frames.frames.len()));
    let results = run_sequence(&lg.graph, &lg.dist, &lg.start, &frames, args.qm, &cfg)?;
    fs::create_dir_all(&ctx.out)?;
    let svgs = write_sequence(&ctx.out, &lg.graph, &results, &ctx.config.render)?;
    for (r, svg) in results.iter().zip(&svgs) {
        println!("{} {:.2}", svg.display(), r.summary.final_percent);
    }
    Ok(())
}

fn cmd_analyze(ctx: &Ctx, args: &AnalyzeArgs) -> anyhow::Result<()> {
    let grid = if args.results.is_dir() {
        let csv = args.results.join("results.csv");
        if csv.is_file() {
            ExperimentGrid::read_csv(&csv)?
        } else {
            load_results_dir(&args.results)?
        }
    } else {
        ExperimentGrid::read_csv(&args.results)?
    };
    match grid.friedman(args.axis) {
        Ok(f) => println!("friedman chi2 {:.4} p {:.4e}", f.chi2, f.p),
        Err(e) => ctx.info(format!("friedman skipped: {e}")),
    }
    let m = significance_matrix(&grid, args.axis, args.alpha)?;
    let csv = ctx.out_path(&format!("significance_{}.csv", args.axis))?;
    fs::write(&csv, m.to_csv())?;
    let svg = ctx.out_path(&format!("significance_{}.svg", args.axis))?;
    fs::write(&svg, m.to_svg())?;
    ctx.info(format!("wrote {} and {}", csv.display(), svg.display()));
    for (i, row) in m.levels.iter().enumerate() {
        let wins: Vec<&str> = m.levels
            .iter()
            .enumerate()
            .filter(|&(j, _)| m.significant[i][j])
            .map(|(_, l)| l.as_str())
            .collect();
        if !wins.is_empty() {
            println!("{row} > {}", wins.join(", "));
        }
    }
    Ok(())
}

fn cmd_render(ctx: &Ctx, args: &RenderArgs) -> anyhow::Result<()> {
    let g = io::read_edge_list(&args.graph.graph)?;
    let d = io::read_coords(&args.coords)?;
    d.check_for(&g)?;
    let mut opts = ctx.config.render.clone();
    if let Some(s) = args.size {
        opts.size_px = s;
    }
    let path = ctx.out_path(&format!("{}.svg", stem(&args.coords)))?;
    render(&d.normalize()?, &g, &path, &opts)?;
    ctx.info(format!("wrote {}", path.display()));
    Ok(())
}

fn cmd_generate(ctx: &Ctx, args: &GenerateArgs) -> anyhow::Result<()> {
    let (g, name) = match args.kind.as_str() {
        "dual-ba" | "dualba" => (
            dual_barabasi_albert(args.n, args.m1, args.m2, args.p, ctx.config.anneal.seed)?,
            format!("dualba{}", args.n),
        ),
        "grid" => {
            let (r, c) = parse_dims(&args.dims)?;
            (qmorph_core::Graph::grid(r, c)?, format!("grid{r}x{c}"))
        }
        other => bail!(Error::InvalidParameter(format!("unknown graph kind `{other}`"))),
    };
    let path = ctx.out_path(&format!("{name}.txt"))?;
    io::write_edge_list(&path, &g)?;
    ctx.info(format!(
        "wrote {} ({} nodes, {} edges)",
        path.display(),
        g.node_count(),
        g.edge_count()
    ));
    Ok(())
}

/// Failure that should exit with the runtime status.
#[derive(Debug)]
struct Runtime(String);

impl std::fmt::Display for Runtime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Runtime {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return if e.is_input_error() { 1 } else { 2 };
        }
        if cause.downcast_ref::<Runtime>().is_some() {
            return 2;
        }
        if cause.downcast_ref::<serde_json::Error>().is_some() {
            return 1;
        }
    }
    2
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut config = match &cli.config {
        Some(path) => AppConfig::load(path)?,
        None => AppConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.anneal.seed = seed;
        config.layout.seed = seed;
    }
    let ctx = Ctx {
        config,
        out: cli.out,
        quiet: cli.quiet,
    };
    match &cli.command {
        Command::Layout(a) => cmd_layout(&ctx, a),
        Command::Metrics(a) => cmd_metrics(a),
        Command::Shapes { command } => cmd_shapes(&ctx, command),
        Command::Morph(a) => cmd_morph(&ctx, a),
        Command::Experiment(a) => cmd_experiment(&ctx, a),
        Command::Sequence(a) => cmd_sequence(&ctx, a),
        Command::Analyze(a) => cmd_analyze(&ctx, a),
        Command::Render(a) => cmd_render(&ctx, a),
        Command::Generate(a) => cmd_generate(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
