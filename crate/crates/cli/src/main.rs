use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use netclass::classifier::{roc_evaluate, Query, RocConfig, SimConfig, Simulator};
use netclass::distance::{build_state_space, mds_project, EnsembleWeights, LabeledGraph};
use netclass::features::extract_features;
use netclass::function::{
    ascendency, generate_mixture_panel, identifiability_experiment, loo_evaluate, predict_function,
    MixturePanelEntry, DEFAULT_NEIGHBORS,
};
use netclass::generators::{
    grow, grow_mixture, stir_mixture_with_density, MechanismKind, MechanismSpec, MixtureAssignment,
    DEFAULT_STIR_DENSITY,
};
use netclass::graph::{parse_edgelist, write_edgelist, Graph};
use netclass::reference::{fit_reference_weights, reference_weights, ReferencePanel};
use netclass::rng::SeededRng;
use netclass::{plot, Error};

const WEIGHTS_ENV: &str = "NETCLASS_WEIGHTS";

#[derive(Parser)]
#[command(name = "netclass", version, about = "Classify the generating mechanism of directed networks")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Master seed for every stochastic step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 50)]
    nodes: usize,
    /// Replicate simulations per grid value.
    #[arg(long, global = true, default_value_t = 3)]
    replicates: usize,
    #[arg(long, global = true, default_value_t = 0.05)]
    alpha: f64,
    /// Null networks simulated per KS test.
    #[arg(long, global = true, default_value_t = 50)]
    null_size: usize,
    /// Ensemble weights JSON (default: $NETCLASS_WEIGHTS, then the built-in reference weights).
    #[arg(long, global = true)]
    weights: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Grow one network from a single mechanism.
    Generate {
        #[arg(long)]
        mechanism: MechanismKind,
        #[arg(long)]
        param: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grow a network from a per-node mechanism assignment (JSON list of {kind, param}).
    GenerateMixture {
        #[arg(long)]
        assignment: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rewire a random network node by node under a per-node assignment.
    StirMixture {
        #[arg(long)]
        assignment: PathBuf,
        #[arg(long, default_value_t = DEFAULT_STIR_DENSITY)]
        density: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract the 18 structural properties as JSON.
    Features {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pairwise ensemble distances and an MDS projection of a directory of edgelists.
    Statespace {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Distance matrix as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Fit weights on the given networks instead of using the reference weights.
        #[arg(long)]
        fit: bool,
    },
    /// Test a network against candidate mechanisms.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "er,dd,niche,pa,sw")]
        mechanisms: Vec<MechanismKind>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance-weighted estimate of a mechanism's parameter.
    EstimateParam {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        mechanism: MechanismKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify simulated labeled networks and report per-mechanism ROC curves.
    Roc {
        #[arg(long, default_value_t = 30)]
        per_mechanism: usize,
        #[arg(long, value_delimiter = ',', default_value = "er,dd,niche,pa,sw")]
        mechanisms: Vec<MechanismKind>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Full report (every network's p-values) as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Normalized Ascendency of a network's flows.
    Ascendency {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grow a panel of random five-mechanism mixtures with their ascendency.
    MixturePanel {
        #[arg(long, default_value_t = 100)]
        size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Predict normalized Ascendency from the nearest panel networks.
    Predict {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        panel: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NEIGHBORS)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Leave-one-out prediction over a mixture panel.
    Loo {
        #[arg(long)]
        panel: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NEIGHBORS)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance-vs-composition correlation for mixtures of increasing size.
    Identifiability {
        /// A count (3) or inclusive range (2..5).
        #[arg(long, default_value = "2..5")]
        mechanisms: String,
        #[arg(long, default_value_t = 100)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        repetitions: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Refit ensemble weights on the canonical reference panel.
    FitWeights {
        #[arg(long, default_value_t = 100)]
        values: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Fully resolved settings of one run, logged at startup.
#[derive(Debug, Serialize)]
struct RunConfig {
    seed: u64,
    nodes: usize,
    replicates: usize,
    alpha: f64,
    null_size: usize,
    weights: Option<PathBuf>,
    threads: Option<usize>,
}

impl RunConfig {
    fn resolve(args: &RunArgs) -> anyhow::Result<Self> {
        if args.nodes == 0 || args.replicates == 0 || args.null_size == 0 {
            bail!(Error::Validation("nodes, replicates and null-size must be at least 1".into()));
        }
        if !(args.alpha > 0.0 && args.alpha < 1.0) {
            bail!(Error::Validation(format!("alpha must be in (0, 1), got {}", args.alpha)));
        }
        if args.threads == Some(0) {
            bail!(Error::Validation("threads must be at least 1".into()));
        }
        let weights = args.weights.clone().or_else(|| std::env::var_os(WEIGHTS_ENV).map(PathBuf::from));
        Ok(RunConfig {
            seed: args.seed,
            nodes: args.nodes,
            replicates: args.replicates,
            alpha: args.alpha,
            null_size: args.null_size,
            weights,
            threads: args.threads,
        })
    }

    fn rng(&self, task: &str) -> SeededRng {
        SeededRng::new(self.seed).derive_named(task)
    }

    fn sim_config(&self) -> SimConfig {
        SimConfig { replicates: self.replicates, null_size: self.null_size, ..SimConfig::default() }
    }

    fn load_weights(&self) -> anyhow::Result<EnsembleWeights> {
        match &self.weights {
            Some(path) => {
                let text = read_text(path)?;
                EnsembleWeights::from_json(&text).with_context(|| format!("weights file {}", path.display()))
            }
            None => Ok(reference_weights().clone()),
        }
    }
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    parse_edgelist(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_assignment(path: &Path) -> anyhow::Result<MixtureAssignment> {
    let a: MixtureAssignment =
        serde_json::from_str(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))?;
    a.validate()?;
    Ok(a)
}

fn read_panel(path: &Path) -> anyhow::Result<Vec<MixturePanelEntry>> {
    serde_json::from_str(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Writes to `path`, or stdout when absent.
fn emit(path: Option<&Path>, content: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, content).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

/// `"3"` → `[3]`, `"2..5"` → `[2, 3, 4, 5]`.
fn parse_count_range(text: &str) -> anyhow::Result<Vec<usize>> {
    let bad = || Error::Validation(format!("expected a count or range like 2..5, got {text:?}"));
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let k: usize = text.trim().parse().map_err(|_| bad())?;
            (k, k)
        }
    };
    if lo > hi {
        bail!(bad());
    }
    Ok((lo..=hi).collect())
}

/// Edgelist files of a directory in name order. A file named like
/// `er_0.25_1.edgelist` is labeled with that mechanism and parameter.
fn read_graph_dir(dir: &Path) -> anyhow::Result<Vec<LabeledGraph>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "edgelist" || e == "txt"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok(LabeledGraph { label: label_from_stem(&stem), graph: read_graph(p)?, id: stem })
        })
        .collect()
}

fn label_from_stem(stem: &str) -> Option<MechanismSpec> {
    let mut parts = stem.split(['_', '-']);
    let kind: MechanismKind = parts.next()?.parse().ok()?;
    let param: f64 = parts.next()?.parse().ok()?;
    MechanismSpec::new(kind, param).ok()
}

#[derive(Serialize)]
struct StateSpaceOutput<'a> {
    ids: &'a [String],
    labels: &'a [Option<MechanismSpec>],
    coordinates: Vec<Vec<f64>>,
    distances: &'a [Vec<f64>],
    weights: &'a EnsembleWeights,
}

#[derive(Serialize)]
struct EstimateOutput {
    mechanism: MechanismKind,
    estimate: f64,
    nodes: usize,
}

#[derive(Serialize)]
struct PredictOutput {
    k: usize,
    panel_size: usize,
    normalized_ascendency: f64,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = RunConfig::resolve(&cli.run)?;
    log::info!("run config: {}", serde_json::to_string(&cfg)?);
    if let Some(t) = cfg.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }

    match cli.command {
        Command::Generate { mechanism, param, out } => {
            let g = grow(MechanismSpec::new(mechanism, param)?, cfg.nodes, cfg.rng("generate"))?;
            emit(out.as_deref(), &write_edgelist(&g))
        }
        Command::GenerateMixture { assignment, out } => {
            let g = grow_mixture(&read_assignment(&assignment)?, cfg.rng("generate-mixture"))?;
            emit(out.as_deref(), &write_edgelist(&g))
        }
        Command::StirMixture { assignment, density, out } => {
            let a = read_assignment(&assignment)?;
            let g = stir_mixture_with_density(&a, density, cfg.rng("stir-mixture"))?;
            emit(out.as_deref(), &write_edgelist(&g))
        }
        Command::Features { input, out } => {
            let f = extract_features(&read_graph(&input)?)?;
            emit(out.as_deref(), &to_json(&f))
        }
        Command::Statespace { input, out, csv, svg, fit } => {
            let graphs = read_graph_dir(&input)?;
            let weights = if fit { None } else { Some(cfg.load_weights()?) };
            let space = build_state_space(&graphs, weights.as_ref())?;
            let coordinates = if space.len() >= 3 { mds_project(&space, 2)? } else { vec![vec![0.0, 0.0]; space.len()] };
            if let Some(path) = csv {
                let mut text = String::from("id");
                space.ids.iter().for_each(|id| text.push_str(&format!(",{id}")));
                text.push('\n');
                for (id, row) in space.ids.iter().zip(&space.distances) {
                    text.push_str(id);
                    row.iter().for_each(|d| text.push_str(&format!(",{d}")));
                    text.push('\n');
                }
                emit(Some(&path), &text)?;
            }
            if let Some(path) = svg {
                let groups: Vec<String> = space
                    .labels
                    .iter()
                    .map(|l| l.map(|s| s.kind.to_string()).unwrap_or_else(|| "unlabeled".into()))
                    .collect();
                emit(Some(&path), &plot::state_space_svg(&coordinates, &groups))?;
            }
            let output = StateSpaceOutput {
                ids: &space.ids,
                labels: &space.labels,
                coordinates,
                distances: &space.distances,
                weights: &space.weights,
            };
            emit(out.as_deref(), &to_json(&output))
        }
        Command::Classify { input, mechanisms, out } => {
            let weights = cfg.load_weights()?;
            let sim = Simulator::new(&weights, cfg.sim_config())?;
            let query = Query::new(&read_graph(&input)?)?;
            let report = sim.classify(&query, &mechanisms, cfg.alpha, cfg.rng("classify"))?;
            emit(out.as_deref(), &to_json(&report))
        }
        Command::EstimateParam { input, mechanism, out } => {
            let weights = cfg.load_weights()?;
            let sim = Simulator::new(&weights, cfg.sim_config())?;
            let query = Query::new(&read_graph(&input)?)?;
            let estimate = sim.estimate_param(&query, mechanism, cfg.rng("estimate-param"));
            emit(out.as_deref(), &to_json(&EstimateOutput { mechanism, estimate, nodes: query.n() }))
        }
        Command::Roc { per_mechanism, mechanisms, out, json, svg } => {
            let weights = cfg.load_weights()?;
            let sim = Simulator::new(&weights, cfg.sim_config())?;
            let config = RocConfig { per_mechanism, nodes: cfg.nodes, mechanisms };
            let report = roc_evaluate(&config, &sim, cfg.rng("roc"))?;
            if let Some(path) = json {
                emit(Some(&path), &to_json(&report))?;
            }
            if let Some(path) = svg {
                emit(Some(&path), &plot::roc_svg(&report))?;
            }
            emit(out.as_deref(), &report.to_csv())
        }
        Command::Ascendency { input, out } => emit(out.as_deref(), &to_json(&ascendency(&read_graph(&input)?))),
        Command::MixturePanel { size, out } => {
            let panel = generate_mixture_panel(size, cfg.nodes, cfg.rng("mixture-panel"))?;
            emit(out.as_deref(), &to_json(&panel))
        }
        Command::Predict { input, panel, k, out } => {
            let weights = cfg.load_weights()?;
            let panel = read_panel(&panel)?;
            let query = extract_features(&read_graph(&input)?)?;
            let value = predict_function(&query, &panel, k, &weights)?;
            emit(out.as_deref(), &to_json(&PredictOutput { k, panel_size: panel.len(), normalized_ascendency: value }))
        }
        Command::Loo { panel, k, out } => {
            let weights = cfg.load_weights()?;
            let report = loo_evaluate(&read_panel(&panel)?, k, &weights)?;
            emit(out.as_deref(), &to_json(&report))
        }
        Command::Identifiability { mechanisms, size, repetitions, out } => {
            let weights = cfg.load_weights()?;
            let counts = parse_count_range(&mechanisms)?;
            let mut text = String::from("n_mechanisms,repetition,correlation,degenerate,mechanisms\n");
            for rep in 0..repetitions {
                for &k in &counts {
                    let rng = cfg.rng("identifiability").derive(rep as u64).derive(k as u64);
                    let r = identifiability_experiment(k, size, cfg.nodes, &weights, rng)?;
                    let names: Vec<&str> = r.mechanisms.iter().map(|m| m.name()).collect();
                    text.push_str(&format!("{k},{rep},{},{},{}\n", r.correlation, r.degenerate, names.join(";")));
                }
            }
            emit(out.as_deref(), &text)
        }
        Command::FitWeights { values, out } => {
            let panel = ReferencePanel { values, replicates: cfg.replicates, nodes: cfg.nodes, seed: cfg.seed };
            emit(out.as_deref(), &(fit_reference_weights(&panel)?.to_json() + "\n"))
        }
    }
}

#[derive(Serialize)]
struct ErrorReport {
    error: &'static str,
    message: String,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let kind = err.chain().find_map(|e| e.downcast_ref::<Error>()).map(Error::kind).unwrap_or("runtime");
            let message = err.chain().map(|e| e.to_string()).collect::<Vec<_>>().join(": ");
            eprintln!("{}", serde_json::to_string(&ErrorReport { error: kind, message }).expect("serializable"));
            ExitCode::from(1)
        }
    }
}
