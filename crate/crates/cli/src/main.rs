//! `consonance` command-line tool.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use consonance::coherence::{classify, classify_flat, profile, ClassMask, CoherenceClass};
use consonance::io::{load_state, write_state_file, LoadedState};
use consonance::measures::{evaluate, schmidt_decompose, Measure};
use consonance::optimizer::{consonance, OptimizerConfig};
use consonance::qstate::TpsMatrix;
use consonance::states::{parse_dims, tps_remap, AnyState, TpsRelabeling};
use consonance::sweep::{format_sig9, recipe, run_sweep, Grid, SweepSpec};
use consonance::unitary::{LocalCircuit, Preset};
use consonance::Error;

#[derive(Parser)]
#[command(name = "consonance", version, about = "Nonlocal-coherence correlation measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate measures on a state.
    Measure(MeasureArgs),
    /// Run the consonance optimizer.
    Optimize(OptimizeArgs),
    /// Sweep a family parameter and write CSV.
    Sweep(SweepArgs),
    /// Schmidt decomposition of a bipartite pure state.
    Schmidt(SchmidtArgs),
    /// Classify density-matrix elements.
    Classify(ClassifyArgs),
    /// Relabel the tensor product structure of a state.
    Remap(RemapArgs),
}

#[derive(Args)]
struct StateArgs {
    /// State file (JSON) or factory spec such as `werner:a=0.5`.
    #[arg(long, visible_alias = "family")]
    state: String,
    /// Skip physical validation of state files.
    #[arg(long)]
    no_validate: bool,
}

impl StateArgs {
    fn load(&self) -> consonance::Result<LoadedState> {
        load_state(&self.state, !self.no_validate)
    }
}

#[derive(Args)]
struct OptimizerArgs {
    /// SINGLE_PARTY or NONGLOBAL_CIRCUIT(depth), also `single` and `nonglobal:3`.
    #[arg(long, default_value = "SINGLE_PARTY")]
    preset: Preset,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, env = "CONSONANCE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    eps_l: f64,
    #[arg(long, default_value_t = 20_000)]
    max_evals: usize,
}

impl OptimizerArgs {
    fn config(&self) -> OptimizerConfig {
        OptimizerConfig {
            preset: self.preset,
            restarts: self.restarts,
            seed: self.seed,
            eps_l: self.eps_l,
            max_evals: self.max_evals,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct MeasureArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Measure id; repeat for several.
    #[arg(long = "measure", required = true)]
    measures: Vec<Measure>,
    #[command(flatten)]
    opt: OptimizerArgs,
    /// Print results as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    opt: OptimizerArgs,
    /// Circuit JSON used as an extra starting point.
    #[arg(long)]
    warm_start: Vec<PathBuf>,
    /// Write config, report and circuit as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Built-in recipe: fig2, fig3 or fig4.
    #[arg(long, conflicts_with_all = ["spec", "family"])]
    recipe: Option<String>,
    /// Sweep spec JSON file.
    #[arg(long, conflicts_with = "family")]
    spec: Option<PathBuf>,
    /// Family name for an inline sweep.
    #[arg(long, requires_all = ["axis", "start", "stop", "points"])]
    family: Option<String>,
    #[arg(long)]
    axis: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    stop: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Fixed binding `key=value`; repeatable.
    #[arg(long)]
    fixed: Vec<String>,
    #[arg(long = "measure")]
    measures: Vec<Measure>,
    #[arg(long, env = "CONSONANCE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SchmidtArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Also print the Schmidt vectors.
    #[arg(long)]
    vectors: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    /// State whose elements are listed.
    #[arg(long, visible_alias = "family", conflicts_with = "dims")]
    state: Option<String>,
    #[arg(long)]
    no_validate: bool,
    /// Dims such as `2x2x2`, for classifying a single element.
    #[arg(long, requires_all = ["row", "col"])]
    dims: Option<String>,
    /// Multi-index `0,1,1` or flat index.
    #[arg(long)]
    row: Option<String>,
    #[arg(long)]
    col: Option<String>,
}

#[derive(Args)]
struct RemapArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Relabeling name: werner-f-prime or identity.
    #[arg(long, default_value = "werner-f-prime")]
    relabeling: String,
    /// Write the remapped state as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Measure(a) => cmd_measure(a),
        Command::Optimize(a) => cmd_optimize(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Schmidt(a) => cmd_schmidt(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Remap(a) => cmd_remap(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Validation(_) | Error::Json(_) | Error::Csv(_) => 1,
        Error::Usage(_) | Error::Parse(_) | Error::Constraint(_) | Error::Io(_) => 2,
    }
}

fn cmd_measure(a: MeasureArgs) -> consonance::Result<()> {
    let loaded = a.state.load()?;
    let config = a.opt.config();
    let mut results = Vec::new();
    for &m in &a.measures {
        results.push(evaluate(m, loaded.family.as_ref(), &loaded.state, &config)?);
    }
    let mut out = io::stdout().lock();
    if a.json {
        serde_json::to_writer_pretty(&mut out, &results)?;
        writeln!(out)?;
        return Ok(());
    }
    for r in &results {
        let mut line = format!("{} = {}", r.name, format_sig9(r.value));
        if let Some(f) = r.feasible {
            line.push_str(&format!(" (feasible: {f})"));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

fn read_circuit(path: &PathBuf) -> consonance::Result<LocalCircuit> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn cmd_optimize(a: OptimizeArgs) -> consonance::Result<()> {
    let loaded = a.state.load()?;
    let mut config = a.opt.config();
    config.warm_starts = a.warm_start.iter().map(read_circuit).collect::<consonance::Result<_>>()?;
    let rho = loaded.state.to_density();
    let report = consonance(&rho, &config)?;
    let mut out = io::stdout().lock();
    writeln!(out, "consonance = {}", format_sig9(report.value))?;
    writeln!(out, "l_residual = {:e}", report.l_residual)?;
    writeln!(out, "feasible = {}", report.feasible)?;
    writeln!(out, "preset = {}", config.preset)?;
    if let Some(path) = &a.report {
        let doc = serde_json::json!({
            "state": a.state.state,
            "dims": rho.dims(),
            "config": config,
            "report": report,
        });
        let mut f = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut f, &doc)?;
        writeln!(f)?;
    }
    Ok(())
}

fn parse_fixed(items: &[String]) -> consonance::Result<Vec<(String, f64)>> {
    items
        .iter()
        .map(|s| {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("--fixed expects key=value, got '{s}'")))?;
            let v: f64 = v.trim().parse().map_err(|_| Error::Parse(format!("bad number in '{s}'")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn cmd_sweep(a: SweepArgs) -> consonance::Result<()> {
    let mut spec = if let Some(name) = &a.recipe {
        recipe(name, a.seed)?
    } else if let Some(path) = &a.spec {
        serde_json::from_str::<SweepSpec>(&std::fs::read_to_string(path)?)?
    } else if let Some(family) = &a.family {
        if a.measures.is_empty() {
            return Err(Error::Usage("inline sweeps need at least one --measure".into()));
        }
        SweepSpec {
            family: family.clone(),
            axis: a.axis.clone().unwrap_or_default(),
            grid: Grid { start: a.start.unwrap_or(0.0), stop: a.stop.unwrap_or(1.0), points: a.points.unwrap_or(2) },
            fixed: parse_fixed(&a.fixed)?.into_iter().collect(),
            measures: a.measures.clone(),
            optimizer_config: Some(OptimizerConfig { seed: a.seed, ..Default::default() }),
            notes: Vec::new(),
        }
    } else {
        return Err(Error::Usage("sweep needs --recipe, --spec or --family".into()));
    };
    if a.recipe.is_none() && a.family.is_none() {
        if let Some(c) = spec.optimizer_config.as_mut() {
            c.seed = a.seed;
        }
    }
    let table = run_sweep(&spec)?;
    match &a.out {
        Some(path) => table.write_csv(BufWriter::new(File::create(path)?)),
        None => table.write_csv(io::stdout().lock()),
    }
}

fn cmd_schmidt(a: SchmidtArgs) -> consonance::Result<()> {
    let loaded = a.state.load()?;
    let psi = loaded
        .state
        .as_pure()
        .ok_or_else(|| Error::Usage("schmidt needs a pure state".into()))?;
    let s = schmidt_decompose(psi)?;
    let mut out = io::stdout().lock();
    let coeffs: Vec<String> = s.coefficients.iter().map(|p| format_sig9(*p)).collect();
    writeln!(out, "coefficients = [{}]", coeffs.join(", "))?;
    let sum: f64 = s.coefficients.iter().sum();
    let sq: f64 = s.coefficients.iter().map(|p| p * p).sum();
    writeln!(out, "consonance = {}", format_sig9(sum * sum - sq))?;
    if a.vectors {
        let fmt = |z: &consonance::C64| format!("{}{:+}i", format_sig9(z.re), format_sig9(z.im));
        for k in 0..s.coefficients.len() {
            let u: Vec<String> = s.left_basis.column(k).iter().map(fmt).collect();
            let v: Vec<String> = s.right_basis.column(k).iter().map(fmt).collect();
            writeln!(out, "u{k} = [{}]", u.join(", "))?;
            writeln!(out, "v{k} = [{}]", v.join(", "))?;
        }
    }
    Ok(())
}

fn parse_index(s: &str, dims: &consonance::Dims) -> consonance::Result<Vec<usize>> {
    let parts: Vec<usize> = s
        .split([',', ' '])
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|_| Error::Parse(format!("bad index '{s}'"))))
        .collect::<consonance::Result<_>>()?;
    if parts.len() == 1 && dims.parties() > 1 {
        if parts[0] >= dims.total() {
            return Err(Error::Usage(format!("flat index {} out of range for dims {dims}", parts[0])));
        }
        return Ok(dims.decode(parts[0]));
    }
    Ok(parts)
}

fn cmd_classify(a: ClassifyArgs) -> consonance::Result<()> {
    let mut out = io::stdout().lock();
    if let Some(d) = &a.dims {
        let dims = parse_dims(d)?;
        let row = parse_index(a.row.as_deref().unwrap_or_default(), &dims)?;
        let col = parse_index(a.col.as_deref().unwrap_or_default(), &dims)?;
        writeln!(out, "{}", classify(&dims, &row, &col)?.as_str())?;
        return Ok(());
    }
    let spec = a.state.as_deref().ok_or_else(|| Error::Usage("classify needs --state or --dims".into()))?;
    let rho = load_state(spec, !a.no_validate)?.state.to_density();
    let dims = rho.dims().clone();
    let mask = ClassMask::new(&dims);
    let m = rho.matrix();
    let n = dims.total();
    writeln!(out, "# dims {dims}")?;
    writeln!(out, "row,col,class,modulus")?;
    let classes = [CoherenceClass::Diagonal, CoherenceClass::LocalCoherence, CoherenceClass::NonlocalCoherence];
    let mut counts = [(0usize, 0usize); 3];
    for r in 0..n {
        for c in 0..n {
            let class = mask.class(r, c);
            debug_assert_eq!(Some(class), classify_flat(&dims, r, c).ok());
            let modulus = m[(r, c)].norm();
            let k = classes.iter().position(|&x| x == class).unwrap_or(0);
            counts[k].0 += 1;
            if modulus > 1e-12 {
                counts[k].1 += 1;
            }
            let fmt_idx = |f: usize| dims.decode(f).iter().map(|i| i.to_string()).collect::<String>();
            writeln!(out, "{},{},{},{}", fmt_idx(r), fmt_idx(c), class.as_str(), format_sig9(modulus))?;
        }
    }
    let p = profile(&rho);
    let sums = [p.diag_mass, p.l_value, p.s_value];
    for (k, class) in classes.iter().enumerate() {
        writeln!(
            out,
            "# {}: {} elements, {} nonzero, modulus sum {}",
            class.as_str(),
            counts[k].0,
            counts[k].1,
            format_sig9(sums[k])
        )?;
    }
    Ok(())
}

fn cmd_remap(a: RemapArgs) -> consonance::Result<()> {
    let loaded = a.state.load()?;
    let rho = loaded.state.to_density();
    let rel = TpsRelabeling::named(&a.relabeling, rho.dims())?;
    let remapped = tps_remap(&rho, &rel)?;
    let (before, after) = (profile(&rho), profile(&remapped));
    let mut out = io::stdout().lock();
    writeln!(out, "dims {} -> {}", rel.source_dims(), rel.target_dims())?;
    writeln!(out, "before: nonlocal_sum = {}, local_coherence = {}", format_sig9(before.s_value), format_sig9(before.l_value))?;
    writeln!(out, "after: nonlocal_sum = {}, local_coherence = {}", format_sig9(after.s_value), format_sig9(after.l_value))?;
    if let Some(path) = &a.out {
        write_state_file(path, &AnyState::Density(remapped))?;
    }
    Ok(())
}
