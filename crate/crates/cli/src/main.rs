use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hdx_core::cochain::DEFAULT_BUDGET;
use hdx_core::expansion::{
    cheeger_check, graph_edge_expansion_exact, spectral_expansion, z2_expansion_exact, z2_expansion_witness,
};
use hdx_core::harness::{self, CellSpec, PRule};
use hdx_core::random;
use hdx_core::spectral::{self, SpectrumReport};
use hdx_core::{
    ComplexFile, Error, Experiment, ExperimentConfig, ModelKind, ModelSpec, Result, SimplicialComplex, Z2Cochain,
};

#[derive(Parser)]
#[command(name = "hdx", version, about = "Spectra, expansion and random models of simplicial complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a complex and write it as JSON.
    Generate(ModelArgs),
    /// Eigenvalues of the top-dimensional operators, one CSV row each.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "normalized-up")]
        operator: Operator,
        /// Center of the adjacency cluster; defaults to the mean degree.
        #[arg(long)]
        d: Option<f64>,
    },
    /// GF(2) coboundary expansion, exact or through the planted cochain.
    Expansion {
        #[command(flatten)]
        model: ModelArgs,
        /// Dimension i of the expansion inequality; defaults to the top.
        #[arg(long)]
        dim: Option<i32>,
        /// Evaluate the planted cochain instead of enumerating classes.
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Check both sandwich theorems and the localization identities.
    Garland(ModelArgs),
    /// Run one of the experiment grids.
    Experiment {
        #[arg(value_parser = parse_experiment)]
        name: Experiment,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Operator {
    NormalizedUp,
    UpLaplacian,
    Adjacency,
}

/// A complex from `--input`, or a model from `--config` and inline flags.
#[derive(Args)]
struct ModelArgs {
    /// Complex JSON file to read instead of sampling.
    #[arg(long, conflicts_with = "config")]
    input: Option<PathBuf>,
    /// Model JSON (`{"model":..,"n":..,"k":..,"p":..,"q":..,"seed":..}`).
    #[arg(long)]
    config: Option<PathBuf>,
    /// gnp, linial-meshulam, counterexample-y or counterexample-z (aliases g, x, y, z).
    #[arg(long, value_parser = parse_model)]
    model: Option<ModelKind>,
    /// Number of vertices.
    #[arg(long)]
    n: Option<usize>,
    /// Top dimension.
    #[arg(long)]
    k: Option<i32>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Independent samples; trial t uses the derived seed of (seed, t).
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    /// Experiment JSON; inline flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_model)]
    model: Option<ModelKind>,
    /// Comma-separated grid axes; every combination of n, k, p and q is a cell.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    k: Vec<i32>,
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    q: Vec<f64>,
    /// Read each p as a multiplier c of ln(n)/n.
    #[arg(long)]
    log_p: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Enumeration budget for exact class norms.
    #[arg(long)]
    budget: Option<u64>,
    /// Largest operator order the golden experiment will diagonalize.
    #[arg(long)]
    max_order: Option<usize>,
    /// CSV output; the JSON sidecar is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
}

fn parse_model(s: &str) -> std::result::Result<ModelKind, String> {
    let name = match s.replace('-', "_").as_str() {
        "x" | "lm" => "linial_meshulam".to_string(),
        "y" => "counterexample_y".to_string(),
        "z" => "counterexample_z".to_string(),
        "g" => "gnp".to_string(),
        other => other.to_string(),
    };
    serde_json::from_value(serde_json::Value::String(name)).map_err(|e| e.to_string())
}

fn parse_experiment(s: &str) -> std::result::Result<Experiment, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// `(trial, spec, complex, planted cochain)`.
type Sampled = (usize, Option<ModelSpec>, SimplicialComplex, Option<Z2Cochain>);

enum Source {
    File(Box<SimplicialComplex>),
    Model(ModelSpec),
}

impl ModelArgs {
    fn source(&self) -> Result<Source> {
        if let Some(path) = &self.input {
            let file: ComplexFile = serde_json::from_reader(File::open(path)?)?;
            return Ok(Source::File(Box::new(SimplicialComplex::from_file(&file)?)));
        }
        let mut spec = match &self.config {
            Some(path) => serde_json::from_reader(File::open(path)?)?,
            None => ModelSpec { model: ModelKind::LinialMeshulam, n: 0, k: 2, p: 1.0, q: 0.0, seed: 0 },
        };
        if let Some(m) = self.model {
            spec.model = m;
        }
        if let Some(n) = self.n {
            spec.n = n;
        }
        if let Some(k) = self.k {
            spec.k = k;
        }
        if let Some(p) = self.p {
            spec.p = p;
        }
        if let Some(q) = self.q {
            spec.q = q;
        }
        if let Some(seed) = self.seed {
            spec.seed = seed;
        }
        if spec.n == 0 {
            return Err(Error::InvalidParameter("give --input, --config or --n".into()));
        }
        spec.validate()?;
        Ok(Source::Model(spec))
    }

    fn samples(&self) -> Result<Vec<Sampled>> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        match self.source()? {
            Source::File(x) => Ok(vec![(0, None, *x, None)]),
            Source::Model(spec) => (0..self.trials)
                .map(|t| {
                    let s =
                        if self.trials == 1 { spec.clone() } else { spec.with_seed(random::trial_seed(spec.seed, t)) };
                    let sample = random::generate(&s)?;
                    Ok((t, Some(s), sample.complex, sample.planted))
                })
                .collect(),
        }
    }

    fn writer(&self) -> Result<Box<dyn Write>> {
        open_out(self.out.as_deref())
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            Box::new(BufWriter::new(File::create(p)?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn generate(args: &ModelArgs) -> Result<()> {
    let samples = args.samples()?;
    let mut out = args.writer()?;
    for (_, spec, x, _) in samples {
        let mut file = x.to_file();
        file.model = spec;
        serde_json::to_writer(&mut out, &file)?;
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

fn spectrum(args: &ModelArgs, op: Operator, d: Option<f64>) -> Result<()> {
    let mut w = csv::Writer::from_writer(args.writer()?);
    w.write_record(SpectrumReport::CSV_HEADER)?;
    for (t, _, x, _) in args.samples()? {
        let report = match op {
            Operator::NormalizedUp => spectral::normalized_up_spectrum(&x, true)?,
            Operator::UpLaplacian => spectral::up_laplacian_spectrum(&x)?,
            Operator::Adjacency => spectral::adjacency_spectrum(&x, d.unwrap_or_else(|| spectral::mean_degree(&x)))?,
        };
        report.write_csv(&mut w, t)?;
    }
    w.flush()?;
    Ok(())
}

fn expansion(args: &ModelArgs, dim: Option<i32>, witness: bool, budget: u64) -> Result<()> {
    let mut out = args.writer()?;
    for (t, _, x, planted) in args.samples()? {
        let mut value = serde_json::json!({ "trial": t, "n": x.n(), "k": x.dim() });
        if witness {
            let a = planted.ok_or_else(|| {
                Error::InvalidParameter("--witness needs counterexample_y or counterexample_z".into())
            })?;
            let (report, class) = z2_expansion_witness(&x, &a, budget)?;
            value["witness"] = serde_json::to_value(&report)?;
            value["class_norm"] = serde_json::to_value(class.norm)?;
        } else {
            let i = dim.unwrap_or(x.dim());
            value["exact"] = serde_json::to_value(z2_expansion_exact(&x, i, budget)?)?;
        }
        if x.dim() >= 1 && x.has_complete_skeleton(x.dim() - 1) && x.is_pure() {
            value["spectral"] = serde_json::to_value(spectral_expansion(&x)?)?;
        }
        if x.dim() == 1 {
            value["edge_expansion"] = serde_json::to_value(graph_edge_expansion_exact(&x, budget)?)?;
            match cheeger_check(&x, budget) {
                Ok(r) => value["cheeger"] = serde_json::to_value(r)?,
                Err(Error::NotRegular | Error::Disconnected) => {}
                Err(e) => return Err(e),
            }
        }
        write_json(&mut out, &value)?;
    }
    out.flush()?;
    Ok(())
}

fn garland(args: &ModelArgs) -> Result<()> {
    let mut out = args.writer()?;
    let mut failed = Vec::new();
    for (t, spec, x, _) in args.samples()? {
        let mut file = x.to_file();
        file.model = spec;
        let mut rec = harness::audit_file(&file)?;
        rec.trial = t;
        if !rec.passed() {
            failed.push(t);
        }
        write_json(&mut out, &serde_json::to_value(&rec)?)?;
    }
    out.flush()?;
    if !failed.is_empty() {
        return Err(Error::TheoremViolation(format!("sandwich check failed in trials {failed:?}")));
    }
    Ok(())
}

fn experiment_config(name: Experiment, g: &GridArgs) -> Result<ExperimentConfig> {
    let mut c = match &g.config {
        Some(path) => {
            let c: ExperimentConfig = serde_json::from_reader(File::open(path)?)?;
            if c.experiment != name {
                return Err(Error::InvalidParameter(format!(
                    "config is for {}, not {}",
                    c.experiment.as_str(),
                    name.as_str()
                )));
            }
            c
        }
        None => ExperimentConfig::new(name),
    };
    if g.model.is_some() {
        c.model = g.model;
    }
    let explicit_grid = !g.n.is_empty() || !g.k.is_empty();
    if !g.n.is_empty() {
        c.n = g.n.clone();
    }
    if !g.k.is_empty() {
        c.k = g.k.clone();
    }
    if !g.p.is_empty() {
        c.p = g.p.clone();
    }
    if !g.q.is_empty() {
        c.q = g.q.clone();
    }
    if explicit_grid {
        c.cells = None::<Vec<CellSpec>>;
    }
    if g.log_p {
        c.p_rule = PRule::LogOverN;
    }
    if let Some(s) = g.seed {
        c.seed = s;
    }
    if let Some(t) = g.trials {
        c.trials = t;
    }
    if let Some(b) = g.budget {
        c.budget = b;
    }
    if let Some(m) = g.max_order {
        c.max_order = m;
    }
    if g.out.is_some() {
        c.output = g.out.clone();
    }
    if g.jobs.is_some() {
        c.jobs = g.jobs;
    }
    c.validate()?;
    Ok(c)
}

fn experiment(name: Experiment, g: &GridArgs) -> Result<ExitCode> {
    let config = experiment_config(name, g)?;
    let out = harness::run(&config)?;
    match &config.output {
        Some(path) => {
            let side = out.write_files(path)?;
            eprintln!("wrote {} and {}", path.display(), side.display());
        }
        None => out.write_csv(io::stdout().lock())?,
    }
    for s in &out.summaries {
        eprintln!(
            "cell {} ({} n={} k={} p={} q={}): {}/{} passed, {} skipped",
            s.cell,
            if name == Experiment::CompleteComplexGolden { "complete" } else { s.model.model.as_str() },
            s.model.n,
            s.model.k,
            s.model.p,
            s.model.q,
            s.passed,
            s.trials,
            s.skipped
        );
    }
    let refused = out.budget_refusals();
    if refused > 0 {
        eprintln!("{refused} record(s) skipped on a budget or solver cap");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Generate(args) => generate(args),
        Command::Spectrum { model, operator, d } => spectrum(model, *operator, *d),
        Command::Expansion { model, dim, witness, budget } => expansion(model, *dim, *witness, *budget),
        Command::Garland(args) => garland(args),
        Command::Experiment { name, grid } => return experiment(*name, grid),
    }
    .map(|()| ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    run(Cli::parse()).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(e.exit_code() as u8)
    })
}
