use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use bumg::bench::{load_corpus, run_cell, solved_counts, BenchRow};
use bumg::engine::{check_model, saturate, saturate_traced, Status, Strategy};
use bumg::tptp::{parse, parse_model, print_clauses, print_model, print_szs, Problem};
use bumg::transform::{apply_pipeline, Blocking, ConstantPolicy, PipelineConfig, RrVariant, TransformReport};

#[derive(Parser)]
#[command(name = "bumg", version, about = "Bottom-up model generation for first-order clauses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transform and saturate one problem.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[command(flatten)]
        limits: LimitArgs,
        /// Write the model here when the problem is satisfiable.
        #[arg(long)]
        model_out: Option<PathBuf>,
        /// Write search events here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Print the transformed clause set.
    Transform {
        file: PathBuf,
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Output file (default: standard output).
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Write the size report as CSV here (default: standard error).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run pipeline configurations over every `.p` file in a directory.
    Bench {
        dir: PathBuf,
        /// Comma-separated labels such as `rr,rr.blud,sh.crr.blsp`; `all` for the twenty standard ones.
        #[arg(long, default_value = "all")]
        configs: String,
        /// CSV output (default: standard output).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Directory for models of satisfiable cells.
        #[arg(long)]
        models: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Check a model file against a problem.
    CheckModel { model: PathBuf, problem: PathBuf },
}

#[derive(Args)]
struct PipelineArgs {
    /// Range restriction: `new` (rr), `classical` (crr) or none.
    #[arg(long, default_value = "new", value_parser = ["new", "classical", "none"])]
    rr: String,
    /// Partial flattening followed by basic shifting, before range restriction.
    #[arg(long)]
    shift: bool,
    /// Blocking: subterm domain, subterm predicate, unrestricted domain, unrestricted predicate.
    #[arg(long, default_value = "none", value_parser = ["none", "sd", "sp", "ud", "up"])]
    block: String,
    /// Domain constant: reuse the first input constant, or always a fresh one.
    #[arg(long = "const", default_value = "reuse", value_parser = ["reuse", "fresh"])]
    constant: String,
}

impl PipelineArgs {
    fn config(&self) -> Result<PipelineConfig> {
        let mut cfg = PipelineConfig::new(self.rr.parse::<RrVariant>()?, self.shift, self.block.parse::<Blocking>()?);
        if self.constant == "fresh" {
            cfg.constant_policy = ConstantPolicy::AlwaysFresh;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long, default_value_t = Strategy::default().max_steps)]
    max_steps: usize,
    #[arg(long, default_value_t = Strategy::default().max_depth)]
    max_depth: usize,
    /// Seconds.
    #[arg(long, default_value_t = Strategy::default().timeout.as_secs_f64())]
    timeout: f64,
}

impl LimitArgs {
    fn strategy(&self) -> Result<Strategy> {
        let timeout = Duration::try_from_secs_f64(self.timeout).context("invalid timeout")?;
        Ok(Strategy { max_steps: self.max_steps, max_depth: self.max_depth, timeout, ..Strategy::default() })
    }
}

fn read_problem(path: &Path) -> Result<Problem> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse(&text, &name).with_context(|| format!("parsing {}", path.display()))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn solve(
    file: &Path,
    cfg: PipelineConfig,
    strategy: &Strategy,
    model_out: Option<&Path>,
    trace: Option<&Path>,
) -> Result<ExitCode> {
    let problem = read_problem(file)?;
    let (transformed, _) = apply_pipeline(&problem, &cfg)?;
    let result = match trace {
        Some(path) => {
            let mut w = output(Some(path))?;
            let r = saturate_traced(&transformed, strategy, &mut w)?;
            w.flush()?;
            r
        }
        None => saturate(&transformed, strategy)?,
    };
    println!("{}", print_szs(result.status.szs(), &problem.name));
    let s = &result.stats;
    println!(
        "% pipeline {cfg} rules {} splits {} branches {} ms {}",
        s.rules,
        s.splits,
        s.branches,
        s.elapsed.as_millis()
    );
    if let Status::Satisfiable(m) = &result.status {
        match model_out {
            Some(path) => {
                std::fs::write(path, print_model(m)).with_context(|| format!("writing {}", path.display()))?
            }
            None => print!("{}", print_model(m)),
        }
    }
    Ok(match result.status {
        Status::Satisfiable(_) | Status::Unsatisfiable => ExitCode::SUCCESS,
        Status::Timeout | Status::GaveUp => ExitCode::from(2),
    })
}

fn transform(file: &Path, cfg: PipelineConfig, out: Option<&Path>, report: Option<&Path>) -> Result<ExitCode> {
    let problem = read_problem(file)?;
    let (transformed, rep) = apply_pipeline(&problem, &cfg)?;
    let mut w = output(out)?;
    w.write_all(print_clauses(&transformed).as_bytes())?;
    w.flush()?;
    let csv = format!("{}\n{}\n", TransformReport::CSV_HEADER, rep.csv_row());
    match report {
        Some(path) => std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?,
        None => eprint!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_configs(list: &str) -> Result<Vec<PipelineConfig>> {
    if list == "all" {
        return Ok(PipelineConfig::all());
    }
    let mut out = Vec::new();
    for label in list.split(',').map(str::trim).filter(|l| !l.is_empty()) {
        let cfg: PipelineConfig = label.parse()?;
        cfg.validate()?;
        out.push(cfg);
    }
    if out.is_empty() {
        bail!("no configurations given");
    }
    Ok(out)
}

fn bench(
    dir: &Path,
    configs: &str,
    csv: Option<&Path>,
    models: Option<&Path>,
    workers: usize,
    strategy: &Strategy,
) -> Result<ExitCode> {
    let configs = parse_configs(configs)?;
    let corpus = load_corpus(dir).with_context(|| format!("reading {}", dir.display()))?;
    if let Some(m) = models {
        std::fs::create_dir_all(m).with_context(|| format!("creating {}", m.display()))?;
    }
    let cells: Vec<(usize, PipelineConfig)> =
        (0..corpus.len()).flat_map(|i| configs.iter().map(move |c| (i, *c))).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
    let model_errors = Mutex::new(Vec::new());
    let rows: Vec<BenchRow> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(i, cfg)| {
                let (path, parsed) = &corpus[i];
                match parsed {
                    Ok(problem) => {
                        let (row, model) = run_cell(problem, &cfg, strategy);
                        if let (Some(dir), Some(m)) = (models, model) {
                            let file = dir.join(format!("{}.{}.model", row.problem, row.pipeline));
                            if let Err(e) = std::fs::write(&file, print_model(&m)) {
                                model_errors.lock().unwrap().push(format!("{}: {e}", file.display()));
                            }
                        }
                        row
                    }
                    Err(e) => BenchRow {
                        problem: path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
                        pipeline: cfg.label(),
                        status: bumg::bench::BenchStatus::Error,
                        ms: 0,
                        rules: 0,
                        splits: 0,
                        domain: None,
                        error: Some(e.clone()),
                    },
                }
            })
            .collect()
    });
    for e in model_errors.into_inner().unwrap() {
        eprintln!("error: {e}");
    }
    for r in rows.iter().filter_map(|r| r.error.as_ref().map(|e| (r, e))) {
        eprintln!("error: {} {}: {}", r.0.problem, r.0.pipeline, r.1);
    }
    let to_stdout = csv.is_none();
    let mut w = csv::Writer::from_writer(output(csv)?);
    w.write_record(BenchRow::HEADER)?;
    for r in &rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    drop(w);
    let mut out = std::io::stdout().lock();
    if to_stdout {
        writeln!(out)?;
    }
    writeln!(out, "% solved per pipeline ({} problems)", corpus.len())?;
    for (label, n) in solved_counts(&rows) {
        writeln!(out, "% {label} {n}")?;
    }
    Ok(ExitCode::SUCCESS)
}

fn check(model: &Path, problem: &Path) -> Result<ExitCode> {
    let text = std::fs::read_to_string(model).with_context(|| format!("reading {}", model.display()))?;
    let m = parse_model(&text).with_context(|| format!("parsing {}", model.display()))?;
    let p = read_problem(problem)?;
    Ok(match check_model(&m, &p.clauses) {
        Ok(()) => {
            println!("% model satisfies {}", p.name);
            ExitCode::SUCCESS
        }
        Err(v) => {
            println!("% model does not satisfy {}: {v}", p.name);
            ExitCode::from(1)
        }
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve { file, pipeline, limits, model_out, trace } => {
            solve(&file, pipeline.config()?, &limits.strategy()?, model_out.as_deref(), trace.as_deref())
        }
        Command::Transform { file, pipeline, out, report } => {
            transform(&file, pipeline.config()?, out.as_deref(), report.as_deref())
        }
        Command::Bench { dir, configs, csv, models, workers, limits } => {
            bench(&dir, &configs, csv.as_deref(), models.as_deref(), workers, &limits.strategy()?)
        }
        Command::CheckModel { model, problem } => check(&model, &problem),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
