//! Command-line front end. `run` parses arguments, dispatches, writes to
//! the given streams and returns the process exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::canonical::{decide_model_limit, Verdict};
use crate::error::{Error, Result};
use crate::formula::{parse, Formula};
use crate::frame_limit::{decide_frame_limit_with, EmbedCheck, FrameConfig};
use crate::kripke::{find_embedding, EmbedConfig, ModelDocument, PointedModel, DEFAULT_BUDGET, DEFAULT_RETRIES};
use crate::prover::gl_valid;
use crate::sampling::{
    estimate_frame_validity_with_budget, estimate_model_validity, sample_kr_frame, write_estimates_csv, Estimate,
    SamplerConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 3;
pub const EXIT_UNKNOWN: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "glkr",
    version,
    about = "Provability logic on random three-layer partial orders"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "human")]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Almost-sure model validity via the canonical model.
    DecideModel { formula: String },
    /// Almost-sure frame validity via shaped counter-model search.
    DecideFrame {
        formula: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Sampled frame size and number of seeds (1..=SEEDS) the witness
        /// must embed into.
        #[arg(long, num_args = 2, value_names = ["N", "SEEDS"])]
        embed_check: Option<Vec<u64>>,
    },
    /// GL validity by tableau.
    Gl { formula: String },
    /// Sample a random three-layer frame.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimate of model or frame validity.
    Estimate(EstimateArgs),
    /// Embed a shaped pointed counter-model into a frame.
    Embed {
        #[arg(long)]
        counter: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RETRIES)]
        retries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EstimateKind {
    Model,
    Frame,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(value_enum)]
    pub kind: EstimateKind,
    pub formula: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Falsification budget per sampled frame.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
}

/// Runs with the process's stdout and stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        pool = pool.num_threads(j.max(1));
    }
    let mut buf = Vec::new();
    let result = match pool.build() {
        Ok(pool) => pool.install(|| dispatch(&cli, &mut buf)),
        Err(e) => Err(Error::InvalidConfig(e.to_string())),
    };
    let _ = out.write_all(&buf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_resource() {
                EXIT_UNKNOWN
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn read_formula(text: &str) -> Result<Formula> {
    Ok(parse(text)?)
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::LimitOne => EXIT_OK,
        Verdict::LimitZero => EXIT_NEGATIVE,
    }
}

fn emit_json(out: &mut dyn Write, value: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string(value)?)?;
    Ok(())
}

fn doc_value(doc: &ModelDocument) -> Value {
    serde_json::to_value(doc).expect("documents serialize")
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::DecideModel { formula } => decide_model(cli.format, &read_formula(formula)?, out),
        Command::DecideFrame {
            formula,
            budget,
            embed_check,
        } => {
            let embed_check = match embed_check.as_deref() {
                Some([n, seeds]) => Some(EmbedCheck {
                    n: *n as usize,
                    seeds: (1..=*seeds).collect(),
                    retries: DEFAULT_RETRIES,
                }),
                _ => Some(EmbedCheck::default()),
            };
            let cfg = FrameConfig {
                budget: *budget,
                embed_check,
            };
            decide_frame(cli.format, &read_formula(formula)?, &cfg, out)
        }
        Command::Gl { formula } => gl(cli.format, &read_formula(formula)?, out),
        Command::Sample { n, seed, out: path } => {
            let frame = sample_kr_frame(&SamplerConfig::new(*n, *seed))?;
            let doc = ModelDocument::from_frame(frame.frame());
            match path {
                Some(p) => doc.write(p)?,
                None => match cli.format {
                    Format::Csv => {
                        writeln!(out, "u,v")?;
                        for [u, v] in &doc.edges {
                            writeln!(out, "{u},{v}")?;
                        }
                    }
                    _ => writeln!(out, "{}", doc.to_json())?,
                },
            }
            Ok(EXIT_OK)
        }
        Command::Estimate(args) => estimate(cli.format, args, out),
        Command::Embed {
            counter,
            target,
            retries,
            seed,
        } => {
            let counter = ModelDocument::read(counter)?.to_pointed()?;
            let target = ModelDocument::read(target)?.to_layered_frame()?;
            embed(
                cli.format,
                &counter,
                &target,
                EmbedConfig {
                    retries: *retries,
                    seed: *seed,
                },
                out,
            )
        }
    }
}

fn decide_model(format: Format, f: &Formula, out: &mut dyn Write) -> Result<i32> {
    let d = decide_model_limit(f)?;
    let c = &d.canonical;
    match format {
        Format::Human => {
            writeln!(out, "{}", d.verdict.as_str())?;
            if let Some(w) = d.witness {
                writeln!(out, "fails at world {w} ({})", c.world_name(w))?;
                let pointed = PointedModel {
                    model: c.model.clone(),
                    point: w,
                };
                writeln!(out, "{}", ModelDocument::from_pointed(&pointed).to_json())?;
            }
        }
        Format::Json => {
            let mut v = json!({ "verdict": d.verdict.as_str(), "formula": f.to_string() });
            if let Some(w) = d.witness {
                let pointed = PointedModel {
                    model: c.model.clone(),
                    point: w,
                };
                v["witness_world"] = json!(w);
                v["witness_name"] = json!(c.world_name(w));
                v["model"] = doc_value(&ModelDocument::from_pointed(&pointed));
            }
            emit_json(out, &v)?;
        }
        Format::Csv => {
            writeln!(out, "formula,verdict,witness")?;
            let w = d.witness.map(|w| w.to_string()).unwrap_or_default();
            writeln!(out, "\"{}\",{},{w}", f, d.verdict.as_str())?;
        }
    }
    Ok(verdict_code(d.verdict))
}

fn decide_frame(format: Format, f: &Formula, cfg: &FrameConfig, out: &mut dyn Write) -> Result<i32> {
    let d = decide_frame_limit_with(f, cfg)?;
    let doc = d.witness.as_ref().map(ModelDocument::from_pointed);
    let shape = d.shape.map(|s| s.letter().to_string());
    match format {
        Format::Human => {
            writeln!(out, "{}", d.verdict.as_str())?;
            if let (Some(doc), Some(shape)) = (&doc, &shape) {
                writeln!(out, "counter-model of shape {shape} with {} worlds", doc.n)?;
                writeln!(out, "{}", doc.to_json())?;
            }
            let c = &d.certificate;
            writeln!(
                out,
                "searched {} partitions; witness bound {} worlds (stated bound {}); exhausted: {}",
                c.partitions, c.witness_bound, c.stated_bound, c.exhausted
            )?;
            if let Some(e) = c.embed {
                writeln!(out, "embedded into {} of {} sampled frames", e.successes, e.attempts)?;
            }
        }
        Format::Json => {
            let mut v = json!({
                "verdict": d.verdict.as_str(),
                "formula": f.to_string(),
                "certificate": serde_json::to_value(&d.certificate)?,
            });
            if let (Some(doc), Some(shape)) = (&doc, &shape) {
                v["shape"] = json!(shape);
                v["witness"] = doc_value(doc);
            }
            emit_json(out, &v)?;
        }
        Format::Csv => {
            writeln!(out, "formula,verdict,shape,witness_worlds")?;
            let worlds = doc.as_ref().map(|d| d.n.to_string()).unwrap_or_default();
            writeln!(
                out,
                "\"{}\",{},{},{worlds}",
                f,
                d.verdict.as_str(),
                shape.unwrap_or_default()
            )?;
        }
    }
    Ok(verdict_code(d.verdict))
}

fn gl(format: Format, f: &Formula, out: &mut dyn Write) -> Result<i32> {
    let r = gl_valid(f);
    let word = if r.valid { "valid" } else { "invalid" };
    let doc = r.counter_model.as_ref().map(ModelDocument::from_pointed);
    match format {
        Format::Human => {
            writeln!(out, "{word}")?;
            if let Some(doc) = &doc {
                writeln!(out, "{}", doc.to_json())?;
            }
        }
        Format::Json => {
            let mut v = json!({ "result": word, "formula": f.to_string() });
            if let Some(doc) = &doc {
                v["counter_model"] = doc_value(doc);
            }
            emit_json(out, &v)?;
        }
        Format::Csv => {
            writeln!(out, "formula,result")?;
            writeln!(out, "\"{f}\",{word}")?;
        }
    }
    Ok(if r.valid { EXIT_OK } else { EXIT_NEGATIVE })
}

fn estimate(format: Format, args: &EstimateArgs, out: &mut dyn Write) -> Result<i32> {
    let f = read_formula(&args.formula)?;
    let cfg = SamplerConfig::new(args.n, args.seed);
    let e: Estimate = match args.kind {
        EstimateKind::Model => estimate_model_validity(&f, &cfg, args.samples)?,
        EstimateKind::Frame => estimate_frame_validity_with_budget(&f, &cfg, args.samples, args.budget)?,
    };
    if let Some(path) = &args.csv {
        write_estimates_csv(std::fs::File::create(path)?, std::slice::from_ref(&e))?;
    }
    match format {
        Format::Human => writeln!(
            out,
            "{} of {}: {:.4} ({} of {} samples, {} unknown; n={}, seed={})",
            e.target.as_str(),
            e.formula,
            e.frequency,
            e.successes,
            e.samples,
            e.unknown_count,
            e.n,
            e.seed
        )?,
        Format::Json => emit_json(out, &serde_json::to_value(&e)?)?,
        Format::Csv => write_estimates_csv(&mut *out, std::slice::from_ref(&e))?,
    }
    Ok(EXIT_OK)
}

fn embed(
    format: Format,
    counter: &PointedModel,
    target: &crate::kripke::LayeredFrame,
    cfg: EmbedConfig,
    out: &mut dyn Write,
) -> Result<i32> {
    let found = find_embedding(counter, target, cfg)?;
    let Some(e) = found else {
        match format {
            Format::Json => emit_json(out, &json!({ "embedded": false }))?,
            Format::Csv => writeln!(out, "source,target")?,
            Format::Human => writeln!(out, "no embedding found in {} attempts", cfg.retries)?,
        }
        return Ok(EXIT_NEGATIVE);
    };
    let model = e.target_model(target);
    let doc = ModelDocument::from_pointed(&PointedModel { model, point: e.root });
    match format {
        Format::Human => {
            writeln!(out, "embedded at world {} with {} pairs", e.root, e.witness.pairs.len())?;
            writeln!(out, "{}", doc.to_json())?;
        }
        Format::Json => emit_json(
            out,
            &json!({ "embedded": true, "root": e.root, "pairs": e.witness.pairs, "model": doc_value(&doc) }),
        )?,
        Format::Csv => {
            writeln!(out, "source,target")?;
            for (s, t) in &e.witness.pairs {
                writeln!(out, "{s},{t}")?;
            }
        }
    }
    Ok(EXIT_OK)
}
