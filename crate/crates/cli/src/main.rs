use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use f2orders::cones::{enumerate_extensions, Mode, PartialCone};
use f2orders::dynreal::{ClassAtlas, Stage};
use f2orders::group::F2Group;
use f2orders::homeo::fmt_q;
use f2orders::isolation::{
    class_census, nonisolation_sweep, witness_nonisolation, BasicOpenSet, NonIsolationCertificate, SweepParams,
};
use f2orders::magnus::{ClassOracle, Magnus, SignOracle};
use f2orders::transform::OrderDescriptor;
use f2orders::word::FreeWord;
use f2orders::wreath::{axiom_suite, gap_elimination_check, Lamplighter, Wreath, WreathBase};
use f2orders::{verify, Error};

const DEFAULT_SEED: u64 = 20240607;

#[derive(Parser)]
#[command(name = "f2orders", version, about = "Exact computations with bi-orderings of the free group F2")]
struct Cli {
    /// `magnus`, `magnus-swapped`, a descriptor JSON file, or inline descriptor JSON.
    #[arg(long, global = true, default_value = "magnus")]
    order: String,
    /// Initial Magnus truncation degree (overrides the descriptor).
    #[arg(long, global = true)]
    degree: Option<u32>,
    /// Largest truncation degree before giving up (overrides the descriptor).
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Instance {
    F2Magnus,
    Lamplighter,
}

#[derive(Args)]
struct ConeArgs {
    #[arg(long, value_parser = word, value_delimiter = ',')]
    positives: Vec<FreeWord>,
    #[arg(long, value_parser = word, value_delimiter = ',')]
    negatives: Vec<FreeWord>,
    #[arg(long)]
    length: usize,
    /// Conjugator length bound; defaults to --length.
    #[arg(long)]
    conj: Option<usize>,
    #[arg(long, default_value = "bi", value_parser = mode)]
    mode: Mode,
}

#[derive(Subcommand)]
enum Command {
    /// Sign of a word: `+` or `-`.
    Sign {
        #[arg(value_parser = word)]
        word: FreeWord,
    },
    /// Compare two words: `<`, `=` or `>`.
    Cmp {
        #[arg(value_parser = word)]
        u: FreeWord,
        #[arg(value_parser = word)]
        v: FreeWord,
    },
    /// Archimedean comparison: `<<`, `~~` or `>>`.
    Arch {
        #[arg(value_parser = word)]
        u: FreeWord,
        #[arg(value_parser = word)]
        v: FreeWord,
    },
    /// Saturate a finite set of sign constraints.
    Saturate {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count the complete consistent sign tables extending the constraints.
    Census {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find a second order satisfying the constraints that differs from Magnus.
    Witness {
        #[arg(long, value_parser = word, value_delimiter = ',', required = true)]
        positives: Vec<FreeWord>,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        conj: Option<usize>,
        #[arg(long, default_value_t = 64)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate with the independent verifier.
    Verify { cert: PathBuf },
    /// Certify every basic open set up to the given size.
    Sweep {
        #[arg(long)]
        max_constraints: usize,
        #[arg(long)]
        max_word_length: usize,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        conj: Option<usize>,
        #[arg(long, default_value_t = 64)]
        budget: usize,
        /// Skip the independent verifier.
        #[arg(long)]
        no_verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Embed a ball of the group in Q and realize elements as PL maps.
    Dynreal {
        #[arg(long)]
        elements: usize,
        #[arg(long, default_value_t = 3)]
        tau_length: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// SVG plot of the realization of --word.
        #[arg(long, requires = "word")]
        plot: Option<PathBuf>,
        #[arg(long, value_parser = word)]
        word: Option<FreeWord>,
    },
    /// Axiom sampling and gap elimination on an ordered wreath product.
    WreathDemo {
        #[arg(long, value_enum)]
        instance: Instance,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        n_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Archimedean classes of the words up to a length.
    ClassCensus {
        #[arg(long, default_value_t = 4)]
        length: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn word(s: &str) -> Result<FreeWord, Error> {
    s.parse()
}

fn mode(s: &str) -> Result<Mode, Error> {
    s.parse()
}

#[derive(Debug)]
enum Failure {
    /// Bad input; exit code 2.
    Usage(String),
    /// A computation ran and failed; exit code 1.
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Parse(_) | Error::InvalidDescriptor(_) | Error::IdentityInput | Error::InvalidMap(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Failed(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Failed(e.to_string())
    }
}

/// Everything needed to rerun a command, embedded in every artifact.
#[derive(Serialize, Default)]
struct RunConfig {
    command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<OrderDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    length_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conj_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    budget: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    outputs: Vec<String>,
    params: Value,
}

impl RunConfig {
    fn new(command: &str) -> RunConfig {
        RunConfig { command: command.to_string(), params: json!({}), ..RunConfig::default() }
    }

    fn output(mut self, p: &Option<PathBuf>) -> RunConfig {
        if let Some(p) = p {
            self.outputs.push(p.display().to_string());
        }
        self
    }
}

fn descriptor(cli: &Cli) -> Result<OrderDescriptor, Failure> {
    let spec = cli.order.trim();
    let mut d = if spec.starts_with('{') || spec == "magnus" || spec == "magnus-swapped" {
        OrderDescriptor::parse_spec(spec)?
    } else {
        let text = fs::read_to_string(spec).map_err(|e| Failure::Usage(format!("--order {spec}: {e}")))?;
        OrderDescriptor::parse_spec(&text)?
    };
    if let Some(deg) = cli.degree {
        d.degree = deg;
    }
    if let Some(max) = cli.max_degree {
        d.max_degree = max;
    }
    Ok(d)
}

fn write_out(out: &Option<PathBuf>, body: &str, summary: &str) -> Result<(), Failure> {
    match out {
        Some(p) => {
            fs::write(p, body)?;
            say(summary);
        }
        None => say(body),
    }
    Ok(())
}

/// Writes a line to stdout, ignoring a closed pipe.
fn say(s: &str) {
    let _ = writeln!(std::io::stdout(), "{s}");
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// Serializes `value` and adds the run config as a `config` field.
fn with_config<T: Serialize>(config: &RunConfig, value: &T) -> Value {
    let mut v = serde_json::to_value(value).expect("serializable");
    if let Value::Object(m) = &mut v {
        m.insert("config".into(), serde_json::to_value(config).expect("serializable"));
    }
    v
}

fn format_or(cli: &Cli, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = cli.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::Usage(format!("--format {f:?} is not supported by this command").to_lowercase()))
    }
}

fn signed(pairs: Vec<(FreeWord, f2orders::magnus::Sign)>) -> Vec<Value> {
    pairs.into_iter().map(|(w, s)| json!({ "word": w, "sign": s })).collect()
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Sign { word } => {
            let d = descriptor(cli)?;
            let o = d.build()?;
            let (leading, sign) = o.evaluate(word)?;
            match format_or(cli, Format::Text, &[Format::Text, Format::Json])? {
                Format::Json => {
                    let config = RunConfig { order: Some(d), ..RunConfig::new("sign") };
                    say(&to_json(&json!({ "word": word, "sign": sign, "leading": leading, "config": config })));
                }
                _ => say(&sign.to_string()),
            }
        }
        Command::Cmp { u, v } => {
            let d = descriptor(cli)?;
            let o = d.build()?;
            let rel = match o.compare(u, v)? {
                std::cmp::Ordering::Less => "<",
                std::cmp::Ordering::Equal => "=",
                std::cmp::Ordering::Greater => ">",
            };
            match format_or(cli, Format::Text, &[Format::Text, Format::Json])? {
                Format::Json => {
                    let config = RunConfig { order: Some(d), ..RunConfig::new("cmp") };
                    say(&to_json(&json!({ "u": u, "v": v, "relation": rel, "config": config })));
                }
                _ => say(rel),
            }
        }
        Command::Arch { u, v } => {
            let d = descriptor(cli)?;
            let o = d.build()?;
            let rel = o.arch_cmp(u, v)?;
            match format_or(cli, Format::Text, &[Format::Text, Format::Json])? {
                Format::Json => {
                    let config = RunConfig { order: Some(d), ..RunConfig::new("arch") };
                    let body = json!({
                        "u": u,
                        "v": v,
                        "class_u": o.arch_class(u)?,
                        "class_v": o.arch_class(v)?,
                        "relation": rel.to_string(),
                        "config": config,
                    });
                    say(&to_json(&body));
                }
                _ => say(&rel.to_string()),
            }
        }
        Command::Saturate { cone, out } => {
            format_or(cli, Format::Json, &[Format::Json])?;
            let (c, config) = cone_input(cone, "saturate")?;
            let config = config.output(out);
            let (sat, report) = c.saturate();
            let body = json!({
                "config": config,
                "outcome": report.outcome,
                "assignments": signed(sat.assignments()),
                "derivations": report.derived,
                "contradiction": report.contradiction,
                "exhausted": false,
            });
            let summary = format!("{:?}: {} new facts", report.outcome, report.derived.len());
            write_out(out, &to_json(&body), &summary)?;
            if let Some(c) = &report.contradiction {
                return Err(Failure::Failed(format!("contradiction at {}", c.word)));
            }
        }
        Command::Census { cone, budget, out } => {
            format_or(cli, Format::Json, &[Format::Json])?;
            let (c, config) = cone_input(cone, "census")?;
            let config = RunConfig { budget: Some(*budget), ..config }.output(out);
            let census = enumerate_extensions(&c, *budget);
            let completions: Vec<Vec<FreeWord>> = census.completions.iter().map(PartialCone::positives).collect();
            let body = json!({
                "config": config,
                "count": census.completions.len(),
                "nodes": census.nodes,
                "exhausted": census.exhausted,
                "completions": completions,
            });
            write_out(out, &to_json(&body), &format!("{} completions", census.completions.len()))?;
        }
        Command::Witness { positives, length, conj, budget, out } => {
            format_or(cli, Format::Json, &[Format::Json])?;
            let u = BasicOpenSet::new(positives.clone())?;
            let conj = conj.unwrap_or(*length);
            let config = RunConfig {
                length_bound: Some(*length),
                conj_bound: Some(conj),
                budget: Some(*budget),
                params: json!({ "positives": positives }),
                ..RunConfig::new("witness")
            }
            .output(out);
            let cert = witness_nonisolation(&u, *length, conj, *budget)?;
            let summary = format!("{} via {} at {}", cert.alternative.label(), json!(cert.method), cert.witness_word);
            write_out(out, &to_json(&with_config(&config, &cert)), &summary)?;
        }
        Command::Verify { cert } => {
            let text = fs::read_to_string(cert)?;
            let parsed: NonIsolationCertificate =
                serde_json::from_str(&text).map_err(|e| Failure::Failed(format!("malformed certificate: {e}")))?;
            let report = verify::verify(&parsed);
            say(&to_json(&report));
            if !report.valid {
                return Err(Failure::Failed("certificate rejected".into()));
            }
        }
        Command::Sweep { max_constraints, max_word_length, length, conj, budget, no_verify, out } => {
            let f = format_or(cli, Format::Json, &[Format::Json, Format::Csv])?;
            let mut p = SweepParams::new(*max_constraints, *max_word_length, *length);
            p.conj_bound = conj.unwrap_or(*length);
            p.budget = *budget;
            p.verify = !no_verify;
            let config = RunConfig {
                length_bound: Some(p.length_bound),
                conj_bound: Some(p.conj_bound),
                budget: Some(p.budget),
                params: json!({ "max_constraints": max_constraints, "max_word_length": max_word_length, "verify": p.verify }),
                ..RunConfig::new("sweep")
            }
            .output(out);
            let report = nonisolation_sweep(p)?;
            let body = match f {
                Format::Csv => sweep_csv(&report),
                _ => to_json(&with_config(&config, &report)),
            };
            let verified = report.verified.map_or("-".to_string(), |v| v.to_string());
            let summary = format!(
                "certified {} (structured {}, cone search {}), verified {verified}",
                report.success_rate(),
                report.structured,
                report.cone_search
            );
            write_out(out, &body, &summary)?;
            if report.certified < report.total || report.verified.is_some_and(|v| v < report.certified) {
                return Err(Failure::Failed(summary));
            }
        }
        Command::Dynreal { elements, tau_length, out, plot, word } => {
            let f = format_or(cli, Format::Json, &[Format::Json, Format::Csv])?;
            let d = descriptor(cli)?;
            let o = d.build()?;
            let stage = Stage::build(&o, *elements)?;
            let atlas = ClassAtlas::build(&o, *tau_length)?;
            let realized = match word {
                Some(g) => Some(stage.realize(g)?),
                None => None,
            };
            if let (Some(path), Some(g), Some(map)) = (plot, word, &realized) {
                fs::write(path, map.to_svg(&format!("realization of {g}")))?;
            }
            let config = RunConfig {
                order: Some(d),
                length_bound: Some(*tau_length),
                params: json!({ "elements": elements, "word": word }),
                ..RunConfig::new("dynreal")
            }
            .output(out)
            .output(plot);
            let body = match f {
                Format::Csv => {
                    let mut s = String::from("word,t\n");
                    for e in stage.embedding() {
                        s.push_str(&format!("{},{}\n", e.word, fmt_q(&e.value)));
                    }
                    s
                }
                _ => {
                    let tau: Vec<Value> = atlas
                        .entries
                        .iter()
                        .map(|e| {
                            json!({
                                "class": e.class.leading,
                                "representative": e.representative,
                                "address": e.gap.address,
                                "endpoints": [fmt_q(&e.gap.left), fmt_q(&e.gap.right)],
                            })
                        })
                        .collect();
                    let body = json!({
                        "config": config,
                        "order": o.label(),
                        "N": stage.len(),
                        "t": stage.embedding(),
                        "tau": tau,
                        "realization": realized.as_ref().map(|m| json!({ "word": word, "map": m })),
                    });
                    to_json(&body)
                }
            };
            write_out(out, &body, &format!("stage of {} elements, {} classes", stage.len(), atlas.entries.len()))?;
        }
        Command::WreathDemo { instance, samples, seed, n_max, out } => {
            format_or(cli, Format::Json, &[Format::Json])?;
            let config = RunConfig {
                samples: Some(*samples),
                seed: Some(*seed),
                params: json!({ "instance": instance.to_possible_value().map(|v| v.get_name().to_string()), "n_max": n_max }),
                ..RunConfig::new("wreath-demo")
            }
            .output(out);
            let (body, passed) = match instance {
                Instance::F2Magnus => wreath_demo(Wreath::new(F2Group::new(Magnus::new())), *samples, *seed, *n_max)?,
                Instance::Lamplighter => wreath_demo(Wreath::new(Lamplighter), *samples, *seed, *n_max)?,
            };
            let body = with_config(&config, &body);
            write_out(out, &to_json(&body), if passed { "passed" } else { "FAILED" })?;
            if !passed {
                return Err(Failure::Failed("wreath checks failed".into()));
            }
        }
        Command::ClassCensus { length, out } => {
            let f = format_or(cli, Format::Json, &[Format::Json, Format::Csv])?;
            let d = descriptor(cli)?;
            let o = d.build()?;
            let classes = class_census(&o, *length)?;
            let body = match f {
                Format::Csv => {
                    let mut s = String::from("class,representative,count\n");
                    for (c, w, n) in &classes {
                        s.push_str(&format!("{c},{w},{n}\n"));
                    }
                    s
                }
                _ => {
                    let rows: Vec<Value> = classes
                        .iter()
                        .map(|(c, w, n)| json!({ "class": c.leading, "representative": w, "count": n }))
                        .collect();
                    let config =
                        RunConfig { order: Some(d), length_bound: Some(*length), ..RunConfig::new("class-census") }
                            .output(out);
                    to_json(&json!({ "config": config, "classes": rows }))
                }
            };
            write_out(out, &body, &format!("{} classes", classes.len()))?;
        }
    }
    Ok(())
}

fn cone_input(a: &ConeArgs, command: &str) -> Result<(PartialCone, RunConfig), Failure> {
    let conj = a.conj.unwrap_or(a.length);
    let c = PartialCone::with_constraints(a.length, conj, a.mode, &a.positives, &a.negatives)?;
    let config = RunConfig {
        length_bound: Some(a.length),
        conj_bound: Some(conj),
        params: json!({ "positives": a.positives, "negatives": a.negatives, "mode": a.mode }),
        ..RunConfig::new(command)
    };
    Ok((c, config))
}

fn wreath_demo<B: WreathBase>(g: Wreath<B>, samples: usize, seed: u64, n_max: u32) -> Result<(Value, bool), Failure> {
    let axioms = axiom_suite(&g, samples, seed)?;
    let gap = gap_elimination_check(&g, n_max, seed)?;
    let passed = axioms.passed() && gap.passed();
    Ok((json!({ "instance": g.base.name(), "axioms": axioms, "gap": gap, "passed": passed }), passed))
}

fn sweep_csv(r: &f2orders::isolation::SweepReport) -> String {
    let mut s = String::from("constraints,method,alternative,witness,verified\n");
    for e in &r.entries {
        let (method, alt, wit) = match &e.certificate {
            Some(c) => (json!(c.method).as_str().unwrap_or("").to_string(), c.alternative.label(), c.witness_word.to_string()),
            None => ("not-found".to_string(), String::new(), String::new()),
        };
        let verified = e.verified.map_or(String::new(), |v| v.to_string());
        s.push_str(&format!("\"{}\",{method},\"{alt}\",{wit},{verified}\n", e.constraints));
    }
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Failed(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
