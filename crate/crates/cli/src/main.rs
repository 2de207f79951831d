//! `mukai`: walls, singularity typing and example generation from JSON instances.

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mukai_core::families::{generate_example, ExampleSpec};
use mukai_core::report::{pipeline_classify, twist_of, wall_summary, walls_of, PipelineError, PipelineOptions, Report};
use mukai_core::roots::Family;
use mukai_core::schema::{self, mukai_to_json, rat_to_json, ParsedInstance, SchemaError};
use mukai_core::walls::{cross_wall, segment_crossings};

#[derive(Parser)]
#[command(name = "mukai", version, about = "Exact lattice computations for singular moduli of sheaves on K3 surfaces")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// List the wall set of (Pic, H, v).
    Walls { input: String },
    /// Validate and classify the supplied stratum; full report.
    Classify {
        input: String,
        #[arg(long)]
        skip_walls: bool,
        /// Input index of the mark-1 node to delete.
        #[arg(long)]
        delete_node: Option<usize>,
    },
    /// Generate and verify a lattice instance of the given affine type.
    Example {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        r: i64,
        #[arg(long, default_value_t = 1)]
        a: i64,
        /// Print only the instance, in the input format.
        #[arg(long)]
        instance_only: bool,
    },
    /// Locate a twist parameter against the walls.
    Chamber {
        input: String,
        #[arg(long)]
        alpha_file: String,
        #[arg(long)]
        skip_walls: bool,
    },
    /// Cross the wall with the given index: v' = R_u(v).
    Reflect {
        input: String,
        #[arg(long)]
        u_index: usize,
    },
    /// Write the exceptional-curve dual graph in DOT format ("-" for stdout).
    DualGraph {
        input: String,
        #[arg(long)]
        dot: String,
        #[arg(long)]
        delete_node: Option<usize>,
    },
}

enum CliError {
    Schema(String),
    Domain(String),
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        if e.is_schema() {
            CliError::Schema(e.to_string())
        } else {
            CliError::Domain(e.to_string())
        }
    }
}

/// Output plus whether the result itself signals a domain failure.
struct Output {
    body: String,
    domain_failure: bool,
}

fn read_input(path: &str) -> Result<String, CliError> {
    let mut text = String::new();
    if path == "-" {
        io::stdin().read_to_string(&mut text).map_err(|e| CliError::Schema(format!("cannot read stdin: {e}")))?;
    } else {
        text = fs::read_to_string(path).map_err(|e| CliError::Schema(format!("cannot read {path}: {e}")))?;
    }
    Ok(text)
}

fn load(path: &str) -> Result<ParsedInstance, CliError> {
    Ok(schema::parse_instance(&read_input(path)?)?)
}

fn pretty(v: &Value) -> String {
    schema::to_canonical_string(v)
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn report_output(report: &Report, format: Format) -> Output {
    let body = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    Output { body, domain_failure: report.validation_failed() }
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let format = cli.format;
    match cli.command {
        Command::Walls { input } => {
            let p = load(&input)?;
            let walls = walls_of(&p)?;
            let summary = wall_summary(&walls, &p.v);
            let body = match format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&summary).expect("serializable");
                    s.push('\n');
                    s
                }
                Format::Text => {
                    let mut s = format!("walls: {} (U': {})  generic polarization: {}\n", summary.count, summary.u_prime_count, summary.generic_polarization);
                    for w in &summary.walls {
                        s.push_str(&format!("  [{}] u = {}  <v,u> = {}\n", w.index, compact(&w.u), compact(&w.pairing_with_v)));
                    }
                    s
                }
            };
            Ok(Output { body, domain_failure: false })
        }
        Command::Classify { input, skip_walls, delete_node } => {
            let p = load(&input)?;
            let report = pipeline_classify(&p, &PipelineOptions { skip_walls, deleted_node: delete_node })?;
            Ok(report_output(&report, format))
        }
        Command::Example { family, n, r, a, instance_only } => {
            let family: Family = family.parse().map_err(CliError::Domain)?;
            let spec = ExampleSpec::new(family, n, r, a).map_err(|e| CliError::Domain(e.to_string()))?;
            let e = generate_example(&spec).map_err(|e| CliError::Domain(e.to_string()))?;
            let stratum = e.stratum();
            let parsed = ParsedInstance { lattice: e.lattice.clone(), h: e.h.clone(), v: e.v.clone(), strata: Some(stratum.strata), alpha_c1: None };
            let instance = schema::instance_to_value(&parsed);
            if instance_only {
                return Ok(Output { body: pretty(&instance), domain_failure: false });
            }
            let checks: Vec<Value> = e.verification.iter().map(|c| json!({"name": c.name, "holds": c.holds, "detail": c.detail})).collect();
            let body = match format {
                Format::Json => pretty(&json!({
                    "spec": {"family": family.to_string(), "n": n, "r": r, "a": a},
                    "affine_type": spec.type_name(),
                    "verification": checks,
                    "instance": instance,
                })),
                Format::Text => {
                    let mut s = format!("{} with r = {r}, a = {a}\n", spec.type_name());
                    for c in &e.verification {
                        s.push_str(&format!("  {:<26} {}  {}\n", c.name, if c.holds { "ok" } else { "FAILED" }, c.detail));
                    }
                    s
                }
            };
            Ok(Output { body, domain_failure: false })
        }
        Command::Chamber { input, alpha_file, skip_walls } => {
            let mut p = load(&input)?;
            let alpha_text = read_input(&alpha_file)?;
            p.alpha_c1 = Some(schema::parse_alpha(&alpha_text, p.lattice.rank())?);
            let report = pipeline_classify(&p, &PipelineOptions { skip_walls, deleted_node: None })?;
            let chamber = report.chamber.clone().expect("alpha supplied");
            let crossings: Vec<Value> = if skip_walls {
                Vec::new()
            } else {
                let walls = walls_of(&p)?;
                let alpha = twist_of(&p)?.expect("alpha supplied");
                segment_crossings(&alpha, &walls, &p.v)
                    .iter()
                    .map(|c| {
                        let index = walls.iter().position(|w| w == &c.wall).expect("wall from list");
                        json!({"index": index, "t": c.t.as_ref().map(rat_to_json)})
                    })
                    .collect()
            };
            let multi = chamber.on_walls.len() > 1;
            let body = match format {
                Format::Json => pretty(&json!({
                    "chamber": serde_json::to_value(&chamber).expect("serializable"),
                    "segment_crossings": crossings,
                    "multiple_walls": multi,
                })),
                Format::Text => {
                    let mut s = format!("alpha = {}\n  signs {:?}\n  on walls {:?}\n", compact(&chamber.alpha), chamber.signs, chamber.on_walls);
                    if let Some(w) = &chamber.weyl_word {
                        s.push_str(&format!("  weyl word {w}\n"));
                    }
                    s.push_str(&format!("  walls met by v + t alpha, 0 < t <= 1: {}\n", crossings.len()));
                    if multi {
                        s.push_str("  twist lies on several walls; the crossing side is undetermined\n");
                    }
                    s
                }
            };
            Ok(Output { body, domain_failure: false })
        }
        Command::Reflect { input, u_index } => {
            let p = load(&input)?;
            let walls = walls_of(&p)?;
            let w = walls.get(u_index).ok_or_else(|| CliError::Domain(format!("wall index {u_index} out of range (there are {} walls)", walls.len())))?;
            let crossing = cross_wall(&p.v, w).map_err(|e| CliError::Domain(e.to_string()))?;
            let value = json!({
                "u": mukai_to_json(w.u()),
                "pairing_with_v": rat_to_json(&p.v.pairing(w.u()).map_err(|e| CliError::Domain(e.to_string()))?),
                "v_prime": mukai_to_json(&crossing.v_prime),
                "v_prime_square": rat_to_json(&crossing.v_prime.square()),
                "note": crossing.note,
            });
            let body = match format {
                Format::Json => pretty(&value),
                Format::Text => format!("u = {}\nv' = {}\n<v',v'> = {}\n{}\n", w.u(), crossing.v_prime, crossing.v_prime.square(), crossing.note),
            };
            Ok(Output { body, domain_failure: false })
        }
        Command::DualGraph { input, dot, delete_node } => {
            let p = load(&input)?;
            let report = pipeline_classify(&p, &PipelineOptions { skip_walls: true, deleted_node: delete_node })?;
            if report.validation_failed() {
                return Ok(report_output(&report, format));
            }
            let s = report.singularity.as_ref().ok_or_else(|| CliError::Domain("no strata supplied".into()))?;
            let dot_text = s.dot.clone();
            if dot == "-" {
                return Ok(Output { body: dot_text, domain_failure: false });
            }
            fs::write(&dot, &dot_text).map_err(|e| CliError::Domain(format!("cannot write {dot}: {e}")))?;
            let body = match format {
                Format::Json => pretty(&json!({"finite_type": s.finite_type, "dot": dot, "dual_graph": serde_json::to_value(&s.dual_graph).expect("serializable")})),
                Format::Text => format!("{}: wrote {} nodes and {} edges to {dot}\n", s.finite_type, s.dual_graph.nodes.len(), s.dual_graph.edges.len()),
            };
            Ok(Output { body, domain_failure: false })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let _ = io::stdout().write_all(out.body.as_bytes());
            if out.domain_failure {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CliError::Schema(m)) => {
            eprintln!("{m}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
