//! The `simgadget` command line.
//!
//! Every subcommand reads JSON from a file or stdin and writes JSON (or SVG)
//! to stdout or `--out`. Exit status 0 means success or "valid", 1 means a
//! checker rejected its input, 2 means a usage or format error; errors are
//! printed to stdout as `{"error": code, "detail": ...}`.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cert::{certificate_report, construct_certificate, min_crossings_witness, CertError, CrossingStructure, SizeLimits};
use crate::drawing::{construct_drawing, decode_solution, verify_drawing, DrawingError, GridDrawing};
use crate::gracsim::{reduce_gracsim, GadgetIndex};
use crate::graph::{EdgeKey, EdgeLabel, SefeInstance};
use crate::ksefe::{expand_to_k, reduce_1sefe, wheel_instance, KSefeGadgetIndex};
use crate::svg::{certificate_svg, drawing_svg, SvgError};
use crate::threep::{
    generate_yes_instance, solution_issues, solve_brute_force_capped, validate_instance, ThreePartitionInstance,
    ThreePartitionSolution, DEFAULT_SOLVER_CAP,
};

/// Overrides the size limits of the brute-force searches.
pub const SIZE_CAP_ENV: &str = "SIMGADGET_SIZE_CAP";

#[derive(Parser, Debug)]
#[command(name = "simgadget", version, about = "3-Partition gadget reductions for simultaneous graph drawing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Output path; stdout if omitted or "-".
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a yes-instance of 3-Partition with a planted solution.
    #[command(name = "gen-3p")]
    Gen3p {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        b: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        solution_out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Solve a 3-Partition instance exactly.
    #[command(name = "solve-3p")]
    Solve3p {
        input: Option<PathBuf>,
        /// Largest |A| accepted by the solver.
        #[arg(long)]
        size_cap: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Validate an instance and optionally check a solution against it.
    #[command(name = "verify-3p")]
    Verify3p {
        input: Option<PathBuf>,
        #[arg(long)]
        solution: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Reduce 3-Partition to a simultaneous right-angle-crossing instance.
    ReduceGracsim {
        input: Option<PathBuf>,
        #[arg(long)]
        index_out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Build the grid drawing of a reduced instance from a solution.
    DrawGracsim {
        input: Option<PathBuf>,
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Check a grid drawing and list its crossings.
    VerifyDrawing {
        input: Option<PathBuf>,
        #[arg(long)]
        drawing: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Read a 3-partition back from a valid drawing.
    DecodeDrawing {
        input: Option<PathBuf>,
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        drawing: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Reduce 3-Partition to a 1-SEFE instance.
    #[command(name = "reduce-1sefe")]
    Reduce1sefe {
        input: Option<PathBuf>,
        #[arg(long)]
        index_out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Replace tunnel edges by k parallel paths.
    ExpandK {
        input: Option<PathBuf>,
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        index_out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Build a crossing certificate for a reduced 1-SEFE or k-SEFE instance.
    MakeCert {
        input: Option<PathBuf>,
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Check a crossing certificate.
    VerifyCert {
        input: Option<PathBuf>,
        #[arg(long)]
        cert: PathBuf,
        /// Crossing cap; defaults to the certificate's own k.
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Emit the wheel instance separating k-SEFE from (k+1)-SEFE.
    Wheel {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Exhaustive minimum number of crossings on one private edge.
    MinCrossings {
        input: Option<PathBuf>,
        /// Edge key "u-v-label".
        #[arg(long)]
        edge: EdgeKey,
        #[arg(long)]
        cap: usize,
        /// Largest number of private edges accepted.
        #[arg(long)]
        size_cap: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Render a drawing or a certificate schematic as SVG.
    EmitSvg {
        input: Option<PathBuf>,
        #[arg(long, conflicts_with = "cert", required_unless_present = "cert")]
        drawing: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Vertical stretch factor, at least 1.
        #[arg(long, default_value_t = 1)]
        stretch: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Vertex and edge counts of an instance.
    Counts {
        input: Option<PathBuf>,
        /// Also report per-layer counts.
        #[arg(long)]
        layers: bool,
    },
}

#[derive(Debug)]
struct CliError {
    exit: i32,
    code: String,
    detail: String,
}

impl CliError {
    fn usage(code: &str, detail: impl ToString) -> Self {
        CliError { exit: 2, code: code.to_string(), detail: detail.to_string() }
    }

    fn rejected(code: &str, detail: impl ToString) -> Self {
        CliError { exit: 1, code: code.to_string(), detail: detail.to_string() }
    }
}

impl From<DrawingError> for CliError {
    fn from(e: DrawingError) -> Self {
        let code = match &e {
            DrawingError::UnmappedVertex(_) => "UnmappedVertex",
            DrawingError::SolutionMismatch(_) => return CliError::rejected("SolutionMismatch", e),
            DrawingError::Index(_) | DrawingError::IndexMismatch(_) => "IndexMismatch",
            DrawingError::InvalidDrawing(_) => return CliError::rejected("InvalidDrawing", e),
            DrawingError::MalformedDrawing(_) => return CliError::rejected("MalformedDrawing", e),
        };
        CliError::usage(code, e)
    }
}

impl From<CertError> for CliError {
    fn from(e: CertError) -> Self {
        let code = match &e {
            CertError::UnknownEdge(_) => "UnknownEdge",
            CertError::InconsistentStructure(_) => "InconsistentStructure",
            CertError::SolutionMismatch(_) => return CliError::rejected("SolutionMismatch", e),
            CertError::IndexMismatch(_) => "IndexMismatch",
            CertError::SizeLimitExceeded { .. } => "SizeLimitExceeded",
        };
        CliError::usage(code, e)
    }
}

impl From<SvgError> for CliError {
    fn from(e: SvgError) -> Self {
        match e {
            SvgError::UnsupportedMode(_) => CliError::usage("UnsupportedMode", e),
            SvgError::Drawing(d) => d.into(),
            SvgError::Cert(c) => c.into(),
        }
    }
}

type CmdResult = Result<i32, CliError>;

fn read_text(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| CliError::usage("io", format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| CliError::usage("io", e))?;
            Ok(s)
        }
    }
}

fn load<T: DeserializeOwned>(path: Option<&Path>) -> Result<T, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| {
        let name = path.map(|p| p.display().to_string()).unwrap_or_else(|| "stdin".into());
        CliError::usage("parse", format!("{name}: {e}"))
    })
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::write(p, text).map_err(|e| CliError::usage("io", format!("{}: {e}", p.display())))
        }
        _ => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::usage("io", e))
        }
    }
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::usage("serialize", e))?;
    text.push('\n');
    write_text(path, &text)
}

fn env_size_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(SIZE_CAP_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::usage("usage", format!("{SIZE_CAP_ENV} must be a positive integer, got {v:?}"))),
        },
    }
}

#[derive(Deserialize)]
struct RawThreePartition {
    #[serde(rename = "B")]
    bound: u64,
    #[serde(rename = "A")]
    values: Vec<u64>,
}

fn load_3p(path: Option<&Path>) -> Result<ThreePartitionInstance, CliError> {
    let raw: RawThreePartition = load(path)?;
    validate_instance(raw.bound, raw.values).map_err(|e| {
        CliError::usage("InvalidInstance", serde_json::to_string(&e.violations).unwrap_or_else(|_| e.to_string()))
    })
}

fn out_path(o: &Output) -> Option<&Path> {
    o.out.as_deref()
}

fn dispatch(command: Command) -> CmdResult {
    match command {
        Command::Gen3p { m, b, seed, solution_out, output } => {
            let (inst, sol) = generate_yes_instance(m, b, seed).map_err(|e| CliError::usage("InfeasibleParameters", e))?;
            log::info!("generated m={m} B={b} seed={seed}");
            write_json(out_path(&output), &inst)?;
            if let Some(p) = solution_out {
                write_json(Some(&p), &sol)?;
            }
            Ok(0)
        }
        Command::Solve3p { input, size_cap, output } => {
            let inst = load_3p(input.as_deref())?;
            let cap = match size_cap {
                Some(c) => c,
                None => env_size_cap()?.unwrap_or(DEFAULT_SOLVER_CAP),
            };
            match solve_brute_force_capped(&inst, cap).map_err(|e| CliError::usage("SizeLimitExceeded", e))? {
                Some(sol) => {
                    write_json(out_path(&output), &sol)?;
                    Ok(0)
                }
                None => {
                    write_json(out_path(&output), &serde_json::Value::Null)?;
                    Ok(1)
                }
            }
        }
        Command::Verify3p { input, solution, output } => {
            let raw: RawThreePartition = load(input.as_deref())?;
            let inst = match validate_instance(raw.bound, raw.values) {
                Ok(inst) => inst,
                Err(e) => {
                    write_json(out_path(&output), &json!({"valid": false, "violations": e.violations}))?;
                    return Ok(1);
                }
            };
            let issues = match solution {
                Some(p) => {
                    let sol: ThreePartitionSolution = load(Some(&p))?;
                    solution_issues(&inst, &sol)
                }
                None => Vec::new(),
            };
            let valid = issues.is_empty();
            write_json(out_path(&output), &json!({"valid": valid, "violations": [], "solution_issues": issues}))?;
            Ok(if valid { 0 } else { 1 })
        }
        Command::ReduceGracsim { input, index_out, output } => {
            let src = load_3p(input.as_deref())?;
            let (inst, index) = reduce_gracsim(&src);
            log::info!("reduced to {} vertices, {} edges", inst.vertex_count(), inst.edge_count());
            write_json(out_path(&output), &inst)?;
            if let Some(p) = index_out {
                write_json(Some(&p), &index)?;
            }
            Ok(0)
        }
        Command::DrawGracsim { input, index, solution, output } => {
            let inst: SefeInstance = load(input.as_deref())?;
            let index: GadgetIndex = load(Some(&index))?;
            let sol: ThreePartitionSolution = load(Some(&solution))?;
            let d = construct_drawing(&inst, &index, &sol)?;
            write_json(out_path(&output), &d)?;
            Ok(0)
        }
        Command::VerifyDrawing { input, drawing, output } => {
            let inst: SefeInstance = load(input.as_deref())?;
            let d: GridDrawing = load(Some(&drawing))?;
            let report = verify_drawing(&inst, &d)?;
            write_json(out_path(&output), &report)?;
            Ok(if report.valid { 0 } else { 1 })
        }
        Command::DecodeDrawing { input, index, drawing, output } => {
            let inst: SefeInstance = load(input.as_deref())?;
            let index: GadgetIndex = load(Some(&index))?;
            let d: GridDrawing = load(Some(&drawing))?;
            let sol = decode_solution(&inst, &index, &d)?;
            write_json(out_path(&output), &sol)?;
            Ok(0)
        }
        Command::Reduce1sefe { input, index_out, output } => {
            let src = load_3p(input.as_deref())?;
            let (inst, index) = reduce_1sefe(&src);
            write_json(out_path(&output), &inst)?;
            if let Some(p) = index_out {
                write_json(Some(&p), &index)?;
            }
            Ok(0)
        }
        Command::ExpandK { input, index, k, index_out, output } => {
            let inst: SefeInstance = load(input.as_deref())?;
            let index: KSefeGadgetIndex = load(Some(&index))?;
            let (big, idx) = expand_to_k(&inst, &index, k).map_err(|e| CliError::usage("NotAReducedInstance", e))?;
            write_json(out_path(&output), &big)?;
            if let Some(p) = index_out {
                write_json(Some(&p), &idx)?;
            }
            Ok(0)
        }
        Command::MakeCert { input, index, solution, output } => {
            let inst: SefeInstance = load(input.as_deref())?;
            let index: KSefeGadgetIndex = load(Some(&index))?;
            let sol: ThreePartitionSolution = load(Some(&solution))?;
            let cs = construct_certificate(&inst, &index, &sol)?;
            write_json(out_path(&output), &cs)?;
            Ok(0)
        }
        Command::VerifyCert { input, cert, k, output } => {
            let inst: SefeInstance = load(input.as_deref())?;
            let cs: CrossingStructure = load(Some(&cert))?;
            let report = certificate_report(&inst, &cs, k.unwrap_or(cs.k))?;
            write_json(out_path(&output), &report)?;
            Ok(if report.valid { 0 } else { 1 })
        }
        Command::Wheel { k, output } => {
            if k == 0 {
                return Err(CliError::usage("usage", "k must be at least 1"));
            }
            write_json(out_path(&output), &wheel_instance(k))?;
            Ok(0)
        }
        Command::MinCrossings { input, edge, cap, size_cap, output } => {
            let inst: SefeInstance = load(input.as_deref())?;
            let mut limits = SizeLimits::default();
            if let Some(n) = size_cap.map(Some).unwrap_or(env_size_cap()?) {
                limits.max_private_edges = n;
            }
            let found = min_crossings_witness(&inst, &edge, cap, limits)?;
            let (min, witness) = match found {
                Some((c, cs)) => (Some(c), Some(cs)),
                None => (None, None),
            };
            write_json(out_path(&output), &json!({"edge": edge, "cap": cap, "min": min, "witness": witness}))?;
            Ok(if min.is_some() { 0 } else { 1 })
        }
        Command::EmitSvg { input, drawing, cert, stretch, output } => {
            if stretch < 1 {
                return Err(CliError::usage("UnsupportedMode", "stretch must be at least 1"));
            }
            let inst: SefeInstance = load(input.as_deref())?;
            let svg = match (drawing, cert) {
                (Some(d), None) => drawing_svg(&inst, &load(Some(&d))?, stretch)?,
                (None, Some(c)) => certificate_svg(&inst, &load(Some(&c))?, stretch)?,
                _ => return Err(CliError::usage("UnsupportedMode", "give exactly one of --drawing and --cert")),
            };
            write_text(out_path(&output), &svg)?;
            Ok(0)
        }
        Command::Counts { input, layers } => {
            let inst: SefeInstance = load(input.as_deref())?;
            let mut out = serde_json::Map::new();
            out.insert("vertices".into(), inst.vertex_count().into());
            out.insert("edges".into(), inst.edge_count().into());
            if layers {
                for label in [EdgeLabel::Shared, EdgeLabel::Private1, EdgeLabel::Private2] {
                    out.insert(format!("{label}_edges"), inst.count_label(label).into());
                }
                out.insert("isolated_in_shared".into(), inst.isolated_in(|l| l == EdgeLabel::Shared).into());
            }
            write_json(None, &out)?;
            Ok(0)
        }
    }
}

/// Runs the command line on `argv` (program name first) and returns the
/// process exit status.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .try_init();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let detail = e.render().to_string();
            println!("{}", json!({"error": "usage", "detail": detail.trim_end()}));
            return 2;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            log::debug!("{} failed: {}", err.code, err.detail);
            println!("{}", json!({"error": err.code, "detail": err.detail}));
            err.exit
        }
    }
}
