//! The `gtpt` command line: every library operation behind one binary with
//! machine-readable JSON output.
//!
//! Exit codes: 0 on success, 1 on a negative isomorphism/cospectrality
//! verdict, 2 on usage errors (bad flags, malformed input, unsupported
//! model rows).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::blocks::block_matrix;
use crate::constructions::{
    alternate_clustering, build_nonnormal_model, pad_bipartite, procedure_1, procedure_2,
    BlockAssignment, TemplateAssignment,
};
use crate::enumeration::{enumerate_kappa, verify_pair, CountingMode, ModelId, ModelSpec};
use crate::graph::ClusteredGraph;
use crate::iso::are_isomorphic;
use crate::matrix::IntMatrix;
use crate::spectral::{approx_eigenvalues, are_cospectral, char_poly};
use crate::structure::{
    blocks_commuting_normal, certify_cospectral_by_blocks_with, commuting_condition,
    normality_condition, WitnessSearch,
};
use crate::transpose::partial_transpose;

#[derive(Parser)]
#[command(name = "gtpt", version, about = "clustered graphs, their partial transpose, and exact cospectrality certificates")]
pub struct Cli {
    /// Seed for the witness searches
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for enumeration (default: all cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args)]
pub struct InputArg {
    /// Input graph (JSON)
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
}

#[derive(Subcommand)]
pub enum Command {
    /// Apply the partial transpose
    Transpose {
        #[command(flatten)]
        input: InputArg,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit DOT instead of JSON
        #[arg(long)]
        dot: bool,
    },
    /// Exact characteristic polynomial and/or floating eigenvalues
    Spectrum {
        #[command(flatten)]
        input: InputArg,
        /// Print only the exact coefficient list
        #[arg(long, conflicts_with = "approx")]
        exact: bool,
        /// Print only the floating eigenvalues
        #[arg(long)]
        approx: bool,
    },
    /// Exact cospectrality check of two graphs
    Cospectral {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Isomorphism check of two graphs
    Iso {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Neighborhood-level and matrix-level commuting/normality verdicts
    Conditions {
        #[command(flatten)]
        input: InputArg,
    },
    /// Common similarity witness for the distinct adjacency blocks
    Witness {
        #[command(flatten)]
        input: InputArg,
    },
    /// Run one of the construction procedures
    Construct {
        /// 1 | 2 | altcluster | pad | thm7
        #[arg(long)]
        procedure: String,
        /// Input graph (JSON); for `pad` the parts format
        #[arg(long = "in", value_name = "FILE")]
        input: Option<PathBuf>,
        /// Procedure-specific configuration (JSON)
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Skip the commuting/normality precondition check
        #[arg(long)]
        waive_conditions: bool,
        #[arg(long)]
        dot: bool,
    },
    /// Full verdict on (G, G^tau)
    Verify {
        #[command(flatten)]
        input: InputArg,
    },
    /// Enumerate a model row and report kappa under all counting modes
    Enumerate {
        /// 1a | 1b | 2 | 3a | 3b | 3c | 4a | 4b | 4c
        #[arg(long)]
        model: String,
        /// Cluster size (defaults to 3 for models 3a-4c)
        #[arg(long)]
        m: Option<usize>,
        /// Cluster count (defaults to 2 for 1a/1b and 3 for model 2)
        #[arg(long)]
        n: Option<usize>,
        /// labeled | dedup-graph | dedup-pair
        #[arg(long, default_value = "dedup-graph")]
        mode: String,
        /// Append a CSV row (model, m, n, mode, kappa, scanned, seconds)
        #[arg(long)]
        report: Option<PathBuf>,
        /// Directory for the witness pairs as JSON graph files
        #[arg(long)]
        pairs: Option<PathBuf>,
    },
}

enum CliError {
    Usage(String),
    Negative,
}

impl From<crate::error::Error> for CliError {
    fn from(e: crate::error::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

pub fn run() -> i32 {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        // ignore failure when a pool already exists (tests, repeated init)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match dispatch(cli) {
        Ok(()) => 0,
        Err(CliError::Negative) => 1,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            2
        }
    }
}

fn read_graph(path: &Path) -> Result<ClusteredGraph, CliError> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn emit(out: &Option<PathBuf>, content: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, content)?,
        None => println!("{}", content.trim_end()),
    }
    Ok(())
}

fn graph_output(g: &ClusteredGraph, dot: bool) -> String {
    if dot {
        g.to_dot()
    } else {
        serde_json::to_string(g).expect("graph serializes") + "\n"
    }
}

fn dispatch(cli: Cli) -> CliResult {
    let search = WitnessSearch {
        seed: cli.seed,
        ..WitnessSearch::default()
    };
    match cli.command {
        Command::Transpose { input, out, dot } => {
            let g = read_graph(&input.input)?;
            emit(&out, &graph_output(&partial_transpose(&g), dot))
        }
        Command::Spectrum { input, exact, approx } => {
            let g = read_graph(&input.input)?;
            let value = if exact {
                json!({ "exact": exact_coefficients(&g) })
            } else if approx {
                json!({ "approx": approx_eigenvalues(&g) })
            } else {
                json!({
                    "exact": exact_coefficients(&g),
                    "approx": approx_eigenvalues(&g),
                })
            };
            println!("{value}");
            Ok(())
        }
        Command::Cospectral { a, b } => {
            let (ga, gb) = (read_graph(&a)?, read_graph(&b)?);
            let verdict = are_cospectral(&ga, &gb)?;
            println!("{}", json!({ "cospectral": verdict }));
            if verdict {
                Ok(())
            } else {
                Err(CliError::Negative)
            }
        }
        Command::Iso { a, b } => {
            let (ga, gb) = (read_graph(&a)?, read_graph(&b)?);
            let verdict = are_isomorphic(&ga, &gb);
            println!("{}", json!({ "isomorphic": verdict }));
            if verdict {
                Ok(())
            } else {
                Err(CliError::Negative)
            }
        }
        Command::Conditions { input } => {
            let g = read_graph(&input.input)?;
            let value = json!({
                "commuting": commuting_condition(&g),
                "normality": normality_condition(&g),
                "blocks_commuting_normal": blocks_commuting_normal(&block_matrix(&g)),
            });
            println!("{value}");
            Ok(())
        }
        Command::Witness { input } => {
            let g = read_graph(&input.input)?;
            match certify_cospectral_by_blocks_with(&g, &search) {
                Some(cert) => {
                    let value = json!({
                        "found": true,
                        "matrix": cert.witness.matrix.rows_display(),
                        "cospectral_confirmed": cert.cospectral_confirmed,
                    });
                    println!("{value}");
                    Ok(())
                }
                None => {
                    println!("{}", json!({ "found": false }));
                    Ok(())
                }
            }
        }
        Command::Construct {
            procedure,
            input,
            config,
            out,
            waive_conditions,
            dot,
        } => construct(procedure, input, config, out, waive_conditions, dot, &search),
        Command::Verify { input } => {
            let g = read_graph(&input.input)?;
            let verdict = verify_pair(&g);
            println!("{}", serde_json::to_string(&verdict)?);
            Ok(())
        }
        Command::Enumerate {
            model,
            m,
            n,
            mode,
            report,
            pairs,
        } => enumerate(model, m, n, mode, report, pairs),
    }
}

fn exact_coefficients(g: &ClusteredGraph) -> Vec<String> {
    char_poly(g)
        .coefficients_descending()
        .iter()
        .map(|c| c.to_string())
        .collect()
}

#[derive(Deserialize)]
struct PadInput {
    m1: usize,
    m2: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AssignmentSpec {
    Named(String),
    Copy { copy: (usize, usize) },
}

#[derive(Deserialize)]
struct Procedure1Config {
    choices: Vec<usize>,
    #[serde(default)]
    assignments: Vec<(usize, usize, AssignmentSpec)>,
}

#[derive(Deserialize)]
struct TemplateConfig {
    a: Vec<Vec<i64>>,
    n: usize,
    assignments: Vec<(usize, usize, String)>,
}

fn construct(
    procedure: String,
    input: Option<PathBuf>,
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    waive: bool,
    dot: bool,
    search: &WitnessSearch,
) -> CliResult {
    let need_input = |input: &Option<PathBuf>| -> Result<ClusteredGraph, CliError> {
        let path = input
            .as_ref()
            .ok_or_else(|| CliError::Usage("this procedure needs --in".into()))?;
        read_graph(path)
    };
    let read_config = |config: &Option<PathBuf>| -> Result<String, CliError> {
        let path = config
            .as_ref()
            .ok_or_else(|| CliError::Usage("this procedure needs --config".into()))?;
        Ok(fs::read_to_string(path)?)
    };
    match procedure.as_str() {
        "2" => {
            let g = need_input(&input)?;
            let h = procedure_2(&g, waive)?;
            emit(&out, &graph_output(&h, dot))
        }
        "altcluster" => {
            let g = need_input(&input)?;
            emit(&out, &graph_output(&alternate_clustering(&g), dot))
        }
        "pad" => {
            let path = input
                .as_ref()
                .ok_or_else(|| CliError::Usage("pad needs --in with {m1, m2, edges}".into()))?;
            let parts: PadInput = serde_json::from_str(&fs::read_to_string(path)?)?;
            let g = pad_bipartite(parts.m1, parts.m2, &parts.edges)?;
            emit(&out, &graph_output(&g, dot))
        }
        "1" => {
            let g = need_input(&input)?;
            let cfg: Procedure1Config = serde_json::from_str(&read_config(&config)?)?;
            let mut assignments = BTreeMap::new();
            for (p, q, spec) in cfg.assignments {
                let assignment = match spec {
                    AssignmentSpec::Named(name) => match name.as_str() {
                        "zero" | "0" => BlockAssignment::Zero,
                        "identity" | "I" => BlockAssignment::Identity,
                        other => {
                            return Err(CliError::Usage(format!(
                                "unknown block assignment: {other}"
                            )))
                        }
                    },
                    AssignmentSpec::Copy { copy } => BlockAssignment::CopyOf(copy.0, copy.1),
                };
                assignments.insert((p, q), assignment);
            }
            let h = procedure_1(&g, &cfg.choices, &assignments, waive)?;
            emit(&out, &graph_output(&h, dot))
        }
        "thm7" => {
            let cfg: TemplateConfig = serde_json::from_str(&read_config(&config)?)?;
            if cfg.a.iter().any(|row| row.len() != cfg.a.len()) {
                return Err(CliError::Usage("template matrix must be square".into()));
            }
            if cfg.a.iter().flatten().any(|&v| v != 0 && v != 1) {
                return Err(CliError::Usage("template matrix must be 0/1".into()));
            }
            let a = IntMatrix::from_rows(&cfg.a);
            let mut assignments = BTreeMap::new();
            for (i, j, name) in cfg.assignments {
                let assignment = match name.as_str() {
                    "a" | "A" => TemplateAssignment::Template,
                    "identity" | "I" => TemplateAssignment::Identity,
                    "zero" | "0" => TemplateAssignment::Zero,
                    other => {
                        return Err(CliError::Usage(format!("unknown assignment: {other}")))
                    }
                };
                assignments.insert((i, j), assignment);
            }
            let report = build_nonnormal_model(&a, cfg.n, &assignments, search)?;
            let value = json!({
                "cospectral": report.cospectral,
                "isomorphic": report.isomorphic,
                "degree_sequence": report.degree_sequence,
                "degree_sequence_transpose": report.degree_sequence_transpose,
                "certified": report.certificate.is_some(),
            });
            println!("{value}");
            emit(&out, &graph_output(&report.graph, dot))
        }
        other => Err(CliError::Usage(format!("unknown procedure: {other}"))),
    }
}

fn enumerate(
    model: String,
    m: Option<usize>,
    n: Option<usize>,
    mode: String,
    report_path: Option<PathBuf>,
    pairs_dir: Option<PathBuf>,
) -> CliResult {
    let model: ModelId = model.parse().map_err(CliError::Usage)?;
    let mode: CountingMode = mode.parse().map_err(CliError::Usage)?;
    let (m, n) = match model {
        ModelId::M1a | ModelId::M1b => (
            m.ok_or_else(|| CliError::Usage("this model needs --m".into()))?,
            n.unwrap_or(2),
        ),
        ModelId::M2 => (
            m.ok_or_else(|| CliError::Usage("this model needs --m".into()))?,
            n.unwrap_or(3),
        ),
        _ => (
            m.unwrap_or(3),
            n.ok_or_else(|| CliError::Usage("this model needs --n".into()))?,
        ),
    };
    let spec = ModelSpec::new(model, m, n, mode);
    let report = enumerate_kappa(&spec)?;
    let seconds = report.elapsed.as_secs_f64();
    let value = json!({
        "model": model.to_string(),
        "m": m,
        "n": n,
        "mode": mode.to_string(),
        "kappa": report.kappa,
        "kappa_labeled": report.kappa_labeled,
        "kappa_dedup_graph": report.kappa_dedup_graph,
        "kappa_dedup_pair": report.kappa_dedup_pair,
        "scanned": report.candidates_scanned,
        "seconds": seconds,
    });
    println!("{value}");
    if let Some(path) = &report_path {
        let mut csv = String::new();
        if !path.exists() {
            csv.push_str("model,m,n,mode,kappa,scanned,seconds\n");
        }
        csv.push_str(&format!(
            "{},{},{},{},{},{},{:.3}\n",
            model, m, n, mode, report.kappa, report.candidates_scanned, seconds
        ));
        let existing = if path.exists() {
            fs::read_to_string(path)?
        } else {
            String::new()
        };
        fs::write(path, existing + &csv)?;
    }
    if let Some(dir) = &pairs_dir {
        fs::create_dir_all(dir)?;
        for (idx, (g, t)) in report.pairs.iter().enumerate() {
            #[derive(Serialize)]
            struct PairFile<'a> {
                g: &'a ClusteredGraph,
                g_tau: &'a ClusteredGraph,
            }
            let content = serde_json::to_string(&PairFile { g, g_tau: t })?;
            fs::write(dir.join(format!("pair_{idx:04}.json")), content + "\n")?;
        }
    }
    Ok(())
}
