//! The `cipscan` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 fatal input error, 3 when the
//! command completed but some inputs were skipped (unparseable Java files or
//! constraint rows).

pub mod config;
mod render;

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use cipscan_core::catalog::{builtin_catalog, pattern_by_name, Cip, CipPattern};
use cipscan_core::clones::{clone_summary, group, CloneSummary, Consistency};
use cipscan_core::constraint::{load_constraints, ConstraintFormat, ConstraintRecord};
use cipscan_core::dataflow::{def_at, forward_slice, DefKind};
use cipscan_core::detectors::{orchestrate, DetectOptions, DetectionReport};
use cipscan_core::frontend::statements_of;
use cipscan_core::matcher::{match_all, match_properties_roots, sort_instances};
use cipscan_core::report::{pattern_distribution, type_distribution, Axis};
use cipscan_core::trace::{
    assemble_trace, descend_enforcing, links_from_report, parse_links, resolve_data_definitions, LinksFile,
    Predicate, Provenance, TraceLink,
};
use cipscan_core::{Diagnostic, Error, Program};

use config::{FileConfig, Format, Overrides, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "cipscan", version, about = "Find data-constraint implementation patterns in Java code")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Config file (default: ./cipscan.toml when present)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// System label for links and tables
    #[arg(long, global = true)]
    system: Option<String>,
    /// Interprocedural hop limit for slicing
    #[arg(long, global = true)]
    depth: Option<u32>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the pattern catalog
    Catalog,
    /// List pattern instances
    Match {
        #[arg(required = true)]
        roots: Vec<PathBuf>,
        /// Restrict to this pattern (repeatable)
        #[arg(long = "pattern")]
        patterns: Vec<String>,
    },
    /// Forward slice from a definition
    Slice {
        #[arg(required = true)]
        roots: Vec<PathBuf>,
        /// Definition as `file:line[:kind[:symbol]]`
        #[arg(long)]
        seed: String,
    },
    /// Run detectors for every constraint
    Detect {
        #[arg(required = true)]
        roots: Vec<PathBuf>,
        /// Constraint records (JSON or CSV)
        #[arg(long)]
        constraints: Option<PathBuf>,
        /// Candidate cap per constraint
        #[arg(long)]
        cap: Option<usize>,
        /// Sampling seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Classify constraints by type
    Classify {
        /// Constraint records (JSON or CSV)
        #[arg(long)]
        constraints: Option<PathBuf>,
    },
    /// Build trace links, from detectors or from one manual site
    Trace {
        #[arg(required = true)]
        roots: Vec<PathBuf>,
        /// Constraint records; with --at, only their seeds are used
        #[arg(long)]
        constraints: Option<PathBuf>,
        /// Manual site as `file:line`
        #[arg(long, requires_all = ["pattern", "id"])]
        at: Option<String>,
        /// Pattern of the manual site
        #[arg(long)]
        pattern: Option<String>,
        /// Constraint id for a manual link
        #[arg(long)]
        id: Option<String>,
        /// Candidate cap per constraint
        #[arg(long)]
        cap: Option<usize>,
        /// Sampling seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Group links per constraint and classify clone pairs
    Clones {
        /// Trace links file
        #[arg(long)]
        links: PathBuf,
    },
    /// Distribution table by pattern or constraint type
    Report {
        /// Trace links file
        #[arg(long)]
        links: Option<PathBuf>,
        /// Constraint records (JSON or CSV)
        #[arg(long)]
        constraints: Option<PathBuf>,
        /// `pattern` or `constraint-type`
        #[arg(long, default_value = "pattern")]
        by: String,
    },
}

enum Failure {
    Usage(String),
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.into())
    }
}

/// Rendered output plus notes for the diagnostic stream.
struct Outcome {
    text: String,
    diagnostics: Vec<String>,
    skipped_inputs: bool,
}

impl Outcome {
    fn new(text: String) -> Outcome {
        Outcome {
            text,
            diagnostics: Vec::new(),
            skipped_inputs: false,
        }
    }
}

/// Run the command line `argv` (including the program name).
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    let out_path = cli.global.out.clone();
    match execute(cli) {
        Ok(outcome) => {
            for d in &outcome.diagnostics {
                let _ = writeln!(err, "{d}");
            }
            let written = match &out_path {
                Some(p) => std::fs::write(p, &outcome.text).with_context(|| format!("writing {}", p.display())),
                None => out.write_all(outcome.text.as_bytes()).context("writing output"),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e:#}");
                return 2;
            }
            if outcome.skipped_inputs {
                3
            } else {
                0
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nFor more information, try '--help'.");
            1
        }
        Err(Failure::Input(e)) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn execute(cli: Cli) -> Result<Outcome, Failure> {
    let file = FileConfig::load(cli.global.config.as_deref())?;
    let (cap, seed, constraints) = match &cli.command {
        Command::Detect {
            cap, seed, constraints, ..
        }
        | Command::Trace {
            cap, seed, constraints, ..
        } => (*cap, *seed, constraints.clone()),
        Command::Classify { constraints } | Command::Report { constraints, .. } => (None, None, constraints.clone()),
        _ => (None, None, None),
    };
    let flags = Overrides {
        depth: cli.global.depth,
        cap,
        seed,
        format: cli.global.format,
        system: cli.global.system.clone(),
        constraints,
    };
    let cfg = RunConfig::resolve(flags, file).map_err(Failure::Usage)?;
    match cli.command {
        Command::Catalog => Ok(Outcome::new(catalog(&cfg))),
        Command::Match { roots, patterns } => match_cmd(&cfg, &roots, &patterns),
        Command::Slice { roots, seed } => slice(&cfg, &roots, &seed),
        Command::Detect { roots, .. } => detect(&cfg, &roots),
        Command::Classify { .. } => classify(&cfg),
        Command::Trace {
            roots, at, pattern, id, ..
        } => match at {
            Some(at) => trace_manual(&cfg, &roots, &at, pattern.as_deref().unwrap_or_default(), &id.unwrap_or_default()),
            None => trace_detected(&cfg, &roots),
        },
        Command::Clones { links } => clones(&cfg, &links),
        Command::Report { links, by, .. } => report(&cfg, links.as_deref(), &by),
    }
}

fn color_enabled() -> bool {
    std::env::var_os("CIPSCAN_NO_COLOR").is_none()
}

fn tabular(cfg: &RunConfig, header: &[&str], rows: &[Vec<String>]) -> String {
    match cfg.format {
        Format::Table => render::table(header, rows, color_enabled()),
        _ => render::csv(header, rows),
    }
}

fn load_program(roots: &[PathBuf]) -> Result<(Program, Outcome), Failure> {
    let program = Program::load(roots)?;
    let mut notes = Outcome::new(String::new());
    for f in &program.corpus.parse_failures {
        notes.diagnostics.push(f.diagnostic().to_string());
        notes.skipped_inputs = true;
    }
    for w in &program.symbols.warnings {
        notes.diagnostics.push(format!("warning: {w}"));
    }
    Ok((program, notes))
}

fn load_records(cfg: &RunConfig, notes: &mut Outcome) -> Result<Vec<ConstraintRecord>, Failure> {
    let path = cfg
        .constraints
        .as_deref()
        .ok_or_else(|| Failure::Usage("--constraints FILE is required".into()))?;
    let loaded = load_constraints(path, ConstraintFormat::from_path(path))?;
    for d in &loaded.diagnostics {
        notes.diagnostics.push(d.to_string());
        notes.skipped_inputs = true;
    }
    Ok(loaded.records)
}

fn lookup_pattern(name: &str) -> Result<&'static CipPattern, Failure> {
    pattern_by_name(name).ok_or_else(|| Failure::Usage(format!("unknown pattern `{name}`")))
}

#[derive(Serialize)]
struct CatalogOut<'a> {
    schema_version: &'static str,
    patterns: &'a [CipPattern],
}

fn catalog(cfg: &RunConfig) -> String {
    let patterns = builtin_catalog();
    if cfg.format == Format::Json {
        return render::json(&CatalogOut {
            schema_version: "1",
            patterns,
        });
    }
    let rows: Vec<Vec<String>> = patterns
        .iter()
        .map(|p| {
            vec![
                p.name.to_string(),
                p.statement_type.to_string(),
                p.parts.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
                p.detector_arity.to_string(),
                p.frequency_class.as_str().to_string(),
            ]
        })
        .collect();
    tabular(cfg, &["name", "statement_type", "parts", "detector_arity", "frequency_class"], &rows)
}

#[derive(Serialize)]
struct MatchOut<'a, T: Serialize> {
    schema_version: &'static str,
    instances: &'a [T],
}

fn match_cmd(cfg: &RunConfig, roots: &[PathBuf], names: &[String]) -> Result<Outcome, Failure> {
    let patterns: Vec<&'static CipPattern> = if names.is_empty() {
        builtin_catalog().iter().collect()
    } else {
        names.iter().map(|n| lookup_pattern(n)).collect::<Result<_, _>>()?
    };
    let (program, mut outcome) = load_program(roots)?;
    let structural: Vec<&CipPattern> = patterns.iter().copied().filter(|p| p.id != Cip::PropertiesFile).collect();
    let mut instances = match_all(&program.corpus, &structural, &program.symbols);
    if patterns.iter().any(|p| p.id == Cip::PropertiesFile) {
        instances.extend(match_properties_roots(roots)?);
        sort_instances(&mut instances);
    }
    outcome.text = if cfg.format == Format::Json {
        render::json(&MatchOut {
            schema_version: "1",
            instances: &instances,
        })
    } else {
        let rows: Vec<Vec<String>> = instances
            .iter()
            .map(|i| {
                vec![
                    i.pattern.name().to_string(),
                    i.path.clone(),
                    i.line.to_string(),
                    i.column.to_string(),
                    i.binding.0.iter().map(|p| p.text.as_str()).collect::<Vec<_>>().join(" | "),
                    i.statement_text.clone(),
                ]
            })
            .collect();
        tabular(cfg, &["pattern", "file", "line", "column", "parts", "text"], &rows)
    };
    Ok(outcome)
}

fn slice(cfg: &RunConfig, roots: &[PathBuf], seed: &str) -> Result<Outcome, Failure> {
    let mut it = seed.splitn(4, ':');
    let file = it.next().unwrap_or_default();
    let line: u32 = it
        .next()
        .and_then(|l| l.parse().ok())
        .ok_or_else(|| Failure::Usage(format!("--seed `{seed}`: expected file:line[:kind[:symbol]]")))?;
    let kind = match it.next() {
        Some(k) => Some(DefKind::parse(k).ok_or_else(|| Failure::Usage(format!("unknown definition kind `{k}`")))?),
        None => None,
    };
    let symbol = it.next();
    let (program, mut outcome) = load_program(roots)?;
    let fid = program
        .corpus
        .find_file(file)
        .ok_or_else(|| anyhow!("seed file `{file}` is not in the corpus"))?;
    let def = def_at(&program.corpus, &program.symbols, fid, line, kind, symbol)
        .ok_or_else(|| Error::UnknownSeed(seed.to_string()))?;
    let view = forward_slice(&program.defuse, &def, cfg.depth)?.view(&program.corpus, &program.symbols);
    outcome.text = if cfg.format == Format::Json {
        render::json(&view)
    } else {
        let rows: Vec<Vec<String>> = view
            .reached
            .iter()
            .map(|r| vec![r.file.clone(), r.line.to_string(), r.column.to_string(), r.hops.to_string(), r.text.clone()])
            .collect();
        tabular(cfg, &["file", "line", "column", "hops", "text"], &rows)
    };
    Ok(outcome)
}

/// Reports for every constraint that names a detector-backed pattern and has
/// seeds. Others are noted and skipped.
fn run_detectors(
    cfg: &RunConfig,
    program: &Program,
    records: &[ConstraintRecord],
    notes: &mut Outcome,
) -> Result<Vec<DetectionReport>, Failure> {
    let options = DetectOptions {
        depth: cfg.depth,
        cap: cfg.cap,
        sample_seed: cfg.seed,
    };
    let mut reports = Vec::new();
    for r in records {
        let Some(name) = r.manual_pattern.as_deref() else {
            notes.diagnostics.push(format!("note: {}: no manual pattern, skipped", r.id));
            continue;
        };
        let pattern = pattern_by_name(name).ok_or_else(|| Error::UnknownPattern(name.to_string()))?;
        match orchestrate(program, r, pattern, options) {
            Ok(rep) => reports.push(rep),
            Err(e @ (Error::NoDetector(_) | Error::NoSeeds(_))) => {
                notes.diagnostics.push(format!("note: {}: {e}, skipped", r.id));
            }
            Err(e) => return Err(anyhow::Error::from(e).context(format!("constraint {}", r.id)).into()),
        }
    }
    Ok(reports)
}

#[derive(Serialize)]
struct DetectOut<'a> {
    schema_version: &'static str,
    reports: &'a [DetectionReport],
}

fn detect(cfg: &RunConfig, roots: &[PathBuf]) -> Result<Outcome, Failure> {
    let (program, mut outcome) = load_program(roots)?;
    let records = load_records(cfg, &mut outcome)?;
    let reports = run_detectors(cfg, &program, &records, &mut outcome)?;
    outcome.text = if cfg.format == Format::Json {
        render::json(&DetectOut {
            schema_version: "1",
            reports: &reports,
        })
    } else {
        let rows: Vec<Vec<String>> = reports
            .iter()
            .flat_map(|r| {
                r.candidates.iter().map(|c| {
                    vec![
                        c.constraint_id.clone(),
                        c.pattern.to_string(),
                        c.instance.path.clone(),
                        c.instance.line.to_string(),
                        c.instance.column.to_string(),
                        c.instance.statement_text.clone(),
                    ]
                })
            })
            .collect();
        tabular(cfg, &["constraint_id", "pattern", "file", "line", "column", "text"], &rows)
    };
    Ok(outcome)
}

#[derive(Serialize)]
struct Classified<'a> {
    id: &'a str,
    system: &'a str,
    simplified: &'a str,
    #[serde(rename = "type")]
    constraint_type: &'static str,
}

#[derive(Serialize)]
struct ClassifyOut<'a> {
    schema_version: &'static str,
    constraints: Vec<Classified<'a>>,
}

fn classify(cfg: &RunConfig) -> Result<Outcome, Failure> {
    let mut outcome = Outcome::new(String::new());
    let records = load_records(cfg, &mut outcome)?;
    let classified: Vec<Classified> = records
        .iter()
        .map(|r| Classified {
            id: &r.id,
            system: &r.system,
            simplified: &r.simplified,
            constraint_type: r.constraint_type().as_str(),
        })
        .collect();
    outcome.text = if cfg.format == Format::Json {
        render::json(&ClassifyOut {
            schema_version: "1",
            constraints: classified,
        })
    } else {
        let rows: Vec<Vec<String>> = classified
            .iter()
            .map(|c| vec![c.id.to_string(), c.constraint_type.to_string()])
            .collect();
        tabular(cfg, &["id", "type"], &rows)
    };
    Ok(outcome)
}

/// `--system`, else the record's own system, else the first root's name.
fn system_for(cfg: &RunConfig, record_system: &str, roots: &[PathBuf]) -> String {
    if let Some(s) = &cfg.system {
        return s.clone();
    }
    if !record_system.is_empty() {
        return record_system.to_string();
    }
    root_label(roots)
}

fn root_label(roots: &[PathBuf]) -> String {
    roots
        .first()
        .and_then(|r| r.file_name())
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn links_output(cfg: &RunConfig, links: Vec<TraceLink>) -> String {
    if cfg.format == Format::Json {
        return render::json(&LinksFile::new(links));
    }
    let rows: Vec<Vec<String>> = links
        .iter()
        .map(|l| {
            let defs = l
                .definitions
                .iter()
                .map(|d| format!("{} {}:{} {}", d.kind.as_str(), d.file, d.line, d.symbol))
                .collect::<Vec<_>>()
                .join("; ");
            vec![
                l.constraint_id.clone(),
                l.system.clone().unwrap_or_default(),
                l.enforcing.file.clone(),
                l.enforcing.line.to_string(),
                l.enforcing.pattern.clone(),
                defs,
                format!("{:?}", l.provenance).to_lowercase(),
            ]
        })
        .collect();
    tabular(cfg, &["constraint_id", "system", "file", "line", "pattern", "definitions", "provenance"], &rows)
}

fn push_diags(outcome: &mut Outcome, diags: &[Diagnostic]) {
    outcome.diagnostics.extend(diags.iter().map(|d| format!("warning: {d}")));
}

fn trace_detected(cfg: &RunConfig, roots: &[PathBuf]) -> Result<Outcome, Failure> {
    let (program, mut outcome) = load_program(roots)?;
    let records = load_records(cfg, &mut outcome)?;
    let reports = run_detectors(cfg, &program, &records, &mut outcome)?;
    let mut links = Vec::new();
    for rep in &reports {
        let record = records.iter().find(|r| r.id == rep.constraint_id).expect("report of a loaded record");
        let system = system_for(cfg, &record.system, roots);
        let (l, d) = links_from_report(&program, rep, Some(&system))?;
        push_diags(&mut outcome, &d);
        links.extend(l);
    }
    outcome.text = links_output(cfg, links);
    Ok(outcome)
}

fn trace_manual(cfg: &RunConfig, roots: &[PathBuf], at: &str, pattern: &str, id: &str) -> Result<Outcome, Failure> {
    let (file, line) = at
        .rsplit_once(':')
        .and_then(|(f, l)| Some((f, l.parse::<u32>().ok()?)))
        .ok_or_else(|| Failure::Usage(format!("--at `{at}`: expected file:line")))?;
    let pattern = lookup_pattern(pattern)?;
    let (program, mut outcome) = load_program(roots)?;
    let record = match cfg.constraints {
        Some(_) => load_records(cfg, &mut outcome)?.into_iter().find(|r| r.id == id),
        None => None,
    };
    let seeds = record.as_ref().map(|r| r.seeds.clone()).unwrap_or_default();
    let fid = program
        .corpus
        .find_file(file)
        .ok_or_else(|| anyhow!("`{file}` is not in the corpus"))?;
    let candidate = statements_of(&program.corpus, None)
        .into_iter()
        .find(|n| {
            n.file == fid && program.corpus.node(*n).is_stmt() && program.corpus.node(*n).location.line == line
        })
        .ok_or_else(|| anyhow!("no statement at {at}"))?;
    let predicate = Predicate::from_refs(&program, pattern, &seeds, cfg.depth)?;
    let site = descend_enforcing(&program, candidate, &predicate);
    let Some(instance) = predicate.instance_at(&program, site) else {
        let loc = &program.corpus.node(site).location;
        return Err(anyhow!(
            "no {} instance at {}:{}",
            pattern.name,
            program.corpus.display_path(site.file),
            loc.line
        )
        .into());
    };
    let (defs, d) = resolve_data_definitions(&program, &instance);
    push_diags(&mut outcome, &d);
    let system = system_for(cfg, record.as_ref().map_or("", |r| r.system.as_str()), roots);
    let link = assemble_trace(id, Some(&system), &instance, defs, Provenance::Manual)?;
    outcome.text = links_output(cfg, vec![link]);
    Ok(outcome)
}

fn read_links(path: &Path) -> Result<Vec<TraceLink>, Failure> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_links(&path.display().to_string(), &text)?)
}

#[derive(Serialize)]
struct GroupOut<'a> {
    constraint_id: &'a str,
    consistency: Consistency,
    patterns: Vec<&'a str>,
    sites: usize,
}

#[derive(Serialize)]
struct ClonesOut<'a> {
    groups: Vec<GroupOut<'a>>,
    #[serde(flatten)]
    summary: &'a CloneSummary,
}

fn clones(cfg: &RunConfig, path: &Path) -> Result<Outcome, Failure> {
    let links = read_links(path)?;
    let groups = group(&links);
    let summary = clone_summary(&groups);
    let text = if cfg.format == Format::Json {
        let groups = groups
            .iter()
            .map(|g| {
                let mut patterns: Vec<&str> = g.links.iter().map(|l| l.enforcing.pattern.as_str()).collect();
                patterns.sort_unstable();
                patterns.dedup();
                GroupOut {
                    constraint_id: &g.constraint_id,
                    consistency: g.consistency,
                    patterns,
                    sites: g.links.len(),
                }
            })
            .collect();
        render::json(&ClonesOut {
            groups,
            summary: &summary,
        })
    } else {
        let rows: Vec<Vec<String>> = summary
            .pairs
            .iter()
            .map(|p| {
                vec![
                    p.constraint_id.clone(),
                    format!("{}:{}", p.a.file, p.a.line),
                    format!("{}:{}", p.b.file, p.b.line),
                    p.clone_type.as_str().to_string(),
                    p.anchor.to_string(),
                ]
            })
            .collect();
        tabular(cfg, &["constraint_id", "a", "b", "type", "anchor"], &rows)
    };
    Ok(Outcome::new(text))
}

fn report(cfg: &RunConfig, links: Option<&Path>, by: &str) -> Result<Outcome, Failure> {
    let axis = Axis::parse(by).ok_or_else(|| Failure::Usage(format!("--by `{by}`: expected pattern or constraint-type")))?;
    let mut outcome = Outcome::new(String::new());
    let table = match axis {
        Axis::Pattern => {
            let path = links.ok_or_else(|| Failure::Usage("--by pattern needs --links FILE".into()))?;
            let mut links = read_links(path)?;
            if let Some(s) = &cfg.system {
                for l in links.iter_mut().filter(|l| l.system.is_none()) {
                    l.system = Some(s.clone());
                }
            }
            pattern_distribution(&links)
        }
        Axis::ConstraintType => type_distribution(&load_records(cfg, &mut outcome)?),
    };
    outcome.text = match cfg.format {
        Format::Json => {
            let mut s = table.to_json();
            s.push('\n');
            s
        }
        Format::Csv => table.to_csv(),
        Format::Table => table.to_table(color_enabled()),
    };
    Ok(outcome)
}
