//! Slicing-backed detectors and the arity fan-out over them.
//!
//! A detector keeps the syntax matches of its pattern that lie in the
//! forward slice of every seed definition.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::Program;
use crate::catalog::{patterns_with_arity, CipPattern};
use crate::constraint::{ConstraintRecord, SeedRef};
use crate::dataflow::{def_at, forward_slice, intersect, DefKey, DefKind, Slice, DEFAULT_DEPTH};
use crate::error::Error;
use crate::matcher::{canonical_op, match_all, match_statement, mirror_op, PatternInstance};

/// Candidate cap per constraint.
pub const DEFAULT_CAP: usize = 25;

/// Sampling stream recorded in every report.
pub const PRNG: &str = "ChaCha8Rng::seed_from_u64 + rand::seq::index::sample (rand 0.8)";

/// One detector input.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Seed {
    Def(DefKey),
    /// Canonical comparison operator (`>`, `≥`, `<`, `≤`, `=`, `≠`).
    Operator(&'static str),
}

impl Seed {
    pub fn describe(&self, program: &Program) -> String {
        match self {
            Seed::Def(d) => d.describe(&program.corpus, &program.symbols),
            Seed::Operator(op) => format!("operator {op}"),
        }
    }
}

/// Resolve a `file:line:kind[:symbol]` reference against the corpus.
pub fn resolve_seed(program: &Program, seed: &SeedRef) -> Result<Seed, Error> {
    let bad = |reason: String| Error::InvalidSeed {
        seed: seed.to_string(),
        reason,
    };
    if seed.is_operator() {
        let sym = seed.symbol.as_deref().unwrap_or_default();
        return canonical_op(sym)
            .map(Seed::Operator)
            .ok_or_else(|| bad(format!("`{sym}` is not a comparison operator")));
    }
    let kind = DefKind::parse(&seed.kind).ok_or_else(|| bad(format!("unknown kind `{}`", seed.kind)))?;
    let file = program
        .corpus
        .find_file(&seed.file)
        .ok_or_else(|| bad(format!("file `{}` is not in the corpus", seed.file)))?;
    def_at(
        &program.corpus,
        &program.symbols,
        file,
        seed.line,
        Some(kind),
        seed.symbol.as_deref(),
    )
    .map(Seed::Def)
    .ok_or_else(|| bad(format!("no {} definition on that line", kind.as_str())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub seed: String,
    /// Edge kinds from the seed to the statement, `direct-read > ...`.
    pub path: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateEnforcement {
    pub constraint_id: String,
    pub pattern: &'static str,
    pub instance: PatternInstance,
    pub evidence: Vec<Evidence>,
    pub confirmed: bool,
}

fn operator_agrees(instance: &PatternInstance, wanted: &str) -> bool {
    let Some(found) = instance.binding.operator().and_then(canonical_op) else {
        return false;
    };
    found == wanted || found == mirror_op(wanted)
}

/// Run `pattern`'s detector with `seeds`, one per pattern part.
pub fn detect(
    program: &Program,
    pattern: &CipPattern,
    seeds: &[Seed],
    depth: u32,
) -> Result<Vec<CandidateEnforcement>, Error> {
    if !pattern.has_detector() {
        return Err(Error::NoDetector(pattern.name.to_string()));
    }
    if seeds.len() != pattern.detector_arity {
        return Err(Error::ArityMismatch {
            pattern: pattern.name.to_string(),
            expected: pattern.detector_arity,
            got: seeds.len(),
        });
    }
    let mut slices: Vec<(String, Slice)> = Vec::new();
    let mut operators = Vec::new();
    for s in seeds {
        match s {
            Seed::Def(d) => slices.push((s.describe(program), forward_slice(&program.defuse, d, depth)?)),
            Seed::Operator(op) => operators.push(*op),
        }
    }
    if slices.is_empty() {
        return Ok(Vec::new());
    }
    let only: Vec<Slice> = slices.iter().map(|(_, s)| s.clone()).collect();
    let common = intersect(&only);
    let instances = match_all(&program.corpus, &[pattern], &program.symbols);
    let mut out = Vec::new();
    for inst in instances {
        let Some(site) = inst.site else { continue };
        if !common.contains(&site.anchor) {
            continue;
        }
        if !operators.iter().all(|op| operator_agrees(&inst, op)) {
            continue;
        }
        let confirmed = match_statement(&program.corpus, &program.symbols, site.node, pattern)
            .is_some_and(|b| b == inst.binding);
        if !confirmed {
            continue;
        }
        let evidence = slices
            .iter()
            .map(|(seed, slice)| Evidence {
                seed: seed.clone(),
                path: slice.path_summary(site.anchor),
            })
            .collect();
        out.push(CandidateEnforcement {
            constraint_id: String::new(),
            pattern: pattern.name,
            instance: inst,
            evidence,
            confirmed,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
pub struct DetectOptions {
    pub depth: u32,
    pub cap: usize,
    pub sample_seed: u64,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions {
            depth: DEFAULT_DEPTH,
            cap: DEFAULT_CAP,
            sample_seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DetectionReport {
    pub schema_version: &'static str,
    pub constraint_id: String,
    pub manual_pattern: &'static str,
    pub detectors: Vec<&'static str>,
    /// Candidates before sampling.
    pub total: usize,
    pub truncated: bool,
    pub cap: usize,
    pub sample_seed: u64,
    pub prng: &'static str,
    pub candidates: Vec<CandidateEnforcement>,
}

/// Run every detector with the manual pattern's arity and merge the results.
pub fn orchestrate(
    program: &Program,
    constraint: &ConstraintRecord,
    manual_pattern: &CipPattern,
    options: DetectOptions,
) -> Result<DetectionReport, Error> {
    if constraint.seeds.is_empty() {
        return Err(Error::NoSeeds(constraint.id.clone()));
    }
    if !manual_pattern.has_detector() {
        return Err(Error::NoDetector(manual_pattern.name.to_string()));
    }
    let seeds: Vec<Seed> = constraint
        .seeds
        .iter()
        .map(|s| resolve_seed(program, s))
        .collect::<Result<_, _>>()?;
    let detectors = patterns_with_arity(manual_pattern.detector_arity);
    let per_pattern: Vec<Vec<CandidateEnforcement>> = detectors
        .par_iter()
        .map(|p| detect(program, p, &seeds, options.depth))
        .collect::<Result<_, _>>()?;
    let mut seen = BTreeSet::new();
    let mut all: Vec<CandidateEnforcement> = per_pattern
        .into_iter()
        .flatten()
        .filter(|c| seen.insert((c.pattern, c.instance.path.clone(), c.instance.line)))
        .map(|mut c| {
            c.constraint_id = constraint.id.clone();
            c
        })
        .collect();
    all.sort_by(|a, b| {
        let ka = (a.instance.file(), a.instance.line, a.instance.column, a.pattern);
        let kb = (b.instance.file(), b.instance.line, b.instance.column, b.pattern);
        ka.cmp(&kb)
    });
    let total = all.len();
    let cap = options.cap.max(1);
    let truncated = total > cap;
    if truncated {
        let mut rng = ChaCha8Rng::seed_from_u64(options.sample_seed);
        let mut keep = rand::seq::index::sample(&mut rng, total, cap).into_vec();
        keep.sort_unstable();
        let mut it = keep.into_iter().peekable();
        all = all
            .into_iter()
            .enumerate()
            .filter(|(i, _)| it.next_if_eq(i).is_some())
            .map(|(_, c)| c)
            .collect();
    }
    Ok(DetectionReport {
        schema_version: "1",
        constraint_id: constraint.id.clone(),
        manual_pattern: manual_pattern.name,
        detectors: detectors.iter().map(|p| p.name).collect(),
        total,
        truncated,
        cap,
        sample_seed: options.sample_seed,
        prng: PRNG,
        candidates: all,
    })
}
