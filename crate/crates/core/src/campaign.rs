//! Verification campaigns: run a law suite and/or a hunt predicate over every
//! semigroup of genus `<= G`, with checkpointing and optional worker threads.
//!
//! Aggregates never depend on the worker count or on where a run was
//! interrupted: counts and law tallies are sums, and the kept records are the
//! `record_limit` smallest under a fixed order.

use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::checkpoint::{sha256_hex, Checkpoint};
use crate::laws::{Law, LawOutcome};
use crate::predicate::Predicate;
use crate::records::ReportRecord;
use crate::semigroup::NumericalSemigroup;
use crate::tree::{
    check_bound, merge_counts, EnumerationError, Frontier, TreeNode, DEFAULT_MEMORY_LIMIT,
};
use crate::wilf::{Evaluation, WilfError};

/// Subtrees handed out per worker when the tree is split for threads.
const ROOTS_PER_WORKER: usize = 256;
/// Nodes a worker visits between checks of the stop flag.
const WORKER_CHUNK: u64 = 4096;

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("invalid campaign configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error("evaluating {semigroup}: {source}")]
    Evaluation {
        semigroup: String,
        source: WilfError,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("corrupt checkpoint: {0}")]
    CorruptCheckpoint(String),
    #[error("checkpoint does not match this campaign: {0}")]
    IncompatibleCheckpoint(String),
    #[error("cannot replay violation: {0}")]
    Replay(String),
}

#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub max_genus: u32,
    pub laws: Vec<Law>,
    pub predicate: Option<Predicate>,
    pub workers: usize,
    /// Restrict the campaign to these subtrees; empty means the whole tree.
    pub roots: Vec<NumericalSemigroup>,
    pub checkpoint: Option<PathBuf>,
    /// Visited nodes between checkpoint writes; 0 writes only at the end.
    pub checkpoint_interval: u64,
    /// Stop (and checkpoint) once this many nodes were visited in this run.
    pub stop_after: Option<u64>,
    /// Maximum number of violation and match records kept, each.
    pub record_limit: usize,
}

impl CampaignConfig {
    pub fn new(max_genus: u32) -> Self {
        CampaignConfig {
            max_genus,
            laws: Vec::new(),
            predicate: None,
            workers: 1,
            roots: Vec::new(),
            checkpoint: None,
            checkpoint_interval: 1_000_000,
            stop_after: None,
            record_limit: 10_000,
        }
    }

    fn validate(&self) -> Result<(), CampaignError> {
        if self.workers == 0 {
            return Err(CampaignError::InvalidConfig(
                "worker count must be at least 1".into(),
            ));
        }
        check_bound(self.max_genus, DEFAULT_MEMORY_LIMIT)?;
        Ok(())
    }

    /// Hash of everything that must match for a checkpoint to be resumable.
    pub fn suite_hash(&self) -> String {
        let laws: Vec<&str> = self.laws.iter().map(|l| l.name()).collect();
        let roots: Vec<String> = self.roots.iter().map(|r| r.to_gaps_notation()).collect();
        let text = format!(
            "laws={}\npredicate={}\nroots={}\nrecord_limit={}\n",
            laws.join(","),
            self.predicate
                .as_ref()
                .map(|p| p.canonical())
                .unwrap_or_default(),
            roots.join("|"),
            self.record_limit,
        );
        sha256_hex(text.as_bytes())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawTally {
    pub law: String,
    pub passed: u64,
    pub vacuous: u64,
    pub violated: u64,
}

/// A failed law instance, replayable from the gap notation alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub law: String,
    pub semigroup: String,
    pub genus: u32,
    pub expected: String,
    pub observed: String,
}

impl ViolationRecord {
    fn key(&self) -> (u32, &str, &str) {
        (self.genus, &self.semigroup, &self.law)
    }

    /// Re-checks the law on the recorded semigroup.
    pub fn replay(&self) -> Result<LawOutcome, CampaignError> {
        let law = Law::from_name(&self.law)
            .ok_or_else(|| CampaignError::Replay(format!("unknown law {}", self.law)))?;
        let s: NumericalSemigroup = self
            .semigroup
            .parse()
            .map_err(|e| CampaignError::Replay(format!("{e}")))?;
        law.check(&s).map_err(|source| CampaignError::Evaluation {
            semigroup: self.semigroup.clone(),
            source,
        })
    }

    /// True when replaying yields exactly this record.
    pub fn reproduces(&self) -> bool {
        matches!(
            self.replay(),
            Ok(LawOutcome::Violated { expected, observed })
                if expected == self.expected && observed == self.observed
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tallies {
    /// Semigroups visited per genus.
    pub counts: Vec<u64>,
    pub laws: Vec<LawTally>,
    pub violation_count: u64,
    /// The smallest violations by (genus, gaps, law).
    pub violations: Vec<ViolationRecord>,
    pub match_count: u64,
    /// The smallest matches by (genus, gaps).
    pub matches: Vec<ReportRecord>,
}

impl Tallies {
    fn for_config(cfg: &CampaignConfig) -> Self {
        Tallies {
            counts: vec![0; cfg.max_genus as usize + 1],
            laws: cfg
                .laws
                .iter()
                .map(|l| LawTally {
                    law: l.name().to_string(),
                    ..LawTally::default()
                })
                .collect(),
            ..Tallies::default()
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    fn normalize(&mut self, limit: usize) {
        self.violations.sort_by(|a, b| a.key().cmp(&b.key()));
        self.violations.truncate(limit);
        self.matches.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        self.matches.truncate(limit);
    }

    fn push_violation(&mut self, v: ViolationRecord, limit: usize) {
        self.violation_count += 1;
        if limit == 0 {
            return;
        }
        self.violations.push(v);
        if self.violations.len() >= 2 * limit {
            self.normalize(limit);
        }
    }

    fn push_match(&mut self, m: ReportRecord, limit: usize) {
        self.match_count += 1;
        if limit == 0 {
            return;
        }
        self.matches.push(m);
        if self.matches.len() >= 2 * limit {
            self.normalize(limit);
        }
    }

    /// Adds `other` into `self`. Both must come from the same configuration.
    pub fn merge(&mut self, other: Tallies, limit: usize) {
        merge_counts(&mut self.counts, &other.counts);
        for (a, b) in self.laws.iter_mut().zip(other.laws) {
            debug_assert_eq!(a.law, b.law);
            a.passed += b.passed;
            a.vacuous += b.vacuous;
            a.violated += b.violated;
        }
        self.violation_count += other.violation_count;
        self.violations.extend(other.violations);
        self.match_count += other.match_count;
        self.matches.extend(other.matches);
        self.normalize(limit);
    }

    pub fn law(&self, law: Law) -> Option<&LawTally> {
        self.laws.iter().find(|t| t.law == law.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CampaignStatus {
    Complete,
    Checkpointed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignResult {
    pub tallies: Tallies,
    /// Nodes visited by this invocation (excludes resumed progress).
    pub visited: u64,
    pub wall_time_secs: f64,
    pub status: CampaignStatus,
}

impl CampaignResult {
    pub fn is_complete(&self) -> bool {
        self.status == CampaignStatus::Complete
    }
}

/// Per-node work shared by the sequential and threaded drivers.
struct Job<'a> {
    laws: &'a [Law],
    predicate: Option<&'a Predicate>,
    limit: usize,
}

impl Job<'_> {
    fn visit(&self, node: &TreeNode, t: &mut Tallies) -> Result<(), CampaignError> {
        if self.laws.is_empty() && self.predicate.is_none() {
            return Ok(());
        }
        let s = &node.semigroup;
        let ev = Evaluation::new(s).map_err(|source| CampaignError::Evaluation {
            semigroup: s.to_gaps_notation(),
            source,
        })?;
        for (i, law) in self.laws.iter().enumerate() {
            match law.check_with(s, &ev) {
                LawOutcome::Holds => t.laws[i].passed += 1,
                LawOutcome::Vacuous => t.laws[i].vacuous += 1,
                LawOutcome::Violated { expected, observed } => {
                    t.laws[i].violated += 1;
                    let record = ViolationRecord {
                        law: law.name().to_string(),
                        semigroup: s.to_gaps_notation(),
                        genus: s.genus(),
                        expected,
                        observed,
                    };
                    t.push_violation(record, self.limit);
                }
            }
        }
        if let Some(p) = self.predicate {
            if p.matches(&ev.report) {
                t.push_match(ReportRecord::from_parts(s, ev.report), self.limit);
            }
        }
        Ok(())
    }

    /// A visitor closure that records the first error and ignores the rest.
    fn visitor<'t>(
        &'t self,
        t: &'t mut Tallies,
        error: &'t mut Option<CampaignError>,
    ) -> impl FnMut(&TreeNode) + 't {
        move |node| {
            if error.is_none() {
                if let Err(e) = self.visit(node, t) {
                    *error = Some(e);
                }
            }
        }
    }
}

fn fail_on(error: Option<CampaignError>) -> Result<(), CampaignError> {
    error.map_or(Ok(()), Err)
}

/// Runs the law suite of `cfg`.
pub fn run_laws(cfg: &CampaignConfig) -> Result<CampaignResult, CampaignError> {
    if cfg.laws.is_empty() {
        return Err(CampaignError::InvalidConfig("no laws selected".into()));
    }
    run(cfg)
}

/// Runs the hunt predicate of `cfg`, collecting matching reports.
pub fn run_hunt(cfg: &CampaignConfig) -> Result<CampaignResult, CampaignError> {
    if cfg.predicate.is_none() {
        return Err(CampaignError::InvalidConfig(
            "hunt needs a predicate".into(),
        ));
    }
    run(cfg)
}

/// Runs whatever `cfg` selects (laws, predicate, or neither for a plain count).
pub fn run(cfg: &CampaignConfig) -> Result<CampaignResult, CampaignError> {
    cfg.validate()?;
    let start = Instant::now();
    let hash = cfg.suite_hash();

    let (frontier, tallies) = match &cfg.checkpoint {
        Some(path) if path.exists() => {
            let ck = Checkpoint::read(path)?;
            if ck.frontier.max_genus != cfg.max_genus {
                return Err(CampaignError::IncompatibleCheckpoint(format!(
                    "genus bound {} != {}",
                    ck.frontier.max_genus, cfg.max_genus
                )));
            }
            if ck.suite_hash != hash {
                return Err(CampaignError::IncompatibleCheckpoint(
                    "suite/predicate hash differs".into(),
                ));
            }
            (ck.frontier, ck.tallies)
        }
        _ => {
            let roots = if cfg.roots.is_empty() {
                vec![TreeNode::root()]
            } else {
                cfg.roots
                    .iter()
                    .cloned()
                    .map(TreeNode::from_semigroup)
                    .collect()
            };
            (
                Frontier::from_roots(cfg.max_genus, roots),
                Tallies::for_config(cfg),
            )
        }
    };

    let job = Job {
        laws: &cfg.laws,
        predicate: cfg.predicate.as_ref(),
        limit: cfg.record_limit,
    };
    let (mut tallies, frontier, visited) = if cfg.workers == 1 {
        run_sequential(cfg, &job, &hash, frontier, tallies)?
    } else {
        run_threaded(cfg, &job, &hash, frontier, tallies)?
    };
    tallies.normalize(cfg.record_limit);
    let status = if frontier.is_empty() {
        CampaignStatus::Complete
    } else {
        CampaignStatus::Checkpointed
    };
    if let Some(path) = &cfg.checkpoint {
        write_checkpoint(path, &hash, &tallies, frontier)?;
    }
    Ok(CampaignResult {
        tallies,
        visited,
        wall_time_secs: start.elapsed().as_secs_f64(),
        status,
    })
}

fn write_checkpoint(
    path: &std::path::Path,
    hash: &str,
    tallies: &Tallies,
    mut frontier: Frontier,
) -> Result<(), CampaignError> {
    frontier.counts = tallies.counts.clone();
    Checkpoint {
        suite_hash: hash.to_string(),
        tallies: tallies.clone(),
        frontier,
    }
    .write(path)
}

fn run_sequential(
    cfg: &CampaignConfig,
    job: &Job,
    hash: &str,
    mut frontier: Frontier,
    mut tallies: Tallies,
) -> Result<(Tallies, Frontier, u64), CampaignError> {
    frontier.counts = tallies.counts.clone();
    let mut visited = 0;
    loop {
        let mut chunk = cfg.stop_after.map(|s| s - visited);
        if cfg.checkpoint.is_some() && cfg.checkpoint_interval > 0 {
            chunk = Some(chunk.map_or(cfg.checkpoint_interval, |c| c.min(cfg.checkpoint_interval)));
        }
        let mut error = None;
        visited += frontier.drain(&mut job.visitor(&mut tallies, &mut error), chunk);
        fail_on(error)?;
        tallies.counts = frontier.counts.clone();
        let stop = cfg.stop_after.is_some_and(|s| visited >= s);
        if frontier.is_empty() || stop {
            return Ok((tallies, frontier, visited));
        }
        if let Some(path) = &cfg.checkpoint {
            tallies.normalize(cfg.record_limit);
            write_checkpoint(path, hash, &tallies, frontier.clone())?;
        }
    }
}

struct Outcome {
    index: usize,
    tallies: Tallies,
    /// Unfinished part of the subtree when the worker was stopped.
    remaining: Vec<TreeNode>,
    visited: u64,
}

fn run_threaded(
    cfg: &CampaignConfig,
    job: &Job,
    hash: &str,
    mut frontier: Frontier,
    mut tallies: Tallies,
) -> Result<(Tallies, Frontier, u64), CampaignError> {
    frontier.counts = tallies.counts.clone();
    let before = frontier.total();
    let mut error = None;
    frontier.widen(
        cfg.workers * ROOTS_PER_WORKER,
        &mut job.visitor(&mut tallies, &mut error),
    );
    fail_on(error)?;
    tallies.counts = frontier.counts.clone();
    let visited_total = AtomicU64::new(frontier.total() - before);

    // Subtree roots in processing order.
    let roots: Vec<TreeNode> = std::mem::take(&mut frontier.pending)
        .into_iter()
        .rev()
        .collect();
    let max_genus = cfg.max_genus;
    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(
        cfg.stop_after
            .is_some_and(|s| visited_total.load(Ordering::Relaxed) >= s),
    );
    let template = Tallies::for_config(cfg);

    // Per root: None = not started, Some(remaining) = finished or stopped.
    let mut state: Vec<Option<Vec<TreeNode>>> = vec![None; roots.len()];
    let mut first_error: Option<CampaignError> = None;

    std::thread::scope(|scope| {
        let (tx, rx) = mpsc::channel::<Result<Outcome, CampaignError>>();
        for _ in 0..cfg.workers {
            let tx = tx.clone();
            let (roots, next, stop, visited_total, template) =
                (&roots, &next, &stop, &visited_total, &template);
            scope.spawn(move || loop {
                if stop.load(Ordering::Relaxed) {
                    break;
                }
                let index = next.fetch_add(1, Ordering::Relaxed);
                let Some(root) = roots.get(index) else { break };
                let mut local = template.clone();
                let mut sub = Frontier::from_roots(max_genus, vec![root.clone()]);
                let mut err = None;
                let mut visited = 0;
                loop {
                    let n = sub.drain(&mut job.visitor(&mut local, &mut err), Some(WORKER_CHUNK));
                    visited += n;
                    let total = visited_total.fetch_add(n, Ordering::Relaxed) + n;
                    if cfg.stop_after.is_some_and(|s| total >= s) {
                        stop.store(true, Ordering::Relaxed);
                    }
                    if err.is_some() || sub.is_empty() || stop.load(Ordering::Relaxed) {
                        break;
                    }
                }
                let msg = match err {
                    Some(e) => Err(e),
                    None => {
                        local.counts = sub.counts;
                        Ok(Outcome {
                            index,
                            tallies: local,
                            remaining: sub.pending,
                            visited,
                        })
                    }
                };
                let failed = msg.is_err();
                if tx.send(msg).is_err() || failed {
                    stop.store(true, Ordering::Relaxed);
                    break;
                }
            });
        }
        drop(tx);

        // Coordinator: merge results and checkpoint as they arrive.
        let mut since_checkpoint = 0;
        for msg in rx {
            match msg {
                Ok(out) => {
                    tallies.merge(out.tallies, cfg.record_limit);
                    state[out.index] = Some(out.remaining);
                    since_checkpoint += out.visited;
                    if let Some(path) = &cfg.checkpoint {
                        if cfg.checkpoint_interval > 0
                            && since_checkpoint >= cfg.checkpoint_interval
                        {
                            since_checkpoint = 0;
                            let pending = pending_stack(&roots, &state, max_genus);
                            if let Err(e) = write_checkpoint(path, hash, &tallies, pending) {
                                first_error.get_or_insert(e);
                                stop.store(true, Ordering::Relaxed);
                            }
                        }
                    }
                }
                Err(e) => {
                    first_error.get_or_insert(e);
                }
            }
        }
    });
    fail_on(first_error)?;
    let pending = pending_stack(&roots, &state, max_genus);
    Ok((tallies, pending, visited_total.into_inner()))
}

/// Frontier of everything not yet merged: unfinished parts of stopped
/// subtrees and untouched roots, in processing order.
fn pending_stack(roots: &[TreeNode], state: &[Option<Vec<TreeNode>>], max_genus: u32) -> Frontier {
    let mut pending = Vec::new();
    for (root, st) in roots.iter().zip(state).rev() {
        match st {
            None => pending.push(root.clone()),
            Some(rest) => pending.extend(rest.iter().cloned()),
        }
    }
    Frontier {
        max_genus,
        pending,
        counts: Vec::new(),
    }
}

pub fn write_violations<'a, W: Write>(
    out: &mut W,
    records: impl IntoIterator<Item = &'a ViolationRecord>,
) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut *out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_violations<R: BufRead>(input: R) -> io::Result<Vec<ViolationRecord>> {
    input
        .lines()
        .filter(|l| l.as_ref().map_or(true, |l| !l.trim().is_empty()))
        .map(|l| serde_json::from_str(&l?).map_err(io::Error::from))
        .collect()
}
