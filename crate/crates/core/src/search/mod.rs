//! Exhaustive search over standard-form `[[n,1]]` codes and over M₃-codes.
//!
//! Generator `i` is drawn from `span(R_i)` with `R_i = {Z_1…Z_n, X_i, X_n}`,
//! pruned to the part commuting with and disjoint from the generators
//! already chosen. Each complete generating set is analysed under every sign
//! assignment (general mode) or under the forced M₃ signs.
//!
//! Top-level branches run in parallel; every branch owns its scratch state
//! and results are merged in branch order, so output does not depend on the
//! worker count.

pub mod subspace;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{GroupEchelon, StabilizerCode};
use crate::enumerator::{
    compute_enumerators_unchecked, report_from_enumerators, AnalysisCache, IntPolynomial,
    ReportJson, SignTable, SignedEnumeratorSet,
};
use crate::error::SearchError;
use crate::pauli::{Axis, InnerProduct, PauliOperator};
use subspace::{disjoint, span, standard_form_row_space, truncate};

/// Largest `n` accepted by the general search; larger runs are out of reach.
pub const MAX_GENERAL_N: usize = 7;
/// Largest `n` accepted by the M₃ search.
pub const MAX_M3_N: usize = 9;

/// Upper bounds on the bit metric from the reference table, indexed by `n`.
pub fn table_bits(n: usize) -> Option<u32> {
    match n {
        2 => Some(4),
        3 => Some(9),
        4 => Some(15),
        5 => Some(22),
        _ => None,
    }
}

/// `(n−1)(n+2)`: free bits of the standard form, ignoring signs.
pub fn naive_bits(n: usize) -> u32 {
    ((n - 1) * (n + 2)) as u32
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    General,
    M3,
}

/// Which analysed codes become records.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Emit {
    Useful,
    AxisPreserving,
    All,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub n: usize,
    pub mode: SearchMode,
    /// 0 means one worker per core.
    pub jobs: usize,
    pub min_weight: u32,
    pub emit: Emit,
    pub instrument: bool,
    pub checkpoint: Option<PathBuf>,
    pub cancel: Arc<AtomicBool>,
}

impl SearchConfig {
    pub fn new(n: usize, mode: SearchMode) -> Self {
        Self {
            n,
            mode,
            jobs: 0,
            min_weight: 2,
            emit: Emit::Useful,
            instrument: true,
            checkpoint: None,
            cancel: Arc::new(AtomicBool::new(false)),
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.n < 2 {
            return Err(SearchError::TooSmall(self.n));
        }
        let max = match self.mode {
            SearchMode::General => MAX_GENERAL_N,
            SearchMode::M3 => MAX_M3_N,
        };
        if self.n > max {
            return Err(SearchError::TooLarge { n: self.n, max });
        }
        if self.mode == SearchMode::M3 && (self.n - 1) % 2 != 0 {
            return Err(SearchError::OddGeneratorCount(self.n - 1));
        }
        Ok(())
    }

    fn header(&self) -> CheckpointHeader {
        CheckpointHeader {
            n: self.n,
            mode: self.mode,
            min_weight: self.min_weight,
            emit: self.emit,
        }
    }
}

/// One emitted code.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResultRecord {
    pub branch: u64,
    /// `Σ|R|` along the recursion path that produced this code.
    pub path_bits: u32,
    pub report: ReportJson,
}

impl SearchResultRecord {
    pub fn code(&self) -> StabilizerCode {
        StabilizerCode::from_strs(&self.report.generators).expect("recorded codes are valid")
    }

    /// `W_L`, equal on all three axes for axis-preserving records.
    pub fn w_l(&self) -> &IntPolynomial {
        &self.report.w_x
    }
}

/// Count of codes sharing one `(W_I, W_L)` pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumeratorSetCount {
    pub w_i: Vec<i64>,
    pub w_l: Vec<i64>,
    pub useful: bool,
    pub threshold: String,
    pub count: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instrumentation {
    /// Largest `Σ|R|` over recursion paths ending in a complete generating set.
    pub max_path_bits: u32,
    /// Largest `|R|` seen at each depth.
    pub level_max_bits: Vec<u32>,
}

impl Instrumentation {
    fn merge(&mut self, other: &Instrumentation) {
        self.max_path_bits = self.max_path_bits.max(other.max_path_bits);
        if self.level_max_bits.len() < other.level_max_bits.len() {
            self.level_max_bits.resize(other.level_max_bits.len(), 0);
        }
        for (a, b) in self.level_max_bits.iter_mut().zip(&other.level_max_bits) {
            *a = (*a).max(*b);
        }
    }
}

/// Mergeable per-branch totals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchSummary {
    pub nodes_visited: u64,
    /// Complete generating sets reached, before sign assignment.
    pub generating_sets: u64,
    /// Signed codes analysed.
    pub codes_analyzed: u64,
    pub axis_preserving: u64,
    pub useful: u64,
    pub emitted: u64,
    pub duplicates_skipped: u64,
    pub enumerator_sets: Vec<EnumeratorSetCount>,
    pub instrumentation: Instrumentation,
}

type SetKey = (Vec<i64>, Vec<i64>);

impl BranchSummary {
    fn merge(&mut self, other: &BranchSummary) {
        self.nodes_visited += other.nodes_visited;
        self.generating_sets += other.generating_sets;
        self.codes_analyzed += other.codes_analyzed;
        self.axis_preserving += other.axis_preserving;
        self.useful += other.useful;
        self.emitted += other.emitted;
        self.duplicates_skipped += other.duplicates_skipped;
        let mut sets: BTreeMap<SetKey, EnumeratorSetCount> = self
            .enumerator_sets
            .drain(..)
            .map(|e| ((e.w_i.clone(), e.w_l.clone()), e))
            .collect();
        for e in &other.enumerator_sets {
            sets.entry((e.w_i.clone(), e.w_l.clone()))
                .and_modify(|x| x.count += e.count)
                .or_insert_with(|| e.clone());
        }
        self.enumerator_sets = sets.into_values().collect();
        self.instrumentation.merge(&other.instrumentation);
    }
}

/// Final aggregate over all branches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub n: usize,
    pub mode: SearchMode,
    pub min_weight: u32,
    pub branches: u64,
    pub nodes_visited: u64,
    pub generating_sets: u64,
    pub codes_analyzed: u64,
    pub axis_preserving: u64,
    pub useful: u64,
    pub emitted: u64,
    pub duplicates_skipped: u64,
    pub distinct_axis_preserving_sets: u64,
    pub distinct_useful_sets: u64,
    /// Axis-preserving `(W_I, W_L)` pairs with their counts, sorted.
    pub enumerator_sets: Vec<EnumeratorSetCount>,
    pub best_threshold: Option<String>,
    pub instrumentation: Option<InstrumentationReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstrumentationReport {
    pub max_path_bits: u32,
    pub level_max_bits: Vec<u32>,
    pub naive_bits: u32,
    pub table_bits: Option<u32>,
    pub within_table: Option<bool>,
    pub matches_table: Option<bool>,
}

impl SearchSummary {
    fn from_branches(config: &SearchConfig, branches: u64, total: &BranchSummary) -> Self {
        let useful_sets: Vec<_> = total.enumerator_sets.iter().filter(|e| e.useful).collect();
        let best_threshold = useful_sets
            .iter()
            .map(|e| e.threshold.clone())
            .min_by(|a, b| a.parse::<f64>().unwrap().total_cmp(&b.parse::<f64>().unwrap()));
        let instrumentation = config.instrument.then(|| {
            let m = total.instrumentation.max_path_bits;
            let table = table_bits(config.n);
            InstrumentationReport {
                max_path_bits: m,
                level_max_bits: total.instrumentation.level_max_bits.clone(),
                naive_bits: naive_bits(config.n),
                table_bits: table,
                within_table: table.map(|t| m <= t),
                matches_table: table.map(|t| m == t),
            }
        });
        SearchSummary {
            n: config.n,
            mode: config.mode,
            min_weight: config.min_weight,
            branches,
            nodes_visited: total.nodes_visited,
            generating_sets: total.generating_sets,
            codes_analyzed: total.codes_analyzed,
            axis_preserving: total.axis_preserving,
            useful: total.useful,
            emitted: total.emitted,
            duplicates_skipped: total.duplicates_skipped,
            distinct_axis_preserving_sets: total.enumerator_sets.len() as u64,
            distinct_useful_sets: useful_sets.len() as u64,
            enumerator_sets: total.enumerator_sets.clone(),
            best_threshold,
            instrumentation,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchResult {
    pub branch: u64,
    pub summary: BranchSummary,
    pub records: Vec<SearchResultRecord>,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub summary: SearchSummary,
    pub records: Vec<SearchResultRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct CheckpointHeader {
    n: usize,
    mode: SearchMode,
    min_weight: u32,
    emit: Emit,
}

/// A top-level choice: the first generator (and its M₃ partner).
#[derive(Clone, Debug)]
struct Branch {
    index: u64,
    chosen: Vec<PauliOperator>,
    bits: u32,
}

/// Pruned basis for the next generator: `disjoint` then `truncate`.
pub fn candidate_basis(n: usize, chosen: &[PauliOperator], row: usize) -> Vec<PauliOperator> {
    let r = standard_form_row_space(n, row);
    let r = disjoint(chosen, &r);
    truncate(chosen, &r, InnerProduct::Symplectic)
}

fn m3_sign(p: &PauliOperator) -> PauliOperator {
    p.with_phase(if p.weight() % 4 == 0 { 0 } else { 2 })
}

/// Extends `chosen` by `{P, P′}` if `P′` keeps the set commuting and
/// independent; both carry the weight-determined sign.
fn m3_extension(chosen: &[PauliOperator], p: &PauliOperator) -> Option<[PauliOperator; 2]> {
    let p = m3_sign(p);
    let q = m3_sign(&p.m3_conjugate());
    if !p.commutes_with(&q) || chosen.iter().any(|g| !g.commutes_with(&q)) {
        return None;
    }
    let n = p.num_qubits();
    let mut echelon = GroupEchelon::from_generators(n, chosen);
    echelon.insert(p);
    if echelon.insert(q).is_some() {
        return None;
    }
    Some([p, q])
}

fn accept_general(p: &PauliOperator, min_weight: u32) -> bool {
    p.weight() >= min_weight
}

fn accept_m3(p: &PauliOperator, min_weight: u32) -> bool {
    let w = p.weight();
    w > 0 && w % 2 == 0 && w >= min_weight
}

fn top_level_branches(config: &SearchConfig) -> Vec<Branch> {
    let n = config.n;
    let basis = candidate_basis(n, &[], 0);
    let bits = basis.len() as u32;
    let mut out = Vec::new();
    for (index, p) in span(n, &basis).enumerate() {
        let index = index as u64;
        match config.mode {
            SearchMode::General => {
                if accept_general(&p, config.min_weight) {
                    out.push(Branch {
                        index,
                        chosen: vec![p.with_phase(0)],
                        bits,
                    });
                }
            }
            SearchMode::M3 => {
                if accept_m3(&p, config.min_weight) {
                    if let Some(pair) = m3_extension(&[], &p) {
                        out.push(Branch {
                            index,
                            chosen: pair.to_vec(),
                            bits,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Per-branch worker state.
struct Worker<'a> {
    config: &'a SearchConfig,
    branch: u64,
    cache: AnalysisCache,
    seen: HashSet<Vec<PauliOperator>>,
    summary: BranchSummary,
    sets: BTreeMap<SetKey, EnumeratorSetCount>,
    records: Vec<SearchResultRecord>,
    level_bits: Vec<u32>,
}

fn equal_up_to_sign(a: &IntPolynomial, b: &IntPolynomial) -> bool {
    let (a, b) = (a.trimmed(), b.trimmed());
    a.len() == b.len()
        && (a.iter().zip(b).all(|(x, y)| x == y) || a.iter().zip(b).all(|(x, y)| x == &-y))
}

impl<'a> Worker<'a> {
    fn new(config: &'a SearchConfig, branch: u64) -> Self {
        let levels = match config.mode {
            SearchMode::General => config.n - 1,
            SearchMode::M3 => (config.n - 1) / 2,
        };
        Self {
            config,
            branch,
            cache: AnalysisCache::default(),
            seen: HashSet::new(),
            summary: BranchSummary::default(),
            sets: BTreeMap::new(),
            records: Vec::new(),
            level_bits: vec![0; levels],
        }
    }

    fn cancelled(&self) -> bool {
        self.config.cancel.load(Ordering::Relaxed)
    }

    fn run(mut self, branch: &Branch) -> Result<BranchResult, SearchError> {
        self.level_bits[0] = branch.bits;
        let mut chosen = branch.chosen.clone();
        self.recurse(&mut chosen, branch.bits)?;
        self.summary.enumerator_sets = self.sets.into_values().collect();
        self.summary.instrumentation.level_max_bits = self.level_bits;
        Ok(BranchResult {
            branch: self.branch,
            summary: self.summary,
            records: self.records,
        })
    }

    fn recurse(&mut self, chosen: &mut Vec<PauliOperator>, path_bits: u32) -> Result<(), SearchError> {
        self.summary.nodes_visited += 1;
        let n = self.config.n;
        if chosen.len() == n - 1 {
            if self.cancelled() {
                return Err(SearchError::Interrupted);
            }
            self.summary.generating_sets += 1;
            let inst = &mut self.summary.instrumentation;
            inst.max_path_bits = inst.max_path_bits.max(path_bits);
            match self.config.mode {
                SearchMode::General => self.analyze_general(chosen, path_bits),
                SearchMode::M3 => self.analyze_m3(chosen, path_bits),
            }
            return Ok(());
        }
        let level = match self.config.mode {
            SearchMode::General => chosen.len(),
            SearchMode::M3 => chosen.len() / 2,
        };
        let basis = candidate_basis(n, chosen, level);
        let bits = basis.len() as u32;
        self.level_bits[level] = self.level_bits[level].max(bits);
        for p in span(n, &basis) {
            match self.config.mode {
                SearchMode::General => {
                    if !accept_general(&p, self.config.min_weight) {
                        continue;
                    }
                    chosen.push(p.with_phase(0));
                    let r = self.recurse(chosen, path_bits + bits);
                    chosen.pop();
                    r?;
                }
                SearchMode::M3 => {
                    if !accept_m3(&p, self.config.min_weight) {
                        continue;
                    }
                    let Some(pair) = m3_extension(chosen, &p) else {
                        continue;
                    };
                    chosen.extend_from_slice(&pair);
                    let r = self.recurse(chosen, path_bits + bits);
                    chosen.truncate(chosen.len() - 2);
                    r?;
                }
            }
        }
        Ok(())
    }

    fn analyze_general(&mut self, chosen: &[PauliOperator], path_bits: u32) {
        let n = self.config.n;
        let code = StabilizerCode::new(n, chosen.to_vec()).expect("shape");
        debug_assert!(code.is_valid());
        let table = SignTable::new_unchecked(&code);
        for signs in 0..1u64 << (n - 1) {
            self.summary.codes_analyzed += 1;
            let e = table.enumerators(signs);
            if !(equal_up_to_sign(e.get(Axis::X), e.get(Axis::Y))
                && equal_up_to_sign(e.get(Axis::Y), e.get(Axis::Z)))
            {
                if self.config.emit == Emit::All {
                    self.consider(&code.with_signs(signs), &e, None, path_bits);
                }
                continue;
            }
            self.consider(&code.with_signs(signs), &e, None, path_bits);
        }
    }

    fn analyze_m3(&mut self, chosen: &[PauliOperator], path_bits: u32) {
        let n = self.config.n;
        let code = StabilizerCode::new(n, chosen.to_vec()).expect("shape");
        debug_assert!(code.is_valid());
        self.summary.codes_analyzed += 1;
        let table = SignTable::new_unchecked(&code);
        let signs = chosen
            .iter()
            .enumerate()
            .fold(0u64, |m, (j, g)| m | (((g.phase_exp() == 2) as u64) << j));
        let e = table.enumerators(signs);
        debug_assert_eq!(e, compute_enumerators_unchecked(&code, table.frame()));
        self.consider(&code, &e, Some(true), path_bits);
    }

    fn consider(
        &mut self,
        code: &StabilizerCode,
        e: &SignedEnumeratorSet,
        m3: Option<bool>,
        path_bits: u32,
    ) {
        let m3_code = m3.unwrap_or_else(|| code.is_m3_code());
        let report = report_from_enumerators(code, e, m3_code, &mut self.cache);
        if self.config.mode == SearchMode::M3 {
            assert!(report.t_axis_preserving, "M3-code without axis preservation: {code}");
        }
        if report.t_axis_preserving {
            self.summary.axis_preserving += 1;
            let w_i = report.enumerators.w_i().trimmed().to_vec();
            let w_l = report.enumerators.get(Axis::X).trimmed().to_vec();
            let useful = report.useful;
            let threshold = crate::enumerator::format_decimal(report.threshold_r());
            self.sets
                .entry((w_i.clone(), w_l.clone()))
                .and_modify(|s| s.count += 1)
                .or_insert(EnumeratorSetCount {
                    w_i,
                    w_l,
                    useful,
                    threshold,
                    count: 1,
                });
        }
        if report.useful {
            self.summary.useful += 1;
        }
        let emit = match self.config.emit {
            Emit::Useful => report.useful,
            Emit::AxisPreserving => report.t_axis_preserving,
            Emit::All => true,
        };
        if !emit {
            return;
        }
        if !self.seen.insert(code.canonical_form()) {
            self.summary.duplicates_skipped += 1;
            return;
        }
        self.summary.emitted += 1;
        self.records.push(SearchResultRecord {
            branch: self.branch,
            path_bits,
            report: report.to_json(),
        });
    }
}

fn read_checkpoint(path: &Path, header: &CheckpointHeader) -> Result<Vec<BranchResult>, SearchError> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let mut lines = BufReader::new(file).lines();
    let Some(first) = lines.next() else {
        return Ok(Vec::new());
    };
    let found: CheckpointHeader = serde_json::from_str(&first?)
        .map_err(|e| SearchError::Checkpoint(format!("bad header: {e}")))?;
    if &found != header {
        return Err(SearchError::Checkpoint(format!(
            "checkpoint was written for {found:?}, not {header:?}"
        )));
    }
    let mut done = Vec::new();
    for line in lines {
        let line = line?;
        // a torn final line from an interrupted write is simply redone
        match serde_json::from_str::<BranchResult>(&line) {
            Ok(b) => done.push(b),
            Err(_) => break,
        }
    }
    Ok(done)
}

struct CheckpointWriter {
    file: Mutex<File>,
}

impl CheckpointWriter {
    fn open(path: &Path, header: &CheckpointHeader, done: &[BranchResult]) -> Result<Self, SearchError> {
        // rewrite from the parsed state so a torn line never stays behind
        let mut file = OpenOptions::new().create(true).write(true).truncate(true).open(path)?;
        writeln!(file, "{}", serde_json::to_string(header)?)?;
        for b in done {
            writeln!(file, "{}", serde_json::to_string(b)?)?;
        }
        file.flush()?;
        Ok(Self {
            file: Mutex::new(file),
        })
    }

    fn append(&self, result: &BranchResult) -> Result<(), SearchError> {
        let line = serde_json::to_string(result)?;
        let mut file = self.file.lock().expect("checkpoint lock");
        writeln!(file, "{line}")?;
        file.flush()?;
        Ok(())
    }
}

/// Runs the search described by `config`.
///
/// With a checkpoint path, branches already recorded there are reused and
/// each newly finished branch is appended. On cancellation the finished
/// branches stay in the checkpoint and [`SearchError::Interrupted`] is
/// returned.
pub fn run_search(config: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    config.validate()?;
    let header = config.header();
    let mut done = match &config.checkpoint {
        Some(path) => read_checkpoint(path, &header)?,
        None => Vec::new(),
    };
    let writer = match &config.checkpoint {
        Some(path) => Some(CheckpointWriter::open(path, &header, &done)?),
        None => None,
    };
    let branches = top_level_branches(config);
    let finished: BTreeSet<u64> = done.iter().map(|b| b.branch).collect();
    let todo: Vec<&Branch> = branches.iter().filter(|b| !finished.contains(&b.index)).collect();

    let work = || -> Vec<Result<BranchResult, SearchError>> {
        todo.par_iter()
            .map(|branch| {
                if config.cancel.load(Ordering::Relaxed) {
                    return Err(SearchError::Interrupted);
                }
                let result = Worker::new(config, branch.index).run(branch)?;
                if let Some(w) = &writer {
                    w.append(&result)?;
                }
                Ok(result)
            })
            .collect()
    };
    let results = if config.jobs == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| SearchError::ThreadPool(e.to_string()))?
            .install(work)
    };
    let mut interrupted = false;
    for r in results {
        match r {
            Ok(b) => done.push(b),
            Err(SearchError::Interrupted) => interrupted = true,
            Err(e) => return Err(e),
        }
    }
    if interrupted {
        return Err(SearchError::Interrupted);
    }
    done.sort_by_key(|b| b.branch);
    Ok(aggregate(config, branches.len() as u64, done))
}

fn aggregate(config: &SearchConfig, branches: u64, done: Vec<BranchResult>) -> SearchOutcome {
    let mut total = BranchSummary::default();
    let mut records = Vec::new();
    for b in done {
        total.merge(&b.summary);
        records.extend(b.records);
    }
    SearchOutcome {
        summary: SearchSummary::from_branches(config, branches, &total),
        records,
    }
}

/// Writes records as JSON lines.
pub fn write_records<W: Write>(mut out: W, records: &[SearchResultRecord]) -> Result<(), SearchError> {
    for r in records {
        writeln!(out, "{}", serde_json::to_string(r)?)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records(text: &str) -> Result<Vec<SearchResultRecord>, SearchError> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(SearchError::from))
        .collect()
}
