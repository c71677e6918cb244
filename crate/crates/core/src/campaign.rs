//! Formula-versus-oracle campaign: every closed-form value in the plan is
//! set against an exact computation where the instance is small enough, and
//! the rows are written as CSV, JSON and a plain-text table.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::{Cache, CacheRecord};
use crate::domination::{minimum_set, DominationKind};
use crate::error::{Error, Result};
use crate::expr::parse_graph;
use crate::formulas::{known_value, KnownFamily, Provenance, ValueKind};
use crate::graph::Graph;
use crate::numbers::{stacking_value, NumberEngine, NumberKind, NumberOptions, Semantics};
use crate::pebbling::{Configuration, Outcome};
use crate::ENGINE_VERSION;

pub const CSV_HEADER: &str = "family,n,kind,mode,formula_value,oracle_value,match,runtime_ms";
pub const DEFAULT_MAX_VERTICES: usize = 10;
pub const DEFAULT_MAX_ANCHOR: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CampaignKind {
    Cover,
    Dcp,
    Nsdcp,
    GammaNs,
}

impl CampaignKind {
    pub const ALL: [CampaignKind; 4] = [
        CampaignKind::Cover,
        CampaignKind::Dcp,
        CampaignKind::Nsdcp,
        CampaignKind::GammaNs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CampaignKind::Cover => "cover",
            CampaignKind::Dcp => "dcp",
            CampaignKind::Nsdcp => "nsdcp",
            CampaignKind::GammaNs => "gamma_ns",
        }
    }

    fn number_kind(self) -> Option<NumberKind> {
        match self {
            CampaignKind::Cover => Some(NumberKind::Cover),
            CampaignKind::Dcp => Some(NumberKind::Dcp),
            CampaignKind::Nsdcp => Some(NumberKind::Nsdcp),
            CampaignKind::GammaNs => None,
        }
    }

    fn value_kind(self) -> ValueKind {
        match self {
            CampaignKind::Cover => ValueKind::Cover,
            CampaignKind::Dcp => ValueKind::Dcp,
            CampaignKind::Nsdcp => ValueKind::Nsdcp,
            CampaignKind::GammaNs => ValueKind::GammaNs,
        }
    }
}

impl fmt::Display for CampaignKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CampaignKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.replace('-', "_");
        CampaignKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown kind {s:?} (cover, dcp, nsdcp, gamma_ns)")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignPlan {
    pub families: Vec<KnownFamily>,
    pub n_min: usize,
    pub n_max: usize,
    pub kinds: Vec<CampaignKind>,
    pub modes: Vec<Semantics>,
    pub max_vertices: usize,
    pub max_anchor: u64,
    /// Rows computed concurrently; does not affect the report.
    #[serde(skip)]
    pub workers: usize,
}

impl Default for CampaignPlan {
    fn default() -> Self {
        CampaignPlan {
            families: vec![KnownFamily::MiddlePath, KnownFamily::MiddleCycle],
            n_min: 2,
            n_max: 4,
            kinds: vec![CampaignKind::Nsdcp],
            modes: vec![Semantics::Contains, Semantics::ExactSupport],
            max_vertices: DEFAULT_MAX_VERTICES,
            max_anchor: DEFAULT_MAX_ANCHOR,
            workers: 1,
        }
    }
}

/// Parses `a..b` (inclusive), `a..=b` or a single `a`.
pub fn parse_n_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Usage(format!("bad n-range {s:?}, expected a..b"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let n = num(s)?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchStatus {
    Yes,
    No,
    OracleSkipped,
    /// No closed form is on record for this row.
    NoFormula,
}

impl MatchStatus {
    pub fn name(self) -> &'static str {
        match self {
            MatchStatus::Yes => "yes",
            MatchStatus::No => "no",
            MatchStatus::OracleSkipped => "oracle-skipped",
            MatchStatus::NoFormula => "no-formula",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowDetail {
    pub expression: String,
    pub digest: String,
    pub vertices: usize,
    pub edges: usize,
    /// Unsolvable configuration one pebble short of the oracle value.
    pub worst_witness: Option<Configuration>,
    /// Unsolvable configuration at the formula's value, when the formula
    /// lies below the oracle.
    pub refutation: Option<Configuration>,
    /// Every witness above re-checked as unsolvable by a fresh solver.
    pub witnesses_reverified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignRow {
    pub family: KnownFamily,
    pub n: usize,
    pub kind: CampaignKind,
    pub mode: String,
    pub formula_value: Option<u64>,
    pub oracle_value: Option<u64>,
    #[serde(rename = "match")]
    pub status: MatchStatus,
    #[serde(skip)]
    pub runtime_ms: u64,
    pub witness_summary: String,
    pub provenance: Option<Provenance>,
    /// The cap that blocked the oracle.
    pub skipped_because: Option<String>,
    pub detail: Option<RowDetail>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub rows: usize,
    pub matches: usize,
    pub mismatches: usize,
    pub oracle_skipped: usize,
    pub no_formula: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub engine_version: String,
    pub plan: CampaignPlan,
    pub rows: Vec<CampaignRow>,
    pub summary: CampaignSummary,
}

#[derive(Debug, Clone)]
struct RowSpec {
    family: KnownFamily,
    n: usize,
    kind: CampaignKind,
    semantics: Option<Semantics>,
}

fn row_specs(plan: &CampaignPlan) -> Vec<RowSpec> {
    let mut specs = Vec::new();
    for &family in &plan.families {
        for n in plan.n_min.max(family.minimum())..=plan.n_max {
            for &kind in &plan.kinds {
                if kind == CampaignKind::GammaNs {
                    specs.push(RowSpec {
                        family,
                        n,
                        kind,
                        semantics: None,
                    });
                    continue;
                }
                for &semantics in &plan.modes {
                    if semantics == Semantics::ExactSupport && kind != CampaignKind::Nsdcp {
                        continue;
                    }
                    specs.push(RowSpec {
                        family,
                        n,
                        kind,
                        semantics: Some(semantics),
                    });
                }
            }
        }
    }
    specs
}

/// "stack of k on <name>" for single-vertex configurations, else the count
/// vector.
pub fn witness_summary(g: &Graph, c: &Configuration) -> String {
    if c.size() == 0 {
        return "empty configuration".into();
    }
    match c.stacked_vertex() {
        Some(v) => format!("stack of {} on {}", c.size(), g.name(v)),
        None => c.to_string(),
    }
}

struct Oracle {
    value: u64,
    summary: String,
    worst_witness: Option<Configuration>,
    refutation: Option<Configuration>,
    reverified: bool,
}

fn cap_reason(g: &Graph, spec: &RowSpec, plan: &CampaignPlan) -> Option<String> {
    if g.vertex_count() > plan.max_vertices {
        return Some(format!(
            "vertex cap: {} vertices > {}",
            g.vertex_count(),
            plan.max_vertices
        ));
    }
    if spec.kind.number_kind().is_some() {
        match stacking_value(g) {
            None => return Some("anchor cap: graph is disconnected".into()),
            Some(a) if a > plan.max_anchor => {
                return Some(format!("anchor cap: search anchor {a} > {}", plan.max_anchor))
            }
            Some(_) => {}
        }
    }
    None
}

fn number_oracle(
    g: &Graph,
    kind: NumberKind,
    semantics: Semantics,
    formula: Option<u64>,
    cache: Option<&Cache>,
) -> Result<Oracle> {
    let engine = NumberEngine::new(g, kind, semantics, NumberOptions::default())?;
    let digest = g.canonical_key();
    let (value, worst) = match cache.and_then(|c| c.get(&digest, kind, semantics)) {
        Some(record) => {
            log::info!("{kind}/{semantics} for {digest} served from cache");
            (record.value, record.worst_witness)
        }
        None => {
            let result = engine.compute()?;
            if let Some(cache) = cache {
                cache.put(&CacheRecord::from_result(&result));
            }
            (result.value, result.worst_witness)
        }
    };
    let mut reverified = engine.solve(&worst)?.outcome == Outcome::Unsolvable;
    let refutation = match formula {
        Some(f) if f < value => {
            let report = engine.verify(f)?;
            let c = report.counterexample().cloned();
            if let Some(c) = &c {
                reverified &= engine.solve(c)?.outcome == Outcome::Unsolvable;
            } else {
                reverified = false;
            }
            c
        }
        _ => None,
    };
    Ok(Oracle {
        value,
        summary: witness_summary(g, &worst),
        worst_witness: Some(worst),
        refutation,
        reverified,
    })
}

fn gamma_ns_oracle(g: &Graph) -> Result<Oracle> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let set = minimum_set(g, DominationKind::NonsplitDominating)?;
    let names: Vec<&str> = set.iter().map(|v| g.name(v)).collect();
    Ok(Oracle {
        value: set.len() as u64,
        summary: format!("{{{}}}", names.join(",")),
        worst_witness: None,
        refutation: None,
        reverified: true,
    })
}

fn run_row(spec: &RowSpec, plan: &CampaignPlan, cache: Option<&Cache>) -> Result<CampaignRow> {
    let started = Instant::now();
    let expression = spec.family.expression(spec.n);
    let g = parse_graph(&expression)?;
    let known = known_value(spec.family, spec.kind.value_kind(), spec.n);
    let formula_value = known.map(|k| k.value);
    let mut row = CampaignRow {
        family: spec.family,
        n: spec.n,
        kind: spec.kind,
        mode: spec.semantics.map_or("-", Semantics::name).to_string(),
        formula_value,
        oracle_value: None,
        status: MatchStatus::OracleSkipped,
        runtime_ms: 0,
        witness_summary: String::new(),
        provenance: known.map(|k| k.provenance),
        skipped_because: None,
        detail: None,
    };
    let mut detail = RowDetail {
        expression,
        digest: g.canonical_key(),
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        worst_witness: None,
        refutation: None,
        witnesses_reverified: false,
    };
    if let Some(reason) = cap_reason(&g, spec, plan) {
        row.skipped_because = Some(reason);
        row.detail = Some(detail);
        row.runtime_ms = started.elapsed().as_millis() as u64;
        return Ok(row);
    }
    let oracle = match (spec.kind.number_kind(), spec.semantics) {
        (Some(kind), Some(semantics)) => number_oracle(&g, kind, semantics, formula_value, cache)?,
        _ => gamma_ns_oracle(&g)?,
    };
    row.oracle_value = Some(oracle.value);
    row.witness_summary = oracle.summary;
    row.status = match formula_value {
        None => MatchStatus::NoFormula,
        Some(f) if f == oracle.value => MatchStatus::Yes,
        Some(_) => MatchStatus::No,
    };
    detail.worst_witness = oracle.worst_witness;
    detail.refutation = oracle.refutation;
    detail.witnesses_reverified = oracle.reverified;
    row.detail = Some(detail);
    row.runtime_ms = started.elapsed().as_millis() as u64;
    log::info!(
        "{} n={} {} {}: formula {:?} oracle {:?} ({} ms)",
        row.family,
        row.n,
        row.kind,
        row.mode,
        row.formula_value,
        row.oracle_value,
        row.runtime_ms
    );
    Ok(row)
}

/// Runs every row of the plan. Mismatches are data, not errors; only
/// exactness failures and malformed plans abort.
pub fn run_campaign(plan: &CampaignPlan, cache: Option<&Cache>) -> Result<CampaignReport> {
    if plan.families.is_empty() || plan.kinds.is_empty() || plan.modes.is_empty() {
        return Err(Error::Usage("campaign plan has no families, kinds or modes".into()));
    }
    let specs = row_specs(plan);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.workers.max(1))
        .build()
        .map_err(|e| Error::Usage(format!("cannot start workers: {e}")))?;
    let rows = pool.install(|| {
        specs
            .par_iter()
            .map(|spec| run_row(spec, plan, cache))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut summary = CampaignSummary {
        rows: rows.len(),
        ..CampaignSummary::default()
    };
    for row in &rows {
        match row.status {
            MatchStatus::Yes => summary.matches += 1,
            MatchStatus::No => summary.mismatches += 1,
            MatchStatus::OracleSkipped => summary.oracle_skipped += 1,
            MatchStatus::NoFormula => summary.no_formula += 1,
        }
    }
    Ok(CampaignReport {
        engine_version: ENGINE_VERSION.to_string(),
        plan: plan.clone(),
        rows,
        summary,
    })
}

fn opt(v: Option<u64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn to_csv(report: &CampaignReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.family,
            r.n,
            r.kind,
            r.mode,
            opt(r.formula_value),
            opt(r.oracle_value),
            r.status.name(),
            r.runtime_ms
        );
    }
    out
}

pub fn to_json(report: &CampaignReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

/// Plain-text table, one block per family.
pub fn to_table(report: &CampaignReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "engine {}", report.engine_version);
    let mut families: Vec<KnownFamily> = report.rows.iter().map(|r| r.family).collect();
    families.dedup();
    for family in families {
        let _ = writeln!(out, "\n{family}");
        let _ = writeln!(
            out,
            "  {:>3}  {:<8}  {:<13}  {:>7}  {:>6}  {:<14}  {}",
            "n", "kind", "mode", "formula", "oracle", "match", "witness / note"
        );
        for r in report.rows.iter().filter(|r| r.family == family) {
            let note = r
                .skipped_because
                .clone()
                .unwrap_or_else(|| r.witness_summary.clone());
            let _ = writeln!(
                out,
                "  {:>3}  {:<8}  {:<13}  {:>7}  {:>6}  {:<14}  {}",
                r.n,
                r.kind.name(),
                r.mode,
                opt(r.formula_value),
                opt(r.oracle_value),
                r.status.name(),
                note
            );
        }
    }
    let s = &report.summary;
    let _ = writeln!(
        out,
        "\n{} rows: {} match, {} mismatch, {} oracle-skipped, {} without formula",
        s.rows, s.matches, s.mismatches, s.oracle_skipped, s.no_formula
    );
    out
}

/// Creates `dir` if needed and checks that files can be written into it.
pub fn prepare_output(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let probe = dir.join(".write-probe");
    fs::write(&probe, b"")?;
    fs::remove_file(&probe)?;
    Ok(())
}

/// Writes `campaign.csv`, `campaign.json` and `campaign.txt` into `dir`.
pub fn write_reports(report: &CampaignReport, dir: &Path) -> Result<()> {
    fs::write(dir.join("campaign.csv"), to_csv(report))?;
    fs::write(dir.join("campaign.json"), to_json(report)?)?;
    fs::write(dir.join("campaign.txt"), to_table(report))?;
    Ok(())
}
