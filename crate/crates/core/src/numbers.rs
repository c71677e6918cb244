//! Exact cover, domination cover and non-split domination cover pebbling
//! numbers by threshold search over every configuration of a given size.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pebbling::{
    CompositionCursor, Configuration, Goal, GoalMode, Outcome, SearchOptions, SolveVerdict,
    Solver, EXACT_PEBBLE_CAP, MAX_SEARCH_PEBBLES,
};
use crate::vertex_set::VertexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumberKind {
    Cover,
    Dcp,
    Nsdcp,
}

impl NumberKind {
    pub const ALL: [NumberKind; 3] = [NumberKind::Cover, NumberKind::Dcp, NumberKind::Nsdcp];

    pub fn name(self) -> &'static str {
        match self {
            NumberKind::Cover => "cover",
            NumberKind::Dcp => "dcp",
            NumberKind::Nsdcp => "nsdcp",
        }
    }
}

impl fmt::Display for NumberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NumberKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NumberKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown kind {s:?} (cover, dcp, nsdcp)")))
    }
}

/// How the pebbled support is matched against the goal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Semantics {
    /// The support contains a target set.
    Contains,
    /// The support is itself a target set.
    ExactSupport,
}

impl Semantics {
    pub const ALL: [Semantics; 2] = [Semantics::Contains, Semantics::ExactSupport];

    pub fn name(self) -> &'static str {
        match self {
            Semantics::Contains => "contains",
            Semantics::ExactSupport => "exact-support",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Semantics::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown mode {s:?} (contains, exact-support)")))
    }
}

/// The search goal behind `kind` under `semantics`. Only the non-split
/// number has an exact-support variant.
pub fn goal_mode(g: &Graph, kind: NumberKind, semantics: Semantics) -> Result<GoalMode> {
    match (kind, semantics) {
        (NumberKind::Cover, Semantics::Contains) => {
            Ok(GoalMode::CoverSet(VertexSet::full(g.vertex_count())))
        }
        (NumberKind::Dcp, Semantics::Contains) => Ok(GoalMode::ContainsDominating),
        (NumberKind::Nsdcp, Semantics::Contains) => Ok(GoalMode::ContainsNsds),
        (NumberKind::Nsdcp, Semantics::ExactSupport) => Ok(GoalMode::ExactSupportNsds),
        (kind, Semantics::ExactSupport) => Err(Error::Usage(format!(
            "mode exact-support applies to nsdcp only, not {kind}"
        ))),
    }
}

/// `max_v sum_u 2^d(u,v)`: the pebbles a stack needs to cover the graph.
/// `None` for disconnected graphs.
pub fn stacking_value(g: &Graph) -> Option<u64> {
    let dt = g.distances();
    (0..g.vertex_count())
        .map(|v| {
            (0..g.vertex_count()).try_fold(0u64, |acc, u| {
                let d = dt.get(u, v)?;
                acc.checked_add(1u64.checked_shl(d)?)
            })
        })
        .try_fold(0u64, |best, s| Some(best.max(s?)))
}

#[derive(Debug, Clone, Copy)]
pub struct NumberOptions {
    /// Node cap per solver call; `None` keeps every verdict exact.
    pub budget: Option<u64>,
    /// Replay every witness found during sweeps.
    pub check_witnesses: bool,
}

impl Default for NumberOptions {
    fn default() -> Self {
        NumberOptions {
            budget: None,
            check_witnesses: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "configuration")]
pub enum ThresholdOutcome {
    AllSolvable,
    Counterexample(Configuration),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepStats {
    pub shards: usize,
    pub configurations_checked: u64,
    pub nodes_explored: u64,
    pub witnesses_replayed: u64,
}

impl SweepStats {
    fn absorb(&mut self, other: &SweepStats) {
        self.shards += other.shards;
        self.configurations_checked += other.configurations_checked;
        self.nodes_explored += other.nodes_explored;
        self.witnesses_replayed += other.witnesses_replayed;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub digest: String,
    pub kind: NumberKind,
    pub semantics: Semantics,
    pub size: u64,
    pub outcome: ThresholdOutcome,
    pub stats: SweepStats,
}

impl ThresholdReport {
    pub fn is_all_solvable(&self) -> bool {
        self.outcome == ThresholdOutcome::AllSolvable
    }

    pub fn counterexample(&self) -> Option<&Configuration> {
        match &self.outcome {
            ThresholdOutcome::AllSolvable => None,
            ThresholdOutcome::Counterexample(c) => Some(c),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StackedBound {
    pub value: u64,
    /// The vertex whose stack attains the bound.
    pub vertex: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberStats {
    pub configurations_checked: u64,
    pub nodes_explored: u64,
    pub witnesses_replayed: u64,
    pub sweeps: usize,
    pub wall_time_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberResult {
    pub digest: String,
    pub kind: NumberKind,
    pub semantics: Semantics,
    pub mode: GoalMode,
    pub value: u64,
    /// Unsolvable, of size `value - 1`.
    pub worst_witness: Configuration,
    pub stacked_bound: StackedBound,
    pub stats: NumberStats,
}

struct ShardResult {
    counterexample: Option<Vec<u32>>,
    stats: SweepStats,
}

/// Threshold search for one graph, kind and semantics, with the goal
/// compiled once.
pub struct NumberEngine<'g> {
    graph: &'g Graph,
    kind: NumberKind,
    semantics: Semantics,
    goal: Goal,
    options: NumberOptions,
    digest: String,
}

impl<'g> NumberEngine<'g> {
    pub fn new(
        graph: &'g Graph,
        kind: NumberKind,
        semantics: Semantics,
        options: NumberOptions,
    ) -> Result<Self> {
        let goal = Goal::new(graph, goal_mode(graph, kind, semantics)?)?;
        Ok(NumberEngine {
            graph,
            kind,
            semantics,
            goal,
            options,
            digest: graph.canonical_key(),
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn goal(&self) -> &Goal {
        &self.goal
    }

    fn solver(&self) -> Result<Solver<'g>> {
        Ok(Solver::new(self.graph, self.goal.clone())?.with_options(SearchOptions {
            budget: self.options.budget,
            no_pruning: false,
        }))
    }

    /// Largest size the engine will search.
    fn pebble_limit(&self) -> u64 {
        if self.options.budget.is_some() {
            MAX_SEARCH_PEBBLES
        } else {
            EXACT_PEBBLE_CAP
        }
    }

    /// A single verdict from a fresh solver.
    pub fn solve(&self, c: &Configuration) -> Result<SolveVerdict> {
        self.solver()?.solve(c)
    }

    fn exact(&self, verdict: &SolveVerdict, counts: &[u32]) -> Result<()> {
        if verdict.outcome == Outcome::Unknown {
            return Err(Error::Exactness(format!(
                "search budget exhausted on {} for {}",
                Configuration::new(counts.to_vec()),
                self.kind
            )));
        }
        Ok(())
    }

    fn check_witness(&self, verdict: &SolveVerdict, counts: &[u32]) -> Result<()> {
        let Some(witness) = &verdict.witness else {
            return Ok(());
        };
        let mut end = counts.to_vec();
        witness.replay_in_place(self.graph, &mut end).map_err(|e| {
            Error::Exactness(format!("witness {witness} does not replay: {e}"))
        })?;
        if !self.goal.is_satisfied_by_counts(&end) {
            return Err(Error::Exactness(format!(
                "witness {witness} from {} ends short of the goal",
                Configuration::new(counts.to_vec())
            )));
        }
        Ok(())
    }

    fn sweep_shard(&self, solver: &mut Solver<'g>, first: u32, total: u32) -> Result<ShardResult> {
        let n = self.graph.vertex_count();
        let mut stats = SweepStats {
            shards: 1,
            ..SweepStats::default()
        };
        let mut cursor = CompositionCursor::with_first_range(n, total, first, first);
        while cursor.advance() {
            let counts = cursor.counts();
            let verdict = solver.solve_counts(counts)?;
            stats.configurations_checked += 1;
            stats.nodes_explored += verdict.nodes_explored;
            self.exact(&verdict, counts)?;
            if self.options.check_witnesses && verdict.witness.is_some() {
                self.check_witness(&verdict, counts)?;
                stats.witnesses_replayed += 1;
            }
            if !verdict.is_solvable() {
                return Ok(ShardResult {
                    counterexample: Some(counts.to_vec()),
                    stats,
                });
            }
        }
        Ok(ShardResult {
            counterexample: None,
            stats,
        })
    }

    /// Whether every configuration of `size` pebbles reaches the goal; if
    /// not, the lexicographically first one that does not.
    pub fn verify(&self, size: u64) -> Result<ThresholdReport> {
        self.solver()?.check_size(size)?;
        let total = size as u32;
        let n = self.graph.vertex_count();
        // shard i fixes the first coordinate to i; lexicographic order on
        // configurations runs through the shards in index order
        let shard_count = if n == 1 { 1 } else { total as usize + 1 };
        let first_bad = AtomicUsize::new(usize::MAX);
        let results: Vec<Option<Result<ShardResult>>> = (0..shard_count)
            .into_par_iter()
            .map_init(
                || self.solver(),
                |solver, i| {
                    if i > first_bad.load(Ordering::Relaxed) {
                        return None;
                    }
                    let solver = match solver {
                        Ok(s) => s,
                        Err(e) => return Some(Err(Error::InvalidGraph(e.to_string()))),
                    };
                    let first = if n == 1 { total } else { i as u32 };
                    let result = self.sweep_shard(solver, first, total);
                    if matches!(&result, Ok(r) if r.counterexample.is_some()) {
                        first_bad.fetch_min(i, Ordering::Relaxed);
                    }
                    Some(result)
                },
            )
            .collect();

        let mut stats = SweepStats::default();
        let mut outcome = ThresholdOutcome::AllSolvable;
        // shards past the first counterexample may or may not have run;
        // they are ignored so the report does not depend on scheduling
        for result in results {
            let result = result.expect("shards before the first counterexample always run")?;
            stats.absorb(&result.stats);
            if let Some(counts) = result.counterexample {
                outcome = ThresholdOutcome::Counterexample(Configuration::new(counts));
                break;
            }
        }
        Ok(ThresholdReport {
            digest: self.digest.clone(),
            kind: self.kind,
            semantics: self.semantics,
            size,
            outcome,
            stats,
        })
    }

    /// For each vertex the smallest solvable stack; the bound is the largest
    /// of these, ties going to the higher vertex index.
    pub fn stacked_lower_bound(&self) -> Result<StackedBound> {
        let mut solver = self.solver()?;
        let n = self.graph.vertex_count();
        let limit = self.pebble_limit();
        let mut best = StackedBound {
            value: 0,
            vertex: 0,
        };
        for v in 0..n {
            let mut size = 0u64;
            loop {
                let c = Configuration::stack(n, v, size as u32);
                let verdict = solver.solve(&c)?;
                self.exact(&verdict, c.counts())?;
                if verdict.is_solvable() {
                    break;
                }
                size += 1;
                if size > limit {
                    return Err(Error::Exactness(format!(
                        "no stack of at most {limit} pebbles on vertex {v} reaches the {} goal",
                        self.kind
                    )));
                }
            }
            if size >= best.value {
                best = StackedBound {
                    value: size,
                    vertex: v,
                };
            }
        }
        Ok(best)
    }

    /// The exact number, certified by exhaustive sweeps.
    pub fn compute(&self) -> Result<NumberResult> {
        let started = Instant::now();
        let bound = self.stacked_lower_bound()?;
        if bound.value == 0 {
            return Err(Error::InvalidGraph(
                "the goal is met by the empty configuration".into(),
            ));
        }
        let mut reports: BTreeMap<u64, ThresholdReport> = BTreeMap::new();
        let passes = |size: u64, reports: &mut BTreeMap<u64, ThresholdReport>| -> Result<bool> {
            if let Some(r) = reports.get(&size) {
                return Ok(r.is_all_solvable());
            }
            log::debug!("{} sweep at {size}", self.kind);
            let report = self.verify(size)?;
            let ok = report.is_all_solvable();
            reports.insert(size, report);
            Ok(ok)
        };

        let limit = self.pebble_limit();
        let low = bound.value;
        let value = if passes(low, &mut reports)? {
            low
        } else if self.goal.mode().is_monotone() {
            let anchor = stacking_value(self.graph)
                .unwrap_or(limit)
                .clamp(low + 1, limit.max(low + 1));
            let (mut lo, mut hi) = (low + 1, anchor);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if passes(mid, &mut reports)? {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            while !passes(lo, &mut reports)? {
                lo += 1;
                if lo > limit {
                    return Err(Error::Exactness(format!(
                        "no threshold at or below {limit} pebbles"
                    )));
                }
            }
            lo
        } else {
            let mut size = low + 1;
            while !passes(size, &mut reports)? {
                size += 1;
                if size > limit {
                    return Err(Error::Exactness(format!(
                        "no threshold at or below {limit} pebbles"
                    )));
                }
            }
            size
        };

        let n = self.graph.vertex_count();
        let worst_witness = match reports.get(&(value - 1)).and_then(|r| r.counterexample()) {
            Some(c) => c.clone(),
            None => Configuration::stack(n, bound.vertex, (value - 1) as u32),
        };
        let check = self.solve(&worst_witness)?;
        if check.outcome != Outcome::Unsolvable {
            return Err(Error::Exactness(format!(
                "worst witness {worst_witness} did not re-verify as unsolvable"
            )));
        }

        let mut stats = NumberStats {
            sweeps: reports.len(),
            ..NumberStats::default()
        };
        for r in reports.values() {
            stats.configurations_checked += r.stats.configurations_checked;
            stats.nodes_explored += r.stats.nodes_explored;
            stats.witnesses_replayed += r.stats.witnesses_replayed;
        }
        stats.wall_time_ms = started.elapsed().as_millis() as u64;
        Ok(NumberResult {
            digest: self.digest.clone(),
            kind: self.kind,
            semantics: self.semantics,
            mode: self.goal.mode().clone(),
            value,
            worst_witness,
            stacked_bound: bound,
            stats,
        })
    }
}

pub fn verify_threshold(
    g: &Graph,
    size: u64,
    kind: NumberKind,
    semantics: Semantics,
    options: NumberOptions,
) -> Result<ThresholdReport> {
    NumberEngine::new(g, kind, semantics, options)?.verify(size)
}

pub fn stacked_lower_bound(
    g: &Graph,
    kind: NumberKind,
    semantics: Semantics,
) -> Result<StackedBound> {
    NumberEngine::new(g, kind, semantics, NumberOptions::default())?.stacked_lower_bound()
}

pub fn compute_number(
    g: &Graph,
    kind: NumberKind,
    semantics: Semantics,
    options: NumberOptions,
) -> Result<NumberResult> {
    NumberEngine::new(g, kind, semantics, options)?.compute()
}

/// A configuration drawn uniformly from all compositions of `total` into
/// `parts` parts.
pub fn random_configuration<R: Rng + ?Sized>(rng: &mut R, parts: usize, total: u32) -> Configuration {
    assert!(parts > 0, "a configuration needs at least one vertex");
    let slots = total as usize + parts - 1;
    let mut bars = sample(rng, slots, parts - 1).into_vec();
    bars.sort_unstable();
    let mut counts = Vec::with_capacity(parts);
    let mut prev = 0usize;
    for b in bars {
        counts.push((b - prev) as u32);
        prev = b + 1;
    }
    counts.push((slots - prev) as u32);
    Configuration::new(counts)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::graph::{build_generator, middle_graph, Family, GeneratorSpec};

    fn gen(family: Family, n: usize) -> Graph {
        build_generator(GeneratorSpec::new(family, n)).unwrap()
    }

    fn middle_path(n: usize) -> Graph {
        middle_graph(&gen(Family::Path, n)).unwrap()
    }

    const OPTS: NumberOptions = NumberOptions {
        budget: None,
        check_witnesses: true,
    };

    /// Brute force: smallest N at which a fresh solver accepts every
    /// configuration.
    fn brute_number(g: &Graph, kind: NumberKind, semantics: Semantics) -> u64 {
        let engine = NumberEngine::new(g, kind, semantics, OPTS).unwrap();
        (1..)
            .find(|&size| {
                crate::pebbling::Compositions::new(g.vertex_count(), size as u32)
                    .all(|c| engine.solve(&c).unwrap().is_solvable())
            })
            .unwrap()
    }

    #[test]
    fn threshold_examples_on_middle_path() {
        let m = middle_path(2);
        let r = verify_threshold(&m, 3, NumberKind::Nsdcp, Semantics::Contains, OPTS).unwrap();
        assert!(r.is_all_solvable());
        assert_eq!(r.stats.configurations_checked, 10);
        let r = verify_threshold(&m, 2, NumberKind::Nsdcp, Semantics::Contains, OPTS).unwrap();
        // vertex order x1, x2, y1: the stack on the edge vertex
        assert_eq!(r.counterexample().unwrap().to_string(), "0,0,2");
    }

    #[test]
    fn path_three_cover_threshold() {
        let p = gen(Family::Path, 3);
        let r = verify_threshold(&p, 7, NumberKind::Cover, Semantics::Contains, OPTS).unwrap();
        assert!(r.is_all_solvable());
        let r = verify_threshold(&p, 6, NumberKind::Cover, Semantics::Contains, OPTS).unwrap();
        assert!(!r.is_all_solvable());
    }

    #[test]
    fn compute_examples() {
        let r = compute_number(&gen(Family::Complete, 5), NumberKind::Nsdcp, Semantics::Contains, OPTS)
            .unwrap();
        assert_eq!(r.value, 1);
        assert_eq!(r.worst_witness.size(), 0);
        let r = compute_number(&gen(Family::Path, 4), NumberKind::Cover, Semantics::Contains, OPTS)
            .unwrap();
        assert_eq!(r.value, 15);
        assert_eq!(r.worst_witness, Configuration::stack(4, 3, 14));
    }

    #[test]
    fn stacked_bound_examples() {
        let b = stacked_lower_bound(&middle_path(2), NumberKind::Nsdcp, Semantics::Contains).unwrap();
        assert_eq!(b, StackedBound { value: 3, vertex: 2 });
        let b = stacked_lower_bound(&gen(Family::Path, 4), NumberKind::Cover, Semantics::Contains)
            .unwrap();
        assert_eq!(b.value, 15);
        let b = stacked_lower_bound(&gen(Family::Complete, 3), NumberKind::Nsdcp, Semantics::Contains)
            .unwrap();
        assert_eq!(b.value, 1);
    }

    #[test]
    fn numbers_match_brute_force_on_small_graphs() {
        let graphs = [
            gen(Family::Path, 3),
            gen(Family::Path, 4),
            gen(Family::Cycle, 4),
            gen(Family::Cycle, 5),
            gen(Family::Complete, 4),
            gen(Family::Wheel, 5),
            gen(Family::Fan, 4),
            middle_path(2),
            middle_path(3),
        ];
        for g in &graphs {
            for (kind, semantics) in [
                (NumberKind::Dcp, Semantics::Contains),
                (NumberKind::Nsdcp, Semantics::Contains),
                (NumberKind::Nsdcp, Semantics::ExactSupport),
            ] {
                let r = compute_number(g, kind, semantics, OPTS).unwrap();
                assert_eq!(r.value, brute_number(g, kind, semantics), "{kind} {semantics}");
                assert!(r.stacked_bound.value <= r.value);
                assert_eq!(r.worst_witness.size(), r.value - 1);
            }
        }
    }

    #[test]
    fn exact_support_is_rejected_outside_nsdcp() {
        let g = gen(Family::Path, 3);
        assert!(matches!(
            compute_number(&g, NumberKind::Cover, Semantics::ExactSupport, OPTS),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn budget_exhaustion_is_an_exactness_failure() {
        let g = gen(Family::Path, 5);
        let opts = NumberOptions {
            budget: Some(2),
            check_witnesses: true,
        };
        assert!(matches!(
            verify_threshold(&g, 31, NumberKind::Cover, Semantics::Contains, opts),
            Err(Error::Exactness(_))
        ));
    }

    #[test]
    fn reports_are_deterministic() {
        let g = gen(Family::Cycle, 5);
        let a = compute_number(&g, NumberKind::Nsdcp, Semantics::Contains, OPTS).unwrap();
        let b = compute_number(&g, NumberKind::Nsdcp, Semantics::Contains, OPTS).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.worst_witness, b.worst_witness);
    }

    #[test]
    fn stacking_value_of_paths() {
        for n in 1..8 {
            assert_eq!(stacking_value(&gen(Family::Path, n)), Some((1 << n) - 1));
        }
        let g = Graph::unlabeled(3, [(0, 1)]).unwrap();
        assert_eq!(stacking_value(&g), None);
    }

    #[test]
    fn random_configurations_have_the_requested_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for parts in 1..6 {
            for total in 0..20 {
                let c = random_configuration(&mut rng, parts, total);
                assert_eq!(c.vertex_count(), parts);
                assert_eq!(c.size(), u64::from(total));
            }
        }
    }
}
