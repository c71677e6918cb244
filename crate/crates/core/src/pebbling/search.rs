//! Exact decision procedures over pebbling configurations.
//!
//! The search is a depth-first walk over configurations. Every move removes
//! one pebble from the board, so the configuration graph is acyclic and
//! layered by size; a configuration whose subtree was exhausted without
//! reaching the goal is unsolvable outright and is remembered as such for
//! the lifetime of the [`Solver`], across calls to [`Solver::solve`].
//!
//! States are packed eight bits per vertex into a `u128`, which caps the
//! engine at [`MAX_SEARCH_VERTICES`] vertices and [`MAX_SEARCH_PEBBLES`]
//! pebbles.

use std::sync::Arc;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use super::config::{Configuration, Move, MoveSequence};
use crate::domination::{minimal_sets, DominationKind, DominationMasks, TargetFamily};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

pub const MAX_SEARCH_VERTICES: usize = 16;
pub const MAX_SEARCH_PEBBLES: u64 = 255;
/// Instances at or below these sizes may be searched without a node budget.
pub const EXACT_VERTEX_CAP: usize = 10;
pub const EXACT_PEBBLE_CAP: u64 = 64;

const DEAD_SET_LIMIT: usize = 4 << 20;

/// What a configuration has to be moved into.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GoalMode {
    /// The support contains a non-split dominating set.
    ContainsNsds,
    /// The support is itself a non-split dominating set.
    ExactSupportNsds,
    /// Every vertex of the set holds a pebble.
    CoverSet(VertexSet),
    /// The support contains a dominating set.
    ContainsDominating,
}

impl GoalMode {
    pub fn label(&self) -> &'static str {
        match self {
            GoalMode::ContainsNsds => "contains",
            GoalMode::ExactSupportNsds => "exact-support",
            GoalMode::CoverSet(_) => "cover-set",
            GoalMode::ContainsDominating => "contains-dominating",
        }
    }

    /// Whether solvability is preserved by adding pebbles.
    pub fn is_monotone(&self) -> bool {
        !matches!(self, GoalMode::ExactSupportNsds)
    }

    fn family_kind(&self) -> Option<DominationKind> {
        match self {
            GoalMode::ContainsNsds | GoalMode::ExactSupportNsds => {
                Some(DominationKind::NonsplitDominating)
            }
            GoalMode::ContainsDominating => Some(DominationKind::Dominating),
            GoalMode::CoverSet(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Solvable,
    Unsolvable,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveVerdict {
    pub outcome: Outcome,
    /// Present exactly when the outcome is `Solvable`.
    pub witness: Option<MoveSequence>,
    pub nodes_explored: u64,
    /// Configurations expanded and proven unsolvable during this call.
    pub states_expanded: u64,
    pub budget_hit: bool,
}

impl SolveVerdict {
    pub fn is_solvable(&self) -> bool {
        self.outcome == Outcome::Solvable
    }
}

/// A goal compiled to lookup tables over support masks.
#[derive(Debug, Clone)]
pub struct Goal {
    mode: GoalMode,
    /// Indexed by the support of a configuration.
    satisfied: Arc<[bool]>,
    /// Indexed by the set of vertices a pebble can still reach: false only if
    /// no reachable configuration can satisfy the goal.
    feasible: Arc<[bool]>,
    /// Target sets steering move order; never consulted for correctness.
    members: Arc<[u64]>,
}

/// `closure[m]` is true when some `s ⊆ m` has `base[s]`.
fn upward_closure(base: &[bool]) -> Vec<bool> {
    let mut closure = base.to_vec();
    for m in 0..closure.len() {
        if !closure[m] {
            closure[m] = VertexSet(m as u64).iter().any(|v| closure[m & !(1 << v)]);
        }
    }
    closure
}

impl Goal {
    /// Compiles `mode` for `g`, enumerating the target family when needed.
    pub fn new(g: &Graph, mode: GoalMode) -> Result<Goal> {
        match mode.family_kind() {
            Some(kind) => Goal::from_family(g, &minimal_sets(g, kind)?, mode),
            None => Goal::from_family(
                g,
                &TargetFamily {
                    digest: g.canonical_key(),
                    kind: DominationKind::Dominating,
                    sets: Vec::new(),
                },
                mode,
            ),
        }
    }

    pub fn from_family(g: &Graph, family: &TargetFamily, mode: GoalMode) -> Result<Goal> {
        check_search_size(g)?;
        if let Some(kind) = mode.family_kind() {
            if family.kind != kind || family.digest != g.canonical_key() {
                return Err(Error::InvalidGraph(format!(
                    "target family ({:?}) does not match the graph and goal {}",
                    family.kind,
                    mode.label()
                )));
            }
        }
        let size = 1usize << g.vertex_count();
        let (satisfied, feasible, members) = match &mode {
            GoalMode::ContainsNsds | GoalMode::ContainsDominating => {
                let mut base = vec![false; size];
                for s in &family.sets {
                    base[s.0 as usize] = true;
                }
                let closure = upward_closure(&base);
                let members: Vec<u64> = family.sets.iter().map(|s| s.0).collect();
                (closure.clone(), closure, members)
            }
            GoalMode::CoverSet(target) => {
                if let Some(v) = target.iter().find(|&v| v >= g.vertex_count()) {
                    return Err(Error::VertexOutOfRange {
                        vertex: v,
                        vertex_count: g.vertex_count(),
                    });
                }
                let table: Vec<bool> = (0..size as u64).map(|m| target.0 & !m == 0).collect();
                (table.clone(), table, vec![target.0])
            }
            GoalMode::ExactSupportNsds => {
                let exact = DominationMasks::new(g)?.table(DominationKind::NonsplitDominating);
                let feasible = upward_closure(&exact);
                let members: Vec<u64> = family.sets.iter().map(|s| s.0).collect();
                (exact, feasible, members)
            }
        };
        Ok(Goal {
            mode,
            satisfied: satisfied.into(),
            feasible: feasible.into(),
            members: Vec::<u64>::into(members),
        })
    }

    pub fn mode(&self) -> &GoalMode {
        &self.mode
    }

    /// Whether a configuration with this support meets the goal as it stands.
    pub fn is_satisfied_by(&self, c: &Configuration) -> bool {
        self.is_satisfied_by_counts(c.counts())
    }

    pub(crate) fn is_satisfied_by_counts(&self, counts: &[u32]) -> bool {
        let support = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .fold(0usize, |m, (v, _)| m | 1 << v);
        self.satisfied.get(support).copied().unwrap_or(false)
    }
}

fn check_search_size(g: &Graph) -> Result<()> {
    if g.vertex_count() > MAX_SEARCH_VERTICES {
        return Err(Error::InstanceTooLarge {
            what: "vertex count for pebbling search",
            actual: g.vertex_count(),
            cap: MAX_SEARCH_VERTICES,
        });
    }
    if g.vertex_count() == 0 {
        return Err(Error::InvalidGraph("pebbling on an empty graph".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    /// Node cap per call; `None` means exhaustive.
    pub budget: Option<u64>,
    /// Disable the weight-based pruning (for cross-checks only).
    pub no_pruning: bool,
}

enum Step {
    Found,
    Dead,
    Abort,
}

type Weights = [u64; MAX_SEARCH_VERTICES];

/// Reusable search context for one graph and goal.
pub struct Solver<'g> {
    graph: &'g Graph,
    n: usize,
    neighbors: Vec<Vec<u8>>,
    /// `scaled[u][t] = 2^(max_d - d(u, t))`, zero across components.
    scaled: Vec<Weights>,
    /// Weight one, scaled by `2^max_d`.
    unit: u64,
    closer: Vec<Vec<u64>>,
    goal: Goal,
    options: SearchOptions,
    dead: FxHashSet<u128>,
    path: Vec<Move>,
    move_buffers: Vec<Vec<u32>>,
    nodes: u64,
    expanded: u64,
}

impl<'g> Solver<'g> {
    pub fn new(graph: &'g Graph, goal: Goal) -> Result<Self> {
        check_search_size(graph)?;
        let n = graph.vertex_count();
        let dt = graph.distances();
        let max_d = dt.max_finite();
        let mut scaled = vec![[0u64; MAX_SEARCH_VERTICES]; n];
        for (u, row) in scaled.iter_mut().enumerate() {
            for (t, slot) in row.iter_mut().enumerate().take(n) {
                if let Some(d) = dt.get(u, t) {
                    *slot = 1 << (max_d - d);
                }
            }
        }
        // closer[u][v]: targets t with d(v, t) < d(u, t)
        let closer = (0..n)
            .map(|u| {
                (0..n)
                    .map(|v| {
                        (0..n)
                            .filter(|&t| match (dt.get(u, t), dt.get(v, t)) {
                                (Some(a), Some(b)) => b < a,
                                _ => false,
                            })
                            .fold(0u64, |m, t| m | 1 << t)
                    })
                    .collect()
            })
            .collect();
        Ok(Solver {
            graph,
            n,
            neighbors: (0..n)
                .map(|v| graph.neighbors(v).iter().map(|&u| u as u8).collect())
                .collect(),
            scaled,
            unit: 1 << max_d,
            closer,
            goal,
            options: SearchOptions::default(),
            dead: FxHashSet::default(),
            path: Vec::new(),
            move_buffers: Vec::new(),
            nodes: 0,
            expanded: 0,
        })
    }

    pub fn for_mode(graph: &'g Graph, mode: GoalMode) -> Result<Self> {
        Solver::new(graph, Goal::new(graph, mode)?)
    }

    pub fn with_options(mut self, options: SearchOptions) -> Self {
        self.options = options;
        self
    }

    pub fn set_budget(&mut self, budget: Option<u64>) {
        self.options.budget = budget;
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn goal(&self) -> &Goal {
        &self.goal
    }

    pub fn solve(&mut self, c: &Configuration) -> Result<SolveVerdict> {
        c.check_graph(self.graph)?;
        self.solve_counts(c.counts())
    }

    /// Checks that configurations of `size` pebbles may be searched with
    /// the current options.
    pub fn check_size(&self, size: u64) -> Result<()> {
        if size > MAX_SEARCH_PEBBLES {
            return Err(Error::InstanceTooLarge {
                what: "pebble count for pebbling search",
                actual: size as usize,
                cap: MAX_SEARCH_PEBBLES as usize,
            });
        }
        if self.options.budget.is_none() && (self.n > EXACT_VERTEX_CAP || size > EXACT_PEBBLE_CAP)
        {
            return Err(Error::Usage(format!(
                "a node budget is required beyond {EXACT_VERTEX_CAP} vertices or \
                 {EXACT_PEBBLE_CAP} pebbles (got {} vertices, {size} pebbles)",
                self.n
            )));
        }
        Ok(())
    }

    /// As [`Solver::solve`], for a count vector already known to match the
    /// graph.
    pub(crate) fn solve_counts(&mut self, counts: &[u32]) -> Result<SolveVerdict> {
        debug_assert_eq!(counts.len(), self.n);
        self.check_size(counts.iter().map(|&c| u64::from(c)).sum())?;
        if self.dead.len() > DEAD_SET_LIMIT {
            self.dead.clear();
        }
        let mut state = 0u128;
        let mut support = 0u64;
        let mut weights = [0u64; MAX_SEARCH_VERTICES];
        for (v, &count) in counts.iter().enumerate() {
            if count > 0 {
                state |= u128::from(count) << (8 * v);
                support |= 1 << v;
                for (t, w) in weights.iter_mut().enumerate().take(self.n) {
                    *w += u64::from(count) * self.scaled[v][t];
                }
            }
        }
        self.nodes = 0;
        self.expanded = 0;
        self.path.clear();
        let step = self.dfs(state, support, &weights, 0);
        let (outcome, witness) = match step {
            Step::Found => (Outcome::Solvable, Some(MoveSequence(self.path.clone()))),
            Step::Dead => (Outcome::Unsolvable, None),
            Step::Abort => (Outcome::Unknown, None),
        };
        Ok(SolveVerdict {
            outcome,
            witness,
            nodes_explored: self.nodes,
            states_expanded: self.expanded,
            budget_hit: matches!(step, Step::Abort),
        })
    }

    fn weight_ok(&self, weights: &Weights) -> u64 {
        weights[..self.n]
            .iter()
            .enumerate()
            .filter(|(_, &w)| w >= self.unit)
            .fold(0u64, |m, (t, _)| m | 1 << t)
    }

    /// Target set used to rank moves: the member with the fewest uncovered
    /// vertices among those still feasible.
    fn focus(&self, support: u64, reachable: u64) -> u64 {
        let mut best = 0u64;
        let mut best_missing = u32::MAX;
        for &m in self.goal.members.iter() {
            if m & !reachable != 0 {
                continue;
            }
            let missing = (m & !support).count_ones();
            if missing < best_missing {
                best = m;
                best_missing = missing;
            }
        }
        best
    }

    fn dfs(&mut self, state: u128, support: u64, weights: &Weights, depth: usize) -> Step {
        self.nodes += 1;
        if self.options.budget.is_some_and(|b| self.nodes > b) {
            return Step::Abort;
        }
        if self.goal.satisfied[support as usize] {
            return Step::Found;
        }
        let reachable = self.weight_ok(weights);
        if !self.options.no_pruning && !self.goal.feasible[reachable as usize] {
            return Step::Dead;
        }
        if self.dead.contains(&state) {
            return Step::Dead;
        }

        let focus = self.focus(support, reachable);
        let uncovered = focus & !support;
        let exact = matches!(self.goal.mode, GoalMode::ExactSupportNsds);
        let mut moves = self
            .move_buffers
            .get_mut(depth)
            .map(std::mem::take)
            .unwrap_or_default();
        moves.clear();
        let mut sources = support;
        while sources != 0 {
            let u = sources.trailing_zeros() as usize;
            sources &= sources - 1;
            let count = (state >> (8 * u)) as u8;
            if count < 2 {
                continue;
            }
            let drains = count == 2 && focus >> u & 1 == 1;
            for &v in &self.neighbors[u] {
                let v = v as usize;
                let class: u32 = if drains {
                    3
                } else if uncovered >> v & 1 == 1 {
                    0
                } else if self.closer[u][v] & uncovered != 0 {
                    1
                } else if exact && focus >> u & 1 == 0 {
                    1
                } else {
                    2
                };
                moves.push(class << 16 | (u as u32) << 8 | v as u32);
            }
        }
        moves.sort_unstable();

        let mut result = Step::Dead;
        for &key in &moves {
            let u = (key >> 8 & 0xff) as usize;
            let v = (key & 0xff) as usize;
            let next_state = state - (2u128 << (8 * u)) + (1u128 << (8 * v));
            let mut next_support = support | 1 << v;
            if (next_state >> (8 * u)) as u8 == 0 {
                next_support &= !(1 << u);
            }
            let mut next_weights = *weights;
            for (t, w) in next_weights.iter_mut().enumerate().take(self.n) {
                *w = *w + self.scaled[v][t] - 2 * self.scaled[u][t];
            }
            self.path.push(Move { from: u, to: v });
            match self.dfs(next_state, next_support, &next_weights, depth + 1) {
                Step::Found => {
                    result = Step::Found;
                    break;
                }
                Step::Abort => {
                    result = Step::Abort;
                    break;
                }
                Step::Dead => {
                    self.path.pop();
                }
            }
        }
        if self.move_buffers.len() <= depth {
            self.move_buffers.resize_with(depth + 1, Vec::new);
        }
        self.move_buffers[depth] = moves;
        if matches!(result, Step::Dead) {
            self.dead.insert(state);
            self.expanded += 1;
        }
        result
    }
}

/// Can `c` be moved so that every vertex of `target` holds a pebble?
pub fn can_cover_target(
    g: &Graph,
    c: &Configuration,
    target: VertexSet,
    budget: Option<u64>,
) -> Result<SolveVerdict> {
    let goal = Goal::from_family(
        g,
        &TargetFamily {
            digest: g.canonical_key(),
            kind: DominationKind::Dominating,
            sets: Vec::new(),
        },
        GoalMode::CoverSet(target),
    )?;
    Solver::new(g, goal)?
        .with_options(SearchOptions {
            budget,
            ..Default::default()
        })
        .solve(c)
}

/// Decides whether `c` can reach the goal described by `mode`. For the
/// containment modes `family` must be the graph's inclusion-minimal family
/// of the matching kind.
pub fn reach_goal(
    g: &Graph,
    c: &Configuration,
    family: &TargetFamily,
    mode: &GoalMode,
    budget: Option<u64>,
) -> Result<SolveVerdict> {
    let goal = Goal::from_family(g, family, mode.clone())?;
    Solver::new(g, goal)?
        .with_options(SearchOptions {
            budget,
            ..Default::default()
        })
        .solve(c)
}
