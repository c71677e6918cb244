//! Domination and non-split domination: predicates, exact minimum
//! cardinalities, inclusion-minimal families, and the join gadget that maps
//! a domination instance to a non-split domination instance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{join_all, Graph, Label, VertexTag};
use crate::vertex_set::VertexSet;

/// Largest graph the subset enumerations accept by default.
pub const DEFAULT_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DominationKind {
    Dominating,
    NonsplitDominating,
}

/// Inclusion-minimal sets of one kind for a graph, in increasing
/// `(cardinality, mask)` order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetFamily {
    pub digest: String,
    pub kind: DominationKind,
    pub sets: Vec<VertexSet>,
}

impl TargetFamily {
    pub fn min_cardinality(&self) -> Option<usize> {
        self.sets.iter().map(|s| s.len()).min()
    }

    /// Sorted list of sorted index arrays.
    pub fn to_index_lists(&self) -> Vec<Vec<usize>> {
        let mut lists: Vec<Vec<usize>> = self.sets.iter().map(|s| s.to_vec()).collect();
        lists.sort();
        lists
    }
}

/// Closed-neighborhood masks for fast predicate evaluation.
#[derive(Debug, Clone)]
pub(crate) struct DominationMasks {
    n: usize,
    open: Vec<u64>,
    closed: Vec<u64>,
}

impl DominationMasks {
    pub(crate) fn new(g: &Graph) -> Result<Self> {
        if g.vertex_count() > VertexSet::MAX_VERTICES {
            return Err(Error::InstanceTooLarge {
                what: "vertex count",
                actual: g.vertex_count(),
                cap: VertexSet::MAX_VERTICES,
            });
        }
        let open = g.neighbor_masks();
        let closed = open.iter().enumerate().map(|(v, m)| m | 1 << v).collect();
        Ok(DominationMasks {
            n: g.vertex_count(),
            open,
            closed,
        })
    }

    fn all(&self) -> u64 {
        VertexSet::full(self.n).0
    }

    pub(crate) fn dominates(&self, set: u64) -> bool {
        let covered = VertexSet(set)
            .iter()
            .fold(0u64, |acc, v| acc | self.closed[v]);
        covered == self.all()
    }

    /// Whether the vertices of `set` induce a connected subgraph (vacuously
    /// true for the empty set).
    pub(crate) fn induces_connected(&self, set: u64) -> bool {
        if set == 0 {
            return true;
        }
        let mut reached = set & set.wrapping_neg();
        loop {
            let grown = VertexSet(reached)
                .iter()
                .fold(reached, |acc, v| acc | (self.open[v] & set));
            if grown == reached {
                return reached == set;
            }
            reached = grown;
        }
    }

    pub(crate) fn holds(&self, kind: DominationKind, set: u64) -> bool {
        match kind {
            DominationKind::Dominating => self.dominates(set),
            DominationKind::NonsplitDominating => {
                self.dominates(set) && self.induces_connected(self.all() & !set)
            }
        }
    }

    /// Predicate value for every subset, indexed by mask.
    pub(crate) fn table(&self, kind: DominationKind) -> Vec<bool> {
        (0..1u64 << self.n).map(|s| self.holds(kind, s)).collect()
    }
}

fn check_subset(g: &Graph, set: VertexSet) -> Result<()> {
    match set.iter().find(|&v| v >= g.vertex_count()) {
        Some(v) => Err(Error::VertexOutOfRange {
            vertex: v,
            vertex_count: g.vertex_count(),
        }),
        None => Ok(()),
    }
}

fn check_cap(g: &Graph, cap: usize) -> Result<()> {
    if g.vertex_count() > cap {
        Err(Error::InstanceTooLarge {
            what: "vertex count",
            actual: g.vertex_count(),
            cap,
        })
    } else {
        Ok(())
    }
}

pub fn is_dominating(g: &Graph, set: VertexSet) -> Result<bool> {
    check_subset(g, set)?;
    Ok(DominationMasks::new(g)?.dominates(set.0))
}

/// Dominating, and the complement induces a connected subgraph.
pub fn is_nonsplit_dominating(g: &Graph, set: VertexSet) -> Result<bool> {
    check_subset(g, set)?;
    Ok(DominationMasks::new(g)?.holds(DominationKind::NonsplitDominating, set.0))
}

pub fn minimal_sets(g: &Graph, kind: DominationKind) -> Result<TargetFamily> {
    minimal_sets_with_cap(g, kind, DEFAULT_CAP)
}

/// Every inclusion-minimal set of `kind`: sets satisfying the predicate
/// none of whose proper subsets do.
pub fn minimal_sets_with_cap(g: &Graph, kind: DominationKind, cap: usize) -> Result<TargetFamily> {
    check_cap(g, cap)?;
    let holds = DominationMasks::new(g)?.table(kind);
    // satisfied_within[s]: some subset of s (including s) satisfies it
    let mut satisfied_within = vec![false; holds.len()];
    let mut sets = Vec::new();
    for s in 0..holds.len() {
        let any_below = VertexSet(s as u64)
            .iter()
            .any(|v| satisfied_within[s & !(1 << v)]);
        satisfied_within[s] = any_below || holds[s];
        if holds[s] && !any_below {
            sets.push(VertexSet(s as u64));
        }
    }
    sets.sort_by_key(|s| (s.len(), s.0));
    Ok(TargetFamily {
        digest: g.canonical_key(),
        kind,
        sets,
    })
}

/// Smallest set of `kind`, scanning subsets by increasing cardinality and
/// stopping at the first hit. Ties resolve to the smallest mask.
pub fn minimum_set(g: &Graph, kind: DominationKind) -> Result<VertexSet> {
    minimum_set_with_cap(g, kind, DEFAULT_CAP)
}

pub fn minimum_set_with_cap(g: &Graph, kind: DominationKind, cap: usize) -> Result<VertexSet> {
    check_cap(g, cap)?;
    let masks = DominationMasks::new(g)?;
    let n = g.vertex_count();
    for k in 0..=n {
        if let Some(s) = subsets_of_size(n, k).find(|&s| masks.holds(kind, s)) {
            return Ok(VertexSet(s));
        }
    }
    // the full vertex set always dominates and has an empty complement
    unreachable!("vertex set of a graph is always non-split dominating")
}

/// Subsets of `0..n` with exactly `k` elements, in increasing mask order.
pub(crate) fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit: u64 = if n >= 64 { u64::MAX } else { 1 << n };
    let mut next = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some((1u64 << k) - 1)
    };
    std::iter::from_fn(move || {
        let current = next?;
        next = if current == 0 {
            None
        } else {
            // Gosper's hack
            let low = current & current.wrapping_neg();
            let ripple = current.wrapping_add(low);
            let candidate = (((ripple ^ current) >> 2) / low) | ripple;
            (ripple != 0 && candidate < limit).then_some(candidate)
        };
        Some(current)
    })
}

pub fn domination_number(g: &Graph) -> Result<usize> {
    Ok(minimum_set(g, DominationKind::Dominating)?.len())
}

/// Minimum non-split dominating set size. Disconnected inputs are refused.
pub fn nonsplit_domination_number(g: &Graph) -> Result<usize> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(minimum_set(g, DominationKind::NonsplitDominating)?.len())
}

/// `g` joined to an adjacent pair `p`, `q`: every vertex of `g` becomes
/// adjacent to both, and `p`–`q` is an edge. The pair sits at indices
/// `n` and `n + 1`.
pub fn build_np_gadget(g: &Graph) -> Result<Graph> {
    let labels = ["p", "q"]
        .into_iter()
        .map(|name| Label::new(VertexTag::Plain, name))
        .collect();
    let pair = Graph::from_edges(2, [(0, 1)], labels)?;
    join_all(g, &pair)
}
