use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{DistanceTable, Graph};

/// Pebble counts per vertex, in vertex-index order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    counts: Vec<u32>,
    size: u64,
}

impl Configuration {
    pub fn new(counts: Vec<u32>) -> Self {
        let size = counts.iter().map(|&c| u64::from(c)).sum();
        Configuration { counts, size }
    }

    pub fn empty(vertex_count: usize) -> Self {
        Configuration::new(vec![0; vertex_count])
    }

    /// All `size` pebbles on `vertex`.
    pub fn stack(vertex_count: usize, vertex: usize, size: u32) -> Self {
        let mut counts = vec![0; vertex_count];
        counts[vertex] = size;
        Configuration::new(counts)
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn get(&self, v: usize) -> u32 {
        self.counts[v]
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn vertex_count(&self) -> usize {
        self.counts.len()
    }

    /// Vertices holding at least one pebble.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(v, _)| v)
    }

    /// The vertex holding every pebble, when there is exactly one.
    pub fn stacked_vertex(&self) -> Option<usize> {
        let mut support = self.support();
        match (support.next(), support.next()) {
            (Some(v), None) => Some(v),
            _ => None,
        }
    }

    pub(crate) fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.counts.len() == g.vertex_count() {
            Ok(())
        } else {
            Err(Error::ConfigurationLength {
                expected: g.vertex_count(),
                actual: self.counts.len(),
            })
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let counts = s
            .split(',')
            .map(|field| {
                field
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad pebble count {field:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Configuration::new(counts))
    }
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    pub from: usize,
    pub to: usize,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.from, self.to)
    }
}

/// Removes two pebbles from `from` and adds one to its neighbor `to`.
pub fn apply_move(g: &Graph, c: &Configuration, from: usize, to: usize) -> Result<Configuration> {
    c.check_graph(g)?;
    g.check_vertex(from)?;
    g.check_vertex(to)?;
    if !g.has_edge(from, to) {
        return Err(Error::IllegalMove {
            from,
            to,
            reason: "not an edge",
        });
    }
    if c.counts[from] < 2 {
        return Err(Error::IllegalMove {
            from,
            to,
            reason: "fewer than two pebbles at the source",
        });
    }
    let mut counts = c.counts.clone();
    counts[from] -= 2;
    counts[to] += 1;
    Ok(Configuration {
        counts,
        size: c.size - 1,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MoveSequence(pub Vec<Move>);

impl MoveSequence {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Applies every move in order, failing on the first illegal one.
    pub fn replay(&self, g: &Graph, start: &Configuration) -> Result<Configuration> {
        self.0
            .iter()
            .try_fold(start.clone(), |c, m| apply_move(g, &c, m.from, m.to))
    }

    /// Replays onto a bare count vector without allocating.
    pub fn replay_in_place(&self, g: &Graph, counts: &mut [u32]) -> Result<()> {
        for m in &self.0 {
            if !g.has_edge(m.from, m.to) {
                return Err(Error::IllegalMove {
                    from: m.from,
                    to: m.to,
                    reason: "not an edge",
                });
            }
            if counts[m.from] < 2 {
                return Err(Error::IllegalMove {
                    from: m.from,
                    to: m.to,
                    reason: "fewer than two pebbles at the source",
                });
            }
            counts[m.from] -= 2;
            counts[m.to] += 1;
        }
        Ok(())
    }
}

impl fmt::Display for MoveSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for MoveSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(MoveSequence::default());
        }
        s.split(',')
            .map(|item| {
                let (a, b) = item
                    .trim()
                    .split_once("->")
                    .ok_or_else(|| Error::Parse(format!("bad move {item:?}")))?;
                let parse = |x: &str| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad move {item:?}")))
                };
                Ok(Move {
                    from: parse(a)?,
                    to: parse(b)?,
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(MoveSequence)
    }
}

/// Exact dyadic rational `numerator / 2^exponent`.
#[derive(Debug, Clone, Copy)]
pub struct Dyadic {
    numerator: u128,
    exponent: u32,
}

impl Dyadic {
    pub fn new(numerator: u128, exponent: u32) -> Self {
        let shift = numerator.trailing_zeros().min(exponent);
        Dyadic {
            numerator: numerator >> shift,
            exponent: exponent - shift,
        }
    }

    pub fn from_integer(n: u128) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn numerator(self) -> u128 {
        self.numerator
    }

    pub fn denominator(self) -> u128 {
        1 << self.exponent
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        // both are normalized, so scaling the smaller exponent up is exact
        let e = self.exponent.max(other.exponent);
        let a = self.numerator << (e - self.exponent);
        let b = other.numerator << (e - other.exponent);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator())
        }
    }
}

/// Pebbling weight of `c` at `v`: the sum over `u` of `c(u) / 2^d(u, v)`.
/// Vertices in other components contribute nothing.
///
/// # Panics
///
/// If the exact sum does not fit in 128 bits (distances beyond ~90 hops).
pub fn weight(c: &Configuration, v: usize, dt: &DistanceTable) -> Dyadic {
    let terms: Vec<(u128, u32)> = c
        .counts()
        .iter()
        .enumerate()
        .filter(|(_, &count)| count > 0)
        .filter_map(|(u, &count)| dt.get(u, v).map(|d| (u128::from(count), d)))
        .collect();
    let exponent = terms.iter().map(|&(_, d)| d).max().unwrap_or(0);
    let numerator = terms
        .iter()
        .map(|&(count, d)| {
            1u128
                .checked_shl(exponent - d)
                .and_then(|scale| count.checked_mul(scale))
                .expect("pebbling weight overflows 128 bits")
        })
        .fold(0u128, |acc, t| acc.checked_add(t).expect("pebbling weight overflows 128 bits"));
    Dyadic::new(numerator, exponent)
}

/// Cursor over the compositions of `total` into `parts` non-negative parts
/// in ascending lexicographic order, optionally restricted to a range of
/// first-coordinate values.
#[derive(Debug, Clone)]
pub struct CompositionCursor {
    counts: Vec<u32>,
    last_first: u32,
    started: bool,
    done: bool,
}

impl CompositionCursor {
    pub fn new(parts: usize, total: u32) -> Self {
        Self::with_first_range(parts, total, 0, total)
    }

    /// Only compositions whose first part lies in `lo..=hi`.
    pub fn with_first_range(parts: usize, total: u32, lo: u32, hi: u32) -> Self {
        let mut counts = vec![0; parts];
        let done = match parts {
            0 => true,
            1 => !(lo..=hi).contains(&total),
            _ => lo > hi.min(total),
        };
        if !done {
            counts[0] = lo.max(if parts == 1 { total } else { 0 });
            counts[parts - 1] += total - counts[0];
        }
        CompositionCursor {
            counts,
            last_first: hi.min(total),
            started: false,
            done,
        }
    }

    /// Moves to the next composition; returns `false` once exhausted.
    pub fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            return true;
        }
        let n = self.counts.len();
        let Some(k) = (1..n).rev().find(|&k| self.counts[k] > 0) else {
            self.done = true;
            return false;
        };
        let rest = self.counts[k] - 1;
        self.counts[k] = 0;
        self.counts[k - 1] += 1;
        self.counts[n - 1] = rest;
        if self.counts[0] > self.last_first {
            self.done = true;
            return false;
        }
        true
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }
}

/// Every configuration of `size` pebbles on the vertices of `g`, each
/// exactly once, in ascending lexicographic order of count vectors.
pub fn enumerate_configurations(g: &Graph, size: u32) -> Compositions {
    Compositions {
        cursor: CompositionCursor::new(g.vertex_count(), size),
    }
}

pub struct Compositions {
    cursor: CompositionCursor,
}

impl Compositions {
    pub fn new(parts: usize, total: u32) -> Self {
        Compositions {
            cursor: CompositionCursor::new(parts, total),
        }
    }

    pub fn shard(parts: usize, total: u32, first: std::ops::RangeInclusive<u32>) -> Self {
        Compositions {
            cursor: CompositionCursor::with_first_range(parts, total, *first.start(), *first.end()),
        }
    }
}

impl Iterator for Compositions {
    type Item = Configuration;

    fn next(&mut self) -> Option<Configuration> {
        self.cursor
            .advance()
            .then(|| Configuration::new(self.cursor.counts().to_vec()))
    }
}

/// `binomial(total + parts - 1, parts - 1)`, saturating.
pub fn composition_count(parts: usize, total: u32) -> u128 {
    if parts == 0 {
        return 0;
    }
    let k = (parts - 1) as u128;
    let n = u128::from(total) + k;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}
