//! Closed-form values for the pebbling and domination invariants of the
//! graph families, evaluated in exact integer arithmetic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnownFamily {
    MiddlePath,
    MiddleCycle,
    MiddleWheel,
    MiddleFan,
    Complete,
    Wheel,
    Path,
    Cycle,
}

impl KnownFamily {
    pub const ALL: [KnownFamily; 8] = [
        KnownFamily::MiddlePath,
        KnownFamily::MiddleCycle,
        KnownFamily::MiddleWheel,
        KnownFamily::MiddleFan,
        KnownFamily::Complete,
        KnownFamily::Wheel,
        KnownFamily::Path,
        KnownFamily::Cycle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KnownFamily::MiddlePath => "middle_path",
            KnownFamily::MiddleCycle => "middle_cycle",
            KnownFamily::MiddleWheel => "middle_wheel",
            KnownFamily::MiddleFan => "middle_fan",
            KnownFamily::Complete => "complete",
            KnownFamily::Wheel => "wheel",
            KnownFamily::Path => "path",
            KnownFamily::Cycle => "cycle",
        }
    }

    /// Graph expression for the member with parameter `n`.
    pub fn expression(self, n: usize) -> String {
        match self {
            KnownFamily::MiddlePath => format!("middle(path({n}))"),
            KnownFamily::MiddleCycle => format!("middle(cycle({n}))"),
            KnownFamily::MiddleWheel => format!("middle(wheel({n}))"),
            KnownFamily::MiddleFan => format!("middle(fan({n}))"),
            other => format!("{}({n})", other.name()),
        }
    }

    /// Smallest `n` for which the family member exists.
    pub fn minimum(self) -> usize {
        match self {
            KnownFamily::MiddlePath => 2,
            KnownFamily::MiddleCycle | KnownFamily::MiddleFan | KnownFamily::Cycle => 3,
            KnownFamily::MiddleWheel | KnownFamily::Wheel => 4,
            KnownFamily::Complete | KnownFamily::Path => 1,
        }
    }
}

impl fmt::Display for KnownFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for KnownFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        KnownFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    Nsdcp,
    Dcp,
    Cover,
    GammaNs,
}

/// Where a tabulated value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Non-split domination numbers of complete graphs, wheels, paths, cycles.
    NonsplitDominationTable,
    /// Domination cover pebbling number of wheels.
    WheelDominationCover,
    /// Cover pebbling number of paths.
    PathCover,
    /// Every single vertex of a complete graph is non-split dominating.
    CompleteNonsplitCover,
    /// Non-split and plain domination cover numbers agree on wheels.
    WheelNonsplitEqualsDomination,
    MiddlePathClosedForm,
    MiddleCycleClosedForm,
    MiddleWheelClosedForm,
    MiddleFanClosedForm,
}

impl Provenance {
    pub fn describe(self) -> &'static str {
        match self {
            Provenance::NonsplitDominationTable => "non-split domination number table",
            Provenance::WheelDominationCover => "domination cover number of wheels",
            Provenance::PathCover => "cover pebbling number of paths",
            Provenance::CompleteNonsplitCover => "non-split cover number of complete graphs",
            Provenance::WheelNonsplitEqualsDomination => {
                "non-split equals domination cover number on wheels"
            }
            Provenance::MiddlePathClosedForm => "closed form for middle graphs of paths",
            Provenance::MiddleCycleClosedForm => "closed form for middle graphs of cycles",
            Provenance::MiddleWheelClosedForm => "closed form for middle graphs of wheels",
            Provenance::MiddleFanClosedForm => "closed form for middle graphs of fans",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownValue {
    pub family: KnownFamily,
    pub kind: ValueKind,
    pub n: usize,
    pub value: u64,
    pub provenance: Provenance,
    /// Smallest `n` the value is tabulated for.
    pub valid_from: usize,
}

fn pow2(e: usize) -> Result<u64> {
    u32::try_from(e)
        .ok()
        .and_then(|e| 1u64.checked_shl(e))
        .filter(|&p| p <= 1 << 62)
        .ok_or_else(|| Error::Usage(format!("2^{e} exceeds the supported range")))
}

/// `sum_{k=lo}^{hi} 2^k`, via `2^(hi+1) - 2^lo`.
pub fn geometric_sum(lo: usize, hi: usize) -> Result<u64> {
    if hi < lo {
        return Ok(0);
    }
    Ok(pow2(hi + 1)? - pow2(lo)?)
}

fn require(name: &str, n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::Usage(format!("{name} is defined for n >= {min}, got {n}")))
    } else {
        Ok(())
    }
}

fn checked(value: Option<u64>, name: &str, n: usize) -> Result<u64> {
    value.ok_or_else(|| Error::Usage(format!("{name} at n = {n} is out of range")))
}

/// `2^(n+1) - 3`, for `n >= 2`.
pub fn psi_ns_middle_path(n: usize) -> Result<u64> {
    require("middle path formula", n, 2)?;
    checked(pow2(n + 1)?.checked_sub(3), "middle path formula", n)
}

/// Odd `n`: `2 * sum_{k=0}^{ceil(n/2)} 2^k - 8`.
/// Even `n`: `sum_{k=1}^{n/2+1} 2^k - 8 + sum_{k=1}^{n/2} 2^k`.
pub fn psi_ns_middle_cycle(n: usize) -> Result<u64> {
    require("middle cycle formula", n, 3)?;
    let half = n / 2;
    let value = if n % 2 == 1 {
        geometric_sum(0, n.div_ceil(2))?
            .checked_mul(2)
            .and_then(|v| v.checked_sub(8))
    } else {
        (geometric_sum(1, half + 1)? + geometric_sum(1, half)?).checked_sub(8)
    };
    checked(value, "middle cycle formula", n)
}

/// `8 * floor(n/2) + 6` for odd `n`, `8 * floor(n/2) + 10` for even `n`.
pub fn psi_ns_middle_wheel(n: usize) -> Result<u64> {
    require("middle wheel formula", n, 4)?;
    let base = 8 * (n / 2) as u64;
    Ok(if n % 2 == 1 { base + 6 } else { base + 10 })
}

/// `8 * (ceil(n/2) - 1) + 6` for odd `n`, `8 * (floor(n/2) - 2) + 6` for
/// even `n`.
pub fn psi_ns_middle_fan(n: usize) -> Result<u64> {
    require("middle fan formula", n, 3)?;
    let factor = if n % 2 == 1 {
        n.div_ceil(2) - 1
    } else {
        // n >= 4 here, so n/2 - 2 >= 0
        n / 2 - 2
    };
    Ok(8 * factor as u64 + 6)
}

/// Tabulated value for `(family, kind, n)`, when one is on record and `n`
/// lies in its validity range.
pub fn known_value(family: KnownFamily, kind: ValueKind, n: usize) -> Option<KnownValue> {
    use KnownFamily as F;
    use Provenance as P;
    use ValueKind as K;

    let (valid_from, provenance, value) = match (family, kind) {
        (F::MiddlePath, K::Nsdcp) => (2, P::MiddlePathClosedForm, psi_ns_middle_path(n).ok()?),
        (F::MiddleCycle, K::Nsdcp) => (3, P::MiddleCycleClosedForm, psi_ns_middle_cycle(n).ok()?),
        (F::MiddleWheel, K::Nsdcp) => (4, P::MiddleWheelClosedForm, psi_ns_middle_wheel(n).ok()?),
        (F::MiddleFan, K::Nsdcp) => (3, P::MiddleFanClosedForm, psi_ns_middle_fan(n).ok()?),
        (F::Complete, K::GammaNs) => (1, P::NonsplitDominationTable, 1),
        (F::Wheel, K::GammaNs) => (4, P::NonsplitDominationTable, 1),
        (F::Path | F::Cycle, K::GammaNs) => (4, P::NonsplitDominationTable, n as u64 - 2),
        (F::Wheel, K::Dcp) => (4, P::WheelDominationCover, n as u64 - 2),
        (F::Wheel, K::Nsdcp) => (4, P::WheelNonsplitEqualsDomination, n as u64 - 2),
        (F::Complete, K::Nsdcp) => (1, P::CompleteNonsplitCover, 1),
        (F::Path, K::Cover) => (1, P::PathCover, pow2(n).ok()? - 1),
        _ => return None,
    };
    (n >= valid_from).then_some(KnownValue {
        family,
        kind,
        n,
        value,
        provenance,
        valid_from,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn literal_sum(lo: usize, hi: usize) -> u64 {
        (lo..=hi).map(|k| 1u64 << k).sum()
    }

    #[test]
    fn geometric_sums_match_literal_summation() {
        for lo in 0..4 {
            for hi in 0..40 {
                let expected = if hi < lo { 0 } else { literal_sum(lo, hi) };
                assert_eq!(geometric_sum(lo, hi).unwrap(), expected);
            }
        }
    }

    #[test]
    fn middle_path_values() {
        assert_eq!(psi_ns_middle_path(2).unwrap(), 5);
        assert_eq!(psi_ns_middle_path(3).unwrap(), 13);
        assert_eq!(psi_ns_middle_path(4).unwrap(), 29);
        assert!(psi_ns_middle_path(1).is_err());
    }

    #[test]
    fn middle_cycle_values() {
        assert_eq!(psi_ns_middle_cycle(3).unwrap(), 6);
        assert_eq!(psi_ns_middle_cycle(4).unwrap(), 12);
        assert_eq!(psi_ns_middle_cycle(5).unwrap(), 22);
        assert_eq!(psi_ns_middle_cycle(6).unwrap(), 36);
        assert!(psi_ns_middle_cycle(2).is_err());
        // literal reading of both cases
        for n in 3..40usize {
            let expected = if n % 2 == 1 {
                2 * literal_sum(0, n.div_ceil(2)) - 8
            } else {
                literal_sum(1, n / 2 + 1) - 8 + literal_sum(1, n / 2)
            };
            assert_eq!(psi_ns_middle_cycle(n).unwrap(), expected);
        }
    }

    #[test]
    fn middle_wheel_and_fan_values() {
        assert_eq!(psi_ns_middle_wheel(5).unwrap(), 22);
        assert_eq!(psi_ns_middle_wheel(6).unwrap(), 34);
        assert_eq!(psi_ns_middle_wheel(7).unwrap(), 30);
        assert!(psi_ns_middle_wheel(3).is_err());
        assert_eq!(psi_ns_middle_fan(5).unwrap(), 22);
        assert_eq!(psi_ns_middle_fan(6).unwrap(), 14);
        assert_eq!(psi_ns_middle_fan(8).unwrap(), 22);
        assert_eq!(psi_ns_middle_fan(4).unwrap(), 6);
        assert!(psi_ns_middle_fan(2).is_err());
    }

    #[test]
    fn exact_up_to_sixty() {
        for n in 2..=60 {
            assert_eq!(psi_ns_middle_path(n).unwrap(), (1u64 << (n + 1)) - 3);
        }
        for n in 3..=60 {
            assert!(psi_ns_middle_cycle(n).unwrap() < 1 << 62);
        }
        assert!(psi_ns_middle_path(70).is_err());
    }

    #[test]
    fn parity_dispatch_is_total() {
        for n in 4..200 {
            let w = psi_ns_middle_wheel(n).unwrap();
            assert_eq!(w % 8, if n % 2 == 1 { 6 } else { 2 });
            assert_eq!(psi_ns_middle_fan(n).unwrap() % 8, 6);
        }
    }

    #[test]
    fn known_value_examples() {
        let v = known_value(KnownFamily::Path, ValueKind::GammaNs, 6).unwrap();
        assert_eq!(v.value, 4);
        assert_eq!(v.provenance, Provenance::NonsplitDominationTable);
        assert_eq!(known_value(KnownFamily::Complete, ValueKind::Nsdcp, 9).unwrap().value, 1);
        assert_eq!(known_value(KnownFamily::Wheel, ValueKind::Dcp, 6).unwrap().value, 4);
        assert_eq!(known_value(KnownFamily::Path, ValueKind::Cover, 4).unwrap().value, 15);
        assert_eq!(known_value(KnownFamily::MiddlePath, ValueKind::Nsdcp, 3).unwrap().value, 13);
        assert!(known_value(KnownFamily::Path, ValueKind::GammaNs, 3).is_none());
        assert!(known_value(KnownFamily::Cycle, ValueKind::Cover, 5).is_none());
        assert!(known_value(KnownFamily::MiddleWheel, ValueKind::Nsdcp, 3).is_none());
    }

    #[test]
    fn family_names_round_trip() {
        for f in KnownFamily::ALL {
            assert_eq!(f.name().parse::<KnownFamily>().unwrap(), f);
            assert!(f.minimum() >= 1);
        }
        assert!("star".parse::<KnownFamily>().is_err());
    }
}
