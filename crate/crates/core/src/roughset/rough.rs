use std::fmt;

use serde::{Deserialize, Serialize};

use super::space::{CrispSet, Partition, StateSpace};
use super::RoughSetError;

/// Lower and upper approximation of a vaguely delimited set.
///
/// `lower ⊊ upper` for a proper rough set. Crisp sets embed as
/// `lower == upper` and are flagged by [`RoughSet::is_crisp`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RoughSet {
    lower: CrispSet,
    upper: CrispSet,
}

impl RoughSet {
    /// A proper rough set; rejects `lower == upper`.
    pub fn new(lower: CrispSet, upper: CrispSet) -> Result<Self, RoughSetError> {
        let rs = Self::from_approximations(lower, upper)?;
        if rs.is_crisp() {
            return Err(RoughSetError::NotProper);
        }
        Ok(rs)
    }

    /// Any nested pair, crisp embeddings included.
    pub fn from_approximations(lower: CrispSet, upper: CrispSet) -> Result<Self, RoughSetError> {
        if !lower.same_space(&upper) {
            return Err(RoughSetError::SpaceMismatch);
        }
        if !lower.is_subset(&upper) {
            return Err(RoughSetError::NotNested);
        }
        Ok(RoughSet { lower, upper })
    }

    /// Crisp embedding `⟨set, set⟩`.
    pub fn crisp(set: CrispSet) -> Self {
        RoughSet {
            lower: set,
            upper: set,
        }
    }

    pub fn lower(&self) -> &CrispSet {
        &self.lower
    }

    pub fn upper(&self) -> &CrispSet {
        &self.upper
    }

    pub fn is_crisp(&self) -> bool {
        self.lower == self.upper
    }

    pub fn belongs_to(&self, space: &StateSpace) -> bool {
        self.lower.belongs_to(space)
    }

    pub fn format(&self, space: &StateSpace) -> String {
        format!(
            "⟨{}, {}⟩",
            space.format_set(&self.lower),
            space.format_set(&self.upper)
        )
    }
}

/// How a rough set fails to delimit the space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DefinabilityClass {
    RoughlyDefinable,
    ExternallyUndefinable,
    InternallyUndefinable,
    TotallyUndefinable,
}

impl fmt::Display for DefinabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DefinabilityClass::RoughlyDefinable => "roughly definable",
            DefinabilityClass::ExternallyUndefinable => "externally undefinable",
            DefinabilityClass::InternallyUndefinable => "internally undefinable",
            DefinabilityClass::TotallyUndefinable => "totally undefinable",
        };
        f.write_str(s)
    }
}

/// Three-way tone, valued `+1 / 0 / −1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ToneClass {
    Negative,
    Neutral,
    Positive,
}

impl ToneClass {
    pub fn value(self) -> i8 {
        match self {
            ToneClass::Negative => -1,
            ToneClass::Neutral => 0,
            ToneClass::Positive => 1,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            -1 => Some(ToneClass::Negative),
            0 => Some(ToneClass::Neutral),
            1 => Some(ToneClass::Positive),
            _ => None,
        }
    }

    pub fn from_sign(x: i64) -> Self {
        match x.signum() {
            1 => ToneClass::Positive,
            -1 => ToneClass::Negative,
            _ => ToneClass::Neutral,
        }
    }
}

impl fmt::Display for ToneClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ToneClass::Negative => "negative",
            ToneClass::Neutral => "neutral",
            ToneClass::Positive => "positive",
        };
        f.write_str(s)
    }
}

/// Pawlak approximation of `target` by the blocks of `partition`.
pub fn approximate(partition: &Partition, target: &CrispSet) -> Result<RoughSet, RoughSetError> {
    let first = partition
        .blocks()
        .first()
        .ok_or_else(|| RoughSetError::InvalidPartition("no blocks".into()))?;
    if !first.same_space(target) {
        return Err(RoughSetError::SpaceMismatch);
    }
    let empty = target.with_mask(0);
    let (lower, upper) = partition
        .blocks()
        .iter()
        .fold((empty, empty), |(lo, up), block| {
            let lo = if block.is_subset(target) {
                lo.union(block)
            } else {
                lo
            };
            let up = if block.intersects(target) {
                up.union(block)
            } else {
                up
            };
            (lo, up)
        });
    RoughSet::from_approximations(lower, upper)
}

/// Boundary region, `upper \ lower`.
pub fn boundary(rs: &RoughSet) -> CrispSet {
    rs.upper.difference(&rs.lower)
}

pub fn classify_definability(rs: &RoughSet) -> DefinabilityClass {
    match (rs.lower.is_empty(), rs.upper.is_full()) {
        (false, false) => DefinabilityClass::RoughlyDefinable,
        (false, true) => DefinabilityClass::ExternallyUndefinable,
        (true, false) => DefinabilityClass::InternallyUndefinable,
        (true, true) => DefinabilityClass::TotallyUndefinable,
    }
}

/// An information set is informative when it does not contain the whole
/// space, read against the upper approximation: `upper ≠ Π`.
///
/// Externally undefinable sets are therefore not informative even though
/// their lower approximation is non-empty; [`super::verify_existence`] tallies
/// them separately.
pub fn is_informative(rs: &RoughSet) -> bool {
    !rs.upper.is_full()
}

/// Tone of a rough set relative to the zero payoff line.
///
/// Positive when the lower approximation is a non-empty subset of `{π>0}`,
/// or it is empty and the upper approximation lies inside `{π>0}`; negative
/// symmetrically with `{π<0}`; neutral otherwise. The degenerate `⟨∅, ∅⟩`
/// satisfies both conditions and is neutral.
pub fn tone_classify(rs: &RoughSet, space: &StateSpace) -> ToneClass {
    assert!(
        rs.belongs_to(space),
        "rough set from a different state space"
    );
    let pos = space.positive_set();
    let neg = space.negative_set();
    let fits = |side: &CrispSet| {
        if rs.lower.is_empty() {
            rs.upper.is_subset(side)
        } else {
            rs.lower.is_subset(side)
        }
    };
    match (fits(&pos), fits(&neg)) {
        (true, false) => ToneClass::Positive,
        (false, true) => ToneClass::Negative,
        _ => ToneClass::Neutral,
    }
}

/// A crisp set faithfully represents `rs` iff `upper ⊆ candidate ⊆ lower`,
/// which forces `lower == upper`.
pub fn faithful_crisp(candidate: &CrispSet, rs: &RoughSet) -> bool {
    rs.upper.is_subset(candidate) && candidate.is_subset(&rs.lower)
}

/// A rough set faithfully represents `rs` iff it keeps every possible state
/// (`upper(rs) ⊆ upper(candidate)`) and asserts no state `rs` does not
/// (`lower(candidate) ⊆ lower(rs)`).
pub fn faithful_rough(candidate: &RoughSet, rs: &RoughSet) -> bool {
    rs.upper.is_subset(&candidate.upper) && candidate.lower.is_subset(&rs.lower)
}
