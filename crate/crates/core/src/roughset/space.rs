use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};

use super::RoughSetError;

/// Largest supported state space (one bit per state).
pub const MAX_STATES: usize = 64;

/// An ordered, finite list of labelled payoff states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    labels: Vec<String>,
    payoffs: Vec<f64>,
    id: u64,
}

impl StateSpace {
    pub fn new<I, S>(states: I) -> Result<Self, RoughSetError>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let (labels, payoffs): (Vec<String>, Vec<f64>) =
            states.into_iter().map(|(l, p)| (l.into(), p)).unzip();
        if labels.is_empty() {
            return Err(RoughSetError::EmptySpace);
        }
        if labels.len() > MAX_STATES {
            return Err(RoughSetError::TooManyStates {
                got: labels.len(),
                max: MAX_STATES,
            });
        }
        let mut seen = HashSet::new();
        for (label, payoff) in labels.iter().zip(&payoffs) {
            if !seen.insert(label.as_str()) {
                return Err(RoughSetError::DuplicateLabel(label.clone()));
            }
            if !payoff.is_finite() {
                return Err(RoughSetError::NonFinitePayoff(label.clone()));
            }
        }
        let mut h = DefaultHasher::new();
        labels.hash(&mut h);
        for p in &payoffs {
            p.to_bits().hash(&mut h);
        }
        Ok(StateSpace {
            labels,
            payoffs,
            id: h.finish(),
        })
    }

    /// States labelled by their payoff values (`"-1"`, `"0"`, `"2.5"`, ...).
    pub fn from_payoffs(payoffs: &[f64]) -> Result<Self, RoughSetError> {
        Self::new(payoffs.iter().map(|p| (format!("{p}"), *p)))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn payoffs(&self) -> &[f64] {
        &self.payoffs
    }

    pub(crate) fn id(&self) -> u64 {
        self.id
    }

    fn full_mask(&self) -> u64 {
        full_mask(self.len())
    }

    pub fn empty_set(&self) -> CrispSet {
        CrispSet::raw(self, 0)
    }

    pub fn full_set(&self) -> CrispSet {
        CrispSet::raw(self, self.full_mask())
    }

    pub fn set_from_mask(&self, mask: u64) -> Result<CrispSet, RoughSetError> {
        if mask & !self.full_mask() != 0 {
            let index = 63 - (mask & !self.full_mask()).leading_zeros() as usize;
            return Err(RoughSetError::IndexOutOfRange {
                index,
                len: self.len(),
            });
        }
        Ok(CrispSet::raw(self, mask))
    }

    pub fn set_from_indices(&self, indices: &[usize]) -> Result<CrispSet, RoughSetError> {
        let mut mask = 0u64;
        for &i in indices {
            if i >= self.len() {
                return Err(RoughSetError::IndexOutOfRange {
                    index: i,
                    len: self.len(),
                });
            }
            mask |= 1 << i;
        }
        Ok(CrispSet::raw(self, mask))
    }

    pub fn set_of(&self, labels: &[&str]) -> Result<CrispSet, RoughSetError> {
        let indices = labels
            .iter()
            .map(|l| {
                self.labels
                    .iter()
                    .position(|x| x == l)
                    .ok_or_else(|| RoughSetError::UnknownLabel(l.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.set_from_indices(&indices)
    }

    /// States whose payoff satisfies `pred`.
    pub fn set_where(&self, pred: impl Fn(f64) -> bool) -> CrispSet {
        let mask = self
            .payoffs
            .iter()
            .enumerate()
            .filter(|(_, p)| pred(**p))
            .fold(0u64, |m, (i, _)| m | (1 << i));
        CrispSet::raw(self, mask)
    }

    /// `{π > 0}`; zero payoffs are excluded.
    pub fn positive_set(&self) -> CrispSet {
        self.set_where(|p| p > 0.0)
    }

    /// `{π < 0}`; zero payoffs are excluded.
    pub fn negative_set(&self) -> CrispSet {
        self.set_where(|p| p < 0.0)
    }

    /// Every subset, in increasing mask order.
    pub fn subsets(&self) -> impl Iterator<Item = CrispSet> + '_ {
        (0..=self.full_mask()).map(move |m| CrispSet::raw(self, m))
    }

    /// Render a set as `{label,label}` in state order.
    pub fn format_set(&self, set: &CrispSet) -> String {
        let mut out = String::from("{");
        for (k, i) in set.members().enumerate() {
            if k > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", self.labels[i]);
        }
        out.push('}');
        out
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A subset of a [`StateSpace`], stored as a membership mask.
///
/// Binary operations panic when the operands come from different spaces;
/// the fallible entry points ([`super::approximate`], [`Partition::new`])
/// report that as [`RoughSetError::SpaceMismatch`] instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CrispSet {
    mask: u64,
    n: u8,
    space: u64,
}

impl CrispSet {
    pub(crate) fn raw(space: &StateSpace, mask: u64) -> Self {
        CrispSet {
            mask,
            n: space.len() as u8,
            space: space.id(),
        }
    }

    pub(crate) fn with_mask(self, mask: u64) -> Self {
        CrispSet { mask, ..self }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Size of the underlying state space.
    pub fn universe_len(&self) -> usize {
        self.n as usize
    }

    pub fn same_space(&self, other: &CrispSet) -> bool {
        self.space == other.space && self.n == other.n
    }

    pub fn belongs_to(&self, space: &StateSpace) -> bool {
        self.space == space.id() && self.n as usize == space.len()
    }

    fn check(&self, other: &CrispSet) {
        assert!(
            self.same_space(other),
            "crisp sets from different state spaces"
        );
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_full(&self) -> bool {
        self.mask == full_mask(self.n as usize)
    }

    pub fn contains(&self, index: usize) -> bool {
        index < 64 && self.mask & (1 << index) != 0
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n as usize).filter(move |i| self.contains(*i))
    }

    pub fn is_subset(&self, other: &CrispSet) -> bool {
        self.check(other);
        self.mask & !other.mask == 0
    }

    pub fn is_proper_subset(&self, other: &CrispSet) -> bool {
        self.is_subset(other) && self.mask != other.mask
    }

    pub fn intersects(&self, other: &CrispSet) -> bool {
        self.check(other);
        self.mask & other.mask != 0
    }

    pub fn union(&self, other: &CrispSet) -> CrispSet {
        self.check(other);
        self.with_mask(self.mask | other.mask)
    }

    pub fn intersection(&self, other: &CrispSet) -> CrispSet {
        self.check(other);
        self.with_mask(self.mask & other.mask)
    }

    pub fn difference(&self, other: &CrispSet) -> CrispSet {
        self.check(other);
        self.with_mask(self.mask & !other.mask)
    }

    pub fn complement(&self) -> CrispSet {
        self.with_mask(!self.mask & full_mask(self.n as usize))
    }
}

/// Indiscernibility classes: non-empty, pairwise disjoint blocks covering
/// the space.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    blocks: Vec<CrispSet>,
}

impl Partition {
    pub fn new(space: &StateSpace, blocks: Vec<CrispSet>) -> Result<Self, RoughSetError> {
        let mut covered = 0u64;
        for b in &blocks {
            if !b.belongs_to(space) {
                return Err(RoughSetError::SpaceMismatch);
            }
            if b.is_empty() {
                return Err(RoughSetError::InvalidPartition("empty block".into()));
            }
            if covered & b.mask() != 0 {
                return Err(RoughSetError::InvalidPartition(format!(
                    "blocks overlap on {}",
                    space.format_set(&b.with_mask(covered & b.mask()))
                )));
            }
            covered |= b.mask();
        }
        if covered != space.full_mask() {
            let missing = space.full_set().with_mask(space.full_mask() & !covered);
            return Err(RoughSetError::InvalidPartition(format!(
                "states {} are not covered",
                space.format_set(&missing)
            )));
        }
        Ok(Partition { blocks })
    }

    pub fn from_labels(space: &StateSpace, blocks: &[&[&str]]) -> Result<Self, RoughSetError> {
        let sets = blocks
            .iter()
            .map(|b| space.set_of(b))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(space, sets)
    }

    /// Block `k` of each state given by `assignment[i] = k`.
    pub fn from_assignment(
        space: &StateSpace,
        assignment: &[usize],
    ) -> Result<Self, RoughSetError> {
        if assignment.len() != space.len() {
            return Err(RoughSetError::InvalidPartition(format!(
                "assignment has {} entries for {} states",
                assignment.len(),
                space.len()
            )));
        }
        let mut masks: Vec<u64> = Vec::new();
        let mut ids: Vec<usize> = Vec::new();
        for (i, &k) in assignment.iter().enumerate() {
            match ids.iter().position(|&x| x == k) {
                Some(j) => masks[j] |= 1 << i,
                None => {
                    ids.push(k);
                    masks.push(1 << i);
                }
            }
        }
        let blocks = masks.into_iter().map(|m| CrispSet::raw(space, m)).collect();
        Self::new(space, blocks)
    }

    /// Every state in its own block.
    pub fn discrete(space: &StateSpace) -> Self {
        Partition {
            blocks: (0..space.len())
                .map(|i| CrispSet::raw(space, 1 << i))
                .collect(),
        }
    }

    /// A single block holding the whole space.
    pub fn indiscrete(space: &StateSpace) -> Self {
        Partition {
            blocks: vec![space.full_set()],
        }
    }

    pub fn blocks(&self) -> &[CrispSet] {
        &self.blocks
    }

    /// True if every block of `self` lies inside some block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.blocks
            .iter()
            .all(|b| coarser.blocks.iter().any(|c| b.is_subset(c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize) -> StateSpace {
        StateSpace::new((1..=n).map(|i| (i.to_string(), i as f64))).unwrap()
    }

    #[test]
    fn rejects_bad_spaces() {
        assert_eq!(
            StateSpace::new(Vec::<(String, f64)>::new()),
            Err(RoughSetError::EmptySpace)
        );
        assert_eq!(
            StateSpace::new([("a", 1.0), ("a", 2.0)]),
            Err(RoughSetError::DuplicateLabel("a".into()))
        );
        assert!(matches!(
            StateSpace::new([("a", f64::NAN)]),
            Err(RoughSetError::NonFinitePayoff(_))
        ));
        assert!(matches!(
            StateSpace::from_payoffs(&vec![0.0; 65]),
            Err(RoughSetError::DuplicateLabel(_)) | Err(RoughSetError::TooManyStates { .. })
        ));
        let many: Vec<f64> = (0..65).map(|i| i as f64).collect();
        assert!(matches!(
            StateSpace::from_payoffs(&many),
            Err(RoughSetError::TooManyStates { got: 65, .. })
        ));
    }

    #[test]
    fn set_algebra() {
        let s = space(4);
        let a = s.set_of(&["1", "2"]).unwrap();
        let b = s.set_of(&["2", "3"]).unwrap();
        assert_eq!(s.format_set(&a.union(&b)), "{1,2,3}");
        assert_eq!(s.format_set(&a.intersection(&b)), "{2}");
        assert_eq!(s.format_set(&a.difference(&b)), "{1}");
        assert_eq!(s.format_set(&a.complement()), "{3,4}");
        assert!(s.full_set().is_full());
        assert_eq!(s.subsets().count(), 16);
        assert!(s.set_of(&["9"]).is_err());
        assert!(s.set_from_mask(1 << 4).is_err());
    }

    #[test]
    fn partition_validation() {
        let s = space(4);
        assert!(Partition::from_labels(&s, &[&["1", "2"], &["3", "4"]]).is_ok());
        assert!(Partition::from_labels(&s, &[&["1", "2"], &["2", "3", "4"]]).is_err());
        assert!(Partition::from_labels(&s, &[&["1", "2"], &["3"]]).is_err());
        let other = space(3);
        assert_eq!(
            Partition::new(&s, vec![other.full_set()]),
            Err(RoughSetError::SpaceMismatch)
        );
        let p = Partition::from_assignment(&s, &[0, 0, 1, 1]).unwrap();
        assert_eq!(p.blocks().len(), 2);
        assert!(Partition::discrete(&s).refines(&p));
        assert!(p.refines(&Partition::indiscrete(&s)));
        assert!(!Partition::indiscrete(&s).refines(&p));
    }
}
