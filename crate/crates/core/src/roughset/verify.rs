//! Exhaustive checks of the two claims over small state spaces.

use std::fmt;

use super::rough::{classify_definability, faithful_crisp, faithful_rough, is_informative};
use super::space::full_mask;
use super::{DefinabilityClass, RoughSet, RoughSetError, StateSpace};
use crate::Execution;

/// Largest space enumerated without an explicit override.
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    /// A well-defined boundary is not necessary for informativeness.
    Existence,
    /// No crisp set faithfully represents a proper rough set; a rough set can.
    Expression,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Existence => f.write_str("informative vague information exists"),
            Claim::Expression => f.write_str("crisp sets cannot express vague information"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub claim: Claim,
    pub space_size: usize,
    pub proper_rough_sets: u64,
    /// The claim has no content on this space: with a single state
    /// the only proper rough set is ⟨∅, Π⟩, which excludes nothing.
    pub vacuous: bool,
    pub witness: Option<RoughSet>,
    pub tallies: Vec<(String, u64)>,
    pub violations: Vec<String>,
}

impl WitnessReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && (self.vacuous || self.witness.is_some())
    }

    pub fn tally(&self, name: &str) -> Option<u64> {
        self.tallies
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| *v)
    }

    pub fn render(&self, space: &StateSpace) -> String {
        let mut out = format!("{} over {} states\n", self.claim, self.space_size);
        if self.vacuous {
            out.push_str("vacuous: fewer than two states, no rough set can exclude a state\n");
        }
        out.push_str(&format!(
            "proper rough sets enumerated: {}\n",
            self.proper_rough_sets
        ));
        for (k, v) in &self.tallies {
            out.push_str(&format!("{v} {k}\n"));
        }
        if let Some(w) = &self.witness {
            out.push_str(&format!("witness: {}\n", w.format(space)));
        }
        for v in &self.violations {
            out.push_str(&format!("VIOLATION: {v}\n"));
        }
        out.push_str(if self.holds() {
            "result: holds\n"
        } else {
            "result: FAILS\n"
        });
        out
    }
}

pub(crate) const INFORMATIVE_PROPER: &str = "informative proper rough sets";
pub(crate) const INFORMATIVE_FULL_LOWER: &str = "informative rough sets with lower = full space";
pub(crate) const EXTERNAL_WITH_CONTENT: &str =
    "externally undefinable sets (not informative; lower approximation non-empty)";
pub const CRISP_FAITHFUL: &str = "crisp-faithful representations of proper rough sets";
pub(crate) const ROUGH_FAITHFUL: &str = "rough-faithful (candidate, target) pairs";
pub(crate) const SELF_FAITHFUL: &str = "proper rough sets faithful to themselves";
pub(crate) const UNREPRESENTED: &str = "proper rough sets with no faithful rough representation";

fn check_cap(space: &StateSpace, cap: usize) -> Result<(), RoughSetError> {
    if space.len() > cap {
        return Err(RoughSetError::CapExceeded {
            size: space.len(),
            cap,
        });
    }
    Ok(())
}

/// Submasks of `upper`, including 0 and `upper`, ascending.
fn submasks(upper: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == upper {
            None
        } else {
            Some(((cur | !upper).wrapping_add(1)) & upper)
        };
        Some(cur)
    })
}

/// Every nested pair `lower ⊆ upper`, ordered by upper then lower mask.
pub fn enumerate_rough_sets(
    space: &StateSpace,
    include_crisp: bool,
    cap: usize,
) -> Result<Vec<RoughSet>, RoughSetError> {
    check_cap(space, cap)?;
    let base = space.empty_set();
    let mut out = Vec::new();
    for upper in 0..=full_mask(space.len()) {
        for lower in submasks(upper) {
            if lower == upper && !include_crisp {
                continue;
            }
            out.push(RoughSet::from_approximations(
                base.with_mask(lower),
                base.with_mask(upper),
            )?);
        }
    }
    Ok(out)
}

/// Enumerate proper rough sets and confirm at least one is informative,
/// while none has a lower approximation equal to the whole space.
pub fn verify_existence(
    space: &StateSpace,
    cap: usize,
    exec: Execution,
) -> Result<WitnessReport, RoughSetError> {
    check_cap(space, cap)?;
    let proper = enumerate_rough_sets(space, false, cap)?;
    let flags = exec.map_slice(&proper, |rs| {
        let informative = is_informative(rs);
        (
            informative,
            informative && rs.lower().is_full(),
            classify_definability(rs) == DefinabilityClass::ExternallyUndefinable,
        )
    });
    let informative = flags.iter().filter(|f| f.0).count() as u64;
    let full_lower = flags.iter().filter(|f| f.1).count() as u64;
    let external = flags.iter().filter(|f| f.2).count() as u64;
    let witness = proper
        .iter()
        .zip(&flags)
        .find(|(_, f)| f.0)
        .map(|(rs, _)| *rs);

    let mut violations = Vec::new();
    if full_lower > 0 {
        violations.push(format!(
            "{full_lower} informative rough sets have lower = Π"
        ));
    }
    let vacuous = space.len() < 2;
    if !vacuous && witness.is_none() {
        violations.push("no informative proper rough set found".into());
    }
    Ok(WitnessReport {
        claim: Claim::Existence,
        space_size: space.len(),
        proper_rough_sets: proper.len() as u64,
        vacuous,
        witness,
        tallies: vec![
            (INFORMATIVE_PROPER.into(), informative),
            (INFORMATIVE_FULL_LOWER.into(), full_lower),
            (EXTERNAL_WITH_CONTENT.into(), external),
        ],
        violations,
    })
}

/// For every proper rough set, count crisp candidates passing
/// [`faithful_crisp`] (expected zero) and rough candidates passing
/// [`faithful_rough`] (expected at least the set itself).
pub fn verify_expression(
    space: &StateSpace,
    cap: usize,
    exec: Execution,
) -> Result<WitnessReport, RoughSetError> {
    check_cap(space, cap)?;
    let proper = enumerate_rough_sets(space, false, cap)?;
    let crisp: Vec<_> = space.subsets().collect();
    let per_target = exec.map_slice(&proper, |rs| {
        let crisp_hits = crisp.iter().filter(|c| faithful_crisp(c, rs)).count() as u64;
        let rough_hits = proper.iter().filter(|c| faithful_rough(c, rs)).count() as u64;
        (crisp_hits, rough_hits, faithful_rough(rs, rs))
    });
    let crisp_faithful: u64 = per_target.iter().map(|t| t.0).sum();
    let rough_faithful: u64 = per_target.iter().map(|t| t.1).sum();
    let self_faithful = per_target.iter().filter(|t| t.2).count() as u64;
    let unrepresented = per_target.iter().filter(|t| t.1 == 0).count() as u64;

    let mut violations = Vec::new();
    if crisp_faithful > 0 {
        violations.push(format!(
            "{crisp_faithful} crisp sets faithfully represent a proper rough set"
        ));
    }
    if unrepresented > 0 {
        violations.push(format!(
            "{unrepresented} proper rough sets have no faithful rough representation"
        ));
    }
    if self_faithful != proper.len() as u64 {
        violations.push("reflexivity of faithful_rough fails".into());
    }
    Ok(WitnessReport {
        claim: Claim::Expression,
        space_size: space.len(),
        proper_rough_sets: proper.len() as u64,
        vacuous: proper.is_empty(),
        witness: proper.first().copied(),
        tallies: vec![
            (CRISP_FAITHFUL.into(), crisp_faithful),
            (ROUGH_FAITHFUL.into(), rough_faithful),
            (SELF_FAITHFUL.into(), self_faithful),
            (UNREPRESENTED.into(), unrepresented),
        ],
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize) -> StateSpace {
        StateSpace::from_payoffs(&(1..=n).map(|i| i as f64).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn submask_enumeration() {
        let subs: Vec<u64> = submasks(0b101).collect();
        assert_eq!(subs, vec![0b000, 0b001, 0b100, 0b101]);
        assert_eq!(submasks(0).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn pair_counts_follow_three_to_the_n() {
        for n in 1..=6 {
            let s = space(n);
            let all = enumerate_rough_sets(&s, true, 8).unwrap().len();
            let proper = enumerate_rough_sets(&s, false, 8).unwrap().len();
            assert_eq!(all, 3usize.pow(n as u32));
            assert_eq!(proper, 3usize.pow(n as u32) - 2usize.pow(n as u32));
        }
    }

    #[test]
    fn existence_two_states() {
        let s = space(2);
        let r = verify_existence(&s, 8, Execution::Sequential).unwrap();
        assert!(r.holds());
        let w = r.witness.unwrap();
        assert!(w.lower().is_empty());
        assert_eq!(s.format_set(w.upper()), "{1}");
    }

    #[test]
    fn existence_single_state_is_vacuous() {
        let r = verify_existence(&space(1), 8, Execution::Sequential).unwrap();
        assert!(r.vacuous);
        assert_eq!(r.proper_rough_sets, 1);
        assert_eq!(r.tally(INFORMATIVE_PROPER), Some(0));
        assert!(r.holds());
    }

    #[test]
    fn existence_four_states_has_witnesses() {
        let r = verify_existence(&space(4), 8, Execution::Sequential).unwrap();
        assert!(r.tally(INFORMATIVE_PROPER).unwrap() > 0);
        assert_eq!(r.tally(INFORMATIVE_FULL_LOWER), Some(0));
    }

    #[test]
    fn expression_small_spaces() {
        let r2 = verify_expression(&space(2), 8, Execution::Sequential).unwrap();
        assert_eq!(r2.tally(CRISP_FAITHFUL), Some(0));
        let r3 = verify_expression(&space(3), 8, Execution::Parallel).unwrap();
        assert_eq!(r3.tally(CRISP_FAITHFUL), Some(0));
        assert_eq!(r3.tally(SELF_FAITHFUL), Some(r3.proper_rough_sets));
        assert!(r3.holds());
    }

    #[test]
    fn cap_refuses_large_spaces() {
        let s = space(20);
        assert_eq!(
            verify_existence(&s, DEFAULT_ENUMERATION_CAP, Execution::Sequential).unwrap_err(),
            RoughSetError::CapExceeded { size: 20, cap: 8 }
        );
        assert!(verify_expression(&s, DEFAULT_ENUMERATION_CAP, Execution::Sequential).is_err());
    }
}
