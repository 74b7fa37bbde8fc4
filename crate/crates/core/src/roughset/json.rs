use serde::{Deserialize, Serialize};

use super::{RoughSet, RoughSetError, StateSpace};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub label: String,
    pub payoff: f64,
}

/// Membership masks as 0/1 arrays in state order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoughSetJson {
    pub lower: Vec<u8>,
    pub upper: Vec<u8>,
}

/// `{"states": [{"label", "payoff"}...], "rough_sets": [{"lower", "upper"}...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoughSetDocument {
    pub states: Vec<StateJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rough_sets: Vec<RoughSetJson>,
}

fn mask_from_bits(bits: &[u8], n: usize) -> Result<u64, RoughSetError> {
    if bits.len() != n {
        return Err(RoughSetError::Document(format!(
            "mask has {} entries for {} states",
            bits.len(),
            n
        )));
    }
    bits.iter().enumerate().try_fold(0u64, |m, (i, b)| match b {
        0 => Ok(m),
        1 => Ok(m | (1 << i)),
        other => Err(RoughSetError::Document(format!(
            "mask entry {other} is not 0 or 1"
        ))),
    })
}

impl RoughSetDocument {
    pub fn parse(text: &str) -> Result<Self, RoughSetError> {
        serde_json::from_str(text).map_err(|e| RoughSetError::Document(e.to_string()))
    }

    pub fn from_parts(space: &StateSpace, sets: &[RoughSet]) -> Self {
        let n = space.len();
        let bits = |m: u64| (0..n).map(|i| ((m >> i) & 1) as u8).collect::<Vec<_>>();
        RoughSetDocument {
            states: space
                .labels()
                .iter()
                .zip(space.payoffs())
                .map(|(l, p)| StateJson {
                    label: l.clone(),
                    payoff: *p,
                })
                .collect(),
            rough_sets: sets
                .iter()
                .map(|rs| RoughSetJson {
                    lower: bits(rs.lower().mask()),
                    upper: bits(rs.upper().mask()),
                })
                .collect(),
        }
    }

    pub fn space(&self) -> Result<StateSpace, RoughSetError> {
        StateSpace::new(self.states.iter().map(|s| (s.label.clone(), s.payoff)))
    }

    /// Decode the state space and every listed rough set (crisp embeddings
    /// allowed).
    pub fn decode(&self) -> Result<(StateSpace, Vec<RoughSet>), RoughSetError> {
        let space = self.space()?;
        let n = space.len();
        let sets = self
            .rough_sets
            .iter()
            .map(|r| {
                let lower = space.set_from_mask(mask_from_bits(&r.lower, n)?)?;
                let upper = space.set_from_mask(mask_from_bits(&r.upper, n)?)?;
                RoughSet::from_approximations(lower, upper)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((space, sets))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decodes_document() {
        let doc = RoughSetDocument::parse(
            r#"{"states":[{"label":"down","payoff":-1},{"label":"flat","payoff":0},
                {"label":"up","payoff":1}],
                "rough_sets":[{"lower":[0,0,0],"upper":[0,0,1]}]}"#,
        )
        .unwrap();
        let (space, sets) = doc.decode().unwrap();
        assert_eq!(space.len(), 3);
        assert_eq!(space.format_set(sets[0].upper()), "{up}");
    }

    #[test]
    fn rejects_bad_masks() {
        let bad_len =
            r#"{"states":[{"label":"a","payoff":1}],"rough_sets":[{"lower":[0,0],"upper":[1]}]}"#;
        assert!(RoughSetDocument::parse(bad_len).unwrap().decode().is_err());
        let bad_bit =
            r#"{"states":[{"label":"a","payoff":1}],"rough_sets":[{"lower":[2],"upper":[1]}]}"#;
        assert!(RoughSetDocument::parse(bad_bit).unwrap().decode().is_err());
        let not_nested =
            r#"{"states":[{"label":"a","payoff":1}],"rough_sets":[{"lower":[1],"upper":[0]}]}"#;
        assert_eq!(
            RoughSetDocument::parse(not_nested)
                .unwrap()
                .decode()
                .unwrap_err(),
            RoughSetError::NotNested
        );
        assert!(RoughSetDocument::parse("{").is_err());
    }
}
