use crate::error::{Error, Result};

/// The fixed 50-state universe. The District of Columbia is excluded from
/// every analysis and rejected at load.
pub const ALL_STATES: [&str; 50] = [
    "AK", "AL", "AR", "AZ", "CA", "CO", "CT", "DE", "FL", "GA", "HI", "IA", "ID", "IL", "IN",
    "KS", "KY", "LA", "MA", "MD", "ME", "MI", "MN", "MO", "MS", "MT", "NC", "ND", "NE", "NH",
    "NJ", "NM", "NV", "NY", "OH", "OK", "OR", "PA", "RI", "SC", "SD", "TN", "TX", "UT", "VA",
    "VT", "WA", "WI", "WV", "WY",
];

pub const STATE_COUNT: usize = 50;

/// Validated two-letter code for one of the 50 states.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StateCode([u8; 2]);

impl StateCode {
    pub fn parse(code: &str) -> Result<Self> {
        if code == "DC" {
            return Err(Error::InvalidArgument(
                "state code DC: the District of Columbia is excluded from all analyses".into(),
            ));
        }
        if ALL_STATES.binary_search(&code).is_err() {
            return Err(Error::InvalidArgument(format!(
                "unknown state code {code:?}: expected one of the 50 two-letter state codes"
            )));
        }
        let b = code.as_bytes();
        Ok(StateCode([b[0], b[1]]))
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("state codes are ascii")
    }
}

impl std::fmt::Display for StateCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifty_states_sorted_and_unique() {
        assert_eq!(ALL_STATES.len(), 50);
        let mut sorted = ALL_STATES;
        sorted.sort_unstable();
        assert_eq!(sorted, ALL_STATES);
        for w in ALL_STATES.windows(2) {
            assert_ne!(w[0], w[1]);
        }
    }

    #[test]
    fn dc_is_rejected_with_exclusion_rule() {
        let err = StateCode::parse("DC").unwrap_err();
        assert!(err.to_string().contains("District of Columbia"));
    }

    #[test]
    fn unknown_code_rejected() {
        assert!(StateCode::parse("ZZ").is_err());
        assert!(StateCode::parse("ca").is_err());
    }

    #[test]
    fn valid_code_round_trips() {
        assert_eq!(StateCode::parse("CA").unwrap().as_str(), "CA");
    }
}
