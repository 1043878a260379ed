use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A set of frame conditions C ⊆ {T, B, D}.
///
/// T asks for a reflexive modal relation, B for a symmetric one and D for a
/// serial one.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Logic {
    pub t: bool,
    pub b: bool,
    pub d: bool,
}

impl Logic {
    pub const K: Logic = Logic { t: false, b: false, d: false };

    pub fn new(t: bool, b: bool, d: bool) -> Self {
        Logic { t, b, d }
    }

    /// All eight subsets of {T, B, D}.
    pub fn all() -> impl Iterator<Item = Logic> {
        (0..8u8).map(|m| Logic::new(m & 1 != 0, m & 2 != 0, m & 4 != 0))
    }

    /// The six pairwise distinct logics of the family: TD and TBD collapse
    /// onto T and TB because reflexivity implies seriality.
    pub fn distinct() -> [Logic; 6] {
        [
            Logic::K,
            Logic::new(false, false, true),
            Logic::new(false, true, false),
            Logic::new(true, false, false),
            Logic::new(false, true, true),
            Logic::new(true, true, false),
        ]
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.t {
            f.write_str("T")?;
        }
        if self.b {
            f.write_str("B")?;
        }
        if self.d {
            f.write_str("D")?;
        }
        Ok(())
    }
}

impl FromStr for Logic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut logic = Logic::K;
        for c in s.chars() {
            let slot = match c.to_ascii_uppercase() {
                'T' => &mut logic.t,
                'B' => &mut logic.b,
                'D' => &mut logic.d,
                _ => return Err(Error::InvalidLogic(s.to_string())),
            };
            if *slot {
                return Err(Error::InvalidLogic(s.to_string()));
            }
            *slot = true;
        }
        Ok(logic)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_in_any_order() {
        assert_eq!("BT".parse::<Logic>().unwrap(), Logic::new(true, true, false));
        assert_eq!("".parse::<Logic>().unwrap(), Logic::K);
        assert_eq!("dtb".parse::<Logic>().unwrap().to_string(), "TBD");
    }

    #[test]
    fn rejects_duplicates_and_unknown_letters() {
        assert!("TT".parse::<Logic>().is_err());
        assert!("S4".parse::<Logic>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for l in Logic::all() {
            assert_eq!(l.to_string().parse::<Logic>().unwrap(), l);
        }
    }
}
