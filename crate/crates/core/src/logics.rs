//! The logics between K and S5, identified by which of the axioms D, T, 4, 5
//! they add to K.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Logic {
    d: bool,
    t: bool,
    four: bool,
    five: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FrameCondition {
    Serial,
    Reflexive,
    Transitive,
    Euclidean,
}

impl fmt::Display for FrameCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrameCondition::Serial => "serial",
            FrameCondition::Reflexive => "reflexive",
            FrameCondition::Transitive => "transitive",
            FrameCondition::Euclidean => "euclidean",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown logic {0:?}")]
pub struct UnknownLogic(pub String);

impl Logic {
    pub const K: Logic = Logic::raw(false, false, false, false);
    pub const D: Logic = Logic::raw(true, false, false, false);
    pub const T: Logic = Logic::raw(false, true, false, false);
    pub const K4: Logic = Logic::raw(false, false, true, false);
    pub const D4: Logic = Logic::raw(true, false, true, false);
    pub const S4: Logic = Logic::raw(false, true, true, false);
    pub const K5: Logic = Logic::raw(false, false, false, true);
    pub const KD5: Logic = Logic::raw(true, false, false, true);
    pub const K45: Logic = Logic::raw(false, false, true, true);
    pub const KD45: Logic = Logic::raw(true, false, true, true);
    pub const S5: Logic = Logic::raw(false, true, true, true);

    const fn raw(d: bool, t: bool, four: bool, five: bool) -> Logic {
        Logic { d, t, four, five }
    }

    /// Builds a logic from axiom flags. D is dropped in the presence of T,
    /// and T together with 5 yields S5.
    pub fn new(d: bool, t: bool, four: bool, five: bool) -> Logic {
        Logic {
            d: d && !t,
            t,
            four: four || (t && five),
            five,
        }
    }

    /// Every supported logic, weakest first within each family.
    pub fn all() -> [Logic; 11] {
        [
            Logic::K,
            Logic::D,
            Logic::T,
            Logic::K4,
            Logic::D4,
            Logic::S4,
            Logic::K5,
            Logic::KD5,
            Logic::K45,
            Logic::KD45,
            Logic::S5,
        ]
    }

    /// Seriality holds on the frames: D or T.
    pub fn has_d(self) -> bool {
        self.d || self.t
    }

    pub fn has_t(self) -> bool {
        self.t
    }

    pub fn has_4(self) -> bool {
        self.four
    }

    pub fn has_5(self) -> bool {
        self.five
    }

    /// The frame conditions of the logic's own axioms. T already implies
    /// seriality, so S4 reports only reflexivity and transitivity.
    pub fn frame_conditions(self) -> BTreeSet<FrameCondition> {
        let mut out = BTreeSet::new();
        if self.d {
            out.insert(FrameCondition::Serial);
        }
        if self.t {
            out.insert(FrameCondition::Reflexive);
        }
        if self.four {
            out.insert(FrameCondition::Transitive);
        }
        if self.five {
            out.insert(FrameCondition::Euclidean);
        }
        out
    }

    /// Whether every theorem of `weaker` is a theorem of `self`.
    pub fn extends(self, weaker: Logic) -> bool {
        (!weaker.has_d() || self.has_d())
            && (!weaker.t || self.t)
            && (!weaker.four || self.four)
            && (!weaker.five || self.five)
    }

    pub fn name(self) -> &'static str {
        match (self.d, self.t, self.four, self.five) {
            (false, false, false, false) => "k",
            (true, false, false, false) => "d",
            (false, true, false, false) => "t",
            (false, false, true, false) => "k4",
            (true, false, true, false) => "d4",
            (false, true, true, false) => "s4",
            (false, false, false, true) => "k5",
            (true, false, false, true) => "kd5",
            (false, false, true, true) => "k45",
            (true, false, true, true) => "kd45",
            _ => "s5",
        }
    }
}

/// Checks the frame conditions of `logic` literally on an adjacency list.
pub fn is_frame_for(succ: &[Vec<usize>], logic: Logic) -> bool {
    let n = succ.len();
    let mut rel = vec![vec![false; n]; n];
    for (a, out) in succ.iter().enumerate() {
        for &b in out {
            if b >= n {
                return false;
            }
            rel[a][b] = true;
        }
    }
    logic.frame_conditions().into_iter().all(|c| match c {
        FrameCondition::Serial => succ.iter().all(|s| !s.is_empty()),
        FrameCondition::Reflexive => (0..n).all(|a| rel[a][a]),
        FrameCondition::Transitive => {
            (0..n).all(|a| succ[a].iter().all(|&b| succ[b].iter().all(|&c| rel[a][c])))
        }
        FrameCondition::Euclidean => {
            (0..n).all(|a| succ[a].iter().all(|&b| succ[a].iter().all(|&c| rel[b][c])))
        }
    })
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Logic {
    type Err = UnknownLogic;

    fn from_str(s: &str) -> Result<Logic, UnknownLogic> {
        let l = match s.to_ascii_lowercase().as_str() {
            "k" => Logic::K,
            "d" | "kd" => Logic::D,
            "t" | "kt" => Logic::T,
            "k4" => Logic::K4,
            "d4" | "kd4" => Logic::D4,
            "s4" | "kt4" => Logic::S4,
            "k5" => Logic::K5,
            "kd5" | "d5" => Logic::KD5,
            "k45" => Logic::K45,
            "kd45" | "d45" => Logic::KD45,
            "s5" | "kt5" | "t5" | "kt45" => Logic::S5,
            _ => return Err(UnknownLogic(s.to_owned())),
        };
        Ok(l)
    }
}

impl From<Logic> for String {
    fn from(l: Logic) -> String {
        l.name().to_owned()
    }
}

impl TryFrom<String> for Logic {
    type Error = UnknownLogic;

    fn try_from(s: String) -> Result<Logic, UnknownLogic> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use FrameCondition::*;

    #[test]
    fn frame_condition_examples() {
        assert!(Logic::K.frame_conditions().is_empty());
        assert_eq!(
            Logic::S4.frame_conditions(),
            [Reflexive, Transitive].into_iter().collect()
        );
        assert_eq!(
            Logic::KD45.frame_conditions(),
            [Serial, Transitive, Euclidean].into_iter().collect()
        );
    }

    #[test]
    fn frame_check_examples() {
        let dead: Vec<Vec<usize>> = vec![vec![]];
        let looped = vec![vec![0]];
        assert!(is_frame_for(&dead, Logic::K));
        assert!(!is_frame_for(&dead, Logic::D));
        assert!(is_frame_for(&looped, Logic::S5));
        // a -> b, a -> c without b -> c is not euclidean
        let fork = vec![vec![1, 2], vec![], vec![]];
        assert!(!is_frame_for(&fork, Logic::K5));
        assert!(is_frame_for(&fork, Logic::K4));
        let chain = vec![vec![1], vec![2], vec![]];
        assert!(!is_frame_for(&chain, Logic::K4));
    }

    #[test]
    fn names_round_trip() {
        for l in Logic::all() {
            assert_eq!(l.name().parse::<Logic>().unwrap(), l);
        }
        assert_eq!("kt5".parse::<Logic>().unwrap(), Logic::S5);
        assert!("s6".parse::<Logic>().is_err());
    }

    #[test]
    fn normalization() {
        assert_eq!(Logic::new(true, true, false, false), Logic::T);
        assert_eq!(Logic::new(false, true, false, true), Logic::S5);
        assert!(Logic::T.has_d());
    }

    #[test]
    fn lattice_monotonicity() {
        for a in Logic::all() {
            for b in Logic::all() {
                if b.extends(a) {
                    let fa = a.frame_conditions();
                    let fb = b.frame_conditions();
                    // T subsumes the serial condition
                    let covered = fa
                        .iter()
                        .all(|c| fb.contains(c) || (*c == Serial && fb.contains(&Reflexive)));
                    assert!(covered, "{a} -> {b}");
                }
            }
        }
    }

    #[test]
    fn s5_models_are_models_of_weaker_logics() {
        let frames: Vec<Vec<Vec<usize>>> = vec![
            vec![vec![0]],
            vec![vec![0, 1], vec![0, 1]],
            vec![vec![0], vec![1]],
        ];
        for fr in frames {
            assert!(is_frame_for(&fr, Logic::S5));
            for l in Logic::all() {
                assert!(is_frame_for(&fr, l), "{l}");
            }
        }
    }
}
