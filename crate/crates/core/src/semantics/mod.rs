//! Semantic oracles: truth tables for classical logic, a contraction-free
//! sequent prover for intuitionistic logic, and bounded Kripke search.

mod classical;
mod ipc;
mod kripke;

use std::fmt;
use std::str::FromStr;

pub use classical::{classical_valid, eval_classical};
pub use ipc::ipc_valid;
pub use kripke::{eval_kripke, kripke_countermodel, KripkeError, KripkeModel, EXHAUSTIVE_WORLDS};

use crate::formula::{translate, Formula};
use crate::graph::Sequent;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Logic {
    Classical,
    Ipc,
}

impl Logic {
    pub fn valid(self, f: &Formula) -> bool {
        match self {
            Logic::Classical => classical_valid(f),
            Logic::Ipc => ipc_valid(f),
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Logic::Classical => "CPC",
            Logic::Ipc => "IPC",
        })
    }
}

#[derive(Debug, thiserror::Error)]
#[error("unknown logic `{0}` (expected cpc or ipc)")]
pub struct UnknownLogic(String);

impl FromStr for Logic {
    type Err = UnknownLogic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cpc" | "classical" => Ok(Logic::Classical),
            "ipc" | "intuitionistic" => Ok(Logic::Ipc),
            _ => Err(UnknownLogic(s.to_string())),
        }
    }
}

/// The formula read of a sequent: `translate(source) -> translate(target)`.
pub fn sequent_formula(s: &Sequent) -> Formula {
    Formula::imp(translate(&s.source), translate(&s.target))
}

pub fn sequent_sound(logic: Logic, s: &Sequent) -> bool {
    logic.valid(&sequent_formula(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn seq(a: &str, b: &str) -> Sequent {
        Sequent::new(parse_graph(a).unwrap(), parse_graph(b).unwrap())
    }

    #[test]
    fn sequent_soundness_examples() {
        assert!(sequent_sound(Logic::Ipc, &seq("p {p => q}", "q")));
        assert!(!sequent_sound(Logic::Ipc, &seq("((p))", "p")));
        assert!(sequent_sound(Logic::Classical, &seq("((p))", "p")));
    }

    #[test]
    fn logic_names() {
        assert_eq!("cpc".parse::<Logic>().unwrap(), Logic::Classical);
        assert_eq!("IPC".parse::<Logic>().unwrap(), Logic::Ipc);
        assert!("k4".parse::<Logic>().is_err());
    }
}
