//! Rule schemas of the four systems, applied to whole sheets.

mod first;
mod registry;
mod second;

pub use first::{apply_first_degree, apply_with_pool};
pub use registry::{registry, SystemId, SystemRegistry, UnknownSystem};
pub use second::{conclude_second_degree, ctx_lift, second_degree_target};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Canonical rule identifiers as written in proof scripts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleName {
    R0,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    IOr,
    INeg,
    ENeg,
    Mpi,
    EBot,
    R8i,
    R8id,
    EOr,
    IP2,
    IP3,
    EP,
    IOrp,
    Ctx,
}

impl RuleName {
    pub const ALL: [RuleName; 21] = [
        RuleName::R0,
        RuleName::R2,
        RuleName::R3,
        RuleName::R4,
        RuleName::R5,
        RuleName::R6,
        RuleName::R7,
        RuleName::R8,
        RuleName::IOr,
        RuleName::INeg,
        RuleName::ENeg,
        RuleName::Mpi,
        RuleName::EBot,
        RuleName::R8i,
        RuleName::R8id,
        RuleName::EOr,
        RuleName::IP2,
        RuleName::IP3,
        RuleName::EP,
        RuleName::IOrp,
        RuleName::Ctx,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleName::R0 => "R0",
            RuleName::R2 => "R2",
            RuleName::R3 => "R3",
            RuleName::R4 => "R4",
            RuleName::R5 => "R5",
            RuleName::R6 => "R6",
            RuleName::R7 => "R7",
            RuleName::R8 => "R8",
            RuleName::IOr => "I_OR",
            RuleName::INeg => "I_NEG",
            RuleName::ENeg => "E_NEG",
            RuleName::Mpi => "MPI",
            RuleName::EBot => "E_BOT",
            RuleName::R8i => "R8I",
            RuleName::R8id => "R8ID",
            RuleName::EOr => "E_OR",
            RuleName::IP2 => "I_P2",
            RuleName::IP3 => "I_P3",
            RuleName::EP => "E_P",
            RuleName::IOrp => "I_ORP",
            RuleName::Ctx => "CTX",
        }
    }

    pub fn degree(self) -> u8 {
        match self {
            RuleName::R0
            | RuleName::R8
            | RuleName::R8i
            | RuleName::R8id
            | RuleName::EOr
            | RuleName::Ctx => 2,
            _ => 1,
        }
    }

    /// Rules whose result mentions a graph absent from the premise.
    pub fn is_existential(self) -> bool {
        matches!(self, RuleName::R3 | RuleName::IOr | RuleName::EBot)
    }

    /// Number of cited sequents a second-degree rule takes.
    pub fn arity(self) -> usize {
        match self {
            RuleName::R0 | RuleName::EOr => 2,
            _ if self.degree() == 2 => 1,
            _ => 0,
        }
    }

    pub fn schema(self) -> RuleSchema {
        let pattern = match self {
            RuleName::R0 => "A |- B ; A |- C  /  A |- B C",
            RuleName::R2 => "A B |- A",
            RuleName::R3 => "(A) |- (A B)",
            RuleName::R4 => "(B C (A)) |- (B C (A B))",
            RuleName::R5 => "A (A B) |- A (B)",
            RuleName::R6 => "A ((B)) |- A B",
            RuleName::R7 => "(A B) |- (A ((B)))",
            RuleName::R8 => "A B |- C  /  A |- (B (C))",
            RuleName::IOr => "A |- {A | B}",
            RuleName::INeg => "(A) |- {A => #}",
            RuleName::ENeg => "{A => #} |- (A)",
            RuleName::Mpi => "A {A => B} |- B",
            RuleName::EBot => "# |- A",
            RuleName::R8i => "A B |- C  /  A |- {B => C}",
            RuleName::R8id => "A |- B  /  |- {A => B}",
            RuleName::EOr => "A |- C ; B |- C  /  {A | B} |- C",
            RuleName::IP2 => "(A B) |- {A => (B)}",
            RuleName::IP3 => "{A | B} |- {(A) => B}",
            RuleName::EP => "{A => B} |- (A (B))",
            RuleName::IOrp => "((A) (B)) |- {A | B}",
            RuleName::Ctx => "B |- C  /  A B |- A C",
        };
        let systems = SystemId::ALL
            .into_iter()
            .filter(|&s| registry(s).contains(self))
            .collect();
        RuleSchema {
            name: self,
            degree: self.degree(),
            pattern,
            systems,
        }
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleName {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleName::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| RuleError::UnknownRule(s.to_string()))
    }
}

/// Description of one schema: its name, degree, pattern over the
/// metavariables A, B, C, and the systems that include it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSchema {
    pub name: RuleName,
    pub degree: u8,
    pub pattern: &'static str,
    pub systems: Vec<SystemId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("{0} needs a witness graph")]
    WitnessRequired(RuleName),
    #[error("{0} is not a first-degree rule")]
    NotFirstDegree(RuleName),
    #[error("{0} is not a second-degree rule")]
    NotSecondDegree(RuleName),
    #[error("{rule} takes {expected} premise(s), got {got}")]
    Arity {
        rule: RuleName,
        expected: usize,
        got: usize,
    },
    #[error("{rule}: {msg}")]
    SideCondition { rule: RuleName, msg: String },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for r in RuleName::ALL {
            assert_eq!(r.as_str().parse::<RuleName>().unwrap(), r);
        }
        assert!("R1".parse::<RuleName>().is_err());
    }

    #[test]
    fn schema_lists_systems() {
        assert_eq!(RuleName::R6.schema().systems, vec![SystemId::Alfao]);
        assert_eq!(RuleName::Ctx.schema().systems.len(), 4);
        assert_eq!(RuleName::IOrp.schema().systems, vec![SystemId::AlfaIoClassic]);
        assert!(RuleName::R8id.schema().systems.is_empty());
        assert_eq!(RuleName::R8i.schema().degree, 2);
    }
}
