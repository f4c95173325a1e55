//! Proof objects, the script checker and the lemma database.
//!
//! A derivation is a chain of whole-sheet graphs. Second-degree steps cite
//! sequents proved earlier in named `have` blocks (or assumed as theorem
//! premises) and conclude the next link of the chain from them.

mod check;
mod db;
mod expand;
mod script;

pub use check::{check, check_theorem, check_theorem_in, CheckError, Reason};
pub use db::{load_db, save_db, DbError, LemmaDb, LemmaEntry};
pub use expand::{eliminate_ctx, expand, inline_lemmas, ExpandError};
pub use script::{parse_script, print_script, print_theorem};

use crate::formula::Formula;
use crate::graph::{Graph, Sequent, Subst};
use crate::rules::{RuleName, SystemId};
use crate::semantics::{sequent_formula, Logic};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    FirstDegree {
        rule: RuleName,
        witness: Option<Graph>,
        result: Graph,
    },
    SecondDegree {
        rule: RuleName,
        premises: Vec<String>,
        /// The part of the premise source kept as the conclusion's source (R8, R8I).
        split: Option<Graph>,
        result: Graph,
    },
    /// Rewrites with a named sequent whose source is the current graph.
    Cite { name: String, result: Graph },
    Lemma {
        name: String,
        subst: Vec<(String, Graph)>,
        premises: Vec<String>,
        result: Graph,
    },
    /// Proves a named sequent for later citation; leaves the current graph alone.
    Have(Subproof),
}

impl Step {
    /// The graph this step moves to; `None` for `have` blocks.
    pub fn result(&self) -> Option<&Graph> {
        match self {
            Step::FirstDegree { result, .. }
            | Step::SecondDegree { result, .. }
            | Step::Cite { result, .. }
            | Step::Lemma { result, .. } => Some(result),
            Step::Have(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subproof {
    pub name: String,
    pub sequent: Sequent,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub system: SystemId,
    pub initial: Graph,
    pub steps: Vec<Step>,
}

impl Derivation {
    /// The graph reached after the last step, read off the steps themselves.
    pub fn claimed_final(&self) -> &Graph {
        self.steps
            .iter()
            .rev()
            .find_map(Step::result)
            .unwrap_or(&self.initial)
    }

    /// Steps counted at every depth; a `have` counts only its body.
    pub fn step_count(&self) -> usize {
        count_steps(&self.steps)
    }
}

pub(crate) fn count_steps(steps: &[Step]) -> usize {
    steps
        .iter()
        .map(|s| match s {
            Step::Have(sub) => count_steps(&sub.steps),
            _ => 1,
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Premise {
    pub name: String,
    pub sequent: Sequent,
}

/// A named, possibly schematic, derivation. With premises it proves a
/// derived second-degree rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem {
    pub name: String,
    pub vars: Vec<String>,
    pub premises: Vec<Premise>,
    pub proof: Derivation,
}

impl Theorem {
    pub fn statement(&self) -> Sequent {
        Sequent::new(self.proof.initial.clone(), self.proof.claimed_final().clone())
    }

    /// The implication a sound theorem must make valid: premises, read as
    /// implications, imply the statement.
    pub fn formula(&self) -> Formula {
        let conclusion = sequent_formula(&self.statement());
        if self.premises.is_empty() {
            conclusion
        } else {
            Formula::imp(
                Formula::conj(self.premises.iter().map(|p| sequent_formula(&p.sequent))),
                conclusion,
            )
        }
    }

    pub fn semantically_sound(&self, logic: Logic) -> bool {
        logic.valid(&self.formula())
    }
}

/// A parsed `.gpf` file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Script {
    pub theorems: Vec<Theorem>,
}

pub(crate) fn subst_map(pairs: &[(String, Graph)]) -> Subst {
    pairs.iter().cloned().collect()
}
