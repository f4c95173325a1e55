use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{subst_map, Derivation, LemmaDb, Step, Theorem};
use crate::graph::{Graph, Sequent};
use crate::rules::{
    apply_first_degree, registry, second_degree_target, RuleError, RuleName, SystemRegistry,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Reason {
    #[error("rule {rule} not in system {system}")]
    RuleNotInSystem { rule: RuleName, system: String },
    #[error("{0}")]
    Rule(#[from] RuleError),
    #[error("`{to}` is not reachable from `{from}` by {by}")]
    NotReachable { by: String, from: Graph, to: Graph },
    #[error("{by} does not apply to `{current}`")]
    SourceMismatch { by: String, current: Graph },
    #[error("derivation ends at `{found}`, expected `{expected}`")]
    FinalMismatch { expected: Graph, found: Graph },
    #[error("unknown sequent `{0}`")]
    UnknownReference(String),
    #[error("unknown lemma `{0}`")]
    UnknownLemma(String),
    #[error("lemma `{lemma}` of {lemma_system} is not available in {system}")]
    LemmaNotInSystem {
        lemma: String,
        lemma_system: String,
        system: String,
    },
    #[error("lemma `{lemma}` has no variable `{var}`")]
    UnknownVariable { lemma: String, var: String },
    #[error("lemma `{lemma}` needs premises {expected:?}, got {got:?}")]
    LemmaPremises {
        lemma: String,
        expected: Vec<String>,
        got: Vec<String>,
    },
    #[error("name `{0}` is already bound")]
    DuplicateName(String),
    #[error("{0}")]
    BadOption(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct CheckError {
    pub theorem: String,
    /// 1-based step indices, outermost first; descends into `have` blocks.
    pub path: Vec<usize>,
    pub reason: Box<Reason>,
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "theorem `{}`", self.theorem)?;
        if !self.path.is_empty() {
            let path: Vec<String> = self.path.iter().map(usize::to_string).collect();
            write!(f, ", step {}", path.join("."))?;
        }
        write!(f, ": {}", self.reason)
    }
}

/// Checks a premise-free derivation and returns its final graph.
pub fn check(d: &Derivation, db: &LemmaDb) -> Result<Graph, CheckError> {
    let reg = registry(d.system);
    Checker::new(&reg, db, "")
        .run(&d.initial, &d.steps, &mut Vec::new(), &mut Vec::new())
}

/// Checks a theorem against its system's registry and returns the proved sequent.
pub fn check_theorem(th: &Theorem, db: &LemmaDb) -> Result<Sequent, CheckError> {
    check_theorem_in(th, &registry(th.proof.system), db)
}

/// Checks a theorem against an explicit (possibly modified) registry.
pub fn check_theorem_in(
    th: &Theorem,
    reg: &SystemRegistry,
    db: &LemmaDb,
) -> Result<Sequent, CheckError> {
    let checker = Checker::new(reg, db, &th.name);
    let mut scope: Vec<(String, Sequent)> = Vec::new();
    for p in &th.premises {
        if scope.iter().any(|(n, _)| *n == p.name) {
            return Err(checker.fail(&[], Reason::DuplicateName(p.name.clone())));
        }
        scope.push((p.name.clone(), p.sequent.clone()));
    }
    let last = checker.run(&th.proof.initial, &th.proof.steps, &mut scope, &mut Vec::new())?;
    Ok(Sequent::new(th.proof.initial.clone(), last))
}

struct Checker<'a> {
    reg: &'a SystemRegistry,
    db: &'a LemmaDb,
    theorem: &'a str,
}

impl<'a> Checker<'a> {
    fn new(reg: &'a SystemRegistry, db: &'a LemmaDb, theorem: &'a str) -> Self {
        Checker { reg, db, theorem }
    }

    fn fail(&self, path: &[usize], reason: Reason) -> CheckError {
        CheckError {
            theorem: self.theorem.to_string(),
            path: path.to_vec(),
            reason: Box::new(reason),
        }
    }

    fn lookup(&self, scope: &[(String, Sequent)], name: &str) -> Result<Sequent, Reason> {
        scope
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s.clone())
            .ok_or_else(|| Reason::UnknownReference(name.to_string()))
    }

    fn run(
        &self,
        initial: &Graph,
        steps: &[Step],
        scope: &mut Vec<(String, Sequent)>,
        path: &mut Vec<usize>,
    ) -> Result<Graph, CheckError> {
        let mut cur = initial.canonicalize();
        let depth = scope.len();
        for (i, step) in steps.iter().enumerate() {
            path.push(i + 1);
            match self.step(&cur, step, scope, path) {
                Ok(Some(next)) => cur = next,
                Ok(None) => {}
                Err(Ok(reason)) => return Err(self.fail(path, reason)),
                Err(Err(inner)) => return Err(inner),
            }
            path.pop();
        }
        scope.truncate(depth);
        Ok(cur)
    }

    /// `Err(Ok(_))` fails at this step; `Err(Err(_))` bubbles up a failure
    /// from inside a `have` block.
    #[allow(clippy::type_complexity)]
    fn step(
        &self,
        cur: &Graph,
        step: &Step,
        scope: &mut Vec<(String, Sequent)>,
        path: &mut Vec<usize>,
    ) -> Result<Option<Graph>, Result<Reason, CheckError>> {
        let system = || self.reg.to_string();
        match step {
            Step::FirstDegree {
                rule,
                witness,
                result,
            } => {
                if !self.reg.contains(*rule) {
                    return Err(Ok(Reason::RuleNotInSystem {
                        rule: *rule,
                        system: system(),
                    }));
                }
                if witness.is_some() && !rule.is_existential() {
                    return Err(Ok(Reason::BadOption(format!("{rule} takes no witness"))));
                }
                let w = witness.as_ref().map(Graph::canonicalize);
                let results = apply_first_degree(*rule, cur, w.as_ref()).map_err(|e| Ok(e.into()))?;
                let result = result.canonicalize();
                if results.contains(&result) {
                    Ok(Some(result))
                } else {
                    Err(Ok(Reason::NotReachable {
                        by: rule.to_string(),
                        from: cur.clone(),
                        to: result,
                    }))
                }
            }
            Step::SecondDegree {
                rule,
                premises,
                split,
                result,
            } => {
                if !self.reg.contains(*rule) {
                    return Err(Ok(Reason::RuleNotInSystem {
                        rule: *rule,
                        system: system(),
                    }));
                }
                if let Some(s) = split {
                    if !matches!(rule, RuleName::R8 | RuleName::R8i) {
                        return Err(Ok(Reason::BadOption(format!("{rule} takes no split"))));
                    }
                    if s.canonicalize() != *cur {
                        return Err(Ok(Reason::BadOption(format!(
                            "split `{s}` must equal the current graph `{cur}`"
                        ))));
                    }
                }
                let seqs = premises
                    .iter()
                    .map(|p| self.lookup(scope, p))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(Ok)?;
                let target = second_degree_target(*rule, &seqs, cur)
                    .map_err(|e| Ok(e.into()))?
                    .ok_or_else(|| {
                        Ok(Reason::SourceMismatch {
                            by: format!("{rule} [{}]", premises.join(", ")),
                            current: cur.clone(),
                        })
                    })?;
                let result = result.canonicalize();
                if target == result {
                    Ok(Some(result))
                } else {
                    Err(Ok(Reason::NotReachable {
                        by: rule.to_string(),
                        from: cur.clone(),
                        to: result,
                    }))
                }
            }
            Step::Cite { name, result } => {
                let s = self.lookup(scope, name).map_err(Ok)?;
                if s.source != *cur {
                    return Err(Ok(Reason::SourceMismatch {
                        by: format!("`{name}`"),
                        current: cur.clone(),
                    }));
                }
                let result = result.canonicalize();
                if s.target == result {
                    Ok(Some(result))
                } else {
                    Err(Ok(Reason::NotReachable {
                        by: format!("`{name}`"),
                        from: cur.clone(),
                        to: result,
                    }))
                }
            }
            Step::Lemma {
                name,
                subst,
                premises,
                result,
            } => self.lemma(cur, name, subst, premises, result, scope).map(Some).map_err(Ok),
            Step::Have(sub) => {
                if scope.iter().any(|(n, _)| *n == sub.name) {
                    return Err(Ok(Reason::DuplicateName(sub.name.clone())));
                }
                let seq = Sequent::new(sub.sequent.source.canonicalize(), sub.sequent.target.canonicalize());
                let last = self.run(&seq.source, &sub.steps, scope, path).map_err(Err)?;
                if last != seq.target {
                    return Err(Ok(Reason::FinalMismatch {
                        expected: seq.target,
                        found: last,
                    }));
                }
                scope.push((sub.name.clone(), seq));
                Ok(None)
            }
        }
    }

    fn lemma(
        &self,
        cur: &Graph,
        name: &str,
        subst: &[(String, Graph)],
        premises: &[String],
        result: &Graph,
        scope: &[(String, Sequent)],
    ) -> Result<Graph, Reason> {
        let entry = self
            .db
            .get(name)
            .ok_or_else(|| Reason::UnknownLemma(name.to_string()))?;
        let lemma_reg = registry(entry.system());
        if !self.reg.includes(&lemma_reg) {
            return Err(Reason::LemmaNotInSystem {
                lemma: name.to_string(),
                lemma_system: entry.system().to_string(),
                system: self.reg.to_string(),
            });
        }
        let vars: BTreeSet<&str> = entry.vars().iter().map(String::as_str).collect();
        if let Some((v, _)) = subst.iter().find(|(v, _)| !vars.contains(v.as_str())) {
            return Err(Reason::UnknownVariable {
                lemma: name.to_string(),
                var: v.clone(),
            });
        }
        let sigma = subst_map(subst);
        if entry.premises().len() != premises.len() {
            return Err(Reason::LemmaPremises {
                lemma: name.to_string(),
                expected: entry.premises().iter().map(|p| p.name.clone()).collect(),
                got: premises.to_vec(),
            });
        }
        for (p, id) in entry.premises().iter().zip(premises) {
            let cited = self.lookup(scope, id)?;
            let want = Sequent::new(p.sequent.source.substitute(&sigma), p.sequent.target.substitute(&sigma));
            if cited != want {
                return Err(Reason::BadOption(format!(
                    "`{id}` proves `{cited}`, lemma `{name}` needs `{want}`"
                )));
            }
        }
        let stmt = entry.statement();
        let source = stmt.source.substitute(&sigma);
        if source != *cur {
            return Err(Reason::SourceMismatch {
                by: format!("lemma `{name}` (source `{source}`)"),
                current: cur.clone(),
            });
        }
        let target = stmt.target.substitute(&sigma);
        let result = result.canonicalize();
        if target != result {
            return Err(Reason::NotReachable {
                by: format!("lemma `{name}`"),
                from: cur.clone(),
                to: result,
            });
        }
        Ok(result)
    }
}
