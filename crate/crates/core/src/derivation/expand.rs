//! Lemma inlining and CTX elimination.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::{subst_map, LemmaDb, Step, Subproof, Theorem};
use crate::graph::{Graph, Sequent, Subst};
use crate::rules::RuleName;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error("unknown lemma `{0}`")]
    UnknownLemma(String),
    #[error("unknown sequent `{0}`")]
    UnknownReference(String),
    #[error("CTX premise `{premise}` does not fit `{current}`")]
    BadContext { premise: String, current: Graph },
}

/// Lemma inlining followed by CTX elimination: the result uses basic rules only.
pub fn expand(th: &Theorem, db: &LemmaDb) -> Result<Theorem, ExpandError> {
    eliminate_ctx(&inline_lemmas(th, db)?)
}

/// Replaces every lemma step by the lemma's own steps under the step's
/// substitution, recursively. `have` blocks coming from lemmas are renamed.
pub fn inline_lemmas(th: &Theorem, db: &LemmaDb) -> Result<Theorem, ExpandError> {
    let mut names = Names::of(th);
    let steps = inline(&th.proof.steps, db, &Subst::new(), &HashMap::new(), false, &mut names)?;
    let mut out = th.clone();
    out.proof.steps = steps;
    Ok(out)
}

struct Names {
    used: HashSet<String>,
    counter: usize,
}

impl Names {
    fn of(th: &Theorem) -> Names {
        fn walk(steps: &[Step], used: &mut HashSet<String>) {
            for s in steps {
                if let Step::Have(sub) = s {
                    used.insert(sub.name.clone());
                    walk(&sub.steps, used);
                }
            }
        }
        let mut used: HashSet<String> = th.premises.iter().map(|p| p.name.clone()).collect();
        walk(&th.proof.steps, &mut used);
        Names { used, counter: 0 }
    }

    fn fresh(&mut self, base: &str) -> String {
        loop {
            self.counter += 1;
            let name = format!("x{}_{base}", self.counter);
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }
}

fn rename(ren: &HashMap<String, String>, name: &str) -> String {
    ren.get(name).cloned().unwrap_or_else(|| name.to_string())
}

fn inline(
    steps: &[Step],
    db: &LemmaDb,
    sigma: &Subst,
    ren: &HashMap<String, String>,
    fresh_haves: bool,
    names: &mut Names,
) -> Result<Vec<Step>, ExpandError> {
    let mut ren = ren.clone();
    let mut out = Vec::with_capacity(steps.len());
    for step in steps {
        match step {
            Step::FirstDegree {
                rule,
                witness,
                result,
            } => out.push(Step::FirstDegree {
                rule: *rule,
                witness: witness.as_ref().map(|w| w.substitute(sigma)),
                result: result.substitute(sigma),
            }),
            Step::SecondDegree {
                rule,
                premises,
                split,
                result,
            } => out.push(Step::SecondDegree {
                rule: *rule,
                premises: premises.iter().map(|p| rename(&ren, p)).collect(),
                split: split.as_ref().map(|s| s.substitute(sigma)),
                result: result.substitute(sigma),
            }),
            Step::Cite { name, result } => out.push(Step::Cite {
                name: rename(&ren, name),
                result: result.substitute(sigma),
            }),
            Step::Have(sub) => {
                let body = inline(&sub.steps, db, sigma, &ren, fresh_haves, names)?;
                let name = if fresh_haves {
                    let n = names.fresh(&sub.name);
                    ren.insert(sub.name.clone(), n.clone());
                    n
                } else {
                    sub.name.clone()
                };
                out.push(Step::Have(Subproof {
                    name,
                    sequent: Sequent::new(sub.sequent.source.substitute(sigma), sub.sequent.target.substitute(sigma)),
                    steps: body,
                }));
            }
            Step::Lemma {
                name,
                subst,
                premises,
                ..
            } => {
                let entry = db.get(name).ok_or_else(|| ExpandError::UnknownLemma(name.clone()))?;
                let own = subst_map(subst);
                let mut composed: Subst = sigma.clone();
                for (x, g) in &own {
                    composed.insert(x.clone(), g.substitute(sigma));
                }
                let inner_ren: HashMap<String, String> = entry
                    .premises()
                    .iter()
                    .zip(premises)
                    .map(|(p, id)| (p.name.clone(), rename(&ren, id)))
                    .collect();
                let th = entry.theorem();
                out.extend(inline(&th.proof.steps, db, &composed, &inner_ren, true, names)?);
            }
        }
    }
    Ok(out)
}

/// Rewrites every CTX step `K B => K C` citing `h: B |- C` as two `have`
/// blocks joined by R0: one erases down to `B` and cites `h`, the other
/// erases down to `K`.
pub fn eliminate_ctx(th: &Theorem) -> Result<Theorem, ExpandError> {
    let mut names = Names::of(th);
    let mut scope: Vec<(String, Sequent)> = th
        .premises
        .iter()
        .map(|p| (p.name.clone(), p.sequent.clone()))
        .collect();
    let steps = elim(&th.proof.initial, &th.proof.steps, &mut scope, &mut names)?;
    let mut out = th.clone();
    out.proof.steps = steps;
    Ok(out)
}

fn elim(
    initial: &Graph,
    steps: &[Step],
    scope: &mut Vec<(String, Sequent)>,
    names: &mut Names,
) -> Result<Vec<Step>, ExpandError> {
    let depth = scope.len();
    let mut cur = initial.clone();
    let mut out = Vec::new();
    for step in steps {
        match step {
            Step::Have(sub) => {
                let body = elim(&sub.sequent.source, &sub.steps, scope, names)?;
                scope.push((sub.name.clone(), sub.sequent.clone()));
                out.push(Step::Have(Subproof {
                    name: sub.name.clone(),
                    sequent: sub.sequent.clone(),
                    steps: body,
                }));
            }
            Step::SecondDegree {
                rule: RuleName::Ctx,
                premises,
                result,
                ..
            } if premises.len() == 1 => {
                let h = &premises[0];
                let seq = scope
                    .iter()
                    .rev()
                    .find(|(n, _)| n == h)
                    .map(|(_, s)| s.clone())
                    .ok_or_else(|| ExpandError::UnknownReference(h.clone()))?;
                let context = cur.difference(&seq.source).ok_or_else(|| ExpandError::BadContext {
                    premise: h.clone(),
                    current: cur.clone(),
                })?;
                let (moved, kept) = (names.fresh("ctx"), names.fresh("ctx"));
                out.push(Step::Have(Subproof {
                    name: moved.clone(),
                    sequent: Sequent::new(cur.clone(), seq.target.clone()),
                    steps: vec![
                        Step::FirstDegree {
                            rule: RuleName::R2,
                            witness: None,
                            result: seq.source.clone(),
                        },
                        Step::Cite {
                            name: h.clone(),
                            result: seq.target.clone(),
                        },
                    ],
                }));
                out.push(Step::Have(Subproof {
                    name: kept.clone(),
                    sequent: Sequent::new(cur.clone(), context.clone()),
                    steps: vec![Step::FirstDegree {
                        rule: RuleName::R2,
                        witness: None,
                        result: context,
                    }],
                }));
                scope.push((moved.clone(), Sequent::new(cur.clone(), seq.target.clone())));
                out.push(Step::SecondDegree {
                    rule: RuleName::R0,
                    premises: vec![kept, moved],
                    split: None,
                    result: result.clone(),
                });
            }
            other => out.push(other.clone()),
        }
        if let Some(r) = step.result() {
            cur = r.canonicalize();
        }
    }
    scope.truncate(depth);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::{check_theorem, parse_script};

    const TEXT: &str = "system ALFAO
        theorem mp vars a b from: a (a (b))
          step R5 => a ((b))
          step R2 => ((b))
          step R6 => b
        qed
        theorem mp_r6 vars a b from: a ((b))
          have h1: a ((b)) |- a { step R2 => a }
          have h2: a ((b)) |- b {
            step R2 => ((b))
            lemma mp [a := ; b := b] => b
          }
          step R0 [h1, h2] => a b
        qed";

    #[test]
    fn inlined_lemmas_check_without_a_db() {
        let db = LemmaDb::from_text(TEXT).unwrap();
        let th = db.get("mp_r6").unwrap().theorem().clone();
        let flat = expand(&th, &db).unwrap();
        let s = check_theorem(&flat, &LemmaDb::new()).unwrap();
        assert_eq!(s, check_theorem(&th, &db).unwrap());
        assert_eq!(flat.proof.step_count(), 6);
    }

    #[test]
    fn ctx_becomes_juxtaposition() {
        let th = parse_script(
            "system ALFA_I theorem t vars a b c premise r: b |- c from: a b
             step CTX [r] => a c
             qed",
        )
        .unwrap()
        .theorems
        .remove(0);
        let flat = eliminate_ctx(&th).unwrap();
        assert!(!format!("{flat:?}").contains("Ctx"));
        assert_eq!(
            check_theorem(&flat, &LemmaDb::new()).unwrap(),
            check_theorem(&th, &LemmaDb::new()).unwrap()
        );
    }
}
