use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{NdProof, NdRule};
use crate::formula::Formula;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NdError {
    #[error("{rule}({conclusion}): {msg}")]
    Malformed {
        rule: NdRule,
        conclusion: Formula,
        msg: String,
    },
    #[error("label `{0}` names two different hypotheses")]
    LabelClash(String),
    #[error("label `{0}` is discharged in one branch and open in another")]
    OpenAndDischarged(String),
    #[error("label `{0}` is discharged twice on one path")]
    Rebound(String),
}

/// Open hypotheses (by label) and the conclusion of a checked proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgment {
    pub context: BTreeMap<String, Formula>,
    pub conclusion: Formula,
}

impl Judgment {
    pub fn hypotheses(&self) -> Vec<Formula> {
        self.context.values().cloned().collect()
    }

    /// `(h1 & ... & hn) -> conclusion`.
    pub fn formula(&self) -> Formula {
        Formula::imp(Formula::conj(self.hypotheses()), self.conclusion.clone())
    }
}

struct Scan {
    open: BTreeMap<String, Formula>,
    discharged: BTreeSet<String>,
}

pub fn check_nd(p: &NdProof) -> Result<Judgment, NdError> {
    let s = scan(p)?;
    Ok(Judgment {
        context: s.open,
        conclusion: p.conclusion.clone(),
    })
}

fn malformed(p: &NdProof, msg: impl Into<String>) -> NdError {
    NdError::Malformed {
        rule: p.rule,
        conclusion: p.conclusion.clone(),
        msg: msg.into(),
    }
}

fn expect(p: &NdProof, child: usize, want: &Formula) -> Result<(), NdError> {
    let got = &p.children[child].conclusion;
    if got == want {
        Ok(())
    } else {
        Err(malformed(p, format!("premise {} concludes `{got}`, expected `{want}`", child + 1)))
    }
}

fn join(parts: Vec<Scan>) -> Result<Scan, NdError> {
    let mut out = Scan {
        open: BTreeMap::new(),
        discharged: BTreeSet::new(),
    };
    for part in &parts {
        for l in &part.discharged {
            if !out.discharged.insert(l.clone()) {
                return Err(NdError::Rebound(l.clone()));
            }
        }
    }
    for part in parts {
        for (l, f) in part.open {
            if out.discharged.contains(&l) {
                return Err(NdError::OpenAndDischarged(l));
            }
            match out.open.get(&l) {
                Some(g) if *g != f => return Err(NdError::LabelClash(l)),
                _ => {
                    out.open.insert(l, f);
                }
            }
        }
    }
    Ok(out)
}

/// Removes `label` from the open hypotheses of `s`, which must all read `want`.
fn discharge(p: &NdProof, s: &mut Scan, label: &str, want: &Formula) -> Result<(), NdError> {
    if s.discharged.contains(label) {
        return Err(NdError::Rebound(label.to_string()));
    }
    if let Some(f) = s.open.remove(label) {
        if f != *want {
            return Err(malformed(p, format!("`{label}` is the hypothesis `{f}`, expected `{want}`")));
        }
    }
    Ok(())
}

fn scan(p: &NdProof) -> Result<Scan, NdError> {
    if p.children.len() != p.rule.arity() {
        return Err(malformed(
            p,
            format!("takes {} premise(s), got {}", p.rule.arity(), p.children.len()),
        ));
    }
    if p.rule.labelled() != p.label.is_some() {
        return Err(malformed(
            p,
            if p.rule.labelled() { "needs a label" } else { "takes no label" },
        ));
    }
    let c = &p.conclusion;
    match p.rule {
        NdRule::Hyp => {
            let label = p.label.clone().expect("checked");
            return Ok(Scan {
                open: BTreeMap::from([(label, c.clone())]),
                discharged: BTreeSet::new(),
            });
        }
        NdRule::AndI => match c {
            Formula::And(a, b) => {
                expect(p, 0, a)?;
                expect(p, 1, b)?;
            }
            _ => return Err(malformed(p, "conclusion is not a conjunction")),
        },
        NdRule::AndEL | NdRule::AndER => match &p.children[0].conclusion {
            Formula::And(a, b) => {
                let side = if p.rule == NdRule::AndEL { a } else { b };
                if **side != *c {
                    return Err(malformed(p, format!("`{c}` is not that side of the premise")));
                }
            }
            other => return Err(malformed(p, format!("premise `{other}` is not a conjunction"))),
        },
        NdRule::OrIL | NdRule::OrIR => match c {
            Formula::Or(a, b) => expect(p, 0, if p.rule == NdRule::OrIL { a } else { b })?,
            _ => return Err(malformed(p, "conclusion is not a disjunction")),
        },
        NdRule::BotE => expect(p, 0, &Formula::Bot)?,
        NdRule::ImpE => {
            let a = p.children[1].conclusion.clone();
            expect(p, 0, &Formula::imp(a, c.clone()))?;
        }
        NdRule::ImpI => {
            let Formula::Imp(a, b) = c else {
                return Err(malformed(p, "conclusion is not an implication"));
            };
            expect(p, 0, b)?;
            let mut s = scan(&p.children[0])?;
            let label = p.label.as_deref().expect("checked");
            discharge(p, &mut s, label, a)?;
            s.discharged.insert(label.to_string());
            return Ok(s);
        }
        NdRule::OrE => {
            let Formula::Or(a, b) = &p.children[0].conclusion else {
                return Err(malformed(p, "first premise is not a disjunction"));
            };
            expect(p, 1, c)?;
            expect(p, 2, c)?;
            let label = p.label.as_deref().expect("checked");
            let major = scan(&p.children[0])?;
            let mut left = scan(&p.children[1])?;
            let mut right = scan(&p.children[2])?;
            discharge(p, &mut left, label, a)?;
            discharge(p, &mut right, label, b)?;
            let mut s = join(vec![major, left, right])?;
            if s.open.contains_key(label) {
                return Err(NdError::OpenAndDischarged(label.to_string()));
            }
            s.discharged.insert(label.to_string());
            return Ok(s);
        }
    }
    join(p.children.iter().map(scan).collect::<Result<Vec<_>, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::nd::parse_nd;
    use crate::semantics::ipc_valid;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn implication_elimination_leaves_both_hypotheses_open() {
        let p = parse_nd("IMP_E(q){ HYP(p -> q)[f]{} HYP(p)[x]{} }").unwrap();
        let j = check_nd(&p).unwrap();
        assert_eq!(j.hypotheses(), vec![f("p -> q"), f("p")]);
    }

    #[test]
    fn identity_closes_everything() {
        let j = check_nd(&parse_nd("IMP_I(p -> p)[x]{ HYP(p)[x]{} }").unwrap()).unwrap();
        assert!(j.context.is_empty());
    }

    #[test]
    fn disjunction_commutes() {
        let p = parse_nd(
            "OR_E(q v p)[x]{ HYP(p v q)[d]{} OR_I_R(q v p){ HYP(p)[x]{} } OR_I_L(q v p){ HYP(q)[x]{} } }",
        )
        .unwrap();
        let j = check_nd(&p).unwrap();
        assert_eq!(j.hypotheses(), vec![f("p v q")]);
        assert!(ipc_valid(&j.formula()));
    }

    #[test]
    fn local_errors() {
        for bad in [
            "AND_I(p & q){ HYP(q)[x]{} HYP(p)[y]{} }",
            "IMP_E(q){ HYP(p -> r)[f]{} HYP(p)[x]{} }",
            "IMP_I(p -> q)[x]{ HYP(q)[y]{} HYP(q)[z]{} }",
            "HYP(p){}",
            "AND_E_L(q){ HYP(p & q)[h]{} }",
            "OR_I_L(p v q){ HYP(q)[h]{} }",
            "BOT_E(p){ HYP(p)[h]{} }",
            "IMP_I(p -> p)[x]{ HYP(q)[x]{} }",
        ] {
            assert!(check_nd(&parse_nd(bad).unwrap()).is_err(), "{bad}");
        }
    }

    #[test]
    fn label_scoping() {
        let clash = "AND_I(p & q){ HYP(p)[x]{} HYP(q)[x]{} }";
        assert_eq!(check_nd(&parse_nd(clash).unwrap()), Err(NdError::LabelClash("x".into())));
        let mixed = "AND_I((p -> p) & p){ IMP_I(p -> p)[x]{ HYP(p)[x]{} } HYP(p)[x]{} }";
        assert_eq!(check_nd(&parse_nd(mixed).unwrap()), Err(NdError::OpenAndDischarged("x".into())));
        let twice = "IMP_I(p -> p -> p)[x]{ IMP_I(p -> p)[x]{ HYP(p)[x]{} } }";
        assert_eq!(check_nd(&parse_nd(twice).unwrap()), Err(NdError::Rebound("x".into())));
    }
}
