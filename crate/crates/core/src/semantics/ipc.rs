//! Intuitionistic validity by a contraction-free sequent calculus (G4ip).
//!
//! Contexts are sets: contraction is admissible, and no rule here copies its
//! principal formula, so every branch terminates.

use std::collections::{BTreeSet, HashMap};

use crate::formula::Formula;

type Ctx = BTreeSet<Formula>;

#[derive(Default)]
struct Prover {
    memo: HashMap<(Ctx, Formula), bool>,
}

pub fn ipc_valid(f: &Formula) -> bool {
    Prover::default().prove(Ctx::new(), f.clone())
}

fn with(ctx: &Ctx, drop: &Formula, add: &[Formula]) -> Ctx {
    let mut next = ctx.clone();
    next.remove(drop);
    next.extend(add.iter().cloned());
    next
}

impl Prover {
    fn prove(&mut self, ctx: Ctx, goal: Formula) -> bool {
        let key = (ctx, goal);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = self.search(&key.0, &key.1);
        self.memo.insert(key, v);
        v
    }

    fn search(&mut self, ctx: &Ctx, goal: &Formula) -> bool {
        if ctx.contains(&Formula::Bot) || *goal == Formula::Top {
            return true;
        }
        if matches!(goal, Formula::Atom(_)) && ctx.contains(goal) {
            return true;
        }

        // invertible left rules
        for f in ctx {
            match f {
                Formula::Top => return self.prove(with(ctx, f, &[]), goal.clone()),
                Formula::And(a, b) => {
                    return self.prove(with(ctx, f, &[(**a).clone(), (**b).clone()]), goal.clone())
                }
                Formula::Or(a, b) => {
                    return self.prove(with(ctx, f, &[(**a).clone()]), goal.clone())
                        && self.prove(with(ctx, f, &[(**b).clone()]), goal.clone());
                }
                Formula::Imp(a, b) => {
                    let b = (**b).clone();
                    let next = match &**a {
                        Formula::Atom(_) if ctx.contains(a) => Some(vec![b]),
                        Formula::Top => Some(vec![b]),
                        Formula::Bot => Some(vec![]),
                        Formula::And(c, d) => {
                            Some(vec![Formula::imp((**c).clone(), Formula::imp((**d).clone(), b))])
                        }
                        Formula::Or(c, d) => Some(vec![
                            Formula::imp((**c).clone(), b.clone()),
                            Formula::imp((**d).clone(), b),
                        ]),
                        _ => None,
                    };
                    if let Some(add) = next {
                        return self.prove(with(ctx, f, &add), goal.clone());
                    }
                }
                _ => {}
            }
        }

        // invertible right rules
        match goal {
            Formula::And(a, b) => {
                return self.prove(ctx.clone(), (**a).clone()) && self.prove(ctx.clone(), (**b).clone())
            }
            Formula::Imp(a, b) => return self.prove(with(ctx, a, &[(**a).clone()]), (**b).clone()),
            _ => {}
        }

        // non-invertible choices
        if let Formula::Or(a, b) = goal {
            if self.prove(ctx.clone(), (**a).clone()) || self.prove(ctx.clone(), (**b).clone()) {
                return true;
            }
        }
        for f in ctx {
            if let Formula::Imp(cd, b) = f {
                if let Formula::Imp(_, d) = &**cd {
                    let left = with(ctx, f, &[Formula::imp((**d).clone(), (**b).clone())]);
                    if self.prove(left, (**cd).clone())
                        && self.prove(with(ctx, f, &[(**b).clone()]), goal.clone())
                    {
                        return true;
                    }
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn valid(s: &str) -> bool {
        ipc_valid(&parse_formula(s).unwrap())
    }

    #[test]
    fn intuitionistic_theorems() {
        assert!(valid("p -> p"));
        assert!(valid("~(p & q) -> p -> ~q"));
        assert!(valid("p & (p -> q) -> q"));
        assert!(valid("~~(p v ~p)"));
        assert!(valid("~~~p -> ~p"));
        assert!(valid("(p v q) -> (q v p)"));
        assert!(valid("((p -> q) -> r) -> (p -> q) -> r"));
        assert!(valid("F -> q"));
        assert!(valid("T"));
    }

    #[test]
    fn classical_only() {
        assert!(!valid("~~p -> p"));
        assert!(!valid("((p -> q) -> p) -> p"));
        assert!(!valid("p v ~p"));
        assert!(!valid("~(~p & ~q) -> p v q"));
        assert!(!valid("~(p & ~q) -> p -> q"));
        assert!(!valid("(p -> q) v (q -> p)"));
        assert!(!valid("p"));
        assert!(!valid("F"));
    }
}
