use std::collections::BTreeSet;

use super::{RuleError, RuleName};
use crate::graph::{Graph, Item, Sequent};

fn arity(rule: RuleName, premises: &[Sequent]) -> Result<(), RuleError> {
    if rule.degree() != 2 {
        return Err(RuleError::NotSecondDegree(rule));
    }
    if premises.len() != rule.arity() {
        return Err(RuleError::Arity {
            rule,
            expected: rule.arity(),
            got: premises.len(),
        });
    }
    Ok(())
}

fn side_conditions(rule: RuleName, premises: &[Sequent]) -> Result<(), RuleError> {
    match rule {
        RuleName::R0 if premises[0].source != premises[1].source => Err(RuleError::SideCondition {
            rule,
            msg: format!(
                "premise sources differ: `{}` vs `{}`",
                premises[0].source, premises[1].source
            ),
        }),
        RuleName::EOr if premises[0].target != premises[1].target => Err(RuleError::SideCondition {
            rule,
            msg: format!(
                "premise targets differ: `{}` vs `{}`",
                premises[0].target, premises[1].target
            ),
        }),
        _ => Ok(()),
    }
}

/// Every sequent the rule concludes from `premises`. R8 and R8I give one
/// conclusion per split of the premise source. CTX has infinitely many
/// conclusions; use [`ctx_lift`] or [`second_degree_target`] for it.
pub fn conclude_second_degree(
    rule: RuleName,
    premises: &[Sequent],
) -> Result<BTreeSet<Sequent>, RuleError> {
    arity(rule, premises)?;
    side_conditions(rule, premises)?;
    let mut out = BTreeSet::new();
    match rule {
        RuleName::R0 | RuleName::EOr | RuleName::R8id => {
            let p = &premises[0];
            let src = match rule {
                RuleName::R0 => p.source.clone(),
                RuleName::EOr => Graph::disj(p.source.clone(), premises[1].source.clone()),
                _ => Graph::empty(),
            };
            let tgt = second_degree_target(rule, premises, &src)?.expect("source fits");
            out.insert(Sequent::new(src, tgt));
        }
        RuleName::R8 | RuleName::R8i => {
            for (a, _) in premises[0].source.splits() {
                let tgt = second_degree_target(rule, premises, &a)?.expect("split of the source");
                out.insert(Sequent::new(a, tgt));
            }
        }
        RuleName::Ctx => {
            return Err(RuleError::SideCondition {
                rule,
                msg: "the context must be given".into(),
            })
        }
        _ => unreachable!("degree checked"),
    }
    Ok(out)
}

/// The target of the conclusion whose source is `source`, or `None` when
/// no conclusion of the rule starts there.
pub fn second_degree_target(
    rule: RuleName,
    premises: &[Sequent],
    source: &Graph,
) -> Result<Option<Graph>, RuleError> {
    arity(rule, premises)?;
    side_conditions(rule, premises)?;
    let p = &premises[0];
    Ok(match rule {
        RuleName::R0 => (*source == p.source).then(|| p.target.union(&premises[1].target)),
        RuleName::R8 => p.source.difference(source).map(|b| {
            Graph::cut(b.with_item(Item::Cut(p.target.clone())))
        }),
        RuleName::R8i => p
            .source
            .difference(source)
            .map(|b| Graph::scroll(b, p.target.clone())),
        RuleName::R8id => source
            .is_empty()
            .then(|| Graph::scroll(p.source.clone(), p.target.clone())),
        RuleName::EOr => {
            (*source == Graph::disj(p.source.clone(), premises[1].source.clone())).then(|| p.target.clone())
        }
        RuleName::Ctx => source
            .difference(&p.source)
            .map(|context| context.union(&p.target)),
        _ => unreachable!("degree checked"),
    })
}

/// `context ⊎ source ⊢ context ⊎ target`.
pub fn ctx_lift(s: &Sequent, context: &Graph) -> Sequent {
    Sequent::new(context.union(&s.source), context.union(&s.target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn seq(a: &str, b: &str) -> Sequent {
        Sequent::new(parse_graph(a).unwrap(), parse_graph(b).unwrap())
    }

    #[test]
    fn juxtaposing_conclusions() {
        let out = conclude_second_degree(RuleName::R0, &[seq("p", "q"), seq("p", "r")]).unwrap();
        assert!(out.contains(&seq("p", "q r")));
        assert!(matches!(
            conclude_second_degree(RuleName::R0, &[seq("p", "q"), seq("s", "r")]),
            Err(RuleError::SideCondition { .. })
        ));
        assert!(matches!(
            conclude_second_degree(RuleName::R0, &[seq("p", "q")]),
            Err(RuleError::Arity { expected: 2, got: 1, .. })
        ));
    }

    #[test]
    fn deduction_rules_split_the_source() {
        let out = conclude_second_degree(RuleName::R8i, &[seq("p q", "r")]).unwrap();
        assert!(out.contains(&seq("p", "{q => r}")));
        assert_eq!(out.len(), 4);
        let out = conclude_second_degree(RuleName::R8, &[seq("p q", "r")]).unwrap();
        assert!(out.contains(&seq("p", "(q (r))")));
        let out = conclude_second_degree(RuleName::R8id, &[seq("p", "q")]).unwrap();
        assert_eq!(out.into_iter().collect::<Vec<_>>(), vec![seq("", "{p => q}")]);
    }

    #[test]
    fn disjunction_elimination() {
        let out = conclude_second_degree(RuleName::EOr, &[seq("p", "r"), seq("q", "r")]).unwrap();
        assert_eq!(out.into_iter().collect::<Vec<_>>(), vec![seq("{p | q}", "r")]);
        assert!(conclude_second_degree(RuleName::EOr, &[seq("p", "r"), seq("q", "s")]).is_err());
    }

    #[test]
    fn context_lifting() {
        assert_eq!(ctx_lift(&seq("q", "r"), &parse_graph("p").unwrap()), seq("p q", "p r"));
        assert_eq!(ctx_lift(&seq("q", "r"), &Graph::empty()), seq("q", "r"));
        let t = second_degree_target(RuleName::Ctx, &[seq("q", "r")], &parse_graph("p q").unwrap());
        assert_eq!(t, Ok(Some(parse_graph("p r").unwrap())));
        assert!(conclude_second_degree(RuleName::Mpi, &[]).is_err());
    }
}
