use std::collections::BTreeSet;

use super::{RuleError, RuleName};
use crate::graph::{Graph, Item};

/// Every graph reachable from `g` by one application of `rule`.
///
/// Existential rules (R3, I_OR, E_BOT) need `witness`; the others ignore it.
pub fn apply_first_degree(
    rule: RuleName,
    g: &Graph,
    witness: Option<&Graph>,
) -> Result<BTreeSet<Graph>, RuleError> {
    if rule.degree() != 1 {
        return Err(RuleError::NotFirstDegree(rule));
    }
    if rule.is_existential() {
        let w = witness.ok_or(RuleError::WitnessRequired(rule))?;
        return Ok(existential(rule, g, w));
    }
    Ok(plain(rule, g))
}

/// Like [`apply_first_degree`], taking witnesses for existential rules from `pool`.
pub fn apply_with_pool(rule: RuleName, g: &Graph, pool: &[Graph]) -> BTreeSet<Graph> {
    if rule.degree() != 1 {
        return BTreeSet::new();
    }
    if rule.is_existential() {
        pool.iter().flat_map(|w| existential(rule, g, w)).collect()
    } else {
        plain(rule, g)
    }
}

fn sole_cut(g: &Graph) -> Option<&Graph> {
    match g.as_single() {
        Some(Item::Cut(body)) => Some(body),
        _ => None,
    }
}

/// Distinct top-level items with their first index.
fn distinct_items(g: &Graph) -> impl Iterator<Item = (usize, &Item)> {
    let items = g.items();
    items
        .iter()
        .enumerate()
        .filter(move |(i, it)| *i == 0 || items[i - 1] != **it)
}

fn existential(rule: RuleName, g: &Graph, w: &Graph) -> BTreeSet<Graph> {
    let mut out = BTreeSet::new();
    match rule {
        RuleName::R3 => {
            if let Some(a) = sole_cut(g) {
                out.insert(Graph::cut(a.union(w)));
            }
        }
        RuleName::IOr => {
            out.insert(Graph::disj(g.clone(), w.clone()));
        }
        RuleName::EBot => {
            if g.is_falsum() {
                out.insert(w.clone());
            }
        }
        _ => unreachable!("not existential"),
    }
    out
}

fn plain(rule: RuleName, g: &Graph) -> BTreeSet<Graph> {
    let mut out = BTreeSet::new();
    match rule {
        RuleName::R2 => out.extend(g.sub_multisets()),
        RuleName::R4 => {
            if let Some(body) = sole_cut(g) {
                for (i, it) in distinct_items(body) {
                    if let Item::Cut(a) = it {
                        let rest = body.without(i);
                        for b in rest.sub_multisets() {
                            out.insert(Graph::cut(rest.with_item(Item::Cut(a.union(&b)))));
                        }
                    }
                }
            }
        }
        RuleName::R5 => {
            for (i, it) in distinct_items(g) {
                if let Item::Cut(body) = it {
                    let a = g.without(i);
                    if let Some(b) = body.difference(&a) {
                        out.insert(a.with_item(Item::Cut(b)));
                    }
                }
            }
        }
        RuleName::R6 => {
            for (i, it) in distinct_items(g) {
                if let Item::Cut(body) = it {
                    if let Some(Item::Cut(b)) = body.as_single() {
                        out.insert(g.without(i).union(b));
                    }
                }
            }
        }
        RuleName::R7 => {
            if let Some(body) = sole_cut(g) {
                for (a, b) in body.splits() {
                    out.insert(Graph::cut(a.with_item(Item::Cut(Graph::cut(b)))));
                }
            }
        }
        RuleName::INeg => {
            if let Some(a) = sole_cut(g) {
                out.insert(Graph::scroll(a.clone(), Graph::falsum()));
            }
        }
        RuleName::ENeg => {
            if let Some(Item::Scroll(a, f)) = g.as_single() {
                if f.is_falsum() {
                    out.insert(Graph::cut(a.clone()));
                }
            }
        }
        RuleName::Mpi => {
            for (i, it) in distinct_items(g) {
                if let Item::Scroll(a, b) = it {
                    if g.without(i) == *a {
                        out.insert(b.clone());
                    }
                }
            }
        }
        RuleName::IP2 => {
            if let Some(body) = sole_cut(g) {
                for (a, b) in body.splits() {
                    out.insert(Graph::scroll(a, Graph::cut(b)));
                }
            }
        }
        RuleName::EP => {
            if let Some(Item::Scroll(a, b)) = g.as_single() {
                out.insert(Graph::cut(a.with_item(Item::Cut(b.clone()))));
            }
        }
        RuleName::IP3 => {
            if let Some(Item::Disj(a, b)) = g.as_single() {
                out.insert(Graph::scroll(Graph::cut(a.clone()), b.clone()));
                out.insert(Graph::scroll(Graph::cut(b.clone()), a.clone()));
            }
        }
        RuleName::IOrp => {
            if let Some(body) = sole_cut(g) {
                if let [Item::Cut(a), Item::Cut(b)] = body.items() {
                    out.insert(Graph::disj(a.clone(), b.clone()));
                }
            }
        }
        _ => unreachable!("{rule} handled elsewhere"),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn g(s: &str) -> Graph {
        parse_graph(s).unwrap()
    }

    fn apply(rule: RuleName, s: &str) -> BTreeSet<Graph> {
        apply_first_degree(rule, &g(s), None).unwrap()
    }

    fn set(xs: &[&str]) -> BTreeSet<Graph> {
        xs.iter().map(|s| g(s)).collect()
    }

    #[test]
    fn erasure_gives_every_sub_multiset() {
        assert_eq!(apply(RuleName::R2, "p q"), set(&["p q", "p", "q", ""]));
    }

    #[test]
    fn modus_ponens_and_closing_a_scroll() {
        assert_eq!(apply(RuleName::Mpi, "p {p => q}"), set(&["q"]));
        assert!(apply(RuleName::Mpi, "p r {p => q}").is_empty());
        assert_eq!(apply(RuleName::EP, "{p => q}"), set(&["(p (q))"]));
    }

    #[test]
    fn deiteration_and_double_cuts() {
        assert!(apply(RuleName::R5, "p (p q)").contains(&g("p (q)")));
        assert_eq!(apply(RuleName::R6, "a ((b))"), set(&["a b"]));
        assert_eq!(apply(RuleName::R6, "((#))"), set(&["#"]));
        assert_eq!(apply(RuleName::R7, "(a)"), set(&["(a (#))", "(((a)))"]));
    }

    #[test]
    fn iteration_into_a_cut() {
        let out = apply(RuleName::R4, "(b c (a))");
        assert!(out.contains(&g("(b c (a b))")));
        assert!(out.contains(&g("(b c (a b c))")));
        assert!(out.contains(&g("(b c (a))")));
        assert!(apply(RuleName::R4, "(b c)").is_empty());
    }

    #[test]
    fn negation_rules() {
        assert_eq!(apply(RuleName::INeg, "(p q)"), set(&["{p q => #}"]));
        assert_eq!(apply(RuleName::ENeg, "{p q => #}"), set(&["(p q)"]));
        assert!(apply(RuleName::ENeg, "{p => q}").is_empty());
        assert_eq!(apply(RuleName::IP2, "(a b)"), set(&["{a b => #}", "{a => (b)}", "{b => (a)}", "{=> (a b)}"]));
    }

    #[test]
    fn disjunction_rules() {
        assert_eq!(apply(RuleName::IP3, "{a | b}"), set(&["{(a) => b}", "{(b) => a}"]));
        assert_eq!(apply(RuleName::IOrp, "((p) (q))"), set(&["{p | q}"]));
        assert!(apply(RuleName::IOrp, "((p) q)").is_empty());
    }

    #[test]
    fn existential_rules_need_witnesses() {
        for r in [RuleName::R3, RuleName::IOr, RuleName::EBot] {
            assert_eq!(apply_first_degree(r, &g("#"), None), Err(RuleError::WitnessRequired(r)));
        }
        let w = g("q");
        assert_eq!(apply_first_degree(RuleName::R3, &g("(p)"), Some(&w)).unwrap(), set(&["(p q)"]));
        assert_eq!(apply_first_degree(RuleName::IOr, &g("p"), Some(&w)).unwrap(), set(&["{p | q}"]));
        assert_eq!(apply_first_degree(RuleName::EBot, &g("#"), Some(&w)).unwrap(), set(&["q"]));
        assert!(apply_first_degree(RuleName::EBot, &g("# p"), Some(&w)).unwrap().is_empty());
        assert_eq!(
            apply_first_degree(RuleName::R8, &g("p"), None),
            Err(RuleError::NotFirstDegree(RuleName::R8))
        );
        let pool = [g("q"), g("r")];
        assert_eq!(apply_with_pool(RuleName::IOr, &g("p"), &pool), set(&["{p | q}", "{p | r}"]));
    }
}
