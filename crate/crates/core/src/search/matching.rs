//! Multiset pattern matching for lemma application. A variable standing
//! alone in an area matches any sub-multiset of that area, so matching is
//! associative-commutative and may return several substitutions.

use std::collections::BTreeSet;

use crate::graph::{Graph, Item, Subst};

/// Every `σ` over `vars` with `pat.substitute(σ) == g`.
pub fn match_graph(pat: &Graph, g: &Graph, vars: &BTreeSet<String>) -> BTreeSet<Subst> {
    let mut out = BTreeSet::new();
    let m = Matcher { vars };
    m.area(pat.items(), g.items(), Subst::new(), &mut |s| {
        out.insert(s);
    });
    out.retain(|s| pat.substitute(s) == *g);
    out
}

struct Matcher<'a> {
    vars: &'a BTreeSet<String>,
}

type Emit<'e> = dyn FnMut(Subst) + 'e;

impl Matcher<'_> {
    fn is_var<'i>(&self, it: &'i Item) -> Option<&'i str> {
        match it {
            Item::Atom(x) if self.vars.contains(x) => Some(x),
            _ => None,
        }
    }

    fn area(&self, pat: &[Item], g: &[Item], sigma: Subst, emit: &mut Emit<'_>) {
        let fixed: Vec<&Item> = pat.iter().filter(|it| self.is_var(it).is_none()).collect();
        let mut occ: Vec<(String, usize)> = Vec::new();
        for x in pat.iter().filter_map(|it| self.is_var(it)) {
            match occ.iter_mut().find(|(y, _)| y == x) {
                Some((_, m)) => *m += 1,
                None => occ.push((x.to_string(), 1)),
            }
        }
        if fixed.len() > g.len() {
            return;
        }
        let mut used = vec![false; g.len()];
        self.assign(&fixed, g, &mut used, sigma, &occ, emit);
    }

    fn assign(
        &self,
        fixed: &[&Item],
        g: &[Item],
        used: &mut Vec<bool>,
        sigma: Subst,
        occ: &[(String, usize)],
        emit: &mut Emit<'_>,
    ) {
        let Some((first, rest)) = fixed.split_first() else {
            let remaining = Graph::new(
                g.iter()
                    .zip(used.iter())
                    .filter(|(_, u)| !**u)
                    .map(|(it, _)| it.clone())
                    .collect(),
            );
            self.distribute(remaining, occ, sigma, emit);
            return;
        };
        for j in 0..g.len() {
            // equal neighbours give the same matches
            if used[j] || (j > 0 && g[j] == g[j - 1] && !used[j - 1]) {
                continue;
            }
            let mut found = Vec::new();
            self.item(first, &g[j], sigma.clone(), &mut |s| found.push(s));
            used[j] = true;
            for s in found {
                self.assign(rest, g, used, s, occ, emit);
            }
            used[j] = false;
        }
    }

    /// Shares what is left of an area among the variables standing in it.
    fn distribute(&self, mut rest: Graph, occ: &[(String, usize)], mut sigma: Subst, emit: &mut Emit<'_>) {
        let mut free = Vec::new();
        for (x, m) in occ {
            match sigma.get(x) {
                Some(v) => {
                    for _ in 0..*m {
                        match rest.difference(v) {
                            Some(r) => rest = r,
                            None => return,
                        }
                    }
                }
                None => free.push((x.as_str(), *m)),
            }
        }
        self.share(rest, &free, &mut sigma, emit);
    }

    fn share(&self, rest: Graph, free: &[(&str, usize)], sigma: &mut Subst, emit: &mut Emit<'_>) {
        let Some(((x, m), others)) = free.split_first() else {
            if rest.is_empty() {
                emit(sigma.clone());
            }
            return;
        };
        let candidates = if others.is_empty() {
            divide(&rest, *m).into_iter().collect()
        } else {
            rest.sub_multisets()
        };
        for part in candidates {
            let mut left = Some(rest.clone());
            for _ in 0..*m {
                left = left.and_then(|l| l.difference(&part));
            }
            let Some(left) = left else { continue };
            sigma.insert(x.to_string(), part);
            self.share(left, others, sigma, emit);
            sigma.remove(*x);
        }
    }

    fn item(&self, p: &Item, g: &Item, sigma: Subst, emit: &mut Emit<'_>) {
        match (p, g) {
            (Item::Atom(x), Item::Atom(y)) => {
                if x == y {
                    emit(sigma);
                }
            }
            (Item::Cut(a), Item::Cut(b)) => self.area(a.items(), b.items(), sigma, emit),
            (Item::Scroll(pa, pb), Item::Scroll(ga, gb)) => {
                let mut firsts = Vec::new();
                self.area(pa.items(), ga.items(), sigma, &mut |s| firsts.push(s));
                for s in firsts {
                    self.area(pb.items(), gb.items(), s, emit);
                }
            }
            (Item::Disj(pa, pb), Item::Disj(ga, gb)) => {
                for (x, y) in [(ga, gb), (gb, ga)] {
                    let mut firsts = Vec::new();
                    self.area(pa.items(), x.items(), sigma.clone(), &mut |s| firsts.push(s));
                    for s in firsts {
                        self.area(pb.items(), y.items(), s, emit);
                    }
                }
            }
            _ => {}
        }
    }
}

/// `g` as `m` copies of one graph, if it is one.
fn divide(g: &Graph, m: usize) -> Option<Graph> {
    if m == 1 {
        return Some(g.clone());
    }
    let items = g.items();
    let mut out = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let j = i + items[i..].iter().take_while(|it| **it == items[i]).count();
        if (j - i) % m != 0 {
            return None;
        }
        out.extend(std::iter::repeat_n(items[i].clone(), (j - i) / m));
        i = j;
    }
    Some(Graph::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn g(s: &str) -> Graph {
        parse_graph(s).unwrap()
    }

    fn vars(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn matches(p: &str, t: &str, xs: &[&str]) -> Vec<String> {
        match_graph(&g(p), &g(t), &vars(xs))
            .into_iter()
            .map(|s| s.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(","))
            .collect()
    }

    #[test]
    fn a_lone_variable_takes_the_area() {
        assert_eq!(matches("a", "p (q)", &["a"]), vec!["a=p (q)"]);
        assert_eq!(matches("a", "", &["a"]), vec!["a="]);
    }

    #[test]
    fn nonlinear_patterns() {
        assert_eq!(matches("a (a b)", "p (p q)", &["a", "b"]), vec!["a=p,b=q"]);
        assert!(matches("a (a b)", "p (q)", &["a", "b"]).is_empty());
        assert_eq!(matches("a a", "p p q q", &["a"]), vec!["a=p q"]);
        assert!(matches("a a", "p q", &["a"]).is_empty());
    }

    #[test]
    fn two_variables_in_one_area_split_it() {
        assert_eq!(matches("a ((b))", "((p))", &["a", "b"]), vec!["a=,b=p"]);
        assert_eq!(matches("(a b)", "(p q)", &["a", "b"]).len(), 4);
    }

    #[test]
    fn disjunction_sides_commute() {
        assert_eq!(matches("{a | (b)}", "{(p) | q}", &["a", "b"]), vec!["a=q,b=p"]);
        assert_eq!(matches("{a => b}", "{p => q}", &["a", "b"]), vec!["a=p,b=q"]);
    }

    #[test]
    fn constants_must_agree() {
        assert!(matches("p a", "q r", &["a"]).is_empty());
        assert_eq!(matches("p a", "p r", &["a"]), vec!["a=r"]);
    }
}
