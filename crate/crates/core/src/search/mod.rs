//! Bounded proof search. Iterative deepening on step count over forward
//! first-degree and lemma moves, inverse first-degree moves from the goal,
//! and goal-directed second-degree decomposition. Every result is re-checked
//! by the kernel before it is returned.

mod matching;

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

pub use matching::match_graph;

use crate::derivation::{check_theorem_in, Derivation, LemmaDb, LemmaEntry, Step, Subproof, Theorem};
use crate::graph::{Graph, Item, Sequent, Subst};
use crate::rules::{apply_first_degree, registry, RuleName, SystemId, SystemRegistry};
use crate::semantics::sequent_sound;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Steps counted as in [`Derivation::step_count`].
    pub max_steps: usize,
    /// Largest graph (by [`Graph::measure`] size) the search may visit.
    pub max_graph_size: usize,
    /// Successors kept per node, smallest graphs first.
    pub max_branch: usize,
    /// Witnesses for R3, I_OR and E_BOT. Empty means the subgraphs of the
    /// source and the goal.
    pub witness_pool: Vec<Graph>,
}

impl SearchBudget {
    pub const DEFAULT_SIZE: usize = 8;
    pub const DEFAULT_BRANCH: usize = 64;

    pub fn steps(max_steps: usize) -> SearchBudget {
        SearchBudget {
            max_steps,
            max_graph_size: Self::DEFAULT_SIZE,
            max_branch: Self::DEFAULT_BRANCH,
            witness_pool: Vec::new(),
        }
    }

    fn pool(&self, graphs: &[&Graph]) -> Vec<Graph> {
        if !self.witness_pool.is_empty() {
            return self.witness_pool.iter().map(Graph::canonicalize).collect();
        }
        let mut all = BTreeSet::new();
        for g in graphs {
            all.extend(g.subgraphs());
        }
        all.into_iter().collect()
    }
}

/// Looks for a derivation of `to` from `from` in the stock registry of `system`.
pub fn prove(system: SystemId, db: &LemmaDb, from: &Graph, to: &Graph, budget: &SearchBudget) -> Option<Derivation> {
    prove_in(&registry(system), db, from, to, budget)
}

/// Like [`prove`] with an explicit registry. `None` means the budget ran
/// out, not that no derivation exists.
pub fn prove_in(
    reg: &SystemRegistry,
    db: &LemmaDb,
    from: &Graph,
    to: &Graph,
    budget: &SearchBudget,
) -> Option<Derivation> {
    let (from, to) = (from.canonicalize(), to.canonicalize());
    let mut search = Search::new(reg, db, budget, budget.pool(&[&from, &to]));
    let steps = search.solve(&from, &to, budget.max_steps)?;
    let th = Theorem {
        name: "search".into(),
        vars: Vec::new(),
        premises: Vec::new(),
        proof: Derivation {
            system: reg.id,
            initial: from.clone(),
            steps,
        },
    };
    match check_theorem_in(&th, reg, db) {
        Ok(s) if s.target == to && th.proof.step_count() <= budget.max_steps => Some(th.proof),
        other => {
            debug_assert!(false, "search produced a rejected derivation: {other:?}");
            None
        }
    }
}

/// Every graph reachable from `from` in at most `max_steps` forward
/// first-degree or lemma steps. `max_branch` is not applied here, so each
/// budget field only ever enlarges the result.
///
/// Panics if a reached graph is not a semantic consequence of `from`,
/// which would mean an unsound rule.
pub fn enumerate_consequences(system: SystemId, db: &LemmaDb, from: &Graph, budget: &SearchBudget) -> BTreeSet<Graph> {
    enumerate_in(&registry(system), db, from, budget)
}

pub fn enumerate_in(reg: &SystemRegistry, db: &LemmaDb, from: &Graph, budget: &SearchBudget) -> BTreeSet<Graph> {
    let from = from.canonicalize();
    let unbounded = SearchBudget {
        max_branch: usize::MAX,
        ..budget.clone()
    };
    let mut search = Search::new(reg, db, &unbounded, budget.pool(&[&from]));
    let mut seen = BTreeSet::from([from.clone()]);
    let mut frontier = vec![from.clone()];
    for _ in 0..budget.max_steps {
        let mut next = Vec::new();
        for g in &frontier {
            for (_, h) in search.forward(g).iter() {
                if seen.insert(h.clone()) {
                    next.push(h.clone());
                }
            }
        }
        frontier = next;
    }
    for g in &seen {
        assert!(
            sequent_sound(reg.logic(), &Sequent::new(from.clone(), g.clone())),
            "unsound consequence `{from} |- {g}` in {reg}"
        );
    }
    seen
}

type Moves = Rc<Vec<(Step, Graph)>>;

struct Search<'a> {
    reg: &'a SystemRegistry,
    budget: &'a SearchBudget,
    pool: Vec<Graph>,
    lemmas: Vec<&'a LemmaEntry>,
    failed: HashMap<(Graph, Graph), usize>,
    forward_cache: HashMap<Graph, Moves>,
    backward_cache: HashMap<Graph, Moves>,
    fresh: usize,
}

fn first(rule: RuleName, witness: Option<Graph>, result: Graph) -> Step {
    Step::FirstDegree { rule, witness, result }
}

fn lemma_step(entry: &LemmaEntry, sigma: &Subst, result: Graph) -> Step {
    Step::Lemma {
        name: entry.name().to_string(),
        subst: sigma.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        premises: Vec::new(),
        result,
    }
}

impl<'a> Search<'a> {
    fn new(reg: &'a SystemRegistry, db: &'a LemmaDb, budget: &'a SearchBudget, pool: Vec<Graph>) -> Self {
        let lemmas = db
            .entries()
            .filter(|e| e.premises().is_empty() && reg.includes(&registry(e.system())))
            .collect();
        Search {
            reg,
            budget,
            pool,
            lemmas,
            failed: HashMap::new(),
            forward_cache: HashMap::new(),
            backward_cache: HashMap::new(),
            fresh: 0,
        }
    }

    fn fits(&self, g: &Graph) -> bool {
        g.measure().size <= self.budget.max_graph_size
    }

    /// Shortest derivation within `n` steps.
    fn solve(&mut self, src: &Graph, tgt: &Graph, n: usize) -> Option<Vec<Step>> {
        (0..=n).find_map(|k| self.dfs(src, tgt, k))
    }

    fn dfs(&mut self, src: &Graph, tgt: &Graph, n: usize) -> Option<Vec<Step>> {
        if src == tgt {
            return Some(Vec::new());
        }
        if n == 0 {
            return None;
        }
        let key = (src.clone(), tgt.clone());
        if self.failed.get(&key).is_some_and(|&m| m >= n) {
            return None;
        }
        if let Some(steps) = self.decompose(src, tgt, n) {
            return Some(steps);
        }
        for (step, g) in self.forward(src).iter() {
            if let Some(mut rest) = self.dfs(g, tgt, n - 1) {
                rest.insert(0, step.clone());
                return Some(rest);
            }
        }
        for (step, pre) in self.backward(tgt).iter() {
            if let Some(mut steps) = self.dfs(src, pre, n - 1) {
                steps.push(step.clone());
                return Some(steps);
            }
        }
        self.failed.insert(key, n);
        None
    }

    fn have(&mut self, source: Graph, target: Graph, steps: Vec<Step>) -> (String, Step) {
        self.fresh += 1;
        let name = format!("h{}", self.fresh);
        let sub = Subproof {
            name: name.clone(),
            sequent: Sequent::new(source, target),
            steps,
        };
        (name, Step::Have(sub))
    }

    fn second(rule: RuleName, premises: Vec<String>, split: Option<Graph>, result: Graph) -> Step {
        Step::SecondDegree {
            rule,
            premises,
            split,
            result,
        }
    }

    /// Second-degree rules read backwards from the goal.
    fn decompose(&mut self, src: &Graph, tgt: &Graph, n: usize) -> Option<Vec<Step>> {
        let reg = self.reg;
        if let Some(Item::Scroll(b, c)) = tgt.as_single() {
            if reg.contains(RuleName::R8i) {
                let inner = src.union(b);
                if self.fits(&inner) {
                    if let Some(body) = self.dfs(&inner, c, n - 1) {
                        let (h, have) = self.have(inner, c.clone(), body);
                        return Some(vec![have, Self::second(RuleName::R8i, vec![h], Some(src.clone()), tgt.clone())]);
                    }
                }
            }
            if reg.contains(RuleName::R8id) && src.is_empty() {
                if let Some(body) = self.dfs(b, c, n - 1) {
                    let (h, have) = self.have(b.clone(), c.clone(), body);
                    return Some(vec![have, Self::second(RuleName::R8id, vec![h], None, tgt.clone())]);
                }
            }
        }
        if let Some(Item::Cut(body)) = tgt.as_single() {
            if reg.contains(RuleName::R8) {
                for (i, it) in body.items().iter().enumerate() {
                    let Item::Cut(c) = it else { continue };
                    if i > 0 && body.items()[i - 1] == *it {
                        continue;
                    }
                    let inner = src.union(&body.without(i));
                    if !self.fits(&inner) {
                        continue;
                    }
                    if let Some(steps) = self.dfs(&inner, c, n - 1) {
                        let (h, have) = self.have(inner, c.clone(), steps);
                        return Some(vec![have, Self::second(RuleName::R8, vec![h], Some(src.clone()), tgt.clone())]);
                    }
                }
            }
        }
        if n >= 2 {
            if let Some(Item::Disj(a, b)) = src.as_single() {
                if reg.contains(RuleName::EOr) {
                    if let Some(steps) = self.pair(a, tgt, b, tgt, n) {
                        return Some(self.join(RuleName::EOr, tgt, steps));
                    }
                }
            }
            if tgt.len() >= 2 && reg.contains(RuleName::R0) {
                for (t1, t2) in tgt.splits() {
                    if t1.is_empty() || t2.is_empty() || t1 > t2 {
                        continue;
                    }
                    if let Some(steps) = self.pair(src, &t1, src, &t2, n) {
                        return Some(self.join(RuleName::R0, tgt, steps));
                    }
                }
            }
        }
        let common = src.intersection(tgt);
        if !common.is_empty() {
            for k in common.sub_multisets() {
                if k.is_empty() {
                    continue;
                }
                let (b, c) = (src.difference(&k)?, tgt.difference(&k)?);
                if let Some(steps) = self.dfs(&b, &c, n - 1) {
                    let (h, have) = self.have(b, c, steps);
                    return Some(vec![have, Self::second(RuleName::Ctx, vec![h], None, tgt.clone())]);
                }
            }
        }
        None
    }

    /// Two subproofs sharing `n - 1` steps; the first is made as short as possible.
    fn pair(&mut self, s1: &Graph, t1: &Graph, s2: &Graph, t2: &Graph, n: usize) -> Option<(Vec<Step>, Vec<Step>, Sequent, Sequent)> {
        let p1 = self.solve(s1, t1, n - 2)?;
        let used = crate::derivation::count_steps(&p1);
        let p2 = self.dfs(s2, t2, n - 1 - used)?;
        Some((p1, p2, Sequent::new(s1.clone(), t1.clone()), Sequent::new(s2.clone(), t2.clone())))
    }

    fn join(
        &mut self,
        rule: RuleName,
        tgt: &Graph,
        (p1, p2, q1, q2): (Vec<Step>, Vec<Step>, Sequent, Sequent),
    ) -> Vec<Step> {
        let (h1, have1) = self.have(q1.source, q1.target, p1);
        let (h2, have2) = self.have(q2.source, q2.target, p2);
        vec![have1, have2, Self::second(rule, vec![h1, h2], None, tgt.clone())]
    }

    fn finish(&self, moves: Vec<(Step, Graph)>, from: &Graph) -> Moves {
        let mut seen = BTreeSet::new();
        let mut kept: Vec<(Step, Graph)> = moves
            .into_iter()
            .filter(|(_, g)| g != from && self.fits(g) && seen.insert(g.clone()))
            .collect();
        kept.sort_by(|(_, a), (_, b)| a.measure().size.cmp(&b.measure().size).then_with(|| a.cmp(b)));
        kept.truncate(self.budget.max_branch);
        Rc::new(kept)
    }

    fn forward(&mut self, g: &Graph) -> Moves {
        if let Some(m) = self.forward_cache.get(g) {
            return m.clone();
        }
        let mut moves = Vec::new();
        for rule in self.reg.first_degree() {
            if rule.is_existential() {
                for w in &self.pool {
                    if let Ok(out) = apply_first_degree(rule, g, Some(w)) {
                        moves.extend(out.into_iter().map(|h| (first(rule, Some(w.clone()), h.clone()), h)));
                    }
                }
            } else if let Ok(out) = apply_first_degree(rule, g, None) {
                moves.extend(out.into_iter().map(|h| (first(rule, None, h.clone()), h)));
            }
        }
        for entry in &self.lemmas {
            let stmt = entry.statement();
            let vars: BTreeSet<String> = entry.vars().iter().cloned().collect();
            for sigma in match_graph(&stmt.source, g, &vars) {
                let h = stmt.target.substitute(&sigma);
                moves.push((lemma_step(entry, &sigma, h.clone()), h));
            }
        }
        let m = self.finish(moves, g);
        self.forward_cache.insert(g.clone(), m.clone());
        m
    }

    /// Graphs from which one step reaches `t`, with that step.
    fn backward(&mut self, t: &Graph) -> Moves {
        if let Some(m) = self.backward_cache.get(t) {
            return m.clone();
        }
        let mut moves = Vec::new();
        for rule in self.reg.first_degree() {
            for (pre, witness) in preimages(rule, t) {
                let ok = apply_first_degree(rule, &pre, witness.as_ref()).is_ok_and(|out| out.contains(t));
                if ok {
                    moves.push((first(rule, witness, t.clone()), pre));
                }
            }
        }
        for entry in &self.lemmas {
            let stmt = entry.statement();
            let vars: BTreeSet<String> = entry.vars().iter().cloned().collect();
            let needed = stmt.source.atoms();
            for sigma in match_graph(&stmt.target, t, &vars) {
                if needed.iter().any(|x| vars.contains(x) && !sigma.contains_key(x)) {
                    continue;
                }
                moves.push((lemma_step(entry, &sigma, t.clone()), stmt.source.substitute(&sigma)));
            }
        }
        let m = self.finish(moves, t);
        self.backward_cache.insert(t.clone(), m.clone());
        m
    }
}

/// Candidate sources for one step of `rule` ending in `t`, with the witness
/// the step needs. Candidates are checked by the caller.
fn preimages(rule: RuleName, t: &Graph) -> Vec<(Graph, Option<Graph>)> {
    let mut out = Vec::new();
    let single = t.as_single();
    let sole_cut = match single {
        Some(Item::Cut(body)) => Some(body),
        _ => None,
    };
    match rule {
        RuleName::R3 => {
            if let Some(x) = sole_cut {
                for a in x.sub_multisets() {
                    if a.len() < x.len() {
                        let w = x.difference(&a).expect("sub-multiset");
                        out.push((Graph::cut(a), Some(w)));
                    }
                }
            }
        }
        RuleName::R4 => {
            if let Some(body) = sole_cut {
                for (i, it) in body.items().iter().enumerate() {
                    let Item::Cut(x) = it else { continue };
                    let rest = body.without(i);
                    for b in x.intersection(&rest).sub_multisets() {
                        if !b.is_empty() {
                            let smaller = x.difference(&b).expect("sub-multiset");
                            out.push((Graph::cut(rest.with_item(Item::Cut(smaller))), None));
                        }
                    }
                }
            }
        }
        RuleName::R5 => {
            for (i, it) in t.items().iter().enumerate() {
                if let Item::Cut(y) = it {
                    let a = t.without(i);
                    out.push((a.with_item(Item::Cut(a.union(y))), None));
                }
            }
        }
        RuleName::R6 => {
            for (a, b) in t.splits() {
                if !b.is_empty() {
                    out.push((a.with_item(Item::Cut(Graph::cut(b))), None));
                }
            }
        }
        RuleName::R7 => {
            if let Some(body) = sole_cut {
                for (i, it) in body.items().iter().enumerate() {
                    if let Item::Cut(inner) = it {
                        if let Some(Item::Cut(b)) = inner.as_single() {
                            out.push((Graph::cut(body.without(i).union(b)), None));
                        }
                    }
                }
            }
        }
        RuleName::IOr => {
            if let Some(Item::Disj(a, b)) = single {
                out.push((a.clone(), Some(b.clone())));
                out.push((b.clone(), Some(a.clone())));
            }
        }
        RuleName::INeg => {
            if let Some(Item::Scroll(a, f)) = single {
                if f.is_falsum() {
                    out.push((Graph::cut(a.clone()), None));
                }
            }
        }
        RuleName::ENeg => {
            if let Some(a) = sole_cut {
                out.push((Graph::scroll(a.clone(), Graph::falsum()), None));
            }
        }
        RuleName::EBot => out.push((Graph::falsum(), Some(t.clone()))),
        RuleName::IP2 => {
            if let Some(Item::Scroll(a, cb)) = single {
                if let Some(Item::Cut(b)) = cb.as_single() {
                    out.push((Graph::cut(a.union(b)), None));
                }
            }
        }
        RuleName::EP => {
            if let Some(body) = sole_cut {
                for (i, it) in body.items().iter().enumerate() {
                    if let Item::Cut(b) = it {
                        out.push((Graph::scroll(body.without(i), b.clone()), None));
                    }
                }
            }
        }
        RuleName::IP3 => {
            if let Some(Item::Scroll(na, b)) = single {
                if let Some(Item::Cut(a)) = na.as_single() {
                    out.push((Graph::disj(a.clone(), b.clone()), None));
                }
            }
        }
        RuleName::IOrp => {
            if let Some(Item::Disj(a, b)) = single {
                out.push((Graph::cut(Graph::new(vec![Item::Cut(a.clone()), Item::Cut(b.clone())])), None));
            }
        }
        // R2 and MPI have unboundedly many sources; forward search covers them.
        _ => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::graph::parse_graph;
    use crate::semantics::Logic;

    fn g(s: &str) -> Graph {
        parse_graph(s).unwrap()
    }

    #[test]
    fn modus_ponens_in_three_steps() {
        let d = prove(SystemId::Alfao, &LemmaDb::new(), &g("p (p (q))"), &g("q"), &SearchBudget::steps(4)).unwrap();
        assert_eq!(d.step_count(), 3);
        let mut rules: Vec<String> = d
            .steps
            .iter()
            .map(|s| match s {
                Step::FirstDegree { rule, .. } => rule.to_string(),
                _ => "?".into(),
            })
            .collect();
        // R2 and R6 commute here
        rules.sort();
        assert_eq!(rules, ["R2", "R5", "R6"]);
    }

    #[test]
    fn double_cut_introduction_without_lemmas() {
        let d = prove(SystemId::AlfaIo, &LemmaDb::new(), &g("a"), &g("((a))"), &SearchBudget::steps(3)).unwrap();
        assert!(d.step_count() <= 3);
    }

    #[test]
    fn double_cut_elimination_needs_the_classical_rule() {
        let (from, to) = (g("((p))"), g("p"));
        let budget = SearchBudget::steps(6);
        assert!(prove(SystemId::AlfaIo, corpus::db(), &from, &to, &budget).is_none());
        assert!(!sequent_sound(Logic::Ipc, &Sequent::new(from.clone(), to.clone())));
        assert!(prove(SystemId::AlfaIoClassic, corpus::db(), &from, &to, &budget).is_some());
    }

    #[test]
    fn deduction_goals_decompose() {
        let d = prove(SystemId::AlfaI, &LemmaDb::new(), &g(""), &g("{p => p}"), &SearchBudget::steps(2)).unwrap();
        assert!(matches!(d.steps.last(), Some(Step::SecondDegree { rule: RuleName::R8i, .. })));
    }

    #[test]
    fn consequences() {
        let budget = SearchBudget {
            witness_pool: vec![g("p")],
            ..SearchBudget::steps(1)
        };
        assert!(enumerate_consequences(SystemId::Alfao, &LemmaDb::new(), &g(""), &budget).contains(&g("")));

        let only_erasure = RuleName::ALL
            .iter()
            .fold(registry(SystemId::Alfao), |r, &x| if x == RuleName::R2 { r } else { r.without_rule(x) });
        let subs = enumerate_in(&only_erasure, &LemmaDb::new(), &g("p q"), &SearchBudget::steps(1));
        assert_eq!(subs, [g(""), g("p"), g("q"), g("p q")].into_iter().collect());

        let two = enumerate_consequences(SystemId::AlfaIo, &LemmaDb::new(), &g("{p | q}"), &SearchBudget::steps(2));
        assert!(two.contains(&g("((p) (q))")));
    }

    #[test]
    fn preimages_invert_their_rules() {
        for t in ["((a) (b))", "{a => (b)}", "(a ((b)))", "{p | q}", "a (b)", "{(p) => q}"] {
            let t = g(t);
            for rule in RuleName::ALL.into_iter().filter(|r| r.degree() == 1) {
                for (pre, w) in preimages(rule, &t) {
                    let out = apply_first_degree(rule, &pre, w.as_ref()).unwrap();
                    assert!(out.contains(&t), "{rule}: {pre} does not reach {t}");
                }
            }
        }
    }
}
