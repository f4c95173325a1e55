//! Randomized soundness and substitutivity checks for rule registries,
//! with shrinking of counterexamples.

pub mod gen;

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{translate, Formula};
use crate::graph::{Graph, Item, Sequent, Subst};
use crate::rules::{
    apply_first_degree, apply_with_pool, conclude_second_degree, ctx_lift, registry, RuleName, SystemId,
    SystemRegistry,
};
use crate::semantics::{sequent_sound, Logic};
use gen::ATOMS;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Counterexample {
    Unsound {
        rule: RuleName,
        logic: Logic,
        witness: Option<Graph>,
        sequent: Sequent,
    },
    NotSubstitutive {
        rule: RuleName,
        graph: Graph,
        witness: Option<Graph>,
        sigma: Subst,
        result: Graph,
    },
    SecondDegree {
        rule: RuleName,
        logic: Logic,
        premises: Vec<Sequent>,
        conclusion: Sequent,
    },
}

impl Counterexample {
    pub fn rule(&self) -> RuleName {
        match self {
            Counterexample::Unsound { rule, .. }
            | Counterexample::NotSubstitutive { rule, .. }
            | Counterexample::SecondDegree { rule, .. } => *rule,
        }
    }

    /// The invalid formula behind a soundness failure.
    pub fn formula(&self) -> Option<Formula> {
        match self {
            Counterexample::Unsound { sequent, .. } | Counterexample::SecondDegree { conclusion: sequent, .. } => {
                Some(Formula::imp(translate(&sequent.source), translate(&sequent.target)))
            }
            Counterexample::NotSubstitutive { .. } => None,
        }
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::Unsound {
                rule,
                logic,
                witness,
                sequent,
            } => {
                write!(f, "{rule} is unsound in {logic}: {sequent}")?;
                if let Some(w) = witness {
                    write!(f, " (witness `{w}`)")?;
                }
                write!(f, "; `{}` is not valid", self.formula().expect("soundness failure"))
            }
            Counterexample::NotSubstitutive {
                rule,
                graph,
                witness,
                sigma,
                result,
            } => {
                let s: Vec<String> = sigma.iter().map(|(k, v)| format!("{k} := {v}")).collect();
                write!(f, "{rule} is not substitutive: `{graph}` gives `{result}`")?;
                if let Some(w) = witness {
                    write!(f, " with witness `{w}`")?;
                }
                write!(f, ", but not under [{}]", s.join("; "))
            }
            Counterexample::SecondDegree {
                rule,
                logic,
                premises,
                conclusion,
            } => {
                let ps: Vec<String> = premises.iter().map(Sequent::to_string).collect();
                write!(f, "{rule} is unsound in {logic}: from [{}] it concludes {conclusion}", ps.join("; "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleTally {
    pub rule: RuleName,
    pub instances: usize,
    /// Second-degree instances whose premises were all valid.
    pub live: usize,
}

#[derive(Clone, Debug)]
pub struct FuzzReport {
    pub system: String,
    pub logic: Logic,
    pub seed: u64,
    pub soundness: Vec<RuleTally>,
    pub substitutivity: Vec<RuleTally>,
    pub failures: Vec<Counterexample>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Soundness and substitutivity for every rule of the stock registry.
pub fn fuzz(system: SystemId, iterations: usize, seed: u64) -> FuzzReport {
    fuzz_registry(&registry(system), iterations, seed)
}

/// `iterations` instances per rule. Only the first counterexample of each
/// rule is kept, shrunk.
pub fn fuzz_registry(reg: &SystemRegistry, iterations: usize, seed: u64) -> FuzzReport {
    let logic = reg.logic();
    let mut report = FuzzReport {
        system: reg.to_string(),
        logic,
        seed,
        soundness: Vec::new(),
        substitutivity: Vec::new(),
        failures: Vec::new(),
    };
    for rule in reg.first_degree() {
        let (tally, fail) = soundness_for(rule, logic, iterations, seed);
        report.soundness.push(tally);
        report.failures.extend(fail);
        let (subst_tally, subst_fail) = substitutivity_for(rule, iterations, seed);
        report.substitutivity.push(subst_tally);
        report.failures.extend(subst_fail);
    }
    for rule in reg.second_degree() {
        let (tally, fail) = second_degree_for(rule, logic, iterations, seed);
        report.soundness.push(tally);
        report.failures.extend(fail);
    }
    report
}

/// `iterations` random applications of `rule`, each checked in `logic`.
/// The first failure comes back shrunk.
pub fn soundness_for(rule: RuleName, logic: Logic, iterations: usize, seed: u64) -> (RuleTally, Option<Counterexample>) {
    let mut rng = rule_rng(seed, rule);
    let mut tally = RuleTally { rule, instances: 0, live: 0 };
    let mut failure = None;
    for _ in 0..iterations {
        let (g, w, h) = first_degree_instance(&mut rng, rule);
        tally.instances += 1;
        if failure.is_none() && !sequent_sound(logic, &Sequent::new(g.clone(), h)) {
            failure = Some(shrink_first_degree(rule, logic, g, w));
        }
    }
    (tally, failure)
}

fn rule_rng(seed: u64, rule: RuleName) -> ChaCha8Rng {
    let idx = RuleName::ALL.iter().position(|r| *r == rule).expect("known rule") as u64;
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (idx + 1))
}

fn pick<R: Rng + ?Sized>(rng: &mut R, set: BTreeSet<Graph>) -> Option<Graph> {
    set.into_iter().choose(rng)
}

/// A source graph shaped so that `rule` applies, built from random parts.
/// Total depth stays within three.
pub fn first_degree_source<R: Rng + ?Sized>(rng: &mut R, rule: RuleName) -> Graph {
    let part = |rng: &mut R, depth: usize| gen::graph(rng, &ATOMS, depth, 2);
    let cut = Graph::cut;
    match rule {
        RuleName::R3 | RuleName::R7 | RuleName::IP2 => cut(part(rng, 2)),
        RuleName::R4 => {
            let (b, c, a) = (part(rng, 1), part(rng, 1), part(rng, 1));
            cut(b.union(&c).with_item(Item::Cut(a)))
        }
        RuleName::R5 => {
            let (a, b) = (part(rng, 2), part(rng, 2));
            a.with_item(Item::Cut(a.union(&b)))
        }
        RuleName::R6 => {
            let (a, b) = (part(rng, 3), part(rng, 1));
            a.with_item(Item::Cut(cut(b)))
        }
        RuleName::INeg => cut(part(rng, 2)),
        RuleName::ENeg => Graph::scroll(part(rng, 2), Graph::falsum()),
        RuleName::Mpi => {
            let (a, b) = (part(rng, 2), part(rng, 2));
            a.with_item(Item::scroll(a.clone(), b))
        }
        RuleName::EBot => Graph::falsum(),
        RuleName::EP => Graph::scroll(part(rng, 2), part(rng, 1)),
        RuleName::IP3 => Graph::disj(part(rng, 2), part(rng, 1)),
        RuleName::IOrp => cut(Graph::new(vec![Item::cut(part(rng, 1)), Item::cut(part(rng, 1))])),
        _ => part(rng, 3),
    }
}

/// `(source, witness, result)` with `result` one application of `rule` away.
pub fn first_degree_instance<R: Rng + ?Sized>(rng: &mut R, rule: RuleName) -> (Graph, Option<Graph>, Graph) {
    loop {
        let g = first_degree_source(rng, rule);
        let w = rule
            .is_existential()
            .then(|| g.subgraphs().into_iter().choose(rng).expect("blank is a subgraph"));
        let out = apply_first_degree(rule, &g, w.as_ref()).expect("first-degree rule");
        if let Some(h) = pick(rng, out) {
            return (g, w, h);
        }
    }
}

/// Unsound results of one application, smallest first.
fn unsound(rule: RuleName, logic: Logic, g: &Graph, w: Option<&Graph>) -> Option<Graph> {
    let out = apply_first_degree(rule, g, w).ok()?;
    let mut bad: Vec<Graph> = out
        .into_iter()
        .filter(|h| !sequent_sound(logic, &Sequent::new(g.clone(), h.clone())))
        .collect();
    bad.sort_by_key(|h| (h.measure().size, h.clone()));
    bad.into_iter().next()
}

/// Greedy shrinking: drop items, unwrap curves, rename atoms to `p`.
fn shrink_first_degree(rule: RuleName, logic: Logic, mut g: Graph, mut w: Option<Graph>) -> Counterexample {
    'outer: loop {
        for c in smaller(&g) {
            if unsound(rule, logic, &c, w.as_ref()).is_some() {
                g = c;
                continue 'outer;
            }
        }
        if let Some(cur) = w.clone() {
            for c in smaller(&cur) {
                if unsound(rule, logic, &g, Some(&c)).is_some() {
                    w = Some(c);
                    continue 'outer;
                }
            }
        }
        break;
    }
    let h = unsound(rule, logic, &g, w.as_ref()).expect("still a counterexample");
    Counterexample::Unsound {
        rule,
        logic,
        witness: w,
        sequent: Sequent::new(g, h),
    }
}

/// One-step simplifications of `g`, smaller or with fewer distinct atoms.
pub fn smaller(g: &Graph) -> Vec<Graph> {
    let mut out = Vec::new();
    for i in 0..g.len() {
        out.push(g.without(i));
    }
    for (i, it) in g.items().iter().enumerate() {
        let rest = g.without(i);
        match it {
            Item::Atom(_) => {}
            Item::Cut(b) => {
                out.push(rest.union(b));
                out.extend(smaller(b).into_iter().map(|s| rest.with_item(Item::Cut(s))));
            }
            Item::Scroll(a, b) | Item::Disj(a, b) => {
                out.push(rest.union(a));
                out.push(rest.union(b));
                let rebuild = |x: Graph, y: Graph| match it {
                    Item::Scroll(..) => Item::scroll(x, y),
                    _ => Item::disj(x, y),
                };
                out.extend(smaller(a).into_iter().map(|s| rest.with_item(rebuild(s, b.clone()))));
                out.extend(smaller(b).into_iter().map(|s| rest.with_item(rebuild(a.clone(), s))));
            }
        }
    }
    for x in g.atoms() {
        if x != "p" {
            let sigma = Subst::from([(x.clone(), Graph::atom("p"))]);
            out.push(g.substitute(&sigma));
        }
    }
    out.retain(|c| c != g);
    out
}

/// Checks `σ(h) ∈ rule(σ(g), σ(w))` for `iterations` random triples.
pub fn substitutivity_for(rule: RuleName, iterations: usize, seed: u64) -> (RuleTally, Option<Counterexample>) {
    let mut rng = rule_rng(seed ^ 0x5eed, rule);
    let mut tally = RuleTally { rule, instances: 0, live: 0 };
    let mut failure = None;
    for _ in 0..iterations {
        let (g, w, h) = first_degree_instance(&mut rng, rule);
        let sigma = gen::subst(&mut rng, &ATOMS);
        tally.instances += 1;
        if failure.is_none() && !substitutive(rule, &g, w.as_ref(), &h, &sigma) {
            failure = Some(Counterexample::NotSubstitutive {
                rule,
                graph: g,
                witness: w,
                sigma,
                result: h,
            });
        }
    }
    (tally, failure)
}

pub fn substitutive(rule: RuleName, g: &Graph, w: Option<&Graph>, h: &Graph, sigma: &Subst) -> bool {
    let sw = w.map(|w| w.substitute(sigma));
    apply_first_degree(rule, &g.substitute(sigma), sw.as_ref()).is_ok_and(|out| out.contains(&h.substitute(sigma)))
}

/// A few random first-degree steps of ALFA_I from `g`: a valid consequence
/// in both logics.
fn walk<R: Rng + ?Sized>(rng: &mut R, g: &Graph) -> Graph {
    let rules = registry(SystemId::AlfaI).first_degree();
    let mut cur = g.clone();
    for _ in 0..rng.gen_range(0..=2) {
        let pool: Vec<Graph> = cur.subgraphs().into_iter().collect();
        let rule = rules[rng.gen_range(0..rules.len())];
        let next = pick(rng, apply_with_pool(rule, &cur, &pool)).filter(|h| h.measure().size <= 12);
        if let Some(h) = next {
            cur = h;
        }
    }
    cur
}

/// A premise `s ⊢ t`, usually valid, sometimes arbitrary.
fn premise<R: Rng + ?Sized>(rng: &mut R, s: Graph) -> Sequent {
    let t = if rng.gen_bool(0.8) {
        walk(rng, &s)
    } else {
        gen::graph(rng, &ATOMS, 2, 2)
    };
    Sequent::new(s, t)
}

/// Random premises for a second-degree rule and every conclusion drawn from them.
pub fn second_degree_instance<R: Rng + ?Sized>(rng: &mut R, rule: RuleName) -> (Vec<Sequent>, Vec<Sequent>) {
    let part = |rng: &mut R| gen::graph(rng, &ATOMS, 2, 2);
    match rule {
        RuleName::R0 => {
            let s = part(rng);
            let (p1, p2) = (premise(rng, s.clone()), premise(rng, s));
            let c = conclude_second_degree(rule, &[p1.clone(), p2.clone()]).expect("same source");
            (vec![p1, p2], c.into_iter().collect())
        }
        RuleName::EOr => {
            let s = part(rng);
            let p1 = premise(rng, s);
            let b = if rng.gen_bool(0.7) {
                p1.target.union(&part(rng))
            } else {
                part(rng)
            };
            let p2 = Sequent::new(b, p1.target.clone());
            let c = conclude_second_degree(rule, &[p1.clone(), p2.clone()]).expect("same target");
            (vec![p1, p2], c.into_iter().collect())
        }
        RuleName::Ctx => {
            let s = part(rng);
            let p = premise(rng, s);
            let context = part(rng);
            let c = ctx_lift(&p, &context);
            (vec![p], vec![c])
        }
        _ => {
            let s = part(rng);
            let p = premise(rng, s);
            let c = conclude_second_degree(rule, std::slice::from_ref(&p)).expect("one premise");
            (vec![p], c.into_iter().collect())
        }
    }
}

/// Every conclusion is valid whenever every premise is.
pub fn second_degree_for(rule: RuleName, logic: Logic, iterations: usize, seed: u64) -> (RuleTally, Option<Counterexample>) {
    let mut rng = rule_rng(seed ^ 0x2d, rule);
    let mut tally = RuleTally { rule, instances: 0, live: 0 };
    let mut failure = None;
    for _ in 0..iterations {
        let (premises, conclusions) = second_degree_instance(&mut rng, rule);
        tally.instances += 1;
        if !premises.iter().all(|p| sequent_sound(logic, p)) {
            continue;
        }
        tally.live += 1;
        if failure.is_none() {
            if let Some(c) = conclusions.into_iter().find(|c| !sequent_sound(logic, c)) {
                failure = Some(Counterexample::SecondDegree {
                    rule,
                    logic,
                    premises,
                    conclusion: c,
                });
            }
        }
    }
    (tally, failure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    #[test]
    fn stock_registries_pass() {
        for id in SystemId::ALL {
            let r = fuzz(id, 30, 7);
            assert!(r.passed(), "{id}: {}", r.failures[0]);
        }
    }

    #[test]
    fn one_iteration_is_one_instance_per_rule() {
        let r = fuzz(SystemId::AlfaIo, 1, 0);
        assert!(r.soundness.iter().chain(&r.substitutivity).all(|t| t.instances == 1));
        assert_eq!(r.soundness.len(), registry(SystemId::AlfaIo).first_degree().len() + registry(SystemId::AlfaIo).second_degree().len());
    }

    #[test]
    fn planted_double_cut_is_caught_and_shrunk() {
        let reg = registry(SystemId::AlfaIo).with_rule(RuleName::R6);
        let r = fuzz_registry(&reg, 50, 7);
        let bad = r.failures.iter().find(|c| c.rule() == RuleName::R6).expect("R6 flagged");
        assert_eq!(bad.formula(), Some(parse_formula("~~p -> p").unwrap()));
    }

    #[test]
    fn same_seed_same_report() {
        let a = fuzz(SystemId::Alfao, 5, 3);
        let b = fuzz(SystemId::Alfao, 5, 3);
        assert_eq!(a.soundness, b.soundness);
        assert_eq!(a.failures, b.failures);
    }

    #[test]
    fn shrinking_candidates_are_simpler() {
        let g = crate::graph::parse_graph("q ((r))").unwrap();
        let c = smaller(&g);
        assert!(c.contains(&crate::graph::parse_graph("((r))").unwrap()));
        assert!(c.contains(&crate::graph::parse_graph("p ((r))").unwrap()));
    }
}
