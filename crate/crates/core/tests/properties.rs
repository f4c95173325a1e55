use std::collections::BTreeMap;

use alfa::fuzz::gen;
use alfa::graph::{parse_graph, print_graph, Graph, Item, Subst};
use alfa::nd::{parse_nd, print_nd, EXAMPLES};
use alfa::semantics::{eval_kripke, ipc_valid, kripke_countermodel, KripkeModel};
use alfa::{embed, parse_formula, print_formula, translate, Formula};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn atom() -> impl Strategy<Value = String> {
    prop_oneof![Just("p".to_string()), Just("q".to_string()), Just("r".to_string())]
}

fn graph() -> impl Strategy<Value = Graph> {
    let leaf = atom().prop_map(Item::Atom);
    let item = leaf.prop_recursive(4, 24, 3, |inner| {
        let area = prop::collection::vec(inner, 0..3).prop_map(Graph::new);
        prop_oneof![
            area.clone().prop_map(Item::cut),
            (area.clone(), area.clone()).prop_map(|(a, b)| Item::scroll(a, b)),
            (area.clone(), area).prop_map(|(a, b)| Item::disj(a, b)),
        ]
    });
    prop::collection::vec(item, 0..4).prop_map(Graph::new)
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        4 => atom().prop_map(Formula::Atom),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bot),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)),
        ]
    })
}

fn subst() -> impl Strategy<Value = Subst> {
    prop::collection::btree_map(atom(), graph(), 0..3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn graph_print_parse(g in graph()) {
        prop_assert_eq!(parse_graph(&print_graph(&g)).unwrap(), g);
    }

    #[test]
    fn canonical_form_is_stable(g in graph()) {
        prop_assert!(g.is_canonical());
        prop_assert_eq!(g.canonicalize(), g.clone());
        prop_assert_eq!(g.canonicalize().canonicalize(), g.canonicalize());
    }

    #[test]
    fn formula_print_parse(f in formula()) {
        prop_assert_eq!(parse_formula(&print_formula(&f)).unwrap(), f);
    }

    #[test]
    fn embedding_is_a_right_inverse(f in formula()) {
        prop_assert!(ipc_valid(&Formula::iff(translate(&embed(&f)), f)));
    }

    // cuts come back as scrolls into falsum, so only equivalence holds
    #[test]
    fn translation_survives_embedding(g in graph()) {
        let f = translate(&g);
        prop_assert!(ipc_valid(&Formula::iff(translate(&embed(&f)), f)));
    }

    #[test]
    fn juxtaposition_is_conjunction(a in graph(), b in graph()) {
        let joined = translate(&a.union(&b));
        prop_assert!(ipc_valid(&Formula::iff(joined, Formula::and(translate(&a), translate(&b)))));
    }

    #[test]
    fn substitution_commutes_with_translation(g in graph(), sigma in subst()) {
        let fsigma: BTreeMap<String, Formula> = sigma.iter().map(|(k, v)| (k.clone(), translate(v))).collect();
        let lhs = translate(&g.substitute(&sigma));
        let rhs = translate(&g).substitute(&fsigma);
        prop_assert!(ipc_valid(&Formula::iff(lhs, rhs)));
    }
}

#[test]
fn nd_examples_print_and_parse() {
    for (name, text) in EXAMPLES {
        let p = parse_nd(text).unwrap();
        assert_eq!(parse_nd(&print_nd(&p)).unwrap(), p, "{name}");
    }
}

/// Forcing is upward closed: random models, random formulas.
#[test]
fn kripke_forcing_is_persistent() {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 200 {
        let f = gen::formula(&mut rng, &gen::ATOMS, 3);
        // a countermodel of some formula gives a random-ish model
        let probe = gen::formula(&mut rng, &gen::ATOMS, 3);
        let Some(m) = kripke_countermodel(&probe, 4) else { continue };
        let m: KripkeModel = m;
        let w = rng.gen_range(0..m.worlds());
        if eval_kripke(&m, w, &f).unwrap() {
            for v in 0..m.worlds() {
                if m.le(w, v) {
                    assert!(eval_kripke(&m, v, &f).unwrap(), "{f} at {w} but not {v}\n{m}");
                }
            }
        }
        checked += 1;
    }
}

#[test]
fn excluded_middle_has_a_two_world_countermodel() {
    for text in ["p v ~p", "~~p -> p"] {
        let f = parse_formula(text).unwrap();
        let m = kripke_countermodel(&f, 2).unwrap();
        assert_eq!(m.worlds(), 2);
        assert!(!eval_kripke(&m, 0, &f).unwrap());
        assert!(!m.forced_atoms(0).contains("p"));
    }
}
