use alfa::corpus;
use alfa::derivation::{check_theorem, load_db, parse_script, save_db, LemmaDb, Reason};
use alfa::formula::parse_formula;
use alfa::graph::parse_graph;
use alfa::rules::{registry, RuleName, SystemId};
use alfa::search::{enumerate_consequences, prove, SearchBudget};
use alfa::semantics::{ipc_valid, sequent_sound, Logic};

#[test]
fn double_cut_elimination_is_not_an_intuitionistic_rule() {
    let th = parse_script("system ALFA_IO theorem t from: ((p)) step R6 => p qed")
        .unwrap()
        .theorems
        .remove(0);
    let err = check_theorem(&th, &LemmaDb::new()).unwrap_err();
    assert!(matches!(*err.reason, Reason::RuleNotInSystem { rule: RuleName::R6, .. }));
    assert_eq!(err.path, vec![1]);
}

#[test]
fn corpus_lemmas_are_sound_in_their_logic() {
    for e in corpus::db().entries() {
        let logic = e.system().logic();
        assert!(e.theorem().semantically_sound(logic), "{}", e.name());
        if e.premises().is_empty() {
            assert!(sequent_sound(logic, e.statement()), "{}", e.name());
        }
    }
}

#[test]
fn lemma_database_survives_a_file() {
    let db = corpus::db();
    let path = std::env::temp_dir().join(format!("alfa-db-{}.gpf", std::process::id()));
    save_db(db, &path).unwrap();
    let back = load_db(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(&back, db);
}

#[test]
fn classical_lemmas_stay_out_of_intuitionistic_proofs() {
    let text = "system ALFA_IO theorem t vars a from: ((a)) lemma r6 [a := ; b := a] => a qed";
    let th = parse_script(text).unwrap().theorems.remove(0);
    let err = check_theorem(&th, corpus::db()).unwrap_err();
    assert!(matches!(*err.reason, Reason::LemmaNotInSystem { .. }), "{err}");
}

#[test]
fn searched_derivations_are_checked() {
    let from = parse_graph("{p | q}").unwrap();
    let to = parse_graph("((p) (q))").unwrap();
    let d = prove(SystemId::AlfaIo, &LemmaDb::new(), &from, &to, &SearchBudget::steps(3)).unwrap();
    let th = alfa::derivation::Theorem {
        name: "found".into(),
        vars: vec![],
        premises: vec![],
        proof: d,
    };
    assert_eq!(check_theorem(&th, &LemmaDb::new()).unwrap().target, to);
}

#[test]
fn consequences_grow_with_the_budget() {
    let from = parse_graph("p (p (q))").unwrap();
    let mut prev = None;
    for steps in 0..3 {
        let set = enumerate_consequences(SystemId::Alfao, &LemmaDb::new(), &from, &SearchBudget::steps(steps));
        if let Some(prev) = prev {
            assert!(set.is_superset(&prev));
        }
        prev = Some(set);
    }
    let small = SearchBudget { max_graph_size: 6, ..SearchBudget::steps(2) };
    let big = SearchBudget { max_graph_size: 9, ..SearchBudget::steps(2) };
    let a = enumerate_consequences(SystemId::AlfaIo, corpus::db(), &from, &small);
    let b = enumerate_consequences(SystemId::AlfaIo, corpus::db(), &from, &big);
    assert!(b.is_superset(&a));
}

#[test]
fn stock_systems_differ_where_expected() {
    assert!(registry(SystemId::Alfao).contains(RuleName::R6));
    assert!(!registry(SystemId::AlfaIo).contains(RuleName::R6));
    assert!(registry(SystemId::AlfaIoClassic).includes(&registry(SystemId::AlfaIo)));
    assert!(ipc_valid(&parse_formula("~(p & q) -> p -> ~q").unwrap()));
    assert_eq!(SystemId::AlfaI.logic(), Logic::Ipc);
}
