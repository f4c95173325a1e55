use crate::formula::Formula;

/// Evaluates `f` under `val`, where `val` answers for every atom.
pub fn eval_classical(f: &Formula, val: &dyn Fn(&str) -> bool) -> bool {
    match f {
        Formula::Atom(x) => val(x),
        Formula::Top => true,
        Formula::Bot => false,
        Formula::And(a, b) => eval_classical(a, val) && eval_classical(b, val),
        Formula::Or(a, b) => eval_classical(a, val) || eval_classical(b, val),
        Formula::Imp(a, b) => !eval_classical(a, val) || eval_classical(b, val),
    }
}

/// Truth-table validity over the atoms of `f`.
pub fn classical_valid(f: &Formula) -> bool {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    assert!(atoms.len() < 32, "truth table over {} atoms", atoms.len());
    (0u64..1 << atoms.len()).all(|row| {
        eval_classical(f, &|x| {
            let i = atoms.binary_search_by(|a| a.as_str().cmp(x)).expect("atom collected");
            row >> i & 1 == 1
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn valid(s: &str) -> bool {
        classical_valid(&parse_formula(s).unwrap())
    }

    #[test]
    fn truth_tables() {
        assert!(valid("~~p -> p"));
        assert!(!valid("p -> q"));
        assert!(valid("p & ~(p & ~q) -> q"));
        assert!(valid("((p -> q) -> p) -> p"));
        assert!(valid("T"));
        assert!(!valid("F"));
    }
}
