//! Reading and writing `.gpf` proof scripts.

use std::fmt::Write as _;

use super::{Derivation, Premise, Script, Step, Subproof, Theorem};
use crate::graph::{is_atom_name, read_graph, Graph, Sequent, RESERVED};
use crate::lexer::{Cursor, Pos, SyntaxError, Tok};
use crate::rules::{RuleName, SystemId};

pub fn parse_script(text: &str) -> Result<Script, SyntaxError> {
    let mut cur = Cursor::new(text)?;
    let mut theorems = Vec::new();
    while !cur.at_end() {
        cur.keyword("system")?;
        let (id, pos) = cur.ident("system name")?;
        let system: SystemId = id.parse().map_err(|e: crate::rules::UnknownSystem| SyntaxError::Invalid {
            pos,
            msg: e.to_string(),
        })?;
        while cur.at_keyword("theorem") {
            theorems.push(parse_theorem(&mut cur, system)?);
        }
        if !cur.at_end() && !cur.at_keyword("system") {
            return Err(cur.unexpected("`theorem` or `system`"));
        }
    }
    Ok(Script { theorems })
}

fn name(cur: &mut Cursor, what: &str) -> Result<String, SyntaxError> {
    let (n, pos) = cur.ident(what)?;
    if !is_atom_name(&n) || RESERVED.contains(&n.as_str()) {
        return Err(SyntaxError::Invalid {
            pos,
            msg: format!("`{n}` is not a valid {what}"),
        });
    }
    Ok(n)
}

fn parse_theorem(cur: &mut Cursor, system: SystemId) -> Result<Theorem, SyntaxError> {
    cur.keyword("theorem")?;
    let name = name(cur, "theorem name")?;
    let mut vars = Vec::new();
    if cur.at_keyword("vars") {
        cur.bump();
        while matches!(cur.peek(), Some(Tok::Ident(w)) if !RESERVED.contains(&w.as_str())) {
            vars.push(self::name(cur, "variable")?);
        }
        if vars.is_empty() {
            return Err(cur.unexpected("variable"));
        }
    }
    let mut premises = Vec::new();
    while cur.at_keyword("premise") {
        cur.bump();
        let pname = self::name(cur, "premise name")?;
        cur.expect(&Tok::Colon)?;
        let sequent = parse_sequent(cur)?;
        premises.push(Premise { name: pname, sequent });
    }
    cur.keyword("from")?;
    cur.expect(&Tok::Colon)?;
    let initial = read_graph(cur, true)?;
    let steps = parse_items(cur)?;
    cur.keyword("qed")?;
    Ok(Theorem {
        name,
        vars,
        premises,
        proof: Derivation {
            system,
            initial,
            steps,
        },
    })
}

fn parse_sequent(cur: &mut Cursor) -> Result<Sequent, SyntaxError> {
    let source = read_graph(cur, true)?;
    cur.expect(&Tok::Turnstile)?;
    let target = read_graph(cur, true)?;
    Ok(Sequent::new(source, target))
}

fn parse_items(cur: &mut Cursor) -> Result<Vec<Step>, SyntaxError> {
    let mut steps = Vec::new();
    loop {
        if cur.at_keyword("step") {
            steps.push(parse_step(cur)?);
        } else if cur.at_keyword("have") {
            cur.bump();
            let name = name(cur, "have name")?;
            cur.expect(&Tok::Colon)?;
            let sequent = parse_sequent(cur)?;
            let open = cur.expect(&Tok::LBrace)?;
            let body = parse_items(cur)?;
            close_block(cur, open)?;
            steps.push(Step::Have(Subproof {
                name,
                sequent,
                steps: body,
            }));
        } else if cur.at_keyword("lemma") {
            steps.push(parse_lemma(cur)?);
        } else {
            return Ok(steps);
        }
    }
}

fn close_block(cur: &mut Cursor, open: Pos) -> Result<(), SyntaxError> {
    if cur.eat(&Tok::RBrace) {
        Ok(())
    } else if cur.at_end() {
        Err(SyntaxError::Unbalanced {
            pos: open,
            open: '{',
            close: '}',
        })
    } else {
        Err(cur.unexpected("`step`, `have`, `lemma` or `}`"))
    }
}

#[derive(Default)]
struct Opts {
    witness: Option<Graph>,
    split: Option<Graph>,
    ids: Option<Vec<String>>,
}

fn parse_opts(cur: &mut Cursor) -> Result<Opts, SyntaxError> {
    let mut opts = Opts::default();
    loop {
        let pos = cur.pos();
        let dup = |what: &str| SyntaxError::Invalid {
            pos,
            msg: format!("`{what}` given twice"),
        };
        if cur.at_keyword("witness") {
            cur.bump();
            if opts.witness.replace(read_graph(cur, true)?).is_some() {
                return Err(dup("witness"));
            }
        } else if cur.at_keyword("split") {
            cur.bump();
            if opts.split.replace(read_graph(cur, true)?).is_some() {
                return Err(dup("split"));
            }
        } else if cur.peek() == Some(&Tok::LBracket) {
            if opts.ids.replace(parse_ids(cur)?).is_some() {
                return Err(dup("[...]"));
            }
        } else {
            return Ok(opts);
        }
    }
}

fn parse_ids(cur: &mut Cursor) -> Result<Vec<String>, SyntaxError> {
    cur.expect(&Tok::LBracket)?;
    let mut ids = Vec::new();
    if !cur.eat(&Tok::RBracket) {
        loop {
            ids.push(name(cur, "sequent name")?);
            if cur.eat(&Tok::RBracket) {
                break;
            }
            cur.expect(&Tok::Comma)?;
        }
    }
    Ok(ids)
}

fn parse_step(cur: &mut Cursor) -> Result<Step, SyntaxError> {
    cur.keyword("step")?;
    let (head, pos) = cur.ident("rule or sequent name")?;
    let opts = parse_opts(cur)?;
    cur.expect(&Tok::Arrow)?;
    let result = read_graph(cur, true)?;
    let invalid = |msg: String| SyntaxError::Invalid { pos, msg };
    match head.parse::<RuleName>() {
        Ok(rule) if rule.degree() == 1 => {
            if opts.split.is_some() || opts.ids.is_some() {
                return Err(invalid(format!("{rule} is first-degree: it takes no split or premises")));
            }
            Ok(Step::FirstDegree {
                rule,
                witness: opts.witness,
                result,
            })
        }
        Ok(rule) => {
            if opts.witness.is_some() {
                return Err(invalid(format!("{rule} takes no witness")));
            }
            Ok(Step::SecondDegree {
                rule,
                premises: opts.ids.unwrap_or_default(),
                split: opts.split,
                result,
            })
        }
        Err(_) if is_atom_name(&head) && !RESERVED.contains(&head.as_str()) => {
            if opts.witness.is_some() || opts.split.is_some() || opts.ids.is_some() {
                return Err(invalid(format!("citing `{head}` takes no options")));
            }
            Ok(Step::Cite { name: head, result })
        }
        Err(e) => Err(invalid(e.to_string())),
    }
}

fn parse_lemma(cur: &mut Cursor) -> Result<Step, SyntaxError> {
    cur.keyword("lemma")?;
    let lname = name(cur, "lemma name")?;
    let mut subst = Vec::new();
    let mut premises = Vec::new();
    if cur.peek() == Some(&Tok::LBracket)
        && matches!(cur.peek_at(1), Some(Tok::Ident(_)))
        && cur.peek_at(2) == Some(&Tok::Assign)
    {
        let open = cur.expect(&Tok::LBracket)?;
        loop {
            let (var, pos) = cur.ident("variable")?;
            if !is_atom_name(&var) {
                return Err(SyntaxError::Invalid {
                    pos,
                    msg: format!("`{var}` is not a variable"),
                });
            }
            if subst.iter().any(|(v, _)| *v == var) {
                return Err(SyntaxError::Invalid {
                    pos,
                    msg: format!("`{var}` substituted twice"),
                });
            }
            cur.expect(&Tok::Assign)?;
            subst.push((var, read_graph(cur, true)?));
            if cur.eat(&Tok::RBracket) {
                break;
            }
            if cur.at_end() {
                return Err(SyntaxError::Unbalanced {
                    pos: open,
                    open: '[',
                    close: ']',
                });
            }
            cur.expect(&Tok::Semi)?;
        }
    }
    if cur.peek() == Some(&Tok::LBracket) {
        premises = parse_ids(cur)?;
    }
    cur.expect(&Tok::Arrow)?;
    let result = read_graph(cur, true)?;
    Ok(Step::Lemma {
        name: lname,
        subst,
        premises,
        result,
    })
}

// ---------------------------------------------------------------------------

pub fn print_script(s: &Script) -> String {
    let mut out = String::new();
    let mut system = None;
    for th in &s.theorems {
        if system != Some(th.proof.system) {
            if system.is_some() {
                out.push('\n');
            }
            let _ = writeln!(out, "system {}", th.proof.system);
            system = Some(th.proof.system);
        }
        out.push('\n');
        out.push_str(&print_theorem(th));
    }
    out
}

/// One `theorem ... qed` block, without the `system` header.
pub fn print_theorem(th: &Theorem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "theorem {}", th.name);
    if !th.vars.is_empty() {
        let _ = writeln!(out, "  vars {}", th.vars.join(" "));
    }
    for p in &th.premises {
        let _ = writeln!(out, "  premise {}: {}", p.name, sequent(&p.sequent));
    }
    let _ = writeln!(out, "  {}", spaced("from:", &th.proof.initial));
    print_steps(&mut out, &th.proof.steps, 1);
    out.push_str("qed\n");
    out
}

fn spaced(head: &str, g: &Graph) -> String {
    if g.is_empty() {
        head.to_string()
    } else {
        format!("{head} {g}")
    }
}

fn sequent(s: &Sequent) -> String {
    match (s.source.is_empty(), s.target.is_empty()) {
        (true, true) => "|-".to_string(),
        (true, false) => format!("|- {}", s.target),
        (false, true) => format!("{} |-", s.source),
        (false, false) => format!("{} |- {}", s.source, s.target),
    }
}

fn print_steps(out: &mut String, steps: &[Step], depth: usize) {
    let pad = "  ".repeat(depth);
    for step in steps {
        match step {
            Step::FirstDegree {
                rule,
                witness,
                result,
            } => {
                let mut head = format!("step {rule}");
                if let Some(w) = witness {
                    head = spaced(&format!("{head} witness"), w);
                }
                let _ = writeln!(out, "{pad}{}", spaced(&format!("{head} =>"), result));
            }
            Step::SecondDegree {
                rule,
                premises,
                split,
                result,
            } => {
                let mut head = format!("step {rule} [{}]", premises.join(", "));
                if let Some(s) = split {
                    head = spaced(&format!("{head} split"), s);
                }
                let _ = writeln!(out, "{pad}{}", spaced(&format!("{head} =>"), result));
            }
            Step::Cite { name, result } => {
                let _ = writeln!(out, "{pad}{}", spaced(&format!("step {name} =>"), result));
            }
            Step::Lemma {
                name,
                subst,
                premises,
                result,
            } => {
                let mut head = format!("lemma {name}");
                if !subst.is_empty() {
                    let parts: Vec<String> = subst
                        .iter()
                        .map(|(v, g)| spaced(&format!("{v} :="), g))
                        .collect();
                    let _ = write!(head, " [{}]", parts.join("; "));
                }
                if !premises.is_empty() {
                    let _ = write!(head, " [{}]", premises.join(", "));
                }
                let _ = writeln!(out, "{pad}{}", spaced(&format!("{head} =>"), result));
            }
            Step::Have(sub) => {
                let _ = writeln!(out, "{pad}have {}: {} {{", sub.name, sequent(&sub.sequent));
                print_steps(out, &sub.steps, depth + 1);
                let _ = writeln!(out, "{pad}}}");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn g(s: &str) -> Graph {
        parse_graph(s).unwrap()
    }

    #[test]
    fn minimal_script() {
        let s = parse_script("system ALFAO\ntheorem t\nfrom:\nqed\n").unwrap();
        assert_eq!(s.theorems.len(), 1);
        assert!(s.theorems[0].proof.steps.is_empty());
        assert_eq!(s.theorems[0].proof.initial, Graph::empty());
        assert_eq!(parse_script("").unwrap(), Script::default());
        assert_eq!(parse_script("% nothing here\n").unwrap(), Script::default());
    }

    #[test]
    fn have_block_and_deduction_step() {
        let text = "system ALFA_I
            theorem t
            from: p
            have h1: p q |- r { }
            step R8I[h1] split p => {q => r}
            qed";
        let s = parse_script(text).unwrap();
        let steps = &s.theorems[0].proof.steps;
        assert!(matches!(&steps[0], Step::Have(sub) if sub.name == "h1" && sub.steps.is_empty()));
        assert_eq!(
            steps[1],
            Step::SecondDegree {
                rule: RuleName::R8i,
                premises: vec!["h1".into()],
                split: Some(g("p")),
                result: g("{q => r}"),
            }
        );
    }

    #[test]
    fn lemma_steps_and_cites() {
        let text = "system ALFAO
            theorem t vars a b premise hp: a |- b
            from: a
            step hp => b
            lemma mp [a := ; b := (c)] [hp] => (c)
            lemma other => (c)
            step E_BOT witness =>
            qed";
        let s = parse_script(text).unwrap();
        let th = &s.theorems[0];
        assert_eq!(th.vars, vec!["a", "b"]);
        assert_eq!(th.premises[0].sequent, Sequent::new(g("a"), g("b")));
        assert_eq!(th.proof.steps[0], Step::Cite { name: "hp".into(), result: g("b") });
        assert_eq!(
            th.proof.steps[1],
            Step::Lemma {
                name: "mp".into(),
                subst: vec![("a".into(), Graph::empty()), ("b".into(), g("(c)"))],
                premises: vec!["hp".into()],
                result: g("(c)"),
            }
        );
        assert!(matches!(&th.proof.steps[3], Step::FirstDegree { witness: Some(w), .. } if w.is_empty()));
        assert_eq!(parse_script(&print_script(&s)).unwrap(), s);
    }

    #[test]
    fn scroll_targets_are_not_blocks() {
        let s = parse_script("system ALFA_IO theorem t from: a have h: a |- {=> a} { } qed").unwrap();
        assert!(matches!(&s.theorems[0].proof.steps[0], Step::Have(sub) if sub.sequent.target == g("{=> a}")));
    }

    #[test]
    fn syntax_errors() {
        assert!(parse_script("system ALFAX theorem t from: qed").is_err());
        assert!(parse_script("system ALFAO theorem t from: step R9 => p qed").is_err());
        assert!(parse_script("system ALFAO theorem t from: step R2 split p => p qed").is_err());
        assert!(parse_script("system ALFAO theorem t from: have h: p |- p { step R2 => p qed").is_err());
        assert!(parse_script("system ALFAO theorem t from: p").is_err());
        let e = parse_script("system ALFAO\ntheorem t\nfrom: p\nstep R2 => Q\nqed").unwrap_err();
        assert_eq!(e.pos().line, 4);
    }

    #[test]
    fn multiple_sections_round_trip() {
        let text = "system ALFAO theorem a from: p step R2 => qed
                    system ALFA_I theorem b from: qed theorem c from: # step E_BOT witness p => p qed";
        let s = parse_script(text).unwrap();
        assert_eq!(s.theorems.len(), 3);
        assert_eq!(s.theorems[2].proof.system, SystemId::AlfaI);
        assert_eq!(parse_script(&print_script(&s)).unwrap(), s);
    }
}
