//! Propositional formulas, the graph-to-formula translation and its
//! right inverse.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::graph::{is_atom_name, Graph, Item};
use crate::lexer::{Cursor, SyntaxError, Tok};

/// Negation is not a constructor: `~A` is stored as `A -> F`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Top,
    Bot,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bot)
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// Left-associated conjunction; `T` when empty.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    pub fn is_negation(&self) -> Option<&Formula> {
        match self {
            Formula::Imp(a, b) if **b == Formula::Bot => Some(a),
            _ => None,
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(x) => {
                out.insert(x.clone());
            }
            Formula::Top | Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Connective nesting depth; leaves have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn substitute(&self, sigma: &BTreeMap<String, Formula>) -> Formula {
        match self {
            Formula::Atom(x) => sigma.get(x).cloned().unwrap_or_else(|| self.clone()),
            Formula::Top | Formula::Bot => self.clone(),
            Formula::And(a, b) => Formula::and(a.substitute(sigma), b.substitute(sigma)),
            Formula::Or(a, b) => Formula::or(a.substitute(sigma), b.substitute(sigma)),
            Formula::Imp(a, b) => Formula::imp(a.substitute(sigma), b.substitute(sigma)),
        }
    }
}

/// Graph to formula. A multi-item sheet becomes a left-associated
/// conjunction over its items in canonical order.
pub fn translate(g: &Graph) -> Formula {
    Formula::conj(g.items().iter().map(translate_item))
}

pub fn translate_item(it: &Item) -> Formula {
    match it {
        Item::Atom(x) => Formula::Atom(x.clone()),
        Item::Cut(body) => Formula::not(translate(body)),
        Item::Scroll(a, b) => Formula::imp(translate(a), translate(b)),
        Item::Disj(a, b) => Formula::or(translate(a), translate(b)),
    }
}

/// Formula to graph; conjunctions flatten into juxtaposition.
pub fn embed(f: &Formula) -> Graph {
    let mut items = Vec::new();
    embed_into(f, &mut items);
    Graph::new(items)
}

fn embed_into(f: &Formula, out: &mut Vec<Item>) {
    match f {
        Formula::Atom(x) => out.push(Item::Atom(x.clone())),
        Formula::Top => {}
        Formula::Bot => out.push(Item::falsum()),
        Formula::And(a, b) => {
            embed_into(a, out);
            embed_into(b, out);
        }
        Formula::Or(a, b) => out.push(Item::disj(embed(a), embed(b))),
        Formula::Imp(a, b) => out.push(Item::Scroll(embed(a), embed(b))),
    }
}

// ---------------------------------------------------------------------------
// Notation: `~` binds tightest, then `&`, then `v`, then `->` (right assoc).
// ---------------------------------------------------------------------------

pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let mut cur = Cursor::new(text)?;
    let f = parse_imp(&mut cur)?;
    cur.finish()?;
    Ok(f)
}

pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

pub(crate) fn parse_imp(cur: &mut Cursor) -> Result<Formula, SyntaxError> {
    let lhs = parse_or(cur)?;
    if cur.eat(&Tok::Implies) {
        let rhs = parse_imp(cur)?;
        Ok(Formula::imp(lhs, rhs))
    } else {
        Ok(lhs)
    }
}

fn parse_or(cur: &mut Cursor) -> Result<Formula, SyntaxError> {
    let mut f = parse_and(cur)?;
    while cur.at_keyword("v") {
        cur.bump();
        f = Formula::or(f, parse_and(cur)?);
    }
    Ok(f)
}

fn parse_and(cur: &mut Cursor) -> Result<Formula, SyntaxError> {
    let mut f = parse_unary(cur)?;
    while cur.eat(&Tok::Amp) {
        f = Formula::and(f, parse_unary(cur)?);
    }
    Ok(f)
}

fn parse_unary(cur: &mut Cursor) -> Result<Formula, SyntaxError> {
    match cur.peek() {
        Some(Tok::Tilde) => {
            cur.bump();
            Ok(Formula::not(parse_unary(cur)?))
        }
        Some(Tok::LParen) => {
            let pos = cur.pos();
            cur.bump();
            let f = parse_imp(cur)?;
            if cur.eat(&Tok::RParen) {
                Ok(f)
            } else if cur.at_end() {
                Err(SyntaxError::Unbalanced {
                    pos,
                    open: '(',
                    close: ')',
                })
            } else {
                Err(cur.unexpected("`)`"))
            }
        }
        Some(Tok::Ident(w)) if w == "T" => {
            cur.bump();
            Ok(Formula::Top)
        }
        Some(Tok::Ident(w)) if w == "F" => {
            cur.bump();
            Ok(Formula::Bot)
        }
        Some(Tok::Ident(w)) if w != "v" && is_atom_name(w) => {
            let (w, _) = cur.ident("atom")?;
            Ok(Formula::Atom(w))
        }
        _ => Err(cur.unexpected("formula")),
    }
}

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Imp(_, b) if **b == Formula::Bot => 4,
        Formula::Imp(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        _ => 4,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, x: &Formula, min: u8) -> fmt::Result {
    if prec(x) < min {
        write!(f, "({x})")
    } else {
        write!(f, "{x}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(x) => f.write_str(x),
            Formula::Top => f.write_str("T"),
            Formula::Bot => f.write_str("F"),
            Formula::Imp(a, b) if **b == Formula::Bot => {
                f.write_str("~")?;
                write_at(f, a, 4)
            }
            Formula::And(a, b) => {
                write_at(f, a, 3)?;
                f.write_str(" & ")?;
                write_at(f, b, 4)
            }
            Formula::Or(a, b) => {
                write_at(f, a, 2)?;
                f.write_str(" v ")?;
                write_at(f, b, 3)
            }
            Formula::Imp(a, b) => {
                write_at(f, a, 2)?;
                f.write_str(" -> ")?;
                write_at(f, b, 1)
            }
        }
    }
}

impl FromStr for Formula {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn p() -> Formula {
        Formula::atom("p")
    }

    #[test]
    fn parse_precedence() {
        assert_eq!(f("~p"), Formula::imp(p(), Formula::Bot));
        assert_eq!(
            f("p & q -> r"),
            Formula::imp(Formula::and(p(), Formula::atom("q")), Formula::atom("r"))
        );
        assert_eq!(f("T"), Formula::Top);
        assert_eq!(
            f("p -> q -> r"),
            Formula::imp(p(), Formula::imp(Formula::atom("q"), Formula::atom("r")))
        );
        assert_eq!(
            f("p v q & r"),
            Formula::or(p(), Formula::and(Formula::atom("q"), Formula::atom("r")))
        );
        assert!(parse_formula("p ->").is_err());
        assert!(parse_formula("(p").is_err());
        assert!(parse_formula("v").is_err());
    }

    #[test]
    fn printer_uses_minimal_parentheses() {
        for s in [
            "~~p -> p",
            "(p -> q) -> p",
            "p & q -> r",
            "~(p & q) -> p -> ~q",
            "p v q v r",
            "p v (q v r)",
            "(p & q) & r",
            "p & (q & r)",
            "~(p -> q)",
            "T -> F",
        ] {
            let g = f(s);
            assert_eq!(f(&g.to_string()), g, "{s} printed as {g}");
        }
        assert_eq!(f("(p & q) & r").to_string(), "p & q & r");
        assert_eq!(f("p -> F").to_string(), "~p");
    }

    #[test]
    fn translation_cases() {
        assert_eq!(translate(&Graph::empty()), Formula::Top);
        assert_eq!(translate(&parse_graph("(p)").unwrap()), Formula::not(p()));
        assert_eq!(
            translate(&parse_graph("p {p => q}").unwrap()),
            Formula::and(p(), Formula::imp(p(), Formula::atom("q")))
        );
        assert_eq!(translate(&parse_graph("#").unwrap()), Formula::not(Formula::Top));
        assert_eq!(translate(&parse_graph("{q | p}").unwrap()).to_string(), "p v q");
        assert_eq!(translate(&parse_graph("{p => q}").unwrap()).to_string(), "p -> q");
    }

    #[test]
    fn embedding_cases() {
        assert_eq!(embed(&f("p -> q")), parse_graph("{p => q}").unwrap());
        assert_eq!(embed(&f("(p & q) & r")), parse_graph("p q r").unwrap());
        assert_eq!(embed(&f("p v q")).to_string(), "{p | q}");
        assert_eq!(embed(&f("F")), Graph::falsum());
        assert_eq!(embed(&f("T")), Graph::empty());
    }
}
