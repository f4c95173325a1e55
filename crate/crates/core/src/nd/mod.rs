//! Natural deduction for intuitionistic propositional logic: proof trees
//! with labelled hypotheses, a checker, and a compiler into ALFA_I.

mod check;
mod compile;

pub use check::{check_nd, Judgment, NdError};
pub use compile::{check_compiled, compile, compile_with, CompileError, CompileOptions};

use std::fmt;
use std::str::FromStr;

use crate::formula::{parse_imp, Formula};
use crate::graph::is_atom_name;
use crate::lexer::{Cursor, SyntaxError, Tok};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NdRule {
    Hyp,
    AndI,
    AndEL,
    AndER,
    OrIL,
    OrIR,
    BotE,
    ImpE,
    ImpI,
    OrE,
}

impl NdRule {
    pub const ALL: [NdRule; 10] = [
        NdRule::Hyp,
        NdRule::AndI,
        NdRule::AndEL,
        NdRule::AndER,
        NdRule::OrIL,
        NdRule::OrIR,
        NdRule::BotE,
        NdRule::ImpE,
        NdRule::ImpI,
        NdRule::OrE,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NdRule::Hyp => "HYP",
            NdRule::AndI => "AND_I",
            NdRule::AndEL => "AND_E_L",
            NdRule::AndER => "AND_E_R",
            NdRule::OrIL => "OR_I_L",
            NdRule::OrIR => "OR_I_R",
            NdRule::BotE => "BOT_E",
            NdRule::ImpE => "IMP_E",
            NdRule::ImpI => "IMP_I",
            NdRule::OrE => "OR_E",
        }
    }

    fn arity(self) -> usize {
        match self {
            NdRule::Hyp => 0,
            NdRule::AndI | NdRule::ImpE => 2,
            NdRule::OrE => 3,
            _ => 1,
        }
    }

    /// Rules that carry a label: HYP names itself, IMP_I and OR_E discharge.
    fn labelled(self) -> bool {
        matches!(self, NdRule::Hyp | NdRule::ImpI | NdRule::OrE)
    }
}

impl fmt::Display for NdRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NdRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NdRule::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown natural deduction rule `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NdProof {
    pub rule: NdRule,
    pub conclusion: Formula,
    pub label: Option<String>,
    pub children: Vec<NdProof>,
}

impl NdProof {
    pub fn new(rule: NdRule, conclusion: Formula, label: Option<&str>, children: Vec<NdProof>) -> NdProof {
        NdProof {
            rule,
            conclusion,
            label: label.map(str::to_string),
            children,
        }
    }

    pub fn hyp(f: Formula, label: &str) -> NdProof {
        NdProof::new(NdRule::Hyp, f, Some(label), Vec::new())
    }

    /// Every rule tag used in the tree.
    pub fn rules(&self) -> Vec<NdRule> {
        let mut out = vec![self.rule];
        for c in &self.children {
            out.extend(c.rules());
        }
        out
    }
}

pub fn parse_nd(text: &str) -> Result<NdProof, SyntaxError> {
    let mut cur = Cursor::new(text)?;
    let p = read_node(&mut cur)?;
    cur.finish()?;
    Ok(p)
}

fn read_node(cur: &mut Cursor) -> Result<NdProof, SyntaxError> {
    let (tag, pos) = cur.ident("rule tag")?;
    let rule: NdRule = tag.parse().map_err(|msg| SyntaxError::Invalid { pos, msg })?;
    let open = cur.expect(&Tok::LParen)?;
    let conclusion = parse_imp(cur)?;
    if !cur.eat(&Tok::RParen) {
        return Err(if cur.at_end() {
            SyntaxError::Unbalanced { pos: open, open: '(', close: ')' }
        } else {
            cur.unexpected("`)`")
        });
    }
    let mut label = None;
    if cur.eat(&Tok::LBracket) {
        let (l, lpos) = cur.ident("label")?;
        if !is_atom_name(&l) {
            return Err(SyntaxError::Invalid { pos: lpos, msg: format!("`{l}` is not a label") });
        }
        cur.expect(&Tok::RBracket)?;
        label = Some(l);
    }
    let open = cur.expect(&Tok::LBrace)?;
    let mut children = Vec::new();
    while matches!(cur.peek(), Some(Tok::Ident(_))) {
        children.push(read_node(cur)?);
    }
    if !cur.eat(&Tok::RBrace) {
        return Err(if cur.at_end() {
            SyntaxError::Unbalanced { pos: open, open: '{', close: '}' }
        } else {
            cur.unexpected("rule tag or `}`")
        });
    }
    Ok(NdProof { rule, conclusion, label, children })
}

pub fn print_nd(p: &NdProof) -> String {
    let mut out = String::new();
    write_node(&mut out, p, 0);
    out
}

fn write_node(out: &mut String, p: &NdProof, depth: usize) {
    out.push_str(&"  ".repeat(depth));
    out.push_str(&format!("{}({})", p.rule, p.conclusion));
    if let Some(l) = &p.label {
        out.push_str(&format!("[{l}]"));
    }
    if p.children.is_empty() {
        out.push_str("{}\n");
        return;
    }
    out.push_str("{\n");
    for c in &p.children {
        write_node(out, c, depth + 1);
    }
    out.push_str(&"  ".repeat(depth));
    out.push_str("}\n");
}

impl fmt::Display for NdProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_nd(self))
    }
}

/// Bundled example proofs, one per file.
pub const EXAMPLES: [(&str, &str); 12] = [
    ("identity.ndp", include_str!("../../corpus/nd/identity.ndp")),
    ("modus_ponens.ndp", include_str!("../../corpus/nd/modus_ponens.ndp")),
    ("or_comm.ndp", include_str!("../../corpus/nd/or_comm.ndp")),
    ("ex_falso.ndp", include_str!("../../corpus/nd/ex_falso.ndp")),
    ("and_comm.ndp", include_str!("../../corpus/nd/and_comm.ndp")),
    ("curry.ndp", include_str!("../../corpus/nd/curry.ndp")),
    ("contraposition.ndp", include_str!("../../corpus/nd/contraposition.ndp")),
    ("dn_intro.ndp", include_str!("../../corpus/nd/dn_intro.ndp")),
    ("distribute.ndp", include_str!("../../corpus/nd/distribute.ndp")),
    ("or_false.ndp", include_str!("../../corpus/nd/or_false.ndp")),
    ("weaken.ndp", include_str!("../../corpus/nd/weaken.ndp")),
    ("imp_trans.ndp", include_str!("../../corpus/nd/imp_trans.ndp")),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let p = parse_nd("IMP_I(p -> p)[x]{ HYP(p)[x]{} }").unwrap();
        assert_eq!(p.rule, NdRule::ImpI);
        assert_eq!(p.children[0], NdProof::hyp(Formula::atom("p"), "x"));
        assert_eq!(parse_nd(&print_nd(&p)).unwrap(), p);
        assert!(parse_nd("IMP_Q(p){}").is_err());
        assert!(parse_nd("HYP(p)[x]{").is_err());
        assert!(parse_nd("HYP((p)[x]{}").is_err());
    }

    #[test]
    fn examples_round_trip() {
        for (name, text) in EXAMPLES {
            let p = parse_nd(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(parse_nd(&print_nd(&p)).unwrap(), p, "{name}");
        }
    }
}
