//! Well-done graphs: a sheet is a canonically ordered multiset of items.
//!
//! Juxtaposition on a sheet is commutative and associative with the blank
//! sheet as unit, so a [`Graph`] keeps its items sorted by the derived
//! total order on [`Item`]. Scrolls are ordered pairs (antecedent,
//! consequent); disjunction curves hold an unordered pair, stored sorted.
//! Falsum is not a constructor: it is the empty cut.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::lexer::{Cursor, SyntaxError, Tok};

/// One drawing placed on a sheet.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Item {
    Atom(String),
    Cut(Graph),
    /// Solid curve holding an antecedent plus a dotted curve holding the consequent.
    Scroll(Graph, Graph),
    /// Solid curve holding two semi-dotted curves. Canonical when the pair is sorted.
    Disj(Graph, Graph),
}

/// A sheet of assertion: a finite multiset of items, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    items: Vec<Item>,
}

/// Atom-to-graph substitution. Atoms outside the domain are left alone.
pub type Subst = BTreeMap<String, Graph>;

/// Size (items at every depth) and nesting depth of a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measure {
    pub size: usize,
    pub depth: usize,
}

impl Item {
    pub fn atom(name: impl Into<String>) -> Item {
        Item::Atom(name.into())
    }

    pub fn cut(body: Graph) -> Item {
        Item::Cut(body)
    }

    pub fn scroll(antecedent: Graph, consequent: Graph) -> Item {
        Item::Scroll(antecedent, consequent)
    }

    pub fn disj(a: Graph, b: Graph) -> Item {
        if a <= b {
            Item::Disj(a, b)
        } else {
            Item::Disj(b, a)
        }
    }

    pub fn falsum() -> Item {
        Item::Cut(Graph::empty())
    }

    pub fn is_falsum(&self) -> bool {
        matches!(self, Item::Cut(g) if g.is_empty())
    }

    fn canonicalize(&self) -> Item {
        match self {
            Item::Atom(_) => self.clone(),
            Item::Cut(g) => Item::Cut(g.canonicalize()),
            Item::Scroll(a, b) => Item::Scroll(a.canonicalize(), b.canonicalize()),
            Item::Disj(a, b) => Item::disj(a.canonicalize(), b.canonicalize()),
        }
    }

    fn is_canonical(&self) -> bool {
        match self {
            Item::Atom(_) => true,
            Item::Cut(g) => g.is_canonical(),
            Item::Scroll(a, b) => a.is_canonical() && b.is_canonical(),
            Item::Disj(a, b) => a <= b && a.is_canonical() && b.is_canonical(),
        }
    }

    fn measure(&self) -> Measure {
        match self {
            Item::Atom(_) => Measure { size: 1, depth: 1 },
            Item::Cut(g) => {
                let m = g.measure();
                Measure {
                    size: 1 + m.size,
                    depth: 1 + m.depth,
                }
            }
            Item::Scroll(a, b) | Item::Disj(a, b) => {
                let (ma, mb) = (a.measure(), b.measure());
                Measure {
                    size: 1 + ma.size + mb.size,
                    depth: 1 + ma.depth.max(mb.depth),
                }
            }
        }
    }

    fn substitute_into(&self, sigma: &Subst, out: &mut Vec<Item>) {
        match self {
            Item::Atom(x) => match sigma.get(x) {
                Some(g) => out.extend(g.items.iter().cloned()),
                None => out.push(self.clone()),
            },
            Item::Cut(g) => out.push(Item::Cut(g.substitute(sigma))),
            Item::Scroll(a, b) => out.push(Item::Scroll(a.substitute(sigma), b.substitute(sigma))),
            Item::Disj(a, b) => out.push(Item::disj(a.substitute(sigma), b.substitute(sigma))),
        }
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Item::Atom(x) => {
                out.insert(x.clone());
            }
            Item::Cut(g) => g.collect_atoms(out),
            Item::Scroll(a, b) | Item::Disj(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }
}

impl Graph {
    /// The blank sheet.
    pub fn empty() -> Graph {
        Graph { items: Vec::new() }
    }

    /// Builds a sheet from items in any order. Nested graphs are taken as is;
    /// use [`Graph::canonicalize`] when the items may hold unsorted disjunctions.
    pub fn new(mut items: Vec<Item>) -> Graph {
        items.sort();
        Graph { items }
    }

    pub fn atom(name: impl Into<String>) -> Graph {
        Graph::single(Item::atom(name))
    }

    pub fn single(item: Item) -> Graph {
        Graph { items: vec![item] }
    }

    /// The sheet holding only an empty cut.
    pub fn falsum() -> Graph {
        Graph::single(Item::falsum())
    }

    pub fn cut(body: Graph) -> Graph {
        Graph::single(Item::Cut(body))
    }

    pub fn scroll(antecedent: Graph, consequent: Graph) -> Graph {
        Graph::single(Item::Scroll(antecedent, consequent))
    }

    pub fn disj(a: Graph, b: Graph) -> Graph {
        Graph::single(Item::disj(a, b))
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn into_items(self) -> Vec<Item> {
        self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn is_falsum(&self) -> bool {
        self.items.len() == 1 && self.items[0].is_falsum()
    }

    /// The single item of a one-item sheet.
    pub fn as_single(&self) -> Option<&Item> {
        match self.items.as_slice() {
            [it] => Some(it),
            _ => None,
        }
    }

    /// Multiset union.
    pub fn union(&self, other: &Graph) -> Graph {
        let mut items = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.items.len() && j < other.items.len() {
            if self.items[i] <= other.items[j] {
                items.push(self.items[i].clone());
                i += 1;
            } else {
                items.push(other.items[j].clone());
                j += 1;
            }
        }
        items.extend_from_slice(&self.items[i..]);
        items.extend_from_slice(&other.items[j..]);
        Graph { items }
    }

    pub fn with_item(&self, item: Item) -> Graph {
        let mut items = self.items.clone();
        let at = items.partition_point(|x| *x <= item);
        items.insert(at, item);
        Graph { items }
    }

    /// The sheet without the item at `index`.
    pub fn without(&self, index: usize) -> Graph {
        let mut items = self.items.clone();
        items.remove(index);
        Graph { items }
    }

    /// `self - other` as multisets, or `None` when `other` is not contained in `self`.
    pub fn difference(&self, other: &Graph) -> Option<Graph> {
        let mut rest = Vec::with_capacity(self.len());
        let mut j = 0;
        for it in &self.items {
            if j < other.items.len() && *it == other.items[j] {
                j += 1;
            } else {
                if j < other.items.len() && other.items[j] < *it {
                    return None;
                }
                rest.push(it.clone());
            }
        }
        (j == other.items.len()).then_some(Graph { items: rest })
    }

    pub fn contains(&self, other: &Graph) -> bool {
        self.difference(other).is_some()
    }

    /// Multiset intersection.
    pub fn intersection(&self, other: &Graph) -> Graph {
        let mut items = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.items.len() && j < other.items.len() {
            match self.items[i].cmp(&other.items[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    items.push(self.items[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        Graph { items }
    }

    /// The unique canonical representative: every disjunction pair sorted,
    /// every sheet sorted.
    pub fn canonicalize(&self) -> Graph {
        Graph::new(self.items.iter().map(Item::canonicalize).collect())
    }

    pub fn is_canonical(&self) -> bool {
        self.items.windows(2).all(|w| w[0] <= w[1]) && self.items.iter().all(Item::is_canonical)
    }

    pub fn measure(&self) -> Measure {
        self.items.iter().map(Item::measure).fold(
            Measure { size: 0, depth: 0 },
            |acc, m| Measure {
                size: acc.size + m.size,
                depth: acc.depth.max(m.depth),
            },
        )
    }

    /// Replaces every atom in the domain of `sigma` by the items of its image,
    /// at every depth. The result is canonical.
    pub fn substitute(&self, sigma: &Subst) -> Graph {
        if sigma.is_empty() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.items.len());
        for it in &self.items {
            it.substitute_into(sigma, &mut out);
        }
        Graph::new(out)
    }

    /// Every ordered pair `(sub, rest)` with `sub ⊎ rest = self`, counting
    /// multiplicities once per distinct sub-multiset.
    pub fn splits(&self) -> Vec<(Graph, Graph)> {
        let groups = self.groups();
        let mut out = Vec::new();
        let mut counts = vec![0usize; groups.len()];
        loop {
            let mut sub = Vec::new();
            let mut rest = Vec::new();
            for ((item, n), &k) in groups.iter().zip(&counts) {
                sub.extend(std::iter::repeat_n((*item).clone(), k));
                rest.extend(std::iter::repeat_n((*item).clone(), n - k));
            }
            out.push((Graph { items: sub }, Graph { items: rest }));
            // odometer increment
            let mut g = 0;
            loop {
                if g == groups.len() {
                    return out;
                }
                if counts[g] < groups[g].1 {
                    counts[g] += 1;
                    break;
                }
                counts[g] = 0;
                g += 1;
            }
        }
    }

    /// All sub-multisets of the sheet.
    pub fn sub_multisets(&self) -> Vec<Graph> {
        self.splits().into_iter().map(|(s, _)| s).collect()
    }

    /// Number of distinct sub-multisets, without enumerating them.
    pub fn split_count(&self) -> usize {
        self.groups()
            .iter()
            .fold(1usize, |acc, (_, n)| acc.saturating_mul(n + 1))
    }

    fn groups(&self) -> Vec<(&Item, usize)> {
        let mut groups: Vec<(&Item, usize)> = Vec::new();
        for it in &self.items {
            match groups.last_mut() {
                Some((last, n)) if *last == it => *n += 1,
                _ => groups.push((it, 1)),
            }
        }
        groups
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        for it in &self.items {
            it.collect_atoms(out);
        }
    }

    /// The blank sheet, every single-item sheet found at any depth, and every
    /// nested area (cut bodies, scroll and disjunction parts).
    pub fn subgraphs(&self) -> BTreeSet<Graph> {
        let mut out = BTreeSet::new();
        out.insert(Graph::empty());
        self.collect_subgraphs(&mut out);
        out
    }

    fn collect_subgraphs(&self, out: &mut BTreeSet<Graph>) {
        out.insert(self.clone());
        for it in &self.items {
            out.insert(Graph::single(it.clone()));
            match it {
                Item::Atom(_) => {}
                Item::Cut(g) => g.collect_subgraphs(out),
                Item::Scroll(a, b) | Item::Disj(a, b) => {
                    a.collect_subgraphs(out);
                    b.collect_subgraphs(out);
                }
            }
        }
    }
}

/// `source ⊢ target` read at the whole-sheet level.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    pub source: Graph,
    pub target: Graph,
}

impl Sequent {
    pub fn new(source: Graph, target: Graph) -> Sequent {
        Sequent { source, target }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.source.is_empty() {
            write!(f, "|- {}", self.target)
        } else {
            write!(f, "{} |- {}", self.source, self.target)
        }
    }
}

/// True iff the canonical forms of `a` and `b` coincide.
pub fn equal(a: &Graph, b: &Graph) -> bool {
    a.canonicalize() == b.canonicalize()
}

impl FromIterator<Item> for Graph {
    fn from_iter<T: IntoIterator<Item = Item>>(iter: T) -> Self {
        Graph::new(iter.into_iter().collect())
    }
}

// ---------------------------------------------------------------------------
// Text notation
// ---------------------------------------------------------------------------

/// Words that end a graph inside a proof script. They cannot be used as atoms there.
pub const RESERVED: &[&str] = &[
    "system", "theorem", "vars", "premise", "from", "step", "have", "lemma", "qed", "witness",
    "split",
];

pub fn is_atom_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

pub fn parse_graph(text: &str) -> Result<Graph, SyntaxError> {
    let mut cur = Cursor::new(text)?;
    let g = read_graph(&mut cur, false)?;
    cur.finish()?;
    Ok(g)
}

pub fn print_graph(g: &Graph) -> String {
    g.to_string()
}

/// Reads items until the next token cannot start one. With `script` set,
/// reserved words and a `{` opening a proof block also end the graph.
pub(crate) fn read_graph(cur: &mut Cursor, script: bool) -> Result<Graph, SyntaxError> {
    let mut items = Vec::new();
    loop {
        match cur.peek() {
            Some(Tok::Ident(w)) => {
                if script && RESERVED.contains(&w.as_str()) {
                    break;
                }
                let (w, pos) = cur.ident("atom")?;
                if !is_atom_name(&w) {
                    return Err(SyntaxError::Invalid {
                        pos,
                        msg: format!("`{w}` is not an atom name (expected [a-z][a-z0-9_]*)"),
                    });
                }
                items.push(Item::Atom(w));
            }
            Some(Tok::Hash) => {
                cur.bump();
                items.push(Item::falsum());
            }
            Some(Tok::LParen) => {
                let (_, pos) = cur.bump().expect("peeked");
                let body = read_graph(cur, script)?;
                close(cur, Tok::RParen, pos, '(', ')')?;
                items.push(Item::Cut(body));
            }
            Some(Tok::LBrace) => {
                if script && opens_block(cur) {
                    break;
                }
                let (_, pos) = cur.bump().expect("peeked");
                let left = read_graph(cur, script)?;
                let item = match cur.peek() {
                    Some(Tok::Arrow) => {
                        cur.bump();
                        let right = read_graph(cur, script)?;
                        Item::Scroll(left, right)
                    }
                    Some(Tok::Bar) => {
                        cur.bump();
                        let right = read_graph(cur, script)?;
                        Item::disj(left, right)
                    }
                    None => {
                        return Err(SyntaxError::Unbalanced {
                            pos,
                            open: '{',
                            close: '}',
                        })
                    }
                    _ => return Err(cur.unexpected("`=>` or `|`")),
                };
                close(cur, Tok::RBrace, pos, '{', '}')?;
                items.push(item);
            }
            _ => break,
        }
    }
    Ok(Graph::new(items))
}

fn opens_block(cur: &Cursor) -> bool {
    match cur.peek_at(1) {
        Some(Tok::RBrace) => true,
        Some(Tok::Ident(w)) => matches!(w.as_str(), "step" | "have" | "lemma"),
        _ => false,
    }
}

fn close(
    cur: &mut Cursor,
    tok: Tok,
    open_pos: crate::lexer::Pos,
    open: char,
    close: char,
) -> Result<(), SyntaxError> {
    if cur.eat(&tok) {
        Ok(())
    } else if cur.at_end() {
        Err(SyntaxError::Unbalanced {
            pos: open_pos,
            open,
            close,
        })
    } else {
        Err(cur.unexpected(&tok.to_string()))
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Atom(x) => f.write_str(x),
            Item::Cut(g) if g.is_empty() => f.write_str("#"),
            Item::Cut(g) => write!(f, "({g})"),
            Item::Scroll(a, b) => write_pair(f, a, "=>", b),
            Item::Disj(a, b) => write_pair(f, a, "|", b),
        }
    }
}

fn write_pair(f: &mut fmt::Formatter<'_>, a: &Graph, sep: &str, b: &Graph) -> fmt::Result {
    f.write_str("{")?;
    if !a.is_empty() {
        write!(f, "{a} ")?;
    }
    f.write_str(sep)?;
    if !b.is_empty() {
        write!(f, " {b}")?;
    }
    f.write_str("}")
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, it) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{it}")?;
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_graph(s)
    }
}
