//! Existential-graph proof kernel for the alpha systems ALFAO, ALFA_I,
//! ALFA_IO and ALFA_IO extended with I_ORP.
//!
//! Graphs are canonical multisets ([`graph`]); rules rewrite whole sheets
//! ([`rules`]); scripts are checked by [`derivation`]. Two semantic oracles
//! ([`semantics`]) certify soundness, and [`search`] looks for derivations
//! within a budget.

pub mod corpus;
pub mod derivation;
pub mod formula;
pub mod fuzz;
pub mod graph;
pub mod lexer;
pub mod nd;
pub mod rules;
pub mod search;
pub mod semantics;

pub use formula::{embed, parse_formula, print_formula, translate, Formula};
pub use graph::{equal, parse_graph, print_graph, Graph, Item, Measure, Sequent, Subst};
pub use lexer::{Pos, SyntaxError};
