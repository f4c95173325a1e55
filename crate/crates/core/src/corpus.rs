//! The bundled corpus of checked derivations, one theorem per entry.

use std::sync::OnceLock;

use crate::derivation::{
    check_theorem, expand, parse_script, DbError, LemmaDb, Script, Theorem,
};
use crate::graph::Sequent;
use crate::lexer::SyntaxError;
use crate::rules::SystemId;
use crate::semantics::Logic;

/// Corpus files in registration order.
pub const FILES: [(&str, &str); 4] = [
    ("alfao.gpf", include_str!("../corpus/alfao.gpf")),
    ("alfa_i.gpf", include_str!("../corpus/alfa_i.gpf")),
    ("alfa_io.gpf", include_str!("../corpus/alfa_io.gpf")),
    ("alfa_io_classic.gpf", include_str!("../corpus/alfa_io_classic.gpf")),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub id: &'static str,
    pub system: SystemId,
    pub locus: &'static str,
    pub file: &'static str,
    pub expected: Verdict,
    /// Low confidence in how this entry was written down; a failure points
    /// at the entry rather than at the rules.
    pub uncertain: bool,
}

impl CorpusEntry {
    pub fn logic(&self) -> Logic {
        self.system.logic()
    }
}

const fn entry(id: &'static str, system: SystemId, file: &'static str, locus: &'static str) -> CorpusEntry {
    CorpusEntry {
        id,
        system,
        locus,
        file,
        expected: Verdict::Accept,
        uncertain: false,
    }
}

const fn uncertain(e: CorpusEntry) -> CorpusEntry {
    CorpusEntry { uncertain: true, ..e }
}

use SystemId::{AlfaI, AlfaIo, AlfaIoClassic, Alfao};

pub const ENTRIES: [CorpusEntry; 26] = [
    entry("r1", Alfao, "alfao.gpf", "R1: duplication A |- A A, from R2 identity and R0"),
    entry("conj_insertion", Alfao, "alfao.gpf", "from |- A and |- B infer |- A B"),
    entry("r7_derived", Alfao, "alfao.gpf", "R7 from R5, R2 and R8"),
    entry("r4_derived", Alfao, "alfao.gpf", "R4 from R5, R2, R6 and R8"),
    entry("r8_inv", Alfao, "alfao.gpf", "inverse of R8"),
    entry("mp", Alfao, "alfao.gpf", "modus ponens as R5; R2; R6"),
    entry("mp_r6", Alfao, "alfao.gpf", "R6 from the modus ponens lemma"),
    entry("r8i_inv", AlfaI, "alfa_i.gpf", "inverse of R8I"),
    entry("ctx", AlfaI, "alfa_i.gpf", "CTX: from B |- C infer A B |- A C"),
    entry("i_p2", AlfaI, "alfa_i.gpf", "I_P2: (A B) |- {A => (B)}"),
    entry("e_p", AlfaI, "alfa_i.gpf", "E_P: {A => B} |- (A (B))"),
    entry("i_p3", AlfaI, "alfa_i.gpf", "I_P3: {A | B} |- {(A) => B}"),
    entry("disj_to_cut", AlfaI, "alfa_i.gpf", "disjunction to double cut, by I_P3 then E_P"),
    entry("i_c", AlfaIo, "alfa_io.gpf", "I_C: A |- ((A))"),
    entry("e_bot", AlfaIo, "alfa_io.gpf", "E_BOT recovered as a theorem"),
    uncertain(entry("r5_prime", AlfaIo, "alfa_io.gpf", "R5': A (A B) |- (B), special case of R5")),
    entry("i_neg", AlfaIo, "alfa_io.gpf", "I_NEG recovered as a theorem"),
    entry("e_neg", AlfaIo, "alfa_io.gpf", "E_NEG recovered as a theorem"),
    entry("r5", AlfaIo, "alfa_io.gpf", "R5 from R5' and R0"),
    entry("r7", AlfaIo, "alfa_io.gpf", "R7 by I_P2 then E_P"),
    entry("r7_inv", AlfaIo, "alfa_io.gpf", "inverse of R7"),
    entry("r3", AlfaIo, "alfa_io.gpf", "R3: insertion into a cut"),
    uncertain(entry("e_p_inv", AlfaIoClassic, "alfa_io_classic.gpf", "inverse of E_P using I_ORP")),
    entry("r6", AlfaIoClassic, "alfa_io_classic.gpf", "R6: double cut elimination"),
    entry("r4", AlfaIoClassic, "alfa_io_classic.gpf", "R4 from R5, R6 and R8I"),
    entry("r8", AlfaIoClassic, "alfa_io_classic.gpf", "R8 from R8I and E_P"),
];

pub fn file_text(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// All corpus theorems, in registration order.
pub fn theorems() -> Result<Vec<Theorem>, SyntaxError> {
    let mut out = Vec::new();
    for (_, text) in FILES {
        out.extend(parse_script(text)?.theorems);
    }
    Ok(out)
}

pub fn scripts() -> Result<Vec<(&'static str, Script)>, SyntaxError> {
    FILES
        .iter()
        .map(|(name, text)| Ok((*name, parse_script(text)?)))
        .collect()
}

/// Every corpus theorem registered in order.
pub fn build_db() -> Result<LemmaDb, DbError> {
    let mut db = LemmaDb::new();
    for (_, text) in FILES {
        db = db.extend_from_script(&parse_script(text)?)?;
    }
    Ok(db)
}

/// The corpus database, built once. Panics if the bundled corpus is broken,
/// which the test suite rules out.
pub fn db() -> &'static LemmaDb {
    static DB: OnceLock<LemmaDb> = OnceLock::new();
    DB.get_or_init(|| build_db().expect("bundled corpus checks"))
}

#[derive(Clone, Debug)]
pub struct EntryReport {
    pub entry: CorpusEntry,
    pub statement: Option<Sequent>,
    /// Check failure, if any.
    pub error: Option<String>,
    pub sound: bool,
    /// The lemma-free, CTX-free expansion checks with the same endpoints.
    pub expansion_ok: bool,
}

impl EntryReport {
    pub fn verdict(&self) -> Verdict {
        if self.error.is_none() {
            Verdict::Accept
        } else {
            Verdict::Reject
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict() == self.entry.expected && self.sound && self.expansion_ok
    }
}

/// Checks every entry against the lemmas registered before it.
pub fn run() -> Result<Vec<EntryReport>, SyntaxError> {
    let ths = theorems()?;
    let mut db = LemmaDb::new();
    let mut out = Vec::new();
    for entry in ENTRIES {
        let Some(th) = ths.iter().find(|t| t.name == entry.id) else {
            out.push(EntryReport {
                entry,
                statement: None,
                error: Some("no theorem with this id".into()),
                sound: false,
                expansion_ok: false,
            });
            continue;
        };
        let checked = check_theorem(th, &db);
        let report = match checked {
            Ok(stmt) => {
                let expansion_ok = expand(th, &db)
                    .ok()
                    .and_then(|flat| check_theorem(&flat, &LemmaDb::new()).ok())
                    .is_some_and(|s| s == stmt);
                EntryReport {
                    entry,
                    statement: Some(stmt),
                    error: None,
                    sound: th.semantically_sound(entry.logic()),
                    expansion_ok,
                }
            }
            Err(e) => EntryReport {
                entry,
                statement: None,
                error: Some(e.to_string()),
                sound: false,
                expansion_ok: false,
            },
        };
        if let Ok(next) = db.register_lemma(th.clone()) {
            db = next;
        }
        out.push(report);
    }
    Ok(out)
}
