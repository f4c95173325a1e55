use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use super::{check_theorem, parse_script, print_script, CheckError, Premise, Script, Theorem};
use crate::graph::Sequent;
use crate::lexer::SyntaxError;
use crate::rules::SystemId;

#[derive(Debug, Error)]
pub enum DbError {
    #[error("lemma `{0}` is already registered")]
    NameClash(String),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("lemma database is corrupt at `{lemma}`: {source}")]
    Corrupt { lemma: String, source: CheckError },
    #[error("malformed lemma database: {0}")]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A checked theorem together with the sequent it proves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaEntry {
    theorem: Theorem,
    statement: Sequent,
}

impl LemmaEntry {
    pub fn name(&self) -> &str {
        &self.theorem.name
    }

    pub fn system(&self) -> SystemId {
        self.theorem.proof.system
    }

    pub fn vars(&self) -> &[String] {
        &self.theorem.vars
    }

    pub fn premises(&self) -> &[Premise] {
        &self.theorem.premises
    }

    pub fn statement(&self) -> &Sequent {
        &self.statement
    }

    pub fn theorem(&self) -> &Theorem {
        &self.theorem
    }
}

/// Registered lemmas in registration order. Registration returns a new
/// database; entries are shared, not copied.
#[derive(Clone, Debug, Default)]
pub struct LemmaDb {
    entries: Vec<Arc<LemmaEntry>>,
    index: HashMap<String, usize>,
}

impl LemmaDb {
    pub fn new() -> LemmaDb {
        LemmaDb::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&LemmaEntry> {
        self.index.get(name).map(|&i| &*self.entries[i])
    }

    pub fn entries(&self) -> impl Iterator<Item = &LemmaEntry> {
        self.entries.iter().map(|e| &**e)
    }

    /// Checks `th` against its registry and the lemmas registered so far.
    pub fn register_lemma(&self, th: Theorem) -> Result<LemmaDb, DbError> {
        if self.index.contains_key(&th.name) {
            return Err(DbError::NameClash(th.name));
        }
        let statement = check_theorem(&th, self)?;
        let mut next = self.clone();
        next.index.insert(th.name.clone(), next.entries.len());
        next.entries.push(Arc::new(LemmaEntry { theorem: th, statement }));
        Ok(next)
    }

    /// Registers every theorem of a script in order, re-checking each.
    pub fn extend_from_script(&self, script: &Script) -> Result<LemmaDb, DbError> {
        let mut db = self.clone();
        for th in &script.theorems {
            db = match db.register_lemma(th.clone()) {
                Ok(db) => db,
                Err(DbError::Check(source)) => {
                    return Err(DbError::Corrupt {
                        lemma: th.name.clone(),
                        source,
                    })
                }
                Err(e) => return Err(e),
            };
        }
        Ok(db)
    }

    pub fn to_script(&self) -> Script {
        Script {
            theorems: self.entries().map(|e| e.theorem.clone()).collect(),
        }
    }

    pub fn from_text(text: &str) -> Result<LemmaDb, DbError> {
        LemmaDb::new().extend_from_script(&parse_script(text)?)
    }
}

impl PartialEq for LemmaDb {
    fn eq(&self, other: &Self) -> bool {
        self.entries.len() == other.entries.len()
            && self.entries.iter().zip(&other.entries).all(|(a, b)| a == b)
    }
}

pub fn save_db(db: &LemmaDb, path: &Path) -> Result<(), DbError> {
    std::fs::write(path, print_script(&db.to_script()))?;
    Ok(())
}

pub fn load_db(path: &Path) -> Result<LemmaDb, DbError> {
    LemmaDb::from_text(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MP: &str = "system ALFAO
        theorem mp vars a b from: a (a (b))
          step R5 => a ((b))
          step R2 => ((b))
          step R6 => b
        qed
        theorem use_mp vars r s from: r (r (s))
          lemma mp [a := r; b := s] => s
        qed";

    #[test]
    fn lemma_promotion() {
        let db = LemmaDb::from_text(MP).unwrap();
        assert_eq!(db.len(), 2);
        assert_eq!(db.get("use_mp").unwrap().statement().to_string(), "r (r (s)) |- s");
    }

    #[test]
    fn unused_variables_are_fine() {
        let db = LemmaDb::from_text("system ALFAO theorem t vars a z from: a step R2 => qed").unwrap();
        assert_eq!(db.get("t").unwrap().vars().len(), 2);
    }

    #[test]
    fn forward_references_and_clashes_are_rejected() {
        let reordered = "system ALFAO
            theorem use_mp vars r s from: r (r (s)) lemma mp [a := r; b := s] => s qed
            theorem mp vars a b from: a (a (b)) step R5 => a ((b)) step R2 => ((b)) step R6 => b qed";
        match LemmaDb::from_text(reordered) {
            Err(DbError::Corrupt { lemma, .. }) => assert_eq!(lemma, "use_mp"),
            other => panic!("{other:?}"),
        }
        let db = LemmaDb::from_text(MP).unwrap();
        let again = db.to_script().theorems[0].clone();
        assert!(matches!(db.register_lemma(again), Err(DbError::NameClash(_))));
    }

    #[test]
    fn registration_leaves_the_old_db_alone() {
        let db = LemmaDb::new();
        let th = parse_script("system ALFAO theorem t from: qed").unwrap().theorems.remove(0);
        let next = db.register_lemma(th).unwrap();
        assert!(db.is_empty());
        assert_eq!(next.len(), 1);
    }

    #[test]
    fn empty_text_is_an_empty_db() {
        assert!(LemmaDb::from_text("").unwrap().is_empty());
    }
}
