use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::RuleName;
use crate::graph::Graph;
use crate::semantics::Logic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SystemId {
    Alfao,
    AlfaI,
    AlfaIo,
    AlfaIoClassic,
}

impl SystemId {
    pub const ALL: [SystemId; 4] = [
        SystemId::Alfao,
        SystemId::AlfaI,
        SystemId::AlfaIo,
        SystemId::AlfaIoClassic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SystemId::Alfao => "ALFAO",
            SystemId::AlfaI => "ALFA_I",
            SystemId::AlfaIo => "ALFA_IO",
            SystemId::AlfaIoClassic => "ALFA_IO_CLASSIC",
        }
    }

    /// The logic each system is meant to capture.
    pub fn logic(self) -> Logic {
        match self {
            SystemId::Alfao | SystemId::AlfaIoClassic => Logic::Classical,
            SystemId::AlfaI | SystemId::AlfaIo => Logic::Ipc,
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown system `{0}` (expected ALFAO, ALFA_I, ALFA_IO or ALFA_IO_CLASSIC)")]
pub struct UnknownSystem(pub String);

impl FromStr for SystemId {
    type Err = UnknownSystem;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let up = s.to_ascii_uppercase();
        SystemId::ALL
            .into_iter()
            .find(|id| id.as_str() == up)
            .ok_or_else(|| UnknownSystem(s.to_string()))
    }
}

/// The rule set of one system. The axiom is always the blank sheet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemRegistry {
    pub id: SystemId,
    pub axiom: Graph,
    rules: BTreeSet<RuleName>,
    /// Set once the rule set differs from the stock one for `id`.
    pub modified: bool,
}

pub fn registry(id: SystemId) -> SystemRegistry {
    use RuleName::*;
    let rules: &[RuleName] = match id {
        SystemId::Alfao => &[R0, R2, R3, R4, R5, R6, R7, R8],
        SystemId::AlfaI => &[R0, R2, IOr, INeg, ENeg, Mpi, EBot, R8i, EOr],
        SystemId::AlfaIo => &[R0, R2, Mpi, IOr, R8i, EOr, IP3, IP2, EP],
        SystemId::AlfaIoClassic => &[R0, R2, Mpi, IOr, R8i, EOr, IP3, IP2, EP, IOrp],
    };
    SystemRegistry {
        id,
        axiom: Graph::empty(),
        rules: rules.iter().copied().collect(),
        modified: false,
    }
}

impl SystemRegistry {
    /// Basic rules in canonical order. CTX is admissible everywhere and not listed.
    pub fn basic_rules(&self) -> Vec<RuleName> {
        self.rules.iter().copied().collect()
    }

    pub fn first_degree(&self) -> Vec<RuleName> {
        self.rules.iter().copied().filter(|r| r.degree() == 1).collect()
    }

    pub fn second_degree(&self) -> Vec<RuleName> {
        let mut out: Vec<RuleName> = self.rules.iter().copied().filter(|r| r.degree() == 2).collect();
        out.push(RuleName::Ctx);
        out
    }

    pub fn contains(&self, rule: RuleName) -> bool {
        rule == RuleName::Ctx || self.rules.contains(&rule)
    }

    pub fn with_rule(mut self, rule: RuleName) -> SystemRegistry {
        if rule != RuleName::Ctx && self.rules.insert(rule) {
            self.modified = true;
        }
        self
    }

    pub fn without_rule(mut self, rule: RuleName) -> SystemRegistry {
        if self.rules.remove(&rule) {
            self.modified = true;
        }
        self
    }

    /// True when every rule of `other` is available here.
    pub fn includes(&self, other: &SystemRegistry) -> bool {
        other.rules.is_subset(&self.rules)
    }

    pub fn logic(&self) -> Logic {
        self.id.logic()
    }
}

impl fmt::Display for SystemRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id)?;
        if self.modified {
            f.write_str("*")?;
        }
        let names: Vec<&str> = self.rules.iter().map(|r| r.as_str()).collect();
        write!(f, " {{{}}}", names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use RuleName::*;

    #[test]
    fn registries() {
        let io = registry(SystemId::AlfaIo);
        for r in [INeg, ENeg, EBot] {
            assert!(!io.contains(r));
        }
        let classic = registry(SystemId::AlfaIoClassic);
        assert_eq!(classic, io.clone().with_rule(IOrp).with_id(SystemId::AlfaIoClassic));
        let o = registry(SystemId::Alfao);
        assert!(o.contains(R8));
        assert!([IOr, INeg, ENeg, Mpi, IP2, IP3, EP, IOrp, R8i, EOr].iter().all(|&r| !o.contains(r)));
        assert!(classic.includes(&io));
        assert!(!io.includes(&registry(SystemId::AlfaI)));
        assert!(!registry(SystemId::AlfaI).contains(R8id));
        assert!(registry(SystemId::AlfaI).with_rule(R8id).contains(R8id));
    }

    #[test]
    fn system_names() {
        assert_eq!("alfa_io".parse::<SystemId>().unwrap(), SystemId::AlfaIo);
        assert!("ALFA".parse::<SystemId>().is_err());
        assert_eq!(SystemId::AlfaIoClassic.logic(), Logic::Classical);
    }

    impl SystemRegistry {
        fn with_id(mut self, id: SystemId) -> SystemRegistry {
            self.id = id;
            self.modified = false;
            self
        }
    }
}
