use thiserror::Error;

use super::{check_nd, NdError, NdProof, NdRule};
use crate::derivation::{check_theorem, CheckError, Derivation, LemmaDb, Step, Subproof, Theorem};
use crate::formula::{embed, Formula};
use crate::graph::{Graph, Sequent};
use crate::rules::{registry, RuleName, SystemId};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompileOptions {
    /// Compile IMP_I through R8ID. Only possible when no hypothesis is open
    /// around the introduction.
    pub use_r8id: bool,
}

#[derive(Debug, Error)]
pub enum CompileError {
    #[error(transparent)]
    Nd(#[from] NdError),
    #[error("R8ID needs an empty context, found `{0}`")]
    ContextNotEmpty(Graph),
    #[error("compiled derivation does not check: {0}")]
    Internal(#[from] CheckError),
}

/// Compiles a checked ND proof of `Γ ⊢ A` into an ALFA_I theorem from
/// `embed(⋀Γ)` to `embed(A)`, then runs the kernel on it.
pub fn compile(p: &NdProof) -> Result<Theorem, CompileError> {
    compile_with(p, &CompileOptions::default())
}

pub fn compile_with(p: &NdProof, opts: &CompileOptions) -> Result<Theorem, CompileError> {
    let j = check_nd(p)?;
    let context = embed(&Formula::conj(j.hypotheses()));
    let mut c = Compiler { opts, fresh: 0 };
    let steps = c.node(p, &context)?;
    let th = Theorem {
        name: "nd".into(),
        vars: Vec::new(),
        premises: Vec::new(),
        proof: Derivation {
            system: SystemId::AlfaI,
            initial: context,
            steps,
        },
    };
    let reg = if opts.use_r8id {
        registry(SystemId::AlfaI).with_rule(RuleName::R8id)
    } else {
        registry(SystemId::AlfaI)
    };
    crate::derivation::check_theorem_in(&th, &reg, &LemmaDb::new())?;
    Ok(th)
}

/// Checks a compiled theorem against plain ALFA_I.
pub fn check_compiled(th: &Theorem) -> Result<Sequent, CheckError> {
    check_theorem(th, &LemmaDb::new())
}

struct Compiler<'a> {
    opts: &'a CompileOptions,
    fresh: usize,
}

fn first(rule: RuleName, witness: Option<Graph>, result: Graph) -> Step {
    Step::FirstDegree { rule, witness, result }
}

fn second(rule: RuleName, premises: &[&str], split: Option<Graph>, result: Graph) -> Step {
    Step::SecondDegree {
        rule,
        premises: premises.iter().map(|s| s.to_string()).collect(),
        split,
        result,
    }
}

impl Compiler<'_> {
    fn name(&mut self) -> String {
        self.fresh += 1;
        format!("n{}", self.fresh)
    }

    /// A `have` proving `g ⊢ embed(p.conclusion)`.
    fn have(&mut self, p: &NdProof, g: &Graph) -> Result<(String, Step), CompileError> {
        let steps = self.node(p, g)?;
        self.block(Sequent::new(g.clone(), embed(&p.conclusion)), steps)
    }

    fn block(&mut self, sequent: Sequent, steps: Vec<Step>) -> Result<(String, Step), CompileError> {
        let name = self.name();
        Ok((name.clone(), Step::Have(Subproof { name, sequent, steps })))
    }

    /// Steps leading from `g` to `embed(p.conclusion)`. Every open
    /// hypothesis of `p` is embedded in `g`.
    fn node(&mut self, p: &NdProof, g: &Graph) -> Result<Vec<Step>, CompileError> {
        let target = embed(&p.conclusion);
        let ch = &p.children;
        Ok(match p.rule {
            NdRule::Hyp => vec![first(RuleName::R2, None, target)],
            NdRule::AndI => {
                let (a, ha) = self.have(&ch[0], g)?;
                let (b, hb) = self.have(&ch[1], g)?;
                vec![ha, hb, second(RuleName::R0, &[&a, &b], None, target)]
            }
            NdRule::AndEL | NdRule::AndER => {
                let mut steps = self.node(&ch[0], g)?;
                steps.push(first(RuleName::R2, None, target));
                steps
            }
            NdRule::OrIL | NdRule::OrIR => {
                let Formula::Or(a, b) = &p.conclusion else { unreachable!("checked") };
                let other = if p.rule == NdRule::OrIL { b } else { a };
                let mut steps = self.node(&ch[0], g)?;
                steps.push(first(RuleName::IOr, Some(embed(other)), target));
                steps
            }
            NdRule::BotE => {
                let mut steps = self.node(&ch[0], g)?;
                steps.push(first(RuleName::EBot, Some(target.clone()), target));
                steps
            }
            NdRule::ImpE => {
                let ea = embed(&ch[1].conclusion);
                let imp = embed(&ch[0].conclusion);
                let joined = ea.union(&imp);
                if *g == joined {
                    vec![first(RuleName::Mpi, None, target)]
                } else {
                    let (f, hf) = self.have(&ch[0], g)?;
                    let (x, hx) = self.have(&ch[1], g)?;
                    vec![
                        hf,
                        hx,
                        second(RuleName::R0, &[&x, &f], None, joined),
                        first(RuleName::Mpi, None, target),
                    ]
                }
            }
            NdRule::ImpI => {
                let Formula::Imp(a, _) = &p.conclusion else { unreachable!("checked") };
                let ea = embed(a);
                if self.opts.use_r8id {
                    if !g.is_empty() {
                        return Err(CompileError::ContextNotEmpty(g.clone()));
                    }
                    let (h, body) = self.have(&ch[0], &ea)?;
                    vec![body, second(RuleName::R8id, &[&h], None, target)]
                } else {
                    let (h, body) = self.have(&ch[0], &g.union(&ea))?;
                    vec![body, second(RuleName::R8i, &[&h], Some(g.clone()), target)]
                }
            }
            NdRule::OrE => self.or_elim(p, g, target)?,
        })
    }

    /// Branches become scrolls `{A => C}` and `{B => C}` on the context;
    /// E_OR then turns the disjunction into `{S => C}` where `S` is the pair
    /// of scrolls, which MPI discharges.
    fn or_elim(&mut self, p: &NdProof, g: &Graph, ec: Graph) -> Result<Vec<Step>, CompileError> {
        let ch = &p.children;
        let Formula::Or(a, b) = &ch[0].conclusion else { unreachable!("checked") };
        let (ea, eb) = (embed(a), embed(b));
        let sa = Graph::scroll(ea.clone(), ec.clone());
        let sb = Graph::scroll(eb.clone(), ec.clone());
        let s = sa.union(&sb);
        let disj = Graph::disj(ea.clone(), eb.clone());
        let mut steps = Vec::new();

        let mut branch = |me: &mut Self, child: &NdProof, e: &Graph, scroll: &Graph| -> Result<String, CompileError> {
            let (h, body) = me.have(child, &g.union(e))?;
            let (name, wrapped) = me.block(
                Sequent::new(g.clone(), scroll.clone()),
                vec![body, second(RuleName::R8i, &[&h], Some(g.clone()), scroll.clone())],
            )?;
            steps.push(wrapped);
            Ok(name)
        };
        let la = branch(self, &ch[1], &ea, &sa)?;
        let lb = branch(self, &ch[2], &eb, &sb)?;

        let (both, hboth) = self.block(
            Sequent::new(g.clone(), s.clone()),
            vec![second(RuleName::R0, &[&la, &lb], None, s.clone())],
        )?;
        steps.push(hboth);
        let (d, hd) = self.have(&ch[0], g)?;
        steps.push(hd);
        steps.push(second(RuleName::R0, &[&d, &both], None, disj.union(&s)));

        let target = Graph::scroll(s.clone(), ec.clone());
        let mut case = |me: &mut Self, e: &Graph, own: &Graph| -> Result<String, CompileError> {
            let (inner, hinner) = me.block(
                Sequent::new(e.union(&s), ec.clone()),
                vec![
                    first(RuleName::R2, None, e.union(own)),
                    first(RuleName::Mpi, None, ec.clone()),
                ],
            )?;
            let (name, outer) = me.block(
                Sequent::new(e.clone(), target.clone()),
                vec![hinner, second(RuleName::R8i, &[&inner], Some(e.clone()), target.clone())],
            )?;
            steps.push(outer);
            Ok(name)
        };
        let ca = case(self, &ea, &sa)?;
        let cb = case(self, &eb, &sb)?;
        let (elim, helim) = self.block(
            Sequent::new(disj.clone(), target.clone()),
            vec![second(RuleName::EOr, &[&ca, &cb], None, target.clone())],
        )?;
        steps.push(helim);
        steps.push(second(RuleName::Ctx, &[&elim], None, s.union(&target)));
        steps.push(first(RuleName::Mpi, None, ec));
        Ok(steps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::translate;
    use crate::nd::{parse_nd, EXAMPLES};
    use crate::semantics::ipc_valid;

    fn nd(s: &str) -> NdProof {
        parse_nd(s).unwrap()
    }

    #[test]
    fn identity_compiles_to_a_scroll() {
        let th = compile(&nd("IMP_I(p -> p)[x]{ HYP(p)[x]{} }")).unwrap();
        let s = check_compiled(&th).unwrap();
        assert!(s.source.is_empty());
        assert_eq!(s.target.to_string(), "{p => p}");
    }

    #[test]
    fn implication_elimination_is_one_mpi() {
        let th = compile(&nd("IMP_E(q){ HYP(p -> q)[f]{} HYP(p)[x]{} }")).unwrap();
        assert_eq!(th.proof.initial.to_string(), "p {p => q}");
        assert_eq!(th.proof.steps, vec![first(RuleName::Mpi, None, embed(&Formula::atom("q")))]);
    }

    #[test]
    fn ex_falso_uses_e_bot() {
        let th = compile(&nd("BOT_E(r){ HYP(F)[b]{} }")).unwrap();
        assert_eq!(th.proof.initial, Graph::falsum());
        assert!(th.proof.steps.iter().any(|s| matches!(s, Step::FirstDegree { rule: RuleName::EBot, .. })));
    }

    #[test]
    fn weak_deduction_flag() {
        let closed = nd("IMP_I(p -> p)[x]{ HYP(p)[x]{} }");
        let opts = CompileOptions { use_r8id: true };
        assert!(compile_with(&closed, &opts).is_ok());
        let open = nd("IMP_I(q -> p)[x]{ HYP(p)[y]{} }");
        assert!(matches!(compile_with(&open, &opts), Err(CompileError::ContextNotEmpty(_))));
    }

    #[test]
    fn every_example_compiles_to_an_equivalent_sequent() {
        for (name, text) in EXAMPLES {
            let p = nd(text);
            let j = check_nd(&p).unwrap();
            let th = compile(&p).unwrap_or_else(|e| panic!("{name}: {e}"));
            let s = check_compiled(&th).unwrap();
            let graph_reading = Formula::imp(translate(&s.source), translate(&s.target));
            assert!(ipc_valid(&Formula::iff(graph_reading, j.formula())), "{name}");
        }
    }
}
