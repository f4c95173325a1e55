use std::path::PathBuf;
use std::process::ExitCode;

use alfa::corpus;
use alfa::derivation::{parse_script, print_script, Derivation, LemmaDb, Script, Theorem};
use alfa::fuzz::fuzz_registry;
use alfa::rules::{registry, RuleName, SystemId};
use alfa::search::{prove, SearchBudget};
use alfa::semantics::{classical_valid, ipc_valid, kripke_countermodel, sequent_sound, Logic, EXHAUSTIVE_WORLDS};
use alfa::{embed, parse_formula, parse_graph, translate, Graph, Sequent};
use anyhow::Context;
use clap::{Parser, Subcommand};
use serde::Serialize;

/// Checker, oracles, fuzzer and prover for alpha existential-graph systems.
#[derive(Parser)]
#[command(name = "alfa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check proof scripts; exits 1 if any theorem is rejected.
    Check {
        paths: Vec<PathBuf>,
        /// Also certify each statement with the oracle of its system's logic.
        #[arg(long)]
        semantic: bool,
        /// Make the bundled corpus lemmas available.
        #[arg(long)]
        corpus: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the formula a graph stands for.
    Translate { graph: String },
    /// Print the graph of a formula.
    Embed { formula: String },
    /// Decide a formula classically (cpc) or intuitionistically (ipc).
    Oracle {
        logic: Logic,
        formula: String,
        #[arg(long)]
        json: bool,
    },
    /// Random soundness and substitutivity checks for a system's rules.
    Fuzz {
        system: SystemId,
        #[arg(long, default_value_t = 1000)]
        iterations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Add a rule to the registry first, e.g. to plant a defect.
        #[arg(long = "add-rule")]
        add_rule: Vec<RuleName>,
        #[arg(long)]
        json: bool,
    },
    /// Look for a derivation of TO from FROM, using the corpus lemmas.
    Search {
        system: SystemId,
        from: String,
        to: String,
        #[arg(long, default_value_t = 6)]
        steps: usize,
        #[arg(long, default_value_t = SearchBudget::DEFAULT_SIZE)]
        size: usize,
        #[arg(long, default_value_t = SearchBudget::DEFAULT_BRANCH)]
        branch: usize,
        /// Witness graphs separated by `;`. Default: subgraphs of FROM and TO.
        #[arg(long = "witness-pool")]
        witness_pool: Option<String>,
        /// Search without the corpus lemmas.
        #[arg(long)]
        no_lemmas: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run every corpus entry and print a table.
    Corpus {
        #[arg(long)]
        system: Option<SystemId>,
        #[arg(long)]
        json: bool,
    },
}

/// Bad input as opposed to a failed verification.
struct Usage(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn json_out<T: Serialize>(v: &T) -> Result<(), Usage> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn run(cmd: Command) -> Result<bool, Usage> {
    match cmd {
        Command::Check {
            paths,
            semantic,
            corpus,
            json,
        } => check(&paths, semantic, corpus, json),
        Command::Translate { graph } => {
            println!("{}", translate(&parse_graph(&graph)?));
            Ok(true)
        }
        Command::Embed { formula } => {
            println!("{}", embed(&parse_formula(&formula)?));
            Ok(true)
        }
        Command::Oracle { logic, formula, json } => oracle(logic, &formula, json),
        Command::Fuzz {
            system,
            iterations,
            seed,
            add_rule,
            json,
        } => fuzz(system, iterations, seed, &add_rule, json),
        Command::Search {
            system,
            from,
            to,
            steps,
            size,
            branch,
            witness_pool,
            no_lemmas,
            json,
        } => {
            let pool = match witness_pool {
                Some(text) => text.split(';').map(parse_graph).collect::<Result<Vec<_>, _>>()?,
                None => Vec::new(),
            };
            let budget = SearchBudget {
                max_steps: steps,
                max_graph_size: size,
                max_branch: branch,
                witness_pool: pool,
            };
            let db = if no_lemmas { LemmaDb::new() } else { corpus::db().clone() };
            search(system, &db, &parse_graph(&from)?, &parse_graph(&to)?, &budget, json)
        }
        Command::Corpus { system, json } => corpus_table(system, json),
    }
}

#[derive(Serialize)]
struct TheoremReport {
    file: String,
    theorem: String,
    system: String,
    logic: String,
    accepted: bool,
    statement: Option<String>,
    error: Option<String>,
    sound: Option<bool>,
}

fn check(paths: &[PathBuf], semantic: bool, with_corpus: bool, json: bool) -> Result<bool, Usage> {
    let mut db = if with_corpus { corpus::db().clone() } else { LemmaDb::new() };
    let mut reports = Vec::new();
    for path in paths {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let script = parse_script(&text).with_context(|| path.display().to_string())?;
        for th in script.theorems {
            let name = th.name.clone();
            let system = th.proof.system;
            let sound = semantic.then(|| th.semantically_sound(system.logic()));
            let (statement, error) = match db.register_lemma(th.clone()) {
                Ok(next) => {
                    db = next;
                    let s = db.get(&name).expect("just registered").statement().clone();
                    (Some(s.to_string()), None)
                }
                Err(e) => (None, Some(e.to_string())),
            };
            reports.push(TheoremReport {
                file: path.display().to_string(),
                theorem: name,
                system: system.to_string(),
                logic: system.logic().to_string(),
                accepted: error.is_none(),
                statement,
                error,
                sound,
            });
        }
    }
    let ok = reports.iter().all(|r| r.accepted && r.sound != Some(false));
    if json {
        json_out(&reports)?;
    } else {
        for r in &reports {
            let cert = match r.sound {
                Some(true) => format!("  [{}-sound]", r.logic),
                Some(false) => format!("  [NOT {}-sound]", r.logic),
                None => String::new(),
            };
            match (&r.statement, &r.error) {
                (Some(s), _) => println!("ok    {} ({}): {s}{cert}", r.theorem, r.system),
                (_, Some(e)) => println!("FAIL  {} ({}): {e}", r.theorem, r.system),
                _ => unreachable!(),
            }
        }
        println!("{} theorem(s), {} rejected", reports.len(), reports.iter().filter(|r| !r.accepted).count());
    }
    Ok(ok)
}

#[derive(Serialize)]
struct OracleReport {
    logic: String,
    formula: String,
    valid: bool,
    countermodel: Option<String>,
}

fn oracle(logic: Logic, text: &str, json: bool) -> Result<bool, Usage> {
    let f = parse_formula(text)?;
    let (valid, countermodel) = match logic {
        Logic::Classical => (classical_valid(&f), None),
        Logic::Ipc => {
            let valid = ipc_valid(&f);
            let m = if valid { None } else { kripke_countermodel(&f, EXHAUSTIVE_WORLDS) };
            (valid, m.map(|m| m.to_string()))
        }
    };
    if json {
        json_out(&OracleReport {
            logic: logic.to_string(),
            formula: f.to_string(),
            valid,
            countermodel,
        })?;
    } else {
        println!("{}", if valid { "VALID" } else { "INVALID" });
        if let Some(m) = countermodel {
            print!("countermodel:\n{m}");
            if !m.ends_with('\n') {
                println!();
            }
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct FuzzJson {
    system: String,
    logic: String,
    seed: u64,
    soundness: Vec<(String, usize)>,
    substitutivity: Vec<(String, usize)>,
    failures: Vec<String>,
}

fn fuzz(system: SystemId, iterations: usize, seed: u64, extra: &[RuleName], json: bool) -> Result<bool, Usage> {
    if iterations == 0 {
        return Err(Usage(anyhow::anyhow!("--iterations must be at least 1")));
    }
    let reg = extra.iter().fold(registry(system), |r, &x| r.with_rule(x));
    let report = fuzz_registry(&reg, iterations, seed);
    if json {
        let tally = |ts: &[alfa::fuzz::RuleTally]| ts.iter().map(|t| (t.rule.to_string(), t.instances)).collect();
        json_out(&FuzzJson {
            system: report.system.clone(),
            logic: report.logic.to_string(),
            seed,
            soundness: tally(&report.soundness),
            substitutivity: tally(&report.substitutivity),
            failures: report.failures.iter().map(ToString::to_string).collect(),
        })?;
    } else {
        println!("{} ({}), seed {seed}", report.system, report.logic);
        for t in &report.soundness {
            println!("  {:<6} {} instance(s)", t.rule.as_str(), t.instances);
        }
        let subst: usize = report.substitutivity.iter().map(|t| t.instances).sum();
        println!("  substitutivity: {subst} instance(s)");
        for c in &report.failures {
            println!("COUNTEREXAMPLE {c}");
        }
        println!("{} failure(s)", report.failures.len());
    }
    Ok(report.passed())
}

#[derive(Serialize)]
struct SearchJson {
    found: bool,
    steps: Option<usize>,
    script: Option<String>,
    semantically_valid: bool,
}

fn search(system: SystemId, db: &LemmaDb, from: &Graph, to: &Graph, budget: &SearchBudget, json: bool) -> Result<bool, Usage> {
    let found: Option<Derivation> = prove(system, db, from, to, budget);
    let logic = system.logic();
    let valid = sequent_sound(logic, &Sequent::new(from.clone(), to.clone()));
    let script = found.as_ref().map(|d| {
        print_script(&Script {
            theorems: vec![Theorem {
                name: "found".into(),
                vars: Vec::new(),
                premises: Vec::new(),
                proof: d.clone(),
            }],
        })
    });
    if json {
        json_out(&SearchJson {
            found: found.is_some(),
            steps: found.as_ref().map(Derivation::step_count),
            script,
            semantically_valid: valid,
        })?;
    } else if let Some(s) = script {
        print!("{s}");
    } else {
        println!("NOT FOUND within {} steps", budget.max_steps);
        if !valid {
            println!("note: semantically invalid in {logic}");
        }
    }
    Ok(found.is_some())
}

#[derive(Serialize)]
struct CorpusRow {
    id: String,
    system: String,
    locus: String,
    verdict: String,
    logic: String,
    certified: bool,
    expansion_checks: bool,
    uncertain: bool,
    error: Option<String>,
}

fn corpus_table(system: Option<SystemId>, json: bool) -> Result<bool, Usage> {
    let rows: Vec<CorpusRow> = corpus::run()?
        .into_iter()
        .filter(|r| system.is_none_or(|s| r.entry.system == s))
        .map(|r| CorpusRow {
            id: r.entry.id.to_string(),
            system: r.entry.system.to_string(),
            locus: r.entry.locus.to_string(),
            verdict: format!("{:?}", r.verdict()).to_lowercase(),
            logic: r.entry.logic().to_string(),
            certified: r.sound,
            expansion_checks: r.expansion_ok,
            uncertain: r.entry.uncertain,
            error: r.error.clone(),
        })
        .collect();
    let ok = rows.iter().all(|r| r.verdict == "accept" && r.certified && r.expansion_checks);
    if json {
        json_out(&rows)?;
    } else {
        println!("{:<15} {:<16} {:<7} {:<10} locus", "id", "system", "verdict", "certified");
        for r in &rows {
            let cert = if r.certified { format!("{} ok", r.logic) } else { "no".into() };
            let mark = if r.uncertain { " (low confidence)" } else { "" };
            println!("{:<15} {:<16} {:<7} {:<10} {}{mark}", r.id, r.system, r.verdict, cert, r.locus);
            if let Some(e) = &r.error {
                println!("    {e}");
            }
        }
    }
    Ok(ok)
}
