//! `modcomp`: satisfiability, provability and completeness of modal formulas
//! from the command line.
//!
//! Exit codes: 0 for an affirmative answer (satisfiable, provable, complete,
//! bisimilar, true), 1 for a negative one, 2 for usage and resource errors.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use modcomp::bisim::{bisimilar, distinguishing_formula};
use modcomp::complete::{
    complete_with, complete_wrt_model, hardness_reduction, reduction_up_to_depth,
    satisfiable_and_complete, CompletenessOptions,
};
use modcomp::normalform::{complete_up_to_depth, normal_forms_of};
use modcomp::oracle::{brute_incomplete, brute_sat, enumerate_models, ModelBudget};
use modcomp::prover::Prover;
use modcomp::{parse, Formula, Logic, PointedModel, VarSet, Verdict};

#[derive(Parser)]
#[command(
    name = "modcomp",
    version,
    about = "Completeness checking for modal logics between K and S5"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct LogicArg {
    /// k, d, t, k4, d4, s4, k5, kd5, k45, kd45 or s5
    #[arg(short, long, default_value = "k")]
    logic: Logic,
}

#[derive(Subcommand)]
enum Command {
    /// Print a formula in canonical form with its measures.
    Parse { formula: String },
    /// Decide satisfiability.
    Sat {
        #[command(flatten)]
        logic: LogicArg,
        /// Print a model when one exists.
        #[arg(long)]
        model: bool,
        #[arg(long)]
        json: bool,
        formula: String,
    },
    /// Decide provability.
    Prove {
        #[command(flatten)]
        logic: LogicArg,
        #[arg(long)]
        json: bool,
        formula: String,
    },
    /// Decide whether a formula is complete.
    Complete {
        #[command(flatten)]
        logic: LogicArg,
        /// Print the splitting formula and two witness models.
        #[arg(long)]
        witness: bool,
        /// Completeness up to the formula's modal depth (K only).
        #[arg(long, conflicts_with_all = ["require_sat", "wrt_model"])]
        up_to_depth: bool,
        /// Affirmative only when the formula is also satisfiable.
        #[arg(long, conflicts_with = "wrt_model")]
        require_sat: bool,
        /// A model of the formula to use as a witness.
        #[arg(long, value_name = "FILE")]
        wrt_model: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        formula: String,
    },
    /// Decide bisimilarity of two pointed models.
    Bisim {
        first: PathBuf,
        second: PathBuf,
        /// Comma-separated variables; defaults to those of both models.
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
    },
    /// Evaluate a formula at the point of a model.
    Check { model: PathBuf, formula: String },
    /// Print the K normal forms whose disjunction is equivalent to a formula.
    Nf { formula: String },
    /// Print the formula that is complete exactly when the input is provable.
    Reduce {
        #[command(flatten)]
        logic: LogicArg,
        /// Target completeness up to this depth instead.
        #[arg(long)]
        depth: Option<usize>,
        formula: String,
    },
    /// Brute-force model enumeration.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Search small models for one satisfying the formula.
    Sat {
        #[command(flatten)]
        logic: LogicArg,
        #[arg(long, default_value_t = 3)]
        states: usize,
        formula: String,
    },
    /// Search small models for two non-bisimilar models of the formula.
    Incomplete {
        #[command(flatten)]
        logic: LogicArg,
        #[arg(long, default_value_t = 3)]
        states: usize,
        formula: String,
    },
    /// Count (or list) the models within a budget.
    Models {
        #[command(flatten)]
        logic: LogicArg,
        #[arg(long, default_value_t = 2)]
        states: usize,
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        /// Keep isomorphic copies.
        #[arg(long)]
        no_prune: bool,
        #[arg(long)]
        list: bool,
    },
}

/// A non-verdict failure, reported with exit code 2.
struct Failure(String);

impl<E: Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure(e.to_string())
    }
}

type Answer = Result<bool, Failure>;

fn formula(text: &str) -> Result<Formula, Failure> {
    parse(text).map_err(|e| {
        Failure(format!(
            "formula: {e}\n  {text}\n  {}^",
            " ".repeat(e.offset().unwrap_or(text.len()))
        ))
    })
}

fn model(path: &Path) -> Result<PointedModel, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    text.parse()
        .map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn yes_no(answer: bool, yes: &str, no: &str) -> bool {
    println!("{}", if answer { yes } else { no });
    answer
}

fn print_verdict(v: &Verdict, witness: bool, json: bool) -> Result<(), Failure> {
    if json {
        println!("{}", serde_json::to_string(v)?);
        return Ok(());
    }
    println!(
        "{}",
        if v.is_complete() {
            "complete"
        } else {
            "incomplete"
        }
    );
    if witness {
        if let Some(psi) = &v.psi {
            println!("psi: {psi}");
        }
        if let Some((m1, m2)) = &v.witnesses {
            println!("# model of psi\n{m1}# model of ~psi\n{m2}");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Answer {
    let prover = Prover::shared();
    match cli.command {
        Command::Parse { formula: text } => {
            let f = formula(&text)?;
            println!("{f}");
            println!(
                "depth {} size {} vars {}",
                f.modal_depth(),
                f.size(),
                f.vars()
            );
            Ok(true)
        }
        Command::Sat {
            logic,
            model,
            json,
            formula: text,
        } => {
            let f = formula(&text)?;
            let found = prover.model(logic.logic, [&f])?;
            if json {
                let mut out = serde_json::json!({ "satisfiable": found.is_some() });
                if let (true, Some(m)) = (model, &found) {
                    out["model"] = serde_json::to_value(m)?;
                }
                println!("{out}");
            } else {
                yes_no(found.is_some(), "satisfiable", "unsatisfiable");
                if let (true, Some(m)) = (model, &found) {
                    print!("{m}");
                }
            }
            Ok(found.is_some())
        }
        Command::Prove {
            logic,
            json,
            formula: text,
        } => {
            let f = formula(&text)?;
            let proved = prover.provable(logic.logic, &f)?;
            if json {
                println!("{}", serde_json::json!({ "provable": proved }));
                Ok(proved)
            } else {
                Ok(yes_no(proved, "provable", "not provable"))
            }
        }
        Command::Complete {
            logic,
            witness,
            up_to_depth,
            require_sat,
            wrt_model,
            json,
            formula: text,
        } => {
            let (l, f) = (logic.logic, formula(&text)?);
            if up_to_depth {
                if l != Logic::K {
                    return Err(Failure(format!(
                        "--up-to-depth is only available for K, not {l}"
                    )));
                }
                let answer = complete_up_to_depth(&f)?;
                if json {
                    println!("{}", serde_json::json!({ "complete_up_to_depth": answer }));
                    return Ok(answer);
                }
                return Ok(yes_no(
                    answer,
                    "complete up to depth",
                    "not complete up to depth",
                ));
            }
            if require_sat {
                let answer = satisfiable_and_complete(l, &f)?;
                if json {
                    println!(
                        "{}",
                        serde_json::json!({ "satisfiable_and_complete": answer })
                    );
                    return Ok(answer);
                }
                return Ok(yes_no(
                    answer,
                    "satisfiable and complete",
                    "not satisfiable and complete",
                ));
            }
            let mut v = match wrt_model {
                Some(path) => complete_wrt_model(l, &model(&path)?, &f)?,
                None => complete_with(l, &f, CompletenessOptions { witnesses: witness })?,
            };
            if !witness {
                v.witnesses = None;
            }
            print_verdict(&v, witness, json)?;
            Ok(v.is_complete())
        }
        Command::Bisim {
            first,
            second,
            vars,
        } => {
            let (a, b) = (model(&first)?, model(&second)?);
            let vars: VarSet = match vars {
                Some(list) => list
                    .iter()
                    .map(|s| s.trim())
                    .filter(|s| !s.is_empty())
                    .collect(),
                None => a.vars().union(&b.vars()),
            };
            let same = bisimilar(&a, &b, &vars);
            yes_no(same, "bisimilar", "not bisimilar");
            if let Some(psi) = distinguishing_formula(&a, &b, &vars) {
                println!("distinguished by: {psi}");
            }
            Ok(same)
        }
        Command::Check {
            model: path,
            formula: text,
        } => {
            let (m, f) = (model(&path)?, formula(&text)?);
            Ok(yes_no(m.check(&f), "true", "false"))
        }
        Command::Nf { formula: text } => {
            let f = formula(&text)?;
            let vars = f.vars();
            let forms = normal_forms_of(&f)?;
            for nf in &forms {
                println!("{}", nf.to_formula(&vars));
            }
            eprintln!(
                "{} normal forms of depth {} over {vars}",
                forms.len(),
                f.modal_depth()
            );
            Ok(true)
        }
        Command::Reduce {
            logic,
            depth,
            formula: text,
        } => {
            let f = formula(&text)?;
            let out = match depth {
                Some(d) => reduction_up_to_depth(logic.logic, &f, d)?,
                None => hardness_reduction(logic.logic, &f)?,
            };
            println!("{out}");
            Ok(true)
        }
        Command::Oracle(cmd) => oracle(cmd),
    }
}

fn oracle(cmd: OracleCommand) -> Answer {
    match cmd {
        OracleCommand::Sat {
            logic,
            states,
            formula: text,
        } => {
            let f = formula(&text)?;
            let found = brute_sat(logic.logic, &f, states)?;
            Ok(yes_no(found, "satisfiable", "no model within budget"))
        }
        OracleCommand::Incomplete {
            logic,
            states,
            formula: text,
        } => {
            let f = formula(&text)?;
            match brute_incomplete(logic.logic, &f, states)? {
                Some((m1, m2)) => {
                    println!("incomplete\n# first model\n{m1}# second model\n{m2}");
                    Ok(true)
                }
                None => {
                    println!("no witness pair within budget");
                    Ok(false)
                }
            }
        }
        OracleCommand::Models {
            logic,
            states,
            vars,
            no_prune,
            list,
        } => {
            let vars: VarSet = vars
                .iter()
                .map(|s| s.trim())
                .filter(|s| !s.is_empty())
                .collect();
            let models = enumerate_models(logic.logic, &ModelBudget::new(states, vars), !no_prune)?;
            if list {
                for m in &models {
                    println!("{m}");
                }
            }
            println!("{} models", models.len());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
