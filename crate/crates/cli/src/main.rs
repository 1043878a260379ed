use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use itl::countermodel::{countermodel, countermodel_failure, model_to_dot, model_to_json, KripkeModel};
use itl::oracle::{brute_force_validity, BoundedSearchResult};
use itl::proof::{check_proof, extract_proof, proof_to_json, Proof};
use itl::prover::{prove_with, ProverConfig, DEFAULT_BUDGET};
use itl::{Error, Formula, Logic, SeqTree, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Dot,
}

/// Decides intuitionistic tense logics and prints a checked proof or
/// counter-model.
#[derive(Debug, Parser)]
#[command(name = "itlprove", version)]
struct Args {
    /// Formula, or nested sequent with --sequent.
    input: String,
    /// Frame conditions as letters from TBD, e.g. "TB"; empty for the base logic.
    #[arg(long, default_value = "")]
    logic: String,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Print one line per computation-tree node.
    #[arg(long)]
    trace: bool,
    /// Maximum number of computation-tree nodes.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Also search all models with up to this many worlds (at most 4).
    #[arg(long)]
    oracle_bound: Option<usize>,
    /// Read the input as a nested sequent instead of a formula.
    #[arg(long)]
    sequent: bool,
    /// Threads for exploring disjunctive branches.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

enum Certificate {
    Proof(Proof),
    Model(KripkeModel),
}

struct Outcome {
    verdict: Verdict,
    certificate: Certificate,
    oracle: Option<BoundedSearchResult>,
}

#[derive(Debug)]
enum Failure {
    Usage(Error),
    Defect(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e)
    }
}

fn run(args: &Args) -> Result<Outcome, Failure> {
    let logic: Logic = args.logic.parse()?;
    let (input, formula) = if args.sequent {
        (SeqTree::parse(&args.input)?, None)
    } else {
        let a = Formula::parse(&args.input)?;
        (SeqTree::from_formula(a.clone()), Some(a))
    };
    let oracle = match args.oracle_bound {
        None => None,
        Some(bound) => {
            let a = formula.as_ref().ok_or_else(|| {
                Error::Precondition("the oracle cross-check needs formula input".into())
            })?;
            Some(brute_force_validity(a, logic, bound)?)
        }
    };
    let config = ProverConfig {
        budget: args.budget,
        workers: args.workers.max(1),
    };
    let verdict = prove_with(&input, logic, &config)?;
    let certificate = if verdict.provable {
        let proof = extract_proof(&verdict)?;
        check_proof(&proof, logic).map_err(|e| Failure::Defect(format!("proof checker rejected the extracted proof: {e}")))?;
        Certificate::Proof(proof)
    } else {
        let (bp, model) = countermodel(&verdict)?;
        if let Some(why) = countermodel_failure(&model, &bp, verdict.input()) {
            return Err(Failure::Defect(format!("model checker rejected the extracted model: {why}")));
        }
        Certificate::Model(model)
    };
    if verdict.provable && oracle.as_ref().is_some_and(BoundedSearchResult::is_invalid) {
        return Err(Failure::Defect("the oracle refutes a formula the prover proved".into()));
    }
    Ok(Outcome {
        verdict,
        certificate,
        oracle,
    })
}

fn oracle_json(r: &BoundedSearchResult) -> Value {
    match r {
        BoundedSearchResult::Invalid { model, witness } => json!({
            "outcome": "invalid",
            "witness": witness,
            "model": serde_json::from_str::<Value>(&model_to_json(model)).expect("model JSON"),
        }),
        BoundedSearchResult::NoCounterModelUpTo(b) => json!({ "outcome": "no_countermodel", "bound": b }),
    }
}

fn proof_to_dot(p: &Proof) -> String {
    let mut s = String::from("digraph proof {\n  rankdir=BT;\n");
    for (i, n) in p.nodes.iter().enumerate() {
        let label = format!("{}\\n{}", n.rule, n.sequent).replace('"', "\\\"");
        s.push_str(&format!("  n{i} [shape=box, label=\"{label}\"];\n"));
        for c in &n.children {
            s.push_str(&format!("  n{c} -> n{i};\n"));
        }
    }
    s.push_str("}\n");
    s
}

fn render(args: &Args, o: &Outcome) -> String {
    let v = &o.verdict;
    match args.format {
        Format::Json => {
            let mut out = json!({
                "logic": v.logic.to_string(),
                "input": v.input().to_string(),
                "provable": v.provable,
                "nodes": v.tree.len(),
            });
            match &o.certificate {
                Certificate::Proof(p) => {
                    out["proof"] = serde_json::from_str(&proof_to_json(p)).expect("proof JSON");
                    out["checked"] = json!(true);
                }
                Certificate::Model(m) => {
                    out["model"] = serde_json::from_str(&model_to_json(m)).expect("model JSON");
                    out["checked"] = json!(true);
                }
            }
            if let Some(r) = &o.oracle {
                out["oracle"] = oracle_json(r);
            }
            serde_json::to_string_pretty(&out).expect("JSON output") + "\n"
        }
        Format::Dot => match &o.certificate {
            Certificate::Proof(p) => proof_to_dot(p),
            Certificate::Model(m) => model_to_dot(m),
        },
        Format::Human => {
            let logic = if v.logic == Logic::K { "IK_t".to_string() } else { format!("IK_t{}", v.logic) };
            let mut s = format!("{}: {} in {logic}\n", v.input(), if v.provable { "provable" } else { "not provable" });
            s.push_str(&format!("computation tree: {} nodes, {} repeats\n", v.tree.len(), v.repeats.len()));
            match &o.certificate {
                Certificate::Proof(p) => {
                    s.push_str(&format!("proof ({} rules, checked):\n", p.len()));
                    s.push_str(&p.to_text());
                }
                Certificate::Model(m) => {
                    s.push_str(&format!("counter-model ({} worlds, checked):\n", m.len()));
                    for (i, w) in m.worlds.iter().enumerate() {
                        let atoms: Vec<&str> = m.valuation[i].iter().map(String::as_str).collect();
                        let up: Vec<String> = m
                            .leq
                            .iter()
                            .filter(|&&(a, b)| a == i && b != i)
                            .map(|&(_, b)| m.worlds[b].to_string())
                            .collect();
                        let r: Vec<String> = m.r.iter().filter(|&&(a, _)| a == i).map(|&(_, b)| m.worlds[b].to_string()).collect();
                        s.push_str(&format!(
                            "  {w}: V={{{}}} ≤ {{{}}} R {{{}}}\n",
                            atoms.join(", "),
                            up.join(", "),
                            r.join(", ")
                        ));
                    }
                }
            }
            if !s.ends_with('\n') {
                s.push('\n');
            }
            match &o.oracle {
                Some(BoundedSearchResult::Invalid { model, witness }) => {
                    s.push_str(&format!("oracle: refuted at {witness} in a {}-world model\n", model.len()));
                }
                Some(BoundedSearchResult::NoCounterModelUpTo(b)) => {
                    s.push_str(&format!("oracle: no counter-model with at most {b} worlds\n"));
                }
                None => {}
            }
            s
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let handle = std::thread::Builder::new()
        .stack_size(512 << 20)
        .spawn(move || {
            let result = run(&args);
            (args, result)
        })
        .expect("spawn prover thread");
    let (args, result) = handle.join().expect("prover thread panicked");
    match result {
        Ok(o) => {
            if args.trace {
                let lines = o.verdict.tree.trace_lines().join("\n") + "\n";
                if args.format == Format::Human {
                    print!("{lines}");
                } else {
                    eprint!("{lines}");
                }
            }
            print!("{}", render(&args, &o));
            if o.verdict.provable {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Defect(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}
