//! Command-line front end for the monogenic free inverse semigroup toolkit.
//!
//! Output is JSON on stdout, diagnostics on stderr. Exit codes: 0 success,
//! 1 negative verdict (non-member, distinct words, not finitely generated,
//! violated probe invariant), 2 usage or input error, 3 engine error
//! (search cap exceeded, certification failure, undecided verdict).

use clap::{Parser, Subcommand, ValueEnum};
use fi1::error::Fi1Error;
use fi1::presentations::{
    amalgam_presentation, conjugation_presentation, fi1_probe_instance, BuiltPresentation,
    SymbolTable,
};
use fi1::stephen::{
    idempotent_label_probe, stephen_limit, words_equal, Presentation, ProbeInstance, Verdict,
};
use fi1::subsemigroup::{
    bounded_closure, finite_generators_with_box, idempotent_semilattice, is_finitely_generated,
    member, rclass_slice, sbar_complement, structure_params, SbarComplement, SubsemigroupSpec,
};
use fi1::triple::canonical_form;
use fi1::{IdemPoint, Triple, Word};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::collections::BTreeMap;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fi1",
    version,
    about = "Exact computation in the monogenic free inverse semigroup"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical form of a word over a one-letter alphabet.
    Canon { word: String },
    /// Product of two triples, e.g. "(-1,2,3)" "(0,1,1)".
    Mul { left: String, right: String },
    /// Inverse of a triple.
    Inv { triple: String },
    /// Natural-partial-order test: is the left triple below the right one?
    Leq { left: String, right: String },
    /// R-class and D-index of a triple.
    Green { triple: String },
    /// Membership of a triple in the subsemigroup given by a spec file.
    Member { spec: String, triple: String },
    /// All elements of the subsemigroup with D-index at most the bound.
    Closure {
        spec: String,
        #[arg(long = "max-d")]
        max_d: u64,
    },
    /// Structure parameters: extremal reaches, displacement gcd, witnesses.
    Params { spec: String },
    /// Certified description of the idempotent semilattice.
    Es {
        spec: String,
        #[arg(long = "box")]
        box_side: u64,
    },
    /// Finite generating data: semilattice covering witnesses plus the
    /// low-D-index slice.
    Gens {
        spec: String,
        #[arg(long = "box")]
        box_side: Option<u64>,
    },
    /// Finite generation test.
    Fg {
        spec: String,
        #[arg(long = "box")]
        box_side: u64,
    },
    /// One R-class of the subsemigroup built from its idempotent and the
    /// structure witnesses.
    Rab { spec: String, a: u64, b: u64 },
    /// Bounded run of Stephen's procedure on a word.
    Stephen {
        word: String,
        #[arg(long)]
        pres: Option<String>,
        #[arg(long, default_value_t = 8)]
        rounds: u64,
        #[arg(long)]
        dot: bool,
    },
    /// Word equality under a presentation (defaults to no relations).
    Eq {
        left: String,
        right: String,
        #[arg(long)]
        pres: Option<String>,
        #[arg(long, default_value_t = 8)]
        rounds: u64,
    },
    /// Presentation builders.
    Present {
        #[arg(value_enum)]
        kind: PresentKind,
        spec: String,
        #[arg(long = "box")]
        box_side: u64,
        /// Presentation of the non-idempotent part (JSON, may carry an
        /// "assignment" of letters to triples). Defaults to the free
        /// presentation over the generator letters.
        #[arg(long = "sbar-pres")]
        sbar_pres: Option<String>,
        #[arg(long)]
        report: bool,
    },
    /// Idempotent-label probe over a probe-instance file.
    ProbeC {
        instance: Option<String>,
        #[arg(long, default_value_t = 8)]
        rounds: u64,
        /// Emit the standard desk instance for the given Cayley box instead
        /// of running (f=(1,1), g=(2,2), probe word y'y'yyyyy'y').
        #[arg(long = "emit-fixture")]
        emit_fixture: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PresentKind {
    Amalgam,
    Conj,
}

/// Presentation file format: relations in surface syntax, plus an optional
/// assignment of letters to triples for validation and elimination.
#[derive(Serialize, Deserialize)]
struct PresentationFile {
    alphabet: Vec<String>,
    relations: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    assignment: Option<BTreeMap<String, Triple>>,
}

#[derive(Serialize, Deserialize)]
struct ProbeFile {
    pres: Presentation,
    idempotent_labels: BTreeMap<String, IdemPoint>,
    f: IdemPoint,
    g: IdemPoint,
    w: String,
}

enum CliError {
    Usage(String),
    Engine(String),
}

impl From<Fi1Error> for CliError {
    fn from(e: Fi1Error) -> Self {
        match e {
            Fi1Error::BoxTooSmall { .. }
            | Fi1Error::CertificationFailed(..)
            | Fi1Error::DeepeningCapExceeded(..)
            | Fi1Error::MissingSymbol(..)
            | Fi1Error::NotInSbar(..)
            | Fi1Error::NoDefiningWord(..)
            | Fi1Error::IdempotentInput(..)
            | Fi1Error::EmptyGenerators => CliError::Engine(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn usage<T: std::fmt::Display>(e: T) -> CliError {
    CliError::Usage(e.to_string())
}

type CliResult = Result<ExitCode, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Engine(msg)) => {
            eprintln!("engine error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn load_text(arg: &str) -> Result<String, CliError> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| usage(format!("{arg}: {e}")))
    }
}

fn load_spec(arg: &str) -> Result<SubsemigroupSpec, CliError> {
    serde_json::from_str(&load_text(arg)?).map_err(usage)
}

fn load_presentation(arg: &str) -> Result<(Presentation, BTreeMap<String, Triple>), CliError> {
    let file: PresentationFile = serde_json::from_str(&load_text(arg)?).map_err(usage)?;
    let rendered = serde_json::to_string(&json!({
        "alphabet": file.alphabet,
        "relations": file.relations,
    }))
    .expect("serializable");
    let pres: Presentation = serde_json::from_str(&rendered).map_err(usage)?;
    Ok((pres, file.assignment.unwrap_or_default()))
}

fn parse_triple(s: &str) -> Result<Triple, CliError> {
    s.parse::<Triple>().map_err(CliError::from)
}

fn parse_word(s: &str) -> Result<Word, CliError> {
    Word::parse(s).map_err(CliError::from)
}

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

fn free_presentation_for(words: &[&Word]) -> Presentation {
    let mut alphabet: Vec<String> = Vec::new();
    for w in words {
        for name in w.alphabet() {
            if !alphabet.contains(name) {
                alphabet.push(name.clone());
            }
        }
    }
    Presentation::free(alphabet)
}

fn triple_json(t: &Triple) -> serde_json::Value {
    json!({ "triple": t, "display": t.to_string() })
}

fn run(cmd: Command) -> CliResult {
    match cmd {
        Command::Canon { word } => {
            let w = parse_word(&word)?;
            if w.alphabet().len() != 1 {
                return Err(usage("canon expects a word over a single letter"));
            }
            let t = canonical_form(&w)?;
            print_json(&triple_json(&t));
            Ok(ExitCode::SUCCESS)
        }
        Command::Mul { left, right } => {
            let t = parse_triple(&left)?.mul(&parse_triple(&right)?);
            print_json(&triple_json(&t));
            Ok(ExitCode::SUCCESS)
        }
        Command::Inv { triple } => {
            let t = parse_triple(&triple)?.inv();
            print_json(&triple_json(&t));
            Ok(ExitCode::SUCCESS)
        }
        Command::Leq { left, right } => {
            let holds = parse_triple(&left)?.leq(&parse_triple(&right)?);
            print_json(&json!({ "leq": holds }));
            Ok(if holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Green { triple } => {
            let g = parse_triple(&triple)?.green();
            print_json(&json!({ "rclass": [g.rclass.0, g.rclass.1], "dindex": g.dindex }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Member { spec, triple } => {
            let spec = load_spec(&spec)?;
            let t = parse_triple(&triple)?;
            let verdict = member(&spec, &t);
            print_json(&json!({ "member": verdict, "triple": t }));
            Ok(if verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Closure { spec, max_d } => {
            let spec = load_spec(&spec)?;
            let elems = bounded_closure(&spec, max_d);
            print_json(&json!({
                "max_d": max_d,
                "count": elems.len(),
                "elements": elems.iter().collect::<Vec<_>>(),
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Params { spec } => {
            let spec = load_spec(&spec)?;
            let params = structure_params(&spec)?;
            print_json(&serde_json::to_value(params).expect("serializable"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Es { spec, box_side } => {
            let spec = load_spec(&spec)?;
            let es = idempotent_semilattice(&spec, box_side)?;
            print_json(&serde_json::to_value(es).expect("serializable"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Gens { spec, box_side } => {
            let spec = load_spec(&spec)?;
            let out = match box_side {
                Some(b) => finite_generators_with_box(&spec, b)?,
                None => fi1::subsemigroup::finite_generators(&spec)?,
            };
            print_json(&serde_json::to_value(&out).expect("serializable"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Fg { spec, box_side } => {
            let spec = load_spec(&spec)?;
            let fg = is_finitely_generated(&spec, box_side)?;
            let witness = match sbar_complement(&spec, box_side)? {
                SbarComplement::Finite(pts) => json!({
                    "kind": "finite",
                    "elements": pts.iter().collect::<Vec<_>>(),
                }),
                SbarComplement::Infinite(fam) => json!({
                    "kind": "infinite",
                    "family": fam,
                }),
            };
            print_json(&json!({ "finitely_generated": fg, "witness": witness }));
            Ok(if fg {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Rab { spec, a, b } => {
            let spec = load_spec(&spec)?;
            let params = structure_params(&spec)?;
            let elems = rclass_slice(&spec, &params, a, b)?;
            print_json(&json!({
                "rclass": [a, b],
                "count": elems.len(),
                "elements": elems,
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Stephen {
            word,
            pres,
            rounds,
            dot,
        } => {
            let w = parse_word(&word)?;
            let presentation = match &pres {
                Some(p) => load_presentation(p)?.0,
                None => free_presentation_for(&[&w]),
            };
            let res = stephen_limit(&w, &presentation, rounds);
            if dot {
                print!("{}", res.graph.to_dot());
            } else {
                print_json(&json!({
                    "converged": res.converged,
                    "rounds_run": res.rounds_run,
                    "vertices": res.graph.vertex_count(),
                    "edges": res.graph.edge_count(),
                }));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Eq {
            left,
            right,
            pres,
            rounds,
        } => {
            let w = parse_word(&left)?;
            let v = parse_word(&right)?;
            let presentation = match &pres {
                Some(p) => load_presentation(p)?.0,
                None => free_presentation_for(&[&w, &v]),
            };
            let verdict = words_equal(&presentation, &w, &v, rounds);
            print_json(&json!({ "verdict": verdict }));
            Ok(match verdict {
                Verdict::Equal => ExitCode::SUCCESS,
                Verdict::Distinct => ExitCode::FAILURE,
                Verdict::Unknown => ExitCode::from(3),
            })
        }
        Command::Present {
            kind,
            spec,
            box_side,
            sbar_pres,
            report,
        } => {
            let spec = load_spec(&spec)?;
            let (sbar, assignment) = match &sbar_pres {
                Some(p) => load_presentation(p)?,
                None => {
                    let sym = SymbolTable::for_spec(&spec, box_side);
                    (Presentation::free(sym.a_letters()), BTreeMap::new())
                }
            };
            let built: BuiltPresentation = match kind {
                PresentKind::Amalgam => amalgam_presentation(&spec, &sbar, box_side)?,
                PresentKind::Conj => conjugation_presentation(&spec, &sbar, &assignment, box_side)?,
            };
            let mut out = json!({
                "presentation": built.presentation,
            });
            if report {
                let families: Vec<serde_json::Value> = built
                    .families
                    .iter()
                    .map(|f| {
                        json!({
                            "kind": f.kind,
                            "count": f.pairs.len(),
                            "truncation": f.truncation,
                        })
                    })
                    .collect();
                out["report"] = json!(families);
            }
            print_json(&out);
            Ok(ExitCode::SUCCESS)
        }
        Command::ProbeC {
            instance,
            rounds,
            emit_fixture,
        } => {
            if let Some(box_side) = emit_fixture {
                let w = Word::parse("y' y' y y y y y' y'").expect("fixture word");
                let inst = fi1_probe_instance(
                    box_side,
                    IdemPoint::new(1, 1).expect("valid"),
                    IdemPoint::new(2, 2).expect("valid"),
                    &w,
                )?;
                let file = ProbeFile {
                    pres: inst.pres,
                    idempotent_labels: inst.idempotent_labels,
                    f: inst.f,
                    g: inst.g,
                    w: inst.w.to_string(),
                };
                print_json(&serde_json::to_value(&file).expect("serializable"));
                return Ok(ExitCode::SUCCESS);
            }
            let path = instance.ok_or_else(|| usage("probe-c needs an instance file"))?;
            let file: ProbeFile = serde_json::from_str(&load_text(&path)?).map_err(usage)?;
            let inst = ProbeInstance {
                pres: file.pres,
                idempotent_labels: file.idempotent_labels,
                f: file.f,
                g: file.g,
                w: parse_word(&file.w)?,
            };
            let report = idempotent_label_probe(&inst, rounds);
            let invariant_holds = !report.g_label_seen && report.all_labels_above_f;
            print_json(&serde_json::to_value(&report).expect("serializable"));
            Ok(if invariant_holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}
