//! Command-line front end.
//!
//! Results go to stdout, diagnostics to stderr. Exit codes: 0 success,
//! 1 property failure or inconclusive search, 2 parse or validation error.

use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cones::{
    Cone, ConeError, FactorWitness, Irreducibility, MonoidSpec, DEFAULT_MAX_RADIUS,
};
use crate::lattice::GroupElement;
use crate::power::{
    element_to_json, format_set, normalize_shift_bruteforce, normalize_shift_inductive,
    transport_with_shift, FinSubset, PowmonError,
};
use crate::verify::{verify, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Parser)]
#[command(
    name = "powmon",
    version,
    about = "Reduced finitary power monoids over valuation submonoids of Z²"
)]
pub struct Cli {
    /// Emit a JSON object {command, inputs, result, elapsed_ms} instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Inductive,
    Brute,
    Both,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Inductive => "inductive",
            Algo::Brute => "brute",
            Algo::Both => "both",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Membership test.
    Member {
        #[arg(short = 'm', long = "monoid")]
        monoid: MonoidSpec,
        #[arg(short = 'g', long = "element", allow_hyphen_values = true)]
        element: GroupElement,
    },
    /// Setwise sum of two sets.
    Mul {
        #[arg(short = 'X')]
        x: FinSubset,
        #[arg(short = 'Y')]
        y: FinSubset,
    },
    /// The unique shift moving a set into the monoid.
    Normalize {
        #[arg(short = 'm', long = "monoid")]
        monoid: MonoidSpec,
        #[arg(short = 'X')]
        x: FinSubset,
        #[arg(long, value_enum, default_value_t = Algo::Both)]
        algo: Algo,
    },
    /// Image of a set under the isomorphism between the two power monoids.
    Transport {
        #[arg(long)]
        from: MonoidSpec,
        #[arg(long)]
        to: MonoidSpec,
        #[arg(short = 'X')]
        x: FinSubset,
    },
    /// Nontrivial factorization witness, or IRREDUCIBLE / UNIT.
    Factor {
        #[arg(short = 'm', long = "monoid")]
        monoid: MonoidSpec,
        #[arg(short = 'g', long = "element", allow_hyphen_values = true)]
        element: GroupElement,
        #[arg(long, default_value_t = DEFAULT_MAX_RADIUS)]
        max_radius: u64,
    },
    /// Irreducible members inside the box [-B, B]².
    Atoms {
        #[arg(short = 'm', long = "monoid")]
        monoid: MonoidSpec,
        #[arg(long = "box")]
        bound: u32,
        #[arg(long)]
        witnesses: bool,
    },
    /// Seeded property checks of the isomorphism.
    Verify {
        #[arg(long)]
        from: MonoidSpec,
        #[arg(long)]
        to: MonoidSpec,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, env = "POWMON_SEED", default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        size_bound: usize,
        #[arg(long, default_value_t = 50)]
        coord_bound: i64,
    },
}

impl Cli {
    /// Arguments (without the program name) that parse back to `self`.
    pub fn to_args(&self) -> Vec<String> {
        let mut a: Vec<String> = Vec::new();
        let mut push = |parts: &[&str]| a.extend(parts.iter().map(|s| s.to_string()));
        match &self.command {
            Command::Member { monoid, element } => push(&[
                "member",
                "-m",
                &monoid.to_string(),
                "-g",
                &element.to_string(),
            ]),
            Command::Mul { x, y } => push(&["mul", "-X", &x.to_string(), "-Y", &y.to_string()]),
            Command::Normalize { monoid, x, algo } => push(&[
                "normalize",
                "-m",
                &monoid.to_string(),
                "-X",
                &x.to_string(),
                "--algo",
                algo.name(),
            ]),
            Command::Transport { from, to, x } => push(&[
                "transport",
                "--from",
                &from.to_string(),
                "--to",
                &to.to_string(),
                "-X",
                &x.to_string(),
            ]),
            Command::Factor {
                monoid,
                element,
                max_radius,
            } => push(&[
                "factor",
                "-m",
                &monoid.to_string(),
                "-g",
                &element.to_string(),
                "--max-radius",
                &max_radius.to_string(),
            ]),
            Command::Atoms {
                monoid,
                bound,
                witnesses,
            } => {
                push(&[
                    "atoms",
                    "-m",
                    &monoid.to_string(),
                    "--box",
                    &bound.to_string(),
                ]);
                if *witnesses {
                    push(&["--witnesses"]);
                }
            }
            Command::Verify {
                from,
                to,
                trials,
                seed,
                size_bound,
                coord_bound,
            } => push(&[
                "verify",
                "--from",
                &from.to_string(),
                "--to",
                &to.to_string(),
                "--trials",
                &trials.to_string(),
                "--seed",
                &seed.to_string(),
                "--size-bound",
                &size_bound.to_string(),
                "--coord-bound",
                &coord_bound.to_string(),
            ]),
        }
        if self.json {
            a.push("--json".to_string());
        }
        a
    }
}

/// What a command produced: text lines, a JSON payload, and an exit code.
struct Outcome {
    text: String,
    inputs: Value,
    result: Value,
    code: i32,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<PowmonError> for Failure {
    fn from(e: PowmonError) -> Self {
        let code = match e {
            PowmonError::NotInSourceMonoid(_)
            | PowmonError::MissingIdentity
            | PowmonError::Parse(_)
            | PowmonError::Json(_)
            | PowmonError::InvalidBounds => EXIT_USAGE,
            _ => EXIT_FAILURE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ConeError> for Failure {
    fn from(e: ConeError) -> Self {
        let code = match e {
            ConeError::SearchExhausted { .. } => EXIT_FAILURE,
            ConeError::NotAMember { .. } | ConeError::Identity => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn witness_json(w: &FactorWitness) -> Value {
    json!([element_to_json(&w.g1), element_to_json(&w.g2)])
}

fn elements_json(elems: &[GroupElement]) -> Value {
    Value::Array(elems.iter().map(element_to_json).collect())
}

fn execute(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Member { monoid, element } => {
            let member = monoid.contains(element);
            Ok(Outcome {
                text: member.to_string(),
                inputs: json!({"monoid": monoid.to_string(), "element": element_to_json(element)}),
                result: json!({ "member": member }),
                code: EXIT_OK,
            })
        }
        Command::Mul { x, y } => {
            let p = x.product(y);
            Ok(Outcome {
                text: p.to_string(),
                inputs: json!({"X": x.to_json(), "Y": y.to_json()}),
                result: json!({ "set": p.to_json() }),
                code: EXIT_OK,
            })
        }
        Command::Normalize { monoid, x, algo } => {
            let r = match algo {
                Algo::Inductive => normalize_shift_inductive(monoid, x)?,
                Algo::Brute => normalize_shift_bruteforce(monoid, x)?,
                Algo::Both => {
                    let a = normalize_shift_inductive(monoid, x)?;
                    let b = normalize_shift_bruteforce(monoid, x)?;
                    if a != b {
                        return Err(Failure {
                            code: EXIT_FAILURE,
                            message: format!(
                                "normalizations disagree: inductive {} vs brute force {}",
                                a.shift, b.shift
                            ),
                        });
                    }
                    a
                }
            };
            Ok(Outcome {
                text: format!("shift={} normalized={}", r.shift, r.normalized),
                inputs: json!({"monoid": monoid.to_string(), "X": x.to_json(), "algo": algo.name()}),
                result: json!({"shift": element_to_json(&r.shift), "normalized": r.normalized.to_json()}),
                code: EXIT_OK,
            })
        }
        Command::Transport { from, to, x } => {
            let r = transport_with_shift(from, to, x)?;
            Ok(Outcome {
                text: format!("shift={} image={}", r.shift, r.normalized),
                inputs: json!({"from": from.to_string(), "to": to.to_string(), "X": x.to_json()}),
                result: json!({"shift": element_to_json(&r.shift), "image": r.normalized.to_json()}),
                code: EXIT_OK,
            })
        }
        Command::Factor {
            monoid,
            element,
            max_radius,
        } => {
            let inputs = json!({
                "monoid": monoid.to_string(),
                "element": element_to_json(element),
                "max_radius": max_radius,
            });
            let (text, result) = match monoid.is_irreducible_within(element, *max_radius)? {
                Irreducibility::Unit => (
                    "UNIT".to_string(),
                    json!({"status": "unit", "witness": null}),
                ),
                Irreducibility::Irreducible => (
                    "IRREDUCIBLE".to_string(),
                    json!({"status": "irreducible", "witness": null}),
                ),
                Irreducibility::Reducible(w) => (
                    w.to_string(),
                    json!({"status": "reducible", "witness": witness_json(&w)}),
                ),
            };
            Ok(Outcome {
                text,
                inputs,
                result,
                code: EXIT_OK,
            })
        }
        Command::Atoms {
            monoid,
            bound,
            witnesses,
        } => scan_atoms(monoid, *bound, *witnesses),
        Command::Verify {
            from,
            to,
            trials,
            seed,
            size_bound,
            coord_bound,
        } => {
            let cfg = VerifyConfig {
                trials: *trials,
                seed: *seed,
                size_bound: *size_bound,
                coord_bound: *coord_bound,
            };
            let report = verify(from, to, &cfg).map_err(|e| Failure {
                code: EXIT_USAGE,
                message: e.to_string(),
            })?;
            Ok(Outcome {
                text: report.to_string().trim_end().to_string(),
                inputs: json!({
                    "from": from.to_string(),
                    "to": to.to_string(),
                    "trials": trials,
                    "seed": seed,
                    "size_bound": size_bound,
                    "coord_bound": coord_bound,
                }),
                result: serde_json::to_value(&report).expect("report serializes"),
                code: if report.passed() {
                    EXIT_OK
                } else {
                    EXIT_FAILURE
                },
            })
        }
    }
}

fn scan_atoms(monoid: &MonoidSpec, bound: u32, witnesses: bool) -> Result<Outcome, Failure> {
    let b = i64::from(bound);
    let mut atoms = Vec::new();
    let mut reducible = Vec::new();
    let mut scanned = 0u64;
    let mut units = 0u64;
    for x in -b..=b {
        for y in -b..=b {
            let g = GroupElement::new(x, y);
            if !monoid.contains(&g) {
                continue;
            }
            scanned += 1;
            match monoid.is_irreducible(&g)? {
                Irreducibility::Unit => units += 1,
                Irreducibility::Irreducible => atoms.push(g),
                Irreducibility::Reducible(w) => reducible.push((g, w)),
            }
        }
    }
    let mut text = format!(
        "atoms={} scanned={} units={} reducible={}",
        format_set(&atoms),
        scanned,
        units,
        reducible.len()
    );
    let mut result = json!({
        "atoms": elements_json(&atoms),
        "scanned": scanned,
        "units": units,
        "reducible": reducible.len(),
    });
    if witnesses {
        for (g, w) in &reducible {
            text.push_str(&format!("\n{g} = {w}"));
        }
        result["witnesses"] = Value::Array(
            reducible
                .iter()
                .map(|(g, w)| json!({"element": element_to_json(g), "witness": witness_json(w)}))
                .collect(),
        );
    }
    Ok(Outcome {
        text,
        inputs: json!({"monoid": monoid.to_string(), "box": bound, "witnesses": witnesses}),
        result,
        code: EXIT_OK,
    })
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Member { .. } => "member",
        Command::Mul { .. } => "mul",
        Command::Normalize { .. } => "normalize",
        Command::Transport { .. } => "transport",
        Command::Factor { .. } => "factor",
        Command::Atoms { .. } => "atoms",
        Command::Verify { .. } => "verify",
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let start = Instant::now();
    match execute(&cli.command) {
        Ok(o) => {
            if cli.json {
                let doc = json!({
                    "command": command_name(&cli.command),
                    "inputs": o.inputs,
                    "result": o.result,
                    "elapsed_ms": start.elapsed().as_secs_f64() * 1000.0,
                });
                let _ = writeln!(out, "{doc}");
            } else {
                let _ = writeln!(out, "{}", o.text);
            }
            o.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
