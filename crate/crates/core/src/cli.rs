//! Command-line front end. Every subcommand prints one JSON document.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::coxeter::{self, CoxeterScheme, ThinVerdict};
use crate::engine::{BasepointRule, VinbergConfig, VinbergState};
use crate::error::{Error, Result};
use crate::lattice::{LatticeIsometry, QuadraticLattice, Root};
use crate::linalg::{self, IntMatrix, SymmetricIntMatrix};
use crate::sieve::{self, NormOutcome, RootsVerdict, SieveConfig};
use crate::symmetry::{self, InfiniteWitness, OrderClass};

pub const MAX_WEIGHT_VAR: &str = "VINBERG_MAX_WEIGHT";

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(
    name = "vinberg",
    version,
    about = "Vinberg algorithm and root certificates for Lorentzian lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Signature of the form; fails unless it is Lorentzian.
    Signature(LatticeArgs),
    /// Invariant factors of the Gram matrix and the root norm bound.
    Invariants(LatticeArgs),
    /// Runs the Vinberg algorithm and lists accepted roots.
    Roots(RunArgs),
    /// Coxeter scheme of a root list or of a run.
    Scheme(SchemeArgs),
    /// Thinness certificate for the reflections in the first roots of a run.
    ThinCheck(RunArgs),
    /// Sieve certificate for the absence of roots.
    NoRoots(NoRootsArgs),
    /// Reflection matrix of a root.
    Reflect(ReflectArgs),
    /// Isometries extending a pairing of roots, with their orders.
    Symmetry(SymmetryArgs),
}

#[derive(Args, Debug)]
struct LatticeArgs {
    /// Gram matrix: rows separated by ';', entries by ','.
    #[arg(
        long,
        allow_hyphen_values = true,
        conflicts_with = "form",
        required_unless_present = "form"
    )]
    gram: Option<String>,
    /// Polynomial coefficients, upper triangle by rows: "c00,c01,c02;c11,c12;c22".
    #[arg(long, allow_hyphen_values = true)]
    form: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RuleArg {
    Orthogonal,
    Shell,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    /// File with one root per line, entries separated by ','.
    #[arg(long)]
    seed_roots: Option<PathBuf>,
    /// Number of roots to accept, stage 0 and seeds included.
    #[arg(long, default_value_t = 16)]
    count: usize,
    /// Basepoint of negative norm, entries separated by ','.
    #[arg(long, allow_hyphen_values = true)]
    basepoint: Option<String>,
    #[arg(long, value_enum, default_value_t = RuleArg::Orthogonal)]
    basepoint_rule: RuleArg,
}

#[derive(Args, Debug)]
struct SchemeArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Use these roots as vertices instead of running the algorithm.
    #[arg(long, conflicts_with = "seed_roots")]
    roots: Option<PathBuf>,
    /// Write the scheme as a DOT graph to this path ('-' for standard output,
    /// which then replaces the JSON report).
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct NoRootsArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    #[arg(long, default_value_t = sieve::DEFAULT_SEARCH_RADIUS)]
    search_radius: u64,
}

#[derive(Args, Debug)]
struct ReflectArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    #[arg(long, allow_hyphen_values = true)]
    root: String,
}

#[derive(Args, Debug)]
struct SymmetryArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    /// A pair "a0,a1,...:b0,b1,..." of roots; repeatable.
    #[arg(long = "pair", allow_hyphen_values = true, required = true)]
    pairs: Vec<String>,
    #[arg(long, default_value_t = symmetry::DEFAULT_PAIRING_BOUND)]
    bound: u64,
}

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn report(code: i32, value: Value) -> Self {
        let mut stdout = serde_json::to_string_pretty(&value).expect("serialisable");
        stdout.push('\n');
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn failure(message: String) -> Self {
        Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

/// Parses `args` (program name first) and runs the subcommand. The weight cap
/// is read from `max_weight`, normally the value of [`MAX_WEIGHT_VAR`].
pub fn dispatch<I, T>(args: I, max_weight: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let ceiling = match max_weight.map(parse_weight).transpose() {
        Ok(c) => c,
        Err(e) => return Outcome::failure(format!("{MAX_WEIGHT_VAR}: {e}")),
    };
    match execute(cli.command, ceiling) {
        Ok(outcome) => outcome,
        Err(e) => Outcome::failure(e.to_string()),
    }
}

fn execute(command: Command, ceiling: Option<BigRational>) -> Result<Outcome> {
    match command {
        Command::Signature(args) => {
            let (lattice, input) = load_lattice(&args)?;
            let sig = lattice.signature();
            Ok(Outcome::report(
                0,
                envelope("signature", input, json!({}), json!(sig.as_array())),
            ))
        }
        Command::Invariants(args) => {
            let (lattice, input) = load_lattice(&args)?;
            let factors = linalg::invariant_factors(lattice.gram())?;
            let bound = sieve::norm_bound(&lattice);
            let candidates = sieve::root_norm_candidates(&lattice);
            let mut report = envelope("invariant_factors", input, json!({}), ints(&factors));
            report["norm_bound"] = int(&bound);
            report["root_norm_candidates"] = ints(&candidates);
            Ok(Outcome::report(0, report))
        }
        Command::Roots(args) => {
            let (lattice, input) = load_lattice(&args.lattice)?;
            let run = drive(&lattice, &args, ceiling)?;
            let roots: Vec<Value> = run
                .state
                .accepted()
                .iter()
                .map(|r| {
                    let w = run.state.weight(r);
                    json!({
                        "vector": ints(r.vector()),
                        "norm": int(r.norm()),
                        "weight_num": int(w.numer()),
                        "weight_den": int(w.denom()),
                    })
                })
                .collect();
            let report = envelope("roots", input, run.config_json(&args), json!(roots));
            Ok(Outcome::report(run.code(), report))
        }
        Command::Scheme(args) => {
            let (lattice, input) = load_lattice(&args.run.lattice)?;
            let (roots, config, code) = match &args.roots {
                Some(path) => {
                    let roots = read_roots(&lattice, path)?;
                    (
                        roots,
                        json!({ "roots_file": path.display().to_string() }),
                        0,
                    )
                }
                None => {
                    let run = drive(&lattice, &args.run, ceiling)?;
                    (
                        run.state.accepted().to_vec(),
                        run.config_json(&args.run),
                        run.code(),
                    )
                }
            };
            let scheme = coxeter::build_scheme(&lattice, &roots)?;
            if let Some(path) = &args.dot {
                let dot = scheme.to_dot();
                if path == Path::new("-") {
                    return Ok(Outcome {
                        code,
                        stdout: dot,
                        stderr: String::new(),
                    });
                }
                fs::write(path, &dot)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            }
            let report = envelope("scheme", input, config, scheme_json(&scheme));
            Ok(Outcome::report(code, report))
        }
        Command::ThinCheck(args) => {
            let (lattice, input) = load_lattice(&args.lattice)?;
            let run = drive(&lattice, &args, ceiling)?;
            let cert = coxeter::thin_certificate(&lattice, run.state.accepted())?;
            let verdict = match cert.verdict {
                ThinVerdict::Thin => "thin".to_string(),
                ThinVerdict::NotThin(reason) => format!("not-thin: {}", reason.name()),
            };
            let body = json!({
                "m": cert.m,
                "connected": cert.connected,
                "classification": cert.classification.name(),
                "finite_volume": cert.finite_volume,
                "signature": cert.gram_signature.as_array(),
                "verdict": verdict,
                "roots": run.state.accepted().iter().map(|r| ints(r.vector())).collect::<Vec<_>>(),
            });
            let report = envelope("thin", input, run.config_json(&args), body);
            Ok(Outcome::report(run.code(), report))
        }
        Command::NoRoots(args) => {
            let (lattice, input) = load_lattice(&args.lattice)?;
            let config = SieveConfig {
                search_radius: args.search_radius,
            };
            let cert = sieve::certify_no_roots(&lattice, &config);
            let det = lattice.gram().as_matrix().determinant()?;
            let norms: Vec<Value> = cert
                .entries
                .iter()
                .map(|(k, outcome)| {
                    let moduli: Vec<Value> = sieve::obstruction_moduli(&det, k)
                        .iter()
                        .map(|(p, e)| json!({ "prime": int(p), "max_exponent": e }))
                        .collect();
                    json!({
                        "k": int(k),
                        "outcome": outcome.kind(),
                        "data": outcome_data(outcome),
                        "moduli": moduli,
                    })
                })
                .collect();
            let (verdict, code) = match cert.verdict() {
                RootsVerdict::NoRoots => ("no-roots", 0),
                RootsVerdict::RootFound(_) => ("root-found", 0),
                RootsVerdict::Inconclusive(_) => ("inconclusive", 2),
            };
            let body = json!({
                "norm_bound": int(&cert.norm_bound),
                "complete": cert.is_complete(),
                "verdict": verdict,
                "norms": norms,
            });
            let report = envelope(
                "no_roots",
                input,
                json!({ "search_radius": args.search_radius }),
                body,
            );
            Ok(Outcome::report(code, report))
        }
        Command::Reflect(args) => {
            let (lattice, input) = load_lattice(&args.lattice)?;
            let root = lattice.root(&linalg::parse_int_list(&args.root)?)?;
            let r = lattice.reflection_matrix(&root)?;
            let body = json!({
                "root": ints(root.vector()),
                "norm": int(root.norm()),
                "matrix": matrix_json(r.matrix()),
            });
            Ok(Outcome::report(
                0,
                envelope("reflection", input, json!({}), body),
            ))
        }
        Command::Symmetry(args) => {
            let (lattice, input) = load_lattice(&args.lattice)?;
            let pairs = args
                .pairs
                .iter()
                .map(|p| parse_pair(&lattice, p))
                .collect::<Result<Vec<_>>>()?;
            let found = symmetry::extend_pairing(&lattice, &pairs, args.bound)?;
            let isometries = found
                .isometries
                .iter()
                .map(|u| isometry_json(&lattice, u))
                .collect::<Result<Vec<_>>>()?;
            let body = json!({
                "pairs": pairs
                    .iter()
                    .map(|(a, b)| json!([ints(a.vector()), ints(b.vector())]))
                    .collect::<Vec<_>>(),
                "isometries": isometries,
            });
            let report = envelope("symmetry", input, json!({ "bound": found.bound }), body);
            Ok(Outcome::report(0, report))
        }
    }
}

fn envelope(key: &str, input: Value, config: Value, body: Value) -> Value {
    let mut report = json!({
        "tool": { "name": "vinberg", "version": VERSION },
        "input": input,
        "config": config,
    });
    report[key] = body;
    report
}

fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn ints(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| ints(m.row(i))).collect())
}

fn rational(q: &BigRational) -> Value {
    json!({ "num": int(q.numer()), "den": int(q.denom()) })
}

fn load_lattice(args: &LatticeArgs) -> Result<(QuadraticLattice, Value)> {
    let lattice = match (&args.gram, &args.form) {
        (Some(g), _) => {
            let gram: SymmetricIntMatrix = g.parse()?;
            QuadraticLattice::new(gram)?
        }
        (None, Some(f)) => {
            let coeffs = f
                .split(';')
                .map(linalg::parse_int_list)
                .collect::<Result<Vec<_>>>()?;
            QuadraticLattice::from_form(&coeffs)?
        }
        (None, None) => return Err(Error::Parse("one of --gram or --form is required".into())),
    };
    let input = json!({ "gram": matrix_json(lattice.gram().as_matrix()) });
    Ok((lattice, input))
}

/// Reads one vector per line; blank lines and lines starting with '#' are
/// skipped.
pub fn parse_root_list(text: &str) -> Result<Vec<Vec<BigInt>>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(linalg::parse_int_list)
        .collect()
}

fn read_vectors(path: &Path) -> Result<Vec<Vec<BigInt>>> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_root_list(&text)
}

fn read_roots(lattice: &QuadraticLattice, path: &Path) -> Result<Vec<Root>> {
    read_vectors(path)?
        .iter()
        .map(|v| lattice.root(v))
        .collect()
}

fn parse_pair(lattice: &QuadraticLattice, s: &str) -> Result<(Root, Root)> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("pair {s:?} is not of the form a:b")))?;
    Ok((
        lattice.root(&linalg::parse_int_list(a)?)?,
        lattice.root(&linalg::parse_int_list(b)?)?,
    ))
}

/// Parses "N/D" or "N".
pub fn parse_weight(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("weight {s:?} is not of the form N/D"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d <= BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

struct Driven {
    state: VinbergState,
    exhausted: Option<BigRational>,
    seeds: usize,
}

impl Driven {
    fn code(&self) -> i32 {
        if self.exhausted.is_some() {
            2
        } else {
            0
        }
    }

    fn config_json(&self, args: &RunArgs) -> Value {
        let rule = match args.basepoint_rule {
            RuleArg::Orthogonal => "orthogonal",
            RuleArg::Shell => "shell",
        };
        json!({
            "count": args.count,
            "seeds": self.seeds,
            "basepoint_rule": rule,
            "basepoint": ints(self.state.basepoint()),
            "norms": ints(self.state.norms()),
            "max_weight": self.state.weight_ceiling().map(rational),
            "exhausted_at": self.exhausted.as_ref().map(rational),
        })
    }
}

fn drive(
    lattice: &QuadraticLattice,
    args: &RunArgs,
    ceiling: Option<BigRational>,
) -> Result<Driven> {
    let seeds = match &args.seed_roots {
        Some(path) => read_vectors(path)?,
        None => Vec::new(),
    };
    let basepoint = args
        .basepoint
        .as_deref()
        .map(linalg::parse_int_list)
        .transpose()?;
    let config = VinbergConfig {
        basepoint,
        rule: match args.basepoint_rule {
            RuleArg::Orthogonal => BasepointRule::Orthogonal,
            RuleArg::Shell => BasepointRule::Shell,
        },
        seeds: seeds.clone(),
        weight_ceiling: ceiling,
        norms: None,
    };
    let mut state = VinbergState::new(lattice, &config)?;
    let mut exhausted = None;
    while state.accepted().len() < args.count {
        match state.next_root() {
            Ok(_) => {}
            Err(Error::Exhausted(w)) => {
                exhausted = Some(w);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Driven {
        state,
        exhausted,
        seeds: seeds.len(),
    })
}

fn scheme_json(scheme: &CoxeterScheme) -> Value {
    let edges: Vec<Value> = scheme
        .edges()
        .into_iter()
        .map(|(i, j, label)| {
            json!({
                "i": i + 1,
                "j": j + 1,
                "kind": label.kind(),
                "label": label.label(),
            })
        })
        .collect();
    json!({
        "vertices": scheme.vertices().iter().map(|r| ints(r.vector())).collect::<Vec<_>>(),
        "edges": edges,
    })
}

fn outcome_data(outcome: &NormOutcome) -> Value {
    match outcome {
        NormOutcome::EliminatedByDivisibility { content } => json!({ "content": int(content) }),
        NormOutcome::EliminatedLocally { modulus, target } => {
            json!({ "modulus": int(modulus), "target": int(target) })
        }
        NormOutcome::EliminatedByReduction {
            basis,
            reduced,
            target,
            modulus,
        } => json!({
            "basis": matrix_json(basis),
            "reduced_form": reduced.to_string(),
            "target": int(target),
            "modulus": int(modulus),
        }),
        NormOutcome::RootFound(root) => json!({ "root": ints(root.vector()) }),
        NormOutcome::Inconclusive {
            basis,
            reduced,
            target,
        } => json!({
            "basis": matrix_json(basis),
            "reduced_form": reduced.to_string(),
            "target": int(target),
        }),
    }
}

fn isometry_json(lattice: &QuadraticLattice, u: &LatticeIsometry) -> Result<Value> {
    let order = match symmetry::order_class(lattice, u)? {
        OrderClass::Finite(n) => json!({ "class": "finite", "order": n }),
        OrderClass::Infinite(w) => {
            let witness = match w {
                InfiniteWitness::OffUnitCircle => "off-unit-circle",
                InfiniteWitness::Unipotent => "unipotent",
            };
            json!({ "class": "infinite", "witness": witness })
        }
    };
    Ok(json!({ "matrix": matrix_json(u.matrix()), "order": order }))
}
