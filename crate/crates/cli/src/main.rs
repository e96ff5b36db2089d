//! Command-line front end for the preclone engine.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use preclone::audit::{audit_all, AuditBounds};
use preclone::galois::{
    characterize_check, inv_closure, pol, preserves, separating_collection, separating_family, Separation,
};
use preclone::io::{from_json, to_json};
use preclone::terms::{enumerate_terms, induce_op, TermMode};
use preclone::{
    preclone_closure, CollectionFamily, FiniteAlgebra, Limits, MatrixCollection, Operation, OperationSet, Universe,
};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "preclone",
    version,
    about = "Preclones of operations and their matrix-collection invariants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads (0 lets the runtime decide).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Largest universe size accepted.
    #[arg(long, global = true, default_value_t = 4)]
    cap_universe: usize,
    /// Largest arity bound accepted for enumerations.
    #[arg(long, global = true, default_value_t = 3)]
    cap_arity: usize,
    /// Largest breadth bound accepted.
    #[arg(long, global = true, default_value_t = 4)]
    cap_breadth: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Summary,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Trivial,
    Empty,
    Equality,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Linear,
    Increasing,
}

#[derive(Subcommand)]
enum Command {
    /// Does an operation preserve a collection? Exit 1 if not.
    Preserves {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        collection: PathBuf,
    },
    /// Superposition f*(g1, ..., gn).
    Superpose {
        #[arg(long)]
        outer: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        inner: Vec<PathBuf>,
    },
    /// Preclone generated by a set of operations, up to an arity.
    CloseOps {
        #[arg(long)]
        ops: PathBuf,
        #[arg(long)]
        max_arity: usize,
    },
    /// Every operation up to an arity preserving all collections in a directory.
    Pol {
        #[arg(long)]
        collections: PathBuf,
        #[arg(long)]
        max_arity: usize,
        /// Universe size, needed when the directory is empty.
        #[arg(long)]
        universe: Option<usize>,
    },
    /// Smallest collection containing the given one and preserved by the operations.
    CloseCollection {
        #[arg(long)]
        ops: PathBuf,
        #[arg(long)]
        collection: PathBuf,
    },
    /// Collection separating an operation from a generated preclone. Exit 1 if none exists.
    Separate {
        #[arg(long)]
        ops: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
    /// Compares pol of a collection family with the generated preclone. Exit 1 if they differ.
    Characterize {
        #[arg(long)]
        ops: PathBuf,
        #[arg(long)]
        max_arity: usize,
        /// Collections to use; defaults to one separating collection per non-member.
        #[arg(long)]
        collections: Option<PathBuf>,
    },
    /// Audits a family of collections for the closure conditions. Exit 1 on any failure.
    Audit {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        max_breadth: usize,
        /// Largest arity of the family; defaults to the largest member arity.
        #[arg(long)]
        max_arity: Option<usize>,
        #[command(flatten)]
        pool: PoolCaps,
        #[arg(long)]
        fail_fast: bool,
    },
    /// Operations induced by the linear or increasing terms of an algebra.
    Termops {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        max_vars: usize,
        #[arg(long)]
        max_depth: usize,
    },
    /// Trivial, empty or equality collections.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 1)]
        arity: usize,
        #[arg(long)]
        breadth: usize,
        #[arg(long, default_value_t = 2)]
        universe: usize,
    },
}

#[derive(Args)]
struct PoolCaps {
    /// Largest scheme arity in the conjunctive-minor audit.
    #[arg(long, default_value_t = 2)]
    scheme_arity: usize,
    /// Largest number of indeterminates per scheme.
    #[arg(long, default_value_t = 2)]
    scheme_vars: usize,
    /// Largest number of maps per scheme.
    #[arg(long, default_value_t = 2)]
    scheme_maps: usize,
    /// Largest trivial breadth tried by the dividend audit.
    #[arg(long)]
    dividend_width: Option<usize>,
    /// Candidate collections the dividend audit may enumerate.
    #[arg(long)]
    max_pool: Option<u64>,
    /// Member tuples the conjunctive-minor audit may evaluate.
    #[arg(long)]
    max_tuples: Option<u64>,
}

enum Failure {
    Input(String),
    Cap(String),
}

impl From<preclone::Error> for Failure {
    fn from(err: preclone::Error) -> Self {
        if err.is_cap() {
            Failure::Cap(err.to_string())
        } else {
            Failure::Input(err.to_string())
        }
    }
}

struct Output {
    json: Value,
    summary: String,
    holds: bool,
}

impl Output {
    fn new(json: Value, summary: impl Into<String>) -> Self {
        Output {
            json,
            summary: summary.into(),
            holds: true,
        }
    }

    fn verdict(mut self, holds: bool) -> Self {
        self.holds = holds;
        self
    }
}

fn value<T: Serialize + ?Sized>(x: &T) -> Value {
    serde_json::to_value(x).expect("engine values serialize")
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_dir<T: DeserializeOwned>(dir: &Path) -> Result<Vec<T>, Failure> {
    let entries = fs::read_dir(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| read(p)).collect()
}

struct Caps<'a>(&'a Global);

impl Caps<'_> {
    fn universe(&self, u: Universe) -> Result<(), Failure> {
        self.check("universe size", u.size(), self.0.cap_universe)
    }

    fn arity(&self, n: usize) -> Result<(), Failure> {
        self.check("arity bound", n, self.0.cap_arity)
    }

    fn breadth(&self, b: usize) -> Result<(), Failure> {
        self.check("breadth bound", b, self.0.cap_breadth)
    }

    fn collection(&self, g: &MatrixCollection) -> Result<(), Failure> {
        self.universe(g.universe())?;
        self.breadth(g.breadth_bound())
    }

    fn check(&self, what: &str, value: usize, cap: usize) -> Result<(), Failure> {
        if value > cap {
            Err(Failure::Cap(format!("{what} {value} exceeds the cap of {cap}")))
        } else {
            Ok(())
        }
    }
}

fn list(ops: &OperationSet) -> String {
    ops.iter().map(|f| format!("  {f:?}")).collect::<Vec<_>>().join("\n")
}

fn run(command: Command, caps: Caps) -> Result<Output, Failure> {
    let limits = Limits::default();
    Ok(match command {
        Command::Preserves { op, collection } => {
            let f: Operation = read(&op)?;
            let gamma: MatrixCollection = read(&collection)?;
            caps.collection(&gamma)?;
            let violation = preserves(&f, &gamma)?;
            let summary = match &violation {
                None => "preserves".to_string(),
                Some(v) => format!(
                    "does not preserve: window at column {} of {:?}",
                    v.window_start, v.matrix
                ),
            };
            Output::new(
                json!({"preserves": violation.is_none(), "violation": value(&violation)}),
                summary,
            )
            .verdict(violation.is_none())
        }
        Command::Superpose { outer, inner } => {
            let f: Operation = read(&outer)?;
            let gs = inner.iter().map(|p| read(p)).collect::<Result<Vec<Operation>, _>>()?;
            let result = f.superpose(&gs)?;
            Output::new(value(&result), format!("{result:?}"))
        }
        Command::CloseOps { ops, max_arity } => {
            let set: OperationSet = read(&ops)?;
            caps.universe(set.universe())?;
            caps.arity(max_arity)?;
            let closure = preclone_closure(&set, max_arity)?;
            let summary = format!(
                "{} operations up to arity {max_arity}\n{}",
                closure.len(),
                list(&closure)
            );
            Output::new(value(&closure), summary)
        }
        Command::Pol {
            collections,
            max_arity,
            universe,
        } => {
            let ms: Vec<MatrixCollection> = read_dir(&collections)?;
            let u = match (ms.first(), universe) {
                (Some(g), _) => g.universe(),
                (None, Some(k)) => Universe::new(k)?,
                (None, None) => return Err(Failure::Input("no collections found; pass --universe".into())),
            };
            caps.universe(u)?;
            caps.arity(max_arity)?;
            for g in &ms {
                caps.collection(g)?;
            }
            let p = pol(u, &ms, max_arity, &limits)?;
            let summary = format!("{} operations up to arity {max_arity}\n{}", p.len(), list(&p));
            Output::new(value(&p), summary)
        }
        Command::CloseCollection { ops, collection } => {
            let set: OperationSet = read(&ops)?;
            let gamma: MatrixCollection = read(&collection)?;
            caps.collection(&gamma)?;
            let closed = inv_closure(&set, &gamma)?;
            Output::new(value(&closed), format!("{} matrices\n{closed:?}", closed.len()))
        }
        Command::Separate { ops, target } => {
            let set: OperationSet = read(&ops)?;
            let g: Operation = read(&target)?;
            caps.universe(set.universe())?;
            caps.arity(g.arity())?;
            match separating_collection(&set, &g, &limits)? {
                Separation::NotSeparable => Output::new(
                    json!({"separable": false}),
                    "not separable: the operation lies in the generated preclone",
                )
                .verdict(false),
                Separation::Separated {
                    collection,
                    star,
                    image,
                } => Output::new(
                    json!({"separable": true, "collection": value(&collection), "star": value(&star), "image": value(&image)}),
                    format!(
                        "separated by a collection of {} matrices; image {image:?} is outside it",
                        collection.len()
                    ),
                ),
            }
        }
        Command::Characterize {
            ops,
            max_arity,
            collections,
        } => {
            let set: OperationSet = read(&ops)?;
            caps.universe(set.universe())?;
            caps.arity(max_arity)?;
            let ms = match collections {
                Some(dir) => read_dir(&dir)?,
                None => separating_family(&set, max_arity, &limits)?,
            };
            for g in &ms {
                caps.collection(g)?;
            }
            let report = characterize_check(&set, &ms, max_arity, &limits)?;
            let summary = format!(
                "equal: {} ({} only in pol, {} only in the closure)",
                report.equal,
                report.only_in_pol.len(),
                report.only_in_closure.len()
            );
            let holds = report.equal;
            Output::new(value(&report), summary).verdict(holds)
        }
        Command::Audit {
            family,
            max_breadth,
            max_arity,
            pool,
            fail_fast,
        } => {
            let members: Vec<MatrixCollection> = read_dir(&family)?;
            let u = members
                .first()
                .map(MatrixCollection::universe)
                .ok_or_else(|| Failure::Input(format!("{}: no collections found", family.display())))?;
            caps.universe(u)?;
            caps.breadth(max_breadth)?;
            if let Some(m) = max_arity {
                caps.arity(m)?;
            }
            let fam = CollectionFamily::from_collections(u, max_arity, max_breadth, members.iter())?;
            let bounds = AuditBounds {
                max_arity: pool.scheme_arity,
                max_vars: pool.scheme_vars,
                max_maps: pool.scheme_maps,
                max_dividend_width: pool.dividend_width.unwrap_or(usize::MAX),
            };
            let limits = Limits {
                max_pool: pool.max_pool.unwrap_or(limits.max_pool),
                max_tuples: pool.max_tuples.unwrap_or(limits.max_tuples),
                ..limits
            };
            let report = audit_all(&fam, &bounds, fail_fast, &limits)?;
            let summary = report
                .verdicts
                .iter()
                .map(|(c, v)| format!("{c}: {}", v.as_str()))
                .collect::<Vec<_>>()
                .join("\n");
            Output::new(value(&report), summary).verdict(report.passed())
        }
        Command::Termops {
            algebra,
            mode,
            max_vars,
            max_depth,
        } => {
            let alg: FiniteAlgebra = read(&algebra)?;
            caps.universe(alg.universe())?;
            caps.arity(max_vars)?;
            let mode = match mode {
                Mode::Linear => TermMode::Linear,
                Mode::Increasing => TermMode::Increasing,
            };
            let terms = enumerate_terms(&alg.signature(), mode, max_vars, max_depth, &limits)?;
            let mut rows = Vec::new();
            let mut set = OperationSet::new(alg.universe());
            for t in &terms {
                let f = induce_op(&alg, t)?;
                rows.push(json!({"term": t.to_string(), "op": value(&f)}));
                set.insert(f)?;
            }
            let summary = format!(
                "{} terms inducing {} operations\n{}",
                terms.len(),
                set.len(),
                list(&set)
            );
            Output::new(json!({"terms": rows, "ops": value(&set)}), summary)
        }
        Command::Gen {
            kind,
            arity,
            breadth,
            universe,
        } => {
            let u = Universe::new(universe)?;
            caps.universe(u)?;
            caps.breadth(breadth)?;
            let gamma = match kind {
                Kind::Trivial => MatrixCollection::trivial(u, arity, breadth, &limits)?,
                Kind::Empty => MatrixCollection::new(u, arity, breadth, [])?,
                Kind::Equality if arity != 2 => {
                    return Err(Failure::Input(format!(
                        "equality collections are binary, got --arity {arity}"
                    )))
                }
                Kind::Equality => MatrixCollection::equality(u, breadth, &limits)?,
            };
            Output::new(value(&gamma), format!("{} matrices\n{gamma:?}", gamma.len()))
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.global.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let format = cli.global.format;
    match run(cli.command, Caps(&cli.global)) {
        Ok(out) => {
            match format {
                Format::Json => print!("{}", to_json(&out.json)),
                Format::Summary => println!("{}", out.summary),
            }
            ExitCode::from(if out.holds { 0 } else { 1 })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("cap exceeded: {msg}");
            ExitCode::from(3)
        }
    }
}
