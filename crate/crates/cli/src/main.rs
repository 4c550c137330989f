use std::fs::File;
use std::io::{self, BufReader, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dtxp::format::point_json;
use dtxp::oracle::gen::{gen_tree, or_tree, GenSpec};
use dtxp::report::explain;
use dtxp::{
    explain_contrastive, load_tree, parse_instance, report, smallest, smallest_horn, tree_to_json,
    validate_with_limit, AbductiveEnumerator, Algo, BySizeEnumerator, DecisionTree, DualEnumerator,
    Error, Explanation, Mode, Target,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "dtxp", version, about = "Formal explanations for decision trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the tree partitions its feature space.
    Validate {
        #[command(flatten)]
        io: TreeArgs,
        /// Largest feature space swept point by point.
        #[arg(long, default_value_t = 1 << 20)]
        max_space: u128,
    },
    /// Predict the class of an instance and report its path.
    Classify {
        #[command(flatten)]
        io: TreeArgs,
        #[arg(long)]
        instance: String,
    },
    /// One abductive explanation of an instance.
    Axp(Explain),
    /// All contrastive explanations of an instance.
    Cxp(Explain),
    /// One abductive explanation of a path.
    Apxp(Explain),
    /// All contrastive explanations of a path.
    Cpxp(Explain),
    /// Stream explanations, one JSON object per line.
    Enumerate {
        #[command(flatten)]
        x: Explain,
        /// Abductive in order of increasing size.
        #[arg(long, conflicts_with = "dual")]
        by_size: bool,
        /// Abductive and contrastive, interleaved.
        #[arg(long)]
        dual: bool,
    },
    /// A cardinality-minimum abductive explanation.
    Smallest(Explain),
    /// Path-explanation redundancy table.
    Report {
        #[command(flatten)]
        io: TreeArgs,
        #[arg(long, value_enum, default_value_t = AlgoArg::Traversal)]
        algo: AlgoArg,
        /// Also list the tested features that no APXp of the path uses.
        #[arg(long)]
        all: bool,
    },
    /// Print a random tree (or the OR comb) in canonical JSON.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        features: usize,
        #[arg(long, default_value_t = 2)]
        max_domain: usize,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        classes: usize,
        #[arg(long, default_value_t = 64)]
        max_nodes: usize,
        #[arg(long, default_value_t = 0.3)]
        leaf_prob: f64,
        #[arg(long, default_value_t = 0.0)]
        ordinal_fraction: f64,
        /// Build the comb for x1 or ... or xM instead.
        #[arg(long, value_name = "M")]
        or: Option<usize>,
    },
}

#[derive(Args)]
struct TreeArgs {
    #[arg(long, value_name = "FILE")]
    tree: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct Explain {
    #[command(flatten)]
    io: TreeArgs,
    /// JSON array, name=value list, or comma-separated values.
    #[arg(long, conflicts_with_all = ["leaf", "path"])]
    instance: Option<String>,
    #[arg(long, conflicts_with = "path")]
    leaf: Option<usize>,
    /// Node ids from the root, e.g. "1,2,5,9".
    #[arg(long)]
    path: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, value_enum, default_value_t = AlgoArg::Traversal)]
    algo: AlgoArg,
    /// Print every explanation instead of one.
    #[arg(long)]
    all: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Mhs,
    Traversal,
    Horn,
}

impl From<AlgoArg> for Algo {
    fn from(a: AlgoArg) -> Algo {
        match a {
            AlgoArg::Mhs => Algo::Mhs,
            AlgoArg::Traversal => Algo::Traversal,
            AlgoArg::Horn => Algo::Horn,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Path,
    PathRestricted,
    PathUnrestricted,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Path => Mode::Path,
            ModeArg::PathRestricted => Mode::PathRestricted,
            ModeArg::PathUnrestricted => Mode::PathUnrestricted,
        }
    }
}

enum Failure {
    Usage(String),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Structure(_) => Failure::Invalid(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("invalid: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &str) -> Result<DecisionTree, Failure> {
    let file = File::open(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
    Ok(load_tree(BufReader::new(file))?)
}

#[derive(Clone, Copy, PartialEq)]
enum Need {
    Instance,
    Path,
    Either,
}

fn target<'t>(tree: &'t DecisionTree, x: &Explain, need: Need) -> Result<Target<'t>, Failure> {
    if need == Need::Instance && x.instance.is_none() {
        return Err(Failure::Usage("--instance is required".into()));
    }
    if need == Need::Path && x.instance.is_some() {
        return Err(Failure::Usage("use --leaf or --path here; --instance belongs to axp/cxp".into()));
    }
    if let Some(text) = &x.instance {
        let v = parse_instance(tree, text)?;
        let mode = x.mode.map_or(Mode::PathUnrestricted, Mode::from);
        return Ok(Target::instance(tree, &v, mode)?);
    }
    let path = if let Some(leaf) = x.leaf {
        tree.path_by_leaf(leaf)?
    } else if let Some(nodes) = &x.path {
        let ids = nodes
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| Failure::Usage(format!("bad node list '{nodes}'")))?;
        tree.path_by_nodes(&ids)?
    } else {
        return Err(Failure::Usage("one of --leaf, --path or --instance is required".into()));
    };
    Ok(Target::path(tree, path))
}

fn emit(out: &mut impl Write, tree: &DecisionTree, xps: &[Explanation], fmt: Format, list: bool) -> io::Result<()> {
    match fmt {
        Format::Json => {
            let v: Vec<_> = xps.iter().map(|x| x.to_json(tree)).collect();
            let v = if list { json!(v) } else { v[0].clone() };
            writeln!(out, "{v}")
        }
        Format::Text => {
            for x in xps {
                writeln!(out, "{} {:?}: {}", x.kind.name(), x.features, x.describe(tree))?;
            }
            Ok(())
        }
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    let need = match cmd {
        Command::Axp(_) | Command::Cxp(_) => Need::Instance,
        Command::Apxp(_) | Command::Cpxp(_) => Need::Path,
        _ => Need::Either,
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cmd {
        Command::Validate { io, max_space } => {
            let tree = load(&io.tree)?;
            let r = validate_with_limit(&tree, max_space);
            match io.format {
                Format::Json => {
                    let v = json!({
                        "ok": r.ok,
                        "exhaustive": r.exhaustive,
                        "inconsistent_paths": r.inconsistent_paths,
                        "dead_end_witnesses": r.dead_end_witnesses.iter().map(|p| point_json(&tree, p)).collect::<Vec<_>>(),
                        "overlap_witnesses": r.overlap_witnesses.iter().map(|(p, a, b)| json!({"point": point_json(&tree, p), "paths": [a, b]})).collect::<Vec<_>>(),
                        "uncovered_nodes": r.uncovered_nodes,
                    });
                    writeln!(out, "{v}")?;
                }
                Format::Text => {
                    writeln!(out, "{}", if r.ok { "valid" } else { "invalid" })?;
                    for p in &r.inconsistent_paths {
                        writeln!(out, "inconsistent path {p}")?;
                    }
                    for w in &r.dead_end_witnesses {
                        writeln!(out, "dead end at {}", point_json(&tree, w))?;
                    }
                    for (w, a, b) in &r.overlap_witnesses {
                        writeln!(out, "{} reaches paths {a} and {b}", point_json(&tree, w))?;
                    }
                    for n in &r.uncovered_nodes {
                        writeln!(out, "node {n} does not cover its incoming values")?;
                    }
                }
            }
            if !r.ok {
                return Err(Failure::Invalid(format!("{} fails validation", io.tree)));
            }
        }
        Command::Classify { io, instance } => {
            let tree = load(&io.tree)?;
            let v = parse_instance(&tree, &instance)?;
            let (c, p) = tree.classify(&v)?;
            match io.format {
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({"class": tree.class_label(c), "path": p.id, "nodes": p.nodes})
                )?,
                Format::Text => writeln!(out, "{} (path {}, leaf {})", tree.class_label(c), p.id, p.leaf())?,
            }
        }
        Command::Axp(x) | Command::Apxp(x) => {
            let tree = load(&x.io.tree)?;
            let tg = target(&tree, &x, need)?;
            let xps = if x.all {
                AbductiveEnumerator::new(tg).collect()
            } else {
                vec![explain(&tg, x.algo.into())?]
            };
            emit(&mut out, &tree, &xps, x.io.format, x.all)?;
        }
        Command::Cxp(x) | Command::Cpxp(x) => {
            let tree = load(&x.io.tree)?;
            let tg = target(&tree, &x, need)?;
            emit(&mut out, &tree, &explain_contrastive(&tg), x.io.format, true)?;
        }
        Command::Enumerate { x, by_size, dual } => {
            let tree = load(&x.io.tree)?;
            let tg = target(&tree, &x, Need::Either)?;
            let stream: Box<dyn Iterator<Item = Explanation>> = if dual {
                Box::new(DualEnumerator::new(tg))
            } else if by_size {
                Box::new(BySizeEnumerator::new(tg))
            } else {
                Box::new(AbductiveEnumerator::new(tg))
            };
            for xp in stream {
                match x.io.format {
                    Format::Json => writeln!(out, "{}", xp.to_json(&tree))?,
                    Format::Text => writeln!(out, "{} {:?}: {}", xp.kind.name(), xp.features, xp.describe(&tree))?,
                }
            }
        }
        Command::Smallest(x) => {
            let tree = load(&x.io.tree)?;
            let tg = target(&tree, &x, Need::Either)?;
            let xp = match x.algo {
                AlgoArg::Horn => smallest_horn(&tg)?,
                _ => smallest(&tg),
            };
            emit(&mut out, &tree, &[xp], x.io.format, false)?;
        }
        Command::Report { io, algo, all } => {
            let tree = load(&io.tree)?;
            let r = report(&tree, algo.into(), all)?;
            match io.format {
                Format::Json => writeln!(out, "{}", r.to_json())?,
                Format::Text => write!(out, "{}", r.to_text())?,
            }
        }
        Command::Gen {
            seed,
            features,
            max_domain,
            depth,
            classes,
            max_nodes,
            leaf_prob,
            ordinal_fraction,
            or,
        } => {
            let tree = match or {
                Some(0) => return Err(Failure::Usage("--or needs at least one feature".into())),
                Some(m) => or_tree(m),
                None => {
                    if features == 0 || max_domain < 2 || classes < 2 || depth == 0 || max_nodes < 3 {
                        return Err(Failure::Usage(
                            "need features >= 1, max-domain >= 2, classes >= 2, depth >= 1, max-nodes >= 3".into(),
                        ));
                    }
                    gen_tree(&GenSpec {
                        features,
                        max_domain,
                        depth,
                        classes,
                        seed,
                        max_nodes,
                        leaf_prob,
                        ordinal_fraction,
                    })
                }
            };
            writeln!(out, "{}", tree_to_json(&tree))?;
        }
    }
    Ok(())
}
