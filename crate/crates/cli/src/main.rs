use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use m0n_core::delta::{fill_oracle, identity_violations, FillTuple};
use m0n_core::equations::{
    curve_assignment, evaluate, generate, CoordIndex, EqSystem, ExportFormat, Form,
};
use m0n_core::io::{read_curve, read_curve_tuple, read_tree, read_tree_tuple, write_curve_tuple, InputError};
use m0n_core::moduli::{fill_moduli, m05_vector, reconstruct_m05, verify_m05, ModuliFamily};
use m0n_core::proj::{format_point_list, parse_point_list};
use m0n_core::sample::Sampler;
use m0n_core::tree::{
    enumerate, fill, to_dot, tree_count, Budget, Label, MarkedTree, TreeError, TreeFamily,
    TreeJson, DEFAULT_BUDGET,
};
use m0n_core::{BigInt, Curve, Point};

#[derive(Parser)]
#[command(name = "m0n", version, about = "Trees, stable curves and the equations of their moduli")]
struct Cli {
    /// Random seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest enumeration allowed.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: Budget,
    /// Output format: newick|json for trees, text|json for curves,
    /// plain|json|cas for equations.
    #[arg(long, global = true)]
    format: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Series-reduced trees with labelled leaves.
    #[command(subcommand)]
    Trees(TreesCmd),
    /// Stable curves with marked points.
    #[command(subcommand)]
    Moduli(ModuliCmd),
    /// Defining equations.
    #[command(subcommand)]
    Eqs(EqsCmd),
}

#[derive(Args)]
struct Input {
    /// Input file; standard input when absent or `-`.
    #[arg(long)]
    input: Option<String>,
}

impl Input {
    fn read(&self) -> Result<String, CliError> {
        read_source(self.input.as_deref())
    }
}

#[derive(Subcommand)]
enum TreesCmd {
    /// List every tree with leaves 0..=n.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Face i of a tree.
    Face {
        #[arg(long)]
        i: usize,
        #[command(flatten)]
        input: Input,
    },
    /// The tree whose faces are the given tuple.
    Fill {
        #[command(flatten)]
        input: Input,
    },
    /// Check the face identities on every tree with leaves 0..=n.
    Check {
        #[arg(long)]
        n: usize,
    },
    /// Render a tree.
    Render {
        /// Graphviz output (the only renderer).
        #[arg(long)]
        dot: bool,
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Subcommand)]
enum ModuliCmd {
    /// Quad coordinates of a curve.
    Coords {
        /// Distinct points, mark i at the i-th point.
        #[arg(long, allow_hyphen_values = true)]
        points: Option<String>,
        /// Curve JSON file, used when --points is absent.
        #[arg(long)]
        input: Option<String>,
    },
    /// Check a coordinate vector against the equations.
    Verify {
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Coordinate vector; read from --input or stdin when absent.
        #[arg(long, allow_hyphen_values = true)]
        coords: Option<String>,
        #[arg(long)]
        input: Option<String>,
    },
    /// The 5-marked curve with the given coordinates.
    Reconstruct {
        #[arg(long, allow_hyphen_values = true)]
        coords: Option<String>,
        #[arg(long)]
        input: Option<String>,
    },
    /// The curve whose forgetful images are the given tuple.
    Fill {
        #[command(flatten)]
        input: Input,
    },
    /// Random curves.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Only smooth curves.
        #[arg(long)]
        smooth: bool,
    },
}

#[derive(Args)]
struct SystemSource {
    /// System JSON file.
    #[arg(long)]
    system: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "redundant")]
    form: String,
}

impl SystemSource {
    fn load(&self) -> Result<EqSystem, CliError> {
        match (&self.system, self.n) {
            (Some(path), _) => {
                let text = read_source(Some(path))?;
                EqSystem::from_json(&text).map_err(|e| CliError::Usage(e.to_string()))
            }
            (None, Some(n)) => {
                let form: Form = self.form.parse().map_err(usage)?;
                generate(n, form).map_err(usage)
            }
            (None, None) => Err(CliError::Usage("give --system FILE or --n N".into())),
        }
    }
}

#[derive(Subcommand)]
enum EqsCmd {
    /// Generate a system.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "redundant")]
        form: String,
    },
    /// Residuals of a system at a point or on a curve.
    Evaluate {
        #[command(flatten)]
        source: SystemSource,
        /// One point per coordinate, in the system's coordinate order.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Curve JSON, or a list of curves as written by `moduli sample`.
        #[arg(long)]
        curve: Option<String>,
    },
    /// Re-export a system in another format.
    Export {
        #[command(flatten)]
        source: SystemSource,
    },
}

enum CliError {
    /// Bad flags or unreadable input.
    Usage(String),
    /// Valid input for which the computation fails.
    Domain(String),
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn domain(e: impl ToString) -> CliError {
    CliError::Domain(e.to_string())
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        if e.is_syntax() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Domain(e.to_string())
        }
    }
}

fn read_source(path: Option<&str>) -> Result<String, CliError> {
    match path {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Usage(format!("stdin: {e}")))?;
            Ok(s)
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{p}: {e}"))),
    }
}

fn points(s: &str) -> Result<Vec<Point>, CliError> {
    parse_point_list(s).map_err(usage)
}

#[derive(Clone, Copy, PartialEq)]
enum Out {
    Newick,
    Text,
    Json,
}

fn out_format(given: &Option<String>, allowed: &[(&str, Out)]) -> Result<Out, CliError> {
    match given {
        None => Ok(allowed[0].1),
        Some(f) => allowed.iter().find(|(name, _)| name == f).map(|(_, o)| *o).ok_or_else(|| {
            let names: Vec<&str> = allowed.iter().map(|(n, _)| *n).collect();
            CliError::Usage(format!("format {f:?} not available here; expected one of {}", names.join(", ")))
        }),
    }
}

fn tree_format(cli: &Cli) -> Result<Out, CliError> {
    out_format(&cli.format, &[("newick", Out::Newick), ("json", Out::Json)])
}

fn curve_format(cli: &Cli) -> Result<Out, CliError> {
    out_format(&cli.format, &[("text", Out::Text), ("json", Out::Json)])
}

fn show_tree(t: &MarkedTree, fmt: Out) -> String {
    match fmt {
        Out::Json => serde_json::to_string_pretty(&TreeJson::from(t)).expect("serializable"),
        _ => t.canonical_form().to_owned(),
    }
}

fn show_curve(c: &Curve, fmt: Out) -> String {
    match fmt {
        Out::Json => c.to_json(),
        _ => c.canonical_form(),
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Trees(cmd) => run_trees(cli, cmd),
        Command::Moduli(cmd) => run_moduli(cli, cmd),
        Command::Eqs(cmd) => run_eqs(cli, cmd),
    }
}

fn tree_err(e: TreeError) -> CliError {
    domain(e)
}

fn run_trees(cli: &Cli, cmd: &TreesCmd) -> Result<String, CliError> {
    match cmd {
        TreesCmd::Enumerate { n, count_only } => {
            if *count_only {
                return Ok(tree_count(*n).to_string());
            }
            let fmt = tree_format(cli)?;
            let trees = enumerate(*n, cli.budget).map_err(tree_err)?;
            Ok(match fmt {
                Out::Json => {
                    let docs: Vec<TreeJson> = trees.iter().map(TreeJson::from).collect();
                    serde_json::to_string_pretty(&docs).expect("serializable")
                }
                _ => trees.iter().map(|t| t.canonical_form()).collect::<Vec<_>>().join("\n"),
            })
        }
        TreesCmd::Face { i, input } => {
            let t = read_tree(&input.read()?)?;
            Ok(show_tree(&t.face(*i).map_err(tree_err)?, tree_format(cli)?))
        }
        TreesCmd::Fill { input } => {
            let fmt = tree_format(cli)?;
            let family = TreeFamily { budget: cli.budget };
            let entries = read_tree_tuple(&input.read()?)?;
            let tuple = FillTuple::new(&family, entries).map_err(usage)?;
            if tuple.dim() >= 5 {
                return fill(&tuple).map(|y| show_tree(&y, fmt)).map_err(tree_err);
            }
            // below dimension 5 fills need not be unique; scan the enumeration
            let fills = fill_oracle(&family, &tuple).map_err(tree_err)?;
            match fills.as_slice() {
                [y] => Ok(show_tree(y, fmt)),
                [] => Err(domain("no tree has these faces")),
                many => Err(CliError::Domain(format!(
                    "{} trees have these faces:\n{}",
                    many.len(),
                    many.iter().map(|t| t.canonical_form()).collect::<Vec<_>>().join("\n")
                ))),
            }
        }
        TreesCmd::Check { n } => {
            let family = TreeFamily { budget: cli.budget };
            let trees = enumerate(*n, cli.budget).map_err(tree_err)?;
            let mut bad = Vec::new();
            for t in &trees {
                for (i, j) in identity_violations(&family, t).map_err(tree_err)? {
                    bad.push(format!("{t} at i={i}, j={j}"));
                }
            }
            if bad.is_empty() {
                Ok(format!("checked {} trees: no violations", trees.len()))
            } else {
                Err(CliError::Domain(format!("{} violations:\n{}", bad.len(), bad.join("\n"))))
            }
        }
        TreesCmd::Render { dot: _, input } => {
            let t = read_tree(&input.read()?)?;
            Ok(to_dot(&t).trim_end().to_owned())
        }
    }
}

/// Coordinates ordered by the lexicographic order of the omitted marks; for
/// five marks this is `c_1, ..., c_5`, with `c_k` forgetting mark `k - 1`.
fn ordered_coordinates(c: &Curve) -> Result<Vec<([Label; 4], Point)>, CliError> {
    let marks = c.marks();
    let mut v: Vec<_> = c.to_coordinates().map_err(domain)?.into_iter().collect();
    v.sort_by_key(|(q, _)| marks.iter().filter(|m| !q.contains(m)).copied().collect::<Vec<_>>());
    Ok(v)
}

fn coords_arg(coords: &Option<String>, input: &Option<String>) -> Result<Vec<Point>, CliError> {
    match coords {
        Some(s) => points(s),
        None => points(read_source(input.as_deref())?.trim()),
    }
}

fn run_moduli(cli: &Cli, cmd: &ModuliCmd) -> Result<String, CliError> {
    match cmd {
        ModuliCmd::Coords { points: pts, input } => {
            let fmt = curve_format(cli)?;
            let c = match pts {
                Some(s) => Curve::from_points(&points(s)?).map_err(domain)?,
                None => read_curve(&read_source(input.as_deref())?)?,
            };
            let coords = ordered_coordinates(&c)?;
            Ok(match fmt {
                Out::Json => {
                    let entries: Vec<_> = coords
                        .iter()
                        .map(|(q, p)| serde_json::json!({"subset": q, "point": p.to_string()}))
                        .collect();
                    let doc = serde_json::json!({
                        "version": m0n_core::tree::FORMAT_VERSION,
                        "n": c.mark_count(),
                        "coords": entries,
                    });
                    serde_json::to_string_pretty(&doc).expect("serializable")
                }
                _ => {
                    let v: Vec<Point> = coords.into_iter().map(|(_, p)| p).collect();
                    format_point_list(&v)
                }
            })
        }
        ModuliCmd::Verify { n, coords, input } => {
            let v = coords_arg(coords, input)?;
            if *n == 5 {
                let arr: [Point; 5] = v
                    .try_into()
                    .map_err(|v: Vec<Point>| usage(format!("expected 5 coordinates, got {}", v.len())))?;
                return if verify_m05(&arr) {
                    Ok("OK".into())
                } else {
                    let r = m0n_core::moduli::m05_residuals(&arr);
                    Err(CliError::Domain(format!(
                        "FAILED: residuals {}",
                        r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
                    )))
                };
            }
            let sys = generate(*n, Form::Reduced).map_err(usage)?;
            if v.len() != sys.coords.len() {
                return Err(usage(format!("expected {} coordinates, got {}", sys.coords.len(), v.len())));
            }
            // same ordering as `coords`: by omitted marks
            let mut keys: Vec<CoordIndex> = sys.coords.clone();
            keys.sort_by_key(|c| match c {
                CoordIndex::Subset(q) => (0..*n as Label).filter(|m| !q.contains(m)).collect::<Vec<_>>(),
                CoordIndex::Chain(_) => unreachable!("reduced systems use subsets"),
            });
            let assignment: BTreeMap<CoordIndex, Point> = keys.into_iter().zip(v).collect();
            residual_report(&sys, &assignment)
        }
        ModuliCmd::Reconstruct { coords, input } => {
            let v = coords_arg(coords, input)?;
            let arr: [Point; 5] = v
                .try_into()
                .map_err(|v: Vec<Point>| usage(format!("expected 5 coordinates, got {}", v.len())))?;
            let c = reconstruct_m05(&arr).map_err(domain)?;
            debug_assert_eq!(m05_vector(&c).ok().as_ref(), Some(&arr));
            Ok(show_curve(&c, out_format(&cli.format, &[("json", Out::Json), ("text", Out::Text)])?))
        }
        ModuliCmd::Fill { input } => {
            let fmt = out_format(&cli.format, &[("json", Out::Json), ("text", Out::Text)])?;
            let entries = read_curve_tuple::<BigInt>(&input.read()?)?;
            let tuple = FillTuple::new(&ModuliFamily::new(), entries).map_err(usage)?;
            Ok(show_curve(&fill_moduli(&tuple).map_err(domain)?, fmt))
        }
        ModuliCmd::Sample { n, count, smooth } => {
            let fmt = out_format(&cli.format, &[("json", Out::Json), ("text", Out::Text)])?;
            let mut s = Sampler::new(cli.seed).with_budget(cli.budget);
            let curves = (0..*count)
                .map(|_| if *smooth { s.smooth_curve(*n) } else { s.curve(*n) })
                .collect::<Result<Vec<Curve>, _>>()
                .map_err(domain)?;
            Ok(match fmt {
                Out::Json => write_curve_tuple(&curves),
                _ => curves.iter().map(|c| c.canonical_form()).collect::<Vec<_>>().join("\n"),
            })
        }
    }
}

fn residual_report(sys: &EqSystem, assignment: &BTreeMap<CoordIndex, Point>) -> Result<String, CliError> {
    let r = evaluate(sys, assignment).map_err(usage)?;
    let bad: Vec<String> = r
        .iter()
        .enumerate()
        .filter(|(_, x)| **x != BigInt::from(0))
        .map(|(k, x)| format!("  equation {}: {x}", k + 1))
        .collect();
    if bad.is_empty() {
        Ok("all residuals zero".into())
    } else {
        Err(CliError::Domain(format!(
            "{} of {} residuals nonzero:\n{}",
            bad.len(),
            r.len(),
            bad.join("\n")
        )))
    }
}

fn run_eqs(cli: &Cli, cmd: &EqsCmd) -> Result<String, CliError> {
    let export_format = || -> Result<ExportFormat, CliError> {
        cli.format.as_deref().unwrap_or("plain").parse().map_err(usage)
    };
    match cmd {
        EqsCmd::Generate { n, form } => {
            let fmt = export_format()?;
            let sys = generate(*n, form.parse().map_err(usage)?).map_err(usage)?;
            Ok(sys.export(fmt).trim_end().to_owned())
        }
        EqsCmd::Export { source } => {
            let fmt = export_format()?;
            Ok(source.load()?.export(fmt).trim_end().to_owned())
        }
        EqsCmd::Evaluate { source, point, curve } => {
            let sys = source.load()?;
            match (point, curve) {
                (Some(p), None) => {
                    let v = points(p)?;
                    if v.len() != sys.coords.len() {
                        return Err(usage(format!(
                            "the system has {} coordinates, got {} points",
                            sys.coords.len(),
                            v.len()
                        )));
                    }
                    let assignment = sys.coords.iter().cloned().zip(v).collect();
                    residual_report(&sys, &assignment)
                }
                (None, Some(path)) => {
                    let text = read_source(Some(path))?;
                    let curves = if text.contains("\"entries\"") {
                        read_curve_tuple::<BigInt>(&text)?
                    } else {
                        vec![read_curve::<BigInt>(&text)?]
                    };
                    let mut lines = Vec::new();
                    for c in &curves {
                        let a = curve_assignment(&sys, c).map_err(domain)?;
                        lines.push(residual_report(&sys, &a)?);
                    }
                    Ok(lines.join("\n"))
                }
                _ => Err(usage("give exactly one of --point and --curve")),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout().lock(), "{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
