use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use plhom_core::dichotomy::{classify, Outcome};
use plhom_core::gadgets::{gadget_graph, gadget_matrix, GadgetKind};
use plhom_core::interpolation::{recover_counts_with, RecoverOptions, DEFAULT_X_BUDGET};
use plhom_core::lattice::{basis_subset_of_d, is_confluent, lattice_of, psi_x_with, DEFAULT_DEGREE_BUDGET};
use plhom_core::multigraph::{parse_graph, serialize_graph};
use plhom_core::partition::{count_map_with, EvalOptions, DEFAULT_ASSIGN_BUDGET};
use plhom_core::planar_ising::{count_pm_planar, eval_tractable, ising_fkt};
use plhom_core::planarity::planar_embed;
use plhom_core::scalar::{fmt_rational, parse_rational};
use plhom_core::structure::{form_detect, predicates};
use plhom_core::symmatrix::parse_matrix;
use plhom_core::{Error, Multigraph, RatMatrix, Rational};

/// Exact graph-homomorphism partition functions on planar multigraphs.
#[derive(Parser, Debug)]
#[command(name = "plhom", version)]
struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for enumeration (0 = rayon default).
    #[arg(long, global = true, env = "PLHOM_THREADS")]
    threads: Option<usize>,
    /// Largest number of assignments (or elimination table entries) per component.
    #[arg(long, global = true, default_value_t = DEFAULT_ASSIGN_BUDGET)]
    assign_budget: u64,
    /// Largest number of k-vectors enumerated for interpolation.
    #[arg(long, global = true, default_value_t = DEFAULT_X_BUDGET)]
    x_budget: u64,
    /// Largest Σxᵢ⁺ accepted by `psi`.
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE_BUDGET)]
    degree_budget: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate Z_M(G).
    Eval {
        #[command(flatten)]
        mg: MatrixGraph,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Classify a 2×2 or 4×4 matrix as tractable, hard or unknown.
    Classify {
        #[arg(long)]
        matrix: String,
    },
    /// Apply a gadget to a graph or its matrix counterpart to a matrix.
    Transform {
        /// thicken:N, stretch:N, rmid:N or bridge.
        #[arg(long)]
        gadget: GadgetKind,
        #[arg(long, value_enum)]
        on: Option<Target>,
        #[arg(long)]
        graph: Option<String>,
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Count assignments by product value (enumeration).
    Counts {
        #[command(flatten)]
        mg: MatrixGraph,
    },
    /// Recover the counts from Z values by Vandermonde interpolation.
    Interpolate {
        #[command(flatten)]
        mg: MatrixGraph,
    },
    /// Lattice of multiplicative relations among positive rationals.
    Lattice {
        /// Comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
    },
    /// Confluence of an integer vector with zero sum.
    Confluence {
        /// Comma-separated integers.
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Ψ_x(M) from the characteristic polynomial.
    Psi {
        #[arg(long)]
        matrix: String,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Forms (I)–(VI) matched by a 4×4 matrix and its structural predicates.
    Forms {
        #[arg(long)]
        matrix: String,
    },
    /// Z for [[a,b],[b,a]] on a planar graph.
    Ising {
        #[arg(long)]
        graph: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Number of perfect matchings of a planar graph.
    Pm {
        #[arg(long)]
        graph: String,
    },
}

#[derive(Args, Debug)]
struct MatrixGraph {
    #[arg(long)]
    matrix: String,
    #[arg(long)]
    graph: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Brute,
    Tractable,
    Auto,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Graph,
    Matrix,
}

enum Failure {
    Usage(String),
    Io(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Out = Result<(String, Value), Failure>;

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))
}

fn load_matrix(path: &str) -> Result<RatMatrix, Failure> {
    Ok(parse_matrix(&read(path)?)?)
}

fn load_graph(path: &str) -> Result<Multigraph, Failure> {
    Ok(parse_graph(&read(path)?)?)
}

fn parse_ints(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse { line: 0, msg: format!("bad integer {t:?}") }.into()))
        .collect()
}

fn parse_rats(s: &str) -> Result<Vec<Rational>, Failure> {
    s.split(',').map(|t| parse_rational(t.trim()).map_err(Failure::from)).collect()
}

fn rat_out(key: &str, r: &Rational) -> (String, Value) {
    let s = fmt_rational(r);
    (s.clone(), json!({ key: s }))
}

fn eval_opts(cli: &Cli) -> EvalOptions {
    EvalOptions {
        assign_budget: cli.assign_budget,
        ..EvalOptions::default()
    }
}

fn run(cli: &Cli) -> Out {
    match &cli.cmd {
        Cmd::Eval { mg, method } => {
            let m = load_matrix(&mg.matrix)?;
            let g = load_graph(&mg.graph)?;
            let brute = || plhom_core::partition::z_brute_with(&m, &g, &eval_opts(cli));
            let (z, used) = match method {
                Method::Brute => (brute()?, "brute"),
                Method::Tractable => (eval_tractable(&m, &g, &classify(&m)?)?, "tractable"),
                Method::Auto => {
                    let fast = match classify(&m) {
                        Ok(v) if v.outcome == Outcome::Tractable => match eval_tractable(&m, &g, &v) {
                            Ok(z) => Some(z),
                            Err(Error::NonPlanar { .. }) => None,
                            Err(e) => return Err(e.into()),
                        },
                        _ => None,
                    };
                    match fast {
                        Some(z) => (z, "tractable"),
                        None => (brute()?, "brute"),
                    }
                }
            };
            let s = fmt_rational(&z);
            Ok((s.clone(), json!({"z": s, "method": used})))
        }
        Cmd::Classify { matrix } => {
            let v = classify(&load_matrix(matrix)?)?;
            Ok((format!("{} ({})", v.outcome, v.reason), v.to_json()))
        }
        Cmd::Transform { gadget, on, graph, matrix } => {
            gadget.validate()?;
            let target = match (on, graph, matrix) {
                (Some(t), _, _) => *t,
                (None, Some(_), None) => Target::Graph,
                (None, None, Some(_)) => Target::Matrix,
                _ => return Err(Failure::Usage("give exactly one of --graph / --matrix, or pick one with --on".into())),
            };
            match target {
                Target::Graph => {
                    let path = graph.as_ref().ok_or_else(|| Failure::Usage("--on graph needs --graph".into()))?;
                    let h = gadget_graph(*gadget, &load_graph(path)?);
                    let text = serialize_graph(&h);
                    Ok((text.trim_end().to_string(), json!({"graph": text})))
                }
                Target::Matrix => {
                    let path = matrix.as_ref().ok_or_else(|| Failure::Usage("--on matrix needs --matrix".into()))?;
                    let n = gadget_matrix(*gadget, &load_matrix(path)?);
                    let v: Value = serde_json::from_str(&n.to_json()).expect("matrix json");
                    Ok((n.to_json(), v))
                }
            }
        }
        Cmd::Counts { mg } => {
            let c = count_map_with(&load_matrix(&mg.matrix)?, &load_graph(&mg.graph)?, &eval_opts(cli))?;
            Ok((counts_text(&c), json!(c.to_entries())))
        }
        Cmd::Interpolate { mg } => {
            let m = load_matrix(&mg.matrix)?;
            let g = load_graph(&mg.graph)?;
            let opts = RecoverOptions {
                eval: eval_opts(cli),
                x_budget: cli.x_budget,
            };
            let c = recover_counts_with(&m, &g, &opts)?;
            let check = match count_map_with(&m, &g, &eval_opts(cli)) {
                Ok(e) => Some(e == c),
                Err(Error::BudgetExceeded { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            if check == Some(false) {
                return Err(Error::Internal("interpolated counts disagree with enumeration".into()).into());
            }
            let tag = match check {
                Some(_) => "crosscheck: ok",
                None => "crosscheck: skipped (budget)",
            };
            Ok((format!("{}\n{tag}", counts_text(&c)), json!({"counts": c.to_entries(), "crosscheck": check})))
        }
        Cmd::Lattice { values } => {
            let b = lattice_of(&parse_rats(values)?)?;
            let in_d = basis_subset_of_d(&b);
            let rows: Vec<String> = b
                .vectors
                .iter()
                .map(|v| v.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
                .collect();
            let text = format!("dim {}\n{}basis_in_D: {in_d}", b.dim(), rows.iter().map(|r| format!("{r}\n")).collect::<String>());
            Ok((text, json!({"q": b.q, "dim": b.dim(), "basis": b.vectors, "basis_in_d": in_d})))
        }
        Cmd::Confluence { vector } => {
            let (ok, part) = is_confluent(&parse_ints(vector)?)?;
            let word = if ok { "confluent" } else { "non-confluent" };
            let text = match &part {
                Some(p) => {
                    let pairs: Vec<String> = p.pairs.iter().map(|(s, t)| format!("{s:?}|{t:?}")).collect();
                    format!("{word} {}", pairs.join(" "))
                }
                None => word.to_string(),
            };
            Ok((text, json!({"confluent": ok, "partition": part})))
        }
        Cmd::Psi { matrix, vector } => {
            let v = psi_x_with(&parse_ints(vector)?, &load_matrix(matrix)?, cli.degree_budget)?;
            Ok(rat_out("psi", &v))
        }
        Cmd::Forms { matrix } => {
            let m = load_matrix(matrix)?;
            let forms = form_detect(&m)?;
            let preds = predicates(&m);
            let names: Vec<String> = forms.iter().map(|(t, s)| format!("{t} {s:?}")).collect();
            let text = if names.is_empty() { "none".to_string() } else { names.join("\n") };
            let fj: Vec<Value> = forms.iter().map(|(t, s)| json!({"form": t.to_string(), "sigma": s})).collect();
            Ok((text, json!({"forms": fj, "predicates": preds})))
        }
        Cmd::Ising { graph, a, b } => {
            let z = ising_fkt(&load_graph(graph)?, &parse_rational(a)?, &parse_rational(b)?)?;
            Ok(rat_out("z", &z))
        }
        Cmd::Pm { graph } => {
            let mut g = load_graph(graph)?;
            if g.rotation().is_none() {
                g.set_rotation(planar_embed(&g)?)?;
            }
            let rot = g.rotation().expect("set above").clone();
            let w = vec![Rational::from_integer(1.into()); g.n_edges()];
            Ok(rat_out("count", &count_pm_planar(&g, &rot, &w)?))
        }
    }
}

fn counts_text(c: &plhom_core::partition::CountMap) -> String {
    c.iter().map(|(v, n)| format!("{} {n}", fmt_rational(v))).collect::<Vec<_>>().join("\n")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: USAGE: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok((text, v)) => {
            if cli.json {
                println!("{v}");
            } else {
                println!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (code, tag, msg) = match f {
                Failure::Usage(m) => (1, "USAGE", m),
                Failure::Io(m) => (2, "IO_ERROR", m),
                Failure::Lib(e) => (if e.is_parse() { 2 } else { 3 }, e.code(), e.to_string()),
            };
            eprintln!("error: {tag}: {}", msg.replace('\n', " "));
            ExitCode::from(code)
        }
    }
}
