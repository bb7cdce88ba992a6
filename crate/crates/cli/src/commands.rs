use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::fmt;
use std::io::{Read, Write};
use vertexlab::encodings::{self, UGraph};
use vertexlab::exactgeom::{self, HPolytope, IntegerBox};
use vertexlab::flows::{self, FlowNetwork};
use vertexlab::netmatrix::{self, NetworkMatrixSpec, SignedMatrix};
use vertexlab::reductions::{self, cnf::CnfFormula};
use vertexlab::sampling::{self, ExactCounter, ListSampler, SplitOrder};
use vertexlab::{oracles, Budget, Error};

/// Exact vertex counting for small integer polytopes, with the encodings,
/// reductions and brute-force oracles around it.
#[derive(Debug, Parser)]
#[command(name = "vertexlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count (or list) the integral vertices of a polytope.
    Vertices {
        /// Polytope file, `-` for stdin.
        #[arg(default_value = "-")]
        file: String,
        /// Search the box `lo..hi` in every coordinate.
        #[arg(long = "box", value_name = "LO..HI", conflicts_with = "promise_01")]
        window: Option<String>,
        /// Count 0/1 points, trusting that the polytope is 0/1.
        #[arg(long = "promise-01")]
        promise_01: bool,
        /// Also print the vertices.
        #[arg(long)]
        list: bool,
    },
    /// Write the polytope of a graph problem.
    Encode(EncodeArgs),
    /// Run a counting reduction and write the target instance.
    #[command(subcommand)]
    Reduce(Reduce),
    /// Brute-force counters.
    #[command(subcommand)]
    Oracle(Oracle),
    /// Network-matrix polytopes as integer flows.
    #[command(subcommand)]
    Flow(Flow),
    /// Network matrices from a tree and a graph.
    #[command(subcommand)]
    Netmatrix(Netmatrix),
    /// Check total unimodularity by enumerating minors.
    TuCheck {
        matrix: String,
        #[arg(long = "max-order")]
        max_order: usize,
    },
    /// Draw uniform vertices of a 0/1 polytope.
    Sample {
        #[arg(default_value = "-")]
        file: String,
        #[arg(long)]
        draws: usize,
        #[arg(long)]
        seed: u64,
        /// Split coordinates in a random order per draw.
        #[arg(long)]
        shuffled: bool,
    },
    /// Estimate the vertex count of a 0/1 polytope from uniform samples.
    Estimate {
        #[arg(default_value = "-")]
        file: String,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Problem {
    Pm,
    Bis,
    Matching,
    P2m,
}

#[derive(Debug, Args)]
struct EncodeArgs {
    problem: Problem,
    #[arg(default_value = "-")]
    graph: String,
    /// Perfect matchings only (`matching`).
    #[arg(long)]
    perfect: bool,
    /// Write the network spec (`bis`, `matching`).
    #[arg(long = "spec-out")]
    spec_out: Option<String>,
    /// Write the right-hand side vector (`bis`, `matching`).
    #[arg(long = "b-out")]
    b_out: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Reduce {
    /// Hamiltonian s-t path instance to odd cycle cover instance.
    Occ { graph: String, s: usize, t: usize },
    /// Replace every edge by a hexagon gadget.
    Power {
        graph: String,
        #[arg(long)]
        ell: usize,
        /// Write the edge-to-gadget mapping as JSON.
        #[arg(long = "map-out")]
        map_out: Option<String>,
    },
    /// Transposed-network 0/1 polytope to a 1p1n formula in DIMACS.
    TnetSat {
        spec: String,
        b: String,
        #[arg(long, default_value_t = 0)]
        root: usize,
    },
    /// The polytope `transpose(generate(spec)) x <= b` itself.
    TnetPolytope { spec: String, b: String },
}

#[derive(Debug, Subcommand)]
enum Oracle {
    /// Independent sets of a bipartite graph.
    Bis {
        #[arg(default_value = "-")]
        graph: String,
    },
    /// Perfect matchings of a bipartite graph.
    Pm {
        #[arg(default_value = "-")]
        graph: String,
    },
    /// Models of a 1p1n DIMACS formula.
    #[command(name = "1p1nsat")]
    Sat {
        #[arg(default_value = "-")]
        cnf: String,
    },
    /// Perfect 2-matching covers.
    P2m {
        #[arg(default_value = "-")]
        graph: String,
        #[arg(long)]
        list: bool,
    },
    /// Odd cycle covers.
    Occ {
        #[arg(default_value = "-")]
        graph: String,
    },
    /// Whether a Hamiltonian s-t path exists.
    Hampath { graph: String, s: usize, t: usize },
    /// Integer flows of a network file.
    Flows {
        #[arg(default_value = "-")]
        network: String,
    },
}

#[derive(Debug, Subcommand)]
enum Flow {
    /// Flow network of `{0 <= x <= 1, A x <= b}`.
    Translate {
        spec: String,
        b: String,
        /// Lower bounds for the tree arcs instead of minus infinity.
        #[arg(long)]
        lower: Option<String>,
    },
    /// Count the flows of a unit-bound network through perfect matchings.
    CountViaPm {
        #[arg(default_value = "-")]
        network: String,
    },
}

#[derive(Debug, Subcommand)]
enum Netmatrix {
    /// Write the network matrix of a spec.
    Generate { spec: String },
    /// The polytope `generate(spec) x <= b`.
    Polytope { spec: String, b: String },
}

/// Failure with its exit code.
enum Failure {
    Input(String),
    Budget(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Budget(m) => f.write_str(m),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Budget(_) => 2,
        }
    }
}

fn lib_error(source: &str) -> impl Fn(Error) -> Failure + '_ {
    move |e| match e {
        Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
        Error::Parse {
            line,
            column,
            message,
        } => Failure::Input(format!("{source}:{line}:{column}: {message}")),
        other => Failure::Input(other.to_string()),
    }
}

type Outcome = std::result::Result<(), Failure>;

struct Context<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    budget: Budget,
}

impl Context<'_> {
    fn read(&mut self, path: &str) -> std::result::Result<String, Failure> {
        if path == "-" {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            Ok(s)
        } else {
            std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
        }
    }

    fn load<T>(
        &mut self,
        path: &str,
        parse: impl Fn(&str) -> vertexlab::Result<T>,
    ) -> std::result::Result<T, Failure> {
        let text = self.read(path)?;
        parse(&text).map_err(lib_error(path))
    }

    fn emit(&mut self, text: &str) -> Outcome {
        self.out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Input(format!("stdout: {e}")))
    }

    fn json(&mut self, value: serde_json::Value) -> Outcome {
        self.emit(&format!("{value}\n"))
    }

    fn count(&mut self, c: impl fmt::Display) -> Outcome {
        self.json(json!({ "count": c.to_string() }))
    }
}

fn write_file(path: &str, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn parse_window(raw: &str, n: usize) -> std::result::Result<IntegerBox, Failure> {
    let bad = || Failure::Input(format!("--box expects LO..HI, got {raw:?}"));
    let (lo, hi) = raw.split_once("..").ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    IntegerBox::uniform(n, lo, hi).map_err(lib_error("--box"))
}

fn bits(x: &[i64]) -> String {
    x.iter().map(|b| b.to_string()).collect()
}

/// Runs one command line; returns the process exit code.
pub fn run(args: &[String], stdin: &mut dyn Read, out: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let budget = match Budget::from_env() {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let mut ctx = Context { stdin, out, budget };
    match dispatch(cli.command, &mut ctx) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {f}");
            f.code()
        }
    }
}

fn dispatch(command: Command, ctx: &mut Context) -> Outcome {
    let budget = ctx.budget;
    match command {
        Command::Vertices {
            file,
            window,
            promise_01,
            list,
        } => {
            let p = ctx.load(&file, HPolytope::parse)?;
            let vertices: Vec<String> = if promise_01 {
                exactgeom::feasible_points_01(&p, &budget)
                    .map_err(lib_error(&file))?
                    .iter()
                    .map(|x| bits(x))
                    .collect()
            } else {
                let raw = window.ok_or_else(|| {
                    Failure::Input("vertices needs --box LO..HI or --promise-01".into())
                })?;
                let window = parse_window(&raw, p.dim())?;
                exactgeom::enumerate_integral_vertices(&p, &window, &budget)
                    .map_err(lib_error(&file))?
                    .iter()
                    .map(|v| v.to_string())
                    .collect()
            };
            if list {
                ctx.json(json!({ "count": vertices.len().to_string(), "vertices": vertices }))
            } else {
                ctx.count(vertices.len())
            }
        }
        Command::Encode(args) => encode(args, ctx),
        Command::Reduce(r) => reduce(r, ctx),
        Command::Oracle(o) => oracle(o, ctx),
        Command::Flow(Flow::Translate { spec, b, lower }) => {
            let s = ctx.load(&spec, NetworkMatrixSpec::parse)?;
            let rhs = ctx.load(&b, netmatrix::parse_vector)?;
            let lower = match lower {
                Some(path) => Some(ctx.load(&path, netmatrix::parse_vector)?),
                None => None,
            };
            let net =
                flows::netmatrix_to_flow(&s, &rhs, lower.as_deref()).map_err(lib_error(&spec))?;
            ctx.emit(&net.to_text())
        }
        Command::Flow(Flow::CountViaPm { network }) => {
            let net = ctx.load(&network, FlowNetwork::parse)?;
            let c = flows::count_unit_flows_via_pm(&net, &budget).map_err(lib_error(&network))?;
            ctx.count(c)
        }
        Command::Netmatrix(Netmatrix::Generate { spec }) => {
            let s = ctx.load(&spec, NetworkMatrixSpec::parse)?;
            ctx.emit(&netmatrix::generate(&s).to_text())
        }
        Command::Netmatrix(Netmatrix::Polytope { spec, b }) => {
            let s = ctx.load(&spec, NetworkMatrixSpec::parse)?;
            let rhs = ctx.load(&b, netmatrix::parse_vector)?;
            let p = netmatrix::network_polytope(&s, &rhs).map_err(lib_error(&b))?;
            ctx.emit(&p.to_text())
        }
        Command::TuCheck { matrix, max_order } => {
            let m = ctx.load(&matrix, SignedMatrix::parse)?;
            let ok = netmatrix::is_totally_unimodular_bruteforce(&m, max_order, &budget)
                .map_err(lib_error(&matrix))?;
            ctx.json(json!({
                "max-order": max_order,
                "result": if ok { "pass" } else { "fail" },
            }))
        }
        Command::Sample {
            file,
            draws,
            seed,
            shuffled,
        } => {
            let p = ctx.load(&file, HPolytope::parse)?;
            let mut counter = ExactCounter::new(budget);
            let mut rng = sampling::seeded_rng(seed);
            let order = if shuffled {
                SplitOrder::Shuffled
            } else {
                SplitOrder::Sequential
            };
            let mut text = String::new();
            for _ in 0..draws {
                let x = sampling::sample_vertex_ordered(&p, &mut counter, order, &mut rng)
                    .map_err(|e| match e {
                        Error::Infeasible => {
                            Failure::Input(format!("{file}: polytope has no 0/1 points"))
                        }
                        e => lib_error(&file)(e),
                    })?;
                text.push_str(&bits(&x));
                text.push('\n');
            }
            ctx.emit(&text)
        }
        Command::Estimate {
            file,
            eps,
            delta,
            seed,
        } => {
            let p = ctx.load(&file, HPolytope::parse)?;
            let mut sampler = ListSampler { budget };
            let est = sampling::count_from_sampler(&p, &mut sampler, eps, delta, seed)
                .map_err(lib_error(&file))?;
            ctx.json(json!({
                "count-estimate": est.count.to_string(),
                "epsilon": est.epsilon,
                "delta": est.delta,
                "seed": est.seed,
            }))
        }
    }
}

fn encode(args: EncodeArgs, ctx: &mut Context) -> Outcome {
    let path = args.graph.clone();
    let g = ctx.load(&path, UGraph::parse)?;
    let err = lib_error(&path);
    if args.perfect && !matches!(args.problem, Problem::Matching) {
        return Err(Failure::Input(
            "--perfect only applies to `matching`".into(),
        ));
    }
    let (polytope, side_files) = match args.problem {
        Problem::Pm => (encodings::pm_polytope(&g).map_err(&err)?, None),
        Problem::P2m => (encodings::p2m_polytope(&g).map_err(&err)?, None),
        Problem::Bis => {
            let e = encodings::bis_polytope(&g).map_err(&err)?;
            (e.polytope, Some((e.spec, e.rhs)))
        }
        Problem::Matching => {
            let (spec, rhs) =
                encodings::matching_polytope_netspec(&g, args.perfect).map_err(&err)?;
            (
                netmatrix::network_polytope(&spec, &rhs).map_err(&err)?,
                Some((spec, rhs)),
            )
        }
    };
    match (side_files, &args.spec_out, &args.b_out) {
        (Some((spec, rhs)), s, b) => {
            if let Some(s) = s {
                write_file(s, &spec.to_text())?;
            }
            if let Some(b) = b {
                write_file(b, &netmatrix::vector_to_text(&rhs))?;
            }
        }
        (None, None, None) => {}
        (None, _, _) => {
            return Err(Failure::Input(
                "--spec-out/--b-out only apply to `bis` and `matching`".into(),
            ))
        }
    }
    ctx.emit(&polytope.to_text())
}

fn reduce(r: Reduce, ctx: &mut Context) -> Outcome {
    let budget = ctx.budget;
    match r {
        Reduce::Occ { graph, s, t } => {
            let g = ctx.load(&graph, UGraph::parse)?;
            let h = reductions::hampath_to_occ(&g, s, t).map_err(lib_error(&graph))?;
            ctx.emit(&h.to_text())
        }
        Reduce::Power {
            graph,
            ell,
            map_out,
        } => {
            let g = ctx.load(&graph, UGraph::parse)?;
            let p = reductions::power_graph(&g, ell, &budget).map_err(lib_error(&graph))?;
            if let Some(path) = map_out {
                let copies: Vec<serde_json::Value> = p
                    .copies
                    .iter()
                    .map(|c| {
                        json!({
                            "edge": c.edge,
                            "u": c.u,
                            "v": c.v,
                            "vertices": [c.vertices.start, c.vertices.end],
                            "edges": [c.edges.start, c.edges.end],
                        })
                    })
                    .collect();
                write_file(
                    &path,
                    &format!("{}\n", json!({ "ell": ell, "gadgets": copies })),
                )?;
            }
            ctx.emit(&p.graph.to_text())
        }
        Reduce::TnetSat { spec, b, root } => {
            let s = ctx.load(&spec, NetworkMatrixSpec::parse)?;
            let rhs = ctx.load(&b, netmatrix::parse_vector)?;
            let phi = reductions::tnet_to_1p1nsat(&s, &rhs, root).map_err(lib_error(&spec))?;
            ctx.emit(&phi.to_dimacs())
        }
        Reduce::TnetPolytope { spec, b } => {
            let s = ctx.load(&spec, NetworkMatrixSpec::parse)?;
            let rhs = ctx.load(&b, netmatrix::parse_vector)?;
            let p = netmatrix::transpose_network_polytope(&s, &rhs).map_err(lib_error(&b))?;
            ctx.emit(&p.to_text())
        }
    }
}

fn oracle(o: Oracle, ctx: &mut Context) -> Outcome {
    let budget = ctx.budget;
    match o {
        Oracle::Bis { graph } => {
            let g = ctx.load(&graph, UGraph::parse)?;
            ctx.count(oracles::count_bis(&g, &budget).map_err(lib_error(&graph))?)
        }
        Oracle::Pm { graph } => {
            let g = ctx.load(&graph, UGraph::parse)?;
            ctx.count(oracles::count_perfect_matchings(&g, &budget).map_err(lib_error(&graph))?)
        }
        Oracle::Sat { cnf } => {
            let phi = ctx.load(&cnf, CnfFormula::parse_dimacs)?;
            ctx.count(oracles::count_1p1nsat(&phi, &budget).map_err(lib_error(&cnf))?)
        }
        Oracle::P2m { graph, list } => {
            let g = ctx.load(&graph, UGraph::parse)?;
            let covers = oracles::enumerate_p2m_covers(&g, &budget).map_err(lib_error(&graph))?;
            if list {
                let coords: Vec<String> = covers
                    .iter()
                    .map(|c| c.coords.iter().map(|x| x.to_string()).collect())
                    .collect();
                ctx.json(json!({ "count": covers.len().to_string(), "covers": coords }))
            } else {
                ctx.count(covers.len())
            }
        }
        Oracle::Occ { graph } => {
            let g = ctx.load(&graph, UGraph::parse)?;
            ctx.count(oracles::count_odd_cycle_covers(&g, &budget).map_err(lib_error(&graph))?)
        }
        Oracle::Hampath { graph, s, t } => {
            let g = ctx.load(&graph, UGraph::parse)?;
            let exists =
                oracles::exists_hamiltonian_path(&g, s, t, &budget).map_err(lib_error(&graph))?;
            ctx.json(json!({ "exists": exists }))
        }
        Oracle::Flows { network } => {
            let net = ctx.load(&network, FlowNetwork::parse)?;
            ctx.count(oracles::count_integer_flows(&net, &budget).map_err(lib_error(&network))?)
        }
    }
}
