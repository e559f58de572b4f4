//! Batch front end for `kght-core`.
//!
//! One invocation loads a graph, runs one verb and prints one
//! `key=value` record per query. Exit codes: 0 success, 1 domain error,
//! 2 usage error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use clap::Parser;
use kght_core::literal::{format_paths, parse_pairs, parse_paths};
use kght_core::{
    action, extend_with, i_mu, in_kernel_n, is_aperiodic, is_period, make_pis, make_unitary,
    paths_equivalent, per_group_generators, periodicity, refute_equivalence, semigroup_multiply,
    CylinderSet, Degree, Error, ExtendMethod, ExtendOptions, KGraph, LassoPath, Pair, Path,
    PeriodCandidate, PisElement, PisTable, Preset, UTable, Verdict,
};

mod examples;

pub const USAGE: &str = "\
usage: kght <graphfile | preset:<name>[:p1,p2]> <verb> [args] [options]
       kght preset <name> [params]

verbs:
  validate                      graph summary
  enum <degree> [vertex]        paths of a degree, e.g. `enum 1,2`
  lmin <mu> <nu>                minimal common extensions
  mul <A> <B>                   product of tables
  inv <A>                       inverse (adjoint for partial isometries)
  reduce <A>                    reduced form
  eq <A> <B>                    equality as operators
  kernel <A>                    membership in the kernel of the action
  periods [m n]                 period lattice up to --bound, or test m - n
  equiv <mu> <nu>               equivalence of paths (witness at --depth)
  extend <A>                    complete a partial isometry to a unitary
  imu <mu> <A>                  the embedding I_mu(A)
  act <A> <path | lasso>        image of a prefix or an eventually periodic path
  fix <A>                       interior of the fixed-point set
  orbit <lasso> <A>...          orbit under the tables within --radius
  compress <Y> <target>         table sending Y into Z(target)
  transport <A> <B>             partial isometry with source A and range in B
  quotient <A>                  the induced table on the flip quotient
  examples                      replay the documented claims for the graph

literals:
  path      v:<vertex> | c1.1.c2.2 (single vertex) | e2.e1 (edge names)
  table     [alpha -> beta, ...]      or a name given with --bind
  set       {mu, nu, ...}
  lasso     <head>|(<cycle>)
  degree    1,2

options:
  --bound B         period candidate bound (default 3)
  --depth D         equivalence witness depth per color (default 4)
  --budget S        split budget for extension balancing
  --radius R        orbit radius (default 2)
  --bind NAME=TABLE bind a table literal to a name
";

/// The result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "kght", disable_help_subcommand = true)]
struct Cli {
    /// Graph file, or `preset:<name>[:p1,p2]`.
    graph: String,
    verb: String,
    args: Vec<String>,
    #[arg(long, default_value_t = 3)]
    bound: u32,
    #[arg(long, default_value_t = 4)]
    depth: u32,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long, default_value_t = 2)]
    radius: usize,
    #[arg(long = "bind", value_name = "NAME=TABLE")]
    bind: Vec<String>,
}

/// Bounds and limits shared by all verbs; every value is positive.
#[derive(Debug, Clone)]
pub struct Config {
    pub bound: u32,
    pub depth: u32,
    pub budget: Option<usize>,
    pub radius: usize,
    pub seed: u64,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A loaded graph with its named tables and configuration.
pub struct Session {
    graph: Arc<KGraph>,
    bindings: BTreeMap<String, Vec<Pair>>,
    config: Config,
}

/// A table operand: unitary when both columns are complete.
enum Operand {
    Unitary(UTable),
    Partial(PisTable),
}

impl Operand {
    fn pis(&self) -> &PisTable {
        match self {
            Operand::Unitary(u) => u.as_pis(),
            Operand::Partial(p) => p,
        }
    }
}

/// One `key=value` line.
pub struct Record(String);

impl Record {
    pub fn new(verb: &str) -> Self {
        Record(format!("verb={verb}"))
    }

    pub fn claim(name: &str, pass: bool) -> Self {
        Record(format!("claim={name} status={}", if pass { "PASS" } else { "FAIL" }))
    }

    pub fn kv(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        let _ = write!(self.0, " {key}={}", quote(&value.to_string()));
        self
    }

    pub fn line(self) -> String {
        self.0 + "\n"
    }
}

/// Quotes values containing whitespace, quotes or `=`.
fn quote(v: &str) -> String {
    if !v.is_empty() && !v.chars().any(|c| c.is_whitespace() || c == '"' || c == '=') {
        return v.to_string();
    }
    format!("\"{}\"", v.replace('\\', "\\\\").replace('"', "\\\""))
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Loads a graph file or a `preset:` spec.
pub fn load_graph(spec: &str) -> std::result::Result<KGraph, String> {
    if let Some(p) = spec.strip_prefix("preset:") {
        return Preset::from_spec(p).map(|p| p.graph()).map_err(|e| e.to_string());
    }
    let text = std::fs::read_to_string(spec).map_err(|e| format!("cannot read {spec}: {e}"))?;
    KGraph::parse(&text).map_err(|e| e.to_string())
}

fn error_outcome(err: CliError) -> Outcome {
    match err {
        CliError::Usage(msg) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n{USAGE}"),
        },
        CliError::Domain(e) => Outcome {
            code: 1,
            stdout: Record(format!("error={}", e.kind())).kv("message", &e).line(),
            stderr: String::new(),
        },
        CliError::Io(msg) => Outcome {
            code: 1,
            stdout: Record("error=Io".to_string()).kv("message", msg).line(),
            stderr: String::new(),
        },
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run(argv: &[String]) -> Outcome {
    match run_inner(argv) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => error_outcome(e),
    }
}

fn run_inner(argv: &[String]) -> CliResult<String> {
    if argv.get(1).map(String::as_str) == Some("preset") {
        return preset_text(&argv[2..]);
    }
    let cli = Cli::try_parse_from(argv).map_err(|e| usage(e.to_string().trim_end().to_string()))?;
    if cli.bound == 0 || cli.depth == 0 || cli.radius == 0 || cli.budget == Some(0) {
        return Err(usage("--bound, --depth, --radius and --budget must be positive"));
    }
    let seed = match std::env::var("KGHT_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| usage(format!("KGHT_SEED must be an unsigned integer, got `{s}`")))?,
        Err(_) => 0,
    };
    let graph = Arc::new(load_graph(&cli.graph).map_err(CliError::Io)?);
    let config = Config {
        bound: cli.bound,
        depth: cli.depth,
        budget: cli.budget,
        radius: cli.radius,
        seed,
    };
    let mut session = Session::new(graph, config);
    for b in &cli.bind {
        let (name, table) = b
            .split_once('=')
            .ok_or_else(|| usage(format!("--bind expects NAME=TABLE, got `{b}`")))?;
        session.bind(name.trim(), table)?;
    }
    session.dispatch(&cli.verb, &cli.args)
}

fn preset_text(args: &[String]) -> CliResult<String> {
    let name = args.first().ok_or_else(|| usage("preset needs a name"))?;
    let params = args[1..]
        .iter()
        .flat_map(|a| a.split(',').filter(|p| !p.is_empty()))
        .map(|p| {
            p.parse::<usize>()
                .map_err(|_| usage(format!("preset parameter `{p}` is not a number")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Preset::from_parts(name, &params)?.text())
}

fn expect_args(verb: &str, args: &[String], min: usize, max: usize, shape: &str) -> CliResult<()> {
    if args.len() < min || args.len() > max {
        return Err(usage(format!("`{verb}` expects: {verb} {shape}")));
    }
    Ok(())
}

impl Session {
    pub fn new(graph: Arc<KGraph>, config: Config) -> Self {
        Session {
            graph,
            bindings: BTreeMap::new(),
            config,
        }
    }

    pub fn graph(&self) -> &Arc<KGraph> {
        &self.graph
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    fn bind(&mut self, name: &str, table: &str) -> CliResult<()> {
        let pairs = parse_pairs(&self.graph, table)?;
        make_pis(&self.graph, pairs.clone())?;
        self.bindings.insert(name.to_string(), pairs);
        Ok(())
    }

    fn pairs(&self, arg: &str) -> CliResult<Vec<Pair>> {
        match self.bindings.get(arg.trim()) {
            Some(p) => Ok(p.clone()),
            None => Ok(parse_pairs(&self.graph, arg)?),
        }
    }

    fn operand(&self, arg: &str) -> CliResult<Operand> {
        let pis = make_pis(&self.graph, self.pairs(arg)?)?;
        Ok(match UTable::from_pis(pis.clone()) {
            Ok(u) => Operand::Unitary(u),
            Err(_) => Operand::Partial(pis),
        })
    }

    fn unitary(&self, arg: &str) -> CliResult<UTable> {
        Ok(make_unitary(&self.graph, self.pairs(arg)?)?)
    }

    fn path(&self, arg: &str) -> CliResult<Path> {
        Ok(self.graph.parse_path(arg)?)
    }

    fn set(&self, arg: &str) -> CliResult<CylinderSet> {
        Ok(CylinderSet::new(self.graph.clone(), parse_paths(&self.graph, arg)?)?)
    }

    fn degree(&self, arg: &str) -> CliResult<Degree> {
        let parts = arg
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::BadParameters(format!("degree `{arg}` must be comma-separated naturals")))?;
        if parts.len() != self.graph.rank() {
            return Err(Error::DegreeOutOfRange.into());
        }
        Ok(Degree::from_slice(&parts))
    }

    fn dispatch(&self, verb: &str, args: &[String]) -> CliResult<String> {
        let g = &*self.graph;
        match verb {
            "validate" => {
                expect_args(verb, args, 0, 0, "")?;
                let counts: Vec<String> = g.color_counts().iter().map(|c| c.to_string()).collect();
                Ok(Record::new(verb)
                    .kv("status", "valid")
                    .kv("rank", g.rank())
                    .kv("vertices", g.vertex_count())
                    .kv("edges", g.edges().len())
                    .kv("colors", counts.join(","))
                    .kv("single_vertex", g.is_single_vertex())
                    .kv("strongly_connected", g.is_strongly_connected())
                    .kv("flip", g.is_flip())
                    .line())
            }
            "enum" => {
                expect_args(verb, args, 1, 2, "<degree> [vertex]")?;
                let d = self.degree(&args[0])?;
                let vertices: Vec<_> = match args.get(1) {
                    Some(name) => vec![g
                        .vertex_id(name)
                        .ok_or_else(|| Error::BadParameters(format!("unknown vertex `{name}`")))?],
                    None => g.vertices().collect(),
                };
                let count: u128 = vertices.iter().map(|&v| g.count_paths(v, &d)).sum();
                if count > 100_000 {
                    return Err(Error::BadParameters(format!("{count} paths is too many to list")).into());
                }
                let paths: Vec<Path> = vertices.iter().flat_map(|&v| g.enumerate(v, &d)).collect();
                Ok(Record::new(verb)
                    .kv("degree", &d)
                    .kv("count", count)
                    .kv("paths", format_paths(g, &paths))
                    .line())
            }
            "lmin" => {
                expect_args(verb, args, 2, 2, "<mu> <nu>")?;
                let (mu, nu) = (self.path(&args[0])?, self.path(&args[1])?);
                let ext = g.lambda_min(&mu, &nu);
                Ok(Record::new(verb)
                    .kv("count", ext.len())
                    .kv("pairs", kght_core::literal::format_pairs(g, &ext))
                    .line())
            }
            "mul" => {
                expect_args(verb, args, 2, 2, "<A> <B>")?;
                let (a, b) = (self.operand(&args[0])?, self.operand(&args[1])?);
                let rec = Record::new(verb);
                Ok(match (&a, &b) {
                    (Operand::Unitary(u), Operand::Unitary(v)) => {
                        rec.kv("kind", "unitary").kv("table", u.multiply(v)?.to_literal())
                    }
                    _ => match semigroup_multiply(a.pis(), b.pis())? {
                        PisElement::Zero => rec.kv("kind", "zero").kv("table", "0"),
                        PisElement::Table(t) => rec.kv("kind", "partial").kv("table", t.to_literal()),
                    },
                }
                .line())
            }
            "inv" => {
                expect_args(verb, args, 1, 1, "<A>")?;
                let rec = Record::new(verb);
                Ok(match self.operand(&args[0])? {
                    Operand::Unitary(u) => rec.kv("kind", "unitary").kv("table", u.inverse().to_literal()),
                    Operand::Partial(p) => rec.kv("kind", "partial").kv("table", p.adjoint().to_literal()),
                }
                .line())
            }
            "reduce" => {
                expect_args(verb, args, 1, 1, "<A>")?;
                let a = self.operand(&args[0])?;
                let r = a.pis().reduce();
                Ok(Record::new(verb)
                    .kv("size", r.pairs().len())
                    .kv("table", r.to_literal())
                    .line())
            }
            "eq" => {
                expect_args(verb, args, 2, 2, "<A> <B>")?;
                let (a, b) = (self.operand(&args[0])?, self.operand(&args[1])?);
                Ok(Record::new(verb).kv("equal", a.pis().equals(b.pis())?).line())
            }
            "kernel" => {
                expect_args(verb, args, 1, 1, "<A>")?;
                let u = self.unitary(&args[0])?;
                Ok(Record::new(verb).kv("in_kernel", in_kernel_n(&u)?).line())
            }
            "periods" => self.periods(args),
            "equiv" => {
                expect_args(verb, args, 2, 2, "<mu> <nu>")?;
                let (mu, nu) = (self.path(&args[0])?, self.path(&args[1])?);
                let eq = paths_equivalent(g, &mu, &nu)?;
                let mut rec = Record::new(verb).kv("equivalent", eq);
                if !eq {
                    let depth = Degree::ones(g.rank()).scale(self.config.depth);
                    if let Some(w) = refute_equivalence(g, &mu, &nu, &depth)? {
                        rec = rec.kv("witness", g.format_path(&w));
                    }
                }
                Ok(rec.line())
            }
            "extend" => {
                expect_args(verb, args, 1, 1, "<A>")?;
                let opts = ExtendOptions {
                    budget: self.config.budget,
                };
                let (u, method) = extend_with(&self.graph, self.pairs(&args[0])?, &opts)?;
                let method = match method {
                    ExtendMethod::AlreadyUnitary => "already_unitary",
                    ExtendMethod::Interleaved => "interleaved",
                    ExtendMethod::Balanced => "balanced",
                };
                Ok(Record::new(verb)
                    .kv("method", method)
                    .kv("size", u.len())
                    .kv("table", u.to_literal())
                    .line())
            }
            "imu" => {
                expect_args(verb, args, 2, 2, "<mu> <A>")?;
                let mu = self.path(&args[0])?;
                let u = i_mu(&mu, &self.unitary(&args[1])?)?;
                Ok(Record::new(verb).kv("table", u.to_literal()).line())
            }
            "act" => {
                expect_args(verb, args, 2, 2, "<A> <path | lasso>")?;
                let u = self.unitary(&args[0])?;
                let image = if args[1].contains('|') {
                    let x = LassoPath::parse(g, &args[1])?;
                    action::apply_lasso(&u, &x)?.format(g)
                } else {
                    g.format_path(&action::apply_prefix(&u, &self.path(&args[1])?)?)
                };
                Ok(Record::new(verb).kv("image", image).line())
            }
            "fix" => {
                expect_args(verb, args, 1, 1, "<A>")?;
                let f = action::fix_interior(&self.unitary(&args[0])?);
                Ok(Record::new(verb)
                    .kv("empty", f.is_empty())
                    .kv("interior", f.to_literal())
                    .line())
            }
            "orbit" => {
                expect_args(verb, args, 2, usize::MAX, "<lasso> <A>...")?;
                let x = LassoPath::parse(g, &args[0])?;
                let gens = args[1..]
                    .iter()
                    .map(|a| self.unitary(a))
                    .collect::<CliResult<Vec<_>>>()?;
                let orbit = action::orbit(&x, &gens, self.config.radius)?;
                let listed: Vec<String> = orbit.iter().map(|y| y.format(g)).collect();
                Ok(Record::new(verb)
                    .kv("radius", self.config.radius)
                    .kv("count", orbit.len())
                    .kv("orbit", format!("{{{}}}", listed.join(", ")))
                    .line())
            }
            "compress" => {
                expect_args(verb, args, 2, 2, "<Y> <target>")?;
                let u = action::compress(&self.set(&args[0])?, &self.path(&args[1])?)?;
                Ok(Record::new(verb).kv("table", u.to_literal()).line())
            }
            "transport" => {
                expect_args(verb, args, 2, 2, "<A> <B>")?;
                let t = action::transport(&self.set(&args[0])?, &self.set(&args[1])?)?;
                Ok(Record::new(verb).kv("table", t.to_literal()).line())
            }
            "quotient" => {
                expect_args(verb, args, 1, 1, "<A>")?;
                let q = periodicity::flip_quotient(&self.unitary(&args[0])?)?;
                Ok(Record::new(verb)
                    .kv("identity", q.is_identity())
                    .kv("table", q.to_literal())
                    .line())
            }
            "examples" => {
                expect_args(verb, args, 0, 0, "")?;
                Ok(examples::replay(self)?)
            }
            other => Err(usage(format!("unknown verb `{other}`"))),
        }
    }

    fn periods(&self, args: &[String]) -> CliResult<String> {
        expect_args("periods", args, 0, 2, "[m n]")?;
        let g = &*self.graph;
        if args.len() == 2 {
            let cand = PeriodCandidate::new(self.degree(&args[0])?, self.degree(&args[1])?)?;
            return Ok(Record::new("periods")
                .kv("class", &cand)
                .kv("is_period", is_period(g, &cand)?)
                .line());
        }
        if args.len() == 1 {
            return Err(usage("`periods` expects: periods [m n]"));
        }
        let gens = per_group_generators(g, self.config.bound)?;
        let listed: Vec<String> = gens.iter().map(|c| c.to_string()).collect();
        let aperiodic = matches!(is_aperiodic(g, self.config.bound)?, Verdict::NoPeriodUpToBound(_));
        Ok(Record::new("periods")
            .kv("bound", self.config.bound)
            .kv("aperiodic_up_to_bound", aperiodic)
            .kv("lattice_rank", gens.len())
            .kv("generators", listed.join(";"))
            .line())
    }
}
