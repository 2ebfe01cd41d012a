//! Command-line front end: tree file parsing, argument definitions and
//! command dispatch. The binary is a thin wrapper around [`run`].

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use thiserror::Error;

use crate::closed_forms::{
    line_betti_linear, line_nonzero, line_pd, line_reg, linear_strand, linearity,
};
use crate::oracle::{hochster_betti, Characteristic, OracleError, SquarefreeIdeal};
use crate::resolution::{BettiTable, ResolutionError, Resolver};
use crate::tree::{ForestBuilder, RootedForest, TreeError, Vertex};

/// Largest `n` for which `line --verify` runs the recursion.
pub const LINE_VERIFY_LIMIT: usize = 30;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Tree { line: usize, source: TreeError },
    #[error(transparent)]
    Structure(TreeError),
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Invalid(String),
}

/// Parses the plain text tree format.
///
/// `#` starts a comment; blank lines are ignored; `vertices: a b c` declares
/// (possibly isolated) vertices; any other line is `parent child`.
pub fn parse_tree_file(text: &str) -> Result<RootedForest, ParseError> {
    let mut builder = ForestBuilder::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| ParseError::Syntax { line, message };
        let tree = |source: TreeError| ParseError::Tree { line, source };
        let parse_id = |tok: &str| {
            tok.parse::<Vertex>()
                .map_err(|_| syntax(format!("{tok:?} is not a vertex identifier")))
        };
        if let Some(rest) = content.strip_prefix("vertices:") {
            for tok in rest.split_whitespace() {
                builder.add_vertex(parse_id(tok)?).map_err(tree)?;
            }
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        let [p, c] = toks.as_slice() else {
            return Err(syntax(format!(
                "expected `parent child`, found {} fields",
                toks.len()
            )));
        };
        builder.add_edge(parse_id(p)?, parse_id(c)?).map_err(tree)?;
    }
    builder.build().map_err(ParseError::Structure)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct TreeArgs {
    /// Tree file, or `-` for standard input.
    pub input: PathBuf,
    /// Number of vertices on each generating path.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub t: u32,
}

#[derive(Debug, Parser)]
#[command(
    name = "path-ideals",
    version,
    about = "Graded Betti numbers of path ideals of rooted trees"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// List the minimal generators (paths on t vertices).
    Generators(TreeArgs),
    /// Betti table of S/I_t by the mapping-cone recursion.
    Betti {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Regularity of S/I_t.
    Reg(TreeArgs),
    /// Projective dimension of S/I_t.
    Pd(TreeArgs),
    /// The bound (t-1)(l_t + p_t) and its ingredients.
    RegBound(TreeArgs),
    /// Closed-form linear strand entry beta_{i,i+t}(I_t).
    LinearStrand {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        i: u32,
    },
    /// Linear-resolution test via the clean form's broom shape.
    CheckLinear(TreeArgs),
    /// Print the clean form.
    Clean(TreeArgs),
    /// Broom recognition (no cleaning).
    Broom(TreeArgs),
    /// Path graph L_n invariants from closed forms.
    Line {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u32,
        /// Also run the recursion (n <= 30) and compare.
        #[arg(long)]
        verify: bool,
    },
    /// Betti table from Hochster's formula.
    Oracle {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Compare the recursion against Hochster's formula.
    Compare {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
    },
}

/// Text to print and the process exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: u8,
    pub stdout: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { status: 0, stdout }
    }

    fn mismatch(stdout: String) -> Self {
        Outcome { status: 1, stdout }
    }
}

fn load(args: &TreeArgs) -> Result<RootedForest, CliError> {
    let path = args.input.display().to_string();
    let io = |source| CliError::Io {
        path: path.clone(),
        source,
    };
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        s
    } else {
        std::fs::read_to_string(&args.input).map_err(io)?
    };
    Ok(parse_tree_file(&text)?)
}

fn render(table: &BettiTable, format: Format) -> String {
    match format {
        Format::Tsv => table.to_tsv(),
        Format::Json => table.to_json() + "\n",
    }
}

fn require_t_at_least_two(t: usize) -> Result<(), CliError> {
    if t < 2 {
        return Err(CliError::Invalid(format!(
            "--t must be at least 2, got {t}"
        )));
    }
    Ok(())
}

fn oracle_table(forest: &RootedForest, t: usize, ch: u64) -> Result<BettiTable, CliError> {
    let ch = Characteristic::new(ch)?;
    let ideal = SquarefreeIdeal::path_ideal(forest, t)?;
    Ok(hochster_betti(&ideal, ch))
}

/// Executes one command. Errors map to exit status 2; a failed comparison
/// is reported as an [`Outcome`] with status 1.
pub fn run(command: &Command) -> Result<Outcome, CliError> {
    let resolver = Resolver::new();
    let mut out = String::new();
    match command {
        Command::Generators(args) => {
            let forest = load(args)?;
            for p in forest.paths(args.t as usize) {
                writeln!(out, "{p}").unwrap();
            }
        }
        Command::Betti { tree, format } => {
            let forest = load(tree)?;
            out = render(&resolver.betti(&forest, tree.t as usize)?, *format);
        }
        Command::Reg(args) | Command::Pd(args) => {
            let forest = load(args)?;
            let (pd, reg) = resolver.betti(&forest, args.t as usize)?.invariants()?;
            let value = if matches!(command, Command::Reg(_)) {
                reg
            } else {
                pd
            };
            writeln!(out, "{value}").unwrap();
        }
        Command::RegBound(args) => {
            let forest = load(args)?;
            let t = args.t as usize;
            let l = forest.deep_leaf_count(t);
            let p = forest.max_disjoint_paths(t);
            writeln!(out, "leaves\t{l}").unwrap();
            writeln!(out, "disjoint_paths\t{p}").unwrap();
            writeln!(out, "bound\t{}", (t - 1) * (l + p)).unwrap();
        }
        Command::LinearStrand { tree, i } => {
            require_t_at_least_two(tree.t as usize)?;
            let forest = load(tree)?;
            writeln!(
                out,
                "{}",
                linear_strand(&forest, tree.t as usize, *i as usize)
            )
            .unwrap();
        }
        Command::CheckLinear(args) => {
            let t = args.t as usize;
            require_t_at_least_two(t)?;
            let forest = load(args)?;
            let comps = forest.components();
            if comps.len() != 1 {
                return Err(TreeError::NotATree(comps.len()).into());
            }
            let verdict = linearity(&forest, t);
            writeln!(out, "linear\t{}", verdict.linear).unwrap();
            writeln!(out, "broom\t{}", verdict.is_broom).unwrap();
            match verdict.broom_handle_length {
                Some(s) => writeln!(out, "handle\t{s}").unwrap(),
                None => writeln!(out, "handle\t-").unwrap(),
            }
            writeln!(out, "height\t{}", verdict.clean_height).unwrap();
        }
        Command::Clean(args) => {
            let forest = load(args)?;
            out = forest.clean_form(args.t as usize).to_string();
        }
        Command::Broom(args) => {
            let forest = load(args)?;
            let broom = forest.broom_handle(args.t as usize)?;
            writeln!(out, "broom\t{}", broom.is_some()).unwrap();
            match broom {
                Some(b) => writeln!(out, "handle\t{}", b.handle_length()).unwrap(),
                None => writeln!(out, "handle\t-").unwrap(),
            }
        }
        Command::Line { n, t, verify } => {
            return run_line(*n as usize, *t as usize, *verify, &resolver);
        }
        Command::Oracle {
            tree,
            characteristic,
            format,
        } => {
            let forest = load(tree)?;
            out = render(
                &oracle_table(&forest, tree.t as usize, *characteristic)?,
                *format,
            );
        }
        Command::Compare {
            tree,
            characteristic,
        } => {
            let forest = load(tree)?;
            let t = tree.t as usize;
            let oracle = oracle_table(&forest, t, *characteristic)?;
            let recursion = resolver.betti(&forest, t)?;
            return Ok(match recursion.first_difference(&oracle) {
                None => Outcome::ok("match\n".into()),
                Some((i, j)) => Outcome::mismatch(format!(
                    "mismatch\t{i}\t{j}\trecursion\t{}\toracle\t{}\n",
                    recursion.get(i, j),
                    oracle.get(i, j)
                )),
            });
        }
    }
    Ok(Outcome::ok(out))
}

fn run_line(n: usize, t: usize, verify: bool, resolver: &Resolver) -> Result<Outcome, CliError> {
    require_t_at_least_two(t)?;
    if n < t {
        return Err(CliError::Invalid(format!(
            "--n must be at least --t ({n} < {t})"
        )));
    }
    let pd = line_pd(n, t);
    let reg = line_reg(n, t);
    let row: Vec<(usize, usize, String)> = (0..=pd)
        .map(|i| (i, i * t, line_betti_linear(n, t, i)))
        .take_while(|(_, _, c)| !c.is_zero())
        .map(|(i, j, c)| (i, j, c.to_string()))
        .collect();
    let mut out = String::new();
    writeln!(out, "pd\t{pd}").unwrap();
    writeln!(out, "reg\t{reg}").unwrap();
    for (i, j, c) in &row {
        writeln!(out, "beta\t{i}\t{j}\t{c}").unwrap();
    }
    if !verify {
        return Ok(Outcome::ok(out));
    }
    if n > LINE_VERIFY_LIMIT {
        return Err(CliError::Invalid(format!(
            "--verify supports n <= {LINE_VERIFY_LIMIT}"
        )));
    }
    let table = resolver.betti(&RootedForest::path_graph(n), t)?;
    let (table_pd, table_reg) = table.invariants()?;
    let mut problems = Vec::new();
    if table_pd != pd {
        problems.push(format!("pd: recursion {table_pd}, closed form {pd}"));
    }
    if table_reg != reg {
        problems.push(format!("reg: recursion {table_reg}, closed form {reg}"));
    }
    for i in 0..=pd {
        let expected = line_betti_linear(n, t, i);
        if table.get(i, i * t) != expected {
            problems.push(format!(
                "beta({i},{}): recursion {}, closed form {expected}",
                i * t,
                table.get(i, i * t)
            ));
        }
    }
    for i in 0..=pd + 1 {
        for j in i..=i + reg + 1 {
            if line_nonzero(n, t, i, j) == table.get(i, j).is_zero() {
                problems.push(format!("support disagrees at ({i},{j})"));
            }
        }
    }
    if problems.is_empty() {
        writeln!(out, "verified\ttrue").unwrap();
        Ok(Outcome::ok(out))
    } else {
        writeln!(out, "verified\tfalse").unwrap();
        for p in problems {
            writeln!(out, "{p}").unwrap();
        }
        Ok(Outcome::mismatch(out))
    }
}
