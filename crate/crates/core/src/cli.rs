//! Command-line front end: table reproduction, verification and routing.
//!
//! Exit codes: 0 on success, 1 when verification finds violations or a
//! delivery fails, 2 on usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bloom::{
    analytic_fpr, at_least_one_fp, bloom_labelling, empirical_fpr, optimal_k, optimal_k_rounded,
};
use crate::decompose::{
    binary_tree_universe_size, core_periphery_universe_size, label_core_periphery, label_tree,
};
use crate::graph::{
    ceil_log2, make_complete, make_core_periphery, make_perfect_binary_tree, make_star, pairs,
    star_path_count, Graph,
};
use crate::labelling::{bit_per_edge, bit_per_vertex, optimal_rank, star_labelling, Labelling};
use crate::routing::{simulate_delivery, verify_with_limit};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    Csv,
    #[default]
    Markdown,
}

/// A rendered result table.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Printed under markdown tables; sent to stderr alongside CSV.
    pub footnotes: Vec<String>,
}

impl Table {
    fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("cells are utf-8")
    }

    /// Pipe table with every column padded to its widest cell.
    pub fn to_markdown(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.len().max(3)).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:>w$}"))
                .collect();
            format!("| {} |\n", padded.join(" | "))
        };
        let mut out = line(&self.headers);
        let rule: Vec<String> = widths
            .iter()
            .map(|&w| format!("{}:", "-".repeat(w + 1)))
            .collect();
        writeln!(out, "|{}|", rule.join("|")).unwrap();
        for row in &self.rows {
            out.push_str(&line(row));
        }
        if !self.footnotes.is_empty() {
            out.push('\n');
            for note in &self.footnotes {
                writeln!(out, "{note}").unwrap();
            }
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Markdown => self.to_markdown(),
        }
    }
}

/// Probability as a percentage with one decimal, halves rounded up.
pub fn format_percent(p: f64) -> String {
    // Snap away binary representation noise (0.0065 is stored as 0.00649...)
    // before rounding.
    let scaled = (p * 1000.0 * 1e6).round() / 1e6;
    let tenths = (scaled + 0.5).floor() as i64;
    format!("{}.{}", tenths / 10, tenths % 10)
}

pub const DEFAULT_STAR_SIZES: [u64; 6] = [10, 100, 1_000, 10_000, 100_000, 1_000_000];
pub const DEFAULT_CORE_SIZES: [usize; 5] = [100, 200, 300, 400, 500];
pub const DEFAULT_TREE_HEIGHTS: [u32; 3] = [5, 10, 15];
pub const DEFAULT_BLOOM_EDGES: [usize; 4] = [10, 20, 30, 40];

/// Published `(h, theoretical bits, universe size)` rows for perfect binary
/// trees. The bit counts do not follow the path-count definition, and the
/// h = 15 universe size assumes a floating-point root (`32768^(1/5)` rounds up
/// to 9).
const TREE_REFERENCE: [(u32, u32, usize); 3] = [(5, 8, 44), (10, 15, 252), (15, 22, 733)];

pub fn star_table(sizes: &[u64]) -> Result<Table, Error> {
    let mut t = Table::new(&["n", "theoretical_bits", "universe_size", "optimal_rank"]);
    for &n in sizes {
        let opt = optimal_rank(n as usize)?;
        t.rows.push(vec![
            n.to_string(),
            ceil_log2(star_path_count(n)?).to_string(),
            opt.universe_size.to_string(),
            opt.rank.to_string(),
        ]);
    }
    Ok(t)
}

pub fn core_periphery_table(sizes: &[usize]) -> Result<Table, Error> {
    let mut t = Table::new(&[
        "n",
        "vertices",
        "edges",
        "theoretical_bits",
        "universe_size",
    ]);
    for &n in sizes {
        if n < 2 {
            return Err(Error::InvalidParameter(
                "core-periphery graphs need n >= 2".into(),
            ));
        }
        let vertices = (n as u128).pow(2);
        let edges = pairs(n as u128)? + (n * (n - 1)) as u128;
        // Every pair of vertices has a unique shortest path.
        let bits = ceil_log2(pairs(vertices)?);
        t.rows.push(vec![
            n.to_string(),
            vertices.to_string(),
            edges.to_string(),
            bits.to_string(),
            core_periphery_universe_size(n)?.to_string(),
        ]);
    }
    Ok(t)
}

pub fn binary_tree_table(heights: &[u32]) -> Result<Table, Error> {
    let mut t = Table::new(&["h", "vertices", "theoretical_bits", "universe_size", "flag"]);
    let (mut bits_flagged, mut size_flagged) = (false, false);
    for &h in heights {
        let universe = binary_tree_universe_size(h)?;
        let vertices = (1u128 << (h + 1)) - 1;
        let bits = ceil_log2(pairs(vertices)?);
        let reference = TREE_REFERENCE.iter().find(|r| r.0 == h);
        let bits_differ = reference.is_some_and(|r| r.1 != bits);
        let size_differs = reference.is_some_and(|r| r.2 != universe);
        bits_flagged |= bits_differ;
        size_flagged |= size_differs;
        let flag = match (bits_differ, size_differs) {
            (true, true) => "*+",
            (true, false) => "*",
            (false, true) => "+",
            (false, false) => "",
        };
        t.rows.push(vec![
            h.to_string(),
            vertices.to_string(),
            bits.to_string(),
            universe.to_string(),
            flag.to_string(),
        ]);
    }
    if bits_flagged {
        t.footnotes.push(
            "* theoretical_bits = ceil(log2(C(|V|, 2))) since tree paths are unique; \
             the reference values 8, 15, 22 for h = 5, 10, 15 do not follow this definition."
                .into(),
        );
    }
    if size_flagged {
        t.footnotes.push(
            "+ universe_size uses exact integer roots; the reference value 733 for h = 15 \
             follows from a floating-point root of 32768^(1/5) (K = 9 instead of 8)."
                .into(),
        );
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BloomTableOptions {
    pub at_least_one: bool,
    /// `(trials, seed)` for the empirical columns.
    pub empirical: Option<(usize, u64)>,
}

pub fn bloom_table(edge_counts: &[usize], opts: BloomTableOptions) -> Result<Table, Error> {
    let mut headers = vec!["edges", "universe_size", "optimal_k", "fpr_percent"];
    if opts.at_least_one {
        headers.push("at_least_one_percent");
    }
    if opts.empirical.is_some() {
        headers.extend([
            "k",
            "trials",
            "seed",
            "analytic_k_percent",
            "empirical_percent",
            "stderr_percent",
        ]);
    }
    let mut t = Table::new(&headers);
    for &e in edge_counts {
        if e < 3 {
            return Err(Error::InvalidParameter(format!(
                "star needs at least 3 edges, got {e}"
            )));
        }
        let m = optimal_rank(e)?.universe_size;
        let k = optimal_k(m, 2);
        let fpr = format_percent(analytic_fpr(m, 2, k));
        let mut row = vec![e.to_string(), m.to_string(), format!("{k:.2}"), fpr.clone()];
        if opts.at_least_one {
            // Uses the rounded per-edge rate as printed.
            let p: f64 = fpr.parse::<f64>().expect("formatted percent") / 100.0;
            row.push(format_percent(at_least_one_fp(p, e - 2)));
        }
        if let Some((trials, seed)) = opts.empirical {
            let k_int = optimal_k_rounded(m, 2);
            let est = empirical_fpr(e, m, k_int, trials, seed)?;
            row.extend([
                k_int.to_string(),
                trials.to_string(),
                seed.to_string(),
                format!("{:.3}", 100.0 * analytic_fpr(m, 2, k_int as f64)),
                format!("{:.3}", 100.0 * est.rate),
                format!("{:.3}", 100.0 * est.stderr),
            ]);
        }
        t.rows.push(row);
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    BitPerEdge,
    BitPerVertex,
    Star,
    Combined,
    Bloom,
}

#[derive(Debug, Clone, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct GraphSource {
    /// Star with N edges
    #[arg(long, value_name = "N")]
    pub star: Option<usize>,
    /// Complete graph on N vertices
    #[arg(long, value_name = "N")]
    pub complete: Option<usize>,
    /// Complete core of N vertices, each with N-1 pendant leaves
    #[arg(long, value_name = "N")]
    pub core_periphery: Option<usize>,
    /// Perfect binary tree of height H
    #[arg(long, value_name = "H")]
    pub binary_tree: Option<u32>,
    /// Edge-list file
    #[arg(long, value_name = "PATH")]
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SchemeArgs {
    #[arg(long, value_enum)]
    pub scheme: Scheme,
    /// Star labelling rank (default: optimal)
    #[arg(long)]
    pub rank: Option<u32>,
    /// Core vertices for the combined scheme
    #[arg(long, value_delimiter = ',')]
    pub core: Option<Vec<usize>>,
    /// Tree center for the combined scheme on trees
    #[arg(long)]
    pub center: Option<usize>,
    /// Bloom universe size
    #[arg(long)]
    pub m: Option<usize>,
    /// Bloom label weight
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the labelling in text form to this file
    #[arg(long, value_name = "PATH")]
    pub dump_labelling: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "pathlabel", version, about = "Shortest-path header labellings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal star-labelling universe sizes
    StarTable {
        #[arg(long = "n", value_delimiter = ',', num_args = 0.., default_values_t = DEFAULT_STAR_SIZES)]
        sizes: Vec<u64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Combined labelling sizes for core-periphery graphs
    CorePeripheryTable {
        #[arg(long = "n", value_delimiter = ',', num_args = 0.., default_values_t = DEFAULT_CORE_SIZES)]
        sizes: Vec<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Level-star labelling sizes for perfect binary trees
    BinaryTreeTable {
        #[arg(long = "h", value_delimiter = ',', num_args = 0.., default_values_t = DEFAULT_TREE_HEIGHTS)]
        heights: Vec<u32>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Random-label false-positive rates on stars
    BloomTable {
        #[arg(long = "edges", value_delimiter = ',', num_args = 0.., default_values_t = DEFAULT_BLOOM_EDGES)]
        edges: Vec<usize>,
        /// Add the probability of at least one false positive per message
        #[arg(long)]
        at_least_one: bool,
        /// Add simulated rates with the rounded optimal k
        #[arg(long)]
        empirical: bool,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check every shortest path for false positives
    Verify {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Shortest paths checked per vertex pair
        #[arg(long, default_value_t = 10_000)]
        path_cap: usize,
        /// Violations listed in the report
        #[arg(long, default_value_t = 20)]
        max_recorded: usize,
    },
    /// Simulate forwarding one message
    Route {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failure(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_)
            | Error::Parse { .. }
            | Error::InvalidGraph(_)
            | Error::UnsupportedDecomposition(_)
            | Error::NotATree(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

/// Runs the CLI with `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn emit_table(
    table: Table,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    write_out(out, &table.render(format))?;
    if format == Format::Csv {
        for note in &table.footnotes {
            write_out(err, &format!("{note}\n"))?;
        }
    }
    Ok(EXIT_OK)
}

fn write_out(w: &mut dyn Write, text: &str) -> Result<(), CliError> {
    w.write_all(text.as_bytes())
        .map_err(|e| CliError::Failure(format!("write failed: {e}")))
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::StarTable { sizes, format } => emit_table(star_table(&sizes)?, format, out, err),
        Command::CorePeripheryTable { sizes, format } => {
            emit_table(core_periphery_table(&sizes)?, format, out, err)
        }
        Command::BinaryTreeTable { heights, format } => {
            emit_table(binary_tree_table(&heights)?, format, out, err)
        }
        Command::BloomTable {
            edges,
            at_least_one,
            empirical,
            trials,
            seed,
            format,
        } => {
            let opts = BloomTableOptions {
                at_least_one,
                empirical: empirical.then_some((trials, seed)),
            };
            emit_table(bloom_table(&edges, opts)?, format, out, err)
        }
        Command::Verify {
            source,
            scheme,
            path_cap,
            max_recorded,
        } => {
            let (g, l) = build(&source, &scheme)?;
            let report = verify_with_limit(&g, &l, path_cap, max_recorded)?;
            write_out(
                out,
                &format!(
                    "graph: {} vertices, {} edges\nuniverse size: {}\n{report}\n",
                    g.vertex_count(),
                    g.edge_count(),
                    l.universe_size()
                ),
            )?;
            Ok(if report.is_clean() {
                EXIT_OK
            } else {
                EXIT_FAILURE
            })
        }
        Command::Route {
            source,
            scheme,
            from,
            to,
        } => {
            let (g, l) = build(&source, &scheme)?;
            for v in [from, to] {
                if v >= g.vertex_count() {
                    return Err(CliError::Usage(format!("vertex {v} not in graph")));
                }
            }
            let trace = simulate_delivery(&g, &l, from, to)?;
            write_out(out, &format!("{trace}\n"))?;
            Ok(if trace.delivered() {
                EXIT_OK
            } else {
                EXIT_FAILURE
            })
        }
    }
}

/// Materialises the graph and labelling selected on the command line.
fn build(source: &GraphSource, args: &SchemeArgs) -> Result<(Graph, Labelling), CliError> {
    let (g, generated_core) = load_graph(source)?;
    let l = match args.scheme {
        Scheme::BitPerEdge => bit_per_edge(&g),
        Scheme::BitPerVertex => bit_per_vertex(&g),
        Scheme::Star => {
            if star_center(&g).is_none() {
                return Err(CliError::Usage("the star scheme needs a star graph".into()));
            }
            let rank = match args.rank {
                Some(r) => r,
                None => optimal_rank(g.edge_count())?.rank,
            };
            star_labelling(g.edge_count(), rank)?
        }
        Scheme::Combined => match (&args.core, generated_core, args.center) {
            (Some(core), _, _) => label_core_periphery(&g, core)?,
            (None, Some(core), _) => label_core_periphery(&g, &core)?,
            (None, None, Some(center)) => label_tree(&g, center)?,
            (None, None, None) if source.binary_tree.is_some() => label_tree(&g, 0)?,
            (None, None, None) => match star_center(&g) {
                Some(c) => label_tree(&g, c)?,
                None => {
                    return Err(CliError::Usage(
                        "the combined scheme needs --core or --center for this graph".into(),
                    ))
                }
            },
        },
        Scheme::Bloom => {
            let (Some(m), Some(k)) = (args.m, args.k) else {
                return Err(CliError::Usage("the bloom scheme needs --m and --k".into()));
            };
            bloom_labelling(&g, m, k, args.seed)?
        }
    };
    if let Some(path) = &args.dump_labelling {
        std::fs::write(path, l.to_text())
            .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok((g, l))
}

fn load_graph(source: &GraphSource) -> Result<(Graph, Option<Vec<usize>>), CliError> {
    if let Some(n) = source.star {
        return Ok((make_star(n)?, None));
    }
    if let Some(n) = source.complete {
        return Ok((make_complete(n)?, None));
    }
    if let Some(n) = source.core_periphery {
        let (g, core) = make_core_periphery(n)?;
        return Ok((g, Some(core)));
    }
    if let Some(h) = source.binary_tree {
        return Ok((make_perfect_binary_tree(h)?, None));
    }
    if let Some(path) = &source.graph {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        return Ok((Graph::from_edge_list(&text)?, None));
    }
    Err(CliError::Usage("no graph source given".into()))
}

/// The vertex incident to every edge, if the graph is a star.
fn star_center(g: &Graph) -> Option<usize> {
    if g.edge_count() == 0 || g.vertex_count() != g.edge_count() + 1 {
        return None;
    }
    let (u, v) = g.edge(0);
    [u, v].into_iter().find(|&c| g.degree(c) == g.edge_count())
}
