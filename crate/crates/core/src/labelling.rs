//! Edge labellings over a bit universe: bit-per-edge, bit-per-vertex and the
//! star labelling.

use std::fmt::Write as _;

use crate::bits::BitSet;
use crate::graph::Graph;
use crate::{Error, Result};

/// The universe `U`: one named element per bit position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitUniverse {
    element_names: Vec<String>,
}

impl BitUniverse {
    pub fn new(element_names: Vec<String>) -> Self {
        BitUniverse { element_names }
    }

    /// Elements named `{prefix}{i}`.
    pub fn indexed(prefix: &str, size: usize) -> Self {
        BitUniverse::new((0..size).map(|i| format!("{prefix}{i}")).collect())
    }

    pub fn size(&self) -> usize {
        self.element_names.len()
    }

    pub fn element_names(&self) -> &[String] {
        &self.element_names
    }
}

/// The label `[e]` of a single edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeLabel(pub BitSet);

impl EdgeLabel {
    pub fn bits(&self) -> &BitSet {
        &self.0
    }
}

/// A total map from edge ids to labels over one universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labelling {
    universe: BitUniverse,
    labels: Vec<EdgeLabel>,
}

impl Labelling {
    /// Checks that every label has the universe's width and at least one bit.
    pub fn new(universe: BitUniverse, labels: Vec<EdgeLabel>) -> Result<Self> {
        for (e, label) in labels.iter().enumerate() {
            if label.0.width() != universe.size() {
                return Err(Error::WidthMismatch {
                    expected: universe.size(),
                    found: label.0.width(),
                });
            }
            if label.0.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "edge {e} has an empty label"
                )));
            }
        }
        Ok(Labelling { universe, labels })
    }

    pub fn universe(&self) -> &BitUniverse {
        &self.universe
    }

    pub fn universe_size(&self) -> usize {
        self.universe.size()
    }

    pub fn edge_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, edge: usize) -> &EdgeLabel {
        &self.labels[edge]
    }

    pub fn labels(&self) -> &[EdgeLabel] {
        &self.labels
    }

    /// Text form: `universe <size>` followed by `edge <id>: <positions>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "universe {}", self.universe.size()).unwrap();
        for (e, label) in self.labels.iter().enumerate() {
            write!(out, "edge {e}:").unwrap();
            for p in label.0.ones() {
                write!(out, " {p}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Parses [`Labelling::to_text`]. Element names are not stored in the text
    /// form and come back as `u0, u1, ...`.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let parse_err = |line: usize, message: String| Error::Parse { line, message };

        let (line, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "missing `universe <size>` line".into()))?;
        let size: usize = header
            .strip_prefix("universe ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| {
                parse_err(line, format!("expected `universe <size>`, got `{header}`"))
            })?;

        let mut labels = Vec::new();
        for (line, text) in lines {
            let (id, rest) = text
                .strip_prefix("edge ")
                .and_then(|s| s.split_once(':'))
                .ok_or_else(|| {
                    parse_err(line, format!("expected `edge <id>: ...`, got `{text}`"))
                })?;
            let id: usize = id
                .trim()
                .parse()
                .map_err(|_| parse_err(line, format!("bad edge id `{id}`")))?;
            if id != labels.len() {
                return Err(parse_err(
                    line,
                    format!("expected edge {}, got {id}", labels.len()),
                ));
            }
            let positions = rest
                .split_whitespace()
                .map(|p| p.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| parse_err(line, "bad bit position".into()))?;
            let bits = BitSet::from_positions(size, positions)
                .map_err(|e| parse_err(line, e.to_string()))?;
            labels.push(EdgeLabel(bits));
        }
        Labelling::new(BitUniverse::indexed("u", size), labels)
    }
}

/// `U = E`, `[e] = {e}`.
pub fn bit_per_edge(g: &Graph) -> Labelling {
    let m = g.edge_count();
    let labels = (0..m)
        .map(|e| EdgeLabel(BitSet::from_positions(m, [e]).expect("edge id within width")))
        .collect();
    Labelling {
        universe: BitUniverse::indexed("e", m),
        labels,
    }
}

/// `U = V`, `[{u, v}] = {u, v}`.
pub fn bit_per_vertex(g: &Graph) -> Labelling {
    let n = g.vertex_count();
    let labels = g
        .edges()
        .iter()
        .map(|&(u, v)| EdgeLabel(BitSet::from_positions(n, [u, v]).expect("endpoint within width")))
        .collect();
    Labelling {
        universe: BitUniverse::indexed("v", n),
        labels,
    }
}

/// Parameters of the star labelling for a star with `edges` edges: tuples of
/// `rank` digits, each in `0..base`, with `base = ⌈edges^(1/rank)⌉`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarParams {
    edges: usize,
    rank: u32,
    base: usize,
}

impl StarParams {
    pub fn new(edges: usize, rank: u32) -> Result<Self> {
        if edges == 0 {
            return Err(Error::InvalidParameter(
                "a star needs at least one edge".into(),
            ));
        }
        if rank == 0 {
            return Err(Error::InvalidParameter("rank must be at least 1".into()));
        }
        Ok(StarParams {
            edges,
            rank,
            base: ceil_root(edges as u64, rank) as usize,
        })
    }

    pub fn edges(&self) -> usize {
        self.edges
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn base(&self) -> usize {
        self.base
    }

    fn pair_count(&self) -> usize {
        let r = self.rank as usize;
        r * (r - 1) / 2
    }

    /// Bits set in every label: one per coordinate plus one per coordinate pair.
    pub fn label_weight(&self) -> usize {
        self.rank as usize + self.pair_count()
    }

    pub fn universe_size(&self) -> usize {
        self.label_weight() * self.base
    }

    /// Bit position of the coordinate element `(r, k)`, `r` 1-based.
    fn coordinate_bit(&self, r: usize, k: usize) -> usize {
        (r - 1) * self.base + k
    }

    /// Bit position of the sum element `(r, s, k)`, `1 <= r < s <= rank`.
    fn sum_bit(&self, r: usize, s: usize, k: usize) -> usize {
        let rank = self.rank as usize;
        // Index of (r, s) among all pairs in lexicographic order.
        let before_r = (r - 1) * rank - (r - 1) * r / 2;
        let pair = before_r + (s - r - 1);
        rank * self.base + pair * self.base + k
    }
}

/// Smallest `k >= 1` with `k^r >= n`, computed exactly.
pub fn ceil_root(n: u64, r: u32) -> u64 {
    assert!(r >= 1, "root of order zero");
    let reaches = |k: u64| (k as u128).checked_pow(r).is_none_or(|p| p >= n as u128);
    let mut k = ((n as f64).powf(1.0 / r as f64).round() as u64).max(1);
    while !reaches(k) {
        k += 1;
    }
    while k > 1 && reaches(k - 1) {
        k -= 1;
    }
    k
}

/// Digits `(π_1(e), ..., π_R(e))` of the edge index in base `K`, most
/// significant first, zero-padded to `R` digits.
pub fn star_tuple(edge_index: usize, params: &StarParams) -> Result<Vec<usize>> {
    if edge_index >= params.edges {
        return Err(Error::IndexOutOfRange {
            index: edge_index,
            count: params.edges,
        });
    }
    let mut digits = vec![0; params.rank as usize];
    let mut rest = edge_index;
    for d in digits.iter_mut().rev() {
        *d = rest % params.base;
        rest /= params.base;
    }
    debug_assert_eq!(rest, 0);
    Ok(digits)
}

/// `(R + R(R-1)/2) · ⌈n^(1/R)⌉`.
pub fn star_universe_size(n: usize, rank: u32) -> Result<usize> {
    Ok(StarParams::new(n, rank)?.universe_size())
}

/// Rank minimising the star universe for `n` edges, with its universe size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OptimalRank {
    pub rank: u32,
    pub universe_size: usize,
}

/// Searches `R ∈ 1..=max(1, ⌊log₂ n⌋)`; ties go to the smallest `R`.
pub fn optimal_rank(n: usize) -> Result<OptimalRank> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "a star needs at least one edge".into(),
        ));
    }
    let max_rank = n.ilog2().max(1);
    let mut best = OptimalRank {
        rank: 1,
        universe_size: star_universe_size(n, 1)?,
    };
    for rank in 2..=max_rank {
        let size = star_universe_size(n, rank)?;
        if size < best.universe_size {
            best = OptimalRank {
                rank,
                universe_size: size,
            };
        }
    }
    Ok(best)
}

/// The star labelling of edges `0..n`.
///
/// The universe lists the coordinate elements `(r, k)` and then the sum
/// elements `(r, s, k)` for `r < s`, both in lexicographic order. Edge `e`
/// carries `(r, π_r(e))` for every `r` and `(r, s, (π_r(e) + π_s(e)) mod K)`
/// for every `r < s`.
pub fn star_labelling(n: usize, rank: u32) -> Result<Labelling> {
    let params = StarParams::new(n, rank)?;
    let (big_r, k) = (rank as usize, params.base);

    let mut names = Vec::with_capacity(params.universe_size());
    for r in 1..=big_r {
        names.extend((0..k).map(|d| format!("({r},{d})")));
    }
    for r in 1..=big_r {
        for s in r + 1..=big_r {
            names.extend((0..k).map(|d| format!("({r},{s},{d})")));
        }
    }

    let width = params.universe_size();
    let mut labels = Vec::with_capacity(n);
    for e in 0..n {
        let digits = star_tuple(e, &params)?;
        let mut bits = BitSet::new(width);
        for r in 1..=big_r {
            bits.insert(params.coordinate_bit(r, digits[r - 1]));
            for s in r + 1..=big_r {
                bits.insert(params.sum_bit(r, s, (digits[r - 1] + digits[s - 1]) % k));
            }
        }
        labels.push(EdgeLabel(bits));
    }
    Ok(Labelling {
        universe: BitUniverse::new(names),
        labels,
    })
}

/// Star labelling at the optimal rank.
pub fn optimal_star_labelling(n: usize) -> Result<Labelling> {
    star_labelling(n, optimal_rank(n)?.rank)
}
