//! Header construction, hop-by-hop forwarding and the exhaustive
//! false-positive check.

use std::fmt;

use rayon::prelude::*;

use crate::bits::BitSet;
use crate::graph::{Graph, Path};
use crate::labelling::{EdgeLabel, Labelling};
use crate::{Error, Result};

/// `[S]`, the union of the labels along a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header(pub BitSet);

impl Header {
    pub fn empty(width: usize) -> Self {
        Header(BitSet::new(width))
    }

    pub fn bits(&self) -> &BitSet {
        &self.0
    }
}

pub fn encode_path(l: &Labelling, p: &Path) -> Header {
    let mut bits = BitSet::new(l.universe_size());
    for &e in &p.edges {
        bits.union_with(l.label(e).bits())
            .expect("labels share the universe width");
    }
    Header(bits)
}

/// `[e] ⊆ [S]`.
pub fn recognised(label: &EdgeLabel, h: &Header) -> Result<bool> {
    label.bits().is_subset(h.bits())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NextHop {
    Forward(usize),
    Delivered,
    Ambiguous(Vec<usize>),
}

/// Incident edges of `current` (other than `incoming`) recognised by `h`, in
/// ascending neighbour order.
fn candidates(
    g: &Graph,
    l: &Labelling,
    h: &Header,
    current: usize,
    incoming: Option<usize>,
) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for &(_, e) in g.neighbors(current) {
        if Some(e) != incoming && recognised(l.label(e), h)? {
            out.push(e);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// The forwarding decision a router at `current` makes from the header alone.
pub fn next_hop(
    g: &Graph,
    l: &Labelling,
    h: &Header,
    current: usize,
    incoming: Option<usize>,
) -> Result<NextHop> {
    if current >= g.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "vertex {current} not in graph"
        )));
    }
    let mut found = candidates(g, l, h, current, incoming)?;
    Ok(match found.len() {
        0 => NextHop::Delivered,
        1 => NextHop::Forward(found.pop().unwrap()),
        _ => NextHop::Ambiguous(found),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Delivered {
        at: usize,
    },
    /// Two or more recognised edges at `at`.
    Ambiguous {
        at: usize,
        candidates: Vec<usize>,
    },
    /// No recognised edge at `at`, which is not the destination.
    DeadEnd {
        at: usize,
    },
    /// More than `|V|` hops without terminating.
    HopLimit {
        at: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingTrace {
    /// The encoded shortest path.
    pub path: Path,
    pub visited: Vec<usize>,
    /// Recognised-edge count at each visited vertex (incoming edge excluded).
    pub candidate_counts: Vec<usize>,
    pub outcome: Outcome,
    pub hop_count: usize,
}

impl RoutingTrace {
    pub fn delivered(&self) -> bool {
        matches!(self.outcome, Outcome::Delivered { .. })
    }

    /// Delivered along exactly the encoded path with one choice at every hop.
    pub fn is_clean(&self) -> bool {
        self.delivered()
            && self.visited == self.path.vertices
            && self.candidate_counts[..self.hop_count]
                .iter()
                .all(|&c| c == 1)
    }
}

impl fmt::Display for RoutingTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[usize]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(f, "path: {}", join(&self.visited))?;
        writeln!(f, "candidates: {}", join(&self.candidate_counts))?;
        let hops = format!(
            "{} hop{}",
            self.hop_count,
            if self.hop_count == 1 { "" } else { "s" }
        );
        match &self.outcome {
            Outcome::Delivered { at } => write!(f, "outcome: delivered at {at}, {hops}"),
            Outcome::Ambiguous { at, candidates } => write!(
                f,
                "outcome: ambiguous at {at} (edges {}), {hops}",
                join(candidates)
            ),
            Outcome::DeadEnd { at } => write!(f, "outcome: dead end at {at}, {hops}"),
            Outcome::HopLimit { at } => write!(f, "outcome: hop limit reached at {at}, {hops}"),
        }
    }
}

/// Encodes the BFS shortest path from `source` to `destination` and forwards
/// the message hop by hop using only the header and the local labels.
pub fn simulate_delivery(
    g: &Graph,
    l: &Labelling,
    source: usize,
    destination: usize,
) -> Result<RoutingTrace> {
    let path = g.shortest_path(source, destination)?;
    let header = encode_path(l, &path);
    let mut visited = vec![source];
    let mut candidate_counts = Vec::new();
    let mut current = source;
    let mut incoming = None;
    let mut hop_count = 0;
    let outcome = loop {
        let found = candidates(g, l, &header, current, incoming)?;
        candidate_counts.push(found.len());
        match found.len() {
            0 if current == destination => break Outcome::Delivered { at: current },
            0 => break Outcome::DeadEnd { at: current },
            1 => {}
            _ => {
                break Outcome::Ambiguous {
                    at: current,
                    candidates: found,
                }
            }
        }
        if hop_count >= g.vertex_count() {
            break Outcome::HopLimit { at: current };
        }
        let e = found[0];
        let (u, v) = g.edge(e);
        current = if u == current { v } else { u };
        incoming = Some(e);
        hop_count += 1;
        visited.push(current);
    };
    Ok(RoutingTrace {
        path,
        visited,
        candidate_counts,
        outcome,
        hop_count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct FalsePositive {
    pub source: usize,
    pub target: usize,
    /// Index of the path among the pair's shortest paths (lexicographic).
    pub path_index: usize,
    pub edge: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerificationReport {
    pub pairs_checked: usize,
    pub paths_checked: usize,
    pub subset_tests: u64,
    /// Total violations found, including any beyond the recorded list.
    pub false_positive_count: u64,
    /// The first violations in `(source, target, path, edge)` order.
    pub false_positives: Vec<FalsePositive>,
    pub max_false_positives_recorded: usize,
    /// Pairs whose shortest paths were not all checked because of the cap.
    pub cap_hits: Vec<(usize, usize)>,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.false_positive_count == 0 && self.cap_hits.is_empty()
    }

    fn merge(mut self, other: VerificationReport) -> VerificationReport {
        self.pairs_checked += other.pairs_checked;
        self.paths_checked += other.paths_checked;
        self.subset_tests += other.subset_tests;
        self.false_positive_count += other.false_positive_count;
        self.false_positives.extend(other.false_positives);
        self.cap_hits.extend(other.cap_hits);
        self.max_false_positives_recorded = self
            .max_false_positives_recorded
            .max(other.max_false_positives_recorded);
        self.finish()
    }

    fn finish(mut self) -> VerificationReport {
        self.false_positives.sort_unstable();
        self.false_positives
            .truncate(self.max_false_positives_recorded);
        self.cap_hits.sort_unstable();
        self
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pairs checked: {}", self.pairs_checked)?;
        writeln!(f, "paths checked: {}", self.paths_checked)?;
        writeln!(f, "subset tests: {}", self.subset_tests)?;
        writeln!(f, "false positives: {}", self.false_positive_count)?;
        for fp in &self.false_positives {
            writeln!(
                f,
                "  pair ({}, {}) path #{}: edge {} recognised",
                fp.source, fp.target, fp.path_index, fp.edge
            )?;
        }
        if self.false_positive_count > self.false_positives.len() as u64 {
            writeln!(
                f,
                "  ... {} more not recorded",
                self.false_positive_count - self.false_positives.len() as u64
            )?;
        }
        write!(f, "path cap hits: {}", self.cap_hits.len())?;
        for (u, v) in &self.cap_hits {
            write!(f, "\n  pair ({u}, {v})")?;
        }
        Ok(())
    }
}

/// Default number of violations kept in a report.
pub const DEFAULT_RECORDED: usize = 50;

/// For every unordered pair of distinct vertices, every shortest path `S`
/// between them (at most `path_cap` per pair) and every edge `e` of the graph,
/// checks `[e] ⊆ [S] ⟺ e ∈ S`.
///
/// Pairs are processed in parallel; the report does not depend on scheduling.
pub fn verify_no_false_positives(
    g: &Graph,
    l: &Labelling,
    path_cap: usize,
) -> Result<VerificationReport> {
    verify_with_limit(g, l, path_cap, DEFAULT_RECORDED)
}

pub fn verify_with_limit(
    g: &Graph,
    l: &Labelling,
    path_cap: usize,
    max_recorded: usize,
) -> Result<VerificationReport> {
    if l.edge_count() != g.edge_count() {
        return Err(Error::InvalidParameter(format!(
            "labelling covers {} edges, graph has {}",
            l.edge_count(),
            g.edge_count()
        )));
    }
    let empty = VerificationReport {
        max_false_positives_recorded: max_recorded,
        ..Default::default()
    };
    (0..g.vertex_count())
        .into_par_iter()
        .map(|target| verify_target(g, l, target, path_cap, max_recorded))
        .try_reduce(|| empty.clone(), |a, b| Ok(a.merge(b)))
}

/// All pairs `(source, target)` with `source < target`.
fn verify_target(
    g: &Graph,
    l: &Labelling,
    target: usize,
    path_cap: usize,
    max_recorded: usize,
) -> Result<VerificationReport> {
    let mut report = VerificationReport {
        max_false_positives_recorded: max_recorded,
        ..Default::default()
    };
    let to_target: Vec<usize> = g
        .distances(target)
        .into_iter()
        .map(|d| d.unwrap_or(usize::MAX))
        .collect();
    let mut on_path = vec![false; g.edge_count()];
    for source in 0..target {
        let (paths, truncated) = g.shortest_paths_toward(source, target, &to_target, path_cap)?;
        report.pairs_checked += 1;
        if truncated {
            report.cap_hits.push((source, target));
        }
        for (path_index, path) in paths.iter().enumerate() {
            report.paths_checked += 1;
            let header = encode_path(l, path);
            for &e in &path.edges {
                on_path[e] = true;
            }
            for (e, label) in l.labels().iter().enumerate() {
                let hit = label.bits().is_subset_unchecked(header.bits());
                if hit != on_path[e] {
                    // A miss on an on-path edge is impossible for a union, but
                    // it is recorded like any other violation.
                    report.false_positive_count += 1;
                    if report.false_positives.len() < max_recorded {
                        report.false_positives.push(FalsePositive {
                            source,
                            target,
                            path_index,
                            edge: e,
                        });
                    }
                }
            }
            report.subset_tests += l.edge_count() as u64;
            for &e in &path.edges {
                on_path[e] = false;
            }
        }
    }
    Ok(report.finish())
}
