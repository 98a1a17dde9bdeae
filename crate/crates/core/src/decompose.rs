//! Core/periphery decomposition and the combined labelling.
//!
//! A core vertex set `C` splits the edges of `G` into the induced core edges
//! and the periphery, the graph left after contracting `C` to one vertex.
//! Labellings of the parts over disjoint universes are concatenated into a
//! labelling of `G`. Trees are handled by peeling stars level by level around
//! a center, each level getting its own star labelling.

use std::collections::{BTreeSet, HashMap};

use crate::graph::Graph;
use crate::labelling::{
    bit_per_vertex, optimal_rank, optimal_star_labelling, BitUniverse, EdgeLabel, Labelling,
};
use crate::{Error, Result};

/// Id of the contracted core in [`Decomposition::periphery`].
pub const CONTRACTED: usize = 0;

#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Sorted core vertex ids of the original graph.
    pub core_vertices: Vec<usize>,
    /// Subgraph induced by the core; vertex `i` is `core_vertices[i]`.
    pub core: Graph,
    /// Core edge id → original edge id.
    pub core_edge_map: Vec<usize>,
    /// `G` with the core contracted to vertex [`CONTRACTED`]; other vertices
    /// keep their relative order and are numbered from 1.
    pub periphery: Graph,
    /// Periphery vertex id → original vertex id (`None` for the contracted vertex).
    pub periphery_vertex_map: Vec<Option<usize>>,
    /// Periphery edge id → original edge id.
    pub edge_map: Vec<usize>,
}

/// Contracts `core_vertices` into a single vertex.
///
/// The core must be a non-empty proper subset that induces a connected
/// subgraph, and no outside vertex may have two core neighbours (that would
/// produce parallel periphery edges).
pub fn contract(g: &Graph, core_vertices: &[usize]) -> Result<Decomposition> {
    let core: BTreeSet<usize> = core_vertices.iter().copied().collect();
    if core.is_empty() {
        return Err(Error::InvalidParameter("core vertex set is empty".into()));
    }
    if let Some(&v) = core.iter().find(|&&v| v >= g.vertex_count()) {
        return Err(Error::InvalidParameter(format!(
            "core vertex {v} not in graph"
        )));
    }
    if core.len() == g.vertex_count() {
        return Err(Error::InvalidParameter(
            "core must be a proper subset of the vertices".into(),
        ));
    }
    let core_vertices: Vec<usize> = core.into_iter().collect();

    let mut core_index = vec![None; g.vertex_count()];
    for (i, &v) in core_vertices.iter().enumerate() {
        core_index[v] = Some(i);
    }
    let mut periphery_index = vec![CONTRACTED; g.vertex_count()];
    let mut periphery_vertex_map = vec![None];
    for v in 0..g.vertex_count() {
        if core_index[v].is_none() {
            periphery_index[v] = periphery_vertex_map.len();
            periphery_vertex_map.push(Some(v));
        }
    }

    let mut core_edges = Vec::new();
    let mut core_edge_map = Vec::new();
    let mut periphery_edges = Vec::new();
    let mut edge_map = Vec::new();
    let mut attached: HashMap<(usize, usize), usize> = HashMap::new();
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        match (core_index[u], core_index[v]) {
            (Some(a), Some(b)) => {
                core_edges.push((a, b));
                core_edge_map.push(id);
            }
            _ => {
                let (a, b) = (periphery_index[u], periphery_index[v]);
                if let Some(first) = attached.insert((a.min(b), a.max(b)), id) {
                    return Err(Error::UnsupportedDecomposition(format!(
                        "edges {first} and {id} become parallel after contraction"
                    )));
                }
                periphery_edges.push((a, b));
                edge_map.push(id);
            }
        }
    }

    let core = Graph::new(core_vertices.len(), core_edges)?;
    if !core.is_connected() {
        return Err(Error::UnsupportedDecomposition(
            "core subgraph is disconnected".into(),
        ));
    }
    let periphery = Graph::new(periphery_vertex_map.len(), periphery_edges)?;
    Ok(Decomposition {
        core_vertices,
        core,
        core_edge_map,
        periphery,
        periphery_vertex_map,
        edge_map,
    })
}

/// Edges of a tree between depth `level - 1` and depth `level` around a center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarLevel {
    pub level: usize,
    /// Original edge ids in ascending order; the star edge index is the
    /// position in this list.
    pub edges: Vec<usize>,
}

impl StarLevel {
    pub fn star_edge_count(&self) -> usize {
        self.edges.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarLevelDecomposition {
    pub center: usize,
    pub levels: Vec<StarLevel>,
}

impl StarLevelDecomposition {
    pub fn star_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(StarLevel::star_edge_count).collect()
    }
}

/// Splits a tree into the stars met by repeatedly contracting the star around
/// the (growing) center: level `i` holds the edges from depth `i - 1` to `i`.
pub fn tree_star_levels(tree: &Graph, center: usize) -> Result<StarLevelDecomposition> {
    if center >= tree.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "center {center} not in graph"
        )));
    }
    if !tree.is_connected() {
        return Err(Error::NotATree("graph is disconnected".into()));
    }
    if !tree.is_tree() {
        return Err(Error::NotATree(format!(
            "{} vertices but {} edges",
            tree.vertex_count(),
            tree.edge_count()
        )));
    }
    let depth = tree.distances(center);
    let mut levels: Vec<StarLevel> = Vec::new();
    for (id, &(u, v)) in tree.edges().iter().enumerate() {
        let level = depth[u].max(depth[v]).expect("tree is connected");
        while levels.len() < level {
            levels.push(StarLevel {
                level: levels.len() + 1,
                edges: Vec::new(),
            });
        }
        levels[level - 1].edges.push(id);
    }
    Ok(StarLevelDecomposition { center, levels })
}

/// One labelled piece of a graph: a labelling of its own edges `0..k` and the
/// map from those edge ids to edge ids of the whole graph.
#[derive(Debug, Clone)]
pub struct Part {
    pub labelling: Labelling,
    pub edge_map: Vec<usize>,
}

/// Concatenates part labellings over disjoint universes. Part `j`'s bit `p`
/// becomes `p + Σ_{i<j} |U_i|`; element names are prefixed with `j/`.
pub fn combine(edge_count: usize, parts: &[Part]) -> Result<Labelling> {
    let width: usize = parts.iter().map(|p| p.labelling.universe_size()).sum();
    let mut names = Vec::with_capacity(width);
    let mut labels: Vec<Option<EdgeLabel>> = vec![None; edge_count];
    let mut offset = 0;
    for (j, part) in parts.iter().enumerate() {
        if part.edge_map.len() != part.labelling.edge_count() {
            return Err(Error::Partition(format!(
                "part {j} labels {} edges but maps {}",
                part.labelling.edge_count(),
                part.edge_map.len()
            )));
        }
        names.extend(
            part.labelling
                .universe()
                .element_names()
                .iter()
                .map(|n| format!("{j}/{n}")),
        );
        for (local, &global) in part.edge_map.iter().enumerate() {
            let slot = labels.get_mut(global).ok_or_else(|| {
                Error::Partition(format!(
                    "part {j} maps to edge {global} outside 0..{edge_count}"
                ))
            })?;
            if slot.is_some() {
                return Err(Error::Partition(format!("edge {global} is covered twice")));
            }
            let bits = part.labelling.label(local).bits().shifted(offset, width)?;
            *slot = Some(EdgeLabel(bits));
        }
        offset += part.labelling.universe_size();
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(e, l)| l.ok_or_else(|| Error::Partition(format!("edge {e} is not covered"))))
        .collect::<Result<Vec<_>>>()?;
    Labelling::new(BitUniverse::new(names), labels)
}

/// Optimal-rank star labelling for every level of the tree, level order.
pub fn tree_parts(tree: &Graph, center: usize) -> Result<Vec<Part>> {
    tree_star_levels(tree, center)?
        .levels
        .into_iter()
        .map(|level| {
            Ok(Part {
                labelling: optimal_star_labelling(level.star_edge_count())?,
                edge_map: level.edges,
            })
        })
        .collect()
}

pub fn label_tree(tree: &Graph, center: usize) -> Result<Labelling> {
    combine(tree.edge_count(), &tree_parts(tree, center)?)
}

/// Bit-per-vertex on the core, level stars on the (tree) periphery around the
/// contracted vertex.
pub fn label_core_periphery(g: &Graph, core_vertices: &[usize]) -> Result<Labelling> {
    let d = contract(g, core_vertices)?;
    if !d.periphery.is_tree() {
        return Err(Error::UnsupportedDecomposition(
            "periphery is not a tree".into(),
        ));
    }
    let mut parts = vec![Part {
        labelling: bit_per_vertex(&d.core),
        edge_map: d.core_edge_map.clone(),
    }];
    for part in tree_parts(&d.periphery, CONTRACTED)? {
        parts.push(Part {
            edge_map: part.edge_map.iter().map(|&e| d.edge_map[e]).collect(),
            labelling: part.labelling,
        });
    }
    combine(g.edge_count(), &parts)
}

/// Universe size of [`label_tree`] given the level star sizes.
pub fn tree_universe_size(star_sizes: &[usize]) -> Result<usize> {
    star_sizes
        .iter()
        .map(|&n| optimal_rank(n).map(|o| o.universe_size))
        .sum()
}

/// Universe size of [`label_tree`] for a perfect binary tree of height `h`,
/// whose levels are stars of `2, 4, ..., 2^h` edges.
pub fn binary_tree_universe_size(h: u32) -> Result<usize> {
    if h == 0 || h >= usize::BITS - 1 {
        return Err(Error::InvalidParameter(format!(
            "tree height {h} out of range"
        )));
    }
    let sizes: Vec<usize> = (1..=h).map(|i| 1usize << i).collect();
    tree_universe_size(&sizes)
}

/// Universe size of [`label_core_periphery`] on the core-periphery graph with
/// `n` core vertices: `n` core bits plus one star of `n(n - 1)` edges.
pub fn core_periphery_universe_size(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "core-periphery graphs need n >= 2".into(),
        ));
    }
    Ok(n + optimal_rank(n * (n - 1))?.universe_size)
}

/// Bit ranges `[start, end)` occupied by each part after [`combine`].
pub fn part_ranges(parts: &[Part]) -> Vec<(usize, usize)> {
    let mut offset = 0;
    parts
        .iter()
        .map(|p| {
            let start = offset;
            offset += p.labelling.universe_size();
            (start, offset)
        })
        .collect()
}
