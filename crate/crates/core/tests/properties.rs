use proptest::prelude::*;

use pathlabel::decompose::{
    contract, label_core_periphery, label_tree, part_ranges, tree_parts, tree_star_levels, Part,
};
use pathlabel::graph::{make_core_periphery, make_random_connected, Graph};
use pathlabel::labelling::{bit_per_edge, bit_per_vertex, optimal_star_labelling, star_labelling};
use pathlabel::routing::{encode_path, recognised, simulate_delivery, verify_no_false_positives};
use pathlabel::{Labelling, Path};

const CAP: usize = 100_000;

/// A connected random core on `0..core` with a random forest hung off it,
/// one parent per outside vertex.
fn core_with_forest(core: usize, outside: usize, p: f64, seed: u64, parents: &[usize]) -> Graph {
    let c = make_random_connected(core, p, seed).unwrap();
    let mut edges = c.edges().to_vec();
    for (v, parent) in (core..core + outside).zip(parents) {
        edges.push((parent % v, v));
    }
    Graph::new(core + outside, edges).unwrap()
}

fn arb_core_forest() -> impl Strategy<Value = (Graph, Vec<usize>)> {
    (
        2usize..8,
        1usize..10,
        0.0f64..0.6,
        any::<u64>(),
        prop::collection::vec(any::<usize>(), 10),
    )
        .prop_map(|(core, outside, p, seed, parents)| {
            (
                core_with_forest(core, outside, p, seed, &parents),
                (0..core).collect(),
            )
        })
}

fn arb_tree() -> impl Strategy<Value = (Graph, usize)> {
    (2usize..40, any::<u64>(), any::<usize>())
        .prop_map(|(n, seed, c)| (make_random_connected(n, 0.0, seed).unwrap(), c % n))
}

fn all_paths(g: &Graph) -> Vec<Path> {
    let mut out = Vec::new();
    for u in 0..g.vertex_count() {
        for v in 0..g.vertex_count() {
            out.extend(g.all_shortest_paths(u, v, CAP).unwrap());
        }
    }
    out
}

fn dist(g: &Graph, u: usize, v: usize) -> usize {
    g.distances(u)[v].unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn path_edges_are_always_recognised(n in 2usize..30, p in 0.0f64..0.5, seed: u64) {
        let g = make_random_connected(n, p, seed).unwrap();
        for l in [bit_per_edge(&g), bit_per_vertex(&g)] {
            for path in all_paths(&g) {
                let h = encode_path(&l, &path);
                for &e in &path.edges {
                    prop_assert!(recognised(l.label(e), &h).unwrap());
                }
            }
        }
    }

    #[test]
    fn header_grows_along_path(n in 2usize..30, p in 0.0f64..0.5, seed: u64) {
        let g = make_random_connected(n, p, seed).unwrap();
        let l = bit_per_vertex(&g);
        let path = g.shortest_path(0, n - 1).unwrap();
        let mut previous = encode_path(&l, &Path::trivial(0));
        for i in 1..=path.edges.len() {
            let prefix = Path { vertices: path.vertices[..=i].to_vec(), edges: path.edges[..i].to_vec() };
            let h = encode_path(&l, &prefix);
            prop_assert!(previous.bits().is_subset(h.bits()).unwrap());
            previous = h;
        }
    }

    #[test]
    fn star_labels_are_distinct_with_fixed_weight(n in 1usize..3000, rank in 1u32..6) {
        let l = star_labelling(n, rank).unwrap();
        let weight = (rank + rank * (rank - 1) / 2) as usize;
        let mut seen = std::collections::HashSet::new();
        for label in l.labels() {
            prop_assert_eq!(label.bits().count_ones(), weight);
            prop_assert!(seen.insert(label.clone()));
        }
    }

    #[test]
    fn shortest_paths_split_over_core_and_periphery((g, core) in arb_core_forest()) {
        let d = contract(&g, &core).unwrap();
        let in_core = |e: usize| d.core_edge_map.contains(&e);
        let to_periphery = |e: usize| d.edge_map.iter().position(|&x| x == e).unwrap();
        for path in all_paths(&g) {
            let positions: Vec<usize> = (0..path.edges.len()).filter(|&i| in_core(path.edges[i])).collect();
            if let (Some(&first), Some(&last)) = (positions.first(), positions.last()) {
                prop_assert_eq!(last - first + 1, positions.len(), "core edges contiguous");
                let a = d.core_vertices.binary_search(&path.vertices[first]).unwrap();
                let b = d.core_vertices.binary_search(&path.vertices[last + 1]).unwrap();
                prop_assert_eq!(dist(&d.core, a, b), positions.len());
            }
            let rest: Vec<usize> = path.edges.iter().copied().filter(|&e| !in_core(e)).map(to_periphery).collect();
            if let (Some(&head), Some(&tail)) = (rest.first(), rest.last()) {
                let (x, y) = d.periphery.edge(head);
                let (s, t) = d.periphery.edge(tail);
                // Project the path endpoints onto the periphery.
                let project = |v: usize| d.periphery_vertex_map.iter().position(|&m| m == Some(v)).unwrap_or(0);
                let (pu, pv) = (project(path.source()), project(path.target()));
                prop_assert!(pu == x || pu == y);
                prop_assert!(pv == s || pv == t);
                prop_assert_eq!(dist(&d.periphery, pu, pv), rest.len());
            }
        }
    }

    #[test]
    fn tree_paths_use_at_most_two_edges_per_level((tree, center) in arb_tree()) {
        let levels = tree_star_levels(&tree, center).unwrap();
        let mut level_of = vec![0; tree.edge_count()];
        for lv in &levels.levels {
            for &e in &lv.edges {
                level_of[e] = lv.level;
            }
        }
        for path in all_paths(&tree) {
            let mut per_level = vec![0; levels.levels.len() + 1];
            for &e in &path.edges {
                per_level[level_of[e]] += 1;
            }
            prop_assert!(per_level.iter().all(|&c| c <= 2));
        }
    }

    #[test]
    fn parts_occupy_disjoint_covering_ranges((tree, center) in arb_tree()) {
        let parts = tree_parts(&tree, center).unwrap();
        let ranges = part_ranges(&parts);
        let l = label_tree(&tree, center).unwrap();
        prop_assert_eq!(ranges.last().map_or(0, |r| r.1), l.universe_size());
        for w in ranges.windows(2) {
            prop_assert_eq!(w[0].1, w[1].0);
        }
        let mut covered = vec![false; tree.edge_count()];
        for (part, &(start, end)) in parts.iter().zip(&ranges) {
            for &e in &part.edge_map {
                prop_assert!(!covered[e]);
                covered[e] = true;
                prop_assert!(l.label(e).bits().ones().all(|b| (start..end).contains(&b)));
            }
        }
        prop_assert!(covered.iter().all(|&c| c));
    }

    #[test]
    fn combined_labelling_delivers_on_core_forests((g, core) in arb_core_forest()) {
        let l = label_core_periphery(&g, &core).unwrap();
        let report = verify_no_false_positives(&g, &l, CAP).unwrap();
        prop_assert!(report.is_clean(), "{}", report);
        for u in 0..g.vertex_count() {
            for v in 0..g.vertex_count() {
                let trace = simulate_delivery(&g, &l, u, v).unwrap();
                prop_assert!(trace.is_clean(), "{}", trace);
            }
        }
    }

    #[test]
    fn tree_labelling_delivers_from_any_center((tree, center) in arb_tree()) {
        let l = label_tree(&tree, center).unwrap();
        prop_assert!(verify_no_false_positives(&tree, &l, CAP).unwrap().is_clean());
        for u in 0..tree.vertex_count() {
            let v = (u * 7 + 3) % tree.vertex_count();
            prop_assert!(simulate_delivery(&tree, &l, u, v).unwrap().is_clean());
        }
    }
}

#[test]
fn core_periphery_generator_splits_cleanly() {
    for n in 2..=10 {
        let (g, core) = make_core_periphery(n).unwrap();
        let d = contract(&g, &core).unwrap();
        assert_eq!(d.core.edge_count(), n * (n - 1) / 2);
        assert_eq!(d.periphery.edge_count(), n * (n - 1));
        assert!(d.periphery.is_tree());
        assert_eq!(d.periphery.degree(0), n * (n - 1));
    }
}

#[test]
fn combining_one_part_is_identity() {
    let l: Labelling = optimal_star_labelling(17).unwrap();
    let part = Part {
        labelling: l.clone(),
        edge_map: (0..17).collect(),
    };
    let combined = pathlabel::decompose::combine(17, &[part]).unwrap();
    assert_eq!(combined.labels(), l.labels());
    assert!(combined
        .universe()
        .element_names()
        .iter()
        .all(|n| n.starts_with("0/")));
}
