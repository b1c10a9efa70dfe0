//! Plane graph families and the random near-triangulation generator.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Family, HarnessError};
use crate::embed::{EmbeddedGraph, GraphView, Vertex};

pub const MAX_ENUMERATED_VERTICES: usize = 8;

/// The polygon `0..n` (placed counter-clockwise) with the given diagonals.
pub fn polygon_with_chords(n: u32, chords: &[(Vertex, Vertex)]) -> EmbeddedGraph {
    let mut nbrs: BTreeMap<Vertex, Vec<Vertex>> = (0..n).map(|i| (i, vec![(i + 1) % n, (i + n - 1) % n])).collect();
    for &(a, b) in chords {
        nbrs.get_mut(&a).unwrap().push(b);
        nbrs.get_mut(&b).unwrap().push(a);
    }
    // clockwise around a convex polygon vertex: decreasing counter-clockwise offset
    for (&i, ns) in nbrs.iter_mut() {
        ns.sort_by_key(|&j| std::cmp::Reverse((j + n - i) % n));
    }
    EmbeddedGraph::from_rotation(nbrs, vec![(1, 0)]).expect("convex polygon drawing is plane")
}

pub fn cycle(n: u32) -> EmbeddedGraph {
    polygon_with_chords(n, &[])
}

/// Hub `0` joined to every vertex of the path `1..n`; the hub is on the
/// outer cycle.
pub fn fan(n: u32) -> EmbeddedGraph {
    let chords: Vec<(Vertex, Vertex)> = (2..n - 1).map(|j| (0, j)).collect();
    polygon_with_chords(n, &chords)
}

/// A rim cycle `0..rim` with hub `rim` inside, joined to all of it.
pub fn wheel(rim: u32) -> EmbeddedGraph {
    let c = cycle(rim);
    with_vertex_in_bounded_face(&c, 0, rim)
}

/// Bounded faces in a fixed order.
pub fn bounded_faces(g: &EmbeddedGraph) -> Vec<usize> {
    (0..g.face_count()).filter(|f| !g.outer_face_ids().contains(f)).collect()
}

/// Adds vertex `z` inside the `k`-th bounded face, joined to all its corners.
pub fn with_vertex_in_bounded_face(g: &EmbeddedGraph, k: usize, z: Vertex) -> EmbeddedGraph {
    let f = bounded_faces(g)[k];
    let corners = g.faces()[f].clone();
    g.with_vertex_in_face(z, &corners, None).expect("stacking into a face keeps the graph plane")
}

fn crosses((a, b): (Vertex, Vertex), (c, d): (Vertex, Vertex)) -> bool {
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

/// Every set of pairwise non-crossing diagonals of the `n`-gon.
pub fn dissections(n: u32) -> Vec<Vec<(Vertex, Vertex)>> {
    let diagonals: Vec<(Vertex, Vertex)> = (0..n)
        .flat_map(|a| (a + 2..n).map(move |b| (a, b)))
        .filter(|&(a, b)| !(a == 0 && b == n - 1))
        .collect();
    let mut out = Vec::new();
    fn go(
        i: usize,
        diagonals: &[(Vertex, Vertex)],
        chosen: &mut Vec<(Vertex, Vertex)>,
        out: &mut Vec<Vec<(Vertex, Vertex)>>,
    ) {
        if i == diagonals.len() {
            out.push(chosen.clone());
            return;
        }
        go(i + 1, diagonals, chosen, out);
        if chosen.iter().all(|&c| !crosses(c, diagonals[i])) {
            chosen.push(diagonals[i]);
            go(i + 1, diagonals, chosen, out);
            chosen.pop();
        }
    }
    go(0, &diagonals, &mut Vec::new(), &mut out);
    out
}

/// Closes `seeds` under adding a vertex inside a bounded face, up to
/// `max_n` vertices, one graph per rooted embedding class.
fn stacked_closure(seeds: Vec<EmbeddedGraph>, max_n: usize) -> Vec<EmbeddedGraph> {
    let mut seen: HashSet<Vec<u32>> = seeds.iter().map(EmbeddedGraph::canonical_code).collect();
    let mut out = Vec::new();
    let mut frontier = seeds;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            if g.vertex_count() >= max_n {
                continue;
            }
            let z = g.vertex_count() as Vertex;
            for k in 0..bounded_faces(g).len() {
                let h = with_vertex_in_bounded_face(g, k, z);
                if seen.insert(h.canonical_code()) {
                    next.push(h);
                }
            }
        }
        out.append(&mut frontier);
        frontier = next;
    }
    out
}

fn chorded_cycles(max_n: u32) -> impl Iterator<Item = EmbeddedGraph> {
    (3..=max_n).flat_map(|n| dissections(n).into_iter().map(move |d| polygon_with_chords(n, &d)))
}

fn family_graphs(family: Family, max_n: usize) -> Vec<EmbeddedGraph> {
    let n_max = max_n as u32;
    match family {
        Family::Cycles => (3..=n_max).map(cycle).collect(),
        Family::ChordedCycles => chorded_cycles(n_max).collect(),
        Family::Wheels => (3..n_max).map(wheel).collect(),
        Family::Fans => (4..=n_max).map(fan).collect(),
        Family::StackedTriangulations => stacked_closure(vec![cycle(3)], max_n),
        Family::FaceStacked => {
            let seeds = chorded_cycles(n_max.saturating_sub(1)).collect();
            stacked_closure(seeds, max_n).into_iter().filter(|g| g.vertex_count() > g.outer_vertices().len()).collect()
        }
        Family::RandomNearTriangulations => Vec::new(),
    }
}

/// 2-connected plane graphs on at most `max_n` vertices from the given
/// families, one per isomorphism class of rooted embedding, ordered by size.
pub fn enumerate_families(max_n: usize, families: &BTreeSet<Family>) -> Result<Vec<EmbeddedGraph>, HarnessError> {
    if max_n > MAX_ENUMERATED_VERTICES {
        return Err(HarnessError::BudgetExceeded(format!(
            "enumeration is limited to {MAX_ENUMERATED_VERTICES} vertices, asked for {max_n}"
        )));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &family in families {
        for g in family_graphs(family, max_n) {
            if g.vertex_count() > max_n || !g.is_two_connected() {
                continue;
            }
            let code = g.canonical_code();
            if seen.insert(code.clone()) {
                out.push((g.vertex_count(), g.edge_count(), code, g));
            }
        }
    }
    out.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
    Ok(out.into_iter().map(|t| t.3).collect())
}

/// All families except the random one.
pub fn enumerate_small_plane_graphs(max_n: usize) -> Result<Vec<EmbeddedGraph>, HarnessError> {
    let families = Family::all().into_iter().filter(|&f| f != Family::RandomNearTriangulations).collect();
    enumerate_families(max_n, &families)
}

/// A 2-connected plane graph on `n` vertices: random stacking into bounded
/// faces of a triangle, then random edge deletions that keep it
/// 2-connected. Deterministic in `(n, seed)`.
pub fn generate_near_triangulation(n: usize, seed: u64) -> EmbeddedGraph {
    assert!(n >= 3, "need at least three vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = cycle(3);
    for z in 3..n as Vertex {
        let k = rng.gen_range(0..bounded_faces(&g).len());
        g = with_vertex_in_bounded_face(&g, k, z);
    }
    let mut edges = g.edge_list();
    edges.shuffle(&mut rng);
    let deletions = rng.gen_range(0..=n / 2);
    let mut done = 0;
    for (a, b) in edges {
        if done == deletions {
            break;
        }
        let h = g.without_edge(a, b).expect("edge deletion keeps a plane graph");
        if h.is_two_connected() {
            g = h;
            done += 1;
        }
    }
    g
}
