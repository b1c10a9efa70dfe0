//! Colouring plane graphs with lists of size three on the boundary and five
//! inside, given a precoloured boundary edge.
//!
//! The recursion is the classical one: split along a cutvertex or a chord of
//! the outer cycle, and otherwise delete the boundary neighbour of one
//! precoloured vertex after reserving two of its colours.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::canvas::{Canvas, ColorSet, ListAssignment};
use crate::embed::{components_avoiding, EmbeddedGraph, GraphView, Separation, SeparationKind, Vertex};
use crate::oracle::{verify, Coloring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThomError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
}

fn violation<T>(msg: impl Into<String>) -> Result<T, ThomError> {
    Err(ThomError::HypothesisViolation(msg.into()))
}

/// Checks that `pins` may be extended by the boundary recursion: at most two
/// pinned vertices, adjacent if two, on the outer face, properly coloured
/// from their lists; every other vertex has five colours inside and three on
/// the boundary.
pub fn check_boundary_pins(g: &EmbeddedGraph, lists: &ListAssignment, pins: &Coloring) -> Result<(), ThomError> {
    let pinned: Vec<Vertex> = pins.iter().map(|(v, _)| v).filter(|&v| g.contains(v)).collect();
    if pinned.len() > 2 {
        return violation(format!("{} pinned vertices, at most two allowed", pinned.len()));
    }
    if pinned.len() == 2 && !g.has_edge(pinned[0], pinned[1]) {
        return violation(format!("pinned vertices {} and {} are not adjacent", pinned[0], pinned[1]));
    }
    if pinned.len() == 2 && pins.get(pinned[0]) == pins.get(pinned[1]) {
        return violation("pinned vertices share a colour");
    }
    let outer = g.outer_vertices();
    for &p in &pinned {
        if !outer.contains(&p) {
            return violation(format!("pinned vertex {p} is not on the outer face"));
        }
        if !lists.get(p).contains(pins.get(p).unwrap()) {
            return violation(format!("pinned colour of {p} is not in its list"));
        }
    }
    for v in g.vertex_list() {
        if pins.contains(v) {
            continue;
        }
        let need = if outer.contains(&v) { 3 } else { 5 };
        if lists.get(v).len() < need {
            return violation(format!("vertex {v} has {} colours, needs {need}", lists.get(v).len()));
        }
    }
    Ok(())
}

/// Extends `pins` (see [`check_boundary_pins`]) to an L-colouring of `g`.
pub fn extend_boundary_coloring(
    g: &EmbeddedGraph,
    lists: &ListAssignment,
    pins: &Coloring,
) -> Result<Coloring, ThomError> {
    check_boundary_pins(g, lists, pins)?;
    let pins = pins.restricted_to(&g.vertex_set());
    let coloring = extend(g, lists, &pins);
    assert!(verify(g, lists, &coloring), "boundary recursion produced an invalid colouring");
    Ok(coloring)
}

/// The recursion proper. Preconditions are those of [`check_boundary_pins`].
fn extend(g: &EmbeddedGraph, lists: &ListAssignment, pins: &Coloring) -> Coloring {
    let comps = g.components();
    if comps.len() > 1 {
        let mut out = Coloring::new();
        for comp in comps {
            let part = g.induced(&comp).expect("components are plane subgraphs");
            out.merge(&extend(&part, lists, &pins.restricted_to(&comp)));
        }
        return out;
    }
    if g.vertex_count() == 0 {
        return Coloring::new();
    }
    if pins.len() == g.vertex_count() {
        return pins.clone();
    }
    if g.vertex_count() == 1 {
        let v = g.vertex_list()[0];
        return [(v, lists.get(v).min().unwrap())].into_iter().collect();
    }
    let mut pins = pins.clone();
    if pins.is_empty() {
        let v = *g.outer_vertices().iter().next().unwrap();
        pins.set(v, lists.get(v).min().unwrap());
    }
    if pins.len() == 1 {
        let (p, c) = pins.iter().next().unwrap();
        let w = *g
            .rotation(p)
            .iter()
            .find(|&&w| g.is_outer_dart((p, w)))
            .expect("a boundary vertex with an edge starts an outer dart");
        pins.set(w, lists.get(w).without(c).min().unwrap());
    }
    if pins.len() == g.vertex_count() {
        return pins;
    }
    let pinned: Vec<Vertex> = pins.iter().map(|(v, _)| v).collect();

    if let Some(&cut) = g.cutvertices().iter().next() {
        let comps = components_avoiding(g, &[cut]);
        let anchor = pinned.iter().copied().find(|&p| p != cut).unwrap();
        let home = comps.iter().find(|c| c.contains(&anchor)).unwrap();
        let side_a: BTreeSet<Vertex> = home.iter().copied().chain([cut]).collect();
        let side_b: BTreeSet<Vertex> = g.vertex_set().into_iter().filter(|v| !home.contains(v)).collect();
        return split_and_extend(g, lists, &pins, Separation { kind: SeparationKind::Cutvertex, attachment: vec![cut], side_a, side_b });
    }

    let chords = g.outer_walk_chords();
    if let Some(&(x, y)) = chords.iter().next() {
        let comps = components_avoiding(g, &[x, y]);
        let anchor = pinned.iter().copied().find(|&p| p != x && p != y);
        let home = match anchor {
            Some(a) => comps.iter().find(|c| c.contains(&a)).unwrap(),
            None => &comps[0],
        };
        let side_a: BTreeSet<Vertex> = home.iter().copied().chain([x, y]).collect();
        let side_b: BTreeSet<Vertex> = g.vertex_set().into_iter().filter(|v| !home.contains(v)).collect();
        return split_and_extend(g, lists, &pins, Separation { kind: SeparationKind::Chord, attachment: vec![x, y], side_a, side_b });
    }

    // 2-connected with a chordless outer cycle through the edge p1 p2
    let cycle = g.outer_cycle().expect("no cutvertex and at least three vertices");
    let n = cycle.len();
    let (p1, p2) = (pinned[0], pinned[1]);
    let i = cycle.iter().position(|&v| v == p1).unwrap();
    let (prev, next) = (cycle[(i + n - 1) % n], cycle[(i + 1) % n]);
    let v = if prev == p2 { next } else { prev };
    let j = cycle.iter().position(|&x| x == v).unwrap();
    let w = if cycle[(j + 1) % n] == p1 { cycle[(j + n - 1) % n] } else { cycle[(j + 1) % n] };
    let reserved = lists.get(v).without(pins.get(p1).unwrap()).smallest(2);
    let inner_neighbors: Vec<Vertex> = g.neighbors(v).iter().copied().filter(|&x| x != p1 && x != w).collect();
    let reduced = lists.trimmed(inner_neighbors, reserved);
    let rest = g.without_vertices(&[v]).expect("deleting a vertex keeps a plane subgraph");
    let mut out = extend(&rest, &reduced, &pins);
    let c = reserved.without(out.get(w).unwrap()).min().unwrap();
    out.set(v, c);
    out
}

fn split_and_extend(g: &EmbeddedGraph, lists: &ListAssignment, pins: &Coloring, sep: Separation) -> Coloring {
    let (g1, g2) = g.split_at(&sep).expect("separator found by search is valid");
    let mut out = extend(&g1, lists, &pins.restricted_to(&g1.vertex_set()));
    let att: Coloring = sep.attachment.iter().map(|&a| (a, out.get(a).unwrap())).collect();
    out.merge(&extend(&g2, lists, &att));
    out
}

/// Colours `g` given the boundary edge `p1 p2` whose lists are distinct
/// singletons.
pub fn color_with_precolored_edge(
    g: &EmbeddedGraph,
    p1: Vertex,
    p2: Vertex,
    lists: &ListAssignment,
) -> Result<Coloring, ThomError> {
    for p in [p1, p2] {
        if !g.contains(p) {
            return violation(format!("vertex {p} is not in the graph"));
        }
        if lists.get(p).len() != 1 {
            return violation(format!("vertex {p} must have exactly one colour"));
        }
    }
    if !g.has_edge(p1, p2) {
        return violation(format!("{p1} and {p2} are not adjacent"));
    }
    if !g.is_outer_dart((p1, p2)) && !g.is_outer_dart((p2, p1)) {
        return violation(format!("{p1} {p2} is not a boundary edge"));
    }
    let pins: Coloring = [(p1, lists.get(p1).min().unwrap()), (p2, lists.get(p2).min().unwrap())].into_iter().collect();
    extend_boundary_coloring(g, lists, &pins)
}

/// Extends a proper colouring of the S path (at most two vertices, no
/// isolated S vertices) to the whole canvas.
pub fn color_with_colored_short_path(canvas: &Canvas, pin: &Coloring) -> Result<Coloring, ThomError> {
    let path = &canvas.s.path;
    if path.len() > 2 || !canvas.s.isolated.is_empty() {
        return violation("S must be a path on at most two vertices");
    }
    for &p in path {
        match pin.get(p) {
            Some(c) if canvas.lists.get(p).contains(c) => {}
            _ => return violation(format!("path vertex {p} is not coloured from its list")),
        }
    }
    let pins = pin.restricted_to(&path.iter().copied().collect());
    extend_boundary_coloring(&canvas.graph, &canvas.lists, &pins)
}

/// The subgraph on a cycle and its interior, with every edge between two
/// cycle vertices that is not a cycle edge dropped, so that its outer face is
/// bounded by the cycle.
fn closed_disk(g: &EmbeddedGraph, cycle: &[Vertex]) -> EmbeddedGraph {
    let interior = g.cycle_interior(cycle);
    let on_cycle: BTreeSet<Vertex> = cycle.iter().copied().collect();
    let cycle_edges: BTreeSet<(Vertex, Vertex)> = (0..cycle.len())
        .map(|i| {
            let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            (a.min(b), a.max(b))
        })
        .collect();
    let dropped = g
        .edge_list()
        .into_iter()
        .filter(|&(a, b)| on_cycle.contains(&a) && on_cycle.contains(&b) && !cycle_edges.contains(&(a, b)))
        .collect();
    let keep = on_cycle.union(&interior).copied().collect();
    g.restrict(&keep, &dropped).expect("a closed disk is a plane subgraph")
}

/// Extends the colouring of a cycle on the first two cycle vertices kept
/// pinned and the others deleted, their colours removed from their
/// neighbours' lists.
pub fn peel_short_cycle(
    g: &EmbeddedGraph,
    cycle: &[Vertex],
    boundary: &Coloring,
    lists: &ListAssignment,
) -> Result<Coloring, ThomError> {
    let disk = closed_disk(g, cycle);
    let (z1, z2) = (cycle[0], cycle[1]);
    let removed = &cycle[2..];
    let mut reduced = lists.clone();
    for &w in removed {
        let c = ColorSet::singleton(boundary.get(w).unwrap());
        reduced = reduced.trimmed(disk.neighbors(w).to_vec(), c);
    }
    let rest = disk.without_vertices(removed).expect("deleting vertices keeps a plane subgraph");
    let pins: Coloring = [(z1, boundary.get(z1).unwrap()), (z2, boundary.get(z2).unwrap())].into_iter().collect();
    let mut out = extend_boundary_coloring(&rest, &reduced, &pins)?;
    for &w in removed {
        out.set(w, boundary.get(w).unwrap());
    }
    Ok(out)
}

/// Extends a proper colouring of a cycle of length at most four to the
/// vertices inside it, whose lists have at least five colours. Returns the
/// colouring of the cycle and its interior.
pub fn extend_into_short_cycle_interior(
    g: &EmbeddedGraph,
    cycle: &[Vertex],
    boundary: &Coloring,
    lists: &ListAssignment,
) -> Result<Coloring, ThomError> {
    if !(3..=4).contains(&cycle.len()) {
        return violation(format!("cycle of length {} is not short", cycle.len()));
    }
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        if !g.has_edge(a, b) {
            return violation(format!("{a} {b} is not an edge"));
        }
        match (boundary.get(a), boundary.get(b)) {
            (Some(x), Some(y)) if x != y => {}
            _ => return violation("cycle is not properly coloured"),
        }
    }
    let interior = g.cycle_interior(cycle);
    if let Some(&v) = interior.iter().find(|&&v| lists.get(v).len() < 5) {
        return violation(format!("interior vertex {v} has fewer than five colours"));
    }
    let boundary = boundary.restricted_to(&cycle.iter().copied().collect());
    if interior.is_empty() {
        return Ok(boundary);
    }
    let disk = closed_disk(g, cycle);
    let mut disk_lists = lists.restricted_to(&disk.vertex_set());
    for (v, c) in boundary.iter() {
        disk_lists.set(v, ColorSet::singleton(c));
    }
    let out = peel_short_cycle(g, cycle, &boundary, lists)?;
    assert!(verify(&disk, &disk_lists, &out), "interior extension is invalid");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canvas::tests::{cycle_graph, lists};
    use crate::canvas::{validate_canvas, SDesignation};
    use crate::embed::tests::{outer_of_len, rot};
    use crate::oracle::solve_exact;

    fn with_hub(g: &EmbeddedGraph, hub: Vertex) -> EmbeddedGraph {
        let inner = (0..g.face_count()).find(|f| !g.outer_face_ids().contains(f)).unwrap();
        g.with_vertex_in_face(hub, &g.faces()[inner].clone(), None).unwrap()
    }

    #[test]
    fn triangle_third_vertex_gets_the_free_colour() {
        let g = cycle_graph(3);
        let l = lists(&[(0, &[1]), (1, &[2]), (2, &[1, 2, 3])]);
        let c = color_with_precolored_edge(&g, 0, 1, &l).unwrap();
        assert_eq!(c.get(2), Some(3));
    }

    #[test]
    fn square_with_centre() {
        let g = with_hub(&cycle_graph(4), 4);
        assert!(!g.is_outer_vertex(4));
        let l = lists(&[(0, &[1]), (1, &[2]), (2, &[1, 2, 3]), (3, &[1, 2, 3]), (4, &[1, 2, 3, 4, 5])]);
        let c = color_with_precolored_edge(&g, 0, 1, &l).unwrap();
        assert!(verify(&g, &l, &c));
        assert!(solve_exact(&g, &l, &Coloring::new()).is_some());
    }

    #[test]
    fn fan_on_six_vertices() {
        let r = rot(&[
            (0, &[5, 4, 3, 2, 1]),
            (1, &[0, 2]),
            (2, &[1, 0, 3]),
            (3, &[2, 0, 4]),
            (4, &[3, 0, 5]),
            (5, &[4, 0]),
        ]);
        let g = outer_of_len(r, 6);
        let mut l: ListAssignment = (2..6).map(|v| (v, ColorSet::from([1, 2, 3]))).collect();
        l.set(0, ColorSet::from([1]));
        l.set(1, ColorSet::from([2]));
        let c = color_with_precolored_edge(&g, 0, 1, &l).unwrap();
        assert!(verify(&g, &l, &c));
    }

    #[test]
    fn equal_singletons_are_rejected() {
        let g = cycle_graph(3);
        let l = lists(&[(0, &[1]), (1, &[1]), (2, &[1, 2, 3])]);
        assert!(color_with_precolored_edge(&g, 0, 1, &l).is_err());
    }

    #[test]
    fn bowtie_is_handled_by_blocks() {
        let r = rot(&[(0, &[1, 2]), (1, &[2, 0]), (2, &[0, 1, 3, 4]), (3, &[4, 2]), (4, &[2, 3])]);
        let g = outer_of_len(r, 6);
        let l = lists(&[(0, &[1]), (1, &[2]), (2, &[1, 2, 3]), (3, &[1, 2, 3]), (4, &[1, 2, 3])]);
        let c = color_with_precolored_edge(&g, 0, 1, &l).unwrap();
        assert!(verify(&g, &l, &c));
    }

    #[test]
    fn short_path_single_vertex_and_empty() {
        let g = with_hub(&cycle_graph(5), 5);
        let mut l: ListAssignment = (0..5).map(|v| (v, ColorSet::from([1, 2, 3]))).collect();
        l.set(5, ColorSet::from([1, 2, 3, 4, 5]));
        let single = validate_canvas(&g, &SDesignation::path(vec![2]), &l).unwrap();
        let c = color_with_colored_short_path(&single, &[(2, 3)].into_iter().collect()).unwrap();
        assert_eq!(c.get(2), Some(3));
        assert!(verify(&g, &l, &c));
        let empty = validate_canvas(&g, &SDesignation::default(), &l).unwrap();
        assert!(verify(&g, &l, &color_with_colored_short_path(&empty, &Coloring::new()).unwrap()));
    }

    #[test]
    fn empty_interior_returns_boundary() {
        let g = cycle_graph(4);
        let b: Coloring = [(0, 1), (1, 2), (2, 1), (3, 2)].into_iter().collect();
        let l = lists(&[(0, &[1, 2]), (1, &[1, 2]), (2, &[1, 2]), (3, &[1, 2])]);
        assert_eq!(extend_into_short_cycle_interior(&g, &[0, 1, 2, 3], &b, &l).unwrap(), b);
    }

    #[test]
    fn triangle_with_one_inside() {
        let g = with_hub(&cycle_graph(3), 3);
        let b: Coloring = [(0, 1), (1, 2), (2, 3)].into_iter().collect();
        let l = lists(&[(0, &[1]), (1, &[2]), (2, &[3]), (3, &[1, 2, 3, 4, 5])]);
        let c = extend_into_short_cycle_interior(&g, &[0, 1, 2], &b, &l).unwrap();
        assert!([4, 5].contains(&c.get(3).unwrap()));
    }

    #[test]
    fn square_with_triangle_inside() {
        // 4-cycle 0..3; inner triangle 4,5,6; 4 sees 0,1; 5 sees 1,2,3; 6 sees 3,0
        let r = rot(&[
            (0, &[1, 4, 6, 3]),
            (1, &[2, 5, 4, 0]),
            (2, &[3, 5, 1]),
            (3, &[0, 6, 5, 2]),
            (4, &[0, 1, 5, 6]),
            (5, &[4, 1, 2, 3, 6]),
            (6, &[0, 4, 5, 3]),
        ]);
        let g = outer_of_len(r, 4);
        assert_eq!(g.cycle_interior(&[0, 1, 2, 3]), BTreeSet::from([4, 5, 6]));
        let b: Coloring = [(0, 1), (1, 2), (2, 3), (3, 2)].into_iter().collect();
        let mut l: ListAssignment = (4..7).map(|v| (v, ColorSet::from([1, 2, 3, 4, 5]))).collect();
        for (v, c) in b.iter() {
            l.set(v, ColorSet::singleton(c));
        }
        let c = extend_into_short_cycle_interior(&g, &[0, 1, 2, 3], &b, &l).unwrap();
        assert!(verify(&g, &l, &c));
        assert!(peel_short_cycle(&g, &[0, 1, 2, 3], &b, &l).is_ok());
    }
}
