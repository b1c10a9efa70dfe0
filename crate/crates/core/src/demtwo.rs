//! Colouring canvases whose precoloured part is a path of equal 2-lists plus
//! one more boundary vertex with at least two colours.
//!
//! [`solve_dem_two`] either returns a colouring or certifies the one
//! obstruction: the path and the extra vertex induce an odd cycle and all of
//! them carry the same 2-list. The recursion shrinks the instance (fewer
//! vertices, or as many vertices and a longer path) in one of the cases
//! listed in [`Case`], and every case is checked against its preconditions
//! as it fires.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::canvas::{
    check_dem_two_parts, exception_for, inessential_separators, validate_canvas, Canvas, CanvasViolation, Color,
    ColorSet, DemTwoInstance, DemTwoViolation, ExceptionCertificate, ListAssignment, SDesignation,
};
use crate::embed::{components_avoiding, EmbeddedGraph, GraphView, Separation, SeparationKind, Vertex};
use crate::oracle::{bad_path_colorings, solve_exact, verify, Coloring};
use crate::thomassen::{check_boundary_pins, extend_boundary_coloring, extend_into_short_cycle_interior};

/// The reduction applied at one level of the recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Case {
    /// The graph is disconnected; components are coloured separately.
    Components,
    /// At most two vertices.
    Trivial,
    /// A cycle of length three or four has vertices inside; they are removed
    /// and coloured last.
    DetachInterior,
    /// A cutvertex or chord with all of S on one side.
    Split,
    /// A cutvertex separating the path from the isolated vertex.
    Cutvertex,
    /// The path and the isolated vertex make up the whole outer cycle.
    V1EqualsV2,
    /// A boundary neighbour of the path without chords and with two colours
    /// outside the path's list.
    BadChordA,
    /// As [`Case::BadChordA`], but the neighbour's list is the path's list
    /// plus one colour; the path is extended by it.
    BadChordB,
    /// The path has two or more vertices and its two boundary neighbours are
    /// adjacent.
    PathShrink,
    /// The path is one vertex and a neighbour's list is larger than three or
    /// misses a colour of the path's list.
    ListTrim,
    /// The two boundary neighbours have different lists.
    ListsDiffer,
    /// No chord at the boundary neighbours other than the one joining them.
    NoSecondChord,
    /// A further chord at a boundary neighbour.
    SecondChord,
    /// The edge-precolouring reduction removed a vertex of a triangle.
    ThomTriangle,
    /// The edge-precolouring reduction stripped the edge and called the
    /// two-lists solver.
    ThomStrip,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub case: Case,
    pub depth: usize,
    /// Vertex count and path length of the instance the case acted on.
    pub size: usize,
    pub path_len: usize,
    pub vertices: Vec<Vertex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "detail")]
pub enum Violation {
    Canvas(CanvasViolation),
    DemTwo(DemTwoViolation),
    Other(String),
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::Canvas(v) => v.kind(),
            Violation::DemTwo(v) => v.kind(),
            Violation::Other(_) => "Other",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Canvas(v) => write!(f, "{v}"),
            Violation::DemTwo(v) => write!(f, "{v}"),
            Violation::Other(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Colored(Coloring),
    Exception(ExceptionCertificate),
    Violation(Violation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub outcome: SolveOutcome,
    pub trace: Vec<TraceStep>,
}

impl Solution {
    pub fn coloring(&self) -> Option<&Coloring> {
        match &self.outcome {
            SolveOutcome::Colored(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("hypothesis violated: {0}")]
    Hypothesis(Violation),
    #[error("internal error: {0}")]
    Internal(String),
}

fn internal<T>(msg: impl Into<String>) -> Result<T, SolveError> {
    Err(SolveError::Internal(msg.into()))
}

enum Sub {
    Colored(Coloring),
    Exception(ExceptionCertificate),
}

/// Colours `path` from `l0` alternately, with the first vertex avoiding
/// `first` and the last avoiding `last`.
fn color_path(path: &[Vertex], l0: ColorSet, first: Option<Color>, last: Option<Color>) -> Option<Coloring> {
    let colors: Vec<Color> = l0.iter().collect();
    for start in 0..2 {
        let c = |i: usize| colors[(start + i) % 2];
        if Some(c(0)) == first || Some(c(path.len() - 1)) == last {
            continue;
        }
        return Some(path.iter().enumerate().map(|(i, &p)| (p, c(i))).collect());
    }
    None
}

fn neighbors_of_set(g: &EmbeddedGraph, set: &[Vertex]) -> BTreeSet<Vertex> {
    set.iter()
        .flat_map(|&p| g.neighbors(p).iter().copied())
        .filter(|x| !set.contains(x))
        .collect()
}

fn without(g: &EmbeddedGraph, removed: &[Vertex]) -> Result<EmbeddedGraph, SolveError> {
    g.without_vertices(removed).or_else(|e| internal(format!("vertex deletion failed: {e}")))
}

fn induced(g: &EmbeddedGraph, keep: &BTreeSet<Vertex>) -> Result<EmbeddedGraph, SolveError> {
    g.induced(keep).or_else(|e| internal(format!("induced subgraph failed: {e}")))
}

struct Solver {
    trace: Vec<TraceStep>,
}

impl Solver {
    fn new() -> Self {
        Solver { trace: Vec::new() }
    }

    fn record(&mut self, case: Case, depth: usize, g: &EmbeddedGraph, path: &[Vertex], vertices: Vec<Vertex>) {
        self.trace.push(TraceStep {
            case,
            depth,
            size: g.vertex_count(),
            path_len: path.len(),
            vertices,
            note: None,
        });
    }

    fn note(&mut self, note: String) {
        if let Some(last) = self.trace.last_mut() {
            last.note = Some(note);
        }
    }

    fn thom(&self, g: &EmbeddedGraph, lists: &ListAssignment, pins: &Coloring) -> Result<Coloring, SolveError> {
        let lists = lists.restricted_to(&g.vertex_set());
        extend_boundary_coloring(g, &lists, pins).or_else(|e| internal(format!("edge-precolouring step rejected: {e}")))
    }

    /// Validates a smaller instance and solves it.
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        &mut self,
        parent: (usize, usize),
        g: &EmbeddedGraph,
        path: &[Vertex],
        u: Vertex,
        lists: &ListAssignment,
        depth: usize,
    ) -> Result<Sub, SolveError> {
        let lists = lists.restricted_to(&g.vertex_set());
        let (n, p) = (g.vertex_count(), path.len());
        if !(n < parent.0 || (n == parent.0 && p > parent.1)) {
            return internal(format!("measure did not decrease: ({}, {}) -> ({n}, {p})", parent.0, parent.1));
        }
        let s = SDesignation { path: path.to_vec(), isolated: vec![u] };
        if let Err(e) = validate_canvas(g, &s, &lists) {
            return internal(format!("sub-instance is not a canvas: {e}"));
        }
        if let Err(e) = check_dem_two_parts(g, path, &[u], &lists) {
            return internal(format!("sub-instance violates the hypotheses: {e}"));
        }
        self.solve(g, path, u, &lists, depth + 1)
    }

    fn recurse_colored(
        &mut self,
        parent: (usize, usize),
        g: &EmbeddedGraph,
        path: &[Vertex],
        u: Vertex,
        lists: &ListAssignment,
        depth: usize,
    ) -> Result<Coloring, SolveError> {
        match self.recurse(parent, g, path, u, lists, depth)? {
            Sub::Colored(c) => Ok(c),
            Sub::Exception(_) => internal("a sub-instance that cannot be exceptional returned the exception"),
        }
    }

    fn solve(
        &mut self,
        g: &EmbeddedGraph,
        path: &[Vertex],
        u: Vertex,
        lists: &ListAssignment,
        depth: usize,
    ) -> Result<Sub, SolveError> {
        if let Some(cert) = exception_for(g, path, u, lists) {
            return Ok(Sub::Exception(cert));
        }
        let coloring = self.reduce(g, path, u, lists, depth)?;
        let coloring = coloring.restricted_to(&g.vertex_set());
        if !verify(g, lists, &coloring) {
            return internal(format!("produced an invalid colouring at depth {depth}"));
        }
        Ok(Sub::Colored(coloring))
    }

    fn reduce(
        &mut self,
        g: &EmbeddedGraph,
        path: &[Vertex],
        u: Vertex,
        lists: &ListAssignment,
        depth: usize,
    ) -> Result<Coloring, SolveError> {
        let measure = (g.vertex_count(), path.len());
        let l0 = lists.get(path[0]);
        let s_vertices: BTreeSet<Vertex> = path.iter().copied().chain([u]).collect();

        let comps = g.components();
        if comps.len() > 1 {
            self.record(Case::Components, depth, g, path, vec![]);
            let mut out = Coloring::new();
            for comp in comps {
                let part = induced(g, &comp)?;
                let (has_p, has_u) = (comp.contains(&path[0]), comp.contains(&u));
                if has_p && has_u {
                    out.merge(&self.recurse_colored(measure, &part, path, u, lists, depth)?);
                    continue;
                }
                let mut pins = Coloring::new();
                if has_p {
                    if path.len() > 1 {
                        return internal("a path of two or more vertices in a disconnected graph");
                    }
                    pins.set(path[0], l0.min().unwrap());
                }
                if has_u {
                    pins.set(u, lists.get(u).min().unwrap());
                }
                out.merge(&self.thom(&part, lists, &pins)?);
            }
            return Ok(out);
        }

        if g.vertex_count() <= 2 {
            self.record(Case::Trivial, depth, g, path, vec![]);
            let p = path[0];
            let c = l0.min().unwrap();
            let mut lu = lists.get(u);
            if g.has_edge(p, u) {
                lu.remove(c);
            }
            return Ok([(p, c), (u, lu.min().unwrap())].into_iter().collect());
        }

        if let Some((cycle, interior)) = g.short_cycles_with_interior().into_iter().next() {
            self.record(Case::DetachInterior, depth, g, path, cycle.clone());
            let keep: BTreeSet<Vertex> = g.vertex_set().difference(&interior).copied().collect();
            let shell = induced(g, &keep)?;
            let mut out = self.recurse_colored(measure, &shell, path, u, lists, depth)?;
            let boundary = out.restricted_to(&cycle.iter().copied().collect());
            let inside = extend_into_short_cycle_interior(g, &cycle, &boundary, lists)
                .or_else(|e| internal(format!("interior extension failed: {e}")))?;
            out.merge(&inside);
            return Ok(out);
        }

        let (cuts, chords) = inessential_separators(g, &s_vertices);
        let split = if let Some(&c) = cuts.first() {
            Some((SeparationKind::Cutvertex, vec![c]))
        } else {
            chords.first().map(|&(x, y)| (SeparationKind::Chord, vec![x, y]))
        };
        if let Some((kind, attachment)) = split {
            self.record(Case::Split, depth, g, path, attachment.clone());
            let comps = components_avoiding(g, &attachment);
            let free = comps
                .iter()
                .find(|c| c.is_disjoint(&s_vertices))
                .ok_or_else(|| SolveError::Internal("inessential separator without a free side".into()))?;
            let side_b: BTreeSet<Vertex> = free.iter().copied().chain(attachment.iter().copied()).collect();
            let side_a: BTreeSet<Vertex> = g.vertex_set().difference(free).copied().collect();
            let sep = Separation { kind, attachment: attachment.clone(), side_a, side_b };
            let (g1, g2) = g.split_at(&sep).or_else(|e| internal(format!("split failed: {e}")))?;
            let mut out = self.recurse_colored(measure, &g1, path, u, lists, depth)?;
            let pins: Coloring = attachment.iter().map(|&a| (a, out.get(a).unwrap())).collect();
            out.merge(&self.thom(&g2, lists, &pins)?);
            return Ok(out);
        }

        if let Some(&c) = g.cutvertices().iter().next() {
            self.record(Case::Cutvertex, depth, g, path, vec![c]);
            if path.len() != 1 {
                return internal("essential cutvertex with a path of two or more vertices");
            }
            let comps = components_avoiding(g, &[c]);
            let side = |x: Vertex| -> Result<BTreeSet<Vertex>, SolveError> {
                let k = comps.iter().find(|k| k.contains(&x)).ok_or_else(|| SolveError::Internal("S vertex at the cutvertex".into()))?;
                Ok(k.iter().copied().chain([c]).collect())
            };
            let (kp, ku) = (side(path[0])?, side(u)?);
            if kp.len() + ku.len() != g.vertex_count() + 1 {
                return internal("essential cutvertex with more than two sides");
            }
            let g1 = induced(g, &kp)?;
            let g2 = induced(g, &ku)?;
            let phi1 = self.recurse_colored(measure, &g1, path, c, lists, depth)?;
            let mut l1 = lists.clone();
            l1.set(c, lists.get(c).without(phi1.get(c).unwrap()));
            let phi2 = self.recurse_colored(measure, &g1, path, c, &l1, depth)?;
            let mut l2 = lists.clone();
            l2.set(c, ColorSet::from([phi1.get(c).unwrap(), phi2.get(c).unwrap()]));
            let mut out = self.recurse_colored(measure, &g2, &[c], u, &l2, depth)?;
            let chosen = if phi1.get(c) == out.get(c) { phi1 } else { phi2 };
            out.merge(&chosen);
            return Ok(out);
        }

        // From here on g is 2-connected and every chord is essential.
        let mut cycle = g.outer_cycle().or_else(|e| internal(format!("no outer cycle: {e}")))?;
        let m = cycle.len();
        let i = cycle.iter().position(|&x| x == path[0]).unwrap();
        if path.len() > 1 && cycle[(i + 1) % m] != path[1] {
            cycle.reverse();
        }
        let i = cycle.iter().position(|&x| x == path[0]).unwrap();
        let k = path.len();
        if (0..k).any(|j| cycle[(i + j) % m] != path[j]) {
            return internal("the path does not run along the outer cycle");
        }
        let v1 = cycle[(i + m - 1) % m];
        let v2 = cycle[(i + k) % m];
        let chords = g.outer_walk_chords();
        if chords.iter().any(|(a, b)| path.contains(a) || path.contains(b)) {
            return internal("a chord with an end in the path survived");
        }
        let chord_partners = |x: Vertex| -> Vec<Vertex> {
            chords
                .iter()
                .filter_map(|&(a, b)| if a == x { Some(b) } else if b == x { Some(a) } else { None })
                .collect()
        };
        let nbrs_of_path = neighbors_of_set(g, path);

        if v1 == v2 {
            self.record(Case::V1EqualsV2, depth, g, path, vec![v1]);
            if v1 != u {
                return internal("the only boundary neighbour of the path is not the isolated vertex");
            }
            let lu = lists.get(u);
            let cu = lu.difference(l0).min().unwrap_or_else(|| lu.min().unwrap());
            let mut phi = color_path(path, l0, Some(cu), Some(cu))
                .ok_or_else(|| SolveError::Internal("cannot colour the S cycle".into()))?;
            phi.set(u, cu);
            let rest = without(g, path)?;
            let mut reduced = lists.trimmed(nbrs_of_path.iter().copied(), l0);
            reduced.set(u, ColorSet::singleton(cu));
            let out = self.thom(&rest, &reduced, &[(u, cu)].into_iter().collect())?;
            phi.merge(&out);
            return Ok(phi);
        }

        for (first_side, vi) in [(true, v1), (false, v2)] {
            if vi == u || !chord_partners(vi).is_empty() {
                continue;
            }
            let li = lists.get(vi);
            if li.difference(l0).len() >= 2 {
                self.record(Case::BadChordA, depth, g, path, vec![vi]);
                let rest = without(g, path)?;
                let victims = nbrs_of_path.iter().copied().filter(|&x| x != v1 && x != v2);
                let mut reduced = lists.trimmed(victims, l0);
                reduced.set(vi, li.difference(l0).smallest(2));
                let mut out = self.recurse_colored(measure, &rest, &[vi], u, &reduced, depth)?;
                let p = color_path(path, l0, out.get(v1), out.get(v2))
                    .ok_or_else(|| SolveError::Internal("cannot colour the path back".into()))?;
                out.merge(&p);
                return Ok(out);
            }
            self.record(Case::BadChordB, depth, g, path, vec![vi]);
            let longer: Vec<Vertex> = if first_side {
                [vi].iter().chain(path).copied().collect()
            } else {
                path.iter().copied().chain([vi]).collect()
            };
            let mut relisted = lists.clone();
            relisted.set(vi, l0);
            match self.recurse(measure, g, &longer, u, &relisted, depth)? {
                Sub::Colored(c) => return Ok(c),
                Sub::Exception(cert) => {
                    self.note(format!("extended path is exceptional; {vi} takes its extra colour"));
                    let cycle_set: BTreeSet<Vertex> = cert.odd_cycle.iter().copied().collect();
                    let expected: BTreeSet<Vertex> = longer.iter().copied().chain([u]).collect();
                    if cycle_set != expected || lists.get(u) != l0 {
                        return internal("unexpected exception certificate after extending the path");
                    }
                    let cv = li.difference(l0).min().unwrap();
                    // the odd cycle minus vi is a path from the far side of P through u
                    let rest_of_cycle: Vec<Vertex> = if first_side {
                        path.iter().copied().chain([u]).collect()
                    } else {
                        [u].iter().chain(path).copied().collect()
                    };
                    let mut phi = color_path(&rest_of_cycle, l0, None, None).unwrap();
                    phi.set(vi, cv);
                    let s_list: Vec<Vertex> = s_vertices.iter().copied().collect();
                    let rest = without(g, &s_list)?;
                    let victims = neighbors_of_set(g, &s_list).into_iter().filter(|&x| x != vi);
                    let mut reduced = lists.trimmed(victims, l0);
                    reduced.set(vi, ColorSet::singleton(cv));
                    phi.merge(&self.thom(&rest, &reduced, &[(vi, cv)].into_iter().collect())?);
                    return Ok(phi);
                }
            }
        }

        if v1 == u || v2 == u {
            return internal("a boundary neighbour of the path is the isolated vertex while the other lies on a chord");
        }
        if !chords.contains(&(v1.min(v2), v1.max(v2))) {
            return internal("both boundary neighbours lie on chords but are not adjacent");
        }

        if path.len() >= 2 {
            self.record(Case::PathShrink, depth, g, path, vec![v1, v2]);
            let comps = components_avoiding(g, &[v1, v2]);
            let kp = comps.iter().find(|c| c.contains(&path[0])).unwrap();
            if kp.contains(&u) {
                return internal("chord between the path's neighbours does not separate the path");
            }
            let g1 = induced(g, &kp.iter().copied().chain([v1, v2]).collect())?;
            let g2 = induced(g, &g.vertex_set().difference(kp).copied().collect())?;
            let outer = *g2.outer_face_ids().iter().next().unwrap();
            let face = &g2.faces()[outer];
            let j = face
                .iter()
                .position(|&d| d == (v1, v2) || d == (v2, v1))
                .ok_or_else(|| SolveError::Internal("chord is not on the outer face of its side".into()))?;
            let before = face[(j + face.len() - 1) % face.len()];
            let z = g.max_vertex().unwrap() + 1;
            let gz = g2
                .with_vertex_in_face(z, &[before, face[j]], Some(before))
                .or_else(|e| internal(format!("cannot add the stand-in vertex: {e}")))?;
            let mut lz = lists.clone();
            lz.set(z, l0);
            let mut out = self.recurse_colored(measure, &gz, &[z], u, &lz, depth)?;
            out.remove(z);
            let p = color_path(path, l0, out.get(v1), out.get(v2))
                .ok_or_else(|| SolveError::Internal("cannot colour the path between the chord ends".into()))?;
            out.merge(&p);
            let inner = without(&g1, path)?;
            let victims = nbrs_of_path.iter().copied().filter(|&x| x != v1 && x != v2);
            let reduced = lists.trimmed(victims, l0);
            let pins: Coloring = [(v1, out.get(v1).unwrap()), (v2, out.get(v2).unwrap())].into_iter().collect();
            out.merge(&self.thom(&inner, &reduced, &pins)?);
            return Ok(out);
        }

        let v = path[0];
        for (vi, vj) in [(v1, v2), (v2, v1)] {
            let li = lists.get(vi);
            let c = if li.len() >= 4 {
                l0.min()
            } else if !l0.is_subset(li) {
                l0.difference(li).min()
            } else {
                None
            };
            let Some(c) = c else { continue };
            self.record(Case::ListTrim, depth, g, path, vec![vi, vj]);
            let rest = without(g, &[v])?;
            let mut reduced = lists.trimmed(g.neighbors(v).iter().copied(), ColorSet::singleton(c));
            reduced.set(vj, lists.get(vj).without(c).smallest(2));
            let mut out = self.recurse_colored(measure, &rest, &[vj], u, &reduced, depth)?;
            out.set(v, c);
            return Ok(out);
        }

        if lists.get(v1) != lists.get(v2) {
            let pick = [(v1, v2), (v2, v1)].into_iter().find(|&(vi, vj)| {
                chord_partners(vi).into_iter().all(|w| w == vj || !g.edge_separates((vi, w), vj, u))
            });
            let Some((vi, vj)) = pick else {
                return internal("both boundary neighbours carry separating chords");
            };
            self.record(Case::ListsDiffer, depth, g, path, vec![vi]);
            let j = cycle.iter().position(|&x| x == vi).unwrap();
            let (a, b) = (cycle[(j + 1) % m], cycle[(j + m - 1) % m]);
            let v_prime = if a == v { b } else { a };
            let c = lists.get(vi).difference(l0).min().unwrap();
            let rest = without(g, &[v, vi])?;
            let mut reduced = lists.trimmed(g.neighbors(vi).iter().copied(), ColorSet::singleton(c));
            let mut out = if v_prime != u {
                reduced.set(v_prime, reduced.get(v_prime).smallest(2));
                self.recurse_colored(measure, &rest, &[v_prime], u, &reduced, depth)?
            } else {
                self.note("the isolated vertex is next along the cycle".into());
                let cu = reduced.get(u).min().unwrap();
                reduced.set(u, ColorSet::singleton(cu));
                self.thom(&rest, &reduced, &[(u, cu)].into_iter().collect())?
            };
            out.set(vi, c);
            out.set(v, l0.without(out.get(vj).unwrap()).min().unwrap());
            return Ok(out);
        }

        let others1: Vec<Vertex> = chord_partners(v1).into_iter().filter(|&w| w != v2).collect();
        let others2: Vec<Vertex> = chord_partners(v2).into_iter().filter(|&w| w != v1).collect();

        if others1.is_empty() && others2.is_empty() {
            self.record(Case::NoSecondChord, depth, g, path, vec![v1, v2]);
            let c = lists.get(v1).difference(l0).min().unwrap();
            let triangle = g.has_edge(v1, u) && g.has_edge(v2, u);
            let candidates: Vec<ColorSet> = l0.iter().map(|a| ColorSet::from([a, c])).collect();
            let l1 = if triangle && lists.get(u) == candidates[0] {
                self.note(format!("{:?} would make the triangle with the isolated vertex exceptional", candidates[0]));
                candidates[1]
            } else {
                candidates[0]
            };
            let rest = without(g, &[v])?;
            let mut reduced = lists.clone();
            reduced.set(v1, l1);
            reduced.set(v2, l1);
            let mut out = self.recurse_colored(measure, &rest, &[v1, v2], u, &reduced, depth)?;
            let cv = l0.difference(ColorSet::from([out.get(v1).unwrap(), out.get(v2).unwrap()])).min().unwrap();
            out.set(v, cv);
            return Ok(out);
        }

        // a further chord at one neighbour: call it b, the other a
        let (a, b, partners) = if !others2.is_empty() { (v1, v2, others2) } else { (v2, v1, others1) };
        let along: Vec<Vertex> = {
            let j = cycle.iter().position(|&x| x == b).unwrap();
            (1..m).map(|t| cycle[(j + t) % m]).collect()
        };
        let pos = |x: Vertex| along.iter().position(|&y| y == x).unwrap() as i64;
        let u1 = partners.into_iter().min_by_key(|&w| ((pos(w) - pos(a)).abs(), w)).unwrap();
        self.record(Case::SecondChord, depth, g, path, vec![b, u1]);
        let comps = components_avoiding(g, &[b, u1]);
        let k1 = comps.iter().find(|c| c.contains(&v)).unwrap();
        if k1.contains(&u) {
            return internal("the second chord does not separate the path from the isolated vertex");
        }
        let g1 = induced(g, &k1.iter().copied().chain([b, u1]).collect())?;
        let g2 = induced(g, &g.vertex_set().difference(k1).copied().collect())?;
        let c = if g.has_edge(a, u1) {
            lists.get(a).difference(l0).min().unwrap()
        } else {
            let g1_lists = lists.restricted_to(&g1.vertex_set());
            let bad = bad_path_colorings(&g1, &[v, b, u1], &g1_lists);
            if bad.len() > 1 {
                return internal(format!("{} colourings of the path through the chord fail to extend", bad.len()));
            }
            match bad.first() {
                Some(col) => {
                    self.note(format!("one bad colouring; {u1} avoids {}", col.get(u1).unwrap()));
                    col.get(u1).unwrap()
                }
                None => lists.get(u1).min().unwrap(),
            }
        };
        let mut reduced = lists.clone();
        reduced.set(u1, lists.get(u1).without(c).smallest(2));
        let mut out = self.recurse_colored(measure, &g2, &[u1], u, &reduced, depth)?;
        let pins: Coloring = [(b, out.get(b).unwrap()), (u1, out.get(u1).unwrap())].into_iter().collect();
        let g1_lists = lists.restricted_to(&g1.vertex_set());
        let ext = solve_exact(&g1, &g1_lists, &pins)
            .ok_or_else(|| SolveError::Internal("colouring does not extend across the second chord".into()))?;
        out.merge(&ext);
        Ok(out)
    }

    fn two_twos(
        &mut self,
        g: &EmbeddedGraph,
        v1: Vertex,
        v2: Vertex,
        lists: &ListAssignment,
        depth: usize,
    ) -> Result<Coloring, SolveError> {
        let mut trimmed = lists.restricted_to(&g.vertex_set());
        trimmed.set(v1, lists.get(v1).smallest(2));
        let s = SDesignation { path: vec![v1], isolated: vec![v2] };
        let canvas = validate_canvas(g, &s, &trimmed).map_err(|e| SolveError::Hypothesis(Violation::Canvas(e)))?;
        check_dem_two_parts(g, &[v1], &[v2], &trimmed).map_err(|e| SolveError::Hypothesis(Violation::DemTwo(e)))?;
        match self.solve(&canvas.graph, &[v1], v2, &trimmed, depth)? {
            Sub::Colored(c) => Ok(c),
            Sub::Exception(_) => internal("two isolated 2-listed vertices cannot be exceptional"),
        }
    }

    /// The edge-precolouring theorem via the two-lists solver. `pins` holds
    /// two adjacent outer vertices, or fewer when no edge is pinned yet.
    fn derive(
        &mut self,
        g: &EmbeddedGraph,
        lists: &ListAssignment,
        pins: &Coloring,
        depth: usize,
    ) -> Result<Coloring, SolveError> {
        let comps = g.components();
        if comps.len() > 1 {
            let mut out = Coloring::new();
            for comp in comps {
                let part = induced(g, &comp)?;
                out.merge(&self.derive(&part, lists, &pins.restricted_to(&comp), depth)?);
            }
            return Ok(out);
        }
        if g.vertex_count() == 0 {
            return Ok(Coloring::new());
        }
        if g.vertex_count() == 1 {
            let v = g.vertex_list()[0];
            return Ok([(v, pins.get(v).unwrap_or_else(|| lists.get(v).min().unwrap()))].into_iter().collect());
        }
        let mut pins = pins.clone();
        if pins.is_empty() {
            let v = *g.outer_vertices().iter().next().unwrap();
            pins.set(v, lists.get(v).min().unwrap());
        }
        if pins.len() == 1 {
            let (p, c) = pins.iter().next().unwrap();
            let w = *g.rotation(p).iter().find(|&&w| g.is_outer_dart((p, w))).unwrap();
            pins.set(w, lists.get(w).without(c).min().unwrap());
        }
        if pins.len() == g.vertex_count() {
            return Ok(pins);
        }
        let pinned: Vec<Vertex> = pins.iter().map(|(v, _)| v).collect();

        let attachment = if let Some(&c) = g.cutvertices().iter().next() {
            Some((SeparationKind::Cutvertex, vec![c]))
        } else {
            g.outer_walk_chords().iter().next().map(|&(x, y)| (SeparationKind::Chord, vec![x, y]))
        };
        if let Some((kind, attachment)) = attachment {
            let comps = components_avoiding(g, &attachment);
            let home = match pinned.iter().find(|p| !attachment.contains(p)) {
                Some(a) => comps.iter().find(|c| c.contains(a)).unwrap(),
                None => &comps[0],
            };
            let side_a: BTreeSet<Vertex> = home.iter().copied().chain(attachment.iter().copied()).collect();
            let side_b: BTreeSet<Vertex> = g.vertex_set().into_iter().filter(|v| !home.contains(v)).collect();
            let sep = Separation { kind, attachment: attachment.clone(), side_a, side_b };
            let (g1, g2) = g.split_at(&sep).or_else(|e| internal(format!("split failed: {e}")))?;
            let mut out = self.derive(&g1, lists, &pins, depth)?;
            let att: Coloring = attachment.iter().map(|&a| (a, out.get(a).unwrap())).collect();
            out.merge(&self.derive(&g2, lists, &att, depth)?);
            return Ok(out);
        }

        let cycle = g.outer_cycle().or_else(|e| internal(format!("no outer cycle: {e}")))?;
        let m = cycle.len();
        let (p1, p2) = (pinned[0], pinned[1]);
        let across = |p: Vertex, q: Vertex| {
            let i = cycle.iter().position(|&x| x == p).unwrap();
            let (a, b) = (cycle[(i + 1) % m], cycle[(i + m - 1) % m]);
            if a == q {
                b
            } else {
                a
            }
        };
        let (v1, v2) = (across(p1, p2), across(p2, p1));
        let (c1, c2) = (pins.get(p1).unwrap(), pins.get(p2).unwrap());
        if v1 == v2 {
            self.record(Case::ThomTriangle, depth, g, &pinned, vec![v1]);
            let c = lists.get(v1).difference(ColorSet::from([c1, c2])).min().unwrap();
            let rest = without(g, &[v1])?;
            let reduced = lists.trimmed(g.neighbors(v1).iter().copied().filter(|x| !pins.contains(*x)), ColorSet::singleton(c));
            let mut out = self.derive(&rest, &reduced, &pins, depth)?;
            out.set(v1, c);
            return Ok(out);
        }
        self.record(Case::ThomStrip, depth, g, &pinned, vec![v1, v2]);
        let rest = without(g, &pinned)?;
        let mut reduced = lists.restricted_to(&rest.vertex_set());
        for x in rest.vertex_list() {
            let mut l = reduced.get(x);
            if g.has_edge(x, p1) {
                l.remove(c1);
            }
            if g.has_edge(x, p2) {
                l.remove(c2);
            }
            reduced.set(x, l);
        }
        reduced.set(v1, reduced.get(v1).smallest(2));
        reduced.set(v2, reduced.get(v2).smallest(2));
        let mut out = self.two_twos(&rest, v1, v2, &reduced, depth + 1)?;
        out.merge(&pins);
        Ok(out)
    }
}

/// Solves a validated instance.
pub fn solve_dem_two(instance: &DemTwoInstance) -> Result<Solution, SolveError> {
    let canvas = &instance.canvas;
    let mut solver = Solver::new();
    let outcome = match solver.solve(&canvas.graph, &canvas.s.path, instance.u, &canvas.lists, 0)? {
        Sub::Colored(c) => SolveOutcome::Colored(c),
        Sub::Exception(cert) => SolveOutcome::Exception(cert),
    };
    Ok(Solution { outcome, trace: solver.trace })
}

/// Validates `canvas` as an instance first; invalid input gives a
/// [`SolveOutcome::Violation`].
pub fn solve_canvas(canvas: &Canvas) -> Result<Solution, SolveError> {
    match crate::canvas::validate_dem_two(canvas) {
        Ok(instance) => solve_dem_two(&instance),
        Err(v) => Ok(Solution { outcome: SolveOutcome::Violation(Violation::DemTwo(v)), trace: vec![] }),
    }
}

/// Colours `g` when the boundary vertices `v1` and `v2` have lists of size
/// at least two, the other boundary vertices three and interior vertices
/// five. The graph need not be 2-connected.
pub fn solve_two_twos(g: &EmbeddedGraph, v1: Vertex, v2: Vertex, lists: &ListAssignment) -> Result<Solution, SolveError> {
    if v1 == v2 {
        return Err(SolveError::Hypothesis(Violation::Other("the two 2-listed vertices coincide".into())));
    }
    for x in [v1, v2] {
        if !g.contains(x) {
            return Err(SolveError::Hypothesis(Violation::Canvas(CanvasViolation::UnknownVertex(x))));
        }
        if lists.get(x).len() < 2 {
            return Err(SolveError::Hypothesis(Violation::Other(format!("vertex {x} has fewer than two colours"))));
        }
    }
    let mut solver = Solver::new();
    let coloring = solver.two_twos(g, v1, v2, lists, 0)?;
    if !verify(g, lists, &coloring) {
        return internal("two-lists solver produced an invalid colouring");
    }
    Ok(Solution { outcome: SolveOutcome::Colored(coloring), trace: solver.trace })
}

/// Colours `g` given the boundary edge `p1 p2` with distinct singleton lists,
/// by stripping the edge and calling the two-lists solver.
pub fn derive_thom_via_two_twos(
    g: &EmbeddedGraph,
    p1: Vertex,
    p2: Vertex,
    lists: &ListAssignment,
) -> Result<Solution, SolveError> {
    let fail = |m: String| Err(SolveError::Hypothesis(Violation::Other(m)));
    for p in [p1, p2] {
        if !g.contains(p) || lists.get(p).len() != 1 {
            return fail(format!("vertex {p} must be in the graph with exactly one colour"));
        }
    }
    if !g.is_outer_dart((p1, p2)) && !g.is_outer_dart((p2, p1)) {
        return fail(format!("{p1} {p2} is not a boundary edge"));
    }
    let pins: Coloring = [(p1, lists.get(p1).min().unwrap()), (p2, lists.get(p2).min().unwrap())].into_iter().collect();
    if let Err(e) = check_boundary_pins(g, lists, &pins) {
        return fail(e.to_string());
    }
    let mut solver = Solver::new();
    let coloring = solver.derive(g, lists, &pins, 0)?;
    if !verify(g, lists, &coloring) {
        return internal("edge reduction produced an invalid colouring");
    }
    Ok(Solution { outcome: SolveOutcome::Colored(coloring), trace: solver.trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canvas::tests::{cycle_graph, lists};
    use crate::canvas::validate_dem_two;
    use crate::embed::tests::{outer_of_len, rot};
    use crate::oracle::solve_exact;

    fn instance(g: &EmbeddedGraph, path: &[Vertex], u: Vertex, l: &ListAssignment) -> DemTwoInstance {
        let s = SDesignation { path: path.to_vec(), isolated: vec![u] };
        validate_dem_two(&validate_canvas(g, &s, l).unwrap()).unwrap()
    }

    fn check_against_oracle(inst: &DemTwoInstance) -> Solution {
        let sol = solve_dem_two(inst).unwrap();
        let exact = solve_exact(&inst.canvas.graph, &inst.canvas.lists, &Coloring::new());
        match &sol.outcome {
            SolveOutcome::Colored(c) => {
                assert!(verify(&inst.canvas.graph, &inst.canvas.lists, c));
                assert!(exact.is_some());
            }
            SolveOutcome::Exception(_) => assert!(exact.is_none()),
            SolveOutcome::Violation(v) => panic!("unexpected violation {v}"),
        }
        sol
    }

    #[test]
    fn triangle_of_equal_pairs_is_the_exception() {
        let g = cycle_graph(3);
        let l = lists(&[(0, &[1, 2]), (1, &[1, 2]), (2, &[1, 2])]);
        let sol = check_against_oracle(&instance(&g, &[0, 1], 2, &l));
        assert!(matches!(sol.outcome, SolveOutcome::Exception(_)));
    }

    #[test]
    fn five_cycle_single_path_vertex() {
        let g = cycle_graph(5);
        let l = lists(&[(0, &[1, 2]), (1, &[1, 2, 3]), (2, &[1, 2]), (3, &[1, 2, 3]), (4, &[1, 2, 3])]);
        let sol = check_against_oracle(&instance(&g, &[0], 2, &l));
        assert!(!sol.trace.is_empty());
    }

    #[test]
    fn hexagon_with_chord_uses_the_second_chord() {
        // hexagon 0..5 with chords 5-1 and 5-3; path 0, u = 4
        let r = rot(&[
            (0, &[5, 1]),
            (1, &[0, 5, 2]),
            (2, &[1, 3]),
            (3, &[2, 5, 4]),
            (4, &[3, 5]),
            (5, &[4, 3, 1, 0]),
        ]);
        let g = outer_of_len(r, 6);
        let l = lists(&[(0, &[1, 2]), (1, &[1, 2, 3]), (2, &[1, 2, 3]), (3, &[1, 2, 3]), (4, &[1, 2]), (5, &[1, 2, 3])]);
        let sol = check_against_oracle(&instance(&g, &[0], 4, &l));
        assert!(sol.trace.iter().any(|s| s.case == Case::SecondChord), "{:?}", sol.trace);
    }

    #[test]
    fn cutvertex_case_has_single_vertex_path() {
        let r = rot(&[(0, &[1, 2]), (1, &[2, 0]), (2, &[0, 1, 3, 4]), (3, &[4, 2]), (4, &[2, 3])]);
        let g = outer_of_len(r, 6);
        let l = lists(&[(0, &[1, 2]), (1, &[1, 2, 3]), (2, &[1, 2, 3]), (3, &[1, 2]), (4, &[1, 2, 3])]);
        let sol = check_against_oracle(&instance(&g, &[0], 3, &l));
        let cut = sol.trace.iter().find(|s| s.case == Case::Cutvertex).unwrap();
        assert_eq!(cut.path_len, 1);
    }

    #[test]
    fn two_twos_examples() {
        let g = cycle_graph(3);
        let l = lists(&[(0, &[1, 2]), (1, &[1, 2]), (2, &[1, 2, 3])]);
        let sol = solve_two_twos(&g, 0, 1, &l).unwrap();
        assert!(verify(&g, &l, sol.coloring().unwrap()));

        let g = cycle_graph(6);
        let l: ListAssignment = (0..6)
            .map(|v| (v, if v == 0 || v == 3 { ColorSet::from([1, 2]) } else { ColorSet::from([1, 2, 3]) }))
            .collect();
        let sol = solve_two_twos(&g, 0, 3, &l).unwrap();
        assert!(verify(&g, &l, sol.coloring().unwrap()));
    }

    #[test]
    fn derived_edge_colouring_on_small_graphs() {
        let g = cycle_graph(3);
        let l = lists(&[(0, &[1]), (1, &[2]), (2, &[1, 2, 3])]);
        let sol = derive_thom_via_two_twos(&g, 0, 1, &l).unwrap();
        assert_eq!(sol.coloring().unwrap().get(2), Some(3));

        let g = cycle_graph(6);
        let mut l: ListAssignment = (0..6).map(|v| (v, ColorSet::from([1, 2, 3]))).collect();
        l.set(0, ColorSet::from([1]));
        l.set(1, ColorSet::from([2]));
        let sol = derive_thom_via_two_twos(&g, 0, 1, &l).unwrap();
        assert!(verify(&g, &l, sol.coloring().unwrap()));
    }

    #[test]
    fn color_path_avoids_both_ends() {
        let p = color_path(&[0, 1, 2], ColorSet::from([1, 2]), Some(1), Some(1)).unwrap();
        assert_eq!(p.get(0), Some(2));
        assert!(color_path(&[0, 1], ColorSet::from([1, 2]), Some(1), Some(1)).is_none());
    }
}
