//! Exhaustive list colouring: the ground truth every constructive solver is
//! checked against.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canvas::{validate_canvas, Canvas, Color, ColorSet, ListAssignment};
use crate::embed::{GraphView, SimpleGraph, Vertex};

/// A colour per vertex.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coloring(BTreeMap<Vertex, Color>);

impl Coloring {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: Vertex) -> Option<Color> {
        self.0.get(&v).copied()
    }

    pub fn set(&mut self, v: Vertex, c: Color) {
        self.0.insert(v, c);
    }

    pub fn remove(&mut self, v: Vertex) -> Option<Color> {
        self.0.remove(&v)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains_key(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, Color)> + '_ {
        self.0.iter().map(|(&v, &c)| (v, c))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Adds every entry of `other`, overwriting on conflict.
    pub fn merge(&mut self, other: &Coloring) {
        self.0.extend(other.iter());
    }

    pub fn restricted_to(&self, keep: &BTreeSet<Vertex>) -> Coloring {
        self.iter().filter(|(v, _)| keep.contains(v)).collect()
    }

    /// Singleton lists, for pinning.
    pub fn as_lists(&self) -> ListAssignment {
        self.iter().map(|(v, c)| (v, ColorSet::singleton(c))).collect()
    }
}

impl FromIterator<(Vertex, Color)> for Coloring {
    fn from_iter<I: IntoIterator<Item = (Vertex, Color)>>(iter: I) -> Self {
        Coloring(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("the canvas is L-colourable, so it has no critical subcanvas")]
    InputColorable,
    #[error("oracle time budget exceeded")]
    BudgetExceeded,
}

/// Whether `coloring` is a proper colouring of `g` from `lists`. Entries for
/// vertices outside `g` are ignored.
pub fn verify(g: &impl GraphView, lists: &ListAssignment, coloring: &Coloring) -> bool {
    for v in g.vertex_list() {
        match coloring.get(v) {
            Some(c) if lists.get(v).contains(c) => {}
            _ => return false,
        }
    }
    g.edge_list().into_iter().all(|(a, b)| coloring.get(a) != coloring.get(b))
}

struct Search {
    order: Vec<Vertex>,
    adj: Vec<Vec<usize>>,
    deadline: Option<Instant>,
    nodes: u64,
}

impl Search {
    fn new(g: &impl GraphView, pinned: &Coloring, deadline: Option<Instant>) -> Self {
        let mut order = g.vertex_list();
        order.sort_by_key(|&v| (!pinned.contains(v), std::cmp::Reverse(g.degree(v)), v));
        let index: BTreeMap<Vertex, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj = order.iter().map(|&v| g.neighbors(v).iter().map(|w| index[w]).collect()).collect();
        Search { order, adj, deadline, nodes: 0 }
    }

    fn initial_domains(&self, lists: &ListAssignment, pinned: &Coloring) -> Vec<u64> {
        self.order
            .iter()
            .map(|&v| {
                let l = lists.get(v);
                match pinned.get(v) {
                    Some(c) if l.contains(c) => ColorSet::singleton(c).bits(),
                    Some(_) => 0,
                    None => l.bits(),
                }
            })
            .collect()
    }

    /// Depth-first search with forward checking. `visit` returns `true` to
    /// stop the search.
    fn run(
        &mut self,
        i: usize,
        domains: &mut Vec<u64>,
        chosen: &mut Vec<Color>,
        visit: &mut dyn FnMut(&[Color]) -> bool,
    ) -> Result<bool, OracleError> {
        self.nodes += 1;
        if self.nodes % 1024 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    return Err(OracleError::BudgetExceeded);
                }
            }
        }
        if i == self.order.len() {
            return Ok(visit(chosen));
        }
        let mut options = domains[i];
        while options != 0 {
            let c = options.trailing_zeros();
            options &= options - 1;
            let bit = 1u64 << c;
            let mut touched = Vec::new();
            let mut dead = false;
            for &j in &self.adj[i] {
                if j > i && domains[j] & bit != 0 {
                    domains[j] &= !bit;
                    touched.push(j);
                    if domains[j] == 0 {
                        dead = true;
                    }
                }
            }
            if !dead {
                chosen.push(c);
                let stop = self.run(i + 1, domains, chosen, visit)?;
                chosen.pop();
                if stop {
                    for &j in &touched {
                        domains[j] |= bit;
                    }
                    return Ok(true);
                }
            }
            for &j in &touched {
                domains[j] |= bit;
            }
        }
        Ok(false)
    }

    fn to_coloring(&self, chosen: &[Color]) -> Coloring {
        self.order.iter().copied().zip(chosen.iter().copied()).collect()
    }
}

/// Some L-colouring of `g` agreeing with `pinned`, if one exists.
pub fn solve_exact(g: &impl GraphView, lists: &ListAssignment, pinned: &Coloring) -> Option<Coloring> {
    solve_exact_within(g, lists, pinned, None).expect("no deadline was given")
}

/// As [`solve_exact`], giving up once `deadline` has passed.
pub fn solve_exact_within(
    g: &impl GraphView,
    lists: &ListAssignment,
    pinned: &Coloring,
    deadline: Option<Instant>,
) -> Result<Option<Coloring>, OracleError> {
    let mut search = Search::new(g, pinned, deadline);
    let mut domains = search.initial_domains(lists, pinned);
    if domains.iter().any(|&d| d == 0) {
        return Ok(None);
    }
    let mut found = None;
    search.run(0, &mut domains, &mut Vec::new(), &mut |chosen| {
        found = Some(chosen.to_vec());
        true
    })?;
    Ok(found.map(|chosen| search.to_coloring(&chosen)))
}

/// Number of L-colourings of `g` agreeing with `pinned`, stopping at `cap`.
pub fn count_colorings(g: &impl GraphView, lists: &ListAssignment, pinned: &Coloring, cap: u64) -> u64 {
    let mut search = Search::new(g, pinned, None);
    let mut domains = search.initial_domains(lists, pinned);
    if domains.iter().any(|&d| d == 0) {
        return 0;
    }
    let mut count = 0;
    search
        .run(0, &mut domains, &mut Vec::new(), &mut |_| {
            count += 1;
            count >= cap
        })
        .expect("no deadline was given");
    count
}

/// Whether the colouring `partial` of part of `g` extends to all of `g`.
pub fn extends_from(g: &impl GraphView, lists: &ListAssignment, partial: &Coloring) -> bool {
    solve_exact(g, lists, partial).is_some()
}

/// Uncolourable, while deleting any edge outside the S path makes it
/// colourable.
pub fn is_critical(canvas: &Canvas) -> bool {
    let g = SimpleGraph::from_view(&canvas.graph);
    is_critical_graph(&g, &canvas.s.edges(), &canvas.lists)
}

fn is_critical_graph(g: &SimpleGraph, protected: &BTreeSet<(Vertex, Vertex)>, lists: &ListAssignment) -> bool {
    let none = Coloring::new();
    if solve_exact(g, lists, &none).is_some() {
        return false;
    }
    g.edge_list().into_iter().filter(|e| !protected.contains(e)).all(|(a, b)| {
        let mut h = g.clone();
        h.remove_edge(a, b);
        solve_exact(&h, lists, &none).is_some()
    })
}

/// A critical subcanvas on the same S, found by greedily deleting edges in
/// ascending order (rescanning after every deletion) and then isolated
/// vertices outside S.
pub fn extract_critical(canvas: &Canvas) -> Result<Canvas, OracleError> {
    let none = Coloring::new();
    let mut g = SimpleGraph::from_view(&canvas.graph);
    if solve_exact(&g, &canvas.lists, &none).is_some() {
        return Err(OracleError::InputColorable);
    }
    let protected = canvas.s.edges();
    let mut dropped = BTreeSet::new();
    'scan: loop {
        for (a, b) in g.edge_list() {
            if protected.contains(&(a, b)) {
                continue;
            }
            g.remove_edge(a, b);
            if solve_exact(&g, &canvas.lists, &none).is_none() {
                dropped.insert((a, b));
                continue 'scan;
            }
            g.add_edge(a, b);
        }
        break;
    }
    let s_vertices = canvas.s.vertices();
    let keep: BTreeSet<Vertex> = g
        .vertex_list()
        .into_iter()
        .filter(|&v| g.degree(v) > 0 || s_vertices.contains(&v))
        .collect();
    let graph = canvas
        .graph
        .restrict(&keep, &dropped)
        .expect("deleting edges and isolated vertices keeps a plane embedding");
    let out = validate_canvas(&graph, &canvas.s, &canvas.lists)
        .expect("a subgraph of a canvas on the same S is a canvas");
    debug_assert!(is_critical(&out));
    Ok(out)
}

/// Colourings of the path `p` (proper along its edges, from the lists) that
/// do not extend to `g`.
pub fn bad_path_colorings(g: &impl GraphView, path: &[Vertex], lists: &ListAssignment) -> Vec<Coloring> {
    let mut out = Vec::new();
    let mut current = Coloring::new();
    fn walk(
        g: &dyn Fn(&Coloring) -> bool,
        path: &[Vertex],
        i: usize,
        lists: &ListAssignment,
        current: &mut Coloring,
        out: &mut Vec<Coloring>,
    ) {
        if i == path.len() {
            if !g(current) {
                out.push(current.clone());
            }
            return;
        }
        let mut options = lists.get(path[i]);
        if i > 0 {
            options.remove(current.get(path[i - 1]).unwrap());
        }
        for c in options.iter() {
            current.set(path[i], c);
            walk(g, path, i + 1, lists, current, out);
            current.remove(path[i]);
        }
    }
    let extends = |c: &Coloring| extends_from(g, lists, c);
    walk(&extends, path, 0, lists, &mut current, &mut out);
    out
}

/// Whether some path from `p1` to `p3` uses only outer-face vertices that
/// are all adjacent to `p2`.
pub fn has_fan_path(g: &crate::embed::EmbeddedGraph, p1: Vertex, p2: Vertex, p3: Vertex) -> bool {
    let outer = g.outer_vertices();
    let allowed = |v: Vertex| outer.contains(&v) && g.has_edge(v, p2);
    if !allowed(p1) || !allowed(p3) {
        return false;
    }
    let mut seen = BTreeSet::from([p1]);
    let mut queue = VecDeque::from([p1]);
    while let Some(v) = queue.pop_front() {
        if v == p3 {
            return true;
        }
        for &w in g.neighbors(v) {
            if w != p2 && allowed(w) && seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    false
}
