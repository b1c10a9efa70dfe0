//! Plane graphs given by rotation systems.
//!
//! An [`EmbeddedGraph`] stores, for every vertex, the clockwise cyclic order
//! of its neighbours. Faces are the orbits of the dart map
//! `(u, v) -> (v, w)` where `w` follows `u` in the rotation at `v`. One face
//! orbit per connected component is designated as the outer face; all the
//! designated orbits bound the same (unbounded) region of the plane, so no
//! component sits inside a bounded face of another one. Isolated vertices are
//! taken to lie in the outer face.
//!
//! Everything structural that the colouring algorithms need (outer walks,
//! chords, cutvertices, separations, interiors of short cycles) is derived
//! from that data alone, without coordinates.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

pub type Vertex = u32;

/// A directed edge `(tail, head)`.
pub type Dart = (Vertex, Vertex);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("vertex {0} appears in the rotation table but is not declared")]
    UnknownVertex(Vertex),
    #[error("rotation is not symmetric: {0} lists {1} but {1} does not list {0}")]
    NonSymmetricRotation(Vertex, Vertex),
    #[error("vertex {0} lists itself as a neighbour")]
    Loop(Vertex),
    #[error("vertex {0} lists neighbour {1} more than once")]
    RepeatedNeighbor(Vertex, Vertex),
    #[error("component of vertex {vertex} has V - E + F = {characteristic}, not 2")]
    EulerViolation { vertex: Vertex, characteristic: i64 },
    #[error("outer face witness {0:?} is not usable")]
    BadOuterWitness(Dart),
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph has no edges")]
    NoEdges,
    #[error("graph is not 2-connected")]
    NotTwoConnected,
    #[error("invalid separation: {0}")]
    InvalidSeparation(String),
    #[error("component of vertex {0} would lie inside a bounded face")]
    NestedComponent(Vertex),
}

/// Read access shared by embedded and plain graphs.
pub trait GraphView {
    fn vertex_list(&self) -> Vec<Vertex>;
    fn neighbors(&self, v: Vertex) -> &[Vertex];

    fn degree(&self, v: Vertex) -> usize {
        self.neighbors(v).len()
    }

    fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.neighbors(u).contains(&v)
    }

    /// Undirected edges as `(min, max)` pairs in ascending order.
    fn edge_list(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for u in self.vertex_list() {
            for &w in self.neighbors(u) {
                if u < w {
                    out.push((u, w));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// An open or closed sequence of vertices, consecutive ones adjacent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub vertices: Vec<Vertex>,
    pub closed: bool,
}

impl Walk {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// True when no vertex repeats.
    pub fn is_simple(&self) -> bool {
        let set: BTreeSet<_> = self.vertices.iter().collect();
        set.len() == self.vertices.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparationKind {
    Cutvertex,
    Chord,
}

/// `G = G_A ∪ G_B` glued along one vertex or along the two ends of an edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub kind: SeparationKind,
    pub attachment: Vec<Vertex>,
    pub side_a: BTreeSet<Vertex>,
    pub side_b: BTreeSet<Vertex>,
}

/// Plain adjacency structure without an embedding.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: BTreeMap<Vertex, Vec<Vertex>>,
}

impl SimpleGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_view(g: &impl GraphView) -> Self {
        let mut adj = BTreeMap::new();
        for v in g.vertex_list() {
            let mut ns = g.neighbors(v).to_vec();
            ns.sort_unstable();
            adj.insert(v, ns);
        }
        SimpleGraph { adj }
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        self.adj.entry(v).or_default();
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        assert_ne!(u, v, "loops are not allowed");
        for (a, b) in [(u, v), (v, u)] {
            let ns = self.adj.entry(a).or_default();
            if let Err(pos) = ns.binary_search(&b) {
                ns.insert(pos, b);
            }
        }
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        let mut removed = false;
        for (a, b) in [(u, v), (v, u)] {
            if let Some(ns) = self.adj.get_mut(&a) {
                if let Ok(pos) = ns.binary_search(&b) {
                    ns.remove(pos);
                    removed = true;
                }
            }
        }
        removed
    }

    pub fn remove_vertex(&mut self, v: Vertex) {
        if let Some(ns) = self.adj.remove(&v) {
            for w in ns {
                if let Some(list) = self.adj.get_mut(&w) {
                    list.retain(|&x| x != v);
                }
            }
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Subgraph induced on `keep`.
    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> SimpleGraph {
        let adj = self
            .adj
            .iter()
            .filter(|(v, _)| keep.contains(v))
            .map(|(&v, ns)| (v, ns.iter().copied().filter(|w| keep.contains(w)).collect()))
            .collect();
        SimpleGraph { adj }
    }
}

impl GraphView for SimpleGraph {
    fn vertex_list(&self) -> Vec<Vertex> {
        self.adj.keys().copied().collect()
    }

    fn neighbors(&self, v: Vertex) -> &[Vertex] {
        self.adj.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Connected components of `g - removed`, each sorted, ordered by smallest vertex.
pub fn components_avoiding(g: &impl GraphView, removed: &[Vertex]) -> Vec<BTreeSet<Vertex>> {
    let mut seen: BTreeSet<Vertex> = removed.iter().copied().collect();
    let mut out = Vec::new();
    for start in g.vertex_list() {
        if seen.contains(&start) {
            continue;
        }
        seen.insert(start);
        let mut comp = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x) {
                if seen.insert(y) {
                    comp.insert(y);
                    queue.push_back(y);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Cutvertices of every component of `g`.
pub fn cutvertices_of(g: &impl GraphView) -> BTreeSet<Vertex> {
    struct Dfs<'a, G: GraphView> {
        g: &'a G,
        order: HashMap<Vertex, usize>,
        low: HashMap<Vertex, usize>,
        cuts: BTreeSet<Vertex>,
        counter: usize,
    }
    impl<G: GraphView> Dfs<'_, G> {
        fn visit(&mut self, v: Vertex, parent: Option<Vertex>) {
            self.counter += 1;
            self.order.insert(v, self.counter);
            self.low.insert(v, self.counter);
            let mut children = 0;
            for &w in self.g.neighbors(v) {
                if Some(w) == parent {
                    continue;
                }
                if let Some(&ow) = self.order.get(&w) {
                    let lv = self.low[&v].min(ow);
                    self.low.insert(v, lv);
                } else {
                    children += 1;
                    self.visit(w, Some(v));
                    let lv = self.low[&v].min(self.low[&w]);
                    self.low.insert(v, lv);
                    if parent.is_some() && self.low[&w] >= self.order[&v] {
                        self.cuts.insert(v);
                    }
                }
            }
            if parent.is_none() && children > 1 {
                self.cuts.insert(v);
            }
        }
    }
    let mut dfs = Dfs {
        g,
        order: HashMap::new(),
        low: HashMap::new(),
        cuts: BTreeSet::new(),
        counter: 0,
    };
    for v in g.vertex_list() {
        if !dfs.order.contains_key(&v) {
            dfs.visit(v, None);
        }
    }
    dfs.cuts
}

fn is_connected_view(g: &impl GraphView) -> bool {
    components_avoiding(g, &[]).len() <= 1
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = x;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Plane graph as a rotation system with designated outer face orbits.
#[derive(Debug, Clone)]
pub struct EmbeddedGraph {
    rotation: BTreeMap<Vertex, Vec<Vertex>>,
    faces: Vec<Vec<Dart>>,
    dart_face: HashMap<Dart, usize>,
    /// One witness dart per component that has edges, ascending.
    outer_witnesses: Vec<Dart>,
    outer_faces: BTreeSet<usize>,
}

impl PartialEq for EmbeddedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.rotation == other.rotation && self.outer_faces_as_sets() == other.outer_faces_as_sets()
    }
}

impl Eq for EmbeddedGraph {}

impl GraphView for EmbeddedGraph {
    fn vertex_list(&self) -> Vec<Vertex> {
        self.rotation.keys().copied().collect()
    }

    fn neighbors(&self, v: Vertex) -> &[Vertex] {
        self.rotation.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }
}

impl EmbeddedGraph {
    /// Builds a connected (or edgeless) plane graph from a vertex list, a
    /// clockwise rotation table and a witness dart on the outer face.
    pub fn build(
        vertices: &[Vertex],
        rotation: &BTreeMap<Vertex, Vec<Vertex>>,
        outer: Option<Dart>,
    ) -> Result<Self, EmbedError> {
        let mut table: BTreeMap<Vertex, Vec<Vertex>> =
            vertices.iter().map(|&v| (v, Vec::new())).collect();
        for (&v, ns) in rotation {
            if !table.contains_key(&v) {
                return Err(EmbedError::UnknownVertex(v));
            }
            table.insert(v, ns.clone());
        }
        Self::from_rotation(table, outer.into_iter().collect())
    }

    /// Builds a plane graph with one outer witness per component with edges.
    pub fn from_rotation(
        rotation: BTreeMap<Vertex, Vec<Vertex>>,
        outer: Vec<Dart>,
    ) -> Result<Self, EmbedError> {
        for (&v, ns) in &rotation {
            let mut seen = BTreeSet::new();
            for &w in ns {
                if w == v {
                    return Err(EmbedError::Loop(v));
                }
                if !seen.insert(w) {
                    return Err(EmbedError::RepeatedNeighbor(v, w));
                }
                match rotation.get(&w) {
                    None => return Err(EmbedError::UnknownVertex(w)),
                    Some(back) if !back.contains(&v) => {
                        return Err(EmbedError::NonSymmetricRotation(v, w))
                    }
                    _ => {}
                }
            }
        }

        let mut g = EmbeddedGraph {
            rotation,
            faces: Vec::new(),
            dart_face: HashMap::new(),
            outer_witnesses: Vec::new(),
            outer_faces: BTreeSet::new(),
        };
        g.trace_faces();

        let comps = components_avoiding(&g, &[]);
        let comp_of: HashMap<Vertex, usize> = comps
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |&v| (v, i)))
            .collect();

        // Euler's formula, component by component.
        let mut face_count = vec![0i64; comps.len()];
        for face in &g.faces {
            face_count[comp_of[&face[0].0]] += 1;
        }
        for (i, comp) in comps.iter().enumerate() {
            let v = comp.len() as i64;
            let e = comp.iter().map(|&x| g.degree(x)).sum::<usize>() as i64 / 2;
            if e == 0 {
                continue;
            }
            let chi = v - e + face_count[i];
            if chi != 2 {
                return Err(EmbedError::EulerViolation {
                    vertex: *comp.iter().next().unwrap(),
                    characteristic: chi,
                });
            }
        }

        let mut covered = BTreeSet::new();
        for &d in &outer {
            let Some(&f) = g.dart_face.get(&d) else {
                return Err(EmbedError::BadOuterWitness(d));
            };
            if !covered.insert(comp_of[&d.0]) {
                return Err(EmbedError::BadOuterWitness(d));
            }
            g.outer_faces.insert(f);
        }
        for (i, comp) in comps.iter().enumerate() {
            let has_edges = comp.iter().any(|&x| g.degree(x) > 0);
            if has_edges && !covered.contains(&i) {
                let v = *comp.iter().next().unwrap();
                return Err(EmbedError::BadOuterWitness((v, v)));
            }
        }
        let mut witnesses: Vec<Dart> = g.outer_faces.iter().map(|&f| g.faces[f][0]).collect();
        witnesses.sort_unstable();
        g.outer_witnesses = witnesses;
        Ok(g)
    }

    fn trace_faces(&mut self) {
        let mut darts: Vec<Dart> = Vec::new();
        for (&u, ns) in &self.rotation {
            for &w in ns {
                darts.push((u, w));
            }
        }
        darts.sort_unstable();
        for d in darts {
            if self.dart_face.contains_key(&d) {
                continue;
            }
            let id = self.faces.len();
            let mut face = Vec::new();
            let mut cur = d;
            loop {
                self.dart_face.insert(cur, id);
                face.push(cur);
                cur = self.next_dart(cur);
                if cur == d {
                    break;
                }
            }
            self.faces.push(face);
        }
    }

    /// Successor of a dart along its face.
    pub fn next_dart(&self, (u, v): Dart) -> Dart {
        let rot = &self.rotation[&v];
        let i = rot.iter().position(|&x| x == u).expect("dart not in graph");
        (v, rot[(i + 1) % rot.len()])
    }

    pub fn rotation(&self, v: Vertex) -> &[Vertex] {
        self.neighbors(v)
    }

    pub fn rotation_table(&self) -> &BTreeMap<Vertex, Vec<Vertex>> {
        &self.rotation
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.rotation.contains_key(&v)
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rotation.values().map(Vec::len).sum::<usize>() / 2
    }

    pub fn vertex_set(&self) -> BTreeSet<Vertex> {
        self.rotation.keys().copied().collect()
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.rotation.keys().next_back().copied()
    }

    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn face_of(&self, d: Dart) -> Option<usize> {
        self.dart_face.get(&d).copied()
    }

    pub fn outer_witnesses(&self) -> &[Dart] {
        &self.outer_witnesses
    }

    pub fn outer_face_ids(&self) -> &BTreeSet<usize> {
        &self.outer_faces
    }

    pub fn is_outer_dart(&self, d: Dart) -> bool {
        self.face_of(d).is_some_and(|f| self.outer_faces.contains(&f))
    }

    fn outer_faces_as_sets(&self) -> BTreeSet<BTreeSet<Dart>> {
        self.outer_faces
            .iter()
            .map(|&f| self.faces[f].iter().copied().collect())
            .collect()
    }

    /// Vertices incident with the outer face (isolated vertices included).
    pub fn outer_vertices(&self) -> BTreeSet<Vertex> {
        let mut out: BTreeSet<Vertex> = self
            .outer_faces
            .iter()
            .flat_map(|&f| self.faces[f].iter().map(|d| d.0))
            .collect();
        out.extend(self.rotation.iter().filter(|(_, ns)| ns.is_empty()).map(|(&v, _)| v));
        out
    }

    pub fn is_outer_vertex(&self, v: Vertex) -> bool {
        self.rotation.get(&v).is_some_and(|ns| {
            ns.is_empty() || ns.iter().any(|&w| self.is_outer_dart((v, w)) || self.is_outer_dart((w, v)))
        })
    }

    pub fn components(&self) -> Vec<BTreeSet<Vertex>> {
        components_avoiding(self, &[])
    }

    pub fn is_connected(&self) -> bool {
        is_connected_view(self)
    }

    pub fn cutvertices(&self) -> BTreeSet<Vertex> {
        cutvertices_of(self)
    }

    /// No cutvertex, connected, at least three vertices.
    pub fn is_two_connected(&self) -> bool {
        self.vertex_count() >= 3 && self.is_connected() && self.cutvertices().is_empty()
    }

    /// Boundary walk of the outer face, in traversal order.
    pub fn outer_walk(&self) -> Result<Walk, EmbedError> {
        if !self.is_connected() {
            return Err(EmbedError::NotConnected);
        }
        let &f = self.outer_faces.iter().next().ok_or(EmbedError::NoEdges)?;
        Ok(Walk {
            vertices: self.faces[f].iter().map(|d| d.0).collect(),
            closed: true,
        })
    }

    /// The outer cycle of a 2-connected graph.
    pub fn outer_cycle(&self) -> Result<Vec<Vertex>, EmbedError> {
        if !self.is_two_connected() {
            return Err(EmbedError::NotTwoConnected);
        }
        Ok(self.outer_walk()?.vertices)
    }

    /// Chords of the outer cycle of a 2-connected graph.
    pub fn outer_chords(&self) -> Result<BTreeSet<(Vertex, Vertex)>, EmbedError> {
        if !self.is_two_connected() {
            return Err(EmbedError::NotTwoConnected);
        }
        Ok(self.outer_walk_chords())
    }

    /// Edges joining two outer-face vertices that are not traversed by the
    /// outer walk. Defined for any graph.
    pub fn outer_walk_chords(&self) -> BTreeSet<(Vertex, Vertex)> {
        let outer = self.outer_vertices();
        self.edge_list()
            .into_iter()
            .filter(|&(a, b)| {
                outer.contains(&a)
                    && outer.contains(&b)
                    && !self.is_outer_dart((a, b))
                    && !self.is_outer_dart((b, a))
            })
            .collect()
    }

    /// Whether `x` and `y` lie in different components of `G - {u, v}`.
    pub fn edge_separates(&self, (u, v): (Vertex, Vertex), x: Vertex, y: Vertex) -> bool {
        let comps = components_avoiding(self, &[u, v]);
        let cx = comps.iter().position(|c| c.contains(&x));
        let cy = comps.iter().position(|c| c.contains(&y));
        cx.is_some() && cy.is_some() && cx != cy
    }

    /// Splits along a cutvertex or chord into the two induced sides.
    pub fn split_at(&self, sep: &Separation) -> Result<(EmbeddedGraph, EmbeddedGraph), EmbedError> {
        let bad = |m: &str| Err(EmbedError::InvalidSeparation(m.to_string()));
        match (sep.kind, sep.attachment.len()) {
            (SeparationKind::Cutvertex, 1) => {}
            (SeparationKind::Chord, 2) => {
                if !self.has_edge(sep.attachment[0], sep.attachment[1]) {
                    return bad("chord attachment is not an edge");
                }
            }
            _ => return bad("attachment size does not match kind"),
        }
        let all: BTreeSet<Vertex> = sep.side_a.union(&sep.side_b).copied().collect();
        if all != self.vertex_set() {
            return bad("sides do not cover the vertex set");
        }
        let meet: BTreeSet<Vertex> = sep.side_a.intersection(&sep.side_b).copied().collect();
        let att: BTreeSet<Vertex> = sep.attachment.iter().copied().collect();
        if meet != att {
            return bad("sides do not meet exactly in the attachment");
        }
        let only_a: BTreeSet<Vertex> = sep.side_a.difference(&att).copied().collect();
        let only_b: BTreeSet<Vertex> = sep.side_b.difference(&att).copied().collect();
        if only_a.is_empty() || only_b.is_empty() {
            return bad("a side is contained in the attachment");
        }
        for &a in &only_a {
            if self.neighbors(a).iter().any(|w| only_b.contains(w)) {
                return bad("an edge joins the two sides");
            }
        }
        Ok((self.induced(&sep.side_a)?, self.induced(&sep.side_b)?))
    }

    /// Subgraph induced on `keep`.
    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> Result<EmbeddedGraph, EmbedError> {
        self.restrict(keep, &BTreeSet::new())
    }

    pub fn without_vertices(&self, removed: &[Vertex]) -> Result<EmbeddedGraph, EmbedError> {
        let keep = self.vertex_set().into_iter().filter(|v| !removed.contains(v)).collect();
        self.induced(&keep)
    }

    pub fn without_edge(&self, u: Vertex, v: Vertex) -> Result<EmbeddedGraph, EmbedError> {
        self.restrict(&self.vertex_set(), &BTreeSet::from([(u.min(v), u.max(v))]))
    }

    /// Subgraph on the vertices `keep` with the edges in `dropped` (given as
    /// `(min, max)`) removed. The outer face of each remaining component is
    /// the face whose region contains the old outer face.
    pub fn restrict(
        &self,
        keep: &BTreeSet<Vertex>,
        dropped: &BTreeSet<(Vertex, Vertex)>,
    ) -> Result<EmbeddedGraph, EmbedError> {
        let survives = |a: Vertex, b: Vertex| {
            keep.contains(&a) && keep.contains(&b) && !dropped.contains(&(a.min(b), a.max(b)))
        };
        let mut rotation = BTreeMap::new();
        for &v in keep {
            let Some(ns) = self.rotation.get(&v) else {
                return Err(EmbedError::UnknownVertex(v));
            };
            rotation.insert(v, ns.iter().copied().filter(|&w| survives(v, w)).collect::<Vec<_>>());
        }

        let mut uf = UnionFind::new(self.faces.len());
        for (a, b) in self.edge_list() {
            if !survives(a, b) {
                uf.union(self.dart_face[&(a, b)], self.dart_face[&(b, a)]);
            }
        }
        let outer_region = self.outer_faces.iter().next().map(|&f0| {
            for &f in &self.outer_faces {
                uf.union(f0, f);
            }
            uf.find(f0)
        });

        let mut sub = EmbeddedGraph {
            rotation,
            faces: Vec::new(),
            dart_face: HashMap::new(),
            outer_witnesses: Vec::new(),
            outer_faces: BTreeSet::new(),
        };
        sub.trace_faces();

        let mut witnesses = Vec::new();
        for comp in sub.components() {
            let v0 = *comp.iter().next().unwrap();
            if comp.iter().all(|&x| sub.degree(x) == 0) {
                continue;
            }
            let mut found = None;
            for (id, face) in sub.faces.iter().enumerate() {
                if !comp.contains(&face[0].0) {
                    continue;
                }
                let region = uf.find(self.dart_face[&face[0]]);
                if Some(region) == outer_region {
                    if found.is_some() {
                        return Err(EmbedError::NestedComponent(v0));
                    }
                    found = Some(id);
                }
            }
            match found {
                Some(id) => witnesses.push(sub.faces[id][0]),
                None => return Err(EmbedError::NestedComponent(v0)),
            }
        }
        EmbeddedGraph::from_rotation(sub.rotation, witnesses)
    }

    /// Adds a new vertex `z` inside a face. Each corner is given by the dart
    /// `(a, x)` entering it; `z` is joined to `x` between `a` and its
    /// successor. Corners must be listed in face order. `outer` replaces the
    /// outer witness of the affected component when given.
    pub fn with_vertex_in_face(
        &self,
        z: Vertex,
        corners: &[Dart],
        outer: Option<Dart>,
    ) -> Result<EmbeddedGraph, EmbedError> {
        if self.rotation.contains_key(&z) {
            return Err(EmbedError::RepeatedNeighbor(z, z));
        }
        let mut rotation = self.rotation.clone();
        for &(a, x) in corners {
            let rot = rotation.get_mut(&x).ok_or(EmbedError::UnknownVertex(x))?;
            let i = rot.iter().position(|&w| w == a).ok_or(EmbedError::BadOuterWitness((a, x)))?;
            rot.insert(i + 1, z);
        }
        rotation.insert(z, corners.iter().rev().map(|d| d.1).collect());
        let mut witnesses = self.outer_witnesses.clone();
        if let Some(d) = outer {
            let comp = components_avoiding(self, &[])
                .into_iter()
                .find(|c| c.contains(&d.0))
                .ok_or(EmbedError::BadOuterWitness(d))?;
            witnesses.retain(|w| !comp.contains(&w.0));
            witnesses.push(d);
        }
        if witnesses.is_empty() && !corners.is_empty() {
            witnesses.push((corners[0].1, z));
        }
        EmbeddedGraph::from_rotation(rotation, witnesses)
    }

    /// Adds the edge `x y` through a face: `y` is inserted after `a` at `x`
    /// and `x` after `b` at `y`, for the corner darts `(a, x)` and `(b, y)`.
    pub fn with_edge_in_face(&self, (a, x): Dart, (b, y): Dart) -> Result<EmbeddedGraph, EmbedError> {
        if x == y || self.has_edge(x, y) {
            return Err(EmbedError::RepeatedNeighbor(x, y));
        }
        let mut rotation = self.rotation.clone();
        for (prev, at, new) in [(a, x, y), (b, y, x)] {
            let rot = rotation.get_mut(&at).ok_or(EmbedError::UnknownVertex(at))?;
            let i = rot.iter().position(|&w| w == prev).ok_or(EmbedError::BadOuterWitness((prev, at)))?;
            rot.insert(i + 1, new);
        }
        EmbeddedGraph::from_rotation(rotation, self.outer_witnesses.clone())
    }

    /// Vertices strictly inside the closed curve traced by `cycle`.
    pub fn cycle_interior(&self, cycle: &[Vertex]) -> BTreeSet<Vertex> {
        let on: BTreeSet<Vertex> = cycle.iter().copied().collect();
        let mut cyc_edges = BTreeSet::new();
        for i in 0..cycle.len() {
            let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            cyc_edges.insert((a.min(b), a.max(b)));
        }
        let mut uf = UnionFind::new(self.faces.len());
        for (a, b) in self.edge_list() {
            if !cyc_edges.contains(&(a, b)) {
                uf.union(self.dart_face[&(a, b)], self.dart_face[&(b, a)]);
            }
        }
        let Some(&f0) = self.outer_faces.iter().next() else {
            return BTreeSet::new();
        };
        for &f in &self.outer_faces {
            uf.union(f0, f);
        }
        let outer = uf.find(f0);
        let mut inside = BTreeSet::new();
        for (&v, ns) in &self.rotation {
            if on.contains(&v) || ns.is_empty() {
                continue;
            }
            if uf.find(self.dart_face[&(v, ns[0])]) != outer {
                inside.insert(v);
            }
        }
        inside
    }

    /// All cycles of length three or four, each listed once, starting at its
    /// smallest vertex with the smaller of the two directions.
    pub fn short_cycles(&self) -> Vec<Vec<Vertex>> {
        let mut out = Vec::new();
        for a in self.vertex_list() {
            for &b in self.neighbors(a) {
                if b <= a {
                    continue;
                }
                for &c in self.neighbors(b) {
                    if c <= a || c == b {
                        continue;
                    }
                    if self.has_edge(c, a) && b < c {
                        out.push(vec![a, b, c]);
                    }
                    for &d in self.neighbors(c) {
                        if d <= a || d == b || d == c {
                            continue;
                        }
                        if self.has_edge(d, a) && b < d {
                            out.push(vec![a, b, c, d]);
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Every cycle of length at most four whose bounded side holds a vertex.
    pub fn short_cycles_with_interior(&self) -> Vec<(Vec<Vertex>, BTreeSet<Vertex>)> {
        self.short_cycles()
            .into_iter()
            .filter_map(|c| {
                let inside = self.cycle_interior(&c);
                (!inside.is_empty()).then_some((c, inside))
            })
            .collect()
    }

    /// Canonical string of the rooted embedding, invariant under relabelling
    /// and reflection. Intended for connected graphs.
    pub fn canonical_code(&self) -> Vec<u32> {
        let mut best: Option<Vec<u32>> = None;
        for &f in &self.outer_faces {
            for &(a, b) in &self.faces[f] {
                for mirrored in [false, true] {
                    let start = if mirrored { (b, a) } else { (a, b) };
                    let code = self.bfs_code(start, mirrored);
                    if best.as_ref().is_none_or(|c| code < *c) {
                        best = Some(code);
                    }
                }
            }
        }
        best.unwrap_or_else(|| vec![self.vertex_count() as u32])
    }

    fn bfs_code(&self, (a, b): Dart, mirrored: bool) -> Vec<u32> {
        let mut label: HashMap<Vertex, u32> = HashMap::from([(a, 0)]);
        let mut queue = VecDeque::from([(a, b)]);
        let mut code = vec![self.vertex_count() as u32];
        while let Some((x, first)) = queue.pop_front() {
            let rot = &self.rotation[&x];
            let start = rot.iter().position(|&w| w == first).unwrap();
            let k = rot.len();
            code.push(u32::MAX);
            for step in 0..k {
                let idx = if mirrored { (start + k - step) % k } else { (start + step) % k };
                let w = rot[idx];
                let next = label.len() as u32;
                let lw = *label.entry(w).or_insert_with(|| {
                    queue.push_back((w, x));
                    next
                });
                code.push(lw);
            }
        }
        code
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn rot(entries: &[(Vertex, &[Vertex])]) -> BTreeMap<Vertex, Vec<Vertex>> {
        entries.iter().map(|(v, ns)| (*v, ns.to_vec())).collect()
    }

    fn triangle() -> EmbeddedGraph {
        let r = rot(&[(1, &[2, 3]), (2, &[3, 1]), (3, &[1, 2])]);
        EmbeddedGraph::build(&[1, 2, 3], &r, Some((1, 2))).unwrap()
    }

    /// Uses the first face of length `len` as the outer face.
    pub(crate) fn outer_of_len(r: BTreeMap<Vertex, Vec<Vertex>>, len: usize) -> EmbeddedGraph {
        let first = *r.iter().find(|(_, ns)| !ns.is_empty()).unwrap().0;
        let second = r[&first][0];
        let probe = EmbeddedGraph::from_rotation(r, vec![(first, second)]).unwrap();
        let f = probe.faces().iter().find(|f| f.len() == len).unwrap()[0];
        EmbeddedGraph::from_rotation(probe.rotation_table().clone(), vec![f]).unwrap()
    }

    /// 4-cycle 0123 with the diagonal 0-2, outer face the 4-cycle.
    fn square_with_diagonal() -> EmbeddedGraph {
        outer_of_len(rot(&[(0, &[1, 2, 3]), (1, &[2, 0]), (2, &[3, 0, 1]), (3, &[0, 2])]), 4)
    }

    fn bowtie() -> EmbeddedGraph {
        // triangles 0-1-2 and 2-3-4 sharing vertex 2
        let r = rot(&[
            (0, &[1, 2]),
            (1, &[2, 0]),
            (2, &[0, 1, 3, 4]),
            (3, &[4, 2]),
            (4, &[2, 3]),
        ]);
        outer_of_len(r, 6)
    }

    #[test]
    fn triangle_has_two_faces() {
        let g = triangle();
        assert_eq!(g.face_count(), 2);
        assert_eq!(g.vertex_count() as i64 - g.edge_count() as i64 + g.face_count() as i64, 2);
        assert_eq!(g.outer_walk().unwrap().vertices, vec![1, 2, 3]);
    }

    #[test]
    fn square_with_diagonal_has_three_faces() {
        let g = square_with_diagonal();
        assert_eq!(g.face_count(), 3);
        assert_eq!(g.outer_walk().unwrap().len(), 4);
        assert_eq!(g.outer_chords().unwrap(), BTreeSet::from([(0, 2)]));
    }

    #[test]
    fn asymmetric_rotation_is_rejected() {
        let r = rot(&[(1, &[2]), (2, &[])]);
        assert_eq!(
            EmbeddedGraph::build(&[1, 2], &r, Some((1, 2))).unwrap_err(),
            EmbedError::NonSymmetricRotation(1, 2)
        );
    }

    #[test]
    fn k33_like_rotation_fails_euler() {
        // K4 with a rotation that is not planar at one vertex
        let r = rot(&[(0, &[1, 2, 3]), (1, &[0, 2, 3]), (2, &[0, 1, 3]), (3, &[0, 1, 2])]);
        assert!(matches!(
            EmbeddedGraph::from_rotation(r, vec![(0, 1)]),
            Err(EmbedError::EulerViolation { .. })
        ));
    }

    #[test]
    fn witness_must_be_a_dart() {
        let r = rot(&[(1, &[2, 3]), (2, &[3, 1]), (3, &[1, 2])]);
        assert!(matches!(
            EmbeddedGraph::build(&[1, 2, 3], &r, Some((1, 4))),
            Err(EmbedError::BadOuterWitness(_))
        ));
    }

    #[test]
    fn bowtie_walk_repeats_the_cutvertex() {
        let g = bowtie();
        let walk = g.outer_walk().unwrap();
        assert_eq!(walk.vertices.iter().filter(|&&v| v == 2).count(), 2);
        assert_eq!(g.cutvertices(), BTreeSet::from([2]));
        assert!(!g.is_two_connected());
        assert!(matches!(g.outer_chords(), Err(EmbedError::NotTwoConnected)));
    }

    #[test]
    fn path_has_middle_cutvertex() {
        let r = rot(&[(0, &[1]), (1, &[0, 2]), (2, &[1])]);
        let g = EmbeddedGraph::from_rotation(r, vec![(0, 1)]).unwrap();
        assert_eq!(g.cutvertices(), BTreeSet::from([1]));
        assert!(!triangle().cutvertices().contains(&1));
        assert!(triangle().is_two_connected());
    }

    #[test]
    fn split_bowtie_at_cutvertex() {
        let g = bowtie();
        let sep = Separation {
            kind: SeparationKind::Cutvertex,
            attachment: vec![2],
            side_a: BTreeSet::from([0, 1, 2]),
            side_b: BTreeSet::from([2, 3, 4]),
        };
        let (a, b) = g.split_at(&sep).unwrap();
        assert_eq!((a.edge_count(), b.edge_count()), (3, 3));
        assert_eq!(a.outer_walk().unwrap().len(), 3);
        assert_eq!(b.outer_walk().unwrap().len(), 3);
    }

    #[test]
    fn split_square_at_diagonal() {
        let g = square_with_diagonal();
        let sep = Separation {
            kind: SeparationKind::Chord,
            attachment: vec![0, 2],
            side_a: BTreeSet::from([0, 1, 2]),
            side_b: BTreeSet::from([0, 2, 3]),
        };
        let (a, b) = g.split_at(&sep).unwrap();
        assert_eq!(a.edge_count() + b.edge_count(), g.edge_count() + 1);
        assert!(a.is_two_connected() && b.is_two_connected());
    }

    #[test]
    fn split_rejects_edge_across_sides() {
        let g = square_with_diagonal();
        let sep = Separation {
            kind: SeparationKind::Cutvertex,
            attachment: vec![0],
            side_a: BTreeSet::from([0, 1]),
            side_b: BTreeSet::from([0, 2, 3]),
        };
        assert!(matches!(g.split_at(&sep), Err(EmbedError::InvalidSeparation(_))));
    }

    #[test]
    fn restriction_exposes_interior_vertices() {
        // wheel: rim 0..4, hub 4 inside
        let r = rot(&[
            (0, &[1, 4, 3]),
            (1, &[2, 4, 0]),
            (2, &[3, 4, 1]),
            (3, &[0, 4, 2]),
            (4, &[0, 1, 2, 3]),
        ]);
        let w = outer_of_len(r, 4);
        assert!(!w.is_outer_vertex(4));
        assert!(w.outer_chords().unwrap().is_empty());
        let cut = w.without_vertices(&[0]).unwrap();
        assert!(cut.is_outer_vertex(4));
        assert_eq!(cut.outer_walk().unwrap().len(), 4);
        assert_eq!(w.short_cycles_with_interior().len(), 1);
        assert_eq!(w.short_cycles_with_interior()[0].1, BTreeSet::from([4]));
    }

    #[test]
    fn edge_separation_on_hexagon_with_chord() {
        // 6-cycle 1..6 with chord 1-4
        let r = rot(&[
            (1, &[2, 4, 6]),
            (2, &[3, 1]),
            (3, &[4, 2]),
            (4, &[5, 1, 3]),
            (5, &[6, 4]),
            (6, &[1, 5]),
        ]);
        let g = outer_of_len(r, 6);
        assert!(g.edge_separates((1, 4), 2, 5));
        assert!(!g.edge_separates((1, 4), 2, 3));
        assert!(!g.edge_separates((1, 2), 3, 5));
        let sep = Separation {
            kind: SeparationKind::Chord,
            attachment: vec![1, 4],
            side_a: BTreeSet::from([1, 2, 3, 4]),
            side_b: BTreeSet::from([1, 4, 5, 6]),
        };
        let (a, b) = g.split_at(&sep).unwrap();
        assert_eq!(a.outer_cycle().unwrap().len(), 4);
        assert_eq!(b.outer_cycle().unwrap().len(), 4);
    }

    #[test]
    fn inserting_a_vertex_into_a_face() {
        let g = triangle();
        let inner = (0..g.face_count()).find(|f| !g.outer_face_ids().contains(f)).unwrap();
        let corners = g.faces()[inner].clone();
        let k4 = g.with_vertex_in_face(4, &corners, None).unwrap();
        assert_eq!(k4.face_count(), 4);
        assert!(!k4.is_outer_vertex(4));
        assert_eq!(k4.short_cycles_with_interior().len(), 1);
    }

    #[test]
    fn canonical_code_ignores_labels() {
        let a = triangle();
        let r = rot(&[(7, &[9, 8]), (8, &[7, 9]), (9, &[8, 7])]);
        let b = EmbeddedGraph::from_rotation(r, vec![(7, 9)]).unwrap();
        assert_eq!(a.canonical_code(), b.canonical_code());
        assert_ne!(a.canonical_code(), square_with_diagonal().canonical_code());
    }
}
