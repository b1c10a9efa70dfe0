//! List assignments, canvases and the hypothesis checks for the two-lists
//! theorems.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::{components_avoiding, EmbeddedGraph, GraphView, Vertex};

pub type Color = u32;

/// A set of colours in `0..64`, stored as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorSet(u64);

impl ColorSet {
    pub const MAX_COLOR: Color = 63;

    pub const fn empty() -> Self {
        ColorSet(0)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn from_bits(bits: u64) -> Self {
        ColorSet(bits)
    }

    /// `{0, 1, ..., n - 1}`.
    pub fn palette(n: u32) -> Self {
        assert!(n <= 64);
        if n == 64 {
            ColorSet(u64::MAX)
        } else {
            ColorSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(c: Color) -> Self {
        assert!(c <= Self::MAX_COLOR, "colour {c} out of range");
        ColorSet(1 << c)
    }

    pub fn contains(self, c: Color) -> bool {
        c <= Self::MAX_COLOR && self.0 & (1 << c) != 0
    }

    pub fn insert(&mut self, c: Color) {
        self.0 |= Self::singleton(c).0;
    }

    pub fn remove(&mut self, c: Color) {
        if c <= Self::MAX_COLOR {
            self.0 &= !(1 << c);
        }
    }

    pub fn without(self, c: Color) -> Self {
        let mut s = self;
        s.remove(c);
        s
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn min(self) -> Option<Color> {
        (self.0 != 0).then(|| self.0.trailing_zeros())
    }

    pub fn union(self, other: Self) -> Self {
        ColorSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ColorSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ColorSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// The `n` smallest colours.
    pub fn smallest(self, n: usize) -> Self {
        self.iter().take(n).collect()
    }

    pub fn iter(self) -> impl Iterator<Item = Color> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            (bits != 0).then(|| {
                let c = bits.trailing_zeros();
                bits &= bits - 1;
                c
            })
        })
    }
}

impl FromIterator<Color> for ColorSet {
    fn from_iter<I: IntoIterator<Item = Color>>(iter: I) -> Self {
        let mut s = ColorSet::empty();
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl<const N: usize> From<[Color; N]> for ColorSet {
    fn from(cs: [Color; N]) -> Self {
        cs.into_iter().collect()
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ColorSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ColorSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let colors = Vec::<Color>::deserialize(d)?;
        if let Some(&c) = colors.iter().find(|&&c| c > ColorSet::MAX_COLOR) {
            return Err(serde::de::Error::custom(format!("colour {c} exceeds {}", ColorSet::MAX_COLOR)));
        }
        Ok(colors.into_iter().collect())
    }
}

/// One list of allowed colours per vertex.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ListAssignment(BTreeMap<Vertex, ColorSet>);

impl ListAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: Vertex) -> ColorSet {
        self.0.get(&v).copied().unwrap_or_default()
    }

    pub fn has(&self, v: Vertex) -> bool {
        self.0.contains_key(&v)
    }

    pub fn set(&mut self, v: Vertex, colors: ColorSet) {
        self.0.insert(v, colors);
    }

    pub fn remove(&mut self, v: Vertex) -> Option<ColorSet> {
        self.0.remove(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, ColorSet)> + '_ {
        self.0.iter().map(|(&v, &c)| (v, c))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Lists of the vertices in `keep` only.
    pub fn restricted_to(&self, keep: &BTreeSet<Vertex>) -> ListAssignment {
        ListAssignment(self.0.iter().filter(|(v, _)| keep.contains(v)).map(|(&v, &c)| (v, c)).collect())
    }

    /// Removes `colors` from the lists of `victims`; other lists are kept.
    pub fn trimmed(&self, victims: impl IntoIterator<Item = Vertex>, colors: ColorSet) -> ListAssignment {
        let mut out = self.clone();
        for v in victims {
            if let Some(l) = out.0.get_mut(&v) {
                *l = l.difference(colors);
            }
        }
        out
    }
}

impl FromIterator<(Vertex, ColorSet)> for ListAssignment {
    fn from_iter<I: IntoIterator<Item = (Vertex, ColorSet)>>(iter: I) -> Self {
        ListAssignment(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ListError {
    #[error("list of vertex {0} would become empty")]
    EmptiedList(Vertex),
}

/// Removes `removed` from the lists of `victims`. Fails instead of leaving an
/// empty list behind.
pub fn reduce_lists(
    lists: &ListAssignment,
    victims: &BTreeSet<Vertex>,
    removed: ColorSet,
) -> Result<ListAssignment, ListError> {
    let out = lists.trimmed(victims.iter().copied(), removed);
    for &v in victims {
        if out.has(v) && out.get(v).is_empty() {
            return Err(ListError::EmptiedList(v));
        }
    }
    Ok(out)
}

/// The precoloured boundary subgraph: a path plus isolated vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SDesignation {
    #[serde(default)]
    pub path: Vec<Vertex>,
    #[serde(default)]
    pub isolated: Vec<Vertex>,
}

impl SDesignation {
    pub fn path(path: Vec<Vertex>) -> Self {
        SDesignation { path, isolated: Vec::new() }
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.path.iter().chain(&self.isolated).copied().collect()
    }

    pub fn edges(&self) -> BTreeSet<(Vertex, Vertex)> {
        self.path.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))).collect()
    }
}

/// Reasons a triple fails to be a canvas, checked in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum CanvasViolation {
    #[error("S mentions vertex {0}, which is not in the graph")]
    UnknownVertex(Vertex),
    #[error("vertex {0} is listed twice in S")]
    RepeatedSVertex(Vertex),
    #[error("consecutive path vertices {0} and {1} are not adjacent")]
    PathNotInGraph(Vertex, Vertex),
    #[error("vertex {0} has no list")]
    MissingList(Vertex),
    #[error("vertex {0} has an empty list")]
    EmptyList(Vertex),
    #[error("S vertex {0} is not on the outer face")]
    SNotOnBoundary(Vertex),
    #[error("S path edge {0}-{1} is not on the outer face")]
    SEdgeNotOnBoundary(Vertex, Vertex),
    #[error("interior vertex {0} has fewer than five colours")]
    InteriorListTooSmall(Vertex),
    #[error("boundary vertex {0} outside S has fewer than three colours")]
    BoundaryListTooSmall(Vertex),
    #[error("S has no proper colouring from its lists")]
    SNotProperlyColorable,
}

impl CanvasViolation {
    pub fn kind(&self) -> &'static str {
        match self {
            CanvasViolation::UnknownVertex(_) => "UnknownVertex",
            CanvasViolation::RepeatedSVertex(_) => "RepeatedSVertex",
            CanvasViolation::PathNotInGraph(..) => "PathNotInGraph",
            CanvasViolation::MissingList(_) => "MissingList",
            CanvasViolation::EmptyList(_) => "EmptyList",
            CanvasViolation::SNotOnBoundary(_) => "SNotOnBoundary",
            CanvasViolation::SEdgeNotOnBoundary(..) => "SEdgeNotOnBoundary",
            CanvasViolation::InteriorListTooSmall(_) => "InteriorListTooSmall",
            CanvasViolation::BoundaryListTooSmall(_) => "BoundaryListTooSmall",
            CanvasViolation::SNotProperlyColorable => "SNotProperlyColorable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canvas {
    pub graph: EmbeddedGraph,
    pub s: SDesignation,
    pub lists: ListAssignment,
}

/// A list colouring of a path exists iff forward propagation never runs dry.
fn path_colorable(path: &[Vertex], lists: &ListAssignment) -> bool {
    let mut reachable = ColorSet::palette(64);
    for (i, &v) in path.iter().enumerate() {
        let l = lists.get(v);
        let options = if i == 0 {
            l
        } else if reachable.len() == 1 {
            l.difference(reachable)
        } else {
            l
        };
        if options.is_empty() {
            return false;
        }
        reachable = options;
    }
    true
}

/// Checks the canvas conditions, reporting the first failure.
pub fn validate_canvas(
    graph: &EmbeddedGraph,
    s: &SDesignation,
    lists: &ListAssignment,
) -> Result<Canvas, CanvasViolation> {
    let mut seen = BTreeSet::new();
    for &v in s.path.iter().chain(&s.isolated) {
        if !graph.contains(v) {
            return Err(CanvasViolation::UnknownVertex(v));
        }
        if !seen.insert(v) {
            return Err(CanvasViolation::RepeatedSVertex(v));
        }
    }
    for w in s.path.windows(2) {
        if !graph.has_edge(w[0], w[1]) {
            return Err(CanvasViolation::PathNotInGraph(w[0], w[1]));
        }
    }
    for v in graph.vertex_list() {
        if !lists.has(v) {
            return Err(CanvasViolation::MissingList(v));
        }
        if lists.get(v).is_empty() {
            return Err(CanvasViolation::EmptyList(v));
        }
    }
    let outer = graph.outer_vertices();
    for v in s.vertices() {
        if !outer.contains(&v) {
            return Err(CanvasViolation::SNotOnBoundary(v));
        }
    }
    for w in s.path.windows(2) {
        if !graph.is_outer_dart((w[0], w[1])) && !graph.is_outer_dart((w[1], w[0])) {
            return Err(CanvasViolation::SEdgeNotOnBoundary(w[0], w[1]));
        }
    }
    for v in graph.vertex_list() {
        if !outer.contains(&v) && lists.get(v).len() < 5 {
            return Err(CanvasViolation::InteriorListTooSmall(v));
        }
    }
    let s_vertices = s.vertices();
    for &v in &outer {
        if !s_vertices.contains(&v) && lists.get(v).len() < 3 {
            return Err(CanvasViolation::BoundaryListTooSmall(v));
        }
    }
    if !path_colorable(&s.path, lists) {
        return Err(CanvasViolation::SNotProperlyColorable);
    }
    Ok(Canvas {
        graph: graph.clone(),
        s: s.clone(),
        lists: lists.restricted_to(&graph.vertex_set()),
    })
}

impl Canvas {
    pub fn new(graph: EmbeddedGraph, s: SDesignation, lists: ListAssignment) -> Result<Self, CanvasViolation> {
        validate_canvas(&graph, &s, &lists)
    }
}

/// Whether splitting at `attachment` must leave S on both sides. `attachment`
/// is a cutvertex (one vertex) or the ends of a chord (two vertices).
pub fn is_essential(graph: &impl GraphView, s_vertices: &BTreeSet<Vertex>, attachment: &[Vertex]) -> bool {
    let comps = components_avoiding(graph, attachment);
    comps.len() <= 1 || comps.iter().all(|c| c.iter().any(|v| s_vertices.contains(v)))
}

/// Cutvertices and outer-walk chords that are not essential for `s`.
pub fn inessential_separators(
    graph: &EmbeddedGraph,
    s_vertices: &BTreeSet<Vertex>,
) -> (Vec<Vertex>, Vec<(Vertex, Vertex)>) {
    let cuts = graph
        .cutvertices()
        .into_iter()
        .filter(|&c| !is_essential(graph, s_vertices, &[c]))
        .collect();
    let chords = graph
        .outer_walk_chords()
        .into_iter()
        .filter(|&(a, b)| !is_essential(graph, s_vertices, &[a, b]))
        .collect();
    (cuts, chords)
}

/// Reasons a canvas does not meet the hypotheses of the path-plus-vertex
/// theorem, checked in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum DemTwoViolation {
    #[error("S must be a non-empty path plus exactly one isolated vertex")]
    WrongSShape,
    #[error("path vertex {0} does not have a list of size two")]
    PListNotPair(Vertex),
    #[error("path vertices {0} and {1} have different lists")]
    MixedPLists(Vertex, Vertex),
    #[error("isolated vertex {0} has fewer than two colours")]
    UListTooSmall(Vertex),
    #[error("the path has at least two vertices but the graph is not 2-connected")]
    NotTwoConnected,
    #[error("isolated vertex is adjacent to internal path vertex {0}")]
    UAdjacentInternal(Vertex),
    #[error("chord {0}-{1} with an end on the path separates path vertex {2} from the isolated vertex")]
    SeparatingChordAtP(Vertex, Vertex, Vertex),
}

impl DemTwoViolation {
    pub fn kind(&self) -> &'static str {
        match self {
            DemTwoViolation::WrongSShape => "WrongSShape",
            DemTwoViolation::PListNotPair(_) => "PListNotPair",
            DemTwoViolation::MixedPLists(..) => "MixedPLists",
            DemTwoViolation::UListTooSmall(_) => "UListTooSmall",
            DemTwoViolation::NotTwoConnected => "NotTwoConnected",
            DemTwoViolation::UAdjacentInternal(_) => "UAdjacentInternal",
            DemTwoViolation::SeparatingChordAtP(..) => "SeparatingChordAtP",
        }
    }
}

/// A canvas whose S is a path `P` of vertices all listing `l0` plus one
/// further boundary vertex `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemTwoInstance {
    pub canvas: Canvas,
    pub l0: ColorSet,
    pub u: Vertex,
}

impl DemTwoInstance {
    pub fn path(&self) -> &[Vertex] {
        &self.canvas.s.path
    }
}

/// Checks the hypotheses beyond the canvas conditions.
pub fn validate_dem_two(canvas: &Canvas) -> Result<DemTwoInstance, DemTwoViolation> {
    check_dem_two_parts(&canvas.graph, &canvas.s.path, &canvas.s.isolated, &canvas.lists)?;
    Ok(DemTwoInstance {
        canvas: canvas.clone(),
        l0: canvas.lists.get(canvas.s.path[0]),
        u: canvas.s.isolated[0],
    })
}

pub(crate) fn check_dem_two_parts(
    graph: &EmbeddedGraph,
    path: &[Vertex],
    isolated: &[Vertex],
    lists: &ListAssignment,
) -> Result<(), DemTwoViolation> {
    if path.is_empty() || isolated.len() != 1 {
        return Err(DemTwoViolation::WrongSShape);
    }
    let u = isolated[0];
    let l0 = lists.get(path[0]);
    for &p in path {
        if lists.get(p).len() != 2 {
            return Err(DemTwoViolation::PListNotPair(p));
        }
        if lists.get(p) != l0 {
            return Err(DemTwoViolation::MixedPLists(path[0], p));
        }
    }
    if lists.get(u).len() < 2 {
        return Err(DemTwoViolation::UListTooSmall(u));
    }
    if path.len() < 2 {
        return Ok(());
    }
    if !graph.is_two_connected() {
        return Err(DemTwoViolation::NotTwoConnected);
    }
    for &p in &path[1..path.len() - 1] {
        if graph.has_edge(u, p) {
            return Err(DemTwoViolation::UAdjacentInternal(p));
        }
    }
    let on_path: BTreeSet<Vertex> = path.iter().copied().collect();
    for (a, b) in graph.outer_walk_chords() {
        if !on_path.contains(&a) && !on_path.contains(&b) {
            continue;
        }
        if let Some(&p) = path.iter().find(|&&p| p != a && p != b && graph.edge_separates((a, b), p, u)) {
            return Err(DemTwoViolation::SeparatingChordAtP(a, b, p));
        }
    }
    Ok(())
}

/// The exceptional configuration: `V(S)` induces an odd cycle and the
/// isolated vertex has the same 2-list as the path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionCertificate {
    pub odd_cycle: Vec<Vertex>,
    pub l0: ColorSet,
}

/// Returns the cycle order of `g[vertices]` if it is a single cycle.
pub fn induced_cycle(graph: &impl GraphView, vertices: &BTreeSet<Vertex>) -> Option<Vec<Vertex>> {
    if vertices.len() < 3 {
        return None;
    }
    let nbrs = |v: Vertex| -> Vec<Vertex> {
        graph.neighbors(v).iter().copied().filter(|w| vertices.contains(w)).collect()
    };
    if vertices.iter().any(|&v| nbrs(v).len() != 2) {
        return None;
    }
    let start = *vertices.iter().next().unwrap();
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = nbrs(start).into_iter().min().unwrap();
    while cur != start {
        order.push(cur);
        let next = nbrs(cur).into_iter().find(|&w| w != prev).unwrap();
        prev = cur;
        cur = next;
    }
    (order.len() == vertices.len()).then_some(order)
}

pub(crate) fn exception_for(
    graph: &impl GraphView,
    path: &[Vertex],
    u: Vertex,
    lists: &ListAssignment,
) -> Option<ExceptionCertificate> {
    let l0 = lists.get(path[0]);
    if lists.get(u) != l0 || path.iter().any(|&p| lists.get(p) != l0) {
        return None;
    }
    let vs: BTreeSet<Vertex> = path.iter().copied().chain([u]).collect();
    let cycle = induced_cycle(graph, &vs)?;
    (cycle.len() % 2 == 1).then_some(ExceptionCertificate { odd_cycle: cycle, l0 })
}

pub fn detect_exception(instance: &DemTwoInstance) -> Option<ExceptionCertificate> {
    exception_for(&instance.canvas.graph, instance.path(), instance.u, &instance.canvas.lists)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::embed::EmbeddedGraph;

    pub(crate) fn cycle_graph(n: u32) -> EmbeddedGraph {
        let rotation = (0..n).map(|i| (i, vec![(i + n - 1) % n, (i + 1) % n])).collect();
        EmbeddedGraph::from_rotation(rotation, vec![(0, 1)]).unwrap()
    }

    pub(crate) fn lists(entries: &[(Vertex, &[Color])]) -> ListAssignment {
        entries.iter().map(|(v, cs)| (*v, cs.iter().copied().collect())).collect()
    }

    fn k4() -> EmbeddedGraph {
        let t = cycle_graph(3);
        let inner = (0..t.face_count()).find(|f| !t.outer_face_ids().contains(f)).unwrap();
        t.with_vertex_in_face(3, &t.faces()[inner].clone(), None).unwrap()
    }

    #[test]
    fn color_set_basics() {
        let s = ColorSet::from([3, 1, 2]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(s.min(), Some(1));
        assert_eq!(s.smallest(2), ColorSet::from([1, 2]));
        assert!(ColorSet::from([1]).is_subset(s));
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,2,3]");
        assert!(serde_json::from_str::<ColorSet>("[64]").is_err());
    }

    #[test]
    fn triangle_canvas_with_distinct_pins_is_valid() {
        let g = cycle_graph(3);
        let l = lists(&[(0, &[1]), (1, &[2]), (2, &[1, 2, 3])]);
        assert!(validate_canvas(&g, &SDesignation::path(vec![0, 1]), &l).is_ok());
    }

    #[test]
    fn equal_pins_are_not_colorable() {
        let g = cycle_graph(3);
        let l = lists(&[(0, &[1]), (1, &[1]), (2, &[1, 2, 3])]);
        assert_eq!(
            validate_canvas(&g, &SDesignation::path(vec![0, 1]), &l).unwrap_err(),
            CanvasViolation::SNotProperlyColorable
        );
    }

    #[test]
    fn small_interior_list_is_reported() {
        let g = k4();
        let l = lists(&[(0, &[1, 2, 3]), (1, &[1, 2, 3]), (2, &[1, 2, 3]), (3, &[1, 2, 3, 4])]);
        assert_eq!(
            validate_canvas(&g, &SDesignation::default(), &l).unwrap_err(),
            CanvasViolation::InteriorListTooSmall(3)
        );
    }

    #[test]
    fn interior_vertex_cannot_be_in_s() {
        let g = k4();
        let l = lists(&[(0, &[1, 2, 3]), (1, &[1, 2, 3]), (2, &[1, 2, 3]), (3, &[1, 2, 3, 4, 5])]);
        let s = SDesignation { path: vec![], isolated: vec![3] };
        assert_eq!(validate_canvas(&g, &s, &l).unwrap_err(), CanvasViolation::SNotOnBoundary(3));
    }

    fn dem_two(g: &EmbeddedGraph, path: &[Vertex], u: Vertex, l: &ListAssignment) -> Result<DemTwoInstance, DemTwoViolation> {
        let s = SDesignation { path: path.to_vec(), isolated: vec![u] };
        validate_dem_two(&validate_canvas(g, &s, l).unwrap())
    }

    #[test]
    fn five_cycle_single_vertex_path_is_valid() {
        let g = cycle_graph(5);
        let l = lists(&[(0, &[1, 2]), (1, &[1, 2, 3]), (2, &[1, 2]), (3, &[1, 2, 3]), (4, &[1, 2, 3])]);
        let inst = dem_two(&g, &[0], 2, &l).unwrap();
        assert_eq!(inst.l0, ColorSet::from([1, 2]));
        assert!(detect_exception(&inst).is_none());
    }

    #[test]
    fn cutvertex_with_long_path_is_rejected() {
        let r = crate::embed::tests::rot(&[
            (0, &[1, 2]),
            (1, &[2, 0]),
            (2, &[0, 1, 3, 4]),
            (3, &[4, 2]),
            (4, &[2, 3]),
        ]);
        let g = crate::embed::tests::outer_of_len(r, 6);
        let l = lists(&[(0, &[1, 2]), (1, &[1, 2]), (2, &[1, 2, 3]), (3, &[1, 2]), (4, &[1, 2, 3])]);
        assert_eq!(dem_two(&g, &[0, 1], 3, &l).unwrap_err(), DemTwoViolation::NotTwoConnected);
    }

    #[test]
    fn mixed_path_lists_are_rejected() {
        let g = cycle_graph(5);
        let l = lists(&[(0, &[1, 2]), (1, &[1, 3]), (2, &[1, 2, 3]), (3, &[1, 2, 3]), (4, &[1, 2, 3])]);
        assert_eq!(dem_two(&g, &[0, 1], 3, &l).unwrap_err(), DemTwoViolation::MixedPLists(0, 1));
    }

    #[test]
    fn u_next_to_internal_vertex_is_rejected() {
        // 4-cycle 0-1-2-3 plus chord 1-3; path 0,1,2 and u = 3
        let r = crate::embed::tests::rot(&[(0, &[1, 3]), (1, &[2, 3, 0]), (2, &[3, 1]), (3, &[0, 1, 2])]);
        let g = crate::embed::tests::outer_of_len(r, 4);
        let l = lists(&[(0, &[1, 2]), (1, &[1, 2]), (2, &[1, 2]), (3, &[1, 2, 3])]);
        assert_eq!(dem_two(&g, &[0, 1, 2], 3, &l).unwrap_err(), DemTwoViolation::UAdjacentInternal(1));
    }

    #[test]
    fn triangle_with_equal_lists_is_exceptional() {
        let g = cycle_graph(3);
        let l = lists(&[(0, &[1, 2]), (1, &[1, 2]), (2, &[1, 2])]);
        let cert = detect_exception(&dem_two(&g, &[0, 1], 2, &l).unwrap()).unwrap();
        assert_eq!(cert.odd_cycle.len(), 3);
        assert_eq!(cert.l0, ColorSet::from([1, 2]));

        let l = lists(&[(0, &[1, 2]), (1, &[1, 2]), (2, &[1, 3])]);
        assert!(detect_exception(&dem_two(&g, &[0, 1], 2, &l).unwrap()).is_none());
    }

    #[test]
    fn five_cycle_path_of_four_is_exceptional() {
        let g = cycle_graph(5);
        let l = lists(&[(0, &[1, 2]), (1, &[1, 2]), (2, &[1, 2]), (3, &[1, 2]), (4, &[1, 2])]);
        let cert = detect_exception(&dem_two(&g, &[0, 1, 2, 3], 4, &l).unwrap()).unwrap();
        assert_eq!(cert.odd_cycle.len(), 5);
    }

    #[test]
    fn path_along_a_chord_is_not_on_the_boundary() {
        let r = crate::embed::tests::rot(&[(0, &[1, 3]), (1, &[2, 3, 0]), (2, &[3, 1]), (3, &[0, 1, 2])]);
        let g = crate::embed::tests::outer_of_len(r, 4);
        let l = lists(&[(0, &[1, 2, 3]), (1, &[1]), (2, &[1, 2, 3]), (3, &[2])]);
        assert_eq!(
            validate_canvas(&g, &SDesignation::path(vec![1, 3]), &l).unwrap_err(),
            CanvasViolation::SEdgeNotOnBoundary(1, 3)
        );
    }

    #[test]
    fn reduce_lists_cases() {
        let l = lists(&[(0, &[1, 2, 3])]);
        let v = BTreeSet::from([0]);
        assert_eq!(reduce_lists(&l, &v, ColorSet::from([1, 2])).unwrap().get(0), ColorSet::from([3]));
        assert_eq!(reduce_lists(&l, &v, ColorSet::from([4])).unwrap().get(0), ColorSet::from([1, 2, 3]));
        assert_eq!(reduce_lists(&l, &v, ColorSet::from([1, 2, 3])).unwrap_err(), ListError::EmptiedList(0));
    }

    #[test]
    fn essential_cutvertex_needs_s_on_both_sides() {
        let r = crate::embed::tests::rot(&[
            (0, &[1, 2]),
            (1, &[2, 0]),
            (2, &[0, 1, 3, 4]),
            (3, &[4, 2]),
            (4, &[2, 3]),
        ]);
        let g = crate::embed::tests::outer_of_len(r, 6);
        assert!(is_essential(&g, &BTreeSet::from([0, 3]), &[2]));
        assert!(!is_essential(&g, &BTreeSet::from([0, 1]), &[2]));
    }
}
