//! The instance suite: list assignments sampled onto corpus graphs so that
//! each instance meets (or, for near misses, deliberately fails) the
//! hypotheses of its target.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::generate::{enumerate_families, generate_near_triangulation};
use super::io::CanvasFile;
use super::{CorpusSpec, Family, HarnessError};
use crate::canvas::{check_dem_two_parts, induced_cycle, ColorSet, ListAssignment, SDesignation};
use crate::embed::{EmbeddedGraph, GraphView, Vertex};

/// Above this many list assignments per shape, assignments are sampled.
pub const EXHAUSTIVE_LIMIT: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// A 2-listed path plus one further 2-listed boundary vertex.
    DemTwo,
    /// Two boundary vertices with lists of size two.
    TwoTwos,
    /// A boundary edge with distinct singleton lists.
    Thom,
    /// A boundary path on three vertices, for counting its colourings that
    /// do not extend.
    BadColorings,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::DemTwo => "demtwo",
            Target::TwoTwos => "twotwos",
            Target::Thom => "thom",
            Target::BadColorings => "bad-colorings",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Target::DemTwo, Target::TwoTwos, Target::Thom, Target::BadColorings]
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| HarnessError::Spec(format!("unknown target {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    /// Sortable and unique within a suite.
    pub id: String,
    pub target: Target,
    pub graph: EmbeddedGraph,
    pub s: SDesignation,
    pub lists: ListAssignment,
    /// The violation kind a validator must report, for near misses.
    pub expect_invalid: Option<&'static str>,
}

impl Instance {
    pub fn to_file(&self) -> CanvasFile {
        CanvasFile::new(&self.graph, &self.s, &self.lists)
    }
}

fn mix(seed: u64, parts: &[u64]) -> u64 {
    let mut x = seed;
    for &p in parts {
        x = (x ^ p).wrapping_add(0x9e37_79b9_7f4a_7c15);
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        x ^= x >> 31;
    }
    x
}

/// The graphs of the corpus with a source tag (`e` enumerated, `r` random)
/// and index.
pub fn corpus_graphs(spec: &CorpusSpec) -> Result<Vec<(char, usize, EmbeddedGraph)>, HarnessError> {
    spec.validate()?;
    let enumerated: BTreeSet<Family> =
        spec.families.iter().copied().filter(|&f| f != Family::RandomNearTriangulations).collect();
    let mut out: Vec<(char, usize, EmbeddedGraph)> = enumerate_families(spec.max_vertices, &enumerated)?
        .into_iter()
        .enumerate()
        .map(|(i, g)| ('e', i, g))
        .collect();
    if spec.families.contains(&Family::RandomNearTriangulations) {
        for i in 0..spec.random_instances {
            let seed = mix(spec.seed, &[u64::from(b'r'), i as u64]);
            let n = ChaCha8Rng::seed_from_u64(seed).gen_range(3..=spec.random_max_vertices);
            out.push(('r', i, generate_near_triangulation(n, seed)));
        }
    }
    Ok(out)
}

struct Sampler {
    rng: ChaCha8Rng,
    palette: u32,
}

impl Sampler {
    fn subset(&mut self, k: usize) -> ColorSet {
        let k = k.min(self.palette as usize);
        index::sample(&mut self.rng, self.palette as usize, k).iter().map(|i| i as u32).collect()
    }

    fn other_color(&mut self, base: ColorSet) -> Option<u32> {
        let rest: Vec<u32> = ColorSet::palette(self.palette).difference(base).iter().collect();
        rest.choose(&mut self.rng).copied()
    }

    /// A list of size at least three, often the given pair plus one colour.
    fn boundary(&mut self, base: Option<ColorSet>) -> ColorSet {
        match (self.rng.gen_range(0..8), base) {
            (0..=3, Some(b)) if b.len() == 2 => match self.other_color(b) {
                Some(x) => b.union(ColorSet::singleton(x)),
                None => self.subset(3),
            },
            (7, _) if self.palette >= 4 => self.subset(4),
            _ => self.subset(3),
        }
    }

    fn interior(&mut self) -> ColorSet {
        self.subset(5)
    }

    fn pair_or_more(&mut self, base: ColorSet) -> ColorSet {
        match self.rng.gen_range(0..3) {
            0 => base,
            1 => self.subset(2),
            _ => self.subset(3),
        }
    }
}

fn interior_vertices(g: &EmbeddedGraph) -> Vec<Vertex> {
    let outer = g.outer_vertices();
    g.vertex_list().into_iter().filter(|v| !outer.contains(v)).collect()
}

/// Gives every vertex without a list one: boundary lists of size at least
/// three, interior lists of size five.
fn fill(g: &EmbeddedGraph, lists: &mut ListAssignment, base: Option<ColorSet>, sampler: &mut Sampler) {
    let outer = g.outer_vertices();
    for v in g.vertex_list() {
        if lists.has(v) {
            continue;
        }
        let l = if outer.contains(&v) { sampler.boundary(base) } else { sampler.interior() };
        lists.set(v, l);
    }
}

fn subsets_at_least(palette: u32, k: usize) -> Vec<ColorSet> {
    (0u64..1 << palette).map(ColorSet::from_bits).filter(|s| s.len() >= k).collect()
}

struct Builder<'a> {
    target: Target,
    source: char,
    index: usize,
    graph: &'a EmbeddedGraph,
    out: Vec<Instance>,
}

impl Builder<'_> {
    fn push(&mut self, s: SDesignation, lists: ListAssignment, expect_invalid: Option<&'static str>) {
        let id = format!("{}-{}{:05}-{:04}", self.target.name(), self.source, self.index, self.out.len());
        self.out.push(Instance { id, target: self.target, graph: self.graph.clone(), s, lists, expect_invalid });
    }
}

/// Arcs of the outer cycle as `(path, u)` shapes meeting the structural
/// hypotheses, in a fixed order.
fn dem_two_shapes(g: &EmbeddedGraph, cycle: &[Vertex]) -> (Vec<(Vec<Vertex>, Vertex)>, Vec<(Vec<Vertex>, Vertex)>) {
    let m = cycle.len();
    let mut valid = Vec::new();
    let mut adjacent_internal = Vec::new();
    for start in 0..m {
        for k in 1..m {
            let path: Vec<Vertex> = (0..k).map(|j| cycle[(start + j) % m]).collect();
            for j in k..m {
                let u = cycle[(start + j) % m];
                let mut lists = ListAssignment::default();
                for &p in &path {
                    lists.set(p, ColorSet::from([0, 1]));
                }
                lists.set(u, ColorSet::from([0, 1]));
                match check_dem_two_parts(g, &path, &[u], &lists) {
                    Ok(()) => valid.push((path.clone(), u)),
                    Err(_) if k >= 3 && path[1..k - 1].iter().any(|&p| g.has_edge(u, p)) => {
                        adjacent_internal.push((path.clone(), u))
                    }
                    Err(_) => {}
                }
            }
        }
    }
    (valid, adjacent_internal)
}

fn dem_two(b: &mut Builder, cycle: &[Vertex], sampler: &mut Sampler, samples: usize, full: bool) {
    let g = b.graph;
    let (mut shapes, adjacent_internal) = dem_two_shapes(g, cycle);
    if !full {
        shapes.shuffle(&mut sampler.rng);
        shapes.truncate(1);
    }
    let interior = interior_vertices(g);
    for (path, u) in &shapes {
        let s = SDesignation { path: path.clone(), isolated: vec![*u] };
        let s_set = s.vertices();
        let free_outer = cycle.iter().filter(|v| !s_set.contains(v)).count();
        let pairs = subsets_at_least(sampler.palette, 2).into_iter().filter(|c| c.len() == 2).collect::<Vec<_>>();
        let total = pairs.len()
            * subsets_at_least(sampler.palette, 2).len()
            * subsets_at_least(sampler.palette, 3).len().pow(free_outer as u32)
            * subsets_at_least(sampler.palette, 5).len().pow(interior.len() as u32);
        if full && total <= EXHAUSTIVE_LIMIT {
            exhaustive_dem_two(b, &s, &interior, sampler.palette);
            continue;
        }
        for _ in 0..samples {
            let l0 = sampler.subset(2);
            let mut lists = ListAssignment::default();
            for &p in path {
                lists.set(p, l0);
            }
            let lu = sampler.pair_or_more(l0);
            lists.set(*u, lu);
            fill(g, &mut lists, Some(l0), sampler);
            b.push(s.clone(), lists, None);
        }
        if induced_cycle(g, &s_set).is_some_and(|c| c.len() % 2 == 1) {
            let l0 = sampler.subset(2);
            let mut lists = ListAssignment::default();
            for v in &s_set {
                lists.set(*v, l0);
            }
            fill(g, &mut lists, Some(l0), sampler);
            b.push(s.clone(), lists, None);
        }
    }
    if full {
        near_misses(b, &shapes, &adjacent_internal, &interior, sampler);
    }
}

fn exhaustive_dem_two(b: &mut Builder, s: &SDesignation, interior: &[Vertex], palette: u32) {
    let g = b.graph;
    let s_set = s.vertices();
    let pairs: Vec<ColorSet> = subsets_at_least(palette, 2).into_iter().filter(|c| c.len() == 2).collect();
    let mut slots: Vec<(Vec<Vertex>, Vec<ColorSet>)> = vec![
        (s.path.clone(), pairs),
        (s.isolated.clone(), subsets_at_least(palette, 2)),
    ];
    for v in g.vertex_list() {
        if s_set.contains(&v) {
            continue;
        }
        let k = if interior.contains(&v) { 5 } else { 3 };
        slots.push((vec![v], subsets_at_least(palette, k)));
    }
    let mut digits = vec![0usize; slots.len()];
    loop {
        let mut lists = ListAssignment::default();
        for ((vs, options), &d) in slots.iter().zip(&digits) {
            for &v in vs {
                lists.set(v, options[d]);
            }
        }
        b.push(s.clone(), lists, None);
        let mut i = 0;
        while i < slots.len() {
            digits[i] += 1;
            if digits[i] < slots[i].1.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == slots.len() {
            return;
        }
    }
}

/// Instances one change away from valid, tagged with the violation the
/// validators must report.
fn near_misses(
    b: &mut Builder,
    shapes: &[(Vec<Vertex>, Vertex)],
    adjacent_internal: &[(Vec<Vertex>, Vertex)],
    interior: &[Vertex],
    sampler: &mut Sampler,
) {
    let g = b.graph;
    let base = |sampler: &mut Sampler, path: &[Vertex], u: Vertex| {
        let l0 = sampler.subset(2);
        let mut lists = ListAssignment::default();
        for &p in path {
            lists.set(p, l0);
        }
        lists.set(u, sampler.subset(3));
        fill(g, &mut lists, Some(l0), sampler);
        (SDesignation { path: path.to_vec(), isolated: vec![u] }, lists, l0)
    };
    if let Some((path, u)) = shapes.iter().find(|(p, _)| p.len() >= 2) {
        let (s, mut lists, l0) = base(sampler, path, *u);
        let x = sampler.other_color(l0).expect("palette has at least three colours");
        lists.set(*path.last().unwrap(), ColorSet::from([l0.min().unwrap(), x]));
        b.push(s, lists, Some("MixedPLists"));
    }
    if let Some((path, u)) = shapes.first() {
        let (s, mut lists, l0) = base(sampler, path, *u);
        let x = sampler.other_color(l0).expect("palette has at least three colours");
        lists.set(path[0], l0.union(ColorSet::singleton(x)));
        b.push(s, lists, Some("PListNotPair"));

        let (s, mut lists, _) = base(sampler, path, *u);
        lists.set(*u, sampler.subset(1));
        b.push(s, lists, Some("UListTooSmall"));

        let s_set: BTreeSet<Vertex> = path.iter().copied().chain([*u]).collect();
        if let Some(&w) = g.outer_vertices().iter().find(|w| !s_set.contains(w)) {
            let (s, mut lists, _) = base(sampler, path, *u);
            lists.set(w, sampler.subset(2));
            b.push(s, lists, Some("BoundaryListTooSmall"));
        }
        if let Some(&w) = interior.first() {
            let (s, mut lists, _) = base(sampler, path, *u);
            lists.set(w, sampler.subset(4));
            b.push(s, lists, Some("InteriorListTooSmall"));

            let (mut s, lists, _) = base(sampler, path, *u);
            s.isolated = vec![w];
            let mut lists = lists;
            lists.set(w, sampler.subset(2));
            b.push(s, lists, Some("SNotOnBoundary"));
        }
    }
    if let Some((path, u)) = adjacent_internal.first() {
        let (s, lists, _) = base(sampler, path, *u);
        b.push(s, lists, Some("UAdjacentInternal"));
    }
}

fn two_twos(b: &mut Builder, cycle: &[Vertex], sampler: &mut Sampler, samples: usize, full: bool) {
    let mut shapes: Vec<(Vertex, Vertex)> =
        (0..cycle.len()).flat_map(|i| (i + 1..cycle.len()).map(move |j| (cycle[i], cycle[j]))).collect();
    if !full {
        shapes.shuffle(&mut sampler.rng);
        shapes.truncate(1);
    }
    for (v1, v2) in shapes {
        for _ in 0..samples {
            let l1 = sampler.subset(2);
            let l2 = if sampler.rng.gen_bool(0.5) { l1 } else { sampler.subset(2) };
            let mut lists = ListAssignment::default();
            lists.set(v1, l1);
            lists.set(v2, l2);
            fill(b.graph, &mut lists, Some(l1), sampler);
            b.push(SDesignation { path: vec![], isolated: vec![v1, v2] }, lists, None);
        }
    }
}

fn thom(b: &mut Builder, cycle: &[Vertex], sampler: &mut Sampler, samples: usize, full: bool) {
    let m = cycle.len();
    let mut shapes: Vec<(Vertex, Vertex)> = (0..m).map(|i| (cycle[i], cycle[(i + 1) % m])).collect();
    if !full {
        shapes.shuffle(&mut sampler.rng);
        shapes.truncate(1);
    }
    for (p1, p2) in shapes {
        for _ in 0..samples {
            let pair: Vec<u32> = sampler.subset(2).iter().collect();
            let mut lists = ListAssignment::default();
            lists.set(p1, ColorSet::singleton(pair[0]));
            lists.set(p2, ColorSet::singleton(pair[1]));
            fill(b.graph, &mut lists, Some(ColorSet::from([pair[0], pair[1]])), sampler);
            b.push(SDesignation::path(vec![p1, p2]), lists, None);
        }
    }
}

fn bad_colorings(b: &mut Builder, cycle: &[Vertex], sampler: &mut Sampler, samples: usize, full: bool) {
    let m = cycle.len();
    let mut shapes: Vec<[Vertex; 3]> = (0..m).map(|i| [cycle[(i + m - 1) % m], cycle[i], cycle[(i + 1) % m]]).collect();
    if !full {
        shapes.shuffle(&mut sampler.rng);
        shapes.truncate(1);
    }
    let small = ColorSet::palette(3);
    for path in shapes {
        let s = SDesignation::path(path.to_vec());
        for _ in 0..samples {
            let mut lists = ListAssignment::default();
            for &p in &path {
                let k = sampler.rng.gen_range(2..=3);
                lists.set(p, sampler.subset(k));
            }
            let base = sampler.subset(2);
            fill(b.graph, &mut lists, Some(base), sampler);
            b.push(s.clone(), lists, None);
        }
        // a colour forced on the middle vertex propagates along a fan
        let mut lists = ListAssignment::default();
        lists.set(path[1], ColorSet::singleton(0));
        lists.set(path[0], ColorSet::from([1, 2]));
        lists.set(path[2], ColorSet::from([1, 2]));
        for v in b.graph.outer_vertices() {
            if !lists.has(v) {
                lists.set(v, small);
            }
        }
        fill(b.graph, &mut lists, None, sampler);
        b.push(s, lists, None);
    }
}

/// Instances for `target` on every corpus graph, in a deterministic order.
/// Enumerated graphs get every shape; random graphs get one.
pub fn generate_instance_suite(spec: &CorpusSpec, target: Target) -> Result<Vec<Instance>, HarnessError> {
    let mut out = Vec::new();
    for (source, index, graph) in corpus_graphs(spec)? {
        let has_interior = !interior_vertices(&graph).is_empty();
        if has_interior && spec.palette_size < 5 {
            continue;
        }
        let cycle = graph.outer_cycle()?;
        let seed = mix(spec.seed, &[u64::from(source as u8), index as u64, target as u64]);
        let mut sampler = Sampler { rng: ChaCha8Rng::seed_from_u64(seed), palette: spec.palette_size };
        let mut b = Builder { target, source, index, graph: &graph, out: Vec::new() };
        let full = source == 'e';
        let samples = if full { spec.samples_per_shape } else { 1 };
        match target {
            Target::DemTwo => dem_two(&mut b, &cycle, &mut sampler, samples, full),
            Target::TwoTwos => two_twos(&mut b, &cycle, &mut sampler, samples, full),
            Target::Thom => thom(&mut b, &cycle, &mut sampler, samples, full),
            Target::BadColorings => bad_colorings(&mut b, &cycle, &mut sampler, samples, full),
        }
        out.extend(b.out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canvas::{validate_canvas, validate_dem_two};

    fn small_spec() -> CorpusSpec {
        CorpusSpec { max_vertices: 5, random_instances: 20, random_max_vertices: 9, ..CorpusSpec::default() }
    }

    #[test]
    fn suite_is_deterministic() {
        let spec = small_spec();
        let a = generate_instance_suite(&spec, Target::DemTwo).unwrap();
        let b = generate_instance_suite(&spec, Target::DemTwo).unwrap();
        assert_eq!(a, b);
        let other = generate_instance_suite(&CorpusSpec { seed: 1, ..spec }, Target::DemTwo).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn ids_are_unique() {
        let suite = generate_instance_suite(&small_spec(), Target::TwoTwos).unwrap();
        let ids: BTreeSet<&str> = suite.iter().map(|i| i.id.as_str()).collect();
        assert_eq!(ids.len(), suite.len());
    }

    #[test]
    fn valid_dem_two_instances_validate_and_near_misses_fail_as_tagged() {
        let suite = generate_instance_suite(&small_spec(), Target::DemTwo).unwrap();
        let mut kinds = BTreeSet::new();
        for inst in &suite {
            let result = validate_canvas(&inst.graph, &inst.s, &inst.lists)
                .map_err(|v| v.kind())
                .and_then(|c| validate_dem_two(&c).map_err(|v| v.kind()));
            match inst.expect_invalid {
                None => assert!(result.is_ok(), "{}: {result:?}", inst.id),
                Some(kind) => {
                    assert_eq!(result.err(), Some(kind), "{}", inst.id);
                    kinds.insert(kind);
                }
            }
        }
        for k in ["MixedPLists", "PListNotPair", "UListTooSmall", "UAdjacentInternal", "InteriorListTooSmall"] {
            assert!(kinds.contains(k), "no near miss of kind {k}");
        }
    }

    #[test]
    fn odd_cycles_with_one_pair_give_exceptions() {
        let spec = CorpusSpec {
            max_vertices: 5,
            families: BTreeSet::from([Family::Cycles]),
            ..CorpusSpec::default()
        };
        let suite = generate_instance_suite(&spec, Target::DemTwo).unwrap();
        assert!(suite.iter().any(|i| {
            i.graph.vertex_count() == 5
                && i.s.vertices().len() == 5
                && i.s.vertices().iter().all(|&v| i.lists.get(v) == i.lists.get(i.s.path[0]))
        }));
    }

    #[test]
    fn triangle_with_three_colours_is_exhaustive() {
        let spec = CorpusSpec {
            max_vertices: 3,
            palette_size: 3,
            families: BTreeSet::from([Family::Cycles]),
            ..CorpusSpec::default()
        };
        let suite = generate_instance_suite(&spec, Target::DemTwo).unwrap();
        let valid: Vec<_> = suite.iter().filter(|i| i.expect_invalid.is_none()).collect();
        // 6 shapes with a one-vertex path and 3 with two; each has 3 pairs
        // for the path, 4 lists for u and 1 for a third vertex
        assert_eq!(valid.len(), 9 * 12);
    }

    #[test]
    fn other_targets_validate() {
        let spec = small_spec();
        for target in [Target::TwoTwos, Target::Thom, Target::BadColorings] {
            for inst in generate_instance_suite(&spec, target).unwrap() {
                assert!(validate_canvas(&inst.graph, &inst.s, &inst.lists).is_ok(), "{}", inst.id);
            }
        }
    }
}
