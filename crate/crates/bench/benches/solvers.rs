use std::hint::black_box;

use canvas_color::canvas::{validate_canvas, validate_dem_two};
use canvas_color::demtwo::{derive_thom_via_two_twos, solve_dem_two, solve_two_twos};
use canvas_color::harness::generate::{enumerate_small_plane_graphs, generate_near_triangulation};
use canvas_color::oracle::{solve_exact, Coloring};
use canvas_color::thomassen::color_with_precolored_edge;
use canvas_color::{ColorSet, EmbeddedGraph, ListAssignment, SDesignation};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const SIZES: [usize; 4] = [8, 12, 16, 24];

/// Boundary vertices get three colours, interior ones five, shifted by
/// vertex id so neighbours rarely share a list.
fn lists_for(g: &EmbeddedGraph) -> ListAssignment {
    let outer = g.outer_vertices();
    g.vertex_set()
        .into_iter()
        .map(|v| {
            let k = if outer.contains(&v) { 3 } else { 5 };
            (v, (0..k).map(|i| (v + i) % 7).collect::<ColorSet>())
        })
        .collect()
}

fn fixture(n: usize) -> (EmbeddedGraph, ListAssignment, u32, u32) {
    let g = generate_near_triangulation(n, 42);
    let cycle = g.outer_cycle().unwrap();
    let lists = lists_for(&g);
    (g, lists, cycle[0], cycle[1])
}

fn boundary_edge(c: &mut Criterion) {
    let mut group = c.benchmark_group("precoloured_edge");
    for n in SIZES {
        let (g, mut lists, a, b) = fixture(n);
        let ca = lists.get(a).min().unwrap();
        lists.set(a, ColorSet::singleton(ca));
        lists.set(b, ColorSet::singleton(lists.get(b).without(ca).min().unwrap()));
        group.bench_with_input(BenchmarkId::new("recursion", n), &n, |bench, _| {
            bench.iter(|| color_with_precolored_edge(black_box(&g), a, b, black_box(&lists)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("two_lists_reduction", n), &n, |bench, _| {
            bench.iter(|| derive_thom_via_two_twos(black_box(&g), a, b, black_box(&lists)).unwrap())
        });
    }
    group.finish();
}

fn two_lists(c: &mut Criterion) {
    let mut group = c.benchmark_group("two_lists");
    for n in SIZES {
        let (g, mut lists, a, b) = fixture(n);
        lists.set(a, lists.get(a).smallest(2));
        lists.set(b, lists.get(b).smallest(2));
        group.bench_with_input(BenchmarkId::new("solver", n), &n, |bench, _| {
            bench.iter(|| solve_two_twos(black_box(&g), a, b, black_box(&lists)).unwrap())
        });
        if n <= 16 {
            group.bench_with_input(BenchmarkId::new("oracle", n), &n, |bench, _| {
                bench.iter(|| solve_exact(black_box(&g), black_box(&lists), &Coloring::new()))
            });
        }
    }
    group.finish();
}

fn path_plus_vertex(c: &mut Criterion) {
    let mut group = c.benchmark_group("path_plus_vertex");
    for n in SIZES {
        let (g, mut lists, a, _) = fixture(n);
        let cycle = g.outer_cycle().unwrap();
        let u = cycle[cycle.len() / 2];
        let l0 = lists.get(a).smallest(2);
        lists.set(a, l0);
        lists.set(u, l0);
        let canvas = validate_canvas(&g, &SDesignation { path: vec![a], isolated: vec![u] }, &lists).unwrap();
        let inst = validate_dem_two(&canvas).unwrap();
        group.bench_with_input(BenchmarkId::new("solver", n), &n, |bench, _| {
            bench.iter(|| solve_dem_two(black_box(&inst)).unwrap())
        });
    }
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    c.bench_function("enumerate_plane_graphs_7", |b| b.iter(|| enumerate_small_plane_graphs(black_box(7)).unwrap()));
}

criterion_group!(benches, boundary_edge, two_lists, path_plus_vertex, enumeration);
criterion_main!(benches);
