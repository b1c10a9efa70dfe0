use std::collections::BTreeSet;

use canvas_color::canvas::{detect_exception, validate_canvas, validate_dem_two};
use canvas_color::demtwo::{derive_thom_via_two_twos, solve_dem_two, solve_two_twos, SolveOutcome};
use canvas_color::harness::check::{run_theorem_check_with_budget, CheckMode, Status};
use canvas_color::harness::generate::{generate_near_triangulation, polygon_with_chords, with_vertex_in_bounded_face};
use canvas_color::harness::instances::{generate_instance_suite, Target};
use canvas_color::harness::io::{read_json, write_json, CanvasFile};
use canvas_color::harness::{CorpusSpec, Family};
use canvas_color::oracle::{extract_critical, is_critical, solve_exact, verify, Coloring};
use canvas_color::thomassen::color_with_precolored_edge;
use canvas_color::{ColorSet, ListAssignment, SDesignation};
use proptest::prelude::*;

fn small() -> CorpusSpec {
    CorpusSpec { max_vertices: 6, random_instances: 50, random_max_vertices: 10, ..CorpusSpec::default() }
}

#[test]
fn instances_round_trip_through_files() {
    let dir = tempdir();
    for target in [Target::DemTwo, Target::TwoTwos, Target::Thom, Target::BadColorings] {
        for inst in generate_instance_suite(&small(), target).unwrap().iter().step_by(7) {
            let path = dir.join(format!("{}.canvas.json", inst.id));
            write_json(&path, &inst.to_file()).unwrap();
            let back: CanvasFile = read_json(&path).unwrap();
            let (g, s, lists) = back.parts().unwrap();
            assert_eq!(g, inst.graph, "{}", inst.id);
            assert_eq!(g.outer_vertices(), inst.graph.outer_vertices());
            assert_eq!(s, inst.s);
            assert_eq!(lists, inst.lists);
        }
    }
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("corpus-round-trip");
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn suites_serialize_identically_across_runs() {
    let render = || -> String {
        generate_instance_suite(&small(), Target::DemTwo)
            .unwrap()
            .iter()
            .map(|i| serde_json::to_string(&i.to_file()).unwrap())
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(render(), render());
}

#[test]
fn every_check_mode_agrees_on_a_small_corpus() {
    for mode in CheckMode::all() {
        let report = run_theorem_check_with_budget(&small(), mode, None).unwrap();
        assert!(report.ok(), "{mode}");
        assert!(report.records.iter().all(|r| r.status == Status::Agree), "{mode}");
        let ids: Vec<&str> = report.records.iter().map(|r| r.id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
    }
}

#[test]
fn tiny_budget_skips_rather_than_disagrees() {
    let spec = CorpusSpec { families: BTreeSet::from([Family::Cycles]), max_vertices: 4, ..small() };
    let report = run_theorem_check_with_budget(&spec, CheckMode::TwoTwos, Some(std::time::Duration::ZERO)).unwrap();
    assert_eq!(report.summary.disagreements, 0);
}

#[test]
fn decorated_exception_triangle_reduces_to_its_core() {
    // the all-{0,1} triangle 0 1 2, with a fan of extra vertices along 0 2
    let g = polygon_with_chords(5, &[(0, 2), (2, 4)]);
    let lists: ListAssignment = [
        (0, ColorSet::from([0, 1])),
        (1, ColorSet::from([0, 1])),
        (2, ColorSet::from([0, 1])),
        (3, ColorSet::from([0, 1, 2])),
        (4, ColorSet::from([0, 1, 2])),
    ]
    .into_iter()
    .collect();
    let s = SDesignation { path: vec![0, 1], isolated: vec![2] };
    let canvas = validate_canvas(&g, &s, &lists).unwrap();
    let inst = validate_dem_two(&canvas).unwrap();
    assert!(detect_exception(&inst).is_some());
    assert!(matches!(solve_dem_two(&inst).unwrap().outcome, SolveOutcome::Exception(_)));
    let core = extract_critical(&canvas).unwrap();
    assert_eq!(core.graph.vertex_set(), BTreeSet::from([0, 1, 2]));
    assert_eq!(core.graph.edge_count(), 3);
    assert!(is_critical(&core));
    assert_eq!(extract_critical(&core).unwrap(), core);
}

#[test]
fn stacked_vertex_inside_a_triangle_is_handled() {
    // K4 with a fifth vertex stacked into one inner face
    let t = polygon_with_chords(3, &[]);
    let k4 = with_vertex_in_bounded_face(&t, 0, 3);
    let g = with_vertex_in_bounded_face(&k4, 1, 4);
    let mut lists: ListAssignment = (0..5).map(|v| (v, ColorSet::palette(5))).collect();
    lists.set(0, ColorSet::from([0, 1]));
    lists.set(1, ColorSet::from([0, 1]));
    lists.set(2, ColorSet::from([0, 1, 2]));
    let sol = solve_two_twos(&g, 0, 1, &lists).unwrap();
    assert!(verify(&g, &lists, sol.coloring().unwrap()));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn random_graphs_are_two_connected_plane_graphs(n in 3usize..16, seed in any::<u64>()) {
        let g = generate_near_triangulation(n, seed);
        prop_assert_eq!(g.vertex_count(), n);
        prop_assert!(g.is_two_connected());
        prop_assert_eq!(g.vertex_count() + g.face_count(), g.edge_count() + 2);
        prop_assert_eq!(&g, &generate_near_triangulation(n, seed));
    }

    #[test]
    fn solvers_agree_with_the_oracle_on_random_graphs(
        n in 3usize..13,
        seed in any::<u64>(),
        pick in any::<prop::sample::Index>(),
        colors in prop::collection::vec(0u32..5, 40),
    ) {
        let g = generate_near_triangulation(n, seed);
        let cycle = g.outer_cycle().unwrap();
        let outer = g.outer_vertices();
        let i = pick.index(cycle.len());
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        // boundary lists drop up to two colours from the palette
        let mut lists = ListAssignment::default();
        for v in g.vertex_set() {
            let k = 2 * v as usize;
            let dropped = ColorSet::from([colors[k % 40], colors[(k + 1) % 40]]);
            let l = if outer.contains(&v) { ColorSet::palette(5).difference(dropped) } else { ColorSet::palette(5) };
            lists.set(v, l);
        }
        let mut two = lists.clone();
        two.set(a, two.get(a).smallest(2));
        let lb = two.get(b);
        two.set(b, lb.difference(lb.smallest(lb.len() - 2)));
        let sol = solve_two_twos(&g, a, b, &two).unwrap();
        prop_assert!(verify(&g, &two, sol.coloring().unwrap()));

        let ca = lists.get(a).min().unwrap();
        let cb = lists.get(b).without(ca).min().unwrap();
        let mut edge = lists.clone();
        edge.set(a, ColorSet::singleton(ca));
        edge.set(b, ColorSet::singleton(cb));
        let direct = color_with_precolored_edge(&g, a, b, &edge).unwrap();
        prop_assert!(verify(&g, &edge, &direct));
        let derived = derive_thom_via_two_twos(&g, a, b, &edge).unwrap();
        prop_assert!(verify(&g, &edge, derived.coloring().unwrap()));

        // a one-vertex path and the vertex opposite it
        let u = cycle[(i + cycle.len() / 2) % cycle.len()];
        if u != a {
            let mut dem = lists.clone();
            let l0 = lists.get(a).smallest(2);
            dem.set(a, l0);
            dem.set(u, l0);
            let canvas = validate_canvas(&g, &SDesignation { path: vec![a], isolated: vec![u] }, &dem).unwrap();
            let inst = validate_dem_two(&canvas).unwrap();
            let oracle = solve_exact(&g, &dem, &Coloring::new());
            match solve_dem_two(&inst).unwrap().outcome {
                SolveOutcome::Colored(c) => prop_assert!(verify(&g, &dem, &c)),
                SolveOutcome::Exception(_) => prop_assert!(oracle.is_none() && detect_exception(&inst).is_some()),
                SolveOutcome::Violation(v) => prop_assert!(false, "unexpected violation {}", v),
            }
        }
    }
}
