mod common;

use common::{max_abs_diff, random_case, Case};
use semigraph::algos::{self, upper_bound, PageRank};
use semigraph::engine::Schedule;
use semigraph::gen;
use semigraph::oracle::{
    oracle_bfs, oracle_brandes, oracle_pagerank_dense, oracle_scan_exhaustive, oracle_triangles,
    oracle_wcc_unionfind,
};

fn pr(iters: u32, threshold: f64) -> PageRank<f64> {
    PageRank {
        damping: 0.85,
        max_iters: iters,
        threshold,
    }
}

#[test]
fn bfs_small_cases() {
    let path = Case::new("0 1\n1 2\n", true);
    let out = algos::bfs(&path.roomy(1), 0).unwrap();
    assert_eq!(out.result, vec![Some(0), Some(1), Some(2)]);
    assert_eq!(out.iterations.len(), 3);
    let out = algos::bfs(&path.roomy(1), 2).unwrap();
    assert_eq!(out.result, vec![None, None, Some(0)]);
}

#[test]
fn bc_small_cases() {
    let path = Case::new("0 1\n1 2\n", true);
    assert_eq!(
        algos::betweenness::<f64>(&path.roomy(1), 0).unwrap().result,
        vec![0.0, 1.0, 0.0]
    );
    let isolated = Case::new("1 2\n2 3\n", true);
    assert_eq!(
        algos::betweenness::<f64>(&isolated.roomy(1), 0)
            .unwrap()
            .result,
        vec![0.0; 4]
    );
    let diamond = Case::new("0 1\n0 2\n1 3\n2 3\n3 4\n", false);
    let d = algos::betweenness::<f64>(&diamond.roomy(2), 0)
        .unwrap()
        .result;
    assert_eq!(d, oracle_brandes::<f64>(&diamond.dense, 0));
    let single = algos::betweenness::<f32>(&path.roomy(1), 0).unwrap().result;
    assert_eq!(single, vec![0.0f32, 1.0, 0.0]);
}

#[test]
fn pagerank_small_cases() {
    let pair = Case::new("0 1\n1 0\n", true);
    let r = algos::pagerank(&pair.roomy(1), pr(400, 0.0))
        .unwrap()
        .result;
    assert!(max_abs_diff(&r, &[1.0, 1.0]) < 1e-12, "{r:?}");
    let lone = Case::new("# nothing\n0 0\n", true);
    let r = algos::pagerank(&lone.roomy(1), PageRank::<f64>::default())
        .unwrap()
        .result;
    assert!((r[0] - 0.15).abs() < 1e-15);
}

#[test]
fn wcc_small_cases() {
    let two = Case::new("0 1\n2 3\n", true);
    assert_eq!(algos::wcc(&two.roomy(1)).unwrap().result, vec![0, 0, 2, 2]);
    let empty = Case::new("0 0\n2 2\n", true);
    assert_eq!(algos::wcc(&empty.roomy(1)).unwrap().result, vec![0, 1, 2]);
    let reversed = Case::new("3 2\n2 1\n1 0\n", true);
    assert_eq!(
        algos::wcc(&reversed.roomy(1)).unwrap().result,
        vec![0, 0, 0, 0]
    );
}

#[test]
fn tc_small_cases() {
    let tri = Case::new("0 1\n1 2\n2 0\n", true);
    let out = algos::triangle_count(&tri.roomy(1)).unwrap().result;
    assert_eq!((out.total, out.per_vertex), (1, vec![1, 1, 1]));
    let k4 = Case::new("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n", false);
    let out = algos::triangle_count(&k4.roomy(2)).unwrap().result;
    assert_eq!((out.total, out.per_vertex), (4, vec![3, 3, 3, 3]));
}

#[test]
fn ss_small_cases() {
    let star = Case::new("0 1\n0 2\n0 3\n0 4\n", false);
    let out = algos::scan_statistics(&star.roomy(1), true).unwrap().result;
    assert_eq!((out.max, out.argmax), (4, 0));
    let tri = Case::new("0 1\n1 2\n2 0\n", true);
    let out = algos::scan_statistics(&tri.roomy(1), false).unwrap().result;
    assert_eq!((out.max, out.argmax), (3, 0));
    assert_eq!(out.per_vertex, vec![Some(3); 3]);
}

#[test]
fn all_algorithms_match_oracles_on_random_graphs() {
    for seed in 0..6u64 {
        let case = random_case(seed, seed % 2 == 1, 1500, 6, seed % 3 != 0);
        let e = case.engine(2, 64);
        let g = &case.dense;
        assert_eq!(algos::bfs(&e, 0).unwrap().result, oracle_bfs(g, 0));
        let bc = algos::betweenness::<f64>(&e, 0).unwrap().result;
        assert!(max_abs_diff(&bc, &oracle_brandes(g, 0)) < 1e-9);
        let r = algos::pagerank(&e, pr(30, 0.0)).unwrap().result;
        assert!(max_abs_diff(&r, &oracle_pagerank_dense(g, 0.85, 30)) < 1e-6);
        assert_eq!(algos::wcc(&e).unwrap().result, oracle_wcc_unionfind(g));
        let tc = algos::triangle_count(&e).unwrap().result;
        let want = oracle_triangles(g);
        assert_eq!((tc.total, &tc.per_vertex), (want.total, &want.per_vertex));
        assert_eq!(tc.per_vertex.iter().sum::<u64>() % 3, 0);
        let ss = algos::scan_statistics(&e, true).unwrap().result;
        let want = oracle_scan_exhaustive(g);
        assert_eq!((ss.max, ss.argmax), (want.max, want.argmax), "seed {seed}");
        for (v, s) in ss.per_vertex.iter().enumerate() {
            if let Some(s) = s {
                assert_eq!(*s, want.per_vertex[v]);
            }
        }
    }
}

#[test]
fn bfs_and_pagerank_never_read_in_lists() {
    let case = random_case(11, false, 2000, 8, true);
    let e = case.engine(2, 64);
    let out = algos::bfs(&e, 0).unwrap();
    assert_eq!(out.io.in_bytes_requested, 0);
    assert!(out.io.out_bytes_requested > 0);
    let out = algos::pagerank(&e, PageRank::<f64>::default()).unwrap();
    assert_eq!(out.io.in_bytes_requested, 0);
    assert!(out.iterations.len() <= 30);
    let out = algos::wcc(&e).unwrap();
    assert!(out.io.in_bytes_requested > 0);
}

#[test]
fn pagerank_threshold_trades_accuracy_for_work() {
    let case = random_case(5, true, 2000, 8, true);
    let exact = algos::pagerank(&case.roomy(1), pr(30, 0.0)).unwrap();
    let loose = algos::pagerank(&case.roomy(1), pr(30, 1e-2)).unwrap();
    let runs =
        |o: &algos::AlgoOutput<Vec<f64>>| o.iterations.iter().map(|i| i.active_count).sum::<u64>();
    assert!(runs(&loose) < runs(&exact));
    assert!(loose.result.iter().all(|&r| r >= 0.15));
    let rel = loose
        .result
        .iter()
        .zip(&exact.result)
        .map(|(a, b)| (a - b).abs() / b)
        .fold(0.0, f64::max);
    assert!(rel < 0.2, "{rel}");
}

#[test]
fn results_do_not_depend_on_thread_count_or_stealing() {
    let case = random_case(21, true, 3000, 10, true);
    let base = case.engine(1, 64);
    let bfs = algos::bfs(&base, 3).unwrap().result;
    let bc = algos::betweenness::<f64>(&base, 3).unwrap().result;
    let r = algos::pagerank(&base, pr(30, 0.0)).unwrap().result;
    let wcc = algos::wcc(&base).unwrap().result;
    let tc = algos::triangle_count(&base).unwrap().result;
    let ss = algos::scan_statistics(&base, true).unwrap().result;
    for (threads, stealing) in [(2, true), (8, true), (8, false)] {
        let e = case.engine_with(|c| {
            c.num_threads = threads;
            c.work_stealing = stealing;
            c.cache = semigraph::pagecache::CacheConfig::with_capacity(64, 4096);
        });
        assert_eq!(algos::bfs(&e, 3).unwrap().result, bfs);
        assert_eq!(algos::betweenness::<f64>(&e, 3).unwrap().result, bc);
        assert!(max_abs_diff(&algos::pagerank(&e, pr(30, 0.0)).unwrap().result, &r) <= 1e-9);
        assert_eq!(algos::wcc(&e).unwrap().result, wcc);
        assert_eq!(algos::triangle_count(&e).unwrap().result, tc);
        let s = algos::scan_statistics(&e, true).unwrap().result;
        assert_eq!((s.max, s.argmax), (ss.max, ss.argmax));
    }
}

#[test]
fn wcc_labels_only_shrink_and_are_a_fixpoint() {
    let case = random_case(8, false, 2000, 3, false);
    let full = algos::wcc(&case.roomy(1)).unwrap();
    let mut prev: Option<Vec<u32>> = None;
    for k in 1..=full.iterations.len() as u32 {
        let e = case.engine_with(|c| c.max_iterations = Some(k));
        let labels = algos::wcc(&e).unwrap().result;
        assert!(labels.iter().enumerate().all(|(v, &l)| l as usize <= v));
        if let Some(p) = &prev {
            assert!(labels.iter().zip(p).all(|(a, b)| a <= b));
        }
        prev = Some(labels);
    }
    assert_eq!(prev.unwrap(), full.result);
    // the last iteration ran vertices that changed nothing
    let last = full.iterations.last().unwrap();
    assert!(last.active_count > 0);
}

#[test]
fn scan_pruning_is_sound() {
    for seed in 0..4 {
        let case = random_case(seed, true, 2000, 8, false);
        let want = oracle_scan_exhaustive(&case.dense);
        for v in 0..case.dense.num_vertices() as u32 {
            assert!(
                upper_bound(case.dense.undirected(v).len() as u64) >= want.per_vertex[v as usize]
            );
        }
        let e = case.engine(4, 64);
        let pruned = algos::scan_statistics(&e, true).unwrap().result;
        let full = algos::scan_statistics(&e, false).unwrap().result;
        assert_eq!((pruned.max, pruned.argmax), (full.max, full.argmax));
        assert_eq!((full.max, full.argmax), (want.max, want.argmax));
        assert!(pruned.per_vertex.iter().filter(|s| s.is_none()).count() > 0);
    }
}

#[test]
fn vertical_parts_keep_results_and_help_locality() {
    let edges = gen::clustered(20_000, 200, 8, 2_000, 4);
    let case = Case::new(&gen::to_text(&edges), false);
    let run = |parts: u32| {
        let e = case.engine_with(|c| {
            c.vertical_parts = parts;
            c.cache = semigraph::pagecache::CacheConfig::with_capacity(64, 4096);
        });
        (
            algos::scan_statistics(&e, false).unwrap(),
            algos::triangle_count(&e).unwrap().result,
        )
    };
    let (one, tc1) = run(1);
    let (four, tc4) = run(4);
    assert_eq!(
        (one.result.max, one.result.argmax),
        (four.result.max, four.result.argmax)
    );
    assert_eq!(one.result.per_vertex, four.result.per_vertex);
    assert_eq!(tc1, tc4);
    assert!(
        four.io.cache_hits >= one.io.cache_hits,
        "{} < {}",
        four.io.cache_hits,
        one.io.cache_hits
    );
}

#[test]
fn sorted_scan_issues_no_more_reads_than_random_order() {
    let case = random_case(2, false, 20_000, 8, true);
    let run = |schedule: Schedule| {
        let e = case.engine_with(|c| {
            c.schedule = schedule;
            c.num_threads = 1;
            c.max_running = 16;
            c.cache = semigraph::pagecache::CacheConfig::with_capacity(64, 4096);
        });
        let out = algos::wcc(&e).unwrap();
        (out.result, out.io.requests_issued_to_file)
    };
    let (a, sorted) = run(Schedule::Alternating);
    let (b, random) = run(Schedule::Random { seed: 9 });
    assert_eq!(a, b);
    assert!(sorted <= random, "{sorted} > {random}");
}
