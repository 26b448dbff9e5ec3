use proptest::prelude::*;
use semigraph::gen;
use semigraph::oracle::{oracle_offsets, DenseGraph};
use semigraph::store::{
    convert_files, convert_reader, ConvertOptions, Graph, GraphIndex, Side, StoreError,
};

fn convert(text: &str, directed: bool, attr_bytes: u16) -> (Graph, DenseGraph) {
    let opts = ConvertOptions {
        directed,
        attr_bytes,
        ..Default::default()
    };
    let c = convert_reader(text.as_bytes(), &opts).unwrap();
    let g = Graph::from_bytes(c.graph_bytes, c.index).unwrap();
    (g, DenseGraph::parse(text, directed).unwrap())
}

fn check_against_oracle(g: &Graph, d: &DenseGraph, attr_bytes: u16) {
    assert_eq!(g.num_vertices() as usize, d.num_vertices());
    assert_eq!(g.header().num_edges, d.num_edges());
    let want = oracle_offsets(d, attr_bytes);
    for v in 0..d.num_vertices() as u32 {
        let (out, inn) = if d.is_directed() {
            (d.out(v).to_vec(), d.inn(v).to_vec())
        } else {
            (d.undirected(v), d.undirected(v))
        };
        assert_eq!(g.read_list(v, Side::Out).unwrap(), out, "out-list of {v}");
        assert_eq!(g.read_list(v, Side::In).unwrap(), inn, "in-list of {v}");
        let o = g.index().locate(v, Side::Out);
        let i = g.index().locate(v, Side::In);
        assert_eq!((o.offset, o.len), want.out_lists[v as usize]);
        assert_eq!((i.offset, i.len), want.in_lists[v as usize]);
    }
    g.check_offsets().unwrap();
}

#[test]
fn round_trip_on_generated_graphs() {
    for seed in 0..100u64 {
        let n = 100 + (seed as u32 * 97) % 2000;
        let m = u64::from(n) * (2 + seed % 12);
        let edges = if seed % 2 == 0 {
            gen::erdos_renyi(n, m, seed)
        } else {
            gen::power_law(n, m, 2.2, seed)
        };
        let text = gen::to_text(&edges);
        let directed = seed % 3 != 0;
        let attr = if seed % 5 == 0 { 4 } else { 0 };
        let (g, d) = convert(&text, directed, attr);
        check_against_oracle(&g, &d, attr);
    }
}

#[test]
fn hubs_overflow_the_degree_byte() {
    let edges = gen::with_hub(3000, 6000, 7, 2500, 3);
    let (g, d) = convert(&gen::to_text(&edges), true, 0);
    assert!(!g.index().large_degrees().is_empty());
    assert_eq!(g.index().degree(7, Side::Out) as usize, d.out(7).len());
    check_against_oracle(&g, &d, 0);
}

#[test]
fn index_survives_a_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.txt");
    std::fs::write(&input, gen::to_text(&gen::power_law(5000, 40_000, 2.1, 9))).unwrap();
    let (fgg, fgi) = (dir.path().join("g.fgg"), dir.path().join("g.fgi"));
    let summary = convert_files(&input, &fgg, &fgi, &ConvertOptions::default()).unwrap();
    let g = Graph::open(&fgg, &fgi).unwrap();
    assert_eq!(g.header().num_edges, summary.num_edges);
    let d = DenseGraph::parse(&std::fs::read_to_string(&input).unwrap(), true).unwrap();
    check_against_oracle(&g, &d, 0);

    // same input, same bytes
    let (fgg2, fgi2) = (dir.path().join("h.fgg"), dir.path().join("h.fgi"));
    convert_files(&input, &fgg2, &fgi2, &ConvertOptions::default()).unwrap();
    assert_eq!(std::fs::read(&fgg).unwrap(), std::fs::read(&fgg2).unwrap());
    assert_eq!(std::fs::read(&fgi).unwrap(), std::fs::read(&fgi2).unwrap());
}

#[test]
fn index_memory_stays_near_two_bytes_per_vertex() {
    let n = 200_000u32;
    let (g, _) = convert(
        &gen::to_text(&gen::erdos_renyi(n, u64::from(n) * 4, 1)),
        true,
        0,
    );
    let overflow = g.index().large_degrees().len() as f64;
    let bound = f64::from(n) * 2.5 + 12.0 * overflow + 4096.0;
    assert!(
        (g.index().memory_bytes() as f64) <= bound,
        "{} > {bound}",
        g.index().memory_bytes()
    );
}

#[test]
fn cleaning_rules() {
    let c = convert_reader(
        "# c\n0 1\n0 1\n1 1\n\n3 0\n".as_bytes(),
        &ConvertOptions::default(),
    )
    .unwrap();
    assert_eq!((c.summary.num_vertices, c.summary.num_edges), (4, 2));
    assert_eq!(
        (c.summary.self_loops_dropped, c.summary.duplicates_dropped),
        (1, 1)
    );
    let c = convert_reader(
        "0 1\n1 0\n".as_bytes(),
        &ConvertOptions {
            directed: false,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(c.summary.num_edges, 1);
}

#[test]
fn malformed_input_is_reported_with_its_line() {
    let opts = ConvertOptions::default();
    assert!(matches!(
        convert_reader("0 1\n0 x\n".as_bytes(), &opts),
        Err(StoreError::Parse { line: 2, .. })
    ));
    assert!(matches!(
        convert_reader("0\n".as_bytes(), &opts),
        Err(StoreError::Parse { line: 1, .. })
    ));
    assert!(matches!(
        convert_reader("0 4294967296\n".as_bytes(), &opts),
        Err(StoreError::IdOverflow {
            line: 1,
            value: 4294967296
        })
    ));
    assert!(matches!(
        convert_reader(
            "0 1\n".as_bytes(),
            &ConvertOptions {
                anchor_stride: 3,
                ..opts
            }
        ),
        Err(StoreError::InvalidStride(3))
    ));
    assert!(matches!(
        GraphIndex::read_from(&b"NOTANIDX"[..]),
        Err(StoreError::BadMagic { .. }) | Err(StoreError::Io(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn any_edge_list_round_trips(
        edges in prop::collection::vec((0u32..300, 0u32..300), 1..600),
        directed in any::<bool>(),
        stride_shift in 0u32..8,
    ) {
        let text = gen::to_text(&edges);
        let opts = ConvertOptions { directed, attr_bytes: 0, anchor_stride: 1 << stride_shift };
        let c = convert_reader(text.as_bytes(), &opts).unwrap();
        let mut raw = Vec::new();
        c.index.write_to(&mut raw).unwrap();
        let index = GraphIndex::read_from(raw.as_slice()).unwrap();
        let g = Graph::from_bytes(c.graph_bytes, index).unwrap();
        let d = DenseGraph::parse(&text, directed).unwrap();
        check_against_oracle(&g, &d, 0);
    }
}
