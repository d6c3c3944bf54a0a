use std::fs;

use commdet_core::io::{load_edge_list, load_gml, load_ground_truth, write_edge_list, Dataset};
use commdet_core::Error;

#[test]
fn edge_list_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("g.txt");
    fs::write(&src, "% header\nx y 2\ny z 0.25\n# tail\nz x 1\nx y 1\n").unwrap();
    let g = load_edge_list(&src, false, true).unwrap();
    assert_eq!(g.weight(0, 1), Some(3.0));

    // same bytes, same graph (ids included)
    assert_eq!(load_edge_list(&src, false, true).unwrap(), g);

    let out = dir.path().join("out.txt");
    write_edge_list(&g, &out).unwrap();
    assert_eq!(load_edge_list(&out, false, true).unwrap(), g);
}

#[test]
fn missing_file_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(
        load_edge_list(dir.path().join("nope"), false, false),
        Err(Error::Io { .. })
    ));
    assert!(matches!(load_gml(dir.path().join("nope.gml")), Err(Error::Io { .. })));
}

#[test]
fn ground_truth_only_nodes_join_as_isolated() {
    let dir = tempfile::tempdir().unwrap();
    let (gpath, tpath) = (dir.path().join("g.gml"), dir.path().join("truth.txt"));
    fs::write(
        &gpath,
        "graph [\n node [ id 1 label \"a\" ]\n node [ id 2 label \"b\" ]\n edge [ source 1 target 2 ]\n]\n",
    )
    .unwrap();
    fs::write(&tpath, "a\tb\nc\n").unwrap();
    let (g, embedded) = load_gml(&gpath).unwrap();
    assert!(embedded.is_none());
    let truth = load_ground_truth(&tpath).unwrap();
    let ds = Dataset::new("t", g, Some(&truth)).unwrap();
    assert_eq!(ds.graph.node_names(), &["a", "b", "c"]);
    assert_eq!(ds.ground_truth.unwrap().labels(), &[0, 0, 1]);
}
