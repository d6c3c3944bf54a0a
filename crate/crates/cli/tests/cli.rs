use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use commdet_core::io::sha256_file;

fn commdet(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commdet"))
        .args(args)
        .current_dir(cwd)
        .env_remove("COMMDET_DATA_DIR")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Two triangles joined by a bridge, plus a pinned manifest and ground truth.
fn fixture(dir: &Path) -> PathBuf {
    fs::write(dir.join("barbell.txt"), "a b\nb c\nc a\nc d\nd e\ne f\nf d\n").unwrap();
    fs::write(dir.join("barbell.truth"), "a 0\nb 0\nc 0\nd 1\ne 1\nf 1\n").unwrap();
    let sha = |f: &str| sha256_file(&dir.join(f)).unwrap();
    let manifest = format!(
        "[[dataset]]\nname = \"barbell\"\npath = \"barbell.txt\"\nformat = \"edgelist\"\n\
         ground_truth = \"barbell.truth\"\nground_truth_sha256 = \"{}\"\nsha256 = \"{}\"\n",
        sha("barbell.truth"),
        sha("barbell.txt")
    );
    let path = dir.join("datasets.toml");
    fs::write(&path, manifest).unwrap();
    path
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("suite.toml");
    fs::write(&path, format!("manifest = \"datasets.toml\"\n\n{body}")).unwrap();
    path
}

const TWO_SPECS: &str =
    "[[experiment]]\ndataset = \"barbell\"\nmethod = \"rms\"\nk = 2\nmetrics = [\"nmi\", \"modularity\"]\n\n\
                         [[experiment]]\ndataset = \"barbell\"\nmethod = \"louvain\"\nseeds = \"0..2\"\n";

#[test]
fn suite_with_valid_specs_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    fixture(dir.path());
    write_config(dir.path(), TWO_SPECS);
    let out = commdet(
        &["suite", "suite.toml", "--output", "r.csv", "--no-runtime"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert!(
        csv.starts_with("dataset,method,params,metric,value,communities,runtime_ms\n"),
        "{csv}"
    );
    assert!(csv.contains("barbell,rms,k=2,nmi,1.0,2.0,"), "{csv}");
    assert!(csv.lines().any(|l| l.starts_with("barbell,louvain,\"mean:")), "{csv}");
}

#[test]
fn suite_output_is_reproducible_without_runtime() {
    let dir = tempfile::tempdir().unwrap();
    fixture(dir.path());
    write_config(dir.path(), TWO_SPECS);
    for (out, fmt) in [
        ("a.json", "json"),
        ("b.json", "json"),
        ("a.csv", "csv"),
        ("b.csv", "csv"),
    ] {
        let o = commdet(
            &[
                "suite",
                "suite.toml",
                "--output",
                out,
                "--output-format",
                fmt,
                "--no-runtime",
            ],
            dir.path(),
        );
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let read = |f: &str| fs::read(dir.path().join(f)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
    assert_eq!(read("a.csv"), read("b.csv"));
}

#[test]
fn unknown_method_names_the_spec() {
    let dir = tempfile::tempdir().unwrap();
    fixture(dir.path());
    write_config(
        dir.path(),
        "[[experiment]]\ndataset = \"barbell\"\nmethod = \"magic\"\n",
    );
    let out = commdet(&["suite", "suite.toml"], dir.path());
    assert!(!out.status.success());
    let err = stderr(&out);
    assert!(err.contains("barbell/magic"), "{err}");
}

#[test]
fn empty_config_fails() {
    let dir = tempfile::tempdir().unwrap();
    fixture(dir.path());
    write_config(dir.path(), "");
    let out = commdet(&["suite", "suite.toml"], dir.path());
    assert!(!out.status.success());
    assert!(stderr(&out).contains("no [[experiment]]"), "{}", stderr(&out));
}

#[test]
fn missing_dataset_is_a_runtime_failure() {
    let dir = tempfile::tempdir().unwrap();
    fixture(dir.path());
    write_config(
        dir.path(),
        &format!("{TWO_SPECS}\n[[experiment]]\ndataset = \"absent\"\nmethod = \"girvan-newman\"\n"),
    );
    let out = commdet(&["suite", "suite.toml", "--no-runtime"], dir.path());
    // the good experiments still report, the run as a whole fails
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    assert!(stdout(&out).contains("louvain"));
    assert!(stderr(&out).contains("absent"), "{}", stderr(&out));
}

#[test]
fn cluster_reports_and_writes_assignment() {
    let dir = tempfile::tempdir().unwrap();
    fixture(dir.path());
    let args = [
        "cluster",
        "--input",
        "barbell.txt",
        "--format",
        "edgelist",
        "--method",
        "rms",
        "--k",
        "2",
        "--ground-truth",
        "barbell.truth",
        "--output",
        "assign.txt",
    ];
    let out = commdet(&args, dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("communities: 2"), "{text}");
    assert!(text.contains("nmi: 1.000000"), "{text}");
    let first = fs::read(dir.path().join("assign.txt")).unwrap();
    assert_eq!(String::from_utf8_lossy(&first), "a 0\nb 0\nc 0\nd 1\ne 1\nf 1\n");
    assert!(commdet(&args, dir.path()).status.success());
    assert_eq!(fs::read(dir.path().join("assign.txt")).unwrap(), first);
}

#[test]
fn cluster_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    fixture(dir.path());
    let base = ["cluster", "--input", "barbell.txt", "--format", "edgelist"];
    let run = |extra: &[&str]| {
        let args: Vec<&str> = base.iter().chain(extra).copied().collect();
        commdet(&args, dir.path())
    };

    let out = run(&["--method", "rms", "--k", "2", "--metric", "nmi"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--ground-truth"), "{}", stderr(&out));

    let out = run(&["--method", "bogus"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["--method", "louvain", "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`k`"), "{}", stderr(&out));

    let out = run(&["--method", "spectral", "--num-clusters", "99"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn datasets_lists_availability() {
    let dir = tempfile::tempdir().unwrap();
    fixture(dir.path());
    let out = commdet(&["datasets", "--manifest", "datasets.toml"], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("present"), "{}", stdout(&out));
}
