use std::path::PathBuf;
use std::process::{Command, Output};

use emd1d::expectation::m_value;
use emd1d::genfun::{histogram, n_poly};
use emd1d::graph::linspace;
use emd1d::numerics::ratio;
use emd1d::render::{parse_rational, render_decimal};
use num::{BigInt, BigUint};

fn emd1d(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emd1d")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = emd1d(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(str::to_string).collect();
    let rows = reader.records().map(|r| r.unwrap().iter().map(str::to_string).collect()).collect();
    (header, rows)
}

#[test]
fn pair_examples() {
    assert_eq!(stdout(&["pair", "--a", "0,19,8,2,1", "--b", "12,2,5,11,0"]), "26\n");
    assert_eq!(stdout(&["pair", "--a", "1,0", "--b", "0,1", "--unit", "--exact"]), "1\n");
    assert_eq!(stdout(&["pair", "--a", "2,0,0", "--b", "0,1,0", "--unit", "--digits", "2"]), "0.50\n");
}

#[test]
fn pair_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grades.csv");
    std::fs::write(
        &path,
        "id,division,course,year,g1,g2,g3,g4,g5\n1,English,101,2013,0,19,8,2,1\n2,English,102,2013,12,2,5,11,0\n",
    )
    .unwrap();
    let path = path.display().to_string();
    assert_eq!(stdout(&["pair", "--input", &path, "--id-a", "1", "--id-b", "2"]), "26\n");
    assert_eq!(
        stdout(&["pair", "--input", &path, "--id-a", "1", "--id-b", "2", "--unit", "--exact"]),
        "13/60\n"
    );
}

#[test]
fn mean_examples() {
    let exact = m_value(5, 5);
    assert_eq!(stdout(&["mean", "--p", "5", "--q", "5"]), format!("{}\n", render_decimal(&exact, 6)));
    assert_eq!(stdout(&["mean", "--p", "5", "--q", "5", "--digits", "3"]), "0.813\n");
    assert_eq!(stdout(&["mean", "--p", "2", "--q", "2", "--exact"]), "1/3\n");
    assert_eq!(stdout(&["mean", "--p", "2", "--q", "2", "--s", "1", "--exact"]), "1/2\n");
}

#[test]
fn mtable_tilde_row() {
    assert_eq!(
        stdout(&["mtable", "--nmax", "12", "--tilde"]),
        "0.3333 0.2667 0.2286 0.2032 0.1847 0.1705 0.1591 0.1498 0.1419 0.1351 0.1293\n"
    );
}

#[test]
fn mtable_csv_round_trip() {
    let (header, rows) = csv_rows(&stdout(&["mtable", "--nmax", "5", "--format", "csv", "--digits", "6"]));
    assert_eq!(header, ["p", "q", "value"]);
    assert_eq!(rows.len(), 25);
    for row in rows {
        let (p, q): (usize, usize) = (row[0].parse().unwrap(), row[1].parse().unwrap());
        assert_eq!(row[2], render_decimal(&m_value(p, q), 6));
        let back = parse_rational(&row[2]).unwrap();
        assert_eq!(render_decimal(&back, 6), row[2]);
    }
}

#[test]
fn hist_round_trip() {
    let (header, rows) = csv_rows(&stdout(&["hist", "--s", "30", "--n", "5"]));
    assert_eq!(header, ["value", "count"]);
    assert_eq!(rows.len(), 121);
    let counts: Vec<BigUint> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(counts.iter().sum::<BigUint>(), BigUint::from(46376u64 * 46376));
    assert_eq!(counts, histogram(30, 5).unwrap().counts);
    for (k, r) in rows.iter().enumerate() {
        assert_eq!(r[0], k.to_string());
    }
}

#[test]
fn polynomial_csv_round_trip() {
    let (header, rows) = csv_rows(&stdout(&["npoly", "--p", "4", "--q", "4"]));
    assert_eq!(header, ["degree", "coefficient"]);
    let coeffs: Vec<BigInt> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(coeffs, n_poly(4, 4).integer_coeffs().unwrap());
    assert_eq!(stdout(&["wpoly", "--p", "3", "--q", "3"]), "degree,coefficient\n0,1\n1,4\n2,1\n");
}

#[test]
fn sample_is_deterministic() {
    let args = ["sample", "--n", "3", "--trials", "20000", "--seed", "7"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let (header, rows) = csv_rows(&a);
    assert_eq!(header, ["n", "trials", "seed", "estimate", "std_error"]);
    let est: f64 = rows[0][3].parse().unwrap();
    let se: f64 = rows[0][4].parse().unwrap();
    assert!((est - 8.0 / 15.0).abs() < 5.0 * se);
    assert_ne!(a, stdout(&["sample", "--n", "3", "--trials", "20000", "--seed", "8"]));
}

#[test]
fn sweep_round_trip_and_plateau() {
    let (header, rows) = csv_rows(&stdout(&[
        "sweep", "--input", &data("two_clusters.csv"), "--tmin", "0", "--tmax", "0.3", "--steps", "31",
    ]));
    assert_eq!(header, ["threshold", "component_count"]);
    let expect = linspace(&ratio(0, 1), &ratio(3, 10), 31);
    let counts: Vec<usize> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    for (row, t) in rows.iter().zip(&expect) {
        assert_eq!(parse_rational(&row[0]).as_ref(), Some(t));
    }
    assert!(counts.windows(2).all(|w| w[0] >= w[1]));
    assert!(counts.iter().filter(|&&c| c == 2).count() >= 10);
}

#[test]
fn graph_report() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("edges.txt");
    let args = [
        "graph",
        "--input",
        &data("two_clusters.csv"),
        "--threshold",
        "0.1",
        "--edges",
        edges.to_str().unwrap(),
    ];
    let text = stdout(&args);
    assert_eq!(text, stdout(&args));
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["vertices"], 20);
    assert_eq!(json["component_count"], 2);
    assert_eq!(json["threshold"]["exact"], "1/10");
    assert_eq!(json["labels"][0], "SCI100");
    assert!(json["mean_distance"].is_null());
    assert_eq!(json["isoperimetric_number"]["exact"], "0");
    let spectrum = json["spectrum"].as_array().unwrap();
    assert_eq!(spectrum.len(), 20);
    let listed = std::fs::read_to_string(&edges).unwrap();
    assert_eq!(listed.lines().count(), json["edges"].as_array().unwrap().len());
}

#[test]
fn emg_outputs() {
    assert_eq!(stdout(&["emg", "--s", "1", "--n", "3"]), "0 1\n1 2\n");
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["emg", "--s", "2", "--n", "3", "--format", "json"])).unwrap();
    assert_eq!(json["vertices"], 6);
    assert_eq!(json["labels"][0], "(2,0,0)");
}

#[test]
fn exit_codes() {
    assert_eq!(emd1d(&["bogus"]).status.code(), Some(2));
    assert_eq!(emd1d(&["mean", "--p", "2"]).status.code(), Some(2));
    assert_eq!(emd1d(&["mean", "--p", "2", "--q", "2", "--digits", "0"]).status.code(), Some(2));
    assert_eq!(emd1d(&["pair", "--a", "1,2", "--b", "1,2,3"]).status.code(), Some(1));
    assert_eq!(emd1d(&["emg", "--s", "30", "--n", "8", "--cap", "10"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "id,division,course,year,g1,g2\n1,A,1,2013,3,4\n2,A,2,2013,-1,4\n").unwrap();
    let out = emd1d(&["sweep", "--input", bad.to_str().unwrap(), "--tmin", "0", "--tmax", "1", "--steps", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    let out = emd1d(&["graph", "--input", empty.to_str().unwrap(), "--threshold", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no records"));
}
