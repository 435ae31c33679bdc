use std::process::{Command, Output};

use isodrum::catalog;
use isodrum::tiling::FamilyPair;

fn isodrum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isodrum")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn assert_error(o: &Output, code: &str) {
    assert!(!o.status.success());
    let err = stderr(o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with(&format!("error[{code}]: ")), "{err}");
}

#[test]
fn families_listing() {
    let o = isodrum(&["families"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 17);
    assert!(rows[0].starts_with("7_1 "));
    assert!(rows[16].starts_with("21_1 "));
    assert!(rows.iter().all(|r| r.ends_with("verified")));

    let one = stdout(&isodrum(&["families", "--family", "7_3"]));
    let rows: Vec<&str> = one.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].contains("(3,4)"));

    assert_error(&isodrum(&["families", "--family", "bogus"]), "E_UNKNOWN_FAMILY");
}

#[test]
fn transplant_reports() {
    let out = stdout(&isodrum(&["transplant", "--family", "7_1", "--convention", "neumann"]));
    assert!(out.contains("# dimension 2\n"));
    assert!(out.contains("# signature (3,4)\n"));
    assert!(out.contains("# nontrivial yes\n"));
    assert_eq!(out.matches("residual zero").count(), 2);
    assert!(out.contains("# T_k\nmatrix 7 7\n"));

    let out = stdout(&isodrum(&["transplant", "--family", "21_1"]));
    assert!(out.contains("# dimension 2\n") && out.contains("# signature (5,16)\n"));

    let out = stdout(&isodrum(&["transplant", "--family", "7_1", "--self-pair"]));
    assert!(out.contains("# nontrivial no\n"));
    assert!(out.contains("# warning: trivial pair"));
}

#[test]
fn transplant_matrices_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.txt");
    let o = isodrum(&["transplant", "--family", "7_2", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let ms = isodrum::exact::parse_matrices(&text).unwrap();
    assert_eq!(ms.len(), 4);
    assert!(ms.iter().all(|m| m.shape() == (7, 7)));
}

#[test]
fn build3d_summaries_and_meshes() {
    let out = stdout(&isodrum(&["build3d", "--family", "7_1", "--class", "A"]));
    assert!(out.contains("tiles 7\n"));
    assert!(out.contains("slit pairs 1\n"));
    assert!(out.contains("overlapping false\n"));
    assert_eq!(out.lines().filter(|l| l.starts_with("tile ")).count(), 7);

    let out = stdout(&isodrum(&["build3d", "--family", "7_3", "--class", "B", "--base", "wall"]));
    assert!(out.contains("tiles 7\n"));

    let dir = tempfile::tempdir().unwrap();
    let stl = dir.path().join("a.stl");
    let obj = dir.path().join("a.obj");
    assert!(isodrum(&["build3d", "--family", "7_1", "--out", stl.to_str().unwrap()]).status.success());
    assert!(isodrum(&["build3d", "--family", "7_1", "--out", obj.to_str().unwrap()]).status.success());
    let bytes = std::fs::read(&stl).unwrap();
    let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    assert_eq!(count, 16);
    assert_eq!(bytes.len(), 84 + 50 * count);
    let text = std::fs::read_to_string(&obj).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 16);

    let bad = dir.path().join("flat.tet");
    std::fs::write(&bad, "0 0 0\n1 0 0\n2 0 0\n0 0 1\n").unwrap();
    assert_error(&isodrum(&["build3d", "--family", "7_1", "--base", bad.to_str().unwrap()]), "E_GEOMETRY");
    let ply = dir.path().join("a.ply");
    assert_error(&isodrum(&["build3d", "--family", "7_1", "--out", ply.to_str().unwrap()]), "E_GEOMETRY");
}

#[test]
fn unfold2d_polygons() {
    let out = stdout(&isodrum(&["unfold2d", "--family", "7_3", "--class", "B"]));
    let tiles: Vec<&str> = out.lines().filter(|l| l.starts_with("tile ")).collect();
    assert_eq!(tiles.len(), 7);
    // three vertices per tile, two coordinates each
    assert!(tiles.iter().all(|l| l.split_whitespace().count() == 2 + 6));
    assert_error(&isodrum(&["unfold2d", "--family", "7_3", "--base", "simplex"]), "E_GEOMETRY");
}

#[test]
fn report_first_rows() {
    let out = stdout(&isodrum(&["report", "--table", "1", "--modes", "3"]));
    let rows: Vec<Vec<&str>> = out.lines().skip(2).take(3).map(|l| l.split_whitespace().collect()).collect();
    for (row, want) in rows.iter().zip([44.4718, 62.8210, 68.9764]) {
        for col in [1, 2] {
            let x: f64 = row[col].parse().unwrap();
            assert!((x - want).abs() <= 5e-5, "{row:?}");
        }
    }
    assert!(out.contains("max |lambda_A - lambda_B| = "));

    let csv = stdout(&isodrum(&["report", "--table", "2", "--modes", "1", "--format", "csv"]));
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert!((row[1].parse::<f64>().unwrap() - 44.9835).abs() <= 5e-5);
}

#[test]
fn compare_identical_sides_gives_zero_differences() {
    let fam = catalog::family("7_2").unwrap();
    let same = FamilyPair::new("7_2_self", fam.left.clone(), fam.left.clone()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("self.glue");
    std::fs::write(&path, same.to_gluing_text()).unwrap();
    let o = isodrum(&["compare", "--family", path.to_str().unwrap(), "--h", "0.1", "--modes", "6"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert_eq!(csv.lines().next(), Some("k,lambda_A,lambda_B,abs_diff"));
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",0.0000e0")));
}

#[test]
fn csv_is_byte_identical_across_runs() {
    let args = ["spectrum", "--family", "7_1", "--h", "0.0625", "--modes", "6", "--seed", "7"];
    let (a, b) = (isodrum(&args), isodrum(&args));
    assert!(a.status.success());
    assert!(stderr(&a).contains("block Krylov"));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn off_lattice_domains_warn() {
    let o = isodrum(&["spectrum", "--family", "7_3", "--base", "30-60-90", "--h", "0.1", "--modes", "2"]);
    assert!(o.status.success());
    assert!(stderr(&o).starts_with("warning: tile vertices do not lie on the h = 0.1 lattice"));
}

#[test]
fn errors_are_single_coded_lines() {
    let o = isodrum(&["report", "--table", "4"]);
    assert_error(&o, "E_USAGE");
    assert_eq!(o.status.code(), Some(2));
    assert_error(&isodrum(&["spectrum", "--family", "7_1", "--h", "-1"]), "E_USAGE");
    assert_error(&isodrum(&["spectrum", "--family", "7_1", "--modes", "0"]), "E_USAGE");
    assert_error(&isodrum(&["spectrum", "--family", "7_1", "--h", "0.5", "--modes", "5"]), "E_SPECTRA");
    assert_error(&isodrum(&["spectrum", "--family", "/nonexistent/x.glue"]), "E_UNKNOWN_FAMILY");
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.glue");
    std::fs::write(&bad, "family x\ntiles 2\n[left]\nred 0 0\n").unwrap();
    assert_error(&isodrum(&["transplant", "--family", bad.to_str().unwrap()]), "E_PARSE");
}

#[test]
fn overlapping_domains_are_refused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fan.glue");
    // seven equilateral triangles around one vertex
    let mut text = String::from("family fan\ntiles 7\n");
    for side in ["left", "right"] {
        text.push_str(&format!("[{side}]\n"));
        text.push_str("red 0 1\nred 2 3\nred 4 5\nred 6 -\n");
        text.push_str("blue 0 -\nblue 1 2\nblue 3 4\nblue 5 6\n");
        for t in 0..7 {
            text.push_str(&format!("black {t} -\n"));
        }
    }
    std::fs::write(&path, text).unwrap();
    let p = path.to_str().unwrap();
    let out = stdout(&isodrum(&["build3d", "--family", p, "--base", "equilateral"]));
    assert!(out.contains("overlapping true"));
    assert_error(&isodrum(&["spectrum", "--family", p, "--base", "equilateral", "--h", "0.1"]), "E_OVERLAP");
}
