use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn causal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causal"))
        .args(args)
        .env_remove("CAUSAL_JOBS")
        .env_remove("CAUSAL_GOLDEN")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn corpus() -> TempDir {
    let dir = TempDir::new().unwrap();
    let o = causal(&["fixtures", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    dir
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn validate_reports_volume_and_genus() {
    let dir = corpus();
    let o = causal(&["validate", &path(&dir, "prism_sigma_t.cmplx")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "valid causal slice, V=12, genus 0\n");

    let o = causal(&["validate", &path(&dir, "prism_torus7.cmplx")]);
    assert_eq!(stdout(&o), "valid generalized causal slice, V=42, genus 1\n");
    let o = causal(&["validate", "--sphere", &path(&dir, "prism_torus7.cmplx")]);
    assert_eq!(o.status.code(), Some(1));

    let o = causal(&["validate", &path(&dir, "prism_boundary_4simplex.cmplx")]);
    assert_eq!(stdout(&o), "valid causal slice, V=20, D=4\n");
}

#[test]
fn obstructed_midsection_exits_with_1() {
    let dir = corpus();
    let o = causal(&["reconstruct", &path(&dir, "fig4.msec")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("ObstructionError: corners"));
    assert!(stderr(&o).contains("joined by red and blue paths"));
}

#[test]
fn malformed_input_exits_with_2() {
    let dir = corpus();
    let bad = path(&dir, "bad.cmplx");
    fs::write(&bad, "cmplx v1\ndim 3\nv 0 Q\n").unwrap();
    assert_eq!(causal(&["validate", &bad]).status.code(), Some(2));
    assert_eq!(causal(&["validate", &path(&dir, "missing")]).status.code(), Some(2));
    assert_eq!(causal(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn census_both_prints_matching_tables() {
    let o = causal(&["census", "--vmax", "12", "--strategy", "both", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let tables: Vec<&str> = text.split("\n\n").collect();
    assert_eq!(tables.len(), 2);
    assert!(tables[0].ends_with("12,1,direct,0"));
    assert_eq!(tables[0].replace("direct", "midsection"), tables[1].trim_end());
}

#[test]
fn census_cap_exits_with_3() {
    let o = causal(&["census", "--vmax", "13", "--max-nodes", "50"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn golden_tables_are_written_then_compared() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().to_str().unwrap();
    let args = ["census", "--vmax", "12", "--golden", g];
    assert!(stderr(&causal(&args)).contains("wrote golden"));
    assert!(stderr(&causal(&args)).contains("matches golden"));
    let file = dir.path().join("census_direct_g0_v12.csv");
    fs::write(&file, fs::read_to_string(&file).unwrap().replace("12,1", "12,2")).unwrap();
    assert_eq!(causal(&args).status.code(), Some(1));
}

#[test]
fn outputs_round_trip_byte_for_byte() {
    let dir = corpus();
    for name in ["prism_sigma_t.cmplx", "prism_torus7.cmplx", "lemma3_sigma_t.cmplx"] {
        let input = path(&dir, name);
        let msec = path(&dir, "tmp.msec");
        assert!(causal(&["midsection", &input, "-o", &msec]).status.success());
        let again = causal(&["midsection", &input]);
        assert_eq!(stdout(&again), fs::read_to_string(&msec).unwrap(), "midsection is deterministic");
        assert!(causal(&["reconstruct", &msec, "-o", &path(&dir, "back.cmplx")]).status.success());
        let cert = causal(&["roundtrip", &input]);
        assert!(cert.status.success());
        let record = stdout(&cert);
        let lines: Vec<&str> = record.lines().collect();
        assert_eq!(lines[0], "roundtrip v1");
        assert_eq!(lines[1][9..], lines[2][14..]);
        assert_eq!(lines[3], "verdict equal");
    }
    let msec = path(&dir, "prism_boundary_4simplex.msec");
    let sub = path(&dir, "sub.cmplx");
    assert!(causal(&["subdivide", &msec, "-o", &sub]).status.success());
    let o = causal(&["reassemble", &sub]);
    assert_eq!(stdout(&o), fs::read_to_string(&msec).unwrap());
}

#[test]
fn stacking_and_gluing_add_volumes() {
    let dir = corpus();
    let prism = path(&dir, "prism_sigma_t.cmplx");
    let lemma3 = path(&dir, "lemma3_sigma_t.cmplx");
    let stacked = path(&dir, "stack.cmplx");
    assert!(causal(&["stack", &prism, &lemma3, "-o", &stacked]).status.success());
    assert_eq!(stdout(&causal(&["validate", &stacked])), "valid causal triangulation, 2 slices, V=26\n");
    let glued = path(&dir, "glued.cmplx");
    assert!(causal(&["glue", &prism, &stacked, &prism, "-o", &glued]).status.success());
    assert_eq!(stdout(&causal(&["validate", &glued])), "valid causal triangulation, 4 slices, V=50\n");
}

#[test]
fn chi_reports_the_euler_identity() {
    let dir = corpus();
    let o = causal(&["chi", &path(&dir, "prism_torus7.cmplx")]);
    let text = stdout(&o);
    assert!(text.starts_with("quantity,value\nvolume,42\ncells,42\n"));
    assert!(text.contains("chi_dual_red,0\n"));
    assert!(text.contains("euler_identity,true\n"));
}

#[test]
fn beta_reads_counts_csv() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("counts.csv");
    fs::write(&input, "V,count\n1,1\n2,1\n3,1\n").unwrap();
    let o = causal(&["beta", "--input", input.to_str().unwrap(), "--v0", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "V,logN_over_V,running_inf\n2,0.000000,0.000000\n3,0.000000,0.000000\n4,0.000000,0.000000\n"
    );
}

#[test]
fn beta_from_tetrahedron_boundaries() {
    let dir = TempDir::new().unwrap();
    let counts = dir.path().join("fixed.csv");
    let o = causal(&["beta", "--slice-vmax", "12", "--vmax", "24", "--counts", counts.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("V,logN_over_V,running_inf\n24,0.000000,0.000000\n"));
    let table = fs::read_to_string(Path::new(&counts)).unwrap();
    assert!(table.contains("\n12,1,true\n"));
}
