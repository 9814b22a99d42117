use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn casecenter(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casecenter"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// A 155-case synthetic pattern and a landmark file in a fresh directory.
fn workspace() -> tempfile::TempDir {
    let tmp = tempfile::tempdir().unwrap();
    let o = casecenter(
        tmp.path(),
        &["synth", "--origin-e", "238000", "--origin-n", "3391000", "--sigma", "2000", "--seed", "5", "--out", "s"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    fs::write(
        tmp.path().join("landmarks.csv"),
        "name,easting,northing,zone\nMarket,239500,3392500,50N\nCDC,236000,3390000,50N\n",
    )
    .unwrap();
    tmp
}

fn read(dir: &Path, file: &str) -> String {
    fs::read_to_string(dir.join(file)).unwrap()
}

#[test]
fn project_reports_zone_and_keeps_row_count() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("geo.csv"), "id,lat,lon,onset\n1,30.62,114.26,2019-12-10\n2,30.60,114.30,2019-12-12\n# note\n3,30.58,114.25,\n").unwrap();
    let o = casecenter(tmp.path(), &["project", "--cases", "geo.csv", "--seed", "1", "--out", "p"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("zone 50N: 3 cases"));
    let planar = read(&tmp.path().join("p"), "cases_utm.csv");
    assert_eq!(planar.lines().count(), 4);
    assert!(planar.contains("1,237342.97"));

    // planar input passes through unchanged
    let o = casecenter(tmp.path(), &["project", "--cases", "p/cases_utm.csv", "--seed", "1", "--out", "q"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(read(&tmp.path().join("q"), "cases_utm.csv"), planar);
}

#[test]
fn malformed_row_exits_2_with_line_number() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("bad.csv"), "id,lat,lon\n1,30.6,114.2\n2,north,114.3\n").unwrap();
    let o = casecenter(tmp.path(), &["project", "--cases", "bad.csv", "--seed", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("bad.csv:3"), "{}", stderr(&o));
}

#[test]
fn missing_landmark_exits_2() {
    let tmp = workspace();
    let o = casecenter(
        tmp.path(),
        &["table1", "--cases", "s/synth_cases.csv", "--landmarks", "landmarks.csv", "--landmark", "Wanda Plaza", "--m", "9", "--seed", "1"],
    );
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("Wanda Plaza"));
}

#[test]
fn full_sample_without_replacement_is_all_dashes() {
    let tmp = workspace();
    let args = ["--cases", "s/synth_cases.csv", "--landmarks", "landmarks.csv", "--n", "155", "--sampling", "without", "--m", "9", "--seed", "1"];
    let mut t1 = vec!["table1"];
    t1.extend(args);
    t1.extend(["--out", "t"]);
    let o = casecenter(tmp.path(), &t1);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let table = read(&tmp.path().join("t"), "table1.txt");
    let cells: Vec<&str> = table.lines().skip(3).map(|l| l.split_whitespace().last().unwrap()).collect();
    assert_eq!(cells, ["--", "--"]);

    // a single test has nothing to report: exit 4
    let mut tc = vec!["test-center"];
    tc.extend(args);
    let o = casecenter(tmp.path(), &tc);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
    assert!(stderr(&o).contains("n = N without replacement"));
}

#[test]
fn landmark_at_the_centroid_is_never_rejected() {
    let tmp = workspace();
    let o = casecenter(tmp.path(), &["centers", "--cases", "s/synth_cases.csv", "--estimator", "centroid", "--seed", "1", "--out", "c"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let centers = read(&tmp.path().join("c"), "centers.csv");
    let row: Vec<&str> = centers.lines().nth(1).unwrap().split(',').collect();
    fs::write(tmp.path().join("here.csv"), format!("name,easting,northing,zone\nHere,{},{},50N\n", row[1], row[2])).unwrap();
    let o = casecenter(
        tmp.path(),
        &["table1", "--cases", "s/synth_cases.csv", "--landmarks", "here.csv", "--landmark", "Here", "--estimator", "centroid", "--m", "99", "--seed", "2", "--out", "t"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = read(&tmp.path().join("t"), "table1.csv");
    for line in csv.lines().skip(1) {
        let p = line.split(',').nth(7).unwrap();
        assert!(p == "--" || p == "1", "{line}");
    }
}

#[test]
fn figures_are_deterministic_and_m1_gives_single_point_clouds() {
    let tmp = workspace();
    let run = |out: &str, threads: &str| {
        let o = casecenter(
            tmp.path(),
            &["figures", "--cases", "s/synth_cases.csv", "--landmarks", "landmarks.csv", "--n", "100", "--m", "1", "--seed", "9", "--threads", threads, "--out", out, "--format", "svg"],
        );
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    };
    run("a", "1");
    run("b", "4");
    let svg = read(&tmp.path().join("a"), "figure_with_n100.svg");
    assert_eq!(svg, read(&tmp.path().join("b"), "figure_with_n100.svg"));
    let cloud = svg.split("id=\"cloud-centroid\"").nth(1).unwrap().split("</g>").next().unwrap();
    assert_eq!(cloud.matches("<circle").count(), 1);
}

#[test]
fn smaller_resamples_give_wider_clouds() {
    let tmp = workspace();
    let o = casecenter(
        tmp.path(),
        &["ellipse", "--cases", "s/synth_cases.csv", "--n", "150,50", "--sampling", "without", "--estimator", "centroid", "--m", "299", "--seed", "3", "--out", "e", "--format", "json"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows: serde_json::Value = serde_json::from_str(&read(&tmp.path().join("e"), "ellipses.json")).unwrap();
    let spread = |i: usize| rows[i]["spread"].as_f64().unwrap();
    assert_eq!(rows[0]["n"], 150);
    assert!(spread(1) > 2.0 * spread(0));
}

#[test]
fn generated_seed_is_recorded_and_replays() {
    let tmp = workspace();
    let o = casecenter(tmp.path(), &["flaw-demo", "--trials", "5", "--r", "19", "--out", "f"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let manifest: serde_json::Value = serde_json::from_str(&read(&tmp.path().join("f"), "manifest.json")).unwrap();
    let seed = manifest["seed"].as_u64().expect("seed recorded");
    assert_eq!(manifest["command"]["flaw-demo"]["seed"].as_u64(), Some(seed));
    assert!(manifest.get("threads").is_none());
    let o = casecenter(tmp.path(), &["replay", "f/manifest.json", "--threads", "3", "--out", "g"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(read(&tmp.path().join("f"), "flaw_demo.csv"), read(&tmp.path().join("g"), "flaw_demo.csv"));
    assert_eq!(read(&tmp.path().join("f"), "manifest.json"), read(&tmp.path().join("g"), "manifest.json"));
}

#[test]
fn replay_refuses_changed_inputs() {
    let tmp = workspace();
    let o = casecenter(tmp.path(), &["centers", "--cases", "s/synth_cases.csv", "--seed", "1", "--out", "c"]);
    assert_eq!(code(&o), 0);
    fs::write(tmp.path().join("s/synth_cases.csv"), "id,easting,northing,zone\n1,1,1,50N\n").unwrap();
    let o = casecenter(tmp.path(), &["replay", "c/manifest.json", "--out", "d"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("changed"));
}

#[test]
fn proximity_output_is_labelled_replicated_flawed() {
    let tmp = workspace();
    assert_eq!(code(&casecenter(tmp.path(), &["density-fixture", "--cells", "30", "--out", "city"])), 0);
    let o = casecenter(
        tmp.path(),
        &["test-proximity", "--cases", "s/synth_cases.csv", "--landmarks", "landmarks.csv", "--density", "city/density.txt", "--r", "49", "--seed", "1", "--out", "p"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("[replicated-flawed]"));
    assert!(read(&tmp.path().join("p"), "proximity_summary.csv").contains("replicated-flawed,median,Market"));
}

#[test]
fn unwritable_output_exits_3() {
    let tmp = workspace();
    fs::write(tmp.path().join("blocker"), "").unwrap();
    let o = casecenter(tmp.path(), &["centers", "--cases", "s/synth_cases.csv", "--seed", "1", "--out", "blocker/sub"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}
