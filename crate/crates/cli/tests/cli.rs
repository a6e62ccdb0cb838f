use std::path::Path;
use std::process::{Command, Output};

use depthkit_cli::dataset::parse_dataset;
use depthkit_cli::{eu27, ContourDocument, LoadOptions};
use proptest::prelude::*;

fn depthkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_depthkit"))
        .args(args)
        .env_remove("DEPTHKIT_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn assert_error(o: &Output, code: &str) {
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    let lines: Vec<&str> = err.lines().collect();
    assert_eq!(lines.len(), 1, "{err}");
    assert!(lines[0].starts_with(&format!("error: {code}: ")), "{err}");
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn depth_rows_follow_input_order() {
    let out = stdout(&depthkit(&["depth", "zonoid", "--data", "@eu27", "--all"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "label,depth");
    assert_eq!(lines.len(), 28);
    let labels: Vec<&str> = lines[1..].iter().map(|l| l.rsplit_once(',').unwrap().0).collect();
    let fixture = eu27();
    assert_eq!(labels, fixture.cloud.labels().unwrap());
    for l in &lines[1..] {
        let v = l.rsplit_once(',').unwrap().1;
        let digits = v.trim_start_matches(['0', '.']).replace('.', "");
        assert_eq!(digits.len(), 9, "{v}");
    }
}

#[test]
fn single_point_and_outlyingness() {
    let d: f64 = stdout(&depthkit(&["depth", "mahalanobis", "--data", "@eu27", "--point", "80.6,10.9"]))
        .trim()
        .parse()
        .unwrap();
    let o: f64 = stdout(&depthkit(&[
        "depth", "mahalanobis", "--data", "@eu27", "--point", "80.6,10.9", "--outlyingness",
    ]))
    .trim()
    .parse()
    .unwrap();
    assert!(d > 0.8);
    assert!((o - (1.0 / d - 1.0)).abs() < 1e-8);
}

#[test]
fn errors_are_single_lines() {
    assert_error(&depthkit(&["depth", "nosuch", "--data", "@eu27", "--all"]), "UNKNOWN_DEPTH");
    assert_error(&depthkit(&["depth", "l2", "--data", "/nonexistent.csv", "--all"]), "IO_ERROR");
    assert_error(&depthkit(&["depth", "l2", "--data", "@eu27"]), "USAGE_ERROR");
    assert_error(&depthkit(&["frobnicate"]), "USAGE_ERROR");
    assert_error(
        &depthkit(&["region", "zonoid", "--alpha-list", "0.5,1.5", "--data", "@eu27", "--svg", "/tmp/x.svg"]),
        "INVALID_ALPHA",
    );
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.csv", "Country,Debt,Unemployment\n");
    assert_error(&depthkit(&["depth", "l2", "--data", &empty, "--all"]), "EMPTY_DATASET");
    let bad = write(dir.path(), "bad.csv", "c,x,y\nA,1,2\nB,x,3\nC,2,1\nD,0,0\n");
    assert_error(&depthkit(&["depth", "l2", "--data", &bad, "--all"]), "PARSE_ERROR");
    let ok = depthkit(&["depth", "l2", "--data", &bad, "--all", "--skip-bad"]);
    assert_eq!(stdout(&ok).lines().count(), 4);
    assert!(String::from_utf8_lossy(&ok.stderr).contains("skipped row 3"));
    assert!(depthkit(&["--help"]).status.success());
}

#[test]
fn seed_from_environment_and_flag() {
    let args = ["depth", "random-tukey", "--data", "@eu27", "--all", "--directions", "3"];
    let run_env = |seed: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_depthkit"))
            .args(args)
            .env("DEPTHKIT_SEED", seed)
            .output()
            .unwrap();
        stdout(&o)
    };
    let mut with_flag = args.to_vec();
    with_flag.extend(["--seed", "5"]);
    assert_eq!(run_env("5"), stdout(&depthkit(&with_flag)));
    // the flag overrides the environment
    let o = Command::new(env!("CARGO_BIN_EXE_depthkit"))
        .args(&with_flag)
        .env("DEPTHKIT_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(stdout(&o), run_env("5"));
    let seeds: std::collections::HashSet<String> = (0..6).map(|s| run_env(&s.to_string())).collect();
    assert!(seeds.len() > 1);
}

#[test]
fn zonoid_figure_document() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("z.svg");
    let json = dir.path().join("z.json");
    let args = |svg: &Path| {
        vec![
            "region".to_string(),
            "zonoid".into(),
            "--alpha-list".into(),
            "0.1:0.1:0.9".into(),
            "--data".into(),
            "@eu27".into(),
            "--svg".into(),
            svg.to_string_lossy().into_owned(),
            "--json".into(),
            json.to_string_lossy().into_owned(),
        ]
    };
    let a: Vec<String> = args(&svg);
    let out = stdout(&depthkit(&a.iter().map(String::as_str).collect::<Vec<_>>()));
    assert_eq!(out.lines().count(), 10);
    let doc: ContourDocument = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc.layers.len(), 9);
    assert!(doc.layers.iter().all(|l| l.rings.len() == 1));
    assert_eq!(doc.points.len(), 27);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<polygon").count(), 9);
    assert_eq!(text.matches("<circle").count(), 27);

    let again = dir.path().join("z2.svg");
    let b: Vec<String> = args(&again);
    stdout(&depthkit(&b.iter().map(String::as_str).collect::<Vec<_>>()));
    assert_eq!(std::fs::read(&svg).unwrap(), std::fs::read(&again).unwrap());
    // no temporary files left behind
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 3);
}

#[test]
fn order_and_metric() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = eu27();
    let mean = fixture.cloud.mean();
    let mut narrow = String::from("x,y\n");
    for p in fixture.cloud.points() {
        narrow += &format!("{},{}\n", mean[0] + 0.5 * (p[0] - mean[0]), mean[1] + 0.5 * (p[1] - mean[1]));
    }
    let narrow = write(dir.path(), "narrow.csv", &narrow);
    let grid = "0.1:0.1:1";
    let leq = |a: &str, b: &str| {
        stdout(&depthkit(&["order", "zonoid", "--data1", a, "--data2", b, "--alpha-list", grid]))
            .trim()
            .to_string()
    };
    assert_eq!(leq(&narrow, "@eu27"), "true");
    assert_eq!(leq("@eu27", &narrow), "false");
    let dist = |a: &str, b: &str| -> f64 {
        stdout(&depthkit(&["metric", "zonoid", "--data1", a, "--data2", b, "--alpha-list", grid]))
            .trim()
            .parse()
            .unwrap()
    };
    assert_eq!(dist("@eu27", "@eu27"), 0.0);
    assert!(dist(&narrow, "@eu27") > 0.0);
    assert_error(
        &depthkit(&["order", "halfspace", "--data1", "@eu27", "--data2", "@eu27"]),
        "UNSUPPORTED",
    );
}

#[test]
fn functional_depths_of_curves() {
    let dir = tempfile::tempdir().unwrap();
    let curves = write(
        dir.path(),
        "c.csv",
        "t,low,mid,high,wild\n0,0,1,2,5\n0.5,0,1,2,-3\n1,0,1,2,1\n",
    );
    let out = stdout(&depthkit(&["fdepth", "graph", "--curves", &curves, "--base", "halfspace"]));
    let rows: Vec<(&str, f64)> = out
        .lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a, b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.iter().map(|r| r.0).collect::<Vec<_>>(), ["low", "mid", "high", "wild"]);
    // the middle curve is deepest at every argument value
    assert!(rows[1].1 >= rows.iter().map(|r| r.1).fold(0.0, f64::max));
    let out = stdout(&depthkit(&[
        "fdepth", "grid", "--curves", &curves, "--base", "zonoid", "--t", "0,2", "--directions", "20",
    ]));
    assert_eq!(out.lines().count(), 5);
    assert_error(
        &depthkit(&["fdepth", "graph", "--curves", &curves, "--base", "halfspace", "--t", ""]),
        "EMPTY_T",
    );
}

#[test]
fn postulate_report() {
    let out = stdout(&depthkit(&["check-postulates", "mahalanobis", "--data", "@eu27", "--trials", "10"]));
    assert!(out.lines().last().unwrap().starts_with("overall,pass"));
    let out = stdout(&depthkit(&[
        "check-postulates", "l2", "--data", "@eu27", "--trials", "10", "--variant", "affine",
    ]));
    assert!(out.lines().any(|l| l.starts_with("D2,fail")));
    assert!(out.lines().last().unwrap().starts_with("overall,fail"));
}

#[test]
fn canonical_csv_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "eu27.csv", &eu27().to_canonical_csv());
    let a = stdout(&depthkit(&["depth", "projection", "--data", &path, "--all"]));
    let b = stdout(&depthkit(&["depth", "projection", "--data", "@eu27", "--all"]));
    assert_eq!(a, b);
}

proptest! {
    #[test]
    fn canonical_csv_reproduces_the_cloud(
        rows in prop::collection::vec(prop::collection::vec(-1e12f64..1e12, 3), 1..20),
        labelled in any::<bool>(),
    ) {
        let mut text = String::from(if labelled { "name,a,b,c\n" } else { "a,b,c\n" });
        for (i, r) in rows.iter().enumerate() {
            if labelled {
                text += &format!("\"p, {i}\",");
            }
            text += &format!("{:?},{:?},{:?}\n", r[0], r[1], r[2]);
        }
        let d = parse_dataset(text.as_bytes(), &LoadOptions::default(), "t").unwrap();
        let again = parse_dataset(d.to_canonical_csv().as_bytes(), &LoadOptions::default(), "t").unwrap();
        prop_assert_eq!(&again.cloud, &d.cloud);
        prop_assert_eq!(again.columns, d.columns);
        prop_assert_eq!(d.cloud.labels().is_some(), labelled);
    }
}
