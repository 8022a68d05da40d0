use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use media_agenda::fixture::{generate_fixture, AgendaShift, FixtureSpec, GroundTruth, GROUND_TRUTH_FILE};
use media_agenda::pipeline::ReportBundle;
use media_agenda::report::{Manifest, MANIFEST_FILE, REPORT_FILE};
use media_agenda::{run_pipeline, PipelineConfig};

fn quick_spec() -> FixtureSpec {
    FixtureSpec {
        days: 60,
        articles_per_topic_day: 2.0,
        max_lag: 6,
        permutations: 200,
        resamples: 200,
        shift: Some(AgendaShift { outlet: 2, day: 30, topic: 4, factor: 2.5 }),
        ..FixtureSpec::default()
    }
}

fn write_fixture(dir: &Path, spec: &FixtureSpec) -> PathBuf {
    generate_fixture(7, spec).unwrap().write(dir).unwrap()
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_media-agenda")).args(args).output().unwrap()
}

fn ok(out: &Output) {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

fn report(dir: &Path) -> ReportBundle {
    serde_json::from_str(&std::fs::read_to_string(dir.join(REPORT_FILE)).unwrap()).unwrap()
}

#[test]
fn missing_polls_fail_validation_before_any_output() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_fixture(&tmp.path().join("fx"), &quick_spec());
    std::fs::remove_file(tmp.path().join("fx/polls.csv")).unwrap();
    let out_dir = tmp.path().join("out");
    let c = config.to_str().unwrap();

    let v = cli(&["validate", "--config", c]);
    assert!(!v.status.success());
    assert!(String::from_utf8_lossy(&v.stderr).contains("polls"));

    let r = cli(&["run", "--config", c, "--out", out_dir.to_str().unwrap()]);
    assert!(!r.status.success());
    assert!(!out_dir.exists());
}

#[test]
fn unknown_config_key_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_fixture(tmp.path(), &quick_spec());
    let text = std::fs::read_to_string(&config).unwrap();
    std::fs::write(&config, format!("windw_days = 3\n{text}")).unwrap();
    let v = cli(&["validate", "--config", config.to_str().unwrap()]);
    assert!(!v.status.success());
}

#[test]
fn subcommands_write_their_sections() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_fixture(&tmp.path().join("fx"), &quick_spec());
    let c = config.to_str().unwrap();
    ok(&cli(&["validate", "--config", c]));

    let cases: [(&str, bool, bool, bool, bool); 5] = [
        ("topics", true, false, false, false),
        ("sentiment", false, true, false, false),
        ("correlate", true, true, true, false),
        ("causality", true, false, false, true),
        ("run", true, true, true, true),
    ];
    for (cmd, topics, sentiment, correlate, causality) in cases {
        let out = tmp.path().join(cmd);
        ok(&cli(&[cmd, "--config", c, "--out", out.to_str().unwrap()]));
        let r = report(&out);
        assert_eq!(r.topic_model.is_some(), topics, "{cmd}");
        for o in &r.outlets {
            assert_eq!(o.coverage.is_some(), topics, "{cmd}");
            assert_eq!(o.sentiment.is_some(), sentiment, "{cmd}");
            assert_eq!(!o.correlations.is_empty(), correlate, "{cmd}");
            assert_eq!(o.granger.is_some(), causality, "{cmd}");
        }
        assert!(out.join(MANIFEST_FILE).exists());
        assert!(out.join("runtime.json").exists());
    }
}

#[test]
fn coverage_csv_has_a_date_column_and_one_column_per_topic() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_fixture(&tmp.path().join("fx"), &quick_spec());
    let out = tmp.path().join("out");
    ok(&cli(&["topics", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]));
    let text = std::fs::read_to_string(out.join("series/herald_coverage.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "date,topic_1,topic_2,topic_3,topic_4");
    assert_eq!(lines.count(), 60);
}

#[test]
fn flags_override_the_config() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_fixture(&tmp.path().join("fx"), &quick_spec());
    let out = tmp.path().join("out");
    ok(&cli(&[
        "causality",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--drop-topics",
        "2,4",
        "--max-lag",
        "3",
        "--window",
        "2",
        "--seed",
        "11",
    ]));
    let r = report(&out);
    assert_eq!(r.config.drop_topics, vec![2, 4]);
    assert_eq!((r.config.max_lag, r.config.window_days, r.config.seed), (3, 2, 11));
    let tm = r.topic_model.unwrap();
    assert_eq!(tm.dropped_topics, vec![2, 4]);
    let kept: Vec<usize> = tm.topics.iter().map(|t| t.topic_id).collect();
    assert_eq!(kept, vec![1, 3]);
    for o in &r.outlets {
        assert_eq!(o.coverage.as_ref().unwrap().topic_ids, vec![1, 3]);
        let g = o.granger.as_ref().unwrap();
        assert!(g.results.iter().all(|x| x.topic_id != 2 && x.topic_id != 4 && x.tau <= 3));
    }
}

#[test]
fn json_config_is_accepted() {
    let tmp = tempfile::tempdir().unwrap();
    let toml_path = write_fixture(tmp.path(), &quick_spec());
    let config = PipelineConfig::load(&toml_path).unwrap();
    let json_path = tmp.path().join("config.json");
    std::fs::write(&json_path, serde_json::to_string(&config).unwrap()).unwrap();
    let again = PipelineConfig::load(&json_path).unwrap();
    assert_eq!(config, again);
    ok(&cli(&["validate", "--config", json_path.to_str().unwrap()]));
}

#[test]
fn report_round_trips_and_manifest_matches_disk() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_fixture(&tmp.path().join("fx"), &quick_spec());
    let out = tmp.path().join("out");
    ok(&cli(&["run", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]));

    let text = std::fs::read_to_string(out.join(REPORT_FILE)).unwrap();
    let parsed: ReportBundle = serde_json::from_str(&text).unwrap();
    let again = media_agenda::report::report_json(&parsed).unwrap();
    assert_eq!(text, again);

    let manifest: Manifest =
        serde_json::from_str(&std::fs::read_to_string(out.join(MANIFEST_FILE)).unwrap()).unwrap();
    let mut on_disk: Vec<String> = walk(&out)
        .into_iter()
        .filter(|p| p != MANIFEST_FILE && p != "runtime.json")
        .collect();
    on_disk.sort();
    let listed: Vec<String> = manifest.files.iter().map(|f| f.path.clone()).collect();
    assert_eq!(listed, on_disk);
}

fn walk(root: &Path) -> Vec<String> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in std::fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(root).unwrap();
                out.push(rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/"));
            }
        }
    }
    out
}

#[test]
fn planted_negative_topic_sb_is_recovered() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = FixtureSpec { permutations: 200, resamples: 200, ..FixtureSpec::default() };
    let path = write_fixture(tmp.path(), &spec);
    let truth: GroundTruth =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join(GROUND_TRUTH_FILE)).unwrap()).unwrap();
    let bundle = run_pipeline(&PipelineConfig::load(&path).unwrap()).unwrap();
    let tm = bundle.topic_model.as_ref().unwrap();

    // The planted topic at -0.4, located through its keywords.
    let planted = truth.topics.iter().find(|t| t.planted_sb == -0.4).unwrap();
    let fitted = tm
        .topics
        .iter()
        .max_by_key(|t| t.keywords.iter().filter(|k| planted.words.contains(k)).count())
        .unwrap()
        .topic_id;
    for o in &bundle.outlets {
        let s = o.sentiment.as_ref().unwrap();
        let t = s.per_topic.iter().find(|t| t.topic_id == fitted).unwrap();
        let v = t.value.unwrap();
        assert!((v - -0.4).abs() <= 0.1, "{}: SB {v}", o.name);
    }
}
