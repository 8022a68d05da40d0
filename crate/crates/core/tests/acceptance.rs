//! Acceptance criteria 1 to 10. Runs with its own harness and prints one
//! PASS/FAIL line per criterion; exits nonzero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use chrono::NaiveDate;
use media_agenda::bootstrap::{bootstrap_sb, DEFAULT_RESAMPLES};
use media_agenda::corpus::Article;
use media_agenda::coverage::{agenda_profile, raw_topic_weights, topic_weight_series, Normalization};
use media_agenda::fixture::{generate_fixture, FixtureSpec, GroundTruth, GROUND_TRUTH_FILE};
use media_agenda::nmf::{nmf_factorize, NmfFactors, NmfParams};
use media_agenda::report::{report_json, Manifest, MANIFEST_FILE, REPORT_FILE};
use media_agenda::sentiment::{sentiment_bias, LabeledMention, SentimentTally};
use media_agenda::series::{DateSpan, DatedSeries};
use media_agenda::stats::{adf_test, granger_beta, schwert_max_lag, spearman_values};
use media_agenda::vectorizer::{build_vocabulary, tfidf_matrix, DocTermMatrix};
use media_agenda::{run_pipeline, PipelineConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Dirichlet, Distribution, StandardNormal};

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(limit: Duration, elapsed: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn day(d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(2016, 9, d).unwrap()
}

fn labels(s: &str) -> Vec<LabeledMention> {
    s.split_whitespace().map(|t| LabeledMention::parse(t).unwrap()).collect()
}

fn sb(m: &[LabeledMention]) -> f64 {
    sentiment_bias(&SentimentTally::from_labels(m)).unwrap().value
}

// 1 ------------------------------------------------------------------------

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let appendix = sb(&labels("A+ A+ A+ A- B+ B+ B- B- B-"));
    let resample = sb(&labels("A+ A+ A+ A+ A+ B- B- B+ B+"));
    within(Duration::from_secs(1), t.elapsed())?;
    check(
        appendix == 1.0 / 3.0 && resample == 5.0 / 9.0,
        format!("SB = {appendix}, resample SB = {resample}"),
    )
}

// 2 ------------------------------------------------------------------------

fn uniform_matrix(rows: usize, cols: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rows).map(|_| (0..cols).map(|_| rng.gen::<f64>()).collect()).collect()
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut worst = f64::NEG_INFINITY;
    let mut sweeps = 0;
    for seed in 0..50 {
        let m = DocTermMatrix::from_dense(&uniform_matrix(100, 200, 1000 + seed)).unwrap();
        let params = NmfParams {
            n_topics: 5,
            seed,
            tol: 1e-12,
            max_iter: 200,
        };
        let f = nmf_factorize(&m, &params).unwrap();
        for w in f.error_history.windows(2) {
            worst = worst.max(w[1] - w[0]);
            sweeps += 1;
        }
    }
    let rank1: Vec<Vec<f64>> = (1..=20)
        .map(|i| (1..=30).map(|j| (i * j) as f64 / 100.0).collect())
        .collect();
    let m = DocTermMatrix::from_dense(&rank1).unwrap();
    let f = nmf_factorize(&m, &NmfParams { n_topics: 1, seed: 3, tol: 1e-15, max_iter: 2000 }).unwrap();
    within(Duration::from_secs(30), t.elapsed())?;
    check(
        worst <= 1e-12 && f.final_error < 1e-6,
        format!("{sweeps} sweeps, largest error increase {worst:.3e}; rank-1 error {:.3e}", f.final_error),
    )
}

// 3 ------------------------------------------------------------------------

/// Letter-only synthetic word: the tokenizer splits on digits.
fn word(prefix: &str, i: usize) -> String {
    let a = (b'a' + (i / 26) as u8) as char;
    let b = (b'a' + (i % 26) as u8) as char;
    format!("{prefix}{a}{b}")
}

const TOPIC_PREFIXES: [&str; 4] = ["kor", "vel", "mus", "tap"];
const WORDS_PER_TOPIC: usize = 30;

fn synthetic_corpus(seed: u64) -> Vec<Article> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mix = Dirichlet::new(&[0.3; 4]).unwrap();
    (0..200)
        .map(|j| {
            let theta = mix.sample(&mut rng);
            let tokens: Vec<String> = (0..80)
                .map(|_| {
                    if rng.gen::<f64>() < 0.15 {
                        return word("bgx", rng.gen_range(0..20));
                    }
                    let u: f64 = rng.gen();
                    let mut acc = 0.0;
                    let mut k = 3;
                    for (i, p) in theta.iter().enumerate() {
                        acc += p;
                        if u < acc {
                            k = i;
                            break;
                        }
                    }
                    word(TOPIC_PREFIXES[k], rng.gen_range(0..WORDS_PER_TOPIC))
                })
                .collect();
            Article {
                id: format!("doc{}", word("", j)),
                outlet: "synthetic".into(),
                date: day(1),
                title: String::new(),
                body: tokens.join(" "),
            }
        })
        .collect()
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Smallest cosine under the best one-to-one matching of truth to W rows.
fn best_matching(f: &NmfFactors, truth: &[Vec<f64>]) -> f64 {
    let sims: Vec<Vec<f64>> = truth
        .iter()
        .map(|t| (0..f.n_topics()).map(|i| cosine(t, f.w_row(i))).collect())
        .collect();
    permutations(truth.len())
        .iter()
        .map(|p| p.iter().enumerate().map(|(k, &i)| sims[k][i]).fold(f64::INFINITY, f64::min))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let mut good = 0;
    let mut minima = Vec::new();
    for seed in 0..10u64 {
        let articles = synthetic_corpus(500 + seed);
        let vocab = build_vocabulary(&articles, &BTreeSet::new(), 2).unwrap();
        let m = tfidf_matrix(&articles, &vocab).unwrap();
        let f = nmf_factorize(&m, &NmfParams::new(4, seed)).unwrap();
        let truth: Vec<Vec<f64>> = TOPIC_PREFIXES
            .iter()
            .map(|p| {
                f.terms
                    .iter()
                    .map(|term| {
                        let own = (0..WORDS_PER_TOPIC).any(|i| &word(p, i) == term);
                        if own { 1.0 / WORDS_PER_TOPIC as f64 } else { 0.0 }
                    })
                    .collect()
            })
            .collect();
        let worst = best_matching(&f, &truth);
        minima.push(format!("{worst:.3}"));
        if worst > 0.8 {
            good += 1;
        }
    }
    within(Duration::from_secs(60), t.elapsed())?;
    check(good >= 9, format!("{good}/10 seeds matched every topic; per-seed worst cosine [{}]", minima.join(", ")))
}

// 4 ------------------------------------------------------------------------

fn criterion_4() -> Outcome {
    let articles: Vec<Article> = [10, 20, 30]
        .iter()
        .enumerate()
        .map(|(j, &len)| Article {
            id: format!("d{j}"),
            outlet: "x".into(),
            date: day(5),
            title: String::new(),
            body: vec!["word"; len].join(" "),
        })
        .collect();
    let f = NmfFactors::from_parts(
        vec!["d0".into(), "d1".into(), "d2".into()],
        vec!["word".into()],
        vec![1.0, 0.0, 0.5, 0.5, 0.0, 1.0],
        vec![1.0, 1.0],
    )
    .map_err(|e| e.to_string())?;
    let span = DateSpan::new(day(5), day(5)).unwrap();
    let raw = raw_topic_weights(&f, &articles, &span).map_err(|e| e.to_string())?;
    let cov = topic_weight_series(&f, &articles, 1, Normalization::Share).map_err(|e| e.to_string())?;
    let shares = [cov.series[0].values[0], cov.series[1].values[0]];
    let agenda = agenda_profile(&cov).map_err(|e| e.to_string())?;
    check(
        raw == vec![vec![20.0], vec![40.0]] && shares == [1.0 / 3.0, 2.0 / 3.0] && agenda == vec![1.0 / 3.0, 2.0 / 3.0],
        format!("raw {raw:?}, shares {shares:?}, agenda {agenda:?}"),
    )
}

// 5 ------------------------------------------------------------------------

/// Mid-rank by counting, doubled so it stays an integer.
fn doubled_mid_ranks(v: &[i64]) -> Vec<i64> {
    v.iter()
        .map(|x| {
            let less = v.iter().filter(|y| *y < x).count() as i64;
            let equal = v.iter().filter(|y| *y == x).count() as i64;
            2 * less + equal + 1
        })
        .collect()
}

/// Pearson on doubled ranks in integer arithmetic; one rounding at the end.
fn oracle_spearman(x: &[i64], y: &[i64]) -> Option<f64> {
    let n = x.len() as i64;
    let (rx, ry) = (doubled_mid_ranks(x), doubled_mid_ranks(y));
    // Deviations from the mean rank, times 2: 2r − (n + 1).
    let dx: Vec<i64> = rx.iter().map(|r| r - (n + 1)).collect();
    let dy: Vec<i64> = ry.iter().map(|r| r - (n + 1)).collect();
    let sxy: i64 = dx.iter().zip(&dy).map(|(a, b)| a * b).sum();
    let sxx: i64 = dx.iter().map(|a| a * a).sum();
    let syy: i64 = dy.iter().map(|b| b * b).sum();
    if sxx == 0 || syy == 0 {
        return None;
    }
    Some(sxy as f64 / ((sxx * syy) as f64).sqrt())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut compared = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(3..=10);
        let x: Vec<i64> = (0..n).map(|_| rng.gen_range(0..5)).collect();
        let y: Vec<i64> = (0..n).map(|_| rng.gen_range(0..5)).collect();
        let fx: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        let fy: Vec<f64> = y.iter().map(|&v| v as f64).collect();
        match (oracle_spearman(&x, &y), spearman_values(&fx, &fy)) {
            (Some(o), Ok(r)) if o.clamp(-1.0, 1.0) == r => compared += 1,
            (None, Err(_)) => {}
            (o, r) => return Err(format!("x={x:?} y={y:?}: oracle {o:?}, library {r:?}")),
        }
    }
    let up: Vec<f64> = (0..10).map(|i| (i as f64).exp()).collect();
    let down: Vec<f64> = up.iter().map(|v| -v).collect();
    let idx: Vec<f64> = (0..10).map(f64::from).collect();
    let (p, m) = (spearman_values(&idx, &up).unwrap(), spearman_values(&idx, &down).unwrap());
    check(p == 1.0 && m == -1.0, format!("{compared} defined instances equal the oracle exactly; monotone gives {p}, {m}"))
}

// 6 ------------------------------------------------------------------------

fn series(values: Vec<f64>) -> DatedSeries {
    DatedSeries::new(day(1), values, "s").unwrap()
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let max_lag = schwert_max_lag(200);
    let (mut white, mut walk) = (0, 0);
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(6000 + seed);
        let e: Vec<f64> = (0..200).map(|_| rng.sample(StandardNormal)).collect();
        if adf_test(&series(e.clone()), max_lag).map_err(|x| x.to_string())?.reject_5pct {
            white += 1;
        }
        let rw: Vec<f64> = e.iter().scan(0.0, |s, v| { *s += v; Some(*s) }).collect();
        if adf_test(&series(rw), max_lag).map_err(|x| x.to_string())?.reject_5pct {
            walk += 1;
        }
    }
    within(Duration::from_secs(60), t.elapsed())?;
    check(white >= 90 && walk <= 10, format!("white noise rejects {white}/100, random walk rejects {walk}/100"))
}

// 7 ------------------------------------------------------------------------

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let mut ok = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(7000 + seed);
        let dt: Vec<f64> = (0..200).map(|_| rng.sample(StandardNormal)).collect();
        let dct: Vec<f64> = (0..200)
            .map(|i| {
                let noise: f64 = rng.sample(StandardNormal);
                if i >= 5 { 0.8 * dt[i - 5] + 0.1 * noise } else { 0.1 * noise }
            })
            .collect();
        let (dct, dt) = (series(dct), series(dt));
        let at5 = granger_beta(&dct, &dt, 5).map_err(|e| e.to_string())?;
        let at12 = granger_beta(&dct, &dt, 12).map_err(|e| e.to_string())?;
        if (at5.beta - 0.8).abs() <= 0.1 && at5.p_value < 0.01 && at12.p_value > 0.05 {
            ok += 1;
        }
    }
    within(Duration::from_secs(60), t.elapsed())?;
    check(ok >= 90, format!("{ok}/100 seeds recover β at τ=5 and stay quiet at τ=12"))
}

// 8 ------------------------------------------------------------------------

fn criterion_8() -> Outcome {
    let t = Instant::now();
    // A+ A- A0 B+ B- B0; true SB = 0.30 − 0.10 − 0.15 + 0.20.
    let probs = [0.30, 0.10, 0.10, 0.15, 0.20, 0.15];
    let kinds = labels("A+ A- A0 B+ B- B0");
    let true_sb = 0.25;
    let mut covered = 0;
    for trial in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(8000 + trial);
        let sample: Vec<LabeledMention> = (0..500)
            .map(|_| {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                for (p, k) in probs.iter().zip(&kinds) {
                    acc += p;
                    if u < acc {
                        return *k;
                    }
                }
                kinds[5]
            })
            .collect();
        let r = bootstrap_sb(&sample, DEFAULT_RESAMPLES, 0.95, trial).map_err(|e| e.to_string())?;
        if r.ci_low <= true_sb && true_sb <= r.ci_high {
            covered += 1;
        }
    }
    within(Duration::from_secs(120), t.elapsed())?;
    let rate = covered as f64 / 200.0;
    check((0.92..=0.98).contains(&rate), format!("95% CI covered the true SB in {covered}/200 trials ({:.1}%)", 100.0 * rate))
}

// 9 ------------------------------------------------------------------------

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_media-agenda"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr)))
    }
}

/// Planted topic (1-based) for each fitted topic id, by keyword overlap.
fn map_topics(report: &serde_json::Value, truth: &GroundTruth) -> Result<BTreeMap<u64, usize>, String> {
    let topics = report["topic_model"]["topics"].as_array().ok_or("report has no topics")?;
    let mut map = BTreeMap::new();
    for t in topics {
        let id = t["topic_id"].as_u64().ok_or("topic id")?;
        let keywords: BTreeSet<&str> = t["keywords"]
            .as_array()
            .ok_or("keywords")?
            .iter()
            .filter_map(|k| k.as_str())
            .collect();
        let (best, overlap) = truth
            .topics
            .iter()
            .map(|p| (p.index, p.words.iter().filter(|w| keywords.contains(w.as_str())).count()))
            .max_by_key(|&(_, n)| n)
            .ok_or("no planted topics")?;
        if overlap * 2 < keywords.len() {
            return Err(format!("fitted topic {id} matches no planted vocabulary"));
        }
        map.insert(id, best);
    }
    let distinct: BTreeSet<_> = map.values().collect();
    if distinct.len() != map.len() {
        return Err(format!("fitted topics do not map one-to-one onto planted ones: {map:?}"));
    }
    Ok(map)
}

fn well_formed(dir: &Path, manifest: &Manifest) -> Result<usize, String> {
    for entry in &manifest.files {
        let path = dir.join(&entry.path);
        let bytes = std::fs::read(&path).map_err(|e| format!("{}: {e}", entry.path))?;
        if media_agenda::report::sha256_hex(&bytes) != entry.sha256 {
            return Err(format!("{}: hash does not match manifest", entry.path));
        }
        let text = String::from_utf8(bytes).map_err(|e| format!("{}: {e}", entry.path))?;
        if entry.path.ends_with(".svg") {
            roxmltree::Document::parse(&text).map_err(|e| format!("{}: {e}", entry.path))?;
        } else if entry.path.ends_with(".json") {
            serde_json::from_str::<serde_json::Value>(&text).map_err(|e| format!("{}: {e}", entry.path))?;
        } else if entry.path.ends_with(".csv") {
            let mut r = csv::Reader::from_reader(text.as_bytes());
            let width = r.headers().map_err(|e| format!("{}: {e}", entry.path))?.len();
            for rec in r.records() {
                let rec = rec.map_err(|e| format!("{}: {e}", entry.path))?;
                if rec.len() != width {
                    return Err(format!("{}: ragged row", entry.path));
                }
            }
        } else {
            return Err(format!("unexpected output {}", entry.path));
        }
    }
    Ok(manifest.files.len())
}

fn criterion_9(tmp: &Path) -> Outcome {
    let fixture_dir = tmp.join("fixture");
    let fixture = generate_fixture(42, &FixtureSpec::default()).map_err(|e| e.to_string())?;
    let config = fixture.write(&fixture_dir).map_err(|e| e.to_string())?;
    let config = config.to_str().ok_or("path")?;
    let (out_a, out_b) = (tmp.join("run_a"), tmp.join("run_b"));

    let t = Instant::now();
    run_cli(&["run", "--config", config, "--out", out_a.to_str().unwrap()])?;
    let elapsed = t.elapsed();
    run_cli(&["run", "--config", config, "--out", out_b.to_str().unwrap()])?;

    let mut failures = Vec::new();
    let mut notes = vec![format!("run took {elapsed:.1?}")];
    if elapsed > Duration::from_secs(60) {
        failures.push(format!("run took {elapsed:.1?}"));
    }

    let truth: GroundTruth = read_json(&fixture_dir.join(GROUND_TRUTH_FILE))?;
    let report: serde_json::Value = read_json(&out_a.join(REPORT_FILE))?;
    let map = map_topics(&report, &truth)?;
    let causal_fit = map.iter().find(|(_, &p)| p == truth.causal.topic).map(|(&id, _)| id).ok_or("causal topic not fitted")?;
    let tau0 = truth.causal.tau as i64;
    let half = truth.causal.region_halfwidth as i64;

    for outlet in report["outlets"].as_array().ok_or("outlets")? {
        let name = outlet["name"].as_str().unwrap_or("?");
        let results = outlet["granger"]["results"].as_array().ok_or("granger results")?;
        let mut planted_hit = false;
        let mut outside = Vec::new();
        for r in results {
            if !r["significant"].as_bool().unwrap_or(false) {
                continue;
            }
            let (topic, tau) = (r["topic_id"].as_u64().unwrap(), r["tau"].as_i64().unwrap());
            let in_region = topic == causal_fit && (tau - tau0).abs() <= half;
            planted_hit |= topic == causal_fit && tau == tau0;
            if !in_region {
                outside.push(format!("(topic {topic}, τ={tau}, p={:.2e})", r["p_value"].as_f64().unwrap_or(f64::NAN)));
            }
        }
        if !planted_hit {
            failures.push(format!("{name}: planted cell (topic {causal_fit}, τ={tau0}) not flagged"));
        }
        if !outside.is_empty() {
            failures.push(format!("{name}: flagged outside the planted region: {}", outside.join(", ")));
        }

        for t in outlet["sentiment"]["per_topic"].as_array().ok_or("per-topic SB")? {
            let id = t["topic_id"].as_u64().unwrap();
            let Some(value) = t["value"].as_f64() else { continue };
            let planted = truth.topics[map[&id] - 1].planted_sb;
            if value.signum() != planted.signum() {
                failures.push(format!("{name}: topic {id} SB {value:.3} has the wrong sign (planted {planted})"));
            }
        }
    }
    notes.push(format!("causal topic fitted as {causal_fit}, region τ∈[{}, {}]", tau0 - half, tau0 + half));

    let manifest_a = std::fs::read(out_a.join(MANIFEST_FILE)).map_err(|e| e.to_string())?;
    let manifest_b = std::fs::read(out_b.join(MANIFEST_FILE)).map_err(|e| e.to_string())?;
    if manifest_a != manifest_b {
        failures.push("manifests differ between identical runs".into());
    }
    let manifest: Manifest = serde_json::from_slice(&manifest_a).map_err(|e| e.to_string())?;
    match well_formed(&out_a, &manifest) {
        Ok(n) => notes.push(format!("{n} outputs well-formed, manifest stable")),
        Err(e) => failures.push(e),
    }
    if failures.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(format!("{}; {}", failures.join("; "), notes.join("; ")))
    }
}

// 10 -----------------------------------------------------------------------

fn criterion_10(tmp: &Path) -> Outcome {
    let dir = tmp.join("determinism");
    let fixture = generate_fixture(42, &FixtureSpec::default()).map_err(|e| e.to_string())?;
    let path = fixture.write(&dir).map_err(|e| e.to_string())?;
    let config = PipelineConfig::load(&path).map_err(|e| e.to_string())?;
    let mut bodies = Vec::new();
    for threads in [1, 4, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
        let bundle = pool.install(|| run_pipeline(&config)).map_err(|e| e.to_string())?;
        bodies.push(report_json(&bundle).map_err(|e| e.to_string())?);
    }
    check(
        bodies.windows(2).all(|w| w[0] == w[1]),
        format!("report.json identical across 1, 4 and 4 worker threads ({} bytes)", bodies[0].len()),
    )
}

fn main() {
    let tmp = tempfile::tempdir().expect("temporary directory");
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("SB worked values", Box::new(criterion_1)),
        ("NMF monotonicity", Box::new(criterion_2)),
        ("topic recovery", Box::new(criterion_3)),
        ("coverage hand case", Box::new(criterion_4)),
        ("Spearman oracle", Box::new(criterion_5)),
        ("ADF calibration", Box::new(criterion_6)),
        ("Granger recovery", Box::new(criterion_7)),
        ("bootstrap coverage", Box::new(criterion_8)),
        ("end-to-end fixture", Box::new(|| criterion_9(tmp.path()))),
        ("determinism", Box::new(|| criterion_10(tmp.path()))),
    ];
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if let Some(f) = &filter {
            if *f != n.to_string() && !name.contains(f.as_str()) {
                continue;
            }
        }
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {n:>2} PASS  {name} ({:.1?}): {detail}", t.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name} ({:.1?}): {detail}", t.elapsed());
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
