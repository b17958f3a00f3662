use std::fs;
use std::io::BufReader;
use std::path::Path;
use std::process::{Command, Output};

use jia_core::corpus::parse_corpus;
use jia_core::extract::read_mentions;
use tempfile::TempDir;

fn jia(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jia"))
        .args(args)
        .current_dir(dir)
        .env("JIA_LOG", "error")
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) {
    let out = jia(dir, args);
    assert!(
        out.status.success(),
        "jia {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Mentions are parseable, typed consistently and point at real spans.
fn assert_schema_valid(dir: &Path, corpus: &str, mentions: &str) -> usize {
    let docs = parse_corpus(BufReader::new(fs::File::open(dir.join(corpus)).unwrap())).unwrap();
    let ms = read_mentions(BufReader::new(fs::File::open(dir.join(mentions)).unwrap())).unwrap();
    for m in &ms {
        let doc = docs.iter().find(|d| d.doc_id == m.doc_id).expect("known document");
        assert_eq!((doc.case_id.as_str(), doc.party), (m.case_id.as_str(), m.party));
        let s = &doc.sentences[m.sentence];
        assert_eq!(s.span_text(m.trigger.span), m.trigger.text);
        for (role, args) in &m.roles {
            assert_eq!(role.event(), m.event_type);
            for a in args {
                assert!(a.span.end <= s.len());
                assert_eq!(s.span_text(a.span), a.text);
            }
        }
    }
    ms.len()
}

const AGREED: &[&str] = &[
    "in/P 2005/CD ,/PU we/PN became/NN acquainted/VV ./PU",
    "we/PN got/NN married/VV in/P 2009/CD ./PU",
    "after/P the/DT wedding/NN ,/PU we/PN argued/VV all/NN the/DT time/NN ./PU",
    "in/P 2012/CD ,/PU we/PN had/NN a/DT baby/NN ,/PU our/PN daughter/NN xiaohong/NN ./PU",
    "we/PN bought/NN a/DT car/NN ,/PU worth/NN 1600000/CD yuan/NN ,/PU after/P the/DT wedding/NN ./PU",
];

fn agreed_case() -> String {
    let sentences: Vec<String> = AGREED
        .iter()
        .map(|s| {
            let tokens: Vec<String> = s
                .split(' ')
                .map(|tp| {
                    let (t, p) = tp.rsplit_once('/').unwrap();
                    format!(r#"{{"t":"{t}","pos":"{p}"}}"#)
                })
                .collect();
            format!(r#"{{"tokens":[{}]}}"#, tokens.join(","))
        })
        .collect();
    let doc = |id: &str, party: &str| {
        format!(
            r#"{{"doc_id":"{id}","case_id":"agreed","party":"{party}","sentences":[{}]}}"#,
            sentences.join(",")
        )
    };
    format!("{}\n{}\n", doc("agreed-P", "plaintiff"), doc("agreed-D", "defendant"))
}

#[test]
fn synthetic_train_evaluate_extract_detect() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(d, &["gen-synthetic", "--cases", "100", "--seed", "7", "--out", "data"]);
    assert!(d.join("data/planned.json").exists());
    ok(
        d,
        &[
            "train-r1",
            "--corpus",
            "data/corpus.jsonl",
            "--model-dir",
            "m",
            "--epochs",
            "3",
        ],
    );
    ok(
        d,
        &[
            "evaluate",
            "--corpus",
            "data/corpus.jsonl",
            "--model-dir",
            "m",
            "--out",
            "eval",
        ],
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("eval/evaluation.json")).unwrap()).unwrap();
    assert!(report["events"]["f1"].as_f64().unwrap() > 0.0);
    assert_eq!(report["documents"], 200);

    // Both second-round strategies yield valid mention files.
    ok(
        d,
        &[
            "train-r2",
            "--corpus",
            "data/corpus.jsonl",
            "--model-dir",
            "m",
            "--epochs",
            "3",
        ],
    );
    for strategy in ["rules", "crf"] {
        let out = format!("x-{strategy}");
        ok(
            d,
            &[
                "extract",
                "--corpus",
                "data/corpus.jsonl",
                "--model-dir",
                "m",
                "--second-round",
                strategy,
                "--out",
                &out,
            ],
        );
        assert!(assert_schema_valid(d, "data/corpus.jsonl", &format!("{out}/mentions.jsonl")) > 0);
        ok(d, &["align", "--out", &out]);
        ok(d, &["detect", "--out", &out]);
        assert!(fs::read_to_string(d.join(&out).join("report.txt"))
            .unwrap()
            .starts_with("JIA-REPORT v1"));
    }

    // Identical statements on both sides raise no conflict.
    fs::write(d.join("agreed.jsonl"), agreed_case()).unwrap();
    ok(
        d,
        &[
            "extract",
            "--corpus",
            "agreed.jsonl",
            "--model-dir",
            "m",
            "--out",
            "agreed",
        ],
    );
    assert!(assert_schema_valid(d, "agreed.jsonl", "agreed/mentions.jsonl") > 0);
    ok(d, &["detect", "--out", "agreed"]);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("agreed/report.json")).unwrap()).unwrap();
    let summary = &report["cases"][0]["summary"];
    assert!(summary["aligned_pairs"].as_u64().unwrap() > 0, "{summary}");
    assert_eq!(summary["contradictory"], 0, "{summary}");
    assert!(!fs::read_to_string(d.join("agreed/report.txt"))
        .unwrap()
        .contains("CONFLICT"));

    // Same inputs, same outputs.
    let before = fs::read(d.join("agreed/report.json")).unwrap();
    ok(d, &["detect", "--out", "agreed"]);
    assert_eq!(before, fs::read(d.join("agreed/report.json")).unwrap());
}

#[test]
fn outputs_are_reproducible() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    for out in ["a", "b"] {
        ok(d, &["gen-synthetic", "--cases", "12", "--seed", "5", "--out", out]);
        ok(
            d,
            &[
                "train-r1",
                "--corpus",
                &format!("{out}/corpus.jsonl"),
                "--model-dir",
                out,
                "--epochs",
                "2",
            ],
        );
    }
    for file in ["corpus.jsonl", "planned.json", "round1.crf"] {
        assert_eq!(
            fs::read(d.join("a").join(file)).unwrap(),
            fs::read(d.join("b").join(file)).unwrap(),
            "{file}"
        );
    }
    let leftovers: Vec<_> = fs::read_dir(d.join("a"))
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().ends_with(".tmp"))
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn config_file_is_overridden_by_flags() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    fs::write(
        d.join("run.cfg"),
        "# synthetic run\ncases = 3\nseed = 9\nout = from-file\n",
    )
    .unwrap();
    ok(d, &["gen-synthetic", "--config", "run.cfg", "--cases", "4"]);
    let docs = parse_corpus(BufReader::new(
        fs::File::open(d.join("from-file/corpus.jsonl")).unwrap(),
    ))
    .unwrap();
    assert_eq!(docs.len(), 8);
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(d, &["gen-synthetic", "--cases", "2", "--out", "."]);

    let out = jia(d, &["extract", "--corpus", "corpus.jsonl", "--model-dir", "nowhere"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("nowhere/round1.crf"));

    assert_eq!(code(&jia(d, &["train-r1", "--corpus", "absent.jsonl"])), 2);
    assert_eq!(code(&jia(d, &["detect", "--mentions", "absent.jsonl"])), 2);
    assert_eq!(code(&jia(d, &["detect", "--lexicons", "absent-dir"])), 2);
    assert_eq!(code(&jia(d, &["train-r1"])), 1);
    assert_eq!(code(&jia(d, &["align", "--fc-threshold", "1.5"])), 1);
    assert_eq!(code(&jia(d, &["evaluate", "--second-round", "neural"])), 1);
    assert_eq!(
        code(&jia(d, &["evaluate", "--corpus", "corpus.jsonl", "--folds", "1"])),
        1
    );
    assert_eq!(code(&jia(d, &["gen-synthetic", "--config", "absent.cfg"])), 2);
    assert_eq!(code(&jia(d, &["no-such-command"])), 1);
    assert_eq!(code(&jia(d, &["--help"])), 0);

    fs::write(d.join("bad.jsonl"), "{not json\n").unwrap();
    let out = jia(d, &["train-r1", "--corpus", "bad.jsonl"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.jsonl"));
}
