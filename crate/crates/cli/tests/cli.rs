use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dcnt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dcnt")).args(args).output().expect("run dcnt")
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn hand_corpus(dir: &Path) -> String {
    let p = dir.join("corpus.bin");
    fs::write(&p, b"ab\0ab\0").unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn build_then_count_hand_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = hand_corpus(dir.path());
    let idx = dir.path().join("idx.dcnt");
    let idx = idx.to_str().unwrap();
    ok(&dcnt(&["build", "--input", &corpus, "--variant", "sada-s-s", "--variant", "ilcp-rl", "--variant", "pdl-count", "-o", idx]));
    assert_eq!(&fs::read(idx).unwrap()[..4], b"DCNT");
    assert_eq!(ok(&dcnt(&["count", "--index", idx, "ab", "zz", "b"])), "ab\t2\nzz\t0\nb\t2\n");
    for v in ["sada-s-s", "ilcp-rl", "pdl-count"] {
        assert_eq!(ok(&dcnt(&["count", "--index", idx, "--variant", v, "ab"])), "ab\t2\n");
    }
    let missing = dcnt(&["count", "--index", idx, "--variant", "sada", "ab"]);
    assert!(!missing.status.success());
}

#[test]
fn unknown_variant_lists_presets() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = hand_corpus(dir.path());
    let out = dcnt(&["build", "--input", &corpus, "--variant", "bogus", "-o", dir.path().join("x").to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bogus") && err.contains("sada-rr-g") && err.contains("pdl-count"), "{err}");
}

#[test]
fn count_from_pattern_file_yields_one_line_each() {
    let dir = tempfile::tempdir().unwrap();
    let text = dir.path().join("docs.txt");
    fs::write(&text, "the cat sat\nthe dog ran\na cat ran\n").unwrap();
    let idx = dir.path().join("idx.dcnt");
    ok(&dcnt(&["build", "--input", text.to_str().unwrap(), "--separator", "\\n", "-o", idx.to_str().unwrap()]));
    let pats = dir.path().join("pats.txt");
    let lines: Vec<String> = (0..10_000).map(|i| ["cat", "ran", "the", "zebra"][i % 4].to_string()).collect();
    fs::write(&pats, lines.join("\n")).unwrap();
    let out = ok(&dcnt(&["count", "--index", idx.to_str().unwrap(), "--patterns", pats.to_str().unwrap()]));
    let got: Vec<&str> = out.lines().collect();
    assert_eq!(got.len(), 10_000);
    assert_eq!(&got[..4], &["cat\t2", "ran\t2", "the\t2", "zebra\t0"]);
}

#[test]
fn manifest_input() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.txt"), "hello world").unwrap();
    fs::write(dir.path().join("b.txt"), "world peace").unwrap();
    let manifest = dir.path().join("list");
    fs::write(&manifest, "a.txt\nb.txt\n").unwrap();
    let idx = dir.path().join("idx.dcnt");
    ok(&dcnt(&["build", "--manifest", manifest.to_str().unwrap(), "--variant", "sada-rr", "-o", idx.to_str().unwrap()]));
    assert_eq!(ok(&dcnt(&["count", "--index", idx.to_str().unwrap(), "world", "hello"])), "world\t2\nhello\t1\n");
}

#[test]
fn stats_on_hand_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = hand_corpus(dir.path());
    let pats = dir.path().join("p");
    fs::write(&pats, "ab\n").unwrap();
    let out = ok(&dcnt(&["stats", "--input", &corpus, "--patterns", pats.to_str().unwrap()]));
    assert_eq!(out, "n,d,n_per_d,patterns,avg_occ,avg_docc,occ_per_docc\n6,2,3.0,1,2.00,2.00,1.00\n");
}

#[test]
fn gen_dna_bench_and_size_only() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("dna.bin");
    let corpus = corpus.to_str().unwrap();
    ok(&dcnt(&["gen-dna", "--length", "500", "--copies", "20", "--mutation", "0.01", "--seed", "3", "-o", corpus]));
    assert_eq!(fs::read(corpus).unwrap().len(), 501 * 20);
    let csv = dir.path().join("bench.csv");
    let dat = dir.path().join("bench.dat");
    ok(&dcnt(&[
        "bench", "--input", corpus, "--repetitions", "2", "--pattern-count", "50", "-o",
        csv.to_str().unwrap(), "--dat", dat.to_str().unwrap(),
    ]));
    let report = fs::read_to_string(&csv).unwrap();
    assert!(report.contains("structure,variant,size_bits,bpc,avg_us,median_us,queries,divergences"));
    assert_eq!(report.lines().filter(|l| l.contains(",50,0")).count(), 16);
    let sizes = ok(&dcnt(&["bench", "--input", corpus, "--repetitions", "0", "--pattern-count", "10", "--variant", "sada"]));
    let row = sizes.lines().find(|l| l.starts_with("sada,")).unwrap();
    assert!(row.contains(",,,10,0"), "{row}");
}

#[test]
fn analyze_runs_small_grid() {
    let out = ok(&dcnt(&["analyze-runs", "--scale", "14", "--min-length-exp", "6", "--max-length-exp", "8", "--mutation", "1.0", "--seed", "5"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "m,d,p,seed,runs,bound,total_size");
    assert_eq!(lines.len(), 4);
    for l in &lines[1..] {
        let f: Vec<&str> = l.split(',').collect();
        assert!(f[4].parse::<f64>().unwrap() <= f[5].parse::<f64>().unwrap(), "{l}");
    }
    assert_eq!(out, ok(&dcnt(&["analyze-runs", "--scale", "14", "--min-length-exp", "6", "--max-length-exp", "8", "--mutation", "1.0", "--seed", "5"])));
}

#[test]
fn extract_patterns_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("dna.bin");
    let corpus = corpus.to_str().unwrap();
    ok(&dcnt(&["gen-dna", "--length", "300", "--copies", "10", "-o", corpus]));
    let a = ok(&dcnt(&["extract-patterns", "--input", corpus, "--length", "6", "--count", "20"]));
    let b = ok(&dcnt(&["extract-patterns", "--input", corpus, "--length", "6", "--count", "20"]));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 20);
    assert!(a.lines().all(|l| l.len() == 6));
}
