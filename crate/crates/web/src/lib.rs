//! Browser bindings for the document counting library.
//!
//! Each exported function takes plain values and returns a JSON string, so the
//! page needs no generated type glue and the same functions run natively in
//! tests. Failures come back as `{"error": "..."}`.

use doccount::analysis::{bound_terms, measure_cell};
use doccount::corpus::{generate_dna, Collection, SyntheticSpec};
use doccount::counter::{DocumentCounter, StructureKind};
use doccount::sada::{HArray, Placement, SadaIndex, SadaVariant};
use doccount::suffix::TextIndex;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Upper limits keep a browser tab responsive.
const MAX_EXPLORE_LEN: usize = 4096;
const MAX_RUNS_SIZE: usize = 1 << 18;
const MAX_COMPARE_SIZE: usize = 1 << 18;

#[derive(Serialize)]
pub struct Exploration {
    pub text: String,
    pub n: usize,
    pub d: usize,
    pub sa: Vec<u32>,
    pub lcp: Vec<u32>,
    pub da: Vec<u32>,
    pub prev_same_doc: Vec<u32>,
    pub suffixes: Vec<String>,
    pub h_per_pair: Vec<u32>,
    pub h_aggregated: Vec<u32>,
    pub hprime: String,
    pub pattern: String,
    pub range: Option<[usize; 2]>,
    pub counts: Vec<NamedCount>,
}

#[derive(Serialize)]
pub struct NamedCount {
    pub structure: String,
    pub docc: usize,
}

#[derive(Serialize)]
pub struct RunsResult {
    pub m: usize,
    pub d: usize,
    pub p: f64,
    pub runs: usize,
    pub bound: f64,
    pub within_bound: bool,
    pub terms: Vec<Term>,
}

#[derive(Serialize)]
pub struct Term {
    pub i: u32,
    pub length: f64,
    pub expected_repeated: f64,
}

#[derive(Serialize)]
pub struct SizeRow {
    pub structure: String,
    pub bits: usize,
    pub bpc: f64,
}

#[derive(Serialize)]
pub struct SizeComparison {
    pub n: usize,
    pub d: usize,
    pub hprime_runs: usize,
    pub rows: Vec<SizeRow>,
}

fn json<T: Serialize>(r: Result<T, String>) -> String {
    let out = match r {
        Ok(v) => serde_json::to_string(&v),
        Err(e) => serde_json::to_string(&serde_json::json!({ "error": e })),
    };
    out.expect("plain data serializes")
}

fn visible(bytes: &[u8]) -> String {
    bytes
        .iter()
        .map(|&b| if b == 0 { '$' } else { b as char })
        .collect()
}

/// Documents are the lines of `docs`; blank lines are skipped.
pub fn explore_collection(docs: &str, pattern: &str) -> Result<Exploration, String> {
    let lines: Vec<&[u8]> = docs.lines().filter(|l| !l.is_empty()).map(str::as_bytes).collect();
    let collection = Collection::from_documents(&lines).map_err(|e| e.to_string())?;
    if collection.len() > MAX_EXPLORE_LEN {
        return Err(format!("collection too large to display ({} > {MAX_EXPLORE_LEN} symbols)", collection.len()));
    }
    let idx = TextIndex::build(collection);
    let per_pair = HArray::build(&idx, Placement::PerPair);
    let aggregated = HArray::build(&idx, Placement::Aggregated);
    let plain = SadaVariant::preset("sada").expect("plain preset");
    let hprime = SadaIndex::from_h(&idx, &per_pair, plain).map_err(|e| e.to_string())?;
    let hprime = hprime.hprime().to_bitbuf().iter().map(|b| if b { '1' } else { '0' }).collect();
    let text = idx.text();
    let suffixes = idx.sa().iter().map(|&s| visible(&text[s as usize..])).collect();

    let range = idx.find(pattern.as_bytes()).filter(|_| !pattern.is_empty());
    let mut counts = Vec::new();
    if let Some(r) = range {
        for kind in StructureKind::all() {
            let s = kind.build(&idx, None).map_err(|e| e.to_string())?;
            let docc = s.count(r, pattern.len()).map_err(|e| e.to_string())?;
            counts.push(NamedCount { structure: s.name(), docc });
        }
    }
    Ok(Exploration {
        text: visible(text),
        n: idx.len(),
        d: idx.num_docs(),
        sa: idx.sa().to_vec(),
        lcp: idx.lcp().to_vec(),
        da: idx.da().to_vec(),
        prev_same_doc: idx.prev_same_doc().to_vec(),
        suffixes,
        h_per_pair: per_pair.values().to_vec(),
        h_aggregated: aggregated.values().to_vec(),
        hprime,
        pattern: pattern.to_string(),
        range: range.map(|r| [r.sp, r.ep]),
        counts,
    })
}

pub fn runs_against_bound(sigma: usize, m: usize, d: usize, p: f64, seed: u64) -> Result<RunsResult, String> {
    if m.saturating_mul(d) > MAX_RUNS_SIZE {
        return Err(format!("m * d must be at most {MAX_RUNS_SIZE}"));
    }
    let cell = measure_cell(sigma, m, d, p, seed).map_err(|e| e.to_string())?;
    let terms = bound_terms(sigma, m, d, 4)
        .into_iter()
        .map(|t| Term { i: t.i, length: t.length, expected_repeated: t.expected_repeated })
        .collect();
    Ok(RunsResult {
        m,
        d,
        p,
        runs: cell.runs,
        bound: cell.bound,
        within_bound: cell.within_bound(),
        terms,
    })
}

/// Builds every structure over a synthetic versioned collection and reports sizes.
pub fn compare_sizes(base_length: usize, copies: usize, mutation_rate: f64, seed: u64) -> Result<SizeComparison, String> {
    if base_length.saturating_mul(copies) > MAX_COMPARE_SIZE {
        return Err(format!("length * copies must be at most {MAX_COMPARE_SIZE}"));
    }
    let collection = generate_dna(&SyntheticSpec {
        base_length,
        copies,
        mutation_rate,
        alphabet_size: 4,
        seed,
    })
    .map_err(|e| e.to_string())?;
    let idx = TextIndex::build(collection);
    let n = idx.len();
    let mut rows = Vec::new();
    let mut hprime_runs = 0;
    for kind in StructureKind::all() {
        let s = kind.build(&idx, None).map_err(|e| e.to_string())?;
        if let doccount::counter::Structure::Sada(x) = &s {
            if x.variant() == SadaVariant::preset("sada").expect("plain preset") {
                hprime_runs = x.count_runs_of_ones();
            }
        }
        let bits = s.size_in_bits();
        rows.push(SizeRow { structure: s.name(), bits, bpc: bits as f64 / n as f64 });
    }
    Ok(SizeComparison { n, d: idx.num_docs(), hprime_runs, rows })
}

#[wasm_bindgen]
pub fn explore(docs: &str, pattern: &str) -> String {
    json(explore_collection(docs, pattern))
}

#[wasm_bindgen]
pub fn runs_experiment(sigma: usize, m: usize, d: usize, p: f64, seed: u32) -> String {
    json(runs_against_bound(sigma, m, d, p, seed as u64))
}

#[wasm_bindgen]
pub fn size_comparison(base_length: usize, copies: usize, mutation_rate: f64, seed: u32) -> String {
    json(compare_sizes(base_length, copies, mutation_rate, seed as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn explores_the_two_document_example() {
        let e = explore_collection("ab\nab\n", "ab").unwrap();
        assert_eq!(e.text, "ab$ab$");
        assert_eq!((e.n, e.d), (6, 2));
        assert_eq!(e.sa, vec![5, 2, 3, 0, 4, 1]);
        assert_eq!(e.da, vec![2, 1, 2, 1, 2, 1]);
        assert_eq!(e.h_per_pair, vec![0, 2, 0, 2, 0]);
        assert_eq!(e.h_aggregated, vec![0, 4, 0, 0, 0]);
        assert_eq!(e.hprime, "110011001");
        assert_eq!(e.range, Some([3, 4]));
        assert_eq!(e.counts.len(), 15);
        assert!(e.counts.iter().all(|c| c.docc == 2));
    }

    #[test]
    fn absent_pattern_has_no_counts() {
        let e = explore_collection("abc\nbcd", "zz").unwrap();
        assert_eq!(e.range, None);
        assert!(e.counts.is_empty());
    }

    #[test]
    fn errors_become_json() {
        let v: Value = serde_json::from_str(&explore("", "a")).unwrap();
        assert!(v["error"].is_string());
        let big = "a".repeat(MAX_EXPLORE_LEN + 1);
        let v: Value = serde_json::from_str(&explore(&big, "a")).unwrap();
        assert!(v["error"].as_str().unwrap().contains("too large"));
        let v: Value = serde_json::from_str(&runs_experiment(4, 1 << 12, 1 << 12, 0.1, 1)).unwrap();
        assert!(v["error"].is_string());
    }

    #[test]
    fn random_documents_stay_under_the_bound() {
        let r = runs_against_bound(4, 64, 32, 1.0, 9).unwrap();
        assert!(r.within_bound);
        assert!((r.bound - 3.0 * 64.0 * 32f64.sqrt()).abs() < 1e-9);
        assert_eq!(r.terms.len(), 4);
        let v: Value = serde_json::from_str(&runs_experiment(4, 64, 32, 1.0, 9)).unwrap();
        assert_eq!(v["runs"].as_u64().unwrap() as usize, r.runs);
    }

    #[test]
    fn size_comparison_lists_every_structure() {
        let c = compare_sizes(400, 40, 0.001, 2).unwrap();
        assert_eq!(c.rows.len(), 15);
        assert_eq!(c.n, 401 * 40);
        assert!(c.hprime_runs > 0);
        let plain = c.rows.iter().find(|r| r.structure == "sada").unwrap().bits;
        let sparse = c.rows.iter().find(|r| r.structure == "sada-s").unwrap().bits;
        assert!(sparse < plain);
    }
}
