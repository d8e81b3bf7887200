//! Brute-force oracle, corpus statistics and the query timing harness.

use std::fmt::Write as _;
use std::time::Instant;

use crate::corpus::PatternSet;
use crate::counter::{DocumentCounter, Structure};
use crate::error::{Error, Result};
use crate::suffix::{LocusRange, TextIndex};

/// Counts distinct documents by sorting a copy of the document array range.
#[derive(Clone, Copy)]
pub struct Oracle<'a> {
    idx: &'a TextIndex,
}

impl<'a> Oracle<'a> {
    pub fn new(idx: &'a TextIndex) -> Self {
        Self { idx }
    }

    /// Works on any range, not only loci.
    pub fn count(&self, r: LocusRange) -> Result<usize> {
        r.validate(self.idx.len())?;
        let mut ids = self.idx.da()[r.sp - 1..r.ep].to_vec();
        ids.sort_unstable();
        ids.dedup();
        Ok(ids.len())
    }
}

impl DocumentCounter for Oracle<'_> {
    fn name(&self) -> String {
        "brute-d".into()
    }
    fn count(&self, r: LocusRange, _pattern_len: usize) -> Result<usize> {
        Oracle::count(self, r)
    }
    /// Baselines are reported with size 0.
    fn size_in_bits(&self) -> usize {
        0
    }
}

/// Collection and pattern statistics. Pattern averages are over patterns that occur.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusStats {
    pub n: usize,
    pub d: usize,
    pub n_per_d: f64,
    pub patterns: usize,
    pub avg_occ: Option<f64>,
    pub avg_docc: Option<f64>,
    pub occ_per_docc: Option<f64>,
}

impl CorpusStats {
    pub fn csv_header() -> &'static str {
        "n,d,n_per_d,patterns,avg_occ,avg_docc,occ_per_docc"
    }

    pub fn csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.2}"));
        format!(
            "{},{},{:.1},{},{},{},{}",
            self.n,
            self.d,
            self.n_per_d,
            self.patterns,
            opt(self.avg_occ),
            opt(self.avg_docc),
            opt(self.occ_per_docc)
        )
    }
}

pub fn table1_stats(idx: &TextIndex, patterns: &PatternSet) -> CorpusStats {
    let oracle = Oracle::new(idx);
    let (mut found, mut occ, mut docc) = (0usize, 0u64, 0u64);
    for p in patterns.patterns() {
        if let Some(r) = idx.find(p) {
            found += 1;
            occ += r.len() as u64;
            docc += oracle.count(r).expect("find returns valid ranges") as u64;
        }
    }
    let avg = |x: u64| (found > 0).then(|| x as f64 / found as f64);
    CorpusStats {
        n: idx.len(),
        d: idx.num_docs(),
        n_per_d: idx.len() as f64 / idx.num_docs() as f64,
        patterns: patterns.len(),
        avg_occ: avg(occ),
        avg_docc: avg(docc),
        occ_per_docc: (docc > 0).then(|| occ as f64 / docc as f64),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub structure: String,
    pub variant: String,
    pub size_bits: usize,
    pub bpc: f64,
    pub avg_us: Option<f64>,
    pub median_us: Option<f64>,
    pub queries: usize,
    pub divergences: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub stats: CorpusStats,
    pub repetitions: usize,
    pub rows: Vec<BenchRow>,
}

/// Verifies every structure against the oracle on every pattern, then times
/// `count` over `repetitions` passes through the located patterns. Pattern
/// lookup is done once up front and is not timed.
pub fn run_bench(idx: &TextIndex, structures: &[Structure], patterns: &PatternSet, repetitions: usize) -> Result<BenchReport> {
    let oracle = Oracle::new(idx);
    let located: Vec<(usize, LocusRange, usize)> = patterns
        .patterns()
        .iter()
        .enumerate()
        .filter_map(|(k, p)| idx.find(p).map(|r| (k, r, p.len())))
        .collect();
    let expected: Vec<usize> = located
        .iter()
        .map(|&(_, r, _)| oracle.count(r))
        .collect::<Result<_>>()?;
    for s in structures {
        for (&(k, r, len), &want) in located.iter().zip(&expected) {
            // an error on a genuine locus is a divergence too; it is reported as 0
            let got = s.count(r, len).unwrap_or(0);
            if got != want {
                return Err(Error::VerificationFailed {
                    structure: s.name(),
                    pattern: String::from_utf8_lossy(&patterns.patterns()[k]).into_owned(),
                    got,
                    expected: want,
                });
            }
        }
    }
    let n = idx.len();
    let mut rows = Vec::with_capacity(structures.len() + 1);
    let time = |family: &str, counter: &dyn DocumentCounter| -> BenchRow {
        let (avg_us, median_us) = time_queries(counter, &located, repetitions);
        let size_bits = counter.size_in_bits();
        BenchRow {
            structure: family.to_string(),
            variant: counter.name(),
            size_bits,
            bpc: size_bits as f64 / n as f64,
            avg_us,
            median_us,
            queries: located.len(),
            divergences: 0,
        }
    };
    rows.push(time("baseline", &oracle));
    for s in structures {
        rows.push(time(s.family(), s));
    }
    Ok(BenchReport {
        stats: table1_stats(idx, patterns),
        repetitions,
        rows,
    })
}

/// Mean and median of per-pass mean query times, in microseconds.
fn time_queries(counter: &dyn DocumentCounter, located: &[(usize, LocusRange, usize)], repetitions: usize) -> (Option<f64>, Option<f64>) {
    if repetitions == 0 || located.is_empty() {
        return (None, None);
    }
    let mut means = Vec::with_capacity(repetitions);
    let mut sink = 0usize;
    for _ in 0..repetitions {
        let start = Instant::now();
        for &(_, r, len) in located {
            sink = sink.wrapping_add(counter.count(r, len).unwrap_or(0));
        }
        means.push(start.elapsed().as_secs_f64() * 1e6 / located.len() as f64);
    }
    std::hint::black_box(sink);
    let avg = means.iter().sum::<f64>() / means.len() as f64;
    means.sort_by(f64::total_cmp);
    let mid = means.len() / 2;
    let median = if means.len() % 2 == 1 {
        means[mid]
    } else {
        (means[mid - 1] + means[mid]) / 2.0
    };
    (Some(avg), Some(median))
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.4}"));
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# timing: {} passes over the located patterns, per-pass mean; find excluded; baseline size reported as 0",
            self.repetitions
        );
        out.push_str("structure,variant,size_bits,bpc,avg_us,median_us,queries,divergences\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{:.6},{},{},{},{}",
                r.structure,
                r.variant,
                r.size_bits,
                r.bpc,
                opt(r.avg_us),
                opt(r.median_us),
                r.queries,
                r.divergences
            );
        }
        out
    }

    /// Whitespace-separated `bpc avg_us label` lines for a size/time scatter plot.
    pub fn to_dat(&self) -> String {
        let mut out = String::from("# bpc avg_us variant\n");
        for r in &self.rows {
            if let Some(t) = r.avg_us {
                let _ = writeln!(out, "{:.6} {:.4} {}", r.bpc, t, r.variant);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::corpus::{generate_random_documents, Collection, IngestOptions, Provenance};
    use crate::counter::StructureKind;

    fn hand() -> TextIndex {
        TextIndex::build(Collection::ingest_concat(b"ab\0ab\0", 0, IngestOptions::default()).unwrap())
    }

    #[test]
    fn oracle_hand_and_hash_set() {
        let idx = hand();
        let o = Oracle::new(&idx);
        assert_eq!(o.count(LocusRange::new(3, 4)).unwrap(), 2);
        assert_eq!(o.count(LocusRange::new(5, 5)).unwrap(), 1);
        assert!(o.count(LocusRange::new(2, 1)).is_err());
        let idx = TextIndex::build(generate_random_documents(20, 30, 4, 3).unwrap());
        let o = Oracle::new(&idx);
        for sp in (1..=idx.len()).step_by(7) {
            for ep in (sp..=idx.len()).step_by(13) {
                let set: HashSet<u32> = idx.da()[sp - 1..ep].iter().copied().collect();
                assert_eq!(o.count(LocusRange::new(sp, ep)).unwrap(), set.len());
            }
        }
    }

    #[test]
    fn hand_bench_all_structures() {
        let idx = hand();
        let structures: Vec<Structure> = StructureKind::all().into_iter().map(|k| k.build(&idx, Some(256)).unwrap()).collect();
        let pats = PatternSet::new(vec![b"ab".to_vec(), b"b".to_vec(), b"zz".to_vec()], Provenance::Explicit).unwrap();
        let report = run_bench(&idx, &structures, &pats, 3).unwrap();
        assert_eq!(report.rows.len(), 16);
        assert_eq!(report.rows[0].size_bits, 0);
        assert!(report.rows.iter().all(|r| r.queries == 2 && r.avg_us.is_some()));
        let csv = report.to_csv();
        assert!(csv.contains("structure,variant,size_bits,bpc,avg_us,median_us,queries,divergences"));
        assert_eq!(report.stats.d, 2);
        let sizes_only = run_bench(&idx, &structures, &pats, 0).unwrap();
        assert!(sizes_only.rows.iter().all(|r| r.avg_us.is_none()));
    }

    #[test]
    fn stats_hand_and_empty() {
        let idx = hand();
        let pats = PatternSet::new(vec![b"ab".to_vec()], Provenance::Explicit).unwrap();
        let s = table1_stats(&idx, &pats);
        assert_eq!((s.n, s.d), (6, 2));
        assert_eq!((s.avg_occ, s.avg_docc, s.occ_per_docc), (Some(2.0), Some(2.0), Some(1.0)));
        let empty = table1_stats(&idx, &PatternSet::new(vec![], Provenance::Explicit).unwrap());
        assert_eq!(empty.avg_occ, None);
        assert!(empty.csv_row().ends_with(",,,"));
    }

    #[test]
    fn divergence_is_reported() {
        let idx = hand();
        let other = TextIndex::build(Collection::from_documents([&b"ab"[..], b"ab", b"ab"]).unwrap());
        // a structure built over a different collection disagrees with this oracle
        let wrong = StructureKind::Sada(crate::sada::SadaVariant::preset("sada").unwrap()).build(&other, None).unwrap();
        let pats = PatternSet::new(vec![b"\x01".to_vec(), b"ab".to_vec()], Provenance::Explicit).unwrap();
        match run_bench(&idx, &[wrong], &pats, 1) {
            Err(Error::VerificationFailed { pattern, .. }) => assert_eq!(pattern, "ab"),
            other => panic!("{other:?}"),
        }
    }
}
