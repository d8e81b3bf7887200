#![allow(dead_code)]

use std::io::Write;

use doccount::suffix::{LocusRange, TextIndex};

/// Distinct documents in a range, by marking ids in a scratch table.
pub struct StampOracle {
    stamp: Vec<u32>,
    round: u32,
}

impl StampOracle {
    pub fn new(docs: usize) -> Self {
        Self {
            stamp: vec![0; docs + 1],
            round: 0,
        }
    }

    pub fn docc(&mut self, idx: &TextIndex, r: LocusRange) -> usize {
        self.round += 1;
        let mut distinct = 0;
        for &d in &idx.da()[r.sp - 1..r.ep] {
            if self.stamp[d as usize] != self.round {
                self.stamp[d as usize] = self.round;
                distinct += 1;
            }
        }
        distinct
    }
}

/// Every locus with the length of a pattern that has it as its range:
/// internal nodes use their string depth, leaves one more than the longest
/// LCP with a neighbour.
pub fn loci_with_lengths(idx: &TextIndex) -> Vec<(LocusRange, usize)> {
    let n = idx.len();
    let lcp = idx.lcp();
    let mut out: Vec<(LocusRange, usize)> = (0..n)
        .map(|i| {
            let next = if i + 1 < n { lcp[i + 1] } else { 0 };
            (LocusRange::new(i + 1, i + 1), lcp[i].max(next) as usize + 1)
        })
        .collect();
    idx.for_each_internal_node(|node| {
        if node.depth > 0 {
            out.push((node.locus(), node.depth as usize));
        }
    });
    out
}

/// Writes straight to the process stderr so the line shows even when the
/// test harness captures output.
pub fn report(line: &str) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{line}");
}
