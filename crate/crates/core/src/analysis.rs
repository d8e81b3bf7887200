//! Runs of 1-bits in `H'` on synthetic versioned collections, against the
//! expected-case bound `(sigma/2 + 1) * m * sqrt(d)` for fully random documents.

use std::fmt::Write as _;

use crate::corpus::{generate_dna, SyntheticSpec};
use crate::error::{Error, Result};
use crate::sada::{HArray, Placement, SadaIndex, SadaVariant};
use crate::suffix::TextIndex;

/// Default collection size per cell.
pub const DEFAULT_TOTAL_SIZE: usize = 1 << 20;
/// Largest collection size accepted unless the caller raises the cap.
pub const DEFAULT_SIZE_CAP: usize = 1 << 22;

/// Expected-case upper bound on the number of 1-runs.
pub fn runs_bound(sigma: usize, m: usize, d: usize) -> f64 {
    (sigma as f64 / 2.0 + 1.0) * m as f64 * (d as f64).sqrt()
}

/// One term of the bound derivation: strings of length `k` and the expected
/// number of them occurring more than once (an upper bound).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundTerm {
    pub i: u32,
    pub length: f64,
    pub expected_repeated: f64,
}

/// Terms `i = 0..terms` with `k_i = log_sigma(m * sqrt(d)) + i` and
/// `E[N(i)] <= m * sqrt(d) / (2 * sigma^i)`.
pub fn bound_terms(sigma: usize, m: usize, d: usize, terms: u32) -> Vec<BoundTerm> {
    let base = m as f64 * (d as f64).sqrt();
    let s = sigma as f64;
    (0..terms)
        .map(|i| BoundTerm {
            i,
            length: base.ln() / s.ln() + i as f64,
            expected_repeated: base / (2.0 * s.powi(i as i32)),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunsCell {
    pub m: usize,
    pub d: usize,
    pub p: f64,
    pub seed: u64,
    pub runs: usize,
    pub bound: f64,
    pub total_size: usize,
}

impl RunsCell {
    pub fn within_bound(&self) -> bool {
        self.runs as f64 <= self.bound
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunsReport {
    pub sigma: usize,
    pub cells: Vec<RunsCell>,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub sigma: usize,
    pub total_size: usize,
    pub doc_lengths: Vec<usize>,
    pub mutation_rates: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub size_cap: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            sigma: 4,
            total_size: DEFAULT_TOTAL_SIZE,
            doc_lengths: (7..=12).map(|e| 1usize << e).collect(),
            mutation_rates: vec![0.001, 0.01, 0.1, 1.0],
            samples: 1,
            seed: 1,
            size_cap: DEFAULT_SIZE_CAP,
        }
    }
}

/// Per-cell seed from the master seed and the cell coordinates.
pub fn cell_seed(master: u64, m: usize, p: f64, sample: usize) -> u64 {
    let mut x = master ^ (m as u64).rotate_left(17) ^ p.to_bits().rotate_left(31) ^ (sample as u64).rotate_left(47);
    // splitmix64 finalizer
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Builds one cell: generates the collection and counts the runs of plain `H'`.
pub fn measure_cell(sigma: usize, m: usize, d: usize, p: f64, seed: u64) -> Result<RunsCell> {
    let collection = generate_dna(&SyntheticSpec {
        base_length: m,
        copies: d,
        mutation_rate: p,
        alphabet_size: sigma,
        seed,
    })?;
    let idx = TextIndex::build(collection);
    let h = HArray::build(&idx, Placement::Aggregated);
    let sada = SadaIndex::from_h(&idx, &h, SadaVariant::preset("sada").expect("plain preset"))?;
    Ok(RunsCell {
        m,
        d,
        p,
        seed,
        runs: sada.count_runs_of_ones(),
        bound: runs_bound(sigma, m, d),
        total_size: m * d,
    })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunsReport> {
    if cfg.total_size > cfg.size_cap {
        return Err(Error::BudgetExceeded {
            requested: cfg.total_size as u64,
            budget: cfg.size_cap as u64,
        });
    }
    let mut jobs = Vec::new();
    for &m in &cfg.doc_lengths {
        if m == 0 || cfg.total_size % m != 0 {
            return Err(Error::InvalidParameter(format!(
                "document length {m} does not divide total size {}",
                cfg.total_size
            )));
        }
        for &p in &cfg.mutation_rates {
            for s in 0..cfg.samples {
                jobs.push((m, cfg.total_size / m, p, cell_seed(cfg.seed, m, p, s)));
            }
        }
    }
    let run = |&(m, d, p, seed): &(usize, usize, f64, u64)| measure_cell(cfg.sigma, m, d, p, seed);
    #[cfg(feature = "parallel")]
    let cells: Result<Vec<RunsCell>> = {
        use rayon::prelude::*;
        jobs.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let cells: Result<Vec<RunsCell>> = jobs.iter().map(run).collect();
    Ok(RunsReport {
        sigma: cfg.sigma,
        cells: cells?,
    })
}

impl RunsReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,d,p,seed,runs,bound,total_size\n");
        for c in &self.cells {
            let _ = writeln!(out, "{},{},{},{},{},{:.1},{}", c.m, c.d, c.p, c.seed, c.runs, c.bound, c.total_size);
        }
        out
    }

    /// Fraction of cells at mutation rate `p` whose runs stay within the bound.
    pub fn fraction_within_bound(&self, p: f64) -> Option<f64> {
        let cells: Vec<_> = self.cells.iter().filter(|c| c.p == p).collect();
        if cells.is_empty() {
            return None;
        }
        Some(cells.iter().filter(|c| c.within_bound()).count() as f64 / cells.len() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_closed_form() {
        let b = runs_bound(4, 1 << 7, 1 << 13);
        assert!((b - 3.0 * 128.0 * 8192f64.sqrt()).abs() < 1e-6);
        assert!((b - 34_755.6).abs() < 1.0);
    }

    #[test]
    fn bound_terms_sum_below_closed_form() {
        let (sigma, m, d) = (4, 256, 4096);
        let terms = bound_terms(sigma, m, d, 40);
        let base = m as f64 * (d as f64).sqrt();
        assert!((terms[0].length - base.log(4.0)).abs() < 1e-9);
        let cover = base + (sigma as f64 - 1.0) * terms.iter().map(|t| t.expected_repeated).sum::<f64>();
        assert!(cover <= runs_bound(sigma, m, d) + 1e-6);
    }

    #[test]
    fn small_grid_is_deterministic_and_bounded() {
        let cfg = ExperimentConfig {
            total_size: 1 << 12,
            doc_lengths: vec![1 << 4, 1 << 6],
            mutation_rates: vec![0.0, 1.0],
            samples: 2,
            seed: 9,
            ..Default::default()
        };
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cells.len(), 8);
        assert!(a.cells.iter().all(|c| c.runs >= 1));
        assert!(a.to_csv().starts_with("m,d,p,seed,runs,bound,total_size\n"));
        assert_eq!(a.fraction_within_bound(1.0), Some(1.0));
    }

    #[test]
    fn rejects_oversized_and_non_dividing() {
        let cfg = ExperimentConfig {
            total_size: 1 << 23,
            ..Default::default()
        };
        assert!(matches!(run_experiment(&cfg), Err(Error::BudgetExceeded { .. })));
        let cfg = ExperimentConfig {
            total_size: 1000,
            doc_lengths: vec![3],
            ..Default::default()
        };
        assert!(run_experiment(&cfg).is_err());
    }
}
