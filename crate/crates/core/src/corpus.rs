//! Document collections: ingestion, synthetic generation, and query pattern
//! extraction.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Terminator byte appended to every document.
pub const SENTINEL: u8 = 0;

/// Default cap on collection size, in bytes. Override with `DCNT_MEM_BUDGET`.
pub const DEFAULT_MEM_BUDGET: u64 = 1 << 28;

pub fn memory_budget() -> u64 {
    std::env::var("DCNT_MEM_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MEM_BUDGET)
}

/// Documents concatenated into one text, each terminated by [`SENTINEL`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collection {
    text: Vec<u8>,
    doc_offsets: Vec<usize>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct IngestOptions {
    /// Accept documents with an empty body.
    pub allow_empty: bool,
}

impl Collection {
    /// Builds a collection from document bodies.
    pub fn from_documents<I, D>(docs: I) -> Result<Self>
    where
        I: IntoIterator<Item = D>,
        D: AsRef<[u8]>,
    {
        Self::from_documents_with(docs, IngestOptions::default())
    }

    pub fn from_documents_with<I, D>(docs: I, opts: IngestOptions) -> Result<Self>
    where
        I: IntoIterator<Item = D>,
        D: AsRef<[u8]>,
    {
        let mut text = Vec::new();
        let mut doc_offsets = Vec::new();
        for (doc, body) in docs.into_iter().enumerate() {
            let body = body.as_ref();
            if body.is_empty() && !opts.allow_empty {
                return Err(Error::EmptyDocument { doc: doc + 1 });
            }
            if body.contains(&SENTINEL) {
                return Err(Error::SentinelInDocument { doc: doc + 1 });
            }
            doc_offsets.push(text.len());
            text.extend_from_slice(body);
            text.push(SENTINEL);
        }
        if doc_offsets.is_empty() {
            return Err(Error::EmptyInput);
        }
        check_budget(text.len() as u64)?;
        Ok(Self { text, doc_offsets })
    }

    /// Splits `bytes` on `separator`; a trailing separator is implied when missing.
    pub fn ingest_concat(bytes: &[u8], separator: u8, opts: IngestOptions) -> Result<Self> {
        if bytes.is_empty() {
            return Err(Error::EmptyInput);
        }
        let body = bytes.strip_suffix(&[separator]).unwrap_or(bytes);
        Self::from_documents_with(body.split(|&b| b == separator), opts)
    }

    /// Serialized form: the concatenated text, re-ingestable with separator 0x00.
    pub fn as_bytes(&self) -> &[u8] {
        &self.text
    }

    #[inline]
    pub fn text(&self) -> &[u8] {
        &self.text
    }

    /// Total length including sentinels.
    #[inline]
    pub fn len(&self) -> usize {
        self.text.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    #[inline]
    pub fn num_docs(&self) -> usize {
        self.doc_offsets.len()
    }

    /// 0-based start offset of every document.
    pub fn doc_offsets(&self) -> &[usize] {
        &self.doc_offsets
    }

    /// Body of document `doc` (1-based), without its sentinel.
    pub fn document(&self, doc: usize) -> &[u8] {
        let start = self.doc_offsets[doc - 1];
        let end = self.doc_end(doc - 1);
        &self.text[start..end]
    }

    /// 0-based position of the sentinel closing the 0-based document `d`.
    fn doc_end(&self, d: usize) -> usize {
        self.doc_offsets.get(d + 1).map_or(self.text.len(), |&s| s) - 1
    }

    /// Document id (1-based) containing 0-based text position `pos`.
    pub fn doc_of(&self, pos: usize) -> usize {
        self.doc_offsets.partition_point(|&s| s <= pos)
    }

    pub fn documents(&self) -> impl Iterator<Item = &[u8]> {
        (1..=self.num_docs()).map(move |d| self.document(d))
    }
}

fn check_budget(requested: u64) -> Result<()> {
    let budget = memory_budget();
    if requested > budget {
        return Err(Error::BudgetExceeded { requested, budget });
    }
    Ok(())
}

/// Parameters of a synthetic versioned collection: one random base sequence
/// duplicated `copies` times with independent point mutations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SyntheticSpec {
    pub base_length: usize,
    pub copies: usize,
    pub mutation_rate: f64,
    pub alphabet_size: usize,
    pub seed: u64,
}

/// The byte used for symbol `k` of a `sigma`-letter alphabet.
pub fn alphabet(sigma: usize) -> Vec<u8> {
    match sigma {
        0..=4 => b"ACGT"[..sigma].to_vec(),
        5..=26 => (b'a'..b'a' + sigma as u8).collect(),
        27..=94 => (b'!'..b'!' + sigma as u8).collect(),
        _ => (1..=sigma as u8).collect(),
    }
}

pub fn generate_dna(spec: &SyntheticSpec) -> Result<Collection> {
    if spec.base_length == 0 || spec.copies == 0 {
        return Err(Error::InvalidParameter("base length and copies must be positive".into()));
    }
    if !(2..=255).contains(&spec.alphabet_size) {
        return Err(Error::InvalidParameter("alphabet size must be in 2..=255".into()));
    }
    if !(0.0..=1.0).contains(&spec.mutation_rate) {
        return Err(Error::InvalidParameter("mutation rate must be in [0, 1]".into()));
    }
    let total = (spec.base_length as u64 + 1)
        .checked_mul(spec.copies as u64)
        .ok_or(Error::BudgetExceeded {
            requested: u64::MAX,
            budget: memory_budget(),
        })?;
    check_budget(total)?;
    let symbols = alphabet(spec.alphabet_size);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let base: Vec<u8> = (0..spec.base_length)
        .map(|_| symbols[rng.gen_range(0..symbols.len())])
        .collect();
    let p = spec.mutation_rate;
    let docs = (0..spec.copies).map(|_| {
        let mut doc = base.clone();
        if p > 0.0 {
            for c in doc.iter_mut() {
                if p >= 1.0 || rng.gen_bool(p) {
                    *c = symbols[rng.gen_range(0..symbols.len())];
                }
            }
        }
        doc
    });
    Collection::from_documents(docs.collect::<Vec<_>>())
}

/// `docs` independent uniform random documents of length `doc_length`.
pub fn generate_random_documents(docs: usize, doc_length: usize, sigma: usize, seed: u64) -> Result<Collection> {
    generate_dna(&SyntheticSpec {
        base_length: doc_length,
        copies: docs,
        mutation_rate: 1.0,
        alphabet_size: sigma,
        seed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    WordList,
    RandomSubstrings,
    Explicit,
}

/// Query patterns; never empty strings, never containing the sentinel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSet {
    patterns: Vec<Vec<u8>>,
    provenance: Provenance,
}

impl PatternSet {
    pub fn new(patterns: Vec<Vec<u8>>, provenance: Provenance) -> Result<Self> {
        for p in &patterns {
            if p.is_empty() {
                return Err(Error::InvalidParameter("empty pattern".into()));
            }
            if p.contains(&SENTINEL) {
                return Err(Error::InvalidParameter("pattern contains the sentinel byte".into()));
            }
        }
        Ok(Self { patterns, provenance })
    }

    /// One pattern per line; blank lines and a trailing `\r` are dropped.
    pub fn parse_lines(data: &[u8], provenance: Provenance) -> Result<Self> {
        let patterns = data
            .split(|&b| b == b'\n')
            .map(|l| l.strip_suffix(b"\r").unwrap_or(l))
            .filter(|l| !l.is_empty())
            .map(<[u8]>::to_vec)
            .collect();
        Self::new(patterns, provenance)
    }

    pub fn to_lines(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for p in &self.patterns {
            out.extend_from_slice(p);
            out.push(b'\n');
        }
        out
    }

    pub fn patterns(&self) -> &[Vec<u8>] {
        &self.patterns
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

/// Parameters of [`extract_patterns`].
#[derive(Clone, Copy, Debug)]
pub struct ExtractParams {
    pub length: usize,
    pub samples: usize,
    pub keep: usize,
    pub seed: u64,
}

/// Samples random substrings of a fixed length from document bodies, drops
/// duplicates and keeps the `keep` with the largest occ/docc ratio.
///
/// `occ_docc` must return `(occ, docc)` for a pattern.
pub fn extract_patterns(
    collection: &Collection,
    params: ExtractParams,
    mut occ_docc: impl FnMut(&[u8]) -> (usize, usize),
) -> Result<PatternSet> {
    let ExtractParams {
        length,
        samples,
        keep,
        seed,
    } = params;
    if length == 0 || keep == 0 || samples < keep {
        return Err(Error::InvalidParameter("need length >= 1 and samples >= keep >= 1".into()));
    }
    // cumulative count of valid start positions per document
    let mut cum = Vec::with_capacity(collection.num_docs());
    let mut total = 0u64;
    for doc in collection.documents() {
        total += (doc.len() + 1).saturating_sub(length) as u64;
        cum.push(total);
    }
    if total == 0 {
        return Err(Error::LengthExceedsDocument { length });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut unique = Vec::new();
    for _ in 0..samples {
        let x = rng.gen_range(0..total);
        let d = cum.partition_point(|&c| c <= x);
        let before = if d == 0 { 0 } else { cum[d - 1] };
        let start = collection.doc_offsets()[d] + (x - before) as usize;
        let s = &collection.text()[start..start + length];
        if seen.insert(s) {
            unique.push(s);
        }
    }
    let mut ranked: Vec<(f64, &[u8])> = unique
        .into_iter()
        .map(|s| {
            let (occ, docc) = occ_docc(s);
            (occ as f64 / docc.max(1) as f64, s)
        })
        .collect();
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    ranked.truncate(keep);
    PatternSet::new(
        ranked.into_iter().map(|(_, s)| s.to_vec()).collect(),
        Provenance::RandomSubstrings,
    )
}
