//! The unary document counting structure and its compressed and filtered
//! variants.
//!
//! `H[1..n-1]` holds, for every boundary between adjacent SA slots, the number
//! of redundant suffixes whose lowest common ancestor sits there. For any
//! locus `[sp, ep]`, `docc = (ep + 1 - sp) - sum(H[sp..ep-1])`. `H` is stored
//! in unary as `H'` (a 1-bit followed by `H[i]` 0-bits), optionally with
//! filters that drop predictable cells from `H'`.

use std::fmt;
use std::str::FromStr;

use crate::bits::{BitBuf, ByteReader, ByteWriter};
use crate::bitvec::{EncodedBitvector, Encoding};
use crate::error::{Error, Result};
use crate::suffix::{LocusRange, TextIndex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    /// Each redundant pair counted at the leftmost LCP minimum between its two slots.
    PerPair,
    /// All contributions of a suffix tree node moved to its first child boundary.
    Aggregated,
}

/// `values[k]` is `H[k + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HArray {
    values: Vec<u32>,
    placement: Placement,
}

impl HArray {
    pub fn build(idx: &TextIndex, placement: Placement) -> Self {
        let per_pair = per_pair_h(idx);
        let values = match placement {
            Placement::PerPair => per_pair,
            Placement::Aggregated => aggregate(idx, &per_pair),
        };
        Self { values, placement }
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn placement(&self) -> Placement {
        self.placement
    }

    pub fn sum(&self) -> u64 {
        self.values.iter().map(|&h| h as u64).sum()
    }

    /// `(ep + 1 - sp) - sum(H[sp..ep-1])`.
    pub fn direct_count(&self, r: LocusRange) -> usize {
        let s: u64 = self.values[r.sp - 1..r.ep - 1].iter().map(|&h| h as u64).sum();
        r.len() - s as usize
    }
}

fn per_pair_h(idx: &TextIndex) -> Vec<u32> {
    let n = idx.len();
    let mut h = vec![0u32; n.saturating_sub(1)];
    for (i, &c) in idx.prev_same_doc().iter().enumerate() {
        if c >= 1 {
            // slots c..=i-1 are strictly between the pair; LCA boundary in c..=i
            let p = idx.rmq_slots(c as usize, i);
            h[p - 1] += 1;
        }
    }
    h
}

fn aggregate(idx: &TextIndex, per_pair: &[u32]) -> Vec<u32> {
    let mut agg = vec![0u32; per_pair.len()];
    idx.for_each_internal_node(|node| {
        let Some(&leader) = node.boundaries.first() else { return };
        let total: u32 = node.boundaries.iter().map(|&b| per_pair[b as usize - 1]).sum();
        // the leader cell lies in [lb, rb-1] and is the last cell of the first child
        debug_assert!(leader as usize > node.lb && leader as usize <= node.rb);
        agg[leader as usize - 1] = total;
    });
    agg
}

/// Prefix sums over `H` for O(1) direct counts of arbitrary slot ranges.
pub(crate) struct DoccTable {
    prefix: Vec<u32>,
}

impl DoccTable {
    pub(crate) fn new(h: &[u32]) -> Self {
        let mut prefix = Vec::with_capacity(h.len() + 1);
        let mut acc = 0u32;
        prefix.push(0);
        for &x in h {
            acc += x;
            prefix.push(acc);
        }
        Self { prefix }
    }

    /// docc of the node covering 0-based slots `lb..=rb`.
    pub(crate) fn docc(&self, lb: usize, rb: usize) -> usize {
        rb + 1 - lb - (self.prefix[rb] - self.prefix[lb]) as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Filter {
    None,
    /// Keeps the cells of nodes with docc > 1.
    Count,
    /// Keeps cells with H > 0.
    Sparse,
    /// Moves cells with H = 1 to a separate bitvector.
    One,
    /// Keeps cells with H > 1; cells with H = 1 go to the one-filter.
    SparsePlusOne,
}

impl Filter {
    fn tag(self) -> u8 {
        match self {
            Filter::None => 0,
            Filter::Count => 1,
            Filter::Sparse => 2,
            Filter::One => 3,
            Filter::SparsePlusOne => 4,
        }
    }

    fn from_tag(t: u8) -> Result<Self> {
        Ok(match t {
            0 => Filter::None,
            1 => Filter::Count,
            2 => Filter::Sparse,
            3 => Filter::One,
            4 => Filter::SparsePlusOne,
            _ => return Err(Error::Format(format!("unknown filter tag {t}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SadaVariant {
    pub hprime_encoding: Encoding,
    pub filter: Filter,
    pub filter_encoding: Encoding,
}

const PRESETS: [(&str, Encoding, Filter, Encoding); 12] = [
    ("sada", Encoding::Plain, Filter::None, Encoding::Plain),
    ("sada-rr", Encoding::RleBlock, Filter::None, Encoding::Plain),
    ("sada-r", Encoding::RleTwoSparse, Filter::None, Encoding::Plain),
    ("sada-d", Encoding::DeltaRle, Filter::None, Encoding::Plain),
    ("sada-p-g", Encoding::Plain, Filter::Count, Encoding::Gap),
    ("sada-p-rr", Encoding::Plain, Filter::Count, Encoding::RleBlock),
    ("sada-rr-g", Encoding::RleBlock, Filter::Count, Encoding::Gap),
    ("sada-rr-rr", Encoding::RleBlock, Filter::Count, Encoding::RleBlock),
    ("sada-s-s", Encoding::Sparse, Filter::Sparse, Encoding::Sparse),
    ("sada-s", Encoding::Sparse, Filter::SparsePlusOne, Encoding::Sparse),
    ("sada-rs", Encoding::RleTwoSparse, Filter::One, Encoding::Sparse),
    ("sada-d-s", Encoding::DeltaRle, Filter::One, Encoding::Sparse),
];

impl SadaVariant {
    pub fn presets() -> impl Iterator<Item = (&'static str, SadaVariant)> {
        PRESETS.iter().map(|&(name, h, f, fe)| {
            (
                name,
                SadaVariant {
                    hprime_encoding: h,
                    filter: f,
                    filter_encoding: fe,
                },
            )
        })
    }

    pub fn preset(name: &str) -> Option<SadaVariant> {
        Self::presets().find(|(n, _)| *n == name).map(|(_, v)| v)
    }

    pub fn preset_names() -> Vec<&'static str> {
        PRESETS.iter().map(|p| p.0).collect()
    }

    /// Preset name, or a descriptive name for custom combinations.
    pub fn name(&self) -> String {
        Self::presets()
            .find(|(_, v)| v == self)
            .map(|(n, _)| n.to_string())
            .unwrap_or_else(|| format!("sada[{}/{:?}/{}]", self.hprime_encoding, self.filter, self.filter_encoding))
    }

    fn write_to(&self, w: &mut ByteWriter) {
        w.put_bytes(self.hprime_encoding.name().as_bytes());
        w.put_u8(self.filter.tag());
        w.put_bytes(self.filter_encoding.name().as_bytes());
    }

    fn read_from(r: &mut ByteReader<'_>) -> Result<Self> {
        let enc = |r: &mut ByteReader<'_>| -> Result<Encoding> {
            let s = std::str::from_utf8(r.get_bytes()?).map_err(|_| Error::Format("bad encoding name".into()))?;
            s.parse()
        };
        let hprime_encoding = enc(r)?;
        let filter = Filter::from_tag(r.get_u8()?)?;
        let filter_encoding = enc(r)?;
        Ok(Self {
            hprime_encoding,
            filter,
            filter_encoding,
        })
    }
}

impl fmt::Display for SadaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for SadaVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::preset(s).ok_or_else(|| Error::UnknownVariant {
            name: s.to_string(),
            valid: Self::preset_names().join(", "),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SadaIndex {
    variant: SadaVariant,
    hprime: EncodedBitvector,
    filter: Option<EncodedBitvector>,
    one_filter: Option<EncodedBitvector>,
    n: usize,
    d: usize,
}

impl SadaIndex {
    /// Builds with aggregated placement, as every preset does.
    pub fn build(idx: &TextIndex, variant: SadaVariant) -> Result<Self> {
        let h = HArray::build(idx, Placement::Aggregated);
        Self::from_h(idx, &h, variant)
    }

    pub fn from_h(idx: &TextIndex, h: &HArray, variant: SadaVariant) -> Result<Self> {
        if variant.filter != Filter::None && h.placement() != Placement::Aggregated {
            return Err(Error::IncompatiblePlacement);
        }
        let values = h.values();
        let cells = values.len();
        let keep: Option<BitBuf> = match variant.filter {
            Filter::None | Filter::One => None,
            Filter::Count => Some(count_filter_bits(idx, values)),
            Filter::Sparse => Some(BitBuf::from_bits(values.iter().map(|&x| x > 0))),
            Filter::SparsePlusOne => Some(BitBuf::from_bits(values.iter().map(|&x| x > 1))),
        };
        let ones: Option<BitBuf> = matches!(variant.filter, Filter::One | Filter::SparsePlusOne)
            .then(|| BitBuf::from_bits(values.iter().map(|&x| x == 1)));
        let mut hp = BitBuf::with_capacity(cells + h.sum() as usize);
        for (i, &x) in values.iter().enumerate() {
            let retained = match variant.filter {
                Filter::None => true,
                Filter::One => x != 1,
                _ => keep.as_ref().unwrap().get(i),
            };
            if retained {
                hp.push(true);
                hp.push_run(false, x as usize);
            }
        }
        Ok(Self {
            variant,
            hprime: EncodedBitvector::new(&hp, variant.hprime_encoding),
            filter: keep.map(|b| EncodedBitvector::new(&b, variant.filter_encoding)),
            one_filter: ones.map(|b| EncodedBitvector::new(&b, variant.filter_encoding)),
            n: idx.len(),
            d: idx.num_docs(),
        })
    }

    pub fn variant(&self) -> SadaVariant {
        self.variant
    }

    pub fn hprime(&self) -> &EncodedBitvector {
        &self.hprime
    }

    pub fn filter(&self) -> Option<&EncodedBitvector> {
        self.filter.as_ref()
    }

    pub fn one_filter(&self) -> Option<&EncodedBitvector> {
        self.one_filter.as_ref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_docs(&self) -> usize {
        self.d
    }

    /// Number of maximal runs of 1-bits in `H'`.
    pub fn count_runs_of_ones(&self) -> usize {
        self.hprime.count_one_runs()
    }

    pub fn size_in_bits(&self) -> usize {
        self.hprime.size_in_bits()
            + self.filter.as_ref().map_or(0, |f| f.size_in_bits())
            + self.one_filter.as_ref().map_or(0, |f| f.size_in_bits())
    }

    /// 1-based position of the `k`-th one of `H'`, with `sel(0) = 0` and a
    /// virtual one at `len + 1` for `k = ones + 1`.
    #[inline]
    fn sel(&self, k: usize) -> usize {
        if k == 0 {
            0
        } else if k > self.hprime.ones() {
            self.hprime.len() + 1
        } else {
            self.hprime.select1_raw(k - 1) + 1
        }
    }

    /// Sum of `H` over retained cells `a+1..=b` (in retained order).
    #[inline]
    fn retained_sum(&self, a: usize, b: usize) -> usize {
        (self.sel(b + 1) - (b + 1)) - (self.sel(a + 1) - (a + 1))
    }

    /// Number of distinct documents in a locus range.
    pub fn count(&self, r: LocusRange) -> Result<usize> {
        r.validate(self.n)?;
        let (sp, ep) = (r.sp, r.ep);
        if sp == ep {
            return Ok(1);
        }
        // (leaves, redundant) with docc = leaves - redundant
        let (leaves, redundant) = match self.variant.filter {
            Filter::None => (2 * (ep - sp) + 1, self.sel(ep) - self.sel(sp)),
            Filter::Count => {
                let f = self.filter.as_ref().unwrap();
                let a = f.rank1_raw(sp - 1);
                let b = f.rank1_raw(ep - 1);
                if a == b {
                    return Ok(1);
                }
                (b - a + 1, self.retained_sum(a, b))
            }
            Filter::Sparse => {
                let f = self.filter.as_ref().unwrap();
                let a = f.rank1_raw(sp - 1);
                let b = f.rank1_raw(ep - 1);
                (ep + 1 - sp, self.retained_sum(a, b))
            }
            Filter::One => {
                let f1 = self.one_filter.as_ref().unwrap();
                let (o_a, o_b) = (f1.rank1_raw(sp - 1), f1.rank1_raw(ep - 1));
                let a = (sp - 1) - o_a;
                let b = (ep - 1) - o_b;
                (ep + 1 - sp, self.retained_sum(a, b) + (o_b - o_a))
            }
            Filter::SparsePlusOne => {
                let f = self.filter.as_ref().unwrap();
                let f1 = self.one_filter.as_ref().unwrap();
                let a = f.rank1_raw(sp - 1);
                let b = f.rank1_raw(ep - 1);
                let ones = f1.rank1_raw(ep - 1) - f1.rank1_raw(sp - 1);
                (ep + 1 - sp, self.retained_sum(a, b) + ones)
            }
        };
        // only a range that is not a locus can drive the count out of [1, occ]
        match leaves.checked_sub(redundant) {
            Some(c) if c >= 1 && c <= r.len() => Ok(c),
            _ => Err(Error::PreconditionViolated(format!("[{sp}, {ep}] is not a locus range"))),
        }
    }

    pub(crate) fn write_to(&self, w: &mut ByteWriter) {
        self.variant.write_to(w);
        w.put_u64(self.n as u64);
        w.put_u64(self.d as u64);
        self.hprime.write_to(w);
        for f in [&self.filter, &self.one_filter] {
            match f {
                Some(bv) => {
                    w.put_u8(1);
                    bv.write_to(w);
                }
                None => w.put_u8(0),
            }
        }
    }

    pub(crate) fn read_from(r: &mut ByteReader<'_>) -> Result<Self> {
        let variant = SadaVariant::read_from(r)?;
        let n = r.get_u64()? as usize;
        let d = r.get_u64()? as usize;
        let hprime = EncodedBitvector::read_from(r)?;
        let opt = |r: &mut ByteReader<'_>| -> Result<Option<EncodedBitvector>> {
            Ok(if r.get_u8()? == 1 {
                Some(EncodedBitvector::read_from(r)?)
            } else {
                None
            })
        };
        let filter = opt(r)?;
        let one_filter = opt(r)?;
        let needs_f = matches!(variant.filter, Filter::Count | Filter::Sparse | Filter::SparsePlusOne);
        let needs_f1 = matches!(variant.filter, Filter::One | Filter::SparsePlusOne);
        if filter.is_some() != needs_f || one_filter.is_some() != needs_f1 {
            return Err(Error::Format("filter components do not match the variant".into()));
        }
        Ok(Self {
            variant,
            hprime,
            filter,
            one_filter,
            n,
            d,
        })
    }
}

/// Marks every child boundary of every node whose subtree spans more than
/// one document.
fn count_filter_bits(idx: &TextIndex, h: &[u32]) -> BitBuf {
    let table = DoccTable::new(h);
    let mut f = BitBuf::zeros(h.len());
    idx.for_each_internal_node(|node| {
        if table.docc(node.lb, node.rb) > 1 {
            for &b in node.boundaries {
                f.set(b as usize - 1, true);
            }
        }
    });
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Collection, IngestOptions};

    fn hand() -> TextIndex {
        TextIndex::build(Collection::ingest_concat(b"ab\0ab\0", 0, IngestOptions::default()).unwrap())
    }

    #[test]
    fn hand_example_h_both_placements() {
        let idx = hand();
        assert_eq!(HArray::build(&idx, Placement::PerPair).values(), &[0, 2, 0, 2, 0]);
        // all four pairs meet at the root, whose leftmost child boundary is slot 2
        assert_eq!(HArray::build(&idx, Placement::Aggregated).values(), &[0, 4, 0, 0, 0]);
    }

    #[test]
    fn hand_example_hprime_and_counts() {
        let idx = hand();
        let h = HArray::build(&idx, Placement::PerPair);
        let s = SadaIndex::from_h(&idx, &h, "sada".parse().unwrap()).unwrap();
        assert_eq!(s.hprime().to_bitbuf(), BitBuf::from_bits("110011001".bytes().map(|b| b == b'1')));
        assert_eq!(s.count(LocusRange::new(3, 4)).unwrap(), 2);
        assert_eq!(s.count(LocusRange::new(5, 6)).unwrap(), 2);
        assert_eq!(s.count(LocusRange::new(1, 6)).unwrap(), 2);
        assert_eq!(s.count_runs_of_ones(), 3);
        let agg = SadaIndex::build(&idx, "sada".parse().unwrap()).unwrap();
        assert_eq!(agg.count_runs_of_ones(), 2);
        assert!(s.count(LocusRange::new(4, 3)).is_err());
        assert!(s.count(LocusRange::new(1, 7)).is_err());
    }

    #[test]
    fn hand_example_sparse_filter() {
        let idx = hand();
        let s = SadaIndex::build(&idx, "sada-s-s".parse().unwrap()).unwrap();
        let f = s.filter().unwrap().to_bitbuf();
        assert_eq!(f, BitBuf::from_bits([false, true, false, false, false]));
        // pruned H values [4]
        assert_eq!(s.hprime().to_bitbuf(), BitBuf::from_bits("10000".bytes().map(|b| b == b'1')));
    }

    #[test]
    fn every_preset_on_hand_example() {
        let idx = hand();
        for (name, v) in SadaVariant::presets() {
            let s = SadaIndex::build(&idx, v).unwrap();
            for (r, want) in [((3, 4), 2), ((5, 6), 2), ((1, 6), 2), ((1, 2), 2), ((2, 2), 1)] {
                assert_eq!(s.count(LocusRange::new(r.0, r.1)).unwrap(), want, "{name} {r:?}");
            }
        }
    }

    #[test]
    fn filters_reject_per_pair_placement() {
        let idx = hand();
        let h = HArray::build(&idx, Placement::PerPair);
        assert_eq!(
            SadaIndex::from_h(&idx, &h, "sada-s".parse().unwrap()),
            Err(Error::IncompatiblePlacement)
        );
        assert!(SadaIndex::from_h(&idx, &h, "sada-rr".parse().unwrap()).is_ok());
    }

    #[test]
    fn unknown_preset_lists_valid_names() {
        match "bogus".parse::<SadaVariant>() {
            Err(Error::UnknownVariant { valid, .. }) => assert!(valid.contains("sada-rr-g")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_document_sums_all_pairs() {
        let idx = TextIndex::build(Collection::from_documents([b"abracadabra"]).unwrap());
        let h = HArray::build(&idx, Placement::Aggregated);
        assert_eq!(h.sum() as usize, idx.len() - 1);
        let s = SadaIndex::build(&idx, SadaVariant::preset("sada").unwrap()).unwrap();
        for r in idx.all_loci() {
            assert_eq!(s.count(r).unwrap(), 1);
        }
    }
}
