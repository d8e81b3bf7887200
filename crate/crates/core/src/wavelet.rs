//! Wavelet matrix with rank-based counting of values below a bound, and an
//! optional per-level weight directory for weighted counts.

use crate::bits::{bit_width, BitBuf, ByteReader, ByteWriter};
use crate::bitvec::{EliasFano, EncodedBitvector, Encoding};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaveletMatrix {
    levels: Vec<EncodedBitvector>,
    zeros: Vec<usize>,
    /// Per level, prefix sums of the weights of the zero-bit elements in level order.
    weights: Option<Vec<EliasFano>>,
    len: usize,
}

impl WaveletMatrix {
    pub fn new(values: &[u32], encoding: Encoding) -> Self {
        Self::build(values, None, encoding)
    }

    pub fn weighted(values: &[u32], weights: &[u64], encoding: Encoding) -> Self {
        assert_eq!(values.len(), weights.len());
        Self::build(values, Some(weights), encoding)
    }

    fn build(values: &[u32], weights: Option<&[u64]>, encoding: Encoding) -> Self {
        let max = values.iter().copied().max().unwrap_or(0);
        let depth = bit_width(max as u64).max(1);
        let mut cur: Vec<(u32, u64)> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, weights.map_or(0, |w| w[i])))
            .collect();
        let mut levels = Vec::with_capacity(depth as usize);
        let mut zeros = Vec::with_capacity(depth as usize);
        let mut wdirs = weights.map(|_| Vec::with_capacity(depth as usize));
        for lvl in (0..depth).rev() {
            let bits = BitBuf::from_bits(cur.iter().map(|&(v, _)| (v >> lvl) & 1 == 1));
            levels.push(EncodedBitvector::new(&bits, encoding));
            let (zs, os): (Vec<_>, Vec<_>) = cur.iter().partition(|&&(v, _)| (v >> lvl) & 1 == 0);
            zeros.push(zs.len());
            if let Some(dirs) = wdirs.as_mut() {
                let mut prefix = Vec::with_capacity(zs.len() + 1);
                let mut acc = 0u64;
                prefix.push(0);
                for &(_, w) in &zs {
                    acc += w;
                    prefix.push(acc);
                }
                dirs.push(EliasFano::new(&prefix, acc + 1));
            }
            cur = zs;
            cur.extend(os);
        }
        Self {
            levels,
            zeros,
            weights: wdirs,
            len: values.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn depth(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn get(&self, mut i: usize) -> u32 {
        let mut v = 0u32;
        for (lvl, bv) in self.levels.iter().enumerate() {
            let ones_before = bv.rank1_raw(i);
            let bit = bv.rank1_raw(i + 1) > ones_before;
            v = (v << 1) | bit as u32;
            i = if bit {
                self.zeros[lvl] + ones_before
            } else {
                i - ones_before
            };
        }
        v
    }

    /// Walks the levels for `bound`, calling `take(level, l0, r0)` for each
    /// level where the zero side lies entirely below the bound.
    fn walk(&self, mut l: usize, mut r: usize, bound: u32, mut take: impl FnMut(usize, usize, usize)) {
        let depth = self.depth();
        for (lvl, bv) in self.levels.iter().enumerate() {
            let shift = depth - 1 - lvl as u32;
            let (l1, r1) = (bv.rank1_raw(l), bv.rank1_raw(r));
            let (l0, r0) = (l - l1, r - r1);
            if (bound >> shift) & 1 == 1 {
                take(lvl, l0, r0);
                l = self.zeros[lvl] + l1;
                r = self.zeros[lvl] + r1;
            } else {
                l = l0;
                r = r0;
            }
            if l == r {
                break;
            }
        }
    }

    fn saturates(&self, bound: u64) -> bool {
        bound >= 1u64 << self.depth()
    }

    /// Number of values below `bound` in the 0-based half-open range `[l, r)`.
    pub fn count_less(&self, l: usize, r: usize, bound: u64) -> usize {
        debug_assert!(l <= r && r <= self.len);
        if self.saturates(bound) {
            return r - l;
        }
        let mut total = 0;
        self.walk(l, r, bound as u32, |_, l0, r0| total += r0 - l0);
        total
    }

    /// Sum of weights of values below `bound` in `[l, r)`, or `None` without
    /// weights. Saturated bounds are left to the caller, who knows the total.
    pub fn weighted_count_less(&self, l: usize, r: usize, bound: u64) -> Option<u64> {
        let dirs = self.weights.as_ref()?;
        debug_assert!(!self.saturates(bound));
        let mut total = 0;
        self.walk(l, r, bound as u32, |lvl, l0, r0| total += dirs[lvl].get(r0) - dirs[lvl].get(l0));
        Some(total)
    }

    pub(crate) fn saturates_bound(&self, bound: u64) -> bool {
        self.saturates(bound)
    }

    pub fn size_in_bits(&self) -> usize {
        self.levels.iter().map(|b| b.size_in_bits()).sum::<usize>()
            + self.zeros.len() * 64
            + self
                .weights
                .as_ref()
                .map_or(0, |d| d.iter().map(|e| e.size_in_bits()).sum())
    }

    pub(crate) fn write_to(&self, w: &mut ByteWriter) {
        w.put_u64(self.len as u64);
        w.put_u64(self.levels.len() as u64);
        for (bv, &z) in self.levels.iter().zip(&self.zeros) {
            w.put_u64(z as u64);
            bv.write_to(w);
        }
        match &self.weights {
            Some(dirs) => {
                w.put_u8(1);
                for e in dirs {
                    e.write_to(w);
                }
            }
            None => w.put_u8(0),
        }
    }

    pub(crate) fn read_from(r: &mut ByteReader<'_>) -> Result<Self> {
        let len = r.get_u64()? as usize;
        let depth = r.get_u64()? as usize;
        if depth == 0 || depth > 32 {
            return Err(Error::Format(format!("wavelet depth {depth}")));
        }
        let mut levels = Vec::with_capacity(depth);
        let mut zeros = Vec::with_capacity(depth);
        for _ in 0..depth {
            zeros.push(r.get_u64()? as usize);
            let bv = EncodedBitvector::read_from(r)?;
            if bv.len() != len {
                return Err(Error::Format("wavelet level length mismatch".into()));
            }
            levels.push(bv);
        }
        let weights = if r.get_u8()? == 1 {
            Some((0..depth).map(|_| EliasFano::read_from(r)).collect::<Result<Vec<_>>>()?)
        } else {
            None
        };
        Ok(Self {
            levels,
            zeros,
            weights,
            len,
        })
    }
}
