use crate::bits::{bit_width, BitBuf, ByteReader, ByteWriter, IntVec, RawBits};
use crate::error::{Error, Result};

/// Elias-Fano coding of a non-decreasing sequence of integers in `[0, universe)`.
///
/// The low `w` bits of each value go to a packed array; the high parts are
/// written in unary into a plain bit array (one 1-bit per value, one 0-bit per
/// bucket). `w` is picked by trying every width and keeping the smallest layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliasFano {
    low: IntVec,
    high: RawBits,
    universe: u64,
    len: usize,
}

fn layout_bits(n: usize, universe: u64, w: u32) -> u64 {
    let high_len = n as u64 + (universe >> w) + 1;
    // payload plus the plain rank directory on the high part
    n as u64 * w as u64 + high_len + high_len.div_ceil(512) * 64
}

impl EliasFano {
    pub fn new(values: &[u64], universe: u64) -> Self {
        debug_assert!(values.windows(2).all(|p| p[0] <= p[1]));
        debug_assert!(values.last().is_none_or(|&v| v < universe.max(1)));
        let n = values.len();
        let max_w = bit_width(universe);
        let w = (0..=max_w)
            .min_by_key(|&w| layout_bits(n, universe, w))
            .unwrap_or(0);
        Self::with_width(values, universe, w)
    }

    pub fn with_width(values: &[u64], universe: u64, w: u32) -> Self {
        let n = values.len();
        let mut low = IntVec::new(w);
        let mut high = BitBuf::with_capacity(n + (universe >> w) as usize + 1);
        let mut bucket = 0u64;
        for &v in values {
            let hb = if w >= 64 { 0 } else { v >> w };
            while bucket < hb {
                high.push(false);
                bucket += 1;
            }
            high.push(true);
            low.push(if w >= 64 { v } else { v & ((1u64 << w) - 1) });
        }
        let buckets = if w >= 64 { 1 } else { (universe >> w) + 1 };
        while bucket < buckets {
            high.push(false);
            bucket += 1;
        }
        Self {
            low,
            high: RawBits::new(high),
            universe,
            len: n,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn universe(&self) -> u64 {
        self.universe
    }

    #[inline]
    fn w(&self) -> u32 {
        self.low.width()
    }

    /// The `k`-th value (0-based).
    #[inline]
    pub fn get(&self, k: usize) -> u64 {
        debug_assert!(k < self.len);
        let hb = (self.high.select1(k) - k) as u64;
        if self.w() >= 64 {
            self.low.get(k)
        } else {
            (hb << self.w()) | self.low.get(k)
        }
    }

    /// Number of values strictly below `x`.
    pub fn rank(&self, x: u64) -> usize {
        if self.len == 0 || x == 0 {
            return 0;
        }
        let w = self.w();
        if w >= 64 {
            return self.low.partition_point(|v| v < x);
        }
        let hb = x >> w;
        let lowx = x & ((1u64 << w) - 1);
        let buckets = self.high.zeros() as u64;
        if hb >= buckets {
            return self.len;
        }
        let hb = hb as usize;
        let start_pos = if hb == 0 { 0 } else { self.high.select0(hb - 1) + 1 };
        let end_pos = self.high.select0(hb);
        let first = start_pos - hb;
        let count = end_pos - start_pos;
        // lows inside one bucket are non-decreasing
        let (mut lo, mut hi) = (first, first + count);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.low.get(mid) < lowx {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub fn size_in_bits(&self) -> usize {
        self.low.size_in_bits() + self.high.size_in_bits()
    }

    pub(crate) fn write_to(&self, w: &mut ByteWriter) {
        w.put_u64(self.universe);
        w.put_u64(self.len as u64);
        self.low.write_to(w);
        self.high.write_to(w);
    }

    pub(crate) fn read_from(r: &mut ByteReader<'_>) -> Result<Self> {
        let universe = r.get_u64()?;
        let len = r.get_u64()? as usize;
        let low = IntVec::read_from(r)?;
        let high = RawBits::read_from(r)?;
        if low.len() != len || high.ones() != len {
            return Err(Error::Format("Elias-Fano component lengths disagree".into()));
        }
        Ok(Self {
            low,
            high,
            universe,
            len,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn get_and_rank_match_sorted_values() {
        let values: Vec<u64> = vec![0, 0, 3, 7, 7, 7, 64, 100, 1000, 1001, 4095];
        for w in 0..=12 {
            let ef = EliasFano::with_width(&values, 4096, w);
            for (k, &v) in values.iter().enumerate() {
                assert_eq!(ef.get(k), v, "w={w} k={k}");
            }
            for x in 0..4100u64 {
                let expect = values.iter().filter(|&&v| v < x).count();
                assert_eq!(ef.rank(x), expect, "w={w} x={x}");
            }
        }
    }

    #[test]
    fn empty_sequence() {
        let ef = EliasFano::new(&[], 1000);
        assert_eq!(ef.rank(500), 0);
        assert!(ef.is_empty());
    }
}
