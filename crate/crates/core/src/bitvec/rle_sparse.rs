use super::elias_fano::EliasFano;
use super::runcode::items_of;
use crate::bits::{BitBuf, ByteReader, ByteWriter};
use crate::error::Result;

/// Run-length bitvector held in two sparse sequences: the start position of
/// every run of ones, and the number of ones preceding every run (i.e. the run
/// starts in the concatenation of all 1-runs). The 0-run starts follow as
/// `run_start + run_length`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RleSparse {
    starts: EliasFano,
    one_starts: EliasFano,
    len: usize,
    ones: usize,
}

impl RleSparse {
    pub fn new(bits: &BitBuf) -> Self {
        let (items, _) = items_of(bits);
        let mut starts = Vec::with_capacity(items.len());
        let mut one_starts = Vec::with_capacity(items.len());
        let (mut pos, mut ones) = (0u64, 0u64);
        for (z, o) in items {
            pos += z;
            starts.push(pos);
            one_starts.push(ones);
            pos += o;
            ones += o;
        }
        Self {
            starts: EliasFano::new(&starts, bits.len() as u64),
            one_starts: EliasFano::new(&one_starts, ones.max(1)),
            len: bits.len(),
            ones: ones as usize,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn ones(&self) -> usize {
        self.ones
    }

    pub fn runs(&self) -> usize {
        self.starts.len()
    }

    #[inline]
    fn run_end_ones(&self, r: usize) -> usize {
        if r + 1 < self.one_starts.len() {
            self.one_starts.get(r + 1) as usize
        } else {
            self.ones
        }
    }

    pub fn rank1(&self, i: usize) -> usize {
        let k = self.starts.rank(i as u64);
        if k == 0 {
            return 0;
        }
        let r = k - 1;
        let s = self.starts.get(r) as usize;
        let before = self.one_starts.get(r) as usize;
        let run_len = self.run_end_ones(r) - before;
        before + (i - s).min(run_len)
    }

    pub fn select1(&self, k: usize) -> usize {
        let r = self.one_starts.rank(k as u64 + 1) - 1;
        self.starts.get(r) as usize + (k - self.one_starts.get(r) as usize)
    }

    pub fn select0(&self, k: usize) -> usize {
        // zeros preceding run r: starts[r] - one_starts[r], non-decreasing in r
        let (mut lo, mut hi) = (0, self.starts.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if (self.starts.get(mid) - self.one_starts.get(mid)) as usize <= k {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo == 0 {
            k
        } else {
            k + self.run_end_ones(lo - 1)
        }
    }

    pub fn size_in_bits(&self) -> usize {
        self.starts.size_in_bits() + self.one_starts.size_in_bits()
    }

    pub(crate) fn write_to(&self, w: &mut ByteWriter) {
        w.put_u64(self.len as u64);
        w.put_u64(self.ones as u64);
        self.starts.write_to(w);
        self.one_starts.write_to(w);
    }

    pub(crate) fn read_from(r: &mut ByteReader<'_>) -> Result<Self> {
        let len = r.get_u64()? as usize;
        let ones = r.get_u64()? as usize;
        let starts = EliasFano::read_from(r)?;
        let one_starts = EliasFano::read_from(r)?;
        Ok(Self {
            starts,
            one_starts,
            len,
            ones,
        })
    }
}
