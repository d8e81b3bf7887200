//! Counting with the interleaved LCP array.
//!
//! Each slot stores the LCP of its suffix with the previous suffix of the
//! same document. A slot in `[sp, ep]` holds a value below `|P|` exactly when
//! it is the first occurrence of its document in that range, so docc is a
//! range count of small values.

use std::fmt;
use std::str::FromStr;

use crate::bits::{ByteReader, ByteWriter};
use crate::bitvec::{EliasFano, Encoding};
use crate::error::{Error, Result};
use crate::suffix::{LocusRange, TextIndex};
use crate::wavelet::WaveletMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlcpArray {
    values: Vec<u32>,
}

impl IlcpArray {
    /// Per-document LCP arrays scattered to SA order, computed in one
    /// Kasai-style pass over the text.
    pub fn build(idx: &TextIndex) -> Self {
        let n = idx.len();
        let sa = idx.sa();
        let prev = idx.prev_same_doc();
        let text = idx.text();
        let mut rank = vec![0u32; n];
        for (i, &p) in sa.iter().enumerate() {
            rank[p as usize] = i as u32;
        }
        let mut values = vec![0u32; n];
        let offsets = idx.collection().doc_offsets();
        for (d, &start) in offsets.iter().enumerate() {
            let end = offsets.get(d + 1).copied().unwrap_or(n);
            let mut h = 0usize;
            for p in start..end {
                let slot = rank[p] as usize;
                let c = prev[slot] as usize;
                if c == 0 {
                    h = 0;
                    continue;
                }
                let q = sa[c - 1] as usize;
                // both suffixes end at this document's sentinel, which cannot match at equal offsets
                while p + h < end && q + h < end && text[p + h] == text[q + h] {
                    h += 1;
                }
                values[slot] = h as u32;
                h = h.saturating_sub(1);
            }
        }
        Self { values }
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Maximal runs of equal values as `(value, length)`.
    pub fn runs(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &v in &self.values {
            match out.last_mut() {
                Some((h, len)) if *h == v => *len += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IlcpMode {
    Plain,
    RunLength,
}

impl IlcpMode {
    pub fn name(self) -> &'static str {
        match self {
            IlcpMode::Plain => "ilcp-plain",
            IlcpMode::RunLength => "ilcp-rl",
        }
    }

    /// Bitvector encoding of the wavelet levels.
    pub fn level_encoding(self) -> Encoding {
        match self {
            IlcpMode::Plain => Encoding::Plain,
            IlcpMode::RunLength => Encoding::RleTwoSparse,
        }
    }
}

impl fmt::Display for IlcpMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IlcpMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ilcp-plain" => Ok(IlcpMode::Plain),
            "ilcp-rl" => Ok(IlcpMode::RunLength),
            _ => Err(Error::UnknownVariant {
                name: s.to_string(),
                valid: "ilcp-plain, ilcp-rl".into(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Plain(WaveletMatrix),
    /// Wavelet matrix over run heads weighted by run length, plus run starts.
    Runs { heads: WaveletMatrix, starts: EliasFano },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlcpIndex {
    mode: IlcpMode,
    repr: Repr,
    n: usize,
    level_encoding: Encoding,
}

impl IlcpIndex {
    pub fn build(idx: &TextIndex, mode: IlcpMode) -> Self {
        Self::from_array(&IlcpArray::build(idx), mode, mode.level_encoding())
    }

    pub fn from_array(ilcp: &IlcpArray, mode: IlcpMode, level_encoding: Encoding) -> Self {
        let n = ilcp.values().len();
        let repr = match mode {
            IlcpMode::Plain => Repr::Plain(WaveletMatrix::new(ilcp.values(), level_encoding)),
            IlcpMode::RunLength => {
                let runs = ilcp.runs();
                let heads: Vec<u32> = runs.iter().map(|r| r.0).collect();
                let lens: Vec<u64> = runs.iter().map(|r| r.1 as u64).collect();
                let mut starts = Vec::with_capacity(runs.len());
                let mut pos = 0u64;
                for &l in &lens {
                    starts.push(pos);
                    pos += l;
                }
                Repr::Runs {
                    heads: WaveletMatrix::weighted(&heads, &lens, level_encoding),
                    starts: EliasFano::new(&starts, n as u64),
                }
            }
        };
        Self {
            mode,
            repr,
            n,
            level_encoding,
        }
    }

    pub fn mode(&self) -> IlcpMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of runs stored (equals `n` in plain mode).
    pub fn stored_elements(&self) -> usize {
        match &self.repr {
            Repr::Plain(wm) => wm.len(),
            Repr::Runs { heads, .. } => heads.len(),
        }
    }

    pub fn get(&self, pos: usize) -> Result<u32> {
        if pos == 0 || pos > self.n {
            return Err(Error::PositionOutOfRange { pos, len: self.n });
        }
        Ok(match &self.repr {
            Repr::Plain(wm) => wm.get(pos - 1),
            Repr::Runs { heads, starts } => heads.get(starts.rank(pos as u64) - 1),
        })
    }

    /// Number of values below `bound` in the 1-based inclusive range `[l, r]`.
    pub fn range_count_less_than(&self, l: usize, r: usize, bound: u64) -> Result<usize> {
        LocusRange::new(l, r).validate(self.n)?;
        let (l, r) = (l - 1, r - 1);
        Ok(match &self.repr {
            Repr::Plain(wm) => wm.count_less(l, r + 1, bound),
            Repr::Runs { heads, starts } => {
                if bound == 0 {
                    return Ok(0);
                }
                // run index holding a position = starts at or before it, minus one
                let ra = starts.rank(l as u64 + 1) - 1;
                let rb = starts.rank(r as u64 + 1) - 1;
                let below = |k: usize| (heads.get(k) as u64) < bound;
                if ra == rb {
                    return Ok(if below(ra) { r - l + 1 } else { 0 });
                }
                let mut total = 0usize;
                if below(ra) {
                    total += starts.get(ra + 1) as usize - l;
                }
                if below(rb) {
                    total += r + 1 - starts.get(rb) as usize;
                }
                if ra + 1 < rb {
                    total += if heads.saturates_bound(bound) {
                        (starts.get(rb) - starts.get(ra + 1)) as usize
                    } else {
                        heads.weighted_count_less(ra + 1, rb, bound).unwrap() as usize
                    };
                }
                total
            }
        })
    }

    pub fn count(&self, r: LocusRange, pattern_len: usize) -> Result<usize> {
        self.range_count_less_than(r.sp, r.ep, pattern_len as u64)
    }

    pub fn size_in_bits(&self) -> usize {
        match &self.repr {
            Repr::Plain(wm) => wm.size_in_bits(),
            Repr::Runs { heads, starts } => heads.size_in_bits() + starts.size_in_bits(),
        }
    }

    pub(crate) fn write_to(&self, w: &mut ByteWriter) {
        w.put_u8(match self.mode {
            IlcpMode::Plain => 0,
            IlcpMode::RunLength => 1,
        });
        w.put_bytes(self.level_encoding.name().as_bytes());
        w.put_u64(self.n as u64);
        match &self.repr {
            Repr::Plain(wm) => wm.write_to(w),
            Repr::Runs { heads, starts } => {
                heads.write_to(w);
                starts.write_to(w);
            }
        }
    }

    pub(crate) fn read_from(r: &mut ByteReader<'_>) -> Result<Self> {
        let mode = match r.get_u8()? {
            0 => IlcpMode::Plain,
            1 => IlcpMode::RunLength,
            t => return Err(Error::Format(format!("unknown ilcp mode {t}"))),
        };
        let level_encoding: Encoding = std::str::from_utf8(r.get_bytes()?)
            .map_err(|_| Error::Format("bad encoding name".into()))?
            .parse()?;
        let n = r.get_u64()? as usize;
        let repr = match mode {
            IlcpMode::Plain => Repr::Plain(WaveletMatrix::read_from(r)?),
            IlcpMode::RunLength => Repr::Runs {
                heads: WaveletMatrix::read_from(r)?,
                starts: EliasFano::read_from(r)?,
            },
        };
        Ok(Self {
            mode,
            repr,
            n,
            level_encoding,
        })
    }
}
