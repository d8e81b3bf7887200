//! Bitvectors with a common access/rank/select contract over six physical
//! encodings.
//!
//! Positions and ranks in the public API are 1-based: `rank1(i)` counts the
//! ones in `B[1..=i]` and `select1(k)` is the position of the `k`-th one.
//! `rank1(0) = 0` and `select1(0) = 0` by convention.
//!
//! | encoding | layout |
//! | --- | --- |
//! | `Plain` | raw bits, popcount directory every 512 bits, sampled select |
//! | `RleBlock` | delta-coded `(zeros, ones)` run pairs in 32-byte blocks with per-block bit/one counts |
//! | `RleTwoSparse` | 1-run start positions and 1-run starts in the ones space, both Elias-Fano |
//! | `Gap` | delta-coded distances between ones in 32-byte blocks |
//! | `DeltaRle` | delta-coded run pairs cut every 128 ones; three Elias-Fano block directories |
//! | `Sparse` | Elias-Fano over the positions of the ones |

mod elias_fano;
mod rle_sparse;
mod runcode;

pub use elias_fano::EliasFano;
pub use rle_sparse::RleSparse;
pub use runcode::{BlockedRuns, DeltaRuns, ItemMode};

use std::fmt;
use std::str::FromStr;

use crate::bits::{BitBuf, ByteReader, ByteWriter, RawBits};
use crate::error::{Error, Result};

/// Default size of an encoded block for `RleBlock` and `Gap`.
pub const RLE_BLOCK_BYTES: usize = 32;
/// Default number of ones per block for `DeltaRle`.
pub const DELTA_RLE_BLOCK_ONES: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Encoding {
    Plain,
    RleBlock,
    RleTwoSparse,
    Gap,
    DeltaRle,
    Sparse,
}

impl Encoding {
    pub const ALL: [Encoding; 6] = [
        Encoding::Plain,
        Encoding::RleBlock,
        Encoding::RleTwoSparse,
        Encoding::Gap,
        Encoding::DeltaRle,
        Encoding::Sparse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Encoding::Plain => "plain",
            Encoding::RleBlock => "rle_block",
            Encoding::RleTwoSparse => "rle_two_sparse",
            Encoding::Gap => "gap",
            Encoding::DeltaRle => "delta_rle",
            Encoding::Sparse => "sparse",
        }
    }

    fn tag(self) -> u8 {
        match self {
            Encoding::Plain => 0,
            Encoding::RleBlock => 1,
            Encoding::RleTwoSparse => 2,
            Encoding::Gap => 3,
            Encoding::DeltaRle => 4,
            Encoding::Sparse => 5,
        }
    }

    fn from_tag(tag: u8) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.tag() == tag)
            .ok_or_else(|| Error::Format(format!("unknown bitvector encoding tag {tag}")))
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::UnknownVariant {
                name: s.to_string(),
                valid: Self::ALL.map(|e| e.name()).join(", "),
            })
    }
}

/// Tunable block sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EncodingParams {
    pub rle_block_bytes: usize,
    pub delta_rle_block_ones: usize,
}

impl Default for EncodingParams {
    fn default() -> Self {
        Self {
            rle_block_bytes: RLE_BLOCK_BYTES,
            delta_rle_block_ones: DELTA_RLE_BLOCK_ONES,
        }
    }
}

/// Elias-Fano over the positions of the ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseBits {
    ef: EliasFano,
    len: usize,
}

impl SparseBits {
    pub fn new(bits: &BitBuf) -> Self {
        let mut positions = Vec::new();
        let mut pos = 0u64;
        for (bit, run) in bits.runs() {
            if bit {
                positions.extend(pos..pos + run as u64);
            }
            pos += run as u64;
        }
        Self::from_positions(&positions, bits.len())
    }

    pub fn from_positions(positions: &[u64], len: usize) -> Self {
        Self {
            ef: EliasFano::new(positions, len as u64),
            len,
        }
    }

    fn rank1(&self, i: usize) -> usize {
        self.ef.rank(i as u64)
    }

    fn select1(&self, k: usize) -> usize {
        self.ef.get(k) as usize
    }

    fn select0(&self, k: usize) -> usize {
        // ones before the k-th zero: number of j with pos_j - j <= k
        let (mut lo, mut hi) = (0, self.ef.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.ef.get(mid) as usize - mid <= k {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        k + lo
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Plain(RawBits),
    RleBlock(BlockedRuns),
    RleTwoSparse(RleSparse),
    Gap(BlockedRuns),
    DeltaRle(DeltaRuns),
    Sparse(SparseBits),
}

/// An immutable bitvector under one of the [`Encoding`]s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedBitvector {
    repr: Repr,
    len: usize,
    ones: usize,
}

macro_rules! dispatch {
    ($self:expr, $v:ident => $e:expr) => {
        match &$self.repr {
            Repr::Plain($v) => $e,
            Repr::RleBlock($v) => $e,
            Repr::RleTwoSparse($v) => $e,
            Repr::Gap($v) => $e,
            Repr::DeltaRle($v) => $e,
            Repr::Sparse($v) => $e,
        }
    };
}

impl EncodedBitvector {
    pub fn new(bits: &BitBuf, encoding: Encoding) -> Self {
        Self::with_params(bits, encoding, EncodingParams::default())
    }

    pub fn with_params(bits: &BitBuf, encoding: Encoding, params: EncodingParams) -> Self {
        let repr = match encoding {
            Encoding::Plain => Repr::Plain(RawBits::new(bits.clone())),
            Encoding::RleBlock => Repr::RleBlock(BlockedRuns::new(bits, ItemMode::Runs, params.rle_block_bytes)),
            Encoding::RleTwoSparse => Repr::RleTwoSparse(RleSparse::new(bits)),
            Encoding::Gap => Repr::Gap(BlockedRuns::new(bits, ItemMode::Gaps, params.rle_block_bytes)),
            Encoding::DeltaRle => Repr::DeltaRle(DeltaRuns::new(bits, params.delta_rle_block_ones)),
            Encoding::Sparse => Repr::Sparse(SparseBits::new(bits)),
        };
        Self {
            repr,
            len: bits.len(),
            ones: bits.count_ones(),
        }
    }

    /// Builds a `Sparse` vector straight from sorted 0-based positions.
    pub fn sparse_from_positions(positions: &[u64], len: usize) -> Self {
        Self {
            repr: Repr::Sparse(SparseBits::from_positions(positions, len)),
            len,
            ones: positions.len(),
        }
    }

    pub fn encoding(&self) -> Encoding {
        match self.repr {
            Repr::Plain(_) => Encoding::Plain,
            Repr::RleBlock(_) => Encoding::RleBlock,
            Repr::RleTwoSparse(_) => Encoding::RleTwoSparse,
            Repr::Gap(_) => Encoding::Gap,
            Repr::DeltaRle(_) => Encoding::DeltaRle,
            Repr::Sparse(_) => Encoding::Sparse,
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
    pub fn ones(&self) -> usize {
        self.ones
    }

    #[inline]
    pub fn zeros(&self) -> usize {
        self.len - self.ones
    }

    /// Ones in the first `i` bits (0-based exclusive prefix); no bounds check.
    #[inline]
    pub(crate) fn rank1_raw(&self, i: usize) -> usize {
        dispatch!(self, v => v.rank1(i))
    }

    /// 0-based position of the 0-based `k`-th one; no bounds check.
    #[inline]
    pub(crate) fn select1_raw(&self, k: usize) -> usize {
        dispatch!(self, v => v.select1(k))
    }

    #[inline]
    pub(crate) fn select0_raw(&self, k: usize) -> usize {
        dispatch!(self, v => v.select0(k))
    }

    /// Bit at 1-based position `i`.
    pub fn access(&self, i: usize) -> Result<bool> {
        self.check_pos(i, 1)?;
        Ok(match &self.repr {
            Repr::Plain(v) => v.get(i - 1),
            _ => self.rank1_raw(i) > self.rank1_raw(i - 1),
        })
    }

    /// Ones in `B[1..=i]`, for `0 <= i <= len`.
    pub fn rank1(&self, i: usize) -> Result<usize> {
        self.check_pos(i, 0)?;
        Ok(self.rank1_raw(i))
    }

    pub fn rank0(&self, i: usize) -> Result<usize> {
        Ok(i - self.rank1(i)?)
    }

    /// Position of the `k`-th one; `select1(0) = 0`.
    pub fn select1(&self, k: usize) -> Result<usize> {
        if k == 0 {
            return Ok(0);
        }
        if k > self.ones {
            return Err(Error::SelectOutOfRange {
                rank: k,
                available: self.ones,
            });
        }
        Ok(self.select1_raw(k - 1) + 1)
    }

    /// Position of the `k`-th zero; `select0(0) = 0`.
    pub fn select0(&self, k: usize) -> Result<usize> {
        if k == 0 {
            return Ok(0);
        }
        if k > self.zeros() {
            return Err(Error::SelectOutOfRange {
                rank: k,
                available: self.zeros(),
            });
        }
        Ok(self.select0_raw(k - 1) + 1)
    }

    fn check_pos(&self, i: usize, min: usize) -> Result<()> {
        if i < min || i > self.len {
            Err(Error::PositionOutOfRange { pos: i, len: self.len })
        } else {
            Ok(())
        }
    }

    /// Size of the payload and its directories, in bits.
    pub fn size_in_bits(&self) -> usize {
        match &self.repr {
            Repr::Plain(v) => v.size_in_bits(),
            Repr::RleBlock(v) | Repr::Gap(v) => v.size_in_bits(),
            Repr::RleTwoSparse(v) => v.size_in_bits(),
            Repr::DeltaRle(v) => v.size_in_bits(),
            Repr::Sparse(v) => v.ef.size_in_bits(),
        }
    }

    /// Decodes the logical bit sequence.
    pub fn to_bitbuf(&self) -> BitBuf {
        if let Repr::Plain(v) = &self.repr {
            return v.bits().clone();
        }
        let mut out = BitBuf::with_capacity(self.len);
        for k in 0..self.ones {
            let p = self.select1_raw(k);
            out.pad_to(p);
            out.push(true);
        }
        out.pad_to(self.len);
        out
    }

    /// Number of maximal runs of ones.
    pub fn count_one_runs(&self) -> usize {
        match &self.repr {
            Repr::RleTwoSparse(v) => v.runs(),
            _ => self.to_bitbuf().runs().filter(|&(b, _)| b).count(),
        }
    }

    /// Serialized form: tag byte, u64 length, u64 ones, then the payload with
    /// a u64 byte-length prefix. All integers little-endian.
    pub fn write_to(&self, w: &mut ByteWriter) {
        let mut p = ByteWriter::new();
        match &self.repr {
            Repr::Plain(v) => v.write_to(&mut p),
            Repr::RleBlock(v) | Repr::Gap(v) => v.write_to(&mut p),
            Repr::RleTwoSparse(v) => v.write_to(&mut p),
            Repr::DeltaRle(v) => v.write_to(&mut p),
            Repr::Sparse(v) => {
                p.put_u64(v.len as u64);
                v.ef.write_to(&mut p);
            }
        }
        w.put_u8(self.encoding().tag());
        w.put_u64(self.len as u64);
        w.put_u64(self.ones as u64);
        w.put_bytes(&p.buf);
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = ByteWriter::new();
        self.write_to(&mut w);
        w.buf
    }

    pub fn read_from(r: &mut ByteReader<'_>) -> Result<Self> {
        let encoding = Encoding::from_tag(r.get_u8()?)?;
        let len = r.get_u64()? as usize;
        let ones = r.get_u64()? as usize;
        let payload = r.get_bytes()?;
        let mut p = ByteReader::new(payload);
        let repr = match encoding {
            Encoding::Plain => Repr::Plain(RawBits::read_from(&mut p)?),
            Encoding::RleBlock => Repr::RleBlock(BlockedRuns::read_from(&mut p)?),
            Encoding::Gap => Repr::Gap(BlockedRuns::read_from(&mut p)?),
            Encoding::RleTwoSparse => Repr::RleTwoSparse(RleSparse::read_from(&mut p)?),
            Encoding::DeltaRle => Repr::DeltaRle(DeltaRuns::read_from(&mut p)?),
            Encoding::Sparse => {
                let slen = p.get_u64()? as usize;
                Repr::Sparse(SparseBits {
                    ef: EliasFano::read_from(&mut p)?,
                    len: slen,
                })
            }
        };
        let bv = Self { repr, len, ones };
        let (inner_len, inner_ones) = match &bv.repr {
            Repr::Plain(v) => (v.len(), v.ones()),
            Repr::RleBlock(v) | Repr::Gap(v) => (v.len(), v.ones()),
            Repr::RleTwoSparse(v) => (v.len(), v.ones()),
            Repr::DeltaRle(v) => (v.len(), v.ones()),
            Repr::Sparse(v) => (v.len, v.ef.len()),
        };
        if inner_len != len || inner_ones != ones || p.remaining() != 0 {
            return Err(Error::Format("bitvector header disagrees with payload".into()));
        }
        Ok(bv)
    }

    pub fn from_bytes(data: &[u8]) -> Result<Self> {
        let mut r = ByteReader::new(data);
        let bv = Self::read_from(&mut r)?;
        if r.remaining() != 0 {
            return Err(Error::Format("trailing bytes after bitvector".into()));
        }
        Ok(bv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> BitBuf {
        BitBuf::from_bits(s.bytes().map(|b| b == b'1'))
    }

    #[test]
    fn hand_vector_under_every_encoding() {
        let bits = parse("110011001");
        for enc in Encoding::ALL {
            let v = EncodedBitvector::new(&bits, enc);
            assert_eq!(v.rank1(9).unwrap(), 5, "{enc}");
            assert_eq!(v.rank1(0).unwrap(), 0);
            let sel: Vec<_> = (1..=5).map(|k| v.select1(k).unwrap()).collect();
            assert_eq!(sel, vec![1, 2, 5, 6, 9], "{enc}");
            let sel0: Vec<_> = (1..=4).map(|k| v.select0(k).unwrap()).collect();
            assert_eq!(sel0, vec![3, 4, 7, 8], "{enc}");
            assert_eq!(v.count_one_runs(), 3, "{enc}");
            assert_eq!(v.to_bitbuf(), bits, "{enc}");
        }
    }

    #[test]
    fn all_zeros_has_no_ones() {
        let bits = BitBuf::zeros(100);
        for enc in Encoding::ALL {
            let v = EncodedBitvector::new(&bits, enc);
            assert_eq!(v.ones(), 0);
            assert_eq!(v.rank1(100).unwrap(), 0);
            assert_eq!(
                v.select1(1),
                Err(Error::SelectOutOfRange { rank: 1, available: 0 }),
                "{enc}"
            );
            assert_eq!(v.select0(100).unwrap(), 100);
            assert_eq!(v.count_one_runs(), 0);
        }
    }

    #[test]
    fn out_of_range_positions() {
        let v = EncodedBitvector::new(&parse("101"), Encoding::Plain);
        assert!(v.access(0).is_err());
        assert!(v.access(4).is_err());
        assert!(v.rank1(4).is_err());
        assert!(v.select0(2).is_err());
    }

    #[test]
    fn serialization_header_layout() {
        let v = EncodedBitvector::new(&parse("110011001"), Encoding::Gap);
        let bytes = v.to_bytes();
        assert_eq!(bytes[0], 3);
        assert_eq!(u64::from_le_bytes(bytes[1..9].try_into().unwrap()), 9);
        assert_eq!(u64::from_le_bytes(bytes[9..17].try_into().unwrap()), 5);
        let plen = u64::from_le_bytes(bytes[17..25].try_into().unwrap()) as usize;
        assert_eq!(bytes.len(), 25 + plen);
        assert_eq!(EncodedBitvector::from_bytes(&bytes).unwrap(), v);
        assert!(EncodedBitvector::from_bytes(&bytes[..bytes.len() - 1]).is_err());
    }

    #[test]
    fn encoding_names_parse() {
        for e in Encoding::ALL {
            assert_eq!(e.name().parse::<Encoding>().unwrap(), e);
        }
        assert!("bogus".parse::<Encoding>().is_err());
    }
}
