//! Delta-coded run-length bitvectors.
//!
//! A bit sequence is viewed as items `(z, o)`: `z >= 0` zeros followed by
//! `o >= 1` ones, plus implicit trailing zeros. Items are written as
//! `delta(z + 1)` then `delta(o)`; in gap mode every item has `o = 1` and only
//! `delta(z + 1)` is written.
//!
//! [`BlockedRuns`] packs items into fixed-size blocks of encoded data, each with
//! the number of bits and ones preceding it. [`DeltaRuns`] cuts the item stream
//! every time a block has collected enough ones and indexes the block starts
//! with three Elias-Fano sequences.

use super::elias_fano::EliasFano;
use crate::bits::{delta_len, BitBuf, BitReader, ByteReader, ByteWriter, IntVec};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ItemMode {
    Runs,
    Gaps,
}

/// Splits a bit sequence into `(zeros, ones)` items. Returns items and trailing zeros.
pub(crate) fn items_of(bits: &BitBuf) -> (Vec<(u64, u64)>, u64) {
    let mut items = Vec::new();
    let mut pending_zeros = 0u64;
    for (bit, len) in bits.runs() {
        if bit {
            items.push((pending_zeros, len as u64));
            pending_zeros = 0;
        } else {
            pending_zeros += len as u64;
        }
    }
    (items, pending_zeros)
}

fn explode_gaps(items: Vec<(u64, u64)>) -> Vec<(u64, u64)> {
    let mut out = Vec::with_capacity(items.iter().map(|&(_, o)| o as usize).sum());
    for (z, o) in items {
        out.push((z, 1));
        for _ in 1..o {
            out.push((0, 1));
        }
    }
    out
}

#[inline]
fn item_len(mode: ItemMode, z: u64, o: u64) -> usize {
    match mode {
        ItemMode::Runs => delta_len(z + 1) + delta_len(o),
        ItemMode::Gaps => delta_len(z + 1),
    }
}

#[inline]
fn write_item(buf: &mut BitBuf, mode: ItemMode, z: u64, o: u64) {
    buf.write_delta(z + 1);
    if mode == ItemMode::Runs {
        buf.write_delta(o);
    }
}

/// Decoding cursor over the items of one block.
struct Cursor<'a> {
    reader: BitReader<'a>,
    mode: ItemMode,
    /// logical position where the next item's zeros start
    pos: u64,
    /// ones before the next item
    ones: u64,
    end_ones: u64,
}

impl Cursor<'_> {
    /// Next item as `(zero_start, z, o)`; the item's ones start at `zero_start + z`.
    #[inline]
    fn next_item(&mut self) -> Option<(u64, u64, u64)> {
        if self.ones >= self.end_ones {
            return None;
        }
        let z = self.reader.read_delta() - 1;
        let o = match self.mode {
            ItemMode::Runs => self.reader.read_delta(),
            ItemMode::Gaps => 1,
        };
        let start = self.pos;
        self.pos += z + o;
        self.ones += o;
        Some((start, z, o))
    }

    fn rank1(mut self, i: u64) -> u64 {
        loop {
            let before = self.ones;
            match self.next_item() {
                None => return self.ones,
                Some((start, z, o)) => {
                    let one_start = start + z;
                    if i <= one_start {
                        return before;
                    }
                    if i < one_start + o {
                        return before + (i - one_start);
                    }
                }
            }
        }
    }

    fn select1(mut self, k: u64) -> u64 {
        loop {
            let before = self.ones;
            let (start, z, o) = self.next_item().expect("select1 past block end");
            if k < before + o {
                return start + z + (k - before);
            }
        }
    }

    fn select0(mut self, k: u64) -> u64 {
        loop {
            let zeros_before = self.pos - self.ones;
            match self.next_item() {
                None => return self.pos + (k - zeros_before),
                Some((start, z, _)) => {
                    if k < zeros_before + z {
                        return start + (k - zeros_before);
                    }
                }
            }
        }
    }
}

/// Items packed into blocks of `block_bits` encoded bits. An item never
/// straddles a block; the unused tail of a block is zero padding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockedRuns {
    mode: ItemMode,
    block_bits: usize,
    stream: BitBuf,
    bit_starts: IntVec,
    one_starts: IntVec,
    len: u64,
    ones: u64,
}

impl BlockedRuns {
    pub fn new(bits: &BitBuf, mode: ItemMode, block_bytes: usize) -> Self {
        let block_bits = block_bytes * 8;
        assert!(block_bits >= 256, "blocks must hold at least one item");
        let (mut items, _) = items_of(bits);
        if mode == ItemMode::Gaps {
            items = explode_gaps(items);
        }
        let mut stream = BitBuf::new();
        let mut bit_starts = Vec::new();
        let mut one_starts = Vec::new();
        let (mut pos, mut ones) = (0u64, 0u64);
        let mut used = block_bits; // force a block for the first item
        for (z, o) in items {
            let l = item_len(mode, z, o);
            if used + l > block_bits {
                stream.pad_to(bit_starts.len() * block_bits);
                bit_starts.push(pos);
                one_starts.push(ones);
                used = 0;
            }
            write_item(&mut stream, mode, z, o);
            used += l;
            pos += z + o;
            ones += o;
        }
        Self {
            mode,
            block_bits,
            stream,
            bit_starts: IntVec::from_values(&bit_starts),
            one_starts: IntVec::from_values(&one_starts),
            len: bits.len() as u64,
            ones,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn ones(&self) -> usize {
        self.ones as usize
    }

    fn cursor(&self, b: usize) -> Cursor<'_> {
        let end_ones = if b + 1 < self.one_starts.len() {
            self.one_starts.get(b + 1)
        } else {
            self.ones
        };
        Cursor {
            reader: BitReader::new(self.stream.words(), b * self.block_bits),
            mode: self.mode,
            pos: self.bit_starts.get(b),
            ones: self.one_starts.get(b),
            end_ones,
        }
    }

    pub fn rank1(&self, i: usize) -> usize {
        let i = i as u64;
        let nb = self.bit_starts.partition_point(|s| s < i);
        if nb == 0 {
            return 0;
        }
        self.cursor(nb - 1).rank1(i) as usize
    }

    pub fn select1(&self, k: usize) -> usize {
        let k = k as u64;
        let nb = self.one_starts.partition_point(|s| s <= k);
        self.cursor(nb - 1).select1(k) as usize
    }

    pub fn select0(&self, k: usize) -> usize {
        let k = k as u64;
        let (mut lo, mut hi) = (0, self.bit_starts.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.bit_starts.get(mid) - self.one_starts.get(mid) <= k {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo == 0 {
            return k as usize;
        }
        self.cursor(lo - 1).select0(k) as usize
    }

    pub fn size_in_bits(&self) -> usize {
        self.stream.words().len() * 64 + self.bit_starts.size_in_bits() + self.one_starts.size_in_bits()
    }

    pub(crate) fn write_to(&self, w: &mut ByteWriter) {
        w.put_u8(matches!(self.mode, ItemMode::Gaps) as u8);
        w.put_u32((self.block_bits / 8) as u32);
        w.put_u64(self.len);
        w.put_u64(self.ones);
        w.put_u64(self.stream.len() as u64);
        w.put_words(self.stream.words());
        self.bit_starts.write_to(w);
        self.one_starts.write_to(w);
    }

    pub(crate) fn read_from(r: &mut ByteReader<'_>) -> Result<Self> {
        let mode = if r.get_u8()? == 1 { ItemMode::Gaps } else { ItemMode::Runs };
        let block_bits = r.get_u32()? as usize * 8;
        if block_bits < 256 {
            return Err(Error::Format("block size too small".into()));
        }
        let len = r.get_u64()?;
        let ones = r.get_u64()?;
        let stream_len = r.get_u64()? as usize;
        let stream = BitBuf::from_raw_parts(r.get_words()?, stream_len)?;
        let bit_starts = IntVec::read_from(r)?;
        let one_starts = IntVec::read_from(r)?;
        if bit_starts.len() != one_starts.len() {
            return Err(Error::Format("block headers disagree".into()));
        }
        Ok(Self {
            mode,
            block_bits,
            stream,
            bit_starts,
            one_starts,
            len,
            ones,
        })
    }
}

/// Contiguous delta-coded items cut into blocks of roughly `block_ones` ones.
/// Block starts (in bits, in ones, and in encoded-stream offset) are kept in
/// three Elias-Fano sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaRuns {
    block_ones: usize,
    stream: BitBuf,
    bit_starts: EliasFano,
    one_starts: EliasFano,
    offsets: EliasFano,
    len: u64,
    ones: u64,
}

impl DeltaRuns {
    pub fn new(bits: &BitBuf, block_ones: usize) -> Self {
        assert!(block_ones >= 1);
        let (items, _) = items_of(bits);
        let mut stream = BitBuf::new();
        let (mut bit_starts, mut one_starts, mut offsets) = (Vec::new(), Vec::new(), Vec::new());
        let (mut pos, mut ones) = (0u64, 0u64);
        let mut in_block = block_ones as u64;
        for (z, o) in items {
            if in_block >= block_ones as u64 {
                bit_starts.push(pos);
                one_starts.push(ones);
                offsets.push(stream.len() as u64);
                in_block = 0;
            }
            write_item(&mut stream, ItemMode::Runs, z, o);
            pos += z + o;
            ones += o;
            in_block += o;
        }
        let len = bits.len() as u64;
        Self {
            block_ones,
            bit_starts: EliasFano::new(&bit_starts, len + 1),
            one_starts: EliasFano::new(&one_starts, ones + 1),
            offsets: EliasFano::new(&offsets, stream.len() as u64 + 1),
            stream,
            len,
            ones,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn ones(&self) -> usize {
        self.ones as usize
    }

    fn cursor(&self, b: usize) -> Cursor<'_> {
        let end_ones = if b + 1 < self.one_starts.len() {
            self.one_starts.get(b + 1)
        } else {
            self.ones
        };
        Cursor {
            reader: BitReader::new(self.stream.words(), self.offsets.get(b) as usize),
            mode: ItemMode::Runs,
            pos: self.bit_starts.get(b),
            ones: self.one_starts.get(b),
            end_ones,
        }
    }

    pub fn rank1(&self, i: usize) -> usize {
        let nb = self.bit_starts.rank(i as u64);
        if nb == 0 {
            return 0;
        }
        self.cursor(nb - 1).rank1(i as u64) as usize
    }

    pub fn select1(&self, k: usize) -> usize {
        let nb = self.one_starts.rank(k as u64 + 1);
        self.cursor(nb - 1).select1(k as u64) as usize
    }

    pub fn select0(&self, k: usize) -> usize {
        let k = k as u64;
        let (mut lo, mut hi) = (0, self.bit_starts.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.bit_starts.get(mid) - self.one_starts.get(mid) <= k {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo == 0 {
            return k as usize;
        }
        self.cursor(lo - 1).select0(k) as usize
    }

    pub fn size_in_bits(&self) -> usize {
        self.stream.words().len() * 64
            + self.bit_starts.size_in_bits()
            + self.one_starts.size_in_bits()
            + self.offsets.size_in_bits()
    }

    pub(crate) fn write_to(&self, w: &mut ByteWriter) {
        w.put_u32(self.block_ones as u32);
        w.put_u64(self.len);
        w.put_u64(self.ones);
        w.put_u64(self.stream.len() as u64);
        w.put_words(self.stream.words());
        self.bit_starts.write_to(w);
        self.one_starts.write_to(w);
        self.offsets.write_to(w);
    }

    pub(crate) fn read_from(r: &mut ByteReader<'_>) -> Result<Self> {
        let block_ones = r.get_u32()? as usize;
        let len = r.get_u64()?;
        let ones = r.get_u64()?;
        let stream_len = r.get_u64()? as usize;
        let stream = BitBuf::from_raw_parts(r.get_words()?, stream_len)?;
        let bit_starts = EliasFano::read_from(r)?;
        let one_starts = EliasFano::read_from(r)?;
        let offsets = EliasFano::read_from(r)?;
        if bit_starts.len() != one_starts.len() || bit_starts.len() != offsets.len() {
            return Err(Error::Format("block directories disagree".into()));
        }
        Ok(Self {
            block_ones,
            stream,
            bit_starts,
            one_starts,
            offsets,
            len,
            ones,
        })
    }
}
