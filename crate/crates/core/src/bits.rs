//! Low-level bit containers shared by every encoding: an append-only bit
//! buffer with Elias delta coding, a fixed-width packed integer vector, a plain
//! bit array with rank/select directories, and little-endian byte IO.

use crate::error::{Error, Result};

#[inline]
fn mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Number of bits needed to write `max` in binary (0 for 0).
#[inline]
pub fn bit_width(max: u64) -> u32 {
    64 - max.leading_zeros()
}

/// Append-only bit buffer. Bit `i` lives in word `i / 64` at bit `i % 64`
/// (least significant first).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitBuf {
    words: Vec<u64>,
    len: usize,
}

impl BitBuf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            words: Vec::with_capacity(bits.div_ceil(64)),
            len: 0,
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut b = Self::new();
        for bit in bits {
            b.push(bit);
        }
        b
    }

    pub(crate) fn from_raw_parts(words: Vec<u64>, len: usize) -> Result<Self> {
        if words.len() != len.div_ceil(64) {
            return Err(Error::Format("bit buffer word count mismatch".into()));
        }
        Ok(Self { words, len })
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
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        if bit {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        if self.len % 64 == 0 {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / 64] |= 1 << (self.len % 64);
        }
        self.len += 1;
    }

    /// Appends `count` copies of `bit`.
    pub fn push_run(&mut self, bit: bool, mut count: usize) {
        while count > 0 && self.len % 64 != 0 {
            self.push(bit);
            count -= 1;
        }
        let fill = if bit { u64::MAX } else { 0 };
        while count >= 64 {
            self.words.push(fill);
            self.len += 64;
            count -= 64;
        }
        for _ in 0..count {
            self.push(bit);
        }
    }

    /// Appends the low `nbits` bits of `value`; `read_bits(nbits)` returns it back.
    pub fn write_bits(&mut self, value: u64, nbits: u32) {
        if nbits == 0 {
            return;
        }
        let value = value & mask(nbits);
        let off = (self.len % 64) as u32;
        if off == 0 {
            self.words.push(value);
        } else {
            let last = self.words.len() - 1;
            self.words[last] |= value << off;
            if off + nbits > 64 {
                self.words.push(value >> (64 - off));
            }
        }
        self.len += nbits as usize;
    }

    /// Elias delta code of `x >= 1`.
    pub fn write_delta(&mut self, x: u64) {
        debug_assert!(x >= 1);
        let l = bit_width(x);
        let n = bit_width(l as u64) - 1;
        self.write_bits(0, n);
        self.write_bits(1, 1);
        self.write_bits(l as u64, n);
        self.write_bits(x, l - 1);
    }

    pub fn pad_to(&mut self, len: usize) {
        debug_assert!(len >= self.len);
        self.push_run(false, len - self.len);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Maximal runs as `(bit, length)` pairs, in order.
    pub fn runs(&self) -> Runs<'_> {
        Runs { buf: self, pos: 0 }
    }
}

pub struct Runs<'a> {
    buf: &'a BitBuf,
    pos: usize,
}

impl Iterator for Runs<'_> {
    type Item = (bool, usize);

    fn next(&mut self) -> Option<(bool, usize)> {
        let len = self.buf.len;
        if self.pos >= len {
            return None;
        }
        let bit = self.buf.get(self.pos);
        let start = self.pos;
        let mut p = self.pos;
        while p < len {
            let w = self.buf.words[p / 64];
            let w = if bit { !w } else { w };
            let rest = w >> (p % 64);
            let avail = 64 - (p % 64);
            if rest == 0 {
                p += avail;
            } else {
                p += (rest.trailing_zeros() as usize).min(avail);
                break;
            }
        }
        let p = p.min(len);
        self.pos = p;
        Some((bit, p - start))
    }
}

/// Sequential reader over a word slice written by [`BitBuf`].
pub struct BitReader<'a> {
    words: &'a [u64],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(words: &'a [u64], pos: usize) -> Self {
        Self { words, pos }
    }

    #[inline]
    pub fn position(&self) -> usize {
        self.pos
    }

    #[inline]
    fn peek64(&self) -> u64 {
        let w = self.pos / 64;
        let off = self.pos % 64;
        let lo = self.words.get(w).copied().unwrap_or(0) >> off;
        if off == 0 {
            lo
        } else {
            lo | (self.words.get(w + 1).copied().unwrap_or(0) << (64 - off))
        }
    }

    #[inline]
    pub fn read_bits(&mut self, nbits: u32) -> u64 {
        if nbits == 0 {
            return 0;
        }
        let v = self.peek64() & mask(nbits);
        self.pos += nbits as usize;
        v
    }

    #[inline]
    pub fn read_delta(&mut self) -> u64 {
        let n = self.peek64().trailing_zeros();
        self.pos += n as usize + 1;
        let l = (1u64 << n) | self.read_bits(n);
        let l = l as u32;
        (1u64 << (l - 1)) | self.read_bits(l - 1)
    }
}

/// Length in bits of the Elias delta code of `x >= 1`.
pub fn delta_len(x: u64) -> usize {
    let l = bit_width(x);
    let n = bit_width(l as u64) - 1;
    (2 * n + l) as usize
}

/// Fixed-width packed unsigned integers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntVec {
    bits: BitBuf,
    width: u32,
    len: usize,
}

impl IntVec {
    pub fn new(width: u32) -> Self {
        assert!(width <= 64);
        Self {
            bits: BitBuf::new(),
            width,
            len: 0,
        }
    }

    /// Packs `values` at the minimal width that holds their maximum.
    pub fn from_values(values: &[u64]) -> Self {
        let width = bit_width(values.iter().copied().max().unwrap_or(0));
        let mut v = Self::new(width);
        for &x in values {
            v.push(x);
        }
        v
    }

    pub fn push(&mut self, value: u64) {
        debug_assert!(self.width == 64 || value >> self.width == 0);
        self.bits.write_bits(value, self.width);
        self.len += 1;
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i < self.len);
        if self.width == 0 {
            return 0;
        }
        BitReader::new(self.bits.words(), i * self.width as usize).read_bits(self.width)
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
    pub fn width(&self) -> u32 {
        self.width
    }

    /// Number of entries `< value`, assuming entries are non-decreasing.
    pub fn partition_point(&self, mut pred: impl FnMut(u64) -> bool) -> usize {
        let (mut lo, mut hi) = (0, self.len);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if pred(self.get(mid)) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub fn size_in_bits(&self) -> usize {
        self.bits.words().len() * 64
    }

    pub(crate) fn write_to(&self, w: &mut ByteWriter) {
        w.put_u8(self.width as u8);
        w.put_u64(self.len as u64);
        w.put_words(self.bits.words());
    }

    pub(crate) fn read_from(r: &mut ByteReader<'_>) -> Result<Self> {
        let width = r.get_u8()? as u32;
        if width > 64 {
            return Err(Error::Format("integer width above 64".into()));
        }
        let len = r.get_u64()? as usize;
        let words = r.get_words()?;
        let bits = BitBuf::from_raw_parts(words, len * width as usize)?;
        Ok(Self { bits, width, len })
    }
}

const RANK_BLOCK: usize = 512;
const WORDS_PER_BLOCK: usize = RANK_BLOCK / 64;
const SELECT_SAMPLE: usize = 4096;

/// Position (0-based) of the `r`-th set bit (0-based) of `w`.
#[inline]
pub fn select_in_word(mut w: u64, r: u32) -> u32 {
    debug_assert!(r < w.count_ones());
    let mut base = 0;
    let mut r = r;
    loop {
        let c = (w & 0xff).count_ones();
        if r < c {
            break;
        }
        r -= c;
        w >>= 8;
        base += 8;
    }
    for _ in 0..r {
        w &= w - 1;
    }
    base + w.trailing_zeros()
}

/// Plain bit array with a one-level rank directory (cumulative popcounts
/// every 512 bits) and sampled select hints. All indexes are 0-based.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawBits {
    bits: BitBuf,
    ones: usize,
    block_ranks: Vec<u64>,
    select1_hints: Vec<u32>,
    select0_hints: Vec<u32>,
}

impl RawBits {
    pub fn new(bits: BitBuf) -> Self {
        let words = bits.words();
        let nblocks = words.len().div_ceil(WORDS_PER_BLOCK);
        let mut block_ranks = Vec::with_capacity(nblocks + 1);
        let mut acc = 0u64;
        for b in 0..nblocks {
            block_ranks.push(acc);
            let end = ((b + 1) * WORDS_PER_BLOCK).min(words.len());
            acc += words[b * WORDS_PER_BLOCK..end]
                .iter()
                .map(|w| w.count_ones() as u64)
                .sum::<u64>();
        }
        block_ranks.push(acc);
        let ones = acc as usize;
        let len = bits.len();
        let mut select1_hints = Vec::new();
        let mut select0_hints = Vec::new();
        let mut next1 = 0usize;
        let mut next0 = 0usize;
        for b in 0..nblocks {
            let o_end = block_ranks[b + 1] as usize;
            let z_end = ((b + 1) * RANK_BLOCK).min(len) - o_end;
            while next1 < o_end {
                select1_hints.push(b as u32);
                next1 += SELECT_SAMPLE;
            }
            while next0 < z_end {
                select0_hints.push(b as u32);
                next0 += SELECT_SAMPLE;
            }
        }
        Self {
            bits,
            ones,
            block_ranks,
            select1_hints,
            select0_hints,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn ones(&self) -> usize {
        self.ones
    }

    #[inline]
    pub fn zeros(&self) -> usize {
        self.len() - self.ones
    }

    #[inline]
    pub fn bits(&self) -> &BitBuf {
        &self.bits
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    /// Ones in `[0, i)`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len());
        let words = self.bits.words();
        let b = i / RANK_BLOCK;
        let mut r = self.block_ranks[b] as usize;
        let w_end = i / 64;
        for w in &words[b * WORDS_PER_BLOCK..w_end] {
            r += w.count_ones() as usize;
        }
        let off = i % 64;
        if off > 0 {
            r += (words[w_end] & mask(off as u32)).count_ones() as usize;
        }
        r
    }

    #[inline]
    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    #[inline]
    fn block_zeros(&self, b: usize) -> usize {
        (b * RANK_BLOCK).min(self.len()) - self.block_ranks[b] as usize
    }

    /// Position of the `k`-th one (0-based).
    pub fn select1(&self, k: usize) -> usize {
        debug_assert!(k < self.ones);
        let h = k / SELECT_SAMPLE;
        let mut lo = self.select1_hints[h] as usize;
        let mut hi = self
            .select1_hints
            .get(h + 1)
            .map_or(self.block_ranks.len() - 1, |&x| x as usize + 1);
        // last block with rank <= k
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.block_ranks[mid] as usize <= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let words = self.bits.words();
        let mut r = k - self.block_ranks[lo] as usize;
        let mut wi = lo * WORDS_PER_BLOCK;
        loop {
            let c = words[wi].count_ones() as usize;
            if r < c {
                return wi * 64 + select_in_word(words[wi], r as u32) as usize;
            }
            r -= c;
            wi += 1;
        }
    }

    /// Position of the `k`-th zero (0-based).
    pub fn select0(&self, k: usize) -> usize {
        debug_assert!(k < self.zeros());
        let h = k / SELECT_SAMPLE;
        let mut lo = self.select0_hints[h] as usize;
        let mut hi = self
            .select0_hints
            .get(h + 1)
            .map_or(self.block_ranks.len() - 1, |&x| x as usize + 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.block_zeros(mid) <= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let words = self.bits.words();
        let mut r = k - self.block_zeros(lo);
        let mut wi = lo * WORDS_PER_BLOCK;
        loop {
            let inv = !words[wi];
            let c = inv.count_ones() as usize;
            if r < c {
                return wi * 64 + select_in_word(inv, r as u32) as usize;
            }
            r -= c;
            wi += 1;
        }
    }

    pub fn size_in_bits(&self) -> usize {
        self.bits.words().len() * 64
            + self.block_ranks.len() * 64
            + (self.select1_hints.len() + self.select0_hints.len()) * 32
    }

    pub(crate) fn write_to(&self, w: &mut ByteWriter) {
        w.put_u64(self.len() as u64);
        w.put_words(self.bits.words());
    }

    pub(crate) fn read_from(r: &mut ByteReader<'_>) -> Result<Self> {
        let len = r.get_u64()? as usize;
        let words = r.get_words()?;
        Ok(Self::new(BitBuf::from_raw_parts(words, len)?))
    }
}

/// Little-endian byte sink used by every serializer.
#[derive(Default)]
pub struct ByteWriter {
    pub buf: Vec<u8>,
}

impl ByteWriter {
    pub fn new() -> Self {
        Self::default()
    }
    pub fn put_u8(&mut self, v: u8) {
        self.buf.push(v);
    }
    pub fn put_u16(&mut self, v: u16) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    pub fn put_u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    pub fn put_u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }
    pub fn put_bytes(&mut self, b: &[u8]) {
        self.put_u64(b.len() as u64);
        self.buf.extend_from_slice(b);
    }
    pub fn put_words(&mut self, words: &[u64]) {
        self.put_u64(words.len() as u64);
        for &x in words {
            self.put_u64(x);
        }
    }
    pub fn put_u32s(&mut self, v: &[u32]) {
        self.put_u64(v.len() as u64);
        for &x in v {
            self.put_u32(x);
        }
    }
}

pub struct ByteReader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.data.len() - self.pos
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.remaining() < n {
            return Err(Error::Format("unexpected end of data".into()));
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
    pub fn get_u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    pub fn get_u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }
    pub fn get_u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    pub fn get_u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn get_len(&mut self, elem: usize) -> Result<usize> {
        let n = self.get_u64()? as usize;
        if n.checked_mul(elem).is_none_or(|b| b > self.remaining()) {
            return Err(Error::Format("length prefix exceeds data".into()));
        }
        Ok(n)
    }
    pub fn get_bytes(&mut self) -> Result<&'a [u8]> {
        let n = self.get_len(1)?;
        self.take(n)
    }
    pub fn get_words(&mut self) -> Result<Vec<u64>> {
        let n = self.get_len(8)?;
        (0..n).map(|_| self.get_u64()).collect()
    }
    pub fn get_u32s(&mut self) -> Result<Vec<u32>> {
        let n = self.get_len(4)?;
        (0..n).map(|_| self.get_u32()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_codes_round_trip() {
        let values = [1u64, 2, 3, 4, 7, 8, 15, 16, 255, 256, 1 << 20, u64::MAX >> 1, u64::MAX];
        let mut b = BitBuf::new();
        for &v in &values {
            b.write_delta(v);
        }
        let expected: usize = values.iter().map(|&v| delta_len(v)).sum();
        assert_eq!(b.len(), expected);
        let mut r = BitReader::new(b.words(), 0);
        for &v in &values {
            assert_eq!(r.read_delta(), v);
        }
        assert_eq!(delta_len(1), 1);
        assert_eq!(delta_len(2), 4);
    }

    #[test]
    fn intvec_packs_across_words() {
        let vals: Vec<u64> = (0..200).map(|i| (i * 37) % 97).collect();
        let v = IntVec::from_values(&vals);
        assert_eq!(v.width(), 7);
        for (i, &x) in vals.iter().enumerate() {
            assert_eq!(v.get(i), x);
        }
        let zero = IntVec::from_values(&[0, 0, 0]);
        assert_eq!(zero.width(), 0);
        assert_eq!(zero.get(2), 0);
    }

    #[test]
    fn runs_cover_word_boundaries() {
        let mut b = BitBuf::new();
        b.push_run(true, 70);
        b.push_run(false, 3);
        b.push_run(true, 130);
        let runs: Vec<_> = b.runs().collect();
        assert_eq!(runs, vec![(true, 70), (false, 3), (true, 130)]);
    }

    #[test]
    fn raw_bits_rank_select_match_scan() {
        let mut state = 0x1234_5678_u64;
        let mut b = BitBuf::new();
        for _ in 0..20_000 {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            b.push(state % 5 == 0);
        }
        let rb = RawBits::new(b.clone());
        let mut ones = 0;
        let mut zeros = 0;
        for i in 0..b.len() {
            assert_eq!(rb.rank1(i), ones);
            if b.get(i) {
                assert_eq!(rb.select1(ones), i);
                ones += 1;
            } else {
                assert_eq!(rb.select0(zeros), i);
                zeros += 1;
            }
        }
        assert_eq!(rb.rank1(b.len()), ones);
        assert_eq!(rb.ones(), ones);
    }
}
