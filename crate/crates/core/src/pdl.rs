//! Precomputed document counts over a pruned suffix tree.
//!
//! The suffix tree is cut into basic blocks: subtrees below which every node
//! has as many documents as occurrences. Counts are stored only for blocks and
//! their ancestors, in preorder, and the node for a range of whole blocks is
//! found with an LCA computed from a balanced-parentheses layout.

use crate::bits::{BitBuf, ByteReader, ByteWriter, IntVec, RawBits};
use crate::bitvec::{EliasFano, EncodedBitvector, Encoding};
use crate::error::{Error, Result};
use crate::sada::{DoccTable, HArray, Placement};
use crate::suffix::{LocusRange, TextIndex};

pub const DEFAULT_BLOCK_THRESHOLD: usize = 256;

/// A block of the cover, as a 1-based inclusive SA range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub sp: usize,
    pub ep: usize,
    /// False for filler blocks that close gaps left by qualifying ones.
    pub qualifying: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCover {
    blocks: Vec<Block>,
}

#[derive(Clone, Copy)]
struct Subtree {
    lb: usize,
    rb: usize,
    excess: bool,
    has_block: bool,
}

/// Child intervals of an internal node, as 0-based `(lb, rb)`.
fn children(lb: usize, rb: usize, boundaries: &[u32]) -> impl Iterator<Item = (usize, usize)> + '_ {
    let starts = std::iter::once(lb).chain(boundaries.iter().map(|&b| b as usize));
    let ends = boundaries.iter().map(|&b| b as usize - 1).chain(std::iter::once(rb));
    starts.zip(ends)
}

impl BlockCover {
    /// Chooses the deepest nodes for which occ > docc holds at the node or at
    /// a sibling, fills the remaining leaves with maximal uncovered subtrees,
    /// and splits qualifying blocks with more than `threshold` leaves.
    pub fn select(idx: &TextIndex, h: &HArray, threshold: Option<usize>) -> Result<Self> {
        if threshold == Some(0) {
            return Err(Error::InvalidParameter("block threshold must be at least 1".into()));
        }
        let table = DoccTable::new(h.values());
        let excess = |lb: usize, rb: usize| rb > lb && table.docc(lb, rb) < rb + 1 - lb;
        let mut raw: Vec<(usize, usize, bool)> = Vec::new();
        let mut pending: Vec<Subtree> = Vec::new();
        let mut root = None;
        idx.for_each_internal_node(|node| {
            let first_internal = pending.partition_point(|s| s.lb < node.lb);
            let internal = pending.split_off(first_internal);
            let mut inner = internal.iter().peekable();
            let kids: Vec<Subtree> = children(node.lb, node.rb, node.boundaries)
                .map(|(clb, crb)| match inner.peek() {
                    Some(s) if s.lb == clb => *inner.next().unwrap(),
                    _ => Subtree {
                        lb: clb,
                        rb: crb,
                        excess: false,
                        has_block: false,
                    },
                })
                .collect();
            debug_assert!(inner.next().is_none());
            let any_excess = kids.iter().any(|k| k.excess);
            let any_block = kids.iter().any(|k| k.has_block);
            for k in &kids {
                if k.has_block {
                    continue;
                }
                if any_excess {
                    raw.push((k.lb, k.rb, true));
                } else if any_block {
                    raw.push((k.lb, k.rb, false));
                }
            }
            let me = Subtree {
                lb: node.lb,
                rb: node.rb,
                excess: excess(node.lb, node.rb),
                has_block: any_excess || any_block,
            };
            if node.lb == 0 && node.rb + 1 == idx.len() {
                root = Some(me);
            }
            pending.push(me);
        });
        let root = root.expect("traversal always reports the root");
        if !root.has_block {
            raw.push((root.lb, root.rb, root.excess));
        }

        if let Some(t) = threshold {
            let mut big: Vec<(usize, usize)> = raw
                .iter()
                .filter(|&&(lb, rb, q)| q && rb + 1 - lb > t)
                .map(|&(lb, rb, _)| (lb, rb))
                .collect();
            if !big.is_empty() {
                big.sort_unstable();
                raw.retain(|&(lb, rb, q)| !(q && rb + 1 - lb > t));
                idx.for_each_internal_node(|node| {
                    if node.rb + 1 - node.lb <= t {
                        return;
                    }
                    let k = big.partition_point(|&(lb, _)| lb <= node.lb);
                    if k == 0 || big[k - 1].1 < node.rb {
                        return;
                    }
                    for (clb, crb) in children(node.lb, node.rb, node.boundaries) {
                        if crb + 1 - clb <= t {
                            raw.push((clb, crb, true));
                        }
                    }
                });
            }
        }
        raw.sort_unstable();
        let blocks = raw
            .into_iter()
            .map(|(lb, rb, qualifying)| Block {
                sp: lb + 1,
                ep: rb + 1,
                qualifying,
            })
            .collect();
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// True when the blocks are consecutive, disjoint and cover `[1, n]`.
    pub fn covers(&self, n: usize) -> bool {
        let mut next = 1;
        for b in &self.blocks {
            if b.sp != next || b.ep < b.sp {
                return false;
            }
            next = b.ep + 1;
        }
        next == n + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdlCountIndex {
    block_starts: EncodedBitvector,
    /// 1 = open, in preorder.
    bp: RawBits,
    /// 0-based BP positions of the first 1-bit of each run of 1-bits.
    run_heads: EliasFano,
    counts: IntVec,
    n: usize,
    n_blocks: usize,
}

impl PdlCountIndex {
    pub fn build(idx: &TextIndex, threshold: Option<usize>) -> Result<Self> {
        let h = HArray::build(idx, Placement::Aggregated);
        let cover = BlockCover::select(idx, &h, threshold)?;
        Ok(Self::from_cover(idx, &h, &cover))
    }

    pub fn from_cover(idx: &TextIndex, h: &HArray, cover: &BlockCover) -> Self {
        let n = idx.len();
        debug_assert!(cover.covers(n));
        let blocks = cover.blocks();
        let table = DoccTable::new(h.values());
        // 0-based block index of each slot's block start, via the sorted starts
        let block_of = |slot: usize| blocks.partition_point(|b| b.sp <= slot + 1) - 1;
        let mut nodes: Vec<(usize, usize)> = blocks.iter().map(|b| (b.sp - 1, b.ep - 1)).collect();
        idx.for_each_internal_node(|node| {
            if block_of(node.lb) != block_of(node.rb) {
                nodes.push((node.lb, node.rb));
            }
        });
        // preorder: by start, enclosing intervals first
        nodes.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        nodes.dedup();

        let mut bp = BitBuf::with_capacity(2 * nodes.len());
        let mut open: Vec<usize> = Vec::new();
        let mut counts = Vec::with_capacity(nodes.len());
        for &(lb, rb) in &nodes {
            while open.last().is_some_and(|&end| end < lb) {
                open.pop();
                bp.push(false);
            }
            bp.push(true);
            open.push(rb);
            counts.push(table.docc(lb, rb) as u64);
        }
        for _ in open {
            bp.push(false);
        }
        let mut heads = Vec::with_capacity(blocks.len());
        let mut prev = false;
        for (i, bit) in bp.iter().enumerate() {
            if bit && !prev {
                heads.push(i as u64);
            }
            prev = bit;
        }
        debug_assert_eq!(heads.len(), blocks.len());
        let mut starts = BitBuf::zeros(n);
        for b in blocks {
            starts.set(b.sp - 1, true);
        }
        Self {
            block_starts: EncodedBitvector::new(&starts, Encoding::Gap),
            run_heads: EliasFano::new(&heads, bp.len() as u64),
            bp: RawBits::new(bp),
            counts: IntVec::from_values(&counts),
            n,
            n_blocks: blocks.len(),
        }
    }

    pub fn n_blocks(&self) -> usize {
        self.n_blocks
    }

    /// Stored nodes: blocks plus their ancestors.
    pub fn n_nodes(&self) -> usize {
        self.counts.len()
    }

    pub fn bp(&self) -> &BitBuf {
        self.bp.bits()
    }

    pub fn counts(&self) -> &IntVec {
        &self.counts
    }

    pub fn count_width(&self) -> u32 {
        self.counts.width()
    }

    /// Preorder rank (1-based) of the head of run `i`.
    fn run_rank(&self, i: usize) -> usize {
        self.bp.rank1(self.run_heads.get(i - 1) as usize + 1)
    }

    /// Depth of the head of run `i`, with the root at depth 1 and the
    /// virtual run after the last block at depth 0.
    pub fn depth(&self, i: usize) -> usize {
        if i > self.n_blocks {
            return 0;
        }
        let select = self.run_heads.get(i - 1) as usize + 1;
        let rank = self.bp.rank1(select);
        rank - (select - rank)
    }

    /// Preorder rank of the node whose leaves are exactly blocks `i..=j`.
    pub fn lca_preorder(&self, i: usize, j: usize) -> Result<usize> {
        if i == 0 || i > j || j > self.n_blocks {
            return Err(Error::PreconditionViolated(format!(
                "block span {i}..={j} outside 1..={}",
                self.n_blocks
            )));
        }
        let (di, dj) = (self.depth(i), self.depth(j + 1));
        let rank = self.run_rank(i);
        Ok(if di >= dj { rank } else { rank + dj - di })
    }

    pub fn count(&self, r: LocusRange) -> Result<usize> {
        r.validate(self.n)?;
        let i = self.block_starts.rank1_raw(r.sp);
        let j = self.block_starts.rank1_raw(r.ep);
        let start = self.block_starts.select1_raw(i - 1) + 1;
        let end = if j < self.n_blocks {
            self.block_starts.select1_raw(j)
        } else {
            self.n
        };
        if r.sp == start && r.ep == end {
            Ok(self.counts.get(self.lca_preorder(i, j)? - 1) as usize)
        } else if i == j {
            Ok(r.len())
        } else {
            Err(Error::CoverMismatch { sp: r.sp, ep: r.ep })
        }
    }

    pub fn size_in_bits(&self) -> usize {
        self.block_starts.size_in_bits() + self.bp.size_in_bits() + self.run_heads.size_in_bits() + self.counts.size_in_bits()
    }

    pub(crate) fn write_to(&self, w: &mut ByteWriter) {
        w.put_u64(self.n as u64);
        w.put_u64(self.n_blocks as u64);
        self.block_starts.write_to(w);
        self.bp.write_to(w);
        self.run_heads.write_to(w);
        self.counts.write_to(w);
    }

    pub(crate) fn read_from(r: &mut ByteReader<'_>) -> Result<Self> {
        let n = r.get_u64()? as usize;
        let n_blocks = r.get_u64()? as usize;
        let out = Self {
            block_starts: EncodedBitvector::read_from(r)?,
            bp: RawBits::read_from(r)?,
            run_heads: EliasFano::read_from(r)?,
            counts: IntVec::read_from(r)?,
            n,
            n_blocks,
        };
        if out.block_starts.len() != n || out.block_starts.ones() != n_blocks || out.run_heads.len() != n_blocks {
            return Err(Error::Format("inconsistent pdl components".into()));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate_random_documents, Collection, IngestOptions};

    fn oracle_docc(idx: &TextIndex, r: LocusRange) -> usize {
        let mut d = idx.da()[r.sp - 1..r.ep].to_vec();
        d.sort_unstable();
        d.dedup();
        d.len()
    }

    fn check_all(idx: &TextIndex, threshold: Option<usize>) -> PdlCountIndex {
        let h = HArray::build(idx, Placement::Aggregated);
        let cover = BlockCover::select(idx, &h, threshold).unwrap();
        assert!(cover.covers(idx.len()));
        for b in cover.blocks() {
            if let Some(t) = threshold {
                assert!(!b.qualifying || b.ep + 1 - b.sp <= t);
            }
        }
        let pdl = PdlCountIndex::from_cover(idx, &h, &cover);
        assert_eq!(pdl.bp().len(), 2 * pdl.n_nodes());
        for r in idx.all_loci() {
            assert_eq!(pdl.count(r).unwrap(), oracle_docc(idx, r), "{r:?}");
        }
        pdl
    }

    #[test]
    fn hand_example() {
        let idx = TextIndex::build(Collection::ingest_concat(b"ab\0ab\0", 0, IngestOptions::default()).unwrap());
        let pdl = check_all(&idx, Some(DEFAULT_BLOCK_THRESHOLD));
        // every child of the root has two occurrences in two documents, so the
        // root is the only qualifying node and forms the single block
        assert_eq!(pdl.n_blocks(), 1);
        assert_eq!(pdl.counts().get(0), 2);
        assert_eq!(pdl.lca_preorder(1, 1).unwrap(), 1);
        // a threshold of 1 splits it into leaves under a stored root
        let split = check_all(&idx, Some(1));
        assert_eq!(split.n_blocks(), 6);
        assert_eq!(split.lca_preorder(1, 6).unwrap(), 1);
        assert_eq!(split.counts().get(0), 2);
    }

    #[test]
    fn repetitive_single_document() {
        let idx = TextIndex::build(Collection::from_documents([b"aaaaaaa"]).unwrap());
        let pdl = check_all(&idx, None);
        assert!(pdl.n_blocks() >= 1);
    }

    #[test]
    fn random_corpora_all_loci() {
        for seed in 0..6 {
            let c = generate_random_documents(8, 60, 3 + seed as usize % 3, seed).unwrap();
            let idx = TextIndex::build(c);
            for t in [None, Some(1), Some(4), Some(DEFAULT_BLOCK_THRESHOLD)] {
                check_all(&idx, t);
            }
        }
    }

    #[test]
    fn duplicated_documents() {
        let docs: Vec<&[u8]> = vec![b"abcabcab"; 5];
        let idx = TextIndex::build(Collection::from_documents(docs).unwrap());
        check_all(&idx, Some(3));
    }

    #[test]
    fn rejects_zero_threshold_and_bad_spans() {
        let idx = TextIndex::build(Collection::from_documents([b"abab"]).unwrap());
        let h = HArray::build(&idx, Placement::Aggregated);
        assert!(BlockCover::select(&idx, &h, Some(0)).is_err());
        let pdl = PdlCountIndex::build(&idx, None).unwrap();
        assert!(pdl.lca_preorder(2, 1).is_err());
        assert!(pdl.count(LocusRange::new(1, idx.len() + 1)).is_err());
    }

    /// Decodes the BP into explicit nodes: (preorder, depth, first leaf, last leaf).
    fn naive_tree(bp: &BitBuf) -> (Vec<(usize, usize, usize, usize)>, Vec<usize>) {
        let mut nodes = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut leaves = 0;
        let mut run_head_depths = Vec::new();
        let mut prev = false;
        for bit in bp.iter() {
            if bit {
                nodes.push((nodes.len() + 1, stack.len() + 1, usize::MAX, 0));
                if !prev {
                    run_head_depths.push(stack.len() + 1);
                }
                stack.push(nodes.len() - 1);
            } else {
                let me = stack.pop().unwrap();
                if prev {
                    leaves += 1;
                    nodes[me].2 = leaves;
                    nodes[me].3 = leaves;
                }
                let (f, l) = (nodes[me].2, nodes[me].3);
                if let Some(&p) = stack.last() {
                    nodes[p].2 = nodes[p].2.min(f);
                    nodes[p].3 = nodes[p].3.max(l);
                }
            }
            prev = bit;
        }
        (nodes, run_head_depths)
    }

    #[test]
    fn lca_matches_decoded_tree() {
        for seed in 0..8 {
            let c = generate_random_documents(6, 80, 2 + seed as usize % 4, seed + 100).unwrap();
            let idx = TextIndex::build(c);
            for t in [Some(1), Some(3), None] {
                let pdl = PdlCountIndex::build(&idx, t).unwrap();
                let (nodes, depths) = naive_tree(pdl.bp());
                assert_eq!(nodes.len(), pdl.n_nodes());
                for (i, &d) in depths.iter().enumerate() {
                    assert_eq!(pdl.depth(i + 1), d);
                }
                for &(pre, _, first, last) in &nodes {
                    assert_eq!(pdl.lca_preorder(first, last).unwrap(), pre);
                }
            }
        }
    }
}
