//! Suffix array, LCP, document array, and the previous-occurrence array over
//! a [`Collection`], plus pattern lookup and LCP-interval traversal.
//!
//! Arrays are stored 0-based by SA slot: slot `k` is SA position `k + 1`.
//! Query-facing ranges ([`LocusRange`]) are 1-based and inclusive.

mod rmq;
mod sais;

pub use rmq::Rmq;
pub use sais::{lcp_array, suffix_array};

use std::cmp::Ordering;

use crate::corpus::Collection;
use crate::error::{Error, Result};

/// A 1-based inclusive SA interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocusRange {
    pub sp: usize,
    pub ep: usize,
}

impl LocusRange {
    pub fn new(sp: usize, ep: usize) -> Self {
        Self { sp, ep }
    }

    /// Number of suffixes in the range (occ).
    pub fn len(&self) -> usize {
        self.ep + 1 - self.sp
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.sp == 0 || self.sp > self.ep || self.ep > n {
            Err(Error::RangeInvalid {
                sp: self.sp,
                ep: self.ep,
                n,
            })
        } else {
            Ok(())
        }
    }
}

/// An internal suffix tree node seen as an LCP interval. Slots are 0-based
/// and inclusive; every boundary `b` satisfies `lb < b <= rb` and
/// `lcp[b] == depth`, and separates two children.
#[derive(Clone, Copy, Debug)]
pub struct Node<'a> {
    pub depth: u32,
    pub lb: usize,
    pub rb: usize,
    pub boundaries: &'a [u32],
}

impl Node<'_> {
    pub fn locus(&self) -> LocusRange {
        LocusRange::new(self.lb + 1, self.rb + 1)
    }
}

#[derive(Clone, Debug)]
pub struct TextIndex {
    collection: Collection,
    sa: Vec<u32>,
    lcp: Vec<u32>,
    da: Vec<u32>,
    prev: Vec<u32>,
    rmq: Rmq,
}

impl TextIndex {
    pub fn build(collection: Collection) -> Self {
        let sa = suffix_array(collection.text());
        Self::assemble(collection, sa)
    }

    /// Rebuilds the derived arrays around a stored suffix array.
    pub fn from_suffix_array(collection: Collection, sa: Vec<u32>) -> Result<Self> {
        let n = collection.len();
        let mut seen = vec![false; n];
        for &p in &sa {
            if p as usize >= n || std::mem::replace(&mut seen[p as usize], true) {
                return Err(Error::Format("suffix array is not a permutation".into()));
            }
        }
        if sa.len() != n {
            return Err(Error::Format("suffix array length mismatch".into()));
        }
        let idx = Self::assemble(collection, sa);
        // adjacent suffixes must differ right after their common prefix, in order
        let text = idx.text();
        let sorted = (1..n).all(|i| {
            let (a, b) = (idx.sa[i - 1] as usize, idx.sa[i] as usize);
            let l = idx.lcp[i] as usize;
            match (text.get(a + l), text.get(b + l)) {
                (None, Some(_)) => true,
                (Some(x), Some(y)) => x < y,
                _ => false,
            }
        });
        if !sorted {
            return Err(Error::Format("suffix array is not sorted".into()));
        }
        Ok(idx)
    }

    fn assemble(collection: Collection, sa: Vec<u32>) -> Self {
        let text = collection.text();
        let lcp = lcp_array(text, &sa);
        let mut doc_of_pos = vec![0u32; text.len()];
        for (d, w) in collection.doc_offsets().iter().enumerate() {
            let end = collection.doc_offsets().get(d + 1).copied().unwrap_or(text.len());
            doc_of_pos[*w..end].fill(d as u32 + 1);
        }
        let da: Vec<u32> = sa.iter().map(|&p| doc_of_pos[p as usize]).collect();
        drop(doc_of_pos);
        let mut last = vec![0u32; collection.num_docs() + 1];
        let prev = da
            .iter()
            .enumerate()
            .map(|(i, &d)| std::mem::replace(&mut last[d as usize], i as u32 + 1))
            .collect();
        let rmq = Rmq::new(&lcp);
        Self {
            collection,
            sa,
            lcp,
            da,
            prev,
            rmq,
        }
    }

    pub fn collection(&self) -> &Collection {
        &self.collection
    }

    pub fn text(&self) -> &[u8] {
        self.collection.text()
    }

    pub fn len(&self) -> usize {
        self.sa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sa.is_empty()
    }

    pub fn num_docs(&self) -> usize {
        self.collection.num_docs()
    }

    /// 0-based text positions by slot.
    pub fn sa(&self) -> &[u32] {
        &self.sa
    }

    /// `lcp[0] = 0`; `lcp[k]` compares slots `k - 1` and `k`.
    pub fn lcp(&self) -> &[u32] {
        &self.lcp
    }

    /// 1-based document ids by slot.
    pub fn da(&self) -> &[u32] {
        &self.da
    }

    /// The C array: 1-based SA position of the previous slot holding the same
    /// document, or 0 when the slot is the first for its document.
    pub fn prev_same_doc(&self) -> &[u32] {
        &self.prev
    }

    /// Leftmost position of the minimum of `lcp[l..=r]`, 1-based.
    pub fn rmq_leftmost_min(&self, l: usize, r: usize) -> Result<usize> {
        LocusRange::new(l, r).validate(self.len())?;
        Ok(self.rmq.query(&self.lcp, l - 1, r - 1) + 1)
    }

    /// 0-based variant without bounds checks.
    #[inline]
    pub(crate) fn rmq_slots(&self, l: usize, r: usize) -> usize {
        self.rmq.query(&self.lcp, l, r)
    }

    fn cmp_prefix(&self, slot: usize, pattern: &[u8]) -> Ordering {
        let text = self.text();
        let start = self.sa[slot] as usize;
        let end = (start + pattern.len()).min(text.len());
        text[start..end].cmp(pattern)
    }

    /// Maximal SA range of suffixes prefixed by `pattern`, or `None` if it does not occur.
    pub fn find(&self, pattern: &[u8]) -> Option<LocusRange> {
        if pattern.is_empty() {
            return Some(LocusRange::new(1, self.len()));
        }
        let lo = self.partition(|s| self.cmp_prefix(s, pattern) == Ordering::Less);
        let hi = self.partition(|s| self.cmp_prefix(s, pattern) != Ordering::Greater);
        (lo < hi).then(|| LocusRange::new(lo + 1, hi))
    }

    fn partition(&self, pred: impl Fn(usize) -> bool) -> usize {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if pred(mid) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Visits every internal node (LCP interval) bottom-up, children before
    /// parents. The root `[0, n-1]` is always reported last.
    pub fn for_each_internal_node(&self, mut f: impl FnMut(&Node<'_>)) {
        struct Open {
            depth: u32,
            lb: usize,
            boff: usize,
        }
        let n = self.len();
        if n == 0 {
            return;
        }
        let mut stack = vec![Open { depth: 0, lb: 0, boff: 0 }];
        let mut bounds: Vec<u32> = Vec::new();
        for i in 1..=n {
            let cur = if i < n { Some(self.lcp[i]) } else { None };
            let mut lb = i - 1;
            while let Some(top) = stack.last() {
                if cur.is_some_and(|c| c >= top.depth) {
                    break;
                }
                let top = stack.pop().unwrap();
                f(&Node {
                    depth: top.depth,
                    lb: top.lb,
                    rb: i - 1,
                    boundaries: &bounds[top.boff..],
                });
                bounds.truncate(top.boff);
                lb = top.lb;
            }
            let Some(c) = cur else { break };
            if stack.last().is_none_or(|t| c > t.depth) {
                stack.push(Open {
                    depth: c,
                    lb,
                    boff: bounds.len(),
                });
            }
            bounds.push(i as u32);
        }
    }

    /// Every locus: all internal nodes and all single-suffix leaves.
    pub fn all_loci(&self) -> Vec<LocusRange> {
        let mut out: Vec<LocusRange> = (1..=self.len()).map(|i| LocusRange::new(i, i)).collect();
        self.for_each_internal_node(|node| {
            if node.rb > node.lb {
                out.push(node.locus());
            }
        });
        out
    }

    /// Approximate heap footprint of the arrays, in bits.
    pub fn size_in_bits(&self) -> usize {
        (self.sa.len() + self.lcp.len() + self.da.len() + self.prev.len()) * 32 + self.rmq.size_in_bits()
    }
}
