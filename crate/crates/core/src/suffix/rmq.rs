/// Leftmost range-minimum queries: in-block scans plus a sparse table over
/// block minima.
#[derive(Clone, Debug)]
pub struct Rmq {
    block_min: Vec<u32>,
    /// `table[k][b]` = block index of the leftmost minimum over blocks `b..b + 2^k`.
    table: Vec<Vec<u32>>,
}

const BLOCK: usize = 32;

impl Rmq {
    pub fn new(values: &[u32]) -> Self {
        let nb = values.len().div_ceil(BLOCK);
        let mut block_min = Vec::with_capacity(nb);
        for b in 0..nb {
            let end = ((b + 1) * BLOCK).min(values.len());
            block_min.push(leftmost_min(values, b * BLOCK, end - 1) as u32);
        }
        let mut table: Vec<Vec<u32>> = vec![(0..nb as u32).collect()];
        let mut k = 1;
        while (1usize << k) <= nb {
            let prev = &table[k - 1];
            let half = 1usize << (k - 1);
            let row: Vec<u32> = (0..=nb - (1 << k))
                .map(|b| {
                    let (x, y) = (prev[b], prev[b + half]);
                    let (vx, vy) = (
                        values[block_min[x as usize] as usize],
                        values[block_min[y as usize] as usize],
                    );
                    if vy < vx {
                        y
                    } else {
                        x
                    }
                })
                .collect();
            table.push(row);
            k += 1;
        }
        Self { block_min, table }
    }

    /// Leftmost position of the minimum of `values[l..=r]` (0-based).
    pub fn query(&self, values: &[u32], l: usize, r: usize) -> usize {
        debug_assert!(l <= r && r < values.len());
        let (bl, br) = (l / BLOCK, r / BLOCK);
        if br <= bl + 1 {
            return leftmost_min(values, l, r);
        }
        let mut best = leftmost_min(values, l, (bl + 1) * BLOCK - 1);
        let (fl, fr) = (bl + 1, br - 1);
        let k = usize::BITS as usize - 1 - (fr - fl + 1).leading_zeros() as usize;
        let a = self.table[k][fl];
        let b = self.table[k][fr + 1 - (1 << k)];
        for blk in [a, b] {
            let p = self.block_min[blk as usize] as usize;
            if values[p] < values[best] {
                best = p;
            }
        }
        let tail = leftmost_min(values, br * BLOCK, r);
        if values[tail] < values[best] {
            best = tail;
        }
        best
    }

    pub fn size_in_bits(&self) -> usize {
        (self.block_min.len() + self.table.iter().map(Vec::len).sum::<usize>()) * 32
    }
}

fn leftmost_min(values: &[u32], l: usize, r: usize) -> usize {
    let mut best = l;
    for i in l + 1..=r {
        if values[i] < values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_linear_scan() {
        let mut state = 5u64;
        for n in [1usize, 2, 31, 32, 33, 64, 65, 200, 1000] {
            let values: Vec<u32> = (0..n)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                    ((state >> 40) % 7) as u32
                })
                .collect();
            let rmq = Rmq::new(&values);
            for l in 0..n {
                for r in (l..n).step_by(1 + n / 50) {
                    let scan = (l..=r).min_by_key(|&i| (values[i], i)).unwrap();
                    assert_eq!(rmq.query(&values, l, r), scan, "n={n} l={l} r={r}");
                }
            }
        }
    }
}
