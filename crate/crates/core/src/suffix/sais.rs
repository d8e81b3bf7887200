//! Suffix array construction by induced sorting (SA-IS).

const EMPTY: u32 = u32::MAX;

/// Suffix array of `text` under plain lexicographic order, where a suffix
/// that is a proper prefix of another sorts first. Entries are 0-based text
/// positions.
pub fn suffix_array(text: &[u8]) -> Vec<u32> {
    assert!(text.len() < u32::MAX as usize - 1, "text too long for 32-bit suffix array");
    let n = text.len();
    let mut s: Vec<u32> = Vec::with_capacity(n + 1);
    s.extend(text.iter().map(|&b| b as u32 + 1));
    s.push(0);
    let mut sa = vec![0u32; n + 1];
    sais(&s, &mut sa, 257);
    drop(s);
    // sa[0] is the virtual terminator
    sa.remove(0);
    sa
}

fn bucket_starts(cnt: &[u32], out: &mut [u32]) {
    let mut sum = 0;
    for (o, &c) in out.iter_mut().zip(cnt) {
        *o = sum;
        sum += c;
    }
}

fn bucket_ends(cnt: &[u32], out: &mut [u32]) {
    let mut sum = 0;
    for (o, &c) in out.iter_mut().zip(cnt) {
        sum += c;
        *o = sum;
    }
}

#[inline]
fn is_lms(t: &[bool], i: usize) -> bool {
    i > 0 && t[i] && !t[i - 1]
}

fn induce(s: &[u32], sa: &mut [u32], t: &[bool], cnt: &[u32], bkt: &mut [u32]) {
    let n = s.len();
    bucket_starts(cnt, bkt);
    for i in 0..n {
        let j = sa[i];
        if j != EMPTY && j > 0 && !t[j as usize - 1] {
            let c = s[j as usize - 1] as usize;
            sa[bkt[c] as usize] = j - 1;
            bkt[c] += 1;
        }
    }
    bucket_ends(cnt, bkt);
    for i in (0..n).rev() {
        let j = sa[i];
        if j != EMPTY && j > 0 && t[j as usize - 1] {
            let c = s[j as usize - 1] as usize;
            bkt[c] -= 1;
            sa[bkt[c] as usize] = j - 1;
        }
    }
}

fn lms_substrings_equal(s: &[u32], t: &[bool], a: usize, b: usize) -> bool {
    let mut d = 0;
    loop {
        if s[a + d] != s[b + d] || t[a + d] != t[b + d] {
            return false;
        }
        if d > 0 {
            let (la, lb) = (is_lms(t, a + d), is_lms(t, b + d));
            if la && lb {
                return true;
            }
            if la != lb {
                return false;
            }
        }
        d += 1;
    }
}

/// `s` must end with a unique smallest symbol 0; symbols are `< k`.
fn sais(s: &[u32], sa: &mut [u32], k: usize) {
    let n = s.len();
    debug_assert_eq!(sa.len(), n);
    if n == 1 {
        sa[0] = 0;
        return;
    }
    let mut t = vec![false; n];
    t[n - 1] = true;
    for i in (0..n - 1).rev() {
        t[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && t[i + 1]);
    }
    let mut cnt = vec![0u32; k];
    for &c in s {
        cnt[c as usize] += 1;
    }
    let mut bkt = vec![0u32; k];

    sa.fill(EMPTY);
    bucket_ends(&cnt, &mut bkt);
    for i in 1..n {
        if is_lms(&t, i) {
            let c = s[i] as usize;
            bkt[c] -= 1;
            sa[bkt[c] as usize] = i as u32;
        }
    }
    induce(s, sa, &t, &cnt, &mut bkt);

    // sorted LMS suffixes to the front
    let mut m = 0;
    for i in 0..n {
        let p = sa[i];
        if is_lms(&t, p as usize) {
            sa[m] = p;
            m += 1;
        }
    }
    sa[m..].fill(EMPTY);
    let mut names = 0u32;
    let mut prev: Option<usize> = None;
    for i in 0..m {
        let p = sa[i] as usize;
        if prev.is_none_or(|q| !lms_substrings_equal(s, &t, q, p)) {
            names += 1;
            prev = Some(p);
        }
        sa[m + p / 2] = names - 1;
    }
    let mut j = n;
    for i in (m..n).rev() {
        if sa[i] != EMPTY {
            j -= 1;
            sa[j] = sa[i];
        }
    }

    let reduced: Vec<u32> = sa[n - m..].to_vec();
    {
        let sa1 = &mut sa[..m];
        if (names as usize) < m {
            sais(&reduced, sa1, names as usize);
        } else {
            for (i, &c) in reduced.iter().enumerate() {
                sa1[c as usize] = i as u32;
            }
        }
    }
    let mut lms_positions = reduced;
    let mut j = 0;
    for i in 1..n {
        if is_lms(&t, i) {
            lms_positions[j] = i as u32;
            j += 1;
        }
    }
    for i in 0..m {
        sa[i] = lms_positions[sa[i] as usize];
    }
    sa[m..].fill(EMPTY);
    bucket_ends(&cnt, &mut bkt);
    for i in (0..m).rev() {
        let p = sa[i];
        sa[i] = EMPTY;
        let c = s[p as usize] as usize;
        bkt[c] -= 1;
        sa[bkt[c] as usize] = p;
    }
    induce(s, sa, &t, &cnt, &mut bkt);
}

/// LCP array by Kasai et al.: `lcp[0] = 0`, `lcp[i]` is the longest common
/// prefix of the suffixes at `sa[i - 1]` and `sa[i]`.
pub fn lcp_array(text: &[u8], sa: &[u32]) -> Vec<u32> {
    let n = text.len();
    let mut rank = vec![0u32; n];
    for (i, &p) in sa.iter().enumerate() {
        rank[p as usize] = i as u32;
    }
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for p in 0..n {
        let r = rank[p] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let q = sa[r - 1] as usize;
        while p + h < n && q + h < n && text[p + h] == text[q + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(text: &[u8]) -> Vec<u32> {
        let mut sa: Vec<u32> = (0..text.len() as u32).collect();
        sa.sort_by(|&a, &b| text[a as usize..].cmp(&text[b as usize..]));
        sa
    }

    #[test]
    fn small_cases() {
        for t in [&b""[..], b"a", b"aa", b"banana", b"mississippi", b"ab\0ab\0", b"\0\0\0", b"abababab"] {
            assert_eq!(suffix_array(t), naive(t), "{t:?}");
        }
    }

    #[test]
    fn random_texts_match_naive_sort() {
        let mut state = 99u64;
        for len in [2usize, 3, 10, 100, 500, 2000] {
            for sigma in [1u64, 2, 4, 200] {
                let text: Vec<u8> = (0..len)
                    .map(|_| {
                        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        ((state >> 33) % sigma) as u8
                    })
                    .collect();
                let sa = suffix_array(&text);
                assert_eq!(sa, naive(&text), "len={len} sigma={sigma}");
                let lcp = lcp_array(&text, &sa);
                for i in 1..len {
                    let (a, b) = (&text[sa[i - 1] as usize..], &text[sa[i] as usize..]);
                    let l = a.iter().zip(b).take_while(|(x, y)| x == y).count();
                    assert_eq!(lcp[i] as usize, l);
                }
            }
        }
    }
}
