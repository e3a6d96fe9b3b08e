//! Sorted multi-indices and the combinatorics of symmetric storage.

use std::sync::OnceLock;

const FACT_TABLE_LEN: usize = 171;

fn factorials() -> &'static [f64; FACT_TABLE_LEN] {
    static TABLE: OnceLock<[f64; FACT_TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0; FACT_TABLE_LEN];
        for n in 1..FACT_TABLE_LEN {
            t[n] = t[n - 1] * n as f64;
        }
        t
    })
}

/// `n!` as f64 (infinite beyond 170).
pub fn factorial(n: usize) -> f64 {
    factorials().get(n).copied().unwrap_or(f64::INFINITY)
}

/// Binomial coefficient `C(n, k)` as f64.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for j in 0..k {
        r = r * (n - j) as f64 / (j + 1) as f64;
    }
    r.round()
}

/// Runs `(value, count)` of a sorted multi-index.
pub fn runs(key: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &k in key {
        match out.last_mut() {
            Some((v, c)) if *v == k => *c += 1,
            _ => out.push((k, 1)),
        }
    }
    out
}

/// Number of distinct tuples that sort to `key`: `n! / Π count_i!`.
pub fn multiplicity(key: &[usize]) -> f64 {
    let mut m = factorial(key.len());
    for (_, c) in runs(key) {
        m /= factorial(c);
    }
    m
}

/// All sorted multi-indices of the given length over `0..dim`, in lexicographic order.
pub fn multisets(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(degree);
    fn rec(dim: usize, degree: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == degree {
            out.push(cur.clone());
            return;
        }
        for k in start..dim {
            cur.push(k);
            rec(dim, degree, k, cur, out);
            cur.pop();
        }
    }
    rec(dim, degree, 0, &mut cur, &mut out);
    out
}

/// Merge of two sorted multi-indices.
pub fn merge(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Visits every sub-multiset `J ⊆ key` with `|J| = size`, passing
/// `(J, key - J, Π_i C(count_i, j_i))`.
pub fn for_each_sub_multiset<F>(key: &[usize], size: usize, mut f: F)
where
    F: FnMut(&[usize], &[usize], f64),
{
    if size > key.len() {
        return;
    }
    let rs = runs(key);
    let mut take = vec![0usize; rs.len()];
    // suffix capacity for pruning
    let mut cap = vec![0usize; rs.len() + 1];
    for i in (0..rs.len()).rev() {
        cap[i] = cap[i + 1] + rs[i].1;
    }
    fn rec<F: FnMut(&[usize], &[usize], f64)>(
        i: usize,
        left: usize,
        rs: &[(usize, usize)],
        cap: &[usize],
        take: &mut [usize],
        f: &mut F,
    ) {
        if i == rs.len() {
            if left == 0 {
                let mut sub = Vec::new();
                let mut rest = Vec::new();
                let mut w = 1.0;
                for (r, &t) in rs.iter().zip(take.iter()) {
                    sub.extend(std::iter::repeat_n(r.0, t));
                    rest.extend(std::iter::repeat_n(r.0, r.1 - t));
                    w *= binomial(r.1, t);
                }
                f(&sub, &rest, w);
            }
            return;
        }
        if cap[i] < left {
            return;
        }
        for t in 0..=rs[i].1.min(left) {
            take[i] = t;
            rec(i + 1, left - t, rs, cap, take, f);
        }
        take[i] = 0;
    }
    rec(0, size, &rs, &cap, &mut take, &mut f);
}
