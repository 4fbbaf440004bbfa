//! Brute-force oracles shared by the integration tests. None of them call into
//! the library's algorithms; they only consume its data types.

#![allow(dead_code)]

use num_rational::Ratio;

/// Every maximal Schreier set with maximum `≤ max`, by scanning all subsets of
/// `{1..max}`, sorted by (maximum, lexicographic).
pub fn brute_schreier_sets(max: u32) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << max) {
        let set: Vec<u64> = (0..max).filter(|b| mask & (1 << b) != 0).map(|b| b as u64 + 1).collect();
        if set.len() as u64 == set[0] {
            out.push(set);
        }
    }
    out.sort_by(|a, b| a.last().cmp(&b.last()).then_with(|| a.cmp(b)));
    out
}

/// Maximal Schreier sets with maximum `≤ max` in canonical order, built by
/// recursive generation (fast enough for `max` in the low twenties).
pub fn generated_schreier_sets(max: u64) -> Vec<Vec<u64>> {
    fn middles(lo: u64, hi: u64, k: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=hi {
            if hi - v + 1 < k {
                break;
            }
            cur.push(v);
            middles(v + 1, hi, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![vec![1]];
    for n in 3..=max {
        for m in 2..n {
            let mut mids = Vec::new();
            if m - 2 < n - m {
                middles(m + 1, n - 1, m - 2, &mut Vec::new(), &mut mids);
            }
            for mid in mids {
                let mut set = vec![m];
                set.extend(mid);
                set.push(n);
                out.push(set);
            }
        }
    }
    out
}

/// Checks the three pair-family conditions straight from a distance matrix.
pub fn brute_pair_family_ok(d: &[Vec<f64>], pairs: &[(usize, usize)], k: f64) -> bool {
    if !(k > 0.0 && k <= 1.0) {
        return false;
    }
    let radius = |n: usize| k * d[pairs[n].0][pairs[n].1];
    for &(x, y) in pairs {
        if x == y {
            return false;
        }
    }
    for m in 0..pairs.len() {
        for n in 0..pairs.len() {
            if d[pairs[m].0][pairs[n].1] < radius(n) {
                return false;
            }
        }
    }
    for row in d {
        let owners = (0..pairs.len()).filter(|&n| row[pairs[n].1] < radius(n)).count();
        if owners > 1 {
            return false;
        }
    }
    true
}

/// `max_{p≠q} |f(p) − f(q)| / d(p, q)^α` by scanning every ordered pair.
pub fn brute_seminorm(d: &[Vec<f64>], f: &[f64], alpha: f64) -> f64 {
    let mut best = 0.0f64;
    for p in 0..f.len() {
        for q in 0..f.len() {
            if p != q {
                best = best.max((f[p] - f[q]).abs() / d[p][q].powf(alpha));
            }
        }
    }
    best
}

pub type Q = Ratio<i128>;

fn pow2(n: u32) -> Q {
    Q::new(1, 1i128 << n)
}

/// Points of a copy of `[1, ω^e]` inside `[a, a + s]`, top point at `a`, with
/// only the first `parts` pieces at every level.
fn place(e: u32, a: Q, s: Q, parts: u32, out: &mut Vec<Q>) {
    out.push(a);
    if e == 0 {
        return;
    }
    for n in 1..=parts {
        place(e - 1, a + s * pow2(n), s * pow2(n + 2), parts, out);
    }
}

/// Truncated geometric model of `[1, o]` for `o = Σ ω^e·c`, given as
/// `(exponent, coefficient)` terms. Components sit at `[3j, 3j + 1]`.
pub fn ordinal_points(terms: &[(u32, u64)], parts: u32) -> Vec<Q> {
    let mut out = Vec::new();
    let mut j = 0i128;
    for &(e, c) in terms {
        for _ in 0..c {
            place(e, Q::from_integer(3 * j), Q::from_integer(1), parts, &mut out);
            j += 1;
        }
    }
    out
}

/// Number of points of the coarse model (`m` pieces per level) that have
/// another point of the fine model within `2^-(2m+5)`.
pub fn detected_limit_points(terms: &[(u32, u64)], m: u32) -> usize {
    let coarse = ordinal_points(terms, m);
    let mut fine = ordinal_points(terms, 2 * m + 8);
    fine.sort();
    let delta = pow2(2 * m + 5);
    coarse
        .iter()
        .filter(|&&p| {
            let i = fine.partition_point(|q| *q < p);
            let left = i.checked_sub(1).map(|i| p - fine[i]);
            let right = fine.get(i + 1).map(|q| *q - p);
            debug_assert!(fine[i] == p);
            left.into_iter().chain(right).any(|gap| gap < delta)
        })
        .count()
}
