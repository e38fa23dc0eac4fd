//! Minimal commutator dimension mu*(d, p): the smallest possible value of
//! dim [V, x] over linear operators x of order d on F_p-spaces.
//!
//! The closed computation follows the recursion
//!   mu*(d) = mu*(d_p) + mu*(d_{p'}),   mu*(p^a) = p^(a-1),
//!   mu*(d) = min(ord_d(p), min over coprime splittings ab = d of
//!                mu*(a) + mu*(b))          for (d, p) = 1,
//! taking the least of the stated alternatives. An independent brute-force
//! oracle enumerates block-diagonal operators over F_p and minimizes the
//! rank of x - 1 directly.

use std::collections::BTreeMap;
use std::sync::Mutex;

use crate::numth::{coprime_factorizations, factorize, is_prime, mult_order};
#[cfg(test)]
use crate::numth::divisors;
use crate::EngineError;

/// Memoized table of mu*(d, p) for one prime.
#[derive(Debug)]
pub struct MuStarTable {
    p: u64,
    entries: Mutex<BTreeMap<u64, u64>>,
}

impl MuStarTable {
    pub fn new(p: u64) -> Self {
        assert!(is_prime(p), "mu* tables are indexed by primes");
        MuStarTable {
            p,
            entries: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn get(&self, d: u64) -> u64 {
        let mut memo = self.entries.lock().unwrap();
        compute(d, self.p, &mut memo)
    }

    /// Rows `(d, mu*(d,p))` for `1 <= d <= d_max`.
    pub fn rows(&self, d_max: u64) -> Vec<(u64, u64)> {
        (1..=d_max).map(|d| (d, self.get(d))).collect()
    }
}

fn compute(d: u64, p: u64, memo: &mut BTreeMap<u64, u64>) -> u64 {
    if d == 1 {
        return 0;
    }
    if let Some(&v) = memo.get(&d) {
        return v;
    }
    // split off the p-part
    let mut dp = 1u64;
    let mut rest = d;
    while rest % p == 0 {
        rest /= p;
        dp *= p;
    }
    let v = if dp > 1 {
        let a = factorize(dp)[0].1;
        p.pow(a - 1) + compute(rest, p, memo)
    } else {
        // d coprime to p
        let mut best = mult_order(p, d).expect("coprime by construction");
        for parts in coprime_factorizations(d) {
            if parts.len() < 2 {
                continue;
            }
            let sum: u64 = parts.iter().map(|&m| compute(m, p, memo)).sum();
            best = best.min(sum);
        }
        best
    };
    memo.insert(d, v);
    v
}

/// mu*(d, p) without an explicit table.
pub fn mustar(d: u64, p: u64) -> u64 {
    assert!(d >= 1);
    assert!(is_prime(p));
    compute(d, p, &mut BTreeMap::new())
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

/// Dense matrix over F_p, row major.
#[derive(Clone, PartialEq, Eq)]
struct MatFp {
    p: u64,
    n: usize,
    a: Vec<u64>,
}

impl MatFp {
    fn identity(p: u64, n: usize) -> Self {
        let mut a = vec![0; n * n];
        for i in 0..n {
            a[i * n + i] = 1;
        }
        MatFp { p, n, a }
    }

    fn at(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.n + j]
    }

    fn mul(&self, other: &MatFp) -> MatFp {
        let n = self.n;
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let s = self.at(i, k);
                if s == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = (out[i * n + j] + s * other.at(k, j)) % self.p;
                }
            }
        }
        MatFp { p: self.p, n, a: out }
    }

    fn is_identity(&self) -> bool {
        *self == MatFp::identity(self.p, self.n)
    }

    /// rank(self - 1) by Gaussian elimination.
    fn rank_minus_identity(&self) -> usize {
        let n = self.n;
        let p = self.p;
        let mut m: Vec<u64> = self.a.clone();
        for i in 0..n {
            m[i * n + i] = (m[i * n + i] + p - 1) % p;
        }
        let mut rank = 0;
        let mut col = 0;
        while rank < n && col < n {
            let pivot = (rank..n).find(|&r| m[r * n + col] != 0);
            let Some(pr) = pivot else {
                col += 1;
                continue;
            };
            for j in 0..n {
                m.swap(rank * n + j, pr * n + j);
            }
            let inv = mod_inverse(m[rank * n + col], p);
            for j in 0..n {
                m[rank * n + j] = m[rank * n + j] * inv % p;
            }
            for r in 0..n {
                if r != rank && m[r * n + col] != 0 {
                    let f = m[r * n + col];
                    for j in 0..n {
                        m[r * n + j] = (m[r * n + j] + (p - f) * m[rank * n + j]) % p;
                    }
                }
            }
            rank += 1;
            col += 1;
        }
        rank
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p prime, a != 0
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Monic polynomial over F_p, lowest coefficient first, leading coeff 1.
fn poly_divides(g: &[u64], d: u64, p: u64) -> bool {
    // does g divide x^d - 1? compute x^d mod g by repeated squaring on
    // polynomials, then compare with 1.
    let deg = g.len() - 1;
    if deg == 0 {
        return true;
    }
    let mul_mod = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        // reduce mod g
        while prod.len() > deg {
            let lead = *prod.last().unwrap();
            let shift = prod.len() - 1 - deg;
            if lead != 0 {
                for (k, &gc) in g.iter().enumerate() {
                    prod[shift + k] = (prod[shift + k] + (p - 1) * lead % p * gc) % p;
                }
            }
            prod.pop();
        }
        prod
    };
    let mut acc = vec![1u64]; // 1
    let mut base = if deg == 1 {
        // x mod g
        vec![(p - g[0]) % p]
    } else {
        vec![0, 1]
    };
    let mut e = d;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &base);
        }
        base = mul_mod(&base, &base);
        e >>= 1;
    }
    // acc == 1?
    let mut one = vec![0u64; acc.len().max(1)];
    if !one.is_empty() {
        one[0] = 1;
    }
    while acc.len() < one.len() {
        acc.push(0);
    }
    acc == one
}

fn companion(g: &[u64], p: u64) -> MatFp {
    let n = g.len() - 1;
    let mut m = MatFp {
        p,
        n,
        a: vec![0; n * n],
    };
    for i in 1..n {
        m.a[i * n + (i - 1)] = 1;
    }
    for i in 0..n {
        m.a[i * n + (n - 1)] = (p - g[i]) % p;
    }
    m
}

#[derive(Clone)]
struct Block {
    dim: usize,
    order: u64,
    rank: usize,
}

/// Brute-force minimal commutator dimension for operators of order exactly
/// `d` over F_p in dimension at most `dim_max`.
///
/// Every operator with x^d = 1 is similar to a direct sum of companion
/// matrices of monic divisors of x^d - 1, so enumerating those blocks (plus
/// unipotent Jordan blocks, which arise as companions of (x-1)^b) covers all
/// conjugacy classes. Orders and ranks are measured on the actual matrices.
pub fn mustar_oracle(d: u64, p: u64, dim_max: usize) -> Result<Option<u64>, EngineError> {
    if d < 2 {
        return Err(EngineError::Domain("oracle requires d >= 2".into()));
    }
    if !is_prime(p) {
        return Err(EngineError::Domain(format!("{p} is not prime")));
    }
    let budget: u64 = 200_000_000;
    let est = (p as u64).saturating_pow(dim_max as u32 + 1);
    if est.saturating_mul(dim_max as u64) > budget {
        return Err(EngineError::Resource(format!(
            "oracle budget exceeded for p={p}, dim_max={dim_max}"
        )));
    }

    // all monic divisors of x^d - 1 with 1 <= deg <= dim_max
    let mut blocks: Vec<Block> = Vec::new();
    for deg in 1..=dim_max {
        let count = (p as u64).pow(deg as u32);
        for code in 0..count {
            let mut g = Vec::with_capacity(deg + 1);
            let mut c = code;
            for _ in 0..deg {
                g.push(c % p);
                c /= p;
            }
            g.push(1);
            if !poly_divides(&g, d, p) {
                continue;
            }
            let m = companion(&g, p);
            // order by iterated multiplication, capped at d
            let mut pow = m.clone();
            let mut order = 0u64;
            for k in 1..=d {
                if pow.is_identity() {
                    order = k;
                    break;
                }
                pow = pow.mul(&m);
            }
            if order == 0 || d % order != 0 {
                continue;
            }
            blocks.push(Block {
                dim: deg,
                order,
                rank: m.rank_minus_identity(),
            });
        }
    }

    // assemble direct sums: minimize total rank subject to lcm of block
    // orders == d and total dimension <= dim_max
    fn lcm(a: u64, b: u64) -> u64 {
        a / crate::numth::gcd(a, b) * b
    }
    let mut best: Option<u64> = None;
    // depth-first over multisets of blocks
    fn rec(
        blocks: &[Block],
        from: usize,
        dim_left: usize,
        cur_lcm: u64,
        cur_rank: u64,
        d: u64,
        best: &mut Option<u64>,
        lcm: &dyn Fn(u64, u64) -> u64,
    ) {
        if cur_lcm == d && best.map_or(true, |b| cur_rank < b) {
            *best = Some(cur_rank);
        }
        if best.map_or(false, |b| cur_rank >= b) {
            return;
        }
        for i in from..blocks.len() {
            let b = &blocks[i];
            if b.dim > dim_left {
                continue;
            }
            let nl = lcm(cur_lcm, b.order);
            if d % nl != 0 {
                continue;
            }
            rec(
                blocks,
                i,
                dim_left - b.dim,
                nl,
                cur_rank + b.rank as u64,
                d,
                best,
                lcm,
            );
        }
    }
    rec(&blocks, 0, dim_max, 1, 0, d, &mut best, &lcm);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_invariants() {
        for p in [2u64, 3, 5, 7] {
            let t = MuStarTable::new(p);
            assert_eq!(t.get(1), 0);
            for d in 2..=60 {
                assert!(t.get(d) >= 1);
                for m in divisors(d) {
                    assert!(t.get(m) <= t.get(d), "mu*({m}) > mu*({d}) at p={p}");
                }
            }
        }
    }

    #[test]
    fn paper_values() {
        assert_eq!(mustar(15, 2), 4);
        assert_eq!(mustar(8, 3), 2);
        assert_eq!(mustar(9, 3), 3);
        assert_eq!(mustar(1, 5), 0);
        // min(ord_35(2) = 12, ord_5(2) + ord_7(2) = 4 + 3)
        assert_eq!(mustar(35, 2), 7);
    }

    #[test]
    fn p2_and_p3_classification_lists() {
        // p = 2, m <= 15: value classes
        let by_val = |val: u64| -> Vec<u64> {
            (2..=15).filter(|&m| mustar(m, 2) == val).collect()
        };
        assert_eq!(by_val(1), vec![2]);
        assert_eq!(by_val(2), vec![3, 4]);
        assert_eq!(by_val(3), vec![6, 7]);
        assert_eq!(by_val(4), vec![5, 8, 12, 14, 15]);
        // p = 3, m <= 8
        let by_val3 = |val: u64| -> Vec<u64> {
            (2..=8).filter(|&m| mustar(m, 3) == val).collect()
        };
        assert_eq!(by_val3(1), vec![2, 3]);
        assert_eq!(by_val3(2), vec![4, 6, 8]);
    }

    #[test]
    fn mustar_one_iff_d_eq_p_or_divides_p_minus_1() {
        for p in [5u64, 7, 11, 13] {
            for d in 2..=40 {
                let expect = d == p || (p - 1) % d == 0;
                assert_eq!(mustar(d, p) == 1, expect, "d={d} p={p}");
            }
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(mustar_oracle(7, 2, 4).unwrap(), Some(3));
        assert_eq!(mustar_oracle(4, 2, 3).unwrap(), Some(2));
        assert_eq!(mustar_oracle(25, 2, 4).unwrap(), None);
    }

    #[test]
    fn oracle_matches_recursion_in_range() {
        // a realization of mu* = k needs k+1 dimensions when p divides d
        // (the unipotent Jordan block keeps a fixed line), so the oracle
        // gets one dimension of headroom
        for p in [2u64, 3, 5] {
            for d in 2..=20 {
                let closed = mustar(d, p);
                if closed <= 6 {
                    let got = mustar_oracle(d, p, 7).unwrap();
                    assert_eq!(got, Some(closed), "d={d} p={p}");
                }
            }
        }
    }

    #[test]
    fn additivity_on_coprime_splittings_vs_oracle() {
        // spot-checked against the oracle rather than asserted universally
        for (a, b, p) in [(3u64, 5u64, 2u64), (4, 3, 5), (2, 7, 3)] {
            let d = a * b;
            let sum = mustar(a, p) + mustar(b, p);
            if sum <= 6 {
                let got = mustar_oracle(d, p, 6).unwrap().unwrap();
                assert!(got <= sum);
                assert_eq!(got, mustar(d, p));
            }
        }
    }
}
