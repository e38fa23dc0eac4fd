//! Elementary number theory over 64-bit integers: totients, divisor
//! lattices, multiplicative orders and coprime factorizations.
//!
//! All orders appearing in the engine are small (< 10^3), so trial division
//! is sufficient everywhere.

use crate::rat::Rat;
use crate::EngineError;

/// Prime factorization by trial division, as (prime, exponent) pairs in
/// increasing prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1);
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Euler totient.
pub fn euler_phi(m: u64) -> Result<u64, EngineError> {
    if m == 0 {
        return Err(EngineError::Domain("phi(0) is undefined".into()));
    }
    let mut out = m;
    for (p, _) in factorize(m) {
        out = out / p * (p - 1);
    }
    Ok(out)
}

/// Totient extended to rationals by zero: `phi(a) = 0` when `a` is not an
/// integer. Totient sums over divisor lattices use this convention.
pub fn euler_phi_rat(a: &Rat) -> u64 {
    if !a.is_integer() || a.is_negative() || a.is_zero() {
        return 0;
    }
    let n: u64 = a.numer().try_into().expect("phi argument out of range");
    euler_phi(n).unwrap()
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Smallest `e >= 1` with `p^e = 1 (mod d)`. The order divides phi(d), so
/// only divisors of the totient are tested.
pub fn mult_order(p: u64, d: u64) -> Result<u64, EngineError> {
    if d < 2 {
        return Err(EngineError::Domain(format!(
            "mult_order requires modulus >= 2, got {d}"
        )));
    }
    if gcd(p, d) != 1 {
        return Err(EngineError::Domain(format!(
            "mult_order({p}, {d}): arguments not coprime"
        )));
    }
    let phi = euler_phi(d)?;
    for e in divisors(phi) {
        if mod_pow(p, e, d) == 1 {
            return Ok(e);
        }
    }
    unreachable!("order divides phi(d)")
}

/// Smallest `n` with `(p^n - 1)/(p - 1) >= n_min`, the least dimension whose
/// projective point count reaches the degree floor.
pub fn min_dim_for_degree(p: u64, n_min: u64) -> u32 {
    assert!(p >= 2 && n_min >= 2);
    let target = Rat::from_int(n_min as i64);
    let pm1 = Rat::from_int(p as i64 - 1);
    let mut n = 1u32;
    loop {
        let count = (Rat::int_pow(p, n as i64) - Rat::one()) / pm1.clone();
        if count >= target {
            return n;
        }
        n += 1;
    }
}

/// All multisets of pairwise-coprime integers > 1 with product `d`. Each
/// part is a product of full prime-power components of `d`, so these are
/// exactly the set partitions of the prime-power components.
pub fn coprime_factorizations(d: u64) -> Vec<Vec<u64>> {
    assert!(d >= 2);
    let comps: Vec<u64> = factorize(d).iter().map(|(p, e)| p.pow(*e)).collect();
    let mut partitions: Vec<Vec<Vec<u64>>> = vec![vec![]];
    for &c in &comps {
        let mut next = Vec::new();
        for part in &partitions {
            // join c into an existing block
            for i in 0..part.len() {
                let mut q = part.clone();
                q[i].push(c);
                next.push(q);
            }
            // or start a new block
            let mut q = part.clone();
            q.push(vec![c]);
            next.push(q);
        }
        partitions = next;
    }
    let mut out: Vec<Vec<u64>> = partitions
        .into_iter()
        .map(|blocks| {
            let mut f: Vec<u64> = blocks.iter().map(|b| b.iter().product()).collect();
            f.sort_unstable();
            f
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Primes in `[2, n]`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_small_values() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(7).unwrap(), 6);
        // direct enumeration oracle for phi(12)
        let by_count = (1..=12).filter(|&k| gcd(k, 12) == 1).count() as u64;
        assert_eq!(euler_phi(12).unwrap(), by_count);
        assert_eq!(euler_phi(12).unwrap(), 4);
        assert!(euler_phi(0).is_err());
    }

    #[test]
    fn phi_rat_convention() {
        assert_eq!(euler_phi_rat(&Rat::new(7, 2)), 0);
        assert_eq!(euler_phi_rat(&Rat::from_int(8)), 4);
        assert_eq!(euler_phi_rat(&Rat::zero()), 0);
    }

    #[test]
    fn phi_sums_to_d_over_divisors() {
        for d in 1..=2000u64 {
            let total: u64 = divisors(d).iter().map(|&m| euler_phi(m).unwrap()).sum();
            assert_eq!(total, d, "divisor-totient identity failed at {d}");
        }
    }

    #[test]
    fn orders() {
        assert_eq!(mult_order(2, 5).unwrap(), 4);
        assert_eq!(mult_order(3, 7).unwrap(), 6);
        assert_eq!(mult_order(2, 7).unwrap(), 3);
        assert!(mult_order(3, 9).is_err());
        // order divides phi
        for p in [2u64, 3, 5, 7, 11, 13] {
            for d in 2..200u64 {
                if gcd(p, d) == 1 {
                    let e = mult_order(p, d).unwrap();
                    assert_eq!(euler_phi(d).unwrap() % e, 0);
                }
            }
        }
    }

    #[test]
    fn dimension_floors() {
        assert_eq!(min_dim_for_degree(2, 10_000), 14);
        assert_eq!(min_dim_for_degree(3, 10_000), 10);
        assert_eq!(min_dim_for_degree(5, 10_000), 7);
        assert_eq!(min_dim_for_degree(7, 10_000), 6);
        assert_eq!(min_dim_for_degree(19, 10_000), 5);
        assert_eq!(min_dim_for_degree(97, 10_000), 4);
        assert_eq!(min_dim_for_degree(101, 10_000), 3);
        // monotone non-increasing in p
        let mut last = u32::MAX;
        for p in primes_up_to(200) {
            let n = min_dim_for_degree(p, 10_000);
            assert!(n <= last);
            last = n;
        }
    }

    #[test]
    fn coprime_factorization_sets() {
        assert_eq!(coprime_factorizations(12), vec![vec![3, 4], vec![12]]);
        assert_eq!(coprime_factorizations(7), vec![vec![7]]);
        let f30 = coprime_factorizations(30);
        let expect: Vec<Vec<u64>> = vec![
            vec![2, 3, 5],
            vec![2, 15],
            vec![3, 10],
            vec![5, 6],
            vec![30],
        ];
        assert_eq!(f30, expect);
        for f in &f30 {
            assert_eq!(f.iter().product::<u64>(), 30);
            for i in 0..f.len() {
                for j in i + 1..f.len() {
                    assert_eq!(gcd(f[i], f[j]), 1);
                }
            }
        }
    }
}
