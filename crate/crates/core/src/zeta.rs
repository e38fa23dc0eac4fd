//! The zeta family of upper bounds on kappa(x), the per-generator
//! contribution to the index sum, plus the aggregate quantities A and S
//! that drive every elimination.
//!
//! For x of order d over characteristic p,
//!   kappa(x) = (1/d)(1 + sum over nontrivial powers y of p^(-v(y)))
//! and the bounds sharpen in stages: zeta uses exponent 1 everywhere,
//! zeta_s uses the stated lower bounds s_i on v(x^i), the starred variants
//! replace each exponent by max(s_i, mu*(order, p)).

use std::collections::BTreeMap;

use crate::mustar::MuStarTable;
use crate::numth::{divisors, euler_phi, gcd, is_prime, mult_order};
use crate::rat::{Rat, Thresholds};
use crate::EngineError;

/// Sorted tuple of element orders (d_1 <= ... <= d_r), all >= 2, r >= 3.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    orders: Vec<u64>,
}

impl Signature {
    pub fn new(mut orders: Vec<u64>) -> Result<Self, EngineError> {
        if orders.len() < 3 {
            return Err(EngineError::Domain("signature needs r >= 3".into()));
        }
        if orders.iter().any(|&d| d < 2) {
            return Err(EngineError::Domain("signature entries must be >= 2".into()));
        }
        orders.sort_unstable();
        Ok(Signature { orders })
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn r(&self) -> usize {
        self.orders.len()
    }

    /// A = sum (d_i - 1)/d_i, exactly.
    pub fn a_of(&self) -> Rat {
        self.orders
            .iter()
            .map(|&d| Rat::new(d as i64 - 1, d as i64))
            .fold(Rat::zero(), |acc, t| acc + t)
    }

    /// S = r - 2 - eps * A - eps0, the elimination threshold.
    pub fn s_of(&self, th: &Thresholds) -> Rat {
        Rat::from_int(self.r() as i64 - 2) - &th.eps * &self.a_of() - th.eps0.clone()
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({})",
            self.orders
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

pub fn a_of(sig: &Signature) -> Rat {
    sig.a_of()
}

pub fn s_of(sig: &Signature, th: &Thresholds) -> Rat {
    sig.s_of(th)
}

// ---------------------------------------------------------------------------
// zeta variants
// ---------------------------------------------------------------------------

/// zeta(d, p) = (1/d)(1 + sum_{m|d, m>1} phi(m)/p) = 1/d + 1/p - 1/(dp).
pub fn zeta(d: u64, p: u64) -> Rat {
    assert!(d >= 2);
    let d = d as i64;
    let p = p as i64;
    Rat::new(1, d) + Rat::new(1, p) - Rat::new(1, d * p)
}

/// zeta_{s_1,...,s_l}(d, p): power i of x gets exponent s_i for i <= l,
/// every other nontrivial power gets exponent 1. phi of a non-integer is 0,
/// so entries of s at non-divisor positions contribute nothing.
pub fn zeta_s(d: u64, p: u64, s: &[u64]) -> Rat {
    assert!(d >= 2);
    assert!((s.len() as u64) < d, "need l < d");
    assert!(s.iter().all(|&si| si >= 1));
    let mut total = Rat::one();
    for i in 1..=s.len() as u64 {
        if d % i == 0 {
            let phi = euler_phi(d / i).unwrap();
            total += &(Rat::from_int(phi as i64) * Rat::int_pow(p, -(s[i as usize - 1] as i64)));
        }
    }
    let l = s.len() as u64;
    for m in divisors(d) {
        if m > 1 && m * l < d {
            total += &(Rat::from_int(euler_phi(m).unwrap() as i64) * Rat::int_pow(p, -1));
        }
    }
    total / Rat::from_int(d as i64)
}

/// zeta^t(d) = (1/d)(1 + sum_{m|d, m<d} phi(d/m) p^(-max(1, n - m t))).
pub fn zeta_t_power(d: u64, p: u64, n: u64, t: u64) -> Rat {
    assert!(d >= 2 && n >= 1 && t >= 1);
    let mut total = Rat::one();
    for m in divisors(d) {
        if m == d {
            continue;
        }
        let phi = euler_phi(d / m).unwrap();
        let e = if n > m * t { (n - m * t).max(1) } else { 1 };
        total += &(Rat::from_int(phi as i64) * Rat::int_pow(p, -(e as i64)));
    }
    total / Rat::from_int(d as i64)
}

/// zeta*(d, p): exponents mu*(m, p) on each nontrivial divisor order m.
pub fn zeta_star(d: u64, p: u64, mu: &MuStarTable) -> Rat {
    zeta_star_s(d, p, &[], mu)
}

/// zeta*_{s_1,...,s_l}(d, p): exponent max(s_i, mu*(d/i, p)) at power i.
pub fn zeta_star_s(d: u64, p: u64, s: &[u64], mu: &MuStarTable) -> Rat {
    assert!(d >= 2);
    assert_eq!(mu.prime(), p);
    let mut total = Rat::one();
    for m in divisors(d) {
        if m == 1 {
            continue;
        }
        let i = d / m;
        let mut e = mu.get(m);
        if i >= 1 && (i as usize) <= s.len() {
            e = e.max(s[i as usize - 1]);
        }
        let phi = euler_phi(m).unwrap();
        total += &(Rat::from_int(phi as i64) * Rat::int_pow(p, -(e as i64)));
    }
    total / Rat::from_int(d as i64)
}

/// Upper and lower pair of the characteristic/aggregate inequality:
/// A < 2.0002 p / (.99 p - 1) and p < A/(.99 A - 2.0002).
pub fn ap_bound_on_a(p: u64) -> Result<Rat, EngineError> {
    let denom = Rat::parse(".99").unwrap() * Rat::from_int(p as i64) - Rat::one();
    if !denom.is_positive() {
        return Err(EngineError::Domain(format!(
            "aggregate bound inapplicable at p={p}"
        )));
    }
    Ok(Rat::parse("2.0002").unwrap() * Rat::from_int(p as i64) / denom)
}

pub fn ap_bound_on_p(a: &Rat) -> Result<Rat, EngineError> {
    let denom = Rat::parse(".99").unwrap() * a - Rat::parse("2.0002").unwrap();
    if !denom.is_positive() {
        return Err(EngineError::Domain(
            "characteristic bound inapplicable: denominator <= 0".into(),
        ));
    }
    Ok(a / &denom)
}

/// Bound on the tuple length: r < 4.0004 p / (.98 p - 1).
pub fn r_bound(p: u64) -> Result<Rat, EngineError> {
    let denom = Rat::parse(".98").unwrap() * Rat::from_int(p as i64) - Rat::one();
    if !denom.is_positive() {
        return Err(EngineError::Domain(format!(
            "tuple-length bound inapplicable at p={p}"
        )));
    }
    Ok(Rat::parse("4.0004").unwrap() * Rat::from_int(p as i64) / denom)
}

// ---------------------------------------------------------------------------
// Certified global tail bound for zeta*
// ---------------------------------------------------------------------------

/// Certified coefficients (c, e) with zeta*(d, p) < c/d + e for all d >= 2.
///
/// Splitting divisor orders m by mu*(m, p) <= k versus > k gives
///   zeta*(d) <= (1/d)(1 + sum_{mu* <= k} phi(m) p^(-mu*(m))) + p^(-(k+1)),
/// where the first sum ranges over the finite set {m : mu*(m, p) <= k},
/// enumerated exactly. The splitting depth adapts to the prime so the
/// enumeration window p^k * pk stays small.
pub fn zeta_star_global_bound(p: u64, mu: &MuStarTable) -> (Rat, Rat) {
    // mu*(m) >= log_p of the coprime part and p^(a-1) >= a for the p-part,
    // so every m with mu*(m) <= k satisfies m <= p^k * p*k.
    let mut k = 1u64;
    for cand in (2..=4u64).rev() {
        if p.saturating_pow(cand as u32).saturating_mul(p * cand) <= 60_000 {
            k = cand;
            break;
        }
    }
    if k == 1 {
        // the orders with a one-dimensional commutator are p itself and the
        // divisors of p - 1, whose totients sum to p - 2
        let c = Rat::one() + Rat::new(2 * p as i64 - 3, p as i64);
        return (c, Rat::int_pow(p, -2));
    }
    let m_cap = p.pow(k as u32) * p * k;
    let mut c = Rat::one();
    for m in 2..=m_cap {
        let mu_m = mu.get(m);
        if mu_m <= k {
            c += &(Rat::from_int(euler_phi(m).unwrap() as i64) * Rat::int_pow(p, -(mu_m as i64)));
        }
    }
    (c, Rat::int_pow(p, -(k as i64 + 1)))
}

/// True if zeta*(d, p) < threshold for every d >= d_min. Checked exactly on
/// d_min..=sweep_to and closed beyond by the certified global bound.
pub fn zeta_star_tail_below(
    p: u64,
    d_min: u64,
    threshold: &Rat,
    mu: &MuStarTable,
) -> bool {
    let sweep_to = 1000u64.max(d_min);
    for d in d_min..=sweep_to {
        if &zeta_star(d, p, mu) >= threshold {
            return false;
        }
    }
    let (c, e) = zeta_star_global_bound(p, mu);
    &(c / Rat::from_int(sweep_to as i64 + 1) + e) < threshold
}

// ---------------------------------------------------------------------------
// Power bounds and the combined kappa evaluator
// ---------------------------------------------------------------------------

/// Per-element record: order d, characteristic p, lower bounds s_k on
/// v(x^k) keyed by proper divisors of d, and structural flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerBounds {
    pub order: u64,
    pub p: u64,
    /// divisor g of d (g < d) -> lower bound on v(x^g); after
    /// normalization the map is keyed by every proper divisor.
    pub lower: BTreeMap<u64, u64>,
    pub single_eigenspace: bool,
    /// extra divisibility constraint on v(x) itself
    pub v_divisibility: Option<u64>,
}

impl PowerBounds {
    pub fn new(order: u64, p: u64) -> Self {
        assert!(order >= 2);
        assert!(is_prime(p));
        PowerBounds {
            order,
            p,
            lower: BTreeMap::new(),
            single_eigenspace: false,
            v_divisibility: None,
        }
    }

    /// Record v(x^k) >= s; the key is reduced to gcd(k, d).
    pub fn set_lower(&mut self, k: u64, s: u64) {
        let g = gcd(k, self.order);
        if g == self.order {
            return; // trivial power
        }
        let e = self.lower.entry(g).or_insert(0);
        *e = (*e).max(s);
    }

    /// Automatic divisibility of v(y) for y of prime order m: when m differs
    /// from p and does not divide p - 1, the nontrivial eigenvalues of y live
    /// in a degree-ord_m(p) extension, so v(y) is a multiple of that order.
    fn auto_divisibility(&self, m: u64) -> Option<u64> {
        if !is_prime(m) || m == self.p || (self.p - 1) % m == 0 {
            return None;
        }
        Some(mult_order(self.p, m).unwrap())
    }

    /// Enforce the structural floor mu*, propagate bounds down the power
    /// lattice and round up to permitted residues.
    pub fn normalize(&self, mu: &MuStarTable) -> PowerBounds {
        let d = self.order;
        let mut s: BTreeMap<u64, u64> = BTreeMap::new();
        for g in divisors(d) {
            if g == d {
                continue;
            }
            let m = d / g; // order of x^g
            let mut v = self.lower.get(&g).copied().unwrap_or(0);
            v = v.max(mu.get(m));
            s.insert(g, v);
        }
        // v(x^{gk}) <= v(x^g): propagate bounds from higher powers down
        let keys: Vec<u64> = s.keys().copied().collect();
        for &g in keys.iter().rev() {
            for &g2 in &keys {
                if g2 != g && g2 % g == 0 {
                    let hi = s[&g2];
                    let e = s.get_mut(&g).unwrap();
                    *e = (*e).max(hi);
                }
            }
        }
        // divisibility round-up
        for (&g, v) in s.iter_mut() {
            let m = d / g;
            let mut modulus = self.auto_divisibility(m).unwrap_or(1);
            if g == 1 {
                if let Some(dv) = self.v_divisibility {
                    modulus = modulus / gcd(modulus, dv) * dv;
                }
            }
            if modulus > 1 && *v % modulus != 0 {
                *v = (*v / modulus + 1) * modulus;
            }
        }
        PowerBounds {
            order: d,
            p: self.p,
            lower: s,
            single_eigenspace: self.single_eigenspace,
            v_divisibility: self.v_divisibility,
        }
    }

    /// Sharpest applicable bound on kappa(x): exponent at divisor order m is
    /// max of the normalized lower bound at power d/m and mu*(m, p).
    pub fn kappa_upper(&self, mu: &MuStarTable) -> Rat {
        let d = self.order;
        let norm = self.normalize(mu);
        let mut total = Rat::one();
        for m in divisors(d) {
            if m == 1 {
                continue;
            }
            let g = d / m;
            let e = norm.lower.get(&g).copied().unwrap_or_else(|| mu.get(m));
            let phi = euler_phi(m).unwrap();
            total += &(Rat::from_int(phi as i64) * Rat::int_pow(self.p, -(e as i64)));
        }
        total / Rat::from_int(d as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu(p: u64) -> MuStarTable {
        MuStarTable::new(p)
    }

    #[test]
    fn zeta_closed_form() {
        // zeta(2) = (p+1)/2p
        for p in [2u64, 3, 5, 11, 23] {
            assert_eq!(zeta(2, p), Rat::new(p as i64 + 1, 2 * p as i64));
        }
        assert_eq!(zeta(2, 2), Rat::new(3, 4));
        let z = zeta(8, 23);
        assert_eq!(z, Rat::new(1, 8) + Rat::new(1, 23) - Rat::new(1, 184));
    }

    #[test]
    fn zeta_s_examples() {
        // zeta_2(3, 7) = (1/3)(1 + 2/49)
        assert_eq!(
            zeta_s(3, 7, &[2]),
            Rat::new(1, 3) * (Rat::one() + Rat::new(2, 49))
        );
        // s_1 = 1 reproduces the plain bound
        for d in 2..=30u64 {
            assert_eq!(zeta_s(d, 5, &[1]), zeta(d, 5));
        }
        // naive term-by-term oracle for zeta_{3,3}(8, 23)
        let expect = Rat::new(1, 8)
            * (Rat::one()
                + Rat::from_int(4) * Rat::int_pow(23, -3)
                + Rat::from_int(2) * Rat::int_pow(23, -3)
                + Rat::from_int(1) * Rat::int_pow(23, -1));
        assert_eq!(zeta_s(8, 23, &[3, 3]), expect);
    }

    #[test]
    fn zeta_t_matches_zeta_s_identity() {
        for (d, p, n, t) in [(3u64, 5u64, 7u64, 3u64), (8, 2, 14, 2), (12, 3, 10, 1), (6, 7, 6, 2)]
        {
            let direct = zeta_t_power(d, p, n, t);
            let l = ((n - 1) / t).min(d - 1);
            let s: Vec<u64> = (1..=l).map(|i| if n > i * t { n - i * t } else { 1 }).collect();
            assert_eq!(direct, zeta_s(d, p, &s), "d={d} p={p} n={n} t={t}");
        }
        // zeta^3(3, 5) at n = 7 is (1/3)(1 + 2/625)
        assert_eq!(
            zeta_t_power(3, 5, 7, 3),
            Rat::new(1, 3) * (Rat::one() + Rat::new(2, 625))
        );
        // t >= n clamps every exponent to 1
        assert_eq!(zeta_t_power(10, 3, 4, 9), zeta(10, 3));
    }

    #[test]
    fn zeta_star_values() {
        let m2 = mu(2);
        assert_eq!(zeta_star(2, 2, &m2), Rat::new(3, 4));
        // (1/7)(1 + 6/8) with mu*(7, 2) = 3
        assert_eq!(zeta_star(7, 2, &m2), Rat::new(1, 4));
        // d > 2 never exceeds the involution value
        for d in 3..=200u64 {
            assert!(zeta_star(d, 2, &m2) <= Rat::new(1, 2));
        }
    }

    #[test]
    fn zeta_monotone_in_d_and_p() {
        for p in [2u64, 3, 11, 97] {
            let mut last = zeta(2, p);
            for d in 3..=1000 {
                let z = zeta(d, p);
                assert!(z < last);
                last = z;
            }
        }
        for d in [2u64, 5, 12, 100] {
            let mut last = zeta(d, 2);
            for p in [3u64, 5, 7, 11, 13, 97] {
                let z = zeta(d, p);
                assert!(z < last);
                last = z;
            }
        }
    }

    #[test]
    fn zeta_s_dominated_by_zeta() {
        let m11 = mu(11);
        for d in 2..=60u64 {
            for s in [vec![2], vec![3, 2], vec![5, 4, 3]] {
                if (s.len() as u64) < d {
                    assert!(zeta_s(d, 11, &s) <= zeta(d, 11));
                    assert!(zeta_star_s(d, 11, &s, &m11) <= zeta_s(d, 11, &s));
                }
            }
        }
    }

    #[test]
    fn corollary_bound_on_d() {
        // for p > 2: zeta(d) >= k > 1/25 implies d <= 3/(k - .04)
        let k = Rat::parse(".135").unwrap();
        let cutoff = (Rat::from_int(3) / (k.clone() - Rat::new(1, 25))).floor_int();
        for d in 2..=2000u64 {
            if zeta(d, 11) >= k {
                assert!(Rat::from_int(d as i64) <= Rat::from_big(cutoff.clone()));
            }
        }
    }

    #[test]
    fn aggregate_examples() {
        let sig = Signature::new(vec![2, 3, 7]).unwrap();
        assert_eq!(sig.a_of(), Rat::new(85, 42));
        let th = Thresholds::default();
        assert!(sig.s_of(&th) > Rat::new(9795, 10_000));
        let sig238 = Signature::new(vec![2, 3, 8]).unwrap();
        assert_eq!(
            sig238.a_of(),
            Rat::from_int(2) + Rat::new(1, 6) - Rat::new(1, 8)
        );
        let sig222 = Signature::new(vec![2, 2, 2]).unwrap();
        assert_eq!(sig222.a_of(), Rat::new(3, 2));
        assert_eq!(
            sig222.s_of(&th),
            Rat::one() - Rat::new(3, 200) - Rat::new(2, 10_000)
        );
    }

    #[test]
    fn ap_bounds_examples() {
        let a23 = ap_bound_on_a(23).unwrap();
        assert!(a23 < Rat::parse("2.114").unwrap());
        let a11 = ap_bound_on_a(11).unwrap();
        assert_eq!(a11, Rat::parse("22.0022").unwrap() / Rat::parse("9.89").unwrap());
        let p_for_a = ap_bound_on_p(&Rat::new(13, 6)).unwrap();
        assert!(p_for_a < Rat::from_int(17));
        assert!(ap_bound_on_p(&Rat::new(2, 1)).is_err());
    }

    #[test]
    fn kappa_upper_examples() {
        let m3 = mu(3);
        let pb = PowerBounds::new(2, 3);
        assert_eq!(pb.kappa_upper(&m3), Rat::new(2, 3)); // zeta(2, 3)

        let m2 = mu(2);
        let mut pb7 = PowerBounds::new(7, 2);
        pb7.set_lower(1, 3);
        assert_eq!(pb7.kappa_upper(&m2), Rat::new(1, 4));

        // order 3 at p = 11 with v even: stated bound 3 rounds up to 4
        let m11 = mu(11);
        let mut pb3 = PowerBounds::new(3, 11);
        pb3.set_lower(1, 3);
        let norm = pb3.normalize(&m11);
        assert_eq!(norm.lower[&1], 4);
        assert_eq!(pb3.kappa_upper(&m11), zeta_s(3, 11, &[4]));
    }

    #[test]
    fn kappa_upper_monotone_in_bounds() {
        let m5 = mu(5);
        let mut pb = PowerBounds::new(12, 5);
        let mut last = pb.kappa_upper(&m5);
        for s in 1..=8 {
            pb.set_lower(1, s);
            pb.set_lower(2, s / 2 + 1);
            let k = pb.kappa_upper(&m5);
            assert!(k <= last);
            last = k;
        }
    }

    #[test]
    fn global_tail_bound_is_sound_on_range() {
        for p in [2u64, 3, 5, 11] {
            let m = mu(p);
            let (c, e) = zeta_star_global_bound(p, &m);
            for d in 2..=500 {
                assert!(
                    zeta_star(d, p, &m) < &(c.clone() / Rat::from_int(d as i64)) + &e,
                    "certified bound violated at d={d}, p={p}"
                );
            }
        }
    }
}
