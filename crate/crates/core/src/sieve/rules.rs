//! Translation patterns and the weighted commutator inequalities they
//! induce, plus the generation-theoretic sum checks.

use crate::rat::Rat;
use crate::zeta::Signature;
use crate::EngineError;

/// An exponent tuple for the translation construction: a permutation of
/// (m,m,1,...,1), (2,2,m,1,...,1) or (2,3,m,1,...,1) with m in {3,4,5}.
/// The induced weights are C_i = 2/(e_i (2 - A(e))) and the quotient order
/// 2/(2 - A(e)) is a positive integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationPattern {
    e: Vec<u64>,
    c: Vec<u64>,
    quotient_order: u64,
}

impl TranslationPattern {
    pub fn new(e: Vec<u64>) -> Result<Self, EngineError> {
        if e.len() < 2 || e.iter().any(|&x| x == 0) {
            return Err(EngineError::Domain("bad exponent tuple".into()));
        }
        let mut sorted: Vec<u64> = e.iter().copied().filter(|&x| x > 1).collect();
        sorted.sort_unstable();
        let shape_ok = match sorted.as_slice() {
            [] => true,                       // (1,...,1), m = 1
            [_] => true,                      // (m,1,...): cyclic
            [m1, m2] if m1 == m2 => true,     // (m,m,1,...): cyclic
            [2, 2] => true,
            [2, 2, _] => true,                // dihedral
            [2, 3, m] if (3..=5).contains(m) => true,
            _ => false,
        };
        if !shape_ok {
            return Err(EngineError::Domain(format!(
                "exponent tuple {e:?} is not a translation pattern"
            )));
        }
        // A(e) over all entries, counting the trivial ones as 0
        let a: Rat = e
            .iter()
            .map(|&x| Rat::new(x as i64 - 1, x as i64))
            .fold(Rat::zero(), |acc, t| acc + t);
        let gap = Rat::from_int(2) - a;
        if !gap.is_positive() {
            return Err(EngineError::Domain(format!(
                "exponent tuple {e:?} has aggregate >= 2"
            )));
        }
        let q = Rat::from_int(2) / gap.clone();
        if !q.is_integer() {
            return Err(EngineError::Domain(format!(
                "quotient order for {e:?} is not integral"
            )));
        }
        let quotient_order: u64 = q
            .numer()
            .try_into()
            .map_err(|_| EngineError::Domain("quotient order out of range".into()))?;
        let mut c = Vec::with_capacity(e.len());
        for &ei in &e {
            let ci = Rat::from_int(2) / (Rat::from_int(ei as i64) * gap.clone());
            if !ci.is_integer() {
                return Err(EngineError::Domain(format!(
                    "weight for {e:?} at exponent {ei} is not integral"
                )));
            }
            c.push(ci.numer().try_into().unwrap());
        }
        Ok(TranslationPattern {
            e,
            c,
            quotient_order,
        })
    }

    pub fn exponents(&self) -> &[u64] {
        &self.e
    }

    pub fn weights(&self) -> &[u64] {
        &self.c
    }

    pub fn quotient_order(&self) -> u64 {
        self.quotient_order
    }

    pub fn weight_sum(&self) -> u64 {
        self.c.iter().sum()
    }
}

/// Upper bound on v(x_i^{e_i}) used when deriving a lower bound on another
/// coordinate of the weighted inequality.
#[derive(Clone, Copy, Debug)]
pub enum VUpper {
    /// no information: v <= n
    Dim,
    /// a known cap
    At(u64),
}

/// The strongest new lower bound on v(x_j^{e_j}) implied by
///   (C_{i*} - 1) v(x_{i*}^{e_{i*}}) + sum_{i != i*} C_i v(x_i^{e_i}) >= n
/// (characteristic 2 instead uses sum C_i v >= 2n with no starred index),
/// given upper bounds on the other coordinates. Exponents that are
/// multiples of the generator order contribute zero automatically.
pub fn translation_bound(
    pattern: &TranslationPattern,
    sig: &Signature,
    n: u64,
    p: u64,
    j: usize,
    i_star: Option<usize>,
    uppers: &[VUpper],
) -> Result<u64, EngineError> {
    let e = pattern.exponents();
    let c = pattern.weights();
    let r = sig.r();
    if e.len() != r || uppers.len() != r || j >= r {
        return Err(EngineError::Domain("translation arity mismatch".into()));
    }
    let char2 = p == 2;
    if !char2 && i_star.is_none() {
        return Err(EngineError::Domain(
            "odd characteristic needs a starred index".into(),
        ));
    }
    let coeff_at = |i: usize| -> u64 {
        match i_star {
            Some(st) if !char2 && i == st => c[i] - 1,
            _ => c[i],
        }
    };
    let rhs_total = if char2 { 2 * n } else { n };
    let cj = coeff_at(j);
    if cj == 0 {
        return Err(EngineError::Domain(
            "target coordinate has zero weight".into(),
        ));
    }
    let mut known: u64 = 0;
    for i in 0..r {
        if i == j {
            continue;
        }
        let d = sig.orders()[i];
        let trivial = e[i] % d == 0;
        let cap = if trivial {
            0
        } else {
            match uppers[i] {
                VUpper::Dim => n,
                VUpper::At(v) => v.min(n),
            }
        };
        known = known.saturating_add(coeff_at(i).saturating_mul(cap));
    }
    if known >= rhs_total {
        return Ok(0);
    }
    let need = rhs_total - known;
    let bound = need.div_ceil(cj);
    if bound > n {
        return Err(EngineError::Domain(format!(
            "translation inequality unsatisfiable: v(x_{}^{}) would need {bound} > n = {n}",
            j + 1,
            e[j]
        )));
    }
    Ok(bound)
}

/// Generation-theoretic sum check: sum of the commutator dimensions reaches
/// twice the module dimension.
pub fn scott_check(v: &[u64], n: u64) -> bool {
    assert!(v.iter().all(|&x| x <= n));
    v.iter().sum::<u64>() >= 2 * n
}

/// Strong form used by the characteristic-3 analysis:
/// max(v_1, n - v_1) + v_2 + v_3 >= 2n. Externally justified.
pub fn scott_check_strong(v: &[u64; 3], n: u64) -> bool {
    assert!(v.iter().all(|&x| x <= n));
    v[0].max(n - v[0]) + v[1] + v[2] >= 2 * n
}

/// Lower bounds s_k on v(x_3^k), k = 2..5, for signatures (2,3,d).
pub fn bounds_23d(n: u64, p: u64) -> [(u64, u64); 4] {
    if p == 2 {
        [
            (2, (2 * n).div_ceil(3)),
            (3, n.div_ceil(2)),
            (4, n.div_ceil(3)),
            (5, n.div_ceil(6)),
        ]
    } else {
        [
            (2, n.div_ceil(2)),
            (3, n.div_ceil(3)),
            (4, n.div_ceil(5)),
            (5, n.div_ceil(11)),
        ]
    }
}

/// Lower bounds s_k on v(x_3^k), k = 2..3, for signatures (2,4,d).
pub fn bounds_24d(n: u64, p: u64) -> [(u64, u64); 2] {
    if p == 2 {
        [(2, n.div_ceil(2)), (3, n.div_ceil(4))]
    } else {
        [(2, n.div_ceil(3)), (3, n.div_ceil(7))]
    }
}

/// Scott-derived floors for r = 3: v(x_j) >= ceil(n / min_{i != j} d_i).
pub fn scott3_floor(sig: &Signature, n: u64, j: usize) -> u64 {
    assert_eq!(sig.r(), 3);
    let dmin = sig
        .orders()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, &d)| d)
        .min()
        .unwrap();
    n.div_ceil(dmin)
}

/// Unipotent cap: an element of order p^a moves at most n(1 - p^-a)
/// dimensions, every Jordan block keeping a fixed line.
pub fn unipotent_cap(n: u64, p: u64, order: u64) -> Option<u64> {
    let mut o = order;
    let mut pa = 1u64;
    while o % p == 0 {
        o /= p;
        pa *= p;
    }
    if o != 1 {
        return None;
    }
    Some(n - n.div_ceil(pa))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(v: &[u64]) -> Signature {
        Signature::new(v.to_vec()).unwrap()
    }

    #[test]
    fn canonical_weight_rows() {
        let rows: Vec<(Vec<u64>, Vec<u64>)> = vec![
            (vec![3, 3, 1, 1], vec![1, 1, 3, 3]),
            (vec![2, 2, 3, 1, 1], vec![3, 3, 2, 6, 6]),
            (vec![2, 3, 3, 1, 1], vec![6, 4, 4, 12, 12]),
            (vec![2, 3, 4, 1, 1], vec![12, 8, 6, 24, 24]),
            (vec![2, 3, 5, 1, 1], vec![30, 20, 12, 60, 60]),
        ];
        for (e, expect_c) in rows {
            let t = TranslationPattern::new(e).unwrap();
            assert_eq!(t.weights(), expect_c.as_slice());
            assert_eq!(t.weight_sum(), expect_c.iter().sum::<u64>());
        }
        // quotient orders: cyclic m, dihedral 2m, tetrahedral 12,
        // octahedral 24, icosahedral 60
        assert_eq!(TranslationPattern::new(vec![4, 4, 1]).unwrap().quotient_order(), 4);
        assert_eq!(TranslationPattern::new(vec![2, 2, 5]).unwrap().quotient_order(), 10);
        assert_eq!(TranslationPattern::new(vec![2, 3, 3]).unwrap().quotient_order(), 12);
        assert_eq!(TranslationPattern::new(vec![2, 3, 4]).unwrap().quotient_order(), 24);
        assert_eq!(TranslationPattern::new(vec![2, 3, 5]).unwrap().quotient_order(), 60);
        assert!(TranslationPattern::new(vec![2, 3, 6]).is_err());
        assert!(TranslationPattern::new(vec![3, 4, 1]).is_err());
    }

    #[test]
    fn scott3_from_translation() {
        // (d1, 1, d1) starred at 3 yields d1 v(x2) >= n
        let s = sig(&[2, 3, 7]);
        let pat = TranslationPattern::new(vec![2, 1, 2]).unwrap();
        let got = translation_bound(
            &pat,
            &s,
            14,
            3,
            1,
            Some(2),
            &[VUpper::Dim, VUpper::Dim, VUpper::Dim],
        )
        .unwrap();
        assert_eq!(got, 7); // v(x2) >= n/2
        assert_eq!(scott3_floor(&s, 14, 1), 7);
        assert_eq!(scott3_floor(&s, 14, 0), 5); // v(x1) >= n/3
    }

    #[test]
    fn pattern_23e_bound() {
        // (2,3,e) starred at 3: (C3 - 1) v(x3^e) >= n, C3 = 3,4,6,12
        let s = sig(&[2, 3, 8]);
        for (e, c3) in [(2u64, 3u64), (3, 4), (4, 6), (5, 12)] {
            let pat = TranslationPattern::new(vec![2, 3, e]).unwrap();
            assert_eq!(pat.weights()[2], c3);
            let got = translation_bound(
                &pat,
                &s,
                10,
                3,
                2,
                Some(2),
                &[VUpper::Dim, VUpper::Dim, VUpper::Dim],
            )
            .unwrap();
            assert_eq!(got, 10u64.div_ceil(c3 - 1));
        }
        // characteristic 2 uses the doubled form with full weights
        let s2 = sig(&[2, 3, 7]);
        let pat = TranslationPattern::new(vec![2, 3, 2]).unwrap();
        let got = translation_bound(
            &pat,
            &s2,
            14,
            2,
            2,
            None,
            &[VUpper::Dim, VUpper::Dim, VUpper::Dim],
        )
        .unwrap();
        assert_eq!(got, (2 * 14u64).div_ceil(3)); // 2n/C3
    }

    #[test]
    fn degenerate_inputs() {
        // all lower bounds zero, (m,m,1,...): v(x1^m) >= n when the others
        // vanish
        let s = sig(&[4, 4, 4, 4]);
        let pat = TranslationPattern::new(vec![4, 4, 1, 1]).unwrap();
        let got = translation_bound(
            &pat,
            &s,
            9,
            3,
            2,
            Some(1),
            &[VUpper::Dim, VUpper::Dim, VUpper::At(0), VUpper::At(0)],
        )
        .unwrap();
        // C = (1,1,4,4), starred at 2: v(x3) + 4*0... coefficient on x3 is 4
        assert_eq!(got, 3); // 4 v(x3) >= 9
    }

    #[test]
    fn contradiction_signalled() {
        let s = sig(&[2, 3, 7]);
        let pat = TranslationPattern::new(vec![7, 1, 7]).unwrap();
        // weights (1, 7, 1); starring 1 kills its term, x1^7 and x3^7 are
        // nontrivial powers capped at 0 by hand: 7 v(x2) >= n fails for
        // v <= n when n is large... here force an unsatisfiable cap
        let r = translation_bound(
            &pat,
            &s,
            20,
            3,
            1,
            Some(0),
            &[VUpper::At(0), VUpper::Dim, VUpper::At(0)],
        );
        assert_eq!(r.unwrap(), 3);
        // x2 capped low makes the inequality unsatisfiable for x1
        let s2 = sig(&[2, 2, 2]);
        let pat2 = TranslationPattern::new(vec![1, 1, 1]).unwrap();
        let r2 = translation_bound(
            &pat2,
            &s2,
            10,
            3,
            0,
            Some(1),
            &[VUpper::Dim, VUpper::At(0), VUpper::At(0)],
        );
        assert!(r2.is_err());
    }

    #[test]
    fn scott_checks() {
        assert!(scott_check(&[4, 8, 12], 12));
        assert!(scott_check(&[10, 10, 0], 10));
        assert!(!scott_check(&[1, 1, 1], 14));
        assert!(scott_check_strong(&[4, 8, 12], 12));
        assert!(!scott_check_strong(&[5, 7, 11], 12));
    }

    #[test]
    fn ceil_bounds() {
        assert_eq!(bounds_23d(10, 3), [(2, 5), (3, 4), (4, 2), (5, 1)]);
        assert_eq!(bounds_23d(14, 2), [(2, 10), (3, 7), (4, 5), (5, 3)]);
        assert_eq!(bounds_24d(16, 2), [(2, 8), (3, 4)]);
        assert_eq!(bounds_24d(7, 5), [(2, 3), (3, 1)]);
    }

    #[test]
    fn unipotent_caps() {
        assert_eq!(unipotent_cap(12, 3, 3), Some(8));
        assert_eq!(unipotent_cap(16, 2, 4), Some(12));
        assert_eq!(unipotent_cap(16, 2, 6), None);
    }
}
