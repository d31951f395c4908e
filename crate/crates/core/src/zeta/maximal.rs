use num_bigint::BigInt;

use super::{LPolynomial, RootOfUnityMultiset, ZetaError};
use crate::arith;

/// Extension degrees over which a supersingular curve is maximal or
/// minimal.
///
/// With NWN orders `k_i = 2^{s_i} b_i` (`b_i` odd): if every `s_i` equals a
/// common `s >= 1`, the curve is maximal over `F_{q^r}` exactly when `r` is
/// an odd multiple of `2^{s-1} lcm(b_i)`; otherwise it is never maximal. It
/// is minimal exactly when `lcm(k_i) | r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaximalityProfile {
    /// `2^{s-1} lcm(b_i)` when maximality ever occurs.
    pub maximal_base: Option<u64>,
    /// `lcm(k_i)`.
    pub minimal_period: u64,
}

impl MaximalityProfile {
    pub fn is_maximal_for(&self, r: u64) -> bool {
        self.maximal_base
            .is_some_and(|base| r.is_multiple_of(base) && (r / base) % 2 == 1)
    }

    pub fn is_minimal_for(&self, r: u64) -> bool {
        r.is_multiple_of(self.minimal_period)
    }

    /// Smallest `r` with a maximal curve over `F_{q^r}`.
    pub fn first_maximal(&self) -> Option<u64> {
        self.maximal_base
    }
}

pub fn maximality_profile(nwn: &RootOfUnityMultiset) -> Result<MaximalityProfile, ZetaError> {
    if nwn.not_roots_of_unity {
        return Err(ZetaError::NotRootsOfUnity);
    }
    let orders = nwn.orders();
    let minimal_period = orders.iter().fold(1, |acc, &k| arith::lcm(acc, k));
    let split = |k: u64| (k.trailing_zeros(), k >> k.trailing_zeros());
    let s0 = orders.first().map(|&k| split(k).0);
    let maximal_base = match s0 {
        Some(s) if s >= 1 && orders.iter().all(|&k| split(k).0 == s) => {
            let b = orders.iter().fold(1, |acc, &k| arith::lcm(acc, split(k).1));
            Some((1u64 << (s - 1)) * b)
        }
        _ => None,
    };
    Ok(MaximalityProfile {
        maximal_base,
        minimal_period,
    })
}

/// `N = 1 + Q + 2g sqrt(Q)` for `Q = q^r`; false when `Q` is not a square
/// and `g > 0`.
pub fn is_maximal_count(count: &BigInt, q: &BigInt, g: u64) -> bool {
    extreme(count, q, g, 1)
}

/// `N = 1 + Q - 2g sqrt(Q)`.
pub fn is_minimal_count(count: &BigInt, q: &BigInt, g: u64) -> bool {
    extreme(count, q, g, -1)
}

fn extreme(count: &BigInt, q: &BigInt, g: u64, sign: i64) -> bool {
    let base = q + 1u32;
    if g == 0 {
        return count == &base;
    }
    let Some(root) = arith::exact_sqrt(q) else {
        return false;
    };
    let target = base + BigInt::from(sign) * BigInt::from(2 * g) * root;
    count == &target
}

/// Maximality over `F_{q^r}` read off the L-polynomial over `F_q`.
pub fn is_maximal_over(l: &LPolynomial, r: u64) -> bool {
    let n = l.point_counts(r).pop().expect("r >= 1");
    is_maximal_count(&n, &num_traits::pow(l.q(), r as usize), l.g)
}

pub fn is_minimal_over(l: &LPolynomial, r: u64) -> bool {
    let n = l.point_counts(r).pop().expect("r >= 1");
    is_minimal_count(&n, &num_traits::pow(l.q(), r as usize), l.g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::{identify_nwn, RootOfUnity};

    fn multiset(entries: &[(u64, u64)]) -> RootOfUnityMultiset {
        RootOfUnityMultiset {
            entries: entries
                .iter()
                .map(|&(order, exponent)| RootOfUnity {
                    order,
                    exponent,
                    multiplicity: 1,
                })
                .collect(),
            not_roots_of_unity: false,
        }
    }

    #[test]
    fn profiles() {
        let i = maximality_profile(&multiset(&[(4, 1), (4, 3)])).unwrap();
        assert_eq!(i.maximal_base, Some(2));
        assert!(i.is_maximal_for(2) && i.is_maximal_for(6) && !i.is_maximal_for(4));
        assert!(i.is_minimal_for(4) && !i.is_minimal_for(2));

        let mixed = maximality_profile(&multiset(&[(4, 1), (4, 3), (12, 1), (12, 5), (12, 7), (12, 11)])).unwrap();
        assert_eq!(mixed.maximal_base, Some(6));
        assert_eq!(mixed.minimal_period, 12);

        let z8 = maximality_profile(&multiset(&[(8, 1), (8, 3), (8, 5), (8, 7)])).unwrap();
        assert_eq!(z8.maximal_base, Some(4));

        let uneven = maximality_profile(&multiset(&[(4, 1), (4, 3), (8, 1), (8, 7)])).unwrap();
        assert_eq!(uneven.maximal_base, None);
        let odd = maximality_profile(&multiset(&[(3, 1), (3, 2)])).unwrap();
        assert_eq!(odd.maximal_base, None);
        assert_eq!(odd.minimal_period, 3);
    }

    #[test]
    fn flagged_input_rejected() {
        let nwn = RootOfUnityMultiset {
            entries: vec![],
            not_roots_of_unity: true,
        };
        assert_eq!(maximality_profile(&nwn), Err(ZetaError::NotRootsOfUnity));
    }

    #[test]
    fn direct_and_profile_agree() {
        let l = LPolynomial::from_i64(&[1, 0, 5], 5, 1).unwrap();
        assert!(is_maximal_over(&l, 2));
        assert!(is_minimal_over(&l, 4));
        assert!(!is_maximal_over(&l, 1) && !is_maximal_over(&l, 4));
        let profile = maximality_profile(&identify_nwn(&l, 3).unwrap()).unwrap();
        for r in 1..=12 {
            assert_eq!(profile.is_maximal_for(r), is_maximal_over(&l, r), "r={r}");
            assert_eq!(profile.is_minimal_for(r), is_minimal_over(&l, r), "r={r}");
        }
        assert!(is_minimal_count(&BigInt::from(576), &BigInt::from(625), 1));
    }
}
