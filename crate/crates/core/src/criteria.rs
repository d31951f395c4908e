//! Congruence criteria for supersingularity of Hurwitz and Fermat curves.

use serde::Serialize;
use thiserror::Error;

use crate::arith::{self, gcd};
use crate::curves::{aoki_triple, triple_equivalent, CurveError, HurwitzCurve, Triple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CriteriaError {
    #[error("gcd({p}, {m}) != 1")]
    NotCoprime { p: u64, m: u64 },
    #[error("modulus must be at least 2 (got {0})")]
    SmallModulus(u64),
    #[error("the congruence criterion only covers gcd(n, l) = 1; gcd({n}, {l}) = {d}, classify by counting instead")]
    CriterionDoesNotApply { n: u64, l: u64, d: u64 },
    #[error("bad reduction: p = {p} divides m = {m}")]
    BadReduction { p: u64, m: u64 },
    #[error("minimality transfer needs l = 1, or gcd(n, l) = 1 with m prime (got n={n}, l={l}, m={m})")]
    TransferHypotheses { n: u64, l: u64, m: u64 },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

fn check_unit(p: u64, m: u64) -> Result<(), CriteriaError> {
    if m < 2 {
        return Err(CriteriaError::SmallModulus(m));
    }
    if gcd(p, m) != 1 {
        return Err(CriteriaError::NotCoprime { p, m });
    }
    Ok(())
}

/// Least `e >= 1` with `p^e ≡ 1 (mod m)`.
pub fn mult_order(p: u64, m: u64) -> Result<u64, CriteriaError> {
    check_unit(p, m)?;
    let base = p % m;
    let mut x = base;
    let mut e = 1;
    while x != 1 {
        x = ((x as u128 * base as u128) % m as u128) as u64;
        e += 1;
    }
    Ok(e)
}

/// Least `i >= 1` with `p^i ≡ -1 (mod m)`, if any. For `m > 2` it is half
/// the multiplicative order; modulo 2 every odd `p` is `-1`.
pub fn neg_one_exponent(p: u64, m: u64) -> Result<Option<u64>, CriteriaError> {
    let order = mult_order(p, m)?;
    if m == 2 {
        return Ok(Some(1));
    }
    let base = p % m;
    let mut x = 1u64;
    for i in 1..=order {
        x = ((x as u128 * base as u128) % m as u128) as u64;
        if x == m - 1 {
            assert!(order % 2 == 0 && i == order / 2, "p^i = -1 forces i = ord/2");
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Outcome of the congruence criteria.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SsVerdict {
    pub supersingular: bool,
    /// Minimal `i` with `p^i ≡ -1 (mod m)`.
    pub witness_i: Option<u64>,
    /// `2i`: the curve is maximal over `F_{p^{2i}}`.
    pub maximal_field_exponent: Option<u64>,
    /// `(i, d, j)`: `d = gcd(p^i - 1, m)` and `p^j ≡ -1 (mod m/d)`.
    pub condition2_witness: Option<(u64, u64, u64)>,
    /// The Fermat curve `F_m` covering `H_{n,l}` is supersingular as well.
    pub fermat_supersingular: bool,
}

/// Supersingularity of `H_{n,l}` over `F_p` for coprime `(n, l)`: holds iff
/// `p^i ≡ -1 (mod m)` for some `i`.
pub fn hurwitz_supersingular(n: u64, l: u64, p: u64) -> Result<SsVerdict, CriteriaError> {
    let curve = HurwitzCurve::new(n, l)?;
    if curve.d != 1 {
        return Err(CriteriaError::CriterionDoesNotApply { n, l, d: curve.d });
    }
    if curve.m % p == 0 {
        return Err(CriteriaError::BadReduction { p, m: curve.m });
    }
    let witness = neg_one_exponent(p, curve.m)?;
    Ok(SsVerdict {
        supersingular: witness.is_some(),
        witness_i: witness,
        maximal_field_exponent: witness.map(|i| 2 * i),
        condition2_witness: None,
        fermat_supersingular: witness.is_some(),
    })
}

/// Which of the two conditions established supersingularity of `D_α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AokiCondition {
    /// `p^i ≡ -1 (mod m)`.
    NegOnePower { i: u64 },
    /// `α ≈ (1, -p^i, p^i - 1)`, `d = gcd(p^i - 1, m) > 1`, `p^j ≡ -1 (mod m/d)`.
    Twisted { i: u64, d: u64, j: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AokiVerdict {
    pub supersingular: bool,
    pub condition: Option<AokiCondition>,
}

/// Witness `(i, d, j)` for the second condition, scanning `i` over one full
/// period of `p` modulo `m`.
pub fn aoki_condition2(alpha: &Triple, p: u64) -> Result<Option<(u64, u64, u64)>, CriteriaError> {
    let m = alpha.m;
    let order = mult_order(p, m)?;
    let mut pi = 1u64;
    for i in 1..=order {
        pi = ((pi as u128 * (p % m) as u128) % m as u128) as u64;
        // gcd(p^i - 1, m) only depends on p^i mod m
        let d = gcd((pi + m - 1) % m, m);
        if d <= 1 {
            continue;
        }
        let target = Triple::new(1, -(pi as i64), pi as i64 - 1, m)?;
        if !triple_equivalent(alpha, &target)? {
            continue;
        }
        let reduced = m / d;
        let j = if reduced == 1 {
            // every unit is -1 modulo 1
            Some(1)
        } else {
            neg_one_exponent(p, reduced)?
        };
        if let Some(j) = j {
            return Ok(Some((i, d, j)));
        }
    }
    Ok(None)
}

pub fn aoki_supersingular(alpha: &Triple, p: u64) -> Result<AokiVerdict, CriteriaError> {
    if let Some(i) = neg_one_exponent(p, alpha.m)? {
        return Ok(AokiVerdict {
            supersingular: true,
            condition: Some(AokiCondition::NegOnePower { i }),
        });
    }
    Ok(match aoki_condition2(alpha, p)? {
        Some((i, d, j)) => AokiVerdict {
            supersingular: true,
            condition: Some(AokiCondition::Twisted { i, d, j }),
        },
        None => AokiVerdict {
            supersingular: false,
            condition: None,
        },
    })
}

/// True when the second condition fails for the triple attached to
/// `H_{n,l}`, as it should for every coprime pair.
pub fn condition2_never_for_coprime(n: u64, l: u64, p: u64) -> Result<bool, CriteriaError> {
    let (a, b) = if n > l { (n, l) } else { (l, n) };
    let alpha = aoki_triple(a, b)?;
    if alpha.m % p == 0 {
        return Err(CriteriaError::BadReduction { p, m: alpha.m });
    }
    Ok(aoki_condition2(&alpha, p)?.is_none())
}

/// `4i` when both `H_{n,l}` and `F_m` are minimal over `F_{p^{4i}}`.
pub fn minimality_transfer(n: u64, l: u64, p: u64) -> Result<Option<u64>, CriteriaError> {
    let curve = HurwitzCurve::new(n, l)?;
    let applies = l == 1 || (curve.d == 1 && arith::is_prime(curve.m));
    if !applies {
        return Err(CriteriaError::TransferHypotheses { n, l, m: curve.m });
    }
    if curve.m % p == 0 {
        return Err(CriteriaError::BadReduction { p, m: curve.m });
    }
    Ok(neg_one_exponent(p, curve.m)?.map(|i| 4 * i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(mult_order(5, 9).unwrap(), 6);
        assert_eq!(mult_order(7, 3).unwrap(), 1);
        assert_eq!(mult_order(2, 7).unwrap(), 3);
        assert!(matches!(mult_order(3, 9), Err(CriteriaError::NotCoprime { .. })));
        assert_eq!(neg_one_exponent(5, 3).unwrap(), Some(1));
        assert_eq!(neg_one_exponent(5, 9).unwrap(), Some(3));
        assert_eq!(neg_one_exponent(7, 3).unwrap(), None);
    }

    #[test]
    fn hurwitz_examples() {
        let v = hurwitz_supersingular(3, 1, 13).unwrap();
        assert!(v.supersingular && v.fermat_supersingular);
        assert_eq!((v.witness_i, v.maximal_field_exponent), (Some(1), Some(2)));
        assert!(!hurwitz_supersingular(2, 1, 7).unwrap().supersingular);
        let v = hurwitz_supersingular(4, 1, 5).unwrap();
        assert_eq!((v.witness_i, v.maximal_field_exponent), (Some(2), Some(4)));
        assert!(matches!(
            hurwitz_supersingular(4, 2, 5),
            Err(CriteriaError::CriterionDoesNotApply { d: 2, .. })
        ));
        assert!(matches!(hurwitz_supersingular(2, 1, 3), Err(CriteriaError::BadReduction { .. })));
    }

    #[test]
    fn aoki_examples() {
        for a in 1..9 {
            let alpha = Triple::new(a, 1, -(a + 1), 9).unwrap();
            let v = aoki_supersingular(&alpha, 2).unwrap();
            assert_eq!(v.condition, Some(AokiCondition::NegOnePower { i: 3 }));
        }
        let alpha = Triple::new(1, 11, 3, 15).unwrap();
        let v = aoki_supersingular(&alpha, 2).unwrap();
        assert_eq!(v.condition, Some(AokiCondition::Twisted { i: 2, d: 3, j: 2 }));
        let alpha = Triple::new(1, 1, 1, 3).unwrap();
        assert!(!aoki_supersingular(&alpha, 7).unwrap().supersingular);
    }

    #[test]
    fn condition2_examples() {
        assert!(condition2_never_for_coprime(3, 2, 13).unwrap());
        assert!(condition2_never_for_coprime(3, 1, 2).unwrap());
        assert!(condition2_never_for_coprime(4, 3, 5).unwrap());
    }

    #[test]
    fn transfer_examples() {
        assert_eq!(minimality_transfer(2, 1, 5).unwrap(), Some(4));
        assert_eq!(minimality_transfer(3, 1, 3).unwrap(), Some(12));
        assert_eq!(minimality_transfer(2, 1, 7).unwrap(), None);
        assert!(matches!(
            minimality_transfer(5, 4, 2),
            Err(CriteriaError::TransferHypotheses { .. })
        ));
    }
}
