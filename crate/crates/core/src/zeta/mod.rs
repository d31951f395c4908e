//! L-polynomials from point counts, Newton polygons, normalized Weil
//! numbers and maximality.
//!
//! With `Z(T) = exp(Σ N_s T^s / s) = L(T) / ((1 - T)(1 - qT))`, the
//! coefficient of `T^k` in `Z` is a sum over partitions of `k`, and
//! `C_k = z_k - Σ_{i<k} C_i (1 + q + ... + q^{k-i})`.

mod intpoly;
mod maximal;
mod newton;
mod nwn;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;

pub use intpoly::{cyclotomic, IntPoly};
pub use maximal::{
    is_maximal_count, is_maximal_over, is_minimal_count, is_minimal_over, maximality_profile,
    MaximalityProfile,
};
pub use newton::{is_supersingular, newton_polygon, NewtonPolygon};
pub use nwn::{identify_nwn, identify_nwn_with_bound, numeric_power_sum, RootOfUnity, RootOfUnityMultiset};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZetaError {
    #[error("need N_1..N_{needed}, only {have} available")]
    MissingCounts { needed: u64, have: u64 },
    #[error("C_{k} = {value} is not an integer; the point counts are inconsistent")]
    NonIntegral { k: u64, value: String },
    #[error("functional equation fails at C_{k}: counted {counted}, predicted {predicted}")]
    FunctionalEquation {
        k: u64,
        counted: String,
        predicted: String,
    },
    #[error("no root-of-unity factorisation with orders up to {bound}")]
    OrderBoundExhausted { bound: u64 },
    #[error("no sign assignment of the square roots reproduces the L-polynomial")]
    SignAssignment,
    #[error("normalized Weil numbers are not roots of unity")]
    NotRootsOfUnity,
}

/// `L(T) = C_0 + C_1 T + ... + C_{2g} T^{2g}` for a curve over `F_{p^r}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    pub coeffs: Vec<BigInt>,
    pub p: u64,
    pub r: u32,
    pub g: u64,
}

impl LPolynomial {
    /// Checks `C_0 = 1` and the functional equation.
    pub fn new(coeffs: Vec<BigInt>, p: u64, r: u32, g: u64) -> Result<Self, ZetaError> {
        let l = LPolynomial { coeffs, p, r, g };
        if l.coeffs.len() as u64 != 2 * g + 1 || !l.coeffs[0].is_one() {
            return Err(ZetaError::FunctionalEquation {
                k: 0,
                counted: format!("{:?}", l.coeffs.first()),
                predicted: "1".into(),
            });
        }
        for k in 0..=g {
            let predicted = l.mirror(k);
            let counted = &l.coeffs[(2 * g - k) as usize];
            if counted != &predicted {
                return Err(ZetaError::FunctionalEquation {
                    k: 2 * g - k,
                    counted: counted.to_string(),
                    predicted: predicted.to_string(),
                });
            }
        }
        Ok(l)
    }

    /// Builds from `i64` coefficients; convenient for literals.
    pub fn from_i64(coeffs: &[i64], p: u64, r: u32) -> Result<Self, ZetaError> {
        let g = (coeffs.len().saturating_sub(1) / 2) as u64;
        LPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), p, r, g)
    }

    pub fn q(&self) -> BigInt {
        arith::big_pow(self.p, self.r)
    }

    /// `q^{g-k} C_k`, the value the functional equation predicts for
    /// `C_{2g-k}`.
    fn mirror(&self, k: u64) -> BigInt {
        num_traits::pow(self.q(), (self.g - k) as usize) * &self.coeffs[k as usize]
    }

    /// Power sums `P_s = Σ α_i^s` of the reciprocal roots for `s = 1..=upto`.
    pub fn power_sums(&self, upto: u64) -> Vec<BigInt> {
        // e_j = (-1)^j C_j; P_s = Σ_{j<s} (-1)^{j-1} e_j P_{s-j} + (-1)^{s-1} s e_s
        let e = |j: u64| -> BigInt {
            match self.coeffs.get(j as usize) {
                Some(c) if j.is_multiple_of(2) => c.clone(),
                Some(c) => -c,
                None => BigInt::zero(),
            }
        };
        let mut sums: Vec<BigInt> = Vec::with_capacity(upto as usize);
        for s in 1..=upto {
            let mut acc = BigInt::zero();
            for j in 1..s {
                let term = e(j) * &sums[(s - j - 1) as usize];
                if j % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            let last = e(s) * BigInt::from(s);
            if s % 2 == 1 {
                acc += last;
            } else {
                acc -= last;
            }
            sums.push(acc);
        }
        sums
    }

    /// `N_s = q^s + 1 - P_s` for `s = 1..=upto`.
    pub fn point_counts(&self, upto: u64) -> Vec<BigInt> {
        let q = self.q();
        self.power_sums(upto)
            .into_iter()
            .enumerate()
            .map(|(i, ps)| num_traits::pow(q.clone(), i + 1) + 1 - ps)
            .collect()
    }

    pub fn degree(&self) -> u64 {
        2 * self.g
    }
}

impl fmt::Display for LPolynomial {
    /// Highest degree first, zero terms omitted: `2197T^6 + 507T^4 + 39T^2 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}")?;
                    }
                    if i == 1 {
                        write!(f, "T")?;
                    } else {
                        write!(f, "T^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A partition of `k` as parts in nonincreasing order.
pub type Partition = Vec<u64>;

/// All partitions of `k`, in reverse lexicographic order (`(k)` first).
pub fn partitions(k: u64) -> Vec<Partition> {
    fn rec(rest: u64, max: u64, cur: &mut Partition, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out
}

/// `z_k = Σ_γ Π_j (N_j / j)^{m_j} / m_j!` where `m_j` counts the parts of
/// `γ` equal to `j`.
fn zeta_coefficient(k: u64, counts: &[u64]) -> BigRational {
    let mut total = BigRational::zero();
    for gamma in partitions(k) {
        let mut term = BigRational::one();
        let mut i = 0;
        while i < gamma.len() {
            let part = gamma[i];
            let mut mult = 0u32;
            while i < gamma.len() && gamma[i] == part {
                mult += 1;
                i += 1;
            }
            let base = BigRational::new(BigInt::from(counts[(part - 1) as usize]), BigInt::from(part));
            term *= num_traits::pow(base, mult as usize);
            term /= BigRational::from_integer(arith::factorial(mult));
        }
        total += term;
    }
    total
}

/// `C_k` for `k = 0..=upto` from `N_1..N_upto`, each asserted integral.
fn coefficients_from_counts(counts: &[u64], q: &BigInt, upto: u64) -> Result<Vec<BigInt>, ZetaError> {
    let mut c: Vec<BigInt> = vec![BigInt::one()];
    for k in 1..=upto {
        let mut value = zeta_coefficient(k, counts);
        for (i, ci) in c.iter().enumerate() {
            // Σ_{μ=0}^{k-i} q^μ
            let geometric: BigInt = (0..=(k - i as u64)).map(|mu| num_traits::pow(q.clone(), mu as usize)).sum();
            value -= BigRational::from_integer(ci * geometric);
        }
        if !value.is_integer() {
            return Err(ZetaError::NonIntegral {
                k,
                value: value.to_string(),
            });
        }
        c.push(value.to_integer());
    }
    Ok(c)
}

/// `C_0..C_upto` from `N_1..N_upto` alone, without the functional
/// equation.
pub fn leading_coefficients(counts: &[u64], p: u64, r: u32, upto: u64) -> Result<Vec<BigInt>, ZetaError> {
    if (counts.len() as u64) < upto {
        return Err(ZetaError::MissingCounts {
            needed: upto,
            have: counts.len() as u64,
        });
    }
    coefficients_from_counts(counts, &arith::big_pow(p, r), upto)
}

/// L-polynomial of a genus-`g` curve over `F_{p^r}` from `N_1..N_g`
/// (counts over `F_{p^{rs}}`); the upper half comes from the functional
/// equation. When `N_{g+1}` is also supplied, `C_{g+1}` is recomputed from
/// the counts and compared.
pub fn l_polynomial_from_counts(counts: &[u64], g: u64, p: u64, r: u32) -> Result<LPolynomial, ZetaError> {
    if (counts.len() as u64) < g {
        return Err(ZetaError::MissingCounts {
            needed: g,
            have: counts.len() as u64,
        });
    }
    let q = arith::big_pow(p, r);
    let verify = counts.len() as u64 > g && g > 0;
    let upto = if verify { g + 1 } else { g };
    let lower = coefficients_from_counts(counts, &q, upto)?;
    let mut coeffs = lower[..=g as usize].to_vec();
    for k in (0..g).rev() {
        coeffs.push(num_traits::pow(q.clone(), (g - k) as usize) * &lower[k as usize]);
    }
    if verify {
        let counted = &lower[(g + 1) as usize];
        let predicted = &coeffs[(g + 1) as usize];
        if counted != predicted {
            return Err(ZetaError::FunctionalEquation {
                k: g + 1,
                counted: counted.to_string(),
                predicted: predicted.to_string(),
            });
        }
    }
    LPolynomial::new(coeffs, p, r, g)
}

/// L-polynomial over `F_{q^2}`: `L(U) L(-U)` rewritten in `T = U^2`, whose
/// reciprocal roots are the squares `α_i^2`.
pub fn squared_l_polynomial(l: &LPolynomial) -> LPolynomial {
    let prod = intpoly::mul(&l.coeffs, &intpoly::negate_argument(&l.coeffs));
    let mut coeffs: Vec<BigInt> = prod.iter().step_by(2).cloned().collect();
    debug_assert!(prod.iter().skip(1).step_by(2).all(Zero::is_zero));
    coeffs.resize((2 * l.g + 1) as usize, BigInt::zero());
    LPolynomial {
        coeffs,
        p: l.p,
        r: 2 * l.r,
        g: l.g,
    }
}

/// `v_p(C_i) / r` as an exact fraction; `None` for `C_i = 0`.
pub fn normalized_valuation(c: &BigInt, p: u64, r: u32) -> Option<num_rational::Ratio<i64>> {
    arith::valuation(c, p).map(|v| num_rational::Ratio::new(v as i64, r as i64))
}

/// Convenience for callers that only need small coefficients.
pub fn coefficient_i64(l: &LPolynomial, k: usize) -> Option<i64> {
    l.coeffs.get(k).and_then(ToPrimitive::to_i64)
}
