//! Dense integer polynomials (constant term first) and cyclotomic
//! polynomials.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub type IntPoly = Vec<BigInt>;

pub fn trim(a: &mut IntPoly) {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// `a / b` when `b` divides `a` in `Z[T]` and `b(0) = ±1`; `None` otherwise.
///
/// Long division runs from the constant term so no leading-coefficient
/// inverse is needed.
pub fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<IntPoly> {
    let b0 = b.first()?;
    if !(b0.is_one() || (-b0).is_one()) {
        return None;
    }
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < b.len() {
        return None;
    }
    let n = a.len() - b.len() + 1;
    let mut rem: IntPoly = a.to_vec();
    let mut quot = vec![BigInt::zero(); n];
    for i in 0..n {
        let c = &rem[i] * b0; // b0 = ±1 is its own inverse
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &c * bj;
            }
        }
        quot[i] = c;
    }
    if rem.iter().all(Zero::is_zero) {
        trim(&mut quot);
        Some(quot)
    } else {
        None
    }
}

/// `f(cT)`.
pub fn scale_argument(f: &[BigInt], c: &BigInt) -> IntPoly {
    let mut pow = BigInt::one();
    f.iter()
        .map(|a| {
            let out = a * &pow;
            pow *= c;
            out
        })
        .collect()
}

/// `f(-T)`.
pub fn negate_argument(f: &[BigInt]) -> IntPoly {
    f.iter()
        .enumerate()
        .map(|(i, a)| if i % 2 == 1 { -a } else { a.clone() })
        .collect()
}

/// `f(T^2)`.
pub fn square_argument(f: &[BigInt]) -> IntPoly {
    let mut out = vec![BigInt::zero(); 2 * f.len().max(1) - 1];
    for (i, a) in f.iter().enumerate() {
        out[2 * i] = a.clone();
    }
    trim(&mut out);
    out
}

/// `Φ_k` by dividing `T^k - 1` by `Φ_d` for proper divisors `d`.
pub fn cyclotomic(k: u64) -> IntPoly {
    assert!(k >= 1);
    let mut num: IntPoly = vec![BigInt::zero(); k as usize + 1];
    num[0] = -BigInt::one();
    num[k as usize] = BigInt::one();
    for d in crate::arith::divisors(k) {
        if d < k {
            // Φ_d(0) = ±1 so exact division applies
            num = div_exact(&num, &cyclotomic(d)).expect("Φ_d divides T^k - 1");
        }
    }
    num
}

/// Polynomial with reciprocal roots `q ζ` over the primitive `k`-th roots
/// `ζ`: `Φ_k(qT)` for `k >= 2`, `1 - qT` for `k = 1`.
pub fn scaled_reverse_cyclotomic(k: u64, q: &BigInt) -> IntPoly {
    if k == 1 {
        return vec![BigInt::one(), -q.clone()];
    }
    scale_argument(&cyclotomic(k), q)
}

/// Largest `e` with `f^e | a`, capped at `limit`, and the cofactor.
pub fn strip_factor(a: &[BigInt], f: &[BigInt], limit: u64) -> (u64, IntPoly) {
    let mut rest = a.to_vec();
    let mut e = 0;
    while e < limit {
        match div_exact(&rest, f) {
            Some(q) => {
                rest = q;
                e += 1;
            }
            None => break,
        }
    }
    (e, rest)
}

pub fn is_one(a: &[BigInt]) -> bool {
    a.len() == 1 && a[0].is_one()
}
