//! Exact arithmetic in `F_p` and its extensions `F_{p^r}`.
//!
//! Every extension is represented in the power basis of a fixed modulus: the
//! lexicographically smallest monic irreducible polynomial of degree `r`,
//! comparing coefficient tuples `(c_0, ..., c_{r-1})` with `c_0` most
//! significant. Two independent constructions of the same `(p, r)` therefore
//! agree coefficient for coefficient.
//!
//! Elements carry a handle to their field so that mixing elements of
//! different fields is caught at the call site instead of producing garbage.

mod fp_poly;
mod poly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::arith;

pub use poly::{count_distinct_roots, PolyOverField};

/// Largest characteristic accepted; keeps coefficient products inside `u64`.
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} exceeds the supported bound {MAX_CHARACTERISTIC}")]
    CharacteristicTooLarge(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("operands belong to different fields (F_{left} vs F_{right})")]
    MixedFields { left: String, right: String },
    #[error("element has {got} coefficients, field needs {expected}")]
    BadLength { expected: usize, got: usize },
    #[error("coefficient {0} is not reduced")]
    UnreducedCoefficient(u64),
    #[error("zero polynomial has no finite root count")]
    ZeroPolynomial,
    #[error("field cardinality {0} does not fit in 64 bits")]
    CardinalityOverflow(String),
}

#[derive(Debug)]
struct FieldInner {
    p: u64,
    r: usize,
    /// Monic modulus, constant term first, length `r + 1`.
    modulus: Vec<u64>,
    /// `p - modulus[j]` for `j < r`; used for reduction by addition.
    neg_modulus: Vec<u64>,
    cardinality: BigUint,
    cardinality_u64: Option<u64>,
}

/// A finite field `F_{p^r}` with its deterministic modulus. Cheap to clone.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldInner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.r, self.0.modulus)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.r == 1 {
            write!(f, "{}", self.0.p)
        } else {
            write!(f, "{}^{}", self.0.p, self.0.r)
        }
    }
}

/// Builds `F_{p^r}` with the lexicographically smallest monic irreducible modulus.
pub fn make_field(p: u64, r: usize) -> Result<FieldSpec, FieldError> {
    if !arith::is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if p >= MAX_CHARACTERISTIC {
        return Err(FieldError::CharacteristicTooLarge(p));
    }
    if r == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let modulus = fp_poly::smallest_irreducible(p, r);
    Ok(FieldSpec::from_modulus(p, modulus))
}

impl FieldSpec {
    fn from_modulus(p: u64, modulus: Vec<u64>) -> Self {
        let r = modulus.len() - 1;
        let neg_modulus = modulus[..r].iter().map(|&c| (p - c) % p).collect();
        let cardinality = num_traits::pow(BigUint::from(p), r);
        let cardinality_u64 = u32::try_from(r).ok().and_then(|e| p.checked_pow(e));
        FieldSpec(Arc::new(FieldInner {
            p,
            r,
            modulus,
            neg_modulus,
            cardinality,
            cardinality_u64,
        }))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.r
    }

    /// Monic modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn cardinality(&self) -> &BigUint {
        &self.0.cardinality
    }

    /// `q = p^r` as a machine integer.
    pub fn order(&self) -> Result<u64, FieldError> {
        self.0
            .cardinality_u64
            .ok_or_else(|| FieldError::CardinalityOverflow(self.0.cardinality.to_string()))
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            coeffs: vec![0; self.0.r],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// The image of an integer under `Z -> F_p -> F_{p^r}`.
    pub fn from_int(&self, value: i64) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = value.rem_euclid(self.0.p as i64) as u64;
        e
    }

    /// The residue class of the polynomial variable `T`.
    pub fn generator_t(&self) -> FieldElement {
        let mut e = self.zero();
        if self.0.r == 1 {
            // T ≡ -modulus[0] mod the linear modulus
            e.coeffs[0] = self.0.neg_modulus[0];
        } else {
            e.coeffs[1] = 1;
        }
        e
    }

    pub fn element(&self, coeffs: Vec<u64>) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.0.r {
            return Err(FieldError::BadLength {
                expected: self.0.r,
                got: coeffs.len(),
            });
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.0.p) {
            return Err(FieldError::UnreducedCoefficient(c));
        }
        Ok(FieldElement {
            field: self.clone(),
            coeffs,
        })
    }

    /// Element with base-`p` digits of `index` as coefficients (`c_0` least significant).
    pub fn element_from_index(&self, index: u64) -> FieldElement {
        let mut e = self.zero();
        self.raw_from_index(index, &mut e.coeffs);
        e
    }

    /// All `q` elements in index order. Requires `q` to fit in `u64`.
    pub fn elements(&self) -> Result<impl Iterator<Item = FieldElement> + '_, FieldError> {
        let q = self.order()?;
        Ok(self.elements_in(0..q))
    }

    /// A contiguous index range of elements; disjoint ranges partition the field.
    pub fn elements_in(
        &self,
        range: std::ops::Range<u64>,
    ) -> impl Iterator<Item = FieldElement> + '_ {
        range.map(move |i| self.element_from_index(i))
    }

    pub(crate) fn check_same(&self, other: &FieldSpec) -> Result<(), FieldError> {
        if self == other {
            Ok(())
        } else {
            Err(FieldError::MixedFields {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }

    // ---- raw slice kernels -------------------------------------------------
    //
    // The counting loops work on `&[u64]` coefficient buffers of length `r`
    // to avoid allocation. Callers guarantee reduced inputs.

    pub(crate) fn raw_from_index(&self, mut index: u64, out: &mut [u64]) {
        let p = self.0.p;
        for c in out.iter_mut() {
            *c = index % p;
            index /= p;
        }
    }

    pub(crate) fn raw_index(&self, a: &[u64]) -> u64 {
        let p = self.0.p;
        a.iter().rev().fold(0u64, |acc, &c| acc * p + c)
    }

    pub(crate) fn raw_is_one(&self, a: &[u64]) -> bool {
        a[0] == 1 && a[1..].iter().all(|&c| c == 0)
    }

    pub(crate) fn raw_is_zero(a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// `out = a * b`. `scratch` must hold at least `2r - 1` words.
    pub(crate) fn raw_mul(&self, a: &[u64], b: &[u64], out: &mut [u64], scratch: &mut [u64]) {
        let p = self.0.p;
        let r = self.0.r;
        if r == 1 {
            out[0] = a[0] * b[0] % p;
            return;
        }
        let prod = &mut scratch[..2 * r - 1];
        prod.iter_mut().for_each(|c| *c = 0);
        // p < 2^31 so each product is < 2^62; reduce after every add.
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                let t = prod[i + j] + ai * bj % p;
                prod[i + j] = if t >= p { t - p } else { t };
            }
        }
        self.reduce_in_place(prod);
        out.copy_from_slice(&prod[..r]);
    }

    /// `a = a * t` in place, `t` the class of the variable; needs `r >= 2`.
    pub(crate) fn raw_mul_by_t(&self, a: &mut [u64]) {
        let p = self.0.p;
        let r = self.0.r;
        let top = a[r - 1];
        a.copy_within(0..r - 1, 1);
        a[0] = 0;
        if top != 0 {
            for (c, &nj) in a.iter_mut().zip(&self.0.neg_modulus) {
                let t = *c + top * nj % p;
                *c = if t >= p { t - p } else { t };
            }
        }
    }

    /// Reduces a polynomial of degree `< 2r - 1` modulo the field modulus.
    fn reduce_in_place(&self, prod: &mut [u64]) {
        let p = self.0.p;
        let r = self.0.r;
        let neg = &self.0.neg_modulus;
        for top in (r..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            let base = top - r;
            for (j, &nj) in neg.iter().enumerate() {
                let t = prod[base + j] + c * nj % p;
                prod[base + j] = if t >= p { t - p } else { t };
            }
        }
    }

    /// `out = a^e` by square-and-multiply.
    pub(crate) fn raw_pow(&self, a: &[u64], e: u64, out: &mut [u64], scratch: &mut RawScratch) {
        let r = self.0.r;
        out.iter_mut().for_each(|c| *c = 0);
        out[0] = 1;
        if e == 0 {
            return;
        }
        let RawScratch { base, tmp, wide } = scratch;
        base[..r].copy_from_slice(a);
        let top_bit = 63 - e.leading_zeros();
        for bit in (0..=top_bit).rev() {
            self.raw_mul(out, out, &mut tmp[..r], wide);
            out.copy_from_slice(&tmp[..r]);
            if (e >> bit) & 1 == 1 {
                self.raw_mul(out, &base[..r], &mut tmp[..r], wide);
                out.copy_from_slice(&tmp[..r]);
            }
        }
    }

    pub(crate) fn scratch(&self) -> RawScratch {
        let r = self.0.r;
        RawScratch {
            base: vec![0; r],
            tmp: vec![0; r],
            wide: vec![0; 2 * r],
        }
    }
}

/// Work buffers for [`FieldSpec::raw_pow`].
pub(crate) struct RawScratch {
    base: Vec<u64>,
    tmp: Vec<u64>,
    wide: Vec<u64>,
}

/// An element of a [`FieldSpec`], stored in the power basis of its modulus.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: FieldSpec,
    coeffs: Vec<u64>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.degree() == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl FieldElement {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn index(&self) -> u64 {
        self.field.raw_index(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        FieldSpec::raw_is_zero(&self.coeffs)
    }

    pub fn is_one(&self) -> bool {
        self.field.raw_is_one(&self.coeffs)
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.field.check_same(&other.field)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.field.check_same(&other.field)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.field.check_same(&other.field)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn neg(&self) -> FieldElement {
        let p = self.field.characteristic();
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|&c| (p - c) % p).collect(),
        }
    }

    /// Multiplicative inverse via extended Euclid against the modulus.
    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let p = self.field.characteristic();
        let mut inv = fp_poly::inverse_mod(&self.coeffs, self.field.modulus(), p)
            .ok_or(FieldError::ZeroInverse)?;
        inv.resize(self.field.degree(), 0);
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs: inv,
        })
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.field.check_same(&other.field)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    /// `self^e` for a nonnegative exponent.
    pub fn pow(&self, e: u64) -> FieldElement {
        let mut out = self.field.zero();
        let mut scratch = self.field.scratch();
        self.field.raw_pow(&self.coeffs, e, &mut out.coeffs, &mut scratch);
        out
    }

    /// `self^e` for a signed exponent; negative powers need a nonzero base.
    pub fn pow_signed(&self, e: i64) -> Result<FieldElement, FieldError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// The `p`-th power map.
    pub fn frobenius(&self) -> FieldElement {
        self.pow(self.field.characteristic())
    }

    pub(crate) fn add_unchecked(&self, other: &FieldElement) -> FieldElement {
        let p = self.field.characteristic();
        FieldElement {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| (a + b) % p)
                .collect(),
        }
    }

    pub(crate) fn mul_unchecked(&self, other: &FieldElement) -> FieldElement {
        let mut out = self.field.zero();
        let mut wide = vec![0; 2 * self.field.degree()];
        self.field
            .raw_mul(&self.coeffs, &other.coeffs, &mut out.coeffs, &mut wide);
        out
    }
}

/// Number of `y` in the field with `y^m = c`.
///
/// `1` when `c = 0`; otherwise `d = gcd(m, q-1)` if `c` is a `d`-th power and `0` if not.
pub fn power_residue_count(
    spec: &FieldSpec,
    m: u64,
    c: &FieldElement,
) -> Result<u64, FieldError> {
    spec.check_same(c.field())?;
    let q = spec.order()?;
    let mut scratch = spec.scratch();
    let mut out = vec![0; spec.degree()];
    Ok(raw_power_residue_count(spec, q, m, c.coeffs(), &mut out, &mut scratch))
}

pub(crate) fn raw_power_residue_count(
    spec: &FieldSpec,
    q: u64,
    m: u64,
    c: &[u64],
    out: &mut [u64],
    scratch: &mut RawScratch,
) -> u64 {
    if FieldSpec::raw_is_zero(c) {
        return 1;
    }
    let d = arith::gcd(m, q - 1);
    if d == 1 {
        return 1;
    }
    spec.raw_pow(c, (q - 1) / d, out, scratch);
    if spec.raw_is_one(out) {
        d
    } else {
        0
    }
}
