//! Univariate polynomials over `F_{p^r}`, enough for root counting.

use super::{FieldElement, FieldError, FieldSpec};

/// Polynomial with coefficients in one field, constant term first.
/// The leading coefficient is nonzero unless the polynomial is zero (empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyOverField {
    field: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl PolyOverField {
    pub fn new(field: &FieldSpec, coeffs: Vec<FieldElement>) -> Result<Self, FieldError> {
        for c in &coeffs {
            field.check_same(c.field())?;
        }
        let mut poly = PolyOverField {
            field: field.clone(),
            coeffs,
        };
        poly.normalize();
        Ok(poly)
    }

    /// Builds from integer coefficients mapped into the field.
    pub fn from_ints(field: &FieldSpec, coeffs: &[i64]) -> Self {
        let coeffs = coeffs.iter().map(|&c| field.from_int(c)).collect();
        let mut poly = PolyOverField {
            field: field.clone(),
            coeffs,
        };
        poly.normalize();
        poly
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(FieldElement::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| acc.mul_unchecked(x).add_unchecked(c))
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = self.field.zero();
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                a.add_unchecked(&b.neg())
            })
            .collect();
        let mut out = PolyOverField {
            field: self.field.clone(),
            coeffs,
        };
        out.normalize();
        out
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return PolyOverField {
                field: self.field.clone(),
                coeffs: Vec::new(),
            };
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add_unchecked(&a.mul_unchecked(b));
            }
        }
        let mut out = PolyOverField {
            field: self.field.clone(),
            coeffs,
        };
        out.normalize();
        out
    }

    /// Remainder modulo a nonzero divisor.
    fn rem(&self, divisor: &Self) -> Self {
        let mut rem = self.coeffs.clone();
        let d = divisor.coeffs.len();
        let lead_inv = divisor.coeffs[d - 1]
            .inv()
            .expect("normalized polynomial has nonzero leading coefficient");
        while rem.len() >= d {
            let c = rem[rem.len() - 1].mul_unchecked(&lead_inv);
            let shift = rem.len() - d;
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] = rem[shift + j].add_unchecked(&c.mul_unchecked(b).neg());
            }
            while rem.last().is_some_and(FieldElement::is_zero) {
                rem.pop();
            }
        }
        PolyOverField {
            field: self.field.clone(),
            coeffs: rem,
        }
    }

    fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// `T^e mod self`.
    fn pow_t_mod(&self, e: u64) -> Self {
        let one = PolyOverField {
            field: self.field.clone(),
            coeffs: vec![self.field.one()],
        };
        let t = PolyOverField {
            field: self.field.clone(),
            coeffs: vec![self.field.zero(), self.field.one()],
        };
        let mut result = one.rem(self);
        let base = t.rem(self);
        if e == 0 {
            return result;
        }
        let top_bit = 63 - e.leading_zeros();
        for bit in (0..=top_bit).rev() {
            result = result.mul(&result).rem(self);
            if (e >> bit) & 1 == 1 {
                result = result.mul(&base).rem(self);
            }
        }
        result
    }
}

/// Number of distinct roots of `f` in its field: `deg gcd(f, T^q - T)`,
/// with `T^q` reduced modulo `f` by square-and-multiply.
pub fn count_distinct_roots(spec: &FieldSpec, f: &PolyOverField) -> Result<u64, FieldError> {
    spec.check_same(f.field())?;
    let deg = f.degree().ok_or(FieldError::ZeroPolynomial)?;
    if deg == 0 {
        return Ok(0);
    }
    let q = spec.order()?;
    let t = PolyOverField {
        field: spec.clone(),
        coeffs: vec![spec.zero(), spec.one()],
    };
    let h = f.pow_t_mod(q).sub(&t);
    let g = f.gcd(&h);
    Ok(g.degree().unwrap_or(0) as u64)
}
