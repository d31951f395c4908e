//! Normalized Weil numbers `ω_i = α_i / sqrt(q)` of supersingular curves as
//! exact roots of unity.
//!
//! The squares `α_i^2 = q ω_i^2` are found by trial division of the squared
//! L-polynomial by `Φ_k(qT)`. Square roots are then grouped into Galois
//! orbits: `σ_a` acts on `sqrt(q) ω` by `ω ↦ χ(a) ω^a` where `χ` is the
//! character of `Q(sqrt(q))`. Above each squared order the candidates form
//! either one orbit (multiplicity forced) or two orbits `O` and `-O`, in
//! which case the multiplicity of the orbit polynomial in `L` settles the
//! split exactly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use super::intpoly::{self, IntPoly};
use super::{is_supersingular, squared_l_polynomial, LPolynomial, ZetaError};
use crate::arith::{self, gcd, lcm};

/// `ζ_k^t` with `gcd(t, k) = 1`, repeated `multiplicity` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RootOfUnity {
    pub order: u64,
    pub exponent: u64,
    pub multiplicity: u64,
}

impl RootOfUnity {
    fn label(&self) -> String {
        match (self.order, self.exponent) {
            (1, _) => "1".into(),
            (2, _) => "-1".into(),
            (4, 1) => "i".into(),
            (4, 3) => "-i".into(),
            (k, 1) => format!("ζ{k}"),
            (k, t) => format!("ζ{k}^{t}"),
        }
    }

    pub fn angle(&self) -> f64 {
        std::f64::consts::TAU * self.exponent as f64 / self.order as f64
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.multiplicity == 1 {
            write!(f, "{}", self.label())
        } else {
            write!(f, "{}({})", self.label(), self.multiplicity)
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootOfUnityMultiset {
    /// Sorted by `(order, exponent)`.
    pub entries: Vec<RootOfUnity>,
    /// Set for curves that are not supersingular.
    pub not_roots_of_unity: bool,
}

impl RootOfUnityMultiset {
    fn not_roots() -> Self {
        RootOfUnityMultiset {
            entries: Vec::new(),
            not_roots_of_unity: true,
        }
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Distinct orders present.
    pub fn orders(&self) -> Vec<u64> {
        let set: BTreeSet<u64> = self.entries.iter().map(|e| e.order).collect();
        set.into_iter().collect()
    }

    pub fn is_conjugation_closed(&self) -> bool {
        self.entries.iter().all(|e| {
            let conj = (e.order - e.exponent) % e.order;
            self.entries
                .iter()
                .any(|f| f.order == e.order && f.exponent == conj && f.multiplicity == e.multiplicity)
        })
    }

    /// `Π (1 - sqrt(q) ω T)` over the entries, evaluated in floating point
    /// and rounded. Exact whenever the coefficients stay below `2^50`.
    pub fn weil_polynomial(&self, p: u64, r: u32) -> IntPoly {
        let roots: Vec<Complex64> = self
            .entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(Complex64::from_polar(1.0, e.angle()), e.multiplicity as usize))
            .collect();
        round_product(&roots, sqrt_q(p, r))
    }
}

impl fmt::Display for RootOfUnityMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.not_roots_of_unity {
            return write!(f, "not roots of unity");
        }
        let parts: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(", "))
    }
}

fn sqrt_q(p: u64, r: u32) -> f64 {
    (p as f64).powf(r as f64 / 2.0)
}

fn round_product(roots: &[Complex64], scale: f64) -> IntPoly {
    let mut coeffs = vec![Complex64::one()];
    for w in roots {
        let w = w * scale;
        let mut next = vec![Complex64::zero(); coeffs.len() + 1];
        for (j, c) in coeffs.iter().enumerate() {
            next[j] += c;
            next[j + 1] -= c * w;
        }
        coeffs = next;
    }
    coeffs
        .iter()
        .map(|c| BigInt::from(c.re.round() as i128))
        .collect()
}

/// Upper bound for the coefficients of `Π_{i<deg} (1 - sqrt(q) ω_i T)`.
fn coefficient_bound(deg: usize, p: u64, r: u32) -> f64 {
    let s = sqrt_q(p, r);
    (0..=deg)
        .map(|j| {
            let binom: f64 = (0..j).map(|i| (deg - i) as f64 / (i + 1) as f64).product();
            binom * s.powi(j as i32)
        })
        .fold(0.0, f64::max)
}

type Character = Box<dyn Fn(u64) -> i8>;

/// `σ_a(sqrt(q)) / sqrt(q)` for `a` prime to `p`, with its conductor; `None`
/// if `q` is a square (character trivial).
fn quadratic_character(p: u64, r: u32) -> Option<(u64, Character)> {
    if r.is_multiple_of(2) {
        return None;
    }
    if p == 2 {
        return Some((8, Box::new(|a| if a % 8 == 1 || a % 8 == 7 { 1 } else { -1 })));
    }
    let legendre = move |a: u64| -> i8 {
        if arith::pow_mod(a % p, (p - 1) / 2, p) == 1 {
            1
        } else {
            -1
        }
    };
    if p % 4 == 1 {
        Some((p, Box::new(legendre)))
    } else {
        Some((4 * p, Box::new(move |a| {
            let chi4 = if a % 4 == 1 { 1 } else { -1 };
            legendre(a) * chi4
        })))
    }
}

/// Exponents (mod `2k`) of the orbit of `ζ_{2k}` under the twisted Galois
/// action, for squared order `k`.
fn orbit_of_generator(k: u64, p: u64, r: u32) -> BTreeSet<u64> {
    let n2 = 2 * k;
    let (conductor, chi) = match quadratic_character(p, r) {
        Some((f, chi)) => (f, Some(chi)),
        None => (1, None),
    };
    let big = lcm(n2, conductor);
    let mut orbit = BTreeSet::new();
    for a in 1..big {
        if gcd(a, big) != 1 {
            continue;
        }
        let sign = chi.as_ref().map_or(1, |c| c(a));
        let e = if sign == 1 { a % n2 } else { (a + k) % n2 };
        orbit.insert(e);
    }
    orbit
}

/// Identification with the default order bound `4m`.
pub fn identify_nwn(l: &LPolynomial, m: u64) -> Result<RootOfUnityMultiset, ZetaError> {
    identify_nwn_with_bound(l, 4 * m)
}

pub fn identify_nwn_with_bound(l: &LPolynomial, order_bound: u64) -> Result<RootOfUnityMultiset, ZetaError> {
    if !is_supersingular(l) {
        return Ok(RootOfUnityMultiset::not_roots());
    }
    let q = l.q();
    let squared = squared_l_polynomial(l);
    let mut rest: IntPoly = squared.coeffs.clone();
    intpoly::trim(&mut rest);
    // squared order -> multiplicity per primitive root
    let mut squared_orders: BTreeMap<u64, u64> = BTreeMap::new();
    let mut k = 1;
    while !intpoly::is_one(&rest) {
        if k > order_bound {
            return Err(ZetaError::OrderBoundExhausted { bound: order_bound });
        }
        let factor = intpoly::scaled_reverse_cyclotomic(k, &q);
        let (mult, cofactor) = intpoly::strip_factor(&rest, &factor, u64::MAX);
        if mult > 0 {
            squared_orders.insert(k, mult);
            rest = cofactor;
        }
        k += 1;
    }

    let mut remaining: IntPoly = l.coeffs.clone();
    let mut multiset: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    let mut add = |e: u64, n2: u64, copies: u64| {
        if copies == 0 {
            return;
        }
        let g = gcd(e, n2);
        *multiset.entry((n2 / g, e / g)).or_insert(0) += copies;
    };
    for (&k, &mu) in &squared_orders {
        let n2 = 2 * k;
        let orbit = orbit_of_generator(k, l.p, l.r);
        let full = 2 * arith::euler_phi(k);
        let merged = intpoly::square_argument(&intpoly::scaled_reverse_cyclotomic(k, &q));
        if orbit.len() as u64 == full {
            if mu % 2 != 0 {
                return Err(ZetaError::SignAssignment);
            }
            let (e, cofactor) = intpoly::strip_factor(&remaining, &merged, mu / 2);
            if e != mu / 2 {
                return Err(ZetaError::SignAssignment);
            }
            remaining = cofactor;
            for &x in &orbit {
                add(x, n2, mu / 2);
            }
            continue;
        }
        debug_assert_eq!(orbit.len() as u64 * 2, full);
        if coefficient_bound(orbit.len(), l.p, l.r) >= (1u64 << 50) as f64 {
            return Err(ZetaError::SignAssignment);
        }
        let roots: Vec<Complex64> = orbit
            .iter()
            .map(|&e| Complex64::from_polar(1.0, std::f64::consts::TAU * e as f64 / n2 as f64))
            .collect();
        let first = round_product(&roots, sqrt_q(l.p, l.r));
        let second = intpoly::negate_argument(&first);
        if intpoly::mul(&first, &second) != merged {
            return Err(ZetaError::SignAssignment);
        }
        let (a, cofactor) = intpoly::strip_factor(&remaining, &first, mu);
        let (b, cofactor) = intpoly::strip_factor(&cofactor, &second, mu - a);
        if a + b != mu {
            return Err(ZetaError::SignAssignment);
        }
        remaining = cofactor;
        for &x in &orbit {
            add(x, n2, a);
            add((x + k) % n2, n2, b);
        }
    }
    if !intpoly::is_one(&remaining) {
        return Err(ZetaError::SignAssignment);
    }
    let entries = multiset
        .into_iter()
        .map(|((order, exponent), multiplicity)| RootOfUnity {
            order,
            exponent,
            multiplicity,
        })
        .collect();
    Ok(RootOfUnityMultiset {
        entries,
        not_roots_of_unity: false,
    })
}

/// `Σ_i (sqrt(q) ω_i)^s` in floating point.
pub fn numeric_power_sum(nwn: &RootOfUnityMultiset, p: u64, r: u32, s: u32) -> f64 {
    let scale = sqrt_q(p, r).powi(s as i32);
    nwn.entries
        .iter()
        .map(|e| e.multiplicity as f64 * (e.angle() * s as f64).cos() * scale)
        .sum()
}
