//! Which genera Hurwitz curves attain, via `q(x, y) = x^2 - xy + y^2`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{self, gcd};
use crate::curves::hurwitz_genus;

/// Largest `m` accepted by the factorisation test.
pub const REPRESENTABLE_LIMIT: u64 = 1_000_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenusError {
    #[error("({x}, {y}) does not represent {m}")]
    NotOnForm { x: i64, y: i64, m: i64 },
    #[error("m = 0 is out of scope")]
    Zero,
    #[error("m = {0} exceeds the factorisation limit {REPRESENTABLE_LIMIT}")]
    TooLarge(u64),
}

pub fn form(x: i64, y: i64) -> i64 {
    x * x - x * y + y * y
}

/// `(x, y) ↦ (x, x - y)`.
pub fn phi(x: i64, y: i64) -> (i64, i64) {
    (x, x - y)
}

/// `(x, y) ↦ (y, x)`.
pub fn f(x: i64, y: i64) -> (i64, i64) {
    (y, x)
}

/// `(x, y) ↦ (-x, -y)`.
pub fn g(x: i64, y: i64) -> (i64, i64) {
    (-x, -y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QFormSolution {
    pub x: i64,
    pub y: i64,
    pub m: i64,
}

impl QFormSolution {
    pub fn new(x: i64, y: i64, m: i64) -> Result<Self, GenusError> {
        if form(x, y) != m {
            return Err(GenusError::NotOnForm { x, y, m });
        }
        Ok(QFormSolution { x, y, m })
    }
}

/// Representability with the prime factorisation that decides it: `m` is
/// represented iff every prime `≡ 2 (mod 3)` occurs to an even power.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Representability {
    pub representable: bool,
    pub factorization: Vec<(u64, u32)>,
    /// Primes `≡ 2 (mod 3)` with odd exponent.
    pub obstructions: Vec<u64>,
}

pub fn is_representable(m: u64) -> Result<Representability, GenusError> {
    if m == 0 {
        return Err(GenusError::Zero);
    }
    if m > REPRESENTABLE_LIMIT {
        return Err(GenusError::TooLarge(m));
    }
    let factorization = arith::factorize(m);
    let obstructions: Vec<u64> = factorization
        .iter()
        .filter(|&&(p, e)| p % 3 == 2 && e % 2 == 1)
        .map(|&(p, _)| p)
        .collect();
    Ok(Representability {
        representable: obstructions.is_empty(),
        factorization,
        obstructions,
    })
}

/// Moves a solution into the positive quadrant with the form's
/// automorphisms.
pub fn positive_solution(sol: QFormSolution) -> Result<QFormSolution, GenusError> {
    let QFormSolution { x, y, m } = sol;
    if form(x, y) != m {
        return Err(GenusError::NotOnForm { x, y, m });
    }
    if m == 0 {
        return Err(GenusError::Zero);
    }
    let (a, b) = match (x.signum(), y.signum()) {
        (1, 1) => (x, y),
        (-1, -1) => g(x, y),
        (1, -1) => phi(x, y),
        (-1, 1) => {
            let (u, v) = f(x, y);
            phi(u, v)
        }
        // zero coordinate: (0, y) -> (y, y) up to sign, (x, 0) -> (x, x)
        (0, _) => {
            let t = y.abs();
            (t, t)
        }
        (_, _) => {
            let t = x.abs();
            (t, t)
        }
    };
    QFormSolution::new(a, b, m)
}

/// All `(x, y)` with `x, y >= 1` and `q(x, y) = m`.
pub fn solutions_enum(m: u64) -> Vec<(u64, u64)> {
    // q(x, y) >= 3 max(x, y)^2 / 4, so max(x, y) <= 2 sqrt(m / 3)
    let bound = (2.0 * (m as f64 / 3.0).sqrt()).ceil() as u64 + 1;
    let mut out = Vec::new();
    for x in 1..=bound {
        for y in 1..=bound {
            if (x * x + y * y).checked_sub(x * y) == Some(m) {
                out.push((x, y));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GenusSpectrum {
    /// Genus -> all `(n, l)` with `1 <= l <= n` of that genus.
    pub all: BTreeMap<u64, Vec<(u64, u64)>>,
    /// Genus -> coprime `(n, l)` only; here `g = (m - 1) / 2`.
    pub coprime: BTreeMap<u64, Vec<(u64, u64)>>,
}

/// Hurwitz genera up to `g_max` with their witnesses `(n, l)`, `l <= n`.
pub fn hurwitz_genera(g_max: u64) -> GenusSpectrum {
    // m >= 3n^2 / 4 and d <= n give genus >= (3n^2 - 12n + 8) / 8
    let mut spectrum = GenusSpectrum::default();
    let mut n = 1u64;
    loop {
        if n > 4 && 3 * n * n - 12 * n + 8 > 8 * g_max {
            break;
        }
        for l in 1..=n {
            let genus = hurwitz_genus(n, l);
            if genus > g_max {
                continue;
            }
            spectrum.all.entry(genus).or_default().push((n, l));
            if gcd(n, l) == 1 {
                let m = n * n + l * l - n * l;
                assert_eq!(genus, (m - 1) / 2);
                spectrum.coprime.entry(genus).or_default().push((n, l));
            }
        }
        n += 1;
    }
    spectrum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representability_examples() {
        assert!(is_representable(7).unwrap().representable);
        let five = is_representable(5).unwrap();
        assert!(!five.representable);
        assert_eq!(five.obstructions, vec![5]);
        assert!(is_representable(4).unwrap().representable);
        assert_eq!(is_representable(0), Err(GenusError::Zero));
    }

    #[test]
    fn positive_solution_examples() {
        let s = positive_solution(QFormSolution::new(3, -1, 13).unwrap()).unwrap();
        assert_eq!((s.x, s.y), (3, 4));
        let s = positive_solution(QFormSolution::new(-2, -3, 7).unwrap()).unwrap();
        assert_eq!((s.x, s.y), (2, 3));
        let s = positive_solution(QFormSolution::new(0, 2, 4).unwrap()).unwrap();
        assert_eq!((s.x, s.y), (2, 2));
        assert!(QFormSolution::new(1, 1, 2).is_err());
    }

    #[test]
    fn enumeration_examples() {
        assert!(solutions_enum(3).contains(&(1, 2)));
        let s13 = solutions_enum(13);
        assert!(s13.contains(&(1, 4)) && s13.contains(&(3, 4)));
        assert!(solutions_enum(5).is_empty());
    }

    #[test]
    fn genera_examples() {
        let spec = hurwitz_genera(6);
        assert_eq!(spec.coprime[&1], vec![(2, 1)]);
        assert_eq!(spec.coprime[&3], vec![(3, 1), (3, 2)]);
        assert_eq!(spec.coprime[&6], vec![(4, 1), (4, 3)]);
        assert!(spec.all[&4].contains(&(4, 2)));
        assert!(!spec.coprime.contains_key(&2));
    }
}
