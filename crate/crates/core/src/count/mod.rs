//! Point counts `N_s = #C(F_{p^s})` for smooth models.
//!
//! For `H_{n,l}` the plane model is singular at most at the three coordinate
//! points; every other projective point lies on the torus `XYZ != 0`. The
//! smooth-model count is therefore the torus count plus, for each coordinate
//! point, the number of rational branches above it, which is
//! `#{t : t^d = -1}` with `d = gcd(n, l)`.

mod parallel;
mod torus;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::curves::{CurveError, CurveId, FermatCurve, HurwitzCurve, SuperellipticCurve};
use crate::field::{
    count_distinct_roots, make_field, raw_power_residue_count, FieldElement, FieldError, FieldSpec,
    PolyOverField,
};

pub use parallel::{chunked_sum, Parallelism};
pub use torus::{count_torus, MonomialLattice, TorusEngine};

/// Largest field the brute-force oracle will enumerate.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000;

/// Default bound on `p^s` for any single count.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("bad reduction: p = {p} divides m = {m}")]
    BadReduction { p: u64, m: u64 },
    #[error("field of size {p}^{s} exceeds the enumeration budget {budget}")]
    BudgetExceeded { p: u64, s: u32, budget: u64 },
    #[error("brute-force enumeration refused for q = {0} (limit {BRUTE_FORCE_LIMIT})")]
    BruteForceGuard(u64),
    #[error("Hasse-Weil bound violated: N = {count} over F_{q} for genus {genus}")]
    HasseWeil { count: u64, q: u64, genus: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// How the Hurwitz torus term is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HurwitzMethod {
    /// Monomial-lattice image test (default).
    #[default]
    Torus,
    /// For each `x`, distinct roots of `x^n y^l + y^n + x^l` in `y`.
    RootCounting,
    /// Plane-model enumeration; only for tiny fields.
    BruteForce,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountConfig {
    /// Largest `p^s` any count may touch.
    pub budget: u64,
    pub parallelism: Parallelism,
    pub method: HurwitzMethod,
    pub engine: TorusEngine,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig {
            budget: DEFAULT_BUDGET,
            parallelism: Parallelism::default(),
            method: HurwitzMethod::default(),
            engine: TorusEngine::default(),
        }
    }
}

impl CountConfig {
    pub fn sequential() -> Self {
        CountConfig {
            parallelism: Parallelism::Sequential,
            ..CountConfig::default()
        }
    }

    /// `p^s` if it is within budget.
    pub fn field_size(&self, p: u64, s: u32) -> Result<u64, CountError> {
        match arith::checked_pow(p, s) {
            Some(q) if q <= self.budget => Ok(q),
            _ => Err(CountError::BudgetExceeded {
                p,
                s,
                budget: self.budget,
            }),
        }
    }
}

static HW_CHECKS: AtomicU64 = AtomicU64::new(0);
static HW_VIOLATIONS: AtomicU64 = AtomicU64::new(0);

/// `(checks, violations)` of the Hasse-Weil guard since process start.
pub fn hasse_weil_stats() -> (u64, u64) {
    (
        HW_CHECKS.load(Ordering::Relaxed),
        HW_VIOLATIONS.load(Ordering::Relaxed),
    )
}

/// `|N - (q + 1)| <= 2 g sqrt(q)`, in exact integer arithmetic.
pub fn within_hasse_weil(count: u64, q: u64, genus: u64) -> bool {
    let dev = count as i128 - q as i128 - 1;
    let lhs = BigInt::from(dev) * BigInt::from(dev);
    let rhs = BigInt::from(4u8) * BigInt::from(genus) * BigInt::from(genus) * BigInt::from(q);
    lhs <= rhs
}

/// Records the check in the global counters and errors on violation.
fn guard(count: u64, q: u64, genus: u64) -> Result<u64, CountError> {
    HW_CHECKS.fetch_add(1, Ordering::Relaxed);
    if within_hasse_weil(count, q, genus) {
        Ok(count)
    } else {
        HW_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
        log::error!("Hasse-Weil violation: N = {count}, q = {q}, g = {genus}");
        Err(CountError::HasseWeil { count, q, genus })
    }
}

/// `N_s` for `s = 1..S` over a prime `p`, all within the Hasse-Weil bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountSeries {
    pub p: u64,
    pub curve: String,
    pub genus: u64,
    pub counts: BTreeMap<u32, u64>,
}

impl CountSeries {
    pub fn new(p: u64, curve: CurveId) -> Self {
        CountSeries {
            p,
            curve: curve.to_string(),
            genus: curve.genus(),
            counts: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, s: u32, count: u64) -> Result<(), CountError> {
        let q = arith::checked_pow(self.p, s).ok_or(CountError::BudgetExceeded {
            p: self.p,
            s,
            budget: u64::MAX,
        })?;
        guard(count, q, self.genus)?;
        self.counts.insert(s, count);
        Ok(())
    }

    pub fn get(&self, s: u32) -> Option<u64> {
        self.counts.get(&s).copied()
    }

    /// Largest `S` such that every `N_1..N_S` is present.
    pub fn contiguous_len(&self) -> u32 {
        let mut s = 0;
        while self.counts.contains_key(&(s + 1)) {
            s += 1;
        }
        s
    }

    /// `N_1..N_S` as a vector.
    pub fn prefix(&self, len: u32) -> Option<Vec<u64>> {
        (1..=len).map(|s| self.get(s)).collect()
    }
}

/// `N_s` for any supported curve.
pub fn count_curve(curve: CurveId, p: u64, s: u32, config: &CountConfig) -> Result<u64, CountError> {
    match curve {
        CurveId::Hurwitz { n, l } => count_hurwitz(n, l, p, s, config),
        CurveId::Fermat { d } => count_fermat(d, p, s, config),
    }
}

/// `N_1..N_S` for any supported curve.
pub fn count_series(
    curve: CurveId,
    p: u64,
    max_s: u32,
    config: &CountConfig,
) -> Result<CountSeries, CountError> {
    let mut series = CountSeries::new(p, curve);
    for s in 1..=max_s {
        series.insert(s, count_curve(curve, p, s, config)?)?;
    }
    Ok(series)
}

/// Number of `t` in the field with `t^d = -1`: the rational branches above
/// one singular coordinate point of `H_{n,l}` when `d = gcd(n, l)`.
pub fn singular_place_count(d: u64, spec: &FieldSpec) -> Result<u64, CountError> {
    let minus_one = spec.from_int(-1);
    Ok(crate::field::power_residue_count(spec, d, &minus_one)?)
}

/// Smooth-model count of `H_{n,l}` over `F_{p^s}`.
pub fn count_hurwitz(n: u64, l: u64, p: u64, s: u32, config: &CountConfig) -> Result<u64, CountError> {
    let curve = HurwitzCurve::new(n, l)?;
    if !arith::is_prime(p) {
        return Err(FieldError::NotPrime(p).into());
    }
    if !curve.has_good_reduction(p) {
        return Err(CountError::BadReduction { p, m: curve.m });
    }
    let q = config.field_size(p, s)?;
    let spec = make_field(p, s as usize)?;
    let places = 3 * singular_place_count(curve.d, &spec)?;
    let count = match config.method {
        HurwitzMethod::Torus => {
            count_torus(&spec, &MonomialLattice::hurwitz(n, l), config.engine, config.parallelism) + places
        }
        HurwitzMethod::RootCounting => hurwitz_torus_by_roots(&curve, &spec, q, config.parallelism) + places,
        HurwitzMethod::BruteForce => {
            let monomials: Vec<(i64, [u64; 3])> = curve.monomials().into_iter().map(|e| (1, e)).collect();
            brute_force_projective_count(&monomials, &spec)? - 3 + places
        }
    };
    guard(count, q, curve.genus)
}

/// `Σ_{x != 0} #{y : x^n y^l + y^n + x^l = 0}`; roots are never `y = 0`.
fn hurwitz_torus_by_roots(curve: &HurwitzCurve, spec: &FieldSpec, q: u64, parallelism: Parallelism) -> u64 {
    let (n, l) = (curve.n as usize, curve.l as usize);
    chunked_sum(1..q, parallelism, |range| {
        let mut total = 0;
        for idx in range {
            let x = spec.element_from_index(idx);
            let mut coeffs = vec![spec.zero(); n.max(l) + 1];
            coeffs[0] = x.pow(curve.l);
            coeffs[l] = coeffs[l].add_unchecked(&x.pow(curve.n));
            coeffs[n] = coeffs[n].add_unchecked(&spec.one());
            let f = PolyOverField::new(spec, coeffs).expect("coefficients share the field");
            // the constant term x^l is nonzero, so f is nonzero
            total += count_distinct_roots(spec, &f).expect("nonzero polynomial");
        }
        total
    })
}

/// Projective count of `U^d + V^d + W^d = 0` over `F_{p^s}`.
pub fn count_fermat(d: u64, p: u64, s: u32, config: &CountConfig) -> Result<u64, CountError> {
    let curve = FermatCurve::new(d)?;
    if !arith::is_prime(p) {
        return Err(FieldError::NotPrime(p).into());
    }
    if !curve.is_smooth_over(p) {
        return Err(CountError::BadReduction { p, m: d });
    }
    let q = config.field_size(p, s)?;
    let spec = make_field(p, s as usize)?;
    let r = spec.degree();
    // W = 1: Σ_u #{v : v^d = -1 - u^d}; W = 0, V = 1: #{u : u^d = -1}
    let affine = chunked_sum(0..q, config.parallelism, |range| {
        let mut scratch = spec.scratch();
        let mut u = vec![0u64; r];
        let mut ud = vec![0u64; r];
        let mut rhs = vec![0u64; r];
        let mut out = vec![0u64; r];
        let mut total = 0;
        for idx in range {
            spec.raw_from_index(idx, &mut u);
            spec.raw_pow(&u, d, &mut ud, &mut scratch);
            for (i, c) in rhs.iter_mut().enumerate() {
                let minus_one = if i == 0 { p - 1 } else { 0 };
                *c = (minus_one + p - ud[i]) % p;
            }
            total += raw_power_residue_count(&spec, q, d, &rhs, &mut out, &mut scratch);
        }
        total
    });
    let infinity = singular_place_count(d, &spec)?;
    guard(affine + infinity, q, curve.genus)
}

/// `Σ_{x ∉ exclude} #{y : y^m = f(x)}` over the given field.
pub fn count_superelliptic_affine(
    model: &SuperellipticCurve,
    spec: &FieldSpec,
    exclude: &[FieldElement],
) -> Result<u64, CountError> {
    let q = spec.order()?;
    let p = spec.characteristic();
    let r = spec.degree();
    let mut skip = HashSet::with_capacity(exclude.len());
    for x in exclude {
        spec.check_same(x.field())?;
        skip.insert(x.index());
    }
    let pb = BigInt::from(p);
    let coeffs: Vec<u64> = model
        .f
        .iter()
        .map(|c| ((c % &pb + &pb) % &pb).to_u64().expect("reduced below p"))
        .collect();
    let total = chunked_sum(0..q, Parallelism::Parallel, |range| {
        let mut scratch = spec.scratch();
        let mut x = vec![0u64; r];
        let mut acc = vec![0u64; r];
        let mut tmp = vec![0u64; r];
        let mut wide = vec![0u64; 2 * r];
        let mut out = vec![0u64; r];
        let mut total = 0;
        for idx in range {
            if skip.contains(&idx) {
                continue;
            }
            spec.raw_from_index(idx, &mut x);
            acc.iter_mut().for_each(|c| *c = 0);
            for &c in coeffs.iter().rev() {
                spec.raw_mul(&acc, &x, &mut tmp, &mut wide);
                tmp[0] = (tmp[0] + c) % p;
                std::mem::swap(&mut acc, &mut tmp);
            }
            total += raw_power_residue_count(spec, q, model.m, &acc, &mut out, &mut scratch);
        }
        total
    });
    Ok(total)
}

struct Buffers {
    sum: Vec<u64>,
    term: Vec<u64>,
    tmp: Vec<u64>,
    wide: Vec<u64>,
}

impl Buffers {
    fn new(r: usize) -> Self {
        Buffers {
            sum: vec![0; r],
            term: vec![0; r],
            tmp: vec![0; r],
            wide: vec![0; 2 * r],
        }
    }
}

/// Projective points of `Σ c_i X^a Y^b Z^c = 0` (plane model, no
/// normalisation), by enumerating the representatives `(x:y:1)`, `(x:1:0)`
/// and `(1:0:0)`.
pub fn brute_force_projective_count(
    monomials: &[(i64, [u64; 3])],
    spec: &FieldSpec,
) -> Result<u64, CountError> {
    let q = spec.order()?;
    if q > BRUTE_FORCE_LIMIT {
        return Err(CountError::BruteForceGuard(q));
    }
    let r = spec.degree();
    let coeff: Vec<Vec<u64>> = monomials
        .iter()
        .map(|(c, _)| spec.from_int(*c).coeffs().to_vec())
        .collect();
    // power tables: powers[e][idx] = x^e
    let mut powers: HashMap<u64, Vec<Vec<u64>>> = HashMap::new();
    let mut scratch = spec.scratch();
    for (_, exps) in monomials {
        for &e in exps {
            powers.entry(e).or_insert_with(|| {
                let mut x = vec![0u64; r];
                (0..q)
                    .map(|idx| {
                        spec.raw_from_index(idx, &mut x);
                        let mut out = vec![0u64; r];
                        spec.raw_pow(&x, e, &mut out, &mut scratch);
                        out
                    })
                    .collect()
            });
        }
    }
    let tables: Vec<[&Vec<Vec<u64>>; 3]> = monomials
        .iter()
        .map(|(_, exps)| exps.map(|e| &powers[&e]))
        .collect();
    let p = spec.characteristic();
    let vanishes = |point: [u64; 3], buf: &mut Buffers| -> bool {
        buf.sum.iter_mut().for_each(|c| *c = 0);
        for (table, c) in tables.iter().zip(&coeff) {
            buf.term.copy_from_slice(c);
            for (k, powers) in table.iter().enumerate() {
                spec.raw_mul(&buf.term, &powers[point[k] as usize], &mut buf.tmp, &mut buf.wide);
                std::mem::swap(&mut buf.term, &mut buf.tmp);
            }
            for (s, t) in buf.sum.iter_mut().zip(&buf.term) {
                *s = (*s + t) % p;
            }
        }
        FieldSpec::raw_is_zero(&buf.sum)
    };
    let one = 1u64;
    let affine = chunked_sum(0..q, Parallelism::Parallel, |range| {
        let mut buf = Buffers::new(r);
        let mut total = 0;
        for x in range {
            for y in 0..q {
                if vanishes([x, y, one], &mut buf) {
                    total += 1;
                }
            }
        }
        total
    });
    let mut buf = Buffers::new(r);
    let line = (0..q).filter(|&x| vanishes([x, one, 0], &mut buf)).count() as u64;
    let last = u64::from(vanishes([one, 0, 0], &mut buf));
    Ok(affine + line + last)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_places_documented() {
        let f5 = make_field(5, 1).unwrap();
        let f25 = make_field(5, 2).unwrap();
        for d in [1, 2, 7] {
            let spec = make_field(7, 1).unwrap();
            let brute = spec.elements().unwrap().filter(|t| t.pow(d).add(&spec.one()).unwrap().is_zero()).count() as u64;
            assert_eq!(singular_place_count(d, &spec).unwrap(), brute);
        }
        assert_eq!(singular_place_count(1, &f5).unwrap(), 1);
        assert_eq!(singular_place_count(3, &f5).unwrap(), 1);
        assert_eq!(singular_place_count(3, &f25).unwrap(), 3);
    }

    #[test]
    fn hasse_weil_exact_boundary() {
        // maximal elliptic curve over F_25: 36 = 26 + 2*5
        assert!(within_hasse_weil(36, 25, 1));
        assert!(!within_hasse_weil(37, 25, 1));
        assert!(within_hasse_weil(16, 25, 1));
        assert!(!within_hasse_weil(15, 25, 1));
        assert!(within_hasse_weil(3, 2, 0) && !within_hasse_weil(4, 2, 0));
    }

    #[test]
    fn budget_is_distinct_error() {
        let cfg = CountConfig {
            budget: 1000,
            ..CountConfig::default()
        };
        assert!(matches!(
            count_hurwitz(2, 1, 5, 5, &cfg),
            Err(CountError::BudgetExceeded { .. })
        ));
        assert!(matches!(
            count_hurwitz(2, 1, 3, 1, &cfg),
            Err(CountError::BadReduction { p: 3, m: 3 })
        ));
    }

    #[test]
    fn series_rejects_out_of_bound_counts() {
        let mut series = CountSeries::new(5, CurveId::Hurwitz { n: 2, l: 1 });
        assert!(series.insert(1, 6).is_ok());
        assert!(matches!(series.insert(2, 40), Err(CountError::HasseWeil { .. })));
        assert_eq!(series.contiguous_len(), 1);
    }
}
