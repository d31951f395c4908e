//! Plane and superelliptic models of Hurwitz and Fermat curves, the
//! Fermat-to-Hurwitz cover and the birational change of variables to
//! `y^m = x^λ (x - 1)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::One;
use thiserror::Error;

use crate::arith::{self, gcd};
use crate::field::{FieldElement, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("curve parameters must be positive (got n={n}, l={l})")]
    NonPositive { n: u64, l: u64 },
    #[error("Fermat degree must be at least 3 (got {0})")]
    FermatDegree(u64),
    #[error("the birational model needs 1 <= l < n (got n={n}, l={l})")]
    NotOrdered { n: u64, l: u64 },
    #[error("the birational model needs gcd(n, l) = 1 (got gcd({n}, {l}) = {gcd})")]
    NotCoprime { n: u64, l: u64, gcd: u64 },
    #[error("triple ({a}, {b}, {c}) does not sum to 0 mod {m}")]
    TripleSum { a: i64, b: i64, c: i64, m: u64 },
    #[error("triples have different moduli ({0} vs {1})")]
    ModulusMismatch(u64, u64),
    #[error("modulus must be at least 2")]
    SmallModulus,
    #[error("map is undefined at a point with a zero coordinate")]
    ZeroCoordinate,
    #[error("unrecognised curve identifier {0:?}")]
    BadIdentifier(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `(n^2 - n l + l^2 + 2 - 3 gcd(n, l)) / 2`.
pub fn hurwitz_genus(n: u64, l: u64) -> u64 {
    let m = n * n + l * l - n * l;
    let numerator = m + 2 - 3 * gcd(n, l);
    debug_assert!(numerator.is_multiple_of(2), "genus numerator must be even");
    numerator / 2
}

/// `H_{n,l}: X^n Y^l + Y^n Z^l + Z^n X^l = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HurwitzCurve {
    pub n: u64,
    pub l: u64,
    /// `n^2 - n l + l^2`
    pub m: u64,
    /// `gcd(n, l)`
    pub d: u64,
    pub genus: u64,
}

impl HurwitzCurve {
    pub fn new(n: u64, l: u64) -> Result<Self, CurveError> {
        if n == 0 || l == 0 {
            return Err(CurveError::NonPositive { n, l });
        }
        let m = n * n + l * l - n * l;
        let d = gcd(n, l);
        debug_assert_eq!(m % (d * d), 0);
        Ok(HurwitzCurve {
            n,
            l,
            m,
            d,
            genus: hurwitz_genus(n, l),
        })
    }

    pub fn is_coprime(&self) -> bool {
        self.d == 1
    }

    /// Smooth-model theory applies when `p` does not divide `m`.
    pub fn has_good_reduction(&self, p: u64) -> bool {
        !self.m.is_multiple_of(p)
    }

    /// Affine equation on `Z = 1`: `x^n y^l + y^n + x^l`.
    pub fn affine_eval(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let t1 = x.pow(self.n).mul_unchecked(&y.pow(self.l));
        t1.add_unchecked(&y.pow(self.n)).add_unchecked(&x.pow(self.l))
    }

    /// Monomials of the projective equation as `[X, Y, Z]` exponents.
    pub fn monomials(&self) -> Vec<[u64; 3]> {
        vec![[self.n, self.l, 0], [0, self.n, self.l], [self.l, 0, self.n]]
    }
}

/// `F_d: U^d + V^d + W^d = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FermatCurve {
    pub d: u64,
    pub genus: u64,
}

impl FermatCurve {
    pub fn new(d: u64) -> Result<Self, CurveError> {
        if d < 3 {
            return Err(CurveError::FermatDegree(d));
        }
        Ok(FermatCurve {
            d,
            genus: (d - 1) * (d - 2) / 2,
        })
    }

    pub fn is_smooth_over(&self, p: u64) -> bool {
        !self.d.is_multiple_of(p)
    }

    pub fn monomials(&self) -> Vec<[u64; 3]> {
        vec![[self.d, 0, 0], [0, self.d, 0], [0, 0, self.d]]
    }
}

/// Curve families the counting layer understands, with a stable text id
/// (`hurwitz:n:l`, `fermat:d`) used by the count cache.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveId {
    Hurwitz { n: u64, l: u64 },
    Fermat { d: u64 },
}

impl CurveId {
    pub fn genus(&self) -> u64 {
        match *self {
            CurveId::Hurwitz { n, l } => hurwitz_genus(n, l),
            CurveId::Fermat { d } => (d - 1) * (d - 2) / 2,
        }
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveId::Hurwitz { n, l } => write!(f, "hurwitz:{n}:{l}"),
            CurveId::Fermat { d } => write!(f, "fermat:{d}"),
        }
    }
}

impl FromStr for CurveId {
    type Err = CurveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CurveError::BadIdentifier(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
        match parts.as_slice() {
            ["hurwitz", n, l] => {
                let c = HurwitzCurve::new(num(n)?, num(l)?)?;
                Ok(CurveId::Hurwitz { n: c.n, l: c.l })
            }
            ["fermat", d] => {
                let c = FermatCurve::new(num(d)?)?;
                Ok(CurveId::Fermat { d: c.d })
            }
            _ => Err(bad()),
        }
    }
}

/// `y^m = f(x)` with integer coefficients (constant term first), reduced
/// into whichever field the curve is counted over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperellipticCurve {
    pub m: u64,
    pub f: Vec<BigInt>,
}

impl SuperellipticCurve {
    pub fn new(m: u64, f: Vec<BigInt>) -> Result<Self, CurveError> {
        if m == 0 {
            return Err(CurveError::SmallModulus);
        }
        let mut f = f;
        while f.last().is_some_and(|c| c == &BigInt::from(0)) {
            f.pop();
        }
        if f.is_empty() {
            return Err(CurveError::BadIdentifier("zero right-hand side".into()));
        }
        Ok(SuperellipticCurve { m, f })
    }

    /// `y^m = x^λ (x - 1)`.
    pub fn carbonne(params: &CarbonneParams) -> Self {
        let lambda = params.lambda as usize;
        let mut f = vec![BigInt::from(0); lambda + 2];
        f[lambda] = BigInt::from(-1);
        f[lambda + 1] = BigInt::one();
        SuperellipticCurve { m: params.m, f }
    }

    /// Aoki's `D_α: v^m = (-1)^c u^a (1 - u)^b`, expanded.
    pub fn aoki(alpha: &Triple) -> Self {
        let (a, b, c) = (alpha.a as usize, alpha.b as usize, alpha.c);
        let sign = if c % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let mut f = vec![BigInt::from(0); a + b + 1];
        for k in 0..=b {
            let term = binomial(BigInt::from(b), BigInt::from(k));
            f[a + k] = if k % 2 == 0 { &sign * term } else { -(&sign * term) };
        }
        SuperellipticCurve { m: alpha.m, f }
    }

    /// Right-hand side evaluated at a field element.
    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let field = x.field();
        let p = BigInt::from(field.characteristic());
        self.f.iter().rev().fold(field.zero(), |acc, c| {
            let r: BigInt = ((c % &p) + &p) % &p;
            let c = field.from_int(i64::try_from(r).expect("reduced below p"));
            acc.mul_unchecked(x).add_unchecked(&c)
        })
    }
}

/// The integers `θ, δ` with `nθ - δl = 1`, `1 <= θ <= l`, `1 <= δ <= n-1`,
/// and `λ = δn - θ(n - l)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CarbonneParams {
    pub n: u64,
    pub l: u64,
    pub theta: i64,
    pub delta: i64,
    pub lambda: i64,
    pub m: u64,
}

pub fn carbonne_params(n: u64, l: u64) -> Result<CarbonneParams, CurveError> {
    if n == 0 || l == 0 {
        return Err(CurveError::NonPositive { n, l });
    }
    if l >= n {
        return Err(CurveError::NotOrdered { n, l });
    }
    let g = gcd(n, l);
    if g != 1 {
        return Err(CurveError::NotCoprime { n, l, gcd: g });
    }
    let (ni, li) = (n as i64, l as i64);
    // θ ≡ n^{-1} (mod l), lifted into 1..=l
    let (_, inv, _) = arith::ext_gcd(ni, li);
    let mut theta = inv.rem_euclid(li);
    if theta == 0 {
        theta = li;
    }
    let delta = (ni * theta - 1) / li;
    debug_assert_eq!(ni * theta - delta * li, 1);
    let lambda = delta * ni - theta * (ni - li);
    Ok(CarbonneParams {
        n,
        l,
        theta,
        delta,
        lambda,
        m: n * n + l * l - n * l,
    })
}

impl CarbonneParams {
    /// The same exponent written as `δ(n - l) + lθ - 1`.
    pub fn lambda_alternate(&self) -> i64 {
        let (n, l) = (self.n as i64, self.l as i64);
        self.delta * (n - l) + l * self.theta - 1
    }
}

/// Residues `(a, b, c)` modulo `m` with `a + b + c ≡ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Triple {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub m: u64,
}

impl Triple {
    pub fn new(a: i64, b: i64, c: i64, m: u64) -> Result<Self, CurveError> {
        if m < 2 {
            return Err(CurveError::SmallModulus);
        }
        let mi = m as i64;
        if (a + b + c).rem_euclid(mi) != 0 {
            return Err(CurveError::TripleSum { a, b, c, m });
        }
        Ok(Triple {
            a: a.rem_euclid(mi) as u64,
            b: b.rem_euclid(mi) as u64,
            c: c.rem_euclid(mi) as u64,
            m,
        })
    }

    pub fn as_array(&self) -> [u64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn scale(&self, t: u64) -> Triple {
        let m = self.m as u128;
        let s = |x: u64| (x as u128 * t as u128 % m) as u64;
        Triple {
            a: s(self.a),
            b: s(self.b),
            c: s(self.c),
            m: self.m,
        }
    }

    /// The six coordinate permutations.
    pub fn permutations(&self) -> [Triple; 6] {
        let [a, b, c] = self.as_array();
        let m = self.m;
        [
            [a, b, c],
            [a, c, b],
            [b, a, c],
            [b, c, a],
            [c, a, b],
            [c, b, a],
        ]
        .map(|[a, b, c]| Triple { a, b, c, m })
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}) mod {}", self.a, self.b, self.c, self.m)
    }
}

/// `(λ, 1, m - λ - 1)` for the birational model of `H_{n,l}`.
pub fn aoki_triple(n: u64, l: u64) -> Result<Triple, CurveError> {
    let params = carbonne_params(n, l)?;
    let m = params.m as i64;
    let a = params.lambda.rem_euclid(m);
    Triple::new(a, 1, m - a - 1, params.m)
}

/// `α ≈ β`: some unit `t` and permutation `σ` give `α ≡ t·β^σ (mod m)`.
pub fn triple_equivalent(alpha: &Triple, beta: &Triple) -> Result<bool, CurveError> {
    if alpha.m != beta.m {
        return Err(CurveError::ModulusMismatch(alpha.m, beta.m));
    }
    let m = alpha.m;
    Ok((1..m).filter(|&t| gcd(t, m) == 1).any(|t| {
        beta.permutations()
            .iter()
            .any(|perm| perm.scale(t) == *alpha)
    }))
}

/// `(u, v) ↦ (u^n v^{-l}, u^l v^{n-l})` from `u^m + v^m + 1 = 0` onto the
/// affine Hurwitz equation.
pub fn cover_map(
    u: &FieldElement,
    v: &FieldElement,
    n: u64,
    l: u64,
) -> Result<(FieldElement, FieldElement), CurveError> {
    if u.is_zero() || v.is_zero() {
        return Err(CurveError::ZeroCoordinate);
    }
    let (n, l) = (n as i64, l as i64);
    let x = u.pow_signed(n)?.mul(&v.pow_signed(-l)?)?;
    let y = u.pow_signed(l)?.mul(&v.pow_signed(n - l)?)?;
    Ok((x, y))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    HurwitzToSuperelliptic,
    SuperellipticToHurwitz,
}

/// The change of variables between `x^n y^l + y^n + x^l = 0` and
/// `y'^m = x'^λ (x' - 1)`.
pub fn birational_maps(
    point: (&FieldElement, &FieldElement),
    direction: Direction,
    params: &CarbonneParams,
) -> Result<(FieldElement, FieldElement), CurveError> {
    let (x, y) = point;
    if x.is_zero() || y.is_zero() {
        return Err(CurveError::ZeroCoordinate);
    }
    let (n, l) = (params.n as i64, params.l as i64);
    let sign = |e: &FieldElement| if params.lambda % 2 == 0 { e.clone() } else { e.neg() };
    match direction {
        Direction::HurwitzToSuperelliptic => {
            let xp = x.pow_signed(l)?.mul(&y.pow_signed(-n)?)?.neg();
            let yp = sign(&x.pow_signed(params.theta)?.mul(&y.pow_signed(-params.delta)?)?);
            Ok((xp, yp))
        }
        Direction::SuperellipticToHurwitz => {
            let minus_x = x.neg();
            let signed_y = sign(y);
            let xh = minus_x
                .pow_signed(-params.delta)?
                .mul(&signed_y.pow_signed(n)?)?;
            let yh = minus_x
                .pow_signed(-params.theta)?
                .mul(&signed_y.pow_signed(l)?)?;
            Ok((xh, yh))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use proptest::prelude::*;

    #[test]
    fn genus_examples() {
        assert_eq!(hurwitz_genus(2, 1), 1);
        assert_eq!(hurwitz_genus(4, 2), 4);
        assert_eq!(hurwitz_genus(5, 5), 6);
        assert_eq!(FermatCurve::new(9).unwrap().genus, 28);
    }

    #[test]
    fn carbonne_examples() {
        let c = carbonne_params(3, 2).unwrap();
        assert_eq!((c.theta, c.delta, c.lambda, c.m), (1, 1, 2, 7));
        let c = carbonne_params(2, 1).unwrap();
        assert_eq!((c.theta, c.delta, c.lambda, c.m), (1, 1, 1, 3));
        let c = carbonne_params(3, 1).unwrap();
        assert_eq!((c.theta, c.delta, c.lambda, c.m), (1, 2, 4, 7));
        assert!(matches!(carbonne_params(4, 2), Err(CurveError::NotCoprime { .. })));
        assert!(matches!(carbonne_params(2, 3), Err(CurveError::NotOrdered { .. })));
        assert!(matches!(carbonne_params(3, 3), Err(CurveError::NotOrdered { .. })));
    }

    #[test]
    fn carbonne_model_coefficients() {
        let model = SuperellipticCurve::carbonne(&carbonne_params(3, 2).unwrap());
        assert_eq!(model.m, 7);
        let expect: Vec<BigInt> = [0, 0, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(model.f, expect);
    }

    #[test]
    fn aoki_triples() {
        assert_eq!(aoki_triple(3, 2).unwrap().as_array(), [2, 1, 4]);
        assert_eq!(aoki_triple(2, 1).unwrap().as_array(), [1, 1, 1]);
        assert_eq!(aoki_triple(3, 1).unwrap().as_array(), [4, 1, 2]);
    }

    #[test]
    fn triple_equivalence_examples() {
        let t = |a, b, c, m| Triple::new(a, b, c, m).unwrap();
        assert!(triple_equivalent(&t(1, 2, 4, 7), &t(2, 4, 1, 7)).unwrap());
        assert!(triple_equivalent(&t(1, 2, 4, 7), &t(2, 4, 8, 7)).unwrap());
        assert!(!triple_equivalent(&t(1, 1, 1, 3), &t(1, 2, 3, 3)).unwrap());
        assert!(matches!(
            triple_equivalent(&t(1, 2, 4, 7), &t(1, 1, 1, 3)),
            Err(CurveError::ModulusMismatch(7, 3))
        ));
        assert!(matches!(Triple::new(1, 1, 2, 7), Err(CurveError::TripleSum { .. })));
    }

    #[test]
    fn cover_map_example() {
        let f5 = make_field(5, 1).unwrap();
        let (x, y) = cover_map(&f5.from_int(1), &f5.from_int(2), 2, 1).unwrap();
        assert_eq!((x.coeffs()[0], y.coeffs()[0]), (3, 2));
        let h = HurwitzCurve::new(2, 1).unwrap();
        assert!(h.affine_eval(&x, &y).is_zero());
        assert_eq!(
            cover_map(&f5.zero(), &f5.one(), 2, 1),
            Err(CurveError::ZeroCoordinate)
        );
    }

    #[test]
    fn cover_map_with_unit_v() {
        let f = make_field(7, 2).unwrap();
        let minus_two = f.from_int(-2);
        let (n, l) = (3u64, 1u64);
        let m = 7;
        for u in f.elements().unwrap().filter(|u| u.pow(m) == minus_two) {
            let (x, y) = cover_map(&u, &f.one(), n, l).unwrap();
            assert_eq!((x, y), (u.pow(n), u.pow(l)));
        }
    }

    /// Every Fermat point with nonzero affine coordinates lands on the Hurwitz curve.
    #[test]
    fn cover_image_on_hurwitz_exhaustive() {
        for (n, l) in [(2u64, 1u64), (3, 1), (3, 2), (3, 3), (4, 2)] {
            let h = HurwitzCurve::new(n, l).unwrap();
            for (p, r) in [(7u64, 1usize), (5, 2), (11, 2), (2, 3), (13, 1)] {
                let f = make_field(p, r).unwrap();
                if f.order().unwrap() > 121 {
                    continue;
                }
                let minus_one = f.from_int(-1);
                let units: Vec<_> = f.elements().unwrap().filter(|e| !e.is_zero()).collect();
                for u in &units {
                    for v in &units {
                        if u.pow(h.m).add(&v.pow(h.m)).unwrap() != minus_one {
                            continue;
                        }
                        let (x, y) = cover_map(u, v, n, l).unwrap();
                        assert!(h.affine_eval(&x, &y).is_zero(), "n={n} l={l} q={p}^{r}");
                    }
                }
            }
        }
    }

    #[test]
    fn birational_example() {
        let f5 = make_field(5, 1).unwrap();
        let params = carbonne_params(2, 1).unwrap();
        let (xp, yp) = birational_maps(
            (&f5.from_int(3), &f5.from_int(2)),
            Direction::HurwitzToSuperelliptic,
            &params,
        )
        .unwrap();
        assert_eq!((xp.coeffs()[0], yp.coeffs()[0]), (3, 1));
        let model = SuperellipticCurve::carbonne(&params);
        assert_eq!(yp.pow(model.m), model.eval(&xp));
    }

    #[test]
    fn birational_round_trip_h32_f13() {
        let f = make_field(13, 1).unwrap();
        let h = HurwitzCurve::new(3, 2).unwrap();
        let params = carbonne_params(3, 2).unwrap();
        let model = SuperellipticCurve::carbonne(&params);
        let mut seen = 0;
        for x in f.elements().unwrap().filter(|e| !e.is_zero()) {
            for y in f.elements().unwrap().filter(|e| !e.is_zero()) {
                if !h.affine_eval(&x, &y).is_zero() {
                    continue;
                }
                let (xp, yp) =
                    birational_maps((&x, &y), Direction::HurwitzToSuperelliptic, &params).unwrap();
                assert_eq!(yp.pow(model.m), model.eval(&xp));
                let back =
                    birational_maps((&xp, &yp), Direction::SuperellipticToHurwitz, &params).unwrap();
                assert_eq!(back, (x.clone(), y.clone()));
                seen += 1;
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn curve_ids_parse() {
        assert_eq!("hurwitz:5:5".parse::<CurveId>().unwrap(), CurveId::Hurwitz { n: 5, l: 5 });
        assert_eq!("fermat:9".parse::<CurveId>().unwrap().to_string(), "fermat:9");
        assert!("fermat:2".parse::<CurveId>().is_err());
        assert!("elliptic:1".parse::<CurveId>().is_err());
    }

    fn coprime_pair() -> impl Strategy<Value = (u64, u64)> {
        (1u64..40, 1u64..40).prop_filter("coprime", |&(n, l)| gcd(n, l) == 1)
    }

    proptest! {
        #[test]
        fn genus_formula_consistent(n in 1u64..60, l in 1u64..60) {
            let h = HurwitzCurve::new(n, l).unwrap();
            prop_assert_eq!((h.m + 2 - 3 * h.d) % 2, 0);
            prop_assert_eq!(h.m % (h.d * h.d), 0);
            prop_assert_eq!(hurwitz_genus(n, l), hurwitz_genus(l, n));
        }

        #[test]
        fn coprime_pairs_have_odd_m_prime_to_n_and_l((n, l) in coprime_pair()) {
            let m = n * n + l * l - n * l;
            prop_assert_eq!(m % 2, 1);
            prop_assert_eq!(gcd(n, m), 1);
            prop_assert_eq!(gcd(l, m), 1);
            prop_assert_eq!(hurwitz_genus(n, l), (m - 1) / 2);
        }

        #[test]
        fn carbonne_invariants((n, l) in coprime_pair()) {
            let (n, l) = (n.max(l), n.min(l));
            prop_assume!(l < n);
            let c = carbonne_params(n, l).unwrap();
            prop_assert!(1 <= c.theta && c.theta <= l as i64);
            prop_assert!(1 <= c.delta && c.delta < n as i64);
            prop_assert_eq!(n as i64 * c.theta - c.delta * l as i64, 1);
            prop_assert_eq!(c.lambda, c.lambda_alternate());
            let t = aoki_triple(n, l).unwrap();
            prop_assert_eq!(t.a + t.b + t.c, t.m);
        }

        #[test]
        fn triple_equivalence_is_an_equivalence(
            m in 3u64..30,
            xs in proptest::collection::vec((0i64..30, 0i64..30, 1u64..30), 3),
        ) {
            let triples: Vec<Triple> = xs
                .iter()
                .map(|&(a, b, t)| Triple::new(a, b, -a - b, m).unwrap().scale(t % m))
                .collect();
            let (x, y, z) = (&triples[0], &triples[1], &triples[2]);
            prop_assert!(triple_equivalent(x, x).unwrap());
            prop_assert_eq!(triple_equivalent(x, y).unwrap(), triple_equivalent(y, x).unwrap());
            if triple_equivalent(x, y).unwrap() && triple_equivalent(y, z).unwrap() {
                prop_assert!(triple_equivalent(x, z).unwrap());
            }
            // a scaled permutation is always equivalent
            let unit = (1..m).find(|&t| gcd(t, m) == 1 && t > 1).unwrap_or(1);
            prop_assert!(triple_equivalent(x, &x.permutations()[3].scale(unit)).unwrap());
        }
    }
}
