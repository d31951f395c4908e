//! Batch comparison of the congruence criterion with computed Newton
//! polygons.
//!
//! A case is decided by exact evidence only: the full L-polynomial when
//! `p^g` fits the budget, otherwise a certificate read off a prefix of
//! counts. If every reciprocal root has slope 1/2 then `v_p(P_s) >= s/2`
//! and `v_p(C_s) >= s/2`, so a smaller valuation proves the curve is not
//! supersingular; a maximal or minimal count over `F_{p^{2j}}` forces every
//! `α^{2j} = ∓p^j` and proves it is.

use num_bigint::BigInt;
use serde::Serialize;

use super::{Counter, ReportError};
use crate::arith::{self, gcd, primes_below};
use crate::criteria::{self, SsVerdict};
use crate::curves::{CurveId, HurwitzCurve};
use crate::zeta::{
    is_maximal_count, is_minimal_count, is_supersingular, l_polynomial_from_counts, leading_coefficients,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    /// Pairs with `m = n^2 - nl + l^2 <= m_max`.
    pub m_max: u64,
    /// Primes `p < p_max`.
    pub p_max: u64,
    /// Also classify pairs with `gcd(n, l) > 1` (no theory verdict).
    pub include_non_coprime: bool,
    /// Condition-2 exclusion is checked for coprime `l < n <= condition2_n_max`.
    pub condition2_n_max: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            m_max: 50,
            p_max: 37,
            include_non_coprime: false,
            condition2_n_max: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScanEvidence {
    /// Newton polygon of the complete L-polynomial.
    FullL { supersingular: bool },
    /// `v_p(P_s)` or `v_p(C_s)` below `s/2`.
    Valuation { s: u32, valuation: Option<u32>, power_sum: bool },
    /// `N_s` meets the upper or lower Hasse-Weil bound.
    Extremal { s: u32, maximal: bool },
    /// No certificate within the budget.
    Undecided { counted_up_to: u32 },
}

impl ScanEvidence {
    pub fn supersingular(&self) -> Option<bool> {
        match self {
            ScanEvidence::FullL { supersingular } => Some(*supersingular),
            ScanEvidence::Valuation { .. } => Some(false),
            ScanEvidence::Extremal { .. } => Some(true),
            ScanEvidence::Undecided { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanCase {
    pub n: u64,
    pub l: u64,
    pub p: u64,
    pub m: u64,
    pub genus: u64,
    /// `None` for `gcd(n, l) > 1`.
    pub theory: Option<SsVerdict>,
    pub evidence: ScanEvidence,
    pub error: Option<String>,
}

impl ScanCase {
    pub fn computed(&self) -> Option<bool> {
        self.evidence.supersingular()
    }

    pub fn disagrees(&self) -> bool {
        matches!((self.theory, self.computed()), (Some(t), Some(c)) if t.supersingular != c)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub cases: Vec<ScanCase>,
    pub agreements: usize,
    pub disagreements: Vec<(u64, u64, u64)>,
    pub undecided: Vec<(u64, u64, u64)>,
    pub computed_only: usize,
    pub errors: Vec<(u64, u64, u64)>,
    pub condition2_checked: usize,
    /// `(n, l, p, i, d, j)` witnesses, expected empty.
    pub condition2_witnesses: Vec<(u64, u64, u64, u64, u64, u64)>,
}

impl ScanSummary {
    /// Smallest disagreeing case by `(m, p)`.
    pub fn minimal_counterexample(&self) -> Option<&ScanCase> {
        self.cases
            .iter()
            .filter(|c| c.disagrees())
            .min_by_key(|c| (c.m, c.p, c.n, c.l))
    }

    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty() && self.condition2_witnesses.is_empty()
    }
}

/// `(n, l)` with `1 <= l < n` (and `l = n` for non-coprime pairs), `m <= m_max`,
/// positive genus.
pub fn scan_pairs(options: &ScanOptions) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut n = 2u64;
    // m >= 3n^2 / 4
    while 3 * n * n <= 4 * options.m_max {
        for l in 1..=n {
            let m = n * n + l * l - n * l;
            let coprime = gcd(n, l) == 1;
            if m > options.m_max || (coprime && l == n) || (!coprime && !options.include_non_coprime) {
                continue;
            }
            if crate::curves::hurwitz_genus(n, l) > 0 {
                out.push((n, l));
            }
        }
        n += 1;
    }
    out
}

fn certify(curve: &HurwitzCurve, p: u64, counter: &mut Counter<'_>) -> Result<ScanEvidence, ReportError> {
    let id = CurveId::Hurwitz { n: curve.n, l: curve.l };
    let g = curve.genus;
    let budget = counter.config.budget;
    let fits = |s: u32| arith::checked_pow(p, s).is_some_and(|q| q <= budget);
    if fits(g as u32) {
        let counts = counter.series(id, p, g as u32)?.prefix(g as u32).expect("contiguous");
        let l = l_polynomial_from_counts(&counts, g, p, 1)?;
        return Ok(ScanEvidence::FullL {
            supersingular: is_supersingular(&l),
        });
    }
    let mut counts = Vec::new();
    let mut s = 0u32;
    while fits(s + 1) {
        s += 1;
        let n = counter.count(id, p, s)?;
        counts.push(n);
        let q = arith::big_pow(p, s);
        let n_big = BigInt::from(n);
        let power_sum = &q + 1u32 - &n_big;
        let below_half = |v: Option<u32>| v.is_some_and(|v| 2 * v < s);
        let v_power = arith::valuation(&power_sum, p);
        if below_half(v_power) {
            return Ok(ScanEvidence::Valuation {
                s,
                valuation: v_power,
                power_sum: true,
            });
        }
        let c = leading_coefficients(&counts, p, 1, u64::from(s))?;
        let v_coeff = arith::valuation(&c[s as usize], p);
        if below_half(v_coeff) {
            return Ok(ScanEvidence::Valuation {
                s,
                valuation: v_coeff,
                power_sum: false,
            });
        }
        if s.is_multiple_of(2) {
            if is_maximal_count(&n_big, &q, g) {
                return Ok(ScanEvidence::Extremal { s, maximal: true });
            }
            if is_minimal_count(&n_big, &q, g) {
                return Ok(ScanEvidence::Extremal { s, maximal: false });
            }
        }
    }
    Ok(ScanEvidence::Undecided { counted_up_to: s })
}

/// Theory against computation over the configured range, followed by the
/// condition-2 exclusion check.
pub fn scan(options: &ScanOptions, counter: &mut Counter<'_>) -> ScanSummary {
    let mut summary = ScanSummary::default();
    let primes = primes_below(options.p_max);
    for (n, l) in scan_pairs(options) {
        let curve = HurwitzCurve::new(n, l).expect("positive parameters");
        for &p in primes.iter().filter(|&&p| !curve.m.is_multiple_of(p)) {
            let theory = if curve.d == 1 {
                Some(criteria::hurwitz_supersingular(n, l, p).expect("coprime, good reduction"))
            } else {
                None
            };
            let (evidence, error) = match certify(&curve, p, counter) {
                Ok(e) => (e, None),
                Err(err) => (ScanEvidence::Undecided { counted_up_to: 0 }, Some(err.to_string())),
            };
            let case = ScanCase {
                n,
                l,
                p,
                m: curve.m,
                genus: curve.genus,
                theory,
                evidence,
                error,
            };
            let key = (n, l, p);
            if case.error.is_some() {
                summary.errors.push(key);
            }
            match (case.theory, case.computed()) {
                (None, _) => summary.computed_only += 1,
                (Some(_), None) => summary.undecided.push(key),
                (Some(t), Some(c)) if t.supersingular == c => summary.agreements += 1,
                (Some(_), Some(_)) => summary.disagreements.push(key),
            }
            log::info!("scan ({n},{l}) p={p}: {:?}", case.evidence);
            summary.cases.push(case);
        }
    }

    for n in 2..=options.condition2_n_max {
        for l in (1..n).filter(|&l| gcd(n, l) == 1) {
            let m = n * n + l * l - n * l;
            for &p in primes.iter().filter(|&&p| m % p != 0) {
                summary.condition2_checked += 1;
                let alpha = crate::curves::aoki_triple(n, l).expect("coprime pair");
                if let Some((i, d, j)) = criteria::aoki_condition2(&alpha, p).expect("p is a unit mod m") {
                    summary.condition2_witnesses.push((n, l, p, i, d, j));
                }
            }
        }
    }
    summary
}
