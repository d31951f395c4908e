//! End-to-end classification, Table-style reports, consistency scans and
//! the count cache.

pub mod cache;
mod scan;
mod table;

use std::fmt;
use std::io;

use serde::Serialize;
use thiserror::Error;

use crate::count::{count_curve, CountConfig, CountError, CountSeries};
use crate::criteria::{self, CriteriaError, SsVerdict};
use crate::curves::{CurveError, CurveId, FermatCurve, HurwitzCurve};
use crate::field::{make_field, FieldError};
use crate::zeta::{
    identify_nwn_with_bound, is_supersingular, l_polynomial_from_counts, maximality_profile,
    newton_polygon, RootOfUnity, ZetaError,
};

pub use cache::{modulus_string, CountCache, CountCacheRecord, TOOL_VERSION};
pub use scan::{scan, ScanCase, ScanEvidence, ScanOptions, ScanSummary};
pub use table::{
    candidates, compare_with_golden, golden_rows, parse_csv, render_csv, render_json, render_text, table, table_row, GoldenComparison,
    TableFailure, TableOptions, TableOutput, TableRow, GOLDEN_CSV,
};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("cache: {0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Invariant(String),
}

/// Coarse error classes, used for process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    InvalidInput,
    Budget,
    Invariant,
}

impl ReportError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            ReportError::Count(CountError::BudgetExceeded { .. } | CountError::BruteForceGuard(_)) => {
                ErrorKind::Budget
            }
            ReportError::Count(CountError::HasseWeil { .. }) => ErrorKind::Invariant,
            ReportError::Count(_) | ReportError::Criteria(_) | ReportError::Curve(_) | ReportError::Field(_) => {
                ErrorKind::InvalidInput
            }
            ReportError::Io(_) => ErrorKind::InvalidInput,
            ReportError::Zeta(_) | ReportError::Invariant(_) => ErrorKind::Invariant,
        }
    }
}

/// Point counts through an optional cache.
pub struct Counter<'a> {
    pub config: CountConfig,
    cache: Option<&'a mut CountCache>,
}

impl<'a> Counter<'a> {
    pub fn new(config: CountConfig, cache: Option<&'a mut CountCache>) -> Self {
        Counter { config, cache }
    }

    pub fn count(&mut self, curve: CurveId, p: u64, s: u32) -> Result<u64, ReportError> {
        let Some(cache) = self.cache.as_deref_mut() else {
            return Ok(count_curve(curve, p, s, &self.config)?);
        };
        self.config.field_size(p, s)?;
        let modulus = modulus_string(make_field(p, s as usize)?.modulus());
        let id = curve.to_string();
        if let Some(n) = cache.lookup(&id, p, s, &modulus) {
            return Ok(n);
        }
        let n = count_curve(curve, p, s, &self.config)?;
        cache.append(CountCacheRecord {
            curve: id,
            p,
            s,
            n,
            modulus,
            version: TOOL_VERSION.to_string(),
        })?;
        Ok(n)
    }

    /// `N_1..N_upto`, each passed through the Hasse-Weil guard.
    pub fn series(&mut self, curve: CurveId, p: u64, upto: u32) -> Result<CountSeries, ReportError> {
        let mut series = CountSeries::new(p, curve);
        for s in 1..=upto {
            let n = self.count(curve, p, s)?;
            series.insert(s, n)?;
        }
        Ok(series)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Also count `N_{g+1}` and check it against the functional equation.
    pub verify: bool,
    /// Largest root-of-unity order tried; `4m` when unset.
    pub max_order: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Slope {
    pub slope: String,
    pub length: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub curve: String,
    pub p: u64,
    /// `n^2 - nl + l^2` for Hurwitz curves, `d` for Fermat curves.
    pub m: u64,
    /// `gcd(n, l)`, or 1 for Fermat curves.
    pub gcd: u64,
    pub genus: u64,
    pub theory: Option<SsVerdict>,
    pub theory_note: Option<String>,
    pub counts: Vec<u64>,
    /// Coefficients `C_0..C_{2g}` as decimal strings.
    pub l_coefficients: Vec<String>,
    pub l_polynomial: String,
    pub newton_slopes: Vec<Slope>,
    pub supersingular: bool,
    pub nwn: Option<Vec<RootOfUnity>>,
    pub nwn_text: Option<String>,
    pub maximal_base: Option<u64>,
    pub minimal_period: Option<u64>,
    /// Theory and computation agree; `None` when no theory applies.
    pub agreement: Option<bool>,
}

struct CurveFacts {
    m: u64,
    gcd: u64,
    genus: u64,
}

fn facts(curve: CurveId, p: u64) -> Result<CurveFacts, ReportError> {
    if !crate::arith::is_prime(p) {
        return Err(FieldError::NotPrime(p).into());
    }
    match curve {
        CurveId::Hurwitz { n, l } => {
            let c = HurwitzCurve::new(n, l)?;
            if !c.has_good_reduction(p) {
                return Err(CountError::BadReduction { p, m: c.m }.into());
            }
            Ok(CurveFacts {
                m: c.m,
                gcd: c.d,
                genus: c.genus,
            })
        }
        CurveId::Fermat { d } => {
            let c = FermatCurve::new(d)?;
            if !c.is_smooth_over(p) {
                return Err(CountError::BadReduction { p, m: d }.into());
            }
            Ok(CurveFacts {
                m: d,
                gcd: 1,
                genus: curve.genus(),
            })
        }
    }
}

fn theory_for(curve: CurveId, p: u64) -> Result<(Option<SsVerdict>, Option<String>), ReportError> {
    match curve {
        CurveId::Hurwitz { n, l } => match criteria::hurwitz_supersingular(n, l, p) {
            Ok(v) => Ok((Some(v), None)),
            Err(e @ CriteriaError::CriterionDoesNotApply { .. }) => Ok((None, Some(e.to_string()))),
            Err(e) => Err(e.into()),
        },
        CurveId::Fermat { .. } => Ok((None, Some("no congruence criterion attached to Fermat curves".into()))),
    }
}

/// Counts, L-polynomial, Newton polygon, normalized Weil numbers and the
/// congruence verdict for one curve over `F_p`.
pub fn classify(
    curve: CurveId,
    p: u64,
    options: &ClassifyOptions,
    counter: &mut Counter<'_>,
) -> Result<ClassificationReport, ReportError> {
    let facts = facts(curve, p)?;
    let (theory, theory_note) = theory_for(curve, p)?;
    let upto = facts.genus + u64::from(options.verify);
    let series = counter.series(curve, p, upto as u32)?;
    let counts = series.prefix(upto as u32).expect("series was filled contiguously");
    let l = l_polynomial_from_counts(&counts, facts.genus, p, 1)?;
    let polygon = newton_polygon(&l);
    let supersingular = is_supersingular(&l);

    let (mut nwn, mut nwn_text, mut maximal_base, mut minimal_period) = (None, None, None, None);
    if supersingular {
        let bound = options.max_order.unwrap_or(4 * facts.m);
        let multiset = identify_nwn_with_bound(&l, bound)?;
        let profile = maximality_profile(&multiset)?;
        nwn_text = Some(multiset.to_string());
        nwn = Some(multiset.entries);
        maximal_base = profile.maximal_base;
        minimal_period = Some(profile.minimal_period);
    }

    Ok(ClassificationReport {
        curve: curve.to_string(),
        p,
        m: facts.m,
        gcd: facts.gcd,
        genus: facts.genus,
        agreement: theory.map(|t| t.supersingular == supersingular),
        theory,
        theory_note,
        counts,
        l_coefficients: l.coeffs.iter().map(ToString::to_string).collect(),
        l_polynomial: l.to_string(),
        newton_slopes: polygon
            .slopes
            .iter()
            .map(|(s, len)| Slope {
                slope: s.to_string(),
                length: *len,
            })
            .collect(),
        supersingular,
        nwn,
        nwn_text,
        maximal_base,
        minimal_period,
    })
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "curve        {} over F_{}", self.curve, self.p)?;
        writeln!(f, "m, gcd, g    {}, {}, {}", self.m, self.gcd, self.genus)?;
        let counts: Vec<String> = self.counts.iter().map(u64::to_string).collect();
        writeln!(f, "counts       {}", counts.join(", "))?;
        writeln!(f, "L(T)         {}", self.l_polynomial)?;
        let slopes: Vec<String> = self
            .newton_slopes
            .iter()
            .map(|s| format!("{} x{}", s.slope, s.length))
            .collect();
        writeln!(f, "slopes       {}", slopes.join(", "))?;
        writeln!(f, "supersingular {}", self.supersingular)?;
        if let Some(text) = &self.nwn_text {
            writeln!(f, "NWN          {text}")?;
        }
        match self.maximal_base {
            Some(b) => writeln!(f, "maximal over F_{{p^r}} for r an odd multiple of {b}")?,
            None if self.supersingular => writeln!(f, "never maximal")?,
            None => {}
        }
        if let Some(period) = self.minimal_period {
            writeln!(f, "minimal over F_{{p^r}} for {period} | r")?;
        }
        match (&self.theory, &self.theory_note) {
            (Some(t), _) => {
                let witness = t.witness_i.map_or("none".to_string(), |i| format!("i = {i}"));
                writeln!(f, "theory       supersingular={} ({witness})", t.supersingular)?;
            }
            (None, Some(note)) => writeln!(f, "theory       n/a: {note}")?,
            (None, None) => {}
        }
        match self.agreement {
            Some(true) => write!(f, "agreement    yes"),
            Some(false) => write!(f, "agreement    NO"),
            None => write!(f, "agreement    n/a"),
        }
    }
}
