use std::fmt;

use super::FellerError;
use crate::graph::{ball, Graph, GraphError, Sequence, SphereProfile, VertexId};
use crate::numeric::{classify_tail, TailClass, TailFit};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesVerdict {
    DivergesSuspected,
    ConvergesSuspected,
    Inconclusive,
}

impl fmt::Display for SeriesVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesVerdict::DivergesSuspected => "diverges-suspected",
            SeriesVerdict::ConvergesSuspected => "converges-suspected",
            SeriesVerdict::Inconclusive => "inconclusive",
        })
    }
}

impl From<TailClass> for SeriesVerdict {
    fn from(c: TailClass) -> Self {
        match c {
            TailClass::Diverges => SeriesVerdict::DivergesSuspected,
            TailClass::Converges => SeriesVerdict::ConvergesSuspected,
            TailClass::Inconclusive => SeriesVerdict::Inconclusive,
        }
    }
}

/// Terms of a positive series, their partial sums and a tail classification.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesReport {
    pub radii: Vec<usize>,
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub fit: TailFit,
    pub verdict: SeriesVerdict,
    pub note: Option<String>,
}

impl SeriesReport {
    pub fn from_terms(radii: Vec<usize>, terms: Vec<f64>) -> Self {
        let partial_sums = terms
            .iter()
            .scan(0.0, |acc, t| {
                *acc += t;
                Some(*acc)
            })
            .collect();
        let r: Vec<f64> = radii.iter().map(|&r| r as f64).collect();
        let fit = classify_tail(&r, &terms);
        SeriesReport { radii, terms, partial_sums, verdict: fit.class.into(), fit, note: None }
    }

    /// Exponent `p` of the fitted `c·r^(-p)` decay.
    pub fn tail_ratio(&self) -> f64 {
        self.fit.power
    }
}

/// Sphere profiles `S_1 .. S_rmax`; stops early with `None` at an empty sphere.
fn profiles(g: &dyn Graph, x0: &VertexId, rmax: usize) -> Result<(Vec<SphereProfile>, Option<usize>), FellerError> {
    if rmax < 2 {
        return Err(FellerError::InvalidParameter(format!("Rmax must be >= 2, got {rmax}")));
    }
    let b = ball(g, x0, rmax + 1)?;
    let mut out = Vec::with_capacity(rmax);
    for r in 1..=rmax {
        match crate::graph::sphere_profile_in(g, &b, r) {
            Ok(p) => out.push(p),
            Err(GraphError::EmptySphere { radius }) => return Ok((out, Some(radius))),
            Err(e) => return Err(e.into()),
        }
    }
    Ok((out, None))
}

fn series_from_profiles(
    g: &dyn Graph,
    x0: &VertexId,
    rmax: usize,
    term: impl Fn(&SphereProfile) -> f64,
) -> Result<SeriesReport, FellerError> {
    let (ps, exhausted) = profiles(g, x0, rmax)?;
    let radii = ps.iter().map(|p| p.radius).collect();
    let terms = ps.iter().map(term).collect();
    let mut report = SeriesReport::from_terms(radii, terms);
    if let Some(r) = exhausted {
        report.verdict = SeriesVerdict::DivergesSuspected;
        report.note = Some(format!("graph exhausted at radius {r}: finite graphs satisfy the Feller property"));
    }
    Ok(report)
}

/// Series `Σ_r 1/D_-(r)`; divergence implies the Feller property.
pub fn series_inner_degree(g: &dyn Graph, x0: &VertexId, rmax: usize) -> Result<SeriesReport, FellerError> {
    series_from_profiles(g, x0, rmax, |p| 1.0 / p.inner_max)
}

/// Series `Σ_r (D(r) - d_-(r) + 1)/d_-(r)`; convergence rules out the Feller
/// property.
pub fn series_nonfeller(g: &dyn Graph, x0: &VertexId, rmax: usize) -> Result<SeriesReport, FellerError> {
    series_from_profiles(g, x0, rmax, |p| (p.degree_max - p.inner_min + 1.0) / p.inner_min)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonFellerVerdict {
    NonFellerSuspected,
    CriterionFails,
    Inconclusive,
}

impl fmt::Display for NonFellerVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NonFellerVerdict::NonFellerSuspected => "non-Feller-suspected",
            NonFellerVerdict::CriterionFails => "criterion-fails",
            NonFellerVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BirthDeathReport {
    /// `Σ_r 1/b(r, r+1)`, which must diverge.
    pub conductance: SeriesReport,
    /// `Σ_r m({r, r+1, ...})/b(r, r-1)`, which must converge.
    pub tail_mass: SeriesReport,
    pub verdict: NonFellerVerdict,
}

/// Remainder `Σ_{k > K} a_k` estimated from the fitted decay of the tail.
fn remainder(fit: &TailFit, k_last: f64, a_last: f64) -> f64 {
    if fit.exponential && fit.rate > 0.0 {
        let q = (-fit.rate).exp();
        a_last * q / (1.0 - q)
    } else if fit.power > 1.0 {
        a_last * k_last / (fit.power - 1.0)
    } else {
        f64::INFINITY
    }
}

/// Non-Feller test for birth-death chains on `{0, 1, ...}`: the chain fails
/// the Feller property when `Σ 1/b(r, r+1)` diverges and
/// `Σ m({r, ...})/b(r, r-1)` converges.
///
/// Measure tails are summed up to `2·rmax` and completed by extrapolating
/// the fitted decay of `m`.
pub fn birth_death_nonfeller(b: &Sequence, m: &Sequence, rmax: usize) -> Result<BirthDeathReport, FellerError> {
    if rmax < 2 {
        return Err(FellerError::InvalidParameter(format!("Rmax must be >= 2, got {rmax}")));
    }
    let weight = |r: usize| b.positive_at(r as i64, "b(r,r+1)");
    let radii: Vec<usize> = (0..=rmax).collect();
    let inv_b = radii.iter().map(|&r| weight(r).map(|w| 1.0 / w)).collect::<Result<Vec<_>, _>>()?;
    // Shift indices by one so the power fit sees r >= 1.
    let conductance = SeriesReport::from_terms(radii.iter().map(|r| r + 1).collect(), inv_b);

    let window = 2 * rmax;
    let masses = (0..=window)
        .map(|k| m.positive_at(k as i64, "m(r)"))
        .collect::<Result<Vec<_>, _>>()?;
    let k_axis: Vec<f64> = (1..=window + 1).map(|k| k as f64).collect();
    let m_fit = classify_tail(&k_axis, &masses);
    let rest = match m_fit.class {
        TailClass::Converges => remainder(&m_fit, (window + 1) as f64, masses[window]),
        _ => f64::INFINITY,
    };
    let mut tails = vec![0.0; window + 2];
    tails[window + 1] = rest;
    for k in (0..=window).rev() {
        tails[k] = tails[k + 1] + masses[k];
    }
    let tail_radii: Vec<usize> = (1..=rmax).collect();
    let tail_terms = tail_radii
        .iter()
        .map(|&r| weight(r - 1).map(|w| tails[r] / w))
        .collect::<Result<Vec<_>, _>>()?;
    let mut tail_mass = SeriesReport::from_terms(tail_radii, tail_terms);
    if rest.is_infinite() {
        tail_mass.verdict = SeriesVerdict::DivergesSuspected;
        tail_mass.note = Some("measure tails are infinite".into());
    }
    let verdict = match (conductance.verdict, tail_mass.verdict) {
        (SeriesVerdict::DivergesSuspected, SeriesVerdict::ConvergesSuspected) => NonFellerVerdict::NonFellerSuspected,
        (SeriesVerdict::ConvergesSuspected, _) | (_, SeriesVerdict::DivergesSuspected) => NonFellerVerdict::CriterionFails,
        _ => NonFellerVerdict::Inconclusive,
    };
    Ok(BirthDeathReport { conductance, tail_mass, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{BirthDeath, Cycle, Line};

    fn v0() -> VertexId {
        VertexId::scalar(0)
    }

    fn factorial_family() -> BirthDeath {
        let m = Sequence::parse("1/fact(r)^2").unwrap();
        BirthDeath::new(m.clone(), m)
    }

    #[test]
    fn inner_degree_series() {
        let lin = BirthDeath::new(Sequence::parse("r+1").unwrap(), 1.0);
        let s = series_inner_degree(&lin, &v0(), 60).unwrap();
        for (r, t) in s.radii.iter().zip(&s.terms) {
            assert!((t - 1.0 / *r as f64).abs() < 1e-15);
        }
        assert_eq!(s.verdict, SeriesVerdict::DivergesSuspected);

        let f = series_inner_degree(&factorial_family(), &v0(), 60).unwrap();
        for (r, t) in f.radii.iter().zip(&f.terms).take(20) {
            let r = *r as f64;
            assert!((t * r * r - 1.0).abs() < 1e-9, "r={r} t={t}");
        }
        assert_eq!(f.verdict, SeriesVerdict::ConvergesSuspected);

        let z = series_inner_degree(&Line::standard(), &v0(), 40).unwrap();
        assert!(z.terms.iter().all(|&t| t == 1.0));
        assert_eq!(z.verdict, SeriesVerdict::DivergesSuspected);
    }

    #[test]
    fn nonfeller_series() {
        let f = series_nonfeller(&factorial_family(), &v0(), 60).unwrap();
        for (r, t) in f.radii.iter().zip(&f.terms).take(20) {
            let r = *r as f64;
            assert!((t - 2.0 / (r * r)).abs() < 1e-9 * t, "r={r} t={t}");
        }
        assert_eq!(f.verdict, SeriesVerdict::ConvergesSuspected);

        let z = series_nonfeller(&Line::standard(), &v0(), 40).unwrap();
        assert!(z.terms.iter().all(|&t| t == 2.0));
        assert_eq!(z.verdict, SeriesVerdict::DivergesSuspected);

        let lin = BirthDeath::new(Sequence::parse("r+1").unwrap(), 1.0);
        let s = series_nonfeller(&lin, &v0(), 60).unwrap();
        for (r, t) in s.radii.iter().zip(&s.terms) {
            let r = *r as f64;
            assert!((t - (r + 2.0) / r).abs() < 1e-12);
        }
        assert_eq!(s.verdict, SeriesVerdict::DivergesSuspected);
    }

    #[test]
    fn finite_graph_is_flagged() {
        let s = series_inner_degree(&Cycle::standard(9).unwrap(), &v0(), 10).unwrap();
        assert_eq!(s.verdict, SeriesVerdict::DivergesSuspected);
        assert!(s.note.is_some());
    }

    #[test]
    fn scale_invariance_of_verdicts() {
        let a = BirthDeath::new(Sequence::parse("1/fact(r)^2").unwrap(), Sequence::parse("1/fact(r)^2").unwrap());
        let b = BirthDeath::new(Sequence::parse("7/fact(r)^2").unwrap(), Sequence::parse("7/fact(r)^2").unwrap());
        for f in [series_inner_degree, series_nonfeller] {
            assert_eq!(f(&a, &v0(), 40).unwrap().verdict, f(&b, &v0(), 40).unwrap().verdict);
        }
    }

    #[test]
    fn birth_death_criterion() {
        let geo = birth_death_nonfeller(&Sequence::Const(1.0), &Sequence::parse("2^-r").unwrap(), 40).unwrap();
        assert_eq!(geo.verdict, NonFellerVerdict::NonFellerSuspected);
        assert!((geo.tail_mass.terms[0] - 1.0).abs() < 1e-12);

        let std = birth_death_nonfeller(&Sequence::Const(1.0), &Sequence::Const(1.0), 40).unwrap();
        assert_eq!(std.verdict, NonFellerVerdict::CriterionFails);
    }
}
