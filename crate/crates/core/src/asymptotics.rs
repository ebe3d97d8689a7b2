//! Stable norms, growth series and the exponential-growth inequality chain
//! under negative curvature.

use rayon::prelude::*;

use crate::ball::{norm_targeted_with_budget, BallTable, KernelSpec, DEFAULT_ELEMENT_BUDGET};
use crate::curvature::{filtered_table, sphere_numerators};
use crate::error::{CurvError, Result};
use crate::group::{Element, GroupSpec};
use crate::rational::Rational;

/// Smallest `n_max` for which a distortion verdict is offered.
pub const MIN_SAMPLES_FOR_VERDICT: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StableVerdict {
    DistortionSuspected,
    UndistortedCertified,
    Inconclusive,
}

impl StableVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            StableVerdict::DistortionSuspected => "distortion-suspected",
            StableVerdict::UndistortedCertified => "undistorted-certified",
            StableVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StableNormEstimate {
    pub element: Element,
    pub norm: u32,
    /// `(n, |xⁿ|)`; `None` when the search gave up.
    pub samples: Vec<(u32, Option<u32>)>,
    /// `min_n |xⁿ|/n` over the available samples.
    pub upper: Option<Rational>,
    /// `‖ab(x)‖₁ / max_s ‖ab(s)‖₁`, or 0.
    pub lower: Rational,
    /// Least-squares slope of `log|xⁿ|` against `log n` over the top three
    /// quarters of the samples; about 1 for undistorted elements.
    pub growth_exponent: Option<f64>,
    /// Sampled pairs with `|x^{m+n}| > |x^m| + |x^n|`.
    pub subadditivity_violations: Vec<(u32, u32)>,
    pub verdict: StableVerdict,
}

impl StableNormEstimate {
    pub fn missing(&self) -> usize {
        self.samples.iter().filter(|s| s.1.is_none()).count()
    }
}

pub fn stable_norm(spec: &GroupSpec, x: &Element, n_max: u32, limit: u32) -> Result<StableNormEstimate> {
    stable_norm_with_budget(spec, x, n_max, limit, DEFAULT_ELEMENT_BUDGET)
}

pub fn stable_norm_with_budget(
    spec: &GroupSpec,
    x: &Element,
    n_max: u32,
    limit: u32,
    budget: usize,
) -> Result<StableNormEstimate> {
    if n_max == 0 {
        return Err(CurvError::Precondition("n_max must be at least 1".into()));
    }
    let powers = (1..=n_max)
        .map(|n| spec.family().power(x, n as i64))
        .collect::<Result<Vec<_>>>()?;
    let samples: Vec<(u32, Option<u32>)> = powers
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let n = i as u32 + 1;
            match norm_targeted_with_budget(spec, p, limit, budget) {
                Ok(v) => Ok((n, Some(v))),
                Err(CurvError::NormExceedsLimit { .. } | CurvError::ResourceCap { .. }) => Ok((n, None)),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let norm = match samples[0].1 {
        Some(v) => v,
        None => norm_targeted_with_budget(spec, x, limit.max(1), budget)?,
    };

    let upper = samples
        .iter()
        .filter_map(|&(n, v)| v.map(|v| Rational::new(v as i64, n as i64)))
        .min();
    let lower = abelian_lower_bound(spec, x);
    if let Some(u) = upper {
        if lower > u {
            return Err(CurvError::InvariantBreach(format!(
                "stable-norm lower bound {lower} exceeds sampled upper bound {u}"
            )));
        }
    }

    let value = |n: u32| samples[n as usize - 1].1;
    let mut subadditivity_violations = Vec::new();
    for m in 1..=n_max {
        for n in m..=n_max - m {
            if let (Some(a), Some(b), Some(c)) = (value(m), value(n), value(m + n)) {
                if c > a + b {
                    subadditivity_violations.push((m, n));
                }
            }
        }
    }

    let growth_exponent = log_log_slope(&samples, n_max / 4);
    let verdict = if lower.is_positive() {
        StableVerdict::UndistortedCertified
    } else if n_max >= MIN_SAMPLES_FOR_VERDICT
        && (upper.is_some_and(|u| u < Rational::new(norm as i64, 10))
            || growth_exponent.is_some_and(|g| g < 0.75))
    {
        StableVerdict::DistortionSuspected
    } else {
        StableVerdict::Inconclusive
    };

    Ok(StableNormEstimate {
        element: x.clone(),
        norm,
        samples,
        upper,
        lower,
        growth_exponent,
        subadditivity_violations,
        verdict,
    })
}

fn log_log_slope(samples: &[(u32, Option<u32>)], from: u32) -> Option<f64> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(n, _)| *n >= from.max(1))
        .filter_map(|&(n, v)| match v {
            // a trivial power means torsion: no growth at all
            Some(0) => Some(((n as f64).ln(), f64::NEG_INFINITY)),
            Some(v) => Some(((n as f64).ln(), (v as f64).ln())),
            None => None,
        })
        .collect();
    if pts.iter().any(|p| p.1 == f64::NEG_INFINITY) {
        return Some(0.0);
    }
    least_squares_slope(&pts)
}

fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Rigorous lower bound `‖ab(x)‖₁ / max_s ‖ab(s)‖₁` for the stable norm.
pub fn abelian_lower_bound(spec: &GroupSpec, x: &Element) -> Rational {
    let fam = spec.family();
    let l1 = |g: &Element| fam.abelianization(g).map(|v| v.iter().map(|c| c.abs()).sum::<i64>());
    let Some(top) = l1(x) else { return Rational::zero() };
    let scale = spec.generators().iter().filter_map(l1).max().unwrap_or(0);
    if top == 0 || scale == 0 {
        return Rational::zero();
    }
    Rational::new(top, scale)
}

/// One instance of `2|S|(|B_N(n)| − |B_N(n−2)|) ≥ |A_N(r_κ, n−1)|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCheck {
    pub n: u32,
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub radius: u32,
    pub ball_sizes: Vec<u64>,
    pub filtered: bool,
    /// Diagnostic only.
    pub fitted_base: Option<f64>,
    /// `1 + 1/(2|S|)`, the square of the guaranteed base.
    pub guaranteed_base_squared: Rational,
    pub guaranteed_base: f64,
    /// Least `r` with κ < 0 on every listed element of norm in `(r, R]`.
    pub r_kappa: Option<u32>,
    pub chain: Vec<ChainCheck>,
}

impl GrowthReport {
    pub fn chain_holds(&self) -> Option<bool> {
        self.r_kappa.map(|_| self.chain.iter().all(|c| c.holds))
    }
}

fn guaranteed(order: usize) -> (Rational, f64) {
    let sq = Rational::from_integer(1) + Rational::new(1, 2 * order as i64);
    (sq, sq.to_f64().sqrt())
}

fn fitted_base(sizes: &[u64]) -> Option<f64> {
    let r = sizes.len() as u32 - 1;
    let pts: Vec<(f64, f64)> =
        (r / 2..=r).map(|n| (n as f64, (sizes[n as usize] as f64).ln())).collect();
    least_squares_slope(&pts).map(f64::exp)
}

/// Per sphere `1..=radius`: whether every listed element has κ < 0.
fn negative_spheres(table: &BallTable, radius: u32) -> Result<Vec<bool>> {
    (1..=radius)
        .into_par_iter()
        .map(|n| Ok(sphere_numerators(table, n)?.iter().all(|&k| k < 0)))
        .collect()
}

fn chain_checks(table: &BallTable, r_kappa: u32, radius: u32) -> Vec<ChainCheck> {
    let order = table.spec().generators().len() as u64;
    let b = |n: u32| table.ball_size(n) as u64;
    (r_kappa + 6..=radius)
        .map(|n| {
            let lhs = 2 * order * (b(n) - b(n - 2));
            let rhs = b(n - 1) - b(r_kappa);
            ChainCheck { n, lhs, rhs, holds: lhs >= rhs }
        })
        .collect()
}

pub fn growth_series(spec: &GroupSpec, radius: u32, filter: Option<&KernelSpec>) -> Result<GrowthReport> {
    growth_series_with_budget(spec, radius, filter, DEFAULT_ELEMENT_BUDGET)
}

pub fn growth_series_with_budget(
    spec: &GroupSpec,
    radius: u32,
    filter: Option<&KernelSpec>,
    budget: usize,
) -> Result<GrowthReport> {
    if radius < 2 {
        return Err(CurvError::Precondition("growth series needs R ≥ 2".into()));
    }
    let table = filtered_table(spec, radius + 2, filter, budget)?;
    let ball_sizes: Vec<u64> = (0..=radius).map(|n| table.ball_size(n) as u64).collect();
    let negative = negative_spheres(&table, radius)?;
    // spheres r+1..=R all negative, r as small as possible
    let r_kappa = match negative.iter().rposition(|&neg| !neg) {
        None => Some(0),
        Some(i) if i + 1 < radius as usize => Some(i as u32 + 1),
        Some(_) => None,
    };
    let chain = r_kappa.map(|r| chain_checks(&table, r, radius)).unwrap_or_default();
    let (sq, base) = guaranteed(spec.generators().len());
    Ok(GrowthReport {
        radius,
        fitted_base: fitted_base(&ball_sizes),
        ball_sizes,
        filtered: filter.is_some(),
        guaranteed_base_squared: sq,
        guaranteed_base: base,
        r_kappa,
        chain,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthVerification {
    pub r_kappa: u32,
    pub radius: u32,
    pub hypothesis_holds: bool,
    /// `None` when the hypothesis fails and the chain is not checked.
    pub chain_holds: Option<bool>,
    pub checks: Vec<ChainCheck>,
    pub base_squared: Rational,
    pub base: f64,
}

pub fn verify_negative_curvature_growth(
    spec: &GroupSpec,
    filter: Option<&KernelSpec>,
    r_kappa: u32,
    radius: u32,
) -> Result<GrowthVerification> {
    verify_negative_curvature_growth_with_budget(spec, filter, r_kappa, radius, DEFAULT_ELEMENT_BUDGET)
}

pub fn verify_negative_curvature_growth_with_budget(
    spec: &GroupSpec,
    filter: Option<&KernelSpec>,
    r_kappa: u32,
    radius: u32,
    budget: usize,
) -> Result<GrowthVerification> {
    if r_kappa >= radius {
        return Err(CurvError::Precondition(format!(
            "need R_kappa < R, got {r_kappa} and {radius}"
        )));
    }
    let table = filtered_table(spec, radius + 2, filter, budget)?;
    let negative = negative_spheres(&table, radius)?;
    let hypothesis_holds = negative[r_kappa as usize..].iter().all(|&b| b);
    let (checks, chain_holds) = if hypothesis_holds {
        let c = chain_checks(&table, r_kappa, radius);
        let ok = c.iter().all(|c| c.holds);
        (c, Some(ok))
    } else {
        (Vec::new(), None)
    };
    let (base_squared, base) = guaranteed(spec.generators().len());
    Ok(GrowthVerification { r_kappa, radius, hypothesis_holds, chain_holds, checks, base_squared, base })
}
