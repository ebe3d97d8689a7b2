//! Curvature κ_S, its normalisation κ̄, sign censuses and the annulus
//! cancellation identity. All arithmetic is exact.

use rayon::prelude::*;

use crate::ball::{enumerate_ball_with_budget, restrict_to_kernel, BallTable, KernelSpec};
use crate::error::{CurvError, Result};
use crate::group::{Element, GroupSpec};
use crate::rational::Rational;

/// Witnesses kept per sign per sphere unless asked otherwise.
pub const DEFAULT_WITNESSES: usize = 10;

fn conj_norm(table: &BallTable, i: usize, x: &Element) -> Result<u32> {
    let y = table.spec().conjugate_by_generator(i, x)?;
    table.norm(&y)
}

/// `|x| − |s_i x s_i⁻¹|` for the generator with index `i`.
pub fn delta_at(table: &BallTable, i: usize, x: &Element) -> Result<i64> {
    let nx = table.norm(x)?;
    Ok(nx as i64 - conj_norm(table, i, x)? as i64)
}

/// `Δ(s, x) = |x| − |s x s⁻¹|`, an integer in `[−2, 2]`.
pub fn delta(table: &BallTable, s: &Element, x: &Element) -> Result<i64> {
    let i = table.spec().generators().index_of(s).ok_or_else(|| {
        CurvError::Precondition(format!("{} is not in the generating set", table.spec().render(s)))
    })?;
    delta_at(table, i, x)
}

/// `Σ_s Δ(s, x)`, i.e. `|S|·κ(x)`.
pub fn kappa_numerator(table: &BallTable, x: &Element) -> Result<i64> {
    let nx = table.norm(x)? as i64;
    let mut sum = 0;
    for i in 0..table.spec().generators().len() {
        sum += nx - conj_norm(table, i, x)? as i64;
    }
    Ok(sum)
}

pub fn kappa(table: &BallTable, x: &Element) -> Result<Rational> {
    let k = kappa_numerator(table, x)?;
    Ok(Rational::new(k, table.spec().generators().len() as i64))
}

pub fn kappa_bar(table: &BallTable, x: &Element) -> Result<Rational> {
    let n = table.norm(x)?;
    if n == 0 {
        return Err(CurvError::Undefined("κ̄ is not defined at the identity".into()));
    }
    Ok(kappa(table, x)? / Rational::from_integer(n as i64))
}

/// `|S|·κ` for every listed element of sphere `n`, in sphere order.
pub fn sphere_numerators(table: &BallTable, n: u32) -> Result<Vec<i64>> {
    table.sphere(n).par_iter().map(|x| kappa_numerator(table, x)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereCensus {
    pub sphere: u32,
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
    pub positive_witnesses: Vec<(Element, Rational)>,
    pub negative_witnesses: Vec<(Element, Rational)>,
}

impl SphereCensus {
    pub fn total(&self) -> usize {
        self.positive + self.zero + self.negative
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureCensus {
    pub radius: u32,
    pub spheres: Vec<SphereCensus>,
    pub filter: Option<KernelSpec>,
}

impl CurvatureCensus {
    pub fn total_positive(&self) -> usize {
        self.spheres.iter().map(|s| s.positive).sum()
    }

    pub fn total_negative(&self) -> usize {
        self.spheres.iter().map(|s| s.negative).sum()
    }

    pub fn total_zero(&self) -> usize {
        self.spheres.iter().map(|s| s.zero).sum()
    }

    /// True when every counted element has κ = 0.
    pub fn is_flat(&self) -> bool {
        self.total_positive() == 0 && self.total_negative() == 0
    }
}

/// Census over spheres `1..=radius` of an existing table (radius + 2 needed).
pub fn census_on_table(table: &BallTable, radius: u32, witnesses: usize) -> Result<CurvatureCensus> {
    if radius + 2 > table.radius() && !table.is_saturated() {
        return Err(CurvError::Precondition(format!(
            "census to radius {radius} needs a table of radius {}, got {}",
            radius + 2,
            table.radius()
        )));
    }
    let order = table.spec().generators().len() as i64;
    let spheres = (1..=radius)
        .into_par_iter()
        .map(|n| {
            let nums = sphere_numerators(table, n)?;
            let mut c = SphereCensus {
                sphere: n,
                positive: 0,
                zero: 0,
                negative: 0,
                positive_witnesses: Vec::new(),
                negative_witnesses: Vec::new(),
            };
            for (x, k) in table.sphere(n).iter().zip(nums) {
                match k.signum() {
                    1 => {
                        c.positive += 1;
                        if c.positive_witnesses.len() < witnesses {
                            c.positive_witnesses.push((x.clone(), Rational::new(k, order)));
                        }
                    }
                    -1 => {
                        c.negative += 1;
                        if c.negative_witnesses.len() < witnesses {
                            c.negative_witnesses.push((x.clone(), Rational::new(k, order)));
                        }
                    }
                    _ => c.zero += 1,
                }
            }
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurvatureCensus { radius, spheres, filter: table.filter().cloned() })
}

pub fn census(
    spec: &GroupSpec,
    radius: u32,
    filter: Option<&KernelSpec>,
    witnesses: usize,
) -> Result<CurvatureCensus> {
    census_with_budget(spec, radius, filter, witnesses, crate::ball::DEFAULT_ELEMENT_BUDGET)
}

pub fn census_with_budget(
    spec: &GroupSpec,
    radius: u32,
    filter: Option<&KernelSpec>,
    witnesses: usize,
    budget: usize,
) -> Result<CurvatureCensus> {
    let table = filtered_table(spec, radius + 2, filter, budget)?;
    census_on_table(&table, radius, witnesses)
}

pub(crate) fn filtered_table(
    spec: &GroupSpec,
    radius: u32,
    filter: Option<&KernelSpec>,
    budget: usize,
) -> Result<BallTable> {
    let table = enumerate_ball_with_budget(spec, radius, budget)?;
    match filter {
        Some(k) => restrict_to_kernel(&table, k),
        None => Ok(table),
    }
}

/// Outcome of the annulus cancellation identity on `A_N(r1, r2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnulusSum {
    pub r1: u32,
    pub r2: u32,
    /// `Σ_{x ∈ A_N(r1,r2)} κ(x)`
    pub lhs: Rational,
    /// `(1/|S|) Σ_{(s,x) ∈ Y1 ∪ Y2} Δ(s,x)`
    pub rhs: Rational,
    /// Pairs `(generator index, x)` leaving the annulus inwards.
    pub y1: Vec<(usize, Element)>,
    /// Pairs leaving the annulus outwards.
    pub y2: Vec<(usize, Element)>,
    /// `2(|S_N(r1+1)| + |S_N(r1+2)|)`
    pub bound: Rational,
    pub annulus_size: usize,
}

impl AnnulusSum {
    pub fn identity_holds(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn bound_holds(&self) -> bool {
        self.lhs <= self.bound
    }
}

fn check_annulus_radii(table: &BallTable, r1: u32, r2: u32) -> Result<()> {
    if r1 + 4 >= r2 {
        return Err(CurvError::Precondition(format!("need r1 < r2 − 4, got r1={r1}, r2={r2}")));
    }
    if table.radius() < r2 + 2 && !table.is_saturated() {
        return Err(CurvError::Precondition(format!(
            "annulus up to r2={r2} needs a table of radius {}, got {}",
            r2 + 2,
            table.radius()
        )));
    }
    Ok(())
}

/// Both sides of the annulus identity over the table's (possibly filtered)
/// spheres. The caller decides what to do when they disagree.
pub fn annulus_sum(table: &BallTable, r1: u32, r2: u32) -> Result<AnnulusSum> {
    check_annulus_radii(table, r1, r2)?;
    let gens = table.spec().generators();
    let order = gens.len() as i64;

    let mut lhs_num = 0i64;
    let mut annulus_size = 0;
    for n in r1 + 1..=r2 {
        lhs_num += sphere_numerators(table, n)?.iter().sum::<i64>();
        annulus_size += table.sphere(n).len();
    }

    let boundary = |band: [u32; 2], keep: &(dyn Fn(u32) -> bool + Sync)| -> Result<Vec<(usize, Element, i64)>> {
        let mut out = Vec::new();
        for n in band {
            let found: Vec<Vec<(usize, Element, i64)>> = table
                .sphere(n)
                .par_iter()
                .map(|x| {
                    let mut v = Vec::new();
                    for i in 0..gens.len() {
                        let m = conj_norm(table, i, x)?;
                        if keep(m) {
                            v.push((i, x.clone(), n as i64 - m as i64));
                        }
                    }
                    Ok(v)
                })
                .collect::<Result<_>>()?;
            out.extend(found.into_iter().flatten());
        }
        Ok(out)
    };
    let y1 = boundary([r1 + 1, r1 + 2], &|m| m <= r1)?;
    let y2 = boundary([r2 - 1, r2], &|m| m > r2)?;
    let rhs_num: i64 = y1.iter().chain(&y2).map(|(_, _, d)| d).sum();

    let bound = 2 * (table.sphere(r1 + 1).len() + table.sphere(r1 + 2).len()) as i64;
    let strip = |v: Vec<(usize, Element, i64)>| v.into_iter().map(|(i, x, _)| (i, x)).collect();
    Ok(AnnulusSum {
        r1,
        r2,
        lhs: Rational::new(lhs_num, order),
        rhs: Rational::new(rhs_num, order),
        y1: strip(y1),
        y2: strip(y2),
        bound: Rational::from_integer(bound),
        annulus_size,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCancellation {
    pub checked: usize,
    /// `(generator index, x)` with `Δ(s,x) + Δ(s⁻¹, sxs⁻¹) ≠ 0`.
    pub violations: Vec<(usize, Element)>,
}

/// Checks `Δ(s,x) + Δ(s⁻¹, sxs⁻¹) = 0` for every pair with both `x` and its
/// conjugate inside `A_N(r1, r2)`.
pub fn pair_cancellation(table: &BallTable, r1: u32, r2: u32) -> Result<PairCancellation> {
    check_annulus_radii(table, r1, r2)?;
    let spec = table.spec();
    let gens = spec.generators();
    let inside = |m: u32| m > r1 && m <= r2;
    let mut checked = 0;
    let mut violations = Vec::new();
    for n in r1 + 1..=r2 {
        let per: Vec<(usize, Vec<(usize, Element)>)> = table
            .sphere(n)
            .par_iter()
            .map(|x| {
                let mut count = 0;
                let mut bad = Vec::new();
                for i in 0..gens.len() {
                    let y = spec.conjugate_by_generator(i, x)?;
                    if !inside(table.norm(&y)?) {
                        continue;
                    }
                    count += 1;
                    let back = delta_at(table, gens.inverse_index(i), &y)?;
                    if delta_at(table, i, x)? + back != 0 {
                        bad.push((i, x.clone()));
                    }
                }
                Ok((count, bad))
            })
            .collect::<Result<_>>()?;
        for (c, bad) in per {
            checked += c;
            violations.extend(bad);
        }
    }
    Ok(PairCancellation { checked, violations })
}

/// The ball version of the cancellation identity at radius `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallSum {
    pub m: u32,
    /// `Σ_{x ∈ B_N(m)} κ(x)`
    pub lhs: Rational,
    /// `(1/|S|) Σ_{(s,x) ∈ Y} Δ(s,x)`
    pub rhs: Rational,
    /// `|Y|` with `Y = {(s,x) : x ∈ S_N(m−1) ∪ S_N(m), |sxs⁻¹| > m}`
    pub y_size: usize,
}

impl BallSum {
    pub fn identity_holds(&self) -> bool {
        self.lhs == self.rhs
    }

    /// `lhs ≤ −|Y|/|S|`
    pub fn bound_holds(&self, order: usize) -> bool {
        self.lhs <= Rational::new(-(self.y_size as i64), order as i64)
    }
}

pub fn ball_sum(table: &BallTable, m: u32) -> Result<BallSum> {
    if m + 2 > table.radius() && !table.is_saturated() {
        return Err(CurvError::Precondition(format!(
            "ball sum at m={m} needs a table of radius {}",
            m + 2
        )));
    }
    let order = table.spec().generators().len() as i64;
    let mut lhs = 0i64;
    for n in 1..=m {
        lhs += sphere_numerators(table, n)?.iter().sum::<i64>();
    }
    let mut rhs = 0i64;
    let mut y_size = 0;
    for n in m.saturating_sub(1)..=m {
        for x in table.sphere(n) {
            for i in 0..order as usize {
                let c = conj_norm(table, i, x)?;
                if c > m {
                    y_size += 1;
                    rhs += n as i64 - c as i64;
                }
            }
        }
    }
    Ok(BallSum { m, lhs: Rational::new(lhs, order), rhs: Rational::new(rhs, order), y_size })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::enumerate_ball;
    use crate::group::Family;

    fn std_spec(f: Family) -> GroupSpec {
        GroupSpec::standard(f).unwrap()
    }

    #[test]
    fn free_group_examples() {
        let spec = std_spec(Family::free(2).unwrap());
        let t = enumerate_ball(&spec, 5).unwrap();
        let a3 = spec.parse("aaa").unwrap();
        let b = spec.parse("b").unwrap();
        assert_eq!(delta(&t, &b, &a3).unwrap(), -2);
        assert_eq!(kappa(&t, &a3).unwrap(), Rational::from_integer(-1));
        assert_eq!(kappa_bar(&t, &a3).unwrap(), Rational::new(-1, 3));
    }

    #[test]
    fn identity_has_zero_kappa_and_no_kappa_bar() {
        let spec = std_spec(Family::Heisenberg3);
        let t = enumerate_ball(&spec, 2).unwrap();
        let e = spec.identity();
        assert!(kappa(&t, &e).unwrap().is_zero());
        assert!(matches!(kappa_bar(&t, &e), Err(CurvError::Undefined(_))));
    }

    #[test]
    fn heisenberg_delta_uses_ball_norms() {
        let spec = std_spec(Family::Heisenberg3);
        let t = enumerate_ball(&spec, 4).unwrap();
        let a = spec.parse("a").unwrap();
        let b = spec.parse("b").unwrap();
        // a b a⁻¹ = (0,1,1), which has norm 3
        let expected = 1 - t.norm(&Element::Heisenberg([0, 1, 1])).unwrap() as i64;
        assert_eq!(delta(&t, &a, &b).unwrap(), expected);
        assert_eq!(expected, -2);
    }

    #[test]
    fn escaping_conjugate_is_an_error() {
        let spec = std_spec(Family::free(2).unwrap());
        let t = enumerate_ball(&spec, 3).unwrap();
        let a3 = spec.parse("aaa").unwrap();
        assert!(matches!(kappa(&t, &a3), Err(CurvError::OutOfBall { .. })));
        assert!(delta(&t, &a3, &a3).is_err());
    }

    #[test]
    fn abelian_census_is_flat() {
        let c = census(&std_spec(Family::free_abelian(2).unwrap()), 6, None, 3).unwrap();
        assert!(c.is_flat());
        assert_eq!(c.spheres[5].zero, 24);
    }

    #[test]
    fn free_census_has_no_positive() {
        let c = census(&std_spec(Family::free(2).unwrap()), 5, None, 2).unwrap();
        assert_eq!(c.total_positive(), 0);
        assert_eq!(c.spheres[0].negative, 4);
        assert_eq!(c.spheres[2].negative_witnesses.len(), 2);
    }

    #[test]
    fn abelian_annulus_is_empty() {
        let spec = std_spec(Family::free_abelian(2).unwrap());
        let t = enumerate_ball(&spec, 8).unwrap();
        let a = annulus_sum(&t, 1, 6).unwrap();
        assert!(a.lhs.is_zero() && a.rhs.is_zero());
        assert!(a.y1.is_empty() && a.y2.is_empty());
    }

    #[test]
    fn free_annulus_signs() {
        let spec = std_spec(Family::free(2).unwrap());
        let t = enumerate_ball(&spec, 8).unwrap();
        let a = annulus_sum(&t, 1, 6).unwrap();
        assert!(a.identity_holds());
        assert!(a.bound_holds());
        for (i, x) in &a.y1 {
            assert!(delta_at(&t, *i, x).unwrap() > 0);
        }
        for (i, x) in &a.y2 {
            assert!(delta_at(&t, *i, x).unwrap() < 0);
        }
    }

    #[test]
    fn annulus_preconditions() {
        let spec = std_spec(Family::free(2).unwrap());
        let t = enumerate_ball(&spec, 7).unwrap();
        assert!(matches!(annulus_sum(&t, 2, 6), Err(CurvError::Precondition(_))));
        assert!(matches!(annulus_sum(&t, 0, 6), Err(CurvError::Precondition(_))));
    }

    #[test]
    fn ball_sum_on_free_group() {
        let spec = std_spec(Family::free(2).unwrap());
        let t = enumerate_ball(&spec, 6).unwrap();
        for m in 1..=4 {
            let b = ball_sum(&t, m).unwrap();
            assert!(b.identity_holds(), "m={m}");
            assert!(b.bound_holds(4));
        }
    }
}
