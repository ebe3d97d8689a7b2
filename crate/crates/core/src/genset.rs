//! Generating sets that make curvature vanish: conjugation closures and the
//! preimage set of `{a, b}` for finite-by-D∞ groups.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::ball::{enumerate_ball_with_budget, BallTable, DEFAULT_ELEMENT_BUDGET};
use crate::curvature::kappa_numerator;
use crate::error::{CurvError, Result};
use crate::group::{Element, Family, GeneratingSet, GroupSpec};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureResult {
    pub original: GeneratingSet,
    /// Originals first, then new conjugates in discovery order.
    pub elements: Vec<Element>,
    /// Size of the class of each original generator (partial when not terminated).
    pub orbit_sizes: Vec<usize>,
    pub terminated: bool,
}

impl ClosureResult {
    /// The closed set; refused when the closure did not reach a fixed point.
    pub fn closed(&self, family: &Family) -> Result<GeneratingSet> {
        if !self.terminated {
            return Err(CurvError::Precondition(
                "conjugation closure did not terminate within its budget".into(),
            ));
        }
        GeneratingSet::new(family, self.elements.clone())
    }
}

/// Closes the generating set under conjugation by its own elements.
pub fn conjugation_closure(spec: &GroupSpec, budget: usize) -> Result<ClosureResult> {
    let gens = spec.generators();
    if budget < gens.len() {
        return Err(CurvError::Precondition(format!(
            "budget {budget} is below |S| = {}",
            gens.len()
        )));
    }
    let mut all: Vec<Element> = gens.elements().to_vec();
    let mut seen: HashSet<Element> = all.iter().cloned().collect();
    let mut orbit_sizes = Vec::with_capacity(gens.len());
    let mut terminated = true;

    'outer: for s in gens.iter() {
        let mut class: HashSet<Element> = HashSet::from([s.clone()]);
        let mut frontier = vec![s.clone()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for y in &frontier {
                for i in 0..gens.len() {
                    let c = spec.conjugate_by_generator(i, y)?;
                    if class.insert(c.clone()) {
                        if seen.insert(c.clone()) {
                            all.push(c.clone());
                        }
                        next.push(c);
                        if seen.len() > budget {
                            terminated = false;
                            orbit_sizes.push(class.len());
                            break 'outer;
                        }
                    }
                }
            }
            frontier = next;
        }
        orbit_sizes.push(class.len());
    }
    Ok(ClosureResult { original: gens.clone(), elements: all, orbit_sizes, terminated })
}

/// Checks `t s t⁻¹ ∈ S` for all `s, t ∈ S`; returns the offending pairs.
pub fn conjugation_invariance_violations(spec: &GroupSpec) -> Result<Vec<(Element, Element)>> {
    let gens = spec.generators();
    let mut bad = Vec::new();
    for t in gens.iter() {
        for s in gens.iter() {
            if !gens.contains(&spec.conjugate(t, s)?) {
                bad.push((t.clone(), s.clone()));
            }
        }
    }
    Ok(bad)
}

/// Elements `x` of the table with `|s x s⁻¹| ≠ |x|` for some generator;
/// only `x` whose conjugates stay inside the table are examined.
pub fn norm_preservation_violations(table: &BallTable) -> Result<Vec<Element>> {
    let spec = table.spec();
    let gens = spec.generators();
    let mut out = Vec::new();
    for n in 0..=table.radius() {
        let found: Vec<Option<Element>> = table
            .full_sphere(n)
            .par_iter()
            .map(|x| {
                for i in 0..gens.len() {
                    let c = spec.conjugate_by_generator(i, x)?;
                    match table.try_norm(&c) {
                        Some(m) if m != n => return Ok(Some(x.clone())),
                        None if n + 2 <= table.radius() => return Ok(Some(x.clone())),
                        _ => {}
                    }
                }
                Ok(None)
            })
            .collect::<Result<_>>()?;
        out.extend(found.into_iter().flatten());
    }
    Ok(out)
}

/// `{g_i} ∪ {ā, g_i ā} ∪ {b̄, g_i b̄}` without repetition; symmetry is verified.
pub fn dinf_extension_genset(spec: &GroupSpec) -> Result<GeneratingSet> {
    let Family::FiniteByDihedral(ext) = spec.family() else {
        return Err(CurvError::FamilyMismatch(format!(
            "{} is not a finite-by-D∞ group",
            spec.family().describe()
        )));
    };
    let candidates = ext.preimage_generators().into_iter().map(Element::Extension).collect();
    GeneratingSet::new(spec.family(), candidates)
}

/// Elements `γ` with `|γ| > 1` whose norm differs from the {a,b}-length of
/// their image in D∞.
pub fn dinf_norm_violations(table: &BallTable) -> Result<Vec<Element>> {
    let Family::FiniteByDihedral(ext) = table.spec().family() else {
        return Err(CurvError::FamilyMismatch("expected a finite-by-D∞ group".into()));
    };
    let mut out = Vec::new();
    for n in 2..=table.radius() {
        for x in table.full_sphere(n) {
            let Element::Extension(e) = x else { unreachable!("family checked above") };
            if ext.project(e).length() != n as u64 {
                out.push(x.clone());
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatReport {
    pub flat: bool,
    pub checked: usize,
    /// First element (in sphere order) with κ ≠ 0, with its κ.
    pub counterexample: Option<(Element, Rational)>,
}

/// κ_S(x) = 0 for every x with `cutoff < |x| ≤ radius`.
pub fn verify_flat(spec: &GroupSpec, generators: &GeneratingSet, radius: u32, cutoff: u32) -> Result<FlatReport> {
    verify_flat_with_budget(spec, generators, radius, cutoff, DEFAULT_ELEMENT_BUDGET)
}

pub fn verify_flat_with_budget(
    spec: &GroupSpec,
    generators: &GeneratingSet,
    radius: u32,
    cutoff: u32,
    budget: usize,
) -> Result<FlatReport> {
    if radius < cutoff + 3 {
        return Err(CurvError::Precondition(format!(
            "need R ≥ cutoff + 3, got R={radius}, cutoff={cutoff}"
        )));
    }
    let spec = spec.with_generators(generators.clone());
    let table = enumerate_ball_with_budget(&spec, radius + 2, budget)?;
    let order = generators.len() as i64;
    let mut checked = 0;
    for n in cutoff + 1..=radius {
        let sphere = table.sphere(n);
        let nums: Vec<i64> =
            sphere.par_iter().map(|x| kappa_numerator(&table, x)).collect::<Result<_>>()?;
        checked += sphere.len();
        if let Some(i) = nums.iter().position(|&k| k != 0) {
            return Ok(FlatReport {
                flat: false,
                checked,
                counterexample: Some((sphere[i].clone(), Rational::new(nums[i], order))),
            });
        }
    }
    Ok(FlatReport { flat: true, checked, counterexample: None })
}
