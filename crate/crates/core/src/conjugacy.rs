//! Conjugacy orbits inside norm bounds, exits and exiting times, greedy
//! conjugate descent and conjugacy-graph boundary profiles.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rayon::prelude::*;

use crate::ball::{enumerate_ball_with_budget, norm_targeted_with_budget, BallTable, DEFAULT_ELEMENT_BUDGET};
use crate::curvature::ball_sum;
use crate::error::{CurvError, Result};
use crate::group::{Element, GroupSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitVerdict {
    ClosedWithinBound,
    EscapesBound,
}

impl OrbitVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            OrbitVerdict::ClosedWithinBound => "closed-within-bound",
            OrbitVerdict::EscapesBound => "escapes-bound",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyOrbit {
    pub seed: Element,
    pub bound: u32,
    /// Sorted by canonical key.
    pub members: Vec<Element>,
    pub frontier_escaped: bool,
    pub verdict: OrbitVerdict,
}

/// Closure of `{x}` under `y ↦ s y s⁻¹`, keeping conjugates of norm `≤ bound`.
pub fn orbit(table: &BallTable, x: &Element, bound: u32) -> Result<ConjugacyOrbit> {
    let spec = table.spec();
    let nx = table.norm(x)?;
    if nx > bound {
        return Err(CurvError::Precondition(format!(
            "seed has norm {nx} above the bound {bound}"
        )));
    }
    if table.radius() < bound + 1 && !table.is_saturated() {
        return Err(CurvError::Precondition(format!(
            "orbit bound {bound} needs a table of radius {}",
            bound + 1
        )));
    }
    let gens = spec.generators();
    let mut seen: BTreeSet<Element> = BTreeSet::from([x.clone()]);
    let mut frontier = vec![x.clone()];
    let mut escaped = false;
    while !frontier.is_empty() {
        let next: Vec<(Element, bool)> = frontier
            .par_iter()
            .flat_map_iter(|y| (0..gens.len()).map(move |i| spec.conjugate_by_generator(i, y)))
            .map(|c| c.map(|c| {
                let inside = table.try_norm(&c).is_some_and(|n| n <= bound);
                (c, inside)
            }))
            .collect::<Result<_>>()?;
        frontier = Vec::new();
        for (c, inside) in next {
            if !inside {
                escaped = true;
            } else if seen.insert(c.clone()) {
                frontier.push(c);
            }
        }
    }
    Ok(ConjugacyOrbit {
        seed: x.clone(),
        bound,
        members: seen.into_iter().collect(),
        frontier_escaped: escaped,
        verdict: if escaped { OrbitVerdict::EscapesBound } else { OrbitVerdict::ClosedWithinBound },
    })
}

/// Least `|σ| ≤ k_max` with `|σxσ⁻¹| > |x|`; `None` when no such σ exists
/// in `B(k_max)`.
pub fn exiting_time(table: &BallTable, x: &Element, k_max: u32) -> Result<Option<u32>> {
    let nx = table.norm(x)?;
    if nx + 2 * k_max > table.radius() && !table.is_saturated() {
        return Err(CurvError::Precondition(format!(
            "exiting time up to {k_max} at norm {nx} needs a table of radius {}",
            nx + 2 * k_max
        )));
    }
    for k in 1..=k_max {
        if exits_within_sphere(table, x, nx, k)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

fn exits_within_sphere(table: &BallTable, x: &Element, nx: u32, k: u32) -> Result<bool> {
    let spec = table.spec();
    for sigma in table.full_sphere(k) {
        let c = spec.conjugate(sigma, x)?;
        // a conjugate beyond the table is longer than x
        if table.try_norm(&c).map_or(true, |n| n > nx) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereExits {
    pub sphere: u32,
    pub size: usize,
    /// Elements with τ = 1.
    pub exits: usize,
    /// Elements with τ ≤ k.
    pub k_step_exits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExitReport {
    pub radius: u32,
    pub k: u32,
    pub spheres: Vec<SphereExits>,
    /// `|Y(m)|` for `m = 1..=radius`.
    pub boundary_sizes: Vec<usize>,
    /// `L = max_m |Y(m)|`; bounds the exits on every sphere in range.
    pub exit_bound: usize,
    /// `|B(k−1)|·(2k−1)·L`; bounds the k-step exits on every sphere in range.
    pub k_step_bound: usize,
}

impl ExitReport {
    /// Exact comparison of every per-sphere count with the derived constants.
    pub fn bounded(&self, from: u32) -> bool {
        self.spheres
            .iter()
            .filter(|s| s.sphere >= from)
            .all(|s| s.exits <= self.exit_bound && s.k_step_exits <= self.k_step_bound)
    }
}

pub fn exits_per_sphere(spec: &GroupSpec, radius: u32, k: u32) -> Result<ExitReport> {
    exits_per_sphere_with_budget(spec, radius, k, DEFAULT_ELEMENT_BUDGET)
}

pub fn exits_per_sphere_with_budget(
    spec: &GroupSpec,
    radius: u32,
    k: u32,
    budget: usize,
) -> Result<ExitReport> {
    if radius == 0 || k == 0 {
        return Err(CurvError::Precondition("exit counts need R ≥ 1 and k ≥ 1".into()));
    }
    let table = enumerate_ball_with_budget(spec, radius + 2 * k.max(1), budget)?;
    exits_on_table(&table, radius, k)
}

pub fn exits_on_table(table: &BallTable, radius: u32, k: u32) -> Result<ExitReport> {
    let spheres = (1..=radius)
        .map(|n| {
            let flags: Vec<(bool, bool)> = table
                .sphere(n)
                .par_iter()
                .map(|x| {
                    let one = exits_within_sphere(table, x, n, 1)?;
                    let within = one || (2..=k).try_fold(false, |acc, j| {
                        Ok::<_, CurvError>(acc || exits_within_sphere(table, x, n, j)?)
                    })?;
                    Ok((one, within))
                })
                .collect::<Result<_>>()?;
            Ok(SphereExits {
                sphere: n,
                size: flags.len(),
                exits: flags.iter().filter(|f| f.0).count(),
                k_step_exits: flags.iter().filter(|f| f.1).count(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let boundary_sizes =
        (1..=radius).map(|m| ball_sum(table, m).map(|b| b.y_size)).collect::<Result<Vec<_>>>()?;
    let exit_bound = boundary_sizes.iter().copied().max().unwrap_or(0);
    let k_step_bound = table.ball_size(k - 1) * (2 * k as usize - 1) * exit_bound;
    Ok(ExitReport { radius, k, spheres, boundary_sizes, exit_bound, k_step_bound })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub minimal: Element,
    /// Generators `t` applied in order as `x ↦ t x t⁻¹`.
    pub chain: Vec<Element>,
    pub norms: Vec<u32>,
}

/// Greedy steepest descent by single-generator conjugations. Among the
/// shortest available conjugates, the smallest canonical key wins, then the
/// lowest generator index.
pub fn reduce_conjugate(table: &BallTable, x: &Element) -> Result<Reduction> {
    let spec = table.spec();
    let gens = spec.generators();
    let mut current = x.clone();
    let mut norm = table.norm(x)?;
    let mut chain = Vec::new();
    let mut norms = vec![norm];
    loop {
        let mut best: Option<(u32, Element, usize)> = None;
        for i in 0..gens.len() {
            let c = spec.conjugate_by_generator(i, &current)?;
            // absent from the table means longer than the radius, hence no descent
            let Some(n) = table.try_norm(&c) else { continue };
            if n >= norm {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bn, be, _)) => (n, &c) < (*bn, be),
            };
            if better {
                best = Some((n, c, i));
            }
        }
        match best {
            None => break,
            Some((n, c, i)) => {
                chain.push(gens.get(i).clone());
                norms.push(n);
                current = c;
                norm = n;
            }
        }
    }
    Ok(Reduction { minimal: current, chain, norms })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryEntry {
    pub m: u32,
    pub vertices: usize,
    pub boundary: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectivityViolation {
    pub element: Element,
    pub first: (i64, i64),
    pub second: (i64, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryProfile {
    pub entries: Vec<BoundaryEntry>,
    pub injectivity_violations: Vec<InjectivityViolation>,
    /// `2·max(|u|, |v|)`
    pub lipschitz_bound: u32,
    pub lipschitz_checked: usize,
    pub lipschitz_violations: usize,
}

/// Boundary sizes of the conjugacy graph `G^(m)` spanned by `Φ(w) = w x w⁻¹`
/// for `w` in the lattice generated by `u`, `v`, with edges given by
/// conjugation by `u^±`, `v^±`.
pub fn conjugacy_graph_boundary(
    spec: &GroupSpec,
    x: &Element,
    u: &Element,
    v: &Element,
    m_list: &[u32],
    limit: u32,
    budget: usize,
) -> Result<BoundaryProfile> {
    let m_max = m_list.iter().copied().max().unwrap_or(0);
    let nu = norm_targeted_with_budget(spec, u, limit, budget)?;
    let nv = norm_targeted_with_budget(spec, v, limit, budget)?;
    let k = nu.max(nv);
    let table = enumerate_ball_with_budget(spec, m_max + 2 * k, budget)?;
    let nx = table.norm(x)?;

    let steps: Vec<(Element, Element, (i64, i64))> = vec![
        (u.clone(), spec.invert(u)?, (1, 0)),
        (spec.invert(u)?, u.clone(), (-1, 0)),
        (v.clone(), spec.invert(v)?, (0, 1)),
        (spec.invert(v)?, v.clone(), (0, -1)),
    ];
    let step = |y: &Element, s: &(Element, Element, (i64, i64))| -> Result<Element> {
        spec.multiply(&spec.multiply(&s.0, y)?, &s.1)
    };

    let mut entries = Vec::new();
    let mut seen_violations: HashSet<(Element, (i64, i64), (i64, i64))> = HashSet::new();
    let mut injectivity = Vec::new();
    let mut lip_checked = 0;
    let mut lip_bad = 0;

    for &m in m_list {
        if nx > m {
            entries.push(BoundaryEntry { m, vertices: 0, boundary: 0 });
            continue;
        }
        let mut coord: HashMap<Element, (i64, i64)> = HashMap::from([(x.clone(), (0, 0))]);
        let mut queue = VecDeque::from([x.clone()]);
        let mut boundary = 0;
        while let Some(y) = queue.pop_front() {
            let ny = table.norm(&y)?;
            let cy = coord[&y];
            let mut on_boundary = false;
            for s in &steps {
                let z = step(&y, s)?;
                let nz = table.try_norm(&z);
                if m == m_max {
                    lip_checked += 1;
                    if nz.map_or(true, |nz| nz.abs_diff(ny) > 2 * k) {
                        lip_bad += 1;
                    }
                }
                match nz {
                    Some(nz) if nz <= m => {
                        let cz = (cy.0 + s.2 .0, cy.1 + s.2 .1);
                        match coord.get(&z) {
                            Some(&prev) if prev != cz => {
                                let key = (z.clone(), prev.min(cz), prev.max(cz));
                                if seen_violations.insert(key) {
                                    injectivity.push(InjectivityViolation {
                                        element: z.clone(),
                                        first: prev,
                                        second: cz,
                                    });
                                }
                            }
                            Some(_) => {}
                            None => {
                                coord.insert(z.clone(), cz);
                                queue.push_back(z);
                            }
                        }
                    }
                    _ => on_boundary = true,
                }
            }
            if on_boundary {
                boundary += 1;
            }
            if coord.len() > budget {
                return Err(CurvError::ResourceCap { budget, sphere: m });
            }
        }
        entries.push(BoundaryEntry { m, vertices: coord.len(), boundary });
    }
    injectivity.sort_by(|a, b| a.element.cmp(&b.element).then(a.first.cmp(&b.first)));
    Ok(BoundaryProfile {
        entries,
        injectivity_violations: injectivity,
        lipschitz_bound: 2 * k,
        lipschitz_checked: lip_checked,
        lipschitz_violations: lip_bad,
    })
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
    fn central_orbit_is_singleton() {
        let spec = std_spec(Family::Heisenberg3);
        let t = enumerate_ball(&spec, 5).unwrap();
        let z = Element::Heisenberg([0, 0, 1]);
        let o = orbit(&t, &z, 4).unwrap();
        assert_eq!(o.members, vec![z.clone()]);
        assert_eq!(o.verdict, OrbitVerdict::ClosedWithinBound);
        assert_eq!(exiting_time(&t, &z, 0).unwrap(), None);
        let r = reduce_conjugate(&t, &z).unwrap();
        assert_eq!(r.minimal, z);
        assert!(r.chain.is_empty());
    }

    #[test]
    fn free_orbit_escapes() {
        let spec = std_spec(Family::free(2).unwrap());
        let t = enumerate_ball(&spec, 6).unwrap();
        let a = spec.parse("a").unwrap();
        let o = orbit(&t, &a, 5).unwrap();
        assert_eq!(o.verdict, OrbitVerdict::EscapesBound);
        assert!(o.members.contains(&spec.parse("bbaBB").unwrap()));
        assert!(o.members.iter().all(|m| t.norm(m).unwrap() <= 5));
    }

    #[test]
    fn abelian_orbit_and_exits() {
        let spec = std_spec(Family::free_abelian(2).unwrap());
        let t = enumerate_ball(&spec, 6).unwrap();
        let x = spec.parse("(1,-2)").unwrap();
        let o = orbit(&t, &x, 4).unwrap();
        assert_eq!(o.members, vec![x.clone()]);
        assert_eq!(exiting_time(&t, &x, 1).unwrap(), None);
        let rep = exits_per_sphere(&spec, 6, 1).unwrap();
        assert!(rep.spheres.iter().all(|s| s.exits == 0 && s.k_step_exits == 0));
        assert_eq!(rep.exit_bound, 0);
    }

    #[test]
    fn free_group_exits() {
        let spec = std_spec(Family::free(2).unwrap());
        let t = enumerate_ball(&spec, 5).unwrap();
        assert_eq!(exiting_time(&t, &spec.parse("aaa").unwrap(), 1).unwrap(), Some(1));
        let rep = exits_per_sphere(&spec, 5, 1).unwrap();
        for s in &rep.spheres {
            assert_eq!(s.exits, s.size);
        }
        assert!(rep.bounded(1));
    }

    #[test]
    fn exiting_time_precondition() {
        let spec = std_spec(Family::free(2).unwrap());
        let t = enumerate_ball(&spec, 4).unwrap();
        assert!(matches!(
            exiting_time(&t, &spec.parse("aaa").unwrap(), 1),
            Err(CurvError::Precondition(_))
        ));
    }

    #[test]
    fn descent_examples() {
        let f2 = std_spec(Family::free(2).unwrap());
        let t = enumerate_ball(&f2, 5).unwrap();
        let r = reduce_conjugate(&t, &f2.parse("baB").unwrap()).unwrap();
        assert_eq!(r.minimal, f2.parse("a").unwrap());
        assert_eq!(r.chain, vec![f2.parse("B").unwrap()]);

        let h = std_spec(Family::Heisenberg3);
        let t = enumerate_ball(&h, 5).unwrap();
        let r = reduce_conjugate(&t, &Element::Heisenberg([0, 1, 1])).unwrap();
        assert_eq!(r.minimal, h.parse("b").unwrap());
        assert_eq!(r.norms, vec![3, 1]);
    }

    #[test]
    fn degenerate_lattice_reports_collisions() {
        let spec = std_spec(Family::free(2).unwrap());
        let a = spec.parse("a").unwrap();
        let b = spec.parse("b").unwrap();
        let bb = spec.parse("bb").unwrap();
        let p = conjugacy_graph_boundary(&spec, &a, &b, &bb, &[3, 5], 4, 1_000_000).unwrap();
        assert!(!p.injectivity_violations.is_empty());
        assert_eq!(p.lipschitz_violations, 0);
        assert_eq!(p.lipschitz_bound, 4);
    }

    #[test]
    fn abelian_graph_is_a_point() {
        let spec = std_spec(Family::free_abelian(2).unwrap());
        let x = spec.parse("a").unwrap();
        let u = spec.parse("b").unwrap();
        let p = conjugacy_graph_boundary(&spec, &x, &x, &u, &[1, 3], 4, 1_000_000).unwrap();
        assert!(p.entries.iter().all(|e| e.vertices == 1 && e.boundary <= 1));
    }
}
