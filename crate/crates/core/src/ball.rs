//! Word-metric balls by breadth-first search over canonical forms.

use std::collections::HashMap;
use std::io;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{CurvError, Result};
use crate::group::{Element, FiniteGroup, GroupSpec};

/// Default cap on the number of canonical keys held by one search.
pub const DEFAULT_ELEMENT_BUDGET: usize = 50_000_000;

static PEAK_KEYS: AtomicUsize = AtomicUsize::new(0);

fn note_keys(n: usize) {
    PEAK_KEYS.fetch_max(n, Ordering::Relaxed);
}

/// Largest number of canonical keys held by any single search in this process.
pub fn peak_elements() -> usize {
    PEAK_KEYS.load(Ordering::Relaxed)
}

/// A homomorphism to a finite group, given on generators. Its kernel is the
/// normal subgroup `N` used to filter balls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelSpec {
    quotient: Arc<FiniteGroup>,
    generators: Vec<Element>,
    images: Vec<u32>,
}

impl KernelSpec {
    /// `images[i]` is the image of the i-th generator of `spec`.
    pub fn new(spec: &GroupSpec, quotient: FiniteGroup, images: Vec<u32>) -> Result<Self> {
        let gens = spec.generators();
        if images.len() != gens.len() {
            return Err(CurvError::Config(format!(
                "kernel gives {} images for {} generators",
                images.len(),
                gens.len()
            )));
        }
        if let Some(bad) = images.iter().find(|&&q| !quotient.contains(q)) {
            return Err(CurvError::Config(format!("quotient element {bad} out of range")));
        }
        for i in 0..gens.len() {
            let j = gens.inverse_index(i);
            if images[j] != quotient.inv(images[i]) {
                return Err(CurvError::KernelInconsistent(format!(
                    "image of {} is not the inverse of the image of {}",
                    spec.render(gens.get(j)),
                    spec.render(gens.get(i))
                )));
            }
        }
        Ok(KernelSpec { quotient: Arc::new(quotient), generators: gens.elements().to_vec(), images })
    }

    /// Images keyed by generator; every generator must appear exactly once.
    pub fn from_pairs(
        spec: &GroupSpec,
        quotient: FiniteGroup,
        pairs: Vec<(Element, u32)>,
    ) -> Result<Self> {
        let gens = spec.generators();
        let mut images: Vec<Option<u32>> = vec![None; gens.len()];
        for (g, q) in pairs {
            let i = gens.index_of(&g).ok_or_else(|| {
                CurvError::Config(format!("{} is not a generator", spec.render(&g)))
            })?;
            if images[i].replace(q).is_some() {
                return Err(CurvError::Config(format!(
                    "generator {} given twice",
                    spec.render(&g)
                )));
            }
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, q)| {
                q.ok_or_else(|| {
                    CurvError::Config(format!("no image for generator {}", spec.render(gens.get(i))))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, quotient, images)
    }

    /// Map onto the trivial group: the kernel is everything.
    pub fn trivial(spec: &GroupSpec) -> Self {
        Self::new(spec, FiniteGroup::cyclic(1), vec![0; spec.generators().len()])
            .expect("trivial kernel is consistent")
    }

    pub fn quotient(&self) -> &FiniteGroup {
        &self.quotient
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn describe(&self) -> String {
        format!("kernel of a map onto a group of order {}", self.quotient.order())
    }
}

#[derive(Debug)]
struct KernelData {
    spec: KernelSpec,
    images: HashMap<Element, u32>,
}

/// The ball `B(R)` with word norms, split into spheres.
///
/// `norms` always covers the whole ball of Γ. When a kernel filter is set,
/// [`BallTable::sphere`] lists only elements of `N`, while norms stay the
/// norms of Γ (so `B_N(n) = B(n) ∩ N`).
#[derive(Clone, Debug)]
pub struct BallTable {
    spec: GroupSpec,
    radius: u32,
    norms: Arc<HashMap<Element, u32>>,
    full: Arc<Vec<Vec<Element>>>,
    spheres: Arc<Vec<Vec<Element>>>,
    kernel: Option<Arc<KernelData>>,
}

pub fn enumerate_ball(spec: &GroupSpec, radius: u32) -> Result<BallTable> {
    enumerate_ball_with_budget(spec, radius, DEFAULT_ELEMENT_BUDGET)
}

pub fn enumerate_ball_with_budget(spec: &GroupSpec, radius: u32, budget: usize) -> Result<BallTable> {
    let gens = spec.generators().elements();
    let identity = spec.identity();
    let mut norms: HashMap<Element, u32> = HashMap::new();
    norms.insert(identity.clone(), 0);
    let mut spheres = vec![vec![identity]];

    for n in 1..=radius {
        let prev = &spheres[n as usize - 1];
        let candidates: Vec<Element> = prev
            .par_iter()
            .flat_map_iter(|x| gens.iter().map(move |s| spec.multiply(s, x)))
            .collect::<Result<Vec<_>>>()?;
        let mut sphere = Vec::new();
        for y in candidates {
            if !norms.contains_key(&y) {
                norms.insert(y.clone(), n);
                sphere.push(y);
                if norms.len() > budget {
                    return Err(CurvError::ResourceCap { budget, sphere: n });
                }
            }
        }
        note_keys(norms.len());
        sphere.par_sort_unstable();
        let done = sphere.is_empty();
        spheres.push(sphere);
        if done {
            // finite group exhausted; remaining spheres are empty
            for _ in n + 1..=radius {
                spheres.push(Vec::new());
            }
            break;
        }
    }

    let full = Arc::new(spheres);
    Ok(BallTable {
        spec: spec.clone(),
        radius,
        norms: Arc::new(norms),
        spheres: full.clone(),
        full,
        kernel: None,
    })
}

impl BallTable {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// True when the whole (finite) group already fits in the table, so
    /// every product of listed elements is listed too.
    pub fn is_saturated(&self) -> bool {
        self.full.last().map_or(false, |s| s.is_empty())
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn try_norm(&self, x: &Element) -> Option<u32> {
        self.norms.get(x).copied()
    }

    /// Word norm of `x`, or an out-of-ball error when `|x| > R`.
    pub fn norm(&self, x: &Element) -> Result<u32> {
        self.try_norm(x).ok_or_else(|| CurvError::OutOfBall {
            element: self.spec.render(x),
            radius: self.radius,
        })
    }

    /// Sphere `n`, restricted to the kernel when a filter is set.
    pub fn sphere(&self, n: u32) -> &[Element] {
        self.spheres.get(n as usize).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Sphere `n` of Γ, ignoring any filter.
    pub fn full_sphere(&self, n: u32) -> &[Element] {
        self.full.get(n as usize).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `|S(0)|, …, |S(R)|` (or `|S_N(n)|` under a filter).
    pub fn counts(&self) -> Vec<usize> {
        (0..=self.radius).map(|n| self.sphere(n).len()).collect()
    }

    /// `|B(n)|` (or `|B_N(n)|`).
    pub fn ball_size(&self, n: u32) -> usize {
        (0..=n.min(self.radius)).map(|k| self.sphere(k).len()).sum()
    }

    /// Number of listed elements.
    pub fn len(&self) -> usize {
        self.ball_size(self.radius)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of canonical keys held, filtered or not.
    pub fn key_count(&self) -> usize {
        self.norms.len()
    }

    pub fn filter(&self) -> Option<&KernelSpec> {
        self.kernel.as_ref().map(|k| &k.spec)
    }

    /// Kernel membership, when a filter is set and `x` is in the ball.
    pub fn in_kernel(&self, x: &Element) -> Option<bool> {
        let k = self.kernel.as_ref()?;
        let q = k.images.get(x)?;
        Some(*q == k.spec.quotient.identity())
    }

    /// Listed elements in sphere order, sorted within each sphere.
    pub fn elements(&self) -> impl Iterator<Item = (u32, &Element)> {
        self.spheres
            .iter()
            .enumerate()
            .flat_map(|(n, s)| s.iter().map(move |x| (n as u32, x)))
    }

    /// Same ball with `|S(n)|` capped at `radius`.
    pub fn truncated(&self, radius: u32) -> BallTable {
        assert!(radius <= self.radius);
        let keep = |v: &Vec<Vec<Element>>| Arc::new(v[..=radius as usize].to_vec());
        let norms: HashMap<Element, u32> =
            self.norms.iter().filter(|(_, &n)| n <= radius).map(|(k, &n)| (k.clone(), n)).collect();
        let kernel = self.kernel.as_ref().map(|k| {
            Arc::new(KernelData {
                spec: k.spec.clone(),
                images: k
                    .images
                    .iter()
                    .filter(|(x, _)| norms.contains_key(*x))
                    .map(|(x, &q)| (x.clone(), q))
                    .collect(),
            })
        });
        BallTable {
            spec: self.spec.clone(),
            radius,
            norms: Arc::new(norms),
            full: keep(&self.full),
            spheres: keep(&self.spheres),
            kernel,
        }
    }

    /// CSV with columns `canonical_key,norm,in_kernel` over the whole ball.
    pub fn write_csv<W: io::Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["canonical_key", "norm", "in_kernel"])?;
        for (n, sphere) in self.full.iter().enumerate() {
            for x in sphere {
                let flag = self.in_kernel(x).unwrap_or(true);
                w.write_record([self.spec.render(x), n.to_string(), flag.to_string()])?;
            }
        }
        w.flush()
    }
}

/// Sub-table of kernel elements. Images are propagated along every edge of
/// the ball and must agree wherever two words reach the same element.
pub fn restrict_to_kernel(table: &BallTable, ker: &KernelSpec) -> Result<BallTable> {
    let spec = &table.spec;
    let gens = spec.generators();
    if gens.elements() != ker.generators.as_slice() {
        return Err(CurvError::Config(
            "kernel was defined for a different generating set".into(),
        ));
    }
    let q = &*ker.quotient;
    let mut images: HashMap<Element, u32> = HashMap::with_capacity(table.norms.len());
    images.insert(spec.identity(), q.identity());
    for n in 0..=table.radius {
        for y in table.full_sphere(n) {
            let iy = images[y];
            for (i, s) in gens.iter().enumerate() {
                let x = spec.multiply(s, y)?;
                if table.try_norm(&x).is_none() {
                    continue;
                }
                let expected = q.mul(ker.images[i], iy);
                match images.get(&x) {
                    Some(&got) if got != expected => {
                        return Err(CurvError::KernelInconsistent(format!(
                            "{} receives images {got} and {expected}",
                            spec.render(&x)
                        )))
                    }
                    Some(_) => {}
                    None => {
                        images.insert(x, expected);
                    }
                }
            }
        }
    }
    let id = q.identity();
    let spheres: Vec<Vec<Element>> = table
        .full
        .iter()
        .map(|s| s.iter().filter(|x| images[*x] == id).cloned().collect())
        .collect();
    Ok(BallTable {
        spec: spec.clone(),
        radius: table.radius,
        norms: table.norms.clone(),
        full: table.full.clone(),
        spheres: Arc::new(spheres),
        kernel: Some(Arc::new(KernelData { spec: ker.clone(), images })),
    })
}

pub fn norm_targeted(spec: &GroupSpec, x: &Element, limit: u32) -> Result<u32> {
    norm_targeted_with_budget(spec, x, limit, DEFAULT_ELEMENT_BUDGET)
}

/// Word norm of `x` by meet-in-the-middle search on the Cayley graph
/// (`g ~ g·s`), growing whichever side currently has the smaller frontier.
pub fn norm_targeted_with_budget(
    spec: &GroupSpec,
    x: &Element,
    limit: u32,
    budget: usize,
) -> Result<u32> {
    if !spec.family().contains(x) {
        return Err(CurvError::FamilyMismatch(format!(
            "{x} is not an element of {}",
            spec.family().describe()
        )));
    }
    let identity = spec.identity();
    if *x == identity {
        return Ok(0);
    }
    let gens = spec.generators().elements();

    struct Side {
        seen: HashMap<Element, u32>,
        frontier: Vec<Element>,
        depth: u32,
    }
    let start = |e: Element| Side {
        seen: HashMap::from([(e.clone(), 0)]),
        frontier: vec![e],
        depth: 0,
    };
    let mut fwd = start(identity);
    let mut bwd = start(x.clone());

    loop {
        // no meeting so far means |x| > fwd.depth + bwd.depth
        if fwd.depth + bwd.depth >= limit {
            return Err(CurvError::NormExceedsLimit { element: spec.render(x), limit });
        }
        let (grow, other) = if fwd.frontier.len() <= bwd.frontier.len() {
            (&mut fwd, &bwd)
        } else {
            (&mut bwd, &fwd)
        };
        let candidates: Vec<Element> = grow
            .frontier
            .par_iter()
            .flat_map_iter(|g| gens.iter().map(move |s| spec.multiply(g, s)))
            .collect::<Result<Vec<_>>>()?;
        grow.depth += 1;
        let mut next = Vec::new();
        let mut best: Option<u32> = None;
        for y in candidates {
            if grow.seen.contains_key(&y) {
                continue;
            }
            if let Some(&d) = other.seen.get(&y) {
                let total = grow.depth + d;
                best = Some(best.map_or(total, |b| b.min(total)));
            }
            grow.seen.insert(y.clone(), grow.depth);
            next.push(y);
        }
        if let Some(d) = best {
            return Ok(d);
        }
        if next.is_empty() {
            return Err(CurvError::Unreachable(spec.render(x)));
        }
        grow.frontier = next;
        note_keys(fwd.seen.len() + bwd.seen.len());
        if fwd.seen.len() + bwd.seen.len() > budget {
            return Err(CurvError::ResourceCap { budget, sphere: fwd.depth + bwd.depth });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Family;

    fn std_spec(f: Family) -> GroupSpec {
        GroupSpec::standard(f).unwrap()
    }

    #[test]
    fn free_group_sphere_counts() {
        let t = enumerate_ball(&std_spec(Family::free(2).unwrap()), 2).unwrap();
        assert_eq!(t.counts(), vec![1, 4, 12]);
        assert_eq!(t.len(), 17);
    }

    #[test]
    fn radius_zero_is_identity_only() {
        let t = enumerate_ball(&std_spec(Family::Heisenberg3), 0).unwrap();
        assert_eq!(t.counts(), vec![1]);
    }

    #[test]
    fn abelian_ball_size() {
        let t = enumerate_ball(&std_spec(Family::free_abelian(2).unwrap()), 3).unwrap();
        assert_eq!(t.len(), 25);
    }

    #[test]
    fn heisenberg_center_has_norm_four() {
        let spec = std_spec(Family::Heisenberg3);
        let t = enumerate_ball(&spec, 4).unwrap();
        let z = Element::Heisenberg([0, 0, 1]);
        assert_eq!(t.norm(&z).unwrap(), 4);
        let t3 = enumerate_ball(&spec, 3).unwrap();
        assert!(matches!(t3.norm(&z), Err(CurvError::OutOfBall { .. })));
        assert_eq!(norm_targeted(&spec, &z, 6).unwrap(), 4);
    }

    #[test]
    fn targeted_examples() {
        let z2 = std_spec(Family::free_abelian(2).unwrap());
        assert_eq!(norm_targeted(&z2, &Element::Abelian(vec![5, 5]), 12).unwrap(), 10);
        let f2 = std_spec(Family::free(2).unwrap());
        let x = f2.parse("ababab").unwrap();
        assert_eq!(norm_targeted(&f2, &x, 8).unwrap(), 6);
        assert!(matches!(
            norm_targeted(&f2, &x, 5),
            Err(CurvError::NormExceedsLimit { .. })
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let f2 = std_spec(Family::free(2).unwrap());
        let err = enumerate_ball_with_budget(&f2, 10, 1000).unwrap_err();
        assert_eq!(err, CurvError::ResourceCap { budget: 1000, sphere: 6 });
    }

    #[test]
    fn dihedral_kernel_of_parity() {
        let spec = std_spec(Family::InfiniteDihedral);
        let t = enumerate_ball(&spec, 2).unwrap();
        let ker = KernelSpec::new(&spec, FiniteGroup::cyclic(2), vec![1, 1]).unwrap();
        let r = restrict_to_kernel(&t, &ker).unwrap();
        assert_eq!(r.counts(), vec![1, 0, 2]);
        let names: Vec<String> = r.sphere(2).iter().map(|x| spec.render(x)).collect();
        assert_eq!(names, vec!["ba", "ab"]);
    }

    #[test]
    fn free_kernel_of_a_parity() {
        let spec = std_spec(Family::free(2).unwrap());
        let t = enumerate_ball(&spec, 3).unwrap();
        let ker = KernelSpec::new(&spec, FiniteGroup::cyclic(2), vec![1, 1, 0, 0]).unwrap();
        let r = restrict_to_kernel(&t, &ker).unwrap();
        let s1: Vec<String> = r.sphere(1).iter().map(|x| spec.render(x)).collect();
        assert_eq!(s1, vec!["B", "b"]);
        // trivial quotient changes nothing
        let all = restrict_to_kernel(&t, &KernelSpec::trivial(&spec)).unwrap();
        assert_eq!(all.counts(), t.counts());
    }

    #[test]
    fn inconsistent_kernel_is_detected() {
        // a -> 1, b -> 0 in Z/3 violates a² = 1 in D∞ only through relations: use Z2 x Z
        let spec = std_spec(Family::InfiniteDihedral);
        // images not inverse-compatible are rejected up front
        assert!(KernelSpec::new(&spec, FiniteGroup::cyclic(3), vec![1, 0]).is_err());

        // in Z², a ↦ 1 and b ↦ (12) in S3 is not a homomorphism since ab = ba
        let z2 = std_spec(Family::free_abelian(2).unwrap());
        let s3 = FiniteGroup::symmetric3();
        let c = s3.lookup("(123)").unwrap();
        let t = s3.lookup("(12)").unwrap();
        let ker = KernelSpec::new(&z2, s3.clone(), vec![c, s3.inv(c), t, t]).unwrap();
        let ball = enumerate_ball(&z2, 2).unwrap();
        assert!(matches!(
            restrict_to_kernel(&ball, &ker),
            Err(CurvError::KernelInconsistent(_))
        ));
    }

    #[test]
    fn finite_group_ball_saturates() {
        let spec = std_spec(Family::Finite(Arc::new(FiniteGroup::symmetric3())));
        let t = enumerate_ball(&spec, 4).unwrap();
        assert_eq!(t.counts(), vec![1, 5, 0, 0, 0]);
    }

    #[test]
    fn csv_export_has_header_and_rows() {
        let spec = std_spec(Family::free(2).unwrap());
        let t = enumerate_ball(&spec, 1).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "canonical_key,norm,in_kernel");
        assert_eq!(lines[1], "1,0,true");
        assert_eq!(lines.len(), 6);
    }
}
