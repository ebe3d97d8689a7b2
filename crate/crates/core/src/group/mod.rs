//! Group families with computable multiplication and canonical forms.
//!
//! Every [`Element`] is stored in the canonical form of its family, so two
//! elements are equal as group elements exactly when they are equal as
//! values. The derived `Hash`/`Ord` therefore act as canonical keys.

pub mod dihedral;
pub mod extension;
pub mod finite;
pub mod free;
pub mod heisenberg;
mod literal;
pub mod matrix;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{CurvError, Result};

pub use dihedral::{AltWord, Dihedral, Letter};
pub use extension::{DihedralExtension, ExtElement};
pub use finite::FiniteGroup;
pub use matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Abelian(Vec<i64>),
    Free(Vec<i32>),
    Heisenberg([i64; 3]),
    Dihedral(Dihedral),
    Finite(u32),
    Product(Box<Element>, Box<Element>),
    Extension(ExtElement),
    Matrix(IntMatrix),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    FreeAbelian { rank: usize },
    Free { rank: usize },
    Heisenberg3,
    InfiniteDihedral,
    Finite(Arc<FiniteGroup>),
    DirectProduct(Box<Family>, Box<Family>),
    FiniteByDihedral(Arc<DihedralExtension>),
    /// Subgroup of `GL(dim, Z)`; `letters` name the matrices usable in word literals.
    IntegerMatrix { dim: usize, letters: Vec<IntMatrix> },
}

impl Family {
    pub fn free_abelian(rank: usize) -> Result<Family> {
        if rank == 0 {
            return Err(CurvError::InvalidGroup("free abelian rank must be at least 1".into()));
        }
        Ok(Family::FreeAbelian { rank })
    }

    pub fn free(rank: usize) -> Result<Family> {
        if rank == 0 || rank > 26 {
            return Err(CurvError::InvalidGroup("free rank must be between 1 and 26".into()));
        }
        Ok(Family::Free { rank })
    }

    pub fn product(left: Family, right: Family) -> Family {
        Family::DirectProduct(Box::new(left), Box::new(right))
    }

    /// Matrix group generated by `gens`; each must be invertible over Z.
    pub fn integer_matrix(gens: Vec<IntMatrix>) -> Result<Family> {
        let dim = gens
            .first()
            .map(IntMatrix::dim)
            .ok_or_else(|| CurvError::InvalidGroup("matrix family needs generators".into()))?;
        for g in &gens {
            if g.dim() != dim {
                return Err(CurvError::InvalidGroup("matrix generators differ in dimension".into()));
            }
            if g.inverse().is_none() {
                return Err(CurvError::InvalidGroup(format!(
                    "matrix {} is not invertible over the integers",
                    g.render()
                )));
            }
        }
        Ok(Family::IntegerMatrix { dim, letters: gens })
    }

    pub fn identity(&self) -> Element {
        match self {
            Family::FreeAbelian { rank } => Element::Abelian(vec![0; *rank]),
            Family::Free { .. } => Element::Free(Vec::new()),
            Family::Heisenberg3 => Element::Heisenberg([0; 3]),
            Family::InfiniteDihedral => Element::Dihedral(Dihedral::IDENTITY),
            Family::Finite(g) => Element::Finite(g.identity()),
            Family::DirectProduct(l, r) => {
                Element::Product(Box::new(l.identity()), Box::new(r.identity()))
            }
            Family::FiniteByDihedral(ext) => Element::Extension(ext.identity()),
            Family::IntegerMatrix { dim, .. } => Element::Matrix(IntMatrix::identity(*dim)),
        }
    }

    pub fn is_identity(&self, g: &Element) -> bool {
        *g == self.identity()
    }

    /// Shape check: does `g` have the canonical form of this family?
    pub fn contains(&self, g: &Element) -> bool {
        match (self, g) {
            (Family::FreeAbelian { rank }, Element::Abelian(v)) => v.len() == *rank,
            (Family::Free { rank }, Element::Free(w)) => {
                w.iter().all(|&x| x != 0 && x.unsigned_abs() as usize <= *rank)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (Family::Heisenberg3, Element::Heisenberg(_)) => true,
            (Family::InfiniteDihedral, Element::Dihedral(_)) => true,
            (Family::Finite(f), Element::Finite(x)) => f.contains(*x),
            (Family::DirectProduct(l, r), Element::Product(a, b)) => l.contains(a) && r.contains(b),
            (Family::FiniteByDihedral(ext), Element::Extension(x)) => ext.contains(x),
            (Family::IntegerMatrix { dim, .. }, Element::Matrix(m)) => {
                m.dim() == *dim && m.inverse().is_some()
            }
            _ => false,
        }
    }

    fn mismatch(&self, g: &Element) -> CurvError {
        CurvError::FamilyMismatch(format!("{g:?} is not an element of {}", self.describe()))
    }

    pub fn multiply(&self, g: &Element, h: &Element) -> Result<Element> {
        let out = match (self, g, h) {
            (Family::FreeAbelian { rank }, Element::Abelian(a), Element::Abelian(b))
                if a.len() == *rank && b.len() == *rank =>
            {
                Element::Abelian(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Family::Free { .. }, Element::Free(u), Element::Free(v)) => {
                Element::Free(free::mul(u, v))
            }
            (Family::Heisenberg3, Element::Heisenberg(a), Element::Heisenberg(b)) => {
                Element::Heisenberg(heisenberg::mul(a, b))
            }
            (Family::InfiniteDihedral, Element::Dihedral(a), Element::Dihedral(b)) => {
                Element::Dihedral(a.mul(*b))
            }
            (Family::Finite(f), Element::Finite(a), Element::Finite(b))
                if f.contains(*a) && f.contains(*b) =>
            {
                Element::Finite(f.mul(*a, *b))
            }
            (Family::DirectProduct(l, r), Element::Product(a1, b1), Element::Product(a2, b2)) => {
                Element::Product(Box::new(l.multiply(a1, a2)?), Box::new(r.multiply(b1, b2)?))
            }
            (Family::FiniteByDihedral(ext), Element::Extension(a), Element::Extension(b))
                if ext.contains(a) && ext.contains(b) =>
            {
                Element::Extension(ext.mul(a, b))
            }
            (Family::IntegerMatrix { dim, .. }, Element::Matrix(a), Element::Matrix(b))
                if a.dim() == *dim && b.dim() == *dim =>
            {
                Element::Matrix(a.mul(b))
            }
            (_, g, h) => {
                return Err(if self.contains(g) { self.mismatch(h) } else { self.mismatch(g) })
            }
        };
        Ok(out)
    }

    pub fn invert(&self, g: &Element) -> Result<Element> {
        let out = match (self, g) {
            (Family::FreeAbelian { rank }, Element::Abelian(a)) if a.len() == *rank => {
                Element::Abelian(a.iter().map(|x| -x).collect())
            }
            (Family::Free { .. }, Element::Free(u)) => Element::Free(free::inv(u)),
            (Family::Heisenberg3, Element::Heisenberg(a)) => {
                Element::Heisenberg(heisenberg::inv(a))
            }
            (Family::InfiniteDihedral, Element::Dihedral(a)) => Element::Dihedral(a.inv()),
            (Family::Finite(f), Element::Finite(a)) if f.contains(*a) => Element::Finite(f.inv(*a)),
            (Family::DirectProduct(l, r), Element::Product(a, b)) => {
                Element::Product(Box::new(l.invert(a)?), Box::new(r.invert(b)?))
            }
            (Family::FiniteByDihedral(ext), Element::Extension(a)) if ext.contains(a) => {
                Element::Extension(ext.inv(a))
            }
            (Family::IntegerMatrix { dim, .. }, Element::Matrix(a)) if a.dim() == *dim => {
                Element::Matrix(a.inverse().ok_or_else(|| {
                    CurvError::FamilyMismatch(format!("{} is not in GL(n, Z)", a.render()))
                })?)
            }
            (_, g) => return Err(self.mismatch(g)),
        };
        Ok(out)
    }

    /// `s · x · s⁻¹`
    pub fn conjugate(&self, s: &Element, x: &Element) -> Result<Element> {
        let sx = self.multiply(s, x)?;
        self.multiply(&sx, &self.invert(s)?)
    }

    /// `g h g⁻¹ h⁻¹`
    pub fn commutator(&self, g: &Element, h: &Element) -> Result<Element> {
        let gh = self.multiply(g, h)?;
        let gi = self.invert(g)?;
        let hi = self.invert(h)?;
        self.multiply(&self.multiply(&gh, &gi)?, &hi)
    }

    pub fn power(&self, g: &Element, n: i64) -> Result<Element> {
        let base = if n < 0 { self.invert(g)? } else { g.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = self.multiply(&sq, &sq)?;
            }
        }
        Ok(acc)
    }

    /// Named letters usable in word literals (`a`, `b`, …; capitals invert).
    pub fn letters(&self) -> Vec<Element> {
        match self {
            Family::FreeAbelian { rank } => (0..*rank)
                .map(|i| {
                    let mut v = vec![0; *rank];
                    v[i] = 1;
                    Element::Abelian(v)
                })
                .collect(),
            Family::Free { rank } => (1..=*rank as i32).map(|i| Element::Free(vec![i])).collect(),
            Family::Heisenberg3 => {
                vec![Element::Heisenberg(heisenberg::A), Element::Heisenberg(heisenberg::B)]
            }
            Family::InfiniteDihedral => {
                vec![Element::Dihedral(Dihedral::A), Element::Dihedral(Dihedral::B)]
            }
            Family::FiniteByDihedral(ext) => vec![
                Element::Extension(ext.lift(Letter::A)),
                Element::Extension(ext.lift(Letter::B)),
            ],
            Family::IntegerMatrix { letters, .. } => {
                letters.iter().cloned().map(Element::Matrix).collect()
            }
            Family::Finite(_) | Family::DirectProduct(..) => Vec::new(),
        }
    }

    /// The generating set used when none is given explicitly.
    pub fn standard_generators(&self) -> Vec<Element> {
        match self {
            Family::FreeAbelian { .. }
            | Family::Free { .. }
            | Family::Heisenberg3
            | Family::IntegerMatrix { .. } => {
                let mut out = Vec::new();
                for g in self.letters() {
                    let gi = self.invert(&g).expect("letters belong to the family");
                    out.push(g);
                    out.push(gi);
                }
                out
            }
            Family::InfiniteDihedral => self.letters(),
            Family::Finite(f) => (0..f.order() as u32)
                .filter(|&x| x != f.identity())
                .map(Element::Finite)
                .collect(),
            Family::DirectProduct(l, r) => {
                let (le, re) = (l.identity(), r.identity());
                l.standard_generators()
                    .into_iter()
                    .map(|s| Element::Product(Box::new(s), Box::new(re.clone())))
                    .chain(
                        r.standard_generators()
                            .into_iter()
                            .map(|t| Element::Product(Box::new(le.clone()), Box::new(t))),
                    )
                    .collect()
            }
            Family::FiniteByDihedral(ext) => {
                ext.preimage_generators().into_iter().map(Element::Extension).collect()
            }
        }
    }

    /// Image in `Z^r` under a homomorphism onto the free part of the
    /// abelianization; `None` when this family offers none.
    pub fn abelianization(&self, g: &Element) -> Option<Vec<i64>> {
        match (self, g) {
            (Family::FreeAbelian { .. }, Element::Abelian(v)) => Some(v.clone()),
            (Family::Free { rank }, Element::Free(w)) => {
                let mut v = vec![0i64; *rank];
                for &x in w {
                    v[x.unsigned_abs() as usize - 1] += x.signum() as i64;
                }
                Some(v)
            }
            (Family::Heisenberg3, Element::Heisenberg(t)) => Some(vec![t[0], t[1]]),
            // finite abelianization: no free part
            (Family::InfiniteDihedral, _)
            | (Family::Finite(_), _)
            | (Family::FiniteByDihedral(_), _) => Some(Vec::new()),
            (Family::DirectProduct(l, r), Element::Product(a, b)) => {
                let mut v = l.abelianization(a)?;
                v.extend(r.abelianization(b)?);
                Some(v)
            }
            _ => None,
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            Family::FreeAbelian { .. } => true,
            Family::Free { rank } => *rank == 1,
            Family::Finite(f) => {
                let n = f.order() as u32;
                (0..n).all(|a| (0..n).all(|b| f.mul(a, b) == f.mul(b, a)))
            }
            Family::DirectProduct(l, r) => l.is_abelian() && r.is_abelian(),
            _ => false,
        }
    }

    pub fn render(&self, g: &Element) -> String {
        match (self, g) {
            (Family::Finite(f), Element::Finite(x)) if f.contains(*x) => f.name(*x).to_string(),
            (Family::DirectProduct(l, r), Element::Product(a, b)) => {
                format!("[{}|{}]", l.render(a), r.render(b))
            }
            (Family::FiniteByDihedral(ext), Element::Extension(x)) if ext.contains(x) => {
                ext.render(x)
            }
            (_, g) => g.to_string(),
        }
    }

    pub fn parse(&self, literal: &str) -> Result<Element> {
        literal::parse(self, literal)
    }

    pub fn describe(&self) -> String {
        match self {
            Family::FreeAbelian { rank } => format!("zn:{rank}"),
            Family::Free { rank } => format!("free:{rank}"),
            Family::Heisenberg3 => "heis3".into(),
            Family::InfiniteDihedral => "dinf".into(),
            Family::Finite(f) => format!("finite({})", f.order()),
            Family::DirectProduct(l, r) => format!("{} x {}", l.describe(), r.describe()),
            Family::FiniteByDihedral(ext) => format!("finite({})-by-dinf", ext.finite().order()),
            Family::IntegerMatrix { dim, letters } => {
                format!("matrix(dim {dim}, {} letters)", letters.len())
            }
        }
    }
}

/// Context-free rendering; finite elements print as indices.
impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Abelian(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            Element::Free(w) => f.write_str(&free::render(w)),
            Element::Heisenberg(t) => f.write_str(&heisenberg::render(t)),
            Element::Dihedral(d) => f.write_str(&d.to_word().render()),
            Element::Finite(x) => write!(f, "{x}"),
            Element::Product(a, b) => write!(f, "[{a}|{b}]"),
            Element::Extension(x) => write!(f, "{}:{}", x.f, x.word.render()),
            Element::Matrix(m) => f.write_str(&m.render()),
        }
    }
}

/// A finite symmetric generating set without the identity, in first-seen order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSet {
    elements: Vec<Element>,
    inverse: Vec<usize>,
    index: HashMap<Element, usize>,
}

impl GeneratingSet {
    pub fn new(family: &Family, candidates: Vec<Element>) -> Result<Self> {
        let mut elements = Vec::new();
        let mut index = HashMap::new();
        for g in candidates {
            if !family.contains(&g) {
                return Err(CurvError::InvalidGeneratingSet(format!(
                    "{g} is not an element of {}",
                    family.describe()
                )));
            }
            if family.is_identity(&g) {
                return Err(CurvError::InvalidGeneratingSet(
                    "the identity may not be a generator".into(),
                ));
            }
            if !index.contains_key(&g) {
                index.insert(g.clone(), elements.len());
                elements.push(g);
            }
        }
        if elements.is_empty() {
            return Err(CurvError::InvalidGeneratingSet("generating set is empty".into()));
        }
        let mut inverse = Vec::with_capacity(elements.len());
        for g in &elements {
            let gi = family.invert(g)?;
            let j = index.get(&gi).copied().ok_or_else(|| {
                CurvError::InvalidGeneratingSet(format!(
                    "not symmetric: inverse of {} is missing",
                    family.render(g)
                ))
            })?;
            inverse.push(j);
        }
        Ok(GeneratingSet { elements, inverse, index })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn index_of(&self, g: &Element) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &Element) -> bool {
        self.index.contains_key(g)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Element> {
        self.elements.iter()
    }
}

/// A concrete group family together with the generating set `S` of the word metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    family: Family,
    generators: GeneratingSet,
}

impl GroupSpec {
    pub fn new(family: Family, generators: Vec<Element>) -> Result<Self> {
        let generators = GeneratingSet::new(&family, generators)?;
        Ok(GroupSpec { family, generators })
    }

    pub fn standard(family: Family) -> Result<Self> {
        let gens = family.standard_generators();
        Self::new(family, gens)
    }

    pub fn with_generators(&self, generators: GeneratingSet) -> GroupSpec {
        GroupSpec { family: self.family.clone(), generators }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn generators(&self) -> &GeneratingSet {
        &self.generators
    }

    pub fn identity(&self) -> Element {
        self.family.identity()
    }

    pub fn multiply(&self, g: &Element, h: &Element) -> Result<Element> {
        self.family.multiply(g, h)
    }

    pub fn invert(&self, g: &Element) -> Result<Element> {
        self.family.invert(g)
    }

    pub fn conjugate(&self, s: &Element, x: &Element) -> Result<Element> {
        self.family.conjugate(s, x)
    }

    pub fn commutator(&self, g: &Element, h: &Element) -> Result<Element> {
        self.family.commutator(g, h)
    }

    pub fn parse(&self, literal: &str) -> Result<Element> {
        self.family.parse(literal)
    }

    pub fn render(&self, g: &Element) -> String {
        self.family.render(g)
    }

    pub fn describe(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| self.render(g)).collect();
        format!("{} with S = {{{}}}", self.family.describe(), gens.join(", "))
    }

    /// `s · x · s⁻¹` for the generator with index `i`, using the cached inverse.
    pub(crate) fn conjugate_by_generator(&self, i: usize, x: &Element) -> Result<Element> {
        let s = self.generators.get(i);
        let si = self.generators.get(self.generators.inverse_index(i));
        self.family.multiply(&self.family.multiply(s, x)?, si)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis() -> Family {
        Family::Heisenberg3
    }

    #[test]
    fn heisenberg_law_examples() {
        let f = heis();
        let a = Element::Heisenberg([1, 0, 0]);
        let b = Element::Heisenberg([0, 1, 0]);
        // upper-triangular matrix product: z picks up x·y' = 1
        assert_eq!(f.multiply(&a, &b).unwrap(), Element::Heisenberg([1, 1, 1]));
        assert_eq!(f.invert(&a).unwrap(), Element::Heisenberg([-1, 0, 0]));
        assert_eq!(f.conjugate(&a, &b).unwrap(), Element::Heisenberg([0, 1, 1]));
        assert_eq!(f.commutator(&a, &b).unwrap(), Element::Heisenberg([0, 0, 1]));
    }

    #[test]
    fn free_group_examples() {
        let f = Family::free(2).unwrap();
        let a = f.parse("a").unwrap();
        let b = f.parse("b").unwrap();
        let ab = f.multiply(&a, &b).unwrap();
        let bi = f.invert(&b).unwrap();
        assert_eq!(f.multiply(&ab, &bi).unwrap(), a);
        assert_eq!(f.render(&f.invert(&ab).unwrap()), "BA");
        let c = f.conjugate(&b, &a).unwrap();
        assert_eq!(f.render(&c), "baB");
        assert_eq!(f.render(&f.commutator(&a, &b).unwrap()), "abAB");
    }

    #[test]
    fn dihedral_generator_is_involution() {
        let f = Family::InfiniteDihedral;
        let a = f.parse("a").unwrap();
        assert!(f.is_identity(&f.multiply(&a, &a).unwrap()));
    }

    #[test]
    fn abelian_examples() {
        let f = Family::free_abelian(2).unwrap();
        let x = Element::Abelian(vec![3, -4]);
        assert_eq!(f.invert(&x).unwrap(), Element::Abelian(vec![-3, 4]));
        let s = Element::Abelian(vec![0, 1]);
        assert_eq!(f.conjugate(&s, &x).unwrap(), x);
        assert!(f.is_identity(&f.commutator(&s, &x).unwrap()));
    }

    #[test]
    fn mismatched_families_are_rejected() {
        let f = Family::free(2).unwrap();
        let err = f.multiply(&Element::Heisenberg([0, 0, 1]), &f.identity()).unwrap_err();
        assert!(matches!(err, CurvError::FamilyMismatch(_)));
        let z2 = Family::free_abelian(2).unwrap();
        assert!(z2.multiply(&Element::Abelian(vec![1]), &z2.identity()).is_err());
    }

    #[test]
    fn generating_set_validation() {
        let f = Family::free(2).unwrap();
        let a = f.parse("a").unwrap();
        let ai = f.parse("A").unwrap();
        assert!(matches!(
            GeneratingSet::new(&f, vec![a.clone()]),
            Err(CurvError::InvalidGeneratingSet(_))
        ));
        assert!(GeneratingSet::new(&f, vec![a.clone(), ai.clone(), f.identity()]).is_err());
        let s = GeneratingSet::new(&f, vec![a.clone(), ai.clone(), a.clone()]).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.inverse_index(0), 1);
    }

    #[test]
    fn standard_sets_are_symmetric() {
        let families = vec![
            Family::free_abelian(3).unwrap(),
            Family::free(2).unwrap(),
            Family::Heisenberg3,
            Family::InfiniteDihedral,
            Family::Finite(Arc::new(FiniteGroup::symmetric3())),
            Family::product(
                Family::Finite(Arc::new(FiniteGroup::symmetric3())),
                Family::free_abelian(1).unwrap(),
            ),
            Family::FiniteByDihedral(Arc::new(DihedralExtension::z2_times_dinf())),
        ];
        for f in families {
            let spec = GroupSpec::standard(f.clone()).unwrap();
            assert!(spec.generators().len() > 0, "{}", f.describe());
        }
    }

    #[test]
    fn power_by_squaring() {
        let f = heis();
        let z = Element::Heisenberg([0, 0, 1]);
        assert_eq!(f.power(&z, 7).unwrap(), Element::Heisenberg([0, 0, 7]));
        let a = Element::Heisenberg([1, 0, 0]);
        assert_eq!(f.power(&a, -3).unwrap(), Element::Heisenberg([-3, 0, 0]));
    }
}
