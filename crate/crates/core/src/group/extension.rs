//! Finite extensions of the infinite dihedral group, `1 → F → Γ → D∞ → 1`.
//!
//! Γ is described by
//! - the finite kernel `F` (a multiplication table),
//! - the conjugation actions `f ↦ ā f ā⁻¹` and `f ↦ b̄ f b̄⁻¹` of the chosen lifts,
//! - the squares `ā² = g_a` and `b̄² = g_b`, both in `F`.
//!
//! Every element is uniquely `f · w(ā, b̄)` with `f ∈ F` and `w` a reduced
//! alternating word; [`ExtElement`] stores exactly that pair.

use std::sync::Arc;

use super::dihedral::{AltWord, Dihedral, Letter};
use super::finite::FiniteGroup;
use crate::error::{CurvError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElement {
    pub f: u32,
    pub word: AltWord,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DihedralExtension {
    finite: Arc<FiniteGroup>,
    action_a: Vec<u32>,
    action_b: Vec<u32>,
    a_square: u32,
    b_square: u32,
}

impl DihedralExtension {
    /// Checks the extension data for each `Z/2` factor of `D∞ = Z/2 * Z/2`:
    /// the action is an automorphism fixing the square, and acting twice is
    /// conjugation by the square.
    pub fn new(
        finite: Arc<FiniteGroup>,
        action_a: Vec<u32>,
        action_b: Vec<u32>,
        a_square: u32,
        b_square: u32,
    ) -> Result<Self> {
        for (name, action, sq) in [("a", &action_a, a_square), ("b", &action_b, b_square)] {
            if !finite.contains(sq) {
                return Err(CurvError::InvalidGroup(format!("square of {name} out of range")));
            }
            if !finite.is_automorphism(action) {
                return Err(CurvError::InvalidGroup(format!(
                    "action of {name} is not an automorphism of the finite kernel"
                )));
            }
            if action[sq as usize] != sq {
                return Err(CurvError::InvalidGroup(format!(
                    "action of {name} does not fix its square"
                )));
            }
            for f in 0..finite.order() as u32 {
                let twice = action[action[f as usize] as usize];
                let inner = finite.mul(finite.mul(sq, f), finite.inv(sq));
                if twice != inner {
                    return Err(CurvError::InvalidGroup(format!(
                        "acting twice by {name} is not conjugation by its square"
                    )));
                }
            }
        }
        Ok(DihedralExtension { finite, action_a, action_b, a_square, b_square })
    }

    /// `Z/2 × D∞`: trivial action, lifts are honest involutions.
    pub fn z2_times_dinf() -> Self {
        Self::new(Arc::new(FiniteGroup::cyclic(2)), vec![0, 1], vec![0, 1], 0, 0)
            .expect("Z/2 x Dinf data is valid")
    }

    /// Trivial kernel: plain `D∞` in extension clothing.
    pub fn trivial() -> Self {
        Self::new(Arc::new(FiniteGroup::cyclic(1)), vec![0], vec![0], 0, 0)
            .expect("trivial extension data is valid")
    }

    pub fn finite(&self) -> &FiniteGroup {
        &self.finite
    }

    pub fn finite_arc(&self) -> &Arc<FiniteGroup> {
        &self.finite
    }

    pub fn action(&self, c: Letter) -> &[u32] {
        match c {
            Letter::A => &self.action_a,
            Letter::B => &self.action_b,
        }
    }

    pub fn square(&self, c: Letter) -> u32 {
        match c {
            Letter::A => self.a_square,
            Letter::B => self.b_square,
        }
    }

    pub fn identity(&self) -> ExtElement {
        ExtElement { f: self.finite.identity(), word: AltWord::EMPTY }
    }

    pub fn lift(&self, c: Letter) -> ExtElement {
        ExtElement { f: self.finite.identity(), word: AltWord::new(c, 1) }
    }

    pub fn kernel_element(&self, f: u32) -> ExtElement {
        ExtElement { f, word: AltWord::EMPTY }
    }

    pub fn contains(&self, x: &ExtElement) -> bool {
        self.finite.contains(x.f)
    }

    /// `w̄ f w̄⁻¹` for the lifted word `w̄`.
    fn conj_by_word(&self, word: AltWord, f: u32) -> u32 {
        let mut g = f;
        for i in (0..word.len).rev() {
            g = self.action(word.letter(i))[g as usize];
        }
        g
    }

    pub fn mul(&self, x: &ExtElement, y: &ExtElement) -> ExtElement {
        let fg = &*self.finite;
        let mut prefix = fg.mul(x.f, self.conj_by_word(x.word, y.f));
        let (mut w1, mut w2) = (x.word, y.word);
        // c̄ c̄ = g_c, pushed to the front through the remaining left word
        while w1.len > 0 && w2.len > 0 && w1.last() == w2.first {
            let c = w2.first;
            w1 = w1.drop_last();
            w2 = w2.drop_first();
            prefix = fg.mul(prefix, self.conj_by_word(w1, self.square(c)));
        }
        ExtElement { f: prefix, word: w1.join(w2) }
    }

    pub fn inv(&self, x: &ExtElement) -> ExtElement {
        let fg = &*self.finite;
        let mut acc = self.identity();
        for i in (0..x.word.len).rev() {
            let c = x.word.letter(i);
            // c̄⁻¹ = g_c⁻¹ c̄
            let letter_inv = ExtElement { f: fg.inv(self.square(c)), word: AltWord::new(c, 1) };
            acc = self.mul(&acc, &letter_inv);
        }
        self.mul(&acc, &self.kernel_element(fg.inv(x.f)))
    }

    /// Image under the quotient map to `D∞`.
    pub fn project(&self, x: &ExtElement) -> Dihedral {
        Dihedral::from_word(x.word)
    }

    /// `φ⁻¹({1, a, b}) ∖ {1}` in the order `g_i, ā, g_i ā, b̄, g_i b̄`.
    pub fn preimage_generators(&self) -> Vec<ExtElement> {
        let id = self.finite.identity();
        let others: Vec<u32> = (0..self.finite.order() as u32).filter(|&g| g != id).collect();
        let mut out: Vec<ExtElement> = others.iter().map(|&g| self.kernel_element(g)).collect();
        for c in [Letter::A, Letter::B] {
            out.push(self.lift(c));
            out.extend(others.iter().map(|&g| ExtElement { f: g, word: AltWord::new(c, 1) }));
        }
        out
    }

    pub fn render(&self, x: &ExtElement) -> String {
        format!("{}:{}", self.finite.name(x.f), x.word.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3_by_dinf() -> DihedralExtension {
        // F = S3, ā acts by conjugation with (12) and ā² = e; b̄ acts by
        // conjugation with (123) and b̄² = (123)² = (132)
        let f = FiniteGroup::symmetric3();
        let t = f.lookup("(12)").unwrap();
        let c = f.lookup("(123)").unwrap();
        let conj_t: Vec<u32> = (0..6).map(|g| f.mul(f.mul(t, g), f.inv(t))).collect();
        let conj_c: Vec<u32> = (0..6).map(|g| f.mul(f.mul(c, g), f.inv(c))).collect();
        let c2 = f.mul(c, c);
        DihedralExtension::new(Arc::new(f), conj_t, conj_c, 0, c2).unwrap()
    }

    fn all_small(ext: &DihedralExtension, max_len: u64) -> Vec<ExtElement> {
        let mut v = Vec::new();
        for f in 0..ext.finite().order() as u32 {
            for first in [Letter::A, Letter::B] {
                for len in 0..=max_len {
                    let e = ExtElement { f, word: AltWord::new(first, len) };
                    if !v.contains(&e) {
                        v.push(e);
                    }
                }
            }
        }
        v
    }

    #[test]
    fn associativity_and_inverses() {
        let ext = s3_by_dinf();
        let elems = all_small(&ext, 3);
        for x in &elems {
            assert_eq!(ext.mul(x, &ext.inv(x)), ext.identity());
            assert_eq!(ext.mul(&ext.inv(x), x), ext.identity());
            for y in &elems {
                for z in elems.iter().step_by(5) {
                    let l = ext.mul(&ext.mul(x, y), z);
                    let r = ext.mul(x, &ext.mul(y, z));
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn squares_land_in_kernel() {
        let ext = s3_by_dinf();
        let b = ext.lift(Letter::B);
        let bb = ext.mul(&b, &b);
        assert_eq!(bb.word, AltWord::EMPTY);
        assert_eq!(ext.finite().name(bb.f), "(132)");
    }

    #[test]
    fn rejects_bad_square() {
        let f = Arc::new(FiniteGroup::cyclic(3));
        // trivial action but a_square = 1 is fine; action inversion with square 1 is not
        assert!(DihedralExtension::new(f.clone(), vec![0, 1, 2], vec![0, 1, 2], 1, 0).is_ok());
        assert!(DihedralExtension::new(f, vec![0, 2, 1], vec![0, 1, 2], 1, 0).is_err());
    }

    #[test]
    fn z2_dinf_generators() {
        let ext = DihedralExtension::z2_times_dinf();
        let gens = ext.preimage_generators();
        assert_eq!(gens.len(), 5);
    }
}
