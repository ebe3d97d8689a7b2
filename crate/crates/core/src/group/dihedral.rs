//! The infinite dihedral group `D∞ = ⟨a, b | a² = b² = 1⟩`.
//!
//! Elements are kept in the normal form `(ab)^k · a^ε`. The same group is
//! also described by reduced alternating words in `a` and `b`; [`AltWord`]
//! is that description and is used for rendering and by the finite-by-D∞
//! extensions, whose elements carry a word over the lifted letters.

/// `(ab)^k · a^reflect`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dihedral {
    pub k: i64,
    pub reflect: bool,
}

impl Dihedral {
    pub const IDENTITY: Dihedral = Dihedral { k: 0, reflect: false };
    pub const A: Dihedral = Dihedral { k: 0, reflect: true };
    pub const B: Dihedral = Dihedral { k: -1, reflect: true };

    pub fn mul(self, rhs: Dihedral) -> Dihedral {
        // a · (ab)^k = (ab)^{-k} · a
        let k = if self.reflect { self.k - rhs.k } else { self.k + rhs.k };
        Dihedral { k, reflect: self.reflect ^ rhs.reflect }
    }

    pub fn inv(self) -> Dihedral {
        if self.reflect {
            self
        } else {
            Dihedral { k: -self.k, reflect: false }
        }
    }

    pub fn to_word(self) -> AltWord {
        let m = self.k.unsigned_abs();
        match (self.reflect, self.k >= 0) {
            (false, true) => AltWord::new(Letter::A, 2 * m),
            (false, false) => AltWord::new(Letter::B, 2 * m),
            (true, true) => AltWord::new(Letter::A, 2 * m + 1),
            (true, false) => AltWord::new(Letter::B, 2 * m - 1),
        }
    }

    pub fn from_word(w: AltWord) -> Dihedral {
        let m = (w.len / 2) as i64;
        let odd = w.len % 2 == 1;
        match (w.first, odd) {
            (Letter::A, false) => Dihedral { k: m, reflect: false },
            (Letter::A, true) => Dihedral { k: m, reflect: true },
            (Letter::B, false) => Dihedral { k: -m, reflect: false },
            // (ba)^m b = (ab)^{-m-1} a
            (Letter::B, true) => Dihedral { k: -m - 1, reflect: true },
        }
    }

    /// Word length with respect to `{a, b}`.
    pub fn length(self) -> u64 {
        self.to_word().len
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn other(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
        }
    }
}

/// A reduced alternating word in `a`, `b`: determined by its first letter and length.
///
/// The empty word is normalised to `first = A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AltWord {
    pub len: u64,
    pub first: Letter,
}

impl AltWord {
    pub const EMPTY: AltWord = AltWord { len: 0, first: Letter::A };

    pub fn new(first: Letter, len: u64) -> AltWord {
        if len == 0 {
            AltWord::EMPTY
        } else {
            AltWord { len, first }
        }
    }

    pub fn letter(self, i: u64) -> Letter {
        debug_assert!(i < self.len);
        if i % 2 == 0 {
            self.first
        } else {
            self.first.other()
        }
    }

    pub fn last(self) -> Letter {
        self.letter(self.len - 1)
    }

    pub fn drop_last(self) -> AltWord {
        AltWord::new(self.first, self.len - 1)
    }

    pub fn drop_first(self) -> AltWord {
        AltWord::new(self.first.other(), self.len - 1)
    }

    /// Concatenation of two words that do not cancel at the seam.
    pub fn join(self, rhs: AltWord) -> AltWord {
        if self.len == 0 {
            return rhs;
        }
        if rhs.len == 0 {
            return self;
        }
        debug_assert_ne!(self.last(), rhs.first);
        AltWord::new(self.first, self.len + rhs.len)
    }

    pub fn letters(self) -> impl Iterator<Item = Letter> {
        (0..self.len).map(move |i| self.letter(i))
    }

    pub fn render(self) -> String {
        if self.len == 0 {
            "1".to_string()
        } else {
            self.letters().map(Letter::as_char).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_involutions() {
        assert_eq!(Dihedral::A.mul(Dihedral::A), Dihedral::IDENTITY);
        assert_eq!(Dihedral::B.mul(Dihedral::B), Dihedral::IDENTITY);
        assert_eq!(Dihedral::A.mul(Dihedral::B), Dihedral { k: 1, reflect: false });
    }

    #[test]
    fn word_round_trip_on_small_elements() {
        // multiply out every alternating word and compare with from_word
        for first in [Letter::A, Letter::B] {
            for len in 0..12u64 {
                let w = AltWord::new(first, len);
                let mut acc = Dihedral::IDENTITY;
                for l in w.letters() {
                    acc = acc.mul(if l == Letter::A { Dihedral::A } else { Dihedral::B });
                }
                assert_eq!(Dihedral::from_word(w), acc);
                assert_eq!(acc.to_word(), w);
                assert_eq!(acc.length(), len);
            }
        }
    }

    #[test]
    fn inverse() {
        for k in -4..=4 {
            for reflect in [false, true] {
                let g = Dihedral { k, reflect };
                assert_eq!(g.mul(g.inv()), Dihedral::IDENTITY);
            }
        }
    }
}
