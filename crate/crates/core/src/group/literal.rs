//! Element literals.
//!
//! - words over the family letters: `abAB` (capitals invert), `1` for the identity
//! - integer tuples: `(3,-4)` for free abelian, `(x,y,z)` for Heisenberg
//! - finite elements by name or index
//! - direct products: `[left|right]`
//! - finite-by-D∞: `f:word`, e.g. `1:ab`
//! - matrices: `[[1,1],[0,1]]`

use super::{Dihedral, Element, Family, IntMatrix};
use crate::error::{CurvError, Result};

fn fail(literal: &str, reason: impl Into<String>) -> CurvError {
    CurvError::Literal { literal: literal.to_string(), reason: reason.into() }
}

pub(super) fn parse(family: &Family, literal: &str) -> Result<Element> {
    let s = literal.trim();
    match family {
        Family::DirectProduct(l, r) => {
            let inner = strip_brackets(s);
            let (a, b) = split_top_level(inner, '|')
                .ok_or_else(|| fail(literal, "expected [left|right]"))?;
            Ok(Element::Product(Box::new(parse(l, a)?), Box::new(parse(r, b)?)))
        }
        Family::Finite(f) => {
            if let Some(x) = f.lookup(s) {
                return Ok(Element::Finite(x));
            }
            match s.parse::<u32>() {
                Ok(x) if f.contains(x) => Ok(Element::Finite(x)),
                _ => Err(fail(literal, "unknown finite group element")),
            }
        }
        Family::FiniteByDihedral(ext) => {
            let (fpart, word) = match s.split_once(':') {
                Some((fp, w)) => (Some(fp.trim()), w.trim()),
                None => (None, s),
            };
            let f = match fpart {
                None => ext.finite().identity(),
                Some(name) => match ext.finite().lookup(name) {
                    Some(x) => x,
                    None => name
                        .parse::<u32>()
                        .ok()
                        .filter(|&x| ext.finite().contains(x))
                        .ok_or_else(|| fail(literal, "unknown kernel element"))?,
                },
            };
            let w = parse_word(family, literal, word)?;
            family.multiply(&Element::Extension(ext.kernel_element(f)), &w)
        }
        Family::FreeAbelian { rank } if looks_numeric(s) => {
            let v = parse_tuple(literal, s)?;
            if v.len() != *rank {
                return Err(fail(literal, format!("expected {rank} coordinates")));
            }
            Ok(Element::Abelian(v))
        }
        Family::Heisenberg3 if looks_numeric(s) => {
            let v = parse_tuple(literal, s)?;
            let t: [i64; 3] =
                v.try_into().map_err(|_| fail(literal, "expected (x,y,z)"))?;
            Ok(Element::Heisenberg(t))
        }
        Family::InfiniteDihedral if looks_numeric(s) => {
            let v = parse_tuple(literal, s)?;
            match v.as_slice() {
                [k, e @ (0 | 1)] => Ok(Element::Dihedral(Dihedral { k: *k, reflect: *e == 1 })),
                _ => Err(fail(literal, "expected (k,0) or (k,1)")),
            }
        }
        Family::IntegerMatrix { dim, .. } if s.starts_with("[[") => {
            let rows: Vec<Vec<i64>> =
                serde_json::from_str(s).map_err(|e| fail(literal, e.to_string()))?;
            let m = IntMatrix::from_rows(&rows)?;
            if m.dim() != *dim {
                return Err(fail(literal, format!("expected a {dim}x{dim} matrix")));
            }
            let e = Element::Matrix(m);
            if !family.contains(&e) {
                return Err(fail(literal, "matrix is not invertible over the integers"));
            }
            Ok(e)
        }
        _ => parse_word(family, literal, s),
    }
}

fn looks_numeric(s: &str) -> bool {
    s.starts_with('(') || s.starts_with('-') || s.starts_with(|c: char| c.is_ascii_digit()) && s != "1"
}

fn parse_tuple(literal: &str, s: &str) -> Result<Vec<i64>> {
    let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s);
    inner
        .split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|e| fail(literal, e.to_string())))
        .collect()
}

fn parse_word(family: &Family, literal: &str, word: &str) -> Result<Element> {
    let letters = family.letters();
    if letters.is_empty() {
        return Err(fail(literal, format!("{} has no word letters", family.describe())));
    }
    let mut acc = family.identity();
    if word.is_empty() || word == "1" || (word == "e" && letters.len() < 5) {
        return Ok(acc);
    }
    for c in word.chars() {
        let idx = c.to_ascii_lowercase() as usize;
        if !c.is_ascii_alphabetic() || idx < 'a' as usize || idx - ('a' as usize) >= letters.len() {
            return Err(fail(literal, format!("unknown letter {c:?}")));
        }
        let g = &letters[idx - 'a' as usize];
        let g = if c.is_ascii_uppercase() { family.invert(g)? } else { g.clone() };
        acc = family.multiply(&acc, &g)?;
    }
    Ok(acc)
}

fn strip_brackets(s: &str) -> &str {
    if s.starts_with('[') && s.ends_with(']') {
        // only strip when the outer pair encloses everything
        let mut depth = 0i32;
        for (i, c) in s.char_indices() {
            match c {
                '[' | '(' => depth += 1,
                ']' | ')' => {
                    depth -= 1;
                    if depth == 0 && i != s.len() - 1 {
                        return s;
                    }
                }
                _ => {}
            }
        }
        &s[1..s.len() - 1]
    } else {
        s
    }
}

fn split_top_level(s: &str, sep: char) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            c if c == sep && depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::super::{DihedralExtension, FiniteGroup};
    use super::*;

    #[test]
    fn heisenberg_word_and_tuple_agree() {
        let f = Family::Heisenberg3;
        assert_eq!(f.parse("abAB").unwrap(), f.parse("(0,0,1)").unwrap());
        assert_eq!(f.parse("1").unwrap(), f.identity());
    }

    #[test]
    fn render_parse_round_trip() {
        let s3 = Family::Finite(Arc::new(FiniteGroup::symmetric3()));
        let families = vec![
            Family::free_abelian(2).unwrap(),
            Family::free(3).unwrap(),
            Family::Heisenberg3,
            Family::InfiniteDihedral,
            Family::product(s3.clone(), Family::free_abelian(1).unwrap()),
            Family::product(Family::free(2).unwrap(), Family::InfiniteDihedral),
            Family::FiniteByDihedral(Arc::new(DihedralExtension::z2_times_dinf())),
            Family::integer_matrix(vec![
                IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap(),
                IntMatrix::from_rows(&[vec![1, 0], vec![1, 1]]).unwrap(),
            ])
            .unwrap(),
            s3,
        ];
        for f in families {
            let gens = f.standard_generators();
            let mut x = f.identity();
            for (i, g) in gens.iter().cycle().take(7).enumerate() {
                x = f.multiply(&x, g).unwrap();
                if i % 3 == 0 {
                    x = f.multiply(&x, &gens[gens.len() - 1]).unwrap();
                }
                let text = f.render(&x);
                assert_eq!(f.parse(&text).unwrap(), x, "{} {text}", f.describe());
            }
        }
    }

    #[test]
    fn bad_literals() {
        let f = Family::free(2).unwrap();
        assert!(matches!(f.parse("abz"), Err(CurvError::Literal { .. })));
        let z2 = Family::free_abelian(2).unwrap();
        assert!(z2.parse("(1,2,3)").is_err());
        assert!(Family::Heisenberg3.parse("(1,2)").is_err());
    }

    #[test]
    fn extension_literal() {
        let f = Family::FiniteByDihedral(Arc::new(DihedralExtension::z2_times_dinf()));
        let x = f.parse("1:ab").unwrap();
        assert_eq!(f.render(&x), "1:ab");
        assert_eq!(f.parse("ab").unwrap(), f.parse("0:ab").unwrap());
    }
}
