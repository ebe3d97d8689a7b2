#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use curv_core::group::{DihedralExtension, Element, Family, FiniteGroup, GroupSpec, IntMatrix};

/// One instance of every built-in family, with its standard generators.
pub fn builtin_specs() -> Vec<(&'static str, GroupSpec)> {
    let s3 = Family::Finite(Arc::new(FiniteGroup::symmetric3()));
    let sl2 = Family::integer_matrix(vec![
        IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap(),
        IntMatrix::from_rows(&[vec![1, 0], vec![1, 1]]).unwrap(),
    ])
    .unwrap();
    let fams = vec![
        ("free-abelian-2", Family::free_abelian(2).unwrap()),
        ("free-2", Family::free(2).unwrap()),
        ("heisenberg", Family::Heisenberg3),
        ("dinf", Family::InfiniteDihedral),
        ("s3", s3.clone()),
        ("s3-x-z", Family::product(s3, Family::free_abelian(1).unwrap())),
        ("free-2-x-dinf", Family::product(Family::free(2).unwrap(), Family::InfiniteDihedral)),
        ("z2-x-dinf", Family::FiniteByDihedral(Arc::new(DihedralExtension::z2_times_dinf()))),
        ("sl2z", sl2),
    ];
    fams.into_iter().map(|(n, f)| (n, GroupSpec::standard(f).unwrap())).collect()
}

/// Minimum word length for every product of at most `radius` generators,
/// found by multiplying out every word.
pub fn naive_norms(spec: &GroupSpec, radius: u32) -> HashMap<Element, u32> {
    let gens = spec.generators().elements();
    let mut best = HashMap::new();
    fn walk(
        spec: &GroupSpec,
        gens: &[Element],
        acc: Element,
        len: u32,
        radius: u32,
        best: &mut HashMap<Element, u32>,
    ) {
        let e = best.entry(acc.clone()).or_insert(len);
        if len < *e {
            *e = len;
        }
        if len == radius {
            return;
        }
        for s in gens {
            let next = spec.multiply(&acc, s).unwrap();
            walk(spec, gens, next, len + 1, radius, best);
        }
    }
    walk(spec, gens, spec.identity(), 0, radius, &mut best);
    best
}

/// Heisenberg element as an upper unitriangular integer matrix.
pub fn heis_matrix(t: [i64; 3]) -> [[i64; 3]; 3] {
    [[1, t[0], t[2]], [0, 1, t[1]], [0, 0, 1]]
}

pub fn mat3_mul(a: [[i64; 3]; 3], b: [[i64; 3]; 3]) -> [[i64; 3]; 3] {
    let mut c = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

/// Evaluates a word over `a, b, A, B` in the 3×3 matrix model.
pub fn heis_eval(word: &[u8]) -> [[i64; 3]; 3] {
    let letter = |c: u8| match c {
        b'a' => heis_matrix([1, 0, 0]),
        b'A' => heis_matrix([-1, 0, 0]),
        b'b' => heis_matrix([0, 1, 0]),
        b'B' => heis_matrix([0, -1, 0]),
        _ => unreachable!(),
    };
    word.iter().fold(heis_matrix([0, 0, 0]), |m, &c| mat3_mul(m, letter(c)))
}

/// Free reduction with a stack; the reference for free-group words.
pub fn free_reduce(word: &[u8]) -> Vec<u8> {
    let mut out: Vec<u8> = Vec::new();
    for &c in word {
        if out.last().is_some_and(|&l| l != c && l.eq_ignore_ascii_case(&c)) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out
}

/// D∞ acting on Z by affine maps `x ↦ σx + t`, with a: x ↦ −x and
/// b: x ↦ 1 − x. Maps compose left to right as words act on the right.
pub fn dinf_eval(word: &[u8]) -> (i64, i64) {
    word.iter().fold((1, 0), |(s, t), &c| {
        let (s2, t2) = match c {
            b'a' => (-1, 0),
            b'b' => (-1, 1),
            _ => unreachable!(),
        };
        // apply (s,t) first, then (s2,t2)
        (s2 * s, s2 * t + t2)
    })
}
