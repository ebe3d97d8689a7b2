//! Free groups on `rank` letters. A word is a vector of nonzero letters,
//! `+(i+1)` for the i-th generator and `-(i+1)` for its inverse, always
//! freely reduced.

pub fn reduce_into(buffer: &mut Vec<i32>, letters: &[i32]) {
    for &x in letters {
        if buffer.last() == Some(&-x) {
            buffer.pop();
        } else {
            buffer.push(x);
        }
    }
}

pub fn mul(u: &[i32], v: &[i32]) -> Vec<i32> {
    // cancellation only happens at the seam
    let common = u
        .iter()
        .rev()
        .zip(v.iter())
        .take_while(|(a, b)| **a == -**b)
        .count();
    let mut out = Vec::with_capacity(u.len() + v.len() - 2 * common);
    out.extend_from_slice(&u[..u.len() - common]);
    out.extend_from_slice(&v[common..]);
    out
}

pub fn inv(u: &[i32]) -> Vec<i32> {
    u.iter().rev().map(|x| -x).collect()
}

/// Cyclically reduced core of a reduced word and the conjugator stripped off.
pub fn cyclic_reduction(u: &[i32]) -> (&[i32], &[i32]) {
    let mut i = 0;
    while i < u.len() / 2 && u[i] == -u[u.len() - 1 - i] {
        i += 1;
    }
    (&u[i..u.len() - i], &u[..i])
}

pub fn letter_char(x: i32) -> char {
    let base = (x.unsigned_abs() - 1) as u8;
    if x > 0 {
        (b'a' + base) as char
    } else {
        (b'A' + base) as char
    }
}

pub fn render(u: &[i32]) -> String {
    if u.is_empty() {
        "1".into()
    } else {
        u.iter().map(|&x| letter_char(x)).collect()
    }
}
