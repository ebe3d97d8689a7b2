//! The integral Heisenberg group as triples `(x, y, z)` standing for the
//! upper unitriangular matrix with `x` at (1,2), `y` at (2,3), `z` at (1,3).

pub type Triple = [i64; 3];

pub const A: Triple = [1, 0, 0];
pub const B: Triple = [0, 1, 0];

#[inline]
pub fn mul(g: &Triple, h: &Triple) -> Triple {
    [g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1]]
}

#[inline]
pub fn inv(g: &Triple) -> Triple {
    [-g[0], -g[1], -g[2] + g[0] * g[1]]
}

pub fn render(g: &Triple) -> String {
    format!("({},{},{})", g[0], g[1], g[2])
}
