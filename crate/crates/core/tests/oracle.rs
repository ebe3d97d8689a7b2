mod common;

use std::collections::HashMap;

use curv_core::ball::{enumerate_ball, norm_targeted};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{builtin_specs, naive_norms};

#[test]
fn ball_norms_match_naive_word_oracle() {
    for (name, spec) in builtin_specs() {
        for radius in 0..=5 {
            let table = enumerate_ball(&spec, radius).unwrap();
            let naive = naive_norms(&spec, radius);
            let mut listed = HashMap::new();
            for n in 0..=radius {
                for x in table.full_sphere(n) {
                    listed.insert(x.clone(), n);
                }
            }
            assert_eq!(listed.len(), naive.len(), "{name} R={radius}: ball sizes differ");
            for (x, n) in &naive {
                assert_eq!(listed.get(x), Some(n), "{name} R={radius}: {}", spec.render(x));
            }
            let total: usize = table.counts().iter().sum();
            assert_eq!(total, table.key_count(), "{name}: counts vs table size");
        }
    }
}

#[test]
fn targeted_norm_matches_ball_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (name, spec) in builtin_specs() {
        let table = enumerate_ball(&spec, 6).unwrap();
        let all: Vec<_> = table.elements().map(|(_, x)| x.clone()).collect();
        for _ in 0..200 {
            let x = &all[rng.gen_range(0..all.len())];
            let want = table.norm(x).unwrap();
            let got = norm_targeted(&spec, x, 6).unwrap();
            assert_eq!(got, want, "{name}: {}", spec.render(x));
        }
    }
}

#[test]
fn sphere_layering_and_symmetry() {
    for (name, spec) in builtin_specs() {
        let table = enumerate_ball(&spec, 5).unwrap();
        for (n, x) in table.elements() {
            let xi = spec.invert(x).unwrap();
            assert_eq!(table.norm(&xi).unwrap(), n, "{name}: |x⁻¹| ≠ |x|");
            for s in spec.generators().iter() {
                let y = spec.multiply(s, x).unwrap();
                if let Some(m) = table.try_norm(&y) {
                    assert!(m.abs_diff(n) <= 1, "{name}: layering broken at {}", spec.render(x));
                } else {
                    assert_eq!(n, 5, "{name}: neighbour missing inside the ball");
                }
            }
            if n > 0 {
                let has_parent = spec.generators().iter().any(|s| {
                    let si = spec.invert(s).unwrap();
                    table.try_norm(&spec.multiply(&si, x).unwrap()) == Some(n - 1)
                });
                assert!(has_parent, "{name}: {} has no parent", spec.render(x));
            }
        }
    }
}

#[test]
fn enumeration_is_deterministic() {
    for (_, spec) in builtin_specs() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        enumerate_ball(&spec, 4).unwrap().write_csv(&mut a).unwrap();
        enumerate_ball(&spec, 4).unwrap().write_csv(&mut b).unwrap();
        assert_eq!(a, b);
    }
}
