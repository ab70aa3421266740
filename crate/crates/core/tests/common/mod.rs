#![allow(dead_code)]

use bjlab::{sample, Space};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Any space the crate supports, total dimension at most 8.
pub fn any_space(rng: &mut ChaCha8Rng) -> Space<f64> {
    match rng.random_range(0..3) {
        0 => sample::any_lp(rng, 4).unwrap(),
        1 => {
            let d = rng.random_range(1..=3);
            sample::polyhedral(rng, d, 8).unwrap()
        }
        _ => sample::nested_supsum(rng, 8, 0.3).unwrap(),
    }
}

/// A seeded space together with a nonzero pair in it.
pub fn space_and_pair() -> impl Strategy<Value = (Space<f64>, Vec<f64>, Vec<f64>)> {
    any::<u64>().prop_map(|seed| {
        let mut r = rng(seed);
        let s = any_space(&mut r);
        let x = sample::nonzero_vector(&mut r, s.dim());
        let y = sample::nonzero_vector(&mut r, s.dim());
        (s, x, y)
    })
}

pub fn lp_space() -> impl Strategy<Value = Space<f64>> {
    (prop::sample::select(sample::EXPONENTS.to_vec()), 1usize..=4).prop_map(|(p, n)| Space::lp(p, n).unwrap())
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// True when `‖x + λy‖` drops below `‖x‖` on some half-line by less than
/// the minimization band `10·rel·‖x‖` but more than rounding. Such pairs are
/// non-orthogonal, yet the minimization oracle cannot resolve them.
pub fn below_min_resolution(s: &Space<f64>, x: &[f64], y: &[f64]) -> bool {
    use bjlab::orthogonality::{min_norm_along, LineDomain};
    let nx = s.norm(x).unwrap();
    let band = 10.0 * bjlab::TolerancesF64::default().rel * nx;
    [LineDomain::NonNeg, LineDomain::NonPos].into_iter().any(|d| {
        let drop = nx - min_norm_along(s, x, y, d).unwrap().value;
        drop > 1e-12 * nx && drop < band
    })
}
