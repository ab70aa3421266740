//! Random spaces, vectors and canonical points for property suites.
//!
//! Coordinates are often drawn from a coarse grid so that ties in norm
//! attainment, zero blocks and flat faces occur with positive probability.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::scalar::Scalar;
use crate::space::Space;

/// Exponents used for random `ℓ_p` spaces.
pub const EXPONENTS: [f64; 5] = [1.0, 1.5, 2.0, 3.0, f64::INFINITY];

pub fn gaussian<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<T> {
    (0..n).map(|_| T::lit(StandardNormal.sample(rng))).collect()
}

/// Entries from `{-2, -1.5, …, 2}`.
pub fn grid<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<T> {
    (0..n)
        .map(|_| T::lit(rng.random_range(-4i32..=4) as f64 * 0.5))
        .collect()
}

/// Gaussian or grid entries, with random coordinates zeroed.
pub fn vector<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<T> {
    let mut v = if rng.random_bool(0.5) {
        gaussian(rng, n)
    } else {
        grid(rng, n)
    };
    if rng.random_bool(0.3) {
        for c in v.iter_mut() {
            if rng.random_bool(0.3) {
                *c = T::zero();
            }
        }
    }
    v
}

pub fn nonzero_vector<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<T> {
    loop {
        let v = vector(rng, n);
        if v.iter().any(|&c| c != T::zero()) {
            return v;
        }
    }
}

pub fn unit_vector<T: Scalar, R: Rng + ?Sized>(rng: &mut R, space: &Space<T>) -> Result<Vec<T>> {
    space.normalize(&nonzero_vector(rng, space.dim()))
}

pub fn lp<T: Scalar, R: Rng + ?Sized>(rng: &mut R, p: f64, max_dim: usize) -> Result<Space<T>> {
    Space::lp(T::lit(p), rng.random_range(1..=max_dim))
}

pub fn any_lp<T: Scalar, R: Rng + ?Sized>(rng: &mut R, max_dim: usize) -> Result<Space<T>> {
    let p = *EXPONENTS.choose(rng).expect("nonempty");
    lp(rng, p, max_dim)
}

/// Polyhedral space of dimension `dim` with at most `max_gens` generators.
pub fn polyhedral<T: Scalar, R: Rng + ?Sized>(rng: &mut R, dim: usize, max_gens: usize) -> Result<Space<T>> {
    let max_gens = max_gens.max(dim);
    loop {
        let k = rng.random_range(dim..=max_gens);
        let gens: Vec<Vec<T>> = (0..k)
            .map(|_| {
                let mut g: Vec<T> = grid(rng, dim);
                if g.iter().all(|&c| c == T::zero()) {
                    g[rng.random_range(0..dim)] = T::one();
                }
                g
            })
            .collect();
        if let Ok(s) = Space::polyhedral(gens) {
            return Ok(s);
        }
    }
}

/// `ℓ_p` (p from [`EXPONENTS`]) or, with probability `poly`, polyhedral.
pub fn leaf<T: Scalar, R: Rng + ?Sized>(rng: &mut R, max_dim: usize, poly: f64) -> Result<Space<T>> {
    if rng.random_bool(poly) {
        let d = rng.random_range(1..=max_dim.min(3));
        polyhedral(rng, d, 2 * d + 2)
    } else {
        any_lp(rng, max_dim)
    }
}

/// Sup-sum of `blocks` leaves of dimension at most `comp_dim`.
pub fn supsum<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    blocks: std::ops::RangeInclusive<usize>,
    comp_dim: usize,
    poly: f64,
) -> Result<Space<T>> {
    let k = rng.random_range(blocks);
    Space::sup((0..k).map(|_| leaf(rng, comp_dim, poly)).collect::<Result<_>>()?)
}

/// Sup-sum whose blocks may themselves be sup-sums, total dimension at most
/// `max_dim`.
pub fn nested_supsum<T: Scalar, R: Rng + ?Sized>(rng: &mut R, max_dim: usize, poly: f64) -> Result<Space<T>> {
    loop {
        let k = rng.random_range(2..=3);
        let comps: Vec<Space<T>> = (0..k)
            .map(|_| {
                if rng.random_bool(0.3) {
                    supsum(rng, 2..=2, 2, poly)
                } else {
                    leaf(rng, 3, poly)
                }
            })
            .collect::<Result<_>>()?;
        let s = Space::sup(comps)?;
        if s.dim() <= max_dim {
            return Ok(s);
        }
    }
}

fn signed<T: Scalar, R: Rng + ?Sized>(rng: &mut R, v: T) -> T {
    if rng.random_bool(0.5) {
        v
    } else {
        -v
    }
}

/// Random unit point of one of the closed forms of `ℓ_p^n`:
/// `±e_k`, or two coordinates `±2^{-1/p}` when `n ≥ 2`.
pub fn lp_canonical<T: Scalar, R: Rng + ?Sized>(rng: &mut R, p: T, n: usize) -> Vec<T> {
    let mut x = vec![T::zero(); n];
    let k = rng.random_range(0..n);
    if n >= 2 && rng.random_bool(0.5) {
        let mut l = rng.random_range(0..n - 1);
        if l >= k {
            l += 1;
        }
        let c = T::lit(2.0).powf(-T::one() / p);
        x[k] = signed(rng, c);
        x[l] = signed(rng, c);
    } else {
        x[k] = signed(rng, T::one());
    }
    x
}

/// Random unit left symmetric point of a space with a closed form.
/// Returns `None` for polyhedral spaces.
pub fn left_symmetric<T: Scalar, R: Rng + ?Sized>(rng: &mut R, space: &Space<T>) -> Option<Vec<T>> {
    match space {
        Space::Lp(l) => {
            let n = l.dim();
            if n == 1 || l.p() == T::lit(2.0) {
                return unit_vector(rng, space).ok();
            }
            if l.is_linf() {
                return Some(one_hot_or(lp_canonical(rng, T::one(), n)));
            }
            if l.is_l1() {
                if n != 2 {
                    return None;
                }
                let h = T::lit(0.5);
                return Some(vec![signed(rng, h), signed(rng, h)]);
            }
            Some(lp_canonical(rng, l.p(), n))
        }
        Space::SupSum(s) => {
            let choices: Vec<usize> = (0..s.len())
                .filter(|&k| !matches!(s.components()[k], Space::Polyhedral(_)))
                .collect();
            let &k = choices.choose(rng)?;
            let b = left_symmetric(rng, &s.components()[k])?;
            Some(s.embed(k, &b))
        }
        Space::Polyhedral(_) => None,
    }
}

/// `±e_k` stays; anything else collapses to its first nonzero coordinate.
fn one_hot_or<T: Scalar>(v: Vec<T>) -> Vec<T> {
    let k = v.iter().position(|&c| c != T::zero()).unwrap_or(0);
    let mut out = vec![T::zero(); v.len()];
    out[k] = if v[k] < T::zero() { -T::one() } else { T::one() };
    out
}

/// Random unit right symmetric point of a space with a closed form.
pub fn right_symmetric<T: Scalar, R: Rng + ?Sized>(rng: &mut R, space: &Space<T>) -> Option<Vec<T>> {
    match space {
        Space::Lp(l) => {
            let n = l.dim();
            if n == 1 || l.p() == T::lit(2.0) {
                return unit_vector(rng, space).ok();
            }
            if l.is_linf() {
                return Some((0..n).map(|_| signed(rng, T::one())).collect());
            }
            if l.is_l1() {
                return Some(one_hot_or(lp_canonical(rng, T::one(), n)));
            }
            Some(lp_canonical(rng, l.p(), n))
        }
        Space::SupSum(s) => {
            let mut out = Vec::with_capacity(s.dim());
            for c in s.components() {
                out.extend(right_symmetric(rng, c)?);
            }
            Some(out)
        }
        Space::Polyhedral(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Tolerances;
    use crate::symmetry::{classify_left, classify_right};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn canonical_points_are_classified_symmetric() {
        let tol = Tolerances::<f64>::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut checked = [0; 2];
        for _ in 0..2000 {
            let s: Space<f64> = if rng.random_bool(0.5) {
                any_lp(&mut rng, 4).unwrap()
            } else {
                supsum(&mut rng, 2..=3, 3, 0.0).unwrap()
            };
            if let Some(x) = left_symmetric(&mut rng, &s) {
                assert!(classify_left(&s, &x, &tol).unwrap(), "{s} {x:?}");
                checked[0] += 1;
            }
            if let Some(x) = right_symmetric(&mut rng, &s) {
                assert!(classify_right(&s, &x, &tol).unwrap(), "{s} {x:?}");
                checked[1] += 1;
            }
        }
        assert!(checked[0] > 1000 && checked[1] > 1000);
    }

    #[test]
    fn nested_supsums_respect_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let s: Space<f64> = nested_supsum(&mut rng, 8, 0.3).unwrap();
            assert!(s.dim() <= 8 && s.depth() <= 2);
        }
    }
}
