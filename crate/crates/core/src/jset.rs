//! Support-functional sets `J(x) = { f ∈ S_{X*} : f(x) = ‖x‖ }` and norm
//! attainment sets of sup-sum vectors.
//!
//! `J(x)` is a face of the dual unit ball. It is stored in closed form so
//! that the range of `f(y)` over `J(x)` costs `O(n)`:
//!
//! * smooth `ℓ_p` gives a single functional;
//! * `ℓ_1` gives a signed box (signs fixed on the support of `x`, free in
//!   `[-1, 1]` elsewhere);
//! * `ℓ_∞` and polyhedral spaces give the convex hull of the active dual
//!   generators;
//! * a sup-sum gives the convex hull of the block embeddings of the
//!   component sets over the attainment blocks.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{sign, Scalar, Tolerances};
use crate::space::{Functional, Space, SupSum};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JSet<T> {
    Singleton(Functional<T>),
    /// `signs[i] ∈ {+1, -1}` fixes coordinate `i`; `0` leaves it free in `[-1, 1]`.
    SignedBox {
        signs: Vec<i8>,
    },
    Hull(Vec<Functional<T>>),
    /// Convex hull of `(offset, component set)` embedded into a space of dimension `dim`.
    BlockHull {
        dim: usize,
        parts: Vec<(usize, JSet<T>)>,
    },
}

impl<T: Scalar> JSet<T> {
    pub fn dim(&self) -> usize {
        match self {
            JSet::Singleton(f) => f.dim(),
            JSet::SignedBox { signs } => signs.len(),
            JSet::Hull(gs) => gs[0].dim(),
            JSet::BlockHull { dim, .. } => *dim,
        }
    }

    /// `[min f(y), max f(y)]` over `f ∈ J`.
    pub fn range(&self, y: &[T]) -> Result<(T, T)> {
        if y.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: y.len(),
            });
        }
        Ok(self.range_unchecked(y))
    }

    pub(crate) fn range_unchecked(&self, y: &[T]) -> (T, T) {
        match self {
            JSet::Singleton(f) => {
                let v = f.apply(y);
                (v, v)
            }
            JSet::SignedBox { signs } => {
                let mut fixed = T::zero();
                let mut free = T::zero();
                for (&s, &v) in signs.iter().zip(y) {
                    match s {
                        0 => free = free + v.abs(),
                        1 => fixed = fixed + v,
                        _ => fixed = fixed - v,
                    }
                }
                (fixed - free, fixed + free)
            }
            JSet::Hull(gs) => gs
                .iter()
                .map(|g| g.apply(y))
                .fold((T::infinity(), T::neg_infinity()), |(lo, hi), v| (lo.min(v), hi.max(v))),
            JSet::BlockHull { parts, .. } => {
                parts
                    .iter()
                    .fold((T::infinity(), T::neg_infinity()), |(lo, hi), (off, part)| {
                        let (l, h) = part.range_unchecked(&y[*off..*off + part.dim()]);
                        (lo.min(l), hi.max(h))
                    })
            }
        }
    }

    /// Centroid of the extreme description: free box coordinates set to
    /// zero, hulls averaged.
    pub fn centroid(&self) -> Functional<T> {
        match self {
            JSet::Singleton(f) => f.clone(),
            JSet::SignedBox { signs } => Functional(signs.iter().map(|&s| T::lit(f64::from(s))).collect()),
            JSet::Hull(gs) => average(gs.iter().map(|g| g.0.clone()), gs[0].dim()),
            JSet::BlockHull { dim, parts } => average(
                parts.iter().map(|(off, part)| {
                    let mut v = vec![T::zero(); *dim];
                    let c = part.centroid();
                    v[*off..*off + c.dim()].copy_from_slice(&c.0);
                    v
                }),
                *dim,
            ),
        }
    }

    /// A random element of the set, biased towards its extreme points.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Functional<T> {
        match self {
            JSet::Singleton(f) => f.clone(),
            JSet::SignedBox { signs } => {
                let extreme = rng.random_bool(0.5);
                Functional(
                    signs
                        .iter()
                        .map(|&s| match s {
                            0 if extreme => {
                                if rng.random_bool(0.5) {
                                    T::one()
                                } else {
                                    -T::one()
                                }
                            }
                            0 => T::lit(rng.random_range(-1.0..=1.0)),
                            s => T::lit(f64::from(s)),
                        })
                        .collect(),
                )
            }
            JSet::Hull(gs) => {
                if gs.len() == 1 || rng.random_bool(0.4) {
                    gs[rng.random_range(0..gs.len())].clone()
                } else {
                    let w = simplex_weights(rng, gs.len());
                    combine(gs.iter().map(|g| g.0.clone()), &w, gs[0].dim())
                }
            }
            JSet::BlockHull { dim, parts } => {
                let embed = |(off, f): (usize, Functional<T>)| {
                    let mut v = vec![T::zero(); *dim];
                    v[off..off + f.dim()].copy_from_slice(&f.0);
                    v
                };
                if parts.len() == 1 || rng.random_bool(0.4) {
                    let (off, part) = &parts[rng.random_range(0..parts.len())];
                    Functional(embed((*off, part.sample(rng))))
                } else {
                    let w = simplex_weights(rng, parts.len());
                    let pieces: Vec<Vec<T>> = parts
                        .iter()
                        .map(|(off, part)| embed((*off, part.sample(rng))))
                        .collect();
                    combine(pieces.into_iter(), &w, *dim)
                }
            }
        }
    }

    /// Enumerates the extreme points of the set, failing beyond `limit`.
    pub fn extremes(&self, limit: usize) -> Result<Vec<Functional<T>>> {
        let out = match self {
            JSet::Singleton(f) => vec![f.clone()],
            JSet::SignedBox { signs } => {
                let free: Vec<usize> = (0..signs.len()).filter(|&i| signs[i] == 0).collect();
                if free.len() >= 30 || 1usize << free.len() > limit {
                    return Err(Error::Unsupported("signed box has too many vertices".into()));
                }
                (0..1usize << free.len())
                    .map(|mask| {
                        let mut f: Vec<T> = signs.iter().map(|&s| T::lit(f64::from(s))).collect();
                        for (bit, &i) in free.iter().enumerate() {
                            f[i] = if mask >> bit & 1 == 1 { -T::one() } else { T::one() };
                        }
                        Functional(f)
                    })
                    .collect()
            }
            JSet::Hull(gs) => gs.clone(),
            JSet::BlockHull { dim, parts } => {
                let mut out = Vec::new();
                for (off, part) in parts {
                    for g in part.extremes(limit)? {
                        let mut v = vec![T::zero(); *dim];
                        v[*off..*off + g.dim()].copy_from_slice(&g.0);
                        out.push(Functional(v));
                    }
                }
                out
            }
        };
        if out.len() > limit {
            return Err(Error::Unsupported("too many extreme functionals".into()));
        }
        Ok(out)
    }
}

fn average<T: Scalar>(vs: impl Iterator<Item = Vec<T>>, dim: usize) -> Functional<T> {
    let mut acc = vec![T::zero(); dim];
    let mut n = 0usize;
    for v in vs {
        for (a, b) in acc.iter_mut().zip(&v) {
            *a = *a + *b;
        }
        n += 1;
    }
    let n = T::lit(n as f64);
    Functional(acc.into_iter().map(|a| a / n).collect())
}

fn combine<T: Scalar>(vs: impl Iterator<Item = Vec<T>>, w: &[f64], dim: usize) -> Functional<T> {
    let mut acc = vec![T::zero(); dim];
    for (v, &wi) in vs.zip(w) {
        let wi = T::lit(wi);
        for (a, b) in acc.iter_mut().zip(&v) {
            *a = *a + wi * *b;
        }
    }
    Functional(acc)
}

fn simplex_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

/// Support-functional set `J(x)` for nonzero `x`.
pub fn support_set<T: Scalar>(space: &Space<T>, x: &[T], tol: &Tolerances<T>) -> Result<JSet<T>> {
    space.check_dim(x)?;
    let n = space.norm_unchecked(x);
    if n == T::zero() {
        return Err(Error::ZeroVector);
    }
    Ok(support_set_unchecked(space, x, n, tol))
}

pub(crate) fn support_set_unchecked<T: Scalar>(space: &Space<T>, x: &[T], norm: T, tol: &Tolerances<T>) -> JSet<T> {
    match space {
        Space::Lp(l) if l.dim() == 1 => JSet::Singleton(Functional(vec![sign(x[0])])),
        Space::Lp(l) if l.is_l1() => JSet::SignedBox {
            signs: x
                .iter()
                .map(|&v| {
                    if v.abs() <= tol.norm * norm {
                        0
                    } else if v > T::zero() {
                        1
                    } else {
                        -1
                    }
                })
                .collect(),
        },
        Space::Lp(l) if l.is_linf() => {
            let gens = x
                .iter()
                .enumerate()
                .filter(|(_, v)| v.abs() >= norm * (T::one() - tol.norm))
                .map(|(i, &v)| {
                    let mut e = vec![T::zero(); x.len()];
                    e[i] = sign(v);
                    Functional(e)
                })
                .collect();
            JSet::Hull(gens)
        }
        Space::Lp(l) => {
            let pm1 = l.p() - T::one();
            JSet::Singleton(Functional(
                x.iter().map(|&v| sign(v) * (v.abs() / norm).powf(pm1)).collect(),
            ))
        }
        Space::Polyhedral(p) => {
            let gens = p
                .generators()
                .iter()
                .filter_map(|g| {
                    let v = g.apply(x);
                    (v.abs() >= norm * (T::one() - tol.norm)).then(|| g.scaled(sign(v)))
                })
                .collect();
            JSet::Hull(gens)
        }
        Space::SupSum(s) => {
            let parts = attainment_unchecked(s, x, norm, tol.tie)
                .into_iter()
                .map(|k| {
                    let c = &s.components()[k];
                    let b = s.block(x, k);
                    let bn = c.norm_unchecked(b);
                    (s.range(k).start, support_set_unchecked(c, b, bn, tol))
                })
                .collect();
            JSet::BlockHull { dim: s.dim(), parts }
        }
    }
}

/// Indices of the blocks of `f` whose norm is within the relative band
/// `tie` of the sup-norm, ascending (0-based).
pub fn attainment<T: Scalar>(space: &Space<T>, f: &[T], tie: T) -> Result<Vec<usize>> {
    let s = space.as_supsum()?;
    space.check_dim(f)?;
    let n = space.norm_unchecked(f);
    if n == T::zero() {
        return Err(Error::ZeroVector);
    }
    Ok(attainment_unchecked(s, f, n, tie))
}

pub(crate) fn attainment_unchecked<T: Scalar>(s: &SupSum<T>, f: &[T], norm: T, tie: T) -> Vec<usize> {
    s.blocks(f)
        .filter(|(_, c, b)| c.norm_unchecked(b) >= norm - tie * norm)
        .map(|(k, _, _)| k)
        .collect()
}
