//! Birkhoff–James orthogonality `x ⊥_B y ⟺ ‖x + λy‖ ≥ ‖x‖ ∀λ ∈ ℝ` and
//! its one-sided pieces `x⁺`, `x⁻`, `x^{±ε}`.
//!
//! Two independent deciders are provided. The minimization oracle runs a
//! ternary search on the convex map `λ ↦ ‖x + λy‖`; it only ever sees norm
//! values and reports `Inconclusive` inside a thin band below `‖x‖`. The
//! functional oracle computes the range of `f(y)` over `J(x)` in closed
//! form and declares orthogonality iff the range contains zero; it is exact
//! up to `tol.norm`.
//!
//! For sup-sums the hull criterion is also available in its finite block
//! form: `f ⊥_B g` iff the union of the ranges of `J(f(k))` on `g(k)` over
//! the attainment blocks `k ∈ M_f` straddles zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jset::{attainment_unchecked, support_set};
use crate::scalar::{Scalar, Tolerances};
use crate::space::Space;

/// Range of `λ` in the line minimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineDomain {
    All,
    NonNeg,
    NonPos,
}

/// Minimizer `λ*` of `‖x + λy‖` and the value reached there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineMin<T> {
    pub lambda: T,
    pub value: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Orthogonal,
    NotOrthogonal,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    Minimization,
    Functional,
    SupSumHull,
    SupSumGeneral,
    OperatorAttainment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthoVerdict<T> {
    pub decision: Decision,
    /// Line minimizer, for the minimization oracle.
    pub certificate: Option<LineMin<T>>,
    /// `[lo, hi]` of the support-functional range, for functional oracles.
    pub range: Option<(T, T)>,
    pub oracle: OracleKind,
}

impl<T> OrthoVerdict<T> {
    pub fn is_orthogonal(&self) -> bool {
        self.decision == Decision::Orthogonal
    }

    pub fn is_not_orthogonal(&self) -> bool {
        self.decision == Decision::NotOrthogonal
    }
}

/// Ternary search for the minimum of a convex function on `[a, b]`.
/// Returns `(argmin, min)`.
pub fn ternary_min<T: Scalar, F: FnMut(T) -> T>(mut a: T, mut b: T, mut f: F) -> (T, T) {
    let radius = a.abs().max(b.abs());
    let width = T::lit(1e-14).max(T::epsilon() * T::lit(4.0)) * (T::one() + radius);
    let three = T::lit(3.0);
    for _ in 0..220 {
        if b - a < width {
            break;
        }
        let m1 = a + (b - a) / three;
        let m2 = b - (b - a) / three;
        if f(m1) <= f(m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    let mid = (a + b) / T::lit(2.0);
    (mid, f(mid))
}

/// `min ‖x + λy‖` over the chosen domain. The search bracket is
/// `|λ| ≤ 2‖x‖/‖y‖ + 1`: beyond `2‖x‖/‖y‖` the triangle inequality gives
/// `‖x + λy‖ ≥ |λ|‖y‖ − ‖x‖ > ‖x‖`.
pub fn min_norm_along<T: Scalar>(space: &Space<T>, x: &[T], y: &[T], domain: LineDomain) -> Result<LineMin<T>> {
    space.check_dim(x)?;
    space.check_dim(y)?;
    let ny = space.norm_unchecked(y);
    if ny == T::zero() {
        return Err(Error::ZeroVector);
    }
    let nx = space.norm_unchecked(x);
    Ok(min_norm_along_unchecked(space, x, y, nx, ny, domain))
}

pub(crate) fn min_norm_along_unchecked<T: Scalar>(
    space: &Space<T>,
    x: &[T],
    y: &[T],
    nx: T,
    ny: T,
    domain: LineDomain,
) -> LineMin<T> {
    let r = T::lit(2.0) * nx / ny + T::one();
    let (a, b) = match domain {
        LineDomain::All => (-r, r),
        LineDomain::NonNeg => (T::zero(), r),
        LineDomain::NonPos => (-r, T::zero()),
    };
    let mut buf = vec![T::zero(); x.len()];
    let mut eval = |l: T| {
        for ((b, &xi), &yi) in buf.iter_mut().zip(x).zip(y) {
            *b = xi + l * yi;
        }
        space.norm_unchecked(&buf)
    };
    let (lambda, value) = ternary_min(a, b, &mut eval);
    if value <= nx {
        LineMin { lambda, value }
    } else {
        LineMin {
            lambda: T::zero(),
            value: nx,
        }
    }
}

fn nonzero<T: Scalar>(space: &Space<T>, x: &[T]) -> Result<T> {
    space.check_dim(x)?;
    let n = space.norm_unchecked(x);
    if n == T::zero() {
        return Err(Error::ZeroVector);
    }
    Ok(n)
}

/// Minimization oracle: `Orthogonal` if `min ‖x + λy‖ ≥ ‖x‖(1 − rel)`,
/// `NotOrthogonal` if it is `≤ ‖x‖(1 − 10·rel)`, otherwise `Inconclusive`.
pub fn is_bj_min<T: Scalar>(space: &Space<T>, x: &[T], y: &[T], tol: &Tolerances<T>) -> Result<OrthoVerdict<T>> {
    let nx = nonzero(space, x)?;
    let ny = nonzero(space, y)?;
    let m = min_norm_along_unchecked(space, x, y, nx, ny, LineDomain::All);
    Ok(OrthoVerdict {
        decision: classify_drop(m.value, nx, tol.rel),
        certificate: Some(m),
        range: None,
        oracle: OracleKind::Minimization,
    })
}

pub(crate) fn classify_drop<T: Scalar>(value: T, reference: T, rel: T) -> Decision {
    if value >= reference * (T::one() - rel) {
        Decision::Orthogonal
    } else if value <= reference * (T::one() - T::lit(10.0) * rel) {
        Decision::NotOrthogonal
    } else {
        Decision::Inconclusive
    }
}

fn straddles<T: Scalar>(lo: T, hi: T, slack: T) -> bool {
    lo <= slack && hi >= -slack
}

/// Functional oracle: `x ⊥_B y` iff some `f ∈ J(x)` has `f(y) = 0`.
pub fn is_bj_functional<T: Scalar>(space: &Space<T>, x: &[T], y: &[T], tol: &Tolerances<T>) -> Result<OrthoVerdict<T>> {
    let (lo, hi, slack) = functional_range(space, x, y, tol)?;
    Ok(OrthoVerdict {
        decision: if straddles(lo, hi, slack) {
            Decision::Orthogonal
        } else {
            Decision::NotOrthogonal
        },
        certificate: None,
        range: Some((lo, hi)),
        oracle: OracleKind::Functional,
    })
}

/// `(lo, hi, slack)`: the `J(x)`-range of `y` and the absolute slack
/// `tol.norm·‖y‖` it is compared with.
fn functional_range<T: Scalar>(space: &Space<T>, x: &[T], y: &[T], tol: &Tolerances<T>) -> Result<(T, T, T)> {
    space.check_dim(y)?;
    let j = support_set(space, x, tol)?;
    let (lo, hi) = j.range_unchecked(y);
    Ok((lo, hi, tol.norm * space.norm_unchecked(y)))
}

/// `y ∈ x⁺`: `‖x + λy‖ ≥ ‖x‖` for all `λ ≥ 0`.
pub fn in_plus<T: Scalar>(space: &Space<T>, x: &[T], y: &[T], tol: &Tolerances<T>) -> Result<bool> {
    let (_, hi, slack) = functional_range(space, x, y, tol)?;
    Ok(hi >= -slack)
}

/// `y ∈ x⁻`: `‖x + λy‖ ≥ ‖x‖` for all `λ ≤ 0`.
pub fn in_minus<T: Scalar>(space: &Space<T>, x: &[T], y: &[T], tol: &Tolerances<T>) -> Result<bool> {
    let (lo, _, slack) = functional_range(space, x, y, tol)?;
    Ok(lo <= slack)
}

/// Minimization cross-check for `x⁺` / `x⁻`.
pub fn in_half_by_min<T: Scalar>(
    space: &Space<T>,
    x: &[T],
    y: &[T],
    domain: LineDomain,
    tol: &Tolerances<T>,
) -> Result<Decision> {
    let nx = nonzero(space, x)?;
    space.check_dim(y)?;
    let ny = space.norm_unchecked(y);
    if ny == T::zero() {
        return Ok(Decision::Orthogonal);
    }
    let m = min_norm_along_unchecked(space, x, y, nx, ny, domain);
    Ok(classify_drop(m.value, nx, tol.rel))
}

fn check_eps<T: Scalar>(eps: T) -> Result<()> {
    if !(eps >= T::zero() && eps < T::one()) {
        return Err(Error::EpsilonOutOfRange(eps.as_f64()));
    }
    Ok(())
}

fn in_eps<T: Scalar>(
    space: &Space<T>,
    x: &[T],
    y: &[T],
    eps: T,
    domain: LineDomain,
    tol: &Tolerances<T>,
) -> Result<bool> {
    check_eps(eps)?;
    let nx = nonzero(space, x)?;
    space.check_dim(y)?;
    let ny = space.norm_unchecked(y);
    if ny == T::zero() {
        return Ok(true);
    }
    let m = min_norm_along_unchecked(space, x, y, nx, ny, domain);
    let threshold = (T::one() - eps * eps).sqrt() * nx * (T::one() - tol.rel);
    Ok(m.value >= threshold)
}

/// `y ∈ x^{+ε}`: `‖x + λy‖ ≥ √(1−ε²)‖x‖` for all `λ ≥ 0`.
pub fn in_plus_eps<T: Scalar>(space: &Space<T>, x: &[T], y: &[T], eps: T, tol: &Tolerances<T>) -> Result<bool> {
    in_eps(space, x, y, eps, LineDomain::NonNeg, tol)
}

/// `y ∈ x^{−ε}`: `‖x + λy‖ ≥ √(1−ε²)‖x‖` for all `λ ≤ 0`.
pub fn in_minus_eps<T: Scalar>(space: &Space<T>, x: &[T], y: &[T], eps: T, tol: &Tolerances<T>) -> Result<bool> {
    in_eps(space, x, y, eps, LineDomain::NonPos, tol)
}

/// Hull criterion on a finite sup-sum: `f ⊥_B g` iff the ranges of
/// `J(f(k))` on `g(k)`, `k ∈ M_f`, together straddle zero.
pub fn supsum_orthogonal<T: Scalar>(
    space: &Space<T>,
    f: &[T],
    g: &[T],
    tol: &Tolerances<T>,
) -> Result<OrthoVerdict<T>> {
    let s = space.as_supsum()?;
    let nf = nonzero(space, f)?;
    space.check_dim(g)?;
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for k in attainment_unchecked(s, f, nf, tol.tie) {
        let c = &s.components()[k];
        let j = support_set(c, s.block(f, k), tol)?;
        let (l, h) = j.range_unchecked(s.block(g, k));
        lo = lo.min(l);
        hi = hi.max(h);
    }
    let slack = tol.norm * space.norm_unchecked(g);
    Ok(OrthoVerdict {
        decision: if straddles(lo, hi, slack) {
            Decision::Orthogonal
        } else {
            Decision::NotOrthogonal
        },
        certificate: None,
        range: Some((lo, hi)),
        oracle: OracleKind::SupSumHull,
    })
}

/// Two-condition criterion for `g ⊥_B f` on a finite sup-sum:
/// (i) `f` vanishes on some attainment block of `g`, or
/// (ii) some attainment blocks `k₁, k₂` of `g` have `f(k₁) ∈ g(k₁)⁺` and
/// `f(k₂) ∈ g(k₂)⁻`. With finitely many blocks the approximate relations
/// and limits of the general statement collapse to these exact ones.
pub fn supsum_orthogonal_general<T: Scalar>(
    space: &Space<T>,
    g: &[T],
    f: &[T],
    tol: &Tolerances<T>,
) -> Result<OrthoVerdict<T>> {
    let s = space.as_supsum()?;
    let ng = nonzero(space, g)?;
    space.check_dim(f)?;
    let nf = space.norm_unchecked(f);
    let blocks = attainment_unchecked(s, g, ng, tol.tie);
    let vanishes = blocks.iter().any(|&k| {
        let c = &s.components()[k];
        c.norm_unchecked(s.block(f, k)) <= tol.norm * nf
    });
    let decision = if vanishes {
        Decision::Orthogonal
    } else {
        // Half relations per block, with the slack scaled by ‖f‖ as in the
        // hull oracle so that the two criteria share one tolerance band.
        let slack = tol.norm * nf;
        let mut plus = false;
        let mut minus = false;
        for &k in &blocks {
            let c = &s.components()[k];
            let (lo, hi) = support_set(c, s.block(g, k), tol)?.range_unchecked(s.block(f, k));
            plus = plus || hi >= -slack;
            minus = minus || lo <= slack;
        }
        if plus && minus {
            Decision::Orthogonal
        } else {
            Decision::NotOrthogonal
        }
    };
    Ok(OrthoVerdict {
        decision,
        certificate: None,
        range: None,
        oracle: OracleKind::SupSumGeneral,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> Space<f64> {
        s.parse().unwrap()
    }

    fn tol() -> Tolerances<f64> {
        Tolerances::default()
    }

    /// Independent oracle: scan λ on a grid.
    fn grid_min(space: &Space<f64>, x: &[f64], y: &[f64], lo: f64, hi: f64) -> (f64, f64) {
        let steps = ((hi - lo) / 1e-4).round() as i64;
        (0..=steps)
            .map(|i| {
                let l = lo + i as f64 * 1e-4;
                let v: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + l * b).collect();
                (l, space.norm(&v).unwrap())
            })
            .fold((0.0, f64::INFINITY), |acc, c| if c.1 < acc.1 { c } else { acc })
    }

    #[test]
    fn min_norm_examples() {
        let m = min_norm_along(&sp("lp(2,2)"), &[1.0, 0.0], &[0.0, 1.0], LineDomain::All).unwrap();
        assert!(m.lambda.abs() < 1e-6 && (m.value - 1.0).abs() < 1e-12);

        let s = sp("lp(inf,2)");
        let m = min_norm_along(&s, &[1.0, 1.0], &[0.0, 1.0], LineDomain::All).unwrap();
        let (_, g) = grid_min(&s, &[1.0, 1.0], &[0.0, 1.0], -3.0, 3.0);
        assert!((m.value - 1.0).abs() < 1e-12 && (g - 1.0).abs() < 1e-12);
        assert!((-2.0 - 1e-9..=1e-9).contains(&m.lambda));

        let m = min_norm_along(&s, &[0.0, 1.0], &[1.0, 0.0], LineDomain::All).unwrap();
        assert!((m.value - 1.0).abs() < 1e-12);

        assert_eq!(
            min_norm_along(&s, &[1.0, 1.0], &[0.0, 0.0], LineDomain::All),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn is_bj_min_examples() {
        let s = sp("lp(inf,2)");
        assert!(is_bj_min(&s, &[1.0, 1.0], &[0.0, 1.0], &tol()).unwrap().is_orthogonal());

        let v = is_bj_min(&s, &[0.0, 1.0], &[1.0, 1.0], &tol()).unwrap();
        assert!(v.is_not_orthogonal());
        let c = v.certificate.unwrap();
        let (gl, gv) = grid_min(&s, &[0.0, 1.0], &[1.0, 1.0], -3.0, 3.0);
        assert!((c.value - 0.5).abs() < 1e-12 && (gv - 0.5).abs() < 1e-12);
        assert!((c.lambda + 0.5).abs() < 1e-9 && (gl + 0.5).abs() < 1e-9);

        let l1 = sp("lp(1,2)");
        let v = is_bj_min(&l1, &[1.0, 0.0], &[2.0, 1.0], &tol()).unwrap();
        let c = v.certificate.unwrap();
        assert!(v.is_not_orthogonal());
        assert!((c.lambda + 0.5).abs() < 1e-9 && (c.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn functional_oracle_examples() {
        let l1 = sp("lp(1,2)");
        for i in -20..=20 {
            let t = i as f64 * 0.1;
            let v = is_bj_functional(&l1, &[1.0, 0.0], &[t, 1.0], &tol()).unwrap();
            let (lo, hi) = v.range.unwrap();
            assert!((lo - (t - 1.0)).abs() < 1e-15 && (hi - (t + 1.0)).abs() < 1e-15);
            assert_eq!(v.is_orthogonal(), t.abs() <= 1.0 + 1e-12, "t={t}");
            let m = is_bj_min(&l1, &[1.0, 0.0], &[t, 1.0], &tol()).unwrap();
            if m.decision != Decision::Inconclusive {
                assert_eq!(m.decision, v.decision, "t={t}");
            }
        }
        let v = is_bj_functional(&sp("lp(2,3)"), &[1.0, 2.0, 2.0], &[2.0, -1.0, 0.0], &tol()).unwrap();
        assert!(v.is_orthogonal());
        let v = is_bj_functional(&sp("lp(inf,2)"), &[1.0, 1.0], &[1.0, -1.0], &tol()).unwrap();
        assert_eq!(v.range, Some((-1.0, 1.0)));
        assert!(v.is_orthogonal());
    }

    #[test]
    fn plus_minus_examples() {
        let t = tol();
        let l2 = sp("lp(2,2)");
        assert!(in_plus(&l2, &[1.0, 0.0], &[1.0, 5.0], &t).unwrap());
        assert!(!in_minus(&l2, &[1.0, 0.0], &[1.0, 5.0], &t).unwrap());
        let li = sp("lp(inf,2)");
        assert!(in_plus(&li, &[1.0, 1.0], &[1.0, -1.0], &t).unwrap());
        assert!(in_minus(&li, &[1.0, 1.0], &[1.0, -1.0], &t).unwrap());
        let l1 = sp("lp(1,2)");
        assert!(in_minus(&l1, &[1.0, 0.0], &[-2.0, 1.0], &t).unwrap());
        assert!(!in_plus(&l1, &[1.0, 0.0], &[-2.0, 1.0], &t).unwrap());
        assert_eq!(
            in_half_by_min(&l1, &[1.0, 0.0], &[-2.0, 1.0], LineDomain::NonPos, &t).unwrap(),
            Decision::Orthogonal
        );
        assert_eq!(
            in_half_by_min(&l1, &[1.0, 0.0], &[-2.0, 1.0], LineDomain::NonNeg, &t).unwrap(),
            Decision::NotOrthogonal
        );
    }

    #[test]
    fn eps_examples() {
        let t = tol();
        let l2 = sp("lp(2,2)");
        // min over λ ≥ 0 of ‖(1−λ, λ)‖₂ is 1/√2, reached at λ = 1/2
        let (_, g) = grid_min(&l2, &[1.0, 0.0], &[-1.0, 1.0], 0.0, 3.0);
        assert!((g - 0.5f64.sqrt()).abs() < 1e-8);
        assert!(in_plus_eps(&l2, &[1.0, 0.0], &[-1.0, 1.0], 0.8, &t).unwrap());
        assert!(!in_plus_eps(&l2, &[1.0, 0.0], &[-1.0, 1.0], 0.1, &t).unwrap());
        assert_eq!(
            in_plus_eps(&l2, &[1.0, 0.0], &[-1.0, 1.0], 1.0, &t),
            Err(Error::EpsilonOutOfRange(1.0))
        );
        assert!(in_minus_eps(&l2, &[1.0, 0.0], &[-1.0, 1.0], -0.1, &t).is_err());
    }

    #[test]
    fn supsum_examples() {
        let t = tol();
        let r2 = sp("sup(lp(inf,1),lp(inf,1))");
        assert!(supsum_orthogonal(&r2, &[1.0, 0.0], &[0.0, 5.0], &t)
            .unwrap()
            .is_orthogonal());
        assert!(supsum_orthogonal(&r2, &[1.0, 1.0], &[1.0, -1.0], &t)
            .unwrap()
            .is_orthogonal());
        let v = supsum_orthogonal(&r2, &[1.0, 0.5], &[1.0, 0.0], &t).unwrap();
        assert!(v.is_not_orthogonal());
        let m = is_bj_min(&r2, &[1.0, 0.5], &[1.0, 0.0], &t).unwrap();
        assert!(m.is_not_orthogonal() && m.certificate.unwrap().lambda < 0.0);

        assert!(supsum_orthogonal_general(&r2, &[1.0, 1.0], &[0.0, 0.0], &t)
            .unwrap()
            .is_orthogonal());
        assert!(supsum_orthogonal_general(&r2, &[1.0, 1.0], &[2.0, -2.0], &t)
            .unwrap()
            .is_orthogonal());
        assert!(supsum_orthogonal_general(&r2, &[1.0, 0.5], &[1.0, 0.0], &t)
            .unwrap()
            .is_not_orthogonal());
        assert_eq!(
            supsum_orthogonal(&r2, &[0.0, 0.0], &[1.0, 0.0], &t),
            Err(Error::ZeroVector)
        );
        assert!(supsum_orthogonal(&sp("lp(2,2)"), &[1.0, 0.0], &[1.0, 0.0], &t).is_err());
    }
}
