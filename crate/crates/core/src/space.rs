//! Norm descriptors for the supported space families and the basic
//! evaluations on them: norm, dual norm, extreme points of the primal and
//! dual unit balls, block structure of sup-sums.
//!
//! Three families are supported: `ℓ_p^n` for `p ∈ [1, ∞]`, polyhedral
//! spaces given by the extreme points of their dual ball (up to sign), and
//! finite sup-sums `ℓ_∞^n(X_1, …, X_n)` of any of these. Vectors and
//! functionals are flat coordinate slices; for a sup-sum the blocks are
//! concatenated in component order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{dot, Scalar, Tolerances};

/// Maximum nesting depth of sup-sums.
pub const MAX_DEPTH: usize = 8;

/// Largest finite exponent accepted; beyond it use `inf`.
pub const MAX_FINITE_P: f64 = 1e6;

const MAX_VERTICES: usize = 1 << 20;

/// A linear functional, paired with vectors by the standard bilinear sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Functional<T>(pub Vec<T>);

impl<T: Scalar> Functional<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[T] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: &[T]) -> T {
        dot(&self.0, x)
    }

    pub fn scaled(&self, a: T) -> Self {
        Self(self.0.iter().map(|&v| v * a).collect())
    }
}

/// `ℓ_p^n`; `p = ∞` is stored as the float infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct Lp<T> {
    p: T,
    dim: usize,
}

impl<T: Scalar> Lp<T> {
    pub fn p(&self) -> T {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Conjugate exponent `q` with `1/p + 1/q = 1`.
    pub fn dual_exponent(&self) -> T {
        conjugate(self.p)
    }

    pub fn is_l1(&self) -> bool {
        self.p == T::one()
    }

    pub fn is_linf(&self) -> bool {
        self.p.is_infinite()
    }

    /// Strictly convex and smooth: `1 < p < ∞` in dimension at least 2.
    pub fn is_smooth(&self) -> bool {
        self.dim > 1 && !self.is_l1() && !self.is_linf()
    }
}

pub(crate) fn conjugate<T: Scalar>(p: T) -> T {
    if p == T::one() {
        T::infinity()
    } else if p.is_infinite() {
        T::one()
    } else {
        p / (p - T::one())
    }
}

/// Polyhedral norm `‖x‖ = max_i |g_i(x)|` together with the vertices of
/// its unit ball, computed once at construction.
#[derive(Debug, Clone)]
pub struct Polytope<T: Scalar> {
    generators: Vec<Functional<T>>,
    vertices: Vec<Vec<T>>,
}

impl<T: Scalar> PartialEq for Polytope<T> {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl<T: Scalar> Polytope<T> {
    pub fn generators(&self) -> &[Functional<T>] {
        &self.generators
    }

    /// Vertices of the primal unit ball, both signs.
    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }
}

/// `ℓ_∞`-direct sum of component spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct SupSum<T: Scalar> {
    components: Vec<Space<T>>,
    offsets: Vec<usize>,
    dim: usize,
}

impl<T: Scalar> SupSum<T> {
    pub fn components(&self) -> &[Space<T>] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coordinate range of block `k`.
    pub fn range(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k] + self.components[k].dim()
    }

    pub fn block<'a>(&self, x: &'a [T], k: usize) -> &'a [T] {
        &x[self.range(k)]
    }

    /// Iterates `(block index, component, block slice)`.
    pub fn blocks<'a, 'b: 'a>(&'a self, x: &'b [T]) -> impl Iterator<Item = (usize, &'a Space<T>, &'b [T])> + 'a {
        self.components
            .iter()
            .enumerate()
            .map(move |(k, c)| (k, c, &x[self.offsets[k]..self.offsets[k] + c.dim()]))
    }

    /// Embeds a component vector into block `k` (zeros elsewhere).
    pub fn embed(&self, k: usize, v: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim];
        out[self.range(k)].copy_from_slice(v);
        out
    }
}

/// Recursive norm definition.
#[derive(Debug, Clone, PartialEq)]
pub enum Space<T: Scalar> {
    Lp(Lp<T>),
    Polyhedral(Polytope<T>),
    SupSum(SupSum<T>),
}

impl<T: Scalar> Space<T> {
    /// `ℓ_p^n`. `p` may be `T::infinity()`.
    pub fn lp(p: T, dim: usize) -> Result<Self> {
        if p.is_nan() || p < T::one() {
            return Err(Error::InvalidSpace(format!("exponent {p} < 1")));
        }
        if p.is_finite() && p > T::lit(MAX_FINITE_P) {
            return Err(Error::InvalidSpace(format!(
                "exponent {p} exceeds {MAX_FINITE_P}; use inf"
            )));
        }
        if dim == 0 {
            return Err(Error::InvalidSpace("dimension must be positive".into()));
        }
        Ok(Space::Lp(Lp { p, dim }))
    }

    pub fn l1(dim: usize) -> Result<Self> {
        Self::lp(T::one(), dim)
    }

    pub fn linf(dim: usize) -> Result<Self> {
        Self::lp(T::infinity(), dim)
    }

    /// The real line, `ℓ_∞^1`.
    pub fn real() -> Self {
        Space::Lp(Lp {
            p: T::infinity(),
            dim: 1,
        })
    }

    /// Polyhedral space from the extreme points of its dual ball (up to sign).
    pub fn polyhedral(generators: Vec<Vec<T>>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::InvalidSpace("no generators".into()));
        };
        let dim = first.len();
        if dim == 0 {
            return Err(Error::InvalidSpace("zero-dimensional generator".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(Error::InvalidSpace(format!(
                "generator of length {} in dimension {dim}",
                g.len()
            )));
        }
        if generators.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpace("non-finite generator entry".into()));
        }
        let tol = T::epsilon().sqrt();
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if positive_multiple(a, b, tol) {
                    return Err(Error::InvalidSpace(
                        "generator is a positive multiple of another".into(),
                    ));
                }
            }
        }
        let scale = generators.iter().flatten().fold(T::zero(), |m, v| m.max(v.abs()));
        if linalg::rank(&generators, scale * tol) < dim {
            return Err(Error::InvalidSpace("generators do not span the dual space".into()));
        }
        let vertices = polytope_vertices(&generators)?;
        Ok(Space::Polyhedral(Polytope {
            generators: generators.into_iter().map(Functional).collect(),
            vertices,
        }))
    }

    pub fn sup(components: Vec<Space<T>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidSpace("empty sup-sum".into()));
        }
        let depth = 1 + components.iter().map(Space::depth).max().unwrap_or(0);
        if depth > MAX_DEPTH {
            return Err(Error::DepthExceeded(MAX_DEPTH));
        }
        let mut offsets = Vec::with_capacity(components.len());
        let mut dim = 0;
        for c in &components {
            offsets.push(dim);
            dim += c.dim();
        }
        Ok(Space::SupSum(SupSum {
            components,
            offsets,
            dim,
        }))
    }

    /// Sup-sum of `n` copies of `component`.
    pub fn sup_power(component: Space<T>, n: usize) -> Result<Self> {
        Self::sup(vec![component; n])
    }

    pub fn dim(&self) -> usize {
        match self {
            Space::Lp(l) => l.dim,
            Space::Polyhedral(p) => p.dim(),
            Space::SupSum(s) => s.dim,
        }
    }

    /// Sup-sum nesting depth (0 for a leaf space).
    pub fn depth(&self) -> usize {
        match self {
            Space::SupSum(s) => 1 + s.components.iter().map(Space::depth).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn as_supsum(&self) -> Result<&SupSum<T>> {
        match self {
            Space::SupSum(s) => Ok(s),
            _ => Err(Error::Precondition("expected a sup-sum space".into())),
        }
    }

    pub fn check_dim(&self, x: &[T]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Whether the unit ball has finitely many extreme points.
    pub fn has_finite_extremes(&self) -> bool {
        match self {
            Space::Lp(l) => !l.is_smooth(),
            Space::Polyhedral(_) => true,
            Space::SupSum(s) => s.components.iter().all(Space::has_finite_extremes),
        }
    }

    pub fn norm(&self, x: &[T]) -> Result<T> {
        self.check_dim(x)?;
        Ok(self.norm_unchecked(x))
    }

    pub(crate) fn norm_unchecked(&self, x: &[T]) -> T {
        match self {
            Space::Lp(l) => lp_norm(x, l.p),
            Space::Polyhedral(p) => p.generators.iter().map(|g| g.apply(x).abs()).fold(T::zero(), T::max),
            Space::SupSum(s) => s.blocks(x).map(|(_, c, b)| c.norm_unchecked(b)).fold(T::zero(), T::max),
        }
    }

    /// Dual norm of a functional acting on this space.
    pub fn dual_norm(&self, f: &[T]) -> Result<T> {
        self.check_dim(f)?;
        Ok(self.dual_norm_unchecked(f))
    }

    pub(crate) fn dual_norm_unchecked(&self, f: &[T]) -> T {
        match self {
            Space::Lp(l) => lp_norm(f, l.dual_exponent()),
            Space::Polyhedral(p) => p.vertices.iter().map(|v| dot(f, v).abs()).fold(T::zero(), T::max),
            Space::SupSum(s) => s.blocks(f).map(|(_, c, b)| c.dual_norm_unchecked(b)).sum(),
        }
    }

    /// Extreme points of the dual unit ball (both signs).
    pub fn ext_dual(&self) -> Result<Vec<Functional<T>>> {
        match self {
            Space::Lp(l) if l.dim == 1 => Ok(vec![Functional(vec![T::one()]), Functional(vec![-T::one()])]),
            Space::Lp(l) if l.is_linf() => Ok(signed_basis(l.dim).map(Functional).collect()),
            Space::Lp(l) if l.is_l1() => Ok(sign_vectors(l.dim)?.into_iter().map(Functional).collect()),
            Space::Lp(_) => Err(Error::SmoothSpaceHasContinuumExtremes),
            Space::Polyhedral(p) => Ok(p
                .generators
                .iter()
                .flat_map(|g| [g.clone(), g.scaled(-T::one())])
                .collect()),
            Space::SupSum(s) => {
                let mut out = Vec::new();
                for (k, c) in s.components.iter().enumerate() {
                    for g in c.ext_dual()? {
                        out.push(Functional(s.embed(k, &g.0)));
                    }
                }
                Ok(out)
            }
        }
    }

    /// Extreme points of the primal unit ball (both signs).
    pub fn primal_vertices(&self) -> Result<Vec<Vec<T>>> {
        match self {
            Space::Lp(l) if l.dim == 1 => Ok(vec![vec![T::one()], vec![-T::one()]]),
            Space::Lp(l) if l.is_l1() => Ok(signed_basis(l.dim).collect()),
            Space::Lp(l) if l.is_linf() => sign_vectors(l.dim),
            Space::Lp(_) => Err(Error::SmoothSpaceHasContinuumExtremes),
            Space::Polyhedral(p) => Ok(p.vertices.clone()),
            Space::SupSum(s) => {
                let mut acc: Vec<Vec<T>> = vec![Vec::new()];
                for c in &s.components {
                    let vs = c.primal_vertices()?;
                    if acc.len().saturating_mul(vs.len()) > MAX_VERTICES {
                        return Err(Error::Unsupported("too many vertices to enumerate".into()));
                    }
                    acc = acc
                        .iter()
                        .flat_map(|a| {
                            vs.iter().map(move |v| {
                                let mut w = a.clone();
                                w.extend_from_slice(v);
                                w
                            })
                        })
                        .collect();
                }
                Ok(acc)
            }
        }
    }

    /// Dual space, when it is representable by a descriptor:
    /// `ℓ_p ↦ ℓ_q`, polyhedral ↦ polyhedral (generated by the primal
    /// vertices). Sup-sums have `ℓ_1`-sum duals and are rejected.
    pub fn dual(&self) -> Result<Space<T>> {
        match self {
            Space::Lp(l) => Space::lp(l.dual_exponent(), l.dim),
            Space::Polyhedral(p) => {
                let mut gens: Vec<Vec<T>> = Vec::new();
                for v in &p.vertices {
                    let neg: Vec<T> = v.iter().map(|&c| -c).collect();
                    if !gens.iter().any(|g| approx_eq(g, &neg) || approx_eq(g, v)) {
                        gens.push(v.clone());
                    }
                }
                Space::polyhedral(gens)
            }
            Space::SupSum(_) => Err(Error::Unsupported(
                "dual of a sup-sum is an l1-sum, not representable".into(),
            )),
        }
    }

    /// Scales `x` to unit norm.
    pub fn normalize(&self, x: &[T]) -> Result<Vec<T>> {
        let n = self.norm(x)?;
        if n == T::zero() || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(x.iter().map(|&v| v / n).collect())
    }

    /// Checks `| ‖x‖ − 1 | ≤ tol.form`.
    pub fn require_unit(&self, x: &[T], tol: &Tolerances<T>) -> Result<T> {
        let n = self.norm(x)?;
        if (n - T::one()).abs() > tol.form {
            return Err(Error::NotUnit(n.as_f64()));
        }
        Ok(n)
    }
}

/// `ℓ_p` norm with max-scaling so that large `p` does not overflow.
pub(crate) fn lp_norm<T: Scalar>(x: &[T], p: T) -> T {
    let m = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if p.is_infinite() || m == T::zero() || !m.is_finite() {
        return m;
    }
    if p == T::one() {
        return x.iter().map(|v| v.abs()).sum();
    }
    if p == T::lit(2.0) {
        let s: T = x.iter().map(|&v| (v / m) * (v / m)).sum();
        return m * s.sqrt();
    }
    let s: T = x.iter().map(|&v| (v.abs() / m).powf(p)).sum();
    m * s.powf(T::one() / p)
}

fn positive_multiple<T: Scalar>(a: &[T], b: &[T], tol: T) -> bool {
    let na = lp_norm(a, T::lit(2.0));
    let nb = lp_norm(b, T::lit(2.0));
    if na == T::zero() || nb == T::zero() {
        return na == nb;
    }
    dot(a, b) / (na * nb) >= T::one() - tol
}

fn approx_eq<T: Scalar>(a: &[T], b: &[T]) -> bool {
    let tol = T::epsilon().sqrt();
    a.iter()
        .zip(b)
        .all(|(&x, &y)| (x - y).abs() <= tol * (T::one() + x.abs()))
}

fn signed_basis<T: Scalar>(n: usize) -> impl Iterator<Item = Vec<T>> {
    (0..n).flat_map(move |i| {
        [T::one(), -T::one()].into_iter().map(move |s| {
            let mut e = vec![T::zero(); n];
            e[i] = s;
            e
        })
    })
}

fn sign_vectors<T: Scalar>(n: usize) -> Result<Vec<Vec<T>>> {
    if n >= 20 {
        return Err(Error::Unsupported(format!("2^{n} sign vectors")));
    }
    Ok((0..1usize << n)
        .map(|mask| {
            (0..n)
                .map(|i| if mask >> i & 1 == 1 { -T::one() } else { T::one() })
                .collect()
        })
        .collect())
}

/// Vertices of `{x : |g_i(x)| ≤ 1 ∀i}` by enumerating `n`-subsets of
/// active constraints and sign patterns.
fn polytope_vertices<T: Scalar>(gens: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n = gens[0].len();
    let m = gens.len();
    let combos = binomial(m, n).saturating_mul(1usize << (n.min(60) - 1));
    if combos > MAX_VERTICES {
        return Err(Error::Unsupported(format!(
            "{m} generators in dimension {n}: too many candidate vertices"
        )));
    }
    let tol = T::lit(1e-9).max(T::epsilon() * T::lit(100.0));
    let mut out: Vec<Vec<T>> = Vec::new();
    let mut subset: Vec<usize> = (0..n).collect();
    loop {
        let rows: Vec<Vec<T>> = subset.iter().map(|&i| gens[i].clone()).collect();
        // first sign fixed; the negated vertex is added explicitly
        for mask in 0..1usize << (n - 1) {
            let rhs: Vec<T> = (0..n)
                .map(|i| {
                    if i > 0 && mask >> (i - 1) & 1 == 1 {
                        -T::one()
                    } else {
                        T::one()
                    }
                })
                .collect();
            let Some(v) = linalg::solve(rows.clone(), rhs) else {
                continue;
            };
            let feasible = gens.iter().all(|g| dot(g, &v).abs() <= T::one() + tol);
            if feasible && !out.iter().any(|w| approx_eq(w, &v)) {
                let neg: Vec<T> = v.iter().map(|&c| -c).collect();
                out.push(v);
                out.push(neg);
            }
        }
        if !next_combination(&mut subset, m) {
            break;
        }
    }
    Ok(out)
}

fn binomial(m: usize, k: usize) -> usize {
    if k > m {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(m - i) / (i + 1))
}

fn next_combination(c: &mut [usize], m: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < m - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Text grammar: lp(<p>,<n>) | poly[<f1>;<f2>;...] | sup(<desc>,<desc>,...)

impl<T: Scalar> fmt::Display for Space<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Lp(l) if l.p.is_infinite() => write!(f, "lp(inf,{})", l.dim),
            Space::Lp(l) => write!(f, "lp({},{})", l.p, l.dim),
            Space::Polyhedral(p) => {
                f.write_str("poly[")?;
                for (i, g) in p.generators.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    for (j, v) in g.0.iter().enumerate() {
                        if j > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{v}")?;
                    }
                }
                f.write_str("]")
            }
            Space::SupSum(s) => {
                f.write_str("sup(")?;
                for (i, c) in s.components.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl<T: Scalar> std::str::FromStr for Space<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser {
            src: compact.as_bytes(),
            pos: 0,
        };
        let space = p.space(0)?;
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(space)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {}", self.pos))
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{token}`")))
        }
    }

    fn number_text(&mut self) -> Result<&str> {
        let start = self.pos;
        while self.pos < self.src.len() && !b",;)]".contains(&self.src[self.pos]) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos]).map_err(|_| self.error("invalid utf-8"))
    }

    fn scalar<T: Scalar>(&mut self) -> Result<T> {
        let text = self.number_text()?.to_owned();
        let v = text
            .parse::<T>()
            .map_err(|_| Error::Parse(format!("invalid number `{text}`")))?;
        if !v.is_finite() {
            return Err(Error::Parse(format!("non-finite number `{text}`")));
        }
        Ok(v)
    }

    fn space<T: Scalar>(&mut self, depth: usize) -> Result<Space<T>> {
        if depth > MAX_DEPTH {
            return Err(Error::DepthExceeded(MAX_DEPTH));
        }
        if self.eat("lp(") {
            let p = if self.eat("inf") { T::infinity() } else { self.scalar()? };
            self.expect(",")?;
            let n_text = self.number_text()?.to_owned();
            let n = n_text
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("invalid dimension `{n_text}`")))?;
            self.expect(")")?;
            Space::lp(p, n)
        } else if self.eat("poly[") {
            let mut gens = Vec::new();
            loop {
                let mut g = vec![self.scalar()?];
                while self.eat(",") {
                    g.push(self.scalar()?);
                }
                gens.push(g);
                if self.eat("]") {
                    break;
                }
                self.expect(";")?;
            }
            Space::polyhedral(gens)
        } else if self.eat("sup(") {
            let mut comps = vec![self.space(depth + 1)?];
            while self.eat(",") {
                comps.push(self.space(depth + 1)?);
            }
            self.expect(")")?;
            Space::sup(comps)
        } else {
            Err(self.error("expected `lp(`, `poly[` or `sup(`"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> Space<f64> {
        s.parse().unwrap()
    }

    #[test]
    fn norm_examples() {
        let l3 = sp("lp(3,2)");
        assert!((l3.norm(&[1.0, 1.0]).unwrap() - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
        assert_eq!(sp("lp(inf,2)").norm(&[1.0, -2.0]).unwrap(), 2.0);
        let s = sp("sup(lp(2,2),lp(1,2))");
        assert_eq!(s.norm(&[3.0, 4.0, 1.0, 1.0]).unwrap(), 5.0);
    }

    #[test]
    fn dual_norm_examples() {
        assert_eq!(sp("lp(1,2)").dual_norm(&[0.5, -1.0]).unwrap(), 1.0);
        assert_eq!(sp("lp(2,3)").dual_norm(&[1.0, 2.0, 2.0]).unwrap(), 3.0);
        assert_eq!(sp("sup(lp(inf,1),lp(inf,1))").dual_norm(&[1.0, 1.0]).unwrap(), 2.0);
    }

    #[test]
    fn large_exponent_does_not_overflow() {
        let s = sp("lp(5000,3)");
        let n = s.norm(&[1e10, 1e10, 0.5]).unwrap();
        assert!((n / 1e10 - 2f64.powf(1.0 / 5000.0)).abs() < 1e-12);
        assert!(Space::<f64>::lp(2e6, 2).is_err());
    }

    #[test]
    fn dimension_mismatch_and_bad_exponent() {
        assert!(matches!(
            sp("lp(2,2)").norm(&[1.0]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
        assert!(Space::<f64>::lp(0.5, 2).is_err());
        assert!("lp(0.5,2)".parse::<Space<f64>>().is_err());
    }

    #[test]
    fn ext_dual_examples() {
        let e = sp("lp(inf,2)").ext_dual().unwrap();
        assert_eq!(e.len(), 4);
        assert!(e.contains(&Functional(vec![1.0, 0.0])) && e.contains(&Functional(vec![0.0, -1.0])));
        assert_eq!(sp("lp(1,2)").ext_dual().unwrap().len(), 4);
        let s = sp("sup(lp(inf,1),lp(inf,1))").ext_dual().unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.contains(&Functional(vec![0.0, -1.0])));
        assert_eq!(sp("lp(3,2)").ext_dual(), Err(Error::SmoothSpaceHasContinuumExtremes));
    }

    #[test]
    fn polytope_vertices_of_rotated_square() {
        // ‖x‖ = max(|x1+x2|, |x1−x2|) has vertices ±e1, ±e2
        let s = sp("poly[1,1;1,-1]");
        let Space::Polyhedral(p) = &s else { panic!() };
        assert_eq!(p.vertices().len(), 4);
        for v in p.vertices() {
            assert!((s.norm(v).unwrap() - 1.0).abs() < 1e-14);
        }
        // dual norm is the l1-type norm generated by the vertices
        assert!((s.dual_norm(&[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-14);
        assert!((s.dual_norm(&[1.0, 1.0]).unwrap() - 1.0).abs() < 1e-14);
        assert!((s.dual_norm(&[2.0, 0.0]).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn polyhedral_hexagon_matches_brute_force_dual_norm() {
        let s = sp("poly[1,0;0,1;1,1]");
        let f = [0.3, -0.7];
        // sample the boundary of the unit ball finely
        let mut best: f64 = 0.0;
        for i in 0..200_000 {
            let t = i as f64 * std::f64::consts::TAU / 200_000.0;
            let d = [t.cos(), t.sin()];
            let n = s.norm(&d).unwrap();
            best = best.max((f[0] * d[0] + f[1] * d[1]).abs() / n);
        }
        assert!((s.dual_norm(&f).unwrap() - best).abs() < 1e-8);
    }

    #[test]
    fn invalid_polyhedral_descriptors() {
        assert!(Space::<f64>::polyhedral(vec![vec![1.0, 0.0]]).is_err());
        assert!(Space::<f64>::polyhedral(vec![vec![1.0, 0.0], vec![2.0, 0.0], vec![0.0, 1.0]]).is_err());
        assert!(Space::<f64>::polyhedral(vec![vec![1.0, 0.0], vec![0.0]]).is_err());
    }

    #[test]
    fn supsum_dimension_and_depth_guard() {
        let s = sp("sup(lp(2,2),sup(lp(1,3),lp(inf,1)))");
        assert_eq!(s.dim(), 6);
        assert_eq!(s.depth(), 2);
        let mut d: Space<f64> = Space::real();
        for _ in 0..MAX_DEPTH {
            d = Space::sup(vec![d]).unwrap();
        }
        assert_eq!(Space::sup(vec![d]), Err(Error::DepthExceeded(MAX_DEPTH)));
    }

    #[test]
    fn canonical_forms_round_trip() {
        for s in [
            "lp(1,3)",
            "lp(inf,2)",
            "lp(1.5,4)",
            "poly[1,0;0,1;1,1]",
            "poly[0.5,-0.25;1,2]",
            "sup(lp(2,2),lp(1,2))",
            "sup(sup(lp(inf,1),lp(3,2)),poly[1,1;1,-1])",
        ] {
            assert_eq!(sp(s).to_string(), s);
        }
        assert_eq!(
            sp(" sup( lp(2, 2) , lp(inf,1) ) ").to_string(),
            "sup(lp(2,2),lp(inf,1))"
        );
    }

    #[test]
    fn malformed_descriptors() {
        for s in [
            "",
            "lp(2)",
            "lp(2,0)",
            "foo(1,2)",
            "sup()",
            "poly[]",
            "lp(2,2)x",
            "lp(nan,2)",
        ] {
            assert!(s.parse::<Space<f64>>().is_err(), "{s}");
        }
    }

    #[test]
    fn primal_vertices_and_dual() {
        assert_eq!(sp("lp(inf,3)").primal_vertices().unwrap().len(), 8);
        assert_eq!(sp("lp(1,3)").primal_vertices().unwrap().len(), 6);
        assert_eq!(sp("sup(lp(1,2),lp(inf,1))").primal_vertices().unwrap().len(), 8);
        assert_eq!(sp("lp(3,2)").dual().unwrap(), Space::lp(1.5, 2).unwrap());
        assert_eq!(sp("lp(1,2)").dual().unwrap(), sp("lp(inf,2)"));
        let d = sp("poly[1,1;1,-1]").dual().unwrap();
        assert!((d.norm(&[1.0, 1.0]).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn f32_support() {
        let s: Space<f32> = "lp(3,2)".parse().unwrap();
        assert!((s.norm(&[1.0, 1.0]).unwrap() - 2f32.powf(1.0 / 3.0)).abs() < 1e-6);
    }
}
