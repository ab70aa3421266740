//! Matrix operators between supported spaces.
//!
//! Two isometric embeddings reduce operator questions to sup-sums:
//!
//! * `L(ℓ_1^m, Y) ≅ ℓ_∞^m(Y)` through the column tuple `(Te_1, …, Te_m)`;
//! * `L(X, ℓ_∞^n) ≅ ℓ_∞^n(X*)` through the row functionals `T*(e_i)`.
//!
//! Operator norms are computed exactly when some reduction applies: by
//! columns for an `ℓ_1` domain, by dual extremes of the codomain
//! (`‖T‖ = max ‖T*y*‖` over `Ext(B_{Y*})`), by a vertex scan of a
//! polyhedral domain, or spectrally for `ℓ_2 → ℓ_2`. Other pairs are
//! refused.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jset::support_set;
use crate::linalg::{max_symmetric_eigenvalue, rank};
use crate::orthogonality::{classify_drop, ternary_min, Decision, LineMin, OracleKind, OrthoVerdict};
use crate::scalar::{dot, sign, Scalar, Tolerances};
use crate::space::{Functional, Space};
use crate::symmetry::{
    classify_left, classify_left_supsum, classify_right_supsum, witness_left_supsum, witness_right_supsum, Direction,
    SearchConfig, SupSumWitness,
};

/// Real `rows × cols` matrix acting from `domain` (dim `cols`) to
/// `codomain` (dim `rows`). Entries are stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix<T: Scalar> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
    domain: Space<T>,
    codomain: Space<T>,
}

impl<T: Scalar> OperatorMatrix<T> {
    pub fn new(entries: Vec<T>, domain: Space<T>, codomain: Space<T>) -> Result<Self> {
        let (rows, cols) = (codomain.dim(), domain.dim());
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse("matrix entries must be finite".into()));
        }
        Ok(Self {
            rows,
            cols,
            entries,
            domain,
            codomain,
        })
    }

    pub fn from_rows(rows: Vec<Vec<T>>, domain: Space<T>, codomain: Space<T>) -> Result<Self> {
        if rows.len() != codomain.dim() {
            return Err(Error::DimensionMismatch {
                expected: codomain.dim(),
                got: rows.len(),
            });
        }
        for r in &rows {
            domain.check_dim(r)?;
        }
        Self::new(rows.into_iter().flatten().collect(), domain, codomain)
    }

    pub fn zeros(domain: Space<T>, codomain: Space<T>) -> Self {
        let entries = vec![T::zero(); domain.dim() * codomain.dim()];
        Self::new(entries, domain, codomain).expect("consistent shape")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn domain(&self) -> &Space<T> {
        &self.domain
    }

    pub fn codomain(&self) -> &Space<T> {
        &self.codomain
    }

    pub fn entry(&self, i: usize, j: usize) -> T {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.entry(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn apply(&self, x: &[T]) -> Result<Vec<T>> {
        self.domain.check_dim(x)?;
        Ok(self.apply_unchecked(x))
    }

    fn apply_unchecked(&self, x: &[T]) -> Vec<T> {
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// `T*(y*)`: the functional `x ↦ y*(Tx)` on the domain.
    pub fn adjoint_apply(&self, y: &[T]) -> Result<Functional<T>> {
        self.codomain.check_dim(y)?;
        Ok(Functional(self.transpose_apply(y)))
    }

    fn transpose_apply(&self, y: &[T]) -> Vec<T> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.entry(i, j) * y[i]).sum())
            .collect()
    }

    /// Transpose acting from the codomain dual to the domain dual.
    pub fn adjoint(&self) -> Result<Self> {
        let entries = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.entry(i, j))
            .collect();
        Self::new(entries, self.codomain.dual()?, self.domain.dual()?)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == T::zero())
    }

    pub fn scaled(&self, a: T) -> Self {
        Self {
            entries: self.entries.iter().map(|&v| a * v).collect(),
            ..self.clone()
        }
    }

    /// `self + l·other`; both must act between the same spaces.
    pub fn add_scaled(&self, l: T, other: &Self) -> Result<Self> {
        self.same_spaces(other)?;
        Ok(Self {
            entries: axpy(&self.entries, l, &other.entries),
            ..self.clone()
        })
    }

    fn same_spaces(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::Precondition("operators act between different spaces".into()));
        }
        Ok(())
    }

    /// Numerical rank with absolute pivot tolerance `tol · max |entry|`.
    pub fn rank(&self, tol: T) -> usize {
        let scale = self.entries.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        if scale == T::zero() {
            return 0;
        }
        rank(&self.to_rows(), tol * scale)
    }
}

fn axpy<T: Scalar>(a: &[T], l: T, b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x + l * y).collect()
}

fn is_l1_like<T: Scalar>(s: &Space<T>) -> bool {
    matches!(s, Space::Lp(l) if l.is_l1() || l.dim() == 1)
}

fn is_linf_like<T: Scalar>(s: &Space<T>) -> bool {
    matches!(s, Space::Lp(l) if l.is_linf() || l.dim() == 1)
}

fn is_hilbert<T: Scalar>(s: &Space<T>) -> bool {
    matches!(s, Space::Lp(l) if l.p() == T::lit(2.0))
}

fn unsupported_pair<T: Scalar>(domain: &Space<T>, codomain: &Space<T>) -> Error {
    Error::UnsupportedPair(format!("{domain} -> {codomain}"))
}

// ---------------------------------------------------------------------------
// Embeddings

/// Image of an operator in a sup-sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding<T: Scalar> {
    pub space: Space<T>,
    pub vector: Vec<T>,
}

/// `T ↦ (Te_1, …, Te_m)` in `ℓ_∞^m(Y)` for `T: ℓ_1^m → Y`.
pub fn embed_l1_domain<T: Scalar>(t: &OperatorMatrix<T>) -> Result<Embedding<T>> {
    if !is_l1_like(&t.domain) {
        return Err(Error::Precondition(format!("domain {} is not l1", t.domain)));
    }
    Ok(Embedding {
        space: Space::sup_power(t.codomain.clone(), t.cols)?,
        vector: (0..t.cols).flat_map(|j| t.column(j)).collect(),
    })
}

/// Inverse of [`embed_l1_domain`].
pub fn unembed_l1_domain<T: Scalar>(codomain: &Space<T>, m: usize, v: &[T]) -> Result<OperatorMatrix<T>> {
    let n = codomain.dim();
    if v.len() != n * m {
        return Err(Error::DimensionMismatch {
            expected: n * m,
            got: v.len(),
        });
    }
    let entries = (0..n).flat_map(|i| (0..m).map(move |j| v[j * n + i])).collect();
    OperatorMatrix::new(entries, Space::l1(m)?, codomain.clone())
}

/// `T ↦ (T*e_1, …, T*e_n)` in `ℓ_∞^n(X*)` for `T: X → ℓ_∞^n`.
pub fn embed_linf_codomain<T: Scalar>(t: &OperatorMatrix<T>) -> Result<Embedding<T>> {
    if !is_linf_like(&t.codomain) {
        return Err(Error::Precondition(format!("codomain {} is not l_inf", t.codomain)));
    }
    let dual = t.domain.dual().map_err(|_| unsupported_pair(&t.domain, &t.codomain))?;
    Ok(Embedding {
        space: Space::sup_power(dual, t.rows)?,
        vector: t.entries.clone(),
    })
}

/// Inverse of [`embed_linf_codomain`].
pub fn unembed_linf_codomain<T: Scalar>(domain: &Space<T>, n: usize, v: &[T]) -> Result<OperatorMatrix<T>> {
    OperatorMatrix::new(v.to_vec(), domain.clone(), Space::linf(n)?)
}

/// The embedding used for classification: `ℓ_1` domain first, then
/// `ℓ_∞` codomain.
fn classification_embedding<T: Scalar>(t: &OperatorMatrix<T>) -> Result<Embedding<T>> {
    if is_l1_like(&t.domain) {
        embed_l1_domain(t)
    } else if is_linf_like(&t.codomain) {
        embed_linf_codomain(t)
    } else {
        Err(unsupported_pair(&t.domain, &t.codomain))
    }
}

fn unembed<T: Scalar>(t: &OperatorMatrix<T>, v: &[T]) -> Result<OperatorMatrix<T>> {
    let s = if is_l1_like(&t.domain) {
        unembed_l1_domain(&t.codomain, t.cols, v)?
    } else {
        unembed_linf_codomain(&t.domain, t.rows, v)?
    };
    Ok(OperatorMatrix {
        domain: t.domain.clone(),
        codomain: t.codomain.clone(),
        ..s
    })
}

// ---------------------------------------------------------------------------
// Norms

/// Exact operator norm evaluator for a fixed pair of spaces.
enum NormMethod<T: Scalar> {
    Columns,
    DualExtremes(Vec<Functional<T>>),
    Vertices(Vec<Vec<T>>),
    Spectral,
}

impl<T: Scalar> NormMethod<T> {
    fn for_pair(domain: &Space<T>, codomain: &Space<T>) -> Result<Self> {
        if is_l1_like(domain) {
            return Ok(NormMethod::Columns);
        }
        if codomain.has_finite_extremes() {
            if let Ok(ext) = codomain.ext_dual() {
                return Ok(NormMethod::DualExtremes(halve(ext)));
            }
        }
        if domain.has_finite_extremes() {
            if let Ok(vs) = domain.primal_vertices() {
                return Ok(NormMethod::Vertices(halve_vecs(vs)));
            }
        }
        if is_hilbert(domain) && is_hilbert(codomain) {
            return Ok(NormMethod::Spectral);
        }
        Err(unsupported_pair(domain, codomain))
    }

    fn eval(&self, t: &OperatorMatrix<T>) -> T {
        match self {
            NormMethod::Columns => (0..t.cols)
                .map(|j| t.codomain.norm_unchecked(&t.column(j)))
                .fold(T::zero(), T::max),
            NormMethod::DualExtremes(ext) => ext
                .iter()
                .map(|y| t.domain.dual_norm_unchecked(&t.transpose_apply(&y.0)))
                .fold(T::zero(), T::max),
            NormMethod::Vertices(vs) => vs
                .iter()
                .map(|v| t.codomain.norm_unchecked(&t.apply_unchecked(v)))
                .fold(T::zero(), T::max),
            NormMethod::Spectral => {
                let ata: Vec<Vec<T>> = (0..t.cols)
                    .map(|a| {
                        (0..t.cols)
                            .map(|b| (0..t.rows).map(|i| t.entry(i, a) * t.entry(i, b)).sum())
                            .collect()
                    })
                    .collect();
                max_symmetric_eigenvalue(ata).max(T::zero()).sqrt()
            }
        }
    }
}

/// Keeps one of each `±` pair (the lists come with both signs).
fn halve<T: Scalar>(fs: Vec<Functional<T>>) -> Vec<Functional<T>> {
    let vs = halve_vecs(fs.into_iter().map(|f| f.0).collect());
    vs.into_iter().map(Functional).collect()
}

fn halve_vecs<T: Scalar>(vs: Vec<Vec<T>>) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = Vec::with_capacity(vs.len() / 2 + 1);
    for v in vs {
        if !out.iter().any(|u| u.iter().zip(&v).all(|(&a, &b)| a == -b)) {
            out.push(v);
        }
    }
    out
}

/// Exact operator norm, when a reduction applies.
pub fn operator_norm<T: Scalar>(t: &OperatorMatrix<T>) -> Result<T> {
    Ok(NormMethod::for_pair(&t.domain, &t.codomain)?.eval(t))
}

/// `min_λ ‖T + λS‖` by ternary search, with the same bracket as for vectors.
pub fn operator_min_along<T: Scalar>(t: &OperatorMatrix<T>, s: &OperatorMatrix<T>) -> Result<LineMin<T>> {
    t.same_spaces(s)?;
    let method = NormMethod::for_pair(&t.domain, &t.codomain)?;
    let nt = method.eval(t);
    let ns = method.eval(s);
    if ns == T::zero() {
        return Err(Error::ZeroVector);
    }
    let r = T::lit(2.0) * nt / ns + T::one();
    let mut buf = t.clone();
    let (lambda, value) = ternary_min(-r, r, |l| {
        buf.entries = axpy(&t.entries, l, &s.entries);
        method.eval(&buf)
    });
    Ok(if value <= nt {
        LineMin { lambda, value }
    } else {
        LineMin {
            lambda: T::zero(),
            value: nt,
        }
    })
}

/// Minimization oracle for `T ⊥_B S` in the operator norm.
pub fn is_bj_operator_min<T: Scalar>(
    t: &OperatorMatrix<T>,
    s: &OperatorMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<OrthoVerdict<T>> {
    let nt = operator_norm(t)?;
    if nt == T::zero() {
        return Err(Error::ZeroVector);
    }
    let m = operator_min_along(t, s)?;
    Ok(OrthoVerdict {
        decision: classify_drop(m.value, nt, tol.rel),
        certificate: Some(m),
        range: None,
        oracle: OracleKind::Minimization,
    })
}

// ---------------------------------------------------------------------------
// Attainment

/// Extreme points of the domain ball where `‖Tv‖ = ‖T‖`, one per `±` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceSet<T> {
    pub vertices: Vec<Vec<T>>,
    /// The vertices, with the signs as stored, lie on one face `F` of the
    /// ball, so that `M_T = ±F`.
    pub sign_paired: bool,
    pub norm: T,
}

/// `M_T` through its extreme points. Domains with finitely many extreme
/// points are scanned; on a smooth `ℓ_p` domain only rank-one operators are
/// accepted, whose attainment set is the pair `±x₀` with `x₀` the norming
/// point of the row functional.
pub fn attainment_faces<T: Scalar>(t: &OperatorMatrix<T>, tol: &Tolerances<T>) -> Result<FaceSet<T>> {
    if t.is_zero() {
        return Err(Error::ZeroVector);
    }
    if t.domain.has_finite_extremes() {
        let vs = halve_vecs(t.domain.primal_vertices()?);
        let vals: Vec<T> = vs
            .iter()
            .map(|v| t.codomain.norm_unchecked(&t.apply_unchecked(v)))
            .collect();
        let norm = vals.iter().copied().fold(T::zero(), T::max);
        let kept: Vec<Vec<T>> = vs
            .into_iter()
            .zip(&vals)
            .filter(|(_, &val)| val >= norm * (T::one() - tol.tie))
            .map(|(v, _)| v)
            .collect();
        let (vertices, sign_paired) = align_on_face(t, norm, kept, tol);
        return Ok(FaceSet {
            vertices,
            sign_paired,
            norm,
        });
    }
    match &t.domain {
        Space::Lp(l) if l.is_smooth() && t.rank(tol.norm) == 1 => {
            let i = (0..t.rows)
                .max_by(|&a, &b| {
                    let na = t.domain.dual_norm_unchecked(t.row(a));
                    let nb = t.domain.dual_norm_unchecked(t.row(b));
                    na.partial_cmp(&nb).unwrap_or(std::cmp::Ordering::Equal)
                })
                .expect("nonzero operator has rows");
            let q = l.dual_exponent();
            let f = t.row(i);
            let x: Vec<T> = f.iter().map(|&v| sign(v) * v.abs().powf(q - T::one())).collect();
            let x = t.domain.normalize(&x)?;
            let norm = t.codomain.norm_unchecked(&t.apply_unchecked(&x));
            Ok(FaceSet {
                vertices: vec![x],
                sign_paired: true,
                norm,
            })
        }
        _ => Err(Error::SmoothSpaceHasContinuumExtremes),
    }
}

/// Chooses signs so that the attaining vertices span one face `F` with
/// `T` norm-attaining on all of `F`, if possible. That holds iff the
/// average `c` of the signed vertices has `‖Tc‖ = ‖T‖`.
fn align_on_face<T: Scalar>(
    t: &OperatorMatrix<T>,
    norm: T,
    vs: Vec<Vec<T>>,
    tol: &Tolerances<T>,
) -> (Vec<Vec<T>>, bool) {
    let k = vs.len();
    let images: Vec<Vec<T>> = vs.iter().map(|v| t.apply_unchecked(v)).collect();
    let avg_norm = |signs: &[T]| {
        let mut c = vec![T::zero(); t.rows];
        for (v, &s) in images.iter().zip(signs) {
            for (a, &b) in c.iter_mut().zip(v) {
                *a = *a + s * b;
            }
        }
        t.codomain.norm_unchecked(&c)
    };
    let on_face = |signs: &[T]| avg_norm(signs) / T::lit(k as f64) >= norm * (T::one() - tol.form);
    let signs_for = |mask: usize| -> Vec<T> {
        (0..k)
            .map(|i| {
                if i > 0 && mask >> (i - 1) & 1 == 1 {
                    -T::one()
                } else {
                    T::one()
                }
            })
            .collect()
    };
    let apply = |signs: &[T]| -> Vec<Vec<T>> {
        vs.iter()
            .zip(signs)
            .map(|(v, &s)| v.iter().map(|&c| s * c).collect())
            .collect()
    };
    if k <= 16 {
        for mask in 0..1usize << (k.max(1) - 1) {
            let signs = signs_for(mask);
            if on_face(&signs) {
                return (apply(&signs), true);
            }
        }
        return (vs, false);
    }
    // Greedy: align each vertex with the running sum.
    let mut signs = vec![T::one(); k];
    let mut c = images[0].clone();
    for i in 1..k {
        let plus = t.codomain.norm_unchecked(&axpy(&c, T::one(), &images[i]));
        let minus = t.codomain.norm_unchecked(&axpy(&c, -T::one(), &images[i]));
        if minus > plus {
            signs[i] = -T::one();
        }
        c = axpy(&c, signs[i], &images[i]);
    }
    let ok = on_face(&signs);
    (apply(&signs), ok)
}

/// `Tx = f(x)·w`.
pub fn rank1<T: Scalar>(f: &[T], w: &[T], domain: &Space<T>, codomain: &Space<T>) -> Result<OperatorMatrix<T>> {
    domain.check_dim(f)?;
    codomain.check_dim(w)?;
    if f.iter().all(|&v| v == T::zero()) || w.iter().all(|&v| v == T::zero()) {
        return Err(Error::ZeroVector);
    }
    let entries = w.iter().flat_map(|&wi| f.iter().map(move |&fj| wi * fj)).collect();
    OperatorMatrix::new(entries, domain.clone(), codomain.clone())
}

/// `T ⊥_B S` for rank-one `T`: some attaining `v₁, v₂` have
/// `Sv₁ ∈ (Tv₁)⁺` and `Sv₂ ∈ (Tv₂)⁻`. On `M_T = ±F` the vector `Tv` is
/// constant, `v ↦ max_{J(Tv)} h(Sv)` is convex and the minimum concave,
/// so checking the vertices of `F` is exact.
pub fn ortho_operators_rank1<T: Scalar>(
    t: &OperatorMatrix<T>,
    s: &OperatorMatrix<T>,
    tol: &Tolerances<T>,
) -> Result<OrthoVerdict<T>> {
    t.same_spaces(s)?;
    if t.rank(tol.norm) != 1 {
        return Err(Error::Precondition("T must have rank one".into()));
    }
    let faces = attainment_faces(t, tol)?;
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for v in &faces.vertices {
        let a = t.apply_unchecked(v);
        let b = s.apply_unchecked(v);
        let nb = t.codomain.norm_unchecked(&b);
        // Sv below the rounding level of S·v counts as zero.
        let scale =
            s.entries.iter().fold(T::zero(), |m, e| m.max(e.abs())) * v.iter().fold(T::zero(), |a, c| a + c.abs());
        let (l, h) = if nb <= tol.norm * scale {
            (T::zero(), T::zero())
        } else {
            let (l, h) = support_set(&t.codomain, &a, tol)?.range(&b)?;
            // Compare against the slack in units of ‖Sv‖.
            let slack = tol.norm * nb;
            (
                if l <= slack { l.min(T::zero()) } else { l },
                if h >= -slack { h.max(T::zero()) } else { h },
            )
        };
        lo = lo.min(l);
        hi = hi.max(h);
    }
    Ok(OrthoVerdict {
        decision: if lo <= T::zero() && hi >= T::zero() {
            Decision::Orthogonal
        } else {
            Decision::NotOrthogonal
        },
        certificate: None,
        range: Some((lo, hi)),
        oracle: OracleKind::OperatorAttainment,
    })
}

// ---------------------------------------------------------------------------
// Symmetry

fn require_unit_operator<T: Scalar>(t: &OperatorMatrix<T>, tol: &Tolerances<T>) -> Result<()> {
    let n = operator_norm(t)?;
    if (n - T::one()).abs() > tol.form {
        return Err(Error::NotUnit(n.as_f64()));
    }
    Ok(())
}

/// Left symmetry of a unit operator with `ℓ_1` domain or `ℓ_∞` codomain,
/// decided on its sup-sum image.
pub fn classify_left_operator<T: Scalar>(t: &OperatorMatrix<T>, tol: &Tolerances<T>) -> Result<bool> {
    let e = classification_embedding(t)?;
    require_unit_operator(t, tol)?;
    classify_left_supsum(&e.space, &e.vector, tol)
}

/// Right symmetry of a unit operator with `ℓ_1` domain or `ℓ_∞` codomain.
pub fn classify_right_operator<T: Scalar>(t: &OperatorMatrix<T>, tol: &Tolerances<T>) -> Result<bool> {
    let e = classification_embedding(t)?;
    require_unit_operator(t, tol)?;
    classify_right_supsum(&e.space, &e.vector, tol)
}

/// `S` violating the symmetry of `T`, with both halves re-verified in the
/// operator norm.
///
/// Left: `T ⊥_B S` and `S ̸⊥_B T`. Right: `S ⊥_B T` and `T ̸⊥_B S`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorWitness<T: Scalar> {
    pub direction: Direction,
    pub s: OperatorMatrix<T>,
    pub holds: OrthoVerdict<T>,
    pub fails: OrthoVerdict<T>,
    pub image: SupSumWitness<T>,
}

fn operator_witness<T: Scalar>(
    t: &OperatorMatrix<T>,
    direction: Direction,
    cfg: &SearchConfig,
    tol: &Tolerances<T>,
) -> Result<OperatorWitness<T>> {
    let e = classification_embedding(t)?;
    require_unit_operator(t, tol)?;
    let image = match direction {
        Direction::Left => witness_left_supsum(&e.space, &e.vector, cfg, tol)?,
        Direction::Right => witness_right_supsum(&e.space, &e.vector, cfg, tol)?,
    };
    let s = unembed(t, &image.g)?;
    let (holds, fails) = match direction {
        Direction::Left => (is_bj_operator_min(t, &s, tol)?, is_bj_operator_min(&s, t, tol)?),
        Direction::Right => (is_bj_operator_min(&s, t, tol)?, is_bj_operator_min(t, &s, tol)?),
    };
    if !holds.is_orthogonal() || !fails.is_not_orthogonal() {
        return Err(Error::WitnessRejected(format!(
            "operator pair: holds {:?}, fails {:?}",
            holds.decision, fails.decision
        )));
    }
    Ok(OperatorWitness {
        direction,
        s,
        holds,
        fails,
        image,
    })
}

pub fn witness_left_operator<T: Scalar>(
    t: &OperatorMatrix<T>,
    cfg: &SearchConfig,
    tol: &Tolerances<T>,
) -> Result<OperatorWitness<T>> {
    operator_witness(t, Direction::Left, cfg, tol)
}

pub fn witness_right_operator<T: Scalar>(
    t: &OperatorMatrix<T>,
    cfg: &SearchConfig,
    tol: &Tolerances<T>,
) -> Result<OperatorWitness<T>> {
    operator_witness(t, Direction::Right, cfg, tol)
}

/// Sufficient condition for left symmetry: exactly one pair `±y₀*` of
/// codomain dual extremes has `T*(y₀*) ≠ 0`, and that image is a unit, left
/// symmetric functional.
pub fn check_nice_left_sufficient<T: Scalar>(t: &OperatorMatrix<T>, tol: &Tolerances<T>) -> Result<bool> {
    let ext = halve(t.codomain.ext_dual()?);
    let xdual = t.domain.dual()?;
    let images: Vec<Vec<T>> = ext
        .iter()
        .map(|y| t.transpose_apply(&y.0))
        .filter(|img| t.domain.dual_norm_unchecked(img) > tol.form)
        .collect();
    match &images[..] {
        [img] => {
            let n = t.domain.dual_norm_unchecked(img);
            Ok((n - T::one()).abs() <= tol.form && classify_left(&xdual, img, tol)?)
        }
        _ => Ok(false),
    }
}

/// Outcome of [`hilbert_no_left_probe`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HilbertProbeReport {
    pub n: usize,
    pub trials: usize,
    pub refuted: usize,
    /// Trials for which no `S` was found.
    pub unrefuted: Vec<usize>,
}

/// Candidates tried per trial in [`refute_rank1_hilbert`].
pub const HILBERT_PROBE_ATTEMPTS: usize = 64;

/// Refutes left symmetry of random unit rank-one operators on `ℓ_2^n`.
/// Trial `i` draws from stream `i` of `seed`.
pub fn hilbert_no_left_probe<T: Scalar>(
    n: usize,
    trials: usize,
    seed: u64,
    tol: &Tolerances<T>,
) -> Result<HilbertProbeReport> {
    let mut refuted = 0;
    let mut unrefuted = Vec::new();
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        if refute_rank1_hilbert::<T, _>(n, &mut rng, tol)?.is_some() {
            refuted += 1;
        } else {
            unrefuted.push(trial);
        }
    }
    Ok(HilbertProbeReport {
        n,
        trials,
        refuted,
        unrefuted,
    })
}

/// One probe trial: a random unit `T = w ⊗ x₀` on `ℓ_2^n` and, if found,
/// `S` with `T ⊥_B S` and `S ̸⊥_B T`. Candidates `S` are Gaussian matrices
/// projected so that `⟨Sx₀, w⟩ = 0`, which gives `T ⊥_B S` by attainment
/// at `±x₀`; `S ̸⊥_B T` is confirmed by the minimization oracle on the
/// spectral norm.
pub fn refute_rank1_hilbert<T: Scalar, R: rand::Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    tol: &Tolerances<T>,
) -> Result<Option<(OperatorMatrix<T>, OperatorMatrix<T>)>> {
    if n < 2 {
        return Err(Error::Precondition("n must be at least 2".into()));
    }
    let h = Space::lp(T::lit(2.0), n)?;
    let mut gauss = |k: usize| -> Vec<T> { (0..k).map(|_| T::lit(StandardNormal.sample(&mut *rng))).collect() };
    let x0 = h.normalize(&gauss(n))?;
    let w = h.normalize(&gauss(n))?;
    let t = rank1(&x0, &w, &h, &h)?;
    for _ in 0..HILBERT_PROBE_ATTEMPTS {
        let mut s = OperatorMatrix::new(gauss(n * n), h.clone(), h.clone())?;
        let c = dot(&s.apply_unchecked(&x0), &w);
        s = s.add_scaled(-c, &t)?;
        if s.is_zero() || !ortho_operators_rank1(&t, &s, tol)?.is_orthogonal() {
            continue;
        }
        if is_bj_operator_min(&t, &s, tol)?.is_orthogonal() && is_bj_operator_min(&s, &t, tol)?.is_not_orthogonal() {
            return Ok(Some((t, s)));
        }
    }
    Ok(None)
}
