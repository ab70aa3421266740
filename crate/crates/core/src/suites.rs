//! Randomized property suites, one per characterization.
//!
//! Each suite draws independent instances (trial `i` uses stream `i` of the
//! configured seed), checks the library's answer against an independent
//! criterion and records every disagreement. Reports are deterministic for
//! a fixed configuration.

use std::collections::BTreeMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::operators::{
    attainment_faces, check_nice_left_sufficient, classify_left_operator, classify_right_operator, embed_l1_domain,
    embed_linf_codomain, is_bj_operator_min, operator_norm, ortho_operators_rank1, rank1, refute_rank1_hilbert,
    unembed_l1_domain, unembed_linf_codomain, witness_left_operator, witness_right_operator, OperatorMatrix,
};
use crate::orthogonality::{is_bj_functional, is_bj_min, supsum_orthogonal, supsum_orthogonal_general, Decision};
use crate::sample;
use crate::scalar::Tolerances;
use crate::space::Space;
use crate::symmetry::{
    classify_left, classify_left_supsum, classify_right_supsum, is_symmetric_supsum, search_left_counterexample,
    search_right_counterexample, witness_left_supsum, witness_right_supsum, SearchConfig, SupSumCase, DEFAULT_SEED,
};

/// Catalogue entry for a suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteInfo {
    pub id: &'static str,
    pub summary: &'static str,
    pub default_trials: usize,
}

pub const SUITES: &[SuiteInfo] = &[
    SuiteInfo {
        id: "THM-LEFT-SUPSUM",
        summary: "sup-sum left symmetry: accepted points survive search, rejected points get a verified witness",
        default_trials: 200,
    },
    SuiteInfo {
        id: "THM-RIGHT-NEC",
        summary: "sup-sum right symmetry needs unit, right symmetric blocks: violations get a verified witness",
        default_trials: 1000,
    },
    SuiteInfo {
        id: "THM-RIGHT-SUFF-FINITE",
        summary: "sup-sum points with unit right symmetric blocks are accepted and survive search",
        default_trials: 200,
    },
    SuiteInfo {
        id: "COR-DIRECTSUM",
        summary: "nonzero points of a sup-sum with two or more blocks are never symmetric",
        default_trials: 1000,
    },
    SuiteInfo {
        id: "THM-ORTH-GENERAL-FINITE",
        summary: "sup-sum orthogonality criteria agree with line minimization",
        default_trials: 2000,
    },
    SuiteInfo {
        id: "PROP-ISOMETRIC",
        summary: "l1-domain and l_inf-codomain embeddings preserve the operator norm",
        default_trials: 2000,
    },
    SuiteInfo {
        id: "THM-LEFT-INFTY",
        summary: "operators into l_inf^n are left symmetric iff one row is nonzero and left symmetric",
        default_trials: 500,
    },
    SuiteInfo {
        id: "COR-LEFT-LP",
        summary: "left symmetric operators l_p^m -> l_inf^n are exactly one canonical row",
        default_trials: 1000,
    },
    SuiteInfo {
        id: "COR-RIGHT-LP",
        summary: "right symmetric operators l_p^m -> l_inf^n are exactly all rows canonical",
        default_trials: 1000,
    },
    SuiteInfo {
        id: "THM-NICE-LEFT",
        summary: "one nonzero left symmetric adjoint image on dual extremes implies left symmetry",
        default_trials: 300,
    },
    SuiteInfo {
        id: "PROP-RANK-FACE",
        summary: "rank-one operators attain their norm on one face pair; attainment decides orthogonality",
        default_trials: 500,
    },
    SuiteInfo {
        id: "THM-LEFT-RANK-NEC",
        summary: "left symmetric f(.)w needs w and f left symmetric: violations give explicit S",
        default_trials: 300,
    },
    SuiteInfo {
        id: "HILBERT-NO-LEFT",
        summary: "random rank-one operators on l_2^n (n = 2, 3) are refuted as left symmetric",
        default_trials: 100,
    },
];

pub fn suite_info(id: &str) -> Option<&'static SuiteInfo> {
    SUITES.iter().find(|s| s.id == id)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    /// `None` uses the suite default.
    pub trials: Option<usize>,
    pub seed: u64,
    /// Rounds per counterexample search.
    pub budget: usize,
    pub tol: Tolerances<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            trials: None,
            seed: DEFAULT_SEED,
            budget: 2000,
            tol: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub reason: String,
    pub instance: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem_id: String,
    pub seed: u64,
    pub budget: usize,
    pub trials: usize,
    pub passes: usize,
    pub failures: Vec<TrialFailure>,
    /// Suite-specific counters and extrema.
    pub details: Details,
    /// Seconds; left empty when timestamps are disabled.
    pub wall_time: Option<f64>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.passes == self.trials
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Details {
    pub counts: BTreeMap<String, u64>,
    pub max: BTreeMap<String, f64>,
    pub min: BTreeMap<String, f64>,
}

impl Details {
    fn count(&mut self, key: &str) {
        *self.counts.entry(key.into()).or_default() += 1;
    }

    fn max(&mut self, key: &str, v: f64) {
        let e = self.max.entry(key.into()).or_insert(v);
        *e = e.max(v);
    }

    fn min(&mut self, key: &str, v: f64) {
        let e = self.min.entry(key.into()).or_insert(v);
        *e = e.min(v);
    }
}

enum Outcome {
    Pass,
    Fail(String, Value),
}

fn fail(reason: impl Into<String>, instance: Value) -> Result<Outcome> {
    Ok(Outcome::Fail(reason.into(), instance))
}

struct Ctx<'a> {
    cfg: &'a SuiteConfig,
    details: Details,
}

impl Ctx<'_> {
    fn tol(&self) -> &Tolerances<f64> {
        &self.cfg.tol
    }

    fn search(&self, rng: &mut ChaCha8Rng) -> SearchConfig {
        SearchConfig::default()
            .with_budget(self.cfg.budget)
            .with_seed(rng.next_u64())
    }
}

type Trial = fn(&mut ChaCha8Rng, &mut Ctx) -> Result<Outcome>;

fn trial_fn(id: &str) -> Option<Trial> {
    Some(match id {
        "THM-LEFT-SUPSUM" => left_supsum,
        "THM-RIGHT-NEC" => right_necessity,
        "THM-RIGHT-SUFF-FINITE" => right_sufficiency,
        "COR-DIRECTSUM" => directsum,
        "THM-ORTH-GENERAL-FINITE" => orth_general,
        "PROP-ISOMETRIC" => isometric,
        "THM-LEFT-INFTY" => left_infty,
        "COR-LEFT-LP" => cor_left_lp,
        "COR-RIGHT-LP" => cor_right_lp,
        "THM-NICE-LEFT" => nice_left,
        "PROP-RANK-FACE" => rank_face,
        "THM-LEFT-RANK-NEC" => left_rank_necessity,
        "HILBERT-NO-LEFT" => hilbert,
        _ => return None,
    })
}

/// Runs suite `id`. `wall_time` is left empty; callers that want it time
/// the call themselves.
pub fn run_suite(id: &str, cfg: &SuiteConfig) -> Result<TheoremReport> {
    let info = suite_info(id).ok_or_else(|| Error::UnknownSuite(id.into()))?;
    let f = trial_fn(id).expect("catalogue and dispatch agree");
    let trials = cfg.trials.unwrap_or(info.default_trials);
    let mut ctx = Ctx {
        cfg,
        details: Details::default(),
    };
    let mut passes = 0;
    let mut failures = Vec::new();
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(trial as u64);
        match f(&mut rng, &mut ctx) {
            Ok(Outcome::Pass) => passes += 1,
            Ok(Outcome::Fail(reason, instance)) => failures.push(TrialFailure {
                trial,
                reason,
                instance,
            }),
            Err(e) => failures.push(TrialFailure {
                trial,
                reason: format!("error: {e}"),
                instance: Value::Null,
            }),
        }
    }
    Ok(TheoremReport {
        theorem_id: id.into(),
        seed: cfg.seed,
        budget: cfg.budget,
        trials,
        passes,
        failures,
        details: ctx.details,
        wall_time: None,
    })
}

// ---------------------------------------------------------------------------
// Helpers

fn inst(space: &Space<f64>, f: &[f64]) -> Value {
    json!({ "space": space.to_string(), "f": f })
}

fn op_inst(t: &OperatorMatrix<f64>) -> Value {
    json!({
        "domain": t.domain().to_string(),
        "codomain": t.codomain().to_string(),
        "entries": t.to_rows(),
    })
}

/// Sup-sum of `ℓ_p` leaves.
fn lp_supsum(rng: &mut ChaCha8Rng) -> Result<Space<f64>> {
    sample::supsum(rng, 2..=4, 3, 0.0)
}

/// Unit `f` in a sup-sum, biased toward structured points: a left
/// symmetric point, a right symmetric point, a single-block point, or a
/// generic one.
fn structured_unit(rng: &mut ChaCha8Rng, space: &Space<f64>) -> Result<Vec<f64>> {
    let s = space.as_supsum()?;
    let pick = rng.random_range(0..4);
    let v = match pick {
        0 => sample::left_symmetric(rng, space),
        1 => sample::right_symmetric(rng, space),
        2 => {
            let k = rng.random_range(0..s.len());
            let b = sample::unit_vector(rng, &s.components()[k])?;
            Some(s.embed(k, &b))
        }
        _ => None,
    };
    match v {
        Some(v) => space.normalize(&v),
        None => sample::unit_vector(rng, space),
    }
}

/// Scales top-level blocks so that a random subset shares the maximal norm.
fn tie_blocks(rng: &mut ChaCha8Rng, space: &Space<f64>, f: &mut [f64]) {
    let Ok(s) = space.as_supsum() else { return };
    let norms: Vec<f64> = s.blocks(f).map(|(_, c, b)| c.norm_unchecked(b)).collect();
    let top = norms.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return;
    }
    for (k, &n) in norms.iter().enumerate() {
        if n > 0.0 && rng.random_bool(0.5) {
            for v in &mut f[s.range(k)] {
                *v *= top / n;
            }
        }
    }
}

/// `(one ±e_k, two equal moduli 2^{-1/q})` pattern of a unit `ℓ_q` vector,
/// checked coordinatewise.
fn lq_pattern(row: &[f64], q: f64) -> (bool, bool) {
    let n: f64 = row.iter().map(|v| v.abs().powf(q)).sum::<f64>().powf(1.0 / q);
    let big: Vec<f64> = row.iter().map(|v| v.abs() / n).filter(|&v| v > 1e-8).collect();
    let spike = 2f64.powf(-1.0 / q);
    (
        big.len() == 1 && (big[0] - 1.0).abs() <= 1e-8,
        big.len() == 2 && big.iter().all(|&v| (v - spike).abs() <= 1e-8),
    )
}

fn lq_norm(row: &[f64], q: f64) -> f64 {
    row.iter().map(|v| v.abs().powf(q)).sum::<f64>().powf(1.0 / q)
}

fn normalized(t: OperatorMatrix<f64>) -> Result<OperatorMatrix<f64>> {
    let n = operator_norm(&t)?;
    if n == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(t.scaled(1.0 / n))
}

// ---------------------------------------------------------------------------
// Sup-sum suites

fn left_supsum(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Result<Outcome> {
    let space = lp_supsum(rng)?;
    let f = structured_unit(rng, &space)?;
    let tol = *ctx.tol();
    if classify_left_supsum(&space, &f, &tol)? {
        ctx.details.count("accepted");
        if let Some(w) = search_left_counterexample(&space, &f, &ctx.search(rng), &tol)? {
            return fail(
                "accepted point refuted by search",
                json!({ "space": space.to_string(), "f": f, "y": w.y }),
            );
        }
    } else {
        ctx.details.count("rejected");
        match witness_left_supsum(&space, &f, &ctx.search(rng), &tol) {
            Ok(w) if w.margin >= 1e-8 => ctx.details.min("witness_margin", w.margin),
            Ok(w) => return fail(format!("witness margin {} below 1e-8", w.margin), inst(&space, &f)),
            Err(e) => return fail(format!("no witness: {e}"), inst(&space, &f)),
        }
    }
    Ok(Outcome::Pass)
}

fn right_necessity(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Result<Outcome> {
    let space = lp_supsum(rng)?;
    let s = space.as_supsum()?.clone();
    let mut f = sample::right_symmetric(rng, &space).expect("lp leaves");
    let k = rng.random_range(0..s.len());
    let comp = &s.components()[k];
    let asym = (0..8).find_map(|_| {
        let b = sample::unit_vector(rng, comp).ok()?;
        (!crate::symmetry::classify_right(comp, &b, &ctx.cfg.tol).ok()?).then_some(b)
    });
    let r = s.range(k);
    match asym {
        Some(b) if rng.random_bool(0.5) => {
            ctx.details.count("asymmetric_block");
            f[r].copy_from_slice(&b);
        }
        _ => {
            ctx.details.count("short_block");
            let c = rng.random_range(0.0..=0.9);
            for v in &mut f[r] {
                *v *= c;
            }
        }
    }
    let tol = *ctx.tol();
    if classify_right_supsum(&space, &f, &tol)? {
        return fail("violating point accepted as right symmetric", inst(&space, &f));
    }
    let w = match witness_right_supsum(&space, &f, &ctx.search(rng), &tol) {
        Ok(w) => w,
        Err(e) => return fail(format!("no witness: {e}"), inst(&space, &f)),
    };
    let holds = is_bj_functional(&space, &w.g, &f, &tol)?.is_orthogonal();
    let moved: Vec<f64> = f.iter().zip(&w.g).map(|(a, b)| a + w.mu * b).collect();
    let value = space.norm(&moved)?;
    let key = match w.case {
        SupSumCase::ShortBlock => "value_at_mu_short_block",
        _ => "value_at_mu_asymmetric_block",
    };
    ctx.details.max(key, value);
    if !holds || value > 1.0 - 1e-6 {
        return fail(
            format!("witness does not verify: g orthogonal to f {holds}, value {value}"),
            json!({ "space": space.to_string(), "f": f, "g": w.g, "mu": w.mu }),
        );
    }
    Ok(Outcome::Pass)
}

fn right_sufficiency(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Result<Outcome> {
    let space = lp_supsum(rng)?;
    let f = sample::right_symmetric(rng, &space).expect("lp leaves");
    let tol = *ctx.tol();
    if !classify_right_supsum(&space, &f, &tol)? {
        return fail("point with unit right symmetric blocks rejected", inst(&space, &f));
    }
    if let Some(w) = search_right_counterexample(&space, &f, &ctx.search(rng), &tol)? {
        return fail(
            "accepted point refuted by search",
            json!({ "space": space.to_string(), "f": f, "y": w.y }),
        );
    }
    Ok(Outcome::Pass)
}

fn directsum(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Result<Outcome> {
    let space = sample::supsum(rng, 2..=4, 3, 0.2)?;
    let f = structured_unit(rng, &space)?;
    let tol = *ctx.tol();
    if is_symmetric_supsum(&space, &f, &tol)? {
        return fail("nonzero point reported symmetric", inst(&space, &f));
    }
    let cfg = ctx.search(rng);
    if witness_left_supsum(&space, &f, &cfg, &tol).is_ok() {
        ctx.details.count("left_refuted");
    } else if witness_right_supsum(&space, &f, &cfg, &tol).is_ok() {
        ctx.details.count("right_refuted");
    } else {
        return fail("no violating direction found", inst(&space, &f));
    }
    Ok(Outcome::Pass)
}

fn orth_general(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Result<Outcome> {
    let space = sample::nested_supsum(rng, 8, 0.3)?;
    let n = space.dim();
    let mut f = sample::nonzero_vector(rng, n);
    let mut g = sample::nonzero_vector(rng, n);
    tie_blocks(rng, &space, &mut f);
    tie_blocks(rng, &space, &mut g);
    if space.norm(&f)? == 0.0 || space.norm(&g)? == 0.0 {
        ctx.details.count("degenerate");
        return Ok(Outcome::Pass);
    }
    let tol = *ctx.tol();
    let mut check = |crit: Decision, a: &[f64], b: &[f64], what: &str| -> Result<Option<String>> {
        let m = is_bj_min(&space, a, b, &tol)?.decision;
        if m == Decision::Inconclusive {
            ctx.details.count("inconclusive");
            return Ok(None);
        }
        ctx.details.count(if m == Decision::Orthogonal {
            "orthogonal"
        } else {
            "not_orthogonal"
        });
        Ok((m != crit).then(|| format!("{what}: criterion {crit:?}, minimization {m:?}")))
    };
    let hull = supsum_orthogonal(&space, &f, &g, &tol)?.decision;
    let general = supsum_orthogonal_general(&space, &g, &f, &tol)?.decision;
    if let Some(msg) = [check(hull, &f, &g, "f ⊥ g")?, check(general, &g, &f, "g ⊥ f")?]
        .into_iter()
        .flatten()
        .next()
    {
        return fail(msg, json!({ "space": space.to_string(), "f": f, "g": g }));
    }
    Ok(Outcome::Pass)
}

// ---------------------------------------------------------------------------
// Operator suites

fn random_matrix(rng: &mut ChaCha8Rng, domain: Space<f64>, codomain: Space<f64>) -> Result<OperatorMatrix<f64>> {
    loop {
        let e = sample::vector(rng, domain.dim() * codomain.dim());
        let t = OperatorMatrix::new(e, domain.clone(), codomain.clone())?;
        if !t.is_zero() {
            return Ok(t);
        }
    }
}

/// Norm of `T: X → ℓ_∞^n` from primal points only: a vertex scan when the
/// ball of `X` is a polytope, otherwise the rows' norming points.
fn linf_norm_by_points(t: &OperatorMatrix<f64>) -> Result<f64> {
    let d = t.domain();
    let points: Vec<Vec<f64>> = if d.has_finite_extremes() {
        d.primal_vertices()?
    } else {
        let Space::Lp(l) = d else {
            return Err(Error::Unsupported("domain without norming points".into()));
        };
        let q = l.dual_exponent();
        (0..t.rows())
            .filter(|&i| t.row(i).iter().any(|&v| v != 0.0))
            .map(|i| {
                let x: Vec<f64> = t.row(i).iter().map(|&v| v.signum() * v.abs().powf(q - 1.0)).collect();
                d.normalize(&x)
            })
            .collect::<Result<_>>()?
    };
    Ok(points
        .iter()
        .map(|x| t.apply(x).map(|y| y.iter().fold(0.0, |m: f64, v| m.max(v.abs()))))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max))
}

fn isometric(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Result<Outcome> {
    // l_1^m domain: brute force over the vertices ±e_j.
    let m = rng.random_range(1..=4);
    let y = sample::leaf(rng, 4, 0.3)?;
    let t = random_matrix(rng, Space::l1(m)?, y.clone())?;
    let e = embed_l1_domain(&t)?;
    let brute = Space::<f64>::l1(m)?
        .primal_vertices()?
        .iter()
        .map(|v| t.apply(v).and_then(|tv| y.norm(&tv)))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let dev1 = (e.space.norm(&e.vector)? - brute).abs();
    ctx.details.max("l1_domain_deviation", dev1);
    let back1 = unembed_l1_domain(&y, m, &e.vector)?;

    // l_inf^n codomain.
    let n = rng.random_range(1..=4);
    let x = sample::leaf(rng, 4, 0.3)?;
    let u = random_matrix(rng, x.clone(), Space::linf(n)?)?;
    let e2 = embed_linf_codomain(&u)?;
    let dev2 = (e2.space.norm(&e2.vector)? - linf_norm_by_points(&u)?).abs();
    ctx.details.max("linf_codomain_deviation", dev2);
    let back2 = unembed_linf_codomain(&x, n, &e2.vector)?;

    if dev1 > 1e-12 || dev2 > 1e-12 || back1.entries() != t.entries() || back2.entries() != u.entries() {
        return fail(
            format!("deviations {dev1:e}, {dev2:e} or round trip failed"),
            json!({ "l1_domain": op_inst(&t), "linf_codomain": op_inst(&u) }),
        );
    }
    Ok(Outcome::Pass)
}

fn linf_operator(
    rng: &mut ChaCha8Rng,
    x: &Space<f64>,
    n: usize,
    single: Option<Vec<f64>>,
) -> Result<OperatorMatrix<f64>> {
    let m = x.dim();
    let t = match single {
        Some(row) => {
            let i = rng.random_range(0..n);
            let mut e = vec![0.0; n * m];
            e[i * m..(i + 1) * m].copy_from_slice(&row);
            OperatorMatrix::new(e, x.clone(), Space::linf(n)?)?
        }
        None => random_matrix(rng, x.clone(), Space::linf(n)?)?,
    };
    normalized(t)
}

fn nonzero_rows(t: &OperatorMatrix<f64>) -> Vec<usize> {
    (0..t.rows())
        .filter(|&i| t.row(i).iter().any(|v| v.abs() > 1e-12))
        .collect()
}

fn left_infty(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Result<Outcome> {
    let x = sample::any_lp(rng, 4)?;
    let xd = x.dual()?;
    let n = rng.random_range(1..=3);
    let single = if rng.random_bool(0.5) {
        Some(sample::left_symmetric(rng, &xd).map_or_else(|| sample::unit_vector(rng, &xd), Ok)?)
    } else {
        None
    };
    let t = linf_operator(rng, &x, n, single)?;
    let tol = *ctx.tol();
    let rows = nonzero_rows(&t);
    let expected = match rows[..] {
        [i] => classify_left(&xd, &xd.normalize(t.row(i))?, &tol)?,
        _ => false,
    };
    let got = classify_left_operator(&t, &tol)?;
    if got != expected {
        return fail(format!("classifier {got}, row criterion {expected}"), op_inst(&t));
    }
    if got {
        ctx.details.count("accepted");
        let e = embed_linf_codomain(&t)?;
        if search_left_counterexample(&e.space, &e.vector, &ctx.search(rng), &tol)?.is_some() {
            return fail("accepted operator refuted by search", op_inst(&t));
        }
    } else {
        ctx.details.count("rejected");
        if let Err(e) = witness_left_operator(&t, &ctx.search(rng), &tol) {
            return fail(format!("no witness: {e}"), op_inst(&t));
        }
    }
    Ok(Outcome::Pass)
}

fn lp_domain(rng: &mut ChaCha8Rng) -> Result<(Space<f64>, f64)> {
    let p = if rng.random_bool(0.5) { 1.5 } else { 3.0 };
    let m = rng.random_range(1..=4);
    Ok((Space::lp(p, m)?, p / (p - 1.0)))
}

fn perturb(rng: &mut ChaCha8Rng, t: &OperatorMatrix<f64>, rows: &[usize]) -> Result<OperatorMatrix<f64>> {
    let scale = rng.random_range(1e-3..0.3);
    let mut e = t.entries().to_vec();
    let m = t.cols();
    for &i in rows {
        for v in &mut e[i * m..(i + 1) * m] {
            *v += scale * sample::gaussian::<f64, _>(rng, 1)[0];
        }
    }
    normalized(OperatorMatrix::new(e, t.domain().clone(), t.codomain().clone())?)
}

fn cor_left_lp(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Result<Outcome> {
    let (x, q) = lp_domain(rng)?;
    let n = rng.random_range(1..=3);
    let canonical = sample::lp_canonical(rng, q, x.dim());
    let mut t = linf_operator(rng, &x, n, Some(canonical))?;
    if rng.random_bool(0.5) {
        let rows: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.6)).collect();
        t = perturb(rng, &t, &rows)?;
    }
    let rows = nonzero_rows(&t);
    let expected = match rows[..] {
        [i] => {
            let (a, b) = lq_pattern(t.row(i), q);
            a || b
        }
        _ => false,
    };
    classify_operator_case(rng, ctx, &t, expected, true)
}

fn cor_right_lp(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Result<Outcome> {
    let (x, q) = lp_domain(rng)?;
    let n = rng.random_range(1..=3);
    let m = x.dim();
    let e: Vec<f64> = (0..n).flat_map(|_| sample::lp_canonical(rng, q, m)).collect();
    let mut t = normalized(OperatorMatrix::new(e, x, Space::linf(n)?)?)?;
    match rng.random_range(0..3) {
        0 => {}
        1 => {
            let i = rng.random_range(0..n);
            t = perturb(rng, &t, &[i])?;
        }
        _ => {
            let i = rng.random_range(0..n);
            let c = rng.random_range(0.0..0.99);
            let mut e = t.entries().to_vec();
            for v in &mut e[i * m..(i + 1) * m] {
                *v *= c;
            }
            t = normalized(OperatorMatrix::new(e, t.domain().clone(), t.codomain().clone())?)?;
        }
    }
    let norms: Vec<f64> = (0..n).map(|i| lq_norm(t.row(i), q)).collect();
    let expected = (0..n).all(|i| {
        let (a, b) = lq_pattern(t.row(i), q);
        (norms[i] - 1.0).abs() <= 1e-8 && (a || b)
    });
    classify_operator_case(rng, ctx, &t, expected, false)
}

fn classify_operator_case(
    rng: &mut ChaCha8Rng,
    ctx: &mut Ctx,
    t: &OperatorMatrix<f64>,
    expected: bool,
    left: bool,
) -> Result<Outcome> {
    let tol = *ctx.tol();
    let got = if left {
        classify_left_operator(t, &tol)?
    } else {
        classify_right_operator(t, &tol)?
    };
    if got != expected {
        return fail(format!("classifier {got}, canonical-form check {expected}"), op_inst(t));
    }
    if got {
        ctx.details.count("accepted");
        return Ok(Outcome::Pass);
    }
    ctx.details.count("rejected");
    let cfg = ctx.search(rng);
    let w = if left {
        witness_left_operator(t, &cfg, &tol)
    } else {
        witness_right_operator(t, &cfg, &tol)
    };
    match w {
        Ok(_) => Ok(Outcome::Pass),
        Err(e) => fail(format!("rejection without witness: {e}"), op_inst(t)),
    }
}

/// Polyhedral `Y` and `w ∈ Y` such that exactly one generator pair is
/// nonzero on `w`.
fn poly_with_lonely_vector(rng: &mut ChaCha8Rng) -> Result<(Space<f64>, Vec<f64>)> {
    loop {
        let d = rng.random_range(2..=3);
        let w = sample::nonzero_vector::<f64, _>(rng, d);
        let ww: f64 = w.iter().map(|v| v * v).sum();
        let k = rng.random_range(d..=2 * d + 1);
        let mut gens = Vec::with_capacity(k);
        gens.push(sample::grid::<f64, _>(rng, d));
        for _ in 1..k {
            let g: Vec<f64> = sample::grid(rng, d);
            let c = g.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / ww;
            gens.push(g.iter().zip(&w).map(|(a, b)| a - c * b).collect());
        }
        let first = gens[0].iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
        if first.abs() < 0.1 {
            continue;
        }
        let Ok(y) = Space::polyhedral(gens) else { continue };
        let ext = y.ext_dual()?;
        let live = ext.iter().filter(|g| g.apply(&w).abs() > 1e-9).count();
        if live == 2 {
            return Ok((y, w));
        }
    }
}

fn nice_left(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Result<Outcome> {
    let tol = *ctx.tol();
    if rng.random_bool(0.5) {
        // X = ℓ_p^m, Y = ℓ_∞^n: the sufficient condition is also necessary.
        let x = sample::any_lp(rng, 4)?;
        let xd = x.dual()?;
        let n = rng.random_range(1..=3);
        let single = if rng.random_bool(0.7) {
            Some(sample::left_symmetric(rng, &xd).map_or_else(|| sample::unit_vector(rng, &xd), Ok)?)
        } else {
            None
        };
        let t = linf_operator(rng, &x, n, single)?;
        let nice = check_nice_left_sufficient(&t, &tol)?;
        let left = classify_left_operator(&t, &tol)?;
        ctx.details.count(if nice { "linf_nice" } else { "linf_not_nice" });
        if nice != left {
            return fail(format!("sufficient condition {nice}, classifier {left}"), op_inst(&t));
        }
    } else {
        // X = ℓ_1^m, polyhedral Y, T = f ⊗ w with w seen by one generator pair.
        let m = rng.random_range(1..=3);
        let (y, w) = poly_with_lonely_vector(rng)?;
        let f: Vec<f64> = if rng.random_bool(0.6) {
            let mut f = vec![0.0; m];
            f[rng.random_range(0..m)] = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            f
        } else {
            sample::nonzero_vector(rng, m)
        };
        let t = normalized(rank1(&f, &w, &Space::l1(m)?, &y)?)?;
        let nice = check_nice_left_sufficient(&t, &tol)?;
        ctx.details.count(if nice { "poly_nice" } else { "poly_not_nice" });
        if nice {
            let e = embed_l1_domain(&t)?;
            if let Some(wt) = search_left_counterexample(&e.space, &e.vector, &ctx.search(rng), &tol)? {
                return fail(
                    "operator meeting the sufficient condition refuted by search",
                    json!({ "operator": op_inst(&t), "s": wt.y }),
                );
            }
        }
    }
    Ok(Outcome::Pass)
}

fn rank_face(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Result<Outcome> {
    let x = match rng.random_range(0..3) {
        0 => Space::l1(rng.random_range(1..=4))?,
        1 => Space::linf(rng.random_range(1..=4))?,
        _ => {
            let d = rng.random_range(2..=3);
            sample::polyhedral(rng, d, 7)?
        }
    };
    let y = sample::leaf(rng, 3, 0.3)?;
    let f = sample::nonzero_vector::<f64, _>(rng, x.dim());
    let w = sample::nonzero_vector::<f64, _>(rng, y.dim());
    let t = rank1(&f, &w, &x, &y)?;
    let tol = *ctx.tol();
    let faces = attainment_faces(&t, &tol)?;

    // Brute force over the vertices of B_X, one per sign pair.
    let values: Vec<f64> = x
        .primal_vertices()?
        .iter()
        .map(|v| f.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect();
    let top = values.iter().copied().fold(0.0, |m: f64, v| m.max(v.abs()));
    let attaining = values.iter().filter(|&&v| v >= top * (1.0 - tol.tie)).count();
    let signs: Vec<f64> = faces
        .vertices
        .iter()
        .map(|v| f.iter().zip(v).map(|(a, b)| a * b).sum::<f64>().signum())
        .collect();
    let one_face = signs.iter().all(|&s| s == signs[0]);
    if faces.vertices.len() != attaining || !faces.sign_paired || !one_face {
        return fail(
            format!(
                "{} vertices, expected {attaining}; single face pair {}",
                faces.vertices.len(),
                faces.sign_paired && one_face
            ),
            op_inst(&t),
        );
    }
    ctx.details.max("face_vertices", attaining as f64);

    let s = if rng.random_bool(0.5) {
        random_matrix(rng, x.clone(), y.clone())?
    } else {
        let g = sample::vector::<f64, _>(rng, x.dim());
        let v = sample::vector::<f64, _>(rng, y.dim());
        let e = v.iter().flat_map(|&a| g.iter().map(move |&b| a * b)).collect();
        OperatorMatrix::new(e, x.clone(), y.clone())?
    };
    if s.is_zero() {
        return Ok(Outcome::Pass);
    }
    let by_faces = ortho_operators_rank1(&t, &s, &tol)?.decision;
    let by_min = is_bj_operator_min(&t, &s, &tol)?.decision;
    if by_min == Decision::Inconclusive {
        ctx.details.count("inconclusive");
    } else if by_min != by_faces {
        return fail(
            format!("attainment criterion {by_faces:?}, minimization {by_min:?}"),
            json!({ "t": op_inst(&t), "s": op_inst(&s) }),
        );
    } else {
        ctx.details.count(if by_min == Decision::Orthogonal {
            "orthogonal"
        } else {
            "not_orthogonal"
        });
    }
    Ok(Outcome::Pass)
}

fn left_rank_necessity(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Result<Outcome> {
    let tol = *ctx.tol();
    let m = rng.random_range(1..=3);
    let x = Space::l1(m)?;
    let xd = x.dual()?;
    let y = if rng.random_bool(0.25) {
        let d = rng.random_range(2..=3);
        sample::polyhedral(rng, d, 6)?
    } else {
        sample::any_lp(rng, 3)?
    };
    let f = match rng.random_bool(0.4).then(|| sample::left_symmetric(rng, &xd)).flatten() {
        Some(f) => f,
        None => sample::unit_vector(rng, &xd)?,
    };
    let w = match rng.random_bool(0.4).then(|| sample::left_symmetric(rng, &y)).flatten() {
        Some(w) => w,
        None => sample::unit_vector(rng, &y)?,
    };
    let t = rank1(&f, &w, &x, &y)?;

    // Left symmetry of w and f: closed form when available, else search.
    let w_cex = search_left_counterexample(&y, &w, &ctx.search(rng), &tol)?;
    let f_cex = search_left_counterexample(&xd, &f, &ctx.search(rng), &tol)?;
    let f_left = classify_left(&xd, &f, &tol)?;
    if f_left != f_cex.is_none() {
        return fail(format!("closed form {f_left} for f disagrees with search"), op_inst(&t));
    }
    if let Ok(w_left) = classify_left(&y, &w, &tol) {
        if w_left != w_cex.is_none() {
            return fail(format!("closed form {w_left} for w disagrees with search"), op_inst(&t));
        }
    }

    let mut constructed = Vec::new();
    if let Some(c) = &w_cex {
        // S x = f(x) v with w ⊥ v and v ̸⊥ w.
        constructed.push(("range", rank1(&f, &c.y, &x, &y)?));
    }
    if let Some(c) = &f_cex {
        // S x = g(x) w, the transpose of y* ↦ y*(w) g with f ⊥ g and g ̸⊥ f.
        constructed.push(("adjoint", rank1(&c.y, &w, &x, &y)?));
    }
    for (kind, s) in &constructed {
        let holds = is_bj_operator_min(&t, s, &tol)?.is_orthogonal();
        let fails = is_bj_operator_min(s, &t, &tol)?.is_not_orthogonal();
        if !(holds && fails) {
            return fail(
                format!("{kind} construction does not refute: T ⊥ S {holds}, S ̸⊥ T {fails}"),
                json!({ "t": op_inst(&t), "s": op_inst(s) }),
            );
        }
        ctx.details.count(kind);
    }
    if constructed.is_empty() {
        ctx.details.count("both_left_symmetric");
    } else if !matches!(y, Space::Polyhedral(_)) && classify_left_operator(&t, &tol)? {
        return fail("refuted operator accepted by the classifier", op_inst(&t));
    }
    Ok(Outcome::Pass)
}

fn hilbert(rng: &mut ChaCha8Rng, ctx: &mut Ctx) -> Result<Outcome> {
    let n = if rng.random_bool(0.5) { 2 } else { 3 };
    ctx.details.count(if n == 2 { "n2" } else { "n3" });
    match refute_rank1_hilbert::<f64, _>(n, rng, ctx.tol())? {
        Some(_) => Ok(Outcome::Pass),
        None => fail("no refuting S found", json!({ "n": n })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(id: &str, trials: usize) -> TheoremReport {
        let cfg = SuiteConfig {
            trials: Some(trials),
            budget: 300,
            ..SuiteConfig::default()
        };
        run_suite(id, &cfg).unwrap()
    }

    #[test]
    fn every_suite_passes_a_short_run() {
        for s in SUITES {
            let r = quick(s.id, 20);
            assert!(r.passed(), "{}: {:#?}", s.id, r.failures);
            assert_eq!(r.passes + r.failures.len(), r.trials);
        }
    }

    #[test]
    fn unknown_suite() {
        assert_eq!(
            run_suite("NO-SUCH", &SuiteConfig::default()),
            Err(Error::UnknownSuite("NO-SUCH".into()))
        );
    }

    #[test]
    fn reports_are_deterministic() {
        let a = serde_json::to_string(&quick("COR-DIRECTSUM", 30)).unwrap();
        let b = serde_json::to_string(&quick("COR-DIRECTSUM", 30)).unwrap();
        assert_eq!(a, b);
    }
}
