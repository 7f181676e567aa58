//! Numerics on the finite polytorus: exact and Monte-Carlo norms, sup-norm
//! ascent with certified witnesses, randomized sign searches, and desk-scale
//! checks of the coefficient inequalities.
//!
//! Conventions used throughout:
//!
//! * Haar sampling is exact: independent uniform angles per coordinate.
//! * Every randomized operation takes an explicit seed and is pure given the
//!   seed; restarts and Monte-Carlo blocks draw from per-task streams so a
//!   parallel reduction would reproduce the sequential result.
//! * `sup_norm` returns a certified lower bound (the witness point is
//!   attained) which is treated as the estimate. Constant-free inequalities
//!   are checked as hard assertions elsewhere; inequalities with unknown
//!   constants are reported as ratio logs only.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_traits::Float;
use rand_chacha::rand_core::RngCore;

use crate::kernel::{enumerate_lambda, lambda_count, IndexTuple, MultiIndex, PrimeTable};
use crate::numeric::{pairwise_sum, task_rng, uniform_f64};
use crate::series::{bohr_lift, CoeffSeries, SeriesError, TrigPolynomial};

#[derive(Debug, Clone, PartialEq)]
pub enum TorusError {
    DimensionMismatch { expected: u32, got: u32 },
    /// The sign-search bound carries `log m`, which vanishes at `m = 1`; the
    /// operation refuses rather than patching the formula.
    DegenerateDegree { m: u32 },
    PreconditionViolation(&'static str),
    NotHomogeneous,
    Series(SeriesError),
}

impl From<SeriesError> for TorusError {
    fn from(e: SeriesError) -> Self {
        TorusError::Series(e)
    }
}

impl fmt::Display for TorusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusError::DimensionMismatch { expected, got } => {
                write!(f, "point dimension {got} does not match {expected} variables")
            }
            TorusError::DegenerateDegree { m } => {
                write!(f, "degree m = {m} degenerates the sign-search bound")
            }
            TorusError::PreconditionViolation(m) => write!(f, "precondition violated: {m}"),
            TorusError::NotHomogeneous => write!(f, "operation requires a homogeneous polynomial"),
            TorusError::Series(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for TorusError {}

/// Point of the `k`-torus stored as angles in `[0, 2pi)`; the coordinates
/// `w_j = exp(i angle_j)` have unit modulus by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    angles: Vec<f64>,
}

impl TorusPoint {
    pub fn new(angles: Vec<f64>) -> Self {
        TorusPoint { angles }
    }

    pub fn zero(k: u32) -> Self {
        TorusPoint { angles: vec![0.0; k as usize] }
    }

    pub fn dim(&self) -> u32 {
        self.angles.len() as u32
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn coordinate(&self, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.angles[j])
    }
}

/// Norm value together with how it was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub value: f64,
    pub kind: NormKind,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormKind {
    /// Parseval: square root of the coefficient square sum.
    L2Exact,
    LpMonteCarlo { p: f64, samples: u32, stderr: f64 },
    /// Certified lower bound: the value is attained at `best_point`.
    SupEstimate { restarts: u32, best_point: TorusPoint },
}

const TAU: f64 = core::f64::consts::TAU;

/// Reusable evaluator with a per-point monomial power cache.
struct Evaluator<'a> {
    poly: &'a TrigPolynomial,
    stride: usize,
    powers: Vec<Complex64>,
}

impl<'a> Evaluator<'a> {
    fn new(poly: &'a TrigPolynomial) -> Self {
        let stride = poly.max_var_degree() as usize + 1;
        Evaluator { poly, stride, powers: vec![Complex64::new(1.0, 0.0); poly.nvars() as usize * stride] }
    }

    fn load(&mut self, angles: &[f64]) {
        for (j, &theta) in angles.iter().enumerate() {
            let w = Complex64::from_polar(1.0, theta);
            let base = j * self.stride;
            self.powers[base] = Complex64::new(1.0, 0.0);
            for t in 1..self.stride {
                self.powers[base + t] = self.powers[base + t - 1] * w;
            }
        }
    }

    fn eval_loaded(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (alpha, &c) in self.poly.coeffs() {
            let mut term = c;
            for &(pos, exp) in alpha.entries() {
                term *= self.powers[(pos as usize - 1) * self.stride + exp as usize];
            }
            acc += term;
        }
        acc
    }

    fn eval(&mut self, angles: &[f64]) -> Complex64 {
        self.load(angles);
        self.eval_loaded()
    }

    /// Coefficients of the univariate profile in variable `j` with the other
    /// coordinates fixed at the loaded powers.
    fn profile(&self, j: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.stride];
        for (alpha, &c) in self.poly.coeffs() {
            let mut term = c;
            let mut deg_j = 0usize;
            for &(pos, exp) in alpha.entries() {
                if pos as usize - 1 == j {
                    deg_j = exp as usize;
                } else {
                    term *= self.powers[(pos as usize - 1) * self.stride + exp as usize];
                }
            }
            out[deg_j] += term;
        }
        out
    }
}

fn profile_modulus(profile: &[Complex64], theta: f64) -> f64 {
    let w = Complex64::from_polar(1.0, theta);
    let mut acc = Complex64::new(0.0, 0.0);
    for &a in profile.iter().rev() {
        acc = acc * w + a;
    }
    acc.norm()
}

/// `P(w)` via cached monomial powers; deterministic.
pub fn eval_poly(p: &TrigPolynomial, w: &TorusPoint) -> Result<Complex64, TorusError> {
    if w.dim() != p.nvars() {
        return Err(TorusError::DimensionMismatch { expected: p.nvars(), got: w.dim() });
    }
    Ok(Evaluator::new(p).eval(w.angles()))
}

/// Exact `L_2` norm by Parseval.
pub fn l2_norm(p: &TrigPolynomial) -> NormReport {
    let sq: Vec<f64> = p.coeffs().values().map(|c| c.norm_sqr()).collect();
    NormReport { value: pairwise_sum(&sq).sqrt(), kind: NormKind::L2Exact, seed: None }
}

/// Monte-Carlo `L_p` norm over Haar-uniform points, with jackknife standard
/// error. Requires `p >= 1` and at least 1000 samples.
pub fn lp_norm_mc(poly: &TrigPolynomial, p: f64, samples: u32, seed: u64) -> NormReport {
    assert!(p >= 1.0, "lp_norm_mc needs p >= 1");
    assert!(samples >= 1000, "lp_norm_mc needs at least 1000 samples");
    let moduli = sample_moduli(poly, samples, seed);
    let (value, stderr) = power_mean_with_jackknife(&moduli, p);
    NormReport { value, kind: NormKind::LpMonteCarlo { p, samples, stderr }, seed: Some(seed) }
}

/// Haar samples of `|P(w)|`, drawn in blocks with per-block derived streams.
fn sample_moduli(poly: &TrigPolynomial, samples: u32, seed: u64) -> Vec<f64> {
    const BLOCK: u32 = 4096;
    let k = poly.nvars() as usize;
    let mut ev = Evaluator::new(poly);
    let mut angles = vec![0.0f64; k];
    let mut out = Vec::with_capacity(samples as usize);
    let mut s = 0u32;
    while s < samples {
        let mut rng = task_rng(seed, (s / BLOCK) as u64);
        let in_block = BLOCK.min(samples - s);
        for _ in 0..in_block {
            for a in angles.iter_mut() {
                *a = TAU * uniform_f64(&mut rng);
            }
            out.push(ev.eval(&angles).norm());
        }
        s += in_block;
    }
    out
}

/// `(mean x^p)^(1/p)` with leave-one-out jackknife stderr of the whole
/// statistic.
fn power_mean_with_jackknife(xs: &[f64], p: f64) -> (f64, f64) {
    let n = xs.len();
    let ys: Vec<f64> = xs.iter().map(|&x| x.powf(p)).collect();
    let total = pairwise_sum(&ys);
    let est = (total / n as f64).powf(1.0 / p);
    if n < 2 {
        return (est, f64::infinity());
    }
    let mut loo = Vec::with_capacity(n);
    let denom = (n - 1) as f64;
    for &y in &ys {
        loo.push((((total - y) / denom).max(0.0)).powf(1.0 / p));
    }
    let mean_loo = pairwise_sum(&loo) / n as f64;
    let dev: Vec<f64> = loo.iter().map(|&t| (t - mean_loo) * (t - mean_loo)).collect();
    let var = pairwise_sum(&dev) * (denom / n as f64);
    (est, var.sqrt())
}

const COARSE_STEPS: usize = 48;
const GOLDEN_ITERS: usize = 48;
const MAX_SWEEPS: usize = 64;

/// Multistart coordinate ascent for the sup-norm: random start, then
/// coordinate-wise golden-section refinement of the best coarse bracket.
/// The reported value is re-evaluated at the witness, so it is a certified
/// lower bound on the true sup.
pub fn sup_norm(p: &TrigPolynomial, restarts: u32, seed: u64) -> NormReport {
    assert!(restarts >= 8, "sup_norm needs at least 8 restarts");
    let k = p.nvars() as usize;
    let mut ev = Evaluator::new(p);
    let mut best_val = f64::neg_infinity();
    let mut best_angles = vec![0.0f64; k];

    for t in 0..restarts {
        let mut rng = task_rng(seed, t as u64);
        let mut angles: Vec<f64> = (0..k).map(|_| TAU * uniform_f64(&mut rng)).collect();
        let mut val = ev.eval(&angles).norm();
        for _ in 0..MAX_SWEEPS {
            let before = val;
            for j in 0..k {
                ev.load(&angles);
                let profile = ev.profile(j);
                let (theta, v) = maximize_profile(&profile);
                if v > val {
                    angles[j] = theta;
                    val = v;
                }
            }
            if val - before <= 1e-13 * (1.0 + val) {
                break;
            }
        }
        if val > best_val {
            best_val = val;
            best_angles = angles;
        }
    }

    let witness = TorusPoint::new(best_angles);
    let value = ev.eval(witness.angles()).norm();
    NormReport {
        value,
        kind: NormKind::SupEstimate { restarts, best_point: witness },
        seed: Some(seed),
    }
}

/// Coarse scan plus golden-section refinement of `|profile(theta)|` over one
/// period.
fn maximize_profile(profile: &[Complex64]) -> (f64, f64) {
    let mut best_i = 0usize;
    let mut best = f64::neg_infinity();
    for i in 0..COARSE_STEPS {
        let theta = TAU * i as f64 / COARSE_STEPS as f64;
        let v = profile_modulus(profile, theta);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let center = TAU * best_i as f64 / COARSE_STEPS as f64;
    let width = TAU / COARSE_STEPS as f64;
    let (mut a, mut b) = (center - width, center + width);
    const GR: f64 = 0.618_033_988_749_894_9;
    let mut c = b - GR * (b - a);
    let mut d = a + GR * (b - a);
    let mut fc = profile_modulus(profile, c);
    let mut fd = profile_modulus(profile, d);
    for _ in 0..GOLDEN_ITERS {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GR * (b - a);
            fc = profile_modulus(profile, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GR * (b - a);
            fd = profile_modulus(profile, d);
        }
    }
    let theta = 0.5 * (a + b);
    let v = profile_modulus(profile, theta);
    let theta = theta - TAU * (theta / TAU).floor();
    if v >= best {
        (theta, v)
    } else {
        (TAU * best_i as f64 / COARSE_STEPS as f64, best)
    }
}

fn subseed(seed: u64, tag: u64) -> u64 {
    seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17)
}

/// Outcome of the randomized sign search: the pattern minimizing the
/// estimated sup of `sum eps_alpha a_alpha z^alpha` and the ratio of that sup
/// to `sqrt(n log m sum a^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KszReport {
    pub m: u32,
    pub nvars: u32,
    pub trials: u32,
    pub seed: u64,
    /// Signs for the coefficients in enumeration order of `Lambda(m,n)`.
    pub best_signs: Vec<i8>,
    pub best_sup: f64,
    /// `best_sup / sqrt(n log m sum a^2)`: an empirical witness for the
    /// sign-choice constant (unknown in general).
    pub best_ratio: f64,
    pub denom: f64,
    /// Running minimum of the ratio after each trial (nonincreasing).
    pub running_min: Vec<f64>,
}

/// Samples uniform sign patterns for a coefficient family over `Lambda(m,n)`
/// and keeps the pattern with the smallest estimated sup-norm. The sup over
/// the closed polydisk equals the sup over the torus by the maximum modulus
/// principle, so the torus ascent applies. Coefficients are listed in the
/// enumeration order of `Lambda(m,n)`. Rejects `m < 2`.
pub fn ksz_search(
    m: u32,
    nvars: u32,
    coeffs: &[f64],
    trials: u32,
    seed: u64,
) -> Result<KszReport, TorusError> {
    if m < 2 {
        return Err(TorusError::DegenerateDegree { m });
    }
    if nvars < 1 {
        return Err(TorusError::PreconditionViolation("ksz_search needs at least one variable"));
    }
    let count = lambda_count(m, nvars).unwrap_or(u128::MAX);
    if coeffs.len() as u128 != count {
        return Err(TorusError::PreconditionViolation(
            "coefficient family must cover Lambda(m,n) in enumeration order",
        ));
    }
    if trials == 0 {
        return Err(TorusError::PreconditionViolation("ksz_search needs at least one trial"));
    }
    let indices: Vec<MultiIndex> = enumerate_lambda(m, nvars).collect();
    let sq: Vec<f64> = coeffs.iter().map(|a| a * a).collect();
    let denom = (nvars as f64 * (m as f64).ln() * pairwise_sum(&sq)).sqrt();

    let mut best_ratio = f64::infinity();
    let mut best_sup = f64::infinity();
    let mut best_signs: Vec<i8> = Vec::new();
    let mut running_min = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let mut rng = task_rng(seed, trial as u64);
        let signs: Vec<i8> = (0..coeffs.len())
            .map(|_| if rng.next_u64() & 1 == 0 { 1i8 } else { -1i8 })
            .collect();
        let poly = TrigPolynomial::new(
            nvars,
            indices
                .iter()
                .cloned()
                .zip(coeffs.iter().zip(signs.iter()))
                .map(|(alpha, (&a, &s))| (alpha, Complex64::new(a * s as f64, 0.0))),
        )?;
        let sup = sup_norm(&poly, 8, subseed(seed, trial as u64 + 1)).value;
        let ratio = sup / denom;
        if ratio < best_ratio {
            best_ratio = ratio;
            best_sup = sup;
            best_signs = signs;
        }
        running_min.push(best_ratio);
    }
    Ok(KszReport {
        m,
        nvars,
        trials,
        seed,
        best_signs,
        best_sup,
        best_ratio,
        denom,
        running_min,
    })
}

/// Monte-Carlo check of the homogeneous norm-comparison inequality
/// `L_s <= sqrt(s/r)^m L_r`. Both norms come from one shared Haar sample;
/// the flag fires only when the ratio exceeds the bound beyond three
/// combined standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct KhinchineReport {
    pub m: u32,
    pub r: f64,
    pub s: f64,
    pub ratio: f64,
    pub bound: f64,
    pub combined_stderr: f64,
    pub flagged: bool,
    pub norm_r: NormReport,
    pub norm_s: NormReport,
}

pub fn khinchine_ratio(
    poly: &TrigPolynomial,
    r: f64,
    s: f64,
    samples: u32,
    seed: u64,
) -> Result<KhinchineReport, TorusError> {
    if !(1.0 <= r && r <= s) || !s.is_finite() {
        return Err(TorusError::PreconditionViolation("need 1 <= r <= s < infinity"));
    }
    let m = poly.homogeneity().ok_or(TorusError::NotHomogeneous)?;
    let moduli = sample_moduli(poly, samples.max(1000), seed);
    let (lr, se_r) = power_mean_with_jackknife(&moduli, r);
    let (ls, se_s) = power_mean_with_jackknife(&moduli, s);
    let bound = (s / r).sqrt().powi(m as i32);
    let (ratio, combined) = if lr > 0.0 {
        let ratio = ls / lr;
        // Independent-error propagation; conservative for positively
        // correlated estimates from a shared sample.
        let rel = (se_r / lr) * (se_r / lr) + (se_s / ls.max(f64::MIN_POSITIVE)) * (se_s / ls.max(f64::MIN_POSITIVE));
        (ratio, ratio * rel.sqrt())
    } else {
        (0.0, 0.0)
    };
    let flagged = ratio > bound + 3.0 * combined;
    Ok(KhinchineReport {
        m,
        r,
        s,
        ratio,
        bound,
        combined_stderr: combined,
        flagged,
        norm_r: NormReport {
            value: lr,
            kind: NormKind::LpMonteCarlo { p: r, samples: samples.max(1000), stderr: se_r },
            seed: Some(seed),
        },
        norm_s: NormReport {
            value: ls,
            kind: NormKind::LpMonteCarlo { p: s, samples: samples.max(1000), stderr: se_s },
            seed: Some(seed),
        },
    })
}

/// Ratio log for the hypercontractive coefficient inequality: the
/// `l_{2m/(m+1)}` coefficient norm against the sup estimate. The comparison
/// constant is unknown, so this is report-only.
#[derive(Debug, Clone, PartialEq)]
pub struct BhReport {
    pub m: u32,
    pub coeff_norm: f64,
    pub sup: NormReport,
    pub ratio: f64,
}

pub fn bh_ratio(poly: &TrigPolynomial, restarts: u32, seed: u64) -> Result<BhReport, TorusError> {
    let m = poly.homogeneity().ok_or(TorusError::NotHomogeneous)?;
    if m < 1 {
        return Err(TorusError::PreconditionViolation("degree must be at least 1"));
    }
    let e = 2.0 * m as f64 / (m as f64 + 1.0);
    let powered: Vec<f64> = poly.coeffs().values().map(|c| c.norm().powf(e)).collect();
    let coeff_norm = pairwise_sum(&powered).powf(1.0 / e);
    let sup = sup_norm(poly, restarts, seed);
    let ratio = if sup.value > 0.0 { coeff_norm / sup.value } else { 0.0 };
    Ok(BhReport { m, coeff_norm, sup, ratio })
}

/// Instance of the constant-free two-factor bound for nonnegative
/// coefficients over sorted tuples of degree at least `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Fred1Instance {
    pub nvars: u32,
    /// Split length, an integer strictly greater than 1.
    pub p: u32,
    pub rho: f64,
    /// `r_1..r_nvars`, each in `[0, rho)`.
    pub r: Vec<f64>,
    /// Nonnegative coefficients on sorted tuples with values in
    /// `1..=nvars` and length at least `p` (a finite truncation in degree).
    pub coeffs: BTreeMap<IndexTuple, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fred1Outcome {
    pub lhs: f64,
    pub rhs: f64,
    /// Weighted-geometry factor over `J(p,n)`.
    pub factor_r: f64,
    /// Coefficient mixed-norm factor over `J(p,n)`.
    pub factor_c: f64,
}

/// Evaluates both sides of the two-factor bound exactly (finite sums). The
/// inequality is constant-free, so callers may assert `lhs <= rhs` up to
/// floating rounding.
pub fn fred1_check(inst: &Fred1Instance) -> Result<Fred1Outcome, TorusError> {
    let n = inst.nvars;
    let p = inst.p;
    if p < 2 {
        return Err(TorusError::PreconditionViolation("split length p must exceed 1"));
    }
    if !(inst.rho > 0.0) {
        return Err(TorusError::PreconditionViolation("rho must be positive"));
    }
    if inst.r.len() != n as usize {
        return Err(TorusError::PreconditionViolation("r must list one value per variable"));
    }
    if inst.r.iter().any(|&x| !(0.0 <= x && x < inst.rho)) {
        return Err(TorusError::PreconditionViolation("every r_i must satisfy 0 <= r_i < rho"));
    }
    for (t, &c) in &inst.coeffs {
        if !t.is_sorted() || t.len() < p as usize {
            return Err(TorusError::PreconditionViolation(
                "coefficient tuples must be sorted with length at least p",
            ));
        }
        if t.values().iter().any(|&v| v == 0 || v > n) {
            return Err(TorusError::PreconditionViolation("tuple values must lie in 1..=nvars"));
        }
        if !(c >= 0.0) {
            return Err(TorusError::PreconditionViolation("coefficients must be nonnegative"));
        }
    }

    // Left side: sum over all tuples of c_i r_{i_1} ... r_{i_m}.
    let mut lhs_terms = Vec::with_capacity(inst.coeffs.len());
    for (t, &c) in &inst.coeffs {
        let mut prod = c;
        for &v in t.values() {
            prod *= inst.r[v as usize - 1];
        }
        lhs_terms.push(prod);
    }
    let lhs = pairwise_sum(&lhs_terms);

    // Coefficient factor: group by the suffix of length p.
    let mut by_suffix: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
    for (t, &c) in &inst.coeffs {
        let vals = t.values();
        let split = vals.len() - p as usize;
        let suffix = vals[split..].to_vec();
        let scale = inst.rho.powi(2 * split as i32);
        *by_suffix.entry(suffix).or_insert(0.0) += scale * c * c;
    }
    let pe = p as f64;
    let inner_exp = pe / (pe + 1.0); // (1/2) * 2p/(p+1)
    let c_terms: Vec<f64> = by_suffix.values().map(|&s| s.powf(inner_exp)).collect();
    let factor_c = pairwise_sum(&c_terms).powf((pe + 1.0) / (2.0 * pe));

    // Geometry factor over all of J(p,n), with the cumulative product
    // prod_{l <= j_1} 1/(1 - (r_l/rho)^2).
    let mut cum = vec![1.0f64; n as usize + 1];
    for l in 1..=n as usize {
        let x = inst.r[l - 1] / inst.rho;
        cum[l] = cum[l - 1] / (1.0 - x * x);
    }
    let outer_exp = 2.0 * pe / (pe - 1.0);
    let mut r_terms = Vec::new();
    for j in crate::kernel::enumerate_sorted_tuples(p, n) {
        let mut prod = 1.0;
        for &v in &j {
            prod *= inst.r[v as usize - 1];
        }
        let weighted = prod * cum[j[0] as usize].sqrt();
        r_terms.push(weighted.powf(outer_exp));
    }
    let factor_r = pairwise_sum(&r_terms).powf((pe - 1.0) / (2.0 * pe));

    Ok(Fred1Outcome { lhs, rhs: factor_r * factor_c, factor_r, factor_c })
}

/// Mixed-norm ratio log for the split-coefficient inequality: the left-hand
/// mixed norm of an `m`-homogeneous polynomial under an index split of length
/// `p`, against the sup estimate. Logged against `[kappa (1 + 1/p)]^m`; the
/// multiplicative constant is unknown, so this is report-only.
#[derive(Debug, Clone, PartialEq)]
pub struct Fred2Report {
    pub m: u32,
    pub p: u32,
    pub mixed_norm: f64,
    pub sup: NormReport,
    pub ratio: f64,
    /// `[kappa (1+1/p)]^m` at the reference kappa.
    pub reference_growth: f64,
    pub kappa: f64,
}

/// Reference kappa slightly above 1 for the growth column of the report.
pub const FRED2_KAPPA: f64 = 1.05;

pub fn fred2_ratio(
    poly: &TrigPolynomial,
    p: u32,
    restarts: u32,
    seed: u64,
) -> Result<Fred2Report, TorusError> {
    let m = poly.homogeneity().ok_or(TorusError::NotHomogeneous)?;
    if p < 1 || p > m {
        return Err(TorusError::PreconditionViolation("need 1 <= p <= m"));
    }
    // Group |c|^2 by the length-p suffix of the sorted tuple; the prefix
    // constraint i_{m-p} <= j_1 is automatic for sorted tuples.
    let mut by_suffix: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
    for (alpha, c) in poly.coeffs() {
        let t = IndexTuple::from_multi_index(alpha);
        let vals = t.values();
        let split = vals.len() - p as usize;
        let suffix = vals[split..].to_vec();
        *by_suffix.entry(suffix).or_insert(0.0) += c.norm_sqr();
    }
    let pe = p as f64;
    let inner_exp = pe / (pe + 1.0);
    let terms: Vec<f64> = by_suffix.values().map(|&s| s.powf(inner_exp)).collect();
    let mixed_norm = pairwise_sum(&terms).powf((pe + 1.0) / (2.0 * pe));
    let sup = sup_norm(poly, restarts, seed);
    let ratio = if sup.value > 0.0 { mixed_norm / sup.value } else { 0.0 };
    let reference_growth = (FRED2_KAPPA * (1.0 + 1.0 / pe)).powi(m as i32);
    Ok(Fred2Report { m, p, mixed_norm, sup, ratio, reference_growth, kappa: FRED2_KAPPA })
}

/// Sidon-constant estimate for Dirichlet polynomials of length `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SidonReport {
    pub n: u64,
    /// Best found ratio `sum |a_n| / sup` (a certified lower bound on the
    /// Sidon constant).
    pub estimate: f64,
    /// Maximizing coefficients, phase-normalized so `a_1 >= 0`.
    pub coeffs: Vec<Complex64>,
    pub sup: NormReport,
    /// Right side of the asymptotic order with the vanishing term dropped;
    /// defined for `N >= 3` (the inner logarithm must be positive).
    pub asymptotic_reference: Option<f64>,
    pub restarts: u32,
    pub seed: u64,
}

/// Maximizes `sum |a_n| / sup |sum a_n n^{-it}|` over coefficient vectors by
/// alternating maximization: the denominator comes from the torus ascent on
/// the lifted polynomial, the outer ascent moves the coefficients with random
/// restarts.
pub fn sidon_constant(
    n_len: u64,
    restarts: u32,
    seed: u64,
    table: &PrimeTable,
) -> Result<SidonReport, TorusError> {
    if n_len == 0 {
        return Err(TorusError::PreconditionViolation("need N >= 1"));
    }
    let reference = if n_len >= 3 {
        let ln = (n_len as f64).ln();
        Some((n_len as f64).sqrt() / ((ln * ln.ln()).sqrt() / 2f64.sqrt()).exp())
    } else {
        None
    };
    if n_len == 1 {
        return Ok(SidonReport {
            n: 1,
            estimate: 1.0,
            coeffs: vec![Complex64::new(1.0, 0.0)],
            sup: NormReport {
                value: 1.0,
                kind: NormKind::SupEstimate { restarts, best_point: TorusPoint::zero(0) },
                seed: Some(seed),
            },
            asymptotic_reference: reference,
            restarts,
            seed,
        });
    }

    let nvars = (1..=n_len)
        .map(|n| table.factor(n).map(|a| a.max_position().unwrap_or(0)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(SeriesError::Kernel)?
        .into_iter()
        .max()
        .unwrap_or(0);

    let dim = n_len as usize;
    let objective = |re_im: &[f64], sup_seed: u64, table: &PrimeTable| -> Result<(f64, f64), TorusError> {
        let coeffs: Vec<Complex64> =
            (0..dim).map(|i| Complex64::new(re_im[2 * i], re_im[2 * i + 1])).collect();
        let l1: f64 = coeffs.iter().map(|c| c.norm()).sum();
        if l1 <= 0.0 {
            return Ok((0.0, 0.0));
        }
        let series = CoeffSeries::dirichlet(
            coeffs.iter().enumerate().map(|(i, &c)| (i as u64 + 1, c)),
            table,
        )?;
        let lift = bohr_lift(&series, nvars, table)?;
        let sup = sup_norm(&lift, 8, sup_seed).value;
        Ok((l1 / sup, sup))
    };

    let mut best_ratio = 0.0f64;
    let mut best_x: Vec<f64> = vec![0.0; 2 * dim];
    for t in 0..restarts {
        let mut rng = task_rng(seed, 1000 + t as u64);
        let mut x: Vec<f64> = (0..2 * dim).map(|_| 2.0 * uniform_f64(&mut rng) - 1.0).collect();
        x[1] = 0.0; // pin the global phase: a_1 real
        normalize(&mut x);
        let mut cur = objective(&x, subseed(seed, t as u64), table)?.0;
        for sweep in 0..24 {
            let before = cur;
            for coord in 0..2 * dim {
                if coord == 1 {
                    continue;
                }
                let sup_seed = subseed(seed, (t as u64) << 16 | (sweep as u64) << 8 | coord as u64);
                let base = x[coord];
                // Coarse scan then golden refinement on this coordinate.
                let mut lo = base - 1.0;
                let mut hi = base + 1.0;
                let mut best_v = cur;
                let mut best_c = base;
                for g in 0..9 {
                    let cand = lo + (hi - lo) * g as f64 / 8.0;
                    x[coord] = cand;
                    let v = objective(&x, sup_seed, table)?.0;
                    if v > best_v {
                        best_v = v;
                        best_c = cand;
                    }
                }
                lo = best_c - 0.25;
                hi = best_c + 0.25;
                const GR: f64 = 0.618_033_988_749_894_9;
                let mut c1 = hi - GR * (hi - lo);
                let mut c2 = lo + GR * (hi - lo);
                x[coord] = c1;
                let mut f1 = objective(&x, sup_seed, table)?.0;
                x[coord] = c2;
                let mut f2 = objective(&x, sup_seed, table)?.0;
                for _ in 0..20 {
                    if f1 > f2 {
                        hi = c2;
                        c2 = c1;
                        f2 = f1;
                        c1 = hi - GR * (hi - lo);
                        x[coord] = c1;
                        f1 = objective(&x, sup_seed, table)?.0;
                    } else {
                        lo = c1;
                        c1 = c2;
                        f1 = f2;
                        c2 = lo + GR * (hi - lo);
                        x[coord] = c2;
                        f2 = objective(&x, sup_seed, table)?.0;
                    }
                }
                let mid = 0.5 * (lo + hi);
                x[coord] = mid;
                let fm = objective(&x, sup_seed, table)?.0;
                if fm >= best_v && fm > cur {
                    cur = fm;
                } else if best_v > cur {
                    x[coord] = best_c;
                    cur = best_v;
                } else {
                    x[coord] = base;
                }
            }
            normalize(&mut x);
            cur = objective(&x, subseed(seed, t as u64), table)?.0;
            if cur - before <= 1e-9 * (1.0 + cur) {
                break;
            }
        }
        if cur > best_ratio {
            best_ratio = cur;
            best_x = x;
        }
    }

    // Re-evaluate the winner with a stronger sup estimate and normalize the
    // global phase so a_1 >= 0.
    let mut coeffs: Vec<Complex64> =
        (0..dim).map(|i| Complex64::new(best_x[2 * i], best_x[2 * i + 1])).collect();
    let scale: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if scale > 0.0 {
        for c in coeffs.iter_mut() {
            *c /= scale;
        }
    }
    if coeffs[0].norm() > 0.0 {
        let phase = coeffs[0] / coeffs[0].norm();
        for c in coeffs.iter_mut() {
            *c /= phase;
        }
    }
    let series = CoeffSeries::dirichlet(
        coeffs.iter().enumerate().map(|(i, &c)| (i as u64 + 1, c)),
        table,
    )?;
    let lift = bohr_lift(&series, nvars, table)?;
    let sup = sup_norm(&lift, restarts.max(16), subseed(seed, 0xF1DE));
    let l1: f64 = coeffs.iter().map(|c| c.norm()).sum();
    let estimate = if sup.value > 0.0 { l1 / sup.value } else { 0.0 };

    Ok(SidonReport {
        n: n_len,
        estimate,
        coeffs,
        sup,
        asymptotic_reference: reference,
        restarts,
        seed,
    })
}

fn normalize(x: &mut [f64]) {
    let sq: Vec<f64> = x.iter().map(|v| v * v).collect();
    let norm = pairwise_sum(&sq).sqrt();
    if norm > 0.0 {
        for v in x.iter_mut() {
            *v /= norm;
        }
    }
}

/// Weighted-coefficient ratio log for homogeneous Dirichlet polynomials:
/// `sum |a_n| (log n)^((m-1)/2) / n^((m-1)/2m)` against the sup of the lift.
/// The comparison constant per degree is unknown, so this is report-only.
#[derive(Debug, Clone, PartialEq)]
pub struct BcqReport {
    pub m: u32,
    pub weighted_sum: f64,
    pub sup: NormReport,
    pub ratio: f64,
}

pub fn bcq_weighted_sum(
    d: &CoeffSeries,
    table: &PrimeTable,
    restarts: u32,
    seed: u64,
) -> Result<BcqReport, TorusError> {
    let m = d.homogeneity().ok_or(TorusError::NotHomogeneous)?;
    if m < 1 {
        return Err(TorusError::PreconditionViolation("degree must be at least 1"));
    }
    let terms = d.dirichlet_terms().map_err(TorusError::Series)?;
    let me = m as f64;
    let mut parts = Vec::with_capacity(terms.len());
    let mut nvars = 0u32;
    for (&n, c) in terms {
        let w = (n as f64).ln().powf((me - 1.0) / 2.0) / (n as f64).powf((me - 1.0) / (2.0 * me));
        parts.push(c.norm() * w);
        let alpha = table.factor(n).map_err(SeriesError::Kernel)?;
        nvars = nvars.max(alpha.max_position().unwrap_or(0));
    }
    let weighted_sum = pairwise_sum(&parts);
    let lift = bohr_lift(d, nvars, table)?;
    let sup = sup_norm(&lift, restarts, seed);
    let ratio = if sup.value > 0.0 { weighted_sum / sup.value } else { 0.0 };
    Ok(BcqReport { m, weighted_sum, sup, ratio })
}

/// Sharp-constant check for the coefficient bound on the Hilbert-space side:
/// the truncated extremal function with coefficients `z^alpha` realizes the
/// constant `prod_j (1 - z_j^2)^(-1/2)` in the limit.
#[derive(Debug, Clone, PartialEq)]
pub struct H2Report {
    /// `sum_alpha |z^alpha|^2 / sqrt(sum_alpha |z^alpha|^2)` over exponents
    /// up to the truncation, via closed-form geometric sums.
    pub empirical_ratio: f64,
    /// `prod_j (1 - z_j^2)^(-1/2)`.
    pub exact_constant: f64,
    pub truncation: u32,
}

/// Exact-arithmetic path (closed-form geometric sums, no sampling).
/// `z` lists the moduli of the point, each strictly inside the unit disk.
pub fn h2_sharp_constant(z: &[f64], truncation: u32) -> Result<H2Report, TorusError> {
    if z.iter().any(|&x| !(0.0 <= x && x < 1.0)) {
        return Err(TorusError::PreconditionViolation("need 0 <= z_j < 1"));
    }
    let mut ratio_sq = 1.0f64;
    let mut exact_sq = 1.0f64;
    for &x in z {
        let q = x * x;
        // sum_{t=0}^{N} q^t = (1 - q^(N+1)) / (1 - q).
        ratio_sq *= (1.0 - q.powi(truncation as i32 + 1)) / (1.0 - q);
        exact_sq *= 1.0 / (1.0 - q);
    }
    Ok(H2Report {
        empirical_ratio: ratio_sq.sqrt(),
        exact_constant: exact_sq.sqrt(),
        truncation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(nvars: u32, terms: &[(&[u32], Complex64)]) -> TrigPolynomial {
        TrigPolynomial::new(
            nvars,
            terms.iter().map(|(d, co)| (MultiIndex::from_dense(d), *co)),
        )
        .unwrap()
    }

    #[test]
    fn eval_examples() {
        let p = poly(2, &[(&[1, 1], c(1.0, 0.0))]);
        let v = eval_poly(&p, &TorusPoint::new(vec![0.0, 0.0])).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-15);

        let q = poly(1, &[(&[2], c(1.0, 0.0))]);
        let v = eval_poly(&q, &TorusPoint::new(vec![FRAC_PI_2])).unwrap();
        assert!((v - c(-1.0, 0.0)).norm() < 1e-15);

        assert!(matches!(
            eval_poly(&q, &TorusPoint::new(vec![0.0, 0.0])),
            Err(TorusError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn l2_examples() {
        let p = poly(2, &[(&[1, 1], c(1.0, 0.0)), (&[2, 0], c(1.0, 0.0))]);
        assert!((l2_norm(&p).value - 2f64.sqrt()).abs() < 1e-15);
        let q = poly(1, &[(&[3], c(0.0, -2.5))]);
        assert!((l2_norm(&q).value - 2.5).abs() < 1e-15);
    }

    #[test]
    fn lp_mc_on_rotation_invariant_cases() {
        let p = poly(1, &[(&[1], c(1.0, 0.0))]);
        let rep = lp_norm_mc(&p, 3.0, 2000, 11);
        assert!((rep.value - 1.0).abs() < 1e-12, "|w| is 1 on the torus");
        let cst = poly(1, &[(&[0], c(0.0, 2.0))]);
        let rep = lp_norm_mc(&cst, 1.0, 1000, 7);
        assert!((rep.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sup_trivial_examples() {
        let p = poly(2, &[(&[1, 0], c(1.0, 0.0)), (&[0, 1], c(1.0, 0.0))]);
        let rep = sup_norm(&p, 8, 3);
        assert!((rep.value - 2.0).abs() < 1e-6);

        let q = poly(1, &[(&[0], c(1.0, 0.0)), (&[1], c(-1.0, 0.0))]);
        let rep = sup_norm(&q, 8, 3);
        assert!((rep.value - 2.0).abs() < 1e-6);
        if let NormKind::SupEstimate { best_point, .. } = &rep.kind {
            let angle = best_point.angles()[0];
            assert!((angle - PI).abs() < 1e-4);
        } else {
            panic!("expected a sup estimate");
        }
    }

    #[test]
    fn ksz_single_coefficient() {
        // Lambda(2,1) = {(2)}: a single monomial, signs irrelevant.
        let rep = ksz_search(2, 1, &[1.5], 4, 99).unwrap();
        let expect = 1.5 / (1.0 * 2f64.ln() * 2.25).sqrt();
        assert!((rep.best_ratio - expect).abs() < 1e-9);
        for w in rep.running_min.windows(2) {
            assert!(w[1] <= w[0]);
        }
        assert!(matches!(ksz_search(1, 2, &[1.0, 1.0], 4, 1), Err(TorusError::DegenerateDegree { m: 1 })));
    }

    #[test]
    fn khinchine_equal_exponents_is_one() {
        let p = poly(2, &[(&[1, 1], c(1.0, 0.0)), (&[2, 0], c(0.5, 0.5))]);
        let rep = khinchine_ratio(&p, 2.0, 2.0, 1000, 5).unwrap();
        assert!((rep.ratio - 1.0).abs() < 1e-12);
        assert!(!rep.flagged);

        let mono = poly(1, &[(&[3], c(2.0, 0.0))]);
        let rep = khinchine_ratio(&mono, 1.0, 4.0, 1000, 5).unwrap();
        assert!((rep.ratio - 1.0).abs() < 1e-12, "|w^m| is constant on the torus");
        assert!(rep.bound >= 1.0);
    }

    #[test]
    fn bh_single_monomial_and_triangle() {
        let mono = poly(2, &[(&[1, 1], c(0.0, 3.0))]);
        let rep = bh_ratio(&mono, 8, 2).unwrap();
        assert!((rep.ratio - 1.0).abs() < 1e-9);

        let p = poly(2, &[(&[1, 0], c(1.0, 0.0)), (&[0, 1], c(1.0, 0.0))]);
        let rep = bh_ratio(&p, 8, 2).unwrap();
        assert!((rep.ratio - 1.0).abs() < 1e-6, "m=1 positive coefficients: triangle equality");
    }

    #[test]
    fn fred1_trivial_cases() {
        let inst = Fred1Instance {
            nvars: 2,
            p: 2,
            rho: 0.9,
            r: vec![0.5, 0.3],
            coeffs: BTreeMap::new(),
        };
        let out = fred1_check(&inst).unwrap();
        assert_eq!(out.lhs, 0.0);
        assert_eq!(out.rhs, 0.0);

        // One term with m = p: reduces to a Cauchy-Schwarz style comparison.
        let mut coeffs = BTreeMap::new();
        coeffs.insert(IndexTuple::new(vec![1, 2]), 2.0);
        let inst = Fred1Instance { nvars: 2, p: 2, rho: 0.9, r: vec![0.5, 0.3], coeffs };
        let out = fred1_check(&inst).unwrap();
        assert!(out.lhs <= out.rhs * (1.0 + 1e-12), "{} vs {}", out.lhs, out.rhs);

        let bad = Fred1Instance {
            nvars: 1,
            p: 2,
            rho: 0.5,
            r: vec![0.6],
            coeffs: BTreeMap::new(),
        };
        assert!(matches!(fred1_check(&bad), Err(TorusError::PreconditionViolation(_))));
    }

    #[test]
    fn fred2_reduces_to_bh_form_at_p_equals_m() {
        let p = poly(3, &[
            (&[2, 0, 0], c(1.0, 0.0)),
            (&[1, 1, 0], c(0.5, -0.5)),
            (&[0, 0, 2], c(0.0, 2.0)),
        ]);
        let f = fred2_ratio(&p, 2, 8, 4).unwrap();
        let b = bh_ratio(&p, 8, 4).unwrap();
        assert!((f.mixed_norm - b.coeff_norm).abs() < 1e-12);
    }

    #[test]
    fn h2_examples() {
        let rep = h2_sharp_constant(&[0.0], 10).unwrap();
        assert_eq!(rep.exact_constant, 1.0);
        assert_eq!(rep.empirical_ratio, 1.0);

        let rep = h2_sharp_constant(&[0.5], 200).unwrap();
        assert!((rep.exact_constant - (4.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((rep.empirical_ratio - rep.exact_constant).abs() < 1e-15);

        assert!(h2_sharp_constant(&[1.0], 10).is_err());
    }

    #[test]
    fn bcq_trivial_cases() {
        let t = PrimeTable::new(8, 100);
        let single = CoeffSeries::dirichlet([(6, c(2.0, 0.0))], &t).unwrap();
        let rep = bcq_weighted_sum(&single, &t, 8, 1).unwrap();
        assert!(rep.ratio.is_finite());
        assert_eq!(rep.m, 2);

        // m = 1: plain Sidon-style ratio with unit weights.
        let m1 = CoeffSeries::dirichlet([(2, c(1.0, 0.0)), (3, c(1.0, 0.0))], &t).unwrap();
        let rep = bcq_weighted_sum(&m1, &t, 8, 1).unwrap();
        assert!((rep.weighted_sum - 2.0).abs() < 1e-12);
        assert!((rep.ratio - 1.0).abs() < 1e-6);
    }

    #[test]
    fn sidon_base_cases() {
        let t = PrimeTable::new(8, 100);
        let rep = sidon_constant(1, 8, 42, &t).unwrap();
        assert_eq!(rep.estimate, 1.0);
        assert!(rep.asymptotic_reference.is_none());
        let rep3 = sidon_constant(3, 8, 42, &t).unwrap();
        assert!(rep3.asymptotic_reference.is_some());
        assert!((rep3.estimate - 1.0).abs() < 1e-3);
    }
}
