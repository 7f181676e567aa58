//! Positive-sequence analytics: decreasing rearrangement, the `b(z)`
//! functional, sequence-space membership, canonical families, and the block
//! counterexample separating monomial convergence from the weak-`l2` ball.
//!
//! The limsup in `b(z)` is not finitely computable. Named families therefore
//! carry analytic limits derived from closed-form partial-sum asymptotics,
//! while raw samples only ever yield finite-horizon evidence; the tool never
//! claims a limit it cannot certify.

use alloc::vec::Vec;
use core::fmt;

use num_traits::Float;

use crate::kernel::PrimeTable;
use crate::numeric::pairwise_sum;

#[derive(Debug, Clone, PartialEq)]
pub enum SeqError {
    InvalidParams(&'static str),
    /// Fewer than 10 geometric checkpoints fit below the horizon.
    HorizonTooSmall { n_max: u64 },
    /// A sampled sequence does not reach the requested horizon.
    SampleTooShort { len: usize, needed: u64 },
    /// The prime table has too few primes for the requested horizon.
    PrimeTableTooSmall { have: usize, needed: u64 },
    /// The block-sequence convergence condition fails for this base.
    BadBase { base: u32, sum: f64 },
}

impl fmt::Display for SeqError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqError::InvalidParams(m) => write!(f, "invalid parameters: {m}"),
            SeqError::HorizonTooSmall { n_max } => {
                write!(f, "horizon {n_max} admits fewer than 10 checkpoints")
            }
            SeqError::SampleTooShort { len, needed } => {
                write!(f, "sample of length {len} cannot reach horizon {needed}")
            }
            SeqError::PrimeTableTooSmall { have, needed } => {
                write!(f, "prime table has {have} primes, horizon needs {needed}")
            }
            SeqError::BadBase { base, sum } => {
                write!(f, "base {base} violates the convergence condition (sum {sum})")
            }
        }
    }
}

impl core::error::Error for SeqError {}

/// Analytic classification a constructor may attach to a finite sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticTag {
    /// The sequence equals the sample and is zero beyond it.
    EventuallyZero,
}

/// A positive sequence given symbolically (a named family with parameters) or
/// as a finite sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceSpec {
    kind: SeqKind,
    tag: Option<AsymptoticTag>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeqKind {
    /// `z_n = c * n^-a * ln(n+1)^b`.
    PowerLog { c: f64, a: f64, b: f64 },
    /// `z_n = c * p_n^-a` over the ascending primes.
    PrimePower { c: f64, a: f64 },
    /// Block sequence on boundaries `n_k = base^(k^2 (k+1))`: the value is
    /// `sqrt(1/n_1)` up to `n_1` and `sqrt((k+1)/n_{k+1})` on `(n_k, n_{k+1}]`.
    Counterexample25 { base: u32 },
    /// The decreasing sequence whose squared partial sums equal
    /// `ln n * exp(ln ln n / ln n)` for `n >= 16` (head held constant).
    ConverseGap,
    Sampled(Vec<f64>),
}

/// Start of the `ConverseGap` closed form; below this the sequence is padded
/// so the partial-sum identity holds exactly from `GAP_START` on.
const GAP_START: u64 = 16;

fn gap_partial(n: f64) -> f64 {
    let ln = n.ln();
    ln * (ln.ln() / ln).exp()
}

impl SequenceSpec {
    pub fn power_log(c: f64, a: f64, b: f64) -> Result<Self, SeqError> {
        if !(c >= 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(SeqError::InvalidParams("power_log needs c >= 0 and finite a, b"));
        }
        Ok(SequenceSpec { kind: SeqKind::PowerLog { c, a, b }, tag: None })
    }

    pub fn prime_power(c: f64, a: f64) -> Result<Self, SeqError> {
        if !(c >= 0.0) || !a.is_finite() {
            return Err(SeqError::InvalidParams("prime_power needs c >= 0 and finite a"));
        }
        Ok(SequenceSpec { kind: SeqKind::PrimePower { c, a }, tag: None })
    }

    /// Raw block counterexample; [`counterexample25`] also returns the
    /// certificate and validates the convergence condition.
    pub fn counterexample25(base: u32) -> Result<Self, SeqError> {
        if base < 2 {
            return Err(SeqError::InvalidParams("counterexample base must be at least 2"));
        }
        Ok(SequenceSpec { kind: SeqKind::Counterexample25 { base }, tag: None })
    }

    pub fn converse_gap() -> Self {
        SequenceSpec { kind: SeqKind::ConverseGap, tag: None }
    }

    /// Finite sample of an otherwise unknown sequence.
    pub fn sampled(values: Vec<f64>) -> Result<Self, SeqError> {
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(SeqError::InvalidParams("sample values must be finite and nonnegative"));
        }
        Ok(SequenceSpec { kind: SeqKind::Sampled(values), tag: None })
    }

    /// Sample asserted to be the whole sequence (zero beyond the sample);
    /// membership and `b(z)` become decidable.
    pub fn finitely_supported(values: Vec<f64>) -> Result<Self, SeqError> {
        let mut s = Self::sampled(values)?;
        s.tag = Some(AsymptoticTag::EventuallyZero);
        Ok(s)
    }

    pub fn kind(&self) -> &SeqKind {
        &self.kind
    }

    pub fn tag(&self) -> Option<AsymptoticTag> {
        self.tag
    }

    /// True for the symbolic families (analytic verdicts available).
    pub fn is_named(&self) -> bool {
        !matches!(self.kind, SeqKind::Sampled(_))
    }

    /// `z_n` for `n >= 1`. `PrimePower` needs the `n`-th prime from `primes`.
    pub fn eval(&self, n: u64, primes: &PrimeTable) -> Result<f64, SeqError> {
        if n == 0 {
            return Err(SeqError::InvalidParams("sequences are indexed from 1"));
        }
        match &self.kind {
            SeqKind::PowerLog { c, a, b } => {
                let x = n as f64;
                Ok(c * x.powf(-a) * (x + 1.0).ln().powf(*b))
            }
            SeqKind::PrimePower { c, a } => {
                if n > primes.len() as u64 {
                    return Err(SeqError::PrimeTableTooSmall { have: primes.len(), needed: n });
                }
                let p = primes.nth_prime(n as u32).expect("length checked") as f64;
                Ok(c * p.powf(-a))
            }
            SeqKind::Counterexample25 { base } => Ok(counterexample_value(*base, n as f64)),
            SeqKind::ConverseGap => {
                if n <= GAP_START {
                    Ok((gap_partial(GAP_START as f64) / GAP_START as f64).sqrt())
                } else {
                    let x = n as f64;
                    Ok((gap_partial(x) - gap_partial(x - 1.0)).max(0.0).sqrt())
                }
            }
            SeqKind::Sampled(v) => {
                if n as usize <= v.len() {
                    Ok(v[n as usize - 1])
                } else if self.tag == Some(AsymptoticTag::EventuallyZero) {
                    Ok(0.0)
                } else {
                    Err(SeqError::SampleTooShort { len: v.len(), needed: n })
                }
            }
        }
    }

    /// `z_n^2`, computed directly where the square has a closed form. For
    /// the block counterexample the defining identity lives on the squares
    /// (`n_k z_{n_k}^2 = k`), so squaring before the square root keeps it
    /// exact.
    pub fn eval_squared(&self, n: u64, primes: &PrimeTable) -> Result<f64, SeqError> {
        if n == 0 {
            return Err(SeqError::InvalidParams("sequences are indexed from 1"));
        }
        match &self.kind {
            SeqKind::Counterexample25 { base } => Ok(counterexample_value_sq(*base, n as f64)),
            SeqKind::ConverseGap => {
                if n <= GAP_START {
                    Ok(gap_partial(GAP_START as f64) / GAP_START as f64)
                } else {
                    let x = n as f64;
                    Ok((gap_partial(x) - gap_partial(x - 1.0)).max(0.0))
                }
            }
            _ => {
                let v = self.eval(n, primes)?;
                Ok(v * v)
            }
        }
    }

    /// Supremum of the sequence over all `n`, decided analytically for the
    /// named families (the strict `< 1` checks compare against this value
    /// exactly, with no epsilon). For every family in scope the supremum is
    /// attained at some finite index.
    pub fn sup_value(&self, primes: &PrimeTable) -> Result<f64, SeqError> {
        match &self.kind {
            SeqKind::PowerLog { c, a, b } => Ok(power_log_sup(*c, *a, *b)),
            SeqKind::PrimePower { c, a } => {
                // p_n increasing: extremum at n = 1 (p = 2) for a >= 0,
                // unbounded for a < 0.
                if *a < 0.0 {
                    Ok(f64::infinity())
                } else {
                    Ok(c * 2f64.powf(-a))
                }
            }
            SeqKind::Counterexample25 { base } => Ok(counterexample_value(*base, 1.0)),
            SeqKind::ConverseGap => self.eval(1, primes),
            SeqKind::Sampled(v) => Ok(v.iter().cloned().fold(0.0, f64::max)),
        }
    }

    /// Exact `limsup (1/ln n) sum_{j<=n} z*_j^2` when the family admits one
    /// (`None` for untagged samples; may be infinite).
    pub fn analytic_b_limit(&self) -> Option<f64> {
        match &self.kind {
            SeqKind::PowerLog { c, a, b } => {
                if *c == 0.0 {
                    return Some(0.0);
                }
                let two_a = 2.0 * a;
                if two_a > 1.0 {
                    Some(0.0) // squares summable
                } else if two_a == 1.0 {
                    // sum ~ c^2 (ln n)^(2b+1) / (2b+1): limit c^2 at b = 0,
                    // divergent ratio for b > 0, vanishing for b < 0.
                    if *b == 0.0 {
                        Some(c * c)
                    } else if *b > 0.0 {
                        Some(f64::infinity())
                    } else {
                        Some(0.0)
                    }
                } else {
                    Some(f64::infinity()) // sum grows like a power of n
                }
            }
            SeqKind::PrimePower { c, a } => {
                if *c == 0.0 {
                    return Some(0.0);
                }
                // p_n ~ n ln n: squares summable for a > 1/2, Mertens-type
                // ln ln growth at a = 1/2, power growth below.
                if 2.0 * a >= 1.0 {
                    Some(0.0)
                } else {
                    Some(f64::infinity())
                }
            }
            // Partial sums grow like k^2/2 against ln n_k ~ k^3 ln(base).
            SeqKind::Counterexample25 { .. } => Some(0.0),
            // Ratio is exactly exp(ln ln n / ln n) from GAP_START on.
            SeqKind::ConverseGap => Some(1.0),
            SeqKind::Sampled(_) => match self.tag {
                Some(AsymptoticTag::EventuallyZero) => Some(0.0),
                None => None,
            },
        }
    }

    /// Analytic membership verdict for named families (and tagged samples).
    pub fn analytic_membership(&self, space: SeqSpace) -> Option<Membership> {
        use Membership::*;
        let m = match &self.kind {
            SeqKind::PowerLog { c, a, b } => {
                if *c == 0.0 {
                    return Some(In);
                }
                match space {
                    SeqSpace::Lp(p) => t(a * p > 1.0 || (a * p == 1.0 && b * p < -1.0)),
                    SeqSpace::WeakLq(q) => t(*a > 1.0 / q || (*a == 1.0 / q && *b <= 0.0)),
                    SeqSpace::L20 => t(*a > 0.5 || (*a == 0.5 && *b < 0.0)),
                    SeqSpace::L2Log => t(*a > 0.5 || (*a == 0.5 && *b <= 0.5)),
                }
            }
            SeqKind::PrimePower { c, a } => {
                if *c == 0.0 {
                    return Some(In);
                }
                // p_n ~ n ln n throughout (prime number theorem).
                match space {
                    SeqSpace::Lp(p) => t(a * p > 1.0),
                    SeqSpace::WeakLq(q) => t(*a >= 1.0 / q),
                    SeqSpace::L20 => t(*a >= 0.5),
                    SeqSpace::L2Log => t(*a >= 0.5),
                }
            }
            SeqKind::Counterexample25 { .. } => match space {
                // Block identity n_k r_{n_k}^2 = k is unbounded, so the
                // sequence escapes every weak-l_q ball with q <= 2; blocks
                // thin out fast enough for everything strictly weaker.
                SeqSpace::Lp(p) => t(p > 2.0),
                SeqSpace::WeakLq(q) => t(q > 2.0),
                SeqSpace::L20 => Out,
                SeqSpace::L2Log => In,
            },
            SeqKind::ConverseGap => match space {
                // n r_n^2 -> 1: weak-l2 border case, inside the ball.
                SeqSpace::Lp(p) => t(p > 2.0),
                SeqSpace::WeakLq(q) => t(q >= 2.0),
                SeqSpace::L20 => Out,
                SeqSpace::L2Log => In,
            },
            SeqKind::Sampled(_) => match self.tag {
                Some(AsymptoticTag::EventuallyZero) => In,
                None => return None,
            },
        };
        Some(m)
    }
}

fn t(is_in: bool) -> Membership {
    if is_in {
        Membership::In
    } else {
        Membership::Out
    }
}

/// Sup of `c x^-a ln(x+1)^b` over integer `x >= 1`.
fn power_log_sup(c: f64, a: f64, b: f64) -> f64 {
    if c == 0.0 {
        return 0.0;
    }
    if a < 0.0 || (a == 0.0 && b > 0.0) {
        return f64::infinity();
    }
    let val = |x: f64| c * x.powf(-a) * (x + 1.0).ln().powf(b);
    if b <= 0.0 || a == 0.0 {
        // Monotone decreasing (or constant) from x = 1.
        return val(1.0);
    }
    // Single interior maximum where a (x+1) ln(x+1) = b x; bracket and bisect.
    let g = |x: f64| a * (x + 1.0) * (x + 1.0).ln() - b * x;
    if g(1.0) >= 0.0 {
        return val(1.0);
    }
    let mut hi = 2.0;
    while g(hi) < 0.0 && hi < 1e300 {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // The integer max sits next to the real critical point.
    let xc = 0.5 * (lo + hi);
    let lo_i = xc.floor().max(1.0);
    val(lo_i).max(val(lo_i + 1.0)).max(val(1.0))
}

/// `n_k = base^(k^2 (k+1))` in floating point (exact for base 2 until the
/// exponent range runs out).
pub fn counterexample_boundary(base: u32, k: u32) -> f64 {
    (base as f64).powi((k * k * (k + 1)) as i32)
}

fn counterexample_value_sq(base: u32, j: f64) -> f64 {
    let n1 = counterexample_boundary(base, 1);
    if j <= n1 {
        return 1.0 / n1;
    }
    let mut k = 1u32;
    loop {
        let next = counterexample_boundary(base, k + 1);
        if j <= next {
            return (k + 1) as f64 / next;
        }
        k += 1;
        if next.is_infinite() {
            return 0.0;
        }
    }
}

fn counterexample_value(base: u32, j: f64) -> f64 {
    counterexample_value_sq(base, j).sqrt()
}

/// Block boundary `n_k` and the squared sequence value there, computed as
/// `k / n_k` directly (exact in floating point for base 2).
pub fn counterexample_block(base: u32, k: u32) -> (f64, f64) {
    let nk = counterexample_boundary(base, k);
    (nk, k as f64 / nk)
}

/// Nonincreasing permutation of the absolute values of a finite sample.
pub fn decreasing_rearrangement(values: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    out.sort_unstable_by(|x, y| y.total_cmp(x));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictBasis {
    Analytic,
    Numeric,
}

/// Finite estimate of the `b(z)` functional: a checkpoint table of
/// `(1/ln n) sum_{j<=n} z*_j^2` at geometrically spaced `n`, plus the exact
/// limsup when the family admits one.
#[derive(Debug, Clone, PartialEq)]
pub struct BEstimate {
    /// Ascending `(n, value)` pairs; spacing is a fixed factor of 2 ending at
    /// the horizon, so ledgers are comparable across runs.
    pub checkpoints: Vec<(u64, f64)>,
    /// Running sup of the checkpoint values over the tail window (latest
    /// half of the checkpoints).
    pub tail_sup: f64,
    /// Exact limsup for named families.
    pub analytic_limit: Option<f64>,
    /// `b(z)`: square root of the limsup estimate.
    pub b_value: f64,
    pub basis: VerdictBasis,
    pub horizon: u64,
}

impl BEstimate {
    /// Checkpoint value at exactly `n`, if `n` is one of the checkpoints.
    pub fn value_at(&self, n: u64) -> Option<f64> {
        self.checkpoints.iter().find(|&&(m, _)| m == n).map(|&(_, v)| v)
    }
}

/// Evaluates the `b(z)` checkpoint table up to `n_max`.
///
/// Named families must be monotone past a small burn-in (all of them are, for
/// the parameter ranges in scope, from `n = 3` on); raw samples are rearranged
/// first. Requires at least 10 checkpoints, i.e. `n_max >= 1024`.
pub fn b_functional(
    z: &SequenceSpec,
    n_max: u64,
    primes: &PrimeTable,
) -> Result<BEstimate, SeqError> {
    let mut marks: Vec<u64> = Vec::new();
    let mut n = n_max;
    while n >= 2 {
        marks.push(n);
        n /= 2;
    }
    marks.reverse();
    if marks.len() < 10 {
        return Err(SeqError::HorizonTooSmall { n_max });
    }

    // Squared terms in decreasing-rearrangement order.
    let squares: Vec<f64> = match z.kind() {
        SeqKind::Sampled(v) => {
            if z.tag() != Some(AsymptoticTag::EventuallyZero) && (v.len() as u64) < n_max {
                return Err(SeqError::SampleTooShort { len: v.len(), needed: n_max });
            }
            let mut r = decreasing_rearrangement(v);
            r.resize(n_max as usize, 0.0);
            r.iter().map(|x| x * x).collect()
        }
        SeqKind::PrimePower { .. } if (primes.len() as u64) < n_max => {
            return Err(SeqError::PrimeTableTooSmall { have: primes.len(), needed: n_max });
        }
        _ => {
            let mut buf = Vec::with_capacity(n_max as usize);
            for j in 1..=n_max {
                buf.push(z.eval_squared(j, primes)?);
            }
            buf
        }
    };

    let mut checkpoints = Vec::with_capacity(marks.len());
    let mut total = 0.0;
    let mut prev = 0usize;
    for &mark in &marks {
        total += pairwise_sum(&squares[prev..mark as usize]);
        prev = mark as usize;
        checkpoints.push((mark, total / (mark as f64).ln()));
    }

    let tail_from = checkpoints.len() / 2;
    let tail_sup = checkpoints[tail_from..]
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::neg_infinity(), f64::max);

    let analytic_limit = z.analytic_b_limit();
    let (b_value, basis) = match analytic_limit {
        Some(l) => (l.sqrt(), VerdictBasis::Analytic),
        None => (tail_sup.sqrt(), VerdictBasis::Numeric),
    };

    Ok(BEstimate { checkpoints, tail_sup, analytic_limit, b_value, basis, horizon: n_max })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeqSpace {
    /// `l_p`: summable `p`-th powers.
    Lp(f64),
    /// Marcinkiewicz `l_{q,inf}`: `sup_n z*_n n^(1/q) < inf`.
    WeakLq(f64),
    /// `l_{2,0}`: `z*_n sqrt(n) -> 0`.
    L20,
    /// `l_{2,log}`: `z*_n <= c sqrt(ln n / n)`.
    L2Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    Undecided,
}

/// Membership verdict with the finite-horizon statistic that backs it.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub space: SeqSpace,
    pub verdict: Membership,
    pub basis: VerdictBasis,
    /// Horizon statistic: `sup z*_n n^(1/q)`-type value for the weak spaces,
    /// the partial `p`-power sum for `l_p`.
    pub finite_evidence: f64,
    /// Extremal `n` achieving the statistic, with its value.
    pub witness: Option<(u64, f64)>,
    /// Largest index actually scanned for evidence.
    pub scanned: u64,
}

/// Decides membership analytically for named families; sampled data report
/// finite-horizon evidence and stay `Undecided` unless a constructor tag
/// certifies the tail.
pub fn space_membership(
    z: &SequenceSpec,
    space: SeqSpace,
    horizon: u64,
    primes: &PrimeTable,
) -> Result<MembershipReport, SeqError> {
    match space {
        SeqSpace::Lp(p) if !(p >= 1.0) => {
            return Err(SeqError::InvalidParams("l_p needs p >= 1"));
        }
        SeqSpace::WeakLq(q) if !(q >= 1.0) => {
            return Err(SeqError::InvalidParams("weak l_q needs q >= 1"));
        }
        _ => {}
    }

    // Evidence scan: full sample for sampled data, capped for families.
    let cap = match z.kind() {
        SeqKind::Sampled(v) => (v.len() as u64).min(horizon),
        SeqKind::PrimePower { .. } => horizon.min(65_536).min(primes.len() as u64),
        _ => horizon.min(65_536),
    };
    let values: Vec<f64> = match z.kind() {
        SeqKind::Sampled(v) => decreasing_rearrangement(&v[..cap as usize]),
        _ => {
            let mut buf = Vec::with_capacity(cap as usize);
            for j in 1..=cap {
                buf.push(z.eval(j, primes)?);
            }
            buf
        }
    };

    let mut best: Option<(u64, f64)> = None;
    let mut lp_sum = 0.0;
    for (i, &v) in values.iter().enumerate() {
        let n = (i + 1) as u64;
        let stat = match space {
            SeqSpace::Lp(p) => {
                lp_sum += v.powf(p);
                continue;
            }
            SeqSpace::WeakLq(q) => v * (n as f64).powf(1.0 / q),
            SeqSpace::L20 => v * (n as f64).sqrt(),
            SeqSpace::L2Log => {
                if n < 2 {
                    continue;
                }
                v * ((n as f64) / (n as f64).ln()).sqrt()
            }
        };
        if best.map_or(true, |(_, b)| stat > b) {
            best = Some((n, stat));
        }
    }
    let finite_evidence = match space {
        SeqSpace::Lp(_) => lp_sum,
        _ => best.map_or(0.0, |(_, b)| b),
    };
    if matches!(space, SeqSpace::Lp(_)) {
        best = Some((cap, lp_sum));
    }

    let (verdict, basis) = match z.analytic_membership(space) {
        Some(v) => (v, VerdictBasis::Analytic),
        None => (Membership::Undecided, VerdictBasis::Numeric),
    };

    Ok(MembershipReport { space, verdict, basis, finite_evidence, witness: best, scanned: cap })
}

/// Certificate accompanying the block counterexample: the convergence sum of
/// the paper-side condition and the per-block bounds on the `b` checkpoint
/// values.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockCertificate {
    pub base: u32,
    pub k_max: u32,
    /// `n_1 .. n_k_max`.
    pub boundaries: Vec<f64>,
    /// `sum_{k <= k_max} (k+1)/n_k`.
    pub convergence_sum: f64,
    /// Geometric bound on the omitted tail of the convergence sum.
    pub tail_bound: f64,
    /// For each block `k`: `convergence_sum + (k+1)/ln n_k`, an upper bound
    /// for every checkpoint value with `n` in block `k`.
    pub block_bounds: Vec<(u32, f64)>,
    /// Asymptotic bound on the limsup: the block bounds decrease to the
    /// convergence sum as `k` grows.
    pub limsup_bound: f64,
    /// Convergence condition holds and every block bound from `k = 2` on
    /// stays below 1.
    pub holds: bool,
}

/// Builds the block counterexample for a given base together with its
/// certificate: `sum (k+1)/n_k < 1` must hold (with the tail margin), and the
/// per-block bounds confirm the finite `b` estimate stays below 1 past the
/// first block.
pub fn counterexample25(
    base: u32,
    k_max: u32,
) -> Result<(SequenceSpec, BlockCertificate), SeqError> {
    if base < 2 || k_max < 2 {
        return Err(SeqError::InvalidParams("need base >= 2 and k_max >= 2"));
    }
    let boundaries: Vec<f64> = (1..=k_max).map(|k| counterexample_boundary(base, k)).collect();
    if boundaries.iter().any(|b| !b.is_finite()) {
        return Err(SeqError::InvalidParams("block boundary overflows f64; lower k_max"));
    }
    let terms: Vec<f64> =
        (1..=k_max).map(|k| (k + 1) as f64 / boundaries[k as usize - 1]).collect();
    let convergence_sum = pairwise_sum(&terms);
    // Ratio between consecutive omitted terms is far below 1/2.
    let tail_bound = 2.0 * (k_max + 2) as f64 / counterexample_boundary(base, k_max + 1);
    let sum_with_tail = convergence_sum + tail_bound;
    if !(sum_with_tail < 1.0) {
        return Err(SeqError::BadBase { base, sum: sum_with_tail });
    }

    let block_bounds: Vec<(u32, f64)> = (1..=k_max)
        .map(|k| (k, sum_with_tail + (k + 1) as f64 / boundaries[k as usize - 1].ln()))
        .collect();
    let holds = block_bounds.iter().skip(1).all(|&(_, b)| b < 1.0);

    let cert = BlockCertificate {
        base,
        k_max,
        boundaries,
        convergence_sum,
        tail_bound,
        block_bounds,
        limsup_bound: sum_with_tail,
        holds,
    };
    Ok((SequenceSpec::counterexample25(base)?, cert))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> PrimeTable {
        PrimeTable::new(2000, 0)
    }

    #[test]
    fn rearrangement_examples() {
        assert_eq!(decreasing_rearrangement(&[0.1, 0.5, 0.3]), vec![0.5, 0.3, 0.1]);
        let sorted = [0.9, 0.4, 0.2];
        assert_eq!(decreasing_rearrangement(&sorted), sorted.to_vec());
    }

    #[test]
    fn power_log_analytic_limits() {
        let z = SequenceSpec::power_log(1.0, 0.5, 0.0).unwrap();
        assert_eq!(z.analytic_b_limit(), Some(1.0));
        let z = SequenceSpec::power_log(0.3, 0.5, 0.0).unwrap();
        assert_eq!(z.analytic_b_limit(), Some(0.09));
        let div = SequenceSpec::power_log(1.0, 0.5, 0.5).unwrap();
        assert_eq!(div.analytic_b_limit(), Some(f64::INFINITY));
        let small = SequenceSpec::power_log(1.0, 0.7, 0.0).unwrap();
        assert_eq!(small.analytic_b_limit(), Some(0.0));
    }

    #[test]
    fn b_functional_checkpoint_calibration() {
        let t = table();
        // z_j = 1/sqrt(j): (1/ln n) sum 1/j = 1 + gamma/ln n + o(1).
        let z = SequenceSpec::power_log(1.0, 0.5, 0.0).unwrap();
        let est = b_functional(&z, 100_000, &t).unwrap();
        let v = est.value_at(100_000).unwrap();
        assert!((v - 1.0).abs() < 0.06, "checkpoint {v}");
        assert!(v > 1.0, "Euler-Mascheroni correction is positive");
        assert_eq!(est.b_value, 1.0);
        assert_eq!(est.basis, VerdictBasis::Analytic);
    }

    #[test]
    fn b_functional_horizon_error() {
        let t = table();
        let z = SequenceSpec::power_log(1.0, 0.5, 0.0).unwrap();
        assert!(matches!(
            b_functional(&z, 1000, &t),
            Err(SeqError::HorizonTooSmall { .. })
        ));
        assert!(b_functional(&z, 1024, &t).is_ok());
    }

    #[test]
    fn b_functional_monotone_in_the_sequence() {
        let t = table();
        let lo = SequenceSpec::power_log(0.3, 0.5, 0.0).unwrap();
        let hi = SequenceSpec::power_log(0.5, 0.5, 0.0).unwrap();
        let el = b_functional(&lo, 4096, &t).unwrap();
        let eh = b_functional(&hi, 4096, &t).unwrap();
        for (a, b) in el.checkpoints.iter().zip(eh.checkpoints.iter()) {
            assert!(a.1 <= b.1);
        }
    }

    #[test]
    fn converse_gap_checkpoints_sit_above_one() {
        let t = table();
        let z = SequenceSpec::converse_gap();
        assert_eq!(z.analytic_b_limit(), Some(1.0));
        let est = b_functional(&z, 1 << 20, &t).unwrap();
        // Ratio equals exp(ln ln n / ln n) past the head: > 1, decreasing.
        let tail: Vec<f64> =
            est.checkpoints.iter().filter(|&&(n, _)| n >= 32).map(|&(_, v)| v).collect();
        for w in tail.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
            assert!(w[1] > 1.0);
        }
        let last = tail.last().unwrap();
        let n = (1u64 << 20) as f64;
        let expect = (n.ln().ln() / n.ln()).exp();
        assert!((last - expect).abs() < 1e-9, "{last} vs {expect}");
    }

    #[test]
    fn counterexample_certificate_base2() {
        let (z, cert) = counterexample25(2, 6).unwrap();
        // Direct summation: 2/4 + 3/4096 + 4/2^36 + ...
        let direct = 2.0 / 4.0 + 3.0 / 4096.0 + 4.0 / 2f64.powi(36) + 5.0 / 2f64.powi(80)
            + 6.0 / 2f64.powi(150) + 7.0 / 2f64.powi(252);
        assert!((cert.convergence_sum - direct).abs() < 1e-15);
        assert!(cert.convergence_sum < 0.5008);
        assert!(cert.holds);
        assert!(cert.limsup_bound < 1.0);

        // First-block values are 1/2 each.
        let t = table();
        for j in 1..=4 {
            assert_eq!(z.eval(j, &t).unwrap(), 0.5);
        }
        // Block identities n_k r_{n_k}^2 = k, exact in f64 for base 2.
        for k in 1..=6u32 {
            let (nk, r_sq) = counterexample_block(2, k);
            assert_eq!(nk * r_sq, k as f64, "block {k}");
            assert_eq!(counterexample_value_sq(2, nk), r_sq);
        }
    }

    #[test]
    fn counterexample_rejects_base_below_two() {
        assert!(counterexample25(1, 4).is_err());
    }

    #[test]
    fn membership_analytic_table() {
        let t = table();
        let half = SequenceSpec::prime_power(1.0, 0.5).unwrap();
        let r = space_membership(&half, SeqSpace::Lp(2.0), 10_000, &t).unwrap();
        assert_eq!(r.verdict, Membership::Out);
        let r = space_membership(&half, SeqSpace::L20, 10_000, &t).unwrap();
        assert_eq!(r.verdict, Membership::In);

        let (ce, _) = counterexample25(2, 6).unwrap();
        let r = space_membership(&ce, SeqSpace::WeakLq(2.0), 10_000, &t).unwrap();
        assert_eq!(r.verdict, Membership::Out);
        // Witness: the statistic peaks at a block boundary where
        // sqrt(n) r_n = sqrt(k).
        let (n, v) = r.witness.unwrap();
        assert_eq!(n, 4096);
        assert!((v - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn membership_nesting_chain() {
        let t = table();
        let fams = [
            SequenceSpec::power_log(1.0, 0.7, 0.0).unwrap(),
            SequenceSpec::power_log(1.0, 0.5, -1.0).unwrap(),
            SequenceSpec::prime_power(1.0, 0.5).unwrap(),
            SequenceSpec::prime_power(1.0, 0.6).unwrap(),
            SequenceSpec::converse_gap(),
        ];
        let chain = [
            SeqSpace::Lp(2.0),
            SeqSpace::L20,
            SeqSpace::WeakLq(2.0),
            SeqSpace::L2Log,
        ];
        for z in &fams {
            let mut seen_in = false;
            for s in chain {
                let v = space_membership(z, s, 4096, &t).unwrap().verdict;
                if seen_in {
                    assert_eq!(v, Membership::In, "nesting violated for {:?} at {:?}", z.kind(), s);
                }
                seen_in = seen_in || v == Membership::In;
            }
        }
    }

    #[test]
    fn sampled_data_stay_undecided() {
        let t = table();
        let z = SequenceSpec::sampled((1..=500).map(|n| 1.0 / n as f64).collect()).unwrap();
        let r = space_membership(&z, SeqSpace::Lp(2.0), 500, &t).unwrap();
        assert_eq!(r.verdict, Membership::Undecided);
        assert!(r.finite_evidence > 1.6 && r.finite_evidence < 1.7);

        let fin = SequenceSpec::finitely_supported(vec![0.9, 0.5]).unwrap();
        let r = space_membership(&fin, SeqSpace::Lp(2.0), 500, &t).unwrap();
        assert_eq!(r.verdict, Membership::In);
        assert_eq!(fin.analytic_b_limit(), Some(0.0));
    }

    #[test]
    fn sup_values() {
        let t = table();
        let z = SequenceSpec::prime_power(1.0, 0.6).unwrap();
        assert_eq!(z.sup_value(&t).unwrap(), 2f64.powf(-0.6));
        // Interior maximum: c n^-a ln(n+1)^b with b large relative to a.
        let z = SequenceSpec::power_log(1.0, 0.1, 1.0).unwrap();
        let sup = z.sup_value(&t).unwrap();
        let brute = (1..200_000u64)
            .map(|n| z.eval(n, &t).unwrap())
            .fold(0.0, f64::max);
        assert!(sup >= brute - 1e-12, "sup {sup} vs brute {brute}");
        assert!(sup < brute + 0.05);
    }
}
