//! Classification of completely multiplicative sequences as absolute
//! summability multipliers of the Hardy spaces of Dirichlet series, via the
//! decay of the prime subsequence `(b_{p_j})`.
//!
//! The decision table, for a multiplicative `(b_n)` determined by its values
//! at the primes:
//!
//! * homogeneous spaces, `p` finite: multiplier iff `(b_{p_j})` is in `l_2`;
//! * homogeneous sup-norm space of degree `m`: multiplier iff `(b_{p_j})` is
//!   in weak `l_{2m/(m-1)}` (bounded, for `m = 1`);
//! * full spaces, `p` finite: multiplier iff all `|b_{p_j}| < 1` and
//!   `(b_{p_j})` is in `l_2`;
//! * full sup-norm space: multiplier if all `|b_{p_j}| < 1` and
//!   `b((b_{p_j})) < 1`; not a multiplier if some `|b_{p_j}| >= 1` or
//!   `b((b_{p_j})) > 1`. The boundary `b = 1` is a genuine gap in the
//!   criterion, so the only honest verdict there is `Undecided`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::kernel::PrimeTable;
use crate::seqlab::{
    b_functional, space_membership, BEstimate, Membership, MembershipReport, SeqError, SeqSpace,
    SequenceSpec,
};
use crate::series::{weighted_l1, CoeffSeries, SeriesError};

/// A nonnegative completely multiplicative sequence, determined by the values
/// `b_{p_j}` at the ascending primes; `b_n = prod_j b_{p_j}^{alpha_j}` for
/// `n = p^alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativeSeq {
    prime_values: SequenceSpec,
}

impl MultiplicativeSeq {
    pub fn new(prime_values: SequenceSpec) -> Self {
        MultiplicativeSeq { prime_values }
    }

    /// The multiplier `b_n = n^-sigma`, whose prime subsequence is
    /// `p_j^-sigma`.
    pub fn sigma_power(sigma: f64) -> Result<Self, SeqError> {
        Ok(MultiplicativeSeq { prime_values: SequenceSpec::prime_power(1.0, sigma)? })
    }

    pub fn prime_values(&self) -> &SequenceSpec {
        &self.prime_values
    }

    /// `b_n` by factoring `n` over the table.
    pub fn eval(&self, n: u64, table: &PrimeTable) -> Result<f64, MultiplierError> {
        let alpha = table.factor(n).map_err(SeriesError::Kernel)?;
        let mut acc = 1.0;
        for &(pos, exp) in alpha.entries() {
            let v = self.prime_values.eval(pos as u64, table)?;
            acc *= num_traits::Float::powi(v, exp as i32);
        }
        Ok(acc)
    }
}

/// Target space of the classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DirichletSpace {
    /// Bounded Dirichlet series (sup norm over the right half plane).
    HInf,
    /// `H_p`, `1 <= p` finite.
    Hp(f64),
    /// `m`-homogeneous part of the sup-norm space.
    HInfHomog(u32),
    /// `m`-homogeneous part of `H_p`, `p` finite.
    HpHomog(f64, u32),
}

impl DirichletSpace {
    pub fn validate(&self) -> Result<(), MultiplierError> {
        match *self {
            DirichletSpace::Hp(p) | DirichletSpace::HpHomog(p, _) => {
                if !(p >= 1.0) || !p.is_finite() {
                    return Err(MultiplierError::BadSpace("p must be finite and at least 1"));
                }
            }
            _ => {}
        }
        match *self {
            DirichletSpace::HInfHomog(m) | DirichletSpace::HpHomog(_, m) if m == 0 => {
                Err(MultiplierError::BadSpace("homogeneity degree must be at least 1"))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for DirichletSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DirichletSpace::HInf => write!(f, "Hinf"),
            DirichletSpace::Hp(p) => write!(f, "H{p}"),
            DirichletSpace::HInfHomog(m) => write!(f, "Hinf^{m}"),
            DirichletSpace::HpHomog(p, m) => write!(f, "H{p}^{m}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Yes => write!(f, "YES"),
            Verdict::No => write!(f, "NO"),
            Verdict::Undecided => write!(f, "UNDECIDED"),
        }
    }
}

/// Which branch of the decision table fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    /// Homogeneous, `p` finite: `l_2` membership of the prime values.
    HomogFiniteL2,
    /// Homogeneous sup-norm: weak `l_{2m/(m-1)}` membership.
    HomogSupWeak,
    /// Full space, `p` finite: strict unit bound plus `l_2`.
    FiniteStrictL2,
    /// Full sup-norm space: strict unit bound plus `b < 1`.
    SupSufficient,
    /// Full sup-norm space: necessary condition violated.
    SupNecessaryViolated,
    /// Full sup-norm space: `b = 1`, outside both directions of the
    /// criterion.
    SupBoundaryGap,
    /// Raw sample: the finite horizon cannot certify the tail.
    SampleInconclusive,
}

/// Evidence trail attached to every verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Evidence {
    pub clause: Clause,
    /// Sup of the prime values (the strict `|b_{p_j}| < 1` check).
    pub sup_prime_value: f64,
    pub strict_unit_bound: bool,
    pub membership: Option<MembershipReport>,
    pub b_estimate: Option<BEstimate>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierVerdict {
    pub space: DirichletSpace,
    pub verdict: Verdict,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MultiplierError {
    Seq(SeqError),
    Series(SeriesError),
    BadSpace(&'static str),
}

impl From<SeqError> for MultiplierError {
    fn from(e: SeqError) -> Self {
        MultiplierError::Seq(e)
    }
}

impl From<SeriesError> for MultiplierError {
    fn from(e: SeriesError) -> Self {
        MultiplierError::Series(e)
    }
}

impl fmt::Display for MultiplierError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultiplierError::Seq(e) => write!(f, "{e}"),
            MultiplierError::Series(e) => write!(f, "{e}"),
            MultiplierError::BadSpace(m) => write!(f, "bad space: {m}"),
        }
    }
}

impl core::error::Error for MultiplierError {}

/// Classifies a multiplicative sequence against one space. `horizon` bounds
/// the numeric evidence scans; analytic verdicts do not depend on it.
pub fn classify(
    b: &MultiplicativeSeq,
    space: DirichletSpace,
    horizon: u64,
    table: &PrimeTable,
) -> Result<MultiplierVerdict, MultiplierError> {
    space.validate()?;
    let z = b.prime_values();
    let sup = z.sup_value(table)?;
    let strict = sup < 1.0;

    let verdict = match space {
        DirichletSpace::HpHomog(_, _) => {
            let mem = space_membership(z, SeqSpace::Lp(2.0), horizon, table)?;
            let v = membership_to_verdict(mem.verdict);
            MultiplierVerdict {
                space,
                verdict: v,
                evidence: Evidence {
                    clause: if mem.verdict == Membership::Undecided {
                        Clause::SampleInconclusive
                    } else {
                        Clause::HomogFiniteL2
                    },
                    sup_prime_value: sup,
                    strict_unit_bound: strict,
                    membership: Some(mem),
                    b_estimate: None,
                    note: String::from("homogeneous finite-p criterion: prime values in l_2"),
                },
            }
        }
        DirichletSpace::HInfHomog(m) => {
            // Weak l_{2m/(m-1)}; for m = 1 the exponent degenerates to
            // infinity and the criterion is plain boundedness.
            if m == 1 {
                let bounded = sup.is_finite();
                MultiplierVerdict {
                    space,
                    verdict: if bounded { Verdict::Yes } else { Verdict::No },
                    evidence: Evidence {
                        clause: Clause::HomogSupWeak,
                        sup_prime_value: sup,
                        strict_unit_bound: strict,
                        membership: None,
                        b_estimate: None,
                        note: String::from("degree 1: criterion is boundedness of prime values"),
                    },
                }
            } else {
                let q = 2.0 * m as f64 / (m as f64 - 1.0);
                let mem = space_membership(z, SeqSpace::WeakLq(q), horizon, table)?;
                let v = membership_to_verdict(mem.verdict);
                MultiplierVerdict {
                    space,
                    verdict: v,
                    evidence: Evidence {
                        clause: if mem.verdict == Membership::Undecided {
                            Clause::SampleInconclusive
                        } else {
                            Clause::HomogSupWeak
                        },
                        sup_prime_value: sup,
                        strict_unit_bound: strict,
                        membership: Some(mem),
                        b_estimate: None,
                        note: String::from(
                            "homogeneous sup-norm criterion: prime values in weak l_{2m/(m-1)}",
                        ),
                    },
                }
            }
        }
        DirichletSpace::Hp(_) => {
            if !strict {
                return Ok(MultiplierVerdict {
                    space,
                    verdict: Verdict::No,
                    evidence: Evidence {
                        clause: Clause::FiniteStrictL2,
                        sup_prime_value: sup,
                        strict_unit_bound: false,
                        membership: None,
                        b_estimate: None,
                        note: String::from("some prime value reaches modulus 1"),
                    },
                });
            }
            let mem = space_membership(z, SeqSpace::Lp(2.0), horizon, table)?;
            let v = membership_to_verdict(mem.verdict);
            MultiplierVerdict {
                space,
                verdict: v,
                evidence: Evidence {
                    clause: if mem.verdict == Membership::Undecided {
                        Clause::SampleInconclusive
                    } else {
                        Clause::FiniteStrictL2
                    },
                    sup_prime_value: sup,
                    strict_unit_bound: true,
                    membership: Some(mem),
                    b_estimate: None,
                    note: String::from("finite-p criterion: strict unit bound plus l_2"),
                },
            }
        }
        DirichletSpace::HInf => {
            if !strict {
                return Ok(MultiplierVerdict {
                    space,
                    verdict: Verdict::No,
                    evidence: Evidence {
                        clause: Clause::SupNecessaryViolated,
                        sup_prime_value: sup,
                        strict_unit_bound: false,
                        membership: None,
                        b_estimate: None,
                        note: String::from("some prime value reaches modulus 1"),
                    },
                });
            }
            let est = b_functional(z, horizon.max(1024), table)?;
            let (verdict, clause, note) = match est.analytic_limit {
                Some(l) if l < 1.0 => (
                    Verdict::Yes,
                    Clause::SupSufficient,
                    String::from("b(prime values) < 1 analytically"),
                ),
                Some(l) if l > 1.0 => (
                    Verdict::No,
                    Clause::SupNecessaryViolated,
                    String::from("b(prime values) > 1 analytically"),
                ),
                Some(_) => (
                    Verdict::Undecided,
                    Clause::SupBoundaryGap,
                    String::from("b(prime values) = 1: the criterion has a genuine gap here"),
                ),
                None => (
                    Verdict::Undecided,
                    Clause::SampleInconclusive,
                    String::from("finite sample cannot certify the limsup"),
                ),
            };
            MultiplierVerdict {
                space,
                verdict,
                evidence: Evidence {
                    clause,
                    sup_prime_value: sup,
                    strict_unit_bound: true,
                    membership: None,
                    b_estimate: Some(est),
                    note,
                },
            }
        }
    };
    Ok(verdict)
}

fn membership_to_verdict(m: Membership) -> Verdict {
    match m {
        Membership::In => Verdict::Yes,
        Membership::Out => Verdict::No,
        Membership::Undecided => Verdict::Undecided,
    }
}

/// Verdict matrix over sequences and spaces, row-major in the input order.
#[derive(Debug, Clone, PartialEq)]
pub struct VerdictTable {
    pub row_labels: Vec<String>,
    pub spaces: Vec<DirichletSpace>,
    pub cells: Vec<Vec<MultiplierVerdict>>,
}

pub fn verdict_table(
    rows: &[(String, MultiplicativeSeq)],
    spaces: &[DirichletSpace],
    horizon: u64,
    table: &PrimeTable,
) -> Result<VerdictTable, MultiplierError> {
    let mut cells = Vec::with_capacity(rows.len());
    for (_, seq) in rows {
        let mut row = Vec::with_capacity(spaces.len());
        for &space in spaces {
            row.push(classify(seq, space, horizon, table)?);
        }
        cells.push(row);
    }
    Ok(VerdictTable {
        row_labels: rows.iter().map(|(l, _)| l.clone()).collect(),
        spaces: spaces.to_vec(),
        cells,
    })
}

/// Empirical cross-check `sum |a_n b_n|` over the finite support of a
/// Dirichlet polynomial: truncations of a multiplier against a fixed series
/// should form a Cauchy sequence.
pub fn sanity_partial_sums(
    b: &MultiplicativeSeq,
    d: &CoeffSeries,
    table: &PrimeTable,
) -> Result<f64, MultiplierError> {
    let mut err: Option<MultiplierError> = None;
    let v = weighted_l1(d, |n| match b.eval(n, table) {
        Ok(x) => x,
        Err(e) => {
            err = Some(e);
            0.0
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn table() -> PrimeTable {
        PrimeTable::new(6000, 10_000)
    }

    #[test]
    fn sigma_power_verdicts() {
        let t = table();
        let half = MultiplicativeSeq::sigma_power(0.5).unwrap();
        assert_eq!(
            classify(&half, DirichletSpace::HInf, 4096, &t).unwrap().verdict,
            Verdict::Yes
        );
        assert_eq!(
            classify(&half, DirichletSpace::Hp(2.0), 4096, &t).unwrap().verdict,
            Verdict::No
        );
        let strong = MultiplicativeSeq::sigma_power(0.6).unwrap();
        assert_eq!(
            classify(&strong, DirichletSpace::Hp(2.0), 4096, &t).unwrap().verdict,
            Verdict::Yes
        );
        let weak = MultiplicativeSeq::sigma_power(0.4).unwrap();
        let v = classify(&weak, DirichletSpace::HInf, 4096, &t).unwrap();
        assert_eq!(v.verdict, Verdict::No);
        assert_eq!(v.evidence.clause, Clause::SupNecessaryViolated);
    }

    #[test]
    fn finitely_supported_prime_values_are_multipliers() {
        let t = table();
        let b = MultiplicativeSeq::new(
            SequenceSpec::finitely_supported(vec![0.9, 0.8, 0.5]).unwrap(),
        );
        let v = classify(&b, DirichletSpace::HInf, 4096, &t).unwrap();
        assert_eq!(v.verdict, Verdict::Yes);
        assert!(v.evidence.strict_unit_bound);
    }

    #[test]
    fn boundary_gap_is_undecided() {
        let t = table();
        // b = 1 exactly with every prime value strictly below 1: the
        // criterion has nothing to say, and no heuristic tie-break is
        // allowed.
        let gap = MultiplicativeSeq::new(SequenceSpec::converse_gap());
        let v = classify(&gap, DirichletSpace::HInf, 4096, &t).unwrap();
        assert_eq!(v.verdict, Verdict::Undecided);
        assert_eq!(v.evidence.clause, Clause::SupBoundaryGap);

        // Prime values 1/sqrt(j) also have b = 1, but the first value equals
        // 1, so the strict necessity already refutes.
        let b = MultiplicativeSeq::new(SequenceSpec::power_log(1.0, 0.5, 0.0).unwrap());
        let v = classify(&b, DirichletSpace::HInf, 4096, &t).unwrap();
        assert_eq!(v.verdict, Verdict::No);
        assert_eq!(v.evidence.clause, Clause::SupNecessaryViolated);
    }

    #[test]
    fn unit_modulus_anywhere_is_a_hard_no() {
        let t = table();
        let b = MultiplicativeSeq::new(
            SequenceSpec::sampled(vec![1.0, 0.1, 0.1]).unwrap(),
        );
        let v = classify(&b, DirichletSpace::HInf, 4096, &t).unwrap();
        assert_eq!(v.verdict, Verdict::No);
        let v = classify(&b, DirichletSpace::Hp(2.0), 4096, &t).unwrap();
        assert_eq!(v.verdict, Verdict::No);
    }

    #[test]
    fn complete_multiplicativity() {
        let t = table();
        let b = MultiplicativeSeq::sigma_power(0.7).unwrap();
        for n in [2u64, 6, 12, 30] {
            for m in [3u64, 5, 8] {
                let lhs = b.eval(n * m, &t).unwrap();
                let rhs = b.eval(n, &t).unwrap() * b.eval(m, &t).unwrap();
                assert!((lhs - rhs).abs() <= 1e-15 * rhs.abs().max(1.0));
            }
        }
    }

    #[test]
    fn sanity_sums_match_direct_summation() {
        let t = table();
        let b = MultiplicativeSeq::sigma_power(0.6).unwrap();
        let d = CoeffSeries::dirichlet(
            (1..=50).map(|n| (n, Complex64::new((n as f64).powf(-0.6), 0.0))),
            &t,
        )
        .unwrap();
        let got = sanity_partial_sums(&b, &d, &t).unwrap();
        let direct: f64 = (1..=50).map(|n| (n as f64).powf(-1.2)).sum();
        assert!((got - direct).abs() < 1e-12);
        let zero = MultiplicativeSeq::new(SequenceSpec::finitely_supported(vec![]).unwrap());
        assert_eq!(sanity_partial_sums(&zero, &d, &t).unwrap(), 1.0);
    }
}
