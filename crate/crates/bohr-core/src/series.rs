//! Coefficient containers for Dirichlet polynomials and power-series
//! polynomials, the Bohr transform between the two forms, and the lift of a
//! Dirichlet polynomial onto the finite polytorus.
//!
//! All series here are finite truncations. Coefficients are double-precision
//! complex numbers; exact zeros are pruned on construction so that support
//! iteration is canonical.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::kernel::{KernelError, MultiIndex, PrimeTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesForm {
    Dirichlet,
    Power,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesError {
    Kernel(KernelError),
    /// Operation requires the other coefficient form.
    FormMismatch { expected: SeriesForm },
    /// A monomial uses a variable beyond the declared count.
    PositionOutOfRange { position: u32, nvars: u32 },
    /// Operation requires a homogeneous input.
    NotHomogeneous,
}

impl From<KernelError> for SeriesError {
    fn from(e: KernelError) -> Self {
        SeriesError::Kernel(e)
    }
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::Kernel(e) => write!(f, "{e}"),
            SeriesError::FormMismatch { expected } => {
                let want = match expected {
                    SeriesForm::Dirichlet => "Dirichlet",
                    SeriesForm::Power => "power",
                };
                write!(f, "operation requires a {want}-form series")
            }
            SeriesError::PositionOutOfRange { position, nvars } => {
                write!(f, "variable position {position} exceeds {nvars} variables")
            }
            SeriesError::NotHomogeneous => write!(f, "operation requires a homogeneous input"),
        }
    }
}

impl core::error::Error for SeriesError {}

/// Finitely supported coefficient map in Dirichlet form (`n -> a_n`) or power
/// form (`alpha -> c_alpha`), with homogeneity metadata.
///
/// Immutable value object: constructors prune exact zeros and detect
/// homogeneity (all keys of degree `m`, with `Omega(n)` as the Dirichlet
/// degree); duplicated keys are accumulated.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeries {
    terms: Terms,
    homogeneity: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
enum Terms {
    Dirichlet(BTreeMap<u64, Complex64>),
    Power(BTreeMap<MultiIndex, Complex64>),
}

impl CoeffSeries {
    /// Builds a Dirichlet-form series from `(n, a_n)` pairs. Homogeneity is
    /// detected against `Omega(n)` computed over `table`.
    pub fn dirichlet<I>(terms: I, table: &PrimeTable) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (u64, Complex64)>,
    {
        let mut map: BTreeMap<u64, Complex64> = BTreeMap::new();
        for (n, c) in terms {
            if n == 0 {
                return Err(SeriesError::Kernel(KernelError::BoundExceeded { n: 0 }));
            }
            let slot = map.entry(n).or_insert(Complex64::new(0.0, 0.0));
            *slot += c;
        }
        map.retain(|_, c| c.re != 0.0 || c.im != 0.0);
        let mut homogeneity = None;
        let mut uniform = true;
        for n in map.keys() {
            let d = table.factor(*n)?.degree();
            match homogeneity {
                None => homogeneity = Some(d),
                Some(m) if m != d => {
                    uniform = false;
                    break;
                }
                _ => {}
            }
        }
        Ok(CoeffSeries {
            terms: Terms::Dirichlet(map),
            homogeneity: if uniform { homogeneity } else { None },
        })
    }

    /// Builds a power-form series from `(alpha, c_alpha)` pairs.
    pub fn power<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut map: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (a, c) in terms {
            let slot = map.entry(a).or_insert(Complex64::new(0.0, 0.0));
            *slot += c;
        }
        map.retain(|_, c| c.re != 0.0 || c.im != 0.0);
        let mut homogeneity = None;
        let mut uniform = true;
        for a in map.keys() {
            let d = a.degree();
            match homogeneity {
                None => homogeneity = Some(d),
                Some(m) if m != d => {
                    uniform = false;
                    break;
                }
                _ => {}
            }
        }
        CoeffSeries {
            terms: Terms::Power(map),
            homogeneity: if uniform { homogeneity } else { None },
        }
    }

    pub fn form(&self) -> SeriesForm {
        match &self.terms {
            Terms::Dirichlet(_) => SeriesForm::Dirichlet,
            Terms::Power(_) => SeriesForm::Power,
        }
    }

    /// Degree `m` when every key has degree `m` (empty series has none).
    pub fn homogeneity(&self) -> Option<u32> {
        self.homogeneity
    }

    pub fn len(&self) -> usize {
        match &self.terms {
            Terms::Dirichlet(m) => m.len(),
            Terms::Power(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dirichlet_terms(&self) -> Result<&BTreeMap<u64, Complex64>, SeriesError> {
        match &self.terms {
            Terms::Dirichlet(m) => Ok(m),
            Terms::Power(_) => Err(SeriesError::FormMismatch { expected: SeriesForm::Dirichlet }),
        }
    }

    pub fn power_terms(&self) -> Result<&BTreeMap<MultiIndex, Complex64>, SeriesError> {
        match &self.terms {
            Terms::Power(m) => Ok(m),
            Terms::Dirichlet(_) => Err(SeriesError::FormMismatch { expected: SeriesForm::Power }),
        }
    }

    /// Coefficient l1-norm over the support.
    pub fn l1_norm(&self) -> f64 {
        match &self.terms {
            Terms::Dirichlet(m) => m.values().map(|c| c.norm()).sum(),
            Terms::Power(m) => m.values().map(|c| c.norm()).sum(),
        }
    }
}

/// The Bohr transform: flips the form, matching the coefficient at
/// `n = p^alpha` with the coefficient at `alpha`. Bijective on supports;
/// applying it twice returns the input.
pub fn bohr_transform(s: &CoeffSeries, table: &PrimeTable) -> Result<CoeffSeries, SeriesError> {
    match &s.terms {
        Terms::Dirichlet(m) => {
            let mut out = BTreeMap::new();
            for (&n, &c) in m {
                out.insert(table.factor(n)?, c);
            }
            Ok(CoeffSeries { terms: Terms::Power(out), homogeneity: s.homogeneity })
        }
        Terms::Power(m) => {
            let mut out = BTreeMap::new();
            for (a, &c) in m {
                out.insert(table.integer(a)?, c);
            }
            Ok(CoeffSeries { terms: Terms::Dirichlet(out), homogeneity: s.homogeneity })
        }
    }
}

/// Keeps exactly the degree-`m` part (`Omega(n) = m` in Dirichlet form,
/// `|alpha| = m` in power form).
pub fn homogeneous_part(
    s: &CoeffSeries,
    m: u32,
    table: &PrimeTable,
) -> Result<CoeffSeries, SeriesError> {
    match &s.terms {
        Terms::Dirichlet(map) => {
            let mut out = BTreeMap::new();
            for (&n, &c) in map {
                if table.factor(n)?.degree() == m {
                    out.insert(n, c);
                }
            }
            Ok(CoeffSeries { terms: Terms::Dirichlet(out), homogeneity: Some(m) })
        }
        Terms::Power(map) => {
            let out: BTreeMap<MultiIndex, Complex64> = map
                .iter()
                .filter(|(a, _)| a.degree() == m)
                .map(|(a, &c)| (a.clone(), c))
                .collect();
            Ok(CoeffSeries { terms: Terms::Power(out), homogeneity: Some(m) })
        }
    }
}

/// Weighted coefficient l1-sum `sum_n |a_n| w(n)` over the finite support of
/// a Dirichlet-form series.
pub fn weighted_l1<F>(s: &CoeffSeries, mut weight: F) -> Result<f64, SeriesError>
where
    F: FnMut(u64) -> f64,
{
    let terms = s.dirichlet_terms()?;
    Ok(terms.iter().map(|(&n, c)| c.norm() * weight(n)).sum())
}

/// Dirichlet convolution `(ab)_n = sum_{de=n} a_d b_e`, truncated to indices
/// `n <= n_max`. The truncation bound is caller-supplied; there is no
/// intrinsic choice for products of truncated series.
pub fn dirichlet_product_truncated(
    a: &CoeffSeries,
    b: &CoeffSeries,
    n_max: u64,
    table: &PrimeTable,
) -> Result<CoeffSeries, SeriesError> {
    let (ta, tb) = (a.dirichlet_terms()?, b.dirichlet_terms()?);
    let mut terms: Vec<(u64, Complex64)> = Vec::new();
    for (&n, &ca) in ta {
        for (&m, &cb) in tb {
            match n.checked_mul(m) {
                Some(nm) if nm <= n_max => terms.push((nm, ca * cb)),
                _ => {}
            }
        }
    }
    CoeffSeries::dirichlet(terms, table)
}

/// Power-series product: exponent vectors add, coefficients multiply,
/// truncated to total degree `deg_max`.
pub fn power_product_truncated(
    a: &CoeffSeries,
    b: &CoeffSeries,
    deg_max: u32,
) -> Result<CoeffSeries, SeriesError> {
    let (ta, tb) = (a.power_terms()?, b.power_terms()?);
    let mut terms: Vec<(MultiIndex, Complex64)> = Vec::new();
    for (ia, &ca) in ta {
        for (ib, &cb) in tb {
            if ia.degree() + ib.degree() <= deg_max {
                terms.push((ia.monomial_mul(ib), ca * cb));
            }
        }
    }
    Ok(CoeffSeries::power(terms))
}

/// Trigonometric polynomial on the `k`-torus: a finite sum
/// `sum_alpha c_alpha w^alpha` with all positions at most `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    nvars: u32,
    coeffs: BTreeMap<MultiIndex, Complex64>,
    homogeneity: Option<u32>,
}

impl TrigPolynomial {
    pub fn new<I>(nvars: u32, terms: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut map: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (a, c) in terms {
            if let Some(p) = a.max_position() {
                if p > nvars {
                    return Err(SeriesError::PositionOutOfRange { position: p, nvars });
                }
            }
            let slot = map.entry(a).or_insert(Complex64::new(0.0, 0.0));
            *slot += c;
        }
        map.retain(|_, c| c.re != 0.0 || c.im != 0.0);
        let mut homogeneity = None;
        let mut uniform = true;
        for a in map.keys() {
            let d = a.degree();
            match homogeneity {
                None => homogeneity = Some(d),
                Some(m) if m != d => {
                    uniform = false;
                    break;
                }
                _ => {}
            }
        }
        Ok(TrigPolynomial {
            nvars,
            coeffs: map,
            homogeneity: if uniform { homogeneity } else { None },
        })
    }

    pub fn nvars(&self) -> u32 {
        self.nvars
    }

    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, Complex64> {
        &self.coeffs
    }

    pub fn homogeneity(&self) -> Option<u32> {
        self.homogeneity
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest exponent of any single variable.
    pub fn max_var_degree(&self) -> u32 {
        self.coeffs
            .keys()
            .flat_map(|a| a.entries().iter().map(|&(_, e)| e))
            .max()
            .unwrap_or(0)
    }

    /// Coefficient l1-norm.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }
}

/// The Bohr lift: rewrites a Dirichlet polynomial as a trigonometric
/// polynomial on the `k`-torus by substituting `w_j` for `p_j^{-s}`. By the
/// Kronecker approximation theorem the sup-norm of the lift equals the
/// sup of the Dirichlet polynomial over vertical lines.
pub fn bohr_lift(
    d: &CoeffSeries,
    k: u32,
    table: &PrimeTable,
) -> Result<TrigPolynomial, SeriesError> {
    let terms = d.dirichlet_terms()?;
    let mut out: Vec<(MultiIndex, Complex64)> = Vec::with_capacity(terms.len());
    for (&n, &c) in terms {
        let alpha = table.factor(n)?;
        if let Some(p) = alpha.max_position() {
            if p > k {
                return Err(SeriesError::Kernel(KernelError::BoundExceeded { n }));
            }
        }
        out.push((alpha, c));
    }
    TrigPolynomial::new(k, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::MultiIndex;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bohr_transform_examples() {
        let t = PrimeTable::new(8, 100);
        let d = CoeffSeries::dirichlet(
            [(1, c(3.0, 0.0)), (2, c(0.0, 1.0)), (6, c(-1.0, 0.0))],
            &t,
        )
        .unwrap();
        let p = bohr_transform(&d, &t).unwrap();
        let terms = p.power_terms().unwrap();
        assert_eq!(terms.len(), 3);
        assert_eq!(terms[&MultiIndex::empty()], c(3.0, 0.0));
        assert_eq!(terms[&MultiIndex::unit(1)], c(0.0, 1.0));
        assert_eq!(
            terms[&MultiIndex::from_entries([(1, 1), (2, 1)]).unwrap()],
            c(-1.0, 0.0)
        );
        let back = bohr_transform(&p, &t).unwrap();
        assert_eq!(back, d);

        let empty = CoeffSeries::dirichlet([], &t).unwrap();
        let pe = bohr_transform(&empty, &t).unwrap();
        assert!(pe.is_empty());
    }

    #[test]
    fn zero_coefficients_are_pruned_and_duplicates_accumulate() {
        let t = PrimeTable::new(8, 100);
        let d = CoeffSeries::dirichlet(
            [(2, c(1.0, 0.0)), (2, c(-1.0, 0.0)), (3, c(0.0, 0.0)), (5, c(2.0, 0.0))],
            &t,
        )
        .unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.dirichlet_terms().unwrap()[&5], c(2.0, 0.0));
    }

    #[test]
    fn homogeneity_detection() {
        let t = PrimeTable::new(8, 100);
        let d = CoeffSeries::dirichlet([(4, c(1.0, 0.0)), (6, c(1.0, 0.0))], &t).unwrap();
        assert_eq!(d.homogeneity(), Some(2));
        let mixed = CoeffSeries::dirichlet([(2, c(1.0, 0.0)), (4, c(1.0, 0.0))], &t).unwrap();
        assert_eq!(mixed.homogeneity(), None);
    }

    #[test]
    fn homogeneous_part_examples() {
        let t = PrimeTable::new(8, 100);
        let s = CoeffSeries::dirichlet(
            [(1, c(1.0, 0.0)), (2, c(1.0, 0.0)), (4, c(1.0, 0.0))],
            &t,
        )
        .unwrap();
        let h2 = homogeneous_part(&s, 2, &t).unwrap();
        assert_eq!(h2.len(), 1);
        assert_eq!(h2.dirichlet_terms().unwrap()[&4], c(1.0, 0.0));
        assert_eq!(h2.homogeneity(), Some(2));
        let h5 = homogeneous_part(&s, 5, &t).unwrap();
        assert!(h5.is_empty());
    }

    #[test]
    fn weighted_l1_examples() {
        let t = PrimeTable::new(8, 100);
        let s = CoeffSeries::dirichlet((1..=4).map(|n| (n, c(1.0, 0.0))), &t).unwrap();
        let v = weighted_l1(&s, |n| 1.0 / (n as f64).sqrt()).unwrap();
        let expect = 1.0 + 1.0 / 2f64.sqrt() + 1.0 / 3f64.sqrt() + 0.5;
        assert!((v - expect).abs() < 1e-15);
        assert_eq!(weighted_l1(&s, |_| 0.0).unwrap(), 0.0);
    }

    #[test]
    fn bohr_lift_examples() {
        let t = PrimeTable::new(8, 100);
        let d = CoeffSeries::dirichlet([(1, c(0.5, 0.0)), (2, c(0.0, 2.0))], &t).unwrap();
        let p = bohr_lift(&d, 1, &t).unwrap();
        assert_eq!(p.nvars(), 1);
        assert_eq!(p.coeffs()[&MultiIndex::empty()], c(0.5, 0.0));
        assert_eq!(p.coeffs()[&MultiIndex::unit(1)], c(0.0, 2.0));

        let four = CoeffSeries::dirichlet([(4, c(1.0, 0.0))], &t).unwrap();
        let lifted = bohr_lift(&four, 1, &t).unwrap();
        assert_eq!(
            lifted.coeffs().keys().next().unwrap(),
            &MultiIndex::from_entries([(1, 2)]).unwrap()
        );

        let three = CoeffSeries::dirichlet([(3, c(1.0, 0.0))], &t).unwrap();
        assert!(matches!(
            bohr_lift(&three, 1, &t),
            Err(SeriesError::Kernel(KernelError::BoundExceeded { n: 3 }))
        ));
    }

    #[test]
    fn lift_of_first_eight_integers_has_expected_keys() {
        let t = PrimeTable::new(8, 100);
        let d = CoeffSeries::dirichlet((1..=8).map(|n| (n, c(1.0, 0.0))), &t).unwrap();
        let p = bohr_lift(&d, 4, &t).unwrap();
        let keys: Vec<MultiIndex> = p.coeffs().keys().cloned().collect();
        let expect = [
            MultiIndex::empty(),
            MultiIndex::unit(1),
            MultiIndex::unit(2),
            MultiIndex::from_entries([(1, 2)]).unwrap(),
            MultiIndex::unit(3),
            MultiIndex::from_entries([(1, 1), (2, 1)]).unwrap(),
            MultiIndex::unit(4),
            MultiIndex::from_entries([(1, 3)]).unwrap(),
        ];
        for e in &expect {
            assert!(keys.contains(e), "missing key {e:?}");
        }
        assert_eq!(keys.len(), 8);
    }
}
