//! Multi-index combinatorics and the prime-side arithmetic behind the
//! correspondence `n = p_1^{a_1} p_2^{a_2} ...` between positive integers and
//! finitely supported exponent vectors.
//!
//! Everything here is exact integer arithmetic. Operations that could wrap
//! return [`KernelError::Overflow`] instead of approximating.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Errors from the exact integer layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelError {
    /// A prime factor of the input lies outside the prime table.
    BoundExceeded { n: u64 },
    /// A requested prime position exceeds the table length.
    PositionOutOfTable { position: u32, table_len: usize },
    /// Exact integer arithmetic would overflow the machine range.
    Overflow,
    /// The tuple/index bijection was asked to invert an unsorted tuple.
    UnsortedInput,
    /// Entry list with a repeated position cannot be canonicalized.
    DuplicatePosition { position: u32 },
}

impl fmt::Display for KernelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelError::BoundExceeded { n } => {
                write!(f, "a prime factor of {n} lies outside the prime table")
            }
            KernelError::PositionOutOfTable { position, table_len } => {
                write!(f, "prime position {position} exceeds table of {table_len} primes")
            }
            KernelError::Overflow => write!(f, "exact integer arithmetic overflowed"),
            KernelError::UnsortedInput => write!(f, "tuple must be nondecreasing"),
            KernelError::DuplicatePosition { position } => {
                write!(f, "duplicate position {position} in multi-index entries")
            }
        }
    }
}

impl core::error::Error for KernelError {}

/// Sparse exponent vector: the index `alpha` of a monomial and the image of
/// an integer under prime factorization.
///
/// Canonical form: entries are `(position, exponent)` pairs with 1-based
/// positions, strictly ascending, and no zero exponent. Two multi-indices are
/// equal iff their canonical entry lists are equal. The derived `Ord` (entry
/// lists compared lexicographically) is the order used whenever coefficient
/// maps are serialized, so files are reproducible byte for byte.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex {
    entries: Vec<(u32, u32)>,
}

impl MultiIndex {
    /// The empty index (degree 0), image of `n = 1`.
    pub fn empty() -> Self {
        MultiIndex { entries: Vec::new() }
    }

    /// Builds a canonical index from `(position, exponent)` pairs.
    ///
    /// Zero exponents are dropped, entries are sorted by position; a repeated
    /// position is an error.
    pub fn from_entries<I>(entries: I) -> Result<Self, KernelError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut es: Vec<(u32, u32)> = entries.into_iter().filter(|&(_, e)| e > 0).collect();
        es.sort_unstable_by_key(|&(p, _)| p);
        for w in es.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(KernelError::DuplicatePosition { position: w[0].0 });
            }
        }
        Ok(MultiIndex { entries: es })
    }

    /// Builds an index from a dense exponent vector (`exps[i]` is the
    /// exponent at position `i + 1`).
    pub fn from_dense(exps: &[u32]) -> Self {
        let entries = exps
            .iter()
            .enumerate()
            .filter(|&(_, &e)| e > 0)
            .map(|(i, &e)| (i as u32 + 1, e))
            .collect();
        MultiIndex { entries }
    }

    /// Unit index with exponent 1 at `position`.
    pub fn unit(position: u32) -> Self {
        debug_assert!(position >= 1);
        MultiIndex { entries: vec![(position, 1)] }
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total degree `|alpha|`; equals `Omega(n)` (prime divisors counted with
    /// multiplicity) under factorization.
    pub fn degree(&self) -> u32 {
        self.entries.iter().map(|&(_, e)| e).sum()
    }

    /// Exponent at a 1-based position (0 where unset).
    pub fn exponent_at(&self, position: u32) -> u32 {
        self.entries
            .iter()
            .find(|&&(p, _)| p == position)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    /// Largest occupied position, if any.
    pub fn max_position(&self) -> Option<u32> {
        self.entries.last().map(|&(p, _)| p)
    }

    /// Exponent-wise sum, i.e. the index of a monomial product.
    pub fn monomial_mul(&self, rhs: &MultiIndex) -> MultiIndex {
        let mut out = Vec::with_capacity(self.entries.len() + rhs.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < rhs.entries.len() {
            let (pa, ea) = self.entries[i];
            let (pb, eb) = rhs.entries[j];
            match pa.cmp(&pb) {
                core::cmp::Ordering::Less => {
                    out.push((pa, ea));
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push((pb, eb));
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    out.push((pa, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.entries[i..]);
        out.extend_from_slice(&rhs.entries[j..]);
        MultiIndex { entries: out }
    }
}

/// An element of `M(m,k)`: a tuple of `m` positions in `1..=k`. Sorted
/// (nondecreasing) tuples form `J(m,k)`, in bijection with the degree-`m`
/// indices `Lambda(m,k)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexTuple {
    values: Vec<u32>,
    sorted: bool,
}

impl IndexTuple {
    pub fn new(values: Vec<u32>) -> Self {
        let sorted = values.windows(2).all(|w| w[0] <= w[1]);
        IndexTuple { values, sorted }
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_sorted(&self) -> bool {
        self.sorted
    }

    /// The bijection `J(m,k) -> Lambda(m,k)`: `alpha_r` counts occurrences of
    /// `r` in the tuple. Requires a sorted tuple.
    pub fn to_multi_index(&self) -> Result<MultiIndex, KernelError> {
        if !self.sorted {
            return Err(KernelError::UnsortedInput);
        }
        let mut entries: Vec<(u32, u32)> = Vec::new();
        for &v in &self.values {
            match entries.last_mut() {
                Some((p, e)) if *p == v => *e += 1,
                _ => entries.push((v, 1)),
            }
        }
        Ok(MultiIndex { entries })
    }

    /// Inverse bijection: `j_alpha = (1,..,1, 2,..,2, ...)` with `alpha_r`
    /// copies of each position `r`.
    pub fn from_multi_index(alpha: &MultiIndex) -> Self {
        let mut values = Vec::with_capacity(alpha.degree() as usize);
        for &(p, e) in alpha.entries() {
            for _ in 0..e {
                values.push(p);
            }
        }
        IndexTuple { values, sorted: true }
    }

    /// Size of the equivalence class of the tuple in `M(m,k)`, i.e.
    /// `m!/alpha!` for the associated index.
    pub fn class_size(&self) -> Result<u128, KernelError> {
        let alpha = if self.sorted {
            self.to_multi_index()?
        } else {
            let mut sorted = self.values.clone();
            sorted.sort_unstable();
            IndexTuple::new(sorted).to_multi_index()?
        };
        multinomial(&alpha)
    }
}

/// Ascending table of the first `K` primes with an optional smallest-prime-
/// factor cache for fast factorization of small integers.
///
/// Immutable after construction and freely shareable across threads.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    primes: Vec<u64>,
    /// Smallest prime factor of every integer in `2..=cache_bound`.
    spf: Vec<u32>,
    cache_bound: u64,
}

impl PrimeTable {
    /// Sieves the first `num_primes` primes and caches smallest prime factors
    /// up to `cache_bound` (pass 0 to skip the factor cache).
    pub fn new(num_primes: usize, cache_bound: u64) -> Self {
        let limit = sieve_limit(num_primes);
        let mut is_comp = vec![false; (limit + 1) as usize];
        let mut primes = Vec::with_capacity(num_primes);
        let mut i = 2u64;
        while i <= limit && primes.len() < num_primes {
            if !is_comp[i as usize] {
                primes.push(i);
                let mut j = i * i;
                while j <= limit {
                    is_comp[j as usize] = true;
                    j += i;
                }
            }
            i += 1;
        }
        debug_assert_eq!(primes.len(), num_primes);

        let mut spf = Vec::new();
        if cache_bound >= 2 {
            spf = vec![0u32; (cache_bound + 1) as usize];
            for p in &primes {
                let p = *p;
                if p > cache_bound {
                    break;
                }
                let mut j = p;
                while j <= cache_bound {
                    if spf[j as usize] == 0 {
                        spf[j as usize] = p as u32;
                    }
                    j += p;
                }
            }
        }
        PrimeTable { primes, spf, cache_bound }
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// The `j`-th prime, 1-based (`nth_prime(1) = 2`).
    pub fn nth_prime(&self, j: u32) -> Result<u64, KernelError> {
        if j == 0 || j as usize > self.primes.len() {
            return Err(KernelError::PositionOutOfTable {
                position: j,
                table_len: self.primes.len(),
            });
        }
        Ok(self.primes[j as usize - 1])
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Factors `n` into a multi-index over prime positions:
    /// `n = prod_j p_j^{alpha_j}`. `factor(1)` is the empty index.
    pub fn factor(&self, n: u64) -> Result<MultiIndex, KernelError> {
        if n == 0 {
            return Err(KernelError::BoundExceeded { n });
        }
        let mut entries: Vec<(u32, u32)> = Vec::new();
        let mut rest = n;
        if rest <= self.cache_bound {
            while rest > 1 {
                let p = self.spf[rest as usize] as u64;
                let pos = self.position_of(p).ok_or(KernelError::BoundExceeded { n })?;
                let mut e = 0u32;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                entries.push((pos, e));
            }
        } else {
            for (i, &p) in self.primes.iter().enumerate() {
                if p * p > rest {
                    break;
                }
                if rest % p == 0 {
                    let mut e = 0u32;
                    while rest % p == 0 {
                        rest /= p;
                        e += 1;
                    }
                    entries.push((i as u32 + 1, e));
                }
            }
            if rest > 1 {
                match self.position_of(rest) {
                    Some(pos) => entries.push((pos, 1)),
                    None => return Err(KernelError::BoundExceeded { n }),
                }
            }
            entries.sort_unstable_by_key(|&(p, _)| p);
        }
        Ok(MultiIndex { entries })
    }

    /// Inverse of [`factor`](Self::factor): `prod_j p_j^{alpha_j}` with
    /// checked multiplication; overflow is reported, never wrapped.
    pub fn integer(&self, alpha: &MultiIndex) -> Result<u64, KernelError> {
        let mut n: u64 = 1;
        for &(pos, exp) in alpha.entries() {
            let p = self.nth_prime(pos)?;
            for _ in 0..exp {
                n = n.checked_mul(p).ok_or(KernelError::Overflow)?;
            }
        }
        Ok(n)
    }

    fn position_of(&self, p: u64) -> Option<u32> {
        self.primes.binary_search(&p).ok().map(|i| i as u32 + 1)
    }
}

/// Conservative upper bound for the `n`-th prime, for sieve sizing.
fn sieve_limit(num_primes: usize) -> u64 {
    if num_primes < 6 {
        return 13;
    }
    let n = num_primes as f64;
    let ln = num_traits::Float::ln(n);
    let lln = num_traits::Float::ln(ln);
    // p_n < n (ln n + ln ln n) for n >= 6 (Rosser-Schoenfeld).
    num_traits::Float::ceil(n * (ln + lln)) as u64 + 16
}

/// Exact binomial coefficient, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}

/// `|alpha|! / alpha!` exactly, as a product of binomial coefficients so the
/// intermediate values never exceed the result.
pub fn multinomial(alpha: &MultiIndex) -> Result<u128, KernelError> {
    let mut acc: u128 = 1;
    let mut seen: u64 = 0;
    for &(_, e) in alpha.entries() {
        seen += e as u64;
        let b = binomial(seen, e as u64).ok_or(KernelError::Overflow)?;
        acc = acc.checked_mul(b).ok_or(KernelError::Overflow)?;
    }
    Ok(acc)
}

/// Number of elements of `Lambda(m,k)`, i.e. `C(m+k-1, m)`.
pub fn lambda_count(m: u32, k: u32) -> Option<u128> {
    if m == 0 {
        return Some(1);
    }
    if k == 0 {
        return Some(0);
    }
    binomial((m + k - 1) as u64, m as u64)
}

/// Iterator over `Lambda(m,k)`, the degree-`m` indices on `k` variables.
///
/// Enumeration order is fixed: ascending lexicographic on the associated
/// sorted tuples `j_alpha`, which is descending lexicographic on the dense
/// exponent vectors. `(m=2, k=2)` yields `(2,0), (1,1), (0,2)`. Downstream
/// coefficient files inherit this order, so it must not change.
pub fn enumerate_lambda(m: u32, k: u32) -> LambdaIter {
    LambdaIter { tuple: SortedTupleIter::new(m, k) }
}

pub struct LambdaIter {
    tuple: SortedTupleIter,
}

impl Iterator for LambdaIter {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        self.tuple.next().map(|t| {
            IndexTuple::new(t).to_multi_index().expect("tuple iterator yields sorted tuples")
        })
    }
}

/// Iterator over `J(m,k)`, the nondecreasing tuples of length `m` with values
/// in `1..=k`, in ascending lexicographic order.
pub fn enumerate_sorted_tuples(m: u32, k: u32) -> SortedTupleIter {
    SortedTupleIter::new(m, k)
}

pub struct SortedTupleIter {
    k: u32,
    current: Option<Vec<u32>>,
}

impl SortedTupleIter {
    fn new(m: u32, k: u32) -> Self {
        let current = if m == 0 {
            Some(Vec::new())
        } else if k == 0 {
            None
        } else {
            Some(vec![1u32; m as usize])
        };
        SortedTupleIter { k, current }
    }
}

impl Iterator for SortedTupleIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.clone()?;
        // Advance: increment the last entry below k, reset the tail to match.
        let next = {
            let mut t = out.clone();
            let mut i = t.len();
            loop {
                if i == 0 {
                    break None;
                }
                i -= 1;
                if t[i] < self.k {
                    let v = t[i] + 1;
                    for slot in t[i..].iter_mut() {
                        *slot = v;
                    }
                    break Some(t);
                }
            }
        };
        self.current = next;
        Some(out)
    }
}
