//! Explicit BH(Z_n, h) witnesses and perfect arrays built from them.
//!
//! Seeds are quadratic chirps and Frank-type sequences; the composite
//! construction of length `m q^2` glues a seed of length `m` to a Frank
//! pattern. Every object leaves this module only after exact verification.

use thiserror::Error;

use crate::bhcore::{array_from_matrix, BhError, GroupSpec, InvariantBh, PerfectArray};
use crate::numtheory::{self, factor, gcd, lcm, valuation};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("no construction applies to n = {n}, h = {h}")]
    Inapplicable { n: u64, h: u64 },
    #[error("internal error: constructed {what} failed verification")]
    VerificationFailed { what: String },
    #[error("input matrix over {0} is not Butson Hadamard")]
    Unverified(GroupSpec),
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprime(usize, usize),
    #[error("expected a group with two cyclic factors, got {0}")]
    NotTwoFactors(GroupSpec),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Core(#[from] BhError),
}

/// A verified perfect sequence used as the seed of the composite construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseSequence {
    alphabet: u64,
    exponents: Vec<u64>,
}

impl BaseSequence {
    pub fn new(alphabet: u64, exponents: Vec<u64>) -> Result<Self, ConstructionError> {
        let m = InvariantBh::cyclic(alphabet, exponents)?;
        if !m.verify() {
            return Err(ConstructionError::Unverified(m.group().clone()));
        }
        let (_, alphabet, exponents) = m.into_parts();
        Ok(Self {
            alphabet,
            exponents,
        })
    }

    /// The length-1 sequence over the alphabet 1.
    pub fn trivial() -> Self {
        Self {
            alphabet: 1,
            exponents: vec![0],
        }
    }

    pub fn from_matrix(m: &InvariantBh) -> Result<Self, ConstructionError> {
        if m.group().moduli().len() != 1 {
            return Err(ConstructionError::InvalidArgument(format!(
                "seed must be cyclic, got {}",
                m.group()
            )));
        }
        Self::new(m.alphabet(), m.row().to_vec())
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn alphabet(&self) -> u64 {
        self.alphabet
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }
}

fn checked(m: InvariantBh, what: impl FnOnce() -> String) -> Result<InvariantBh, ConstructionError> {
    if m.verify() {
        Ok(m)
    } else {
        Err(ConstructionError::VerificationFailed { what: what() })
    }
}

/// Quadratic chirp of length `n`: alphabet `n` when `n` is odd, `2n` when even.
pub fn zadoff_chu(n: u64) -> Result<InvariantBh, ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::InvalidArgument("length must be positive".into()));
    }
    let (h, row): (u64, Vec<u64>) = if n % 2 == 1 {
        (n, (0..n).map(|i| (i * (i + 1) / 2) % n).collect())
    } else {
        let h = 2 * n;
        (h, (0..n).map(|i| (i * i) % h).collect())
    };
    checked(InvariantBh::cyclic(h, row)?, || format!("chirp of length {n}"))
}

/// Composite sequence of length `m q^2` over alphabet `lcm(h0, m q)`,
/// indexed as `t = x + q y` with `x < q`, `y < m q`.
pub fn milewski(base: &BaseSequence, q: u64) -> Result<InvariantBh, ConstructionError> {
    if q == 0 {
        return Err(ConstructionError::InvalidArgument("q must be positive".into()));
    }
    let m = base.len() as u64;
    let h0 = base.alphabet;
    let mq = m * q;
    let l = lcm(h0, mq);
    let n = m * q * q;
    let row = (0..n)
        .map(|t| {
            let (x, y) = (t % q, t / q);
            let seed = (l / h0) * base.exponents[(y % m) as usize];
            let frank = (l / mq) * ((x * y) % mq);
            (seed + frank) % l
        })
        .collect();
    checked(InvariantBh::cyclic(l, row)?, || {
        format!("composite sequence m = {m}, q = {q}")
    })
}

/// A witness for `n = p^a` over the smallest admissible alphabet.
pub fn prime_power_bh(p: u64, a: u32) -> Result<InvariantBh, ConstructionError> {
    if !numtheory::is_prime(p) || a == 0 {
        return Err(ConstructionError::InvalidArgument(format!(
            "expected a prime power, got {p}^{a}"
        )));
    }
    let q = p.pow(a / 2);
    if a % 2 == 0 {
        milewski(&BaseSequence::trivial(), q)
    } else {
        let seed = BaseSequence::from_matrix(&zadoff_chu(p)?)?;
        milewski(&seed, q)
    }
}

/// Kronecker product over `G1 x G2` with alphabet `lcm(h1, h2)`.
pub fn kronecker(m1: &InvariantBh, m2: &InvariantBh) -> Result<InvariantBh, ConstructionError> {
    for m in [m1, m2] {
        if !m.verify() {
            return Err(ConstructionError::Unverified(m.group().clone()));
        }
    }
    kronecker_unchecked(m1, m2)
}

fn kronecker_unchecked(m1: &InvariantBh, m2: &InvariantBh) -> Result<InvariantBh, ConstructionError> {
    let (h1, h2) = (m1.alphabet(), m2.alphabet());
    let l = lcm(h1, h2);
    let mut moduli = m1.group().moduli().to_vec();
    moduli.extend_from_slice(m2.group().moduli());
    let group = GroupSpec::new(moduli)?;
    let row = m1
        .row()
        .iter()
        .flat_map(|&a| m2.row().iter().map(move |&b| ((l / h1) * a + (l / h2) * b) % l))
        .collect();
    checked(InvariantBh::new(group, l, row)?, || {
        format!("Kronecker product over {} and {}", m1.group(), m2.group())
    })
}

fn two_factors(m: &InvariantBh) -> Result<(usize, usize), ConstructionError> {
    match *m.group().moduli() {
        [a, b] => Ok((a, b)),
        _ => Err(ConstructionError::NotTwoFactors(m.group().clone())),
    }
}

/// Reindexes a matrix over `Z_{m1} x Z_{m2}` to `Z_{m1 m2}` via `i -> (i mod m1, i mod m2)`.
pub fn crt_flatten(m: &InvariantBh) -> Result<InvariantBh, ConstructionError> {
    let (m1, m2) = two_factors(m)?;
    if gcd(m1 as u64, m2 as u64) != 1 {
        return Err(ConstructionError::NonCoprime(m1, m2));
    }
    let row = (0..m1 * m2)
        .map(|i| m.row()[(i % m1) * m2 + i % m2])
        .collect();
    Ok(InvariantBh::new(GroupSpec::cyclic(m1 * m2), m.alphabet(), row)?)
}

/// Inverse of [`crt_flatten`].
pub fn crt_unflatten(m: &InvariantBh, m1: usize, m2: usize) -> Result<InvariantBh, ConstructionError> {
    if gcd(m1 as u64, m2 as u64) != 1 {
        return Err(ConstructionError::NonCoprime(m1, m2));
    }
    if m.group().moduli() != [m1 * m2] {
        return Err(ConstructionError::InvalidArgument(format!(
            "expected Z_{}, got {}",
            m1 * m2,
            m.group()
        )));
    }
    let group = GroupSpec::new(vec![m1, m2])?;
    let mut row = vec![0; m1 * m2];
    for (i, &e) in m.row().iter().enumerate() {
        row[(i % m1) * m2 + i % m2] = e;
    }
    Ok(InvariantBh::new(group, m.alphabet(), row)?)
}

/// Whether `n | gcd(n, h)^2` and `(nu_2(n), nu_2(h)) != (1, 1)`.
pub fn cyclic_applicable(n: u64, h: u64) -> bool {
    if n == 0 || h == 0 {
        return false;
    }
    let g = gcd(n, h);
    (g * g) % n == 0 && !(valuation(2, n) == 1 && valuation(2, h) == 1)
}

/// A verified BH(Z_n, h), or `Inapplicable` outside the constructive region.
pub fn cyclic_bh(n: u64, h: u64) -> Result<InvariantBh, ConstructionError> {
    if !cyclic_applicable(n, h) {
        return Err(ConstructionError::Inapplicable { n, h });
    }
    let mut acc = InvariantBh::cyclic(1, vec![0])?;
    for &(p, a) in factor(n).factors() {
        let part = prime_power_bh(p, a)?;
        let joined = kronecker_unchecked(&acc, &part)?;
        acc = crt_flatten(&joined)?;
    }
    debug_assert_eq!(h % acc.alphabet(), 0);
    let lifted = acc.lift(h / acc.alphabet());
    checked(lifted, || format!("BH(Z_{n}, {h})"))
}

/// A verified perfect `h`-phase array with the given dimensions.
pub fn perfect_array(dims: &[usize], h: u64) -> Result<PerfectArray, ConstructionError> {
    if dims.is_empty() {
        return Err(ConstructionError::InvalidArgument("no dimensions".into()));
    }
    if let Some(&bad) = dims.iter().find(|&&d| !cyclic_applicable(d as u64, h)) {
        return Err(ConstructionError::Inapplicable { n: bad as u64, h });
    }
    let mut factors = dims.iter().map(|&d| cyclic_bh(d as u64, h));
    let mut acc = factors.next().expect("nonempty")?;
    for f in factors {
        acc = kronecker_unchecked(&acc, &f?)?;
    }
    array_from_matrix(&acc).map_err(|_| ConstructionError::VerificationFailed {
        what: format!("array of size {dims:?}"),
    })
}
