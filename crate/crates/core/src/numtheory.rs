//! Elementary number theory over `u64`: factorization, valuations,
//! multiplicative orders, self-conjugacy and the field-descent value `F(m, n)`.
//!
//! Everything here is exact integer arithmetic. Inputs in this crate stay far
//! below `2^32`, so trial division is more than fast enough.

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("expected a positive integer, got 0")]
    Zero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("base {base} is not a unit modulo {modulus}")]
    NotCoprime { modulus: u64, base: u64 },
    #[error("F(m, n) needs m >= 2, got m = {0}")]
    ModulusTooSmall(u64),
}

/// Prime factorization `n = prod p^e`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn num_primes(&self) -> usize {
        self.factors.len()
    }

    /// Exponent of `p`, zero when `p` does not occur.
    pub fn exponent(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn value(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }

    /// `Some((p, a))` when the factored integer is `p^a` with `a >= 1`.
    pub fn as_prime_power(&self) -> Option<(u64, u32)> {
        match self.factors.as_slice() {
            [(p, e)] => Some((*p, *e)),
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }
}

pub fn factorize(n: u64) -> Result<Factorization, NumError> {
    if n == 0 {
        return Err(NumError::Zero);
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { factors })
}

/// Factorization of a value already known to be positive.
pub(crate) fn factor(n: u64) -> Factorization {
    factorize(n).expect("positive integer")
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor(n).primes().collect()
}

/// p-adic valuation of `n`.
pub fn nu(p: u64, n: u64) -> Result<u32, NumError> {
    if !is_prime(p) {
        return Err(NumError::NotPrime(p));
    }
    if n == 0 {
        return Err(NumError::Zero);
    }
    Ok(valuation(p, n))
}

pub(crate) fn valuation(p: u64, mut n: u64) -> u32 {
    debug_assert!(p >= 2 && n >= 1);
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

/// `n` with every factor of `p` removed.
pub(crate) fn strip(p: u64, mut n: u64) -> u64 {
    while n % p == 0 {
        n /= p;
    }
    n
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Multiplicative order of `base` modulo `modulus`; `ord(1, b) = 1`.
pub fn ord(modulus: u64, base: u64) -> Result<u64, NumError> {
    if modulus == 0 {
        return Err(NumError::Zero);
    }
    if modulus == 1 {
        return Ok(1);
    }
    if base.gcd(&modulus) != 1 {
        return Err(NumError::NotCoprime { modulus, base });
    }
    let b = base % modulus;
    let mut x = b;
    let mut j = 1;
    while x != 1 {
        x = ((x as u128 * b as u128) % modulus as u128) as u64;
        j += 1;
    }
    Ok(j)
}

/// Product of the primes that divide `n` to an odd power.
pub fn squarefree_part(n: u64) -> u64 {
    factor(n)
        .factors()
        .iter()
        .filter(|&&(_, e)| e % 2 == 1)
        .map(|&(p, _)| p)
        .product()
}

/// Product of the distinct primes dividing `n`.
pub fn radical(n: u64) -> u64 {
    factor(n).primes().product()
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n)
        .factors()
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Whether some power of `p` is `-1` modulo the `p`-free part of `n`.
///
/// When that part is 1 or 2 the congruence holds trivially.
pub fn is_self_conjugate(p: u64, n: u64) -> bool {
    let rest = strip(p, n);
    if rest <= 2 {
        return true;
    }
    let period = ord(rest, p).expect("p is coprime to its p-free part");
    let target = rest - 1;
    let mut x = 1u64;
    for _ in 0..period {
        if x == target {
            return true;
        }
        x = ((x as u128 * p as u128) % rest as u128) as u64;
    }
    false
}

/// Every prime divisor of `m` is self-conjugate modulo `n`.
pub fn is_self_conjugate_composite(m: u64, n: u64) -> bool {
    factor(m).primes().all(|p| is_self_conjugate(p, n))
}

/// The modulus `m~_q` from the field-descent definition.
pub fn m_tilde(q: u64, m: u64) -> u64 {
    let primes = factor(m);
    if m % 2 == 1 || q == 2 {
        primes.primes().filter(|&p| p != q).product()
    } else {
        4 * primes
            .primes()
            .filter(|&p| p != 2 && p != q)
            .product::<u64>()
    }
}

/// `q^{ord_{m~_q}(q)} mod modulus`, the quantity tested in clause (c).
pub(crate) fn descent_residue(q: u64, m: u64, modulus: u64) -> u64 {
    let mt = m_tilde(q, m);
    let e = ord(mt, q).expect("m~_q never contains q");
    pow_mod(q, e, modulus)
}

/// The field-descent value `F(m, n)`.
///
/// For each prime `p_i^{c_i} || m` the exponent `b_i` is the least value in
/// `[1, c_i]` such that every prime `q | n` satisfies one of the three clauses.
pub fn field_descent_f(m: u64, n: u64) -> Result<u64, NumError> {
    if m < 2 {
        return Err(NumError::ModulusTooSmall(m));
    }
    if n == 0 {
        return Err(NumError::Zero);
    }
    let n_primes = prime_divisors(n);
    let mut result = 1u64;
    for &(p, c) in factor(m).factors() {
        let b = (1..=c)
            .find(|&b| {
                n_primes.iter().all(|&q| {
                    let clause_a = q == p && !(p == 2 && b == 1);
                    let clause_b = b == c;
                    let clause_c = q != p && descent_residue(q, m, p.pow(b + 1)) != 1;
                    clause_a || clause_b || clause_c
                })
            })
            .expect("b = c always satisfies clause (b)");
        result *= p.pow(b);
    }
    Ok(result)
}

/// Whether `n` is a nonnegative integer combination of `primes`.
pub fn semigroup_member(n: u64, primes: &[u64]) -> bool {
    let n = n as usize;
    let mut reachable = vec![false; n + 1];
    reachable[0] = true;
    for i in 1..=n {
        reachable[i] = primes
            .iter()
            .any(|&p| (p as usize) <= i && reachable[i - p as usize]);
    }
    reachable[n]
}
