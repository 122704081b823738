//! Exact arithmetic in `Z[zeta_m]`.
//!
//! A [`CycInt`] is stored as its coefficient vector over the powers
//! `1, zeta_m, ..., zeta_m^{m-1}`. That representation is not unique, so
//! equality of values is only ever decided by [`CyclotomicField::is_zero`],
//! which reduces modulo the cyclotomic polynomial.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycError {
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("order must be positive")]
    ZeroOrder,
    #[error("coefficient vector has length {len}, expected {order}")]
    BadLength { order: usize, len: usize },
    #[error("integer overflow in cyclotomic arithmetic")]
    Overflow,
    #[error("cannot embed order {from} into order {to}")]
    BadEmbedding { from: usize, to: usize },
}

/// An element `sum_i coeffs[i] * zeta_m^i` of `Z[zeta_m]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    order: usize,
    coeffs: Vec<i64>,
}

impl CycInt {
    pub fn new(order: usize, coeffs: Vec<i64>) -> Result<Self, CycError> {
        if order == 0 {
            return Err(CycError::ZeroOrder);
        }
        if coeffs.len() != order {
            return Err(CycError::BadLength {
                order,
                len: coeffs.len(),
            });
        }
        Ok(Self { order, coeffs })
    }

    pub fn zero(order: usize) -> Self {
        assert!(order > 0, "order must be positive");
        Self {
            order,
            coeffs: vec![0; order],
        }
    }

    pub fn from_int(order: usize, value: i64) -> Self {
        let mut x = Self::zero(order);
        x.coeffs[0] = value;
        x
    }

    /// `zeta_m^k`.
    pub fn root(order: usize, k: usize) -> Self {
        let mut x = Self::zero(order);
        x.coeffs[k % order] = 1;
        x
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [i64] {
        &mut self.coeffs
    }

    fn check_order(&self, other: &Self) -> Result<(), CycError> {
        if self.order != other.order {
            return Err(CycError::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, CycError> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(*b).ok_or(CycError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            order: self.order,
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CycError> {
        self.add(&other.neg()?)
    }

    pub fn neg(&self) -> Result<Self, CycError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.checked_neg().ok_or(CycError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            order: self.order,
            coeffs,
        })
    }

    /// Product, i.e. cyclic convolution of the coefficient vectors.
    pub fn mul(&self, other: &Self) -> Result<Self, CycError> {
        self.check_order(other)?;
        let m = self.order;
        let mut out = vec![0i64; m];
        for (i, &a) in self.coeffs.iter().enumerate().filter(|(_, a)| **a != 0) {
            for (j, &b) in other.coeffs.iter().enumerate().filter(|(_, b)| **b != 0) {
                let term = a.checked_mul(b).ok_or(CycError::Overflow)?;
                let slot = &mut out[(i + j) % m];
                *slot = slot.checked_add(term).ok_or(CycError::Overflow)?;
            }
        }
        Ok(Self { order: m, coeffs: out })
    }

    /// Complex conjugate: `zeta^i -> zeta^{-i}`.
    pub fn conj(&self) -> Self {
        let m = self.order;
        let mut out = vec![0i64; m];
        for (i, &a) in self.coeffs.iter().enumerate() {
            out[(m - i) % m] = a;
        }
        Self { order: m, coeffs: out }
    }

    /// Re-expresses the value in `Z[zeta_target]` via `zeta_m = zeta_target^{target/m}`.
    pub fn embed(&self, target: usize) -> Result<Self, CycError> {
        if target == 0 || target % self.order != 0 {
            return Err(CycError::BadEmbedding {
                from: self.order,
                to: target,
            });
        }
        let step = target / self.order;
        let mut out = vec![0i64; target];
        for (i, &a) in self.coeffs.iter().enumerate() {
            out[i * step] = a;
        }
        Ok(Self {
            order: target,
            coeffs: out,
        })
    }

    /// Floating-point value at `zeta_m = exp(2 pi i / m)`. Diagnostics only.
    pub fn to_complex(&self) -> Complex64 {
        let m = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, &c)| Complex64::from_polar(c as f64, std::f64::consts::TAU * i as f64 / m))
            .sum()
    }

    /// Exact zero test; builds the cyclotomic polynomial on every call.
    pub fn is_zero(&self) -> bool {
        CyclotomicField::new(self.order).is_zero(self)
    }
}

/// Coefficients of `Phi_m`, lowest degree first.
pub fn cyclotomic_polynomial(m: usize) -> Vec<i64> {
    assert!(m > 0, "order must be positive");
    let divisors: Vec<usize> = (1..=m).filter(|d| m % d == 0).collect();
    let mut known: Vec<(usize, Vec<i128>)> = Vec::with_capacity(divisors.len());
    for &d in &divisors {
        // x^d - 1 divided by every Phi_e with e | d, e < d.
        let mut poly = vec![0i128; d + 1];
        poly[0] = -1;
        poly[d] = 1;
        for (e, phi) in &known {
            if d % e == 0 {
                poly = exact_div(&poly, phi);
            }
        }
        known.push((d, poly));
    }
    let (_, phi) = known.pop().expect("m is its own divisor");
    phi.into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient fits in i64"))
        .collect()
}

/// Quotient of an exact division by a monic polynomial.
fn exact_div(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i128; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "division was not exact");
    quot
}

/// Zero testing in `Z[zeta_m]` with `Phi_m` computed once.
#[derive(Debug, Clone)]
pub struct CyclotomicField {
    order: usize,
    phi: Vec<i64>,
}

impl CyclotomicField {
    pub fn new(order: usize) -> Self {
        Self {
            order,
            phi: cyclotomic_polynomial(order),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// Remainder of `x` modulo `Phi_m`; the canonical form of the value.
    pub fn reduce(&self, x: &CycInt) -> Result<Vec<i64>, CycError> {
        if x.order != self.order {
            return Err(CycError::OrderMismatch(x.order, self.order));
        }
        let deg = self.degree();
        let mut rem: Vec<i128> = x.coeffs.iter().map(|&c| c as i128).collect();
        for top in (deg..rem.len()).rev() {
            let c = rem[top];
            if c == 0 {
                continue;
            }
            let base = top - deg;
            for (j, &p) in self.phi.iter().enumerate() {
                if p != 0 {
                    let t = c.checked_mul(p as i128).ok_or(CycError::Overflow)?;
                    rem[base + j] = rem[base + j].checked_sub(t).ok_or(CycError::Overflow)?;
                }
            }
        }
        rem.truncate(deg);
        rem.into_iter()
            .map(|c| i64::try_from(c).map_err(|_| CycError::Overflow))
            .collect()
    }

    pub fn try_is_zero(&self, x: &CycInt) -> Result<bool, CycError> {
        Ok(self.reduce(x)?.iter().all(|&c| c == 0))
    }

    /// Exact zero test. Panics on order mismatch or arithmetic overflow.
    pub fn is_zero(&self, x: &CycInt) -> bool {
        self.try_is_zero(x)
            .unwrap_or_else(|e| panic!("cyclotomic zero test failed: {e}"))
    }
}
