//! Group-invariant Butson matrices stored by their first row, perfect
//! polyphase arrays, and exact verification of both.
//!
//! A matrix over `G = Z_{n_1} x ... x Z_{n_k}` is determined by its first
//! row `a_g`; entry `(g, k)` is `zeta_h^{a_{k-g}}`. It is Butson Hadamard
//! exactly when every nontrivial periodic autocorrelation
//! `R_s = sum_g zeta_h^{a_{g+s} - a_g}` vanishes in `Z[zeta_h]`.

use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{CycInt, CyclotomicField};
use crate::numtheory;

#[derive(Debug, Error)]
pub enum BhError {
    #[error("group moduli must be positive, got {0:?}")]
    BadModuli(Vec<usize>),
    #[error("alphabet must be positive")]
    ZeroAlphabet,
    #[error("row has length {len}, group order is {order}")]
    BadLength { order: usize, len: usize },
    #[error("exponent {value} at index {index} is outside [0, {h})")]
    ExponentOutOfRange { index: usize, value: u64, h: u64 },
    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("matrix does not satisfy the Butson Hadamard equations")]
    Unverified,
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

/// A finite abelian group `Z_{n_1} x ... x Z_{n_k}` with mixed-radix element
/// indices; the first modulus is the most significant digit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupSpec {
    moduli: Vec<usize>,
}

impl GroupSpec {
    pub fn new(moduli: Vec<usize>) -> Result<Self, BhError> {
        if moduli.is_empty() || moduli.contains(&0) {
            return Err(BhError::BadModuli(moduli));
        }
        Ok(Self { moduli })
    }

    pub fn cyclic(n: usize) -> Self {
        Self::new(vec![n]).expect("positive modulus")
    }

    pub fn moduli(&self) -> &[usize] {
        &self.moduli
    }

    pub fn order(&self) -> usize {
        self.moduli.iter().product()
    }

    pub fn exponent(&self) -> usize {
        self.moduli
            .iter()
            .fold(1, |acc, &m| numtheory::lcm(acc as u64, m as u64) as usize)
    }

    pub fn coords(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.moduli.len()];
        for (slot, &m) in out.iter_mut().zip(&self.moduli).rev() {
            *slot = index % m;
            index /= m;
        }
        out
    }

    pub fn index(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.moduli)
            .fold(0, |acc, (&c, &m)| acc * m + c % m)
    }

    /// Componentwise `a + b`.
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, |x, y, m| (x + y) % m)
    }

    /// Componentwise `a - b`.
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, |x, y, m| (x + m - y) % m)
    }

    fn combine(&self, mut a: usize, mut b: usize, op: impl Fn(usize, usize, usize) -> usize) -> usize {
        let mut out = 0;
        let mut place = 1;
        for &m in self.moduli.iter().rev() {
            out += op(a % m, b % m, m) * place;
            place *= m;
            a /= m;
            b /= m;
        }
        out
    }

    /// Table `t[g] = g + s` for a fixed shift `s`.
    fn shift_table(&self, s: usize) -> Vec<usize> {
        (0..self.order()).map(|g| self.add(g, s)).collect()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.moduli.iter().map(|m| format!("Z_{m}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

fn check_row(order: usize, h: u64, row: &[u64]) -> Result<(), BhError> {
    if h == 0 {
        return Err(BhError::ZeroAlphabet);
    }
    if row.len() != order {
        return Err(BhError::BadLength {
            order,
            len: row.len(),
        });
    }
    if let Some((index, &value)) = row.iter().enumerate().find(|(_, &v)| v >= h) {
        return Err(BhError::ExponentOutOfRange { index, value, h });
    }
    Ok(())
}

/// A `G`-invariant matrix over `h`-th roots of unity, stored by its first
/// row of exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InvariantBh {
    group: GroupSpec,
    h: u64,
    row: Vec<u64>,
}

impl InvariantBh {
    pub fn new(group: GroupSpec, h: u64, row: Vec<u64>) -> Result<Self, BhError> {
        check_row(group.order(), h, &row)?;
        Ok(Self { group, h, row })
    }

    pub fn cyclic(h: u64, row: Vec<u64>) -> Result<Self, BhError> {
        Self::new(GroupSpec::cyclic(row.len().max(1)), h, row)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn alphabet(&self) -> u64 {
        self.h
    }

    pub fn row(&self) -> &[u64] {
        &self.row
    }

    pub fn into_parts(self) -> (GroupSpec, u64, Vec<u64>) {
        (self.group, self.h, self.row)
    }

    /// Same matrix over the alphabet `h * factor`.
    pub fn lift(&self, factor: u64) -> Self {
        assert!(factor > 0);
        Self {
            group: self.group.clone(),
            h: self.h * factor,
            row: self.row.iter().map(|&e| e * factor).collect(),
        }
    }

    /// `R_s` as an element of `Z[zeta_h]`, built by counting exponent differences.
    pub fn autocorrelation(&self, s: usize) -> Result<CycInt, BhError> {
        let order = self.group.order();
        if s >= order {
            return Err(BhError::IndexOutOfRange { index: s, order });
        }
        Ok(self.autocorrelation_unchecked(&self.group.shift_table(s)))
    }

    fn autocorrelation_unchecked(&self, shifted: &[usize]) -> CycInt {
        let h = self.h;
        let mut value = CycInt::zero(h as usize);
        let counts = value.coeffs_mut();
        for (g, &gs) in shifted.iter().enumerate() {
            let d = (self.row[gs] + h - self.row[g]) % h;
            counts[d as usize] += 1;
        }
        value
    }

    /// Exact check of `D D^{(-1)} = |G|`.
    pub fn verify(&self) -> bool {
        let order = self.group.order();
        let field = CyclotomicField::new(self.h as usize);
        (1..order).into_par_iter().all(|s| {
            let r = self.autocorrelation_unchecked(&self.group.shift_table(s));
            field.is_zero(&r)
        })
    }

    /// The full `|G| x |G|` exponent table, entry `(g, k) = row[k - g]`.
    pub fn materialize(&self) -> Vec<Vec<u64>> {
        let order = self.group.order();
        (0..order)
            .map(|g| (0..order).map(|k| self.row[self.group.sub(k, g)]).collect())
            .collect()
    }

    pub fn to_file(&self) -> ObjectFile {
        ObjectFile::Bh {
            group: self.group.moduli.clone(),
            h: self.h,
            row: self.row.clone(),
        }
    }
}

pub fn autocorrelation(m: &InvariantBh, s: usize) -> Result<CycInt, BhError> {
    m.autocorrelation(s)
}

pub fn verify_bh(m: &InvariantBh) -> bool {
    m.verify()
}

pub fn materialize(m: &InvariantBh) -> Vec<Vec<u64>> {
    m.materialize()
}

/// An `n_1 x ... x n_k` array of `h`-th roots of unity, exponents stored
/// flat in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PerfectArray {
    dims: Vec<usize>,
    h: u64,
    data: Vec<u64>,
}

impl PerfectArray {
    pub fn new(dims: Vec<usize>, h: u64, data: Vec<u64>) -> Result<Self, BhError> {
        let group = GroupSpec::new(dims)?;
        check_row(group.order(), h, &data)?;
        Ok(Self {
            dims: group.moduli,
            h,
            data,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn alphabet(&self) -> u64 {
        self.h
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn get(&self, coords: &[usize]) -> u64 {
        let g = GroupSpec {
            moduli: self.dims.clone(),
        };
        self.data[g.index(coords)]
    }

    /// Autocorrelation at the multi-shift `shift`.
    pub fn autocorrelation(&self, shift: &[usize]) -> Result<CycInt, BhError> {
        let m = matrix_from_array(self);
        let s = m.group.index(shift);
        m.autocorrelation(s)
    }

    pub fn verify(&self) -> bool {
        matrix_from_array(self).verify()
    }

    pub fn to_file(&self) -> ObjectFile {
        ObjectFile::PerfectArray {
            dims: self.dims.clone(),
            h: self.h,
            data: self.data.clone(),
        }
    }
}

/// Reshapes a verified matrix's first row into the array of the same shape.
pub fn array_from_matrix(m: &InvariantBh) -> Result<PerfectArray, BhError> {
    if !m.verify() {
        return Err(BhError::Unverified);
    }
    Ok(PerfectArray {
        dims: m.group.moduli.clone(),
        h: m.h,
        data: m.row.clone(),
    })
}

pub fn matrix_from_array(a: &PerfectArray) -> InvariantBh {
    InvariantBh {
        group: GroupSpec {
            moduli: a.dims.clone(),
        },
        h: a.h,
        row: a.data.clone(),
    }
}

pub fn verify_array(a: &PerfectArray) -> bool {
    a.verify()
}

/// On-disk JSON form of a matrix or an array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum ObjectFile {
    #[serde(rename = "bh")]
    Bh { group: Vec<usize>, h: u64, row: Vec<u64> },
    #[serde(rename = "perfect-array")]
    PerfectArray { dims: Vec<usize>, h: u64, data: Vec<u64> },
}

/// A validated object read from disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BhObject {
    Matrix(InvariantBh),
    Array(PerfectArray),
}

impl BhObject {
    pub fn verify(&self) -> bool {
        match self {
            BhObject::Matrix(m) => m.verify(),
            BhObject::Array(a) => a.verify(),
        }
    }
}

impl ObjectFile {
    pub fn into_object(self) -> Result<BhObject, BhError> {
        match self {
            ObjectFile::Bh { group, h, row } => {
                InvariantBh::new(GroupSpec::new(group)?, h, row).map(BhObject::Matrix)
            }
            ObjectFile::PerfectArray { dims, h, data } => {
                PerfectArray::new(dims, h, data).map(BhObject::Array)
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain integers serialize")
    }

    pub fn from_json(text: &str) -> Result<BhObject, serde_json::Error> {
        let file: ObjectFile = serde_json::from_str(text)?;
        file.into_object()
            .map_err(|e| serde::de::Error::custom(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<(), BhError> {
        let mut text = self.to_json();
        text.push('\n');
        std::fs::write(path, text).map_err(|source| BhError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn read(path: &Path) -> Result<BhObject, BhError> {
        let text = std::fs::read_to_string(path).map_err(|source| BhError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let file: ObjectFile = serde_json::from_str(&text).map_err(|source| BhError::Json {
            path: path.display().to_string(),
            source,
        })?;
        file.into_object()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(h: u64, row: &[u64]) -> InvariantBh {
        InvariantBh::cyclic(h, row.to_vec()).unwrap()
    }

    #[test]
    fn autocorrelation_examples() {
        let zc3 = cyc(3, &[0, 1, 0]);
        let r1 = zc3.autocorrelation(1).unwrap();
        assert_eq!(r1.coeffs(), &[1, 1, 1]);
        assert!(r1.is_zero());
        assert_eq!(zc3.autocorrelation(0).unwrap().coeffs(), &[3, 0, 0]);

        let flat = cyc(2, &[0, 0]);
        let r = flat.autocorrelation(1).unwrap();
        assert_eq!(r.coeffs(), &[2, 0]);
        assert!(!r.is_zero());
        assert!(matches!(
            flat.autocorrelation(2),
            Err(BhError::IndexOutOfRange { index: 2, order: 2 })
        ));
    }

    #[test]
    fn verify_examples() {
        assert!(cyc(2, &[0, 0, 0, 1]).verify());
        assert!(!cyc(2, &[0, 1]).verify());
        assert!(cyc(7, &[0]).verify());
        assert!(cyc(1, &[0]).verify());
    }

    #[test]
    fn materialize_examples() {
        assert_eq!(cyc(2, &[0, 1]).materialize(), vec![vec![0, 1], vec![1, 0]]);
        let t = cyc(3, &[0, 1, 2]).materialize();
        assert_eq!(t, vec![vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]]);
        assert_eq!(cyc(5, &[0]).materialize(), vec![vec![0]]);
    }

    #[test]
    fn array_examples() {
        let a = PerfectArray::new(vec![3, 3], 3, vec![0, 1, 0, 1, 2, 1, 0, 1, 0]).unwrap();
        assert!(a.verify());
        assert_eq!(a.get(&[1, 1]), 2);
        let flat = PerfectArray::new(vec![2, 2], 2, vec![0; 4]).unwrap();
        assert!(!flat.verify());
        assert_eq!(flat.autocorrelation(&[1, 0]).unwrap().coeffs(), &[4, 0]);
        assert!(PerfectArray::new(vec![1], 9, vec![0]).unwrap().verify());
    }

    #[test]
    fn array_matrix_round_trip() {
        let m = cyc(3, &[0, 1, 0]);
        let a = array_from_matrix(&m).unwrap();
        assert_eq!(a.dims(), &[3]);
        assert_eq!(matrix_from_array(&a), m);
        assert!(matches!(array_from_matrix(&cyc(2, &[0, 1])), Err(BhError::Unverified)));
    }

    #[test]
    fn group_index_arithmetic() {
        let g = GroupSpec::new(vec![4, 3]).unwrap();
        assert_eq!(g.order(), 12);
        assert_eq!(g.exponent(), 12);
        assert_eq!(g.coords(7), vec![2, 1]);
        assert_eq!(g.index(&[2, 1]), 7);
        assert_eq!(g.add(g.index(&[3, 2]), g.index(&[2, 2])), g.index(&[1, 1]));
        assert_eq!(g.sub(g.index(&[0, 0]), g.index(&[1, 1])), g.index(&[3, 2]));
        assert!(GroupSpec::new(vec![]).is_err());
        assert!(GroupSpec::new(vec![3, 0]).is_err());
    }

    #[test]
    fn rejects_out_of_range_exponents() {
        assert!(matches!(
            InvariantBh::cyclic(3, vec![0, 3, 1]),
            Err(BhError::ExponentOutOfRange { index: 1, value: 3, h: 3 })
        ));
        assert!(ObjectFile::from_json(r#"{"kind":"bh","group":[2],"h":2,"row":[0,2]}"#).is_err());
        assert!(ObjectFile::from_json(r#"{"kind":"perfect-array","dims":[2],"h":2,"data":[0]}"#)
            .is_err());
    }

    #[test]
    fn json_format() {
        let m = cyc(2, &[0, 0, 0, 1]);
        let text = m.to_file().to_json();
        assert_eq!(text, r#"{"kind":"bh","group":[4],"h":2,"row":[0,0,0,1]}"#);
        assert_eq!(ObjectFile::from_json(&text).unwrap(), BhObject::Matrix(m));
        let a = PerfectArray::new(vec![1, 2], 4, vec![0, 1]).unwrap();
        let text = a.to_file().to_json();
        assert_eq!(text, r#"{"kind":"perfect-array","dims":[1,2],"h":4,"data":[0,1]}"#);
    }
}
