use std::fmt;

use crate::error::{Error, Result};

/// Trial-division primality test; moduli in this crate are tiny.
pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(p: u32) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

#[inline]
fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + b as u64) % p as u64) as u32
}

#[inline]
fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + p as u64 - b as u64) % p as u64) as u32
}

#[inline]
fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn inv_mod(a: u32, p: u32) -> Option<u32> {
    if a % p == 0 {
        return None;
    }
    // Fermat: a^(p-2)
    let mut base = a as u64 % p as u64;
    let mut exp = p as u64 - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    Some(acc as u32)
}

/// An element of the prime field GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    modulus: u32,
}

impl FieldElement {
    pub fn new(value: u32, modulus: u32) -> Result<Self> {
        check_prime(modulus)?;
        Ok(FieldElement {
            value: value % modulus,
            modulus,
        })
    }

    /// Builds from a signed representative, reducing into `[0, p)`.
    pub fn from_i64(value: i64, modulus: u32) -> Result<Self> {
        check_prime(modulus)?;
        let v = value.rem_euclid(modulus as i64) as u32;
        Ok(FieldElement { value: v, modulus })
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_field(self, other: Self) -> Result<u32> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(self.modulus)
    }

    pub fn add(self, other: Self) -> Result<Self> {
        let p = self.same_field(other)?;
        Ok(FieldElement {
            value: add_mod(self.value, other.value, p),
            modulus: p,
        })
    }

    pub fn sub(self, other: Self) -> Result<Self> {
        let p = self.same_field(other)?;
        Ok(FieldElement {
            value: sub_mod(self.value, other.value, p),
            modulus: p,
        })
    }

    pub fn mul(self, other: Self) -> Result<Self> {
        let p = self.same_field(other)?;
        Ok(FieldElement {
            value: mul_mod(self.value, other.value, p),
            modulus: p,
        })
    }

    pub fn neg(self) -> Self {
        FieldElement {
            value: sub_mod(0, self.value, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn inverse(self) -> Result<Self> {
        let v = inv_mod(self.value, self.modulus).ok_or(Error::NoInverse)?;
        Ok(FieldElement {
            value: v,
            modulus: self.modulus,
        })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// Dense row-major matrix over GF(p). Entries are stored as reduced
/// representatives sharing the single modulus of the matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    modulus: u32,
    data: Vec<u32>,
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FieldMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl FieldMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: u32) -> Result<Self> {
        check_prime(modulus)?;
        Ok(FieldMatrix {
            rows,
            cols,
            modulus,
            data: vec![0; rows * cols],
        })
    }

    pub fn identity(size: usize, modulus: u32) -> Result<Self> {
        let mut m = Self::zeros(size, size, modulus)?;
        for i in 0..size {
            m.data[i * size + i] = 1;
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries; every entry must already lie in `[0, p)`.
    pub fn new(rows: usize, cols: usize, modulus: u32, data: Vec<u32>) -> Result<Self> {
        check_prime(modulus)?;
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        if let Some(bad) = data.iter().find(|&&v| v >= modulus) {
            return Err(Error::InvalidParameter(format!(
                "entry {bad} not in [0, {modulus})"
            )));
        }
        Ok(FieldMatrix {
            rows,
            cols,
            modulus,
            data,
        })
    }

    pub fn from_rows(rows: &[Vec<u32>], modulus: u32) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(rows.len(), cols, modulus, rows.concat())
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<u32>], height: usize, modulus: u32) -> Result<Self> {
        let mut m = Self::zeros(height, columns.len(), modulus)?;
        for (j, col) in columns.iter().enumerate() {
            if col.len() != height {
                return Err(Error::DimensionMismatch(format!(
                    "column {} has length {}, expected {}",
                    j,
                    col.len(),
                    height
                )));
            }
            for (i, &v) in col.iter().enumerate() {
                if v >= modulus {
                    return Err(Error::InvalidParameter(format!(
                        "entry {v} not in [0, {modulus})"
                    )));
                }
                m.data[i * m.cols + j] = v;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn element(&self, r: usize, c: usize) -> FieldElement {
        FieldElement {
            value: self.get(r, c),
            modulus: self.modulus,
        }
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.modulus;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> FieldMatrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            for &c in cols {
                data.push(self.get(r, c));
            }
        }
        FieldMatrix {
            rows: self.rows,
            cols: cols.len(),
            modulus: self.modulus,
            data,
        }
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c));
            }
        }
        FieldMatrix {
            rows: self.cols,
            cols: self.rows,
            modulus: self.modulus,
            data,
        }
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.modulus as u64;
        let mut out = FieldMatrix::zeros(self.rows, other.cols, self.modulus)?;
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0u64;
                for t in 0..self.cols {
                    acc = (acc + self.get(i, t) as u64 * other.get(t, j) as u64) % p;
                }
                out.data[i * other.cols + j] = acc as u32;
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `x · M`.
    pub fn left_mul_vec(&self, x: &[u32]) -> Result<Vec<u32>> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                x.len(),
                self.rows
            )));
        }
        let p = self.modulus as u64;
        let mut out = vec![0u64; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            if xr == 0 {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = (*o + xr as u64 * self.get(r, c) as u64) % p;
            }
        }
        Ok(out.into_iter().map(|v| v as u32).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(FieldMatrix {
            rows: self.rows,
            cols,
            modulus: self.modulus,
            data,
        })
    }

    /// Reduced row echelon form over GF(p). Pivots are normalized to 1.
    pub fn rref(&self) -> Rref {
        let p = self.modulus;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(pr) = (lead..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            if pr != lead {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, lead * m.cols + j);
                }
            }
            let inv = inv_mod(m.get(lead, c), p).expect("nonzero pivot");
            for j in 0..m.cols {
                let v = mul_mod(m.get(lead, j), inv, p);
                m.data[lead * m.cols + j] = v;
            }
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let f = m.get(r, c);
                if f == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = sub_mod(m.get(r, j), mul_mod(f, m.get(lead, j), p), p);
                    m.data[r * m.cols + j] = v;
                }
            }
            pivots.push(c);
            lead += 1;
        }
        let rank = pivots.len();
        Rref {
            matrix: m,
            pivots,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Solves `self · x = target`, returning one solution when the target lies
    /// in the column span.
    pub fn in_span(&self, target: &[u32]) -> Result<Option<Vec<u32>>> {
        if target.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "target of length {} against {} rows",
                target.len(),
                self.rows
            )));
        }
        let p = self.modulus;
        let t: Vec<u32> = target.iter().map(|&v| v % p).collect();
        let aug = self.hstack(&FieldMatrix {
            rows: self.rows,
            cols: 1,
            modulus: p,
            data: t,
        })?;
        let red = aug.rref();
        if red.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u32; self.cols];
        for (row, &pc) in red.pivots.iter().enumerate() {
            x[pc] = red.matrix.get(row, self.cols);
        }
        Ok(Some(x))
    }

    /// Basis (as rows) of the right null space `{x : self · x = 0}`.
    pub fn null_space(&self) -> FieldMatrix {
        let p = self.modulus;
        let red = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !red.pivots.contains(c)).collect();
        let mut out = FieldMatrix {
            rows: free.len(),
            cols: self.cols,
            modulus: p,
            data: vec![0; free.len() * self.cols],
        };
        for (b, &f) in free.iter().enumerate() {
            out.data[b * self.cols + f] = 1;
            for (row, &pc) in red.pivots.iter().enumerate() {
                let v = sub_mod(0, red.matrix.get(row, f), p);
                out.data[b * self.cols + pc] = v;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fe(v: u32, p: u32) -> FieldElement {
        FieldElement::new(v, p).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(fe(1, 2).add(fe(1, 2)).unwrap().value(), 0);
        assert_eq!(fe(2, 3).mul(fe(2, 3)).unwrap().value(), 1);
        assert_eq!(fe(0, 5).sub(fe(1, 5)).unwrap().value(), 4);
        assert!(matches!(
            fe(1, 3).add(fe(1, 5)),
            Err(Error::ModulusMismatch(3, 5))
        ));
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(matches!(FieldElement::new(1, 4), Err(Error::NotPrime(4))));
        assert!(FieldMatrix::zeros(2, 2, 9).is_err());
    }

    #[test]
    fn inverses() {
        assert_eq!(fe(1, 2).inverse().unwrap().value(), 1);
        assert_eq!(fe(2, 3).inverse().unwrap().value(), 2);
        assert_eq!(fe(3, 7).inverse().unwrap().value(), 5);
        assert!(matches!(fe(0, 7).inverse(), Err(Error::NoInverse)));
    }

    #[test]
    fn rref_identity_and_duplicate_rows() {
        let id = FieldMatrix::identity(3, 2).unwrap();
        let red = id.rref();
        assert_eq!(red.matrix, id);
        assert_eq!(red.pivots, vec![0, 1, 2]);
        assert_eq!(red.rank, 3);

        let dup = FieldMatrix::from_rows(&[vec![1, 0, 1], vec![1, 0, 1], vec![0, 1, 1]], 2).unwrap();
        let red = dup.rref();
        assert_eq!(red.rank, 2);
        assert!(red.matrix.row(2).iter().all(|&v| v == 0));
    }

    #[test]
    fn in_span_examples() {
        let e1 = FieldMatrix::from_columns(&[vec![1, 0]], 2, 2).unwrap();
        assert_eq!(e1.in_span(&[1, 0]).unwrap(), Some(vec![1]));
        assert_eq!(e1.in_span(&[0, 1]).unwrap(), None);
        let e12 = FieldMatrix::from_columns(&[vec![1, 0], vec![0, 1]], 2, 2).unwrap();
        assert_eq!(e12.in_span(&[1, 1]).unwrap(), Some(vec![1, 1]));
        assert!(e12.in_span(&[1]).is_err());
    }

    #[test]
    fn null_space_annihilates() {
        let m = FieldMatrix::from_rows(&[vec![1, 2, 0, 1], vec![0, 1, 1, 2]], 3).unwrap();
        let ns = m.null_space();
        assert_eq!(ns.rows(), 2);
        assert!(m.mul(&ns.transpose()).unwrap().is_zero());
        assert_eq!(ns.rank(), 2);
    }

    fn small_matrix() -> impl Strategy<Value = FieldMatrix> {
        (prop_oneof![Just(2u32), Just(3u32)], 1usize..5, 1usize..6).prop_flat_map(|(p, r, c)| {
            proptest::collection::vec(0..p, r * c)
                .prop_map(move |d| FieldMatrix::new(r, c, p, d).unwrap())
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(m in small_matrix()) {
            let once = m.rref();
            let twice = once.matrix.rref();
            prop_assert_eq!(&once.matrix, &twice.matrix);
            prop_assert_eq!(once.rank, twice.rank);
        }

        #[test]
        fn in_span_agrees_with_rank(m in small_matrix(), seed in any::<u64>()) {
            let p = m.modulus();
            let target: Vec<u32> = (0..m.rows())
                .map(|i| ((seed >> (3 * i)) as u32) % p)
                .collect();
            let aug = m.hstack(&FieldMatrix::from_columns(&[target.clone()], m.rows(), p).unwrap()).unwrap();
            let solvable = m.rank() == aug.rank();
            let sol = m.in_span(&target).unwrap();
            prop_assert_eq!(sol.is_some(), solvable);
            if let Some(x) = sol {
                let col = FieldMatrix::from_columns(&[x], m.cols(), p).unwrap();
                let back = m.mul(&col).unwrap();
                prop_assert_eq!(back.column(0), target);
            }
        }
    }
}
