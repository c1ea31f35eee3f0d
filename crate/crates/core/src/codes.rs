//! q-ary Hamming codes: parity-check construction, systematic and imported
//! generator matrices, dual (simplex) codeword enumeration.
//!
//! Indices are 0-based throughout the library API; the JSON file format and
//! the CLI use 1-based positions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{is_prime, FieldMatrix};

/// Brute-force minimum distance is computed only when at most this many
/// codewords must be enumerated.
pub const DEFAULT_DISTANCE_CAP: u64 = 1 << 20;

/// A minimum distance, either enumerated or taken from the closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distance {
    pub value: usize,
    /// True when the value comes from the closed form rather than enumeration.
    pub assumed: bool,
}

/// Column ordering for systematic constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ColumnOrder {
    /// `G = [I_k | P]`, `H = [-Pᵀ | I_r]`.
    #[default]
    Standard,
    /// `H` keeps the natural order of [`build_parity_check`]; the systematic
    /// columns of `G` sit at the non-unit columns of `H`.
    Natural,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    pub entries: Vec<u32>,
    pub support: Vec<usize>,
}

impl Codeword {
    pub fn new(entries: Vec<u32>) -> Self {
        let support = entries
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, _)| i)
            .collect();
        Codeword { entries, support }
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }
}

/// A q-ary Hamming code together with a chosen generator matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    q: u32,
    r: usize,
    n: usize,
    k: usize,
    generator: FieldMatrix,
    parity_check: FieldMatrix,
    systematic_columns: Vec<Option<usize>>,
    d: Distance,
    d_dual: Distance,
}

fn pow_u64(base: u64, exp: usize) -> u64 {
    (0..exp).fold(1u64, |acc, _| acc.saturating_mul(base))
}

/// Hamming length `(q^r - 1) / (q - 1)`.
pub fn hamming_length(r: usize, q: u32) -> usize {
    ((pow_u64(q as u64, r) - 1) / (q as u64 - 1)) as usize
}

fn check_params(r: usize, q: u32) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("r must be at least 2, got {r}")));
    }
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if pow_u64(q as u64, r) > 1 << 24 {
        return Err(Error::InvalidParameter(format!(
            "Ham({r},{q}) is too large for this tool"
        )));
    }
    Ok(())
}

/// Parity-check matrix of Ham(r, q): one column per 1-dimensional subspace of
/// GF(q)^r, normalized so the first nonzero entry is 1, in lexicographic
/// (base-q, most significant digit in row 1) order. For q = 2 column `i`
/// (1-based) is the binary expansion of `i`.
pub fn build_parity_check(r: usize, q: u32) -> Result<FieldMatrix> {
    check_params(r, q)?;
    let total = pow_u64(q as u64, r);
    let mut columns = Vec::with_capacity(hamming_length(r, q));
    for value in 1..total {
        let mut digits = vec![0u32; r];
        let mut v = value;
        for row in (0..r).rev() {
            digits[row] = (v % q as u64) as u32;
            v /= q as u64;
        }
        if digits.iter().find(|&&d| d != 0) == Some(&1) {
            columns.push(digits);
        }
    }
    FieldMatrix::from_columns(&columns, r, q)
}

/// Normalizes a vector so its first nonzero entry is 1. Returns `None` for
/// the zero vector.
fn normalize(v: &[u32], q: u32) -> Option<Vec<u32>> {
    let lead = *v.iter().find(|&&x| x != 0)?;
    let inv = crate::exactmath::FieldElement::new(lead, q)
        .and_then(|e| e.inverse())
        .ok()?
        .value();
    Some(
        v.iter()
            .map(|&x| ((x as u64 * inv as u64) % q as u64) as u32)
            .collect(),
    )
}

fn unit_row(column: &[u32]) -> Option<usize> {
    let mut nz = column.iter().enumerate().filter(|(_, &v)| v != 0);
    let (i, _) = nz.next()?;
    if nz.next().is_some() {
        None
    } else {
        Some(i)
    }
}

/// Systematic Ham(r, q) in standard form `[I_k | P]`.
pub fn systematic_hamming(r: usize, q: u32) -> Result<LinearCode> {
    systematic_hamming_ordered(r, q, ColumnOrder::Standard)
}

/// Systematic Ham(r, q) with a chosen column order.
pub fn systematic_hamming_ordered(r: usize, q: u32, order: ColumnOrder) -> Result<LinearCode> {
    let natural = build_parity_check(r, q)?;
    let n = natural.cols();
    let k = n - r;
    let mut unit_cols = vec![usize::MAX; r];
    let mut data_cols = Vec::with_capacity(k);
    for c in 0..n {
        match unit_row(&natural.column(c)) {
            Some(row) => unit_cols[row] = c,
            None => data_cols.push(c),
        }
    }
    // Placement of each natural column in the final layout.
    let (h, data_pos, unit_pos): (FieldMatrix, Vec<usize>, Vec<usize>) = match order {
        ColumnOrder::Standard => {
            let mut perm = data_cols.clone();
            perm.extend_from_slice(&unit_cols);
            (
                natural.select_columns(&perm),
                (0..k).collect(),
                (k..n).collect(),
            )
        }
        ColumnOrder::Natural => (natural.clone(), data_cols.clone(), unit_cols.clone()),
    };
    let mut g = FieldMatrix::zeros(k, n, q)?;
    for (s, &pos) in data_pos.iter().enumerate() {
        g.set(s, pos, 1);
        for (row, &upos) in unit_pos.iter().enumerate() {
            let a = h.get(row, pos);
            g.set(s, upos, (q - a) % q);
        }
    }
    LinearCode::from_matrices(g, Some(h), DEFAULT_DISTANCE_CAP)
}

/// Imports a generator matrix given as integer rows over GF(q).
pub fn import_generator(rows: &[Vec<u32>], q: u32) -> Result<LinearCode> {
    let g = FieldMatrix::from_rows(rows, q)?;
    LinearCode::from_matrices(g, None, DEFAULT_DISTANCE_CAP)
}

impl LinearCode {
    /// Validates `generator` (and `parity_check` if supplied) as a Hamming
    /// code. Without a parity check, one is computed as a null-space basis.
    pub fn from_matrices(
        generator: FieldMatrix,
        parity_check: Option<FieldMatrix>,
        distance_cap: u64,
    ) -> Result<Self> {
        let q = generator.modulus();
        let k = generator.rows();
        let n = generator.cols();
        if k == 0 || n <= k {
            return Err(Error::InvalidParameter(format!(
                "generator must be k x n with 0 < k < n, got {k} x {n}"
            )));
        }
        let rank = generator.rank();
        if rank != k {
            return Err(Error::RankDeficient { rank, expected: k });
        }
        let r = n - k;
        if r < 2 || pow_u64(q as u64, r) > 1 << 24 || hamming_length(r, q) != n {
            return Err(Error::NotHamming(format!(
                "length {n} with redundancy {r} is not a Hamming length over GF({q})"
            )));
        }
        let h = match parity_check {
            Some(h) => {
                if h.modulus() != q {
                    return Err(Error::ModulusMismatch(q, h.modulus()));
                }
                if h.rows() != r || h.cols() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "parity check is {}x{}, expected {}x{}",
                        h.rows(),
                        h.cols(),
                        r,
                        n
                    )));
                }
                if h.rank() != r {
                    return Err(Error::RankDeficient {
                        rank: h.rank(),
                        expected: r,
                    });
                }
                if !generator.mul(&h.transpose())?.is_zero() {
                    return Err(Error::InvalidParameter(
                        "generator times parity-check transpose is nonzero".into(),
                    ));
                }
                h
            }
            None => generator.null_space(),
        };
        let mut seen = std::collections::HashSet::new();
        for c in 0..n {
            let col = normalize(&h.column(c), q).ok_or_else(|| {
                Error::NotHamming(format!("column {} of the parity check is zero", c + 1))
            })?;
            if !seen.insert(col) {
                return Err(Error::NotHamming(format!(
                    "column {} of the parity check is a multiple of an earlier column",
                    c + 1
                )));
            }
        }
        let systematic_columns = (0..k)
            .map(|i| {
                (0..n).find(|&c| {
                    let col = generator.column(c);
                    unit_row(&col) == Some(i)
                })
            })
            .collect();

        let d = match min_weight_enumerated(&generator, distance_cap) {
            Some(w) => Distance {
                value: w,
                assumed: false,
            },
            None => Distance {
                value: 3,
                assumed: true,
            },
        };
        let d_dual = match min_weight_enumerated(&h, distance_cap) {
            Some(w) => Distance {
                value: w,
                assumed: false,
            },
            None => Distance {
                value: pow_u64(q as u64, r - 1) as usize,
                assumed: true,
            },
        };
        Ok(LinearCode {
            q,
            r,
            n,
            k,
            generator,
            parity_check: h,
            systematic_columns,
            d,
            d_dual,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn generator(&self) -> &FieldMatrix {
        &self.generator
    }
    pub fn parity_check(&self) -> &FieldMatrix {
        &self.parity_check
    }
    pub fn d(&self) -> Distance {
        self.d
    }
    pub fn d_dual(&self) -> Distance {
        self.d_dual
    }

    /// Per data symbol, the first generator column that is a nonzero
    /// multiple of the matching unit vector, if any.
    pub fn systematic_columns(&self) -> &[Option<usize>] {
        &self.systematic_columns
    }

    /// All k systematic positions, present only when every data symbol has one.
    pub fn systematic_positions(&self) -> Option<Vec<usize>> {
        self.systematic_columns.iter().copied().collect()
    }

    pub fn is_systematic(&self) -> bool {
        self.systematic_columns.iter().all(Option::is_some)
    }

    pub fn systematic_column_count(&self) -> usize {
        self.systematic_columns.iter().flatten().count()
    }

    /// `q^(r-1)`: weight of every nonzero dual codeword.
    pub fn simplex_weight(&self) -> usize {
        pow_u64(self.q as u64, self.r - 1) as usize
    }

    /// Every codeword of the dual (simplex) code, zero word first, in the
    /// order of base-q message vectors over the parity-check rows.
    pub fn dual_codewords(&self) -> Vec<Codeword> {
        let q = self.q;
        let total = pow_u64(q as u64, self.r);
        let mut out = Vec::with_capacity(total as usize);
        let mut msg = vec![0u32; self.r];
        for _ in 0..total {
            let word = self
                .parity_check
                .left_mul_vec(&msg)
                .expect("message length matches");
            out.push(Codeword::new(word));
            for digit in msg.iter_mut().rev() {
                *digit += 1;
                if *digit < q {
                    break;
                }
                *digit = 0;
            }
        }
        out
    }

    /// Dual codewords whose coordinate `i` equals 1.
    pub fn codewords_with_unit_at(&self, i: usize) -> Result<Vec<Codeword>> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange {
                index: i + 1,
                bound: self.n,
            });
        }
        Ok(self
            .dual_codewords()
            .into_iter()
            .filter(|c| c.entries[i] == 1)
            .collect())
    }

    /// Number of generator columns with odd Hamming weight (binary only).
    pub fn odd_weight_column_count(&self) -> Result<usize> {
        if self.q != 2 {
            return Err(Error::NotBinary(self.q));
        }
        Ok((0..self.n)
            .filter(|&c| self.generator.column(c).iter().filter(|&&v| v != 0).count() % 2 == 1)
            .count())
    }

    pub fn to_file(&self) -> CodeFile {
        CodeFile {
            q: self.q,
            r: Some(self.r),
            n: Some(self.n),
            k: Some(self.k),
            generator: self.generator.to_rows(),
            parity_check: Some(self.parity_check.to_rows()),
            systematic_positions: self
                .systematic_positions()
                .map(|v| v.into_iter().map(|p| p + 1).collect()),
        }
    }

    pub fn from_file(file: &CodeFile) -> Result<Self> {
        let g = FieldMatrix::from_rows(&file.generator, file.q)?;
        let h = file
            .parity_check
            .as_ref()
            .map(|rows| FieldMatrix::from_rows(rows, file.q))
            .transpose()?;
        let code = LinearCode::from_matrices(g, h, DEFAULT_DISTANCE_CAP)?;
        let declared = [("r", file.r, code.r), ("n", file.n, code.n), ("k", file.k, code.k)];
        for (name, given, actual) in declared {
            if let Some(v) = given {
                if v != actual {
                    return Err(Error::InvalidParameter(format!(
                        "declared {name} = {v} but the matrices give {actual}"
                    )));
                }
            }
        }
        if let Some(pos) = &file.systematic_positions {
            let actual = code.systematic_positions().map(|v| v.into_iter().map(|p| p + 1).collect());
            if Some(pos) != actual.as_ref() {
                return Err(Error::InvalidParameter(
                    "declared systematic_positions do not match the generator".into(),
                ));
            }
        }
        Ok(code)
    }
}

/// Minimum nonzero weight of the row space of `m`, or `None` when the row
/// space has more than `cap` elements.
fn min_weight_enumerated(m: &FieldMatrix, cap: u64) -> Option<usize> {
    let q = m.modulus();
    let rows = m.rows();
    let total = pow_u64(q as u64, rows);
    if total > cap {
        return None;
    }
    let n = m.cols();
    let mut word = vec![0u32; n];
    let mut msg = vec![0u32; rows];
    let mut best = usize::MAX;
    for _ in 1..total {
        // Odometer step; every digit change adds its row once.
        for i in (0..rows).rev() {
            for (c, w) in word.iter_mut().enumerate() {
                *w = (*w + m.get(i, c)) % q;
            }
            msg[i] += 1;
            if msg[i] < q {
                break;
            }
            msg[i] = 0;
        }
        let wt = word.iter().filter(|&&v| v != 0).count();
        best = best.min(wt);
    }
    Some(best)
}

/// Canonical JSON form of a code. Positions are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub q: u32,
    #[serde(default)]
    pub r: Option<usize>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub k: Option<usize>,
    pub generator: Vec<Vec<u32>>,
    #[serde(default)]
    pub parity_check: Option<Vec<Vec<u32>>>,
    #[serde(default)]
    pub systematic_positions: Option<Vec<usize>>,
}

/// Reference generator matrices for Ham(3, 2).
pub mod catalog {
    use super::*;

    /// Systematic [7,4,3] generator whose parity check lists columns in
    /// binary counting order; data symbols sit at columns 3, 5, 6, 7.
    pub const HAM32_NATURAL: [[u32; 7]; 4] = [
        [1, 1, 1, 0, 0, 0, 0],
        [1, 0, 0, 1, 1, 0, 0],
        [0, 1, 0, 1, 0, 1, 0],
        [1, 1, 0, 1, 0, 0, 1],
    ];

    /// Non-systematic [7,4,3] generator; only symbols 3 and 4 have a
    /// systematic column (7 and 4).
    pub const HAM32_NONSYSTEMATIC: [[u32; 7]; 4] = [
        [1, 1, 0, 0, 1, 1, 0],
        [0, 0, 1, 0, 1, 1, 0],
        [1, 0, 1, 0, 1, 0, 1],
        [0, 1, 1, 1, 1, 0, 0],
    ];

    /// Binary-counting parity check paired with [`HAM32_NATURAL`].
    pub const HAM32_NATURAL_PARITY: [[u32; 7]; 3] = [
        [0, 0, 0, 1, 1, 1, 1],
        [0, 1, 1, 0, 0, 1, 1],
        [1, 0, 1, 0, 1, 0, 1],
    ];

    fn rows<const N: usize, const M: usize>(m: &[[u32; N]; M]) -> Vec<Vec<u32>> {
        m.iter().map(|r| r.to_vec()).collect()
    }

    pub fn ham32_natural() -> LinearCode {
        let g = FieldMatrix::from_rows(&rows(&HAM32_NATURAL), 2).expect("valid");
        let h = FieldMatrix::from_rows(&rows(&HAM32_NATURAL_PARITY), 2).expect("valid");
        LinearCode::from_matrices(g, Some(h), DEFAULT_DISTANCE_CAP).expect("valid Hamming code")
    }

    pub fn ham32_nonsystematic() -> LinearCode {
        import_generator(&rows(&HAM32_NONSYSTEMATIC), 2).expect("valid Hamming code")
    }

    /// Looks up a preset by name.
    pub fn preset(name: &str) -> Option<LinearCode> {
        match name {
            "ham32-natural" => Some(ham32_natural()),
            "ham32-nonsystematic" => Some(ham32_nonsystematic()),
            _ => None,
        }
    }

    pub const PRESET_NAMES: [&str; 2] = ["ham32-natural", "ham32-nonsystematic"];
}
