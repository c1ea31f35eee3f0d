//! Grid sampling of 2D/3D cross-sections of the region, for plotting.

use std::io::Write;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::SrrInstance;
use crate::error::{Error, Result};
use crate::exactmath::Rational;

/// Largest number of grid points a single slice may request.
pub const MAX_SLICE_POINTS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct SliceSpec {
    /// 0-based symbols held at fixed rates.
    pub fixed: Vec<(usize, Rational)>,
    /// 0-based symbols swept over `0, step, 2·step, …, ≤ max`.
    pub axes: Vec<usize>,
    pub max: Rational,
    pub step: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlicePoint {
    /// Coordinates along the axes, in axis order.
    pub coords: Vec<Rational>,
    pub member: bool,
}

impl SliceSpec {
    fn validate(&self, k: usize) -> Result<usize> {
        if self.axes.is_empty() || self.axes.len() > 3 {
            return Err(Error::InvalidParameter("a slice needs 1 to 3 axes".into()));
        }
        if !self.step.is_positive() {
            return Err(Error::InvalidParameter("step must be positive".into()));
        }
        if self.max.is_negative() {
            return Err(Error::InvalidParameter("max must be non-negative".into()));
        }
        let mut used: Vec<usize> = self.axes.clone();
        for (i, x) in &self.fixed {
            if x.is_negative() {
                return Err(Error::InvalidParameter(format!("fixed rate {x} is negative")));
            }
            used.push(*i);
        }
        for &i in &used {
            if i >= k {
                return Err(Error::IndexOutOfRange { index: i + 1, bound: k });
            }
        }
        let mut sorted = used.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != used.len() {
            return Err(Error::InvalidParameter("a symbol appears twice among axes and fixed values".into()));
        }
        let per_axis = (&self.max / &self.step).floor().to_integer();
        let per_axis: usize = usize::try_from(per_axis + 1)
            .map_err(|_| Error::SearchLimit("slice grid too large".into()))?;
        let total = per_axis
            .checked_pow(self.axes.len() as u32)
            .filter(|&t| t <= MAX_SLICE_POINTS)
            .ok_or_else(|| Error::SearchLimit(format!("slice grid exceeds {MAX_SLICE_POINTS} points")))?;
        Ok(total)
    }
}

/// Membership of every grid point, in row-major order (last axis fastest).
/// Symbols that are neither axes nor fixed are held at zero.
pub fn slice(instance: &SrrInstance, spec: &SliceSpec) -> Result<Vec<SlicePoint>> {
    let total = spec.validate(instance.k())?;
    let ticks: Vec<Rational> = std::iter::successors(Some(Rational::zero()), |x| Some(x + &spec.step))
        .take_while(|x| *x <= spec.max)
        .collect();
    let dims = spec.axes.len();
    (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut coords = vec![Rational::zero(); dims];
            let mut rest = idx;
            for d in (0..dims).rev() {
                coords[d] = ticks[rest % ticks.len()].clone();
                rest /= ticks.len();
            }
            let mut demand = vec![Rational::zero(); instance.k()];
            for (i, x) in &spec.fixed {
                demand[*i] = x.clone();
            }
            for (&axis, x) in spec.axes.iter().zip(&coords) {
                demand[axis] = x.clone();
            }
            let member = instance.membership(&demand)?.member;
            Ok(SlicePoint { coords, member })
        })
        .collect()
}

/// CSV with one column per axis (named by `labels`) plus `member`.
pub fn write_slice_csv<W: Write>(out: &mut W, labels: &[String], points: &[SlicePoint]) -> std::io::Result<()> {
    let mut header: Vec<String> = labels.iter().map(|l| format!("lambda_{l}")).collect();
    header.push("member".into());
    writeln!(out, "{}", header.join(","))?;
    for p in points {
        let mut row: Vec<String> = p.coords.iter().map(ToString::to_string).collect();
        row.push(p.member.to_string());
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::catalog;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn two_dimensional_slice() {
        let inst = SrrInstance::from_code(catalog::ham32_natural()).unwrap();
        let spec = SliceSpec {
            fixed: vec![(2, q(0, 1)), (3, q(0, 1))],
            axes: vec![0, 1],
            max: q(3, 1),
            step: q(1, 1),
        };
        let points = slice(&inst, &spec).unwrap();
        assert_eq!(points.len(), 16);
        for p in &points {
            // Pairs obey λ_a + λ_b ≤ 3 and nothing else on this face.
            assert_eq!(p.member, &p.coords[0] + &p.coords[1] <= q(3, 1), "{:?}", p.coords);
        }
        let mut buf = Vec::new();
        write_slice_csv(&mut buf, &["a".into(), "b".into()], &points).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("lambda_a,lambda_b,member"));
        assert_eq!(lines.next(), Some("0,0,true"));
        assert_eq!(text.lines().count(), 17);
    }

    #[test]
    fn fractional_step() {
        let inst = SrrInstance::from_code(catalog::ham32_natural()).unwrap();
        let spec = SliceSpec {
            fixed: vec![],
            axes: vec![3],
            max: q(3, 1),
            step: q(1, 4),
        };
        let points = slice(&inst, &spec).unwrap();
        assert_eq!(points.len(), 13);
        assert!(points.iter().all(|p| p.member));
        assert_eq!(points[5].coords, vec![q(5, 4)]);
    }

    #[test]
    fn invalid_specs() {
        let inst = SrrInstance::from_code(catalog::ham32_natural()).unwrap();
        let base = SliceSpec {
            fixed: vec![],
            axes: vec![0, 1],
            max: q(1, 1),
            step: q(1, 2),
        };
        let mut s = base.clone();
        s.step = q(0, 1);
        assert!(slice(&inst, &s).is_err());
        let mut s = base.clone();
        s.axes = vec![0, 0];
        assert!(slice(&inst, &s).is_err());
        let mut s = base.clone();
        s.fixed = vec![(1, q(1, 1))];
        assert!(slice(&inst, &s).is_err());
        let mut s = base.clone();
        s.axes = vec![4];
        assert!(slice(&inst, &s).is_err());
        let mut s = base;
        s.step = q(1, 100_000);
        assert!(matches!(slice(&inst, &s), Err(Error::SearchLimit(_))));
    }
}
