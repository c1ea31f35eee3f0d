//! `M_3`: the number of triples of distinct weight-≥2 vectors in `GF(2)^r`
//! that sum to zero, i.e. triples of parity columns of the systematic
//! `Ham(r,2)` data symbols with `v_i + v_j = v_s`.

use crate::error::{Error, Result};

/// Largest `r` accepted by the closed form (keeps every term in `i128`).
pub const M3_MAX_R: usize = 40;
/// Largest `r` accepted by the quadratic brute force.
pub const M3_BRUTE_MAX_R: usize = 14;

fn check_r(r: usize, max: usize) -> Result<()> {
    if r < 3 {
        return Err(Error::InvalidParameter(format!("M3 needs r >= 3, got {r}")));
    }
    if r > max {
        return Err(Error::SearchLimit(format!("M3 supports r <= {max}, got {r}")));
    }
    Ok(())
}

/// `(C(2^r − 1 − r, 2) − r·2^(r−1) + r²) / 3`.
pub fn m3_closed_form(r: usize) -> Result<u128> {
    check_r(r, M3_MAX_R)?;
    let r = r as i128;
    let m = (1i128 << r) - 1 - r;
    let value = (m * (m - 1) / 2 - r * (1i128 << (r - 1)) + r * r) / 3;
    Ok(value as u128)
}

/// Counts unordered pairs of distinct weight-≥2 vectors whose sum also has
/// weight ≥ 2; each zero-sum triple is seen from three pairs.
pub fn m3_brute(r: usize) -> Result<u128> {
    check_r(r, M3_BRUTE_MAX_R)?;
    let heavy: Vec<u32> = (0u32..(1 << r)).filter(|v| v.count_ones() >= 2).collect();
    let mut pairs = 0u64;
    for (a, &u) in heavy.iter().enumerate() {
        for &v in &heavy[a + 1..] {
            if (u ^ v).count_ones() >= 2 {
                pairs += 1;
            }
        }
    }
    debug_assert_eq!(pairs % 3, 0);
    Ok((pairs / 3).into())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts zero-sum triples directly, without the pair trick.
    fn triples(r: usize) -> u128 {
        let heavy: Vec<u32> = (0u32..(1 << r)).filter(|v| v.count_ones() >= 2).collect();
        let mut count = 0;
        for a in 0..heavy.len() {
            for b in a + 1..heavy.len() {
                for c in b + 1..heavy.len() {
                    if heavy[a] ^ heavy[b] ^ heavy[c] == 0 {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn small_values() {
        assert_eq!(m3_brute(3).unwrap(), 1);
        assert_eq!(m3_brute(4).unwrap(), 13);
        assert_eq!(m3_brute(5).unwrap(), 90);
        for r in 3..=6 {
            assert_eq!(m3_brute(r).unwrap(), triples(r));
        }
    }

    #[test]
    fn closed_form_agrees() {
        for r in 3..=10 {
            assert_eq!(m3_closed_form(r).unwrap(), m3_brute(r).unwrap(), "r = {r}");
        }
    }

    #[test]
    fn bad_r() {
        assert!(m3_closed_form(2).is_err());
        assert!(m3_brute(0).is_err());
        assert!(matches!(m3_brute(20), Err(Error::SearchLimit(_))));
        assert!(m3_closed_form(M3_MAX_R).is_ok());
    }
}
