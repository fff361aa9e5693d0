//! Reflexive Hodge numbers `h^{[p],0}` of a symmetric square and the
//! irreducible-symplectic pattern test.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HodgeError {
    #[error("expected a vector of length {expected}, got {found}")]
    BadLength { expected: usize, found: usize },
}

/// `h^{[p],0}` for `p = 0, …, top degree`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HodgeVector {
    pub dims: Vec<u64>,
}

impl HodgeVector {
    pub fn new(dims: Vec<u64>) -> Self {
        Self { dims }
    }

    fn expect_len(&self, n: usize) -> Result<(), HodgeError> {
        if self.dims.len() != n {
            return Err(HodgeError::BadLength {
                expected: n,
                found: self.dims.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for HodgeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Swap-invariant part of `H ⊗ H` in each degree: the swap acts on the
/// `(i,0) ⊗ (j,0)` block with sign `(-1)^{ij}`, so diagonal blocks
/// contribute `Sym²` in even degree and `Λ²` in odd degree.
pub fn symmetric_square_hodge(h: &HodgeVector) -> Result<HodgeVector, HodgeError> {
    h.expect_len(3)?;
    let h = &h.dims;
    let dims = (0..=4)
        .map(|p| {
            let mut total = 0;
            for i in 0..=2usize {
                let j = p as isize - i as isize;
                if j > i as isize && j <= 2 {
                    total += h[i] * h[j as usize];
                }
            }
            if p % 2 == 0 {
                let x = h[p / 2];
                total += if (p / 2) % 2 == 0 {
                    x * (x + 1) / 2
                } else {
                    x * x.saturating_sub(1) / 2
                };
            }
            total
        })
        .collect();
    Ok(HodgeVector { dims })
}

/// Dimensions of `C[σ]` with `σ` in degree 2, truncated at degree 4.
pub fn isv_pattern_check(h: &HodgeVector) -> Result<bool, HodgeError> {
    h.expect_len(5)?;
    Ok(h.dims == [1, 0, 1, 0, 1])
}

/// `h¹(O) = 0` and a unique 2-form.
pub fn isv_surface_check(h: &HodgeVector) -> Result<bool, HodgeError> {
    h.expect_len(3)?;
    Ok(h.dims == [1, 0, 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(v: [u64; 3]) -> Vec<u64> {
        symmetric_square_hodge(&HodgeVector::new(v.to_vec()))
            .unwrap()
            .dims
    }

    #[test]
    fn examples() {
        assert_eq!(sq([1, 0, 1]), vec![1, 0, 1, 0, 1]);
        assert_eq!(sq([1, 2, 1]), vec![1, 2, 2, 2, 1]);
        assert_eq!(sq([1, 0, 0]), vec![1, 0, 0, 0, 0]);
        assert!(symmetric_square_hodge(&HodgeVector::new(vec![1, 0])).is_err());
    }

    #[test]
    fn pattern_checks() {
        let v = |d: &[u64]| HodgeVector::new(d.to_vec());
        assert!(isv_pattern_check(&v(&[1, 0, 1, 0, 1])).unwrap());
        assert!(!isv_pattern_check(&v(&[1, 2, 2, 2, 1])).unwrap());
        assert!(!isv_pattern_check(&v(&[1, 0, 1, 0, 0])).unwrap());
        assert!(isv_pattern_check(&v(&[1, 0, 1])).is_err());
        assert!(isv_surface_check(&v(&[1, 0, 1])).unwrap());
        assert!(!isv_surface_check(&v(&[1, 1, 1])).unwrap());
        assert!(!isv_surface_check(&v(&[1, 0, 2])).unwrap());
    }
}
