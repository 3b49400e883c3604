use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Result};

/// Block sizes of a canonical code: `n` physical qubits, `k` logical
/// qubits, `r` independent X-containing checks and `s = n - k - r` Z-only
/// checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeShape {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    /// Whether the genotype carries the diagonal of `M` (S gates).
    pub include_m_diagonal: bool,
    pub css: bool,
}

impl CodeShape {
    pub fn new(n: usize, k: usize, r: usize) -> Result<Self> {
        let shape = CodeShape {
            n,
            k,
            r,
            include_m_diagonal: false,
            css: false,
        };
        shape.validate()?;
        Ok(shape)
    }

    /// General stabiliser shape with `r = n - k`.
    pub fn stabiliser(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(invalid_arg(format!("need 1 <= k < n, got n={n} k={k}")));
        }
        Self::new(n, k, n - k)
    }

    pub fn css(n: usize, k: usize, r: usize) -> Result<Self> {
        let shape = CodeShape {
            n,
            k,
            r,
            include_m_diagonal: false,
            css: true,
        };
        shape.validate()?;
        Ok(shape)
    }

    /// CSS shape with `r = floor((n - k) / 2)`.
    pub fn css_default(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(invalid_arg(format!("need 1 <= k < n, got n={n} k={k}")));
        }
        Self::css(n, k, (n - k) / 2)
    }

    pub fn with_m_diagonal(mut self, include: bool) -> Self {
        self.include_m_diagonal = include && !self.css;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k >= self.n {
            return Err(invalid_arg(format!(
                "need 1 <= k < n, got n={} k={}",
                self.n, self.k
            )));
        }
        if self.r > self.n - self.k {
            return Err(invalid_arg(format!(
                "r={} exceeds n-k={}",
                self.r,
                self.n - self.k
            )));
        }
        if self.css && self.include_m_diagonal {
            return Err(invalid_arg("CSS genotypes carry no M diagonal"));
        }
        Ok(())
    }

    pub fn s(&self) -> usize {
        self.n - self.k - self.r
    }

    pub fn genotype_length(&self) -> usize {
        genotype_length(self)
    }
}

/// Number of genotype bits for a shape.
pub fn genotype_length(shape: &CodeShape) -> usize {
    let CodeShape { n, k, r, .. } = *shape;
    let s = n - k - r;
    if shape.css {
        return k * (n - k) + r * s;
    }
    let diag = if shape.include_m_diagonal { r } else { 0 };
    k * (n - k) + r * (s + k) + r * r.saturating_sub(1) / 2 + diag
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths() {
        assert_eq!(CodeShape::stabiliser(12, 1).unwrap().genotype_length(), 77);
        let five = CodeShape::stabiliser(5, 1).unwrap();
        assert_eq!(five.genotype_length(), 14);
        assert_eq!(five.with_m_diagonal(true).genotype_length(), 18);
        assert_eq!(CodeShape::css(5, 1, 2).unwrap().genotype_length(), 8);
    }

    #[test]
    fn closed_form_for_full_r() {
        for n in 2..=20 {
            for k in 1..n {
                let len = CodeShape::stabiliser(n, k).unwrap().genotype_length();
                assert_eq!(len, (n - k) * (n + 3 * k - 1) / 2);
            }
        }
    }

    #[test]
    fn css_default_r() {
        let s = CodeShape::css_default(12, 1).unwrap();
        assert_eq!((s.r, s.s()), (5, 6));
        assert_eq!(s.genotype_length(), 11 + 30);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(CodeShape::new(3, 3, 0).is_err());
        assert!(CodeShape::new(3, 0, 1).is_err());
        assert!(CodeShape::new(4, 1, 4).is_err());
    }
}
