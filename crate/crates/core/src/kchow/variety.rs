use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `P^{n_1} x ... x P^{n_k}`; no factors is the point `Spec k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModelVariety {
    factors: Vec<u32>,
}

impl ModelVariety {
    pub fn new(factors: &[u32]) -> Self {
        ModelVariety { factors: factors.to_vec() }
    }

    pub fn point() -> Self {
        ModelVariety { factors: Vec::new() }
    }

    pub fn projective(n: u32) -> Self {
        ModelVariety { factors: vec![n] }
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn dim(&self) -> u32 {
        self.factors.iter().sum()
    }

    pub fn product(&self, other: &ModelVariety) -> ModelVariety {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        ModelVariety { factors }
    }

    /// All index tuples `I` with `0 ≤ i_j ≤ n_j`, in mixed-radix order.
    pub fn basis(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for &n in &self.factors {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=n).map(move |i| {
                        let mut v = prefix.clone();
                        v.push(i);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// Every product of positive-dimensional projective spaces (factors in
    /// non-increasing order) of total dimension at most `max_dim`, starting
    /// with the point.
    pub fn all_up_to_dim(max_dim: u32) -> Vec<ModelVariety> {
        fn partitions(rest: u32, largest: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            out.push(prefix.clone());
            for part in (1..=largest.min(rest)).rev() {
                prefix.push(part);
                partitions(rest - part, part, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        partitions(max_dim, max_dim, &mut Vec::new(), &mut out);
        let mut vs: Vec<ModelVariety> = out.into_iter().map(|f| ModelVariety { factors: f }).collect();
        vs.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| b.factors.cmp(&a.factors)));
        vs
    }
}

impl fmt::Display for ModelVariety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "point");
        }
        let parts: Vec<String> = self.factors.iter().map(|n| format!("P{n}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl FromStr for ModelVariety {
    type Err = Error;

    /// `"P2"`, `"P2xP3xP1"`, case-insensitive; `"point"` is the empty product.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "point" {
            return Ok(ModelVariety::point());
        }
        let bad = || Error::BadVariety(s.to_string());
        let factors = t
            .split('x')
            .map(|part| {
                let part = part.trim();
                let digits = part.strip_prefix('p').ok_or_else(bad)?;
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad());
                }
                digits.parse::<u32>().map_err(|_| bad())
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(ModelVariety { factors })
    }
}
