use crate::error::{Error, Result};

/// First column `t_0, …, t_{K−1}` of the lower-triangular Toeplitz matrix
/// whose exponential carries the conditional coverage.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzEntries {
    pub t: Vec<f64>,
}

impl ToeplitzEntries {
    pub fn new(t: Vec<f64>) -> Self {
        Self { t }
    }

    pub fn order(&self) -> usize {
        self.t.len()
    }
}

/// `‖exp(T_K)‖₁`, i.e. the sum of the first column of the matrix exponential,
/// computed by the recursion `p_0 = e^{t_0}`, `p_i = Σ_{l<i} (i−l)/i · p_l · t_{i−l}`.
pub fn conditional_coverage_toeplitz(entries: &ToeplitzEntries) -> Result<f64> {
    let t = &entries.t;
    if t.is_empty() {
        return Err(Error::Empty("Toeplitz entries"));
    }
    Ok(column_sum(t).clamp(0.0, 1.0))
}

pub(crate) fn column_sum(t: &[f64]) -> f64 {
    let k = t.len();
    let mut p = Vec::with_capacity(k);
    p.push(t[0].exp());
    let mut sum = p[0];
    for i in 1..k {
        let mut acc = 0.0;
        for l in 0..i {
            acc += (i - l) as f64 * p[l] * t[i - l];
        }
        let pi = acc / i as f64;
        p.push(pi);
        sum += pi;
    }
    sum
}
