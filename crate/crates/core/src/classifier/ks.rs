//! Two-sample Kolmogorov–Smirnov test with the asymptotic p-value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_SAMPLE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// `D = sup |F_x − F_y|` and `p = Q_KS(D·√(mn/(m+n)))`.
pub fn ks_two_sample(x: &[f64], y: &[f64]) -> Result<KsResult> {
    if x.len() < MIN_SAMPLE || y.len() < MIN_SAMPLE {
        return Err(Error::validation(format!(
            "KS test needs at least {MIN_SAMPLE} values per sample (got {} and {})",
            x.len(),
            y.len()
        )));
    }
    if x.iter().chain(y).any(|v| v.is_nan()) {
        return Err(Error::validation("KS samples contain NaN"));
    }
    let statistic = ks_statistic(x, y);
    let (m, n) = (x.len() as f64, y.len() as f64);
    let lambda = statistic * (m * n / (m + n)).sqrt();
    Ok(KsResult { statistic, p_value: kolmogorov_survival(lambda) })
}

/// Largest ECDF gap, evaluated after each distinct value (ties advance both).
pub fn ks_statistic(x: &[f64], y: &[f64]) -> f64 {
    let mut a = x.to_vec();
    let mut b = y.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (m, n) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] == v {
            i += 1;
        }
        while j < b.len() && b[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / m - j as f64 / n).abs());
    }
    d
}

/// Kolmogorov survival function `Q(λ) = 2 Σ_{k≥1} (−1)^{k−1} e^{−2k²λ²}`.
///
/// For `λ < 1.18` the alternating series converges slowly, so the
/// equivalent Jacobi-theta form `1 − (√(2π)/λ) Σ e^{−(2k−1)²π²/(8λ²)}` is
/// summed instead.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return 1.0;
    }
    let p = if lambda < 1.18 {
        let c = -std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
        let mut s = 0.0;
        for k in 1..=100u32 {
            let odd = f64::from(2 * k - 1);
            let term = (c * odd * odd).exp();
            s += term;
            if term <= 1e-16 * s {
                break;
            }
        }
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s
    } else {
        let mut s = 0.0;
        let mut sign = 1.0;
        for k in 1..=100u32 {
            let kf = f64::from(k);
            let term = sign * 2.0 * (-2.0 * kf * kf * lambda * lambda).exp();
            s += term;
            if term.abs() <= 1e-8 * s.abs() || term.abs() < 1e-300 {
                break;
            }
            sign = -sign;
        }
        s
    };
    p.clamp(0.0, 1.0)
}
