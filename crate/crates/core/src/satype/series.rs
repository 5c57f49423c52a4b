//! The double series `Σ_d Σ_H B₀·H^{B₄d^N} / (H^{B₁d^N}·d^{B₃d})`.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Converges,
    Diverges,
    Undecided,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesReport {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
    pub n: u32,
    pub d_cut: u32,
    pub h_cut: u64,
    /// Cumulative sums over `d' ≤ d` (and `H ≤ h_cut`), indexed by `d − 1`.
    pub partial_sums: Vec<f64>,
    pub partial_sum: f64,
    /// Bound on everything outside the truncated range; `None` when the
    /// comparison does not apply.
    pub tail_bound: Option<f64>,
    pub verdict: Verdict,
}

fn term(b0: f64, b1: f64, b3: f64, b4: f64, n: u32, d: u32, h: u64) -> f64 {
    let dn = (d as f64).powi(n as i32);
    let df = d as f64;
    b0 * ((b4 - b1) * dn * (h as f64).ln() - b3 * df * df.ln()).exp()
}

/// `Σ_{H > h} H^{−s} ≤ h^{1−s}/(s−1)` for `s > 1`, `h ≥ 1`.
fn zeta_tail(s: f64, h: f64) -> f64 {
    h.powf(1.0 - s) / (s - 1.0)
}

/// Partial sums and a comparison tail. The inner sum over `H` is compared with
/// `ζ((B₁−B₄)d^N)`, the outer sum with `Σ d^{−B₃}` (so `B₃ > 1` is needed).
/// `B₂` enters the counting bound only and is carried for the record.
#[allow(clippy::too_many_arguments)]
pub fn borel_cantelli_tail(b0: f64, b1: f64, b2: f64, b3: f64, b4: f64, n: u32, d_cut: u32, h_cut: u64) -> SeriesReport {
    let d_cut = d_cut.max(1);
    let h_cut = h_cut.max(1);
    let mut partial_sums = Vec::with_capacity(d_cut as usize);
    let mut acc = 0.0;
    for d in 1..=d_cut {
        for h in 1..=h_cut {
            acc += term(b0, b1, b3, b4, n, d, h);
        }
        partial_sums.push(acc);
    }
    let s1 = b1 - b4;
    let (tail_bound, verdict) = if b0 <= 0.0 {
        (Some(0.0), Verdict::Converges)
    } else if s1 <= 1.0 {
        // the d = 1 row Σ_H B₀ H^{−(B₁−B₄)} already diverges
        (None, Verdict::Diverges)
    } else if b3 <= 1.0 {
        (None, Verdict::Undecided)
    } else {
        // rows d ≤ d_cut beyond h_cut
        let mut tail = 0.0;
        for d in 1..=d_cut {
            let s = s1 * (d as f64).powi(n as i32);
            tail += b0 * (d as f64).powf(-b3 * d as f64) * zeta_tail(s, h_cut as f64);
        }
        // rows d > d_cut: Σ_H H^{−s_d} ≤ s₁/(s₁−1) and d^{−B₃d} ≤ d^{−B₃}
        tail += b0 * s1 / (s1 - 1.0) * zeta_tail(b3, d_cut as f64);
        (Some(tail), Verdict::Converges)
    };
    SeriesReport {
        b0,
        b1,
        b2,
        b3,
        b4,
        n,
        d_cut,
        h_cut,
        partial_sum: acc,
        partial_sums,
        tail_bound,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        let r = borel_cantelli_tail(1.0, 3.0, 1.0, 2.0, 1.0, 1, 20, 200);
        assert_eq!(r.verdict, Verdict::Converges);
        let total = r.partial_sum + r.tail_bound.unwrap();
        assert!(total.is_finite());
        // Σ_d ζ(2d)/d^{2d} computed far out stays under the bound
        let far = borel_cantelli_tail(1.0, 3.0, 1.0, 2.0, 1.0, 1, 40, 20_000);
        assert!(far.partial_sum <= total);
        assert_eq!(borel_cantelli_tail(1.0, 2.0, 1.0, 2.0, 2.0, 1, 10, 10).verdict, Verdict::Diverges);
        assert_eq!(borel_cantelli_tail(1.0, 3.0, 1.0, 1.0, 1.0, 1, 10, 10).verdict, Verdict::Undecided);
    }

    #[test]
    fn partial_sums_nondecreasing() {
        let r = borel_cantelli_tail(2.0, 5.0, 1.0, 0.5, 1.0, 2, 12, 50);
        assert!(r.partial_sums.windows(2).all(|w| w[0] <= w[1]));
    }
}
