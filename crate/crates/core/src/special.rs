//! Log-gamma helpers.

/// `ln Γ(x)` for `x > 0`.
#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Stirling series correction `ln Γ(z) - [(z - 1/2) ln z - z + ln(2π)/2]`.
fn stirling_correction(z: f64) -> f64 {
    let w = 1.0 / z;
    let w2 = w * w;
    // B_{2m} / (2m (2m - 1)) for m = 1..5
    w * (1.0 / 12.0
        + w2 * (-1.0 / 360.0 + w2 * (1.0 / 1260.0 + w2 * (-1.0 / 1680.0 + w2 * (1.0 / 1188.0)))))
}

const STIRLING_MIN: f64 = 30.0;

/// `ln Γ(z) - ln Γ(z + rho)` for `z > 0`, `rho >= 0`.
///
/// Differencing two large log-gamma values loses roughly `log10(z ln z)`
/// digits, so for large `z` the difference of Stirling expansions is
/// rearranged to avoid the cancellation. Small `z` is lifted with the
/// recurrence `Γ(z + 1) = z Γ(z)`.
pub fn ln_gamma_ratio(z: f64, rho: f64) -> f64 {
    debug_assert!(z > 0.0 && rho >= 0.0);
    if rho == 0.0 {
        return 0.0;
    }
    if z < STIRLING_MIN {
        let shift = (STIRLING_MIN - z).ceil();
        let mut lift = 0.0;
        let steps = shift as usize;
        for i in 0..steps {
            lift += (rho / (z + i as f64)).ln_1p();
        }
        return ln_gamma_ratio(z + shift, rho) + lift;
    }
    let w = z + rho;
    -(z - 0.5) * (rho / z).ln_1p() - rho * w.ln() + rho + stirling_correction(z)
        - stirling_correction(w)
}
