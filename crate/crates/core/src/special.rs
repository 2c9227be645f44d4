//! Rumour's constant and the principal branch of the Lambert W function.

/// Root in `(0, 1)` of `2 - 2x + ln x = 0`, about 0.2031878699.
///
/// Bisection on `[0.05, 0.5]` (where the function changes sign) down to a
/// bracket narrower than `1e-13`, then one Newton step.
pub fn rumor_constant() -> f64 {
    let f = |x: f64| 2.0 - 2.0 * x + x.ln();
    let (mut lo, mut hi) = (0.05_f64, 0.5_f64);
    debug_assert!(f(lo) < 0.0 && f(hi) > 0.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    x - f(x) / (1.0 / x - 2.0)
}

/// Principal branch `W_0(z)` for `z >= -1/e` (NaN below), by Halley iteration.
pub fn lambert_w0(z: f64) -> f64 {
    let branch = -(-1.0_f64).exp();
    if z.is_nan() || z < branch {
        return f64::NAN;
    }
    if z == branch {
        return -1.0;
    }
    if z == 0.0 {
        return 0.0;
    }
    let mut w = if z < -0.25 {
        // expansion about the branch point
        let p = (2.0 * (std::f64::consts::E * z + 1.0)).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else {
        z.ln_1p()
    };
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - z;
        let step = f / (ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
        w -= step;
        if step.abs() <= 1e-16 * (1.0 + w.abs()) {
            break;
        }
    }
    w
}
