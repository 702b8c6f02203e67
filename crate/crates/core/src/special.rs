//! Bessel-function sequences for the Chebychev expansion coefficients.
//!
//! Both sequences come from Miller's backward recurrence normalized by the
//! generating-function sum rule, which is stable for every order and
//! argument we need. Computed in `f64` regardless of the propagation scalar.

/// Starting order for the backward recurrence so that orders `0..=k_max`
/// are accurate to full double precision.
fn miller_start(x: f64, k_max: usize) -> usize {
    let top = (k_max as f64).max(x);
    let m = top + 30.0 + (40.0 * top).sqrt();
    let m = m.ceil() as usize;
    m + (m & 1)
}

/// J_0(x) .. J_{k_max}(x) for x ≥ 0.
pub fn bessel_j_sequence(x: f64, k_max: usize) -> Vec<f64> {
    assert!(x >= 0.0 && x.is_finite(), "argument must be finite and non-negative");
    let mut out = vec![0.0; k_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let start = miller_start(x, k_max);
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k
                          // 1 = J_0 + 2 Σ J_{2k}
    let mut sum = 0.0;
    for k in (0..=start).rev() {
        if k <= k_max {
            out[k] = cur;
        }
        if k % 2 == 0 {
            sum += if k == 0 { cur } else { 2.0 * cur };
        }
        if k == 0 {
            break;
        }
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > 1e250 {
            let s = 1e-250;
            cur *= s;
            next *= s;
            sum *= s;
            out.iter_mut().for_each(|v| *v *= s);
        }
    }
    out.iter_mut().for_each(|v| *v /= sum);
    out
}

/// e^{−x}·I_0(x) .. e^{−x}·I_{k_max}(x) for x ≥ 0.
pub fn bessel_i_scaled_sequence(x: f64, k_max: usize) -> Vec<f64> {
    assert!(x >= 0.0 && x.is_finite(), "argument must be finite and non-negative");
    let mut out = vec![0.0; k_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let start = miller_start(x, k_max);
    let mut next = 0.0;
    let mut cur = 1e-300;
    // e^x = I_0 + 2 Σ_{k≥1} I_k
    let mut sum = 0.0;
    for k in (0..=start).rev() {
        if k <= k_max {
            out[k] = cur;
        }
        sum += if k == 0 { cur } else { 2.0 * cur };
        if k == 0 {
            break;
        }
        let prev = 2.0 * k as f64 / x * cur + next;
        next = cur;
        cur = prev;
        if cur > 1e250 {
            let s = 1e-250;
            cur *= s;
            next *= s;
            sum *= s;
            out.iter_mut().for_each(|v| *v *= s);
        }
    }
    out.iter_mut().for_each(|v| *v /= sum);
    out
}
