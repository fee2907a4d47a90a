//! Log-domain arithmetic for probabilities that underflow `f64`.

/// `ln(exp(a) + exp(b))`.
#[inline]
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(sum(exp(x)))` over a slice, `-inf` for an empty or all-zero sum.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    if max == f64::INFINITY {
        return max;
    }
    max + terms.iter().map(|&t| (t - max).exp()).sum::<f64>().ln()
}

/// `|exp(a - b) - 1|`: relative error of `exp(a)` against reference `exp(b)`.
pub fn relative_error(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if b == f64::NEG_INFINITY || a == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    (a - b).exp_m1().abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_in_log_domain() {
        let terms = [-1000.0, -1000.0, -1001.0];
        let expected = -1000.0 + (2.0 + (-1.0f64).exp()).ln();
        assert!((log_sum_exp(&terms) - expected).abs() < 1e-12);
        assert!((log_add(-1000.0, -1000.0) - (-1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert_eq!(log_add(f64::NEG_INFINITY, -3.0), -3.0);
    }

    #[test]
    fn relative_error_of_logs() {
        assert!((relative_error(1.1f64.ln(), 0.0) - 0.1).abs() < 1e-12);
        assert_eq!(relative_error(-5.0, -5.0), 0.0);
        assert_eq!(relative_error(f64::NEG_INFINITY, f64::NEG_INFINITY), 0.0);
    }
}
