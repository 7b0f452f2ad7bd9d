/// Bisection on a bracket `[lo, hi]` with `f(lo)` and `f(hi)` of opposite sign.
///
/// Iterates until the bracket width drops below `xtol` or the midpoint stops
/// moving in floating point. Returns `None` when the endpoints do not bracket
/// a sign change.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Some(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
        if hi - lo <= xtol {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Brackets every sign change of `f` on the ordered grid `xs` and refines each
/// by bisection. Exact zeros on grid points are reported once.
pub fn scan_roots<F>(f: F, xs: &[f64], xtol: f64) -> Vec<f64>
where
    F: Fn(f64) -> f64,
{
    let values: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for i in 0..xs.len().saturating_sub(1) {
        let (f0, f1) = (values[i], values[i + 1]);
        if f0 == 0.0 {
            roots.push(xs[i]);
            continue;
        }
        if f1 != 0.0 && f0.signum() != f1.signum() {
            if let Some(r) = bisect(&f, xs[i], xs[i + 1], xtol) {
                roots.push(r);
            }
        }
    }
    if let (Some(&x), Some(&v)) = (xs.last(), values.last()) {
        if v == 0.0 {
            roots.push(x);
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn bisect_rejects_non_bracket() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_none());
    }

    #[test]
    fn scan_reports_grid_zeros_once() {
        let xs: Vec<f64> = (0..=8).map(|i| i as f64 * 0.5).collect();
        let roots = scan_roots(|x| (x - 1.0) * (x - 2.3), &xs, 1e-13);
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0], 1.0);
        assert!((roots[1] - 2.3).abs() < 1e-12);
    }
}
