//! Adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.
//!
//! The adaptive driver keeps the final partition so that a family of
//! integrands depending smoothly on a parameter can be evaluated on one fixed
//! rule. Finite differences taken across such a family then see a smooth
//! discretisation error instead of jumps from changing subdivisions.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_SUBINTERVALS: usize = 4000;

/// Result of an adaptive integration.
#[derive(Debug, Clone)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    /// Sorted breakpoints of the converged partition, endpoints included.
    pub breakpoints: Vec<f64>,
}

/// Kronrod estimate and |Kronrod - Gauss| on one interval.
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over `[a, b]` until the summed error estimate is at most
/// `max(abs_tol, rel_tol * |I|)`. Orientation is respected (`a > b` flips
/// the sign).
pub fn integrate<F>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            breakpoints: vec![a, b],
        });
    }
    if a > b {
        let mut q = integrate(f, b, a, abs_tol, rel_tol)?;
        q.value = -q.value;
        q.breakpoints.reverse();
        return Ok(q);
    }

    let (value, error) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;

    loop {
        let tol = abs_tol.max(rel_tol * total.abs());
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::QuadratureFailure {
                tolerance: tol,
                estimate: total_err,
                subintervals: heap.len(),
            });
        }
        if total_err <= tol {
            break;
        }
        if heap.len() >= MAX_SUBINTERVALS {
            return Err(Error::QuadratureFailure {
                tolerance: tol,
                estimate: total_err,
                subintervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::QuadratureFailure {
                tolerance: tol,
                estimate: total_err,
                subintervals: heap.len() + 1,
            });
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }

    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    // Re-sum in order so the value does not depend on heap history.
    let value = segments.iter().map(|s| s.value).sum();
    let error = segments.iter().map(|s| s.error).sum();
    let mut breakpoints: Vec<f64> = segments.iter().map(|s| s.a).collect();
    breakpoints.push(b);
    Ok(Quadrature {
        value,
        error,
        breakpoints,
    })
}

/// Applies the 15-point Kronrod rule on each cell of a fixed partition.
pub fn integrate_on<F>(f: F, breakpoints: &[f64]) -> f64
where
    F: Fn(f64) -> f64,
{
    breakpoints.windows(2).map(|w| gk15(&f, w[0], w[1]).0).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_integrate_constants() {
        let sum: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        assert!((sum - 2.0).abs() < 1e-15);
        let gsum: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((gsum - 2.0).abs() < 1e-15);
    }

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| x.powi(9) - 3.0 * x.powi(4), 0.0, 2.0, 0.0, 1e-14).unwrap();
        let exact = 2f64.powi(10) / 10.0 - 3.0 * 2f64.powi(5) / 5.0;
        assert!((q.value - exact).abs() < 1e-12);
    }

    #[test]
    fn sech_integral() {
        // int_0^20 sech(x) dx = gd(20)
        let q = integrate(|x| 1.0 / x.cosh(), 0.0, 20.0, 0.0, 1e-12).unwrap();
        let gd = 2.0 * (20f64 / 2.0).tanh().atan();
        assert!((q.value - gd).abs() < 1e-12);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let q = integrate(|x| x.exp(), 1.0, 0.0, 0.0, 1e-12).unwrap();
        assert!((q.value + (1f64.exp() - 1.0)).abs() < 1e-12);
        assert_eq!(q.breakpoints.first(), Some(&1.0));
    }

    #[test]
    fn fixed_partition_matches_adaptive() {
        let f = |x: f64| (3.0 * x).sin() * (-x).exp();
        let q = integrate(f, 0.0, 5.0, 0.0, 1e-12).unwrap();
        assert!((integrate_on(f, &q.breakpoints) - q.value).abs() < 1e-14);
    }

    #[test]
    fn singular_integrand_reports_failure() {
        let r = integrate(|x| 1.0 / x, 0.0, 1.0, 0.0, 1e-12);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }
}
