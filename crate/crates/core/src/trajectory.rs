//! Reduced action, time of flight `t = dW/dE` at fixed `(a, b, c)`, and
//! trajectory sampling within one region.
//!
//! Times are reported as magnitudes with an orientation flag. Interface
//! matching between regions is not attempted; the closed-form times in
//! [`crate::times`] are the reference for dwell and libration durations.

use crate::error::{domain, Error, Result};
use crate::exec::Exec;
use crate::microstate::Coefficients;
use crate::numeric::{quad, roots};
use crate::potential::{Kinematics, Region};
use crate::wavefield::{conjugate_momentum, momentum_energy_derivative, RegionBasis};

/// Improper integrals toward `x = +inf` in the forbidden region stop at
/// `2 kappa x = TAIL_U`; the neglected tail is `O(e^{-TAIL_U})`.
pub const TAIL_U: f64 = 40.0;

/// Relative tolerance requested from the adaptive quadrature.
pub const ACTION_REL_TOL: f64 = 1e-12;

/// Energy step for the time-of-flight derivative, relative to `E`.
pub const ENERGY_STEP: f64 = 1e-6;

/// Direction of elapsed time along the sampled path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Forward,
    Backward,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Forward => "forward",
            Orientation::Backward => "backward",
        }
    }
}

fn upper_limit(x: f64, basis: &RegionBasis) -> Result<(f64, bool)> {
    if x.is_finite() {
        return Ok((x, false));
    }
    if x == f64::INFINITY && basis.region == Region::Forbidden {
        return Ok((TAIL_U / (2.0 * basis.wavenumber), true));
    }
    domain(format!(
        "infinite endpoint {x} is only supported toward +inf in the forbidden region"
    ))
}

/// `W = int_{x_ref}^{x} W_x dx'`.
///
/// `x = +inf` is accepted in the forbidden region and truncated at
/// [`TAIL_U`].
pub fn reduced_action(
    x: f64,
    x_ref: f64,
    coeffs: &Coefficients,
    basis: &RegionBasis,
    kin: &Kinematics,
) -> Result<f64> {
    action_quadrature(x, x_ref, coeffs, basis, kin).map(|q| q.value)
}

fn action_quadrature(
    x: f64,
    x_ref: f64,
    coeffs: &Coefficients,
    basis: &RegionBasis,
    kin: &Kinematics,
) -> Result<quad::Quadrature> {
    if !x_ref.is_finite() {
        return domain(format!("reference point must be finite, got {x_ref}"));
    }
    let (upper, _) = upper_limit(x, basis)?;
    // Validate the form once so the integrand can be infallible.
    conjugate_momentum(x_ref, coeffs, basis, &kin.units)?;
    let integrand = |y: f64| conjugate_momentum(y, coeffs, basis, &kin.units).unwrap_or(f64::NAN);
    quad::integrate(integrand, x_ref, upper, 1e-300, ACTION_REL_TOL)
}

/// Time of flight between `x_ref` and `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeOfFlight {
    pub magnitude: f64,
    pub orientation: Orientation,
}

impl TimeOfFlight {
    pub fn signed(&self) -> f64 {
        match self.orientation {
            Orientation::Forward => self.magnitude,
            Orientation::Backward => -self.magnitude,
        }
    }
}

/// `t = dW/dE` at fixed coefficients, by a central difference in `E` with
/// step `h = 1e-6 E` and one Richardson extrapolation. `k` and `kappa` are
/// re-derived at every stencil energy; the quadrature partition of the
/// centre energy is reused so the discretisation is smooth in `E`.
pub fn time_of_flight(
    x: f64,
    x_ref: f64,
    coeffs: &Coefficients,
    basis: &RegionBasis,
    kin: &Kinematics,
) -> Result<TimeOfFlight> {
    let q = action_quadrature(x, x_ref, coeffs, basis, kin)?;
    let e = kin.energy;
    let h = ENERGY_STEP * e;
    if e - h <= 0.0 || e + h >= kin.height {
        return Err(Error::StepUnderflow {
            energy: e,
            step: h,
            height: kin.height,
        });
    }
    let action_at = |energy: f64| -> Result<f64> {
        let k2 = kin.at_energy(energy)?;
        let b2 = basis.with_kinematics(&k2);
        let f = |y: f64| conjugate_momentum(y, coeffs, &b2, &k2.units).unwrap_or(f64::NAN);
        Ok(quad::integrate_on(f, &q.breakpoints))
    };
    let central = |step: f64| -> Result<f64> {
        Ok((action_at(e + step)? - action_at(e - step)?) / (2.0 * step))
    };
    let coarse = central(h)?;
    let fine = central(0.5 * h)?;
    let t = (4.0 * fine - coarse) / 3.0;
    if !t.is_finite() {
        return Err(Error::QuadratureFailure {
            tolerance: ACTION_REL_TOL,
            estimate: f64::NAN,
            subintervals: q.breakpoints.len() - 1,
        });
    }
    Ok(TimeOfFlight {
        magnitude: t.abs(),
        orientation: if t >= 0.0 {
            Orientation::Forward
        } else {
            Orientation::Backward
        },
    })
}

/// Trajectory speed `1 / |dW_x/dE|`; `+inf` where the derivative vanishes.
pub fn speed_at(
    x: f64,
    coeffs: &Coefficients,
    basis: &RegionBasis,
    kin: &Kinematics,
) -> Result<f64> {
    let d = momentum_energy_derivative(x, coeffs, basis, kin)?;
    Ok(if d == 0.0 {
        f64::INFINITY
    } else {
        d.abs().recip()
    })
}

/// One point along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub x: f64,
    /// Time-of-flight magnitude from the start of the sampled range.
    pub t: f64,
    pub orientation: Orientation,
    pub w_x: f64,
    pub dwx_de: f64,
    pub speed: f64,
}

/// `n >= 2` evenly spaced samples on `[start, end]` inside one region.
pub fn sample_trajectory(
    start: f64,
    end: f64,
    n: usize,
    coeffs: &Coefficients,
    basis: &RegionBasis,
    kin: &Kinematics,
    exec: Exec,
) -> Result<Vec<TrajectorySample>> {
    if n < 2 {
        return domain(format!("need at least 2 samples, got {n}"));
    }
    if !(start.is_finite() && end.is_finite()) {
        return domain("sample range must be finite");
    }
    if basis.region == Region::Forbidden && start.min(end) < 0.0 {
        return domain("forbidden-region samples are measured from the interface (x >= 0)");
    }
    let points: Vec<f64> = (0..n)
        .map(|i| start + (end - start) * i as f64 / (n - 1) as f64)
        .collect();
    exec.try_map(&points, |&x| {
        let tof = time_of_flight(x, start, coeffs, basis, kin)?;
        let w_x = conjugate_momentum(x, coeffs, basis, &kin.units)?;
        let dwx_de = momentum_energy_derivative(x, coeffs, basis, kin)?;
        Ok(TrajectorySample {
            x,
            t: tof.magnitude,
            orientation: tof.orientation,
            w_x,
            dwx_de,
            speed: if dwx_de == 0.0 {
                f64::INFINITY
            } else {
                dwx_de.abs().recip()
            },
        })
    })
}

/// Smallest grid-resolved `X` with `speed_at(x) > max_speed` for every
/// sampled `x > X` up to the tail cutoff, refined by bisection.
///
/// Samples `2 kappa x` on a step of 0.01 out to [`TAIL_U`].
pub fn divergence_threshold(
    max_speed: f64,
    coeffs: &Coefficients,
    basis: &RegionBasis,
    kin: &Kinematics,
) -> Result<f64> {
    if basis.region != Region::Forbidden {
        return domain("speed only diverges inside the forbidden region");
    }
    if !(max_speed > 0.0 && max_speed.is_finite()) {
        return domain(format!("speed threshold must be positive, got {max_speed}"));
    }
    let du = 0.01;
    let steps = (TAIL_U / du).round() as usize;
    let to_x = |u: f64| u / (2.0 * basis.wavenumber);
    let excess = |x: f64| speed_at(x, coeffs, basis, kin).map(|v| v - max_speed);

    if excess(to_x(TAIL_U))? <= 0.0 {
        return Err(Error::Infeasible(format!(
            "speed stays below {max_speed} out to the tail cutoff"
        )));
    }
    let mut last_slow = None;
    for i in (0..steps).rev() {
        if excess(to_x(i as f64 * du))? <= 0.0 {
            last_slow = Some(i);
            break;
        }
    }
    let Some(i) = last_slow else {
        return Ok(0.0);
    };
    let (lo, hi) = (to_x(i as f64 * du), to_x((i + 1) as f64 * du));
    let f = |x: f64| excess(x).unwrap_or(f64::NAN);
    Ok(roots::bisect(f, lo, hi, 0.0).unwrap_or(hi))
}
