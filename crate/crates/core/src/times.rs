//! Closed-form dwell time in the step barrier and libration period in the
//! square well, with their constrained extremization over microstates.
//!
//! On the canonical gauge `ab - c^2/4 = 1` the coefficient `b` is eliminated,
//! leaving a smooth objective in `(a, c)`. For fixed `c` the objective is
//! unimodal in `ln a`, so the search is a golden-section line search nested
//! in a uniform `c`-grid followed by a golden refinement in `c`.

use crate::error::{domain, Error, Result};
use crate::exec::Exec;
use crate::microstate::{BasisRescale, Coefficients, Microstate};
use crate::numeric::golden;
use crate::potential::Kinematics;
use std::f64::consts::SQRT_2;

/// Default distance `epsilon` of the extremizer from the `|c| = 2` edge.
pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Branch of the `a ± c r` term in the dwell time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DwellResult {
    pub t_d: f64,
    pub sign: Sign,
    pub ms: Microstate,
    pub kin: Kinematics,
}

fn dwell_raw(kin: &Kinematics, coeffs: &Coefficients, sign: Sign) -> f64 {
    let r = kin.ratio;
    let Coefficients { a, b, c } = *coeffs;
    2.0 * coeffs.determinant().sqrt() * (1.0 + r * r) / (a + sign.value() * c * r + b * r * r)
        * kin.time_scale()
}

/// Round-trip time spent in the barrier by the microstate `ms`.
pub fn dwell_time(kin: &Kinematics, ms: &Microstate, sign: Sign) -> DwellResult {
    DwellResult {
        t_d: dwell_raw(kin, &ms.coefficients(), sign),
        sign,
        ms: *ms,
        kin: *kin,
    }
}

/// Dwell time for coefficients expressed in a rescaled basis. The
/// coefficients are mapped back to the canonical basis before evaluation.
pub fn dwell_time_in_basis(
    kin: &Kinematics,
    raw: &Coefficients,
    scale: BasisRescale,
    sign: Sign,
) -> Result<DwellResult> {
    let ms = Microstate::try_from(raw.rescale(scale.inverse()))?;
    Ok(dwell_time(kin, &ms, sign))
}

/// `2m/(hbar kappa k)`.
pub fn dwell_time_monochromatic(kin: &Kinematics) -> f64 {
    2.0 * kin.time_scale()
}

/// `hbar / [E(U-E)]^{1/2}`, the barrier dwell time of Hartman and Fletcher.
pub fn hartman_dwell_time(kin: &Kinematics) -> f64 {
    kin.units.hbar / (kin.energy * (kin.height - kin.energy)).sqrt()
}

/// Least upper bound `[1+r^2]/(sqrt2 - 1) m/(hbar kappa^2)` of the dwell time.
pub fn dwell_bound(kin: &Kinematics) -> f64 {
    let r = kin.ratio;
    (1.0 + r * r) / (SQRT_2 - 1.0) * kin.units.mass / (kin.units.hbar * kin.kappa * kin.kappa)
}

fn libration_prefactor(kin: &Kinematics, q: f64) -> f64 {
    let r = kin.ratio;
    4.0 * (1.0 + r * r) * kin.units.mass * (q + kin.kappa.recip()) / (kin.units.hbar * kin.k)
}

fn libration_raw(kin: &Kinematics, q: f64, coeffs: &Coefficients) -> f64 {
    let r2 = kin.ratio * kin.ratio;
    let Coefficients { a, b, c } = *coeffs;
    libration_prefactor(kin, q) * coeffs.determinant().sqrt() * (a + b * r2)
        / (a * a + (2.0 * a * b - c * c) * r2 + b * b * r2 * r2)
}

/// Period of libration in a square well of half-width `q`.
pub fn libration_period(kin: &Kinematics, q: f64, ms: &Microstate) -> Result<f64> {
    check_half_width(q)?;
    Ok(libration_raw(kin, q, &ms.coefficients()))
}

pub fn libration_period_in_basis(
    kin: &Kinematics,
    q: f64,
    raw: &Coefficients,
    scale: BasisRescale,
) -> Result<f64> {
    let ms = Microstate::try_from(raw.rescale(scale.inverse()))?;
    libration_period(kin, q, &ms)
}

/// `4m(q + 1/kappa)/(hbar k)`.
pub fn libration_period_monochromatic(kin: &Kinematics, q: f64) -> Result<f64> {
    check_half_width(q)?;
    Ok(4.0 * kin.units.mass * (q + kin.kappa.recip()) / (kin.units.hbar * kin.k))
}

/// `2^{3/2} [1 + r^2] m(q + 1/kappa)/(hbar kappa)`, the period at the extremizer.
pub fn libration_bound(kin: &Kinematics, q: f64) -> f64 {
    let r = kin.ratio;
    2.0 * SQRT_2 * (1.0 + r * r) * kin.units.mass * (q + kin.kappa.recip())
        / (kin.units.hbar * kin.kappa)
}

/// Variant of [`libration_bound`] with `[1 - r^2]` in place of `[1 + r^2]`.
pub fn libration_bound_printed(kin: &Kinematics, q: f64) -> f64 {
    let r = kin.ratio;
    2.0 * SQRT_2 * (1.0 - r * r) * kin.units.mass * (q + kin.kappa.recip())
        / (kin.units.hbar * kin.kappa)
}

/// `t_L` for the probe microstate `(A, 1/A, 0)`; tends to zero as `A` grows.
pub fn libration_infimum_probe(kin: &Kinematics, q: f64, big_a: f64) -> Result<f64> {
    if !(big_a >= 1.0) || !big_a.is_finite() {
        return domain(format!(
            "probe coefficient A must be finite and >= 1, got {big_a}"
        ));
    }
    let ms = Microstate::from_a_c(big_a, 0.0)?;
    libration_period(kin, q, &ms)
}

fn check_half_width(q: f64) -> Result<()> {
    if !(q.is_finite() && q > 0.0) {
        return domain(format!("well half-width q must be positive, got {q}"));
    }
    Ok(())
}

/// Which form of the libration bound the optimizer reproduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundForm {
    Derived,
    Printed,
    Neither,
}

impl BoundForm {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundForm::Derived => "derived",
            BoundForm::Printed => "printed",
            BoundForm::Neither => "neither",
        }
    }
}

/// Comparison of the optimizer against the printed `[1 - r^2]` libration bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedBoundCheck {
    pub printed: f64,
    pub derived: f64,
    /// The attained supremum exceeds the printed bound.
    pub supremum_exceeds_printed: bool,
    /// Even the monochromatic period exceeds the printed bound.
    pub monochromatic_exceeds_printed: bool,
    pub confirmed: BoundForm,
}

impl PrintedBoundCheck {
    pub fn printed_violated(&self) -> bool {
        self.supremum_exceeds_printed || self.monochromatic_exceeds_printed
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalReport {
    pub maximizer: Microstate,
    /// Sign branch of the maximizer (dwell time only).
    pub sign: Option<Sign>,
    /// Largest value attained on `|c| <= 2 - epsilon`.
    pub supremum: f64,
    /// Analytic least upper bound (the `epsilon -> 0` limit).
    pub bound: f64,
    pub epsilon: f64,
    pub attained_at_boundary: bool,
    /// Linear `epsilon -> 0` extrapolation from runs at `epsilon` and `2 epsilon`.
    pub extrapolated: f64,
    pub printed: Option<PrintedBoundCheck>,
}

/// Knobs for the nested grid/line search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOptions {
    /// Uniform grid points on `c in [-(2-eps), 2-eps]`.
    pub c_grid: usize,
    /// Line search covers `ln a in [-half_width, half_width]`.
    pub log_a_half_width: f64,
    /// Golden-section tolerance in `ln a` and in `c`.
    pub xtol: f64,
    pub exec: Exec,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            c_grid: 101,
            log_a_half_width: 40.0,
            xtol: 1e-12,
            exec: Exec::Parallel,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    a: f64,
    c: f64,
    sign: Sign,
    value: f64,
}

impl Candidate {
    /// Tie-break: larger value, then smaller c, then smaller a.
    fn better_than(&self, other: &Candidate) -> bool {
        if self.value != other.value {
            return self.value > other.value;
        }
        if self.c != other.c {
            return self.c < other.c;
        }
        self.a < other.a
    }
}

fn best_of(cands: impl IntoIterator<Item = Candidate>) -> Option<Candidate> {
    cands.into_iter().fold(None, |acc, c| match acc {
        Some(b) if !c.better_than(&b) => Some(b),
        _ => Some(c),
    })
}

/// Inner line search: best `a` for fixed `(c, sign)`.
fn line_search<F>(objective: &F, c: f64, sign: Sign, opts: &OptimizerOptions) -> Result<Candidate>
where
    F: Fn(f64, f64, Sign) -> f64,
{
    let w = opts.log_a_half_width;
    let (t, value) = golden::maximize(|t| objective(t.exp(), c, sign), -w, w, opts.xtol);
    if !value.is_finite() {
        return Err(Error::OptimizationFailure(format!(
            "non-finite objective at c = {c}"
        )));
    }
    if (t.abs() - w).abs() < 1e-6 * w {
        return Err(Error::OptimizationFailure(format!(
            "line search in ln a hit the bracket edge at c = {c}"
        )));
    }
    Ok(Candidate {
        a: t.exp(),
        c,
        sign,
        value,
    })
}

/// Maximizes `objective(a, c, sign)` over `|c| <= c_max` on the normalization
/// surface, for each sign in `signs`.
fn maximize_surface<F>(
    objective: F,
    c_max: f64,
    signs: &[Sign],
    opts: &OptimizerOptions,
) -> Result<Candidate>
where
    F: Fn(f64, f64, Sign) -> f64 + Sync + Send,
{
    if opts.c_grid < 3 {
        return Err(Error::OptimizationFailure(
            "c grid needs at least 3 points".into(),
        ));
    }
    let n = opts.c_grid;
    let grid: Vec<f64> = (0..n)
        .map(|i| -c_max + 2.0 * c_max * i as f64 / (n - 1) as f64)
        .collect();
    let jobs: Vec<(usize, Sign)> = signs
        .iter()
        .flat_map(|&s| (0..n).map(move |i| (i, s)))
        .collect();
    let evaluated = opts
        .exec
        .try_map(&jobs, |&(i, s)| line_search(&objective, grid[i], s, opts))?;
    let coarse = best_of(evaluated.iter().copied())
        .ok_or_else(|| Error::OptimizationFailure("empty search grid".into()))?;

    let i = grid
        .iter()
        .position(|&c| c == coarse.c)
        .expect("coarse optimum lies on the grid");
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(n - 1)];
    let sign = coarse.sign;
    let profile = |c: f64| {
        line_search(&objective, c, sign, opts)
            .map(|cand| cand.value)
            .unwrap_or(f64::NEG_INFINITY)
    };
    let (c_best, _) = golden::maximize(profile, lo, hi, opts.xtol);
    let refined = line_search(&objective, c_best, sign, opts)?;
    Ok(best_of([coarse, refined]).expect("two candidates"))
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return domain(format!("epsilon must lie in (0, 1), got {epsilon}"));
    }
    Ok(())
}

fn boundary_hit(c: f64, c_max: f64) -> bool {
    (c.abs() - c_max).abs() <= 1e-9
}

fn dwell_optimum(kin: &Kinematics, epsilon: f64, opts: &OptimizerOptions) -> Result<Candidate> {
    let objective = |a: f64, c: f64, sign: Sign| {
        let b = (1.0 + 0.25 * c * c) / a;
        dwell_raw(kin, &Coefficients::new(a, b, c), sign)
    };
    let best = maximize_surface(objective, 2.0 - epsilon, &[Sign::Plus, Sign::Minus], opts)?;
    // (c, +) and (-c, -) are the same state; report c >= 0.
    Ok(if best.c < 0.0 {
        Candidate {
            c: -best.c,
            sign: best.sign.flipped(),
            ..best
        }
    } else {
        best
    })
}

/// Maximum dwell time over admissible microstates with `|c| <= 2 - epsilon`.
pub fn max_dwell(kin: &Kinematics, epsilon: f64) -> Result<ExtremalReport> {
    max_dwell_with(kin, epsilon, &OptimizerOptions::default())
}

pub fn max_dwell_with(
    kin: &Kinematics,
    epsilon: f64,
    opts: &OptimizerOptions,
) -> Result<ExtremalReport> {
    check_epsilon(epsilon)?;
    let best = dwell_optimum(kin, epsilon, opts)?;
    let wider = dwell_optimum(kin, 2.0 * epsilon, opts)?;
    Ok(ExtremalReport {
        maximizer: Microstate::from_a_c(best.a, best.c)?,
        sign: Some(best.sign),
        supremum: best.value,
        bound: dwell_bound(kin),
        epsilon,
        attained_at_boundary: boundary_hit(best.c, 2.0 - epsilon),
        extrapolated: 2.0 * best.value - wider.value,
        printed: None,
    })
}

fn libration_optimum(
    kin: &Kinematics,
    q: f64,
    epsilon: f64,
    opts: &OptimizerOptions,
) -> Result<Candidate> {
    let objective = |a: f64, c: f64, _: Sign| {
        let b = (1.0 + 0.25 * c * c) / a;
        libration_raw(kin, q, &Coefficients::new(a, b, c))
    };
    let best = maximize_surface(objective, 2.0 - epsilon, &[Sign::Plus], opts)?;
    // Eq. (2) depends on c only through c^2.
    Ok(Candidate {
        c: best.c.abs(),
        ..best
    })
}

/// Maximum libration period over microstates with `|c| <= 2 - epsilon`.
pub fn max_libration(kin: &Kinematics, q: f64, epsilon: f64) -> Result<ExtremalReport> {
    max_libration_with(kin, q, epsilon, &OptimizerOptions::default())
}

pub fn max_libration_with(
    kin: &Kinematics,
    q: f64,
    epsilon: f64,
    opts: &OptimizerOptions,
) -> Result<ExtremalReport> {
    check_half_width(q)?;
    check_epsilon(epsilon)?;
    let best = libration_optimum(kin, q, epsilon, opts)?;
    let wider = libration_optimum(kin, q, 2.0 * epsilon, opts)?;
    let extrapolated = 2.0 * best.value - wider.value;
    let derived = libration_bound(kin, q);
    let printed = libration_bound_printed(kin, q);
    let matches = |bound: f64| (extrapolated - bound).abs() <= 1e-6 * bound.abs().max(1e-300);
    let confirmed = if matches(derived) {
        BoundForm::Derived
    } else if matches(printed) {
        BoundForm::Printed
    } else {
        BoundForm::Neither
    };
    Ok(ExtremalReport {
        maximizer: Microstate::from_a_c(best.a, best.c)?,
        sign: None,
        supremum: best.value,
        bound: derived,
        epsilon,
        attained_at_boundary: boundary_hit(best.c, 2.0 - epsilon),
        extrapolated,
        printed: Some(PrintedBoundCheck {
            printed,
            derived,
            supremum_exceeds_printed: best.value > printed,
            monochromatic_exceeds_printed: libration_period_monochromatic(kin, q)? > printed,
            confirmed,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::microstate::transform_basis;
    use crate::potential::Units;
    use approx::assert_relative_eq;

    fn canonical() -> Kinematics {
        Kinematics::new(0.18, 0.5, Units::default()).unwrap()
    }

    /// Kinematics with k = kappa = 1 (E = 1/2, U = 1).
    fn symmetric() -> Kinematics {
        Kinematics::new(0.5, 1.0, Units::default()).unwrap()
    }

    #[test]
    fn dwell_examples() {
        let kin = canonical();
        let mono = Microstate::MONOCHROMATIC;
        for sign in [Sign::Plus, Sign::Minus] {
            assert_relative_eq!(
                dwell_time(&kin, &mono, sign).t_d,
                25.0 / 6.0,
                max_relative = 1e-14
            );
        }
        let ms = Microstate::new(2.0, 1.0, 2.0).unwrap();
        // 2 * (25/9) / (58/9) / 0.48 and 2 * (25/9) / (10/9) / 0.48
        assert_relative_eq!(
            dwell_time(&kin, &ms, Sign::Plus).t_d,
            50.0 / 58.0 / 0.48,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            dwell_time(&kin, &ms, Sign::Minus).t_d,
            5.0 / 0.48,
            max_relative = 1e-14
        );
        assert!((dwell_time(&kin, &ms, Sign::Plus).t_d - 1.79598).abs() < 1e-5);
        assert!((dwell_time(&kin, &ms, Sign::Minus).t_d - 10.41667).abs() < 1e-5);
    }

    #[test]
    fn monochromatic_closed_forms() {
        let kin = canonical();
        assert_relative_eq!(
            dwell_time_monochromatic(&kin),
            25.0 / 6.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            hartman_dwell_time(&kin),
            1.0 / 0.0576f64.sqrt(),
            max_relative = 1e-14
        );
        for u in [0.4, 2.0, 9.0] {
            let k = Kinematics::new(u / 2.0, u, Units::default()).unwrap();
            assert_relative_eq!(dwell_time_monochromatic(&k), 2.0 / u, max_relative = 1e-14);
        }
        let reduced = dwell_time(&kin, &Microstate::MONOCHROMATIC, Sign::Minus).t_d;
        assert!((reduced - dwell_time_monochromatic(&kin)).abs() <= 1e-14 * reduced);
    }

    #[test]
    fn dwell_maximizer_canonical_point() {
        let kin = canonical();
        let rep = max_dwell(&kin, DEFAULT_EPSILON).unwrap();
        let r = 4.0 / 3.0;
        assert_eq!(rep.sign, Some(Sign::Minus));
        assert!((rep.maximizer.a() / (SQRT_2 * r) - 1.0).abs() < 1e-4);
        assert!((rep.maximizer.b() - SQRT_2 / r).abs() < 1e-4);
        assert!((rep.supremum / 10.478_357_475_577_67 - 1.0).abs() < 1e-6);
        assert!(rep.supremum <= rep.bound * (1.0 + 1e-9));
        assert!(rep.attained_at_boundary);
        assert!(rep.maximizer.is_admissible());
        assert!((rep.extrapolated / rep.bound - 1.0).abs() < 1e-9);
    }

    #[test]
    fn dwell_bound_at_symmetric_point() {
        let kin = symmetric();
        assert_relative_eq!(
            dwell_bound(&kin),
            2.0 * (SQRT_2 + 1.0),
            max_relative = 1e-14
        );
    }

    #[test]
    fn dwell_supremum_monotone_in_epsilon() {
        let kin = canonical();
        let loose = max_dwell(&kin, 1e-3).unwrap().supremum;
        let tight = max_dwell(&kin, 1e-6).unwrap().supremum;
        assert!(loose < tight && tight < dwell_bound(&kin));
    }

    #[test]
    fn sequential_and_parallel_optimizers_agree() {
        let kin = canonical();
        let seq = OptimizerOptions {
            exec: Exec::Sequential,
            ..Default::default()
        };
        let a = max_dwell_with(&kin, 1e-6, &seq).unwrap();
        let b = max_dwell(&kin, 1e-6).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn libration_examples() {
        let kin = canonical();
        let mono = Microstate::MONOCHROMATIC;
        assert_relative_eq!(
            libration_period(&kin, 1.0, &mono).unwrap(),
            15.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            libration_period(&symmetric(), 1.0, &mono).unwrap(),
            8.0,
            max_relative = 1e-14
        );
        let decomposition = 4.0 / 0.6 + 2.0 * dwell_time_monochromatic(&kin);
        assert_relative_eq!(decomposition, 15.0, max_relative = 1e-14);
        assert!(libration_period(&kin, 0.0, &mono).is_err());
    }

    #[test]
    fn libration_maximizer_and_printed_bound() {
        let kin = canonical();
        let rep = max_libration(&kin, 1.0, DEFAULT_EPSILON).unwrap();
        assert!((rep.supremum / 22.097_086_912_079_6 - 1.0).abs() < 1e-6);
        assert!((rep.maximizer.a() - 1.885_62).abs() < 1e-4);
        assert!((rep.maximizer.b() - 1.060_66).abs() < 1e-4);
        assert!(rep.attained_at_boundary);
        let check = rep.printed.unwrap();
        assert_eq!(check.confirmed, BoundForm::Derived);
        assert!(check.supremum_exceeds_printed);

        let sym = max_libration(&symmetric(), 1.0, DEFAULT_EPSILON).unwrap();
        let check = sym.printed.unwrap();
        assert_eq!(check.printed, 0.0);
        assert!(check.monochromatic_exceeds_printed && check.printed_violated());
        assert_eq!(check.confirmed, BoundForm::Derived);
    }

    #[test]
    fn infimum_probe() {
        let kin = canonical();
        assert!((libration_infimum_probe(&kin, 1.0, 100.0).unwrap() - 0.416_59).abs() < 1e-5);
        assert!((libration_infimum_probe(&kin, 1.0, 1e4).unwrap() - 4.1666e-3).abs() < 1e-7);
        let mut prev = f64::INFINITY;
        for i in 0..200 {
            let a = 1.34 * 1.1f64.powi(i);
            let t = libration_infimum_probe(&kin, 1.0, a).unwrap();
            assert!(t < prev);
            prev = t;
        }
        assert!(libration_infimum_probe(&kin, 1.0, 0.5).is_err());
    }

    #[test]
    fn times_survive_basis_round_trip() {
        let kin = canonical();
        let ms = Microstate::new(2.0, 1.0, 2.0).unwrap();
        let s = BasisRescale::new(0.3, -7.0).unwrap();
        let (raw, _) = transform_basis(&ms, s);
        let direct = dwell_time(&kin, &ms, Sign::Plus).t_d;
        let via = dwell_time_in_basis(&kin, &raw, s, Sign::Plus).unwrap().t_d;
        assert!((direct - via).abs() <= 1e-12 * direct);
        let direct = libration_period(&kin, 1.0, &ms).unwrap();
        let via = libration_period_in_basis(&kin, 1.0, &raw, s).unwrap();
        assert!((direct - via).abs() <= 1e-12 * direct);
    }

    #[test]
    fn bad_epsilon() {
        assert!(max_dwell(&canonical(), 0.0).is_err());
        assert!(max_libration(&canonical(), 1.0, 1.5).is_err());
    }
}
