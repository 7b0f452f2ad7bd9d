//! Potentials, units and single-energy kinematics, plus the square-well
//! bound-state solver.

use crate::error::{domain, Result};
use crate::numeric::roots;

/// Reduced Planck constant and particle mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub hbar: f64,
    pub mass: f64,
}

impl Units {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return domain(format!("hbar must be positive and finite, got {hbar}"));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return domain(format!("mass must be positive and finite, got {mass}"));
        }
        Ok(Self { hbar, mass })
    }

    /// Wavenumber for kinetic energy `e`: (2 m e)^{1/2} / hbar.
    pub fn wavenumber(&self, e: f64) -> f64 {
        (2.0 * self.mass * e).sqrt() / self.hbar
    }
}

impl Default for Units {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
        }
    }
}

/// Classically allowed or forbidden region of a potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Free,
    Forbidden,
}

/// The two piecewise-constant potentials.
///
/// * `StepBarrier`: `V = 0` for `x < 0`, `V = U` for `x >= 0`.
/// * `SquareWell`: `V = 0` for `|x| < q`, `V = U` for `|x| >= q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    StepBarrier { height: f64 },
    SquareWell { depth: f64, half_width: f64 },
}

impl Potential {
    pub fn step_barrier(height: f64) -> Result<Self> {
        if !(height.is_finite() && height > 0.0) {
            return domain(format!("barrier height U must be positive, got {height}"));
        }
        Ok(Self::StepBarrier { height })
    }

    pub fn square_well(depth: f64, half_width: f64) -> Result<Self> {
        if !(depth.is_finite() && depth > 0.0) {
            return domain(format!("well depth U must be positive, got {depth}"));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return domain(format!(
                "well half-width q must be positive, got {half_width}"
            ));
        }
        Ok(Self::SquareWell { depth, half_width })
    }

    /// Height `U` of the classically forbidden plateau.
    pub fn height(&self) -> f64 {
        match *self {
            Self::StepBarrier { height } => height,
            Self::SquareWell { depth, .. } => depth,
        }
    }

    pub fn half_width(&self) -> Option<f64> {
        match *self {
            Self::StepBarrier { .. } => None,
            Self::SquareWell { half_width, .. } => Some(half_width),
        }
    }

    pub fn region(&self, x: f64) -> Region {
        match *self {
            Self::StepBarrier { .. } if x < 0.0 => Region::Free,
            Self::StepBarrier { .. } => Region::Forbidden,
            Self::SquareWell { half_width, .. } if x.abs() < half_width => Region::Free,
            Self::SquareWell { .. } => Region::Forbidden,
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match self.region(x) {
            Region::Free => 0.0,
            Region::Forbidden => self.height(),
        }
    }
}

/// Wavenumber `k` and decay constant `kappa` for one sub-barrier energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub energy: f64,
    /// Barrier height `U` the kinematics were derived against.
    pub height: f64,
    pub k: f64,
    pub kappa: f64,
    /// `kappa / k`
    pub ratio: f64,
    pub units: Units,
}

impl Kinematics {
    /// Builds the bundle directly from `E` and `U`; requires `0 < E < U`.
    pub fn new(energy: f64, height: f64, units: Units) -> Result<Self> {
        if !energy.is_finite() || energy <= 0.0 {
            return domain(format!("E must be positive, got {energy}"));
        }
        if !height.is_finite() || energy >= height {
            return domain(format!("E must lie below U (E = {energy}, U = {height})"));
        }
        let k = units.wavenumber(energy);
        let kappa = units.wavenumber(height - energy);
        Ok(Self {
            energy,
            height,
            k,
            kappa,
            ratio: kappa / k,
            units,
        })
    }

    /// Same potential and units at a different energy.
    pub fn at_energy(&self, energy: f64) -> Result<Self> {
        Self::new(energy, self.height, self.units)
    }

    /// Same energy and units against a different barrier height.
    pub fn at_height(&self, height: f64) -> Result<Self> {
        Self::new(self.energy, height, self.units)
    }

    /// `m / (hbar kappa k)`, the time unit shared by the closed-form times.
    pub fn time_scale(&self) -> f64 {
        self.units.mass / (self.units.hbar * self.kappa * self.k)
    }
}

pub fn make_kinematics(energy: f64, potential: &Potential, units: Units) -> Result<Kinematics> {
    Kinematics::new(energy, potential.height(), units)
}

/// Parity of a square-well eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// Which parities [`bound_state_energies`] should return.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityFilter {
    Even,
    Odd,
    Both,
}

impl ParityFilter {
    fn admits(self, p: Parity) -> bool {
        matches!(
            (self, p),
            (ParityFilter::Both, _)
                | (ParityFilter::Even, Parity::Even)
                | (ParityFilter::Odd, Parity::Odd)
        )
    }
}

/// One bound state of the square well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub energy: f64,
    pub parity: Parity,
    pub k: f64,
    pub kappa: f64,
}

/// Points on the uniform k-grid used to bracket eigenvalues.
pub const EIGEN_SCAN_POINTS: usize = 10_000;

/// Pole-free matching condition. Even states solve `k sin(kq) - kappa cos(kq) = 0`
/// (i.e. `k tan(kq) = kappa`); odd states solve `k cos(kq) + kappa sin(kq) = 0`
/// (i.e. `-k cot(kq) = kappa`).
pub fn matching_residual(parity: Parity, k: f64, kappa: f64, q: f64) -> f64 {
    let (s, c) = (k * q).sin_cos();
    match parity {
        Parity::Even => k * s - kappa * c,
        Parity::Odd => k * c + kappa * s,
    }
}

/// All bound-state energies of a square well, sorted ascending.
pub fn bound_state_energies(
    potential: &Potential,
    units: Units,
    filter: ParityFilter,
) -> Result<Vec<BoundState>> {
    bound_state_energies_with_grid(potential, units, filter, EIGEN_SCAN_POINTS)
}

/// [`bound_state_energies`] with an explicit bracketing grid size.
pub fn bound_state_energies_with_grid(
    potential: &Potential,
    units: Units,
    filter: ParityFilter,
    grid_points: usize,
) -> Result<Vec<BoundState>> {
    let (depth, q) = match *potential {
        Potential::SquareWell { depth, half_width } => (depth, half_width),
        Potential::StepBarrier { .. } => return domain("bound states require a square well"),
    };
    if grid_points < 2 {
        return domain("eigenvalue scan needs at least two grid points");
    }
    let k_max = units.wavenumber(depth);
    let kappa_of = |k: f64| (k_max * k_max - k * k).max(0.0).sqrt();
    // k = 0 and k = k_max close the bracket; neither is itself a bound state.
    let grid: Vec<f64> = (0..=grid_points)
        .map(|i| k_max * i as f64 / grid_points as f64)
        .collect();

    let mut states = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        if !filter.admits(parity) {
            continue;
        }
        let f = |k: f64| matching_residual(parity, k, kappa_of(k), q);
        // Bisection runs to machine precision, well inside 1e-12 in k.
        for k in roots::scan_roots(f, &grid, 0.0) {
            if k <= 0.0 || k >= k_max {
                continue;
            }
            let kappa = kappa_of(k);
            let hbar_k = units.hbar * k;
            states.push(BoundState {
                energy: hbar_k * hbar_k / (2.0 * units.mass),
                parity,
                k,
                kappa,
            });
        }
    }
    states.sort_by(|a, b| a.k.total_cmp(&b.k));
    Ok(states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit() -> Units {
        Units::default()
    }

    #[test]
    fn canonical_kinematics() {
        let pot = Potential::step_barrier(0.5).unwrap();
        let kin = make_kinematics(0.18, &pot, unit()).unwrap();
        assert_relative_eq!(kin.k, 0.6, max_relative = 1e-15);
        assert_relative_eq!(kin.kappa, 0.8, max_relative = 1e-15);
        assert_relative_eq!(kin.ratio, 4.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn half_height_is_symmetric() {
        for u in [0.3, 1.0, 17.0] {
            let kin = Kinematics::new(u / 2.0, u, unit()).unwrap();
            assert_eq!(kin.k, kin.kappa);
        }
    }

    #[test]
    fn energy_outside_open_interval_is_rejected() {
        let pot = Potential::step_barrier(0.5).unwrap();
        for e in [0.5, 0.6, 0.0, -0.1, f64::NAN] {
            assert!(make_kinematics(e, &pot, unit()).is_err(), "E = {e}");
        }
    }

    #[test]
    fn invalid_units_and_potentials() {
        assert!(Units::new(0.0, 1.0).is_err());
        assert!(Units::new(1.0, f64::INFINITY).is_err());
        assert!(Potential::step_barrier(-1.0).is_err());
        assert!(Potential::square_well(1.0, 0.0).is_err());
    }

    #[test]
    fn regions() {
        let sb = Potential::step_barrier(1.0).unwrap();
        assert_eq!(sb.region(-1e-9), Region::Free);
        assert_eq!(sb.region(0.0), Region::Forbidden);
        let sw = Potential::square_well(1.0, 2.0).unwrap();
        assert_eq!(sw.region(1.999), Region::Free);
        assert_eq!(sw.region(-2.0), Region::Forbidden);
        assert_eq!(sw.value(0.0), 0.0);
        assert_eq!(sw.value(3.0), 1.0);
    }

    #[test]
    fn well_u1_q2_has_two_states() {
        let pot = Potential::square_well(1.0, 2.0).unwrap();
        let states = bound_state_energies(&pot, unit(), ParityFilter::Both).unwrap();
        assert_eq!(states.len(), 2);
        assert_eq!(states[0].parity, Parity::Even);
        assert_eq!(states[1].parity, Parity::Odd);
        // Independent scipy brentq on the same conditions.
        assert!((states[0].k - 0.575_750_436_753_192_5).abs() < 1e-11);
        assert!((states[1].k - 1.116_063_295_948_777_5).abs() < 1e-11);
        for s in &states {
            assert!(matching_residual(s.parity, s.k, s.kappa, 2.0).abs() <= 1e-10 * s.k);
        }
        let odd = bound_state_energies(&pot, unit(), ParityFilter::Odd).unwrap();
        assert_eq!(odd.len(), 1);
        assert_eq!(odd[0].parity, Parity::Odd);
    }

    #[test]
    fn deep_well_approaches_infinite_well_from_below() {
        let q = 1.0;
        let limit = std::f64::consts::PI / (2.0 * q);
        let mut prev = 0.0;
        for u in [10.0, 100.0, 1e4] {
            let pot = Potential::square_well(u, q).unwrap();
            let s = bound_state_energies(&pot, unit(), ParityFilter::Even).unwrap();
            let k0 = s[0].k;
            assert!(k0 < limit && k0 > prev);
            prev = k0;
        }
        assert!(limit - prev < 2e-2);
    }

    #[test]
    fn barrier_has_no_bound_states() {
        let pot = Potential::step_barrier(1.0).unwrap();
        assert!(bound_state_energies(&pot, unit(), ParityFilter::Both).is_err());
    }
}
