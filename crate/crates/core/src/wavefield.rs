//! Region bases, the trajectory-representation conjugate momentum `W_x`,
//! the stationary quantum Hamilton–Jacobi residual, and Copenhagen densities.
//!
//! In each region the momentum is generated by the bilinear form
//!
//! ```text
//! W_x = hbar |W0| (ab - c^2/4)^{1/2} / (a phi1^2 + b phi2^2 + c phi1 phi2)
//! ```
//!
//! which is invariant under independent rescalings of `phi1`, `phi2` once the
//! coefficients are transformed accordingly. All derivatives are analytic:
//! with `D` the bilinear form and `phi'' = s phi` (`s = -k^2` free,
//! `s = kappa^2` forbidden), `D''' = 4 s D'`.

use crate::error::{domain, Error, Result};
use crate::microstate::{BasisRescale, Coefficients};
use crate::potential::{
    bound_state_energies, BoundState, Kinematics, Parity, ParityFilter, Potential, Region, Units,
};

/// Two independent solutions in one region, `x` measured from the interface.
///
/// Free: `(alpha sin kx, beta cos kx)`, Wronskian `-alpha beta k`.
/// Forbidden: `(alpha e^{-kappa x}, beta e^{kappa x})`, Wronskian `2 alpha beta kappa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionBasis {
    pub region: Region,
    /// `k` in the free region, `kappa` in the forbidden one.
    pub wavenumber: f64,
    pub scale: BasisRescale,
}

/// Values and first derivatives of the two basis functions at one point.
#[derive(Debug, Clone, Copy)]
pub struct BasisPoint {
    pub phi1: f64,
    pub phi2: f64,
    pub dphi1: f64,
    pub dphi2: f64,
}

pub fn canonical_basis(region: Region, kin: &Kinematics) -> RegionBasis {
    let wavenumber = match region {
        Region::Free => kin.k,
        Region::Forbidden => kin.kappa,
    };
    RegionBasis {
        region,
        wavenumber,
        scale: BasisRescale::IDENTITY,
    }
}

impl RegionBasis {
    pub fn rescaled(&self, s: BasisRescale) -> Self {
        Self {
            scale: BasisRescale {
                alpha: self.scale.alpha * s.alpha,
                beta: self.scale.beta * s.beta,
            },
            ..*self
        }
    }

    /// Same region and scaling, wavenumber re-derived from `kin`.
    pub fn with_kinematics(&self, kin: &Kinematics) -> Self {
        Self {
            scale: self.scale,
            ..canonical_basis(self.region, kin)
        }
    }

    pub fn eval(&self, x: f64) -> BasisPoint {
        let w = self.wavenumber;
        let BasisRescale { alpha, beta } = self.scale;
        match self.region {
            Region::Free => {
                let (s, c) = (w * x).sin_cos();
                BasisPoint {
                    phi1: alpha * s,
                    phi2: beta * c,
                    dphi1: alpha * w * c,
                    dphi2: -beta * w * s,
                }
            }
            Region::Forbidden => {
                let (em, ep) = ((-w * x).exp(), (w * x).exp());
                BasisPoint {
                    phi1: alpha * em,
                    phi2: beta * ep,
                    dphi1: -alpha * w * em,
                    dphi2: beta * w * ep,
                }
            }
        }
    }

    /// `phi'' = s phi` in this region.
    pub fn curvature(&self) -> f64 {
        match self.region {
            Region::Free => -self.wavenumber * self.wavenumber,
            Region::Forbidden => self.wavenumber * self.wavenumber,
        }
    }

    /// Closed-form Wronskian `phi1 phi2' - phi1' phi2`.
    pub fn wronskian(&self) -> f64 {
        let ab = self.scale.wronskian_factor();
        match self.region {
            Region::Free => -ab * self.wavenumber,
            Region::Forbidden => 2.0 * ab * self.wavenumber,
        }
    }

    /// Wronskian evaluated pointwise from the basis functions.
    pub fn wronskian_at(&self, x: f64) -> f64 {
        let p = self.eval(x);
        p.phi1 * p.dphi2 - p.dphi1 * p.phi2
    }
}

/// Bilinear form `D` and its first three x-derivatives.
#[derive(Debug, Clone, Copy)]
pub struct FormDerivatives {
    pub d0: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

pub fn form_derivatives(x: f64, coeffs: &Coefficients, basis: &RegionBasis) -> FormDerivatives {
    let p = basis.eval(x);
    let s = basis.curvature();
    let Coefficients { a, b, c } = *coeffs;
    let d0 = coeffs.form(p.phi1, p.phi2);
    let d1 = 2.0 * a * p.phi1 * p.dphi1
        + 2.0 * b * p.phi2 * p.dphi2
        + c * (p.dphi1 * p.phi2 + p.phi1 * p.dphi2);
    let d2 = 2.0 * a * (p.dphi1 * p.dphi1 + s * p.phi1 * p.phi1)
        + 2.0 * b * (p.dphi2 * p.dphi2 + s * p.phi2 * p.phi2)
        + 2.0 * c * (s * p.phi1 * p.phi2 + p.dphi1 * p.dphi2);
    FormDerivatives {
        d0,
        d1,
        d2,
        d3: 4.0 * s * d1,
    }
}

fn check_form(coeffs: &Coefficients) -> Result<f64> {
    let det = coeffs.determinant();
    if !(det > 0.0) || !(coeffs.a > 0.0) {
        return Err(Error::DegenerateMicrostate(format!(
            "bilinear form not positive definite: a = {}, ab - c^2/4 = {det}",
            coeffs.a
        )));
    }
    Ok(det)
}

/// `W_x` together with its x-derivatives.
#[derive(Debug, Clone, Copy)]
pub struct MomentumDerivatives {
    pub wx: f64,
    pub wxx: f64,
    pub wxxx: f64,
}

pub fn momentum_derivatives(
    x: f64,
    coeffs: &Coefficients,
    basis: &RegionBasis,
    units: &Units,
) -> Result<MomentumDerivatives> {
    let det = check_form(coeffs)?;
    let d = form_derivatives(x, coeffs, basis);
    if !(d.d0 > 0.0) {
        return Err(Error::DegenerateMicrostate(format!(
            "bilinear form vanished at x = {x}"
        )));
    }
    let numer = units.hbar * basis.wronskian().abs() * det.sqrt();
    let wx = numer / d.d0;
    let g = d.d1 / d.d0;
    Ok(MomentumDerivatives {
        wx,
        wxx: -wx * g,
        wxxx: wx * (2.0 * g * g - d.d2 / d.d0),
    })
}

/// Conjugate momentum `W_x`, strictly positive.
pub fn conjugate_momentum(
    x: f64,
    coeffs: &Coefficients,
    basis: &RegionBasis,
    units: &Units,
) -> Result<f64> {
    momentum_derivatives(x, coeffs, basis, units).map(|m| m.wx)
}

/// `dW_x/dE` at fixed coefficients and fixed x.
///
/// Both basis functions depend on `w x`, so `dD/dw = (x/w) D'`, and
/// `|W0|` is proportional to `w`.
pub fn momentum_energy_derivative(
    x: f64,
    coeffs: &Coefficients,
    basis: &RegionBasis,
    kin: &Kinematics,
) -> Result<f64> {
    let wx = conjugate_momentum(x, coeffs, basis, &kin.units)?;
    let d = form_derivatives(x, coeffs, basis);
    let w = basis.wavenumber;
    let dwx_dw = wx * (1.0 - x * d.d1 / d.d0) / w;
    let hbar2 = kin.units.hbar * kin.units.hbar;
    let dw_de = match basis.region {
        Region::Free => kin.units.mass / (hbar2 * kin.k),
        Region::Forbidden => -kin.units.mass / (hbar2 * kin.kappa),
    };
    Ok(dwx_dw * dw_de)
}

/// Schwarzian bracket `W_xxx/W_x - 3/2 (W_xx/W_x)^2` of the reduced action.
pub fn schwarzian(
    x: f64,
    coeffs: &Coefficients,
    basis: &RegionBasis,
    units: &Units,
) -> Result<f64> {
    let m = momentum_derivatives(x, coeffs, basis, units)?;
    let r2 = m.wxx / m.wx;
    Ok(m.wxxx / m.wx - 1.5 * r2 * r2)
}

/// Residual of the stationary quantum Hamilton–Jacobi equation,
/// `W_x^2/2m + V - E + (hbar^2/4m)[W_xxx/W_x - 3/2 (W_xx/W_x)^2]`.
///
/// The quantum term enters with `+` on this side: writing
/// `psi = R e^{iW/hbar}` with `R = W_x^{-1/2}` gives
/// `W_x^2/2m + V - E = (hbar^2/2m) R''/R = -(hbar^2/4m) {W; x}`.
pub fn qshje_residual(
    x: f64,
    coeffs: &Coefficients,
    basis: &RegionBasis,
    kin: &Kinematics,
) -> Result<f64> {
    let units = &kin.units;
    let wx = conjugate_momentum(x, coeffs, basis, units)?;
    let potential = match basis.region {
        Region::Free => 0.0,
        Region::Forbidden => kin.height,
    };
    let classical = wx * wx / (2.0 * units.mass) + potential - kin.energy;
    let quantum =
        units.hbar * units.hbar / (4.0 * units.mass) * schwarzian(x, coeffs, basis, units)?;
    Ok(classical + quantum)
}

/// A square-well eigenstate selected by parity and index within that parity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellEigenstate {
    pub potential: Potential,
    pub state: BoundState,
    /// 0-based position among states of the same parity.
    pub index: usize,
    pub kinematics: Kinematics,
}

impl WellEigenstate {
    pub fn new(potential: Potential, units: Units, parity: Parity, index: usize) -> Result<Self> {
        let filter = match parity {
            Parity::Even => ParityFilter::Even,
            Parity::Odd => ParityFilter::Odd,
        };
        let states = bound_state_energies(&potential, units, filter)?;
        let Some(&state) = states.get(index) else {
            return domain(format!(
                "well has {} {} state(s); index {index} out of range",
                states.len(),
                parity.as_str()
            ));
        };
        let kinematics = Kinematics::new(state.energy, potential.height(), units)?;
        Ok(Self {
            potential,
            state,
            index,
            kinematics,
        })
    }

    /// Ground state (lowest even state).
    pub fn ground(potential: Potential, units: Units) -> Result<Self> {
        Self::new(potential, units, Parity::Even, 0)
    }

    pub fn parity(&self) -> Parity {
        self.state.parity
    }

    pub fn half_width(&self) -> f64 {
        self.potential
            .half_width()
            .expect("well eigenstate on a square well")
    }

    /// Unnormalized real eigenfunction, unit amplitude inside the well.
    pub fn psi(&self, x: f64) -> f64 {
        let q = self.half_width();
        let (k, kappa) = (self.kinematics.k, self.kinematics.kappa);
        let inside = |y: f64| match self.state.parity {
            Parity::Even => (k * y).cos(),
            Parity::Odd => (k * y).sin(),
        };
        if x.abs() < q {
            inside(x)
        } else {
            inside(q.copysign(x)) * (-kappa * (x.abs() - q)).exp()
        }
    }

    /// Zeros of `psi` in the open interval `(lo, hi)`.
    ///
    /// Nodes only occur inside the well: `cos(kx) = 0` (even) or
    /// `sin(kx) = 0` (odd).
    pub fn nodes(&self, lo: f64, hi: f64) -> Vec<f64> {
        let q = self.half_width();
        let k = self.kinematics.k;
        let offset = match self.state.parity {
            Parity::Even => 0.5,
            Parity::Odd => 0.0,
        };
        let step = std::f64::consts::PI / k;
        let jmax = (q / step - offset).ceil() as i64 + 1;
        (-jmax..=jmax)
            .map(|j| (j as f64 + offset) * step)
            .filter(|&x| x.abs() < q && x > lo && x < hi)
            .collect()
    }
}

/// The two Copenhagen states the coverage queries use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CopenhagenState {
    /// Unit-amplitude wave incident on the step barrier from the left.
    BarrierScattering {
        kinematics: Kinematics,
    },
    WellEigenstate(WellEigenstate),
}

impl CopenhagenState {
    pub fn barrier(kinematics: Kinematics) -> Self {
        Self::BarrierScattering { kinematics }
    }

    pub fn kinematics(&self) -> &Kinematics {
        match self {
            Self::BarrierScattering { kinematics } => kinematics,
            Self::WellEigenstate(w) => &w.kinematics,
        }
    }

    /// `psi^dagger psi` at `x`.
    pub fn density(&self, x: f64) -> f64 {
        match self {
            Self::BarrierScattering { kinematics } => {
                let (k, kappa) = (kinematics.k, kinematics.kappa);
                let n = k * k + kappa * kappa;
                if x >= 0.0 {
                    4.0 * k * k / n * (-2.0 * kappa * x).exp()
                } else {
                    // psi = e^{ikx} + R e^{-ikx}, R = (k - i kappa)/(k + i kappa)
                    let (rr, ri) = ((k * k - kappa * kappa) / n, -2.0 * k * kappa / n);
                    let (s, c) = (k * x).sin_cos();
                    let re = c + rr * c + ri * s;
                    let im = s + ri * c - rr * s;
                    re * re + im * im
                }
            }
            Self::WellEigenstate(w) => {
                let psi = w.psi(x);
                psi * psi
            }
        }
    }
}

/// Checked form of [`CopenhagenState::density`].
pub fn copenhagen_density(state: &CopenhagenState, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return domain(format!("density requested at non-finite x = {x}"));
    }
    Ok(state.density(x))
}

/// Nodes of a well eigenstate on `(lo, hi)`; barrier states have none to report.
pub fn find_nodes(state: &CopenhagenState, lo: f64, hi: f64) -> Result<Vec<f64>> {
    match state {
        CopenhagenState::WellEigenstate(w) => Ok(w.nodes(lo, hi)),
        CopenhagenState::BarrierScattering { .. } => {
            domain("node search is defined for well eigenstates")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::microstate::{transform_basis, Microstate};
    use rand::{Rng, SeedableRng};

    fn canonical() -> Kinematics {
        Kinematics::new(0.18, 0.5, Units::default()).unwrap()
    }

    #[test]
    fn basis_at_origin() {
        let kin = canonical();
        let free = canonical_basis(Region::Free, &kin);
        let p = free.eval(0.0);
        assert_eq!((p.phi1, p.phi2), (0.0, 1.0));
        assert!((free.wronskian() + 0.6).abs() < 1e-15);
        let forb = canonical_basis(Region::Forbidden, &kin);
        let p = forb.eval(0.0);
        assert_eq!((p.phi1, p.phi2), (1.0, 1.0));
        assert!((forb.wronskian() - 1.6).abs() < 1e-15);
    }

    #[test]
    fn wronskian_is_constant() {
        let kin = canonical();
        for region in [Region::Free, Region::Forbidden] {
            let b = canonical_basis(region, &kin).rescaled(BasisRescale::new(1.7, -0.4).unwrap());
            for x in [0.0, 0.3, 1.7, 4.0] {
                let w = b.wronskian_at(x);
                assert!(
                    (w - b.wronskian()).abs() <= 1e-12 * b.wronskian().abs(),
                    "{region:?} x={x}"
                );
            }
        }
    }

    #[test]
    fn momentum_examples() {
        let kin = canonical();
        let u = kin.units;
        let free = canonical_basis(Region::Free, &kin);
        let mono = Microstate::MONOCHROMATIC.coefficients();
        for x in [-3.0, -0.2, 0.0, 1.1] {
            let w = conjugate_momentum(x, &mono, &free, &u).unwrap();
            assert!((w - 0.6).abs() < 1e-15);
        }
        let forb = canonical_basis(Region::Forbidden, &kin);
        assert!((conjugate_momentum(0.0, &mono, &forb, &u).unwrap() - 0.8).abs() < 1e-15);
        let ms = Microstate::new(2.0, 1.0, 2.0).unwrap().coefficients();
        assert!((conjugate_momentum(0.0, &ms, &forb, &u).unwrap() - 0.32).abs() < 1e-15);
    }

    #[test]
    fn monochromatic_forbidden_is_sech() {
        let kin = canonical();
        let forb = canonical_basis(Region::Forbidden, &kin);
        let mono = Microstate::MONOCHROMATIC.coefficients();
        for i in 0..50 {
            let x = i as f64 * 0.3;
            let w = conjugate_momentum(x, &mono, &forb, &kin.units).unwrap();
            let closed = kin.kappa / (2.0 * kin.kappa * x).cosh();
            assert!((w - closed).abs() <= 1e-12 * closed);
        }
    }

    #[test]
    fn qshje_examples() {
        let kin = canonical();
        let free = canonical_basis(Region::Free, &kin);
        let forb = canonical_basis(Region::Forbidden, &kin);
        let mono = Microstate::MONOCHROMATIC.coefficients();
        assert_eq!(qshje_residual(2.5, &mono, &free, &kin).unwrap(), 0.0);
        let ms = Microstate::new(2.0, 1.0, 2.0).unwrap().coefficients();
        assert!(qshje_residual(0.7, &ms, &forb, &kin).unwrap().abs() <= 1e-8 * kin.energy);
        assert!(qshje_residual(2.0, &mono, &forb, &kin).unwrap().abs() <= 1e-8 * kin.energy);
    }

    #[test]
    fn opposite_sign_of_quantum_term_fails() {
        let kin = canonical();
        let forb = canonical_basis(Region::Forbidden, &kin);
        let mono = Microstate::MONOCHROMATIC.coefficients();
        let x = 0.7;
        let wx = conjugate_momentum(x, &mono, &forb, &kin.units).unwrap();
        let classical = wx * wx / 2.0 + kin.height - kin.energy;
        let s = schwarzian(x, &mono, &forb, &kin.units).unwrap();
        assert!((classical - s / 4.0).abs() > 0.1);
        assert!((classical + s / 4.0).abs() < 1e-14);
    }

    #[test]
    fn wrong_potential_residual_is_detected() {
        // A momentum field evaluated against the wrong energy must fail the residual.
        let kin = canonical();
        let other = kin.at_energy(0.2).unwrap();
        let forb = canonical_basis(Region::Forbidden, &kin);
        let ms = Microstate::new(2.0, 1.0, 2.0).unwrap().coefficients();
        assert!(qshje_residual(0.7, &ms, &forb, &other).unwrap().abs() > 1e-3);
    }

    #[test]
    fn form_derivatives_match_finite_differences() {
        let kin = canonical();
        let ms = Coefficients::new(1.3, 0.9, -0.7);
        for region in [Region::Free, Region::Forbidden] {
            let b = canonical_basis(region, &kin);
            let x = 0.37;
            let h = 1e-4;
            let d = |x| form_derivatives(x, &ms, &b);
            let fd1 = (d(x + h).d0 - d(x - h).d0) / (2.0 * h);
            let fd2 = (d(x + h).d1 - d(x - h).d1) / (2.0 * h);
            let fd3 = (d(x + h).d2 - d(x - h).d2) / (2.0 * h);
            let e = d(x);
            assert!((fd1 - e.d1).abs() < 1e-7, "{region:?}");
            assert!((fd2 - e.d2).abs() < 1e-7, "{region:?}");
            assert!((fd3 - e.d3).abs() < 1e-7, "{region:?}");
        }
    }

    #[test]
    fn energy_derivative_matches_finite_difference() {
        let kin = canonical();
        let ms = Coefficients::new(1.3, (1.0 + 0.49 / 4.0) / 1.3, 0.7);
        for region in [Region::Free, Region::Forbidden] {
            let b = canonical_basis(region, &kin);
            let x = 0.9;
            let h = 1e-6;
            let w = |e: f64| {
                let k2 = kin.at_energy(e).unwrap();
                conjugate_momentum(x, &ms, &b.with_kinematics(&k2), &k2.units).unwrap()
            };
            let fd = (w(kin.energy + h) - w(kin.energy - h)) / (2.0 * h);
            let an = momentum_energy_derivative(x, &ms, &b, &kin).unwrap();
            assert!(
                (fd - an).abs() < 1e-7 * an.abs().max(1.0),
                "{region:?}: {fd} vs {an}"
            );
        }
    }

    #[test]
    fn gauge_invariance() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let kin = canonical();
        let ms = Microstate::new(2.0, 1.0, 2.0).unwrap();
        for region in [Region::Free, Region::Forbidden] {
            let base = canonical_basis(region, &kin);
            let s =
                BasisRescale::new(rng.random_range(0.2..5.0), -rng.random_range(0.2..5.0)).unwrap();
            let (raw, _) = transform_basis(&ms, s);
            let scaled = base.rescaled(s);
            for _ in 0..100 {
                let x = rng.random_range(0.0..3.0);
                let w0 = conjugate_momentum(x, &ms.coefficients(), &base, &kin.units).unwrap();
                let w1 = conjugate_momentum(x, &raw, &scaled, &kin.units).unwrap();
                assert!((w0 - w1).abs() <= 1e-12 * w0);
            }
        }
    }

    #[test]
    fn degenerate_form_is_rejected() {
        let kin = canonical();
        let b = canonical_basis(Region::Free, &kin);
        let bad = Coefficients::new(1.0, 1.0, 2.0);
        assert!(matches!(
            conjugate_momentum(0.3, &bad, &b, &kin.units),
            Err(Error::DegenerateMicrostate(_))
        ));
    }

    #[test]
    fn barrier_density() {
        let state = CopenhagenState::barrier(canonical());
        let rho = copenhagen_density(&state, 0.5).unwrap();
        assert!((rho - 1.44 * (-0.8f64).exp()).abs() < 1e-15);
        assert!((rho - 0.647_034).abs() < 1e-6);
        assert!(state.density(200.0) > 0.0);
        assert!(state.density(2000.0) >= 0.0);
        // continuity at the wall
        assert!((state.density(-1e-12) - state.density(0.0)).abs() < 1e-10);
        assert!(copenhagen_density(&state, f64::NAN).is_err());
        assert!(find_nodes(&state, 0.0, 1.0).is_err());
    }

    fn well() -> Potential {
        Potential::square_well(1.0, 2.0).unwrap()
    }

    #[test]
    fn well_density_is_c1_at_walls() {
        for parity in [Parity::Even, Parity::Odd] {
            let w = WellEigenstate::new(well(), Units::default(), parity, 0).unwrap();
            for q in [2.0, -2.0] {
                let h = 1e-7;
                let left = w.psi(q - h);
                let right = w.psi(q + h);
                assert!((left - right).abs() < 1e-6);
                let dl = (w.psi(q - h) - w.psi(q - 2.0 * h)) / h;
                let dr = (w.psi(q + 2.0 * h) - w.psi(q + h)) / h;
                assert!((dl - dr).abs() < 1e-5, "{parity:?} q={q}: {dl} {dr}");
            }
        }
    }

    #[test]
    fn nodes() {
        let ground = WellEigenstate::ground(well(), Units::default()).unwrap();
        assert!(ground.nodes(-2.0, 2.0).is_empty());
        let odd = WellEigenstate::new(well(), Units::default(), Parity::Odd, 0).unwrap();
        let state = CopenhagenState::WellEigenstate(odd);
        assert_eq!(find_nodes(&state, -2.0, 2.0).unwrap(), vec![0.0]);
        assert_eq!(state.density(0.0), 0.0);
        assert!(state.density(1e-3) > 0.0 && state.density(-1e-3) > 0.0);
        assert!(WellEigenstate::new(well(), Units::default(), Parity::Odd, 1).is_err());
    }

    #[test]
    fn excited_nodes_are_isolated_zeros() {
        let pot = Potential::square_well(20.0, 2.0).unwrap();
        for parity in [Parity::Even, Parity::Odd] {
            for index in 0..3 {
                let w = WellEigenstate::new(pot, Units::default(), parity, index).unwrap();
                let state = CopenhagenState::WellEigenstate(w);
                let nodes = w.nodes(-2.0, 2.0);
                let expected = match parity {
                    Parity::Even => 2 * index,
                    Parity::Odd => 2 * index + 1,
                };
                assert_eq!(nodes.len(), expected, "{parity:?} {index}");
                for x in nodes {
                    assert!(state.density(x) <= 1e-20);
                    assert!(state.density(x + 1e-3) > 0.0 && state.density(x - 1e-3) > 0.0);
                }
            }
        }
    }
}
