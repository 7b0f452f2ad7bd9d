//! Constants of the motion `(a, b, c)` that label a microstate.
//!
//! A microstate weights the bilinear form `a*phi1^2 + b*phi2^2 + c*phi1*phi2`
//! built from two independent solutions of the Schrödinger equation. The
//! canonical gauge fixes `ab - c^2/4 = 1`.

use crate::error::{domain, Error, Result};

const NORM_TOL: f64 = 1e-12;
const MONO_TOL: f64 = 1e-12;

/// Raw, not necessarily normalized, coefficients of the bilinear form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Coefficients {
    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    /// `ab - c^2/4`; positive iff the form is positive definite (given a > 0).
    ///
    /// Evaluated as a compensated difference of products, since near the
    /// edge of the cone the two terms nearly cancel.
    pub fn determinant(&self) -> f64 {
        let h = 0.5 * self.c;
        let w = h * h;
        let err = (-h).mul_add(h, w);
        self.a.mul_add(self.b, -w) + err
    }

    /// Evaluates `a*x^2 + b*y^2 + c*x*y`.
    pub fn form(&self, x: f64, y: f64) -> f64 {
        self.a * x * x + self.b * y * y + self.c * x * y
    }

    /// Coefficients of the same form after `phi1 -> alpha*phi1`, `phi2 -> beta*phi2`.
    pub fn rescale(&self, s: BasisRescale) -> Self {
        Self {
            a: self.a / (s.alpha * s.alpha),
            b: self.b / (s.beta * s.beta),
            c: self.c / (s.alpha * s.beta),
        }
    }
}

/// Normalized microstate, `ab - c^2/4 = 1` and `a > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Microstate {
    a: f64,
    b: f64,
    c: f64,
}

impl Microstate {
    /// The monochromatic microstate `(1, 1, 0)`.
    pub const MONOCHROMATIC: Microstate = Microstate {
        a: 1.0,
        b: 1.0,
        c: 0.0,
    };

    /// Accepts coefficients that already satisfy the canonical gauge.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let raw = Coefficients::new(a, b, c);
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return domain(format!("non-finite coefficients ({a}, {b}, {c})"));
        }
        if a <= 0.0 {
            return domain(format!("coefficient a must be positive, got {a}"));
        }
        let det = raw.determinant();
        if (det - 1.0).abs() > NORM_TOL * (1.0 + a * b) {
            return Err(Error::DegenerateMicrostate(format!(
                "ab - c^2/4 = {det}, expected 1"
            )));
        }
        Ok(Self { a, b, c })
    }

    /// Microstate on the `b = (1 + c^2/4)/a` normalization surface.
    pub fn from_a_c(a: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0 && c.is_finite()) {
            return domain(format!(
                "need finite a > 0 and finite c, got a = {a}, c = {c}"
            ));
        }
        Ok(Self {
            a,
            b: (1.0 + 0.25 * c * c) / a,
            c,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn coefficients(&self) -> Coefficients {
        Coefficients::new(self.a, self.b, self.c)
    }

    pub fn is_monochromatic(&self) -> bool {
        (self.a - self.b).abs() <= MONO_TOL && self.c.abs() <= MONO_TOL
    }

    /// Open constraint `a > 0`, `|c| < 2`.
    pub fn is_admissible(&self) -> bool {
        self.a > 0.0 && self.c.abs() < 2.0
    }

    /// Mirror image under `c -> -c`, which swaps the two signs in the dwell time.
    pub fn mirrored(&self) -> Self {
        Self {
            a: self.a,
            b: self.b,
            c: -self.c,
        }
    }
}

impl From<Microstate> for Coefficients {
    fn from(ms: Microstate) -> Self {
        ms.coefficients()
    }
}

/// Scales coefficients by `s = (ab - c^2/4)^{-1/2}` onto the canonical gauge.
pub fn normalize(a_raw: f64, b_raw: f64, c_raw: f64) -> Result<Microstate> {
    let raw = Coefficients::new(a_raw, b_raw, c_raw);
    let det = raw.determinant();
    if !det.is_finite() {
        return domain(format!(
            "non-finite coefficients ({a_raw}, {b_raw}, {c_raw})"
        ));
    }
    if det <= 0.0 {
        return Err(Error::DegenerateMicrostate(format!(
            "ab - c^2/4 = {det} is not positive"
        )));
    }
    if a_raw <= 0.0 {
        return domain(format!("coefficient a must be positive, got {a_raw}"));
    }
    let s = det.sqrt().recip();
    Ok(Microstate {
        a: s * a_raw,
        b: s * b_raw,
        c: s * c_raw,
    })
}

impl TryFrom<Coefficients> for Microstate {
    type Error = Error;

    fn try_from(raw: Coefficients) -> Result<Self> {
        normalize(raw.a, raw.b, raw.c)
    }
}

/// Independent rescaling of the two basis solutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisRescale {
    pub alpha: f64,
    pub beta: f64,
}

impl BasisRescale {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) || alpha == 0.0 || beta == 0.0 {
            return domain(format!(
                "basis scale factors must be finite and nonzero, got ({alpha}, {beta})"
            ));
        }
        Ok(Self { alpha, beta })
    }

    pub const IDENTITY: BasisRescale = BasisRescale {
        alpha: 1.0,
        beta: 1.0,
    };

    pub fn inverse(&self) -> Self {
        Self {
            alpha: self.alpha.recip(),
            beta: self.beta.recip(),
        }
    }

    /// Factor by which the basis Wronskian scales.
    pub fn wronskian_factor(&self) -> f64 {
        self.alpha * self.beta
    }
}

/// Re-expresses `ms` in the rescaled basis. Returns the raw coefficients and
/// the Wronskian factor `alpha*beta`.
pub fn transform_basis(ms: &Microstate, s: BasisRescale) -> (Coefficients, f64) {
    (ms.coefficients().rescale(s), s.wronskian_factor())
}
