//! The (generalized) Hardy Z-function, real on the critical line.

use super::character::Character;
use super::eval::{dirichlet_l, zeta};
use crate::error::Result;
use crate::special::ln_gamma;
use num_complex::Complex64;
use std::f64::consts::PI;

/// An L-function the zero finder can work on.
#[derive(Debug, Clone)]
pub enum LFunction {
    Zeta,
    /// L(s, χ) for a character mod q (possibly imprimitive or principal).
    Dirichlet(Character),
}

impl LFunction {
    pub fn eval(&self, s: Complex64, tol: f64) -> Result<Complex64> {
        match self {
            LFunction::Zeta => zeta(s, tol),
            LFunction::Dirichlet(chi) => dirichlet_l(s, chi, tol),
        }
    }

    pub fn char_id(&self) -> Option<usize> {
        match self {
            LFunction::Zeta => None,
            LFunction::Dirichlet(c) => Some(c.index),
        }
    }
}

/// Z(t) = Re(ε^{-1/2} e^{iθ(t)} L(1/2 + it, χ*)) for the primitive χ*
/// underlying an L-function; zeros on the critical line coincide.
#[derive(Debug, Clone)]
pub struct Hardy {
    primitive: LFunction,
    conductor: f64,
    kappa: f64,
    eps_inv_sqrt: Complex64,
    tol: f64,
}

impl Hardy {
    pub fn new(lf: &LFunction) -> Self {
        match lf {
            LFunction::Zeta => Self::zeta(),
            LFunction::Dirichlet(chi) => {
                let p = chi.primitive();
                if p.modulus() == 1 {
                    return Self::zeta();
                }
                let eps = p.root_number();
                Hardy {
                    conductor: p.modulus() as f64,
                    kappa: p.parity() as f64,
                    eps_inv_sqrt: eps.sqrt().inv(),
                    primitive: LFunction::Dirichlet(p),
                    tol: 1e-13,
                }
            }
        }
    }

    fn zeta() -> Self {
        Hardy {
            primitive: LFunction::Zeta,
            conductor: 1.0,
            kappa: 0.0,
            eps_inv_sqrt: Complex64::new(1.0, 0.0),
            tol: 1e-13,
        }
    }

    /// θ(t) = (t/2) ln(d/π) + Im lnΓ((1/2 + κ + it)/2), continuous in t.
    pub fn theta(&self, t: f64) -> f64 {
        0.5 * t * (self.conductor / PI).ln()
            + ln_gamma(Complex64::new(0.5 * (0.5 + self.kappa), 0.5 * t)).im
    }

    pub fn z(&self, t: f64) -> Result<f64> {
        let l = self.primitive.eval(Complex64::new(0.5, t), self.tol)?;
        Ok((self.eps_inv_sqrt * Complex64::from_polar(1.0, self.theta(t)) * l).re)
    }

    /// Constant in the smooth zero count N(T) ≈ θ(T)/π + offset.
    pub fn count_offset(&self) -> f64 {
        if matches!(self.primitive, LFunction::Zeta) {
            1.0
        } else {
            0.5
        }
    }

    pub fn is_zeta(&self) -> bool {
        matches!(self.primitive, LFunction::Zeta)
    }
}

/// (T/2π) log(T/2πe) + 7/8.
pub fn riemann_von_mangoldt(t: f64) -> f64 {
    t / (2.0 * PI) * (t / (2.0 * PI * std::f64::consts::E)).ln() + 0.875
}
