//! The residue R_{α,s₀}(x) of (F/G)(s)·x^{s−α}/(s−α) left over after the
//! zeros of G are collected, for F with at most one simple pole s₀.

/// Laurent data at the pole of F: F(s) = d₀/(s − s₀) + d₁ + O(s − s₀).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleData {
    pub s0: f64,
    pub d0: f64,
    pub d1: f64,
    /// G(s₀), G'(s₀)
    pub g: f64,
    pub g_prime: f64,
}

/// One branch of the five-way residue table, in the variable x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResidueSpec {
    /// Neither α nor s₀ lies inside the contour strip.
    Zero,
    /// F(α)/G(α).
    Constant(f64),
    /// amp · x^exponent, with amp = d₀/((s₀−α)G(s₀)) and exponent = s₀ − α.
    Power { amp: f64, exponent: f64 },
    PowerPlusConstant { amp: f64, exponent: f64, constant: f64 },
    /// slope · log x + intercept (α = s₀: double pole).
    LogLinear { slope: f64, intercept: f64 },
}

/// Selects the branch for a strip (b, upper). `f_over_g_alpha` is F(α)/G(α)
/// and is only consulted when α is inside and differs from s₀.
pub fn residue_spec(alpha: f64, b: f64, upper: f64, pole: Option<&PoleData>, f_over_g_alpha: f64) -> ResidueSpec {
    let inside = |s: f64| b < s && s < upper;
    let a_in = inside(alpha);
    match pole.filter(|p| inside(p.s0)) {
        None if a_in => ResidueSpec::Constant(f_over_g_alpha),
        None => ResidueSpec::Zero,
        Some(p) if a_in && alpha == p.s0 => ResidueSpec::LogLinear {
            slope: p.d0 / p.g,
            intercept: p.d1 / p.g - p.d0 * p.g_prime / (p.g * p.g),
        },
        Some(p) => {
            let amp = p.d0 / ((p.s0 - alpha) * p.g);
            let exponent = p.s0 - alpha;
            if a_in {
                ResidueSpec::PowerPlusConstant {
                    amp,
                    exponent,
                    constant: f_over_g_alpha,
                }
            } else {
                ResidueSpec::Power { amp, exponent }
            }
        }
    }
}

/// A residue after multiplication by the normalization e^{(α−1/2)y},
/// sorted by its growth rate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NormalizedResidue {
    /// Pieces with rate 0: part of the constant c.
    pub constant: f64,
    /// Pieces amp·e^{rate·y} with rate < 0.
    pub transients: [Option<(f64, f64)>; 2],
    /// Slope of a y-linear piece.
    pub secular_slope: Option<f64>,
    /// Pieces with rate > 0; the truth side subtracts these exactly.
    pub growing: [Option<(f64, f64)>; 2],
}

impl NormalizedResidue {
    fn push(&mut self, amp: f64, rate: f64) {
        if amp == 0.0 {
            return;
        }
        const EPS: f64 = 1e-12;
        let slot = if rate.abs() < EPS {
            self.constant += amp;
            return;
        } else if rate < 0.0 {
            &mut self.transients
        } else {
            &mut self.growing
        };
        let free = slot.iter_mut().find(|s| s.is_none()).expect("at most two pieces");
        *free = Some((amp, rate));
    }
}

pub fn split_normalized(spec: ResidueSpec, alpha: f64) -> NormalizedResidue {
    let shift = alpha - 0.5;
    let mut out = NormalizedResidue::default();
    match spec {
        ResidueSpec::Zero => {}
        ResidueSpec::Constant(v) => out.push(v, shift),
        ResidueSpec::Power { amp, exponent } => out.push(amp, exponent + shift),
        ResidueSpec::PowerPlusConstant { amp, exponent, constant } => {
            out.push(amp, exponent + shift);
            out.push(constant, shift);
        }
        ResidueSpec::LogLinear { slope, intercept } => {
            // α = s₀ = 1/2 is the only double pole on the normalization line
            assert!(shift.abs() < 1e-12, "log-linear residue off the critical normalization");
            out.secular_slope = Some(slope);
            out.push(intercept, 0.0);
        }
    }
    out
}
