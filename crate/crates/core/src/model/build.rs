//! Builders: zeros → explicit-formula coefficients for each error term.

use super::residue::{residue_spec, split_normalized, NormalizedResidue, PoleData};
use super::{CoefficientModel, Residue, Secular, Term};
use crate::arith::{checked_residue, ErrorTermKind};
use crate::error::{Error, Result};
use crate::special::{li, EULER_GAMMA};
use crate::zeros::{DatasetKind, ZeroDataset, ZeroDatum};
use crate::zeta::{complex_derivative, dirichlet_l, zeta_derivative_real, zeta_real, CharacterTable, LFunction};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Left edge of the Perron contour strip: right of every trivial zero,
/// left of α ≥ 0 and of s₀ = 1/2.
const STRIP_LEFT: f64 = -0.25;
/// c + α = 1 + 1/log x stays just right of 1.
const STRIP_RIGHT: f64 = 1.0 + 1e-9;

/// Contour used for the residue at s = 0 of 1/(s·L(s, χ)).
const CONTOUR_RADIUS: f64 = 0.25;
const CONTOUR_NODES: usize = 32;

fn rho(gamma: f64) -> Complex64 {
    Complex64::new(0.5, gamma)
}

fn require_zeta(ds: &ZeroDataset) -> Result<()> {
    if ds.kind != DatasetKind::Zeta {
        return Err(Error::InvalidArgument("dataset must hold zeta zeros".into()));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} outside [0, 1]")));
    }
    Ok(())
}

/// Complex derivatives at every zero, reusing cached values and
/// recomputing the rest (imported files carry magnitudes only).
fn derivatives<F>(zeros: &[ZeroDatum], lf_for: F) -> Result<Vec<Complex64>>
where
    F: Fn(&ZeroDatum) -> Result<LFunction> + Sync,
{
    zeros
        .par_iter()
        .map(|z| {
            let d = match z.deriv {
                Some(d) => d,
                None => complex_derivative(&lf_for(z)?, z.gamma)?,
            };
            if d.norm() < 1e-8 {
                return Err(Error::DegenerateZero {
                    gamma: z.gamma,
                    deriv: d.norm(),
                });
            }
            Ok(d)
        })
        .collect()
}

fn residues_from(n: &NormalizedResidue) -> Vec<Residue<f64>> {
    n.transients
        .iter()
        .flatten()
        .map(|&(amp, rate)| Residue::Exp { amp, rate, power: 0 })
        .collect()
}

/// ψ: rₙ = −2/ρₙ; trivial zeros and the constant log 2π decay after
/// normalization.
pub fn build_psi_model(ds: &ZeroDataset) -> Result<CoefficientModel<f64>> {
    require_zeta(ds)?;
    let terms = ds
        .zeros
        .iter()
        .map(|z| Term {
            lambda: z.gamma,
            r: -2.0 / rho(z.gamma),
        })
        .collect();
    Ok(CoefficientModel::new(ErrorTermKind::Psi.label(), 0.0, terms)?.with_residues(vec![
        Residue::Exp {
            amp: -(2.0 * PI).ln(),
            rate: -0.5,
            power: 0,
        },
        Residue::LogOneMinusExp {
            amp: -0.5,
            rate: -0.5,
            k: 2.0,
        },
    ]))
}

/// M_α: rₙ = 2/((ρₙ − α)ζ'(ρₙ)); the pole of 1/ζ(s)·x^{s−α}/(s−α) at α
/// gives 1/ζ(α), a transient for α < 1/2 and the constant at α = 1/2.
pub fn build_mobius_model(ds: &ZeroDataset, alpha: f64) -> Result<CoefficientModel<f64>> {
    require_zeta(ds)?;
    check_alpha(alpha)?;
    if !ds.is_coefficient_ready() {
        return Err(Error::NotCoefficientReady);
    }
    let d = derivatives(&ds.zeros, |_| Ok(LFunction::Zeta))?;
    let terms = ds
        .zeros
        .iter()
        .zip(&d)
        .map(|(z, &dz)| Term {
            lambda: z.gamma,
            r: 2.0 / ((rho(z.gamma) - alpha) * dz),
        })
        .collect();
    let inv_zeta = if alpha == 1.0 { 0.0 } else { 1.0 / zeta_real(alpha)? };
    let spec = residue_spec(alpha, STRIP_LEFT, STRIP_RIGHT, None, inv_zeta);
    let n = split_normalized(spec, alpha);
    let label = ErrorTermKind::Mobius { alpha }.label();
    Ok(CoefficientModel::new(label, n.constant, terms)?.with_residues(residues_from(&n)))
}

/// L_α: rₙ = 2ζ(2ρₙ)/((ρₙ − α)ζ'(ρₙ)); F = ζ(2s) has its pole at s₀ = 1/2.
pub fn build_liouville_model(ds: &ZeroDataset, alpha: f64) -> Result<CoefficientModel<f64>> {
    require_zeta(ds)?;
    check_alpha(alpha)?;
    if !ds.has_aux() {
        return Err(Error::MissingAux);
    }
    if !ds.is_coefficient_ready() {
        return Err(Error::NotCoefficientReady);
    }
    let d = derivatives(&ds.zeros, |_| Ok(LFunction::Zeta))?;
    let terms = ds
        .zeros
        .iter()
        .zip(&d)
        .map(|(z, &dz)| Term {
            lambda: z.gamma,
            r: 2.0 * z.aux_zeta2rho.expect("checked") / ((rho(z.gamma) - alpha) * dz),
        })
        .collect();
    let pole = PoleData {
        s0: 0.5,
        d0: 0.5,
        d1: EULER_GAMMA,
        g: zeta_real(0.5)?,
        g_prime: zeta_derivative_real(0.5)?,
    };
    let f_over_g = if alpha == 0.5 {
        f64::NAN
    } else if alpha == 1.0 {
        0.0
    } else {
        zeta_real(2.0 * alpha)? / zeta_real(alpha)?
    };
    let spec = residue_spec(alpha, STRIP_LEFT, STRIP_RIGHT, Some(&pole), f_over_g);
    let n = split_normalized(spec, alpha);
    let secular = match n.secular_slope {
        Some(slope) => Secular::LogLinear { slope },
        None => Secular::None,
    };
    let label = ErrorTermKind::Liouville { alpha }.label();
    Ok(CoefficientModel::new(label, n.constant, terms)?
        .with_residues(residues_from(&n))
        .with_secular(secular))
}

/// M(x; q, a): merged over all characters mod q,
/// rₙ = 2χ̄(a)/(φ(q)ρₙL'(ρₙ, χ)). The residue at s = 0 of
/// x^s/(sL(s, χ)) is kept as a contour quadrature.
pub fn build_mobius_ap_model(ds: &ZeroDataset, a: u64) -> Result<CoefficientModel<f64>> {
    let DatasetKind::Dirichlet { q } = ds.kind else {
        return Err(Error::InvalidArgument("dataset must hold Dirichlet zeros".into()));
    };
    let a = checked_residue(q, a)?;
    let table = CharacterTable::new(q)?;
    let phi = table.phi as f64;
    for chi in &table.chars {
        let v = dirichlet_l(Complex64::new(0.5, 0.0), chi, 1e-13)?.norm();
        if v <= 1e-8 {
            return Err(Error::CentralZero {
                q,
                char_id: chi.index,
                value: v,
            });
        }
    }
    if !ds.is_coefficient_ready() {
        return Err(Error::NotCoefficientReady);
    }
    let chi_of = |z: &ZeroDatum| -> Result<usize> {
        z.char_id
            .filter(|&id| id < table.chars.len())
            .ok_or_else(|| Error::InvalidArgument(format!("zero at {} lacks a valid character id", z.gamma)))
    };
    let d = derivatives(&ds.zeros, |z| Ok(LFunction::Dirichlet(table.chars[chi_of(z)?].clone())))?;
    let mut terms = Vec::with_capacity(ds.len());
    for (z, &dz) in ds.zeros.iter().zip(&d) {
        let chi = &table.chars[chi_of(z)?];
        terms.push(Term {
            lambda: z.gamma,
            r: 2.0 * chi.at(a).conj() / (phi * rho(z.gamma) * dz),
        });
    }
    let mut residues = Vec::with_capacity(table.chars.len() * CONTOUR_NODES);
    for chi in &table.chars {
        let weight = chi.at(a).conj() / (phi * CONTOUR_NODES as f64);
        for k in 0..CONTOUR_NODES {
            let arg = PI * (2 * k + 1) as f64 / CONTOUR_NODES as f64;
            let s = Complex64::from_polar(CONTOUR_RADIUS, arg);
            let l = dirichlet_l(s, chi, 1e-13)?;
            residues.push(Residue::ComplexExp {
                w: weight / l,
                s: s - 0.5,
            });
        }
    }
    let label = ErrorTermKind::MobiusAp { q, a }.label();
    Ok(CoefficientModel::new(label, 0.0, terms)?.with_residues(residues))
}

/// y e^{−y/2}(π(x) − Li(x)): rₙ = −2/ρₙ, c = −1 from −li(√x)/2; the
/// offset li(2) in Li is a transient.
pub fn build_pi_li_model(ds: &ZeroDataset) -> Result<CoefficientModel<f64>> {
    require_zeta(ds)?;
    let terms = ds
        .zeros
        .iter()
        .map(|z| Term {
            lambda: z.gamma,
            r: -2.0 / rho(z.gamma),
        })
        .collect();
    Ok(CoefficientModel::new(ErrorTermKind::PiLi.label(), -1.0, terms)?.with_residues(vec![Residue::Exp {
        amp: li(2.0),
        rate: -0.5,
        power: 1,
    }]))
}

/// Dispatches on the error-term kind.
pub fn build_model(kind: &ErrorTermKind, ds: &ZeroDataset) -> Result<CoefficientModel<f64>> {
    kind.validate()?;
    match *kind {
        ErrorTermKind::Psi => build_psi_model(ds),
        ErrorTermKind::Mobius { alpha } => build_mobius_model(ds, alpha),
        ErrorTermKind::Liouville { alpha } => build_liouville_model(ds, alpha),
        ErrorTermKind::MobiusAp { q, a } => {
            if ds.kind != (DatasetKind::Dirichlet { q }) {
                return Err(Error::InvalidArgument(format!("dataset is not for modulus {q}")));
            }
            build_mobius_ap_model(ds, a)
        }
        ErrorTermKind::PiLi => build_pi_li_model(ds),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::{find_zeros, find_zeros_mod};
    use std::sync::OnceLock;

    fn zeta_ds() -> &'static ZeroDataset {
        static DS: OnceLock<ZeroDataset> = OnceLock::new();
        DS.get_or_init(|| {
            let z = find_zeros(&LFunction::Zeta, 60.0, 1e-10).unwrap();
            ZeroDataset::new(DatasetKind::Zeta, z, 60.0, "test").unwrap()
        })
    }

    fn mod_ds(q: u64) -> ZeroDataset {
        let z = find_zeros_mod(q, 30.0, 1e-10).unwrap();
        ZeroDataset::new(DatasetKind::Dirichlet { q }, z, 30.0, "test").unwrap()
    }

    const G1: f64 = 14.134725141734694;
    // ζ'(ρ₁), mpmath
    const D1: (f64, f64) = (0.783296511867031, 0.124699829748277);

    #[test]
    fn psi_first_coefficient() {
        let m = build_psi_model(zeta_ds()).unwrap();
        assert_eq!(m.c, 0.0);
        assert!((m.terms()[0].r.norm() - 2.0 / (0.25 + G1 * G1).sqrt()).abs() < 1e-12);
        // 2/|ρ₁| = 0.1414070...
        assert!((m.terms()[0].r.norm() - 0.1414070).abs() < 1e-7);
        assert_eq!(m.len(), zeta_ds().len());
        assert!(m.terms().windows(2).all(|w| w[0].lambda < w[1].lambda));
        assert!(m.terms().iter().all(|t| t.lambda > 0.0));
    }

    #[test]
    fn mobius_coefficients_and_constants() {
        let dz = Complex64::new(D1.0, D1.1);
        let m0 = build_mobius_model(zeta_ds(), 0.0).unwrap();
        let expect = 2.0 / (rho(G1) * dz);
        assert!((m0.terms()[0].r - expect).norm() < 1e-7);
        // 2/(|ρ₁||ζ'(ρ₁)|) with |ζ'(ρ₁)| = 0.7931604...
        assert!((m0.terms()[0].r.norm() - 2.0 / (14.143566 * 0.7931604)).abs() < 1e-6);
        assert_eq!(m0.c, 0.0);
        // 1/ζ(0) = −2, decaying like e^{−y/2}
        assert_eq!(m0.residues.len(), 1);
        assert!((m0.residue_at(2.0) + 2.0 * (-1.0f64).exp()).abs() < 1e-12);

        let mh = build_mobius_model(zeta_ds(), 0.5).unwrap();
        assert!((mh.c - 1.0 / -1.4603545088095868).abs() < 1e-12);
        assert!((mh.c + 0.6847).abs() < 1e-4);
        assert!(mh.residues.is_empty());

        let m1 = build_mobius_model(zeta_ds(), 1.0).unwrap();
        assert_eq!(m1.c, 0.0);
        assert!(m1.residues.is_empty());
        for (a, b) in m0.terms().iter().zip(m1.terms()) {
            assert!((a.r.norm() - b.r.norm()).abs() < 1e-14 * a.r.norm().max(1.0));
        }
        assert!(build_mobius_model(zeta_ds(), 1.5).is_err());
    }

    #[test]
    fn imported_dataset_recomputes_phases() {
        let mut ds = zeta_ds().clone();
        for z in &mut ds.zeros {
            z.deriv = None;
        }
        let a = build_mobius_model(zeta_ds(), 0.0).unwrap();
        let b = build_mobius_model(&ds, 0.0).unwrap();
        assert_eq!(a, b);
        for z in &mut ds.zeros {
            z.deriv_abs = None;
        }
        assert!(matches!(build_mobius_model(&ds, 0.0), Err(Error::NotCoefficientReady)));
    }

    #[test]
    fn liouville_constants() {
        let z12 = -1.4603545088095868;
        let dz12 = -3.9226461392091517;
        let mh = build_liouville_model(zeta_ds(), 0.5).unwrap();
        let expect = EULER_GAMMA / z12 - dz12 / (2.0 * z12 * z12);
        assert!((mh.c - expect).abs() < 1e-10);
        assert!((mh.c - 0.5244138907950185).abs() < 1e-10);
        match mh.secular {
            Secular::LogLinear { slope } => assert!((slope - 0.5 / z12).abs() < 1e-14),
            other => panic!("{other:?}"),
        }

        let m0 = build_liouville_model(zeta_ds(), 0.0).unwrap();
        assert!((m0.c - 1.0 / z12).abs() < 1e-12);
        // ζ(0)/ζ(0) = 1
        assert!((m0.residue_at(4.0) - (-2.0f64).exp()).abs() < 1e-12);
        for a in [0.2, 0.8] {
            let m = build_liouville_model(zeta_ds(), a).unwrap();
            assert!((m.c - 1.0 / ((1.0 - 2.0 * a) * z12)).abs() < 1e-12, "alpha {a}");
            assert!(m.terms().iter().all(|t| t.r.norm().is_finite()));
        }
        let mut ds = zeta_ds().clone();
        ds.zeros[0].aux_zeta2rho = None;
        assert!(matches!(build_liouville_model(&ds, 0.0), Err(Error::MissingAux)));
    }

    #[test]
    fn mobius_ap_mod4_phases() {
        let ds = mod_ds(4);
        let m1 = build_mobius_ap_model(&ds, 1).unwrap();
        let m3 = build_mobius_ap_model(&ds, 3).unwrap();
        assert_eq!(m1.c, 0.0);
        let table = CharacterTable::new(4).unwrap();
        for (z, (t1, t3)) in ds.zeros.iter().zip(m1.terms().iter().zip(m3.terms())) {
            let chi = &table.chars[z.char_id.unwrap()];
            let sign = chi.at(3).re;
            assert!((t3.r - t1.r * sign).norm() < 1e-14);
        }
        // first zero of L(s, χ₋₄) at 6.0209489046975966, |L'(ρ)| = 0.91475...
        let odd = table.chars.iter().find(|c| !c.is_principal()).unwrap().index;
        let z = ds.zeros.iter().position(|z| z.char_id == Some(odd)).unwrap();
        let g = ds.zeros[z].gamma;
        assert!((g - 6.020948904697597).abs() < 1e-8);
        let expect = 2.0 / (2.0 * rho(g).norm() * ds.zeros[z].deriv_abs.unwrap());
        assert!((m1.terms()[z].r.norm() - expect).abs() < 1e-14);
        assert!(matches!(build_mobius_ap_model(&ds, 2), Err(Error::InvalidResidue { .. })));
    }

    #[test]
    fn mobius_ap_q3_factor() {
        let ds = mod_ds(3);
        let m = build_mobius_ap_model(&ds, 1).unwrap();
        for (z, t) in ds.zeros.iter().zip(m.terms()) {
            // 2χ̄(1)/φ(3) = 1
            let expect = 1.0 / (rho(z.gamma) * z.deriv.unwrap());
            assert!((t.r - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn mobius_ap_residue_matches_laurent_expansion() {
        // Principal part: −(ln x + ln3/2 − ln 2π)/ln 3; χ₋₃ part: 1/(2L(0, χ₋₃)) = 3/2
        let m = build_mobius_ap_model(&mod_ds(3), 1).unwrap();
        for y in [2.0f64, 8.0, 18.0] {
            let l3 = 3f64.ln();
            let expect = (-(y + 0.5 * l3 - (2.0 * PI).ln()) / l3 + 1.5) * (-0.5 * y).exp();
            assert!((m.residue_at(y) - expect).abs() < 1e-10, "y = {y}");
        }
    }

    #[test]
    fn pi_li_shape() {
        let m = build_pi_li_model(zeta_ds()).unwrap();
        assert_eq!(m.c, -1.0);
        assert!((m.terms()[0].r + 2.0 / rho(G1)).norm() < 1e-15);
        assert!((m.residue_at(2.0) - li(2.0) * 2.0 * (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn dispatch_checks_kind() {
        assert!(build_model(&ErrorTermKind::Psi, zeta_ds()).is_ok());
        let q3 = mod_ds(3);
        assert!(build_model(&ErrorTermKind::Psi, &q3).is_err());
        assert!(build_model(&ErrorTermKind::MobiusAp { q: 4, a: 1 }, &q3).is_err());
        assert!(build_model(&ErrorTermKind::MobiusAp { q: 3, a: 2 }, &q3).is_ok());
    }
}
