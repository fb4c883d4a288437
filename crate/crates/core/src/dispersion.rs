//! Longitudinal wavenumbers and planar reflection coefficients.
//!
//! All wavenumbers are expressed through the vacuum wavenumber `k = ω/c`,
//! so the functions here are independent of the unit system.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::types::MaterialResponse;

/// Relative size below which a reflection denominator counts as zero.
pub const DEGENERACY_TOLERANCE: f64 = 1e-30;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Propagating,
    Evanescent,
    Grazing,
}

/// `β = √(k² − q²)` in vacuum and `β₁ = √(εμk² − q²)` in the medium.
///
/// `β` has `Im β ≥ 0` (and `Re β ≥ 0` where it is real); `β₁` lies on the
/// passive branch selected by [`passive_sqrt`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveNumbers {
    pub q: f64,
    pub k: f64,
    pub beta: Complex64,
    pub beta1: Complex64,
    pub regime: Regime,
}

impl WaveNumbers {
    /// Point in the propagating sector, parametrized by `β ∈ [0, k]`.
    pub fn propagating(beta: f64, k: f64, material: &MaterialResponse) -> Self {
        debug_assert!((0.0..=k).contains(&beta));
        let q = ((k - beta) * (k + beta)).max(0.0).sqrt();
        let radicand = (material.epsilon() * material.mu() - 1.0) * (k * k) + beta * beta;
        Self {
            q,
            k,
            beta: Complex64::new(beta, 0.0),
            beta1: passive_sqrt(radicand, material),
            regime: if beta == 0.0 {
                Regime::Grazing
            } else {
                Regime::Propagating
            },
        }
    }

    /// Point in the evanescent sector, parametrized by `κ = −iβ ≥ 0`.
    pub fn evanescent(kappa: f64, k: f64, material: &MaterialResponse) -> Self {
        debug_assert!(kappa >= 0.0);
        let q = k.hypot(kappa);
        let radicand = (material.epsilon() * material.mu() - 1.0) * (k * k) - kappa * kappa;
        Self {
            q,
            k,
            beta: Complex64::new(0.0, kappa),
            beta1: passive_sqrt(radicand, material),
            regime: if kappa == 0.0 {
                Regime::Grazing
            } else {
                Regime::Evanescent
            },
        }
    }
}

/// Wavenumbers at transverse wavenumber `q ≥ 0` and vacuum wavenumber `k > 0`.
pub fn wave_numbers(q: f64, k: f64, material: &MaterialResponse) -> WaveNumbers {
    debug_assert!(q >= 0.0 && k > 0.0);
    let diff = (k - q) * (k + q);
    let (beta, regime) = if diff > 0.0 {
        (Complex64::new(diff.sqrt(), 0.0), Regime::Propagating)
    } else if diff < 0.0 {
        (Complex64::new(0.0, (-diff).sqrt()), Regime::Evanescent)
    } else {
        (Complex64::new(0.0, 0.0), Regime::Grazing)
    };
    let radicand = material.epsilon() * material.mu() * (k * k) - q * q;
    WaveNumbers {
        q,
        k,
        beta,
        beta1: passive_sqrt(radicand, material),
        regime,
    }
}

/// Square root on the branch `Im ≥ 0` fixed by passivity of `material`.
///
/// Off the real axis this is the principal root, negated when its imaginary
/// part is negative. On the real axis the result is the limit of adding
/// `+i0` to both ε and μ: the radicand then moves by `i·Re(ε + μ)·0⁺`, so a
/// positive radicand takes the negative root when `Re(ε + μ) < 0`
/// (left-handed media) and the positive root otherwise.
pub fn passive_sqrt(radicand: Complex64, material: &MaterialResponse) -> Complex64 {
    if radicand.im == 0.0 {
        let x = radicand.re;
        return if x > 0.0 {
            let root = x.sqrt();
            if (material.epsilon() + material.mu()).re < 0.0 {
                Complex64::new(-root, 0.0)
            } else {
                Complex64::new(root, 0.0)
            }
        } else {
            Complex64::new(0.0, (-x).sqrt())
        };
    }
    let root = radicand.sqrt();
    if root.im < 0.0 {
        -root
    } else {
        root
    }
}

/// Square root of a passive response function (`Im z ≥ 0`), with
/// `Im √z ≥ 0`; negative reals map to `+i√|z|`.
pub fn sqrt_upper(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        return if z.re >= 0.0 {
            Complex64::new(z.re.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-z.re).sqrt())
        };
    }
    let root = z.sqrt();
    if root.im < 0.0 {
        -root
    } else {
        root
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub r_s: Complex64,
    pub r_p: Complex64,
}

impl ReflectionPair {
    pub const ZERO: ReflectionPair = ReflectionPair {
        r_s: Complex64::new(0.0, 0.0),
        r_p: Complex64::new(0.0, 0.0),
    };

    /// Perfect electric conductor.
    pub const PERFECT_MIRROR: ReflectionPair = ReflectionPair {
        r_s: Complex64::new(-1.0, 0.0),
        r_p: Complex64::new(1.0, 0.0),
    };
}

fn checked_ratio(
    num: Complex64,
    den: Complex64,
    scale: f64,
    polarization: &'static str,
) -> Result<Complex64> {
    // Negated so that a NaN denominator is rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    let degenerate = !(den.norm() > DEGENERACY_TOLERANCE * scale);
    if degenerate {
        return Err(Error::DegenerateDenominator { polarization });
    }
    Ok(num / den)
}

/// Single interface between vacuum and a half space.
pub fn reflect_halfspace(wn: &WaveNumbers, material: &MaterialResponse) -> Result<ReflectionPair> {
    if material.is_vacuum() {
        return Ok(ReflectionPair::ZERO);
    }
    let (beta, beta1) = (wn.beta, wn.beta1);
    let mu_beta = material.mu() * beta;
    let eps_beta = material.epsilon() * beta;
    let scale_s = mu_beta.norm() + beta1.norm();
    let scale_p = eps_beta.norm() + beta1.norm();
    Ok(ReflectionPair {
        r_s: checked_ratio(mu_beta - beta1, mu_beta + beta1, scale_s, "s")?,
        r_p: checked_ratio(eps_beta - beta1, eps_beta + beta1, scale_p, "p")?,
    })
}

/// Slab of thickness `thickness` in front of a perfect conductor.
pub fn reflect_slab_mirror(
    wn: &WaveNumbers,
    material: &MaterialResponse,
    thickness: f64,
) -> Result<ReflectionPair> {
    let (beta, beta1) = (wn.beta, wn.beta1);
    // |e^{2iβ₁d}| ≤ 1 on the passive branch.
    let phase = (2.0 * I * beta1 * thickness).exp();
    debug_assert!(phase.norm() <= 1.0 + 1e-12);

    let mu_beta = material.mu() * beta;
    let s_minus = mu_beta - beta1;
    let s_plus = mu_beta + beta1;
    let r_s = checked_ratio(
        s_minus - s_plus * phase,
        s_plus - s_minus * phase,
        s_plus.norm() + s_minus.norm(),
        "s",
    )?;

    let eps_beta = material.epsilon() * beta;
    let p_minus = eps_beta - beta1;
    let p_plus = eps_beta + beta1;
    let r_p = checked_ratio(
        p_minus + p_plus * phase,
        p_plus + p_minus * phase,
        p_plus.norm() + p_minus.norm(),
        "p",
    )?;
    Ok(ReflectionPair { r_s, r_p })
}

/// Ideal lossless ε = μ = −1 lens backed by a mirror:
/// `r_s = −r_p = −e^{−2iβd}`.
///
/// Grows like `e^{2κd}` in the evanescent sector; integrators combine the
/// exponential with the distance factor instead of calling this directly.
pub fn reflect_perfect_lens(wn: &WaveNumbers, thickness: f64) -> ReflectionPair {
    let phase = (-2.0 * I * wn.beta * thickness).exp();
    ReflectionPair {
        r_s: -phase,
        r_p: phase,
    }
}

/// Normal-incidence coefficient `r_s(q = 0) = (√μ − √ε)/(√μ + √ε)`.
pub fn normal_incidence_rs(material: &MaterialResponse) -> Result<Complex64> {
    let se = sqrt_upper(material.epsilon());
    let sm = sqrt_upper(material.mu());
    checked_ratio(sm - se, sm + se, sm.norm() + se.norm(), "s")
}

/// Locations where the half-space integrand has branch points or
/// near-real poles: `β` values inside `(0, k)` and `κ` values `> 0`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeaturePoints {
    pub propagating: Vec<f64>,
    pub evanescent: Vec<f64>,
}

/// Candidate singular points of the half-space reflection coefficients.
///
/// Covers the branch point `β₁ = 0` and the zeros of `εβ + β₁` (p) and
/// `μβ + β₁` (s). The squared pole conditions may admit roots on the
/// unphysical sheet; those are harmless as quadrature breakpoints.
pub fn feature_points(material: &MaterialResponse, k: f64) -> FeaturePoints {
    let one = Complex64::new(1.0, 0.0);
    let eps = material.epsilon();
    let mu = material.mu();
    let contrast = eps * mu - one;
    // Each candidate is β²/k² for the corresponding condition.
    let candidates = [
        -contrast,
        contrast / (eps * eps - one),
        contrast / (mu * mu - one),
    ];
    let mut fp = FeaturePoints::default();
    for w in candidates {
        if !(w.re.is_finite() && w.im.is_finite()) || w.norm() == 0.0 {
            continue;
        }
        if w.re > 0.0 {
            let beta = k * w.sqrt().re;
            if beta > 0.0 && beta < k {
                fp.propagating.push(beta);
            }
        } else {
            let kappa = k * (-w).sqrt().re;
            if kappa > 0.0 && kappa.is_finite() {
                fp.evanescent.push(kappa);
            }
        }
    }
    for v in [&mut fp.propagating, &mut fp.evanescent] {
        v.sort_by(f64::total_cmp);
        v.dedup();
    }
    fp
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(er: f64, ei: f64, mr: f64, mi: f64) -> MaterialResponse {
        MaterialResponse::from_parts(er, ei, mr, mi).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn vacuum_normal_incidence() {
        let wn = wave_numbers(0.0, 1.0, &MaterialResponse::VACUUM);
        assert_eq!(wn.beta, Complex64::new(1.0, 0.0));
        assert_eq!(wn.beta1, Complex64::new(1.0, 0.0));
        assert_eq!(wn.regime, Regime::Propagating);
    }

    #[test]
    fn vacuum_evanescent_takes_upper_branch() {
        let wn = wave_numbers(2.0, 1.0, &MaterialResponse::VACUUM);
        let expected = Complex64::new(0.0, 3f64.sqrt());
        assert!(close(wn.beta, expected, 1e-15));
        assert!(close(wn.beta1, expected, 1e-15));
        assert_eq!(wn.regime, Regime::Evanescent);
        assert_eq!(
            wave_numbers(1.0, 1.0, &MaterialResponse::VACUUM).regime,
            Regime::Grazing
        );
    }

    #[test]
    fn left_handed_beta1_matches_polar_form() {
        // Oracle: √(εμ) via polar form with the argument taken in (0, π].
        let m = mat(-1.0, 1e-3, -1.0, 1e-3);
        let em = m.epsilon() * m.mu();
        let mut arg = em.arg();
        if arg <= 0.0 {
            arg += 2.0 * std::f64::consts::PI;
        }
        let polar = Complex64::from_polar(em.norm().sqrt(), arg / 2.0);
        let wn = wave_numbers(0.0, 1.0, &m);
        assert!(wn.beta1.im > 0.0);
        assert!(wn.beta1.re < 0.0);
        assert!(close(wn.beta1, polar, 1e-14));
        assert!((wn.beta1.re + 1.0).abs() < 1e-5);
    }

    #[test]
    fn lossless_left_handed_limit_gives_negative_root() {
        let m = mat(-1.0, 0.0, -1.0, 0.0);
        let wn = WaveNumbers::propagating(0.6, 1.0, &m);
        assert_eq!(wn.beta1, Complex64::new(-0.6, 0.0));
        // Consistent with a vanishing loss.
        let lossy = mat(-1.0, 1e-12, -1.0, 1e-12);
        let wl = WaveNumbers::propagating(0.6, 1.0, &lossy);
        assert!(close(wl.beta1, wn.beta1, 1e-9));
        // Negative radicand goes to the upper imaginary axis.
        let we = WaveNumbers::evanescent(0.5, 1.0, &m);
        assert_eq!(we.beta1, Complex64::new(0.0, 0.5));
    }

    #[test]
    fn vacuum_reflects_nothing() {
        for q in [0.0, 0.3, 1.0, 2.5] {
            let wn = wave_numbers(q, 1.0, &MaterialResponse::VACUUM);
            let r = reflect_halfspace(&wn, &MaterialResponse::VACUUM).unwrap();
            assert_eq!(r, ReflectionPair::ZERO);
        }
    }

    #[test]
    fn dielectric_normal_incidence() {
        let m = mat(2.0, 0.0, 1.0, 0.0);
        let r = reflect_halfspace(&wave_numbers(0.0, 1.0, &m), &m).unwrap();
        let s2 = 2f64.sqrt();
        assert!((r.r_p.re - (2.0 - s2) / (2.0 + s2)).abs() < 1e-15);
        assert!((r.r_s.re - (1.0 - s2) / (1.0 + s2)).abs() < 1e-15);
        assert!((r.r_p.re - 0.171_572_875_253_809_9).abs() < 1e-12);
        assert_eq!(r.r_s.im, 0.0);
    }

    #[test]
    fn good_conductor_is_a_mirror() {
        let m = mat(1e8, 0.0, 1.0, 0.0);
        let r = reflect_halfspace(&wave_numbers(0.0, 1.0, &m), &m).unwrap();
        assert!((r.r_p - 1.0).norm() < 1e-3);
        assert!((r.r_s + 1.0).norm() < 1e-3);
    }

    #[test]
    fn lossless_surface_pole_is_reported() {
        // Lossless ε = μ = −1: β₁ = β = iκ, so μβ + β₁ = εβ + β₁ = 0 exactly.
        let m = mat(-1.0, 0.0, -1.0, 0.0);
        let wn = WaveNumbers::evanescent(0.5, 1.0, &m);
        let err = reflect_halfspace(&wn, &m).unwrap_err();
        assert_eq!(err, Error::DegenerateDenominator { polarization: "s" });
    }

    #[test]
    fn thick_slab_reduces_to_half_space() {
        // Im β₁ · d = 50 makes e^{2iβ₁d} ~ e^{-100}.
        let m = mat(2.0, 0.5, 1.0, 0.0);
        let wn = WaveNumbers::propagating(0.7, 1.0, &m);
        let d = 50.0 / wn.beta1.im;
        let slab = reflect_slab_mirror(&wn, &m, d).unwrap();
        let half = reflect_halfspace(&wn, &m).unwrap();
        assert!((slab.r_s - half.r_s).norm() < 1e-20);
        assert!((slab.r_p - half.r_p).norm() < 1e-20);
    }

    #[test]
    fn transparent_slab_is_a_displaced_mirror() {
        // With ε = μ = 1 the slab coefficients collapse to
        // r_s = −e^{2iβd}, r_p = +e^{2iβd}.
        let m = MaterialResponse::VACUUM;
        let d = 1.7;
        for wn in [
            WaveNumbers::propagating(0.3, 1.0, &m),
            WaveNumbers::evanescent(2.0, 1.0, &m),
        ] {
            let phase = (2.0 * I * wn.beta * d).exp();
            let r = reflect_slab_mirror(&wn, &m, d).unwrap();
            assert!(close(r.r_s, -phase, 1e-15));
            assert!(close(r.r_p, phase, 1e-15));
        }
    }

    #[test]
    fn lossless_left_handed_slab_is_the_perfect_lens() {
        let m = mat(-1.0, 0.0, -1.0, 0.0);
        let d = 5.0;
        for wn in [
            WaveNumbers::propagating(0.4, 1.0, &m),
            WaveNumbers::evanescent(0.8, 1.0, &m),
        ] {
            if wn.regime == Regime::Propagating {
                assert_eq!(wn.beta1, -wn.beta);
            } else {
                assert_eq!(wn.beta1, wn.beta);
            }
            let slab = reflect_slab_mirror(&wn, &m, d).unwrap();
            let lens = reflect_perfect_lens(&wn, d);
            let expected = (-2.0 * I * wn.beta * d).exp();
            assert!(close(slab.r_s, -expected, 1e-12));
            assert!(close(slab.r_p, expected, 1e-12));
            assert!(close(lens.r_s, slab.r_s, 1e-12));
            assert!(close(lens.r_p, slab.r_p, 1e-12));
        }
    }

    #[test]
    fn weakly_lossy_left_handed_slab_approaches_lens() {
        let m = mat(-1.0, 1e-9, -1.0, 1e-9);
        let d = 5.0;
        let wn = WaveNumbers::propagating(0.4, 1.0, &m);
        let slab = reflect_slab_mirror(&wn, &m, d).unwrap();
        let lens = reflect_perfect_lens(&wn, d);
        assert!(close(slab.r_s, lens.r_s, 1e-6));
        assert!(close(slab.r_p, lens.r_p, 1e-6));
    }

    #[test]
    fn normal_incidence_helper() {
        let m = mat(9.0, 0.0, 1.0, 0.0);
        assert!(close(
            normal_incidence_rs(&m).unwrap(),
            Complex64::new(-0.5, 0.0),
            1e-15
        ));
        let matched = mat(3.0, 0.2, 3.0, 0.2);
        assert_eq!(
            normal_incidence_rs(&matched).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn surface_plasmon_candidate_is_found() {
        let m = mat(-3.0, 1e-3, 1.0, 0.0);
        let fp = feature_points(&m, 1.0);
        assert!(fp
            .evanescent
            .iter()
            .any(|&kappa| (kappa - 0.5f64.sqrt()).abs() < 1e-3));
    }

    fn lossy_material() -> impl Strategy<Value = MaterialResponse> {
        (-5.0f64..5.0, -4.0f64..0.0, -5.0f64..5.0, -4.0f64..0.0).prop_map(|(er, lei, mr, lmi)| {
            MaterialResponse::from_parts(er, 10f64.powf(lei), mr, 10f64.powf(lmi)).unwrap()
        })
    }

    proptest! {
        #[test]
        fn branch_certificate(m in lossy_material(), q in 0.0f64..10.0) {
            let wn = wave_numbers(q, 1.0, &m);
            prop_assert!(wn.beta.im >= 0.0);
            if wn.beta.im == 0.0 {
                prop_assert!(wn.beta.re >= 0.0);
            }
            if (m.epsilon() * m.mu()).im > 0.0 {
                prop_assert!(wn.beta1.im > 0.0);
            }
            prop_assert!(wn.beta1.im >= 0.0);
            let b2 = Complex64::new(1.0 - q * q, 0.0);
            prop_assert!((wn.beta * wn.beta - b2).norm() <= 1e-12 * b2.norm().max(1.0));
            let b12 = m.epsilon() * m.mu() - q * q;
            prop_assert!((wn.beta1 * wn.beta1 - b12).norm() <= 1e-12 * b12.norm().max(1.0));
        }

        #[test]
        fn parametrizations_agree(m in lossy_material(), t in 0.01f64..0.99, kappa in 0.01f64..10.0) {
            let from_beta = WaveNumbers::propagating(t, 1.0, &m);
            let from_q = wave_numbers(from_beta.q, 1.0, &m);
            prop_assert!((from_beta.beta1 - from_q.beta1).norm() <= 1e-10 * from_q.beta1.norm().max(1.0));
            let from_kappa = WaveNumbers::evanescent(kappa, 1.0, &m);
            let from_q = wave_numbers(from_kappa.q, 1.0, &m);
            prop_assert!((from_kappa.beta1 - from_q.beta1).norm() <= 1e-10 * from_q.beta1.norm().max(1.0));
            prop_assert!((from_kappa.beta - from_q.beta).norm() <= 1e-10 * kappa.max(1.0));
        }

        #[test]
        fn passive_propagating_reflection_is_bounded(m in lossy_material(), t in 0.0f64..1.0) {
            let wn = WaveNumbers::propagating(t, 1.0, &m);
            let r = reflect_halfspace(&wn, &m).unwrap();
            prop_assert!(r.r_s.norm() <= 1.0 + 1e-9);
            prop_assert!(r.r_p.norm() <= 1.0 + 1e-9);
        }

        #[test]
        fn normal_incidence_matches_retarded_form(m in lossy_material()) {
            let r = reflect_halfspace(&wave_numbers(0.0, 1.0, &m), &m).unwrap();
            let expected = normal_incidence_rs(&m).unwrap();
            prop_assert!((r.r_s - expected).norm() <= 1e-12 * expected.norm().max(1.0));
            prop_assert!((r.r_p + expected).norm() <= 1e-12 * expected.norm().max(1.0));
        }

        #[test]
        fn continuous_across_light_line(m in lossy_material()) {
            // Offset in the longitudinal variable; r is linear in β at the light line.
            let off = 1e-8;
            let below = reflect_halfspace(&WaveNumbers::propagating(off, 1.0, &m), &m).unwrap();
            let above = reflect_halfspace(&WaveNumbers::evanescent(off, 1.0, &m), &m).unwrap();
            prop_assert!((below.r_s - above.r_s).norm() <= 1e-6 * below.r_s.norm().max(1.0));
            prop_assert!((below.r_p - above.r_p).norm() <= 1e-6 * below.r_p.norm().max(1.0));
        }
    }
}
