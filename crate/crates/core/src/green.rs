//! Scattering Green tensor of a planar structure at coincident points.
//!
//! ```text
//! G⁽¹⁾(z, z, ω) = i/(8π) ∫₀^∞ dq (q/β) e^{2iβz}
//!                 [ (r_s − β²/k² r_p)(e_x e_x + e_y e_y) + 2 q²/k² r_p e_z e_z ]
//! ```
//!
//! Off-diagonal components vanish and `G_yy = G_xx`, so only the xx and zz
//! components are computed.

use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dispersion::{
    feature_points, reflect_halfspace, reflect_slab_mirror, ReflectionPair, WaveNumbers,
};
use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_evanescent_with, integrate_propagating_with, IntegralResult, PanelHints,
    QuadratureSpec,
};
use crate::types::{Geometry, MaterialResponse};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Diagonal Green tensor components at `z`, in inverse length units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenComponents {
    pub g_xx: Complex64,
    pub g_zz: Complex64,
    /// Vacuum wavenumber `ω/c`.
    pub k: f64,
    pub z: f64,
    pub error_estimate: f64,
}

impl GreenComponents {
    pub fn g_yy(&self) -> Complex64 {
        self.g_xx
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Xx,
    Zz,
}

/// Complex value plus absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentValue {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Reflection model of one geometry.
///
/// `offset` is folded into the distance: the integrand carries
/// `e^{2iβ(z − offset)}` together with coefficients multiplied by
/// `e^{2iβ·offset}`. The perfect lens uses this to avoid the overflowing
/// factor `e^{−2iβd}`.
struct Reflector {
    geometry: Geometry,
    material: MaterialResponse,
    offset: f64,
}

impl Reflector {
    fn new(geometry: &Geometry) -> Self {
        match *geometry {
            Geometry::HalfSpace { material } | Geometry::SlabWithMirror { material, .. } => Self {
                geometry: *geometry,
                material,
                offset: 0.0,
            },
            Geometry::PerfectLens { thickness } => Self {
                geometry: *geometry,
                material: MaterialResponse::VACUUM,
                offset: thickness,
            },
        }
    }

    fn reflect(&self, wn: &WaveNumbers) -> Result<ReflectionPair> {
        match self.geometry {
            Geometry::HalfSpace { material } => reflect_halfspace(wn, &material),
            Geometry::SlabWithMirror {
                material,
                thickness,
            } => reflect_slab_mirror(wn, &material, thickness),
            Geometry::PerfectLens { .. } => Ok(ReflectionPair::PERFECT_MIRROR),
        }
    }

    fn is_null(&self) -> bool {
        matches!(self.geometry, Geometry::HalfSpace { material } if material.is_vacuum())
    }

    fn hints(&self, k: f64) -> (PanelHints, PanelHints) {
        let m = &self.material;
        let index = (m.epsilon() * m.mu()).norm().sqrt();
        let mut scale = k * index.max(1.0);
        let mut max_width = None;
        let fp = match self.geometry {
            Geometry::HalfSpace { .. } => feature_points(m, k),
            Geometry::SlabWithMirror { thickness, .. } => {
                // Mirror terms survive up to κ ≈ ln(2/loss)/(2d).
                let loss = m.epsilon().im.max(m.mu().im).max(1e-16);
                scale = scale.max((2.0 / loss).ln() / (2.0 * thickness));
                max_width = Some(PI / (8.0 * thickness));
                feature_points(m, k)
            }
            Geometry::PerfectLens { .. } => Default::default(),
        };
        if let Some(&last) = fp.evanescent.last() {
            scale = scale.max(1.5 * last);
        }
        (
            PanelHints {
                breakpoints: fp.propagating,
                max_width,
                feature_scale: None,
            },
            PanelHints {
                breakpoints: fp.evanescent,
                max_width,
                feature_scale: Some(scale),
            },
        )
    }
}

fn check_inputs(z: f64, k: f64, geometry: &Geometry) -> Result<()> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: format!("vacuum wavenumber must be positive, got {k}"),
        });
    }
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::NonDecaying(z));
    }
    if let Geometry::PerfectLens { thickness } = geometry {
        if z <= *thickness {
            return Err(Error::DomainError(format!(
                "perfect lens requires z_A > d (z_A = {z}, d = {thickness})"
            )));
        }
    }
    Ok(())
}

/// Evaluates one component by integrating both sectors of the `q` axis.
pub fn green_component(
    z: f64,
    k: f64,
    geometry: &Geometry,
    component: Component,
    spec: &QuadratureSpec,
) -> Result<ComponentValue> {
    check_inputs(z, k, geometry)?;
    let refl = Reflector::new(geometry);
    if refl.is_null() {
        return Ok(ComponentValue {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let z_eff = z - refl.offset;
    let k2 = k * k;
    let (prop_hints, evan_hints) = refl.hints(k);
    let failure: Cell<Option<Error>> = Cell::new(None);

    let reflect = |wn: WaveNumbers| match refl.reflect(&wn) {
        Ok(r) => Some(r),
        Err(e) => {
            failure.set(Some(e));
            None
        }
    };

    // After q→β: dq q/β = dβ on [0, k] with q² = k² − β².
    let propagating = |beta: f64| {
        let Some(r) = reflect(WaveNumbers::propagating(beta, k, &refl.material)) else {
            return Complex64::new(0.0, 0.0);
        };
        let b2 = beta * beta / k2;
        let bracket = match component {
            Component::Xx => r.r_s - r.r_p * b2,
            Component::Zz => r.r_p * (2.0 * (1.0 - b2)),
        };
        (2.0 * I * beta * z_eff).exp() * bracket
    };
    // After q→κ: dq q/β = −i dκ with q² = k² + κ²; e^{−2κz} is applied by
    // the integrator.
    let evanescent = |kappa: f64| {
        let Some(r) = reflect(WaveNumbers::evanescent(kappa, k, &refl.material)) else {
            return Complex64::new(0.0, 0.0);
        };
        let k2r = kappa * kappa / k2;
        match component {
            Component::Xx => r.r_s + r.r_p * k2r,
            Component::Zz => r.r_p * (2.0 * (1.0 + k2r)),
        }
    };

    let prop = integrate_propagating_with(propagating, k, z_eff, &prop_hints, spec);
    let evan = integrate_evanescent_with(evanescent, z_eff, &evan_hints, spec);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let prefactor = Complex64::new(1.0 / (8.0 * PI), 0.0);
    let prop = prop?.scaled(I * prefactor);
    let evan = evan?.scaled(prefactor);
    Ok(sum_sectors(prop, evan))
}

fn sum_sectors(prop: IntegralResult, evan: IntegralResult) -> ComponentValue {
    ComponentValue {
        value: prop.value + evan.value,
        error_estimate: prop.error_estimate + evan.error_estimate,
        evaluations: prop.evaluations + evan.evaluations,
    }
}

/// `G⁽¹⁾_xx(z, z, ω)` for vacuum wavenumber `k = ω/c`.
pub fn green_xx(
    z: f64,
    k: f64,
    geometry: &Geometry,
    spec: &QuadratureSpec,
) -> Result<ComponentValue> {
    green_component(z, k, geometry, Component::Xx, spec)
}

/// `G⁽¹⁾_zz(z, z, ω)`; only `r_p` contributes.
pub fn green_zz(
    z: f64,
    k: f64,
    geometry: &Geometry,
    spec: &QuadratureSpec,
) -> Result<ComponentValue> {
    green_component(z, k, geometry, Component::Zz, spec)
}

pub fn green_tensor(
    z: f64,
    k: f64,
    geometry: &Geometry,
    spec: &QuadratureSpec,
) -> Result<GreenComponents> {
    let xx = green_xx(z, k, geometry, spec)?;
    let zz = green_zz(z, k, geometry, spec)?;
    Ok(GreenComponents {
        g_xx: xx.value,
        g_zz: zz.value,
        k,
        z,
        error_estimate: xx.error_estimate + zz.error_estimate,
    })
}

/// Closed-form Green components of a perfect mirror at distance `z`.
///
/// With `x = 2kz`: `G_xx = k e^{ix}(1 − ix − x²)/(4πx³)` and
/// `G_zz = k e^{ix}(1 − ix)/(2πx³)`.
pub fn perfect_mirror_green(z: f64, k: f64) -> (Complex64, Complex64) {
    let x = 2.0 * k * z;
    let phase = (I * x).exp();
    let x3 = x * x * x;
    let xx = phase * (1.0 - I * x - x * x) * (k / (4.0 * PI * x3));
    let zz = phase * (1.0 - I * x) * (k / (2.0 * PI * x3));
    (xx, zz)
}
