//! Adaptive Gauss–Kronrod integration of the transverse-wavenumber integral.
//!
//! The `q` integral is split at the light line `q = k`. Below it the
//! substitution `β = √(k² − q²)` turns `dq q/β` into `dβ` and removes the
//! endpoint singularity; above it `κ = √(q² − k²)` turns `dq q/β` into
//! `−i dκ` and exposes the decay `e^{−2κz}`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of panel bisections beyond the initial partition.
    pub max_subdivisions: usize,
    /// Relative size below which the evanescent tail is dropped.
    pub tail_cutoff: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-30,
            max_subdivisions: 2000,
            tail_cutoff: 1e-16,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(rel_tol: f64) -> Result<Self> {
        let spec = Self {
            rel_tol,
            ..Self::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "rel_tol",
                reason: format!("must be positive, got {}", self.rel_tol),
            });
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "abs_tol",
                reason: format!("must be positive, got {}", self.abs_tol),
            });
        }
        if !(self.tail_cutoff > 0.0 && self.tail_cutoff < 1.0) {
            return Err(Error::InvalidParameter {
                name: "tail_cutoff",
                reason: format!("must lie in (0, 1), got {}", self.tail_cutoff),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl IntegralResult {
    pub const ZERO: IntegralResult = IntegralResult {
        value: Complex64::new(0.0, 0.0),
        error_estimate: 0.0,
        evaluations: 0,
        converged: true,
    };

    fn combine(self, other: IntegralResult) -> IntegralResult {
        IntegralResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    pub fn scaled(self, factor: Complex64) -> IntegralResult {
        IntegralResult {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.norm(),
            ..self
        }
    }

    fn into_checked(self) -> Result<IntegralResult> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged { result: self })
        }
    }
}

/// Where the integrand has structure the initial partition should resolve.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PanelHints {
    /// Points that must coincide with panel edges.
    pub breakpoints: Vec<f64>,
    /// Upper bound on the initial panel width.
    pub max_width: Option<f64>,
    /// Extent of the region with non-trivial structure (evanescent side).
    pub feature_scale: Option<f64>,
}

// 7-point Gauss / 15-point Kronrod abscissae and weights on [-1, 1], to the
// published digits.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod<F>(f: &F, a: f64, b: f64) -> Panel
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center);
    let mut res_k = f_center * WGK[7];
    let mut res_g = f_center * WG[3];
    let mut res_abs = f_center.norm() * WGK[7];
    let mut samples = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 7];
    for (j, sample) in samples.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let lo = f(center - dx);
        let hi = f(center + dx);
        res_k += (lo + hi) * WGK[j];
        res_abs += (lo.norm() + hi.norm()) * WGK[j];
        if j % 2 == 1 {
            res_g += (lo + hi) * WG[j / 2];
        }
        *sample = (lo, hi);
    }

    let mean = res_k * 0.5;
    let mut res_asc = (f_center - mean).norm() * WGK[7];
    for (j, (lo, hi)) in samples.iter().enumerate() {
        res_asc += ((lo - mean).norm() + (hi - mean).norm()) * WGK[j];
    }
    let abs_half = half.abs();
    res_asc *= abs_half;
    res_abs *= abs_half;

    let mut error = ((res_k - res_g) * half).norm();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }

    Panel {
        a,
        b,
        value: res_k * half,
        error,
    }
}

const EVALS_PER_PANEL: usize = 15;

/// Globally adaptive integration over the partition given by `edges`.
///
/// Stops once the summed error falls below `max(rel_tol·|I|, abs_floor)`.
fn integrate_adaptive<F>(
    f: &F,
    edges: &[f64],
    abs_floor: f64,
    spec: &QuadratureSpec,
) -> IntegralResult
where
    F: Fn(f64) -> Complex64,
{
    let mut heap: BinaryHeap<Panel> = edges
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| gauss_kronrod(f, w[0], w[1]))
        .collect();
    let mut evaluations = heap.len() * EVALS_PER_PANEL;
    let mut value: Complex64 = heap.iter().map(|p| p.value).sum();
    let mut error: f64 = heap.iter().map(|p| p.error).sum();
    let mut converged = false;

    for _ in 0..=spec.max_subdivisions {
        if error <= (spec.rel_tol * value.norm()).max(abs_floor) {
            converged = true;
            break;
        }
        let Some(worst) = heap.peek().copied() else {
            converged = true;
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            break;
        }
        heap.pop();
        let left = gauss_kronrod(f, worst.a, mid);
        let right = gauss_kronrod(f, mid, worst.b);
        evaluations += 2 * EVALS_PER_PANEL;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum in position order so the result does not depend on the
    // refinement history.
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    IntegralResult {
        value: panels.iter().map(|p| p.value).sum(),
        error_estimate: panels.iter().map(|p| p.error).sum(),
        evaluations,
        converged,
    }
}

/// Uniform subdivision of `[lo, hi]` into panels no wider than `width`,
/// keeping every breakpoint inside the interval as an edge.
fn partition(lo: f64, hi: f64, width: f64, breakpoints: &[f64]) -> Vec<f64> {
    let mut anchors = vec![lo];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > lo && x < hi)
        .collect();
    inner.sort_by(f64::total_cmp);
    anchors.extend(inner);
    anchors.push(hi);
    anchors.dedup();

    let mut edges = vec![lo];
    for w in anchors.windows(2) {
        let n = ((w[1] - w[0]) / width).ceil().max(1.0) as usize;
        let step = (w[1] - w[0]) / n as f64;
        for i in 1..n {
            edges.push(w[0] + step * i as f64);
        }
        edges.push(w[1]);
    }
    edges
}

/// `∫₀^k f(β) dβ`, where `f` oscillates like `e^{2iβz}`.
///
/// Initial panels span at most a quarter period `π/(4z)`.
pub fn integrate_propagating<F>(
    f: F,
    k: f64,
    z: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> Complex64,
{
    integrate_propagating_with(f, k, z, &PanelHints::default(), spec)
}

pub fn integrate_propagating_with<F>(
    f: F,
    k: f64,
    z: f64,
    hints: &PanelHints,
    spec: &QuadratureSpec,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: format!("vacuum wavenumber must be positive, got {k}"),
        });
    }
    let mut width = k / 8.0;
    if z > 0.0 {
        width = width.min(PI / (4.0 * z));
    }
    if let Some(w) = hints.max_width {
        width = width.min(w);
    }
    let edges = partition(0.0, k, width, &hints.breakpoints);
    integrate_adaptive(&f, &edges, spec.abs_tol, spec).into_checked()
}

/// `∫₀^∞ g(κ) e^{−2κz} dκ` for `z > 0`.
///
/// Truncated at `κ_max = −ln(tail_cutoff)/(2z)`, doubled until the last
/// appended segment contributes less than `tail_cutoff` of the total.
pub fn integrate_evanescent<G>(g: G, z: f64, spec: &QuadratureSpec) -> Result<IntegralResult>
where
    G: Fn(f64) -> Complex64,
{
    integrate_evanescent_with(g, z, &PanelHints::default(), spec)
}

const MAX_TAIL_EXTENSIONS: usize = 64;

pub fn integrate_evanescent_with<G>(
    g: G,
    z: f64,
    hints: &PanelHints,
    spec: &QuadratureSpec,
) -> Result<IntegralResult>
where
    G: Fn(f64) -> Complex64,
{
    spec.validate()?;
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::NonDecaying(z));
    }
    let f = |kappa: f64| {
        let decay = (-2.0 * kappa * z).exp();
        if decay == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            g(kappa) * decay
        }
    };

    let mut kappa_max = -spec.tail_cutoff.ln() / (2.0 * z);
    let feature = hints.feature_scale.unwrap_or(1.0);
    let near_end = (4.0 * feature).min(kappa_max);
    let mut near_width = feature / 8.0;
    if let Some(w) = hints.max_width {
        near_width = near_width.min(w);
    }
    let mut edges = partition(0.0, near_end, near_width, &hints.breakpoints);
    // Geometric panels out to the cutoff.
    let mut width = near_width;
    let mut x = near_end;
    while x < kappa_max {
        // Keep breakpoints in the far region as edges too.
        let next = (x + width).min(kappa_max);
        let mid: Vec<f64> = hints
            .breakpoints
            .iter()
            .copied()
            .filter(|&b| b > x && b < next)
            .collect();
        edges.extend(mid);
        edges.push(next);
        x = next;
        width *= 2.0;
    }
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    let mut total = integrate_adaptive(&f, &edges, spec.abs_tol, spec);
    for _ in 0..MAX_TAIL_EXTENSIONS {
        let floor = (spec.rel_tol * total.value.norm()).max(spec.abs_tol);
        let tail_edges = partition(
            kappa_max,
            2.0 * kappa_max,
            kappa_max / 4.0,
            &hints.breakpoints,
        );
        let tail = integrate_adaptive(&f, &tail_edges, floor, spec);
        total = total.combine(tail);
        kappa_max *= 2.0;
        if tail.value.norm() <= spec.tail_cutoff * total.value.norm() {
            return total.into_checked();
        }
    }
    Err(Error::NotConverged {
        result: IntegralResult {
            converged: false,
            ..total
        },
    })
}
