//! Dense-grid composite Simpson reference for the scattering Green tensor.
//!
//! Works on the same β (propagating) and κ (evanescent) variables as the
//! production path but shares nothing with it beyond the reflection
//! coefficients: fixed uniform nodes on a graded set of segments, no error
//! estimation, no adaptivity.

use std::f64::consts::PI;

use num_complex::Complex64;
use resonant_cp::dispersion::{
    feature_points, reflect_halfspace, reflect_slab_mirror, ReflectionPair, WaveNumbers,
};
use resonant_cp::types::{Geometry, MaterialResponse};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Truncation point of the adaptive engine for its default tail cutoff.
const ADAPTIVE_DECAY_LENGTHS: f64 = 36.841_361_487_904_734; // −ln(10⁻¹⁶)

#[derive(Debug, Clone, Copy)]
pub struct OracleSpec {
    /// Simpson nodes per sector, spread over its segments.
    pub nodes: usize,
    /// Evanescent truncation as a multiple of the adaptive engine's cutoff.
    pub kappa_max_factor: f64,
}

impl Default for OracleSpec {
    fn default() -> Self {
        Self {
            nodes: 1_000_000,
            kappa_max_factor: 4.0,
        }
    }
}

impl OracleSpec {
    pub fn doubled(self) -> Self {
        Self {
            nodes: 2 * self.nodes,
            ..self
        }
    }

    fn validate(&self) {
        assert!(
            self.nodes >= 1000 && self.nodes.is_multiple_of(2),
            "oracle needs an even node count ≥ 10³"
        );
        assert!(self.kappa_max_factor >= 1.0);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleGreen {
    pub xx: Complex64,
    pub zz: Complex64,
}

#[derive(Default, Clone, Copy)]
struct Neumaier {
    sum: f64,
    carry: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

#[derive(Default, Clone, Copy)]
struct Accumulator {
    parts: [Neumaier; 4],
}

impl Accumulator {
    fn add(&mut self, w: f64, (a, b): (Complex64, Complex64)) {
        self.parts[0].add(w * a.re);
        self.parts[1].add(w * a.im);
        self.parts[2].add(w * b.re);
        self.parts[3].add(w * b.im);
    }

    fn value(&self) -> (Complex64, Complex64) {
        let v = |i: usize| self.parts[i].value();
        (Complex64::new(v(0), v(1)), Complex64::new(v(2), v(3)))
    }
}

/// Composite Simpson over consecutive `edges`, `per_segment` intervals each.
fn simpson<F>(f: F, edges: &[f64], per_segment: usize) -> (Complex64, Complex64)
where
    F: Fn(f64) -> (Complex64, Complex64),
{
    let mut total = Accumulator::default();
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let h = (b - a) / per_segment as f64;
        let mut seg = Accumulator::default();
        for i in 0..=per_segment {
            let weight = if i == 0 || i == per_segment {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let x = if i == per_segment {
                b
            } else {
                a + i as f64 * h
            };
            seg.add(weight, f(x));
        }
        let (xx, zz) = seg.value();
        total.add(h / 3.0, (xx, zz));
    }
    total.value()
}

/// Segment edges on `[lo, hi]` with geometric grading towards each feature
/// point, so that nearly real poles of width ~10⁻⁴ are resolved.
fn graded_edges(lo: f64, hi: f64, features: &[f64], extra: &[f64]) -> Vec<f64> {
    let mut edges = vec![lo, hi];
    edges.extend(extra.iter().copied());
    for &f in features {
        edges.push(f);
        for j in 1..=7 {
            let d = f * 10f64.powi(-j);
            edges.push(f - d);
            edges.push(f + d);
        }
    }
    edges.retain(|x| x.is_finite() && *x >= lo && *x <= hi);
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * hi.abs().max(1.0));
    edges
}

fn even_per_segment(total: usize, segments: usize) -> usize {
    let n = (total / segments.max(1)).max(2);
    n + n % 2
}

enum Model {
    Reflecting {
        geometry: Geometry,
        material: MaterialResponse,
    },
    /// Ideal lens: `r_s = −r_p = −e^{−2iβd}` folded into the phase.
    Lens { thickness: f64 },
}

impl Model {
    fn new(geometry: &Geometry) -> Self {
        match *geometry {
            Geometry::PerfectLens { thickness } => Model::Lens { thickness },
            g => Model::Reflecting {
                geometry: g,
                material: g.material().unwrap(),
            },
        }
    }

    fn material(&self) -> MaterialResponse {
        match self {
            Model::Reflecting { material, .. } => *material,
            Model::Lens { .. } => MaterialResponse::VACUUM,
        }
    }

    /// Reflection pair and the distance entering the exponential.
    fn coefficients(&self, wn: &WaveNumbers, z: f64) -> (ReflectionPair, f64) {
        match self {
            Model::Reflecting { geometry, material } => {
                let r = match geometry {
                    Geometry::HalfSpace { .. } => reflect_halfspace(wn, material),
                    Geometry::SlabWithMirror { thickness, .. } => {
                        reflect_slab_mirror(wn, material, *thickness)
                    }
                    Geometry::PerfectLens { .. } => unreachable!(),
                };
                (r.expect("oracle hit a degenerate denominator"), z)
            }
            Model::Lens { thickness } => (
                ReflectionPair {
                    r_s: Complex64::new(-1.0, 0.0),
                    r_p: Complex64::new(1.0, 0.0),
                },
                z - thickness,
            ),
        }
    }
}

/// `G⁽¹⁾_xx` and `G⁽¹⁾_zz` at distance `z` by brute-force Simpson.
pub fn simpson_green(z: f64, k: f64, geometry: &Geometry, spec: &OracleSpec) -> OracleGreen {
    spec.validate();
    assert!(z > 0.0);
    let model = Model::new(geometry);
    let material = model.material();
    let fp = feature_points(&material, k);
    let k2 = k * k;

    let prop = |beta: f64| {
        let wn = WaveNumbers::propagating(beta, k, &material);
        let (r, d) = model.coefficients(&wn, z);
        let phase = (2.0 * I * beta * d).exp();
        let w = beta * beta / k2;
        (
            phase * (r.r_s - r.r_p * w),
            phase * r.r_p * (2.0 * (1.0 - w)),
        )
    };
    let evan = |kappa: f64| {
        let wn = WaveNumbers::evanescent(kappa, k, &material);
        let (r, d) = model.coefficients(&wn, z);
        let decay = (-2.0 * kappa * d).exp();
        let w = kappa * kappa / k2;
        (
            decay * (r.r_s + r.r_p * w),
            decay * r.r_p * (2.0 * (1.0 + w)),
        )
    };

    let z_eff = match model {
        Model::Lens { thickness } => z - thickness,
        Model::Reflecting { .. } => z,
    };
    let prop_edges = graded_edges(0.0, k, &fp.propagating, &[0.5 * k]);
    let (pxx, pzz) = simpson(
        prop,
        &prop_edges,
        even_per_segment(spec.nodes, prop_edges.len() - 1),
    );

    let kappa_max = spec.kappa_max_factor * ADAPTIVE_DECAY_LENGTHS / (2.0 * z_eff);
    let mut octaves = Vec::new();
    let mut x = k.min(1.0 / z_eff) / 64.0;
    while x < kappa_max {
        octaves.push(x);
        x *= 2.0;
    }
    if let Geometry::SlabWithMirror { thickness, .. } = geometry {
        // Mirror images oscillate with period π/d in κ through εμ − 1 < 0.
        let step = PI / (4.0 * thickness);
        let mut x = step;
        while x < kappa_max.min(64.0 * k) {
            octaves.push(x);
            x += step;
        }
    }
    let evan_edges = graded_edges(0.0, kappa_max, &fp.evanescent, &octaves);
    let (exx, ezz) = simpson(
        evan,
        &evan_edges,
        even_per_segment(spec.nodes, evan_edges.len() - 1),
    );

    let pre = 1.0 / (8.0 * PI);
    OracleGreen {
        xx: I * pre * pxx + pre * exx,
        zz: I * pre * pzz + pre * ezz,
    }
}

/// Composite Simpson of a scalar function on `[a, b]` with `n` intervals.
pub fn simpson_scalar<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, n: usize) -> Complex64 {
    let n = n + n % 2;
    simpson(|x| (f(x), Complex64::new(0.0, 0.0)), &[a, b], n).0
}

pub fn relative_difference(a: Complex64, b: Complex64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).norm() / b.norm()
    }
}
