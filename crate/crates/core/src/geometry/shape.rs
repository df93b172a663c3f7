//! Shape primitives with exact distance, projection and normal-cone oracles.

use std::sync::Arc;

use crate::vect::Vect;

/// Scalar affine function of time, `c + s·t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine {
    pub c: f64,
    pub s: f64,
}

impl Affine {
    pub fn constant(c: f64) -> Self {
        Affine { c, s: 0.0 }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.c + self.s * t
    }
}

/// Backend for user-composed sets that are not one of the primitives.
///
/// Oracle-backed shapes are treated as approximate: their normal cones are
/// whatever the backend reports and are flagged as non-exact in reports.
pub trait SetOracle: Send + Sync {
    fn dim(&self) -> usize;
    fn distance(&self, t: f64, x: &Vect) -> f64;
    fn project(&self, t: f64, x: &Vect) -> Vect;
    fn normal_generators(&self, t: f64, x: &Vect, atol: f64) -> Vec<Vect>;
    fn bounds(&self, t: f64) -> (Vect, Vect);
    fn boundary_samples(&self, t: f64, n: usize) -> Vec<Vect>;
    fn is_static(&self) -> bool;
}

/// Set geometry, possibly time-dependent.
#[derive(Clone)]
pub enum Shape {
    /// 1D interval [a(t), b(t)] with affine endpoints.
    MovingInterval { a: Affine, b: Affine },
    /// Static axis-aligned box; entries may be ±∞ (half-spaces, slabs).
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// 2D box minus an open disk strictly inside it.
    BoxMinusDisk {
        lo: [f64; 2],
        hi: [f64; 2],
        center: [f64; 2],
        radius: f64,
    },
    /// Generic signed-distance-style backend.
    Oracle(Arc<dyn SetOracle>),
}

impl std::fmt::Debug for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Shape::MovingInterval { a, b } => write!(f, "MovingInterval({a:?}, {b:?})"),
            Shape::Box { lo, hi } => write!(f, "Box({lo:?}, {hi:?})"),
            Shape::BoxMinusDisk {
                lo,
                hi,
                center,
                radius,
            } => write!(f, "BoxMinusDisk({lo:?}, {hi:?}, c={center:?}, r={radius})"),
            Shape::Oracle(_) => write!(f, "Oracle(..)"),
        }
    }
}

impl Shape {
    pub fn interval(a: Affine, b: Affine) -> Self {
        Shape::MovingInterval { a, b }
    }

    pub fn box_nd(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        assert!(!lo.is_empty() && lo.len() <= 3);
        Shape::Box { lo, hi }
    }

    pub fn box_minus_disk(lo: [f64; 2], hi: [f64; 2], center: [f64; 2], radius: f64) -> Self {
        assert!(radius > 0.0);
        // The disk must sit strictly inside the box so that every oracle stays exact.
        for i in 0..2 {
            assert!(
                lo[i] + radius < center[i] && center[i] + radius < hi[i],
                "disk must be strictly inside the box"
            );
        }
        Shape::BoxMinusDisk {
            lo,
            hi,
            center,
            radius,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Shape::MovingInterval { .. } => 1,
            Shape::Box { lo, .. } => lo.len(),
            Shape::BoxMinusDisk { .. } => 2,
            Shape::Oracle(o) => o.dim(),
        }
    }

    pub fn is_static(&self) -> bool {
        match self {
            Shape::MovingInterval { a, b } => a.s == 0.0 && b.s == 0.0,
            Shape::Box { .. } | Shape::BoxMinusDisk { .. } => true,
            Shape::Oracle(o) => o.is_static(),
        }
    }

    /// Whether normal cones returned by this shape are exact generator lists.
    pub fn cones_exact(&self) -> bool {
        !matches!(self, Shape::Oracle(_))
    }

    pub fn distance(&self, t: f64, x: &Vect) -> f64 {
        match self {
            Shape::MovingInterval { a, b } => {
                let (a, b) = (a.eval(t), b.eval(t));
                (a - x[0]).max(x[0] - b).max(0.0)
            }
            Shape::Box { lo, hi } => {
                let mut acc = 0.0;
                for i in 0..lo.len() {
                    let d = (lo[i] - x[i]).max(x[i] - hi[i]).max(0.0);
                    acc += d * d;
                }
                acc.sqrt()
            }
            Shape::BoxMinusDisk {
                lo,
                hi,
                center,
                radius,
            } => {
                let mut acc = 0.0;
                for i in 0..2 {
                    let d = (lo[i] - x[i]).max(x[i] - hi[i]).max(0.0);
                    acc += d * d;
                }
                if acc > 0.0 {
                    return acc.sqrt();
                }
                let rc = x.dist(&Vect::from_slice(center));
                (radius - rc).max(0.0)
            }
            Shape::Oracle(o) => o.distance(t, x),
        }
    }

    /// Nearest point; callers enforce the uniqueness reach.
    pub fn project(&self, t: f64, x: &Vect) -> Vect {
        match self {
            Shape::MovingInterval { a, b } => {
                Vect::scalar(x[0].clamp(a.eval(t), b.eval(t)))
            }
            Shape::Box { lo, hi } => {
                let mut out = *x;
                for i in 0..lo.len() {
                    out[i] = out[i].clamp(lo[i], hi[i]);
                }
                out
            }
            Shape::BoxMinusDisk {
                lo,
                hi,
                center,
                radius,
            } => {
                let mut out = *x;
                let mut outside_box = false;
                for i in 0..2 {
                    let c = out[i].clamp(lo[i], hi[i]);
                    if c != out[i] {
                        outside_box = true;
                        out[i] = c;
                    }
                }
                if outside_box {
                    return out;
                }
                let c = Vect::from_slice(center);
                let rc = x.dist(&c);
                if rc < *radius && rc > 0.0 {
                    c + (*x - c) * (radius / rc)
                } else {
                    *x
                }
            }
            Shape::Oracle(o) => o.project(t, x),
        }
    }

    /// Unit generators of the proximal normal cone at a point on/near the
    /// boundary (activity detected with tolerance `atol`). Interior points
    /// yield the empty list; a degenerate interval yields both directions.
    pub fn normal_generators(&self, t: f64, x: &Vect, atol: f64) -> Vec<Vect> {
        match self {
            Shape::MovingInterval { a, b } => {
                let (a, b) = (a.eval(t), b.eval(t));
                let mut gens = Vec::new();
                if x[0] - a <= atol {
                    gens.push(Vect::scalar(-1.0));
                }
                if b - x[0] <= atol {
                    gens.push(Vect::scalar(1.0));
                }
                gens
            }
            Shape::Box { lo, hi } => {
                let n = lo.len();
                let mut gens = Vec::new();
                for i in 0..n {
                    if lo[i].is_finite() && x[i] - lo[i] <= atol {
                        let mut g = Vect::zeros(n);
                        g[i] = -1.0;
                        gens.push(g);
                    }
                    if hi[i].is_finite() && hi[i] - x[i] <= atol {
                        let mut g = Vect::zeros(n);
                        g[i] = 1.0;
                        gens.push(g);
                    }
                }
                gens
            }
            Shape::BoxMinusDisk {
                lo,
                hi,
                center,
                radius,
            } => {
                let mut gens = Vec::new();
                for i in 0..2 {
                    if x[i] - lo[i] <= atol {
                        let mut g = Vect::zeros(2);
                        g[i] = -1.0;
                        gens.push(g);
                    }
                    if hi[i] - x[i] <= atol {
                        let mut g = Vect::zeros(2);
                        g[i] = 1.0;
                        gens.push(g);
                    }
                }
                let c = Vect::from_slice(center);
                let rc = x.dist(&c);
                if (rc - radius).abs() <= atol && rc > 0.0 {
                    // On the hole circle the normal points toward the disk center.
                    gens.push((c - *x).normalized());
                }
                gens
            }
            Shape::Oracle(o) => o.normal_generators(t, x, atol),
        }
    }

    /// Axis-aligned bounds of the set at time `t`.
    pub fn bounds(&self, t: f64) -> (Vect, Vect) {
        match self {
            Shape::MovingInterval { a, b } => {
                (Vect::scalar(a.eval(t)), Vect::scalar(b.eval(t)))
            }
            Shape::Box { lo, hi } => (Vect::from_slice(lo), Vect::from_slice(hi)),
            Shape::BoxMinusDisk { lo, hi, .. } => {
                (Vect::from_slice(lo), Vect::from_slice(hi))
            }
            Shape::Oracle(o) => o.bounds(t),
        }
    }

    /// Deterministic boundary sample of roughly `n` points.
    pub fn boundary_samples(&self, t: f64, n: usize) -> Vec<Vect> {
        match self {
            Shape::MovingInterval { a, b } => {
                vec![Vect::scalar(a.eval(t)), Vect::scalar(b.eval(t))]
            }
            Shape::Box { lo, hi } => box_boundary_samples(lo, hi, n),
            Shape::BoxMinusDisk {
                lo,
                hi,
                center,
                radius,
            } => {
                let box_perim = 2.0 * ((hi[0] - lo[0]) + (hi[1] - lo[1]));
                let circ = 2.0 * std::f64::consts::PI * radius;
                let n_circ = ((n as f64) * circ / (box_perim + circ)).round().max(4.0) as usize;
                let n_box = n.saturating_sub(n_circ).max(4);
                let mut pts = box_boundary_samples(&lo.to_vec(), &hi.to_vec(), n_box);
                for k in 0..n_circ {
                    let phi = 2.0 * std::f64::consts::PI * (k as f64) / (n_circ as f64);
                    pts.push(Vect::of2(
                        center[0] + radius * phi.cos(),
                        center[1] + radius * phi.sin(),
                    ));
                }
                pts
            }
            Shape::Oracle(o) => o.boundary_samples(t, n),
        }
    }
}

fn box_boundary_samples(lo: &[f64], hi: &[f64], n: usize) -> Vec<Vect> {
    let dim = lo.len();
    // Unbounded faces are clipped to a large window for sampling purposes.
    const WINDOW: f64 = 1e3;
    let lo: Vec<f64> = lo.iter().map(|&v| v.max(-WINDOW)).collect();
    let hi: Vec<f64> = hi.iter().map(|&v| v.min(WINDOW)).collect();
    match dim {
        1 => vec![Vect::scalar(lo[0]), Vect::scalar(hi[0])],
        2 => {
            let mut pts = Vec::with_capacity(n);
            let perim = 2.0 * ((hi[0] - lo[0]) + (hi[1] - lo[1]));
            let n = n.max(4);
            for k in 0..n {
                let mut s = perim * (k as f64) / (n as f64);
                let w = hi[0] - lo[0];
                let h = hi[1] - lo[1];
                let p = if s < w {
                    Vect::of2(lo[0] + s, lo[1])
                } else if {
                    s -= w;
                    s < h
                } {
                    Vect::of2(hi[0], lo[1] + s)
                } else if {
                    s -= h;
                    s < w
                } {
                    Vect::of2(hi[0] - s, hi[1])
                } else {
                    s -= w;
                    Vect::of2(lo[0], hi[1] - s)
                };
                pts.push(p);
            }
            pts
        }
        3 => {
            // Stratified per-face grid.
            let per_face = (n / 6).max(4);
            let side = (per_face as f64).sqrt().ceil() as usize;
            let mut pts = Vec::new();
            for axis in 0..3 {
                for &(fixed, _) in &[(lo[axis], -1.0), (hi[axis], 1.0)] {
                    let (u, v) = match axis {
                        0 => (1, 2),
                        1 => (0, 2),
                        _ => (0, 1),
                    };
                    for iu in 0..side {
                        for iv in 0..side {
                            let fu = (iu as f64 + 0.5) / side as f64;
                            let fv = (iv as f64 + 0.5) / side as f64;
                            let mut p = Vect::zeros(3);
                            p[axis] = fixed;
                            p[u] = lo[u] + fu * (hi[u] - lo[u]);
                            p[v] = lo[v] + fv * (hi[v] - lo[v]);
                            pts.push(p);
                        }
                    }
                }
            }
            pts
        }
        _ => panic!("unsupported dimension {dim}"),
    }
}
