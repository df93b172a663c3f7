//! Proximal normal assembly for epigraphs/hypographs of candidate value
//! functions, and normal cones of graph(C) itself.

use super::{AugmentedPoint, CandidateValueFunction, HjError};
use crate::geometry::{MovingSet, Shape, MEMBERSHIP_TOL};
use crate::vect::Vect;

/// Parameters of the numeric normal probe.
#[derive(Clone, Copy, Debug)]
pub struct ProbeParams {
    /// Finite-difference step for gradients.
    pub fd_step: f64,
    /// One-sided derivative mismatch that flags a kink.
    pub kink_tol: f64,
    /// λ mismatch tolerance between the augmented point and θ.
    pub value_tol: f64,
    /// Curvature bound used when validating the proximal inequality for
    /// kink candidates; candidates needing a larger σ are discarded.
    pub prox_sigma: f64,
}

impl Default for ProbeParams {
    fn default() -> Self {
        ProbeParams {
            fd_step: 1e-6,
            kink_tol: 1e-3,
            value_tol: 1e-7,
            prox_sigma: 50.0,
        }
    }
}

/// Unit generators of the proximal normal cone of graph(C) ⊂ ℝ^{1+n} at
/// (t, x), including the initial-time face.
///
/// For a moving interval the edge normals are tilted by the endpoint speed;
/// for static shapes they are the lifted spatial generators. The final-time
/// face is deliberately excluded: the theory assumes C(t) nonempty for all
/// forward times, and the augmented clock τ̇ = 1 exits any truncated time
/// window through that face regardless of the dynamics.
pub fn graph_normal_generators(
    set: &MovingSet,
    t: f64,
    x: &Vect,
) -> Result<Vec<Vect>, HjError> {
    let n = set.dim();
    let atol = MEMBERSHIP_TOL;
    let mut gens: Vec<Vect> = Vec::new();
    match set.shape() {
        Shape::MovingInterval { a, b } => {
            if x[0] - a.eval(t) <= atol {
                gens.push(Vect::of2(a.s, -1.0).normalized());
            }
            if b.eval(t) - x[0] <= atol {
                gens.push(Vect::of2(-b.s, 1.0).normalized());
            }
        }
        _ => {
            let spatial = set
                .normal_generators(t, x, atol)
                .map_err(HjError::Geometry)?;
            for s in spatial {
                let mut lifted = Vect::zeros(n + 1);
                for i in 0..n {
                    lifted[i + 1] = s[i];
                }
                gens.push(lifted);
            }
        }
    }
    let t0 = set.time_domain().0;
    if t - t0 <= atol {
        let mut face = Vect::zeros(n + 1);
        face[0] = -1.0;
        gens.push(face);
    }
    Ok(gens)
}

/// Proximal normals to epi(θ) at an augmented point.
///
/// A matching declared feature supplies the analytic table; otherwise the
/// gradient route returns (∇θ, −1) where θ is differentiable (one-sided
/// candidates validated against the proximal inequality at kinks) together
/// with horizontal lifts of the graph(C) normals at boundary points.
pub fn epi_normals(
    set: &MovingSet,
    theta: &CandidateValueFunction,
    pt: &AugmentedPoint,
    params: &ProbeParams,
) -> Result<Vec<Vect>, HjError> {
    normals_impl(set, theta, pt, params, true)
}

/// Proximal normals to hypo(θ); symmetric to `epi_normals`.
pub fn hypo_normals(
    set: &MovingSet,
    theta: &CandidateValueFunction,
    pt: &AugmentedPoint,
    params: &ProbeParams,
) -> Result<Vec<Vect>, HjError> {
    normals_impl(set, theta, pt, params, false)
}

fn normals_impl(
    set: &MovingSet,
    theta: &CandidateValueFunction,
    pt: &AugmentedPoint,
    params: &ProbeParams,
    epi: bool,
) -> Result<Vec<Vect>, HjError> {
    let value = theta.eval(pt.tau, &pt.x);
    if (value - pt.lambda).abs() > params.value_tol * (1.0 + value.abs()) {
        return Err(HjError::ValueMismatch {
            lambda: pt.lambda,
            theta: value,
        });
    }
    if let Some(f) = theta.feature_at(pt.tau, &pt.x) {
        return Ok(if epi {
            (f.epi)(pt.tau, &pt.x)
        } else {
            (f.hypo)(pt.tau, &pt.x)
        });
    }

    let n = pt.x.dim();
    let mut gens: Vec<Vect> = Vec::new();

    // Gradient route.
    if let Some(g) = theta.gradient_at(pt.tau, &pt.x) {
        gens.push(lift_gradient(&g, epi));
    } else {
        let (minus, plus) = one_sided_gradients(set, theta, pt, params.fd_step);
        let mut kink = false;
        for j in 0..=n {
            if (plus[j] - minus[j]).abs() > params.kink_tol * (1.0 + plus[j].abs() + minus[j].abs())
            {
                kink = true;
            }
        }
        if !kink {
            let mut avg = Vect::zeros(n + 1);
            for j in 0..=n {
                avg[j] = 0.5 * (plus[j] + minus[j]);
            }
            gens.push(lift_gradient(&avg, epi));
        } else {
            // All per-axis side combinations (one-sided gradients of the
            // smooth pieces mix across axes at a kink) plus the midpoint;
            // kept only when the proximal inequality survives a probe ring.
            let mut cands: Vec<Vect> = Vec::new();
            for mask in 0u32..(1 << (n + 1)) {
                let mut c = Vect::zeros(n + 1);
                for j in 0..=n {
                    c[j] = if mask & (1 << j) != 0 { plus[j] } else { minus[j] };
                }
                if !cands.iter().any(|e| e.dist(&c) < 1e-12) {
                    cands.push(c);
                }
            }
            let mut mid = Vect::zeros(n + 1);
            for j in 0..=n {
                mid[j] = 0.5 * (plus[j] + minus[j]);
            }
            cands.push(mid);
            for cand in cands {
                if validate_proximal(set, theta, pt, &cand, params, epi) {
                    let p = lift_gradient(&cand, epi);
                    if !gens.iter().any(|e: &Vect| e.dist(&p) < 1e-12) {
                        gens.push(p);
                    }
                }
            }
        }
    }

    // Horizontal lifts of the constraint-graph normals (common to the
    // epigraph and the hypograph).
    for gn in graph_normal_generators(set, pt.tau, &pt.x)? {
        let mut lifted = Vect::zeros(n + 2);
        for i in 0..=n {
            lifted[i] = gn[i];
        }
        gens.push(lifted);
    }
    Ok(gens)
}

fn lift_gradient(g: &Vect, epi: bool) -> Vect {
    let n = g.dim() - 1;
    let mut p = Vect::zeros(n + 2);
    for j in 0..=n {
        p[j] = if epi { g[j] } else { -g[j] };
    }
    p[n + 1] = if epi { -1.0 } else { 1.0 };
    p
}

/// One-sided finite-difference gradients of θ along each axis of (t, x),
/// with probe points clipped back onto graph(C).
fn one_sided_gradients(
    set: &MovingSet,
    theta: &CandidateValueFunction,
    pt: &AugmentedPoint,
    eta: f64,
) -> (Vect, Vect) {
    let n = pt.x.dim();
    let base = theta.eval(pt.tau, &pt.x);
    let mut minus = Vect::zeros(n + 1);
    let mut plus = Vect::zeros(n + 1);
    for j in 0..=n {
        for (sign, out) in [(-1.0, &mut minus), (1.0, &mut plus)] {
            if let Some((tq, xq, step)) = clipped_probe(set, pt, j, sign * eta) {
                let v = theta.eval(tq, &xq);
                out[j] = (v - base) / step;
            } else {
                out[j] = f64::NAN;
            }
        }
    }
    // A missing side (domain edge) copies the feasible one.
    for j in 0..=n {
        if !minus[j].is_finite() {
            minus[j] = plus[j];
        }
        if !plus[j].is_finite() {
            plus[j] = minus[j];
        }
    }
    (minus, plus)
}

/// Moves along axis `j` of (t, x) by `delta` and projects back onto
/// graph(C); returns the probe and the signed displacement actually used.
fn clipped_probe(
    set: &MovingSet,
    pt: &AugmentedPoint,
    j: usize,
    delta: f64,
) -> Option<(f64, Vect, f64)> {
    let (t0, t1) = set.time_domain();
    let (mut tq, mut xq) = (pt.tau, pt.x);
    if j == 0 {
        tq = (pt.tau + delta).clamp(t0, t1);
        if (tq - pt.tau).abs() < 1e-14 {
            return None;
        }
    } else {
        xq[j - 1] += delta;
    }
    if set.distance(tq, &xq).ok()? > 0.0 {
        xq = set.project(tq, &xq).ok()?;
    }
    let step = if j == 0 { tq - pt.tau } else { xq[j - 1] - pt.x[j - 1] };
    if step.abs() < 1e-14 {
        return None;
    }
    Some((tq, xq, step))
}

/// Probes the proximal normal inequality for a gradient candidate on a ring
/// of feasible offsets around the point.
fn validate_proximal(
    set: &MovingSet,
    theta: &CandidateValueFunction,
    pt: &AugmentedPoint,
    grad: &Vect,
    params: &ProbeParams,
    epi: bool,
) -> bool {
    let n = pt.x.dim();
    let eta = params.fd_step.sqrt().min(1e-3);
    let sigma = params.prox_sigma;
    let base = theta.eval(pt.tau, &pt.x);
    let dirs = ring_directions(n + 1);
    for d in dirs {
        let mut shift = Vect::zeros(n + 1);
        for j in 0..=n {
            shift[j] = d[j] * eta;
        }
        let mut xq = pt.x;
        for j in 0..n {
            xq[j] += shift[j + 1];
        }
        let tq = pt.tau + shift[0];
        let Ok(dist) = set.distance(tq.clamp(set.time_domain().0, set.time_domain().1), &xq)
        else {
            continue;
        };
        let tq = tq.clamp(set.time_domain().0, set.time_domain().1);
        let xq = if dist > 0.0 {
            match set.project(tq, &xq) {
                Ok(p) => p,
                Err(_) => continue,
            }
        } else {
            xq
        };
        let v = theta.eval(tq, &xq);
        let mut lin = grad[0] * (tq - pt.tau);
        let mut norm2 = (tq - pt.tau) * (tq - pt.tau);
        for j in 0..n {
            lin += grad[j + 1] * (xq[j] - pt.x[j]);
            norm2 += (xq[j] - pt.x[j]) * (xq[j] - pt.x[j]);
        }
        let slack = sigma * norm2 + 10.0 * params.fd_step;
        let ok = if epi {
            v >= base + lin - slack
        } else {
            v <= base + lin + slack
        };
        if !ok {
            return false;
        }
    }
    true
}

fn ring_directions(dim: usize) -> Vec<Vect> {
    let mut dirs = Vec::new();
    match dim {
        1 => {
            dirs.push(Vect::scalar(1.0));
            dirs.push(Vect::scalar(-1.0));
        }
        2 => {
            for k in 0..8 {
                let phi = std::f64::consts::PI * (k as f64) / 4.0;
                dirs.push(Vect::of2(phi.cos(), phi.sin()));
            }
        }
        _ => {
            for j in 0..dim {
                for s in [-1.0, 1.0] {
                    let mut d = Vect::zeros(dim);
                    d[j] = s;
                    dirs.push(d);
                }
            }
            // Diagonals sample the mixed directions.
            for a in 0..dim {
                for b in a + 1..dim {
                    for (sa, sb) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                        let mut d = Vect::zeros(dim);
                        d[a] = sa / 2.0f64.sqrt();
                        d[b] = sb / 2.0f64.sqrt();
                        dirs.push(d);
                    }
                }
            }
        }
    }
    dirs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios;
    use std::sync::Arc;

    const LOG3: f64 = 1.0986122886681098;

    #[test]
    fn feature_tables_at_left_corner() {
        let b = scenarios::example1();
        let theta = b.exact_t.as_ref().unwrap();
        let pt = AugmentedPoint::new(0.0, Vect::scalar(-1.0), 1.0 + LOG3);
        let params = ProbeParams::default();
        let epi = epi_normals(&b.set, theta, &pt, &params).unwrap();
        let expect = [
            Vect::from_slice(&[0.0, -1.0, 0.0]),
            Vect::from_slice(&[1.0, -1.0, 0.0]),
            Vect::from_slice(&[-1.0, 0.0, -1.0]),
        ];
        assert_eq!(epi.len(), 3);
        for e in &expect {
            assert!(epi.iter().any(|p| p.dist(e) < 1e-12), "missing {e:?}");
        }
        let hypo = hypo_normals(&b.set, theta, &pt, &params).unwrap();
        assert!(hypo
            .iter()
            .any(|p| p.dist(&Vect::from_slice(&[1.0, 0.0, 1.0])) < 1e-12));
    }

    #[test]
    fn branch_curve_has_empty_epigraph_cone() {
        let b = scenarios::example1();
        let theta = b.exact_t.as_ref().unwrap();
        let x = -1.0 + (-0.5f64).exp();
        let pt = AugmentedPoint::new(0.5, Vect::scalar(x), theta.eval(0.5, &Vect::scalar(x)));
        let epi = epi_normals(&b.set, theta, &pt, &ProbeParams::default()).unwrap();
        assert!(epi.is_empty());
        let hypo = hypo_normals(&b.set, theta, &pt, &ProbeParams::default()).unwrap();
        assert_eq!(hypo.len(), 2);
    }

    #[test]
    fn smooth_interior_gradient_normal() {
        let b = scenarios::example1();
        let theta = b.exact_t.as_ref().unwrap();
        let xv = Vect::scalar(1.0);
        let pt = AugmentedPoint::new(0.5, xv, theta.eval(0.5, &xv));
        let epi = epi_normals(&b.set, theta, &pt, &ProbeParams::default()).unwrap();
        assert_eq!(epi.len(), 1);
        let p = epi[0];
        assert!((p[0] - 0.0).abs() < 1e-12);
        assert!((p[1] + 0.5).abs() < 1e-12); // −1/(1+x) at x = 1
        assert_eq!(p[2], -1.0);
    }

    #[test]
    fn example2_arc_horizontal_normal() {
        let b = scenarios::example2();
        let theta = b.exact_t.as_ref().unwrap();
        let x = Vect::of2(0.6, 1.2);
        let pt = AugmentedPoint::new(0.0, x, theta.eval(0.0, &x));
        let hypo = hypo_normals(&b.set, theta, &pt, &ProbeParams::default()).unwrap();
        // Includes the (−x, 2−y, 0)-type horizontal normal.
        assert!(hypo
            .iter()
            .any(|p| p.dist(&Vect::from_slice(&[0.0, -0.6, 0.8, 0.0])) < 1e-12));
    }

    #[test]
    fn numeric_path_detects_smooth_gradient() {
        let b = scenarios::example1();
        // Same evaluator, but no analytic gradient and no declared features:
        // the finite-difference route must recover the gradient normal.
        let theta = CandidateValueFunction::new(Arc::new(|t, x: &Vect| {
            scenarios::example1_exact_t(t, x[0])
        }));
        let xv = Vect::scalar(1.0);
        let pt = AugmentedPoint::new(0.5, xv, theta.eval(0.5, &xv));
        let epi = epi_normals(&b.set, &theta, &pt, &ProbeParams::default()).unwrap();
        assert_eq!(epi.len(), 1);
        assert!((epi[0][1] + 0.5).abs() < 1e-4, "grad {:?}", epi[0]);
    }

    #[test]
    fn numeric_path_kink_detection() {
        let b = scenarios::example1();
        let theta = CandidateValueFunction::new(Arc::new(|t, x: &Vect| {
            scenarios::example1_exact_t(t, x[0])
        }));
        // On the branch curve the graph has an upward kink: no epigraph
        // normals survive validation, two hypograph candidates do.
        let x = -1.0 + (-0.5f64).exp();
        let pt = AugmentedPoint::new(0.5, Vect::scalar(x), theta.eval(0.5, &Vect::scalar(x)));
        let epi = epi_normals(&b.set, &theta, &pt, &ProbeParams::default()).unwrap();
        assert!(epi.is_empty(), "epi normals at kink: {epi:?}");
        let hypo = hypo_normals(&b.set, &theta, &pt, &ProbeParams::default()).unwrap();
        assert!(!hypo.is_empty());
    }

    #[test]
    fn value_mismatch_rejected() {
        let b = scenarios::example1();
        let theta = b.exact_t.as_ref().unwrap();
        let pt = AugmentedPoint::new(0.5, Vect::scalar(1.0), 99.0);
        assert!(matches!(
            epi_normals(&b.set, theta, &pt, &ProbeParams::default()),
            Err(HjError::ValueMismatch { .. })
        ));
    }

    #[test]
    fn graph_normals_example1() {
        let b = scenarios::example1();
        // Left edge tilts with the endpoint speed: (1, −1)/√2.
        let g = graph_normal_generators(&b.set, 0.5, &Vect::scalar(-0.5)).unwrap();
        assert_eq!(g.len(), 1);
        let expected = Vect::of2(1.0, -1.0).normalized();
        assert!(g[0].dist(&expected) < 1e-12);
        // At t = 0 the time face joins in.
        let g = graph_normal_generators(&b.set, 0.0, &Vect::scalar(-1.0)).unwrap();
        assert_eq!(g.len(), 2);
    }
}
