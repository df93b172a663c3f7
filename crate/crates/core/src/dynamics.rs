//! Time-stepping integrators for the perturbed sweeping process: Moreau's
//! catching-up scheme, the equivalent bounded subdifferential form, and the
//! projected-inclusion form for static constraints.

use std::sync::Arc;

use crate::geometry::{GeometryError, MovingSet, TargetSet};
use crate::vect::{project_onto_cone, Vect};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("free step at distance {dist} reaches past the projection radius {reach}")]
    StepTooLarge { dist: f64, reach: f64 },
    #[error("projected dynamics require a static constraint set")]
    AutonomousOnly,
    #[error("initial state at distance {dist} from C(t0)")]
    InfeasibleStart { dist: f64 },
}

/// Convex compact velocity set: polytope (convex hull of vertices) or ball.
#[derive(Clone, Debug)]
pub enum ControlSet {
    Polytope(Vec<Vect>),
    Ball { center: Vect, radius: f64 },
}

impl ControlSet {
    pub fn dim(&self) -> usize {
        match self {
            ControlSet::Polytope(v) => v[0].dim(),
            ControlSet::Ball { center, .. } => center.dim(),
        }
    }

    /// Extreme-point samples: polytope vertices, or `m` boundary points of a
    /// ball (deterministic layout).
    pub fn samples(&self, m: usize) -> Vec<Vect> {
        match self {
            ControlSet::Polytope(v) => v.clone(),
            ControlSet::Ball { center, radius } => match center.dim() {
                1 => vec![
                    Vect::scalar(center[0] - radius),
                    Vect::scalar(center[0] + radius),
                ],
                2 => (0..m.max(3))
                    .map(|k| {
                        let phi = 2.0 * std::f64::consts::PI * (k as f64) / (m.max(3) as f64);
                        Vect::of2(center[0] + radius * phi.cos(), center[1] + radius * phi.sin())
                    })
                    .collect(),
                3 => {
                    // Fibonacci sphere.
                    let m = m.max(6);
                    let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
                    (0..m)
                        .map(|k| {
                            let z = 1.0 - 2.0 * (k as f64 + 0.5) / (m as f64);
                            let r = (1.0 - z * z).sqrt();
                            let phi = golden * k as f64;
                            let mut p = Vect::zeros(3);
                            p[0] = center[0] + radius * r * phi.cos();
                            p[1] = center[1] + radius * r * phi.sin();
                            p[2] = center[2] + radius * z;
                            p
                        })
                        .collect()
                }
                d => panic!("unsupported control dimension {d}"),
            },
        }
    }

    /// Exact support minimum min_{g ∈ G} g·q.
    pub fn support_min(&self, q: &Vect) -> f64 {
        match self {
            ControlSet::Polytope(v) => v
                .iter()
                .map(|g| g.dot(q))
                .fold(f64::INFINITY, f64::min),
            ControlSet::Ball { center, radius } => center.dot(q) - radius * q.norm(),
        }
    }

    /// Exact support maximum max_{g ∈ G} g·q.
    pub fn support_max(&self, q: &Vect) -> f64 {
        match self {
            ControlSet::Polytope(v) => v
                .iter()
                .map(|g| g.dot(q))
                .fold(f64::NEG_INFINITY, f64::max),
            ControlSet::Ball { center, radius } => center.dot(q) + radius * q.norm(),
        }
    }

    pub fn magnitude(&self) -> f64 {
        match self {
            ControlSet::Polytope(v) => v.iter().map(|g| g.norm()).fold(0.0, f64::max),
            ControlSet::Ball { center, radius } => center.norm() + radius,
        }
    }

    fn translate(&self, dx: &Vect) -> ControlSet {
        match self {
            ControlSet::Polytope(v) => {
                ControlSet::Polytope(v.iter().map(|g| *g + *dx).collect())
            }
            ControlSet::Ball { center, radius } => ControlSet::Ball {
                center: *center + *dx,
                radius: *radius,
            },
        }
    }
}

/// How the velocity set depends on (t, x).
#[derive(Clone)]
pub enum ControlLaw {
    /// G(t, x) = G0.
    Constant(ControlSet),
    /// G(t, x) = x + G0 (state-translated family, e.g. x + [−1, 1]).
    StateTranslated(ControlSet),
    /// Arbitrary oracle.
    Oracle(Arc<dyn Fn(f64, &Vect) -> ControlSet + Send + Sync>),
}

/// Convex compact velocity set field G(t, x) with its bounds.
#[derive(Clone)]
pub struct ControlField {
    law: ControlLaw,
    /// Uniform bound M with ‖G(t,x)‖ ≤ M on the working region.
    pub bound: f64,
    /// Lipschitz constant L_G of (t,x) ↦ G(t,x).
    pub lipschitz: f64,
}

impl ControlField {
    pub fn new(law: ControlLaw, bound: f64, lipschitz: f64) -> Self {
        assert!(bound > 0.0);
        assert!(lipschitz >= 0.0);
        ControlField {
            law,
            bound,
            lipschitz,
        }
    }

    pub fn set_at(&self, t: f64, x: &Vect) -> ControlSet {
        match &self.law {
            ControlLaw::Constant(g) => g.clone(),
            ControlLaw::StateTranslated(g) => g.translate(x),
            ControlLaw::Oracle(f) => f(t, x),
        }
    }

    pub fn samples(&self, t: f64, x: &Vect, m: usize) -> Vec<Vect> {
        self.set_at(t, x).samples(m)
    }

    pub fn support_min(&self, t: f64, x: &Vect, q: &Vect) -> f64 {
        self.set_at(t, x).support_min(q)
    }

    pub fn support_max(&self, t: f64, x: &Vect, q: &Vect) -> f64 {
        self.set_at(t, x).support_max(q)
    }
}

/// Discrete solution of the catching-up scheme.
#[derive(Clone, Debug)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub states: Vec<Vect>,
    /// Control selected for the step leaving each node (zero on the last).
    pub controls: Vec<Vect>,
    /// Realized normal correction ξ_k = (x_k + h g_k − x_{k+1})/h.
    pub corrections: Vec<Vect>,
    pub dist_target: Vec<f64>,
    pub dist_set: Vec<f64>,
    pub hit_time: Option<f64>,
    pub max_violation: f64,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Vect {
        *self.states.last().expect("nonempty trajectory")
    }

    /// CSV export: t, x₁..x_n, g₁..g_n, ξ₁..ξ_n, d_S, d_C.
    pub fn write_csv<W: std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        let n = self.states[0].dim();
        let mut header = String::from("t");
        for i in 1..=n {
            header.push_str(&format!(",x{i}"));
        }
        for i in 1..=n {
            header.push_str(&format!(",g{i}"));
        }
        for i in 1..=n {
            header.push_str(&format!(",xi{i}"));
        }
        header.push_str(",d_S,d_C");
        writeln!(w, "{header}")?;
        for k in 0..self.len() {
            let mut row = format!("{}", self.times[k]);
            for v in self.states[k].as_slice() {
                row.push_str(&format!(",{v}"));
            }
            for v in self.controls[k].as_slice() {
                row.push_str(&format!(",{v}"));
            }
            for v in self.corrections[k].as_slice() {
                row.push_str(&format!(",{v}"));
            }
            row.push_str(&format!(",{},{}", self.dist_target[k], self.dist_set[k]));
            writeln!(w, "{row}")?;
        }
        Ok(())
    }
}

/// One catching-up step: free Euler move, then projection onto C(t+h).
///
/// Returns the next state and the realized normal correction ξ.
pub fn catching_up_step(
    set: &MovingSet,
    t: f64,
    x: &Vect,
    g: &Vect,
    h: f64,
    ) -> Result<(Vect, Vect), DynamicsError> {
    let free = *x + *g * h;
    let d = set.distance(t + h, &free)?;
    if d >= set.prox_radius() {
        return Err(DynamicsError::StepTooLarge {
            dist: d,
            reach: set.prox_radius(),
        });
    }
    let next = set.project(t + h, &free)?;
    let xi = (free - next) * (1.0 / h);
    Ok((next, xi))
}

/// One explicit Euler step of the bounded subdifferential inclusion
/// ẋ ∈ −(L_C+M) ∂d_{C(t)}(x) + g.
///
/// The multiplier λ ∈ [0, l_bound] is chosen minimally so that the result
/// violates the constraint by at most `tol`; used as a cross-check
/// integrator against the catching-up scheme.
pub fn subdifferential_step(
    set: &MovingSet,
    t: f64,
    x: &Vect,
    g: &Vect,
    h: f64,
    l_bound: f64,
    tol: f64,
) -> Result<Vect, DynamicsError> {
    let free = *x + *g * h;
    let d = set.distance(t + h, &free)?;
    if d <= tol {
        return Ok(free);
    }
    if d >= set.prox_radius() {
        return Err(DynamicsError::StepTooLarge {
            dist: d,
            reach: set.prox_radius(),
        });
    }
    let proj = set.project(t + h, &free)?;
    let grad_dir = (free - proj) * (1.0 / d);
    let lambda = ((d - tol) / h).clamp(0.0, l_bound);
    Ok(free - grad_dir * (lambda * h))
}

/// One step of the projected differential inclusion
/// ẋ ∈ Π_{T_C(x)} G(x) for a static set.
///
/// The tangent projection removes the component of g in the normal cone
/// (Moreau decomposition); the result is safety-projected onto C.
pub fn projected_step(
    set: &MovingSet,
    x: &Vect,
    g: &Vect,
    h: f64,
) -> Result<Vect, DynamicsError> {
    if !set.is_static() {
        return Err(DynamicsError::AutonomousOnly);
    }
    let t0 = set.time_domain().0;
    let gens = set.normal_generators(t0, x, 1e-9)?;
    let tangential = *g - project_onto_cone(g, &gens);
    let next = set.project(t0, &(*x + tangential * h))?;
    Ok(next)
}

/// Iterates the catching-up scheme under a state-feedback control policy
/// until the target is reached or the horizon expires.
///
/// `policy(t, x)` must select a velocity in G(t, x); the selection is held
/// constant inside each step. The first-entry time is refined by locating
/// the zero of the linearly interpolated target distance across the
/// bracketing step.
#[allow(clippy::too_many_arguments)]
pub fn simulate(
    set: &MovingSet,
    _field: &ControlField,
    policy: &dyn Fn(f64, &Vect) -> Vect,
    t0: f64,
    x0: &Vect,
    target: &TargetSet,
    h: f64,
    horizon: f64,
) -> Result<TrajectoryRecord, DynamicsError> {
    simulate_with_tol(set, policy, t0, x0, target, h, horizon, 1e-9)
}

#[allow(clippy::too_many_arguments)]
pub fn simulate_with_tol(
    set: &MovingSet,
    policy: &dyn Fn(f64, &Vect) -> Vect,
    t0: f64,
    x0: &Vect,
    target: &TargetSet,
    h: f64,
    horizon: f64,
    reach_tol: f64,
) -> Result<TrajectoryRecord, DynamicsError> {
    assert!(h > 0.0);
    let d0 = set.distance(t0, x0)?;
    if d0 > 1e-9 {
        return Err(DynamicsError::InfeasibleStart { dist: d0 });
    }
    let t_end = (t0 + horizon).min(set.time_domain().1);

    let n = x0.dim();
    let mut rec = TrajectoryRecord {
        times: Vec::new(),
        states: Vec::new(),
        controls: Vec::new(),
        corrections: Vec::new(),
        dist_target: Vec::new(),
        dist_set: Vec::new(),
        hit_time: None,
        max_violation: 0.0,
    };

    let mut t = t0;
    let mut x = *x0;
    loop {
        let d_s = target.distance(&x);
        let d_c = set.distance(t, &x)?;
        rec.times.push(t);
        rec.states.push(x);
        rec.dist_target.push(d_s);
        rec.dist_set.push(d_c);
        rec.max_violation = rec.max_violation.max(d_c);

        if d_s <= reach_tol {
            rec.hit_time = Some(if rec.times.len() == 1 {
                t0
            } else {
                let k = rec.times.len() - 1;
                refine_hit_time(
                    target,
                    rec.times[k - 1],
                    &rec.states[k - 1],
                    rec.dist_target[k - 1],
                    t,
                    &x,
                    d_s,
                    reach_tol,
                )
            });
            rec.controls.push(Vect::zeros(n));
            rec.corrections.push(Vect::zeros(n));
            break;
        }
        if t + h > t_end + 1e-12 {
            rec.controls.push(Vect::zeros(n));
            rec.corrections.push(Vect::zeros(n));
            break;
        }

        let g = policy(t, &x);
        let (next, xi) = catching_up_step(set, t, &x, &g, h)?;
        rec.controls.push(g);
        rec.corrections.push(xi);
        x = next;
        t += h;
    }
    Ok(rec)
}

/// Zero of the interpolated target distance along the bracketing segment.
#[allow(clippy::too_many_arguments)]
fn refine_hit_time(
    target: &TargetSet,
    t_prev: f64,
    x_prev: &Vect,
    d_prev: f64,
    t_curr: f64,
    x_curr: &Vect,
    d_curr: f64,
    reach_tol: f64,
) -> f64 {
    if d_prev <= d_curr {
        return t_curr;
    }
    if d_curr > 0.0 {
        // Scalar linear interpolation toward zero, clamped into the step.
        let frac = (d_prev / (d_prev - d_curr)).min(1.0);
        return t_prev + frac * (t_curr - t_prev);
    }
    // Entered the target strictly inside the step: locate the boundary
    // crossing on the linearly interpolated state by bisection.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let xm = *x_prev + (*x_curr - *x_prev) * mid;
        if target.distance(&xm) <= reach_tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    t_prev + hi * (t_curr - t_prev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios;

    #[test]
    fn catching_up_drag_at_left_boundary() {
        let b = scenarios::example1();
        // At x = −1 with u = 1 the control velocity is x+1 = 0; the moving
        // boundary drags the state at unit speed.
        let (next, xi) =
            catching_up_step(&b.set, 0.0, &Vect::scalar(-1.0), &Vect::scalar(0.0), 0.01).unwrap();
        assert!((next[0] + 0.99).abs() < 1e-14);
        assert!((xi[0] + 1.0).abs() < 1e-12, "xi = {:?}", xi);
    }

    #[test]
    fn catching_up_interior_no_correction() {
        let b = scenarios::example1();
        let (next, xi) =
            catching_up_step(&b.set, 0.0, &Vect::scalar(0.0), &Vect::scalar(1.0), 0.01).unwrap();
        assert!((next[0] - 0.01).abs() < 1e-15);
        assert_eq!(xi.norm(), 0.0);
    }

    #[test]
    fn catching_up_circle_normal_component() {
        let b = scenarios::example2();
        let x = Vect::of2(0.0, 1.0);
        let g = Vect::of2(1.0, 1.0);
        // As h → 0 the realized correction tends to the normal component of
        // g at the contact point, here (0,1)·((1,1)·(0,1)) = (0,1).
        let mut prev_err = f64::INFINITY;
        for &h in &[1e-2, 1e-3, 1e-4] {
            let (_, xi) = catching_up_step(&b.set, 0.0, &x, &g, h).unwrap();
            let err = xi.dist(&Vect::of2(0.0, 1.0));
            assert!(err < prev_err);
            prev_err = err;
        }
        assert!(prev_err < 1e-3, "xi error {prev_err}");
    }

    #[test]
    fn simulate_example1_hit_time() {
        let b = scenarios::example1();
        let policy = |_t: f64, x: &Vect| Vect::scalar(x[0] + 1.0);
        let rec = simulate(
            &b.set,
            &b.control,
            &policy,
            0.0,
            &Vect::scalar(-1.0),
            &b.target,
            1e-4,
            10.0,
        )
        .unwrap();
        let expect = 1.0 + 3.0f64.ln();
        let hit = rec.hit_time.expect("target reached");
        assert!((hit - expect).abs() < 5e-3, "hit {hit} vs {expect}");
        assert_eq!(rec.max_violation, 0.0);
        // Dragging phase: x(t) = −1+t on [0, 1].
        for (k, &t) in rec.times.iter().enumerate() {
            if t <= 1.0 {
                assert!(
                    (rec.states[k][0] - (-1.0 + t)).abs() <= 2.0 * 1e-4,
                    "drag violated at t={t}"
                );
            }
        }
    }

    #[test]
    fn simulate_start_inside_target() {
        let b = scenarios::example1();
        let policy = |_t: f64, x: &Vect| Vect::scalar(x[0] + 1.0);
        let rec = simulate(
            &b.set,
            &b.control,
            &policy,
            0.0,
            &Vect::scalar(2.0),
            &b.target,
            1e-3,
            10.0,
        )
        .unwrap();
        assert_eq!(rec.hit_time, Some(0.0));
    }

    #[test]
    fn simulate_example2_slide_and_hit() {
        let b = scenarios::example2();
        let y0 = 2.0 - 2.0f64.sqrt();
        let policy = |_t: f64, _x: &Vect| Vect::of2(1.0, 1.0);
        let rec = simulate(
            &b.set,
            &b.control,
            &policy,
            0.0,
            &Vect::of2(0.0, y0),
            &b.target,
            1e-4,
            10.0,
        )
        .unwrap();
        let expect = 2.0 + 2.0f64.sqrt(); // T3(2−√2)
        let hit = rec.hit_time.expect("target reached");
        assert!((hit - expect).abs() < 5e-3, "hit {hit} vs {expect}");
        // Passes through P = (√2/2, 2−√2/2) at time √2/2.
        let t_p = 2.0f64.sqrt() / 2.0;
        let k = rec.times.iter().position(|&t| t >= t_p).unwrap();
        let p = Vect::of2(t_p, 2.0 - t_p);
        assert!(rec.states[k].dist(&p) < 5e-3, "state {:?}", rec.states[k]);
    }

    #[test]
    fn subdifferential_step_interior_is_euler() {
        let b = scenarios::example1();
        let next = subdifferential_step(
            &b.set,
            0.0,
            &Vect::scalar(0.5),
            &Vect::scalar(1.0),
            0.01,
            4.0,
            1e-4,
        )
        .unwrap();
        assert!((next[0] - 0.51).abs() < 1e-15);
    }

    #[test]
    fn subdifferential_matches_catching_up_on_interval() {
        let b = scenarios::example1();
        let x = Vect::scalar(-1.0);
        let g = Vect::scalar(-0.5);
        for &h in &[1e-2, 5e-3, 2.5e-3] {
            let (cu, _) = catching_up_step(&b.set, 0.0, &x, &g, h).unwrap();
            let sd = subdifferential_step(&b.set, 0.0, &x, &g, h, 4.0, h * h).unwrap();
            assert!(
                (cu[0] - sd[0]).abs() <= h * h + 1e-15,
                "h={h}: gap {}",
                (cu[0] - sd[0]).abs()
            );
        }
    }

    #[test]
    fn subdifferential_richardson_on_circle() {
        let b = scenarios::example2();
        let x = Vect::of2(0.0, 1.0);
        let g = Vect::of2(1.0, 1.0);
        let gap = |h: f64| {
            let (cu, _) = catching_up_step(&b.set, 0.0, &x, &g, h).unwrap();
            let sd =
                subdifferential_step(&b.set, 0.0, &x, &g, h, b.rho, h * h).unwrap();
            cu.dist(&sd)
        };
        let g1 = gap(1e-2);
        let g2 = gap(5e-3);
        // Per-step agreement is O(h²): halving h shrinks the gap ~4x.
        assert!(g2 < g1 / 2.5, "g1={g1} g2={g2}");
    }

    #[test]
    fn projected_step_cases() {
        let b = scenarios::example2();
        // Interior point: tangent cone is the whole plane.
        let next = projected_step(&b.set, &Vect::of2(3.0, 1.0), &Vect::of2(1.0, 1.0), 0.01).unwrap();
        assert!(next.dist(&Vect::of2(3.01, 1.01)) < 1e-14);
        // Bottom arc of the hole: only the tangential part survives.
        let x = Vect::of2(0.0, 1.0);
        let next = projected_step(&b.set, &x, &Vect::of2(1.0, 1.0), 0.01).unwrap();
        // Tangential part of (1,1) at (0,1) is (1,0); safety projection
        // pulls back onto the circle.
        assert!((next[0] - 0.01).abs() < 1e-4);
        assert!(next[1] <= 1.0 + 1e-12);

        let moving = scenarios::example1();
        assert!(matches!(
            projected_step(&moving.set, &Vect::scalar(0.0), &Vect::scalar(1.0), 0.01),
            Err(DynamicsError::AutonomousOnly)
        ));
    }

    #[test]
    fn trajectory_determinism() {
        let b = scenarios::example1();
        let policy = |_t: f64, x: &Vect| Vect::scalar(x[0] + 1.0);
        let run = || {
            simulate(
                &b.set,
                &b.control,
                &policy,
                0.0,
                &Vect::scalar(-0.5),
                &b.target,
                1e-3,
                5.0,
            )
            .unwrap()
        };
        let (a, c) = (run(), run());
        assert_eq!(a.hit_time, c.hit_time);
        for (xa, xc) in a.states.iter().zip(c.states.iter()) {
            assert_eq!(xa.as_slice(), xc.as_slice());
        }
    }

    #[test]
    fn control_set_supports() {
        let g = ControlSet::Polytope(vec![
            Vect::of2(-1.0, 1.0),
            Vect::of2(1.0, 1.0),
            Vect::of2(0.0, 0.0),
        ]);
        let q = Vect::of2(0.0, -1.0);
        assert_eq!(g.support_min(&q), -1.0);
        assert_eq!(g.support_max(&q), 0.0);
        let ball = ControlSet::Ball {
            center: Vect::of2(0.0, 0.0),
            radius: 2.0,
        };
        assert!((ball.support_max(&Vect::of2(3.0, 4.0)) - 10.0).abs() < 1e-12);
    }
}
