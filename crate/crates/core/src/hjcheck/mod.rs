//! Hamilton-Jacobi verification: evaluates the two Hamiltonians of the
//! augmented dynamics against proximal normals of a candidate value
//! function's epigraph/hypograph, and the weak/strong invariance
//! inequalities for candidate invariant sets.

mod normals;

pub use normals::{epi_normals, graph_normal_generators, hypo_normals, ProbeParams};

use std::sync::Arc;

use serde::Serialize;

use crate::dynamics::ControlField;
use crate::geometry::{GeometryError, MovingSet, Shape, TargetSet, MEMBERSHIP_TOL};
use crate::vect::{project_onto_cone, Vect};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HjError {
    #[error("point at distance {dist} from C(τ) is not in graph(C)")]
    NotInGraph { dist: f64 },
    #[error("augmented λ = {lambda} does not match θ(τ,x) = {theta}")]
    ValueMismatch { lambda: f64, theta: f64 },
    #[error("sign condition failed: {0}")]
    SignConditionFailed(String),
    #[error("candidate set never meets C(t) on the probed times")]
    EmptyIntersection,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Point of graph(C) × ℝ carrying the augmented state (τ, x, λ).
#[derive(Clone, Copy, Debug)]
pub struct AugmentedPoint {
    pub tau: f64,
    pub x: Vect,
    pub lambda: f64,
}

impl AugmentedPoint {
    pub fn new(tau: f64, x: Vect, lambda: f64) -> Self {
        AugmentedPoint { tau, x, lambda }
    }
}

/// Candidate value function θ on graph(C) with optional analytic gradient
/// and declared singular features carrying epi/hypograph cone tables.
#[derive(Clone)]
pub struct CandidateValueFunction {
    eval: Arc<dyn Fn(f64, &Vect) -> f64 + Send + Sync>,
    /// Augmented gradient (∂_t θ, ∇_x θ) where θ is differentiable.
    gradient: Option<Arc<dyn Fn(f64, &Vect) -> Vect + Send + Sync>>,
    features: Vec<SingularFeature>,
}

impl CandidateValueFunction {
    pub fn new(eval: Arc<dyn Fn(f64, &Vect) -> f64 + Send + Sync>) -> Self {
        CandidateValueFunction {
            eval,
            gradient: None,
            features: Vec::new(),
        }
    }

    pub fn with_gradient(mut self, g: Arc<dyn Fn(f64, &Vect) -> Vect + Send + Sync>) -> Self {
        self.gradient = Some(g);
        self
    }

    pub fn with_features(mut self, features: Vec<SingularFeature>) -> Self {
        self.features = features;
        self
    }

    pub fn eval(&self, t: f64, x: &Vect) -> f64 {
        (self.eval)(t, x)
    }

    pub fn gradient_at(&self, t: f64, x: &Vect) -> Option<Vect> {
        self.gradient.as_ref().map(|g| g(t, x))
    }

    pub fn features(&self) -> &[SingularFeature] {
        &self.features
    }

    pub fn feature_at(&self, t: f64, x: &Vect) -> Option<&SingularFeature> {
        self.features.iter().find(|f| (f.matches)(t, x))
    }
}

/// Declared singular curve/point with analytic epi/hypograph normal
/// generators (augmented covectors of dimension n+2).
#[derive(Clone)]
pub struct SingularFeature {
    pub name: String,
    pub matches: Arc<dyn Fn(f64, &Vect) -> bool + Send + Sync>,
    pub epi: Arc<dyn Fn(f64, &Vect) -> Vec<Vect> + Send + Sync>,
    pub hypo: Arc<dyn Fn(f64, &Vect) -> Vec<Vect> + Send + Sync>,
    /// Representative probe points on the feature.
    pub probes: Vec<(f64, Vect)>,
}

/// Which inequality a report entry was evaluated against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Inequality {
    #[serde(rename = "H-")]
    HMinus,
    #[serde(rename = "H+")]
    HPlus,
    #[serde(rename = "weak")]
    Weak,
    #[serde(rename = "strong")]
    Strong,
}

#[derive(Clone, Debug, Serialize)]
pub struct HjEntry {
    pub tau: f64,
    pub x: Vec<f64>,
    pub lambda: Option<f64>,
    pub p: Vec<f64>,
    pub inequality: Inequality,
    pub value: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HamiltonianReport {
    pub pass: bool,
    pub tol: f64,
    /// Largest Hamiltonian value seen (≤ tol everywhere means pass).
    pub max_value: f64,
    pub worst: Option<HjEntry>,
    pub probes: usize,
    pub cones_exact: bool,
    pub entries: Vec<HjEntry>,
}

impl HamiltonianReport {
    fn from_entries(entries: Vec<HjEntry>, tol: f64, probes: usize, cones_exact: bool) -> Self {
        let max_value = entries
            .iter()
            .map(|e| e.value)
            .fold(f64::NEG_INFINITY, f64::max);
        let worst = entries
            .iter()
            .max_by(|a, b| a.value.total_cmp(&b.value))
            .cloned();
        HamiltonianReport {
            pass: entries.iter().all(|e| e.pass),
            tol,
            max_value,
            worst,
            probes,
            cones_exact,
            entries,
        }
    }

    /// One-line-per-probe summary table.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} entries over {} probes, max value {:.3e}, tol {:.1e} -> {}\n",
            self.entries.len(),
            self.probes,
            self.max_value,
            self.tol,
            if self.pass { "PASS" } else { "FAIL" }
        ));
        if let Some(w) = &self.worst {
            out.push_str(&format!(
                "worst: {:?} at (tau={}, x={:?}) p={:?} value={:.6e}\n",
                w.inequality, w.tau, w.x, w.p, w.value
            ));
        }
        out
    }
}

/// Normal-cone summand shared by all four Hamiltonians:
/// min over v ∈ −(N_{C(τ)}(x) ∩ ρB) of v·p_x, exactly −ρ‖Π_N(p_x)‖ for
/// finitely generated cones.
fn cone_term(set: &MovingSet, tau: f64, x: &Vect, p_x: &Vect, rho: f64) -> Result<f64, HjError> {
    let gens = set
        .normal_generators(tau, x, MEMBERSHIP_TOL)
        .map_err(|e| match e {
            GeometryError::NotInSet { dist, .. } => HjError::NotInGraph { dist },
            other => HjError::Geometry(other),
        })?;
    if gens.is_empty() {
        return Ok(0.0);
    }
    let pi = project_onto_cone(p_x, &gens);
    Ok(-rho * pi.norm())
}

/// H_−(τ,x,λ,p): normal-cone summand plus the minimized control summand
/// over v ∈ {1} × G(τ,x) × {−1}.
pub fn hamiltonian_minus(
    set: &MovingSet,
    field: &ControlField,
    pt: &AugmentedPoint,
    p: &Vect,
    rho: f64,
) -> Result<f64, HjError> {
    debug_assert_eq!(p.dim(), pt.x.dim() + 2);
    let (p_t, p_x, p_l) = p.split_augmented();
    let t1 = cone_term(set, pt.tau, &pt.x, &p_x, rho)?;
    Ok(t1 + p_t + field.support_min(pt.tau, &pt.x, &p_x) - p_l)
}

/// H_+(τ,x,λ,p): as `hamiltonian_minus` with the control summand maximized.
pub fn hamiltonian_plus(
    set: &MovingSet,
    field: &ControlField,
    pt: &AugmentedPoint,
    p: &Vect,
    rho: f64,
) -> Result<f64, HjError> {
    debug_assert_eq!(p.dim(), pt.x.dim() + 2);
    let (p_t, p_x, p_l) = p.split_augmented();
    let t1 = cone_term(set, pt.tau, &pt.x, &p_x, rho)?;
    Ok(t1 + p_t + field.support_max(pt.tau, &pt.x, &p_x) - p_l)
}

/// Probe layout for candidate verification and invariance checks.
#[derive(Clone, Debug)]
pub struct SamplePlan {
    /// Probe count along the time axis (1 for static sets).
    pub time_samples: usize,
    /// Probe count per spatial axis.
    pub space_samples: usize,
    /// Include the candidate's declared singular features.
    pub include_features: bool,
    /// Also test normalized pairwise conic combinations of each cone list.
    pub include_combos: bool,
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan {
            time_samples: 13,
            space_samples: 41,
            include_features: true,
            include_combos: true,
        }
    }
}

impl SamplePlan {
    /// Deterministic probe points on graph(C): per sampled time, the product
    /// linspace over the bounding box filtered to C(t).
    pub fn graph_probes(&self, set: &MovingSet) -> Vec<(f64, Vect)> {
        let (t0, t1) = set.time_domain();
        let times: Vec<f64> = if set.is_static() || !t1.is_finite() || self.time_samples <= 1 {
            vec![t0]
        } else {
            (0..self.time_samples)
                .map(|k| t0 + (t1 - t0) * (k as f64) / ((self.time_samples - 1) as f64))
                .collect()
        };
        let mut probes = Vec::new();
        for &t in &times {
            let (lo, hi) = set.shape().bounds(t);
            let n = set.dim();
            let steps = self.space_samples.max(2);
            let mut idx = vec![0usize; n];
            loop {
                let mut x = Vect::zeros(n);
                for j in 0..n {
                    let f = (idx[j] as f64) / ((steps - 1) as f64);
                    x[j] = lo[j] + f * (hi[j] - lo[j]);
                }
                if set.shape().distance(t, &x) <= MEMBERSHIP_TOL {
                    probes.push((t, x));
                }
                // Odometer over the spatial grid.
                let mut j = 0;
                loop {
                    idx[j] += 1;
                    if idx[j] < steps {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                    if j == n {
                        break;
                    }
                }
                if j == n {
                    break;
                }
            }
        }
        probes
    }
}

/// Evaluates (H_−) at epigraph normals and (H_+) at hypograph normals of a
/// candidate over the sample plan.
///
/// Horizontal normals (vanishing λ-component) are tested only against
/// (H_+): they are common to both cones, and vertical spots of the
/// epi/hypograph above boundary points are covered by the same
/// λ-independent evaluations.
pub fn verify_candidate(
    set: &MovingSet,
    field: &ControlField,
    target: &TargetSet,
    theta: &CandidateValueFunction,
    plan: &SamplePlan,
    rho: f64,
    tol: f64,
) -> Result<HamiltonianReport, HjError> {
    let probes = plan.graph_probes(set);

    // Boundary/positivity conditions first; failure short-circuits.
    for (t, x) in &probes {
        let v = theta.eval(*t, x);
        if target.contains(x, MEMBERSHIP_TOL) {
            if v.abs() > tol.max(1e-9) {
                return Err(HjError::SignConditionFailed(format!(
                    "theta = {v} at target point (t={t}, x={x:?})"
                )));
            }
        } else if v <= 0.0 {
            return Err(HjError::SignConditionFailed(format!(
                "theta = {v} not positive off the target at (t={t}, x={x:?})"
            )));
        }
    }

    let mut all_probes = probes;
    if plan.include_features {
        for f in theta.features() {
            for (t, x) in &f.probes {
                all_probes.push((*t, *x));
            }
        }
    }

    let params = ProbeParams::default();
    let mut entries = Vec::new();
    for (t, x) in &all_probes {
        let lambda = theta.eval(*t, x);
        let pt = AugmentedPoint::new(*t, *x, lambda);
        let epi = epi_normals(set, theta, &pt, &params)?;
        let hypo = hypo_normals(set, theta, &pt, &params)?;
        // The invariance requirement only constrains points off the target
        // (trajectories are not continued past arrival), so conic
        // combinations are probed away from S; the tabulated generators are
        // still evaluated everywhere, as in the worked verifications.
        let combos = plan.include_combos && !target.contains(x, MEMBERSHIP_TOL);
        push_candidate_entries(set, field, &pt, &epi, &hypo, combos, rho, tol, &mut entries)?;
    }

    Ok(HamiltonianReport::from_entries(
        entries,
        tol,
        all_probes.len(),
        set.cones_exact(),
    ))
}

fn is_horizontal(p: &Vect) -> bool {
    p[p.dim() - 1].abs() <= 1e-12 * (1.0 + p.norm())
}

#[allow(clippy::too_many_arguments)]
fn push_candidate_entries(
    set: &MovingSet,
    field: &ControlField,
    pt: &AugmentedPoint,
    epi: &[Vect],
    hypo: &[Vect],
    combos: bool,
    rho: f64,
    tol: f64,
    entries: &mut Vec<HjEntry>,
) -> Result<(), HjError> {
    let mut eval = |p: &Vect, from_epi: bool| -> Result<(), HjError> {
        if p.norm() == 0.0 {
            return Ok(());
        }
        let (ineq, value) = if from_epi && !is_horizontal(p) {
            (Inequality::HMinus, hamiltonian_minus(set, field, pt, p, rho)?)
        } else {
            (Inequality::HPlus, hamiltonian_plus(set, field, pt, p, rho)?)
        };
        entries.push(HjEntry {
            tau: pt.tau,
            x: pt.x.to_vec(),
            lambda: Some(pt.lambda),
            p: p.to_vec(),
            inequality: ineq,
            value,
            pass: value <= tol,
        });
        Ok(())
    };

    for p in epi {
        eval(p, true)?;
    }
    for p in hypo {
        eval(p, false)?;
    }
    if combos {
        for (list, from_epi) in [(epi, true), (hypo, false)] {
            for i in 0..list.len() {
                for j in i + 1..list.len() {
                    let mid = list[i].normalized() + list[j].normalized();
                    eval(&mid, from_epi)?;
                }
            }
        }
    }
    Ok(())
}

/// Shared driver for the invariance checks: evaluates the augmented
/// inequality at proximal normals of graph(C) ∩ ([0,∞) × K).
fn invariance_check(
    set: &MovingSet,
    field: &ControlField,
    k_shape: &Shape,
    plan: &SamplePlan,
    rho: f64,
    tol: f64,
    strong: bool,
) -> Result<HamiltonianReport, HjError> {
    assert!(k_shape.is_static(), "invariance targets are static sets");
    let probes = plan.graph_probes(set);

    // (non-empty): K must meet C(t) somewhere on the probed grid.
    let in_k = |x: &Vect| k_shape.distance(0.0, x) <= MEMBERSHIP_TOL;
    let mut k_probes: Vec<(f64, Vect)> = probes.iter().filter(|(_, x)| in_k(x)).cloned().collect();
    if k_probes.is_empty() {
        return Err(HjError::EmptyIntersection);
    }
    // The terminal instant is excluded: forward continuation (and with it
    // the invariance characterization) stops where the time window ends.
    let (t0, t1) = set.time_domain();
    k_probes.retain(|(t, _)| !t1.is_finite() || *t < t1);
    if k_probes.is_empty() {
        return Err(HjError::EmptyIntersection);
    }
    // Add K-boundary points intersected with C(t) (normals live there).
    let times: Vec<f64> = if set.is_static() || !t1.is_finite() {
        vec![t0]
    } else {
        let k = plan.time_samples.max(2);
        (0..k)
            .map(|i| t0 + (t1 - t0) * (i as f64) / (k as f64))
            .collect()
    };
    for &t in &times {
        for xb in k_shape.boundary_samples(0.0, 4 * plan.space_samples) {
            if set.shape().distance(t, &xb) <= MEMBERSHIP_TOL {
                k_probes.push((t, xb));
            }
        }
    }

    let ineq = if strong {
        Inequality::Strong
    } else {
        Inequality::Weak
    };
    let mut entries = Vec::new();
    for (t, x) in &k_probes {
        // Assembled generators of the intersection's normal cone.
        let mut ps: Vec<Vect> = graph_normal_generators(set, *t, x)?;
        for nk in k_shape.normal_generators(0.0, x, MEMBERSHIP_TOL) {
            let mut lifted = Vect::zeros(x.dim() + 1);
            for i in 0..x.dim() {
                lifted[i + 1] = nk[i];
            }
            ps.push(lifted);
        }
        if plan.include_combos {
            let base = ps.clone();
            for i in 0..base.len() {
                for j in i + 1..base.len() {
                    ps.push(base[i].normalized() + base[j].normalized());
                }
            }
        }
        for p in ps {
            if p.norm() == 0.0 {
                continue;
            }
            let n = x.dim();
            let p_t = p[0];
            let p_x = Vect::from_slice(&p.as_slice()[1..=n]);
            let t1_term = cone_term(set, *t, x, &p_x, rho)?;
            let control = if strong {
                field.support_max(*t, x, &p_x)
            } else {
                field.support_min(*t, x, &p_x)
            };
            let value = t1_term + p_t + control;
            entries.push(HjEntry {
                tau: *t,
                x: x.to_vec(),
                lambda: None,
                p: p.to_vec(),
                inequality: ineq,
                value,
                pass: value <= tol,
            });
        }
    }

    Ok(HamiltonianReport::from_entries(
        entries,
        tol,
        k_probes.len(),
        set.cones_exact(),
    ))
}

/// Weak-invariance inequality: the minimized control summand must be
/// dominated at every assembled normal.
pub fn weak_invariance_check(
    set: &MovingSet,
    field: &ControlField,
    k_shape: &Shape,
    plan: &SamplePlan,
    rho: f64,
    tol: f64,
) -> Result<HamiltonianReport, HjError> {
    invariance_check(set, field, k_shape, plan, rho, tol, false)
}

/// Strong-invariance inequality: as the weak check with the control summand
/// maximized.
pub fn strong_invariance_check(
    set: &MovingSet,
    field: &ControlField,
    k_shape: &Shape,
    plan: &SamplePlan,
    rho: f64,
    tol: f64,
) -> Result<HamiltonianReport, HjError> {
    invariance_check(set, field, k_shape, plan, rho, tol, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios;

    const LOG3: f64 = 1.0986122886681098;

    #[test]
    fn hamiltonian_values_at_left_corner() {
        let b = scenarios::example1();
        let pt = AugmentedPoint::new(0.0, Vect::scalar(-1.0), 1.0 + LOG3);
        // Tabulated hand values at the corner probe.
        let h = hamiltonian_plus(&b.set, &b.control, &pt, &Vect::from_slice(&[0.0, -1.0, 0.0]), 4.0)
            .unwrap();
        assert!((h + 2.0).abs() < 1e-12, "H+ = {h}");
        let h = hamiltonian_plus(&b.set, &b.control, &pt, &Vect::from_slice(&[1.0, -1.0, 0.0]), 4.0)
            .unwrap();
        assert!((h + 1.0).abs() < 1e-12, "H+ = {h}");
        // p = (−1, 0, −1): the spatial slot vanishes, so the normal-cone
        // summand contributes nothing and both control-summand terms cancel.
        let h = hamiltonian_minus(&b.set, &b.control, &pt, &Vect::from_slice(&[-1.0, 0.0, -1.0]), 4.0)
            .unwrap();
        assert!(h.abs() < 1e-12, "H- = {h}");
        let h = hamiltonian_plus(&b.set, &b.control, &pt, &Vect::from_slice(&[1.0, 0.0, 1.0]), 4.0)
            .unwrap();
        assert!(h.abs() < 1e-12, "H+ = {h}");
    }

    #[test]
    fn hamiltonian_interior_pde() {
        let b = scenarios::example1();
        let theta = b.exact_t.as_ref().unwrap();
        // Interior smooth point: H_- at (∇T, −1) reduces to the interior PDE
        // and vanishes.
        for &(t, x) in &[(0.5, 1.0), (1.5, 1.2), (0.2, -0.75)] {
            let xv = Vect::scalar(x);
            let g = theta.gradient_at(t, &xv).unwrap();
            let p = Vect::from_slice(&[g[0], g[1], -1.0]);
            let pt = AugmentedPoint::new(t, xv, theta.eval(t, &xv));
            let h = hamiltonian_minus(&b.set, &b.control, &pt, &p, 4.0).unwrap();
            assert!(h.abs() < 1e-12, "H- = {h} at ({t},{x})");
            // Epi/hypo consistency: H_-(p) = −H_+(−p) when the cone summand
            // vanishes.
            let hplus = hamiltonian_plus(&b.set, &b.control, &pt, &-p, 4.0).unwrap();
            assert!((h + hplus).abs() < 1e-12);
        }
    }

    #[test]
    fn hamiltonian_zero_covector() {
        let b = scenarios::example1();
        let pt = AugmentedPoint::new(0.0, Vect::scalar(-1.0), 1.0 + LOG3);
        let h = hamiltonian_plus(&b.set, &b.control, &pt, &Vect::zeros(3), 4.0).unwrap();
        assert_eq!(h, 0.0);
    }

    #[test]
    fn hamiltonian_positive_homogeneity() {
        let b = scenarios::example2();
        let pt = AugmentedPoint::new(0.0, Vect::of2(0.6, 1.2), scenarios::example2_exact_t(0.6, 1.2));
        let p = Vect::from_slice(&[0.3, -0.4, 0.8, -1.1]);
        for &alpha in &[0.5, 2.0, 7.25] {
            let h1 = hamiltonian_minus(&b.set, &b.control, &pt, &p, b.rho).unwrap();
            let h2 = hamiltonian_minus(&b.set, &b.control, &pt, &(p * alpha), b.rho).unwrap();
            assert!((h2 - alpha * h1).abs() < 1e-12 * (1.0 + alpha));
            let g1 = hamiltonian_plus(&b.set, &b.control, &pt, &p, b.rho).unwrap();
            let g2 = hamiltonian_plus(&b.set, &b.control, &pt, &(p * alpha), b.rho).unwrap();
            assert!((g2 - alpha * g1).abs() < 1e-12 * (1.0 + alpha));
            assert!(g1 >= h1);
        }
    }

    #[test]
    fn hamiltonian_not_in_graph() {
        let b = scenarios::example1();
        let pt = AugmentedPoint::new(2.0, Vect::scalar(0.0), 1.0);
        assert!(matches!(
            hamiltonian_minus(&b.set, &b.control, &pt, &Vect::zeros(3), 4.0),
            Err(HjError::NotInGraph { .. })
        ));
    }

    #[test]
    fn verify_example1_exact_passes() {
        let b = scenarios::example1();
        let theta = b.exact_t.clone().unwrap();
        let plan = SamplePlan {
            time_samples: 7,
            space_samples: 21,
            ..Default::default()
        };
        let report =
            verify_candidate(&b.set, &b.control, &b.target, &theta, &plan, b.rho, 1e-9).unwrap();
        assert!(report.pass, "{}", report.summary());
    }

    #[test]
    fn verify_example2_exact_passes() {
        let b = scenarios::example2();
        let theta = b.exact_t.clone().unwrap();
        let plan = SamplePlan {
            time_samples: 1,
            space_samples: 31,
            ..Default::default()
        };
        let report =
            verify_candidate(&b.set, &b.control, &b.target, &theta, &plan, b.rho, 1e-9).unwrap();
        assert!(report.pass, "{}", report.summary());
    }

    #[test]
    fn verify_bump_candidate_fails() {
        let b = scenarios::example1();
        let theta = scenarios::example1_bump_candidate(0.1);
        let plan = SamplePlan {
            time_samples: 7,
            space_samples: 21,
            ..Default::default()
        };
        let report =
            verify_candidate(&b.set, &b.control, &b.target, &theta, &plan, b.rho, 1e-9).unwrap();
        assert!(!report.pass);
        let worst = report.worst.unwrap();
        assert!(worst.value > 0.0);
        assert_eq!(worst.inequality, Inequality::HPlus);
    }

    #[test]
    fn weak_invariance_examples() {
        let b = scenarios::example1();
        let plan = SamplePlan {
            time_samples: 7,
            space_samples: 21,
            ..Default::default()
        };
        // K = {x ≤ 2} contains every trajectory the constraint allows.
        let k = Shape::box_nd(vec![f64::NEG_INFINITY], vec![2.0]);
        let report =
            weak_invariance_check(&b.set, &b.control, &k, &plan, b.rho, 1e-9).unwrap();
        assert!(report.pass, "{}", report.summary());

        // K = {x ≤ 1.9}: at x = 1.9 in the interior of C every admissible
        // velocity points right (min g = x−1 > 0), so weak invariance fails.
        let k = Shape::box_nd(vec![f64::NEG_INFINITY], vec![1.9]);
        let report =
            weak_invariance_check(&b.set, &b.control, &k, &plan, b.rho, 1e-9).unwrap();
        assert!(!report.pass);
        let worst = report.worst.unwrap();
        assert!(worst.value > 0.5);

        // Whole space: K contributes no normals; only graph(C)'s own cone is
        // probed and the inequality holds (solutions exist and stay in C).
        let k = Shape::box_nd(
            vec![f64::NEG_INFINITY],
            vec![f64::INFINITY],
        );
        let report =
            weak_invariance_check(&b.set, &b.control, &k, &plan, b.rho, 1e-9).unwrap();
        assert!(report.pass, "{}", report.summary());
    }

    #[test]
    fn strong_invariance_examples() {
        let b = scenarios::example1();
        let plan = SamplePlan {
            time_samples: 7,
            space_samples: 21,
            ..Default::default()
        };
        let whole = Shape::box_nd(vec![f64::NEG_INFINITY], vec![f64::INFINITY]);
        let report =
            strong_invariance_check(&b.set, &b.control, &whole, &plan, b.rho, 1e-9).unwrap();
        assert!(report.pass, "{}", report.summary());

        // C's own right half-space: the normal correction (−4) dominates the
        // fastest outward velocity (3).
        let k = Shape::box_nd(vec![f64::NEG_INFINITY], vec![2.0]);
        let report =
            strong_invariance_check(&b.set, &b.control, &k, &plan, b.rho, 1e-9).unwrap();
        assert!(report.pass, "{}", report.summary());

        // K = {x ≤ 0}: at (0, 0) the constraint cone is trivial and the
        // fastest velocity x+u = 1 escapes.
        let k = Shape::box_nd(vec![f64::NEG_INFINITY], vec![0.0]);
        let report =
            strong_invariance_check(&b.set, &b.control, &k, &plan, b.rho, 1e-9).unwrap();
        assert!(!report.pass);
        assert!(report.max_value > 0.9);
    }

    #[test]
    fn empty_intersection_detected() {
        let b = scenarios::example1();
        let plan = SamplePlan::default();
        let k = Shape::box_nd(vec![5.0], vec![6.0]);
        assert!(matches!(
            weak_invariance_check(&b.set, &b.control, &k, &plan, b.rho, 1e-9),
            Err(HjError::EmptyIntersection)
        ));
    }
}
