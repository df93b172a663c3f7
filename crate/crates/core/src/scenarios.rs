//! Built-in scenario constructions with closed-form minimum-time functions
//! and analytic epi/hypograph cone tables, used as oracles by the solver and
//! verification modules.

use std::sync::Arc;

use crate::dynamics::{ControlField, ControlLaw, ControlSet};
use crate::geometry::{Affine, MovingSet, Shape, TargetSet};
use crate::hjcheck::{CandidateValueFunction, SingularFeature};
use crate::vect::Vect;

const SQRT2: f64 = std::f64::consts::SQRT_2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("argument {value} outside the admissible range [{lo}, {hi}]")]
    DomainError { value: f64, lo: f64, hi: f64 },
    #[error("point at distance {dist} from C(t) is outside graph(C)")]
    OutsideGraph { dist: f64 },
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
}

/// A fully assembled scenario: constraint, velocity set, target, constants,
/// and (for the built-ins) the exact minimum-time function with its
/// singular-feature cone tables.
#[derive(Clone)]
pub struct ScenarioBundle {
    pub name: String,
    pub set: MovingSet,
    pub control: ControlField,
    pub target: TargetSet,
    pub exact_t: Option<CandidateValueFunction>,
    /// Truncation radius for the normal-cone summand, L_C + M.
    pub rho: f64,
}

impl ScenarioBundle {
    pub fn dim(&self) -> usize {
        self.set.dim()
    }

    /// Closed-form minimum time at (t, x); errors off graph(C).
    pub fn exact_t_at(&self, t: f64, x: &Vect) -> Result<f64, ScenarioError> {
        let exact = self
            .exact_t
            .as_ref()
            .expect("scenario has no exact value function");
        let dist = self
            .set
            .distance(t, x)
            .map_err(|_| ScenarioError::OutsideGraph { dist: f64::NAN })?;
        if dist > 1e-9 {
            return Err(ScenarioError::OutsideGraph { dist });
        }
        Ok(exact.eval(t, x))
    }
}

/// Scenario lookup by CLI name.
pub fn by_name(name: &str) -> Result<ScenarioBundle, ScenarioError> {
    match name {
        "example1" => Ok(example1()),
        "example2" => Ok(example2()),
        other => Err(ScenarioError::UnknownScenario(other.to_string())),
    }
}

// ---------------------------------------------------------------------------
// Example 1: moving interval C(t) = [−1+t, 2], dynamics ẋ ∈ −N + x + [−1,1],
// target S = {x ≥ 2}.
// ---------------------------------------------------------------------------

pub fn example1() -> ScenarioBundle {
    let set = MovingSet::new(
        Shape::interval(Affine { c: -1.0, s: 1.0 }, Affine::constant(2.0)),
        f64::INFINITY,
        1.0,
        (0.0, 3.0),
    );
    let control = ControlField::new(
        ControlLaw::StateTranslated(ControlSet::Polytope(vec![
            Vect::scalar(-1.0),
            Vect::scalar(1.0),
        ])),
        3.0,
        1.0,
    );
    let target = TargetSet::half_space_above(1, 0, 2.0);
    let exact_t = CandidateValueFunction::new(Arc::new(|t, x: &Vect| example1_exact_t(t, x[0])))
        .with_gradient(Arc::new(|t, x: &Vect| {
            let (dt, dx) = example1_gradient(t, x[0]);
            Vect::of2(dt, dx)
        }))
        .with_features(example1_features());
    ScenarioBundle {
        name: "example1".to_string(),
        set,
        control,
        target,
        exact_t: Some(exact_t),
        rho: 4.0,
    }
}

/// Two-branch closed form: 1 + log3 − t on the dragged plateau, and
/// log3 − log(1+x) to the right of the branch curve x = −1 + e^{t−1}.
pub fn example1_exact_t(t: f64, x: f64) -> f64 {
    if t <= 1.0 && x <= -1.0 + (t - 1.0).exp() {
        1.0 + 3.0f64.ln() - t
    } else {
        3.0f64.ln() - (1.0 + x).ln()
    }
}

fn example1_gradient(t: f64, x: f64) -> (f64, f64) {
    if t <= 1.0 && x <= -1.0 + (t - 1.0).exp() {
        (-1.0, 0.0)
    } else {
        (0.0, -1.0 / (1.0 + x))
    }
}

/// Candidate perturbed by an interior bump; used to exercise the
/// falsification direction of the verification theorem.
pub fn example1_bump_candidate(amplitude: f64) -> CandidateValueFunction {
    CandidateValueFunction::new(Arc::new(move |t, x: &Vect| {
        example1_exact_t(t, x[0]) + amplitude * (2.0 - x[0]) * x[0]
    }))
    .with_gradient(Arc::new(move |t, x: &Vect| {
        let (dt, dx) = example1_gradient(t, x[0]);
        Vect::of2(dt, dx + amplitude * (2.0 - 2.0 * x[0]))
    }))
}

fn cov3(a: f64, b: f64, c: f64) -> Vect {
    Vect::from_slice(&[a, b, c])
}

fn example1_features() -> Vec<SingularFeature> {
    let log3 = 3.0f64.ln();
    let tol = 1e-9;
    let mut feats = Vec::new();

    // Corner (0, −1), value 1 + log 3.
    feats.push(SingularFeature {
        name: "corner-left".into(),
        matches: Arc::new(move |t, x: &Vect| t.abs() <= tol && (x[0] + 1.0).abs() <= tol),
        epi: Arc::new(|_, _| vec![cov3(0.0, -1.0, 0.0), cov3(1.0, -1.0, 0.0), cov3(-1.0, 0.0, -1.0)]),
        hypo: Arc::new(|_, _| vec![cov3(0.0, -1.0, 0.0), cov3(1.0, -1.0, 0.0), cov3(1.0, 0.0, 1.0)]),
        probes: vec![(0.0, Vect::scalar(-1.0))],
    });

    // Corner (3, 2), value 0; the interval degenerates to the point {2}.
    feats.push(SingularFeature {
        name: "corner-final".into(),
        matches: Arc::new(move |t, x: &Vect| (t - 3.0).abs() <= tol && (x[0] - 2.0).abs() <= tol),
        epi: Arc::new(|_, _| {
            vec![cov3(0.0, 1.0, 0.0), cov3(1.0, -1.0, 0.0), cov3(0.0, -1.0 / 3.0, -1.0)]
        }),
        hypo: Arc::new(|_, _| {
            vec![cov3(0.0, 1.0, 0.0), cov3(1.0, -1.0, 0.0), cov3(0.0, 1.0 / 3.0, 1.0)]
        }),
        probes: vec![(3.0, Vect::scalar(2.0))],
    });

    // Corner (0, 2), value 0.
    feats.push(SingularFeature {
        name: "corner-target-initial".into(),
        matches: Arc::new(move |t, x: &Vect| t.abs() <= tol && (x[0] - 2.0).abs() <= tol),
        epi: Arc::new(|_, _| {
            vec![cov3(0.0, 1.0, 0.0), cov3(-1.0, 0.0, 0.0), cov3(0.0, -1.0 / 3.0, -1.0)]
        }),
        hypo: Arc::new(|_, _| {
            vec![cov3(0.0, 1.0, 0.0), cov3(-1.0, 0.0, 0.0), cov3(0.0, 1.0 / 3.0, 1.0)]
        }),
        probes: vec![(0.0, Vect::scalar(2.0))],
    });

    // Branch curve x = −1 + e^{t−1}: upward kink, empty epigraph cone.
    feats.push(SingularFeature {
        name: "branch-curve".into(),
        matches: Arc::new(move |t, x: &Vect| {
            (0.0..=1.0).contains(&t) && (x[0] - (-1.0 + (t - 1.0).exp())).abs() <= tol
        }),
        epi: Arc::new(|_, _| vec![]),
        hypo: Arc::new(|t, _| vec![cov3(1.0, 0.0, 1.0), cov3(0.0, (1.0 - t).exp(), 1.0)]),
        probes: vec![
            (0.0, Vect::scalar(-1.0 + (-1.0f64).exp())),
            (0.5, Vect::scalar(-1.0 + (-0.5f64).exp())),
            (1.0, Vect::scalar(0.0)),
        ],
    });

    // Target segment {(t, 2): 0 < t < 3}, value 0.
    feats.push(SingularFeature {
        name: "target-segment".into(),
        matches: Arc::new(move |t, x: &Vect| {
            t > tol && t < 3.0 - tol && (x[0] - 2.0).abs() <= tol
        }),
        epi: Arc::new(|_, _| vec![cov3(0.0, 1.0, 0.0), cov3(0.0, -1.0 / 3.0, -1.0)]),
        hypo: Arc::new(|_, _| vec![cov3(0.0, 1.0, 0.0), cov3(0.0, 1.0 / 3.0, 1.0)]),
        probes: vec![(0.5, Vect::scalar(2.0)), (1.5, Vect::scalar(2.0)), (2.9, Vect::scalar(2.0))],
    });

    // Γ₁: dragged boundary {(t, −1+t): 0 < t < 1}.
    feats.push(SingularFeature {
        name: "gamma1".into(),
        matches: Arc::new(move |t, x: &Vect| {
            t > tol && t < 1.0 - tol && (x[0] - (-1.0 + t)).abs() <= tol
        }),
        epi: Arc::new(|_, _| vec![cov3(1.0, -1.0, 0.0), cov3(-1.0, 0.0, -1.0)]),
        hypo: Arc::new(|_, _| vec![cov3(1.0, -1.0, 0.0), cov3(1.0, 0.0, 1.0)]),
        probes: vec![(0.25, Vect::scalar(-0.75)), (0.5, Vect::scalar(-0.5)), (0.9, Vect::scalar(-0.1))],
    });

    // Γ₂: plateau slice at t = 0, −1 < x < −1 + e^{−1}.
    let gamma2_hi = -1.0 + (-1.0f64).exp();
    feats.push(SingularFeature {
        name: "gamma2".into(),
        matches: Arc::new(move |t, x: &Vect| {
            t.abs() <= tol && x[0] > -1.0 + tol && x[0] < gamma2_hi - tol
        }),
        epi: Arc::new(|_, _| vec![cov3(-1.0, 0.0, 0.0), cov3(-1.0, 0.0, -1.0)]),
        hypo: Arc::new(|_, _| vec![cov3(-1.0, 0.0, 0.0), cov3(1.0, 0.0, 1.0)]),
        probes: vec![(0.0, Vect::scalar(-0.9)), (0.0, Vect::scalar(-0.7))],
    });

    // Γ₃: left boundary after detachment {(t, −1+t): 1 < t < 3}.
    feats.push(SingularFeature {
        name: "gamma3".into(),
        matches: Arc::new(move |t, x: &Vect| {
            t > 1.0 + tol && t < 3.0 - tol && (x[0] - (-1.0 + t)).abs() <= tol
        }),
        epi: Arc::new(|t, _| vec![cov3(1.0, -1.0, 0.0), cov3(0.0, -1.0 / t, -1.0)]),
        hypo: Arc::new(|t, _| vec![cov3(1.0, -1.0, 0.0), cov3(0.0, 1.0 / t, 1.0)]),
        probes: vec![(1.5, Vect::scalar(0.5)), (2.0, Vect::scalar(1.0)), (2.8, Vect::scalar(1.8))],
    });

    // Γ₄: log branch at t = 0, −1 + e^{−1} < x < 2.
    feats.push(SingularFeature {
        name: "gamma4".into(),
        matches: Arc::new(move |t, x: &Vect| {
            t.abs() <= tol && x[0] > gamma2_hi + tol && x[0] < 2.0 - tol
        }),
        epi: Arc::new(|_, x| vec![cov3(-1.0, 0.0, 0.0), cov3(0.0, -1.0 / (1.0 + x[0]), -1.0)]),
        hypo: Arc::new(|_, x| vec![cov3(-1.0, 0.0, 0.0), cov3(0.0, 1.0 / (1.0 + x[0]), 1.0)]),
        probes: vec![(0.0, Vect::scalar(0.0)), (0.0, Vect::scalar(1.0)), (0.0, Vect::scalar(1.9))],
    });

    let _ = log3;
    feats
}

// ---------------------------------------------------------------------------
// Example 2: static C = [−5,5]×[0,4] minus the open unit disk at (0,2),
// G = conv{(−1,1), (1,1), (0,0)}, target S = {y ≥ 4}.
// ---------------------------------------------------------------------------

pub fn example2() -> ScenarioBundle {
    let set = MovingSet::new(
        Shape::box_minus_disk([-5.0, 0.0], [5.0, 4.0], [0.0, 2.0], 1.0),
        1.0,
        0.0,
        (0.0, f64::INFINITY),
    );
    let control = ControlField::new(
        ControlLaw::Constant(ControlSet::Polytope(vec![
            Vect::of2(-1.0, 1.0),
            Vect::of2(1.0, 1.0),
            Vect::of2(0.0, 0.0),
        ])),
        SQRT2,
        0.0,
    );
    let target = TargetSet::half_space_above(2, 1, 4.0);
    let exact_t = CandidateValueFunction::new(Arc::new(|_t, x: &Vect| example2_exact_t(x[0], x[1])))
        .with_gradient(Arc::new(|_t, x: &Vect| {
            let (dx, dy) = example2_gradient(x[0], x[1]);
            Vect::from_slice(&[0.0, dx, dy])
        }))
        .with_features(example2_features());
    ScenarioBundle {
        name: "example2".to_string(),
        set,
        control,
        target,
        exact_t: Some(exact_t),
        rho: SQRT2,
    }
}

fn example2_domain_check(y0: f64) -> Result<(), ScenarioError> {
    let lo = 2.0 - SQRT2;
    if !(lo - 1e-12..=1.0 + 1e-12).contains(&y0) {
        return Err(ScenarioError::DomainError { value: y0, lo, hi: 1.0 });
    }
    Ok(())
}

/// Time for the control (1,1) to reach the hole circle from (0, y0).
pub fn example2_t1(y0: f64) -> Result<f64, ScenarioError> {
    example2_domain_check(y0)?;
    let radicand = (-y0 * y0 + 4.0 * y0 - 2.0).max(0.0);
    Ok(0.5 * (-radicand.sqrt() - y0 + 2.0))
}

/// Time to slide along the circle from the entry point up to P.
pub fn example2_t2(y0: f64) -> Result<f64, ScenarioError> {
    let t1 = example2_t1(y0)?;
    let clamp = |u: f64| u.clamp(-1.0 + 1e-15, 1.0 - 1e-15);
    let a = (0.5 * t1.clamp(-1.0, 1.0).asin()).tan();
    Ok(SQRT2 * (atanh(clamp(1.0 - SQRT2)) - atanh(clamp((a - 1.0) / SQRT2))))
}

/// Total time from (0, y0): reach the circle, slide to P, go straight to S.
pub fn example2_t3(y0: f64) -> Result<f64, ScenarioError> {
    Ok(example2_t1(y0)? + example2_t2(y0)? + 2.0 + SQRT2 / 2.0)
}

fn atanh(u: f64) -> f64 {
    0.5 * ((1.0 + u) / (1.0 - u)).ln()
}

/// Membership in the shadow region D (ties resolve to the 4−y branch).
pub fn example2_in_d(x: f64, y: f64) -> bool {
    let ax = x.abs();
    ax < SQRT2 / 2.0 && y < 2.0 - SQRT2 / 2.0 && y - ax > 2.0 - SQRT2
}

/// Closed-form minimum time: 4 − y off D, T3(y−|x|) − |x| on D.
pub fn example2_exact_t(x: f64, y: f64) -> f64 {
    if example2_in_d(x, y) {
        let ax = x.abs();
        example2_t3(y - ax).expect("D is inside the T3 domain") - ax
    } else {
        4.0 - y
    }
}

/// d/dξ of T3: the T1 square-root singularity cancels against T2, leaving a
/// bounded derivative on (2−√2, 1].
fn example2_t3_prime(xi: f64) -> f64 {
    let t1 = example2_t1(xi).expect("in domain");
    let radicand = (-xi * xi + 4.0 * xi - 2.0).max(1e-300);
    let t1p = -0.5 + (xi - 2.0) / (2.0 * radicand.sqrt());
    let c = (1.0 - t1 * t1).max(0.0).sqrt();
    t1p * (1.0 - 1.0 / (c * (t1 + c)))
}

fn example2_gradient(x: f64, y: f64) -> (f64, f64) {
    if example2_in_d(x, y) {
        let s = if x >= 0.0 { 1.0 } else { -1.0 };
        let q = example2_t3_prime(y - x.abs());
        (s * (-1.0 - q), q)
    } else {
        (0.0, -1.0)
    }
}

fn cov4(a: f64, b: f64, c: f64, d: f64) -> Vect {
    Vect::from_slice(&[a, b, c, d])
}

fn on_circle(x: &Vect, tol: f64) -> bool {
    ((x[0] * x[0] + (x[1] - 2.0) * (x[1] - 2.0)).sqrt() - 1.0).abs() <= tol
}

fn example2_features() -> Vec<SingularFeature> {
    let tol = 1e-9;
    let s22 = SQRT2 / 2.0;
    let mut feats = Vec::new();

    // P± = (±√2/2, 2−√2/2): circle departure points of the optimal slide.
    feats.push(SingularFeature {
        name: "departure-point".into(),
        matches: Arc::new(move |_t, x: &Vect| {
            (x[0].abs() - s22).abs() <= tol && (x[1] - (2.0 - s22)).abs() <= tol
        }),
        epi: Arc::new(move |_t, x: &Vect| {
            let s = x[0].signum();
            vec![
                cov4(0.0, -x[0], 2.0 - x[1], 0.0),
                cov4(0.0, 0.0, -1.0, -1.0),
                cov4(0.0, s * -0.5, -0.5, -1.0),
            ]
        }),
        hypo: Arc::new(move |_t, x: &Vect| {
            let s = x[0].signum();
            vec![
                cov4(0.0, -x[0], 2.0 - x[1], 0.0),
                cov4(0.0, 0.0, 1.0, 1.0),
                cov4(0.0, s * 0.5, 0.5, 1.0),
            ]
        }),
        probes: vec![
            (0.0, Vect::of2(s22, 2.0 - s22)),
            (0.0, Vect::of2(-s22, 2.0 - s22)),
        ],
    });

    // Symmetry ridge {(0, y): 2−√2 < y ≤ 1}: upward kink in x.
    feats.push(SingularFeature {
        name: "symmetry-ridge".into(),
        matches: Arc::new(move |_t, x: &Vect| {
            x[0].abs() <= tol && x[1] > 2.0 - SQRT2 + tol && x[1] <= 1.0 + tol
        }),
        epi: Arc::new(|_, _| vec![]),
        hypo: Arc::new(move |_t, x: &Vect| {
            let q = example2_t3_prime(x[1]);
            let mut gens = vec![cov4(0.0, 1.0 + q, -q, 1.0), cov4(0.0, -(1.0 + q), -q, 1.0)];
            if on_circle(x, 1e-9) {
                gens.push(cov4(0.0, -x[0], 2.0 - x[1], 0.0));
            }
            gens
        }),
        probes: vec![
            (0.0, Vect::of2(0.0, 0.8)),
            (0.0, Vect::of2(0.0, 0.65)),
            (0.0, Vect::of2(0.0, 1.0)),
        ],
    });

    // Tangent-line kink {y − |x| = 2−√2, 0 < |x| < √2/2}: convex crease.
    feats.push(SingularFeature {
        name: "shadow-boundary".into(),
        matches: Arc::new(move |_t, x: &Vect| {
            let ax = x[0].abs();
            ax > tol && ax < s22 - tol && (x[1] - ax - (2.0 - SQRT2)).abs() <= tol
        }),
        epi: Arc::new(move |_t, x: &Vect| {
            let s = x[0].signum();
            vec![cov4(0.0, s * -0.5, -0.5, -1.0), cov4(0.0, 0.0, -1.0, -1.0)]
        }),
        hypo: Arc::new(|_, _| vec![]),
        probes: vec![
            (0.0, Vect::of2(0.3, 0.3 + 2.0 - SQRT2)),
            (0.0, Vect::of2(-0.5, 0.5 + 2.0 - SQRT2)),
        ],
    });

    // Hole circle arcs (1 ≤ y ≤ 3), both sides by symmetry.
    feats.push(SingularFeature {
        name: "hole-arcs".into(),
        matches: Arc::new(move |_t, x: &Vect| {
            x[0].abs() > tol && x[1] >= 1.0 - tol && x[1] <= 3.0 + tol && on_circle(x, tol)
        }),
        epi: Arc::new(move |_t, x: &Vect| {
            let (dx, dy) = example2_arc_gradient(x);
            vec![cov4(0.0, -x[0], 2.0 - x[1], 0.0), cov4(0.0, dx, dy, -1.0)]
        }),
        hypo: Arc::new(move |_t, x: &Vect| {
            let (dx, dy) = example2_arc_gradient(x);
            vec![cov4(0.0, -x[0], 2.0 - x[1], 0.0), cov4(0.0, -dx, -dy, 1.0)]
        }),
        probes: vec![
            (0.0, Vect::of2(0.3, 2.0 - (1.0f64 - 0.09).sqrt())),
            (0.0, Vect::of2(0.6, 2.0 - 0.8)),
            (0.0, Vect::of2(0.8, 2.6)),
            (0.0, Vect::of2(0.5, 2.0 + (1.0f64 - 0.25).sqrt())),
            (0.0, Vect::of2(-0.3, 2.0 - (1.0f64 - 0.09).sqrt())),
            (0.0, Vect::of2(-0.8, 2.6)),
        ],
    });

    // Box corners.
    feats.push(SingularFeature {
        name: "bottom-corners".into(),
        matches: Arc::new(move |_t, x: &Vect| (x[0].abs() - 5.0).abs() <= tol && x[1].abs() <= tol),
        epi: Arc::new(move |_t, x: &Vect| {
            let s = x[0].signum();
            vec![cov4(0.0, s, 0.0, 0.0), cov4(0.0, 0.0, -1.0, 0.0), cov4(0.0, 0.0, -1.0, -1.0)]
        }),
        hypo: Arc::new(move |_t, x: &Vect| {
            let s = x[0].signum();
            vec![cov4(0.0, s, 0.0, 0.0), cov4(0.0, 0.0, -1.0, 0.0), cov4(0.0, 0.0, 1.0, 1.0)]
        }),
        probes: vec![(0.0, Vect::of2(5.0, 0.0)), (0.0, Vect::of2(-5.0, 0.0))],
    });
    feats.push(SingularFeature {
        name: "top-corners".into(),
        matches: Arc::new(move |_t, x: &Vect| {
            (x[0].abs() - 5.0).abs() <= tol && (x[1] - 4.0).abs() <= tol
        }),
        epi: Arc::new(move |_t, x: &Vect| {
            let s = x[0].signum();
            vec![cov4(0.0, s, 0.0, 0.0), cov4(0.0, 0.0, 1.0, 0.0), cov4(0.0, 0.0, -1.0, -1.0)]
        }),
        hypo: Arc::new(move |_t, x: &Vect| {
            let s = x[0].signum();
            vec![cov4(0.0, s, 0.0, 0.0), cov4(0.0, 0.0, 1.0, 0.0), cov4(0.0, 0.0, 1.0, 1.0)]
        }),
        probes: vec![(0.0, Vect::of2(5.0, 4.0)), (0.0, Vect::of2(-5.0, 4.0))],
    });

    // Side walls {x = ±5, 0 < y < 4}.
    feats.push(SingularFeature {
        name: "side-walls".into(),
        matches: Arc::new(move |_t, x: &Vect| {
            (x[0].abs() - 5.0).abs() <= tol && x[1] > tol && x[1] < 4.0 - tol
        }),
        epi: Arc::new(move |_t, x: &Vect| {
            let s = x[0].signum();
            vec![cov4(0.0, s, 0.0, 0.0), cov4(0.0, 0.0, -1.0, -1.0)]
        }),
        hypo: Arc::new(move |_t, x: &Vect| {
            let s = x[0].signum();
            vec![cov4(0.0, s, 0.0, 0.0), cov4(0.0, 0.0, 1.0, 1.0)]
        }),
        probes: vec![
            (0.0, Vect::of2(5.0, 1.0)),
            (0.0, Vect::of2(5.0, 3.0)),
            (0.0, Vect::of2(-5.0, 2.0)),
        ],
    });

    // Bottom edge {|x| < 5, y = 0} and top (target) edge {|x| < 5, y = 4}.
    feats.push(SingularFeature {
        name: "bottom-edge".into(),
        matches: Arc::new(move |_t, x: &Vect| x[0].abs() < 5.0 - tol && x[1].abs() <= tol),
        epi: Arc::new(|_, _| vec![cov4(0.0, 0.0, -1.0, 0.0), cov4(0.0, 0.0, -1.0, -1.0)]),
        hypo: Arc::new(|_, _| vec![cov4(0.0, 0.0, -1.0, 0.0), cov4(0.0, 0.0, 1.0, 1.0)]),
        probes: vec![(0.0, Vect::of2(-2.0, 0.0)), (0.0, Vect::of2(3.0, 0.0))],
    });
    feats.push(SingularFeature {
        name: "target-edge".into(),
        matches: Arc::new(move |_t, x: &Vect| {
            x[0].abs() < 5.0 - tol && (x[1] - 4.0).abs() <= tol
        }),
        epi: Arc::new(|_, _| vec![cov4(0.0, 0.0, 1.0, 0.0), cov4(0.0, 0.0, -1.0, -1.0)]),
        hypo: Arc::new(|_, _| vec![cov4(0.0, 0.0, 1.0, 0.0), cov4(0.0, 0.0, 1.0, 1.0)]),
        probes: vec![(0.0, Vect::of2(-1.5, 4.0)), (0.0, Vect::of2(2.5, 4.0))],
    });

    feats
}

/// Gradient on the hole arcs: the exact on-circle simplification
/// ∂_y T = −x/(x + √(1−x²)) on A₁ (below the departure latitude), and the
/// straight-run gradient (0, −1) on A₂.
fn example2_arc_gradient(x: &Vect) -> (f64, f64) {
    let s22 = SQRT2 / 2.0;
    let (ax, y) = (x[0].abs(), x[1]);
    let s = x[0].signum();
    if y < 2.0 - s22 {
        let c = (1.0 - ax * ax).max(0.0).sqrt();
        let dy = -ax / (ax + c);
        (s * (-1.0 - dy), dy)
    } else {
        (0.0, -1.0)
    }
}
