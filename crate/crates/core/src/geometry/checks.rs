//! Sampling-based regularity diagnostics for moving sets.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GeometryError, MovingSet};
use crate::vect::Vect;

/// Witness of a prox-regularity violation.
#[derive(Clone, Debug)]
pub struct ProxWitness {
    pub t: f64,
    pub x: Vect,
    pub y: Vect,
    pub zeta: Vect,
    pub margin: f64,
}

/// Result of the Monte-Carlo prox-regularity test.
#[derive(Clone, Debug)]
pub struct ProxRegularityReport {
    pub pass: bool,
    pub worst_margin: f64,
    pub witness: Option<ProxWitness>,
    pub samples: usize,
}

/// Monte-Carlo test of the prox-regularity inequality
/// ζ·(y−x) ≤ (1/(2r))‖ζ‖‖y−x‖² over sampled (t, x, y, ζ).
///
/// `x` runs over boundary samples (interior cones are trivial), `y` over the
/// whole set, ζ over unit cone generators and their conic midpoints.
pub fn check_prox_regularity(set: &MovingSet, r: f64, n_samples: usize, seed: u64) -> ProxRegularityReport {
    assert!(n_samples > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (t0, t1) = set.time_domain();
    let mut worst_margin = f64::NEG_INFINITY;
    let mut witness = None;
    let inv2r = if r.is_finite() { 1.0 / (2.0 * r) } else { 0.0 };

    let boundary_pool = 256;
    let mut count = 0usize;
    while count < n_samples {
        let t = if set.is_static() || t1 == t0 {
            t0
        } else {
            rng.gen_range(t0..=t1)
        };
        let Ok(boundary) = set.boundary_samples(t, boundary_pool) else {
            continue;
        };
        if boundary.is_empty() {
            continue;
        }
        let x = boundary[rng.gen_range(0..boundary.len())];
        let Ok(mut gens) = set.normal_generators(t, &x, 1e-7) else {
            continue;
        };
        if gens.len() >= 2 {
            // Conic midpoints exercise the interior directions of corner cones.
            let mid = (gens[0] + gens[1]).normalized();
            if mid.norm() > 0.0 {
                gens.push(mid);
            }
        }
        if gens.is_empty() {
            count += 1;
            continue;
        }
        let Ok(y) = set.sample_point(t, &mut rng) else {
            continue;
        };
        for zeta in &gens {
            let diff = y - x;
            let margin = zeta.dot(&diff) - inv2r * zeta.norm() * diff.dot(&diff);
            if margin > worst_margin {
                worst_margin = margin;
                witness = Some(ProxWitness {
                    t,
                    x,
                    y,
                    zeta: *zeta,
                    margin,
                });
            }
            count += 1;
        }
    }

    // Numerical slack for exact-equality configurations (e.g. points across a
    // circle of curvature radius exactly r).
    let pass = worst_margin <= 1e-10;
    ProxRegularityReport {
        pass,
        worst_margin,
        witness: if pass { witness.filter(|w| w.margin > 0.0) } else { witness },
        samples: count,
    }
}

/// Estimates the Hausdorff-Lipschitz constant of t ↦ C(t) from sampled
/// quotients d_H(C(t), C(s))/|t−s| on a uniform time partition.
pub fn estimate_set_lipschitz(
    set: &MovingSet,
    n_time_samples: usize,
) -> Result<f64, GeometryError> {
    assert!(n_time_samples >= 2);
    let (t0, t1) = set.time_domain();
    if t1 == t0 || set.is_static() {
        return Ok(0.0);
    }
    let n_boundary = if set.dim() == 1 { 2 } else { 720 };
    let mut best = 0.0f64;
    for k in 0..n_time_samples - 1 {
        let ta = t0 + (t1 - t0) * (k as f64) / ((n_time_samples - 1) as f64);
        let tb = t0 + (t1 - t0) * ((k + 1) as f64) / ((n_time_samples - 1) as f64);
        let d = hausdorff(set, ta, tb, n_boundary)?;
        best = best.max(d / (tb - ta));
    }
    Ok(best)
}

/// Hausdorff distance between C(ta) and C(tb) by boundary sampling.
fn hausdorff(set: &MovingSet, ta: f64, tb: f64, n: usize) -> Result<f64, GeometryError> {
    let one_sided = |tfrom: f64, tto: f64| -> Result<f64, GeometryError> {
        let mut worst = 0.0f64;
        for p in set.boundary_samples(tfrom, n)? {
            worst = worst.max(set.distance(tto, &p)?);
        }
        Ok(worst)
    };
    Ok(one_sided(ta, tb)?.max(one_sided(tb, ta)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Affine, Shape};

    #[test]
    fn prox_regularity_convex_box() {
        let set = MovingSet::new(
            Shape::box_nd(vec![0.0, 0.0], vec![1.0, 2.0]),
            1e6,
            0.0,
            (0.0, 1.0),
        );
        let report = check_prox_regularity(&set, 1e6, 2_000, 7);
        assert!(report.pass, "worst margin {}", report.worst_margin);
    }

    #[test]
    fn prox_regularity_example2() {
        let set = crate::scenarios::example2().set;
        let report = check_prox_regularity(&set, 1.0, 10_000, 42);
        assert!(report.pass, "worst margin {}", report.worst_margin);

        // The hole has curvature radius 1, so r = 2 must be violated by a
        // pair across the disk.
        let report = check_prox_regularity(&set, 2.0, 10_000, 42);
        assert!(!report.pass);
        let w = report.witness.expect("violation witness");
        assert!(w.margin > 0.0);
        // Witness normal sits on the hole circle.
        let c = Vect::of2(0.0, 2.0);
        assert!((w.x.dist(&c) - 1.0).abs() < 1e-6, "witness x = {:?}", w.x);
    }

    #[test]
    fn lipschitz_estimates() {
        let ex1 = crate::scenarios::example1().set;
        let l = estimate_set_lipschitz(&ex1, 50).unwrap();
        assert!((l - 1.0).abs() < 1e-9, "estimate {l}");

        let fast = MovingSet::new(
            Shape::interval(Affine { c: -1.0, s: 2.0 }, Affine::constant(2.0)),
            f64::INFINITY,
            2.0,
            (0.0, 1.0),
        );
        let l = estimate_set_lipschitz(&fast, 50).unwrap();
        assert!((l - 2.0).abs() < 1e-9, "estimate {l}");

        let static_box = MovingSet::new(
            Shape::box_nd(vec![0.0], vec![1.0]),
            f64::INFINITY,
            0.0,
            (0.0, 1.0),
        );
        assert_eq!(estimate_set_lipschitz(&static_box, 10).unwrap(), 0.0);
    }
}
