//! Prox-regular set representations for the moving constraint C(t) and the
//! target S: distance, projection and proximal-normal-cone oracles, plus the
//! sampling-based regularity checks.

pub mod shape;

mod checks;

pub use checks::{check_prox_regularity, estimate_set_lipschitz, ProxRegularityReport, ProxWitness};
pub use shape::{Affine, SetOracle, Shape};

use crate::vect::Vect;

/// Default membership tolerance for set oracles.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// Default cone angle tolerance for generator comparisons.
pub const CONE_ANGLE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("time {t} outside the set's time domain [{lo}, {hi}]")]
    TimeOutOfDomain { t: f64, lo: f64, hi: f64 },
    #[error("point at distance {dist} exceeds the projection reach {reach}")]
    OutsideReach { dist: f64, reach: f64 },
    #[error("point at distance {dist} from the set exceeds tolerance {tol}")]
    NotInSet { dist: f64, tol: f64 },
    #[error("point lies in the interior of the target")]
    InsideTarget,
}

/// Time-indexed prox-regular constraint C(t).
#[derive(Clone, Debug)]
pub struct MovingSet {
    shape: Shape,
    /// Prox-regularity radius r; `f64::INFINITY` for convex sets.
    prox_radius: f64,
    /// Hausdorff-Lipschitz constant of t ↦ C(t).
    lipschitz: f64,
    /// Closed interval [t0, t_max] on which C(t) is nonempty.
    time_domain: (f64, f64),
}

impl MovingSet {
    pub fn new(shape: Shape, prox_radius: f64, lipschitz: f64, time_domain: (f64, f64)) -> Self {
        assert!(prox_radius > 0.0);
        assert!(lipschitz >= 0.0);
        assert!(time_domain.0 <= time_domain.1);
        MovingSet {
            shape,
            prox_radius,
            lipschitz,
            time_domain,
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn prox_radius(&self) -> f64 {
        self.prox_radius
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn time_domain(&self) -> (f64, f64) {
        self.time_domain
    }

    pub fn is_static(&self) -> bool {
        self.shape.is_static()
    }

    pub fn cones_exact(&self) -> bool {
        self.shape.cones_exact()
    }

    pub fn check_time(&self, t: f64) -> Result<(), GeometryError> {
        let (lo, hi) = self.time_domain;
        if t < lo || t > hi {
            return Err(GeometryError::TimeOutOfDomain { t, lo, hi });
        }
        Ok(())
    }

    /// Euclidean distance from `x` to C(t); exact for primitive shapes.
    pub fn distance(&self, t: f64, x: &Vect) -> Result<f64, GeometryError> {
        self.check_time(t)?;
        Ok(self.shape.distance(t, x))
    }

    /// The unique nearest point of C(t) for `x` within the uniqueness reach.
    pub fn project(&self, t: f64, x: &Vect) -> Result<Vect, GeometryError> {
        self.check_time(t)?;
        let d = self.shape.distance(t, x);
        if d >= self.prox_radius {
            return Err(GeometryError::OutsideReach {
                dist: d,
                reach: self.prox_radius,
            });
        }
        Ok(self.shape.project(t, x))
    }

    pub fn contains(&self, t: f64, x: &Vect, tol: f64) -> Result<bool, GeometryError> {
        Ok(self.distance(t, x)? <= tol)
    }

    /// Unit generators of the proximal normal cone N_{C(t)}(x).
    ///
    /// Empty list for interior points (the cone is {0}); the full finite
    /// generator list at non-smooth boundary points.
    pub fn normal_generators(
        &self,
        t: f64,
        x: &Vect,
        tol: f64,
    ) -> Result<Vec<Vect>, GeometryError> {
        let d = self.distance(t, x)?;
        if d > tol {
            return Err(GeometryError::NotInSet { dist: d, tol });
        }
        let probe = if d > 0.0 {
            self.shape.project(t, x)
        } else {
            *x
        };
        Ok(self.shape.normal_generators(t, &probe, tol.max(1e-12)))
    }

    /// Axis-aligned bounding box of ∪_t C(t) over the time domain.
    ///
    /// Exact for the primitive shapes (interval endpoints are affine in t, so
    /// extremes sit at the domain ends).
    pub fn bounding_box(&self) -> (Vect, Vect) {
        let (t0, t1) = self.time_domain;
        let (lo0, hi0) = self.shape.bounds(t0);
        let (lo1, hi1) = self.shape.bounds(t1);
        let mut lo = lo0;
        let mut hi = hi0;
        for i in 0..lo.dim() {
            lo[i] = lo[i].min(lo1[i]);
            hi[i] = hi[i].max(hi1[i]);
        }
        (lo, hi)
    }

    pub fn boundary_samples(&self, t: f64, n: usize) -> Result<Vec<Vect>, GeometryError> {
        self.check_time(t)?;
        Ok(self.shape.boundary_samples(t, n))
    }

    /// Draws a point of C(t) by rejection from the bounding box.
    pub fn sample_point<R: rand::Rng>(&self, t: f64, rng: &mut R) -> Result<Vect, GeometryError> {
        self.check_time(t)?;
        let (lo, hi) = self.shape.bounds(t);
        const WINDOW: f64 = 1e3;
        for _ in 0..10_000 {
            let mut x = Vect::zeros(self.dim());
            for i in 0..self.dim() {
                let (a, b) = (lo[i].max(-WINDOW), hi[i].min(WINDOW));
                x[i] = rng.gen_range(a..=b);
            }
            if self.shape.distance(t, &x) <= 0.0 {
                return Ok(x);
            }
        }
        // Fall back to a boundary point (degenerate sets).
        Ok(self.shape.boundary_samples(t, 4)[0])
    }
}

/// Time-independent target set S with an internal sphere condition radius.
#[derive(Clone, Debug)]
pub struct TargetSet {
    shape: Shape,
    /// Radius of the internal sphere condition; `f64::INFINITY` for flat
    /// boundaries (half-spaces, boxes).
    internal_sphere_radius: f64,
}

impl TargetSet {
    pub fn new(shape: Shape, internal_sphere_radius: f64) -> Self {
        assert!(shape.is_static(), "target sets are time-independent");
        assert!(internal_sphere_radius > 0.0);
        TargetSet {
            shape,
            internal_sphere_radius,
        }
    }

    /// Half-space {x_axis ≥ c} in dimension `dim`.
    pub fn half_space_above(dim: usize, axis: usize, c: f64) -> Self {
        let mut lo = vec![f64::NEG_INFINITY; dim];
        let hi = vec![f64::INFINITY; dim];
        lo[axis] = c;
        TargetSet::new(Shape::box_nd(lo, hi), f64::INFINITY)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn internal_sphere_radius(&self) -> f64 {
        self.internal_sphere_radius
    }

    pub fn distance(&self, x: &Vect) -> f64 {
        self.shape.distance(0.0, x)
    }

    pub fn project(&self, x: &Vect) -> Vect {
        self.shape.project(0.0, x)
    }

    pub fn contains(&self, x: &Vect, tol: f64) -> bool {
        self.distance(x) <= tol
    }

    /// Proximal superdifferential vectors of d_S at `x` (gradient where
    /// smooth, the outward unit normals on the boundary of S).
    pub fn superdifferential(&self, x: &Vect) -> Result<Vec<Vect>, GeometryError> {
        let d = self.distance(x);
        if d > 0.0 {
            let proj = self.shape.project(0.0, x);
            return Ok(vec![(*x - proj) * (1.0 / d)]);
        }
        let gens = self.shape.normal_generators(0.0, x, 1e-9);
        if gens.is_empty() {
            return Err(GeometryError::InsideTarget);
        }
        Ok(gens)
    }
}
