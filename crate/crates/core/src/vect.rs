//! Small fixed-capacity vectors for points, velocities and covectors.
//!
//! State spaces here have dimension n ≤ 3 and augmented covectors have
//! dimension 1+n+1 ≤ 5, so a stack-allocated vector with capacity 5 covers
//! every value the crate manipulates without heap traffic in hot loops.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

pub const MAX_DIM: usize = 5;

/// Stack-allocated vector of dimension ≤ 5.
#[derive(Clone, Copy, PartialEq)]
pub struct Vect {
    len: u8,
    data: [f64; MAX_DIM],
}

impl Vect {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim <= MAX_DIM);
        Vect {
            len: dim as u8,
            data: [0.0; MAX_DIM],
        }
    }

    pub fn from_slice(s: &[f64]) -> Self {
        assert!(s.len() <= MAX_DIM, "vector dimension > {MAX_DIM}");
        let mut data = [0.0; MAX_DIM];
        data[..s.len()].copy_from_slice(s);
        Vect {
            len: s.len() as u8,
            data,
        }
    }

    pub fn scalar(x: f64) -> Self {
        Vect::from_slice(&[x])
    }

    pub fn of2(x: f64, y: f64) -> Self {
        Vect::from_slice(&[x, y])
    }

    pub fn dim(&self) -> usize {
        self.len as usize
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data[..self.len as usize]
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.as_slice().to_vec()
    }

    pub fn dot(&self, other: &Vect) -> f64 {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0.0;
        for i in 0..self.dim() {
            acc += self.data[i] * other.data[i];
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(&self) -> Vect {
        let n = self.norm();
        if n == 0.0 {
            *self
        } else {
            *self * (1.0 / n)
        }
    }

    pub fn dist(&self, other: &Vect) -> f64 {
        (*self - *other).norm()
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|v| v.is_finite())
    }

    /// Builds the augmented covector (head, spatial..., last).
    pub fn augmented(head: f64, spatial: &Vect, last: f64) -> Vect {
        let mut data = [0.0; MAX_DIM];
        data[0] = head;
        data[1..1 + spatial.dim()].copy_from_slice(spatial.as_slice());
        data[1 + spatial.dim()] = last;
        Vect {
            len: (spatial.dim() + 2) as u8,
            data,
        }
    }

    /// Splits an augmented covector into (head, spatial part, last).
    pub fn split_augmented(&self) -> (f64, Vect, f64) {
        let n = self.dim() - 2;
        (
            self.data[0],
            Vect::from_slice(&self.data[1..1 + n]),
            self.data[1 + n],
        )
    }
}

impl fmt::Debug for Vect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_slice())
    }
}

impl Index<usize> for Vect {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.as_slice()[i]
    }
}

impl IndexMut<usize> for Vect {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.data[..self.len as usize][i]
    }
}

impl Add for Vect {
    type Output = Vect;
    fn add(self, rhs: Vect) -> Vect {
        debug_assert_eq!(self.len, rhs.len);
        let mut out = self;
        for i in 0..self.dim() {
            out.data[i] += rhs.data[i];
        }
        out
    }
}

impl Sub for Vect {
    type Output = Vect;
    fn sub(self, rhs: Vect) -> Vect {
        debug_assert_eq!(self.len, rhs.len);
        let mut out = self;
        for i in 0..self.dim() {
            out.data[i] -= rhs.data[i];
        }
        out
    }
}

impl Mul<f64> for Vect {
    type Output = Vect;
    fn mul(self, s: f64) -> Vect {
        let mut out = self;
        for i in 0..self.dim() {
            out.data[i] *= s;
        }
        out
    }
}

impl Neg for Vect {
    type Output = Vect;
    fn neg(self) -> Vect {
        self * -1.0
    }
}

/// Projects `p` onto the closed convex cone generated by `gens`.
///
/// Active-set enumeration over generator subsets; exact for the small
/// generator lists produced by the shape oracles (≤ 4 generators, dim ≤ 3).
pub fn project_onto_cone(p: &Vect, gens: &[Vect]) -> Vect {
    let k = gens.len();
    if k == 0 {
        return Vect::zeros(p.dim());
    }
    assert!(k <= 8, "cone generator list too large");
    let mut best = Vect::zeros(p.dim());
    let mut best_d2 = p.dot(p);
    for mask in 1u32..(1 << k) {
        let idx: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        if idx.len() > p.dim() {
            continue;
        }
        // Solve the Gram system G λ = b with G_ij = g_i·g_j, b_i = g_i·p.
        let m = idx.len();
        let mut g = [[0.0f64; 4]; 4];
        let mut b = [0.0f64; 4];
        for (a, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                g[a][c] = gens[i].dot(&gens[j]);
            }
            b[a] = gens[i].dot(p);
        }
        let Some(lambda) = solve_small(&mut g, &mut b, m) else {
            continue;
        };
        if lambda[..m].iter().any(|&l| l < -1e-12) {
            continue;
        }
        let mut v = Vect::zeros(p.dim());
        for (a, &i) in idx.iter().enumerate() {
            v = v + gens[i] * lambda[a];
        }
        // KKT: the residual must not have a positive component along any generator.
        let r = *p - v;
        if gens.iter().any(|gi| r.dot(gi) > 1e-9 * (1.0 + p.norm())) {
            continue;
        }
        let d2 = r.dot(&r);
        if d2 < best_d2 {
            best_d2 = d2;
            best = v;
        }
    }
    best
}

/// Gaussian elimination with partial pivoting for m ≤ 4 systems.
fn solve_small(g: &mut [[f64; 4]; 4], b: &mut [f64; 4], m: usize) -> Option<[f64; 4]> {
    for col in 0..m {
        let mut piv = col;
        for row in col + 1..m {
            if g[row][col].abs() > g[piv][col].abs() {
                piv = row;
            }
        }
        if g[piv][col].abs() < 1e-14 {
            return None;
        }
        g.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..m {
            let f = g[row][col] / g[col][col];
            for c in col..m {
                g[row][c] -= f * g[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0f64; 4];
    for col in (0..m).rev() {
        let mut acc = b[col];
        for c in col + 1..m {
            acc -= g[col][c] * x[c];
        }
        x[col] = acc / g[col][col];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_projection_single_ray() {
        let n = Vect::of2(1.0, 0.0);
        let p = Vect::of2(2.0, 1.0);
        let proj = project_onto_cone(&p, &[n]);
        assert!((proj[0] - 2.0).abs() < 1e-12 && proj[1].abs() < 1e-12);
        let q = Vect::of2(-1.0, 3.0);
        let proj = project_onto_cone(&q, &[n]);
        assert!(proj.norm() < 1e-12);
    }

    #[test]
    fn cone_projection_quarter_plane() {
        let gens = [Vect::of2(1.0, 0.0), Vect::of2(0.0, 1.0)];
        // Interior of the cone: projection is the identity.
        let p = Vect::of2(0.5, 0.7);
        let proj = project_onto_cone(&p, &gens);
        assert!(proj.dist(&p) < 1e-12);
        // Outside: clamps to the nearest face.
        let q = Vect::of2(-1.0, 2.0);
        let proj = project_onto_cone(&q, &gens);
        assert!(proj.dist(&Vect::of2(0.0, 2.0)) < 1e-12);
    }

    #[test]
    fn augmented_roundtrip() {
        let x = Vect::of2(3.0, 4.0);
        let p = Vect::augmented(1.0, &x, -1.0);
        assert_eq!(p.dim(), 4);
        let (h, s, l) = p.split_augmented();
        assert_eq!(h, 1.0);
        assert_eq!(s.as_slice(), &[3.0, 4.0]);
        assert_eq!(l, -1.0);
    }
}
