//! Rotation parameterizations: unit quaternions, active z-y-z Euler triples,
//! and axis-angle pairs.
//!
//! All rotations are *proper* rotations in SO(3). The quaternion `q` and its
//! negative `-q` describe the same rotation; equality and hashing-by-key use
//! the sign-canonicalized component tuple.

use std::f64::consts::PI;

/// A proper rotation stored as a unit quaternion `(w, x, y, z)`.
///
/// The scalar part is `w`; the vector part `(x, y, z)` points along the
/// rotation axis with magnitude `sin(angle/2)`.
#[derive(Debug, Clone, Copy)]
pub struct Rotation {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Rotation {
    /// The identity rotation.
    pub fn identity() -> Self {
        Rotation { w: 1.0, x: 0.0, y: 0.0, z: 0.0 }
    }

    /// Rotation by `angle` (radians) about `axis` (need not be normalized).
    ///
    /// # Panics
    /// Panics if `axis` is (numerically) the zero vector.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Self {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        assert!(n > 1e-14, "rotation axis must be nonzero");
        let (s, c) = (angle / 2.0).sin_cos();
        Rotation {
            w: c,
            x: s * axis[0] / n,
            y: s * axis[1] / n,
            z: s * axis[2] / n,
        }
        .normalized()
    }

    /// Rotation from an active z-y-z Euler triple: `R = Rz(alpha) Ry(beta) Rz(gamma)`.
    pub fn from_euler(alpha: f64, beta: f64, gamma: f64) -> Self {
        let rz1 = Rotation::from_axis_angle([0.0, 0.0, 1.0], alpha);
        let ry = Rotation::from_axis_angle([0.0, 1.0, 0.0], beta);
        let rz2 = Rotation::from_axis_angle([0.0, 0.0, 1.0], gamma);
        rz1.compose(&ry).compose(&rz2)
    }

    /// Active z-y-z Euler angles `(alpha, beta, gamma)` with `beta` in `[0, pi]`.
    ///
    /// At the gimbal points `beta = 0` or `beta = pi` the split between
    /// `alpha` and `gamma` is not unique; `gamma = 0` is returned there.
    pub fn to_euler(&self) -> (f64, f64, f64) {
        let r = self.matrix();
        let r22 = r[2][2].clamp(-1.0, 1.0);
        let beta = r22.acos();
        if r22 > 1.0 - 1e-12 {
            // beta ~ 0: rotation is about z by alpha + gamma.
            (r[1][0].atan2(r[0][0]), 0.0, 0.0)
        } else if r22 < -1.0 + 1e-12 {
            // beta ~ pi: rotation determined by alpha - gamma, and
            // Rz(a) Ry(pi) has upper-left block -Rz(a).
            ((-r[1][0]).atan2(-r[0][0]), PI, 0.0)
        } else {
            let alpha = r[1][2].atan2(r[0][2]);
            let gamma = r[2][1].atan2(-r[2][0]);
            (alpha, beta, gamma)
        }
    }

    /// Composition `self * other` (apply `other` first, then `self`).
    pub fn compose(&self, other: &Rotation) -> Rotation {
        let (w1, x1, y1, z1) = (self.w, self.x, self.y, self.z);
        let (w2, x2, y2, z2) = (other.w, other.x, other.y, other.z);
        Rotation {
            w: w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            x: w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            y: w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            z: w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        }
        .normalized()
    }

    /// Inverse rotation (quaternion conjugate).
    pub fn inverse(&self) -> Rotation {
        Rotation { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    /// The 3x3 rotation matrix (row-major).
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let (w, x, y, z) = (self.w, self.x, self.y, self.z);
        [
            [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
            [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
            [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
        ]
    }

    /// Apply the rotation to a 3-vector.
    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let m = self.matrix();
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    /// Rotation angle in `[0, pi]`.
    pub fn angle(&self) -> f64 {
        2.0 * self.w.abs().clamp(0.0, 1.0).acos()
    }

    /// Unit rotation axis, or `None` for the identity (axis undefined).
    pub fn axis(&self) -> Option<[f64; 3]> {
        let s = (self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        if s < 1e-12 {
            return None;
        }
        // Fix the representative with nonnegative scalar part so that the
        // axis pairs with the angle in [0, pi].
        let sign = if self.w < 0.0 { -1.0 } else { 1.0 };
        Some([sign * self.x / s, sign * self.y / s, sign * self.z / s])
    }

    /// Quaternion components with the overall sign fixed so the first
    /// component exceeding `1e-12` in magnitude is positive.
    pub fn canonical_quat(&self) -> [f64; 4] {
        let q = [self.w, self.x, self.y, self.z];
        for c in q {
            if c.abs() > 1e-12 {
                return if c < 0.0 { [-q[0], -q[1], -q[2], -q[3]] } else { q };
            }
        }
        q
    }

    /// Whether `self` and `other` are the same rotation within `tol`
    /// (quaternion distance up to overall sign).
    pub fn approx_eq(&self, other: &Rotation, tol: f64) -> bool {
        let a = [self.w, self.x, self.y, self.z];
        let b = [other.w, other.x, other.y, other.z];
        let dplus: f64 = a.iter().zip(&b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        let dminus: f64 = a.iter().zip(&b).map(|(p, q)| (p + q).abs()).fold(0.0, f64::max);
        dplus.min(dminus) < tol
    }

    fn normalized(mut self) -> Self {
        let n = (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        self.w /= n;
        self.x /= n;
        self.y /= n;
        self.z /= n;
        self
    }
}
