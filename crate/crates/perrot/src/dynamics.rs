//! The 2D toy model and a stroboscopic rigid-rotor interferometer:
//! revival evolution, impulsive alignment kicks, and species-dependent
//! fringe phases.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::rotation::Rotation;
use crate::wigner::wigner_d;
use crate::Error;

/// Parity species of the planar (2D) two-nucleus model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanarParity {
    /// Even angular momentum (para, the unique antisymmetric spin state).
    Para,
    /// Odd angular momentum (ortho).
    Ortho,
}

/// A planar-rotor state: coefficients over integer angular momentum with a
/// parity tag the support must respect.
#[derive(Debug, Clone)]
pub struct PlanarState {
    pub parity: PlanarParity,
    pub coeffs: BTreeMap<i64, Complex64>,
}

impl PlanarState {
    pub fn new(parity: PlanarParity, coeffs: BTreeMap<i64, Complex64>) -> Result<Self, Error> {
        let want = match parity {
            PlanarParity::Para => 0,
            PlanarParity::Ortho => 1,
        };
        if coeffs.keys().any(|l| l.rem_euclid(2) != want) {
            return Err(Error::Domain("planar support violates the parity tag".into()));
        }
        let norm: f64 = coeffs.values().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("planar state not normalized: {norm}")));
        }
        Ok(PlanarState { parity, coeffs })
    }
}

/// Rotate the planar state by `phi`: `c_l -> e^{i phi l} c_l`. At
/// `phi = pi` the whole species acquires the global phase `+-1`, which is
/// returned; mixed-parity input would have no global phase and is excluded
/// by construction of [`PlanarState`].
pub fn planar_rotate(state: &PlanarState, phi: f64) -> (PlanarState, Option<f64>) {
    let coeffs: BTreeMap<i64, Complex64> = state
        .coeffs
        .iter()
        .map(|(&l, &c)| (l, c * Complex64::from_polar(1.0, phi * l as f64)))
        .collect();
    let phase = if (phi - PI).abs() < 1e-12 {
        Some(match state.parity {
            PlanarParity::Para => 1.0,
            PlanarParity::Ortho => -1.0,
        })
    } else {
        None
    };
    (PlanarState { parity: state.parity, coeffs }, phase)
}

/// A truncated 3D rotor state: coefficients over `(l <= l_max, |m| <= l)`
/// stored per `l` as vectors of length `2l+1`, with rotational constant `B`.
#[derive(Debug, Clone)]
pub struct RotorState {
    /// Rotational constant, in angular-frequency units.
    pub b: f64,
    pub ell_max: usize,
    /// `blocks[l]` has length `2l+1`, index `m + l`.
    pub blocks: Vec<DVector<Complex64>>,
}

impl RotorState {
    /// The pure `|l, m>` state.
    pub fn basis(b: f64, ell_max: usize, ell: usize, m: i64) -> Result<Self, Error> {
        if ell > ell_max || m.unsigned_abs() as usize > ell {
            return Err(Error::Domain(format!("(l, m) = ({ell}, {m}) out of range")));
        }
        let mut blocks: Vec<DVector<Complex64>> =
            (0..=ell_max).map(|l| DVector::zeros(2 * l + 1)).collect();
        blocks[ell][(m + ell as i64) as usize] = Complex64::new(1.0, 0.0);
        Ok(RotorState { b, ell_max, blocks })
    }

    pub fn norm_sq(&self) -> f64 {
        self.blocks.iter().map(|b| b.iter().map(|z| z.norm_sqr()).sum::<f64>()).sum()
    }

    /// Revival period `2 pi / B`.
    pub fn t_rev(&self) -> f64 {
        2.0 * PI / self.b
    }
}

/// Free evolution for time `t`: per-`l` phases `e^{-i B l(l+1) t}`. At
/// `t = T_rev` every phase is `e^{-i 2 pi l(l+1)} = 1` since `l(l+1)` is
/// even... times pi: the state revives exactly.
pub fn rotor_evolve(state: &RotorState, t: f64) -> Result<RotorState, Error> {
    if t < 0.0 {
        return Err(Error::Domain("evolution time must be nonnegative".into()));
    }
    let blocks = state
        .blocks
        .iter()
        .enumerate()
        .map(|(l, v)| v * Complex64::from_polar(1.0, -state.b * (l * (l + 1)) as f64 * t))
        .collect();
    Ok(RotorState { b: state.b, ell_max: state.ell_max, blocks })
}

/// Matrix elements of `cos theta` in the `(l, m)` basis (tridiagonal in
/// `l`): `<l+1, m| cos theta |l, m> = sqrt(((l+1)^2 - m^2) /
/// ((2l+1)(2l+3)))`.
pub fn cos_theta_element(ell: usize, m: i64) -> f64 {
    let lp = (ell + 1) as f64;
    ((lp * lp - (m * m) as f64) / ((2 * ell + 1) as f64 * (2 * ell + 3) as f64)).sqrt()
}

/// Dense matrix of `cos^2 theta` (z-axis) on the truncated `(l, m)` space,
/// in the block layout of [`RotorState`].
fn cos2_matrix(ell_max: usize) -> DMatrix<f64> {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<usize, DMatrix<f64>>>> = OnceLock::new();
    if let Some(m) = CACHE.get_or_init(|| Mutex::new(HashMap::new()))
        .lock()
        .expect("cos2 cache")
        .get(&ell_max)
    {
        return m.clone();
    }
    // Build cos theta on the space extended by one l: cos^2 reaches the
    // truncated levels through the intermediate l_max + 1 row, so the
    // extension keeps the top block of the square exact.
    let offsets: Vec<usize> = (0..=ell_max + 1).map(|l| l * l).collect();
    let dim = offsets[ell_max + 1];
    let top = ell_max + 1;
    let ext_offsets: Vec<usize> = (0..=top + 1).map(|l| l * l).collect();
    let ext_dim = ext_offsets[top + 1];
    let mut cos = DMatrix::<f64>::zeros(ext_dim, ext_dim);
    for l in 0..top {
        for m in -(l as i64)..=l as i64 {
            let e = cos_theta_element(l, m);
            let row = ext_offsets[l + 1] + (m + (l + 1) as i64) as usize;
            let col = ext_offsets[l] + (m + l as i64) as usize;
            cos[(row, col)] = e;
            cos[(col, row)] = e;
        }
    }
    let cos2 = &cos * &cos;
    let out = cos2.view((0, 0), (dim, dim)).into_owned();
    CACHE
        .get()
        .expect("initialized above")
        .lock()
        .expect("cos2 cache")
        .insert(ell_max, out.clone());
    out
}

/// Result of an impulsive kick: the new state plus the norm fraction that
/// would have leaked past the truncation.
#[derive(Debug, Clone)]
pub struct KickOutcome {
    pub state: RotorState,
    /// Norm-squared fraction in the top two `l` blocks after the kick — the
    /// population at risk of truncation error on subsequent kicks.
    pub edge_population: f64,
}

/// Impulsive kick `exp(i eta cos^2 theta_axis)`: the phase mask is applied
/// exactly on the truncated space via the Hermitian eigendecomposition of
/// the `cos^2` matrix; tilted axes are handled by Wigner-D conjugation.
/// Errors when the truncation edge holds more than `leak_tol` of the norm
/// after the kick.
pub fn impulsive_kick(
    state: &RotorState,
    axis: [f64; 3],
    eta: f64,
    leak_tol: f64,
) -> Result<KickOutcome, Error> {
    if !eta.is_finite() {
        return Err(Error::Domain("kick strength must be finite".into()));
    }
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if norm < 1e-12 {
        return Err(Error::Domain("kick axis must be nonzero".into()));
    }
    let n = [axis[0] / norm, axis[1] / norm, axis[2] / norm];
    // Rotation bringing z to the axis; conjugate the state into the frame
    // where the kick is about z, mask, rotate back.
    let rot = if (n[2] - 1.0).abs() < 1e-12 {
        Rotation::identity()
    } else if (n[2] + 1.0).abs() < 1e-12 {
        Rotation::from_axis_angle([0.0, 1.0, 0.0], PI)
    } else {
        let beta = n[2].acos();
        let alpha = n[1].atan2(n[0]);
        Rotation::from_euler(alpha, beta, 0.0)
    };
    let rot_inv = rot.inverse();
    let ell_max = state.ell_max;
    // Into the kick frame.
    let mut frame: Vec<DVector<Complex64>> = Vec::with_capacity(ell_max + 1);
    for (l, v) in state.blocks.iter().enumerate() {
        frame.push(wigner_d(l, &rot_inv)?.matrix * v);
    }
    // Flatten, apply exp(i eta cos^2) via eigendecomposition, unflatten.
    let offsets: Vec<usize> = (0..=ell_max + 1).map(|l| l * l).collect();
    let dim = offsets[ell_max + 1];
    let mut flat: DVector<Complex64> = DVector::zeros(dim);
    for (l, v) in frame.iter().enumerate() {
        for (i, z) in v.iter().enumerate() {
            flat[offsets[l] + i] = *z;
        }
    }
    let cos2 = cos2_matrix(ell_max).map(|x| Complex64::new(x, 0.0));
    let eig = nalgebra::linalg::SymmetricEigen::new(cos2);
    let phases = DVector::from_fn(dim, |k, _| {
        Complex64::from_polar(1.0, eta * eig.eigenvalues[k])
    });
    let kicked = &eig.eigenvectors
        * DMatrix::from_diagonal(&phases)
        * eig.eigenvectors.adjoint()
        * flat;
    let mut out: Vec<DVector<Complex64>> = Vec::with_capacity(ell_max + 1);
    for l in 0..=ell_max {
        let v = DVector::from_fn(2 * l + 1, |i, _| kicked[offsets[l] + i]);
        out.push(wigner_d(l, &rot)?.matrix * v);
    }
    // Edge population: top two l blocks.
    let total: f64 = out.iter().map(|v| v.iter().map(|z| z.norm_sqr()).sum::<f64>()).sum();
    let edge: f64 = out
        .iter()
        .enumerate()
        .filter(|(l, _)| *l + 1 >= ell_max)
        .map(|(_, v)| v.iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sum();
    let edge_population = edge / total;
    if edge_population > leak_tol {
        return Err(Error::Domain(format!(
            "truncation edge holds {edge_population:.3e} of the norm (l_max too small for eta = {eta})"
        )));
    }
    Ok(KickOutcome {
        state: RotorState { b: state.b, ell_max, blocks: out },
        edge_population,
    })
}

/// Expectation `<cos^2 theta_axis>` of a rotor state.
pub fn alignment(state: &RotorState, axis: [f64; 3]) -> Result<f64, Error> {
    // Rotate the state so the requested axis becomes z, then evaluate the
    // block-tridiagonal z-form.
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let n = [axis[0] / norm, axis[1] / norm, axis[2] / norm];
    let rot = if (n[2] - 1.0).abs() < 1e-12 {
        Rotation::identity()
    } else if (n[2] + 1.0).abs() < 1e-12 {
        Rotation::from_axis_angle([0.0, 1.0, 0.0], PI)
    } else {
        Rotation::from_euler(n[1].atan2(n[0]), n[2].acos(), 0.0)
    };
    let rot_inv = rot.inverse();
    let ell_max = state.ell_max;
    let offsets: Vec<usize> = (0..=ell_max + 1).map(|l| l * l).collect();
    let dim = offsets[ell_max + 1];
    let mut flat: DVector<Complex64> = DVector::zeros(dim);
    for (l, v) in state.blocks.iter().enumerate() {
        let w = wigner_d(l, &rot_inv)?.matrix * v;
        for (i, z) in w.iter().enumerate() {
            flat[offsets[l] + i] = *z;
        }
    }
    let cos2 = cos2_matrix(ell_max).map(|x| Complex64::new(x, 0.0));
    let num = (flat.adjoint() * cos2 * &flat)[(0, 0)].re;
    Ok(num / state.norm_sq())
}

/// One pulse of a stroboscopic schedule.
#[derive(Debug, Clone)]
pub struct Pulse {
    /// Time of the kick, in revival periods.
    pub revivals: f64,
    pub axis: [f64; 3],
}

/// Stroboscopic reorientation: alternate free evolution and impulsive
/// kicks, sampling `<cos^2 theta_target>` along the evolution windows (the
/// kick itself leaves the alignment unchanged because the phase mask
/// commutes with `cos^2 theta`; the alignment develops afterwards). The
/// trace covers the initial state, `samples` points inside each
/// inter-pulse window, and one revival period after the final kick.
/// Returns `(times, alignments)` pairs and a flag set when any pulse is
/// off a revival multiple.
pub fn stroboscopic_reorient(
    initial: &RotorState,
    pulses: &[Pulse],
    eta: f64,
    target_axis: [f64; 3],
    leak_tol: f64,
    samples: usize,
) -> Result<(Vec<(f64, f64)>, bool), Error> {
    if samples == 0 {
        return Err(Error::Domain("need at least one sample per window".into()));
    }
    let mut off_revival = false;
    let mut state = initial.clone();
    let t_rev = state.t_rev();
    let mut trace = vec![(0.0, alignment(&state, target_axis)?)];
    let mut now = 0.0f64;
    for (pi, p) in pulses.iter().enumerate() {
        let t = p.revivals * t_rev;
        if (p.revivals - p.revivals.round()).abs() > 1e-9 {
            off_revival = true;
        }
        if t < now {
            return Err(Error::Domain("pulse schedule must be time-ordered".into()));
        }
        state = rotor_evolve(&state, t - now)?;
        now = t;
        state = impulsive_kick(&state, p.axis, eta, leak_tol)?.state;
        // Sample the window up to the next pulse (or one revival after the
        // last one).
        let window_end = pulses.get(pi + 1).map(|q| q.revivals * t_rev).unwrap_or(now + t_rev);
        for k in 1..=samples {
            let tk = now + (window_end - now) * k as f64 / (samples + 1) as f64;
            let probe = rotor_evolve(&state, tk - now)?;
            trace.push((tk, alignment(&probe, target_axis)?));
        }
    }
    Ok((trace, off_revival))
}

/// Interferometer fringe factor: `<ref| D(g) |ref> / <ref|ref>`, with the
/// phase carried by the complex value. For a single-`l`, `m = 0` reference
/// and an equatorial pi-rotation the factor is exactly `(-1)^l`. Errors on
/// vanishing overlap (the fringe phase is then undefined).
pub fn interferometer_phase(state: &RotorState, g: &Rotation) -> Result<Complex64, Error> {
    let mut ov = Complex64::new(0.0, 0.0);
    for (l, v) in state.blocks.iter().enumerate() {
        let rotated = wigner_d(l, g)?.matrix * v;
        ov += v.iter().zip(rotated.iter()).map(|(a, b)| a.conj() * b).sum::<Complex64>();
    }
    let factor = ov / Complex64::new(state.norm_sq(), 0.0);
    if factor.norm() < 1e-12 {
        return Err(Error::Domain("zero overlap: fringe phase undefined".into()));
    }
    Ok(factor)
}
