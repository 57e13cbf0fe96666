//! Position states on the coset space SO(3)/G: canonical coset
//! representatives, adapted harmonics, Zak states, and numerical
//! verification of the generalized Fourier transform.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::group::{ContinuousGroup, FiniteGroup};
use crate::irreps::Irrep;
use crate::isotypic::{adapted_basis, multiplicity};
use crate::rotation::Rotation;
use crate::wigner::wigner_d;
use crate::Error;

/// A point of SO(3)/G with its canonical representative:
/// `r = s * g` with `s` the coset element closest to the identity.
#[derive(Debug, Clone)]
pub struct CosetPoint {
    /// Canonical representative of the coset `rG`.
    pub s: Rotation,
    /// The originating rotation.
    pub r: Rotation,
    /// Group-element index with `r = s * elements[g]`.
    pub g: usize,
}

/// Canonical coset representative: among `{r * h^-1 : h in G}` pick the
/// rotation of minimal angle, breaking ties lexicographically on the
/// canonical quaternion.
pub fn canonicalize(group: &FiniteGroup, r: &Rotation) -> CosetPoint {
    let mut best: Option<(usize, Rotation, f64, [f64; 4])> = None;
    for (gi, h) in group.elements.iter().enumerate() {
        let cand = r.compose(&h.inverse());
        let ang = cand.angle();
        let quat = cand.canonical_quat();
        let better = match &best {
            None => true,
            Some((_, _, bang, bquat)) => {
                if (ang - bang).abs() > 1e-9 {
                    ang < *bang
                } else {
                    // Lexicographic quaternion tie-break.
                    quat.iter()
                        .zip(bquat.iter())
                        .find(|(a, b)| (*a - *b).abs() > 1e-9)
                        .map(|(a, b)| a < b)
                        .unwrap_or(false)
                }
            }
        };
        if better {
            best = Some((gi, cand, ang, quat));
        }
    }
    let (g, s, _, _) = best.expect("group is nonempty");
    CosetPoint { s, r: r.clone(), g }
}

/// Normalization prefactor of the adapted harmonic:
/// `sqrt(((2l+1)/d) / (8 pi^2 / |G|))`.
fn harmonic_prefactor(group_order: usize, d: usize, ell: usize) -> f64 {
    (((2 * ell + 1) as f64 / d as f64) / (8.0 * PI * PI / group_order as f64)).sqrt()
}

/// The `(2l+1) x (d * mult)` matrix of harmonics `H^l_{m,(mu kappa)}(s)`
/// (columns ordered `mu * mult + kappa`). Errors when `l` is not in the
/// momentum ladder of the irrep.
pub fn harmonic_block(
    group: &FiniteGroup,
    irrep: &Irrep,
    ell: usize,
    s: &Rotation,
) -> Result<DMatrix<Complex64>, Error> {
    let mult = multiplicity(group, irrep, ell)?;
    if mult == 0 {
        return Err(Error::Domain(format!(
            "l = {ell} does not occur in the momentum ladder of {}",
            irrep.label
        )));
    }
    // The position-state fiber uses the conjugated adapted basis: from
    // D^{l*}(g) V = V (Gamma (x) I) one gets D^l(g) conj(V) =
    // conj(V) (conj(Gamma) (x) I), which is what makes lab rotations act on
    // the fiber index through Gamma(g^-1) (the monodromy identity).
    let v = adapted_basis(group, irrep, ell)?.map(|z| z.conj());
    let d = wigner_d(ell, s)?.matrix;
    Ok((d * v) * Complex64::new(harmonic_prefactor(group.order(), irrep.dim, ell), 0.0))
}

/// A single adapted harmonic `H^l_{m kappa}(s, mu)`.
pub fn harmonic(
    group: &FiniteGroup,
    irrep: &Irrep,
    ell: usize,
    m: i64,
    kappa: usize,
    s: &Rotation,
    mu: usize,
) -> Result<Complex64, Error> {
    let mult = multiplicity(group, irrep, ell)?;
    if kappa >= mult || mu >= irrep.dim || m.unsigned_abs() as usize > ell {
        return Err(Error::Domain(format!(
            "harmonic index out of range: l = {ell}, m = {m}, kappa = {kappa}, mu = {mu}"
        )));
    }
    let block = harmonic_block(group, irrep, ell, s)?;
    Ok(block[((m + ell as i64) as usize, mu * mult + kappa)])
}

/// Harmonics on the 2-sphere charts of the continuous coset spaces:
/// C_inf trivial species reduce to conjugated spherical harmonics at
/// `(alpha, beta)`; D_inf trivial species keep even `l` only, with a
/// `sqrt 2` normalization for the identified antipodes.
pub fn sphere_harmonic(
    cg: ContinuousGroup,
    ell: usize,
    m: i64,
    alpha: f64,
    beta: f64,
) -> Result<Complex64, Error> {
    if m.unsigned_abs() as usize > ell {
        return Err(Error::Domain(format!("|m| = {} exceeds l = {ell}", m.unsigned_abs())));
    }
    let scale = match cg {
        ContinuousGroup::Cinf => 1.0,
        ContinuousGroup::Dinf => {
            if ell % 2 == 1 {
                return Err(Error::Domain(format!(
                    "odd l = {ell} is absent from the D_inf trivial species"
                )));
            }
            2.0f64.sqrt()
        }
    };
    let r = Rotation::from_euler(alpha, beta, 0.0);
    let d = wigner_d(ell, &r)?.matrix;
    let norm = ((2 * ell + 1) as f64 / (4.0 * PI)).sqrt();
    Ok(d[((m + ell as i64) as usize, ell)] * norm * scale)
}

/// Truncated, optionally damped position state `|s, mu>` for one species:
/// coefficients `H^l_{m kappa}(s, mu) e^{-Delta l(l+1)/2}` stored per `l`.
#[derive(Debug, Clone)]
pub struct PositionStateVector {
    pub group_name: String,
    pub irrep_label: String,
    pub s: Rotation,
    pub mu: usize,
    pub ell_max: usize,
    pub delta: f64,
    /// Per-`l` blocks of shape `(2l+1) x mult(l)`; empty matrix when the
    /// species skips `l`.
    pub blocks: Vec<DMatrix<Complex64>>,
}

impl PositionStateVector {
    pub fn norm_sq(&self) -> f64 {
        self.blocks.iter().map(|b| b.iter().map(|z| z.norm_sqr()).sum::<f64>()).sum()
    }
}

/// Build the truncated position state. `delta = 0` is allowed only because
/// `ell_max` is explicit; negative damping is rejected.
pub fn position_state(
    group: &FiniteGroup,
    irrep: &Irrep,
    s: &Rotation,
    mu: usize,
    ell_max: usize,
    delta: f64,
) -> Result<PositionStateVector, Error> {
    if !(delta >= 0.0) {
        return Err(Error::Domain(format!("damping must be nonnegative, got {delta}")));
    }
    if mu >= irrep.dim {
        return Err(Error::Domain(format!("fiber index {mu} out of range for {}", irrep.label)));
    }
    let mut blocks = Vec::with_capacity(ell_max + 1);
    for ell in 0..=ell_max {
        let mult = multiplicity(group, irrep, ell)?;
        if mult == 0 {
            blocks.push(DMatrix::zeros(0, 0));
            continue;
        }
        let h = harmonic_block(group, irrep, ell, s)?;
        let damp = (-delta * (ell * (ell + 1)) as f64 / 2.0).exp();
        let cols: Vec<usize> = (0..mult).map(|k| mu * mult + k).collect();
        let block = h.select_columns(cols.iter()) * Complex64::new(damp, 0.0);
        blocks.push(block);
    }
    Ok(PositionStateVector {
        group_name: group.name.to_string(),
        irrep_label: irrep.label.clone(),
        s: s.clone(),
        mu,
        ell_max,
        delta,
        blocks,
    })
}

/// Inner product `<state1|state2>` of two truncated position states of the
/// same species and truncation.
pub fn gram_overlap(
    a: &PositionStateVector,
    b: &PositionStateVector,
) -> Result<Complex64, Error> {
    if a.group_name != b.group_name
        || a.irrep_label != b.irrep_label
        || a.ell_max != b.ell_max
        || a.delta != b.delta
    {
        return Err(Error::Domain("gram_overlap requires matching species and truncation".into()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (ba, bb) in a.blocks.iter().zip(&b.blocks) {
        acc += ba.iter().zip(bb.iter()).map(|(x, y)| x.conj() * y).sum::<Complex64>();
    }
    Ok(acc)
}

/// Zak state coefficients over the full `(m, omega)` grid, one
/// `(2l+1) x (2l+1)` block per `l <= ell_max`:
/// `sqrt(d/|G|) sum_g Gamma^{mu nu}(g) x` (asymmetric position
/// coefficients at `s g`). The coset-sum definition is cross-checked
/// against the direct momentum-basis expansion within 1e-9.
pub fn zak_state(
    group: &FiniteGroup,
    irrep: &Irrep,
    s: &Rotation,
    mu: usize,
    nu: usize,
    ell_max: usize,
) -> Result<Vec<DMatrix<Complex64>>, Error> {
    if mu >= irrep.dim || nu >= irrep.dim {
        return Err(Error::Domain(format!(
            "Zak fiber indices ({mu}, {nu}) out of range for {}",
            irrep.label
        )));
    }
    let dfac = (irrep.dim as f64 / group.order() as f64).sqrt();
    let mut out = Vec::with_capacity(ell_max + 1);
    for ell in 0..=ell_max {
        let n = 2 * ell + 1;
        let asym_norm = ((2 * ell + 1) as f64 / (8.0 * PI * PI)).sqrt();
        // Coset-sum route.
        let mut sum: DMatrix<Complex64> = DMatrix::zeros(n, n);
        for (gi, h) in group.elements.iter().enumerate() {
            let coeff = irrep.entry(gi, mu, nu).to_c64();
            if coeff.norm() < 1e-15 {
                continue;
            }
            sum += wigner_d(ell, &s.compose(h))?.matrix * coeff;
        }
        let direct = sum * Complex64::new(dfac * asym_norm, 0.0);
        // Momentum-expansion route: D^l(s) conj(V_mu) V_nu^T scaled by
        // sqrt(|G|/d) per copy.
        let mult = multiplicity(group, irrep, ell)?;
        let expansion = if mult == 0 {
            DMatrix::zeros(n, n)
        } else {
            let v = adapted_basis(group, irrep, ell)?;
            let mut k: DMatrix<Complex64> = DMatrix::zeros(n, n);
            for kappa in 0..mult {
                let va: DVector<Complex64> =
                    v.column(mu * mult + kappa).map(|z| z.conj()).into_owned();
                let vb = v.column(nu * mult + kappa);
                for r in 0..n {
                    for c in 0..n {
                        k[(r, c)] += va[r] * vb[c];
                    }
                }
            }
            let ds = wigner_d(ell, s)?.matrix;
            (ds * k)
                * Complex64::new(
                    (group.order() as f64 / irrep.dim as f64).sqrt() * asym_norm,
                    0.0,
                )
        };
        let err = (&direct - &expansion).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if err > 1e-9 {
            return Err(Error::Internal(format!(
                "Zak routes disagree for {} at l = {ell}: {err:.3e}",
                irrep.label
            )));
        }
        out.push(direct);
    }
    Ok(out)
}

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on the
/// recurrence-evaluated Legendre polynomial).
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        // Standard initial guess, then Newton.
        let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0f64, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// SO(3) product quadrature: uniform alpha and gamma (`n_ab = 2 l_max + 1`
/// points each), Gauss-Legendre in cos beta. Exact for Wigner bandlimit
/// `2 l_max` when `n_beta >= l_max + 1`.
fn so3_quadrature(ell_max: usize, n_beta: usize) -> Vec<(Rotation, f64)> {
    let n_ab = 2 * ell_max + 1;
    let gl = gauss_legendre(n_beta);
    let wa = 2.0 * PI / n_ab as f64;
    let mut nodes = Vec::with_capacity(n_ab * n_ab * n_beta);
    for ia in 0..n_ab {
        let alpha = 2.0 * PI * ia as f64 / n_ab as f64;
        for &(x, wb) in &gl {
            let beta = x.acos();
            for ig in 0..n_ab {
                let gamma = 2.0 * PI * ig as f64 / n_ab as f64;
                nodes.push((Rotation::from_euler(alpha, beta, gamma), wa * wb * wa));
            }
        }
    }
    nodes
}

/// Gram matrix of the harmonics over SO(3)/G (computed as the full-SO(3)
/// integral divided by `|G|`): returns `max |Gram - I|`. Errors when the
/// beta quadrature is underspecified for the bandlimit.
pub fn fourier_roundtrip(
    group: &FiniteGroup,
    irrep: &Irrep,
    ell_max: usize,
    n_beta: usize,
) -> Result<f64, Error> {
    if n_beta < ell_max + 1 {
        return Err(Error::Domain(format!(
            "beta quadrature order {n_beta} is underspecified for bandlimit 2 x {ell_max}"
        )));
    }
    // Index layout: for each l in the ladder, (m, kappa) pairs.
    let mut lads: Vec<(usize, usize)> = Vec::new(); // (l, mult)
    let mut total = 0usize;
    for ell in 0..=ell_max {
        let mult = multiplicity(group, irrep, ell)?;
        if mult > 0 {
            lads.push((ell, mult));
            total += (2 * ell + 1) * mult;
        }
    }
    let bases: Vec<DMatrix<Complex64>> = lads
        .iter()
        .map(|&(ell, _)| adapted_basis(group, irrep, ell).map(|v| v.map(|z| z.conj())))
        .collect::<Result<_, _>>()?;
    let d = irrep.dim;
    let mut gram: DMatrix<Complex64> = DMatrix::zeros(total, total);
    for (node, w) in so3_quadrature(ell_max, n_beta) {
        // F[mu, (l m kappa)] = H^l_{m kappa}(node, mu).
        let mut f: DMatrix<Complex64> = DMatrix::zeros(d, total);
        let mut col = 0usize;
        for (idx, &(ell, mult)) in lads.iter().enumerate() {
            let h = (wigner_d(ell, &node)?.matrix * &bases[idx])
                * Complex64::new(harmonic_prefactor(group.order(), d, ell), 0.0);
            for m in 0..2 * ell + 1 {
                for kappa in 0..mult {
                    for mu in 0..d {
                        f[(mu, col + m * mult + kappa)] = h[(m, mu * mult + kappa)];
                    }
                }
            }
            col += (2 * ell + 1) * mult;
        }
        gram += f.adjoint() * f * Complex64::new(w / group.order() as f64, 0.0);
    }
    let mut resid = 0.0f64;
    for r in 0..total {
        for c in 0..total {
            let want = if r == c { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            resid = resid.max((gram[(r, c)] - want).norm());
        }
    }
    Ok(resid)
}
