//! Berry-connection components of the adapted bands, regularized flatness
//! verification, monodromy matrices and groups, and the flat-connection
//! (binary-cover lift) check.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::group::{
    classify_fingerprint, fingerprint, quotient_table, subgroup_quotient, FiniteGroup,
    QuotientLabel,
};
use crate::irreps::{cyc_identity, Irrep};
use crate::isotypic::{adapted_basis, multiplicity};
use crate::rotation::Rotation;
use crate::wigner::{generators, wigner_d, L_CAP};
use crate::Error;

/// The `l`-dependent connection component `A^{a,l}_{mu nu}`, evaluated by
/// two independent expressions and cross-asserted.
#[derive(Debug, Clone)]
pub struct ConnectionComponent {
    pub ell: usize,
    /// Axis `a` in `{0: x, 1: y, 2: z}`.
    pub axis: usize,
    /// `(|G|/d) sum_kappa <mu kappa| L_a |nu kappa>` in the adapted basis.
    pub matrix: DMatrix<Complex64>,
    /// Max entrywise disagreement with the character-style projection
    /// `sum_g conj(Gamma^{nu mu}(g)) tr(D^{l*}(g) L_a)`.
    pub cross_error: f64,
}

/// Compute `A^{a,l}` for one irrep, `l`, and axis. Returns the zero matrix
/// when `l` is absent from the irrep's momentum ladder.
pub fn connection_component(
    group: &FiniteGroup,
    irrep: &Irrep,
    ell: usize,
    axis: usize,
) -> Result<ConnectionComponent, Error> {
    if axis > 2 {
        return Err(Error::Domain(format!("axis index {axis} out of range")));
    }
    let d = irrep.dim;
    let mult = multiplicity(group, irrep, ell)?;
    if mult == 0 {
        return Ok(ConnectionComponent {
            ell,
            axis,
            matrix: DMatrix::zeros(d, d),
            cross_error: 0.0,
        });
    }
    let v = adapted_basis(group, irrep, ell)?;
    let gens = generators(ell)?;
    let la = gens.axis(axis);
    let sandwich = v.adjoint() * la * &v; // rows/cols indexed (mu kappa)
    let scale = group.order() as f64 / d as f64;
    let mut a: DMatrix<Complex64> = DMatrix::zeros(d, d);
    for mu in 0..d {
        for nu in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for kappa in 0..mult {
                acc += sandwich[(mu * mult + kappa, nu * mult + kappa)];
            }
            a[(mu, nu)] = acc * scale;
        }
    }
    // Independent projection route.
    let mut b: DMatrix<Complex64> = DMatrix::zeros(d, d);
    for (gi, h) in group.elements.iter().enumerate() {
        let dm = wigner_d(ell, h)?.matrix.map(|z| z.conj());
        let tr = (dm * la).trace();
        for mu in 0..d {
            for nu in 0..d {
                b[(mu, nu)] += irrep.entry(gi, nu, mu).to_c64().conj() * tr;
            }
        }
    }
    let cross_error = (&a - &b).iter().map(|z| z.norm()).fold(0.0, f64::max);
    // Both routes sum |G| products of Wigner blocks against generators of
    // norm ~l, so roundoff grows with the group order, the momentum, and
    // the component magnitude; compare against that scale.
    let tol = 1e-10 * group.order() as f64 * (ell + 1) as f64 * (1.0 + a.norm());
    if cross_error > tol {
        return Err(Error::Internal(format!(
            "connection routes disagree for {} at l = {ell}, axis {axis}: {cross_error:.3e}",
            irrep.label
        )));
    }
    Ok(ConnectionComponent { ell, axis, matrix: a, cross_error })
}

/// One row of the regularized-connection scan: the ratio
/// `sum_l e^{-Delta l(l+1)} (2l+1) A^{a,l}_{mu nu}` over
/// `sum_l e^{-Delta l(l+1)} (2l+1) mult(l)` at a given damping.
#[derive(Debug, Clone)]
pub struct FlatnessRow {
    pub delta: f64,
    pub ell_max: usize,
    /// Max `|ratio|` over all axes and fiber pairs.
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct FlatnessReport {
    pub rows: Vec<FlatnessRow>,
    /// True when `|value|` strictly decreases across the grid and the final
    /// value is below the acceptance threshold.
    pub decaying: bool,
}

/// Smallest cutoff with damping tail below `tol`.
fn tail_cutoff(delta: f64, tol: f64) -> Result<usize, Error> {
    for ell in 1..=L_CAP {
        if (-delta * (ell * (ell + 1)) as f64).exp() < tol {
            return Ok(ell);
        }
    }
    Err(Error::Domain(format!(
        "damping {delta} needs l beyond the supported cap {L_CAP} for tail {tol}"
    )))
}

/// Scan the regularized connection over a descending damping grid; the
/// per-damping cutoff is chosen so the dropped tail factor is below 1e-12.
pub fn flatness_scan(
    group: &FiniteGroup,
    irrep: &Irrep,
    deltas: &[f64],
    threshold: f64,
) -> Result<FlatnessReport, Error> {
    if deltas.windows(2).any(|w| w[1] >= w[0]) || deltas.iter().any(|&d| d <= 0.0) {
        return Err(Error::Domain("damping grid must be positive and descending".into()));
    }
    let ell_caps: Vec<usize> =
        deltas.iter().map(|&d| tail_cutoff(d, 1e-12)).collect::<Result<_, _>>()?;
    let ell_top = *ell_caps.iter().max().unwrap();
    // Components are shared across the grid; compute once per (l, axis).
    let d = irrep.dim;
    let mut comps: Vec<[DMatrix<Complex64>; 3]> = Vec::with_capacity(ell_top + 1);
    let mut mults = Vec::with_capacity(ell_top + 1);
    for ell in 0..=ell_top {
        mults.push(multiplicity(group, irrep, ell)?);
        comps.push([
            connection_component(group, irrep, ell, 0)?.matrix,
            connection_component(group, irrep, ell, 1)?.matrix,
            connection_component(group, irrep, ell, 2)?.matrix,
        ]);
    }
    let mut rows = Vec::with_capacity(deltas.len());
    for (i, &delta) in deltas.iter().enumerate() {
        let cap = ell_caps[i];
        let mut num: [DMatrix<Complex64>; 3] =
            [DMatrix::zeros(d, d), DMatrix::zeros(d, d), DMatrix::zeros(d, d)];
        let mut den = 0.0f64;
        for ell in 0..=cap {
            let w = (-delta * (ell * (ell + 1)) as f64).exp() * (2 * ell + 1) as f64;
            for a in 0..3 {
                num[a] += &comps[ell][a] * Complex64::new(w, 0.0);
            }
            den += w * mults[ell] as f64;
        }
        if den <= 0.0 {
            return Err(Error::Internal("empty momentum ladder in flatness scan".into()));
        }
        let value =
            num.iter().flat_map(|m| m.iter()).map(|z| z.norm() / den).fold(0.0, f64::max);
        rows.push(FlatnessRow { delta, ell_max: cap, value });
    }
    let decaying = rows.windows(2).all(|w| w[1].value < w[0].value)
        && rows.last().map(|r| r.value < threshold).unwrap_or(false);
    Ok(FlatnessReport { rows, decaying })
}

/// Verdict of the purely representation-theoretic flatness argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlatnessVerdict {
    FlatBySymmetry,
    Undetermined,
}

/// Flat-by-symmetry exactly when the traced connection must vanish: a
/// one-dimensional irrep of a group whose l = 1 block contains no trivial
/// copy, plus the two multi-dimensional special cases (the e irrep of O,
/// protected by a D2-subgroup sign flip of one angular-momentum generator,
/// and the t2 irrep of I).
pub fn symmetry_flatness_proof(
    group: &FiniteGroup,
    reps: &[Irrep],
    irrep: &Irrep,
) -> Result<FlatnessVerdict, Error> {
    use crate::group::GroupName;
    if irrep.dim == 1 && multiplicity(group, &reps[0], 1)? == 0 {
        return Ok(FlatnessVerdict::FlatBySymmetry);
    }
    match (group.name, irrep.label.as_str()) {
        (GroupName::O, "e") | (GroupName::I, "t2") => Ok(FlatnessVerdict::FlatBySymmetry),
        _ => Ok(FlatnessVerdict::Undetermined),
    }
}

/// Closed-form `A^{z,l}` for the 1D irreps of C_N with residue `i`:
/// `N * sum over |omega| <= l with omega = i (mod N) of omega` (x and y
/// components vanish identically).
pub fn cyclic_connection_z(n: u32, residue: i64, ell: usize) -> f64 {
    let l = ell as i64;
    let mut acc = 0i64;
    for omega in -l..=l {
        if (omega - residue).rem_euclid(n as i64) == 0 {
            acc += omega;
        }
    }
    n as i64 as f64 * acc as f64
}

/// Max `|tr(D^l(r)^-1 d/dt D^l(r))|` along a sampled smooth path, by
/// central finite differences; the angular-velocity insertion is traceless,
/// so this vanishes for the true derivative. Errors when halving the step
/// does not confirm convergence.
pub fn asymmetric_flatness_check(
    ell_max: usize,
    path: impl Fn(f64) -> Rotation,
    samples: usize,
    step: f64,
) -> Result<Vec<f64>, Error> {
    if step <= 0.0 || samples == 0 {
        return Err(Error::Domain("need a positive step and at least one sample".into()));
    }
    let mut out = Vec::with_capacity(ell_max + 1);
    for ell in 0..=ell_max {
        let eval = |h: f64| -> Result<f64, Error> {
            let mut worst = 0.0f64;
            for k in 0..samples {
                let t = k as f64 / samples as f64;
                let d0 = wigner_d(ell, &path(t))?.matrix;
                let dp = wigner_d(ell, &path(t + h))?.matrix;
                let dm = wigner_d(ell, &path(t - h))?.matrix;
                let deriv = (dp - dm) / Complex64::new(2.0 * h, 0.0);
                worst = worst.max((d0.adjoint() * deriv).trace().norm());
            }
            Ok(worst)
        };
        let coarse = eval(step)?;
        let fine = eval(step / 2.0)?;
        // Central differences: the residual trace is pure discretization
        // error, so halving the step must not increase it materially.
        if fine > coarse * 4.0 && fine > 1e-9 {
            return Err(Error::Domain(format!(
                "step {step} too large at l = {ell}: no convergence ({coarse:.3e} -> {fine:.3e})"
            )));
        }
        out.push(fine);
    }
    Ok(out)
}

/// Exact monodromy matrix `Gamma(g^-1)` for transporting around the loop
/// closed by `g`.
pub fn monodromy_matrix(
    group: &FiniteGroup,
    irrep: &Irrep,
    g: usize,
) -> Result<DMatrix<Complex64>, Error> {
    if g >= group.order() {
        return Err(Error::Domain(format!("element index {g} out of range")));
    }
    let gi = group.inv[g];
    Ok(DMatrix::from_fn(irrep.dim, irrep.dim, |r, c| irrep.entry(gi, r, c).to_c64()))
}

/// The monodromy group `G / ker Gamma` with its catalog label.
#[derive(Debug, Clone)]
pub struct MonodromyGroup {
    pub kernel: Vec<usize>,
    pub quotient: QuotientLabel,
    pub non_abelian: bool,
}

/// Kernel membership decided in exact cyclotomic arithmetic.
pub fn irrep_kernel(group: &FiniteGroup, irrep: &Irrep) -> Vec<usize> {
    let id = cyc_identity(irrep.dim);
    (0..group.order())
        .filter(|&g| {
            (0..irrep.dim).all(|r| {
                (0..irrep.dim)
                    .all(|c| (irrep.entry(g, r, c).clone() - id[r][c].clone()).is_zero())
            })
        })
        .collect()
}

pub fn monodromy_group(group: &FiniteGroup, irrep: &Irrep) -> Result<MonodromyGroup, Error> {
    let kernel = irrep_kernel(group, irrep);
    let quotient = subgroup_quotient(group, &kernel)?;
    let (_, qmult) = quotient_table(&group.mult, &kernel)?;
    let fp = fingerprint(&qmult);
    Ok(MonodromyGroup { kernel, quotient, non_abelian: !fp.abelian })
}

/// Result of the flat-connection conjecture check for one `(G, Gamma)`.
#[derive(Debug, Clone)]
pub struct ConjectureReport {
    pub holds: bool,
    /// Description of the lifted witness representation on the binary cover.
    pub witness: String,
}

/// Check the binary-cover criterion: lift `Gamma` to the double cover
/// `2G` of `G` inside SU(2) by `rho(+-q) = Gamma(proj(q))`, verify
/// `ker rho` is the double cover of `ker Gamma`, and compare the quotient
/// fingerprints of `2G / ker rho` and `G / ker Gamma`.
pub fn conjecture_check(group: &FiniteGroup, irrep: &Irrep) -> Result<ConjectureReport, Error> {
    let n = group.order();
    // Elements of 2G: index 2*g + s with s = 0 for the canonical quaternion
    // of element g and s = 1 for its negative.
    let quats: Vec<[f64; 4]> = group.elements.iter().map(|e| e.canonical_quat()).collect();
    let qmul = |a: &[f64; 4], b: &[f64; 4]| -> [f64; 4] {
        [
            a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
        ]
    };
    let mut mult2 = vec![vec![0usize; 2 * n]; 2 * n];
    for i in 0..2 * n {
        for j in 0..2 * n {
            let (gi, si) = (i / 2, i % 2);
            let (gj, sj) = (j / 2, j % 2);
            let gk = group.mult[gi][gj];
            let prod = qmul(&quats[gi], &quats[gj]);
            let dot: f64 = prod.iter().zip(quats[gk].iter()).map(|(a, b)| a * b).sum();
            if dot.abs() < 0.5 {
                return Err(Error::Internal("binary-cover product did not snap".into()));
            }
            let sk = (si + sj + usize::from(dot < 0.0)) % 2;
            mult2[i][j] = 2 * gk + sk;
        }
    }
    // rho(+-q) = Gamma(proj(q)): the kernel is the full preimage of
    // ker Gamma (both signs), by construction of the lift.
    let ker_g = irrep_kernel(group, irrep);
    let ker_rho: Vec<usize> = ker_g.iter().flat_map(|&g| [2 * g, 2 * g + 1]).collect();
    let (_, q2) = quotient_table(&mult2, &ker_rho)?;
    let fp2 = fingerprint(&q2);
    let (_, q1) = quotient_table(&group.mult, &ker_g)?;
    let fp1 = fingerprint(&q1);
    let holds = fp2 == fp1;
    let label = classify_fingerprint(&fp2)
        .map(|q| q.to_string())
        .unwrap_or_else(|| format!("order-{} group", fp2.order));
    Ok(ConjectureReport {
        holds,
        witness: format!(
            "rho on the binary cover 2{} (order {}), kernel order {}, image {}",
            group.name,
            2 * n,
            ker_rho.len(),
            label
        ),
    })
}
