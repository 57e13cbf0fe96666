//! Isotypic decomposition of the Wigner blocks `D^{l*}` restricted to a
//! finite catalog group, and explicitly symmetry-adapted momentum bases.
//!
//! For a group element `g` with rotation angle `2 pi j / q` the `D^l`
//! character is the Dirichlet kernel `sum_{w=-l..l} zeta_q^{w j}`, a rational
//! integer after summing over the group; multiplicities are therefore
//! computed exactly.
//!
//! The adapted basis `V` for irrep `Gamma` at level `l` satisfies the
//! intertwining relation `D^{l*}(g) V = V (Gamma(g) (x) I_mult)` with columns
//! grouped as `c = nu * mult + kappa` (`nu` = irrep row, `kappa` = copy).

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};

use crate::cyclotomic::Cyclotomic;
use crate::group::{FiniteGroup, GroupName};
use crate::irreps::Irrep;
use crate::wigner::wigner_d_conj;
use crate::Error;

/// Exact character of `D^l` on every element of `group`.
pub fn dl_characters(group: &FiniteGroup, ell: usize) -> Vec<Cyclotomic> {
    let n = group.cyclo_order;
    (0..group.order())
        .map(|g| {
            let t = group.angle_turns[g];
            // Angle 2 pi j / q as an exponent multiplier on zeta_n.
            let step = (n as i64 / *t.denom()) * *t.numer();
            let mut acc = Cyclotomic::zero(n);
            for w in -(ell as i64)..=(ell as i64) {
                acc = acc + Cyclotomic::root(n, w * step);
            }
            acc
        })
        .collect()
}

/// Exact multiplicity of `irrep` in `D^{l*}` restricted to `group`.
pub fn multiplicity(group: &FiniteGroup, irrep: &Irrep, ell: usize) -> Result<usize, Error> {
    let chi_dl = dl_characters(group, ell);
    // D^{l*} has character conj(chi_{D^l}) = chi_{D^l} (real: Dirichlet
    // kernel), so <chi_Gamma, chi_{D^{l*}}> = (1/|G|) sum conj(chi_G) chi_Dl.
    let mut acc = Cyclotomic::zero(1);
    for g in 0..group.order() {
        acc = acc + irrep.characters[g].conj() * chi_dl[g].clone();
    }
    let r = acc
        .as_rational()
        .ok_or_else(|| Error::Internal(format!("non-rational multiplicity for {}", irrep.label)))?;
    let m = r / num_rational::BigRational::from_integer(group.order().into());
    if !num_traits::One::is_one(m.denom()) || m.numer().is_negative() {
        return Err(Error::Internal(format!(
            "multiplicity of {} in D^{ell} is not a nonnegative integer: {m}",
            irrep.label
        )));
    }
    Ok(m.numer().to_u64().expect("multiplicity fits in u64") as usize)
}

/// Branching multiplicities for all irreps up to `ell_max`.
#[derive(Debug, Clone)]
pub struct BranchingTable {
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
    /// `mults[ell][i]` = multiplicity of irrep `i` in `D^{ell*}`.
    pub mults: Vec<Vec<usize>>,
}

pub fn branching_table(
    group: &FiniteGroup,
    reps: &[Irrep],
    ell_max: usize,
) -> Result<BranchingTable, Error> {
    let mut mults = Vec::with_capacity(ell_max + 1);
    for ell in 0..=ell_max {
        let row = reps
            .iter()
            .map(|r| multiplicity(group, r, ell))
            .collect::<Result<Vec<_>, _>>()?;
        // Completeness: sum_Gamma dim * mult = 2l + 1.
        let total: usize = reps.iter().zip(&row).map(|(r, &m)| r.dim * m).sum();
        if total != 2 * ell + 1 {
            return Err(Error::Internal(format!(
                "branching at l={ell} sums to {total}, expected {}",
                2 * ell + 1
            )));
        }
        mults.push(row);
    }
    Ok(BranchingTable {
        labels: reps.iter().map(|r| r.label.clone()).collect(),
        dims: reps.iter().map(|r| r.dim).collect(),
        mults,
    })
}

/// Transfer operator `P^{nu mu} = (d/|G|) sum_g conj(Gamma^{nu mu}(g)) D^{l*}(g)`.
fn transfer_operator(
    group: &FiniteGroup,
    irrep: &Irrep,
    ell: usize,
    nu: usize,
    mu: usize,
    blocks: &[DMatrix<Complex64>],
) -> DMatrix<Complex64> {
    let n = 2 * ell + 1;
    let mut acc: DMatrix<Complex64> = DMatrix::zeros(n, n);
    for g in 0..group.order() {
        let w = irrep.entry(g, nu, mu).to_c64().conj();
        if w.norm() < 1e-15 {
            continue;
        }
        acc += blocks[g].scale(1.0) * w;
    }
    acc * Complex64::new(irrep.dim as f64 / group.order() as f64, 0.0)
}

/// Symmetry-adapted basis for `irrep` inside `D^{l*}`: a `(2l+1) x (d*mult)`
/// matrix `V` with orthonormal columns `c = nu * mult + kappa` satisfying
/// `D^{l*}(g) V = V (Gamma(g) (x) I_mult)`.
///
/// For `C_N` the basis is the native momentum basis: unit vectors `|w>` for
/// the `w` selected by the irrep, in ascending `w` order.  For the other
/// groups the copies `|0 kappa>` are extracted from the image of the
/// row-0 transfer operator (seeded with unit vectors in descending-`w`
/// order and orthonormalized), and `|nu kappa> = P^{nu 0} |0 kappa>`.
pub fn adapted_basis(
    group: &FiniteGroup,
    irrep: &Irrep,
    ell: usize,
) -> Result<DMatrix<Complex64>, Error> {
    let mult = multiplicity(group, irrep, ell)?;
    let n = 2 * ell + 1;
    let d = irrep.dim;
    if mult == 0 {
        return Ok(DMatrix::zeros(n, 0));
    }

    if let GroupName::C(nn) = group.name {
        // Native momentum basis: the irrep is one-dimensional with
        // Gamma(zrot k) = zeta_N^{rk}; |w> qualifies iff w = r (mod N).
        let r = selected_residue(irrep, nn)?;
        let mut v = DMatrix::zeros(n, mult);
        let mut col = 0usize;
        for w in -(ell as i64)..=(ell as i64) {
            if (w - r).rem_euclid(nn as i64) == 0 {
                v[((w + ell as i64) as usize, col)] = Complex64::new(1.0, 0.0);
                col += 1;
            }
        }
        debug_assert_eq!(col, mult);
        return Ok(v);
    }

    let blocks: Vec<DMatrix<Complex64>> = group
        .elements
        .iter()
        .map(|e| wigner_d_conj(ell, e).map(|b| b.matrix))
        .collect::<Result<_, _>>()?;

    let p00 = transfer_operator(group, irrep, ell, 0, 0, &blocks);
    // Orthonormal basis of the image of P^{00}: seed with unit vectors in
    // descending-w order, project, Gram-Schmidt.
    let mut copies: Vec<nalgebra::DVector<Complex64>> = Vec::with_capacity(mult);
    for seed in (0..n).rev() {
        if copies.len() == mult {
            break;
        }
        let mut v = p00.column(seed).into_owned();
        // Two projection passes (re-orthogonalization) keep the basis
        // orthonormal to near machine precision at large l, where a single
        // Gram-Schmidt sweep loses digits against many close seeds.
        for _ in 0..2 {
            for c in copies.iter() {
                let ov: Complex64 = c.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                v -= c.scale(1.0) * ov;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            v /= Complex64::new(norm, 0.0);
            copies.push(v);
        }
    }
    if copies.len() != mult {
        return Err(Error::Internal(format!(
            "projector image rank {} does not match multiplicity {mult} ({} in D^{ell})",
            copies.len(),
            irrep.label
        )));
    }

    let mut v = DMatrix::zeros(n, d * mult);
    for (kappa, copy) in copies.iter().enumerate() {
        for nu in 0..d {
            let col = if nu == 0 {
                copy.clone()
            } else {
                transfer_operator(group, irrep, ell, nu, 0, &blocks) * copy
            };
            v.set_column(nu * mult + kappa, &col);
        }
    }
    // Equivariant polish: the kappa-copy Gram matrix is the same in every
    // fiber row (the transfer operators are partial isometries), so
    // right-multiplying by `I_d (x) M^{-1/2}` restores orthonormality to
    // machine precision without disturbing the intertwining relation.
    let mut m = DMatrix::<Complex64>::zeros(mult, mult);
    for nu in 0..d {
        for k1 in 0..mult {
            for k2 in 0..mult {
                m[(k1, k2)] += v.column(nu * mult + k1).dotc(&v.column(nu * mult + k2));
            }
        }
    }
    m /= Complex64::new(d as f64, 0.0);
    let eig = nalgebra::SymmetricEigen::new(m);
    let mut inv_sqrt = DMatrix::<Complex64>::zeros(mult, mult);
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= 0.0 {
            return Err(Error::Internal(format!(
                "degenerate copy Gram matrix for {} in D^{ell}",
                irrep.label
            )));
        }
        let u = eig.eigenvectors.column(i);
        let w = Complex64::new(1.0 / lambda.sqrt(), 0.0);
        for r in 0..mult {
            for c in 0..mult {
                inv_sqrt[(r, c)] += u[r] * w * u[c].conj();
            }
        }
    }
    let mut out = DMatrix::zeros(n, d * mult);
    for nu in 0..d {
        let block = v.columns(nu * mult, mult) * &inv_sqrt;
        out.columns_mut(nu * mult, mult).copy_from(&block);
    }
    Ok(out)
}

/// The momentum residue `r` (mod N) selected by a one-dimensional `C_N`
/// irrep: the exponent with `Gamma(zrot 1) = zeta_N^r`.
fn selected_residue(irrep: &Irrep, n: u32) -> Result<i64, Error> {
    if irrep.dim != 1 {
        return Err(Error::Internal("C_N irreps are one-dimensional".into()));
    }
    let val = irrep.characters[1 % irrep.characters.len()].to_c64();
    for r in 0..n as i64 {
        let want = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * r as f64 / n as f64);
        if (val - want).norm() < 1e-9 {
            return Ok(r);
        }
    }
    Err(Error::Internal(format!("C{n} irrep {} has a non-root character", irrep.label)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;
    use crate::irreps::{irrep_by_label, irreps};

    fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        a.kronecker(b)
    }

    fn check_intertwining(group: &FiniteGroup, irrep: &Irrep, ell: usize) {
        let v = adapted_basis(group, irrep, ell).unwrap();
        let mult = v.ncols() / irrep.dim.max(1);
        if v.ncols() == 0 {
            return;
        }
        // Orthonormal columns.
        let g0 = v.adjoint() * &v;
        let eye = DMatrix::identity(v.ncols(), v.ncols());
        assert!((g0 - eye).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-9);
        // D^{l*}(g) V = V (Gamma(g) (x) I_mult) for every element.
        for g in 0..group.order() {
            let dstar = wigner_d_conj(ell, &group.elements[g]).unwrap().matrix;
            let gamma = DMatrix::from_fn(irrep.dim, irrep.dim, |r, c| irrep.entry(g, r, c).to_c64());
            let rhs = &v * kron(&gamma, &DMatrix::identity(mult, mult));
            let lhs = dstar * &v;
            let err = (lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err < 1e-9, "{}:{} l={ell} g={g} intertwining error {err}", group.name, irrep.label);
        }
    }

    #[test]
    fn multiplicity_closed_forms_cyclic() {
        // Independent oracle: C2: mult(a, l) = 2 floor(l/2) + 1; mult(b, l) = 2 floor((l+1)/2).
        let c2 = build_group(GroupName::C(2)).unwrap();
        let a = irrep_by_label(&c2, "a").unwrap();
        let b = irrep_by_label(&c2, "b").unwrap();
        for ell in 0..=12 {
            assert_eq!(multiplicity(&c2, &a, ell).unwrap(), 2 * (ell / 2) + 1);
            assert_eq!(multiplicity(&c2, &b, ell).unwrap(), 2 * ((ell + 1) / 2));
        }
        // Independent oracle: C3: mult(2e1, l) = l - floor(l/3).
        let c3 = build_group(GroupName::C(3)).unwrap();
        let e2 = irrep_by_label(&c3, "2e1").unwrap();
        for ell in 0..=12 {
            assert_eq!(multiplicity(&c3, &e2, ell).unwrap(), ell - ell / 3);
        }
    }

    #[test]
    fn branching_completeness() {
        for name in [GroupName::C(5), GroupName::D(4), GroupName::D(7), GroupName::T, GroupName::O]
        {
            let g = build_group(name).unwrap();
            let reps = irreps(&g).unwrap();
            // branching_table asserts sum_Gamma d * mult = 2l + 1 internally.
            branching_table(&g, &reps, 15).unwrap();
        }
    }

    #[test]
    fn icosahedral_branching_matches_reference() {
        // Reference multiplicities of (a, t1, t2, g, h) in D^{l*} for
        // l = 0..10.  Note the published table this mirrors has a typo at
        // l = 5 (h printed as 0); completeness forces t1 + t2 + h there:
        // 3 + 3 + 5 = 11 = 2l + 1.
        let want: [[usize; 5]; 11] = [
            [1, 0, 0, 0, 0],
            [0, 1, 0, 0, 0],
            [0, 0, 0, 0, 1],
            [0, 0, 1, 1, 0],
            [0, 0, 0, 1, 1],
            [0, 1, 1, 0, 1],
            [1, 1, 0, 1, 1],
            [0, 1, 1, 1, 1],
            [0, 0, 1, 1, 2],
            [0, 1, 1, 2, 1],
            [1, 1, 1, 1, 2],
        ];
        let g = build_group(GroupName::I).unwrap();
        let reps = irreps(&g).unwrap();
        let table = branching_table(&g, &reps, 10).unwrap();
        assert_eq!(table.labels, vec!["a", "t1", "t2", "g", "h"]);
        for ell in 0..=10 {
            assert_eq!(table.mults[ell], want[ell], "l = {ell}");
        }
    }

    #[test]
    fn adapted_bases_intertwine() {
        for name in [GroupName::C(4), GroupName::D(3), GroupName::D(6), GroupName::T] {
            let g = build_group(name).unwrap();
            for rep in irreps(&g).unwrap() {
                for ell in 0..=6 {
                    check_intertwining(&g, &rep, ell);
                }
            }
        }
        // Spot checks on the big groups.
        let o = build_group(GroupName::O).unwrap();
        for rep in irreps(&o).unwrap() {
            check_intertwining(&o, &rep, 6);
        }
        let i = build_group(GroupName::I).unwrap();
        for rep in irreps(&i).unwrap() {
            check_intertwining(&i, &rep, 6);
        }
    }

    #[test]
    fn dihedral_wang_combinations() {
        // Reference convention: for D_N the a1/a2/b1/b2 columns are Wang combinations
        // (|w> + (-1)^{l+w} |-w>)/sqrt(2) up to phase; check the l=2, D3 a1
        // copy is (|2> + |-2>)/sqrt(2) together with |0>.
        let d3 = build_group(GroupName::D(3)).unwrap();
        let a1 = irrep_by_label(&d3, "a1").unwrap();
        let v = adapted_basis(&d3, &a1, 2).unwrap();
        assert_eq!(v.ncols(), 1);
        // mult(a1, l=2) = 1: the Wang state (|2> + |-2>)/sqrt(2) (w = 2 = -1 mod 3
        // fails the C3 selection; only w = 0 and the +-2 pair could mix, but
        // +-2 are not multiples of 3, so the copy is |0>... verify numerically
        // against the intertwining property instead of a hand-picked vector.
        check_intertwining(&d3, &a1, 2);
        let d2 = build_group(GroupName::D(2)).unwrap();
        let a1 = irrep_by_label(&d2, "a1").unwrap();
        let v = adapted_basis(&d2, &a1, 2).unwrap();
        assert_eq!(v.ncols(), 2);
        // Columns span {|0>, (|2> + |-2>)/sqrt 2} (l even: (-1)^{l+w} = +1 at w=2).
        let wang = DMatrix::from_column_slice(
            5,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0 / 2.0f64.sqrt(), 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0 / 2.0f64.sqrt(), 0.0),
            ],
        );
        // Same subspace: projector difference vanishes.
        let pv = &v * v.adjoint();
        let pw = &wang * wang.adjoint();
        assert!((pv - pw).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-10);
    }

    #[test]
    fn cyclic_native_basis_is_ascending_momentum() {
        let c3 = build_group(GroupName::C(3)).unwrap();
        let e1 = irrep_by_label(&c3, "1e1").unwrap();
        let v = adapted_basis(&c3, &e1, 4).unwrap();
        // w = 1 (mod 3) within -4..4: w in {-2, 1, 4}, ascending columns.
        assert_eq!(v.ncols(), 3);
        for (col, w) in [(-2i64, 0usize), (1, 1), (4, 2)].map(|(w, c)| (c, w)) {
            assert!((v[((w + 4) as usize, col)] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
        check_intertwining(&c3, &e1, 4);
    }
}
