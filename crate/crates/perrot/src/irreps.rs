//! Exact unitary irreducible representations of the catalog groups, with
//! matrix entries in cyclotomic fields.
//!
//! Label conventions:
//! - `C_N`: `a` (trivial); `b` (alternating, N even); complex pairs
//!   `1e<i>`/`2e<i>` for `i = 1 .. ceil(N/2) - 1`, with
//!   `1e<i>(zrot k) = zeta_N^{+ik}` and `2e<i>(zrot k) = zeta_N^{-ik}`.
//! - `D_N`: `a1`, `a2` (flips -> -1); for N even also `b1` (`b1(f_k) = (-1)^k`
//!   on flips) and `b2 = a2 (x) b1`; two-dimensional `e<i>` for
//!   `i = 1 .. ceil(N/2) - 1` with `e_i(zrot k) = diag(zeta_N^{-ik}, zeta_N^{+ik})`
//!   and `e_i(f_0) = [[0,1],[1,0]]`.
//! - `T`: `a`; complex pair `1e`/`2e` factoring through `T / V4 = C3`
//!   (`1e` sends the +2pi/3 rotation about `(1,1,1)` to `zeta_3`); `t` is the
//!   defining rotation representation (entries 0, +-1).
//! - `O`: `a1`; `a2` = sign of the induced permutation of coordinate axes;
//!   `e` factors through the axis-permutation action `O -> S3 = D3`; `t1` is
//!   the defining representation; `t2 = a2 (x) t1`.
//! - `I`: `a`; `t1` = defining representation (entries `(p + q sqrt5)/8`);
//!   `t2` = Galois conjugate (`sqrt5 -> -sqrt5`); `g` from the action on the
//!   five triples of mutually orthogonal two-fold axes; `h` from the action
//!   on the six five-fold axes (complements of the fixed vector, realized in
//!   a discrete-Fourier basis so entries stay cyclotomic).

use num_rational::{BigRational, Ratio};
use num_traits::One;

use crate::cyclotomic::Cyclotomic;
use crate::group::{FiniteGroup, GroupName};
use crate::rotation::Rotation;
use crate::Error;

/// A small dense matrix over a cyclotomic field.
pub type CycMatrix = Vec<Vec<Cyclotomic>>;

/// An exact unitary irrep of a finite catalog group.
#[derive(Debug, Clone)]
pub struct Irrep {
    pub label: String,
    pub dim: usize,
    /// One matrix per group element, aligned with `FiniteGroup::elements`.
    pub matrices: Vec<CycMatrix>,
    /// Exact character per element (trace of the matrix).
    pub characters: Vec<Cyclotomic>,
}

impl Irrep {
    fn from_matrices(label: &str, matrices: Vec<CycMatrix>) -> Self {
        let dim = matrices[0].len();
        let characters = matrices
            .iter()
            .map(|m| (0..dim).fold(Cyclotomic::zero(1), |acc, i| acc + m[i][i].clone()))
            .collect();
        Irrep { label: label.to_string(), dim, matrices, characters }
    }

    /// Entry `(r, c)` of the matrix for element `g`.
    pub fn entry(&self, g: usize, r: usize, c: usize) -> &Cyclotomic {
        &self.matrices[g][r][c]
    }
}

/// Multiply two cyclotomic matrices.
pub fn cyc_matmul(a: &CycMatrix, b: &CycMatrix) -> CycMatrix {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..k).fold(Cyclotomic::zero(1), |acc, t| acc + &a[i][t] * &b[t][j])
                })
                .collect()
        })
        .collect()
}

/// Conjugate transpose of a cyclotomic matrix.
pub fn cyc_adjoint(a: &CycMatrix) -> CycMatrix {
    let (n, m) = (a.len(), a[0].len());
    (0..m).map(|j| (0..n).map(|i| a[i][j].conj()).collect()).collect()
}

/// Identity cyclotomic matrix.
pub fn cyc_identity(dim: usize) -> CycMatrix {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { Cyclotomic::one(1) } else { Cyclotomic::zero(1) })
                .collect()
        })
        .collect()
}

fn scalar_rep(values: Vec<Cyclotomic>) -> Vec<CycMatrix> {
    values.into_iter().map(|v| vec![vec![v]]).collect()
}

/// All irreps of a finite catalog group, in the conventional label order.
pub fn irreps(group: &FiniteGroup) -> Result<Vec<Irrep>, Error> {
    match group.name {
        GroupName::C(n) => Ok(cyclic_irreps(group, n)),
        GroupName::D(n) => Ok(dihedral_irreps(group, n)),
        GroupName::T => tetrahedral_irreps(group),
        GroupName::O => octahedral_irreps(group),
        GroupName::I => icosahedral_irreps(group),
    }
}

/// Look up a single irrep by its label.
pub fn irrep_by_label(group: &FiniteGroup, label: &str) -> Result<Irrep, Error> {
    irreps(group)?
        .into_iter()
        .find(|r| r.label == label)
        .ok_or_else(|| Error::IrrepLabel { group: group.name.to_string(), label: label.into() })
}

/// Multiplicity of each irrep in a representation given by its exact
/// character (one value per element): `(1/|G|) sum_g conj(chi_Gamma(g)) chi(g)`.
pub fn decompose_character(
    group: &FiniteGroup,
    reps: &[Irrep],
    chi: &[Cyclotomic],
) -> Result<Vec<usize>, Error> {
    let order = group.order();
    assert_eq!(chi.len(), order);
    let mut out = Vec::with_capacity(reps.len());
    for rep in reps {
        let mut acc = Cyclotomic::zero(1);
        for g in 0..order {
            acc = acc + rep.characters[g].conj() * chi[g].clone();
        }
        let r = acc
            .as_rational()
            .ok_or_else(|| Error::Internal(format!("non-rational multiplicity for {}", rep.label)))?
            / BigRational::from_integer(order.into());
        if !r.denom().is_one() || r.numer().sign() == num_bigint::Sign::Minus {
            return Err(Error::Internal(format!(
                "multiplicity of {} is not a nonnegative integer: {r}",
                rep.label
            )));
        }
        let v: Option<u64> = num_traits::ToPrimitive::to_u64(r.numer());
        out.push(v.expect("multiplicity fits in u64") as usize);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// C_N and D_N
// ---------------------------------------------------------------------------

fn cyclic_irreps(group: &FiniteGroup, n: u32) -> Vec<Irrep> {
    // Elements are zrot(k), k = 0..N-1, in construction order.
    let mut out = Vec::new();
    let a = scalar_rep((0..n).map(|_| Cyclotomic::one(1)).collect());
    out.push(Irrep::from_matrices("a", a));
    if n % 2 == 0 {
        let b = scalar_rep((0..n).map(|k| Cyclotomic::root(2, k as i64)).collect());
        out.push(Irrep::from_matrices("b", b));
    }
    for i in 1..=(n.saturating_sub(1)) / 2 {
        let e1 = scalar_rep((0..n).map(|k| Cyclotomic::root(n, (i * k) as i64)).collect());
        let e2 = scalar_rep((0..n).map(|k| Cyclotomic::root(n, -((i * k) as i64))).collect());
        out.push(Irrep::from_matrices(&format!("1e{i}"), e1));
        out.push(Irrep::from_matrices(&format!("2e{i}"), e2));
    }
    debug_assert_eq!(group.order(), n as usize);
    out
}

fn dihedral_irreps(group: &FiniteGroup, n: u32) -> Vec<Irrep> {
    // Elements: zrot(k) for k = 0..N-1, then flips f_k = zrot(k) . f_0.
    let order = group.order();
    let is_flip = |g: usize| g >= n as usize;
    let turn = |g: usize| (g % n as usize) as i64;

    let mut out = Vec::new();
    out.push(Irrep::from_matrices(
        "a1",
        scalar_rep((0..order).map(|_| Cyclotomic::one(1)).collect()),
    ));
    out.push(Irrep::from_matrices(
        "a2",
        scalar_rep(
            (0..order).map(|g| Cyclotomic::root(2, if is_flip(g) { 1 } else { 0 })).collect(),
        ),
    ));
    if n % 2 == 0 {
        let b1 = scalar_rep((0..order).map(|g| Cyclotomic::root(2, turn(g))).collect());
        let b2 = scalar_rep(
            (0..order)
                .map(|g| Cyclotomic::root(2, turn(g) + if is_flip(g) { 1 } else { 0 }))
                .collect(),
        );
        out.push(Irrep::from_matrices("b1", b1));
        out.push(Irrep::from_matrices("b2", b2));
    }
    for i in 1..=(n as i64 - 1) / 2 + if n % 2 == 0 { 0 } else { 0 } {
        // e_i for i = 1 .. ceil(N/2) - 1.
        if 2 * i >= n as i64 {
            break;
        }
        let mats: Vec<CycMatrix> = (0..order)
            .map(|g| {
                let k = turn(g);
                let zneg = Cyclotomic::root(n, -i * k);
                let zpos = Cyclotomic::root(n, i * k);
                let zero = Cyclotomic::zero(1);
                if is_flip(g) {
                    // e_i(f_k) = e_i(zrot k) [[0,1],[1,0]].
                    vec![vec![zero.clone(), zneg], vec![zpos, zero]]
                } else {
                    vec![vec![zneg, zero.clone()], vec![zero, zpos]]
                }
            })
            .collect();
        out.push(Irrep::from_matrices(&format!("e{i}"), mats));
    }
    out
}

// ---------------------------------------------------------------------------
// Polyhedral helpers
// ---------------------------------------------------------------------------

/// Snap a rotation-matrix entry known to be 0 or +-1.
fn snap_sign_entry(x: f64) -> Result<i64, Error> {
    for cand in [-1i64, 0, 1] {
        if (x - cand as f64).abs() < 1e-9 {
            return Ok(cand);
        }
    }
    Err(Error::Internal(format!("matrix entry {x} is not a signed-permutation entry")))
}

/// Defining rotation representation with exact 0/+-1 entries (T and O).
fn signed_perm_rep(group: &FiniteGroup) -> Result<Vec<CycMatrix>, Error> {
    group
        .elements
        .iter()
        .map(|r| {
            let m = r.matrix();
            (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| Ok(Cyclotomic::from_integer(1, snap_sign_entry(m[i][j])?)))
                        .collect::<Result<Vec<_>, Error>>()
                })
                .collect::<Result<CycMatrix, Error>>()
        })
        .collect()
}

/// Sign of the coordinate-axis permutation induced by a signed-permutation
/// rotation matrix.
fn axis_perm_sign(r: &Rotation) -> Result<i64, Error> {
    let m = r.matrix();
    let mut perm = [0usize; 3];
    for j in 0..3 {
        let i = (0..3)
            .find(|&i| m[i][j].abs() > 0.5)
            .ok_or_else(|| Error::Internal("not a signed permutation".into()))?;
        perm[j] = i;
    }
    // Parity of a 3-permutation.
    let mut sign = 1i64;
    for a in 0..3 {
        for b in (a + 1)..3 {
            if perm[a] > perm[b] {
                sign = -sign;
            }
        }
    }
    Ok(sign)
}

fn tetrahedral_irreps(group: &FiniteGroup) -> Result<Vec<Irrep>, Error> {
    let order = group.order();
    let a = scalar_rep((0..order).map(|_| Cyclotomic::one(1)).collect());

    // T / V4 = C3; the kernel is the identity plus the three two-fold turns.
    let kernel: Vec<usize> = (0..order).filter(|&g| group.orders[g] <= 2).collect();
    let (coset_of, qmult) = crate::group::quotient_table(&group.mult, &kernel)?;
    // Exponent map on the 3 cosets: the coset of the +2pi/3 turn about
    // (1,1,1) is exponent 1.
    let gen = group
        .find(&Rotation::from_axis_angle([1.0, 1.0, 1.0], 2.0 * std::f64::consts::PI / 3.0))
        .ok_or_else(|| Error::Internal("T is missing its threefold generator".into()))?;
    let c1 = coset_of[gen];
    let mut exponent = [0i64; 3];
    exponent[c1] = 1;
    exponent[qmult[c1][c1]] = 2;
    let e1 = scalar_rep((0..order).map(|g| Cyclotomic::root(3, exponent[coset_of[g]])).collect());
    let e2 = scalar_rep((0..order).map(|g| Cyclotomic::root(3, -exponent[coset_of[g]])).collect());

    let t = signed_perm_rep(group)?;

    Ok(vec![
        Irrep::from_matrices("a", a),
        Irrep::from_matrices("1e", e1),
        Irrep::from_matrices("2e", e2),
        Irrep::from_matrices("t", t),
    ])
}

fn octahedral_irreps(group: &FiniteGroup) -> Result<Vec<Irrep>, Error> {
    let order = group.order();
    let a1 = scalar_rep((0..order).map(|_| Cyclotomic::one(1)).collect());
    let signs: Vec<i64> =
        group.elements.iter().map(axis_perm_sign).collect::<Result<_, _>>()?;
    let a2 = scalar_rep(
        signs.iter().map(|&s| Cyclotomic::from_integer(1, s)).collect(),
    );

    // e factors through the axis-permutation map O -> S3, realized as the
    // D3 irrep e1 under: identity -> zrot0, (xyz) -> zrot1, (xzy) -> zrot2,
    // (xy) -> f_0, (xz) -> f_1, (yz) -> f_2.
    let d3 = crate::group::build_group(GroupName::D(3))?;
    let d3_e = dihedral_irreps(&d3, 3).into_iter().find(|r| r.label == "e1").unwrap();
    let e: Vec<CycMatrix> = group
        .elements
        .iter()
        .map(|r| {
            let m = r.matrix();
            let mut perm = [0usize; 3]; // axis j maps to axis perm[j]
            for j in 0..3 {
                perm[j] = (0..3).find(|&i| m[i][j].abs() > 0.5).unwrap();
            }
            let d3_index = match perm {
                [0, 1, 2] => 0,          // identity
                [1, 2, 0] => 1,          // x->y->z->x  = zrot1
                [2, 0, 1] => 2,          // x->z->y->x  = zrot2
                [1, 0, 2] => 3,          // swap xy     = f_0
                [2, 1, 0] => 4,          // swap xz     = f_1
                [0, 2, 1] => 5,          // swap yz     = f_2
                _ => unreachable!("3-permutations are exhausted"),
            };
            d3_e.matrices[d3_index].clone()
        })
        .collect();

    let t1 = signed_perm_rep(group)?;
    let t2: Vec<CycMatrix> = t1
        .iter()
        .zip(&signs)
        .map(|(m, &s)| {
            m.iter().map(|row| row.iter().map(|x| x.scale_int(s)).collect()).collect()
        })
        .collect();

    Ok(vec![
        Irrep::from_matrices("a1", a1),
        Irrep::from_matrices("a2", a2),
        Irrep::from_matrices("e", e),
        Irrep::from_matrices("t1", t1),
        Irrep::from_matrices("t2", t2),
    ])
}

/// Snap an icosahedral rotation-matrix entry to `(p + q sqrt5)/8`.
fn snap_golden_entry(x: f64) -> Result<(i64, i64), Error> {
    let s5 = 5.0f64.sqrt();
    for q in -4i64..=4 {
        let p = ((x - q as f64 * s5 / 8.0) * 8.0).round() as i64;
        if p.abs() <= 8 && (x - (p as f64 + q as f64 * s5) / 8.0).abs() < 1e-9 {
            return Ok((p, q));
        }
    }
    Err(Error::Internal(format!("entry {x} is not of the form (p + q sqrt5)/8")))
}

/// Canonical line representative: unit vector with the first component of
/// magnitude > 1e-6 made positive.
fn canonical_line(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let mut u = [v[0] / n, v[1] / n, v[2] / n];
    for c in u {
        if c.abs() > 1e-6 {
            if c < 0.0 {
                u = [-u[0], -u[1], -u[2]];
            }
            break;
        }
    }
    u
}

fn lines_close(a: [f64; 3], b: [f64; 3]) -> bool {
    (0..3).all(|i| (a[i] - b[i]).abs() < 1e-6)
}

/// Permutation representation of `group` on classes of rotation axes:
/// `points` maps each relevant element index to its point label `0..n-1`;
/// returns, for each group element `g`, the permutation `sigma_g` with
/// `sigma_g(j) = point(g x g^-1)` for any `x` in point `j`.
fn axis_permutations(
    group: &FiniteGroup,
    points: &[(usize, usize)], // (element index, point label)
    npoints: usize,
) -> Vec<Vec<usize>> {
    let point_of: std::collections::HashMap<usize, usize> = points.iter().copied().collect();
    // One representative element per point.
    let mut rep = vec![usize::MAX; npoints];
    for &(el, p) in points {
        if rep[p] == usize::MAX {
            rep[p] = el;
        }
    }
    (0..group.order())
        .map(|g| {
            (0..npoints)
                .map(|j| {
                    let conj = group.mult[group.mult[g][rep[j]]][group.inv[g]];
                    point_of[&conj]
                })
                .collect()
        })
        .collect()
}

/// Irrep matrices from a permutation action on `n` points, restricted to the
/// complement of the invariant all-ones vector in the discrete-Fourier basis
/// (columns `k = 1..n-1` of the DFT matrix): entries lie in `Q(zeta_n)`.
fn dft_complement_rep(perms: &[Vec<usize>], n: usize) -> Vec<CycMatrix> {
    let nn = n as u32;
    let inv_n = BigRational::new(1.into(), (n as i64).into());
    perms
        .iter()
        .map(|sigma| {
            // sigma_inv[i] = j with sigma(j) = i.
            let mut sigma_inv = vec![0usize; n];
            for (j, &i) in sigma.iter().enumerate() {
                sigma_inv[i] = j;
            }
            (1..n)
                .map(|k| {
                    (1..n)
                        .map(|kp| {
                            let mut acc = Cyclotomic::zero(nn);
                            for i in 0..n {
                                let expo = (sigma_inv[i] * kp) as i64 - (i * k) as i64;
                                acc = acc + Cyclotomic::root(nn, expo);
                            }
                            acc.scale(&inv_n)
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn icosahedral_irreps(group: &FiniteGroup) -> Result<Vec<Irrep>, Error> {
    let order = group.order();
    let a = scalar_rep((0..order).map(|_| Cyclotomic::one(1)).collect());

    // t1: defining representation, entries (p + q sqrt5)/8; t2: its Galois
    // conjugate sqrt5 -> -sqrt5 (also a representation, and inequivalent).
    let eighth = Ratio::new(num_bigint::BigInt::from(1), num_bigint::BigInt::from(8));
    let mut t1 = Vec::with_capacity(order);
    let mut t2 = Vec::with_capacity(order);
    for r in &group.elements {
        let m = r.matrix();
        let mut m1 = Vec::with_capacity(3);
        let mut m2 = Vec::with_capacity(3);
        for i in 0..3 {
            let mut row1 = Vec::with_capacity(3);
            let mut row2 = Vec::with_capacity(3);
            for j in 0..3 {
                let (p, q) = snap_golden_entry(m[i][j])?;
                let rat = Cyclotomic::from_integer(5, p);
                let irr = Cyclotomic::sqrt5(5).scale_int(q);
                row1.push((rat.clone() + irr.clone()).scale(&eighth));
                row2.push((rat - irr).scale(&eighth));
            }
            m1.push(row1);
            m2.push(row2);
        }
        t1.push(m1);
        t2.push(m2);
    }

    // g: action on the five triples of mutually orthogonal two-fold axes
    // (the five V4 subgroups).  Partition the 15 involutions.
    let invols: Vec<usize> = (0..order).filter(|&g| group.orders[g] == 2).collect();
    let mut triple_of: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut triples: Vec<Vec<usize>> = Vec::new();
    for &x in &invols {
        if triple_of.contains_key(&x) {
            continue;
        }
        let members: Vec<usize> = invols
            .iter()
            .copied()
            .filter(|&y| y == x || (group.mult[x][y] == group.mult[y][x] && group.orders[group.mult[x][y]] == 2))
            .collect();
        if members.len() != 3 {
            return Err(Error::Internal(format!(
                "two-fold axis triple has {} members",
                members.len()
            )));
        }
        let label = triples.len();
        for &m in &members {
            triple_of.insert(m, label);
        }
        triples.push(members);
    }
    if triples.len() != 5 {
        return Err(Error::Internal(format!("found {} axis triples, expected 5", triples.len())));
    }
    let points5: Vec<(usize, usize)> = triple_of.iter().map(|(&e, &p)| (e, p)).collect();
    let perms5 = axis_permutations(group, &points5, 5);
    let g_rep = dft_complement_rep(&perms5, 5);

    // h: action on the six five-fold axes (as lines).
    let mut lines: Vec<[f64; 3]> = Vec::new();
    let mut line_points: Vec<(usize, usize)> = Vec::new();
    for g in 0..order {
        if group.orders[g] != 5 {
            continue;
        }
        let ax = canonical_line(group.elements[g].axis().expect("order-5 element has an axis"));
        let p = match lines.iter().position(|&l| lines_close(l, ax)) {
            Some(p) => p,
            None => {
                lines.push(ax);
                lines.len() - 1
            }
        };
        line_points.push((g, p));
    }
    if lines.len() != 6 {
        return Err(Error::Internal(format!("found {} five-fold axes, expected 6", lines.len())));
    }
    let perms6 = axis_permutations(group, &line_points, 6);
    let h_rep = dft_complement_rep(&perms6, 6);

    Ok(vec![
        Irrep::from_matrices("a", a),
        Irrep::from_matrices("t1", t1),
        Irrep::from_matrices("t2", t2),
        Irrep::from_matrices("g", g_rep),
        Irrep::from_matrices("h", h_rep),
    ])
}
