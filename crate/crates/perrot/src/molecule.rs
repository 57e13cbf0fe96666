//! Molecule presets (geometry + nuclear spins) and the permutation action of
//! the symmetry group on identical nuclei.
//!
//! Geometry conventions (matching the canonical group embeddings):
//! - Ring molecules (`C_N`/`D_N`): N identical nuclei in the xy-plane at
//!   angles `pi/2 + 2 pi k / N`, so one nucleus sits on the +y axis — the
//!   fiducial dihedral flip axis.
//! - CH4: hydrogens on alternating cube corners `(1,1,1), (1,-1,-1),
//!   (-1,1,-1), (-1,-1,1)` (normalized).
//! - SF6: fluorines on the six coordinate half-axes.
//! - C60: the free icosahedral orbit of the truncated-icosahedron vertex
//!   `A + (B - A)/3` with `A = (1, 0, phi)`, `B = (phi, 1, 0)`.

use crate::group::{build_group, ContinuousGroup, FiniteGroup, GroupName, GroupSpec, GOLDEN};
use crate::rotation::Rotation;
use crate::Error;

/// One orbit of identical nuclei permuted by the symmetry group.
#[derive(Debug, Clone)]
pub struct Orbit {
    /// Element symbol, for display.
    pub element: String,
    /// Twice the nuclear spin (so 1 = spin-1/2, 2 = spin-1, ...).
    pub spin_two: u32,
    /// Reference coordinates, one per nucleus.
    pub coords: Vec<[f64; 3]>,
}

impl Orbit {
    /// Single-nucleus spin-space dimension `2s + 1`.
    pub fn spin_dim(&self) -> u64 {
        self.spin_two as u64 + 1
    }
}

/// A nucleus fixed by every symmetry element (reported as a separate
/// multiplicative spin factor, never entering the statistics).
#[derive(Debug, Clone)]
pub struct Spectator {
    pub element: String,
    pub spin_two: u32,
}

/// A molecule preset: symmetry group plus nuclei.
#[derive(Debug, Clone)]
pub struct MoleculePreset {
    pub name: String,
    pub group: GroupSpec,
    pub orbits: Vec<Orbit>,
    pub spectators: Vec<Spectator>,
}

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 17] = [
    "HCl", "S2", "H2", "D2", "H2O", "NH3", "SO3", "BF3", "CH4", "XeF4", "C5H5-", "C6H6", "C7H7+",
    "C8H8-2", "SF6", "C60", "13C60",
];

fn ring(n: u32, radius: f64, z: f64) -> Vec<[f64; 3]> {
    (0..n)
        .map(|k| {
            let th = std::f64::consts::FRAC_PI_2 + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            [radius * th.cos(), radius * th.sin(), z]
        })
        .collect()
}

fn orbit(element: &str, spin_two: u32, coords: Vec<[f64; 3]>) -> Orbit {
    Orbit { element: element.into(), spin_two, coords }
}

fn spectator(element: &str, spin_two: u32) -> Spectator {
    Spectator { element: element.into(), spin_two }
}

/// Free icosahedral orbit of the truncated-icosahedron vertex.
fn c60_coords() -> Result<Vec<[f64; 3]>, Error> {
    let group = build_group(GroupName::I)?;
    let a = [1.0, 0.0, GOLDEN];
    let b = [GOLDEN, 1.0, 0.0];
    let p = [
        a[0] + (b[0] - a[0]) / 3.0,
        a[1] + (b[1] - a[1]) / 3.0,
        a[2] + (b[2] - a[2]) / 3.0,
    ];
    let pts: Vec<[f64; 3]> = group.elements.iter().map(|g| g.apply(p)).collect();
    // The orbit must be free (60 distinct points).
    for i in 0..pts.len() {
        for j in 0..i {
            let d2: f64 = (0..3).map(|c| (pts[i][c] - pts[j][c]).powi(2)).sum();
            if d2 < 1e-12 {
                return Err(Error::Internal("C60 orbit is not free".into()));
            }
        }
    }
    Ok(pts)
}

/// Look up a molecule preset by name.
pub fn preset(name: &str) -> Result<MoleculePreset, Error> {
    let (group, orbits, spectators): (GroupSpec, Vec<Orbit>, Vec<Spectator>) = match name {
        // Continuous-group diatomics: handled by closed forms downstream;
        // coordinates put nuclei on the z axis.
        "HCl" => (
            GroupSpec::Continuous(ContinuousGroup::Cinf),
            vec![
                orbit("H", 1, vec![[0.0, 0.0, 1.0]]),
                orbit("Cl", 3, vec![[0.0, 0.0, -1.0]]),
            ],
            vec![],
        ),
        "S2" => (
            GroupSpec::Continuous(ContinuousGroup::Dinf),
            vec![orbit("S", 0, vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])],
            vec![],
        ),
        "H2" => (
            GroupSpec::Continuous(ContinuousGroup::Dinf),
            vec![orbit("H", 1, vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])],
            vec![],
        ),
        "D2" => (
            GroupSpec::Continuous(ContinuousGroup::Dinf),
            vec![orbit("D", 2, vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])],
            vec![],
        ),
        "H2O" => {
            let s = 1.0 / 2.0f64.sqrt();
            (
                GroupSpec::Finite(GroupName::C(2)),
                vec![orbit("H", 1, vec![[s, 0.0, -s], [-s, 0.0, -s]])],
                vec![spectator("O", 0)],
            )
        }
        "NH3" => (
            GroupSpec::Finite(GroupName::C(3)),
            vec![orbit("H", 1, ring(3, 0.94, -0.38))],
            vec![spectator("N", 2)],
        ),
        "SO3" => (
            GroupSpec::Finite(GroupName::D(3)),
            vec![orbit("O", 0, ring(3, 1.0, 0.0))],
            vec![spectator("S", 0)],
        ),
        "BF3" => (
            GroupSpec::Finite(GroupName::D(3)),
            vec![orbit("F", 1, ring(3, 1.0, 0.0))],
            vec![spectator("B", 3)],
        ),
        "CH4" => {
            let s = 1.0 / 3.0f64.sqrt();
            (
                GroupSpec::Finite(GroupName::T),
                vec![orbit(
                    "H",
                    1,
                    vec![[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]],
                )],
                vec![spectator("C", 0)],
            )
        }
        "XeF4" => (
            GroupSpec::Finite(GroupName::D(4)),
            vec![orbit("F", 1, ring(4, 1.0, 0.0))],
            vec![spectator("Xe", 0)],
        ),
        "C5H5-" => (
            GroupSpec::Finite(GroupName::D(5)),
            vec![orbit("C", 0, ring(5, 0.7, 0.0)), orbit("H", 1, ring(5, 1.2, 0.0))],
            vec![],
        ),
        "C6H6" => (
            GroupSpec::Finite(GroupName::D(6)),
            vec![orbit("C", 0, ring(6, 0.7, 0.0)), orbit("H", 1, ring(6, 1.2, 0.0))],
            vec![],
        ),
        "C7H7+" => (
            GroupSpec::Finite(GroupName::D(7)),
            vec![orbit("C", 0, ring(7, 0.7, 0.0)), orbit("H", 1, ring(7, 1.2, 0.0))],
            vec![],
        ),
        "C8H8-2" => (
            GroupSpec::Finite(GroupName::D(8)),
            vec![orbit("C", 0, ring(8, 0.7, 0.0)), orbit("H", 1, ring(8, 1.2, 0.0))],
            vec![],
        ),
        "SF6" => (
            GroupSpec::Finite(GroupName::O),
            vec![orbit(
                "F",
                1,
                vec![
                    [1.0, 0.0, 0.0],
                    [-1.0, 0.0, 0.0],
                    [0.0, 1.0, 0.0],
                    [0.0, -1.0, 0.0],
                    [0.0, 0.0, 1.0],
                    [0.0, 0.0, -1.0],
                ],
            )],
            vec![spectator("S", 0)],
        ),
        "C60" => (
            GroupSpec::Finite(GroupName::I),
            vec![orbit("C", 0, c60_coords()?)],
            vec![],
        ),
        "13C60" => (
            GroupSpec::Finite(GroupName::I),
            vec![orbit("13C", 1, c60_coords()?)],
            vec![],
        ),
        _ => return Err(Error::Molecule(name.to_string())),
    };
    Ok(MoleculePreset { name: name.to_string(), group, orbits, spectators })
}

/// The permutation each group element induces on each orbit of identical
/// nuclei: `perms[orbit][g][i] = j` when `g` carries nucleus `i` to the
/// reference position of nucleus `j`.
#[derive(Debug, Clone)]
pub struct PermAction {
    pub perms: Vec<Vec<Vec<usize>>>,
}

impl PermAction {
    /// Sign of the permutation of `orbit` under element `g`.
    pub fn sign(&self, orbit: usize, g: usize) -> i64 {
        perm_sign(&self.perms[orbit][g])
    }

    /// Number of cycles (including fixed points) of the permutation of
    /// `orbit` under element `g`.
    pub fn cycles(&self, orbit: usize, g: usize) -> usize {
        let p = &self.perms[orbit][g];
        let mut seen = vec![false; p.len()];
        let mut count = 0;
        for start in 0..p.len() {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = p[i];
            }
        }
        count
    }
}

pub fn perm_sign(p: &[usize]) -> i64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1i64;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Match rotated orbit coordinates against the reference coordinates.
pub fn perm_action_from_geometry(
    group: &FiniteGroup,
    preset: &MoleculePreset,
) -> Result<PermAction, Error> {
    let mut perms = Vec::with_capacity(preset.orbits.len());
    for orbit in &preset.orbits {
        let mut per_element = Vec::with_capacity(group.order());
        for (gi, g) in group.elements.iter().enumerate() {
            let perm = match_rotation(g, &orbit.coords)?;
            if perm.is_none() {
                return Err(Error::Geometry(format!(
                    "{}: element {gi} of {} does not permute the {} orbit",
                    preset.name, group.name, orbit.element
                )));
            }
            per_element.push(perm.unwrap());
        }
        perms.push(per_element);
    }
    let action = PermAction { perms };
    // Homomorphism check on the multiplication table: the permutation of a
    // product is the composition of the permutations.
    for (oi, _) in preset.orbits.iter().enumerate() {
        for a in 0..group.order() {
            for b in 0..group.order() {
                let ab = group.mult[a][b];
                let pa = &action.perms[oi][a];
                let pb = &action.perms[oi][b];
                let pab = &action.perms[oi][ab];
                for i in 0..pa.len() {
                    if pa[pb[i]] != pab[i] {
                        return Err(Error::Geometry(format!(
                            "{}: orbit {oi} permutations are not a homomorphism",
                            preset.name
                        )));
                    }
                }
            }
        }
    }
    Ok(action)
}

fn match_rotation(g: &Rotation, coords: &[[f64; 3]]) -> Result<Option<Vec<usize>>, Error> {
    let n = coords.len();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for (i, &x) in coords.iter().enumerate() {
        let y = g.apply(x);
        let mut found = None;
        for (j, &r) in coords.iter().enumerate() {
            let d2: f64 = (0..3).map(|c| (y[c] - r[c]).powi(2)).sum();
            if d2 < 1e-12 {
                found = Some(j);
                break;
            }
        }
        match found {
            Some(j) if !used[j] => {
                used[j] = true;
                perm[i] = j;
            }
            _ => return Ok(None),
        }
    }
    Ok(Some(perm))
}
