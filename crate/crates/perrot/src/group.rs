//! Finite and continuous rigid-body symmetry groups: the subgroups of SO(3)
//! admitting molecular realizations (C_N, D_N, T, O, I and the continuous
//! C_inf, D_inf), built under documented canonical embeddings.
//!
//! Canonical embeddings:
//! - `C_N`, `D_N`: rotation axis along z; the fiducial dihedral flip is the
//!   pi-rotation about the y axis; the remaining flips are
//!   `f_k = zrot(2 pi k / N) . f_0`.
//! - `T` sits inside `O` in the standard cube frame (4-fold axes along the
//!   coordinate axes, 3-fold axes along the body diagonals).
//! - `I` uses the icosahedron with vertices at the cyclic permutations of
//!   `(+-1, 0, +-phi)`, which puts a five-fold axis `(1, 0, phi)` in the
//!   xz-plane and two-fold axes along the coordinate axes.
//!
//! Elements are matched to [`Rotation`]s with tolerance `1e-9` when building
//! the multiplication table; everything downstream is exact index arithmetic.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;

use crate::rotation::Rotation;
use crate::Error;

/// Golden ratio, exact to double precision.
pub(crate) const GOLDEN: f64 = 1.618033988749894848204586834365638118;

/// Name of a finite symmetry group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupName {
    C(u32),
    D(u32),
    T,
    O,
    I,
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupName::C(n) => write!(f, "C{n}"),
            GroupName::D(n) => write!(f, "D{n}"),
            GroupName::T => write!(f, "T"),
            GroupName::O => write!(f, "O"),
            GroupName::I => write!(f, "I"),
        }
    }
}

/// A continuous symmetry group (closed-form treatment; no element tables).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContinuousGroup {
    Cinf,
    Dinf,
}

impl fmt::Display for ContinuousGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContinuousGroup::Cinf => write!(f, "Cinf"),
            ContinuousGroup::Dinf => write!(f, "Dinf"),
        }
    }
}

/// Irreps of the continuous groups, with closed-form branching into `D^l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContinuousIrrep {
    /// C_inf irrep `omega -> e^{i lambda omega}`; `lambda = 0` is the trivial "a".
    CinfLambda(i64),
    /// D_inf trivial irrep (even-l branch).
    DinfA1,
    /// D_inf sign irrep (odd-l branch).
    DinfA2,
    /// D_inf two-dimensional irrep with weight `lambda >= 1`.
    DinfE(u32),
}

impl ContinuousIrrep {
    /// Multiplicity of the irrep in `D^{l*}` (omega-selection rules).
    pub fn multiplicity(&self, ell: usize) -> usize {
        match self {
            ContinuousIrrep::CinfLambda(lambda) => {
                usize::from(lambda.unsigned_abs() as usize <= ell)
            }
            ContinuousIrrep::DinfA1 => usize::from(ell % 2 == 0),
            ContinuousIrrep::DinfA2 => usize::from(ell % 2 == 1),
            ContinuousIrrep::DinfE(lambda) => usize::from(*lambda as usize <= ell),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ContinuousIrrep::CinfLambda(0) => "a".into(),
            ContinuousIrrep::CinfLambda(l) => format!("lambda{l}"),
            ContinuousIrrep::DinfA1 => "a1".into(),
            ContinuousIrrep::DinfA2 => "a2".into(),
            ContinuousIrrep::DinfE(l) => format!("e{l}"),
        }
    }
}

/// A group selector: finite catalog entry or continuous group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupSpec {
    Finite(GroupName),
    Continuous(ContinuousGroup),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Finite(n) => n.fmt(f),
            GroupSpec::Continuous(c) => c.fmt(f),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Grammar: `C<N>`, `D<N>`, `T`, `O`, `I`, `Cinf`, `Dinf`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::GroupName(s.to_string());
        match s {
            "T" => return Ok(GroupSpec::Finite(GroupName::T)),
            "O" => return Ok(GroupSpec::Finite(GroupName::O)),
            "I" => return Ok(GroupSpec::Finite(GroupName::I)),
            "Cinf" => return Ok(GroupSpec::Continuous(ContinuousGroup::Cinf)),
            "Dinf" => return Ok(GroupSpec::Continuous(ContinuousGroup::Dinf)),
            _ => {}
        }
        let (head, tail) = s.split_at(1.min(s.len()));
        let n: u32 = tail.parse().map_err(|_| bad())?;
        match head {
            "C" if n >= 1 => Ok(GroupSpec::Finite(GroupName::C(n))),
            "D" if n >= 2 => Ok(GroupSpec::Finite(GroupName::D(n))),
            _ => Err(bad()),
        }
    }
}

/// A finite subgroup of SO(3) with exact index-based structure tables.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    pub name: GroupName,
    /// Element list; index 0 is the identity.
    pub elements: Vec<Rotation>,
    /// `mult[i][j]` = index of `elements[i] * elements[j]`.
    pub mult: Vec<Vec<usize>>,
    /// Index of each element's inverse.
    pub inv: Vec<usize>,
    /// Conjugacy classes as sorted element-index lists; class 0 = {identity}.
    pub classes: Vec<Vec<usize>>,
    /// Class index of each element.
    pub class_of: Vec<usize>,
    /// Order of each element.
    pub orders: Vec<u32>,
    /// Rotation angle of each element as an exact fraction of a full turn,
    /// in `[0, 1/2]`.
    pub angle_turns: Vec<Ratio<i64>>,
    /// Cyclotomic order for exact character work: lcm(element orders, 4).
    pub cyclo_order: u32,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Index of the element approximately equal to `r`, if any.
    pub fn find(&self, r: &Rotation) -> Option<usize> {
        self.elements.iter().position(|e| e.approx_eq(r, 1e-9))
    }
}

/// Build a catalog group under its canonical embedding.
pub fn build_group(name: GroupName) -> Result<FiniteGroup, Error> {
    let elements = match name {
        GroupName::C(n) => {
            if n == 0 {
                return Err(Error::GroupName("C0".into()));
            }
            (0..n)
                .map(|k| Rotation::from_axis_angle([0.0, 0.0, 1.0], 2.0 * PI * k as f64 / n as f64))
                .collect::<Vec<_>>()
        }
        GroupName::D(n) => {
            if n < 2 {
                return Err(Error::GroupName(format!("D{n}")));
            }
            let flip0 = Rotation::from_axis_angle([0.0, 1.0, 0.0], PI);
            let mut els: Vec<Rotation> = (0..n)
                .map(|k| Rotation::from_axis_angle([0.0, 0.0, 1.0], 2.0 * PI * k as f64 / n as f64))
                .collect();
            let flips: Vec<Rotation> = (0..n).map(|k| els[k as usize].compose(&flip0)).collect();
            els.extend(flips);
            els
        }
        GroupName::T => close_generators(&[
            Rotation::from_axis_angle([0.0, 0.0, 1.0], PI),
            Rotation::from_axis_angle([1.0, 1.0, 1.0], 2.0 * PI / 3.0),
        ]),
        GroupName::O => close_generators(&[
            Rotation::from_axis_angle([0.0, 0.0, 1.0], PI / 2.0),
            Rotation::from_axis_angle([1.0, 1.0, 1.0], 2.0 * PI / 3.0),
        ]),
        GroupName::I => close_generators(&[
            Rotation::from_axis_angle([0.0, 0.0, 1.0], PI),
            Rotation::from_axis_angle([1.0, 0.0, GOLDEN], 2.0 * PI / 5.0),
        ]),
    };

    let expected = match name {
        GroupName::C(n) => n as usize,
        GroupName::D(n) => 2 * n as usize,
        GroupName::T => 12,
        GroupName::O => 24,
        GroupName::I => 60,
    };
    if elements.len() != expected {
        return Err(Error::Internal(format!(
            "group {name}: closure produced {} elements, expected {expected}",
            elements.len()
        )));
    }

    let n = elements.len();
    let mut mult = vec![vec![usize::MAX; n]; n];
    for i in 0..n {
        for j in 0..n {
            let prod = elements[i].compose(&elements[j]);
            let k = elements
                .iter()
                .position(|e| e.approx_eq(&prod, 1e-9))
                .ok_or_else(|| Error::Internal(format!("group {name} not closed at ({i},{j})")))?;
            mult[i][j] = k;
        }
    }

    let inv: Vec<usize> = (0..n)
        .map(|i| (0..n).find(|&j| mult[i][j] == 0).expect("every element has an inverse"))
        .collect();

    // Conjugacy classes by index arithmetic.
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if class_of[i] != usize::MAX {
            continue;
        }
        let cid = classes.len();
        let mut members: Vec<usize> = (0..n).map(|g| mult[mult[g][i]][inv[g]]).collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            class_of[m] = cid;
        }
        classes.push(members);
    }

    let orders: Vec<u32> = (0..n)
        .map(|i| {
            let mut p = i;
            let mut o = 1u32;
            while p != 0 {
                p = mult[p][i];
                o += 1;
            }
            o
        })
        .collect();

    // Snap each rotation angle to the exact fraction j / order of a turn.
    let angle_turns: Vec<Ratio<i64>> = (0..n)
        .map(|i| {
            let q = orders[i] as i64;
            let t = elements[i].angle() / (2.0 * PI);
            let j = (t * q as f64).round() as i64;
            debug_assert!((t - j as f64 / q as f64).abs() < 1e-9, "angle not a multiple of turn/order");
            Ratio::new(j, q)
        })
        .collect();

    let cyclo_order =
        orders.iter().fold(4u32, |acc, &o| (acc as u64).lcm(&(o as u64)) as u32);

    Ok(FiniteGroup {
        name,
        elements,
        mult,
        inv,
        classes,
        class_of,
        orders,
        angle_turns,
        cyclo_order,
    })
}

/// Close a generator set under multiplication; returns elements sorted
/// deterministically (identity first, then by rotation angle, then by
/// sign-canonical quaternion components).
fn close_generators(gens: &[Rotation]) -> Vec<Rotation> {
    let mut els = vec![Rotation::identity()];
    let mut frontier: Vec<Rotation> = gens.to_vec();
    while let Some(g) = frontier.pop() {
        if els.iter().any(|e| e.approx_eq(&g, 1e-9)) {
            continue;
        }
        els.push(g);
        let snapshot = els.clone();
        for e in &snapshot {
            frontier.push(e.compose(&g));
            frontier.push(g.compose(e));
        }
    }
    els.sort_by(|a, b| {
        let ka = sort_key(a);
        let kb = sort_key(b);
        for (x, y) in ka.iter().zip(&kb) {
            if (x - y).abs() > 1e-7 {
                return x.partial_cmp(y).unwrap();
            }
        }
        std::cmp::Ordering::Equal
    });
    els
}

fn sort_key(r: &Rotation) -> [f64; 5] {
    let q = r.canonical_quat();
    [r.angle(), -q[0], -q[1], -q[2], -q[3]]
}

/// Isomorphism-class label for quotients of catalog groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientLabel {
    C(u32),
    D(u32),
    T,
    O,
    I,
}

impl fmt::Display for QuotientLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientLabel::C(n) => write!(f, "C{n}"),
            QuotientLabel::D(n) => write!(f, "D{n}"),
            QuotientLabel::T => write!(f, "T"),
            QuotientLabel::O => write!(f, "O"),
            QuotientLabel::I => write!(f, "I"),
        }
    }
}

/// Order + abelianness + element-order multiset: enough to separate the
/// SO(3)-subgroup catalog members from one another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupFingerprint {
    pub order: usize,
    pub abelian: bool,
    /// Sorted multiset of element orders.
    pub element_orders: Vec<u32>,
}

/// Fingerprint of an abstract multiplication table (identity at index 0).
pub fn fingerprint(mult: &[Vec<usize>]) -> GroupFingerprint {
    let n = mult.len();
    let abelian = (0..n).all(|i| (0..n).all(|j| mult[i][j] == mult[j][i]));
    let mut element_orders: Vec<u32> = (0..n)
        .map(|i| {
            let mut p = i;
            let mut o = 1u32;
            while p != 0 {
                p = mult[p][i];
                o += 1;
            }
            o
        })
        .collect();
    element_orders.sort_unstable();
    GroupFingerprint { order: n, abelian, element_orders }
}

/// Match a fingerprint against the catalog.
pub fn classify_fingerprint(fp: &GroupFingerprint) -> Option<QuotientLabel> {
    let n = fp.order;
    // Cyclic: abelian with an element of full order.
    if fp.abelian && fp.element_orders.iter().any(|&o| o as usize == n) {
        return Some(QuotientLabel::C(n as u32));
    }
    // Dihedral D_M (M >= 2), including the abelian D2.
    if n % 2 == 0 {
        let m = (n / 2) as u32;
        if m >= 2 {
            let mut expected: Vec<u32> =
                (0..m).map(|k| m / m.gcd(&k.max(1))).collect::<Vec<_>>();
            expected[0] = 1; // the identity rotation
            expected.extend(std::iter::repeat(2).take(m as usize));
            expected.sort_unstable();
            if expected == fp.element_orders && (fp.abelian == (m <= 2)) {
                return Some(QuotientLabel::D(m));
            }
        }
    }
    let t_orders: Vec<u32> = [vec![1u32], vec![2; 3], vec![3; 8]].concat();
    let o_orders: Vec<u32> = [vec![1u32], vec![2; 9], vec![3; 8], vec![4; 6]].concat();
    let i_orders: Vec<u32> = [vec![1u32], vec![2; 15], vec![3; 20], vec![5; 24]].concat();
    let sorted = |mut v: Vec<u32>| {
        v.sort_unstable();
        v
    };
    if !fp.abelian {
        if n == 12 && fp.element_orders == sorted(t_orders) {
            return Some(QuotientLabel::T);
        }
        if n == 24 && fp.element_orders == sorted(o_orders) {
            return Some(QuotientLabel::O);
        }
        if n == 60 && fp.element_orders == sorted(i_orders) {
            return Some(QuotientLabel::I);
        }
    }
    None
}

/// Quotient multiplication table by a normal subgroup, for any abstract
/// finite multiplication table with identity at index 0.
///
/// Returns `(coset representative per element, quotient table)` where coset
/// representatives are indexed densely and coset 0 is the kernel.
pub fn quotient_table(
    mult: &[Vec<usize>],
    kernel: &[usize],
) -> Result<(Vec<usize>, Vec<Vec<usize>>), Error> {
    let n = mult.len();
    let mut in_kernel = vec![false; n];
    for &k in kernel {
        in_kernel[k] = true;
    }
    if !in_kernel[0] {
        return Err(Error::KernelNotNormal("kernel must contain the identity".into()));
    }
    // Closure + normality check.
    let inv: Vec<usize> =
        (0..n).map(|i| (0..n).find(|&j| mult[i][j] == 0).expect("inverse exists")).collect();
    for &a in kernel {
        for &b in kernel {
            if !in_kernel[mult[a][b]] {
                return Err(Error::KernelNotNormal("kernel not closed".into()));
            }
        }
        for g in 0..n {
            if !in_kernel[mult[mult[g][a]][inv[g]]] {
                return Err(Error::KernelNotNormal("kernel not normal".into()));
            }
        }
    }
    // Cosets: label each element by the minimal member of its coset g*K.
    let mut coset_min = vec![usize::MAX; n];
    for g in 0..n {
        let mut mn = usize::MAX;
        for &k in kernel {
            mn = mn.min(mult[g][k]);
        }
        coset_min[g] = mn;
    }
    let mut reps: Vec<usize> = coset_min.clone();
    reps.sort_unstable();
    reps.dedup();
    // Force the kernel's coset to quotient index 0 (it contains element 0,
    // whose coset minimum is the overall minimum in the kernel coset; since
    // identity's coset min is min(kernel) and reps are sorted, the kernel
    // coset is rep[0] whenever 0 is in the kernel -- which it is).
    let coset_index = |g: usize| reps.binary_search(&coset_min[g]).unwrap();
    let q = reps.len();
    let mut qmult = vec![vec![0usize; q]; q];
    for (qi, &ri) in reps.iter().enumerate() {
        for (qj, &rj) in reps.iter().enumerate() {
            qmult[qi][qj] = coset_index(mult[ri][rj]);
        }
    }
    Ok((coset_min.iter().map(|&m| reps.binary_search(&m).unwrap()).collect(), qmult))
}

/// Identify `group / kernel` among the catalog labels.
pub fn subgroup_quotient(group: &FiniteGroup, kernel: &[usize]) -> Result<QuotientLabel, Error> {
    let (_, qmult) = quotient_table(&group.mult, kernel)?;
    let fp = fingerprint(&qmult);
    classify_fingerprint(&fp).ok_or_else(|| {
        Error::Internal(format!(
            "quotient of {} (order {}) not in the SO(3)-subgroup catalog",
            group.name, fp.order
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axioms(g: &FiniteGroup) {
        let n = g.order();
        // Identity and inverses.
        for i in 0..n {
            assert_eq!(g.mult[0][i], i);
            assert_eq!(g.mult[i][0], i);
            assert_eq!(g.mult[i][g.inv[i]], 0);
        }
        // Associativity (exhaustive on the index table).
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    assert_eq!(g.mult[g.mult[a][b]][c], g.mult[a][g.mult[b][c]]);
                }
            }
        }
    }

    #[test]
    fn cyclic_and_dihedral_sizes() {
        let c3 = build_group(GroupName::C(3)).unwrap();
        assert_eq!(c3.order(), 3);
        assert_eq!(c3.classes.len(), 3);
        axioms(&c3);

        let d3 = build_group(GroupName::D(3)).unwrap();
        assert_eq!(d3.order(), 6);
        // Classes: {e}, {two threefold rotations}, {three flips}.
        let mut sizes: Vec<usize> = d3.classes.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        axioms(&d3);
    }

    #[test]
    fn polyhedral_groups() {
        let t = build_group(GroupName::T).unwrap();
        assert_eq!(t.order(), 12);
        assert_eq!(t.classes.len(), 4);
        axioms(&t);

        let o = build_group(GroupName::O).unwrap();
        assert_eq!(o.order(), 24);
        assert_eq!(o.classes.len(), 5);
        axioms(&o);

        let i = build_group(GroupName::I).unwrap();
        assert_eq!(i.order(), 60);
        assert_eq!(i.classes.len(), 5);
        axioms(&i);
        // Element-order census of I: 1, 15 x 2, 20 x 3, 24 x 5.
        let mut census = std::collections::BTreeMap::new();
        for &o in &i.orders {
            *census.entry(o).or_insert(0usize) += 1;
        }
        assert_eq!(census.get(&1), Some(&1));
        assert_eq!(census.get(&2), Some(&15));
        assert_eq!(census.get(&3), Some(&20));
        assert_eq!(census.get(&5), Some(&24));
    }

    #[test]
    fn angle_fractions_snap() {
        let d4 = build_group(GroupName::D(4)).unwrap();
        for i in 0..d4.order() {
            let t = d4.angle_turns[i];
            let angle = 2.0 * PI * (*t.numer() as f64) / (*t.denom() as f64);
            assert!((angle - d4.elements[i].angle()).abs() < 1e-9);
        }
    }

    #[test]
    fn quotient_labels() {
        // C6 / C3 = C2.
        let c6 = build_group(GroupName::C(6)).unwrap();
        let c3_in_c6: Vec<usize> =
            (0..c6.order()).filter(|&i| c6.orders[i] == 1 || c6.orders[i] == 3).collect();
        assert_eq!(subgroup_quotient(&c6, &c3_in_c6).unwrap(), QuotientLabel::C(2));

        // D6 / C_N(z-rotations) = C2 (the D_inf / C_inf proxy).
        let d6 = build_group(GroupName::D(6)).unwrap();
        let rotations: Vec<usize> = (0..d6.order())
            .filter(|&i| {
                let ax = d6.elements[i].axis();
                ax.is_none() || ax.unwrap()[2].abs() > 0.9
            })
            .collect();
        assert_eq!(rotations.len(), 6);
        assert_eq!(subgroup_quotient(&d6, &rotations).unwrap(), QuotientLabel::C(2));

        // I / {e} = I.
        let i = build_group(GroupName::I).unwrap();
        assert_eq!(subgroup_quotient(&i, &[0]).unwrap(), QuotientLabel::I);

        // Non-normal kernel rejected: a single flip in D3.
        let d3 = build_group(GroupName::D(3)).unwrap();
        let flip = (1..d3.order()).find(|&i| d3.orders[i] == 2).unwrap();
        assert!(subgroup_quotient(&d3, &[0, flip]).is_err());
    }

    #[test]
    fn group_spec_parsing() {
        assert_eq!("C3".parse::<GroupSpec>().unwrap(), GroupSpec::Finite(GroupName::C(3)));
        assert_eq!("D12".parse::<GroupSpec>().unwrap(), GroupSpec::Finite(GroupName::D(12)));
        assert_eq!("I".parse::<GroupSpec>().unwrap(), GroupSpec::Finite(GroupName::I));
        assert_eq!(
            "Dinf".parse::<GroupSpec>().unwrap(),
            GroupSpec::Continuous(ContinuousGroup::Dinf)
        );
        assert!("C0".parse::<GroupSpec>().is_err());
        assert!("D1".parse::<GroupSpec>().is_err());
        assert!("K5".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn continuous_branching_rules() {
        assert_eq!(ContinuousIrrep::DinfA1.multiplicity(0), 1);
        assert_eq!(ContinuousIrrep::DinfA1.multiplicity(3), 0);
        assert_eq!(ContinuousIrrep::DinfA2.multiplicity(3), 1);
        assert_eq!(ContinuousIrrep::DinfE(2).multiplicity(1), 0);
        assert_eq!(ContinuousIrrep::DinfE(2).multiplicity(5), 1);
        assert_eq!(ContinuousIrrep::CinfLambda(-4).multiplicity(3), 0);
        assert_eq!(ContinuousIrrep::CinfLambda(-4).multiplicity(4), 1);
    }
}
