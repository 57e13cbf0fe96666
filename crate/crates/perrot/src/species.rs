//! Nuclear-spin statistics: the spin-statistics irrep, exact statistical
//! weights, species enumeration with maximally entangled coupling states,
//! and entangled-state fractions.

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclotomic::Cyclotomic;
use crate::group::{ContinuousGroup, FiniteGroup, GroupSpec};
use crate::irreps::Irrep;
use crate::isotypic::multiplicity;
use crate::molecule::{MoleculePreset, PermAction};
use crate::Error;

/// One admissible rotation-nuclear species `Gamma_rot (x) Gamma_nuc -> sigma`.
#[derive(Debug, Clone)]
pub struct SpeciesDescriptor {
    pub rot_label: String,
    pub nuc_label: String,
    pub sigma_label: String,
    /// Common dimension of the rotational and nuclear irreps.
    pub d: usize,
    /// Nuclear statistical weight m_nuc (multiplicity of Gamma_nuc in the
    /// permuted-orbit spin space).
    pub weight: BigUint,
    /// Coupling coefficients over `(nu_rot, nu_nuc)` pairs, row-major
    /// `nu_rot * d + nu_nuc`, normalized, first nonzero component positive.
    pub coupling: Vec<Complex64>,
    /// Display label: the rotational label, starred when sigma is nontrivial.
    pub display: String,
}

/// Species enumeration output: realized species plus missing levels
/// (admissible pairs whose nuclear weight vanishes).
#[derive(Debug, Clone)]
pub struct SpeciesReport {
    pub sigma_label: String,
    pub species: Vec<SpeciesDescriptor>,
    pub missing: Vec<SpeciesDescriptor>,
    /// Spin-space factor contributed by spectator nuclei.
    pub spectator_factor: BigUint,
}

/// The 1D spin-statistics irrep: `sigma(g) = prod_orbits sign(perm)^(2s)`.
pub fn spin_statistics_irrep<'a>(
    group: &FiniteGroup,
    reps: &'a [Irrep],
    action: &PermAction,
    preset: &MoleculePreset,
) -> Result<&'a Irrep, Error> {
    let values: Vec<i64> = (0..group.order())
        .map(|g| {
            (0..preset.orbits.len())
                .map(|o| {
                    if preset.orbits[o].spin_two % 2 == 1 {
                        action.sign(o, g)
                    } else {
                        1
                    }
                })
                .product()
        })
        .collect();
    reps.iter()
        .filter(|r| r.dim == 1)
        .find(|r| {
            (0..group.order()).all(|g| {
                let want = Cyclotomic::from_integer(1, values[g]);
                (r.characters[g].clone() - want).is_zero()
            })
        })
        .ok_or_else(|| {
            Error::Internal(format!(
                "{}: spin-statistics signs do not form an irrep of {}",
                preset.name, group.name
            ))
        })
}

/// Exact statistical weights: multiplicity of each irrep in the permuted
/// spin space, `m(Lambda) = (1/|G|) sum_g conj(chi_Lambda(g))
/// prod_orbits (2s+1)^(cycles)`.
pub fn nuclear_decomposition(
    group: &FiniteGroup,
    reps: &[Irrep],
    action: &PermAction,
    preset: &MoleculePreset,
) -> Result<Vec<BigUint>, Error> {
    // Permutation-representation character per element (a huge integer).
    let chi_perm: Vec<BigInt> = (0..group.order())
        .map(|g| {
            (0..preset.orbits.len())
                .map(|o| {
                    BigInt::from(preset.orbits[o].spin_dim())
                        .pow(action.cycles(o, g) as u32)
                })
                .product()
        })
        .collect();
    let order = BigRational::from_integer(group.order().into());
    reps.iter()
        .map(|rep| {
            let mut acc = Cyclotomic::zero(1);
            for g in 0..group.order() {
                acc = acc
                    + rep.characters[g]
                        .conj()
                        .scale(&BigRational::from_integer(chi_perm[g].clone()));
            }
            let r = acc
                .as_rational()
                .ok_or_else(|| {
                    Error::Internal(format!("non-rational weight for {}", rep.label))
                })?
                / &order;
            if !r.denom().is_one() || r.numer().is_negative() {
                return Err(Error::Internal(format!(
                    "weight of {} is not a nonnegative integer: {r}",
                    rep.label
                )));
            }
            Ok(r.numer().to_biguint().expect("nonnegative"))
        })
        .collect()
}

/// The maximally entangled coupling state spanning the rank-1 projector
/// `Pi = (1/|G|) sum_g conj(sigma(g)) (Gamma (x) tau)(g)`.
pub fn coupling_state(
    group: &FiniteGroup,
    gamma: &Irrep,
    tau: &Irrep,
    sigma: &Irrep,
) -> Result<Vec<Complex64>, Error> {
    if gamma.dim != tau.dim {
        return Err(Error::Domain(format!(
            "coupling requires equal dimensions, got {} and {}",
            gamma.dim, tau.dim
        )));
    }
    let d = gamma.dim;
    let n = d * d;
    let mut pi: DMatrix<Complex64> = DMatrix::zeros(n, n);
    for g in 0..group.order() {
        let s = sigma.characters[g].to_c64().conj();
        for r1 in 0..d {
            for c1 in 0..d {
                let a = gamma.entry(g, r1, c1).to_c64();
                for r2 in 0..d {
                    for c2 in 0..d {
                        let b = tau.entry(g, r2, c2).to_c64();
                        pi[(r1 * d + r2, c1 * d + c2)] += s * a * b;
                    }
                }
            }
        }
    }
    pi /= Complex64::new(group.order() as f64, 0.0);
    // Rank-1 check: Pi is a projector with unit trace.
    let tr = pi.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
        return Err(Error::Internal(format!(
            "coupling projector for ({}, {}, {}) has rank trace {tr}",
            gamma.label, tau.label, sigma.label
        )));
    }
    let idem = (&pi * &pi - &pi).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if idem > 1e-9 {
        return Err(Error::Internal("coupling projector is not idempotent".into()));
    }
    // Extract the spanning vector: the largest column, normalized; fix the
    // phase by making the first nonzero component real positive.
    let col = (0..n)
        .max_by(|&a, &b| {
            pi.column(a).norm().partial_cmp(&pi.column(b).norm()).unwrap()
        })
        .unwrap();
    let mut v: Vec<Complex64> = pi.column(col).iter().copied().collect();
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    let first = *v.iter().find(|z| z.norm() > 1e-9).expect("nonzero vector");
    let phase = first / first.norm();
    for z in &mut v {
        *z /= phase;
    }
    Ok(v)
}

/// The rotational irrep `Gamma` admissible with nuclear irrep `tau` under
/// spin statistics `sigma`: sigma appears in `Gamma (x) tau` iff
/// `Gamma = sigma (x) conj(tau)`, found by the exact character inner
/// product.
pub fn rotational_partner<'a>(
    group: &FiniteGroup,
    reps: &'a [Irrep],
    sigma: &Irrep,
    tau: &Irrep,
) -> Result<&'a Irrep, Error> {
    reps.iter()
        .find(|gm| {
            if gm.dim != tau.dim {
                return false;
            }
            let mut acc = Cyclotomic::zero(1);
            for g in 0..group.order() {
                acc = acc
                    + sigma.characters[g].conj()
                        * gm.characters[g].clone()
                        * tau.characters[g].clone();
            }
            acc.as_rational()
                .map(|r| r == BigRational::from_integer(group.order().into()))
                .unwrap_or(false)
        })
        .ok_or_else(|| {
            Error::Internal(format!("no rotational partner for nuclear irrep {}", tau.label))
        })
}

/// One row of the abstract species pattern for a group and a choice of
/// spin-statistics irrep: `(display, Gamma_rot, Gamma_nuc, sigma, d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpeciesPattern {
    pub display: String,
    pub rot_label: String,
    pub nuc_label: String,
    pub sigma_label: String,
    pub d: usize,
}

/// The molecule-independent species pattern: for every nuclear irrep, the
/// paired rotational irrep under the given 1D spin-statistics irrep.
pub fn species_pattern(
    group: &FiniteGroup,
    reps: &[Irrep],
    sigma_label: &str,
) -> Result<Vec<SpeciesPattern>, Error> {
    let sigma = reps
        .iter()
        .find(|r| r.label == sigma_label)
        .ok_or_else(|| Error::IrrepLabel {
            group: group.name.to_string(),
            label: sigma_label.to_string(),
        })?;
    if sigma.dim != 1 {
        return Err(Error::Domain(format!(
            "spin-statistics irrep must be one-dimensional, got {sigma_label}"
        )));
    }
    let sigma_trivial = sigma.label == reps[0].label;
    reps.iter()
        .map(|tau| {
            let gamma = rotational_partner(group, reps, sigma, tau)?;
            Ok(SpeciesPattern {
                display: if sigma_trivial {
                    gamma.label.clone()
                } else {
                    format!("{}*", gamma.label)
                },
                rot_label: gamma.label.clone(),
                nuc_label: tau.label.clone(),
                sigma_label: sigma.label.clone(),
                d: gamma.dim,
            })
        })
        .collect()
}

/// Enumerate all species for a finite-group molecule.
pub fn enumerate_species(
    group: &FiniteGroup,
    reps: &[Irrep],
    action: &PermAction,
    preset: &MoleculePreset,
) -> Result<SpeciesReport, Error> {
    let sigma = spin_statistics_irrep(group, reps, action, preset)?;
    let weights = nuclear_decomposition(group, reps, action, preset)?;
    let sigma_trivial = sigma.label == reps[0].label;

    let mut species = Vec::new();
    let mut missing = Vec::new();
    for (ti, tau) in reps.iter().enumerate() {
        let gamma = rotational_partner(group, reps, sigma, tau)?;
        let desc = SpeciesDescriptor {
            rot_label: gamma.label.clone(),
            nuc_label: tau.label.clone(),
            sigma_label: sigma.label.clone(),
            d: gamma.dim,
            weight: weights[ti].clone(),
            coupling: coupling_state(group, gamma, tau, sigma)?,
            display: if sigma_trivial {
                gamma.label.clone()
            } else {
                format!("{}*", gamma.label)
            },
        };
        if desc.weight.is_zero() {
            missing.push(desc);
        } else {
            species.push(desc);
        }
    }

    let spectator_factor = preset
        .spectators
        .iter()
        .map(|s| BigUint::from(s.spin_two as u64 + 1))
        .product();

    Ok(SpeciesReport { sigma_label: sigma.label.clone(), species, missing, spectator_factor })
}

/// Closed-form species for the continuous-group diatomics.
pub fn continuous_species(preset: &MoleculePreset) -> Result<SpeciesReport, Error> {
    let cg = match preset.group {
        GroupSpec::Continuous(c) => c,
        GroupSpec::Finite(_) => {
            return Err(Error::Domain("continuous_species requires a continuous group".into()))
        }
    };
    match cg {
        ContinuousGroup::Cinf => {
            // No permuted nuclei: single trivial species; every nucleus is a
            // spectator factor.
            let spectator_factor: BigUint = preset
                .orbits
                .iter()
                .flat_map(|o| o.coords.iter().map(|_| BigUint::from(o.spin_two as u64 + 1)))
                .chain(preset.spectators.iter().map(|s| BigUint::from(s.spin_two as u64 + 1)))
                .product();
            Ok(SpeciesReport {
                sigma_label: "a".into(),
                species: vec![SpeciesDescriptor {
                    rot_label: "a".into(),
                    nuc_label: "a".into(),
                    sigma_label: "a".into(),
                    d: 1,
                    weight: BigUint::one(),
                    coupling: vec![Complex64::new(1.0, 0.0)],
                    display: "a".into(),
                }],
                missing: vec![],
                spectator_factor,
            })
        }
        ContinuousGroup::Dinf => {
            let orbit = preset
                .orbits
                .iter()
                .find(|o| o.coords.len() == 2)
                .ok_or_else(|| Error::Domain("D_inf preset requires a swapped pair".into()))?;
            let n = orbit.spin_two as u64 + 1;
            let fermionic = orbit.spin_two % 2 == 1;
            let sigma = if fermionic { "a2" } else { "a1" };
            let sym = BigUint::from(n * (n + 1) / 2);
            let antisym = BigUint::from(n * (n - 1) / 2);
            // Pairings: sigma in Gamma (x) tau for 1D irreps means
            // tau = sigma (x) Gamma (a1 <-> a1, a2 <-> a2 when sigma = a1;
            // crossed when sigma = a2).
            let pairs: Vec<(&str, &str, BigUint)> = if fermionic {
                vec![("a1", "a2", antisym), ("a2", "a1", sym)]
            } else {
                vec![("a1", "a1", sym), ("a2", "a2", antisym)]
            };
            let star = if fermionic { "*" } else { "" };
            let mut species = Vec::new();
            let mut missing = Vec::new();
            for (rot, nuc, weight) in pairs {
                let desc = SpeciesDescriptor {
                    rot_label: rot.into(),
                    nuc_label: nuc.into(),
                    sigma_label: sigma.into(),
                    d: 1,
                    weight: weight.clone(),
                    coupling: vec![Complex64::new(1.0, 0.0)],
                    display: format!("{rot}{star}"),
                };
                if weight.is_zero() {
                    missing.push(desc);
                } else {
                    species.push(desc);
                }
            }
            let spectator_factor: BigUint =
                preset.spectators.iter().map(|s| BigUint::from(s.spin_two as u64 + 1)).product();
            Ok(SpeciesReport {
                sigma_label: sigma.into(),
                species,
                missing,
                spectator_factor,
            })
        }
    }
}

/// Entangled-state fraction with an angular-momentum cutoff:
/// `sum_{species, d>1} sum_{l<=lmax} mult_l(Gamma_nuc) m_nuc` over the same
/// sum without the `d > 1` restriction.
pub fn entangled_fraction_cutoff(
    group: &FiniteGroup,
    reps: &[Irrep],
    report: &SpeciesReport,
    ell_max: usize,
) -> Result<f64, Error> {
    let mut num = BigUint::zero();
    let mut den = BigUint::zero();
    for sp in &report.species {
        let tau = reps
            .iter()
            .find(|r| r.label == sp.nuc_label)
            .ok_or_else(|| Error::Internal("species nuclear irrep not found".into()))?;
        let mut msum = 0usize;
        for ell in 0..=ell_max {
            msum += multiplicity(group, tau, ell)?;
        }
        let contrib = sp.weight.clone() * BigUint::from(msum);
        if sp.d > 1 {
            num += contrib.clone();
        }
        den += contrib;
    }
    if den.is_zero() {
        return Err(Error::Domain("no states below the cutoff".into()));
    }
    let nf = num.to_f64().ok_or_else(|| Error::Internal("numerator overflow".into()))?;
    let df = den.to_f64().ok_or_else(|| Error::Internal("denominator overflow".into()))?;
    Ok(nf / df)
}

/// Exact infinite-cutoff entangled fraction:
/// `sum_{d>1} d m_nuc / sum d m_nuc`.
pub fn entangled_fraction_exact(report: &SpeciesReport) -> BigRational {
    let mut num = BigUint::zero();
    let mut den = BigUint::zero();
    for sp in &report.species {
        let contrib = sp.weight.clone() * BigUint::from(sp.d);
        if sp.d > 1 {
            num += contrib.clone();
        }
        den += contrib;
    }
    BigRational::new(
        BigInt::from_biguint(num_bigint::Sign::Plus, num),
        BigInt::from_biguint(num_bigint::Sign::Plus, den),
    )
}

/// Total permuted-orbit spin-space dimension (for completeness checks):
/// `prod_orbits (2s+1)^count`.
pub fn total_spin_dimension(preset: &MoleculePreset) -> BigUint {
    preset
        .orbits
        .iter()
        .map(|o| BigUint::from(o.spin_dim()).pow(o.coords.len() as u32))
        .product()
}

/// Coefficients of the entangled basis state `(1/sqrt d) sum_nu s_nu
/// |l_mk, nu>|nu, chi>` over `(nu_rot, nu_nuc)` pairs: simply the stored
/// coupling vector (the `l, m, kappa, chi` labels select which copy the
/// coefficients attach to and must be in range).
pub fn entangled_basis_state(
    group: &FiniteGroup,
    reps: &[Irrep],
    sp: &SpeciesDescriptor,
    ell: usize,
    m: i64,
    kappa: usize,
    chi: &BigUint,
) -> Result<Vec<Complex64>, Error> {
    if m.unsigned_abs() as usize > ell {
        return Err(Error::Domain(format!("|m| = {} exceeds l = {ell}", m.unsigned_abs())));
    }
    let gamma = reps
        .iter()
        .find(|r| r.label == sp.rot_label)
        .ok_or_else(|| Error::Internal("species rotational irrep not found".into()))?;
    let mult = multiplicity(group, gamma, ell)?;
    if kappa >= mult {
        return Err(Error::Domain(format!(
            "kappa = {kappa} out of range: mult({}, l={ell}) = {mult}",
            sp.rot_label
        )));
    }
    if chi >= &sp.weight {
        return Err(Error::Domain(format!("chi out of range: weight = {}", sp.weight)));
    }
    Ok(sp.coupling.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, GroupName};
    use crate::irreps::irreps;
    use crate::molecule::{perm_action_from_geometry, preset};

    fn finite_report(name: &str) -> (FiniteGroup, Vec<Irrep>, SpeciesReport) {
        let p = preset(name).unwrap();
        let gname = match p.group {
            GroupSpec::Finite(n) => n,
            _ => panic!("finite preset expected"),
        };
        let g = build_group(gname).unwrap();
        let reps = irreps(&g).unwrap();
        let action = perm_action_from_geometry(&g, &p).unwrap();
        let report = enumerate_species(&g, &reps, &action, &p).unwrap();
        (g, reps, report)
    }

    fn weight_of(report: &SpeciesReport, nuc: &str) -> BigUint {
        report
            .species
            .iter()
            .chain(&report.missing)
            .find(|s| s.nuc_label == nuc)
            .unwrap()
            .weight
            .clone()
    }

    #[test]
    fn water_species() {
        let (_, _, report) = finite_report("H2O");
        assert_eq!(report.sigma_label, "b");
        assert_eq!(weight_of(&report, "a"), BigUint::from(3u32));
        assert_eq!(weight_of(&report, "b"), BigUint::from(1u32));
        // Display rows: a* (para, weight 1) and b* (ortho, weight 3).
        let labels: Vec<(&str, u64)> = report
            .species
            .iter()
            .map(|s| (s.display.as_str(), s.weight.to_u64().unwrap()))
            .collect();
        assert!(labels.contains(&("a*", 1)));
        assert!(labels.contains(&("b*", 3)));
        assert!(report.missing.is_empty());
        assert_eq!(report.spectator_factor, BigUint::one());
    }

    #[test]
    fn bf3_species_and_missing_level() {
        let (_, _, report) = finite_report("BF3");
        assert_eq!(report.sigma_label, "a2");
        // Weights {a1: 4, a2: 0, e: 2}.
        assert_eq!(weight_of(&report, "a1"), BigUint::from(4u32));
        assert_eq!(weight_of(&report, "a2"), BigUint::from(0u32));
        assert_eq!(weight_of(&report, "e1"), BigUint::from(2u32));
        // Realized species a2* and e1*; the (rot a1, nuc a2) level is missing.
        let displays: Vec<&str> = report.species.iter().map(|s| s.display.as_str()).collect();
        assert_eq!(displays, vec!["a2*", "e1*"]);
        assert_eq!(report.missing.len(), 1);
        assert_eq!(report.missing[0].rot_label, "a1");
        assert_eq!(report.missing[0].nuc_label, "a2");
        // Spectator boron factor 2s+1 = 4.
        assert_eq!(report.spectator_factor, BigUint::from(4u32));
    }

    #[test]
    fn bf3_coupling_is_the_rotation_spin_singlet() {
        // e (x) e -> a2 coupling: (|1>|2> - |2>|1>)/sqrt 2 up to the fixed
        // phase convention.
        let (_, _, report) = finite_report("BF3");
        let e_star = report.species.iter().find(|s| s.rot_label == "e1").unwrap();
        let c = &e_star.coupling;
        assert_eq!(c.len(), 4);
        let s = 1.0 / 2.0f64.sqrt();
        assert!((c[0].norm() - 0.0).abs() < 1e-10);
        assert!((c[3].norm() - 0.0).abs() < 1e-10);
        assert!((c[1] - Complex64::new(s, 0.0)).norm() < 1e-10);
        assert!((c[2] + Complex64::new(s, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn methane_species_and_fraction() {
        let (g, reps, report) = finite_report("CH4");
        assert_eq!(report.sigma_label, "a");
        assert_eq!(weight_of(&report, "a"), BigUint::from(5u32));
        assert_eq!(weight_of(&report, "1e"), BigUint::from(1u32));
        assert_eq!(weight_of(&report, "2e"), BigUint::from(1u32));
        assert_eq!(weight_of(&report, "t"), BigUint::from(3u32));
        // Completeness: 5 + 1 + 1 + 3*3 = 16 = 2^4.
        let total: BigUint = report
            .species
            .iter()
            .map(|s| s.weight.clone() * BigUint::from(s.d))
            .sum();
        assert_eq!(total, total_spin_dimension(&preset("CH4").unwrap()));
        // f_ent(infinity) = 9/16.
        let f = entangled_fraction_exact(&report);
        assert_eq!(f, BigRational::new(9.into(), 16.into()));
        let _ = (g, reps);
    }

    #[test]
    fn schmidt_coefficients_are_maximally_entangled() {
        for name in ["BF3", "CH4", "SF6", "13C60"] {
            let (_, _, report) = finite_report(name);
            for sp in &report.species {
                let d = sp.d;
                let mat = DMatrix::from_fn(d, d, |r, c| sp.coupling[r * d + c]);
                let svals = mat.singular_values();
                for s in svals.iter() {
                    assert!(
                        (s - 1.0 / (d as f64).sqrt()).abs() < 1e-10,
                        "{name}:{}: Schmidt coefficient {s}",
                        sp.display
                    );
                }
            }
        }
    }

    #[test]
    fn fractions_table_bf3_column() {
        // Reference fraction values for BF3: l <= 2, 4, 8 and infinity.
        let (g, reps, report) = finite_report("BF3");
        let f2 = entangled_fraction_cutoff(&g, &reps, &report, 2).unwrap();
        let f4 = entangled_fraction_cutoff(&g, &reps, &report, 4).unwrap();
        let f8 = entangled_fraction_cutoff(&g, &reps, &report, 8).unwrap();
        assert!((f2 - 0.429).abs() < 1e-3, "f2 = {f2}");
        assert!((f4 - 0.444).abs() < 1e-3, "f4 = {f4}");
        assert!((f8 - 0.491).abs() < 1e-3, "f8 = {f8}");
        assert_eq!(entangled_fraction_exact(&report), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn buckyball_weights_exact() {
        let (_, _, report) = finite_report("13C60");
        assert_eq!(report.sigma_label, "a");
        let want: [(&str, &str); 5] =
            [("a", "19215358678900736"), ("t1", "57646074961907712"), ("t2", "57646074961907712"), ("g", "76861433640804352"), ("h", "96076792318656512")];
        for (label, val) in want {
            assert_eq!(weight_of(&report, label).to_string(), val, "weight of {label}");
        }
        let total: BigUint =
            report.species.iter().map(|s| s.weight.clone() * BigUint::from(s.d)).sum();
        assert_eq!(total, BigUint::from(2u32).pow(60));
    }

    #[test]
    fn continuous_diatomics() {
        for (name, sigma, rows) in [
            ("H2", "a2", vec![("a1*", 1u64), ("a2*", 3)]),
            ("D2", "a1", vec![("a1", 6), ("a2", 3)]),
            ("S2", "a1", vec![("a1", 1)]),
        ] {
            let p = preset(name).unwrap();
            let report = continuous_species(&p).unwrap();
            assert_eq!(report.sigma_label, sigma, "{name}");
            let got: Vec<(String, u64)> = report
                .species
                .iter()
                .map(|s| (s.display.clone(), s.weight.to_u64().unwrap()))
                .collect();
            let want: Vec<(String, u64)> =
                rows.into_iter().map(|(l, w)| (l.to_string(), w)).collect();
            assert_eq!(got, want, "{name}");
        }
        // HCl: trivial species, spectator factor (2)(4) = 8.
        let hcl = continuous_species(&preset("HCl").unwrap()).unwrap();
        assert_eq!(hcl.species.len(), 1);
        assert_eq!(hcl.spectator_factor, BigUint::from(8u32));
    }

    #[test]
    fn explicit_nuclear_basis_transforms_as_stored_irrep() {
        // BF3: build the 8-dimensional spin-1/2 x3 space, project onto the
        // two e-copies, and verify the permutation operators act through the
        // stored e-irrep matrices.
        let p = preset("BF3").unwrap();
        let g = build_group(GroupName::D(3)).unwrap();
        let reps = irreps(&g).unwrap();
        let action = perm_action_from_geometry(&g, &p).unwrap();
        let e = reps.iter().find(|r| r.label == "e1").unwrap();
        let dim = 8usize; // (2s+1)^3 for three spin-1/2 nuclei
        // Permutation operator on C^2 (x) C^2 (x) C^2 for each group element.
        let perm_op = |gi: usize| -> DMatrix<Complex64> {
            let perm = &action.perms[0][gi];
            let mut m = DMatrix::zeros(dim, dim);
            for src in 0..dim {
                let bits = [(src >> 2) & 1, (src >> 1) & 1, src & 1];
                // nucleus i goes to slot perm[i].
                let mut dst_bits = [0usize; 3];
                for i in 0..3 {
                    dst_bits[perm[i]] = bits[i];
                }
                let dst = (dst_bits[0] << 2) | (dst_bits[1] << 1) | dst_bits[2];
                m[(dst, src)] = Complex64::new(1.0, 0.0);
            }
            m
        };
        // Transfer operators of the e irrep acting on the spin space.
        let proj = |nu: usize, mu: usize| -> DMatrix<Complex64> {
            let mut acc: DMatrix<Complex64> = DMatrix::zeros(dim, dim);
            for gi in 0..g.order() {
                acc += perm_op(gi) * e.entry(gi, nu, mu).to_c64().conj();
            }
            acc * Complex64::new(e.dim as f64 / g.order() as f64, 0.0)
        };
        let p00 = proj(0, 0);
        // Two copies (weight 2): find them from the projector image.
        let mut copies: Vec<nalgebra::DVector<Complex64>> = Vec::new();
        for seed in 0..dim {
            let mut v = p00.column(seed).into_owned();
            for c in &copies {
                let ov: Complex64 = c.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                v -= c.scale(1.0) * ov;
            }
            if v.norm() > 1e-8 {
                v /= Complex64::new(v.norm(), 0.0);
                copies.push(v);
            }
        }
        assert_eq!(copies.len(), 2);
        // Assemble |nu, kappa> and verify P(g)|nu,kappa> =
        // sum_nu' e^{nu' nu}(g) |nu', kappa>.
        let p10 = proj(1, 0);
        for kappa in 0..2 {
            let v0 = copies[kappa].clone();
            let v1 = &p10 * &v0;
            for gi in 0..g.order() {
                let op = perm_op(gi);
                for (nu, v) in [(0, &v0), (1, &v1)] {
                    let lhs = &op * v;
                    let mut rhs: nalgebra::DVector<Complex64> = nalgebra::DVector::zeros(dim);
                    for (nup, vp) in [(0, &v0), (1, &v1)] {
                        rhs += vp.scale(1.0) * e.entry(gi, nup, nu).to_c64();
                    }
                    let err = (lhs - rhs).norm();
                    assert!(err < 1e-9, "g={gi} nu={nu} kappa={kappa}: err {err}");
                }
            }
        }
    }
}
