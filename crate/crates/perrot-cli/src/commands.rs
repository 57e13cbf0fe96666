//! One function per subcommand; each resolves its inputs, runs the library,
//! and assembles an [`Artifact`].

use std::f64::consts::PI;

use anyhow::{anyhow, bail, Result};
use num_complex::Complex64;
use serde_json::json;

use perrot::dynamics::{
    interferometer_phase, planar_rotate, stroboscopic_reorient, PlanarParity, PlanarState, Pulse,
    RotorState,
};
use perrot::group::GroupSpec;
use perrot::holonomy::{
    connection_component, conjecture_check, monodromy_group, symmetry_flatness_proof,
    FlatnessVerdict,
};
use perrot::irreps::{irreps, Irrep};
use perrot::isotypic::{branching_table, multiplicity};
use perrot::molecule::{perm_action_from_geometry, preset, MoleculePreset, PermAction};
use perrot::phasespace::{fourier_roundtrip, position_state};
use perrot::species::{
    continuous_species, entangled_fraction_cutoff, entangled_fraction_exact, enumerate_species,
    nuclear_decomposition, total_spin_dimension, SpeciesReport,
};
use perrot::{build_group, FiniteGroup, Rotation};

use crate::output::Artifact;

/// A finite-group molecule with its representation data resolved.
pub struct MoleculeCtx {
    pub preset: MoleculePreset,
    pub group: FiniteGroup,
    pub reps: Vec<Irrep>,
    pub action: PermAction,
}

pub fn parse_group(name: &str) -> Result<(FiniteGroup, Vec<Irrep>)> {
    let spec: GroupSpec = name.parse()?;
    let GroupSpec::Finite(gname) = spec else {
        bail!("{name} is a continuous group; this subcommand needs a finite one");
    };
    let group = build_group(gname)?;
    let reps = irreps(&group)?;
    Ok((group, reps))
}

pub fn molecule_ctx(name: &str) -> Result<MoleculeCtx> {
    let preset = preset(name)?;
    let GroupSpec::Finite(gname) = preset.group else {
        bail!("{name} has a continuous symmetry group; use `species`/`weights`/`fraction`");
    };
    let group = build_group(gname)?;
    let reps = irreps(&group)?;
    let action = perm_action_from_geometry(&group, &preset)?;
    Ok(MoleculeCtx { preset, group, reps, action })
}

/// Resolve a user-facing species/irrep label: a trailing `*` (display form
/// of a starred species) is stripped, and the bare two-dimensional labels
/// `e`, `1e`, `2e` alias the first member of their family.
pub fn resolve_irrep<'a>(group: &FiniteGroup, reps: &'a [Irrep], label: &str) -> Result<&'a Irrep> {
    let bare = label.trim_end_matches('*');
    if let Some(r) = reps.iter().find(|r| r.label == bare) {
        return Ok(r);
    }
    if matches!(bare, "e" | "1e" | "2e") {
        let alias = format!("{bare}1");
        if let Some(r) = reps.iter().find(|r| r.label == alias) {
            return Ok(r);
        }
    }
    let available: Vec<&str> = reps.iter().map(|r| r.label.as_str()).collect();
    Err(anyhow!("no irrep {label} in {}; available: {}", group.name, available.join(", ")))
}

fn species_report(name: &str) -> Result<(MoleculePreset, SpeciesReport, Option<MoleculeCtx>)> {
    let p = preset(name)?;
    match p.group {
        GroupSpec::Continuous(_) => {
            let report = continuous_species(&p)?;
            Ok((p, report, None))
        }
        GroupSpec::Finite(_) => {
            let ctx = molecule_ctx(name)?;
            let report = enumerate_species(&ctx.group, &ctx.reps, &ctx.action, &ctx.preset)?;
            Ok((p, report, Some(ctx)))
        }
    }
}

pub fn species(molecule: &str) -> Result<Artifact> {
    let (preset, report, _) = species_report(molecule)?;
    let mut art = Artifact::new("species");
    art.config("molecule", molecule).config("group", preset.group.to_string());
    art.scalar("sigma", report.sigma_label.clone());
    art.scalar("spectator_factor", report.spectator_factor.to_string());
    art.scalar(
        "missing",
        json!(report.missing.iter().map(|m| m.display.clone()).collect::<Vec<_>>()),
    );
    art.columns = ["species", "rot", "nuc", "sigma", "d", "weight"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for sp in &report.species {
        art.rows.push(vec![
            sp.display.clone(),
            sp.rot_label.clone(),
            sp.nuc_label.clone(),
            sp.sigma_label.clone(),
            sp.d.to_string(),
            sp.weight.to_string(),
        ]);
    }
    Ok(art)
}

pub fn weights(molecule: &str) -> Result<Artifact> {
    let (preset, report, ctx) = species_report(molecule)?;
    let mut art = Artifact::new("weights");
    art.config("molecule", molecule).config("group", preset.group.to_string());
    art.columns = ["nuc", "d", "weight"].iter().map(|s| s.to_string()).collect();
    match ctx {
        Some(ctx) => {
            let weights = nuclear_decomposition(&ctx.group, &ctx.reps, &ctx.action, &ctx.preset)?;
            let mut total = num_bigint::BigUint::ZERO;
            for (tau, w) in ctx.reps.iter().zip(&weights) {
                total += num_bigint::BigUint::from(tau.dim) * w;
                art.rows.push(vec![tau.label.clone(), tau.dim.to_string(), w.to_string()]);
            }
            art.scalar("sum_dim_times_weight", total.to_string());
            art.scalar("total_spin_dimension", total_spin_dimension(&ctx.preset).to_string());
        }
        None => {
            for sp in report.species.iter().chain(&report.missing) {
                art.rows.push(vec![
                    sp.nuc_label.clone(),
                    sp.d.to_string(),
                    sp.weight.to_string(),
                ]);
            }
        }
    }
    art.scalar("sigma", report.sigma_label.clone());
    art.scalar("spectator_factor", report.spectator_factor.to_string());
    Ok(art)
}

pub fn fraction(molecule: &str, cutoffs: &str) -> Result<Artifact> {
    let (preset, report, ctx) = species_report(molecule)?;
    let mut art = Artifact::new("fraction");
    art.config("molecule", molecule)
        .config("group", preset.group.to_string())
        .config("cutoffs", cutoffs);
    art.columns = ["cutoff", "value", "exact"].iter().map(|s| s.to_string()).collect();
    for tok in cutoffs.split(',') {
        let tok = tok.trim();
        if tok == "inf" {
            let v = entangled_fraction_exact(&report);
            art.rows.push(vec!["inf".into(), v.to_string(), "true".into()]);
        } else {
            let ell: usize = tok.parse().map_err(|_| anyhow!("bad cutoff {tok}"))?;
            let ctx = ctx
                .as_ref()
                .ok_or_else(|| anyhow!("finite cutoffs need a finite symmetry group"))?;
            let v = entangled_fraction_cutoff(&ctx.group, &ctx.reps, &report, ell)?;
            art.rows.push(vec![tok.into(), v.to_string(), "false".into()]);
        }
    }
    Ok(art)
}

pub fn multiplicities(group_name: &str, ell_max: usize) -> Result<Artifact> {
    let (group, reps) = parse_group(group_name)?;
    let table = branching_table(&group, &reps, ell_max)?;
    let mut art = Artifact::new("multiplicities");
    art.config("group", group_name).config("lmax", ell_max as u64);
    art.columns = std::iter::once("l".to_string()).chain(table.labels.clone()).collect();
    for (ell, row) in table.mults.iter().enumerate() {
        let mut cells = vec![ell.to_string()];
        cells.extend(row.iter().map(|m| m.to_string()));
        art.rows.push(cells);
    }
    Ok(art)
}

pub fn fourier_check(
    group_name: &str,
    species: &str,
    ell_max: usize,
    quad: Option<usize>,
) -> Result<Artifact> {
    let (group, reps) = parse_group(group_name)?;
    let irrep = resolve_irrep(&group, &reps, species)?;
    let n_beta = quad.unwrap_or(ell_max + 1);
    let residual = fourier_roundtrip(&group, irrep, ell_max, n_beta)?;
    let mut art = Artifact::new("fourier-check");
    art.config("group", group_name)
        .config("species", species)
        .config("irrep", irrep.label.clone())
        .config("lmax", ell_max as u64)
        .config("quad", n_beta as u64);
    art.scalar("gram_residual", residual);
    art.columns = vec!["gram_residual".into()];
    art.rows.push(vec![residual.to_string()]);
    Ok(art)
}

pub fn position(
    molecule: &str,
    species: &str,
    euler: &str,
    delta: f64,
    ell_max: usize,
    mu: usize,
) -> Result<Artifact> {
    let ctx = molecule_ctx(molecule)?;
    let irrep = resolve_irrep(&ctx.group, &ctx.reps, species)?;
    let angles: Vec<f64> = euler
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| anyhow!("bad Euler angle {t}")))
        .collect::<Result<_>>()?;
    let [alpha, beta, gamma] = angles[..] else {
        bail!("--euler needs three comma-separated angles (radians)");
    };
    let s = Rotation::from_euler(alpha, beta, gamma);
    let state = position_state(&ctx.group, irrep, &s, mu, ell_max, delta)?;
    let mut art = Artifact::new("position");
    art.config("molecule", molecule)
        .config("group", ctx.group.name.to_string())
        .config("species", species)
        .config("irrep", irrep.label.clone())
        .config("euler", euler)
        .config("delta", delta)
        .config("lmax", ell_max as u64)
        .config("mu", mu as u64);
    art.scalar("norm_sq", state.norm_sq());
    art.columns = ["l", "m", "kappa", "re", "im"].iter().map(|s| s.to_string()).collect();
    for (ell, block) in state.blocks.iter().enumerate() {
        for kappa in 0..block.ncols() {
            for row in 0..block.nrows() {
                let m = row as i64 - ell as i64;
                let z = block[(row, kappa)];
                art.rows.push(vec![
                    ell.to_string(),
                    m.to_string(),
                    kappa.to_string(),
                    z.re.to_string(),
                    z.im.to_string(),
                ]);
            }
        }
    }
    Ok(art)
}

/// Smallest cutoff whose dropped damping tail is below 1e-12.
fn tail_cutoff(delta: f64) -> Result<usize> {
    (1..=128usize)
        .find(|&ell| (-delta * (ell * (ell + 1)) as f64).exp() < 1e-12)
        .ok_or_else(|| anyhow!("damping {delta} too small for the supported momentum cap"))
}

pub fn connection(
    group_name: &str,
    irrep_label: &str,
    deltas: &str,
    threshold: f64,
) -> Result<Artifact> {
    let (group, reps) = parse_group(group_name)?;
    let irrep = resolve_irrep(&group, &reps, irrep_label)?;
    let grid: Vec<f64> = deltas
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| anyhow!("bad damping {t}")))
        .collect::<Result<_>>()?;
    if grid.is_empty() || grid.windows(2).any(|w| w[1] >= w[0]) || grid.iter().any(|&d| d <= 0.0)
    {
        bail!("--deltas must be a positive, strictly descending grid");
    }
    let caps: Vec<usize> = grid.iter().map(|&d| tail_cutoff(d)).collect::<Result<_>>()?;
    let top = *caps.iter().max().unwrap();
    let d = irrep.dim;
    // Shared per-(l, axis) components across the damping grid.
    let mut comps = Vec::with_capacity(top + 1);
    let mut mults = Vec::with_capacity(top + 1);
    for ell in 0..=top {
        mults.push(multiplicity(&group, irrep, ell)?);
        comps.push([
            connection_component(&group, irrep, ell, 0)?.matrix,
            connection_component(&group, irrep, ell, 1)?.matrix,
            connection_component(&group, irrep, ell, 2)?.matrix,
        ]);
    }
    let mut art = Artifact::new("connection");
    art.config("group", group_name)
        .config("irrep", irrep.label.clone())
        .config("deltas", deltas)
        .config("threshold", threshold);
    art.columns =
        ["delta", "lmax", "axis", "mu", "nu", "re", "im"].iter().map(|s| s.to_string()).collect();
    let mut maxima = Vec::with_capacity(grid.len());
    for (i, &delta) in grid.iter().enumerate() {
        let cap = caps[i];
        let mut num =
            [nalgebra::DMatrix::<Complex64>::zeros(d, d), nalgebra::DMatrix::zeros(d, d), nalgebra::DMatrix::zeros(d, d)];
        let mut den = 0.0f64;
        for ell in 0..=cap {
            let w = (-delta * (ell * (ell + 1)) as f64).exp() * (2 * ell + 1) as f64;
            for a in 0..3 {
                num[a] += &comps[ell][a] * Complex64::new(w, 0.0);
            }
            den += w * mults[ell] as f64;
        }
        let mut peak = 0.0f64;
        for (a, axis) in ["x", "y", "z"].iter().enumerate() {
            for mu in 0..d {
                for nu in 0..d {
                    let z = num[a][(mu, nu)] / Complex64::new(den, 0.0);
                    peak = peak.max(z.norm());
                    art.rows.push(vec![
                        delta.to_string(),
                        cap.to_string(),
                        axis.to_string(),
                        mu.to_string(),
                        nu.to_string(),
                        z.re.to_string(),
                        z.im.to_string(),
                    ]);
                }
            }
        }
        maxima.push(peak);
    }
    let decaying = maxima.windows(2).all(|w| w[1] < w[0])
        && maxima.last().map(|&v| v < threshold).unwrap_or(false);
    let verdict = match symmetry_flatness_proof(&group, &reps, irrep)? {
        FlatnessVerdict::FlatBySymmetry => "flat-by-symmetry",
        FlatnessVerdict::Undetermined => "undetermined",
    };
    art.scalar("max_by_delta", json!(maxima));
    art.scalar("decaying", decaying);
    art.scalar("symmetry_verdict", verdict);
    Ok(art)
}

pub fn monodromy(group_name: &str, irrep_label: Option<&str>) -> Result<Artifact> {
    let (group, reps) = parse_group(group_name)?;
    let selected: Vec<&Irrep> = match irrep_label {
        Some(l) => vec![resolve_irrep(&group, &reps, l)?],
        None => reps.iter().collect(),
    };
    let mut art = Artifact::new("monodromy");
    art.config("group", group_name);
    if let Some(l) = irrep_label {
        art.config("irrep", l);
    }
    art.columns = ["irrep", "kernel_order", "quotient", "non_abelian"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for irrep in selected {
        let mg = monodromy_group(&group, irrep)?;
        art.rows.push(vec![
            irrep.label.clone(),
            mg.kernel.len().to_string(),
            mg.quotient.to_string(),
            mg.non_abelian.to_string(),
        ]);
    }
    Ok(art)
}

pub fn conjecture(group_name: &str, irrep_label: Option<&str>) -> Result<Artifact> {
    let (group, reps) = parse_group(group_name)?;
    let selected: Vec<&Irrep> = match irrep_label {
        Some(l) => vec![resolve_irrep(&group, &reps, l)?],
        None => reps.iter().collect(),
    };
    let mut art = Artifact::new("conjecture");
    art.config("group", group_name);
    if let Some(l) = irrep_label {
        art.config("irrep", l);
    }
    art.columns = ["irrep", "holds", "witness"].iter().map(|s| s.to_string()).collect();
    let mut all = true;
    for irrep in selected {
        let report = conjecture_check(&group, irrep)?;
        all &= report.holds;
        art.rows.push(vec![irrep.label.clone(), report.holds.to_string(), report.witness]);
    }
    art.scalar("all_hold", all);
    Ok(art)
}

pub fn toy2d(species: &str) -> Result<Artifact> {
    let (parity, support): (PlanarParity, &[i64]) = match species {
        "para" => (PlanarParity::Para, &[-2, 0, 2]),
        "ortho" => (PlanarParity::Ortho, &[-1, 1]),
        other => bail!("unknown planar species {other} (para, ortho)"),
    };
    let amp = Complex64::new(1.0 / (support.len() as f64).sqrt(), 0.0);
    let coeffs = support.iter().map(|&l| (l, amp)).collect();
    let state = PlanarState::new(parity, coeffs)?;
    let (_, phase) = planar_rotate(&state, PI);
    let phase = phase.ok_or_else(|| anyhow!("no global phase extracted at pi"))?;
    let mut art = Artifact::new("toy2d");
    art.config("species", species);
    art.scalar("phase", phase);
    art.columns = vec!["species".into(), "pi_rotation_phase".into()];
    art.rows.push(vec![species.into(), phase.to_string()]);
    Ok(art)
}

#[allow(clippy::too_many_arguments)]
pub fn strobe(
    pulses: usize,
    tilt_deg: f64,
    eta: f64,
    ell_max: usize,
    b: f64,
    samples: usize,
    leak_tol: f64,
) -> Result<Artifact> {
    if pulses == 0 {
        bail!("need at least one pulse");
    }
    let axis_at = |deg: f64| -> [f64; 3] {
        let th = deg.to_radians();
        [th.sin(), 0.0, th.cos()]
    };
    // Pulse k fires at revival k with its axis tilted k*tilt degrees in the
    // xz plane; the target axis continues the sequence one step further.
    let schedule: Vec<Pulse> = (0..pulses)
        .map(|k| Pulse { revivals: k as f64, axis: axis_at(k as f64 * tilt_deg) })
        .collect();
    let target = axis_at(pulses as f64 * tilt_deg);
    let initial = RotorState::basis(b, ell_max, 0, 0)?;
    let (trace, off_revival) =
        stroboscopic_reorient(&initial, &schedule, eta, target, leak_tol, samples)?;
    let mut art = Artifact::new("strobe");
    art.config("pulses", pulses as u64)
        .config("tilt", tilt_deg)
        .config("eta", eta)
        .config("lmax", ell_max as u64)
        .config("b", b)
        .config("samples", samples as u64)
        .config("leak_tol", leak_tol);
    art.scalar("t_rev", initial.t_rev());
    art.scalar("target_axis", json!(target.to_vec()));
    art.scalar("off_revival", off_revival);
    art.columns = vec!["time".into(), "alignment".into()];
    for (t, a) in trace {
        art.rows.push(vec![t.to_string(), a.to_string()]);
    }
    Ok(art)
}

pub fn fringe(species: &str, ell: usize, axis: &str) -> Result<Artifact> {
    let axis_vec = match axis {
        "x" => [1.0, 0.0, 0.0],
        "y" => [0.0, 1.0, 0.0],
        "z" => [0.0, 0.0, 1.0],
        other => {
            let deg: f64 = other
                .parse()
                .map_err(|_| anyhow!("axis must be x, y, z, or an equatorial azimuth in degrees"))?;
            [deg.to_radians().cos(), deg.to_radians().sin(), 0.0]
        }
    };
    let state = RotorState::basis(1.0, ell, ell, 0)?;
    let g = Rotation::from_axis_angle(axis_vec, PI);
    let factor = interferometer_phase(&state, &g)?;
    let mut art = Artifact::new("fringe");
    art.config("species", species).config("l", ell as u64).config("axis", axis);
    art.scalar("factor_re", factor.re);
    art.scalar("factor_im", factor.im);
    art.scalar("modulus", factor.norm());
    art.columns = vec!["l".into(), "axis".into(), "re".into(), "im".into()];
    art.rows.push(vec![ell.to_string(), axis.into(), factor.re.to_string(), factor.im.to_string()]);
    Ok(art)
}
