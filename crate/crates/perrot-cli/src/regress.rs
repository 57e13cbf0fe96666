//! Regression-table runner: compares library output against the bundled
//! fixtures (verbatim published-table values with their citations),
//! exactly for integers/rationals and within the per-table tolerance for
//! printed decimals.

use anyhow::{anyhow, Result};
use num_bigint::BigUint;
use serde::Deserialize;

use perrot::irreps::{irrep_by_label, irreps};
use perrot::isotypic::branching_table;
use perrot::molecule::{perm_action_from_geometry, preset};
use perrot::species::{
    entangled_fraction_cutoff, entangled_fraction_exact, enumerate_species,
    nuclear_decomposition, species_pattern,
};

use crate::commands::parse_group;
use crate::output::Artifact;

pub const TABLES: [&str; 5] = [
    "buckeyball-rotmult",
    "buckeyball-weights",
    "fractions",
    "species-patterns",
    "monodromy-groups",
];

/// Per-table comparison summary.
#[derive(Debug, Clone)]
pub struct TableReport {
    pub table: String,
    pub cells: usize,
    pub passed: usize,
    pub failures: Vec<String>,
}

impl TableReport {
    fn new(table: &str) -> Self {
        TableReport { table: table.into(), cells: 0, passed: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cells += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(describe());
        }
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.cells
    }
}

#[derive(Deserialize)]
struct RotmultFixture {
    irreps: Vec<String>,
    dims: Vec<usize>,
    mults: Vec<Vec<usize>>,
}

fn rotmult() -> Result<TableReport> {
    let fx: RotmultFixture = serde_json::from_str(include_str!("../fixtures/buckeyball-rotmult.json"))?;
    let (group, reps) = parse_group("I")?;
    let table = branching_table(&group, &reps, fx.mults.len() - 1)?;
    let mut report = TableReport::new("buckeyball-rotmult");
    for (ell, want_row) in fx.mults.iter().enumerate() {
        for (i, (label, want)) in fx.irreps.iter().zip(want_row).enumerate() {
            let col = table
                .labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| anyhow!("irrep {label} missing from the branching table"))?;
            let got = table.mults[ell][col];
            report.check(got == *want && table.dims[col] == fx.dims[i], || {
                format!("(l={ell}, {label}): got {got}, want {want}")
            });
        }
    }
    Ok(report)
}

#[derive(Deserialize)]
struct WeightsFixture {
    molecule: String,
    weights: std::collections::BTreeMap<String, String>,
    total_dim_times_weight: String,
}

fn weights() -> Result<TableReport> {
    let fx: WeightsFixture = serde_json::from_str(include_str!("../fixtures/buckeyball-weights.json"))?;
    let p = preset(&fx.molecule)?;
    let perrot::group::GroupSpec::Finite(gname) = p.group else {
        return Err(anyhow!("weights fixture needs a finite group"));
    };
    let group = perrot::build_group(gname)?;
    let reps = irreps(&group)?;
    let action = perm_action_from_geometry(&group, &p)?;
    let got = nuclear_decomposition(&group, &reps, &action, &p)?;
    let mut report = TableReport::new("buckeyball-weights");
    let mut total = BigUint::ZERO;
    for (tau, w) in reps.iter().zip(&got) {
        total += BigUint::from(tau.dim) * w;
        let want = fx
            .weights
            .get(&tau.label)
            .ok_or_else(|| anyhow!("irrep {} missing from the weights fixture", tau.label))?;
        report.check(&w.to_string() == want, || {
            format!("weight({}): got {w}, want {want}", tau.label)
        });
    }
    report.check(total.to_string() == fx.total_dim_times_weight, || {
        format!("sum d*m: got {total}, want {}", fx.total_dim_times_weight)
    });
    Ok(report)
}

#[derive(Deserialize)]
struct FractionsFixture {
    tolerance: f64,
    cutoffs: Vec<usize>,
    rows: Vec<FractionRow>,
}

#[derive(Deserialize)]
struct FractionRow {
    molecule: String,
    decimals: Vec<f64>,
    infinite: String,
}

fn fractions() -> Result<TableReport> {
    let fx: FractionsFixture = serde_json::from_str(include_str!("../fixtures/fractions.json"))?;
    let mut report = TableReport::new("fractions");
    for row in &fx.rows {
        let p = preset(&row.molecule)?;
        let perrot::group::GroupSpec::Finite(gname) = p.group else {
            return Err(anyhow!("{} is not a finite-group molecule", row.molecule));
        };
        let group = perrot::build_group(gname)?;
        let reps = irreps(&group)?;
        let action = perm_action_from_geometry(&group, &p)?;
        let species = enumerate_species(&group, &reps, &action, &p)?;
        for (&ell, &want) in fx.cutoffs.iter().zip(&row.decimals) {
            let got = entangled_fraction_cutoff(&group, &reps, &species, ell)?;
            report.check((got - want).abs() <= fx.tolerance, || {
                format!("{} l<={ell}: got {got:.4}, want {want}", row.molecule)
            });
        }
        let exact = entangled_fraction_exact(&species).to_string();
        report.check(exact == row.infinite, || {
            format!("{} inf: got {exact}, want {}", row.molecule, row.infinite)
        });
    }
    Ok(report)
}

#[derive(Deserialize)]
struct PatternsFixture {
    groups: Vec<PatternGroup>,
}

#[derive(Deserialize)]
struct PatternGroup {
    group: String,
    sigma: String,
    rows: Vec<PatternRow>,
}

#[derive(Deserialize)]
struct PatternRow {
    display: String,
    rot: String,
    nuc: String,
    d: usize,
}

fn species_patterns() -> Result<TableReport> {
    let fx: PatternsFixture = serde_json::from_str(include_str!("../fixtures/species-patterns.json"))?;
    let mut report = TableReport::new("species-patterns");
    for entry in &fx.groups {
        let (group, reps) = parse_group(&entry.group)?;
        let rows = species_pattern(&group, &reps, &entry.sigma)?;
        report.check(rows.len() == entry.rows.len(), || {
            format!("{} sigma={}: {} rows, want {}", entry.group, entry.sigma, rows.len(), entry.rows.len())
        });
        for want in &entry.rows {
            let got = rows.iter().find(|r| r.nuc_label == want.nuc);
            report.check(
                got.map(|r| r.display == want.display && r.rot_label == want.rot && r.d == want.d)
                    .unwrap_or(false),
                || {
                    format!(
                        "{} sigma={} nuc={}: got {:?}, want ({}, {}, d={})",
                        entry.group,
                        entry.sigma,
                        want.nuc,
                        got.map(|r| (r.display.clone(), r.d)),
                        want.display,
                        want.rot,
                        want.d
                    )
                },
            );
        }
    }
    Ok(report)
}

#[derive(Deserialize)]
struct MonodromyFixture {
    rows: Vec<MonodromyRow>,
}

#[derive(Deserialize)]
struct MonodromyRow {
    group: String,
    irrep: String,
    kernel_order: usize,
    quotient: String,
    non_abelian: bool,
}

fn monodromy_groups() -> Result<TableReport> {
    let fx: MonodromyFixture = serde_json::from_str(include_str!("../fixtures/monodromy-groups.json"))?;
    let mut report = TableReport::new("monodromy-groups");
    let mut cached: Option<(String, perrot::FiniteGroup)> = None;
    for row in &fx.rows {
        if cached.as_ref().map(|(n, _)| n != &row.group).unwrap_or(true) {
            let (group, _) = parse_group(&row.group)?;
            cached = Some((row.group.clone(), group));
        }
        let group = &cached.as_ref().unwrap().1;
        let irrep = irrep_by_label(group, &row.irrep)?;
        let mg = perrot::holonomy::monodromy_group(group, &irrep)?;
        let ok = mg.kernel.len() == row.kernel_order
            && mg.quotient.to_string() == row.quotient
            && mg.non_abelian == row.non_abelian;
        report.check(ok, || {
            format!(
                "{} {}: got (|ker|={}, {}, non-abelian={}), want (|ker|={}, {}, non-abelian={})",
                row.group,
                row.irrep,
                mg.kernel.len(),
                mg.quotient,
                mg.non_abelian,
                row.kernel_order,
                row.quotient,
                row.non_abelian
            )
        });
    }
    Ok(report)
}

/// Run one named table (or `all`).
pub fn run(selector: &str) -> Result<Vec<TableReport>> {
    let run_one = |name: &str| -> Result<TableReport> {
        match name {
            "buckeyball-rotmult" => rotmult(),
            "buckeyball-weights" => weights(),
            "fractions" => fractions(),
            "species-patterns" => species_patterns(),
            "monodromy-groups" => monodromy_groups(),
            other => Err(anyhow!("unknown table {other}; available: {}, all", TABLES.join(", "))),
        }
    };
    if selector == "all" {
        TABLES.iter().map(|t| run_one(t)).collect()
    } else {
        Ok(vec![run_one(selector)?])
    }
}

/// Artifact rendering of the regression run; the flag is false on any
/// cell mismatch.
pub fn artifact(selector: &str) -> Result<(Artifact, bool)> {
    let reports = run(selector)?;
    let mut art = Artifact::new("regress");
    art.config("table", selector);
    art.columns = ["table", "cells", "passed", "failures"].iter().map(|s| s.to_string()).collect();
    let mut all = true;
    for r in &reports {
        all &= r.all_passed();
        art.rows.push(vec![
            r.table.clone(),
            r.cells.to_string(),
            r.passed.to_string(),
            r.failures.join("; "),
        ]);
    }
    art.scalar("all_passed", all);
    Ok((art, all))
}
