use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::ledger::{estimate_ledger, EstimateLedger, LedgerParams};
use super::melnikov::{check_melnikov, MelnikovReport};
use super::step::{normalization_step, GeneratingFunction, NormalizeOptions};
use super::structure::{check_structure, StructureReport};
use crate::error::{Error, Result};
use crate::model::GradedHamiltonian;
use crate::poly_algebra::text::write_series;
use crate::poly_algebra::Coefficient;

/// Output of `r` normalization steps.
#[derive(Clone, Debug)]
pub struct NormalFormResult<C: Coefficient> {
    /// `H^(r)`.
    pub hamiltonian: GradedHamiltonian<C>,
    /// Generators in application order.
    pub generators: Vec<GeneratingFunction<C>>,
    pub qstar: Vec<f64>,
    pub melnikov: MelnikovReport,
    pub structure: StructureReport,
    pub ledger: Option<EstimateLedger>,
}

impl<C: Coefficient> NormalFormResult<C> {
    pub fn order(&self) -> usize {
        self.hamiltonian.order
    }

    /// Generator of a given stage and order.
    pub fn generator(&self, stage: super::Stage, r: usize) -> Option<&GeneratingFunction<C>> {
        self.generators.iter().find(|g| g.stage == stage && g.r == r)
    }

    /// Write one series file per component, the generators and the ledger.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let h = &self.hamiltonian;
        for (&(l, s), f) in h.iter() {
            fs::write(dir.join(format!("f_{l}_{s}.txt")), write_series(&f.to_float(), s))?;
        }
        let mut manifest = String::from("stage,r,file,zeta\n");
        for g in &self.generators {
            let file = format!("chi_{}_{}.txt", g.stage.label(), g.r);
            fs::write(dir.join(&file), write_series(&g.chi().to_float(), g.r))?;
            let zeta = g
                .zeta()
                .map(|z| {
                    z.iter()
                        .map(|c| format!("{:e}", c.to_c64().re))
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .unwrap_or_default();
            let _ = writeln!(manifest, "{},{},{},{}", g.stage.label(), g.r, file, zeta);
        }
        fs::write(dir.join("generators.csv"), manifest)?;
        if let Some(l) = &self.ledger {
            fs::write(dir.join("ledger.csv"), l.to_csv())?;
        }
        Ok(())
    }
}

/// Bring `H^(0)` to normal form up to order `r_max` with parameter `q*`.
///
/// With `ledger` set the estimate ledger is computed as well.
pub fn normalize<C: Coefficient>(
    h0: &GradedHamiltonian<C>,
    r_max: usize,
    qstar: &[f64],
    opts: &NormalizeOptions,
    ledger: Option<&LedgerParams>,
) -> Result<NormalFormResult<C>> {
    if h0.order != 0 {
        return Err(Error::InvalidInput("normalize expects an order-0 Hamiltonian".into()));
    }
    let omega = h0.omega_f64();
    let melnikov = check_melnikov(omega, &h0.big_omega_f64(), opts.melnikov_k, opts.delta_min_rel * omega.abs());
    let mut h = h0.clone();
    let mut generators = Vec::with_capacity(5 * r_max);
    for r in 1..=r_max {
        let (next, gens) = normalization_step(&h, r, qstar, opts)?;
        h = next;
        generators.extend(gens);
    }
    let structure = check_structure(&h, qstar, 1e-10)?;
    let ledger = match ledger {
        Some(p) if r_max > 0 => Some(estimate_ledger(h0, &h, &generators, melnikov.alpha, p)?),
        _ => None,
    };
    Ok(NormalFormResult {
        hamiltonian: h,
        generators,
        qstar: qstar.to_vec(),
        melnikov,
        structure,
        ledger,
    })
}
