//! Heuristic upper bound on a convex-roof quantity
//! `min Σ pᵢ m(ψᵢ)` over pure-state decompositions `ρ = Σ pᵢ|ψᵢ⟩⟨ψᵢ|`.
//!
//! Decompositions are generated from the eigen-ensemble `wᵢ = √λᵢ|eᵢ⟩` by a
//! random isometry `U` (K×r, K = 2r): `|ψ̃ₖ⟩ = Σᵢ Uₖᵢ|wᵢ⟩`. Every candidate is a
//! valid decomposition, so the best value found never undercuts the true roof.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::PartitionSpec;
use crate::qmat::{c, C64};
use crate::states::{haar_unitary, sample_rng, DensityMatrix, StateVector};

/// Eigenvalues below this are dropped from the eigen-ensemble.
const RANK_CUTOFF: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoofMeasure {
    NegativitySquared,
    ConcurrenceSquared,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoofSearch {
    /// Smallest ensemble average found.
    pub best: f64,
    /// Ensemble average of the eigen-decomposition itself.
    pub eigen_ensemble: f64,
    /// Best-so-far after each random trial.
    pub history: Vec<f64>,
    pub rank: usize,
    pub seed: u64,
}

fn pure_value(psi: &StateVector, cut: &PartitionSpec, measure: RoofMeasure) -> Result<f64> {
    let marg = psi.reduced(cut.left())?;
    Ok(match measure {
        RoofMeasure::ConcurrenceSquared => (2.0 * (1.0 - marg.purity())).max(0.0),
        RoofMeasure::NegativitySquared => {
            // pure state: ‖ψ^{T_L}‖₁ = (Σ √μᵢ)² over the marginal spectrum
            let s: f64 = marg.eigenvalues()?.iter().map(|m| m.max(0.0).sqrt()).sum();
            ((s * s - 1.0) / 2.0).max(0.0).powi(2)
        }
    })
}

fn ensemble_average(
    members: &[Vec<C64>],
    rho: &DensityMatrix,
    cut: &PartitionSpec,
    measure: RoofMeasure,
) -> Result<f64> {
    let mut acc = 0.0;
    for v in members {
        let p: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if p < RANK_CUTOFF {
            continue;
        }
        let psi = StateVector::normalized(rho.dims().clone(), v.clone())?;
        acc += p * pure_value(&psi, cut, measure)?;
    }
    Ok(acc)
}

pub fn convex_roof_upper_bound(
    rho: &DensityMatrix,
    cut: &PartitionSpec,
    measure: RoofMeasure,
    trials: usize,
    seed: u64,
) -> Result<RoofSearch> {
    if trials < 1 {
        return Err(Error::arg("convex roof search needs at least one trial"));
    }
    if cut.num_subsystems() != rho.num_subsystems() {
        return Err(Error::arg(format!("cut {cut} does not match the state")));
    }
    let (vals, vecs) = rho.matrix().hermitian_eigh()?;
    let weighted: Vec<Vec<C64>> = vals
        .iter()
        .zip(&vecs)
        .filter(|(l, _)| **l > RANK_CUTOFF)
        .map(|(l, v)| v.iter().map(|z| z * l.sqrt()).collect())
        .collect();
    let rank = weighted.len();
    if rank == 0 {
        return Err(Error::NumericFailure("state has no eigenvalue above cutoff".into()));
    }
    let eigen_ensemble = ensemble_average(&weighted, rho, cut, measure)?;
    let dim = rho.matrix().rows();
    let k = 2 * rank;
    let mut rng = sample_rng(seed, 0);
    let mut best = eigen_ensemble;
    let mut history = Vec::with_capacity(trials);
    for _ in 0..trials {
        let u = haar_unitary(k, &mut rng);
        let members: Vec<Vec<C64>> = (0..k)
            .map(|row| {
                let mut v = vec![c(0.0, 0.0); dim];
                for (i, w) in weighted.iter().enumerate() {
                    let coef = u[(row, i)];
                    for (o, x) in v.iter_mut().zip(w) {
                        *o += coef * x;
                    }
                }
                v
            })
            .collect();
        best = best.min(ensemble_average(&members, rho, cut, measure)?);
        history.push(best);
    }
    Ok(RoofSearch { best, eigen_ensemble, history, rank, seed })
}
