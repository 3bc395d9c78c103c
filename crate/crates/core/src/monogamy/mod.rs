//! Monogamy inequalities and residual quantities.
//!
//! Every check produces a [`MonogamyReport`] carrying both sides of the
//! inequality and its slack (`rhs - lhs`).

mod campaign;
mod partition;
mod roof;
mod slocc;

pub use campaign::{conjecture_campaign, BlockingStats, CampaignConfig, CampaignSummary};
pub use partition::BlockPartition;
pub use roof::{convex_roof_upper_bound, RoofMeasure, RoofSearch};
pub use slocc::{classify_slocc, class_table, SloccClass, SloccReport, ClassRow};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{bipartite, bipartite_pure, concurrence_wootters, negativity, Measure, PartitionSpec};
use crate::states::{ghz_w_mixture, DensityMatrix, StateVector};

/// An inequality holds when `slack >= -HOLD_TOL`.
pub const HOLD_TOL: f64 = 1e-9;
/// A holding inequality is strict when `slack > STRICT_TOL`.
pub const STRICT_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub hold: f64,
    pub strict: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { hold: HOLD_TOL, strict: STRICT_TOL }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityId {
    /// `C²_AB + C²_AC ≤ C²_{A:BC}` on three qubits.
    Ckw,
    /// `Σ_j C²(focus, j) ≤ C²(focus : rest)`
    ConcurrenceQubitwise,
    NegativityQubitwise,
    RealignmentQubitwise,
    /// Qubit pairs plus one multi-qubit block, negativity.
    NegativityBlock,
    RealignmentBlock,
    /// `N_AB ≤ (1 + √(1 − 4N²_{C:AB}))/4`
    NegativityPairBound,
    RealignmentPairBound,
}

impl InequalityId {
    fn qubitwise(m: Measure) -> Self {
        match m {
            Measure::Concurrence => Self::ConcurrenceQubitwise,
            Measure::Negativity => Self::NegativityQubitwise,
            Measure::Realignment => Self::RealignmentQubitwise,
        }
    }
}

/// Seed and stream a sampled state was drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedLineage {
    pub base_seed: u64,
    pub stream: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonogamyReport {
    pub inequality_id: InequalityId,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub holds: bool,
    pub strict: bool,
    pub cut_description: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<SeedLineage>,
}

impl MonogamyReport {
    pub fn new(id: InequalityId, lhs: f64, rhs: f64, cut_description: String, tol: &Tolerances) -> Self {
        let slack = rhs - lhs;
        Self {
            inequality_id: id,
            lhs,
            rhs,
            slack,
            tolerance: tol.hold,
            holds: slack >= -tol.hold,
            strict: slack > tol.strict,
            cut_description,
            seed: None,
        }
    }

    pub fn with_seed(mut self, seed: SeedLineage) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Re-evaluates `holds`/`strict` under other tolerances.
    pub fn retolerate(&self, tol: &Tolerances) -> Self {
        let mut r = Self::new(self.inequality_id, self.lhs, self.rhs, self.cut_description.clone(), tol);
        r.seed = self.seed;
        r
    }
}

fn require_qubits(dims: &crate::qmat::DimSpec, n: Option<usize>) -> Result<()> {
    if !dims.is_qubits() {
        return Err(Error::arg("all subsystems must be qubits"));
    }
    if let Some(n) = n {
        if dims.len() != n {
            return Err(Error::arg(format!("expected {n} qubits, got {}", dims.len())));
        }
    }
    Ok(())
}

/// Measure between `focus` and `group` on the reduced state of `{focus} ∪ group`,
/// cut as `focus : group`.
pub(crate) fn reduced_pair_measure(
    psi: &StateVector,
    focus: usize,
    group: &[usize],
    measure: Measure,
) -> Result<f64> {
    let mut keep: Vec<usize> = group.to_vec();
    keep.push(focus);
    keep.sort_unstable();
    let rho = psi.reduced(&keep)?;
    let pos = keep.iter().position(|&k| k == focus).expect("focus is kept");
    let cut = PartitionSpec::single(pos, keep.len())?;
    bipartite(measure, &rho, &cut)
}

/// `Σ_{j≠focus} m²(focus, j) ≤ m²(focus : rest)` for a pure `n ≥ 3` qubit state.
pub fn monogamy_qubitwise(psi: &StateVector, focus: usize, measure: Measure) -> Result<MonogamyReport> {
    monogamy_qubitwise_with(psi, focus, measure, &Tolerances::default())
}

pub fn monogamy_qubitwise_with(
    psi: &StateVector,
    focus: usize,
    measure: Measure,
    tol: &Tolerances,
) -> Result<MonogamyReport> {
    require_qubits(psi.dims(), None)?;
    let n = psi.num_subsystems();
    if n < 3 {
        return Err(Error::arg(format!("qubitwise monogamy needs n >= 3 qubits, got {n}")));
    }
    let cut = PartitionSpec::single(focus, n)?;
    let mut lhs = 0.0;
    for j in (0..n).filter(|&j| j != focus) {
        lhs += reduced_pair_measure(psi, focus, &[j], measure)?.powi(2);
    }
    let rhs = bipartite_pure(measure, psi, &cut)?.powi(2);
    Ok(MonogamyReport::new(InequalityId::qubitwise(measure), lhs, rhs, format!("{measure} {cut}"), tol))
}

/// `C²_AB + C²_AC ≤ C²_{A:BC}` with Wootters concurrence on the reduced pairs.
pub fn ckw_check(psi: &StateVector) -> Result<MonogamyReport> {
    require_qubits(psi.dims(), Some(3))?;
    let mut r = monogamy_qubitwise(psi, 0, Measure::Concurrence)?;
    r.inequality_id = InequalityId::Ckw;
    Ok(r)
}

/// `τ = C²_{A:BC} − C²_AB − C²_AC`, with `[-HOLD_TOL, 0)` clipped to 0.
pub fn three_tangle_pure(psi: &StateVector) -> Result<f64> {
    let r = ckw_check(psi)?;
    Ok(if r.slack < 0.0 && r.slack >= -HOLD_TOL { 0.0 } else { r.slack })
}

/// `π = N²_{A:BC} − N²_AB − N²_AC` for a pure or mixed three-qubit state.
pub fn residual_pi(rho: &DensityMatrix) -> Result<f64> {
    require_qubits(rho.dims(), Some(3))?;
    let cut = PartitionSpec::single(0, 3)?;
    let pair = PartitionSpec::single(0, 2)?;
    let n_abc = negativity(rho, &cut)?;
    let n_ab = negativity(&rho.reduced(&[0, 1])?, &pair)?;
    let n_ac = negativity(&rho.reduced(&[0, 2])?, &pair)?;
    Ok(n_abc.powi(2) - n_ab.powi(2) - n_ac.powi(2))
}

/// `Σ_g m²(focus, g) ≤ m²(focus : rest)` over the groups of `partition`.
/// Only negativity and realignment are accepted.
pub fn monogamy_block(psi: &StateVector, partition: &BlockPartition, measure: Measure) -> Result<MonogamyReport> {
    monogamy_block_with(psi, partition, measure, &Tolerances::default())
}

pub fn monogamy_block_with(
    psi: &StateVector,
    partition: &BlockPartition,
    measure: Measure,
    tol: &Tolerances,
) -> Result<MonogamyReport> {
    require_qubits(psi.dims(), None)?;
    let n = psi.num_subsystems();
    partition.check(n)?;
    let id = match measure {
        Measure::Negativity => InequalityId::NegativityBlock,
        Measure::Realignment => InequalityId::RealignmentBlock,
        Measure::Concurrence => {
            return Err(Error::arg("block monogamy is defined for negativity and realignment"))
        }
    };
    let mut lhs = 0.0;
    for g in partition.groups() {
        lhs += reduced_pair_measure(psi, partition.focus(), g, measure)?.powi(2);
    }
    let cut = PartitionSpec::single(partition.focus(), n)?;
    let rhs = bipartite_pure(measure, psi, &cut)?.powi(2);
    Ok(MonogamyReport::new(id, lhs, rhs, format!("{measure} {partition}"), tol))
}

/// Both pair bounds on a three-qubit state, with their slacks `τ_N` and `τ_R`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairBoundReport {
    pub negativity: MonogamyReport,
    pub realignment: MonogamyReport,
    pub tau_n: f64,
    pub tau_r: f64,
}

fn pair_bound_rhs(m_c_ab: f64) -> Result<f64> {
    let mut rad = 1.0 - 4.0 * m_c_ab * m_c_ab;
    if rad < -HOLD_TOL {
        return Err(Error::NonPhysical(format!(
            "radicand 1 - 4m² = {rad:.3e} is negative; state is not physical"
        )));
    }
    if rad < 0.0 {
        rad = 0.0;
    }
    Ok((1.0 + rad.sqrt()) / 4.0)
}

/// `m_AB ≤ (1 + √(1 − 4m²_{C:AB}))/4` for negativity and realignment, any
/// three-qubit state.
pub fn pair_bounds(rho: &DensityMatrix) -> Result<PairBoundReport> {
    pair_bounds_with(rho, &Tolerances::default())
}

pub fn pair_bounds_with(rho: &DensityMatrix, tol: &Tolerances) -> Result<PairBoundReport> {
    require_qubits(rho.dims(), Some(3))?;
    let rho_ab = rho.reduced(&[0, 1])?;
    let ab = PartitionSpec::single(0, 2)?;
    let c_ab = PartitionSpec::single(2, 3)?;
    let mk = |measure: Measure, id: InequalityId| -> Result<MonogamyReport> {
        let lhs = bipartite(measure, &rho_ab, &ab)?;
        let rhs = pair_bound_rhs(bipartite(measure, rho, &c_ab)?)?;
        Ok(MonogamyReport::new(id, lhs, rhs, format!("{measure} AB vs C:AB"), tol))
    };
    let negativity = mk(Measure::Negativity, InequalityId::NegativityPairBound)?;
    let realignment = mk(Measure::Realignment, InequalityId::RealignmentPairBound)?;
    Ok(PairBoundReport {
        tau_n: negativity.slack,
        tau_r: realignment.slack,
        negativity,
        realignment,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    pub tau_n: f64,
    pub tau_r: f64,
}

/// `τ_N(p)`, `τ_R(p)` for `ρ(p) = p|W⟩⟨W| + (1−p)|GHZ⟩⟨GHZ|`.
pub fn tau_sweep(grid: &[f64]) -> Result<Vec<SweepRow>> {
    grid.iter()
        .map(|&p| {
            let r = pair_bounds(&ghz_w_mixture(p)?)?;
            Ok(SweepRow { p, tau_n: r.tau_n, tau_r: r.tau_r })
        })
        .collect()
}

/// `0, step, 2·step, …` up to 1, always ending at exactly 1.
pub fn unit_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::arg(format!("grid step {step} outside (0, 1]")));
    }
    let n = (1.0 / step + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|k| (k as f64 * step).min(1.0)).collect();
    if 1.0 - grid[n] > 1e-12 {
        grid.push(1.0);
    } else {
        grid[n] = 1.0;
    }
    Ok(grid)
}

/// Concurrence between the two qubits of a reduced pair, exposed for reports.
pub fn pair_concurrence(psi: &StateVector, a: usize, b: usize) -> Result<f64> {
    let rho = psi.reduced(&[a.min(b), a.max(b)])?;
    concurrence_wootters(&rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::DimSpec;
    use crate::states::{bell_phi_plus, ghz, haar_unitary, product_bits, qubit, sample_rng, w};
    use approx::assert_abs_diff_eq;

    // Brute-force oracle for the reduced W pair: the partial transpose of
    // ρ_AB = ⅓|00⟩⟨00| + ⅔|Ψ+⟩⟨Ψ+| has a 2×2 block [[1/3, 1/3], [1/3, 0]] whose
    // negative eigenvalue is (1 − √5)/6; hence N_AB = (√5 − 1)/6.
    fn w_pair_negativity_oracle() -> f64 {
        let (a, b, d) = (1.0 / 3.0, 1.0 / 3.0, 0.0);
        let tr = a + d;
        let det = a * d - b * b;
        let low = tr / 2.0 - ((tr / 2.0f64).powi(2) - det).sqrt();
        -low
    }

    #[test]
    fn ckw_examples() {
        let g = ckw_check(&ghz(3).unwrap()).unwrap();
        assert_abs_diff_eq!(g.lhs, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(g.rhs, 1.0, epsilon = 1e-9);
        assert!(g.holds && g.strict);

        let wr = ckw_check(&w(3).unwrap()).unwrap();
        assert_abs_diff_eq!(wr.lhs, 8.0 / 9.0, epsilon = 1e-9);
        assert_abs_diff_eq!(wr.rhs, 8.0 / 9.0, epsilon = 1e-9);
        assert!(wr.slack.abs() < 1e-9 && wr.holds && !wr.strict);

        let p = ckw_check(&product_bits(&[0, 1, 0]).unwrap()).unwrap();
        assert_abs_diff_eq!(p.lhs, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(p.rhs, 0.0, epsilon = 1e-9);
        assert!(p.holds);
        assert!(ckw_check(&ghz(4).unwrap()).is_err());
    }

    #[test]
    fn three_tangle_examples() {
        assert_abs_diff_eq!(three_tangle_pure(&ghz(3).unwrap()).unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(three_tangle_pure(&w(3).unwrap()).unwrap(), 0.0, epsilon = 1e-9);
        let bell_a = bell_phi_plus().tensor(&qubit(0));
        assert_abs_diff_eq!(three_tangle_pure(&bell_a).unwrap(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn residual_pi_examples() {
        assert_abs_diff_eq!(residual_pi(&ghz(3).unwrap().to_density()).unwrap(), 0.25, epsilon = 1e-10);
        let n_ab = w_pair_negativity_oracle();
        assert_abs_diff_eq!(n_ab, (5f64.sqrt() - 1.0) / 6.0, epsilon = 1e-15);
        let expect = 2.0 / 9.0 - 2.0 * n_ab * n_ab;
        let got = residual_pi(&w(3).unwrap().to_density()).unwrap();
        assert_abs_diff_eq!(got, expect, epsilon = 1e-10);
        assert_abs_diff_eq!(got, (5f64.sqrt() - 1.0) / 9.0, epsilon = 1e-10);
        assert_abs_diff_eq!(residual_pi(&product_bits(&[1, 1, 0]).unwrap().to_density()).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn qubitwise_ghz_any_focus() {
        for n in 3..=5 {
            let g = ghz(n).unwrap();
            for focus in 0..n {
                for (m, rhs) in [(Measure::Concurrence, 1.0), (Measure::Negativity, 0.25), (Measure::Realignment, 0.25)] {
                    let r = monogamy_qubitwise(&g, focus, m).unwrap();
                    assert_abs_diff_eq!(r.lhs, 0.0, epsilon = 1e-9);
                    assert_abs_diff_eq!(r.rhs, rhs, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn qubitwise_w4_negativity_has_slack() {
        let r = monogamy_qubitwise(&w(4).unwrap(), 0, Measure::Negativity).unwrap();
        assert!(r.holds && r.strict, "{r:?}");
        assert!(monogamy_qubitwise(&bell_phi_plus(), 0, Measure::Negativity).is_err());
    }

    #[test]
    fn block_examples() {
        let g4 = ghz(4).unwrap();
        let part = BlockPartition::parse("0|1|2,3", 4).unwrap();
        let r = monogamy_block(&g4, &part, Measure::Negativity).unwrap();
        // brute force: the reduced state on {0,2,3} of GHZ(4) is GHZ-diagonal
        // (|000⟩⟨000| + |111⟩⟨111|)/2, which is PPT across 0:23.
        let oracle = {
            let rho = g4.reduced(&[0, 2, 3]).unwrap();
            negativity(&rho, &PartitionSpec::single(0, 3).unwrap()).unwrap()
        };
        assert_abs_diff_eq!(r.lhs, oracle * oracle, epsilon = 1e-12);
        assert!(r.holds);

        let p = monogamy_block(&product_bits(&[0, 1, 1, 0]).unwrap(), &part, Measure::Realignment).unwrap();
        assert_abs_diff_eq!(p.lhs, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.rhs, 0.0, epsilon = 1e-12);

        let w5 = w(5).unwrap();
        let part5 = BlockPartition::parse("0|1|2|3,4", 5).unwrap();
        for m in [Measure::Negativity, Measure::Realignment] {
            let r = monogamy_block(&w5, &part5, m).unwrap();
            assert!(r.holds && r.strict, "{r:?}");
        }
        assert!(monogamy_block(&w5, &part5, Measure::Concurrence).is_err());
    }

    #[test]
    fn pair_bound_examples() {
        let g = pair_bounds(&ghz(3).unwrap().to_density()).unwrap();
        assert_abs_diff_eq!(g.negativity.lhs, 0.0, epsilon = 1e-12);
        assert!(g.negativity.rhs >= 0.25 - 1e-9 && g.negativity.strict);
        assert!(g.realignment.rhs >= 0.25 - 1e-9 && g.realignment.strict);

        // Bell pair on AB with local unitaries, arbitrary pure C: equality.
        let mut rng = sample_rng(31, 0);
        let u = crate::qmat::kron(&haar_unitary(2, &mut rng), &haar_unitary(2, &mut rng));
        let ab = bell_phi_plus().evolve(&u).unwrap();
        let cq = crate::states::haar_random_pure_dims(DimSpec::qubits(1), &mut rng);
        let r = pair_bounds(&ab.tensor(&cq).to_density()).unwrap();
        assert_abs_diff_eq!(r.negativity.slack, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.realignment.slack, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn pair_bound_on_mixture_matches_direct_evaluation() {
        let rho = ghz_w_mixture(0.5).unwrap();
        let r = pair_bounds(&rho).unwrap();
        let ab = rho.reduced(&[0, 1]).unwrap();
        let n_ab = negativity(&ab, &PartitionSpec::single(0, 2).unwrap()).unwrap();
        let n_c = negativity(&rho, &PartitionSpec::parse("2:01", 3).unwrap()).unwrap();
        let expect = (1.0 + (1.0 - 4.0 * n_c * n_c).sqrt()) / 4.0 - n_ab;
        assert_abs_diff_eq!(r.tau_n, expect, epsilon = 1e-12);
        assert!(r.negativity.holds && r.realignment.holds);
    }

    #[test]
    fn pair_bound_radicand_guard() {
        assert!(matches!(pair_bound_rhs(0.6), Err(Error::NonPhysical(_))));
        assert_abs_diff_eq!(pair_bound_rhs(0.5 + 1e-12).unwrap(), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn grid_arithmetic() {
        assert_eq!(unit_grid(0.01).unwrap().len(), 101);
        assert_eq!(unit_grid(1.0).unwrap(), vec![0.0, 1.0]);
        let g = unit_grid(0.3).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert!(unit_grid(0.0).is_err());
        assert!(unit_grid(1.5).is_err());
    }

    #[test]
    fn sweep_rejects_out_of_range() {
        assert!(tau_sweep(&[0.5, 1.2]).is_err());
    }

    #[test]
    fn report_tolerances() {
        let r = MonogamyReport::new(InequalityId::Ckw, 1.0, 1.0 - 5e-10, "x".into(), &Tolerances::default());
        assert!(r.holds && !r.strict);
        let tight = r.retolerate(&Tolerances { hold: 1e-12, strict: 1e-7 });
        assert!(!tight.holds);
    }
}
