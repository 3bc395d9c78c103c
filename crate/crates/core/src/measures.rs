//! Bipartite entanglement measures: Wootters concurrence, pure-state
//! concurrence across a cut, negativity, and the realignment (cross-norm)
//! measure, plus the Schmidt decomposition of a qubit against the rest.

use std::fmt;

use nalgebra::SVD;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{
    c, kron, partial_transpose, permute_subsystems, permute_vector, realign, ComplexMatrix,
    DimSpec, Pauli, C64,
};
use crate::states::{DensityMatrix, StateVector};

/// Negative radicands down to this value are rounding noise and clip to zero.
pub const RADICAND_CLIP: f64 = 1e-12;
/// Eigenvalues of `ρρ̃` below this fraction of the largest one are rounding
/// noise (about 64 ulp) and are set to zero before taking square roots.
pub const SPIN_FLIP_NOISE: f64 = 64.0 * f64::EPSILON;

fn floor_noise(lam: &mut [f64]) {
    let top = lam.iter().cloned().fold(0.0, f64::max);
    for l in lam.iter_mut() {
        if *l < SPIN_FLIP_NOISE * top {
            *l = 0.0;
        }
    }
}

/// Ordered bipartition `left : right` of subsystem indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSpec {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl PartitionSpec {
    /// `left` and `right` must be disjoint, nonempty, and cover `0..n`.
    pub fn new(left: Vec<usize>, right: Vec<usize>, n: usize) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::arg("both sides of a cut must be nonempty"));
        }
        let mut seen = vec![false; n];
        for &k in left.iter().chain(&right) {
            if k >= n {
                return Err(Error::arg(format!("subsystem {k} out of range for {n} subsystems")));
            }
            if seen[k] {
                return Err(Error::arg(format!("subsystem {k} appears twice in the cut")));
            }
            seen[k] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::arg(format!("cut does not cover subsystem {missing}")));
        }
        Ok(Self { left, right })
    }

    /// `focus : everything else`.
    pub fn single(focus: usize, n: usize) -> Result<Self> {
        Self::new(vec![focus], (0..n).filter(|&k| k != focus).collect(), n)
    }

    /// Parses `"0:12"` (one digit per subsystem) or `"0:1,2"`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let (l, r) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("cut {text:?} has no ':'")))?;
        Self::new(parse_index_list(l)?, parse_index_list(r)?, n)
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn num_subsystems(&self) -> usize {
        self.left.len() + self.right.len()
    }

    fn check_against(&self, dims: &DimSpec) -> Result<()> {
        if self.num_subsystems() != dims.len() {
            return Err(Error::arg(format!(
                "cut {self} covers {} subsystems but the state has {}",
                self.num_subsystems(),
                dims.len()
            )));
        }
        Ok(())
    }

    /// Left block followed by right block.
    fn order(&self) -> Vec<usize> {
        self.left.iter().chain(&self.right).copied().collect()
    }
}

pub(crate) fn parse_index_list(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let bad = |tok: &str| Error::Parse(format!("bad subsystem index {tok:?}"));
    if s.contains(',') {
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad(t)))
            .collect()
    } else {
        s.chars()
            .map(|ch| ch.to_digit(10).map(|d| d as usize).ok_or_else(|| bad(&ch.to_string())))
            .collect()
    }
}

fn fmt_indices(idx: &[usize]) -> String {
    if idx.iter().all(|&k| k < 10) {
        idx.iter().map(|k| k.to_string()).collect()
    } else {
        idx.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for PartitionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", fmt_indices(&self.left), fmt_indices(&self.right))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Concurrence,
    Negativity,
    Realignment,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Measure::Concurrence => "concurrence",
            Measure::Negativity => "negativity",
            Measure::Realignment => "realignment",
        };
        f.write_str(s)
    }
}

fn clip_radicand(x: f64) -> Result<f64> {
    if x >= 0.0 {
        Ok(x)
    } else if x >= -RADICAND_CLIP {
        Ok(0.0)
    } else {
        Err(Error::NumericFailure(format!("negative radicand {x:.3e}")))
    }
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims().as_slice() != [2, 2] {
        return Err(Error::dims(format!(
            "two-qubit state required, got dims {:?}",
            rho.dims().as_slice()
        )));
    }
    Ok(())
}

/// `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`, conjugation in the computational basis.
pub fn spin_flip(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    require_two_qubits(rho)?;
    let yy = kron(&Pauli::Y.matrix(), &Pauli::Y.matrix());
    Ok(&(&yy * &rho.matrix().conj()) * &yy)
}

/// Square roots of the eigenvalues of `ρρ̃`, descending. Computed from the
/// Hermitian matrix `√ρ ρ̃ √ρ`, which has the same spectrum.
pub fn spin_flip_roots(rho: &DensityMatrix) -> Result<[f64; 4]> {
    require_two_qubits(rho)?;
    let tilde = spin_flip(rho)?;
    let (vals, vecs) = rho.matrix().hermitian_eigh()?;
    let mut sqrt_rho = ComplexMatrix::zeros(4, 4);
    for (lam, v) in vals.iter().zip(&vecs) {
        let s = lam.max(0.0).sqrt();
        sqrt_rho = &sqrt_rho + &ComplexMatrix::outer(v).scale_real(s);
    }
    let h = (&(&sqrt_rho * &tilde) * &sqrt_rho).hermitian_part();
    let mut mu = h.hermitian_eigenvalues()?;
    for m in mu.iter_mut() {
        *m = clip_radicand(*m)?;
    }
    floor_noise(&mut mu);
    let mut out = [0.0; 4];
    for (o, m) in out.iter_mut().zip(&mu) {
        *o = m.sqrt();
    }
    Ok(out)
}

/// Wootters concurrence `max{0, √λ₁ − √λ₂ − √λ₃ − √λ₄}` of a two-qubit state.
pub fn concurrence_wootters(rho: &DensityMatrix) -> Result<f64> {
    let l = spin_flip_roots(rho)?;
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// Same quantity evaluated literally from the (non-Hermitian) spectrum of
/// `ρ(σ_y⊗σ_y)ρ*(σ_y⊗σ_y)`. Kept as an independent route for cross-checks.
pub fn concurrence_wootters_direct(rho: &DensityMatrix) -> Result<f64> {
    let prod = rho.matrix().matmul(&spin_flip(rho)?)?;
    let mut lam: Vec<f64> = prod.eigenvalues()?.iter().map(|z| z.re.max(0.0)).collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    floor_noise(&mut lam);
    Ok((lam[0].sqrt() - lam[1].sqrt() - lam[2].sqrt() - lam[3].sqrt()).max(0.0))
}

/// `2√det ρ_A` for a pure state and a cut whose left block is one qubit.
pub fn concurrence_pure_cut(psi: &StateVector, cut: &PartitionSpec) -> Result<f64> {
    cut.check_against(psi.dims())?;
    if cut.left().len() != 1 || psi.dims().as_slice()[cut.left()[0]] != 2 {
        return Err(Error::arg(format!(
            "cut {cut}: left block must be a single qubit"
        )));
    }
    let ra = psi.reduced(cut.left())?;
    let m = ra.matrix();
    let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
    Ok(2.0 * clip_radicand(det)?.sqrt())
}

/// Pure-state concurrence `√(2(1 − Tr ρ_L²))` for an arbitrary cut. Agrees
/// with [`concurrence_pure_cut`] when the left block is one qubit.
pub fn pure_concurrence(psi: &StateVector, cut: &PartitionSpec) -> Result<f64> {
    cut.check_against(psi.dims())?;
    let purity = psi.reduced(cut.left())?.purity();
    Ok((2.0 * clip_radicand(1.0 - purity)?).sqrt())
}

/// `(‖ρ^{T_L}‖₁ − 1)/2` with the transpose taken on the left block.
pub fn negativity(rho: &DensityMatrix, cut: &PartitionSpec) -> Result<f64> {
    cut.check_against(rho.dims())?;
    let pt = partial_transpose(rho.matrix(), rho.dims(), cut.left())?;
    Ok(((pt.trace_norm()? - 1.0) / 2.0).max(0.0))
}

/// Negativity as the absolute sum of the negative eigenvalues of `ρ^{T_L}`.
pub fn negativity_from_spectrum(rho: &DensityMatrix, cut: &PartitionSpec) -> Result<f64> {
    cut.check_against(rho.dims())?;
    let pt = partial_transpose(rho.matrix(), rho.dims(), cut.left())?;
    Ok(pt.hermitian_eigenvalues()?.iter().filter(|&&v| v < 0.0).map(|v| -v).sum())
}

/// `‖R(ρ)‖₁` for the realignment over `left : right`.
pub fn realignment_trace_norm(rho: &DensityMatrix, cut: &PartitionSpec) -> Result<f64> {
    cut.check_against(rho.dims())?;
    let (m, dims) = permute_subsystems(rho.matrix(), rho.dims(), &cut.order())?;
    let nl = cut.left().len();
    let da: usize = dims.as_slice()[..nl].iter().product();
    let db: usize = dims.as_slice()[nl..].iter().product();
    realign(&m, &DimSpec::new(vec![da, db])?)?.trace_norm()
}

/// `max{(‖R(ρ)‖₁ − 1)/2, 0}`
pub fn realignment_measure(rho: &DensityMatrix, cut: &PartitionSpec) -> Result<f64> {
    Ok(((realignment_trace_norm(rho, cut)? - 1.0) / 2.0).max(0.0))
}

/// Evaluates `measure` on a (possibly mixed) state across `cut`. Concurrence is
/// only defined here for two-qubit states.
pub fn bipartite(measure: Measure, rho: &DensityMatrix, cut: &PartitionSpec) -> Result<f64> {
    match measure {
        Measure::Concurrence => {
            cut.check_against(rho.dims())?;
            concurrence_wootters(rho)
        }
        Measure::Negativity => negativity(rho, cut),
        Measure::Realignment => realignment_measure(rho, cut),
    }
}

/// Same as [`bipartite`] for a pure state; concurrence uses the pure-state
/// formula so any single-qubit cut is allowed.
pub fn bipartite_pure(measure: Measure, psi: &StateVector, cut: &PartitionSpec) -> Result<f64> {
    match measure {
        Measure::Concurrence => concurrence_pure_cut(psi, cut),
        _ => bipartite(measure, &psi.to_density(), cut),
    }
}

/// `|ψ⟩ = Σₖ sₖ |eₖ⟩|fₖ⟩` for a qubit against the rest of the system.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    /// Descending, always two entries.
    pub coefficients: [f64; 2],
    pub left_vectors: [Vec<C64>; 2],
    pub right_vectors: [Vec<C64>; 2],
    /// Subsystem order of `left ⊗ right` relative to the source state.
    pub order: Vec<usize>,
}

impl SchmidtDecomposition {
    /// `λ₁λ₂` with `λᵢ = sᵢ²`.
    pub fn lambda_product(&self) -> f64 {
        (self.coefficients[0] * self.coefficients[1]).powi(2)
    }

    /// Rebuilds the ket in `order` (left qubit first).
    pub fn reconstruct(&self) -> Vec<C64> {
        let n = self.left_vectors[0].len() * self.right_vectors[0].len();
        let mut out = vec![c(0.0, 0.0); n];
        for k in 0..2 {
            let term = crate::qmat::kron_vec(&self.left_vectors[k], &self.right_vectors[k]);
            for (o, t) in out.iter_mut().zip(term) {
                *o += t * self.coefficients[k];
            }
        }
        out
    }
}

pub fn schmidt_2xd(psi: &StateVector, cut: &PartitionSpec) -> Result<SchmidtDecomposition> {
    cut.check_against(psi.dims())?;
    if cut.left().len() != 1 || psi.dims().as_slice()[cut.left()[0]] != 2 {
        return Err(Error::arg(format!("cut {cut}: left block must be a single qubit")));
    }
    let order = cut.order();
    let (v, _) = permute_vector(psi.amplitudes(), psi.dims(), &order)?;
    let d = v.len() / 2;
    let m = nalgebra::DMatrix::from_row_slice(2, d, &v);
    let svd = SVD::try_new(m, true, true, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NumericFailure("SVD did not converge".into()))?;
    let u = svd.u.expect("requested u");
    let vt = svd.v_t.expect("requested v_t");
    let mut idx = [0usize, 1];
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let left = |k: usize| u.column(k).iter().copied().collect::<Vec<_>>();
    let right = |k: usize| vt.row(k).iter().copied().collect::<Vec<_>>();
    Ok(SchmidtDecomposition {
        coefficients: [svd.singular_values[idx[0]], svd.singular_values[idx[1]]],
        left_vectors: [left(idx[0]), left(idx[1])],
        right_vectors: [right(idx[0]), right(idx[1])],
        order,
    })
}
