//! Pure and mixed multi-qubit states and the named families used throughout:
//! GHZ, W, products, the GHZ/W mixture, Haar-random states.

mod bloch;
mod file;
mod random;

pub use bloch::{bloch_assemble, bloch_decompose, CorrelationDecomposition};
pub use file::{parse_state_file, read_state_file, write_state_file, AnyState, StateFile};
pub use random::{
    haar_random_pure, haar_random_pure_dims, haar_unitary, random_local_unitaries, random_mixed,
    sample_rng, SampleRng,
};

use crate::error::{Error, Result};
use crate::qmat::{c, kron_vec, partial_trace, permute_vector, ComplexMatrix, DimSpec, C64, EIGEN_CLIP, HERMITIAN_TOL};

/// Norm and trace tolerance for state invariants.
pub const STATE_TOL: f64 = 1e-10;

/// Normalized ket over an ordered list of subsystems.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    dims: DimSpec,
    amps: Vec<C64>,
}

impl StateVector {
    /// Validates length and unit norm.
    pub fn new(dims: DimSpec, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != dims.total() {
            return Err(Error::InvalidState {
                invariant: "length equals product of dims",
                detail: format!("{} amplitudes for dims {:?}", amps.len(), dims.as_slice()),
            });
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState {
                invariant: "finite amplitudes",
                detail: "amplitude list contains NaN or infinity".into(),
            });
        }
        let norm = norm(&amps);
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState {
                invariant: "unit norm",
                detail: format!("norm is {norm:.12}"),
            });
        }
        Ok(Self { dims, amps })
    }

    /// Rescales to unit norm before validating.
    pub fn normalized(dims: DimSpec, amps: Vec<C64>) -> Result<Self> {
        let n = norm(&amps);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::arg("cannot normalize a zero or non-finite vector"));
        }
        Self::new(dims, amps.into_iter().map(|z| z / n).collect())
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dims: DimSpec, index: usize) -> Result<Self> {
        if index >= dims.total() {
            return Err(Error::arg(format!("basis index {index} out of range")));
        }
        let mut amps = vec![c(0.0, 0.0); dims.total()];
        amps[index] = c(1.0, 0.0);
        Ok(Self { dims, amps })
    }

    /// Tensor product, `self` on the most significant factor.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut dims = self.dims.as_slice().to_vec();
        dims.extend_from_slice(other.dims.as_slice());
        StateVector {
            dims: DimSpec::new(dims).expect("dims of valid states are positive"),
            amps: kron_vec(&self.amps, &other.amps),
        }
    }

    pub fn dims(&self) -> &DimSpec {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            dims: self.dims.clone(),
            matrix: ComplexMatrix::outer(&self.amps),
        }
    }

    /// Reduced density operator on `keep`, computed from the amplitudes.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::arg("reduced state must keep at least one subsystem"));
        }
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        let mut order = keep.clone();
        order.extend((0..self.dims.len()).filter(|k| !keep.contains(k)));
        let (v, _) = permute_vector(&self.amps, &self.dims, &order)?;
        let kept_dims = DimSpec::new(self.dims.select(&keep))?;
        let dk = kept_dims.total();
        let dt = self.dims.total() / dk;
        let mut m = ComplexMatrix::zeros(dk, dk);
        for a in 0..dk {
            for b in a..dk {
                let z: C64 = (0..dt).map(|t| v[a * dt + t] * v[b * dt + t].conj()).sum();
                m[(a, b)] = z;
                m[(b, a)] = z.conj();
            }
        }
        Ok(DensityMatrix { dims: kept_dims, matrix: m })
    }

    /// Applies `u` to the whole state.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<StateVector> {
        let amps = u.matvec(&self.amps)?;
        StateVector::normalized(self.dims.clone(), amps)
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: DimSpec,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(dims: DimSpec, matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != dims.total() {
            return Err(Error::InvalidState {
                invariant: "matrix dimension equals product of dims",
                detail: format!(
                    "{}x{} matrix for dims {:?}",
                    matrix.rows(),
                    matrix.cols(),
                    dims.as_slice()
                ),
            });
        }
        let herm = matrix.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState {
                invariant: "Hermitian",
                detail: format!("max |m - m^dagger| = {herm:.3e}"),
            });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState {
                invariant: "unit trace",
                detail: format!("trace is {:.12}{:+.3e}i", tr.re, tr.im),
            });
        }
        let min_eig = matrix
            .hermitian_eigenvalues()?
            .last()
            .copied()
            .unwrap_or(0.0);
        if min_eig < -EIGEN_CLIP {
            return Err(Error::InvalidState {
                invariant: "positive semidefinite",
                detail: format!("minimum eigenvalue {min_eig:.6e}"),
            });
        }
        Ok(Self { dims, matrix })
    }

    /// For operators produced by maps known to preserve the invariants.
    pub(crate) fn trusted(dims: DimSpec, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), dims.total());
        Self { dims, matrix }
    }

    pub fn dims(&self) -> &DimSpec {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        let m = partial_trace(&self.matrix, &self.dims, &keep)?;
        Ok(Self::trusted(DimSpec::new(self.dims.select(&keep))?, m))
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.matrix.hermitian_eigenvalues()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.data().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `U ρ U†`
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        let m = u.matmul(&self.matrix)?.matmul(&u.adjoint())?;
        Ok(Self::trusted(self.dims.clone(), m.hermitian_part()))
    }

    /// Convex combination `Σ wᵢ ρᵢ`; weights must be nonnegative and sum to 1.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<DensityMatrix> {
        let first = parts.first().ok_or_else(|| Error::arg("empty mixture"))?.1;
        let total: f64 = parts.iter().map(|p| p.0).sum();
        if parts.iter().any(|p| p.0 < 0.0) || (total - 1.0).abs() > STATE_TOL {
            return Err(Error::arg("mixture weights must be nonnegative and sum to 1"));
        }
        let mut acc = ComplexMatrix::zeros(first.matrix.rows(), first.matrix.cols());
        for (w, rho) in parts {
            if rho.dims != first.dims {
                return Err(Error::dims("mixture components have different dims"));
            }
            acc = &acc + &rho.matrix.scale_real(*w);
        }
        Ok(Self::trusted(first.dims.clone(), acc))
    }
}

impl From<&StateVector> for DensityMatrix {
    fn from(psi: &StateVector) -> Self {
        psi.to_density()
    }
}

fn check_qubit_count(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::arg(format!("need at least 2 qubits, got {n}")));
    }
    Ok(())
}

/// `(|0…0⟩ + |1…1⟩)/√2`
pub fn ghz(n: usize) -> Result<StateVector> {
    check_qubit_count(n)?;
    let dims = DimSpec::qubits(n);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![c(0.0, 0.0); dims.total()];
    amps[0] = c(s, 0.0);
    amps[dims.total() - 1] = c(s, 0.0);
    Ok(StateVector { dims, amps })
}

/// Uniform superposition of the `n` single-excitation basis states.
pub fn w(n: usize) -> Result<StateVector> {
    check_qubit_count(n)?;
    let dims = DimSpec::qubits(n);
    let a = 1.0 / (n as f64).sqrt();
    let mut amps = vec![c(0.0, 0.0); dims.total()];
    for k in 0..n {
        amps[1 << k] = c(a, 0.0);
    }
    Ok(StateVector { dims, amps })
}

/// `(|00⟩ + |11⟩)/√2`
pub fn bell_phi_plus() -> StateVector {
    ghz(2).expect("two qubits")
}

/// Single-qubit computational basis state.
pub fn qubit(bit: usize) -> StateVector {
    StateVector::basis(DimSpec::qubits(1), bit & 1).expect("bit is 0 or 1")
}

/// Tensor product of single-qubit computational basis states, e.g. `&[0, 1, 1]`.
pub fn product_bits(bits: &[usize]) -> Result<StateVector> {
    if bits.is_empty() {
        return Err(Error::arg("empty bit string"));
    }
    let dims = DimSpec::qubits(bits.len());
    let index = bits.iter().fold(0, |acc, &b| (acc << 1) | (b & 1));
    StateVector::basis(dims, index)
}

/// `ρ(p) = p|W⟩⟨W| + (1−p)|GHZ⟩⟨GHZ|` on three qubits.
pub fn ghz_w_mixture(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::arg(format!("mixing weight p = {p} outside [0, 1]")));
    }
    let wd = w(3)?.to_density();
    let gd = ghz(3)?.to_density();
    DensityMatrix::mixture(&[(p, &wd), (1.0 - p, &gd)])
}
