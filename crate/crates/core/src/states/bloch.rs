//! Two-qubit Pauli (Bloch) representation:
//! `ρ = ¼(I + n_A·σ⊗I + I⊗n_B·σ + Σ c_{αβ} σ_α⊗σ_β)`.

use serde::{Deserialize, Serialize};

use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::qmat::{c, kron, ComplexMatrix, Pauli};

/// Local polarization vectors and the correlation tensor of a two-qubit
/// operator. Components are unnormalized Pauli expectations in `(x, y, z)`
/// order; row index of `c` belongs to subsystem A.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationDecomposition {
    pub n_a: [f64; 3],
    pub n_b: [f64; 3],
    pub c: [[f64; 3]; 3],
}

impl CorrelationDecomposition {
    pub fn zero() -> Self {
        Self { n_a: [0.0; 3], n_b: [0.0; 3], c: [[0.0; 3]; 3] }
    }

    pub fn from_correlations(c: [[f64; 3]; 3]) -> Self {
        Self { n_a: [0.0; 3], n_b: [0.0; 3], c }
    }

    pub fn local_norms(&self) -> (f64, f64) {
        let n = |v: &[f64; 3]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        (n(&self.n_a), n(&self.n_b))
    }

    /// Both single-qubit marginals are `I/2` within `tol`.
    pub fn has_mixed_marginals(&self, tol: f64) -> bool {
        let (a, b) = self.local_norms();
        a < tol && b < tol
    }
}

fn expect(rho: &ComplexMatrix, op: &ComplexMatrix) -> f64 {
    rho.matmul(op).expect("4x4 operators").trace().re
}

pub fn bloch_decompose(rho: &DensityMatrix) -> Result<CorrelationDecomposition> {
    if rho.dims().as_slice() != [2, 2] {
        return Err(Error::dims(format!(
            "Bloch decomposition needs a two-qubit state, got dims {:?}",
            rho.dims().as_slice()
        )));
    }
    let m = rho.matrix();
    let id = ComplexMatrix::identity(2);
    let mut d = CorrelationDecomposition::zero();
    for (a, pa) in Pauli::ALL.iter().enumerate() {
        d.n_a[a] = expect(m, &kron(&pa.matrix(), &id));
        d.n_b[a] = expect(m, &kron(&id, &pa.matrix()));
        for (b, pb) in Pauli::ALL.iter().enumerate() {
            d.c[a][b] = expect(m, &kron(&pa.matrix(), &pb.matrix()));
        }
    }
    Ok(d)
}

/// Reassembled 4×4 operator; not checked for positivity.
pub fn bloch_assemble(d: &CorrelationDecomposition) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let mut acc = ComplexMatrix::identity(4);
    for (a, pa) in Pauli::ALL.iter().enumerate() {
        acc = &acc + &kron(&pa.matrix(), &id).scale_real(d.n_a[a]);
        acc = &acc + &kron(&id, &pa.matrix()).scale_real(d.n_b[a]);
        for (b, pb) in Pauli::ALL.iter().enumerate() {
            acc = &acc + &kron(&pa.matrix(), &pb.matrix()).scale_real(d.c[a][b]);
        }
    }
    acc.scale(c(0.25, 0.0))
}
