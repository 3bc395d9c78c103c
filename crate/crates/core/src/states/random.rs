//! Seeded random states and unitaries.
//!
//! Every random object comes from ChaCha20. A campaign with base seed `s`
//! draws sample `i` from stream `i` of the generator keyed by `s`
//! (see [`sample_rng`]), so samples are independent of evaluation order.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::{DensityMatrix, StateVector};
use crate::error::{Error, Result};
use crate::qmat::{c, kron, ComplexMatrix, DimSpec, C64};

pub type SampleRng = ChaCha20Rng;

/// Generator for sample `index` of a run with base seed `seed`.
pub fn sample_rng(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

/// Haar-random pure state: i.i.d. complex Gaussian amplitudes, normalized.
pub fn haar_random_pure_dims<R: Rng + ?Sized>(dims: DimSpec, rng: &mut R) -> StateVector {
    loop {
        let amps: Vec<C64> = (0..dims.total()).map(|_| complex_normal(rng)).collect();
        // the all-zero draw has probability zero, but retry rather than panic
        if let Ok(s) = StateVector::normalized(dims.clone(), amps) {
            return s;
        }
    }
}

/// Haar-random `n`-qubit pure state from stream 0 of `seed`.
pub fn haar_random_pure(n: usize, seed: u64) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::arg("need at least one qubit"));
    }
    Ok(haar_random_pure_dims(DimSpec::qubits(n), &mut sample_rng(seed, 0)))
}

/// Haar-random unitary from the QR decomposition of a complex Ginibre matrix,
/// with the phases of `R`'s diagonal absorbed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = DMatrix::<C64>::from_fn(dim, dim, |_, _| complex_normal(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for row in 0..dim {
            q[(row, k)] *= phase;
        }
    }
    ComplexMatrix::from_nalgebra(&q)
}

/// `U₁ ⊗ U₂ ⊗ … ⊗ Uₙ` with independent Haar factors, one per subsystem.
pub fn random_local_unitaries<R: Rng + ?Sized>(dims: &DimSpec, rng: &mut R) -> ComplexMatrix {
    dims.as_slice()
        .iter()
        .map(|&d| haar_unitary(d, rng))
        .reduce(|acc, u| kron(&acc, &u))
        .expect("dims are nonempty")
}

/// Mixed `n_sys`-qubit state: partial trace of a Haar-random pure state on
/// `n_sys + n_env` qubits over the last `n_env`.
pub fn random_mixed<R: Rng + ?Sized>(n_sys: usize, n_env: usize, rng: &mut R) -> Result<DensityMatrix> {
    if n_sys == 0 {
        return Err(Error::arg("need at least one system qubit"));
    }
    let psi = haar_random_pure_dims(DimSpec::qubits(n_sys + n_env), rng);
    let keep: Vec<usize> = (0..n_sys).collect();
    psi.reduced(&keep)
}
