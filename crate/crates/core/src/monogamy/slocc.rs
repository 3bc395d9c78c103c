use std::fmt;

use serde::{Deserialize, Serialize};

use super::{residual_pi, three_tangle_pure};
use crate::error::{Error, Result};
use crate::states::{bell_phi_plus, ghz, product_bits, qubit, w, StateVector};
use crate::qmat::permute_vector;

/// Second eigenvalue of a single-qubit marginal above this counts as rank 2.
pub const RANK_TOL: f64 = 1e-9;
/// Three-tangle above this separates the GHZ class from the W class.
pub const TANGLE_TOL: f64 = 1e-6;
/// GHZ labels with tangle below this are flagged as borderline.
pub const TANGLE_BORDERLINE: f64 = 1e-4;

/// The six SLOCC classes of pure three-qubit states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SloccClass {
    #[serde(rename = "A-B-C")]
    Product,
    #[serde(rename = "A-BC")]
    ABc,
    #[serde(rename = "B-AC")]
    BAc,
    #[serde(rename = "C-AB")]
    CAb,
    W,
    #[serde(rename = "GHZ")]
    Ghz,
}

impl SloccClass {
    pub const ALL: [SloccClass; 6] = [Self::Product, Self::ABc, Self::BAc, Self::CAb, Self::W, Self::Ghz];
}

impl fmt::Display for SloccClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Product => "A-B-C",
            Self::ABc => "A-BC",
            Self::BAc => "B-AC",
            Self::CAb => "C-AB",
            Self::W => "W",
            Self::Ghz => "GHZ",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SloccReport {
    pub class: SloccClass,
    pub marginal_ranks: [usize; 3],
    pub three_tangle: f64,
    /// Labeled GHZ with a tangle close to the W threshold.
    pub borderline: bool,
}

/// Classifies a pure three-qubit state from the ranks of its single-qubit
/// marginals and its three-tangle.
pub fn classify_slocc(psi: &StateVector) -> Result<SloccReport> {
    if psi.dims().as_slice() != [2, 2, 2] {
        return Err(Error::arg(format!(
            "SLOCC classification needs three qubits, got dims {:?}",
            psi.dims().as_slice()
        )));
    }
    let mut ranks = [0usize; 3];
    for (k, r) in ranks.iter_mut().enumerate() {
        let ev = psi.reduced(&[k])?.eigenvalues()?;
        *r = if ev[1] > RANK_TOL { 2 } else { 1 };
    }
    let tangle = three_tangle_pure(psi)?;
    let pure_parties: Vec<usize> = (0..3).filter(|&k| ranks[k] == 1).collect();
    let class = match pure_parties.as_slice() {
        [] if tangle > TANGLE_TOL => SloccClass::Ghz,
        [] => SloccClass::W,
        [0] => SloccClass::ABc,
        [1] => SloccClass::BAc,
        [2] => SloccClass::CAb,
        // two pure marginals force the third; treat as fully product
        _ => SloccClass::Product,
    };
    Ok(SloccReport {
        class,
        marginal_ranks: ranks,
        three_tangle: tangle,
        borderline: class == SloccClass::Ghz && tangle <= TANGLE_BORDERLINE,
    })
}

/// A representative pure state of each class.
pub fn representative(class: SloccClass) -> StateVector {
    let bell = bell_phi_plus();
    match class {
        SloccClass::Product => product_bits(&[0, 0, 0]).expect("three bits"),
        SloccClass::ABc => qubit(0).tensor(&bell),
        SloccClass::BAc => {
            // Bell pair on (A, C), B in |0⟩
            let v = bell.tensor(&qubit(0));
            let dims = v.dims().clone();
            let (amps, _) = permute_vector(v.amplitudes(), &dims, &[0, 2, 1]).expect("valid permutation");
            StateVector::new(dims, amps).expect("permutation preserves norm")
        }
        SloccClass::CAb => bell.tensor(&qubit(0)),
        SloccClass::W => w(3).expect("three qubits"),
        SloccClass::Ghz => ghz(3).expect("three qubits"),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRow {
    pub class: SloccClass,
    pub tau_abc: f64,
    pub pi_abc: f64,
    pub tau_positive: bool,
    pub pi_positive: bool,
    /// The classifier agrees with the row label.
    pub classified_as: SloccClass,
}

/// Three-tangle and negativity residual for one representative of every class.
pub fn class_table() -> Result<Vec<ClassRow>> {
    SloccClass::ALL
        .iter()
        .map(|&class| {
            let psi = representative(class);
            let tau = three_tangle_pure(&psi)?;
            let pi = residual_pi(&psi.to_density())?;
            Ok(ClassRow {
                class,
                tau_abc: tau,
                pi_abc: pi,
                tau_positive: tau > TANGLE_TOL,
                pi_positive: pi > TANGLE_TOL,
                classified_as: classify_slocc(&psi)?.class,
            })
        })
        .collect()
}
