//! Two-qubit quantities written in terms of measurable Pauli correlations:
//! the spin-flip product `M = ρρ̃`, concurrence bounds from `Tr M` and
//! `S₂(M)`, and closed forms for realignment and negativity when both
//! single-qubit marginals are maximally mixed.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{concurrence_wootters, negativity, realignment_trace_norm, spin_flip_roots, PartitionSpec};
use crate::qmat::{DimSpec, ComplexMatrix};
use crate::states::{bloch_assemble, CorrelationDecomposition, DensityMatrix};

pub use crate::measures::spin_flip;

/// Local polarizations smaller than this count as maximally mixed marginals.
pub const MIXED_MARGINAL_TOL: f64 = 1e-9;
/// `S₂` radicands below this are a numeric failure; smaller negatives clip.
pub const S2_CLIP: f64 = 1e-9;

/// Square roots of the eigenvalues of `M = ρρ̃`, descending.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MSpectrum {
    pub lambdas: [f64; 4],
}

impl MSpectrum {
    pub fn concurrence(&self) -> f64 {
        let l = self.lambdas;
        (l[0] - l[1] - l[2] - l[3]).max(0.0)
    }

    /// `(λ₁λ₂ + λ₁λ₃ + λ₁λ₄, λ₂λ₃ + λ₂λ₄ + λ₃λ₄)`
    pub fn product_sums(&self) -> (f64, f64) {
        let l = self.lambdas;
        (l[0] * (l[1] + l[2] + l[3]), l[1] * l[2] + l[1] * l[3] + l[2] * l[3])
    }
}

/// `ρ̃` rebuilt from the Bloch form with both polarizations negated.
pub fn spin_flip_bloch(d: &CorrelationDecomposition) -> ComplexMatrix {
    let neg = |v: [f64; 3]| v.map(|x| -x);
    bloch_assemble(&CorrelationDecomposition { n_a: neg(d.n_a), n_b: neg(d.n_b), c: d.c })
}

/// `M = ρρ̃` and its λ spectrum.
pub fn m_matrix(rho: &DensityMatrix) -> Result<(ComplexMatrix, MSpectrum)> {
    let m = rho.matrix().matmul(&spin_flip(rho)?)?;
    Ok((m, MSpectrum { lambdas: spin_flip_roots(rho)? }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceBounds {
    pub trace_m: f64,
    pub s2: f64,
    /// `Tr M − 2√S₂`
    pub lower: f64,
    /// `Tr M + 2√S₂`
    pub upper: f64,
    pub concurrence: f64,
    /// The lower bound only says something when it and the concurrence are both positive.
    pub lower_active: bool,
    /// Bracket read as a bound on `C²`.
    pub squared_holds: bool,
    /// Bracket read as a bound on `C` itself.
    pub linear_holds: bool,
}

fn brackets(lower: f64, upper: f64, x: f64, active: bool, tol: f64) -> bool {
    x <= upper + tol && (!active || lower - tol <= x)
}

pub fn concurrence_bounds(rho: &DensityMatrix) -> Result<ConcurrenceBounds> {
    let (m, spec) = m_matrix(rho)?;
    let trace_m = m.trace().re;
    let trace_m2 = m.matmul(&m)?.trace().re;
    let mut s2 = 0.5 * (trace_m * trace_m - trace_m2);
    if s2 < -S2_CLIP {
        return Err(Error::NumericFailure(format!("S2(M) = {s2:.3e} is negative")));
    }
    s2 = s2.max(0.0);
    let lower = trace_m - 2.0 * s2.sqrt();
    let upper = trace_m + 2.0 * s2.sqrt();
    let conc = spec.concurrence();
    let lower_active = conc > 0.0 && lower > 0.0;
    Ok(ConcurrenceBounds {
        trace_m,
        s2,
        lower,
        upper,
        concurrence: conc,
        lower_active,
        squared_holds: brackets(lower, upper, conc * conc, lower_active, 1e-9),
        linear_holds: brackets(lower, upper, conc, lower_active, 1e-9),
    })
}

/// `c = R_A · diag(d) · R_Bᵀ` with `R_A, R_B ∈ SO(3)`. Entries of `diag` are
/// the singular values of `c`; only the last one may carry a minus sign, equal
/// to the sign of `det c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalCorrelations {
    pub diag: [f64; 3],
    pub rot_a: [[f64; 3]; 3],
    pub rot_b: [[f64; 3]; 3],
}

fn to_rows(m: &Matrix3<f64>) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = m[(i, j)];
        }
    }
    out
}

pub fn diagonalize_correlations(c: &[[f64; 3]; 3]) -> Result<DiagonalCorrelations> {
    let m = Matrix3::from_fn(|i, j| c[i][j]);
    let svd = m.svd(true, true);
    let mut u = svd.u.ok_or_else(|| Error::NumericFailure("SVD did not return U".into()))?;
    let mut vt = svd.v_t.ok_or_else(|| Error::NumericFailure("SVD did not return Vᵀ".into()))?;
    let mut s = svd.singular_values;
    // nalgebra sorts descending; keep that and push any reflection onto the smallest value
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    let perm = |m: &Matrix3<f64>, cols: bool| {
        Matrix3::from_fn(|i, j| if cols { m[(i, idx[j])] } else { m[(idx[i], j)] })
    };
    u = perm(&u, true);
    vt = perm(&vt, false);
    s = nalgebra::Vector3::new(s[idx[0]], s[idx[1]], s[idx[2]]);
    if u.determinant() < 0.0 {
        u.column_mut(2).neg_mut();
        s[2] = -s[2];
    }
    if vt.determinant() < 0.0 {
        vt.row_mut(2).neg_mut();
        s[2] = -s[2];
    }
    Ok(DiagonalCorrelations {
        diag: [s[0], s[1], s[2]],
        rot_a: to_rows(&u),
        rot_b: to_rows(&vt.transpose()),
    })
}

fn require_mixed_marginals(d: &CorrelationDecomposition) -> Result<()> {
    let (a, b) = d.local_norms();
    if !d.has_mixed_marginals(MIXED_MARGINAL_TOL) {
        return Err(Error::arg(format!(
            "closed forms need maximally mixed marginals, got |n_A| = {a:.3e}, |n_B| = {b:.3e}"
        )));
    }
    Ok(())
}

/// Builds the two-qubit state, reporting the minimum eigenvalue when the
/// correlations do not describe a positive operator.
pub fn assemble_state(d: &CorrelationDecomposition) -> Result<DensityMatrix> {
    let m = bloch_assemble(d);
    let min = m.hermitian_eigenvalues()?.last().copied().unwrap_or(0.0);
    if min < -crate::qmat::EIGEN_CLIP {
        return Err(Error::NonPhysical(format!("minimum eigenvalue {min:.6e}")));
    }
    DensityMatrix::new(DimSpec::qubits(2), m)
}

fn cut01() -> PartitionSpec {
    PartitionSpec::single(0, 2).expect("two-qubit cut")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealignmentComparison {
    pub diagonal: DiagonalCorrelations,
    /// `½(1 + Σ|d_α|)`, which is the raw `‖R(ρ)‖₁`.
    pub closed_form_norm: f64,
    /// `max{(closed_form_norm − 1)/2, 0}`
    pub closed_form_measure: f64,
    pub direct_norm: f64,
    pub direct_measure: f64,
}

pub fn realignment_closed_form(d: &CorrelationDecomposition) -> Result<RealignmentComparison> {
    require_mixed_marginals(d)?;
    let diagonal = diagonalize_correlations(&d.c)?;
    let norm = 0.5 * (1.0 + diagonal.diag.iter().map(|x| x.abs()).sum::<f64>());
    let rho = assemble_state(d)?;
    let direct = realignment_trace_norm(&rho, &cut01())?;
    Ok(RealignmentComparison {
        diagonal,
        closed_form_norm: norm,
        closed_form_measure: ((norm - 1.0) / 2.0).max(0.0),
        direct_norm: direct,
        direct_measure: ((direct - 1.0) / 2.0).max(0.0),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativityComparison {
    pub diagonal: DiagonalCorrelations,
    /// `½ Σ|¼ ± c₃₃ ± c₁₁ ± c₂₂|` with `c` scaled by ¼.
    pub literal: f64,
    /// `½(Σ|μᵢ| − 1)` over the partial-transpose eigenvalues from the diagonal form.
    pub closed_form: f64,
    /// `(‖ρ^{T_A}‖₁ − 1)/2` on the assembled state.
    pub canonical: f64,
    /// `literal − canonical`
    pub difference: f64,
}

pub fn negativity_closed_form(d: &CorrelationDecomposition) -> Result<NegativityComparison> {
    require_mixed_marginals(d)?;
    let diagonal = diagonalize_correlations(&d.c)?;
    let [c1, c2, c3] = diagonal.diag;
    let q = |x: f64| x / 4.0;
    let literal = 0.5
        * ((0.25 + q(c3) + q(c1) - q(c2)).abs()
            + (0.25 + q(c3) - q(c1) + q(c2)).abs()
            + (0.25 - q(c3) + q(c1) + q(c2)).abs()
            + (0.25 - q(c3) - q(c1) - q(c2)).abs());
    // transposing B flips the sign of σ_y
    let pt = [
        0.25 * (1.0 + c1 + c2 + c3),
        0.25 * (1.0 - c1 - c2 + c3),
        0.25 * (1.0 + c1 - c2 - c3),
        0.25 * (1.0 - c1 + c2 - c3),
    ];
    let closed_form = ((pt.iter().map(|x| x.abs()).sum::<f64>() - 1.0) / 2.0).max(0.0);
    let canonical = negativity(&assemble_state(d)?, &cut01())?;
    Ok(NegativityComparison { diagonal, literal, closed_form, canonical, difference: literal - canonical })
}

/// Wootters concurrence; shorthand for the CLI report.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    concurrence_wootters(rho)
}

/// Reads fifteen numbers: `c` row-major, then `n_A`, then `n_B`. Values may be
/// split across any number of comma-separated lines; `#` starts a comment and a
/// leading non-numeric line is taken as a header.
pub fn parse_correlation_csv(text: &str) -> Result<CorrelationDecomposition> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut values = Vec::new();
    for (k, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(format!("correlation CSV: {e}")))?;
        let fields: Vec<&str> = rec.iter().filter(|f| !f.is_empty()).collect();
        let parsed: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(v) => values.extend(v),
            Err(_) if k == 0 => continue,
            Err(_) => {
                return Err(Error::Parse(format!("correlation CSV line {}: non-numeric field", k + 1)))
            }
        }
    }
    if values.len() != 15 {
        return Err(Error::Parse(format!(
            "correlation CSV needs 15 values (c row-major, n_A, n_B), got {}",
            values.len()
        )));
    }
    if let Some(bad) = values.iter().find(|x| !x.is_finite()) {
        return Err(Error::Parse(format!("correlation CSV contains non-finite value {bad}")));
    }
    let mut d = CorrelationDecomposition::zero();
    for i in 0..3 {
        for j in 0..3 {
            d.c[i][j] = values[3 * i + j];
        }
        d.n_a[i] = values[9 + i];
        d.n_b[i] = values[12 + i];
    }
    Ok(d)
}
