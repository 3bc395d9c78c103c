//! Random-sampling campaign for strictness of the block monogamy inequalities.
//!
//! Sample `i` is the Haar state drawn from stream `i` of the base seed. Samples
//! are evaluated in parallel; the summary is folded in sample order, so the
//! output depends only on the configuration.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{reduced_pair_measure, BlockPartition, Tolerances};
use crate::error::{Error, Result};
use crate::measures::{bipartite_pure, negativity, Measure, PartitionSpec};
use crate::qmat::{kron, DimSpec};
use crate::states::{haar_random_pure_dims, sample_rng, StateVector};

const MEASURES: [Measure; 2] = [Measure::Negativity, Measure::Realignment];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub n_qubits: usize,
    pub samples: usize,
    pub seed: u64,
    /// Also evaluate partitions with several multi-qubit groups. Their
    /// outcomes are reported separately and never count as violations.
    pub include_multi_blocks: bool,
    pub tolerances: Tolerances,
}

impl CampaignConfig {
    pub fn new(n_qubits: usize, samples: usize, seed: u64) -> Self {
        Self { n_qubits, samples, seed, include_multi_blocks: false, tolerances: Tolerances::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockingStats {
    pub focus: usize,
    pub blocking: String,
    pub single_block_form: bool,
    pub measure: Measure,
    pub evaluations: usize,
    pub violations: usize,
    pub min_slack: Option<f64>,
    /// Non-strict outcomes among states where the focus has at least two
    /// partners with nonzero pairwise negativity.
    pub non_strict_pairwise: usize,
    /// Non-strict outcomes among states where the focus is entangled with the
    /// rest and has at least two partners with correlated (non-product) pair
    /// marginals.
    pub non_strict_nonproduct: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub sample: usize,
    pub focus: usize,
    pub blocking: String,
    pub measure: Measure,
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub n_qubits: usize,
    pub samples: usize,
    pub seed: u64,
    pub rng: String,
    pub tolerance: f64,
    pub strict_threshold: f64,
    /// Totals over single-block partitions.
    pub evaluations: usize,
    pub violations: usize,
    pub min_slack: Option<f64>,
    pub qualifying_pairwise: usize,
    pub qualifying_nonproduct: usize,
    pub non_strict_pairwise: usize,
    pub non_strict_nonproduct: usize,
    pub first_violation: Option<Violation>,
    /// Totals over partitions with several multi-qubit groups (if evaluated).
    pub extension_evaluations: usize,
    pub extension_violations: usize,
    pub extension_min_slack: Option<f64>,
    pub blockings: Vec<BlockingStats>,
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

// set partitions via restricted growth strings
fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    fn rec(items: &[usize], idx: usize, acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if idx == items.len() {
            out.push(acc.clone());
            return;
        }
        for g in 0..acc.len() {
            acc[g].push(items[idx]);
            rec(items, idx + 1, acc, out);
            acc[g].pop();
        }
        acc.push(vec![items[idx]]);
        rec(items, idx + 1, acc, out);
        acc.pop();
    }
    let mut out = Vec::new();
    rec(items, 0, &mut Vec::new(), &mut out);
    out
}

/// Partitions evaluated for one focus: all partners as singletons, then one
/// block of size 2..=n-2 with the remaining partners as singletons, then
/// (optionally) partitions with two or more multi-qubit groups.
fn blockings_for(focus: usize, n: usize, include_multi: bool) -> Result<Vec<BlockPartition>> {
    let rest: Vec<usize> = (0..n).filter(|&k| k != focus).collect();
    let mut out = vec![BlockPartition::singletons(focus, n)?];
    for size in 2..=n.saturating_sub(2) {
        for block in combinations(&rest, size) {
            out.push(BlockPartition::with_block(focus, &block, n)?);
        }
    }
    if include_multi {
        for groups in set_partitions(&rest) {
            let multi = groups.iter().filter(|g| g.len() > 1).count();
            if groups.len() >= 2 && multi >= 2 {
                out.push(BlockPartition::new(focus, groups, n)?);
            }
        }
    }
    Ok(out)
}

struct FocusOutcome {
    qualifies_pairwise: bool,
    qualifies_nonproduct: bool,
    // slack per (blocking, measure), same order as the blocking table
    slacks: Vec<f64>,
}

fn evaluate_focus(
    psi: &StateVector,
    focus: usize,
    blockings: &[BlockPartition],
    strict: f64,
) -> Result<FocusOutcome> {
    let n = psi.num_subsystems();
    let cut = PartitionSpec::single(focus, n)?;
    let rhs: Vec<f64> = MEASURES
        .iter()
        .map(|&m| bipartite_pure(m, psi, &cut).map(|v| v * v))
        .collect::<Result<_>>()?;

    let mut memo: HashMap<Vec<usize>, [f64; 2]> = HashMap::new();
    let mut group_value = |g: &[usize]| -> Result<[f64; 2]> {
        if let Some(v) = memo.get(g) {
            return Ok(*v);
        }
        let v = [
            reduced_pair_measure(psi, focus, g, Measure::Negativity)?.powi(2),
            reduced_pair_measure(psi, focus, g, Measure::Realignment)?.powi(2),
        ];
        memo.insert(g.to_vec(), v);
        Ok(v)
    };

    let mut slacks = Vec::with_capacity(blockings.len() * MEASURES.len());
    for b in blockings {
        let mut lhs = [0.0; 2];
        for g in b.groups() {
            let v = group_value(g)?;
            lhs[0] += v[0];
            lhs[1] += v[1];
        }
        slacks.push(rhs[0] - lhs[0]);
        slacks.push(rhs[1] - lhs[1]);
    }

    // qualification: pairwise negativity partners
    let partners: Vec<usize> = (0..n).filter(|&k| k != focus).collect();
    let mut neg_partners = 0;
    for &j in &partners {
        if group_value(&[j])?[0].sqrt() > strict {
            neg_partners += 1;
        }
    }
    // qualification: entangled with the rest and correlated with two partners
    let rho_f = psi.reduced(&[focus])?;
    let mut correlated = 0;
    for &j in &partners {
        let pair = psi.reduced(&[focus.min(j), focus.max(j)])?;
        let rho_j = psi.reduced(&[j])?;
        let prod = if focus < j {
            kron(rho_f.matrix(), rho_j.matrix())
        } else {
            kron(rho_j.matrix(), rho_f.matrix())
        };
        if pair.matrix().max_abs_diff(&prod) > strict {
            correlated += 1;
        }
    }
    let entangled_with_rest = negativity(&psi.to_density(), &cut)? > strict;

    Ok(FocusOutcome {
        qualifies_pairwise: neg_partners >= 2,
        qualifies_nonproduct: entangled_with_rest && correlated >= 2,
        slacks,
    })
}

fn min_opt(a: Option<f64>, b: f64) -> Option<f64> {
    Some(a.map_or(b, |x| x.min(b)))
}

pub fn conjecture_campaign(config: &CampaignConfig) -> Result<CampaignSummary> {
    let n = config.n_qubits;
    if n < 3 {
        return Err(Error::arg(format!("campaign needs at least 3 qubits, got {n}")));
    }
    let tol = config.tolerances;
    let tables: Vec<Vec<BlockPartition>> = (0..n)
        .map(|f| blockings_for(f, n, config.include_multi_blocks))
        .collect::<Result<_>>()?;

    let per_sample: Vec<Vec<FocusOutcome>> = (0..config.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(config.seed, i as u64);
            let psi = haar_random_pure_dims(DimSpec::qubits(n), &mut rng);
            (0..n)
                .map(|f| evaluate_focus(&psi, f, &tables[f], tol.strict))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut stats: Vec<BlockingStats> = Vec::new();
    for (f, table) in tables.iter().enumerate() {
        for b in table {
            for &m in &MEASURES {
                stats.push(BlockingStats {
                    focus: f,
                    blocking: b.to_string(),
                    single_block_form: b.is_single_block_form(),
                    measure: m,
                    evaluations: 0,
                    violations: 0,
                    min_slack: None,
                    non_strict_pairwise: 0,
                    non_strict_nonproduct: 0,
                });
            }
        }
    }

    let mut summary = CampaignSummary {
        n_qubits: n,
        samples: config.samples,
        seed: config.seed,
        rng: "ChaCha20; sample i uses stream i of the base seed".into(),
        tolerance: tol.hold,
        strict_threshold: tol.strict,
        evaluations: 0,
        violations: 0,
        min_slack: None,
        qualifying_pairwise: 0,
        qualifying_nonproduct: 0,
        non_strict_pairwise: 0,
        non_strict_nonproduct: 0,
        first_violation: None,
        extension_evaluations: 0,
        extension_violations: 0,
        extension_min_slack: None,
        blockings: Vec::new(),
    };

    for (sample, outcomes) in per_sample.iter().enumerate() {
        let mut offset = 0;
        for (f, out) in outcomes.iter().enumerate() {
            summary.qualifying_pairwise += out.qualifies_pairwise as usize;
            summary.qualifying_nonproduct += out.qualifies_nonproduct as usize;
            for (k, &slack) in out.slacks.iter().enumerate() {
                let st = &mut stats[offset + k];
                let violated = slack < -tol.hold;
                let non_strict = slack <= tol.strict;
                st.evaluations += 1;
                st.violations += violated as usize;
                st.min_slack = min_opt(st.min_slack, slack);
                if non_strict && out.qualifies_pairwise {
                    st.non_strict_pairwise += 1;
                }
                if non_strict && out.qualifies_nonproduct {
                    st.non_strict_nonproduct += 1;
                }
                if st.single_block_form {
                    summary.evaluations += 1;
                    summary.violations += violated as usize;
                    summary.min_slack = min_opt(summary.min_slack, slack);
                    summary.non_strict_pairwise += (non_strict && out.qualifies_pairwise) as usize;
                    summary.non_strict_nonproduct += (non_strict && out.qualifies_nonproduct) as usize;
                    if violated && summary.first_violation.is_none() {
                        summary.first_violation = Some(Violation {
                            sample,
                            focus: f,
                            blocking: st.blocking.clone(),
                            measure: st.measure,
                            slack,
                        });
                    }
                } else {
                    summary.extension_evaluations += 1;
                    summary.extension_violations += violated as usize;
                    summary.extension_min_slack = min_opt(summary.extension_min_slack, slack);
                }
            }
            offset += out.slacks.len();
        }
    }
    summary.blockings = stats;
    Ok(summary)
}
