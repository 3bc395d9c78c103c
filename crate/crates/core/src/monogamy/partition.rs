use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::parse_index_list;

/// A focus qubit and a partition of the remaining qubits into groups, written
/// `"0|1|2|3,4"`. A group of one index is a single partner qubit; at most one
/// multi-qubit group gives the single-block form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPartition {
    focus: usize,
    groups: Vec<Vec<usize>>,
}

impl BlockPartition {
    pub fn new(focus: usize, groups: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let p = Self { focus, groups };
        p.check(n)?;
        Ok(p)
    }

    /// Every other qubit is its own group.
    pub fn singletons(focus: usize, n: usize) -> Result<Self> {
        Self::new(focus, (0..n).filter(|&k| k != focus).map(|k| vec![k]).collect(), n)
    }

    /// `block` is one group; every remaining non-focus qubit is a singleton.
    pub fn with_block(focus: usize, block: &[usize], n: usize) -> Result<Self> {
        let mut groups: Vec<Vec<usize>> = (0..n)
            .filter(|k| *k != focus && !block.contains(k))
            .map(|k| vec![k])
            .collect();
        let mut b = block.to_vec();
        b.sort_unstable();
        groups.push(b);
        Self::new(focus, groups, n)
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut parts = text.split('|');
        let head = parse_index_list(parts.next().unwrap_or(""))?;
        if head.len() != 1 {
            return Err(Error::Parse(format!(
                "blocks {text:?}: the first group must be a single focus qubit"
            )));
        }
        let groups = parts.map(parse_index_list).collect::<Result<Vec<_>>>()?;
        Self::new(head[0], groups, n)
    }

    pub fn focus(&self) -> usize {
        self.focus
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// At most one group contains more than one qubit.
    pub fn is_single_block_form(&self) -> bool {
        self.groups.iter().filter(|g| g.len() > 1).count() <= 1
    }

    pub(crate) fn check(&self, n: usize) -> Result<()> {
        let bad = |m: String| Err(Error::arg(format!("malformed partition {self}: {m}")));
        if self.focus >= n {
            return bad(format!("focus {} out of range", self.focus));
        }
        if self.groups.is_empty() {
            return bad("no partner groups".into());
        }
        let mut seen = vec![false; n];
        seen[self.focus] = true;
        for g in &self.groups {
            if g.is_empty() {
                return bad("empty group".into());
            }
            for &k in g {
                if k >= n {
                    return bad(format!("qubit {k} out of range"));
                }
                if seen[k] {
                    return bad(format!("qubit {k} used twice"));
                }
                seen[k] = true;
            }
        }
        if let Some(k) = seen.iter().position(|s| !s) {
            return bad(format!("qubit {k} not assigned"));
        }
        Ok(())
    }
}

impl fmt::Display for BlockPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.focus)?;
        for g in &self.groups {
            let s: Vec<String> = g.iter().map(|k| k.to_string()).collect();
            write!(f, "|{}", s.join(","))?;
        }
        Ok(())
    }
}
