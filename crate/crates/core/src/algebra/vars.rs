use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered variable names, the subset allowed negative exponents, and the
/// canonical `(q_i, p_i)` pairs used by the Poisson bracket.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarTable {
    names: Vec<String>,
    localized: BTreeSet<usize>,
    pairs: Vec<(usize, usize)>,
}

impl VarTable {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>, localized: impl IntoIterator<Item = usize>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let unique: BTreeSet<&str> = names.iter().map(String::as_str).collect();
        if unique.len() != names.len() {
            return Err(Error::InvalidVarTable("duplicate variable names".into()));
        }
        let localized: BTreeSet<usize> = localized.into_iter().collect();
        if let Some(&bad) = localized.iter().find(|&&i| i >= names.len()) {
            return Err(Error::InvalidVarTable(format!("localized index {bad} out of range")));
        }
        Ok(VarTable { names, localized, pairs: Vec::new() })
    }

    /// Declares canonical pairs `(position, momentum)`.
    pub fn with_pairs(mut self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        let mut seen = BTreeSet::new();
        for &(a, b) in &pairs {
            if a >= self.len() || b >= self.len() || a == b || !seen.insert(a) || !seen.insert(b) {
                return Err(Error::InvalidVarTable(format!("bad canonical pair ({a}, {b})")));
            }
        }
        self.pairs = pairs;
        Ok(self)
    }

    /// `q1..qn, p1..pn, mu` with `qn` localized and `(qi, pi)` canonical.
    pub fn viete(n: usize) -> Arc<Self> {
        assert!(n >= 1, "need at least one degree of freedom");
        let names = (1..=n)
            .map(|i| format!("q{i}"))
            .chain((1..=n).map(|i| format!("p{i}")))
            .chain(std::iter::once("mu".to_string()));
        let table = VarTable::new(names, [n - 1])
            .and_then(|t| t.with_pairs((0..n).map(|i| (i, n + i))))
            .expect("viete table is well formed");
        Arc::new(table)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_localized(&self, index: usize) -> bool {
        self.localized.contains(&index)
    }

    pub fn localized(&self) -> impl Iterator<Item = usize> + '_ {
        self.localized.iter().copied()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

pub(crate) fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn viete_layout() {
        let t = VarTable::viete(3);
        assert_eq!(t.names(), ["q1", "q2", "q3", "p1", "p2", "p3", "mu"]);
        assert!(t.is_localized(2));
        assert!(!t.is_localized(0));
        assert_eq!(t.pairs(), [(0, 3), (1, 4), (2, 5)]);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(VarTable::new(["x", "x"], []).is_err());
        assert!(VarTable::new(["x"], [3]).is_err());
        assert!(VarTable::new(["x", "y"], []).unwrap().with_pairs([(0, 0)]).is_err());
        assert!(VarTable::new(["x", "y", "z"], []).unwrap().with_pairs([(0, 1), (1, 2)]).is_err());
    }
}
