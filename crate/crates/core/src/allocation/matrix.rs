use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `n × m` matrix of nonnegative SNRs `w_ij` of users toward basestations.
/// Row order is arrival order.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightMatrix<T> {
    rows: Vec<Vec<T>>,
    basestations: usize,
}

impl<T: Scalar> WeightMatrix<T> {
    pub fn new(rows: Vec<Vec<T>>, basestations: usize) -> Result<Self> {
        if basestations == 0 {
            return Err(Error::NoBasestations);
        }
        for (user, row) in rows.iter().enumerate() {
            check_row(user, row, basestations)?;
        }
        Ok(Self { rows, basestations })
    }

    /// Width taken from the first row; at least one row is required.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let m = rows.first().ok_or(Error::NoUsers)?.len();
        Self::new(rows, m)
    }

    pub fn users(&self) -> usize {
        self.rows.len()
    }

    pub fn basestations(&self) -> usize {
        self.basestations
    }

    pub fn row(&self, user: usize) -> &[T] {
        &self.rows[user]
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn get(&self, user: usize, bs: usize) -> T {
        self.rows[user][bs]
    }

    /// Largest entry, or zero for an empty matrix.
    pub fn max_entry(&self) -> T {
        self.rows
            .iter()
            .flatten()
            .copied()
            .fold(T::zero(), T::max)
    }

    /// Same entries with rows reordered: row `k` of the result is row
    /// `order[k]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            rows: order.iter().map(|&u| self.rows[u].clone()).collect(),
            basestations: self.basestations,
        }
    }

    /// SNRs toward basestation `bs` of the given users.
    pub fn column_of(&self, bs: usize, users: impl IntoIterator<Item = usize>) -> Vec<T> {
        users.into_iter().map(|u| self.rows[u][bs]).collect()
    }
}

pub(crate) fn check_row<T: Scalar>(user: usize, row: &[T], expected: usize) -> Result<()> {
    if row.len() != expected {
        return Err(Error::WidthMismatch {
            user,
            expected,
            found: row.len(),
        });
    }
    if let Some(&bad) = row.iter().find(|w| !(w.is_finite() && **w >= T::zero())) {
        return Err(Error::InvalidSnr(bad.as_f64()));
    }
    Ok(())
}

/// Assignment of users (0-based arrival index) to basestations: one set
/// `M_j` per basestation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Allocation {
    parts: Vec<BTreeSet<usize>>,
}

impl Allocation {
    pub fn empty(basestations: usize) -> Self {
        Self {
            parts: vec![BTreeSet::new(); basestations],
        }
    }

    /// `assignment[u]` is the basestation of user `u`.
    pub fn from_assignment(assignment: &[usize], basestations: usize) -> Result<Self> {
        let mut alloc = Self::empty(basestations);
        for (user, &bs) in assignment.iter().enumerate() {
            if bs >= basestations {
                return Err(Error::NotAPartition(format!(
                    "user {user} assigned to basestation {bs} of {basestations}"
                )));
            }
            alloc.parts[bs].insert(user);
        }
        Ok(alloc)
    }

    /// Build from explicit parts; parts may be invalid and are checked by
    /// [`Allocation::check_partition`].
    pub fn from_parts(parts: Vec<BTreeSet<usize>>) -> Self {
        Self { parts }
    }

    pub(crate) fn assign(&mut self, user: usize, bs: usize) {
        self.parts[bs].insert(user);
    }

    pub fn basestations(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[BTreeSet<usize>] {
        &self.parts
    }

    pub fn part(&self, bs: usize) -> &BTreeSet<usize> {
        &self.parts[bs]
    }

    pub fn user_count(&self) -> usize {
        self.parts.iter().map(BTreeSet::len).sum()
    }

    pub fn basestation_of(&self, user: usize) -> Option<usize> {
        self.parts.iter().position(|p| p.contains(&user))
    }

    /// Per-user basestation, assuming users `0..n` are all assigned.
    pub fn assignment(&self) -> Vec<Option<usize>> {
        let n = self.parts.iter().flatten().max().map_or(0, |&u| u + 1);
        (0..n).map(|u| self.basestation_of(u)).collect()
    }

    /// Parts are pairwise disjoint and cover exactly users `0..users`.
    pub fn check_partition(&self, users: usize) -> Result<()> {
        let mut seen = vec![false; users];
        for (bs, part) in self.parts.iter().enumerate() {
            for &u in part {
                if u >= users {
                    return Err(Error::NotAPartition(format!(
                        "basestation {bs} holds unknown user {u}"
                    )));
                }
                if std::mem::replace(&mut seen[u], true) {
                    return Err(Error::NotAPartition(format!("user {u} assigned twice")));
                }
            }
        }
        if let Some(u) = seen.iter().position(|s| !s) {
            return Err(Error::NotAPartition(format!("user {u} unassigned")));
        }
        Ok(())
    }
}
