//! Equivalence deciders and the brute-force oracle they are checked against.
//!
//! * [`qsm_equivalence_tree`] prunes the tree of Gram matrices
//!   `D(v|u) = A(v|u)·A(v|u)†` of the direct-sum machine, keeping a basis of
//!   their span, and compares the two embedded initial states on it.
//! * [`qsm_equivalence_bilinear`] maps each QSM to an `n²`-state bilinear
//!   machine with [`bilinearize`] and runs [`blm_equivalence`], a prefix-tree
//!   search over reachable row vectors.
//! * [`mo1qfa_equivalence`] is the tree method for measure-once QFAs, over
//!   `F(u) = A(u)·P_acc·A(u)†`.
//!
//! The Hermitian structure of `D(v|u)` and `F(u)` is not exploited; a real
//! parametrisation would halve the ambient dimension.

mod bilinear;
mod oracle;
mod search;
mod tree;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::machines::{MachineError, Violation};
use crate::matrix::LinalgError;
use crate::span::DEFAULT_EPS_RANK;

pub use bilinear::{bilinearize, blm_equivalence, qsm_equivalence_bilinear};
pub use oracle::{brute_force_blm, brute_force_mo1qfa, brute_force_qsm, ENUMERATION_BUDGET};
pub use tree::{
    mo1qfa_direct_sum, mo1qfa_equivalence, mo1qfa_equivalence_inspect, qsm_direct_sum,
    qsm_equivalence_tree, Mo1qfaSum, QsmSum,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EquivalenceError {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("machine {which} is invalid: {}", format_violations(.violations))]
    InvalidMachine {
        which: usize,
        violations: Vec<Violation>,
    },
    #[error("enumeration of {required} words exceeds the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Tree,
    Bilinear,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Tree => "tree",
            Method::Bilinear => "bilinear",
            Method::Oracle => "oracle",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EquivalenceOptions {
    /// Relative rank threshold for float span membership and value
    /// comparison. Ignored by the exact backend.
    pub eps_rank: f64,
}

impl Default for EquivalenceOptions {
    fn default() -> Self {
        EquivalenceOptions {
            eps_rank: DEFAULT_EPS_RANK,
        }
    }
}

/// Outcome of an equivalence check.
///
/// When `equivalent` is false, `witness` holds a pair or word on which the
/// machines differ and `values` the two values there.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict<W, V> {
    pub equivalent: bool,
    pub witness: Option<W>,
    pub values: Option<(V, V)>,
    pub method: Method,
    pub basis_size: usize,
    pub nodes_visited: usize,
}

impl<W, V> Verdict<W, V> {
    pub(crate) fn equivalent(method: Method, basis_size: usize, nodes_visited: usize) -> Self {
        Verdict {
            equivalent: true,
            witness: None,
            values: None,
            method,
            basis_size,
            nodes_visited,
        }
    }

    pub(crate) fn differ(
        method: Method,
        witness: W,
        values: (V, V),
        basis_size: usize,
        nodes_visited: usize,
    ) -> Self {
        Verdict {
            equivalent: false,
            witness: Some(witness),
            values: Some(values),
            method,
            basis_size,
            nodes_visited,
        }
    }
}

pub(crate) fn require_valid(
    which: usize,
    violations: Vec<Violation>,
) -> Result<(), EquivalenceError> {
    if violations.is_empty() {
        Ok(())
    } else {
        Err(EquivalenceError::InvalidMachine { which, violations })
    }
}
