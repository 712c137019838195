//! Linear span of inserted vectors with a membership test.
//!
//! The float backend keeps an incrementally row-reduced echelon form: each
//! stored row has pivot 1 and zeros at the pivots of earlier rows, and a
//! candidate is independent when its residual exceeds the rank threshold.
//! Exact elimination over ℚ(√2, i) suffers large coefficient growth, so the
//! exact backend decides membership through prime-field images instead (see
//! [`crate::modular`]); the answer is still exact.

use crate::matrix::LinalgError;
use crate::modular::ModularSpan;
use crate::scalar::{Backend, Field};

/// Default relative rank threshold for the float backend.
pub const DEFAULT_EPS_RANK: f64 = 1e-9;

/// An inserted vector, as given, with its tag.
#[derive(Clone, Debug)]
pub struct BasisVector<F, T> {
    pub vector: Vec<F>,
    pub tag: T,
}

enum Kernel<F> {
    /// Reduced rows and their pivots.
    Echelon(Vec<(Vec<F>, usize)>),
    Modular(ModularSpan),
}

/// A basis of the span of every vector inserted so far, with the tag of the
/// vector that contributed each element.
pub struct SpanBasis<F, T> {
    dim: usize,
    eps_rank: f64,
    vectors: Vec<BasisVector<F, T>>,
    kernel: Kernel<F>,
}

impl<F: Field, T> SpanBasis<F, T> {
    pub fn new(dim: usize) -> Self {
        SpanBasis::with_eps(dim, DEFAULT_EPS_RANK)
    }

    /// `eps_rank` is ignored by the exact backend.
    pub fn with_eps(dim: usize, eps_rank: f64) -> Self {
        let kernel = match F::BACKEND {
            Backend::Exact => Kernel::Modular(ModularSpan::new()),
            Backend::Float => Kernel::Echelon(Vec::new()),
        };
        SpanBasis {
            dim,
            eps_rank,
            vectors: Vec::new(),
            kernel,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[BasisVector<F, T>] {
        &self.vectors
    }

    pub fn tags(&self) -> impl Iterator<Item = &T> {
        self.vectors.iter().map(|v| &v.tag)
    }

    /// Adds `v` if it is independent of the current span and reports whether
    /// it was added.
    pub fn insert(&mut self, v: &[F], tag: T) -> Result<bool, LinalgError> {
        if v.len() != self.dim {
            return Err(LinalgError::Dimension(format!(
                "vector of length {} inserted into a span of dimension {}",
                v.len(),
                self.dim
            )));
        }
        let added = match &mut self.kernel {
            Kernel::Modular(span) => {
                let exact: Vec<_> = v
                    .iter()
                    .map(|x| x.as_exact().cloned().expect("exact backend"))
                    .collect();
                span.insert(&exact)
            }
            Kernel::Echelon(rows) => match residual(rows, v, self.eps_rank) {
                Some(w) => {
                    rows.push(normalise(w));
                    true
                }
                None => false,
            },
        };
        if added {
            self.vectors.push(BasisVector {
                vector: v.to_vec(),
                tag,
            });
        }
        Ok(added)
    }
}

/// The reduced residual of `v` against float echelon rows, or `None` when
/// `v` is in their span up to the relative threshold.
fn residual<F: Field>(rows: &[(Vec<F>, usize)], v: &[F], eps_rank: f64) -> Option<Vec<F>> {
    let mut w = v.to_vec();
    for (row, pivot) in rows {
        let c = w[*pivot].clone();
        if c.is_zero() {
            continue;
        }
        for (x, y) in w.iter_mut().zip(row) {
            if !y.is_zero() {
                *x = std::mem::replace(x, F::zero()) - c.clone() * y;
            }
        }
        w[*pivot] = F::zero();
    }
    let input = v.iter().map(F::magnitude).fold(0.0, f64::max);
    let left = w.iter().map(F::magnitude).fold(0.0, f64::max);
    (left > eps_rank * input.max(1.0)).then_some(w)
}

/// Scales the residual so its largest-magnitude coordinate, the pivot, is 1.
fn normalise<F: Field>(mut w: Vec<F>) -> (Vec<F>, usize) {
    let pivot = w
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.magnitude().total_cmp(&b.1.magnitude()))
        .map(|(i, _)| i)
        .expect("residual is nonzero");
    let scale = w[pivot].inv().expect("pivot is nonzero");
    for x in w.iter_mut() {
        if !x.is_zero() {
            *x = x.clone() * &scale;
        }
    }
    w[pivot] = F::one();
    (w, pivot)
}
