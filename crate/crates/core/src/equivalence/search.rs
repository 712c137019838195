use std::collections::VecDeque;

use crate::matrix::LinalgError;
use crate::scalar::Field;
use crate::span::SpanBasis;

pub(crate) struct SearchOutcome<N> {
    /// Nodes whose coordinates were independent, in insertion order.
    pub accepted: Vec<N>,
    pub nodes_visited: usize,
}

/// Breadth-first traversal that keeps a node (and expands its children) only
/// when its coordinate vector is independent of the nodes kept so far.
///
/// With `include_root == false` the root is expanded unconditionally but
/// never added to the basis.
pub(crate) fn breadth_first_prune<F, N>(
    root: N,
    dim: usize,
    include_root: bool,
    eps_rank: f64,
    coords: impl Fn(&N) -> &[F],
    mut children: impl FnMut(&N) -> Vec<N>,
    mut visit: impl FnMut(&N),
) -> Result<SearchOutcome<N>, LinalgError>
where
    F: Field,
{
    let mut basis = SpanBasis::<F, ()>::with_eps(dim, eps_rank);
    let mut accepted = Vec::new();
    let mut nodes_visited = 0;
    let mut queue = VecDeque::new();

    nodes_visited += 1;
    visit(&root);
    queue.extend(children(&root));
    if include_root {
        if basis.insert(coords(&root), ())? {
            accepted.push(root);
        } else {
            queue.clear();
        }
    }

    while let Some(node) = queue.pop_front() {
        nodes_visited += 1;
        visit(&node);
        if basis.insert(coords(&node), ())? {
            queue.extend(children(&node));
            accepted.push(node);
        }
    }
    Ok(SearchOutcome {
        accepted,
        nodes_visited,
    })
}
