//! Divide-and-conquer recursion as fork-join task trees.
//!
//! Every recursive call that would have been a plain function call becomes a
//! task; the parent joins both children before combining. [`JoinPolicy`] picks
//! between one task per call ([`JoinMode::Faithful`]) and a granularity cutoff
//! below which the recursion runs inline ([`JoinMode::Cutoff`]). The recursion
//! itself, and therefore the combine tree, is the same in both modes.

use thiserror::Error;

pub const DEFAULT_CUTOFF: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("cannot reduce an empty sequence")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinMode {
    /// One task per recursive call, however small the range.
    Faithful,
    /// Ranges of at most `cutoff` elements recurse inline.
    Cutoff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JoinPolicy {
    pub cutoff: usize,
    pub mode: JoinMode,
}

impl JoinPolicy {
    pub fn faithful() -> Self {
        Self {
            cutoff: 0,
            mode: JoinMode::Faithful,
        }
    }

    pub fn with_cutoff(cutoff: usize) -> Self {
        Self {
            cutoff,
            mode: JoinMode::Cutoff,
        }
    }

    fn forks(&self, len: usize) -> bool {
        match self.mode {
            JoinMode::Faithful => true,
            JoinMode::Cutoff => len > self.cutoff,
        }
    }
}

impl Default for JoinPolicy {
    fn default() -> Self {
        Self::with_cutoff(DEFAULT_CUTOFF)
    }
}

/// Inclusive, nonempty index range `[left, right]`: the parameter record a
/// reduction task receives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Range {
    pub left: usize,
    pub right: usize,
}

impl Range {
    pub fn new(left: usize, right: usize) -> Self {
        debug_assert!(left <= right);
        Self { left, right }
    }

    pub fn len(&self) -> usize {
        self.right - self.left + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_leaf(&self) -> bool {
        self.left == self.right
    }

    /// Splits at `(left + right + 1) / 2` into `[left, mid - 1]` and `[mid, right]`.
    pub fn split(&self) -> Option<(Range, Range)> {
        if self.is_leaf() {
            return None;
        }
        // (left + right + 1) / 2
        let mid = (self.left + self.right).div_ceil(2);
        Some((Range::new(self.left, mid - 1), Range::new(mid, self.right)))
    }
}

/// Sorts `data` in place with leftmost-pivot quicksort, forking both halves.
pub fn par_quicksort<T: Ord + Send>(data: &mut [T], policy: &JoinPolicy) {
    if data.len() < 2 {
        return;
    }
    if !policy.forks(data.len()) {
        seq_quicksort(data);
        return;
    }
    let m = partition(data);
    let (lower, upper) = data.split_at_mut(m);
    rayon::join(
        || par_quicksort(lower, policy),
        || par_quicksort(&mut upper[1..], policy),
    );
}

fn seq_quicksort<T: Ord>(data: &mut [T]) {
    if data.len() < 2 {
        return;
    }
    let m = partition(data);
    let (lower, upper) = data.split_at_mut(m);
    seq_quicksort(lower);
    seq_quicksort(&mut upper[1..]);
}

/// Pivot is `data[0]`. Elements strictly below it are swapped forward to
/// `data[1..=m]`, then the pivot is swapped into `data[m]`. Returns `m`.
fn partition<T: Ord>(data: &mut [T]) -> usize {
    let mut m = 0;
    for i in 1..data.len() {
        if data[i] < data[0] {
            m += 1;
            data.swap(m, i);
        }
    }
    data.swap(0, m);
    m
}

/// Pairing reduction of `items` under `op`, splitting ranges at `(l + r + 1) / 2`.
///
/// `op` must be associative for the result to equal [`seq_fold`]; it need not
/// be commutative, the left half is always the left operand.
pub fn par_reduce<M, F>(items: &[M], op: F, policy: &JoinPolicy) -> Result<M, ReduceError>
where
    M: Clone + Send + Sync,
    F: Fn(M, M) -> M + Sync,
{
    par_reduce_with(items.len(), |i| items[i].clone(), op, policy)
}

/// Pairing reduction over indices `0..len`, where each leaf value is produced
/// by `leaf(index)` inside the task that owns it.
pub fn par_reduce_with<M, L, F>(
    len: usize,
    leaf: L,
    op: F,
    policy: &JoinPolicy,
) -> Result<M, ReduceError>
where
    M: Send,
    L: Fn(usize) -> M + Sync,
    F: Fn(M, M) -> M + Sync,
{
    if len == 0 {
        return Err(ReduceError::Empty);
    }
    Ok(reduce_range(Range::new(0, len - 1), &leaf, &op, policy))
}

fn reduce_range<M, L, F>(range: Range, leaf: &L, op: &F, policy: &JoinPolicy) -> M
where
    M: Send,
    L: Fn(usize) -> M + Sync,
    F: Fn(M, M) -> M + Sync,
{
    let Some((lo, hi)) = range.split() else {
        return leaf(range.left);
    };
    let (a, b) = if policy.forks(range.len()) {
        rayon::join(
            || reduce_range(lo, leaf, op, policy),
            || reduce_range(hi, leaf, op, policy),
        )
    } else {
        (
            reduce_range(lo, leaf, op, policy),
            reduce_range(hi, leaf, op, policy),
        )
    };
    op(a, b)
}

/// Strict left-to-right fold, the sequential oracle for [`par_reduce`].
pub fn seq_fold<M, F>(items: &[M], op: F) -> Result<M, ReduceError>
where
    M: Clone,
    F: Fn(M, M) -> M,
{
    let (first, rest) = items.split_first().ok_or(ReduceError::Empty)?;
    Ok(rest.iter().cloned().fold(first.clone(), op))
}
