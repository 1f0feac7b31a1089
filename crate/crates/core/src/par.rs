//! Parallel helpers with a sequential fallback.
//!
//! Every reduction here is a max with the lexicographically smallest witness,
//! which is associative and commutative, so the split chosen by the thread pool
//! never changes a result.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// A candidate maximum together with the witness that attains it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Best<V, W> {
    pub value: V,
    pub witness: W,
}

impl<V: Ord, W: Ord> Best<V, W> {
    pub fn new(value: V, witness: W) -> Self {
        Self { value, witness }
    }

    pub fn merge(a: Option<Self>, b: Option<Self>) -> Option<Self> {
        match (a, b) {
            (None, b) => b,
            (a, None) => a,
            (Some(a), Some(b)) => {
                if b.value > a.value || (b.value == a.value && b.witness < a.witness) {
                    Some(b)
                } else {
                    Some(a)
                }
            }
        }
    }

    pub fn offer(slot: &mut Option<Self>, value: V, witness: W) {
        let take = match slot {
            None => true,
            Some(cur) => value > cur.value || (value == cur.value && witness < cur.witness),
        };
        if take {
            *slot = Some(Self::new(value, witness));
        }
    }
}

pub(crate) fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

pub(crate) fn max_over<V, W, F>(n: usize, f: F) -> Option<Best<V, W>>
where
    V: Ord + Send,
    W: Ord + Send,
    F: Fn(usize) -> Option<Best<V, W>> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).reduce(|| None, Best::merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).fold(None, Best::merge)
    }
}
