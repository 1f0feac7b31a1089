/// Environment variable overriding [`Limits::max_vertices`].
pub const MAX_VERTICES_ENV: &str = "HHS_MAX_VERTICES";

/// Size caps and budgets. Exceeding any of them is an explicit error, never a
/// silent approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest space for which all-pairs distances are computed (also bounds
    /// generator and product outputs).
    pub max_vertices: usize,
    /// Largest space accepted by the O(n⁴) / O(n³) hyperbolicity sweeps.
    pub delta_cap: usize,
    /// Largest number of geodesics listed by enumeration before truncating.
    pub geodesic_cap: usize,
    /// Largest pairwise-orthogonal family considered by partial realization.
    pub family_cap: usize,
    /// Largest total number of coordinate tuples partial realization may visit.
    pub tuple_budget: u64,
    /// Largest number of vertex pairs a pair sweep may visit.
    pub pair_budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_vertices: 20_000,
            delta_cap: 400,
            geodesic_cap: 10_000,
            family_cap: 3,
            tuple_budget: 2_000_000,
            pair_budget: 50_000_000,
        }
    }
}

impl Limits {
    /// Defaults, with `max_vertices` taken from `HHS_MAX_VERTICES` when set to a
    /// positive integer.
    pub fn from_env() -> Self {
        let mut limits = Self::default();
        if let Some(cap) = std::env::var(MAX_VERTICES_ENV)
            .ok()
            .and_then(|raw| raw.trim().parse::<usize>().ok())
            .filter(|&cap| cap > 0)
        {
            limits.max_vertices = cap;
        }
        limits
    }
}
