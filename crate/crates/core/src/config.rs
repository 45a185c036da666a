//! Size-bound constants for the planar constructions.
//!
//! Defaults can be overridden through `DAGCOVER_C1` .. `DAGCOVER_C4`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    /// Paths per vertex: `c1 · log n · log Φ`.
    pub c1: f64,
    /// Portals per (vertex, path): `c2 / ε`.
    pub c2: f64,
    /// Centers per vertex: `c3 · ε⁻¹ · log Φ · log² n`.
    pub c3: f64,
    /// Extra edges: `c4 · n · ε⁻¹ · log² n · log Φ`.
    pub c4: f64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { c1: 8.0, c2: 8.0, c3: 128.0, c4: 768.0 }
    }
}

/// `log₂ x`, but never below 1, so bounds stay meaningful when `n` or `Φ`
/// is tiny.
pub fn log2_at_least_one(x: f64) -> f64 {
    x.log2().max(1.0)
}

impl Budget {
    pub fn from_env() -> Result<Self> {
        let mut b = Budget::default();
        for (name, slot) in [
            ("DAGCOVER_C1", &mut b.c1),
            ("DAGCOVER_C2", &mut b.c2),
            ("DAGCOVER_C3", &mut b.c3),
            ("DAGCOVER_C4", &mut b.c4),
        ] {
            if let Ok(raw) = std::env::var(name) {
                *slot = raw
                    .trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|c| c.is_finite() && *c > 0.0)
                    .ok_or_else(|| Error::input(format!("{name}={raw:?} is not a positive number")))?;
            }
        }
        Ok(b)
    }

    pub fn paths_per_vertex(&self, n: usize, phi: f64) -> f64 {
        self.c1 * log2_at_least_one(n as f64) * log2_at_least_one(phi)
    }

    pub fn portals_per_path(&self, eps: f64) -> f64 {
        self.c2 / eps
    }

    pub fn centers_per_vertex(&self, n: usize, eps: f64, phi: f64) -> f64 {
        let ln = log2_at_least_one(n as f64);
        self.c3 / eps * log2_at_least_one(phi) * ln * ln
    }

    pub fn extra_edges(&self, n: usize, eps: f64, phi: f64) -> f64 {
        let ln = log2_at_least_one(n as f64);
        self.c4 * n as f64 / eps * ln * ln * log2_at_least_one(phi)
    }
}
