//! Size guards for the exponential operations.
//!
//! Every guard has a compiled-in default and can be overridden through an
//! environment variable, read once per process:
//!
//! | variable                    | default   | bounds                                      |
//! |-----------------------------|-----------|---------------------------------------------|
//! | `SCATCONT_MAX_POINTS`       | 62        | points per finite space (hard cap 64)       |
//! | `SCATCONT_SUBSET_GUARD`     | 12        | domain size for all-subsets scans           |
//! | `SCATCONT_MAP_GUARD`        | 1000000   | `|Y|^|X|` for map enumeration               |
//! | `SCATCONT_ENUM_GUARD`       | 5         | points for exhaustive space enumeration     |
//! | `SCATCONT_TREE_HEIGHT`      | 3         | height `k` of tree spaces                   |
//! | `SCATCONT_CANON_GUARD`      | 5000000   | candidate labelings in canonical form       |

use std::sync::OnceLock;

use crate::finspace::WORD_BITS;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guards {
    pub max_points: usize,
    pub subset_scan: usize,
    pub map_count: u64,
    pub enumerate_points: usize,
    pub tree_height: usize,
    pub canonical_labelings: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_points: 62,
            subset_scan: 12,
            map_count: 1_000_000,
            enumerate_points: 5,
            tree_height: 3,
            canonical_labelings: 5_000_000,
        }
    }
}

fn env_or<T: std::str::FromStr>(key: &str, default: T) -> T {
    std::env::var(key)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(default)
}

impl Guards {
    pub fn from_env() -> Self {
        let d = Guards::default();
        Guards {
            max_points: env_or("SCATCONT_MAX_POINTS", d.max_points).min(WORD_BITS),
            subset_scan: env_or("SCATCONT_SUBSET_GUARD", d.subset_scan).min(WORD_BITS),
            map_count: env_or("SCATCONT_MAP_GUARD", d.map_count),
            enumerate_points: env_or("SCATCONT_ENUM_GUARD", d.enumerate_points),
            tree_height: env_or("SCATCONT_TREE_HEIGHT", d.tree_height),
            canonical_labelings: env_or("SCATCONT_CANON_GUARD", d.canonical_labelings),
        }
    }

    /// Process-wide guards (environment overrides applied once).
    pub fn current() -> &'static Guards {
        static GUARDS: OnceLock<Guards> = OnceLock::new();
        GUARDS.get_or_init(Guards::from_env)
    }
}
