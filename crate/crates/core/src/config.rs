//! Search bounds shared by the bounded engines.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orders::DEFAULT_MAX_ARITY;

/// Limits for the bounded searches (pp-definitions, GOH synthesis, sampling).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Existential variables in a pp-definition (`E`).
    pub max_existentials: usize,
    /// Atoms in a pp-definition (`A`).
    pub max_atoms: usize,
    /// Guard nesting depth of a GOH formula (`D`).
    pub goh_depth: usize,
    /// Conjuncts of a GOH formula (`C`).
    pub goh_conjuncts: usize,
    /// Pairs per guard of a GOH formula (`W`).
    pub guard_width: usize,
    /// Largest arity that may be enumerated.
    pub max_arity: usize,
    /// Relations drawn in sampled generation checks.
    pub sample_count: usize,
    /// Seed for every sampled mode.
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// Hard ceilings; bounds above these are rejected.
pub const MAX_EXISTENTIALS: usize = 4;
pub const MAX_ATOMS: usize = 6;
pub const MAX_GOH_DEPTH: usize = 3;
pub const MAX_GOH_CONJUNCTS: usize = 10;
pub const MAX_GUARD_WIDTH: usize = 3;

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_existentials: 2,
            max_atoms: 4,
            goh_depth: 2,
            goh_conjuncts: 6,
            guard_width: 2,
            max_arity: DEFAULT_MAX_ARITY,
            sample_count: 2000,
            seed: DEFAULT_SEED,
        }
    }
}

impl Bounds {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("E", self.max_existentials, MAX_EXISTENTIALS),
            ("A", self.max_atoms, MAX_ATOMS),
            ("D", self.goh_depth, MAX_GOH_DEPTH),
            ("C", self.goh_conjuncts, MAX_GOH_CONJUNCTS),
            ("W", self.guard_width, MAX_GUARD_WIDTH),
            ("N", self.max_arity, DEFAULT_MAX_ARITY),
        ];
        for (key, value, ceiling) in checks {
            if value > ceiling {
                return Err(Error::Bounds(format!("{key}={value} exceeds the ceiling {ceiling}")));
            }
        }
        if self.max_arity == 0 {
            return Err(Error::Bounds("N must be positive".into()));
        }
        Ok(())
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "E={},A={},D={},C={},W={}",
            self.max_existentials, self.max_atoms, self.goh_depth, self.goh_conjuncts, self.guard_width
        )
    }
}

/// Parses `E=2,A=4,D=2,C=6` style overrides on top of the defaults.
///
/// Recognised keys: `E`, `A`, `D`, `C`, `W`, `N` (arity ceiling), `S`
/// (sample count).
impl FromStr for Bounds {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut b = Bounds::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Bounds(format!("expected KEY=VALUE, found `{part}`")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::Bounds(format!("`{value}` is not a nonnegative integer")))?;
            match key.trim() {
                "E" => b.max_existentials = value,
                "A" => b.max_atoms = value,
                "D" => b.goh_depth = value,
                "C" => b.goh_conjuncts = value,
                "W" => b.guard_width = value,
                "N" => b.max_arity = value,
                "S" => b.sample_count = value,
                other => return Err(Error::Bounds(format!("unknown bound `{other}`"))),
            }
        }
        b.validate()?;
        Ok(b)
    }
}
