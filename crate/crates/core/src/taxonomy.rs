//! Census of the special cases of the general linear-fractional system
//! `x' = (α₁ + β₁x + γ₁y)/(A₁ + B₁x + C₁y)`, `y' = (α₂ + β₂x + γ₂y)/(A₂ + B₂x + C₂y)`.
//!
//! Each equation has 49 special cases (which parameters vanish), numbered
//! 1..=49 in the standard catalogue; a system case is an ordered pair of
//! equation numbers. The number lists below are fixed data, not derived from
//! parameter patterns.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const UNIVERSE_SIZE: u32 = 49;

const COMPETITIVE: [u32; 17] = [1, 3, 4, 5, 6, 9, 11, 13, 14, 15, 19, 21, 24, 27, 29, 38, 42];
const TRIVIAL: [u32; 9] = [1, 3, 4, 5, 9, 11, 13, 19, 24];
const ASSUMPTION1: [u32; 11] = [4, 6, 13, 14, 15, 19, 21, 27, 29, 38, 42];
const ASSUMPTION2: [u32; 11] = [3, 6, 11, 14, 15, 21, 24, 27, 29, 38, 42];
const STRONGLY_COMPETITIVE: [u32; 8] = [6, 14, 15, 21, 27, 29, 38, 42];

pub const LIST_NAMES: [&str; 6] = [
    "universe",
    "competitive",
    "trivial",
    "assumption1",
    "assumption2",
    "strongly_competitive",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseLists {
    pub competitive: BTreeSet<u32>,
    /// Cases reducible to a Riccati or linear equation.
    pub trivial: BTreeSet<u32>,
    /// Equations for which `∂f/∂x > 0, ∂g/∂y > 0` holds.
    pub assumption1: BTreeSet<u32>,
    /// Equations for which `∂f/∂y < 0, ∂g/∂x < 0` holds.
    pub assumption2: BTreeSet<u32>,
    pub strongly_competitive: BTreeSet<u32>,
    pub universe_size: u32,
}

impl Default for CaseLists {
    fn default() -> Self {
        Self::standard()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssumptionCensus {
    pub total: u64,
    pub trivial_within: u64,
    pub nontrivial: u64,
}

impl CaseLists {
    pub fn standard() -> Self {
        let set = |xs: &[u32]| xs.iter().copied().collect::<BTreeSet<_>>();
        Self {
            competitive: set(&COMPETITIVE),
            trivial: set(&TRIVIAL),
            assumption1: set(&ASSUMPTION1),
            assumption2: set(&ASSUMPTION2),
            strongly_competitive: set(&STRONGLY_COMPETITIVE),
            universe_size: UNIVERSE_SIZE,
        }
    }

    /// Size of the named list (`universe` counts all 49 equations).
    pub fn list_len(&self, name: &str) -> Result<u64> {
        let n = match name {
            "universe" => self.universe_size as usize,
            "competitive" => self.competitive.len(),
            "trivial" => self.trivial.len(),
            "assumption1" => self.assumption1.len(),
            "assumption2" => self.assumption2.len(),
            "strongly_competitive" => self.strongly_competitive.len(),
            other => return Err(Error::UnknownList(other.to_string())),
        };
        Ok(n as u64)
    }

    /// Number of ordered pairs drawn from the named list.
    pub fn count_pairs(&self, name: &str) -> Result<u64> {
        self.list_len(name).map(|n| n * n)
    }

    pub fn nontrivial_competitive_count(&self) -> u64 {
        let c = self.competitive.len() as u64;
        let t = self.trivial.len() as u64;
        c * c - t * t
    }

    pub fn assumption_census(&self, which: u8) -> Result<AssumptionCensus> {
        let list = match which {
            1 => &self.assumption1,
            2 => &self.assumption2,
            other => return Err(Error::Precondition(format!("assumption must be 1 or 2, got {other}"))),
        };
        let total = (list.len() as u64).pow(2);
        let trivial_within = (list.intersection(&self.trivial).count() as u64).pow(2);
        Ok(AssumptionCensus {
            total,
            trivial_within,
            nontrivial: total - trivial_within,
        })
    }

    /// Structural invariants of the lists; returns the first violation.
    pub fn check(&self) -> std::result::Result<(), String> {
        let in_range = |s: &BTreeSet<u32>| s.iter().all(|&n| (1..=self.universe_size).contains(&n));
        for (name, s) in [
            ("competitive", &self.competitive),
            ("trivial", &self.trivial),
            ("assumption1", &self.assumption1),
            ("assumption2", &self.assumption2),
            ("strongly_competitive", &self.strongly_competitive),
        ] {
            if !in_range(s) {
                return Err(format!("{name} has numbers outside 1..={}", self.universe_size));
            }
        }
        if !self.trivial.is_subset(&self.competitive) {
            return Err("trivial is not a subset of competitive".into());
        }
        if !self.strongly_competitive.is_subset(&self.competitive) {
            return Err("strongly_competitive is not a subset of competitive".into());
        }
        let both: BTreeSet<u32> = self.assumption1.intersection(&self.assumption2).copied().collect();
        if !self.strongly_competitive.is_subset(&both) {
            return Err("strongly_competitive is not inside both assumption lists".into());
        }
        Ok(())
    }
}

pub fn count_pairs(list_name: &str) -> Result<u64> {
    CaseLists::standard().count_pairs(list_name)
}

pub fn nontrivial_competitive_count() -> u64 {
    CaseLists::standard().nontrivial_competitive_count()
}

pub fn assumption_census(which: u8) -> Result<AssumptionCensus> {
    CaseLists::standard().assumption_census(which)
}

/// Everything in one serializable document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Census {
    pub schema: String,
    pub special_cases: u64,
    pub competitive_cases: u64,
    pub trivial_cases: u64,
    pub nontrivial_competitive_cases: u64,
    pub strongly_competitive_cases: u64,
    pub assumption1: AssumptionCensus,
    pub assumption2: AssumptionCensus,
    pub lists: CaseLists,
}

pub fn census() -> Census {
    let lists = CaseLists::standard();
    let pairs = |name| lists.count_pairs(name).expect("built-in list name");
    Census {
        schema: "cpd-taxonomy-1".to_string(),
        special_cases: pairs("universe"),
        competitive_cases: pairs("competitive"),
        trivial_cases: pairs("trivial"),
        nontrivial_competitive_cases: lists.nontrivial_competitive_count(),
        strongly_competitive_cases: pairs("strongly_competitive"),
        assumption1: lists.assumption_census(1).expect("1 is valid"),
        assumption2: lists.assumption_census(2).expect("2 is valid"),
        lists,
    }
}
