//! Boundary-condition tags and the operator pairs the discriminator supports.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
    Absolute,
    Relative,
}

impl BoundaryCondition {
    pub const ALL: [BoundaryCondition; 4] = [
        BoundaryCondition::Dirichlet,
        BoundaryCondition::Neumann,
        BoundaryCondition::Absolute,
        BoundaryCondition::Relative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Neumann => "neumann",
            BoundaryCondition::Absolute => "absolute",
            BoundaryCondition::Relative => "relative",
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundaryCondition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "dirichlet" | "d" => Ok(BoundaryCondition::Dirichlet),
            "neumann" | "n" => Ok(BoundaryCondition::Neumann),
            "absolute" | "abs" | "a" => Ok(BoundaryCondition::Absolute),
            "relative" | "rel" | "r" => Ok(BoundaryCondition::Relative),
            _ => Err(Error::Parse(format!("unknown boundary condition {s:?}"))),
        }
    }
}

/// One operator `Δ_p` under one boundary condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub p: usize,
    pub bc: BoundaryCondition,
}

impl fmt::Display for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ{} {}", self.p, self.bc)
    }
}

/// The three operator pairs whose `a₃` coefficients jointly determine the
/// quadratic boundary invariants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorPair {
    /// `{Δ₀ Dirichlet, Δ₀ Neumann}`
    #[serde(rename = "dn")]
    DirichletNeumann,
    /// `{Δ₀ absolute, Δ₁ absolute}`
    Absolute01,
    /// `{Δ₀ relative, Δ₁ relative}`
    Relative01,
}

impl OperatorPair {
    pub const ALL: [OperatorPair; 3] = [
        OperatorPair::DirichletNeumann,
        OperatorPair::Absolute01,
        OperatorPair::Relative01,
    ];

    pub fn members(self) -> [OperatorSpec; 2] {
        use BoundaryCondition::*;
        let op = |p, bc| OperatorSpec { p, bc };
        match self {
            OperatorPair::DirichletNeumann => [op(0, Dirichlet), op(0, Neumann)],
            OperatorPair::Absolute01 => [op(0, Absolute), op(1, Absolute)],
            OperatorPair::Relative01 => [op(0, Relative), op(1, Relative)],
        }
    }

    /// Smallest dimension in which the pair makes sense.
    pub fn min_dimension(self) -> usize {
        match self {
            OperatorPair::DirichletNeumann => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OperatorPair::DirichletNeumann => "dn",
            OperatorPair::Absolute01 => "absolute_01",
            OperatorPair::Relative01 => "relative_01",
        }
    }
}

impl fmt::Display for OperatorPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorPair {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "dn" | "dirichlet+neumann" | "dirichlet_neumann" => Ok(OperatorPair::DirichletNeumann),
            "absolute_01" | "absolute" | "abs" => Ok(OperatorPair::Absolute01),
            "relative_01" | "relative" | "rel" => Ok(OperatorPair::Relative01),
            _ => Err(Error::Parse(format!("unknown operator pair {s:?}"))),
        }
    }
}
