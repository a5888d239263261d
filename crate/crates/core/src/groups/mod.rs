//! Finitely generated subgroups of `PU(n,1)`: word enumeration, orbits,
//! limit sets, Dirichlet domains, invariant subgroups and cusps.

mod cusp;
mod dirichlet;
mod invariant;
mod table;

use std::fmt;

pub use cusp::{cusp_contains, cusp_height, inversion_at, on_cusp_surface, precise_invariance_audit, CuspAudit, CuspAuditConfig, CuspViolation, ViolationKind};
pub use dirichlet::{
    dirichlet_sides, membership_margin, two_sided_center_search, CenterBox, CenterSearch, DirichletConfig, Face,
    SideReport,
};
pub use invariant::{
    cocompactness_check, conjugated_generators, minimal_invariant_subgroup, rotation_defect, CocompactnessReport,
};
pub use table::{
    enumerate_elements, enumerate_elements_with, limit_set_sample, orbit, ElementTable, EnumerationConfig,
    LimitSetConfig, TableEntry,
};

use crate::error::{Error, Result};
use crate::heisenberg::{HeisElement, HeisIsometry};
use crate::isometry::Isometry;

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Heis(HeisIsometry),
    Matrix(Isometry),
}

impl Generator {
    pub fn dim(&self) -> usize {
        match self {
            Generator::Heis(g) => g.dim(),
            Generator::Matrix(m) => m.n(),
        }
    }

    pub fn isometry(&self) -> Isometry {
        match self {
            Generator::Heis(g) => Isometry::from_heis(g),
            Generator::Matrix(m) => m.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupSpec {
    n: usize,
    generators: Vec<Generator>,
    labels: Vec<String>,
}

impl GroupSpec {
    /// Labels default to `g1, g2, …`.
    pub fn new(n: usize, generators: Vec<Generator>, labels: Option<Vec<String>>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
        }
        if generators.is_empty() {
            return Err(Error::InvalidArgument("a group needs at least one generator".into()));
        }
        for g in &generators {
            if g.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: g.dim() });
            }
        }
        let labels = match labels {
            Some(l) if l.len() != generators.len() => {
                return Err(Error::InvalidArgument(format!(
                    "{} labels for {} generators",
                    l.len(),
                    generators.len()
                )))
            }
            Some(l) => l,
            None => (1..=generators.len()).map(|i| format!("g{i}")).collect(),
        };
        Ok(GroupSpec { n, generators, labels })
    }

    /// Group generated by Heisenberg translations.
    pub fn translations(n: usize, taus: &[HeisElement]) -> Result<Self> {
        let gens = taus.iter().map(|t| Generator::Heis(HeisIsometry::translation(t.clone()))).collect();
        GroupSpec::new(n, gens, None)
    }

    pub fn cyclic(g: Generator) -> Result<Self> {
        GroupSpec::new(g.dim(), vec![g], None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Generators and their inverses in letter order `g1, g1⁻¹, g2, …`.
    pub fn letters(&self) -> Vec<(Letter, Isometry)> {
        let mut out = vec![];
        for (i, g) in self.generators.iter().enumerate() {
            let m = g.isometry();
            let inv = m.inverse();
            out.push((Letter { gen: i, inverse: false }, m));
            out.push((Letter { gen: i, inverse: true }, inv));
        }
        out
    }

    /// The generators as elements of `H(n)`, if all are given that way.
    pub fn heis_generators(&self) -> Option<Vec<&HeisIsometry>> {
        self.generators
            .iter()
            .map(|g| match g {
                Generator::Heis(h) => Some(h),
                Generator::Matrix(_) => None,
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Letter {
        Letter { gen: self.gen, inverse: !self.inverse }
    }
}

/// A word in the generators; `[a, b]` denotes `a ∘ b`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `a*b^-1` style rendering; the empty word is `e`.
    pub fn render(&self, labels: &[String]) -> String {
        if self.0.is_empty() {
            return "e".into();
        }
        self.0
            .iter()
            .map(|l| {
                let name = labels.get(l.gen).cloned().unwrap_or_else(|| format!("g{}", l.gen + 1));
                if l.inverse {
                    format!("{name}^-1")
                } else {
                    name
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Generator indices, 1-based and negated for inverses.
    pub fn signed_indices(&self) -> Vec<i64> {
        self.0.iter().map(|l| if l.inverse { -(l.gen as i64 + 1) } else { l.gen as i64 + 1 }).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}
