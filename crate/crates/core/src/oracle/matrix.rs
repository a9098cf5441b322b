//! The full single-electron Hamiltonian in the position basis.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::lattice::{ChainParams, ImpurityConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisLabel {
    Impurity1,
    Impurity2,
    Site(i64),
}

/// Dense symmetric matrix over `(imp1, imp2, site −N, …, site N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleElectronMatrix {
    dim: usize,
    entries: Vec<f64>,
    labels: Vec<BasisLabel>,
}

impl SingleElectronMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    fn set_pair(&mut self, row: usize, col: usize, value: f64) {
        self.entries[row * self.dim + col] += value;
        if row != col {
            self.entries[col * self.dim + row] += value;
        }
    }

    /// Nonzero upper-triangle entries `(row, col, value)`, row-major.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |i| {
            (i..self.dim).filter_map(move |j| {
                let v = self.get(i, j);
                (v != 0.0).then_some((i, j, v))
            })
        })
    }

    /// Writes the matrix as `row col value` lines (0-based, upper triangle,
    /// full precision) after a `#`-prefixed header.
    pub fn write_triplets<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "# symmetric single-electron hamiltonian, upper triangle, 0-based"
        )?;
        writeln!(out, "# dim = {}", self.dim)?;
        writeln!(out, "# basis = imp1, imp2, site -N..N")?;
        for (i, j, v) in self.triplets() {
            writeln!(out, "{i} {j} {v:.16e}")?;
        }
        Ok(())
    }
}

/// Chain ring block (periodic wraparound site `N ↔ −N`) plus the two
/// impurity orbitals coupled at sites `0` and `R`.
pub fn build_matrix(chain: &ChainParams, imps: &ImpurityConfig) -> Result<SingleElectronMatrix> {
    let half = chain.half_length();
    let separation = imps.separation();
    if separation > half {
        return Err(Error::Dimension {
            separation,
            half_length: half,
            reason: "both impurity sites must lie on the chain (R <= N)",
        });
    }
    let sites = chain.sites();
    let dim = sites + 2;
    let half = half as i64;
    let site_index = |j: i64| 2 + (j + half).rem_euclid(sites as i64) as usize;

    let mut labels = vec![BasisLabel::Impurity1, BasisLabel::Impurity2];
    labels.extend((-half..=half).map(BasisLabel::Site));

    let mut m = SingleElectronMatrix {
        dim,
        entries: vec![0.0; dim * dim],
        labels,
    };
    m.set_pair(0, 0, imps.eps1);
    m.set_pair(1, 1, imps.eps2);
    for j in -half..=half {
        let here = site_index(j);
        m.set_pair(here, here, chain.omega());
        m.set_pair(here, site_index(j + 1), -chain.hopping());
    }
    m.set_pair(0, site_index(0), imps.lambda0);
    m.set_pair(1, site_index(separation as i64), imps.lambda_r);
    Ok(m)
}
