use serde::{Deserialize, Serialize};

use super::cone_of_seed;
use crate::cluster::{initial_seed, ExchangeGraph};
use crate::error::{Error, Result};
use crate::quiver::VertexId;
use crate::ssyt::{array_to_tableau, Array};

/// Linear map killing the frozen arrays. Coordinates are taken in the basis
/// given by the initial seed's mutable labels, listed from the last mutable
/// vertex to the first (for `n = 4`: the columns `{3}`, `{2,3}`, `{2}`).
#[derive(Clone, Debug)]
pub struct Projection {
    n: usize,
    /// Rows of the inverse initial-cone matrix that give the mutable
    /// coordinates, already in output order.
    rows: Vec<Vec<i64>>,
    basis: Vec<Array>,
}

impl Projection {
    pub fn new(n: usize) -> Result<Self> {
        let seed = initial_seed(n)?;
        let cone = cone_of_seed(&seed).map_err(|e| match e {
            Error::NotUnimodular(_) => Error::DegenerateFrozenSpan,
            other => other,
        })?;
        let k = seed.mutable_vertices().len();
        let rows = cone.inverse[..k].iter().rev().cloned().collect();
        let basis = cone.generators()[..k].iter().rev().cloned().collect();
        Ok(Projection { n, rows, basis })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// The arrays mapped to the standard basis vectors, in order.
    pub fn basis(&self) -> &[Array] {
        &self.basis
    }

    pub fn project(&self, a: &Array) -> Result<Vec<i64>> {
        if a.n() != self.n {
            return Err(Error::SizeMismatch { left: self.n, right: a.n() });
        }
        Ok(self.project_signed(&a.to_signed()))
    }

    /// Projection of an arbitrary integer vector in array coordinates.
    pub fn project_signed(&self, v: &[i64]) -> Vec<i64> {
        self.rows.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectedRay {
    pub label: Array,
    pub tableau: String,
    pub coords: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectedCone {
    pub seed: usize,
    /// Indices into the ray table.
    pub rays: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectedFan {
    pub n: usize,
    pub basis: Vec<String>,
    pub rays: Vec<ProjectedRay>,
    pub cones: Vec<ProjectedCone>,
}

impl ProjectedFan {
    pub fn ray(&self, tableau: &str) -> Option<&ProjectedRay> {
        self.rays.iter().find(|r| r.tableau == tableau)
    }
}

fn tableau_name(a: &Array) -> String {
    array_to_tableau(a).map(|t| t.to_string()).unwrap_or_else(|_| a.to_string())
}

/// Projects every mutable ray and every seed cone to the quotient by the
/// frozen arrays.
pub fn quotient_project(graph: &ExchangeGraph) -> Result<ProjectedFan> {
    let projection = Projection::new(graph.n())?;
    let vars = graph.mutable_variables();
    let rays = vars
        .iter()
        .map(|v| {
            Ok(ProjectedRay {
                label: v.label().clone(),
                tableau: v.tableau(),
                coords: projection.project(v.label())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let index = |a: &Array| rays.iter().position(|r| &r.label == a).expect("every mutable label is a ray");
    let cones = graph
        .seeds()
        .iter()
        .enumerate()
        .map(|(k, seed)| ProjectedCone {
            seed: k,
            rays: seed.mutable_vertices().into_iter().map(|v: VertexId| index(seed.var(v).label())).collect(),
        })
        .collect();
    Ok(ProjectedFan { n: graph.n(), basis: projection.basis().iter().map(tableau_name).collect(), rays, cones })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ssyt::{frozen_arrays, tropical_product};

    #[test]
    fn frozen_arrays_project_to_zero() {
        for n in 3..=6 {
            let p = Projection::new(n).unwrap();
            assert_eq!(p.dim(), (n - 1) * (n - 2) / 2);
            for f in frozen_arrays(n) {
                assert!(p.project(&f).unwrap().iter().all(|&c| c == 0));
            }
        }
    }

    #[test]
    fn basis_maps_to_standard_vectors() {
        let p = Projection::new(4).unwrap();
        let names: Vec<String> = p.basis().iter().map(tableau_name).collect();
        assert_eq!(names, vec!["3", "23", "2"]);
        for (k, b) in p.basis().iter().enumerate() {
            let v = p.project(b).unwrap();
            assert_eq!(v, (0..3).map(|t| i64::from(t == k)).collect::<Vec<_>>());
        }
    }

    #[test]
    fn projection_is_additive() {
        let p = Projection::new(5).unwrap();
        let a = Array::from_column(5, &[1, 3, 4]).unwrap();
        let b = Array::from_column(5, &[2, 5]).unwrap();
        let sum: Vec<i64> = p.project(&a).unwrap().iter().zip(p.project(&b).unwrap()).map(|(x, y)| x + y).collect();
        assert_eq!(p.project(&tropical_product(&a, &b).unwrap()).unwrap(), sum);
    }
}
