//! Seeds of the cluster structure: a quiver with one cluster variable per
//! vertex, stored as an expanded polynomial in `x[i,j]` together with its
//! tableau label (the leading array).

mod enumerate;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{flag_minor, leading_array, FlagSet, Polynomial};
use crate::quiver::{initial_quiver, Quiver, VertexId, VertexLabel};
use crate::ssyt::{array_to_tableau, check_d_tight, interval_column_array, tropical_product, tropical_sum, Array};

pub use enumerate::{
    cluster_variables, enumerate, EnumerateOptions, ExchangeCache, ExchangeGraph, GraphEdge, GraphStats, MutationOrder,
};

/// A cluster variable: a monic polynomial and its D-tight leading array.
#[derive(Clone, PartialEq, Eq)]
pub struct ClusterVariable {
    poly: Polynomial,
    label: Array,
}

impl ClusterVariable {
    /// Fails unless `poly` is monic with a triangular, D-tight leading exponent.
    pub fn new(poly: Polynomial) -> Result<Self> {
        let label = leading_array(&poly)?;
        Ok(ClusterVariable { poly, label })
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn label(&self) -> &Array {
        &self.label
    }

    /// Tableau notation of the label, e.g. `124|3`.
    pub fn tableau(&self) -> String {
        array_to_tableau(&self.label).map(|t| t.to_string()).unwrap_or_else(|_| self.label.to_string())
    }
}

impl fmt::Debug for ClusterVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClusterVariable[{}]({} terms)", self.tableau(), self.poly.len())
    }
}

#[derive(Clone, Debug)]
pub struct Seed {
    n: usize,
    quiver: Quiver,
    vars: Vec<Arc<ClusterVariable>>,
}

/// The tropical shadow of one exchange: the leading arrays of the two
/// monomials of the exchange binomial, their lex maximum, and the check that
/// the maximum minus the old label is D-tight and equals the new label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeCertificate {
    pub vertex: VertexId,
    pub in_label: Array,
    pub out_label: Array,
    pub dominant: Array,
    pub old_label: Array,
    pub new_label: Array,
    /// `dominant - old_label`, entrywise.
    pub difference: Vec<i64>,
    pub difference_d_tight: bool,
    pub matches_new_label: bool,
}

impl ExchangeCertificate {
    pub fn holds(&self) -> bool {
        self.difference_d_tight && self.matches_new_label
    }
}

impl Seed {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn vars(&self) -> &[Arc<ClusterVariable>] {
        &self.vars
    }

    pub fn var(&self, v: VertexId) -> &Arc<ClusterVariable> {
        &self.vars[v.0]
    }

    pub fn mutable_vertices(&self) -> Vec<VertexId> {
        self.quiver.mutable_ids().collect()
    }

    /// Labels of the mutable variables in vertex order.
    pub fn mutable_labels(&self) -> Vec<Array> {
        self.quiver.mutable_ids().map(|v| self.vars[v.0].label.clone()).collect()
    }

    /// Replaces a variable by an equal one, so that seeds can share storage.
    pub(crate) fn share_var(&mut self, v: VertexId, shared: Arc<ClusterVariable>) {
        debug_assert!(*self.vars[v.0] == *shared);
        self.vars[v.0] = shared;
    }

    /// `prod_{u -> v} x_u^{w(u,v)}` and `prod_{v -> u} x_u^{w(v,u)}` together
    /// with their leading arrays.
    pub fn exchange_monomials(&self, v: VertexId) -> Result<((Polynomial, Array), (Polynomial, Array))> {
        let side = |arrows: Vec<(VertexId, u32)>| -> Result<(Polynomial, Array)> {
            let mut label = Array::zero(self.n);
            let mut factors = Vec::with_capacity(arrows.len());
            for (u, w) in arrows {
                let x = &self.vars[u.0];
                factors.push(if w == 1 { x.poly.clone() } else { x.poly.pow(w)? });
                label = tropical_product(&label, &x.label.scaled(w))?;
            }
            // smallest factors first keeps the intermediate products small
            factors.sort_by_key(Polynomial::len);
            let mut poly = Polynomial::one(self.n);
            for f in &factors {
                poly = poly.checked_mul(f)?;
            }
            Ok((poly, label))
        };
        Ok((side(self.quiver.in_arrows(v))?, side(self.quiver.out_arrows(v))?))
    }
}

/// The interval-minor seed on `Q(n)`: vertex `(i, j)` carries the flag minor
/// on rows `{i, ..., i + j - 1}`.
pub fn initial_seed(n: usize) -> Result<Seed> {
    let quiver = initial_quiver(n)?;
    let mut vars = Vec::with_capacity(quiver.len());
    for vertex in quiver.vertices() {
        let VertexLabel::Grid { i, j } = vertex.label else { unreachable!("grid quiver") };
        let rows = (i..i + j).map(|r| r as u32).collect();
        let var = ClusterVariable::new(flag_minor(&FlagSet::new(rows)?, n)?)?;
        debug_assert_eq!(var.label, interval_column_array(i, j, n)?);
        vars.push(Arc::new(var));
    }
    Ok(Seed { n, quiver, vars })
}

/// Mutation at `v` without any caching.
pub fn mutate_seed(seed: &Seed, v: VertexId) -> Result<(Seed, ExchangeCertificate)> {
    mutate_seed_with(seed, v, None)
}

pub(crate) fn mutate_seed_with(
    seed: &Seed,
    v: VertexId,
    cache: Option<&ExchangeCache>,
) -> Result<(Seed, ExchangeCertificate)> {
    let wrap = |e: Error| Error::Mutation { vertex: v.0, source: Box::new(e) };
    let quiver = seed.quiver.mutate(v)?;
    let old = seed.vars[v.0].clone();
    let new_var = match cache.and_then(|c| c.lookup(seed, v)) {
        Some(hit) => hit,
        None => {
            let ((in_poly, _), (out_poly, _)) = seed.exchange_monomials(v).map_err(wrap)?;
            let numerator = in_poly.checked_add(&out_poly).map_err(wrap)?;
            let quotient = numerator.exact_div(&old.poly).map_err(wrap)?;
            let var = Arc::new(ClusterVariable::new(quotient).map_err(wrap)?);
            match cache {
                Some(c) => c.store(seed, v, var),
                None => var,
            }
        }
    };
    let cert = certificate(seed, v, &new_var.label)?;
    let mut vars = seed.vars.clone();
    vars[v.0] = new_var;
    Ok((Seed { n: seed.n, quiver, vars }, cert))
}

fn side_label(seed: &Seed, arrows: Vec<(VertexId, u32)>) -> Result<Array> {
    arrows.into_iter().try_fold(Array::zero(seed.n), |acc, (u, w)| tropical_product(&acc, &seed.vars[u.0].label.scaled(w)))
}

fn certificate(seed: &Seed, v: VertexId, new_label: &Array) -> Result<ExchangeCertificate> {
    let in_label = side_label(seed, seed.quiver.in_arrows(v))?;
    let out_label = side_label(seed, seed.quiver.out_arrows(v))?;
    let dominant = tropical_sum(&in_label, &out_label)?;
    let old_label = seed.vars[v.0].label.clone();
    let difference: Vec<i64> =
        dominant.to_signed().iter().zip(old_label.to_signed()).map(|(a, b)| a - b).collect();
    let difference_d_tight = check_d_tight(seed.n, &difference).is_ok();
    let matches_new_label = difference == new_label.to_signed();
    Ok(ExchangeCertificate {
        vertex: v,
        in_label,
        out_label,
        dominant,
        old_label,
        new_label: new_label.clone(),
        difference,
        difference_d_tight,
        matches_new_label,
    })
}

/// Canonical identity of a seed: the sorted labels of its mutable variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SeedKey(pub Vec<Array>);

impl fmt::Display for SeedKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            match array_to_tableau(a) {
                Ok(t) => write!(f, "{t}")?,
                Err(_) => write!(f, "{a}")?,
            }
        }
        f.write_str("]")
    }
}

pub fn seed_key(seed: &Seed) -> SeedKey {
    let mut labels = seed.mutable_labels();
    labels.sort();
    SeedKey(labels)
}

/// Checks that two seeds with the same cluster carry the same quiver under
/// the vertex bijection that matches variable labels.
pub fn same_quiver_up_to_labels(a: &Seed, b: &Seed) -> bool {
    if a.quiver.len() != b.quiver.len() {
        return false;
    }
    let mut map = Vec::with_capacity(a.quiver.len());
    for u in a.quiver.ids() {
        let label = &a.vars[u.0].label;
        let matches: Vec<VertexId> = b.quiver.ids().filter(|&x| &b.vars[x.0].label == label).collect();
        match matches.as_slice() {
            [x] if b.quiver.is_frozen(*x) == a.quiver.is_frozen(u) => map.push(*x),
            _ => return false,
        }
    }
    a.quiver.ids().all(|u| a.quiver.ids().all(|w| a.quiver.weight(u, w) == b.quiver.weight(map[u.0], map[w.0])))
}
