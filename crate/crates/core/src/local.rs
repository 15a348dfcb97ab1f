//! Dimension-zero genus-one local invariants `GW₁^loc` of regular and
//! multiple elliptic fibers.
//!
//! Two independent routes are provided. The closed forms evaluate divisor
//! sums directly. The assembled forms walk the moduli points produced by
//! [`crate::lattice`] and add up their contributions:
//!
//! * a point of `M⁺` (pulled-back normal bundle nontrivial) contributes `1/d`;
//! * for `m = 2` a point of `M⁻` contributes `−1/d`;
//! * for `m ≥ 3` the points of `M⁻` are only known in aggregate: they lift
//!   bijectively to degree-`d/m` covers of a regular fiber carrying a
//!   canonical divisor of weight `m − 1`, and their total is `1/m` times that
//!   invariant.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{rat, rat_int, sigma_ratio, sigma_u64, Rat};
use crate::lattice::{enumerate_sublattices, factors_through, partition_moduli, Sublattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiberKind {
    /// `n·F` for a regular fiber `F`, `n ≥ 1`.
    Regular { weight: u64 },
    /// A multiple fiber `F_m`, `m ≥ 2`.
    Multiple { m: u64 },
}

impl FiberKind {
    pub fn regular(weight: u64) -> Result<Self> {
        check_at_least("n", weight, 1, ">= 1")?;
        Ok(FiberKind::Regular { weight })
    }

    pub fn multiple(m: u64) -> Result<Self> {
        check_at_least("m", m, 2, ">= 2")?;
        Ok(FiberKind::Multiple { m })
    }

    /// Short name used in table output.
    pub fn name(&self) -> &'static str {
        match self {
            FiberKind::Regular { .. } => "regular",
            FiberKind::Multiple { .. } => "multiple",
        }
    }

    /// The weight `n` or multiplicity `m`.
    pub fn parameter(&self) -> u64 {
        match *self {
            FiberKind::Regular { weight } => weight,
            FiberKind::Multiple { m } => m,
        }
    }
}

impl fmt::Display for FiberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberKind::Regular { weight: 1 } => write!(f, "F"),
            FiberKind::Regular { weight } => write!(f, "{weight}F"),
            FiberKind::Multiple { m } => write!(f, "F_{m}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    /// `h⁰(f*N_m) = 0`: invertible complex-linear operator, value `1/d`.
    GenericPlus,
    /// `m = 2`, `h⁰(f*N_2) = 1`: invertible with odd spectral flow, value `−1/d`.
    M2Sign,
    /// `m ≥ 3`, `h⁰(f*N_m) = 1`: only the sum over all such points is determined.
    LiftedAggregate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    /// `None` for [`Route::LiftedAggregate`].
    pub value: Option<Rat>,
    pub route: Route,
}

fn check_at_least(what: &'static str, value: u64, min: u64, expected: &'static str) -> Result<()> {
    if value < min {
        return Err(Error::OutOfRange {
            what,
            value: value.to_string(),
            expected,
        });
    }
    Ok(())
}

/// `GW₁^loc(F, d) = −σ(d)/d`.
pub fn local_gw_regular(d: u64) -> Result<Rat> {
    check_at_least("d", d, 1, ">= 1")?;
    Ok(rat(-(sigma_u64(d) as i64), d as i64))
}

/// `GW₁^loc(nF, d) = n·GW₁^loc(F, d)`.
pub fn local_gw_regular_multi(n: u64, d: u64) -> Result<Rat> {
    check_at_least("n", n, 1, ">= 1")?;
    Ok(local_gw_regular(d)? * rat_int(n as i64))
}

/// `GW₁^loc(F_m, d) = (σ(d) − m·σ(d/m))/d`, valid for every `m ≥ 2`.
pub fn local_gw_multiple_closed(m: u64, d: u64) -> Result<Rat> {
    check_at_least("m", m, 2, ">= 2")?;
    check_at_least("d", d, 1, ">= 1")?;
    let num = sigma_u64(d) as i64 - (m * sigma_ratio(d, m)) as i64;
    Ok(rat(num, d as i64))
}

/// Closed form for any fiber kind.
pub fn local_gw_closed(kind: FiberKind, d: u64) -> Result<Rat> {
    match kind {
        FiberKind::Regular { weight } => local_gw_regular_multi(weight, d),
        FiberKind::Multiple { m } => local_gw_multiple_closed(m, d),
    }
}

/// Contribution of the moduli point `lattice` to `GW₁^loc(F_m, d)`.
pub fn contribution(m: u64, lattice: &Sublattice) -> Contribution {
    let d = lattice.d as i64;
    if !factors_through(lattice, m) {
        Contribution {
            value: Some(rat(1, d)),
            route: Route::GenericPlus,
        }
    } else if m == 2 {
        Contribution {
            value: Some(rat(-1, d)),
            route: Route::M2Sign,
        }
    } else {
        Contribution {
            value: None,
            route: Route::LiftedAggregate,
        }
    }
}

/// `GW₁^loc(nF, d)` as a sum over the `σ(d)` covers of a regular fiber, each
/// counted `−1/d` (trivial normal bundle, `h⁰ = 1`), scaled by `n`.
pub fn local_gw_regular_assembled(n: u64, d: u64) -> Result<Rat> {
    check_at_least("n", n, 1, ">= 1")?;
    let per_point = rat(-1, d.max(1) as i64);
    let total: Rat = enumerate_sublattices(d)?
        .iter()
        .map(|_| per_point.clone())
        .sum();
    Ok(total * rat_int(n as i64))
}

/// `GW₁^loc(F_m, d)` for `m ≥ 3` from the moduli partition: `1/d` per point of
/// `M⁺`, plus `(1/m)·GW₁^loc((m−1)F, d/m)` for `M⁻` when `m | d`.
pub fn local_gw_multiple_assembled(m: u64, d: u64) -> Result<Rat> {
    check_at_least("m", m, 3, ">= 3 (use local_gw_assembled_m2 for m = 2)")?;
    let part = partition_moduli(m, d)?;
    let mut total = Rat::zero();
    for lattice in &part.plus {
        let c = contribution(m, lattice);
        debug_assert_eq!(c.route, Route::GenericPlus);
        total += c.value.expect("generic points carry a value");
    }
    if d.is_multiple_of(m) {
        debug_assert_eq!(part.minus.len() as u64, sigma_u64(d / m));
        total += local_gw_regular_multi(m - 1, d / m)? * rat(1, m as i64);
    } else {
        debug_assert!(part.minus.is_empty());
    }
    Ok(total)
}

/// `GW₁^loc(F_2, d)` as the plain sum of per-point `±1/d` contributions.
pub fn local_gw_assembled_m2(d: u64) -> Result<Rat> {
    check_at_least("d", d, 1, ">= 1")?;
    Ok(enumerate_sublattices(d)?
        .iter()
        .map(|l| {
            contribution(2, l)
                .value
                .expect("m = 2 points carry a value")
        })
        .sum())
}

/// Moduli-side route for any fiber kind.
pub fn local_gw_assembled(kind: FiberKind, d: u64) -> Result<Rat> {
    match kind {
        FiberKind::Regular { weight } => local_gw_regular_assembled(weight, d),
        FiberKind::Multiple { m: 2 } => local_gw_assembled_m2(d),
        FiberKind::Multiple { m } => local_gw_multiple_assembled(m, d),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Closed,
    Assembly,
}

/// Table row in the `kind,m_or_n,d,value` layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub kind: &'static str,
    pub m_or_n: u64,
    pub d: u64,
    #[serde(with = "crate::exactnum::serde_rat")]
    pub value: Rat,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocalGwTable {
    pub entries: BTreeMap<(FiberKind, u64), Rat>,
}

impl LocalGwTable {
    /// Values for `d = 1..=dmax` by the chosen method.
    pub fn build(kind: FiberKind, dmax: u64, method: Method) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for d in 1..=dmax {
            let v = match method {
                Method::Closed => local_gw_closed(kind, d)?,
                Method::Assembly => local_gw_assembled(kind, d)?,
            };
            entries.insert((kind, d), v);
        }
        Ok(LocalGwTable { entries })
    }

    pub fn get(&self, kind: FiberKind, d: u64) -> Option<&Rat> {
        self.entries.get(&(kind, d))
    }

    /// Keys whose values differ between `self` and `other`, or that only one holds.
    pub fn disagreements(&self, other: &LocalGwTable) -> Vec<(FiberKind, u64)> {
        let mut keys: Vec<_> = self
            .entries
            .keys()
            .chain(other.entries.keys())
            .copied()
            .collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter(|k| self.entries.get(k) != other.entries.get(k))
            .collect()
    }

    pub fn rows(&self) -> Vec<TableRow> {
        self.entries
            .iter()
            .map(|(&(kind, d), v)| TableRow {
                kind: kind.name(),
                m_or_n: kind.parameter(),
                d,
                value: v.clone(),
            })
            .collect()
    }
}
