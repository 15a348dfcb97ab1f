//! Degree-`d` covers of the multiple fiber `ℂ/(ℤ+iℤ)`, one per index-`d`
//! sublattice, and their split by whether the torsion normal bundle of
//! order `m` pulls back trivially.
//!
//! A sublattice is kept in Hermite form `aℤ + (bi+k)ℤ` with `d = ab` and
//! `0 ≤ k < a`. Every index-`d` sublattice has exactly one such form, so
//! componentwise equality is lattice equality.

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{divisors, gcd};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Sublattice {
    pub a: u64,
    pub b: u64,
    pub k: u64,
    pub d: u64,
}

impl Sublattice {
    /// Checks `a, b ≥ 1` and `k < a`; `d` is derived.
    pub fn new(a: u64, b: u64, k: u64) -> Result<Self> {
        if a == 0 || b == 0 || k >= a {
            return Err(Error::OutOfRange {
                what: "Hermite triple (a, b, k)",
                value: format!("({a}, {b}, {k})"),
                expected: "a, b >= 1 and 0 <= k < a",
            });
        }
        Ok(Sublattice { a, b, k, d: a * b })
    }

    /// Whether the Gaussian integer `x + iy` lies in `aℤ + (bi+k)ℤ`.
    pub fn contains(&self, x: i64, y: i64) -> bool {
        let (a, b, k) = (self.a as i64, self.b as i64, self.k as i64);
        if y.rem_euclid(b) != 0 {
            return false;
        }
        (x - (y / b) * k).rem_euclid(a) == 0
    }
}

/// A torsion point `(k1 + i·k2)/m` of `ℂ/(ℤ+iℤ)` describing `N_m = O(p − q)`.
/// Only classes with `k2 = 0` survive, so `k2` is not stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodClass {
    pub m: u64,
    pub k1: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModuliPartition {
    /// Covers with `h⁰(f*N_m) = 0`.
    pub plus: Vec<Sublattice>,
    /// Covers with `h⁰(f*N_m) = 1`, i.e. `f*N_m` trivial.
    pub minus: Vec<Sublattice>,
}

impl Serialize for ModuliPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Counts {
            plus: usize,
            minus: usize,
        }
        let mut st = s.serialize_struct("ModuliPartition", 3)?;
        st.serialize_field("plus", &self.plus)?;
        st.serialize_field("minus", &self.minus)?;
        st.serialize_field(
            "counts",
            &Counts {
                plus: self.plus.len(),
                minus: self.minus.len(),
            },
        )?;
        st.end()
    }
}

fn check_multiplicity(m: u64) -> Result<()> {
    if m < 2 {
        return Err(Error::OutOfRange {
            what: "m",
            value: m.to_string(),
            expected: ">= 2",
        });
    }
    Ok(())
}

/// All index-`d` sublattices of `ℤ+iℤ`, ordered by `a` then `k`.
/// There are `σ(d)` of them.
pub fn enumerate_sublattices(d: u64) -> Result<Vec<Sublattice>> {
    let mut out = Vec::new();
    for a in divisors(d)? {
        let b = d / a;
        out.extend((0..a).map(|k| Sublattice { a, b, k, d }));
    }
    Ok(out)
}

/// Whether the cover lifts through `D = ℂ/(ℤ + miℤ)`, i.e. `m | b`
/// (equivalently `a | d/m`).
pub fn factors_through(lattice: &Sublattice, m: u64) -> bool {
    m != 0 && lattice.b.is_multiple_of(m)
}

/// Whether `f*N_m` is trivial: the period `d·k1/m` must be a lattice vector.
/// A real number lies in `aℤ + (bi+k)ℤ` exactly when it lies in `aℤ`.
pub fn torsion_pullback_trivial(lattice: &Sublattice, pc: &PeriodClass) -> bool {
    let period = lattice.d * pc.k1;
    pc.m != 0 && period.is_multiple_of(pc.m) && (period / pc.m).is_multiple_of(lattice.a)
}

/// Order of the point `(k1 + i·k2)/m` in `ℂ/(ℤ+iℤ)`.
fn torsion_order(m: u64, k1: u64, k2: u64) -> u64 {
    let g = gcd(k1 as i64, k2 as i64).unwrap_or(m);
    m / gcd(g as i64, m as i64).unwrap_or(1)
}

/// Period classes of a torsion normal bundle of exact order `m` that become
/// trivial on the `m`-fold cover `D → D_m`.
///
/// Scans every `(k1, k2) ∈ [0, m)²`; the pullback condition
/// `k1 + i·k2 ∈ ℤ + miℤ` forces `k2 = 0`, and exact order `m` forces
/// `gcd(m, k1) = 1`.
pub fn admissible_period_classes(m: u64) -> Result<Vec<PeriodClass>> {
    check_multiplicity(m)?;
    let mut out = Vec::new();
    for k1 in 0..m {
        for k2 in 0..m {
            let lifts_trivially = k2 % m == 0;
            if lifts_trivially && torsion_order(m, k1, k2) == m {
                out.push(PeriodClass { m, k1 });
            }
        }
    }
    Ok(out)
}

/// Splits the `σ(d)` covers of degree `d` into `M⁺` and `M⁻`.
///
/// Classification uses the torsion criterion with the smallest admissible
/// `k1`; the divisibility form of the same criterion is asserted alongside.
pub fn partition_moduli(m: u64, d: u64) -> Result<ModuliPartition> {
    check_multiplicity(m)?;
    let pc = PeriodClass { m, k1: 1 };
    let mut part = ModuliPartition::default();
    for lattice in enumerate_sublattices(d)? {
        let trivial = torsion_pullback_trivial(&lattice, &pc);
        assert_eq!(
            trivial,
            factors_through(&lattice, m),
            "torsion criterion disagrees with lifting criterion at {lattice:?}, m = {m}"
        );
        if trivial {
            part.minus.push(lattice);
        } else {
            part.plus.push(lattice);
        }
    }
    Ok(part)
}
