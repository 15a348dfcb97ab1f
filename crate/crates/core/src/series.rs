//! Truncated formal power series with exact rational coefficients.
//!
//! [`UniSeries`] is a single-variable series `Σ_{n ≤ trunc} c_n u^n`.
//! [`SurfaceSeries`] lives in `ℚ[t, t_1, …, t_r] / (t_k^{m_k} − t)`, one
//! variable per declared multiple fiber, graded by the rational total degree
//! `e0 + Σ e_k/m_k` and truncated at a rational degree bound.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{format_rat, rat_int, Rat};
use crate::surface::SurfaceSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniSeries {
    trunc: u64,
    coeffs: Vec<Rat>,
}

impl UniSeries {
    pub fn zero(trunc: u64) -> Self {
        UniSeries {
            trunc,
            coeffs: vec![Rat::zero(); trunc as usize + 1],
        }
    }

    pub fn one(trunc: u64) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0] = Rat::one();
        s
    }

    /// Coefficients past `trunc` are dropped; missing ones are zero.
    pub fn from_coeffs(trunc: u64, coeffs: impl IntoIterator<Item = Rat>) -> Self {
        let mut s = Self::zero(trunc);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c;
        }
        s
    }

    pub fn from_ints(trunc: u64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(trunc, coeffs.iter().map(|&c| rat_int(c)))
    }

    /// `Σ_{n ≤ trunc} u^n`.
    pub fn geometric(trunc: u64) -> Self {
        Self::from_coeffs(trunc, std::iter::repeat(Rat::one()))
    }

    pub fn trunc(&self) -> u64 {
        self.trunc
    }

    pub fn coeff(&self, n: u64) -> Rat {
        self.coeffs
            .get(n as usize)
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn truncate(&self, trunc: u64) -> Self {
        Self::from_coeffs(trunc, self.coeffs.iter().cloned())
    }

    pub fn scale(&self, r: &Rat) -> Self {
        UniSeries {
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    fn require_constant(&self, expected: &'static str, want: &Rat) -> Result<()> {
        if &self.coeffs[0] != want {
            return Err(Error::ConstantTerm {
                expected,
                found: format_rat(&self.coeffs[0]),
            });
        }
        Ok(())
    }

    /// `log A` for `A = 1 + O(u)`, from `n·l_n = n·a_n − Σ_{k<n} k·l_k·a_{n−k}`.
    pub fn log(&self) -> Result<Self> {
        self.require_constant("1", &Rat::one())?;
        let n_max = self.trunc as usize;
        let a = &self.coeffs;
        // store k·l_k, which keeps the inner sum free of extra multiplications
        let mut kl = vec![Rat::zero(); n_max + 1];
        for n in 1..=n_max {
            let mut acc = &a[n] * rat_int(n as i64);
            for k in 1..n {
                if !kl[k].is_zero() && !a[n - k].is_zero() {
                    acc -= &kl[k] * &a[n - k];
                }
            }
            kl[n] = acc;
        }
        let coeffs = kl
            .into_iter()
            .enumerate()
            .map(|(n, c)| if n == 0 { c } else { c / rat_int(n as i64) })
            .collect();
        Ok(UniSeries {
            trunc: self.trunc,
            coeffs,
        })
    }

    /// `exp A` for `A = O(u)`, from `n·e_n = Σ_{k=1}^{n} k·a_k·e_{n−k}`.
    pub fn exp(&self) -> Result<Self> {
        self.require_constant("0", &Rat::zero())?;
        let n_max = self.trunc as usize;
        let ka: Vec<Rat> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * rat_int(k as i64))
            .collect();
        let mut e = vec![Rat::zero(); n_max + 1];
        e[0] = Rat::one();
        for n in 1..=n_max {
            let mut acc = Rat::zero();
            for k in 1..=n {
                if !ka[k].is_zero() && !e[n - k].is_zero() {
                    acc += &ka[k] * &e[n - k];
                }
            }
            e[n] = acc / rat_int(n as i64);
        }
        Ok(UniSeries {
            trunc: self.trunc,
            coeffs: e,
        })
    }

    /// `A^r = exp(r·log A)` for `A = 1 + O(u)`.
    pub fn pow_rat(&self, r: &Rat) -> Result<Self> {
        self.log()?.scale(r).exp()
    }

    /// `A(u^d)`, kept to order `trunc`. Requires `self.trunc ≥ ⌊trunc/d⌋`.
    pub fn compose_power(&self, d: u64, trunc: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::ZeroDegreeMonomial);
        }
        let needed = trunc / d;
        if self.trunc < needed {
            return Err(Error::InsufficientTruncation {
                needed,
                have: self.trunc,
            });
        }
        let mut out = Self::zero(trunc);
        for n in 0..=needed {
            out.coeffs[(n * d) as usize] = self.coeffs[n as usize].clone();
        }
        Ok(out)
    }

    /// `Σ coeff_n · M^n` in the quotient ring of `spec`, up to total degree `bound`.
    pub fn subst_monomial(
        &self,
        monomial: &FiberMonomial,
        spec: &SurfaceSpec,
        bound: &Rat,
    ) -> Result<SurfaceSeries> {
        let mults = spec.multiplicities();
        let deg = monomial.degree(&mults);
        if deg.is_zero() {
            return Err(Error::ZeroDegreeMonomial);
        }
        let mut out = SurfaceSeries::zero(spec.clone(), bound.clone());
        if bound < &Rat::zero() {
            return Ok(out);
        }
        let needed = (bound / &deg).floor().to_integer();
        let needed: u64 = needed.try_into().unwrap_or(u64::MAX);
        if self.trunc < needed {
            return Err(Error::InsufficientTruncation {
                needed,
                have: self.trunc,
            });
        }
        let monomial = monomial.normalized(&mults);
        let mut power = FiberMonomial::one(mults.len());
        for n in 0..=needed {
            out.add_term(power.clone(), self.coeffs[n as usize].clone());
            power = power.mul(&monomial, &mults);
        }
        Ok(out)
    }
}

impl Add for &UniSeries {
    type Output = UniSeries;

    fn add(self, rhs: &UniSeries) -> UniSeries {
        let trunc = self.trunc.min(rhs.trunc);
        UniSeries::from_coeffs(
            trunc,
            self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b),
        )
    }
}

impl Neg for &UniSeries {
    type Output = UniSeries;

    fn neg(self) -> UniSeries {
        self.scale(&-Rat::one())
    }
}

impl Sub for &UniSeries {
    type Output = UniSeries;

    fn sub(self, rhs: &UniSeries) -> UniSeries {
        self + &(-rhs)
    }
}

/// Cauchy product truncated at the smaller order.
impl Mul for &UniSeries {
    type Output = UniSeries;

    fn mul(self, rhs: &UniSeries) -> UniSeries {
        let trunc = self.trunc.min(rhs.trunc) as usize;
        let mut out = vec![Rat::zero(); trunc + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(trunc + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(trunc + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        UniSeries {
            trunc: trunc as u64,
            coeffs: out,
        }
    }
}

/// `t^{e0} · Π t_k^{e_k}` with every `e_k < m_k` once normalized.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiberMonomial {
    pub e0: u64,
    pub e: Vec<u64>,
}

impl FiberMonomial {
    pub fn one(fibers: usize) -> Self {
        FiberMonomial {
            e0: 0,
            e: vec![0; fibers],
        }
    }

    /// `t^e0`.
    pub fn t(e0: u64, fibers: usize) -> Self {
        FiberMonomial {
            e0,
            e: vec![0; fibers],
        }
    }

    /// `t_k^exp`, normalized.
    pub fn fiber(k: usize, exp: u64, mults: &[u64]) -> Self {
        let mut e = vec![0; mults.len()];
        e[k] = exp;
        FiberMonomial { e0: 0, e }.normalized(mults)
    }

    /// Applies `t_k^{m_k} = t`: `e_k mod m_k` stays, the quotient joins `e0`.
    pub fn normalized(&self, mults: &[u64]) -> Self {
        debug_assert_eq!(self.e.len(), mults.len());
        let mut e0 = self.e0;
        let e = self
            .e
            .iter()
            .zip(mults)
            .map(|(&ek, &m)| {
                e0 += ek / m;
                ek % m
            })
            .collect();
        FiberMonomial { e0, e }
    }

    pub fn is_normalized(&self, mults: &[u64]) -> bool {
        self.e.iter().zip(mults).all(|(e, m)| e < m)
    }

    /// Total `t`-degree `e0 + Σ e_k/m_k`.
    pub fn degree(&self, mults: &[u64]) -> Rat {
        let mut deg = rat_int(self.e0 as i64);
        for (&ek, &m) in self.e.iter().zip(mults) {
            if ek != 0 {
                deg += Rat::new((ek as i64).into(), (m as i64).into());
            }
        }
        deg
    }

    pub fn mul(&self, other: &FiberMonomial, mults: &[u64]) -> Self {
        FiberMonomial {
            e0: self.e0 + other.e0,
            e: self.e.iter().zip(&other.e).map(|(a, b)| a + b).collect(),
        }
        .normalized(mults)
    }
}

/// One entry of the JSON form of a [`SurfaceSeries`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesTerm {
    pub t: u64,
    pub fibers: Vec<u64>,
    #[serde(with = "crate::exactnum::serde_rat")]
    pub degree: Rat,
    #[serde(with = "crate::exactnum::serde_rat")]
    pub coeff: Rat,
}

/// One entry of the degree-collapsed view.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapsedTerm {
    #[serde(with = "crate::exactnum::serde_rat")]
    pub degree: Rat,
    #[serde(with = "crate::exactnum::serde_rat")]
    pub coeff: Rat,
}

/// Element of the quotient monomial ring of a surface, truncated at `bound`.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceSeries {
    spec: SurfaceSpec,
    mults: Vec<u64>,
    bound: Rat,
    coeffs: BTreeMap<FiberMonomial, Rat>,
}

impl SurfaceSeries {
    pub fn zero(spec: SurfaceSpec, bound: Rat) -> Self {
        let mults = spec.multiplicities();
        SurfaceSeries {
            spec,
            mults,
            bound,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(spec: SurfaceSpec, bound: Rat) -> Self {
        let mut s = Self::zero(spec, bound);
        let one = FiberMonomial::one(s.mults.len());
        s.add_term(one, Rat::one());
        s
    }

    /// Sums the given terms; raw exponents are normalized first.
    pub fn from_terms(
        spec: SurfaceSpec,
        bound: Rat,
        terms: impl IntoIterator<Item = (FiberMonomial, Rat)>,
    ) -> Self {
        let mut s = Self::zero(spec, bound);
        for (mono, c) in terms {
            s.add_term(mono, c);
        }
        s
    }

    pub fn spec(&self) -> &SurfaceSpec {
        &self.spec
    }

    pub fn bound(&self) -> &Rat {
        &self.bound
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.mults
    }

    /// Adds `c · mono`, dropping it if it lies above the bound.
    pub fn add_term(&mut self, mono: FiberMonomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let mono = mono.normalized(&self.mults);
        if mono.degree(&self.mults) > self.bound {
            return;
        }
        match self.coeffs.entry(mono) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn coeff(&self, mono: &FiberMonomial) -> Rat {
        self.coeffs
            .get(&mono.normalized(&self.mults))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FiberMonomial, &Rat)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(&FiberMonomial::one(self.mults.len())).is_one()
    }

    fn check_ring(&self, other: &SurfaceSeries) -> Result<()> {
        if self.mults != other.mults {
            return Err(Error::RingMismatch {
                left: self.mults.clone(),
                right: other.mults.clone(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &SurfaceSeries) -> Result<SurfaceSeries> {
        self.check_ring(other)?;
        let bound = self.bound.clone().min(other.bound.clone());
        let mut out = Self::zero(self.spec.clone(), bound);
        for (m, c) in self.terms().chain(other.terms()) {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Product with the carry rule applied, truncated at the smaller bound.
    pub fn try_mul(&self, other: &SurfaceSeries) -> Result<SurfaceSeries> {
        self.check_ring(other)?;
        let bound = self.bound.clone().min(other.bound.clone());
        let mut acc: BTreeMap<FiberMonomial, Rat> = BTreeMap::new();
        let right: Vec<(FiberMonomial, Rat, Rat)> = other
            .coeffs
            .iter()
            .map(|(m, c)| (m.clone(), c.clone(), m.degree(&self.mults)))
            .collect();
        for (ma, ca) in &self.coeffs {
            let da = ma.degree(&self.mults);
            if da > bound {
                continue;
            }
            for (mb, cb, db) in &right {
                if &da + db > bound {
                    continue;
                }
                let mono = ma.mul(mb, &self.mults);
                *acc.entry(mono).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(SurfaceSeries {
            spec: self.spec.clone(),
            mults: self.mults.clone(),
            bound,
            coeffs: acc,
        })
    }

    /// Sums coefficients by total `t`-degree.
    pub fn collapsed(&self) -> BTreeMap<Rat, Rat> {
        let mut out: BTreeMap<Rat, Rat> = BTreeMap::new();
        for (m, c) in &self.coeffs {
            *out.entry(m.degree(&self.mults)).or_insert_with(Rat::zero) += c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn collapsed_terms(&self) -> Vec<CollapsedTerm> {
        self.collapsed()
            .into_iter()
            .map(|(degree, coeff)| CollapsedTerm { degree, coeff })
            .collect()
    }

    /// Terms ordered by degree, then exponents `(t, fibers…)` lexicographically.
    pub fn sorted_terms(&self) -> Vec<SeriesTerm> {
        let mut terms: Vec<SeriesTerm> = self
            .coeffs
            .iter()
            .map(|(m, c)| SeriesTerm {
                t: m.e0,
                fibers: m.e.clone(),
                degree: m.degree(&self.mults),
                coeff: c.clone(),
            })
            .collect();
        terms.sort_by(|x, y| {
            x.degree
                .cmp(&y.degree)
                .then_with(|| x.t.cmp(&y.t))
                .then_with(|| x.fibers.cmp(&y.fibers))
        });
        terms
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.sorted_terms()).expect("series terms serialize")
    }

    /// Human-readable `c·t^a·t_k^b + …`, in the JSON ordering.
    pub fn display(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let labels: Vec<&str> = self
            .spec
            .fibers()
            .iter()
            .map(|f| f.label.as_str())
            .collect();
        self.sorted_terms()
            .iter()
            .map(|term| {
                let mut factors = Vec::new();
                match term.t {
                    0 => {}
                    1 => factors.push("t".to_string()),
                    e => factors.push(format!("t^{e}")),
                }
                for (k, &e) in term.fibers.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(format!("t[{}]", labels[k])),
                        e => factors.push(format!("t[{}]^{e}", labels[k])),
                    }
                }
                let c = format_rat(&term.coeff);
                if factors.is_empty() {
                    c
                } else if term.coeff.is_one() {
                    factors.join("*")
                } else {
                    format!("({c})*{}", factors.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use proptest::prelude::*;

    fn spec(mults: &[u64]) -> SurfaceSpec {
        SurfaceSpec::new(0, mults).unwrap()
    }

    fn factorials(n: u64) -> Vec<Rat> {
        let mut f = Rat::one();
        let mut out = vec![Rat::one()];
        for k in 1..=n {
            f *= rat_int(k as i64);
            out.push(f.recip());
        }
        out
    }

    #[test]
    fn uni_mul_examples() {
        let a = UniSeries::from_ints(4, &[1, 1]);
        let b = UniSeries::from_ints(4, &[1, -1]);
        assert_eq!(&a * &b, UniSeries::from_ints(4, &[1, 0, -1]));

        let g = UniSeries::geometric(12);
        assert_eq!(&b * &g, UniSeries::one(4));
        assert_eq!((&b.truncate(12) * &g), UniSeries::one(12));

        let c = UniSeries::from_ints(5, &[1, 2]);
        let d = UniSeries::from_ints(5, &[3, 1]);
        assert_eq!(&c * &d, UniSeries::from_ints(5, &[3, 7, 2]));

        // mixed truncation takes the smaller order
        assert_eq!((&c * &UniSeries::one(2)).trunc(), 2);
    }

    #[test]
    fn log_examples() {
        assert_eq!(UniSeries::one(8).log().unwrap(), UniSeries::zero(8));
        let log = UniSeries::from_ints(10, &[1, -1]).log().unwrap();
        for n in 1..=10 {
            assert_eq!(log.coeff(n), rat(-1, n as i64));
        }
        let t = UniSeries::from_ints(10, &[0, 1]);
        assert_eq!(t.exp().unwrap().log().unwrap(), t);
        assert!(UniSeries::from_ints(3, &[2, 1]).log().is_err());
    }

    #[test]
    fn exp_examples() {
        assert_eq!(UniSeries::zero(6).exp().unwrap(), UniSeries::one(6));
        let e = UniSeries::from_ints(15, &[0, 1]).exp().unwrap();
        assert_eq!(e.coeffs(), &factorials(15)[..]);
        let one_minus_t = UniSeries::from_ints(9, &[1, -1]);
        assert_eq!(one_minus_t.log().unwrap().exp().unwrap(), one_minus_t);
        assert!(UniSeries::from_ints(3, &[1, 1]).exp().is_err());
    }

    #[test]
    fn pow_rat_examples() {
        let one_minus_t = UniSeries::from_ints(20, &[1, -1]);
        assert_eq!(one_minus_t.pow_rat(&rat_int(1)).unwrap(), one_minus_t);
        let inv = one_minus_t.pow_rat(&rat_int(-1)).unwrap();
        assert_eq!(inv, UniSeries::geometric(20));
        assert_eq!(&inv * &one_minus_t, UniSeries::one(20));

        let a = UniSeries::from_ints(20, &[1, 0, -1]);
        let half = a.pow_rat(&rat(1, 2)).unwrap();
        assert_eq!(&half * &half, a);
        // (1 - t^2)^(1/2) = 1 - t^2/2 - t^4/8 - ...
        assert_eq!(half.coeff(2), rat(-1, 2));
        assert_eq!(half.coeff(4), rat(-1, 8));
        assert_eq!(half.coeff(3), Rat::zero());
        assert!(UniSeries::from_ints(3, &[0, 1])
            .pow_rat(&rat_int(2))
            .is_err());
    }

    #[test]
    fn compose_power_spreads_coefficients() {
        let a = UniSeries::from_ints(5, &[1, 2, 3]);
        let c = a.compose_power(3, 7).unwrap();
        assert_eq!(c, UniSeries::from_ints(7, &[1, 0, 0, 2, 0, 0, 3]));
        assert!(a.compose_power(1, 9).is_err());
        assert!(a.compose_power(0, 9).is_err());
    }

    #[test]
    fn monomial_normalization() {
        let mults = [2, 3];
        let raw = FiberMonomial {
            e0: 1,
            e: vec![5, 7],
        };
        let n = raw.normalized(&mults);
        assert_eq!(
            n,
            FiberMonomial {
                e0: 1 + 2 + 2,
                e: vec![1, 1]
            }
        );
        assert_eq!(n.degree(&mults), raw.degree(&mults));
        assert_eq!(n.degree(&mults), rat(1, 1) + rat(5, 2) + rat(7, 3));
        assert!(n.is_normalized(&mults));
        assert_eq!(n.normalized(&mults), n);
    }

    #[test]
    fn subst_examples() {
        let s2 = spec(&[2]);
        let t2 = FiberMonomial::fiber(0, 1, &[2]);
        let one_plus_u = UniSeries::from_ints(8, &[1, 1]);
        let r = one_plus_u.subst_monomial(&t2, &s2, &rat_int(4)).unwrap();
        let expect = SurfaceSeries::from_terms(
            s2.clone(),
            rat_int(4),
            [
                (FiberMonomial::one(1), rat_int(1)),
                (t2.clone(), rat_int(1)),
            ],
        );
        assert_eq!(r, expect);

        let geo = UniSeries::geometric(2);
        let r = geo.subst_monomial(&t2, &s2, &rat_int(1)).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.coeff(&FiberMonomial::t(1, 1)), rat_int(1));
        assert_eq!(r.coeff(&t2), rat_int(1));
        assert_eq!(r.coeff(&FiberMonomial::one(1)), rat_int(1));
        // truncation 1 cannot reach u^2 = t
        assert!(matches!(
            UniSeries::geometric(1).subst_monomial(&t2, &s2, &rat_int(1)),
            Err(Error::InsufficientTruncation { needed: 2, have: 1 })
        ));

        let s0 = spec(&[]);
        let one_minus_u = UniSeries::from_ints(3, &[1, -1]);
        let r = one_minus_u
            .subst_monomial(&FiberMonomial::t(1, 0), &s0, &rat_int(3))
            .unwrap();
        assert_eq!(
            r.collapsed(),
            BTreeMap::from([(rat_int(0), rat_int(1)), (rat_int(1), rat_int(-1))])
        );

        assert!(matches!(
            one_minus_u.subst_monomial(&FiberMonomial::one(0), &s0, &rat_int(3)),
            Err(Error::ZeroDegreeMonomial)
        ));
    }

    #[test]
    fn surf_mul_examples() {
        let s2 = spec(&[2]);
        let one_plus = UniSeries::from_ints(9, &[1, 1]);
        let t2 = FiberMonomial::fiber(0, 1, &[2]);
        let a = one_plus.subst_monomial(&t2, &s2, &rat_int(4)).unwrap();
        let sq = a.try_mul(&a).unwrap();
        assert_eq!(sq.coeff(&FiberMonomial::one(1)), rat_int(1));
        assert_eq!(sq.coeff(&t2), rat_int(2));
        assert_eq!(sq.coeff(&FiberMonomial::t(1, 1)), rat_int(1));
        assert_eq!(sq.len(), 3);

        let s3 = spec(&[3]);
        let t3 = FiberMonomial::fiber(0, 1, &[3]);
        let cyc = UniSeries::from_ints(9, &[1, 1, 1])
            .subst_monomial(&t3, &s3, &rat_int(2))
            .unwrap();
        let lin = UniSeries::from_ints(9, &[1, -1])
            .subst_monomial(&t3, &s3, &rat_int(2))
            .unwrap();
        let prod = cyc.try_mul(&lin).unwrap();
        let expect = SurfaceSeries::from_terms(
            s3.clone(),
            rat_int(2),
            [
                (FiberMonomial::one(1), rat_int(1)),
                (FiberMonomial::t(1, 1), rat_int(-1)),
            ],
        );
        assert_eq!(prod, expect);

        assert_eq!(
            cyc.try_mul(&SurfaceSeries::one(s3.clone(), rat_int(2)))
                .unwrap(),
            cyc
        );
        assert!(matches!(cyc.try_mul(&a), Err(Error::RingMismatch { .. })));
    }

    #[test]
    fn product_truncates_at_smaller_bound() {
        let s = spec(&[2]);
        let a = UniSeries::geometric(10)
            .subst_monomial(&FiberMonomial::fiber(0, 1, &[2]), &s, &rat_int(3))
            .unwrap();
        let b = SurfaceSeries::one(s, rat(3, 2));
        let p = a.try_mul(&b).unwrap();
        assert_eq!(p.bound(), &rat(3, 2));
        assert_eq!(p.len(), 4);
    }

    #[test]
    fn json_ordering_is_by_degree_then_exponents() {
        let s = spec(&[2, 3]);
        let m = [2, 3];
        let series = SurfaceSeries::from_terms(
            s,
            rat_int(2),
            [
                (FiberMonomial::t(1, 2), rat_int(5)),
                (FiberMonomial::fiber(1, 1, &m), rat(-1, 2)),
                (FiberMonomial::fiber(0, 1, &m), rat_int(2)),
                (FiberMonomial::one(2), rat_int(1)),
            ],
        );
        let terms = series.sorted_terms();
        let degrees: Vec<String> = terms.iter().map(|t| format_rat(&t.degree)).collect();
        assert_eq!(degrees, ["0", "1/3", "1/2", "1"]);
        let compact = serde_json::to_string(&terms[1]).unwrap();
        assert_eq!(
            compact,
            r#"{"t":0,"fibers":[0,1],"degree":"1/3","coeff":"-1/2"}"#
        );
        assert_eq!(series.to_json(), series.clone().to_json());
    }

    #[test]
    fn cancellation_leaves_no_zero_entries() {
        let s = spec(&[2]);
        let mut a = SurfaceSeries::one(s, rat_int(2));
        a.add_term(FiberMonomial::t(1, 1), rat_int(3));
        a.add_term(FiberMonomial::fiber(0, 2, &[2]), rat_int(-3));
        assert!(a.is_one());
        assert_eq!(a.display(), "1");
    }

    fn arb_surface(bound: i64) -> impl Strategy<Value = SurfaceSeries> {
        let mults = vec![2u64, 3];
        proptest::collection::vec(((0u64..=4, 0u64..2, 0u64..3), -4i64..=4, 1i64..=3), 0..8)
            .prop_map(move |terms| {
                SurfaceSeries::from_terms(
                    SurfaceSpec::new(0, &mults).unwrap(),
                    rat_int(bound),
                    terms.into_iter().map(|((e0, e1, e2), n, d)| {
                        (
                            FiberMonomial {
                                e0,
                                e: vec![e1, e2],
                            },
                            rat(n, d),
                        )
                    }),
                )
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn surf_mul_ring_laws(a in arb_surface(4), b in arb_surface(4), c in arb_surface(4)) {
            prop_assert_eq!(a.try_mul(&b).unwrap(), b.try_mul(&a).unwrap());
            prop_assert_eq!(
                a.try_mul(&b).unwrap().try_mul(&c).unwrap(),
                a.try_mul(&b.try_mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.try_mul(&b.try_add(&c).unwrap()).unwrap(),
                a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn normalization_preserves_degree(e0 in 0u64..20, e in proptest::collection::vec(0u64..40, 3)) {
            let mults = [2u64, 3, 5];
            let raw = FiberMonomial { e0, e };
            let n = raw.normalized(&mults);
            prop_assert!(n.is_normalized(&mults));
            prop_assert_eq!(n.degree(&mults), raw.degree(&mults));
            prop_assert_eq!(n.normalized(&mults), n);
        }

        #[test]
        fn exp_log_inverse(cs in proptest::collection::vec((-3i64..=3, 1i64..=3), 1..6)) {
            let tail: Vec<Rat> = cs.iter().map(|&(n, d)| rat(n, d)).collect();
            let a = UniSeries::from_coeffs(30, std::iter::once(Rat::one()).chain(tail.iter().cloned()));
            prop_assert_eq!(a.log().unwrap().exp().unwrap(), a.clone());
            let z = UniSeries::from_coeffs(30, std::iter::once(Rat::zero()).chain(tail));
            prop_assert_eq!(z.exp().unwrap().log().unwrap(), z);
        }

        #[test]
        fn rational_power_consistency(
            cs in proptest::collection::vec(-2i64..=2, 1..4),
            p in -3i64..=3,
            q in 1i64..=4,
        ) {
            let a = UniSeries::from_coeffs(16, std::iter::once(1).chain(cs).map(rat_int));
            let root = a.pow_rat(&rat(p, q)).unwrap();
            let mut acc = UniSeries::one(16);
            for _ in 0..q {
                acc = &acc * &root;
            }
            prop_assert_eq!(acc, a.pow_rat(&rat_int(p)).unwrap());
        }
    }
}
