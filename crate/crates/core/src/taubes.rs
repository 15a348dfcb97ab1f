//! The universal series `F(t)` defined by
//!
//! ```text
//! Π_d F(t^d)^{−σ(d)/d} = 1 − t
//! ```
//!
//! and the Gromov–Taubes generating function obtained by raising `F` to the
//! local invariants of every fiber. For a minimal elliptic surface that product
//! collapses to `(1−t)^{c_π} Π_k (1 + t_k + ⋯ + t_k^{m_k−1})`, which by `SW = Gr`
//! is also the Seiberg–Witten series.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{floor_u64, rat, rat_int, sigma_u64, Rat};
use crate::local::{local_gw_multiple_closed, local_gw_regular};
use crate::series::{FiberMonomial, SurfaceSeries, UniSeries};
use crate::surface::SurfaceSpec;

/// `F(t)` to order `trunc`, together with `log F = Σ a_n t^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FCoefficients {
    trunc: u64,
    /// `log_f[n]` is `a_n`; index 0 is zero.
    log_f: Vec<Rat>,
    f: UniSeries,
}

impl FCoefficients {
    /// Builds from `a_1..a_trunc` (index 0 of `log_f` must be zero).
    pub fn from_log(log_f: Vec<Rat>) -> Result<Self> {
        let trunc = log_f.len().saturating_sub(1) as u64;
        let log_series = UniSeries::from_coeffs(trunc, log_f.iter().cloned());
        let f = log_series.exp()?;
        Ok(FCoefficients { trunc, log_f, f })
    }

    pub fn trunc(&self) -> u64 {
        self.trunc
    }

    /// `a_n` for `1 ≤ n ≤ trunc`.
    pub fn log_coeff(&self, n: u64) -> Option<&Rat> {
        (n >= 1).then(|| self.log_f.get(n as usize)).flatten()
    }

    pub fn log_series(&self) -> UniSeries {
        UniSeries::from_coeffs(self.trunc, self.log_f.iter().cloned())
    }

    pub fn series(&self) -> &UniSeries {
        &self.f
    }

    /// `F^r` to order `trunc` (at most the stored order).
    pub fn pow(&self, r: &Rat, trunc: u64) -> Result<UniSeries> {
        self.require(trunc)?;
        self.f.truncate(trunc).pow_rat(r)
    }

    fn require(&self, needed: u64) -> Result<()> {
        if self.trunc < needed {
            return Err(Error::InsufficientTruncation {
                needed,
                have: self.trunc,
            });
        }
        Ok(())
    }
}

/// Solves `Σ_{d|n} (σ(d)/d)·a_{n/d} = 1/n` for `n = 1..=trunc`, the
/// logarithm of the defining product, then exponentiates.
#[allow(non_snake_case)]
pub fn solve_F(trunc: u64) -> Result<FCoefficients> {
    if trunc < 1 {
        return Err(Error::OutOfRange {
            what: "trunc",
            value: trunc.to_string(),
            expected: ">= 1",
        });
    }
    let mut a = vec![Rat::zero(); trunc as usize + 1];
    for n in 1..=trunc {
        // σ(1)/1 = 1 multiplies a_n itself
        let mut rhs = rat(1, n as i64);
        for d in 2..=n {
            if n % d == 0 {
                rhs -= rat(sigma_u64(d) as i64, d as i64) * &a[(n / d) as usize];
            }
        }
        a[n as usize] = rhs;
    }
    FCoefficients::from_log(a)
}

/// Order of `F` needed to expand every factor of the product up to `bound`.
pub fn required_trunc(spec: &SurfaceSpec, bound: &Rat) -> u64 {
    let max_m = spec.multiplicities().into_iter().max().unwrap_or(1);
    floor_u64(&(bound * rat_int(max_m as i64)))
        .unwrap_or(0)
        .max(1)
}

/// `Π_d F(t^d)^{c_π·GW(F,d)} · Π_{k,d} F(t_k^d)^{GW(F_{m_k},d)}` up to `bound`,
/// with `F` solved to order `trunc`.
pub fn gr_series_gw_side(spec: &SurfaceSpec, bound: &Rat, trunc: u64) -> Result<SurfaceSeries> {
    let needed = required_trunc(spec, bound);
    if trunc < needed {
        return Err(Error::InsufficientTruncation {
            needed,
            have: trunc,
        });
    }
    gr_series_gw_side_with(&solve_F(trunc)?, spec, bound)
}

/// [`gr_series_gw_side`] with a precomputed (for example cached) `F`.
pub fn gr_series_gw_side_with(
    f: &FCoefficients,
    spec: &SurfaceSpec,
    bound: &Rat,
) -> Result<SurfaceSeries> {
    let mults = spec.multiplicities();
    let mut product = SurfaceSeries::one(spec.clone(), bound.clone());
    let Some(max_t) = floor_u64(bound) else {
        return Ok(product);
    };
    f.require(required_trunc(spec, bound))?;

    // F(M^d) ≡ 1 once d·deg(M) exceeds the bound, so each product is finite.
    if spec.c_pi() != 0 {
        let c_pi = rat_int(spec.c_pi());
        for d in 1..=max_t {
            let exponent = &c_pi * local_gw_regular(d)?;
            let factor = f.pow(&exponent, max_t / d)?.subst_monomial(
                &FiberMonomial::t(d, mults.len()),
                spec,
                bound,
            )?;
            product = product.try_mul(&factor)?;
        }
    }
    for (k, &m) in mults.iter().enumerate() {
        let max_d = floor_u64(&(bound * rat_int(m as i64))).unwrap_or(0);
        for d in 1..=max_d {
            let exponent = local_gw_multiple_closed(m, d)?;
            let factor = f.pow(&exponent, max_d / d)?.subst_monomial(
                &FiberMonomial::fiber(k, d, &mults),
                spec,
                bound,
            )?;
            product = product.try_mul(&factor)?;
        }
    }
    Ok(product)
}

/// `(1−t)^{c_π} · Π_k (1 + t_k + ⋯ + t_k^{m_k−1})` up to `bound`.
pub fn gr_series_closed_side(spec: &SurfaceSpec, bound: &Rat) -> Result<SurfaceSeries> {
    let mults = spec.multiplicities();
    let mut product = SurfaceSeries::one(spec.clone(), bound.clone());
    let Some(max_t) = floor_u64(bound) else {
        return Ok(product);
    };
    let t = FiberMonomial::t(1, mults.len());
    let c_pi = spec.c_pi();
    if c_pi >= 0 {
        let one_minus_t = SurfaceSeries::from_terms(
            spec.clone(),
            bound.clone(),
            [
                (FiberMonomial::one(mults.len()), Rat::one()),
                (t, -Rat::one()),
            ],
        );
        for _ in 0..c_pi {
            product = product.try_mul(&one_minus_t)?;
        }
    } else {
        let power = UniSeries::from_ints(max_t, &[1, -1]).pow_rat(&rat_int(c_pi))?;
        product = product.try_mul(&power.subst_monomial(&t, spec, bound)?)?;
    }
    for (k, &m) in mults.iter().enumerate() {
        let factor = SurfaceSeries::from_terms(
            spec.clone(),
            bound.clone(),
            (0..m).map(|e| (FiberMonomial::fiber(k, e, &mults), Rat::one())),
        );
        product = product.try_mul(&factor)?;
    }
    Ok(product)
}

/// `Π_{d ≤ bound} F(u^d)^{e(d)}` in one variable, to order `bound`.
fn univariate_product(
    f: &FCoefficients,
    bound: u64,
    exponent: impl Fn(u64) -> Result<Rat>,
) -> Result<UniSeries> {
    f.require(bound)?;
    let mut product = UniSeries::one(bound);
    for d in 1..=bound {
        let e = exponent(d)?;
        if e.is_zero() {
            continue;
        }
        let factor = f.pow(&e, bound / d)?.compose_power(d, bound)?;
        product = &product * &factor;
    }
    Ok(product)
}

/// Checks `Π_d F(u^d)^{GW₁^loc(F_m,d)} ≡ 1 + u + ⋯ + u^{m−1}` mod `u^{bound+1}`.
pub fn per_fiber_product_check(m: u64, bound: u64, trunc: u64) -> Result<bool> {
    local_gw_multiple_closed(m, 1)?;
    if trunc < bound {
        return Err(Error::InsufficientTruncation {
            needed: bound,
            have: trunc,
        });
    }
    let f = solve_F(trunc.max(1))?;
    let product = univariate_product(&f, bound, |d| local_gw_multiple_closed(m, d))?;
    let expect = UniSeries::from_coeffs(bound, (0..m).map(|_| Rat::one()));
    Ok(product == expect)
}

/// `Π_d F(t^d)^{c·GW₁^loc(F,d)}` to order `bound`; equals `(1−t)^c`.
pub fn regular_product(c_pi: i64, bound: u64, trunc: u64) -> Result<UniSeries> {
    if trunc < bound {
        return Err(Error::InsufficientTruncation {
            needed: bound,
            have: trunc,
        });
    }
    let f = solve_F(trunc.max(1))?;
    let c = rat_int(c_pi);
    univariate_product(&f, bound, |d| Ok(&c * local_gw_regular(d)?))
}

/// The defining product `Π_{d ≤ bound} F(t^d)^{−σ(d)/d}` recomputed from `f`.
pub fn defining_product(f: &FCoefficients, bound: u64) -> Result<UniSeries> {
    univariate_product(f, bound, |d| Ok(rat(-(sigma_u64(d) as i64), d as i64)))
}
