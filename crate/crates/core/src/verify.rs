//! Invariant suites runnable from the command line.
//!
//! Each suite re-checks the identities the library is built on at desk
//! scale and records every disagreement with both sides printed.

use std::fmt;
use std::time::{Duration, Instant};

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{divisors, format_rat, gcd, rat, rat_int, sigma_ratio, Rat};
use crate::lattice::{
    admissible_period_classes, enumerate_sublattices, factors_through, partition_moduli,
    torsion_pullback_trivial,
};
use crate::local::{
    local_gw_assembled_m2, local_gw_multiple_assembled, local_gw_multiple_closed, local_gw_regular,
    local_gw_regular_assembled, local_gw_regular_multi,
};
use crate::series::{FiberMonomial, SurfaceSeries, UniSeries};
use crate::surface::SurfaceSpec;
use crate::taubes::{
    defining_product, gr_series_closed_side, gr_series_gw_side_with, per_fiber_product_check,
    regular_product, required_trunc, solve_F,
};

pub const SUITES: [&str; 5] = ["lattice", "local", "series", "taubes", "all"];

/// `(c_π, multiplicities)` checked by the Gr = SW suite.
pub const GR_SPECS: [(i64, &[u64]); 6] = [
    (0, &[]),
    (0, &[2, 3]),
    (1, &[2]),
    (2, &[]),
    (2, &[3, 3]),
    (1, &[2, 2, 5]),
];

const RANDOM_CASES: usize = 500;
const SEED: u64 = 0x0005_eed0_fe11;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub check: String,
    pub inputs: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub cases: u64,
    pub failures: Vec<Failure>,
    #[serde(serialize_with = "secs")]
    pub elapsed: Duration,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl VerificationReport {
    fn new(suite: &str) -> Self {
        VerificationReport {
            suite: suite.to_string(),
            cases: 0,
            failures: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check<T: PartialEq + fmt::Debug>(
        &mut self,
        check: &str,
        inputs: impl FnOnce() -> String,
        left: T,
        right: T,
    ) {
        self.cases += 1;
        if left != right {
            self.failures.push(Failure {
                check: check.to_string(),
                inputs: inputs(),
                left: format!("{left:?}"),
                right: format!("{right:?}"),
            });
        }
    }

    fn check_rat(&mut self, check: &str, inputs: impl FnOnce() -> String, left: &Rat, right: &Rat) {
        self.cases += 1;
        if left != right {
            self.failures.push(Failure {
                check: check.to_string(),
                inputs: inputs(),
                left: format_rat(left),
                right: format_rat(right),
            });
        }
    }

    fn absorb(&mut self, other: VerificationReport) {
        self.cases += other.cases;
        self.failures.extend(other.failures);
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {}: {} ({} cases, {} failures, {:.3}s)",
            self.suite,
            if self.passed() { "PASS" } else { "FAIL" },
            self.cases,
            self.failures.len(),
            self.elapsed.as_secs_f64()
        )?;
        for fail in &self.failures {
            writeln!(
                f,
                "  {} [{}]: {} != {}",
                fail.check, fail.inputs, fail.left, fail.right
            )?;
        }
        Ok(())
    }
}

pub fn run_suite(name: &str) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = match name {
        "lattice" => lattice_suite()?,
        "local" => local_suite()?,
        "series" => series_suite()?,
        "taubes" => taubes_suite()?,
        "all" => {
            let mut all = VerificationReport::new("all");
            for suite in [lattice_suite, local_suite, series_suite, taubes_suite] {
                all.absorb(suite()?);
            }
            all
        }
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    report.elapsed = start.elapsed();
    Ok(report)
}

fn lattice_suite() -> Result<VerificationReport> {
    let mut r = VerificationReport::new("lattice");
    for d in 1..=300u64 {
        let all = enumerate_sublattices(d)?;
        let divisor_sum: u64 = divisors(d)?.iter().sum();
        r.check(
            "sublattice count = sigma(d)",
            || format!("d={d}"),
            all.len() as u64,
            divisor_sum,
        );
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        r.check(
            "sublattices distinct",
            || format!("d={d}"),
            sorted.len(),
            all.len(),
        );
        for m in 2..=8u64 {
            let part = partition_moduli(m, d)?;
            let lifted = sigma_ratio(d, m);
            r.check(
                "|M-| = sigma(d/m)",
                || format!("m={m} d={d}"),
                part.minus.len() as u64,
                lifted,
            );
            r.check(
                "|M+| = sigma(d) - sigma(d/m)",
                || format!("m={m} d={d}"),
                part.plus.len() as u64,
                divisor_sum - lifted,
            );
        }
    }
    for m in 2..=8u64 {
        let classes = admissible_period_classes(m)?;
        for d in 1..=100u64 {
            for l in enumerate_sublattices(d)? {
                let lifts = factors_through(&l, m);
                for pc in &classes {
                    r.check(
                        "torsion criterion = lifting criterion",
                        || format!("m={m} k1={} L=({},{},{})", pc.k1, l.a, l.b, l.k),
                        torsion_pullback_trivial(&l, pc),
                        lifts,
                    );
                }
            }
        }
    }
    for m in 2..=24u64 {
        let got: Vec<u64> = admissible_period_classes(m)?.iter().map(|p| p.k1).collect();
        let units: Vec<u64> = (1..m)
            .filter(|&k| matches!(gcd(k as i64, m as i64), Ok(1)))
            .collect();
        r.check(
            "admissible classes = units mod m",
            || format!("m={m}"),
            got,
            units,
        );
    }
    Ok(r)
}

fn local_suite() -> Result<VerificationReport> {
    let mut r = VerificationReport::new("local");
    for d in 1..=300u64 {
        for m in 3..=8u64 {
            r.check_rat(
                "assembled = closed",
                || format!("m={m} d={d}"),
                &local_gw_multiple_assembled(m, d)?,
                &local_gw_multiple_closed(m, d)?,
            );
        }
        r.check_rat(
            "m=2 per-point sum = closed",
            || format!("d={d}"),
            &local_gw_assembled_m2(d)?,
            &local_gw_multiple_closed(2, d)?,
        );
    }
    for d in 1..=100u64 {
        let s = sigma_ratio(d, 1) as i64;
        r.check_rat(
            "regular = -sigma(d)/d",
            || format!("d={d}"),
            &local_gw_regular(d)?,
            &rat(-s, d as i64),
        );
        for n in 1..=4u64 {
            r.check_rat(
                "regular assembled = n * regular",
                || format!("n={n} d={d}"),
                &local_gw_regular_assembled(n, d)?,
                &local_gw_regular_multi(n, d)?,
            );
        }
        for m in 2..=8u64 {
            if d % m != 0 {
                let v = local_gw_multiple_closed(m, d)?;
                r.check_rat(
                    "m does not divide d",
                    || format!("m={m} d={d}"),
                    &v,
                    &rat(s, d as i64),
                );
                r.check(
                    "multiple-fiber value positive",
                    || format!("m={m} d={d}"),
                    v > rat_int(0),
                    true,
                );
            }
        }
    }
    Ok(r)
}

fn random_rat(rng: &mut ChaCha8Rng, span: i64, max_den: i64) -> Rat {
    rat(rng.gen_range(-span..=span), rng.gen_range(1..=max_den))
}

fn random_surface(rng: &mut ChaCha8Rng, spec: &SurfaceSpec, bound: &Rat) -> SurfaceSeries {
    let terms: Vec<_> = (0..rng.gen_range(0..8))
        .map(|_| {
            let mono = FiberMonomial {
                e0: rng.gen_range(0..=4),
                e: vec![rng.gen_range(0..4), rng.gen_range(0..5)],
            };
            (mono, random_rat(rng, 4, 3))
        })
        .collect();
    SurfaceSeries::from_terms(spec.clone(), bound.clone(), terms)
}

/// Random `c + Σ_{n ≤ 6} c_n u^n` with constant term `constant`.
fn random_uni(rng: &mut ChaCha8Rng, trunc: u64, constant: Rat) -> UniSeries {
    let head: Vec<Rat> = (1..=6).map(|_| random_rat(rng, 3, 3)).collect();
    UniSeries::from_coeffs(trunc, std::iter::once(constant).chain(head))
}

fn series_suite() -> Result<VerificationReport> {
    let mut r = VerificationReport::new("series");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let spec = SurfaceSpec::new(0, &[2, 3])?;
    let bound = rat_int(4);
    for case in 0..RANDOM_CASES {
        let a = random_surface(&mut rng, &spec, &bound);
        let b = random_surface(&mut rng, &spec, &bound);
        let c = random_surface(&mut rng, &spec, &bound);
        r.check(
            "surf_mul commutative",
            || format!("case {case}"),
            a.try_mul(&b)?,
            b.try_mul(&a)?,
        );
        r.check(
            "surf_mul associative",
            || format!("case {case}"),
            a.try_mul(&b)?.try_mul(&c)?,
            a.try_mul(&b.try_mul(&c)?)?,
        );

        let raw = FiberMonomial {
            e0: rng.gen_range(0..20),
            e: vec![rng.gen_range(0..40), rng.gen_range(0..40)],
        };
        let mults = [2, 3];
        let norm = raw.normalized(&mults);
        r.check(
            "normalize keeps degree",
            || format!("{raw:?}"),
            norm.degree(&mults),
            raw.degree(&mults),
        );
        r.check(
            "normalize idempotent",
            || format!("{raw:?}"),
            norm.normalized(&mults),
            norm.clone(),
        );
    }
    for case in 0..RANDOM_CASES {
        let a = random_uni(&mut rng, 50, Rat::one());
        r.check(
            "exp(log A) = A",
            || format!("case {case}"),
            a.log()?.exp()?,
            a.clone(),
        );
        let z = random_uni(&mut rng, 50, rat_int(0));
        r.check(
            "log(exp Z) = Z",
            || format!("case {case}"),
            z.exp()?.log()?,
            z.clone(),
        );
    }
    for case in 0..RANDOM_CASES {
        let a = random_uni(&mut rng, 12, Rat::one());
        let p = rng.gen_range(-3..=3i64);
        let q = rng.gen_range(1..=4i64);
        let root = a.pow_rat(&rat(p, q))?;
        let mut acc = UniSeries::one(12);
        for _ in 0..q {
            acc = &acc * &root;
        }
        r.check(
            "(A^(p/q))^q = A^p",
            || format!("case {case} p={p} q={q}"),
            acc,
            a.pow_rat(&rat_int(p))?,
        );
    }
    Ok(r)
}

fn taubes_suite() -> Result<VerificationReport> {
    let mut r = VerificationReport::new("taubes");
    let f = solve_F(50)?;
    r.check(
        "defining product = 1 - t",
        || "N=50".into(),
        defining_product(&f, 50)?,
        UniSeries::from_ints(50, &[1, -1]),
    );
    for m in 2..=6u64 {
        r.check(
            "per-fiber product",
            || format!("m={m} bound=40"),
            per_fiber_product_check(m, 40, 40)?,
            true,
        );
    }
    for c in 0..=3i64 {
        let expect = UniSeries::from_ints(20, &[1, -1]).pow_rat(&rat_int(c))?;
        r.check(
            "regular product = (1-t)^c",
            || format!("c={c}"),
            regular_product(c, 20, 20)?,
            expect,
        );
    }
    let bound = rat_int(10);
    for (c_pi, mults) in GR_SPECS {
        let spec = SurfaceSpec::new(c_pi, mults)?;
        let gw = gr_series_gw_side_with(&f, &spec, &bound)?;
        let closed = gr_series_closed_side(&spec, &bound)?;
        debug_assert!(required_trunc(&spec, &bound) <= 50);
        r.check(
            "Gr gw side = closed side",
            || format!("c_pi={c_pi} m={mults:?}"),
            gw.to_json(),
            closed.to_json(),
        );
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(run_suite("bogus"), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn lattice_suite_passes() {
        let r = run_suite("lattice").unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.cases > 1000);
    }

    #[test]
    fn failures_are_reported_with_both_sides() {
        let mut r = VerificationReport::new("x");
        r.check_rat("demo", || "d=1".into(), &rat(1, 2), &rat(1, 3));
        r.check("same", || "-".into(), 1, 1);
        assert!(!r.passed());
        assert_eq!(r.cases, 2);
        assert_eq!(
            r.failures,
            vec![Failure {
                check: "demo".into(),
                inputs: "d=1".into(),
                left: "1/2".into(),
                right: "1/3".into()
            }]
        );
        assert!(r.to_string().contains("FAIL"));
    }
}
