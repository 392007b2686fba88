//! Seeded property harness for the shift normalization and the transport
//! isomorphism between two power monoids.
//!
//! Each trial draws its inputs from its own ChaCha stream (`seed`, stream
//! = trial index), so a failing trial can be replayed in isolation and the
//! report does not depend on how trials are scheduled across threads.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cones::{Cone, WholeGroup};
use crate::power::{
    admissible_shifts, gen_subset, normalize_shift_bruteforce, normalize_shift_inductive,
    transport, transport_with_shift, FinSubset, PowmonError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("size and coordinate bounds must be at least 1")]
    InvalidBounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    /// Exactly one candidate shift works, checked in both monoids.
    Uniqueness,
    /// Inductive and brute-force normalization agree, in both monoids.
    OracleAgreement,
    Homomorphism,
    ShiftAdditivity,
    /// `dst → src → dst` and `src → dst → src` both return the input.
    RoundTrip,
    Identity,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::Uniqueness,
        Property::OracleAgreement,
        Property::Homomorphism,
        Property::ShiftAdditivity,
        Property::RoundTrip,
        Property::Identity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Uniqueness => "uniqueness",
            Property::OracleAgreement => "oracle_agreement",
            Property::Homomorphism => "homomorphism",
            Property::ShiftAdditivity => "shift_additivity",
            Property::RoundTrip => "round_trip",
            Property::Identity => "identity",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub trials: u64,
    pub seed: u64,
    pub size_bound: usize,
    pub coord_bound: i64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            trials: 1000,
            seed: 42,
            size_bound: 8,
            coord_bound: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PropertyTally {
    pub checked: u64,
    pub failed: u64,
}

/// One failed check. `seed` and `trial` are enough to regenerate the
/// inputs with [`run_trial`]; `inputs` holds them in text form as well.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailureRecord {
    pub trial: u64,
    pub seed: u64,
    pub property: Property,
    pub inputs: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub property: Property,
    pub failure: Option<FailureRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub trials: u64,
    pub checks: u64,
    pub failures: u64,
    pub seed: u64,
    pub size_bound: usize,
    pub coord_bound: i64,
    pub tallies: BTreeMap<Property, PropertyTally>,
    pub failure_records: Vec<FailureRecord>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerifyReport {
    pub fn tally(&self, p: Property) -> PropertyTally {
        self.tallies.get(&p).copied().unwrap_or_default()
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for VerifyReport {
    /// Timing is left out so the text form is identical across runs.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "seed={} trials={} size_bound={} coord_bound={} checks={} failures={}",
            self.seed, self.trials, self.size_bound, self.coord_bound, self.checks, self.failures
        )?;
        for (p, t) in &self.tallies {
            writeln!(f, "{p}: checked={} failed={}", t.checked, t.failed)?;
        }
        for r in &self.failure_records {
            writeln!(
                f,
                "FAIL trial={} property={} inputs=[{}] detail={}",
                r.trial,
                r.property,
                r.inputs.join(" "),
                r.detail
            )?;
        }
        Ok(())
    }
}

/// The input generator for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn show<T: fmt::Display>(r: &Result<T, PowmonError>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

/// `Ok` when exactly one candidate shift moves `set` into `m`.
pub fn check_uniqueness(m: &impl Cone, set: &FinSubset) -> Result<(), String> {
    let shifts = admissible_shifts(m, set);
    if shifts.len() == 1 {
        Ok(())
    } else {
        let shown: Vec<String> = shifts.iter().map(ToString::to_string).collect();
        Err(format!(
            "{} admissible shifts: [{}]",
            shifts.len(),
            shown.join(",")
        ))
    }
}

pub fn check_oracle_agreement(m: &impl Cone, set: &FinSubset) -> Result<(), String> {
    let ind = normalize_shift_inductive(m, set);
    let brute = normalize_shift_bruteforce(m, set);
    match (&ind, &brute) {
        (Ok(a), Ok(b)) if a == b => Ok(()),
        _ => Err(format!(
            "inductive {} vs brute force {}",
            show(&ind.map(|r| r.shift)),
            show(&brute.map(|r| r.shift))
        )),
    }
}

/// Checks `f(X + Y) = f(X) + f(Y)` and, separately, that the shifts add up.
pub fn check_homomorphism(
    src: &impl Cone,
    dst: &impl Cone,
    x: &FinSubset,
    y: &FinSubset,
) -> (Result<(), String>, Result<(), String>) {
    let fx = transport_with_shift(src, dst, x);
    let fy = transport_with_shift(src, dst, y);
    let fxy = transport_with_shift(src, dst, &x.product(y));
    match (fx, fy, fxy) {
        (Ok(fx), Ok(fy), Ok(fxy)) => {
            let prod = fx.normalized.product(&fy.normalized);
            let hom = if prod == fxy.normalized {
                Ok(())
            } else {
                Err(format!("f(XY)={} but f(X)f(Y)={}", fxy.normalized, prod))
            };
            let sum = &fx.shift + &fy.shift;
            let add = if sum == fxy.shift {
                Ok(())
            } else {
                Err(format!("a+b={} but c={}", sum, fxy.shift))
            };
            (hom, add)
        }
        (fx, fy, fxy) => {
            let msg = format!(
                "transport failed: f(X) {}, f(Y) {}, f(XY) {}",
                show(&fx.map(|r| r.shift)),
                show(&fy.map(|r| r.shift)),
                show(&fxy.map(|r| r.shift))
            );
            (Err(msg.clone()), Err(msg))
        }
    }
}

/// `transport(dst, src, transport(src, dst, X)) = X`.
pub fn check_round_trip(src: &impl Cone, dst: &impl Cone, set: &FinSubset) -> Result<(), String> {
    let there = transport(src, dst, set);
    let back = there
        .as_ref()
        .map_err(Clone::clone)
        .and_then(|img| transport(dst, src, img));
    match back {
        Ok(ref b) if b == set => Ok(()),
        _ => Err(format!("image {} returned {}", show(&there), show(&back))),
    }
}

pub fn check_identity(src: &impl Cone, dst: &impl Cone) -> Result<(), String> {
    let id = FinSubset::identity();
    let fwd = transport(src, dst, &id);
    let bwd = transport(dst, src, &id);
    match (&fwd, &bwd) {
        (Ok(a), Ok(b)) if *a == id && *b == id => Ok(()),
        _ => Err(format!("forward {} backward {}", show(&fwd), show(&bwd))),
    }
}

fn record(
    out: &mut Vec<Check>,
    property: Property,
    cfg: &VerifyConfig,
    trial: u64,
    inputs: &[&FinSubset],
    result: Result<(), String>,
) {
    let failure = result.err().map(|detail| FailureRecord {
        trial,
        seed: cfg.seed,
        property,
        inputs: inputs.iter().map(ToString::to_string).collect(),
        detail,
    });
    out.push(Check { property, failure });
}

/// Runs every property once on the inputs of trial `trial`.
///
/// A generator failure (for instance a cone too thin for rejection
/// sampling) is reported as a failed check of the property that needed
/// the input.
pub fn run_trial(src: &impl Cone, dst: &impl Cone, cfg: &VerifyConfig, trial: u64) -> Vec<Check> {
    let mut rng = trial_rng(cfg.seed, trial);
    let mut out = Vec::new();
    let (k, c) = (cfg.size_bound, cfg.coord_bound);

    let mut draw = |m: &dyn Cone| -> Result<FinSubset, String> {
        gen_subset(&m, k, c, &mut rng).map_err(|e| format!("generator: {e}"))
    };
    let free = draw(&WholeGroup);
    let xs = draw(src);
    let ys = draw(src);
    let zs = draw(dst);

    match &free {
        Ok(x) => {
            for m in [src as &dyn Cone, dst] {
                record(
                    &mut out,
                    Property::Uniqueness,
                    cfg,
                    trial,
                    &[x],
                    check_uniqueness(&m, x),
                );
            }
            for m in [src as &dyn Cone, dst] {
                let r = check_oracle_agreement(&m, x);
                record(&mut out, Property::OracleAgreement, cfg, trial, &[x], r);
            }
        }
        Err(e) => {
            for p in [Property::Uniqueness, Property::OracleAgreement] {
                record(&mut out, p, cfg, trial, &[], Err(e.clone()));
            }
        }
    }

    match (&xs, &ys) {
        (Ok(x), Ok(y)) => {
            let (hom, add) = check_homomorphism(src, dst, x, y);
            record(&mut out, Property::Homomorphism, cfg, trial, &[x, y], hom);
            record(
                &mut out,
                Property::ShiftAdditivity,
                cfg,
                trial,
                &[x, y],
                add,
            );
        }
        (Err(e), _) | (_, Err(e)) => {
            for p in [Property::Homomorphism, Property::ShiftAdditivity] {
                record(&mut out, p, cfg, trial, &[], Err(e.clone()));
            }
        }
    }

    match &xs {
        Ok(x) => record(
            &mut out,
            Property::RoundTrip,
            cfg,
            trial,
            &[x],
            check_round_trip(src, dst, x),
        ),
        Err(e) => record(
            &mut out,
            Property::RoundTrip,
            cfg,
            trial,
            &[],
            Err(e.clone()),
        ),
    }
    match &zs {
        Ok(z) => record(
            &mut out,
            Property::RoundTrip,
            cfg,
            trial,
            &[z],
            check_round_trip(dst, src, z),
        ),
        Err(e) => record(
            &mut out,
            Property::RoundTrip,
            cfg,
            trial,
            &[],
            Err(e.clone()),
        ),
    }

    record(
        &mut out,
        Property::Identity,
        cfg,
        trial,
        &[],
        check_identity(src, dst),
    );
    out
}

/// Runs `cfg.trials` seeded trials in parallel and aggregates the results.
/// Failures are data: the report lists them, it does not error.
pub fn verify(
    src: &impl Cone,
    dst: &impl Cone,
    cfg: &VerifyConfig,
) -> Result<VerifyReport, VerifyError> {
    if cfg.trials == 0 {
        return Err(VerifyError::NoTrials);
    }
    if cfg.size_bound == 0 || cfg.coord_bound < 1 {
        return Err(VerifyError::InvalidBounds);
    }
    let start = Instant::now();
    let per_trial: Vec<Vec<Check>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(src, dst, cfg, t))
        .collect();

    let mut tallies: BTreeMap<Property, PropertyTally> = Property::ALL
        .iter()
        .map(|&p| (p, PropertyTally::default()))
        .collect();
    let mut failure_records = Vec::new();
    let mut checks = 0;
    for check in per_trial.into_iter().flatten() {
        checks += 1;
        let t = tallies.entry(check.property).or_default();
        t.checked += 1;
        if let Some(f) = check.failure {
            t.failed += 1;
            failure_records.push(f);
        }
    }
    Ok(VerifyReport {
        trials: cfg.trials,
        checks,
        failures: failure_records.len() as u64,
        seed: cfg.seed,
        size_bound: cfg.size_bound,
        coord_bound: cfg.coord_bound,
        tallies,
        failure_records,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::MonoidSpec;
    use crate::lattice::{GroupElement, QuadraticIrrational};

    fn slope() -> MonoidSpec {
        MonoidSpec::Slope(QuadraticIrrational::sqrt2())
    }

    /// Lex cone with `y > 0` weakened to `y ≥ 0`: no longer reduced.
    struct WeakLex;
    impl Cone for WeakLex {
        fn contains(&self, g: &GroupElement) -> bool {
            use num_traits::Signed;
            !g.y.is_negative()
        }
    }

    #[test]
    fn one_trial_runs_each_property() {
        let cfg = VerifyConfig {
            trials: 1,
            ..VerifyConfig::default()
        };
        let report = verify(&MonoidSpec::Lex, &slope(), &cfg).unwrap();
        assert!(report.passed(), "{report}");
        for p in Property::ALL {
            assert!(report.tally(p).checked >= 1, "{p}");
        }
        assert_eq!(report.tally(Property::Identity).checked, 1);
        assert_eq!(report.tally(Property::Homomorphism).checked, 1);
    }

    #[test]
    fn zero_trials_rejected() {
        let cfg = VerifyConfig {
            trials: 0,
            ..VerifyConfig::default()
        };
        assert_eq!(
            verify(&MonoidSpec::Lex, &slope(), &cfg).unwrap_err(),
            VerifyError::NoTrials
        );
    }

    #[test]
    fn injected_membership_bug_is_caught() {
        let cfg = VerifyConfig {
            trials: 50,
            ..VerifyConfig::default()
        };
        let report = verify(&WeakLex, &slope(), &cfg).unwrap();
        assert!(report.failures > 0);
        assert!(report.tally(Property::Uniqueness).failed > 0);
        let first = &report.failure_records[0];
        // the record is enough to replay the trial
        let replay = run_trial(&WeakLex, &slope(), &cfg, first.trial);
        assert!(replay.iter().any(|c| c.failure.as_ref() == Some(first)));
    }

    #[test]
    fn report_is_schedule_independent() {
        let cfg = VerifyConfig {
            trials: 40,
            seed: 9,
            size_bound: 5,
            coord_bound: 10,
        };
        let a = verify(&WeakLex, &slope(), &cfg).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| verify(&WeakLex, &slope(), &cfg).unwrap());
        assert_eq!(a.to_string(), b.to_string());
        assert_eq!(a.failure_records, b.failure_records);
    }
}
