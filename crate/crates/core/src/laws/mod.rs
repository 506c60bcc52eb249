//! Executable registry of the rank-shifting identities.
//!
//! Every law is a pair of terms over named variables. Laws whose operators
//! stay at rank 2 or below are checked exactly on Escherian value sets;
//! laws involving powers, roots, logarithms or towers are checked on reals,
//! numerically unless stated otherwise.

mod registry;
mod term;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cxe::CxE;
use crate::error::{EscherError, Result};
use crate::numeric::Numeric;
use crate::rank0::ValueSet;
use crate::scalar::PrecisionConfig;

pub use registry::{
    all_laws, Carrier, Domain, EqualityMode, Law, GENERIC_WINDOWS, NUMERIC_TOLERANCE,
};
pub use term::{Addition, Bindings, Op, Ops, Term};

use term::{EscherEval, RealEval};

/// Witnesses kept per report.
const MAX_WITNESSES: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub bindings: Vec<(String, String)>,
    pub lhs: String,
    pub rhs: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawReport {
    pub id: String,
    pub statement: String,
    pub mode: &'static str,
    pub trials: usize,
    /// Number of failing trials; `witnesses` holds the first few.
    pub failed: usize,
    pub witnesses: Vec<Failure>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {:<7} {:<9} {}/{} trials  {}",
            self.id,
            self.mode,
            self.trials - self.failed,
            self.trials,
            self.statement
        )?;
        for w in &self.witnesses {
            let b: Vec<String> = w.bindings.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(
                f,
                "\n    at {}: lhs {} rhs {} ({})",
                b.join(", "),
                w.lhs,
                w.rhs,
                w.reason
            )?;
        }
        Ok(())
    }
}

/// Ids of every registered law, in suite order.
pub fn law_ids() -> Vec<String> {
    all_laws().into_iter().map(|l| l.id).collect()
}

/// Looks a law up by id. Generic families take a rank suffix (`15.0@1`);
/// a rank outside the family's window is rejected.
pub fn lookup(id: &str) -> Result<Law> {
    if let Some((family, m)) = id.split_once('@') {
        if let Some((_, lo, hi)) = GENERIC_WINDOWS.iter().find(|(f, _, _)| *f == family) {
            let in_window = m.parse::<u32>().is_ok_and(|m| (*lo..=*hi).contains(&m));
            if !in_window {
                return Err(EscherError::UnknownLaw(format!(
                    "{family} holds only for m in {lo}..={hi}, not m = {m}"
                )));
            }
        }
    }
    all_laws()
        .into_iter()
        .find(|l| l.id == id)
        .ok_or_else(|| EscherError::UnknownLaw(id.to_string()))
}

/// Resolves an id that may name a whole generic family (`14.0`) to the
/// laws it covers.
pub fn resolve(id: &str) -> Result<Vec<Law>> {
    let prefix = format!("{id}@");
    let family: Vec<Law> = all_laws()
        .into_iter()
        .filter(|l| l.id.starts_with(&prefix))
        .collect();
    if family.is_empty() {
        Ok(vec![lookup(id)?])
    } else {
        Ok(family)
    }
}

enum Sides {
    Sets(ValueSet, ValueSet),
    Reals(Numeric, Numeric),
}

fn evaluate(law: &Law, bindings: &Bindings, ops: Ops, cfg: &PrecisionConfig) -> Result<Sides> {
    match law.carrier {
        Carrier::Escherian => {
            let ev = EscherEval { bindings, ops, cfg };
            Ok(Sides::Sets(ev.eval(&law.lhs)?, ev.eval(&law.rhs)?))
        }
        Carrier::Real => {
            let ev = RealEval { bindings, cfg };
            Ok(Sides::Reals(ev.eval(&law.lhs)?, ev.eval(&law.rhs)?))
        }
    }
}

/// `None` when the sides agree, else the reason they do not.
fn compare(law: &Law, sides: &Sides, cfg: &PrecisionConfig) -> Option<String> {
    match (sides, law.mode) {
        (Sides::Sets(l, r), EqualityMode::Principal) => {
            (l.principal() != r.principal()).then(|| "principal values differ".into())
        }
        (Sides::Sets(l, r), _) => {
            if l.principal() != r.principal() {
                Some("principal values differ".into())
            } else if !l.same_members(r) {
                Some("value sets differ".into())
            } else {
                None
            }
        }
        (Sides::Reals(l, r), EqualityMode::Numeric { rel_tol }) => {
            let bits = cfg.numeric_bits() as usize;
            (!l.approx_eq(r, rel_tol, bits)).then(|| format!("differ beyond {rel_tol:e}"))
        }
        (Sides::Reals(l, r), _) => {
            if !(l.is_exact() && r.is_exact()) {
                Some("inexact result in an exact law".into())
            } else {
                (l != r).then(|| "values differ".into())
            }
        }
    }
}

fn render(sides: &Sides) -> (String, String) {
    match sides {
        Sides::Sets(l, r) => (l.to_string(), r.to_string()),
        Sides::Reals(l, r) => (l.display(25), r.display(25)),
    }
}

fn check_domain(law: &Law, bindings: &Bindings) -> Result<()> {
    for (name, dom) in &law.vars {
        let x = bindings
            .get(*name)
            .ok_or_else(|| EscherError::Domain(format!("{}: missing binding `{name}`", law.id)))?;
        if !dom.contains(x) {
            return Err(EscherError::Domain(format!(
                "{}: `{name}` = {x} is not a {}",
                law.id,
                dom.describe()
            )));
        }
    }
    Ok(())
}

/// One trial. `Ok(None)` is a pass.
fn trial(law: &Law, bindings: &Bindings, ops: Ops, cfg: &PrecisionConfig) -> Option<Failure> {
    let bound = || {
        bindings
            .iter()
            .map(|(k, v)| (k.clone(), v.to_string()))
            .collect::<Vec<_>>()
    };
    match evaluate(law, bindings, ops, cfg) {
        Ok(sides) => compare(law, &sides, cfg).map(|reason| {
            let (lhs, rhs) = render(&sides);
            Failure {
                bindings: bound(),
                lhs,
                rhs,
                reason,
            }
        }),
        Err(e) => Some(Failure {
            bindings: bound(),
            lhs: String::new(),
            rhs: String::new(),
            reason: e.to_string(),
        }),
    }
}

fn fixed_bindings(law: &Law) -> Option<Bindings> {
    law.fixed.as_ref().map(|fixed| {
        fixed
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect()
    })
}

/// Checks one law on the given bindings.
pub fn check_law(id: &str, bindings: &Bindings, cfg: &PrecisionConfig) -> Result<LawReport> {
    check_law_with(id, bindings, Ops::default(), cfg)
}

pub fn check_law_with(
    id: &str,
    bindings: &Bindings,
    ops: Ops,
    cfg: &PrecisionConfig,
) -> Result<LawReport> {
    let law = lookup(id)?;
    check_domain(&law, bindings)?;
    let failure = trial(&law, bindings, ops, cfg);
    Ok(LawReport {
        id: law.id.clone(),
        statement: law.statement(),
        mode: law.mode.name(),
        trials: 1,
        failed: usize::from(failure.is_some()),
        witnesses: failure.into_iter().collect(),
    })
}

/// 64-bit FNV-1a, used to give each law its own random stream.
fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Bindings for trial `index` of `law` under `seed`. Depends on nothing
/// else, so trials can run in any order or in parallel.
pub fn sample_bindings(law: &Law, seed: u64, index: u64) -> Bindings {
    if let Some(b) = fixed_bindings(law) {
        return b;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(&law.id));
    rng.set_stream(index);
    law.vars
        .iter()
        .map(|(name, dom)| (name.to_string(), dom.sample(&mut rng)))
        .collect()
}

fn fuzz(law: &Law, trials: usize, seed: u64, ops: Ops, cfg: &PrecisionConfig) -> LawReport {
    let trials = if law.fixed.is_some() { 1 } else { trials };
    let mut failed = 0;
    let mut witnesses = Vec::new();
    for i in 0..trials {
        let b = sample_bindings(law, seed, i as u64);
        if let Some(f) = trial(law, &b, ops, cfg) {
            failed += 1;
            if witnesses.len() < MAX_WITNESSES {
                witnesses.push(f);
            }
        }
    }
    LawReport {
        id: law.id.clone(),
        statement: law.statement(),
        mode: law.mode.name(),
        trials,
        failed,
        witnesses,
    }
}

/// Checks a law on `trials` seeded random bindings from its domain.
pub fn fuzz_law(id: &str, trials: usize, seed: u64, cfg: &PrecisionConfig) -> Result<LawReport> {
    fuzz_law_with(id, trials, seed, Ops::default(), cfg)
}

pub fn fuzz_law_with(
    id: &str,
    trials: usize,
    seed: u64,
    ops: Ops,
    cfg: &PrecisionConfig,
) -> Result<LawReport> {
    let law = lookup(id)?;
    Ok(fuzz(&law, trials, seed, ops, cfg))
}

/// Fuzzes every registered law. Laws run on worker threads; the output
/// order is the registry order regardless.
pub fn run_suite(seed: u64, trials: usize, cfg: &PrecisionConfig) -> Vec<LawReport> {
    run_laws(&all_laws(), seed, trials, cfg)
}

pub fn run_laws(laws: &[Law], seed: u64, trials: usize, cfg: &PrecisionConfig) -> Vec<LawReport> {
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(laws.len().max(1));
    let mut slots: Vec<Option<LawReport>> = vec![None; laws.len()];
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    laws.iter()
                        .enumerate()
                        .filter(|(i, _)| i % workers == w)
                        .map(|(i, l)| (i, fuzz(l, trials, seed, Ops::default(), cfg)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("law worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots.into_iter().flatten().collect()
}

/// Machine-readable dump of a suite run.
pub fn reports_to_json(reports: &[LawReport]) -> String {
    #[derive(Serialize)]
    struct Dump<'a> {
        passed: bool,
        laws: &'a [LawReport],
    }
    let dump = Dump {
        passed: reports.iter().all(LawReport::passed),
        laws: reports,
    };
    serde_json::to_string_pretty(&dump).expect("reports serialize")
}

/// Convenience for building bindings in code.
pub fn bindings<'a>(pairs: impl IntoIterator<Item = (&'a str, CxE)>) -> Bindings {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank0::TieBreak;

    fn c(s: &str) -> CxE {
        s.parse().unwrap()
    }

    fn cfg() -> PrecisionConfig {
        PrecisionConfig::default()
    }

    #[test]
    fn worked_examples() {
        let b = bindings([("a1", c("1")), ("r", c("2")), ("k", c("5"))]);
        assert!(check_law("14.1", &b, &cfg()).unwrap().passed());
        let b = bindings([("a", c("3")), ("b", c("2"))]);
        assert!(check_law("21.3", &b, &cfg()).unwrap().passed());
        let b = bindings([
            ("a", c("1")),
            ("b", c("s(1)")),
            ("c", c("2")),
            ("d", c("5")),
        ]);
        assert!(check_law("17.3", &b, &cfg()).unwrap().passed());
    }

    #[test]
    fn rank_windows() {
        for bad in [
            "14.0@0", "14.0@3", "15.0@3", "16.0@0", "21.0@0", "99.9", "21.0@x",
        ] {
            assert!(
                matches!(lookup(bad), Err(EscherError::UnknownLaw(_))),
                "{bad}"
            );
        }
        assert_eq!(resolve("16.0").unwrap().len(), 3);
        assert_eq!(resolve("15.3").unwrap().len(), 1);
    }

    #[test]
    fn domain_violations_are_errors() {
        let b = bindings([("a", c("1")), ("b", c("2")), ("c", c("3"))]);
        assert!(matches!(
            check_law("18.1", &b, &cfg()),
            Err(EscherError::Domain(_))
        ));
    }

    #[test]
    fn special_tie_break_case() {
        let ops = |tie| Ops {
            tie,
            addition: Addition::Reduced,
        };
        let b = bindings([("a", c("s(0)")), ("b", c("0"))]);
        let first = check_law_with("21.3S", &b, ops(TieBreak::FirstOperand), &cfg()).unwrap();
        assert!(first.passed());
        let lower = check_law_with("21.3S", &b, ops(TieBreak::LowerBand), &cfg()).unwrap();
        assert!(!lower.passed());
    }

    #[test]
    fn sampling_is_deterministic() {
        let law = lookup("17.3").unwrap();
        assert_eq!(sample_bindings(&law, 9, 4), sample_bindings(&law, 9, 4));
        assert_ne!(sample_bindings(&law, 9, 4), sample_bindings(&law, 9, 5));
    }

    #[test]
    fn quick_suite_passes() {
        let reports = run_suite(42, 25, &cfg());
        assert!(reports.len() >= 30);
        for r in &reports {
            assert!(r.passed(), "{r}");
        }
    }
}
