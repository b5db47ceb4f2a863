//! Seeded law suites over a described space, and their line-oriented
//! reports.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use convex_core::giry::{check_algebra_laws, check_giry_monad_laws, DistOfDist};
use convex_core::kernel::{check_case, check_convex_space_laws_random, LawInputs};
use convex_core::lawvere::{check_correspondence_roundtrip, check_lawvere_functoriality, random_roundtrip_inputs};
use convex_core::random::{random_dist, random_nested, random_subset, seeded};
use convex_core::semilattice::{check_coefficient_change, check_manes_monad_laws, FinSubset};
use convex_core::{Dist, Law, LawReport, RandomElement};
use rand::RngCore;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::descriptor::{visit_space, SpaceDescriptor, SpaceVisitor};
use crate::error::CliError;

/// Environment variable read for the default seed.
pub const SEED_ENV: &str = "CONVEX_SEED";

/// Largest matrix dimension used by the Lawvere suite.
pub const LAWVERE_MAX_DIM: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Laws,
    Algebra,
    Lawvere,
    CoefficientChange,
    Roundtrip,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Laws, Suite::Algebra, Suite::Lawvere, Suite::CoefficientChange, Suite::Roundtrip];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Laws => "laws",
            Suite::Algebra => "algebra",
            Suite::Lawvere => "lawvere",
            Suite::CoefficientChange => "coefficient-change",
            Suite::Roundtrip => "roundtrip",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Suite, CliError> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| CliError::UnknownSuite(s.into()))
    }
}

/// Outcome of one suite run. `lines` are already sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub lines: Vec<String>,
    pub failures: usize,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Process exit status: 0 when every check passed, 1 otherwise.
    pub fn exit_status(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    /// The report text, one line per check.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out
    }

    fn from_lines(suite: &str, seed: u64, cases: usize, mut lines: Vec<String>) -> SuiteResult {
        lines.sort();
        let failures = lines.iter().filter(|l| l.starts_with("FAIL ")).count();
        SuiteResult { suite: suite.into(), seed, cases, lines, failures }
    }
}

/// `PASS <law> seed=<n> case=all:<count>` for every law without failures
/// and `FAIL <law> seed=<n> case=<json inputs>` for every failure.
pub fn report_lines<I: Serialize, O: PartialEq>(report: &LawReport<I, O>, seed: u64) -> Vec<String> {
    tagged_report_lines(report, seed, "")
}

/// [`report_lines`] with `tag` prefixed to every case, to tell apart
/// reports that share law names.
pub fn tagged_report_lines<I: Serialize, O: PartialEq>(report: &LawReport<I, O>, seed: u64, tag: &str) -> Vec<String> {
    let failed: BTreeSet<Law> = report.failures.iter().map(|f| f.law).collect();
    let mut lines: Vec<String> = report
        .counts
        .iter()
        .filter(|(law, _)| !failed.contains(law))
        .map(|(law, n)| format!("PASS {law} seed={seed} case={tag}all:{n}"))
        .collect();
    for f in &report.failures {
        let json = serde_json::to_string(&f.inputs).expect("inputs serialize");
        lines.push(format!("FAIL {} seed={seed} case={tag}{json}", f.law));
    }
    lines
}

fn random_nested_dists<S: RandomElement>(space: &S, rng: &mut dyn RngCore, cases: usize) -> Vec<DistOfDist<S::Elem>> {
    (0..cases)
        .map(|_| {
            let pts: Vec<S::Elem> = (0..4).map(|_| space.random_element(rng)).collect();
            random_nested(rng, 3, |r| random_dist(r, &pts, 3))
        })
        .collect()
}

struct RunSuite {
    suite: Suite,
    seed: u64,
    cases: usize,
}

impl SpaceVisitor for RunSuite {
    type Output = Result<Vec<String>, CliError>;

    fn visit<S>(self, space: &S) -> Self::Output
    where
        S: RandomElement,
        S::Elem: Serialize + DeserializeOwned,
    {
        let mut rng = seeded(self.seed);
        let seed = self.seed;
        Ok(match self.suite {
            Suite::Laws => report_lines(&check_convex_space_laws_random(space, &mut rng, self.cases)?, seed),
            Suite::Algebra => {
                let nested = random_nested_dists(space, &mut rng, self.cases);
                report_lines(&check_algebra_laws(space, &nested)?, seed)
            }
            Suite::Lawvere => {
                report_lines(&check_lawvere_functoriality(space, LAWVERE_MAX_DIM, self.cases, &mut rng)?, seed)
            }
            Suite::CoefficientChange => {
                let nested = random_nested_dists(space, &mut rng, self.cases);
                report_lines(&check_coefficient_change(&nested), seed)
            }
            Suite::Roundtrip => {
                let (triples, dists) = random_roundtrip_inputs(space, &mut rng, self.cases);
                report_lines(&check_correspondence_roundtrip(space, &triples, &dists)?, seed)
            }
        })
    }
}

/// Runs a suite; deterministic in `(suite, descriptor, seed, cases)`.
pub fn run_suite(
    suite: Suite,
    desc: &SpaceDescriptor,
    path: &str,
    seed: u64,
    cases: usize,
) -> Result<SuiteResult, CliError> {
    let lines = visit_space(desc, path, RunSuite { suite, seed, cases })??;
    Ok(SuiteResult::from_lines(suite.name(), seed, cases, lines))
}

/// Giry and Manes monad laws plus the support morphism on random nested
/// data over `carrier`.
pub fn run_monad_suite(carrier: &[String], seed: u64, cases: usize) -> Result<SuiteResult, CliError> {
    if carrier.is_empty() {
        return Err(CliError::Invalid("monad suite needs a nonempty carrier".into()));
    }
    let mut rng = seeded(seed);
    let giry: Vec<Dist<DistOfDist<String>>> = (0..cases)
        .map(|_| random_nested(&mut rng, 3, |r| random_nested(r, 3, |r2| random_dist(r2, carrier, carrier.len()))))
        .collect();
    let subsets = |rng: &mut dyn RngCore| FinSubset::new(random_subset(rng, carrier, carrier.len())).expect("nonempty");
    let manes: Vec<FinSubset<FinSubset<FinSubset<String>>>> = (0..cases)
        .map(|_| {
            let level2: Vec<FinSubset<FinSubset<String>>> = (0..3)
                .map(|_| {
                    let level1: Vec<FinSubset<String>> = (0..3).map(|_| subsets(&mut rng)).collect();
                    FinSubset::new(random_subset(&mut rng, &level1, 3)).expect("nonempty")
                })
                .collect();
            FinSubset::new(random_subset(&mut rng, &level2, 3)).expect("nonempty")
        })
        .collect();
    let nested: Vec<DistOfDist<String>> =
        (0..cases).map(|_| random_nested(&mut rng, 3, |r| random_dist(r, carrier, carrier.len()))).collect();

    let mut lines = tagged_report_lines(&check_giry_monad_laws(&giry), seed, "giry:");
    lines.extend(tagged_report_lines(&check_manes_monad_laws(&manes), seed, "manes:"));
    lines.extend(report_lines(&check_coefficient_change(&nested), seed));
    Ok(SuiteResult::from_lines("monad", seed, cases, lines))
}

/// Parses one report line into its law name and serialized case.
pub fn parse_report_line(line: &str) -> Result<(bool, Law, u64, String), CliError> {
    let bad = || CliError::Invalid(format!("not a report line: {line}"));
    let mut parts = line.splitn(4, ' ');
    let status = parts.next().ok_or_else(bad)?;
    let law: Law = parts.next().ok_or_else(bad)?.parse()?;
    let seed = parts
        .next()
        .and_then(|s| s.strip_prefix("seed="))
        .and_then(|s| s.parse().ok())
        .ok_or_else(bad)?;
    let case = parts.next().and_then(|s| s.strip_prefix("case=")).ok_or_else(bad)?;
    let passed = match status {
        "PASS" => true,
        "FAIL" => false,
        _ => return Err(bad()),
    };
    Ok((passed, law, seed, case.to_string()))
}

struct Replay {
    law: Law,
    case: String,
    seed: u64,
}

impl SpaceVisitor for Replay {
    type Output = Result<String, CliError>;

    fn visit<S>(self, space: &S) -> Self::Output
    where
        S: RandomElement,
        S::Elem: Serialize + DeserializeOwned,
    {
        let json_err = |e: serde_json::Error| CliError::Invalid(format!("case does not parse: {e}"));
        let law = self.law;
        let mut report = LawReport::<serde_json::Value, String>::new();
        match law {
            Law::UnitLaw
            | Law::UnitOne
            | Law::Idempotency
            | Law::ParametricCommutativity
            | Law::DeformedAssociativity
            | Law::NaryBracketing => {
                let inputs: LawInputs<S::Elem> = serde_json::from_str(&self.case).map_err(json_err)?;
                let outcome = check_case(space, law, &inputs)?;
                let (lhs, rhs) = match outcome {
                    Some(f) => (format!("{:?}", f.lhs), format!("{:?}", f.rhs)),
                    None => (String::new(), String::new()),
                };
                report.record(law, || serde_json::to_value(&inputs).expect("serializes"), lhs, rhs);
            }
            Law::AlgebraUnit | Law::AlgebraAssociativity => {
                let dd: DistOfDist<S::Elem> = serde_json::from_str(&self.case).map_err(json_err)?;
                let r = check_algebra_laws(space, std::slice::from_ref(&dd))?;
                for f in r.failures.iter().filter(|f| f.law == law) {
                    report.record(law, || serde_json::to_value(&f.inputs).expect("serializes"), format!("{:?}", f.lhs), format!("{:?}", f.rhs));
                }
                if report.checked() == 0 {
                    report.record(law, || serde_json::Value::Null, String::new(), String::new());
                }
            }
            Law::CoefficientChangeUnit | Law::CoefficientChangeMultiplication => {
                let dd: DistOfDist<S::Elem> = serde_json::from_str(&self.case).map_err(json_err)?;
                let r = check_coefficient_change(std::slice::from_ref(&dd));
                for f in r.failures.iter().filter(|f| f.law == law) {
                    report.record(law, || serde_json::to_value(&f.inputs).expect("serializes"), format!("{:?}", f.lhs), format!("{:?}", f.rhs));
                }
                if report.checked() == 0 {
                    report.record(law, || serde_json::Value::Null, String::new(), String::new());
                }
            }
            other => return Err(CliError::Invalid(format!("replay is not available for {other}"))),
        }
        let status = if report.passed() { "PASS" } else { "FAIL" };
        Ok(format!("{status} {law} seed={} case={}", self.seed, self.case))
    }
}

/// Re-evaluates one serialized case against the named law and returns the
/// resulting report line.
pub fn replay(desc: &SpaceDescriptor, path: &str, line: &str) -> Result<String, CliError> {
    let (_, law, seed, case) = parse_report_line(line)?;
    visit_space(desc, path, Replay { law, case, seed })?
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!("nope".parse::<Suite>(), Err(CliError::UnknownSuite(_))));
    }

    #[test]
    fn report_line_parsing() {
        let (passed, law, seed, case) =
            parse_report_line("FAIL deformed-associativity seed=7 case={\"coeffs\":[]}").unwrap();
        assert!(!passed);
        assert_eq!(law, Law::DeformedAssociativity);
        assert_eq!(seed, 7);
        assert_eq!(case, "{\"coeffs\":[]}");
        assert!(parse_report_line("MAYBE unit-law seed=1 case=x").is_err());
    }

    #[test]
    fn vector_laws_pass_and_are_deterministic() {
        let d = SpaceDescriptor::Vector { dim: 2 };
        let a = run_suite(Suite::Laws, &d, "-", 7, 30).unwrap();
        let b = run_suite(Suite::Laws, &d, "-", 7, 30).unwrap();
        assert!(a.passed());
        assert_eq!(a.render(), b.render());
    }
}
