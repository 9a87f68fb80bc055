//! Ground truth by direct computation modulo p, and the differential driver
//! that compares every criterion against it.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::criterion::{criterion_for_2, criterion_for_l, Classifier};
use crate::error::{Error, Result};
use crate::modp::{pow_mod, residue, PrimeContext};

/// Ind_γ(D) mod l from D^((p-1)/l) = α^j.
pub fn ind_class_oracle(ctx: &PrimeContext, d: i64) -> Result<u64> {
    let p = ctx.p();
    let r = residue(d, p);
    if r == 0 {
        return Err(Error::invalid(format!("D = {d} is not coprime to p = {p}")));
    }
    ctx.match_alpha_power(pow_mod(r, (p - 1) / ctx.l(), p))
        .ok_or_else(|| Error::internal(format!("D^((p-1)/l) is not a power of α for D = {d}")))
}

/// Which check produced a mismatch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Classify,
    CriterionForL,
    CriterionFor2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub kind: CheckKind,
    pub l: u64,
    pub p: u64,
    pub d: i64,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DifferentialReport {
    pub contexts: usize,
    pub classify_pass: usize,
    pub classify_fail: usize,
    pub criterion_l_pass: usize,
    pub criterion_l_fail: usize,
    pub criterion_2_pass: usize,
    pub criterion_2_fail: usize,
    pub first_failure: Option<Failure>,
}

impl DifferentialReport {
    pub fn all_pass(&self) -> bool {
        self.classify_fail == 0 && self.criterion_l_fail == 0 && self.criterion_2_fail == 0
    }

    fn merge(&mut self, other: DifferentialReport) {
        self.contexts += other.contexts;
        self.classify_pass += other.classify_pass;
        self.classify_fail += other.classify_fail;
        self.criterion_l_pass += other.criterion_l_pass;
        self.criterion_l_fail += other.criterion_l_fail;
        self.criterion_2_pass += other.criterion_2_pass;
        self.criterion_2_fail += other.criterion_2_fail;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
    }

    fn fail(&mut self, failure: Failure) {
        if self.first_failure.is_none() {
            self.first_failure = Some(failure);
        }
    }
}

fn run_context(l: u64, p: u64, d_range: &RangeInclusive<i64>, seed: u64) -> DifferentialReport {
    let mut report = DifferentialReport {
        contexts: 1,
        ..Default::default()
    };
    let failure = |kind, d, detail: String| Failure { kind, l, p, d, detail };
    let ctx = match PrimeContext::new(l, p) {
        Ok(ctx) => ctx,
        Err(e) => {
            report.classify_fail += 1;
            report.fail(failure(CheckKind::Classify, 0, e.to_string()));
            return report;
        }
    };
    match Classifier::new(&ctx, seed) {
        Ok(classifier) => {
            for d in d_range.clone() {
                if d == 0 || residue(d, l) == 0 || residue(d, p) == 0 {
                    continue;
                }
                let outcome = classifier
                    .classify(d)
                    .and_then(|c| Ok((c.ind_class, ind_class_oracle(&ctx, d)?)));
                match outcome {
                    Ok((Some(got), want)) if got == want => report.classify_pass += 1,
                    Ok((got, want)) => {
                        report.classify_fail += 1;
                        report.fail(failure(
                            CheckKind::Classify,
                            d,
                            format!("classified {got:?}, oracle {want}"),
                        ));
                    }
                    Err(e) => {
                        report.classify_fail += 1;
                        report.fail(failure(CheckKind::Classify, d, e.to_string()));
                    }
                }
            }
        }
        Err(e) => {
            report.classify_fail += 1;
            report.fail(failure(CheckKind::Classify, 0, e.to_string()));
        }
    }
    match criterion_for_l(&ctx) {
        Ok(r) if r.agrees => report.criterion_l_pass += 1,
        Ok(r) => {
            report.criterion_l_fail += 1;
            report.fail(failure(CheckKind::CriterionForL, l as i64, format!("{r:?}")));
        }
        Err(e) => {
            report.criterion_l_fail += 1;
            report.fail(failure(CheckKind::CriterionForL, l as i64, e.to_string()));
        }
    }
    match criterion_for_2(&ctx) {
        Ok(r) if r.agrees => report.criterion_2_pass += 1,
        Ok(r) => {
            report.criterion_2_fail += 1;
            report.fail(failure(CheckKind::CriterionFor2, 2, format!("{r:?}")));
        }
        Err(e) => {
            report.criterion_2_fail += 1;
            report.fail(failure(CheckKind::CriterionFor2, 2, e.to_string()));
        }
    }
    report
}

/// Compares the classifier and the closed-form criteria for l and 2 against
/// the oracle over every (l, p) in `grid` and every D in `d_range` coprime
/// to l·p. Contexts run in parallel; the first failure is reported in grid
/// order.
pub fn differential_run(
    grid: &[(u64, u64)],
    d_range: RangeInclusive<i64>,
    seed: u64,
) -> DifferentialReport {
    let per_context: Vec<DifferentialReport> = grid
        .par_iter()
        .map(|&(l, p)| run_context(l, p, &d_range, seed))
        .collect();
    let mut total = DifferentialReport::default();
    for r in per_context {
        total.merge(r);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modp::is_prime;
    use crate::DEFAULT_SEED;

    #[test]
    fn oracle_examples() {
        let c = PrimeContext::new(3, 7).unwrap();
        assert_eq!(ind_class_oracle(&c, 2).unwrap(), 2);
        assert_eq!(ind_class_oracle(&c, 6).unwrap(), 0);
        assert!(ind_class_oracle(&c, 14).is_err());
        let c = PrimeContext::new(5, 31).unwrap();
        assert_eq!(ind_class_oracle(&c, 2).unwrap(), 4);
    }

    #[test]
    fn oracle_matches_index_table() {
        for (l, p) in [(3, 103), (5, 151), (11, 199)] {
            let c = PrimeContext::new(l, p).unwrap();
            for d in 1..p as i64 {
                assert_eq!(ind_class_oracle(&c, d).unwrap(), c.index(d).unwrap() % l);
            }
        }
    }

    #[test]
    fn oracle_is_multiplicative() {
        let c = PrimeContext::new(7, 211).unwrap();
        for a in 1..60i64 {
            for b in 1..60i64 {
                let lhs = ind_class_oracle(&c, a * b).unwrap();
                let rhs = (ind_class_oracle(&c, a).unwrap() + ind_class_oracle(&c, b).unwrap()) % 7;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn differential_examples() {
        let r = differential_run(&[(3, 7)], 2..=10, DEFAULT_SEED);
        assert!(r.all_pass());
        // D ∈ {2, 4, 5, 8, 10}
        assert_eq!(r.classify_pass, 5);

        let grid: Vec<(u64, u64)> = (7..200).filter(|&p| p % 3 == 1 && is_prime(p)).map(|p| (3, p)).collect();
        let r = differential_run(&grid, 2..=30, DEFAULT_SEED);
        assert!(r.all_pass(), "{:?}", r.first_failure);
        assert_eq!(r.contexts, grid.len());

        assert_eq!(differential_run(&[], 2..=10, DEFAULT_SEED), DifferentialReport::default());
    }

    #[test]
    fn differential_reports_bad_context() {
        let r = differential_run(&[(3, 11)], 2..=5, DEFAULT_SEED);
        assert!(!r.all_pass());
        assert!(r.first_failure.is_some());
    }
}
