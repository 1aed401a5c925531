//! Candidate fields for torsion growth, and the scan that checks the growth theorems against
//! brute-force torsion computations.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::CorpusEntry;
use crate::curve::{bad_primes, Curve};
use crate::divpoly::{quadratic_list, TorsionStructure};
use crate::exact::{int_serde, SquarefreeInt};
use crate::growth::{context, gt_table_allowed, squarefree_range, GrowthError, GrowthRecord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveResult {
    pub curve: String,
    #[serde(with = "int_serde::seq")]
    pub coarse_primes: Vec<BigInt>,
    #[serde(with = "int_serde::seq")]
    pub sharp_primes: Vec<BigInt>,
    pub bound: u64,
    pub candidate_d: Vec<SquarefreeInt>,
}

/// `({2,3,5,7} + bad primes, {3} + bad primes)`, both ascending.
pub fn candidate_primes(curve: &Curve) -> (Vec<BigInt>, Vec<BigInt>) {
    let bad: Vec<BigInt> = bad_primes(curve).into_iter().map(|r| r.prime).collect();
    let mut coarse: Vec<BigInt> = [2, 3, 5, 7].into_iter().map(BigInt::from).chain(bad.iter().cloned()).collect();
    let mut sharp: Vec<BigInt> = std::iter::once(BigInt::from(3)).chain(bad).collect();
    for v in [&mut coarse, &mut sharp] {
        v.sort();
        v.dedup();
    }
    (coarse, sharp)
}

/// Square-free `d` with `|d| <= bound` built from `primes`, both signs, without `1`.
/// Sorted by `|d|`, negative first.
pub fn fields_supported_on(primes: &[BigInt], bound: u64) -> Vec<SquarefreeInt> {
    let bound = BigInt::from(bound);
    let mut products = vec![BigInt::from(1)];
    for p in primes {
        let more: Vec<BigInt> = products.iter().map(|m| m * p).filter(|m| m <= &bound).collect();
        products.extend(more);
    }
    products.sort();
    let mut out = Vec::new();
    for m in products {
        if m > bound {
            continue;
        }
        for d in [-m.clone(), m] {
            if let Ok(s) = SquarefreeInt::new(d) {
                out.push(s);
            }
        }
    }
    out
}

pub fn candidate_fields(curve: &Curve, bound: u64) -> Vec<SquarefreeInt> {
    fields_supported_on(&candidate_primes(curve).1, bound)
}

pub fn sieve(curve: &Curve, curve_id: &str, bound: u64) -> SieveResult {
    let (coarse_primes, sharp_primes) = candidate_primes(curve);
    let candidate_d = fields_supported_on(&sharp_primes, bound);
    SieveResult { curve: curve_id.to_string(), coarse_primes, sharp_primes, bound, candidate_d }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanParameters {
    pub d_bound: u64,
    pub curves: usize,
    pub pairs: usize,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub record: GrowthRecord,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremResult {
    pub name: String,
    /// Pairs `(curve, d)` satisfying the hypotheses.
    pub checked: usize,
    pub violations: Vec<Violation>,
    /// Pairs outside the claim by an exemption written into it (the prime 3 for the
    /// divisibility theorem).
    #[serde(default)]
    pub exceptions: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndeterminateEntry {
    pub curve: String,
    pub d: Option<SquarefreeInt>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub parameters: ScanParameters,
    pub theorems: Vec<TheoremResult>,
    /// Every pair with growth.
    pub records: Vec<GrowthRecord>,
    pub indeterminate: Vec<IndeterminateEntry>,
}

impl VerificationReport {
    pub fn violation_count(&self) -> usize {
        self.theorems.iter().map(|t| t.violations.len()).sum()
    }

    pub fn theorem(&self, name: &str) -> Option<&TheoremResult> {
        self.theorems.iter().find(|t| t.name == name)
    }

    /// 0 clean, 1 counterexample, 3 indeterminate.
    pub fn exit_code(&self) -> i32 {
        if self.violation_count() > 0 {
            1
        } else if !self.indeterminate.is_empty() {
            3
        } else {
            0
        }
    }

    /// The report with timing zeroed, for comparisons.
    pub fn without_timing(&self) -> VerificationReport {
        let mut r = self.clone();
        r.parameters.elapsed_ms = 0;
        r
    }
}

pub const THEOREM_NAMES: [&str; 10] = [
    "growth_table",
    "prime_support_coarse",
    "p_divides_d_implies_bad_or_3",
    "two_divides_d_implies_bad_at_2",
    "ramified_5_7_implies_bad",
    "odd_new_torsion_additive",
    "c1_to_c9_bad_at_3",
    "new_3_torsion_good_at_3",
    "c16_bad_at_2",
    "sieve_completeness",
];

/// Outcome of one theorem on one record: not applicable, holds, exempt, or violated.
enum Verdict {
    NotApplicable,
    Holds,
    Exempt(String),
    Fails(String),
}

fn divides(p: &BigInt, d: &SquarefreeInt) -> bool {
    (d.value() % p).is_zero()
}

fn d_primes(d: &SquarefreeInt) -> Vec<BigInt> {
    d.ramified_primes().into_iter().filter(|p| divides(p, d)).collect()
}

fn judge(name: &str, rec: &GrowthRecord, coarse: &[BigInt], sharp: &[BigInt]) -> Verdict {
    use Verdict::*;
    let bad = |p: &BigInt| rec.reduction_at(p).is_some_and(|r| r.is_bad());
    let grows = rec.grows();
    match name {
        "growth_table" => {
            let ok = quadratic_list().contains(&rec.t_k) && gt_table_allowed(rec.t_q, rec.t_k).unwrap_or(false);
            if ok {
                Holds
            } else {
                Fails(format!("{} -> {} is not a possible growth", rec.t_q, rec.t_k))
            }
        }
        "prime_support_coarse" | "sieve_completeness" if !grows => NotApplicable,
        "prime_support_coarse" => match d_primes(&rec.d).into_iter().find(|p| !coarse.contains(p)) {
            Some(p) => Fails(format!("{p} | d lies outside {{2,3,5,7}} and the bad primes")),
            None => Holds,
        },
        "sieve_completeness" => match d_primes(&rec.d).into_iter().find(|p| !sharp.contains(p)) {
            Some(p) => Fails(format!("{p} | d lies outside the sharp candidate primes")),
            None => Holds,
        },
        "p_divides_d_implies_bad_or_3" => {
            if !grows {
                return NotApplicable;
            }
            let good: Vec<BigInt> = d_primes(&rec.d).into_iter().filter(|p| !bad(p)).collect();
            if let Some(p) = good.iter().find(|p| **p != BigInt::from(3)) {
                Fails(format!("{p} | d but E has good reduction at {p}"))
            } else if !good.is_empty() {
                Exempt("3 | d with good reduction at 3".into())
            } else {
                Holds
            }
        }
        "two_divides_d_implies_bad_at_2" => {
            if !grows || !divides(&BigInt::from(2), &rec.d) {
                NotApplicable
            } else if rec.is_bad_at(2) {
                Holds
            } else {
                Fails("2 | d but E has good reduction at 2".into())
            }
        }
        "ramified_5_7_implies_bad" => {
            let ps: Vec<u64> = [5, 7].into_iter().filter(|&p| rec.ramifies(p)).collect();
            if !grows || ps.is_empty() {
                NotApplicable
            } else if let Some(p) = ps.iter().find(|&&p| !rec.is_bad_at(p)) {
                Fails(format!("{p} ramifies but E has good reduction at {p}"))
            } else {
                Holds
            }
        }
        "odd_new_torsion_additive" => {
            let ells: Vec<u32> = rec.new_prime_torsion().into_iter().filter(|&l| l >= 3).collect();
            if ells.is_empty() {
                return NotApplicable;
            }
            for l in ells {
                for p in &rec.ramified_primes {
                    let p64 = p.to_u64().expect("small prime");
                    let applies = p64 != l as u64 || l > 3;
                    if applies && !rec.is_additive_at(p64) {
                        return Fails(format!("new {l}-torsion, {p} ramifies, reduction at {p} is not additive"));
                    }
                }
            }
            Holds
        }
        "c1_to_c9_bad_at_3" => {
            if rec.t_q != TorsionStructure::cyclic(1) || rec.t_k != TorsionStructure::cyclic(9) {
                NotApplicable
            } else if rec.is_bad_at(3) {
                Holds
            } else {
                Fails("C1 -> C9 with good reduction at 3".into())
            }
        }
        "new_3_torsion_good_at_3" => {
            let hyp = rec.new_prime_torsion().contains(&3) && rec.d_divisible_by(3) && !rec.is_bad_at(3);
            if !hyp {
                return NotApplicable;
            }
            match rec.t_q.checked_times_cyclic(3) {
                Some(t) if t == rec.t_k => Holds,
                _ => Fails(format!("{} over K is not {} x C3", rec.t_k, rec.t_q)),
            }
        }
        "c16_bad_at_2" => {
            if rec.t_k.n % 16 != 0 {
                NotApplicable
            } else if rec.is_bad_at(2) {
                Holds
            } else {
                Fails("C16 over K with good reduction at 2".into())
            }
        }
        _ => NotApplicable,
    }
}

enum PairOutcome {
    Record(GrowthRecord),
    Unknown(IndeterminateEntry),
}

fn run_pair(entry: &CorpusEntry, curve: &Curve, d: &SquarefreeInt) -> PairOutcome {
    let res = context(curve).and_then(|ctx| ctx.record_unchecked(&entry.label, d));
    match res {
        Ok(r) => PairOutcome::Record(r),
        Err(e) => PairOutcome::Unknown(IndeterminateEntry {
            curve: entry.label.clone(),
            d: Some(d.clone()),
            reason: describe_error(&e),
        }),
    }
}

fn describe_error(e: &GrowthError) -> String {
    match e {
        GrowthError::Indeterminate(_) => format!("indeterminate: {e}"),
        _ => format!("error: {e}"),
    }
}

/// Checks every theorem on every `(curve, d)` with square-free `0 < |d| <= d_bound`.
/// `jobs = None` uses the global thread pool.
pub fn verify_growth_theorems(corpus: &[CorpusEntry], d_bound: u64, jobs: Option<usize>) -> VerificationReport {
    let start = Instant::now();
    let ds = squarefree_range(d_bound);
    let curves: Vec<Curve> = corpus.iter().map(CorpusEntry::curve).collect();
    let pairs: Vec<(usize, &SquarefreeInt)> = (0..corpus.len()).flat_map(|i| ds.iter().map(move |d| (i, d))).collect();
    let work = || -> Vec<PairOutcome> { pairs.par_iter().map(|&(i, d)| run_pair(&corpus[i], &curves[i], d)).collect() };
    let outcomes = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().expect("thread pool").install(work),
        None => work(),
    };

    let primes: Vec<(Vec<BigInt>, Vec<BigInt>)> = curves.iter().map(candidate_primes).collect();
    let mut theorems: Vec<TheoremResult> = THEOREM_NAMES
        .iter()
        .map(|n| TheoremResult { name: n.to_string(), checked: 0, violations: Vec::new(), exceptions: Vec::new() })
        .collect();
    let mut records = Vec::new();
    let mut indeterminate = Vec::new();
    for ((i, _), outcome) in pairs.iter().zip(outcomes) {
        let rec = match outcome {
            PairOutcome::Record(r) => r,
            PairOutcome::Unknown(u) => {
                indeterminate.push(u);
                continue;
            }
        };
        let (coarse, sharp) = &primes[*i];
        for t in theorems.iter_mut() {
            match judge(&t.name, &rec, coarse, sharp) {
                Verdict::NotApplicable => {}
                Verdict::Holds => t.checked += 1,
                Verdict::Exempt(detail) => {
                    t.checked += 1;
                    t.exceptions.push(Violation { record: rec.clone(), detail });
                }
                Verdict::Fails(detail) => {
                    t.checked += 1;
                    t.violations.push(Violation { record: rec.clone(), detail });
                }
            }
        }
        if rec.grows() {
            records.push(rec);
        }
    }
    VerificationReport {
        parameters: ScanParameters {
            d_bound,
            curves: corpus.len(),
            pairs: pairs.len(),
            elapsed_ms: start.elapsed().as_millis() as u64,
        },
        theorems,
        records,
        indeterminate,
    }
}

/// Sign-insensitive check that every prime factor of `d` lies in `primes`.
pub fn supported_on(d: &SquarefreeInt, primes: &[BigInt]) -> bool {
    let mut n = d.value().abs();
    for p in primes {
        while (&n % p).is_zero() {
            n = n.div_floor(p);
        }
    }
    n == BigInt::from(1)
}
