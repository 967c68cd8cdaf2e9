//! Symbol-level simulation of the averaging collusion attack on binary codes.
//!
//! Under orthonormal spreading the detector's statistic at coordinate `i` is
//! the fraction of colluders whose bit there is 1, so it is computed here as
//! an exact rational. It equals 1 or 0 exactly when all colluders agree, which
//! recovers the descendant set of the coalition.

use std::fmt;

use num_rational::Ratio;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::code::{trace, Code, CodeError, DescendantSet, TraceOutcome};

/// Per-coordinate statistics `T(i)` in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionVector {
    stats: Vec<Ratio<u64>>,
}

impl DetectionVector {
    /// Fails on an empty vector or a statistic outside `[0, 1]`.
    pub fn new(stats: Vec<Ratio<u64>>) -> Option<Self> {
        (!stats.is_empty() && stats.iter().all(|r| *r.numer() <= *r.denom()))
            .then_some(DetectionVector { stats })
    }

    pub fn stats(&self) -> &[Ratio<u64>] {
        &self.stats
    }
}

impl fmt::Display for DetectionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.stats.iter().map(Ratio::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn detect(code: &Code, coalition: &[usize]) -> Result<DetectionVector, CodeError> {
    if code.q() != 2 {
        return Err(CodeError::NotBinary(code.q()));
    }
    if coalition.is_empty() {
        return Err(CodeError::EmptySubset);
    }
    if let Some(&index) = coalition.iter().find(|&&i| i >= code.len()) {
        return Err(CodeError::IndexOutOfRange {
            index,
            m: code.len(),
        });
    }
    let size = coalition.len() as u64;
    let stats = (0..code.n())
        .map(|i| {
            let ones = coalition.iter().filter(|&&w| code.word(w)[i] == 1).count() as u64;
            Ratio::new(ones, size)
        })
        .collect();
    Ok(DetectionVector { stats })
}

/// `{1}` where `T(i) = 1`, `{0}` where `T(i) = 0`, `{0, 1}` otherwise.
pub fn evidence(t: &DetectionVector) -> DescendantSet {
    let sets = t
        .stats
        .iter()
        .map(|r| match (*r.numer() == 0, r.numer() == r.denom()) {
            (true, _) => vec![0],
            (_, true) => vec![1],
            _ => vec![0, 1],
        })
        .collect();
    DescendantSet::new(sets).expect("every coordinate is nonempty")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackResult {
    pub coalition: Vec<usize>,
    pub evidence: DescendantSet,
    /// `None` when the evidence has no parent set of size `<= t`, which can
    /// only happen for coalitions larger than `t`.
    pub outcome: Option<TraceOutcome>,
    /// Identified set is nonempty and inside the coalition.
    pub success: bool,
}

impl AttackResult {
    fn identified(&self) -> Option<&[usize]> {
        match &self.outcome {
            Some(TraceOutcome::Identified(ids)) => Some(ids),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "coalition": self.coalition,
            "evidence": self.evidence.to_string(),
            "outcome": match &self.outcome {
                Some(TraceOutcome::Identified(_)) => "identified",
                Some(TraceOutcome::Overflow) => "overflow",
                None => "no-parent-set",
            },
            "identified": self.identified(),
            "success": self.success,
        })
    }
}

impl fmt::Display for AttackResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "coalition={} evidence={} ",
            join(&self.coalition),
            self.evidence
        )?;
        match &self.outcome {
            Some(TraceOutcome::Identified(ids)) => write!(f, "identified={}", join(ids))?,
            Some(TraceOutcome::Overflow) => write!(f, "outcome=overflow")?,
            None => write!(f, "outcome=no-parent-set")?,
        }
        write!(f, " success={}", self.success)
    }
}

fn join(ids: &[usize]) -> String {
    let parts: Vec<String> = ids.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

/// Detection, evidence extraction and tracing for one coalition.
pub fn run_attack(code: &Code, coalition: &[usize], t: usize) -> Result<AttackResult, CodeError> {
    let mut coalition = coalition.to_vec();
    coalition.sort_unstable();
    coalition.dedup();
    let evidence = evidence(&detect(code, &coalition)?);
    let outcome = match trace(code, &evidence, t) {
        Ok(outcome) => Some(outcome),
        Err(CodeError::NoParentSet { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut result = AttackResult {
        coalition,
        evidence,
        outcome,
        success: false,
    };
    result.success = result.identified().is_some_and(|ids| {
        !ids.is_empty()
            && ids
                .iter()
                .all(|i| result.coalition.binary_search(i).is_ok())
    });
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trial {
    pub seed: u64,
    pub result: AttackResult,
}

/// A batch of random coalitions; trial `i` uses seed `seed + i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackBatch {
    pub seed: u64,
    pub t: usize,
    pub trials: Vec<Trial>,
}

impl AttackBatch {
    pub fn successes(&self) -> usize {
        self.trials.iter().filter(|t| t.result.success).count()
    }

    /// Exact success rate, `0/1` for an empty batch.
    pub fn success_rate(&self) -> Ratio<usize> {
        if self.trials.is_empty() {
            return Ratio::new(0, 1);
        }
        Ratio::new(self.successes(), self.trials.len())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "t": self.t,
            "trials": self.trials.iter().map(|t| {
                let mut v = t.result.to_json();
                v["seed"] = json!(t.seed);
                v
            }).collect::<Vec<_>>(),
            "successes": self.successes(),
            "total": self.trials.len(),
        })
    }
}

impl fmt::Display for AttackBatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, trial) in self.trials.iter().enumerate() {
            writeln!(f, "trial={i} seed={} {}", trial.seed, trial.result)?;
        }
        let rate = self.success_rate();
        writeln!(
            f,
            "success={}/{} approx={:.6}",
            self.successes(),
            self.trials.len(),
            *rate.numer() as f64 / *rate.denom() as f64
        )
    }
}

/// A coalition of uniform size in `1..=t` (capped at `M`), members uniform.
pub fn random_coalition(m: usize, t: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = rng.gen_range(1..=t.min(m));
    let mut members = sample(&mut rng, m, size).into_vec();
    members.sort_unstable();
    members
}

pub fn run_trials(
    code: &Code,
    t: usize,
    trials: usize,
    seed: u64,
) -> Result<AttackBatch, CodeError> {
    if t == 0 {
        return Err(CodeError::ZeroT);
    }
    let trials = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let seed = seed.wrapping_add(i);
            let coalition = random_coalition(code.len(), t, seed);
            run_attack(code, &coalition, t).map(|result| Trial { seed, result })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AttackBatch { seed, t, trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::desc;

    fn binary(words: &[&[u32]]) -> Code {
        Code::new(
            words[0].len(),
            2,
            words.iter().map(|w| w.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn detection_statistics() {
        let c = binary(&[&[1, 1, 0], &[1, 0, 1], &[1, 1, 1]]);
        let t = detect(&c, &[0, 1, 2]).unwrap();
        assert_eq!(
            t.stats(),
            &[Ratio::new(1, 1), Ratio::new(2, 3), Ratio::new(2, 3)]
        );
        // codewords are stored sorted: index 1 is 110
        let t = detect(&c, &[1]).unwrap();
        assert_eq!(t.stats()[2], Ratio::new(0, 1));
        assert_eq!(detect(&c, &[]), Err(CodeError::EmptySubset));
        let q3 = Code::new(2, 3, vec![vec![0, 2]]).unwrap();
        assert_eq!(detect(&q3, &[0]), Err(CodeError::NotBinary(3)));
    }

    #[test]
    fn evidence_trichotomy() {
        let t = DetectionVector::new(vec![Ratio::new(1, 1), Ratio::new(0, 1), Ratio::new(2, 3)])
            .unwrap();
        assert_eq!(evidence(&t).to_string(), "1;0;0,1");
        assert!(DetectionVector::new(vec![Ratio::new(3, 2)]).is_none());
    }

    #[test]
    fn evidence_matches_descendant_set() {
        let c = binary(&[&[0, 0, 1, 1], &[0, 1, 0, 1], &[1, 1, 0, 0], &[1, 0, 1, 0]]);
        for mask in 1u32..16 {
            let coalition: Vec<usize> = (0..4).filter(|i| mask >> i & 1 == 1).collect();
            assert_eq!(
                evidence(&detect(&c, &coalition).unwrap()),
                desc(&c, &coalition).unwrap()
            );
        }
    }

    #[test]
    fn single_colluder_is_found() {
        let c = binary(&[&[0, 1], &[1, 0]]);
        let r = run_attack(&c, &[1], 2).unwrap();
        assert_eq!(r.outcome, Some(TraceOutcome::Identified(vec![1])));
        assert!(r.success);
    }

    #[test]
    fn batches_are_reproducible() {
        let c = binary(&[&[0, 1, 0, 1], &[1, 0, 0, 1], &[0, 1, 1, 0], &[1, 0, 1, 0]]);
        let a = run_trials(&c, 2, 20, 7).unwrap();
        let b = run_trials(&c, 2, 20, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trials[3].result.coalition, random_coalition(4, 2, 10));
    }
}
