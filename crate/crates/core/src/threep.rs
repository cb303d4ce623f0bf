//! 3-Partition: instance validation, an exact brute-force solver for small
//! instances, witness checking and a seeded yes-instance generator.

use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default upper bound on `3m` for [`solve_brute_force`].
pub const DEFAULT_SOLVER_CAP: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "code")]
pub enum Violation {
    #[error("A is empty")]
    Empty,
    #[error("|A| = {len} is not a multiple of 3")]
    SizeNotMultipleOf3 { len: usize },
    #[error("a_{index} = {value} is not strictly between B/4 and B/2")]
    ElementOutOfRange { index: usize, value: u64 },
    #[error("sum of A is {got}, expected m*B = {expected}")]
    SumMismatch { expected: u64, got: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct InvalidInstance {
    pub violations: Vec<Violation>,
}

impl fmt::Display for InvalidInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("invalid 3-partition instance: ")?;
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("3m = {size} exceeds the brute-force cap {cap}")]
    SizeLimitExceeded { size: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("no triple of integers strictly between B/4 and B/2 sums to B = {bound}")]
    InfeasibleParameters { bound: u64 },
    #[error("m must be at least 1")]
    EmptyInstance,
}

/// A validated 3-Partition instance. Element order is stable: solutions refer
/// to positions, so equal values stay distinguishable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawThreePartition")]
pub struct ThreePartitionInstance {
    #[serde(rename = "B")]
    bound: u64,
    #[serde(rename = "A")]
    values: Vec<u64>,
}

#[derive(Deserialize)]
struct RawThreePartition {
    #[serde(rename = "B")]
    bound: u64,
    #[serde(rename = "A")]
    values: Vec<u64>,
}

impl TryFrom<RawThreePartition> for ThreePartitionInstance {
    type Error = InvalidInstance;

    fn try_from(raw: RawThreePartition) -> Result<Self, Self::Error> {
        validate_instance(raw.bound, raw.values)
    }
}

impl ThreePartitionInstance {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn m(&self) -> usize {
        self.values.len() / 3
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn in_range(value: u64, bound: u64) -> bool {
    4 * value > bound && 2 * value < bound
}

pub fn validate_instance(bound: u64, values: Vec<u64>) -> Result<ThreePartitionInstance, InvalidInstance> {
    let mut violations = Vec::new();
    if values.is_empty() {
        violations.push(Violation::Empty);
    } else if !values.len().is_multiple_of(3) {
        violations.push(Violation::SizeNotMultipleOf3 { len: values.len() });
    }
    for (index, &value) in values.iter().enumerate() {
        if !in_range(value, bound) {
            violations.push(Violation::ElementOutOfRange { index, value });
        }
    }
    if !values.is_empty() && values.len().is_multiple_of(3) {
        let expected = (values.len() / 3) as u64 * bound;
        let got: u64 = values.iter().sum();
        if got != expected {
            violations.push(Violation::SumMismatch { expected, got });
        }
    }
    if violations.is_empty() {
        Ok(ThreePartitionInstance { bound, values })
    } else {
        Err(InvalidInstance { violations })
    }
}

/// A witness: `m` triples of positions into `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreePartitionSolution {
    pub triples: Vec<[usize; 3]>,
}

impl ThreePartitionSolution {
    /// Values of each triple, each triple sorted, the list sorted. Two
    /// solutions with equal value triples compare equal here even when they
    /// pick different positions among repeated values.
    pub fn value_triples(&self, inst: &ThreePartitionInstance) -> Vec<[u64; 3]> {
        let mut out: Vec<[u64; 3]> = self
            .triples
            .iter()
            .map(|t| {
                let mut vt = t.map(|i| inst.values.get(i).copied().unwrap_or(0));
                vt.sort_unstable();
                vt
            })
            .collect();
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "code")]
pub enum SolutionIssue {
    #[error("expected {expected} triples, got {got}")]
    WrongTripleCount { expected: usize, got: usize },
    #[error("triple {triple} references index {index} outside A")]
    IndexOutOfRange { triple: usize, index: usize },
    #[error("index {index} is used more than once")]
    IndexReused { index: usize },
    #[error("index {index} is not covered")]
    IndexMissing { index: usize },
    #[error("triple {triple} sums to {sum}, expected {bound}")]
    WrongSum { triple: usize, sum: u64, bound: u64 },
}

/// Every reason `sol` fails to be a 3-partition of `inst`; empty when valid.
pub fn solution_issues(inst: &ThreePartitionInstance, sol: &ThreePartitionSolution) -> Vec<SolutionIssue> {
    let mut issues = Vec::new();
    if sol.triples.len() != inst.m() {
        issues.push(SolutionIssue::WrongTripleCount { expected: inst.m(), got: sol.triples.len() });
    }
    let mut used = vec![0usize; inst.len()];
    for (t, triple) in sol.triples.iter().enumerate() {
        let mut sum = 0u64;
        let mut complete = true;
        for &index in triple {
            match inst.values.get(index) {
                Some(&value) => {
                    used[index] += 1;
                    sum += value;
                }
                None => {
                    complete = false;
                    issues.push(SolutionIssue::IndexOutOfRange { triple: t, index });
                }
            }
        }
        if complete && sum != inst.bound {
            issues.push(SolutionIssue::WrongSum { triple: t, sum, bound: inst.bound });
        }
    }
    for (index, &count) in used.iter().enumerate() {
        if count > 1 {
            issues.push(SolutionIssue::IndexReused { index });
        } else if count == 0 {
            issues.push(SolutionIssue::IndexMissing { index });
        }
    }
    issues
}

pub fn verify_solution(inst: &ThreePartitionInstance, sol: &ThreePartitionSolution) -> bool {
    solution_issues(inst, sol).is_empty()
}

/// Exact solver with the default cap. See [`solve_brute_force_capped`].
pub fn solve_brute_force(inst: &ThreePartitionInstance) -> Result<Option<ThreePartitionSolution>, SolveError> {
    solve_brute_force_capped(inst, DEFAULT_SOLVER_CAP)
}

/// Returns the lexicographically first solution, comparing solutions as lists
/// of sorted index triples ordered by their smallest index.
///
/// The smallest unused index always opens the next triple; the other two
/// indices are tried in increasing order. Failed used-index masks are memoized.
pub fn solve_brute_force_capped(
    inst: &ThreePartitionInstance,
    cap: usize,
) -> Result<Option<ThreePartitionSolution>, SolveError> {
    let size = inst.len();
    if size > cap || size > 64 {
        return Err(SolveError::SizeLimitExceeded { size, cap: cap.min(64) });
    }
    let mut search = Search { values: &inst.values, bound: inst.bound, failed: HashSet::new(), chosen: Vec::new() };
    Ok(search.run(0).then_some(ThreePartitionSolution { triples: search.chosen }))
}

struct Search<'a> {
    values: &'a [u64],
    bound: u64,
    failed: HashSet<u64>,
    chosen: Vec<[usize; 3]>,
}

impl Search<'_> {
    fn run(&mut self, used: u64) -> bool {
        let n = self.values.len();
        let Some(i) = (0..n).find(|&i| used & (1 << i) == 0) else {
            return true;
        };
        if self.failed.contains(&used) {
            return false;
        }
        let free = |x: usize| used & (1 << x) == 0;
        for j in (i + 1..n).filter(|&j| free(j)) {
            let partial = self.values[i] + self.values[j];
            if partial >= self.bound {
                continue;
            }
            for k in (j + 1..n).filter(|&k| free(k)) {
                if partial + self.values[k] != self.bound {
                    continue;
                }
                self.chosen.push([i, j, k]);
                if self.run(used | 1 << i | 1 << j | 1 << k) {
                    return true;
                }
                self.chosen.pop();
            }
        }
        self.failed.insert(used);
        false
    }
}

/// All `x <= y <= z` with `B/4 < x, y, z < B/2` and `x + y + z = B`.
pub fn legal_value_triples(bound: u64) -> Vec<[u64; 3]> {
    let lo = bound / 4 + 1;
    let mut out = Vec::new();
    for x in lo..bound {
        if !in_range(x, bound) {
            continue;
        }
        for y in x..bound {
            if x + y >= bound {
                break;
            }
            let z = bound - x - y;
            if z >= y && in_range(y, bound) && in_range(z, bound) {
                out.push([x, y, z]);
            }
        }
    }
    out
}

/// Plants `m` random legal triples, shuffles `A` with a seeded RNG and
/// returns the instance together with the planted solution.
pub fn generate_yes_instance(
    m: usize,
    bound: u64,
    seed: u64,
) -> Result<(ThreePartitionInstance, ThreePartitionSolution), GenerateError> {
    if m == 0 {
        return Err(GenerateError::EmptyInstance);
    }
    let legal = legal_value_triples(bound);
    if legal.is_empty() {
        return Err(GenerateError::InfeasibleParameters { bound });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let flat: Vec<u64> = (0..m).flat_map(|_| legal[rng.gen_range(0..legal.len())]).collect();
    let mut slots: Vec<usize> = (0..3 * m).collect();
    slots.shuffle(&mut rng);
    let mut values = vec![0u64; 3 * m];
    for (p, &slot) in slots.iter().enumerate() {
        values[slot] = flat[p];
    }
    let mut triples: Vec<[usize; 3]> = slots
        .chunks(3)
        .map(|c| {
            let mut t = [c[0], c[1], c[2]];
            t.sort_unstable();
            t
        })
        .collect();
    triples.sort_unstable();
    let inst = validate_instance(bound, values).expect("planted triples are legal");
    Ok((inst, ThreePartitionSolution { triples }))
}
