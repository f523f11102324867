//! The random-permutation heuristic: closed-form failure probabilities,
//! sampling over permutation groups acting on `V_N`, and limit scans.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::Poly;
use crate::engine::CoeffTuple;
use crate::par::{map_indexed, Jobs};

/// Largest `q^N` the sampler accepts.
pub const MAX_DEGREE: usize = 16;

/// Trials per random stream; fixed so results do not depend on the job count.
const CHUNK: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeuristicError {
    #[error("q^N = {0} exceeds the supported permutation degree {MAX_DEGREE}")]
    DegreeTooLarge(u128),
    #[error("at least one trial is required")]
    NoTrials,
    #[error("unknown group family '{0}' (expected symmetric, alternating, cyclic or dihedral)")]
    UnknownFamily(String),
    #[error("unknown growth '{0}' (expected linear, constant:<c>, inverse or power:<k>)")]
    UnknownGrowth(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

/// `log p_N` and `log(-log p_N)` for the closed form
/// `p_N = (1 - q^{-(N+d) q^N})^{|G|^{n-1}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogProbability {
    pub log_p: f64,
    pub log_neg_log_p: f64,
}

impl LogProbability {
    pub fn p(&self) -> f64 {
        self.log_p.exp()
    }
}

/// `ln x` where `x = q^{-(N+d) q^N}` is the per-trial success probability.
pub fn log_model_rate(q: u64, d: usize, n_box: usize) -> f64 {
    -((n_box + d) as f64) * (q as f64).powi(n_box as i32) * (q as f64).ln()
}

/// `ln(-ln(1 - x))` from `ln x`, accurate when `x` underflows.
fn log_neg_log1m(log_x: f64) -> f64 {
    if log_x > -18.0 {
        (-(-log_x.exp()).ln_1p()).ln()
    } else {
        // -ln(1-x) = x (1 + x/2 + ...)
        log_x + log_x.exp() / 2.0
    }
}

/// The closed-form failure probability in log space; `log_group_size` is
/// `ln |G|`.
pub fn p_n_closed_form(q: u64, d: usize, n: usize, n_box: usize, log_group_size: f64) -> LogProbability {
    assert!(n >= 2, "n >= 2");
    let log_trials = (n - 1) as f64 * log_group_size;
    let log_neg_log_p = log_trials + log_neg_log1m(log_model_rate(q, d, n_box));
    LogProbability { log_p: -log_neg_log_p.exp(), log_neg_log_p }
}

/// How `c_N` grows in `|G_N| = c_N (q^{(N+d) q^N})^{1/(n-1)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Growth {
    /// `c_N = N`
    Linear,
    /// `c_N = c`
    Constant(f64),
    /// `c_N = 1/N`
    Inverse,
    /// `c_N = N^k`
    Power(f64),
}

impl Growth {
    pub fn c(&self, n_box: usize) -> f64 {
        let n = n_box as f64;
        match *self {
            Growth::Linear => n,
            Growth::Constant(c) => c,
            Growth::Inverse => 1.0 / n,
            Growth::Power(k) => n.powf(k),
        }
    }

    fn diverges(&self) -> bool {
        matches!(self, Growth::Linear) || matches!(self, Growth::Power(k) if *k > 0.0)
    }
}

impl FromStr for Growth {
    type Err = HeuristicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HeuristicError::UnknownGrowth(s.to_string());
        match s.split_once(':') {
            None if s == "linear" => Ok(Growth::Linear),
            None if s == "inverse" => Ok(Growth::Inverse),
            Some(("constant", c)) => c.parse().ok().filter(|c: &f64| *c > 0.0).map(Growth::Constant).ok_or_else(bad),
            Some(("power", k)) => k.parse().map(Growth::Power).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub n_box: usize,
    pub log_group_size: f64,
    pub log_p: f64,
    pub log_neg_log_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitScan {
    pub rows: Vec<ScanRow>,
    pub strictly_decreasing: bool,
}

impl LimitScan {
    /// For diverging `c_N` the sequence must fall strictly; other growths
    /// are reported without a check.
    pub fn check(&self, growth: Growth) -> bool {
        !growth.diverges() || self.strictly_decreasing
    }
}

/// Evaluates `log p_N` for `N` in `range` along the growth `c_N`.
pub fn limit_scan(q: u64, d: usize, n: usize, growth: Growth, range: std::ops::RangeInclusive<usize>) -> LimitScan {
    let rows: Vec<ScanRow> = range
        .map(|n_box| {
            let log_group_size =
                growth.c(n_box).ln() + ((n_box + d) as f64) * (q as f64).powi(n_box as i32) * (q as f64).ln() / (n - 1) as f64;
            let lp = p_n_closed_form(q, d, n, n_box, log_group_size);
            ScanRow { n_box, log_group_size, log_p: lp.log_p, log_neg_log_p: lp.log_neg_log_p }
        })
        .collect();
    let strictly_decreasing = rows.windows(2).all(|w| w[1].log_neg_log_p > w[0].log_neg_log_p);
    LimitScan { rows, strictly_decreasing }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Symmetric,
    Alternating,
    Cyclic,
    Dihedral,
}

impl FromStr for FamilyKind {
    type Err = HeuristicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "symmetric" => Ok(FamilyKind::Symmetric),
            "alternating" => Ok(FamilyKind::Alternating),
            "cyclic" => Ok(FamilyKind::Cyclic),
            "dihedral" => Ok(FamilyKind::Dihedral),
            _ => Err(HeuristicError::UnknownFamily(s.to_string())),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Symmetric => "symmetric",
            FamilyKind::Alternating => "alternating",
            FamilyKind::Cyclic => "cyclic",
            FamilyKind::Dihedral => "dihedral",
        })
    }
}

/// A permutation group on `{0..m-1}`, the canonical order of `V_N`. Cyclic
/// and dihedral groups act by `l -> s + l` and `l -> s - l` mod `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupFamily {
    pub kind: FamilyKind,
    pub degree: usize,
}

type Perm = Vec<u8>;

impl GroupFamily {
    pub fn new(kind: FamilyKind, degree: usize) -> Self {
        Self { kind, degree }
    }

    /// `|G|`: `m!`, `m!/2`, `m` or `2m` (smaller for `m <= 2`, where the
    /// reflections coincide with rotations or `A_m` is trivial).
    pub fn order(&self) -> u128 {
        let m = self.degree as u128;
        let fact = (1..=m).product::<u128>();
        match self.kind {
            FamilyKind::Symmetric => fact,
            FamilyKind::Alternating => (fact / 2).max(1),
            FamilyKind::Cyclic => m,
            FamilyKind::Dihedral if m <= 2 => m,
            FamilyKind::Dihedral => 2 * m,
        }
    }

    /// Every element, sorted.
    pub fn elements(&self) -> Vec<Perm> {
        let m = self.degree;
        let mut out: Vec<Perm> = match self.kind {
            FamilyKind::Symmetric | FamilyKind::Alternating => {
                let mut all = Vec::new();
                permutations((0..m as u8).collect(), 0, &mut all);
                if self.kind == FamilyKind::Alternating {
                    all.retain(|p| is_even(p));
                }
                all
            }
            FamilyKind::Cyclic => (0..m).map(|s| rotation(m, s, false)).collect(),
            FamilyKind::Dihedral => (0..m).flat_map(|s| [rotation(m, s, false), rotation(m, s, true)]).collect(),
        };
        out.sort();
        out.dedup();
        out
    }

    /// A uniformly random element.
    pub fn sample(&self, rng: &mut impl Rng) -> Perm {
        let m = self.degree;
        match self.kind {
            FamilyKind::Symmetric | FamilyKind::Alternating => {
                let mut p: Perm = (0..m as u8).collect();
                p.shuffle(rng);
                if self.kind == FamilyKind::Alternating && m >= 2 && !is_even(&p) {
                    p.swap(0, 1);
                }
                p
            }
            FamilyKind::Cyclic => rotation(m, rng.gen_range(0..m), false),
            FamilyKind::Dihedral => rotation(m, rng.gen_range(0..m), rng.gen()),
        }
    }
}

fn rotation(m: usize, s: usize, reflect: bool) -> Perm {
    (0..m)
        .map(|l| if reflect { (s + m - l) % m } else { (s + l) % m } as u8)
        .collect()
}

fn permutations(mut items: Perm, k: usize, out: &mut Vec<Perm>) {
    if k == items.len() {
        out.push(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items.clone(), k + 1, out);
        items.swap(k, i);
    }
}

fn is_even(p: &[u8]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for s in 0..p.len() {
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        transpositions += len.max(1) - 1;
    }
    transpositions % 2 == 0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMode {
    /// Exhaustive when `|G|^{n-1} <= trials`, else sampling.
    Auto,
    Sample,
    Exhaustive,
}

/// Frequencies of the row sums `sum_i a_i v[X_i^{-1}(k)]` compared with the
/// uniform distribution on `V_{N+d}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Uniformity {
    pub support_size: u128,
    pub observations: u64,
    pub tv_distance: f64,
    /// `(value, count)` for every observed value, by canonical index.
    pub table: Vec<(String, u64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeuristicReport {
    pub family: GroupFamily,
    pub group_order: u128,
    pub exhaustive: bool,
    pub trials: u64,
    pub hits: u64,
    pub empirical_rate: f64,
    pub model_rate: f64,
    pub log_model_rate: f64,
    pub uniformity: Uniformity,
}

/// Precomputed products `a_i * v[l]` as dense coefficient arrays.
struct Evaluator {
    q: u64,
    m: usize,
    width: usize,
    products: Vec<Vec<Vec<u64>>>,
}

impl Evaluator {
    fn new(a: &CoeffTuple, n_box: usize, m: usize) -> Self {
        let f = a.field();
        let width = n_box + a.height();
        let products = a
            .coeffs()
            .iter()
            .map(|c| {
                (0..m as u64)
                    .map(|l| {
                        let mut dense = c.mul(&Poly::from_index(f, l)).coeffs().to_vec();
                        dense.resize(width, 0);
                        dense
                    })
                    .collect()
            })
            .collect();
        Self { q: f.q(), m, width, products }
    }

    /// Adds the row-sum indices for `X_1..X_{n-1}` (and `X_n = I`) into
    /// `freq`; returns true when every row sum vanishes.
    fn evaluate(&self, perms: &[&Perm], freq: &mut BTreeMap<u64, u64>, sums: &mut [u64]) -> bool {
        sums.iter_mut().for_each(|s| *s = 0);
        let n = self.products.len();
        for (i, prod) in self.products.iter().enumerate() {
            for (l, p) in prod.iter().enumerate() {
                let k = if i + 1 == n { l } else { perms[i][l] as usize };
                let row = &mut sums[k * self.width..(k + 1) * self.width];
                for (s, &c) in row.iter_mut().zip(p) {
                    *s += c;
                }
            }
        }
        let mut all_zero = true;
        for k in 0..self.m {
            let idx = sums[k * self.width..(k + 1) * self.width]
                .iter()
                .rev()
                .fold(0u64, |acc, &c| acc * self.q + c % self.q);
            all_zero &= idx == 0;
            *freq.entry(idx).or_insert(0) += 1;
        }
        all_zero
    }
}

#[derive(Default)]
struct Tally {
    trials: u64,
    hits: u64,
    freq: BTreeMap<u64, u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.trials += other.trials;
        self.hits += other.hits;
        for (k, v) in other.freq {
            *self.freq.entry(k).or_insert(0) += v;
        }
        self
    }
}

/// Samples (or enumerates) `X_1..X_{n-1}` from `family` with `X_n = I` and
/// counts how often `(sum a_i X_i) v = 0` for `v` listing `V_N` canonically.
pub fn monte_carlo(
    a: &CoeffTuple,
    n_box: usize,
    kind: FamilyKind,
    trials: u64,
    seed: u64,
    mode: SampleMode,
    jobs: Jobs,
) -> Result<HeuristicReport, HeuristicError> {
    if trials == 0 {
        return Err(HeuristicError::NoTrials);
    }
    let q = a.field().q();
    let m = (q as u128).checked_pow(n_box as u32).unwrap_or(u128::MAX);
    if m > MAX_DEGREE as u128 {
        return Err(HeuristicError::DegreeTooLarge(m));
    }
    let m = m as usize;
    let family = GroupFamily::new(kind, m);
    let n = a.n();
    let group_order = family.order();
    let space = group_order.checked_pow((n - 1) as u32);
    let exhaustive = match mode {
        SampleMode::Exhaustive => true,
        SampleMode::Sample => false,
        SampleMode::Auto => space.is_some_and(|s| s <= trials as u128),
    };
    let eval = Evaluator::new(a, n_box, m);

    let tally = if exhaustive {
        let space = space
            .filter(|&s| s <= u64::MAX as u128)
            .ok_or_else(|| HeuristicError::Parameter("exhaustive space too large".into()))?;
        let elems = family.elements();
        let g = elems.len();
        let per_first = (space as usize) / g;
        let parts = map_indexed(g, jobs, |first| {
            let mut t = Tally::default();
            let mut sums = vec![0u64; m * eval.width];
            for rest in 0..per_first {
                let mut chosen: Vec<&Perm> = Vec::with_capacity(n - 1);
                chosen.push(&elems[first]);
                let mut r = rest;
                let mut tail = Vec::with_capacity(n - 2);
                for _ in 1..n - 1 {
                    tail.push(r % g);
                    r /= g;
                }
                chosen.extend(tail.iter().rev().map(|&i| &elems[i]));
                t.trials += 1;
                t.hits += u64::from(eval.evaluate(&chosen, &mut t.freq, &mut sums));
            }
            t
        });
        parts.into_iter().fold(Tally::default(), Tally::merge)
    } else {
        let chunks = trials.div_ceil(CHUNK);
        let parts = map_indexed(chunks as usize, jobs, |c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = CHUNK.min(trials - c as u64 * CHUNK);
            let mut t = Tally::default();
            let mut sums = vec![0u64; m * eval.width];
            for _ in 0..count {
                let perms: Vec<Perm> = (0..n - 1).map(|_| family.sample(&mut rng)).collect();
                let refs: Vec<&Perm> = perms.iter().collect();
                t.trials += 1;
                t.hits += u64::from(eval.evaluate(&refs, &mut t.freq, &mut sums));
            }
            t
        });
        parts.into_iter().fold(Tally::default(), Tally::merge)
    };

    let log_model_rate = log_model_rate(q, a.height(), n_box);
    let support_size = (q as u128).checked_pow((n_box + a.height()) as u32).unwrap_or(u128::MAX);
    let observations: u64 = tally.freq.values().sum();
    let uniform = 1.0 / support_size as f64;
    let observed_mass: f64 = tally
        .freq
        .values()
        .map(|&c| (c as f64 / observations as f64 - uniform).abs())
        .sum();
    let unobserved = (support_size - tally.freq.len() as u128) as f64 * uniform;
    let field = a.field();
    Ok(HeuristicReport {
        family,
        group_order,
        exhaustive,
        trials: tally.trials,
        hits: tally.hits,
        empirical_rate: tally.hits as f64 / tally.trials as f64,
        model_rate: log_model_rate.exp(),
        log_model_rate,
        uniformity: Uniformity {
            support_size,
            observations,
            tv_distance: 0.5 * (observed_mass + unobserved),
            table: tally.freq.iter().map(|(&k, &v)| (Poly::from_index(field, k).to_string(), v)).collect(),
        },
    })
}
