//! Strategies and exact game values for the two-player hat game.
//!
//! A strategy maps the opponent's hat configuration to an index of one's own
//! stack. The match-game value `w = E[X_{f(Y)} Y_{g(X)}]` is computed two
//! ways: by direct enumeration of all `4^n` hat pairs, and through the
//! level-one Fourier matrices `F`, `G` via `w = sum_{i,j} F_ij G_ji`. Both
//! are exact and must agree bit for bit.

use std::collections::HashMap;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::exec;
use crate::hypercube::{full_mask, wht, TruthTable};
use crate::{Error, Result};

/// Direct enumeration visits `4^n` hat pairs; cap keeps it under seconds.
pub const MAX_DIRECT_DIM: u32 = 13;
/// Exhaustive strategy enumeration is feasible only up to here.
pub const MAX_BRUTE_DIM: u32 = 3;

fn check_dim(n: u32, max: u32, what: &'static str) -> Result<()> {
    if n < 1 || n > max {
        return Err(Error::DimensionOutOfRange { n, max, what });
    }
    Ok(())
}

/// A map `{-1,1}^n -> [n]`, tabulated in point-mask order with choices in
/// `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Strategy {
    n: u32,
    choice: Vec<u8>,
}

impl Strategy {
    pub fn new(n: u32, choice: Vec<u8>) -> Result<Self> {
        check_dim(n, MAX_DIRECT_DIM, "strategy")?;
        if choice.len() != 1 << n {
            return Err(Error::Domain(format!(
                "strategy for n={n} needs {} choices, got {}",
                1u64 << n,
                choice.len()
            )));
        }
        for (m, &c) in choice.iter().enumerate() {
            if c < 1 || u32::from(c) > n {
                return Err(Error::Domain(format!(
                    "choice {c} at index {m} out of range [1, {n}]"
                )));
            }
        }
        Ok(Strategy { n, choice })
    }

    pub fn constant(n: u32, j: u8) -> Result<Self> {
        Strategy::new(n, vec![j; 1 << n])
    }

    /// I.i.d. uniform choice per point from the given generator.
    pub fn random<R: Rng>(n: u32, rng: &mut R) -> Result<Self> {
        check_dim(n, MAX_DIRECT_DIM, "strategy")?;
        let choice = (0..1u32 << n)
            .map(|_| rng.gen_range(1..=n as u8))
            .collect();
        Ok(Strategy { n, choice })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn choices(&self) -> &[u8] {
        &self.choice
    }

    pub fn choose(&self, m: u32) -> u8 {
        self.choice[m as usize]
    }

    /// The strategy precomposed with point negation: `m -> s(-m)`.
    pub fn negated_argument(&self) -> Strategy {
        let full = full_mask(self.n);
        Strategy {
            n: self.n,
            choice: (0..1u32 << self.n)
                .map(|m| self.choice[(m ^ full) as usize])
                .collect(),
        }
    }

    fn level_set(&self, j: u8) -> TruthTable {
        TruthTable::from_fn(self.n, |m| (self.choice[m as usize] == j) as i64)
            .expect("level set dimensions")
    }
}

/// The `n x n` matrix `F_ij = E[Y_i 1{f(Y)=j}]`, stored as `2^n`-scaled
/// integers. Column `j` holds the level-1 coefficients of `1{f=j}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelOneMatrix {
    n: u32,
    raw: Vec<i64>, // raw[(i-1)*n + (j-1)] = 2^n * F_ij
}

impl LevelOneMatrix {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Entry `F_ij` for 1-based `i` (coordinate) and `j` (choice).
    pub fn entry(&self, i: u32, j: u32) -> Dyadic {
        debug_assert!(1 <= i && i <= self.n && 1 <= j && j <= self.n);
        Dyadic::new(
            self.raw[((i - 1) * self.n + (j - 1)) as usize] as i128,
            self.n,
        )
    }

    pub fn raw(&self) -> &[i64] {
        &self.raw
    }

    /// Builds a matrix directly from `2^n`-scaled entries; test helper.
    pub fn from_raw(n: u32, raw: Vec<i64>) -> Result<Self> {
        check_dim(n, MAX_DIRECT_DIM, "level-one matrix")?;
        if raw.len() != (n * n) as usize {
            return Err(Error::Domain(format!(
                "level-one matrix for n={n} needs {} entries",
                n * n
            )));
        }
        Ok(LevelOneMatrix { n, raw })
    }

    /// `sum_ij F_ij^2` as an exact dyadic.
    pub fn squared_norm(&self) -> Dyadic {
        let sum: i128 = self.raw.iter().map(|&r| r as i128 * r as i128).sum();
        Dyadic::new(sum, 2 * self.n)
    }
}

/// The exact value of the match game and the both-black probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameValue {
    pub w: Dyadic,
    pub u: Dyadic,
}

impl GameValue {
    /// From the integer numerator of `w = num / 4^n`.
    fn from_w_num(num: i64, n: u32) -> Self {
        let w = Dyadic::new(num as i128, 2 * n);
        let u = Dyadic::new(num as i128 + (1i128 << (2 * n)), 2 * n + 2);
        debug_assert_eq!(u, (w + Dyadic::ONE).div_pow2(2));
        GameValue { w, u }
    }
}

/// `w = E[X_{f(Y)} Y_{g(X)}]` by enumeration of all `4^n` hat pairs.
pub fn eval_direct(f: &Strategy, g: &Strategy) -> Result<GameValue> {
    if f.n != g.n {
        return Err(Error::DimensionMismatch(f.n, g.n));
    }
    let n = f.n;
    check_dim(n, MAX_DIRECT_DIM, "direct evaluation")?;
    let size = 1u64 << n;
    let fc = f.choice.as_slice();
    let gc = g.choice.as_slice();
    let sum = exec::map_reduce(
        size,
        |x| {
            let x = x as u32;
            let mut acc = 0i64;
            for y in 0..size as u32 {
                let xf = (x >> (fc[y as usize] - 1)) & 1;
                let yg = (y >> (gc[x as usize] - 1)) & 1;
                // product of signs: +1 iff the two bits agree
                acc += 1 - 2 * i64::from(xf ^ yg);
            }
            acc
        },
        0i64,
        |a, b| a + b,
    );
    Ok(GameValue::from_w_num(sum, n))
}

/// Level-one matrix of a strategy via `n` transforms of its level sets.
pub fn level_one_matrix(s: &Strategy) -> LevelOneMatrix {
    let n = s.n;
    let mut raw = vec![0i64; (n * n) as usize];
    for j in 1..=n {
        let sp = wht(&s.level_set(j as u8));
        for i in 1..=n {
            raw[((i - 1) * n + (j - 1)) as usize] = sp.raw_at(1 << (i - 1));
        }
    }
    LevelOneMatrix { n, raw }
}

/// `w = sum_{i,j} F_ij G_ji`, exact; identical to `eval_direct` on the
/// originating strategies.
pub fn eval_fourier(fm: &LevelOneMatrix, gm: &LevelOneMatrix) -> Result<GameValue> {
    if fm.n != gm.n {
        return Err(Error::DimensionMismatch(fm.n, gm.n));
    }
    let n = fm.n as usize;
    let mut sum = 0i64;
    for i in 0..n {
        for j in 0..n {
            sum += fm.raw[i * n + j] * gm.raw[j * n + i];
        }
    }
    Ok(GameValue::from_w_num(sum, fm.n))
}

/// The pointwise maximizer against the strategy behind `opponent`: at each
/// point `y` the choice `j` maximizing `sum_i y_i * M_ji` (integer scores),
/// ties broken by smallest `j`.
pub fn best_response(opponent: &LevelOneMatrix) -> Strategy {
    let n = opponent.n;
    let nn = n as usize;
    let choice = (0..1u32 << n)
        .map(|m| {
            let mut best_j = 0usize;
            let mut best_score = i64::MIN;
            for j in 0..nn {
                let mut score = 0i64;
                for i in 0..nn {
                    let sign = 1 - 2 * i64::from((m >> i) & 1);
                    score += sign * opponent.raw[j * nn + i];
                }
                if score > best_score {
                    best_score = score;
                    best_j = j;
                }
            }
            (best_j + 1) as u8
        })
        .collect();
    Strategy { n, choice }
}

/// Outcome of the alternating best-response search.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub f: Strategy,
    pub g: Strategy,
    pub value: GameValue,
    /// Best-response rounds used by the winning restart.
    pub iterations: u64,
    pub restarts_used: u32,
    /// False when some restart hit `max_rounds` without stabilizing.
    pub converged: bool,
}

fn restart_rng(seed: u64, restart: u32) -> ChaCha8Rng {
    // ChaCha8 keyed per restart; splitmix-style odd-constant mixing keeps
    // streams decorrelated.
    ChaCha8Rng::seed_from_u64(seed ^ (u64::from(restart).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// Seeded local search: from random strategy pairs, alternately replace `f`
/// then `g` by best responses until the value stabilizes. `w` is
/// non-decreasing and quantized to `k/4^n`, so every restart terminates or
/// is flagged at `max_rounds`. Deterministic given `(n, seed, restarts)`,
/// independent of thread count.
pub fn alternating_solve(n: u32, seed: u64, restarts: u32, max_rounds: u64) -> Result<SolveResult> {
    check_dim(n, MAX_DIRECT_DIM, "alternating solve")?;
    if restarts == 0 {
        return Err(Error::Domain("restarts must be at least 1".into()));
    }

    type Candidate = Option<(Dyadic, Strategy, Strategy, u64, bool)>;
    let run_restart = |r: u64| -> Candidate {
        let mut rng = restart_rng(seed, r as u32);
        let mut f = Strategy::random(n, &mut rng).expect("dimension checked");
        let mut g = Strategy::random(n, &mut rng).expect("dimension checked");
        let mut w = eval_fourier(&level_one_matrix(&f), &level_one_matrix(&g))
            .expect("dimensions match")
            .w;
        let mut rounds = 0u64;
        let mut converged = false;
        while rounds < max_rounds {
            f = best_response(&level_one_matrix(&g));
            g = best_response(&level_one_matrix(&f));
            let w_new = eval_fourier(&level_one_matrix(&f), &level_one_matrix(&g))
                .expect("dimensions match")
                .w;
            debug_assert!(w_new >= w, "best response must not decrease w");
            rounds += 1;
            if w_new == w {
                converged = true;
                break;
            }
            w = w_new;
        }
        Some((w, f, g, rounds, converged))
    };

    // Merge: larger w wins; ties go to the lexicographically smallest
    // (f, g) tables, so the result is schedule-independent.
    let merge = |a: Candidate, b: Candidate| -> Candidate {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => {
                let pick_a = match a.0.cmp(&b.0) {
                    std::cmp::Ordering::Greater => true,
                    std::cmp::Ordering::Less => false,
                    std::cmp::Ordering::Equal => (&a.1, &a.2) <= (&b.1, &b.2),
                };
                Some(if pick_a { a } else { b })
            }
        }
    };

    let best = exec::map_reduce(u64::from(restarts), run_restart, None, merge)
        .expect("at least one restart");
    let (w, f, g, rounds, converged) = best;
    let value = eval_direct(&f, &g)?;
    debug_assert_eq!(value.w, w);
    Ok(SolveResult {
        f,
        g,
        value,
        iterations: rounds,
        restarts_used: restarts,
        converged,
    })
}

/// Exact small-n optimum with a witnessing pair.
#[derive(Debug, Clone)]
pub struct BruteForceResult {
    pub value: GameValue,
    pub f: Strategy,
    pub g: Strategy,
    /// Strategies deduplicated by their level-one matrix.
    pub distinct_matrices: usize,
}

fn strategy_from_index(n: u32, mut idx: u64) -> Strategy {
    let choice = (0..1u32 << n)
        .map(|_| {
            let c = (idx % u64::from(n)) as u8 + 1;
            idx /= u64::from(n);
            c
        })
        .collect();
    Strategy { n, choice }
}

/// Exact `U_n` by exhaustive enumeration, `n <= 3`. Strategies are
/// deduplicated by their level-one matrix first: the value depends on a
/// strategy only through its matrix.
pub fn brute_force_un(n: u32) -> Result<BruteForceResult> {
    check_dim(n, MAX_BRUTE_DIM, "brute force")?;
    let count = u64::from(n).pow(1 << n);

    // Distinct matrices, each with the first strategy index realizing it.
    let mut seen: HashMap<Vec<i64>, u64> = HashMap::new();
    let mut matrices: Vec<(Vec<i64>, u64)> = Vec::new();
    for idx in 0..count {
        let m = level_one_matrix(&strategy_from_index(n, idx));
        if !seen.contains_key(&m.raw) {
            seen.insert(m.raw.clone(), idx);
            matrices.push((m.raw, idx));
        }
    }
    let d = matrices.len();
    let nn = n as usize;

    type Best = Option<(i64, usize, usize)>;
    let best = exec::map_reduce(
        (d * d) as u64,
        |pair| {
            let (fi, gi) = ((pair / d as u64) as usize, (pair % d as u64) as usize);
            let fr = &matrices[fi].0;
            let gr = &matrices[gi].0;
            let mut sum = 0i64;
            for i in 0..nn {
                for j in 0..nn {
                    sum += fr[i * nn + j] * gr[j * nn + i];
                }
            }
            Some((sum, fi, gi))
        },
        Best::None,
        |a: Best, b: Best| match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => {
                let pick_a = match a.0.cmp(&b.0) {
                    std::cmp::Ordering::Greater => true,
                    std::cmp::Ordering::Less => false,
                    std::cmp::Ordering::Equal => (a.1, a.2) <= (b.1, b.2),
                };
                Some(if pick_a { a } else { b })
            }
        },
    )
    .expect("at least one pair");

    let (w_num, fi, gi) = best;
    let f = strategy_from_index(n, matrices[fi].1);
    let g = strategy_from_index(n, matrices[gi].1);
    let value = GameValue::from_w_num(w_num, n);
    debug_assert_eq!(eval_direct(&f, &g)?.w, value.w);
    Ok(BruteForceResult {
        value,
        f,
        g,
        distinct_matrices: d,
    })
}

#[derive(Serialize, Deserialize)]
struct StrategyFile {
    n: u32,
    f: Vec<i64>,
    g: Vec<i64>,
}

fn table_from_file(n: u32, name: &str, entries: &[i64]) -> Result<Strategy> {
    if entries.len() != 1usize << n {
        return Err(Error::StrategyFile(format!(
            "table `{name}` has {} entries, expected {}",
            entries.len(),
            1u64 << n
        )));
    }
    let mut choice = Vec::with_capacity(entries.len());
    for (m, &c) in entries.iter().enumerate() {
        if c < 1 || c > i64::from(n) {
            return Err(Error::StrategyFile(format!(
                "table `{name}` index {m}: choice {c} out of range [1, {n}]"
            )));
        }
        choice.push(c as u8);
    }
    Strategy::new(n, choice)
}

/// Reads a `{n, f, g}` JSON strategy pair, validating every entry.
pub fn parse_strategy_file(path: &Path) -> Result<(Strategy, Strategy)> {
    let text = std::fs::read_to_string(path)?;
    let file: StrategyFile = serde_json::from_str(&text)?;
    if file.n < 1 || file.n > MAX_DIRECT_DIM {
        return Err(Error::StrategyFile(format!(
            "n = {} out of range [1, {MAX_DIRECT_DIM}]",
            file.n
        )));
    }
    let f = table_from_file(file.n, "f", &file.f)?;
    let g = table_from_file(file.n, "g", &file.g)?;
    Ok((f, g))
}

/// Writes the pair in the format `parse_strategy_file` reads back.
pub fn write_strategy_file(path: &Path, f: &Strategy, g: &Strategy) -> Result<()> {
    if f.n != g.n {
        return Err(Error::DimensionMismatch(f.n, g.n));
    }
    let file = StrategyFile {
        n: f.n,
        f: f.choice.iter().map(|&c| i64::from(c)).collect(),
        g: g.choice.iter().map(|&c| i64::from(c)).collect(),
    };
    let mut text = serde_json::to_string_pretty(&file)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
