//! Brute-force certification of each inequality on small hypercubes:
//! exhaustive enumeration where the class is small enough, seeded sampling
//! elsewhere. Exact assertions run in dyadic/integer arithmetic; float
//! tolerances appear only where a bound itself involves a logarithm.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{chang_bound, lemma7_bound, newlemma_lower};
use crate::exec;
use crate::game::{eval_direct, eval_fourier, level_one_matrix, Strategy};
use crate::hypercube::{wht, wht_naive, TruthTable};
use crate::{Error, Result};

/// Outcome of one verification suite.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub n: u32,
    pub checked: u64,
    pub violations: u64,
    /// Offending inputs, capped at 10, in enumeration order.
    pub witnesses: Vec<String>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// Stable one-line summary (no timing, so output is reproducible).
    pub fn summary(&self) -> String {
        format!(
            "suite {} n={}: checked {}, violations {}",
            self.suite, self.n, self.checked, self.violations
        )
    }
}

impl std::fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.summary())?;
        for w in &self.witnesses {
            write!(f, "\n  witness: {w}")?;
        }
        Ok(())
    }
}

const WITNESS_CAP: usize = 10;

/// Per-partition tally; merging is associative and commutative, witnesses
/// are ordered by enumeration index and truncated deterministically.
#[derive(Debug, Clone, Default)]
struct Tally {
    checked: u64,
    violations: u64,
    witnesses: Vec<(u64, String)>,
}

impl Tally {
    fn ok() -> Tally {
        Tally {
            checked: 1,
            ..Tally::default()
        }
    }

    fn violation(index: u64, witness: String) -> Tally {
        Tally {
            checked: 1,
            violations: 1,
            witnesses: vec![(index, witness)],
        }
    }

    fn merge(mut a: Tally, mut b: Tally) -> Tally {
        a.checked += b.checked;
        a.violations += b.violations;
        a.witnesses.append(&mut b.witnesses);
        a.witnesses.sort_by_key(|(i, _)| *i);
        a.witnesses.truncate(WITNESS_CAP);
        a
    }

    fn into_report(self, suite: &str, n: u32, start: Instant) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            n,
            checked: self.checked,
            violations: self.violations,
            witnesses: self.witnesses.into_iter().map(|(_, w)| w).collect(),
            elapsed_ms: start.elapsed().as_millis(),
        }
    }
}

fn check_dim(n: u32, max: u32, what: &'static str) -> Result<()> {
    if n < 1 || n > max {
        return Err(Error::DimensionOutOfRange { n, max, what });
    }
    Ok(())
}

fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn random_bits(rng: &mut ChaCha8Rng, n: u32) -> u64 {
    let width = 1u32 << n;
    let r: u64 = rng.gen();
    if width >= 64 {
        r
    } else {
        r & ((1u64 << width) - 1)
    }
}

/// Fast transform against the quadratic oracle: exhaustive over all 0/1
/// tables for `n <= 3`, seeded samples beyond.
pub fn verify_wht(n: u32, samples: u64, seed: u64) -> Result<SuiteReport> {
    check_dim(n, 10, "wht suite")?;
    let start = Instant::now();
    let check = |bits: u64, index: u64| -> Tally {
        let t = TruthTable::from_fn(n, |m| ((bits >> m) & 1) as i64).expect("dimension checked");
        if wht(&t).raw() == wht_naive(&t).expect("n <= 10").raw() {
            Tally::ok()
        } else {
            Tally::violation(index, format!("table bits {bits:#x}"))
        }
    };
    let tally = if n <= 3 {
        let total = 1u64 << (1u32 << n);
        exec::map_reduce(total, |i| check(i, i), Tally::default(), Tally::merge)
    } else {
        exec::map_reduce(
            samples,
            |i| check(random_bits(&mut sample_rng(seed, i), n), i),
            Tally::default(),
            Tally::merge,
        )
    };
    Ok(tally.into_report("wht", n, start))
}

/// `<a, b> = sum_S a^(S) b^(S)`, exactly, as an integer identity on raw
/// spectra. Exhaustive over 0/1 table pairs for `n <= 2`, sampled
/// integer-valued pairs beyond.
pub fn verify_plancherel(n: u32, samples: u64, seed: u64) -> Result<SuiteReport> {
    check_dim(n, 10, "plancherel suite")?;
    let start = Instant::now();
    let holds = |a: &TruthTable, b: &TruthTable| -> bool {
        let sa = wht(a);
        let sb = wht(b);
        let lhs: i128 = a
            .values()
            .iter()
            .zip(b.values())
            .map(|(&x, &y)| x as i128 * y as i128)
            .sum();
        let rhs: i128 = sa
            .raw()
            .iter()
            .zip(sb.raw())
            .map(|(&x, &y)| x as i128 * y as i128)
            .sum();
        rhs == lhs << n
    };
    let tally = if n <= 2 {
        let tables = 1u64 << (1u32 << n);
        exec::map_reduce(
            tables * tables,
            |i| {
                let (ab, bb) = (i / tables, i % tables);
                let a = TruthTable::from_fn(n, |m| ((ab >> m) & 1) as i64).unwrap();
                let b = TruthTable::from_fn(n, |m| ((bb >> m) & 1) as i64).unwrap();
                if holds(&a, &b) {
                    Tally::ok()
                } else {
                    Tally::violation(i, format!("tables {ab:#x}, {bb:#x}"))
                }
            },
            Tally::default(),
            Tally::merge,
        )
    } else {
        exec::map_reduce(
            samples,
            |i| {
                let mut rng = sample_rng(seed, i);
                let a = TruthTable::from_fn(n, |_| rng.gen_range(-2..=2)).unwrap();
                let b = TruthTable::from_fn(n, |_| rng.gen_range(-2..=2)).unwrap();
                if holds(&a, &b) {
                    Tally::ok()
                } else {
                    Tally::violation(i, format!("sample {i}"))
                }
            },
            Tally::default(),
            Tally::merge,
        )
    };
    Ok(tally.into_report("plancherel", n, start))
}

fn strategy_from_index(n: u32, mut idx: u64) -> Strategy {
    let choice: Vec<u8> = (0..1u32 << n)
        .map(|_| {
            let c = (idx % u64::from(n)) as u8 + 1;
            idx /= u64::from(n);
            c
        })
        .collect();
    Strategy::new(n, choice).expect("valid by construction")
}

/// Fourier-route evaluation equals direct enumeration, bit for bit.
/// Exhaustive over all strategy pairs for `n <= 2`, sampled beyond.
pub fn verify_olem(n: u32, samples: u64, seed: u64) -> Result<SuiteReport> {
    check_dim(n, 8, "olem suite")?;
    let start = Instant::now();
    let agree = |f: &Strategy, g: &Strategy| -> bool {
        let direct = eval_direct(f, g).expect("dimensions match");
        let fourier =
            eval_fourier(&level_one_matrix(f), &level_one_matrix(g)).expect("dimensions match");
        direct.w == fourier.w && direct.u == fourier.u
    };
    let tally = if n <= 2 {
        let count = u64::from(n).pow(1 << n);
        exec::map_reduce(
            count * count,
            |i| {
                let f = strategy_from_index(n, i / count);
                let g = strategy_from_index(n, i % count);
                if agree(&f, &g) {
                    Tally::ok()
                } else {
                    Tally::violation(i, format!("pair index {i}"))
                }
            },
            Tally::default(),
            Tally::merge,
        )
    } else {
        exec::map_reduce(
            samples,
            |i| {
                let mut rng = sample_rng(seed, i);
                let f = Strategy::random(n, &mut rng).unwrap();
                let g = Strategy::random(n, &mut rng).unwrap();
                if agree(&f, &g) {
                    Tally::ok()
                } else {
                    Tally::violation(i, format!("sample {i}"))
                }
            },
            Tally::default(),
            Tally::merge,
        )
    };
    Ok(tally.into_report("olem", n, start))
}

/// Level-one mass of a 0/1 function never exceeds `min(2 a^2 ln(1/a), a/2)`.
/// The `a/2` part is checked exactly in integers, the logarithmic part in
/// floating point with tolerance 1e-12. Exhaustive for `n <= 4`, sampled
/// for `n` in {5, 6}.
pub fn verify_chang(n: u32, samples: u64, seed: u64) -> Result<SuiteReport> {
    check_dim(n, 6, "chang suite")?;
    let start = Instant::now();
    let size = 1u32 << n;
    let check = |bits: u64, index: u64| -> Tally {
        let t = TruthTable::from_fn(n, |m| ((bits >> m) & 1) as i64).expect("dimension checked");
        let sp = wht(&t);
        let raw0 = sp.raw_at(0);
        if raw0 == 0 {
            // empty set: zero mass, trivially satisfied
            return Tally::ok();
        }
        let level1_raw: i128 = (0..n)
            .map(|i| {
                let r = sp.raw_at(1 << i) as i128;
                r * r
            })
            .sum();
        // exact: sum_k coeff(k)^2 <= alpha/2, both sides times 2^(2n+1)
        let half_ok = 2 * level1_raw <= (raw0 as i128) << n;
        let alpha = raw0 as f64 / size as f64;
        let level1 = level1_raw as f64 / (size as f64 * size as f64);
        let chang_ok = level1 <= chang_bound(alpha).expect("alpha in (0,1]") + 1e-12;
        if half_ok && chang_ok {
            Tally::ok()
        } else {
            Tally::violation(index, format!("table bits {bits:#x}"))
        }
    };
    let tally = if n <= 4 {
        let total = 1u64 << size;
        exec::map_reduce(total, |i| check(i, i), Tally::default(), Tally::merge)
    } else {
        exec::map_reduce(
            samples,
            |i| check(random_bits(&mut sample_rng(seed, i), n), i),
            Tally::default(),
            Tally::merge,
        )
    };
    Ok(tally.into_report("chang", n, start))
}

/// Exhaustive exact check of the strengthened level-one inequality
/// (level-1 mass <= a/2 minus the odd degree >= 3 mass) together with the
/// odd-mass identity `sum_{|S| odd} coeff^2 = (a - <h, h(-.)>)/2`.
pub fn verify_bonus(n: u32) -> Result<SuiteReport> {
    check_dim(n, 4, "bonus suite")?;
    let start = Instant::now();
    let size = 1u32 << n;
    let full = size - 1;
    let total = 1u64 << size;
    let tally = exec::map_reduce(
        total,
        |bits| {
            let t =
                TruthTable::from_fn(n, |m| ((bits >> m) & 1) as i64).expect("dimension checked");
            let sp = wht(&t);
            let raw0 = sp.raw_at(0) as i128;
            let odd_raw: i128 = (0..size)
                .filter(|s| s.count_ones() % 2 == 1)
                .map(|s| {
                    let r = sp.raw_at(s) as i128;
                    r * r
                })
                .sum();
            // <h, h(-.)> scaled by 2^n
            let cross: i128 = (0..size)
                .map(|m| (t.value(m) * t.value(m ^ full)) as i128)
                .sum();
            // (i) strengthened bound, both sides times 2^(2n+1)
            let bonus_ok = 2 * odd_raw <= raw0 << n;
            // (ii) identity, both sides times 2^(2n+1)
            let identity_ok = 2 * odd_raw == (raw0 - cross) << n;
            if bonus_ok && identity_ok {
                Tally::ok()
            } else {
                Tally::violation(bits, format!("table bits {bits:#x}"))
            }
        },
        Tally::default(),
        Tally::merge,
    );
    let report = tally.into_report("bonus", n, start);
    assert_eq!(report.checked, total, "exhaustive count mismatch");
    Ok(report)
}

/// Exhaustive check of the antipodal-free tail lower bound over all
/// `3^(2^(n-1))` configurations (each antipodal pair is out / this point in
/// / the mirrored point in).
pub fn verify_newlemma(n: u32) -> Result<SuiteReport> {
    check_dim(n, 4, "newlemma suite")?;
    let start = Instant::now();
    let size = 1u32 << n;
    let half = 1u32 << (n - 1);
    let full = size - 1;
    let total = 3u64.pow(half);
    let tally = exec::map_reduce(
        total,
        |config| {
            let mut bits = 0u64;
            let mut c = config;
            for p in 0..half {
                match c % 3 {
                    1 => bits |= 1u64 << p,
                    2 => bits |= 1u64 << (p ^ full),
                    _ => {}
                }
                c /= 3;
            }
            let count = bits.count_ones();
            if count == 0 {
                return Tally::ok();
            }
            let t =
                TruthTable::from_fn(n, |m| ((bits >> m) & 1) as i64).expect("dimension checked");
            let sp = wht(&t);
            let tail_raw: i128 = (0..size)
                .filter(|s| s.count_ones() % 2 == 1 && s.count_ones() >= 3)
                .map(|s| {
                    let r = sp.raw_at(s) as i128;
                    r * r
                })
                .sum();
            let mass = tail_raw as f64 / (size as f64 * size as f64);
            let beta = count as f64 / size as f64;
            let bound = newlemma_lower(beta).expect("beta in (0, 1/2]");
            if mass >= bound - 1e-12 {
                Tally::ok()
            } else {
                Tally::violation(config, format!("set bits {bits:#x} (measure {beta})"))
            }
        },
        Tally::default(),
        Tally::merge,
    );
    let report = tally.into_report("newlemma", n, start);
    assert_eq!(report.checked, total, "exhaustive count mismatch");
    Ok(report)
}

/// Witness that a set is (or is not) of threshold form for its own
/// first-moment vector.
#[derive(Debug, Clone)]
pub struct HalfspaceWitness {
    /// Member points of the set, as a bitset over point masks.
    pub set_bits: u64,
    /// `2^n`-scaled first moments `z_i = 2^n E[X_i 1_A(X)]`.
    pub moment_raw: Vec<i64>,
    /// A realizing threshold on `<x, z>`, when one exists.
    pub threshold: Option<i64>,
    pub is_halfspace: bool,
}

/// Checks whether `A = {x : <x, z> >= u}` for some threshold `u`, testing
/// every gap of the sorted inner-product values. `<x, z>` takes at most
/// `2^n` values, so this is exact.
pub fn halfspace_witness(n: u32, set_bits: u64) -> HalfspaceWitness {
    let size = 1u32 << n;
    let moment_raw: Vec<i64> = (0..n)
        .map(|i| {
            (0..size)
                .filter(|m| (set_bits >> m) & 1 == 1)
                .map(|m| 1 - 2 * i64::from((m >> i) & 1))
                .sum()
        })
        .collect();
    let ips: Vec<i64> = (0..size)
        .map(|m| {
            (0..n)
                .map(|i| (1 - 2 * i64::from((m >> i) & 1)) * moment_raw[i as usize])
                .sum()
        })
        .collect();
    let mut candidates: Vec<i64> = ips.clone();
    candidates.sort_unstable();
    candidates.dedup();
    let realizes = |u: Option<i64>| -> bool {
        (0..size).all(|m| {
            let inside = match u {
                Some(u) => ips[m as usize] >= u,
                None => false, // threshold above every value: the empty set
            };
            inside == ((set_bits >> m) & 1 == 1)
        })
    };
    let mut threshold = None;
    let mut is_halfspace = realizes(None) && set_bits == 0;
    if !is_halfspace {
        for &u in &candidates {
            if realizes(Some(u)) {
                threshold = Some(u);
                is_halfspace = true;
                break;
            }
        }
    }
    HalfspaceWitness {
        set_bits,
        moment_raw,
        threshold,
        is_halfspace,
    }
}

/// For every cardinality, every maximizer of the level-one mass must be a
/// threshold set for its own first-moment vector. Scans all `2^(2^n)` sets.
pub fn verify_halfspace(n: u32) -> Result<SuiteReport> {
    check_dim(n, 4, "halfspace suite")?;
    let start = Instant::now();
    let size = 1u32 << n;
    let total = 1u64 << size;

    // max level-one raw mass and all maximizers, per cardinality
    type PerCard = Vec<(i128, Vec<u64>, u64)>;
    let level1_raw = |bits: u64| -> i128 {
        (0..n)
            .map(|i| {
                let z: i64 = (0..size)
                    .filter(|m| (bits >> m) & 1 == 1)
                    .map(|m| 1 - 2 * i64::from((m >> i) & 1))
                    .sum();
                z as i128 * z as i128
            })
            .sum()
    };
    let per_card = exec::map_reduce(
        total,
        |bits| {
            let mut acc: PerCard = vec![(i128::MIN, Vec::new(), 0); size as usize + 1];
            let c = bits.count_ones() as usize;
            acc[c] = (level1_raw(bits), vec![bits], 1);
            acc
        },
        vec![(i128::MIN, Vec::new(), 0); size as usize + 1],
        |mut a: PerCard, b: PerCard| {
            for (slot, (mass, mut sets, count)) in a.iter_mut().zip(b) {
                slot.2 += count;
                if mass > slot.0 {
                    *slot = (mass, sets, slot.2);
                } else if mass == slot.0 {
                    slot.1.append(&mut sets);
                }
            }
            a
        },
    );

    // enumeration count per cardinality must be the binomial coefficient
    let mut binom = 1u64;
    for (c, slot) in per_card.iter().enumerate() {
        assert_eq!(slot.2, binom, "cardinality {c} count mismatch");
        binom = binom * (u64::from(size) - c as u64) / (c as u64 + 1);
    }

    let mut tally = Tally {
        checked: total,
        ..Tally::default()
    };
    for slot in &per_card {
        let mut sets = slot.1.clone();
        sets.sort_unstable();
        for &bits in &sets {
            let w = halfspace_witness(n, bits);
            if !w.is_halfspace {
                tally.violations += 1;
                if tally.witnesses.len() < WITNESS_CAP {
                    tally
                        .witnesses
                        .push((bits, format!("maximizer bits {bits:#x} is not a threshold set")));
                }
            }
        }
    }
    Ok(tally.into_report("halfspace", n, start))
}

/// Samples pairs whose `g` satisfies `Pr{g(X) >= k} <= eps` by
/// construction, and checks the concentration bound on the game value.
pub fn verify_lemma7(n: u32, k: u32, eps: f64, samples: u64, seed: u64) -> Result<SuiteReport> {
    check_dim(n, 8, "lemma7 suite")?;
    if k < 2 || k > n {
        return Err(Error::Domain(format!(
            "sampler needs 2 <= k <= n, got k = {k} at n = {n}"
        )));
    }
    let bound = lemma7_bound(k, eps)?;
    let start = Instant::now();
    let size = 1u32 << n;
    let budget = (eps * size as f64).floor() as usize;
    let tally = exec::map_reduce(
        samples,
        |i| {
            let mut rng = sample_rng(seed, i);
            let f = Strategy::random(n, &mut rng).expect("dimension checked");
            let mut gc: Vec<u8> = (0..size).map(|_| rng.gen_range(1..=(k - 1) as u8)).collect();
            let wild = rand::seq::index::sample(&mut rng, size as usize, budget);
            for m in wild {
                gc[m] = rng.gen_range(1..=n as u8);
            }
            let g = Strategy::new(n, gc).expect("valid by construction");
            let above = g.choices().iter().filter(|&&c| u32::from(c) >= k).count();
            debug_assert!(above as f64 / size as f64 <= eps);
            let w = eval_direct(&f, &g).expect("dimensions match").w.to_f64();
            if w <= bound + 1e-12 {
                Tally::ok()
            } else {
                Tally::violation(i, format!("sample {i}: w = {w} > {bound}"))
            }
        },
        Tally::default(),
        Tally::merge,
    );
    Ok(tally.into_report("lemma7", n, start))
}
