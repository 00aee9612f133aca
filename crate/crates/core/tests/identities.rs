//! Cross-checks between independent computation routes: transform vs naive
//! oracle, Parseval, spectral symmetries, and the two game-evaluation routes.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hats_core::dyadic::Dyadic;
use hats_core::game::{
    eval_direct, eval_fourier, level_one_matrix, LevelOneMatrix, Strategy,
};
use hats_core::hypercube::{inner_product, spectral_mass, wht, wht_naive, DegreeFilter, TruthTable};

fn random_table(rng: &mut ChaCha8Rng, n: u32, lo: i64, hi: i64) -> TruthTable {
    TruthTable::from_fn(n, |_| rng.gen_range(lo..=hi)).unwrap()
}

#[test]
fn fast_transform_matches_naive_exhaustively() {
    for n in 1..=3u32 {
        for bits in 0u64..1 << (1u32 << n) {
            let t = TruthTable::from_fn(n, |m| ((bits >> m) & 1) as i64).unwrap();
            assert_eq!(wht(&t).raw(), wht_naive(&t).unwrap().raw());
        }
    }
}

#[test]
fn fast_transform_matches_naive_sampled() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 4..=10u32 {
        for _ in 0..1500 {
            let t = random_table(&mut rng, n, -3, 3);
            assert_eq!(wht(&t).raw(), wht_naive(&t).unwrap().raw());
        }
    }
}

#[test]
fn parseval_exact() {
    // exhaustive 0/1 tables for n <= 3, random integer tables beyond
    for n in 1..=3u32 {
        for bits in 0u64..1 << (1u32 << n) {
            let t = TruthTable::from_fn(n, |m| ((bits >> m) & 1) as i64).unwrap();
            let mass = spectral_mass(&wht(&t), &DegreeFilter::All);
            assert_eq!(mass, inner_product(&t, &t).unwrap());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 4..=10u32 {
        for _ in 0..200 {
            let t = random_table(&mut rng, n, -5, 5);
            let mass = spectral_mass(&wht(&t), &DegreeFilter::All);
            assert_eq!(mass, inner_product(&t, &t).unwrap());
        }
    }
}

#[test]
fn argument_negation_flips_odd_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 1..=8u32 {
        for _ in 0..50 {
            let t = random_table(&mut rng, n, -2, 2);
            let sp = wht(&t);
            let sp_neg = wht(&t.negated_argument());
            for s in 0..1u32 << n {
                let sign = if s.count_ones() % 2 == 1 { -1 } else { 1 };
                assert_eq!(sp_neg.raw_at(s), sign * sp.raw_at(s));
            }
        }
    }
}

#[test]
fn transform_is_an_involution_up_to_scale() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for n in 1..=8u32 {
        for _ in 0..50 {
            let t = random_table(&mut rng, n, -4, 4);
            let once = wht(&t);
            let twice = wht(&TruthTable::new(n, once.raw().to_vec()).unwrap());
            for m in 0..1u32 << n {
                assert_eq!(twice.raw_at(m), t.value(m) << n);
            }
        }
    }
}

#[test]
fn odd_mass_identity_for_indicators() {
    // 2^(2n+1) * sum_{|S| odd} coeff(S)^2 = 2^n * (raw0 - sum_m h(m) h(-m))
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for n in 1..=8u32 {
        let full = (1u32 << n) - 1;
        for _ in 0..100 {
            let t = TruthTable::from_fn(n, |_| rng.gen_range(0..=1)).unwrap();
            let sp = wht(&t);
            let odd = spectral_mass(&sp, &DegreeFilter::Odd);
            let cross: i64 = (0..=full).map(|m| t.value(m) * t.value(m ^ full)).sum();
            let rhs = Dyadic::new((sp.raw_at(0) - cross) as i128, n + 1);
            assert_eq!(odd, rhs);
        }
    }
}

#[test]
fn fourier_route_equals_direct_route() {
    // exhaustive at n = 2
    for fi in 0..16u64 {
        for gi in 0..16u64 {
            let dig = |mut i: u64| -> Vec<u8> {
                (0..4)
                    .map(|_| {
                        let c = (i % 2) as u8 + 1;
                        i /= 2;
                        c
                    })
                    .collect()
            };
            let f = Strategy::new(2, dig(fi)).unwrap();
            let g = Strategy::new(2, dig(gi)).unwrap();
            let direct = eval_direct(&f, &g).unwrap();
            let fourier = eval_fourier(&level_one_matrix(&f), &level_one_matrix(&g)).unwrap();
            assert_eq!(direct, fourier);
        }
    }
    // sampled at larger n
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for n in 3..=8u32 {
        for _ in 0..125 {
            let f = Strategy::random(n, &mut rng).unwrap();
            let g = Strategy::random(n, &mut rng).unwrap();
            let direct = eval_direct(&f, &g).unwrap();
            let fourier = eval_fourier(&level_one_matrix(&f), &level_one_matrix(&g)).unwrap();
            assert_eq!(direct, fourier);
        }
    }
}

#[test]
fn cauchy_schwarz_on_level_one_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in 1..=8u32 {
        for _ in 0..50 {
            let f = Strategy::random(n, &mut rng).unwrap();
            let g = Strategy::random(n, &mut rng).unwrap();
            let fm = level_one_matrix(&f);
            let gm = level_one_matrix(&g);
            let w = eval_fourier(&fm, &gm).unwrap().w.to_f64();
            let bound = (fm.squared_norm().to_f64() * gm.squared_norm().to_f64()).sqrt();
            assert!(w.abs() <= bound + 1e-12);
        }
    }
}

#[test]
fn color_negation_symmetry() {
    // negating every hat color on both sides leaves the value unchanged
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for n in 1..=6u32 {
        for _ in 0..50 {
            let f = Strategy::random(n, &mut rng).unwrap();
            let g = Strategy::random(n, &mut rng).unwrap();
            let v = eval_direct(&f, &g).unwrap();
            let v_neg = eval_direct(&f.negated_argument(), &g.negated_argument()).unwrap();
            assert_eq!(v, v_neg);
        }
    }
}

#[test]
fn value_ranges() {
    let half = Dyadic::ONE.div_pow2(1);
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for n in 1..=6u32 {
        for _ in 0..50 {
            let f = Strategy::random(n, &mut rng).unwrap();
            let g = Strategy::random(n, &mut rng).unwrap();
            let v = eval_direct(&f, &g).unwrap();
            assert!(v.w >= -Dyadic::ONE && v.w <= Dyadic::ONE);
            assert!(v.u >= Dyadic::ZERO && v.u <= half);
            assert_eq!(v.u, (v.w + Dyadic::ONE).div_pow2(2));
        }
    }
}

#[test]
fn level_one_matrix_round_trips_from_raw() {
    let f = Strategy::new(2, vec![1, 2, 1, 1]).unwrap();
    let m = level_one_matrix(&f);
    let back = LevelOneMatrix::from_raw(2, m.raw().to_vec()).unwrap();
    assert_eq!(back.raw(), m.raw());
    // E[x_1 1{f=1}] over [1,2,1,1]: points 0, 2, 3 choose 1; signs +,+,-
    assert_eq!(back.entry(1, 1), Dyadic::new(1, 2));
}
