//! Acceptance suite: ten numbered criteria covering the full pipeline, each
//! printing one `acceptance NN PASS/FAIL` line (run with `--nocapture` to
//! see the lines for passing criteria) and enforcing a runtime budget.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use permulex_core::ergodic::factor_frequency_envelope;
use permulex_core::interval::{
    build_interval_morphism, canonical_prefix, dyadic_deviation, IntervalMorphism, Orientation,
};
use permulex_core::order::{
    monotone_power, monotonicity_verdict, position_types, type_order, Monotonicity, PositionType,
    Separability,
};
use permulex_core::perm::{permutation_from_values, valid_permutation_prefix, value_complexity};
use permulex_core::spectral::{perron_data, IncidenceMatrix, PerronData};
use permulex_core::sturmian::{doubling_step, rotation_sequence, SturmianParams};
use permulex_core::word::{compare_shifts_resolved, Morphism, WordStream};
use permulex_core::{Quadratic, Rational, Scalar};

fn criterion(index: usize, budget: Duration, label: &str, body: impl FnOnce()) {
    let started = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = started.elapsed();
    let ok = outcome.is_ok() && elapsed <= budget;
    println!(
        "acceptance {index:02} {} [{elapsed:.2?} of {budget:?}] {label}",
        if ok { "PASS" } else { "FAIL" },
    );
    if let Err(cause) = outcome {
        std::panic::resume_unwind(cause);
    }
    assert!(
        elapsed <= budget,
        "criterion {index} overran its budget: {elapsed:?} > {budget:?}"
    );
}

fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

/// a/b + (c/d)·√5.
fn quad(a: (i64, i64), b: (i64, i64)) -> Quadratic {
    Quadratic::new(ratio(a.0, a.1), ratio(b.0, b.1), 5)
}

fn thue_morse() -> Morphism {
    Morphism::new(vec![vec![0, 1], vec![1, 0]]).unwrap()
}

fn fibonacci() -> Morphism {
    Morphism::new(vec![vec![0, 1], vec![0]]).unwrap()
}

fn fibonacci_squared() -> Morphism {
    fibonacci().power(2).unwrap()
}

fn mixed_order() -> Morphism {
    Morphism::new(vec![vec![0, 2], vec![0, 1], vec![2, 1]]).unwrap()
}

fn rational_system(m: &Morphism) -> (WordStream, IntervalMorphism<Rational>) {
    let mut stream = WordStream::new(m.clone(), 0).unwrap();
    let table = type_order(&mut stream, 1 << 12, 1 << 12).unwrap();
    let spectral = match perron_data(&IncidenceMatrix::from_morphism(m), 256).unwrap() {
        PerronData::Rational(data) => data,
        other => panic!("expected a rational spectrum, got {other:?}"),
    };
    let im = build_interval_morphism(m, 0, &spectral, &table).unwrap();
    (stream, im)
}

fn quadratic_system(m: &Morphism) -> (WordStream, IntervalMorphism<Quadratic>) {
    let mut stream = WordStream::new(m.clone(), 0).unwrap();
    let table = type_order(&mut stream, 1 << 12, 1 << 12).unwrap();
    let spectral = match perron_data(&IncidenceMatrix::from_morphism(m), 256).unwrap() {
        PerronData::Quadratic(data) => data,
        other => panic!("expected a quadratic spectrum, got {other:?}"),
    };
    let im = build_interval_morphism(m, 0, &spectral, &table).unwrap();
    (stream, im)
}

fn t(letter: u8, index: usize) -> PositionType {
    PositionType { letter, index }
}

#[test]
fn criterion_01_thue_morse_golden_values() {
    criterion(
        1,
        Duration::from_secs(1),
        "generate emits the eight known Thue-Morse values exactly",
        || {
            let spec = concat!(env!("CARGO_MANIFEST_DIR"), "/../../specs/thue-morse.json");
            let out = Command::new(env!("CARGO_BIN_EXE_permulex"))
                .args(["generate", spec, "-n", "8"])
                .output()
                .expect("binary runs");
            assert_eq!(out.status.code(), Some(0));
            let text = String::from_utf8(out.stdout).unwrap();
            let got: Vec<&str> = text
                .lines()
                .skip(2)
                .map(|line| line.split(',').nth(1).unwrap())
                .collect();
            assert_eq!(got, ["1/2", "1", "3/4", "1/4", "5/8", "1/8", "3/8", "7/8"]);
            let expected = [(1, 2), (1, 1), (3, 4), (1, 4), (5, 8), (1, 8), (3, 8), (7, 8)];
            for (s, (p, q)) in got.iter().zip(expected) {
                assert_eq!(s.parse::<Rational>().unwrap(), ratio(p, q));
            }
        },
    );
}

#[test]
fn criterion_02_thue_morse_layout() {
    criterion(
        2,
        Duration::from_secs(10),
        "the Thue-Morse layout reproduces the known intervals exactly",
        || {
            let m = thue_morse();
            let (_, im) = rational_system(&m);
            let layout = im.layout();
            assert_eq!(layout.letter_interval(0), (ratio(0, 1), ratio(1, 2)));
            assert_eq!(layout.letter_interval(1), (ratio(1, 2), ratio(1, 1)));
            let expected = [
                (t(1, 2), (0, 1), (1, 4)),
                (t(0, 1), (1, 4), (1, 2)),
                (t(1, 1), (1, 2), (3, 4)),
                (t(0, 2), (3, 4), (1, 1)),
            ];
            for (ty, lo, hi) in expected {
                let (got_lo, got_hi) = layout.type_interval(ty).expect("type exists");
                assert_eq!(got_lo, ratio(lo.0, lo.1), "{ty} lower bound");
                assert_eq!(got_hi, ratio(hi.0, hi.1), "{ty} upper bound");
            }
            assert_eq!(
                layout.ordered_types(),
                [t(1, 2), t(0, 1), t(1, 1), t(0, 2)]
            );
            assert_eq!(im.orientation(), Orientation::HalfOpenLeft);
            assert_eq!(*im.start(), ratio(1, 2));
        },
    );
}

#[test]
fn criterion_03_fibonacci_squared_spectrum_and_layout() {
    criterion(
        3,
        Duration::from_secs(1),
        "the squared golden-mean system has its exact quadratic data",
        || {
            let m = fibonacci_squared();
            let (_, im) = quadratic_system(&m);
            let spectral_theta = {
                let data = match perron_data(&IncidenceMatrix::from_morphism(&m), 256).unwrap() {
                    PerronData::Quadratic(d) => d,
                    other => panic!("unexpected spectrum {other:?}"),
                };
                assert_eq!(data.theta, quad((3, 2), (1, 2)));
                assert_eq!(data.mu[0], quad((-1, 2), (1, 2)));
                data.theta
            };
            let layout = im.layout();
            for p in 1..=3 {
                let (lo, hi) = layout.type_interval(t(0, p)).expect("type (0,p)");
                assert_eq!(hi - lo, quad((-2, 1), (1, 1)), "width of J_(0,{p})");
            }
            for p in 1..=2 {
                let (lo, hi) = layout.type_interval(t(1, p)).expect("type (1,p)");
                assert_eq!(hi - lo, quad((7, 2), (-3, 2)), "width of J_(1,{p})");
            }
            assert_eq!(*im.start(), quad((3, 2), (-1, 2)));
            assert_eq!(
                layout.ordered_types(),
                [t(0, 3), t(0, 1), t(1, 1), t(0, 2), t(1, 2)]
            );
            assert_eq!(
                im.layout().contraction().clone() * spectral_theta,
                quad((1, 1), (0, 1)),
                "contraction is exactly 1/theta"
            );
        },
    );
}

#[test]
fn criterion_04_oracle_equivalence() {
    criterion(
        4,
        Duration::from_secs(10),
        "value ranks equal shift ranks for 1000 positions of both systems",
        || {
            {
                let m = thue_morse();
                let (mut stream, im) = rational_system(&m);
                let values = canonical_prefix(&im, 1000).unwrap();
                let by_values = permutation_from_values(&values).unwrap();
                let by_shifts = valid_permutation_prefix(&mut stream, 1000, 4096).unwrap();
                assert_eq!(by_values, by_shifts, "thue-morse");
            }
            {
                let m = fibonacci_squared();
                let (mut stream, im) = quadratic_system(&m);
                let values = canonical_prefix(&im, 1000).unwrap();
                let by_values = permutation_from_values(&values).unwrap();
                let by_shifts = valid_permutation_prefix(&mut stream, 1000, 4096).unwrap();
                assert_eq!(by_values, by_shifts, "fibonacci-squared");
            }
        },
    );
}

#[test]
fn criterion_05_dyadic_distribution() {
    criterion(
        5,
        Duration::from_secs(30),
        "2^16 Thue-Morse values fill every dyadic cell up to level 6 evenly",
        || {
            let m = thue_morse();
            let (_, im) = rational_system(&m);
            let values = canonical_prefix(&im, 1 << 16).unwrap();
            for level in 1..=6 {
                let deviation = dyadic_deviation(&values, level, im.orientation()).unwrap();
                assert!(
                    deviation <= ratio(1, 100),
                    "level {level} deviation {deviation} exceeds 1/100"
                );
            }
        },
    );
}

#[test]
fn criterion_06_verdict_fixtures() {
    criterion(
        6,
        Duration::from_secs(5),
        "order verdicts and the inseparability witness check out",
        || {
            let depth = 1 << 10;
            assert_eq!(monotonicity_verdict(&thue_morse(), depth), Monotonicity::Monotone);

            let fib = fibonacci();
            match monotonicity_verdict(&fib, depth) {
                Monotonicity::NotMonotone { witness } => {
                    // The witness words must compare strictly at some index …
                    let first_diff = witness
                        .smaller
                        .iter()
                        .zip(&witness.larger)
                        .position(|(a, b)| a != b)
                        .expect("witness words differ");
                    assert!(witness.smaller[first_diff] < witness.larger[first_diff]);
                    // … and applying the substitution must reverse them.
                    let left = fib.apply(&witness.smaller);
                    let right = fib.apply(&witness.larger);
                    let flip = left
                        .iter()
                        .zip(&right)
                        .map(|(a, b)| a.cmp(b))
                        .find(|c| *c != Ordering::Equal)
                        .unwrap_or(Ordering::Equal);
                    assert_eq!(flip, witness.image_cmp);
                    assert_eq!(flip, Ordering::Greater);
                }
                other => panic!("golden-mean substitution misjudged: {other:?}"),
            }
            let scan = monotone_power(&fibonacci(), 4, depth).unwrap();
            assert_eq!(scan.monotone_power, Some(2));

            let scan = monotone_power(&mixed_order(), 5, depth).unwrap();
            assert_eq!(scan.monotone_power, None);
            assert_eq!(scan.verdicts.len(), 5);
            assert!(scan
                .verdicts
                .iter()
                .all(|v| matches!(v, Monotonicity::NotMonotone { .. })));

            let insep = Morphism::new(vec![vec![0, 0, 1], vec![0, 1, 1]]).unwrap();
            let mut stream = WordStream::new(insep, 0).unwrap();
            let table = type_order(&mut stream, 1 << 12, 1 << 12).unwrap();
            match table.verdict {
                Separability::Inseparable { witness } => {
                    assert_eq!(witness, (2, 17, 5));
                    let (x, y, z) = witness;
                    let cap = 1 << 12;
                    assert_eq!(
                        compare_shifts_resolved(&mut stream, x, y, cap).unwrap(),
                        Ordering::Less
                    );
                    assert_eq!(
                        compare_shifts_resolved(&mut stream, y, z, cap).unwrap(),
                        Ordering::Less
                    );
                    let taus = position_types(&mut stream, 18);
                    assert_eq!(taus[x], taus[z]);
                    assert_ne!(taus[x], taus[y]);
                }
                other => panic!("inseparable fixed point misjudged: {other:?}"),
            }
        },
    );
}

#[test]
fn criterion_07_frequency_envelopes() {
    criterion(
        7,
        Duration::from_secs(10),
        "factor and letter envelopes bracket the known frequencies",
        || {
            let m = thue_morse();
            let mut stream = WordStream::new(m, 0).unwrap();
            let word = stream.prefix(1 << 16).to_vec();

            let envelope = factor_frequency_envelope(&word, &[0, 0], 1 << 12).unwrap();
            let sixth = ratio(1, 6);
            assert!(envelope.min_freq() <= sixth && sixth <= envelope.max_freq());
            assert!(envelope.width() < ratio(1, 50), "width {}", envelope.width());

            let half = ratio(1, 2);
            for letter in [0u8, 1] {
                let envelope = factor_frequency_envelope(&word, &[letter], 1 << 12).unwrap();
                assert!(envelope.min_freq() <= half && half <= envelope.max_freq());
            }
        },
    );
}

#[test]
fn criterion_08_sturmian_cross_check() {
    criterion(
        8,
        Duration::from_secs(5),
        "the golden rotation reproduces the squared system's rank order",
        || {
            let step = quad((3, 2), (-1, 2));
            let params = SturmianParams::new(step.clone(), step).unwrap();
            let orbit = rotation_sequence(&params, 1000).unwrap();
            let by_orbit = permutation_from_values(&orbit).unwrap();
            let m = fibonacci_squared();
            let mut stream = WordStream::new(m, 0).unwrap();
            let by_shifts = valid_permutation_prefix(&mut stream, 1000, 1 << 14).unwrap();
            assert_eq!(by_orbit, by_shifts);

            let long = rotation_sequence(&params, 202).unwrap();
            for n in 0..=100 {
                let (even, odd) = doubling_step(&params, &long[n]).unwrap();
                assert_eq!(even, long[2 * n], "beta_{}", 2 * n);
                assert_eq!(odd, long[2 * n + 1], "beta_{}", 2 * n + 1);
            }
        },
    );
}

#[test]
fn criterion_09_sturmian_complexity() {
    criterion(
        9,
        Duration::from_secs(30),
        "the rotation permutation shows exactly n patterns per window",
        || {
            let sigma = quad((-1, 2), (1, 2));
            let rho = quad((1, 3), (0, 1));
            let params = SturmianParams::new(sigma, rho).unwrap();
            let sample = 10_000usize;
            let orbit = rotation_sequence(&params, sample + 7).unwrap();
            for window in 3..=8 {
                let got = value_complexity(&orbit[..sample + window - 1], window).unwrap();
                assert_eq!(got, window, "window {window}");
            }
        },
    );
}

#[test]
fn criterion_10_property_suite() {
    criterion(
        10,
        Duration::from_secs(60),
        "tiling, membership, distortion invariance, and prefix stability",
        || {
            // Contraction factors are exactly 1/theta.
            let tm = thue_morse();
            let (mut tm_stream, tm_im) = rational_system(&tm);
            assert_eq!(*tm_im.layout().contraction(), ratio(1, 2));
            let fib2 = fibonacci_squared();
            let (_, fib2_im) = quadratic_system(&fib2);
            assert_eq!(
                fib2_im.layout().contraction().clone() * quad((3, 2), (1, 2)),
                quad((1, 1), (0, 1))
            );

            // Type intervals tile the letter intervals: for each letter b,
            // the J-intervals whose positions carry b partition I_b exactly.
            fn check_tiling<S: Scalar>(m: &Morphism, im: &IntervalMorphism<S>) {
                let layout = im.layout();
                let bounds: Vec<S> = (0..=layout.alphabet_size() as u8 - 1)
                    .flat_map(|a| [layout.letter_interval(a).0])
                    .chain([layout
                        .letter_interval(layout.alphabet_size() as u8 - 1)
                        .1])
                    .collect();
                assert_eq!(bounds.first().unwrap(), &S::from_integer(0));
                assert_eq!(bounds.last().unwrap(), &S::from_integer(1));

                for b in 0..layout.alphabet_size() as u8 {
                    let mut pieces: Vec<(S, S)> = layout
                        .ordered_types()
                        .iter()
                        .filter(|ty| m.image(ty.letter)[ty.index - 1] == b)
                        .map(|ty| layout.type_interval(*ty).unwrap())
                        .collect();
                    pieces.sort_by(|x, y| {
                        x.0.try_cmp(&y.0).expect("exact endpoint comparison")
                    });
                    let (lo, hi) = layout.letter_interval(b);
                    assert!(!pieces.is_empty(), "letter {b} has no tiles");
                    assert_eq!(pieces.first().unwrap().0, lo, "letter {b} lower end");
                    assert_eq!(pieces.last().unwrap().1, hi, "letter {b} upper end");
                    for pair in pieces.windows(2) {
                        assert_eq!(pair[0].1, pair[1].0, "gap inside letter {b}");
                    }
                }
            }
            check_tiling(&tm, &tm_im);
            check_tiling(&fib2, &fib2_im);

            // Each canonical value lies in the interval of its position type.
            let n = 10_000usize;
            let values = canonical_prefix(&tm_im, n).unwrap();
            let taus = position_types(&mut tm_stream, n);
            for i in 0..n {
                assert_eq!(
                    tm_im.classify_type(&values[i]).unwrap(),
                    taus[i],
                    "value {i} outside its type interval"
                );
            }

            // Rank patterns are invariant under monotone distortions.
            let base = permutation_from_values(&values[..1000]).unwrap();
            let mut state = 0x9e3779b97f4a7c15u64;
            let mut next = move || {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                state >> 33
            };
            for trial in 0..6 {
                let mut distorted: Vec<Rational> = values[..1000].to_vec();
                for _ in 0..3 {
                    match next() % 3 {
                        0 => {
                            let p = ratio(1 + (next() % 9) as i64, 1 + (next() % 9) as i64);
                            let q = ratio((next() % 10) as i64, 1 + (next() % 9) as i64);
                            for v in &mut distorted {
                                *v = p.clone() * v.clone() + q.clone();
                            }
                        }
                        1 => {
                            for v in &mut distorted {
                                *v = v.clone() * v.clone() * v.clone();
                            }
                        }
                        _ => {
                            let one = ratio(1, 1);
                            for v in &mut distorted {
                                *v = v.clone() / (one.clone() + v.clone());
                            }
                        }
                    }
                }
                let got = permutation_from_values(&distorted).unwrap();
                assert_eq!(got, base, "distortion trial {trial}");
            }

            // Prefix generation is stable: fresh streams agree with grown
            // ones, and the substitution maps prefixes into prefixes.
            let mut grown = WordStream::new(thue_morse(), 0).unwrap();
            let early = grown.prefix(128).to_vec();
            let late = grown.prefix(1 << 14).to_vec();
            assert_eq!(early, late[..128]);
            let mut fresh = WordStream::new(thue_morse(), 0).unwrap();
            assert_eq!(fresh.prefix(1 << 14), &late[..]);
            let image = thue_morse().apply(&late[..4096]);
            assert_eq!(image[..4096], late[..4096]);

            let ranks: BTreeSet<usize> = base.ranks().iter().copied().collect();
            assert_eq!(ranks, (1..=1000).collect::<BTreeSet<_>>());
        },
    );
}
