use hyperlab::analytics::equidist::{build_sample, Case};
use hyperlab::analytics::report::StatReport;
use hyperlab::elliptic::{count_range, prime_weyl_a};
use hyperlab::quaternion::{count_range_h, prime_weyl_b, psi_h};

fn with_threads<R: Send>(n: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap().install(f)
}

fn same(a: &StatReport, b: &StatReport) {
    assert_eq!(a.count, b.count);
    assert_eq!(a.weighted_sum.to_bits(), b.weighted_sum.to_bits());
    assert_eq!(a.complex_sum.re.to_bits(), b.complex_sum.re.to_bits());
    assert_eq!(a.complex_sum.im.to_bits(), b.complex_sum.im.to_bits());
}

#[test]
fn range_sums_do_not_depend_on_the_pool() {
    let x = 300_000;
    let runs: Vec<Vec<StatReport>> = [1, 2, 5]
        .iter()
        .map(|&t| {
            with_threads(t, || {
                vec![
                    count_range(x).unwrap(),
                    prime_weyl_a(2, -2, 2, x).unwrap(),
                    count_range_h(x).unwrap(),
                    psi_h(x).unwrap(),
                    prime_weyl_b(2, 0, x).unwrap(),
                ]
            })
        })
        .collect();
    for r in &runs[1..] {
        for (a, b) in runs[0].iter().zip(r) {
            same(a, b);
        }
    }
}

#[test]
fn samples_do_not_depend_on_the_pool() {
    for case in [Case::E, Case::H] {
        let a = with_threads(1, || build_sample(case, 100_000, true).unwrap());
        let b = with_threads(3, || build_sample(case, 100_000, true).unwrap());
        assert_eq!(a, b);
    }
}

/// The blocked sweep crosses several block boundaries here and must agree
/// with enumeration term by term.
#[test]
fn blocked_count_matches_enumeration() {
    let small = count_range(100_000).unwrap();
    let big = count_range(200_000).unwrap();
    assert!(small.count < big.count);
    let direct: u64 = (3..=200_000u64).map(|n| hyperlab::elliptic::enumerate_norm(n).unwrap().len() as u64).sum::<u64>() + 4;
    assert_eq!(big.count, direct);
}
