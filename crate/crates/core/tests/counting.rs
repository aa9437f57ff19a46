mod common;

use common::{regular_families, PAIRS};
use spectra_core::counting::{
    count_sorted, points_in_radius, sup_count_sorted, verify_counting_lemma_sorted,
};

#[test]
fn windows_of_length_p_pow_k_hold_at_most_q_pow_k() {
    for (p, q) in PAIRS {
        let radius = i128::from(p).pow(7);
        for fam in regular_families(p, q) {
            let points = points_in_radius(&fam, radius).unwrap();
            for k in 1..=5 {
                let v = verify_counting_lemma_sorted(fam.params(), &points, k, radius).unwrap();
                assert!(v.pass, "{} ({p},{q}) k={k}: {:?}", fam.name(), v.worst);
            }
        }
    }
}

#[test]
fn sup_count_matches_every_integer_start() {
    for (p, q) in PAIRS {
        for fam in regular_families(p, q) {
            let radius = 3000;
            let points = points_in_radius(&fam, radius).unwrap();
            for n in [1i128, 2, 9, 27, 80, 81, 500, 2999, 6001, 7000] {
                let got = sup_count_sorted(&points, n, -radius, radius).unwrap();
                let brute = if n > 2 * radius + 1 {
                    points.len()
                } else {
                    (-radius..=radius - n + 1)
                        .map(|m| count_sorted(&points, m, n))
                        .max()
                        .unwrap()
                };
                assert_eq!(got.count, brute, "{} ({p},{q}) n={n}", fam.name());
            }
        }
    }
}
