use proptest::prelude::*;

use smyth::algebra::{FieldParams, Poly};
use smyth::certfile::CertificateFile;
use smyth::engine::{
    balanced_from_certificate, balanced_multiset, certificate_from_balanced, check_criteria, enumerate_solutions,
    fiber_table, is_balanced, CoeffTuple, SearchConfig,
};
use smyth::Jobs;

/// Random coprime tuples over F_q[t] with coefficients of degree at most 2.
fn tuples() -> impl Strategy<Value = CoeffTuple> {
    tuples_in(vec![2, 3], 3..=4)
}

fn tuples_in(qs: Vec<u64>, ns: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = CoeffTuple> {
    (prop::sample::select(qs), ns)
        .prop_flat_map(|(q, n)| prop::collection::vec(1..q.pow(3), n).prop_map(move |ix| (q, ix)))
        .prop_filter_map("coprime", |(q, ix)| {
            let f = FieldParams::new(q).unwrap();
            CoeffTuple::new(ix.into_iter().map(|i| Poly::from_index(f, i)).collect()).ok()
        })
}

fn small_box(a: &CoeffTuple) -> usize {
    a.height().max(1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fibers_are_uniform_for_smyth_tuples(a in tuples()) {
        prop_assume!(check_criteria(&a).passes);
        let n_box = small_box(&a);
        let expected = a.field().q().pow((n_box * (a.n() - 2) - a.height()) as u32);
        let table = fiber_table(&a, n_box, &SearchConfig::default()).unwrap();
        prop_assert!(table.iter().flatten().all(|&c| c == expected));
    }

    #[test]
    fn criteria_failures_block_certification(a in tuples()) {
        prop_assume!(!check_criteria(&a).passes);
        prop_assert!(balanced_multiset(&a, small_box(&a), &SearchConfig::default()).is_err());
    }

    #[test]
    fn certificates_survive_files(a in tuples()) {
        prop_assume!(check_criteria(&a).passes);
        let n_box = small_box(&a);
        let b = balanced_multiset(&a, n_box, &SearchConfig::default()).unwrap();
        let file = CertificateFile::from_balanced(&a, n_box, &b);
        let text = file.to_json();
        let back = CertificateFile::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        prop_assert!(back.verify().unwrap());
    }

    #[test]
    fn certificates_give_back_balanced_multisets(a in tuples_in(vec![2], 3..=3)) {
        prop_assume!(check_criteria(&a).passes);
        let b = balanced_multiset(&a, small_box(&a), &SearchConfig::default()).unwrap();
        let c = certificate_from_balanced(&b);
        let recovered = balanced_from_certificate(&a, &c.permutations).unwrap();
        prop_assert!(is_balanced(a.coeffs(), recovered.tuples()).unwrap());
    }

    #[test]
    fn job_count_does_not_change_solutions(a in tuples(), jobs in 2usize..5) {
        let n_box = small_box(&a);
        let serial = enumerate_solutions(&a, n_box, &SearchConfig::default()).unwrap();
        let parallel = enumerate_solutions(&a, n_box, &SearchConfig::default().with_jobs(Jobs::new(jobs))).unwrap();
        prop_assert_eq!(serial, parallel);
    }
}
