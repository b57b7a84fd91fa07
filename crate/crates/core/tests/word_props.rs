use ittm_core::Word;
use proptest::prelude::*;

fn word() -> impl Strategy<Value = Word> {
    (prop::collection::vec(any::<bool>(), 0..6), prop::collection::vec(any::<bool>(), 1..5))
        .prop_map(|(p, q)| Word::new(p, q))
}

proptest! {
    #[test]
    fn or_is_pointwise(a in word(), b in word()) {
        let c = a.or(&b);
        for i in 0..60 {
            prop_assert_eq!(c.read(i), a.read(i) || b.read(i));
        }
    }

    #[test]
    fn literal_round_trip(a in word()) {
        prop_assert_eq!(a.to_string().parse::<Word>().unwrap(), a);
    }

    #[test]
    fn write_and_suffix(a in word(), i in 0usize..20, b: bool, k in 0usize..20) {
        let w = a.write(i, b);
        for j in 0..50 {
            prop_assert_eq!(w.read(j), if j == i { b } else { a.read(j) });
        }
        let s = a.suffix(k);
        for j in 0..40 {
            prop_assert_eq!(s.read(j), a.read(j + k));
        }
    }

    #[test]
    fn canonical_equality_is_sequence_equality(p in prop::collection::vec(any::<bool>(), 0..4),
                                               q in prop::collection::vec(any::<bool>(), 1..4),
                                               reps in 1usize..4) {
        let a = Word::new(p.clone(), q.clone());
        let mut longer = p;
        longer.extend(q.iter().cycle().take(q.len() * reps));
        let b = Word::new(longer, q.repeat(reps));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn interleave_and_stride(a in word(), b in word()) {
        let c = Word::interleave(&a, &b);
        for i in 0..40 {
            prop_assert_eq!(c.read(2 * i), a.read(i));
            prop_assert_eq!(c.read(2 * i + 1), b.read(i));
        }
        prop_assert_eq!(c.stride(0, 2), a);
        prop_assert_eq!(c.stride(1, 2), b);
    }

    #[test]
    fn zeros_preserved_matches_definition(r in word(), others in prop::collection::vec(word(), 0..3)) {
        let expect = (0..80).all(|i| r.read(i) || others.iter().all(|o| !o.read(i)));
        prop_assert_eq!(Word::zeros_preserved(&r, &others), expect);
    }
}
