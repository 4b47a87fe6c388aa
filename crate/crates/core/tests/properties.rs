use plrs::ensemble::{tally_omega, z_closed_form};
use plrs::zeckendorf::{insert_block_before_last, parse_blocks, remove_second_to_last_block};
use plrs::{
    decompose, decompose_u64, is_legal, summand_polynomial, value, BigUint, BlockCatalog,
    Decomposition, RecurrenceSpec, SequenceTable,
};
use proptest::prelude::*;

/// Valid recurrences with `L <= 4` and coefficients up to 3.
fn specs() -> impl Strategy<Value = RecurrenceSpec> {
    (1usize..=4)
        .prop_flat_map(|len| proptest::collection::vec(0i64..=3, len))
        .prop_filter_map("c_1 and c_L positive, not (1)", |c| {
            (c[0] > 0 && *c.last().unwrap() > 0 && c != [1])
                .then(|| RecurrenceSpec::new(&c).unwrap())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn catalog_is_complete(spec in specs()) {
        let catalog = BlockCatalog::new(&spec);
        let sizes: Vec<u64> = catalog.type2_blocks().iter().map(|b| b.size()).collect();
        prop_assert_eq!(sizes, (0..spec.size()).collect::<Vec<_>>());
        prop_assert!(catalog.lengths().windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(catalog.lengths()[0], 1);
        prop_assert_eq!(catalog.type1_blocks().len(), spec.length() - 1);
        for (t, b) in catalog.type2_blocks().iter().enumerate() {
            prop_assert_eq!(catalog.length(t).unwrap(), b.len());
        }
    }

    #[test]
    fn decompose_round_trips(spec in specs(), m in 1u64..=100_000) {
        let table = SequenceTable::with_terms(spec.clone(), 8);
        let d = decompose_u64(&table, m).unwrap();
        prop_assert!(is_legal(&spec, d.coefficients()).is_legal());
        prop_assert_eq!(value(&table, &d).unwrap(), BigUint::from(m));
        let n = d.len();
        let extended = SequenceTable::with_terms(spec.clone(), n + 1);
        prop_assert!(extended.term(n) <= &BigUint::from(m) && &BigUint::from(m) < extended.term(n + 1));
    }

    #[test]
    fn blocks_concatenate_to_the_string(spec in specs(), m in 1u64..=1_000_000) {
        let table = SequenceTable::with_terms(spec.clone(), 8);
        let d = decompose_u64(&table, m).unwrap();
        let catalog = BlockCatalog::new(&spec);
        let parse = parse_blocks(&catalog, &d).unwrap();
        prop_assert_eq!(parse.flatten(), d.coefficients().to_vec());
        let summands: u64 = parse.blocks().iter().map(|b| b.size()).sum();
        prop_assert_eq!(summands, d.summand_count());
        // Only the last block may be Type 1.
        let kinds: Vec<_> = parse.blocks().iter().map(|b| b.kind()).collect();
        prop_assert!(kinds[..kinds.len() - 1].iter().all(|&k| k == plrs::BlockKind::Type2));
    }

    #[test]
    fn removal_and_insertion_are_inverse(spec in specs(), m in 1u64..=10_000_000, t_seed in 0usize..64) {
        let table = SequenceTable::with_terms(spec.clone(), 8);
        let catalog = BlockCatalog::new(&spec);
        let d = decompose_u64(&table, m).unwrap();
        let blocks = parse_blocks(&catalog, &d).unwrap().len();
        if blocks >= 3 {
            let (shorter, t) = remove_second_to_last_block(&catalog, &d).unwrap();
            prop_assert!(is_legal(&spec, shorter.coefficients()).is_legal());
            prop_assert_eq!(shorter.len() + catalog.length(t).unwrap(), d.len());
            prop_assert_eq!(insert_block_before_last(&catalog, &shorter, t).unwrap(), d.clone());
        }
        if blocks >= 2 {
            let t = t_seed % spec.size() as usize;
            let longer = insert_block_before_last(&catalog, &d, t).unwrap();
            prop_assert!(is_legal(&spec, longer.coefficients()).is_legal());
            prop_assert_eq!(longer.summand_count(), d.summand_count() + t as u64);
            let (back, removed) = remove_second_to_last_block(&catalog, &longer).unwrap();
            prop_assert_eq!(removed, t);
            prop_assert_eq!(back, d);
        }
    }

    #[test]
    fn big_integers_round_trip(spec in specs(), digits in proptest::collection::vec(any::<u32>(), 1..6)) {
        let m = digits.iter().fold(BigUint::from(1u32), |acc, &d| acc * BigUint::from(1u64 << 32) + d);
        let table = SequenceTable::new(spec.clone());
        let d = decompose(&table, &m).unwrap();
        prop_assert!(is_legal(&spec, d.coefficients()).is_legal());
        prop_assert_eq!(value(&SequenceTable::with_terms(spec, d.len()), &d).unwrap(), m);
    }

    #[test]
    fn summand_polynomial_matches_tally(spec in specs(), n in 1usize..=9) {
        let catalog = BlockCatalog::new(&spec);
        let tally = tally_omega(&catalog, n, 5_000_000).unwrap();
        let p = summand_polynomial(&spec, n);
        let coeffs: Vec<u64> = p.coeffs().iter().map(|x| x.try_into().unwrap()).collect();
        prop_assert_eq!(coeffs, tally.histogram);
    }

    #[test]
    fn z_distribution_is_monotone(spec in specs(), extra in 1usize..=40) {
        let catalog = BlockCatalog::new(&spec);
        let n = 2 * spec.length() + extra;
        let table = SequenceTable::with_terms(spec.clone(), n + 1);
        let probs = z_closed_form(&table, &catalog, n).unwrap();
        prop_assert!(probs.windows(2).all(|w| w[0] >= w[1]));
        let total = probs.iter().fold(plrs::BigRational::from_integer(0.into()), |acc, p| acc + p);
        prop_assert_eq!(total, plrs::BigRational::from_integer(1.into()));
        let s = plrs::BigRational::from_integer((spec.size() as i64).into());
        prop_assert!(&probs[0] * s >= plrs::BigRational::from_integer(1.into()));
    }

    #[test]
    fn parsed_strings_round_trip_through_text(spec in specs(), m in 1u64..=100_000) {
        let table = SequenceTable::with_terms(spec, 8);
        let d = decompose_u64(&table, m).unwrap();
        let again: Decomposition = d.to_string().parse().unwrap();
        prop_assert_eq!(again, d);
    }
}
