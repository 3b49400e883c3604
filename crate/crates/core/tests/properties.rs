use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stabevo::evolve::{cross, mutate_single_bit, CrossType};
use stabevo::genome::{encode, standard_form, CodeShape};
use stabevo::{BitVec, CodeGenotype};

fn shape_strategy() -> impl Strategy<Value = CodeShape> {
    (2usize..=10, any::<bool>(), any::<bool>(), any::<u64>()).prop_map(|(n, css, diag, salt)| {
        let k = 1 + (salt % (n as u64 - 1)) as usize;
        if css {
            CodeShape::css_default(n, k).unwrap()
        } else {
            let r = ((salt >> 8) % (n - k + 1) as u64) as usize;
            CodeShape::new(n, k, r).unwrap().with_m_diagonal(diag)
        }
    })
}

fn genotype_strategy() -> impl Strategy<Value = CodeGenotype> {
    shape_strategy().prop_flat_map(|shape| {
        proptest::collection::vec(any::<bool>(), shape.genotype_length())
            .prop_map(move |bits| CodeGenotype::new(shape, BitVec::from_bools(&bits)).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn every_genotype_is_a_code(g in genotype_strategy()) {
        let code = g.to_code();
        prop_assert!(code.check_invariants().is_ok());
        if g.shape.css {
            for row in code.s.rows_iter() {
                let n = g.shape.n;
                prop_assert!(!(row.any_in(0, n) && row.any_in(n, 2 * n)));
            }
        }
    }

    #[test]
    fn encode_inverts_decode(g in genotype_strategy()) {
        prop_assert_eq!(encode(&g.decode()).unwrap(), g);
    }

    #[test]
    fn hex_round_trip(g in genotype_strategy()) {
        prop_assert_eq!(CodeGenotype::from_hex(g.shape, &g.to_hex()).unwrap(), g);
    }

    #[test]
    fn standard_form_recovers_canonical_data(g in genotype_strategy()) {
        let canon = g.decode();
        let sf = standard_form(&g.to_code().s).unwrap();
        prop_assert_eq!(&sf.canonical.c, &canon.c);
        prop_assert_eq!(&sf.canonical.a, &canon.a);
        prop_assert_eq!(&sf.canonical.m, &canon.m);
    }

    #[test]
    fn single_bit_mutation(g in genotype_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let child = mutate_single_bit(&g, &mut rng);
        prop_assert_eq!(child.bits.hamming_distance(&g.bits), 1);
    }

    #[test]
    fn crossover_keeps_bits_per_position(a in genotype_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = CodeGenotype::random(a.shape, &mut rng);
        for kind in [CrossType::OnePoint, CrossType::TwoPoint, CrossType::ThreePoint, CrossType::Uniform, CrossType::HalfUniform] {
            let (c, d) = cross(&a, &b, kind, &mut rng).unwrap();
            for i in 0..a.len() {
                let mut pair = [c.bits.get(i), d.bits.get(i)];
                let mut orig = [a.bits.get(i), b.bits.get(i)];
                pair.sort();
                orig.sort();
                prop_assert_eq!(pair, orig);
            }
        }
    }
}
