use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use realbrauer::cochain::CochainComplex;
use realbrauer::coefficients::RealCoefficient;
use realbrauer::cohomology::cohomology;
use realbrauer::groupoid::{FiniteGroup, RealGroup, RealGroupoid};
use realbrauer::linalg::{Lattice, Matrix};
use realbrauer::oracle::{brute_force_cohomology, DEFAULT_BUDGET};
use realbrauer::types::{classify_type, graded_tensor, random_even_unitary, reference_model, TypeIndex};

fn cyclic_real_group(order: usize, inversion: bool) -> RealGroupoid {
    let g = FiniteGroup::cyclic(order).unwrap();
    let rg = if inversion {
        RealGroup::inversion(g).unwrap()
    } else {
        RealGroup::trivial(g)
    };
    RealGroupoid::from_group(&rg).unwrap()
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..10, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermite_basis_spans_the_same_lattice(rows in small_matrix()) {
        let gens = Matrix::from_rows(&rows);
        let l = Lattice::span(&gens).unwrap();
        let back = Lattice::span(l.basis()).unwrap();
        for c in gens.columns() {
            prop_assert!(l.contains(&c).unwrap());
        }
        for c in l.basis().columns() {
            prop_assert!(l.contains(&c).unwrap());
        }
        prop_assert_eq!(back.basis().columns(), l.basis().columns());
        prop_assert!(l.pivots().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn smith_path_matches_brute_force_on_cyclic_groups(
        order in 1usize..7,
        inversion: bool,
        modulus in 2u64..6,
        sign in prop::sample::select(vec![1i64, -1]),
        n in 0usize..3,
    ) {
        let g = cyclic_real_group(order, inversion);
        let a = RealCoefficient::zm(modulus, sign).unwrap();
        let h = cohomology(&g, n, &a).unwrap();
        let b = brute_force_cohomology(&g, n, &a, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(h.as_discrete(), Some(&b));
    }

    #[test]
    fn differentials_square_to_zero(order in 1usize..6, inversion: bool, modulus in 0u64..5, sign in prop::sample::select(vec![1i64, -1])) {
        let g = cyclic_real_group(order, inversion);
        let a = if modulus < 2 { RealCoefficient::parse(if sign > 0 { "Z" } else { "Z(0,1)" }).unwrap() } else { RealCoefficient::zm(modulus, sign).unwrap() };
        let cx = CochainComplex::new(&g, &a, 3).unwrap();
        for k in 0..2 {
            prop_assert!(cx.differential(k + 1).compose(cx.differential(k)).unwrap().is_zero());
        }
    }

    #[test]
    fn types_add_under_rephasing_and_conjugation(p in 0i64..8, q in 0i64..8, theta in 0.0f64..std::f64::consts::TAU, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = reference_model(TypeIndex::new(p)).rephased(theta);
        let w = random_even_unitary(a.grading(), &mut rng);
        let a = a.conjugate_by(&w).unwrap();
        let t = graded_tensor(&a, &reference_model(TypeIndex::new(q))).unwrap();
        prop_assert_eq!(classify_type(&t).unwrap(), TypeIndex::new(p + q));
    }
}
