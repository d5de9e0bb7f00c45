use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use forest_spectra::cli::{parse_input, Format, Mode};
use forest_spectra::graph::{count_forests, enumerate_forests, forest_sum, forest_sums_by_tree_count};
use forest_spectra::oracles::{cycle_cover_char_poly, perm_expansion_char_poly, perm_expansion_det};
use forest_spectra::tropical::{
    extreme_forests, newton_polygon, tropical_char_poly, AsymptoticScalar, ExpRate, ExponentialMarkovInput,
};
use forest_spectra::{
    build_augmented, char_poly, cofactor, determinant, diagonal_minor_det, AdjacencyMatrix, ForestQuery,
};

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn integer_matrix(max_n: usize) -> impl Strategy<Value = AdjacencyMatrix<Q>> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::collection::vec(-5i64..=5, n), n)
            .prop_map(|rows| AdjacencyMatrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(q).collect()).collect()).unwrap())
    })
}

fn rational_matrix(max_n: usize) -> impl Strategy<Value = AdjacencyMatrix<Q>> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::collection::vec((-9i64..=9, 1i64..=4), n), n).prop_map(|rows| {
            AdjacencyMatrix::from_rows(
                rows.into_iter().map(|r| r.into_iter().map(|(a, b)| Q::new(a.into(), b.into())).collect()).collect(),
            )
            .unwrap()
        })
    })
}

fn subgenerator(max_n: usize) -> impl Strategy<Value = AdjacencyMatrix<Q>> {
    (1..=max_n).prop_flat_map(|n| {
        (proptest::collection::vec(proptest::collection::vec(0i64..=3, n), n), proptest::collection::vec(0i64..=2, n))
            .prop_map(move |(rates, killing)| {
                let mut g = AdjacencyMatrix::from_fn(n, |i, j| if i == j { q(0) } else { q(rates[i][j]) });
                for i in 0..n {
                    let out: i64 = (0..n).filter(|&j| j != i).map(|j| rates[i][j]).sum();
                    g.set(i, i, q(-(out + killing[i])));
                }
                g
            })
    })
}

fn exponential_input(max_n: usize) -> impl Strategy<Value = ExponentialMarkovInput> {
    (1..=max_n).prop_flat_map(|n| {
        let arc = proptest::option::weighted(0.7, (0i64..=6, 1i64..=3));
        (proptest::collection::vec(arc.clone(), n * n), proptest::collection::vec(arc, n)).prop_map(move |(arcs, kill)| {
            let mut inp = ExponentialMarkovInput::new(n).unwrap();
            for (idx, a) in arcs.into_iter().enumerate() {
                let (i, j) = (idx / n, idx % n);
                if let (Some((v, m)), true) = (a, i != j) {
                    inp.set_rate(i, j, ExpRate::new(q(v), q(m)).unwrap()).unwrap();
                }
            }
            for (i, a) in kill.into_iter().enumerate() {
                if let Some((v, m)) = a {
                    inp.set_killing(i, ExpRate::new(q(v), q(m)).unwrap()).unwrap();
                }
            }
            inp
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn char_poly_matches_both_oracles(g in rational_matrix(5)) {
        let forest = char_poly(&g);
        prop_assert_eq!(&forest, &cycle_cover_char_poly(&g));
        prop_assert_eq!(&forest, &perm_expansion_char_poly(&g).unwrap());
    }

    #[test]
    fn minors_match_struck_determinants(g in integer_matrix(5), mask in 0u32..32) {
        let n = g.n();
        let struck: BTreeSet<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        let reduced: Vec<usize> = struck.iter().copied().collect();
        let want = g.strike(&reduced).map_or_else(Q::one, |m| perm_expansion_det(&m).unwrap());
        prop_assert_eq!(diagonal_minor_det(&g, &struck).unwrap(), want);
    }

    #[test]
    fn laplace_expansion_along_rows_and_columns(g in rational_matrix(5), line in 0usize..5) {
        let n = g.n();
        let line = line % n;
        let det = determinant(&g);
        let by_row = (0..n).fold(Q::zero(), |acc, m| acc + g.get(line, m).clone() * cofactor(&g, line, m).unwrap());
        let by_col = (0..n).fold(Q::zero(), |acc, r| acc + g.get(r, line).clone() * cofactor(&g, r, line).unwrap());
        prop_assert_eq!(&by_row, &det);
        prop_assert_eq!(&by_col, &det);
    }

    #[test]
    fn cofactor_rows_are_orthogonal_to_other_rows(g in integer_matrix(5), a in 0usize..5, b in 0usize..5) {
        let n = g.n();
        let (a, b) = (a % n, b % n);
        prop_assume!(a != b);
        let mixed = (0..n).fold(Q::zero(), |acc, m| acc + g.get(a, m).clone() * cofactor(&g, b, m).unwrap());
        prop_assert!(mixed.is_zero());
    }

    #[test]
    fn paths_partition_single_tree_forests(g in integer_matrix(5), roots in 1u32..32, start in 0usize..5) {
        // every non-root vertex drains into exactly one root
        let n = g.n();
        let h = build_augmented(&g);
        let w: Vec<usize> = std::iter::once(n).chain((0..n).filter(|v| roots >> v & 1 == 1)).collect();
        let start = start % n;
        prop_assume!(!w.contains(&start));
        let all = ForestQuery::rooted_at(w.iter().copied()).with_extra_trees(0);
        let total = count_forests(h.graph(), &all).unwrap();
        let split: u64 = w.iter().map(|&r| count_forests(h.graph(), &all.clone().with_path(start, r)).unwrap()).sum();
        prop_assert_eq!(total, split);
        let weight = forest_sum(h.graph(), &all).unwrap();
        let split_weight = w.iter().fold(Q::zero(), |acc, &r| acc + forest_sum(h.graph(), &all.clone().with_path(start, r)).unwrap());
        prop_assert_eq!(weight, split_weight);
    }

    #[test]
    fn parallel_sums_equal_sequential_enumeration(g in integer_matrix(5)) {
        let n = g.n();
        let h = build_augmented(&g);
        let query = ForestQuery::rooted_at([n]);
        let parallel = forest_sums_by_tree_count(h.graph(), &query).unwrap();
        prop_assert_eq!(&parallel, &forest_sums_by_tree_count(h.graph(), &query).unwrap());
        let mut sequential = vec![Q::zero(); n + 2];
        for f in enumerate_forests(h.graph(), &query).unwrap() {
            sequential[f.tree_count()] += f.productivity(h.graph()).unwrap();
        }
        prop_assert_eq!(parallel, sequential);
    }

    #[test]
    fn subgenerator_coefficients_are_nonnegative(g in subgenerator(5)) {
        for c in char_poly(&g).coeffs() {
            prop_assert!(!c.is_negative());
        }
    }

    #[test]
    fn tropical_coefficients_equal_explicit_minima(inp in exponential_input(4)) {
        let poly = tropical_char_poly(&inp);
        for k in 0..=inp.n() {
            let ex = extreme_forests(&inp, k).unwrap();
            let c = poly.coeff(k);
            prop_assert_eq!(ex.order.as_ref(), c.order());
            if ex.order.is_some() {
                prop_assert_eq!(&ex.prefactor, c.prefactor());
            }
        }
        prop_assert_eq!(poly.coeff(inp.n()), AsymptoticScalar::one());
    }

    #[test]
    fn hull_slopes_never_increase(inp in exponential_input(4)) {
        let polygon = newton_polygon(tropical_char_poly(&inp).coeffs());
        for pair in polygon.segments.windows(2) {
            prop_assert!(pair[0].slope > pair[1].slope);
        }
    }

    #[test]
    fn finite_epsilon_coefficients_follow_orders(inp in exponential_input(4)) {
        let poly = tropical_char_poly(&inp);
        let at = |eps: f64| {
            let h = inp.realize_augmented(eps).unwrap();
            forest_spectra::calculus::char_poly_augmented(&h).unwrap().into_coeffs()
        };
        let (e1, e2) = (0.1, 0.05);
        let (c1, c2) = (at(e1), at(e2));
        for k in 0..=inp.n() {
            let Some(order) = poly.coeff(k).order().cloned() else {
                prop_assert_eq!(c1[k], 0.0);
                continue;
            };
            let v = forest_spectra::scalar::rational_to_f64(&order);
            let (y1, y2) = (-e1 * c1[k].ln(), -e2 * c2[k].ln());
            let intercept = y2 - (y1 - y2) / (e1 - e2) * e2;
            prop_assert!((intercept - v).abs() <= 0.05 * v.max(1.0), "k={} intercept {} order {}", k, intercept, v);
        }
    }

    #[test]
    fn exact_echo_round_trips(g in rational_matrix(4)) {
        let text = serde_json::json!({
            "entries": g.rows().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()
        }).to_string();
        let parsed = parse_input(&text, Format::Json, Mode::Exact).unwrap();
        let again = parse_input(&parsed.echo().to_string(), Format::Json, Mode::Exact).unwrap();
        prop_assert_eq!(parsed, again);
    }

    #[test]
    fn float_echo_round_trips(rows in proptest::collection::vec(proptest::collection::vec(-1e6f64..1e6, 3), 3)) {
        let text = serde_json::json!({ "entries": rows }).to_string();
        let parsed = parse_input(&text, Format::Json, Mode::Float).unwrap();
        let again = parse_input(&parsed.echo().to_string(), Format::Json, Mode::Float).unwrap();
        prop_assert_eq!(parsed, again);
    }
}
