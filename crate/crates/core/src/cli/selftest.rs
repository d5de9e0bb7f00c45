//! Oracle equivalence on seeded random integer matrices.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{CliError, TaskOutput, TaskRequest, EXIT_COMPUTATION};
use crate::calculus::{char_poly, cofactor, determinant, diagonal_minor_det, kirchhoff_char_poly, kirchhoff_matrix};
use crate::matrix::AdjacencyMatrix;
use crate::oracles::{cycle_cover_char_poly, perm_expansion_char_poly, perm_expansion_det};

const MAX_N: usize = 6;
const ENTRY_RANGE: std::ops::RangeInclusive<i64> = -5..=5;

pub fn random_integer_matrix(rng: &mut impl Rng, n: usize) -> AdjacencyMatrix<BigRational> {
    AdjacencyMatrix::from_fn(n, |_, _| BigRational::from_integer(rng.random_range(ENTRY_RANGE).into()))
}

#[derive(Default)]
struct Tally {
    passed: u64,
    failed: u64,
    first_failure: Option<Value>,
}

impl Tally {
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            self.first_failure.get_or_insert_with(witness);
        }
    }

    fn to_json(&self, name: &str) -> Value {
        json!({ "name": name, "passed": self.passed, "failed": self.failed, "first_failure": self.first_failure })
    }
}

fn matrix_json(g: &AdjacencyMatrix<BigRational>) -> Value {
    json!(g.rows().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

pub(super) fn run(req: &TaskRequest) -> Result<TaskOutput, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let names = ["charpoly_vs_cycle_cover", "charpoly_vs_permutations", "det", "diagonal_minors", "laplace_expansion", "kirchhoff"];
    let mut tallies: Vec<Tally> = names.iter().map(|_| Tally::default()).collect();
    for _ in 0..req.samples {
        let n = rng.random_range(1..=MAX_N);
        let g = random_integer_matrix(&mut rng, n);
        let witness = || matrix_json(&g);

        let forest = char_poly(&g);
        tallies[0].record(forest == cycle_cover_char_poly(&g), witness);
        tallies[1].record(Ok(&forest) == perm_expansion_char_poly(&g).as_ref(), witness);

        let det = determinant(&g);
        tallies[2].record(Ok(&det) == perm_expansion_det(&g).as_ref(), witness);

        let minors_ok = (0u32..1 << n).all(|mask| {
            let struck: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let reduced: Vec<usize> = struck.iter().copied().collect();
            let want = g.strike(&reduced).map_or_else(
                || BigRational::from_integer(1.into()),
                |m| perm_expansion_det(&m).expect("n is within the permutation limit"),
            );
            diagonal_minor_det(&g, &struck).ok() == Some(want)
        });
        tallies[3].record(minors_ok, witness);

        let laplace_ok = (0..n).all(|row| {
            let expansion = (0..n).try_fold(BigRational::zero(), |acc, col| {
                cofactor(&g, row, col).map(|c| acc + g.get(row, col).clone() * c)
            });
            expansion.ok() == Some(det.clone())
        });
        tallies[4].record(laplace_ok, witness);

        let kirchhoff = kirchhoff_char_poly(&g);
        let kirchhoff_ok = Ok(&kirchhoff) == perm_expansion_char_poly(&kirchhoff_matrix(&g)).as_ref()
            && kirchhoff.coeff(0).is_zero();
        tallies[5].record(kirchhoff_ok, witness);
    }
    let all_passed = tallies.iter().all(|t| t.failed == 0);
    let mut out = TaskOutput::new(json!({
        "seed": req.seed,
        "matrices": req.samples,
        "max_n": MAX_N,
        "checks": names.iter().zip(&tallies).map(|(name, t)| t.to_json(name)).collect::<Vec<_>>(),
        "all_passed": all_passed,
    }));
    if !all_passed {
        out.exit_code = EXIT_COMPUTATION;
        out.warnings.push("forest sums disagree with an oracle; see first_failure".into());
    }
    Ok(out)
}
