//! Generator families for the step-count benchmarks.

use crate::parse::TermAst;

fn var(i: usize) -> TermAst {
    TermAst::Var(format!("X{}", i))
}

/// Chain family: `g(X0,...,X_{n-1})` vs `g(f(X1),...,f(Xn))`, i.e. the
/// equations X_i = f(X_{i+1}) folded into one wide pair. The instantiated
/// binding of X0 is a depth-n term.
pub fn chain(n: usize) -> (TermAst, TermAst) {
    assert!(n >= 1, "family size must be at least 1");
    let left = TermAst::App("g".into(), (0..n).map(var).collect());
    let right = TermAst::App(
        "g".into(),
        (1..=n)
            .map(|i| TermAst::App("f".into(), vec![var(i)]))
            .collect(),
    );
    (left, right)
}

/// Sharing family: `p(X1,...,Xn)` vs
/// `p(f(X0,X0), f(X1,X1), ..., f(X_{n-1},X_{n-1}))`. The solved form of
/// X_n has 2^(n+1) - 1 symbols but only linearly many DAG nodes.
pub fn sharing(n: usize) -> (TermAst, TermAst) {
    assert!(n >= 1, "family size must be at least 1");
    let left = TermAst::App("p".into(), (1..=n).map(var).collect());
    let right = TermAst::App(
        "p".into(),
        (0..n)
            .map(|i| TermAst::App("f".into(), vec![var(i), var(i)]))
            .collect(),
    );
    (left, right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{solve, Outcome, SolveConfig, Variant};
    use crate::term::TermDag;

    fn solve_family((a, b): (TermAst, TermAst)) -> (TermDag, Outcome) {
        let mut dag = TermDag::new();
        let u = dag.intern(&a).unwrap();
        let v = dag.intern(&b).unwrap();
        let report = solve(&mut dag, u, v, &SolveConfig::new(Variant::Fixed));
        (dag, report.outcome)
    }

    #[test]
    fn chain_smallest_instance_unifies() {
        let (_, outcome) = solve_family(chain(1));
        assert!(matches!(outcome, Outcome::Unified(_)));
    }

    #[test]
    fn chain_binds_every_left_variable() {
        let (_, outcome) = solve_family(chain(5));
        match outcome {
            Outcome::Unified(s) => assert_eq!(s.bindings.len(), 5),
            other => panic!("expected Unified, got {:?}", other),
        }
    }

    #[test]
    fn sharing_small_instance_unifies() {
        let (_, outcome) = solve_family(sharing(4));
        match outcome {
            Outcome::Unified(s) => assert_eq!(s.bindings.len(), 4),
            other => panic!("expected Unified, got {:?}", other),
        }
    }
}
