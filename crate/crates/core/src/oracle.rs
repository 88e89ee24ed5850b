//! Brute-force Robinson unification over plain trees.
//!
//! Deliberately unshared and eager: it is the independent ground truth the
//! linear engine is checked against at desk scale, and its exponential
//! blow-up on the sharing family is part of the contrast.

use std::collections::BTreeMap;
use std::fmt;

use crate::parse::TermAst;
use crate::term::{NodeId, TermDag};

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum SimpleTerm {
    Var(String),
    App(String, Vec<SimpleTerm>),
}

impl SimpleTerm {
    pub fn var(name: &str) -> Self {
        SimpleTerm::Var(name.to_string())
    }

    pub fn app(name: &str, args: Vec<SimpleTerm>) -> Self {
        SimpleTerm::App(name.to_string(), args)
    }

    pub fn from_ast(ast: &TermAst) -> Self {
        match ast {
            TermAst::Var(name) => SimpleTerm::Var(name.clone()),
            TermAst::App(name, args) => SimpleTerm::App(
                name.clone(),
                args.iter().map(SimpleTerm::from_ast).collect(),
            ),
        }
    }

    /// Expand a DAG node into an unshared tree. Desk scale only.
    pub fn from_dag(dag: &TermDag, id: NodeId) -> Self {
        let node = dag.node(id);
        if node.symbol.is_variable() {
            SimpleTerm::Var(node.symbol.name.clone())
        } else {
            SimpleTerm::App(
                node.symbol.name.clone(),
                node.children
                    .iter()
                    .map(|&c| SimpleTerm::from_dag(dag, c))
                    .collect(),
            )
        }
    }
}

impl fmt::Display for SimpleTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleTerm::Var(name) => write!(f, "{}", name),
            SimpleTerm::App(name, args) => {
                write!(f, "{}", name)?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, arg) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{}", arg)?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

pub type Unifier = BTreeMap<String, SimpleTerm>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    Unifier(Unifier),
    Clash,
    Cycle,
}

impl OracleOutcome {
    pub fn is_unifiable(&self) -> bool {
        matches!(self, OracleOutcome::Unifier(_))
    }
}

fn occurs(var: &str, term: &SimpleTerm) -> bool {
    match term {
        SimpleTerm::Var(name) => name == var,
        SimpleTerm::App(_, args) => args.iter().any(|a| occurs(var, a)),
    }
}

/// Simultaneous replacement of bound variables. Oracle unifiers are
/// idempotent, so one pass suffices.
pub fn apply(subst: &Unifier, term: &SimpleTerm) -> SimpleTerm {
    match term {
        SimpleTerm::Var(name) => subst.get(name).cloned().unwrap_or_else(|| term.clone()),
        SimpleTerm::App(name, args) => SimpleTerm::App(
            name.clone(),
            args.iter().map(|a| apply(subst, a)).collect(),
        ),
    }
}

fn bind(var: &str, term: &SimpleTerm, subst: &mut Unifier) -> Result<(), OracleOutcome> {
    if let SimpleTerm::Var(name) = term {
        if name == var {
            return Ok(());
        }
    }
    if occurs(var, term) {
        return Err(OracleOutcome::Cycle);
    }
    let single: Unifier = [(var.to_string(), term.clone())].into_iter().collect();
    for value in subst.values_mut() {
        *value = apply(&single, value);
    }
    subst.insert(var.to_string(), term.clone());
    Ok(())
}

fn unify_into(a: &SimpleTerm, b: &SimpleTerm, subst: &mut Unifier) -> Result<(), OracleOutcome> {
    let a = apply(subst, a);
    let b = apply(subst, b);
    match (&a, &b) {
        (SimpleTerm::Var(x), SimpleTerm::Var(y)) if x == y => Ok(()),
        (SimpleTerm::Var(x), t) => bind(x, t, subst),
        (t, SimpleTerm::Var(x)) => bind(x, t, subst),
        (SimpleTerm::App(f, fargs), SimpleTerm::App(g, gargs)) => {
            if f != g || fargs.len() != gargs.len() {
                return Err(OracleOutcome::Clash);
            }
            for (fa, ga) in fargs.iter().zip(gargs) {
                unify_into(fa, ga, subst)?;
            }
            Ok(())
        }
    }
}

/// Textbook recursive unification with an eager occurs check; returns an
/// idempotent most general unifier.
pub fn robinson_unify(a: &SimpleTerm, b: &SimpleTerm) -> OracleOutcome {
    let mut subst = Unifier::new();
    match unify_into(a, b, &mut subst) {
        Ok(()) => OracleOutcome::Unifier(subst),
        Err(failure) => failure,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("substitution does not unify the input pair")]
pub struct PreconditionViolation;

fn match_renaming(
    a: &SimpleTerm,
    b: &SimpleTerm,
    fwd: &mut BTreeMap<String, String>,
    bwd: &mut BTreeMap<String, String>,
) -> bool {
    match (a, b) {
        (SimpleTerm::Var(x), SimpleTerm::Var(y)) => {
            let f_ok = match fwd.get(x) {
                Some(mapped) => mapped == y,
                None => {
                    fwd.insert(x.clone(), y.clone());
                    true
                }
            };
            let b_ok = match bwd.get(y) {
                Some(mapped) => mapped == x,
                None => {
                    bwd.insert(y.clone(), x.clone());
                    true
                }
            };
            f_ok && b_ok
        }
        (SimpleTerm::App(f, fargs), SimpleTerm::App(g, gargs)) => {
            f == g
                && fargs.len() == gargs.len()
                && fargs
                    .iter()
                    .zip(gargs)
                    .all(|(fa, ga)| match_renaming(fa, ga, fwd, bwd))
        }
        _ => false,
    }
}

/// True iff the two unifiers produce the same instances of `a` and `b` up
/// to one consistent variable renaming (so each mgu is an instance of the
/// other).
pub fn mgu_equivalent(
    s1: &Unifier,
    s2: &Unifier,
    a: &SimpleTerm,
    b: &SimpleTerm,
) -> Result<bool, PreconditionViolation> {
    for s in [s1, s2] {
        if apply(s, a) != apply(s, b) {
            return Err(PreconditionViolation);
        }
    }
    let mut fwd = BTreeMap::new();
    let mut bwd = BTreeMap::new();
    let ok = match_renaming(&apply(s1, a), &apply(s2, a), &mut fwd, &mut bwd)
        && match_renaming(&apply(s1, b), &apply(s2, b), &mut fwd, &mut bwd);
    Ok(ok)
}

/// Engine substitution as an oracle-side map, with bound terms expanded
/// into trees. Desk scale only.
pub fn engine_unifier(dag: &TermDag, subst: &crate::sigma::Substitution) -> Unifier {
    subst
        .bindings
        .iter()
        .map(|&(var, term)| {
            (
                dag.symbol(var).name.clone(),
                SimpleTerm::from_dag(dag, term),
            )
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Agreement {
    Agree,
    Disagree(String),
}

/// Differential check of an engine outcome against the Robinson oracle on
/// the same input pair. Unifiability verdicts must match; when both sides
/// unify, the two substitutions must be equivalent up to renaming.
/// Failure tags (clash vs cycle) are not compared: an input can contain
/// both, and the two algorithms may report them in either order.
pub fn check_against_oracle(
    dag: &TermDag,
    outcome: &crate::engine::Outcome,
    a: &SimpleTerm,
    b: &SimpleTerm,
) -> Agreement {
    use crate::engine::Outcome;
    let oracle = robinson_unify(a, b);
    match (outcome, &oracle) {
        (Outcome::Unified(subst), OracleOutcome::Unifier(oracle_unifier)) => {
            let engine = engine_unifier(dag, subst);
            match mgu_equivalent(&engine, oracle_unifier, a, b) {
                Ok(true) => Agreement::Agree,
                Ok(false) => Agreement::Disagree("unifiers are not renaming-equivalent".into()),
                Err(PreconditionViolation) => {
                    Agreement::Disagree("engine substitution does not unify the pair".into())
                }
            }
        }
        (Outcome::Unified(_), _) => {
            Agreement::Disagree("engine unified but the oracle rejects".into())
        }
        (Outcome::Clash(_, _) | Outcome::Cycle(_), OracleOutcome::Unifier(_)) => {
            Agreement::Disagree("engine rejected but the oracle unifies".into())
        }
        (Outcome::Clash(_, _) | Outcome::Cycle(_), _) => Agreement::Agree,
        (Outcome::NonTermination { .. }, _) => {
            Agreement::Disagree("engine did not terminate".into())
        }
    }
}
