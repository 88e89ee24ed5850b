//! Post-processing: turn the ordered SIGMA list and the Subs pointers into
//! a final substitution in linear time.
//!
//! Results are memoized per node in a ready table, and instantiated
//! compound terms are interned back into the DAG so the output keeps
//! maximal sharing. A variable re-entered while its own binding is still
//! being explored is a self-referential binding: the published main phase
//! can hand one over, and without the guard the walk would never return.
//! The guard reports it instead of looping.

use std::collections::{HashMap, HashSet};

use crate::term::{NodeId, TermDag};

/// Ordered variable bindings; variables bound to themselves are omitted.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Substitution {
    /// `(variable, term)` pairs in SIGMA order.
    pub bindings: Vec<(NodeId, NodeId)>,
}

impl Substitution {
    pub fn lookup(&self, var: NodeId) -> Option<NodeId> {
        self.bindings
            .iter()
            .find(|(v, _)| *v == var)
            .map(|&(_, t)| t)
    }
}

/// One recorded call of the builder, in execution order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigmaCall {
    BuildSigma,
    ExploreVariable(NodeId),
    Descend(Option<NodeId>),
    ExploreArguments(Vec<NodeId>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigmaFailure {
    /// A binding reaches back into the variable being explored.
    CycleDetected(NodeId),
    BudgetExceeded,
}

pub struct BuildReport {
    pub result: Result<Substitution, SigmaFailure>,
    pub steps: u64,
    pub calls: Vec<SigmaCall>,
}

struct Tables {
    ready: HashMap<NodeId, NodeId>,
    in_progress: HashSet<NodeId>,
    calls: Vec<SigmaCall>,
    steps: u64,
    budget: u64,
}

impl Tables {
    fn bump(&mut self) -> Result<(), SigmaFailure> {
        self.steps += 1;
        if self.steps > self.budget {
            Err(SigmaFailure::BudgetExceeded)
        } else {
            Ok(())
        }
    }
}

enum Frame {
    VarEnter(NodeId),
    /// Finalize a variable once the descend of its binding has produced
    /// a value.
    VarExit(NodeId),
    Descend(Option<NodeId>),
    /// Argument walk over a compound node; `new_args` collects descend
    /// results one child at a time.
    Args {
        node: NodeId,
        index: usize,
        new_args: Vec<NodeId>,
    },
}

/// Build the substitution for `sigma` (in order), reading main-phase
/// bindings through `subs`. `steps` continues the solver's counter so the
/// budget spans the whole solve.
pub fn build_sigma(
    dag: &mut TermDag,
    sigma: &[NodeId],
    subs: impl Fn(NodeId) -> Option<NodeId>,
    steps: u64,
    budget: u64,
) -> BuildReport {
    let mut tables = Tables {
        ready: HashMap::new(),
        in_progress: HashSet::new(),
        calls: Vec::new(),
        steps,
        budget,
    };
    tables.calls.push(SigmaCall::BuildSigma);
    let mut bindings = Vec::new();
    for &var in sigma {
        match explore_variable(dag, &mut tables, &subs, var) {
            Ok(term) => {
                if term != var {
                    bindings.push((var, term));
                }
            }
            Err(failure) => {
                return BuildReport {
                    result: Err(failure),
                    steps: tables.steps,
                    calls: tables.calls,
                };
            }
        }
    }
    BuildReport {
        result: Ok(Substitution { bindings }),
        steps: tables.steps,
        calls: tables.calls,
    }
}

/// The mutually recursive explore/descend walk, run on an explicit stack
/// so binding chains as deep as the input never exhaust the call stack.
fn explore_variable(
    dag: &mut TermDag,
    tables: &mut Tables,
    subs: &impl Fn(NodeId) -> Option<NodeId>,
    var: NodeId,
) -> Result<NodeId, SigmaFailure> {
    let mut frames = vec![Frame::VarEnter(var)];
    // Each completed frame pushes its value here; None is the NIL result
    // of descending an absent binding.
    let mut values: Vec<Option<NodeId>> = Vec::new();

    while let Some(frame) = frames.pop() {
        match frame {
            Frame::VarEnter(x) => {
                tables.calls.push(SigmaCall::ExploreVariable(x));
                tables.bump()?;
                if tables.in_progress.contains(&x) {
                    return Err(SigmaFailure::CycleDetected(x));
                }
                if let Some(&out) = tables.ready.get(&x) {
                    values.push(Some(out));
                } else {
                    tables.in_progress.insert(x);
                    frames.push(Frame::VarExit(x));
                    frames.push(Frame::Descend(subs(x)));
                }
            }
            Frame::VarExit(x) => {
                let out = values.pop().expect("descend result").unwrap_or(x);
                tables.ready.insert(x, out);
                tables.in_progress.remove(&x);
                values.push(Some(out));
            }
            Frame::Descend(u) => {
                tables.calls.push(SigmaCall::Descend(u));
                tables.bump()?;
                match u {
                    None => values.push(None),
                    Some(u) => {
                        if dag.is_variable(u) {
                            frames.push(Frame::VarEnter(u));
                        } else if dag.symbol(u).arity == 0 {
                            values.push(Some(u));
                        } else if let Some(&out) = tables.ready.get(&u) {
                            values.push(Some(out));
                        } else {
                            let args = dag.node(u).children.clone();
                            tables.calls.push(SigmaCall::ExploreArguments(args));
                            frames.push(Frame::Args {
                                node: u,
                                index: 0,
                                new_args: Vec::new(),
                            });
                        }
                    }
                }
            }
            Frame::Args {
                node,
                index,
                mut new_args,
            } => {
                tables.bump()?;
                if index > 0 {
                    let arg = values.pop().expect("argument result");
                    new_args.push(arg.expect("arguments are never NIL"));
                }
                let children = &dag.node(node).children;
                if index < children.len() {
                    let next = children[index];
                    frames.push(Frame::Args {
                        node,
                        index: index + 1,
                        new_args,
                    });
                    frames.push(Frame::Descend(Some(next)));
                } else {
                    // Unchanged argument list (element-wise node identity)
                    // keeps the original node; otherwise the new term is
                    // interned with the same head symbol.
                    let out = if new_args == *children {
                        node
                    } else {
                        let symbol = dag.symbol(node).clone();
                        dag.intern_node(symbol, new_args)
                            .expect("head symbol arity is unchanged")
                    };
                    tables.ready.insert(node, out);
                    values.push(Some(out));
                }
            }
        }
    }

    Ok(values.pop().expect("variable result").expect("variables are never NIL"))
}
