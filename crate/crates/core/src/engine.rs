//! The main unification phase over the shared term DAG.
//!
//! `solve` links the two roots, then drives `finish` over every function
//! node and every variable node in ascending-id order, and finally hands
//! the collected SIGMA list to the substitution builder. Two variants are
//! supported: the published one, which marks the popped node complete on
//! every loop iteration (including when it is the root, which lets the
//! occurs check slip through), and the fixed one, which marks it complete
//! only when it differs from the root.

use crate::sigma::{self, SigmaCall, SigmaFailure, Substitution};
use crate::term::{NodeId, SymbolKind, TermDag};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variant {
    /// The formulation as printed: completion is unconditional, so the
    /// root's own pop never leaves it incomplete and the occurs check can
    /// be bypassed.
    PublishedBuggy,
    /// Completion moved inside the `s != r` branch.
    Fixed,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Phase {
    Main,
    BuildSigma,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Unified(Substitution),
    /// Incompatible function symbols met in one equivalence class.
    Clash(NodeId, NodeId),
    /// Occurs-check violation (a node was reached under a second root).
    Cycle(NodeId),
    /// The step budget ran out, or the substitution builder detected a
    /// self-referential binding.
    NonTermination { phase: Phase, steps: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    LinkCreated(NodeId, NodeId),
    PointerSet(NodeId, NodeId),
    Pushed(NodeId),
    Popped(NodeId),
    SubsSet(NodeId, NodeId),
    SigmaAdded(NodeId),
    CompleteSet(NodeId),
    FinishEnter(NodeId),
    FinishExit(NodeId),
    ChildLinksCreated(NodeId, NodeId),
}

/// One event per line, tab-separated: `EVENTKIND<TAB>node[<TAB>node]`.
pub fn render_trace_line(dag: &TermDag, event: &TraceEvent) -> String {
    let one = |kind: &str, a: &NodeId| format!("{}\t{}", kind, dag.display_node(*a));
    let two = |kind: &str, a: &NodeId, b: &NodeId| {
        format!("{}\t{}\t{}", kind, dag.display_node(*a), dag.display_node(*b))
    };
    match event {
        TraceEvent::LinkCreated(a, b) => two("LINK", a, b),
        TraceEvent::PointerSet(a, b) => two("PTR", a, b),
        TraceEvent::Pushed(a) => one("PUSH", a),
        TraceEvent::Popped(a) => one("POP", a),
        TraceEvent::SubsSet(a, b) => two("SUBS", a, b),
        TraceEvent::SigmaAdded(a) => one("SIGMA", a),
        TraceEvent::CompleteSet(a) => one("DONE", a),
        TraceEvent::FinishEnter(a) => one("ENTER", a),
        TraceEvent::FinishExit(a) => one("EXIT", a),
        TraceEvent::ChildLinksCreated(a, b) => two("SONS", a, b),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveConfig {
    pub variant: Variant,
    /// Step budget; defaults to `100 * (node count + 1)`.
    pub budget: Option<u64>,
    pub trace: bool,
}

impl SolveConfig {
    pub fn new(variant: Variant) -> Self {
        SolveConfig {
            variant,
            budget: None,
            trace: false,
        }
    }

    pub fn with_trace(mut self, trace: bool) -> Self {
        self.trace = trace;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = Some(budget);
        self
    }
}

pub fn default_budget(node_count: usize) -> u64 {
    100 * (node_count as u64 + 1)
}

/// Everything a solve produced, beyond the verdict: the trace, the step
/// count, the main-phase SIGMA/Subs snapshot, and the call log of the
/// substitution builder.
#[derive(Debug)]
pub struct SolveReport {
    pub outcome: Outcome,
    pub trace: Vec<TraceEvent>,
    pub steps: u64,
    pub links_created: u64,
    pub sigma: Vec<NodeId>,
    pub subs: Vec<(NodeId, NodeId)>,
    pub sigma_calls: Vec<SigmaCall>,
}

enum Failure {
    Clash(NodeId, NodeId),
    Cycle(NodeId),
    Budget,
}

/// Per-solve mutable state, held outside the DAG.
struct Engine {
    links: Vec<Vec<NodeId>>,
    pointer: Vec<Option<NodeId>>,
    complete: Vec<bool>,
    subs: Vec<Option<NodeId>>,
    sigma: Vec<NodeId>,
    steps: u64,
    budget: u64,
    links_created: u64,
    trace: Option<Vec<TraceEvent>>,
    variant: Variant,
    // Monotone scan cursors for node selection; completion never reverts,
    // so skipped prefixes never need revisiting.
    next_function: usize,
    next_variable: usize,
}

#[derive(Clone, Copy)]
enum FrameState {
    Enter,
    PopNext,
    Parents { s: NodeId, index: usize },
}

/// One `finish` activation: its root, its own pushdown stack, and where
/// it is in the iteration.
struct Frame {
    root: NodeId,
    stack: Vec<NodeId>,
    state: FrameState,
}

impl Frame {
    fn enter(root: NodeId) -> Self {
        Frame {
            root,
            stack: Vec::new(),
            state: FrameState::Enter,
        }
    }
}

impl Engine {
    fn new(node_count: usize, variant: Variant, budget: u64, trace: bool) -> Self {
        Engine {
            links: vec![Vec::new(); node_count],
            pointer: vec![None; node_count],
            complete: vec![false; node_count],
            subs: vec![None; node_count],
            sigma: Vec::new(),
            steps: 0,
            budget,
            links_created: 0,
            trace: trace.then(Vec::new),
            variant,
            next_function: 0,
            next_variable: 0,
        }
    }

    fn record(&mut self, event: TraceEvent) {
        if let Some(trace) = &mut self.trace {
            trace.push(event);
        }
    }

    fn bump(&mut self) -> Result<(), Failure> {
        self.steps += 1;
        if self.steps > self.budget {
            Err(Failure::Budget)
        } else {
            Ok(())
        }
    }

    fn create_link(&mut self, s: NodeId, t: NodeId) {
        self.steps += 1;
        self.links_created += 1;
        self.links[s.index()].push(t);
        self.links[t.index()].push(s);
        self.record(TraceEvent::LinkCreated(s, t));
    }

    fn set_pointer(&mut self, node: NodeId, target: NodeId) {
        debug_assert!(self.pointer[node.index()].is_none());
        self.steps += 1;
        self.pointer[node.index()] = Some(target);
        self.record(TraceEvent::PointerSet(node, target));
    }

    fn set_complete(&mut self, node: NodeId) {
        self.complete[node.index()] = true;
        self.record(TraceEvent::CompleteSet(node));
    }

    /// Lowest-id incomplete node of the requested kind, if any.
    fn select_next(&mut self, dag: &TermDag, kind: SymbolKind) -> Option<NodeId> {
        let cursor = match kind {
            SymbolKind::Function => &mut self.next_function,
            SymbolKind::Variable => &mut self.next_variable,
        };
        while *cursor < self.complete.len() {
            let id = NodeId(*cursor as u32);
            if !self.complete[*cursor] && dag.symbol(id).kind == kind {
                return Some(id);
            }
            *cursor += 1;
        }
        None
    }

    fn clashes(&self, dag: &TermDag, r: NodeId, s: NodeId) -> bool {
        let rs = dag.symbol(r);
        let ss = dag.symbol(s);
        // A variable has no function symbol and is compatible with anything.
        rs.kind == SymbolKind::Function
            && ss.kind == SymbolKind::Function
            && (rs.name != ss.name || rs.arity != ss.arity)
    }

    fn finish(&mut self, dag: &TermDag, root: NodeId) -> Result<(), Failure> {
        let mut frames = vec![Frame::enter(root)];
        while !frames.is_empty() {
            let top = frames.len() - 1;
            let r = frames[top].root;
            match frames[top].state {
                FrameState::Enter => {
                    self.bump()?;
                    self.record(TraceEvent::FinishEnter(r));
                    if self.complete[r.index()] {
                        self.record(TraceEvent::FinishExit(r));
                        frames.pop();
                    } else if self.pointer[r.index()].is_some() {
                        return Err(Failure::Cycle(r));
                    } else {
                        self.set_pointer(r, r);
                        frames[top].stack.push(r);
                        self.record(TraceEvent::Pushed(r));
                        frames[top].state = FrameState::PopNext;
                    }
                }
                FrameState::PopNext => {
                    self.bump()?;
                    match frames[top].stack.pop() {
                        None => {
                            self.set_complete(r);
                            self.record(TraceEvent::FinishExit(r));
                            frames.pop();
                        }
                        Some(s) => {
                            self.record(TraceEvent::Popped(s));
                            if self.clashes(dag, r, s) {
                                return Err(Failure::Clash(r, s));
                            }
                            frames[top].state = FrameState::Parents { s, index: 0 };
                        }
                    }
                }
                FrameState::Parents { s, index } => {
                    let parent = dag.node(s).parents.get(index).copied();
                    if let Some(t) = parent {
                        self.bump()?;
                        frames[top].state = FrameState::Parents {
                            s,
                            index: index + 1,
                        };
                        frames.push(Frame::enter(t));
                    } else {
                        let mut stack = std::mem::take(&mut frames[top].stack);
                        let result = self.absorb_links_and_bind(dag, r, &mut stack, s);
                        frames[top].stack = stack;
                        result?;
                        frames[top].state = FrameState::PopNext;
                    }
                }
            }
        }
        Ok(())
    }

    /// The link loop and the `s != r` tail of one while-iteration.
    fn absorb_links_and_bind(
        &mut self,
        dag: &TermDag,
        r: NodeId,
        stack: &mut Vec<NodeId>,
        s: NodeId,
    ) -> Result<(), Failure> {
        let mut i = 0;
        while i < self.links[s.index()].len() {
            let t = self.links[s.index()][i];
            i += 1;
            self.bump()?;
            if self.complete[t.index()] || t == r {
                continue;
            }
            match self.pointer[t.index()] {
                None => {
                    self.set_pointer(t, r);
                    stack.push(t);
                    self.record(TraceEvent::Pushed(t));
                }
                Some(p) if p != r => return Err(Failure::Cycle(t)),
                Some(_) => {} // already on this stack
            }
        }
        if s != r {
            if dag.is_variable(s) {
                self.steps += 1;
                self.subs[s.index()] = Some(r);
                self.record(TraceEvent::SubsSet(s, r));
                self.sigma.push(s);
                self.record(TraceEvent::SigmaAdded(s));
            } else {
                self.record(TraceEvent::ChildLinksCreated(r, s));
                let pairs: Vec<(NodeId, NodeId)> = dag
                    .node(r)
                    .children
                    .iter()
                    .copied()
                    .zip(dag.node(s).children.iter().copied())
                    .collect();
                for (rc, sc) in pairs {
                    self.create_link(rc, sc);
                }
            }
            if self.variant == Variant::Fixed {
                self.set_complete(s);
            }
        }
        if self.variant == Variant::PublishedBuggy {
            self.set_complete(s);
        }
        Ok(())
    }
}

/// Unify the terms rooted at `u` and `v`. The DAG is mutated only by the
/// substitution-building phase, which interns the instantiated terms.
pub fn solve(dag: &mut TermDag, u: NodeId, v: NodeId, config: &SolveConfig) -> SolveReport {
    let node_count = dag.node_count();
    let budget = config
        .budget
        .unwrap_or_else(|| default_budget(node_count));
    let mut engine = Engine::new(node_count, config.variant, budget, config.trace);

    engine.create_link(u, v);

    let mut failure = None;
    'phases: for kind in [SymbolKind::Function, SymbolKind::Variable] {
        while let Some(r) = engine.select_next(dag, kind) {
            if let Err(f) = engine.finish(dag, r) {
                failure = Some(f);
                break 'phases;
            }
        }
    }

    let subs_snapshot: Vec<(NodeId, NodeId)> = engine
        .sigma
        .iter()
        .map(|&x| (x, engine.subs[x.index()].expect("sigma member has subs")))
        .collect();

    if let Some(f) = failure {
        let outcome = match f {
            Failure::Clash(a, b) => Outcome::Clash(a, b),
            Failure::Cycle(n) => Outcome::Cycle(n),
            Failure::Budget => Outcome::NonTermination {
                phase: Phase::Main,
                steps: engine.steps,
            },
        };
        return SolveReport {
            outcome,
            trace: engine.trace.unwrap_or_default(),
            steps: engine.steps,
            links_created: engine.links_created,
            sigma: engine.sigma,
            subs: subs_snapshot,
            sigma_calls: Vec::new(),
        };
    }

    let subs_lookup: Vec<Option<NodeId>> = engine.subs.clone();
    let mut build = sigma::build_sigma(
        dag,
        &engine.sigma,
        |x| subs_lookup.get(x.index()).copied().flatten(),
        engine.steps,
        budget,
    );
    let outcome = match build.result {
        Ok(substitution) => Outcome::Unified(substitution),
        Err(SigmaFailure::CycleDetected(_)) | Err(SigmaFailure::BudgetExceeded) => {
            Outcome::NonTermination {
                phase: Phase::BuildSigma,
                steps: build.steps,
            }
        }
    };
    SolveReport {
        outcome,
        trace: engine.trace.unwrap_or_default(),
        steps: build.steps,
        links_created: engine.links_created,
        sigma: engine.sigma,
        subs: subs_snapshot,
        sigma_calls: std::mem::take(&mut build.calls),
    }
}
