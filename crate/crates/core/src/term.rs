//! Term symbols and the maximally shared term DAG.
//!
//! Every distinct subterm is interned exactly once, so structural equality
//! of subterms coincides with [`NodeId`] equality. Nodes keep parent
//! back-edges (with multiplicity) because the unification engine walks
//! upward from shared variables.

use std::collections::HashMap;
use std::fmt;

use crate::parse::TermAst;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum SymbolKind {
    Variable,
    Function,
}

/// A variable or function symbol. Constants are functions of arity 0.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Symbol {
    pub kind: SymbolKind,
    pub name: String,
    pub arity: usize,
}

impl Symbol {
    pub fn variable(name: impl Into<String>) -> Self {
        Symbol {
            kind: SymbolKind::Variable,
            name: name.into(),
            arity: 0,
        }
    }

    pub fn function(name: impl Into<String>, arity: usize) -> Self {
        Symbol {
            kind: SymbolKind::Function,
            name: name.into(),
            arity,
        }
    }

    pub fn is_variable(&self) -> bool {
        self.kind == SymbolKind::Variable
    }
}

/// Dense handle into one [`TermDag`] arena.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug)]
pub struct TermNode {
    pub symbol: Symbol,
    pub children: Vec<NodeId>,
    /// All nodes having this node as a child, once per child slot.
    pub parents: Vec<NodeId>,
}

/// Conflicting arity for a function name already interned in this DAG.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("function symbol `{name}` used with arity {found}, previously {expected}")]
pub struct ArityError {
    pub name: String,
    pub expected: usize,
    pub found: usize,
}

/// Result of rendering a node: either the expanded text or the exact
/// symbol count when it exceeds the cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rendered {
    Text(String),
    SizeExceeded { symbols: u128 },
}

/// Arena of maximally shared term nodes.
///
/// Children are always interned before their parents, so for every node
/// the ids of its children are strictly smaller than its own id. Interning
/// mutates the DAG; once built it can be shared read-only.
pub struct TermDag {
    nodes: Vec<TermNode>,
    intern_table: HashMap<(Symbol, Vec<NodeId>), NodeId>,
    signature: HashMap<String, usize>,
    roots: Vec<NodeId>,
}

impl Default for TermDag {
    fn default() -> Self {
        Self::new()
    }
}

impl TermDag {
    pub fn new() -> Self {
        TermDag {
            nodes: Vec::new(),
            intern_table: HashMap::new(),
            signature: HashMap::new(),
            roots: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, id: NodeId) -> &TermNode {
        &self.nodes[id.index()]
    }

    pub fn symbol(&self, id: NodeId) -> &Symbol {
        &self.nodes[id.index()].symbol
    }

    pub fn is_variable(&self, id: NodeId) -> bool {
        self.symbol(id).is_variable()
    }

    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    pub fn register_root(&mut self, id: NodeId) {
        self.roots.push(id);
    }

    /// Intern a single node with already-interned children.
    pub fn intern_node(
        &mut self,
        symbol: Symbol,
        children: Vec<NodeId>,
    ) -> Result<NodeId, ArityError> {
        debug_assert_eq!(symbol.arity, children.len());
        if symbol.kind == SymbolKind::Function {
            match self.signature.get(&symbol.name) {
                Some(&arity) if arity != symbol.arity => {
                    return Err(ArityError {
                        name: symbol.name.clone(),
                        expected: arity,
                        found: symbol.arity,
                    });
                }
                Some(_) => {}
                None => {
                    self.signature.insert(symbol.name.clone(), symbol.arity);
                }
            }
        }
        let key = (symbol, children);
        if let Some(&id) = self.intern_table.get(&key) {
            return Ok(id);
        }
        let id = NodeId(self.nodes.len() as u32);
        let (symbol, children) = (key.0.clone(), key.1.clone());
        for &child in &children {
            self.nodes[child.index()].parents.push(id);
        }
        self.nodes.push(TermNode {
            symbol,
            children,
            parents: Vec::new(),
        });
        self.intern_table.insert(key, id);
        Ok(id)
    }

    /// Intern an AST bottom-up; structurally identical subterms, within and
    /// across calls, receive the same node.
    pub fn intern(&mut self, ast: &TermAst) -> Result<NodeId, ArityError> {
        match ast {
            TermAst::Var(name) => self.intern_node(Symbol::variable(name.clone()), Vec::new()),
            TermAst::App(name, args) => {
                let mut children = Vec::with_capacity(args.len());
                for arg in args {
                    children.push(self.intern(arg)?);
                }
                self.intern_node(Symbol::function(name.clone(), args.len()), children)
            }
        }
    }

    /// Symbol count of the term rooted at `id` (saturating).
    ///
    /// Children always carry smaller ids, so one ascending pass over the
    /// arena memoizes every subterm size in linear time.
    pub fn symbol_count(&self, id: NodeId) -> u128 {
        let mut sizes = vec![0u128; id.index() + 1];
        for i in 0..=id.index() {
            let mut size: u128 = 1;
            for child in &self.nodes[i].children {
                size = size.saturating_add(sizes[child.index()]);
            }
            sizes[i] = size;
        }
        sizes[id.index()]
    }

    /// Fully expanded textual form, unless it would exceed `size_cap`
    /// symbols, in which case the exact count is reported instead.
    pub fn print_term(&self, root: NodeId, size_cap: u128) -> Rendered {
        let symbols = self.symbol_count(root);
        if symbols > size_cap {
            return Rendered::SizeExceeded { symbols };
        }
        enum Piece {
            Node(NodeId),
            Text(&'static str),
        }
        let mut out = String::new();
        let mut stack = vec![Piece::Node(root)];
        while let Some(piece) = stack.pop() {
            match piece {
                Piece::Text(t) => out.push_str(t),
                Piece::Node(id) => {
                    let node = self.node(id);
                    out.push_str(&node.symbol.name);
                    if !node.children.is_empty() {
                        out.push('(');
                        stack.push(Piece::Text(")"));
                        for (i, &child) in node.children.iter().enumerate().rev() {
                            if i + 1 < node.children.len() {
                                stack.push(Piece::Text(","));
                            }
                            stack.push(Piece::Node(child));
                        }
                    }
                }
            }
        }
        Rendered::Text(out)
    }

    /// Render a node reference as `name/arity#id` for functions and
    /// `Name#id` for variables.
    pub fn display_node(&self, id: NodeId) -> String {
        let sym = self.symbol(id);
        match sym.kind {
            SymbolKind::Variable => format!("{}#{}", sym.name, id.0),
            SymbolKind::Function => format!("{}/{}#{}", sym.name, sym.arity, id.0),
        }
    }
}

impl fmt::Debug for TermDag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for (i, _) in self.nodes.iter().enumerate() {
            list.entry(&self.display_node(NodeId(i as u32)));
        }
        list.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;

    fn dag_with(texts: &[&str]) -> (TermDag, Vec<NodeId>) {
        let mut dag = TermDag::new();
        let ids = texts
            .iter()
            .map(|t| dag.intern(&parse_term(t).unwrap()).unwrap())
            .collect();
        (dag, ids)
    }

    #[test]
    fn interning_shares_across_calls() {
        let (dag, ids) = dag_with(&["X", "f(X)"]);
        assert_eq!(dag.node_count(), 2);
        let x = ids[0];
        let f = ids[1];
        assert_eq!(dag.node(f).children, vec![x]);
        assert_eq!(dag.node(x).parents, vec![f]);
    }

    #[test]
    fn interning_is_idempotent() {
        let (_, ids) = dag_with(&["a", "a"]);
        assert_eq!(ids[0], ids[1]);
    }

    #[test]
    fn shared_child_has_parent_multiplicity() {
        let (dag, ids) = dag_with(&["f(g(a), g(a))"]);
        let f = ids[0];
        let ga = dag.node(f).children[0];
        assert_eq!(dag.node(f).children, vec![ga, ga]);
        assert_eq!(dag.node(ga).parents, vec![f, f]);
        // a, g(a), f = three nodes total
        assert_eq!(dag.node_count(), 3);
    }

    #[test]
    fn arity_conflict_is_rejected() {
        let mut dag = TermDag::new();
        dag.intern(&parse_term("f(a)").unwrap()).unwrap();
        let err = dag.intern(&parse_term("f(a,b)").unwrap()).unwrap_err();
        assert_eq!(err.name, "f");
        assert_eq!(err.expected, 1);
        assert_eq!(err.found, 2);
    }

    #[test]
    fn print_small_terms() {
        let (dag, ids) = dag_with(&["f(X)", "a", "h(g(a), g(a))"]);
        assert_eq!(dag.print_term(ids[0], 100), Rendered::Text("f(X)".into()));
        assert_eq!(dag.print_term(ids[1], 1), Rendered::Text("a".into()));
        assert_eq!(
            dag.print_term(ids[2], 100),
            Rendered::Text("h(g(a),g(a))".into())
        );
    }

    #[test]
    fn print_reports_exact_size_over_cap() {
        // Doubling tower: t0 = a, t_{k+1} = f(t_k, t_k); size 2^{k+1} - 1.
        let mut dag = TermDag::new();
        let mut t = dag.intern(&parse_term("a").unwrap()).unwrap();
        for _ in 0..5 {
            t = dag.intern_node(Symbol::function("f", 2), vec![t, t]).unwrap();
        }
        assert_eq!(dag.symbol_count(t), 63);
        assert_eq!(
            dag.print_term(t, 62),
            Rendered::SizeExceeded { symbols: 63 }
        );
        assert!(matches!(dag.print_term(t, 63), Rendered::Text(_)));
    }

    #[test]
    fn display_node_formats() {
        let (dag, ids) = dag_with(&["X", "f(X)"]);
        assert_eq!(dag.display_node(ids[0]), "X#0");
        assert_eq!(dag.display_node(ids[1]), "f/1#1");
    }
}
