//! Uniqueness attribute handling.
//!
//! Haskell has no uniqueness types, so attributes cannot survive
//! translation. Three steps bridge the gap:
//!
//! 1. [`propagate`] applies Clean's container rule to signature types:
//!    a tuple, list, array, or optional holding a unique component is
//!    itself unique. Data type definitions are left alone; Clean requires
//!    manual marking there and so do we.
//! 2. [`check_constraints`] sanity-checks `[v<=u]` suffixes: every named
//!    attribute variable must appear in the signature, and constraint
//!    cycles collapse the variables into one equivalence class.
//! 3. [`erase_sig`] (or type-level [`erase`]) strips every attribute and
//!    returns a [`UniquenessReport`] recording what was removed, so the
//!    output can say exactly how the Haskell type differs.

use crate::ast::{Attr, AttrType, FunSig, Shape};
use crate::diag::{rules, Diagnostic};
use crate::span::Span;

/// How an erased attribute entered the type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttrOrigin {
    /// Spelled out in the source.
    Written,
    /// Added by [`propagate`]'s container rule.
    Propagated,
}

/// One erased attribute occurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct ErasedAttr {
    pub span: Span,
    pub attr: Attr,
    pub origin: AttrOrigin,
}

impl ErasedAttr {
    /// The attribute as it appears in source: `*`, `.`, or `u:`.
    pub fn text(&self) -> String {
        match &self.attr {
            Attr::None => String::new(),
            Attr::Unique => "*".to_string(),
            Attr::Anonymous => ".".to_string(),
            Attr::Var(v) => format!("{v}:"),
        }
    }
}

/// Per-variant totals from a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AttrCounts {
    pub unique: usize,
    pub vars: usize,
    pub dots: usize,
    pub constraints: usize,
}

/// Everything removed while erasing one or more types.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct UniquenessReport {
    /// One entry per erased attribute occurrence, in source order.
    pub entries: Vec<ErasedAttr>,
    /// Number of `[v<=u]` constraints dropped.
    pub constraints: usize,
}

impl UniquenessReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() && self.constraints == 0
    }

    pub fn merge(&mut self, other: UniquenessReport) {
        self.entries.extend(other.entries);
        self.constraints += other.constraints;
    }

    /// Counts restricted to attributes the source spelled out. Propagated
    /// attributes never appeared in the input, so adding and then erasing
    /// them changes nothing the author wrote; user-facing reports use
    /// these counts.
    pub fn written_counts(&self) -> AttrCounts {
        self.count_if(|e| e.origin == AttrOrigin::Written)
    }

    /// Counts over every erased occurrence, propagated ones included.
    pub fn total_counts(&self) -> AttrCounts {
        self.count_if(|_| true)
    }

    fn count_if(&self, keep: impl Fn(&ErasedAttr) -> bool) -> AttrCounts {
        let mut c = AttrCounts {
            constraints: self.constraints,
            ..AttrCounts::default()
        };
        for e in self.entries.iter().filter(|e| keep(e)) {
            match e.attr {
                Attr::None => {}
                Attr::Unique => c.unique += 1,
                Attr::Anonymous => c.dots += 1,
                Attr::Var(_) => c.vars += 1,
            }
        }
        c
    }
}

/// Apply the container rule bottom-up: a tuple, list, array, or optional
/// whose direct component is unique becomes unique itself. Only
/// unattributed nodes are upgraded; an attribute the author wrote stays.
/// One bottom-up pass reaches the fixpoint, so the function is idempotent.
pub fn propagate(t: &AttrType) -> AttrType {
    let shape = match &t.shape {
        Shape::Var(_) => t.shape.clone(),
        Shape::Con(name, args) => {
            Shape::Con(name.clone(), args.iter().map(propagate).collect())
        }
        Shape::Fun(l, r) => Shape::Fun(Box::new(propagate(l)), Box::new(propagate(r))),
        Shape::Tuple(elems) => Shape::Tuple(elems.iter().map(propagate).collect()),
        Shape::List(elem) => Shape::List(Box::new(propagate(elem))),
        Shape::Array { flavor, elem } => Shape::Array {
            flavor: *flavor,
            elem: Box::new(propagate(elem)),
        },
        Shape::Optional(elem) => Shape::Optional(Box::new(propagate(elem))),
        Shape::Forall { vars, body } => Shape::Forall {
            vars: vars.clone(),
            body: Box::new(propagate(body)),
        },
    };
    let attr = if t.attr == Attr::None && has_unique_component(&shape) {
        Attr::Unique
    } else {
        t.attr.clone()
    };
    AttrType::new(attr, shape, t.span)
}

/// True for container shapes with a unique direct component. Constructor
/// applications do not count: uniqueness in data types is marked by hand.
fn has_unique_component(shape: &Shape) -> bool {
    let elems: Vec<&AttrType> = match shape {
        Shape::Tuple(elems) => elems.iter().collect(),
        Shape::List(elem) | Shape::Optional(elem) => vec![elem],
        Shape::Array { elem, .. } => vec![elem],
        _ => return false,
    };
    elems.into_iter().any(|e| e.attr == Attr::Unique)
}

/// Validate the `[v<=u]` constraints of one signature. Unknown attribute
/// variables get a warning each; a cycle (mutual constraints, directly or
/// through a chain) gets one note saying the variables are equally unique.
pub fn check_constraints(sig: &FunSig) -> Vec<Diagnostic> {
    let mut known = Vec::new();
    for arg in &sig.args {
        collect_attr_vars(&arg.ty, &mut known);
    }
    collect_attr_vars(&sig.ret, &mut known);

    let mut diags = Vec::new();
    for con in &sig.attr_constraints {
        for side in [&con.left, &con.right] {
            if !known.contains(side) {
                diags.push(Diagnostic::warning(
                    rules::UNKNOWN_ATTR_VAR,
                    con.span,
                    format!("attribute variable `{side}` does not occur in the signature"),
                ));
            }
        }
    }

    for class in equal_classes(sig) {
        let span = sig
            .attr_constraints
            .iter()
            .filter(|c| class.contains(&c.left) && class.contains(&c.right))
            .map(|c| c.span)
            .reduce(|a, b| a.merge(b))
            .unwrap_or(sig.span);
        diags.push(Diagnostic::info(
            rules::EQUAL_UNIQUENESS,
            span,
            format!(
                "constraints force `{}` to be equally unique",
                class.join("`, `")
            ),
        ));
    }
    diags
}

fn collect_attr_vars(t: &AttrType, out: &mut Vec<String>) {
    if let Attr::Var(v) = &t.attr {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    match &t.shape {
        Shape::Var(_) => {}
        Shape::Con(_, args) | Shape::Tuple(args) => {
            for a in args {
                collect_attr_vars(a, out);
            }
        }
        Shape::Fun(l, r) => {
            collect_attr_vars(l, out);
            collect_attr_vars(r, out);
        }
        Shape::List(e) | Shape::Optional(e) | Shape::Array { elem: e, .. } => {
            collect_attr_vars(e, out)
        }
        Shape::Forall { body, .. } => collect_attr_vars(body, out),
    }
}

/// Groups of attribute variables forced equal by constraint cycles:
/// the strongly connected components (of size two or more) of the
/// directed graph with an edge `l -> r` per constraint `[l<=r]`.
/// Components come out in first-occurrence order, members sorted.
fn equal_classes(sig: &FunSig) -> Vec<Vec<String>> {
    let mut nodes: Vec<&str> = Vec::new();
    for con in &sig.attr_constraints {
        for side in [con.left.as_str(), con.right.as_str()] {
            if !nodes.contains(&side) {
                nodes.push(side);
            }
        }
    }
    let index_of = |name: &str| nodes.iter().position(|n| *n == name).unwrap();
    let mut succs = vec![Vec::new(); nodes.len()];
    for con in &sig.attr_constraints {
        let (l, r) = (index_of(&con.left), index_of(&con.right));
        if l != r && !succs[l].contains(&r) {
            succs[l].push(r);
        }
    }

    // Tarjan's algorithm; the graphs are a handful of nodes, so the
    // recursive form is fine.
    struct State<'a> {
        succs: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        lowlink: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next_index: usize,
        components: Vec<Vec<usize>>,
    }
    fn visit(st: &mut State, v: usize) {
        st.index[v] = Some(st.next_index);
        st.lowlink[v] = st.next_index;
        st.next_index += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        for i in 0..st.succs[v].len() {
            let w = st.succs[v][i];
            if st.index[w].is_none() {
                visit(st, w);
                st.lowlink[v] = st.lowlink[v].min(st.lowlink[w]);
            } else if st.on_stack[w] {
                st.lowlink[v] = st.lowlink[v].min(st.index[w].unwrap());
            }
        }
        if st.lowlink[v] == st.index[v].unwrap() {
            let mut comp = Vec::new();
            loop {
                let w = st.stack.pop().unwrap();
                st.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            st.components.push(comp);
        }
    }
    let mut st = State {
        succs: &succs,
        index: vec![None; nodes.len()],
        lowlink: vec![0; nodes.len()],
        on_stack: vec![false; nodes.len()],
        stack: Vec::new(),
        next_index: 0,
        components: Vec::new(),
    };
    for v in 0..nodes.len() {
        if st.index[v].is_none() {
            visit(&mut st, v);
        }
    }

    let mut classes: Vec<Vec<String>> = st
        .components
        .into_iter()
        .filter(|c| c.len() >= 2)
        .map(|c| {
            let mut names: Vec<String> = c.into_iter().map(|i| nodes[i].to_string()).collect();
            names.sort();
            names
        })
        .collect();
    classes.sort();
    classes
}

/// Strip every attribute from a type. The returned shape is identical;
/// the report holds one entry per removed attribute. Erasure alone cannot
/// tell how an attribute got there, so every entry is marked written; use
/// [`erase_sig`] to separate propagated attributes out.
pub fn erase(t: &AttrType) -> (AttrType, UniquenessReport) {
    let mut report = UniquenessReport::default();
    let plain = diff_erase(t, t, &mut report);
    (plain, report)
}

/// Propagate and erase every type in a signature. The output signature
/// has no attributes and no attribute constraints; the report separates
/// attributes the author wrote from ones propagation added.
pub fn erase_sig(sig: &FunSig) -> (FunSig, UniquenessReport) {
    let mut report = UniquenessReport::default();
    let mut out = sig.clone();
    for arg in &mut out.args {
        let prop = propagate(&arg.ty);
        arg.ty = diff_erase(&arg.ty, &prop, &mut report);
    }
    let prop = propagate(&out.ret);
    out.ret = diff_erase(&out.ret, &prop, &mut report);
    report.constraints = out.attr_constraints.len();
    out.attr_constraints.clear();
    (out, report)
}

/// Walk the written type and its propagated counterpart in step (they
/// share a shape), record each attribute with its origin, and rebuild the
/// node bare.
fn diff_erase(written: &AttrType, prop: &AttrType, report: &mut UniquenessReport) -> AttrType {
    if written.attr != Attr::None {
        report.entries.push(ErasedAttr {
            span: written.span,
            attr: written.attr.clone(),
            origin: AttrOrigin::Written,
        });
    } else if prop.attr != Attr::None {
        report.entries.push(ErasedAttr {
            span: prop.span,
            attr: prop.attr.clone(),
            origin: AttrOrigin::Propagated,
        });
    }
    let shape = match (&written.shape, &prop.shape) {
        (Shape::Var(n), _) => Shape::Var(n.clone()),
        (Shape::Con(n, wargs), Shape::Con(_, pargs)) => Shape::Con(
            n.clone(),
            wargs
                .iter()
                .zip(pargs)
                .map(|(w, p)| diff_erase(w, p, report))
                .collect(),
        ),
        (Shape::Fun(wl, wr), Shape::Fun(pl, pr)) => Shape::Fun(
            Box::new(diff_erase(wl, pl, report)),
            Box::new(diff_erase(wr, pr, report)),
        ),
        (Shape::Tuple(welems), Shape::Tuple(pelems)) => Shape::Tuple(
            welems
                .iter()
                .zip(pelems)
                .map(|(w, p)| diff_erase(w, p, report))
                .collect(),
        ),
        (Shape::List(w), Shape::List(p)) => Shape::List(Box::new(diff_erase(w, p, report))),
        (Shape::Array { flavor, elem: w }, Shape::Array { elem: p, .. }) => Shape::Array {
            flavor: *flavor,
            elem: Box::new(diff_erase(w, p, report)),
        },
        (Shape::Optional(w), Shape::Optional(p)) => {
            Shape::Optional(Box::new(diff_erase(w, p, report)))
        }
        (Shape::Forall { vars, body: w }, Shape::Forall { body: p, .. }) => Shape::Forall {
            vars: vars.clone(),
            body: Box::new(diff_erase(w, p, report)),
        },
        // Propagation preserves shape, so mixed pairs cannot happen.
        _ => unreachable!("propagation changed the shape of a type"),
    };
    AttrType::new(Attr::None, shape, written.span)
}
