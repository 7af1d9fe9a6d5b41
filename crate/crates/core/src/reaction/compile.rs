//! Reaction rules as staged rewrite programs over the atom encoding.
//!
//! A trigger consumes the encoded redex image together with the counters of
//! the places and links it touches. When the redex has sites, the trigger
//! leaves tokens behind and the stage rules finish the job:
//!
//! 1. `tmp(H, q, N)` colours the `N` residual children of host place `H`
//!    into `tmp_prnt(X, q)`;
//! 2. once every host is coloured, the rule's phase step builds the reactum
//!    and hands each host an assignment token;
//! 3. assignment rules send each coloured child to one of the host's sites
//!    (or, for a root host, back to the host) and start its fate: `del`,
//!    a move, or a move plus `copy_k` for `k` further copies;
//! 4. generic rules delete or copy trees and increment counters.
//!
//! Rule-specific predicates carry the rule name as a prefix.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::bigraph::{Bigraph, Child, Link, Parent, Point, Signature};
use crate::mset::{ctor, AtomPat, Engine, Guard, Multiset, Namespace, Pat, RewriteRule, Substitution, Sym, Term};
use crate::relational::{encode, interpret, DEFAULT_GRAPH};

use super::{ParametricReactionRule, ReactionError};

const G: &str = "G";

fn ap(pred: &str, args: Vec<Pat>) -> AtomPat {
    AtomPat::new(pred, args, Pat::var(G))
}

fn var(v: &str) -> Pat {
    Pat::var(v)
}

fn f1(f: &str, p: Pat) -> Pat {
    Pat::app(f, vec![p])
}

fn port(v: Pat, i: u32) -> Pat {
    Pat::app(ctor::PORT, vec![v, Pat::nat(i)])
}

fn control(c: &Sym) -> Pat {
    Pat::Lit(Term::name(Namespace::Control, c.clone()))
}

fn rule(label: &str, lhs: &str, rhs: &str) -> RewriteRule {
    RewriteRule::parse(label, lhs, rhs).expect("stage rule text parses")
}

/// Binds `M` to the arity of the control bound to `K`.
fn arity_guard(sig: &Arc<Signature>) -> Guard {
    let sig = sig.clone();
    Guard::new("M = arity K", &["M"], move |s: &mut Substitution| {
        let a = match s.get("K") {
            Some(Term::Name(n)) if n.ns == Namespace::Control => sig.arity(n.id.as_str()),
            _ => None,
        };
        match a {
            Some(a) => {
                s.insert(Sym::new("M"), Term::nat(a));
                true
            }
            None => false,
        }
    })
}

/// Colouring, counter increments and tree deletion.
pub fn base_stage_rules(sig: &Arc<Signature>) -> Vec<RewriteRule> {
    vec![
        rule("inc_p", "inc_p(D)@G, has_child_p(D, N)@G", "has_child_p(D, s(N))@G"),
        rule("inc_l", "inc_l(T)@G, has_child_l(T, N)@G", "has_child_l(T, s(N))@G"),
        rule(
            "colour",
            "tmp(D, Q, s(N))@G, prnt(X, D)@G",
            "tmp(D, Q, N)@G, tmp_prnt(X, Q)@G",
        ),
        rule(
            "del",
            "del(src_n(W))@G, is_node(W)@G, lc(W, K)@G, has_child_p(dst_n(W), N)@G",
            "del_c(dst_n(W), N)@G, del_p(W, M)@G",
        )
        .with_guard(arity_guard(sig)),
        rule(
            "del_c",
            "del_c(D, s(N))@G, prnt(Y, D)@G",
            "del_c(D, N)@G, del(Y)@G",
        ),
        rule("del_c_z", "del_c(D, z)@G", ""),
        rule(
            "del_p",
            "del_p(W, s(I))@G, is_port(p(W, s(I)))@G, lp(p(W, s(I)), W)@G, \
             link(src_p(p(W, s(I))), T)@G, has_child_l(T, s(N))@G",
            "del_p(W, I)@G, has_child_l(T, N)@G",
        ),
        rule("del_p_z", "del_p(W, z)@G", ""),
    ]
}

/// Rules copying a tree `k` times at once, so every original node is read
/// by a single copying process.
pub fn copy_stage_rules(sig: &Arc<Signature>, k: usize) -> Vec<RewriteRule> {
    let ds: Vec<String> = (1..=k).map(|t| format!("D{t}")).collect();
    let ws: Vec<String> = (1..=k).map(|t| format!("W{t}")).collect();
    let dst_ws: Vec<String> = ws.iter().map(|w| format!("dst_n({w})")).collect();
    let copy = format!("copy_{k}");
    let copy_c = format!("copy_c_{k}");
    let copy_p = format!("copy_p_{k}");

    let mut rhs = vec![
        "is_node(W)@G".to_string(),
        "lc(W, K)@G".into(),
        "has_child_p(dst_n(W), N)@G".into(),
    ];
    for (w, d) in ws.iter().zip(&ds) {
        rhs.push(format!("is_node({w})@G"));
        rhs.push(format!("lc({w}, K)@G"));
        rhs.push(format!("prnt(src_n({w}), {d})@G"));
        rhs.push(format!("inc_p({d})@G"));
        rhs.push(format!("has_child_p(dst_n({w}), z)@G"));
    }
    rhs.push(format!("{copy_c}(dst_n(W), {}, N, z)@G", dst_ws.join(", ")));
    rhs.push(format!("{copy_p}(W, {}, M)@G", ws.join(", ")));
    let fresh: Vec<(&str, Namespace)> = ws.iter().map(|w| (w.as_str(), Namespace::Node)).collect();
    let start = rule(
        &copy,
        &format!(
            "{copy}(src_n(W), {})@G, is_node(W)@G, lc(W, K)@G, has_child_p(dst_n(W), N)@G",
            ds.join(", ")
        ),
        &rhs.join(", "),
    )
    .with_guard(arity_guard(sig))
    .with_fresh(&fresh);

    let children = rule(
        &copy_c,
        &format!("{copy_c}(D, {}, s(N), C)@G, prnt(Y, D)@G", ds.join(", ")),
        &format!(
            "{copy_c}(D, {dl}, N, s(C))@G, tmp_copy(Y, D)@G, {copy}(Y, {dl})@G",
            dl = ds.join(", ")
        ),
    );
    let children_z = rule(
        &format!("{copy_c}_z"),
        &format!("{copy_c}(D, {}, z, C)@G", ds.join(", ")),
        "copy_r(D, C)@G",
    );

    let mut prhs = vec![
        format!("{copy_p}(W, {}, I)@G", ws.join(", ")),
        "link(src_p(p(W, s(I))), T)@G".into(),
    ];
    for w in &ws {
        prhs.push(format!("is_port(p({w}, s(I)))@G"));
        prhs.push(format!("lp(p({w}, s(I)), {w})@G"));
        prhs.push(format!("link(src_p(p({w}, s(I))), T)@G"));
        prhs.push("inc_l(T)@G".into());
    }
    let ports = rule(
        &copy_p,
        &format!(
            "{copy_p}(W, {}, s(I))@G, link(src_p(p(W, s(I))), T)@G",
            ws.join(", ")
        ),
        &prhs.join(", "),
    );
    let ports_z = rule(
        &format!("{copy_p}_z"),
        &format!("{copy_p}(W, {}, z)@G", ws.join(", ")),
        "",
    );
    vec![start, children, children_z, ports, ports_z]
}

/// Restores the `C` children coloured while their parent was copied.
pub fn copy_restore_rules() -> Vec<RewriteRule> {
    vec![
        rule(
            "copy_r",
            "copy_r(D, s(C))@G, tmp_copy(Y, D)@G",
            "copy_r(D, C)@G, prnt(Y, D)@G",
        ),
        rule("copy_r_z", "copy_r(D, z)@G", ""),
    ]
}

/// The staged program for one reaction rule.
#[derive(Clone, Debug)]
pub struct CompiledReaction {
    pub name: Sym,
    /// One trigger per way of identifying the outer names of the redex.
    pub triggers: Vec<RewriteRule>,
    /// Empty for ground rules, whose triggers do all the work.
    pub stages: Vec<RewriteRule>,
    sig: Arc<Signature>,
}

impl CompiledReaction {
    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn rules(&self) -> impl Iterator<Item = &RewriteRule> {
        self.triggers.iter().chain(&self.stages)
    }
}

/// Set partitions of `0..n` as restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        let classes = cur.iter().copied().max().map_or(0, |m| m + 1);
        for c in 0..=classes {
            cur.push(c);
            go(i + 1, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

struct Side<'a> {
    b: &'a Bigraph,
    prefix: &'a str,
    index: BTreeMap<Sym, usize>,
    eindex: BTreeMap<Sym, usize>,
}

impl<'a> Side<'a> {
    fn new(b: &'a Bigraph, prefix: &'a str) -> Side<'a> {
        Side {
            b,
            prefix,
            index: b.nodes().keys().enumerate().map(|(i, v)| (v.clone(), i)).collect(),
            eindex: b.edges().iter().enumerate().map(|(i, e)| (e.clone(), i)).collect(),
        }
    }

    fn node_var(&self, v: &Sym) -> String {
        format!("{}{}", self.prefix, self.index[v])
    }

    fn edge_var(&self, e: &Sym) -> String {
        format!("{}E{}", self.prefix, self.eindex[e])
    }

    fn node(&self, v: &Sym) -> Pat {
        var(&self.node_var(v))
    }

    fn place(&self, p: &Parent) -> Pat {
        match p {
            Parent::Node(v) => f1(ctor::DST_N, self.node(v)),
            Parent::Root(r) => var(&format!("P{r}")),
        }
    }

    fn target(&self, l: &Link, class: &BTreeMap<Sym, usize>) -> Pat {
        match l {
            Link::Edge(e) => f1(ctor::DST_E, var(&self.edge_var(e))),
            Link::Outer(j) => var(&format!("T{}", class[j])),
        }
    }

    fn node_kids(&self, p: &Parent) -> u32 {
        self.b
            .prnt()
            .iter()
            .filter(|(c, q)| *q == p && matches!(c, Child::Node(_)))
            .count() as u32
    }

    fn points_on(&self, l: &Link) -> u32 {
        self.b.link().values().filter(|x| *x == l).count() as u32
    }

    /// Atoms of the nodes, ports and edges, with node counters taken from
    /// the node children only.
    fn body(&self, class: &BTreeMap<Sym, usize>, counters: impl Fn(&Sym) -> Pat) -> Vec<AtomPat> {
        let mut out = Vec::new();
        for (v, c) in self.b.nodes() {
            let x = self.node(v);
            let parent = self.b.parent(&Child::Node(v.clone())).expect("well formed");
            out.push(ap("is_node", vec![x.clone()]));
            out.push(ap("lc", vec![x.clone(), control(c)]));
            out.push(ap("prnt", vec![f1(ctor::SRC_N, x.clone()), self.place(parent)]));
            out.push(ap("has_child_p", vec![f1(ctor::DST_N, x.clone()), counters(v)]));
            for i in 1..=self.b.arity(v) {
                let l = &self.b.link()[&Point::Port(v.clone(), i)];
                out.push(ap("is_port", vec![port(x.clone(), i)]));
                out.push(ap("lp", vec![port(x.clone(), i), x.clone()]));
                out.push(ap(
                    "link",
                    vec![f1(ctor::SRC_P, port(x.clone(), i)), self.target(l, class)],
                ));
            }
        }
        for e in self.b.edges() {
            let l = Link::Edge(e.clone());
            out.push(ap("is_e_name", vec![var(&self.edge_var(e))]));
            out.push(ap(
                "has_child_l",
                vec![self.target(&l, class), Pat::nat(self.points_on(&l))],
            ));
        }
        out
    }
}

/// A place of the redex with sites below it.
struct Host {
    place: Parent,
    sites: Vec<usize>,
}

fn hosts(l: &Bigraph) -> Vec<Host> {
    let mut by_place: BTreeMap<Parent, Vec<usize>> = BTreeMap::new();
    for (c, p) in l.prnt() {
        if let Child::Site(s) = c {
            by_place.entry(p.clone()).or_default().push(*s);
        }
    }
    by_place
        .into_iter()
        .map(|(place, sites)| Host { place, sites })
        .collect()
}

pub fn compile_reaction(r: &ParametricReactionRule) -> CompiledReaction {
    let l = r.redex();
    let rr = r.reactum();
    let sig = l.signature().clone();
    let name = r.name().as_str();
    let ls = Side::new(l, "V");
    let rs = Side::new(rr, "W");
    let hosts = hosts(l);
    let host_of: BTreeMap<Parent, usize> = hosts.iter().enumerate().map(|(q, h)| (h.place.clone(), q)).collect();
    let n = l.outer().width;
    let jnames: Vec<Sym> = l.outer().names.iter().cloned().collect();
    let staged = !hosts.is_empty();

    let host_count = |q: usize| -> Pat {
        match &hosts[q].place {
            Parent::Root(r) => var(&format!("NR{r}")),
            Parent::Node(_) => var(&format!("NH{q}")),
        }
    };
    let host_place = |q: usize| ls.place(&hosts[q].place);

    let fresh_r: Vec<(String, Namespace)> = rr
        .nodes()
        .keys()
        .map(|v| (rs.node_var(v), Namespace::Node))
        .chain(rr.edges().iter().map(|e| (rs.edge_var(e), Namespace::Edge)))
        .collect();
    let fresh_refs: Vec<(&str, Namespace)> = fresh_r.iter().map(|(v, ns)| (v.as_str(), *ns)).collect();

    let mut triggers = Vec::new();
    let mut stages = Vec::new();
    let partitions = set_partitions(jnames.len());
    for (pi, part) in partitions.iter().enumerate() {
        let class: BTreeMap<Sym, usize> = jnames.iter().cloned().zip(part.iter().copied()).collect();
        let classes = part.iter().copied().max().map_or(0, |m| m + 1);
        let class_points = |side: &Side<'_>, c: usize| -> u32 {
            jnames
                .iter()
                .filter(|j| class[*j] == c)
                .map(|j| side.points_on(&Link::Outer(j.clone())))
                .sum()
        };

        let mut lhs = ls.body(&class, |v| {
            let p = Parent::Node(v.clone());
            match host_of.get(&p) {
                Some(q) => Pat::succ(ls.node_kids(&p), var(&format!("NH{q}"))),
                None => Pat::nat(ls.node_kids(&p)),
            }
        });
        for r0 in 0..n {
            let p = Parent::Root(r0);
            lhs.push(ap(
                "has_child_p",
                vec![var(&format!("P{r0}")), Pat::succ(ls.node_kids(&p), var(&format!("NR{r0}")))],
            ));
        }
        for c in 0..classes {
            lhs.push(ap(
                "has_child_l",
                vec![var(&format!("T{c}")), Pat::succ(class_points(&ls, c), var(&format!("NL{c}")))],
            ));
        }

        let reactum = rs.body(&class, |v| Pat::nat(rs.node_kids(&Parent::Node(v.clone()))));
        let label = if partitions.len() == 1 {
            name.to_string()
        } else {
            format!("{name}/{pi}")
        };

        if !staged {
            let mut rhs = reactum;
            for r0 in 0..n {
                let p = Parent::Root(r0);
                rhs.push(ap(
                    "has_child_p",
                    vec![var(&format!("P{r0}")), Pat::succ(rs.node_kids(&p), var(&format!("NR{r0}")))],
                ));
            }
            for c in 0..classes {
                rhs.push(ap(
                    "has_child_l",
                    vec![var(&format!("T{c}")), Pat::succ(class_points(&rs, c), var(&format!("NL{c}")))],
                ));
            }
            triggers.push(RewriteRule::new(&label, lhs, rhs).with_fresh(&fresh_refs));
            continue;
        }

        // the context token records everything the phase step needs
        let mut ctx_args: Vec<Pat> = (0..n).map(|r0| var(&format!("P{r0}"))).collect();
        ctx_args.extend((0..classes).map(|c| var(&format!("T{c}"))));
        ctx_args.extend((0..hosts.len()).map(host_count));
        ctx_args.extend((0..hosts.len()).map(host_place));
        let ctx_pred = format!("{name}.ctx{pi}");

        let mut rhs = Vec::new();
        for c in 0..classes {
            rhs.push(ap("has_child_l", vec![var(&format!("T{c}")), var(&format!("NL{c}"))]));
        }
        for r0 in 0..n {
            let p = Parent::Root(r0);
            let base = if host_of.contains_key(&p) {
                Pat::z()
            } else {
                var(&format!("NR{r0}"))
            };
            rhs.push(ap("has_child_p", vec![var(&format!("P{r0}")), base]));
        }
        for q in 0..hosts.len() {
            rhs.push(ap("tmp", vec![host_place(q), Pat::nat(q as u32), host_count(q)]));
        }
        rhs.push(ap(&ctx_pred, ctx_args.clone()));
        triggers.push(RewriteRule::new(&label, lhs, rhs));

        // phase: every host coloured, build the reactum
        let mut plhs = vec![ap(&ctx_pred, ctx_args)];
        for q in 0..hosts.len() {
            plhs.push(ap("tmp", vec![host_place(q), Pat::nat(q as u32), Pat::z()]));
        }
        let mut prhs = reactum;
        for r0 in 0..n {
            for _ in 0..rs.node_kids(&Parent::Root(r0)) {
                prhs.push(ap("inc_p", vec![var(&format!("P{r0}"))]));
            }
        }
        for c in 0..classes {
            for _ in 0..class_points(&rs, c) {
                prhs.push(ap("inc_l", vec![var(&format!("T{c}"))]));
            }
        }
        let dests: Vec<Pat> = (0..rr.inner().width)
            .map(|j| {
                let p = rr.parent(&Child::Site(j)).expect("reactum is well formed");
                rs.place(p)
            })
            .collect();
        for q in 0..hosts.len() {
            let mut args = vec![Pat::nat(q as u32), host_count(q), host_place(q)];
            args.extend(dests.iter().cloned());
            prhs.push(ap(&format!("{name}.asg"), args));
        }
        stages.push(
            RewriteRule::new(&format!("{name}.phase{pi}"), plhs, prhs).with_fresh(&fresh_refs),
        );
    }

    if staged {
        let dvars: Vec<Pat> = (0..rr.inner().width).map(|j| var(&format!("D{j}"))).collect();
        let asg = |q: usize, count: Pat| {
            let mut args = vec![Pat::nat(q as u32), count, var("H")];
            args.extend(dvars.iter().cloned());
            ap(&format!("{name}.asg"), args)
        };
        let mut copies = BTreeSet::new();
        for (q, h) in hosts.iter().enumerate() {
            let lhs = vec![asg(q, Pat::succ(1, var("N"))), ap("tmp_prnt", vec![var("X"), Pat::nat(q as u32)])];
            for &i in &h.sites {
                let pre = r.preimage(i);
                let mut rhs = vec![asg(q, var("N"))];
                match pre.split_first() {
                    None => rhs.push(ap("del", vec![var("X")])),
                    Some((first, rest)) => {
                        rhs.push(ap("prnt", vec![var("X"), dvars[*first].clone()]));
                        rhs.push(ap("inc_p", vec![dvars[*first].clone()]));
                        if !rest.is_empty() {
                            copies.insert(rest.len());
                            let mut args = vec![var("X")];
                            args.extend(rest.iter().map(|j| dvars[*j].clone()));
                            rhs.push(ap(&format!("copy_{}", rest.len()), args));
                        }
                    }
                }
                stages.push(
                    RewriteRule::new(&format!("{name}.assign{q}.{i}"), lhs.clone(), rhs).with_choice(1),
                );
            }
            if matches!(h.place, Parent::Root(_)) {
                let rhs = vec![
                    asg(q, var("N")),
                    ap("prnt", vec![var("X"), var("H")]),
                    ap("inc_p", vec![var("H")]),
                ];
                stages.push(RewriteRule::new(&format!("{name}.keep{q}"), lhs.clone(), rhs).with_choice(1));
            }
            stages.push(RewriteRule::new(&format!("{name}.done{q}"), vec![asg(q, Pat::z())], vec![]));
        }
        stages.extend(base_stage_rules(&sig));
        for k in &copies {
            stages.extend(copy_stage_rules(&sig, *k));
        }
        if !copies.is_empty() {
            stages.extend(copy_restore_rules());
        }
    }
    for t in triggers.iter().chain(&stages) {
        t.check().expect("compiled rules are closed");
    }
    CompiledReaction {
        name: r.name().clone(),
        triggers,
        stages,
        sig,
    }
}

/// Step budget for finishing one staged firing.
pub const STAGE_LIMIT: usize = 1_000_000;

/// Every multiset reachable by firing one trigger of `prog` on `state` and
/// running the stages to normal form.
pub fn kernel_step(state: &Multiset, prog: &CompiledReaction, engine: &mut Engine) -> Result<Vec<Multiset>, ReactionError> {
    engine.observe(state);
    let mut out = Vec::new();
    for t in &prog.triggers {
        for m in engine.match_rule(t, state) {
            let (next, _) = engine.apply(t, state, &m)?;
            if prog.stages.is_empty() {
                out.push(next);
            } else {
                out.extend(engine.branch_normal_forms(&prog.stages, &next, STAGE_LIMIT)?);
            }
        }
    }
    Ok(out)
}

/// One-step successors of `agent` through the compiled program.
pub fn kernel_successors(agent: &Bigraph, prog: &CompiledReaction) -> Result<Vec<Bigraph>, ReactionError> {
    let enc = encode(agent, DEFAULT_GRAPH)?;
    let mut engine = Engine::new();
    kernel_step(&enc, prog, &mut engine)?
        .iter()
        .map(|m| interpret(m, &prog.sig).map_err(ReactionError::from))
        .collect()
}
