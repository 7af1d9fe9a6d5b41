use std::collections::{BTreeMap, BTreeSet};

use crate::bigraph::{lean_equiv, Bigraph, BigraphError, Child, Interface, Link, Parent, Point};
use crate::mset::Sym;

use super::ParametricReactionRule;

/// Where the redex sits inside the agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    /// Agent place of each redex root.
    pub places: Vec<Parent>,
    pub nodes: BTreeMap<Sym, Sym>,
    pub edges: BTreeMap<Sym, Sym>,
    /// Agent link of each outer name of the redex.
    pub names: BTreeMap<Sym, Link>,
    /// Agent nodes rooting the parameter under each redex site.
    pub params: Vec<Vec<Sym>>,
}

/// `B = C ∘ (D ⊗ L) ∘ C′` with `D` the identity on the names `Z` that
/// parameter ports reach.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub context: Bigraph,
    pub identity: Bigraph,
    /// The redex with nodes and edges renamed to their agent images.
    pub redex: Bigraph,
    pub parameter: Bigraph,
    pub occurrence: Occurrence,
}

impl Decomposition {
    pub fn recompose(&self) -> Result<Bigraph, BigraphError> {
        let mid = self.identity.juxtapose(&self.redex)?.compose(&self.parameter)?;
        self.context.compose(&mid)
    }
}

/// Inner name of the context standing for an agent link reached from the
/// parameter. The `~` prefix is reserved, so these never meet redex names.
pub(crate) fn bypass_name(l: &Link) -> Sym {
    match l {
        Link::Edge(e) => Sym::from(format!("~e.{e}")),
        Link::Outer(y) => Sym::from(format!("~o.{y}")),
    }
}

struct Redex<'a> {
    l: &'a Bigraph,
    /// Nodes in breadth-first order from the roots.
    order: Vec<Sym>,
    node_kids: BTreeMap<Parent, Vec<Sym>>,
    site_kids: BTreeMap<Parent, Vec<usize>>,
    edge_points: BTreeMap<Sym, usize>,
}

impl<'a> Redex<'a> {
    fn new(l: &'a Bigraph) -> Redex<'a> {
        let mut node_kids: BTreeMap<Parent, Vec<Sym>> = BTreeMap::new();
        let mut site_kids: BTreeMap<Parent, Vec<usize>> = BTreeMap::new();
        for (c, p) in l.prnt() {
            match c {
                Child::Node(v) => node_kids.entry(p.clone()).or_default().push(v.clone()),
                Child::Site(s) => site_kids.entry(p.clone()).or_default().push(*s),
            }
        }
        let mut order = Vec::new();
        let mut queue: std::collections::VecDeque<Parent> =
            (0..l.outer().width).map(Parent::Root).collect();
        while let Some(p) = queue.pop_front() {
            for v in node_kids.get(&p).into_iter().flatten() {
                order.push(v.clone());
                queue.push_back(Parent::Node(v.clone()));
            }
        }
        let mut edge_points = BTreeMap::new();
        for lk in l.link().values() {
            if let Link::Edge(e) = lk {
                *edge_points.entry(e.clone()).or_insert(0) += 1;
            }
        }
        Redex {
            l,
            order,
            node_kids,
            site_kids,
            edge_points,
        }
    }

    fn kid_count(&self, p: &Parent) -> usize {
        self.node_kids.get(p).map_or(0, |v| v.len())
    }

    fn has_sites(&self, p: &Parent) -> bool {
        self.site_kids.get(p).is_some_and(|v| !v.is_empty())
    }
}

struct Agent<'a> {
    b: &'a Bigraph,
    kids: BTreeMap<Parent, Vec<Sym>>,
    points: BTreeMap<Link, usize>,
}

impl Agent<'_> {
    fn kids(&self, p: &Parent) -> &[Sym] {
        self.kids.get(p).map_or(&[], |v| v.as_slice())
    }

    fn places(&self) -> Vec<Parent> {
        let mut out: Vec<Parent> = (0..self.b.outer().width).map(Parent::Root).collect();
        out.extend(self.b.nodes().keys().map(|v| Parent::Node(v.clone())));
        out
    }

    fn parent(&self, v: &Sym) -> Parent {
        self.b
            .parent(&Child::Node(v.clone()))
            .cloned()
            .expect("agent is well formed")
    }

    fn subtree(&self, v: &Sym, out: &mut BTreeSet<Sym>) {
        out.insert(v.clone());
        for c in self.kids(&Parent::Node(v.clone())) {
            self.subtree(c, out);
        }
    }
}

#[derive(Clone, Default)]
struct Partial {
    places: Vec<Option<Parent>>,
    nodes: BTreeMap<Sym, Sym>,
    used: BTreeSet<Sym>,
    edges: BTreeMap<Sym, Sym>,
    used_edges: BTreeSet<Sym>,
    names: BTreeMap<Sym, Link>,
}

struct Search<'a> {
    r: Redex<'a>,
    a: Agent<'a>,
    found: Vec<Partial>,
}

impl Search<'_> {
    fn image_parent(&self, st: &Partial, p: &Parent) -> Option<Parent> {
        match p {
            Parent::Node(w) => st.nodes.get(w).map(|x| Parent::Node(x.clone())),
            Parent::Root(r) => st.places[*r].clone(),
        }
    }

    /// Extends the link maps with the ports of `u ↦ x`, or returns `None`.
    fn link_ports(&self, st: &Partial, u: &Sym, x: &Sym) -> Option<Partial> {
        let mut st = st.clone();
        for i in 1..=self.r.l.arity(u) {
            let theirs = self.a.b.link().get(&Point::Port(x.clone(), i))?;
            match self.r.l.link().get(&Point::Port(u.clone(), i))? {
                Link::Edge(e) => {
                    let Link::Edge(ae) = theirs else { return None };
                    match st.edges.get(e) {
                        Some(m) if m == ae => {}
                        Some(_) => return None,
                        None => {
                            if st.used_edges.contains(ae)
                                || self.a.points.get(theirs) != self.r.edge_points.get(e)
                            {
                                return None;
                            }
                            st.edges.insert(e.clone(), ae.clone());
                            st.used_edges.insert(ae.clone());
                        }
                    }
                }
                Link::Outer(j) => match st.names.get(j) {
                    Some(t) if t == theirs => {}
                    Some(_) => return None,
                    None => {
                        st.names.insert(j.clone(), theirs.clone());
                    }
                },
            }
        }
        Some(st)
    }

    fn nodes(&mut self, k: usize, st: Partial) {
        if k == self.r.order.len() {
            self.roots(0, st);
            return;
        }
        let u = self.r.order[k].clone();
        let lp = self.r.l.parent(&Child::Node(u.clone())).cloned().expect("redex is well formed");
        let ctrl = self.r.l.control(&u).cloned();
        let up = Parent::Node(u.clone());
        let need = self.r.kid_count(&up);
        let exact = !self.r.has_sites(&up);
        let cands: Vec<Sym> = match self.image_parent(&st, &lp) {
            Some(p) => self.a.kids(&p).to_vec(),
            None => self.a.b.nodes().keys().cloned().collect(),
        };
        for x in cands {
            if st.used.contains(&x) || self.a.b.control(&x).cloned() != ctrl {
                continue;
            }
            let n = self.a.kids(&Parent::Node(x.clone())).len();
            if (exact && n != need) || n < need {
                continue;
            }
            let mut next = st.clone();
            if let Parent::Root(r) = lp {
                if next.places[r].is_none() {
                    let p = self.a.parent(&x);
                    if next.places.iter().any(|q| q.as_ref() == Some(&p)) {
                        continue;
                    }
                    next.places[r] = Some(p);
                }
            }
            let Some(mut next) = self.link_ports(&next, &u, &x) else {
                continue;
            };
            next.nodes.insert(u.clone(), x.clone());
            next.used.insert(x);
            self.nodes(k + 1, next);
        }
    }

    /// Places for roots without node children.
    fn roots(&mut self, r: usize, st: Partial) {
        if r == st.places.len() {
            self.found.push(st);
            return;
        }
        if st.places[r].is_some() {
            return self.roots(r + 1, st);
        }
        for p in self.a.places() {
            if st.places.iter().any(|q| q.as_ref() == Some(&p)) {
                continue;
            }
            let mut next = st.clone();
            next.places[r] = Some(p);
            self.roots(r + 1, next);
        }
    }
}

/// A residual sub-forest and where it may go.
struct Host {
    sites: Vec<usize>,
    residual: Vec<Sym>,
    may_stay: bool,
}

fn odometer(radix: &[usize]) -> Vec<Vec<usize>> {
    if radix.contains(&0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0; radix.len()];
    loop {
        out.push(cur.clone());
        let mut i = 0;
        loop {
            if i == radix.len() {
                return out;
            }
            cur[i] += 1;
            if cur[i] < radix[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// Every decomposition of a ground, well-formed agent. Agents that are not
/// ground, or that use another signature, have none.
pub fn find_matches(agent: &Bigraph, rule: &ParametricReactionRule) -> Vec<Decomposition> {
    let l = rule.redex();
    if !agent.is_ground() || agent.signature() != l.signature() {
        return Vec::new();
    }
    let mut kids: BTreeMap<Parent, Vec<Sym>> = BTreeMap::new();
    for (c, p) in agent.prnt() {
        if let Child::Node(v) = c {
            kids.entry(p.clone()).or_default().push(v.clone());
        }
    }
    let mut points = BTreeMap::new();
    for lk in agent.link().values() {
        *points.entry(lk.clone()).or_insert(0) += 1;
    }
    let mut search = Search {
        r: Redex::new(l),
        a: Agent {
            b: agent,
            kids,
            points,
        },
        found: Vec::new(),
    };
    let start = Partial {
        places: vec![None; l.outer().width],
        ..Partial::default()
    };
    search.nodes(0, start);
    let partials = std::mem::take(&mut search.found);

    let mut out = Vec::new();
    for st in partials {
        let places: Vec<Parent> = st.places.iter().map(|p| p.clone().expect("placed")).collect();
        if places.iter().any(|p| matches!(p, Parent::Node(v) if st.used.contains(v))) {
            continue;
        }
        if st
            .names
            .values()
            .any(|t| matches!(t, Link::Edge(e) if st.used_edges.contains(e)))
        {
            continue;
        }
        // idle outer names of the redex may denote any link outside the redex
        let idle: Vec<Sym> = l
            .outer()
            .names
            .iter()
            .filter(|j| !st.names.contains_key(*j))
            .cloned()
            .collect();
        let mut targets: Vec<Link> = agent
            .edges()
            .iter()
            .filter(|e| !st.used_edges.contains(*e))
            .map(|e| Link::Edge(e.clone()))
            .collect();
        targets.extend(agent.outer().names.iter().map(|y| Link::Outer(y.clone())));

        let mut hosts = Vec::new();
        for (lp, sites) in &search.r.site_kids {
            let (place, may_stay) = match lp {
                Parent::Node(u) => (Parent::Node(st.nodes[u].clone()), false),
                Parent::Root(r) => (places[*r].clone(), true),
            };
            let taken: BTreeSet<&Sym> = search
                .r
                .node_kids
                .get(lp)
                .into_iter()
                .flatten()
                .map(|u| &st.nodes[u])
                .collect();
            let residual = search
                .a
                .kids(&place)
                .iter()
                .filter(|x| !taken.contains(x))
                .cloned()
                .collect();
            hosts.push(Host {
                sites: sites.clone(),
                residual,
                may_stay,
            });
        }
        let mut radix: Vec<usize> = Vec::new();
        for h in &hosts {
            radix.extend(h.residual.iter().map(|_| h.sites.len() + usize::from(h.may_stay)));
        }
        radix.extend(idle.iter().map(|_| targets.len()));

        for choice in odometer(&radix) {
            let mut params = vec![Vec::new(); l.inner().width];
            let mut k = 0;
            for h in &hosts {
                for x in &h.residual {
                    if let Some(s) = h.sites.get(choice[k]) {
                        params[*s].push(x.clone());
                    }
                    k += 1;
                }
            }
            let mut names = st.names.clone();
            for j in &idle {
                names.insert(j.clone(), targets[choice[k]].clone());
                k += 1;
            }
            let occ = Occurrence {
                places: places.clone(),
                nodes: st.nodes.clone(),
                edges: st.edges.clone(),
                names,
                params,
            };
            if let Some(d) = build(agent, rule, &search.a, occ) {
                out.push(d);
            }
        }
    }
    out
}

fn build(agent: &Bigraph, rule: &ParametricReactionRule, a: &Agent<'_>, occ: Occurrence) -> Option<Decomposition> {
    let l = rule.redex();
    let sig = agent.signature().clone();
    let image: BTreeSet<Sym> = occ.nodes.values().cloned().collect();
    let mut param_nodes = BTreeSet::new();
    for roots in &occ.params {
        for x in roots {
            a.subtree(x, &mut param_nodes);
        }
    }
    if param_nodes.iter().any(|v| image.contains(v)) {
        return None;
    }
    if occ
        .places
        .iter()
        .any(|p| matches!(p, Parent::Node(v) if param_nodes.contains(v)))
    {
        return None;
    }

    let mut z = BTreeSet::new();
    for v in &param_nodes {
        for i in 1..=agent.arity(v) {
            z.insert(bypass_name(&agent.link()[&Point::Port(v.clone(), i)]));
        }
    }

    let mut param = Bigraph::new(sig.clone(), Interface::unit(), Interface::with_names(l.inner().width, z.clone()));
    for (s, roots) in occ.params.iter().enumerate() {
        for x in roots {
            param.prnt.insert(Child::Node(x.clone()), Parent::Root(s));
        }
    }
    for v in &param_nodes {
        param.nodes.insert(v.clone(), agent.nodes()[v].clone());
        param
            .prnt
            .entry(Child::Node(v.clone()))
            .or_insert_with(|| a.parent(v));
        for i in 1..=agent.arity(v) {
            let t = &agent.link()[&Point::Port(v.clone(), i)];
            param
                .link
                .insert(Point::Port(v.clone(), i), Link::Outer(bypass_name(t)));
        }
    }

    let redex = l.rename(|v| occ.nodes[v].clone(), |e| occ.edges[e].clone());
    let identity = Bigraph::identity(sig.clone(), Interface::with_names(0, z.clone()));

    let inner_names: BTreeSet<Sym> = l.outer().names.union(&z).cloned().collect();
    let mut ctx = Bigraph::new(
        sig,
        Interface::with_names(l.outer().width, inner_names),
        agent.outer().clone(),
    );
    let used_edges: BTreeSet<&Sym> = occ.edges.values().collect();
    for (v, c) in agent.nodes() {
        if image.contains(v) || param_nodes.contains(v) {
            continue;
        }
        ctx.nodes.insert(v.clone(), c.clone());
        ctx.prnt.insert(Child::Node(v.clone()), a.parent(v));
        for i in 1..=agent.arity(v) {
            let p = Point::Port(v.clone(), i);
            ctx.link.insert(p.clone(), agent.link()[&p].clone());
        }
    }
    for e in agent.edges() {
        if !used_edges.contains(e) {
            ctx.edges.insert(e.clone());
        }
    }
    for (r, p) in occ.places.iter().enumerate() {
        ctx.prnt.insert(Child::Site(r), p.clone());
    }
    for (j, t) in &occ.names {
        ctx.link.insert(Point::Inner(j.clone()), t.clone());
    }
    for v in &param_nodes {
        for i in 1..=agent.arity(v) {
            let t = &agent.link()[&Point::Port(v.clone(), i)];
            ctx.link.insert(Point::Inner(bypass_name(t)), t.clone());
        }
    }

    let d = Decomposition {
        context: ctx,
        identity,
        redex,
        parameter: param,
        occurrence: occ,
    };
    let back = d.recompose().ok()?;
    if back != *agent && lean_equiv(&back, agent).is_none() {
        debug_assert!(false, "recomposition differs from the agent");
        return None;
    }
    Some(d)
}
