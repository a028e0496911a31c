//! Chiral interaction vertices and their Feynman graphs.
//!
//! Internal edges join the `beta`-leg of one vertex to an `alpha`-leg of
//! another. Orienting each edge from its `beta`-end makes every vertex have
//! out-degree at most one, which is what forces the one-loop structure.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChiralVertex {
    pub alpha_legs: u8,
    pub beta_legs: u8,
    /// Holomorphic derivative order per leg, alpha-legs first, then the beta-leg.
    pub deriv_orders: Vec<u8>,
    pub label: String,
}

impl ChiralVertex {
    pub fn new(alpha_legs: u8, beta_legs: u8, deriv_orders: Vec<u8>, label: &str) -> Result<Self> {
        if alpha_legs == 0 {
            return Err(Error::Domain("a chiral vertex needs an alpha-leg".into()));
        }
        if beta_legs > 1 {
            return Err(Error::Domain(
                "a chiral vertex has at most one beta-leg".into(),
            ));
        }
        if deriv_orders.len() != (alpha_legs + beta_legs) as usize {
            return Err(Error::Domain(format!(
                "expected {} derivative orders, got {}",
                alpha_legs + beta_legs,
                deriv_orders.len()
            )));
        }
        Ok(ChiralVertex {
            alpha_legs,
            beta_legs,
            deriv_orders,
            label: label.into(),
        })
    }

    /// `int <beta, [alpha, alpha]>`.
    pub fn cubic() -> Self {
        ChiralVertex::new(2, 1, vec![0, 0, 0], "cubic").unwrap()
    }

    /// `int <alpha, d alpha>`.
    pub fn chern_simons() -> Self {
        ChiralVertex::new(2, 0, vec![0, 1], "cs").unwrap()
    }

    /// A higher bracket `int <beta, l_3(alpha, alpha, alpha)>`.
    pub fn quartic() -> Self {
        ChiralVertex::new(3, 1, vec![0, 0, 0, 0], "quartic").unwrap()
    }

    /// Weight-zero trivalent vertex `int kappa(alpha, alpha, d alpha)`.
    pub fn cubic_weight_zero() -> Self {
        ChiralVertex::new(3, 0, vec![0, 0, 1], "cubic0").unwrap()
    }

    pub fn by_label(label: &str) -> Option<Self> {
        match label {
            "cubic" => Some(Self::cubic()),
            "cs" => Some(Self::chern_simons()),
            "quartic" => Some(Self::quartic()),
            "cubic0" => Some(Self::cubic_weight_zero()),
            _ => None,
        }
    }

    /// Number of beta-inputs.
    pub fn weight(&self) -> usize {
        self.beta_legs as usize
    }

    pub fn alpha_order(&self, leg: usize) -> u8 {
        self.deriv_orders[leg]
    }

    pub fn beta_order(&self) -> Option<u8> {
        (self.beta_legs == 1).then(|| self.deriv_orders[self.alpha_legs as usize])
    }

    /// Distinct alpha derivative orders with their multiplicities.
    fn alpha_classes(&self) -> Vec<(u8, u8)> {
        let mut v: Vec<(u8, u8)> = Vec::new();
        for &k in &self.deriv_orders[..self.alpha_legs as usize] {
            match v.iter_mut().find(|(o, _)| *o == k) {
                Some(e) => e.1 += 1,
                None => v.push((k, 1)),
            }
        }
        v.sort();
        v
    }

    fn signature(&self) -> String {
        let ks: Vec<String> = self.deriv_orders.iter().map(|k| k.to_string()).collect();
        format!(
            "{}:{}a{}b[{}]",
            self.label,
            self.alpha_legs,
            self.beta_legs,
            ks.join(",")
        )
    }
}

/// Inputs of a local functional, for the weight grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FunctionalSignature {
    pub alpha_inputs: usize,
    pub beta_inputs: usize,
}

/// Weight of a functional: its number of beta-inputs.
pub fn weight(sig: &FunctionalSignature) -> usize {
    sig.beta_inputs
}

/// Edge from the beta-leg of `source` into alpha-leg `target_leg` of `target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub target_leg: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiralGraph {
    pub vertices: Vec<ChiralVertex>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphClass {
    /// Tree with a single external beta-leg.
    BetaRootedTree,
    /// Tree without external beta-legs, hanging from a weight-zero vertex.
    IsolatedVertex,
    /// One directed cycle, all beta-legs internal.
    OneLoopWheel,
    Inadmissible,
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GraphClass::BetaRootedTree => "beta_rooted_tree",
            GraphClass::IsolatedVertex => "isolated_vertex",
            GraphClass::OneLoopWheel => "one_loop_wheel",
            GraphClass::Inadmissible => "inadmissible",
        };
        f.write_str(s)
    }
}

/// External leg of a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExternalLeg {
    Alpha { vertex: usize, leg: usize },
    Beta { vertex: usize },
}

impl ChiralGraph {
    pub fn new(vertices: Vec<ChiralVertex>, edges: Vec<Edge>) -> Self {
        ChiralGraph { vertices, edges }
    }

    /// Cyclic wheel `0 -> 1 -> ... -> n-1 -> 0` of cubic vertices, each edge
    /// entering alpha-leg 0.
    pub fn wheel(vertices: Vec<ChiralVertex>) -> Self {
        let n = vertices.len();
        let edges = (0..n)
            .map(|i| Edge {
                source: i,
                target: (i + 1) % n,
                target_leg: 0,
            })
            .collect();
        ChiralGraph { vertices, edges }
    }

    pub fn betti_number(&self) -> isize {
        self.edges.len() as isize - self.vertices.len() as isize + 1
    }

    /// Checks leg bookkeeping; returns a diagnostic on failure.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let n = self.vertices.len();
        let mut used_beta = vec![false; n];
        let mut used_alpha = BTreeSet::new();
        for e in &self.edges {
            if e.source >= n || e.target >= n {
                return Err(format!("edge {e:?} references a missing vertex"));
            }
            if self.vertices[e.source].beta_legs == 0 {
                return Err(format!("vertex {} has no beta-leg", e.source));
            }
            if std::mem::replace(&mut used_beta[e.source], true) {
                return Err(format!("beta-leg of vertex {} used twice", e.source));
            }
            if e.target_leg >= self.vertices[e.target].alpha_legs as usize {
                return Err(format!(
                    "vertex {} has no alpha-leg {}",
                    e.target, e.target_leg
                ));
            }
            if !used_alpha.insert((e.target, e.target_leg)) {
                return Err(format!(
                    "alpha-leg {} of vertex {} used twice",
                    e.target_leg, e.target
                ));
            }
        }
        Ok(())
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        let mut comps = n;
        for e in &self.edges {
            if e.source >= n || e.target >= n {
                continue;
            }
            let (a, b) = (find(&mut parent, e.source), find(&mut parent, e.target));
            if a != b {
                parent[a] = b;
                comps -= 1;
            }
        }
        comps == 1
    }

    pub fn external_legs(&self) -> Vec<ExternalLeg> {
        let mut out = Vec::new();
        for (v, vert) in self.vertices.iter().enumerate() {
            for leg in 0..vert.alpha_legs as usize {
                if !self
                    .edges
                    .iter()
                    .any(|e| e.target == v && e.target_leg == leg)
                {
                    out.push(ExternalLeg::Alpha { vertex: v, leg });
                }
            }
            if vert.beta_legs == 1 && !self.edges.iter().any(|e| e.source == v) {
                out.push(ExternalLeg::Beta { vertex: v });
            }
        }
        out
    }

    pub fn classify(&self) -> Result<GraphClass> {
        if !self.is_connected() {
            return Err(Error::Domain("graph is not connected".into()));
        }
        if self.validate().is_err() {
            return Ok(GraphClass::Inadmissible);
        }
        let external_beta = self
            .external_legs()
            .iter()
            .filter(|l| matches!(l, ExternalLeg::Beta { .. }))
            .count();
        Ok(match (self.betti_number(), external_beta) {
            (0, 1) => GraphClass::BetaRootedTree,
            (0, 0) => GraphClass::IsolatedVertex,
            (1, 0) => GraphClass::OneLoopWheel,
            _ => GraphClass::Inadmissible,
        })
    }

    /// Vertices of the directed cycle in order, if the graph has one.
    pub fn cycle(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut next = vec![None; n];
        for e in &self.edges {
            next[e.source] = Some(e.target);
        }
        for start in 0..n {
            let mut seen = vec![false; n];
            let mut v = start;
            while let Some(w) = next[v] {
                if seen[v] {
                    let mut cyc = vec![v];
                    let mut u = next[v].unwrap();
                    while u != v {
                        cyc.push(u);
                        u = next[u].unwrap();
                    }
                    return Some(cyc);
                }
                seen[v] = true;
                v = w;
            }
        }
        None
    }

    /// Isomorphism-invariant code of a connected admissible graph.
    pub fn canonical_code(&self) -> String {
        let n = self.vertices.len();
        let mut out_edge = vec![None; n];
        let mut children: Vec<Vec<(usize, u8)>> = vec![Vec::new(); n];
        for e in &self.edges {
            let k = self.vertices[e.target].alpha_order(e.target_leg);
            out_edge[e.source] = Some((e.target, k));
            children[e.target].push((e.source, k));
        }
        let sigs: Vec<String> = self.vertices.iter().map(|v| v.signature()).collect();
        fn code(v: usize, skip: Option<usize>, ch: &[Vec<(usize, u8)>], sigs: &[String]) -> String {
            let mut parts: Vec<String> = ch[v]
                .iter()
                .filter(|(c, _)| Some(*c) != skip)
                .map(|&(c, k)| format!("{k}{}", code(c, None, ch, sigs)))
                .collect();
            parts.sort();
            format!("({}{})", sigs[v], parts.concat())
        }
        match self.cycle() {
            None => {
                let root = (0..n).find(|&v| out_edge[v].is_none()).unwrap_or(0);
                format!("T{}", code(root, None, &children, &sigs))
            }
            Some(cyc) => {
                let m = cyc.len();
                let items: Vec<String> = (0..m)
                    .map(|i| {
                        let v = cyc[i];
                        let prev = cyc[(i + m - 1) % m];
                        let k = out_edge[v].unwrap().1;
                        format!("{}>{k}", code(v, Some(prev), &children, &sigs))
                    })
                    .collect();
                let best = (0..m)
                    .map(|r| {
                        (0..m)
                            .map(|i| items[(r + i) % m].as_str())
                            .collect::<Vec<_>>()
                            .concat()
                    })
                    .min()
                    .unwrap();
                format!("W{best}")
            }
        }
    }

    /// Short stable identifier derived from the canonical code.
    pub fn graph_id(&self) -> String {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in self.canonical_code().bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("g{:012x}", h & 0xffff_ffff_ffff)
    }

    /// Plain-text description, one item per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let ks: Vec<String> = v.deriv_orders.iter().map(|k| k.to_string()).collect();
            s.push_str(&format!(
                "vertex {i} {} alpha={} beta={} k={}\n",
                v.label,
                v.alpha_legs,
                v.beta_legs,
                ks.join(",")
            ));
        }
        for e in &self.edges {
            s.push_str(&format!(
                "edge {} -> {}.{}\n",
                e.source, e.target, e.target_leg
            ));
        }
        s
    }

    /// Parses the format written by [`ChiralGraph::to_text`]; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::Parse(format!("line {}: {msg}: {raw}", lineno + 1));
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "vertex" => {
                    if toks.len() < 3 {
                        return Err(bad("expected `vertex <index> <label> [alpha= beta= k=]`"));
                    }
                    let idx: usize = toks[1].parse().map_err(|_| bad("bad vertex index"))?;
                    if idx != vertices.len() {
                        return Err(bad("vertices must be listed in order"));
                    }
                    let label = toks[2];
                    let (mut a, mut b, mut k) = (None, None, None);
                    for t in &toks[3..] {
                        let (key, val) =
                            t.split_once('=').ok_or_else(|| bad("expected key=value"))?;
                        match key {
                            "alpha" => a = Some(val.parse::<u8>().map_err(|_| bad("bad alpha"))?),
                            "beta" => b = Some(val.parse::<u8>().map_err(|_| bad("bad beta"))?),
                            "k" => {
                                k = Some(
                                    val.split(',')
                                        .map(|x| x.parse::<u8>())
                                        .collect::<std::result::Result<Vec<_>, _>>()
                                        .map_err(|_| bad("bad derivative orders"))?,
                                )
                            }
                            _ => return Err(bad("unknown key")),
                        }
                    }
                    let v = match (a, b, k) {
                        (None, None, None) => ChiralVertex::by_label(label)
                            .ok_or_else(|| bad("unknown vertex label"))?,
                        (Some(a), Some(b), k) => {
                            let k = k.unwrap_or_else(|| vec![0; (a + b) as usize]);
                            ChiralVertex::new(a, b, k, label).map_err(|e| bad(&e.to_string()))?
                        }
                        _ => return Err(bad("give both alpha= and beta=")),
                    };
                    vertices.push(v);
                }
                "edge" => {
                    if toks.len() != 4 || toks[2] != "->" {
                        return Err(bad("expected `edge <source> -> <target>.<leg>`"));
                    }
                    let source = toks[1].parse().map_err(|_| bad("bad source"))?;
                    let (t, l) = toks[3]
                        .split_once('.')
                        .ok_or_else(|| bad("expected target.leg"))?;
                    let target = t.parse().map_err(|_| bad("bad target"))?;
                    let target_leg = l.parse().map_err(|_| bad("bad leg"))?;
                    edges.push(Edge {
                        source,
                        target,
                        target_leg,
                    });
                }
                _ => return Err(bad("unknown directive")),
            }
        }
        Ok(ChiralGraph { vertices, edges })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EnumerateOptions {
    pub allow_self_loops: bool,
}

/// Count of raw assignments visited and connected graphs found, for reporting.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    pub assignments: u64,
    pub connected: u64,
}

/// All connected graphs on exactly the given vertices, up to isomorphism, in
/// order of their canonical codes.
pub fn enumerate(vertices: &[ChiralVertex], opts: EnumerateOptions) -> Result<Vec<ChiralGraph>> {
    enumerate_with_stats(vertices, opts).map(|(g, _)| g)
}

pub fn enumerate_with_stats(
    vertices: &[ChiralVertex],
    opts: EnumerateOptions,
) -> Result<(Vec<ChiralGraph>, EnumerationStats)> {
    if vertices.len() > MAX_VERTICES {
        return Err(Error::Resource(format!(
            "{} vertices exceeds the enumeration budget of {MAX_VERTICES}",
            vertices.len()
        )));
    }
    let mut found = std::collections::BTreeMap::new();
    let mut stats = EnumerationStats::default();
    if vertices.is_empty() {
        return Ok((Vec::new(), stats));
    }
    // targets: (vertex, derivative class) with remaining capacity
    let classes: Vec<Vec<(u8, u8)>> = vertices.iter().map(|v| v.alpha_classes()).collect();
    let mut capacity: Vec<Vec<u8>> = classes
        .iter()
        .map(|c| c.iter().map(|x| x.1).collect())
        .collect();
    let sources: Vec<usize> = (0..vertices.len())
        .filter(|&v| vertices[v].beta_legs == 1)
        .collect();
    let mut choice: Vec<Option<(usize, usize)>> = vec![None; sources.len()];

    struct Ctx<'a> {
        vertices: &'a [ChiralVertex],
        classes: &'a [Vec<(u8, u8)>],
        sources: &'a [usize],
        opts: EnumerateOptions,
    }

    fn build(ctx: &Ctx<'_>, choice: &[Option<(usize, usize)>]) -> ChiralGraph {
        let mut used: Vec<Vec<u8>> = ctx.classes.iter().map(|c| vec![0; c.len()]).collect();
        let mut edges = Vec::new();
        for (i, c) in choice.iter().enumerate() {
            if let Some((w, cls)) = *c {
                let k = ctx.classes[w][cls].0;
                // the n-th free alpha-leg of order k
                let nth = used[w][cls] as usize;
                used[w][cls] += 1;
                let leg = ctx.vertices[w].deriv_orders[..ctx.vertices[w].alpha_legs as usize]
                    .iter()
                    .enumerate()
                    .filter(|(_, &o)| o == k)
                    .nth(nth)
                    .map(|(l, _)| l)
                    .unwrap();
                edges.push(Edge {
                    source: ctx.sources[i],
                    target: w,
                    target_leg: leg,
                });
            }
        }
        ChiralGraph {
            vertices: ctx.vertices.to_vec(),
            edges,
        }
    }

    fn rec(
        ctx: &Ctx<'_>,
        i: usize,
        choice: &mut Vec<Option<(usize, usize)>>,
        capacity: &mut Vec<Vec<u8>>,
        found: &mut std::collections::BTreeMap<String, ChiralGraph>,
        stats: &mut EnumerationStats,
    ) {
        if i == ctx.sources.len() {
            stats.assignments += 1;
            let g = build(ctx, choice);
            if g.is_connected() {
                stats.connected += 1;
                found.entry(g.canonical_code()).or_insert(g);
            }
            return;
        }
        choice[i] = None;
        rec(ctx, i + 1, choice, capacity, found, stats);
        for w in 0..ctx.vertices.len() {
            if w == ctx.sources[i] && !ctx.opts.allow_self_loops {
                continue;
            }
            for cls in 0..ctx.classes[w].len() {
                if capacity[w][cls] == 0 {
                    continue;
                }
                capacity[w][cls] -= 1;
                choice[i] = Some((w, cls));
                rec(ctx, i + 1, choice, capacity, found, stats);
                capacity[w][cls] += 1;
            }
        }
        choice[i] = None;
    }

    let ctx = Ctx {
        vertices,
        classes: &classes,
        sources: &sources,
        opts,
    };
    rec(&ctx, 0, &mut choice, &mut capacity, &mut found, &mut stats);
    Ok((found.into_values().collect(), stats))
}

/// All multisets of size `size` drawn from `types`, in lexicographic order.
pub fn multisets(types: &[ChiralVertex], size: usize) -> Vec<Vec<ChiralVertex>> {
    fn rec(
        types: &[ChiralVertex],
        start: usize,
        left: usize,
        cur: &mut Vec<ChiralVertex>,
        out: &mut Vec<Vec<ChiralVertex>>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..types.len() {
            cur.push(types[i].clone());
            rec(types, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(types, 0, size, &mut Vec::new(), &mut out);
    out
}
