//! The linear-size CDAWG: a CDAWG whose edges are split by non-branching
//! type-2 nodes and re-encoded as (first symbol, label length).
//!
//! Once type-2 nodes are in place, every edge label of length at least two is
//! spelled by a path hanging off a suffix-link target (its edge suffix link),
//! and that path only passes through type-2 nodes. Jump links resolve chains of
//! single-edge suffix links so each long edge decomposes into at least two
//! strictly shorter ones; the SLP is built on top of that decomposition.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::cdawg::Cdawg;
use crate::error::{Error, Result};
use crate::ids::{EdgeId, NodeId, SINK, SOURCE};
use crate::text::Text;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    /// Node inherited from the CDAWG.
    Type1,
    /// Inserted non-branching node whose suffix link is a type-1 node.
    Type2,
}

/// Shortcut from a type-2 node to the first type-1 node below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Skip {
    pub target: NodeId,
    /// Total label length of the contracted chain.
    pub len: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LNode {
    pub kind: NodeKind,
    pub slink: Option<NodeId>,
    pub skip: Option<Skip>,
    pub(crate) edges: Range<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LEdge {
    pub hi: NodeId,
    pub lo: NodeId,
    pub first: u8,
    pub slen: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LCdawg {
    pub(crate) nodes: Vec<LNode>,
    pub(crate) edges: Vec<LEdge>,
}

/// A downward path of edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePath {
    pub edges: Vec<EdgeId>,
    pub slen: u64,
}

impl EdgePath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn hi(&self, g: &LCdawg) -> NodeId {
        g.edge(self.edges[0]).hi
    }

    pub fn lo(&self, g: &LCdawg) -> NodeId {
        g.edge(*self.edges.last().unwrap()).lo
    }
}

/// Text positions kept only while the text is still around: where each edge
/// label occurs in `T$` and the length of the longest string of each node.
#[derive(Debug, Clone, Default)]
pub struct LabelTrace {
    pub edge_start: Vec<u64>,
    pub node_depth: Vec<u64>,
}

impl LabelTrace {
    pub fn label<'t>(&self, g: &LCdawg, e: EdgeId, text: &'t Text) -> &'t [u8] {
        let start = self.edge_start[e.index()] as usize;
        &text.with_sentinel()[start..start + g.edge(e).slen as usize]
    }
}

/// Splits CDAWG edges at type-2 positions.
///
/// For each edge `(u, x, v)` the path spelling `x` from `slink(u)` is walked in
/// the CDAWG; every type-1 node strictly inside that walk yields a type-2 node
/// on the edge at the same offset. The source has no suffix link; its edges are
/// walked from a virtual parent whose every symbol leads to the source, so each
/// source edge of length at least two is split after its first symbol.
pub fn insert_type2_nodes(cdawg: &Cdawg, text: &Text) -> Result<(LCdawg, LabelTrace)> {
    let s = text.with_sentinel();
    let n1 = cdawg.node_count();

    let mut nodes: Vec<LNode> = Vec::with_capacity(n1);
    let mut node_depth: Vec<u64> = Vec::with_capacity(n1);
    for (_, node) in cdawg.nodes() {
        nodes.push(LNode {
            kind: NodeKind::Type1,
            slink: node.slink,
            skip: None,
            edges: 0..0,
        });
        node_depth.push(node.depth);
    }

    // out[v] = (first, lo, slen, start) in first-symbol order
    let mut out: Vec<Vec<(u8, NodeId, u64, u64)>> = vec![Vec::new(); n1];
    let mut offsets: Vec<(u64, NodeId)> = Vec::new();

    for e in cdawg.edges() {
        offsets.clear();
        if e.len >= 2 {
            let (mut at, mut depth) = if e.hi == SOURCE {
                offsets.push((1, SOURCE));
                (SOURCE, 1)
            } else {
                let link = cdawg.node(e.hi).slink.ok_or_else(|| {
                    Error::Internal(format!("type-1 node {} has no suffix link", e.hi))
                })?;
                (link, 0)
            };
            while depth < e.len {
                let c = s[(e.start + depth) as usize];
                let f = cdawg.child(at, c).ok_or_else(|| {
                    Error::Internal(format!(
                        "walk from slink({}) cannot spell edge label at offset {depth}",
                        e.hi
                    ))
                })?;
                let f = cdawg.edge(f);
                if depth + f.len > e.len {
                    break;
                }
                depth += f.len;
                at = f.lo;
                if depth < e.len {
                    offsets.push((depth, at));
                }
            }
        }

        let mut prev = e.hi;
        let mut prev_off = 0u64;
        for &(off, inducer) in &offsets {
            let t2 = NodeId::from_index(nodes.len());
            nodes.push(LNode {
                kind: NodeKind::Type2,
                slink: Some(inducer),
                skip: Some(Skip {
                    target: e.lo,
                    len: e.len - off,
                }),
                edges: 0..0,
            });
            node_depth.push(node_depth[e.hi.index()] + off);
            out.push(Vec::new());
            let start = e.start + prev_off;
            out[prev.index()].push((s[start as usize], t2, off - prev_off, start));
            prev = t2;
            prev_off = off;
        }
        let start = e.start + prev_off;
        out[prev.index()].push((s[start as usize], e.lo, e.len - prev_off, start));
    }

    let mut edges = Vec::with_capacity(out.iter().map(Vec::len).sum());
    let mut edge_start = Vec::with_capacity(edges.capacity());
    for (v, list) in out.into_iter().enumerate() {
        let begin = edges.len() as u32;
        for (first, lo, slen, start) in list {
            edges.push(LEdge {
                hi: NodeId::from_index(v),
                lo,
                first,
                slen,
            });
            edge_start.push(start);
        }
        nodes[v].edges = begin..edges.len() as u32;
    }

    Ok((
        LCdawg { nodes, edges },
        LabelTrace {
            edge_start,
            node_depth,
        },
    ))
}

impl LCdawg {
    /// Assembles a graph from edges grouped by `hi` in node order. Used by the decoder.
    pub(crate) fn from_parts(
        kinds: Vec<(NodeKind, Option<NodeId>, Option<Skip>)>,
        edges: Vec<LEdge>,
    ) -> Self {
        let mut nodes: Vec<LNode> = kinds
            .into_iter()
            .map(|(kind, slink, skip)| LNode {
                kind,
                slink,
                skip,
                edges: 0..0,
            })
            .collect();
        let mut i = 0usize;
        for (v, node) in nodes.iter_mut().enumerate() {
            let begin = i;
            while i < edges.len() && edges[i].hi.index() == v {
                i += 1;
            }
            node.edges = begin as u32..i as u32;
        }
        LCdawg { nodes, edges }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn type2_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Type2)
            .count()
    }

    pub fn node(&self, v: NodeId) -> &LNode {
        &self.nodes[v.index()]
    }

    pub fn kind(&self, v: NodeId) -> NodeKind {
        self.nodes[v.index()].kind
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &LNode)> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (NodeId::from_index(i), n))
    }

    pub fn edge(&self, e: EdgeId) -> &LEdge {
        &self.edges[e.index()]
    }

    pub fn edges(&self) -> &[LEdge] {
        &self.edges
    }

    pub fn edge_ids(&self, v: NodeId) -> impl Iterator<Item = EdgeId> {
        let r = &self.nodes[v.index()].edges;
        (r.start..r.end).map(EdgeId)
    }

    pub fn out_edges(&self, v: NodeId) -> &[LEdge] {
        let r = &self.nodes[v.index()].edges;
        &self.edges[r.start as usize..r.end as usize]
    }

    /// Out-edge of `v` starting with `c`, by binary search over sorted children.
    #[inline]
    pub fn child(&self, v: NodeId, c: u8) -> Option<EdgeId> {
        let r = &self.nodes[v.index()].edges;
        let out = &self.edges[r.start as usize..r.end as usize];
        out.binary_search_by_key(&c, |e| e.first)
            .ok()
            .map(|i| EdgeId(r.start + i as u32))
    }

    /// The single out-edge of a type-2 node.
    #[inline]
    fn chain_next(&self, v: NodeId) -> EdgeId {
        EdgeId(self.nodes[v.index()].edges.start)
    }

    fn esuf_first(&self, e: EdgeId) -> Result<EdgeId> {
        let edge = self.edge(e);
        let base = self.node(edge.hi).slink.ok_or_else(|| {
            Error::Internal(format!("edge {e} of length {} leaves the source", edge.slen))
        })?;
        self.child(base, edge.first).ok_or_else(|| {
            Error::Internal(format!("slink({}) has no edge for edge {e}", edge.hi))
        })
    }

    /// Follows the unique out-chain from `first` until a type-1 node is reached.
    fn chain_from(&self, first: EdgeId) -> EdgePath {
        let mut edges = vec![first];
        let mut slen = self.edge(first).slen;
        let mut lo = self.edge(first).lo;
        while self.kind(lo) == NodeKind::Type2 {
            let next = self.chain_next(lo);
            edges.push(next);
            slen += self.edge(next).slen;
            lo = self.edge(next).lo;
        }
        EdgePath { edges, slen }
    }

    /// The edge suffix link of `e`: the path from `slink(e.hi)` spelling `lab(e)`.
    ///
    /// Computed on demand with one child lookup followed by a walk down the
    /// non-branching chain of type-2 nodes.
    pub fn edge_suffix_link(&self, e: EdgeId) -> Result<EdgePath> {
        let slen = self.edge(e).slen;
        if slen < 2 {
            return Err(Error::Internal(format!("edge {e} is atomic")));
        }
        let path = self.chain_from(self.esuf_first(e)?);
        if path.slen != slen {
            return Err(Error::Internal(format!(
                "e-suf({e}) spells {} symbols, expected {slen}",
                path.slen
            )));
        }
        Ok(path)
    }

    /// Computes the first edge of `jump(e)` for every edge of length at least two.
    pub fn compute_jump_links(&self) -> Result<JumpTable> {
        const FRESH: u8 = 0;
        const ACTIVE: u8 = 1;
        const DONE: u8 = 2;
        let m = self.edges.len();
        let mut first: Vec<Option<EdgeId>> = vec![None; m];
        let mut state = vec![FRESH; m];
        let mut stack: Vec<EdgeId> = Vec::new();

        for start in 0..m {
            if self.edges[start].slen < 2 || state[start] == DONE {
                continue;
            }
            stack.push(EdgeId::from_index(start));
            while let Some(&cur) = stack.last() {
                state[cur.index()] = ACTIVE;
                let e1 = self.esuf_first(cur)?;
                let (s1, s) = (self.edge(e1).slen, self.edge(cur).slen);
                if s1 < s {
                    first[cur.index()] = Some(e1);
                } else if s1 > s {
                    return Err(Error::Internal(format!(
                        "e-suf({cur}) overshoots: first edge {e1} longer than the label"
                    )));
                } else {
                    match state[e1.index()] {
                        DONE => first[cur.index()] = first[e1.index()],
                        ACTIVE => return Err(Error::Cycle(format!("jump link of {cur}"))),
                        _ => {
                            stack.push(e1);
                            continue;
                        }
                    }
                }
                state[cur.index()] = DONE;
                stack.pop();
            }
        }
        Ok(JumpTable { first })
    }

    /// Materializes `jump(e)` from the stored first-edge pointer.
    pub fn jump(&self, table: &JumpTable, e: EdgeId) -> Option<EdgePath> {
        table.first(e).map(|f| self.chain_from(f))
    }

    /// Topological order of nodes, or `None` if the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<NodeId>> {
        let mut indeg = vec![0u32; self.nodes.len()];
        for e in &self.edges {
            indeg[e.lo.index()] += 1;
        }
        let mut order: Vec<NodeId> = indeg
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 0)
            .map(|(i, _)| NodeId::from_index(i))
            .collect();
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for e in self.out_edges(v) {
                let d = &mut indeg[e.lo.index()];
                *d -= 1;
                if *d == 0 {
                    order.push(e.lo);
                }
            }
        }
        (order.len() == self.nodes.len()).then_some(order)
    }

    /// Number of paths from each node to the sink.
    pub fn path_counts(&self) -> Result<Vec<u64>> {
        let order = self
            .topological_order()
            .ok_or_else(|| Error::Cycle("node graph".into()))?;
        let mut count = vec![0u64; self.nodes.len()];
        for &v in order.iter().rev() {
            count[v.index()] = if v == SINK {
                1
            } else {
                self.out_edges(v).iter().map(|e| count[e.lo.index()]).sum()
            };
        }
        Ok(count)
    }

    /// Contracts type-2 chains, returning `(hi, first, length, lo)` per type-1 out-edge.
    pub fn collapsed_edges(&self) -> Vec<(NodeId, u8, u64, NodeId)> {
        let mut out = Vec::new();
        for (v, node) in self.nodes() {
            if node.kind != NodeKind::Type1 {
                continue;
            }
            for e in self.out_edges(v) {
                let (lo, len) = match self.node(e.lo).skip {
                    Some(skip) if self.kind(e.lo) == NodeKind::Type2 => {
                        (skip.target, e.slen + skip.len)
                    }
                    _ => (e.lo, e.slen),
                };
                out.push((v, e.first, len, lo));
            }
        }
        out
    }

    /// Structural invariants that must hold with or without the text.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.nodes.len();
        if n < 2 {
            return Err("fewer than two nodes".into());
        }
        if self.kind(SOURCE) != NodeKind::Type1 || self.kind(SINK) != NodeKind::Type1 {
            return Err("source and sink must be type-1".into());
        }
        if self.node(SOURCE).slink.is_some() {
            return Err("source has a suffix link".into());
        }
        if !self.out_edges(SINK).is_empty() {
            return Err("sink has out-edges".into());
        }
        for e in &self.edges {
            if e.slen == 0 {
                return Err(format!("edge {}->{} has zero length", e.hi, e.lo));
            }
        }
        if let Some(e) = self.out_edges(SOURCE).iter().find(|e| e.slen != 1) {
            return Err(format!("source edge to {} is not atomic", e.lo));
        }
        let mut indeg = vec![0usize; n];
        for e in &self.edges {
            indeg[e.lo.index()] += 1;
        }
        for (v, node) in self.nodes() {
            let out = self.out_edges(v);
            if out.windows(2).any(|w| w[0].first >= w[1].first) {
                return Err(format!("{v}: children not strictly sorted"));
            }
            if v != SOURCE {
                if indeg[v.index()] == 0 {
                    return Err(format!("{v} unreachable"));
                }
                if node.slink.is_none() {
                    return Err(format!("{v} lacks a suffix link"));
                }
            }
            match node.kind {
                NodeKind::Type1 => {
                    if v != SINK && v != SOURCE && out.len() < 2 {
                        return Err(format!("type-1 {v} not branching"));
                    }
                    if node.skip.is_some() {
                        return Err(format!("type-1 {v} has a skip"));
                    }
                }
                NodeKind::Type2 => {
                    if out.len() != 1 {
                        return Err(format!("type-2 {v} has out-degree {}", out.len()));
                    }
                    if indeg[v.index()] != 1 {
                        return Err(format!("type-2 {v} has in-degree {}", indeg[v.index()]));
                    }
                    let link = node.slink.unwrap();
                    if self.kind(link) != NodeKind::Type1 {
                        return Err(format!("slink of type-2 {v} is type-2"));
                    }
                    let skip = node.skip.ok_or_else(|| format!("type-2 {v} lacks skip"))?;
                    let path = self.chain_from(self.chain_next(v));
                    if path.lo(self) != skip.target || path.slen != skip.len {
                        return Err(format!("skip of {v} disagrees with its chain"));
                    }
                }
            }
        }
        if self.topological_order().is_none() {
            return Err("graph has a cycle".into());
        }
        Ok(())
    }
}

/// First edge of `jump(e)` for each edge with `slen(e) >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpTable {
    pub(crate) first: Vec<Option<EdgeId>>,
}

impl JumpTable {
    #[inline]
    pub fn first(&self, e: EdgeId) -> Option<EdgeId> {
        self.first[e.index()]
    }

    pub fn len(&self) -> usize {
        self.first.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdawg::build_cdawg;

    fn build(s: &[u8]) -> (Text, Cdawg, LCdawg, LabelTrace) {
        let text = Text::new(s).unwrap();
        let cdawg = build_cdawg(&text);
        let (g, trace) = insert_type2_nodes(&cdawg, &text).unwrap();
        (text, cdawg, g, trace)
    }

    #[test]
    fn single_symbol_splits_source_edge() {
        let (text, _, g, trace) = build(b"a");
        g.check_invariants().unwrap();
        assert_eq!(g.type2_count(), 1);
        let labels: Vec<&[u8]> = (0..g.edge_count())
            .map(|i| trace.label(&g, EdgeId(i as u32), &text))
            .collect();
        assert!(labels.contains(&&b"a"[..]));
        assert!(labels.contains(&&b"\0"[..]));
    }

    #[test]
    fn atomic_edges_unsplit() {
        let (_, cdawg, g, _) = build(b"abcdbcda");
        let atomic = cdawg.edges().iter().filter(|e| e.len == 1).count();
        let collapsed = g.collapsed_edges();
        assert_eq!(collapsed.iter().filter(|c| c.2 == 1).count(), atomic);
    }

    #[test]
    fn collapse_reproduces_cdawg() {
        for s in [&b"abcdbcda"[..], b"ababaac", b"aaaaaaaa", b"abaababaabaab"] {
            let (_, cdawg, g, _) = build(s);
            g.check_invariants().unwrap();
            let mut expected: Vec<_> = cdawg
                .edges()
                .iter()
                .map(|e| (e.hi, e.first, e.len, e.lo))
                .collect();
            let mut got = g.collapsed_edges();
            expected.sort();
            got.sort();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn esuf_spells_label() {
        let (text, _, g, trace) = build(b"abcdbcda");
        for i in 0..g.edge_count() {
            let e = EdgeId(i as u32);
            if g.edge(e).slen < 2 {
                continue;
            }
            let p = g.edge_suffix_link(e).unwrap();
            let spelled: Vec<u8> = p
                .edges
                .iter()
                .flat_map(|&f| trace.label(&g, f, &text).to_vec())
                .collect();
            assert_eq!(spelled, trace.label(&g, e, &text));
            assert_eq!(g.kind(p.hi(&g)), NodeKind::Type1);
            assert_eq!(g.kind(p.lo(&g)), NodeKind::Type1);
        }
    }

    #[test]
    fn jumps_decompose_into_shorter_edges() {
        for s in [&b"aaaaaaaa"[..], b"abaababaabaab", b"abcdbcda", b"abcabcabcabc"] {
            let (text, _, g, trace) = build(s);
            let table = g.compute_jump_links().unwrap();
            for i in 0..g.edge_count() {
                let e = EdgeId(i as u32);
                if g.edge(e).slen < 2 {
                    assert!(table.first(e).is_none());
                    continue;
                }
                let p = g.jump(&table, e).unwrap();
                assert!(p.len() >= 2);
                assert!(p.edges.iter().all(|&f| g.edge(f).slen < g.edge(e).slen));
                let spelled: Vec<u8> = p
                    .edges
                    .iter()
                    .flat_map(|&f| trace.label(&g, f, &text).to_vec())
                    .collect();
                assert_eq!(spelled, trace.label(&g, e, &text));
            }
        }
    }
}
