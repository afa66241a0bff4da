//! Compact directed acyclic word graph of a sentinel-terminated text.
//!
//! Built by constructing the suffix tree of `T$` and merging isomorphic subtrees
//! bottom-up. Two suffix-tree nodes are merged when their children agree on
//! (first symbol, label length, merged child); the label string itself is then
//! fixed as well, so no text comparison is needed.
//!
//! Edge labels are text intervals, so this structure is construction-time only.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};
use std::ops::Range;

use crate::ids::{EdgeId, NodeId, SINK, SOURCE};
use crate::suffix_tree::{SuffixTree, ROOT};
use crate::text::Text;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdawgNode {
    /// Length of the longest string of the node's class, `|value(v)|`.
    pub depth: u64,
    pub slink: Option<NodeId>,
    /// `value(v)` occurs in `T$` at this 0-based position.
    pub value_start: u64,
    edges: Range<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CdawgEdge {
    pub hi: NodeId,
    pub lo: NodeId,
    pub first: u8,
    /// 0-based start of the label in `T$`. The label is preceded there by `value(hi)`.
    pub start: u64,
    pub len: u64,
}

#[derive(Debug, Clone)]
pub struct Cdawg {
    nodes: Vec<CdawgNode>,
    edges: Vec<CdawgEdge>,
}

/// Keys are already mixed signature hashes; rehashing them is wasted work.
#[derive(Default)]
struct PremixedHasher(u64);

impl Hasher for PremixedHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 << 8) | b as u64;
        }
    }

    fn write_u64(&mut self, x: u64) {
        self.0 = x;
    }
}

/// (first byte, label length, child class) per child; equal signatures mean isomorphic subtrees.
fn signature<'a>(st: &'a SuffixTree, v: u32, class: &'a [u32]) -> impl Iterator<Item = (u8, usize, u32)> + 'a {
    st.children(v)
        .iter()
        .map(move |&(c, ch)| (c, st.nodes[ch as usize].edge_len(), class[ch as usize]))
}

/// Builds the CDAWG of `text·$`.
pub fn build_cdawg(text: &Text) -> Cdawg {
    let s = text.with_sentinel();
    let st = SuffixTree::build(s);

    let mut class = vec![u32::MAX; st.nodes.len()];
    // per class: (representative = deepest member, shallowest member)
    let mut members: Vec<(u32, u32)> = vec![(ROOT, ROOT), (u32::MAX, u32::MAX)];
    // signature hash -> most recent class with that hash; older ones via `collide`
    let mut by_hash: HashMap<u64, u32, BuildHasherDefault<PremixedHasher>> = HashMap::default();
    let mut collide: Vec<u32> = vec![u32::MAX; 2];

    for v in st.postorder() {
        let node = &st.nodes[v as usize];
        let k = if v == ROOT {
            SOURCE.0
        } else if st.is_leaf(v) {
            SINK.0
        } else {
            let h = signature(&st, v, &class).fold(0xcbf2_9ce4_8422_2325u64, |h, (c, len, k)| {
                let x = (c as u64) | (len as u64) << 8 ^ (k as u64) << 40;
                (h ^ x).wrapping_mul(0x0000_0100_0000_01b3).rotate_left(29)
            });
            let mut found = by_hash.get(&h).copied().unwrap_or(u32::MAX);
            while found != u32::MAX && !signature(&st, v, &class).eq(signature(&st, members[found as usize].0, &class)) {
                found = collide[found as usize];
            }
            if found == u32::MAX {
                found = members.len() as u32;
                members.push((v, v));
                collide.push(by_hash.insert(h, found).unwrap_or(u32::MAX));
            }
            found
        };
        class[v as usize] = k;
        let entry = &mut members[k as usize];
        if entry.0 == u32::MAX {
            *entry = (v, v);
        } else {
            if node.depth > st.nodes[entry.0 as usize].depth {
                entry.0 = v;
            }
            if node.depth < st.nodes[entry.1 as usize].depth {
                entry.1 = v;
            }
        }
    }

    let mut nodes = Vec::with_capacity(members.len());
    let mut edges = Vec::new();
    for (k, &(rep, shallow)) in members.iter().enumerate() {
        let rep_node = &st.nodes[rep as usize];
        let slink = match NodeId::from_index(k) {
            SOURCE => None,
            SINK => Some(SOURCE),
            _ => Some(NodeId(class[st.nodes[shallow as usize].link as usize])),
        };
        let first_edge = edges.len() as u32;
        for &(c, ch) in st.children(rep) {
            let child = &st.nodes[ch as usize];
            edges.push(CdawgEdge {
                hi: NodeId::from_index(k),
                lo: NodeId(class[ch as usize]),
                first: c,
                start: (child.witness + rep_node.depth) as u64,
                len: child.edge_len() as u64,
            });
        }
        nodes.push(CdawgNode {
            depth: rep_node.depth as u64,
            slink,
            value_start: rep_node.witness as u64,
            edges: first_edge..edges.len() as u32,
        });
    }
    Cdawg { nodes, edges }
}

impl Cdawg {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node(&self, v: NodeId) -> &CdawgNode {
        &self.nodes[v.index()]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &CdawgNode)> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (NodeId::from_index(i), n))
    }

    pub fn edge(&self, e: EdgeId) -> &CdawgEdge {
        &self.edges[e.index()]
    }

    pub fn edges(&self) -> &[CdawgEdge] {
        &self.edges
    }

    pub fn edge_ids(&self, v: NodeId) -> impl Iterator<Item = EdgeId> {
        let r = &self.nodes[v.index()].edges;
        (r.start..r.end).map(EdgeId)
    }

    pub fn out_edges(&self, v: NodeId) -> &[CdawgEdge] {
        let r = &self.nodes[v.index()].edges;
        &self.edges[r.start as usize..r.end as usize]
    }

    /// Out-edge of `v` whose label starts with `c`.
    pub fn child(&self, v: NodeId, c: u8) -> Option<EdgeId> {
        let r = &self.nodes[v.index()].edges;
        self.out_edges(v)
            .binary_search_by_key(&c, |e| e.first)
            .ok()
            .map(|i| EdgeId(r.start + i as u32))
    }

    pub fn value<'t>(&self, v: NodeId, text: &'t Text) -> &'t [u8] {
        let n = &self.nodes[v.index()];
        &text.with_sentinel()[n.value_start as usize..(n.value_start + n.depth) as usize]
    }

    pub fn label<'t>(&self, e: EdgeId, text: &'t Text) -> &'t [u8] {
        let e = &self.edges[e.index()];
        &text.with_sentinel()[e.start as usize..(e.start + e.len) as usize]
    }

    /// Node ids in decreasing depth order, which is a reverse topological order.
    pub fn reverse_topological(&self) -> Vec<NodeId> {
        let mut order: Vec<NodeId> = (0..self.nodes.len()).map(NodeId::from_index).collect();
        order.sort_by_key(|v| std::cmp::Reverse(self.nodes[v.index()].depth));
        order
    }

    /// Number of distinct paths from each node to the sink.
    pub fn path_count(&self) -> Vec<u64> {
        let mut count = vec![0u64; self.nodes.len()];
        for v in self.reverse_topological() {
            count[v.index()] = if v == SINK {
                1
            } else {
                self.out_edges(v).iter().map(|e| count[e.lo.index()]).sum()
            };
        }
        count
    }

    /// Checks the structural invariants: branching, distinct first symbols,
    /// decreasing suffix-link depth, single source and sink.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut indeg = vec![0usize; self.nodes.len()];
        for e in &self.edges {
            indeg[e.lo.index()] += 1;
        }
        for (v, node) in self.nodes() {
            let out = self.out_edges(v);
            if v == SINK {
                if !out.is_empty() {
                    return Err("sink has out-edges".into());
                }
            } else if v != SOURCE && out.len() < 2 {
                return Err(format!("{v} has out-degree {}", out.len()));
            }
            if out.windows(2).any(|w| w[0].first >= w[1].first) {
                return Err(format!("{v}: children not strictly sorted"));
            }
            if v != SOURCE {
                if indeg[v.index()] == 0 {
                    return Err(format!("{v} unreachable"));
                }
                let s = node.slink.ok_or_else(|| format!("{v} lacks slink"))?;
                if self.nodes[s.index()].depth >= node.depth {
                    return Err(format!("slink({v}) not shallower"));
                }
            }
            for e in out {
                if self.nodes[e.lo.index()].depth < node.depth + e.len {
                    return Err(format!("edge {v}->{} shrinks depth", e.lo));
                }
            }
        }
        if indeg[SOURCE.index()] != 0 {
            return Err("source has in-edges".into());
        }
        Ok(())
    }
}
