//! The finished self-index: L-CDAWG topology, jump pointers, the SLP and
//! per-node path counts. Nothing here refers to the original text.

use crate::cdawg::{build_cdawg, Cdawg};
use crate::error::{Error, Result};
use crate::ids::{EdgeId, NodeId, SINK, SOURCE};
use crate::lcdawg::{insert_type2_nodes, JumpTable, LCdawg, LabelTrace, NodeKind};
use crate::slp::{build_slp, Slp};
use crate::text::{validate_pattern, Text};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Index {
    pub(crate) n: u64,
    pub(crate) sigma: u32,
    pub(crate) graph: LCdawg,
    pub(crate) jumps: JumpTable,
    pub(crate) slp: Slp,
    pub(crate) path_counts: Vec<u64>,
}

/// Construction-time artifacts that still refer to the text.
#[derive(Debug, Clone)]
pub struct BuildTrace {
    pub cdawg: Cdawg,
    pub labels: LabelTrace,
}

/// Where a pattern walk from the source ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Locus {
    /// Edge the walk stopped inside of, or `None` when it stopped on a node.
    pub edge: Option<EdgeId>,
    /// Symbols of `edge` consumed; 0 when the locus is a node.
    pub offset: u64,
    /// The node at the locus, or the lower end of `edge`.
    pub node: NodeId,
    /// Label length between the locus and `node`.
    pub below: u64,
    pub matched: u64,
}

impl Index {
    /// Runs the whole pipeline: CDAWG, type-2 nodes, jump links, SLP, path counts.
    pub fn build(text: &Text) -> Result<Index> {
        Self::build_traced(text).map(|(index, _)| index)
    }

    pub fn build_traced(text: &Text) -> Result<(Index, BuildTrace)> {
        let cdawg = build_cdawg(text);
        let (graph, labels) = insert_type2_nodes(&cdawg, text)?;
        let jumps = graph.compute_jump_links()?;
        let slp = build_slp(&graph, &jumps)?;
        let path_counts = graph.path_counts()?;
        let n = text.len() as u64;
        if slp.expansion_len(slp.root())? != n + 1 {
            return Err(Error::Internal("root does not derive the whole text".into()));
        }
        if path_counts[SOURCE.index()] != n + 1 {
            return Err(Error::Internal("source path count differs from n+1".into()));
        }
        let index = Index {
            n,
            sigma: text.sigma(),
            graph,
            jumps,
            slp,
            path_counts,
        };
        Ok((index, BuildTrace { cdawg, labels }))
    }

    /// Text length, sentinel excluded.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn graph(&self) -> &LCdawg {
        &self.graph
    }

    pub fn jumps(&self) -> &JumpTable {
        &self.jumps
    }

    pub fn slp(&self) -> &Slp {
        &self.slp
    }

    pub fn path_count(&self, v: NodeId) -> u64 {
        self.path_counts[v.index()]
    }

    /// Walks `pattern` from the source, reading edge labels through the SLP.
    pub fn locate(&self, pattern: &[u8]) -> Result<Option<Locus>> {
        validate_pattern(pattern)?;
        let m = pattern.len();
        let mut v = SOURCE;
        let mut j = 0usize;
        while j < m {
            let Some(e) = self.graph.child(v, pattern[j]) else {
                return Ok(None);
            };
            let edge = self.graph.edge(e);
            let take = edge.slen.min((m - j) as u64) as usize;
            if take > 1 {
                let mut cursor = self.slp.cursor(self.slp.var_of_edge(e))?;
                cursor.next();
                if !cursor.zip(&pattern[j + 1..j + take]).all(|(a, &b)| a == b) {
                    return Ok(None);
                }
            }
            j += take;
            if (take as u64) < edge.slen {
                return Ok(Some(Locus {
                    edge: Some(e),
                    offset: take as u64,
                    node: edge.lo,
                    below: edge.slen - take as u64,
                    matched: m as u64,
                }));
            }
            v = edge.lo;
        }
        Ok(Some(Locus {
            edge: None,
            offset: 0,
            node: v,
            below: 0,
            matched: m as u64,
        }))
    }

    /// All 1-based start positions of `pattern`, ascending.
    pub fn find(&self, pattern: &[u8]) -> Result<Vec<u64>> {
        let Some(locus) = self.locate(pattern)? else {
            return Ok(Vec::new());
        };
        let mut out = Vec::with_capacity(self.path_count(locus.node) as usize);
        self.report(locus, |p| out.push(p));
        out.sort_unstable();
        Ok(out)
    }

    /// Calls `emit` once per occurrence start, in depth-first order.
    ///
    /// Each path from the locus to the sink is one occurrence; if the path
    /// spells `r` more symbols, the occurrence starts at `(n+1) - (m+r) + 1`.
    /// Type-2 chains are crossed through their skip shortcut.
    pub fn report(&self, locus: Locus, mut emit: impl FnMut(u64)) {
        let end = self.n + 2 - locus.matched;
        let mut stack = vec![(locus.node, locus.below)];
        while let Some((v, r)) = stack.pop() {
            if v == SINK {
                emit(end - r);
                continue;
            }
            let node = self.graph.node(v);
            match (node.kind, node.skip) {
                (NodeKind::Type2, Some(skip)) => stack.push((skip.target, r + skip.len)),
                _ => {
                    for e in self.graph.out_edges(v).iter().rev() {
                        stack.push((e.lo, r + e.slen));
                    }
                }
            }
        }
    }

    pub fn count(&self, pattern: &[u8]) -> Result<u64> {
        Ok(self
            .locate(pattern)?
            .map_or(0, |locus| self.path_count(locus.node)))
    }

    pub fn exists(&self, pattern: &[u8]) -> Result<bool> {
        Ok(self.locate(pattern)?.is_some())
    }

    /// `T[i..min(i+m-1, n)]` for 1-based `i`.
    pub fn extract(&self, i: u64, m: u64) -> Result<Vec<u8>> {
        if i == 0 || i > self.n {
            return Err(Error::OutOfBounds { pos: i, max: self.n });
        }
        let take = m.min(self.n - i + 1);
        self.slp.access(self.slp.root(), i, take)
    }

    /// The whole text, sentinel excluded.
    pub fn text(&self) -> Vec<u8> {
        if self.n == 0 {
            return Vec::new();
        }
        self.extract(1, self.n).expect("root derives the text")
    }
}
