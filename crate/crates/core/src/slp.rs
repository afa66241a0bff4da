//! Straight-line program deriving every edge label and the whole text.
//!
//! Variables are numbered so that both children of a pair rule have smaller
//! ids than the rule itself; the id order is a topological order of the
//! dependency DAG, which is also what the decoder checks.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ids::{EdgeId, NodeId, VarId, SINK, SOURCE};
use crate::lcdawg::{JumpTable, LCdawg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Terminal(u8),
    Pair(VarId, VarId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slp {
    rules: Vec<Rule>,
    len: Vec<u64>,
    first: Vec<u8>,
    height: Vec<u32>,
    var_of_edge: Vec<VarId>,
    root: VarId,
}

/// Incremental rule store that keeps per-variable metadata in step.
#[derive(Default)]
struct RuleSet {
    rules: Vec<Rule>,
    len: Vec<u64>,
    first: Vec<u8>,
    height: Vec<u32>,
}

impl RuleSet {
    fn push(&mut self, rule: Rule) -> VarId {
        let (len, first, height) = match rule {
            Rule::Terminal(c) => (1, c, 1),
            Rule::Pair(l, r) => (
                self.len[l.index()].saturating_add(self.len[r.index()]),
                self.first[l.index()],
                1 + self.height[l.index()].max(self.height[r.index()]),
            ),
        };
        self.rules.push(rule);
        self.len.push(len);
        self.first.push(first);
        self.height.push(height);
        VarId::from_index(self.rules.len() - 1)
    }

    /// Right-leaning chain `Y1 -> v0 Y2, ..., Y(k-1) -> v(k-2) v(k-1)`; returns `Y1`.
    fn chain(&mut self, vars: &[VarId]) -> VarId {
        debug_assert!(!vars.is_empty());
        let mut tail = *vars.last().unwrap();
        for &v in vars[..vars.len() - 1].iter().rev() {
            tail = self.push(Rule::Pair(v, tail));
        }
        tail
    }
}

/// Builds the SLP from the jump links of `g`.
///
/// Atomic edges get a terminal rule. An edge with `jump(e) = (e1, ..., ek)` gets
/// `X(e) -> X(e1) Y1` plus a right-leaning chain `Y1 .. Y(k-2)` that is shared
/// by every edge with the same jump path. Edges are processed by increasing
/// label length, so each jump path only refers to variables that already exist.
/// The root derives the text through the longest source-to-sink path.
pub fn build_slp(g: &LCdawg, jumps: &JumpTable) -> Result<Slp> {
    let m = g.edge_count();
    let mut order: Vec<EdgeId> = (0..m).map(EdgeId::from_index).collect();
    order.sort_by_key(|&e| (g.edge(e).slen, e));

    const UNSET: VarId = VarId(u32::MAX);
    let mut var_of_edge = vec![UNSET; m];
    let mut set = RuleSet::default();
    let mut tails: HashMap<EdgeId, VarId> = HashMap::new();
    let mut vars: Vec<VarId> = Vec::new();

    for e in order {
        let edge = g.edge(e);
        let x = if edge.slen == 1 {
            set.push(Rule::Terminal(edge.first))
        } else {
            let path = g
                .jump(jumps, e)
                .ok_or_else(|| Error::Internal(format!("no jump link for {e}")))?;
            if path.len() < 2 {
                return Err(Error::Internal(format!("jump({e}) is a single edge")));
            }
            vars.clear();
            for &f in &path.edges {
                let v = var_of_edge[f.index()];
                if v == UNSET {
                    return Err(Error::Cycle(format!("variable of {f} needed by X({e})")));
                }
                vars.push(v);
            }
            let tail = if vars.len() == 2 {
                vars[1]
            } else {
                *tails
                    .entry(path.edges[0])
                    .or_insert_with(|| set.chain(&vars[1..]))
            };
            set.push(Rule::Pair(vars[0], tail))
        };
        if set.len[x.index()] != edge.slen {
            return Err(Error::Internal(format!(
                "X({e}) derives {} symbols, label has {}",
                set.len[x.index()],
                edge.slen
            )));
        }
        var_of_edge[e.index()] = x;
    }

    let path = longest_path(g)?;
    let path_vars: Vec<VarId> = path.iter().map(|e| var_of_edge[e.index()]).collect();
    let root = set.chain(&path_vars);

    Ok(Slp {
        rules: set.rules,
        len: set.len,
        first: set.first,
        height: set.height,
        var_of_edge,
        root,
    })
}

/// The longest source-to-sink path, which spells the whole text.
fn longest_path(g: &LCdawg) -> Result<Vec<EdgeId>> {
    let order = g
        .topological_order()
        .ok_or_else(|| Error::Cycle("node graph".into()))?;
    let mut best: Vec<Option<(u64, EdgeId)>> = vec![None; g.node_count()];
    let mut dist = vec![0u64; g.node_count()];
    for &v in order.iter().rev() {
        if v == SINK {
            continue;
        }
        for e in g.edge_ids(v) {
            let edge = g.edge(e);
            if edge.lo != SINK && best[edge.lo.index()].is_none() {
                continue;
            }
            let d = edge.slen + dist[edge.lo.index()];
            if best[v.index()].is_none_or(|(b, _)| d > b) {
                best[v.index()] = Some((d, e));
                dist[v.index()] = d;
            }
        }
    }
    let mut path = Vec::new();
    let mut v: NodeId = SOURCE;
    while v != SINK {
        let (_, e) = best[v.index()]
            .ok_or_else(|| Error::Internal(format!("{v} cannot reach the sink")))?;
        path.push(e);
        v = g.edge(e).lo;
    }
    Ok(path)
}

impl Slp {
    /// Rebuilds an SLP from raw rules, checking that every pair refers to
    /// smaller ids and that all references are in range.
    pub fn from_rules(rules: Vec<Rule>, var_of_edge: Vec<VarId>, root: VarId) -> Result<Slp, String> {
        let mut set = RuleSet::default();
        for (i, &rule) in rules.iter().enumerate() {
            if let Rule::Pair(l, r) = rule {
                if l.index() >= i || r.index() >= i {
                    return Err(format!("rule X{i} refers to a later variable"));
                }
            }
            set.push(rule);
        }
        let count = set.rules.len();
        if root.index() >= count {
            return Err(format!("root {root} out of range"));
        }
        if let Some(v) = var_of_edge.iter().find(|v| v.index() >= count) {
            return Err(format!("edge variable {v} out of range"));
        }
        Ok(Slp {
            rules: set.rules,
            len: set.len,
            first: set.first,
            height: set.height,
            var_of_edge,
            root,
        })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn production_count(&self) -> usize {
        self.rules.len()
    }

    pub fn root(&self) -> VarId {
        self.root
    }

    pub fn var_of_edge(&self, e: EdgeId) -> VarId {
        self.var_of_edge[e.index()]
    }

    pub fn edge_vars(&self) -> &[VarId] {
        &self.var_of_edge
    }

    fn check(&self, x: VarId) -> Result<()> {
        if x.index() < self.rules.len() {
            Ok(())
        } else {
            Err(Error::UnknownVariable(x.0))
        }
    }

    pub fn rule(&self, x: VarId) -> Result<Rule> {
        self.check(x)?;
        Ok(self.rules[x.index()])
    }

    /// `|F(x)|`.
    pub fn expansion_len(&self, x: VarId) -> Result<u64> {
        self.check(x)?;
        Ok(self.len[x.index()])
    }

    pub fn first_symbol(&self, x: VarId) -> Result<u8> {
        self.check(x)?;
        Ok(self.first[x.index()])
    }

    pub fn var_height(&self, x: VarId) -> Result<u32> {
        self.check(x)?;
        Ok(self.height[x.index()])
    }

    /// Maximum derivation-tree height over all variables; a terminal has height 1.
    pub fn height(&self) -> u32 {
        self.height.iter().copied().max().unwrap_or(0)
    }

    /// Streaming cursor over `F(x)` from its first symbol.
    pub fn cursor(&self, x: VarId) -> Result<Cursor<'_>> {
        self.check(x)?;
        Ok(Cursor {
            slp: self,
            stack: vec![x],
        })
    }

    /// Streaming cursor over `F(x)` starting at 1-based position `i`.
    ///
    /// Descends once comparing `i` against left-child lengths; the pending right
    /// siblings left on the stack are what the cursor streams afterwards.
    pub fn cursor_at(&self, x: VarId, i: u64) -> Result<Cursor<'_>> {
        self.check(x)?;
        let total = self.len[x.index()];
        if i == 0 || i > total {
            return Err(Error::OutOfBounds { pos: i, max: total });
        }
        let mut stack = Vec::with_capacity(self.height[x.index()] as usize);
        let mut var = x;
        let mut skip = i - 1;
        while let Rule::Pair(l, r) = self.rules[var.index()] {
            let left = self.len[l.index()];
            if skip < left {
                stack.push(r);
                var = l;
            } else {
                skip -= left;
                var = r;
            }
        }
        stack.push(var);
        Ok(Cursor { slp: self, stack })
    }

    /// `F(x)[1..min(m, |F(x)|)]`.
    pub fn expand_prefix(&self, x: VarId, m: u64) -> Result<Vec<u8>> {
        let take = m.min(self.expansion_len(x)?);
        if take == 1 {
            return Ok(vec![self.first[x.index()]]);
        }
        Ok(self.cursor(x)?.take(take as usize).collect())
    }

    /// Full expansion of `x`.
    pub fn expand(&self, x: VarId) -> Result<Vec<u8>> {
        let len = self.expansion_len(x)?;
        let mut out = Vec::with_capacity(len as usize);
        out.extend(self.cursor(x)?);
        Ok(out)
    }

    /// `F(x)[i..min(i+m-1, |F(x)|)]` with 1-based `i`.
    pub fn access(&self, x: VarId, i: u64, m: u64) -> Result<Vec<u8>> {
        let total = self.expansion_len(x)?;
        let cursor = self.cursor_at(x, i)?;
        let take = m.min(total - i + 1);
        Ok(cursor.take(take as usize).collect())
    }

    /// One rule per line, preceded by a header naming the root.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "slp rules={} root={}", self.rules.len(), self.root);
        for (i, rule) in self.rules.iter().enumerate() {
            let _ = match *rule {
                Rule::Terminal(c) => writeln!(out, "X{i} -> {}", symbol_literal(c)),
                Rule::Pair(l, r) => writeln!(out, "X{i} -> {l} {r}"),
            };
        }
        out
    }
}

fn symbol_literal(c: u8) -> String {
    if c.is_ascii_graphic() && c != b'\'' && c != b'\\' {
        format!("'{}'", c as char)
    } else {
        format!("0x{c:02x}")
    }
}

/// Resumable left-to-right reader over a variable's expansion.
#[derive(Debug, Clone)]
pub struct Cursor<'a> {
    slp: &'a Slp,
    stack: Vec<VarId>,
}

impl Iterator for Cursor<'_> {
    type Item = u8;

    #[inline]
    fn next(&mut self) -> Option<u8> {
        let mut var = self.stack.pop()?;
        loop {
            match self.slp.rules[var.index()] {
                Rule::Terminal(c) => return Some(c),
                Rule::Pair(l, r) => {
                    self.stack.push(r);
                    var = l;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// X0 -> a, X1 -> b, X2 -> X0 X1, X3 -> X2 X0  (F(X3) = "aba")
    fn tiny() -> Slp {
        Slp::from_rules(
            vec![
                Rule::Terminal(b'a'),
                Rule::Terminal(b'b'),
                Rule::Pair(VarId(0), VarId(1)),
                Rule::Pair(VarId(2), VarId(0)),
            ],
            vec![],
            VarId(3),
        )
        .unwrap()
    }

    #[test]
    fn metadata() {
        let slp = tiny();
        assert_eq!(slp.expansion_len(VarId(3)).unwrap(), 3);
        assert_eq!(slp.first_symbol(VarId(3)).unwrap(), b'a');
        assert_eq!(slp.var_height(VarId(3)).unwrap(), 3);
        assert_eq!(slp.height(), 3);
    }

    #[test]
    fn prefix_and_access() {
        let slp = tiny();
        assert_eq!(slp.expand(VarId(3)).unwrap(), b"aba");
        assert_eq!(slp.expand_prefix(VarId(3), 2).unwrap(), b"ab");
        assert_eq!(slp.expand_prefix(VarId(3), 10).unwrap(), b"aba");
        assert_eq!(slp.access(VarId(3), 2, 5).unwrap(), b"ba");
        assert_eq!(slp.access(VarId(3), 3, 1).unwrap(), b"a");
    }

    #[test]
    fn errors() {
        let slp = tiny();
        assert_eq!(slp.expand(VarId(9)), Err(Error::UnknownVariable(9)));
        assert_eq!(
            slp.access(VarId(3), 4, 1),
            Err(Error::OutOfBounds { pos: 4, max: 3 })
        );
        assert_eq!(
            slp.access(VarId(3), 0, 1),
            Err(Error::OutOfBounds { pos: 0, max: 3 })
        );
    }

    #[test]
    fn forward_references_rejected() {
        let err = Slp::from_rules(
            vec![Rule::Pair(VarId(0), VarId(0))],
            vec![],
            VarId(0),
        );
        assert!(err.is_err());
    }

    #[test]
    fn text_export() {
        let slp = tiny();
        let text = slp.to_text();
        assert_eq!(
            text,
            "slp rules=4 root=X3\nX0 -> 'a'\nX1 -> 'b'\nX2 -> X0 X1\nX3 -> X2 X0\n"
        );
        assert_eq!(symbol_literal(0), "0x00");
    }
}
