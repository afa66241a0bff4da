//! Binary index file: fixed-width little-endian tables, validated on load.
//!
//! Layout (offsets in bytes, see `docs/FORMAT.md` for the full description):
//!
//! ```text
//! header   48 bytes   magic, version, id width, flags, n, sigma, counts, root
//! nodes    17 * V     kind u8, slink u32, skip target u32, skip length u64
//! edges    25 * E     hi u32, lo u32, first u8, slen u64, var u32, jump u32
//! rules     9 * R     tag u8, left u32, right u32
//! counts    8 * V     paths to the sink per node
//! ```

use std::io::{self, Read, Write};

use crate::error::FormatError;
use crate::ids::{EdgeId, NodeId, VarId, SINK, SOURCE};
use crate::index::Index;
use crate::lcdawg::{JumpTable, LCdawg, LEdge, NodeKind, Skip};
use crate::slp::{Rule, Slp};

pub const MAGIC: [u8; 4] = *b"LCDW";
pub const VERSION: u16 = 1;
pub const ID_WIDTH: u8 = 4;
pub const HEADER_LEN: usize = 48;
const NODE_LEN: usize = 17;
const EDGE_LEN: usize = 25;
const RULE_LEN: usize = 9;
const COUNT_LEN: usize = 8;
const NONE: u32 = u32::MAX;

const KIND_TYPE1: u8 = 1;
const KIND_TYPE2: u8 = 2;
const TAG_TERMINAL: u8 = 0;
const TAG_PAIR: u8 = 1;

/// True if `bytes` starts like an index file.
pub fn is_index_file(bytes: &[u8]) -> bool {
    bytes.starts_with(&MAGIC)
}

pub fn to_bytes(index: &Index) -> Vec<u8> {
    let g = &index.graph;
    let slp = &index.slp;
    let mut out = Vec::with_capacity(
        HEADER_LEN
            + g.node_count() * (NODE_LEN + COUNT_LEN)
            + g.edge_count() * EDGE_LEN
            + slp.production_count() * RULE_LEN,
    );
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(ID_WIDTH);
    out.push(0);
    out.extend_from_slice(&index.n.to_le_bytes());
    out.extend_from_slice(&index.sigma.to_le_bytes());
    out.extend_from_slice(&(g.node_count() as u64).to_le_bytes());
    out.extend_from_slice(&(g.edge_count() as u64).to_le_bytes());
    out.extend_from_slice(&(slp.production_count() as u64).to_le_bytes());
    out.extend_from_slice(&slp.root().0.to_le_bytes());
    debug_assert_eq!(out.len(), HEADER_LEN);

    for (_, node) in g.nodes() {
        out.push(match node.kind {
            NodeKind::Type1 => KIND_TYPE1,
            NodeKind::Type2 => KIND_TYPE2,
        });
        out.extend_from_slice(&node.slink.map_or(NONE, |v| v.0).to_le_bytes());
        let (target, len) = node.skip.map_or((NONE, 0), |s| (s.target.0, s.len));
        out.extend_from_slice(&target.to_le_bytes());
        out.extend_from_slice(&len.to_le_bytes());
    }
    for (i, e) in g.edges().iter().enumerate() {
        let id = EdgeId::from_index(i);
        out.extend_from_slice(&e.hi.0.to_le_bytes());
        out.extend_from_slice(&e.lo.0.to_le_bytes());
        out.push(e.first);
        out.extend_from_slice(&e.slen.to_le_bytes());
        out.extend_from_slice(&slp.var_of_edge(id).0.to_le_bytes());
        out.extend_from_slice(&index.jumps.first(id).map_or(NONE, |f| f.0).to_le_bytes());
    }
    for rule in slp.rules() {
        let (tag, a, b) = match *rule {
            Rule::Terminal(c) => (TAG_TERMINAL, c as u32, 0),
            Rule::Pair(l, r) => (TAG_PAIR, l.0, r.0),
        };
        out.push(tag);
        out.extend_from_slice(&a.to_le_bytes());
        out.extend_from_slice(&b.to_le_bytes());
    }
    for c in &index.path_counts {
        out.extend_from_slice(&c.to_le_bytes());
    }
    out
}

/// Writes the index and returns the number of bytes written.
pub fn serialize<W: Write>(index: &Index, mut sink: W) -> io::Result<u64> {
    let bytes = to_bytes(index);
    sink.write_all(&bytes)?;
    Ok(bytes.len() as u64)
}

pub fn deserialize<R: Read>(mut source: R) -> Result<Index, FormatError> {
    let mut bytes = Vec::new();
    source
        .read_to_end(&mut bytes)
        .map_err(|e| FormatError::Io(e.to_string()))?;
    from_bytes(&bytes)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, k: usize, what: &'static str) -> Result<&'a [u8], FormatError> {
        if self.buf.len() - self.pos < k {
            return Err(FormatError::Truncated(what));
        }
        let s = &self.buf[self.pos..self.pos + k];
        self.pos += k;
        Ok(s)
    }

    fn u8(&mut self, what: &'static str) -> Result<u8, FormatError> {
        Ok(self.take(1, what)?[0])
    }

    fn u16(&mut self, what: &'static str) -> Result<u16, FormatError> {
        Ok(u16::from_le_bytes(self.take(2, what)?.try_into().unwrap()))
    }

    fn u32(&mut self, what: &'static str) -> Result<u32, FormatError> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &'static str) -> Result<u64, FormatError> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    /// Fails before any allocation if `count` records cannot fit in the rest of the input.
    fn reserve(&self, count: u64, record: usize, what: &'static str) -> Result<usize, FormatError> {
        let need = count.checked_mul(record as u64);
        match need {
            Some(need) if need <= (self.buf.len() - self.pos) as u64 => Ok(count as usize),
            _ => Err(FormatError::Truncated(what)),
        }
    }
}

fn id(table: &'static str, index: usize, value: u32, limit: usize) -> Result<u32, FormatError> {
    if (value as usize) < limit {
        Ok(value)
    } else {
        Err(FormatError::IdOutOfRange {
            table,
            index: index as u64,
            value: value as u64,
            limit: limit as u64,
        })
    }
}

fn invariant(msg: impl Into<String>) -> FormatError {
    FormatError::Invariant(msg.into())
}

/// Parses and fully validates an index file.
pub fn from_bytes(bytes: &[u8]) -> Result<Index, FormatError> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(4, "header")? != MAGIC {
        return Err(FormatError::BadMagic);
    }
    let version = r.u16("header")?;
    if version != VERSION {
        return Err(FormatError::UnsupportedVersion(version));
    }
    let width = r.u8("header")?;
    if width != ID_WIDTH {
        return Err(FormatError::UnsupportedIdWidth(width));
    }
    if r.u8("header")? != 0 {
        return Err(invariant("reserved header flags are set"));
    }
    let n = r.u64("header")?;
    let sigma = r.u32("header")?;
    let node_count = r.u64("header")?;
    let edge_count = r.u64("header")?;
    let rule_count = r.u64("header")?;
    let root = r.u32("header")?;
    for (name, c) in [("node", node_count), ("edge", edge_count), ("rule", rule_count)] {
        if c >= NONE as u64 {
            return Err(invariant(format!("{name} count {c} does not fit 32-bit ids")));
        }
    }
    if n > u64::MAX - 2 {
        return Err(invariant("text length too large"));
    }

    let nv = r.reserve(node_count, NODE_LEN, "node table")?;
    let mut kinds = Vec::with_capacity(nv);
    for i in 0..nv {
        let kind = match r.u8("node table")? {
            KIND_TYPE1 => NodeKind::Type1,
            KIND_TYPE2 => NodeKind::Type2,
            k => return Err(invariant(format!("node {i} has unknown kind {k}"))),
        };
        let slink = match r.u32("node table")? {
            NONE => None,
            v => Some(NodeId(id("node.slink", i, v, nv)?)),
        };
        let target = r.u32("node table")?;
        let len = r.u64("node table")?;
        let skip = match (kind, target) {
            (NodeKind::Type1, NONE) if len == 0 => None,
            (NodeKind::Type1, _) => return Err(invariant(format!("type-1 node {i} has a skip"))),
            (NodeKind::Type2, NONE) => return Err(invariant(format!("type-2 node {i} lacks a skip"))),
            (NodeKind::Type2, t) => Some(Skip {
                target: NodeId(id("node.skip", i, t, nv)?),
                len,
            }),
        };
        kinds.push((kind, slink, skip));
    }

    let ne = r.reserve(edge_count, EDGE_LEN, "edge table")?;
    let nr = rule_count as usize;
    let mut edges = Vec::with_capacity(ne);
    let mut vars = Vec::with_capacity(ne);
    let mut jumps = Vec::with_capacity(ne);
    for i in 0..ne {
        let hi = NodeId(id("edge.hi", i, r.u32("edge table")?, nv)?);
        let lo = NodeId(id("edge.lo", i, r.u32("edge table")?, nv)?);
        let first = r.u8("edge table")?;
        let slen = r.u64("edge table")?;
        let var = VarId(id("edge.var", i, r.u32("edge table")?, nr)?);
        let jump = match r.u32("edge table")? {
            NONE => None,
            f => Some(EdgeId(id("edge.jump", i, f, ne)?)),
        };
        if let Some(prev) = edges.last().map(|e: &LEdge| e.hi) {
            if hi < prev {
                return Err(invariant(format!("edge {i} breaks grouping by source node")));
            }
        }
        edges.push(LEdge { hi, lo, first, slen });
        vars.push(var);
        jumps.push(jump);
    }

    r.reserve(rule_count, RULE_LEN, "rule table")?;
    let mut rules = Vec::with_capacity(nr);
    for i in 0..nr {
        let tag = r.u8("rule table")?;
        let a = r.u32("rule table")?;
        let b = r.u32("rule table")?;
        rules.push(match tag {
            TAG_TERMINAL if a <= u8::MAX as u32 && b == 0 => Rule::Terminal(a as u8),
            TAG_TERMINAL => return Err(invariant(format!("terminal rule {i} is malformed"))),
            TAG_PAIR => Rule::Pair(VarId(id("rule.left", i, a, i)?), VarId(id("rule.right", i, b, i)?)),
            t => return Err(invariant(format!("rule {i} has unknown tag {t}"))),
        });
    }
    let root = VarId(id("header.root", 0, root, nr)?);

    r.reserve(node_count, COUNT_LEN, "path counts")?;
    let mut path_counts = Vec::with_capacity(nv);
    for _ in 0..nv {
        path_counts.push(r.u64("path counts")?);
    }
    if r.pos != bytes.len() {
        return Err(FormatError::TrailingBytes(bytes.len() - r.pos));
    }

    let graph = LCdawg::from_parts(kinds, edges);
    graph.check_invariants().map_err(invariant)?;
    let slp = Slp::from_rules(rules, vars, root).map_err(invariant)?;
    let jumps = JumpTable { first: jumps };
    validate(n, sigma, &graph, &jumps, &slp, &path_counts)?;
    Ok(Index {
        n,
        sigma,
        graph,
        jumps,
        slp,
        path_counts,
    })
}

/// Cross-table checks: edge variables derive strings of the right length and
/// first symbol, jump links decompose their edges, path counts are consistent.
fn validate(
    n: u64,
    sigma: u32,
    g: &LCdawg,
    jumps: &JumpTable,
    slp: &Slp,
    counts: &[u64],
) -> Result<(), FormatError> {
    let source_out = g.out_edges(SOURCE);
    if source_out.first().map(|e| e.first) != Some(0) || source_out.len() as u64 != sigma as u64 + 1 {
        return Err(invariant("source out-edges do not match sigma"));
    }
    if slp.expansion_len(slp.root()).ok() != Some(n + 1) {
        return Err(invariant("root does not derive n+1 symbols"));
    }
    for (i, e) in g.edges().iter().enumerate() {
        let id = EdgeId::from_index(i);
        let x = slp.var_of_edge(id);
        if slp.expansion_len(x).ok() != Some(e.slen) || slp.first_symbol(x).ok() != Some(e.first) {
            return Err(invariant(format!("variable of edge {id} does not fit its label")));
        }
        match (e.slen, jumps.first(id)) {
            (1, None) => {}
            (1, Some(_)) => return Err(invariant(format!("atomic edge {id} has a jump link"))),
            (_, None) => return Err(invariant(format!("edge {id} lacks a jump link"))),
            (slen, Some(f)) => {
                let fe = g.edge(f);
                let lo = g.node(fe.lo);
                let total = match (lo.kind, lo.skip) {
                    (NodeKind::Type2, Some(skip)) => fe.slen.checked_add(skip.len),
                    _ => None,
                };
                if fe.first != e.first || total != Some(slen) || g.kind(fe.hi) != NodeKind::Type1 {
                    return Err(invariant(format!("jump link of edge {id} does not decompose it")));
                }
            }
        }
    }
    for (v, _) in g.nodes() {
        let expected = if v == SINK {
            Some(1)
        } else {
            g.out_edges(v)
                .iter()
                .try_fold(0u64, |acc, e| acc.checked_add(counts[e.lo.index()]))
        };
        if expected != Some(counts[v.index()]) {
            return Err(invariant(format!("path count of {v} is inconsistent")));
        }
    }
    if counts[SOURCE.index()] != n + 1 {
        return Err(invariant("source path count differs from n+1"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::Text;

    fn index(s: &[u8]) -> Index {
        Index::build(&Text::new(s).unwrap()).unwrap()
    }

    #[test]
    fn round_trip_identity() {
        for s in [&b""[..], b"a", b"abcdbcda", b"ababaac", b"aaaaaaaaaa"] {
            let idx = index(s);
            let bytes = to_bytes(&idx);
            let back = from_bytes(&bytes).unwrap();
            assert_eq!(back, idx);
            assert_eq!(back.text(), s);
        }
    }

    #[test]
    fn header_errors_are_distinct() {
        let bytes = to_bytes(&index(b"abcdbcda"));
        let mut b = bytes.clone();
        b[0] = b'X';
        assert_eq!(from_bytes(&b), Err(FormatError::BadMagic));
        let mut b = bytes.clone();
        b[4] = 9;
        assert_eq!(from_bytes(&b), Err(FormatError::UnsupportedVersion(9)));
        let mut b = bytes.clone();
        b[6] = 8;
        assert_eq!(from_bytes(&b), Err(FormatError::UnsupportedIdWidth(8)));
        assert_eq!(from_bytes(&bytes[..20]), Err(FormatError::Truncated("header")));
        assert!(matches!(
            from_bytes(&bytes[..bytes.len() - 1]),
            Err(FormatError::Truncated("path counts"))
        ));
        let mut b = bytes.clone();
        b.push(0);
        assert_eq!(from_bytes(&b), Err(FormatError::TrailingBytes(1)));
    }

    #[test]
    fn huge_counts_rejected_without_allocating() {
        let mut b = to_bytes(&index(b"ab"));
        b[20..28].copy_from_slice(&(u32::MAX as u64 - 1).to_le_bytes());
        assert_eq!(from_bytes(&b), Err(FormatError::Truncated("node table")));
    }

    #[test]
    fn out_of_range_edge_target() {
        let idx = index(b"abcdbcda");
        let mut b = to_bytes(&idx);
        let nv = idx.graph().node_count();
        let lo_at = HEADER_LEN + nv * NODE_LEN + 4;
        b[lo_at..lo_at + 4].copy_from_slice(&(nv as u32).to_le_bytes());
        assert!(matches!(
            from_bytes(&b),
            Err(FormatError::IdOutOfRange { table: "edge.lo", .. })
        ));
    }

    #[test]
    fn tampered_path_count() {
        let mut b = to_bytes(&index(b"abcdbcda"));
        let last = b.len() - 8;
        b[last] ^= 1;
        assert!(matches!(from_bytes(&b), Err(FormatError::Invariant(_))));
    }
}
