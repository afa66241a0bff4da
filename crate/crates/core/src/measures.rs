//! Repetitiveness measures of a text and size figures of its index.
//!
//! Extensions are counted over the text alphabet only: an edge labeled by the
//! end marker alone is not an extension. The empty string counts as a maximal
//! repeat for extension purposes but is not included in `mu`.

use std::fmt;

use serde::Serialize;

use crate::cdawg::build_cdawg;
use crate::index::Index;
use crate::oracles::{bwt_runs, lz77_parse};
use crate::text::{Text, SENTINEL};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexStats {
    pub n: u64,
    pub sigma: u32,
    pub mu: u64,
    pub e_r: u64,
    pub e_l: u64,
    pub e_tilde: u64,
    pub type1_count: u64,
    pub type2_count: u64,
    pub edge_count: u64,
    pub production_count: u64,
    pub grammar_height: u32,
    pub z: Option<u64>,
    pub r: Option<u64>,
}

/// Number of nonempty maximal repeats and right extensions of `text`.
fn right_side(text: &Text) -> (u64, u64) {
    let g = build_cdawg(text);
    let ext = g.edges().iter().filter(|e| e.first != SENTINEL).count();
    (g.node_count() as u64 - 2, ext as u64)
}

/// Measures of `text`, building the index along the way.
pub fn measure_text(text: &Text) -> crate::Result<IndexStats> {
    let index = Index::build(text)?;
    Ok(IndexStats::collect(text, &index))
}

impl IndexStats {
    /// Combines text measures with the size of an index already built for `text`.
    pub fn collect(text: &Text, index: &Index) -> IndexStats {
        let (mu, e_r) = right_side(text);
        let (_, e_l) = right_side(&text.reversed());
        let g = index.graph();
        let type2 = g.type2_count() as u64;
        IndexStats {
            n: text.len() as u64,
            sigma: text.sigma(),
            mu,
            e_r,
            e_l,
            e_tilde: e_r + e_l,
            type1_count: g.node_count() as u64 - type2,
            type2_count: type2,
            edge_count: g.edge_count() as u64,
            production_count: index.slp().production_count() as u64,
            grammar_height: index.slp().height(),
            z: None,
            r: None,
        }
    }

    pub fn with_lz77(mut self, text: &Text) -> Self {
        self.z = Some(lz77_parse(text.as_bytes()).len() as u64);
        self
    }

    pub fn with_bwt_runs(mut self, text: &Text) -> Self {
        self.r = Some(bwt_runs(text) as u64);
        self
    }
}

/// Single-line `key=value` record; absent optional fields print as `-`.
impl fmt::Display for IndexStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<u64>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
        write!(
            f,
            "n={} sigma={} mu={} e_r={} e_l={} e_tilde={} type1_count={} type2_count={} \
             edge_count={} production_count={} grammar_height={} z={} r={}",
            self.n,
            self.sigma,
            self.mu,
            self.e_r,
            self.e_l,
            self.e_tilde,
            self.type1_count,
            self.type2_count,
            self.edge_count,
            self.production_count,
            self.grammar_height,
            opt(self.z),
            opt(self.r),
        )
    }
}
