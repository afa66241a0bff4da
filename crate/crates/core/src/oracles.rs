//! Brute-force reference implementations.
//!
//! Nothing in here touches the index data structures. They are slow on
//! purpose (quadratic or worse) and refuse inputs above a size bound where
//! that matters.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::text::Text;

/// Default length bound for the cubic-time oracles.
pub const DEFAULT_BOUND: usize = 300;

/// 1-based start positions of `pattern` in `text`, by direct scan.
pub fn naive_find(text: &[u8], pattern: &[u8]) -> Vec<u64> {
    if pattern.is_empty() || pattern.len() > text.len() {
        return Vec::new();
    }
    text.windows(pattern.len())
        .enumerate()
        .filter(|(_, w)| *w == pattern)
        .map(|(i, _)| i as u64 + 1)
        .collect()
}

fn guard(len: usize, bound: usize) -> Result<()> {
    if len > bound {
        Err(Error::OracleBound { len, bound })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Repeat {
    pub string: Vec<u8>,
    pub occurrences: usize,
    /// Distinct symbols `a` such that `string·a` occurs.
    pub right: Vec<u8>,
    /// Distinct symbols `a` such that `a·string` occurs.
    pub left: Vec<u8>,
}

/// Nonempty maximal repeats of a string plus the extensions of the empty string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalRepeats {
    pub repeats: Vec<Repeat>,
    /// Distinct symbols of the string: the one-symbol extensions of ε.
    pub alphabet: Vec<u8>,
}

impl MaximalRepeats {
    /// Number of nonempty maximal repeats.
    pub fn count(&self) -> usize {
        self.repeats.len()
    }

    /// Right extensions of all maximal repeats, ε included.
    pub fn right_extensions(&self) -> usize {
        self.alphabet.len() + self.repeats.iter().map(|r| r.right.len()).sum::<usize>()
    }

    /// Left extensions of all maximal repeats, ε included.
    pub fn left_extensions(&self) -> usize {
        self.alphabet.len() + self.repeats.iter().map(|r| r.left.len()).sum::<usize>()
    }

    pub fn contains(&self, w: &[u8]) -> bool {
        self.repeats
            .binary_search_by(|r| r.string.as_slice().cmp(w))
            .is_ok()
    }
}

/// Enumerates all substrings of `s`, counts their occurrences and keeps those
/// whose every one-symbol left and right extension occurs strictly fewer times.
pub fn brute_maximal_repeats(s: &[u8], bound: usize) -> Result<MaximalRepeats> {
    guard(s.len(), bound)?;
    let mut occ: HashMap<&[u8], usize> = HashMap::new();
    for i in 0..s.len() {
        for j in i + 1..=s.len() {
            *occ.entry(&s[i..j]).or_default() += 1;
        }
    }
    // extension symbol -> occurrence count, per parent string
    let mut right: HashMap<&[u8], Vec<(u8, usize)>> = HashMap::new();
    let mut left: HashMap<&[u8], Vec<(u8, usize)>> = HashMap::new();
    for (&x, &c) in &occ {
        if x.len() >= 2 {
            right.entry(&x[..x.len() - 1]).or_default().push((x[x.len() - 1], c));
            left.entry(&x[1..]).or_default().push((x[0], c));
        }
    }
    let mut repeats = Vec::new();
    for (&w, &c) in &occ {
        if c < 2 {
            continue;
        }
        let r = right.get(w).map(Vec::as_slice).unwrap_or(&[]);
        let l = left.get(w).map(Vec::as_slice).unwrap_or(&[]);
        if r.iter().all(|&(_, k)| k < c) && l.iter().all(|&(_, k)| k < c) {
            let mut rs: Vec<u8> = r.iter().map(|p| p.0).collect();
            let mut ls: Vec<u8> = l.iter().map(|p| p.0).collect();
            rs.sort_unstable();
            ls.sort_unstable();
            repeats.push(Repeat {
                string: w.to_vec(),
                occurrences: c,
                right: rs,
                left: ls,
            });
        }
    }
    repeats.sort_by(|a, b| a.string.cmp(&b.string));
    let alphabet: BTreeSet<u8> = s.iter().copied().collect();
    Ok(MaximalRepeats {
        repeats,
        alphabet: alphabet.into_iter().collect(),
    })
}

/// Node and edge sets of the minimal compact automaton of `T$`, each node
/// named by its longest string and each edge by (source value, label, target value).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalAutomaton {
    pub values: Vec<Vec<u8>>,
    pub edges: Vec<(Vec<u8>, Vec<u8>, Vec<u8>)>,
}

impl MinimalAutomaton {
    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Builds the CDAWG of `T$` from beginning-position sets of its substrings.
///
/// A substring is a node value when it cannot be extended to the right without
/// changing its beginning positions, nor to the left without changing its end
/// positions. Edges go from each value `u` to the closure of `u·a`.
pub fn brute_minimal_automaton(text: &Text, bound: usize) -> Result<MinimalAutomaton> {
    let s = text.with_sentinel();
    guard(text.len(), bound)?;
    let mut starts: HashMap<&[u8], Vec<usize>> = HashMap::new();
    for i in 0..s.len() {
        for j in i + 1..=s.len() {
            starts.entry(&s[i..j]).or_default().push(i);
        }
    }

    // the common next symbol of all occurrences, if there is one
    let common_next = |len: usize, pos: &[usize]| -> Option<u8> {
        let first = *s.get(pos[0] + len)?;
        pos.iter()
            .all(|&p| s.get(p + len) == Some(&first))
            .then_some(first)
    };
    let common_prev = |pos: &[usize]| -> Option<u8> {
        if pos[0] == 0 {
            return None;
        }
        let first = s[pos[0] - 1];
        pos.iter()
            .all(|&p| p > 0 && s[p - 1] == first)
            .then_some(first)
    };
    // closure of an occurrence set (given by starts and length) under both extensions
    let closure = |mut pos: Vec<usize>, mut len: usize| -> (usize, usize) {
        loop {
            let mut changed = false;
            while common_next(len, &pos).is_some() {
                len += 1;
                changed = true;
            }
            while common_prev(&pos).is_some() {
                for p in pos.iter_mut() {
                    *p -= 1;
                }
                len += 1;
                changed = true;
            }
            if !changed {
                return (pos[0], len);
            }
        }
    };

    let mut values: BTreeSet<Vec<u8>> = BTreeSet::new();
    values.insert(Vec::new());
    for (&x, pos) in &starts {
        if common_next(x.len(), pos).is_none() && common_prev(pos).is_none() {
            values.insert(x.to_vec());
        }
    }

    let mut edges = Vec::new();
    for u in &values {
        let pos: Vec<usize> = if u.is_empty() {
            (0..s.len()).collect()
        } else {
            starts[u.as_slice()].clone()
        };
        let followers: BTreeSet<u8> = pos.iter().filter_map(|&p| s.get(p + u.len()).copied()).collect();
        for a in followers {
            let mut ua = u.clone();
            ua.push(a);
            let ua_pos = starts[ua.as_slice()].clone();
            let mut len = ua.len();
            while common_next(len, &ua_pos).is_some() {
                len += 1;
            }
            let label = s[ua_pos[0] + u.len()..ua_pos[0] + len].to_vec();
            let (tstart, tlen) = closure(ua_pos, len);
            edges.push((u.clone(), label, s[tstart..tstart + tlen].to_vec()));
        }
    }
    edges.sort();
    Ok(MinimalAutomaton {
        values: values.into_iter().collect(),
        edges,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    Literal(u8),
    /// Copy of `len` symbols starting at 0-based `source`; may overlap the factor itself.
    Copy { source: usize, len: usize },
}

/// Greedy LZ77 parse with self-referencing sources.
///
/// Each factor is the longest prefix of the remaining input that also starts
/// at an earlier position (leftmost such position), or one fresh symbol.
pub fn lz77_parse(s: &[u8]) -> Vec<Factor> {
    const SEP: u16 = 256;
    let n = s.len();
    let mut factors = Vec::new();
    let mut i = 0;
    let mut buf: Vec<u16> = Vec::with_capacity(2 * n + 1);
    while i < n {
        buf.clear();
        buf.extend(s[i..].iter().map(|&b| b as u16));
        buf.push(SEP);
        buf.extend(s.iter().map(|&b| b as u16));
        let z = z_function(&buf);
        let base = n - i + 1;
        let (mut best_len, mut best_src) = (0, 0);
        for j in 0..i {
            if z[base + j] > best_len {
                best_len = z[base + j];
                best_src = j;
            }
        }
        if best_len == 0 {
            factors.push(Factor::Literal(s[i]));
            i += 1;
        } else {
            factors.push(Factor::Copy {
                source: best_src,
                len: best_len,
            });
            i += best_len;
        }
    }
    factors
}

fn z_function(s: &[u16]) -> Vec<usize> {
    let n = s.len();
    let mut z = vec![0; n];
    let (mut l, mut r) = (0, 0);
    for i in 1..n {
        if i < r {
            z[i] = (r - i).min(z[i - l]);
        }
        while i + z[i] < n && s[z[i]] == s[i + z[i]] {
            z[i] += 1;
        }
        if i + z[i] > r {
            l = i;
            r = i + z[i];
        }
    }
    z
}

/// Number of runs in the BWT of `T$`, from a naively sorted suffix array.
pub fn bwt_runs(text: &Text) -> usize {
    let s = text.with_sentinel();
    let mut sa: Vec<usize> = (0..s.len()).collect();
    sa.sort_by(|&a, &b| s[a..].cmp(&s[b..]));
    let bwt: Vec<u8> = sa
        .iter()
        .map(|&p| if p == 0 { s[s.len() - 1] } else { s[p - 1] })
        .collect();
    1 + bwt.windows(2).filter(|w| w[0] != w[1]).count()
}
