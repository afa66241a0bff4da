//! Ukkonen's online suffix tree construction over a sentinel-terminated byte string.
//!
//! Only used as the first stage of CDAWG construction.

const NONE: u32 = u32::MAX;
const LEAF_END: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub(crate) struct StNode {
    /// Length of the incoming edge label.
    pub len: u32,
    pub link: u32,
    /// String depth of the node.
    pub depth: u32,
    /// Start position of some suffix in the subtree. For a node of depth `d`,
    /// `s[witness..witness + d]` is the node's path label.
    pub witness: u32,
}

impl StNode {
    pub fn edge_len(&self) -> usize {
        self.len as usize
    }
}

pub(crate) struct SuffixTree {
    pub nodes: Vec<StNode>,
    /// Children of node `v` are `children[offsets[v]..offsets[v + 1]]`, sorted by first byte.
    children: Vec<(u8, u32)>,
    offsets: Vec<u32>,
    /// Node ids by decreasing depth, so children come before parents.
    bottom_up: Vec<u32>,
}

pub(crate) const ROOT: u32 = 0;

impl SuffixTree {
    /// Builds the suffix tree of `s`. The last byte of `s` must occur nowhere else.
    ///
    /// Post-processing avoids walking the tree: every pass is a sweep over the
    /// node array plus independent scattered writes, which keeps it linear in
    /// practice once the tree no longer fits in cache.
    pub fn build(s: &[u8]) -> SuffixTree {
        assert!(!s.is_empty() && s.len() < u32::MAX as usize, "string length out of range");
        let mut b = Builder {
            s,
            nodes: Vec::with_capacity(2 * s.len()),
            root_child: [NONE; 256],
            active_node: ROOT,
            active_edge: 0,
            active_len: 0,
            remainder: 0,
        };
        b.new_node(0, 0, 0, ROOT, 0);
        for i in 0..s.len() {
            b.extend(i);
        }
        let raw = b.nodes;
        let total = s.len() as u32;
        let count = raw.len();

        let mut nodes = Vec::with_capacity(count);
        let mut offsets = vec![0u32; count + 1];
        let mut by_depth = vec![0u32; s.len() + 2];
        for r in &raw {
            let leaf = r.end == LEAF_END;
            let depth = if leaf { total - r.witness } else { r.depth };
            nodes.push(StNode {
                len: r.end.min(total) - r.start,
                link: r.link,
                depth,
                witness: r.witness,
            });
            offsets[r.parent as usize + 1] += 1;
            by_depth[depth as usize] += 1;
        }
        // the root is its own parent in `raw`; drop that self-edge
        offsets[ROOT as usize + 1] -= 1;
        for v in 0..count {
            offsets[v + 1] += offsets[v];
        }
        let mut fill = offsets.clone();
        let mut children = vec![(0u8, 0u32); count - 1];
        for (v, r) in raw.iter().enumerate().skip(1) {
            let slot = &mut fill[r.parent as usize];
            children[*slot as usize] = (r.first, v as u32);
            *slot += 1;
        }
        for v in 0..count {
            let group = &mut children[offsets[v] as usize..offsets[v + 1] as usize];
            if group.len() > 1 {
                group.sort_unstable_by_key(|c| c.0);
            }
        }

        // counting sort by decreasing depth
        let mut acc = 0u32;
        for slot in by_depth.iter_mut().rev() {
            let c = *slot;
            *slot = acc;
            acc += c;
        }
        let mut bottom_up = vec![0u32; count];
        for (v, node) in nodes.iter().enumerate() {
            let slot = &mut by_depth[node.depth as usize];
            bottom_up[*slot as usize] = v as u32;
            *slot += 1;
        }

        let mut tree = SuffixTree {
            nodes,
            children,
            offsets,
            bottom_up,
        };
        for i in 0..count {
            let v = tree.bottom_up[i];
            if !tree.is_leaf(v) {
                let w = tree
                    .children(v)
                    .iter()
                    .map(|&(_, c)| tree.nodes[c as usize].witness)
                    .min()
                    .unwrap();
                tree.nodes[v as usize].witness = w;
            }
        }
        tree
    }

    pub fn children(&self, v: u32) -> &[(u8, u32)] {
        &self.children[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }

    pub fn is_leaf(&self, v: u32) -> bool {
        self.offsets[v as usize] == self.offsets[v as usize + 1]
    }

    /// All node ids, children before parents.
    pub fn postorder(&self) -> impl Iterator<Item = u32> + '_ {
        self.bottom_up.iter().copied()
    }
}

/// Node under construction, with an unsorted sibling list.
struct BuildNode {
    start: u32,
    end: u32,
    link: u32,
    /// First byte of the incoming edge label.
    first: u8,
    parent: u32,
    /// String depth, kept for internal nodes only.
    depth: u32,
    /// Start of the suffix a leaf spells.
    witness: u32,
    first_child: u32,
    next_sibling: u32,
}

struct Builder<'a> {
    s: &'a [u8],
    nodes: Vec<BuildNode>,
    root_child: [u32; 256],
    active_node: u32,
    active_edge: usize,
    active_len: usize,
    remainder: usize,
}

impl Builder<'_> {
    fn new_node(&mut self, start: usize, end: u32, first: u8, parent: u32, depth: u32) -> u32 {
        self.nodes.push(BuildNode {
            start: start as u32,
            end,
            link: ROOT,
            first,
            parent,
            depth,
            witness: 0,
            first_child: NONE,
            next_sibling: NONE,
        });
        (self.nodes.len() - 1) as u32
    }

    fn edge_len(&self, v: u32, pos: usize) -> usize {
        let n = &self.nodes[v as usize];
        (n.end.min(pos as u32 + 1) - n.start) as usize
    }

    fn find_child(&self, v: u32, c: u8) -> u32 {
        if v == ROOT {
            return self.root_child[c as usize];
        }
        let mut x = self.nodes[v as usize].first_child;
        while x != NONE && self.nodes[x as usize].first != c {
            x = self.nodes[x as usize].next_sibling;
        }
        x
    }

    fn add_child(&mut self, v: u32, child: u32) {
        let c = self.nodes[child as usize].first;
        if v == ROOT {
            self.root_child[c as usize] = child;
        }
        self.nodes[child as usize].next_sibling = self.nodes[v as usize].first_child;
        self.nodes[v as usize].first_child = child;
    }

    /// Puts `new` in the sibling-list slot of `old` under `v`.
    fn replace_child(&mut self, v: u32, c: u8, old: u32, new: u32) {
        if v == ROOT {
            self.root_child[c as usize] = new;
        }
        let next = self.nodes[old as usize].next_sibling;
        self.nodes[new as usize].next_sibling = next;
        self.nodes[old as usize].next_sibling = NONE;
        if self.nodes[v as usize].first_child == old {
            self.nodes[v as usize].first_child = new;
            return;
        }
        let mut x = self.nodes[v as usize].first_child;
        while self.nodes[x as usize].next_sibling != old {
            x = self.nodes[x as usize].next_sibling;
        }
        self.nodes[x as usize].next_sibling = new;
    }

    fn extend(&mut self, pos: usize) {
        let s = self.s;
        self.remainder += 1;
        let mut last_new = NONE;
        while self.remainder > 0 {
            if self.active_len == 0 {
                self.active_edge = pos;
            }
            let c = s[self.active_edge];
            let next = self.find_child(self.active_node, c);
            if next == NONE {
                let leaf = self.new_node(pos, LEAF_END, c, self.active_node, 0);
                self.nodes[leaf as usize].witness = (pos + 1 - self.remainder) as u32;
                self.add_child(self.active_node, leaf);
                if last_new != NONE {
                    self.nodes[last_new as usize].link = self.active_node;
                    last_new = NONE;
                }
            } else {
                let el = self.edge_len(next, pos);
                if self.active_len >= el {
                    self.active_edge += el;
                    self.active_len -= el;
                    self.active_node = next;
                    continue;
                }
                let next_start = self.nodes[next as usize].start as usize;
                if s[next_start + self.active_len] == s[pos] {
                    if last_new != NONE && self.active_node != ROOT {
                        self.nodes[last_new as usize].link = self.active_node;
                    }
                    self.active_len += 1;
                    break;
                }
                let depth = self.nodes[self.active_node as usize].depth + self.active_len as u32;
                let split = self.new_node(next_start, (next_start + self.active_len) as u32, c, self.active_node, depth);
                self.replace_child(self.active_node, c, next, split);
                let leaf = self.new_node(pos, LEAF_END, s[pos], split, 0);
                self.nodes[leaf as usize].witness = (pos + 1 - self.remainder) as u32;
                self.add_child(split, leaf);
                let moved = &mut self.nodes[next as usize];
                moved.parent = split;
                moved.start += self.active_len as u32;
                moved.first = s[moved.start as usize];
                self.add_child(split, next);
                if last_new != NONE {
                    self.nodes[last_new as usize].link = split;
                }
                last_new = split;
            }
            self.remainder -= 1;
            if self.active_node == ROOT && self.active_len > 0 {
                self.active_len -= 1;
                self.active_edge = pos + 1 - self.remainder;
            } else if self.active_node != ROOT {
                self.active_node = self.nodes[self.active_node as usize].link;
            }
        }
    }
}
