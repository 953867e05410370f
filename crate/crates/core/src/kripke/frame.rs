//! Finite strict partial orders and their level decomposition.

use fixedbitset::FixedBitSet;

use crate::error::FrameError;

/// Irreflexive transitive frame on worlds `1..=n`. Bit sets are indexed by
/// world number; bit 0 is never set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeFrame {
    n: usize,
    succ: Vec<FixedBitSet>,
}

pub(crate) fn world_set(n: usize) -> FixedBitSet {
    FixedBitSet::with_capacity(n + 1)
}

impl KripkeFrame {
    /// Checks range, irreflexivity and transitivity.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<KripkeFrame, FrameError> {
        let mut succ = vec![world_set(n); n + 1];
        for &(u, v) in edges {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(FrameError::OutOfRange { u, v, n });
            }
            if u == v {
                return Err(FrameError::ReflexiveLoop(u));
            }
            succ[u].insert(v);
        }
        for u in 1..=n {
            for v in succ[u].ones() {
                if !succ[v].is_subset(&succ[u]) {
                    let w = succ[v].difference(&succ[u]).next().expect("non-subset has a witness");
                    return Err(FrameError::MissingTransitiveEdge(u, v, w));
                }
            }
        }
        Ok(KripkeFrame { n, succ })
    }

    /// Builds the frame of the transitive closure of `edges`.
    pub fn closure_of(n: usize, edges: &[(usize, usize)]) -> Result<KripkeFrame, FrameError> {
        let mut succ = vec![world_set(n); n + 1];
        for &(u, v) in edges {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(FrameError::OutOfRange { u, v, n });
            }
            succ[u].insert(v);
        }
        // Warshall over bit rows.
        for k in 1..=n {
            let row_k = succ[k].clone();
            for row in succ.iter_mut().skip(1) {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        let edges: Vec<(usize, usize)> = (1..=n).flat_map(|u| succ[u].ones().map(move |v| (u, v))).collect();
        KripkeFrame::new(n, &edges)
    }

    pub fn world_count(&self) -> usize {
        self.n
    }

    pub fn worlds(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n
    }

    pub fn contains_world(&self, w: usize) -> bool {
        w >= 1 && w <= self.n
    }

    pub fn successors(&self, w: usize) -> &FixedBitSet {
        &self.succ[w]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succ[u].contains(v)
    }

    pub fn is_endpoint(&self, w: usize) -> bool {
        self.succ[w].is_clear()
    }

    /// Edges sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.worlds()
            .flat_map(|u| self.succ[u].ones().map(move |v| (u, v)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.worlds().map(|u| self.succ[u].count_ones(..)).sum()
    }

    pub fn all_worlds(&self) -> FixedBitSet {
        let mut s = world_set(self.n);
        s.insert_range(1..self.n + 1);
        s
    }

    /// `w` together with everything it sees.
    pub fn cone(&self, w: usize) -> FixedBitSet {
        let mut s = self.succ[w].clone();
        s.insert(w);
        s
    }

    pub fn predecessors(&self, w: usize) -> Vec<usize> {
        self.worlds().filter(|&u| self.succ[u].contains(w)).collect()
    }

    /// Length of the longest chain ending at each world (index 0 unused).
    pub fn heights(&self) -> Vec<usize> {
        let preds: Vec<Vec<usize>> = (0..=self.n)
            .map(|w| if w == 0 { vec![] } else { self.predecessors(w) })
            .collect();
        // In a transitive order a predecessor has strictly fewer predecessors.
        let mut order: Vec<usize> = self.worlds().collect();
        order.sort_by_key(|&w| preds[w].len());
        let mut h = vec![0usize; self.n + 1];
        for w in order {
            h[w] = 1 + preds[w].iter().map(|&u| h[u]).max().unwrap_or(0);
        }
        h
    }

    /// Longest chain length; 0 for the empty frame.
    pub fn depth(&self) -> usize {
        self.heights().into_iter().max().unwrap_or(0)
    }

    /// Frame generated by `root`: its cone, renumbered so that `root` is 1 and
    /// the remaining worlds keep their relative order. Returns the frame and
    /// the old world number of each new world (index 0 unused).
    pub fn generated(&self, root: usize) -> (KripkeFrame, Vec<usize>) {
        let mut old: Vec<usize> = vec![0, root];
        old.extend(self.succ[root].ones());
        let mut new_of = vec![0usize; self.n + 1];
        for (i, &w) in old.iter().enumerate().skip(1) {
            new_of[w] = i;
        }
        let m = old.len() - 1;
        let mut succ = vec![world_set(m); m + 1];
        for i in 1..=m {
            for v in self.succ[old[i]].ones() {
                succ[i].insert(new_of[v]);
            }
        }
        (KripkeFrame { n: m, succ }, old)
    }
}

/// A validated frame of depth at most three with its levels (1 = bottom).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredFrame {
    frame: KripkeFrame,
    levels: Vec<u8>,
}

impl LayeredFrame {
    /// Uses the height of each world as its level.
    pub fn from_frame(frame: KripkeFrame) -> Result<LayeredFrame, FrameError> {
        let h = frame.heights();
        if let Some(top) = frame.worlds().find(|&w| h[w] >= 4) {
            return Err(FrameError::FourChain(four_chain(&frame, &h, top)));
        }
        let levels = h.into_iter().map(|x| x as u8).collect();
        Ok(LayeredFrame { frame, levels })
    }

    /// Attaches explicit levels, e.g. the layers a sampler drew. Every edge
    /// must go to a strictly higher level and levels must lie in 1..=3.
    pub fn with_levels(frame: KripkeFrame, levels: Vec<u8>) -> Result<LayeredFrame, FrameError> {
        assert_eq!(levels.len(), frame.world_count() + 1, "one level per world plus slot 0");
        for (u, v) in frame.edges() {
            if levels[u] >= levels[v] || !(1..=3).contains(&levels[u]) || levels[v] > 3 {
                return Err(FrameError::LevelOrder { u, v });
            }
        }
        Ok(LayeredFrame { frame, levels })
    }

    pub fn frame(&self) -> &KripkeFrame {
        &self.frame
    }

    pub fn into_frame(self) -> KripkeFrame {
        self.frame
    }

    pub fn level(&self, w: usize) -> u8 {
        self.levels[w]
    }

    pub fn levels(&self) -> &[u8] {
        &self.levels[1..]
    }

    pub fn layer(&self, level: u8) -> Vec<usize> {
        self.frame.worlds().filter(|&w| self.levels[w] == level).collect()
    }

    pub fn layer_set(&self, level: u8) -> FixedBitSet {
        let mut s = world_set(self.frame.world_count());
        for w in self.layer(level) {
            s.insert(w);
        }
        s
    }

    pub fn world_count(&self) -> usize {
        self.frame.world_count()
    }
}

fn four_chain(frame: &KripkeFrame, h: &[usize], top: usize) -> [usize; 4] {
    let mut chain = vec![top];
    let mut cur = top;
    while chain.len() < 4 {
        let below = frame
            .predecessors(cur)
            .into_iter()
            .find(|&u| h[u] + 1 == h[cur])
            .expect("height is witnessed by a predecessor");
        chain.push(below);
        cur = below;
    }
    chain.reverse();
    [chain[0], chain[1], chain[2], chain[3]]
}

/// Accepts exactly the irreflexive, transitive edge sets without a chain of
/// four worlds, and returns the level of each world.
pub fn validate_frame(edges: &[(usize, usize)], n: usize) -> Result<LayeredFrame, FrameError> {
    LayeredFrame::from_frame(KripkeFrame::new(n, edges)?)
}
