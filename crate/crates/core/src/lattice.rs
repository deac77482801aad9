//! Set partitions of the factor indices and the lattice they generate.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("partitions over different ground sets ({0} vs {1})")]
    GroundSetMismatch(usize, usize),
    #[error("blocks do not partition 0..{0}")]
    NotAPartition(usize),
}

/// Partition of `{0, .., r-1}`. Canonical: blocks sorted internally and by
/// their minimum, so the block containing 0 comes first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition {
    r: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(r: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self, LatticeError> {
        let mut seen = vec![false; r];
        for b in blocks.iter_mut() {
            b.sort_unstable();
            for &i in b.iter() {
                if i >= r || seen[i] {
                    return Err(LatticeError::NotAPartition(r));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) || blocks.iter().any(|b| b.is_empty()) {
            return Err(LatticeError::NotAPartition(r));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Partition { r, blocks })
    }

    /// From 1-based blocks, as partitions are usually written.
    pub fn from_one_based(r: usize, blocks: &[&[usize]]) -> Result<Self, LatticeError> {
        Self::new(r, blocks.iter().map(|b| b.iter().map(|i| i - 1).collect()).collect())
    }

    /// From a block label per element.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, &l) in labels.iter().enumerate() {
            map.entry(l).or_default().push(i);
        }
        Self::new(labels.len(), map.into_values().collect()).expect("labels define a partition")
    }

    pub fn discrete(r: usize) -> Self {
        Partition { r, blocks: (0..r).map(|i| vec![i]).collect() }
    }

    pub fn single_block(r: usize) -> Self {
        Partition { r, blocks: vec![(0..r).collect()] }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// The block containing index 0.
    pub fn first_block(&self) -> &[usize] {
        &self.blocks[0]
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.r
    }

    pub fn is_single_block(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Block label for every element.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.r];
        for (k, b) in self.blocks.iter().enumerate() {
            for &i in b {
                out[i] = k;
            }
        }
        out
    }

    pub fn block_of(&self, i: usize) -> &[usize] {
        self.blocks.iter().find(|b| b.contains(&i)).expect("index in ground set")
    }

    /// Finest common coarsening.
    pub fn join(&self, other: &Self) -> Result<Self, LatticeError> {
        if self.r != other.r {
            return Err(LatticeError::GroundSetMismatch(self.r, other.r));
        }
        let mut uf = UnionFind::new(self.r);
        for b in self.blocks.iter().chain(&other.blocks) {
            for w in b.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let labels: Vec<usize> = (0..self.r).map(|i| uf.find(i)).collect();
        Ok(Self::from_labels(&labels))
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Self) -> bool {
        if self.r != other.r {
            return false;
        }
        let lab = other.labels();
        self.blocks.iter().all(|b| b.iter().all(|&i| lab[i] == lab[b[0]]))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let inner: Vec<String> = b.iter().map(|i| (i + 1).to_string()).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        write!(f, "{{{}}}", blocks.join(","))
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// All subfield partitions, principal ones first.
#[derive(Clone, Debug, Serialize)]
pub struct SubfieldLattice {
    pub partitions: Vec<Partition>,
    /// Whether each partition is a principal one.
    pub principal: Vec<bool>,
    /// Lattice index of the i-th principal partition.
    pub principal_index: Vec<usize>,
    /// Cover relation `(finer, coarser)`.
    pub hasse_edges: Vec<(usize, usize)>,
}

/// Closes the principal partitions under join and adds the single block if
/// missing.
pub fn close_under_join(principals: &[Partition]) -> SubfieldLattice {
    assert!(!principals.is_empty());
    let r = principals[0].r();
    let mut partitions: Vec<Partition> = Vec::new();
    let mut index: HashMap<Partition, usize> = HashMap::new();
    let mut principal_index = Vec::with_capacity(principals.len());
    for p in principals {
        let k = *index.entry(p.clone()).or_insert_with(|| {
            partitions.push(p.clone());
            partitions.len() - 1
        });
        principal_index.push(k);
    }
    let n_principal = partitions.len();
    // worklist: join every new element with everything already present
    let mut next = 0;
    while next < partitions.len() {
        let p = partitions[next].clone();
        for q in 0..next {
            let j = p.join(&partitions[q]).expect("same ground set");
            if !index.contains_key(&j) {
                index.insert(j.clone(), partitions.len());
                partitions.push(j);
            }
        }
        next += 1;
    }
    let top = Partition::single_block(r);
    if !index.contains_key(&top) {
        index.insert(top.clone(), partitions.len());
        partitions.push(top);
    }
    let principal = (0..partitions.len()).map(|k| k < n_principal).collect();
    let hasse_edges = hasse(&partitions);
    SubfieldLattice { partitions, principal, principal_index, hasse_edges }
}

fn hasse(parts: &[Partition]) -> Vec<(usize, usize)> {
    let m = parts.len();
    let below = |a: usize, b: usize| a != b && parts[a] != parts[b] && parts[a].refines(&parts[b]);
    let mut edges = Vec::new();
    for a in 0..m {
        for b in 0..m {
            if below(a, b) && !(0..m).any(|c| below(a, c) && below(c, b)) {
                edges.push((a, b));
            }
        }
    }
    edges
}

impl SubfieldLattice {
    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    pub fn r(&self) -> usize {
        self.partitions[0].r()
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.partitions.iter().position(|q| q == p)
    }

    pub fn bottom(&self) -> usize {
        self.index_of(&Partition::discrete(self.r())).expect("discrete partition present")
    }

    pub fn top(&self) -> usize {
        self.index_of(&Partition::single_block(self.r())).expect("single block present")
    }

    /// Maximal chains from the discrete partition to the single block along
    /// cover edges, in lexicographic order of lattice indices. Stops after
    /// `limit` chains; the flag reports truncation.
    pub fn maximal_chains(&self, limit: Option<usize>) -> (Vec<Vec<usize>>, bool) {
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
        for &(a, b) in &self.hasse_edges {
            succ[a].push(b);
        }
        for s in succ.iter_mut() {
            s.sort_unstable();
        }
        let top = self.top();
        let mut out = Vec::new();
        let mut path = vec![self.bottom()];
        let truncated = dfs(&succ, top, &mut path, &mut out, limit);
        (out, truncated)
    }
}

fn dfs(succ: &[Vec<usize>], top: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: Option<usize>) -> bool {
    let last = *path.last().unwrap();
    if last == top {
        if limit.is_some_and(|l| out.len() >= l) {
            return true;
        }
        out.push(path.clone());
        return false;
    }
    for &n in &succ[last] {
        path.push(n);
        let stop = dfs(succ, top, path, out, limit);
        path.pop();
        if stop {
            return true;
        }
    }
    false
}
