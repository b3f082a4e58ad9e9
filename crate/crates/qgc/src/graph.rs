//! Combinatorial graph model: constructors, fixtures, canonical labeling,
//! automorphism orbits, interior subgraphs, and small-family enumeration.

use std::collections::{BTreeSet, HashSet};

use crate::error::{QgcError, Result};

/// Simple undirected graph on vertices 0..n, the combinatorial proxy for an
/// equilateral metric graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CombGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

/// Dirichlet / lead-attachment vertex set.
pub type VertexSet = BTreeSet<usize>;

/// Vertices grouped by the automorphism group action.
#[derive(Clone, Debug)]
pub struct OrbitPartition {
    /// orbit id per vertex
    pub orbit_of: Vec<usize>,
    /// lowest-index vertex of each orbit, ascending
    pub representatives: Vec<usize>,
}

/// Isomorphism-invariant encoding: upper-triangle adjacency bits of the
/// minimal labeling. Equal encodings (with equal n) iff isomorphic.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CanonicalForm {
    pub n: usize,
    pub bits: u128,
}

const MAX_CANON_N: usize = 12;

impl CombGraph {
    pub fn new(n: usize, edge_list: &[(usize, usize)]) -> Result<CombGraph> {
        if n == 0 {
            return Err(QgcError::InvalidInput(
                "graph needs at least one vertex".into(),
            ));
        }
        let mut edges = BTreeSet::new();
        for &(u, v) in edge_list {
            if u == v {
                return Err(QgcError::InvalidInput(format!("loop at vertex {u}")));
            }
            let (a, b) = (u.min(v), u.max(v));
            if b >= n {
                return Err(QgcError::VertexOutOfRange { vertex: b, n });
            }
            edges.insert((a, b));
        }
        Ok(CombGraph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted (low, high) pairs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        if v >= self.n {
            return Err(QgcError::VertexOutOfRange {
                vertex: v,
                n: self.n,
            });
        }
        Ok(self
            .edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count())
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.n];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            if a == v {
                out.push(b);
            } else if b == v {
                out.push(a);
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.n
    }

    /// Deletes the vertices in vstar (and incident edges), relabelling the
    /// survivors densely in order. Returns the interior subgraph together
    /// with the survivors' degrees measured in the original graph.
    pub fn interior_subgraph(&self, vstar: &VertexSet) -> Result<(CombGraph, Vec<usize>)> {
        for &v in vstar {
            if v >= self.n {
                return Err(QgcError::VertexOutOfRange {
                    vertex: v,
                    n: self.n,
                });
            }
        }
        if vstar.len() >= self.n {
            return Err(QgcError::InvalidInput(
                "deleting every vertex leaves an empty pencil".into(),
            ));
        }
        let mut relabel = vec![usize::MAX; self.n];
        let mut kept = Vec::new();
        for (v, slot) in relabel.iter_mut().enumerate() {
            if !vstar.contains(&v) {
                *slot = kept.len();
                kept.push(v);
            }
        }
        let degs = self.degrees();
        let kept_degs: Vec<usize> = kept.iter().map(|&v| degs[v]).collect();
        let sub_edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(a, b)| !vstar.contains(&a) && !vstar.contains(&b))
            .map(|&(a, b)| (relabel[a], relabel[b]))
            .collect();
        Ok((CombGraph::new(kept.len(), &sub_edges)?, kept_degs))
    }

    fn adjacency_bitsets(&self) -> Vec<u16> {
        let mut adj = vec![0u16; self.n];
        for &(a, b) in &self.edges {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }

    /// Color refinement to a fixpoint. Colors are isomorphism-invariant ids
    /// in 0..k, assigned by sorted signature, so corresponding vertices of
    /// isomorphic graphs receive equal colors.
    fn refine_colors(&self) -> Vec<usize> {
        let mut colors = self.degrees();
        // degrees are already invariant ids; normalize to 0..k
        loop {
            let mut sigs: Vec<(usize, Vec<usize>, usize)> = (0..self.n)
                .map(|v| {
                    let mut nb: Vec<usize> = self.neighbors(v).iter().map(|&w| colors[w]).collect();
                    nb.sort_unstable();
                    (colors[v], nb, v)
                })
                .collect();
            sigs.sort();
            let mut new_colors = vec![0usize; self.n];
            let mut next = 0usize;
            for i in 0..self.n {
                if i > 0 && (sigs[i].0, &sigs[i].1) != (sigs[i - 1].0, &sigs[i - 1].1) {
                    next += 1;
                }
                new_colors[sigs[i].2] = next;
            }
            let old_classes = colors.iter().collect::<HashSet<_>>().len();
            if next + 1 == old_classes && new_colors == colors {
                return colors;
            }
            let stable = next + 1 == old_classes;
            colors = new_colors;
            if stable {
                return colors;
            }
        }
    }

    /// Iterate all labelings that respect the refined color classes, calling
    /// f with the position array (perm[v] = new label).
    fn for_each_refined_labeling<F: FnMut(&[usize])>(&self, mut f: F) {
        let colors = self.refine_colors();
        let k = colors.iter().max().map_or(0, |&c| c + 1);
        let mut classes: Vec<Vec<usize>> = vec![Vec::new(); k];
        for v in 0..self.n {
            classes[colors[v]].push(v);
        }
        let mut offsets = vec![0usize; k];
        let mut off = 0;
        for c in 0..k {
            offsets[c] = off;
            off += classes[c].len();
        }
        let mut perm = vec![0usize; self.n];
        fn rec<F: FnMut(&[usize])>(
            classes: &mut [Vec<usize>],
            offsets: &[usize],
            c: usize,
            idx: usize,
            perm: &mut [usize],
            f: &mut F,
        ) {
            if c == classes.len() {
                f(perm);
                return;
            }
            if idx == classes[c].len() {
                rec(classes, offsets, c + 1, 0, perm, f);
                return;
            }
            for i in idx..classes[c].len() {
                classes[c].swap(idx, i);
                perm[classes[c][idx]] = offsets[c] + idx;
                rec(classes, offsets, c, idx + 1, perm, f);
                classes[c].swap(idx, i);
            }
        }
        rec(&mut classes, &offsets, 0, 0, &mut perm, &mut f);
    }

    fn encode_under(&self, perm: &[usize], adj: &[u16]) -> u128 {
        let n = self.n;
        let mut bits = 0u128;
        for v in 0..n {
            let pv = perm[v];
            let mut row = adj[v];
            while row != 0 {
                let w = row.trailing_zeros() as usize;
                row &= row - 1;
                if w < v {
                    continue; // each edge once
                }
                let (i, j) = if pv < perm[w] {
                    (pv, perm[w])
                } else {
                    (perm[w], pv)
                };
                let idx = i * n - i * (i + 1) / 2 + (j - i - 1);
                bits |= 1u128 << idx;
            }
        }
        bits
    }

    /// Minimum adjacency encoding over all labelings that respect color
    /// refinement; equal forms iff isomorphic.
    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        if self.n > MAX_CANON_N {
            return Err(QgcError::InvalidInput(format!(
                "canonical labeling supports up to {MAX_CANON_N} vertices"
            )));
        }
        let adj = self.adjacency_bitsets();
        let mut best = u128::MAX;
        self.for_each_refined_labeling(|perm| {
            let bits = self.encode_under(perm, &adj);
            if bits < best {
                best = bits;
            }
        });
        Ok(CanonicalForm {
            n: self.n,
            bits: best,
        })
    }

    /// Orbits of the automorphism group. All labelings achieving the minimal
    /// encoding form a coset of the automorphism group, so pairwise
    /// composition of the minimizers with one fixed minimizer generates it.
    pub fn vertex_orbits(&self) -> Result<OrbitPartition> {
        if self.n > MAX_CANON_N {
            return Err(QgcError::InvalidInput(format!(
                "orbit computation supports up to {MAX_CANON_N} vertices"
            )));
        }
        let adj = self.adjacency_bitsets();
        let mut best = u128::MAX;
        let mut minimizers: Vec<Vec<usize>> = Vec::new();
        self.for_each_refined_labeling(|perm| {
            let bits = self.encode_under(perm, &adj);
            if bits < best {
                best = bits;
                minimizers.clear();
                minimizers.push(perm.to_vec());
            } else if bits == best {
                minimizers.push(perm.to_vec());
            }
        });
        // union-find over g = pi0^-1 . pi for each minimizer pi
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        let pi0 = &minimizers[0];
        let mut inv0 = vec![0usize; self.n];
        for v in 0..self.n {
            inv0[pi0[v]] = v;
        }
        for pi in &minimizers {
            for v in 0..self.n {
                let image = inv0[pi[v]];
                let (a, b) = (find(&mut parent, v), find(&mut parent, image));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut orbit_of = vec![0usize; self.n];
        let mut reps = Vec::new();
        for v in 0..self.n {
            let r = find(&mut parent, v);
            if r == v {
                reps.push(v);
            }
        }
        for (v, slot) in orbit_of.iter_mut().enumerate() {
            let r = find(&mut parent, v);
            *slot = reps.iter().position(|&x| x == r).unwrap();
        }
        Ok(OrbitPartition {
            orbit_of,
            representatives: reps,
        })
    }

    /// Serializes to {"n": .., "edges": [[u, v], ..]} with sorted edges.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "edges": self.edges.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<CombGraph> {
        let n = v
            .get("n")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| QgcError::InvalidInput("graph JSON: missing n".into()))?
            as usize;
        let edges = v
            .get("edges")
            .and_then(|x| x.as_array())
            .ok_or_else(|| QgcError::InvalidInput("graph JSON: missing edges".into()))?;
        let mut list = Vec::new();
        for e in edges {
            let pair = e
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| QgcError::InvalidInput("graph JSON: bad edge".into()))?;
            let u = pair[0]
                .as_u64()
                .ok_or_else(|| QgcError::InvalidInput("graph JSON: bad edge endpoint".into()))?
                as usize;
            let w = pair[1]
                .as_u64()
                .ok_or_else(|| QgcError::InvalidInput("graph JSON: bad edge endpoint".into()))?
                as usize;
            list.push((u, w));
        }
        CombGraph::new(n, &list)
    }
}

/// Complete graph on r+s bulk vertices with two extra vertices: w1 = r+s
/// adjacent to bulk 0..r-1 and w2 = r+s+1 adjacent to bulk r..r+s-1.
pub fn fuzzy_ball(r: usize, s: usize) -> Result<CombGraph> {
    if r < 1 || s < 1 || r + s < 4 {
        return Err(QgcError::InvalidInput(
            "fuzzy ball needs r, s >= 1 and r + s >= 4".into(),
        ));
    }
    let n = r + s;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    for i in 0..r {
        edges.push((n, i));
    }
    for i in r..n {
        edges.push((n + 1, i));
    }
    CombGraph::new(n + 2, &edges)
}

/// Named graphs used throughout the test suite and reports.
pub fn fixture(name: &str) -> Result<CombGraph> {
    match name {
        "fig2-left" => fuzzy_ball(2, 2),
        "fig2-right" => fuzzy_ball(1, 3),
        "fig5-left" => CombGraph::new(
            9,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (4, 6),
                (4, 7),
                (3, 8),
            ],
        ),
        "fig5-right" => CombGraph::new(
            9,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 6),
                (4, 7),
                (2, 5),
                (2, 8),
            ],
        ),
        _ => Err(QgcError::InvalidInput(format!("unknown fixture '{name}'"))),
    }
}

/// One representative per isomorphism class of connected simple graphs on n
/// vertices, by brute force over edge subsets with canonical-form dedup.
pub fn enumerate_connected(n: usize) -> Result<Vec<CombGraph>> {
    if !(1..=7).contains(&n) {
        return Err(QgcError::InvalidInput(
            "connected enumeration supports 1..=7 vertices".into(),
        ));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << pairs.len()) {
        if n > 1 && (mask.count_ones() as usize) < n - 1 {
            continue;
        }
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = CombGraph::new(n, &edges)?;
        if !g.is_connected() {
            continue;
        }
        if seen.insert(g.canonical_form()?) {
            out.push(g);
        }
    }
    Ok(out)
}

/// One representative per isomorphism class of trees on n vertices, from all
/// Pruefer sequences with canonical-form dedup.
pub fn enumerate_trees(n: usize) -> Result<Vec<CombGraph>> {
    if !(1..=10).contains(&n) {
        return Err(QgcError::InvalidInput(
            "tree enumeration supports 1..=10 vertices".into(),
        ));
    }
    if n == 1 {
        return Ok(vec![CombGraph::new(1, &[])?]);
    }
    if n == 2 {
        return Ok(vec![CombGraph::new(2, &[(0, 1)])?]);
    }
    let len = n - 2;
    let mut seq = vec![0usize; len];
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut degree = vec![0usize; n];
    loop {
        // decode the Pruefer sequence
        for d in degree.iter_mut() {
            *d = 1;
        }
        for &x in &seq {
            degree[x] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        let mut work = degree.clone();
        let mut ptr = 0usize; // smallest candidate leaf
        let mut leaf = usize::MAX;
        for &x in &seq {
            let l = if leaf != usize::MAX {
                let l = leaf;
                leaf = usize::MAX;
                l
            } else {
                while work[ptr] != 1 {
                    ptr += 1;
                }
                let l = ptr;
                ptr += 1;
                l
            };
            edges.push((l, x));
            work[x] -= 1;
            if work[x] == 1 && x < ptr {
                leaf = x;
            }
        }
        let l = if leaf != usize::MAX {
            leaf
        } else {
            while work[ptr] != 1 {
                ptr += 1;
            }
            ptr
        };
        // the last remaining leaf pairs with vertex n-1
        edges.push((l, n - 1));
        let g = CombGraph::new(n, &edges)?;
        if seen.insert(g.canonical_form()?) {
            out.push(g);
        }
        // next sequence
        let mut i = 0;
        while i < len {
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
        if i == len {
            break;
        }
    }
    Ok(out)
}
