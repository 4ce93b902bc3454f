//! Planarity testing and embedding by path addition on biconnected blocks.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::multigraph::{euler_holds, EdgeEnd, Multigraph, RotationSystem};

/// Above this many block edges the obstruction is reported unminimized.
const WITNESS_MINIMIZE_LIMIT: usize = 400;

/// Rotation system of a planar embedding of `g`, or `NonPlanar` with an obstruction.
pub fn planar_embed(g: &Multigraph) -> Result<RotationSystem> {
    let n = g.n_vertices();
    // Collapse parallel edges onto the first edge of each class; loops are set aside.
    let mut rep_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut parallels: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut simple = Vec::new();
    let mut loops = vec![Vec::new(); n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if u == v {
            loops[u].push(e);
            continue;
        }
        let key = (u.min(v), u.max(v));
        match rep_of.get(&key) {
            Some(&r) => parallels.entry(r).or_default().push(e),
            None => {
                rep_of.insert(key, e);
                simple.push(e);
            }
        }
    }
    let simple_edges: Vec<(usize, usize)> = simple.iter().map(|&e| g.edges()[e]).collect();
    let local_rot = embed_simple(n, &simple_edges).map_err(|witness| Error::NonPlanar {
        witness: witness.into_iter().map(|i| simple[i]).collect(),
    })?;

    let end_at = |e: usize, v: usize| EdgeEnd::new(e, if g.edges()[e].0 == v { 0 } else { 1 });
    let mut order = Vec::with_capacity(n);
    for v in 0..n {
        let mut list = Vec::new();
        for &i in &local_rot[v] {
            let e = simple[i];
            let x = end_at(e, v);
            match parallels.get(&e) {
                None => list.push(x),
                Some(others) if x.end == 0 => {
                    list.push(x);
                    list.extend(others.iter().map(|&f| end_at(f, v)));
                }
                Some(others) => {
                    list.extend(others.iter().rev().map(|&f| end_at(f, v)));
                    list.push(x);
                }
            }
        }
        for &l in &loops[v] {
            list.push(EdgeEnd::new(l, 0));
            list.push(EdgeEnd::new(l, 1));
        }
        order.push(list);
    }
    let rot = RotationSystem { order };
    rot.validate(g)?;
    if !euler_holds(g, &rot) {
        return Err(Error::Internal("embedding fails the Euler check".into()));
    }
    Ok(rot)
}

pub fn is_planar(g: &Multigraph) -> bool {
    planar_embed(g).is_ok()
}

/// Per-vertex cyclic order of incident simple-edge indices, or a non-planar edge set.
fn embed_simple(n: usize, edges: &[(usize, usize)]) -> std::result::Result<Vec<Vec<usize>>, Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, i));
        adj[v].push((u, i));
    }
    let mut rot = vec![Vec::new(); n];
    for block in biconnected_blocks(n, &adj) {
        if block.len() == 1 {
            let i = block[0];
            let (u, v) = edges[i];
            rot[u].push(i);
            rot[v].push(i);
            continue;
        }
        let (verts, local) = localize(edges, &block);
        match path_addition(verts.len(), &local) {
            Some(lr) => {
                for (lv, list) in lr.into_iter().enumerate() {
                    rot[verts[lv]].extend(list.into_iter().map(|j| block[j]));
                }
            }
            None => return Err(minimize_obstruction(edges, block)),
        }
    }
    Ok(rot)
}

fn localize(edges: &[(usize, usize)], block: &[usize]) -> (Vec<usize>, Vec<(usize, usize)>) {
    let mut verts = Vec::new();
    let mut id = HashMap::new();
    let mut local = Vec::with_capacity(block.len());
    for &i in block {
        let (u, v) = edges[i];
        let mut get = |x: usize| {
            *id.entry(x).or_insert_with(|| {
                verts.push(x);
                verts.len() - 1
            })
        };
        let (a, b) = (get(u), get(v));
        local.push((a, b));
    }
    (verts, local)
}

fn simple_is_planar(edges: &[(usize, usize)]) -> bool {
    let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, i));
        adj[v].push((u, i));
    }
    biconnected_blocks(n, &adj).into_iter().all(|b| {
        b.len() < 9 || {
            let (verts, local) = localize(edges, &b);
            path_addition(verts.len(), &local).is_some()
        }
    })
}

/// Greedy deletion down to an edge-minimal non-planar subgraph.
fn minimize_obstruction(edges: &[(usize, usize)], block: Vec<usize>) -> Vec<usize> {
    if block.len() > WITNESS_MINIMIZE_LIMIT {
        return block;
    }
    let mut keep = block;
    let mut i = 0;
    while i < keep.len() {
        let trial: Vec<(usize, usize)> = keep
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &e)| edges[e])
            .collect();
        if simple_is_planar(&trial) {
            i += 1;
        } else {
            keep.remove(i);
        }
    }
    keep
}

/// Edge sets of the biconnected blocks (bridges are singleton blocks).
fn biconnected_blocks(n: usize, adj: &[Vec<(usize, usize)>]) -> Vec<Vec<usize>> {
    const NONE: usize = usize::MAX;
    let mut disc = vec![NONE; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut estack = Vec::new();
    let mut blocks = Vec::new();
    for root in 0..n {
        if disc[root] != NONE || adj[root].is_empty() {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, edge to parent, next adjacency index)
        let mut stack = vec![(root, NONE, 0usize)];
        while let Some(top) = stack.last_mut() {
            let (v, pe) = (top.0, top.1);
            if top.2 < adj[v].len() {
                let (w, e) = adj[v][top.2];
                top.2 += 1;
                if e == pe {
                    continue;
                }
                if disc[w] == NONE {
                    estack.push(e);
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, e, 0));
                } else if disc[w] < disc[v] {
                    estack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(u, _, _)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut block = Vec::new();
                        while let Some(e) = estack.pop() {
                            block.push(e);
                            if e == pe {
                                break;
                            }
                        }
                        block.sort_unstable();
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

/// Embeds a 2-connected simple graph; returns per-vertex cyclic edge orders.
fn path_addition(k: usize, edges: &[(usize, usize)]) -> Option<Vec<Vec<usize>>> {
    let mut adj = vec![Vec::new(); k];
    for (i, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, i));
        adj[v].push((u, i));
    }
    let mut in_h = vec![false; k];
    let mut edge_in = vec![false; edges.len()];

    // Start from a cycle through edge 0.
    let (a, b) = edges[0];
    let mut prev = vec![usize::MAX; k];
    prev[b] = b;
    let mut queue = VecDeque::from([b]);
    while let Some(x) = queue.pop_front() {
        for &(y, e) in &adj[x] {
            if e != 0 && prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut cycle = vec![a];
    let mut x = a;
    while x != b {
        x = prev[x];
        cycle.push(x);
    }
    // cycle runs a → … → b; the closing edge is 0.
    for w in cycle.windows(2) {
        edge_in[edge_between(&adj, w[0], w[1])] = true;
    }
    edge_in[0] = true;
    for &v in &cycle {
        in_h[v] = true;
    }
    let mut embedded = cycle.len();
    let mut rev = cycle.clone();
    rev.reverse();
    let mut faces = vec![cycle, rev];

    while embedded < edges.len() {
        let fragments = fragments(k, edges, &adj, &in_h, &edge_in);
        let members: Vec<Vec<bool>> = faces
            .iter()
            .map(|f| {
                let mut m = vec![false; k];
                for &v in f {
                    m[v] = true;
                }
                m
            })
            .collect();
        let mut choice = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let ok: Vec<usize> = (0..faces.len())
                .filter(|&f| frag.attach.iter().all(|&v| members[f][v]))
                .take(2)
                .collect();
            match ok.len() {
                0 => return None,
                1 => {
                    choice = Some((fi, ok[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, ok[0]));
                    }
                }
            }
        }
        let (fi, f) = choice?;
        let path = fragment_path(&fragments[fi], &adj, &in_h);
        for w in path.windows(2) {
            edge_in[edge_between(&adj, w[0], w[1])] = true;
            embedded += 1;
        }
        for &v in &path {
            in_h[v] = true;
        }
        let face = &faces[f];
        let (s, t) = (path[0], *path.last().unwrap());
        let i = face.iter().position(|&v| v == s)?;
        let j = face.iter().position(|&v| v == t)?;
        let seg = |from: usize, to: usize| {
            let mut out = vec![face[from]];
            let mut p = from;
            while p != to {
                p = (p + 1) % face.len();
                out.push(face[p]);
            }
            out
        };
        let inner = &path[1..path.len() - 1];
        let mut f1 = seg(i, j);
        f1.extend(inner.iter().rev());
        let mut f2 = seg(j, i);
        f2.extend(inner.iter());
        faces[f] = f1;
        faces.push(f2);
    }

    // Corner (u, v, w) on a face means w follows u around v.
    let mut succ: Vec<HashMap<usize, usize>> = vec![HashMap::new(); k];
    for f in &faces {
        let l = f.len();
        for p in 0..l {
            let (u, v, w) = (f[p], f[(p + 1) % l], f[(p + 2) % l]);
            succ[v].insert(u, w);
        }
    }
    let mut rot = vec![Vec::new(); k];
    for v in 0..k {
        let start = adj[v][0].0;
        let mut u = start;
        loop {
            rot[v].push(edge_between(&adj, v, u));
            u = succ[v][&u];
            if u == start {
                break;
            }
        }
        if rot[v].len() != adj[v].len() {
            return None;
        }
    }
    Some(rot)
}

fn edge_between(adj: &[Vec<(usize, usize)>], u: usize, v: usize) -> usize {
    adj[u].iter().find(|&&(w, _)| w == v).map(|&(_, e)| e).expect("adjacent")
}

struct Fragment {
    attach: Vec<usize>,
    /// None for a lone chord; otherwise the fragment's interior vertices.
    interior: Option<Vec<bool>>,
    chord: Option<(usize, usize)>,
}

fn fragments(
    k: usize,
    edges: &[(usize, usize)],
    adj: &[Vec<(usize, usize)>],
    in_h: &[bool],
    edge_in: &[bool],
) -> Vec<Fragment> {
    let mut out = Vec::new();
    for (i, &(u, v)) in edges.iter().enumerate() {
        if !edge_in[i] && in_h[u] && in_h[v] {
            out.push(Fragment {
                attach: vec![u, v],
                interior: None,
                chord: Some((u, v)),
            });
        }
    }
    let mut seen = vec![false; k];
    for s in 0..k {
        if in_h[s] || seen[s] {
            continue;
        }
        let mut inside = vec![false; k];
        let mut attach = Vec::new();
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(x) = stack.pop() {
            inside[x] = true;
            for &(y, _) in &adj[x] {
                if in_h[y] {
                    if !attach.contains(&y) {
                        attach.push(y);
                    }
                } else if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        attach.sort_unstable();
        out.push(Fragment {
            attach,
            interior: Some(inside),
            chord: None,
        });
    }
    out
}

/// A path through the fragment between two distinct attachment vertices.
fn fragment_path(frag: &Fragment, adj: &[Vec<(usize, usize)>], in_h: &[bool]) -> Vec<usize> {
    if let Some((u, v)) = frag.chord {
        return vec![u, v];
    }
    let inside = frag.interior.as_ref().unwrap();
    let start = frag.attach[0];
    let mut prev: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for &(y, _) in &adj[start] {
        if inside[y] && !prev.contains_key(&y) {
            prev.insert(y, start);
            queue.push_back(y);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &(y, _) in &adj[x] {
            if in_h[y] && y != start {
                let mut path = vec![y, x];
                let mut z = x;
                while let Some(&p) = prev.get(&z) {
                    path.push(p);
                    if p == start {
                        break;
                    }
                    z = p;
                }
                path.reverse();
                return path;
            }
            if inside[y] && !prev.contains_key(&y) {
                prev.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    unreachable!("fragments of a 2-connected graph have two attachments")
}
