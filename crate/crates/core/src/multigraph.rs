//! Multigraphs with loops and parallel edges, rotation systems and faces.

use std::fmt;

use crate::error::{Error, Result};

/// One end of an edge: `end == 0` sits at the first listed endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeEnd {
    pub edge: usize,
    pub end: u8,
}

impl EdgeEnd {
    pub fn new(edge: usize, end: u8) -> Self {
        EdgeEnd { edge, end }
    }

    pub fn other(self) -> Self {
        EdgeEnd {
            edge: self.edge,
            end: 1 - self.end,
        }
    }

    fn slot(self) -> usize {
        2 * self.edge + self.end as usize
    }
}

impl fmt::Display for EdgeEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.edge, self.end)
    }
}

/// Cyclic order of edge-ends around every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RotationSystem {
    pub order: Vec<Vec<EdgeEnd>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    rotation: Option<RotationSystem>,
}

impl Multigraph {
    pub fn new(n: usize) -> Self {
        Multigraph {
            n,
            edges: Vec::new(),
            rotation: None,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Multigraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn add_vertex(&mut self) -> usize {
        self.rotation = None;
        self.n += 1;
        self.n - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> usize {
        assert!(u < self.n && v < self.n, "edge ({u},{v}) out of range");
        self.rotation = None;
        self.edges.push((u, v));
        self.edges.len() - 1
    }

    pub fn rotation(&self) -> Option<&RotationSystem> {
        self.rotation.as_ref()
    }

    /// Attaches a rotation system after validating it.
    pub fn set_rotation(&mut self, rot: RotationSystem) -> Result<()> {
        rot.validate(self)?;
        self.rotation = Some(rot);
        Ok(())
    }

    pub fn clear_rotation(&mut self) {
        self.rotation = None;
    }

    pub fn endpoint(&self, e: EdgeEnd) -> usize {
        let (u, v) = self.edges[e.edge];
        if e.end == 0 {
            u
        } else {
            v
        }
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.edges[e].0 == self.edges[e].1
    }

    pub fn n_loops(&self) -> usize {
        (0..self.edges.len()).filter(|&e| self.is_loop(e)).count()
    }

    /// Degree with loops counted twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// Incident edge-ends per vertex, in edge order.
    pub fn incidence(&self) -> Vec<Vec<EdgeEnd>> {
        let mut inc = vec![Vec::new(); self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push(EdgeEnd::new(e, 0));
            inc[v].push(EdgeEnd::new(e, 1));
        }
        inc
    }

    /// Vertex-disjoint union (second graph shifted).
    pub fn disjoint_union(&self, other: &Multigraph) -> Multigraph {
        let mut g = self.clone();
        g.rotation = None;
        g.n += other.n;
        for &(u, v) in &other.edges {
            g.edges.push((u + self.n, v + self.n));
        }
        g
    }

    /// Vertices renamed by `perm` (vertex v becomes perm[v]).
    pub fn relabel(&self, perm: &[usize]) -> Multigraph {
        let edges: Vec<_> = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Multigraph::from_edges(self.n, &edges)
    }

    /// Component label per vertex plus component count; labels follow smallest vertex.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut out = vec![0; self.n];
        for v in 0..self.n {
            let r = find(&mut parent, v);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            out[v] = label[r];
        }
        (out, next)
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let (label, k) = self.component_labels();
        let mut comps = vec![Vec::new(); k];
        for v in 0..self.n {
            comps[label[v]].push(v);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.component_labels().1 <= 1
    }

    /// Each component as its own graph, keeping relative vertex and edge order.
    pub fn component_subgraphs(&self) -> Vec<Multigraph> {
        let (label, k) = self.component_labels();
        let mut local = vec![0; self.n];
        let mut sizes = vec![0; k];
        for v in 0..self.n {
            local[v] = sizes[label[v]];
            sizes[label[v]] += 1;
        }
        let mut out: Vec<Multigraph> = sizes.iter().map(|&s| Multigraph::new(s)).collect();
        for &(u, v) in &self.edges {
            out[label[u]].edges.push((local[u], local[v]));
        }
        out
    }

    /// The graph with all loops deleted; also returns the kept edge indices.
    pub fn without_loops(&self) -> (Multigraph, Vec<usize>) {
        let keep: Vec<usize> = (0..self.edges.len()).filter(|&e| !self.is_loop(e)).collect();
        let edges: Vec<_> = keep.iter().map(|&e| self.edges[e]).collect();
        let mut g = Multigraph::from_edges(self.n, &edges);
        if let Some(rot) = &self.rotation {
            let mut new_index = vec![usize::MAX; self.edges.len()];
            for (i, &e) in keep.iter().enumerate() {
                new_index[e] = i;
            }
            let order = rot
                .order
                .iter()
                .map(|l| {
                    l.iter()
                        .filter(|x| new_index[x.edge] != usize::MAX)
                        .map(|x| EdgeEnd::new(new_index[x.edge], x.end))
                        .collect()
                })
                .collect();
            g.rotation = Some(RotationSystem { order });
        }
        (g, keep)
    }
}

impl RotationSystem {
    /// Checks that every edge-end appears exactly once, at its own vertex.
    pub fn validate(&self, g: &Multigraph) -> Result<()> {
        if self.order.len() != g.n_vertices() {
            return Err(Error::InvalidRotation(format!(
                "{} vertex lists for {} vertices",
                self.order.len(),
                g.n_vertices()
            )));
        }
        let mut seen = vec![false; 2 * g.n_edges()];
        for (v, list) in self.order.iter().enumerate() {
            for &x in list {
                if x.edge >= g.n_edges() || x.end > 1 {
                    return Err(Error::InvalidRotation(format!("no edge-end {x}")));
                }
                if g.endpoint(x) != v {
                    return Err(Error::InvalidRotation(format!("{x} listed at vertex {v}")));
                }
                if std::mem::replace(&mut seen[x.slot()], true) {
                    return Err(Error::InvalidRotation(format!("{x} listed twice")));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidRotation(format!(
                "{} missing",
                EdgeEnd::new(i / 2, (i % 2) as u8)
            )));
        }
        Ok(())
    }

    /// succ[slot(x)] is the end following x in its vertex's cyclic order.
    fn successors(&self, n_edges: usize) -> Vec<EdgeEnd> {
        let mut succ = vec![EdgeEnd::new(0, 0); 2 * n_edges];
        for list in &self.order {
            for (i, &x) in list.iter().enumerate() {
                succ[x.slot()] = list[(i + 1) % list.len()];
            }
        }
        succ
    }
}

/// Face boundaries as cycles of darts; a dart is the end it leaves from.
pub fn faces(g: &Multigraph, rot: &RotationSystem) -> Result<Vec<Vec<EdgeEnd>>> {
    rot.validate(g)?;
    Ok(trace_faces(g.n_edges(), rot))
}

pub(crate) fn trace_faces(n_edges: usize, rot: &RotationSystem) -> Vec<Vec<EdgeEnd>> {
    let succ = rot.successors(n_edges);
    let mut used = vec![false; 2 * n_edges];
    let mut out = Vec::new();
    for start in 0..2 * n_edges {
        if used[start] {
            continue;
        }
        let mut face = Vec::new();
        let mut d = EdgeEnd::new(start / 2, (start % 2) as u8);
        while !used[d.slot()] {
            used[d.slot()] = true;
            face.push(d);
            d = succ[d.other().slot()];
        }
        out.push(face);
    }
    out
}

/// V − E + F = 2 on every connected component (edgeless components have one face).
pub fn euler_holds(g: &Multigraph, rot: &RotationSystem) -> bool {
    let (label, k) = g.component_labels();
    let mut v = vec![0i64; k];
    let mut e = vec![0i64; k];
    let mut f = vec![0i64; k];
    for x in 0..g.n_vertices() {
        v[label[x]] += 1;
    }
    for &(a, _) in g.edges() {
        e[label[a]] += 1;
    }
    for face in trace_faces(g.n_edges(), rot) {
        f[label[g.endpoint(face[0])]] += 1;
    }
    (0..k).all(|c| {
        let faces = if e[c] == 0 { 1 } else { f[c] };
        v[c] - e[c] + faces == 2
    })
}

pub fn parse_graph(text: &str) -> Result<Multigraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()));
    fn next_content<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Option<(usize, &'a str)> {
        lines.find(|(_, l)| !l.is_empty())
    }
    let (ln, header) = next_content(&mut lines).ok_or_else(|| Error::parse(1, "empty graph file"))?;
    let nums = parse_usizes(ln, header)?;
    if nums.len() != 2 {
        return Err(Error::parse(ln, "header must be \"V E\""));
    }
    let (n, m) = (nums[0], nums[1]);
    let mut g = Multigraph::new(n);
    for _ in 0..m {
        let (ln, l) = next_content(&mut lines)
            .ok_or_else(|| Error::parse(ln, format!("expected {m} edge lines")))?;
        let uv = parse_usizes(ln, l)?;
        if uv.len() != 2 {
            return Err(Error::parse(ln, "edge line must be \"u v\""));
        }
        if uv[0] >= n || uv[1] >= n {
            return Err(Error::parse(ln, format!("endpoint out of range 0..{n}")));
        }
        g.add_edge(uv[0], uv[1]);
    }
    let Some((ln, l)) = next_content(&mut lines) else {
        return Ok(g);
    };
    if l != "rotation" {
        return Err(Error::parse(ln, format!("unexpected line {l:?}")));
    }
    // Vertex lists may be blank, so they are read positionally.
    let mut order = Vec::with_capacity(n);
    let mut last = ln;
    for (ln, l) in lines.by_ref().take(n) {
        last = ln;
        let mut list = Vec::new();
        for tok in l.split_whitespace() {
            list.push(parse_end(ln, tok)?);
        }
        order.push(list);
    }
    order.resize(n, Vec::new());
    if let Some((ln, l)) = lines.find(|(_, l)| !l.is_empty()) {
        return Err(Error::parse(ln, format!("trailing content {l:?}")));
    }
    let rot = RotationSystem { order };
    rot.validate(&g).map_err(|e| match e {
        Error::InvalidRotation(msg) => Error::parse(last, msg),
        other => other,
    })?;
    g.rotation = Some(rot);
    Ok(g)
}

fn parse_usizes(ln: usize, l: &str) -> Result<Vec<usize>> {
    l.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(ln, format!("bad integer {t:?}"))))
        .collect()
}

fn parse_end(ln: usize, tok: &str) -> Result<EdgeEnd> {
    let bad = || Error::parse(ln, format!("bad edge-end {tok:?}"));
    let (e, k) = tok.split_once(':').ok_or_else(bad)?;
    let e = e.parse().map_err(|_| bad())?;
    match k {
        "0" => Ok(EdgeEnd::new(e, 0)),
        "1" => Ok(EdgeEnd::new(e, 1)),
        _ => Err(bad()),
    }
}

pub fn serialize_graph(g: &Multigraph) -> String {
    let mut s = format!("{} {}\n", g.n, g.edges.len());
    for &(u, v) in &g.edges {
        s.push_str(&format!("{u} {v}\n"));
    }
    if let Some(rot) = &g.rotation {
        s.push_str("rotation\n");
        for list in &rot.order {
            let toks: Vec<String> = list.iter().map(|x| x.to_string()).collect();
            s.push_str(&toks.join(" "));
            s.push('\n');
        }
    }
    s
}

/// Small named graphs used by tests, examples and the CLI fixtures.
pub mod named {
    use super::Multigraph;

    pub fn path(n: usize) -> Multigraph {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Multigraph::from_edges(n, &e)
    }

    pub fn cycle(n: usize) -> Multigraph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Multigraph::from_edges(n, &e)
    }

    pub fn complete(n: usize) -> Multigraph {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        Multigraph::from_edges(n, &e)
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Multigraph {
        let mut e = Vec::new();
        for i in 0..a {
            for j in 0..b {
                e.push((i, a + j));
            }
        }
        Multigraph::from_edges(a + b, &e)
    }

    pub fn grid(rows: usize, cols: usize) -> Multigraph {
        let id = |r: usize, c: usize| r * cols + c;
        let mut e = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    e.push((id(r, c), id(r, c + 1)));
                }
                if r + 1 < rows {
                    e.push((id(r, c), id(r + 1, c)));
                }
            }
        }
        Multigraph::from_edges(rows * cols, &e)
    }

    pub fn cube() -> Multigraph {
        let mut e = Vec::new();
        for v in 0..8usize {
            for b in 0..3 {
                let w = v ^ (1 << b);
                if v < w {
                    e.push((v, w));
                }
            }
        }
        Multigraph::from_edges(8, &e)
    }

    /// Hub 0 joined to a rim cycle 1..=n.
    pub fn wheel(n: usize) -> Multigraph {
        let mut e = Vec::new();
        for i in 0..n {
            e.push((0, 1 + i));
            e.push((1 + i, 1 + (i + 1) % n));
        }
        Multigraph::from_edges(n + 1, &e)
    }

    /// Two vertices joined by k parallel edges.
    pub fn theta(k: usize) -> Multigraph {
        Multigraph::from_edges(2, &vec![(0, 1); k])
    }

    pub fn octahedron() -> Multigraph {
        let mut e = Vec::new();
        for i in 0..6usize {
            for j in i + 1..6 {
                if j != i + 3 {
                    e.push((i, j));
                }
            }
        }
        Multigraph::from_edges(6, &e)
    }

    /// Two k-cycles joined rung by rung.
    pub fn prism(k: usize) -> Multigraph {
        let mut e = Vec::new();
        for i in 0..k {
            e.push((i, (i + 1) % k));
            e.push((k + i, k + (i + 1) % k));
            e.push((i, k + i));
        }
        Multigraph::from_edges(2 * k, &e)
    }

    fn with_extra(mut g: Multigraph, extra: &[(usize, usize)]) -> Multigraph {
        for &(u, v) in extra {
            g.add_edge(u, v);
        }
        g
    }

    /// Small planar graphs, simple and multi, all with at most 9 vertices.
    pub fn corpus() -> Vec<(String, Multigraph)> {
        let mut out: Vec<(String, Multigraph)> = Vec::new();
        for n in 1..=6 {
            out.push((format!("path{n}"), path(n)));
        }
        for n in 3..=8 {
            out.push((format!("cycle{n}"), cycle(n)));
        }
        for n in 1..=4 {
            out.push((format!("k{n}"), complete(n)));
        }
        for n in 1..=4 {
            out.push((format!("k2_{n}"), complete_bipartite(2, n)));
        }
        for n in 3..=5 {
            out.push((format!("star{n}"), complete_bipartite(1, n)));
        }
        for (r, c) in [(2, 2), (2, 3), (2, 4), (3, 3)] {
            out.push((format!("grid{r}x{c}"), grid(r, c)));
        }
        for n in 3..=8 {
            out.push((format!("wheel{n}"), wheel(n)));
        }
        for k in 1..=4 {
            out.push((format!("theta{k}"), theta(k)));
        }
        out.push(("cube".into(), cube()));
        out.push(("octahedron".into(), octahedron()));
        out.push(("prism3".into(), prism(3)));
        out.push(("prism4".into(), prism(4)));
        out.push(("k4_minus_edge".into(), Multigraph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (1, 3), (2, 3)])));
        out.push(("loop".into(), Multigraph::from_edges(1, &[(0, 0)])));
        out.push(("two_loops".into(), Multigraph::from_edges(1, &[(0, 0), (0, 0)])));
        out.push(("edge_loop".into(), Multigraph::from_edges(2, &[(0, 1), (1, 1)])));
        out.push(("triangle_double".into(), with_extra(cycle(3), &[(0, 1)])));
        out.push(("triangle_loops".into(), with_extra(cycle(3), &[(0, 0), (2, 2)])));
        out.push(("cycle4_loop_chord".into(), with_extra(cycle(4), &[(0, 0), (0, 2), (0, 2)])));
        out.push(("path4_multi".into(), with_extra(path(4), &[(0, 1), (2, 3), (2, 3), (3, 3)])));
        out.push(("wheel4_double_spoke".into(), with_extra(wheel(4), &[(0, 1), (0, 3)])));
        out.push(("grid2x3_loops".into(), with_extra(grid(2, 3), &[(0, 0), (4, 4), (1, 4)])));
        out.push(("two_triangles".into(), Multigraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])));
        out.push(("isolated_plus_edge".into(), Multigraph::from_edges(3, &[(0, 1)])));
        out
    }

    pub fn petersen() -> Multigraph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        Multigraph::from_edges(10, &e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let g = parse_graph("2 1\n0 1").unwrap();
        assert_eq!((g.n_vertices(), g.edges()), (2, &[(0, 1)][..]));
        let g = parse_graph("1 1\n0 0").unwrap();
        assert!(g.is_loop(0));
        let g = parse_graph("2 3\n0 1\n0 1\n0 1").unwrap();
        assert_eq!(g.edges(), &[(0, 1); 3]);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_graph("").is_err());
        assert!(parse_graph("2 1\n0 2").is_err());
        assert!(parse_graph("2 2\n0 1").is_err());
        assert!(parse_graph("2 1\n0 x").is_err());
        assert!(parse_graph("2 1\n0 1\nrotation\n0:0\n0:0").is_err());
        assert!(parse_graph("2 1\n0 1\nrotation\n0:1\n0:0").is_err());
    }

    #[test]
    fn rotation_round_trip() {
        let text = "3 3\n0 1\n1 2\n2 0\nrotation\n0:0 2:1\n1:0 0:1\n2:0 1:1\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(serialize_graph(&g), text);
        let f = faces(&g, g.rotation().unwrap()).unwrap();
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn isolated_vertex_rotation_line_may_be_blank() {
        let g = parse_graph("3 1\n0 1\nrotation\n0:0\n\n0:1\n").unwrap_err();
        assert!(matches!(g, Error::Parse { .. }));
        let g = parse_graph("3 1\n0 1\nrotation\n0:0\n0:1\n\n").unwrap();
        assert_eq!(g.rotation().unwrap().order[2], vec![]);
    }

    #[test]
    fn components() {
        assert_eq!(Multigraph::new(3).connected_components(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(named::complete(3).connected_components().len(), 1);
        let g = named::complete(3).disjoint_union(&named::path(2));
        let sizes: Vec<_> = g.connected_components().iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![3, 2]);
    }

    #[test]
    fn single_edge_has_one_face_of_length_two() {
        let mut g = named::path(2);
        g.set_rotation(RotationSystem {
            order: vec![vec![EdgeEnd::new(0, 0)], vec![EdgeEnd::new(0, 1)]],
        })
        .unwrap();
        let f = faces(&g, g.rotation().unwrap()).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].len(), 2);
        assert!(euler_holds(&g, g.rotation().unwrap()));
    }
}
