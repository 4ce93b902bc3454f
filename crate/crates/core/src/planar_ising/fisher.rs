//! Ising partition functions on plane multigraphs through the Fisher
//! construction: even subgraphs become perfect matchings of a derived plane
//! graph, counted with a Kasteleyn Pfaffian.

use num_traits::{One, Zero};

use super::kasteleyn::count_pm_planar;
use crate::error::{Error, Result};
use crate::multigraph::{EdgeEnd, Multigraph, RotationSystem};
use crate::planarity::planar_embed;
use crate::scalar::{pow_u, rat, Rational};

#[derive(Clone, Copy)]
struct Port {
    node: usize,
    slot: usize,
}

#[derive(Default)]
struct Builder {
    slots: Vec<Vec<Option<EdgeEnd>>>,
    edges: Vec<(usize, usize)>,
    weights: Vec<Rational>,
}

impl Builder {
    fn node(&mut self, degree: usize) -> usize {
        self.slots.push(vec![None; degree]);
        self.slots.len() - 1
    }

    fn edge(&mut self, a: Port, b: Port, w: Rational) {
        let k = self.edges.len();
        self.edges.push((a.node, b.node));
        self.weights.push(w);
        self.slots[a.node][a.slot] = Some(EdgeEnd::new(k, 0));
        self.slots[b.node][b.slot] = Some(EdgeEnd::new(k, 1));
    }

    /// A degree-2 or degree-3 node of the split graph; returns its ports in
    /// rotation order.
    fn gadget(&mut self, ports: usize) -> Vec<Port> {
        match ports {
            1 => {
                let n = self.node(1);
                vec![Port { node: n, slot: 0 }]
            }
            2 => {
                let a = self.node(2);
                let b = self.node(2);
                self.edge(Port { node: a, slot: 1 }, Port { node: b, slot: 1 }, Rational::one());
                vec![Port { node: a, slot: 0 }, Port { node: b, slot: 0 }]
            }
            3 => {
                // N_i rotates as (outer port, N_{i+1}, N_{i−1}).
                let n: Vec<usize> = (0..3).map(|_| self.node(3)).collect();
                for i in 0..3 {
                    let j = (i + 1) % 3;
                    self.edge(Port { node: n[i], slot: 1 }, Port { node: n[j], slot: 2 }, Rational::one());
                }
                n.iter().map(|&node| Port { node, slot: 0 }).collect()
            }
            _ => unreachable!("split nodes have at most three ports"),
        }
    }

    fn finish(self) -> Result<(Multigraph, RotationSystem, Vec<Rational>)> {
        let g = Multigraph::from_edges(self.slots.len(), &self.edges);
        let order = self
            .slots
            .into_iter()
            .map(|s| s.into_iter().collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Internal("unfilled port in Fisher graph".into()))?;
        Ok((g, RotationSystem { order }, self.weights))
    }
}

/// Fisher graph of a loopless plane graph. Perfect matchings correspond to
/// even subgraphs S with weight Π_{e∉S} w_out · Π_{e∈S} w_in.
pub fn fisher_graph(
    g: &Multigraph,
    rot: &RotationSystem,
    w_out: &Rational,
    w_in: &Rational,
) -> Result<(Multigraph, RotationSystem, Vec<Rational>)> {
    rot.validate(g)?;
    let mut b = Builder::default();
    let mut dart_port: Vec<Option<Port>> = vec![None; 2 * g.n_edges()];
    for darts in &rot.order {
        let d = darts.len();
        if d == 0 {
            continue;
        }
        if d == 1 {
            let p = b.gadget(1)[0];
            dart_port[2 * darts[0].edge + darts[0].end as usize] = Some(p);
            continue;
        }
        // Chain c_0 … c_{d−1} along the rotation; c_i rotates as
        // (ext, next, prev), ends drop the missing side.
        let mut prev_next: Option<Port> = None;
        for (i, x) in darts.iter().enumerate() {
            let (ext, next, prev) = if i == 0 {
                let p = b.gadget(2);
                (p[0], Some(p[1]), None)
            } else if i == d - 1 {
                let p = b.gadget(2);
                (p[1], None, Some(p[0]))
            } else {
                let p = b.gadget(3);
                (p[0], Some(p[1]), Some(p[2]))
            };
            if let (Some(a), Some(c)) = (prev_next, prev) {
                b.edge(a, c, Rational::one());
            }
            prev_next = next;
            dart_port[2 * x.edge + x.end as usize] = Some(ext);
        }
    }
    for e in 0..g.n_edges() {
        let pu = dart_port[2 * e].unwrap();
        let pv = dart_port[2 * e + 1].unwrap();
        let p = b.node(2);
        let q = b.node(2);
        b.edge(pu, Port { node: p, slot: 0 }, w_out.clone());
        b.edge(Port { node: p, slot: 1 }, Port { node: q, slot: 0 }, w_in.clone());
        b.edge(Port { node: q, slot: 1 }, pv, Rational::one());
    }
    b.finish()
}

/// Z_M(G) for M = [[a,b],[b,a]] on a planar multigraph. Uses the stored
/// rotation when present, else embeds first.
///
/// With spins s = ±1 each edge weighs ((a+b) + (a−b)s_u s_v)/2, so
/// Z = a^{loops} · 2^{|V|−|E'|} · Σ_{S even} (a+b)^{|E'∖S|} (a−b)^{|S|}
/// over the loopless part E'.
pub fn ising_fkt(g: &Multigraph, a: &Rational, b: &Rational) -> Result<Rational> {
    let mut gg = g.clone();
    if gg.rotation().is_none() {
        let rot = planar_embed(g)?;
        gg.set_rotation(rot)?;
    }
    let loops = g.n_loops();
    let (h, _) = gg.without_loops();
    let rot = h.rotation().expect("rotation carried over").clone();
    let (f, frot, w) = fisher_graph(&h, &rot, &(a + b), &(a - b))?;
    let pm = count_pm_planar(&f, &frot, &w)?;
    let e0 = h.n_edges() as i64;
    let v = h.n_vertices() as i64;
    let two = rat(2);
    let scale = if v >= e0 {
        pow_u(&two, (v - e0) as u64)
    } else {
        pow_u(&two, (e0 - v) as u64).recip()
    };
    let loop_factor = if loops == 0 { Rational::one() } else { pow_u(a, loops as u64) };
    if pm.is_zero() {
        return Ok(Rational::zero());
    }
    Ok(loop_factor * scale * pm)
}
