//! Horizontal open book data: binding counts, the interpolation building
//! block, and assembly with boundary-fibration matching across the
//! plumbing tori.
//!
//! Circle-valued maps are stored as integer coefficient pairs (homotopy
//! classes), so equality of boundary fibrations is decidable. The
//! construction consumes no area data at all; its only inputs are the
//! graph combinatorics and the edge split.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::PlumbingGraph;
use crate::model::{oriented_split, transition_matrices, EdgeSplit};
use crate::rat::Rat;

/// The class c_a * a + c_b * b of a circle-valued function on a 2-torus
/// with named coordinates (a, b). On vertex collars the coordinates are
/// (alpha, theta); on blocks they are (alpha, beta).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusMap {
    pub c_alpha: i64,
    pub c_theta: i64,
}

impl TorusMap {
    pub fn new(c_alpha: i64, c_theta: i64) -> Result<TorusMap> {
        if c_alpha == 0 && c_theta == 0 {
            return Err(Error::Precondition("zero torus map class".into()));
        }
        Ok(TorusMap { c_alpha, c_theta })
    }
}

/// Interpolation block on [0,1] x T^2: inner boundary fibers by beta,
/// outer boundary by beta + m alpha, with m binding circles at angles
/// i/m (in units of 2 pi).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OBDBlock {
    pub m: u64,
    pub inner: TorusMap,
    pub outer: TorusMap,
    pub binding_positions: Vec<Rat>,
}

/// For m = 0 the binding is empty and the two boundary maps agree.
pub fn building_block(m: u64) -> OBDBlock {
    OBDBlock {
        m,
        inner: TorusMap {
            c_alpha: 0,
            c_theta: 1,
        },
        outer: TorusMap {
            c_alpha: m as i64,
            c_theta: 1,
        },
        binding_positions: (0..m).map(|i| Rat::new(i as i64, m as i64)).collect(),
    }
}

/// p_v = -s_v - d_v per vertex and p_{v,e} = -s_{v,e} - 1 per incidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BindingData {
    pub per_vertex: Vec<i64>,
    /// indexed like the edge list, slots matching the graph's endpoints
    pub per_incidence: Vec<[i64; 2]>,
}

pub fn binding_counts(g: &PlumbingGraph, split: &EdgeSplit) -> Result<BindingData> {
    let mut per_vertex = Vec::with_capacity(g.n());
    for (v, vert) in g.vertices().iter().enumerate() {
        let d = g.valency_by_index(v) as i64;
        let p = -vert.self_int - d;
        if p < 0 {
            return Err(Error::HypothesisViolated {
                vertex: vert.id.clone(),
                detail: format!("-s_v - d_v = {p} is negative"),
            });
        }
        per_vertex.push(p);
    }
    let mut per_incidence = Vec::with_capacity(g.edges().len());
    for (e, parts) in split.per_edge.iter().enumerate() {
        let mut pe = [0i64; 2];
        for slot in 0..2 {
            let p = -parts[slot] - 1;
            if p < 0 {
                let vid = &g.vertices()[g.endpoint(e, slot)].id;
                return Err(Error::HypothesisViolated {
                    vertex: vid.clone(),
                    detail: format!(
                        "p_{{v,e}} = -s_{{v,e}} - 1 = {p} is negative at edge {e}"
                    ),
                });
            }
            pe[slot] = p;
        }
        per_incidence.push(pe);
    }
    // partition identity: sum of p_{v,e} over incidences at v equals p_v
    for (v, vert) in g.vertices().iter().enumerate() {
        let sum: i64 = g
            .incidences(v)
            .iter()
            .map(|&(e, slot)| per_incidence[e][slot])
            .sum();
        if sum != per_vertex[v] {
            return Err(Error::Internal(format!(
                "binding partition {} != p_v {} at vertex `{}`",
                sum, per_vertex[v], vert.id
            )));
        }
    }
    Ok(BindingData {
        per_vertex,
        per_incidence,
    })
}

/// One interpolation block per incidence, matching the vertex-side page
/// map theta to the edge-side map q1 + q2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceBlock {
    pub edge: usize,
    pub vertex: String,
    /// pullback of the edge map through the collar coordinate change
    pub pullback: TorusMap,
    pub block: OBDBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HorizontalOBD {
    /// per-vertex page map theta, i.e. (0, 1) in (alpha, theta)
    pub page_maps: Vec<TorusMap>,
    /// per-edge map q1 + q2 as the (1, 1) class in (q1, q2)
    pub edge_maps: Vec<TorusMap>,
    pub blocks: Vec<IncidenceBlock>,
    pub binding: BindingData,
    pub total_bindings: i64,
}

/// Assembles the horizontal open book. The pullback of the (1,1)-class
/// q1+q2 through the coordinate action of the collar matrix is computed
/// by actual matrix multiplication and must equal (-s_{v,e}-1) alpha +
/// theta; a mismatch falsifies the construction.
pub fn assemble_obd(g: &PlumbingGraph, split: &EdgeSplit) -> Result<HorizontalOBD> {
    let binding = binding_counts(g, split)?;

    let page_maps = vec![
        TorusMap {
            c_alpha: 0,
            c_theta: 1,
        };
        g.n()
    ];
    let edge_maps = vec![
        TorusMap {
            c_alpha: 1,
            c_theta: 1,
        };
        g.edges().len()
    ];

    let mut blocks = Vec::with_capacity(2 * g.edges().len());
    for e in 0..g.edges().len() {
        let (a_v, a_vp) = transition_matrices(g, split, e);
        let (s_v, s_vp) = oriented_split(g, split, e);
        let (lo, hi) = {
            let (a, b) = g.edges()[e];
            (a.min(b), a.max(b))
        };
        for (matrix, s_ve, vtx) in [(a_v, s_v, lo), (a_vp, s_vp, hi)] {
            // toric coordinate action: momenta transform by A, angles by
            // A^{-T}, so a class c on the angles pulls back to A c
            let (c_alpha, c_theta) = matrix.apply_int((1, 1));
            let expected = (-s_ve - 1, 1);
            if (c_alpha, c_theta) != expected {
                return Err(Error::Internal(format!(
                    "pullback of q1+q2 at edge {e}, vertex `{}` is ({c_alpha}, {c_theta}), expected {expected:?}",
                    g.vertices()[vtx].id
                )));
            }
            let slot = if g.endpoint(e, 0) == vtx { 0 } else { 1 };
            let m = binding.per_incidence[e][slot];
            let block = building_block(m as u64);
            // matching invariant: edge-side map transformed equals the
            // block's outer map, vertex-side theta equals the inner map
            let pullback = TorusMap { c_alpha, c_theta };
            if pullback != block.outer || page_maps[vtx] != block.inner {
                return Err(Error::Internal(format!(
                    "boundary fibration mismatch at edge {e}, vertex `{}`",
                    g.vertices()[vtx].id
                )));
            }
            blocks.push(IncidenceBlock {
                edge: e,
                vertex: g.vertices()[vtx].id.clone(),
                pullback,
                block,
            });
        }
    }

    let total_bindings = binding.per_vertex.iter().sum();
    Ok(HorizontalOBD {
        page_maps,
        edge_maps,
        blocks,
        binding,
        total_bindings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObdSummary {
    pub total_bindings: i64,
    pub per_vertex: Vec<(String, i64)>,
    /// the assembly admits no area input, so the independence of the
    /// open book from the areas is enforced structurally
    pub area_independent: bool,
}

pub fn obd_summary(g: &PlumbingGraph, obd: &HorizontalOBD) -> ObdSummary {
    ObdSummary {
        total_bindings: obd.total_bindings,
        per_vertex: g
            .vertices()
            .iter()
            .zip(&obd.binding.per_vertex)
            .map(|(v, &p)| (v.id.clone(), p))
            .collect(),
        area_independent: true,
    }
}
