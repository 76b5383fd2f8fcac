//! Fundamental-group presentations from a diagram.
//!
//! The immersed surface is a 2-complex: one vertex per triplet, one edge per
//! pair of sister arcs, one 2-cell per diagram face. Removing the open face
//! around a marked point deletes its relator.

use std::collections::{HashMap, VecDeque};

use fpgroups::{Letter, Presentation, Word};
use thiserror::Error;

use crate::diagram::{ArcRef, Diagram, DiagramError, Issue, Passage, Triplet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Pi1Error {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("diagram rejected: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Rejected(Vec<Issue>),
    #[error("1-skeleton is disconnected ({reached} of {total} vertices reachable)")]
    SkeletonDisconnected { reached: usize, total: usize },
    #[error("dual presentation needs a single sphere, found {0} components")]
    MultiComponentDomain(usize),
    #[error("face {0} is not a marked face")]
    NotMarked(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    /// The arc on the representative curve.
    pub arc: ArcRef,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub component: usize,
    /// `(edge, inverse)` letters around the face.
    pub boundary: Vec<(usize, bool)>,
    /// Index into the diagram's marked points.
    pub marked: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellComplex {
    pub name: String,
    pub vertices: Vec<Triplet>,
    pub edges: Vec<Edge>,
    pub faces: Vec<Cell>,
    pub marked_ids: Vec<String>,
}

impl CellComplex {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    pub fn marked_faces(&self) -> Vec<usize> {
        self.faces.iter().enumerate().filter(|(_, f)| f.marked.is_some()).map(|(i, _)| i).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TreeStrategy {
    #[default]
    Bfs,
    Dfs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellPresentation {
    pub presentation: Presentation,
    /// Boundary words of the punctured faces: `(marked point id, word)`.
    pub meridians: Vec<(String, Word)>,
    pub tree_edges: Vec<usize>,
}

pub fn build_complex(d: &Diagram) -> Result<CellComplex, Pi1Error> {
    let report = d.validate();
    if !report.accepted() {
        return Err(Pi1Error::Rejected(report.issues));
    }
    let st = d.structure().map_err(DiagramError::Structure)?;
    let triplets = d.triplets_with(&st)?;
    let faces = d.trace_faces_with(&st)?;
    let mut vertex_of = vec![0usize; d.crossings.len()];
    for (v, t) in triplets.iter().enumerate() {
        for &x in &t.crossings {
            vertex_of[x] = v;
        }
    }
    let mut edge_of: HashMap<ArcRef, usize> = HashMap::new();
    let mut edges = Vec::new();
    for pair in d.arc_pairs_with(&st) {
        let a = pair.rep;
        let len = d.curves[a.curve].len;
        let from = vertex_of[st.crossing_at(Passage::new(a.curve, a.index))];
        let to = vertex_of[st.crossing_at(Passage::new(a.curve, (a.index + 1) % len))];
        edge_of.insert(pair.rep, edges.len());
        edge_of.insert(pair.other, edges.len());
        edges.push(Edge { arc: a, from, to });
    }
    let marked = d.marked_faces(&faces);
    let cells = faces
        .iter()
        .enumerate()
        .map(|(fi, f)| Cell {
            component: f.component,
            boundary: f.darts.iter().map(|dt| (edge_of[&ArcRef { curve: dt.curve, index: dt.arc }], !dt.forward)).collect(),
            marked: marked.iter().position(|&m| m == fi),
        })
        .collect();
    Ok(CellComplex {
        name: d.name.clone(),
        vertices: triplets,
        edges,
        faces: cells,
        marked_ids: d.marked.iter().map(|m| m.id.clone()).collect(),
    })
}

fn spanning_tree(cx: &CellComplex, strategy: TreeStrategy) -> Result<Vec<bool>, Pi1Error> {
    let nv = cx.vertices.len();
    let mut in_tree = vec![false; cx.edges.len()];
    if nv == 0 {
        return Ok(in_tree);
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for (i, e) in cx.edges.iter().enumerate() {
        adj[e.from].push((i, e.to));
        if e.from != e.to {
            adj[e.to].push((i, e.from));
        }
    }
    let mut seen = vec![false; nv];
    seen[0] = true;
    let mut reached = 1;
    match strategy {
        TreeStrategy::Bfs => {
            let mut q = VecDeque::from([0usize]);
            while let Some(v) = q.pop_front() {
                for &(e, w) in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        reached += 1;
                        in_tree[e] = true;
                        q.push_back(w);
                    }
                }
            }
        }
        TreeStrategy::Dfs => {
            let mut stack = vec![(0usize, 0usize)];
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if let Some(&(e, w)) = adj[v].get(*next) {
                    *next += 1;
                    if !seen[w] {
                        seen[w] = true;
                        reached += 1;
                        in_tree[e] = true;
                        stack.push((w, 0));
                    }
                } else {
                    stack.pop();
                }
            }
        }
    }
    if reached != nv {
        return Err(Pi1Error::SkeletonDisconnected { reached, total: nv });
    }
    Ok(in_tree)
}

/// Generators are the edges off a spanning tree, named `e<k>` after the
/// 1-based edge index; relators are the boundaries of unpunctured faces.
pub fn cell_presentation(cx: &CellComplex, punctured: &[usize], strategy: TreeStrategy) -> Result<CellPresentation, Pi1Error> {
    for &f in punctured {
        if cx.faces.get(f).is_none_or(|c| c.marked.is_none()) {
            return Err(Pi1Error::NotMarked(f));
        }
    }
    let in_tree = spanning_tree(cx, strategy)?;
    let mut gen_of = vec![usize::MAX; cx.edges.len()];
    let mut names = Vec::new();
    for (i, &t) in in_tree.iter().enumerate() {
        if !t {
            gen_of[i] = names.len();
            names.push(format!("e{}", i + 1));
        }
    }
    let word = |c: &Cell| {
        Word::from_letters(c.boundary.iter().filter(|(e, _)| !in_tree[*e]).map(|&(e, inv)| Letter::new(gen_of[e], inv)))
    };
    let mut relators = Vec::new();
    let mut meridians = Vec::new();
    for (fi, c) in cx.faces.iter().enumerate() {
        if punctured.contains(&fi) {
            let m = c.marked.expect("checked above");
            meridians.push((cx.marked_ids[m].clone(), word(c)));
        } else {
            relators.push(word(c));
        }
    }
    let suffix = if punctured.is_empty() { "cell" } else { "cell-punctured" };
    Ok(CellPresentation {
        presentation: Presentation::new(format!("{}-{suffix}", cx.name), names, relators),
        meridians,
        tree_edges: in_tree.iter().enumerate().filter(|(_, &t)| t).map(|(i, _)| i).collect(),
    })
}

/// One generator `<curve>#` per representative curve and one relator per
/// triplet, read off the partner chain: each jump across a curve contributes
/// its dual generator, inverted when the curve is not the representative.
pub fn dual_presentation(d: &Diagram) -> Result<Presentation, Pi1Error> {
    if d.components.len() != 1 {
        return Err(Pi1Error::MultiComponentDomain(d.components.len()));
    }
    let report = d.validate();
    if !report.accepted() {
        return Err(Pi1Error::Rejected(report.issues));
    }
    let st = d.structure().map_err(DiagramError::Structure)?;
    let triplets = d.triplets_with(&st)?;
    let mut gen_of = vec![usize::MAX; d.curves.len()];
    let mut names = Vec::new();
    for (g, c) in d.curves.iter().enumerate() {
        if st.is_rep(g) {
            gen_of[g] = names.len();
            names.push(format!("{}#", c.id));
        }
    }
    let relators = triplets
        .iter()
        .map(|t| {
            let mut w = Word::new();
            let mut via = d.crossings[t.crossings[0]].a;
            for _ in 0..3 {
                let g = via.curve;
                w.push(if st.is_rep(g) { Letter::pos(gen_of[g]) } else { Letter::neg(gen_of[st.sister(g)]) });
                let arrived = Passage::new(st.sister(g), via.position);
                via = d.crossings[st.crossing_at(arrived)].other(arrived);
            }
            w
        })
        .collect();
    Ok(Presentation::new(format!("{}-dual", d.name), names, relators))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::banchoff_fan;
    use fpgroups::{abelianization, AbelianInvariants};

    #[test]
    fn base_complex_counts() {
        let cx = build_complex(&banchoff_fan().base_diagram().unwrap()).unwrap();
        assert_eq!((cx.vertices.len(), cx.edges.len(), cx.faces.len()), (2, 6, 8));
        assert_eq!(cx.euler_characteristic(), 4);
        assert_eq!(cx.marked_faces().len(), 2);
    }

    #[test]
    fn knot_group_shape() {
        let cx = build_complex(&banchoff_fan().base_diagram().unwrap()).unwrap();
        let p = cell_presentation(&cx, &cx.marked_faces(), TreeStrategy::Bfs).unwrap();
        assert_eq!(p.presentation.num_generators(), 5);
        assert_eq!(p.presentation.num_relators(), 6);
        assert_eq!(abelianization(&p.presentation), AbelianInvariants::from_u64(&[0]));
        assert_eq!(p.meridians.len(), 2);
    }

    #[test]
    fn unmarked_face_cannot_be_punctured() {
        let cx = build_complex(&banchoff_fan().base_diagram().unwrap()).unwrap();
        let plain = (0..cx.faces.len()).find(|&f| cx.faces[f].marked.is_none()).unwrap();
        assert_eq!(cell_presentation(&cx, &[plain], TreeStrategy::Bfs).unwrap_err(), Pi1Error::NotMarked(plain));
    }
}
