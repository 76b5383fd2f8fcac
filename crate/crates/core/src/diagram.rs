//! Johansson diagrams as combinatorial maps on a disjoint union of spheres.
//!
//! Text format, one declaration per line, `#` starts a comment:
//!
//! ```text
//! diagram banchoff
//! format 1
//! component S
//! curve alpha S 6
//! curve beta S 6
//! crossing P1 beta:3 beta:2 +
//! sister alpha beta
//! marked A S beta:2 -
//! ```
//!
//! Passage positions in the file are 1-based, counted from the curve's arrow.
//! `marked <id> <component> <curve>:<g> <+|->` places a point next to the arc
//! that follows the g-th crossing, on its forward (`+`) or backward (`-`) side.
//! In `sister A B`, `B` is the representative carrying the dual generator.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use fpgroups::ParseError;
use thiserror::Error;

use crate::text::{lines, valid_id, Cursor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Passage {
    pub curve: usize,
    pub position: usize,
}

impl Passage {
    pub fn new(curve: usize, position: usize) -> Self {
        Passage { curve, position }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Handedness {
    Plus,
    Minus,
}

impl Handedness {
    pub fn flip(self) -> Self {
        match self {
            Handedness::Plus => Handedness::Minus,
            Handedness::Minus => Handedness::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Handedness::Plus => '+',
            Handedness::Minus => '-',
        }
    }

    fn from_bool(plus: bool) -> Self {
        if plus {
            Handedness::Plus
        } else {
            Handedness::Minus
        }
    }
}

/// Rotation at a crossing: `+` gives `(a_in, b_in, a_out, b_out)`,
/// `-` gives `(a_in, b_out, a_out, b_in)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub id: String,
    pub a: Passage,
    pub b: Passage,
    pub sign: Handedness,
}

impl Crossing {
    pub fn other(&self, p: Passage) -> Passage {
        if p == self.a {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub id: String,
    pub component: usize,
    pub len: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Forward,
    Backward,
}

impl Side {
    pub fn symbol(self) -> char {
        match self {
            Side::Forward => '+',
            Side::Backward => '-',
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Side::Forward => Side::Backward,
            Side::Backward => Side::Forward,
        }
    }
}

/// Arc `k` of a curve runs from position `k` to position `k + 1` (cyclically).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcRef {
    pub curve: usize,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedPoint {
    pub id: String,
    pub component: usize,
    pub arc: ArcRef,
    pub side: Side,
}

impl MarkedPoint {
    pub fn dart(&self) -> Dart {
        Dart { curve: self.arc.curve, arc: self.arc.index, forward: self.side == Side::Forward }
    }
}

/// `curve` is paired with `rep`; `rep` carries the dual generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SisterPair {
    pub curve: usize,
    pub rep: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Diagram {
    pub name: String,
    pub components: Vec<String>,
    pub curves: Vec<Curve>,
    pub crossings: Vec<Crossing>,
    pub sisters: Vec<SisterPair>,
    pub marked: Vec<MarkedPoint>,
}

/// A half-edge: arc `arc` of `curve` seen from its tail (`forward`) or head.
/// The face of the forward dart lies on the forward side of the arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart {
    pub curve: usize,
    pub arc: usize,
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub component: usize,
    pub darts: Vec<Dart>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triplet {
    pub crossings: [usize; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ArcPair {
    pub rep: ArcRef,
    pub other: ArcRef,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IssueKind {
    Structural,
    Sistering,
    Connectivity,
    Embedding,
    TripletClosure,
    MarkedPointRule,
}

impl fmt::Display for IssueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IssueKind::Structural => "Structural",
            IssueKind::Sistering => "Sistering",
            IssueKind::Connectivity => "Connectivity",
            IssueKind::Embedding => "EmbeddingInconsistent",
            IssueKind::TripletClosure => "TripletClosureFailed",
            IssueKind::MarkedPointRule => "MarkedPointRule",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Issue {
    pub kind: IssueKind,
    pub message: String,
}

impl Issue {
    fn new(kind: IssueKind, message: impl Into<String>) -> Self {
        Issue { kind, message: message.into() }
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("structural check failed: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Structure(Vec<Issue>),
    #[error("diagram rejected: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Rejected(Vec<Issue>),
    #[error("embedding inconsistent on component {component}: V - E + F = {chi}")]
    EmbeddingInconsistent { component: String, chi: i64 },
    #[error("triplet closure failed at crossing {crossing}: {reason}")]
    TripletClosureFailed { crossing: String, reason: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub components: usize,
    pub curves: usize,
    pub crossings: usize,
    pub arcs: usize,
    pub faces: usize,
    pub triplets: usize,
    pub marked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
    pub counts: Counts,
    /// `V - E + F` per component, when faces could be traced.
    pub euler: Vec<i64>,
}

impl ValidationReport {
    pub fn accepted(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn has(&self, kind: IssueKind) -> bool {
        self.issues.iter().any(|i| i.kind == kind)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Strand {
    A,
    B,
}

/// Lookup tables available once the structural checks pass.
#[derive(Clone, Debug)]
pub struct Structure {
    at: Vec<Vec<(usize, Strand)>>,
    sister: Vec<usize>,
    is_rep: Vec<bool>,
    arc_base: Vec<usize>,
}

impl Structure {
    pub fn crossing_at(&self, p: Passage) -> usize {
        self.at[p.curve][p.position].0
    }

    pub fn sister(&self, curve: usize) -> usize {
        self.sister[curve]
    }

    pub fn is_rep(&self, curve: usize) -> bool {
        self.is_rep[curve]
    }

    pub fn num_arcs(&self) -> usize {
        *self.arc_base.last().unwrap_or(&0)
    }

    fn dart_index(&self, d: Dart) -> usize {
        2 * (self.arc_base[d.curve] + d.arc) + usize::from(!d.forward)
    }
}

impl Diagram {
    pub fn curve_index(&self, id: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.id == id)
    }

    pub fn component_index(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c == id)
    }

    pub fn num_arcs(&self) -> usize {
        self.curves.iter().map(|c| c.len).sum()
    }

    fn passage_ok(&self, p: Passage) -> bool {
        p.curve < self.curves.len() && p.position < self.curves[p.curve].len
    }

    /// Structural checks: ranges, 4-valence, sistering, component containment
    /// and per-component connectivity.
    pub fn structure(&self) -> Result<Structure, Vec<Issue>> {
        let mut issues = Vec::new();
        let nc = self.components.len();
        for c in &self.curves {
            if c.len == 0 {
                issues.push(Issue::new(IssueKind::Structural, format!("curve {} has no passages", c.id)));
            }
            if c.component >= nc {
                issues.push(Issue::new(IssueKind::Structural, format!("curve {} on unknown component", c.id)));
            }
        }
        let mut at: Vec<Vec<Option<(usize, Strand)>>> = self.curves.iter().map(|c| vec![None; c.len]).collect();
        for (x, cr) in self.crossings.iter().enumerate() {
            if cr.a == cr.b {
                issues.push(Issue::new(IssueKind::Structural, format!("crossing {} uses one passage twice", cr.id)));
            }
            for (p, s) in [(cr.a, Strand::A), (cr.b, Strand::B)] {
                if !self.passage_ok(p) {
                    issues.push(Issue::new(IssueKind::Structural, format!("crossing {} has passage out of range", cr.id)));
                    continue;
                }
                let slot = &mut at[p.curve][p.position];
                if let Some((y, _)) = slot {
                    if *y != x || cr.a != cr.b {
                        issues.push(Issue::new(
                            IssueKind::Structural,
                            format!(
                                "passage {}:{} used by crossings {} and {}",
                                self.curves[p.curve].id,
                                p.position + 1,
                                self.crossings[*y].id,
                                cr.id
                            ),
                        ));
                    }
                } else {
                    *slot = Some((x, s));
                }
            }
            if self.passage_ok(cr.a) && self.passage_ok(cr.b) {
                let (ca, cb) = (self.curves[cr.a.curve].component, self.curves[cr.b.curve].component);
                if ca != cb {
                    issues.push(Issue::new(
                        IssueKind::Structural,
                        format!("crossing {} joins curves on different components", cr.id),
                    ));
                }
            }
        }
        for (g, row) in at.iter().enumerate() {
            for (k, slot) in row.iter().enumerate() {
                if slot.is_none() {
                    issues.push(Issue::new(
                        IssueKind::Structural,
                        format!("passage {}:{} is not on any crossing", self.curves[g].id, k + 1),
                    ));
                }
            }
        }

        let n = self.curves.len();
        let mut sister = vec![usize::MAX; n];
        let mut is_rep = vec![false; n];
        for sp in &self.sisters {
            if sp.curve >= n || sp.rep >= n {
                issues.push(Issue::new(IssueKind::Sistering, "sister pair names an unknown curve"));
                continue;
            }
            if sp.curve == sp.rep {
                issues.push(Issue::new(IssueKind::Sistering, format!("curve {} is its own sister", self.curves[sp.curve].id)));
                continue;
            }
            for g in [sp.curve, sp.rep] {
                if sister[g] != usize::MAX {
                    issues.push(Issue::new(IssueKind::Sistering, format!("curve {} paired twice", self.curves[g].id)));
                }
            }
            sister[sp.curve] = sp.rep;
            sister[sp.rep] = sp.curve;
            is_rep[sp.rep] = true;
            if self.curves[sp.curve].len != self.curves[sp.rep].len {
                issues.push(Issue::new(
                    IssueKind::Sistering,
                    format!("sister curves {} and {} differ in length", self.curves[sp.curve].id, self.curves[sp.rep].id),
                ));
            }
        }
        for (g, &s) in sister.iter().enumerate() {
            if s == usize::MAX {
                issues.push(Issue::new(IssueKind::Sistering, format!("curve {} has no sister", self.curves[g].id)));
            }
        }
        for m in &self.marked {
            if m.arc.curve >= n || m.arc.index >= self.curves[m.arc.curve].len {
                issues.push(Issue::new(IssueKind::Structural, format!("marked point {} on a missing arc", m.id)));
            } else if self.curves[m.arc.curve].component != m.component {
                issues.push(Issue::new(
                    IssueKind::Structural,
                    format!("marked point {} lies on a curve of another component", m.id),
                ));
            }
        }
        if !issues.is_empty() {
            return Err(issues);
        }

        let at: Vec<Vec<(usize, Strand)>> = at.into_iter().map(|r| r.into_iter().map(Option::unwrap).collect()).collect();
        let mut arc_base = Vec::with_capacity(n + 1);
        let mut acc = 0;
        arc_base.push(0);
        for c in &self.curves {
            acc += c.len;
            arc_base.push(acc);
        }
        let st = Structure { at, sister, is_rep, arc_base };

        // every component carries curves, and its crossings form one connected graph
        let mut parent: Vec<usize> = (0..self.crossings.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (g, c) in self.curves.iter().enumerate() {
            for k in 0..c.len {
                let u = find(&mut parent, st.crossing_at(Passage::new(g, k)));
                let v = find(&mut parent, st.crossing_at(Passage::new(g, (k + 1) % c.len)));
                parent[u] = v;
            }
        }
        let mut roots: Vec<Vec<usize>> = vec![Vec::new(); nc];
        for (x, cr) in self.crossings.iter().enumerate() {
            let r = find(&mut parent, x);
            let comp = self.curves[cr.a.curve].component;
            if !roots[comp].contains(&r) {
                roots[comp].push(r);
            }
        }
        for (ci, r) in roots.iter().enumerate() {
            match r.len() {
                0 => issues.push(Issue::new(IssueKind::Connectivity, format!("component {} carries no curves", self.components[ci]))),
                1 => {}
                k => issues.push(Issue::new(
                    IssueKind::Connectivity,
                    format!("curves on component {} form {k} disconnected pieces", self.components[ci]),
                )),
            }
        }
        if issues.is_empty() {
            Ok(st)
        } else {
            Err(issues)
        }
    }

    fn rotation(&self, x: usize) -> [Dart; 4] {
        let cr = &self.crossings[x];
        let inc = |p: Passage| {
            let len = self.curves[p.curve].len;
            Dart { curve: p.curve, arc: (p.position + len - 1) % len, forward: false }
        };
        let out = |p: Passage| Dart { curve: p.curve, arc: p.position, forward: true };
        match cr.sign {
            Handedness::Plus => [inc(cr.a), inc(cr.b), out(cr.a), out(cr.b)],
            Handedness::Minus => [inc(cr.a), out(cr.b), out(cr.a), inc(cr.b)],
        }
    }

    fn darts(&self) -> Vec<Dart> {
        let mut v = Vec::with_capacity(2 * self.num_arcs());
        for (g, c) in self.curves.iter().enumerate() {
            for k in 0..c.len {
                v.push(Dart { curve: g, arc: k, forward: true });
                v.push(Dart { curve: g, arc: k, forward: false });
            }
        }
        v
    }

    /// Faces in canonical order: each starts at its least dart, sorted by
    /// component then first dart.
    fn faces_raw(&self, st: &Structure) -> Vec<Face> {
        let darts = self.darts();
        let mut sigma = vec![usize::MAX; darts.len()];
        for x in 0..self.crossings.len() {
            let r = self.rotation(x);
            for i in 0..4 {
                sigma[st.dart_index(r[i])] = st.dart_index(r[(i + 1) % 4]);
            }
        }
        let mut seen = vec![false; darts.len()];
        let mut faces = Vec::new();
        for start in 0..darts.len() {
            if seen[start] {
                continue;
            }
            let mut f = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                f.push(darts[d]);
                d = sigma[d ^ 1];
            }
            let component = self.curves[darts[start].curve].component;
            faces.push(Face { component, darts: f });
        }
        faces.sort_by_key(|f| f.component);
        faces
    }

    /// `V - E + F` per component.
    pub fn euler_characteristics(&self, faces: &[Face]) -> Vec<i64> {
        let mut chi: Vec<i64> = vec![0; self.components.len()];
        for cr in &self.crossings {
            chi[self.curves[cr.a.curve].component] += 1;
        }
        for c in &self.curves {
            chi[c.component] -= c.len as i64;
        }
        for f in faces {
            chi[f.component] += 1;
        }
        chi
    }

    pub fn trace_faces_with(&self, st: &Structure) -> Result<Vec<Face>, DiagramError> {
        let faces = self.faces_raw(st);
        let chi = self.euler_characteristics(&faces);
        if let Some((ci, &x)) = chi.iter().enumerate().find(|(_, &x)| x != 2) {
            return Err(DiagramError::EmbeddingInconsistent { component: self.components[ci].clone(), chi: x });
        }
        Ok(faces)
    }

    pub fn trace_faces(&self) -> Result<Vec<Face>, DiagramError> {
        let st = self.structure().map_err(DiagramError::Structure)?;
        self.trace_faces_with(&st)
    }

    /// Face index of every dart, parallel to `faces`.
    pub fn dart_faces(faces: &[Face]) -> HashMap<Dart, usize> {
        let mut m = HashMap::new();
        for (i, f) in faces.iter().enumerate() {
            for &d in &f.darts {
                m.insert(d, i);
            }
        }
        m
    }

    /// Follows the partner chain from crossing `x`, leaving along strand a.
    fn chain(&self, st: &Structure, x: usize) -> Result<[usize; 3], DiagramError> {
        let fail = |reason: String| DiagramError::TripletClosureFailed { crossing: self.crossings[x].id.clone(), reason };
        let mut orbit = [x, 0, 0];
        let mut via = self.crossings[x].a;
        let mut cur = x;
        for step in 0..3 {
            let arrived = Passage::new(st.sister(via.curve), via.position);
            if arrived.position >= self.curves[arrived.curve].len {
                return Err(fail("sister position out of range".into()));
            }
            cur = st.crossing_at(arrived);
            if step < 2 {
                if cur == x {
                    return Err(fail(format!("chain closed after {} steps", step + 1)));
                }
                orbit[step + 1] = cur;
                via = self.crossings[cur].other(arrived);
            } else if arrived != self.crossings[x].b {
                return Err(fail("chain does not return along the second strand".into()));
            }
        }
        if cur != x {
            return Err(fail("chain does not close after 3 steps".into()));
        }
        if orbit[1] == orbit[2] {
            return Err(fail("chain revisits a crossing".into()));
        }
        Ok(orbit)
    }

    pub fn triplets_with(&self, st: &Structure) -> Result<Vec<Triplet>, DiagramError> {
        let mut owner = vec![usize::MAX; self.crossings.len()];
        let mut out = Vec::new();
        for x in 0..self.crossings.len() {
            let mut orbit = self.chain(st, x)?;
            orbit.sort_unstable();
            if owner[x] != usize::MAX {
                if out[owner[x]] != (Triplet { crossings: orbit }) {
                    return Err(DiagramError::TripletClosureFailed {
                        crossing: self.crossings[x].id.clone(),
                        reason: "orbits overlap".into(),
                    });
                }
                continue;
            }
            for &y in &orbit {
                if owner[y] != usize::MAX {
                    return Err(DiagramError::TripletClosureFailed {
                        crossing: self.crossings[y].id.clone(),
                        reason: "orbits overlap".into(),
                    });
                }
                owner[y] = out.len();
            }
            out.push(Triplet { crossings: orbit });
        }
        out.sort();
        Ok(out)
    }

    pub fn triplets(&self) -> Result<Vec<Triplet>, DiagramError> {
        let st = self.structure().map_err(DiagramError::Structure)?;
        self.triplets_with(&st)
    }

    /// Arc `k` of a representative curve paired with arc `k` of its sister.
    pub fn sister_arc_pairs(&self) -> Result<Vec<ArcPair>, DiagramError> {
        let st = self.structure().map_err(DiagramError::Structure)?;
        self.triplets_with(&st)?;
        Ok(self.arc_pairs_with(&st))
    }

    pub(crate) fn arc_pairs_with(&self, st: &Structure) -> Vec<ArcPair> {
        let mut v = Vec::new();
        for (g, c) in self.curves.iter().enumerate() {
            if !st.is_rep(g) {
                continue;
            }
            for k in 0..c.len {
                v.push(ArcPair { rep: ArcRef { curve: g, index: k }, other: ArcRef { curve: st.sister(g), index: k } });
            }
        }
        v
    }

    /// Faces holding each marked point (parallel to `self.marked`).
    pub fn marked_faces(&self, faces: &[Face]) -> Vec<usize> {
        let df = Diagram::dart_faces(faces);
        self.marked.iter().map(|m| df[&m.dart()]).collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut counts = Counts {
            components: self.components.len(),
            curves: self.curves.len(),
            crossings: self.crossings.len(),
            arcs: self.num_arcs(),
            marked: self.marked.len(),
            ..Counts::default()
        };
        let st = match self.structure() {
            Ok(st) => st,
            Err(issues) => return ValidationReport { issues, counts, euler: Vec::new() },
        };
        let mut issues = Vec::new();
        let faces = self.faces_raw(&st);
        let euler = self.euler_characteristics(&faces);
        counts.faces = faces.len();
        for (ci, &x) in euler.iter().enumerate() {
            if x != 2 {
                issues.push(Issue::new(IssueKind::Embedding, format!("component {}: V - E + F = {x}", self.components[ci])));
            }
        }
        let mf = self.marked_faces(&faces);
        let mut by_face: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
        for (m, f) in self.marked.iter().zip(&mf) {
            by_face.entry(*f).or_default().push(&m.id);
        }
        for ids in by_face.values().filter(|v| v.len() > 1) {
            issues.push(Issue::new(IssueKind::MarkedPointRule, format!("one face holds marked points {}", ids.join(", "))));
        }
        match self.triplets_with(&st) {
            Ok(t) => counts.triplets = t.len(),
            Err(e) => issues.push(Issue::new(IssueKind::TripletClosure, e.to_string())),
        }
        ValidationReport { issues, counts, euler }
    }

    /// All crossings reflected; marked points move to the opposite side of their arc.
    pub fn mirror(&self) -> Diagram {
        let mut d = self.clone();
        for c in &mut d.crossings {
            c.sign = c.sign.flip();
        }
        for m in &mut d.marked {
            m.side = m.side.flip();
        }
        d
    }

    /// A string equal for two diagrams iff they agree up to renaming of
    /// components, curves, crossings and the choice of arrows on sister pairs.
    /// Marked points count by the face they lie in, not the arc naming it.
    pub fn canonical_form(&self) -> Result<String, DiagramError> {
        let st = self.structure().map_err(DiagramError::Structure)?;
        let faces = self.trace_faces_with(&st)?;
        let face_of = Diagram::dart_faces(&faces);
        let mark_faces: Vec<&[Dart]> = self.marked.iter().map(|m| faces[face_of[&m.dart()]].darts.as_slice()).collect();
        let n = self.curves.len();
        // clusters: curves linked by crossings or sistering
        let mut cluster = vec![usize::MAX; n];
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for g0 in 0..n {
            if cluster[g0] != usize::MAX {
                continue;
            }
            let id = clusters.len();
            let mut members = vec![g0];
            cluster[g0] = id;
            let mut i = 0;
            while i < members.len() {
                let g = members[i];
                i += 1;
                let mut nbrs = vec![st.sister(g)];
                for k in 0..self.curves[g].len {
                    let x = st.crossing_at(Passage::new(g, k));
                    nbrs.push(self.crossings[x].other(Passage::new(g, k)).curve);
                }
                for h in nbrs {
                    if cluster[h] == usize::MAX {
                        cluster[h] = id;
                        members.push(h);
                    }
                }
            }
            clusters.push(members);
        }
        let mut parts: Vec<String> = clusters
            .iter()
            .map(|members| {
                let best = members
                    .iter()
                    .flat_map(|&g| (0..self.curves[g].len).map(move |p| (g, p)))
                    .map(|(g, p)| self.encode_from(&st, &mark_faces, g, p))
                    .min()
                    .expect("clusters are non-empty");
                best.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
            })
            .collect();
        parts.sort();
        Ok(parts.join("|"))
    }

    fn encode_from(&self, st: &Structure, mark_faces: &[&[Dart]], g0: usize, p0: usize) -> Vec<i64> {
        let n = self.curves.len();
        let mut label = vec![usize::MAX; n];
        let mut origin = vec![0usize; n];
        let mut order = Vec::new();
        let mut comp_label: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let assign = |g: usize, o: usize, label: &mut Vec<usize>, origin: &mut Vec<usize>, order: &mut Vec<usize>, q: &mut VecDeque<usize>| {
            if label[g] != usize::MAX {
                return;
            }
            for h in [g, st.sister(g)] {
                label[h] = order.len();
                origin[h] = o;
                order.push(h);
                q.push_back(h);
            }
        };
        assign(g0, p0, &mut label, &mut origin, &mut order, &mut queue);
        let mut out: Vec<i64> = Vec::new();
        while let Some(g) = queue.pop_front() {
            let len = self.curves[g].len;
            let comps = comp_label.len();
            let cl = *comp_label.entry(self.curves[g].component).or_insert(comps);
            out.extend([-1, len as i64, cl as i64, label[st.sister(g)] as i64, i64::from(st.is_rep(g))]);
            for i in 0..len {
                let pos = (origin[g] + i) % len;
                let here = Passage::new(g, pos);
                let (x, s) = st.at[g][pos];
                let cr = &self.crossings[x];
                let there = cr.other(here);
                assign(there.curve, there.position, &mut label, &mut origin, &mut order, &mut queue);
                let sign = if s == Strand::A { cr.sign } else { cr.sign.flip() };
                // a self-crossing at one passage cannot occur; strand identity is positional
                let rel = (there.position + self.curves[there.curve].len - origin[there.curve]) % self.curves[there.curve].len;
                out.extend([label[there.curve] as i64, rel as i64, i64::from(sign == Handedness::Plus)]);
            }
        }
        let mut marks: Vec<[i64; 4]> = self
            .marked
            .iter()
            .zip(mark_faces)
            .filter(|(m, _)| label[m.arc.curve] != usize::MAX)
            .map(|(m, darts)| {
                let tag = m.id.split('[').next().unwrap_or("").bytes().fold(0i64, |h, b| h * 257 + i64::from(b));
                let [c, a, f] = darts
                    .iter()
                    .map(|dt| {
                        let len = self.curves[dt.curve].len;
                        [label[dt.curve] as i64, ((dt.arc + len - origin[dt.curve]) % len) as i64, i64::from(dt.forward)]
                    })
                    .min()
                    .expect("faces have darts");
                [c, a, f, tag]
            })
            .collect();
        marks.sort();
        out.push(-2);
        for m in marks {
            out.extend(m);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Diagram, ParseError> {
        let mut d = Diagram::default();
        let mut seen_header = false;
        let mut seen_format = false;
        let mut crossing_ids: HashMap<String, usize> = HashMap::new();
        let mut marked_ids: HashMap<String, usize> = HashMap::new();
        let mut last_line = 1;
        for (ln, toks) in lines(text) {
            last_line = ln;
            let mut cur = Cursor::new(ln, &toks);
            let (kc, kw) = toks[0];
            if !seen_header && kw != "diagram" {
                return Err(cur.err(kc, "expected `diagram <name>` header"));
            }
            match kw {
                "diagram" => {
                    if seen_header {
                        return Err(cur.err(kc, "duplicate `diagram` header"));
                    }
                    seen_header = true;
                    d.name = cur.take("diagram name")?.1.to_string();
                }
                "format" => {
                    let (c, v) = cur.usize("format version")?;
                    if v != 1 {
                        return Err(cur.err(c, format!("unsupported format version {v}")));
                    }
                    seen_format = true;
                }
                "component" => {
                    let (c, id) = cur.take("component id")?;
                    if !valid_id(id) || d.component_index(id).is_some() {
                        return Err(cur.err(c, format!("invalid or duplicate component `{id}`")));
                    }
                    d.components.push(id.to_string());
                }
                "curve" => {
                    let (c, id) = cur.take("curve id")?;
                    if !valid_id(id) || d.curve_index(id).is_some() {
                        return Err(cur.err(c, format!("invalid or duplicate curve `{id}`")));
                    }
                    let (cc, comp) = cur.take("component id")?;
                    let component = d.component_index(comp).ok_or_else(|| cur.err(cc, format!("unknown component `{comp}`")))?;
                    let (_, len) = cur.usize("curve length")?;
                    d.curves.push(Curve { id: id.to_string(), component, len });
                }
                "crossing" => {
                    let (c, id) = cur.take("crossing id")?;
                    if !valid_id(id) || crossing_ids.insert(id.to_string(), d.crossings.len()).is_some() {
                        return Err(cur.err(c, format!("invalid or duplicate crossing `{id}`")));
                    }
                    let a = passage(&mut cur, &d)?;
                    let b = passage(&mut cur, &d)?;
                    let (_, plus) = cur.sign()?;
                    d.crossings.push(Crossing { id: id.to_string(), a, b, sign: Handedness::from_bool(plus) });
                }
                "sister" => {
                    let (ca, a) = cur.take("curve id")?;
                    let (cb, b) = cur.take("curve id")?;
                    let curve = d.curve_index(a).ok_or_else(|| cur.err(ca, format!("unknown curve `{a}`")))?;
                    let rep = d.curve_index(b).ok_or_else(|| cur.err(cb, format!("unknown curve `{b}`")))?;
                    d.sisters.push(SisterPair { curve, rep });
                }
                "marked" => {
                    let (c, id) = cur.take("marked point id")?;
                    if !valid_id(id) || marked_ids.insert(id.to_string(), d.marked.len()).is_some() {
                        return Err(cur.err(c, format!("invalid or duplicate marked point `{id}`")));
                    }
                    let (cc, comp) = cur.take("component id")?;
                    let component = d.component_index(comp).ok_or_else(|| cur.err(cc, format!("unknown component `{comp}`")))?;
                    let (lc, name, g) = cur.located("arc")?;
                    let curve = d.curve_index(name).ok_or_else(|| cur.err(lc, format!("unknown curve `{name}`")))?;
                    if g == 0 || g > d.curves[curve].len {
                        return Err(cur.err(lc, format!("arc {g} out of range 1..={}", d.curves[curve].len)));
                    }
                    let (_, plus) = cur.sign()?;
                    let side = if plus { Side::Forward } else { Side::Backward };
                    d.marked.push(MarkedPoint { id: id.to_string(), component, arc: ArcRef { curve, index: g - 1 }, side });
                }
                other => return Err(cur.err(kc, format!("unknown keyword `{other}`"))),
            }
            cur.finish()?;
        }
        if !seen_header {
            return Err(ParseError::new(last_line, 1, "empty diagram: missing `diagram <name>` header"));
        }
        if !seen_format {
            return Err(ParseError::new(1, 1, "missing `format 1` line"));
        }
        Ok(d)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn passage(cur: &mut Cursor<'_>, d: &Diagram) -> Result<Passage, ParseError> {
    let (c, name, pos) = cur.located("passage")?;
    let curve = d.curve_index(name).ok_or_else(|| cur.err(c, format!("unknown curve `{name}`")))?;
    let len = d.curves[curve].len;
    if pos == 0 || pos > len {
        return Err(cur.err(c, format!("position {pos} out of range 1..={len}")));
    }
    Ok(Passage::new(curve, pos - 1))
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "diagram {}", self.name)?;
        writeln!(f, "format 1")?;
        for c in &self.components {
            writeln!(f, "component {c}")?;
        }
        for c in &self.curves {
            writeln!(f, "curve {} {} {}", c.id, self.components[c.component], c.len)?;
        }
        let p = |p: Passage| format!("{}:{}", self.curves[p.curve].id, p.position + 1);
        for x in &self.crossings {
            writeln!(f, "crossing {} {} {} {}", x.id, p(x.a), p(x.b), x.sign.symbol())?;
        }
        for s in &self.sisters {
            writeln!(f, "sister {} {}", self.curves[s.curve].id, self.curves[s.rep].id)?;
        }
        for m in &self.marked {
            writeln!(
                f,
                "marked {} {} {}:{} {}",
                m.id,
                self.components[m.component],
                self.curves[m.arc.curve].id,
                m.arc.index + 1,
                m.side.symbol()
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIGURE_EIGHT: &str = "\
diagram eight
format 1
component S
component T
curve a S 2
curve b T 2
crossing X a:1 a:2 +
crossing Y b:1 b:2 -
sister a b
";

    #[test]
    fn one_self_crossing_has_three_faces() {
        let d = Diagram::parse(FIGURE_EIGHT).unwrap();
        let faces = d.trace_faces().unwrap();
        assert_eq!(faces.iter().filter(|f| f.component == 0).count(), 3);
        assert_eq!(faces.iter().filter(|f| f.component == 1).count(), 3);
    }

    #[test]
    fn same_component_pieces_must_connect() {
        let text = FIGURE_EIGHT.replace("component T\n", "").replace("b T 2", "b S 2");
        let r = Diagram::parse(&text).unwrap().validate();
        assert!(r.has(IssueKind::Connectivity));
    }

    #[test]
    fn round_trip_text() {
        let d = Diagram::parse(FIGURE_EIGHT).unwrap();
        assert_eq!(Diagram::parse(&d.to_text()).unwrap(), d);
    }

    #[test]
    fn parse_errors_have_positions() {
        let e = Diagram::parse("diagram d\nformat 1\ncomponent S\ncurve a T 2\n").unwrap_err();
        assert_eq!((e.line, e.column), (4, 9));
        let e = Diagram::parse("").unwrap_err();
        assert!(e.message.contains("header"));
        let e = Diagram::parse("diagram d\nformat 1\ncomponent S\ncurve a S 2\ncrossing X a:3 a:1 +\n").unwrap_err();
        assert_eq!((e.line, e.column), (5, 12));
    }

    #[test]
    fn unmatched_passage_is_structural() {
        let text = "diagram d\nformat 1\ncomponent S\ncurve a S 3\ncurve b S 3\ncrossing X a:1 a:2 +\ncrossing Y b:1 b:2 +\nsister a b\n";
        let d = Diagram::parse(text).unwrap();
        let r = d.validate();
        assert!(r.has(IssueKind::Structural));
    }

    #[test]
    fn unequal_sisters_rejected() {
        let text = "diagram d\nformat 1\ncomponent S\ncurve a S 2\ncurve b S 4\ncrossing X a:1 a:2 +\ncrossing Y b:1 b:3 +\ncrossing Z b:2 b:4 +\nsister a b\n";
        let r = Diagram::parse(text).unwrap().validate();
        assert!(r.has(IssueKind::Sistering));
    }
}
