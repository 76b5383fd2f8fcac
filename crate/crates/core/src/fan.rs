//! The fan: a diagram cut open along an arc joining its two knot points.
//!
//! The cut is drawn as a seam with `K` punctures, numbered from pole `A` to
//! pole `B`; every puncture appears once on the left seam and once on the
//! right seam. Curves are split into segments running between seam points.
//!
//! ```text
//! fan banchoff
//! format 1
//! seam 4
//! crossing P1 b2:1 b1:2 +
//! segment a1 alpha R4 -> R3 : Q2 P3 P2 Q3
//! chain alpha : a1 a2
//! arrow alpha a1:0
//! sister alpha beta
//! dual c alpha a1:3 0 b2:1 -1
//! meridian m
//! relation m c m c^-1 m c^-1
//! ```
//!
//! Crossing strands are `segment:index` with 1-based passage indices; arrow
//! and dual endpoints are gaps `segment:g`, the point after the g-th passage.
//! A segment leaving through the right seam at height `h` re-enters through
//! the left seam at `h` (one sheet up); leaving through the left seam goes
//! one sheet down.

use std::collections::HashMap;
use std::fmt;

use fpgroups::presentation::parse_word;
use fpgroups::{ParseError, Word};
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, Handedness};
use crate::text::{lines, valid_id, Cursor};

pub const BANCHOFF_FAN: &str = include_str!("../../../data/banchoff.fan");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeamSide {
    L,
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SeamPoint {
    pub side: SeamSide,
    pub height: usize,
}

impl SeamPoint {
    /// Sheet shift in units of the meridian when leaving through this point.
    pub fn voltage(self) -> i64 {
        match self.side {
            SeamSide::R => 1,
            SeamSide::L => -1,
        }
    }
}

impl fmt::Display for SeamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.side {
            SeamSide::L => 'L',
            SeamSide::R => 'R',
        };
        write!(f, "{s}{}", self.height)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub id: String,
    pub curve: usize,
    /// `None` for a closed curve that never meets the seam.
    pub entry: Option<SeamPoint>,
    pub exit: Option<SeamPoint>,
    pub passages: Vec<usize>,
}

/// A passage (`index` < len) or a gap (`index` ≤ len) inside a segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SegPos {
    pub segment: usize,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanCrossing {
    pub id: String,
    pub a: SegPos,
    pub b: SegPos,
    pub sign: Handedness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dual {
    pub name: String,
    pub alpha: usize,
    pub a_end: SegPos,
    pub w_a: i64,
    pub b_end: SegPos,
    pub w_b: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub name: String,
    pub seam: usize,
    pub curves: Vec<String>,
    pub crossings: Vec<FanCrossing>,
    pub segments: Vec<Segment>,
    pub chains: Vec<Vec<usize>>,
    pub arrows: Vec<SegPos>,
    /// `(curve, representative)` pairs.
    pub sisters: Vec<(usize, usize)>,
    pub duals: Vec<Dual>,
    pub meridian: String,
    /// Words over [`Fan::generators`].
    pub relations: Vec<Word>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("seam mismatch: {0}")]
    SeamMismatch(String),
    #[error("orientation error: {0}")]
    OrientationError(String),
    #[error("invalid fan: {0}")]
    Invalid(String),
    #[error("cut inconsistent: {0}")]
    CutInconsistent(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

impl Fan {
    /// Meridian first, then the dual generators in declaration order.
    pub fn generators(&self) -> Vec<String> {
        std::iter::once(self.meridian.clone()).chain(self.duals.iter().map(|d| d.name.clone())).collect()
    }

    pub fn curve_index(&self, id: &str) -> Option<usize> {
        self.curves.iter().position(|c| c == id)
    }

    pub fn segment_index(&self, id: &str) -> Option<usize> {
        self.segments.iter().position(|s| s.id == id)
    }

    pub fn sister(&self, curve: usize) -> usize {
        self.sisters
            .iter()
            .find_map(|&(a, b)| if a == curve { Some(b) } else if b == curve { Some(a) } else { None })
            .expect("validated fan pairs every curve")
    }

    pub fn curve_len(&self, curve: usize) -> usize {
        self.chains[curve].iter().map(|&s| self.segments[s].passages.len()).sum()
    }

    /// Segment following `seg` on its curve.
    pub fn next_segment(&self, seg: usize) -> usize {
        let chain = &self.chains[self.segments[seg].curve];
        let i = chain.iter().position(|&s| s == seg).expect("segment on its chain");
        chain[(i + 1) % chain.len()]
    }

    /// Passage count along the curve from its arrow to the gap `g`.
    pub fn gap_position(&self, g: SegPos) -> usize {
        let curve = self.segments[g.segment].curve;
        let arrow = self.arrows[curve];
        let len = self.curve_len(curve);
        let offset = |p: SegPos| -> usize {
            let mut acc = 0;
            for &s in &self.chains[curve] {
                if s == p.segment {
                    return acc + p.index;
                }
                acc += self.segments[s].passages.len();
            }
            unreachable!("segment on its chain")
        };
        if len == 0 {
            return 0;
        }
        (offset(g) + len - offset(arrow)) % len
    }

    /// Warnings that do not prevent use of the fan.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.relations.is_empty() {
            w.push("no relation words: relation checks are skipped".to_string());
        }
        w
    }

    pub fn parse(text: &str) -> Result<Fan, FanError> {
        let raw = RawFan::read(text)?;
        let fan = raw.resolve()?;
        fan.check()?;
        Ok(fan)
    }

    /// Invariants beyond syntax: seam matching, chains, strands, sistering, duals.
    pub fn check(&self) -> Result<(), FanError> {
        if self.seam == 0 {
            return Err(FanError::SeamMismatch("seam must have at least one puncture".into()));
        }
        // seam heights
        let mut slots: HashMap<(usize, SeamSide), Vec<(usize, bool)>> = HashMap::new();
        for (i, s) in self.segments.iter().enumerate() {
            if s.entry.is_some() != s.exit.is_some() {
                return Err(FanError::Invalid(format!("segment {} is closed at one end only", s.id)));
            }
            for (p, is_exit) in [(s.entry, false), (s.exit, true)] {
                if let Some(p) = p {
                    if p.height == 0 || p.height > self.seam {
                        return Err(FanError::SeamMismatch(format!("segment {} uses height {} outside 1..={}", s.id, p.height, self.seam)));
                    }
                    slots.entry((p.height, p.side)).or_default().push((i, is_exit));
                }
            }
        }
        for h in 1..=self.seam {
            let l = slots.get(&(h, SeamSide::L)).map(Vec::as_slice).unwrap_or(&[]);
            let r = slots.get(&(h, SeamSide::R)).map(Vec::as_slice).unwrap_or(&[]);
            if l.len() != 1 || r.len() != 1 {
                return Err(FanError::SeamMismatch(format!(
                    "height {h} has {} left and {} right endpoints (expected one each)",
                    l.len(),
                    r.len()
                )));
            }
            if l[0].1 == r[0].1 {
                return Err(FanError::SeamMismatch(format!("height {h}: both endpoints are {}", if l[0].1 { "exits" } else { "entries" })));
            }
        }
        // chains
        let mut owner = vec![usize::MAX; self.segments.len()];
        for (c, chain) in self.chains.iter().enumerate() {
            if chain.is_empty() {
                return Err(FanError::Invalid(format!("curve {} has an empty chain", self.curves[c])));
            }
            for (k, &s) in chain.iter().enumerate() {
                if owner[s] != usize::MAX {
                    return Err(FanError::Invalid(format!("segment {} appears in two chains", self.segments[s].id)));
                }
                owner[s] = c;
                if self.segments[s].curve != c {
                    return Err(FanError::Invalid(format!("segment {} belongs to another curve", self.segments[s].id)));
                }
                let t = chain[(k + 1) % chain.len()];
                let (exit, entry) = (self.segments[s].exit, self.segments[t].entry);
                let ok = match (exit, entry) {
                    (None, None) => chain.len() == 1,
                    (Some(x), Some(e)) => x.height == e.height && x.side != e.side,
                    _ => false,
                };
                if !ok {
                    return Err(FanError::SeamMismatch(format!(
                        "segment {} does not continue into {} across the seam",
                        self.segments[s].id, self.segments[t].id
                    )));
                }
            }
        }
        if let Some(s) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(FanError::Invalid(format!("segment {} is in no chain", self.segments[s].id)));
        }
        // strands
        let mut used: Vec<Vec<bool>> = self.segments.iter().map(|s| vec![false; s.passages.len()]).collect();
        for (x, cr) in self.crossings.iter().enumerate() {
            for p in [cr.a, cr.b] {
                let seg = &self.segments[p.segment];
                if p.index >= seg.passages.len() || seg.passages[p.index] != x {
                    return Err(FanError::Invalid(format!(
                        "crossing {} strand {}:{} does not match the segment's passage list",
                        cr.id,
                        seg.id,
                        p.index + 1
                    )));
                }
                if std::mem::replace(&mut used[p.segment][p.index], true) {
                    return Err(FanError::Invalid(format!("crossing {} uses one passage twice", cr.id)));
                }
            }
        }
        for (s, u) in used.iter().enumerate() {
            if let Some(k) = u.iter().position(|&b| !b) {
                return Err(FanError::Invalid(format!("passage {}:{} is not a crossing strand", self.segments[s].id, k + 1)));
            }
        }
        // arrows
        for (c, a) in self.arrows.iter().enumerate() {
            if self.segments[a.segment].curve != c || a.index > self.segments[a.segment].passages.len() {
                return Err(FanError::Invalid(format!("arrow of {} is not a gap on its curve", self.curves[c])));
            }
        }
        // sisters
        let mut paired = vec![0usize; self.curves.len()];
        for &(a, b) in &self.sisters {
            if a == b {
                return Err(FanError::Invalid(format!("curve {} is its own sister", self.curves[a])));
            }
            paired[a] += 1;
            paired[b] += 1;
            if self.curve_len(a) != self.curve_len(b) {
                return Err(FanError::OrientationError(format!(
                    "sister curves {} and {} have {} and {} passages",
                    self.curves[a],
                    self.curves[b],
                    self.curve_len(a),
                    self.curve_len(b)
                )));
            }
        }
        if let Some(c) = paired.iter().position(|&k| k != 1) {
            return Err(FanError::Invalid(format!("curve {} must be in exactly one sister pair", self.curves[c])));
        }
        // duals
        for &(a, _) in &self.sisters {
            if !self.duals.iter().any(|d| d.alpha == a) {
                return Err(FanError::Invalid(format!("sister pair of {} has no dual descriptor", self.curves[a])));
            }
        }
        for d in &self.duals {
            if !self.sisters.iter().any(|&(a, _)| a == d.alpha) {
                return Err(FanError::Invalid(format!(
                    "dual {} must name the non-representative curve of a sister pair",
                    d.name
                )));
            }
            let beta = self.sister(d.alpha);
            for (end, curve) in [(d.a_end, d.alpha), (d.b_end, beta)] {
                let seg = &self.segments[end.segment];
                if seg.curve != curve || end.index > seg.passages.len() {
                    return Err(FanError::Invalid(format!("dual {}: endpoint {}:{} is not a gap on {}", d.name, seg.id, end.index, self.curves[curve])));
                }
            }
            if self.gap_position(d.a_end) != self.gap_position(d.b_end) {
                return Err(FanError::OrientationError(format!(
                    "dual {}: endpoints sit at different positions from the arrows",
                    d.name
                )));
            }
        }
        let ng = self.duals.len() + 1;
        if self.relations.iter().any(|w| w.max_gen().is_some_and(|g| g >= ng)) {
            return Err(FanError::Invalid("relation uses an unknown generator".into()));
        }
        Ok(())
    }

    /// The one-sheet gluing. Equal to lifting along the trivial representation.
    pub fn base_diagram(&self) -> Result<Diagram, FanError> {
        let lifted = crate::lift::glue_trivial(self)?;
        Ok(lifted)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

/// The bundled Banchoff fan.
pub fn banchoff_fan() -> Fan {
    Fan::parse(BANCHOFF_FAN).expect("bundled fan is valid")
}

struct RawLine<'a> {
    line: usize,
    toks: Vec<(usize, &'a str)>,
}

#[derive(Default)]
struct RawFan<'a> {
    name: String,
    seam: usize,
    crossings: Vec<RawLine<'a>>,
    segments: Vec<RawLine<'a>>,
    chains: Vec<RawLine<'a>>,
    arrows: Vec<RawLine<'a>>,
    sisters: Vec<RawLine<'a>>,
    duals: Vec<RawLine<'a>>,
    meridian: Option<String>,
    relations: Vec<RawLine<'a>>,
}

fn seam_point(cur: &Cursor<'_>, c: usize, t: &str) -> Result<Option<SeamPoint>, ParseError> {
    if t == "closed" {
        return Ok(None);
    }
    let side = match t.chars().next() {
        Some('L') => SeamSide::L,
        Some('R') => SeamSide::R,
        _ => return Err(cur.err(c, format!("expected L<h>, R<h> or `closed`, found `{t}`"))),
    };
    let height = t[1..].parse().map_err(|_| cur.err(c, format!("bad seam height in `{t}`")))?;
    Ok(Some(SeamPoint { side, height }))
}

impl<'a> RawFan<'a> {
    fn read(text: &'a str) -> Result<RawFan<'a>, ParseError> {
        let mut raw = RawFan::default();
        let mut header = false;
        let mut format = false;
        let mut seam = false;
        let mut last = 1;
        for (line, toks) in lines(text) {
            last = line;
            let mut cur = Cursor::new(line, &toks);
            let (kc, kw) = toks[0];
            if !header && kw != "fan" {
                return Err(cur.err(kc, "expected `fan <name>` header"));
            }
            let keep = |v: &mut Vec<RawLine<'a>>| v.push(RawLine { line, toks: toks.clone() });
            match kw {
                "fan" => {
                    if header {
                        return Err(cur.err(kc, "duplicate `fan` header"));
                    }
                    header = true;
                    raw.name = cur.take("fan name")?.1.to_string();
                    cur.finish()?;
                }
                "format" => {
                    let (c, v) = cur.usize("format version")?;
                    if v != 1 {
                        return Err(cur.err(c, format!("unsupported format version {v}")));
                    }
                    format = true;
                    cur.finish()?;
                }
                "seam" => {
                    if seam {
                        return Err(cur.err(kc, "duplicate `seam` line"));
                    }
                    raw.seam = cur.usize("puncture count")?.1;
                    seam = true;
                    cur.finish()?;
                }
                "meridian" => {
                    let (c, m) = cur.take("generator name")?;
                    if raw.meridian.is_some() {
                        return Err(cur.err(c, "duplicate `meridian` line"));
                    }
                    raw.meridian = Some(m.to_string());
                    cur.finish()?;
                }
                "crossing" => keep(&mut raw.crossings),
                "segment" => keep(&mut raw.segments),
                "chain" => keep(&mut raw.chains),
                "arrow" => keep(&mut raw.arrows),
                "sister" => keep(&mut raw.sisters),
                "dual" => keep(&mut raw.duals),
                "relation" => keep(&mut raw.relations),
                other => return Err(cur.err(kc, format!("unknown keyword `{other}`"))),
            }
        }
        if !header {
            return Err(ParseError::new(last, 1, "missing `fan <name>` header"));
        }
        if !format {
            return Err(ParseError::new(1, 1, "missing `format 1` line"));
        }
        if !seam {
            return Err(ParseError::new(1, 1, "missing `seam <K>` line"));
        }
        Ok(raw)
    }

    fn resolve(self) -> Result<Fan, FanError> {
        let mut curves: Vec<String> = Vec::new();
        let mut segments: Vec<Segment> = Vec::new();
        let mut seg_lines: Vec<Vec<(usize, &str)>> = Vec::new();
        let mut seg_line_no = Vec::new();
        for l in &self.segments {
            let mut cur = Cursor::new(l.line, &l.toks);
            let (c, id) = cur.take("segment id")?;
            if !valid_id(id) || segments.iter().any(|s| s.id == id) {
                return Err(cur.err(c, format!("invalid or duplicate segment `{id}`")).into());
            }
            let (cc, curve) = cur.take("curve id")?;
            if !valid_id(curve) {
                return Err(cur.err(cc, format!("invalid curve id `{curve}`")).into());
            }
            let ci = match curves.iter().position(|x| x == curve) {
                Some(i) => i,
                None => {
                    curves.push(curve.to_string());
                    curves.len() - 1
                }
            };
            let (ec, e) = cur.take("entry point")?;
            let entry = seam_point(&cur, ec, e)?;
            cur.expect("->")?;
            let (xc, x) = cur.take("exit point")?;
            let exit = seam_point(&cur, xc, x)?;
            cur.expect(":")?;
            seg_lines.push(cur.rest().to_vec());
            seg_line_no.push(l.line);
            segments.push(Segment { id: id.to_string(), curve: ci, entry, exit, passages: Vec::new() });
        }
        let seg_ids: HashMap<String, usize> = segments.iter().enumerate().map(|(i, s)| (s.id.clone(), i)).collect();
        let seg_index = |name: &str| seg_ids.get(name).copied();

        let mut crossings: Vec<FanCrossing> = Vec::new();
        for l in &self.crossings {
            let mut cur = Cursor::new(l.line, &l.toks);
            let (c, id) = cur.take("crossing id")?;
            if !valid_id(id) || crossings.iter().any(|x| x.id == id) {
                return Err(cur.err(c, format!("invalid or duplicate crossing `{id}`")).into());
            }
            let strand = |cur: &mut Cursor<'_>| -> Result<SegPos, ParseError> {
                let (c, s, i) = cur.located("strand")?;
                let segment = seg_index(s).ok_or_else(|| cur.err(c, format!("unknown segment `{s}`")))?;
                if i == 0 {
                    return Err(cur.err(c, "passage indices are 1-based"));
                }
                Ok(SegPos { segment, index: i - 1 })
            };
            let a = strand(&mut cur)?;
            let b = strand(&mut cur)?;
            let (_, plus) = cur.sign()?;
            cur.finish()?;
            crossings.push(FanCrossing { id: id.to_string(), a, b, sign: if plus { Handedness::Plus } else { Handedness::Minus } });
        }
        for (i, toks) in seg_lines.iter().enumerate() {
            let cur = Cursor::new(seg_line_no[i], toks);
            for &(c, x) in toks {
                let xi = crossings.iter().position(|cr| cr.id == x).ok_or_else(|| cur.err(c, format!("unknown crossing `{x}`")))?;
                segments[i].passages.push(xi);
            }
        }

        let curve_of = |cur: &Cursor<'_>, c: usize, name: &str| -> Result<usize, ParseError> {
            curves.iter().position(|x| x == name).ok_or_else(|| cur.err(c, format!("unknown curve `{name}`")))
        };
        let gap = |cur: &mut Cursor<'_>| -> Result<SegPos, ParseError> {
            let (c, s, g) = cur.located("gap")?;
            let segment = seg_index(s).ok_or_else(|| cur.err(c, format!("unknown segment `{s}`")))?;
            Ok(SegPos { segment, index: g })
        };

        let mut chains: Vec<Option<Vec<usize>>> = vec![None; curves.len()];
        for l in &self.chains {
            let mut cur = Cursor::new(l.line, &l.toks);
            let (c, name) = cur.take("curve id")?;
            let ci = curve_of(&cur, c, name)?;
            cur.expect(":")?;
            let mut chain = Vec::new();
            for &(c, s) in cur.rest() {
                chain.push(seg_index(s).ok_or_else(|| cur.err(c, format!("unknown segment `{s}`")))?);
            }
            if chains[ci].replace(chain).is_some() {
                return Err(cur.err(c, format!("duplicate chain for `{name}`")).into());
            }
        }
        let chains: Vec<Vec<usize>> = chains
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or_else(|| FanError::Invalid(format!("curve {} has no chain", curves[i]))))
            .collect::<Result<_, _>>()?;

        let mut arrows: Vec<Option<SegPos>> = vec![None; curves.len()];
        for l in &self.arrows {
            let mut cur = Cursor::new(l.line, &l.toks);
            let (c, name) = cur.take("curve id")?;
            let ci = curve_of(&cur, c, name)?;
            let g = gap(&mut cur)?;
            cur.finish()?;
            if arrows[ci].replace(g).is_some() {
                return Err(cur.err(c, format!("duplicate arrow for `{name}`")).into());
            }
        }
        let arrows: Vec<SegPos> = arrows
            .into_iter()
            .enumerate()
            .map(|(i, a)| a.ok_or_else(|| FanError::Invalid(format!("curve {} has no arrow", curves[i]))))
            .collect::<Result<_, _>>()?;

        let mut sisters = Vec::new();
        for l in &self.sisters {
            let mut cur = Cursor::new(l.line, &l.toks);
            let (ca, a) = cur.take("curve id")?;
            let (cb, b) = cur.take("curve id")?;
            cur.finish()?;
            sisters.push((curve_of(&cur, ca, a)?, curve_of(&cur, cb, b)?));
        }

        let mut duals: Vec<Dual> = Vec::new();
        for l in &self.duals {
            let mut cur = Cursor::new(l.line, &l.toks);
            let (c, name) = cur.take("dual name")?;
            if !valid_id(name) || name.contains('^') || duals.iter().any(|d| d.name == name) || self.meridian.as_deref() == Some(name) {
                return Err(cur.err(c, format!("invalid or duplicate generator `{name}`")).into());
            }
            let (cc, cname) = cur.take("curve id")?;
            let alpha = curve_of(&cur, cc, cname)?;
            let a_end = gap(&mut cur)?;
            let (_, w_a) = cur.i64("w_a")?;
            let b_end = gap(&mut cur)?;
            let (_, w_b) = cur.i64("w_b")?;
            cur.finish()?;
            duals.push(Dual { name: name.to_string(), alpha, a_end, w_a, b_end, w_b });
        }

        let meridian = self.meridian.ok_or_else(|| FanError::Invalid("missing `meridian <name>` line".into()))?;
        let gens: Vec<String> = std::iter::once(meridian.clone()).chain(duals.iter().map(|d| d.name.clone())).collect();
        let mut relations = Vec::new();
        for l in &self.relations {
            let mut cur = Cursor::new(l.line, &l.toks);
            let rest = cur.rest();
            if rest.is_empty() {
                return Err(cur.err(l.toks[0].0 + 8, "empty relation word").into());
            }
            let w = parse_word(rest, |g| gens.iter().position(|x| x == g)).map_err(|(c, m)| cur.err(c, m))?;
            relations.push(w);
        }

        Ok(Fan { name: self.name, seam: self.seam, curves, crossings, segments, chains, arrows, sisters, duals, meridian, relations })
    }
}

impl fmt::Display for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fan {}", self.name)?;
        writeln!(f, "format 1")?;
        writeln!(f, "seam {}", self.seam)?;
        let sp = |p: SegPos| format!("{}:{}", self.segments[p.segment].id, p.index);
        for x in &self.crossings {
            let strand = |p: SegPos| format!("{}:{}", self.segments[p.segment].id, p.index + 1);
            writeln!(f, "crossing {} {} {} {}", x.id, strand(x.a), strand(x.b), x.sign.symbol())?;
        }
        let end = |p: Option<SeamPoint>| p.map_or("closed".to_string(), |p| p.to_string());
        for s in &self.segments {
            write!(f, "segment {} {} {} -> {} :", s.id, self.curves[s.curve], end(s.entry), end(s.exit))?;
            for &x in &s.passages {
                write!(f, " {}", self.crossings[x].id)?;
            }
            writeln!(f)?;
        }
        for (c, chain) in self.chains.iter().enumerate() {
            let names: Vec<&str> = chain.iter().map(|&s| self.segments[s].id.as_str()).collect();
            writeln!(f, "chain {} : {}", self.curves[c], names.join(" "))?;
        }
        for (c, &a) in self.arrows.iter().enumerate() {
            writeln!(f, "arrow {} {}", self.curves[c], sp(a))?;
        }
        for &(a, b) in &self.sisters {
            writeln!(f, "sister {} {}", self.curves[a], self.curves[b])?;
        }
        for d in &self.duals {
            writeln!(f, "dual {} {} {} {} {} {}", d.name, self.curves[d.alpha], sp(d.a_end), d.w_a, sp(d.b_end), d.w_b)?;
        }
        writeln!(f, "meridian {}", self.meridian)?;
        let gens = self.generators();
        for r in &self.relations {
            writeln!(f, "relation {}", r.display_with(&gens))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_fan_round_trips() {
        let fan = banchoff_fan();
        assert_eq!(Fan::parse(&fan.to_text()).unwrap(), fan);
    }

    #[test]
    fn bundled_fan_shape() {
        let fan = banchoff_fan();
        assert_eq!(fan.curves, vec!["alpha", "beta"]);
        assert_eq!(fan.crossings.len(), 6);
        assert_eq!(fan.duals.len(), 1);
        assert_eq!(fan.generators(), vec!["m", "c"]);
        assert_eq!(fan.relations, vec![Word::from_signed(&[1, 2, 1, -2, 1, -2])]);
        assert!(fan.warnings().is_empty());
    }

    #[test]
    fn missing_relations_warn() {
        let text: String = BANCHOFF_FAN.lines().filter(|l| !l.starts_with("relation")).map(|l| format!("{l}\n")).collect();
        let fan = Fan::parse(&text).unwrap();
        assert_eq!(fan.warnings().len(), 1);
    }

    #[test]
    fn doubled_left_endpoint_is_seam_mismatch() {
        let text = BANCHOFF_FAN.replace("segment a2 alpha L3 -> L4", "segment a2 alpha L3 -> L1");
        assert!(matches!(Fan::parse(&text), Err(FanError::SeamMismatch(_))));
    }

    #[test]
    fn parse_error_position() {
        let text = BANCHOFF_FAN.replace("crossing P1 b2:1 b1:2 +", "crossing P1 b2:1 zz:2 +");
        match Fan::parse(&text) {
            Err(FanError::Parse(e)) => assert_eq!(e.column, 18),
            other => panic!("unexpected {other:?}"),
        }
    }
}
