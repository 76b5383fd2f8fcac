//! Lifting the fan to the diagram of a branched covering.
//!
//! Sheet `i` is a copy of the fan; its right seam is glued to the left seam
//! of sheet `ρ(m)(i)`. Lifted curves are traced through the gluing, and a
//! lift of `α` is declared sister of a lift of `τα` whenever the two lifted
//! dual paths of some sheet end on them.

use std::collections::HashMap;

use fpgroups::Permutation;
use thiserror::Error;

use crate::diagram::{ArcRef, Crossing, Curve, Diagram, DiagramError, Issue, MarkedPoint, Passage, Side, SisterPair};
use crate::fan::{Fan, FanError, SeamSide, SegPos};
use crate::monodromy::{validate_rep, MonodromyError, MonodromyRep, RepReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiftError {
    #[error(transparent)]
    Monodromy(#[from] MonodromyError),
    #[error("representation rejected: {0}")]
    Rejected(String),
    #[error("sistering inconsistent: {0}")]
    SisteringInconsistent(String),
    #[error("lifted diagram rejected: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Issue>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentInfo {
    pub name: String,
    /// 1-based sheets, in cycle order of the meridian starting at the least.
    pub sheets: Vec<usize>,
    pub curves: usize,
    pub crossings: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftReport {
    pub n: usize,
    pub classification: RepReport,
    pub components: Vec<ComponentInfo>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lifted {
    pub diagram: Diagram,
    pub report: LiftReport,
    /// For every lifted curve: its base curve and the 0-based sheet of the arrow copy naming it.
    pub origins: Vec<(usize, usize)>,
}

struct LCurve {
    base: usize,
    component: usize,
    sheet: usize,
    len: usize,
}

struct Tracer<'a> {
    fan: &'a Fan,
    m: &'a Permutation,
    m_inv: Permutation,
}

impl Tracer<'_> {
    fn step(&self, seg: usize, sheet: usize) -> usize {
        match self.fan.segments[seg].exit {
            None => sheet,
            Some(p) => match p.side {
                SeamSide::R => self.m.apply(sheet),
                SeamSide::L => self.m_inv.apply(sheet),
            },
        }
    }
}

/// Meridian cycles sorted by least sheet (0-based).
fn sheet_cycles(m: &Permutation) -> Vec<Vec<usize>> {
    let mut cycles = m.cycles();
    for c in &mut cycles {
        let k = c.iter().enumerate().min_by_key(|(_, &x)| x).map(|(i, _)| i).unwrap_or(0);
        c.rotate_left(k);
    }
    cycles.sort();
    cycles
}

pub(crate) fn build(fan: &Fan, images: &[Permutation], n: usize) -> Result<(Diagram, Vec<(usize, usize)>, Vec<Vec<usize>>), LiftError> {
    let m = &images[0];
    let tr = Tracer { fan, m, m_inv: m.inverse() };
    let cycles = sheet_cycles(m);
    let mut comp_of = vec![0usize; n];
    for (ci, c) in cycles.iter().enumerate() {
        for &s in c {
            comp_of[s] = ci;
        }
    }

    // trace lifted curves; a segment copy records the position its index 0 would take
    let mut lcurves: Vec<LCurve> = Vec::new();
    let mut seg_start: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    for (base, arrow) in fan.arrows.iter().enumerate() {
        let len0 = fan.curve_len(base);
        for s in 0..n {
            if seg_start.contains_key(&(arrow.segment, s)) {
                continue;
            }
            let mut copies = vec![(arrow.segment, s)];
            loop {
                let &(sg, sh) = copies.last().expect("non-empty");
                let next = (fan.next_segment(sg), tr.step(sg, sh));
                if next == (arrow.segment, s) {
                    break;
                }
                copies.push(next);
            }
            let lc = lcurves.len();
            let total: usize = copies.iter().map(|&(sg, _)| fan.segments[sg].passages.len()).sum();
            let g0 = arrow.index;
            let mut pos = fan.segments[arrow.segment].passages.len() - g0;
            seg_start.insert((arrow.segment, s), (lc, if total == 0 { 0 } else { (total - g0) % total }));
            for &(sg, sh) in &copies[1..] {
                seg_start.insert((sg, sh), (lc, pos));
                pos += fan.segments[sg].passages.len();
            }
            debug_assert!(len0 == 0 || total.is_multiple_of(len0));
            lcurves.push(LCurve { base, component: comp_of[s], sheet: s, len: total });
        }
    }
    let next_passage = |g: SegPos, sheet: usize| -> (usize, usize) {
        let (lc, start) = seg_start[&(g.segment, sheet)];
        let len = lcurves[lc].len;
        (lc, if len == 0 { 0 } else { (start + g.index) % len })
    };

    // sistering anchored by the lifted dual paths
    let mut partner: Vec<Option<(usize, usize)>> = vec![None; lcurves.len()];
    let mut taken: Vec<Option<usize>> = vec![None; lcurves.len()];
    for (di, d) in fan.duals.iter().enumerate() {
        let c = &images[1 + di];
        let beta = fan.sister(d.alpha);
        let ma = m.pow(d.w_a);
        let mb = m.pow(d.w_b);
        for i in 0..n {
            let (la, p) = next_passage(d.a_end, ma.apply(i));
            let (lb, q) = next_passage(d.b_end, mb.apply(c.apply(i)));
            debug_assert!(lcurves[la].base == d.alpha && lcurves[lb].base == beta);
            let (lena, lenb) = (lcurves[la].len, lcurves[lb].len);
            if lena != lenb {
                return Err(LiftError::SisteringInconsistent(format!(
                    "dual {} on sheet {} pairs lifted curves of lengths {lena} and {lenb}",
                    d.name,
                    i + 1
                )));
            }
            let delta = (q + lena - p) % lena.max(1);
            match partner[la] {
                None => {
                    if let Some(other) = taken[lb] {
                        if other != la {
                            return Err(LiftError::SisteringInconsistent(format!(
                                "a lift of {} is paired with two lifts of {}",
                                fan.curves[beta], fan.curves[d.alpha]
                            )));
                        }
                    }
                    partner[la] = Some((lb, delta));
                    taken[lb] = Some(la);
                }
                Some(prev) if prev != (lb, delta) => {
                    return Err(LiftError::SisteringInconsistent(format!(
                        "dual {} on sheet {} contradicts an earlier correspondence",
                        d.name,
                        i + 1
                    )));
                }
                Some(_) => {}
            }
        }
    }
    let mut shift = vec![0usize; lcurves.len()];
    let non_reps: Vec<usize> = fan.sisters.iter().map(|&(a, _)| a).collect();
    for (lc, c) in lcurves.iter().enumerate() {
        if non_reps.contains(&c.base) {
            match partner[lc] {
                Some((lb, delta)) => shift[lb] = delta,
                None => {
                    return Err(LiftError::SisteringInconsistent(format!(
                        "a lift of {} has no sister",
                        fan.curves[c.base]
                    )))
                }
            }
        } else if taken[lc].is_none() {
            return Err(LiftError::SisteringInconsistent(format!("a lift of {} has no sister", fan.curves[c.base])));
        }
    }

    // output order: base curve, component, sheet
    let mut order: Vec<usize> = (0..lcurves.len()).collect();
    order.sort_by_key(|&i| (lcurves[i].base, lcurves[i].component, lcurves[i].sheet));
    let mut new_index = vec![0usize; lcurves.len()];
    for (k, &i) in order.iter().enumerate() {
        new_index[i] = k;
    }
    let locate = |g: SegPos, sheet: usize| -> Passage {
        let (lc, p) = next_passage(g, sheet);
        let len = lcurves[lc].len;
        Passage::new(new_index[lc], (p + len - shift[lc]) % len.max(1))
    };

    let single = n == 1;
    let components: Vec<String> = if single { vec!["S".into()] } else { (1..=cycles.len()).map(|i| format!("S{i}")).collect() };
    let curves: Vec<Curve> = order
        .iter()
        .map(|&i| {
            let c = &lcurves[i];
            let id = if single {
                fan.curves[c.base].clone()
            } else {
                format!("{}[{}.{}]", fan.curves[c.base], c.component + 1, c.sheet + 1)
            };
            Curve { id, component: c.component, len: c.len }
        })
        .collect();
    let mut crossings = Vec::with_capacity(fan.crossings.len() * n);
    for x in &fan.crossings {
        for s in 0..n {
            let id = if single { x.id.clone() } else { format!("{}[{}]", x.id, s + 1) };
            crossings.push(Crossing { id, a: locate(x.a, s), b: locate(x.b, s), sign: x.sign });
        }
    }
    let mut sisters: Vec<SisterPair> = order
        .iter()
        .filter_map(|&i| partner[i].map(|(lb, _)| SisterPair { curve: new_index[i], rep: new_index[lb] }))
        .collect();
    sisters.sort_by_key(|s| s.curve);

    let mut marked = Vec::new();
    let exit_at = |h: usize| {
        fan.segments
            .iter()
            .position(|s| s.exit.is_some_and(|p| p.height == h))
            .expect("validated seam has an exit at every height")
    };
    for (ci, cyc) in cycles.iter().enumerate() {
        let s0 = cyc[0];
        for (label, h) in [("A", 1), ("B", fan.seam)] {
            let u = exit_at(h);
            let gap = SegPos { segment: u, index: fan.segments[u].passages.len() };
            let after = locate(gap, s0);
            let len = curves[after.curve].len;
            let arc = ArcRef { curve: after.curve, index: (after.position + len - 1) % len.max(1) };
            let exits_left = fan.segments[u].exit.is_some_and(|p| p.side == SeamSide::L);
            let side = if exits_left == (label == "A") { Side::Backward } else { Side::Forward };
            let id = if single { label.to_string() } else { format!("{label}[{}]", ci + 1) };
            marked.push(MarkedPoint { id, component: ci, arc, side });
        }
    }

    let name = if single { fan.name.clone() } else { format!("{}-n{}", fan.name, n) };
    let origins = order.iter().map(|&i| (lcurves[i].base, lcurves[i].sheet)).collect();
    Ok((Diagram { name, components, curves, crossings, sisters, marked }, origins, cycles))
}

/// Net seam crossings of each arc of a base curve.
pub(crate) fn arc_voltages(fan: &Fan, curve: usize) -> Vec<i64> {
    let len = fan.curve_len(curve);
    let mut v = vec![0i64; len];
    if len == 0 {
        return v;
    }
    let arrow = fan.arrows[curve];
    let chain = &fan.chains[curve];
    let start = chain.iter().position(|&s| s == arrow.segment).expect("arrow on chain");
    // positions count from the arrow; the arc before position 0 is the last one
    let mut arc = len - 1;
    let mut pos = 0;
    for k in 0..chain.len() {
        let seg = &fan.segments[chain[(start + k) % chain.len()]];
        let from = if k == 0 { arrow.index } else { 0 };
        for _ in from..seg.passages.len() {
            arc = pos;
            pos += 1;
        }
        if let Some(p) = seg.exit {
            v[arc] += p.voltage();
        }
    }
    v
}

pub(crate) fn glue_trivial(fan: &Fan) -> Result<Diagram, FanError> {
    let images = vec![Permutation::identity(1); fan.generators().len()];
    let (d, _, _) = build(fan, &images, 1).map_err(|e| FanError::Invalid(e.to_string()))?;
    let report = d.validate();
    if !report.accepted() {
        return Err(FanError::Diagram(DiagramError::Rejected(report.issues)));
    }
    check_cut(fan, &d)?;
    Ok(d)
}

/// The cut runs from the A face to the B face: net seam crossings around
/// every other face vanish.
fn check_cut(fan: &Fan, d: &Diagram) -> Result<(), FanError> {
    let faces = d.trace_faces()?;
    let volts: Vec<Vec<i64>> = (0..fan.curves.len()).map(|c| arc_voltages(fan, c)).collect();
    let marked = d.marked_faces(&faces);
    for (fi, f) in faces.iter().enumerate() {
        let total: i64 = f.darts.iter().map(|dt| if dt.forward { volts[dt.curve][dt.arc] } else { -volts[dt.curve][dt.arc] }).sum();
        let expected = match marked.iter().position(|&m| m == fi) {
            Some(0) => 1,
            Some(1) => -1,
            _ => 0,
        };
        if total != expected {
            return Err(FanError::CutInconsistent(format!("face {} has net seam crossing {total}, expected {expected}", fi + 1)));
        }
    }
    Ok(())
}

/// The lifted diagram of the covering given by `rep`.
pub fn lift(fan: &Fan, rep: &MonodromyRep) -> Result<Lifted, LiftError> {
    let images = rep.for_fan(fan)?;
    let classification = validate_rep(fan, rep)?;
    if let Some(why) = classification.rejection() {
        return Err(LiftError::Rejected(why));
    }
    let (diagram, origins, cycles) = build(fan, &images, rep.n)?;
    let v = diagram.validate();
    if !v.accepted() {
        return Err(LiftError::Invalid(v.issues));
    }
    let components = cycles
        .iter()
        .enumerate()
        .map(|(ci, cyc)| {
            let mut order = vec![cyc[0]];
            while order.len() < cyc.len() {
                order.push(images[0].apply(*order.last().expect("non-empty")));
            }
            ComponentInfo {
                name: diagram.components[ci].clone(),
                sheets: order.into_iter().map(|s| s + 1).collect(),
                curves: diagram.curves.iter().filter(|c| c.component == ci).count(),
                crossings: diagram.crossings.iter().filter(|x| diagram.curves[x.a.curve].component == ci).count(),
            }
        })
        .collect();
    Ok(Lifted { diagram, report: LiftReport { n: rep.n, classification, components }, origins })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::banchoff_fan;

    #[test]
    fn base_is_trivial_lift() {
        let fan = banchoff_fan();
        let base = fan.base_diagram().unwrap();
        let l = lift(&fan, &MonodromyRep::trivial(&fan)).unwrap();
        assert_eq!(base.to_text(), l.diagram.to_text());
    }

    #[test]
    fn base_counts() {
        let r = banchoff_fan().base_diagram().unwrap().validate();
        assert!(r.accepted(), "{:?}", r.issues);
        assert_eq!((r.counts.curves, r.counts.crossings, r.counts.faces, r.counts.triplets, r.counts.marked), (2, 6, 8, 2, 2));
    }

    #[test]
    fn arc_voltages_of_banchoff() {
        let fan = banchoff_fan();
        assert_eq!(arc_voltages(&fan, 0), vec![0, 0, 0, 1, 0, -1]);
        assert_eq!(arc_voltages(&fan, 1), vec![0, -1, 0, 0, 0, 1]);
    }

    #[test]
    fn rejected_rep() {
        let fan = banchoff_fan();
        let rep = MonodromyRep::parse(2, &[("m", "()"), ("c", "(1 2)")]).unwrap();
        assert!(matches!(lift(&fan, &rep), Err(LiftError::Rejected(_))));
    }

    #[test]
    fn irregular_cover_has_two_spheres() {
        let fan = banchoff_fan();
        let rep = MonodromyRep::parse(3, &[("m", "(1 2)"), ("c", "(2 3)")]).unwrap();
        let l = lift(&fan, &rep).unwrap();
        assert_eq!(l.diagram.components, vec!["S1", "S2"]);
        assert_eq!(l.report.components[0].sheets, vec![1, 2]);
        assert_eq!(l.report.components[1].sheets, vec![3]);
    }
}
