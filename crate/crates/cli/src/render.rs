//! Schematic SVG drawing of a diagram: one panel per component, crossings
//! placed by a force-directed layout of the 4-valent graph.

use std::collections::HashMap;
use std::fmt::Write;

use johansson::diagram::{Diagram, Passage, Side, Structure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x4a6f_6861_6e73;
const PANEL: f64 = 420.0;
const MARGIN: f64 = 40.0;
const ITERATIONS: usize = 400;

/// (representative, sister) shades per sister pair.
const PALETTE: [(&str, &str); 8] = [
    ("#1f77b4", "#7fb8e0"),
    ("#d62728", "#f08a8b"),
    ("#2ca02c", "#8fd68f"),
    ("#9467bd", "#c7b0de"),
    ("#ff7f0e", "#ffbb80"),
    ("#17becf", "#8fe3ec"),
    ("#8c564b", "#c9a39b"),
    ("#e377c2", "#f3bfe3"),
];

#[derive(Clone, Copy, Debug, PartialEq)]
struct Pt {
    x: f64,
    y: f64,
}

impl Pt {
    fn add(self, o: Pt) -> Pt {
        Pt { x: self.x + o.x, y: self.y + o.y }
    }
    fn sub(self, o: Pt) -> Pt {
        Pt { x: self.x - o.x, y: self.y - o.y }
    }
    fn scale(self, k: f64) -> Pt {
        Pt { x: self.x * k, y: self.y * k }
    }
    fn len(self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }
    fn unit(self) -> Pt {
        let l = self.len();
        if l < 1e-9 {
            Pt { x: 1.0, y: 0.0 }
        } else {
            self.scale(1.0 / l)
        }
    }
    fn perp(self) -> Pt {
        Pt { x: -self.y, y: self.x }
    }
}

/// Arc of a curve drawn as a cubic Bézier.
struct ArcPath {
    from: Pt,
    c1: Pt,
    c2: Pt,
    to: Pt,
}

impl ArcPath {
    fn at(&self, t: f64) -> Pt {
        let s = 1.0 - t;
        self.from
            .scale(s * s * s)
            .add(self.c1.scale(3.0 * s * s * t))
            .add(self.c2.scale(3.0 * s * t * t))
            .add(self.to.scale(t * t * t))
    }

    fn tangent(&self, t: f64) -> Pt {
        let s = 1.0 - t;
        self.c1
            .sub(self.from)
            .scale(3.0 * s * s)
            .add(self.c2.sub(self.c1).scale(6.0 * s * t))
            .add(self.to.sub(self.c2).scale(3.0 * t * t))
            .unit()
    }

    fn d(&self) -> String {
        format!(
            "M {:.2} {:.2} C {:.2} {:.2} {:.2} {:.2} {:.2} {:.2}",
            self.from.x, self.from.y, self.c1.x, self.c1.y, self.c2.x, self.c2.y, self.to.x, self.to.y
        )
    }
}

fn layout(n: usize, edges: &[(usize, usize)], rng: &mut ChaCha8Rng) -> Vec<Pt> {
    let inner = PANEL - 2.0 * MARGIN;
    let mut pos: Vec<Pt> = (0..n).map(|_| Pt { x: rng.gen_range(0.0..inner), y: rng.gen_range(0.0..inner) }).collect();
    if n <= 1 {
        return vec![Pt { x: inner / 2.0, y: inner / 2.0 }; n];
    }
    let k = (inner * inner / n as f64).sqrt() * 0.6;
    let mut temp = inner / 8.0;
    for _ in 0..ITERATIONS {
        let mut disp = vec![Pt { x: 0.0, y: 0.0 }; n];
        for i in 0..n {
            for j in i + 1..n {
                let delta = pos[i].sub(pos[j]);
                let d = delta.len().max(0.01);
                let f = delta.unit().scale(k * k / d);
                disp[i] = disp[i].add(f);
                disp[j] = disp[j].sub(f);
            }
        }
        for &(a, b) in edges {
            if a == b {
                continue;
            }
            let delta = pos[a].sub(pos[b]);
            let d = delta.len().max(0.01);
            let f = delta.unit().scale(d * d / k);
            disp[a] = disp[a].sub(f);
            disp[b] = disp[b].add(f);
        }
        for i in 0..n {
            let d = disp[i].len();
            let step = disp[i].unit().scale(d.min(temp));
            pos[i] = pos[i].add(step);
            pos[i].x = pos[i].x.clamp(0.0, inner);
            pos[i].y = pos[i].y.clamp(0.0, inner);
        }
        temp *= 0.985;
    }
    // fit to the panel
    let (mut lo, mut hi) = (pos[0], pos[0]);
    for p in &pos {
        lo = Pt { x: lo.x.min(p.x), y: lo.y.min(p.y) };
        hi = Pt { x: hi.x.max(p.x), y: hi.y.max(p.y) };
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(1.0);
    pos.iter().map(|p| p.sub(lo).scale(inner / span)).collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders an accepted diagram. `st` must come from `d.structure()`.
pub fn render_svg(d: &Diagram, st: &Structure) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let ncomp = d.components.len().max(1);
    let width = PANEL * ncomp as f64;
    let height = PANEL + 30.0;

    // colour per sister pair, keyed by the representative
    let mut colour_of: HashMap<usize, (&str, &str)> = HashMap::new();
    for (g, _) in d.curves.iter().enumerate() {
        let rep = if st.is_rep(g) { g } else { st.sister(g) };
        let next = colour_of.len();
        colour_of.entry(rep).or_insert(PALETTE[next % PALETTE.len()]);
    }

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(svg, "<title>{}</title>", escape(&d.name));
    let _ = writeln!(svg, r##"<rect x="0" y="0" width="{width:.0}" height="{height:.0}" fill="#ffffff"/>"##);

    for (ci, comp) in d.components.iter().enumerate() {
        let ox = PANEL * ci as f64 + MARGIN;
        let oy = MARGIN + 30.0;
        let xs: Vec<usize> = (0..d.crossings.len()).filter(|&x| d.curves[d.crossings[x].a.curve].component == ci).collect();
        let local: HashMap<usize, usize> = xs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let curves: Vec<usize> = (0..d.curves.len()).filter(|&g| d.curves[g].component == ci).collect();

        let mut edges = Vec::new();
        let mut arcs = Vec::new();
        for &g in &curves {
            let len = d.curves[g].len;
            for k in 0..len {
                let a = local[&st.crossing_at(Passage::new(g, k))];
                let b = local[&st.crossing_at(Passage::new(g, (k + 1) % len))];
                edges.push((a, b));
                arcs.push((g, k, a, b));
            }
        }
        let pos: Vec<Pt> = layout(xs.len(), &edges, &mut rng).into_iter().map(|p| p.add(Pt { x: ox, y: oy })).collect();

        // spread parallel arcs and loops apart
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut paths: HashMap<(usize, usize), ArcPath> = HashMap::new();
        for &(g, k, a, b) in &arcs {
            let key = (a.min(b), a.max(b));
            let j = *seen.entry(key).and_modify(|j| *j += 1).or_insert(0);
            let (p, q) = (pos[a], pos[b]);
            let path = if a == b {
                let r = 28.0 + 14.0 * j as f64;
                let dir = [Pt { x: 0.0, y: -1.0 }, Pt { x: 1.0, y: 0.0 }, Pt { x: 0.0, y: 1.0 }, Pt { x: -1.0, y: 0.0 }][j % 4];
                let side = dir.perp().scale(r * 0.6);
                ArcPath { from: p, c1: p.add(dir.scale(r)).add(side), c2: p.add(dir.scale(r)).sub(side), to: q }
            } else {
                let sign = if a < b { 1.0 } else { -1.0 };
                // 0, +1, -1, +2, -2, .. steps to either side
                let steps = j.div_ceil(2) as f64 * if j % 2 == 1 { 1.0 } else { -1.0 };
                let bend = sign * 18.0 * steps;
                let off = q.sub(p).perp().unit().scale(bend);
                let c1 = p.add(q.sub(p).scale(1.0 / 3.0)).add(off);
                let c2 = p.add(q.sub(p).scale(2.0 / 3.0)).add(off);
                ArcPath { from: p, c1, c2, to: q }
            };
            paths.insert((g, k), path);
        }

        let _ = writeln!(svg, r#"<g class="component">"#);
        let _ = writeln!(svg, "<title>{}</title>", escape(comp));
        let _ = writeln!(
            svg,
            r##"<text x="{:.2}" y="24" font-family="sans-serif" font-size="14" fill="#333333">{}</text>"##,
            PANEL * ci as f64 + 12.0,
            escape(comp)
        );
        for &g in &curves {
            let shades = colour_of[&if st.is_rep(g) { g } else { st.sister(g) }];
            let colour = if st.is_rep(g) { shades.0 } else { shades.1 };
            let dash = if st.is_rep(g) { "" } else { r#" stroke-dasharray="6 3""# };
            let _ = writeln!(svg, r#"<g class="curve" stroke="{colour}" fill="none" stroke-width="2"{dash}>"#);
            let _ = writeln!(svg, "<title>{}</title>", escape(&d.curves[g].id));
            if d.curves[g].len == 0 {
                let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="20"/>"#, ox + 20.0, oy + 20.0);
            }
            for k in 0..d.curves[g].len {
                let _ = writeln!(svg, r#"<path d="{}"/>"#, paths[&(g, k)].d());
            }
            // arrow on the first arc, pointing along the curve
            if let Some(p) = paths.get(&(g, 0)) {
                let m = p.at(0.5);
                let t = p.tangent(0.5);
                let n = t.perp();
                let tip = m.add(t.scale(7.0));
                let l = m.sub(t.scale(5.0)).add(n.scale(5.0));
                let r = m.sub(t.scale(5.0)).sub(n.scale(5.0));
                let _ = writeln!(
                    svg,
                    r#"<polygon class="arrow" fill="{colour}" stroke="none" points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}"/>"#,
                    tip.x, tip.y, l.x, l.y, r.x, r.y
                );
            }
            let _ = writeln!(svg, "</g>");
        }
        for (i, &x) in xs.iter().enumerate() {
            let p = pos[i];
            let _ = writeln!(
                svg,
                r##"<g class="crossing"><circle cx="{:.2}" cy="{:.2}" r="4" fill="#000000"/><text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="10" fill="#000000">{}</text></g>"##,
                p.x,
                p.y,
                p.x + 6.0,
                p.y - 6.0,
                escape(&d.crossings[x].id)
            );
        }
        for m in d.marked.iter().filter(|m| m.component == ci) {
            let Some(path) = paths.get(&(m.arc.curve, m.arc.index)) else { continue };
            let t = path.tangent(0.5);
            let side = if m.side == Side::Forward { 1.0 } else { -1.0 };
            let p = path.at(0.5).add(t.perp().scale(14.0 * side));
            let _ = writeln!(
                svg,
                r##"<g class="marked"><circle cx="{:.2}" cy="{:.2}" r="5" fill="#ffffff" stroke="#000000" stroke-width="1.5"/><text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" fill="#000000">{}</text></g>"##,
                p.x,
                p.y,
                p.x + 7.0,
                p.y + 4.0,
                escape(&m.id)
            );
        }
        let _ = writeln!(svg, "</g>");
    }
    svg.push_str("</svg>\n");
    svg
}
