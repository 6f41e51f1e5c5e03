//! Framed links with flat G-structures, the link form F(ℓ, g, ω), the
//! surgery invariant τ and the Verlinde rank count.
//!
//! A link is stored as a closed sliced word. Every strand at every level
//! carries its component, orientation and the G-element of the arc it lies
//! on. Arcs end where a strand changes color at a crossing: with geometry P
//! the bottom-left strand passes to the top-right, with geometry N the
//! bottom-right strand passes to the top-left.

use crate::category::CategoryData;
use crate::diagram::{crossing, crossing_sign, ColoredDiagram, Geometry, Piece, Sign, Strand};
use crate::evaluator::evaluate_unchecked;
use crate::report::AxiomReport;
use crate::scalars::CycNumber;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurgeryError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("malformed link: {0}")]
    Structure(String),
    #[error("flat structure rejected: {0}")]
    NotSpecial(String),
    #[error("base color grade mismatch on component {0}")]
    GradeMismatch(usize),
    #[error("illegal move site: {0}")]
    IllegalSite(String),
    #[error("rank of the category is zero")]
    MissingRank,
    #[error("{0}")]
    Relation(String),
}

/// One strand of a level: component, orientation and arc G-element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LinkStrand {
    pub comp: usize,
    pub g: usize,
    pub sign: Sign,
}

impl LinkStrand {
    /// G-element of the strand read as an object (inverted on upward strands).
    pub fn object_g(&self, c: &CategoryData) -> usize {
        match self.sign {
            Sign::Plus => self.g,
            Sign::Minus => c.group.inv(self.g),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkPiece {
    Id,
    /// ∅ → (+, −)
    CupR,
    /// ∅ → (−, +)
    CupL,
    /// (−, +) → ∅
    CapR,
    /// (+, −) → ∅
    CapL,
    Cross(Geometry),
}

impl LinkPiece {
    fn shape(self) -> Shape {
        match self {
            LinkPiece::Id => Shape::Id,
            LinkPiece::CupR | LinkPiece::CupL => Shape::Cup,
            LinkPiece::CapR | LinkPiece::CapL => Shape::Cap,
            LinkPiece::Cross(Geometry::P) => Shape::P,
            LinkPiece::Cross(Geometry::N) => Shape::N,
        }
    }
}

/// A framed oriented link (blackboard framing) with G-elements on its arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GLinkPresentation {
    levels: Vec<Vec<LinkStrand>>,
    slices: Vec<Vec<LinkPiece>>,
    num_components: usize,
}

// ---------------------------------------------------------------- walking

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Id,
    Cup,
    Cap,
    P,
    N,
}

impl Shape {
    fn src(self) -> usize {
        match self {
            Shape::Id => 1,
            Shape::Cup => 0,
            _ => 2,
        }
    }

    fn tgt(self) -> usize {
        match self {
            Shape::Id => 1,
            Shape::Cap => 0,
            _ => 2,
        }
    }

    /// Port reached from `(top, port)`, and whether the passage is a color change.
    fn pass(self, top: bool, port: usize) -> (bool, usize, bool) {
        match (self, top, port) {
            (Shape::Id, t, 0) => (!t, 0, false),
            (Shape::Cup, true, p) => (true, 1 - p, false),
            (Shape::Cap, false, p) => (false, 1 - p, false),
            (Shape::P, false, 0) => (true, 1, true),
            (Shape::P, true, 1) => (false, 0, true),
            (Shape::P, false, 1) => (true, 0, false),
            (Shape::P, true, 0) => (false, 1, false),
            (Shape::N, false, 1) => (true, 0, true),
            (Shape::N, true, 0) => (false, 1, true),
            (Shape::N, false, 0) => (true, 1, false),
            (Shape::N, true, 1) => (false, 0, false),
            _ => unreachable!("no such port"),
        }
    }
}

/// Where a strand position is attached inside a slice: piece index, its first
/// port offset, and the shape.
struct Frame {
    shapes: Vec<Vec<Shape>>,
    bottom: Vec<Vec<(usize, usize)>>,
    top: Vec<Vec<(usize, usize)>>,
}

/// One passage through a piece.
#[derive(Debug, Clone, Copy)]
struct Step {
    slice: usize,
    piece: usize,
    split: bool,
    /// passage went from the top of the piece to its bottom
    downward: bool,
    level: usize,
    pos: usize,
    down: bool,
}

impl Frame {
    fn new(shapes: Vec<Vec<Shape>>) -> Frame {
        let mut bottom = Vec::with_capacity(shapes.len());
        let mut top = Vec::with_capacity(shapes.len());
        for s in &shapes {
            let (mut b, mut t) = (Vec::new(), Vec::new());
            let (mut bo, mut to) = (0, 0);
            for (i, sh) in s.iter().enumerate() {
                for _ in 0..sh.src() {
                    b.push((i, bo));
                }
                for _ in 0..sh.tgt() {
                    t.push((i, to));
                }
                bo += sh.src();
                to += sh.tgt();
            }
            bottom.push(b);
            top.push(t);
        }
        Frame { shapes, bottom, top }
    }

    /// Leaves node `(level, pos)` downward (`down`) or upward.
    fn step(&self, level: usize, pos: usize, down: bool) -> Step {
        let slice = if down { level - 1 } else { level };
        let (piece, off) = if down { self.top[slice][pos] } else { self.bottom[slice][pos] };
        let shape = self.shapes[slice][piece];
        let (exit_top, port, split) = shape.pass(down, pos - off);
        // offsets of the exit side
        let side = if exit_top { &self.top[slice] } else { &self.bottom[slice] };
        let exit_off = side.iter().find(|(p, _)| *p == piece).map(|x| x.1).expect("piece has ports on exit side");
        if exit_top {
            Step { slice, piece, split, downward: false, level: slice + 1, pos: exit_off + port, down: false }
        } else {
            Step { slice, piece, split, downward: true, level: slice, pos: exit_off + port, down: true }
        }
    }
}

// ---------------------------------------------------------------- structure

fn piece_source(p: LinkPiece) -> usize {
    p.shape().src()
}

impl GLinkPresentation {
    /// The empty link.
    pub fn empty() -> GLinkPresentation {
        GLinkPresentation { levels: vec![vec![]], slices: vec![], num_components: 0 }
    }

    /// Checks chaining, cup and cap matching, and that the component ids
    /// 0..n label exactly the n closed curves.
    pub fn new(levels: Vec<Vec<LinkStrand>>, slices: Vec<Vec<LinkPiece>>) -> Result<GLinkPresentation, SurgeryError> {
        let err = |k: usize, m: &str| Err(SurgeryError::Structure(format!("slice {k}: {m}")));
        if levels.len() != slices.len() + 1 {
            return Err(SurgeryError::Structure("level count".into()));
        }
        if !levels[0].is_empty() || !levels[slices.len()].is_empty() {
            return Err(SurgeryError::Structure("dangling strand at the bottom or top".into()));
        }
        for (k, s) in slices.iter().enumerate() {
            let (lo, hi) = (&levels[k], &levels[k + 1]);
            let (mut b, mut t) = (0, 0);
            for &p in s {
                let src = piece_source(p);
                let tgt = p.shape().tgt();
                if b + src > lo.len() || t + tgt > hi.len() {
                    return err(k, "piece runs past the level");
                }
                let (bs, ts) = (&lo[b..b + src], &hi[t..t + tgt]);
                let ok = match p {
                    LinkPiece::Id => bs[0] == ts[0],
                    LinkPiece::CupR => pair(ts, Sign::Plus),
                    LinkPiece::CupL => pair(ts, Sign::Minus),
                    LinkPiece::CapR => pair(bs, Sign::Minus),
                    LinkPiece::CapL => pair(bs, Sign::Plus),
                    LinkPiece::Cross(Geometry::P) => {
                        ts[0] == bs[1] && ts[1].comp == bs[0].comp && ts[1].sign == bs[0].sign
                    }
                    LinkPiece::Cross(Geometry::N) => {
                        ts[1] == bs[0] && ts[0].comp == bs[1].comp && ts[0].sign == bs[1].sign
                    }
                };
                if !ok {
                    return err(k, &format!("strands do not match at {p:?}"));
                }
                b += src;
                t += tgt;
            }
            if b != lo.len() || t != hi.len() {
                return err(k, "slice does not cover its levels");
            }
        }
        let mut link = GLinkPresentation { levels, slices, num_components: 0 };
        let curves = link.curves();
        let mut seen: Vec<usize> = curves.iter().map(|(comp, _)| *comp).collect();
        seen.sort_unstable();
        if seen.iter().enumerate().any(|(i, &r)| i != r) {
            return Err(SurgeryError::Structure("component ids must label distinct curves 0..n".into()));
        }
        link.num_components = curves.len();
        Ok(link)
    }

    pub fn levels(&self) -> &[Vec<LinkStrand>] {
        &self.levels
    }

    pub fn slices(&self) -> &[Vec<LinkPiece>] {
        &self.slices
    }

    pub fn num_components(&self) -> usize {
        self.num_components
    }

    fn frame(&self) -> Frame {
        Frame::new(self.slices.iter().map(|s| s.iter().map(|p| p.shape()).collect()).collect())
    }

    /// Walks every closed curve once, checking that each carries a single
    /// component id; returns (component, nodes in orientation order).
    fn curves(&self) -> Vec<(usize, Vec<(usize, usize)>)> {
        let frame = self.frame();
        let mut visited: Vec<Vec<bool>> = self.levels.iter().map(|l| vec![false; l.len()]).collect();
        let mut out = Vec::new();
        for k in 0..self.levels.len() {
            for p in 0..self.levels[k].len() {
                if visited[k][p] || self.levels[k][p].sign != Sign::Plus {
                    continue;
                }
                let comp = self.levels[k][p].comp;
                let mut nodes = vec![(k, p)];
                visited[k][p] = true;
                let (mut lv, mut pos, mut down) = (k, p, true);
                loop {
                    let st = frame.step(lv, pos, down);
                    (lv, pos, down) = (st.level, st.pos, st.down);
                    if (lv, pos) == (k, p) {
                        break;
                    }
                    if visited[lv][pos] || self.levels[lv][pos].comp != comp {
                        // mixed components on one curve; force a failure in `new`
                        out.push((usize::MAX, nodes.clone()));
                        break;
                    }
                    visited[lv][pos] = true;
                    nodes.push((lv, pos));
                }
                out.push((comp, nodes));
            }
        }
        out
    }

    /// Positions with a downward strand of component `r`, lowest level first.
    pub fn coupon_sites(&self, r: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (k, l) in self.levels.iter().enumerate() {
            for (p, s) in l.iter().enumerate() {
                if s.comp == r && s.sign == Sign::Plus {
                    out.push((k, p));
                }
            }
        }
        out
    }

    /// The default coupon site of every component.
    pub fn default_sites(&self) -> Vec<(usize, usize)> {
        (0..self.num_components).map(|r| self.coupon_sites(r)[0]).collect()
    }

    /// Every crossing as (slice, bottom position, geometry).
    pub fn crossings(&self) -> Vec<(usize, usize, Geometry)> {
        let mut out = Vec::new();
        for (k, s) in self.slices.iter().enumerate() {
            let mut b = 0;
            for &p in s {
                if let LinkPiece::Cross(geom) = p {
                    out.push((k, b, geom));
                }
                b += piece_source(p);
            }
        }
        out
    }

    /// Same link with every arc element conjugated: g ↦ η⁻¹gη.
    pub fn conjugate(&self, eta: usize, c: &CategoryData) -> GLinkPresentation {
        let mut out = self.clone();
        for l in &mut out.levels {
            for s in l.iter_mut() {
                s.g = c.group.conj(s.g, eta);
            }
        }
        out
    }

    /// Reverses the orientation of component `r`.
    pub fn reverse(&self, r: usize, c: &CategoryData) -> GLinkPresentation {
        let mut out = self.clone();
        for (k, s) in out.slices.iter_mut().enumerate() {
            let (mut b, mut t) = (0, 0);
            for p in s.iter_mut() {
                let touches = |strand: Option<&LinkStrand>| strand.map(|x| x.comp == r).unwrap_or(false);
                let mine = match p {
                    LinkPiece::CupR | LinkPiece::CupL => touches(self.levels[k + 1].get(t)),
                    LinkPiece::CapR | LinkPiece::CapL => touches(self.levels[k].get(b)),
                    _ => false,
                };
                b += piece_source(*p);
                t += p.shape().tgt();
                if mine {
                    *p = match *p {
                        LinkPiece::CupR => LinkPiece::CupL,
                        LinkPiece::CupL => LinkPiece::CupR,
                        LinkPiece::CapR => LinkPiece::CapL,
                        LinkPiece::CapL => LinkPiece::CapR,
                        other => other,
                    };
                }
            }
        }
        for l in &mut out.levels {
            for s in l.iter_mut().filter(|s| s.comp == r) {
                s.sign = s.sign.flip();
                s.g = c.group.inv(s.g);
            }
        }
        out
    }
}

fn pair(s: &[LinkStrand], first: Sign) -> bool {
    s[0].comp == s[1].comp && s[0].g == s[1].g && s[0].sign == first && s[1].sign == first.flip()
}

// ---------------------------------------------------------------- flat structure

/// Object G-element of the strand that leaves a crossing with a color change.
pub fn wirtinger_output(c: &CategoryData, geom: Geometry, a: &LinkStrand, b: &LinkStrand) -> usize {
    let g = &c.group;
    let (oa, ob) = (a.object_g(c), b.object_g(c));
    match geom {
        Geometry::P => g.conj(oa, ob),
        Geometry::N => g.conj(ob, g.inv(oa)),
    }
}

impl GLinkPresentation {
    /// Product of the crossing contributions along component `r`; trivial
    /// exactly when the framed longitude lies in the kernel.
    pub fn longitude(&self, r: usize, c: &CategoryData) -> usize {
        let g = &c.group;
        let frame = self.frame();
        let start = match self.coupon_sites(r).first() {
            Some(&s) => s,
            None => return g.unit(),
        };
        let mut h = g.unit();
        let (mut lv, mut pos, mut down) = (start.0, start.1, true);
        loop {
            let st = frame.step(lv, pos, down);
            if st.split {
                let lo = &self.levels[st.slice];
                let b0 = frame.bottom[st.slice].iter().position(|x| x.0 == st.piece).expect("crossing has a bottom");
                let (a, b) = (lo[b0], lo[b0 + 1]);
                let geom = if let LinkPiece::Cross(geom) = self.slices[st.slice][st.piece] { geom } else { unreachable!() };
                let over = match geom {
                    Geometry::P => b,
                    Geometry::N => a,
                };
                let sign = crossing_sign(geom, a.sign, b.sign);
                let nu = if sign > 0 { over.g } else { g.inv(over.g) };
                h = g.mul(h, g.inv(nu));
            }
            (lv, pos, down) = (st.level, st.pos, st.down);
            if (lv, pos) == start {
                break;
            }
        }
        h
    }
}

/// Wirtinger consistency at every crossing and trivial longitudes.
pub fn check_flat_structure(link: &GLinkPresentation, c: &CategoryData) -> AxiomReport {
    let mut r = AxiomReport::new();
    for (k, b, geom) in link.crossings() {
        let (lo, hi) = (&link.levels[k], &link.levels[k + 1]);
        let (x, y) = (lo[b], lo[b + 1]);
        let want = wirtinger_output(c, geom, &x, &y);
        let top = match geom {
            Geometry::P => hi.get(b + 1),
            Geometry::N => hi.get(b),
        };
        let got = top.map(|s| s.object_g(c));
        r.holds("wirtinger relation", got == Some(want), || format!("slice={k},position={b}"));
    }
    for comp in 0..link.num_components {
        let h = link.longitude(comp, c);
        r.holds("longitude in kernel", h == c.group.unit(), || {
            format!("component={comp},longitude={}", c.group.name(h))
        });
    }
    r
}

fn require_special(link: &GLinkPresentation, c: &CategoryData) -> Result<(), SurgeryError> {
    let r = check_flat_structure(link, c);
    match r.failures.first() {
        None => Ok(()),
        Some(f) => Err(SurgeryError::NotSpecial(format!("{} at {}", f.axiom, f.instance))),
    }
}

// ---------------------------------------------------------------- text format

/// Canonical text: arc declarations, then one slice per line.
pub fn print_link(link: &GLinkPresentation, c: &CategoryData) -> String {
    let arcs = link.arc_ids();
    let mut out = String::new();
    let mut decl: BTreeMap<usize, LinkStrand> = BTreeMap::new();
    for (k, l) in link.levels.iter().enumerate() {
        for (p, s) in l.iter().enumerate() {
            decl.entry(arcs[k][p]).or_insert(*s);
        }
    }
    for (id, s) in &decl {
        out.push_str(&format!("arc={id} comp={} g={}\n", s.comp, c.group.name(s.g)));
    }
    for (k, s) in link.slices.iter().enumerate() {
        let (lo, hi) = (&arcs[k], &arcs[k + 1]);
        let (mut b, mut t) = (0, 0);
        let mut toks = Vec::new();
        for &p in s {
            toks.push(match p {
                LinkPiece::Id => format!("id({})", lo[b]),
                LinkPiece::CupR => format!("cupR({})", hi[t]),
                LinkPiece::CupL => format!("cupL({})", hi[t]),
                LinkPiece::CapR => format!("capR({})", lo[b]),
                LinkPiece::CapL => format!("capL({})", lo[b]),
                LinkPiece::Cross(Geometry::P) => format!("crossP({},{};{})", lo[b], lo[b + 1], hi[t + 1]),
                LinkPiece::Cross(Geometry::N) => format!("crossN({},{};{})", lo[b], lo[b + 1], hi[t]),
            });
            b += piece_source(p);
            t += p.shape().tgt();
        }
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

impl GLinkPresentation {
    /// Arc id of every strand position, numbered by first appearance.
    fn arc_ids(&self) -> Vec<Vec<usize>> {
        let frame = self.frame();
        let mut ids: Vec<Vec<usize>> = self.levels.iter().map(|l| vec![usize::MAX; l.len()]).collect();
        let mut next = 0;
        for k in 0..self.levels.len() {
            for p in 0..self.levels[k].len() {
                if ids[k][p] != usize::MAX {
                    continue;
                }
                ids[k][p] = next;
                // spread in both directions until a color change
                for first_down in [true, false] {
                    let (mut lv, mut pos, mut down) = (k, p, first_down);
                    loop {
                        let st = frame.step(lv, pos, down);
                        if st.split || ids[st.level][st.pos] != usize::MAX {
                            break;
                        }
                        ids[st.level][st.pos] = next;
                        (lv, pos, down) = (st.level, st.pos, st.down);
                    }
                }
                next += 1;
            }
        }
        ids
    }
}

fn parse_arg_list(s: &str) -> Vec<String> {
    s.split([',', ';']).map(|x| x.trim().to_string()).collect()
}

/// Reads the text form written by `print_link`.
pub fn parse_link(text: &str, c: &CategoryData) -> Result<GLinkPresentation, SurgeryError> {
    let perr = |line: usize, msg: String| SurgeryError::Parse { line, msg };
    let mut arcs: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let mut comp_ids: BTreeMap<String, usize> = BTreeMap::new();
    let mut body = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with("arc=") {
            let mut id = None;
            let mut comp = None;
            let mut g = None;
            for tok in line.split_whitespace() {
                let (key, val) = tok.split_once('=').ok_or_else(|| perr(i + 1, format!("bad field {tok}")))?;
                match key {
                    "arc" => id = Some(val.to_string()),
                    "comp" => {
                        let n = comp_ids.len();
                        comp = Some(*comp_ids.entry(val.to_string()).or_insert(n));
                    }
                    "g" => {
                        let e = if val == "unit" { Some(c.group.unit()) } else { c.group.index(val) };
                        g = Some(e.ok_or_else(|| perr(i + 1, format!("unknown group element {val}")))?);
                    }
                    _ => return Err(perr(i + 1, format!("unknown field {key}"))),
                }
            }
            match (id, comp, g) {
                (Some(id), Some(comp), Some(g)) => {
                    if arcs.insert(id.clone(), (comp, g)).is_some() {
                        return Err(perr(i + 1, format!("arc {id} declared twice")));
                    }
                }
                _ => return Err(perr(i + 1, "arc line needs arc=, comp= and g=".into())),
            }
        } else {
            body.push((i + 1, line.to_string()));
        }
    }
    let strand = |line: usize, id: &str, sign: Sign| -> Result<LinkStrand, SurgeryError> {
        let &(comp, g) = arcs.get(id).ok_or_else(|| perr(line, format!("undeclared arc {id}")))?;
        Ok(LinkStrand { comp, g, sign })
    };
    let mut levels: Vec<Vec<LinkStrand>> = vec![vec![]];
    let mut slices = Vec::new();
    for (line, text) in body {
        let cur = levels.last().expect("nonempty").clone();
        let mut next = Vec::new();
        let mut pieces = Vec::new();
        let mut b = 0;
        let take = |b: &mut usize, n: usize| -> Result<Vec<LinkStrand>, SurgeryError> {
            if *b + n > cur.len() {
                return Err(perr(line, "piece consumes more strands than the level has".into()));
            }
            let s = cur[*b..*b + n].to_vec();
            *b += n;
            Ok(s)
        };
        let arc_is = |s: &LinkStrand, id: &str| -> Result<(), SurgeryError> {
            let want = strand(line, id, s.sign)?;
            if want == *s {
                Ok(())
            } else {
                Err(perr(line, format!("arc {id} does not continue the strand below")))
            }
        };
        for tok in text.split_whitespace() {
            let (name, rest) = tok.split_once('(').ok_or_else(|| perr(line, format!("bad piece {tok}")))?;
            let inner = rest.strip_suffix(')').ok_or_else(|| perr(line, format!("bad piece {tok}")))?;
            let args = parse_arg_list(inner);
            let nargs = if name.starts_with("cross") { 3 } else { 1 };
            if args.len() != nargs {
                return Err(perr(line, format!("{name} takes {nargs} arcs")));
            }
            match name {
                "id" => {
                    let s = take(&mut b, 1)?;
                    arc_is(&s[0], &args[0])?;
                    next.push(s[0]);
                    pieces.push(LinkPiece::Id);
                }
                "cupR" | "cupL" => {
                    let first = if name == "cupR" { Sign::Plus } else { Sign::Minus };
                    next.push(strand(line, &args[0], first)?);
                    next.push(strand(line, &args[0], first.flip())?);
                    pieces.push(if name == "cupR" { LinkPiece::CupR } else { LinkPiece::CupL });
                }
                "capR" | "capL" => {
                    let s = take(&mut b, 2)?;
                    arc_is(&s[0], &args[0])?;
                    arc_is(&s[1], &args[0])?;
                    pieces.push(if name == "capR" { LinkPiece::CapR } else { LinkPiece::CapL });
                }
                "crossP" | "crossN" => {
                    let s = take(&mut b, 2)?;
                    arc_is(&s[0], &args[0])?;
                    arc_is(&s[1], &args[1])?;
                    if name == "crossP" {
                        next.push(s[1]);
                        next.push(strand(line, &args[2], s[0].sign)?);
                        pieces.push(LinkPiece::Cross(Geometry::P));
                    } else {
                        next.push(strand(line, &args[2], s[1].sign)?);
                        next.push(s[0]);
                        pieces.push(LinkPiece::Cross(Geometry::N));
                    }
                }
                _ => return Err(perr(line, format!("unknown piece {name}"))),
            }
        }
        if b != cur.len() {
            return Err(perr(line, "slice leaves strands unconsumed".into()));
        }
        levels.push(next);
        slices.push(pieces);
    }
    if !levels.last().expect("nonempty").is_empty() {
        return Err(SurgeryError::Structure("dangling strand at the top".into()));
    }
    GLinkPresentation::new(levels, slices)
}

// ---------------------------------------------------------------- linking data

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkingData {
    pub matrix: Vec<Vec<i64>>,
    pub sigma: i64,
    pub sigma_plus: usize,
    pub sigma_minus: usize,
    pub num_components: usize,
}

/// Linking matrix (writhes on the diagonal) and its signature.
pub fn linking_data(link: &GLinkPresentation) -> LinkingData {
    let n = link.num_components;
    let mut twice = vec![vec![0i64; n]; n];
    for (k, b, geom) in link.crossings() {
        let (x, y) = (link.levels[k][b], link.levels[k][b + 1]);
        let s = crossing_sign(geom, x.sign, y.sign);
        if x.comp == y.comp {
            twice[x.comp][x.comp] += 2 * s;
        } else {
            twice[x.comp][y.comp] += s;
            twice[y.comp][x.comp] += s;
        }
    }
    let matrix: Vec<Vec<i64>> = twice.iter().map(|row| row.iter().map(|v| v / 2).collect()).collect();
    let (p, m) = inertia(&matrix);
    LinkingData { sigma: p as i64 - m as i64, sigma_plus: p, sigma_minus: m, matrix, num_components: n }
}

/// Numbers of positive and negative pivots of a symmetric integer matrix,
/// by congruence elimination over the rationals.
pub fn inertia(m: &[Vec<i64>]) -> (usize, usize) {
    let mut a: Vec<Vec<BigRational>> =
        m.iter().map(|row| row.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect()).collect();
    let (mut pos, mut neg) = (0, 0);
    while !a.is_empty() {
        let n = a.len();
        let pivot = (0..n).find(|&i| !a[i][i].is_zero());
        let i = match pivot {
            Some(i) => i,
            None => match (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero()) {
                // row i += row j, col i += col j makes a[i][i] = 2a[i][j]
                Some((i, j)) => {
                    for k in 0..n {
                        let v = a[j][k].clone();
                        a[i][k] += v;
                    }
                    for k in 0..n {
                        let v = a[k][j].clone();
                        a[k][i] += v;
                    }
                    i
                }
                None => break,
            },
        };
        let p = a[i][i].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        let mut rest = Vec::with_capacity(n - 1);
        for r in (0..n).filter(|&r| r != i) {
            let f = &a[r][i] / &p;
            let row: Vec<BigRational> = (0..n).filter(|&k| k != i).map(|k| &a[r][k] - &f * &a[i][k]).collect();
            rest.push(row);
        }
        a = rest;
    }
    (pos, neg)
}

// ---------------------------------------------------------------- coloring

/// Label at every strand position of the components, propagated from the
/// base label at each coupon site.
fn propagate_labels(
    link: &GLinkPresentation,
    frame: &Frame,
    sites: &[(usize, usize)],
    base: &[usize],
    c: &CategoryData,
) -> Result<Vec<Vec<usize>>, SurgeryError> {
    let g = &c.group;
    let mut labels: Vec<Vec<usize>> = link.levels.iter().map(|l| vec![usize::MAX; l.len()]).collect();
    for (r, (&(k, p), &x)) in sites.iter().zip(base).enumerate() {
        if c.grade(x) != link.levels[k][p].g {
            return Err(SurgeryError::GradeMismatch(r));
        }
        labels[k][p] = x;
        let (mut lv, mut pos, mut down) = (k, p, true);
        let mut cur = x;
        loop {
            let st = frame.step(lv, pos, down);
            if st.split {
                let lo = &link.levels[st.slice];
                let b0 = frame.bottom[st.slice].iter().position(|y| y.0 == st.piece).expect("bottom");
                let (a, b) = (lo[b0], lo[b0 + 1]);
                let geom = if let LinkPiece::Cross(geom) = link.slices[st.slice][st.piece] { geom } else { unreachable!() };
                // upward passage applies the crossing action, downward undoes it
                let beta = match geom {
                    Geometry::P => b.object_g(c),
                    Geometry::N => g.inv(a.object_g(c)),
                };
                cur = if st.downward { c.act(g.inv(beta), cur) } else { c.act(beta, cur) };
            }
            (lv, pos, down) = (st.level, st.pos, st.down);
            if (lv, pos) == (k, p) {
                if cur != x {
                    return Err(SurgeryError::NotSpecial(format!("component {r} does not close up")));
                }
                break;
            }
            labels[lv][pos] = cur;
        }
    }
    Ok(labels)
}

fn piece_shape(p: &Piece) -> Shape {
    match p {
        Piece::Id(_) | Piece::Coupon { .. } => Shape::Id,
        Piece::CupRight(_) | Piece::CupLeft(_) => Shape::Cup,
        Piece::CapRight(_) | Piece::CapLeft(_) => Shape::Cap,
        Piece::CrossPos { .. } => Shape::P,
        Piece::CrossNeg { .. } => Shape::N,
    }
}

/// Transport isomorphism around a component, read from the coupon at
/// `(slice, pos)` along the orientation back to the coupon's top.
fn coupon_transport(slices: &[Vec<Piece>], frame: &Frame, slice: usize, pos: usize, c: &CategoryData) -> Result<CycNumber, SurgeryError> {
    let g = &c.group;
    let x0 = match &slices[slice][frame.bottom[slice][pos].0] {
        Piece::Coupon { inputs, .. } => inputs[0].label,
        _ => unreachable!("coupon site"),
    };
    let mut tau = c.p0(x0).clone();
    let mut h = g.unit();
    let (mut lv, mut pos_, mut down) = (slice, pos, true);
    loop {
        let st = frame.step(lv, pos_, down);
        if st.split {
            assert!(st.downward, "color change traversed against the orientation");
            let (nu, w) = match &slices[st.slice][st.piece] {
                Piece::CrossPos { x, y, psi, .. } => {
                    let b = c.grade(*y);
                    (b, c.psi_bar(b, *x, psi))
                }
                Piece::CrossNeg { x, psi, .. } => (g.inv(c.grade(*x)), psi.clone()),
                _ => unreachable!(),
            };
            let nu_inv = g.inv(nu);
            tau = c.p2(nu_inv, h, x0) * tau * w;
            h = g.mul(h, nu_inv);
        }
        (lv, pos_, down) = (st.level, st.pos, st.down);
        if (lv, pos_) == (slice + 1, pos) {
            break;
        }
    }
    if h != g.unit() {
        return Err(SurgeryError::NotSpecial(format!("longitude {} at coupon", g.name(h))));
    }
    Ok(c.p0(x0) / tau)
}

/// Colored diagram of the link with one coupon per component at `sites`,
/// base labels `base`, unit crossing colors and coupon colors fixed by the
/// transport around each component.
pub fn canonical_coloring_at(
    link: &GLinkPresentation,
    base: &[usize],
    sites: &[(usize, usize)],
    c: &CategoryData,
) -> Result<ColoredDiagram, SurgeryError> {
    if base.len() != link.num_components || sites.len() != link.num_components {
        return Err(SurgeryError::Structure("one base label and one site per component".into()));
    }
    for (r, &(k, p)) in sites.iter().enumerate() {
        let s = link.levels.get(k).and_then(|l| l.get(p));
        if !matches!(s, Some(s) if s.comp == r && s.sign == Sign::Plus) {
            return Err(SurgeryError::IllegalSite(format!("component {r} at level {k}, position {p}")));
        }
    }
    let frame = link.frame();
    let labels = propagate_labels(link, &frame, sites, base, c)?;
    let strand = |k: usize, p: usize| Strand { label: labels[k][p], sign: link.levels[k][p].sign };
    let mut slices: Vec<Vec<Piece>> = Vec::new();
    let mut level_at = vec![0usize; link.levels.len()];
    for (k, s) in link.slices.iter().enumerate() {
        level_at[k] = slices.len();
        let mut block = ColoredDiagram::identity(vec![]);
        let mut b = 0;
        let mut t = 0;
        for &p in s {
            let d = match p {
                LinkPiece::Id => ColoredDiagram::identity(vec![strand(k, b)]),
                LinkPiece::CupR => cap_or_cup(Piece::CupRight(labels[k + 1][t])),
                LinkPiece::CupL => cap_or_cup(Piece::CupLeft(labels[k + 1][t])),
                LinkPiece::CapR => cap_or_cup_from(strand(k, b), strand(k, b + 1), Piece::CapRight(labels[k][b])),
                LinkPiece::CapL => cap_or_cup_from(strand(k, b), strand(k, b + 1), Piece::CapLeft(labels[k][b])),
                LinkPiece::Cross(geom) => crossing(c, geom, strand(k, b), strand(k, b + 1), c.one()),
            };
            block = ColoredDiagram::tensor(&block, &d);
            b += piece_source(p);
            t += p.shape().tgt();
        }
        if block.num_slices() == 0 {
            slices.push(ColoredDiagram::identity_slice(block.source()));
        } else {
            slices.extend(block.slices().iter().cloned());
        }
    }
    level_at[link.slices.len()] = slices.len();
    // coupon slices, highest level first so lower indices stay put
    let mut by_level: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (r, &(k, p)) in sites.iter().enumerate() {
        by_level.entry(k).or_default().push((p, r));
    }
    let mut coupon_at = vec![(0usize, 0usize); sites.len()];
    let mut inserted = 0;
    for (&k, list) in &by_level {
        let lv = level_at[k] + inserted;
        let mut slice: Vec<Piece> = link.levels[k].iter().enumerate().map(|(p, _)| Piece::Id(strand(k, p))).collect();
        for &(p, r) in list {
            let s = strand(k, p);
            slice[p] = Piece::Coupon { inputs: vec![s], outputs: vec![s], value: c.one() };
            coupon_at[r] = (lv, p);
        }
        slices.insert(lv, slice);
        inserted += 1;
    }
    let frame = Frame::new(slices.iter().map(|s| s.iter().map(piece_shape).collect()).collect());
    for &(lv, p) in &coupon_at {
        let v = coupon_transport(&slices, &frame, lv, p, c)?;
        if let Piece::Coupon { value, .. } = &mut slices[lv][p] {
            *value = v;
        }
    }
    ColoredDiagram::new(vec![], slices).map_err(|e| SurgeryError::Structure(e.to_string()))
}

fn cap_or_cup(p: Piece) -> ColoredDiagram {
    ColoredDiagram::new(vec![], vec![vec![p]]).expect("cup")
}

fn cap_or_cup_from(a: Strand, b: Strand, p: Piece) -> ColoredDiagram {
    ColoredDiagram::new(vec![a, b], vec![vec![p]]).expect("cap matches its strands")
}

/// Canonical coloring with coupons at the default sites.
pub fn canonical_coloring(link: &GLinkPresentation, base: &[usize], c: &CategoryData) -> Result<ColoredDiagram, SurgeryError> {
    canonical_coloring_at(link, base, &link.default_sites(), c)
}

/// Every base-label tuple with its term Π d(x_r) · F(colored diagram), in
/// lexicographic tuple order.
pub fn link_form_terms(link: &GLinkPresentation, sites: &[(usize, usize)], c: &CategoryData) -> Result<Vec<(Vec<usize>, CycNumber)>, SurgeryError> {
    require_special(link, c)?;
    let choices: Vec<Vec<usize>> = sites.iter().map(|&(k, p)| c.labels_of_grade(link.levels[k][p].g)).collect();
    let mut tuples = vec![vec![]];
    for ch in &choices {
        tuples = tuples.into_iter().flat_map(|t: Vec<usize>| ch.iter().map(move |&x| [t.clone(), vec![x]].concat())).collect();
    }
    tuples
        .into_par_iter()
        .map(|base| {
            let d = canonical_coloring_at(link, &base, sites, c)?;
            let weight = base.iter().fold(c.one(), |acc, &x| acc * c.d(x));
            let v = weight * evaluate_unchecked(&d, c).value;
            Ok((base, v))
        })
        .collect()
}

/// F(ℓ, g, ω) with coupons at the given sites.
pub fn link_form_at(link: &GLinkPresentation, sites: &[(usize, usize)], c: &CategoryData) -> Result<CycNumber, SurgeryError> {
    let terms = link_form_terms(link, sites, c)?;
    Ok(terms.into_iter().fold(c.zero(), |acc, (_, v)| acc + v))
}

/// F(ℓ, g, ω).
pub fn link_form(link: &GLinkPresentation, c: &CategoryData) -> Result<CycNumber, SurgeryError> {
    link_form_at(link, &link.default_sites(), c)
}

#[derive(Debug, Clone, Serialize)]
pub struct SurgeryInvariantReport {
    #[serde(serialize_with = "as_string")]
    pub f_value: CycNumber,
    #[serde(serialize_with = "as_string")]
    pub tau: CycNumber,
    pub sigma: i64,
    pub num_components: usize,
    pub linking_matrix: Vec<Vec<i64>>,
    /// (base labels, term) per coloring, when requested
    #[serde(skip)]
    pub terms: Option<Vec<(Vec<usize>, CycNumber)>>,
}

fn as_string<S: serde::Serializer>(v: &CycNumber, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// τ = Δ₋^σ · 𝒟^{−σ−#ℓ−1} · F(ℓ, g, ω).
pub fn tau(link: &GLinkPresentation, c: &CategoryData) -> Result<SurgeryInvariantReport, SurgeryError> {
    tau_at(link, &link.default_sites(), c, false)
}

pub fn tau_at(link: &GLinkPresentation, sites: &[(usize, usize)], c: &CategoryData, keep_terms: bool) -> Result<SurgeryInvariantReport, SurgeryError> {
    if c.rank().is_zero() {
        return Err(SurgeryError::MissingRank);
    }
    let terms = link_form_terms(link, sites, c)?;
    let f_value = terms.iter().fold(c.zero(), |acc, (_, v)| acc + v);
    let data = linking_data(link);
    let (_, delta_minus) = crate::fusion::gauss_sums(c);
    let n = link.num_components as i64;
    let tau = delta_minus.pow(data.sigma) * c.rank().pow(-data.sigma - n - 1) * &f_value;
    Ok(SurgeryInvariantReport {
        f_value,
        tau,
        sigma: data.sigma,
        num_components: link.num_components,
        linking_matrix: data.matrix,
        terms: keep_terms.then_some(terms),
    })
}

// ---------------------------------------------------------------- Verlinde

/// Number of tuples (J_i) with grade(J_i) = β_i and Π φ_{α_i}(J_i*)·J_i = 1.
pub fn verlinde_rank(c: &CategoryData, alphas: &[usize], betas: &[usize]) -> Result<u64, SurgeryError> {
    let (g, l) = (&c.group, &c.labels);
    if alphas.len() != betas.len() {
        return Err(SurgeryError::Relation("alpha and beta lists differ in length".into()));
    }
    let rel = alphas.iter().zip(betas).fold(g.unit(), |acc, (&a, &b)| {
        let comm = g.product([g.inv(a), g.inv(b), a, b]);
        g.mul(acc, comm)
    });
    if rel != g.unit() {
        return Err(SurgeryError::Relation("product of commutators is not 1".into()));
    }
    let choices: Vec<Vec<usize>> = betas.iter().map(|&b| c.labels_of_grade(b)).collect();
    let mut count = 0u64;
    let mut idx = vec![0usize; choices.len()];
    if choices.iter().any(|ch| ch.is_empty()) {
        return Ok(0);
    }
    loop {
        let prod = idx.iter().zip(&choices).zip(alphas).fold(l.unit(), |acc, ((&i, ch), &a)| {
            let j = ch[i];
            l.mul(l.mul(acc, c.act(a, l.inv(j))), j)
        });
        if prod == l.unit() {
            count += 1;
        }
        let mut r = choices.len();
        loop {
            if r == 0 {
                return Ok(count);
            }
            r -= 1;
            idx[r] += 1;
            if idx[r] < choices[r].len() {
                break;
            }
            idx[r] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inertia_of_small_forms() {
        assert_eq!(inertia(&[]), (0, 0));
        assert_eq!(inertia(&[vec![0]]), (0, 0));
        assert_eq!(inertia(&[vec![-3]]), (0, 1));
        assert_eq!(inertia(&[vec![0, 1], vec![1, 0]]), (1, 1));
        assert_eq!(inertia(&[vec![2, 1], vec![1, 2]]), (2, 0));
        assert_eq!(inertia(&[vec![1, 2], vec![2, 1]]), (1, 1));
        assert_eq!(inertia(&[vec![0, 0, 1], vec![0, 0, 0], vec![1, 0, 0]]), (1, 1));
    }

    #[test]
    fn empty_link_has_no_components() {
        let l = GLinkPresentation::empty();
        assert_eq!(l.num_components(), 0);
        assert_eq!(linking_data(&l).sigma, 0);
    }
}
