//! Colored diagrams as words of slices of elementary pieces.
//!
//! Slices are read bottom to top; the source sits at the bottom. A strand
//! with sign `+` runs downward and stands for its color X, a `-` strand runs
//! upward and stands for X*. Crossings only ever join two downward strands;
//! crossings with upward strands are built from them with caps and cups.

use crate::category::CategoryData;
use crate::report::AxiomReport;
use crate::scalars::CycNumber;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Strand {
    pub label: usize,
    pub sign: Sign,
}

impl Strand {
    pub fn plus(label: usize) -> Strand {
        Strand { label, sign: Sign::Plus }
    }

    pub fn minus(label: usize) -> Strand {
        Strand { label, sign: Sign::Minus }
    }

    /// Label of the object X or X* this strand stands for.
    pub fn object_label(&self, c: &CategoryData) -> usize {
        match self.sign {
            Sign::Plus => self.label,
            Sign::Minus => c.labels.inv(self.label),
        }
    }

    pub fn object_grade(&self, c: &CategoryData) -> usize {
        c.grade(self.object_label(c))
    }
}

pub type BoundaryObject = Vec<Strand>;

/// The dual object: signs flipped, order reversed.
pub fn dual_object(obj: &[Strand]) -> BoundaryObject {
    obj.iter().rev().map(|s| Strand { label: s.label, sign: s.sign.flip() }).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    Id(Strand),
    /// ev: ((x,-),(x,+)) → ∅
    CapRight(usize),
    /// coev: ∅ → ((x,+),(x,-))
    CupRight(usize),
    /// ẽv: ((x,+),(x,-)) → ∅
    CapLeft(usize),
    /// c̃oev: ∅ → ((x,-),(x,+))
    CupLeft(usize),
    /// σ₊: ((x,+),(y,+)) → ((y,+),(out,+)), out = φ_{|y|}(x); ψ: out → φ_{|y|}(x)
    CrossPos { x: usize, y: usize, out: usize, psi: CycNumber },
    /// σ₋: ((x,+),(y,+)) → ((out,+),(x,+)), y = φ_{|x|}(out); ψ: y → φ_{|x|}(out)
    CrossNeg { x: usize, y: usize, out: usize, psi: CycNumber },
    Coupon { inputs: Vec<Strand>, outputs: Vec<Strand>, value: CycNumber },
}

impl Piece {
    pub fn cross_pos(c: &CategoryData, x: usize, y: usize, psi: CycNumber) -> Piece {
        Piece::CrossPos { x, y, out: c.act(c.grade(y), x), psi }
    }

    pub fn cross_neg(c: &CategoryData, x: usize, y: usize, psi: CycNumber) -> Piece {
        let out = c.act(c.group.inv(c.grade(x)), y);
        Piece::CrossNeg { x, y, out, psi }
    }

    pub fn source(&self) -> Vec<Strand> {
        match self {
            Piece::Id(s) => vec![*s],
            Piece::CapRight(x) => vec![Strand::minus(*x), Strand::plus(*x)],
            Piece::CapLeft(x) => vec![Strand::plus(*x), Strand::minus(*x)],
            Piece::CupRight(_) | Piece::CupLeft(_) => vec![],
            Piece::CrossPos { x, y, .. } | Piece::CrossNeg { x, y, .. } => vec![Strand::plus(*x), Strand::plus(*y)],
            Piece::Coupon { inputs, .. } => inputs.clone(),
        }
    }

    pub fn target(&self) -> Vec<Strand> {
        match self {
            Piece::Id(s) => vec![*s],
            Piece::CapRight(_) | Piece::CapLeft(_) => vec![],
            Piece::CupRight(x) => vec![Strand::plus(*x), Strand::minus(*x)],
            Piece::CupLeft(x) => vec![Strand::minus(*x), Strand::plus(*x)],
            Piece::CrossPos { y, out, .. } => vec![Strand::plus(*y), Strand::plus(*out)],
            Piece::CrossNeg { x, out, .. } => vec![Strand::plus(*out), Strand::plus(*x)],
            Piece::Coupon { outputs, .. } => outputs.clone(),
        }
    }

    pub fn source_len(&self) -> usize {
        match self {
            Piece::Id(_) => 1,
            Piece::CapRight(_) | Piece::CapLeft(_) | Piece::CrossPos { .. } | Piece::CrossNeg { .. } => 2,
            Piece::CupRight(_) | Piece::CupLeft(_) => 0,
            Piece::Coupon { inputs, .. } => inputs.len(),
        }
    }

    pub fn is_id(&self) -> bool {
        matches!(self, Piece::Id(_))
    }

    pub fn is_crossing(&self) -> bool {
        matches!(self, Piece::CrossPos { .. } | Piece::CrossNeg { .. })
    }

    pub fn psi(&self) -> Option<&CycNumber> {
        match self {
            Piece::CrossPos { psi, .. } | Piece::CrossNeg { psi, .. } => Some(psi),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("boundary mismatch at slice {slice}, position {position}: expected {expected}, found {found}")]
    BoundaryMismatch { slice: usize, position: usize, expected: String, found: String },
    #[error("zero scalar in {0}")]
    ZeroScalar(String),
    #[error("grade mismatch: {0}")]
    GradeMismatch(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("pattern mismatch: {0}")]
    Pattern(String),
    #[error("side condition violated: {equation}: {lhs} != {rhs}")]
    SideCondition { equation: String, lhs: String, rhs: String },
}

fn strand_text(s: Option<&Strand>) -> String {
    match s {
        Some(s) => format!("({}, {})", s.label, s.sign.symbol()),
        None => "nothing".into(),
    }
}

fn first_difference(slice: usize, expected: &[Strand], found: &[Strand]) -> Option<DiagramError> {
    let n = expected.len().max(found.len());
    (0..n).find(|&i| expected.get(i) != found.get(i)).map(|i| DiagramError::BoundaryMismatch {
        slice,
        position: i,
        expected: strand_text(expected.get(i)),
        found: strand_text(found.get(i)),
    })
}

/// A sliced diagram word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredDiagram {
    source: BoundaryObject,
    slices: Vec<Vec<Piece>>,
}

fn slice_source(slice: &[Piece]) -> Vec<Strand> {
    slice.iter().flat_map(|p| p.source()).collect()
}

fn slice_target(slice: &[Piece]) -> Vec<Strand> {
    slice.iter().flat_map(|p| p.target()).collect()
}

impl ColoredDiagram {
    /// Checks that consecutive slices chain and returns the diagram.
    pub fn new(source: BoundaryObject, slices: Vec<Vec<Piece>>) -> Result<ColoredDiagram, DiagramError> {
        let mut cur = source.clone();
        for (k, s) in slices.iter().enumerate() {
            let src = slice_source(s);
            if let Some(e) = first_difference(k, &cur, &src) {
                return Err(e);
            }
            cur = slice_target(s);
        }
        Ok(ColoredDiagram { source, slices })
    }

    /// Identity with no slices.
    pub fn identity(obj: BoundaryObject) -> ColoredDiagram {
        ColoredDiagram { source: obj, slices: Vec::new() }
    }

    /// Identity drawn as one slice of Id pieces.
    pub fn identity_slice(obj: &[Strand]) -> Vec<Piece> {
        obj.iter().map(|s| Piece::Id(*s)).collect()
    }

    pub fn elementary(c: &CategoryData, piece: Piece) -> Result<ColoredDiagram, DiagramError> {
        if let Some(psi) = piece.psi() {
            if psi.is_zero() {
                return Err(DiagramError::ZeroScalar("crossing color".into()));
            }
        }
        match &piece {
            Piece::CrossPos { x, y, out, .. } if *out != c.act(c.grade(*y), *x) => {
                return Err(DiagramError::GradeMismatch("positive crossing output label".into()))
            }
            Piece::CrossNeg { x, y, out, .. } if *y != c.act(c.grade(*x), *out) => {
                return Err(DiagramError::GradeMismatch("negative crossing output label".into()))
            }
            Piece::Coupon { inputs, outputs, value } => {
                if value.is_zero() {
                    return Err(DiagramError::ZeroScalar("coupon".into()));
                }
                coupon_typing(c, inputs, outputs).map_err(DiagramError::GradeMismatch)?;
            }
            _ => {}
        }
        let src = piece.source();
        Ok(ColoredDiagram { source: src, slices: vec![vec![piece]] })
    }

    pub fn source(&self) -> &BoundaryObject {
        &self.source
    }

    pub fn target(&self) -> BoundaryObject {
        match self.slices.last() {
            Some(s) => slice_target(s),
            None => self.source.clone(),
        }
    }

    pub fn slices(&self) -> &[Vec<Piece>] {
        &self.slices
    }

    pub fn num_slices(&self) -> usize {
        self.slices.len()
    }

    /// Boundary object at every level: `levels()[k]` is the source of slice k.
    pub fn levels(&self) -> Vec<BoundaryObject> {
        let mut out = vec![self.source.clone()];
        for s in &self.slices {
            out.push(slice_target(s));
        }
        out
    }

    pub fn pieces(&self) -> impl Iterator<Item = &Piece> {
        self.slices.iter().flatten()
    }

    /// `top ∘ bottom`: glue `top` above `bottom`.
    pub fn compose(top: &ColoredDiagram, bottom: &ColoredDiagram) -> Result<ColoredDiagram, DiagramError> {
        let t = bottom.target();
        if let Some(e) = first_difference(bottom.slices.len(), &top.source, &t) {
            return Err(e);
        }
        let mut slices = bottom.slices.clone();
        slices.extend(top.slices.iter().cloned());
        Ok(ColoredDiagram { source: bottom.source.clone(), slices })
    }

    /// Places `right` to the right of `left`, padding the shorter word with identities.
    pub fn tensor(left: &ColoredDiagram, right: &ColoredDiagram) -> ColoredDiagram {
        let n = left.slices.len().max(right.slices.len());
        let (lt, rt) = (left.target(), right.target());
        let mut slices = Vec::with_capacity(n);
        for k in 0..n {
            let mut s = match left.slices.get(k) {
                Some(s) => s.clone(),
                None => ColoredDiagram::identity_slice(&lt),
            };
            match right.slices.get(k) {
                Some(r) => s.extend(r.iter().cloned()),
                None => s.extend(ColoredDiagram::identity_slice(&rt)),
            }
            slices.push(s);
        }
        let mut source = left.source.clone();
        source.extend(right.source.iter().copied());
        ColoredDiagram { source, slices }
    }

    /// `id(left) ⊗ self ⊗ id(right)`.
    pub fn embed(&self, left: &[Strand], right: &[Strand]) -> ColoredDiagram {
        let l = ColoredDiagram::identity(left.to_vec());
        let r = ColoredDiagram::identity(right.to_vec());
        ColoredDiagram::tensor(&ColoredDiagram::tensor(&l, self), &r)
    }

    /// Normal form with exactly one non-identity piece per slice.
    pub fn sparse(&self) -> ColoredDiagram {
        let mut out = Vec::new();
        for s in &self.slices {
            let active: Vec<usize> = (0..s.len()).filter(|&i| !s[i].is_id()).collect();
            for &i in &active {
                let mut slice = Vec::new();
                for (j, p) in s.iter().enumerate() {
                    if j == i {
                        slice.push(p.clone());
                    } else if j < i {
                        slice.extend(p.target().into_iter().map(Piece::Id));
                    } else {
                        slice.extend(p.source().into_iter().map(Piece::Id));
                    }
                }
                out.push(slice);
            }
        }
        ColoredDiagram { source: self.source.clone(), slices: out }
    }

    /// For a sparse slice: the position of its active piece in the slice source.
    pub fn active_piece(slice: &[Piece]) -> Option<(usize, &Piece)> {
        let mut pos = 0;
        for p in slice {
            if !p.is_id() {
                return Some((pos, p));
            }
            pos += p.source_len();
        }
        None
    }

    /// Replaces slices `range` by `with`; the boundaries must agree.
    pub fn splice(&self, range: std::ops::Range<usize>, with: Vec<Vec<Piece>>) -> Result<ColoredDiagram, DiagramError> {
        let mut slices = self.slices[..range.start].to_vec();
        slices.extend(with);
        slices.extend(self.slices[range.end..].iter().cloned());
        ColoredDiagram::new(self.source.clone(), slices)
    }

    /// Maps every scalar and label through the given functions.
    pub fn map_pieces(&self, f: &dyn Fn(&Piece) -> Piece, src: &dyn Fn(&Strand) -> Strand) -> ColoredDiagram {
        ColoredDiagram {
            source: self.source.iter().map(src).collect(),
            slices: self.slices.iter().map(|s| s.iter().map(f).collect()).collect(),
        }
    }
}

/// Grade and label typing of a coupon.
pub fn coupon_typing(c: &CategoryData, inputs: &[Strand], outputs: &[Strand]) -> Result<(), String> {
    let g = &c.group;
    let gin = g.product(inputs.iter().map(|s| s.object_grade(c)));
    let gout = g.product(outputs.iter().map(|s| s.object_grade(c)));
    if gin != gout {
        return Err(format!("coupon grade products differ: {} vs {}", g.name(gin), g.name(gout)));
    }
    let lin = c.labels.product(inputs.iter().map(|s| s.object_label(c)));
    let lout = c.labels.product(outputs.iter().map(|s| s.object_label(c)));
    if lin != lout {
        return Err(format!(
            "coupon hom space is zero: label products {} vs {}",
            c.labels.name(lin),
            c.labels.name(lout)
        ));
    }
    Ok(())
}

/// Checks every crossing relation, coupon typing and nonzero colors.
pub fn validate_coloring(d: &ColoredDiagram, c: &CategoryData) -> AxiomReport {
    let mut r = AxiomReport::new();
    let mut cur = d.source.clone();
    for (k, s) in d.slices.iter().enumerate() {
        let src = slice_source(s);
        r.holds("slice chaining", cur == src, || format!("slice={k}"));
        cur = slice_target(s);
        for (i, p) in s.iter().enumerate() {
            let inst = || format!("slice={k},piece={i}");
            match p {
                Piece::CrossPos { x, y, out, psi } => {
                    r.holds("crossing color relation", *out == c.act(c.grade(*y), *x), inst);
                    r.holds("nonzero crossing color", !psi.is_zero(), inst);
                }
                Piece::CrossNeg { x, y, out, psi } => {
                    r.holds("crossing color relation", *y == c.act(c.grade(*x), *out), inst);
                    r.holds("nonzero crossing color", !psi.is_zero(), inst);
                }
                Piece::Coupon { inputs, outputs, value } => {
                    let typing = coupon_typing(c, inputs, outputs);
                    r.holds("coupon typing", typing.is_ok(), || format!("{} ({})", inst(), typing.clone().err().unwrap_or_default()));
                    r.holds("nonzero coupon color", !value.is_zero(), inst);
                }
                _ => {}
            }
        }
    }
    r
}

/// Crossing geometry: which downward-strand crossing it reduces to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Geometry {
    /// bottom-left strand passes to top-right and changes color
    P,
    /// bottom-right strand passes to top-left and changes color
    N,
}

/// Output strands of a crossing of the given geometry.
pub fn crossing_outputs(c: &CategoryData, geom: Geometry, a: Strand, b: Strand) -> (Strand, Strand) {
    let g = &c.group;
    match geom {
        Geometry::P => {
            // top = (b, φ_{|b|}(a)) on objects
            let beta = b.object_grade(c);
            let obj = c.act(beta, a.object_label(c));
            let label = if a.sign == Sign::Plus { obj } else { c.labels.inv(obj) };
            (b, Strand { label, sign: a.sign })
        }
        Geometry::N => {
            // top = (φ_{|a|^{-1}}(b), a) on objects
            let alpha = g.inv(a.object_grade(c));
            let obj = c.act(alpha, b.object_label(c));
            let label = if b.sign == Sign::Plus { obj } else { c.labels.inv(obj) };
            (Strand { label, sign: b.sign }, a)
        }
    }
}

/// Sign of a crossing from its geometry and the two strand orientations.
pub fn crossing_sign(geom: Geometry, a: Sign, b: Sign) -> i64 {
    let s = a.as_i64() * b.as_i64();
    match geom {
        Geometry::P => s,
        Geometry::N => -s,
    }
}

fn build(source: Vec<Strand>, slices: Vec<Vec<Piece>>) -> ColoredDiagram {
    ColoredDiagram::new(source, slices).expect("macro construction is well typed")
}

/// A crossing of two strands of any orientation, expanded into elementary
/// pieces. `psi` colors the single downward crossing inside.
pub fn crossing(c: &CategoryData, geom: Geometry, a: Strand, b: Strand, psi: CycNumber) -> ColoredDiagram {
    use Piece::*;
    use Sign::*;
    let g = &c.group;
    let (x, y) = (a.label, b.label);
    let (gx, gy) = (c.grade(x), c.grade(y));
    let id = |s: Strand| Id(s);
    let (p, m) = (Strand::plus, Strand::minus);
    match (geom, a.sign, b.sign) {
        (Geometry::P, Plus, Plus) => build(vec![a, b], vec![vec![Piece::cross_pos(c, x, y, psi)]]),
        (Geometry::P, Plus, Minus) => {
            let xp = c.act(g.inv(gy), x);
            build(
                vec![a, b],
                vec![
                    vec![CupLeft(y), id(p(x)), id(m(y))],
                    vec![id(m(y)), CrossNeg { x: y, y: x, out: xp, psi }, id(m(y))],
                    vec![id(m(y)), id(p(xp)), CapLeft(y)],
                ],
            )
        }
        (Geometry::P, Minus, Plus) => {
            let xp = c.act(gy, x);
            build(
                vec![a, b],
                vec![
                    vec![id(m(x)), id(p(y)), CupRight(xp)],
                    vec![id(m(x)), CrossNeg { x: y, y: xp, out: x, psi }, id(m(xp))],
                    vec![CapRight(x), id(p(y)), id(m(xp))],
                ],
            )
        }
        (Geometry::P, Minus, Minus) => {
            let xp = c.act(g.inv(gy), x);
            build(
                vec![a, b],
                vec![
                    vec![id(m(x)), id(m(y)), CupRight(xp)],
                    vec![id(m(x)), id(m(y)), id(p(xp)), CupRight(y), id(m(xp))],
                    vec![id(m(x)), id(m(y)), CrossPos { x: xp, y, out: x, psi }, id(m(y)), id(m(xp))],
                    vec![id(m(x)), CapRight(y), id(p(x)), id(m(y)), id(m(xp))],
                    vec![CapRight(x), id(m(y)), id(m(xp))],
                ],
            )
        }
        (Geometry::N, Plus, Plus) => build(vec![a, b], vec![vec![Piece::cross_neg(c, x, y, psi)]]),
        (Geometry::N, Minus, Plus) => {
            let yp = c.act(gx, y);
            build(
                vec![a, b],
                vec![
                    vec![id(m(x)), id(p(y)), CupRight(x)],
                    vec![id(m(x)), CrossPos { x: y, y: x, out: yp, psi }, id(m(x))],
                    vec![CapRight(x), id(p(yp)), id(m(x))],
                ],
            )
        }
        (Geometry::N, Plus, Minus) => {
            let yp = c.act(g.inv(gx), y);
            build(
                vec![a, b],
                vec![
                    vec![CupLeft(yp), id(p(x)), id(m(y))],
                    vec![id(m(yp)), CrossPos { x: yp, y: x, out: y, psi }, id(m(y))],
                    vec![id(m(yp)), id(p(x)), CapLeft(y)],
                ],
            )
        }
        (Geometry::N, Minus, Minus) => {
            let yp = c.act(gx, y);
            build(
                vec![a, b],
                vec![
                    vec![id(m(x)), id(m(y)), CupRight(x)],
                    vec![id(m(x)), id(m(y)), id(p(x)), CupRight(yp), id(m(x))],
                    vec![id(m(x)), id(m(y)), CrossNeg { x, y: yp, out: y, psi }, id(m(yp)), id(m(x))],
                    vec![id(m(x)), CapRight(y), id(p(x)), id(m(yp)), id(m(x))],
                    vec![CapRight(x), id(m(yp)), id(m(x))],
                ],
            )
        }
    }
}

/// Number of slices in the sparse expansion of a crossing.
pub fn crossing_len(a: Sign, b: Sign) -> usize {
    match (a, b) {
        (Sign::Plus, Sign::Plus) => 1,
        (Sign::Minus, Sign::Minus) => 5,
        _ => 3,
    }
}

/// Which side of the strand a kink's loop sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KinkSide {
    /// cup and cap to the right (T±)
    Right,
    /// cup and cap to the left (T′±)
    Left,
}

/// Curl on a single strand; `positive` selects the crossing geometry with writhe +1.
pub fn kink(c: &CategoryData, s: Strand, positive: bool, side: KinkSide, psi: CycNumber) -> ColoredDiagram {
    let geom = if positive { Geometry::P } else { Geometry::N };
    let x = s.label;
    match (side, s.sign) {
        (KinkSide::Right, Sign::Plus) => {
            let cup = ColoredDiagram::new(vec![s], vec![vec![Piece::Id(s), Piece::CupRight(x)]]).unwrap();
            let cr = crossing(c, geom, s, Strand::plus(x), psi).embed(&[], &[Strand::minus(x)]);
            let cap = ColoredDiagram::new(cr.target(), vec![vec![Piece::Id(s), Piece::CapLeft(x)]]).unwrap();
            ColoredDiagram::compose(&cap, &ColoredDiagram::compose(&cr, &cup).unwrap()).unwrap()
        }
        (KinkSide::Left, Sign::Plus) => {
            let cup = ColoredDiagram::new(vec![s], vec![vec![Piece::CupLeft(x), Piece::Id(s)]]).unwrap();
            let cr = crossing(c, geom, Strand::plus(x), s, psi).embed(&[Strand::minus(x)], &[]);
            let cap = ColoredDiagram::new(cr.target(), vec![vec![Piece::CapRight(x), Piece::Id(s)]]).unwrap();
            ColoredDiagram::compose(&cap, &ColoredDiagram::compose(&cr, &cup).unwrap()).unwrap()
        }
        (KinkSide::Right, Sign::Minus) => {
            let cup = ColoredDiagram::new(vec![s], vec![vec![Piece::Id(s), Piece::CupLeft(x)]]).unwrap();
            let cr = crossing(c, geom, s, Strand::minus(x), psi).embed(&[], &[Strand::plus(x)]);
            let cap = ColoredDiagram::new(cr.target(), vec![vec![Piece::Id(s), Piece::CapRight(x)]]).unwrap();
            ColoredDiagram::compose(&cap, &ColoredDiagram::compose(&cr, &cup).unwrap()).unwrap()
        }
        (KinkSide::Left, Sign::Minus) => {
            let cup = ColoredDiagram::new(vec![s], vec![vec![Piece::CupRight(x), Piece::Id(s)]]).unwrap();
            let cr = crossing(c, geom, Strand::minus(x), s, psi).embed(&[Strand::plus(x)], &[]);
            let cap = ColoredDiagram::new(cr.target(), vec![vec![Piece::CapLeft(x), Piece::Id(s)]]).unwrap();
            ColoredDiagram::compose(&cap, &ColoredDiagram::compose(&cr, &cup).unwrap()).unwrap()
        }
    }
}

// ---------------------------------------------------------------- text format

fn strand_token(c: &CategoryData, s: &Strand) -> String {
    format!("{}{}", c.labels.name(s.label), s.sign.symbol())
}

fn piece_token(c: &CategoryData, p: &Piece) -> String {
    let l = |x: &usize| c.labels.name(*x).to_string();
    match p {
        Piece::Id(s) => format!("id({},{})", l(&s.label), s.sign.symbol()),
        Piece::CapRight(x) => format!("capR({})", l(x)),
        Piece::CupRight(x) => format!("cupR({})", l(x)),
        Piece::CapLeft(x) => format!("capL({})", l(x)),
        Piece::CupLeft(x) => format!("cupL({})", l(x)),
        Piece::CrossPos { x, y, out, psi } => {
            if *out == c.act(c.grade(*y), *x) {
                format!("crossP({},{};psi={})", l(x), l(y), psi)
            } else {
                format!("crossP({},{};out={};psi={})", l(x), l(y), l(out), psi)
            }
        }
        Piece::CrossNeg { x, y, out, psi } => {
            if *out == c.act(c.group.inv(c.grade(*x)), *y) {
                format!("crossN({},{};psi={})", l(x), l(y), psi)
            } else {
                format!("crossN({},{};out={};psi={})", l(x), l(y), l(out), psi)
            }
        }
        Piece::Coupon { inputs, outputs, value } => {
            let list = |v: &[Strand]| v.iter().map(|s| strand_token(c, s)).collect::<Vec<_>>().join(",");
            format!("coupon(in={};out={};v={})", list(inputs), list(outputs), value)
        }
    }
}

/// Canonical text form; `parse_diagram` reads it back exactly.
pub fn print_diagram(d: &ColoredDiagram, c: &CategoryData) -> String {
    let mut s = String::new();
    let src: Vec<String> = d.source.iter().map(|x| strand_token(c, x)).collect();
    let _ = writeln!(s, "source: {}", src.join(" "));
    for slice in &d.slices {
        if slice.is_empty() {
            s.push_str("empty\n");
        } else {
            let toks: Vec<String> = slice.iter().map(|p| piece_token(c, p)).collect();
            let _ = writeln!(s, "{}", toks.join(" "));
        }
    }
    s
}

fn split_top_level(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in line.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if ch.is_whitespace() && depth == 0 {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_strand(c: &CategoryData, tok: &str, line: usize) -> Result<Strand, DiagramError> {
    let err = |m: String| DiagramError::Parse { line, msg: m };
    let tok = tok.trim();
    let (name, sign) = if let Some(n) = tok.strip_suffix('+') {
        (n, Sign::Plus)
    } else if let Some(n) = tok.strip_suffix('-') {
        (n, Sign::Minus)
    } else {
        return Err(err(format!("strand `{tok}` needs a sign")));
    };
    let label = c.labels.index(name).ok_or_else(|| err(format!("unknown label `{name}`")))?;
    Ok(Strand { label, sign })
}

fn parse_piece(c: &CategoryData, tok: &str, line: usize) -> Result<Piece, DiagramError> {
    let err = |m: String| DiagramError::Parse { line, msg: m };
    let open = tok.find('(').ok_or_else(|| err(format!("bad piece `{tok}`")))?;
    if !tok.ends_with(')') {
        return Err(err(format!("bad piece `{tok}`")));
    }
    let head = &tok[..open];
    let body = &tok[open + 1..tok.len() - 1];
    let lab = |s: &str| c.labels.index(s.trim()).ok_or_else(|| err(format!("unknown label `{}`", s.trim())));
    let scalar = |s: &str| CycNumber::parse(s, c.root_order()).map_err(|e| err(e.to_string()));
    match head {
        "id" => {
            let (l, s) = body.split_once(',').ok_or_else(|| err("id needs label and sign".into()))?;
            let sign = match s.trim() {
                "+" => Sign::Plus,
                "-" => Sign::Minus,
                o => return Err(err(format!("bad sign `{o}`"))),
            };
            Ok(Piece::Id(Strand { label: lab(l)?, sign }))
        }
        "capR" => Ok(Piece::CapRight(lab(body)?)),
        "cupR" => Ok(Piece::CupRight(lab(body)?)),
        "capL" => Ok(Piece::CapLeft(lab(body)?)),
        "cupL" => Ok(Piece::CupLeft(lab(body)?)),
        "crossP" | "crossN" => {
            let mut parts = body.split(';');
            let xy = parts.next().unwrap_or("");
            let (xs, ys) = xy.split_once(',').ok_or_else(|| err("crossing needs two labels".into()))?;
            let (x, y) = (lab(xs)?, lab(ys)?);
            let mut out = None;
            let mut psi = None;
            for p in parts {
                let (k, v) = p.split_once('=').ok_or_else(|| err(format!("bad field `{p}`")))?;
                match k.trim() {
                    "out" => out = Some(lab(v)?),
                    "psi" => psi = Some(scalar(v)?),
                    o => return Err(err(format!("unknown field `{o}`"))),
                }
            }
            let psi = psi.ok_or_else(|| err("crossing needs psi".into()))?;
            if head == "crossP" {
                let out = out.unwrap_or_else(|| c.act(c.grade(y), x));
                Ok(Piece::CrossPos { x, y, out, psi })
            } else {
                let out = out.unwrap_or_else(|| c.act(c.group.inv(c.grade(x)), y));
                Ok(Piece::CrossNeg { x, y, out, psi })
            }
        }
        "coupon" => {
            let mut inputs = None;
            let mut outputs = None;
            let mut value = None;
            for p in body.split(';') {
                let (k, v) = p.split_once('=').ok_or_else(|| err(format!("bad field `{p}`")))?;
                let list = |v: &str| -> Result<Vec<Strand>, DiagramError> {
                    v.split(',').filter(|t| !t.trim().is_empty()).map(|t| parse_strand(c, t, line)).collect()
                };
                match k.trim() {
                    "in" => inputs = Some(list(v)?),
                    "out" => outputs = Some(list(v)?),
                    "v" => value = Some(scalar(v)?),
                    o => return Err(err(format!("unknown field `{o}`"))),
                }
            }
            Ok(Piece::Coupon {
                inputs: inputs.ok_or_else(|| err("coupon needs in=".into()))?,
                outputs: outputs.ok_or_else(|| err("coupon needs out=".into()))?,
                value: value.ok_or_else(|| err("coupon needs v=".into()))?,
            })
        }
        o => Err(err(format!("unknown piece `{o}`"))),
    }
}

/// Reads the line-per-slice diagram format.
pub fn parse_diagram(text: &str, c: &CategoryData) -> Result<ColoredDiagram, DiagramError> {
    let mut source = None;
    let mut slices = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("source:") {
            if source.is_some() || !slices.is_empty() {
                return Err(DiagramError::Parse { line: i + 1, msg: "source must come first, once".into() });
            }
            source = Some(rest.split_whitespace().map(|t| parse_strand(c, t, i + 1)).collect::<Result<Vec<_>, _>>()?);
            continue;
        }
        if line == "empty" {
            slices.push(Vec::new());
            continue;
        }
        let pieces = split_top_level(line).iter().map(|t| parse_piece(c, t, i + 1)).collect::<Result<Vec<_>, _>>()?;
        slices.push(pieces);
    }
    let source = source.ok_or_else(|| DiagramError::Parse { line: 1, msg: "missing `source:` line".into() })?;
    ColoredDiagram::new(source, slices)
}
