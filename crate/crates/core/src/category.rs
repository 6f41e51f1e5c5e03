//! Skeletal data of a pointed G-crossed ribbon category.
//!
//! Every simple object is invertible and indexed by a label in a finite group
//! L. All structure morphisms are scalars. Duality is normalized with
//! `ev = coev = 1` and `ẽv = c̃oev = d(x)`.

use crate::scalars::{CycNumber, ScalarError};
use std::collections::HashMap;
use std::fmt::Write as _;

#[derive(Debug, thiserror::Error)]
pub enum CategoryError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Scalar(#[from] ScalarError),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("grading is not a surjective homomorphism: {0}")]
    BadGrading(String),
    #[error("invalid crossing action: {0}")]
    BadAction(String),
    #[error("braiding label constraint violated for ({0}, {1})")]
    BraidLabels(String, String),
    #[error("zero structure scalar: {0}")]
    ZeroScalar(String),
    #[error("missing entry: {0}")]
    Missing(String),
    #[error("rank mismatch: D^2 = {d2} but dim(C_1) = {dim}")]
    RankMismatch { d2: String, dim: String },
}

/// A finite group given by its Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    names: Vec<String>,
    mult: Vec<Vec<usize>>,
    unit: usize,
    inv: Vec<usize>,
}

impl GroupTable {
    pub fn new(names: Vec<String>, mult: Vec<Vec<usize>>) -> Result<GroupTable, CategoryError> {
        let n = names.len();
        if n == 0 {
            return Err(CategoryError::NotAGroup("empty element list".into()));
        }
        if mult.len() != n || mult.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(CategoryError::NotAGroup("table is not square".into()));
        }
        let unit = (0..n)
            .find(|&e| (0..n).all(|a| mult[e][a] == a && mult[a][e] == a))
            .ok_or_else(|| CategoryError::NotAGroup("no unit".into()))?;
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| mult[a][b] == unit && mult[b][a] == unit)
                .ok_or_else(|| CategoryError::NotAGroup(format!("{} has no inverse", names[a])))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return Err(CategoryError::NotAGroup(format!(
                            "associativity fails at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        Ok(GroupTable { names, mult, unit, inv })
    }

    /// Z/n with elements named `0..n-1`.
    pub fn cyclic(n: usize) -> GroupTable {
        let names = (0..n).map(|i| i.to_string()).collect();
        let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        GroupTable::new(names, mult).expect("cyclic group")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Left-to-right product of a word.
    pub fn product<I: IntoIterator<Item = usize>>(&self, word: I) -> usize {
        word.into_iter().fold(self.unit, |acc, x| self.mul(acc, x))
    }

    /// `a^k` for any integer k.
    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        (0..k.unsigned_abs()).fold(self.unit, |acc, _| self.mul(acc, base))
    }

    pub fn conj(&self, g: usize, by: usize) -> usize {
        // by^{-1} g by
        self.mul(self.mul(self.inv(by), g), by)
    }
}

/// Identifies one stored structure scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarKey {
    Dim(usize),
    PhiA2(usize, usize, usize),
    PhiA0(usize),
    Phi2(usize, usize, usize),
    Phi0(usize),
    Braid(usize, usize),
}

/// Finite skeletal presentation of a pointed G-crossed ribbon category.
#[derive(Debug, Clone)]
pub struct CategoryData {
    pub group: GroupTable,
    pub labels: GroupTable,
    grade: Vec<usize>,
    dim: Vec<CycNumber>,
    action: Vec<Vec<usize>>,
    phi_a2: Vec<CycNumber>,
    phi_a0: Vec<CycNumber>,
    phi2: Vec<CycNumber>,
    phi0: Vec<CycNumber>,
    braid: Vec<CycNumber>,
    rank: CycNumber,
    root_order: u32,
}

fn valid_symbol(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

impl CategoryData {
    /// Builds data with every coherence scalar equal to 1 and the identity action.
    pub fn trivial_scalars(
        group: GroupTable,
        labels: GroupTable,
        grade: Vec<usize>,
        root_order: u32,
    ) -> Result<CategoryData, CategoryError> {
        let one = CycNumber::one(root_order);
        let (ng, nl) = (group.len(), labels.len());
        let action = vec![(0..nl).collect::<Vec<_>>(); ng];
        Ok(CategoryData {
            dim: vec![one.clone(); nl],
            phi_a2: vec![one.clone(); ng * nl * nl],
            phi_a0: vec![one.clone(); ng],
            phi2: vec![one.clone(); ng * ng * nl],
            phi0: vec![one.clone(); nl],
            braid: vec![one.clone(); nl * nl],
            rank: one,
            grade,
            action,
            group,
            labels,
            root_order,
        })
    }

    pub fn root_order(&self) -> u32 {
        self.root_order
    }

    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn num_group(&self) -> usize {
        self.group.len()
    }

    pub fn one(&self) -> CycNumber {
        CycNumber::one(self.root_order)
    }

    pub fn zero(&self) -> CycNumber {
        CycNumber::zero(self.root_order)
    }

    pub fn grade(&self, x: usize) -> usize {
        self.grade[x]
    }

    /// Label of φ_α(X_x).
    pub fn act(&self, alpha: usize, x: usize) -> usize {
        self.action[alpha][x]
    }

    pub fn set_action(&mut self, alpha: usize, x: usize, y: usize) {
        self.action[alpha][x] = y;
    }

    pub fn d(&self, x: usize) -> &CycNumber {
        &self.dim[x]
    }

    pub fn a2(&self, alpha: usize, x: usize, y: usize) -> &CycNumber {
        let nl = self.num_labels();
        &self.phi_a2[(alpha * nl + x) * nl + y]
    }

    pub fn a0(&self, alpha: usize) -> &CycNumber {
        &self.phi_a0[alpha]
    }

    /// φ_2(α,β)_X : φ_α φ_β (X) → φ_{βα}(X).
    pub fn p2(&self, alpha: usize, beta: usize, x: usize) -> &CycNumber {
        &self.phi2[(alpha * self.num_group() + beta) * self.num_labels() + x]
    }

    /// (φ_0)_X : X → φ_1(X).
    pub fn p0(&self, x: usize) -> &CycNumber {
        &self.phi0[x]
    }

    /// τ_{X,Y} : X ⊗ Y → Y ⊗ φ_{|Y|}(X).
    pub fn b(&self, x: usize, y: usize) -> &CycNumber {
        &self.braid[x * self.num_labels() + y]
    }

    pub fn rank(&self) -> &CycNumber {
        &self.rank
    }

    pub fn set_rank(&mut self, v: CycNumber) {
        self.rank = v;
    }

    pub fn get(&self, key: ScalarKey) -> &CycNumber {
        match key {
            ScalarKey::Dim(x) => self.d(x),
            ScalarKey::PhiA2(a, x, y) => self.a2(a, x, y),
            ScalarKey::PhiA0(a) => self.a0(a),
            ScalarKey::Phi2(a, b, x) => self.p2(a, b, x),
            ScalarKey::Phi0(x) => self.p0(x),
            ScalarKey::Braid(x, y) => self.b(x, y),
        }
    }

    /// Overwrites one structure scalar without re-validating anything.
    pub fn set(&mut self, key: ScalarKey, v: CycNumber) {
        let (ng, nl) = (self.num_group(), self.num_labels());
        match key {
            ScalarKey::Dim(x) => self.dim[x] = v,
            ScalarKey::PhiA2(a, x, y) => self.phi_a2[(a * nl + x) * nl + y] = v,
            ScalarKey::PhiA0(a) => self.phi_a0[a] = v,
            ScalarKey::Phi2(a, b, x) => self.phi2[(a * ng + b) * nl + x] = v,
            ScalarKey::Phi0(x) => self.phi0[x] = v,
            ScalarKey::Braid(x, y) => self.braid[x * nl + y] = v,
        }
    }

    /// Every stored scalar key in a fixed order.
    pub fn scalar_keys(&self) -> Vec<ScalarKey> {
        let (ng, nl) = (self.num_group(), self.num_labels());
        let mut keys = Vec::new();
        keys.extend((0..nl).map(ScalarKey::Dim));
        for a in 0..ng {
            for x in 0..nl {
                for y in 0..nl {
                    keys.push(ScalarKey::PhiA2(a, x, y));
                }
            }
        }
        keys.extend((0..ng).map(ScalarKey::PhiA0));
        for a in 0..ng {
            for b in 0..ng {
                for x in 0..nl {
                    keys.push(ScalarKey::Phi2(a, b, x));
                }
            }
        }
        keys.extend((0..nl).map(ScalarKey::Phi0));
        for x in 0..nl {
            for y in 0..nl {
                keys.push(ScalarKey::Braid(x, y));
            }
        }
        keys
    }

    pub fn key_name(&self, key: ScalarKey) -> String {
        let g = |a: usize| self.group.name(a).to_string();
        let l = |x: usize| self.labels.name(x).to_string();
        match key {
            ScalarKey::Dim(x) => format!("dim {}", l(x)),
            ScalarKey::PhiA2(a, x, y) => format!("phiA2 {} {} {}", g(a), l(x), l(y)),
            ScalarKey::PhiA0(a) => format!("phiA0 {}", g(a)),
            ScalarKey::Phi2(a, b, x) => format!("phi2 {} {} {}", g(a), g(b), l(x)),
            ScalarKey::Phi0(x) => format!("phi0 {}", l(x)),
            ScalarKey::Braid(x, y) => format!("braid {} {}", l(x), l(y)),
        }
    }

    /// Labels of a given grade, in label order.
    pub fn labels_of_grade(&self, g: usize) -> Vec<usize> {
        (0..self.num_labels()).filter(|&x| self.grade[x] == g).collect()
    }

    pub fn neutral_labels(&self) -> Vec<usize> {
        self.labels_of_grade(self.group.unit())
    }

    /// dim(C_1) = Σ over neutral labels of d(x)².
    pub fn neutral_dim(&self) -> CycNumber {
        self.neutral_labels().iter().fold(self.zero(), |acc, &x| acc + self.d(x) * self.d(x))
    }

    /// Left pivotal-crossing scalar φ^l_α(X): φ_α(X*) → φ_α(X)*.
    pub fn phil(&self, alpha: usize, x: usize) -> CycNumber {
        let xi = self.labels.inv(x);
        self.a2(alpha, xi, x) / self.a0(alpha)
    }

    /// Right pivotal-crossing scalar φ^r_α(X).
    pub fn phir(&self, alpha: usize, x: usize) -> CycNumber {
        let xi = self.labels.inv(x);
        self.d(x) * self.d(self.act(alpha, x)) * self.a2(alpha, x, xi) / self.a0(alpha)
    }

    /// θ_X : X → φ_{|X|}(X).
    pub fn twist(&self, x: usize) -> CycNumber {
        self.d(x) * self.b(x, x)
    }

    /// Neutral twist v_x = (φ_0)_x^{-1} θ_x.
    pub fn neutral_twist(&self, x: usize) -> CycNumber {
        self.twist(x) / self.p0(x)
    }

    /// First closed form of τ^{-1}_{X,Y} : Y ⊗ X' → X ⊗ Y.
    pub fn braid_inv_1(&self, x: usize, y: usize) -> CycNumber {
        let beta = self.grade(y);
        let bi = self.group.inv(beta);
        let xp = self.act(beta, x);
        let dy = self.d(y);
        dy * dy * self.p2(bi, beta, x) * self.b(xp, self.labels.inv(y)) / self.p0(x)
    }

    /// Second closed form of τ^{-1}_{X,Y}.
    pub fn braid_inv_2(&self, x: usize, y: usize) -> CycNumber {
        let beta = self.grade(y);
        self.phil(beta, x) * self.b(self.labels.inv(x), y)
    }

    /// ψ̄ for ψ: X → φ_α(Y), where X = φ_α(Y): a map Y → φ_{α^{-1}}(X).
    pub fn psi_bar(&self, alpha: usize, y: usize, psi: &CycNumber) -> CycNumber {
        let ai = self.group.inv(alpha);
        self.p0(y) / (self.p2(ai, alpha, y) * psi)
    }

    /// ψ⁻ for ψ: X → φ_α(Y): a map X* → φ_α(Y*).
    pub fn psi_minus(&self, alpha: usize, y: usize, psi: &CycNumber) -> CycNumber {
        (psi * self.phil(alpha, y)).inv()
    }

    /// Iterated monoidal structure (φ_α)_m of a list of labels: ⊗φ_α(U_i) → φ_α(⊗U_i).
    pub fn a_multi(&self, alpha: usize, labels: &[usize]) -> CycNumber {
        if labels.is_empty() {
            return self.a0(alpha).clone();
        }
        let mut acc = self.one();
        let mut prod = labels[0];
        for &u in &labels[1..] {
            acc = acc * self.a2(alpha, prod, u);
            prod = self.labels.mul(prod, u);
        }
        acc
    }

    /// Label product Π u_i.
    pub fn label_product(&self, labels: &[usize]) -> usize {
        self.labels.product(labels.iter().copied())
    }

    /// Applies a gauge transformation by scalars η_α(x), yielding an equivalent category.
    pub fn gauge(&self, eta: &dyn Fn(usize, usize) -> CycNumber) -> CategoryData {
        let mut out = self.clone();
        let (ng, nl) = (self.num_group(), self.num_labels());
        for a in 0..ng {
            for x in 0..nl {
                for y in 0..nl {
                    let xy = self.labels.mul(x, y);
                    let v = eta(a, xy) * self.a2(a, x, y) / (eta(a, x) * eta(a, y));
                    out.set(ScalarKey::PhiA2(a, x, y), v);
                }
            }
            out.set(ScalarKey::PhiA0(a), eta(a, self.labels.unit()) * self.a0(a));
        }
        for a in 0..ng {
            for b in 0..ng {
                let ba = self.group.mul(b, a);
                for x in 0..nl {
                    let v = eta(ba, x) * self.p2(a, b, x) / (eta(a, self.act(b, x)) * eta(b, x));
                    out.set(ScalarKey::Phi2(a, b, x), v);
                }
            }
        }
        let e = self.group.unit();
        for x in 0..nl {
            out.set(ScalarKey::Phi0(x), eta(e, x) * self.p0(x));
            for y in 0..nl {
                out.set(ScalarKey::Braid(x, y), eta(self.grade(y), x) * self.b(x, y));
            }
        }
        out
    }

    /// Structural validation shared by the loader and programmatic builders.
    pub fn validate_structure(&self) -> Result<(), CategoryError> {
        let (g, l) = (&self.group, &self.labels);
        let lname = |x: usize| l.name(x).to_string();
        for x in 0..l.len() {
            for y in 0..l.len() {
                if self.grade[l.mul(x, y)] != g.mul(self.grade[x], self.grade[y]) {
                    return Err(CategoryError::BadGrading(format!("not multiplicative at ({}, {})", lname(x), lname(y))));
                }
            }
        }
        for a in 0..g.len() {
            if !self.grade.contains(&a) {
                return Err(CategoryError::BadGrading(format!("grade {} is empty", g.name(a))));
            }
        }
        for a in 0..g.len() {
            let row = &self.action[a];
            let mut seen = vec![false; l.len()];
            for &v in row {
                seen[v] = true;
            }
            if seen.iter().any(|s| !s) {
                return Err(CategoryError::BadAction(format!("φ_{} is not bijective", g.name(a))));
            }
            for x in 0..l.len() {
                for y in 0..l.len() {
                    if row[l.mul(x, y)] != l.mul(row[x], row[y]) {
                        return Err(CategoryError::BadAction(format!("φ_{} is not a homomorphism", g.name(a))));
                    }
                }
                if self.grade[row[x]] != g.conj(self.grade[x], a) {
                    return Err(CategoryError::BadAction(format!(
                        "grade of φ_{}({}) is not the conjugate grade",
                        g.name(a),
                        lname(x)
                    )));
                }
                for b in 0..g.len() {
                    if self.act(a, self.act(b, x)) != self.act(g.mul(b, a), x) {
                        return Err(CategoryError::BadAction(format!(
                            "φ_{} φ_{} ({}) differs from φ_{}({})",
                            g.name(a),
                            g.name(b),
                            lname(x),
                            g.name(g.mul(b, a)),
                            lname(x)
                        )));
                    }
                }
            }
        }
        if (0..l.len()).any(|x| self.act(g.unit(), x) != x) {
            return Err(CategoryError::BadAction("φ_1 is not the identity on labels".into()));
        }
        for x in 0..l.len() {
            for y in 0..l.len() {
                let lhs = l.mul(x, y);
                let rhs = l.mul(y, self.act(self.grade[y], x));
                if lhs != rhs {
                    return Err(CategoryError::BraidLabels(lname(x), lname(y)));
                }
            }
        }
        for key in self.scalar_keys() {
            if self.get(key).is_zero() {
                return Err(CategoryError::ZeroScalar(self.key_name(key)));
            }
        }
        if self.rank.is_zero() {
            return Err(CategoryError::ZeroScalar("rank D".into()));
        }
        Ok(())
    }

    /// Structural validation plus the rank condition D² = dim(C_1).
    pub fn validate(&self) -> Result<(), CategoryError> {
        self.validate_structure()?;
        let d2 = &self.rank * &self.rank;
        let dim = self.neutral_dim();
        if d2 != dim {
            return Err(CategoryError::RankMismatch { d2: d2.to_string(), dim: dim.to_string() });
        }
        Ok(())
    }

    /// Parses and validates a category data document.
    pub fn load(text: &str) -> Result<CategoryData, CategoryError> {
        let data = parse_document(text)?;
        data.validate()?;
        Ok(data)
    }

    /// Canonical document form; loading it back reproduces the data.
    pub fn to_document(&self) -> String {
        let (g, l) = (&self.group, &self.labels);
        let mut s = String::new();
        let _ = writeln!(s, "[scalars]\nroot_order = {}\n", self.root_order);
        for (title, t) in [("group", g), ("labels", l)] {
            let _ = writeln!(s, "[{title}]\nelements = {}", t.names().join(" "));
            for a in 0..t.len() {
                let row: Vec<&str> = (0..t.len()).map(|b| t.name(t.mul(a, b))).collect();
                let _ = writeln!(s, "{} = {}", t.name(a), row.join(" "));
            }
            s.push('\n');
        }
        s.push_str("[grade]\n");
        for x in 0..l.len() {
            let _ = writeln!(s, "{} = {}", l.name(x), g.name(self.grade[x]));
        }
        s.push_str("\n[dim]\n");
        for x in 0..l.len() {
            let _ = writeln!(s, "{} = {}", l.name(x), self.dim[x]);
        }
        s.push_str("\n[crossing]\n");
        for a in 0..g.len() {
            for x in 0..l.len() {
                if self.act(a, x) != x {
                    let _ = writeln!(s, "act {} {} = {}", g.name(a), l.name(x), l.name(self.act(a, x)));
                }
            }
        }
        for key in self.scalar_keys() {
            if matches!(key, ScalarKey::Dim(_) | ScalarKey::Braid(..)) {
                continue;
            }
            let v = self.get(key);
            if !v.is_one() {
                let _ = writeln!(s, "{} = {}", self.key_name(key), v);
            }
        }
        s.push_str("\n[braiding]\n");
        for x in 0..l.len() {
            for y in 0..l.len() {
                let _ = writeln!(s, "{} {} = {}", l.name(x), l.name(y), self.b(x, y));
            }
        }
        let _ = writeln!(s, "\n[rank]\nD = {}", self.rank);
        s
    }
}

struct Sections {
    /// section name -> (line number, content) entries
    map: HashMap<String, Vec<(usize, String)>>,
}

fn split_sections(text: &str) -> Result<Sections, CategoryError> {
    let mut map: HashMap<String, Vec<(usize, String)>> = HashMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            let name = line
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| CategoryError::Parse { line: i + 1, msg: "bad section header".into() })?
                .trim()
                .to_string();
            const KNOWN: [&str; 8] = ["scalars", "group", "labels", "grade", "dim", "crossing", "braiding", "rank"];
            if !KNOWN.contains(&name.as_str()) {
                return Err(CategoryError::Parse { line: i + 1, msg: format!("unknown section [{name}]") });
            }
            if map.contains_key(&name) {
                return Err(CategoryError::Parse { line: i + 1, msg: format!("duplicate section [{name}]") });
            }
            map.insert(name.clone(), Vec::new());
            current = Some(name);
            continue;
        }
        let sec = current
            .as_ref()
            .ok_or_else(|| CategoryError::Parse { line: i + 1, msg: "entry outside of a section".into() })?;
        map.get_mut(sec).expect("section").push((i + 1, line.to_string()));
    }
    Ok(Sections { map })
}

fn kv(line: usize, s: &str) -> Result<(String, String), CategoryError> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CategoryError::Parse { line, msg: format!("expected `key = value`, got `{s}`") })?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn parse_group(entries: &[(usize, String)], what: &str) -> Result<GroupTable, CategoryError> {
    let mut names: Option<Vec<String>> = None;
    let mut rows: HashMap<String, (usize, Vec<String>)> = HashMap::new();
    for (line, e) in entries {
        let (k, v) = kv(*line, e)?;
        if k == "cyclic" {
            let n: usize = v.parse().map_err(|_| CategoryError::Parse { line: *line, msg: "bad cyclic order".into() })?;
            if n == 0 {
                return Err(CategoryError::Parse { line: *line, msg: "cyclic order must be positive".into() });
            }
            return Ok(GroupTable::cyclic(n));
        } else if k == "elements" {
            let list: Vec<String> = v.split_whitespace().map(str::to_string).collect();
            if let Some(bad) = list.iter().find(|s| !valid_symbol(s)) {
                return Err(CategoryError::Parse { line: *line, msg: format!("invalid symbol `{bad}`") });
            }
            names = Some(list);
        } else {
            rows.insert(k, (*line, v.split_whitespace().map(str::to_string).collect()));
        }
    }
    let names = names.ok_or_else(|| CategoryError::Missing(format!("[{what}] elements")))?;
    let idx = |s: &str, line: usize| {
        names
            .iter()
            .position(|n| n == s)
            .ok_or_else(|| CategoryError::Parse { line, msg: format!("unknown element `{s}`") })
    };
    let mut mult = Vec::with_capacity(names.len());
    for a in &names {
        let (line, row) = rows.get(a).ok_or_else(|| CategoryError::Missing(format!("[{what}] row for `{a}`")))?;
        if row.len() != names.len() {
            return Err(CategoryError::Parse { line: *line, msg: "row length differs from element count".into() });
        }
        mult.push(row.iter().map(|s| idx(s, *line)).collect::<Result<Vec<_>, _>>()?);
    }
    if rows.len() != names.len() {
        return Err(CategoryError::Parse { line: entries[0].0, msg: format!("[{what}] has rows for unknown elements") });
    }
    GroupTable::new(names, mult)
}

fn parse_document(text: &str) -> Result<CategoryData, CategoryError> {
    let secs = split_sections(text)?;
    let get = |name: &str| secs.map.get(name).cloned().ok_or_else(|| CategoryError::Missing(format!("section [{name}]")));
    let mut root_order = None;
    for (line, e) in get("scalars")? {
        let (k, v) = kv(line, &e)?;
        if k != "root_order" {
            return Err(CategoryError::Parse { line, msg: format!("unknown key `{k}`") });
        }
        root_order = Some(v.parse::<u32>().map_err(|_| CategoryError::Parse { line, msg: "bad root order".into() })?);
    }
    let n = root_order.ok_or_else(|| CategoryError::Missing("root_order".into()))?;
    crate::scalars::field(n)?;
    let group = parse_group(&get("group")?, "group")?;
    let labels = parse_group(&get("labels")?, "labels")?;
    let scalar = |line: usize, s: &str| {
        CycNumber::parse(s, n).map_err(|e| CategoryError::Parse { line, msg: e.to_string() })
    };
    let lab = |line: usize, s: &str| {
        labels.index(s).ok_or_else(|| CategoryError::Parse { line, msg: format!("unknown label `{s}`") })
    };
    let grp = |line: usize, s: &str| {
        group.index(s).ok_or_else(|| CategoryError::Parse { line, msg: format!("unknown group element `{s}`") })
    };

    let mut grade = vec![None; labels.len()];
    for (line, e) in get("grade")? {
        let (k, v) = kv(line, &e)?;
        grade[lab(line, &k)?] = Some(grp(line, &v)?);
    }
    let grade: Vec<usize> = grade
        .iter()
        .enumerate()
        .map(|(x, g)| g.ok_or_else(|| CategoryError::Missing(format!("grade of `{}`", labels.name(x)))))
        .collect::<Result<_, _>>()?;

    let mut data = CategoryData::trivial_scalars(group.clone(), labels.clone(), grade, n)?;
    let mut dims = vec![false; labels.len()];
    for (line, e) in get("dim")? {
        let (k, v) = kv(line, &e)?;
        let x = lab(line, &k)?;
        dims[x] = true;
        data.set(ScalarKey::Dim(x), scalar(line, &v)?);
    }
    if let Some(x) = dims.iter().position(|d| !d) {
        return Err(CategoryError::Missing(format!("dim of `{}`", labels.name(x))));
    }
    for (line, e) in secs.map.get("crossing").cloned().unwrap_or_default() {
        let (k, v) = kv(line, &e)?;
        let parts: Vec<&str> = k.split_whitespace().collect();
        let arity_err = || CategoryError::Parse { line, msg: format!("wrong number of arguments in `{k}`") };
        match parts.first().copied() {
            Some("act") if parts.len() == 3 => {
                let (a, x) = (grp(line, parts[1])?, lab(line, parts[2])?);
                data.set_action(a, x, lab(line, &v)?);
            }
            Some("phiA2") if parts.len() == 4 => {
                let key = ScalarKey::PhiA2(grp(line, parts[1])?, lab(line, parts[2])?, lab(line, parts[3])?);
                data.set(key, scalar(line, &v)?);
            }
            Some("phiA0") if parts.len() == 2 => data.set(ScalarKey::PhiA0(grp(line, parts[1])?), scalar(line, &v)?),
            Some("phi2") if parts.len() == 4 => {
                let key = ScalarKey::Phi2(grp(line, parts[1])?, grp(line, parts[2])?, lab(line, parts[3])?);
                data.set(key, scalar(line, &v)?);
            }
            Some("phi0") if parts.len() == 2 => data.set(ScalarKey::Phi0(lab(line, parts[1])?), scalar(line, &v)?),
            Some("act" | "phiA2" | "phiA0" | "phi2" | "phi0") => return Err(arity_err()),
            _ => return Err(CategoryError::Parse { line, msg: format!("unknown crossing entry `{k}`") }),
        }
    }
    let mut seen = vec![false; labels.len() * labels.len()];
    for (line, e) in get("braiding")? {
        let (k, v) = kv(line, &e)?;
        let parts: Vec<&str> = k.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(CategoryError::Parse { line, msg: format!("expected two labels in `{k}`") });
        }
        let (x, y) = (lab(line, parts[0])?, lab(line, parts[1])?);
        seen[x * labels.len() + y] = true;
        data.set(ScalarKey::Braid(x, y), scalar(line, &v)?);
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        let (x, y) = (i / labels.len(), i % labels.len());
        return Err(CategoryError::Missing(format!("braid {} {}", labels.name(x), labels.name(y))));
    }
    let mut rank = None;
    for (line, e) in get("rank")? {
        let (k, v) = kv(line, &e)?;
        if k != "D" {
            return Err(CategoryError::Parse { line, msg: format!("unknown key `{k}`") });
        }
        rank = Some(scalar(line, &v)?);
    }
    data.set_rank(rank.ok_or_else(|| CategoryError::Missing("rank D".into()))?);
    Ok(data)
}
