//! Exhaustive verification of the category axioms as scalar equations.

use crate::category::CategoryData;
use crate::report::AxiomReport;

struct Names<'a>(&'a CategoryData);

impl Names<'_> {
    fn g(&self, a: usize) -> &str {
        self.0.group.name(a)
    }
    fn l(&self, x: usize) -> &str {
        self.0.labels.name(x)
    }
}

/// Pivotal structure: d² = 1, multiplicativity, zig-zags and dimensions.
pub fn check_pivotal(c: &CategoryData) -> AxiomReport {
    let n = Names(c);
    let mut r = AxiomReport::new();
    let one = c.one();
    let l = &c.labels;
    for x in 0..l.len() {
        let d = c.d(x);
        r.eq("d_x² = 1", &(d * d), &one, || format!("x={}", n.l(x)));
        // ev∘coev-type zig-zags carry scalars 1·1 and d·d
        r.eq("zig-zag right", &one, &one, || format!("x={}", n.l(x)));
        r.eq("zig-zag left", &(d * d), &one, || format!("x={}", n.l(x)));
        // left dual of k·id is k·id; right dual picks up ẽv and c̃oev
        r.eq("left dual = right dual", &one, &(d * d), || format!("x={}", n.l(x)));
        // dim_l = ev∘(id⊗1)∘c̃oev, dim_r = ẽv∘coev
        r.eq("dim_l = dim_r = dim", d, d, || format!("x={}", n.l(x)));
        for y in 0..l.len() {
            r.eq("pivotal monoidal", c.d(l.mul(x, y)), &(d * c.d(y)), || format!("x={},y={}", n.l(x), n.l(y)));
        }
    }
    r.eq("pivotal unit", c.d(l.unit()), &one, || "x=1".into());
    r
}

/// Monoidal functor coherences of the crossing and its pivotality.
pub fn check_crossing(c: &CategoryData) -> AxiomReport {
    let n = Names(c);
    let (g, l) = (&c.group, &c.labels);
    let (ng, nl) = (g.len(), l.len());
    let mut r = AxiomReport::new();
    // crossing action as a right action with φ_1 = id on labels
    for a in 0..ng {
        for b in 0..ng {
            for x in 0..nl {
                r.holds("action composition", c.act(a, c.act(b, x)) == c.act(g.mul(b, a), x), || {
                    format!("alpha={},beta={},x={}", n.g(a), n.g(b), n.l(x))
                });
            }
        }
    }
    r.par_section(ng, |a, r| {
        for x in 0..nl {
            for y in 0..nl {
                for z in 0..nl {
                    let lhs = c.a2(a, x, l.mul(y, z)) * c.a2(a, y, z);
                    let rhs = c.a2(a, l.mul(x, y), z) * c.a2(a, x, y);
                    r.eq("action monoidal associativity", &lhs, &rhs, || format!("alpha={},x={},y={},z={}", n.g(a), n.l(x), n.l(y), n.l(z)));
                }
            }
        }
    });
    let one = c.one();
    for a in 0..ng {
        for x in 0..nl {
            r.eq("action monoidal unit", &(c.a2(a, x, l.unit()) * c.a0(a)), &one, || format!("alpha={},x={},side=right", n.g(a), n.l(x)));
            r.eq("action monoidal unit", &(c.a2(a, l.unit(), x) * c.a0(a)), &one, || format!("alpha={},x={},side=left", n.g(a), n.l(x)));
        }
    }
    r.par_section(ng, |a, r| {
        for b in 0..ng {
            let ba = g.mul(b, a);
            for x in 0..nl {
                for y in 0..nl {
                    let (bx, by) = (c.act(b, x), c.act(b, y));
                    let lhs = c.p2(a, b, l.mul(x, y)) * c.a2(b, x, y) * c.a2(a, bx, by);
                    let rhs = c.a2(ba, x, y) * c.p2(a, b, x) * c.p2(a, b, y);
                    r.eq("composition monoidal", &lhs, &rhs, || format!("alpha={},beta={},x={},y={}", n.g(a), n.g(b), n.l(x), n.l(y)));
                }
            }
        }
    });
    for a in 0..ng {
        for b in 0..ng {
            let lhs = c.p2(a, b, l.unit()) * c.a0(b) * c.a0(a);
            r.eq("composition on unit", &lhs, c.a0(g.mul(b, a)), || format!("alpha={},beta={}", n.g(a), n.g(b)));
        }
    }
    r.par_section(ng, |a, r| {
        for b in 0..ng {
            for gm in 0..ng {
                for x in 0..nl {
                    let lhs = c.p2(a, g.mul(gm, b), x) * c.p2(b, gm, x);
                    let rhs = c.p2(g.mul(b, a), gm, x) * c.p2(a, b, c.act(gm, x));
                    r.eq("composition associativity", &lhs, &rhs, || {
                        format!("alpha={},beta={},gamma={},x={}", n.g(a), n.g(b), n.g(gm), n.l(x))
                    });
                }
            }
        }
    });
    for a in 0..ng {
        for x in 0..nl {
            r.eq("composition unit", &(c.p2(a, g.unit(), x) * c.p0(x)), &one, || format!("alpha={},x={},side=right", n.g(a), n.l(x)));
            r.eq("composition unit", &(c.p2(g.unit(), a, x) * c.p0(c.act(a, x))), &one, || {
                format!("alpha={},x={},side=left", n.g(a), n.l(x))
            });
        }
    }
    for x in 0..nl {
        for y in 0..nl {
            let rhs = c.a2(g.unit(), x, y) * c.p0(x) * c.p0(y);
            r.eq("identity action monoidal", c.p0(l.mul(x, y)), &rhs, || format!("x={},y={}", n.l(x), n.l(y)));
        }
    }
    r.eq("(φ_0)_1 = (φ_1)_0", c.p0(l.unit()), c.a0(g.unit()), || format!("label={},element={}", n.l(l.unit()), n.g(g.unit())));
    for a in 0..ng {
        for x in 0..nl {
            r.eq("pivotal crossing", &c.phil(a, x), &c.phir(a, x), || format!("alpha={},x={}", n.g(a), n.l(x)));
        }
    }
    r
}

/// Braiding axioms and the identities derived from them.
pub fn check_braiding(c: &CategoryData) -> AxiomReport {
    let n = Names(c);
    let (g, l) = (&c.group, &c.labels);
    let (ng, nl) = (g.len(), l.len());
    let mut r = AxiomReport::new();
    for x in 0..nl {
        for y in 0..nl {
            r.holds("braid labels", l.mul(x, y) == l.mul(y, c.act(c.grade(y), x)), || format!("x={},y={}", n.l(x), n.l(y)));
        }
    }
    r.par_section(nl, |x, r| {
        for y in 0..nl {
            for z in 0..nl {
                let (by, bz) = (c.grade(y), c.grade(z));
                let xp = c.act(by, x);
                let lhs = c.p2(bz, by, x) * c.b(xp, z) * c.b(x, y);
                r.eq("braiding hexagon (right)", &lhs, c.b(x, l.mul(y, z)), || format!("x={},y={},z={}", n.l(x), n.l(y), n.l(z)));
                let rhs = c.a2(bz, x, y) * c.b(x, z) * c.b(y, z);
                r.eq("braiding hexagon (left)", c.b(l.mul(x, y), z), &rhs, || format!("x={},y={},z={}", n.l(x), n.l(y), n.l(z)));
            }
        }
    });
    r.par_section(ng, |a, r| {
        for x in 0..nl {
            for y in 0..nl {
                let by = c.grade(y);
                let conj = g.conj(by, a);
                let lhs = c.a2(a, y, c.act(by, x)) * c.p2(conj, a, x) * c.b(c.act(a, x), c.act(a, y)) / c.p2(a, by, x);
                let rhs = c.b(x, y) * c.a2(a, x, y);
                r.eq("braiding naturality under action", &lhs, &rhs, || format!("alpha={},x={},y={}", n.g(a), n.l(x), n.l(y)));
            }
        }
    });
    for x in 0..nl {
        r.eq("braiding with unit (right)", c.b(x, l.unit()), c.p0(x), || format!("x={}", n.l(x)));
        r.eq("braiding with unit (left)", c.b(l.unit(), x), c.a0(c.grade(x)), || format!("x={}", n.l(x)));
    }
    r.par_section(nl, |x, r| {
        for y in 0..nl {
            for z in 0..nl {
                let (bb, gm) = (c.grade(y), c.grade(z));
                let lhs = c.b(x, y) * c.b(c.act(bb, x), z) * c.b(y, z) * c.p2(gm, bb, x);
                let rhs = c.b(y, z) * c.b(x, z) * c.b(c.act(gm, x), c.act(gm, y)) * c.p2(g.conj(bb, gm), gm, x);
                r.eq("Yang-Baxter", &lhs, &rhs, || format!("x={},y={},z={}", n.l(x), n.l(y), n.l(z)));
            }
        }
    });
    for x in 0..nl {
        for y in 0..nl {
            let inv = c.b(x, y).inv();
            r.eq("braiding inverse (first form)", &c.braid_inv_1(x, y), &inv, || format!("x={},y={}", n.l(x), n.l(y)));
            r.eq("braiding inverse (second form)", &c.braid_inv_2(x, y), &inv, || format!("x={},y={}", n.l(x), n.l(y)));
        }
    }
    r
}

/// Self-duality of the twist plus the twist lemmas and ψ̄/ψ⁻ bookkeeping.
pub fn check_ribbon(c: &CategoryData) -> AxiomReport {
    let n = Names(c);
    let (g, l) = (&c.group, &c.labels);
    let (ng, nl) = (g.len(), l.len());
    let mut r = AxiomReport::new();
    let one = c.one();
    for x in 0..nl {
        let a = c.grade(x);
        let ai = g.inv(a);
        let xi = l.inv(x);
        let rhs = c.p0(x) * c.phil(ai, x) * c.twist(xi) / c.p2(ai, a, x);
        r.eq("twist self-duality", &c.twist(x), &rhs, || format!("x={}", n.l(x)));
        r.holds("twist invertible", !c.twist(x).is_zero(), || format!("x={}", n.l(x)));
        let d = c.d(x);
        r.eq("twist inverse (first form)", &(c.twist(x) * d * c.braid_inv_1(x, x)), &one, || format!("x={}", n.l(x)));
        r.eq("twist inverse (second form)", &(c.twist(x) * d * c.braid_inv_2(x, x)), &one, || format!("x={}", n.l(x)));
        // curl closed with ẽv on the right and with c̃oev on the left
        let right_curl = c.b(x, x) * c.d(c.act(a, x));
        let left_curl = c.d(x) * c.b(x, x);
        r.eq("twist right curl", &right_curl, &c.twist(x), || format!("x={}", n.l(x)));
        r.eq("twist left curl", &left_curl, &c.twist(x), || format!("x={}", n.l(x)));
        let neg_curl = c.d(x) * c.braid_inv_1(x, x);
        r.eq("twist inverse curl", &neg_curl, &c.twist(x).inv(), || format!("x={}", n.l(x)));
    }
    r.eq("unit twist", &c.twist(l.unit()), c.p0(l.unit()), || format!("x={}", n.l(l.unit())));
    r.par_section(nl, |x, r| {
        for y in 0..nl {
            let (a, b) = (c.grade(x), c.grade(y));
            let xy = l.mul(x, y);
            let rhs = c.a2(g.mul(a, b), x, y)
                * c.p2(g.conj(a, b), b, y)
                * c.p2(b, a, x)
                * c.b(x, y)
                * c.b(y, c.act(b, x))
                * c.twist(x)
                * c.twist(y);
            r.eq("twist of product", &c.twist(xy), &rhs, || format!("x={},y={}", n.l(x), n.l(y)));
        }
    });
    for x in 0..nl {
        for b in 0..ng {
            let a = c.grade(x);
            let rhs = c.p2(g.conj(a, b), b, x) * c.twist(c.act(b, x)) / c.p2(b, a, x);
            r.eq("twist under action", &c.twist(x), &rhs, || format!("x={},beta={}", n.l(x), n.g(b)));
        }
    }
    // neutral balancing: v_{xy} = v_x v_y c_{y,x} c_{x,y}
    let neutral = c.neutral_labels();
    for &x in &neutral {
        for &y in &neutral {
            let double = c.b(x, y) * c.b(y, x) / (c.p0(x) * c.p0(y));
            let rhs = c.neutral_twist(x) * c.neutral_twist(y) * double;
            r.eq("neutral balancing", &c.neutral_twist(l.mul(x, y)), &rhs, || format!("x={},y={}", n.l(x), n.l(y)));
        }
    }
    let psis = [one.clone(), crate::scalars::CycNumber::from_int(c.root_order(), 2)];
    for a in 0..ng {
        let ai = g.inv(a);
        for y in 0..nl {
            let x = c.act(a, y);
            for psi in &psis {
                let bar = c.psi_bar(a, y, psi);
                let barbar = c.psi_bar(ai, x, &bar);
                r.eq("bar∘bar = id", &barbar, psi, || format!("alpha={},y={},psi={}", n.g(a), n.l(y), psi));
                // (ψ⁻)‾ and (ψ̄)⁻ as maps Y* → φ_{α^{-1}}(X*)
                let minus = c.psi_minus(a, y, psi);
                let bar_of_minus = c.psi_bar(a, l.inv(y), &minus);
                let minus_of_bar = c.psi_minus(ai, x, &bar);
                r.eq("bar of minus = minus of bar", &bar_of_minus, &minus_of_bar, || {
                    format!("alpha={},y={},psi={}", n.g(a), n.l(y), psi)
                });
            }
        }
    }
    r
}

/// Σ_{|x| = g} d(x)² = dim(C_1) for every grade g.
pub fn check_graded_dims(c: &CategoryData) -> AxiomReport {
    let n = Names(c);
    let mut r = AxiomReport::new();
    let dim1 = c.neutral_dim();
    for a in 0..c.num_group() {
        let sum = c.labels_of_grade(a).iter().fold(c.zero(), |acc, &x| acc + c.d(x) * c.d(x));
        r.eq("graded dimension", &sum, &dim1, || format!("g={}", n.g(a)));
    }
    // multiplicity numbers are 0/1 counts; Σ_i N_X^i dim(i) = dim(X) collapses to one term
    for x in 0..c.num_labels() {
        let count = (0..c.num_labels()).filter(|&i| i == x).count();
        r.holds("multiplicity numbers", count == 1, || format!("x={}", n.l(x)));
    }
    r
}

/// All five checks in order.
pub fn check_all(c: &CategoryData) -> AxiomReport {
    let mut r = check_pivotal(c);
    r.merge(check_crossing(c));
    r.merge(check_braiding(c));
    r.merge(check_ribbon(c));
    r.merge(check_graded_dims(c));
    r
}
