mod common;

use common::{gauss_sum, load, Eis, ALL};
use gcrossed_core::diagram::Geometry;
use gcrossed_core::evaluator::{conjugate_diagram, evaluate};
use gcrossed_core::fusion::s_entry;
use gcrossed_core::kirby::{braid_closure, random_presentation, BraidLetter, LinkBuilder};
use gcrossed_core::surgery::{
    canonical_coloring_at, check_flat_structure, link_form, link_form_at, link_form_terms, linking_data, parse_link,
    print_link, tau, tau_at, verlinde_rank, GLinkPresentation, SurgeryError,
};
use gcrossed_core::{CategoryData, CycNumber};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn doc(name: &str, c: &CategoryData) -> GLinkPresentation {
    let path = common::data_dir().join("links").join(format!("{name}.link"));
    let text = std::fs::read_to_string(&path).unwrap();
    parse_link(&text, c).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Unknot of framing p with meridian element g.
fn framed_unknot(c: &CategoryData, g: usize, p: i64) -> Result<GLinkPresentation, SurgeryError> {
    let mut b = LinkBuilder::new(c);
    b.cup(0, true, 0, g)?;
    for _ in 0..p.abs() {
        b.kink(0, p > 0)?;
    }
    b.cap(0)?;
    b.finish()
}

/// Σ_{|x|=1} d(x)² θ_x^p straight from the scalar tables.
fn twisted_dim_sum(c: &CategoryData, p: i64) -> CycNumber {
    let mut out = c.zero();
    for x in 0..c.num_labels() {
        if c.grade(x) == c.group.unit() {
            let v = c.twist(x) / c.p0(x);
            out = out + c.d(x) * c.d(x) * v.pow(p);
        }
    }
    out
}

#[test]
fn empty_link_gives_inverse_rank() {
    for name in ALL {
        let c = load(name);
        let r = tau(&doc("empty", &c), &c).unwrap();
        assert_eq!(r.tau, c.rank().inv(), "{name}");
        assert!(r.f_value.is_one());
    }
}

#[test]
fn zero_framed_unknot_gives_one_for_every_meridian() {
    for name in ALL {
        let c = load(name);
        assert!(tau(&doc("unknot0", &c), &c).unwrap().tau.is_one(), "{name}");
        for g in 0..c.group.len() {
            let l = framed_unknot(&c, g, 0).unwrap();
            assert!(tau(&l, &c).unwrap().tau.is_one(), "{name} g={}", c.group.name(g));
        }
    }
}

#[test]
fn curled_unknots_give_the_gauss_sums() {
    let c = load("z3");
    let dp = link_form(&doc("unknot_pos1", &c), &c).unwrap();
    let dm = link_form(&doc("unknot_neg1", &c), &c).unwrap();
    assert_eq!(dp, gauss_sum(1).to_cyc());
    assert_eq!(dm, gauss_sum(2).to_cyc());
    assert_eq!(dp, Eis(1, 2).to_cyc());
    assert_eq!(&dp * &dm, CycNumber::from_int(12, 3));
    assert_eq!(&dp * &dm, c.rank() * c.rank());
    for name in ALL {
        let c = load(name);
        assert_eq!(link_form(&doc("unknot_pos1", &c), &c).unwrap(), twisted_dim_sum(&c, 1), "{name}");
        assert_eq!(link_form(&doc("unknot_neg1", &c), &c).unwrap(), twisted_dim_sum(&c, -1), "{name}");
        // ±1-framed unknots present the sphere again
        let sphere = c.rank().inv();
        assert_eq!(tau(&doc("unknot_pos1", &c), &c).unwrap().tau, sphere, "{name}");
        assert_eq!(tau(&doc("unknot_neg1", &c), &c).unwrap().tau, sphere, "{name}");
    }
}

#[test]
fn plus_two_unknot_in_z3() {
    let c = load("z3");
    let l = doc("lens_p2", &c);
    assert_eq!(linking_data(&l).matrix, vec![vec![2]]);
    assert_eq!(link_form(&l, &c).unwrap(), gauss_sum(2).to_cyc());
    assert_eq!(tau(&l, &c).unwrap().tau, -c.rank().inv());
}

#[test]
fn framed_unknots_sum_powers_of_the_twist() {
    for name in ALL {
        let c = load(name);
        for p in -3..=3 {
            let l = framed_unknot(&c, c.group.unit(), p).unwrap();
            assert_eq!(linking_data(&l).matrix, vec![vec![p]]);
            assert_eq!(link_form(&l, &c).unwrap(), twisted_dim_sum(&c, p), "{name} p={p}");
        }
    }
}

#[test]
fn hopf_terms_are_s_matrix_entries() {
    for name in ALL {
        let c = load(name);
        let l = doc("hopf", &c);
        assert_eq!(linking_data(&l).matrix, vec![vec![0, 1], vec![1, 0]]);
        let terms = link_form_terms(&l, &l.default_sites(), &c).unwrap();
        assert_eq!(terms.len(), c.neutral_labels().len().pow(2));
        for (base, v) in terms {
            let (j, k) = (base[0], base[1]);
            assert_eq!(v, c.d(j) * c.d(k) * s_entry(&c, j, k), "{name} j={j} k={k}");
        }
        // the 0-framed Hopf link is again the sphere
        assert_eq!(tau(&l, &c).unwrap().tau, c.rank().inv(), "{name}");
    }
    let c = load("z3");
    let terms = link_form_terms(&doc("hopf", &c), &[(1, 0), (2, 1)], &c).unwrap();
    for (base, v) in terms {
        let (j, k) = (base[0] as i64, base[1] as i64);
        assert_eq!(v, Eis::omega_pow(2 * j * k).to_cyc());
    }
}

#[test]
fn flat_structure_must_be_special() {
    let c = load("z2_bichar");
    let g = c.group.index("1").unwrap();
    // the longitude of a p-framed unknot is the p-th power of the meridian
    assert!(matches!(framed_unknot(&c, g, 1).map(|l| check_flat_structure(&l, &c).passed()), Ok(false)));
    let l = framed_unknot(&c, g, 1).unwrap();
    assert!(matches!(tau(&l, &c), Err(SurgeryError::NotSpecial(_))));
    assert!(check_flat_structure(&framed_unknot(&c, g, 2).unwrap(), &c).passed());
    let c = load("s3_z3");
    let (r, f) = (c.group.index("r").unwrap(), c.group.index("f").unwrap());
    for (g, p, ok) in [(r, 3, true), (r, 2, false), (f, 2, true), (f, 1, false), (r, -3, true)] {
        let l = framed_unknot(&c, g, p).unwrap();
        let report = check_flat_structure(&l, &c);
        assert_eq!(report.passed(), ok, "g={} p={p}", c.group.name(g));
        if !ok {
            assert_eq!(report.failing_axioms(), vec!["longitude in kernel"]);
        }
    }
}

#[test]
fn hopf_link_needs_trivial_meridians() {
    let c = load("s3_z3");
    let (r, f) = (c.group.index("r").unwrap(), c.group.index("f").unwrap());
    let word = [BraidLetter::Cross(0, Geometry::P), BraidLetter::Cross(0, Geometry::P)];
    assert!(braid_closure(2, &word, &[r, f], &c).is_err());
    // each longitude is the other component's meridian
    let l = braid_closure(2, &word, &[r, r], &c).unwrap();
    assert_eq!(check_flat_structure(&l, &c).failing_axioms(), vec!["longitude in kernel"]);
    let l = braid_closure(2, &word, &[c.group.unit(), c.group.unit()], &c).unwrap();
    assert!(check_flat_structure(&l, &c).passed());
}

#[test]
fn parse_rejects_broken_documents() {
    let c = load("z3");
    let bad = [
        "arc=0 comp=0 g=unit\ncupR(0)\n",
        "arc=0 comp=0 g=unit\ncupR(1)\ncapL(1)\n",
        "arc=0 comp=0 g=nope\n",
        "arc=0 comp=0\ncupR(0)\ncapL(0)\n",
        "arc=0 comp=0 g=unit\ncupR(0)\nwiggle(0)\n",
        "arc=0 comp=0 g=unit\narc=1 comp=1 g=unit\ncupR(0)\nid(1) id(0)\ncapL(0)\n",
        "arc=0 comp=0 g=unit\narc=1 comp=1 g=unit\ncupR(0)\nid(0) cupR(1) id(0)\ncrossP(0,1;1) id(1) id(0)\n",
    ];
    for text in bad {
        assert!(parse_link(text, &c).is_err(), "{text}");
    }
    // one curve cannot carry two component ids
    let two_ids = "arc=0 comp=0 g=unit\narc=1 comp=1 g=unit\ncupR(0)\nid(0) cupR(0) id(0)\ncrossP(0,0;1) id(0) id(0)\nid(0) capL(0) id(0)\ncapL(0)\n";
    assert!(parse_link(two_ids, &c).is_err());
}

#[test]
fn printing_round_trips() {
    for name in ALL {
        let c = load(name);
        for f in ["empty", "unknot0", "unknot_pos1", "unknot_neg1", "lens_p2", "hopf"] {
            let l = doc(f, &c);
            let text = print_link(&l, &c);
            assert_eq!(parse_link(&text, &c).unwrap(), l, "{name} {f}");
            assert_eq!(print_link(&parse_link(&text, &c).unwrap(), &c), text);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let l = random_presentation(&c, &mut rng, 3, 5);
            let text = print_link(&l, &c);
            assert_eq!(parse_link(&text, &c).unwrap(), l, "{name}\n{text}");
        }
    }
}

#[test]
fn coupon_sites_do_not_matter() {
    for name in ALL {
        let c = load(name);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..12 {
            let l = random_presentation(&c, &mut rng, 2, 4);
            let want = link_form(&l, &c).unwrap();
            let all: Vec<Vec<(usize, usize)>> = (0..l.num_components()).map(|r| l.coupon_sites(r)).collect();
            // every site of each component, the others at their defaults
            for r in 0..l.num_components() {
                for &s in &all[r] {
                    let mut sites = l.default_sites();
                    sites[r] = s;
                    assert_eq!(link_form_at(&l, &sites, &c).unwrap(), want, "{name}");
                }
            }
        }
    }
}

#[test]
fn colorings_are_valid_and_grade_checked() {
    for name in ALL {
        let c = load(name);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let l = random_presentation(&c, &mut rng, 3, 4);
            let sites = l.default_sites();
            let base: Vec<usize> = sites.iter().map(|&(k, p)| c.labels_of_grade(l.levels()[k][p].g)[0]).collect();
            let d = canonical_coloring_at(&l, &base, &sites, &c).unwrap();
            assert!(d.source().is_empty() && d.target().is_empty());
            evaluate(&d, &c).unwrap();
            if let Some(wrong) = (0..c.num_labels()).find(|&x| l.num_components() > 0 && c.grade(x) != c.grade(base[0])) {
                let mut b = base.clone();
                b[0] = wrong;
                assert!(matches!(canonical_coloring_at(&l, &b, &sites, &c), Err(SurgeryError::GradeMismatch(0))));
            }
        }
    }
}

#[test]
fn conjugation_preserves_tau_and_closed_values() {
    for name in ALL {
        let c = load(name);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..8 {
            let l = random_presentation(&c, &mut rng, 2, 4);
            let want = tau(&l, &c).unwrap().tau;
            let sites = l.default_sites();
            let base: Vec<usize> = sites.iter().map(|&(k, p)| c.labels_of_grade(l.levels()[k][p].g)[0]).collect();
            let d = canonical_coloring_at(&l, &base, &sites, &c).unwrap();
            let v = evaluate(&d, &c).unwrap().value;
            for eta in 0..c.group.len() {
                assert_eq!(tau(&l.conjugate(eta, &c), &c).unwrap().tau, want, "{name} eta={eta}");
                assert_eq!(evaluate(&conjugate_diagram(&d, eta, &c), &c).unwrap().value, v, "{name} eta={eta}");
            }
        }
    }
}

#[test]
fn tau_report_keeps_terms_on_request() {
    let c = load("z3");
    let l = doc("hopf", &c);
    let r = tau_at(&l, &l.default_sites(), &c, true).unwrap();
    let terms = r.terms.unwrap();
    assert_eq!(terms.len(), 9);
    let sum = terms.iter().fold(c.zero(), |acc, (_, v)| acc + v);
    assert_eq!(sum, r.f_value);
}

/// Tuples (J_i) of labels of grade β_i with Π φ_{α_i}(J_i)^{-1} J_i = 1, counted
/// over all label tuples.
fn verlinde_oracle(c: &CategoryData, alphas: &[usize], betas: &[usize]) -> u64 {
    let n = alphas.len();
    let nl = c.num_labels();
    let mut count = 0;
    for code in 0..nl.pow(n as u32) {
        let js: Vec<usize> = (0..n).map(|i| code / nl.pow(i as u32) % nl).collect();
        if js.iter().zip(betas).any(|(&j, &b)| c.grade(j) != b) {
            continue;
        }
        let mut acc = c.labels.unit();
        for (&j, &a) in js.iter().zip(alphas) {
            // φ_α(J*) J
            let jinv = (0..nl).find(|&y| c.labels.mul(y, j) == c.labels.unit()).unwrap();
            acc = c.labels.mul(acc, c.labels.mul(c.act(a, jinv), j));
        }
        if acc == c.labels.unit() {
            count += 1;
        }
    }
    count
}

#[test]
fn verlinde_ranks() {
    for name in ALL {
        let c = load(name);
        assert_eq!(verlinde_rank(&c, &[], &[]).unwrap(), 1);
        let g = &c.group;
        for a in 0..g.len() {
            for b in 0..g.len() {
                if g.mul(a, b) != g.mul(b, a) {
                    assert!(verlinde_rank(&c, &[a], &[b]).is_err());
                    continue;
                }
                assert_eq!(verlinde_rank(&c, &[a], &[b]).unwrap(), verlinde_oracle(&c, &[a], &[b]), "{name}");
                for (a2, b2) in [(g.unit(), g.unit()), (a, b), (b, a)] {
                    let (al, be) = ([a, a2], [b, b2]);
                    if let Ok(v) = verlinde_rank(&c, &al, &be) {
                        assert_eq!(v, verlinde_oracle(&c, &al, &be), "{name}");
                    }
                }
            }
        }
    }
    let c = load("z3");
    assert_eq!(verlinde_rank(&c, &[0], &[0]).unwrap(), 3);
    let c = load("z2_bichar");
    let one = c.group.index("1").unwrap();
    assert_eq!(verlinde_rank(&c, &[one], &[one]).unwrap(), 1);
    assert!(verlinde_rank(&c, &[one], &[]).is_err());
}

#[test]
fn curled_unknots_agree_with_modular_data() {
    for name in ALL {
        let c = load(name);
        let m = gcrossed_core::fusion::modular_report(&c);
        assert_eq!(link_form(&doc("unknot_pos1", &c), &c).unwrap(), m.delta_plus, "{name}");
        assert_eq!(link_form(&doc("unknot_neg1", &c), &c).unwrap(), m.delta_minus, "{name}");
    }
}

#[test]
fn betti_number_normalization() {
    // Δ₋^{−σ₋} Δ₊^{−σ₊} F = 𝒟^{b₁+1} τ with b₁ = #ℓ − σ₊ − σ₋
    for name in ALL {
        let c = load(name);
        let m = gcrossed_core::fusion::modular_report(&c);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..15 {
            let l = random_presentation(&c, &mut rng, 3, 5);
            let data = linking_data(&l);
            let r = tau(&l, &c).unwrap();
            let lhs = m.delta_minus.pow(-(data.sigma_minus as i64)) * m.delta_plus.pow(-(data.sigma_plus as i64)) * &r.f_value;
            let b1 = l.num_components() as i64 - data.sigma_plus as i64 - data.sigma_minus as i64;
            assert_eq!(lhs, c.rank().pow(b1 + 1) * &r.tau, "{name}");
        }
    }
}
