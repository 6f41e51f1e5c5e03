mod common;

use common::{load, ALL};
use gcrossed_core::diagram::Geometry;
use gcrossed_core::kirby::{apply_kirby, fenn_rourke_options, kirby_fuzz, KirbyMove, LinkBuilder};
use gcrossed_core::surgery::{linking_data, tau, GLinkPresentation, SurgeryError};
use gcrossed_core::CategoryData;

/// 0-framed unknot encircled by a second unknot of framing `t_curl`, the
/// first strand carrying `strand_curl` curls.
fn encircled_unknot(c: &CategoryData, t_curl: i64, strand_curl: i64) -> Result<GLinkPresentation, SurgeryError> {
    let u = c.group.unit();
    let mut b = LinkBuilder::new(c);
    b.cup(0, true, 0, u)?.cup(0, true, 1, u)?;
    b.cross(1, Geometry::N)?.cross(0, Geometry::P)?;
    for _ in 0..t_curl.abs() {
        b.kink(1, t_curl > 0)?;
    }
    b.cap(1)?;
    for _ in 0..strand_curl.abs() {
        b.kink(0, strand_curl > 0)?;
    }
    b.cap(0)?;
    b.finish()
}

#[test]
fn fenn_rourke_on_an_unknot_matches_the_hand_built_link() {
    for name in ALL {
        let c = load(name);
        let base = encircled_unknot(&c, 0, 0).unwrap();
        let unknot = {
            let mut b = LinkBuilder::new(&c);
            b.cup(0, true, 0, c.group.unit()).unwrap().cap(0).unwrap();
            b.finish().unwrap()
        };
        assert_eq!(linking_data(&base).matrix, vec![vec![0, 1], vec![1, 0]]);
        let moved = apply_kirby(&unknot, KirbyMove::FennRourke { level: 1, pos: 0, m: 1, g: c.group.unit() }, &c).unwrap();
        assert_eq!(linking_data(&moved).matrix, vec![vec![-1, 1], vec![1, -1]]);
        let want = tau(&unknot, &c).unwrap().tau;
        assert_eq!(tau(&moved, &c).unwrap().tau, want, "{name}");
        assert_eq!(tau(&encircled_unknot(&c, -1, -1).unwrap(), &c).unwrap().tau, want, "{name}");
    }
}

#[test]
fn wrong_handed_fenn_rourke_changes_tau() {
    let c = load("z3");
    let want = c.one();
    let wrong = encircled_unknot(&c, -1, 1).unwrap();
    assert_ne!(tau(&wrong, &c).unwrap().tau, want);
    let wrong = encircled_unknot(&c, 1, -1).unwrap();
    assert_ne!(tau(&wrong, &c).unwrap().tau, want);
}

#[test]
fn fenn_rourke_colors_keep_the_bundle() {
    let c = load("s3_z3");
    let r = c.group.index("r").unwrap();
    // two parallel strands colored r: the circle around both must commute with r·r
    let mut b = LinkBuilder::new(&c);
    b.cup(0, true, 0, r).unwrap().cup(1, true, 1, r).unwrap().cap(1).unwrap().cap(0).unwrap();
    let l = b.finish().unwrap();
    let opts = fenn_rourke_options(&l, 2, 0, 2, &c);
    assert!(!opts.is_empty());
    let want = tau(&l, &c).unwrap().tau;
    for mv in opts {
        assert_eq!(tau(&apply_kirby(&l, mv, &c).unwrap(), &c).unwrap().tau, want);
    }
}

#[test]
fn kirby_moves_preserve_tau() {
    for (i, name) in ALL.iter().enumerate() {
        let c = load(name);
        let r = kirby_fuzz(&c, 500, 1000 + i as u64, 3);
        assert!(r.passed(), "{name}: {:?}", &r.failures[..r.failures.len().min(5)]);
        assert_eq!(r.pairs, 500);
        for kind in ["first", "fenn-rourke", "reverse", "reidemeister2", "curl-pair"] {
            assert!(r.moves.get(kind).copied().unwrap_or(0) > 0, "{name}: no {kind} moves");
        }
        assert!(r.regaugings > 0 && r.conjugations == 500);
    }
}
