#![allow(dead_code)]
use gcrossed_core::CategoryData;
use std::path::PathBuf;

pub const ALL: [&str; 7] =
    ["trivial", "z3", "z2_bichar", "z6_over_z2", "z6_over_z2_gauged", "s3_z3", "s3_z3_gauged"];

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn load(name: &str) -> CategoryData {
    let path = data_dir().join("categories").join(format!("{name}.cat"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    CategoryData::load(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Eisenstein integers a + bω with ω = ζ_3, kept apart from the engine's arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Eis(pub i64, pub i64);

impl Eis {
    pub fn mul(self, o: Eis) -> Eis {
        // ω² = -1 - ω
        let (a, b, c, d) = (self.0, self.1, o.0, o.1);
        Eis(a * c - b * d, a * d + b * c - b * d)
    }
    pub fn add(self, o: Eis) -> Eis {
        Eis(self.0 + o.0, self.1 + o.1)
    }
    pub fn omega_pow(k: i64) -> Eis {
        match k.rem_euclid(3) {
            0 => Eis(1, 0),
            1 => Eis(0, 1),
            _ => Eis(-1, -1),
        }
    }
    /// As a scalar of Q(ζ_12), where ω = z^4.
    pub fn to_cyc(self) -> gcrossed_core::CycNumber {
        use gcrossed_core::CycNumber;
        CycNumber::from_int(12, self.0) + CycNumber::from_int(12, self.1) * CycNumber::zeta_pow(12, 4)
    }
}

/// Σ_j ω^{p j²} by brute force.
pub fn gauss_sum(p: i64) -> Eis {
    (0..3).fold(Eis(0, 0), |acc, j| acc.add(Eis::omega_pow(p * j * j)))
}
