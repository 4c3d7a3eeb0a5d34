#![allow(dead_code)]

use std::path::PathBuf;

use birkhoff::io::parse_tensor;
use birkhoff::{EquivalenceTransform, Rational, Tensor};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

/// One transcribed class of the 4-dimensional polytope of order 3, with the
/// support size and permanent printed next to it.
pub struct Golden {
    pub number: usize,
    pub tensor: Tensor<Rational>,
    pub support_size: usize,
    pub permanent: Rational,
}

/// Printed support-size distribution for the 4-dimensional order-3 case.
pub const SUPPORT_COUNTS_3_4: [(u64, usize); 12] = [
    (27, 1),
    (49, 1),
    (51, 1),
    (52, 1),
    (58, 1),
    (59, 2),
    (60, 2),
    (61, 2),
    (62, 3),
    (63, 5),
    (64, 1),
    (65, 1),
];

/// Printed denominator distribution for the 4-dimensional order-3 case.
pub const DELTA_COUNTS_3_4: [(u64, usize); 6] = [(1, 1), (2, 3), (3, 6), (4, 6), (5, 4), (6, 1)];

/// Printed support-size distribution for the 3-dimensional order-4 case.
pub const SUPPORT_COUNTS_4_3: [(u64, usize); 13] = [
    (16, 2),
    (25, 1),
    (27, 2),
    (28, 1),
    (29, 2),
    (30, 7),
    (31, 7),
    (32, 16),
    (33, 22),
    (34, 31),
    (35, 103),
    (36, 103),
    (37, 236),
];

pub const DELTA_COUNTS_4_3: [(u64, usize); 8] = [(1, 2), (2, 18), (3, 155), (4, 215), (5, 104), (6, 32), (7, 5), (8, 2)];

/// Class numbers of the symmetric classes among the 21.
pub const SYMMETRIC_3_4: [usize; 6] = [1, 4, 7, 9, 13, 19];

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/order3_dim4")
}

/// `256/27`, `27` or `10.5`.
fn parse_printed(s: &str) -> Rational {
    if let Some((whole, frac)) = s.split_once('.') {
        let den = BigInt::from(10).pow(frac.len() as u32);
        let num: BigInt = format!("{whole}{frac}").parse().expect("decimal");
        Rational::new(num, den)
    } else {
        s.parse().expect("fraction")
    }
}

pub fn golden_classes() -> Vec<Golden> {
    (1..=21)
        .map(|number| {
            let path = data_dir().join(format!("a{number:02}.txt"));
            let text = std::fs::read_to_string(&path).expect("golden file");
            let header = text.lines().next().expect("header comment");
            let field = |key: &str| {
                header
                    .split(", ")
                    .find_map(|f| f.strip_prefix(key))
                    .unwrap_or_else(|| panic!("{key} missing in {}", path.display()))
                    .trim()
                    .to_string()
            };
            Golden {
                number,
                tensor: parse_tensor(&text).expect("golden file parses"),
                support_size: field("N = ").parse().expect("N"),
                permanent: parse_printed(&field("per = ")),
            }
        })
        .collect()
}

pub fn random_transform(rng: &mut impl Rng, dim: usize, order: usize) -> EquivalenceTransform {
    let mut axes: Vec<usize> = (0..dim).collect();
    axes.shuffle(rng);
    let perms = (0..dim)
        .map(|_| {
            let mut p: Vec<usize> = (0..order).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    EquivalenceTransform::new(axes, perms).expect("valid permutations")
}
