//! Small named groups as permutation groups, and the `--group` spec syntax.
//!
//! Accepted specs: `1` (trivial), `Zn`, products such as `Z2xZ2` or `Z2xZ6`,
//! `S3`, `S4`, `A4`, `Dn` (dihedral of order 2n), `Q8`.

use thiserror::Error;

use crate::permgroup::{Group, Permutation, DEFAULT_GROUP_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupSpecError {
    #[error("unrecognised group spec {0:?}")]
    Unrecognised(String),
}

pub fn cyclic(n: usize) -> Group {
    let n = n.max(1);
    let cycle: Vec<usize> = (0..n).collect();
    let gens = if n > 1 {
        vec![Permutation::from_cycles(n, &[&cycle]).expect("cycle")]
    } else {
        vec![]
    };
    Group::generate(n, gens, DEFAULT_GROUP_CAP).expect("cyclic group within cap")
}

/// Direct product acting on the disjoint union of the factors' domains.
pub fn direct_product(factors: &[Group]) -> Group {
    let degree: usize = factors.iter().map(Group::degree).sum::<usize>().max(1);
    let mut gens = Vec::new();
    let mut offset = 0;
    for f in factors {
        for g in f.generators() {
            let mut images: Vec<usize> = (0..degree).collect();
            for i in 0..f.degree() {
                images[offset + i] = offset + g.apply(i);
            }
            gens.push(Permutation::from_images(images).expect("block permutation"));
        }
        offset += f.degree();
    }
    Group::generate(degree, gens, DEFAULT_GROUP_CAP).expect("product within cap")
}

pub fn abelian(invariants: &[u64]) -> Group {
    let factors: Vec<Group> = invariants
        .iter()
        .filter(|&&d| d > 1)
        .map(|&d| cyclic(d as usize))
        .collect();
    if factors.is_empty() {
        return Group::trivial(1);
    }
    direct_product(&factors)
}

pub fn symmetric(n: usize) -> Group {
    Group::symmetric(n, DEFAULT_GROUP_CAP).expect("symmetric group within cap")
}

pub fn alternating4() -> Group {
    let gens = vec![
        Permutation::from_cycles(4, &[&[0, 1, 2]]).unwrap(),
        Permutation::from_cycles(4, &[&[1, 2, 3]]).unwrap(),
    ];
    Group::generate(4, gens, DEFAULT_GROUP_CAP).unwrap()
}

/// Dihedral group of order `2n` acting on an `n`-gon.
pub fn dihedral(n: usize) -> Group {
    if n <= 2 {
        return abelian(&[2, n.max(1) as u64]);
    }
    let rotation: Vec<usize> = (0..n).collect();
    let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    let gens = vec![
        Permutation::from_cycles(n, &[&rotation]).unwrap(),
        Permutation::from_images(reflection).unwrap(),
    ];
    Group::generate(n, gens, DEFAULT_GROUP_CAP).unwrap()
}

/// Quaternion group of order 8 in its regular representation.
pub fn quaternion() -> Group {
    // Points 0..8 encode ±1, ±i, ±j, ±k as (unit, sign) = (p / 2, p % 2).
    // unit 0 = 1, 1 = i, 2 = j, 3 = k.
    fn mul(a: (usize, usize), b: (usize, usize)) -> (usize, usize) {
        const T: [[(usize, usize); 4]; 4] = [
            [(0, 0), (1, 0), (2, 0), (3, 0)],
            [(1, 0), (0, 1), (3, 0), (2, 1)],
            [(2, 0), (3, 1), (0, 1), (1, 0)],
            [(3, 0), (2, 0), (1, 1), (0, 1)],
        ];
        let (u, s) = T[a.0][b.0];
        (u, (s + a.1 + b.1) % 2)
    }
    let left = |x: (usize, usize)| -> Permutation {
        let images = (0..8)
            .map(|p| {
                let (u, s) = mul(x, (p / 2, p % 2));
                2 * u + s
            })
            .collect();
        Permutation::from_images(images).unwrap()
    };
    Group::generate(8, vec![left((1, 0)), left((2, 0))], DEFAULT_GROUP_CAP).unwrap()
}

/// Special linear group SL(2, 3) of order 24 acting on the 8 nonzero vectors of F₃².
pub fn sl2_3() -> Group {
    let vectors: Vec<(i64, i64)> = (0..3)
        .flat_map(|a| (0..3).map(move |b| (a, b)))
        .filter(|&v| v != (0, 0))
        .collect();
    let act = |m: [[i64; 2]; 2]| -> Permutation {
        let images = vectors
            .iter()
            .map(|&(x, y)| {
                let w = (
                    (m[0][0] * x + m[0][1] * y) % 3,
                    (m[1][0] * x + m[1][1] * y) % 3,
                );
                vectors.iter().position(|&v| v == w).unwrap()
            })
            .collect();
        Permutation::from_images(images).unwrap()
    };
    Group::generate(
        8,
        vec![act([[1, 1], [0, 1]]), act([[1, 0], [1, 1]])],
        DEFAULT_GROUP_CAP,
    )
    .unwrap()
}

/// Parses a group spec such as `Z4`, `Z2xZ2`, `S3`, `Q8`.
pub fn parse_group_spec(spec: &str) -> Result<Group, GroupSpecError> {
    let bad = || GroupSpecError::Unrecognised(spec.to_string());
    let s = spec.trim();
    match s {
        "1" | "trivial" | "Z1" => return Ok(Group::trivial(1)),
        "Q8" => return Ok(quaternion()),
        "A4" => return Ok(alternating4()),
        "SL23" | "SL(2,3)" => return Ok(sl2_3()),
        _ => {}
    }
    let number = |t: &str| -> Result<usize, GroupSpecError> {
        let n: usize = t.parse().map_err(|_| bad())?;
        if n == 0 || n > 64 {
            return Err(bad());
        }
        Ok(n)
    };
    if let Some(rest) = s.strip_prefix('S') {
        let n = number(rest)?;
        if n > 6 {
            return Err(bad());
        }
        return Ok(symmetric(n));
    }
    if let Some(rest) = s.strip_prefix('D') {
        return Ok(dihedral(number(rest)?));
    }
    let mut orders = Vec::new();
    for factor in s.split(['x', 'X', '*']) {
        let rest = factor.trim().strip_prefix('Z').ok_or_else(bad)?;
        orders.push(number(rest)? as u64);
    }
    Ok(abelian(&orders))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(parse_group_spec("1").unwrap().order(), 1);
        assert_eq!(parse_group_spec("Z4").unwrap().order(), 4);
        assert_eq!(parse_group_spec("Z2xZ2").unwrap().order(), 4);
        assert_eq!(parse_group_spec("Z2xZ6").unwrap().order(), 12);
        assert_eq!(parse_group_spec("S3").unwrap().order(), 6);
        assert_eq!(parse_group_spec("D4").unwrap().order(), 8);
        assert_eq!(parse_group_spec("Q8").unwrap().order(), 8);
        assert_eq!(parse_group_spec("A4").unwrap().order(), 12);
        assert_eq!(sl2_3().order(), 24);
        assert!(parse_group_spec("Y3").is_err());
        assert!(parse_group_spec("Z0").is_err());
    }

    #[test]
    fn quaternion_is_not_dihedral() {
        let q = quaternion();
        let involutions = q.elements().iter().filter(|x| x.order() == 2).count();
        assert_eq!(involutions, 1);
        assert!(!q.is_abelian());
    }
}
