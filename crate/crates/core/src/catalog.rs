//! Built-in surface descriptors, keyed by the fundamental group of the smooth
//! locus. Illustrative only: this is not a classification of any class of
//! surfaces.

use crate::fpgroup::parse_presentation;
use crate::hodge::HodgeVector;
use crate::monodromy::{AdeType, SingularPoint, SurfaceDescriptor};

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub key: String,
    pub description: String,
    pub surface: SurfaceDescriptor,
    /// Whether the surface itself passes the irreducible-symplectic test.
    pub isv: bool,
}

fn entry(
    key: &str,
    description: &str,
    presentation: &str,
    singular_points: Vec<SingularPoint>,
    hodge: [u64; 3],
    isv: bool,
) -> CatalogEntry {
    CatalogEntry {
        key: key.to_string(),
        description: description.to_string(),
        surface: SurfaceDescriptor {
            name: key.to_string(),
            pi1_smooth: parse_presentation(presentation).expect("catalog presentation"),
            singular_points,
            hodge: HodgeVector::new(hodge.to_vec()),
        },
        isv,
    }
}

pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = vec![
        entry(
            "simply-connected",
            "trivial fundamental group, symplectic (K3-like) Hodge numbers",
            "< | >",
            vec![],
            [1, 0, 1],
            true,
        ),
        entry(
            "enriques-type",
            "Z/2 smooth-locus group, one A1 point whose local loop is the generator",
            "< a | a^2 >",
            vec![SingularPoint {
                label: "p1".into(),
                ade: AdeType::A(1),
                local_loops: Some(vec!["a".into()]),
            }],
            [1, 0, 0],
            false,
        ),
    ];
    for n in 2..=8 {
        out.push(entry(
            &format!("cyclic-{n}"),
            &format!("cyclic smooth-locus group of order {n}"),
            &format!("< a | a^{n} >"),
            vec![],
            [1, 0, 0],
            false,
        ));
    }
    out.extend([
        entry(
            "klein-four",
            "Z/2 x Z/2 smooth-locus group",
            "< a b | a^2, b^2, a b a^-1 b^-1 >",
            vec![],
            [1, 0, 0],
            false,
        ),
        entry(
            "quaternion",
            "quaternion group of order 8",
            "< a b | a^4, a^2 b^-2, b^-1 a b a >",
            vec![],
            [1, 0, 0],
            false,
        ),
        entry(
            "s3",
            "nonabelian group of order 6; abelianization Z/2",
            "< a b | a^2, b^3, (a b)^2 >",
            vec![],
            [1, 0, 0],
            false,
        ),
        entry(
            "a4",
            "alternating group of order 12; abelianization Z/3",
            "< a b | a^2, b^3, (a b)^3 >",
            vec![
                SingularPoint {
                    label: "p1".into(),
                    ade: AdeType::A(2),
                    local_loops: Some(vec!["b".into()]),
                },
                SingularPoint {
                    label: "p2".into(),
                    ade: AdeType::A(1),
                    local_loops: Some(vec!["a".into()]),
                },
            ],
            [1, 0, 0],
            false,
        ),
    ]);
    out
}

pub fn lookup(key: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.key == key)
}

pub fn keys() -> Vec<String> {
    catalog().into_iter().map(|e| e.key).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_unique() {
        let mut k = keys();
        let n = k.len();
        k.sort();
        k.dedup();
        assert_eq!(k.len(), n);
        assert!(lookup("quaternion").is_some());
        assert!(lookup("nope").is_none());
    }
}
