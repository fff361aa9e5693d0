//! The property suite run by `hilb2 verify`: every structural claim about
//! the finite models, re-derived by exhaustion at a configurable scale.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::catalog::catalog;
use crate::fpgroup::{
    abelianization, coset_enumeration, permutation_realization, AbelianInvariants,
    DEFAULT_COSET_CAP,
};
use crate::groups;
use crate::hilbcover::{
    construction_for, default_base_labels, hilb_square_cover, HilbConstruction, HilbError,
    MultiplicationTable, Quotient,
};
use crate::hodge::{isv_pattern_check, isv_surface_check, symmetric_square_hodge, HodgeVector};
use crate::monodromy::{
    classify_hilb_covers, cover_from_subgroup, dominates, galois_closure, is_isomorphic,
    quasietale_correspondence, restrict_to_smooth, wreath_quotient_check, CoverDescriptor,
};
use crate::permgroup::{Group, DEFAULT_GROUP_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Largest group order swept.
    pub max_group_order: usize,
    pub max_base_size: usize,
    pub group_cap: usize,
    pub coset_cap: usize,
    /// Corrupt one computed fiber so the suite must fail.
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            max_group_order: 12,
            max_base_size: 3,
            group_cap: DEFAULT_GROUP_CAP,
            coset_cap: DEFAULT_COSET_CAP,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}

/// Invariant-factor lists `d₁ | d₂ | …` (each `≥ 2`) of every abelian group
/// of order at most `max`, trivial group first.
pub fn abelian_invariant_lists(max: usize) -> Vec<Vec<u64>> {
    fn extend(prefix: &mut Vec<u64>, product: u64, max: u64, out: &mut Vec<Vec<u64>>) {
        out.push(prefix.clone());
        let start = prefix.last().copied().unwrap_or(2);
        let mut d = start;
        while product * d <= max {
            // chain built from the largest factor down, so d must be divisible by the last
            if prefix.last().is_none_or(|&l| d % l == 0) {
                prefix.push(d);
                extend(prefix, product * d, max, out);
                prefix.pop();
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    if max >= 1 {
        extend(&mut Vec::new(), 1, max as u64, &mut out);
    }
    out.sort_by_key(|v| (v.iter().product::<u64>(), v.clone()));
    out
}

/// Abelianization of a permutation group from its commutator quotient,
/// recovered from the counts `|A[n]|` of `n`-torsion points.
pub fn commutator_quotient_invariants(g: &Group, cap: usize) -> AbelianInvariants {
    let derived = g
        .derived_subgroup(cap)
        .expect("derived subgroup within cap");
    let m = g.order() / derived.order();
    // one representative per coset of the derived subgroup
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut reps = Vec::new();
    for x in g.elements() {
        if seen.contains(&g.index_of(x).unwrap()) {
            continue;
        }
        for y in derived.elements() {
            seen.insert(g.index_of(&x.compose(y)).unwrap());
        }
        reps.push(x.clone());
    }
    let divisors: Vec<usize> = (1..=m).filter(|n| m.is_multiple_of(*n)).collect();
    let torsion_counts: Vec<usize> = divisors
        .iter()
        .map(|&n| {
            reps.iter()
                .filter(|x| derived.contains(&x.pow(n as i64)))
                .count()
        })
        .collect();
    let candidates = abelian_invariant_lists(m)
        .into_iter()
        .filter(|v| v.iter().product::<u64>() as usize == m);
    for v in candidates {
        let matches = divisors.iter().zip(&torsion_counts).all(|(&n, &count)| {
            v.iter()
                .map(|&d| num_integer::gcd(n as u64, d))
                .product::<u64>() as usize
                == count
        });
        if matches {
            return AbelianInvariants::finite(v);
        }
    }
    unreachable!("a finite abelian group has some invariant factors")
}

/// `h^{[p],0}` of the symmetric square by counting swap-invariant monomials.
/// Basis vectors of the square are pairs `(x, y)` of basis vectors of the
/// surface; the swap sends `x ⊗ y` to `(-1)^{deg x · deg y} y ⊗ x`.
pub fn hodge_square_by_enumeration(h: &[u64]) -> Vec<u64> {
    let basis: Vec<u64> = h
        .iter()
        .enumerate()
        .flat_map(|(deg, &n)| std::iter::repeat_n(deg as u64, n as usize))
        .collect();
    let mut out = vec![0u64; 2 * (h.len() - 1) + 1];
    for (i, &di) in basis.iter().enumerate() {
        for (j, &dj) in basis.iter().enumerate() {
            // each swap orbit {x⊗y, ±y⊗x} contributes one invariant unless it
            // is a fixed basis vector with sign -1
            if i < j || (i == j && (di * dj).is_multiple_of(2)) {
                out[(di + dj) as usize] += 1;
            }
        }
    }
    out
}

struct Suite {
    results: Vec<CheckResult>,
}

impl Suite {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.results.push(CheckResult {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

fn regular_cover(g: &Group, base_size: usize, cap: usize) -> CoverDescriptor {
    let regular = MultiplicationTable::from_group(g).regular_group();
    CoverDescriptor::from_action(
        "S",
        default_base_labels(base_size),
        regular.degree(),
        regular.generators().to_vec(),
        cap,
    )
    .expect("regular cover")
}

fn abelian_checks(suite: &mut Suite, inv: &[u64], config: &VerifyConfig, fault: &mut bool) {
    let name = AbelianInvariants::finite(inv.to_vec()).to_string();
    let g = groups::abelian(inv);
    let d = g.order();
    let cap = config.group_cap;
    let builds: Vec<HilbConstruction> = (1..=config.max_base_size)
        .map(|b| construction_for(&g, b, cap).expect("construction within cap"))
        .collect();

    let all = |f: &dyn Fn(&HilbConstruction) -> bool| builds.iter().all(f);
    suite.push(
        format!("{name}: relations between s_g, σ, δ_g"),
        all(&|c| c.relations_hold()),
        "",
    );
    suite.push(
        format!("{name}: |J| = 2d², |H| = |K| = 2d, [J:K] = d"),
        all(&|c| c.j.order() == 2 * d * d && c.h.order() == 2 * d && c.k.order() == 2 * d),
        format!("d = {d}"),
    );
    suite.push(
        format!("{name}: sgn splits with kernel G x G"),
        all(&|c| {
            c.sign_and_splitting()
                .is_ok_and(|r| r.kernel_order == d * d)
        }),
        "",
    );
    suite.push(
        format!("{name}: Ξ-fibers have 2d² or d² points"),
        all(&|c| {
            let mut total = 0;
            let ok = (0..c.sym.len()).all(|p| {
                let f = c.big_fiber(p).unwrap();
                total += f.len();
                let expected = if c.sym.is_diagonal(p) {
                    d * d
                } else {
                    2 * d * d
                };
                f.len() == expected && f == c.preimage(p).unwrap()
            });
            ok && total == c.square_count()
        }),
        "",
    );
    let mut k_detail = String::new();
    let k_ok = builds.iter().all(|c| {
        let mut sizes = c.quotient_fibers(Quotient::Antidiagonal).fiber_sizes();
        if *fault {
            sizes[0] += 1;
            *fault = false;
        }
        k_detail = format!("{sizes:?}");
        c.k_is_normal()
            && sizes.iter().all(|&s| s == d)
            && (0..c.sym.len()).all(|p| c.representatives_distinct(Quotient::Antidiagonal, p))
    });
    suite.push(
        format!("{name}: Z²/K has d points over every point"),
        k_ok,
        k_detail,
    );

    let involutions = MultiplicationTable::from_group(&g)
        .involutions_and_identity()
        .len();
    suite.push(
        format!("{name}: H ⊴ J iff every element squares to 1; H-orbit counts"),
        all(&|c| {
            let sizes = c.xi_tilde_fibers().fiber_sizes();
            c.h_is_normal() == (involutions == d)
                && (0..c.sym.len()).all(|p| {
                    let expected = if c.sym.is_diagonal(p) {
                        (d + involutions) / 2
                    } else {
                        d
                    };
                    sizes[p] == expected
                })
        }),
        format!("{involutions} elements with g² = 1"),
    );
    suite.push(
        format!("{name}: Ξ⁻¹(diagonal) is d disjoint copies of Z"),
        all(&|c| {
            let dc = c.diagonal_components();
            dc.components.len() == d
                && dc.pairwise_disjoint
                && dc.each_bijective_with_z
                && dc.union_is_diagonal_preimage
        }),
        "",
    );
    suite.push(
        format!("{name}: components fixed by H are T_g with g² = 1"),
        all(&|c| {
            c.fixed_components() == c.gset.group.involutions_and_identity()
                && c.fixed_point_lemma_holds(Quotient::Diagonal)
                && c.fixed_point_lemma_holds(Quotient::Antidiagonal)
                && c.fixed_components_under(Quotient::Antidiagonal).len() == d
        }),
        "",
    );
    suite.push(
        format!("{name}: Z²/J is the symmetric square of B"),
        all(&|c| {
            let orbits = c.j_orbits();
            let images: BTreeSet<usize> = orbits.iter().map(|o| c.xi(o[0])).collect();
            orbits.len() == c.sym.len()
                && images.len() == c.sym.len()
                && orbits
                    .iter()
                    .all(|o| o.iter().all(|&x| c.xi(x) == c.xi(o[0])))
        }),
        "",
    );
    let hilb_ok = (1..=config.max_base_size).all(|b| {
        let xi = regular_cover(&g, b, cap);
        match hilb_square_cover(&xi, cap) {
            Ok(h) => {
                let sym = b * (b + 1) / 2;
                h.degree == d
                    && h.galois
                    && h.is_etale()
                    && h.deck_group.order() == d
                    && h.deck_group.is_abelian()
                    && h.total_points.len() == d * sym
                    && h.blowup_center.len() == d * b
            }
            Err(_) => false,
        }
    });
    suite.push(
        format!("{name}: ξ^[2] is Galois, étale, of degree d"),
        hilb_ok,
        "",
    );
}

fn nonabelian_checks(suite: &mut Suite, label: &str, g: &Group, config: &VerifyConfig) {
    let c = construction_for(g, 1, config.group_cap).expect("construction");
    suite.push(
        format!("{label}: H is not normal in J"),
        !c.h_is_normal(),
        "",
    );
    let xi = regular_cover(g, 1, config.group_cap);
    let err = hilb_square_cover(&xi, config.group_cap);
    suite.push(
        format!("{label}: ξ^[2] is refused"),
        matches!(err, Err(HilbError::NonAbelianDeckGroup { h_normal: false })),
        "",
    );
}

pub fn run_suite(config: &VerifyConfig) -> Vec<CheckResult> {
    let mut suite = Suite {
        results: Vec::new(),
    };
    let max = config.max_group_order;
    let mut fault = config.inject_fault;

    for inv in abelian_invariant_lists(max) {
        abelian_checks(&mut suite, &inv, config, &mut fault);
    }
    if max >= 6 {
        nonabelian_checks(&mut suite, "S3", &groups::symmetric(3), config);
    }
    if max >= 8 {
        nonabelian_checks(&mut suite, "Q8", &groups::quaternion(), config);
    }

    let wreath_groups = [
        ("1", Group::trivial(1)),
        ("Z/2", groups::cyclic(2)),
        ("Z/3", groups::cyclic(3)),
        ("Z/4", groups::cyclic(4)),
        ("Z/2 x Z/2", groups::abelian(&[2, 2])),
        ("S3", groups::symmetric(3)),
        ("Q8", groups::quaternion()),
    ];
    for (label, q) in wreath_groups.iter().filter(|(_, q)| q.order() <= max) {
        for n in [2, 3] {
            let outcome = wreath_quotient_check(q, n, config.group_cap);
            let (passed, detail) = match &outcome {
                Ok(r) => (
                    r.passed(),
                    format!(
                        "|W| = {}, |N| = {}, quotient {}, |Q^ab| = {}",
                        r.wreath_order, r.closure_order, r.quotient_order, r.q_abelianization_order
                    ),
                ),
                Err(e) => (false, e.to_string()),
            };
            suite.push(
                format!("wreath {label}, n = {n}: quotient is Q^ab"),
                passed,
                detail,
            );
        }
    }

    for entry in catalog() {
        let s = &entry.surface;
        let table = coset_enumeration(&s.pi1_smooth, &[], config.coset_cap.min(DEFAULT_COSET_CAP));
        let Ok(table) = table else { continue };
        if table.index() > max.min(200) {
            continue;
        }
        let realised = permutation_realization(&table, config.group_cap).expect("realisation");
        let snf = abelianization(&s.pi1_smooth);
        let brute = commutator_quotient_invariants(&realised, config.group_cap);
        suite.push(
            format!("{}: Smith form agrees with commutator quotient", entry.key),
            snf == brute,
            format!("{snf}"),
        );

        let expected = Group::subgroups(&groups::abelian(&snf.torsion))
            .map(|v| v.len())
            .unwrap_or(0);
        let rows = classify_hilb_covers(s, config.group_cap);
        let (passed, detail) = match &rows {
            Ok(rows) => (
                rows.len() == expected
                    && rows.iter().all(|r| {
                        r.hilb_cover.galois
                            && r.hilb_cover.is_etale()
                            && r.hilb_cover.deck_group.is_abelian()
                            && r.hilb_cover.degree == r.deck_invariants.torsion_order() as usize
                    }),
                format!("{} covers, {} subgroups", rows.len(), expected),
            ),
            Err(e) => (false, e.to_string()),
        };
        suite.push(
            format!("{}: one Hilb² cover per subgroup of π₁ᵃᵇ", entry.key),
            passed,
            detail,
        );

        if let Ok(rows) = &rows {
            let round_trip = rows.iter().all(|r| {
                let smooth = restrict_to_smooth(s, &r.surface_cover);
                smooth.is_etale()
                    && quasietale_correspondence(s, &smooth).as_ref() == Ok(&r.surface_cover)
            });
            suite.push(
                format!("{}: quasi-étale extension round trip", entry.key),
                round_trip,
                "",
            );
        }

        if entry.isv {
            let chain = isv_surface_check(&s.hodge).unwrap_or(false)
                && symmetric_square_hodge(&s.hodge)
                    .and_then(|h| isv_pattern_check(&h))
                    .unwrap_or(false);
            suite.push(
                format!("{}: Hilbert square passes the ISV test", entry.key),
                chain,
                "",
            );
        }
    }

    let calculus_groups = [
        ("Z/4", groups::cyclic(4)),
        ("S3", groups::symmetric(3)),
        ("D4", groups::dihedral(4)),
        ("Q8", groups::quaternion()),
        ("A4", groups::alternating4()),
    ];
    for (label, g) in calculus_groups.iter().filter(|(_, g)| g.order() <= max) {
        let subs = g.subgroups().expect("subgroups");
        let mut normalizer_ok = true;
        let mut closure_ok = true;
        for h in &subs {
            let c = cover_from_subgroup(g, h).expect("cover");
            let n = g.normalizer(h).expect("normalizer").order();
            let normal = g.has_normal_subgroup(h).expect("subgroup");
            normalizer_ok &= c.deck_group.order() == n / h.order() && c.galois == normal;
            let gc = galois_closure(&c).expect("closure");
            closure_ok &= gc.galois
                && dominates(&gc, &c)
                && is_isomorphic(&galois_closure(&gc).expect("closure"), &gc);
        }
        suite.push(
            format!("{label}: deck group of G/h is N(h)/h"),
            normalizer_ok,
            "",
        );
        suite.push(
            format!("{label}: Galois closure is Galois, dominating, idempotent"),
            closure_ok,
            "",
        );
    }

    let mut oracle_ok = true;
    for a in 0..=4 {
        for b in 0..=4 {
            for c in 0..=4 {
                let h = HodgeVector::new(vec![a, b, c]);
                oracle_ok &= symmetric_square_hodge(&h).map(|v| v.dims)
                    == Ok(hodge_square_by_enumeration(&h.dims));
            }
        }
    }
    suite.push(
        "Hodge numbers of the square agree with monomial counting",
        oracle_ok,
        "",
    );
    let ex = |v: [u64; 3]| symmetric_square_hodge(&HodgeVector::new(v.to_vec())).unwrap();
    suite.push(
        "(1,0,1) squares to the ISV pattern, (1,2,1) does not",
        isv_pattern_check(&ex([1, 0, 1])) == Ok(true)
            && isv_pattern_check(&ex([1, 2, 1])) == Ok(false),
        "",
    );
    suite.results
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_lists() {
        let v = abelian_invariant_lists(8);
        assert_eq!(v[0], Vec::<u64>::new());
        let eights: Vec<_> = v
            .iter()
            .filter(|x| x.iter().product::<u64>() == 8)
            .collect();
        assert_eq!(eights.len(), 3);
        assert_eq!(abelian_invariant_lists(12).len(), 17);
    }

    #[test]
    fn commutator_quotient() {
        assert_eq!(
            commutator_quotient_invariants(&groups::quaternion(), 1000),
            AbelianInvariants::finite(vec![2, 2])
        );
        assert_eq!(
            commutator_quotient_invariants(&groups::abelian(&[2, 4]), 1000),
            AbelianInvariants::finite(vec![2, 4])
        );
        assert_eq!(
            commutator_quotient_invariants(&groups::alternating4(), 1000),
            AbelianInvariants::finite(vec![3])
        );
    }

    #[test]
    fn small_suite_passes_and_fault_is_caught() {
        let config = VerifyConfig {
            max_group_order: 4,
            max_base_size: 2,
            ..VerifyConfig::default()
        };
        let results = run_suite(&config);
        let failed: Vec<_> = results.iter().filter(|r| !r.passed).collect();
        assert!(failed.is_empty(), "{failed:?}");
        let faulty = run_suite(&VerifyConfig {
            inject_fault: true,
            ..config
        });
        assert_eq!(faulty.iter().filter(|r| !r.passed).count(), 1);
    }
}
