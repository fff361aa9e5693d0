//! Covers as monodromy data: the subgroup correspondence, deck groups,
//! Galois closure, the wreath-product kernel check, and the classification
//! of covers of a Hilbert square.
//!
//! A cover of degree `d` is recorded by the permutations of one fiber
//! `{0, …, d-1}` induced by the base generators. Total points are indexed
//! base-major: point `i` over base point `b` is `b·d + i`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fpgroup::{
    abelianize, subgroups_of_abelian, AbelianInvariants, AbelianSubgroup, FpError, Presentation,
};
use crate::hilbcover::{default_base_labels, hilb_square_cover, HilbError, MultiplicationTable};
use crate::hodge::HodgeVector;
use crate::permgroup::{Group, GroupError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonodromyError {
    #[error("subgroup is not contained in the group")]
    NotASubgroup,
    #[error("abelianization has free rank {rank}; only finite abelianizations are classified")]
    InfiniteAbelianization { rank: usize },
    #[error("cover has {found} generator images but the base has {expected} generators")]
    GeneratorMismatch { expected: usize, found: usize },
    #[error("unknown ADE type {0:?}")]
    BadAdeType(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Presentation(#[from] FpError),
    #[error(transparent)]
    Hilb(#[from] HilbError),
}

impl MonodromyError {
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(
            self,
            MonodromyError::Group(GroupError::CapExceeded { .. })
                | MonodromyError::Presentation(FpError::CapExceeded { .. })
                | MonodromyError::Presentation(FpError::Group(GroupError::CapExceeded { .. }))
                | MonodromyError::Hilb(HilbError::Group(GroupError::CapExceeded { .. }))
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverDescriptor {
    pub base_label: String,
    pub base_points: Vec<String>,
    pub total_points: Vec<String>,
    pub degree: usize,
    /// Monodromy of each base generator on the fiber `{0, …, degree-1}`.
    pub generator_images: Vec<Permutation>,
    pub monodromy: Group,
    pub deck_group: Group,
    pub galois: bool,
    /// Marked base points over which the cover branches.
    pub ramification_labels: BTreeSet<String>,
    /// Total-space points lying over the diagonal image (the blow-up centre).
    #[serde(default)]
    pub blowup_center: BTreeSet<String>,
}

impl CoverDescriptor {
    /// Descriptor of the cover with the given fiber monodromy. The deck group
    /// is the centraliser of the monodromy, found by propagation.
    pub fn from_action(
        base_label: impl Into<String>,
        base_points: Vec<String>,
        degree: usize,
        generator_images: Vec<Permutation>,
        cap: usize,
    ) -> Result<Self, MonodromyError> {
        let deck_group = deck_group_of_action(degree, &generator_images, cap)?;
        Self::assemble(
            base_label.into(),
            base_points,
            degree,
            generator_images,
            deck_group,
            cap,
        )
    }

    fn assemble(
        base_label: String,
        base_points: Vec<String>,
        degree: usize,
        generator_images: Vec<Permutation>,
        deck_group: Group,
        cap: usize,
    ) -> Result<Self, MonodromyError> {
        for g in &generator_images {
            if g.degree() != degree {
                return Err(GroupError::DomainMismatch {
                    expected: degree,
                    found: g.degree(),
                }
                .into());
            }
        }
        let monodromy = Group::generate(degree, generator_images.clone(), cap)?;
        let galois = monodromy.is_transitive() && deck_group.order() == degree;
        let total_points = base_points
            .iter()
            .flat_map(|b| (0..degree).map(move |i| format!("{b}#{i}")))
            .collect();
        Ok(Self {
            base_label,
            base_points,
            total_points,
            degree,
            generator_images,
            monodromy,
            deck_group,
            galois,
            ramification_labels: BTreeSet::new(),
            blowup_center: BTreeSet::new(),
        })
    }

    pub fn is_etale(&self) -> bool {
        self.ramification_labels.is_empty()
    }

    pub fn is_connected(&self) -> bool {
        self.monodromy.is_transitive()
    }

    /// Whether the stabiliser of fiber point 0 is normal in the monodromy group.
    pub fn stabilizer_is_normal(&self) -> bool {
        let stab = self.monodromy.stabilizer(0);
        self.monodromy
            .has_normal_subgroup(&stab)
            .expect("stabiliser is a subgroup")
    }

    /// Whether the deck group acts transitively on the fiber.
    pub fn deck_is_transitive(&self) -> bool {
        self.deck_group
            .orbits_on(self.degree)
            .is_ok_and(|o| o.len() == 1)
    }

    /// Drops the given marked base points. Unramified descriptors stay
    /// unramified; a label that survives keeps its branching.
    pub fn restrict(&self, removed: &BTreeSet<String>) -> CoverDescriptor {
        let mut out = self.clone();
        out.ramification_labels = self
            .ramification_labels
            .difference(removed)
            .cloned()
            .collect();
        out
    }
}

/// Map `φ` from the fiber of `a` to the fiber of `b` with `φ(0) = target`
/// commuting with every generator, if one exists. `a` must be transitive.
pub fn equivariant_map(
    a_degree: usize,
    a_gens: &[Permutation],
    b_gens: &[Permutation],
    target: usize,
) -> Option<Vec<usize>> {
    if a_gens.len() != b_gens.len() {
        return None;
    }
    let mut phi = vec![usize::MAX; a_degree];
    phi[0] = target;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for (ga, gb) in a_gens.iter().zip(b_gens) {
            let (y, fy) = (ga.apply(x), gb.apply(phi[x]));
            if phi[y] == usize::MAX {
                phi[y] = fy;
                queue.push_back(y);
            } else if phi[y] != fy {
                return None;
            }
        }
    }
    phi.iter().all(|&v| v != usize::MAX).then_some(phi)
}

/// Deck transformations of a transitive action: all self-maps commuting with
/// the generators.
pub fn deck_group_of_action(
    degree: usize,
    generators: &[Permutation],
    cap: usize,
) -> Result<Group, GroupError> {
    if degree == 0 {
        return Ok(Group::trivial(0));
    }
    let mut deck = Vec::new();
    for y in 1..degree {
        if let Some(phi) = equivariant_map(degree, generators, generators, y) {
            if let Ok(p) = Permutation::from_images(phi) {
                deck.push(p);
            }
        }
    }
    Group::generate(degree, deck, cap)
}

/// `a` dominates `b`: there is a cover map from `a` onto `b` over the base.
pub fn dominates(a: &CoverDescriptor, b: &CoverDescriptor) -> bool {
    a.generator_images.len() == b.generator_images.len()
        && a.is_connected()
        && (0..b.degree).any(|y| {
            equivariant_map(a.degree, &a.generator_images, &b.generator_images, y).is_some()
        })
}

pub fn is_isomorphic(a: &CoverDescriptor, b: &CoverDescriptor) -> bool {
    a.degree == b.degree && dominates(a, b)
}

/// Cover given by the left action of `g` on the cosets `x·h`.
pub fn cover_from_subgroup(g: &Group, h: &Group) -> Result<CoverDescriptor, MonodromyError> {
    let base = vec!["*".to_string()];
    cover_from_subgroup_with(g, h, g.generators(), "base", base)
}

/// As [`cover_from_subgroup`], with the base generators given explicitly
/// as elements of `g`.
pub fn cover_from_subgroup_with(
    g: &Group,
    h: &Group,
    base_generators: &[Permutation],
    base_label: &str,
    base_points: Vec<String>,
) -> Result<CoverDescriptor, MonodromyError> {
    if !h.is_subgroup_of(g) || base_generators.iter().any(|x| !g.contains(x)) {
        return Err(MonodromyError::NotASubgroup);
    }
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for (i, x) in g.elements().iter().enumerate() {
        if coset_of[i] != usize::MAX {
            continue;
        }
        for y in h.elements() {
            coset_of[g.index_of(&x.compose(y)).unwrap()] = reps.len();
        }
        reps.push(x.clone());
    }
    let degree = reps.len();
    let coset = |x: &Permutation| coset_of[g.index_of(x).unwrap()];
    let act = |f: &dyn Fn(&Permutation) -> Permutation| -> Permutation {
        Permutation::from_images(reps.iter().map(|x| coset(&f(x))).collect()).expect("coset action")
    };
    let generator_images = base_generators
        .iter()
        .map(|gamma| act(&|x| gamma.compose(x)))
        .collect();
    let normalizer = g.normalizer(h)?;
    let deck_gens = normalizer
        .generators()
        .iter()
        .map(|n| act(&|x| x.compose(n)))
        .collect();
    let deck_group = Group::generate(degree, deck_gens, g.order().max(1))?;
    CoverDescriptor::assemble(
        base_label.to_string(),
        base_points,
        degree,
        generator_images,
        deck_group,
        g.order().max(1),
    )
}

/// Coset action on the core of the point stabiliser: the regular action of
/// the monodromy group.
pub fn galois_closure(c: &CoverDescriptor) -> Result<CoverDescriptor, MonodromyError> {
    let m = &c.monodromy;
    let core = m.core(&m.stabilizer(0))?;
    let mut out = cover_from_subgroup_with(
        m,
        &core,
        &c.generator_images,
        &c.base_label,
        c.base_points.clone(),
    )?;
    out.ramification_labels = c.ramification_labels.clone();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum AdeType {
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
}

impl AdeType {
    /// Order of the local fundamental group `C²/Γ`.
    pub fn local_group_order(self) -> u64 {
        match self {
            AdeType::A(n) => n as u64 + 1,
            AdeType::D(n) => 4 * (n as u64 - 2),
            AdeType::E6 => 24,
            AdeType::E7 => 48,
            AdeType::E8 => 120,
        }
    }
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdeType::A(n) => write!(f, "A{n}"),
            AdeType::D(n) => write!(f, "D{n}"),
            AdeType::E6 => write!(f, "E6"),
            AdeType::E7 => write!(f, "E7"),
            AdeType::E8 => write!(f, "E8"),
        }
    }
}

impl FromStr for AdeType {
    type Err = MonodromyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MonodromyError::BadAdeType(s.to_string());
        let (kind, n) = s.trim().split_at(1.min(s.trim().len()));
        let n: u32 = n.parse().map_err(|_| bad())?;
        match (kind, n) {
            ("A", n) if n >= 1 => Ok(AdeType::A(n)),
            ("D", n) if n >= 4 => Ok(AdeType::D(n)),
            ("E", 6) => Ok(AdeType::E6),
            ("E", 7) => Ok(AdeType::E7),
            ("E", 8) => Ok(AdeType::E8),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for AdeType {
    type Error = MonodromyError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<AdeType> for String {
    fn from(t: AdeType) -> String {
        t.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub label: String,
    pub ade: AdeType,
    /// Words in the generators of the smooth-locus group for loops around
    /// the point. Without them any nontrivial cover is treated as branched.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_loops: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceDescriptor {
    pub name: String,
    pub pi1_smooth: Presentation,
    #[serde(default)]
    pub singular_points: Vec<SingularPoint>,
    pub hodge: HodgeVector,
}

/// Extends an étale cover of the smooth locus over the singular points,
/// marking each point whose local loops act nontrivially on the fiber.
pub fn quasietale_correspondence(
    s: &SurfaceDescriptor,
    c: &CoverDescriptor,
) -> Result<CoverDescriptor, MonodromyError> {
    let expected = s.pi1_smooth.generator_count();
    if c.generator_images.len() != expected {
        return Err(MonodromyError::GeneratorMismatch {
            expected,
            found: c.generator_images.len(),
        });
    }
    let mut out = c.clone();
    for p in &s.singular_points {
        let branched = match &p.local_loops {
            None => c.degree > 1,
            Some(loops) => {
                let mut any = false;
                for text in loops {
                    let word = s.pi1_smooth.parse_word(text)?;
                    let mut m = Permutation::identity(c.degree);
                    for l in &word {
                        let g = &c.generator_images[l.generator];
                        m = m.compose(&if l.inverse { g.inverse() } else { g.clone() });
                    }
                    any |= !m.is_identity();
                }
                any
            }
        };
        if branched {
            out.ramification_labels.insert(p.label.clone());
        }
    }
    Ok(out)
}

/// Inverse of [`quasietale_correspondence`]: restriction to the smooth locus.
pub fn restrict_to_smooth(s: &SurfaceDescriptor, c: &CoverDescriptor) -> CoverDescriptor {
    let singular = s.singular_points.iter().map(|p| p.label.clone()).collect();
    c.restrict(&singular)
}

/// One row of the classification: a subgroup `M` of the abelianization, the
/// induced cover of the surface, and its Hilbert-square cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedCover {
    pub subgroup: AbelianSubgroup,
    /// Invariant factors of the deck group `π₁ᵃᵇ / M`.
    pub deck_invariants: AbelianInvariants,
    pub surface_cover: CoverDescriptor,
    pub hilb_cover: CoverDescriptor,
}

/// Number of base points used for the finite surface model.
pub const SURFACE_MODEL_POINTS: usize = 2;

/// Covers of the Hilbert square, one per subgroup of the abelianized
/// smooth-locus group, in ascending degree.
pub fn classify_hilb_covers(
    s: &SurfaceDescriptor,
    cap: usize,
) -> Result<Vec<ClassifiedCover>, MonodromyError> {
    let ab = abelianize(&s.pi1_smooth);
    if ab.invariants.rank > 0 {
        return Err(MonodromyError::InfiniteAbelianization {
            rank: ab.invariants.rank,
        });
    }
    let mut subgroups = subgroups_of_abelian(&ab.invariants)?;
    subgroups.reverse();
    subgroups
        .into_par_iter()
        .map(|m| classify_one(s, &ab.generator_images, m, cap))
        .collect()
}

fn classify_one(
    s: &SurfaceDescriptor,
    images: &[Vec<i64>],
    m: AbelianSubgroup,
    cap: usize,
) -> Result<ClassifiedCover, MonodromyError> {
    let lattice = &m.lattice;
    let k = lattice.len();
    let reduce = |v: &mut [i64]| {
        for i in 0..k {
            let a = lattice[i][i] as i64;
            let c = v[i].div_euclid(a);
            for j in i..k {
                v[j] -= c * lattice[i][j] as i64;
            }
        }
    };
    // canonical coset representatives 0 ≤ vᵢ < mᵢᵢ, lexicographic
    let mut points: Vec<Vec<i64>> = vec![vec![]];
    for i in 0..k {
        points = points
            .into_iter()
            .flat_map(|p| {
                (0..lattice[i][i] as i64).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    let degree = points.len();
    let generator_images = images
        .iter()
        .map(|img| {
            let targets = points
                .iter()
                .map(|p| {
                    let mut v: Vec<i64> = p.iter().zip(img).map(|(a, b)| a + b).collect();
                    reduce(&mut v);
                    points.binary_search(&v).expect("reduced representative")
                })
                .collect();
            Permutation::from_images(targets).expect("translation")
        })
        .collect();
    let xi = CoverDescriptor::from_action(
        s.name.clone(),
        default_base_labels(SURFACE_MODEL_POINTS),
        degree,
        generator_images,
        cap,
    )?;
    let hilb_cover = hilb_square_cover(&xi, cap)?;
    let surface_cover = quasietale_correspondence(s, &xi)?;
    Ok(ClassifiedCover {
        deck_invariants: m.quotient.clone(),
        subgroup: m,
        surface_cover,
        hilb_cover,
    })
}

/// `Qⁿ ⋊ Sₙ` acting on `n·|Q|` points by `(i, q) ↦ (π(i), u_{π(i)}·q)`.
#[derive(Debug, Clone)]
pub struct WreathModel {
    pub q: Group,
    pub n: usize,
    pub wreath: Group,
    pub transposition_lifts: Vec<Permutation>,
    table: MultiplicationTable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WreathReport {
    pub q_order: usize,
    pub n: usize,
    pub wreath_order: usize,
    /// Normal closure of the transposition lifts.
    pub closure_order: usize,
    pub quotient_order: usize,
    pub q_abelianization_order: usize,
    pub quotient_is_abelian: bool,
    /// Every `(σ·g⁻¹)∗g` lies in the closure.
    pub closure_contains_tuple_elements: bool,
    /// The composition map onto `Qᵃᵇ` is a surjective homomorphism with
    /// kernel the closure.
    pub composition_is_isomorphism: bool,
    /// Order of the subgroup generated by the `(σ·g⁻¹)∗g` alone.
    pub tuple_subgroup_order: usize,
    /// Order of their normal closure.
    pub tuple_normal_closure_order: usize,
}

impl WreathReport {
    pub fn passed(&self) -> bool {
        self.quotient_order == self.q_abelianization_order
            && self.quotient_is_abelian
            && self.closure_contains_tuple_elements
            && self.composition_is_isomorphism
    }
}

impl WreathModel {
    pub fn new(q: &Group, n: usize, cap: usize) -> Result<Self, MonodromyError> {
        let table = MultiplicationTable::from_group(q);
        let qn = table.order();
        let mut estimate: usize = (1..=n).product();
        for _ in 0..n {
            estimate = estimate.saturating_mul(qn);
        }
        if estimate > cap {
            return Err(GroupError::CapExceeded { cap }.into());
        }
        let mut model = Self {
            q: q.clone(),
            n,
            wreath: Group::trivial(n * qn),
            transposition_lifts: Vec::new(),
            table,
        };
        let e = model.table.identity();
        let ident: Vec<usize> = (0..n).collect();
        let mut gens = Vec::new();
        for x in q.generators() {
            let xi = q.index_of(x).unwrap();
            let mut u = vec![e; n];
            u[0] = xi;
            gens.push(model.element(&u, &ident));
        }
        for i in 0..n.saturating_sub(1) {
            let mut pi = ident.clone();
            pi.swap(i, i + 1);
            let lift = model.element(&vec![e; n], &pi);
            model.transposition_lifts.push(lift.clone());
            gens.push(lift);
        }
        model.wreath = Group::generate(n * qn, gens, cap)?;
        Ok(model)
    }

    /// The element `(u, π)`.
    pub fn element(&self, u: &[usize], pi: &[usize]) -> Permutation {
        let qn = self.table.order();
        let images = (0..self.n * qn)
            .map(|p| {
                let (i, q) = (p / qn, p % qn);
                let j = pi[i];
                j * qn + self.table.mul(u[j], q)
            })
            .collect();
        Permutation::from_images(images).expect("wreath element")
    }

    /// Inverse of [`WreathModel::element`].
    pub fn decode(&self, p: &Permutation) -> (Vec<usize>, Vec<usize>) {
        let qn = self.table.order();
        let e = self.table.identity();
        let mut u = vec![e; self.n];
        let mut pi = vec![0; self.n];
        for i in 0..self.n {
            let t = p.apply(i * qn + e);
            pi[i] = t / qn;
            u[t / qn] = t % qn;
        }
        (u, pi)
    }

    /// All elements `((σ·g⁻¹)∗g, id)`, i.e. tuples `g_{σ(i)}⁻¹ g_i`.
    pub fn tuple_elements(&self) -> Vec<Permutation> {
        let ident: Vec<usize> = (0..self.n).collect();
        let mut out = BTreeSet::new();
        for p in self.wreath.elements() {
            let (g, sigma) = self.decode(p);
            let w: Vec<usize> = (0..self.n)
                .map(|i| self.table.mul(self.table.inv(g[sigma[i]]), g[i]))
                .collect();
            out.insert(self.element(&w, &ident));
        }
        out.into_iter().collect()
    }

    pub fn check(&self, cap: usize) -> Result<WreathReport, MonodromyError> {
        let w = &self.wreath;
        let closure = w.normal_closure(&self.transposition_lifts, cap)?;
        let tuples = self.tuple_elements();
        let tuple_subgroup = Group::generate(w.degree(), tuples.clone(), cap)?;
        let tuple_closure = w.normal_closure(&tuples, cap)?;

        // Qᵃᵇ as classes of Q modulo its derived subgroup
        let derived = self.q.derived_subgroup(cap)?;
        let qn = self.table.order();
        let mut class = vec![usize::MAX; qn];
        let mut classes = 0;
        for (i, x) in self.q.elements().iter().enumerate() {
            if class[i] != usize::MAX {
                continue;
            }
            for y in derived.elements() {
                class[self.q.index_of(&x.compose(y)).unwrap()] = classes;
            }
            classes += 1;
        }
        let reps: Vec<usize> = (0..classes)
            .map(|c| class.iter().position(|&k| k == c).unwrap())
            .collect();
        let class_mul = |a: usize, b: usize| class[self.table.mul(reps[a], reps[b])];
        let compose_map = |p: &Permutation| -> usize {
            let (u, pi) = self.decode(p);
            let prod = pi
                .iter()
                .fold(self.table.identity(), |acc, &j| self.table.mul(acc, u[j]));
            class[prod]
        };
        let images: Vec<usize> = w.elements().iter().map(compose_map).collect();
        let homomorphism = w.generators().iter().all(|x| {
            let fx = compose_map(x);
            w.elements()
                .iter()
                .zip(&images)
                .all(|(y, &fy)| compose_map(&x.compose(y)) == class_mul(fx, fy))
        });
        let kernel_is_closure = w
            .elements()
            .iter()
            .zip(&images)
            .all(|(y, &fy)| (fy == class[self.table.identity()]) == closure.contains(y));
        let surjective = images.iter().collect::<BTreeSet<_>>().len() == classes;

        let quotient_is_abelian = w.generators().iter().all(|a| {
            w.generators().iter().all(|b| {
                closure.contains(&a.compose(b).compose(&a.inverse()).compose(&b.inverse()))
            })
        });
        Ok(WreathReport {
            q_order: qn,
            n: self.n,
            wreath_order: w.order(),
            closure_order: closure.order(),
            quotient_order: w.order() / closure.order(),
            q_abelianization_order: classes,
            quotient_is_abelian,
            closure_contains_tuple_elements: tuples.iter().all(|t| closure.contains(t)),
            composition_is_isomorphism: homomorphism && kernel_is_closure && surjective,
            tuple_subgroup_order: tuple_subgroup.order(),
            tuple_normal_closure_order: tuple_closure.order(),
        })
    }
}

pub fn wreath_quotient_check(
    q: &Group,
    n: usize,
    cap: usize,
) -> Result<WreathReport, MonodromyError> {
    WreathModel::new(q, n, cap)?.check(cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroup::parse_presentation;
    use crate::groups;
    use crate::permgroup::DEFAULT_GROUP_CAP;

    fn subgroup_of_order(g: &Group, order: usize) -> Group {
        g.subgroups()
            .unwrap()
            .into_iter()
            .find(|h| h.order() == order)
            .unwrap()
    }

    #[test]
    fn cover_from_subgroup_examples() {
        let z4 = groups::cyclic(4);
        let c = cover_from_subgroup(&z4, &z4).unwrap();
        assert_eq!((c.degree, c.galois), (1, true));
        let c = cover_from_subgroup(&z4, &subgroup_of_order(&z4, 2)).unwrap();
        assert_eq!((c.degree, c.galois, c.deck_group.order()), (2, true, 2));
        let s3 = groups::symmetric(3);
        let c = cover_from_subgroup(&s3, &subgroup_of_order(&s3, 2)).unwrap();
        assert_eq!((c.degree, c.galois, c.deck_group.order()), (3, false, 1));
        assert_eq!(
            cover_from_subgroup(&groups::cyclic(3), &groups::cyclic(2)).unwrap_err(),
            MonodromyError::NotASubgroup
        );
    }

    #[test]
    fn deck_group_routes_agree() {
        let g = groups::dihedral(4);
        for h in g.subgroups().unwrap() {
            let c = cover_from_subgroup(&g, &h).unwrap();
            let by_propagation =
                deck_group_of_action(c.degree, &c.generator_images, DEFAULT_GROUP_CAP).unwrap();
            assert_eq!(c.deck_group, by_propagation);
            assert_eq!(c.galois, c.stabilizer_is_normal());
            assert_eq!(c.galois, c.deck_is_transitive());
        }
    }

    #[test]
    fn galois_closure_examples() {
        let s3 = groups::symmetric(3);
        let c = cover_from_subgroup(&s3, &subgroup_of_order(&s3, 2)).unwrap();
        let gc = galois_closure(&c).unwrap();
        assert_eq!((gc.degree, gc.galois), (6, true));
        assert!(dominates(&gc, &c));
        let again = galois_closure(&gc).unwrap();
        assert!(is_isomorphic(&again, &gc));
        let c3 = cover_from_subgroup(&s3, &subgroup_of_order(&s3, 3)).unwrap();
        assert!(is_isomorphic(&galois_closure(&c3).unwrap(), &c3));
    }

    #[test]
    fn wreath_examples() {
        let r = wreath_quotient_check(&groups::cyclic(2), 2, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(
            (r.wreath_order, r.closure_order, r.quotient_order),
            (8, 4, 2)
        );
        assert!(r.passed());
        let r = wreath_quotient_check(&Group::trivial(1), 3, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!((r.wreath_order, r.quotient_order), (6, 1));
        assert!(r.passed());
        let r = wreath_quotient_check(&groups::symmetric(3), 2, DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(
            (r.wreath_order, r.closure_order, r.quotient_order),
            (72, 36, 2)
        );
        assert!(r.passed());
    }

    #[test]
    fn wreath_element_round_trip() {
        let m = WreathModel::new(&groups::cyclic(3), 2, DEFAULT_GROUP_CAP).unwrap();
        for p in m.wreath.elements() {
            let (u, pi) = m.decode(p);
            assert_eq!(&m.element(&u, &pi), p);
        }
    }

    fn surface(pres: &str, singular: Vec<SingularPoint>) -> SurfaceDescriptor {
        SurfaceDescriptor {
            name: "test".into(),
            pi1_smooth: parse_presentation(pres).unwrap(),
            singular_points: singular,
            hodge: HodgeVector::new(vec![1, 0, 1]),
        }
    }

    #[test]
    fn classification_examples() {
        let rows = classify_hilb_covers(&surface("< | >", vec![]), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].hilb_cover.degree, 1);
        let rows =
            classify_hilb_covers(&surface("< a | a^2 >", vec![]), DEFAULT_GROUP_CAP).unwrap();
        let degrees: Vec<usize> = rows.iter().map(|r| r.hilb_cover.degree).collect();
        assert_eq!(degrees, vec![1, 2]);
        let q8 = surface("< a b | a^4, a^2 b^-2, b^-1 a b a >", vec![]);
        let rows = classify_hilb_covers(&q8, DEFAULT_GROUP_CAP).unwrap();
        let orders: Vec<usize> = rows
            .iter()
            .map(|r| r.hilb_cover.deck_group.order())
            .collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 4]);
        assert!(rows
            .iter()
            .all(|r| r.hilb_cover.galois && r.hilb_cover.is_etale()));
        assert!(matches!(
            classify_hilb_covers(&surface("< a b | >", vec![]), DEFAULT_GROUP_CAP),
            Err(MonodromyError::InfiniteAbelianization { rank: 2 })
        ));
    }

    #[test]
    fn quasietale_examples() {
        let p = SingularPoint {
            label: "p1".into(),
            ade: AdeType::A(1),
            local_loops: Some(vec!["a".into()]),
        };
        let s = surface("< a | a^2 >", vec![p]);
        let rows = classify_hilb_covers(&s, DEFAULT_GROUP_CAP).unwrap();
        assert!(rows[0].surface_cover.ramification_labels.is_empty());
        assert_eq!(
            rows[1].surface_cover.ramification_labels,
            BTreeSet::from(["p1".to_string()])
        );
        let back = restrict_to_smooth(&s, &rows[1].surface_cover);
        assert!(back.is_etale());
        assert_eq!(
            quasietale_correspondence(&s, &back).unwrap(),
            rows[1].surface_cover
        );
    }

    #[test]
    fn ade_parsing() {
        for t in ["A1", "A7", "D4", "E6", "E7", "E8"] {
            assert_eq!(t.parse::<AdeType>().unwrap().to_string(), t);
        }
        for t in ["A0", "D3", "E9", "B2", ""] {
            assert!(t.parse::<AdeType>().is_err());
        }
        assert_eq!(AdeType::D(4).local_group_order(), 8);
    }
}
