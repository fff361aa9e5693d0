//! The cover `ξ ↦ ξ^[2]` on finite models.
//!
//! A Galois cover `ξ : Z → S` with deck group `G` is modelled by the free
//! `G`-set `Z = G × B`. On `Z²` we build the coordinate swap `σ`, the maps
//! `s_g(z, w) = (z, g·w)` and `δ_g(z, w) = (g·z, g·w)`, the groups
//! `J = ⟨σ, s_g⟩` and `H = ⟨σ, δ_g⟩`, and the diagonal components
//! `T_g = {(z, g·z)}`.
//!
//! `H` is normal in `J` only when every element of `G` squares to the
//! identity: `s_h⁻¹ σ s_h` sends `(z, w)` to `(h·w, h⁻¹·z)`, which lies in
//! `H` iff `h² = 1`. For the cover itself we therefore also build the
//! antidiagonal group `K = ⟨σ, Γ(g⁻¹, g)⟩`, the kernel of
//! `J → G, Γ(g', g)τ ↦ g'g`. It is normal for every abelian `G`, has index
//! `|G|`, and equals `H` when `G` has exponent at most 2.
//!
//! Groups act faithfully on the slot domain `Z ⊔ Z` (point `z` in
//! coordinate `k` is `k·|Z| + z`) and are pushed to `Z²` by
//! [`HilbConstruction::square_action`]. On `Z²` alone the action is not
//! faithful when `|Z| = 1`.
//!
//! Point orders: `Z` is lexicographic in `(g, b)` (table order on `G`,
//! input order on `B`), `Z²` is lexicographic in `(z, w)`, and the symmetric
//! quotient lists `{i ≤ j}` lexicographically.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::monodromy::{deck_group_of_action, CoverDescriptor};
use crate::permgroup::{orbit_partition, Group, GroupError, Permutation, DEFAULT_GROUP_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbError {
    #[error("multiplication table is not a group: {0}")]
    NotAGroup(String),
    #[error("base label set is empty")]
    EmptyBase,
    #[error("unknown point {0} of the symmetric square")]
    UnknownPoint(usize),
    #[error("homomorphism check failed: {0}")]
    HomomorphismFailure(String),
    #[error(
        "deck group is not abelian; the diagonal subgroup H is {} in J",
        if *.h_normal { "normal" } else { "not normal" }
    )]
    NonAbelianDeckGroup { h_normal: bool },
    #[error("cover is not Galois")]
    NotGalois,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicationTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl MultiplicationTable {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, HilbError> {
        let n = table.len();
        let bad = |m: &str| Err(HilbError::NotAGroup(m.to_string()));
        if n == 0 {
            return bad("empty table");
        }
        if table
            .iter()
            .any(|r| r.len() != n || r.iter().any(|&x| x >= n))
        {
            return bad("table is not square with entries in range");
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
        else {
            return bad("no identity");
        };
        let mut inverses = vec![0; n];
        for x in 0..n {
            match (0..n).find(|&y| table[x][y] == identity && table[y][x] == identity) {
                Some(y) => inverses[x] = y,
                None => return bad("missing inverse"),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad("not associative");
                    }
                }
            }
        }
        Ok(Self {
            table,
            identity,
            inverses,
        })
    }

    /// Table of a permutation group, indexed like [`Group::elements`].
    pub fn from_group(g: &Group) -> Self {
        Self::new(g.cayley_table()).expect("permutation groups are groups")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(a, x);
            k += 1;
        }
        k
    }

    /// Elements with `g² = 1`, identity included.
    pub fn involutions_and_identity(&self) -> BTreeSet<usize> {
        (0..self.order())
            .filter(|&g| self.mul(g, g) == self.identity)
            .collect()
    }

    /// Left-regular permutation representation.
    pub fn regular_group(&self) -> Group {
        let gens = (0..self.order())
            .map(|g| {
                Permutation::from_images((0..self.order()).map(|x| self.mul(g, x)).collect())
                    .unwrap()
            })
            .collect();
        Group::generate(self.order(), gens, usize::MAX).unwrap()
    }
}

/// `Z = G × B` with `g·(h, b) = (gh, b)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSet {
    pub group: MultiplicationTable,
    pub base: Vec<String>,
}

impl GSet {
    pub fn point_count(&self) -> usize {
        self.group.order() * self.base.len()
    }

    pub fn point(&self, g: usize, b: usize) -> usize {
        g * self.base.len() + b
    }

    /// `(group element, base index)` of a point.
    pub fn split(&self, z: usize) -> (usize, usize) {
        (z / self.base.len(), z % self.base.len())
    }

    pub fn act(&self, g: usize, z: usize) -> usize {
        let (h, b) = self.split(z);
        self.point(self.group.mul(g, h), b)
    }

    /// Projection `Z → B`.
    pub fn project(&self, z: usize) -> usize {
        self.split(z).1
    }

    /// Checked by exhaustion: `g·z = z` only for the identity.
    pub fn is_free(&self) -> bool {
        (0..self.group.order()).all(|g| {
            g == self.group.identity() || (0..self.point_count()).all(|z| self.act(g, z) != z)
        })
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let gens: Vec<Permutation> = (0..self.group.order())
            .map(|g| {
                Permutation::from_images((0..self.point_count()).map(|z| self.act(g, z)).collect())
                    .unwrap()
            })
            .collect();
        orbit_partition(self.point_count(), &gens)
    }

    pub fn point_label(&self, z: usize) -> String {
        let (g, b) = self.split(z);
        format!("g{g}·{}", self.base[b])
    }
}

pub fn free_gset(group: MultiplicationTable, base: Vec<String>) -> Result<GSet, HilbError> {
    if base.is_empty() {
        return Err(HilbError::EmptyBase);
    }
    let z = GSet { group, base };
    debug_assert!(z.is_free());
    Ok(z)
}

/// Labels `a`, `b`, … for a base of size `n` (then `p26`, `p27`, …).
pub fn default_base_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("p{i}")
            }
        })
        .collect()
}

/// The symmetric square of an `n`-point set: points `s + s'` and `2s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymQuotient {
    pub labels: Vec<String>,
    /// Unordered pairs `(i, j)` with `i ≤ j`, lexicographic.
    pub points: Vec<(usize, usize)>,
}

impl SymQuotient {
    pub fn new(labels: Vec<String>) -> Self {
        let n = labels.len();
        let points = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        Self { labels, points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Image of the ordered pair `(i, j)` under the quotient map.
    pub fn index_of(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let n = self.labels.len();
        // rows 0..i hold n, n-1, …, n-i+1 points
        i * n - i * i.saturating_sub(1) / 2 + (j - i)
    }

    pub fn is_diagonal(&self, p: usize) -> bool {
        let (i, j) = self.points[p];
        i == j
    }

    pub fn label(&self, p: usize) -> String {
        let (i, j) = self.points[p];
        if i == j {
            format!("2{}", self.labels[i])
        } else {
            format!("{}+{}", self.labels[i], self.labels[j])
        }
    }
}

/// Which subgroup of `J` to quotient `Z²` by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quotient {
    /// `H = ⟨σ, δ_g⟩`.
    Diagonal,
    /// `K = ⟨σ, Γ(g⁻¹, g)⟩`.
    Antidiagonal,
}

/// A slot-domain element together with its action on `Z²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareMap {
    pub slot: Permutation,
    pub square: Permutation,
}

#[derive(Debug, Clone)]
pub struct HilbConstruction {
    pub gset: GSet,
    pub sym: SymQuotient,
    pub sigma: SquareMap,
    pub s_maps: Vec<SquareMap>,
    pub delta_maps: Vec<SquareMap>,
    pub antidiagonal_maps: Vec<SquareMap>,
    pub j: Group,
    pub h: Group,
    pub k: Group,
    /// `T_g` as sorted lists of `Z²` indices.
    pub t_components: Vec<Vec<usize>>,
}

/// Orbits of a subgroup on `Z²`, grouped by their image in the symmetric square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientFibers {
    pub orbits: Vec<Vec<usize>>,
    pub orbit_of: Vec<usize>,
    /// Orbit ids over each point of the symmetric square.
    pub fibers: Vec<Vec<usize>>,
}

impl QuotientFibers {
    pub fn fiber_sizes(&self) -> Vec<usize> {
        self.fibers.iter().map(Vec::len).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignReport {
    pub j_order: usize,
    pub kernel_order: usize,
    /// `Γ(g', g) = σ s_{g'} σ s_g` is a homomorphism from `G × G`.
    pub gamma_is_homomorphism: bool,
    pub gamma_is_injective: bool,
    /// Image of `Γ` is exactly `ker sgn`.
    pub gamma_image_is_kernel: bool,
    pub sgn_is_homomorphism: bool,
    /// `s(σ) = σ` satisfies `sgn ∘ s = id`.
    pub section_splits: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalComponents {
    pub components: Vec<Vec<usize>>,
    pub pairwise_disjoint: bool,
    pub each_bijective_with_z: bool,
    /// The union is the preimage of the diagonal of the symmetric square.
    pub union_is_diagonal_preimage: bool,
}

impl HilbConstruction {
    pub fn z_count(&self) -> usize {
        self.gset.point_count()
    }

    pub fn d(&self) -> usize {
        self.gset.group.order()
    }

    pub fn square_count(&self) -> usize {
        self.z_count() * self.z_count()
    }

    pub fn square_point(&self, z: usize, w: usize) -> usize {
        z * self.z_count() + w
    }

    pub fn split_square(&self, p: usize) -> (usize, usize) {
        (p / self.z_count(), p % self.z_count())
    }

    /// `Ξ : Z² → S⁽²⁾`.
    pub fn xi(&self, p: usize) -> usize {
        let (z, w) = self.split_square(p);
        self.sym
            .index_of(self.gset.project(z), self.gset.project(w))
    }

    /// Action on `Z²` of a monomial slot-domain permutation.
    pub fn square_action(&self, slot: &Permutation) -> Permutation {
        let n = self.z_count();
        let images = (0..n * n)
            .map(|p| {
                let (z, w) = self.split_square(p);
                let mut out = [0usize; 2];
                for (k, x) in [(0usize, z), (1, w)] {
                    let t = slot.apply(k * n + x);
                    out[t / n] = t % n;
                }
                self.square_point(out[0], out[1])
            })
            .collect();
        Permutation::from_images(images).expect("monomial permutation")
    }

    /// `sgn : J → S₂`; true when the coordinates are swapped.
    pub fn sign(&self, slot: &Permutation) -> bool {
        slot.apply(0) >= self.z_count()
    }

    pub fn subgroup(&self, which: Quotient) -> &Group {
        match which {
            Quotient::Diagonal => &self.h,
            Quotient::Antidiagonal => &self.k,
        }
    }

    /// `Γ(g', g) = σ s_{g'} σ s_g` on the slot domain.
    pub fn gamma(&self, g_prime: usize, g: usize) -> Permutation {
        let s = &self.sigma.slot;
        s.compose(&self.s_maps[g_prime].slot)
            .compose(s)
            .compose(&self.s_maps[g].slot)
    }

    /// The identities `s_h σ s_{g'} σ s_g = σ s_{g'} σ s_{hg}`,
    /// `s_g σ s_{g'} σ = σ s_{g'} σ s_g` and `δ_g = σ s_g σ s_g`, on both the
    /// slot domain and `Z²`.
    pub fn relations_hold(&self) -> bool {
        let d = self.d();
        let grp = &self.gset.group;
        let sigma = &self.sigma;
        let check = |pick: &dyn Fn(&SquareMap) -> &Permutation| -> bool {
            let sg = pick(sigma);
            for g in 0..d {
                let s_g = pick(&self.s_maps[g]);
                let delta = pick(&self.delta_maps[g]);
                if *delta != sg.compose(s_g).compose(sg).compose(s_g) {
                    return false;
                }
                for gp in 0..d {
                    let s_gp = pick(&self.s_maps[gp]);
                    let lhs2 = s_g.compose(sg).compose(s_gp).compose(sg);
                    let rhs2 = sg.compose(s_gp).compose(sg).compose(s_g);
                    if lhs2 != rhs2 {
                        return false;
                    }
                    for h in 0..d {
                        let s_h = pick(&self.s_maps[h]);
                        let s_hg = pick(&self.s_maps[grp.mul(h, g)]);
                        let lhs = s_h.compose(sg).compose(s_gp).compose(sg).compose(s_g);
                        let rhs = sg.compose(s_gp).compose(sg).compose(s_hg);
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
            true
        };
        check(&|m| &m.slot) && check(&|m| &m.square)
    }

    pub fn h_is_normal(&self) -> bool {
        self.j.has_normal_subgroup(&self.h).expect("H ≤ J")
    }

    pub fn k_is_normal(&self) -> bool {
        self.j.has_normal_subgroup(&self.k).expect("K ≤ J")
    }

    pub fn sign_and_splitting(&self) -> Result<SignReport, HilbError> {
        let d = self.d();
        let grp = &self.gset.group;
        let kernel: Vec<&Permutation> =
            self.j.elements().iter().filter(|x| !self.sign(x)).collect();

        let sgn_is_homomorphism = self.j.generators().iter().all(|a| {
            self.j
                .elements()
                .iter()
                .all(|b| self.sign(&a.compose(b)) == (self.sign(a) != self.sign(b)))
        });
        let mut gamma_is_homomorphism = true;
        let mut image: BTreeSet<Permutation> = BTreeSet::new();
        for a in 0..d {
            for b in 0..d {
                let gab = self.gamma(a, b);
                image.insert(gab.clone());
                for c in 0..d {
                    for e in 0..d {
                        let lhs = gab.compose(&self.gamma(c, e));
                        if lhs != self.gamma(grp.mul(a, c), grp.mul(b, e)) {
                            gamma_is_homomorphism = false;
                        }
                    }
                }
            }
        }
        let gamma_is_injective = image.len() == d * d;
        let gamma_image_is_kernel =
            image.len() == kernel.len() && kernel.iter().all(|x| image.contains(*x));
        let section_splits = self.sign(&self.sigma.slot)
            && self.sigma.slot.compose(&self.sigma.slot).is_identity()
            && self.j.contains(&self.sigma.slot);
        let report = SignReport {
            j_order: self.j.order(),
            kernel_order: kernel.len(),
            gamma_is_homomorphism,
            gamma_is_injective,
            gamma_image_is_kernel,
            sgn_is_homomorphism,
            section_splits,
        };
        if !(report.gamma_is_homomorphism
            && report.gamma_is_injective
            && report.gamma_image_is_kernel
            && report.sgn_is_homomorphism
            && report.section_splits)
        {
            return Err(HilbError::HomomorphismFailure(format!("{report:?}")));
        }
        Ok(report)
    }

    /// `Ξ⁻¹(p)` from the formula `{(g·z, h·w), (h·w, g·z) | g, h ∈ G}` with
    /// `z`, `w` the identity points over the two base labels of `p`.
    pub fn big_fiber(&self, p: usize) -> Result<Vec<usize>, HilbError> {
        if p >= self.sym.len() {
            return Err(HilbError::UnknownPoint(p));
        }
        let (i, j) = self.sym.points[p];
        let e = self.gset.group.identity();
        let z = self.gset.point(e, i);
        let w = self.gset.point(e, j);
        let mut out = BTreeSet::new();
        for g in 0..self.d() {
            for h in 0..self.d() {
                let gz = self.gset.act(g, z);
                let hw = self.gset.act(h, w);
                out.insert(self.square_point(gz, hw));
                out.insert(self.square_point(hw, gz));
            }
        }
        Ok(out.into_iter().collect())
    }

    /// `Ξ⁻¹(p)` by projecting every point of `Z²`.
    pub fn preimage(&self, p: usize) -> Result<Vec<usize>, HilbError> {
        if p >= self.sym.len() {
            return Err(HilbError::UnknownPoint(p));
        }
        Ok((0..self.square_count())
            .filter(|&x| self.xi(x) == p)
            .collect())
    }

    pub fn diagonal_components(&self) -> DiagonalComponents {
        let components = self.t_components.clone();
        let mut seen = vec![false; self.square_count()];
        let mut pairwise_disjoint = true;
        for comp in &components {
            for &x in comp {
                if seen[x] {
                    pairwise_disjoint = false;
                }
                seen[x] = true;
            }
        }
        let each_bijective_with_z = components.iter().all(|c| {
            c.len() == self.z_count()
                && c.iter()
                    .map(|&x| self.split_square(x).0)
                    .collect::<BTreeSet<_>>()
                    .len()
                    == self.z_count()
        });
        let union_is_diagonal_preimage =
            (0..self.square_count()).all(|x| seen[x] == self.sym.is_diagonal(self.xi(x)));
        DiagonalComponents {
            components,
            pairwise_disjoint,
            each_bijective_with_z,
            union_is_diagonal_preimage,
        }
    }

    /// Elements of `G` whose component `T_g` is fixed pointwise by some
    /// non-identity element of the chosen subgroup. Found by exhaustion.
    pub fn fixed_components_under(&self, which: Quotient) -> BTreeSet<usize> {
        let group = self.subgroup(which);
        let squares: Vec<Permutation> = group
            .elements()
            .iter()
            .filter(|t| !t.is_identity())
            .map(|t| self.square_action(t))
            .collect();
        (0..self.d())
            .filter(|&g| {
                squares
                    .iter()
                    .any(|t| self.t_components[g].iter().all(|&x| t.fixes(x)))
            })
            .collect()
    }

    /// Components fixed pointwise by a non-identity element of `H`.
    pub fn fixed_components(&self) -> BTreeSet<usize> {
        self.fixed_components_under(Quotient::Diagonal)
    }

    /// An element fixing one point of `T_g` fixes all of `T_g`.
    pub fn fixed_point_lemma_holds(&self, which: Quotient) -> bool {
        self.subgroup(which).elements().iter().all(|t| {
            let sq = self.square_action(t);
            self.t_components.iter().all(|comp| {
                let fixed = comp.iter().filter(|&&x| sq.fixes(x)).count();
                fixed == 0 || fixed == comp.len()
            })
        })
    }

    pub fn quotient_fibers(&self, which: Quotient) -> QuotientFibers {
        let gens: Vec<Permutation> = self
            .subgroup(which)
            .generators()
            .iter()
            .map(|g| self.square_action(g))
            .collect();
        let orbits = orbit_partition(self.square_count(), &gens);
        let mut orbit_of = vec![0; self.square_count()];
        let mut fibers = vec![Vec::new(); self.sym.len()];
        for (id, orbit) in orbits.iter().enumerate() {
            for &x in orbit {
                orbit_of[x] = id;
            }
            fibers[self.xi(orbit[0])].push(id);
        }
        QuotientFibers {
            orbits,
            orbit_of,
            fibers,
        }
    }

    /// `ξ̃ : Z²/H → S⁽²⁾`, orbit sets over each point.
    pub fn xi_tilde_fibers(&self) -> QuotientFibers {
        self.quotient_fibers(Quotient::Diagonal)
    }

    /// Whether the representatives `(z, g·w)`, `g ∈ G`, of the fiber over
    /// `p` lie in pairwise distinct orbits.
    pub fn representatives_distinct(&self, which: Quotient, p: usize) -> bool {
        let fibers = self.quotient_fibers(which);
        let (i, j) = self.sym.points[p];
        let e = self.gset.group.identity();
        let z = self.gset.point(e, i);
        let w = self.gset.point(e, j);
        let ids: BTreeSet<usize> = (0..self.d())
            .map(|g| fibers.orbit_of[self.square_point(z, self.gset.act(g, w))])
            .collect();
        ids.len() == self.d()
    }

    /// Orbits of `J` on `Z²`, for comparison with the symmetric quotient.
    pub fn j_orbits(&self) -> Vec<Vec<usize>> {
        let gens: Vec<Permutation> = self
            .j
            .generators()
            .iter()
            .map(|g| self.square_action(g))
            .collect();
        orbit_partition(self.square_count(), &gens)
    }
}

pub fn build_construction(gset: GSet, cap: usize) -> Result<HilbConstruction, HilbError> {
    let d = gset.group.order();
    let n = gset.point_count();
    let slot = |f: &dyn Fn(usize, usize) -> (usize, usize)| -> Permutation {
        let images = (0..2 * n)
            .map(|p| {
                let (k, z) = (p / n, p % n);
                let (k2, z2) = f(k, z);
                k2 * n + z2
            })
            .collect();
        Permutation::from_images(images).expect("slot permutation")
    };
    let sigma_slot = slot(&|k, z| (1 - k, z));
    let s_slots: Vec<Permutation> = (0..d)
        .map(|g| slot(&|k, z| (k, if k == 1 { gset.act(g, z) } else { z })))
        .collect();
    let delta_slots: Vec<Permutation> = (0..d).map(|g| slot(&|k, z| (k, gset.act(g, z)))).collect();
    let grp = gset.group.clone();
    let anti_slots: Vec<Permutation> = (0..d)
        .map(|g| {
            let gi = grp.inv(g);
            slot(&|k, z| {
                (
                    k,
                    if k == 0 {
                        gset.act(gi, z)
                    } else {
                        gset.act(g, z)
                    },
                )
            })
        })
        .collect();

    let mut j_gens = vec![sigma_slot.clone()];
    j_gens.extend(s_slots.iter().cloned());
    let mut h_gens = vec![sigma_slot.clone()];
    h_gens.extend(delta_slots.iter().cloned());
    let mut k_gens = vec![sigma_slot.clone()];
    k_gens.extend(anti_slots.iter().cloned());
    let j = Group::generate(2 * n, j_gens, cap)?;
    let h = Group::generate(2 * n, h_gens, cap)?;
    let k = Group::generate(2 * n, k_gens, cap)?;

    let sym = SymQuotient::new(gset.base.clone());
    let t_components = (0..d)
        .map(|g| {
            let mut v: Vec<usize> = (0..n).map(|z| z * n + gset.act(g, z)).collect();
            v.sort_unstable();
            v
        })
        .collect();

    let mut c = HilbConstruction {
        gset,
        sym,
        sigma: SquareMap {
            slot: sigma_slot.clone(),
            square: Permutation::identity(n * n),
        },
        s_maps: Vec::new(),
        delta_maps: Vec::new(),
        antidiagonal_maps: Vec::new(),
        j,
        h,
        k,
        t_components,
    };
    let lift = |c: &HilbConstruction, v: Vec<Permutation>| -> Vec<SquareMap> {
        v.into_iter()
            .map(|slot| SquareMap {
                square: c.square_action(&slot),
                slot,
            })
            .collect()
    };
    c.sigma.square = c.square_action(&sigma_slot);
    c.s_maps = lift(&c, s_slots);
    c.delta_maps = lift(&c, delta_slots);
    c.antidiagonal_maps = lift(&c, anti_slots);

    if !c.relations_hold() {
        return Err(HilbError::HomomorphismFailure(
            "relations between σ, s_g and δ_g".into(),
        ));
    }
    Ok(c)
}

/// Convenience: construction for a permutation group `G` over `base_size` labels.
pub fn construction_for(
    g: &Group,
    base_size: usize,
    cap: usize,
) -> Result<HilbConstruction, HilbError> {
    let gset = free_gset(
        MultiplicationTable::from_group(g),
        default_base_labels(base_size),
    )?;
    build_construction(gset, cap)
}

/// The induced cover `ξ^[2]` of the Hilbert square.
///
/// The total space is the orbit space `Z²/K`; points over the diagonal are
/// the image `q(T)` of the diagonal components and recorded in
/// `blowup_center`. Every fiber has `|G|` points, so the result carries no
/// ramification labels.
pub fn hilb_square_cover(xi: &CoverDescriptor, cap: usize) -> Result<CoverDescriptor, HilbError> {
    if !xi.galois {
        return Err(HilbError::NotGalois);
    }
    let table = MultiplicationTable::from_group(&xi.deck_group);
    let gset = free_gset(table.clone(), xi.base_points.clone())?;
    let c = build_construction(gset, cap)?;
    if !table.is_abelian() {
        return Err(HilbError::NonAbelianDeckGroup {
            h_normal: c.h_is_normal(),
        });
    }
    let d = table.order();
    if !c.k_is_normal() || c.j.order() != d * c.k.order() {
        return Err(HilbError::HomomorphismFailure(
            "antidiagonal subgroup is not a normal subgroup of index |G|".into(),
        ));
    }
    let fibers = c.quotient_fibers(Quotient::Antidiagonal);
    if fibers.fibers.iter().any(|f| f.len() != d) {
        return Err(HilbError::HomomorphismFailure("non-constant fibers".into()));
    }

    // Monodromy on the fiber over the first point of S⁽²⁾: a base generator
    // with ξ-monodromy m acts through s_g, g the deck element with g(0) = m(0).
    let fiber0 = &fibers.fibers[0];
    let position = |orbit: usize| fiber0.iter().position(|&o| o == orbit).expect("same fiber");
    let generator_images = xi
        .generator_images
        .iter()
        .map(|m| {
            let target = m.apply(0);
            let deck = xi
                .deck_group
                .elements()
                .iter()
                .position(|x| x.apply(0) == target)
                .expect("regular deck group");
            let s = &c.s_maps[deck].square;
            let images = fiber0
                .iter()
                .map(|&o| position(fibers.orbit_of[s.apply(fibers.orbits[o][0])]))
                .collect();
            Permutation::from_images(images).expect("s_g permutes the fiber")
        })
        .collect::<Vec<_>>();

    let mut total_points = Vec::new();
    let mut blowup_center = BTreeSet::new();
    for (p, fiber) in fibers.fibers.iter().enumerate() {
        for (i, &o) in fiber.iter().enumerate() {
            let (z, w) = c.split_square(fibers.orbits[o][0]);
            let label = format!(
                "[{},{}]/K over {} #{i}",
                c.gset.point_label(z),
                c.gset.point_label(w),
                c.sym.label(p)
            );
            if c.sym.is_diagonal(p) {
                blowup_center.insert(label.clone());
            }
            total_points.push(label);
        }
    }
    let base_points = (0..c.sym.len()).map(|p| c.sym.label(p)).collect();
    let monodromy = Group::generate(d, generator_images.clone(), cap.max(DEFAULT_GROUP_CAP))?;
    let deck_group = deck_group_of_action(d, &generator_images, cap)?;
    let galois = deck_group.order() == d;
    Ok(CoverDescriptor {
        base_label: format!("Hilb2({})", xi.base_label),
        base_points,
        total_points,
        degree: d,
        generator_images,
        monodromy,
        deck_group,
        galois,
        ramification_labels: BTreeSet::new(),
        blowup_center,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;

    fn build(g: &Group, b: usize) -> HilbConstruction {
        construction_for(g, b, DEFAULT_GROUP_CAP).unwrap()
    }

    #[test]
    fn multiplication_table_validation() {
        assert!(MultiplicationTable::new(vec![]).is_err());
        assert!(MultiplicationTable::new(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(MultiplicationTable::new(vec![vec![0, 1], vec![1, 0]]).is_ok());
        // a 3-element loop that is not associative
        let t = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]];
        assert!(MultiplicationTable::new(t).is_err());
    }

    #[test]
    fn free_gset_examples() {
        let z = free_gset(
            MultiplicationTable::from_group(&groups::cyclic(1)),
            vec!["a".into()],
        )
        .unwrap();
        assert_eq!(z.point_count(), 1);
        let z = free_gset(
            MultiplicationTable::from_group(&groups::cyclic(2)),
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        assert_eq!((z.point_count(), z.orbits().len()), (4, 2));
        assert!(z.is_free());
        let z = free_gset(
            MultiplicationTable::from_group(&groups::cyclic(3)),
            vec!["a".into()],
        )
        .unwrap();
        assert_eq!((z.point_count(), z.orbits().len()), (3, 1));
        assert_eq!(
            free_gset(MultiplicationTable::from_group(&groups::cyclic(3)), vec![]).unwrap_err(),
            HilbError::EmptyBase
        );
    }

    #[test]
    fn sym_quotient_indexing() {
        for n in 1..6 {
            let s = SymQuotient::new(default_base_labels(n));
            assert_eq!(s.len(), n * (n + 1) / 2);
            for (p, &(i, j)) in s.points.iter().enumerate() {
                assert_eq!(s.index_of(i, j), p);
                assert_eq!(s.index_of(j, i), p);
            }
        }
        let s = SymQuotient::new(default_base_labels(2));
        assert_eq!(s.label(0), "2a");
        assert_eq!(s.label(1), "a+b");
    }

    #[test]
    fn construction_examples() {
        let c = build(&groups::cyclic(2), 2);
        assert_eq!((c.j.order(), c.h.order()), (8, 4));
        assert_eq!(c.j.order() / c.h.order(), 2);
        let c = build(&groups::cyclic(1), 2);
        assert_eq!((c.j.order(), c.h.order()), (2, 2));
        let c = build(&groups::cyclic(3), 2);
        assert_eq!((c.j.order(), c.h.order(), c.k.order()), (18, 6, 6));
        // the one-point model still sees σ on the slot domain
        let c = build(&groups::cyclic(1), 1);
        assert_eq!(c.j.order(), 2);
        assert!(c.relations_hold());
    }

    #[test]
    fn sign_examples() {
        let r = build(&groups::cyclic(1), 2).sign_and_splitting().unwrap();
        assert_eq!(r.kernel_order, 1);
        let r = build(&groups::cyclic(2), 2).sign_and_splitting().unwrap();
        assert_eq!(r.kernel_order, 4);
        let r = build(&groups::cyclic(4), 1).sign_and_splitting().unwrap();
        assert_eq!(r.kernel_order, 16);
    }

    #[test]
    fn big_fiber_examples() {
        let c = build(&groups::cyclic(2), 2);
        // points of S⁽²⁾: 2a, a+b, 2b
        assert_eq!(c.big_fiber(1).unwrap().len(), 8);
        assert_eq!(c.big_fiber(0).unwrap().len(), 4);
        let c = build(&groups::cyclic(1), 2);
        assert_eq!(c.big_fiber(1).unwrap().len(), 2);
        assert_eq!(c.big_fiber(3).unwrap_err(), HilbError::UnknownPoint(3));
        for p in 0..c.sym.len() {
            assert_eq!(c.big_fiber(p).unwrap(), c.preimage(p).unwrap());
        }
    }

    #[test]
    fn diagonal_component_examples() {
        let c = build(&groups::cyclic(1), 2);
        let dc = c.diagonal_components();
        assert_eq!(dc.components.len(), 1);
        assert_eq!(dc.components[0], vec![0, 3]);
        let c = build(&groups::cyclic(2), 1);
        let dc = c.diagonal_components();
        assert_eq!(dc.components, vec![vec![0, 3], vec![1, 2]]);
        let dc = build(&groups::cyclic(6), 1).diagonal_components();
        assert_eq!(dc.components.len(), 6);
        assert!(dc.pairwise_disjoint && dc.each_bijective_with_z && dc.union_is_diagonal_preimage);
    }

    #[test]
    fn fixed_component_examples() {
        assert_eq!(
            build(&groups::cyclic(2), 1).fixed_components(),
            BTreeSet::from([0, 1])
        );
        assert_eq!(
            build(&groups::cyclic(3), 1).fixed_components(),
            BTreeSet::from([0])
        );
        let z4 = groups::cyclic(4);
        let c = build(&z4, 1);
        let expected = c.gset.group.involutions_and_identity();
        assert_eq!(expected.len(), 2);
        assert_eq!(c.fixed_components(), expected);
        assert!(c.fixed_point_lemma_holds(Quotient::Diagonal));
        // under K every component is fixed pointwise
        assert_eq!(c.fixed_components_under(Quotient::Antidiagonal).len(), 4);
    }

    #[test]
    fn xi_tilde_examples() {
        let c = build(&groups::cyclic(2), 2);
        assert_eq!(c.xi_tilde_fibers().fiber_sizes(), vec![2, 2, 2]);
        let c = build(&groups::cyclic(1), 2);
        assert_eq!(c.xi_tilde_fibers().fiber_sizes(), vec![1, 1, 1]);
        // H has 2 orbits over 2a when G = Z/3: the diagonal and one orbit of size 6
        let c = build(&groups::cyclic(3), 1);
        assert_eq!(c.xi_tilde_fibers().fiber_sizes(), vec![2]);
        assert!(!c.representatives_distinct(Quotient::Diagonal, 0));
        assert_eq!(
            c.quotient_fibers(Quotient::Antidiagonal).fiber_sizes(),
            vec![3]
        );
        assert!(c.representatives_distinct(Quotient::Antidiagonal, 0));
    }

    #[test]
    fn normality_depends_on_exponent() {
        assert!(build(&groups::cyclic(2), 2).h_is_normal());
        assert!(build(&groups::abelian(&[2, 2]), 1).h_is_normal());
        assert!(!build(&groups::cyclic(3), 1).h_is_normal());
        assert!(build(&groups::cyclic(3), 1).k_is_normal());
        assert!(!build(&groups::symmetric(3), 1).h_is_normal());
        let c = build(&groups::abelian(&[2, 2]), 2);
        assert!(c.h.same_elements(&c.k));
    }
}
