//! Finitely presented groups: parsing, abelianization and coset enumeration.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! presentation := '<' name* '|' (word (',' word)*)? '>'
//! word         := factor* | '1'
//! factor       := atom ('^' '-'? digits)?
//! atom         := name | '(' word ')'
//! name         := letter (digit | '_' | '\'')*
//! ```
//!
//! A name is a single letter plus optional digits, so `ab` is `a·b` and
//! `g12` is one generator.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::permgroup::{Group, GroupError, Permutation};
use crate::smith::{smith_normal_form, Matrix};

/// Default bound on the number of cosets defined during enumeration.
pub const DEFAULT_COSET_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FpError {
    #[error("syntax error at byte {position}: {message}")]
    SyntaxError { position: usize, message: String },
    #[error("unknown generator {name:?} at byte {position}")]
    UnknownGenerator { name: String, position: usize },
    #[error("coset enumeration exceeded the cap of {cap} cosets")]
    CapExceeded { cap: usize },
    #[error("coset table is incomplete")]
    IncompleteTable,
    #[error("abelianization has free rank {rank}; the group is infinite")]
    InfiniteGroup { rank: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// One generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Self {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    /// Column of this letter in a coset table.
    fn column(self) -> usize {
        2 * self.generator + self.inverse as usize
    }
}

pub type Word = Vec<Letter>;

pub fn inverse_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inv()).collect()
}

/// Free reduction of a word.
pub fn reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generator_names: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generator_names: Vec<String>, relators: Vec<Word>) -> Self {
        for r in &relators {
            for l in r {
                assert!(
                    l.generator < generator_names.len(),
                    "relator uses undeclared generator"
                );
            }
        }
        Self {
            generator_names,
            relators,
        }
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, FpError> {
        let mut p = Parser::new(text);
        p.skip_ws();
        let w = p.word(&self.generator_names)?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(w)
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let run = (j - i) as i64;
            let exp = if w[i].inverse { -run } else { run };
            let name = &self.generator_names[w[i].generator];
            parts.push(if exp == 1 {
                name.clone()
            } else {
                format!("{name}^{exp}")
            });
            i = j;
        }
        parts.join(" ")
    }

    /// Exponent-sum matrix: one row per relator, one column per generator.
    pub fn relation_matrix(&self) -> Matrix {
        self.relators
            .iter()
            .map(|r| {
                let mut row = vec![BigInt::zero(); self.generator_count()];
                for l in r {
                    if l.inverse {
                        row[l.generator] -= 1;
                    } else {
                        row[l.generator] += 1;
                    }
                }
                row
            })
            .collect()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        write!(
            f,
            "< {} | {} >",
            self.generator_names.join(" "),
            rels.join(", ")
        )
    }
}

impl Serialize for Presentation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_presentation(&s).map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, message: &str) -> FpError {
        FpError::SyntaxError {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        if let Ok(rest) = std::str::from_utf8(&self.src[self.pos..]) {
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), FpError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn name(&mut self) -> Option<String> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => self.pos += 1,
            _ => return None,
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || c == b'_' || c == b'\'' {
                self.pos += 1;
            } else {
                break;
            }
        }
        Some(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn exponent(&mut self) -> Result<i64, FpError> {
        self.skip_ws();
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer exponent"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let value: i64 = digits
            .parse()
            .ok()
            .filter(|&v: &i64| v <= 1_000_000)
            .ok_or_else(|| FpError::SyntaxError {
                position: start,
                message: "exponent too large".into(),
            })?;
        Ok(if negative { -value } else { value })
    }

    fn word(&mut self, names: &[String]) -> Result<Word, FpError> {
        let mut out = Word::new();
        self.skip_ws();
        if self.peek() == Some(b'1') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            self.skip_ws();
            let start = self.pos;
            let atom: Word =
                match self.peek() {
                    Some(b'(') => {
                        self.pos += 1;
                        let inner = self.word(names)?;
                        self.expect(b')')?;
                        inner
                    }
                    Some(c) if c.is_ascii_alphabetic() => {
                        let name = self.name().unwrap();
                        let g = names.iter().position(|n| *n == name).ok_or(
                            FpError::UnknownGenerator {
                                name,
                                position: start,
                            },
                        )?;
                        vec![Letter::new(g, false)]
                    }
                    _ => break,
                };
            let e = self.exponent()?;
            let piece = if e < 0 { inverse_word(&atom) } else { atom };
            for _ in 0..e.unsigned_abs() {
                out.extend_from_slice(&piece);
            }
        }
        Ok(out)
    }
}

/// Parses `< g1 g2 ... | w1, w2, ... >`.
pub fn parse_presentation(text: &str) -> Result<Presentation, FpError> {
    let mut p = Parser::new(text);
    p.expect(b'<')?;
    let mut names: Vec<String> = Vec::new();
    loop {
        p.skip_ws();
        if p.peek() == Some(b',') {
            p.pos += 1;
            continue;
        }
        let start = p.pos;
        match p.name() {
            Some(n) => {
                if names.contains(&n) {
                    return Err(FpError::SyntaxError {
                        position: start,
                        message: format!("generator {n:?} declared twice"),
                    });
                }
                names.push(n)
            }
            None => break,
        }
    }
    p.expect(b'|')?;
    let mut relators = Vec::new();
    p.skip_ws();
    if p.peek() != Some(b'>') {
        loop {
            let w = p.word(&names)?;
            relators.push(w);
            p.skip_ws();
            match p.peek() {
                Some(b',') => p.pos += 1,
                _ => break,
            }
        }
    }
    p.expect(b'>')?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(Presentation::new(names, relators))
}

/// Invariant factors of a finitely generated abelian group: `Z^rank ⊕ ⊕ Z/dᵢ`
/// with `d₁ | d₂ | …` and every `dᵢ ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianInvariants {
    pub fn finite(torsion: Vec<u64>) -> Self {
        let a = Self { rank: 0, torsion };
        debug_assert!(a.is_valid());
        a
    }

    pub fn is_valid(&self) -> bool {
        self.torsion.iter().all(|&d| d >= 2) && self.torsion.windows(2).all(|w| w[1] % w[0] == 0)
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// Order of the torsion part (the whole group when `rank == 0`).
    pub fn torsion_order(&self) -> u64 {
        self.torsion.iter().product()
    }

    /// Normalises an arbitrary list of cyclic orders into invariant factors.
    pub fn from_cyclic_orders(rank: usize, orders: &[u64]) -> Self {
        let rows: Vec<Vec<BigInt>> = orders
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut r = vec![BigInt::zero(); orders.len()];
                r[i] = BigInt::from(d);
                r
            })
            .collect();
        let snf = smith_normal_form(&rows, orders.len());
        let torsion = snf
            .diagonal
            .iter()
            .map(|d| d.to_u64().expect("invariant factor fits in u64"))
            .filter(|&d| d > 1)
            .collect();
        Self { rank, torsion }
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        if self.rank > 0 {
            parts.push(if self.rank == 1 {
                "Z".into()
            } else {
                format!("Z^{}", self.rank)
            });
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// Abelianization with the images of the presentation's generators.
#[derive(Debug, Clone)]
pub struct Abelianized {
    pub invariants: AbelianInvariants,
    /// For each generator, its coordinates in `Z/d₁ ⊕ … ⊕ Z/d_k ⊕ Z^rank`
    /// (torsion coordinates reduced mod `dᵢ`).
    pub generator_images: Vec<Vec<i64>>,
}

pub fn abelianization(p: &Presentation) -> AbelianInvariants {
    abelianize(p).invariants
}

/// Smith normal form of the exponent-sum matrix. The column transform gives
/// each generator's image in the invariant-factor coordinates.
pub fn abelianize(p: &Presentation) -> Abelianized {
    let n = p.generator_count();
    let snf = smith_normal_form(&p.relation_matrix(), n);
    let rank = n - snf.rank();
    // coordinates with diagonal 1 vanish; keep those > 1 and the free ones
    let mut keep: Vec<(usize, Option<BigInt>)> = Vec::new();
    for (i, d) in snf.diagonal.iter().enumerate() {
        if *d > BigInt::from(1) {
            keep.push((i, Some(d.clone())));
        }
    }
    for i in snf.rank()..n {
        keep.push((i, None));
    }
    let torsion = keep
        .iter()
        .filter_map(|(_, d)| d.as_ref())
        .map(|d| d.to_u64().expect("invariant factor fits in u64"))
        .collect();
    let generator_images = (0..n)
        .map(|g| {
            keep.iter()
                .map(|(i, d)| {
                    let x = &snf.column_transform[g][*i];
                    let x = match d {
                        Some(d) => x.mod_floor(d),
                        None => x.clone(),
                    };
                    x.to_i64().expect("coordinate fits in i64")
                })
                .collect()
        })
        .collect();
    Abelianized {
        invariants: AbelianInvariants { rank, torsion },
        generator_images,
    }
}

const UNDEF: usize = usize::MAX;

/// A complete coset table for a subgroup of finite index.
#[derive(Debug, Clone)]
pub struct CosetTable {
    pub presentation: Presentation,
    pub subgroup_words: Vec<Word>,
    /// `table[c][2g]` is `c·g`, `table[c][2g + 1]` is `c·g⁻¹`.
    pub table: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.table.len()
    }

    pub fn act(&self, coset: usize, letter: Letter) -> usize {
        self.table[coset][letter.column()]
    }

    pub fn trace(&self, coset: usize, word: &[Letter]) -> usize {
        word.iter().fold(coset, |c, &l| self.act(c, l))
    }

    pub fn is_complete(&self) -> bool {
        let n = self.index();
        self.table.iter().all(|r| r.iter().all(|&c| c < n))
    }

    /// Every relator closes at every coset and every subgroup word fixes coset 0.
    pub fn is_closed(&self) -> bool {
        self.is_complete()
            && (0..self.index()).all(|c| {
                self.presentation
                    .relators
                    .iter()
                    .all(|r| self.trace(c, r) == c)
            })
            && self.subgroup_words.iter().all(|w| self.trace(0, w) == 0)
    }
}

struct Enumerator {
    columns: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    cap: usize,
}

impl Enumerator {
    fn new(columns: usize, cap: usize) -> Self {
        Self {
            columns,
            table: vec![vec![UNDEF; columns]],
            parent: vec![0],
            cap,
        }
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = c;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn define(&mut self, c: usize, col: usize) -> Result<(), FpError> {
        if self.table.len() >= self.cap {
            return Err(FpError::CapExceeded { cap: self.cap });
        }
        let m = self.table.len();
        self.table.push(vec![UNDEF; self.columns]);
        self.parent.push(m);
        self.table[c][col] = m;
        self.table[m][col ^ 1] = c;
        Ok(())
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let a = self.rep(a);
        let b = self.rep(b);
        if a == b {
            return;
        }
        let (keep, kill) = (a.min(b), a.max(b));
        self.parent[kill] = keep;
        queue.push(kill);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let dead = queue[i];
            i += 1;
            for col in 0..self.columns {
                let target = self.table[dead][col];
                if target == UNDEF {
                    continue;
                }
                if self.table[target][col ^ 1] == dead {
                    self.table[target][col ^ 1] = UNDEF;
                }
                let mu = self.rep(dead);
                let nu = self.rep(target);
                if self.table[mu][col] != UNDEF {
                    let t = self.table[mu][col];
                    self.merge(nu, t, &mut queue);
                } else if self.table[nu][col ^ 1] != UNDEF {
                    let t = self.table[nu][col ^ 1];
                    self.merge(mu, t, &mut queue);
                } else {
                    self.table[mu][col] = nu;
                    self.table[nu][col ^ 1] = mu;
                }
            }
        }
    }

    /// HLT scan of `word` from coset `c`, defining cosets to fill gaps.
    fn scan_and_fill(&mut self, c: usize, word: &[usize]) -> Result<(), FpError> {
        if word.is_empty() {
            return Ok(());
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = word.len() as isize - 1;
        loop {
            while (i as isize) <= j && self.table[f][word[i]] != UNDEF {
                f = self.table[f][word[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.table[b][word[j as usize] ^ 1] != UNDEF {
                b = self.table[b][word[j as usize] ^ 1];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            } else if j == i as isize {
                self.table[f][word[i]] = b;
                self.table[b][word[i] ^ 1] = f;
                return Ok(());
            } else {
                self.define(f, word[i])?;
            }
        }
    }
}

/// Todd–Coxeter coset enumeration (HLT strategy) for the subgroup generated
/// by `subgroup` in the group presented by `p`.
pub fn coset_enumeration(
    p: &Presentation,
    subgroup: &[Word],
    cap: usize,
) -> Result<CosetTable, FpError> {
    let columns = 2 * p.generator_count();
    let to_cols = |w: &Word| -> Vec<usize> { w.iter().map(|l| l.column()).collect() };
    let relators: Vec<Vec<usize>> = p.relators.iter().map(to_cols).collect();
    let subgroup_cols: Vec<Vec<usize>> = subgroup.iter().map(to_cols).collect();
    let mut e = Enumerator::new(columns, cap.max(1));

    for w in &subgroup_cols {
        e.scan_and_fill(0, w)?;
    }
    loop {
        let mut c = 0;
        while c < e.table.len() {
            if e.live(c) {
                for r in &relators {
                    e.scan_and_fill(c, r)?;
                    if !e.live(c) {
                        break;
                    }
                }
            }
            if e.live(c) {
                for col in 0..columns {
                    if e.table[c][col] == UNDEF {
                        e.define(c, col)?;
                    }
                }
            }
            c += 1;
        }
        // re-check everything; a late coincidence can reopen earlier rows
        let before: Vec<usize> = (0..e.table.len()).filter(|&c| e.live(c)).collect();
        let mut stable = true;
        for &c in &before {
            if !e.live(c) {
                stable = false;
                continue;
            }
            for w in subgroup_cols
                .iter()
                .filter(|_| c == 0)
                .chain(relators.iter())
            {
                let n = e.table.len();
                e.scan_and_fill(c, w)?;
                if e.table.len() != n || !e.live(c) {
                    stable = false;
                }
            }
        }
        let complete = (0..e.table.len())
            .filter(|&c| e.live(c))
            .all(|c| e.table[c].iter().all(|&t| t != UNDEF));
        if stable && complete {
            break;
        }
    }

    // renumber live cosets in breadth-first order from coset 0
    let mut order = vec![UNDEF; e.table.len()];
    let mut bfs = vec![0usize];
    order[0] = 0;
    let mut head = 0;
    while head < bfs.len() {
        let c = bfs[head];
        head += 1;
        for col in 0..columns {
            let t = e.rep(e.table[c][col]);
            if order[t] == UNDEF {
                order[t] = bfs.len();
                bfs.push(t);
            }
        }
    }
    let mut table = vec![vec![0usize; columns]; bfs.len()];
    for (new, &old) in bfs.iter().enumerate() {
        for col in 0..columns {
            let t = e.rep(e.table[old][col]);
            table[new][col] = order[t];
        }
    }
    let result = CosetTable {
        presentation: p.clone(),
        subgroup_words: subgroup.to_vec(),
        table,
    };
    debug_assert!(result.is_closed());
    if !result.is_closed() {
        return Err(FpError::IncompleteTable);
    }
    Ok(result)
}

/// The presented group acting on the cosets; generator `i` acts by column `2i`.
pub fn permutation_realization(t: &CosetTable, cap: usize) -> Result<Group, FpError> {
    if !t.is_complete() {
        return Err(FpError::IncompleteTable);
    }
    let gens = generator_permutations(t)?;
    Ok(Group::generate(t.index(), gens, cap)?)
}

/// Column permutations of the table, one per generator, in generator order
/// (identities included).
pub fn generator_permutations(t: &CosetTable) -> Result<Vec<Permutation>, FpError> {
    (0..t.presentation.generator_count())
        .map(|g| {
            let images = (0..t.index()).map(|c| t.table[c][2 * g]).collect();
            Permutation::from_images(images).map_err(|_| FpError::IncompleteTable)
        })
        .collect()
}

/// A subgroup `M` of a finite abelian group `A = ⊕ Z/dᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianSubgroup {
    /// Generators in the coordinates of `A` (reduced mod `dᵢ`).
    pub generators: Vec<Vec<u64>>,
    pub order: u64,
    /// Invariant factors of `A / M`.
    pub quotient: AbelianInvariants,
    /// Row Hermite normal form of the preimage lattice of `M` in `Z^k`.
    pub lattice: Vec<Vec<u64>>,
}

/// Every subgroup of a finite abelian group, via the lattices between
/// `⊕ dᵢZ` and `Z^k` in row Hermite normal form. Sorted by subgroup order,
/// then lattice.
pub fn subgroups_of_abelian(a: &AbelianInvariants) -> Result<Vec<AbelianSubgroup>, FpError> {
    if a.rank > 0 {
        return Err(FpError::InfiniteGroup { rank: a.rank });
    }
    let d = &a.torsion;
    let k = d.len();
    let total: u64 = a.torsion_order();
    let mut out = Vec::new();

    // recursive enumeration of upper-triangular HNF rows
    fn divisors(n: u64) -> Vec<u64> {
        (1..=n).filter(|x| n.is_multiple_of(*x)).collect()
    }
    let diag_choices: Vec<Vec<u64>> = d.iter().map(|&x| divisors(x)).collect();
    let mut diag = vec![0u64; k];
    let mut stack_diag = |out: &mut Vec<Vec<u64>>| {
        // cartesian product of divisor choices
        let mut idx = vec![0usize; k];
        loop {
            for i in 0..k {
                diag[i] = diag_choices[i][idx[i]];
            }
            out.push(diag.clone());
            let mut p = 0;
            while p < k {
                idx[p] += 1;
                if idx[p] < diag_choices[p].len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
            if p == k {
                break;
            }
        }
    };
    let mut diagonals = Vec::new();
    stack_diag(&mut diagonals);

    let contains = |m: &[Vec<u64>], v: &[i64]| -> bool {
        let mut v: Vec<i64> = v.to_vec();
        for i in 0..k {
            let a = m[i][i] as i64;
            if v[i] % a != 0 {
                return false;
            }
            let c = v[i] / a;
            for j in i..k {
                v[j] -= c * m[i][j] as i64;
            }
        }
        v.iter().all(|&x| x == 0)
    };

    for dg in diagonals {
        // off-diagonal entries m[i][j] for j > i range over 0..dg[j]
        let slots: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .collect();
        let mut counters = vec![0u64; slots.len()];
        loop {
            let mut m = vec![vec![0u64; k]; k];
            for i in 0..k {
                m[i][i] = dg[i];
            }
            for (s, &(i, j)) in slots.iter().enumerate() {
                m[i][j] = counters[s];
            }
            let ok = (0..k).all(|i| {
                let mut e = vec![0i64; k];
                e[i] = d[i] as i64;
                contains(&m, &e)
            });
            if ok {
                let index: u64 = dg.iter().product();
                let order = total / index;
                let generators: Vec<Vec<u64>> = m
                    .iter()
                    .map(|row| row.iter().zip(d).map(|(&x, &di)| x % di).collect())
                    .filter(|row: &Vec<u64>| row.iter().any(|&x| x != 0))
                    .collect();
                let quotient = {
                    let rows: Matrix = m
                        .iter()
                        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                        .collect();
                    let snf = smith_normal_form(&rows, k);
                    AbelianInvariants::finite(
                        snf.diagonal
                            .iter()
                            .map(|x| x.to_u64().unwrap())
                            .filter(|&x| x > 1)
                            .collect(),
                    )
                };
                out.push(AbelianSubgroup {
                    generators,
                    order,
                    quotient,
                    lattice: m,
                });
            }
            let mut p = 0;
            while p < slots.len() {
                counters[p] += 1;
                if counters[p] < dg[slots[p].1] {
                    break;
                }
                counters[p] = 0;
                p += 1;
            }
            if p == slots.len() {
                break;
            }
        }
    }
    out.sort_by(|x, y| {
        x.order
            .cmp(&y.order)
            .then_with(|| x.lattice.cmp(&y.lattice))
    });
    Ok(out)
}
