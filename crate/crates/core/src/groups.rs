//! Finite groups as explicit multiplication tables.
//!
//! Elements are dense indices 0..order-1 with index 0 the identity; the
//! element ordering is fixed by each constructor (lexicographic on the
//! construction's natural tuples) so that reports are reproducible.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use crate::{Error, Result};

/// Hard limit on constructed group orders. Exceeding it is an error,
/// never a silent truncation.
pub const DEFAULT_SIZE_CAP: usize = 20_000;

/// Orders up to this bound get a full associativity check; larger tables
/// are checked on a deterministic sample of triples.
const FULL_ASSOC_BOUND: usize = 128;
const SAMPLED_ASSOC_TRIPLES: usize = 200_000;

/// A finite group given by its full multiplication table.
#[derive(Debug)]
pub struct GroupTable {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    label: String,
    generators: BTreeMap<String, u32>,
}

/// Shared handle to a validated [`GroupTable`].
#[derive(Clone, Debug)]
pub struct Group(Arc<GroupTable>);

impl Deref for Group {
    type Target = GroupTable;
    fn deref(&self) -> &GroupTable {
        &self.0
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Group) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.order == other.order && self.mul == other.mul)
    }
}

impl Eq for Group {}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

impl GroupTable {
    fn validated(
        order: usize,
        mul: Vec<u32>,
        label: String,
        generators: BTreeMap<String, u32>,
    ) -> Result<Group> {
        if order == 0 {
            return Err(Error::BadTable("order must be positive".into()));
        }
        if order > DEFAULT_SIZE_CAP {
            return Err(Error::SizeCapExceeded {
                size: order,
                cap: DEFAULT_SIZE_CAP,
            });
        }
        if mul.len() != order * order {
            return Err(Error::BadTable(format!(
                "table has {} entries, expected {}",
                mul.len(),
                order * order
            )));
        }
        if mul.iter().any(|&x| x as usize >= order) {
            return Err(Error::BadTable("entry out of range".into()));
        }
        // identity at index 0
        for x in 0..order {
            if mul[x] as usize != x || mul[x * order] as usize != x {
                return Err(Error::BadTable("index 0 is not a two-sided identity".into()));
            }
        }
        // Latin square
        let mut seen = vec![false; order];
        for r in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for c in 0..order {
                let v = mul[r * order + c] as usize;
                if seen[v] {
                    return Err(Error::BadTable(format!("row {r} repeats element {v}")));
                }
                seen[v] = true;
            }
        }
        for c in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for r in 0..order {
                let v = mul[r * order + c] as usize;
                if seen[v] {
                    return Err(Error::BadTable(format!("column {c} repeats element {v}")));
                }
                seen[v] = true;
            }
        }
        // two-sided inverses
        let mut inv = vec![0u32; order];
        for x in 0..order {
            let y = (0..order)
                .find(|&y| mul[x * order + y] == 0)
                .expect("latin square row contains identity");
            if mul[y * order + x] != 0 {
                return Err(Error::BadTable(format!("element {x} has no two-sided inverse")));
            }
            inv[x] = y as u32;
        }
        // associativity: full below the bound, sampled above it
        let assoc = |a: usize, b: usize, c: usize| -> bool {
            let ab = mul[a * order + b] as usize;
            let bc = mul[b * order + c] as usize;
            mul[ab * order + c] == mul[a * order + bc]
        };
        if order <= FULL_ASSOC_BOUND {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if !assoc(a, b, c) {
                            return Err(Error::BadTable(format!(
                                "associativity fails at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut state = 0x5EED_0000_0000_0000u64 ^ order as u64;
            for _ in 0..SAMPLED_ASSOC_TRIPLES {
                let a = (splitmix64(&mut state) % order as u64) as usize;
                let b = (splitmix64(&mut state) % order as u64) as usize;
                let c = (splitmix64(&mut state) % order as u64) as usize;
                if !assoc(a, b, c) {
                    return Err(Error::BadTable(format!(
                        "associativity fails at ({a},{b},{c})"
                    )));
                }
            }
        }
        for (name, &g) in &generators {
            if g as usize >= order {
                return Err(Error::BadTable(format!("generator '{name}' out of range")));
            }
        }
        Ok(Group(Arc::new(GroupTable {
            order,
            mul,
            inv,
            label,
            generators,
        })))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        0
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn conjugate(&self, g: u32, by: u32) -> u32 {
        self.mul(self.mul(self.inv(by), g), by)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generators(&self) -> &BTreeMap<String, u32> {
        &self.generators
    }

    pub fn element_order(&self, x: u32) -> usize {
        let mut n = 1;
        let mut cur = x;
        while cur != 0 {
            cur = self.mul(cur, x);
            n += 1;
        }
        n
    }

    /// The table as rows, for emission as a table spec.
    pub fn mul_rows(&self) -> Vec<Vec<u32>> {
        (0..self.order)
            .map(|r| self.mul[r * self.order..(r + 1) * self.order].to_vec())
            .collect()
    }

    /// Resolves a word in named generators to an element index.
    ///
    /// Grammar: factors joined by `*`; a factor is an atom with an optional
    /// integer power (`t^-1`); an atom is a generator name, `e` or `1` for
    /// the identity, `#k` for the raw element index k, or a parenthesized
    /// word (`(a*t)^-1`).
    pub fn resolve_word(&self, word: &str) -> Result<u32> {
        let s: String = word.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0usize;
        let v = self.parse_word(&s, &mut pos)?;
        if pos != s.len() {
            return Err(Error::Parse {
                what: "word",
                detail: format!("trailing input at byte {pos} of '{s}'"),
            });
        }
        Ok(v)
    }

    fn parse_word(&self, s: &str, pos: &mut usize) -> Result<u32> {
        let mut acc = self.parse_factor(s, pos)?;
        while s[*pos..].starts_with('*') {
            *pos += 1;
            let f = self.parse_factor(s, pos)?;
            acc = self.mul(acc, f);
        }
        Ok(acc)
    }

    fn parse_factor(&self, s: &str, pos: &mut usize) -> Result<u32> {
        let base = self.parse_atom(s, pos)?;
        if s[*pos..].starts_with('^') {
            *pos += 1;
            let rest = &s[*pos..];
            let end = rest
                .char_indices()
                .take_while(|(i, c)| c.is_ascii_digit() || (*i == 0 && *c == '-'))
                .count();
            let num = &rest[..end];
            let exp: i64 = num.parse().map_err(|e| Error::Parse {
                what: "word",
                detail: format!("bad exponent '{num}': {e}"),
            })?;
            *pos += end;
            let b = if exp < 0 { self.inv(base) } else { base };
            let mut out = 0u32;
            for _ in 0..exp.unsigned_abs().min(1_000_000) {
                out = self.mul(out, b);
            }
            Ok(out)
        } else {
            Ok(base)
        }
    }

    fn parse_atom(&self, s: &str, pos: &mut usize) -> Result<u32> {
        let rest = &s[*pos..];
        if rest.is_empty() {
            return Err(Error::Parse {
                what: "word",
                detail: "unexpected end of word".into(),
            });
        }
        if let Some(inner) = rest.strip_prefix('(') {
            *pos += 1;
            let v = self.parse_word(s, pos)?;
            if !s[*pos..].starts_with(')') {
                return Err(Error::Parse {
                    what: "word",
                    detail: format!("missing ')' in '{inner}'"),
                });
            }
            *pos += 1;
            return Ok(v);
        }
        if let Some(num) = rest.strip_prefix('#') {
            let end = num.chars().take_while(|c| c.is_ascii_digit()).count();
            let idx: usize = num[..end].parse().map_err(|e| Error::Parse {
                what: "word",
                detail: format!("bad index '#{}': {e}", &num[..end]),
            })?;
            if idx >= self.order {
                return Err(Error::UnknownElement(format!("#{idx}")));
            }
            *pos += 1 + end;
            return Ok(idx as u32);
        }
        let end = rest
            .chars()
            .take_while(|c| c.is_ascii_alphanumeric() || *c == '_' || *c == '.')
            .count();
        if end == 0 {
            return Err(Error::Parse {
                what: "word",
                detail: format!("unexpected character '{}'", &rest[..1]),
            });
        }
        let name = &rest[..end];
        *pos += end;
        if name == "e" || name == "1" {
            return Ok(0);
        }
        self.generators
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }
}

// ------------------------------------------------------------- constructors

impl Group {
    pub fn trivial() -> Group {
        Group::cyclic(1).expect("trivial group is below the cap")
    }

    /// Z/n with generator `g`.
    pub fn cyclic(n: usize) -> Result<Group> {
        check_cap(n)?;
        let mut mul = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                mul[i * n + j] = ((i + j) % n) as u32;
            }
        }
        let mut gens = BTreeMap::new();
        gens.insert("g".to_string(), (1 % n) as u32);
        GroupTable::validated(n, mul, format!("Z/{n}"), gens)
    }

    /// Symmetric group on n letters, elements ordered lexicographically by
    /// one-line notation. Generators `s1..s(n-1)` are adjacent transpositions.
    pub fn symmetric(n: usize) -> Result<Group> {
        let order = (1..=n).product::<usize>().max(1);
        check_cap(order)?;
        let mut perms: Vec<Vec<u8>> = Vec::with_capacity(order);
        let mut cur: Vec<u8> = (0..n as u8).collect();
        loop {
            perms.push(cur.clone());
            if !next_permutation(&mut cur) {
                break;
            }
        }
        let index: BTreeMap<Vec<u8>, u32> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let mut mul = vec![0u32; order * order];
        for (i, a) in perms.iter().enumerate() {
            for (j, b) in perms.iter().enumerate() {
                let comp: Vec<u8> = (0..n).map(|x| a[b[x] as usize]).collect();
                mul[i * order + j] = index[&comp];
            }
        }
        let mut gens = BTreeMap::new();
        for k in 1..n {
            let mut p: Vec<u8> = (0..n as u8).collect();
            p.swap(k - 1, k);
            gens.insert(format!("s{k}"), index[&p]);
        }
        GroupTable::validated(order, mul, format!("S{n}"), gens)
    }

    /// Dihedral group of order 2n: rotations `r`, reflection `f`.
    pub fn dihedral(n: usize) -> Result<Group> {
        if n == 0 {
            return Err(Error::Invalid("dihedral parameter must be >= 1".into()));
        }
        let order = 2 * n;
        check_cap(order)?;
        // element (i, eps) at index eps*n + i
        let mut mul = vec![0u32; order * order];
        for e1 in 0..2usize {
            for i in 0..n {
                for e2 in 0..2usize {
                    for j in 0..n {
                        let rot = if e1 == 0 { (i + j) % n } else { (i + n - j) % n };
                        let refl = e1 ^ e2;
                        mul[(e1 * n + i) * order + (e2 * n + j)] = (refl * n + rot) as u32;
                    }
                }
            }
        }
        let mut gens = BTreeMap::new();
        gens.insert("r".to_string(), (1 % n) as u32);
        gens.insert("f".to_string(), n as u32);
        GroupTable::validated(order, mul, format!("D{n}"), gens)
    }

    /// The quaternion group of order 8 with generators `i`, `j`, `k`.
    pub fn quaternion8() -> Result<Group> {
        // index s*4 + b with b in {1, i, j, k} and s the sign bit
        const SGN: [[u32; 4]; 4] = [
            [0, 0, 0, 0],
            [0, 1, 0, 1],
            [0, 1, 1, 0],
            [0, 0, 1, 1],
        ];
        const BAS: [[u32; 4]; 4] = [
            [0, 1, 2, 3],
            [1, 0, 3, 2],
            [2, 3, 0, 1],
            [3, 2, 1, 0],
        ];
        let order = 8;
        let mut mul = vec![0u32; order * order];
        for s1 in 0..2u32 {
            for b1 in 0..4usize {
                for s2 in 0..2u32 {
                    for b2 in 0..4usize {
                        let s = s1 ^ s2 ^ SGN[b1][b2];
                        let b = BAS[b1][b2];
                        mul[((s1 * 4 + b1 as u32) * 8 + s2 * 4 + b2 as u32) as usize] = s * 4 + b;
                    }
                }
            }
        }
        let mut gens = BTreeMap::new();
        gens.insert("i".to_string(), 1);
        gens.insert("j".to_string(), 2);
        gens.insert("k".to_string(), 3);
        GroupTable::validated(order, mul, "Q8".to_string(), gens)
    }

    /// Direct product; tuples ordered lexicographically with the first
    /// factor most significant. Generators are prefixed `f0.`, `f1.`, ...
    pub fn product(factors: &[Group]) -> Result<Group> {
        if factors.is_empty() {
            return Ok(Group::trivial());
        }
        let mut order = 1usize;
        for f in factors {
            order = order
                .checked_mul(f.order())
                .ok_or(Error::SizeCapExceeded {
                    size: usize::MAX,
                    cap: DEFAULT_SIZE_CAP,
                })?;
            check_cap(order)?;
        }
        let k = factors.len();
        let decompose = |mut idx: usize| -> Vec<u32> {
            let mut digits = vec![0u32; k];
            for i in (0..k).rev() {
                let o = factors[i].order();
                digits[i] = (idx % o) as u32;
                idx /= o;
            }
            digits
        };
        let compose = |digits: &[u32]| -> usize {
            let mut idx = 0usize;
            for (i, &d) in digits.iter().enumerate() {
                idx = idx * factors[i].order() + d as usize;
            }
            idx
        };
        let mut mul = vec![0u32; order * order];
        for a in 0..order {
            let da = decompose(a);
            for b in 0..order {
                let db = decompose(b);
                let dc: Vec<u32> = (0..k).map(|i| factors[i].mul(da[i], db[i])).collect();
                mul[a * order + b] = compose(&dc) as u32;
            }
        }
        let mut gens = BTreeMap::new();
        for (i, f) in factors.iter().enumerate() {
            for (name, &g) in f.generators() {
                let mut digits = vec![0u32; k];
                digits[i] = g;
                gens.insert(format!("f{i}.{name}"), compose(&digits) as u32);
            }
        }
        let label = factors
            .iter()
            .map(|f| f.label().to_string())
            .collect::<Vec<_>>()
            .join(" x ");
        GroupTable::validated(order, mul, label, gens)
    }

    /// Semidirect product N x| H for an explicit action table:
    /// `action[h][x]` is the automorphism of N attached to h applied to x.
    /// Elements (a, h) are indexed a*|H| + h. Base generators are prefixed
    /// `b.`, acting generators `h.`.
    pub fn semidirect(base: &Group, acting: &Group, action: &[Vec<u32>]) -> Result<Group> {
        let n = base.order();
        let h = acting.order();
        let order = n.checked_mul(h).ok_or(Error::SizeCapExceeded {
            size: usize::MAX,
            cap: DEFAULT_SIZE_CAP,
        })?;
        check_cap(order)?;
        if action.len() != h || action.iter().any(|row| row.len() != n) {
            return Err(Error::BadAction(format!(
                "action table must be {h} rows of length {n}"
            )));
        }
        // each row is an automorphism of the base
        for (hi, row) in action.iter().enumerate() {
            let mut seen = vec![false; n];
            for &v in row {
                if v as usize >= n || seen[v as usize] {
                    return Err(Error::BadAction(format!("row {hi} is not a bijection")));
                }
                seen[v as usize] = true;
            }
            if row[0] != 0 {
                return Err(Error::BadAction(format!("row {hi} moves the identity")));
            }
            for a in 0..n as u32 {
                for b in 0..n as u32 {
                    if row[base.mul(a, b) as usize] != base.mul(row[a as usize], row[b as usize]) {
                        return Err(Error::BadAction(format!(
                            "row {hi} is not multiplicative at ({a},{b})"
                        )));
                    }
                }
            }
        }
        // the action must be a homomorphism H -> Aut(N)
        for h1 in 0..h {
            for h2 in 0..h {
                let h12 = acting.mul(h1 as u32, h2 as u32) as usize;
                for x in 0..n {
                    if action[h12][x] != action[h1][action[h2][x] as usize] {
                        return Err(Error::BadAction(format!(
                            "action is not a homomorphism at ({h1},{h2})"
                        )));
                    }
                }
            }
        }
        let mut mul = vec![0u32; order * order];
        for a1 in 0..n {
            for h1 in 0..h {
                let row = &action[h1];
                for a2 in 0..n {
                    let abase = base.mul(a1 as u32, row[a2]) as usize;
                    for h2 in 0..h {
                        let hc = acting.mul(h1 as u32, h2 as u32) as usize;
                        mul[(a1 * h + h1) * order + (a2 * h + h2)] = (abase * h + hc) as u32;
                    }
                }
            }
        }
        let mut gens = BTreeMap::new();
        for (name, &g) in base.generators() {
            gens.insert(format!("b.{name}"), (g as usize * h) as u32);
        }
        for (name, &g) in acting.generators() {
            gens.insert(format!("h.{name}"), g);
        }
        let label = format!("({}) : ({})", base.label(), acting.label());
        GroupTable::validated(order, mul, label, gens)
    }

    /// Wreath-with-cyclic convenience: (B^n) x| Z/n with the coordinate shift
    /// sending position i to position i+1.
    pub fn wreath_cyclic(base: &Group, n: usize) -> Result<Group> {
        if n == 0 {
            return Err(Error::Invalid("wreath parameter must be >= 1".into()));
        }
        let b = base.order();
        let mut pow = 1usize;
        for _ in 0..n {
            pow = pow.checked_mul(b).ok_or(Error::SizeCapExceeded {
                size: usize::MAX,
                cap: DEFAULT_SIZE_CAP,
            })?;
            check_cap(pow.saturating_mul(n))?;
        }
        let factors: Vec<Group> = (0..n).map(|_| base.clone()).collect();
        let big = Group::product(&factors)?;
        let cyc = Group::cyclic(n)?;
        // digits of v in base |B|, first position most significant
        let digits = |mut idx: usize| -> Vec<usize> {
            let mut d = vec![0usize; n];
            for i in (0..n).rev() {
                d[i] = idx % b;
                idx /= b;
            }
            d
        };
        let compose = |d: &[usize]| -> usize { d.iter().fold(0usize, |acc, &x| acc * b + x) };
        let mut action = vec![vec![0u32; pow]; n];
        for k in 0..n {
            for v in 0..pow {
                let d = digits(v);
                let mut out = vec![0usize; n];
                for (i, slot) in out.iter_mut().enumerate() {
                    *slot = d[(i + n - k) % n];
                }
                action[k][v] = compose(&out) as u32;
            }
        }
        Group::semidirect(&big, &cyc, &action)
    }

    /// Truncated lamplighter (Z/2 wr Z/n) with generators `a` (the lamp at
    /// position 0) and `t` (the shift).
    pub fn lamplighter_truncation(n: usize) -> Result<Group> {
        let z2 = Group::cyclic(2)?;
        let w = Group::wreath_cyclic(&z2, n)?;
        let order = w.order();
        let mul = w.mul.clone();
        let mut gens = BTreeMap::new();
        // lamp config with only position 0 lit has product index 2^(n-1)
        gens.insert("a".to_string(), ((1usize << (n - 1)) * n) as u32);
        gens.insert("t".to_string(), 1u32);
        GroupTable::validated(order, mul, format!("L{n}"), gens)
    }

    /// Group generated by explicit permutations of 0..degree, ordered
    /// lexicographically by one-line notation. Generators are `g0`, `g1`, ...
    pub fn from_permutations(degree: usize, generators: &[Vec<u32>]) -> Result<Group> {
        for (i, p) in generators.iter().enumerate() {
            let mut seen = vec![false; degree];
            if p.len() != degree {
                return Err(Error::Invalid(format!("generator {i} has wrong length")));
            }
            for &v in p {
                if v as usize >= degree || seen[v as usize] {
                    return Err(Error::Invalid(format!("generator {i} is not a permutation")));
                }
                seen[v as usize] = true;
            }
        }
        let id: Vec<u32> = (0..degree as u32).collect();
        let mut set: std::collections::BTreeSet<Vec<u32>> = std::iter::once(id.clone()).collect();
        let mut frontier: Vec<Vec<u32>> = vec![id];
        while let Some(p) = frontier.pop() {
            for gen in generators {
                let q: Vec<u32> = (0..degree).map(|x| p[gen[x] as usize]).collect();
                if set.insert(q.clone()) {
                    if set.len() > DEFAULT_SIZE_CAP {
                        return Err(Error::SizeCapExceeded {
                            size: set.len(),
                            cap: DEFAULT_SIZE_CAP,
                        });
                    }
                    frontier.push(q);
                }
            }
        }
        // BTreeSet iteration is already lexicographic; identity sorts first
        let elements: Vec<Vec<u32>> = set.into_iter().collect();
        let order = elements.len();
        let index: BTreeMap<&[u32], u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i as u32))
            .collect();
        let mut mul = vec![0u32; order * order];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let comp: Vec<u32> = (0..degree).map(|x| a[b[x] as usize]).collect();
                mul[i * order + j] = index[comp.as_slice()];
            }
        }
        let mut gens = BTreeMap::new();
        for (i, p) in generators.iter().enumerate() {
            gens.insert(format!("g{i}"), index[p.as_slice()]);
        }
        GroupTable::validated(order, mul, format!("perm({degree},{order})"), gens)
    }

    /// Builds a group from a raw multiplication table (validated; identity
    /// must sit at index 0).
    pub fn from_table(rows: Vec<Vec<u32>>, label: impl Into<String>) -> Result<Group> {
        let order = rows.len();
        if rows.iter().any(|r| r.len() != order) {
            return Err(Error::BadTable("table is not square".into()));
        }
        let mul: Vec<u32> = rows.into_iter().flatten().collect();
        GroupTable::validated(order, mul, label.into(), BTreeMap::new())
    }

    /// Rebuilds a group handle with a fresh label and generator map, keeping
    /// the validated table.
    pub fn relabeled(&self, label: impl Into<String>, generators: BTreeMap<String, u32>) -> Result<Group> {
        GroupTable::validated(self.order, self.mul.clone(), label.into(), generators)
    }
}

fn next_permutation(p: &mut [u8]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn check_cap(order: usize) -> Result<()> {
    if order > DEFAULT_SIZE_CAP {
        Err(Error::SizeCapExceeded {
            size: order,
            cap: DEFAULT_SIZE_CAP,
        })
    } else {
        Ok(())
    }
}

/// lcm over the finite subgroups; for a finite group this is the group order
/// itself (the group is a subgroup of itself and every subgroup order divides it).
pub fn lcm_finite(g: &Group) -> u64 {
    g.order() as u64
}

// ---------------------------------------------------------------- subgroups

/// A subgroup given by its sorted member set.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: Group,
    members: Vec<u32>,
    member_set: Vec<bool>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Subgroup) -> bool {
        self.parent == other.parent && self.members == other.members
    }
}

impl Subgroup {
    /// Smallest subgroup containing the given elements.
    pub fn closure(parent: &Group, gens: &[u32]) -> Subgroup {
        let order = parent.order();
        let mut in_set = vec![false; order];
        in_set[0] = true;
        let mut members = vec![0u32];
        let mut frontier: Vec<u32> = Vec::new();
        for &g in gens {
            assert!((g as usize) < order, "generator index out of range");
            if !in_set[g as usize] {
                in_set[g as usize] = true;
                members.push(g);
                frontier.push(g);
            }
        }
        while let Some(x) = frontier.pop() {
            let snapshot = members.clone();
            for y in snapshot {
                for z in [parent.mul(x, y), parent.mul(y, x)] {
                    if !in_set[z as usize] {
                        in_set[z as usize] = true;
                        members.push(z);
                        frontier.push(z);
                    }
                }
            }
        }
        members.sort_unstable();
        Subgroup {
            parent: parent.clone(),
            members,
            member_set: in_set,
        }
    }

    /// The whole group as a subgroup of itself.
    pub fn full(parent: &Group) -> Subgroup {
        let order = parent.order();
        Subgroup {
            parent: parent.clone(),
            members: (0..order as u32).collect(),
            member_set: vec![true; order],
        }
    }

    pub fn trivial(parent: &Group) -> Subgroup {
        Subgroup::closure(parent, &[])
    }

    /// Builds a subgroup from an explicit member set, verifying closure.
    pub fn from_members(parent: &Group, members: &[u32]) -> Result<Subgroup> {
        let sub = Subgroup::closure(parent, members);
        let mut sorted: Vec<u32> = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if !sorted.contains(&0) {
            sorted.insert(0, 0);
        }
        if sub.members != sorted {
            return Err(Error::Invalid(
                "member set is not closed under multiplication".into(),
            ));
        }
        Ok(sub)
    }

    pub fn parent(&self) -> &Group {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn contains(&self, x: u32) -> bool {
        self.member_set[x as usize]
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.parent.order()
    }

    /// True iff every u in `by` conjugates this subgroup onto itself.
    pub fn is_normalized_by(&self, by: &Subgroup) -> bool {
        assert!(
            self.parent == by.parent,
            "subgroups live in different parent groups"
        );
        by.members.iter().all(|&u| {
            self.members
                .iter()
                .all(|&v| self.contains(self.parent.conjugate(v, u)))
        })
    }

    pub fn is_normal(&self) -> bool {
        self.is_normalized_by(&Subgroup::full(&self.parent))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        assert!(self.parent == other.parent);
        let members: Vec<u32> = self
            .members
            .iter()
            .copied()
            .filter(|&x| other.contains(x))
            .collect();
        let mut member_set = vec![false; self.parent.order()];
        for &m in &members {
            member_set[m as usize] = true;
        }
        Subgroup {
            parent: self.parent.clone(),
            members,
            member_set,
        }
    }

    /// The product set {self * other} (a subgroup when one side is normal).
    pub fn product_set(&self, other: &Subgroup) -> Vec<u32> {
        assert!(self.parent == other.parent);
        let mut seen = vec![false; self.parent.order()];
        let mut out = Vec::new();
        for &a in &self.members {
            for &b in &other.members {
                let p = self.parent.mul(a, b);
                if !seen[p as usize] {
                    seen[p as usize] = true;
                    out.push(p);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Index and the canonical right transversal (minimal representative per
    /// right coset U*g, identity first).
    pub fn index_and_transversal(&self) -> (usize, Transversal) {
        let order = self.parent.order();
        let mut covered = vec![false; order];
        let mut reps = Vec::new();
        for g in 0..order as u32 {
            if covered[g as usize] {
                continue;
            }
            reps.push(g);
            for &u in &self.members {
                covered[self.parent.mul(u, g) as usize] = true;
            }
        }
        let index = reps.len();
        (
            index,
            Transversal {
                subgroup: self.clone(),
                reps,
            },
        )
    }

    /// The subgroup as a standalone group, together with the map from local
    /// indices back to parent indices. Local ordering follows the parent's.
    pub fn as_group(&self) -> (Group, Vec<u32>) {
        let n = self.members.len();
        let mut local = vec![u32::MAX; self.parent.order()];
        for (i, &m) in self.members.iter().enumerate() {
            local[m as usize] = i as u32;
        }
        let mut mul = vec![0u32; n * n];
        for (i, &a) in self.members.iter().enumerate() {
            for (j, &b) in self.members.iter().enumerate() {
                mul[i * n + j] = local[self.parent.mul(a, b) as usize];
            }
        }
        let mut gens = BTreeMap::new();
        for (name, &g) in self.parent.generators() {
            if self.contains(g) {
                gens.insert(name.clone(), local[g as usize]);
            }
        }
        let group = GroupTable::validated(
            n,
            mul,
            format!("{}[{}]", self.parent.label(), n),
            gens,
        )
        .expect("a closed member set always yields a valid table");
        (group, self.members.clone())
    }
}

/// A right transversal: representatives t with G the disjoint union of the
/// right cosets U*t, identity first.
#[derive(Clone, Debug)]
pub struct Transversal {
    subgroup: Subgroup,
    reps: Vec<u32>,
}

impl Transversal {
    /// Validates that the representatives cover every coset exactly once and
    /// start with the identity.
    pub fn new(subgroup: Subgroup, reps: Vec<u32>) -> Result<Transversal> {
        if reps.first() != Some(&0) {
            return Err(Error::BadTransversal(
                "first representative must be the identity".into(),
            ));
        }
        let parent = subgroup.parent().clone();
        let mut covered = vec![false; parent.order()];
        for &t in &reps {
            for &u in subgroup.members() {
                let g = parent.mul(u, t) as usize;
                if covered[g] {
                    return Err(Error::BadTransversal(format!(
                        "element {g} covered twice"
                    )));
                }
                covered[g] = true;
            }
        }
        if covered.iter().any(|&c| !c) {
            return Err(Error::BadTransversal("cosets do not cover the group".into()));
        }
        Ok(Transversal { subgroup, reps })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn reps(&self) -> &[u32] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cyclic_two() {
        let g = Group::cyclic(2).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.mul(1, 1), 0);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn symmetric_three() {
        let g = Group::symmetric(3).unwrap();
        assert_eq!(g.order(), 6);
        // lexicographic one-line order: index 2 is the (12) transposition,
        // index 3 the 3-cycle
        let s1 = g.generators()["s1"];
        assert_eq!(s1, 2);
        assert_eq!(g.mul(s1, s1), 0);
        let c = g.resolve_word("s1*s2").unwrap();
        assert_eq!(g.element_order(c), 3);
        assert_eq!(c, 3);
    }

    #[test]
    fn lamplighter_truncation_orders() {
        assert_eq!(Group::lamplighter_truncation(1).unwrap().order(), 2);
        assert_eq!(Group::lamplighter_truncation(2).unwrap().order(), 8);
        assert_eq!(Group::lamplighter_truncation(3).unwrap().order(), 24);
    }

    #[test]
    fn lamplighter_relations() {
        let g = Group::lamplighter_truncation(3).unwrap();
        let a = g.generators()["a"];
        let t = g.generators()["t"];
        assert_eq!(g.mul(a, a), 0);
        assert_eq!(g.element_order(t), 3);
        // lamps at distinct positions commute
        let a1 = g.conjugate(a, g.inv(t));
        assert_eq!(g.mul(a, a1), g.mul(a1, a));
        assert_ne!(a1, a);
    }

    #[test]
    fn quaternion_relations() {
        let g = Group::quaternion8().unwrap();
        let (i, j, k) = (1u32, 2u32, 3u32);
        let m1 = g.mul(i, i);
        assert_eq!(m1, 4); // -1
        assert_eq!(g.mul(j, j), m1);
        assert_eq!(g.mul(k, k), m1);
        assert_eq!(g.mul(i, j), k);
        assert_eq!(g.mul(j, i), g.mul(m1, k));
        assert_eq!(g.element_order(i), 4);
    }

    #[test]
    fn dihedral_relations() {
        let g = Group::dihedral(4).unwrap();
        let r = g.generators()["r"];
        let f = g.generators()["f"];
        assert_eq!(g.order(), 8);
        assert_eq!(g.element_order(r), 4);
        assert_eq!(g.element_order(f), 2);
        // f r f = r^-1
        assert_eq!(g.mul(g.mul(f, r), f), g.inv(r));
    }

    #[test]
    fn closure_examples() {
        let s3 = Group::symmetric(3).unwrap();
        let t12 = s3.resolve_word("s1").unwrap();
        let u = Subgroup::closure(&s3, &[t12]);
        assert_eq!(u.members(), &[0, t12]);

        let c = s3.resolve_word("s1*s2").unwrap();
        let a3 = Subgroup::closure(&s3, &[c]);
        assert_eq!(a3.order(), 3);

        let z4 = Group::cyclic(4).unwrap();
        let sq = z4.mul(1, 1);
        let h = Subgroup::closure(&z4, &[sq]);
        assert_eq!(h.members(), &[0, 2]);
    }

    #[test]
    fn normalizer_checks() {
        let s3 = Group::symmetric(3).unwrap();
        let a3 = Subgroup::closure(&s3, &[s3.resolve_word("s1*s2").unwrap()]);
        let u = Subgroup::closure(&s3, &[s3.resolve_word("s1").unwrap()]);
        assert!(a3.is_normalized_by(&u));
        assert!(a3.is_normal());
        // <(12)> is not normalized by <(123)>
        let v = Subgroup::closure(&s3, &[s3.resolve_word("s1").unwrap()]);
        let w = Subgroup::closure(&s3, &[s3.resolve_word("s1*s2").unwrap()]);
        assert!(!v.is_normalized_by(&w));
        // anything is normalized by the trivial subgroup
        let t = Subgroup::trivial(&s3);
        assert!(v.is_normalized_by(&t));
    }

    #[test]
    fn index_two_subgroups_are_normal() {
        let d4 = Group::dihedral(4).unwrap();
        let r = d4.generators()["r"];
        let f = d4.generators()["f"];
        for gens in [vec![r], vec![d4.mul(r, r), f]] {
            let u = Subgroup::closure(&d4, &gens);
            assert_eq!(d4.order() / u.order(), 2);
            assert!(u.is_normal());
        }
    }

    #[test]
    fn transversal_examples() {
        let s3 = Group::symmetric(3).unwrap();
        let a3 = Subgroup::closure(&s3, &[3]);
        let (idx, t) = a3.index_and_transversal();
        assert_eq!(idx, 2);
        assert_eq!(t.reps()[0], 0);

        let z2 = Group::cyclic(2).unwrap();
        let triv = Subgroup::trivial(&z2);
        let (idx, t) = triv.index_and_transversal();
        assert_eq!(idx, 2);
        assert_eq!(t.reps(), &[0, 1]);

        let u = Subgroup::closure(&s3, &[2]);
        let (idx, _) = u.index_and_transversal();
        assert_eq!(idx, 3);
    }

    #[test]
    fn transversal_is_a_bijection() {
        let s3 = Group::symmetric(3).unwrap();
        for gens in [vec![2u32], vec![3], vec![]] {
            let u = Subgroup::closure(&s3, &gens);
            let (_, t) = u.index_and_transversal();
            let mut hit = [false; 6];
            for &rep in t.reps() {
                for &m in u.members() {
                    hit[s3.mul(m, rep) as usize] = true;
                }
            }
            assert!(hit.iter().all(|&h| h));
        }
    }

    #[test]
    fn lcm_is_group_order() {
        assert_eq!(lcm_finite(&Group::symmetric(3).unwrap()), 6);
        assert_eq!(lcm_finite(&Group::cyclic(4).unwrap()), 4);
        assert_eq!(lcm_finite(&Group::trivial()), 1);
    }

    #[test]
    fn bad_tables_are_rejected() {
        // wrong identity position
        let bad = Group::from_table(vec![vec![1, 0], vec![0, 1]], "bad");
        assert!(matches!(bad, Err(Error::BadTable(_))));
        // not a latin square
        let bad = Group::from_table(vec![vec![0, 1], vec![1, 1]], "bad");
        assert!(matches!(bad, Err(Error::BadTable(_))));
        // trivial table is fine
        assert!(Group::from_table(vec![vec![0]], "triv").is_ok());
    }

    #[test]
    fn size_cap_is_enforced() {
        assert!(matches!(
            Group::lamplighter_truncation(11),
            Err(Error::SizeCapExceeded { .. })
        ));
        assert!(matches!(
            Group::symmetric(8),
            Err(Error::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn semidirect_rejects_non_automorphisms() {
        let z3 = Group::cyclic(3).unwrap();
        let z2 = Group::cyclic(2).unwrap();
        // swap of 1 and 2 is the inversion automorphism; the broken row fixes 1
        let bad = Group::semidirect(&z3, &z2, &[vec![0, 1, 2], vec![0, 1, 0]]);
        assert!(matches!(bad, Err(Error::BadAction(_))));
        let good = Group::semidirect(&z3, &z2, &[vec![0, 1, 2], vec![0, 2, 1]]);
        // Z/3 : Z/2 with inversion is S3
        assert_eq!(good.unwrap().order(), 6);
    }

    #[test]
    fn permutation_closure_matches_symmetric() {
        let s3 = Group::symmetric(3).unwrap();
        let p = Group::from_permutations(3, &[vec![1, 0, 2], vec![0, 2, 1]]).unwrap();
        assert_eq!(p.order(), 6);
        assert_eq!(p.mul_rows(), s3.mul_rows());
    }

    #[test]
    fn word_resolution() {
        let g = Group::lamplighter_truncation(2).unwrap();
        let a = g.generators()["a"];
        let t = g.generators()["t"];
        assert_eq!(g.resolve_word("a*t").unwrap(), g.mul(a, t));
        assert_eq!(g.resolve_word("(a*t)^-1").unwrap(), g.inv(g.mul(a, t)));
        assert_eq!(g.resolve_word("e").unwrap(), 0);
        assert_eq!(g.resolve_word("t^2").unwrap(), g.mul(t, t));
        assert_eq!(g.resolve_word("#3").unwrap(), 3);
        assert!(g.resolve_word("bogus").is_err());
    }

    #[test]
    fn subgroup_as_group_is_consistent() {
        let s3 = Group::symmetric(3).unwrap();
        let a3 = Subgroup::closure(&s3, &[3]);
        let (g, map) = a3.as_group();
        assert_eq!(g.order(), 3);
        for i in 0..3u32 {
            for j in 0..3u32 {
                let parent = s3.mul(map[i as usize], map[j as usize]);
                assert_eq!(map[g.mul(i, j) as usize], parent);
            }
        }
    }

    proptest! {
        #[test]
        fn lagrange_for_generated_subgroups(gens in proptest::collection::vec(0u32..24, 0..3)) {
            let g = Group::symmetric(4).unwrap();
            let u = Subgroup::closure(&g, &gens);
            prop_assert_eq!(g.order() % u.order(), 0);
            let (idx, t) = u.index_and_transversal();
            prop_assert_eq!(idx * u.order(), g.order());
            prop_assert_eq!(t.reps().len(), idx);
        }
    }
}
