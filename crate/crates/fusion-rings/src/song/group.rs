//! Finite groups as explicit multiplication tables, with the constructions
//! and subgroup machinery the extension builders need.

use crate::ring::FusionRing;
use crate::{FusionError, Result};

/// A finite group on 1-based indices with identity 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    /// `table[a-1][b-1]` is the product `ab`.
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a - 1][b - 1]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a - 1]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order;
        (1..=n).all(|a| (a..=n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// All subgroups, each a sorted element list starting with 1.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.order;
        let mut out = Vec::new();
        // Closure of every subset seed is wasteful; orders here are small,
        // so test every subset containing the identity directly.
        for mask in 0..(1u32 << (n - 1)) {
            let set: Vec<usize> =
                std::iter::once(1).chain((2..=n).filter(|a| mask >> (a - 2) & 1 == 1)).collect();
            let closed = set
                .iter()
                .all(|&a| set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b))));
            if closed {
                out.push(set);
            }
        }
        out.sort_by_key(|s| (s.len(), s.clone()));
        out
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        !set.is_empty()
            && set.contains(&1)
            && set.iter().all(|&a| {
                a >= 1
                    && a <= self.order
                    && set.contains(&self.inv(a))
                    && set.iter().all(|&b| set.contains(&self.mul(a, b)))
            })
    }

    pub fn is_normal(&self, set: &[usize]) -> bool {
        self.is_subgroup(set)
            && (1..=self.order)
                .all(|g| set.iter().all(|&h| set.contains(&self.mul(self.mul(g, h), self.inv(g)))))
    }

    pub fn normal_subgroups(&self) -> Vec<Vec<usize>> {
        self.subgroups().into_iter().filter(|s| self.is_normal(s)).collect()
    }

    /// Quotient by a normal subgroup. Returns the quotient group and the
    /// projection sending each element to its coset index; the coset of the
    /// identity is index 1.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_normal(normal) {
            return Err(FusionError::Group("quotient requires a normal subgroup".into()));
        }
        let n = self.order;
        let mut proj = vec![0usize; n];
        let mut reps = Vec::new();
        for g in 1..=n {
            if proj[g - 1] != 0 {
                continue;
            }
            reps.push(g);
            let idx = reps.len();
            for &h in normal {
                proj[self.mul(g, h) - 1] = idx;
            }
        }
        let q = reps.len();
        let mut table = vec![vec![0usize; q]; q];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i][j] = proj[self.mul(a, b) - 1];
            }
        }
        Ok((make_group(&table)?, proj))
    }

    /// All automorphisms as 1-based permutations.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let n = self.order;
        let mut out = Vec::new();
        let mut phi = vec![0usize; n + 1];
        phi[1] = 1;
        let mut used = vec![false; n + 1];
        used[1] = true;
        self.extend_automorphism(2, &mut phi, &mut used, &mut out);
        out
    }

    fn extend_automorphism(
        &self,
        next: usize,
        phi: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = self.order;
        if next > n {
            let hom = (1..=n)
                .all(|a| (1..=n).all(|b| self.mul(phi[a], phi[b]) == phi[self.mul(a, b)]));
            if hom {
                out.push(phi[1..].to_vec());
            }
            return;
        }
        'cand: for img in 2..=n {
            if used[img] {
                continue;
            }
            phi[next] = img;
            for a in 1..next {
                let ab = self.mul(a, next);
                let ba = self.mul(next, a);
                if ab < next && self.mul(phi[a], img) != phi[ab] {
                    continue 'cand;
                }
                if ba < next && self.mul(img, phi[a]) != phi[ba] {
                    continue 'cand;
                }
            }
            used[img] = true;
            self.extend_automorphism(next + 1, phi, used, out);
            used[img] = false;
        }
        phi[next] = 0;
    }
}

/// Validate a multiplication table as a group with identity at index 1.
pub fn make_group(table: &[Vec<usize>]) -> Result<FiniteGroup> {
    let n = table.len();
    if n == 0 {
        return Err(FusionError::Group("empty table".into()));
    }
    for row in table {
        if row.len() != n {
            return Err(FusionError::Group("table is not square".into()));
        }
        for &v in row {
            if v == 0 || v > n {
                return Err(FusionError::Group(format!("entry {v} out of range 1..={n}")));
            }
        }
    }
    for g in 1..=n {
        if table[0][g - 1] != g || table[g - 1][0] != g {
            return Err(FusionError::Group("index 1 is not an identity".into()));
        }
    }
    let mut inverse = vec![0usize; n];
    for a in 1..=n {
        let mut found = 0;
        for b in 1..=n {
            if table[a - 1][b - 1] == 1 && table[b - 1][a - 1] == 1 {
                found = b;
            }
        }
        if found == 0 {
            return Err(FusionError::Group(format!("element {a} has no two-sided inverse")));
        }
        inverse[a - 1] = found;
    }
    for a in 1..=n {
        for b in 1..=n {
            for c in 1..=n {
                if table[table[a - 1][b - 1] - 1][c - 1] != table[a - 1][table[b - 1][c - 1] - 1] {
                    return Err(FusionError::Group(format!(
                        "associativity fails at ({a}, {b}, {c})"
                    )));
                }
            }
        }
    }
    Ok(FiniteGroup { order: n, table: table.to_vec(), inverse })
}

/// Cyclic group of order `n`.
pub fn cyclic(n: usize) -> FiniteGroup {
    let table: Vec<Vec<usize>> =
        (0..n).map(|a| (0..n).map(|b| (a + b) % n + 1).collect()).collect();
    make_group(&table).expect("cyclic table is a group")
}

/// Dihedral group of order `2n`: indices `1..=n` are rotations, the rest
/// reflections.
pub fn dihedral(n: usize) -> FiniteGroup {
    let size = 2 * n;
    let rot = |a: usize| a % n + 1;
    let refl = |a: usize| n + a % n + 1;
    let mut table = vec![vec![0usize; size]; size];
    for a in 0..n {
        for b in 0..n {
            table[a][b] = rot(a + b);
            table[a][n + b] = refl(n + b - a);
            table[n + a][b] = refl(a + b);
            table[n + a][n + b] = rot(n + b - a);
        }
    }
    make_group(&table).expect("dihedral table is a group")
}

/// The quaternion group: 1, -1, i, -i, j, -j, k, -k.
pub fn quaternion() -> FiniteGroup {
    // Signed unit products: axes 0=1, 1=i, 2=j, 3=k.
    let unit_mul = |a: usize, b: usize| -> (i32, usize) {
        match (a, b) {
            (0, x) => (1, x),
            (x, 0) => (1, x),
            (x, y) if x == y => (-1, 0),
            (1, 2) => (1, 3),
            (2, 3) => (1, 1),
            (3, 1) => (1, 2),
            (2, 1) => (-1, 3),
            (3, 2) => (-1, 1),
            (1, 3) => (-1, 2),
            _ => unreachable!(),
        }
    };
    let decode = |x: usize| -> (i32, usize) { (if x % 2 == 0 { 1 } else { -1 }, x / 2) };
    let encode = |s: i32, axis: usize| -> usize { 2 * axis + usize::from(s < 0) + 1 };
    let mut table = vec![vec![0usize; 8]; 8];
    for a in 0..8 {
        for b in 0..8 {
            let (sa, xa) = decode(a);
            let (sb, xb) = decode(b);
            let (s, x) = unit_mul(xa, xb);
            table[a][b] = encode(sa * sb * s, x);
        }
    }
    make_group(&table).expect("quaternion table is a group")
}

/// Direct product with lexicographic index `(a, b) -> (a-1)|H| + b`.
pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let (n, m) = (g.order(), h.order());
    let idx = |a: usize, b: usize| (a - 1) * m + b;
    let mut table = vec![vec![0usize; n * m]; n * m];
    for a1 in 1..=n {
        for b1 in 1..=m {
            for a2 in 1..=n {
                for b2 in 1..=m {
                    table[idx(a1, b1) - 1][idx(a2, b2) - 1] = idx(g.mul(a1, a2), h.mul(b1, b2));
                }
            }
        }
    }
    make_group(&table).expect("product table is a group")
}

/// All groups of order at most 8 up to isomorphism, with display names.
pub fn small_groups() -> Vec<(String, FiniteGroup)> {
    let mut out: Vec<(String, FiniteGroup)> =
        (1..=8).map(|n| (format!("Z{n}"), cyclic(n))).collect();
    out.push(("Z2xZ2".into(), product(&cyclic(2), &cyclic(2))));
    out.push(("Z2xZ4".into(), product(&cyclic(2), &cyclic(4))));
    out.push(("Z2xZ2xZ2".into(), product(&cyclic(2), &product(&cyclic(2), &cyclic(2)))));
    out.push(("D3".into(), dihedral(3)));
    out.push(("D4".into(), dihedral(4)));
    out.push(("Q8".into(), quaternion()));
    out
}

/// The group ring: `N_{ab}^c = [ab = c]`, duals are inverses.
pub fn group_ring(g: &FiniteGroup) -> FusionRing {
    let n = g.order();
    let mut flat = vec![0u32; n * n * n];
    for a in 1..=n {
        for b in 1..=n {
            flat[(a - 1) * n * n + (b - 1) * n + (g.mul(a, b) - 1)] = 1;
        }
    }
    let dual: Vec<usize> = (1..=n).map(|a| g.inv(a)).collect();
    FusionRing::from_flat(n, flat, dual).expect("group ring shape is fixed")
}
