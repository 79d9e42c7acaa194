//! Constructive group extensions: general song rings, Tambara-Yamagami /
//! Haagerup-Izumi specializations, small-particle classifiers, and the
//! stabilizer counting identity.

use crate::ring::FusionRing;
use crate::song::group::FiniteGroup;
use crate::{FusionError, Result};

/// Specification of a song extension.
///
/// The added set is realized as the cosets of `subgroup`, acted on by left
/// translation; the automorphism is a permutation of coset indices.
#[derive(Clone, Debug)]
pub struct SongSpec {
    pub group: FiniteGroup,
    pub subgroup: Vec<usize>,
    pub automorphism: Vec<usize>,
    pub g_tilde: usize,
    pub n: u32,
    /// Coset representatives, indexed by coset.
    pub lift: Vec<usize>,
}

impl SongSpec {
    /// Spec with the default lift (smallest element of each coset).
    pub fn new(
        group: FiniteGroup,
        subgroup: Vec<usize>,
        automorphism: Vec<usize>,
        g_tilde: usize,
        n: u32,
    ) -> Result<SongSpec> {
        let (_, proj) = group.quotient(&subgroup).map_err(reject_subgroup)?;
        let classes = proj.iter().max().copied().unwrap_or(0);
        let mut lift = vec![0usize; classes];
        for g in (1..=group.order()).rev() {
            lift[proj[g - 1] - 1] = g;
        }
        Ok(SongSpec { group, subgroup, automorphism, g_tilde, n, lift })
    }
}

fn reject_subgroup(_: FusionError) -> FusionError {
    FusionError::ExtensionSpec("subgroup is not normal".into())
}

/// Validated ingredients shared by the construction steps.
struct Checked<'a> {
    spec: &'a SongSpec,
    quot: FiniteGroup,
    proj: Vec<usize>,
}

fn check(spec: &SongSpec) -> Result<Checked<'_>> {
    let g = &spec.group;
    let (quot, proj) = g.quotient(&spec.subgroup).map_err(reject_subgroup)?;
    let q = quot.order();
    let a = &spec.automorphism;
    if a.len() != q || {
        let mut seen = vec![false; q];
        a.iter().any(|&c| c == 0 || c > q || std::mem::replace(&mut seen[c - 1], true))
    } {
        return Err(FusionError::ExtensionSpec(format!(
            "automorphism must be a permutation of 1..={q}"
        )));
    }
    for x in 1..=q {
        for y in 1..=q {
            if a[quot.mul(x, y) - 1] != quot.mul(a[x - 1], a[y - 1]) {
                return Err(FusionError::ExtensionSpec(format!(
                    "automorphism is not a homomorphism at cosets ({x}, {y})"
                )));
            }
        }
    }
    if spec.g_tilde == 0 || spec.g_tilde > g.order() {
        return Err(FusionError::ExtensionSpec("distinguished element out of range".into()));
    }
    for c in 1..=q {
        let rep = spec.lift.get(c - 1).copied().unwrap_or(0);
        if rep == 0 || rep > g.order() || proj[rep - 1] != c {
            return Err(FusionError::ExtensionSpec(format!(
                "lift does not pick a representative of coset {c}"
            )));
        }
        let conj = proj[g.mul(g.mul(g.inv(spec.g_tilde), rep), spec.g_tilde) - 1];
        if a[a[c - 1] - 1] != conj {
            return Err(FusionError::ExtensionSpec(format!(
                "squared automorphism does not conjugate coset {c}"
            )));
        }
    }
    let gt = proj[spec.g_tilde - 1];
    if a[gt - 1] != gt {
        return Err(FusionError::ExtensionSpec(format!(
            "automorphism moves the distinguished coset {gt}"
        )));
    }
    Ok(Checked { spec, quot, proj })
}

fn build_tensor(ck: &Checked<'_>, lift: &[usize]) -> (Vec<u32>, Vec<usize>) {
    let spec = ck.spec;
    let g = &spec.group;
    let ng = g.order();
    let q = ck.quot.order();
    let r = ng + q;
    let a = |c: usize| spec.automorphism[c - 1];
    let mut flat = vec![0u32; r * r * r];
    let mut put = |x: usize, y: usize, z: usize, v: u32| {
        flat[(x - 1) * r * r + (y - 1) * r + (z - 1)] += v;
    };
    for x in 1..=ng {
        for y in 1..=ng {
            put(x, y, g.mul(x, y), 1);
        }
    }
    for x in 1..=ng {
        for c in 1..=q {
            put(x, ng + c, ng + ck.proj[g.mul(x, lift[c - 1]) - 1], 1);
            put(ng + c, x, ng + ck.quot.mul(c, a(ck.proj[x - 1])), 1);
        }
    }
    for c in 1..=q {
        for d in 1..=q {
            let w = g.mul(lift[ck.quot.mul(c, a(d)) - 1], g.inv(spec.g_tilde));
            for &h in &spec.subgroup {
                put(ng + c, ng + d, g.mul(w, h), 1);
            }
            if spec.n > 0 {
                for e in 1..=q {
                    put(ng + c, ng + d, ng + e, spec.n);
                }
            }
        }
    }
    let mut dual: Vec<usize> = (1..=ng).map(|x| g.inv(x)).collect();
    for c in 1..=q {
        dual.push(ng + ck.quot.mul(ck.proj[spec.g_tilde - 1], ck.quot.inv(a(c))));
    }
    (flat, dual)
}

/// Build the extension ring for a spec. The result has the group as
/// elements `1..=|G|` followed by one element per coset.
pub fn song_extension(spec: &SongSpec) -> Result<FusionRing> {
    let ck = check(spec)?;
    let (flat, dual) = build_tensor(&ck, &spec.lift);
    // The ring must not depend on which representatives were lifted; rebuild
    // with every lift shifted inside its coset and compare.
    if spec.subgroup.len() > 1 {
        let shifted: Vec<usize> = spec
            .lift
            .iter()
            .map(|&rep| {
                let h = spec.subgroup.iter().copied().find(|&h| h != 1).unwrap();
                spec.group.mul(rep, h)
            })
            .collect();
        let (alt, alt_dual) = build_tensor(&ck, &shifted);
        assert_eq!(flat, alt, "tensor depends on the lift");
        assert_eq!(dual, alt_dual, "dual map depends on the lift");
    }
    let rank = spec.group.order() + ck.quot.order();
    let ring = FusionRing::from_flat(rank, flat, dual)?;
    let report = ring.validate();
    if !report.is_valid() {
        return Err(FusionError::ExtensionSpec(format!(
            "constructed ring fails validation: {:?}",
            report.violations
        )));
    }
    Ok(ring)
}

/// The unique extension of `g` by a single element with `t x t` containing
/// `k` copies of `t`. `k = 0` gives the Tambara-Yamagami ring of `g`.
pub fn near_group(g: &FiniteGroup, k: u32) -> FusionRing {
    let all: Vec<usize> = (1..=g.order()).collect();
    let spec = SongSpec::new(g.clone(), all, vec![1], 1, k).expect("whole group is normal");
    song_extension(&spec).expect("near-group spec is always valid")
}

/// Haagerup-Izumi ring of an abelian group at multiplicity `n` (the named
/// ring has `n = 1`).
pub fn haagerup_izumi(g: &FiniteGroup, n: u32) -> Result<FusionRing> {
    if !g.is_abelian() {
        return Err(FusionError::InvalidArgument(
            "Haagerup-Izumi extension requires an abelian group".into(),
        ));
    }
    let inversion: Vec<usize> = (1..=g.order()).map(|x| g.inv(x)).collect();
    let spec = SongSpec::new(g.clone(), vec![1], inversion, 1, n)?;
    song_extension(&spec)
}

/// All 1-particle extensions with `t`-multiplicity up to `k_max`; the family
/// is exhaustive for each multiplicity.
pub fn one_particle_extensions(g: &FiniteGroup, k_max: u32) -> Vec<FusionRing> {
    (0..=k_max).map(|k| near_group(g, k)).collect()
}

/// How an extension's added elements sit under the group action.
#[derive(Clone, Debug)]
pub struct ExtensionReport {
    /// Left stabilizer of each added element, as group elements.
    pub stabilizers: Vec<Vec<usize>>,
    /// Left orbits of the added elements, as ring indices.
    pub orbits: Vec<Vec<usize>>,
    /// Which structural case of the 2-particle classification applies.
    pub case: u8,
}

/// All 2-particle extensions of a non-trivial group with fusion
/// coefficients bounded by `bound`, tagged by structural case.
pub fn two_particle_extensions(
    g: &FiniteGroup,
    bound: u32,
) -> Result<Vec<(FusionRing, ExtensionReport)>> {
    let ng = g.order();
    if ng < 2 {
        return Err(FusionError::InvalidArgument(
            "2-particle extensions need a non-trivial group".into(),
        ));
    }
    let r = ng + 2;
    let t1 = ng + 1;
    let t2 = ng + 2;
    let full: Vec<usize> = (1..=ng).collect();
    let mut out: Vec<(FusionRing, ExtensionReport)> = Vec::new();

    let base = |swap: bool| -> (Vec<u32>, Vec<usize>) {
        let mut flat = vec![0u32; r * r * r];
        for x in 1..=ng {
            for y in 1..=ng {
                flat[(x - 1) * r * r + (y - 1) * r + (g.mul(x, y) - 1)] = 1;
            }
        }
        let mut dual: Vec<usize> = (1..=ng).map(|x| g.inv(x)).collect();
        if swap {
            dual.extend([t2, t1]);
        } else {
            dual.extend([t1, t2]);
        }
        (flat, dual)
    };
    let set = |flat: &mut [u32], x: usize, y: usize, z: usize, v: u32| {
        flat[(x - 1) * r * r + (y - 1) * r + (z - 1)] = v;
    };
    let mut push = |flat: Vec<u32>, dual: Vec<usize>, case: u8, stab: &[usize]| {
        let ring = FusionRing::from_flat(r, flat, dual).expect("shape is fixed");
        if !ring.validate().is_valid() {
            return;
        }
        let orbits = if stab.len() == ng {
            vec![vec![t1], vec![t2]]
        } else {
            vec![vec![t1, t2]]
        };
        let report = ExtensionReport {
            stabilizers: vec![stab.to_vec(), stab.to_vec()],
            orbits,
            case,
        };
        out.push((ring, report));
    };

    // Full stabilizer: the group fixes both added elements.
    let fix_both = |flat: &mut [u32]| {
        for x in 1..=ng {
            for t in [t1, t2] {
                set(flat, x, t, t, 1);
                set(flat, t, x, t, 1);
            }
        }
    };
    for a in 0..=bound {
        for b in 0..=bound {
            for c in 0..=bound {
                for d in 0..=bound {
                    let lhs = i64::from(b) * (i64::from(b) - i64::from(d))
                        + i64::from(c) * (i64::from(c) - i64::from(a));
                    if lhs != ng as i64 {
                        continue;
                    }
                    let (mut flat, dual) = base(false);
                    fix_both(&mut flat);
                    for x in 1..=ng {
                        set(&mut flat, t1, t1, x, 1);
                        set(&mut flat, t2, t2, x, 1);
                    }
                    set(&mut flat, t1, t1, t1, a);
                    set(&mut flat, t1, t1, t2, b);
                    set(&mut flat, t2, t2, t1, c);
                    set(&mut flat, t2, t2, t2, d);
                    for (x, y) in [(t1, t2), (t2, t1)] {
                        set(&mut flat, x, y, t1, b);
                        set(&mut flat, x, y, t2, c);
                    }
                    push(flat, dual, 2, &full);
                }
            }
        }
    }
    for a in 0..=bound {
        for b in 0..=bound {
            if i64::from(b) * i64::from(b) - i64::from(a) * i64::from(a) != ng as i64 {
                continue;
            }
            let (mut flat, dual) = base(true);
            fix_both(&mut flat);
            set(&mut flat, t1, t1, t1, a);
            set(&mut flat, t1, t1, t2, b);
            set(&mut flat, t2, t2, t1, b);
            set(&mut flat, t2, t2, t2, a);
            for (x, y) in [(t1, t2), (t2, t1)] {
                for z in 1..=ng {
                    set(&mut flat, x, y, z, 1);
                }
                set(&mut flat, x, y, t1, a);
                set(&mut flat, x, y, t2, a);
            }
            push(flat, dual, 3, &full);
        }
    }

    // Proper stabilizer: an index-2 subgroup fixes both elements and the
    // other coset swaps them.
    let halves: Vec<Vec<usize>> =
        g.subgroups().into_iter().filter(|s| s.len() * 2 == ng).collect();
    for h in &halves {
        let in_h = |x: usize| h.contains(&x);
        let act = |flat: &mut [u32]| {
            for x in 1..=ng {
                let (lt1, lt2) = if in_h(x) { (t1, t2) } else { (t2, t1) };
                set(flat, x, t1, lt1, 1);
                set(flat, x, t2, lt2, 1);
                set(flat, t1, x, lt1, 1);
                set(flat, t2, x, lt2, 1);
            }
        };
        for a in 0..=bound {
            for b in 0..=bound {
                let (mut flat, dual) = base(false);
                act(&mut flat);
                for (x, y) in [(t1, t1), (t2, t2)] {
                    for z in 1..=ng {
                        set(&mut flat, x, y, z, u32::from(in_h(z)));
                    }
                    set(&mut flat, x, y, t1, a);
                    set(&mut flat, x, y, t2, b);
                }
                for (x, y) in [(t1, t2), (t2, t1)] {
                    for z in 1..=ng {
                        set(&mut flat, x, y, z, u32::from(!in_h(z)));
                    }
                    set(&mut flat, x, y, t1, b);
                    set(&mut flat, x, y, t2, a);
                }
                push(flat, dual, 4, h);
            }
        }
        for a in 0..=bound {
            let (mut flat, dual) = base(true);
            act(&mut flat);
            for (x, y) in [(t1, t1), (t2, t2)] {
                for z in 1..=ng {
                    set(&mut flat, x, y, z, u32::from(!in_h(z)));
                }
                set(&mut flat, x, y, t1, a);
                set(&mut flat, x, y, t2, a);
            }
            for (x, y) in [(t1, t2), (t2, t1)] {
                for z in 1..=ng {
                    set(&mut flat, x, y, z, u32::from(in_h(z)));
                }
                set(&mut flat, x, y, t1, a);
                set(&mut flat, x, y, t2, a);
            }
            push(flat, dual, 5, h);
        }
    }

    for (ring, report) in &out {
        if ring.multiplicity() <= 1 {
            assert!(ng % 2 == 0, "multiplicity-free extension of an odd-order group");
            if report.case <= 3 {
                assert!(ng <= 2, "multiplicity-free full-stabilizer extension of |G| > 2");
            }
        }
    }
    Ok(out)
}

/// Verify the stabilizer counting identity (and, where it applies, the
/// stabilizer size bound) on a ring whose invertible part is `group_part`.
pub fn stabilizer_identity_check(ring: &FusionRing, group_part: &[usize]) -> Result<bool> {
    let r = ring.rank();
    let mut part: Vec<usize> = group_part.to_vec();
    part.sort_unstable();
    part.dedup();
    if part.is_empty()
        || !part.contains(&1)
        || part.iter().any(|&x| x == 0 || x > r)
        || part != ring.invertible_subgroup()
    {
        return Err(FusionError::Group(
            "group part must be the ring's invertible subgroup".into(),
        ));
    }
    let added: Vec<usize> = (1..=r).filter(|x| !part.contains(x)).collect();
    let stab = |x: usize| -> Vec<usize> {
        part.iter().copied().filter(|&g| ring.n(g, x, x) == 1).collect()
    };
    for &tau in &added {
        let s_tau = stab(tau);
        for a in 1..=r {
            let s_a = stab(a);
            let lhs = s_tau.iter().filter(|g| s_a.contains(g)).count() as i64;
            let squares: i64 = part
                .iter()
                .map(|&g| {
                    let v = ring.n(tau, a, g) as i64;
                    v * v
                })
                .sum();
            let t_squares: i64 = added
                .iter()
                .map(|&t| {
                    let v = ring.n(tau, a, t) as i64;
                    v * v
                })
                .sum();
            let cross: i64 = added
                .iter()
                .map(|&t| ring.n(tau, t, tau) as i64 * ring.n(t, a, a) as i64)
                .sum();
            if lhs != squares + t_squares - cross {
                return Ok(false);
            }
        }
    }
    // Size bound: a fully stabilized added element caps every other added
    // element's stabilizer at |T| m^2.
    if added.len() >= 2 {
        let m = i64::from(ring.multiplicity().max(1));
        let cap = added.len() as i64 * m * m;
        for &tau in &added {
            if stab(tau).len() != part.len() {
                continue;
            }
            for &a in &added {
                if a != ring.dual(tau) && (stab(a).len() as i64) > cap {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
