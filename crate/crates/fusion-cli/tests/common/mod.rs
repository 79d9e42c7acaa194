//! Brute-force reference enumeration, independent of the search engine.
//!
//! For every dual involution fixing the unit, the free structure constants
//! (triples not touching the unit) are grouped into orbits of the pivotal
//! symmetry and scanned with a plain odometer up to the multiplicity bound.
//! Full tensors are kept when `validate` passes and deduplicated by
//! canonical code. No propagation, no symmetry breaking, no sharing with
//! the engine beyond the canonical-code comparison point — exponential, but
//! fine through rank 4 (and rank 5 at multiplicity 1).

use std::collections::BTreeSet;

use fusion_rings::{canonical_code, CanonicalCode, FusionRing};

/// Canonical codes of every fusion ring with the given rank and
/// multiplicity bound.
pub fn oracle_codes(rank: usize, mult: u32) -> BTreeSet<CanonicalCode> {
    let mut out = BTreeSet::new();
    for dual in involutions(rank) {
        scan_dual(rank, mult, &dual, &mut out);
    }
    out
}

/// All involutions of `{1..r}` with `dual[0] == 1`, as 1-based maps.
fn involutions(rank: usize) -> Vec<Vec<usize>> {
    let mut maps = Vec::new();
    let mut dual: Vec<usize> = vec![0; rank + 1];
    dual[1] = 1;
    fill_involution(2, rank, &mut dual, &mut maps);
    maps
}

fn fill_involution(a: usize, rank: usize, dual: &mut Vec<usize>, maps: &mut Vec<Vec<usize>>) {
    if a > rank {
        maps.push(dual[1..].to_vec());
        return;
    }
    if dual[a] != 0 {
        fill_involution(a + 1, rank, dual, maps);
        return;
    }
    for b in a..=rank {
        if b == a || dual[b] == 0 {
            dual[a] = b;
            dual[b] = a;
            fill_involution(a + 1, rank, dual, maps);
            dual[a] = 0;
            if b != a {
                dual[b] = 0;
            }
        }
    }
}

fn scan_dual(rank: usize, mult: u32, dual: &[usize], out: &mut BTreeSet<CanonicalCode>) {
    let r = rank;
    let d = |a: usize| dual[a - 1];
    // Pivotal orbit of a free triple: closure under
    // (a,b,c) -> (b, dual c, dual a) and (a,b,c) -> (dual b, dual a, dual c).
    let mut orbit_of = vec![usize::MAX; r * r * r];
    let mut orbits: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    for a in 2..=r {
        for b in 2..=r {
            for c in 2..=r {
                let idx = |(x, y, z): (usize, usize, usize)| ((x - 1) * r + (y - 1)) * r + (z - 1);
                if orbit_of[idx((a, b, c))] != usize::MAX {
                    continue;
                }
                let id = orbits.len();
                let mut members = vec![(a, b, c)];
                orbit_of[idx((a, b, c))] = id;
                let mut i = 0;
                while i < members.len() {
                    let (x, y, z) = members[i];
                    i += 1;
                    for next in [(y, d(z), d(x)), (d(y), d(x), d(z))] {
                        if orbit_of[idx(next)] == usize::MAX {
                            orbit_of[idx(next)] = id;
                            members.push(next);
                        }
                    }
                }
                orbits.push(members);
            }
        }
    }

    // Odometer over one value per orbit.
    let mut values = vec![0u32; orbits.len()];
    loop {
        emit(r, dual, &orbits, &values, out);
        let mut i = 0;
        loop {
            if i == values.len() {
                return;
            }
            if values[i] < mult {
                values[i] += 1;
                break;
            }
            values[i] = 0;
            i += 1;
        }
    }
}

fn emit(
    r: usize,
    dual: &[usize],
    orbits: &[Vec<(usize, usize, usize)>],
    values: &[u32],
    out: &mut BTreeSet<CanonicalCode>,
) {
    let mut flat = vec![0u32; r * r * r];
    let f = |a: usize, b: usize, c: usize| ((a - 1) * r + (b - 1)) * r + (c - 1);
    for a in 1..=r {
        flat[f(1, a, a)] = 1;
        flat[f(a, 1, a)] = 1;
        flat[f(a, dual[a - 1], 1)] = 1;
    }
    for (orbit, &v) in orbits.iter().zip(values) {
        for &(a, b, c) in orbit {
            flat[f(a, b, c)] = v;
        }
    }
    let Ok(ring) = FusionRing::from_flat(r, flat, dual.to_vec()) else { return };
    if ring.validate().is_valid() {
        out.insert(canonical_code(&ring).expect("canonical code of a valid ring"));
    }
}
