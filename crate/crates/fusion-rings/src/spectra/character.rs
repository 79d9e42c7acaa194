//! Character tables of commutative fusion rings via randomized
//! simultaneous diagonalization.

use std::cmp::Ordering;

use astro_float::BigFloat;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::dims::fp_dimensions;
use crate::precision::{self, cdot, vnorm, CMat, Cpx, Ctx};
use crate::ring::FusionRing;
use crate::{FusionError, Result};

/// Decimal precision used when none is configured.
pub const DEFAULT_PRECISION: usize = 99;

/// Random draws of the combination coefficients before giving up.
pub const RETRY_BUDGET: u32 = 32;

/// Decimal scale of the grid used for deterministic row ordering.
const ORDER_SCALE: i64 = 40;

/// Character table of a commutative fusion ring.
///
/// `chars[j][a-1]` is the value of character `j` at basis element `a`,
/// normalized so every character maps the unit to 1. Row 0 is the
/// Frobenius-Perron character, whose values are the FP dimensions; the
/// remaining rows are ordered by a fixed grid rounding of their entries so
/// the table does not depend on the random seed.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub rank: usize,
    pub precision: usize,
    pub chars: Vec<Vec<Cpx>>,
    /// Largest off-diagonal magnitude of `V [N_k] V^-1` over all `k`.
    pub residual: BigFloat,
    /// Number of random draws consumed (1 = first draw succeeded).
    pub draws: u32,
}

impl CharacterTable {
    /// Frobenius-Perron character values `d_1..d_r`.
    pub fn fp_row(&self) -> &[Cpx] {
        &self.chars[0]
    }

    /// The table as a matrix with `V[j][a-1] = chars[j][a-1]`.
    pub fn matrix(&self) -> CMat {
        CMat::from_rows(self.chars.clone())
    }
}

/// Computes the character table of `ring` at `precision` significant decimal
/// digits.
///
/// Draws random coefficients `c_k` in `[1,2]`, diagonalizes
/// `M = sum_k c_k [N_k]` by refining double-precision eigenvalue estimates
/// with Rayleigh-quotient iteration, and accepts the draw only if the
/// resulting eigenvector matrix simultaneously diagonalizes every fusion
/// matrix with off-diagonal residual below `10^(2-precision)`. Bad draws
/// (degenerate spectrum) are redrawn up to [`RETRY_BUDGET`] times.
pub fn character_table(ring: &FusionRing, precision: usize, seed: u64) -> Result<CharacterTable> {
    if !ring.is_commutative() {
        return Err(FusionError::NonCommutative);
    }
    let ctx = Ctx::from_digits(precision);
    let tol = ctx.ten_pow(2 - precision as i64);
    let mats = ring.fusion_matrices();
    let fp = fp_dimensions(ring, ctx, &tol)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for draw in 1..=RETRY_BUDGET {
        let coeffs: Vec<f64> = (0..ring.rank()).map(|_| rng.gen_range(1.0..=2.0)).collect();
        if let Some((chars, residual)) = attempt(ring, &mats, &fp.dims, &coeffs, ctx, &tol, &mut rng)
        {
            return Ok(CharacterTable { rank: ring.rank(), precision, chars, residual, draws: draw });
        }
    }
    Err(FusionError::RetryExhausted(format!(
        "no simultaneous diagonalization within tolerance after {RETRY_BUDGET} draws"
    )))
}

/// One draw: seed eigenvalues in f64, refine, normalize, order, verify.
fn attempt(
    ring: &FusionRing,
    mats: &[Vec<Vec<u32>>],
    dims: &[BigFloat],
    coeffs: &[f64],
    ctx: Ctx,
    tol: &BigFloat,
    rng: &mut ChaCha12Rng,
) -> Option<(Vec<Vec<Cpx>>, BigFloat)> {
    let r = ring.rank();
    // Characters are the left eigen-rows of every [N_k]; refine right
    // eigenvectors of A = M^T instead, so v[a-1] = chi(a) up to scale.
    let mut a = CMat::zeros(r, ctx);
    for i in 0..r {
        for j in 0..r {
            let mut acc = ctx.zero();
            for (k, m) in mats.iter().enumerate() {
                if m[j][i] != 0 {
                    acc = ctx.add(&acc, &ctx.mul(&ctx.f64(coeffs[k]), &ctx.int(m[j][i] as i64)));
                }
            }
            *a.at_mut(i, j) = Cpx::real(acc, ctx);
        }
    }
    let af = DMatrix::<f64>::from_fn(r, r, |i, j| {
        (0..r).map(|k| coeffs[k] * mats[k][j][i] as f64).sum()
    });

    let mut rows: Vec<Vec<Cpx>> = Vec::with_capacity(r);
    let unit_floor = ctx.ten_pow(-20);
    for e in af.complex_eigenvalues().iter() {
        let v = refine(&a, Cpx::from_f64s(e.re, e.im, ctx), ctx, rng)?;
        let unit = v[0].clone();
        if precision::cmp(&unit.abs(ctx), &unit_floor) == Ordering::Less {
            return None;
        }
        rows.push(v.iter().map(|x| x.div(&unit, ctx)).collect());
    }

    // Distinct eigenvalue functionals, or the draw was degenerate.
    let sep = ctx.ten_pow(-12);
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let mut diff = ctx.zero();
            for k in 0..r {
                diff = precision::max(diff, rows[i][k].sub(&rows[j][k], ctx).abs(ctx));
            }
            if precision::cmp(&diff, &sep) == Ordering::Less {
                return None;
            }
        }
    }

    let fp_tol = ctx.ten_pow(-(ctx.digits as i64 / 2));
    let fp_idx = rows.iter().position(|row| {
        let mut diff = ctx.zero();
        for k in 0..r {
            diff = precision::max(diff, row[k].sub(&Cpx::real(dims[k].clone(), ctx), ctx).abs(ctx));
        }
        precision::cmp(&diff, &fp_tol) == Ordering::Less
    })?;

    let mut rest: Vec<usize> = (0..rows.len()).filter(|&i| i != fp_idx).collect();
    rest.sort_by_cached_key(|&i| order_key(&rows[i]));
    let mut ordered = vec![rows[fp_idx].clone()];
    ordered.extend(rest.into_iter().map(|i| rows[i].clone()));

    let v = CMat::from_rows(ordered.clone());
    match verify_diagonalization(ring, &v, ctx, tol) {
        Ok((true, residual)) => Some((ordered, residual)),
        _ => None,
    }
}

/// Rayleigh-quotient iteration from an f64 eigenvalue estimate.
fn refine(a: &CMat, seed: Cpx, ctx: Ctx, rng: &mut ChaCha12Rng) -> Option<Vec<Cpx>> {
    let floor = ctx.ten_pow(-(ctx.digits as i64 + 5));
    let mut lambda = seed;
    let mut v: Vec<Cpx> =
        (0..a.n).map(|_| Cpx::from_f64s(rng.gen_range(1.0..=2.0), 0.0, ctx)).collect();
    let mut best: Option<(BigFloat, Vec<Cpx>)> = None;
    for _ in 0..60 {
        let mut shifted = a.clone();
        for i in 0..a.n {
            let d = shifted.at(i, i).sub(&lambda, ctx);
            *shifted.at_mut(i, i) = d;
        }
        let w = match shifted.solve(&v, ctx) {
            Ok(w) => w,
            Err(_) => {
                // The shift hit an eigenvalue exactly; nudge off the
                // singularity and keep iterating.
                lambda = Cpx::new(ctx.add(&lambda.re, &floor), lambda.im.clone());
                continue;
            }
        };
        let nrm = vnorm(&w, ctx);
        if precision::is_zero(&nrm) {
            return None;
        }
        let inv = ctx.div(&ctx.one(), &nrm);
        v = w.iter().map(|x| x.scale(&inv, ctx)).collect();
        let av = a.matvec(&v, ctx);
        lambda = cdot(&v, &av, ctx);
        let mut res = ctx.zero();
        for i in 0..a.n {
            res = precision::max(res, av[i].sub(&v[i].mul(&lambda, ctx), ctx).abs(ctx));
        }
        let improved = best.as_ref().map_or(true, |(b, _)| precision::cmp(&res, b) == Ordering::Less);
        if improved {
            best = Some((res.clone(), v.clone()));
        }
        if precision::cmp(&res, &floor) != Ordering::Greater {
            break;
        }
    }
    best.map(|(_, v)| v)
}

fn order_key(row: &[Cpx]) -> Vec<(BigInt, BigInt)> {
    row.iter()
        .map(|x| (precision::snap_to_grid(&x.re, ORDER_SCALE), precision::snap_to_grid(&x.im, ORDER_SCALE)))
        .collect()
}

/// Checks that the rows of `v` simultaneously diagonalize every fusion
/// matrix of `ring`: returns whether all off-diagonal magnitudes of
/// `v [N_k] v^-1` stay below `tol`, together with the largest one seen.
///
/// Errors if `v` has the wrong size or is singular at working precision.
pub fn verify_diagonalization(
    ring: &FusionRing,
    v: &CMat,
    ctx: Ctx,
    tol: &BigFloat,
) -> Result<(bool, BigFloat)> {
    let r = ring.rank();
    if v.n != r {
        return Err(FusionError::Shape(format!("expected a {r}x{r} matrix, got {}x{}", v.n, v.n)));
    }
    let vinv = v
        .inverse(ctx)
        .map_err(|_| FusionError::Singular("matrix is singular at working precision".into()))?;
    // A wildly inaccurate inverse means the matrix is numerically singular
    // even though elimination never met an exact zero pivot.
    let mut id_res = ctx.zero();
    let prod = v.matmul(&vinv, ctx);
    for i in 0..r {
        for j in 0..r {
            let expect = if i == j { Cpx::one(ctx) } else { Cpx::zero(ctx) };
            id_res = precision::max(id_res, prod.at(i, j).sub(&expect, ctx).abs(ctx));
        }
    }
    if precision::cmp(&id_res, &ctx.ten_pow(-3)) == Ordering::Greater {
        return Err(FusionError::Singular("matrix is singular at working precision".into()));
    }
    let mut worst = ctx.zero();
    for m in ring.fusion_matrices() {
        let p = v.matmul(&CMat::from_u32(&m, ctx), ctx).matmul(&vinv, ctx);
        for i in 0..r {
            for j in 0..r {
                if i != j {
                    worst = precision::max(worst, p.at(i, j).abs(ctx));
                }
            }
        }
    }
    let ok = precision::cmp(&worst, tol) != Ordering::Greater;
    Ok((ok, worst))
}
