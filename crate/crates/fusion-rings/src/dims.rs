//! Frobenius-Perron dimensions.
//!
//! The FP dimension vector is the common Perron row-eigenvector of all fusion
//! matrices, normalised so the unit has dimension 1. It is computed from
//! `P = (sum_a [N_a])^T` by repeated squaring with renormalisation, which
//! converges doubly-exponentially for the primitive matrices arising from
//! valid fusion rings.

use astro_float::BigFloat;

use crate::error::{FusionError, Result};
use crate::precision::{self, Ctx};
use crate::ring::FusionRing;

#[derive(Clone, Debug)]
pub struct FpDims {
    /// `dims[a-1]` is the FP dimension of basis element `a`; `dims[0] = 1`.
    pub dims: Vec<BigFloat>,
    /// Global dimension `D^2 = sum_a d_a^2`.
    pub global: BigFloat,
    /// Largest `|sum_c N_{ab}^c d_c - d_a d_b|` over all `a, b`.
    pub max_residual: BigFloat,
}

/// Compute FP dimensions at the precision of `ctx`, verifying the defining
/// relations to `tol`. Requires a valid fusion ring; on invalid input the
/// iteration may fail to converge, which is reported as an error.
pub fn fp_dimensions(ring: &FusionRing, ctx: Ctx, tol: &BigFloat) -> Result<FpDims> {
    let r = ring.rank();
    // P[b][c] = sum_a N_{ab}^c, transposed so the Perron direction of the
    // column space is the dimension vector.
    let mut p = vec![ctx.zero(); r * r];
    for b in 1..=r {
        for c in 1..=r {
            let mut acc: i64 = 0;
            for a in 1..=r {
                acc += ring.n(a, b, c) as i64;
            }
            p[(b - 1) * r + (c - 1)] = ctx.int(acc);
        }
    }

    // Square until the residual reaches the precision floor (or a hard cap),
    // then verify the caller's tolerance. Stalls are detected by comparing
    // successive residuals once past the doubling phase.
    let mut m = normalize(p, ctx);
    let mut dims = extract(&m, r, ctx);
    let mut residual = check(ring, &dims, ctx);
    let floor = ctx.ten_pow(-((ctx.digits + 5) as i64));
    let mut squarings = 0;
    while precision::cmp(&residual, &floor) == std::cmp::Ordering::Greater && squarings < 64 {
        m = normalize(square(&m, r, ctx), ctx);
        dims = extract(&m, r, ctx);
        let next = check(ring, &dims, ctx);
        squarings += 1;
        let stalled = precision::cmp(&next, &residual) != std::cmp::Ordering::Less;
        residual = next;
        if stalled && squarings >= 16 {
            break;
        }
    }
    if precision::cmp(&residual, tol) == std::cmp::Ordering::Greater {
        return Err(FusionError::RetryExhausted(
            "Perron iteration did not converge; is the ring valid?".into(),
        ));
    }

    let mut global = ctx.zero();
    for d in &dims {
        global = ctx.add(&global, &ctx.mul(d, d));
    }
    Ok(FpDims { dims, global, max_residual: residual })
}

fn square(m: &[BigFloat], r: usize, ctx: Ctx) -> Vec<BigFloat> {
    let mut out = vec![ctx.zero(); r * r];
    for i in 0..r {
        for k in 0..r {
            let a = &m[i * r + k];
            if a.is_zero() {
                continue;
            }
            for j in 0..r {
                out[i * r + j] = ctx.add(&out[i * r + j], &ctx.mul(a, &m[k * r + j]));
            }
        }
    }
    out
}

fn normalize(mut m: Vec<BigFloat>, ctx: Ctx) -> Vec<BigFloat> {
    let mut top = ctx.zero();
    for e in &m {
        top = precision::max(top, e.abs());
    }
    if top.is_zero() {
        return m;
    }
    for e in &mut m {
        *e = ctx.div(e, &top);
    }
    m
}

/// Row sums give a positive combination of columns, all of which point along
/// the Perron direction after enough squarings; normalise by the first entry.
fn extract(m: &[BigFloat], r: usize, ctx: Ctx) -> Vec<BigFloat> {
    let mut v = vec![ctx.zero(); r];
    for (i, vi) in v.iter_mut().enumerate() {
        for j in 0..r {
            *vi = ctx.add(vi, &m[i * r + j]);
        }
    }
    let d1 = v[0].clone();
    if d1.is_zero() {
        return v;
    }
    v.iter_mut().for_each(|x| *x = ctx.div(x, &d1));
    v
}

fn check(ring: &FusionRing, dims: &[BigFloat], ctx: Ctx) -> BigFloat {
    let r = ring.rank();
    let mut worst = ctx.zero();
    for a in 1..=r {
        for b in 1..=r {
            let mut acc = ctx.zero();
            for c in 1..=r {
                let n = ring.n(a, b, c);
                if n != 0 {
                    acc = ctx.add(&acc, &ctx.mul(&ctx.int(n as i64), &dims[c - 1]));
                }
            }
            let diff = ctx.sub(&acc, &ctx.mul(&dims[a - 1], &dims[b - 1]));
            worst = precision::max(worst, diff.abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FusionRing;

    fn fib() -> FusionRing {
        FusionRing::new(
            2,
            &[
                vec![vec![1, 0], vec![0, 1]],
                vec![vec![0, 1], vec![1, 1]],
            ],
            &[1, 2],
        )
        .unwrap()
    }

    #[test]
    fn fibonacci_golden_ratio() {
        let ctx = Ctx::from_digits(99);
        let tol = ctx.ten_pow(-30);
        let fp = fp_dimensions(&fib(), ctx, &tol).unwrap();
        let five = ctx.int(5);
        let phi = ctx.div(&ctx.add(&ctx.one(), &ctx.sqrt(&five)), &ctx.int(2));
        let err = ctx.sub(&fp.dims[1], &phi);
        assert!(precision::within(&err, &ctx.ten_pow(-90)));
        assert!(precision::within(&fp.max_residual, &ctx.ten_pow(-32)));
    }

    #[test]
    fn z2_dimensions_are_one() {
        let ctx = Ctx::from_digits(60);
        let tol = ctx.ten_pow(-30);
        let z2 = FusionRing::new(
            2,
            &[
                vec![vec![1, 0], vec![0, 1]],
                vec![vec![0, 1], vec![1, 0]],
            ],
            &[1, 2],
        )
        .unwrap();
        let fp = fp_dimensions(&z2, ctx, &tol).unwrap();
        assert!(precision::within(&ctx.sub(&fp.dims[1], &ctx.one()), &ctx.ten_pow(-55)));
        assert!(precision::within(&ctx.sub(&fp.global, &ctx.int(2)), &ctx.ten_pow(-55)));
    }

    #[test]
    fn ising_sqrt_two() {
        let ctx = Ctx::from_digits(99);
        let tol = ctx.ten_pow(-30);
        // Tambara-Yamagami over Z2: 1, g, t with g*g=1, g*t=t, t*t=1+g.
        let ty = FusionRing::new(
            3,
            &[
                vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
                vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]],
                vec![vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 0]],
            ],
            &[1, 2, 3],
        )
        .unwrap();
        assert!(ty.validate().is_valid());
        let fp = fp_dimensions(&ty, ctx, &tol).unwrap();
        let root2 = ctx.sqrt(&ctx.int(2));
        assert!(precision::within(&ctx.sub(&fp.dims[2], &root2), &ctx.ten_pow(-90)));
    }
}
