//! Modular data: (S, T) pairs satisfying the modular relation.

use std::cmp::Ordering;

use astro_float::BigFloat;
use num_rational::BigRational;
use num_traits::Zero;

use crate::precision::{self, CMat, Cpx, Ctx};
use crate::ring::FusionRing;
use crate::spectra::character::character_table;
use crate::spectra::smatrix::s_matrices;
use crate::spectra::vafa::vafa_candidates;
use crate::{FusionError, Result};

/// A modular pair: S symmetric unitary with `S^2 = C`, T diagonal with
/// phases `theta_i = exp(2 pi i t_i)`, and `(ST)^3 = lambda S^2`.
#[derive(Clone, Debug)]
pub struct ModularDatum {
    pub s: CMat,
    pub theta: Vec<Cpx>,
    pub t_exponents: Vec<BigRational>,
    pub lambda: Cpx,
    /// Largest entrywise `|(ST)^3 - lambda S^2|`.
    pub residual: BigFloat,
}

/// Search report alongside the surviving pairs.
#[derive(Clone, Debug)]
pub struct ModularData {
    pub data: Vec<ModularDatum>,
    pub s_count: usize,
    pub t_count: usize,
    /// Vafa solutions had continuous directions; only torsion candidates
    /// were tested.
    pub infinite_family: bool,
}

/// Finds all modular data of a commutative ring: every S-matrix from the
/// character table crossed with every torsion Vafa candidate, kept when
/// `(ST)^3 = lambda S^2` holds entrywise within `tol` for the scalar
/// `lambda` read off at the first nonzero entry of `S^2`.
pub fn modular_data(
    ring: &FusionRing,
    precision: usize,
    seed: u64,
    tol: &BigFloat,
) -> Result<ModularData> {
    if !ring.is_commutative() {
        return Err(FusionError::NonCommutative);
    }
    let ctx = Ctx::from_digits(precision);
    let table = character_table(ring, precision, seed)?;
    let smats = s_matrices(ring, &table, ctx, tol);
    let cands = vafa_candidates(ring);
    let mut data = Vec::new();
    for t_vec in &cands.exponents {
        let theta = phases(t_vec, ctx);
        for s in &smats {
            if let Some(datum) = check_pair(s, &theta, t_vec, ctx, tol) {
                data.push(datum);
            }
        }
    }
    Ok(ModularData {
        data,
        s_count: smats.len(),
        t_count: cands.exponents.len(),
        infinite_family: cands.infinite_family,
    })
}

/// `exp(2 pi i t)` for each exponent.
fn phases(t_vec: &[BigRational], ctx: Ctx) -> Vec<Cpx> {
    let two_pi = ctx.mul(&ctx.int(2), &ctx.pi());
    t_vec
        .iter()
        .map(|t| {
            if t.is_zero() {
                return Cpx::one(ctx);
            }
            let frac = ctx.div(&ctx.big_int(t.numer()), &ctx.big_int(t.denom()));
            let angle = ctx.mul(&two_pi, &frac);
            Cpx::new(ctx.cos(&angle), ctx.sin(&angle))
        })
        .collect()
}

fn check_pair(
    s: &CMat,
    theta: &[Cpx],
    t_vec: &[BigRational],
    ctx: Ctx,
    tol: &BigFloat,
) -> Option<ModularDatum> {
    let r = s.n;
    // ST scales the columns of S by the phases.
    let mut st = s.clone();
    for i in 0..r {
        for j in 0..r {
            *st.at_mut(i, j) = s.at(i, j).mul(&theta[j], ctx);
        }
    }
    let st3 = st.matmul(&st, ctx).matmul(&st, ctx);
    let s2 = s.matmul(s, ctx);
    let half = ctx.parse("0.5");
    let (pi, pj) = (0..r)
        .flat_map(|i| (0..r).map(move |j| (i, j)))
        .find(|&(i, j)| precision::cmp(&s2.at(i, j).abs(ctx), &half) == Ordering::Greater)?;
    let lambda = st3.at(pi, pj).div(s2.at(pi, pj), ctx);
    if precision::cmp(&lambda.abs(ctx), &half) != Ordering::Greater {
        return None;
    }
    let mut worst = ctx.zero();
    for i in 0..r {
        for j in 0..r {
            let want = lambda.mul(s2.at(i, j), ctx);
            worst = precision::max(worst, st3.at(i, j).sub(&want, ctx).abs(ctx));
        }
    }
    if precision::cmp(&worst, tol) == Ordering::Greater {
        return None;
    }
    Some(ModularDatum {
        s: s.clone(),
        theta: theta.to_vec(),
        t_exponents: t_vec.to_vec(),
        lambda,
        residual: worst,
    })
}
