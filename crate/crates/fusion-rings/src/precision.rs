//! Arbitrary-precision real and complex arithmetic helpers.
//!
//! Thin layer over `astro_float::BigFloat` fixing the rounding mode crate-wide
//! and threading the working precision through a copyable [`Ctx`]. Trig and
//! decimal parsing share a thread-local constants cache.

use std::cell::RefCell;
use std::cmp::Ordering;

pub use astro_float::BigFloat;

use astro_float::{Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{FusionError, Result};

pub const RM: RoundingMode = RoundingMode::ToEven;

/// Guard digits appended to the requested decimal precision before
/// converting to mantissa bits.
const GUARD_DIGITS: usize = 25;
const LOG2_10: f64 = 3.321928094887362;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Working-precision context (requested decimal digits and mantissa bits,
/// the latter including guard room).
#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    pub digits: usize,
    pub bits: usize,
}

impl Ctx {
    /// Context carrying `digits` significant decimal digits plus guard room.
    pub fn from_digits(digits: usize) -> Ctx {
        Ctx { digits, bits: ((digits + GUARD_DIGITS) as f64 * LOG2_10).ceil() as usize }
    }

    pub fn int(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.bits)
    }

    pub fn f64(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.bits)
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::from_i64(0, self.bits)
    }

    pub fn one(&self) -> BigFloat {
        BigFloat::from_i64(1, self.bits)
    }

    /// Exact-ish `10^k` at working precision.
    pub fn ten_pow(&self, k: i64) -> BigFloat {
        self.parse(&format!("1.0e{k}"))
    }

    /// Parse a decimal literal such as `-1.25e-3`.
    pub fn parse(&self, s: &str) -> BigFloat {
        with_consts(|cc| BigFloat::parse(s, Radix::Dec, self.bits, RM, cc))
    }

    pub fn big_int(&self, v: &BigInt) -> BigFloat {
        self.parse(&v.to_string())
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, RM)
    }

    pub fn pi(&self) -> BigFloat {
        with_consts(|cc| cc.pi(self.bits, RM))
    }

    pub fn sin(&self, a: &BigFloat) -> BigFloat {
        with_consts(|cc| a.sin(self.bits, RM, cc))
    }

    pub fn cos(&self, a: &BigFloat) -> BigFloat {
        with_consts(|cc| a.cos(self.bits, RM, cc))
    }
}

/// Total order on finite values; NaN is a programming error here.
pub fn cmp(a: &BigFloat, b: &BigFloat) -> Ordering {
    match a.cmp(b) {
        Some(s) => s.cmp(&0),
        None => panic!("NaN in comparison"),
    }
}

pub fn is_zero(a: &BigFloat) -> bool {
    a.is_zero()
}

pub fn abs(a: &BigFloat) -> BigFloat {
    a.abs()
}

/// `|a| <= tol`.
pub fn within(a: &BigFloat, tol: &BigFloat) -> bool {
    cmp(&a.abs(), tol) != Ordering::Greater
}

pub fn max(a: BigFloat, b: BigFloat) -> BigFloat {
    if cmp(&a, &b) == Ordering::Less {
        b
    } else {
        a
    }
}

/// Decompose a finite nonzero value into (sign, decimal digits, exponent)
/// with value = sign * 0.digits * 10^exp. Returns `None` for zero.
pub fn sci_parts(a: &BigFloat) -> Option<(i8, Vec<u8>, i64)> {
    if a.is_zero() {
        return None;
    }
    let (sign, digits, exp) = with_consts(|cc| {
        a.convert_to_radix(Radix::Dec, RM, cc).expect("radix conversion")
    });
    let s = if sign == Sign::Neg { -1 } else { 1 };
    // Strip trailing zeros; keep at least one digit.
    let mut d = digits;
    while d.len() > 1 && *d.last().unwrap() == 0 {
        d.pop();
    }
    Some((s, d, exp as i64))
}

/// `floor(a * 10^scale)` as an exact integer, used to build stable sort keys
/// from computed reals.
pub fn snap_to_grid(a: &BigFloat, scale: i64) -> BigInt {
    let Some((sign, digits, exp)) = sci_parts(a) else {
        return BigInt::zero();
    };
    let k = digits.len() as i64;
    let mut mant = BigInt::zero();
    for &d in &digits {
        mant = mant * 10 + d;
    }
    if sign < 0 {
        mant = -mant;
    }
    // value = mant * 10^(exp - k), target = floor(value * 10^scale).
    let shift = exp - k + scale;
    if shift >= 0 {
        mant * BigInt::from(10u32).pow(shift as u32)
    } else {
        let denom = BigInt::from(10u32).pow((-shift) as u32);
        num_integer::Integer::div_floor(&mant, &denom)
    }
}

/// Render with `digits` significant decimal digits, round-half-up, in
/// scientific notation (`-3.141e+0`).
pub fn format_digits(a: &BigFloat, digits: usize) -> String {
    let Some((sign, mut d, mut exp)) = sci_parts(a) else {
        return "0".into();
    };
    if d.len() > digits {
        let round_up = d[digits] >= 5;
        d.truncate(digits);
        if round_up {
            let mut i = digits;
            loop {
                if i == 0 {
                    d.insert(0, 1);
                    exp += 1;
                    break;
                }
                i -= 1;
                if d[i] == 9 {
                    d[i] = 0;
                } else {
                    d[i] += 1;
                    break;
                }
            }
        }
    }
    while d.len() > 1 && *d.last().unwrap() == 0 {
        d.pop();
    }
    let mant: String = d.iter().map(|&x| char::from(b'0' + x)).collect();
    let (head, tail) = mant.split_at(1);
    let frac = if tail.is_empty() { "0".to_string() } else { tail.to_string() };
    format!("{}{head}.{frac}e{:+}", if sign < 0 { "-" } else { "" }, exp - 1)
}

/// Complex number at working precision.
#[derive(Clone, Debug)]
pub struct Cpx {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Cpx {
    pub fn new(re: BigFloat, im: BigFloat) -> Cpx {
        Cpx { re, im }
    }

    pub fn zero(ctx: Ctx) -> Cpx {
        Cpx::new(ctx.zero(), ctx.zero())
    }

    pub fn one(ctx: Ctx) -> Cpx {
        Cpx::new(ctx.one(), ctx.zero())
    }

    pub fn real(re: BigFloat, ctx: Ctx) -> Cpx {
        Cpx::new(re, ctx.zero())
    }

    pub fn from_f64s(re: f64, im: f64, ctx: Ctx) -> Cpx {
        Cpx::new(ctx.f64(re), ctx.f64(im))
    }

    pub fn add(&self, o: &Cpx, ctx: Ctx) -> Cpx {
        Cpx::new(ctx.add(&self.re, &o.re), ctx.add(&self.im, &o.im))
    }

    pub fn sub(&self, o: &Cpx, ctx: Ctx) -> Cpx {
        Cpx::new(ctx.sub(&self.re, &o.re), ctx.sub(&self.im, &o.im))
    }

    pub fn mul(&self, o: &Cpx, ctx: Ctx) -> Cpx {
        let re = ctx.sub(&ctx.mul(&self.re, &o.re), &ctx.mul(&self.im, &o.im));
        let im = ctx.add(&ctx.mul(&self.re, &o.im), &ctx.mul(&self.im, &o.re));
        Cpx::new(re, im)
    }

    pub fn div(&self, o: &Cpx, ctx: Ctx) -> Cpx {
        let den = o.abs2(ctx);
        let num = self.mul(&o.conj(), ctx);
        Cpx::new(ctx.div(&num.re, &den), ctx.div(&num.im, &den))
    }

    pub fn conj(&self) -> Cpx {
        Cpx::new(self.re.clone(), self.im.neg())
    }

    pub fn neg(&self) -> Cpx {
        Cpx::new(self.re.neg(), self.im.neg())
    }

    pub fn scale(&self, s: &BigFloat, ctx: Ctx) -> Cpx {
        Cpx::new(ctx.mul(&self.re, s), ctx.mul(&self.im, s))
    }

    pub fn abs2(&self, ctx: Ctx) -> BigFloat {
        ctx.add(&ctx.mul(&self.re, &self.re), &ctx.mul(&self.im, &self.im))
    }

    pub fn abs(&self, ctx: Ctx) -> BigFloat {
        ctx.sqrt(&self.abs2(ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

/// Dense square complex matrix.
#[derive(Clone, Debug)]
pub struct CMat {
    pub n: usize,
    data: Vec<Cpx>,
}

impl CMat {
    pub fn zeros(n: usize, ctx: Ctx) -> CMat {
        CMat { n, data: vec![Cpx::zero(ctx); n * n] }
    }

    pub fn identity(n: usize, ctx: Ctx) -> CMat {
        let mut m = CMat::zeros(n, ctx);
        for i in 0..n {
            *m.at_mut(i, i) = Cpx::one(ctx);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Cpx>>) -> CMat {
        let n = rows.len();
        let data: Vec<Cpx> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), n * n, "ragged rows");
        CMat { n, data }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &Cpx {
        &self.data[i * self.n + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Cpx {
        &mut self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Cpx] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Integer matrix (row-major `mat[i][j]`) lifted to working precision.
    pub fn from_u32(mat: &[Vec<u32>], ctx: Ctx) -> CMat {
        let n = mat.len();
        let mut m = CMat::zeros(n, ctx);
        for i in 0..n {
            for j in 0..n {
                *m.at_mut(i, j) = Cpx::real(ctx.int(mat[i][j] as i64), ctx);
            }
        }
        m
    }

    pub fn matmul(&self, o: &CMat, ctx: Ctx) -> CMat {
        let n = self.n;
        let mut out = CMat::zeros(n, ctx);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = a.mul(o.at(k, j), ctx);
                    *out.at_mut(i, j) = out.at(i, j).add(&t, ctx);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Cpx], ctx: Ctx) -> Vec<Cpx> {
        let n = self.n;
        let mut out = vec![Cpx::zero(ctx); n];
        for i in 0..n {
            let mut acc = Cpx::zero(ctx);
            for j in 0..n {
                acc = acc.add(&self.at(i, j).mul(&v[j], ctx), ctx);
            }
            out[i] = acc;
        }
        out
    }

    /// Solve `self * x = rhs` by Gaussian elimination with partial pivoting.
    /// Fails only on an exactly-zero pivot; near-singular systems are the
    /// intended use case for inverse iteration.
    pub fn solve(&self, rhs: &[Cpx], ctx: Ctx) -> Result<Vec<Cpx>> {
        let n = self.n;
        let mut a = self.clone();
        let mut b = rhs.to_vec();
        for col in 0..n {
            let mut piv = col;
            let mut best = a.at(col, col).abs2(ctx);
            for row in col + 1..n {
                let v = a.at(row, col).abs2(ctx);
                if cmp(&v, &best) == Ordering::Greater {
                    best = v;
                    piv = row;
                }
            }
            if best.is_zero() {
                return Err(FusionError::Singular(format!("zero pivot at column {col}")));
            }
            if piv != col {
                for j in 0..n {
                    let tmp = a.at(col, j).clone();
                    *a.at_mut(col, j) = a.at(piv, j).clone();
                    *a.at_mut(piv, j) = tmp;
                }
                b.swap(col, piv);
            }
            let diag = a.at(col, col).clone();
            for row in col + 1..n {
                if a.at(row, col).is_zero() {
                    continue;
                }
                let f = a.at(row, col).div(&diag, ctx);
                for j in col..n {
                    let t = f.mul(a.at(col, j), ctx);
                    *a.at_mut(row, j) = a.at(row, j).sub(&t, ctx);
                }
                let t = f.mul(&b[col], ctx);
                b[row] = b[row].sub(&t, ctx);
            }
        }
        let mut x = vec![Cpx::zero(ctx); n];
        for i in (0..n).rev() {
            let mut acc = b[i].clone();
            for j in i + 1..n {
                acc = acc.sub(&a.at(i, j).mul(&x[j], ctx), ctx);
            }
            x[i] = acc.div(a.at(i, i), ctx);
        }
        Ok(x)
    }

    /// Matrix inverse via column-by-column solves.
    pub fn inverse(&self, ctx: Ctx) -> Result<CMat> {
        let n = self.n;
        let mut out = CMat::zeros(n, ctx);
        for j in 0..n {
            let mut e = vec![Cpx::zero(ctx); n];
            e[j] = Cpx::one(ctx);
            let col = self.solve(&e, ctx)?;
            for i in 0..n {
                *out.at_mut(i, j) = col[i].clone();
            }
        }
        Ok(out)
    }

    /// Largest entry magnitude (squared) — cheap norm for residual checks.
    pub fn max_abs(&self, ctx: Ctx) -> BigFloat {
        let mut best = ctx.zero();
        for e in &self.data {
            best = max(best, e.abs(ctx));
        }
        best
    }
}

/// Conjugate dot product `sum conj(a_i) b_i`.
pub fn cdot(a: &[Cpx], b: &[Cpx], ctx: Ctx) -> Cpx {
    let mut acc = Cpx::zero(ctx);
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.conj().mul(y, ctx), ctx);
    }
    acc
}

/// Euclidean norm of a complex vector.
pub fn vnorm(v: &[Cpx], ctx: Ctx) -> BigFloat {
    let mut acc = ctx.zero();
    for x in v {
        acc = ctx.add(&acc, &x.abs2(ctx));
    }
    ctx.sqrt(&acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_snap_and_format() {
        let ctx = Ctx::from_digits(50);
        let x = ctx.parse("3.14159");
        assert_eq!(snap_to_grid(&x, 3), BigInt::from(3141));
        assert_eq!(snap_to_grid(&x.neg(), 3), BigInt::from(-3142));
        assert_eq!(snap_to_grid(&ctx.zero(), 10), BigInt::zero());
        assert_eq!(snap_to_grid(&ctx.int(250), -1), BigInt::from(25));
        assert_eq!(format_digits(&x, 4), "3.142e+0");
        assert_eq!(format_digits(&ctx.parse("-0.000999"), 2), "-1.0e-3");
        assert_eq!(format_digits(&ctx.int(1000), 5), "1.0e+3");
    }

    #[test]
    fn sqrt_two_round_trip() {
        let ctx = Ctx::from_digits(99);
        let two = ctx.int(2);
        let s = ctx.sqrt(&two);
        let back = ctx.sub(&ctx.mul(&s, &s), &two);
        assert!(within(&back, &ctx.ten_pow(-110)));
    }

    #[test]
    fn complex_division() {
        let ctx = Ctx::from_digits(60);
        let a = Cpx::from_f64s(3.0, 4.0, ctx);
        let b = Cpx::from_f64s(1.0, -2.0, ctx);
        let q = a.div(&b, ctx);
        let back = q.mul(&b, ctx).sub(&a, ctx);
        assert!(within(&back.abs(ctx), &ctx.ten_pow(-55)));
    }

    #[test]
    fn solve_small_system() {
        let ctx = Ctx::from_digits(60);
        let m = CMat::from_rows(vec![
            vec![Cpx::from_f64s(2.0, 0.0, ctx), Cpx::from_f64s(1.0, 1.0, ctx)],
            vec![Cpx::from_f64s(0.0, -1.0, ctx), Cpx::from_f64s(3.0, 0.0, ctx)],
        ]);
        let rhs = vec![Cpx::from_f64s(1.0, 0.0, ctx), Cpx::from_f64s(0.0, 2.0, ctx)];
        let x = m.solve(&rhs, ctx).unwrap();
        let got = m.matvec(&x, ctx);
        for (g, w) in got.iter().zip(&rhs) {
            assert!(within(&g.sub(w, ctx).abs(ctx), &ctx.ten_pow(-55)));
        }
        let inv = m.inverse(ctx).unwrap();
        let prod = m.matmul(&inv, ctx);
        let eye = CMat::identity(2, ctx);
        for i in 0..2 {
            for j in 0..2 {
                let d = prod.at(i, j).sub(eye.at(i, j), ctx);
                assert!(within(&d.abs(ctx), &ctx.ten_pow(-55)));
            }
        }
    }
}
