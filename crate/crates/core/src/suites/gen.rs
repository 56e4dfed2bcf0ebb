//! Random inputs for the property suites. Every generator draws from a
//! caller-supplied RNG so that a case is a pure function of its seed.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::grassmann::{Parity, VariableTable};
use crate::scalars::{GaussRational, Scalar};
use crate::superlinalg::SuperMatrix;
use crate::SuperFn;

pub fn small_int<R: Rng>(rng: &mut R) -> i64 {
    rng.gen_range(-3..=3)
}

pub fn nonzero_int<R: Rng>(rng: &mut R) -> i64 {
    let v = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        -v
    } else {
        v
    }
}

/// `(a + b i)/d` with small integers.
pub fn gauss<R: Rng>(rng: &mut R) -> Scalar {
    let d = rng.gen_range(1..=4);
    let re = Scalar::from_ratio(small_int(rng), d);
    if rng.gen_bool(0.3) {
        &re + &(&Scalar::i() * &Scalar::from_ratio(small_int(rng), d))
    } else {
        re
    }
}

pub fn nonzero_gauss<R: Rng>(rng: &mut R) -> Scalar {
    loop {
        let s = gauss(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// A sum of monomials in the parameters `p`, `q`, their formal roots and
/// `2π`, over random Gaussian rationals.
pub fn scalar<R: Rng>(rng: &mut R) -> Scalar {
    let mut acc = Scalar::from_i64(0);
    for _ in 0..rng.gen_range(1..=3) {
        let mut term = gauss(rng);
        for name in ["p", "q"] {
            match rng.gen_range(0..4) {
                1 => term = &term * &Scalar::param(name),
                2 => term = &term * &Scalar::param_root(name),
                3 => term = &term * &Scalar::param(name).inv().expect("nonzero"),
                _ => {}
            }
        }
        if rng.gen_bool(0.3) {
            term = &term * &Scalar::two_pi();
        }
        acc = &acc + &term;
    }
    acc
}

/// A Gaussian rational times a product of parameter powers, possibly
/// with negative exponents.
pub fn monomial_scalar<R: Rng>(rng: &mut R) -> Scalar {
    let sign = if rng.gen_bool(0.3) { -1 } else { 1 };
    let mut s = Scalar::from_gauss(GaussRational::from_ratio(sign * rng.gen_range(1..=5), rng.gen_range(1..=5)));
    for name in ["p", "q"] {
        s = &s * &Scalar::param_root(name).powi(rng.gen_range(-3..=3));
    }
    &s * &Scalar::tau().powi(rng.gen_range(-2..=2))
}

/// A random polynomial: up to `terms` monomials over the listed generators,
/// each generator used with exponent ≤ 2 (odd ones at most once).
pub fn polynomial<R: Rng>(rng: &mut R, t: &Arc<VariableTable>, names: &[&str], terms: usize) -> SuperFn {
    let mut f = SuperFn::zero(t);
    for _ in 0..rng.gen_range(1..=terms) {
        let mut m = SuperFn::constant(t, gauss(rng));
        for n in names {
            let g = SuperFn::var(t, n).expect("known generator");
            let e = match t.parity(t.index(n).expect("known")) {
                Parity::Odd => rng.gen_range(0..=1),
                Parity::Even => rng.gen_range(0..=2),
            };
            if e > 0 {
                m = m.mul(&g.pow(e));
            }
        }
        f = f.add(&m);
    }
    f
}

/// A homogeneous polynomial of parity `p` over the table's generators.
pub fn homogeneous<R: Rng>(rng: &mut R, t: &Arc<VariableTable>, p: Parity, terms: usize) -> SuperFn {
    let names: Vec<&str> = t.generators().iter().map(|g| g.name.as_str()).collect();
    polynomial(rng, t, &names, terms).part(p)
}

/// Positive definite 2×2 kernels whose pivots are squares in either
/// elimination order, so that every partial Gaussian has a rational root.
pub const KERNELS: [[i64; 3]; 6] = [[1, 0, 1], [1, 0, 4], [4, 0, 9], [1, 3, 25], [4, 6, 25], [25, 4, 1]];

/// `exp(−½ xᵀAx + b·x)` in the even variables `x`, `y`.
pub fn gaussian<R: Rng>(rng: &mut R, t: &Arc<VariableTable>, x: &str, y: &str, linear: bool) -> SuperFn {
    let [a, b, c] = *KERNELS.choose(rng).expect("nonempty");
    let (vx, vy) = (SuperFn::var(t, x).expect("x"), SuperFn::var(t, y).expect("y"));
    let quad = vx
        .mul(&vx)
        .scale(&Scalar::from_i64(a))
        .add(&vx.mul(&vy).scale(&Scalar::from_i64(2 * b)))
        .add(&vy.mul(&vy).scale(&Scalar::from_i64(c)))
        .scale(&Scalar::from_ratio(-1, 2));
    let mut e = quad;
    if linear {
        e = e.add(&vx.scale(&Scalar::from_i64(small_int(rng)))).add(&vy.scale(&Scalar::from_i64(small_int(rng))));
    }
    e.exp_even().expect("quadratic exponent")
}

/// An invertible 2×2 integer matrix.
pub fn invertible2<R: Rng>(rng: &mut R) -> [[i64; 2]; 2] {
    loop {
        let m = [[small_int(rng), small_int(rng)], [small_int(rng), small_int(rng)]];
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0 {
            return m;
        }
    }
}

/// Even element of the odd-parameter algebra: rational body plus a
/// random nilpotent part.
pub fn even_element<R: Rng>(rng: &mut R, t: &Arc<VariableTable>, body: i64) -> SuperFn {
    let mut f = SuperFn::constant(t, Scalar::from_i64(body));
    let n = t.len();
    for _ in 0..rng.gen_range(0..=2) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        f = f.add(&SuperFn::gen(t, a).mul(&SuperFn::gen(t, b)).scale(&Scalar::from_i64(small_int(rng))));
    }
    f
}

pub fn odd_element<R: Rng>(rng: &mut R, t: &Arc<VariableTable>) -> SuperFn {
    let mut f = SuperFn::zero(t);
    for k in 0..t.len() {
        if rng.gen_bool(0.5) {
            f = f.add(&SuperFn::gen(t, k).scale(&Scalar::from_i64(small_int(rng))));
        }
    }
    f
}

/// An invertible even `(2|2)` supermatrix over odd parameters.
pub fn even_supermatrix<R: Rng>(rng: &mut R, t: &Arc<VariableTable>) -> SuperMatrix<Scalar> {
    let (a, d) = (invertible2(rng), invertible2(rng));
    let mut rows = vec![vec![SuperFn::zero(t); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            rows[i][j] = even_element(rng, t, a[i][j]);
            rows[i + 2][j + 2] = even_element(rng, t, d[i][j]);
            rows[i][j + 2] = odd_element(rng, t);
            rows[i + 2][j] = odd_element(rng, t);
        }
    }
    SuperMatrix::new(2, 2, t, rows).expect("shape")
}

/// An odd `(2|2)` supermatrix: odd diagonal blocks, even off-diagonal ones.
pub fn odd_supermatrix<R: Rng>(rng: &mut R, t: &Arc<VariableTable>) -> SuperMatrix<Scalar> {
    let mut rows = vec![vec![SuperFn::zero(t); 4]; 4];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = if (i < 2) == (j < 2) {
                odd_element(rng, t)
            } else {
                let body = small_int(rng);
                even_element(rng, t, body)
            };
        }
    }
    SuperMatrix::new(2, 2, t, rows).expect("shape")
}
