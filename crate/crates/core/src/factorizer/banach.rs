//! Off-diagonal extraction over rings with property (1): for all `x, z` some
//! right invertible `y` makes `1 + x y z` right invertible. 160 factors.

use crate::matgroup::{route, GlElement, Matrix};
use crate::reduction::{expand_checked, ConjProduct, Sign};
use crate::ring::RingElement;

use super::classes::{oracle_error, Log};
use super::engine::{internal, right_invertible_corner, t, Native};
use super::{FactorError, RingClass};

fn integrity(cond: bool, what: &str) -> Result<(), FactorError> {
    if cond {
        Ok(())
    } else {
        Err(FactorError::Integrity(format!("property (1): {what}")))
    }
}

fn right_inverse_of(ring: &crate::ring::Ring, x: &RingElement, name: &str) -> Result<RingElement, FactorError> {
    ring.right_inverse(x)
        .ok_or_else(|| FactorError::Integrity(format!("property (1): {name} = {x} has no right inverse")))
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn property_one_product(
    sigma: &GlElement,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    a: &RingElement,
    b: &RingElement,
    log: &mut Log,
) -> Result<ConjProduct, FactorError> {
    let class = RingClass::PropertyOne;
    let ring = sigma.ring();
    let n = sigma.n();
    let last = n - 1;
    let (tr, _) = route(ring, n, i, j, 0, last)?;
    let s = sigma.conjugate_by(&tr);
    let s00 = s.entry(0, 0).clone();
    let s0n = s.entry(0, last).clone();

    // Step 1: tau = s (s^-1)^(t_1n(-x)) has a right invertible (1,1) entry and
    // tau_1n = (s_11 alpha - 1) x.
    let x = ring
        .banach_unit_witness(&s00, s.inv_entry(last, 0))
        .map_err(oracle_error(class, ring))?;
    let x_inv = right_inverse_of(ring, &x, "x")?;
    let tau_expr = {
        let mut e = ConjProduct::base(ring, n);
        e.push(Sign::Minus, t(ring, n, 0, last, ring.neg(&x)));
        e
    };
    let tau = GlElement::from_matrix(tau_expr.evaluate(&s))?;
    let alpha = ring.sub(
        &ring.product_of([&x, s.inv_entry(last, last), &x_inv]),
        &ring.mul(&x, s.inv_entry(last, 0)),
    );
    let s00_alpha_1 = ring.sub(&ring.mul(&s00, &alpha), &ring.one());
    integrity(*tau.entry(0, last) == ring.mul(&s00_alpha_1, &x), "tau_1n")?;
    log.push(("x".into(), x.to_string()));
    log.push(("x_inv".into(), x_inv.to_string()));
    log.push(("alpha".into(), alpha.to_string()));
    log.push(("tau_11".into(), tau.entry(0, 0).to_string()));

    // t_k'l'(a' (s_11 alpha - 1) b') over s, 16 factors
    let two = |kk: usize, ll: usize, a1: &RingElement, b1: &RingElement| -> Result<ConjProduct, FactorError> {
        let placed = right_invertible_corner(&tau, a1, &ring.mul(&x_inv, b1), kk, ll).map_err(internal)?;
        let product = placed.product.substitute(&tau_expr);
        let want = Matrix::transvection(ring, n, kk, ll, ring.product_of([a1, &s00_alpha_1, b1]))?;
        integrity(product.evaluate(&s) == want, "step 1 value")?;
        Ok(product)
    };

    // Step 2: t_12(-c y) rho over s with rho_12 = 0, 18 factors.
    let c = ring.mul(&alpha, &s0n);
    let shift = t(ring, n, 0, last, ring.neg(&c));
    let zeta = s.mul(&GlElement::from_word(&shift));
    let y = ring
        .banach_unit_witness(&ring.neg(zeta.entry(0, last)), zeta.inv_entry(1, 0))
        .map_err(oracle_error(class, ring))?;
    let y_inv = right_inverse_of(ring, &y, "y")?;
    let initial = ConjProduct::single(Sign::Plus, shift.clone());
    let a1 = t(ring, n, 0, last, c.clone());
    let g = t(ring, n, last, 1, y.clone());
    let p2 = expand_checked(&s, &initial, &a1, &zeta, std::slice::from_ref(&g))?;
    let gg = GlElement::from_word(&g);
    let xi = gg.mul(&zeta).mul(&gg.inverse()).mul(&zeta.inverse());
    let xi00_inv = right_inverse_of(ring, xi.entry(0, 0), "xi_11")?;
    let tail = ring.product_of([&s0n, &y, zeta.inv_entry(1, 1)]);
    integrity(
        *xi.entry(0, 1) == ring.neg(&ring.mul(&ring.neg(&s00_alpha_1), &tail)),
        "xi_12",
    )?;
    let rho = xi.mul(&GlElement::from_word(&t(
        ring,
        n,
        0,
        1,
        ring.neg(&ring.mul(&xi00_inv, xi.entry(0, 1))),
    )));
    integrity(ring.is_zero(rho.entry(0, 1)), "rho_12 = 0")?;
    log.push(("zeta_1n".into(), zeta.entry(0, last).to_string()));
    log.push(("y".into(), y.to_string()));
    log.push(("xi_11".into(), xi.entry(0, 0).to_string()));
    log.push(("xi_12".into(), xi.entry(0, 1).to_string()));
    log.push(("rho_12".into(), rho.entry(0, 1).to_string()));
    let mut e = p2;
    e.extend(&two(0, 1, &ring.neg(&xi00_inv), &tail)?);
    let cy = ring.mul(&c, &y);
    let base3 = GlElement::from_word(&t(ring, n, 0, 1, ring.neg(&cy))).mul(&rho);
    integrity(e.evaluate(&s) == *base3.mat(), "step 2 value")?;

    // Step 3: t_21(a s_11 c b) over base3, then t_21(-a (s_11 alpha - 1) s_1n b).
    let gs = [
        t(ring, n, 1, 2, ring.mul(&y_inv, b)),
        t(ring, n, 1, 0, ring.mul(a, &s00)),
        t(ring, n, 2, 0, ring.neg(&ring.one())),
    ];
    let p3 = expand_checked(
        &base3,
        &ConjProduct::base(ring, n),
        &t(ring, n, 0, 1, ring.neg(&cy)),
        &rho,
        &gs,
    )?;
    let mut product = p3.substitute(&e);
    product.extend(&two(1, 0, &ring.neg(a), &ring.mul(&s0n, b))?);
    let value = ring.product_of([a, &s0n, b]);
    integrity(
        product.evaluate(&s) == Matrix::transvection(ring, n, 1, 0, value.clone())?,
        "step 3 value",
    )?;
    let native = Native { product, k: 1, l: 0, value };
    Ok(native.place(k, l)?.product.prefix(&tr))
}
