use super::*;
use crate::special_fn::gamma::{gamma, rgamma};
use crate::special_fn::gauss_2f1;
use proptest::prelude::*;

fn c(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

fn rel(a: Complex, b: Complex) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn cy(y: &[f64]) -> Vec<Complex> {
    y.iter().map(|&v| c(v)).collect()
}

fn cont(p: &FBParams, y: &[f64]) -> Complex {
    fb_continuation(p, y, &Truncation::default()).unwrap().value
}

fn euler(p: &FBParams, y: &[f64]) -> Complex {
    fb_euler_integral(p, y, &QuadratureSpec::default()).unwrap().value
}

fn mb(p: &FBParams, y: &[f64]) -> Complex {
    fb_mellin_barnes(p, y, &ContourSpec::default()).unwrap().value
}

#[test]
fn series_trivial_and_gauss_cases() {
    let p = FBParams::real(&[0.3, 0.4], &[0.5, 0.6], 1.7).unwrap();
    assert_eq!(fb_series(&p, &[c(0.0), c(0.0)]).unwrap().value, c(1.0));
    let g = FBParams::real(&[0.7], &[0.5], 0.5).unwrap();
    let v = fb_series(&g, &[c(0.3)]).unwrap().value;
    assert!(rel(v, c(0.7f64.powf(-0.7))) < 1e-14);
    assert!(matches!(fb_series(&g, &[c(0.97)]), Err(Error::OutsidePolydisc(_))));
}

#[test]
fn series_matches_brute_force_double_sum() {
    let (a, b, cc, y) = ([0.3, 0.4], [0.5, 0.6], 1.7, [0.2, -0.1]);
    // term ratio recurrences in each index, summed over a square
    let mut total = 0.0;
    let mut row = 1.0;
    for k1 in 0..=200 {
        let mut t = row;
        for k2 in 0..=200 {
            total += t;
            let (k1f, k2f) = (k1 as f64, k2 as f64);
            t *= (a[1] + k2f) * (b[1] + k2f) * y[1] / ((k2f + 1.0) * (cc + k1f + k2f));
        }
        let k1f = k1 as f64;
        row *= (a[0] + k1f) * (b[0] + k1f) * y[0] / ((k1f + 1.0) * (cc + k1f));
    }
    let p = FBParams::real(&a, &b, cc).unwrap();
    let v = fb_series(&p, &cy(&y)).unwrap().value;
    assert!(rel(v, c(total)) < 1e-10, "{v} {total}");
}

#[test]
fn contiguity_relation() {
    let p = FBParams::real(&[0.3, 1.4], &[0.5, -0.6], 1.7).unwrap();
    let y = [0.25, -0.4];
    let h = 1e-5;
    for k in 0..2 {
        let mut yp = y;
        let mut ym = y;
        yp[k] += h;
        ym[k] -= h;
        let fd = (fb_series(&p, &cy(&yp)).unwrap().value - fb_series(&p, &cy(&ym)).unwrap().value) / (2.0 * h);
        let exact = p.a[k] * p.b[k] / p.c * fb_series(&p.contiguous(k), &cy(&y)).unwrap().value;
        assert!(rel(fd, exact) < 1e-6, "k = {k}: {fd} {exact}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn triple_permutation_and_swap_symmetry(
        a in prop::collection::vec(0.1f64..2.0, 3),
        b in prop::collection::vec(0.1f64..2.0, 3),
        cc in 0.5f64..3.0,
        y in prop::collection::vec(-0.5f64..0.5, 3),
    ) {
        let p = FBParams::real(&a, &b, cc).unwrap();
        let base = fb_series(&p, &cy(&y)).unwrap().value;
        let perm = [2usize, 0, 1];
        let q = FBParams::real(
            &perm.map(|i| a[i]), &perm.map(|i| b[i]), cc).unwrap();
        let yq: Vec<f64> = perm.iter().map(|&i| y[i]).collect();
        let v = fb_series(&q, &cy(&yq)).unwrap().value;
        prop_assert!(rel(v, base) < 1e-12);
        let mut s = p.clone();
        std::mem::swap(&mut s.a[1], &mut s.b[1]);
        let v = fb_series(&s, &cy(&y)).unwrap().value;
        prop_assert!(rel(v, base) < 1e-12);
    }
}

#[test]
fn euler_integral_against_series() {
    let p = FBParams::real(&[0.7], &[0.5], 1.3).unwrap();
    let e = euler(&p, &[-0.5]);
    let s = fb_series(&p, &[c(-0.5)]).unwrap().value;
    assert!(rel(e, s) < 1e-8);
    let g = gauss_2f1(c(0.7), c(0.5), c(1.3), c(-0.5)).unwrap().value;
    assert!(rel(e, g) < 1e-8);
    let p2 = FBParams::real(&[0.3, 0.4], &[0.5, 0.6], 2.3).unwrap();
    let near = euler(&p2, &[-1e-12, -1e-12]);
    assert!(rel(near, c(1.0)) < 1e-9);
    let s2 = fb_series(&p2, &cy(&[-0.3, -0.5])).unwrap().value;
    assert!(rel(euler(&p2, &[-0.3, -0.5]), s2) < 1e-8);
}

#[test]
fn euler_integral_against_continuation() {
    let p = FBParams::real(&[0.3, 0.4], &[0.5, 0.6], 2.3).unwrap();
    let y = [-3.0, -7.0];
    assert!(rel(euler(&p, &y), cont(&p, &y)) < 1e-6);
    let y = [-5.0, -9.0];
    assert!(rel(euler(&p, &y), cont(&p, &y)) < 1e-6);
}

#[test]
fn euler_rejects_bad_exponents() {
    let p = FBParams::real(&[-0.3], &[-0.5], 0.3).unwrap();
    assert!(matches!(fb_euler_integral(&p, &[-1.0], &QuadratureSpec::default()), Err(Error::PreconditionViolated(_))));
}

#[test]
fn euler_integral_complex_exponents() {
    let z = Complex::new(0.3, 0.4);
    let p = FBParams::new(vec![c(0.8)], vec![1.0 - z], c(2.1)).unwrap();
    let e = fb_euler_integral(&p, &[-0.6], &QuadratureSpec::default()).unwrap().value;
    let g = gauss_2f1(c(0.8), 1.0 - z, c(2.1), c(-0.6)).unwrap().value;
    assert!(rel(e, g) < 1e-8, "{e} {g}");
}

#[test]
fn mellin_barnes_one_variable() {
    let p = FBParams::real(&[0.7], &[0.5], 1.3).unwrap();
    assert!(rel(mb(&p, &[-0.5]), euler(&p, &[-0.5])) < 1e-6);
    assert!(rel(mb(&p, &[-10.0]), cont(&p, &[-10.0])) < 1e-6);
    // negative parameters put poles of the left families right of the line
    let q = FBParams::real(&[-0.8], &[-1.3], 0.45).unwrap();
    let g = gauss_2f1(c(-0.8), c(-1.3), c(0.45), c(-0.4)).unwrap().value;
    assert!(rel(mb(&q, &[-0.4]), g) < 1e-8);
    let g = gauss_2f1(c(-0.8), c(-1.3), c(0.45), c(-6.0)).unwrap().value;
    assert!(rel(mb(&q, &[-6.0]), g) < 1e-8);
}

#[test]
fn mellin_barnes_pole_on_contour() {
    let p = FBParams::real(&[0.7], &[0.5], 1.3).unwrap();
    let spec = ContourSpec { sigma: Some(vec![-0.7]), ..ContourSpec::default() };
    assert!(matches!(fb_mellin_barnes(&p, &[-2.0], &spec), Err(Error::PoleOnContour(_))));
    // moving the line to the right of s = 0 subtracts that residue
    let spec = ContourSpec { sigma: Some(vec![0.4]), ..ContourSpec::default() };
    let v = fb_mellin_barnes(&p, &[-2.0], &spec).unwrap().value;
    assert!(rel(v, mb(&p, &[-2.0])) < 1e-9);
}

#[test]
fn mellin_barnes_two_variables() {
    let p = FBParams::real(&[0.3, 0.4], &[0.5, 0.6], 2.3).unwrap();
    for y in [[-0.4, -0.3], [-1.5, -2.5], [-5.0, -9.0]] {
        assert!(rel(mb(&p, &y), euler(&p, &y)) < 1e-7, "{y:?}");
    }
    // the parameters of the first correlation function at z = 1.2, z' = 1.8
    let q = FBParams::real(&[-0.8, -1.2], &[-0.2, -1.8], 0.16).unwrap();
    let s = fb_series(&q, &cy(&[-0.5, -0.5])).unwrap().value;
    assert!(rel(mb(&q, &[-0.5, -0.5]), s) < 1e-8);
    assert!(rel(mb(&q, &[-4.0, -4.0]), cont(&q, &[-4.0, -4.0])) < 1e-8);
    // equal a and b: every pole is double
    let r = FBParams::real(&[0.6, -0.4], &[0.6, -0.4], 1.9).unwrap();
    let s = fb_series(&r, &cy(&[-0.5, -0.7])).unwrap().value;
    assert!(rel(mb(&r, &[-0.5, -0.7]), s) < 1e-8);
    let l = fb_continuation_log(&r.a, r.c, &[-4.0, -5.0], &Truncation::default()).unwrap().value;
    assert!(rel(mb(&r, &[-4.0, -5.0]), l) < 1e-8);
}

#[test]
fn continuation_reduces_to_gauss() {
    let p = FBParams::real(&[0.7], &[0.5], 1.3).unwrap();
    let g = gauss_2f1(c(0.7), c(0.5), c(1.3), c(-10.0)).unwrap().value;
    assert!(rel(cont(&p, &[-10.0]), g) < 1e-10);
    let branches = fb_continuation_branches(&p, &[-10.0], &Truncation::default()).unwrap();
    assert_eq!(branches.len(), 2);
    let q = FBParams::real(&[0.3, 0.4], &[0.5, 0.6], 2.3).unwrap();
    assert_eq!(fb_continuation_branches(&q, &[-5.0, -9.0], &Truncation::default()).unwrap().len(), 4);
}

#[test]
fn continuation_preconditions() {
    let p = FBParams::real(&[0.7], &[1.7], 1.3).unwrap();
    assert!(matches!(fb_continuation(&p, &[-5.0], &Truncation::default()), Err(Error::DegenerateDifference(_))));
    let p = FBParams::real(&[0.7], &[0.5], 1.3).unwrap();
    assert!(matches!(fb_continuation(&p, &[-1.5], &Truncation::default()), Err(Error::PreconditionViolated(_))));
}

#[test]
fn continuation_branches_scale_like_powers() {
    // each branch is (-y_1)^{-e_1} (-y_2)^{-e_2} times a function analytic
    // at infinity, so its log-log slope along y -> lambda y tends to -sum Re e
    let p = FBParams::real(&[0.3, 0.9], &[0.55, 0.2], 2.3).unwrap();
    let y0 = [-20.0, -30.0];
    let at = |lambda: f64| {
        let y: Vec<f64> = y0.iter().map(|v| v * lambda).collect();
        fb_continuation_branches(&p, &y, &Truncation::default()).unwrap()
    };
    let (b1, b2) = (at(100.0), at(200.0));
    for ((mask, r1), (_, r2)) in b1.iter().zip(&b2) {
        let e: f64 = (0..2).map(|i| if mask >> i & 1 == 1 { p.a[i].re } else { p.b[i].re }).sum();
        let slope = (r2.value.norm() / r1.value.norm()).ln() / 2f64.ln();
        assert!((slope + e).abs() < 1e-3, "mask {mask}: {slope} vs {}", -e);
    }
    // the full value is dominated by the smallest exponent per coordinate
    let scaled: Vec<f64> =
        [1e2, 1e3, 1e4, 1e5, 1e6].iter().map(|&r| cont(&p, &[-r, -30.0]).norm() * r.powf(0.3)).collect();
    let last = scaled[scaled.len() - 1];
    assert!(scaled.iter().all(|v| *v > 0.5 * last && *v < 2.0 * last), "{scaled:?}");
    assert!((scaled[3] / last - 1.0).abs() < (scaled[1] / last - 1.0).abs());
}

#[test]
fn logarithmic_continuation() {
    let p = FBParams::real(&[0.6], &[0.6], 1.4).unwrap();
    let l = fb_continuation_log(&p.a, p.c, &[-8.0], &Truncation::default()).unwrap().value;
    assert!(rel(l, euler(&p, &[-8.0])) < 1e-6);
    let g = gauss_2f1(c(0.6), c(0.6), c(1.4), c(-8.0)).unwrap().value;
    assert!(rel(l, g) < 1e-6);
    // F is analytic in b, so values at b = a -+ 1e-3 bracket the log value
    let lo = cont(&FBParams::real(&[0.6], &[0.599], 1.4).unwrap(), &[-8.0]);
    let hi = cont(&FBParams::real(&[0.6], &[0.601], 1.4).unwrap(), &[-8.0]);
    assert!((lo.re - l.re) * (hi.re - l.re) < 0.0);
    assert!(rel(0.5 * (lo + hi), l) < 1e-6);
}

#[test]
fn logarithmic_leading_coefficient() {
    // F (-y)^a = A ln(-y) + B + O(ln|y| / |y|) with
    // A = Gamma(c) / (Gamma(a) Gamma(c - a))
    let (a, cc) = (0.6, 1.4);
    let f = |y: f64| {
        fb_continuation_log(&[c(a)], c(cc), &[y], &Truncation::default()).unwrap().value * (-y).powf(a)
    };
    let slope = (f(-2e6) - f(-1e6)) / 2f64.ln();
    let expect = gamma(c(cc)).unwrap() * rgamma(c(a)) * rgamma(c(cc - a));
    assert!(rel(slope, expect) < 1e-4, "{slope} {expect}");
    let two = fb_continuation_log(&[c(0.6), c(0.45)], c(2.2), &[-6.0, -9.0], &Truncation::default()).unwrap();
    let p2 = FBParams::real(&[0.6, 0.45], &[0.6, 0.45], 2.2).unwrap();
    assert!(rel(two.value, euler(&p2, &[-6.0, -9.0])) < 1e-6);
}

#[test]
fn auto_dispatch_routes() {
    let p = FBParams::real(&[0.3, 0.4], &[0.5, 0.6], 2.3).unwrap();
    assert_eq!(fb_auto(&p, &[-0.2, -0.3]).unwrap().method, Method::Series);
    assert_eq!(fb_auto(&p, &[-5.0, -9.0]).unwrap().method, Method::MellinBarnesContinuation);
    assert_eq!(fb_auto(&p, &[-1.0, -1.5]).unwrap().method, Method::MellinBarnesContour);
    let v = fb_auto(&p, &[0.0, -0.3]).unwrap().value;
    let g = gauss_2f1(c(0.4), c(0.6), c(2.3), c(-0.3)).unwrap().value;
    assert!(rel(v, g) < 1e-12);
    assert!(fb_auto(&p, &[0.3, -0.3]).is_err());
}

fn zp(z: f64, zprime: f64) -> ZPair {
    ZPair::new(c(z), c(zprime))
}

#[test]
fn f1_coincident_matches_explicit_formula() {
    let (z, zprime) = (1.2, 1.8);
    let y = -5.0;
    let args = FNArgs::unchecked(zp(z, zprime), vec![y], vec![y]).unwrap();
    let v = f_n(&args).unwrap().value;
    // three-term formula at c = (1 - z)(1 - z'), evaluated on the contour route
    let cc = (1.0 - z) * (1.0 - zprime);
    let f0 = mb(&FBParams::real(&[1.0 - zprime, -z], &[1.0 - z, -zprime], cc).unwrap(), &[y, y]);
    let f1 = mb(&FBParams::real(&[2.0 - zprime, -z], &[2.0 - z, -zprime], cc + 1.0).unwrap(), &[y, y]);
    let f2 = mb(&FBParams::real(&[1.0 - zprime, 1.0 - z], &[1.0 - z, 1.0 - zprime], cc + 1.0).unwrap(), &[y, y]);
    let expect = f0 + y * (f1 - z * zprime / ((1.0 - z) * (1.0 - zprime)) * f2);
    assert!(rel(v, expect) < 1e-6, "{v} {expect}");
}

#[test]
fn f1_off_diagonal_assembly_and_symmetry() {
    let pair = zp(1.2, 1.8);
    let (y1, y2) = (-4.0, -6.0);
    let args = FNArgs::unchecked(pair, vec![y1], vec![y2]).unwrap();
    let v = f_n(&args).unwrap().value;
    let y = [y1, y2];
    let direct = (y1 * cont(&args.params_for(0), &y) - y2 * cont(&args.params_for(1), &y)) / (y1 - y2);
    assert!(rel(v, direct) < 1e-8);
    // the numerator is skew under y' <-> y'', the quotient symmetric
    let swapped = f_n(&FNArgs::unchecked(pair, vec![y2], vec![y1]).unwrap()).unwrap().value;
    assert!(rel(v, swapped) < 1e-10);
    let num = |a: f64, b: f64| {
        let args = FNArgs::unchecked(pair, vec![a], vec![b]).unwrap();
        let y = [a, b];
        a * cont(&args.params_for(0), &y) - b * cont(&args.params_for(1), &y)
    };
    assert!(rel(num(y1, y2), -num(y2, y1)) < 1e-10);
}

#[test]
fn coincident_limit_is_continuous() {
    let pair = zp(-1.5, -1.8);
    let f = |yp: Vec<f64>, ypp: Vec<f64>| f_n(&FNArgs::unchecked(pair, yp, ypp).unwrap()).unwrap().value;
    let diag = f(vec![-5.0], vec![-5.0]);
    // f is symmetric about the diagonal, so Richardson on +-d removes d^2
    let off = |d: f64| f(vec![-5.0 + d], vec![-5.0 - d]);
    let extrap = (4.0 * off(0.01) - off(0.02)) / 3.0;
    assert!(rel(extrap, diag) < 1e-7, "{extrap} {diag}");
    let diag2 = f(vec![-6.0, -8.0], vec![-6.0, -8.0]);
    // one pair off the diagonal at a time
    let first = |d: f64| f(vec![-6.0 + d, -8.0], vec![-6.0 - d, -8.0]);
    let second = |d: f64| f(vec![-6.0, -8.0 + d], vec![-6.0, -8.0 - d]);
    for g in [&first as &dyn Fn(f64) -> Complex, &second] {
        let extrap = (4.0 * g(0.05) - g(0.1)) / 3.0;
        assert!(rel(extrap, diag2) < 2e-6, "{extrap} {diag2}");
    }
    // both pairs off: the fourfold difference loses digits, so use larger d
    let both = |d: f64| f(vec![-6.0 + d, -8.0 + d], vec![-6.0 - d, -8.0 - d]);
    let extrap = (4.0 * both(0.1) - both(0.2)) / 3.0;
    assert!(rel(extrap, diag2) < 1e-5, "{extrap} {diag2}");
}

#[test]
fn f_n_guards() {
    let pair = zp(1.2, 1.8);
    assert!(matches!(
        FNArgs::unchecked(pair, vec![-1.0; 4], vec![-2.0; 4]),
        Err(Error::SizeGuard { .. })
    ));
    assert!(matches!(FNArgs::unchecked(pair, vec![1.0], vec![-2.0]), Err(Error::DomainError(_))));
}

