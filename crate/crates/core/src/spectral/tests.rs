use num_complex::Complex64;

use super::*;
use crate::elliptic::jacobi_real;
use crate::frobenius::{potential, solve, LameParams};

fn lame(m: u32, l: u32, ksq: f64) -> (LameParams, impl Fn(f64) -> f64) {
    let p = LameParams::new(m, l, ksq).unwrap();
    (p, move |x| potential(x, &p))
}

#[test]
fn dn_cubed_is_the_ground_state() {
    let (p, v) = lame(3, 2, 0.9);
    let k = p.modulus().big_k();
    let dn3 = |x: f64| Ok(Complex64::new(jacobi_real(x, p.modulus()).2.powi(3), 0.0));
    let g = Grid::new(-2.0 * k, 2.0 * k, 801).unwrap();
    let r = ode_residual(&dn3, &v, 8.1, &g).unwrap();
    assert!(r.max_relative < 1e-7, "{}", r.max_relative);

    let g = Grid::new(0.0, 2.0 * k, 201).unwrap();
    let t = integrate_schrodinger(&v, 8.1, 1.0, 0.0, &g, k / 2000.0).unwrap();
    for (i, x) in g.iter().enumerate() {
        assert!((t.value(i) - jacobi_real(x, p.modulus()).2.powi(3)).abs() < 1e-7);
    }
}

#[test]
fn discriminant_at_reference_energies() {
    let (p, v) = lame(3, 2, 0.9);
    let t = p.period();
    assert!((hill_discriminant(&v, 8.1, t).unwrap() - 2.0).abs() < 1e-4);
    assert!(hill_discriminant(&v, 10.0, t).unwrap().abs() > 2.0);
    assert!(hill_discriminant(&v, 10.1, t).unwrap().abs() > 2.0);
}

#[test]
fn integration_tracks_closed_form() {
    let (p, v) = lame(3, 2, 0.9);
    let s = solve(&p, 10.0).unwrap();
    let k = p.modulus().big_k();
    let j = s.plus.jet(0.0).unwrap();
    let g = Grid::new(0.0, 4.0 * k, 401).unwrap();
    let t = integrate_schrodinger(&v, 10.0, j.v, j.d1, &g, k / 2000.0).unwrap();
    for (i, x) in g.iter().enumerate() {
        let exact = s.plus.evaluate(x).unwrap();
        assert!((t.value(i) - exact).norm() < 1e-6 * exact.norm().max(1.0), "x = {x}");
    }
}

#[test]
fn classical_lame_edges() {
    let (p, v) = lame(1, 0, 0.5);
    let (b, _) = band_edges(&v, (0.0, 6.0), p.period(), 5e-4).unwrap();
    for (got, want) in b.edges.iter().zip([0.5, 1.0, 1.5]) {
        assert!((got - want).abs() < 5e-4, "{got} vs {want}");
    }
    assert_eq!(b.gaps.len(), 1);
}
