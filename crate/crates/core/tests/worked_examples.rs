use tropdiff_core::diffpoly::{derived_tropical_system, is_tropical_solution, ExponentMatrix};
use tropdiff_core::field::{angular_component, section_phi, FieldBackend, FieldElem};
use tropdiff_core::initial::initial_form;
use tropdiff_core::parser::parse_poly;
use tropdiff_core::radius::{radius_from_rule, radius_window_estimate, LogRadius, RadiusRule};
use tropdiff_core::series::{psi_trop_inverse, tropicalize_series, TropSeries};
use tropdiff_core::valuation::{v_p, v_p_factorial, NatValuation};
use tropdiff_core::verify::{
    exp_derived_closed_form, exp_equation, exp_ode, exp_solution_closed_form, perturbed_exp_solution,
    reproduce_exp_example, solve_linear,
};
use tropdiff_core::{q, qi, Trop2, TropNum, TropPoly1, TropDiffPoly};

fn xx3() -> ExponentMatrix {
    ExponentMatrix::var(0, 0).mul(&ExponentMatrix::var(0, 3))
}

fn running_series() -> TropSeries {
    TropSeries::from_sparse(NatValuation::PAdic(3), 10, [(1, qi(0)), (3, qi(1))])
}

#[test]
fn monomial_at_series_and_at_vector() {
    let s = running_series();
    let m = TropDiffPoly::new(1, [(xx3(), Trop2::new(qi(0), qi(0)))]);
    let r = m.eval_tropical(std::slice::from_ref(&s));
    assert_eq!(r.value, Trop2::new(qi(1), qi(2)));

    let b = psi_trop_inverse(&s);
    assert_eq!(&b[..5], &[TropNum::Inf, TropNum::new(qi(0)), TropNum::Inf, TropNum::new(qi(2)), TropNum::Inf]);
    let m1 = TropPoly1::new(1, [(xx3(), TropNum::new(qi(0)))]);
    assert_eq!(m1.eval(&[b[..4].to_vec()]).unwrap().value, TropNum::Inf);
}

#[test]
fn leading_terms_of_running_series() {
    let s = running_series();
    assert_eq!(s.phi_leading().value, Trop2::new(qi(1), qi(0)));
    assert_eq!(s.nth_diff(3).phi_leading().value, Trop2::new(qi(0), qi(2)));
    assert_eq!(s.trop_diff().coeff(0), &TropNum::new(qi(0)));
    assert_eq!(s.trop_diff().coeff(2), &TropNum::new(qi(2)));
}

#[test]
fn exponential_solution_coefficients() {
    for p in [2u64, 3, 5] {
        let n = 6 * p as usize;
        let s = tropicalize_series(&solve_linear(&exp_ode(p, n)));
        for k in 0..=n {
            let expected = if k % p as usize == 0 {
                let m = (k / p as usize) as u64;
                TropNum::new(q(m as i64, p as i64 - 1) - qi(v_p_factorial(m, p) as i64))
            } else {
                TropNum::Inf
            };
            assert_eq!(s.coeff(k), &expected, "p={p} k={k}");
        }
    }
    assert_eq!(exp_solution_closed_form(3, 6).coeff(3), &TropNum::new(q(1, 2)));
    assert_eq!(exp_solution_closed_form(2, 8).coeff(8), &TropNum::new(qi(1)));
}

#[test]
fn derived_equations_have_closed_forms() {
    for p in [2u64, 3, 5] {
        let f = exp_equation(p, 6 * p as usize);
        let system = derived_tropical_system(&f, 3 * p as usize).unwrap();
        for (n, g) in system.iter().enumerate() {
            assert_eq!(g, &exp_derived_closed_form(p, n as u64), "p={p} n={n}");
        }
    }
    let f = exp_equation(3, 18);
    assert_eq!(f.tropicalize().to_string(), "x' + (2, 3/2)*x");
    let d2 = f.nth_diff(2).unwrap();
    assert_eq!(d2.tropicalize().to_string(), "x''' + (2, 3/2)*x'' + (1, 3/2)*x' + (0, 3/2)*x");
    assert_eq!(v_p(9 * 8 / 2, 3), Some(2));
}

#[test]
fn perturbation_is_detected_at_order_zero() {
    let f = exp_equation(3, 18);
    let system = derived_tropical_system(&f, 9).unwrap();
    assert!(is_tropical_solution(&system, &[exp_solution_closed_form(3, 18)]).solves);
    let bad = perturbed_exp_solution(3, 18);
    assert_eq!(bad.coeff(3), &TropNum::new(q(3, 2)));
    let verdict = is_tropical_solution(&system, &[bad]);
    assert_eq!(verdict.first_failure(), Some(0));
    let r = &verdict.reports[0];
    assert_eq!(r.value, Trop2::new(qi(2), q(3, 2)));
}

#[test]
fn initial_form_and_coefficients() {
    let b = FieldBackend::Eisenstein { p: 3 };
    let f = parse_poly("x' - 3*zeta*t^2*x", b, 1, 18).unwrap();
    let form = initial_form(&f, &[exp_solution_closed_form(3, 18)]).unwrap();
    assert_eq!(form.poly.to_string(), "x' + x");
    let c = &FieldElem::from_int(b, -3) * &FieldElem::zeta(b).unwrap();
    assert!(angular_component(&c).unwrap().is_one());
    let phi = section_phi(&Trop2::new(qi(2), q(3, 2)), b).unwrap();
    assert_eq!(phi.t_exp, 2);
    assert_eq!(phi.coeff, c);
}

#[test]
fn radius_of_the_exponential() {
    for p in [2u64, 3, 5] {
        let rule = radius_from_rule(&RadiusRule::exponential(p)).unwrap();
        assert_eq!(rule.log_radius, LogRadius::Finite(qi(0)));
        let s = exp_solution_closed_form(p, 200);
        let est = radius_window_estimate(&s, 100).unwrap();
        let LogRadius::Finite(l) = est.log_radius else { panic!("finite estimate expected") };
        assert!(l >= qi(0) && l <= q(3, 20), "p={p} l={l}");
        assert_eq!(RadiusRule::exponential(p).series(NatValuation::PAdic(p), 200), s);
        let shifted = radius_window_estimate(&s.scale(&TropNum::new(qi(5))), 100).unwrap();
        let LogRadius::Finite(l2) = shifted.log_radius else { panic!() };
        assert!(l2 - l <= q(5, 100));
    }
}

#[test]
fn reproduction_runs() {
    for (p, n, m) in [(3, 18, 9), (2, 16, 8), (5, 30, 10)] {
        let r = reproduce_exp_example(p, n, m).unwrap();
        assert!(r.all_passed, "{}", r.render_text());
    }
}
