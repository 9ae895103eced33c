//! Acceptance criteria 1–12. Each test prints one `criterion N PASS|FAIL`
//! line with its sub-checks; reference values are the printed digits of the
//! published tables and series.

mod common;

use std::sync::OnceLock;

use common::{diff, level_pair, sci, weak, Criterion, Printed, REF_BITS};
use cubic_resum::cli;
use cubic_resum::contfrac::{calibrate_gamma, cf_energy, cf_eval, cf_from_series, weak_cf, Tail};
use cubic_resum::odm::{invert_mapping, saddle_constants, MappingSpec, MappingTag, OdmEngine, RhoMode, RhoSchedule};
use cubic_resum::pade::pade;
use cubic_resum::perturbation::{appendix_c_strong_form, large_order_ratio, weak_coefficients, HamiltonianConvention, WeakSeries};
use cubic_resum::series::{binomial_pow, PowerSeries};
use cubic_resum::strong::{extract_strong_coeffs, StrongEstimate};
use cubic_resum::{BigComplex, Precision};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rug::ops::Pow;
use rug::{Float, Rational};

/// Exact decimal point on the real axis (`21.6` is not representable as `f64`).
fn real(x: f64, p: Precision) -> BigComplex {
    let scaled = (x * 10.0).round() as i64;
    assert_eq!(scaled as f64 / 10.0, x);
    BigComplex::from_real(p.ratio(scaled, 10))
}

fn rational_point(num: i64, den: i64, p: Precision) -> BigComplex {
    BigComplex::from_real(p.ratio(num, den))
}

/// Engine plus `ρ_K` schedule for one mapping at `K = k`.
struct Summer {
    engine: OdmEngine,
    schedule: RhoSchedule,
}

fn summer(mapping: MappingSpec, k: usize, orders: std::ops::RangeInclusive<usize>) -> Summer {
    let p = Precision::for_order(k);
    let engine = OdmEngine::new(&weak(0, k + 1), &mapping, k, p).unwrap();
    let mode = if mapping.tag == MappingTag::C { RhoMode::RootsOfDerivative } else { RhoMode::Fitted };
    let schedule = RhoSchedule::build(engine.polys(), &mapping, mode, orders, p).unwrap();
    Summer { engine, schedule }
}

fn c150() -> &'static Summer {
    static CELL: OnceLock<Summer> = OnceLock::new();
    CELL.get_or_init(|| summer(MappingSpec::c(), 150, 150..=150))
}

fn a150() -> &'static Summer {
    static CELL: OnceLock<Summer> = OnceLock::new();
    CELL.get_or_init(|| summer(MappingSpec::a(), 150, 80..=150))
}

// ---------------------------------------------------------------------------
// Rayleigh–Schrödinger oracle
// ---------------------------------------------------------------------------

/// Exact RS corrections `e_0..e_orders` in powers of `ε` for `H_0 + ε X³`,
/// `X = a + a†`, on the unnormalized states `u_n = (a†)^n |0⟩` where
/// `(X v)_m = v_{m-1} + (m+1) v_{m+1}`; the matrix is truncated to `dim` states.
fn rayleigh_schrodinger(n: usize, orders: usize, dim: usize) -> Vec<Rational> {
    let pad = dim + 3;
    let apply_x = |v: &[Rational]| -> Vec<Rational> {
        (0..pad)
            .map(|m| {
                let mut acc = Rational::new();
                if m >= 1 {
                    acc += &v[m - 1];
                }
                if m + 1 < pad {
                    acc += Rational::from(m as u64 + 1) * &v[m + 1];
                }
                acc
            })
            .collect()
    };
    let v: Vec<Vec<Rational>> = (0..dim)
        .map(|j| {
            let mut e = vec![Rational::new(); pad];
            e[j] = Rational::from(1);
            apply_x(&apply_x(&apply_x(&e)))[..dim].to_vec()
        })
        .collect();
    let mul = |x: &[Rational]| -> Vec<Rational> { (0..dim).map(|i| (0..dim).fold(Rational::new(), |acc, j| acc + Rational::from(&v[j][i] * &x[j]))).collect() };
    let mut psi = vec![vec![Rational::new(); dim]];
    psi[0][n] = Rational::from(1);
    let mut e = vec![Rational::from((2 * n as i64 + 1, 2))];
    for k in 1..=orders {
        let vpsi = mul(&psi[k - 1]);
        e.push(vpsi[n].clone());
        let mut next = vec![Rational::new(); dim];
        for m in (0..dim).filter(|&m| m != n) {
            let mut rhs = vpsi[m].clone();
            for j in 1..=k {
                rhs -= Rational::from(&e[j] * &psi[k - j][m]);
            }
            next[m] = rhs / Rational::from(n as i64 - m as i64);
        }
        psi.push(next);
    }
    e
}

#[test]
fn criterion_01_exact_coefficients() {
    let mut c = Criterion::new(1, "exact weak coefficients and RS oracle");
    let s = weak(0, 2);
    let expect = [Rational::from((1, 2)), Rational::from((11, 288)), Rational::from((-930, 288 * 288))];
    c.check(s.coeffs == expect, format!("E_0..E_2 = {}, {}, {}", s.coeffs[0], s.coeffs[1], s.coeffs[2]));
    // x = X/√2 turns i√g x³/6 into ε c X³ with ε = √g and c² = -1/288
    let c2 = Rational::from((-1, 288));
    for level in 0..=2usize {
        let max_l = 6;
        let e = rayleigh_schrodinger(level, 2 * max_l, 6 * max_l + level + 5);
        let series = weak_coefficients(level as u32, max_l, HamiltonianConvention::PaperMain);
        let mut factor = Rational::from(1);
        let mut ok = (1..=2 * max_l).step_by(2).all(|k| e[k] == 0);
        for l in 0..=max_l {
            let expected = if l == 0 { e[0].clone() } else { Rational::from(&e[2 * l] * &factor) };
            ok &= series.coeffs[l] == expected;
            factor *= &c2;
        }
        c.check(ok, format!("N = {level}, L <= {max_l}: exact match, odd orders vanish"));
    }
    c.finish();
}

#[test]
fn criterion_02_large_order_law() {
    let mut c = Criterion::new(2, "large-order behaviour");
    let p = Precision::digits(60).unwrap();
    let series = weak(0, 80);
    let r = large_order_ratio(&series, 80, p).unwrap();
    let dev = Float::with_val(p.bits(), &r - 1u32).abs();
    c.check(dev < 0.05, format!("E_80 / asymptotic = {:.6}", r.to_f64()));
    let full: Vec<WeakSeries> = vec![weak(0, common::WEAK_ORDER), weak(1, common::WEAK_ORDER), weak_coefficients(2, 80, HamiltonianConvention::PaperMain)];
    for s in &full {
        c.check(s.sign_violation().is_none(), format!("N = {}: signs (-1)^(L+1) through L = {}", s.level, s.order()));
    }
    c.finish();
}

#[test]
fn criterion_03_saddle_constants() {
    let mut c = Criterion::new(3, "saddle constants");
    let p = Precision::digits(40).unwrap();
    let table = [
        (MappingSpec::a(), "3.811522", "-0.259901", "10.23"),
        (MappingSpec::b(), "4.445762", "-0.216262", "3.40"),
        (MappingSpec::c(), "4.895690", "-0.189645", "3.53"),
    ];
    for (m, mu, lam, c2) in table {
        let s = saddle_constants(&m, p);
        for (name, ours, printed) in [("mu_c", &s.mu_c, mu), ("lambda_c", &s.lambda_c, lam), ("C2", &s.c2, c2)] {
            let r = Printed::parse(printed);
            c.close(&format!("({}) {name} = {:.7}", m.tag, ours.to_f64()), ours, &r.value, &r.digit_tolerance());
        }
    }
    c.finish();
}

#[test]
fn criterion_04_table1_order_55() {
    let mut c = Criterion::new(4, "Table 1 at K = 55");
    let p = Precision::for_order(55);
    let sc = summer(MappingSpec::c(), 55, 55..=55);
    let v = sc.engine.sum(&sc.schedule, 55, &real(0.5, p)).unwrap().value;
    let r = Printed::parse("0.51689 17642 53171 97821 11588 9");
    c.close("(c) g = 0.5", &v.re, &r.value, &Float::with_val(REF_BITS, 10).pow(-25));
    let sa = summer(MappingSpec::a(), 55, 26..=55);
    let (acc, _) = sa.engine.sum_accelerated(&sa.schedule, 26, 55, &rational_point(108, 5, p)).unwrap();
    let r = Printed::parse("0.73340 99204 85427 96(4)");
    c.close("(a) + Aitken g = 21.6", &acc.value.re, &r.value, &r.digit_tolerance());
    c.finish();
}

#[test]
fn criterion_05_order_150_weak_coupling() {
    let mut c = Criterion::new(5, "weak coupling at K = 150");
    let p = Precision::for_order(150);
    let s = c150();
    let v = s.engine.sum(&s.schedule, 150, &real(1.0, p)).unwrap().value;
    let r = Printed::parse("0.53078 17593 04176 67113 55618 18032 22595");
    c.close("(c) g = 1", &v.re, &r.value, &Float::with_val(REF_BITS, 10).pow(-34));
    let a = a150();
    let (acc, _) = a.engine.sum_accelerated(&a.schedule, 80, 150, &rational_point(288, 49, p)).unwrap();
    let r = Printed::parse("0.61273 81063 88984 12476 20895 52(6)");
    c.close("(a) + Aitken g = 288/49", &acc.value.re, &r.value, &r.digit_tolerance());
    c.finish();
}

#[test]
fn criterion_06_negative_axis() {
    let mut c = Criterion::new(6, "negative axis at K = 150");
    let p = Precision::for_order(150);
    let a = a150();
    let (acc, in_sector) = a.engine.sum_accelerated(&a.schedule, 80, 150, &real(-1.0, p)).unwrap();
    c.check(in_sector, "g = -1 stays on the principal sheet");
    let re = Printed::parse("0.44252 00451 24688(4)");
    let im = Printed::parse("0.01551 79258 2059(4)");
    c.close("(a) Re E(-1)", &acc.value.re, &re.value, &re.digit_tolerance());
    c.close("(a) Im E(-1)", &acc.value.im, &im.value, &im.digit_tolerance());
    let s = c150();
    for g in [-0.5, -1.0, -5.0, -21.6] {
        let v = s.engine.sum(&s.schedule, 150, &real(g, p)).unwrap().value;
        c.check(v.im > 0, format!("(c) Im E({g} + i0) = {:.6e}", v.im.to_f64()));
    }
    c.finish();
}

#[test]
fn criterion_07_strong_series() {
    let mut c = Criterion::new(7, "strong-coupling coefficients");
    let pair = level_pair(150);
    let list = [
        "0.37254 57904 52207 09825 06011(5)",
        "0.36753 58055 44193 60353 04(6)",
        "0.14378 77004 15066 51583 39(0)",
        "-0.02658 61056 27059 38713 52(9)",
        "0.00988 71650 79200 88729 05(5)",
        "-0.00461 00192 93623 15160 2(3)",
    ];
    for (n, text) in list.iter().enumerate() {
        let r = Printed::parse(text);
        c.close(&format!("E^qqc_{n}"), &pair.ground.coeffs[n], &r.value, &r.scaled_uncertainty(10));
    }
    let sb = summer(MappingSpec::b(), 150, 148..=150);
    let b = extract_strong_coeffs(&sb.engine, &sb.schedule, 150, 2, 0, StrongEstimate::Plain).unwrap();
    let r = Printed::parse("0.37254578");
    c.close("(b) E^qqc_0", &b.coeffs[0], &r.value, &Float::with_val(REF_BITS, 6e-8));
    c.finish();
}

#[test]
fn criterion_08_level_merging() {
    let mut c = Criterion::new(8, "level merging");
    let pair = level_pair(150);
    let m = &pair.merge;
    c.close(&format!("chi_c = {} (+- {})", m.chi_c.to_string_radix(10, Some(13)), sci(&m.chi_c_uncertainty)), &m.chi_c, &Printed::parse("-1.3510415966").value, &Float::with_val(REF_BITS, 1e-6));
    c.close("E^qqc(chi_c)", &m.energy_at_chi_c, &Printed::parse("0.41330579447").value, &Float::with_val(REF_BITS, 1e-8));
    let bits = m.chi_c.prec();
    let approx = pade(&m.delta.coeffs, m.pade_orders.0, m.pade_orders.1).unwrap();
    let at = |d: f64| approx.eval(&Float::with_val(bits, &m.chi_c + d)).abs().to_f64().ln();
    let mut exps = Vec::new();
    for side in [1.0, -1.0] {
        let (d1, d2) = (1e-4 * side, 1e-2 * side);
        exps.push((at(d2) - at(d1)) / (d2.abs() / d1.abs()).ln());
    }
    let mean = exps.iter().sum::<f64>() / exps.len() as f64;
    c.check((mean - 1.0).abs() <= 0.1, format!("local exponent of Delta01 near chi_c = {mean:.4}"));
    c.check(m.slope.to_f64().abs() > 0.01, format!("Delta01'(chi_c) = {:.6}", m.slope.to_f64()));
    c.finish();
}

#[test]
fn criterion_09_continued_fraction() {
    let mut c = Criterion::new(9, "strong continued fraction (K = 250, p_max = 25)");
    let pair = level_pair(250);
    let cf = cf_from_series(&pair.ground.coeffs).unwrap();
    let table5 = [
        "0.39122 09320 72635 98993",
        "0.18489 83296 22869 56168",
        "0.18699 38616 55333 76095",
        "0.18768 40668 91881 09149",
        "0.18519 10686 95077 9010(9)",
        "0.18477 49761 41944 774(1)",
        "0.18470 22248 17836 84(5)",
        "0.18507 38286 03338 2(9)",
    ];
    for (i, text) in table5.iter().enumerate() {
        let r = Printed::parse(text);
        c.close(&format!("a_{}", i + 1), cf.a(i + 1), &r.value, &r.digit_tolerance());
    }
    let first_bad = (1..=27).find(|&p| p > cf.depth() || *cf.a(p) <= 0);
    c.check(first_bad.is_none(), match first_bad {
        None => "a_p > 0 for p <= 27".to_string(),
        Some(p) => format!("a_p > 0 for p <= 27: first failure at p = {p}"),
    });

    let p_max = 25;
    let t = calibrate_gamma(&cf, p_max).unwrap().tail();
    let prec = Precision::for_order(250);
    let e_m1 = cf_eval(&cf, &real(-1.0, prec), p_max, &t).unwrap();
    c.close("E^qqc(-1)", &e_m1.re, &Printed::parse("0.19575 08157 16171 9").value, &Float::with_val(REF_BITS, 1e-14));

    let positive = [(0.5, "0.51689 17642 53171 97821 1(0)"), (1.0, "0.53078 17593 04176 67113 55(7)"), (5.0, "0.60168 39332 05191 96158 936(0)"), (21.6, "0.73340 99204 85427 96459 240(3)")];
    for (g, text) in positive {
        let v = cf_energy(&cf, &real(g, prec), p_max, &t).unwrap();
        let r = Printed::parse(text);
        c.close(&format!("Table 2 g = {g}"), &v.re, &r.value, &r.digit_tolerance());
    }
    let negative = [
        (-0.5, "0.47642 74083 271(9)", "0.00026 66618 824(6)"),
        (-1.0, "0.44252 00451 24688 3662(3)", "0.01551 79258 20594 2572(2)"),
        (-5.0, "0.43389 06678 10363 12813 116(9)", "0.18385 80861 86171 17289 33(1)"),
        (-21.6, "0.55405 35184 61013 80317 898(0)", "0.35140 17775 93691 93624 45(1)"),
    ];
    for (g, re, im) in negative {
        let v = cf_energy(&cf, &real(g, prec), p_max, &t).unwrap();
        let (re, im) = (Printed::parse(re), Printed::parse(im));
        c.close(&format!("Table 3 g = {g}"), &v.re, &re.value, &re.digit_tolerance());
        c.close(&format!("Table 4 g = {g}"), &v.im, &im.value, &im.digit_tolerance());
    }
    let bits = prec.bits();
    let neg_pow = |base: (i64, i64), e: (i32, i32)| -> BigComplex {
        let x = Float::with_val(bits, Float::with_val(bits, Float::with_val(bits, Rational::from(base)).ln() * Float::with_val(bits, Rational::from(e))).exp());
        BigComplex::from_real(-x)
    };
    let v = cf_eval(&cf, &neg_pow((2, 1), (4, 5)), p_max, &t).unwrap();
    let (re, im) = (Printed::parse("0.3898(5)"), Printed::parse("-0.3644(3)"));
    c.close("Table 6 chi = -2^(4/5) Re", &v.re, &re.value, &re.digit_tolerance());
    c.close("Table 6 chi = -2^(4/5) Im", &v.im, &im.value, &im.digit_tolerance());
    for (base, text) in [((5, 1), "0.28269 92581 93274 90989 90(1)"), ((108, 5), "0.34215 80186 19340 42140 767(6)")] {
        let v = cf_eval(&cf, &neg_pow(base, (-4, 5)), p_max, &t).unwrap();
        let r = Printed::parse(text);
        c.close(&format!("Table 6 chi = -({}/{})^(-4/5)", base.0, base.1), &v.re, &r.value, &r.digit_tolerance());
    }

    let tail = calibrate_gamma(&cf, 20).unwrap();
    c.close(&format!("gamma_20 = {:.7}", tail.gamma.to_f64()), &tail.gamma, &Printed::parse("0.1850239").value, &Float::with_val(REF_BITS, 1e-6));
    let limit = Printed::parse("0.185042").value;
    let gammas: Vec<(usize, f64)> = (17..=25).filter_map(|p| calibrate_gamma(&cf, p).ok().map(|s| (p, s.gamma.to_f64()))).collect();
    let worst = gammas.iter().map(|(_, g)| (g - limit.to_f64()).abs()).fold(0.0, f64::max);
    c.check(gammas.len() == 9 && worst <= 1e-4, format!("gamma_17..25 within 1e-4 of 0.185042: {gammas:?}"));
    c.finish();
}

#[test]
fn criterion_10_weak_continued_fraction() {
    let mut c = Criterion::new(10, "weak-coupling continued fraction");
    let prec = Precision::for_order(150);
    let cf = weak_cf(&weak(0, 150), prec).unwrap();
    let min = cf.coeffs.iter().map(|k| k.to_f64()).fold(f64::INFINITY, f64::min);
    c.check(cf.breakdown.is_none() && min > 0.0, format!("all {} kappa_p > 0 (min {min:.4})", cf.depth()));
    let fit = (10.0 * 100.0 + 3.0) / 96.0;
    let k100 = cf.a(100).to_f64();
    c.check(((k100 - fit) / fit).abs() <= 0.05, format!("kappa_100 = {k100:.4} vs (10p + 3(-1)^p)/96 = {fit:.4}"));
    let exact = Printed::parse("0.53078 17593 04176 67113 55618 18032 22595 1(1)").value;
    let one = real(1.0, prec);
    let err = |p: usize| diff(&cf_eval(&cf, &one, p, &Tail::Unit).unwrap().re, &exact).to_f64();
    let (e100, e150) = (err(100), err(150));
    let constant = -(e150.ln() - e100.ln()) / (150f64.sqrt() - 100f64.sqrt());
    let target = 2.0 * (48.0f64 / 5.0).sqrt();
    c.check(((constant - target) / target).abs() <= 0.15, format!("error scaling C = {constant:.3} vs {target:.3} (errors {e100:.2e}, {e150:.2e})"));
    c.finish();
}

#[test]
fn criterion_11_appendix_c_identity() {
    let mut c = Criterion::new(11, "shifted strong-coupling form");
    let s = appendix_c_strong_form(HamiltonianConvention::AppendixC).unwrap();
    c.check(s.linear == Rational::from((-1, 12)), format!("linear coefficient {} (expected -1/12)", s.linear));
    c.check(s.constant == Rational::from((1, 180)), format!("constant shift {} (expected 1/180)", s.constant));
    c.check(s.universal_l3 == Rational::from((1, 108)), format!("L_N,3 = {} (expected 1/108)", s.universal_l3));
    c.finish();
}

// ---------------------------------------------------------------------------
// Criterion 12: properties with randomized inputs and no published numbers
// ---------------------------------------------------------------------------

fn run_property<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

#[test]
fn criterion_12_property_suite() {
    let mut c = Criterion::new(12, "property suite");

    let inversion = run_property(64, (0usize..3, -2.0f64..3.0, -3.1f64..3.1, 0.05f64..0.8), |(which, log_r, theta, rho)| {
        let p = Precision::digits(50).unwrap();
        let m = [MappingSpec::a(), MappingSpec::b(), MappingSpec::c()][which].clone();
        let rho = p.f64(rho);
        let g = BigComplex::from_polar(&p.f64(10f64.powf(log_r)), &p.f64(theta));
        let inv = invert_mapping(&g, &rho, &m, p).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let rel = Float::with_val(p.bits(), m.zeta(&inv.lambda).scale(&rho).sub(&g).abs() / g.abs()).to_f64();
        prop_assert!(rel < 1e-40, "relative residual {rel:e}");
        Ok(())
    });
    c.check(inversion.is_ok(), format!("mapping inversion round trips {}", inversion.err().unwrap_or_default()));

    let small = || (-30i64..=30, 1i64..=7).prop_map(|(n, d)| Rational::from((n, d)));
    let reversion = run_property(64, (small().prop_filter("nonzero", |r| *r != 0), prop::collection::vec(small(), 1..7)), |(lead, rest)| {
        let mut coeffs = vec![Rational::new(), lead];
        coeffs.extend(rest);
        let f = PowerSeries::new(coeffs);
        let id = PowerSeries::variable(&Rational::new(), f.order());
        let r = f.reverse().map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(f.compose(&r).unwrap(), id.clone());
        prop_assert_eq!(r.compose(&f).unwrap(), id);
        Ok(())
    });
    c.check(reversion.is_ok(), format!("reversion/composition identity {}", reversion.err().unwrap_or_default()));

    let binomial = run_property(64, (small(), small(), 0usize..9), |(e1, e2, k)| {
        prop_assert_eq!(binomial_pow(&e1, k).mul(&binomial_pow(&e2, k)), binomial_pow(&Rational::from(&e1 + &e2), k));
        Ok(())
    });
    c.check(binomial.is_ok(), format!("binomial exponents add {}", binomial.err().unwrap_or_default()));

    let pade_eq = run_property(48, (prop::sample::subsequence((1i64..=8).collect::<Vec<_>>(), 3..6), prop::collection::vec(1i64..9, 6), 1usize..4, 0.01f64..2.0), |(nodes, w, n, x)| {
        let p = Precision::digits(60).unwrap();
        // 1 + x Σ w_i/(1 + t_i x)
        let coeffs: Vec<Rational> = (0..=2 * n)
            .map(|k| if k == 0 { Rational::from(1) } else { nodes.iter().zip(&w).fold(Rational::new(), |acc, (&t, &wi)| acc + Rational::from(wi) * Rational::from(-t).pow(k as i32 - 1)) })
            .collect();
        let series = WeakSeries { level: 0, coeffs, convention: HamiltonianConvention::PaperMain };
        let cf = weak_cf(&series, p).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let xv = p.f64(x);
        let via_cf = cf_eval(&cf, &BigComplex::from_real(xv.clone()), 2 * n, &Tail::Unit).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let via_pade = pade(&series.to_floats(p), n, n).map_err(|e| TestCaseError::fail(e.to_string()))?.eval(&xv);
        let rel = Float::with_val(p.bits(), (via_cf.re - &via_pade) / &via_pade).abs().to_f64();
        prop_assert!(rel < 1e-40, "relative difference {rel:e}");
        Ok(())
    });
    c.check(pade_eq.is_ok(), format!("depth-2n fraction equals [n/n] Pade {}", pade_eq.err().unwrap_or_default()));

    let k = 20;
    let summers: Vec<Summer> = [MappingSpec::a(), MappingSpec::b(), MappingSpec::c()].into_iter().map(|m| summer(m, k, k..=k)).collect();
    let positivity = run_property(48, (0usize..3, -2.0f64..3.0), |(which, log_g)| {
        let s = &summers[which];
        let g = BigComplex::from_real(s.engine.prec().f64(10f64.powf(log_g)));
        let a = s.engine.sum(&s.schedule, k, &g).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(a.value.im.is_zero() || a.value.im.to_f64().abs() < 1e-60);
        prop_assert!(a.value.re > 0);
        Ok(())
    });
    c.check(positivity.is_ok(), format!("real positive approximants for g > 0 {}", positivity.err().unwrap_or_default()));

    let dir = common::cache_dir().join("cli");
    let d = dir.to_str().unwrap().to_string();
    let determinism = run_property(8, (0.05f64..30.0, -3.0f64..3.0, 0usize..3), |(r, arg, fmt)| {
        let point = format!("{},{}", r * arg.cos(), r * arg.sin());
        let out = ["csv", "json", "plot-data"][fmt];
        let args = ["cubic-resum", "sum", "--order", "14", "--method", "a", "--method", "c", "--g", point.as_str(), "--out", out, "--cache-dir", d.as_str()];
        let first = cli::run(args);
        prop_assert!(first.code != 1, "{}", first.stderr);
        prop_assert_eq!(first, cli::run(args));
        Ok(())
    });
    c.check(determinism.is_ok(), format!("byte-identical CLI output {}", determinism.err().unwrap_or_default()));
    c.finish();
}
