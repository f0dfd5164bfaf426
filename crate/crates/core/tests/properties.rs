use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;

use kfree::continuation::{self, Order};
use kfree::counting::{self, Census, Convention};
use kfree::laurent;
use kfree::limits;
use kfree::zetacore::{self, ComplexX};

const X: u64 = 200_000;

fn census(k: u32) -> &'static Census {
    static CENSUSES: OnceLock<Vec<Census>> = OnceLock::new();
    &CENSUSES.get_or_init(|| (2..=6).map(|k| Census::new(k, X).unwrap()).collect())[(k - 2) as usize]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conventions(k in 2u32..=6, x in 0.0f64..(X as f64 - 1.0)) {
        let c = census(k);
        let l = counting::count_q(c, x, Convention::Left).unwrap();
        let r = counting::count_q(c, x, Convention::Right).unwrap();
        let a = counting::count_q(c, x, Convention::Average).unwrap();
        if x.fract() != 0.0 {
            prop_assert_eq!(l.q, r.q);
            prop_assert_eq!(a.q, r.q);
        }
        prop_assert!(a.q == l.q || (2.0 * a.q).fract() == 0.0);
        prop_assert!(r.q - l.q == 0.0 || r.q - l.q == 1.0);
        let rebuilt = (a.f + c.inv_zeta_dd().mul_f64(x)).to_f64();
        prop_assert!((rebuilt - a.q).abs() < 1e-9);
    }

    #[test]
    fn counts_grow_with_k(k in 2u32..=5, n in 1u64..X) {
        prop_assert!(census(k + 1).q_at(n) >= census(k).q_at(n));
    }

    #[test]
    fn sums_ignore_breakpoints(k in 2u32..=6, mut cuts in prop::collection::btree_set(10u64..X, 1..6)) {
        cuts.insert(X);
        let pts: Vec<u64> = cuts.into_iter().collect();
        let split = limits::wolf_limit_series(census(k), 1, &pts).unwrap();
        let whole = limits::wolf_limit_series(census(k), 1, &[X]).unwrap();
        prop_assert!((split.last().unwrap() - whole[0]).abs() < 1e-12);
    }

    #[test]
    fn recurrence_any_cutoff(k in 2u32..=6, xmax in 10u64..X, m in 1usize..=4) {
        let c = limits::cj_integrals(census(k), m, xmax).unwrap();
        let y = limits::ym_integral(census(k), m, xmax).unwrap().value;
        prop_assert!((y - (m as f64 * c[m - 1] + c[m])).abs() < 1e-10);
    }

    #[test]
    fn real_s_real_value(k in 2u32..=6, s in 0.3f64..4.0, x in 10u64..20_000) {
        prop_assume!((s - 1.0).abs() > 1e-6);
        let c = census(k);
        let b = continuation::continued_value(c, Complex64::new(s, 0.0), x, Order::Basic).unwrap();
        let r = continuation::continued_value(c, Complex64::new(s, 0.0), x, Order::Corrected).unwrap();
        prop_assert_eq!(b.value.im, 0.0);
        let f = c.q_at(x) as f64 - x as f64 * c.inv_zeta();
        let gap = b.value.re - r.value.re;
        prop_assert!((gap - f * (x as f64).powf(-s)).abs() < 1e-9 * (1.0 + gap.abs()));
    }

    #[test]
    fn log_grid_shape(lo in 1u64..1000, span in 1u64..1_000_000, per in 1u32..200) {
        let g = limits::log_grid(lo, lo + span, per);
        prop_assert!(g.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(*g.last().unwrap(), lo + span);
        prop_assert!(g[0] >= lo);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn contour_radius_independent(k in 2u32..=8, r in 0.3f64..0.6) {
        let a = laurent::extract_coeffs(k, 2, 30, r, 256).unwrap();
        let b = laurent::extract_coeffs(k, 2, 30, 0.5, 256).unwrap();
        for n in 0..=2 {
            prop_assert!(a.coeffs[n].agreement_digits(&b.coeffs[n]) > 25.0);
        }
        prop_assert!(a.residue.agreement_digits(&b.residue) > 28.0);
    }

    #[test]
    fn zeta_conjugate_symmetry(re in -3.0f64..4.0, im in 0.5f64..30.0) {
        let s = ComplexX::with_digits(20, re, im);
        let a = zetacore::zeta_em(&s, 20).unwrap();
        let b = zetacore::zeta_em(&s.conj(), 20).unwrap();
        let d = (&a.conj() - &b).abs().to_f64();
        prop_assert!(d <= 1e-18 * a.abs().to_f64().max(1.0));
    }
}
