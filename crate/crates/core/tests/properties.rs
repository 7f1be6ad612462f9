mod common;

use common::{brute_force_entropy, direct_eval, q, random_dist, random_expr, NAMES};
use iitk::cone::{decide, elemental_inequalities, verify_certificate, verify_witness, Derivability};
use iitk::dist::{kl_divergence, JointDist};
use iitk::expr::{canonicalize, parse_expr, LinearForm};
use iitk::families::{random_constrained, scan, Alphabets, FamilyId};
use iitk::profile::{entropy_profile, eval_form, members};
use iitk::transform::{adhesion, kl_report, SplitSpec};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn names(n: usize) -> Vec<String> {
    NAMES[..n].iter().map(|s| s.to_string()).collect()
}

fn form(text: &str, n: usize) -> LinearForm {
    canonicalize(&parse_expr(text).unwrap(), &names(n)).unwrap()
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(64)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn text_format_round_trips(seed: u64, n in 1usize..=4) {
        let d = random_dist(&mut rng(seed), n, 3);
        let text = d.to_text();
        let back = JointDist::parse(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back.alphabet_sizes(), d.alphabet_sizes());
        for (x, p) in d.atoms() {
            prop_assert_eq!(&back.mass(x), p);
        }
    }

    #[test]
    fn marginals_compose(seed: u64, outer in 1u32..16, inner in 1u32..16) {
        let d = random_dist(&mut rng(seed), 4, 3);
        let inner = inner & outer;
        prop_assume!(inner != 0);
        let pick = |m: u32| members(m).into_iter().map(|i| NAMES[i]).collect::<Vec<_>>();
        let direct = d.marginal(&pick(inner)).unwrap();
        let nested = d.marginal(&pick(outer)).unwrap().marginal(&pick(inner)).unwrap();
        prop_assert_eq!(nested.to_text(), direct.to_text());
        let twice = direct.marginal(&pick(inner)).unwrap();
        prop_assert_eq!(twice.to_text(), direct.to_text());
    }

    #[test]
    fn profile_matches_brute_force(seed: u64, n in 1usize..=4) {
        let d = random_dist(&mut rng(seed), n, 3);
        let v = entropy_profile(&d);
        for (mask, h) in v.iter() {
            let oracle = brute_force_entropy(&d, &members(mask));
            prop_assert!((h - oracle).abs() <= 1e-9, "mask {mask}: {h} vs {oracle}");
        }
        for e in elemental_inequalities(n).unwrap() {
            prop_assert!(eval_form(&v, &e).unwrap() >= -1e-9);
        }
    }

    #[test]
    fn chain_rule(seed: u64) {
        let d = random_dist(&mut rng(seed), 4, 3);
        let v = entropy_profile(&d);
        let joint = eval_form(&v, &form("H(A,B,C,D)", 4)).unwrap();
        let chain = eval_form(&v, &form("H(A) + H(B|A) + H(C|A,B) + H(D|A,B,C)", 4)).unwrap();
        prop_assert!((joint - chain).abs() <= 1e-12);
        let i = eval_form(&v, &form("I(A,B:C|D)", 4)).unwrap();
        let split = eval_form(&v, &form("I(A:C|D) + I(B:C|A,D)", 4)).unwrap();
        prop_assert!((i - split).abs() <= 1e-12);
    }

    #[test]
    fn canonical_form_agrees_with_direct_evaluation(seed: u64) {
        let mut r = rng(seed);
        let d = random_dist(&mut r, 4, 3);
        let e = random_expr(&mut r, &NAMES);
        prop_assume!(e.constant_part().is_zero());
        let f = canonicalize(&e, &names(4)).unwrap();
        let via_form = eval_form(&entropy_profile(&d), &f).unwrap();
        let direct = direct_eval(&e, &d);
        prop_assert!((via_form - direct).abs() <= 1e-9, "{via_form} vs {direct}");
    }

    #[test]
    fn canonicalize_is_linear(seed: u64, num in -6i64..=6, den in 1i64..=5) {
        let mut r = rng(seed);
        let a = random_expr(&mut r, &NAMES);
        let b = random_expr(&mut r, &NAMES);
        prop_assume!(a.constant_part().is_zero() && b.constant_part().is_zero());
        let k = q(num, den);
        let lhs = canonicalize(&a.plus(&b.scaled(&k)), &names(4)).unwrap();
        let fa = canonicalize(&a, &names(4)).unwrap();
        let fb = canonicalize(&b, &names(4)).unwrap();
        prop_assert_eq!(lhs, &fa + &(&fb * &k));
    }

    #[test]
    fn elemental_combinations_are_derivable(seed: u64, n in 2usize..=4) {
        let mut r = rng(seed);
        let elems = elemental_inequalities(n).unwrap();
        let constraint = elems[r.random_range(0..elems.len())].clone();
        let mut goal = LinearForm::zero(n);
        for e in &elems {
            if r.random_bool(0.2) {
                goal = &goal + &(e * &q(r.random_range(1..=5), r.random_range(1..=3)));
            }
        }
        goal = &goal + &(&constraint * &q(r.random_range(-4..=4), 1));
        prop_assume!(!goal.is_zero());
        match decide(&goal, std::slice::from_ref(&constraint)).unwrap() {
            Derivability::Derivable(c) => prop_assert!(verify_certificate(&c, &goal, &[constraint])),
            Derivability::NotDerivable(_) => prop_assert!(false, "combination reported underivable"),
        }
    }

    #[test]
    fn every_answer_verifies(seed: u64) {
        let mut r = rng(seed);
        let e = random_expr(&mut r, &NAMES[..3]);
        prop_assume!(e.constant_part().is_zero());
        let goal = canonicalize(&e, &names(3)).unwrap();
        prop_assume!(!goal.is_zero());
        match decide(&goal, &[]).unwrap() {
            Derivability::Derivable(c) => prop_assert!(verify_certificate(&c, &goal, &[])),
            Derivability::NotDerivable(w) => prop_assert!(verify_witness(&w, &goal, &[])),
        }
    }

    #[test]
    fn adhesion_keeps_block_marginals(seed: u64, over_mask in 0u32..4) {
        let d = random_dist(&mut rng(seed), 4, 3);
        let over: Vec<&str> = members(over_mask).into_iter().map(|i| NAMES[2 + i]).collect();
        let rest: Vec<&str> = ["C", "D"].into_iter().filter(|v| !over.contains(v)).collect();
        let mut left = vec!["A"];
        left.extend(rest);
        let split = SplitSpec::new(left.clone(), vec!["B"], over.clone());
        let t = adhesion(&d, &split).unwrap();
        let sum: BigRational = t.atoms().map(|(_, p)| p.clone()).sum();
        prop_assert_eq!(sum, q(1, 1));
        for block in [&left, &vec!["B"]] {
            let keep: Vec<&str> = block.iter().chain(&over).copied().collect();
            prop_assert_eq!(t.marginal(&keep).unwrap().to_text(), d.marginal(&keep).unwrap().to_text());
        }
        let cond = if over.is_empty() { String::new() } else { format!("|{}", over.join(",")) };
        let i = eval_form(&entropy_profile(&t), &form(&format!("I({}:B{cond})", left.join(",")), 4)).unwrap();
        prop_assert!(i.abs() <= 1e-9);
    }

    #[test]
    fn divergence_vanishes_only_on_equal_laws(seed: u64) {
        let mut r = rng(seed);
        let p = random_dist(&mut r, 2, 3);
        prop_assert_eq!(kl_divergence(p.mass_function(), p.mass_function()).unwrap(), 0.0);
        let q_ = random_dist(&mut r, 2, 3);
        prop_assume!(q_.alphabet_sizes() == p.alphabet_sizes() && q_.to_text() != p.to_text());
        prop_assert!(kl_divergence(p.mass_function(), q_.mass_function()).unwrap() > 0.0);
    }

    #[test]
    fn divergence_equals_slack_under_hypotheses(
        seed: u64, a in 1u32..=4, b in 1u32..=4, c in 1u32..=3, d in 1u32..=3,
    ) {
        prop_assume!(a >= c && b >= c);
        let dist = random_constrained(Alphabets::new(a, b, c, d), seed).unwrap();
        let k = kl_report(&dist).unwrap();
        prop_assert!(k.hat_subnormalized);
        prop_assert!((k.divergence - k.slack).abs() <= 1e-9, "{} vs {}", k.divergence, k.slack);
    }
}

#[test]
fn gaps_vary_continuously_along_the_grid() {
    let kappa = q(1, 1);
    let eps_min = q(1, 4);
    let max_jump = |points| {
        let g = scan(FamilyId::ZyA, &kappa, &eps_min, points).unwrap();
        g.windows(2)
            .map(|w| (w[1].gap.to_f64() - w[0].gap.to_f64()).abs())
            .fold(0.0, f64::max)
    };
    let coarse = max_jump(9);
    let fine = max_jump(65);
    assert!(fine < coarse / 2.0, "{fine} vs {coarse}");
}
