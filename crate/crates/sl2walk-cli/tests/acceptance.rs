//! Acceptance gate for the whole workspace: one test per numbered check,
//! each printing a single `[criterion N] PASS/FAIL` line with the measured
//! quantities. Checks 8i and 9 encode fixed empirical thresholds that the
//! exact distribution of pair offsets does not meet; they run faithfully,
//! print their per-offset diagnostics, and are expected to fail.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive};

use sl2walk::density::{
    coprime_pair_count, euler_product, realize_interval, shared, tail_condition,
    zeta2_reciprocal_bracket,
};
use sl2walk::diameter::{
    ball_growth, digit_expansion, exact_diameter, full_witness, line_witness,
    pair_admits_witnesses, pn_cover_time,
};
use sl2walk::field::{centered_residue, gcd, is_prime, PrimeContext};
use sl2walk::gram::{
    anisotropic_count, anisotropic_count_oracle, fiber_count_closed, fiber_histogram, fiber_size,
    fiber_size_oracle, SymMatrix2,
};
use sl2walk::rng::CounterRng;
use sl2walk::sl2::{bracket, gram_triple, Sl2Element};
use sl2walk::spectral::{
    bound_upper, eigenvalues, limiting, minimal_norm, mixing_k_star, sigma_fourier, tv,
    witness_lower, SpectralError,
};
use sl2walk::walk::{empirical, evolve, lift, reduce, Parity, WalkParams};
use sl2walk_cli::{run_diameter, run_precutoff, run_simulate, run_uniform_prob, ExperimentConfig};

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn rand_element(rng: &mut CounterRng, p: u64) -> Sl2Element {
    let x11 = rng.below(p);
    let x12 = rng.below(p);
    let x21 = rng.below(p);
    Sl2Element::new(p, x11, x12, x21)
}

fn sample_reduced(ctx: &PrimeContext, rng: &mut CounterRng) -> (Sl2Element, Sl2Element, WalkParams) {
    loop {
        let a = rand_element(rng, ctx.p);
        let b = rand_element(rng, ctx.p);
        if let Ok(params) = reduce(ctx, &a, &b) {
            return (a, b, params);
        }
    }
}

fn random_prime(rng: &mut CounterRng, lo: u64, hi: u64) -> u64 {
    loop {
        let candidate = (lo + rng.below(hi - lo + 1)) | 1;
        if candidate <= hi && is_prime(candidate) {
            return candidate;
        }
    }
}

/// The fixed 100-pair population at p = 1009 shared by checks 8i-8iii.
fn pairs_1009() -> (PrimeContext, Vec<WalkParams>) {
    let ctx = PrimeContext::new(1009).unwrap();
    let params = (0..100)
        .map(|trial| {
            let mut rng = CounterRng::new(1, trial);
            sample_reduced(&ctx, &mut rng).2
        })
        .collect();
    (ctx, params)
}

fn exact_tv(params: &WalkParams, k: u64) -> f64 {
    tv(&sigma_fourier(params, k), &limiting(params, k)).unwrap()
}

#[test]
fn criterion_01_double_bracket_folds_back_exactly() {
    let mut rng = CounterRng::new(0xacce_0001, 0);
    let mut failures = 0u64;
    for _ in 0..10_000 {
        let p = random_prime(&mut rng, 3, 1_000_000);
        let a = rand_element(&mut rng, p);
        let b = rand_element(&mut rng, p);
        let x0 = bracket(&a, &b).expect("same modulus");
        let lhs = bracket(&x0, &b).expect("same modulus");
        let gt = gram_triple(&a, &b).expect("same modulus");
        let rhs = a.scale(gt.gamma) - b.scale(gt.alpha);
        if lhs != rhs {
            failures += 1;
        }
    }
    let pass = failures == 0;
    println!(
        "[criterion 1] {} — [[A,B],B] = 2<B,B>A - 2<A,B>B on 10000 random pairs, {} failures",
        verdict(pass),
        failures
    );
    assert!(pass);
}

#[test]
fn criterion_02_fiber_sizes_match_the_enumeration_oracle() {
    let mut checked = 0u64;
    for p in [3u64, 5, 7, 11] {
        let ctx = PrimeContext::new(p).unwrap();
        let hist = fiber_histogram(&ctx).unwrap();
        let mut total = 0u64;
        let mut spot = CounterRng::new(0xacce_0002, p);
        for x11 in 0..p {
            for x12 in 0..p {
                for x22 in 0..p {
                    let x = SymMatrix2::new(x11, x12, x22);
                    let formula = fiber_size(&ctx, &x);
                    let idx = ((x11 * p + x12) * p + x22) as usize;
                    assert_eq!(formula, hist[idx], "p={p} X=({x11},{x12},{x22})");
                    total += formula;
                    checked += 1;
                }
            }
        }
        assert_eq!(total, p.pow(6), "fiber sizes must partition all pairs at p={p}");
        // The single-matrix oracle entry point agrees with the histogram.
        for _ in 0..3 {
            let x = SymMatrix2::new(spot.below(p), spot.below(p), spot.below(p));
            assert_eq!(fiber_size_oracle(&ctx, &x).unwrap(), fiber_size(&ctx, &x));
        }
    }
    println!(
        "[criterion 2] PASS — closed fiber sizes equal the full-enumeration oracle on {checked} \
         matrices across p in {{3,5,7,11}}, sums exactly p^6"
    );
}

#[test]
fn criterion_03_anisotropic_counts_match_enumeration() {
    let mut checked = 0u64;
    for p in [3u64, 5, 7, 11] {
        let ctx = PrimeContext::new(p).unwrap();
        for a in 0..p {
            assert_eq!(
                anisotropic_count(&ctx, a),
                anisotropic_count_oracle(&ctx, a),
                "p={p} a={a}"
            );
            checked += 1;
        }
    }
    println!(
        "[criterion 3] PASS — anisotropic level counts equal the p^3 enumeration for all {checked} \
         (p, a) cases"
    );
}

#[test]
fn criterion_04_parameter_fibers_are_within_six_p_cubed_of_uniform() {
    let mut worst: f64 = 0.0;
    for p in [5u64, 7, 11, 13, 23, 101] {
        let ctx = PrimeContext::new(p).unwrap();
        let n = ctx.n;
        let p6 = BigInt::from(p).pow(6);
        let n2 = BigInt::from(n) * BigInt::from(n);
        let slack = BigInt::from(6 * p * p * p) * &n2;
        for a in 0..n {
            for b in 0..n {
                let count = BigInt::from(fiber_count_closed(&ctx, a, b));
                let gap = (count * &n2 - &p6).abs();
                assert!(gap <= slack, "p={p} (a,b)=({a},{b})");
                let ratio = Ratio::new(gap, slack.clone()).to_f64().unwrap();
                worst = worst.max(ratio);
            }
        }
    }
    println!(
        "[criterion 4] PASS — every reduced-point fiber is within 6p^3 of p^6/(p-1)^2 for p up to \
         101 (worst case uses {:.1}% of the allowance)",
        100.0 * worst
    );
}

fn random_params(rng: &mut CounterRng) -> WalkParams {
    let n = 4 + rng.below(509);
    WalkParams::from_logs(n, rng.below(n), rng.below(n), rng.below(n))
}

#[test]
fn criterion_05_fourier_law_equals_forward_convolution() {
    let mut rng = CounterRng::new(0xacce_0005, 0);
    let mut max_err: f64 = 0.0;
    for _ in 0..100 {
        let params = random_params(&mut rng);
        for k in [1u64, 5, 50, 500] {
            let by_fourier = sigma_fourier(&params, k);
            let by_steps = evolve(&params, k);
            for x in 0..params.n {
                max_err = max_err.max((by_fourier.prob(x) - by_steps.prob(x)).abs());
            }
        }
    }
    let pass = max_err <= 1e-9;
    println!(
        "[criterion 5] {} — inverse-transform law matches step convolution on 100 params, \
         k in {{1,5,50,500}}, max entrywise error {:.2e}",
        verdict(pass),
        max_err
    );
    assert!(pass);
}

#[test]
fn criterion_06_spectral_bounds_hold_on_the_sweep() {
    let tol = 1e-9;
    let mut rng = CounterRng::new(0xacce_0006, 0);
    let mut params_checked = 0;
    while params_checked < 100 {
        let params = random_params(&mut rng);
        if params.a == 0 && params.b == 0 {
            // Every character is flat: the walk is exactly mixed at each
            // step and the nonzero-frequency lemmas are vacuous.
            assert!(exact_tv(&params, 1) <= tol);
            continue;
        }
        params_checked += 1;
        let n = params.n;
        let nf = n as f64;
        let spectrum = eigenvalues(&params);
        let rho = spectrum.rho();
        let lattice = minimal_norm(&params).unwrap();
        let delta = lattice.delta();
        let dd = params.d as f64;
        // Minimal frequency norm bracketed by the coset index.
        assert!(dd / nf - tol <= delta && delta <= 2.0 / std::f64::consts::PI.sqrt() * (dd / nf).sqrt() + tol);
        // Per-character Gaussian envelopes from the centered residues.
        for j in 0..n {
            let ca = centered_residue((j * params.a % n) as i64, n) as f64;
            let cb = centered_residue((j * params.b % n) as i64, n) as f64;
            let norm_sq = (ca * ca + cb * cb) / (nf * nf);
            let modulus = spectrum.lambdas[j as usize].norm();
            assert!(modulus <= (-norm_sq / 2.0).exp() + tol, "upper envelope j={j}");
            if norm_sq > 0.0 && norm_sq.sqrt() <= 0.5 / std::f64::consts::PI {
                let floor = (-std::f64::consts::PI.powi(2) * norm_sq).exp();
                assert!(modulus >= floor - tol, "lower envelope j={j}");
            }
        }
        for k in [1u64, 2, 5, 10, 50, 200] {
            let sigma = sigma_fourier(&params, k);
            let phi = limiting(&params, k);
            let l1: f64 = (0..n).map(|x| (sigma.prob(x) - phi.prob(x)).abs()).sum();
            let dist = tv(&sigma, &phi).unwrap();
            let bounds = bound_upper(&params, k).unwrap();
            assert!(rho.powi(2 * k as i32) <= l1 * l1 + tol, "sandwich lower k={k}");
            assert!(l1 * l1 <= bounds.lemma41_sum + tol, "sandwich upper k={k}");
            assert!(dist * dist <= bounds.prop62 + tol, "certified bound k={k}");
            assert!(dist >= rho.powi(k as i32) / 2.0 - tol, "spectral floor k={k}");
        }
    }
    println!(
        "[criterion 6] PASS — sandwich, Gaussian envelopes, norm bracketing, and the certified \
         decay bound all hold on 100 params with k in {{1,2,5,10,50,200}} at tolerance 1e-9"
    );
}

#[test]
fn criterion_07_limit_law_is_uniform_on_five_multiples() {
    let ctx = PrimeContext::new(11).unwrap();
    let a = Sl2Element::new(11, 7, 5, 2);
    let b = Sl2Element::new(11, 8, 8, 10);
    let params = reduce(&ctx, &a, &b).unwrap();
    let x0 = bracket(&a, &b).unwrap();
    let reference = limiting(&params, 50);
    let lifted = lift(&ctx, &a, &b, &reference, Parity::Even).unwrap();
    let expected: Vec<Sl2Element> = [1u64, 3, 4, 5, 9].iter().map(|&c| x0.scale(c)).collect();
    assert_eq!(lifted.len(), 5, "limit support has five atoms");
    for atom in &expected {
        let mass = lifted.get(atom).copied().unwrap_or(0.0);
        assert!((mass - 0.2).abs() < 1e-12, "atom {atom} carries 1/5");
    }
    let mut passes = 0;
    let mut worst: f64 = 0.0;
    for master_seed in 0..100u64 {
        let (_, dist) = empirical(&ctx, &a, &b, 50, 1000, master_seed, &reference).unwrap();
        worst = worst.max(dist);
        if dist < 0.1 {
            passes += 1;
        }
    }
    let pass = passes >= 95;
    println!(
        "[criterion 7] {} — limit is uniform on the five bracket multiples {{1,3,4,5,9}}; \
         empirical TV < 0.1 in {passes}/100 seed runs (worst {:.4})",
        verdict(pass),
        worst
    );
    assert!(pass);
}

#[test]
fn criterion_08i_ten_steps_stay_far_from_the_limit() {
    let (_, population) = pairs_1009();
    let mut by_d: BTreeMap<u64, (u32, u32, f64, f64)> = BTreeMap::new();
    let mut passes = 0;
    for params in &population {
        let dist = exact_tv(params, 10);
        let entry = by_d.entry(params.d).or_insert((0, 0, f64::MAX, 0.0));
        entry.0 += 1;
        if dist > 0.9 {
            entry.1 += 1;
            passes += 1;
        }
        entry.2 = entry.2.min(dist);
        entry.3 = entry.3.max(dist);
    }
    for (d, (count, hit, lo, hi)) in &by_d {
        println!(
            "  offset gcd d={d}: {hit}/{count} trials above 0.9 (exact TV range [{lo:.5}, {hi:.5}])"
        );
    }
    let pass = passes >= 90;
    println!(
        "[criterion 8i] {} — exact TV at k=10 exceeds 0.9 for {passes}/100 pairs at p=1009 \
         (threshold 90; the d>=3 population cannot clear 0.9, see the per-d table)",
        verdict(pass)
    );
    assert!(pass, "fixed 0.9/90% threshold is calibrated to d <= 2 only");
}

#[test]
fn criterion_08ii_certified_mixing_times_are_confirmed_exactly() {
    let (_, population) = pairs_1009();
    let eps = 0.1;
    let mut certified = 0;
    let mut confirmed = 0;
    let mut k_min = u64::MAX;
    let mut k_max = 0u64;
    for params in &population {
        let k_star = match mixing_k_star(params, eps) {
            Ok(k) => k,
            Err(SpectralError::TrivialLattice) => 0,
            Err(e) => panic!("unexpected spectral failure: {e}"),
        };
        k_min = k_min.min(k_star);
        k_max = k_max.max(k_star);
        let bound_ok = if k_star == 0 {
            true
        } else {
            bound_upper(params, k_star).unwrap().prop62 <= eps * eps * (1.0 + 1e-12)
        };
        if bound_ok {
            certified += 1;
        }
        if exact_tv(params, k_star) <= eps {
            confirmed += 1;
        }
    }
    let pass = certified == 100 && confirmed == 100;
    println!(
        "[criterion 8ii] {} — k* certified below eps^2 for {certified}/100 pairs and exact TV <= \
         0.1 confirmed for {confirmed}/100 (k* spans [{k_min}, {k_max}])",
        verdict(pass)
    );
    assert!(pass);
}

#[test]
fn criterion_08iii_tv_curve_collapses_by_forty_n() {
    let (_, population) = pairs_1009();
    let n = 1008u64;
    let grid = [10u64, 30, 100, 302, n, 3 * n, 10 * n, 40 * n];
    let mut mixed_at_end = 0;
    for &k in &grid {
        let tvs: Vec<f64> = population.iter().map(|params| exact_tv(params, k)).collect();
        let mean = tvs.iter().sum::<f64>() / tvs.len() as f64;
        let above = tvs.iter().filter(|&&t| t > 0.9).count();
        let below = tvs.iter().filter(|&&t| t < 0.1).count();
        if k == 40 * n {
            mixed_at_end = below;
        }
        println!(
            "  k={k:>6}: mean TV {mean:.5}, {above}/100 above 0.9, {below}/100 below 0.1"
        );
    }
    let pass = mixed_at_end >= 90;
    println!(
        "[criterion 8iii] {} — TV-vs-k curve reported on {} step counts from floor(0.01 n) to \
         40n; {mixed_at_end}/100 pairs below 0.1 at k=40n (threshold 90)",
        verdict(pass),
        grid.len()
    );
    assert!(pass);
}

#[test]
fn criterion_09_witness_gap_exceeds_nine_tenths_for_small_offsets() {
    let ctx = PrimeContext::new(1009).unwrap();
    let k = 10;
    let lambda = 2.0;
    let mut population = Vec::new();
    let mut trial = 0u64;
    while population.len() < 100 {
        let mut rng = CounterRng::new(9, trial);
        trial += 1;
        let (_, _, params) = sample_reduced(&ctx, &mut rng);
        if params.d <= 2 {
            population.push(params);
        }
    }
    let mut by_d: BTreeMap<u64, (u32, u32, f64, f64)> = BTreeMap::new();
    let mut passes = 0;
    for params in &population {
        let record = witness_lower(params, k, lambda);
        let gap = record.lower_gap();
        let entry = by_d.entry(params.d).or_insert((0, 0, f64::MAX, f64::MIN));
        entry.0 += 1;
        if gap > 0.9 {
            entry.1 += 1;
            passes += 1;
        }
        entry.2 = entry.2.min(gap);
        entry.3 = entry.3.max(gap);
    }
    for (d, (count, hit, lo, hi)) in &by_d {
        println!("  offset gcd d={d}: {hit}/{count} gaps above 0.9 (range [{lo:.5}, {hi:.5}])");
    }
    let pass = passes >= 90;
    println!(
        "[criterion 9] {} — witness lower gap at k=10, lambda=2 exceeds 0.9 for {passes}/100 \
         pairs with d <= 2 (threshold 90; the d=2 branch tops out below 0.9, see table)",
        verdict(pass)
    );
    assert!(pass, "fixed 0.9/90% threshold is calibrated to the d = 1 branch only");
}

#[test]
fn criterion_10_coprime_probability_transfers_within_fifteen_over_p() {
    // n = 22: the coprime-pair count factors exactly as 484 (3/4) (120/121).
    assert_eq!(coprime_pair_count(22), 360);
    let expected = Ratio::new(BigInt::from(484), BigInt::one())
        * Ratio::new(BigInt::from(3), BigInt::from(4))
        * Ratio::new(BigInt::from(120), BigInt::from(121));
    assert_eq!(expected, Ratio::from(BigInt::from(360)));
    assert_eq!(euler_product(22), Ratio::new(BigInt::from(90), BigInt::from(121)));
    assert_eq!(euler_product(10), Ratio::new(BigInt::from(18), BigInt::from(25)));
    // Exact pushforward probability of coprime offsets at p = 23.
    let ctx = PrimeContext::new(23).unwrap();
    let n = ctx.n;
    let count: u64 = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| gcd(gcd(a, b), n) == 1)
        .map(|(a, b)| fiber_count_closed(&ctx, a, b))
        .sum();
    let sl2_prob = Ratio::new(BigInt::from(count), BigInt::from(23u64).pow(6));
    let uniform_prob = Ratio::new(BigInt::from(360), BigInt::from(484));
    let diff = (sl2_prob.clone() - uniform_prob).abs();
    let bound = Ratio::new(BigInt::from(15), BigInt::from(23));
    assert!(diff < bound);
    // The Euler-product tail brackets 1/zeta(2) to three decimals.
    let (lo, hi) = zeta2_reciprocal_bracket();
    let z = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    assert!(lo <= z && z <= hi);
    assert!(hi - lo <= 1e-3 && (lo - 0.6079).abs() <= 1e-3 && (hi - 0.6079).abs() <= 1e-3);
    println!(
        "[criterion 10] PASS — coprime_pair_count(22) = 360 with the exact factorization; \
         |sl2 coprime probability - 360/484| = {:.4} < 15/23; Euler bracket [{:.7}, {:.7}] pins \
         1/zeta(2)",
        diff.to_f64().unwrap(),
        lo,
        hi
    );
}

#[test]
fn criterion_11_density_toolkit_reproduces_the_reference_numbers() {
    let seq = shared();
    let xs = [0.2877, 0.1178, 0.0408, 0.0206];
    let tails = [0.2100, 0.0922, 0.0514, 0.0308];
    for (j, &expected) in xs.iter().enumerate() {
        assert!((seq.x(j + 1) - expected).abs() < 5e-5, "x_{}", j + 1);
    }
    for (j, &expected) in tails.iter().enumerate() {
        assert!((seq.tail_from(j + 2) - expected).abs() < 5e-5, "tail from {}", j + 2);
    }
    assert!(!tail_condition(1) && !tail_condition(2));
    for k in 3..=200 {
        assert!(tail_condition(k), "tail condition at k={k}");
    }
    assert_eq!(realize_interval(0.70, 0.73, 100).unwrap(), 11);
    assert_eq!(realize_interval(0.74, 0.745, 100).unwrap(), 23);
    println!(
        "[criterion 11] PASS — x_j table and tails match to 4 decimals, tail condition flips at \
         k=3 and holds through 200, realized primes 11 and 23"
    );
}

#[test]
fn criterion_12i_12ii_certificates_are_sound_with_bounded_weights() {
    let mut rng = CounterRng::new(0xacce_0012, 0);
    let mut sound = 0u32;
    let mut weight_ok = 0u32;
    for _ in 0..1000 {
        let p = random_prime(&mut rng, 5, 10_000);
        let ctx = PrimeContext::new(p).unwrap();
        let (a, b) = loop {
            let a = rand_element(&mut rng, p);
            let b = rand_element(&mut rng, p);
            if pair_admits_witnesses(&ctx, &a, &b) {
                break (a, b);
            }
        };
        let target = rand_element(&mut rng, p);
        let witness = full_witness(&ctx, &a, &b, &target).unwrap();
        let c = rng.below(p);
        let alpha = gram_triple(&a, &b).unwrap().alpha;
        let degree = digit_expansion(&ctx, alpha, c, 2 * p).unwrap().len() as u64 - 1;
        let line = line_witness(&ctx, &a, &b, c).unwrap();
        if witness.certificate.verify(&a, &b).unwrap() && line.verify(&a, &b).unwrap() {
            sound += 1;
        }
        if witness.certificate.weight() <= 12 * witness.max_degree + 8
            && line.weight() <= 4 * degree + 2
        {
            weight_ok += 1;
        }
    }
    let pass = sound == 1000 && weight_ok == 1000;
    println!(
        "[criterion 12i] {} — certificate soundness {sound}/1000 at random p <= 10^4 \
         (one full and one bracket-line witness per trial)",
        verdict(sound == 1000)
    );
    println!(
        "[criterion 12ii] {} — weights within 4n+2 (line) and 12n+8 (full) in {weight_ok}/1000 \
         trials",
        verdict(weight_ok == 1000)
    );
    assert!(pass);
}

#[test]
fn criterion_12iii_cover_times_are_logarithmic_at_p_1009() {
    let ctx = PrimeContext::new(1009).unwrap();
    let cap = (10.0 * 1009f64.ln()).floor() as u64;
    assert_eq!(cap, 69);
    let covered = (1..1009u64)
        .filter(|&a| pn_cover_time(&ctx, a, cap).is_some())
        .count();
    let pass = 100 * covered >= 99 * 1008;
    println!(
        "[criterion 12iii] {} — {covered}/1008 nonzero multipliers cover the digit line within \
         69 levels (need 99%)",
        verdict(pass)
    );
    assert!(pass);
}

#[test]
fn criterion_12iv_certificate_values_inhabit_the_growth_ball() {
    for p in [3u64, 5, 7] {
        let ctx = PrimeContext::new(p).unwrap();
        let mut rng = CounterRng::new(0xacce_1204, p);
        for _ in 0..20 {
            let (a, b) = loop {
                let a = rand_element(&mut rng, p);
                let b = rand_element(&mut rng, p);
                if pair_admits_witnesses(&ctx, &a, &b) {
                    break (a, b);
                }
            };
            let mut witnesses = Vec::new();
            let mut max_weight = 0u64;
            for x11 in 0..p {
                for x12 in 0..p {
                    for x21 in 0..p {
                        let target = Sl2Element::new(p, x11, x12, x21);
                        let witness = full_witness(&ctx, &a, &b, &target).unwrap();
                        assert!(witness.certificate.verify(&a, &b).unwrap());
                        max_weight = max_weight.max(witness.certificate.weight());
                        witnesses.push((target, witness.certificate.weight()));
                    }
                }
            }
            let levels = ball_growth(&ctx, &a, &b, max_weight as usize).unwrap();
            for (target, weight) in &witnesses {
                let (x11, x12, x21) = target.coords();
                let idx = ((x11 * p + x12) * p + x21) as usize;
                assert!(
                    levels[*weight as usize][idx],
                    "p={p} target {target} outside the ball at its weight"
                );
            }
            let diameter = exact_diameter(&ctx, &a, &b).unwrap();
            assert!(
                diameter <= max_weight,
                "p={p}: diameter {diameter} exceeds witness envelope {max_weight}"
            );
        }
    }
    println!(
        "[criterion 12iv] PASS — for p in {{3,5,7}} and 20 admissible pairs each, every \
         certificate value sits inside the growth ball at its own weight and the exact diameter \
         never exceeds the witness-weight envelope"
    );
}

#[test]
fn criterion_13_csv_output_is_byte_identical_across_pool_sizes() {
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let wide = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap();
    let precutoff_cfg = ExperimentConfig {
        p: 101,
        trials: 8,
        master_seed: 7,
        k_list: vec![1, 10, 100],
        ..ExperimentConfig::default()
    };
    let simulate_cfg = ExperimentConfig { p: 11, trials: 16, ..ExperimentConfig::default() };
    let diameter_cfg = ExperimentConfig { p: 101, trials: 6, ..ExperimentConfig::default() };
    let uniform_cfg = ExperimentConfig { p: 23, trials: 300, ..ExperimentConfig::default() };
    let runs = |label: &str, f: &(dyn Fn() -> String + Sync)| {
        let direct = f();
        let one = serial.install(f);
        let eight = wide.install(f);
        assert_eq!(direct, one, "{label}: single-thread pool changed the bytes");
        assert_eq!(direct, eight, "{label}: eight-thread pool changed the bytes");
        direct.len()
    };
    let total = runs("precutoff", &|| run_precutoff(&precutoff_cfg).unwrap())
        + runs("simulate", &|| run_simulate(&simulate_cfg).unwrap())
        + runs("diameter", &|| run_diameter(&diameter_cfg).unwrap())
        + runs("uniform-prob", &|| run_uniform_prob(&uniform_cfg).unwrap());
    println!(
        "[criterion 13] PASS — four runner families re-run under 1- and 8-thread pools produced \
         byte-identical CSV ({total} bytes compared)"
    );
}
