use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::involution::m_sigma;

fn q() -> Field {
    Field::Rationals
}

fn c2() -> Arc<Poset> {
    Arc::new(Poset::chain(2))
}

fn swap2() -> PosetInvolution {
    PosetInvolution::from_images(vec![1, 0])
}

/// `θ = λ̂` on C2 with `λ` swapping the two elements.
fn c2_theta(field: Field) -> InvolutionSpec {
    InvolutionSpec::from_lambda(&c2(), field, swap2()).unwrap()
}

fn e(p: &Arc<Poset>, field: Field, x: usize, y: usize) -> Element {
    Element::basis(p, field, x, y).unwrap()
}

/// `D(e11) = D(e22) = 0`, `D(e12) = e11 - e22`.
fn example_d(field: Field) -> LinearMap {
    let p = c2();
    let img = e(&p, field, 0, 0).sub(&e(&p, field, 1, 1)).unwrap();
    LinearMap::from_images(&p, field, &[Element::zero(&p, field), img, Element::zero(&p, field)]).unwrap()
}

fn random_element(p: &Arc<Poset>, field: Field, rng: &mut ChaCha8Rng) -> Element {
    let entries: Vec<_> = p
        .pairs()
        .iter()
        .map(|&pair| (pair, field.from_i64(rng.gen_range(-5..=5))))
        .collect();
    Element::from_entries(p, field, entries).unwrap()
}

fn random_combination(basis: &[LinearMap], p: &Arc<Poset>, field: Field, rng: &mut ChaCha8Rng) -> LinearMap {
    basis.iter().fold(LinearMap::zero(p, field), |acc, b| {
        acc.add(&b.scale(&field.from_i64(rng.gen_range(-4..=4)))).unwrap()
    })
}

/// Small instances with a nontrivial involution: C2, C3 and the diamond
/// with their order-reversing involutions, plus the crown with a
/// non-coboundary twist.
fn instances(field: Field) -> Vec<InvolutionSpec> {
    let mut out = Vec::new();
    for p in [Poset::chain(2), Poset::chain(3), diamond(), Poset::from_covers(&["a", "b", "c"], &[("a", "b")]).unwrap()] {
        let p = Arc::new(p);
        for lambda in p.involutions() {
            out.push(InvolutionSpec::from_lambda(&p, field, lambda).unwrap());
        }
    }
    out.push(crown_theta(field));
    out
}

fn diamond() -> Poset {
    Poset::from_covers(&["1", "2", "3", "4"], &[("1", "2"), ("1", "3"), ("2", "4"), ("3", "4")]).unwrap()
}

fn crown_theta(field: Field) -> InvolutionSpec {
    let p = Arc::new(Poset::from_covers(&["1", "2", "3", "4"], &[("1", "3"), ("1", "4"), ("2", "3"), ("2", "4")]).unwrap());
    let sigma = MultiplicativeElement::from_covers(
        &p,
        field,
        &BTreeMap::from([
            ((0, 2), field.from_i64(-1)),
            ((0, 3), field.from_i64(2)),
            ((1, 2), field.one().div(&field.from_i64(2)).unwrap()),
            ((1, 3), field.one()),
        ]),
    )
    .unwrap();
    let theta = InvolutionSpec::without_inner(sigma, PosetInvolution::from_images(vec![2, 3, 0, 1])).unwrap();
    assert!(theta.validate());
    theta
}

/// A validated involution on C2 with a non-identity `μ`.
fn c2_theta_with_mu(field: Field) -> InvolutionSpec {
    let p = c2();
    let mu = Element::delta(&p, field).add(&e(&p, field, 0, 1)).unwrap();
    let theta = InvolutionSpec::new(mu, MultiplicativeElement::ones(&p, field), swap2()).unwrap();
    assert!(theta.validate());
    theta
}

/// First validated `δ + c e_xy` twist of `λ̂` on C3 reversing the chain.
fn c3_theta_with_mu(field: Field) -> InvolutionSpec {
    let p = Arc::new(Poset::chain(3));
    let lambda = PosetInvolution::from_images(vec![2, 1, 0]);
    for &(x, y) in p.pairs().iter().filter(|(x, y)| x != y) {
        for c in [1, 2, -1] {
            let mu = Element::delta(&p, field)
                .add(&e(&p, field, x, y).scale(&field.from_i64(c)).unwrap())
                .unwrap();
            let theta = InvolutionSpec::new(mu, MultiplicativeElement::ones(&p, field), lambda.clone()).unwrap();
            if theta.validate() {
                return theta;
            }
        }
    }
    panic!("no validated twist on C3");
}

#[test]
fn map_from_images_examples() {
    let p = c2();
    let basis: Vec<Element> = p.pairs().iter().map(|&(x, y)| e(&p, q(), x, y)).collect();
    assert_eq!(LinearMap::from_images(&p, q(), &basis).unwrap(), LinearMap::identity(&p, q()));
    let zeros = vec![Element::zero(&p, q()); 3];
    assert!(LinearMap::from_images(&p, q(), &zeros).unwrap().is_zero());
    let d = example_d(q());
    assert_eq!(d.image_of(0, 1).unwrap().to_string(), "1 1 1; 2 2 -1");
    assert!(matches!(
        LinearMap::from_images(&p, q(), &zeros[..2]),
        Err(Error::DimensionMismatch { expected: 3, found: 2 })
    ));
}

#[test]
fn example_map_is_jordan_but_not_star() {
    let theta = c2_theta(q());
    let d = example_d(q());
    assert!(is_jordan_star_derivation(&d, &theta).unwrap());
    assert_eq!(star_derivation_witness(&d, &theta).unwrap(), Some((1, 2)));
    assert_eq!(basis_label(theta.poset(), 1), "e 1 2");
    assert_eq!(basis_label(theta.poset(), 2), "e 2 2");

    // Both sides of the Leibniz rule at the witness.
    let p = c2();
    let (e12, e22) = (e(&p, q(), 0, 1), e(&p, q(), 1, 1));
    let lhs = d.apply(&e12.convolve(&e22).unwrap()).unwrap();
    let rhs = d
        .apply(&e12)
        .unwrap()
        .convolve(&theta.apply(&e22).unwrap())
        .unwrap()
        .add(&e12.convolve(&d.apply(&e22).unwrap()).unwrap())
        .unwrap();
    assert_eq!(lhs.to_string(), "1 1 1; 2 2 -1");
    assert_eq!(rhs.to_string(), "1 1 1");
}

#[test]
fn zero_map_is_star_and_jordan() {
    for theta in instances(q()) {
        let z = LinearMap::zero(theta.poset(), q());
        assert!(is_star_derivation(&z, &theta).unwrap());
        assert!(is_jordan_star_derivation(&z, &theta).unwrap());
    }
}

#[test]
fn inner_maps_are_jordan() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for field in [q(), Field::prime(5).unwrap()] {
        for theta in instances(field) {
            for _ in 0..5 {
                let f = random_element(theta.poset(), field, &mut rng);
                let d = inner_star_derivation(&f, &theta).unwrap();
                assert!(is_jordan_star_derivation(&d, &theta).unwrap());
            }
        }
    }
}

#[test]
fn inner_map_need_not_be_star() {
    // Δ(e12 e22) = Δ(e12) = e12, while Δ(e12)θ(e22) + e12 Δ(e22) = 0.
    let theta = c2_theta(q());
    let p = c2();
    let d = inner_star_derivation(&e(&p, q(), 0, 0), &theta).unwrap();
    assert_eq!(d.image_of(0, 1).unwrap().to_string(), "1 2 1");
    assert_eq!(d.image_of(1, 1).unwrap().to_string(), "1 1 1");
    assert_eq!(star_derivation_witness(&d, &theta).unwrap(), Some((1, 2)));
    // With f = δ the map is θ - id, which is not a *-derivation either.
    let d = inner_star_derivation(&Element::delta(&p, q()), &theta).unwrap();
    assert!(!is_star_derivation(&d, &theta).unwrap());
}

#[test]
fn inner_examples() {
    let theta = c2_theta(q());
    let p = c2();
    assert!(inner_star_derivation(&Element::zero(&p, q()), &theta).unwrap().is_zero());
    let from_delta = inner_star_derivation(&Element::delta(&p, q()), &theta).unwrap();
    assert_eq!(from_delta, theta.matrix().sub(&LinearMap::identity(&p, q())).unwrap());
    assert!(inner_star_derivation(&e(&p, q(), 0, 1), &theta).unwrap().is_zero());
}

#[test]
fn inner_map_matches_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for theta in instances(q()) {
        let p = theta.poset();
        let f = random_element(p, q(), &mut rng);
        let g = random_element(p, q(), &mut rng);
        let d = inner_star_derivation(&f, &theta).unwrap();
        let direct = f
            .convolve(&theta.apply(&g).unwrap())
            .unwrap()
            .sub(&g.convolve(&f).unwrap())
            .unwrap();
        assert_eq!(d.apply(&g).unwrap(), direct);
    }
}

#[test]
fn is_inner_examples() {
    let theta = c2_theta(q());
    let p = c2();
    let f0 = is_inner(&LinearMap::zero(&p, q()), &theta).unwrap().unwrap();
    assert!(f0.is_zero());

    let target = inner_star_derivation(&e(&p, q(), 0, 0), &theta).unwrap();
    let f = is_inner(&target, &theta).unwrap().unwrap();
    assert_eq!(inner_star_derivation(&f, &theta).unwrap(), target);

    // Δ_f(e11) = f(2,2) e22 - f(1,1) e11 forces f = b e12, whose inner map
    // is zero; the example map is nonzero, so it is not inner.
    assert_eq!(is_inner(&example_d(q()), &theta).unwrap(), None);
}

#[test]
fn transposed_examples() {
    let p = c2();
    let sigma = MultiplicativeElement::ones(&p, q());
    assert!(transposed_jsd(&BTreeMap::new(), &sigma, &swap2()).unwrap().is_zero());
    let gamma = BTreeMap::from([(1, q().one())]);
    assert_eq!(transposed_jsd(&gamma, &sigma, &swap2()).unwrap(), example_d(q()));
    assert_eq!(is_transposed(&example_d(q()), &sigma, &swap2()).unwrap(), Some(gamma));
    assert_eq!(
        is_transposed(&LinearMap::zero(&p, q()), &sigma, &swap2()).unwrap(),
        Some(BTreeMap::from([(1, q().zero())]))
    );
    // Δ_{e11}(e11) = -e11, so it does not vanish on idempotents.
    let theta = c2_theta(q());
    let inner = inner_star_derivation(&e(&p, q(), 0, 0), &theta).unwrap();
    assert_eq!(inner.image_of(0, 0).unwrap().to_string(), "1 1 -1");
    assert_eq!(is_transposed(&inner, &sigma, &swap2()).unwrap(), None);
}

#[test]
fn transposed_on_reversed_three_chain() {
    let p = Arc::new(Poset::chain(3));
    let lambda = PosetInvolution::from_images(vec![2, 1, 0]);
    let sigma = MultiplicativeElement::ones(&p, q());
    let d = transposed_jsd(&BTreeMap::from([(2, q().one())]), &sigma, &lambda).unwrap();
    // Evaluating the formula: only x = 1, y = 3 has comparable targets.
    let expected = LinearMap::from_fn(&p, q(), |x, y| {
        if (x, y) == (0, 2) {
            Element::from_entries(&p, q(), [((0, 0), q().one()), ((2, 2), q().from_i64(-1))])
        } else {
            Ok(Element::zero(&p, q()))
        }
    })
    .unwrap();
    assert_eq!(d, expected);

    // Not every γ gives a Jordan map: with a = e12, b = e23 the left side of
    // the polarized identity is D(e13) = e11 - e33 and the right side is 0.
    let theta = InvolutionSpec::from_lambda(&p, q(), lambda).unwrap();
    assert!(!span_contains(&jsd_space_basis(&theta).unwrap(), &d));
    let (a, b) = (p.pair_index(0, 1).unwrap(), p.pair_index(1, 2).unwrap());
    assert_eq!(jordan_witness(&d, &theta).unwrap(), Some((a, b)));
}

#[test]
fn jordan_transposed_maps() {
    for field in [q(), Field::prime(3).unwrap()] {
        for theta in instances(field) {
            let jd = jsd_space_basis(&theta).unwrap();
            let formula = transposed_space_basis(theta.sigma(), theta.lambda()).unwrap();
            for v in jordan_vanishing_space_basis(&theta).unwrap() {
                assert!(span_contains(&jd, &v));
                assert!(span_contains(&formula, &v));
                assert!(is_transposed(&v, theta.sigma(), theta.lambda()).unwrap().is_some());
            }
            for t in &formula {
                assert_eq!(is_jordan_star_derivation(t, &theta).unwrap(), span_contains(&jd, t));
            }
        }
    }
}

#[test]
fn jordan_space_splits_into_inner_and_vanishing() {
    // (poset size, λ images) -> (JD, star, inner, all-γ transposed, vanishing JD)
    let expected: Vec<(usize, Vec<usize>, [usize; 5])> = vec![
        (2, vec![1, 0], [3, 1, 2, 1, 1]),
        (3, vec![2, 1, 0], [5, 2, 5, 2, 1]),
        (4, vec![3, 1, 2, 0], [8, 3, 8, 3, 2]),
        (4, vec![3, 2, 1, 0], [10, 3, 8, 3, 2]),
        (3, vec![1, 0, 2], [3, 1, 2, 1, 1]),
        (4, vec![2, 3, 0, 1], [6, 4, 6, 2, 0]),
    ];
    let thetas = instances(q());
    assert_eq!(thetas.len(), expected.len());
    for (theta, (n, images, dims)) in thetas.iter().zip(expected) {
        assert_eq!(theta.poset().len(), n);
        assert_eq!(theta.lambda().images(), &images[..]);
        let jd = jsd_space_basis(theta).unwrap();
        let inner = inner_space_basis(theta).unwrap();
        let vanishing = jordan_vanishing_space_basis(theta).unwrap();
        let got = [
            jd.len(),
            star_derivation_space_basis(theta).unwrap().len(),
            inner.len(),
            transposed_space_basis(theta.sigma(), theta.lambda()).unwrap().len(),
            vanishing.len(),
        ];
        assert_eq!(got, dims);
        let mut both = inner;
        both.extend(vanishing);
        assert_eq!(span_dimension(&both), jd.len());
    }
}

#[test]
fn jsd_dimensions() {
    let theta = c2_theta(q());
    let jd = jsd_space_basis(&theta).unwrap();
    assert_eq!(jd.len(), 3);
    assert!(span_contains(&jd, &example_d(q())));
    assert_eq!(inner_space_basis(&theta).unwrap().len(), 2);
    let transposed = transposed_space_basis(theta.sigma(), theta.lambda()).unwrap();
    assert_eq!(transposed.len(), 1);
    let mut both = inner_space_basis(&theta).unwrap();
    both.extend(transposed);
    assert_eq!(span_dimension(&both), 3);

    // On a single point, D(e) = 2 D(e) e forces D = 0.
    let single = Arc::new(Poset::chain(1));
    let theta = InvolutionSpec::from_lambda(&single, q(), PosetInvolution::identity(1)).unwrap();
    assert!(jsd_space_basis(&theta).unwrap().is_empty());
}

#[test]
fn jsd_basis_members_are_jordan() {
    for field in [q(), Field::prime(3).unwrap()] {
        for theta in instances(field) {
            for d in jsd_space_basis(&theta).unwrap() {
                assert!(is_jordan_star_derivation(&d, &theta).unwrap());
            }
        }
    }
}

#[test]
fn star_space_inside_jordan_space() {
    for theta in instances(q()) {
        let star = star_derivation_space_basis(&theta).unwrap();
        let jd = jsd_space_basis(&theta).unwrap();
        for d in &star {
            assert!(is_star_derivation(d, &theta).unwrap());
            assert!(span_contains(&jd, d));
        }
    }
    let theta = c2_theta(q());
    let star = star_derivation_space_basis(&theta).unwrap();
    assert!(span_dimension(&star) < jsd_space_basis(&theta).unwrap().len());
    assert!(!span_contains(&star, &example_d(q())));
}

#[test]
fn right_mult_examples() {
    let d = example_d(q());
    assert_eq!(right_mult_compose(&d, &Element::delta(&c2(), q())).unwrap(), d);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for theta in [c2_theta_with_mu(q()), c3_theta_with_mu(q())] {
        let p = theta.poset();
        let phi = theta.phi();
        for _ in 0..10 {
            let f = random_element(p, q(), &mut rng);
            let lhs = right_mult_compose(&inner_star_derivation(&f, &theta).unwrap(), theta.mu()).unwrap();
            let rhs = inner_star_derivation(&f.convolve(theta.mu()).unwrap(), &phi).unwrap();
            assert_eq!(lhs, rhs);
        }
        let jd_theta = jsd_space_basis(&theta).unwrap();
        let jd_phi = jsd_space_basis(&phi).unwrap();
        assert_eq!(jd_theta.len(), jd_phi.len());
        for d in &jd_theta {
            let moved = right_mult_compose(d, theta.mu()).unwrap();
            assert!(is_jordan_star_derivation(&moved, &phi).unwrap());
            assert!(span_contains(&jd_phi, &moved));
        }
        for d in &jd_phi {
            let back = right_mult_compose(d, theta.mu_inv()).unwrap();
            assert!(span_contains(&jd_theta, &back));
        }
    }
}

#[test]
fn sigma_zero_examples() {
    let p = c2();
    let sigma = MultiplicativeElement::ones(&p, q());
    let lambda = swap2();
    let same = sigma_zero(&sigma, &lambda, &Element::delta(&p, q())).unwrap();
    assert_eq!(same, sigma);
    let two = Element::delta(&p, q()).scale(&q().from_i64(2)).unwrap();
    assert_eq!(sigma_zero(&sigma, &lambda, &two).unwrap(), sigma);
    let m = Element::delta(&p, q()).add(&e(&p, q(), 0, 0).scale(&q().from_i64(3)).unwrap()).unwrap();
    let s0 = sigma_zero(&sigma, &lambda, &m).unwrap();
    assert_eq!(s0.get(0, 1), q().from_i64(4));
    assert!(matches!(
        sigma_zero(&sigma, &lambda, &e(&p, q(), 0, 1)),
        Err(Error::NotInvertible(_))
    ));
}

#[test]
fn sigma_zero_on_crown() {
    let theta = crown_theta(q());
    let p = theta.poset();
    let m = Element::from_entries(
        p,
        q(),
        [((0, 0), q().from_i64(2)), ((1, 1), q().from_i64(3)), ((2, 2), q().from_i64(5)), ((3, 3), q().one()), ((0, 2), q().one())],
    )
    .unwrap();
    let s0 = sigma_zero(theta.sigma(), theta.lambda(), &m).unwrap();
    for &(x, y) in p.pairs() {
        let (lx, ly) = (theta.lambda().apply(x), theta.lambda().apply(y));
        let expect = &(&theta.sigma().get(ly, lx) * &m.get(y, y).inv().unwrap()) * &m.get(x, x);
        assert_eq!(s0.get(ly, lx), expect);
    }
}

#[test]
fn extract_inner_f_examples() {
    let p = c2();
    assert!(extract_inner_f(&example_d(q())).unwrap().is_zero());
    assert!(extract_inner_f(&LinearMap::zero(&p, q())).unwrap().is_zero());

    // Inner maps are recovered on idempotents: Δ_{e11}(e11) = -e11 needs
    // f(1,1) = 1, the negative of the image's entry.
    let theta = c2_theta(q());
    let d = inner_star_derivation(&e(&p, q(), 0, 0), &theta).unwrap();
    let f = extract_inner_f(&d).unwrap();
    assert_eq!(f.get(0, 0), q().one());
    let back = inner_star_derivation(&f, &theta).unwrap();
    for x in 0..2 {
        assert_eq!(back.image_of(x, x).unwrap(), d.image_of(x, x).unwrap());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for theta in instances(q()) {
        let jd = jsd_space_basis(&theta).unwrap();
        let d0 = random_combination(&jd, theta.poset(), q(), &mut rng);
        let f = extract_inner_f(&d0).unwrap();
        let rest = d0.sub(&inner_star_derivation(&f, &theta).unwrap()).unwrap();
        for x in 0..theta.poset().len() {
            assert!(rest.image_of(x, x).unwrap().is_zero());
        }
    }
}

#[test]
fn decompose_example() {
    let theta = c2_theta(q());
    let dec = decompose_jsd(&example_d(q()), &theta).unwrap();
    assert!(dec.inner_f.is_zero());
    assert_eq!(dec.gamma, BTreeMap::from([(1, q().one())]));
    assert!(dec.residual.is_zero());
    assert_eq!(dec.transposed_part, example_d(q()));
    assert!(dec.inner_part.is_zero());
}

#[test]
fn decompose_rejects_non_jordan() {
    let theta = c2_theta(q());
    let p = c2();
    let d = LinearMap::from_images(&p, q(), &[e(&p, q(), 0, 0), Element::zero(&p, q()), Element::zero(&p, q())]).unwrap();
    assert!(!is_jordan_star_derivation(&d, &theta).unwrap());
    assert!(matches!(decompose_jsd(&d, &theta), Err(Error::NotJordan(..))));
}

#[test]
fn decompose_inner_and_basis_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for field in [q(), Field::prime(3).unwrap()] {
        let mut thetas = instances(field);
        thetas.push(c2_theta_with_mu(field));
        thetas.push(c3_theta_with_mu(field));
        for theta in thetas {
            let g = random_element(theta.poset(), field, &mut rng);
            let inner = inner_star_derivation(&g, &theta).unwrap();
            assert!(decompose_jsd(&inner, &theta).unwrap().residual.is_zero());
            for d in jsd_space_basis(&theta).unwrap() {
                let dec = decompose_jsd(&d, &theta).unwrap();
                assert!(dec.residual.is_zero());
                let sum = dec.inner_part.add(&dec.transposed_part).unwrap();
                assert_eq!(sum, d);
                for x in 0..theta.poset().len() {
                    assert!(dec.transposed_part.image_of(x, x).unwrap().is_zero());
                }
            }
        }
    }
}

#[test]
fn idempotent_free_inner_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for theta in instances(q()) {
        let phi = theta.phi();
        let p = phi.poset();
        // Elements supported on (u, λu) with u ≤ λu kill the idempotents.
        let kernel_pairs: Vec<(usize, usize)> = (0..p.len())
            .map(|u| (u, phi.lambda().apply(u)))
            .filter(|&(u, lu)| p.leq(u, lu))
            .collect();
        for _ in 0..20 {
            let f = if rng.gen_bool(0.5) {
                random_element(p, q(), &mut rng)
            } else {
                let entries = kernel_pairs.iter().map(|&pair| (pair, q().from_i64(rng.gen_range(-3..=3))));
                Element::from_entries(p, q(), entries).unwrap()
            };
            assert_eq!(
                inner_vanishes_on_idempotents(&f, &phi).unwrap(),
                inner_has_idempotent_free_form(&f, &phi).unwrap()
            );
        }
    }
}

#[test]
fn transposed_iff_vanishing_on_idempotents() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for theta in instances(q()) {
        let jd = jsd_space_basis(&theta).unwrap();
        let transposed = transposed_space_basis(theta.sigma(), theta.lambda()).unwrap();
        for _ in 0..10 {
            let d = if rng.gen_bool(0.5) {
                random_combination(&jd, theta.poset(), q(), &mut rng)
            } else {
                random_combination(&transposed, theta.poset(), q(), &mut rng)
            };
            let vanishes = (0..theta.poset().len()).all(|x| d.image_of(x, x).unwrap().is_zero());
            let gamma = is_transposed(&d, theta.sigma(), theta.lambda()).unwrap();
            assert_eq!(vanishes, gamma.is_some());
        }
    }
}

#[test]
fn transport_keeps_vanishing_on_idempotents() {
    let theta = crown_theta(q());
    let p = theta.poset();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for t in transposed_space_basis(theta.sigma(), theta.lambda()).unwrap() {
        let mut m = random_element(p, q(), &mut rng);
        while !m.is_invertible() {
            m = random_element(p, q(), &mut rng);
        }
        let moved = right_mult_compose(&t, &m).unwrap();
        for x in 0..p.len() {
            assert!(moved.image_of(x, x).unwrap().is_zero());
        }
    }
}

#[test]
fn phi_twist_matches_hadamard() {
    let theta = crown_theta(q());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = random_element(theta.poset(), q(), &mut rng);
    let hat = crate::involution::lambda_hat(theta.lambda(), &f).unwrap();
    assert_eq!(theta.apply(&f).unwrap(), m_sigma(theta.sigma(), &hat).unwrap());
}

#[test]
fn context_mismatch_errors() {
    let theta = c2_theta(q());
    let other = LinearMap::zero(&c2(), Field::prime(3).unwrap());
    assert!(matches!(is_star_derivation(&other, &theta), Err(Error::FieldMismatch)));
    let p3 = Arc::new(Poset::chain(3));
    assert!(matches!(
        is_jordan_star_derivation(&LinearMap::zero(&p3, q()), &theta),
        Err(Error::PosetMismatch)
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quadratic_identity_agrees_with_polarized(seed in any::<u64>(), pick in 0usize..64, jordan in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let thetas = instances(q());
        let theta = &thetas[pick % thetas.len()];
        let p = theta.poset();
        let n = p.dim();
        let d = if jordan {
            random_combination(&jsd_space_basis(theta).unwrap(), p, q(), &mut rng)
        } else {
            let v: Vec<Scalar> = (0..n * n).map(|_| q().from_i64(rng.gen_range(-3..=3))).collect();
            LinearMap::from_vec(p, q(), &v).unwrap()
        };
        let polarized = is_jordan_star_derivation(&d, theta).unwrap();
        let quadratic = (0..30).all(|_| {
            let f = random_element(p, q(), &mut rng);
            jordan_identity_holds(&d, theta, &f).unwrap()
        });
        prop_assert_eq!(polarized, quadratic);
    }

    #[test]
    fn jordan_space_is_closed_under_combination(seed in any::<u64>(), pick in 0usize..64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let thetas = instances(Field::prime(7).unwrap());
        let theta = &thetas[pick % thetas.len()];
        let d = random_combination(&jsd_space_basis(theta).unwrap(), theta.poset(), theta.field(), &mut rng);
        prop_assert!(is_jordan_star_derivation(&d, theta).unwrap());
        prop_assert!(decompose_jsd(&d, theta).unwrap().residual.is_zero());
    }
}

