import math

import numpy as np
import pytest

from relqubit import lorentz as lz
from relqubit.density import PartitionSpec, from_state, linear_entropy, partial_trace
from relqubit.errors import InvalidArgumentError, NumericalDegradationError
from relqubit.harness import all_factors, random_boost, random_state
from relqubit.lorentz import MomentumLabel
from relqubit.state import (
    DOWN,
    UP,
    StateVector,
    boost_state,
    friis_state,
    inner_product,
    make_state,
    normalize,
)

from conftest import P_MINUS, P_PLUS

P = MomentumLabel(1.0, 0.2, 0.0, 0.5)


def same_state(a, b, atol=1e-9):
    assert a.particle_count == b.particle_count
    for alpha, beta in zip(a.momenta, b.momenta):
        assert len(alpha) == len(beta)
        assert all(x.matches(y) for x, y in zip(alpha, beta))
    np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=atol, rtol=0)


def test_single_term():
    s = make_state([(3.0j, [(P, "up")])])
    assert s.terms == [(1j, ((P, UP),))]


def test_duplicates_merge():
    s = make_state([(1, [(P, UP)]), (1, [(P, UP)])])
    assert len(s.terms) == 1
    assert s.terms[0][0] == pytest.approx(1.0)


def test_duplicates_merge_within_tolerance():
    q = MomentumLabel(1.0, 0.2, 0.0, 0.5 + 1e-12)
    s = make_state([(1, [(P, UP)]), (1, [(q, UP)])])
    assert s.dims == (1, 2)


def test_normalization():
    s = make_state([(1, [(P, UP)]), (1, [(P, DOWN)])])
    np.testing.assert_allclose([a for a, _ in s.terms], [2**-0.5, 2**-0.5], atol=1e-15)


@pytest.mark.parametrize(
    "terms",
    [
        [],
        [(0.0, [(P, UP)])],
        [(1.0, [(P, UP)]), (1.0, [(P, UP), (P, DOWN)])],
        [(1.0, [(P, "sideways")])],
        [(1.0, [((0, 0, 1), UP)])],
    ],
)
def test_make_state_rejects(terms):
    with pytest.raises(InvalidArgumentError):
        make_state(terms)


def test_friis_product_case():
    s = friis_state(0.0, 0.0, P_PLUS, P_MINUS)
    assert s.terms == [(1.0, ((P_PLUS, UP), (P_MINUS, DOWN)))]
    rho = from_state(s)
    for f in all_factors(2):
        assert linear_entropy(partial_trace(rho, PartitionSpec.of(f))) == pytest.approx(0.0, abs=1e-15)


def test_friis_quarter_amplitudes(friis_quarter):
    amps = [a for a, _ in friis_quarter.terms]
    np.testing.assert_allclose(amps, [0.5] * 4, atol=1e-15)
    configs = {c for _, c in friis_quarter.terms}
    assert configs == {
        ((P_PLUS, UP), (P_MINUS, DOWN)),
        ((P_PLUS, DOWN), (P_MINUS, UP)),
        ((P_MINUS, UP), (P_PLUS, DOWN)),
        ((P_MINUS, DOWN), (P_PLUS, UP)),
    }


@pytest.mark.parametrize("alpha,beta", [(0.3, -1.2), (2.0, 0.7), (math.pi / 8, math.pi / 4)])
def test_friis_norm(alpha, beta):
    assert friis_state(alpha, beta, P_PLUS, P_MINUS).norm() == pytest.approx(1.0, abs=1e-12)


def test_friis_rejects_coincident_momenta():
    with pytest.raises(InvalidArgumentError):
        friis_state(0.1, 0.2, P_PLUS, MomentumLabel(1.0, 0, 0, 1.0 + 1e-13))


def test_boost_identity_returns_same_object(friis_quarter):
    assert boost_state(friis_quarter, lz.LorentzTransform.identity()) is friis_quarter


def test_rotation_of_particle_at_rest():
    rest = MomentumLabel(1.0, 0, 0, 0)
    spinor = np.array([0.6, 0.8j])
    s = make_state([(spinor[0], [(rest, UP)]), (spinor[1], [(rest, DOWN)])])
    rot = lz.rotation_about_axis([0, 0.6, 0.8], 1.1)
    out = boost_state(s, rot)
    assert out.momenta[0][0].matches(rest)
    u = lz.su2_lift(lz.WignerRotation(rot.matrix[1:, 1:])).matrix
    np.testing.assert_allclose(out.amplitudes[0], u @ spinor, atol=1e-14)


def test_boost_moves_momenta(friis_quarter):
    lam = lz.boost_along_axis("x", 2.0)
    out = boost_state(friis_quarter, lam)
    assert out.norm() == pytest.approx(1.0, abs=1e-10)
    assert out.momenta[0][0].matches(P_PLUS.transformed(lam))
    assert out.momenta[1][0].matches(P_MINUS.transformed(lam))


def test_inner_product_basics():
    up = make_state([(1, [(P, UP)])])
    down = make_state([(1, [(P, DOWN)])])
    assert inner_product(up, up) == pytest.approx(1.0)
    assert inner_product(up, down) == 0
    other = make_state([(1, [(P_PLUS, UP)])])
    assert inner_product(up, other) == 0
    with pytest.raises(InvalidArgumentError):
        inner_product(up, make_state([(1, [(P, UP), (P, UP)])]))


def test_inner_product_matches_dense_dot(rng):
    a = random_state(rng)
    b = normalize(StateVector(a.momenta, rng.standard_normal(a.dims) + 1j * rng.standard_normal(a.dims)))
    assert inner_product(a, b) == pytest.approx(np.vdot(a.vector, b.vector), abs=1e-15)


def test_boost_unitarity(rng):
    for _ in range(100):
        a = random_state(rng, n_particles=int(rng.integers(1, 4)), n_momenta=int(rng.integers(1, 4)))
        b = normalize(StateVector(a.momenta, rng.standard_normal(a.dims) + 1j * rng.standard_normal(a.dims)))
        lam = random_boost(rng, 3.0)
        before = inner_product(a, b)
        after = inner_product(boost_state(a, lam), boost_state(b, lam))
        assert abs(after - before) <= 1e-9


def test_boost_inverse_round_trip(rng):
    for _ in range(100):
        s = random_state(rng, n_particles=int(rng.integers(1, 4)), n_momenta=2)
        lam = random_boost(rng, 3.0)
        same_state(boost_state(boost_state(s, lam), lz.inverse(lam)), s)


def test_boost_composition_up_to_projective_signs(rng):
    parts = [PartitionSpec.parse(x) for x in ("p1.spin", "p1.mom", "particle1", "p1.spin,p2.spin", "p1.mom,p2.spin")]
    for _ in range(50):
        s = random_state(rng)
        l1, l2 = random_boost(rng, 2.0), random_boost(rng, 2.0)
        direct = boost_state(s, lz.compose(l2, l1))
        stepwise = boost_state(boost_state(s, l1), l2)
        # SU(2) signs may differ per momentum label, so compare moduli and entropies.
        np.testing.assert_allclose(np.abs(direct.amplitudes), np.abs(stepwise.amplitudes), atol=1e-9)
        rd, rs = from_state(direct), from_state(stepwise)
        for part in parts:
            assert linear_entropy(partial_trace(rd, part)) == pytest.approx(
                linear_entropy(partial_trace(rs, part)), abs=1e-9
            )


def test_pure_boost_composition_density_matrices_agree(rng):
    """Small Wigner angles stay off the pi branch, so no sign flips occur."""
    for _ in range(50):
        s = random_state(rng)
        n = rng.standard_normal(3)
        n /= np.linalg.norm(n)
        l1, l2 = lz.boost_along_axis(n, rng.uniform(0, 1)), lz.boost_along_axis(n, rng.uniform(0, 1))
        direct = from_state(boost_state(s, lz.compose(l2, l1))).matrix
        stepwise = from_state(boost_state(boost_state(s, l1), l2)).matrix
        np.testing.assert_allclose(direct, stepwise, atol=1e-9)


def test_spin_momentum_do_not_factorize():
    lam = lz.boost_along_axis("x", 2.0)
    d_plus, d_minus = lz.spin_matrix(lam, P_PLUS), lz.spin_matrix(lam, P_MINUS)
    assert np.max(np.abs(d_plus - d_minus)) > 0.1


def test_boost_that_merges_occupied_labels_is_rejected():
    # 1.5e-9 apart near rest: distinct.  After a transverse boost |p| ~ 10,
    # the relative merge tolerance swallows the gap and two orthogonal
    # components would fold into one.
    a = MomentumLabel(1.0, 0, 0, 0.0)
    b = MomentumLabel(1.0, 0, 0, 1.5e-9)
    s = make_state([(1, [(a, UP)]), (1, [(b, UP)])])
    assert s.dims == (2, 2)
    with pytest.raises(NumericalDegradationError):
        boost_state(s, lz.boost_along_axis("x", 3.0))


def test_boost_merging_an_empty_label_is_harmless():
    a = MomentumLabel(1.0, 0, 0, 0.0)
    b = MomentumLabel(1.0, 0, 0, 1.5e-9)
    s = make_state([(1, [(a, UP)]), (0, [(b, DOWN)])])
    out = boost_state(s, lz.boost_along_axis("x", 3.0))
    assert out.dims == (1, 2)
    assert out.norm() == pytest.approx(1.0, abs=1e-12)
