import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relqubit.density import (
    MOMENTUM,
    SPIN,
    DensityMatrix,
    Factor,
    PartitionSpec,
    all_factors,
    exact_linear_entropies,
    from_state,
    linear_entropy,
    partial_trace,
    partition_entropy_sum,
    project_momentum,
    purity,
)
from relqubit.errors import InvalidArgumentError
from relqubit.harness import random_state
from relqubit.lorentz import MomentumLabel
from relqubit.state import DOWN, UP, friis_state, make_state

import oracles
from conftest import P_MINUS, P_PLUS

P = MomentumLabel(1.0, 0, 0.3, 0)
Q = MomentumLabel(1.0, 0, -0.3, 0)


def every_partition(n):
    factors = all_factors(n)
    return [
        PartitionSpec(frozenset(f for i, f in enumerate(factors) if mask >> i & 1))
        for mask in range(1, 2 ** len(factors))
    ]


def bell():
    return make_state([(1, [(P, UP), (Q, DOWN)]), (1, [(P, DOWN), (Q, UP)])])


def test_single_term_density():
    rho = from_state(make_state([(1j, [(P, UP)])]))
    np.testing.assert_allclose(rho.matrix, [[1, 0], [0, 0]])
    assert partial_trace(rho, PartitionSpec.momentum(0)).matrix.tolist() == [[1]]


def test_plus_state_density():
    rho = from_state(make_state([(1, [(P, UP)]), (1, [(P, DOWN)])]))
    np.testing.assert_allclose(rho.matrix, np.full((2, 2), 0.5), atol=1e-15)
    assert rho.basis == [(P, "up"), (P, "down")]


def test_pure_state_purity(rng):
    for _ in range(20):
        assert purity(from_state(random_state(rng))) == pytest.approx(1.0, abs=1e-10)


def test_bell_reduction_is_maximally_mixed():
    red = partial_trace(from_state(bell()), PartitionSpec.spin(0))
    np.testing.assert_allclose(red.matrix, np.eye(2) / 2, atol=1e-15)
    assert linear_entropy(red) == pytest.approx(0.5)
    assert purity(red) == pytest.approx(0.5)


def test_product_state_reductions_are_pure():
    s = make_state([(1, [(P, UP), (Q, UP)]), (1, [(P, UP), (Q, DOWN)])])
    rho = from_state(s)
    for part in every_partition(2):
        assert linear_entropy(partial_trace(rho, part)) == pytest.approx(0.0, abs=1e-15)


def test_friis_momentum_reduction():
    """alpha = pi/4, beta = 0: 4-term brute force gives diag(1/2, 1/2) over (p+, p-)."""
    s = friis_state(math.pi / 4, 0.0, P_PLUS, P_MINUS)
    red = partial_trace(from_state(s), PartitionSpec.momentum(0))
    np.testing.assert_allclose(red.matrix, np.eye(2) / 2, atol=1e-15)
    assert red.labels == ((P_PLUS, P_MINUS),)
    ref = oracles.loop_partial_trace(
        np.outer(oracles.friis_tensor(math.pi / 4, 0).reshape(-1), oracles.friis_tensor(math.pi / 4, 0).reshape(-1)),
        (2, 2, 2, 2),
        [0],
    )
    np.testing.assert_allclose(red.matrix, ref, atol=1e-15)


def test_linear_entropy_of_maximally_mixed():
    for d in (1, 2, 3, 5):
        rho = DensityMatrix((Factor(0, MOMENTUM),), (tuple(range(d)),), np.eye(d) / d)
        assert linear_entropy(rho) == pytest.approx(1 - 1 / d, abs=1e-15)
        assert linear_entropy(rho) == 1.0 - purity(rho)


def test_entropy_sum_examples(friis_quarter):
    singles = [PartitionSpec.of(f) for f in all_factors(2)]
    rep = partition_entropy_sum(from_state(friis_quarter), singles)
    np.testing.assert_allclose(rep.entropies, [0.5] * 4, atol=1e-15)
    assert rep.total == pytest.approx(2.0, abs=1e-14)
    assert rep.as_dict()["partitions"] == ["p1.mom", "p1.spin", "p2.mom", "p2.spin"]

    product = partition_entropy_sum(from_state(friis_state(0, 0, P_PLUS, P_MINUS)), singles)
    assert product.total == pytest.approx(0.0, abs=1e-15)


def test_particle_partitions_agree(rng):
    for _ in range(30):
        rho = from_state(random_state(rng, n_momenta=int(rng.integers(1, 4))))
        e1 = linear_entropy(partial_trace(rho, PartitionSpec.particle(0)))
        e2 = linear_entropy(partial_trace(rho, PartitionSpec.particle(1)))
        assert e1 == pytest.approx(e2, abs=1e-10)


def test_complementary_partitions(rng):
    for n in (2, 3):
        rho = from_state(random_state(rng, n_particles=n))
        for part in every_partition(n)[:-1]:
            a = linear_entropy(partial_trace(rho, part))
            b = linear_entropy(partial_trace(rho, part.complement(n)))
            assert a == pytest.approx(b, abs=1e-10)


def test_reductions_are_valid_density_matrices(rng):
    for _ in range(10):
        rho = from_state(random_state(rng, n_particles=2, n_momenta=3))
        for part in every_partition(2):
            partial_trace(rho, part).check()


def test_oracle_trace_equivalence(rng):
    for _ in range(40):
        rho = from_state(random_state(rng, n_momenta=int(rng.integers(1, 3))))
        for part in every_partition(2):
            keep = [i for i, f in enumerate(rho.factors) if f in part.keep]
            ref = oracles.loop_partial_trace(rho.matrix, rho.dims, keep)
            np.testing.assert_allclose(partial_trace(rho, part).matrix, ref, atol=1e-12, rtol=0)


def test_sequential_trace_equals_joint(rng):
    rho = from_state(random_state(rng, n_particles=3))
    target = PartitionSpec.parse("p1.spin,p3.mom")
    joint = partial_trace(rho, target).matrix
    order_a = partial_trace(partial_trace(rho, PartitionSpec.parse("p1.spin,p2.mom,p3.mom")), target)
    order_b = partial_trace(partial_trace(rho, PartitionSpec.parse("p1.spin,p3.mom,p3.spin")), target)
    np.testing.assert_allclose(order_a.matrix, joint, atol=1e-12, rtol=0)
    np.testing.assert_allclose(order_b.matrix, joint, atol=1e-12, rtol=0)


def test_partial_trace_rejects_missing_factor(friis_quarter):
    rho = from_state(friis_quarter)
    with pytest.raises(InvalidArgumentError):
        partial_trace(rho, PartitionSpec.spin(2))
    red = partial_trace(rho, PartitionSpec.particle(0))
    with pytest.raises(InvalidArgumentError):
        partial_trace(red, PartitionSpec.spin(1))


def test_keep_everything_is_identity(friis_quarter):
    rho = from_state(friis_quarter)
    assert partial_trace(rho, PartitionSpec(frozenset(all_factors(2)))) is rho


def test_project_momentum():
    s = friis_state(math.pi / 4, math.pi / 8, P_PLUS, P_MINUS)
    rho = from_state(s)
    block = project_momentum(rho, 0, 0)
    assert block.factors == (Factor(0, SPIN), Factor(1, MOMENTUM), Factor(1, SPIN))
    block.check()
    # fixing p1 = p+ leaves p2 = p- and the spin pair cos b |ud> + sin b |du>
    spin = partial_trace(block, PartitionSpec.parse("p1.spin,p2.spin")).matrix
    v = np.array([0, math.cos(math.pi / 8), math.sin(math.pi / 8), 0])
    np.testing.assert_allclose(spin, np.outer(v, v), atol=1e-15)
    with pytest.raises(InvalidArgumentError):
        project_momentum(rho, 0, 5)
    with pytest.raises(InvalidArgumentError):
        project_momentum(from_state(friis_state(0, 0, P_PLUS, P_MINUS)), 0, 1)


def test_exact_entropies_match_float_path(rng):
    parts = every_partition(2)
    for _ in range(10):
        s = random_state(rng)
        exact = exact_linear_entropies(s, parts)
        rho = from_state(s)
        approx = [linear_entropy(partial_trace(rho, p)) for p in parts]
        np.testing.assert_allclose(exact, approx, atol=1e-14)


def test_exact_entropies_of_friis(friis_quarter):
    parts = [PartitionSpec.parse(x) for x in ("p1.spin", "particle1", "p1.spin,p2.spin")]
    single, particle, spins = exact_linear_entropies(friis_quarter, parts)
    assert (single, particle) == (0.5, 0.75)
    # the rounded amplitudes are not an exact product of the spin pair
    assert 0 <= spins < 1e-30


@pytest.mark.parametrize("text", ["p1.spin", "p2.mom", "particle1", "p1.spin,p2.mom", "p2.spin,p1.spin", "p1.mom,p1.spin"])
def test_selector_parse_print_parse(text):
    once = PartitionSpec.parse(text)
    assert PartitionSpec.parse(str(once)) == once
    assert str(PartitionSpec.parse(str(once))) == str(once)


@given(st.sets(st.tuples(st.integers(0, 4), st.sampled_from([SPIN, MOMENTUM])), min_size=1))
def test_selector_round_trip_property(factors):
    spec = PartitionSpec(frozenset(Factor(*f) for f in factors))
    assert PartitionSpec.parse(str(spec)) == spec


@pytest.mark.parametrize("bad", ["", "p0.spin", "p1.momentum", "particle0", "q1.spin", "p1.spin,,p2.spin"])
def test_selector_rejects(bad):
    with pytest.raises(InvalidArgumentError):
        PartitionSpec.parse(bad)


def test_selector_canonical_form():
    assert str(PartitionSpec.parse("p1.spin,p1.mom")) == "particle1"
    assert str(PartitionSpec.parse("p2.spin , p1.mom")) == "p1.mom,p2.spin"
