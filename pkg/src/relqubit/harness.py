"""Seeded numerical experiments on frame dependence of partition entropies."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import lorentz as lz
from .density import (
    PartitionSpec,
    all_factors,
    exact_linear_entropies,
    from_state,
    linear_entropy,
    partial_trace,
)
from .errors import InvalidArgumentError
from .lorentz import LorentzTransform, MomentumLabel
from .state import StateVector, boost_state, friis_state, inner_product, make_state, normalize

DEFAULT_TOL = 1e-9

Sampler = Callable[[np.random.Generator], LorentzTransform]


def random_direction(rng: np.random.Generator) -> np.ndarray:
    while True:
        v = rng.standard_normal(3)
        n = np.linalg.norm(v)
        if n > 1e-12:
            return v / n


def random_rotation(rng: np.random.Generator) -> LorentzTransform:
    # A normalized Gaussian quaternion is Haar-uniform on SO(3).
    q = rng.standard_normal(4)
    q /= np.linalg.norm(q)
    if q[0] < 0:
        q = -q
    s = np.linalg.norm(q[1:])
    if s < 1e-15:
        return LorentzTransform.identity()
    return lz.rotation_about_axis(q[1:] / s, 2.0 * math.atan2(s, q[0]))


def random_boost(rng: np.random.Generator, max_rapidity: float, rotate: bool = True) -> LorentzTransform:
    """Boost along a uniform random direction, rapidity uniform in [0, max_rapidity].

    With ``rotate`` the boost is followed by a Haar-random rotation.
    """
    if not max_rapidity > 0:
        raise InvalidArgumentError(f"max_rapidity must be positive, got {max_rapidity!r}")
    lam = lz.boost_along_axis(random_direction(rng), rng.uniform(0.0, max_rapidity))
    if rotate:
        lam = lz.compose(random_rotation(rng), lam)
    return lam


def random_momentum(rng: np.random.Generator, mass: float = 1.0, max_rapidity: float = 1.5) -> MomentumLabel:
    return MomentumLabel.along(random_direction(rng), rng.uniform(0.0, max_rapidity), mass)


def random_state(
    rng: np.random.Generator,
    n_particles: int = 2,
    n_momenta: int = 2,
    mass: float = 1.0,
) -> StateVector:
    """Random pure state with Gaussian amplitudes on every configuration."""
    alphabets = [[random_momentum(rng, mass) for _ in range(n_momenta)] for _ in range(n_particles)]
    shape = (n_momenta, 2) * n_particles
    amps = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    terms = []
    for idx in np.ndindex(*shape):
        config = [(alphabets[k][idx[2 * k]], idx[2 * k + 1]) for k in range(n_particles)]
        terms.append((amps[idx], config))
    return make_state(terms)


def entropies(s: StateVector, partitions: Sequence[PartitionSpec]) -> list[float]:
    rho = from_state(s)
    return [linear_entropy(partial_trace(rho, p)) for p in partitions]


@dataclass(frozen=True)
class ScanReport:
    partition: PartitionSpec
    samples: int
    baseline: float
    max_deviation: float
    tolerance: float

    @property
    def verdict(self) -> str:
        return "invariant" if self.max_deviation <= self.tolerance else "varies"

    def as_dict(self) -> dict:
        return {
            "partition": str(self.partition),
            "samples": self.samples,
            "baseline": self.baseline,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
        }


def scan_partitions(
    s: StateVector,
    partitions: Sequence[PartitionSpec],
    n: int,
    max_rapidity: float = 3.0,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    sampler: Sampler | None = None,
) -> list[ScanReport]:
    """Run one invariance scan per partition, sharing the same boost samples."""
    if n < 1:
        raise InvalidArgumentError(f"need at least one sample, got {n}")
    rng = np.random.default_rng(seed)
    if sampler is None:
        sampler = lambda g: random_boost(g, max_rapidity)  # noqa: E731
    baseline = entropies(s, partitions)
    worst = [0.0] * len(partitions)
    for _ in range(n):
        boosted = entropies(boost_state(s, sampler(rng)), partitions)
        worst = [max(w, abs(e - b)) for w, e, b in zip(worst, boosted, baseline)]
    return [ScanReport(p, n, b, w, tol) for p, b, w in zip(partitions, baseline, worst)]


def invariance_scan(
    s: StateVector,
    partition: PartitionSpec,
    n: int,
    max_rapidity: float = 3.0,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    sampler: Sampler | None = None,
) -> ScanReport:
    return scan_partitions(s, [partition], n, max_rapidity, tol, seed, sampler)[0]


@dataclass(frozen=True)
class SweepTable:
    columns: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]

    def column(self, name: str) -> np.ndarray:
        return np.array([r[self.columns.index(name)] for r in self.rows])


def entropy_sweep(
    s: StateVector,
    axis,
    rapidities: Sequence[float],
    partitions: Sequence[PartitionSpec],
) -> SweepTable:
    """Entropies of every partition along a one-parameter family of boosts.

    Columns: ``rapidity``, one per partition (named by its selector), ``sum``.
    """
    rapidities = list(rapidities)
    if not rapidities:
        raise InvalidArgumentError("rapidity grid is empty")
    n = lz.unit_axis(axis)
    rows = []
    for r in rapidities:
        lam = LorentzTransform.identity() if r == 0 else lz.boost_along_axis(n, r)
        e = entropies(boost_state(s, lam), partitions)
        rows.append((float(r), *e, float(sum(e))))
    return SweepTable(("rapidity", *(str(p) for p in partitions), "sum"), tuple(rows))


def phase_invariance_check(s: StateVector, phase: float, partitions: Sequence[PartitionSpec]) -> bool:
    """True iff multiplying every amplitude by e^{i phase} leaves each entropy bit-identical.

    Both sides are evaluated in exact arithmetic and rounded once, so the
    comparison is not blurred by rounding of the rotated amplitudes.
    """
    return exact_linear_entropies(s, partitions) == exact_linear_entropies(s, partitions, phase=phase)


# ----------------------------------------------------------------------------
# full invariant suite, used by `relqubit verify`
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tolerance: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name:<38s} worst={self.worst:.3e} tol={self.tolerance:.0e}"


def reference_partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Partial trace by explicit loops over all basis pairs (slow reference)."""
    dims = list(dims)
    index = list(np.ndindex(*dims))
    kept_dims = [dims[i] for i in keep]
    kept_index = {k: j for j, k in enumerate(np.ndindex(*kept_dims))}
    out = np.zeros((len(kept_index), len(kept_index)), dtype=complex)
    for a, ia in enumerate(index):
        for b, ib in enumerate(index):
            if any(ia[i] != ib[i] for i in range(len(dims)) if i not in keep):
                continue
            out[kept_index[tuple(ia[i] for i in keep)], kept_index[tuple(ib[i] for i in keep)]] += rho[a, b]
    return out


def _all_partitions(n_particles: int) -> list[PartitionSpec]:
    factors = all_factors(n_particles)
    out = []
    for mask in range(1, 2 ** len(factors)):
        out.append(PartitionSpec(frozenset(f for i, f in enumerate(factors) if mask >> i & 1)))
    return out


def verify_suite(seed: int = 0, samples: int = 200) -> list[CheckResult]:
    """Metric, little-group, representation, unitarity and trace-oracle checks."""
    rng = np.random.default_rng(seed)
    results = []

    worst = 0.0
    for _ in range(samples):
        m = random_boost(rng, 3.0).matrix
        worst = max(worst, float(np.max(np.abs(m.T @ lz.METRIC @ m - lz.METRIC))))
    results.append(CheckResult("metric preservation", worst <= 1e-12, worst, 1e-12))

    little, comp, adj = 0.0, 0.0, 0.0
    for _ in range(samples):
        l1, l2, p = random_boost(rng, 3.0), random_boost(rng, 3.0), random_momentum(rng)
        w = lz.wigner_matrix(l1, p)
        little = max(little, float(np.max(np.abs(w[0] - [1, 0, 0, 0]))), float(np.max(np.abs(w[1:, 0]))))
        lhs = lz.wigner_rotation(lz.compose(l2, l1), p).matrix
        rhs = lz.wigner_rotation(l2, p.transformed(l1)).matrix @ lz.wigner_rotation(l1, p).matrix
        comp = max(comp, float(np.max(np.abs(lhs - rhs))))
        r = lz.wigner_rotation(l1, p)
        adj = max(adj, float(np.max(np.abs(lz.su2_lift(r).rotation_matrix() - r.matrix))))
    results.append(CheckResult("little group fixes rest momentum", little <= 1e-10, little, 1e-10))
    results.append(CheckResult("Wigner composition law", comp <= 1e-9, comp, 1e-9))
    results.append(CheckResult("SU(2) lift adjoint action", adj <= 1e-10, adj, 1e-10))

    unit = 0.0
    for _ in range(max(1, samples // 4)):
        a, lam = random_state(rng), random_boost(rng, 3.0)
        b = normalize(StateVector(a.momenta, rng.standard_normal(a.dims) + 1j * rng.standard_normal(a.dims)))
        unit = max(unit, abs(inner_product(boost_state(a, lam), boost_state(b, lam)) - inner_product(a, b)))
    results.append(CheckResult("boost unitarity", unit <= 1e-9, unit, 1e-9))

    trace = 0.0
    parts = _all_partitions(2)
    for _ in range(max(1, samples // 20)):
        rho = from_state(random_state(rng))
        for part in parts:
            keep = [i for i, f in enumerate(rho.factors) if f in part.keep]
            ref = reference_partial_trace(rho.matrix, rho.dims, keep)
            trace = max(trace, float(np.max(np.abs(partial_trace(rho, part).matrix - ref))))
    results.append(CheckResult("partial trace vs loop reference", trace <= 1e-12, trace, 1e-12))

    friis = friis_state(math.pi / 4, math.pi / 4, MomentumLabel(1.0, 0, 0, 1.0), MomentumLabel(1.0, 0, 0, -1.0))
    report = invariance_scan(friis, PartitionSpec.particle(0), samples, 3.0, DEFAULT_TOL, seed)
    results.append(CheckResult("particle partition invariance", report.verdict == "invariant",
                               report.max_deviation, DEFAULT_TOL))
    return results
