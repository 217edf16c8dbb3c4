"""Density matrices, partial traces over spin/momentum factors, linear entropy."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import InvalidArgumentError
from .state import SPIN_NAMES, StateVector

SPIN = "spin"
MOMENTUM = "momentum"
_DOF_ORDER = {MOMENTUM: 0, SPIN: 1}
_SELECTOR_DOF = {"spin": SPIN, "mom": MOMENTUM}


class Factor(NamedTuple):
    """A tensor factor: one particle's spin or momentum (particle is 0-based)."""

    particle: int
    dof: str

    def sort_key(self):
        return (self.particle, _DOF_ORDER[self.dof])

    def __str__(self):
        return f"p{self.particle + 1}.{'spin' if self.dof == SPIN else 'mom'}"


def all_factors(n_particles: int) -> tuple[Factor, ...]:
    """Canonical factor order: p1.mom, p1.spin, p2.mom, p2.spin, ..."""
    return tuple(Factor(k, dof) for k in range(n_particles) for dof in (MOMENTUM, SPIN))


@dataclass(frozen=True)
class PartitionSpec:
    """The factors kept by a reduction; everything else is traced out."""

    keep: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        keep = frozenset(Factor(int(f[0]), f[1]) for f in self.keep)
        for f in keep:
            if f.dof not in _DOF_ORDER or f.particle < 0:
                raise InvalidArgumentError(f"bad factor {f!r}")
        if not keep:
            raise InvalidArgumentError("a partition must keep at least one factor")
        object.__setattr__(self, "keep", keep)

    @classmethod
    def of(cls, *factors: Factor) -> PartitionSpec:
        return cls(frozenset(factors))

    @classmethod
    def particle(cls, k: int) -> PartitionSpec:
        return cls.of(Factor(k, MOMENTUM), Factor(k, SPIN))

    @classmethod
    def spin(cls, k: int) -> PartitionSpec:
        return cls.of(Factor(k, SPIN))

    @classmethod
    def momentum(cls, k: int) -> PartitionSpec:
        return cls.of(Factor(k, MOMENTUM))

    @classmethod
    def parse(cls, selector: str) -> PartitionSpec:
        """Parse ``p<k>.spin``, ``p<k>.mom`` or ``particle<k>``, comma-joined; k is 1-based."""
        factors = []
        for token in selector.split(","):
            token = token.strip()
            m = re.fullmatch(r"p(\d+)\.(spin|mom)", token)
            if m:
                k = int(m.group(1))
                if k < 1:
                    raise InvalidArgumentError(f"particle numbers start at 1: {token!r}")
                factors.append(Factor(k - 1, _SELECTOR_DOF[m.group(2)]))
                continue
            m = re.fullmatch(r"particle(\d+)", token)
            if m and int(m.group(1)) >= 1:
                k = int(m.group(1)) - 1
                factors += [Factor(k, MOMENTUM), Factor(k, SPIN)]
                continue
            raise InvalidArgumentError(f"bad partition selector {token!r}")
        return cls(frozenset(factors))

    @property
    def factors(self) -> tuple[Factor, ...]:
        return tuple(sorted(self.keep, key=Factor.sort_key))

    def complement(self, n_particles: int) -> PartitionSpec:
        return PartitionSpec(frozenset(all_factors(n_particles)) - self.keep)

    def __str__(self):
        parts = []
        for k, group in itertools.groupby(self.factors, key=lambda f: f.particle):
            group = list(group)
            parts += [f"particle{k + 1}"] if len(group) == 2 else [str(f) for f in group]
        return ",".join(parts)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A density matrix over the tensor product of ``factors``.

    ``labels[i]`` is the ordered alphabet of factor ``i`` (momentum labels,
    or the spin names), and the matrix is indexed by the row-major product
    of those alphabets.
    """

    factors: tuple[Factor, ...]
    labels: tuple[tuple, ...]
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        d = int(np.prod([len(a) for a in self.labels], dtype=int))
        if len(self.factors) != len(self.labels) or m.shape != (d, d):
            raise InvalidArgumentError(f"matrix shape {m.shape} does not match factor dims")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "factors", tuple(Factor(*f) for f in self.factors))
        object.__setattr__(self, "labels", tuple(tuple(a) for a in self.labels))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.labels)

    @property
    def basis(self) -> list[tuple]:
        return list(itertools.product(*self.labels))

    def check(self, atol: float = 1e-10, eig_tol: float = 1e-9) -> None:
        """Raise ``AssertionError`` unless Hermitian, unit trace and PSD."""
        m = self.matrix
        herm = float(np.max(np.abs(m - m.conj().T)))
        assert herm <= atol, f"not Hermitian (error {herm:.3e})"
        tr = complex(np.trace(m))
        assert abs(tr - 1.0) <= atol, f"trace is {tr}"
        low = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min())
        assert low >= -eig_tol, f"negative eigenvalue {low:.3e}"


def from_state(s: StateVector) -> DensityMatrix:
    """Projector |s><s| over every factor of the state."""
    psi = s.vector
    labels = []
    for alphabet in s.momenta:
        labels += [alphabet, SPIN_NAMES]
    return DensityMatrix(all_factors(s.particle_count), tuple(labels), np.outer(psi, psi.conj()))


def partial_trace(rho: DensityMatrix, keep: PartitionSpec) -> DensityMatrix:
    """Trace out every factor of ``rho`` not in ``keep``."""
    missing = keep.keep - set(rho.factors)
    if missing:
        raise InvalidArgumentError(f"factors {sorted(map(str, missing))} are not in this density matrix")
    n = len(rho.factors)
    kept = [i for i, f in enumerate(rho.factors) if f in keep.keep]
    if len(kept) == n:
        return rho
    tensor = rho.matrix.reshape(rho.dims * 2)
    # Row axes are 0..n-1, column axes n..2n-1; a traced factor shares its label.
    col = [n + i if i in kept else i for i in range(n)]
    out = np.einsum(tensor, list(range(n)) + col, kept + [n + i for i in kept])
    d = int(np.prod([rho.dims[i] for i in kept], dtype=int))
    return DensityMatrix(
        tuple(rho.factors[i] for i in kept),
        tuple(rho.labels[i] for i in kept),
        out.reshape(d, d),
    )


def project_momentum(rho: DensityMatrix, particle: int, index: int) -> DensityMatrix:
    """<a| rho |a>/Tr for a fixed momentum label of one particle, spin not summed.

    This reduction is not covariant; it exists to exhibit frame dependence.
    """
    f = Factor(particle, MOMENTUM)
    if f not in rho.factors:
        raise InvalidArgumentError(f"{f} is not in this density matrix")
    i = rho.factors.index(f)
    if not 0 <= index < rho.dims[i]:
        raise InvalidArgumentError(f"momentum index {index} out of range for {f}")
    tensor = rho.matrix.reshape(rho.dims * 2)
    n = len(rho.dims)
    block = tensor[(slice(None),) * i + (index,) + (slice(None),) * (n - 1) + (index,)]
    rest = [j for j in range(n) if j != i]
    d = int(np.prod([rho.dims[j] for j in rest], dtype=int))
    block = block.reshape(d, d)
    tr = np.trace(block).real
    if tr <= 0:
        raise InvalidArgumentError(f"momentum label {index} of {f} carries no weight")
    return DensityMatrix(
        tuple(rho.factors[j] for j in rest),
        tuple(rho.labels[j] for j in rest),
        block / tr,
    )


def purity(rho: DensityMatrix) -> float:
    """Tr rho^2 (for Hermitian rho this is the squared Frobenius norm)."""
    return float(np.vdot(rho.matrix, rho.matrix).real)


def linear_entropy(rho: DensityMatrix) -> float:
    return 1.0 - purity(rho)


@dataclass(frozen=True)
class EntropyReport:
    partitions: tuple[PartitionSpec, ...]
    entropies: tuple[float, ...]

    @property
    def total(self) -> float:
        return float(sum(self.entropies))

    def as_dict(self) -> dict:
        return {
            "partitions": [str(p) for p in self.partitions],
            "entropies": list(self.entropies),
            "sum": self.total,
        }


def partition_entropy_sum(rho: DensityMatrix, partitions: Iterable[PartitionSpec]) -> EntropyReport:
    partitions = tuple(partitions)
    return EntropyReport(partitions, tuple(linear_entropy(partial_trace(rho, p)) for p in partitions))


def state_entropies(s: StateVector, partitions: Sequence[PartitionSpec]) -> EntropyReport:
    return partition_entropy_sum(from_state(s), partitions)


def _scaled_ints(values: np.ndarray) -> tuple[np.ndarray, int]:
    """Exact integer mantissas sharing one power-of-two exponent."""
    flat = [float(v) for v in np.asarray(values, dtype=float).reshape(-1)]
    parts = [v.as_integer_ratio() for v in flat]
    # Every finite double is n / 2^k; bring all of them over the largest 2^k.
    shift = max(d.bit_length() - 1 for _, d in parts)
    ints = np.empty(len(flat), dtype=object)
    ints[:] = [n << (shift - (d.bit_length() - 1)) for n, d in parts]
    return ints.reshape(np.shape(values)), shift


def exact_linear_entropies(
    s: StateVector, partitions: Sequence[PartitionSpec], phase: float | None = None
) -> tuple[float, ...]:
    """Linear entropies of ``s`` evaluated in exact rational arithmetic.

    With ``phase`` given, the amplitudes are first multiplied by the double
    pair (cos phase, sin phase), also exactly.  Each result is the correctly
    rounded value of 1 - Tr(rho_K^2) / Tr(rho)^2 for the unnormalized
    exact state, so it depends only on the ray the amplitudes span.
    """
    amps = s.amplitudes
    re, _ = _scaled_ints(np.concatenate([amps.real.reshape(-1), amps.imag.reshape(-1)]))
    size = amps.size
    re, im = re[:size].reshape(amps.shape), re[size:].reshape(amps.shape)
    if phase is not None:
        (c, sn), _ = _scaled_ints(np.array([np.cos(phase), np.sin(phase)]))
        re, im = c * re - sn * im, c * im + sn * re
    norm = int((re * re + im * im).sum())
    factors = all_factors(s.particle_count)
    out = []
    for part in partitions:
        missing = part.keep - set(factors)
        if missing:
            raise InvalidArgumentError(f"factors {sorted(map(str, missing))} are not in this state")
        kept = [i for i, f in enumerate(factors) if f in part.keep]
        rest = [i for i in range(len(factors)) if i not in kept]
        dk = int(np.prod([amps.shape[i] for i in kept], dtype=int))
        mr = np.transpose(re, kept + rest).reshape(dk, -1)
        mi = np.transpose(im, kept + rest).reshape(dk, -1)
        rho_re = mr.dot(mr.T) + mi.dot(mi.T)
        rho_im = mi.dot(mr.T) - mr.dot(mi.T)
        pur = int((rho_re * rho_re + rho_im * rho_im).sum())
        out.append(float(Fraction(norm * norm - pur, norm * norm)))
    return tuple(out)
