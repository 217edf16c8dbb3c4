"""Multi-particle spin-1/2 states over discrete momentum labels.

A state stores, for every particle, an ordered alphabet of momentum labels
and a dense amplitude tensor of shape ``(M1, 2, M2, 2, ...)``: axis ``2k``
indexes particle k's momentum alphabet, axis ``2k+1`` its spin (0 = up,
1 = down).  Labels keep their insertion order, which fixes the basis
ordering of every density matrix built downstream.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InvalidArgumentError, NumericalDegradationError
from .lorentz import LorentzTransform, MomentumLabel, spin_matrices

__all__ = [
    "MomentumLabel",
    "Mode",
    "StateVector",
    "UP",
    "DOWN",
    "make_state",
    "friis_state",
    "boost_state",
    "inner_product",
    "normalize",
    "with_global_phase",
]

UP, DOWN = 0, 1
SPIN_NAMES = ("up", "down")
NORM_TOL = 1e-10


def spin_index(spin) -> int:
    if isinstance(spin, str):
        key = spin.lower()
        if key in ("up", "u", "+"):
            return UP
        if key in ("down", "d", "dn", "-"):
            return DOWN
    elif spin in (0, 1) and not isinstance(spin, bool):
        return int(spin)
    raise InvalidArgumentError(f"spin must be up/down or 0/1, got {spin!r}")


class Mode(NamedTuple):
    """One particle's slot in a configuration."""

    momentum: MomentumLabel
    spin: int


Configuration = tuple  # tuple[Mode, ...], one entry per particle


def _intern(alphabet: list[MomentumLabel], label: MomentumLabel) -> int:
    for i, known in enumerate(alphabet):
        if known.matches(label):
            return i
    alphabet.append(label)
    return len(alphabet) - 1


@dataclass(frozen=True, eq=False)
class StateVector:
    momenta: tuple[tuple[MomentumLabel, ...], ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        momenta = tuple(tuple(alpha) for alpha in self.momenta)
        amps = np.array(self.amplitudes, dtype=complex)
        shape = tuple(d for alpha in momenta for d in (len(alpha), 2))
        if not momenta or amps.shape != shape:
            raise InvalidArgumentError(f"amplitude shape {amps.shape} does not match alphabets {shape}")
        amps.setflags(write=False)
        object.__setattr__(self, "momenta", momenta)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def particle_count(self) -> int:
        return len(self.momenta)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.amplitudes.shape

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    @property
    def terms(self) -> list[tuple[complex, Configuration]]:
        """Nonzero (amplitude, configuration) pairs in basis order."""
        out = []
        for idx in zip(*np.nonzero(self.amplitudes)):
            config = tuple(
                Mode(self.momenta[k][idx[2 * k]], int(idx[2 * k + 1])) for k in range(self.particle_count)
            )
            out.append((complex(self.amplitudes[idx]), config))
        return out

    def __repr__(self):
        return f"StateVector(particles={self.particle_count}, dims={self.dims}, terms={len(self.terms)})"


def normalize(s: StateVector) -> StateVector:
    n = s.norm()
    if not n > 0 or not math.isfinite(n):
        raise InvalidArgumentError("cannot normalize a zero-norm state")
    return StateVector(s.momenta, s.amplitudes / n)


def make_state(terms: Sequence[tuple[complex, Sequence]]) -> StateVector:
    """Build a normalized state from ``(amplitude, configuration)`` pairs.

    A configuration is a sequence of ``(MomentumLabel, spin)`` per particle.
    Repeated configurations (momenta compared up to the merge tolerance)
    have their amplitudes summed.
    """
    terms = list(terms)
    if not terms:
        raise InvalidArgumentError("a state needs at least one term")
    n = len(terms[0][1])
    if n < 1:
        raise InvalidArgumentError("configurations need at least one particle")
    alphabets: list[list[MomentumLabel]] = [[] for _ in range(n)]
    entries = []
    for amp, config in terms:
        if len(config) != n:
            raise InvalidArgumentError(f"mixed particle counts: {len(config)} vs {n}")
        index = []
        for k, (label, spin) in enumerate(config):
            if not isinstance(label, MomentumLabel):
                raise InvalidArgumentError(f"expected a MomentumLabel, got {label!r}")
            index += [_intern(alphabets[k], label), spin_index(spin)]
        entries.append((complex(amp), tuple(index)))
    amps = np.zeros(tuple(d for alpha in alphabets for d in (len(alpha), 2)), dtype=complex)
    for amp, index in entries:
        amps[index] += amp
    return normalize(StateVector(tuple(map(tuple, alphabets)), amps))


def friis_state(alpha: float, beta: float, p_plus: MomentumLabel, p_minus: MomentumLabel) -> StateVector:
    """(cos a |p+, p-> + sin a |p-, p+>) (cos b |up, down> + sin b |down, up>)."""
    if p_plus.matches(p_minus):
        raise InvalidArgumentError("p_plus and p_minus coincide; the momentum qubit degenerates")
    ca, sa, cb, sb = math.cos(alpha), math.sin(alpha), math.cos(beta), math.sin(beta)
    return make_state(
        [
            (ca * cb, [(p_plus, UP), (p_minus, DOWN)]),
            (ca * sb, [(p_plus, DOWN), (p_minus, UP)]),
            (sa * cb, [(p_minus, UP), (p_plus, DOWN)]),
            (sa * sb, [(p_minus, DOWN), (p_plus, UP)]),
        ]
    )


def boost_state(s: StateVector, lam: LorentzTransform) -> StateVector:
    """Apply U(Lambda) to every particle.

    Particle k with momentum p and spin sigma goes to momentum Lambda p with
    spin amplitudes given by column sigma of D[W(Lambda, p)].
    """
    if lam.is_identity():
        return s
    amps = s.amplitudes
    momenta = []
    flat = [p for alphabet in s.momenta for p in alphabet]
    d_all, images_all = spin_matrices(lam, flat)
    start = 0
    for k, alphabet in enumerate(s.momenta):
        stop = start + len(alphabet)
        d, images = d_all[start:stop], images_all[start:stop]
        start = stop
        moved = np.moveaxis(amps, (2 * k, 2 * k + 1), (0, 1))
        moved = np.einsum("mls,ms...->ml...", d, moved)
        amps = np.moveaxis(moved, (0, 1), (2 * k, 2 * k + 1))

        new_alphabet: list[MomentumLabel] = []
        target = [_intern(new_alphabet, q) for q in images]
        if len(new_alphabet) < len(alphabet):
            # Boosted labels collided within the merge tolerance: fold them.
            moved = np.moveaxis(amps, 2 * k, 0)
            folded = np.zeros((len(new_alphabet),) + moved.shape[1:], dtype=complex)
            np.add.at(folded, target, moved)
            amps = np.moveaxis(folded, 0, 2 * k)
        momenta.append(tuple(new_alphabet))
    out = StateVector(tuple(momenta), amps)
    drift = abs(out.norm() - s.norm())
    if drift > NORM_TOL:
        raise NumericalDegradationError(f"boost changed the norm by {drift:.3e}")
    return out


def _match_indices(a: Sequence[MomentumLabel], b: Sequence[MomentumLabel]):
    ia, ib = [], []
    for i, p in enumerate(a):
        for j, q in enumerate(b):
            if p.matches(q):
                ia.append(i)
                ib.append(j)
                break
    return ia, ib


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, matching momentum labels up to the merge tolerance."""
    if a.particle_count != b.particle_count:
        raise InvalidArgumentError(f"particle counts differ: {a.particle_count} vs {b.particle_count}")
    sel_a, sel_b = [], []
    for alpha_a, alpha_b in zip(a.momenta, b.momenta):
        ia, ib = _match_indices(alpha_a, alpha_b)
        if not ia:
            return 0j
        sel_a += [ia, [UP, DOWN]]
        sel_b += [ib, [UP, DOWN]]
    return complex(np.vdot(a.amplitudes[np.ix_(*sel_a)], b.amplitudes[np.ix_(*sel_b)]))


def with_global_phase(s: StateVector, phase: float) -> StateVector:
    return StateVector(s.momenta, s.amplitudes * np.exp(1j * phase))
