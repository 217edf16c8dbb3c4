"""JSON state specification files.

Explicit form::

    {
      "particles": 2,
      "momenta": [{"mass": 1.0, "p": [0, 0, 1]}, {"mass": 1.0, "p": [0, 0, -1]}],
      "terms": [
        {"amplitude": [0.7071067811865476, 0.0], "config": [[0, "up"], [1, "down"]]},
        {"amplitude": [0.0, 0.7071067811865476], "config": [[1, "up"], [0, "down"]]}
      ]
    }

``config`` lists one ``[momentum index, spin]`` pair per particle; the index
points into the shared ``momenta`` table.  Amplitudes need not be
normalized.

Friis shorthand::

    {"friis": {"alpha": 0.785, "beta": 0.785, "p_plus": {"mass": 1, "p": [0, 0, 1]},
               "p_minus": {"mass": 1, "p": [0, 0, -1]}}}

where ``p_plus``/``p_minus`` may be replaced by ``pz`` and ``mass`` for
momenta +-pz along z.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

from .errors import InvalidArgumentError
from .lorentz import MomentumLabel
from .state import SPIN_NAMES, StateVector, friis_state, make_state


class SpecError(InvalidArgumentError):
    """Malformed state specification."""


def _label(obj) -> MomentumLabel:
    try:
        return MomentumLabel.from_three_momentum(float(obj["mass"]), [float(c) for c in obj["p"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"bad momentum entry {obj!r}: {exc}") from None


def friis_from_params(params: dict) -> StateVector:
    try:
        alpha, beta = float(params["alpha"]), float(params["beta"])
    except (KeyError, TypeError, ValueError):
        raise SpecError("friis stanza needs numeric alpha and beta") from None
    if "p_plus" in params or "p_minus" in params:
        p_plus, p_minus = _label(params.get("p_plus")), _label(params.get("p_minus"))
    else:
        try:
            pz, mass = float(params.get("pz", 1.0)), float(params.get("mass", 1.0))
        except (TypeError, ValueError):
            raise SpecError("friis pz and mass must be numbers") from None
        p_plus = MomentumLabel(mass, 0.0, 0.0, pz)
        p_minus = MomentumLabel(mass, 0.0, 0.0, -pz)
    return friis_state(alpha, beta, p_plus, p_minus)


def state_from_dict(doc: dict) -> StateVector:
    if not isinstance(doc, dict):
        raise SpecError("state spec must be a JSON object")
    if "friis" in doc:
        return friis_from_params(doc["friis"])
    try:
        momenta = [_label(m) for m in doc["momenta"]]
        n = int(doc["particles"])
        raw_terms = doc["terms"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"state spec needs particles, momenta and terms ({exc})") from None
    terms = []
    for t in raw_terms:
        try:
            re_, im_ = (float(x) for x in t["amplitude"])
            config = [(momenta[int(i)], spin) for i, spin in t["config"]]
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise SpecError(f"bad term {t!r}: {exc}") from None
        if len(config) != n:
            raise SpecError(f"term {t!r} does not have {n} particles")
        terms.append((complex(re_, im_), config))
    return make_state(terms)


def load_state(path) -> StateVector:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path} is not valid JSON: {exc}") from None
    return state_from_dict(doc)


def state_to_dict(s: StateVector) -> dict:
    """Explicit-form document for ``s`` (momenta listed per particle)."""
    table, offsets = [], []
    for alphabet in s.momenta:
        offsets.append(len(table))
        table += [{"mass": p.mass, "p": [p.px, p.py, p.pz]} for p in alphabet]
    terms = []
    for amp, config in s.terms:
        idx = []
        for k, mode in enumerate(config):
            i = next(j for j, p in enumerate(s.momenta[k]) if p is mode.momentum)
            idx.append([offsets[k] + i, SPIN_NAMES[mode.spin]])
        terms.append({"amplitude": [amp.real, amp.imag], "config": idx})
    return {"particles": s.particle_count, "momenta": table, "terms": terms}


def parse_keyvals(text: str) -> dict[str, str]:
    """``"a=1,b=2"`` -> ``{"a": "1", "b": "2"}``; a bracketed value may hold commas."""
    out, depth, key, buf = {}, 0, None, ""
    for ch in text + ",":
        if ch in "<([":
            depth += 1
        elif ch in ">)]":
            depth -= 1
        if ch == "=" and depth == 0 and key is None:
            key, buf = buf.strip(), ""
        elif ch == "," and depth == 0:
            if key is None:
                if buf.strip():
                    raise SpecError(f"expected key=value, got {buf.strip()!r}")
            else:
                out[key] = buf.strip()
            key, buf = None, ""
        else:
            buf += ch
    return out


def parse_friis_option(text: str) -> StateVector:
    kv = parse_keyvals(text)
    unknown = set(kv) - {"alpha", "beta", "pz", "mass"}
    if unknown:
        raise SpecError(f"unknown --friis keys: {sorted(unknown)}")
    try:
        params = {k: float(v) for k, v in kv.items()}
    except ValueError:
        raise SpecError(f"--friis values must be numbers: {text!r}") from None
    if not all(math.isfinite(v) for v in params.values()):
        raise SpecError("--friis values must be finite")
    return friis_from_params(params)
