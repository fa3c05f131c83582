"""Finite-level verifier for perfectoid towers, their tilts and Kummer covers.

Every function returns the decoded JSON report of the matching CLI command.
Tower specs may be given as dicts or JSON strings.
"""

import json

from . import _tiltlab
from ._tiltlab import TiltlabError, schema, semigroup_conductor

__all__ = [
    "TiltlabError",
    "axioms",
    "closure",
    "criterion",
    "delta_table",
    "pure",
    "kummer",
    "ramify",
    "schema",
    "semigroup_conductor",
    "sharp",
    "tilt",
]


def _spec(spec):
    return spec if isinstance(spec, str) else json.dumps(spec)


def pure(p=5, n_digits=6, depth=3, num_vars=0, var_degree_cap="0"):
    return {"prime": p, "n_digits": n_digits, "depth": depth, "kind": "pure",
            "num_vars": num_vars, "var_degree_cap": str(var_degree_cap)}


def kummer(p=5, m=2, eps="3/25", start_level=3, n_digits=6, depth=3):
    return {"prime": p, "n_digits": n_digits, "depth": depth, "kind": "kummer", "m": m,
            "ideal_exp": str(eps), "start_level": start_level}


def axioms(spec, samples=200, seed=7):
    return json.loads(_tiltlab.axioms(_spec(spec), samples, seed))


def tilt(spec, layer, depth, element="", idempotents=False, torsion=False):
    return json.loads(_tiltlab.tilt(_spec(spec), layer, depth, element, idempotents, torsion))


def sharp(spec, layer, depth, element="pflat", randomized=False, seed=7):
    return json.loads(_tiltlab.sharp(_spec(spec), layer, depth, element, randomized, seed))


def closure(spec, check="root_closed", layer=0, exact=False, samples=1000, seed=7):
    return json.loads(_tiltlab.closure(_spec(spec), check, layer, exact, samples, seed))


def ramify(p=5, m=2, levels=5, prec=6, depth=3, samples=200, normality_samples=1000, seed=7, force_eps=None):
    return json.loads(_tiltlab.ramify(p, m, levels, prec, depth, samples, normality_samples, seed, force_eps))


def delta_table(p, m, levels=5):
    return json.loads(_tiltlab.delta_table(p, m, levels))


def criterion(id, seed=7):
    return json.loads(_tiltlab.criterion(id, seed))
