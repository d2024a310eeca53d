"""Named scalar functions usable with the contour engine and the CLI.

Each entry evaluates elementwise on complex scalars or numpy arrays and
knows the distance from a given center to its nearest singularity, so
callers can validate contour radii and bound parameters. Branch-cut
functions use the principal branch.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidInputError


def _on_complex(fn):
    """Wrap an array function so scalars map to scalars, arrays to arrays."""
    def wrapped(z):
        arr = np.asarray(z, dtype=np.complex128)
        with np.errstate(all="ignore"):
            out = fn(arr)
        return complex(out) if arr.ndim == 0 else out
    return wrapped


def _entire(center, exclude=()):
    return math.inf


def _point_set(points):
    """Distance to the nearest of finitely many singular points."""
    def dist(center, exclude=()):
        c = complex(center)
        best = math.inf
        for p in points:
            if any(abs(p - complex(e)) < 1e-12 for e in exclude):
                continue
            best = min(best, abs(c - p))
        return best
    return dist


def _left_ray(x0):
    """Distance to the branch cut {x real : x <= x0}."""
    def dist(center, exclude=()):
        c = complex(center)
        if c.real <= x0:
            return abs(c.imag)
        return abs(c - x0)
    return dist


def _pi_lattice(center, exclude=()):
    # poles of 1/sin at every integer multiple of pi; scan a window wide
    # enough to survive any plausible exclusion list
    c = complex(center)
    k0 = round(c.real / math.pi)
    span = len(exclude) + 3
    best = math.inf
    for k in range(k0 - span, k0 + span + 1):
        p = k * math.pi
        if any(abs(p - complex(e)) < 1e-12 for e in exclude):
            continue
        best = min(best, abs(c - p))
    return best


@dataclass(frozen=True)
class ScalarFunction:
    """A named scalar function with singularity metadata.

    evaluate acts elementwise on complex input. holomorphy_radius(center)
    is the largest radius of a disc about center on which the function is
    holomorphic; pole locations passed via `exclude` are ignored, which is
    how callers account for poles they correct separately.
    """

    name: str
    evaluate: Callable = field(repr=False)
    _distance: Callable = field(repr=False)

    def __call__(self, z):
        return self.evaluate(z)

    def holomorphy_radius(self, center=0.0, exclude=()):
        return self._distance(center, exclude)


_REGISTRY = {
    f.name: f
    for f in (
        ScalarFunction("exp", _on_complex(np.exp), _entire),
        ScalarFunction("log_shift4", _on_complex(lambda z: np.log(z + 4.0)), _left_ray(-4.0)),
        ScalarFunction("sqrt_shift4", _on_complex(lambda z: np.sqrt(z + 4.0)), _left_ray(-4.0)),
        ScalarFunction("exp_over_sin", _on_complex(lambda z: np.exp(z) / np.sin(z)), _pi_lattice),
        ScalarFunction("inv", _on_complex(lambda z: 1.0 / z), _point_set((0.0,))),
        ScalarFunction("identity", _on_complex(lambda z: z + 0.0), _entire),
        ScalarFunction("one", _on_complex(np.ones_like), _entire),
    )
}


def function_names():
    return sorted(_REGISTRY)


def get_function(name):
    try:
        return _REGISTRY[name]
    except KeyError:
        raise InvalidInputError(
            f"unknown function {name!r}; available: {', '.join(function_names())}"
        ) from None
