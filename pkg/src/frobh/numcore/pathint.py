"""Complex path construction with singularity detours, branch-tracked logs,
and Gauss-Legendre quadrature along paths.

Paths are straight segments with counterclockwise semicircular detours of
radius half-the-distance-to-the-nearest-other-singularity.  The path is
discretized into pieces short enough that every log branch can be continued
with principal-log increments; branch values are then available at every
quadrature node and at the path end.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..errors import PathThroughSingularity
from .scalars import stable_nlog

_GL_NODES = {}


def gl_nodes(n=32):
    if n not in _GL_NODES:
        x, w = np.polynomial.legendre.leggauss(n)
        _GL_NODES[n] = (x, w)
    return _GL_NODES[n]


def _principal_step(logs, z_from, z_to):
    out = {}
    for g, v in logs.items():
        out[g] = v + cmath.log((z_to - g) / (z_from - g))
    return out


class TrackedPath:
    """Discretized detoured path from a to b with branch-tracked logs.

    gammas: branch points of log factors the integrand needs.
    singularities: points the path must detour around (excluding endpoints).
    """

    def __init__(self, a, b, singularities=(), gammas=(), endpoint_exclude=()):
        self.a = complex(a)
        self.b = complex(b)
        self.gammas = [complex(g) for g in gammas]
        sing = [complex(s) for s in singularities]
        excl = [complex(e) for e in endpoint_exclude] + [self.a, self.b]
        self.pieces = self._build(sing, excl)

    # -- geometry ----------------------------------------------------
    def _build(self, sing, excl):
        d = self.b - self.a
        length = abs(d)
        if length < 1e-300:
            return []
        u = d / length
        events = []
        for i, s in enumerate(sing):
            if any(abs(s - e) < 1e-13 * (1 + abs(s)) for e in excl):
                continue
            t = ((s - self.a) / u).real
            if t <= 1e-12 or t >= length - 1e-12:
                continue
            dist = abs(self.a + t * u - s)
            others = [abs(s - o) for o in sing if abs(s - o) > 1e-14]
            others += [abs(s - self.a), abs(s - self.b)]
            r = 0.5 * min(others) if others else 0.5 * length
            r = min(r, 0.45 * length)
            if dist >= r * 0.999:
                continue
            half = math.sqrt(max(r * r - dist * dist, 0.0))
            t0, t1 = t - half, t + half
            if t0 <= 1e-12 or t1 >= length - 1e-12:
                raise PathThroughSingularity(
                    f"detour around {s} does not fit on the segment")
            events.append((t0, t1, s, r))
        events.sort(key=lambda e: e[0])
        pieces = []
        cur = 0.0
        for t0, t1, s, r in events:
            if t0 < cur - 1e-12:
                raise PathThroughSingularity("overlapping detours on path")
            self._add_line(pieces, self.a + cur * u, self.a + t0 * u, sing)
            p0 = self.a + t0 * u
            p1 = self.a + t1 * u
            th0 = cmath.phase(p0 - s)
            th1 = cmath.phase(p1 - s)
            while th1 <= th0:
                th1 += 2 * math.pi
            nsub = max(1, int(math.ceil((th1 - th0) / (math.pi / 4))))
            for j in range(nsub):
                pieces.append(("arc", s, r, th0 + (th1 - th0) * j / nsub,
                               th0 + (th1 - th0) * (j + 1) / nsub))
            cur = t1
        self._add_line(pieces, self.a + cur * u, self.b, sing)
        return pieces

    def _add_line(self, pieces, p0, p1, sing):
        if abs(p1 - p0) < 1e-300:
            return
        mid = 0.5 * (p0 + p1)
        dmin = min((abs(mid - s) for s in sing), default=float("inf"))
        dmin = min(dmin, *(abs(mid - g) for g in self.gammas)) if self.gammas else dmin
        if abs(p1 - p0) > 0.8 * dmin and abs(p1 - p0) > 1e-12:
            self._add_line(pieces, p0, mid, sing)
            self._add_line(pieces, mid, p1, sing)
        else:
            pieces.append(("line", p0, p1, None, None))

    @staticmethod
    def _piece_ends(piece):
        kind, x, y, th0, th1 = piece
        if kind == "line":
            return x, y
        return x + y * cmath.exp(1j * th0), x + y * cmath.exp(1j * th1)

    # -- integration --------------------------------------------------
    def integrate(self, f, nodes=32, start_logs=None):
        """sum over pieces of int f(z, logs) dz.

        f(z, logs) returns the dz-coefficient; logs maps gamma -> tracked
        log(z - gamma).  Returns (integral, logs at path end).
        """
        logs = dict(start_logs) if start_logs is not None else {
            g: stable_nlog(self.a - g) for g in self.gammas}
        x, w = gl_nodes(nodes)
        total = 0j
        for piece in self.pieces:
            kind, c0, c1, th0, th1 = piece
            z_start, z_end = self._piece_ends(piece)
            if kind == "line":
                half = 0.5 * (c1 - c0)
                mid = 0.5 * (c0 + c1)
                for xi, wi in zip(x, w):
                    z = mid + half * xi
                    total += wi * half * f(z, _principal_step(logs, z_start, z))
            else:
                s, r = c0, c1
                for xi, wi in zip(x, w):
                    th = 0.5 * (th0 + th1) + 0.5 * (th1 - th0) * xi
                    z = s + r * cmath.exp(1j * th)
                    dz = 1j * r * cmath.exp(1j * th) * 0.5 * (th1 - th0)
                    total += wi * dz * f(z, _principal_step(logs, z_start, z))
            logs = _principal_step(logs, z_start, z_end)
        return total, logs

    def end_logs(self, start_logs=None):
        logs = dict(start_logs) if start_logs is not None else {
            g: stable_nlog(self.a - g) for g in self.gammas}
        for piece in self.pieces:
            z_start, z_end = self._piece_ends(piece)
            logs = _principal_step(logs, z_start, z_end)
        return logs
