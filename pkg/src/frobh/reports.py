"""Deterministic JSON/CSV report emission."""

from __future__ import annotations

import json

from .numcore import as_complex, is_exact


def jnum(x):
    """Scalar -> [re, im] with float entries (repr-stable)."""
    c = complex(as_complex(x))
    return [c.real, c.imag]


def jmat(m):
    return [[jnum(v) for v in row] for row in m]


def jten(t):
    return [[[jnum(v) for v in row] for row in sl] for sl in t]


def dumps(data):
    return json.dumps(data, sort_keys=True, indent=1)


def write_report(path, data):
    text = dumps(data)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text


def csv_row(values):
    out = []
    for v in values:
        c = complex(as_complex(v))
        if c.imag == 0:
            out.append(repr(c.real))
        else:
            out.append(f"{c.real!r}{c.imag:+!r}j" if False else f"{c.real!r}{'+' if c.imag >= 0 else '-'}{abs(c.imag)!r}j")
    return ",".join(out)
