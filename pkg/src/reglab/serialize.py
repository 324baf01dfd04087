"""Lossless JSON forms of exact values and the trace documents built from them.

Rationals are strings ``"num/den"`` (integers without the slash); floats
appear only in fields whose name ends in ``_advisory`` or inside
``timings``.
"""

import json
from fractions import Fraction

from .maps import MapChain, PolyMap
from .mpoly import MPoly
from .ratfunc import RatFunc
from .scalar import AlgebraicField, AlgElem, scalar_str

SCHEMA_VERSION = 1


def rational_str(x):
    return scalar_str(Fraction(x))


def parse_rational(s):
    return Fraction(s)


def scalar_to_json(x):
    if isinstance(x, AlgElem):
        f = x.field
        return {
            "field": {
                "minpoly": [rational_str(c) for c in f.minpoly],
                "interval": [rational_str(f.lo), rational_str(f.hi)],
                "name": f.name,
            },
            "coeffs": [rational_str(c) for c in x.coeffs],
        }
    return rational_str(x)


def scalar_from_json(d):
    if isinstance(d, str):
        return parse_rational(d)
    f = d["field"]
    field = AlgebraicField(
        [parse_rational(c) for c in f["minpoly"]],
        parse_rational(f["interval"][0]),
        parse_rational(f["interval"][1]),
        name=f.get("name", "a"),
        check=False,
    )
    return field.element([parse_rational(c) for c in d["coeffs"]])


def poly_to_json(p):
    return {
        "vars": list(p.vars),
        "terms": [[list(e), scalar_to_json(c)] for e, c in p.sorted_terms()],
        "text": str(p),
    }


def poly_from_json(d):
    return MPoly(tuple(d["vars"]), {tuple(e): scalar_from_json(c) for e, c in d["terms"]})


def ratfunc_to_json(f):
    return {"num": poly_to_json(f.num), "den": poly_to_json(f.den), "text": str(f)}


def ratfunc_from_json(d):
    return RatFunc(poly_from_json(d["num"]), poly_from_json(d["den"]))


def map_to_json(m):
    if isinstance(m, MapChain):
        return {"chain": [map_to_json(f) for f in m.factors], "label": m.label}
    return {
        "vars": list(m.domain_vars),
        "components": [ratfunc_to_json(c) for c in m.components],
        "label": m.label,
    }


def map_from_json(d):
    if "chain" in d:
        return MapChain([map_from_json(f) for f in d["chain"]], d.get("label", ""))
    return PolyMap(tuple(d["vars"]), [ratfunc_from_json(c) for c in d["components"]], label=d.get("label", ""))


def point_to_json(p):
    return [scalar_to_json(c) for c in p]


# trace documents ------------------------------------------------------------------


def resolution_trace_to_json(trace):
    steps = []
    for s in trace.steps:
        steps.append(
            {
                "kind": s.kind,
                "map": map_to_json(s.map),
                "function": ratfunc_to_json(s.function),
                "points": [{"point": point_to_json(p.coords), "multiplicity": m} for p, m in s.points],
                "info": s.info,
            }
        )
    return {
        "input": ratfunc_to_json(trace.input),
        "steps": steps,
        "final": ratfunc_to_json(trace.final),
        "blowups": trace.blowups,
        "status": trace.status,
        "diagnostics": trace.diagnostics,
        "certificate": trace.certificate.as_dict() if trace.certificate is not None else None,
    }


def document(command, seed, body, status, certificates=None, timings=None):
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "seed": seed,
        "status": status,
        "result": body,
        "certificates": certificates or {},
        "timings": timings or {},
    }


def dumps(doc):
    """Deterministic text: sorted keys, fixed indentation."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def without_timings(doc):
    return {k: v for k, v in doc.items() if k != "timings"}
