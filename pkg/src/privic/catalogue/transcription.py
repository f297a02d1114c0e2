"""Reader for the plain-text rate-region transcription.

Blocks are separated by blank lines::

    entry n3-12
    users 3
    side 2 | 3 | 1
    printed 8
    ineq R_100 + R_101 >= 1
    nonneg
    vertex 2,0,0,1,0,1,1 : x1 + x2 + k101 + k110 ; x2 + x3 + k110 + k011

``side`` lists s_1 | s_2 | ... with ``-`` for an empty set, ``printed`` is the
number of inequality lines as typeset, ``nonneg`` stands for R_b >= 0 for
every pattern, and a vertex lists its rate tuple in column order followed by
its transmissions.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from ..model import (ModelError, RateTuple, SideInfoGraph, format_rational, graph_to_obj,
                     rate_tuple_to_obj, scheme_to_obj)
from ..notation import scheme_from_sums

_INEQ = re.compile(r"^(.*?)\s*>=\s*(\S+)$")


def _side(text: str) -> list[list[int]]:
    return [[] if part.strip() == "-" else [int(x) for x in part.split()] for part in text.split("|")]


def _row(text: str) -> dict:
    m = _INEQ.match(text.strip())
    if not m:
        raise ModelError(f"cannot read inequality {text!r}")
    coeffs: dict[str, int] = {}
    for term in m.group(1).split("+"):
        term = term.strip()
        name = "R" if term == "R" else term
        if name != "R" and not re.fullmatch(r"R_[01]+", name):
            raise ModelError(f"cannot read term {term!r}")
        coeffs[name] = coeffs.get(name, 0) + 1
    return {"coeffs": coeffs, "rhs": format_rational(Fraction(m.group(2)))}


def parse_transcription(text: str) -> list[dict]:
    """Catalogue records in the JSON layout, schemes and rate tuples built from sums."""
    out = []
    for block in re.split(r"\n\s*\n", text.strip()):
        rec: dict = {"region": [], "nonneg": False, "vertices": []}
        for line in block.strip().splitlines():
            key, _, rest = line.strip().partition(" ")
            if key == "entry":
                rec["id"] = rest.strip()
            elif key == "users":
                rec["n"] = int(rest)
            elif key == "side":
                rec["side_info"] = _side(rest)
            elif key == "printed":
                rec["printed_rows"] = int(rest)
            elif key == "ineq":
                rec["region"].append(_row(rest))
            elif key == "nonneg":
                rec["nonneg"] = True
            elif key == "vertex":
                tup, _, sums = rest.partition(":")
                sums = [s.strip() for s in sums.split(";")]
                N = rec["n"]
                rates = RateTuple.from_vector([Fraction(v) for v in tup.split(",")], N)
                scheme = scheme_from_sums(N, sums)
                rec["vertices"].append({"rate": rate_tuple_to_obj(rates), "sums": sums,
                                        "scheme": scheme_to_obj(scheme)})
            else:
                raise ModelError(f"unknown transcription line {line!r}")
        graph = SideInfoGraph.from_lists(rec["side_info"])
        if graph.n != rec["n"]:
            raise ModelError(f"entry {rec.get('id')}: side information lists {graph.n} users")
        rec["side_info"] = graph_to_obj(graph)["side_info"]
        out.append(rec)
    return out


def transcription_to_json(text: str) -> str:
    return json.dumps({"entries": parse_transcription(text)}, indent=1) + "\n"
