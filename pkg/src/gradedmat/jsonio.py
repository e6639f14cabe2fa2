"""Deterministic serialization of the package's objects.

Scalars render as exact fraction strings, tensors as sorted coordinate
lists, forms as sorted (index tuple, matrix) pairs.  Output bytes depend
only on the data: no clocks, no environment, no reliance on dict
iteration order.
"""
from __future__ import annotations

import csv
import io
import json
from typing import List, Sequence

from .constants import StructureConstants
from .forms import GradedForm
from .matrices import GradedMatrix


def matrix_rows(mat: GradedMatrix) -> List[List[str]]:
    return [[str(v) for v in row] for row in mat.entries]


def form_obj(form: GradedForm) -> dict:
    terms = [
        {"indices": list(key), "matrix": matrix_rows(form.coeffs[key])}
        for key in sorted(form.coeffs)
    ]
    return {"degree": form.degree, "terms": terms}


def _tensor_triples(tensor) -> List[list]:
    out = []
    for (a, b), row in tensor.items():
        for c, v in row.items():
            if v:
                out.append([a, b, c, str(v)])
    out.sort(key=lambda e: e[:3])
    return out


def _pair_entries(table) -> List[list]:
    out = []
    for a, row in enumerate(table):
        for b, v in enumerate(row):
            if v:
                out.append([a, b, str(v)])
    return out


def constants_obj(sc: StructureConstants) -> dict:
    basis = [
        {"index": a, "parity": sc.parity(a), "matrix": matrix_rows(e)}
        for a, e in enumerate(sc.basis.elements)
    ]
    return {
        "n": sc.n,
        "m": sc.m,
        "dim": sc.dim,
        "even_dim": sc.even_dim,
        "odd_dim": sc.odd_dim,
        "basis": basis,
        "bracket": _tensor_triples(sc.c),
        "anticommutator": _tensor_triples(sc.d),
        "quadratic_form": _pair_entries(sc.g),
        "killing_form": _pair_entries(sc.killing),
    }


def constants_csv_rows(sc: StructureConstants) -> List[list]:
    rows = [["bracket", a, b, c, v] for a, b, c, v in _tensor_triples(sc.c)]
    rows += [["anticommutator", a, b, c, v] for a, b, c, v in _tensor_triples(sc.d)]
    rows += [["quadratic_form", a, b, "", v] for a, b, v in _pair_entries(sc.g)]
    rows += [["killing_form", a, b, "", v] for a, b, v in _pair_entries(sc.killing)]
    return rows


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()
