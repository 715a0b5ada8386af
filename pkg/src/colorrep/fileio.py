"""Self-describing JSON files for algebras, representations, and tables.

Every document carries a "schema" tag with a version suffix and its rank.
Complex numbers serialize as [re, im] pairs; degrees as arrays of 0/1 bits.
Loaders fail with SchemaError naming the offending field.
"""

from __future__ import annotations

import json

import numpy as np

from .colorlie import ColorLieAlgebra
from .errors import AxiomError, SchemaError
from .gns import PDFunction
from .grading import Degree
from .hcpair import GroupElement, HCPair
from .reps import PartialRep, UnitaryRep
from .spaces import GammaInnerSpace, GradedSpace, HomogeneousMap

ALGEBRA_SCHEMA = "color-lie-algebra/1"
REP_SCHEMA = "unitary-rep/1"
TABLE_SCHEMA = "pd-table/1"
REPORT_SCHEMA = "report/1"


def _need(doc: dict, key: str, kind, where: str):
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected an object")
    if key not in doc:
        raise SchemaError(f"{where}: missing field {key!r}")
    val = doc[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaError(
            f"{where}.{key}: expected {kind.__name__}, got {type(val).__name__}")
    return val


def _check_schema(doc: dict, expected: str, where: str) -> None:
    tag = _need(doc, "schema", str, where)
    if tag != expected:
        raise SchemaError(f"{where}.schema: expected {expected!r}, got {tag!r}")


def _degree_to_json(deg: Degree) -> list:
    return [int(b) for b in deg.bits]


def _degree_from_json(data, rank: int, where: str) -> Degree:
    if not isinstance(data, list) or len(data) != rank:
        raise SchemaError(f"{where}: degree must be a list of {rank} bits")
    if any(b not in (0, 1) for b in data):
        raise SchemaError(f"{where}: degree bits must be 0 or 1, got {data}")
    return Degree(tuple(int(b) for b in data))


def _complex_to_json(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _complex_from_json(data, where: str) -> complex:
    if (not isinstance(data, list) or len(data) != 2
            or not all(isinstance(x, (int, float)) for x in data)):
        raise SchemaError(f"{where}: expected a [re, im] pair")
    return complex(data[0], data[1])


def _matrix_to_json(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[_complex_to_json(z) for z in row] for row in m]


def _matrix_from_json(data, where: str) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise SchemaError(f"{where}: expected a non-empty matrix")
    rows = []
    width = None
    for i, row in enumerate(data):
        if not isinstance(row, list):
            raise SchemaError(f"{where}[{i}]: expected a list")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise SchemaError(f"{where}[{i}]: ragged row of length {len(row)}")
        rows.append([_complex_from_json(z, f"{where}[{i}][{j}]")
                     for j, z in enumerate(row)])
    return np.array(rows, dtype=complex)


def _real_matrix_to_json(m: np.ndarray) -> list:
    return [[float(x) for x in row] for row in np.asarray(m, dtype=float)]


def _real_matrix_from_json(data, where: str) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise SchemaError(f"{where}: expected a non-empty matrix")
    rows = []
    width = None
    for i, row in enumerate(data):
        if (not isinstance(row, list)
                or any(not isinstance(x, (int, float)) for x in row)):
            raise SchemaError(f"{where}[{i}]: expected a list of real numbers")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise SchemaError(f"{where}[{i}]: ragged row of length {len(row)}")
        rows.append([float(x) for x in row])
    return np.array(rows)


def _vector_to_json(v: np.ndarray) -> list:
    return [_complex_to_json(z) for z in np.asarray(v, dtype=complex)]


def _vector_from_json(data, where: str) -> np.ndarray:
    if not isinstance(data, list):
        raise SchemaError(f"{where}: expected a list")
    return np.array([_complex_from_json(z, f"{where}[{i}]")
                     for i, z in enumerate(data)], dtype=complex)


# ------------------------------------------------------------------ algebras

def algebra_to_doc(l: ColorLieAlgebra) -> dict:
    triples = []
    for i, j, k in zip(*np.nonzero(l.structure)):
        triples.append([int(i), int(j), int(k), float(l.structure[i, j, k])])
    return {
        "schema": ALGEBRA_SCHEMA,
        "rank": l.rank,
        "labels": list(l.labels),
        "degrees": [_degree_to_json(d) for d in l.degrees],
        "structure": triples,
    }


def algebra_from_doc(doc: dict, validate: bool = True) -> ColorLieAlgebra:
    _check_schema(doc, ALGEBRA_SCHEMA, "algebra")
    rank = _need(doc, "rank", int, "algebra")
    if rank < 1:
        raise SchemaError("algebra.rank: must be at least 1")
    labels = _need(doc, "labels", list, "algebra")
    raw_degs = _need(doc, "degrees", list, "algebra")
    if len(labels) != len(raw_degs):
        raise SchemaError("algebra.degrees: length differs from labels")
    degrees = [_degree_from_json(d, rank, f"algebra.degrees[{i}]")
               for i, d in enumerate(raw_degs)]
    dim = len(labels)
    structure = np.zeros((dim, dim, dim))
    for t, triple in enumerate(_need(doc, "structure", list, "algebra")):
        where = f"algebra.structure[{t}]"
        if not isinstance(triple, list) or len(triple) != 4:
            raise SchemaError(f"{where}: expected [i, j, k, coefficient]")
        i, j, k, c = triple
        for name, idx in (("i", i), ("j", j), ("k", k)):
            if not isinstance(idx, int) or not 0 <= idx < dim:
                raise SchemaError(f"{where}.{name}: index {idx} out of range")
        if not isinstance(c, (int, float)):
            raise SchemaError(f"{where}: coefficient must be a real number")
        structure[i, j, k] = float(c)
    try:
        return ColorLieAlgebra(rank, labels, degrees, structure,
                               validate=validate)
    except AxiomError:
        raise
    except ValueError as e:
        raise SchemaError(f"algebra: {e}") from None


def save_algebra(path, l: ColorLieAlgebra) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(algebra_to_doc(l), fh, indent=1)
        fh.write("\n")


def load_algebra(path, validate: bool = True) -> ColorLieAlgebra:
    return algebra_from_doc(_read_doc(path), validate=validate)


def _read_doc(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: not valid JSON ({e})") from None


# ------------------------------------------------------------- representations

def _space_to_doc(space: GradedSpace) -> list:
    return [[_degree_to_json(d), space.dims[d]] for d in space.degrees]


def _space_from_doc(data, rank: int, where: str) -> GradedSpace:
    if not isinstance(data, list) or not data:
        raise SchemaError(f"{where}: expected a non-empty list of [degree, dim]")
    dims = {}
    for i, pair in enumerate(data):
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError(f"{where}[{i}]: expected [degree, dim]")
        deg = _degree_from_json(pair[0], rank, f"{where}[{i}]")
        if not isinstance(pair[1], int) or pair[1] < 1:
            raise SchemaError(f"{where}[{i}]: dimension must be a positive int")
        dims[deg] = pair[1]
    return GradedSpace(rank, dims)


def rep_to_doc(r, cyclic=None) -> dict:
    """Document for a full or partial representation.

    Missing operators of a partial representation serialize as null in the
    rho array; the cyclic vector is optional extra data.
    """
    l = r.algebra
    space = r.inner.space
    rho = []
    for i in range(l.dim):
        if r.defined(i):
            rho.append(_matrix_to_json(r.rho_matrix(i)))
        else:
            rho.append(None)
    gens = []
    for g in r.pair.extra_generators:
        gens.append({
            "label": g.label,
            "ad": _real_matrix_to_json(g.ad),
            "pi": None if g.pi is None else _matrix_to_json(g.pi),
        })
    doc = {
        "schema": REP_SCHEMA,
        "rank": l.rank,
        "algebra": algebra_to_doc(l),
        "space": _space_to_doc(space),
        "gram": [[_degree_to_json(d), _matrix_to_json(r.inner.gram[d])]
                 for d in space.degrees],
        "rho": rho,
        "generators": gens,
    }
    if cyclic is not None:
        doc["cyclic"] = _vector_to_json(cyclic)
    return doc


def rep_from_doc(doc: dict, validate_algebra: bool = True):
    """Rebuild a representation file.

    Returns (rep, cyclic) where rep is a UnitaryRep, or a PartialRep when
    some rho entries are null, and cyclic is the stored vector or None.
    """
    _check_schema(doc, REP_SCHEMA, "rep")
    rank = _need(doc, "rank", int, "rep")
    l = algebra_from_doc(_need(doc, "algebra", dict, "rep"),
                         validate=validate_algebra)
    if l.rank != rank:
        raise SchemaError("rep.rank: differs from the embedded algebra rank")
    space = _space_from_doc(_need(doc, "space", list, "rep"), rank, "rep.space")

    gram = {}
    for i, pair in enumerate(_need(doc, "gram", list, "rep")):
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError(f"rep.gram[{i}]: expected [degree, matrix]")
        deg = _degree_from_json(pair[0], rank, f"rep.gram[{i}]")
        gram[deg] = _matrix_from_json(pair[1], f"rep.gram[{i}]")
    try:
        inner = GammaInnerSpace(space, gram)
    except ValueError as e:
        raise SchemaError(f"rep.gram: {e}") from None

    raw_rho = _need(doc, "rho", list, "rep")
    if len(raw_rho) != l.dim:
        raise SchemaError(
            f"rep.rho: expected {l.dim} entries, got {len(raw_rho)}")
    rho = {}
    for i, entry in enumerate(raw_rho):
        if entry is None:
            continue
        mat = _matrix_from_json(entry, f"rep.rho[{i}]")
        if mat.shape != (space.total_dim, space.total_dim):
            raise SchemaError(f"rep.rho[{i}]: shape {mat.shape} does not "
                              f"match the space")
        rho[i] = HomogeneousMap.from_dense(space, space, l.degrees[i], mat)

    gens = []
    for i, g in enumerate(_need(doc, "generators", list, "rep")):
        where = f"rep.generators[{i}]"
        label = _need(g, "label", str, where)
        ad = _real_matrix_from_json(_need(g, "ad", list, where), f"{where}.ad")
        pi = g.get("pi")
        if pi is not None:
            pi = _matrix_from_json(pi, f"{where}.pi")
        gens.append(GroupElement(label, ad, pi))
    pair = HCPair(l, gens, validate=False)

    cyclic = None
    if doc.get("cyclic") is not None:
        cyclic = _vector_from_json(doc["cyclic"], "rep.cyclic")
        if cyclic.shape != (space.total_dim,):
            raise SchemaError("rep.cyclic: length does not match the space")

    if len(rho) == l.dim:
        rep = UnitaryRep(pair, inner, [rho[i] for i in range(l.dim)])
    else:
        rep = PartialRep(pair, inner, rho)
    return rep, cyclic


def save_rep(path, r, cyclic=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(rep_to_doc(r, cyclic=cyclic), fh, indent=1)
        fh.write("\n")


def load_rep(path, validate_algebra: bool = True):
    """Load a representation file; returns (rep, cyclic or None)."""
    return rep_from_doc(_read_doc(path), validate_algebra=validate_algebra)


# ------------------------------------------------------------------- tables

def table_to_doc(psi: PDFunction) -> dict:
    if psi.table is None:
        raise ValueError("only table-backed functions can be saved")
    return {
        "schema": TABLE_SCHEMA,
        "rank": psi.algebra.rank,
        "algebra": algebra_to_doc(psi.algebra),
        "values": [[list(w), _complex_to_json(c)]
                   for w, c in sorted(psi.table.items())],
    }


def table_from_doc(doc: dict, validate_algebra: bool = True) -> PDFunction:
    _check_schema(doc, TABLE_SCHEMA, "table")
    l = algebra_from_doc(_need(doc, "algebra", dict, "table"),
                         validate=validate_algebra)
    values = {}
    for i, pair in enumerate(_need(doc, "values", list, "table")):
        where = f"table.values[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError(f"{where}: expected [word, value]")
        word, val = pair
        if (not isinstance(word, list)
                or any(not isinstance(x, int) or not 0 <= x < l.dim
                       for x in word)):
            raise SchemaError(f"{where}: word indices out of range")
        values[tuple(word)] = _complex_from_json(val, where)
    try:
        return PDFunction.from_table(l, values)
    except ValueError as e:
        raise SchemaError(f"table.values: {e}") from None


def save_table(path, psi: PDFunction) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(table_to_doc(psi), fh, indent=1)
        fh.write("\n")


def load_table(path, validate_algebra: bool = True) -> PDFunction:
    return table_from_doc(_read_doc(path), validate_algebra=validate_algebra)
