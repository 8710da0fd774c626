"""File formats: binary containers for field-element payloads, JSON for the rest.

Binary layout, little-endian throughout: magic "JPLT" (4 bytes), version u16,
p u64, m u16, K u32, then role-specific dims (query: D u32, L u32; answer:
row count u32; matrix: rows u32, cols u32; dataset: none), then the payload
as row-major elements, 8 bytes each, canonical residues. Decoders reject bad
magic or version, truncation, trailing bytes, inconsistent dims, and any
residue >= p, all as Malformed.

JSON carries demands, recovery plans, and audit reports. Message indices in
JSON are 1-based (files face people; arrays inside the library are 0-based).
Rationals are "numerator/denominator" strings so exactness survives
serialization.
"""

import json
import struct

import numpy as np

from .backend import work_dtype
from .errors import JpltError, Malformed
from .field import Dataset, PrimeField
from .protocol import Answer, DemandSpec, Query, RecoveryPlan

MAGIC = b"JPLT"
VERSION = 1

_HEADER = struct.Struct("<4sHQHI")  # magic, version, p, m, K
_DIM = struct.Struct("<I")


def _pack_header(p, m, k, *dims):
    out = _HEADER.pack(MAGIC, VERSION, p, m, k)
    for d in dims:
        out += _DIM.pack(d)
    return out


def _unpack_header(buf, n_dims):
    need = _HEADER.size + _DIM.size * n_dims
    if len(buf) < need:
        raise Malformed(f"header truncated: {len(buf)} < {need} bytes")
    magic, version, p, m, k = _HEADER.unpack_from(buf, 0)
    if magic != MAGIC:
        raise Malformed(f"bad magic {magic!r}")
    if version != VERSION:
        raise Malformed(f"unsupported version {version}")
    dims = []
    for i in range(n_dims):
        (d,) = _DIM.unpack_from(buf, _HEADER.size + _DIM.size * i)
        dims.append(d)
    return p, m, k, dims, buf[need:]


def _elements_bytes(arr):
    return np.asarray(arr, dtype=object).astype("<u8").tobytes()


def _elements_from(buf, rows, cols, p, dtype):
    want = rows * cols * 8
    if len(buf) != want:
        raise Malformed(f"payload is {len(buf)} bytes, expected {want}")
    flat = np.frombuffer(buf, dtype="<u8")
    if bool((flat >= np.uint64(p)).any()):
        raise Malformed(f"element not a canonical residue mod {p}")
    if dtype is object:
        return flat.astype(object).reshape(rows, cols)
    return flat.astype(np.int64).reshape(rows, cols)


def _field_for(p):
    try:
        return PrimeField(p)
    except JpltError as exc:
        raise Malformed(f"bad field in header: {exc}") from exc


def encode_dataset(data):
    head = _pack_header(data.field.p, data.msg_len, data.num_messages)
    return head + _elements_bytes(data.messages)


def decode_dataset(buf):
    p, m, k, _, rest = _unpack_header(buf, 0)
    field = _field_for(p)
    if k < 1 or m < 1:
        raise Malformed(f"dataset dims K={k} m={m} out of range")
    return Dataset(field, _elements_from(rest, k, m, p, field.dtype))


def encode_query(query):
    head = _pack_header(query.field.p, query.msg_len, query.num_messages,
                        query.support_size, query.demand_dim)
    return head + _elements_bytes(query.matrix)


def decode_query(buf):
    p, m, k, (d, ell), rest = _unpack_header(buf, 2)
    field = _field_for(p)
    if not (1 <= ell <= d <= k):
        raise Malformed(f"query dims K={k} D={d} L={ell} inconsistent")
    rows = k - d + ell
    matrix = _elements_from(rest, rows, k, p, field.dtype)
    return Query(field=field, support_size=d, demand_dim=ell,
                 msg_len=m, matrix=matrix)


def encode_answer(answer, num_messages):
    head = _pack_header(answer.field.p, answer.msg_len, num_messages,
                        answer.length)
    return head + _elements_bytes(answer.entries)


def decode_answer(buf):
    p, m, k, (rows,), rest = _unpack_header(buf, 1)
    field = _field_for(p)
    if rows < 1 or m < 1:
        raise Malformed(f"answer dims rows={rows} m={m} out of range")
    return Answer(field=field, entries=_elements_from(rest, rows, m, p, field.dtype))


def encode_matrix(matrix, p):
    matrix = np.atleast_2d(np.asarray(matrix))
    rows, cols = matrix.shape
    head = _pack_header(p, 1, cols, rows, cols)
    return head + _elements_bytes(matrix)


def decode_matrix(buf):
    p, _, k, (rows, cols), rest = _unpack_header(buf, 2)
    _field_for(p)
    if cols != k:
        raise Malformed(f"matrix header cols {cols} != K {k}")
    return _elements_from(rest, rows, cols, p, work_dtype(p)), p


def demand_to_json(demand):
    doc = {
        "p": demand.field.p,
        "num_messages": demand.num_messages,
        "support": [c + 1 for c in demand.support],
        "coeffs": [[int(v) for v in row] for row in demand.coeffs],
    }
    return json.dumps(doc, indent=2) + "\n"


def demand_from_json(text):
    try:
        doc = json.loads(text)
        p = int(doc["p"])
        k = int(doc["num_messages"])
        support = [int(c) - 1 for c in doc["support"]]
        coeffs = [[int(v) for v in row] for row in doc["coeffs"]]
    except (ValueError, KeyError, TypeError) as exc:
        raise Malformed(f"bad demand JSON: {exc}") from exc
    field = _field_for(p)
    return DemandSpec(field=field, num_messages=k, support=tuple(support),
                      coeffs=np.asarray(coeffs, dtype=object))


def plan_to_json(plan, p):
    doc = {
        "mode": plan.mode,
        "p": p,
        "combiners": [[int(v) for v in row] for row in plan.combiners],
    }
    return json.dumps(doc, indent=2) + "\n"


def plan_from_json(text):
    try:
        doc = json.loads(text)
        mode = doc["mode"]
        p = int(doc["p"])
        rows = [[int(v) % p for v in row] for row in doc["combiners"]]
    except (ValueError, KeyError, TypeError) as exc:
        raise Malformed(f"bad plan JSON: {exc}") from exc
    field = _field_for(p)
    return RecoveryPlan(mode=mode, combiners=field.residues(np.asarray(rows, dtype=object)))


def _frac_str(f):
    return f"{f.numerator}/{f.denominator}"


def structural_report_to_json(report):
    doc = {
        "kind": "structural",
        "num_messages": report.num_messages,
        "support_size": report.support_size,
        "demand_dim": report.demand_dim,
        "strict": report.strict,
        "verdict": "pass" if report.verdict else "fail",
        "records": [
            {
                "support": [c + 1 for c in rec.support],
                "dimension": rec.dimension,
                "mds": rec.mds,
                "ok": rec.ok,
            }
            for rec in report.records
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def posterior_table_to_json(table):
    doc = {
        "kind": "posterior",
        "prior": _frac_str(table.prior),
        "total_tuples": table.total_tuples,
        "tv_max": _frac_str(table.tv_max),
        "groups": [
            {
                "count": g.count,
                "tv": _frac_str(g.tv),
                "matrix": [[int(v) for v in row] for row in g.matrix],
                "posterior": {
                    "+".join(str(c + 1) for c in w): _frac_str(pr)
                    for w, pr in sorted(g.posterior.items())
                },
            }
            for g in table.groups
        ],
    }
    return json.dumps(doc, indent=2) + "\n"
