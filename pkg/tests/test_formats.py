import json
import struct

import numpy as np
import pytest

from jplt import (
    Dataset,
    DemandSpec,
    Malformed,
    PrimeField,
    build_query,
    posterior_oracle,
    random_dataset,
    sample_query_key,
    server_answer,
    verify_structural,
)
from jplt.formats import (
    decode_answer,
    decode_dataset,
    decode_matrix,
    decode_query,
    demand_from_json,
    demand_to_json,
    encode_answer,
    encode_dataset,
    encode_matrix,
    encode_query,
    plan_from_json,
    plan_to_json,
    posterior_table_to_json,
    structural_report_to_json,
)

import golden
from conftest import StubRng

F11 = PrimeField(11)


def golden_demand():
    return DemandSpec(F11, golden.K, golden.SUPPORT, golden.V)


def golden_query_plan():
    demand = golden_demand()
    key = sample_query_key(demand, StubRng(golden.KEY_DRAWS))
    return demand, *build_query(demand, key)


def test_dataset_round_trip():
    data = random_dataset(F11, 5, 3, np.random.default_rng(2))
    back = decode_dataset(encode_dataset(data))
    assert back.field.p == 11
    assert np.array_equal(back.messages, data.messages)


def test_dataset_layout_smallest():
    # 1 message of length 1 over GF(2), value 0: fixed 28-byte layout
    data = Dataset(PrimeField(2), np.array([[0]]))
    buf = encode_dataset(data)
    assert buf == (b"JPLT" + struct.pack("<H", 1) + struct.pack("<Q", 2)
                   + struct.pack("<H", 1) + struct.pack("<I", 1)
                   + b"\x00" * 8)
    back = decode_dataset(buf)
    assert back.messages.shape == (1, 1)
    assert back.messages[0, 0] == 0


def test_dataset_big_field_round_trip():
    p = (1 << 61) - 1
    field = PrimeField(p)
    data = Dataset(field, np.array([[p - 1, 1], [0, p - 2]], dtype=object))
    back = decode_dataset(encode_dataset(data))
    assert back.messages[0, 0] == p - 1
    assert back.messages[1, 1] == p - 2


def test_query_round_trip():
    _, query, _ = golden_query_plan()
    back = decode_query(encode_query(query))
    assert np.array_equal(back.matrix, query.matrix)
    assert back.support_size == query.support_size
    assert back.demand_dim == query.demand_dim
    assert back.msg_len == query.msg_len


def test_answer_round_trip():
    _, query, _ = golden_query_plan()
    data = random_dataset(F11, golden.K, 1, np.random.default_rng(4))
    ans = server_answer(query, data)
    back = decode_answer(encode_answer(ans, golden.K))
    assert np.array_equal(back.entries, ans.entries)


def test_matrix_round_trip():
    m, p = decode_matrix(encode_matrix(golden.G, golden.P))
    assert p == golden.P
    assert np.array_equal(m, golden.G)


def test_decode_rejects_bad_magic():
    buf = encode_dataset(random_dataset(F11, 2, 1, np.random.default_rng(0)))
    with pytest.raises(Malformed):
        decode_dataset(b"XXXX" + buf[4:])


def test_decode_rejects_bad_version():
    buf = bytearray(encode_dataset(random_dataset(F11, 2, 1,
                                                  np.random.default_rng(0))))
    buf[4:6] = struct.pack("<H", 9)
    with pytest.raises(Malformed):
        decode_dataset(bytes(buf))


def test_decode_rejects_truncation_and_trailing():
    buf = encode_dataset(random_dataset(F11, 2, 1, np.random.default_rng(0)))
    with pytest.raises(Malformed):
        decode_dataset(buf[:10])
    with pytest.raises(Malformed):
        decode_dataset(buf[:-1])
    with pytest.raises(Malformed):
        decode_dataset(buf + b"\x00")


def test_decode_rejects_non_canonical_residue():
    # element equal to p is not a residue
    head = (b"JPLT" + struct.pack("<H", 1) + struct.pack("<Q", 5)
            + struct.pack("<H", 1) + struct.pack("<I", 1))
    with pytest.raises(Malformed):
        decode_dataset(head + struct.pack("<Q", 5))
    assert decode_dataset(head + struct.pack("<Q", 4)).messages[0, 0] == 4


def test_decode_rejects_composite_field():
    head = (b"JPLT" + struct.pack("<H", 1) + struct.pack("<Q", 9)
            + struct.pack("<H", 1) + struct.pack("<I", 1))
    with pytest.raises(Malformed):
        decode_dataset(head + struct.pack("<Q", 0))


def test_decode_query_rejects_inconsistent_dims():
    _, query, _ = golden_query_plan()
    buf = bytearray(encode_query(query))
    # support size 0 is out of range
    off = struct.calcsize("<4sHQHI")
    buf[off:off + 4] = struct.pack("<I", 0)
    with pytest.raises(Malformed):
        decode_query(bytes(buf))


def test_decode_matrix_rejects_header_mismatch():
    buf = bytearray(encode_matrix(golden.G, golden.P))
    off = struct.calcsize("<4sHQHI") + 4
    buf[off:off + 4] = struct.pack("<I", 3)  # cols field disagrees with K
    with pytest.raises(Malformed):
        decode_matrix(bytes(buf))


def test_demand_json_round_trip():
    demand = golden_demand()
    text = demand_to_json(demand)
    doc = json.loads(text)
    assert doc["support"] == [c + 1 for c in golden.SUPPORT]  # 1-based
    back = demand_from_json(text)
    assert back.support == demand.support
    assert np.array_equal(back.coeffs, demand.coeffs)
    assert back.field.p == 11


def test_demand_json_malformed():
    with pytest.raises(Malformed):
        demand_from_json("{not json")
    with pytest.raises(Malformed):
        demand_from_json(json.dumps({"p": 11, "support": [1]}))


def test_plan_json_round_trip():
    _, _, plan = golden_query_plan()
    back = plan_from_json(plan_to_json(plan, golden.P))
    assert back.mode == plan.mode
    assert np.array_equal(back.combiners, plan.combiners)


def test_plan_json_malformed():
    with pytest.raises(Malformed):
        plan_from_json("[]")


def test_structural_report_json():
    rep = verify_structural(golden.G, golden.P, golden.D, golden.L, strict=True)
    doc = json.loads(structural_report_to_json(rep))
    assert doc["verdict"] == "pass"
    assert len(doc["records"]) == 252
    assert doc["records"][0]["support"] == [1, 2, 3, 4, 5]  # 1-based


def test_posterior_table_json():
    table = posterior_oracle(PrimeField(3), 3, 2, 1, scheme="grs")
    doc = json.loads(posterior_table_to_json(table))
    assert doc["tv_max"] == "0/1"
    assert doc["prior"] == "1/3"
    assert doc["total_tuples"] == 144
    some = doc["groups"][0]["posterior"]
    assert set(some.values()) == {"1/3"}
    assert all("+" in k for k in some)  # 1-based "i+j" support labels
