import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from opstrata import connect_fredholm, connect_rank_stratum, seg_sign_flip, StratumSpec, random_stratum_point
from opstrata.serialize import (
    matrix_from_dict,
    matrix_to_dict,
    path_from_list,
    path_to_list,
    read_matrix,
    read_path,
    write_matrix,
    write_path,
)

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(arrays(np.float64, st.tuples(st.integers(1, 5), st.integers(1, 5)), elements=finite))
def test_matrix_round_trip_is_bit_identical(a):
    back = matrix_from_dict(json.loads(json.dumps(matrix_to_dict(a))))
    assert back.tobytes() == a.tobytes()


def test_matrix_layout_is_row_major():
    d = matrix_to_dict(np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]))
    assert d == {"rows": 2, "cols": 3, "data": [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]}


def test_bad_matrix_objects():
    with pytest.raises(ValueError):
        matrix_from_dict({"rows": 2, "cols": 2, "data": [1.0]})
    with pytest.raises(ValueError):
        matrix_from_dict({"rows": 1, "data": [1.0]})


def test_csv_matrix(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("1,2\n3,4.5\n", encoding="utf-8")
    assert np.array_equal(read_matrix(p), [[1.0, 2.0], [3.0, 4.5]])


def test_json_matrix_file(tmp_path, rng):
    a = rng.standard_normal((3, 4))
    write_matrix(a, tmp_path / "a.json")
    assert read_matrix(tmp_path / "a.json").tobytes() == a.tobytes()


def _paths():
    T1 = random_stratum_point(4, 5, 2, seed=1)
    T2 = random_stratum_point(4, 5, 2, seed=2)
    yield connect_rank_stratum(T1, T2)
    yield connect_fredholm(T1, T2, StratumSpec.fredholm(3, 2, (4, 5)))
    yield connect_rank_stratum(random_stratum_point(3, 5, 3, seed=4), np.diag([-1.0, 1, 1]) @ random_stratum_point(3, 5, 3, seed=4))
    from opstrata import OperatorPath

    yield OperatorPath((seg_sign_flip(T1, side="domain"),))


@pytest.mark.parametrize("path", list(_paths()), ids=["rank", "fredholm", "domain-flip", "single"])
def test_path_round_trip(path, tmp_path):
    write_path(path, tmp_path / "p.json")
    back = read_path(tmp_path / "p.json")
    assert len(back) == len(path)
    lams = np.linspace(0, 1, 11)
    for a, b in zip(path, back):
        assert type(a) is type(b) and a.reverse == b.reverse and a.provenance == b.provenance
        assert a.sample(lams).tobytes() == b.sample(lams).tobytes()
        assert [repr(i) for i in a.invariants] == [repr(i) for i in b.invariants]
    assert path_to_list(back) == path_to_list(path)


def test_path_must_be_a_list():
    with pytest.raises(ValueError):
        path_from_list({"kind": "affine"})


def test_unknown_kind():
    with pytest.raises(ValueError):
        path_from_list([{"kind": "spline", "invariants": [{"kind": "invertible"}]}])
