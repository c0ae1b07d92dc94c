import numpy as np
import pytest

from klmedian.geometry import CurveSet, PolygonalCurve
from klmedian.io import Dataset, DatasetError, dumps_dataset, loads_dataset, read_dataset, write_dataset


def test_round_trip_is_exact(tmp_path, rng):
    curves = CurveSet.of([PolygonalCurve(rng.normal(size=(4, 3)) * 1e3), PolygonalCurve(rng.uniform(size=(1, 3)))], ids=[7, 3])
    ds = Dataset(curves, 3, "demo")
    path = tmp_path / "set.jsonl"
    write_dataset(ds, path)
    back = read_dataset(path)
    assert back.d == 3 and back.name == "demo" and back.curves.ids == (7, 3)
    for a, b in zip(curves, back.curves):
        assert np.array_equal(a.vertices, b.vertices)


def test_blank_lines_are_skipped():
    ds = loads_dataset('{"d": 2}\n\n{"id": 0, "vertices": [[0, 0], [1, 1]]}\n\n')
    assert len(ds.curves) == 1 and ds.name is None


@pytest.mark.parametrize(
    "text, where",
    [
        ('{"d": 2}\n{"id": 0, "vertices": [[0, 0]]\n', "line 2"),
        ('{"d": 2}\n{"id": 0, "vertices": [[0, 0]]}\n{"id": 0, "vertices": [[1, 1]]}\n', "line 3: duplicate id 0"),
        ('{"d": 2}\n{"id": 1, "vertices": [[0, 0, 0]]}\n', "line 2"),
        ('{"d": 2}\n{"id": 1, "vertices": []}\n', "line 2"),
        ('{"d": 2}\n{"id": "a", "vertices": [[0, 0]]}\n', "line 2"),
        ('{"d": 2}\n{"id": 1, "vertices": [[0, "x"]]}\n', "line 2"),
        ('{"d": 0}\n', "line 1"),
        ("[1, 2]\n", "line 1"),
        ("", "empty"),
    ],
)
def test_malformed(text, where):
    with pytest.raises(DatasetError, match=where):
        loads_dataset(text)


def test_dumps_has_header_first():
    text = dumps_dataset(Dataset(CurveSet.of([[[0.1, 0.2]]]), 2))
    assert text.splitlines()[0] == '{"d": 2}'
