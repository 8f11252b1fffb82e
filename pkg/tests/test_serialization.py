import io
import json
import math

import numpy as np

from src.errors import InvalidBodyError
from src.harness.base import CheckStatus
from src.serialization import artifact_stem, read_csv, to_jsonable, write_csv, write_json


def test_to_jsonable_handles_numpy_and_non_finite():
    doc = to_jsonable({
        "array": np.array([1.0, np.nan]),
        "count": np.int64(3),
        "flag": np.bool_(True),
        "inf": math.inf,
        "status": CheckStatus.PASSED,
        "error": InvalidBodyError("bad", {"j": 4}),
        "pair": (1, 2),
    })
    assert doc == {
        "array": [1.0, None],
        "count": 3,
        "flag": True,
        "inf": None,
        "status": "passed",
        "error": {"kind": "invalid_body", "detail": "bad", "context": {"j": 4}},
        "pair": [1, 2],
    }


def test_write_json_to_stream_and_file(tmp_path):
    stream = io.StringIO()
    write_json({"lambda": np.float64(math.e)}, stream=stream)
    assert json.loads(stream.getvalue()) == {"lambda": math.e}
    path = tmp_path / "nested" / "summary.json"
    write_json({"ok": True}, path=path)
    assert json.loads(path.read_text()) == {"ok": True}


def test_csv_keeps_full_precision(tmp_path):
    value = 1.0 / 3.0
    path = write_csv(tmp_path / "out" / "h.csv", ("theta", "h"), [(0.0, value), (math.pi, np.float64(2.0))])
    assert path.read_text().splitlines()[0] == "theta,h"
    columns, rows = read_csv(path)
    assert columns == ["theta", "h"]
    assert rows[0][1] == value
    assert rows[1] == [math.pi, 2.0]


def test_artifact_stem():
    assert artifact_stem("bm/003") == "bm_003"
