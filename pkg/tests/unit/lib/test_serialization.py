import numpy as np

from horizon.domain.sweep.schemas import SweepRecord
from horizon.lib.serialization import format_float, from_json, to_json, to_json_line


def test_numpy_and_complex_values() -> None:
    payload = from_json(to_json({"x": np.float64(0.1), "n": np.int64(3), "z": 1 + 2j, "flag": np.bool_(True)}))
    assert payload == {"x": 0.1, "n": 3, "z": {"re": 1.0, "im": 2.0}, "flag": True}


def test_shortest_round_trip_floats() -> None:
    value = 0.1 + 0.2
    assert from_json(to_json(value)) == value


def test_record_lines_are_stable(make_overlaps) -> None:  # type: ignore[no-untyped-def]
    record = SweepRecord(a=1.0, s=0.5, overlaps=make_overlaps(1.0), converged=True, wall_time=0.25)
    line = to_json_line(record)
    assert line.endswith(b"\n")
    again = SweepRecord.parse_obj(from_json(line))
    assert again == record
    assert to_json_line(again) == line


def test_format_float() -> None:
    assert format_float(1.0) == "1"
    assert float(format_float(1 / 3)) == 1 / 3
    assert format_float(None) == ""
