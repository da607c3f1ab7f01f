import logging

import numpy as np
from pytest_mock import MockerFixture

from horizon.domain.sweep.schemas import SweepRecord
from horizon.lib import settings
from horizon.lib.log import sweep as sweep_log
from horizon.lib.log.utils import msgspec_json_renderer, unwrap_numpy


def test_after_point_logs_configured_fields(mocker: MockerFixture) -> None:
    logger = mocker.patch.object(sweep_log, "LOGGER")
    sweep_log.after_point(SweepRecord(a=2.0, s=1.0, converged=True, wall_time=0.5))
    level, event = logger.log.call_args.args
    kwargs = logger.log.call_args.kwargs
    assert level == logging.INFO
    assert event == settings.log.SWEEP_EVENT
    assert kwargs["a"] == 2.0
    assert kwargs["wall_time_ms"] == 500.0
    assert "fidelity" not in kwargs


def test_after_point_logs_failures_as_errors(mocker: MockerFixture) -> None:
    logger = mocker.patch.object(sweep_log, "LOGGER")
    sweep_log.after_point(SweepRecord(a=2.0, s=1.0, error="ConvergenceError: no"))
    assert logger.log.call_args.args[0] == logging.ERROR
    assert logger.log.call_args.kwargs["error"] == "ConvergenceError: no"


def test_numpy_values_are_unwrapped() -> None:
    event = unwrap_numpy(None, "info", {"event": "x", "f": np.float64(0.25), "n": np.int64(3)})
    assert event == {"event": "x", "f": 0.25, "n": 3}
    assert type(event["f"]) is float


def test_renderer_encodes_complex_values() -> None:
    rendered = msgspec_json_renderer(None, "info", {"event": "x", "alpha": 0.5 + 0j})
    assert rendered == b'{"event":"x","alpha":{"re":0.5,"im":0.0}}'
