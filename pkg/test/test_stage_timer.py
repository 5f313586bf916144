from unittest.mock import patch

import pytest

from tempowalk.stage_timer import StageSummary, StageTimer, StageTiming


class TestStageTimer:
    def test_stage_records_duration_and_items(self):
        timer = StageTimer()
        with patch("tempowalk.stage_timer.time.perf_counter", side_effect=[1.0, 3.5]):
            with timer.stage("sort", items=7):
                pass
        assert timer.timings == [StageTiming("sort", 2.5, 7)]

    def test_stage_records_on_exception(self):
        timer = StageTimer()
        with pytest.raises(RuntimeError):
            with timer.stage("compact"):
                raise RuntimeError("boom")
        assert [timing.stage for timing in timer.timings] == ["compact"]

    def test_record_and_total(self):
        timer = StageTimer()
        timer.record("sort", 1.0, 5)
        timer.record("regroup", 0.5)
        assert timer.total() == pytest.approx(1.5)
        assert timer.timings[1] == StageTiming("regroup", 0.5, 0)

    def test_timings_is_a_copy(self):
        timer = StageTimer()
        timer.record("sort", 1.0)
        timer.timings.clear()
        assert len(timer.timings) == 1

    def test_summaries_aggregate_by_stage(self):
        timer = StageTimer()
        timer.record("sort", 1.0, 10)
        timer.record("tier:solo", 0.25, 3)
        timer.record("sort", 2.0, 20)
        assert timer.summaries() == [
            StageSummary("sort", 2, 3.0, 30),
            StageSummary("tier:solo", 1, 0.25, 3),
        ]

    def test_empty_timer(self):
        timer = StageTimer()
        assert timer.total() == 0
        assert timer.summaries() == []
