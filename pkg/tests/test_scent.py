import io

import pytest

from teahouse.core import StateError
from teahouse.scent import (
    Emission,
    FailingScentDriver,
    MockScentDriver,
    OlfactoryBridge,
    ScentCommand,
)


def cmd(t, scent_id="burnt", duration_ms=2000):
    return ScentCommand(t=t, scent_id=scent_id, duration_ms=duration_ms, source={"kind": "test"})


class TestBridge:
    def test_one_command_one_emission(self):
        bridge = OlfactoryBridge()
        bridge.enqueue(cmd(1.0, "food.har_gow", 20_000))
        released = bridge.drain()
        assert len(released) == 1
        assert released[0].status == "emitted"
        assert bridge.stats()["emissions"] == 1

    def test_overlapping_same_scent_merged(self):
        bridge = OlfactoryBridge()
        assert bridge.enqueue(cmd(1.0)) is False
        assert bridge.enqueue(cmd(1.1)) is True  # 100 ms apart, overlapping
        released = bridge.drain()
        assert len(released) == 1
        assert released[0].merged == 2
        # pulse extended to cover the second command's end
        assert released[0].duration_ms == 2100

    def test_merge_window_closes(self):
        bridge = OlfactoryBridge()
        bridge.enqueue(cmd(1.0, duration_ms=1000))
        # ends at 2.0s; window closes at 2.5s
        bridge.enqueue(cmd(2.6, duration_ms=1000))
        assert len(bridge.drain()) == 2

    def test_different_scents_never_merge(self):
        bridge = OlfactoryBridge()
        bridge.enqueue(cmd(1.0, "burnt"))
        bridge.enqueue(cmd(1.0, "food.siu_mai"))
        assert len(bridge.drain()) == 2

    def test_delivery_in_timestamp_order_stable(self):
        bridge = OlfactoryBridge()
        bridge.enqueue(cmd(1.0, "a", 100))
        bridge.enqueue(cmd(1.0, "b", 100))
        bridge.enqueue(cmd(2.0, "c", 100))
        released = bridge.drain()
        assert [e.scent_id for e in released] == ["a", "b", "c"]

    def test_commands_never_regress(self):
        bridge = OlfactoryBridge()
        bridge.enqueue(cmd(5.0))
        with pytest.raises(StateError):
            bridge.enqueue(cmd(4.0))

    def test_incremental_drain_respects_window(self):
        bridge = OlfactoryBridge()
        bridge.enqueue(cmd(1.0, duration_ms=1000))  # ends 2000ms, safe at 2500ms
        assert bridge.drain(2400) == []
        assert len(bridge.drain(2500)) == 1

    def test_merge_accounting(self):
        bridge = OlfactoryBridge()
        for i in range(5):
            bridge.enqueue(cmd(1.0 + 0.1 * i))
        bridge.drain()
        stats = bridge.stats()
        assert stats["commands"] == 5
        assert stats["emissions"] + stats["merges"] == stats["commands"]

    def test_driver_failure_non_fatal(self):
        bridge = OlfactoryBridge(FailingScentDriver())
        bridge.enqueue(cmd(1.0))
        released = bridge.drain()
        assert released[0].status == "failed"
        assert bridge.stats()["failures"] == 1
        # bridge keeps accepting work
        bridge.enqueue(cmd(9.0))
        assert bridge.drain()[0].status == "failed"

    def test_duration_must_be_positive(self):
        with pytest.raises(ValueError):
            ScentCommand(t=0.0, scent_id="x", duration_ms=0)


class TestMockDriver:
    def test_wire_format(self):
        sink = io.StringIO()
        driver = MockScentDriver(sink)
        driver.emit(12.35, "burnt", 2000)
        driver.stop(14.35, "burnt")
        assert sink.getvalue() == "12.350 EMIT burnt 2000\n14.350 STOP burnt\n"

    def test_replays_identically(self):
        def run():
            driver = MockScentDriver()
            bridge = OlfactoryBridge(driver)
            for i in range(10):
                bridge.enqueue(cmd(float(i), "food.x" if i % 2 else "burnt", 800))
            bridge.drain()
            return driver.lines

        assert run() == run()
