import json
from importlib import resources

import pytest

from teahouse.core import EventKind, GameId, TASK_ORDER, ValidationError
from teahouse.gesture import load_script
from teahouse.questionnaires import QuestionnaireBundle, SusResponse
from teahouse.scent import MockScentDriver
from teahouse.scripts import (
    SessionPlan,
    error_session_script,
    perfect_session_script,
    session_script,
)
from teahouse.session import (
    Dataset,
    RecordParseError,
    SchemaVersionError,
    SessionRecord,
    load_dataset,
    load_record,
    record_digest,
    record_to_bytes,
    replay_record,
    run_session,
    save_dataset,
    save_record,
    verify_record,
)


def bundled_script(name):
    with resources.files("teahouse.data.scripts").joinpath(f"{name}.jsonl").open() as f:
        return load_script(f)


class TestRunSession:
    def test_perfect_scripts_zero_errors(self, profile, params):
        record = run_session(profile, params, 42, bundled_script("session_perfect"))
        for game in TASK_ORDER:
            m = record.metrics[game]
            assert (m.inaccuracy_pct, m.omission_pct) == (0.0, 0.0)

    def test_determinism_byte_identical(self, profile, params):
        a = run_session(profile, params, 42, perfect_session_script(params, 42))
        b = run_session(profile, params, 42, perfect_session_script(params, 42))
        assert record_to_bytes(a) == record_to_bytes(b)

    def test_error_injection_plants_exact_values(self, profile, params):
        record = run_session(profile, params, 42, bundled_script("session_errors"))
        assert record.metrics[GameId.DIMSUM].inaccuracy_pct == pytest.approx(100 / 6)
        assert record.metrics[GameId.STEAMER].omission_pct == pytest.approx(62.5)
        assert record.metrics[GameId.CASHIER].omission_pct == pytest.approx(80.0)

    def test_input_exhaustion_times_out_but_completes(self, profile, fast_params):
        record = run_session(profile, fast_params, 1, [], tutorial_ms=1000)
        for game in TASK_ORDER:
            assert record.metrics[game].omission_pct == 100.0

    def test_event_timestamps_non_decreasing(self, profile, fast_params):
        record = run_session(
            profile, fast_params, 3, session_script(fast_params, 3, 1000), tutorial_ms=1000
        )
        ts = [e.t for e in record.events]
        assert all(a <= b for a, b in zip(ts, ts[1:]))

    def test_scent_log_written(self, profile, fast_params, tmp_path):
        import io

        sink = io.StringIO()
        run_session(
            profile,
            fast_params,
            3,
            session_script(fast_params, 3, 1000),
            tutorial_ms=1000,
            scent_driver=MockScentDriver(sink),
        )
        lines = sink.getvalue().splitlines()
        assert lines and all(" EMIT " in ln for ln in lines)


class TestPersistence:
    def test_round_trip(self, profile, params, tmp_path):
        record = run_session(profile, params, 42, bundled_script("session_errors"))
        path = tmp_path / "r.json"
        save_record(record, path)
        loaded = load_record(path)
        assert loaded == record
        save_record(loaded, tmp_path / "r2.json")
        assert (tmp_path / "r.json").read_bytes() == (tmp_path / "r2.json").read_bytes()

    def test_empty_events_record_round_trip(self, profile, params, tmp_path):
        record = SessionRecord(
            profile=profile,
            params=params,
            seed=0,
            tutorial_ms=0,
            events=[],
            metrics={},
            questionnaires=QuestionnaireBundle(sus=SusResponse(tuple([3] * 10))),
            created_at="2026-01-01T00:00:00Z",
        )
        path = tmp_path / "empty.json"
        save_record(record, path)
        assert load_record(path) == record

    def test_seeded_corpus_round_trips(self, profile, fast_params, tmp_path):
        for seed in range(100):
            plan = SessionPlan(dimsum_wrong=seed % 2, cashier_solve=seed % 3)
            record = run_session(
                profile,
                fast_params,
                seed,
                session_script(fast_params, seed, 1000, plan),
                tutorial_ms=1000,
            )
            p = tmp_path / f"{seed}.json"
            save_record(record, p)
            assert load_record(p) == record

    def test_schema_version_mismatch(self, profile, params, tmp_path):
        record = run_session(profile, params, 42, bundled_script("session_perfect"))
        d = record.to_dict()
        d["schema_version"] = 99
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(d))
        with pytest.raises(SchemaVersionError):
            load_record(path)

    def test_malformed_file_reports_location(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"schema_version": 1,\n  broken')
        with pytest.raises(RecordParseError) as e:
            load_record(path)
        assert "line 2" in str(e.value)

    def test_dataset_unique_ids(self, profile, fast_params, tmp_path):
        record = run_session(profile, fast_params, 1, [], tutorial_ms=1000)
        with pytest.raises(ValidationError):
            Dataset(records=[record, record])

    def test_dataset_save_load(self, fast_params, tmp_path):
        from teahouse.core import validate_profile

        records = []
        for i in range(3):
            p = validate_profile(f"p{i}", 65 + i * 10, "female", "7-9y", 25)
            records.append(run_session(p, fast_params, i, [], tutorial_ms=1000))
        save_dataset(Dataset(records=records, provenance={"note": "test"}), tmp_path / "ds")
        ds = load_dataset(tmp_path / "ds")
        assert len(ds.records) == 3
        assert ds.records[0].profile.participant_id == "p0"


class TestCustomDenominations:
    def test_configured_set_reaches_game_and_record(self, profile, fast_params):
        from teahouse.games.cashier import Denomination

        custom = (
            Denomination(1, "coin"),
            Denomination(5, "coin"),
            Denomination(25, "coin"),
            Denomination(100, "note"),
        )
        record = run_session(
            profile, fast_params, 2, [], tutorial_ms=1000, denominations=custom
        )
        assert record.denominations == custom
        start = next(
            e
            for e in record.events
            if e.game == GameId.CASHIER and e.kind == EventKind.GAME_START
        )
        assert [d["value"] for d in start.payload["denominations"]] == [1, 5, 25, 100]

    def test_round_trip_and_replay_preserve_the_set(self, profile, fast_params, tmp_path):
        from teahouse.games.cashier import Denomination

        custom = (Denomination(1, "coin"), Denomination(10, "coin"), Denomination(200, "note"))
        record = run_session(
            profile, fast_params, 2, [], tutorial_ms=1000, denominations=custom
        )
        path = tmp_path / "r.json"
        save_record(record, path)
        loaded = load_record(path)
        assert loaded.denominations == custom
        assert record_to_bytes(replay_record(loaded)) == record_to_bytes(record)


class TestReplay:
    def test_replay_regenerates_identical_record(self, profile, params):
        record = run_session(profile, params, 42, bundled_script("session_errors"))
        regenerated = replay_record(record)
        assert record_to_bytes(regenerated) == record_to_bytes(record)
        assert verify_record(record)

    def test_replay_reconstructs_every_snapshot(self, profile, fast_params):
        original = []
        record = run_session(
            profile,
            fast_params,
            9,
            session_script(fast_params, 9, 1000),
            tutorial_ms=1000,
            snapshot_cb=original.append,
        )
        reconstructed = []
        replay_record(record, snapshot_cb=reconstructed.append)
        assert original == reconstructed
        assert len(original) > 0

    def test_digest_stability(self, profile, params):
        record = run_session(profile, params, 42, bundled_script("session_perfect"))
        assert record_digest(record) == record_digest(replay_record(record))


class TestScentSessionInvariant:
    def test_burnt_pulses_match_overcooks_in_session(self, profile, fast_params):
        emissions = []
        record = run_session(
            profile,
            fast_params,
            5,
            session_script(
                fast_params,
                5,
                1000,
                SessionPlan(steamer_steam=2, steamer_transfer=0),
            ),
            tutorial_ms=1000,
            scent_cb=emissions.append,
        )
        overcooks = sum(1 for e in record.events if e.kind == EventKind.OVERCOOK)
        burnt = sum(e.merged for e in emissions if e.scent_id == "burnt")
        assert overcooks == 2
        assert burnt == overcooks
