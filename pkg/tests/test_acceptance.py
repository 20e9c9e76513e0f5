"""Acceptance suite: one test per criterion, each printing a PASS line.

Cohort-level numbers from the original human study are measurements of
people and are not reproducible here; they enter only as fixtures and
formula anchors. Everything else is property-based or oracle-checked at the
stated tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.
"""
import math
import random
import subprocess
import sys
import time
from collections import Counter
from importlib import resources

import pytest
import scipy.stats as reference

from teahouse.analysis import analyze, load_published_summary
from teahouse.cohort import gen_cohort
from teahouse.core import DifficultyParams, EventKind, GameId, validate_profile
from teahouse.games.cashier import denomination_values, minimal_change
from teahouse.games.steamer import SERVING_ZONE, STEAMER_ZONE, SteamerGame
from teahouse.gesture import load_script, recognize
from teahouse.metrics import INDICATORS
from teahouse.questionnaires import UsabilityBand, band_sus, score_sus
from teahouse.scent import OlfactoryBridge
from teahouse.scripts import SessionPlan, random_activity_frames, session_script
from teahouse.session import (
    load_dataset,
    record_to_bytes,
    replay_record,
    run_session,
    save_dataset,
)
from teahouse.stats import kruskal_wallis, shapiro_wilk

TABLE2_ITEM_MEANS = (3.34, 2.41, 3.56, 3.39, 3.66, 3.07, 3.71, 2.68, 4.17, 2.07)

# Reference-oracle (scipy.stats.shapiro) values pinned before the build for
# seeded gaussian samples drawn via random.Random(seed).gauss(10, 2).
SW_PINNED = {
    5: (101, 0.8188218419559214, 0.11434487899011286),
    20: (202, 0.9369004545181198, 0.20939605900115804),
    50: (303, 0.9618721440528595, 0.10649671906475677),
}


def _passed(n: int, text: str) -> None:
    print(f"[ACCEPTANCE] criterion {n:2d}: PASS - {text}")


def test_criterion_01_sus_formula():
    assert score_sus([3] * 10).score == 50.0
    assert score_sus([5 if i % 2 == 0 else 1 for i in range(10)]).score == 100.0
    assert score_sus([1 if i % 2 == 0 else 5 for i in range(10)]).score == 0.0
    assert score_sus(TABLE2_ITEM_MEANS).score == pytest.approx(62.05, abs=0.01)
    _passed(1, "usability formula: 50.0 / 100.0 / 0.0 exact, item-means vector 62.05 +/- 0.01")


def test_criterion_02_sus_banding():
    assert band_sus(49.99) == UsabilityBand.NOT_ACCEPTABLE
    assert band_sus(50.0) == UsabilityBand.MARGINAL
    assert band_sus(70.0) == UsabilityBand.MARGINAL
    assert band_sus(70.01) == UsabilityBand.ACCEPTABLE
    _passed(2, "banding: 49.99 not-acceptable, 50 and 70 marginal, 70.01 acceptable")


def test_criterion_03_kruskal_wallis():
    r = kruskal_wallis([[1, 2], [3, 4], [5, 6]])
    assert r.statistic == pytest.approx(4.5714, abs=1e-3)
    assert r.p_value == pytest.approx(0.1017, abs=1e-3)

    r = kruskal_wallis([[4, 4, 4], [4, 4], [4, 4, 4, 4]])
    assert r.statistic == 0.0 and r.p_value == 1.0

    rng = random.Random(1234)
    for _ in range(100):
        groups = [
            [rng.randint(0, 12) for _ in range(rng.randint(2, 10))]
            for _ in range(rng.randint(2, 4))
        ]
        base = kruskal_wallis(groups)
        for f in (lambda x: math.exp(x / 4.0), lambda x: 3.0 * x - 7.0, lambda x: x**3):
            t = kruskal_wallis([[f(v) for v in g] for g in groups])
            assert t.statistic == pytest.approx(base.statistic, abs=1e-9)
            assert t.p_value == pytest.approx(base.p_value, abs=1e-9)

    rng = random.Random(77)
    checked = 0
    while checked < 50:
        groups = [
            [rng.randint(0, 5) for _ in range(rng.randint(2, 12))]
            for _ in range(rng.randint(2, 5))
        ]
        if all(v == groups[0][0] for g in groups for v in g):
            continue
        mine = kruskal_wallis(groups)
        ref = reference.kruskal(*groups)
        assert mine.statistic == pytest.approx(ref.statistic, abs=1e-6)
        assert mine.p_value == pytest.approx(ref.pvalue, abs=1e-6)
        checked += 1
    _passed(3, "rank test: hand case, all-ties, monotone invariance x100, reference match x50")


def test_criterion_04_shapiro_wilk():
    rng = random.Random(8)
    xs = [rng.gauss(0, 1) for _ in range(30)]
    base = shapiro_wilk(xs)
    for a, b in [(2.0, 0.0), (0.25, 5.0), (17.0, -3.0)]:
        r = shapiro_wilk([a * x + b for x in xs])
        assert r.statistic == pytest.approx(base.statistic, abs=1e-9)

    for n, (seed, w_ref, p_ref) in SW_PINNED.items():
        gen = random.Random(seed)
        sample = [gen.gauss(10.0, 2.0) for _ in range(n)]
        r = shapiro_wilk(sample)
        assert r.statistic == pytest.approx(w_ref, abs=1e-3)
        assert r.p_value == pytest.approx(p_ref, abs=1e-3)

    wins = 0
    for k in range(100):
        r1, r2 = random.Random(77 + k), random.Random(7777 + k)
        uni = [r1.uniform(0, 1) for _ in range(50)]
        bell = [r2.gauss(0, 1) for _ in range(50)]
        wins += shapiro_wilk(uni).p_value < shapiro_wilk(bell).p_value
    assert wins >= 95
    _passed(4, f"normality: affine 1e-9, pinned n=5/20/50 within 1e-3, ordering {wins}/100")


def test_criterion_05_metrics_exactness(profile, params):
    with resources.files("teahouse.data.scripts").joinpath("session_errors.jsonl").open() as f:
        script = load_script(f)
    record = run_session(profile, params, 42, script)
    assert record.metrics[GameId.DIMSUM].inaccuracy_pct == pytest.approx(16.67, abs=0.01)
    assert record.metrics[GameId.STEAMER].omission_pct == pytest.approx(62.50, abs=0.01)
    assert record.metrics[GameId.CASHIER].omission_pct == pytest.approx(80.00, abs=0.01)
    _passed(5, "planted errors: 16.67 / 62.50 / 80.00 within 0.01")


def test_criterion_06_scent_invariant():
    """Burnt pulses account one-for-one for overcook transitions, and food
    pulses for steam-ins, across 1000 randomized simulated task runs."""
    total_overcook = total_burnt = total_steamin = total_food = 0
    for seed in range(1000):
        rng = random.Random(f"scent/{seed}")
        params = DifficultyParams(
            steamer_item_count=rng.randint(2, 5),
            cook_time_s=rng.choice([1.0, 1.5, 2.0]),
            overcook_time_s=rng.choice([2.5, 3.0, 4.0]),
            steamer_time_limit_s=rng.choice([8.0, 10.0, 12.0]),
        )
        game = SteamerGame(params, seed=seed, tutorial_ms=0)
        bridge = OlfactoryBridge()
        anchors = [it.cart_slot for it in game.items.values()] + [
            STEAMER_ZONE.center,
            SERVING_ZONE.center,
        ]
        frames = random_activity_frames(seed, anchors, 50, round(params.steamer_time_limit_s * 1000))
        gestures = iter(recognize(frames))
        pending = next(gestures, None)
        while not game.complete:
            game.tick(50)
            while pending is not None and round(pending.t * 1000) <= game.local_ms:
                game.apply(pending)
                pending = next(gestures, None)
            for cmd in game.scent_out:
                bridge.enqueue(cmd)
            game.scent_out.clear()
            bridge.drain(game.local_ms)
        bridge.drain(None)
        overcooks = sum(1 for e in game.events if e.kind == EventKind.OVERCOOK)
        steamins = sum(1 for e in game.events if e.kind == EventKind.START_STEAM)
        burnt = sum(e.merged for e in bridge.emitted + bridge.failed if e.scent_id == "burnt")
        food = sum(
            e.merged for e in bridge.emitted + bridge.failed if e.scent_id.startswith("food.")
        )
        assert burnt == overcooks, f"seed {seed}: burnt {burnt} != overcook {overcooks}"
        assert food == steamins, f"seed {seed}: food {food} != steam-ins {steamins}"
        total_overcook += overcooks
        total_burnt += burnt
        total_steamin += steamins
        total_food += food
    assert total_overcook > 200 and total_steamin > 500  # the sweep actually exercised play
    _passed(
        6,
        f"scent: burnt=={total_overcook} overcooks and food=={total_steamin} steam-ins "
        "across 1000 randomized runs",
    )


def test_criterion_07_change_making():
    start = time.monotonic()
    values = denomination_values()
    best = [0] + [10**9] * 10_000
    for x in range(1, 10_001):
        for v in values:
            if v <= x and best[x - v] + 1 < best[x]:
                best[x] = best[x - v] + 1
    for x in range(1, 10_001):
        picked = minimal_change(x)
        assert sum(v * n for v, n in picked.items()) == x
        assert sum(picked.values()) == best[x], f"greedy suboptimal at {x}"
    assert minimal_change(125) == Counter({100: 1, 20: 1, 5: 1})
    elapsed = time.monotonic() - start
    assert elapsed < 60.0
    _passed(7, f"greedy change equals exhaustive minimum for 1..10000 in {elapsed:.1f}s")


def test_criterion_08_determinism_and_replay():
    profile = validate_profile("p042", 71, "male", "7-9y", 26)
    fast = DifficultyParams(
        dimsum_item_count=4,
        memorize_duration_s=2.0,
        dimsum_time_limit_s=15.0,
        steamer_item_count=3,
        cook_time_s=2.0,
        overcook_time_s=4.0,
        steamer_time_limit_s=15.0,
        cashier_trial_count=3,
        cashier_time_limit_s=8.0,
    )
    plans = [
        SessionPlan(),
        SessionPlan(dimsum_wrong=1),
        SessionPlan(steamer_steam=2, steamer_transfer=1),
        SessionPlan(cashier_solve=1, cashier_overshoots=1),
        SessionPlan(dimsum_leave=1, steamer_late=1),
    ]
    for seed in range(20):
        plan = plans[seed % len(plans)]
        script = session_script(fast, seed, 1000, plan)
        snaps_a: list = []
        a = run_session(profile, fast, seed, script, tutorial_ms=1000, snapshot_cb=snaps_a.append)
        b = run_session(profile, fast, seed, script, tutorial_ms=1000)
        assert record_to_bytes(a) == record_to_bytes(b), f"seed {seed} not byte-identical"
        snaps_r: list = []
        replayed = replay_record(a, snapshot_cb=snaps_r.append)
        assert record_to_bytes(replayed) == record_to_bytes(a)
        assert snaps_r == snaps_a, f"seed {seed}: replay failed to reconstruct snapshots"
        assert len(snaps_a) > 0
    _passed(8, "20 seeds x 2 runs byte-identical; replay reconstructed every snapshot")


def test_criterion_09_analysis_report(tmp_path):
    dataset = gen_cohort(n=41, seed=20260809)
    ns = Counter(r.profile.age_group.value for r in dataset.records)
    assert (ns["60-69"], ns["70-79"], ns["80+"]) == (22, 17, 2)

    # round-trip through disk, as the CLI pipeline would
    save_dataset(dataset, tmp_path / "cohort")
    loaded = load_dataset(tmp_path / "cohort")
    report = analyze(loaded, published=load_published_summary())

    from teahouse.core import AgeGroup

    for game in GameId:
        for ind in INDICATORS:
            for group in AgeGroup:
                vals = [
                    r.metrics[game].indicator(ind)
                    for r in loaded.records
                    if r.profile.age_group == group
                ]
                cell = report.performance[(game, ind)][group]
                assert cell is not None
                assert cell.mean == sum(vals) / len(vals), "group mean differs from recompute"

    text = report.render_text()
    for heading in ("Demographics", "Usability scale", "Workload", "Performance by age group"):
        assert heading in text
    pub = load_published_summary()
    for row in pub["rows"]:
        for v in row["values"]:
            assert v in text
        assert row["p"] in text
    assert "0.003*" in text and "0.022*" in text
    _passed(9, "n=41 cohort report: exact group means, all layouts, verbatim published echo")


def test_criterion_10_headless_without_ui(tmp_path):
    """The whole primary pipeline must import and run with no UI component
    present and no display attached."""
    code = (
        "import teahouse, teahouse.analysis, teahouse.server, teahouse.cli\n"
        "from teahouse.cohort import gen_cohort\n"
        "from teahouse.analysis import analyze, load_published_summary\n"
        "from teahouse.core import DifficultyParams\n"
        "p = DifficultyParams(memorize_duration_s=1.0, dimsum_time_limit_s=5.0,\n"
        "    cook_time_s=1.0, overcook_time_s=2.0, steamer_time_limit_s=6.0,\n"
        "    cashier_time_limit_s=4.0)\n"
        "ds = gen_cohort(n=4, seed=1, params=p, tutorial_ms=500)\n"
        "print(len(analyze(ds, published=load_published_summary()).render_text()))\n"
    )
    env = {"PATH": "/usr/bin:/bin", "HOME": str(tmp_path)}
    proc = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, cwd=tmp_path, env=env
    )
    assert proc.returncode == 0, proc.stderr
    assert int(proc.stdout.strip()) > 1000
    import teahouse

    src_root = resources.files("teahouse")
    for mod in src_root.iterdir():
        if mod.name.endswith(".py"):
            assert "frontend" not in mod.read_text(), f"{mod.name} references the UI component"
    _passed(10, "primary pipeline runs headless in a bare subprocess; no UI references in package")
