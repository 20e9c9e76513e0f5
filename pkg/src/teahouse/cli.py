"""Command line: simulate scripted sessions, replay/verify records, analyze
datasets, generate synthetic cohorts, and serve live sessions."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import analyze, load_published_summary
from .cohort import gen_cohort
from .core import DifficultyParams, validate_profile
from .gesture import load_script
from .questionnaires import QuestionnaireBundle
from .scent import MockScentDriver
from .session import (
    Dataset,
    load_dataset,
    load_record,
    parse_denominations,
    record_digest,
    replay_record,
    run_session,
    save_dataset,
    save_record,
)


def _load_profile(path: str):
    d = json.loads(Path(path).read_text())
    return validate_profile(
        participant_id=d["participant_id"],
        age=d["age"],
        gender=d["gender"],
        education_band=d["education_band"],
        moca_score=d["moca_score"],
    )


def _load_params(path: str | None):
    """Session config file: difficulty fields plus an optional custom
    `denominations` list of {value, kind}."""
    if path is None:
        return DifficultyParams(), None
    d = json.loads(Path(path).read_text())
    denominations = parse_denominations(d.pop("denominations", None))
    return DifficultyParams.from_dict(d), denominations


def cmd_simulate(args: argparse.Namespace) -> int:
    profile = _load_profile(args.profile)
    params, denominations = _load_params(args.params)
    with open(args.script) as f:
        script = load_script(f)
    questionnaires = None
    if args.questionnaires:
        questionnaires = QuestionnaireBundle.from_dict(json.loads(Path(args.questionnaires).read_text()))
    scent_sink = open(args.scent_log, "w") if args.scent_log else None
    try:
        record = run_session(
            profile,
            params,
            args.seed,
            script,
            questionnaires=questionnaires,
            tutorial_ms=round(args.tutorial_s * 1000),
            scent_driver=MockScentDriver(scent_sink),
            **({"denominations": denominations} if denominations else {}),
        )
    finally:
        if scent_sink:
            scent_sink.close()
    save_record(record, args.out)
    print(f"wrote {args.out} ({len(record.events)} events, digest {record_digest(record)[:16]})")
    for game, m in record.metrics.items():
        print(
            f"  {game.value}: inaccuracy {m.inaccuracy_pct:.1f}%  "
            f"omission {m.omission_pct:.1f}%  time {m.total_time_s:.1f}s"
        )
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    record = load_record(args.record)
    snapshots = []
    regenerated = replay_record(record, snapshot_cb=snapshots.append)
    ok = regenerated.events == record.events and regenerated.metrics == record.metrics
    print(f"replayed {len(record.events)} events, reconstructed {len(snapshots)} snapshots")
    if args.verify_digest:
        d1, d2 = record_digest(record), record_digest(regenerated)
        print(f"stored digest      {d1}")
        print(f"regenerated digest {d2}")
        ok = ok and d1 == d2
    print("verify: OK" if ok else "verify: MISMATCH")
    return 0 if ok else 1


def cmd_analyze(args: argparse.Namespace) -> int:
    dataset = load_dataset(args.dataset)
    published = load_published_summary() if args.published else None
    report = analyze(dataset, published=published)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    text = report.render_text()
    (outdir / "report.txt").write_text(text)
    report.write_csvs(dataset.records, outdir)
    print(text)
    print(f"report and CSV tables written to {outdir}")
    return 0


def cmd_gen_cohort(args: argparse.Namespace) -> int:
    dataset = gen_cohort(n=args.n, seed=args.seed)
    save_dataset(dataset, args.out)
    print(f"wrote {len(dataset.records)} session records to {args.out}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(realtime=not args.no_realtime, static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="teahouse")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a scripted session headlessly")
    p.add_argument("--profile", required=True, help="participant profile JSON")
    p.add_argument("--script", required=True, help="input script (.jsonl)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output record path")
    p.add_argument("--params", help="difficulty params JSON")
    p.add_argument("--questionnaires", help="questionnaire bundle JSON")
    p.add_argument("--tutorial-s", type=float, default=30.0)
    p.add_argument("--scent-log", help="write the device wire log here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("replay", help="re-run a record from its event log")
    p.add_argument("--record", required=True)
    p.add_argument("--verify-digest", action="store_true")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("analyze", help="analyze a dataset directory")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True)
    p.add_argument(
        "--published",
        action="store_true",
        default=True,
        help="echo the published summary fixture (default on)",
    )
    p.add_argument("--no-published", dest="published", action="store_false")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("gen-cohort", help="generate a synthetic cohort dataset")
    p.add_argument("--n", type=int, default=41)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_cohort)

    p = sub.add_parser("serve", help="serve live sessions")
    p.add_argument("--port", type=int, default=8777)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--no-realtime", action="store_true", help="advance time only from frames")
    p.add_argument("--static", help="serve a UI build from this directory")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
