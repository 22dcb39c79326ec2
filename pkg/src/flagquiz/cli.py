"""Command-line entry points: play, replay, simulate, serve.

Exit codes: 0 success, 1 domain error (bad data, bad configuration),
2 usage or I/O error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import dialogue
from .registry import RegistryError, load_default_registry, load_registry
from .session import GameSession
from .simulation import (
    NoiseModel,
    PlayerModel,
    TranscriptError,
    apply_noise,
    compute_metrics,
    load_player_model,
    parse_transcript,
    replay,
    run_sweep,
)
from .simulation.report import (
    GAME_COLUMNS,
    SWEEP_COLUMNS,
    format_table,
    game_rows,
    render_game_figure,
    render_sweep_figure,
    write_game_csv,
    write_sweep_csv,
)


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return number


def _probability(value: str) -> float:
    number = float(value)
    if not 0.0 <= number <= 1.0:
        raise argparse.ArgumentTypeError("must be in [0, 1]")
    return number


def _p_grid(value: str) -> list[float]:
    try:
        grid = [float(part) for part in value.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid: {exc}") from exc
    if not grid:
        raise argparse.ArgumentTypeError("grid is empty")
    for p in grid:
        if not 0.0 <= p <= 1.0:
            raise argparse.ArgumentTypeError("grid values must be in [0, 1]")
    return grid


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flagquiz",
        description="Cooperative flag-quiz game master and evaluation harness",
    )
    parser.add_argument(
        "--registry", metavar="PATH", help="country registry JSON (default: bundled)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    play = sub.add_parser("play", help="interactive console game for two players")
    play.add_argument("--strategy", choices=dialogue.STRATEGIES, default=dialogue.PROCEDURAL)
    play.add_argument("--threshold", type=_positive_int, default=3,
                      help="answers needed before a repetition counts as agreement")
    play.add_argument("--clue-trigger", type=_positive_int, default=2)
    play.add_argument("--seed", type=int, default=None)
    play.add_argument("--p-confusion", type=_probability, default=0.0,
                      help="probability of mishearing which player spoke")
    play.add_argument("--log", metavar="PATH", help="append the game log here")

    rep = sub.add_parser("replay", help="replay transcripts and score recognition")
    rep.add_argument("--transcript", required=True, metavar="PATH",
                     help="transcript .jsonl file, or a directory of them")
    rep.add_argument("--strategy", choices=dialogue.STRATEGIES, default=dialogue.PROCEDURAL)
    rep.add_argument("--threshold", type=_positive_int, default=3)
    rep.add_argument("--p-confusion", type=_probability, default=0.0)
    rep.add_argument("--seed", type=int, default=0)
    rep.add_argument("--out", metavar="DIR", help="write CSV, figure and logs here")

    sim = sub.add_parser("simulate", help="Monte-Carlo sweep over label noise")
    sim.add_argument("--trials", type=_positive_int, default=200)
    sim.add_argument("--p-grid", type=_p_grid, default=[0.0, 0.1, 0.2, 0.3, 0.4, 0.5])
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--threshold", type=_positive_int, default=3)
    sim.add_argument("--params", metavar="FILE", help="player model JSON")
    sim.add_argument("--out", metavar="DIR", help="write CSV and figure here")

    srv = sub.add_parser("serve", help="run the HTTP/WebSocket play service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    srv.add_argument("--session-ttl", type=float, default=1800.0)
    srv.add_argument("--log-dir", metavar="DIR", default="game_logs")
    srv.add_argument("--ui-dir", metavar="DIR", help="static web client to mount at /")
    return parser


def _load_registry(args) -> "object":
    if args.registry:
        return load_registry(args.registry)
    return load_default_registry()


def cmd_play(args, registry) -> int:
    config = dialogue.SessionConfig(
        strategy=args.strategy,
        answer_threshold=args.threshold,
        clue_trigger=args.clue_trigger,
        seed=args.seed,
    )
    session = GameSession(
        config,
        registry=registry,
        speaker_confusion=args.p_confusion,
        log_path=args.log,
    )
    print(f"agent> {session.opening_utterance}")
    speakers = config.speakers
    turn = 0
    while not session.finished:
        prompt = speakers[turn % 2]
        try:
            raw = input(f"{prompt}> ")
        except EOFError:
            print()
            break
        text = raw.strip()
        if not text:
            continue
        if text.lower() in {"/quit", "/exit"}:
            break
        speaker = prompt
        for label in speakers:
            prefix = f"{label}:"
            if text.startswith(prefix):
                speaker = label
                text = text[len(prefix):].strip()
                break
        outcome = session.post(speaker, text)
        for utterance in outcome.utterances:
            print(f"agent> {utterance}")
        turn += 1
    if session.finished:
        print("(game finished)")
    return 0


def _transcript_paths(path: Path) -> list[Path]:
    if path.is_dir():
        found = sorted(path.glob("*.jsonl"))
        if not found:
            raise FileNotFoundError(f"no .jsonl transcripts in {path}")
        return found
    if not path.exists():
        raise FileNotFoundError(path)
    return [path]


def cmd_replay(args, registry) -> int:
    paths = _transcript_paths(Path(args.transcript))
    results = []
    logs = []
    for path in paths:
        transcript = parse_transcript(path)
        if args.p_confusion > 0:
            transcript = apply_noise(
                transcript, NoiseModel(args.p_confusion, seed=args.seed)
            )
        config = dialogue.SessionConfig(
            strategy=args.strategy, answer_threshold=args.threshold, seed=args.seed
        )
        log = replay(transcript, config, registry)
        report = compute_metrics(log, transcript)
        results.append((transcript.meta.group_id, transcript.meta.game_id or path.stem, report))
        logs.append((path.stem, log))
    rows = game_rows(results)
    print(f"strategy={args.strategy} threshold={args.threshold} p_confusion={args.p_confusion:g}")
    print(format_table(rows, GAME_COLUMNS))
    if args.out:
        out = Path(args.out)
        csv_path = write_game_csv(rows, out / "replay_metrics.csv")
        fig_path = render_game_figure(results, out / "replay_agreement.png")
        for stem, log in logs:
            (out / f"{stem}.log.jsonl").write_text(log.to_jsonl(), encoding="utf-8")
        print(f"wrote {csv_path} and {fig_path}")
    return 0


def cmd_simulate(args, registry) -> int:
    params = load_player_model(args.params) if args.params else PlayerModel()
    rows = run_sweep(
        registry,
        params,
        trials=args.trials,
        p_grid=args.p_grid,
        seed=args.seed,
        answer_threshold=args.threshold,
    )
    print(f"trials={args.trials} seed={args.seed} threshold={args.threshold}")
    print(format_table([row.as_row() for row in rows], SWEEP_COLUMNS))
    if args.out:
        out = Path(args.out)
        csv_path = write_sweep_csv(rows, out / "sweep.csv")
        fig_path = render_sweep_figure(rows, out / "sweep_agreement.png")
        print(f"wrote {csv_path} and {fig_path}")
    return 0


def cmd_serve(args, registry) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(
        registry=registry,
        session_ttl=args.session_ttl,
        log_dir=args.log_dir,
        ui_dir=args.ui_dir,
    )
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        registry = _load_registry(args)
        if args.command == "play":
            return cmd_play(args, registry)
        if args.command == "replay":
            return cmd_replay(args, registry)
        if args.command == "simulate":
            return cmd_simulate(args, registry)
        return cmd_serve(args, registry)
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RegistryError, TranscriptError, dialogue.ConfigurationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
