"""Command line interface: serve, score, contour, replay, fixtures.

Exit codes: 0 success, 1 usage error, 2 processing error.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import analytics, fixtures
from .campaign import Campaign, CampaignState, read_events
from .config import ServiceConfig
from .contour import contour_from_silhouette, load_pgm
from .errors import NoAttempts
from .scoring import FixedTranscriptionProvider, MapTranscriptionProvider


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> _Parser:
    parser = _Parser(prog="vocalize")
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--config", help="flat key=value config file")
    p_serve.add_argument("--host")
    p_serve.add_argument("--port", type=int)
    p_serve.add_argument("--data-dir")

    p_score = sub.add_parser("score", help="score one WAV against a campaign file")
    p_score.add_argument("--campaign", required=True, help="campaign definition JSON")
    p_score.add_argument("--audio", required=True, help="WAV file")
    p_score.add_argument("--transcript", help="use this transcript instead of ASR")
    p_score.add_argument("--transcripts", help="digest->transcript map JSON")

    p_contour = sub.add_parser("contour", help="extract a contour from a PGM silhouette")
    p_contour.add_argument("--image", required=True, help="binary PGM (P5) file")
    p_contour.add_argument("--threshold", type=int, default=128)
    p_contour.add_argument("--label", default="")

    p_replay = sub.add_parser("replay", help="compute reports from an event log")
    p_replay.add_argument("--log", required=True, help="JSON-lines event log")
    p_replay.add_argument("--share", type=float, default=0.8,
                          help="message share for the concentration metric")

    p_fix = sub.add_parser("fixtures", help="regenerate bundled synthetic fixtures")
    p_fix.add_argument("--out", default="fixtures", help="output directory")

    return parser


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = ServiceConfig.load(args.config) if args.config else ServiceConfig.load()
    if args.host:
        config.listen_host = args.host
    if args.port:
        config.listen_port = args.port
    if args.data_dir:
        config.data_dir = args.data_dir
    uvicorn.run(create_app(config), host=config.listen_host, port=config.listen_port)
    return 0


def _cmd_score(args) -> int:
    campaign = Campaign.from_dict(
        json.loads(Path(args.campaign).read_text(encoding="utf-8"))
    )
    wav_bytes = Path(args.audio).read_bytes()
    if args.transcript is not None:
        transcriber = FixedTranscriptionProvider(args.transcript)
    elif args.transcripts:
        transcriber = MapTranscriptionProvider.from_json(
            Path(args.transcripts).read_bytes()
        )
    else:
        transcriber = MapTranscriptionProvider()
    state = CampaignState(campaign)
    now = campaign.starts_at
    state.record_inbound("cli-user", "inbound_text", now)
    state.register_user("cli-user", {"name": "cli"}, now)
    result = state.submit_attempt("cli-user", wav_bytes, now, transcriber=transcriber)
    print(result.to_json())
    return 0


def _cmd_contour(args) -> int:
    image = load_pgm(Path(args.image).read_bytes())
    contour = contour_from_silhouette(image, threshold=args.threshold, label=args.label)
    print(json.dumps({"bins": list(contour.bins), "label": contour.label},
                     sort_keys=True))
    return 0


def _cmd_replay(args) -> int:
    events = read_events(Path(args.log))
    report = analytics.funnel_report(events)
    out = {"funnel": report.to_dict()}
    try:
        total, median, count = analytics.duration_stats(events)
        out["durations"] = {"total_s": total, "median_s": median, "count": count}
        out["concentration"] = {
            "message_share": args.share,
            "participant_fraction": analytics.concentration(events, args.share),
        }
    except NoAttempts:
        pass  # logs without attempts still get a funnel report
    print(json.dumps(out, sort_keys=True))
    return 0


def _cmd_fixtures(args) -> int:
    for path in fixtures.write_all(args.out):
        print(path)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "serve": _cmd_serve,
        "score": _cmd_score,
        "contour": _cmd_contour,
        "replay": _cmd_replay,
        "fixtures": _cmd_fixtures,
    }
    try:
        return handlers[args.command](args)
    except SystemExit:
        raise
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
