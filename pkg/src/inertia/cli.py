"""Command-line front end.

Subcommands: update, family, audit, cps, ht, signal, persuade. Exit codes:
0 success, 1 audit failures (reports still written), 2 input errors.
Numeric failures print their module error names. CSV output carries 6
significant digits; JSON carries full doubles. Output ordering is stable so
fixed inputs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import serialize
from .audits import run_all_audits
from .core import Belief, Event, InertiaError, StateSpace, all_nonempty_events
from .ladders import ecps_posterior, cps_posterior, ht_from_ecps, ht_posterior, ladder_from_family
from .models import WIUModel, update_family, iu_posterior, wiu_posterior
from .persuasion import grid_oracle, optimize_binary, optimize_rich
from .signals import grether_posterior

__all__ = ["main", "run"]


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def _emit(text: str, out_path: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(obj) -> str:
    import json

    return json.dumps(obj, indent=2)


def _parse_event(space: StateSpace, spec: str) -> Event:
    return space.event(*[s.strip() for s in spec.split(",") if s.strip()])


def _event_cell(space: StateSpace, event: Event) -> str:
    return "+".join(event.labels(space))


def _load_model(path: str):
    return serialize.model_from_dict(serialize.load_json(path))


def _posterior_for(model, event: Event) -> Belief:
    if isinstance(model, WIUModel):
        return wiu_posterior(model, event)
    return iu_posterior(model, event)


def _cmd_update(args) -> int:
    model = _load_model(args.model)
    base = model.base if isinstance(model, WIUModel) else model
    event = _parse_event(base.space, args.event)
    post = _posterior_for(model, event)
    if args.format == "csv":
        _emit(",".join(_fmt(v) for v in post.probs), args.out)
    elif args.format == "json":
        _emit(_json_text({"event": list(event.labels(base.space)),
                          "posterior": post.probs.tolist()}), args.out)
    else:
        lines = [f"{label}: {_fmt(v)}" for label, v in zip(base.space.labels, post.probs)]
        _emit("\n".join(lines), args.out)
    return 0


def _cmd_family(args) -> int:
    model = _load_model(args.model)
    base = model.base if isinstance(model, WIUModel) else model
    if args.event:
        events = [_parse_event(base.space, spec) for spec in args.event]
    else:
        events = list(base.space.all_events())
    fam = update_family(model, events)
    if args.format == "json":
        _emit(_json_text(serialize.family_to_dict(fam)), args.out)
    else:
        header = "event," + ",".join(base.space.labels)
        rows = [header]
        for event in fam.events():
            cells = [_event_cell(base.space, event)] + [_fmt(v) for v in fam[event].probs]
            rows.append(",".join(cells))
        _emit("\n".join(rows), args.out)
    return 0


def _cmd_audit(args) -> int:
    fam = serialize.family_from_dict(serialize.load_json(args.family))
    reports = run_all_audits(fam)
    if args.format == "json":
        payload = [serialize.report_to_dict(r, fam.space) for r in reports]
        _emit(_json_text(payload), args.out)
    else:
        _emit("\n".join(serialize.report_to_text(r, fam.space) for r in reports), args.out)
    return 0 if all(r.passed for r in reports) else 1


def _cmd_cps(args) -> int:
    if args.family:
        fam = serialize.family_from_dict(serialize.load_json(args.family))
        ladder = ladder_from_family(fam)
        _emit(_json_text(serialize.ladder_to_dict(ladder, fam.space)), args.out)
        return 0
    if not args.model or not args.event:
        print("cps needs either --family (extraction) or --model and --event (evaluation)",
              file=sys.stderr)
        return 2
    ladder, space = serialize.ladder_from_dict(serialize.load_json(args.model))
    if space is None:
        space = StateSpace(f"s{i+1}" for i in range(ladder.n))
    event = _parse_event(space, args.event)
    if args.epsilon is not None and args.epsilon > 0:
        post = ecps_posterior(ladder, args.epsilon, event)
    else:
        post = cps_posterior(ladder, event)
    if args.format == "csv":
        _emit(",".join(_fmt(v) for v in post.probs), args.out)
    elif args.format == "json":
        _emit(_json_text({"event": list(event.labels(space)),
                          "posterior": post.probs.tolist()}), args.out)
    else:
        _emit("\n".join(f"{l}: {_fmt(v)}" for l, v in zip(space.labels, post.probs)), args.out)
    return 0


def _cmd_ht(args) -> int:
    ladder, space = serialize.ladder_from_dict(serialize.load_json(args.model))
    eps = args.epsilon or 0.0
    model = ht_from_ecps(ladder, eps)
    # equivalence sweep over every reachable nonempty event
    checked = 0
    max_dev = 0.0
    threshold = max(eps, 1e-12)
    for event in all_nonempty_events(ladder.n):
        k = ladder.first_level(event, threshold)
        if k is None:
            continue
        want = ecps_posterior(ladder, eps, event)
        got = ht_posterior(model, event)
        checked += 1
        max_dev = max(max_dev, float(np.max(np.abs(want.probs - got.probs))))
    payload = {
        "model": serialize.ht_model_to_dict(model, space),
        "sweep": {"events_checked": checked, "max_deviation": max_dev},
    }
    _emit(_json_text(payload), args.out)
    return 0


def _cmd_signal(args) -> int:
    model = serialize.signal_model_from_dict(serialize.load_json(args.model))
    posts = {m: grether_posterior(model, m) for m in model.message_labels}
    if args.format == "json":
        payload = {m: posts[m].probs.tolist() for m in model.message_labels}
        _emit(_json_text({"posteriors": payload}), args.out)
    else:
        header = "omega," + ",".join(model.message_labels)
        rows = [header]
        for i, w in enumerate(model.omega_labels):
            rows.append(",".join([w] + [_fmt(posts[m].probs[i]) for m in model.message_labels]))
        _emit("\n".join(rows), args.out)
    return 0


def _cmd_persuade(args) -> int:
    env = serialize.persuasion_env_from_dict(serialize.load_json(args.model))
    if args.regime == "grid":
        sol = grid_oracle(env, resolution=args.resolution or 0.01)
    elif args.k:
        sol = optimize_rich(env, args.k)
    else:
        override = {None: None, "auto": None, "linear": "LinearGreedy",
                    "concave": "ConcaveVertex", "convex": "ConvexInterior"}[args.regime]
        sol = optimize_binary(env, regime_override=override)
    if args.format == "csv":
        rows = [",".join(_fmt(v) for v in row) for row in sol.signal.pi]
        _emit("\n".join(rows), args.out)
    else:
        _emit(_json_text(serialize.solution_to_dict(sol)), args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inertia",
        description="Distance-minimizing belief updating: posteriors, audits, "
                    "ladder rules, signal distortions, and persuasion solvers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, fmt_default="csv"):
        p.add_argument("--format", choices=["csv", "json", "text"], default=fmt_default)
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("update", help="posterior for one event")
    p.add_argument("--model", required=True)
    p.add_argument("--event", required=True, help="comma-separated state labels")
    add_common(p)
    p.set_defaults(fn=_cmd_update)

    p = sub.add_parser("family", help="posterior table over events")
    p.add_argument("--model", required=True)
    p.add_argument("--event", action="append", default=None,
                   help="repeatable; default is every nonempty event")
    add_common(p)
    p.set_defaults(fn=_cmd_family)

    p = sub.add_parser("audit", help="run every axiom audit on a family file")
    p.add_argument("--family", required=True)
    add_common(p, fmt_default="text")
    p.set_defaults(fn=_cmd_audit)

    p = sub.add_parser("cps", help="extract a ladder from a family, or evaluate one")
    p.add_argument("--family", default=None, help="family file: extract its ladder")
    p.add_argument("--model", default=None, help="ladder file: evaluate a posterior")
    p.add_argument("--event", default=None)
    p.add_argument("--epsilon", type=float, default=None)
    add_common(p, fmt_default="json")
    p.set_defaults(fn=_cmd_cps)

    p = sub.add_parser("ht", help="build an equivalent hypothesis-testing model")
    p.add_argument("--model", required=True, help="ladder file")
    p.add_argument("--epsilon", type=float, default=0.0)
    add_common(p, fmt_default="json")
    p.set_defaults(fn=_cmd_ht)

    p = sub.add_parser("signal", help="distorted posterior tables for a signal model")
    p.add_argument("--model", required=True)
    add_common(p)
    p.set_defaults(fn=_cmd_signal)

    p = sub.add_parser("persuade", help="solve for the sender-optimal signal")
    p.add_argument("--model", required=True)
    p.add_argument("--k", type=int, default=None, help="number of persuading messages (rich)")
    p.add_argument("--resolution", type=float, default=None)
    p.add_argument("--regime", choices=["auto", "linear", "concave", "convex", "grid"],
                   default="auto")
    add_common(p, fmt_default="json")
    p.set_defaults(fn=_cmd_persuade)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InertiaError as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError) as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return 2


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
