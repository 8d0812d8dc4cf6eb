"""Command line for the run-log figure generator.

    plots <kind> <log.csv> [<log.csv> ...] [--highlight i] [--delta p,k,o] -o out.png

Kinds: error_norm, error_components, controls, velocities, phase.
With several logs all runs are drawn gray and the highlighted one red.
The sliding-surface offset needed by error_norm and phase is read from the
JSON sidecar next to the first log unless --delta is given.
"""

import argparse
import sys

from .figures import KINDS, EmptyLog, FigureSpec, SchemaMismatch, read_log, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plots", description=__doc__.strip().split("\n")[0])
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("logs", nargs="+", metavar="log.csv")
    parser.add_argument("--highlight", type=int, default=0,
                        help="index of the run drawn in red (default 0)")
    parser.add_argument("--delta", default=None,
                        help="sliding-surface offset as p,k,o (default: JSON sidecar)")
    parser.add_argument("-o", "--out", required=True)
    args = parser.parse_args(argv)

    offset = None
    if args.delta is not None:
        try:
            offset = tuple(float(p) for p in args.delta.split(","))
            if len(offset) != 3:
                raise ValueError
        except ValueError:
            print(f"error: --delta must be three numbers, got {args.delta!r}",
                  file=sys.stderr)
            return 2

    try:
        logs = tuple(read_log(p) for p in args.logs)
        spec = FigureSpec(kind=args.kind, logs=logs, out=args.out,
                          highlight=args.highlight, offset=offset)
        out = render(spec)
    except (SchemaMismatch, EmptyLog, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
