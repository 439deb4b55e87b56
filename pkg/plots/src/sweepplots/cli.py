"""render --panel KIND --in CSV... --out IMG"""

from __future__ import annotations

import argparse
import sys

from .panels import Marker, PanelError, build_spec, render_panel


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render", description="render a panel from sweep CSV files"
    )
    parser.add_argument("--panel", required=True,
                        choices=("entropy", "polarization", "npulses"))
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="CSV")
    parser.add_argument("--out", required=True, metavar="IMG")
    parser.add_argument(
        "--marker", action="append", default=None, metavar="POS[:LABEL]",
        help="explicit dashed line; default recomputes from CSV metadata",
    )
    args = parser.parse_args(argv)

    explicit = None
    if args.marker is not None:
        explicit = []
        for item in args.marker:
            pos, _, label = item.partition(":")
            explicit.append(Marker(float(pos), label or "marker"))
    try:
        spec, _ = build_spec(args.inputs, args.panel, explicit)
        result = render_panel(spec, args.out)
    except (PanelError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    positions = ", ".join(f"{m.position:.6f}" for m in result.markers)
    print(f"wrote {result.path} ({result.n_curves} curves; markers at {positions})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
