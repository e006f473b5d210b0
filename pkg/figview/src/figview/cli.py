"""figview command line: render simulator CSVs to SVG or PNG figures."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .render import FORMATS, PlotSpec, render
from .tables import KINDS, TableError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figview",
        description="Render cyclewalk sweep CSVs into paper-style figures.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one CSV to one image")
    p.add_argument("--kind", choices=list(KINDS), required=True)
    p.add_argument("--in", dest="source", required=True, help="input CSV path")
    p.add_argument("--out", required=True, help="output image path")
    p.add_argument("--format", choices=list(FORMATS), default=None,
                   help="image format; inferred from --out suffix when omitted")
    p.add_argument("--title", default="", help="figure title (default: input stem)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    ns = _build_parser().parse_args(sys.argv[1:] if argv is None else argv)
    spec = PlotSpec(source=Path(ns.source), kind=ns.kind, out=Path(ns.out),
                    fmt=ns.format, title=ns.title)
    try:
        out = render(spec)
    except TableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: cannot write {ns.out}: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
