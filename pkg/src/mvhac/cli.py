"""Batch command line: ``mvhac {validate,klassen,lq,hac,mvhac,fixture} ...``.

Exit codes: 0 success, 1 validation or domain error (message on stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

from mvhac._version import __version__
from mvhac.dataset import PanelError, parse_decimal, parse_panel, synthetic_fixture, validate_input
from mvhac.errors import MvhacError
from mvhac.hac import Linkage, agglomerate, cut
from mvhac.klassen import klassen_districts
from mvhac.lq import DEFAULT_EPSILON, lq_profile
from mvhac.multiview import FeatureKind, MvhacConfig, run_mvhac
from mvhac import output

log = logging.getLogger("mvhac")


class CliError(Exception):
    """Raised for failures that map to exit code 1."""


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"{path}: cannot read: {exc.strerror}") from None
    except UnicodeDecodeError as exc:
        raise CliError(f"{path}: not valid UTF-8: {exc.reason}") from None


def _load_panel(path: str, reference: str, year: str):
    try:
        return parse_panel(_read(path), reference, year=year)
    except PanelError as exc:
        raise CliError(f"{path}: {exc}") from None


def _load_input(args):
    cur = _load_panel(args.current, args.reference, args.current_year)
    prev = _load_panel(args.previous, args.reference, args.previous_year)
    try:
        return validate_input(cur, prev)
    except PanelError as exc:
        raise CliError(f"{args.current} vs {args.previous}: {exc}") from None


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _load_vectors(path: str):
    rows = [r for r in csv.reader(io.StringIO(_read(path), newline="")) if any(c.strip() for c in r)]
    if len(rows) < 2:
        raise CliError(f"{path}: need a header row and at least one data row")
    header = [h.strip() for h in rows[0]]
    labels, vectors = [], []
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise CliError(f"{path}: row {line}: expected {len(header)} cells, found {len(row)}")
        try:
            vectors.append([parse_decimal(c, line, name, allow_negative=True) for c, name in zip(row[1:], header[1:])])
        except PanelError as exc:
            raise CliError(f"{path}: {exc}") from None
        labels.append(row[0].strip())
    if len(set(labels)) != len(labels):
        raise CliError(f"{path}: duplicate labels")
    return labels, vectors


# -- subcommands ---------------------------------------------------------------


def cmd_validate(args) -> int:
    cur = _load_panel(args.current, args.reference, args.current_year)
    msg = f"ok: {args.current}: {len(cur.districts)} districts, {len(cur.sectors)} sectors"
    if args.previous:
        prev = _load_panel(args.previous, args.reference, args.previous_year)
        try:
            validate_input(cur, prev)
        except PanelError as exc:
            raise CliError(f"{args.current} vs {args.previous}: {exc}") from None
        msg += f"; {args.previous} matches"
    print(msg)
    return 0


def cmd_klassen(args) -> int:
    data = _load_input(args)
    try:
        result = klassen_districts(data, include_sectors=args.sectors)
    except MvhacError as exc:
        raise CliError(f"[klassen] {exc}") from None
    sectors = data.current.sector_names
    if args.format == "json":
        text = output.dumps(output.klassen_section(result, sectors))
    elif args.format == "csv":
        text = output.klassen_csv(result)
        if args.sectors:
            text += "\n" + output.klassen_sectors_csv(result, sectors)
    else:
        text = output.klassen_text(result)
        if args.sectors:
            text += "\nSector quadrants\n" + output.klassen_sectors_csv(result, sectors)
    _write(args.out, text)
    return 0


def cmd_lq(args) -> int:
    panel = _load_panel(args.current, args.reference, args.current_year)
    try:
        profile = lq_profile(panel, args.epsilon)
    except MvhacError as exc:
        raise CliError(f"[lq] {exc}") from None
    if args.format == "json":
        text = output.dumps(output.lq_section(profile))
    elif args.format == "csv":
        text = output.lq_values_csv(profile) + "\n" + output.indicator_csv(profile)
    else:
        text = output.lq_text(profile)
    _write(args.out, text)
    return 0


def cmd_hac(args) -> int:
    labels, vectors = _load_vectors(args.input)
    try:
        tree = agglomerate(vectors, args.linkage, labels=labels)
        groups = cut(tree, args.cut) if args.cut else None
    except MvhacError as exc:
        raise CliError(f"[hac] {exc}") from None
    if args.format == "newick":
        text = output.to_newick(tree) + "\n"
    elif args.format == "dot":
        text = output.to_dot(tree)
    elif args.format == "json":
        obj = output.dendrogram_section(tree)
        if groups is not None:
            obj["cut"] = [list(g) for g in groups]
        text = output.dumps(obj)
    else:
        text = output.render_text(tree)
    if groups is not None and args.format != "json":
        text += "".join(f"# cluster {i + 1}: {' '.join(g)}\n" for i, g in enumerate(groups))
    _write(args.out, text)
    return 0


def cmd_mvhac(args) -> int:
    data = _load_input(args)
    config = MvhacConfig(
        linkage=args.linkage, epsilon=args.epsilon, features=args.features, standardize=args.standardize
    )
    try:
        result = run_mvhac(data, config)
    except MvhacError as exc:
        raise CliError(str(exc)) from None

    if args.format == "json":
        _write(args.out, output.report_json(result))
    else:
        _write(args.out, output.render_tables(result, args.format))
    if args.tables:
        _write(args.tables, output.render_tables(result, "text"))
    renderers = (
        (args.newick, "nwk", lambda d: output.to_newick(d) + "\n"),
        (args.dot, "dot", output.to_dot),
        (args.ascii, "txt", output.render_text),
    )
    for directory, ext, render in renderers:
        if not directory:
            continue
        Path(directory).mkdir(parents=True, exist_ok=True)
        for view in result.views:
            if view.dendrogram is not None:
                _write(str(Path(directory) / f"{view.quadrant.code}.{ext}"), render(view.dendrogram))
    for view in result.views:
        log.info("%s: %d members", view.quadrant.code, len(view.members))
    return 0


def cmd_fixture(args) -> int:
    data = synthetic_fixture(args.seed, args.districts, args.sectors)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write(str(out / "current.csv"), output.render_panel(data.current))
    _write(str(out / "previous.csv"), output.render_panel(data.previous))
    print(f"wrote {out / 'current.csv'} and {out / 'previous.csv'} (reference {data.reference})")
    return 0


# -- parser --------------------------------------------------------------------


def _panel_args(p: argparse.ArgumentParser, previous: str):
    p.add_argument("--current", required=True, help="current-year panel CSV")
    if previous == "required":
        p.add_argument("--previous", required=True, help="previous-year panel CSV")
    elif previous == "optional":
        p.add_argument("--previous", help="previous-year panel CSV")
    p.add_argument("--reference", required=True, help="region id of the province (reference) row")
    p.add_argument("--current-year", default="", help="label for the current year")
    if previous:
        p.add_argument("--previous-year", default="", help="label for the previous year")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mvhac", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"mvhac {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check panels against the input contract")
    _panel_args(p, "optional")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("klassen", help="district Klassen quadrants")
    _panel_args(p, "required")
    p.add_argument("--sectors", action="store_true", help="also classify every district/sector cell")
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_klassen)

    p = sub.add_parser("lq", help="location quotients of the current panel")
    _panel_args(p, "")
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON, help="LQ = 1 tolerance")
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_lq)

    p = sub.add_parser("hac", help="cluster the rows of a label,feature... CSV")
    p.add_argument("--input", required=True, help="CSV with a label column then numeric columns")
    p.add_argument("--linkage", choices=[l.value for l in Linkage], default=Linkage.AVERAGE.value)
    p.add_argument("--cut", type=int, help="also report a partition into this many clusters")
    p.add_argument("--format", choices=["text", "newick", "dot", "json"], default="text")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_hac)

    p = sub.add_parser("mvhac", help="full pipeline: quadrants, LQ features, per-quadrant trees")
    _panel_args(p, "required")
    p.add_argument("--linkage", choices=[l.value for l in Linkage], default=Linkage.AVERAGE.value)
    p.add_argument("--features", choices=[f.value for f in FeatureKind], default=FeatureKind.LQ.value)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON, help="LQ = 1 tolerance")
    p.add_argument("--standardize", action="store_true", help="z-score feature columns")
    p.add_argument("--format", choices=["json", "text", "csv"], default="json")
    p.add_argument("--out", help="report file (default stdout)")
    p.add_argument("--tables", help="also write the text tables here")
    p.add_argument("--newick", metavar="DIR", help="write Q1.nwk..Q4.nwk for non-empty views")
    p.add_argument("--dot", metavar="DIR", help="write Q1.dot..Q4.dot for non-empty views")
    p.add_argument("--ascii", metavar="DIR", help="write Q1.txt..Q4.txt ASCII trees for non-empty views")
    p.set_defaults(func=cmd_mvhac)

    p = sub.add_parser("fixture", help="write a seeded synthetic panel pair")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--districts", type=int, default=8)
    p.add_argument("--sectors", type=int, default=9)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_fixture)
    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if getattr(args, "epsilon", 0.0) < 0:
        parser.print_usage(sys.stderr)
        print("mvhac: error: --epsilon must be non-negative", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (CliError, MvhacError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
