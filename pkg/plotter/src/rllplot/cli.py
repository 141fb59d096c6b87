"""Command line: rllplot <spec.json> (an optional leading 'plot' is accepted)."""

import sys

from rllplot.render import PlotSpec, SpecError, render


def main(argv=None):
    args = list(sys.argv[1:] if argv is None else argv)
    if args and args[0] == "plot":
        args = args[1:]
    if len(args) != 1:
        print("usage: rllplot [plot] <spec.json>", file=sys.stderr)
        return 1
    try:
        spec = PlotSpec.from_file(args[0])
        svg, png = render(spec)
    except SpecError as exc:
        print(f"plot spec error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"render error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {svg} and {png}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
