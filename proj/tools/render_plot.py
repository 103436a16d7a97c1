#!/usr/bin/env python3
"""Render the plot.txt description of a finished run directory to a PNG.

The description format is line-oriented.  Each line starts with a kind
(panel, series, curve, stem, hline, vline) followed by space-separated
key=value tokens; a bare token (no '=') continues the value of the previous
key, which lets labels and titles contain spaces without quoting.

  panel  x=COL [y=COL] [xscale=log] [yscale=log] [xlabel=..] [ylabel=..] [title=..]
  series [x=COL] [y=COL] [filter=COL:VAL] [marker=M] [label=..]   data: results.csv
  curve  file=F x=COL y=COL [label=..]                            data: auxiliary csv
  stem   file=F [marker=M] [label=..]                             data: a vec file
  hline  y=V [label=..]
  vline  x=V [label=..]

Series with a marker are drawn as scatter points, series without one as
sorted lines.  Log axes drop non-positive values.
"""

import argparse
import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def parse_tokens(line):
    parts = line.split(" ")
    kind = parts[0]
    opts = {}
    key = None
    for tok in parts[1:]:
        if "=" in tok:
            key, value = tok.split("=", 1)
            opts[key] = value
        elif key is not None:
            opts[key] += " " + tok
    return kind, opts


def load_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SystemExit(f"empty table: {path}")
    header = rows[0]
    return header, rows[1:]


def load_vec(path):
    with open(path) as fh:
        head = fh.readline()
        if not head.startswith("vec v1"):
            raise SystemExit(f"not a vec file: {path}")
        return [float(line) for line in fh if line.strip()]


def column(header, rows, name, keep):
    if name not in header:
        raise SystemExit(f"unknown column '{name}' (have {', '.join(header)})")
    idx = header.index(name)
    out = []
    for i, row in enumerate(rows):
        if not keep[i]:
            continue
        cell = row[idx] if idx < len(row) else ""
        try:
            out.append((i, float(cell)))
        except ValueError:
            pass  # failed-trial cells stay blank
    return out


def pair_columns(header, rows, xname, yname, keep):
    xs = dict(column(header, rows, xname, keep))
    ys = dict(column(header, rows, yname, keep))
    shared = sorted(set(xs) & set(ys))
    return [xs[i] for i in shared], [ys[i] for i in shared]


def drop_nonpositive(xs, ys, log_x, log_y):
    pts = [
        (x, y)
        for x, y in zip(xs, ys)
        if (not log_x or x > 0) and (not log_y or y > 0)
    ]
    return [p[0] for p in pts], [p[1] for p in pts]


def render(run_dir, out_path, dpi):
    run_dir = Path(run_dir)
    spec_path = run_dir / "plot.txt"
    lines = [ln.rstrip("\n") for ln in open(spec_path) if ln.strip()]
    if not lines or lines[0] != "format=plotspec v1":
        raise SystemExit(f"unrecognized plot format in {spec_path}")

    header, rows = load_csv(run_dir / "results.csv")

    panels = []
    for line in lines[1:]:
        kind, opts = parse_tokens(line)
        if kind == "panel":
            panels.append((opts, []))
        elif not panels:
            raise SystemExit(f"'{kind}' line before any panel in {spec_path}")
        else:
            panels[-1][1].append((kind, opts))
    if not panels:
        raise SystemExit(f"no panels in {spec_path}")

    fig, axes = plt.subplots(len(panels), 1, figsize=(7.5, 3.4 * len(panels)))
    if len(panels) == 1:
        axes = [axes]

    for ax, (popts, items) in zip(axes, panels):
        log_x = popts.get("xscale") == "log"
        log_y = popts.get("yscale") == "log"
        for kind, opts in items:
            label = opts.get("label")
            if kind == "series":
                keep = [True] * len(rows)
                if "filter" in opts:
                    col, _, want = opts["filter"].partition(":")
                    if col not in header:
                        raise SystemExit(f"unknown filter column '{col}'")
                    idx = header.index(col)
                    keep = [r[idx] == want if idx < len(r) else False for r in rows]
                xname = opts.get("x", popts.get("x"))
                yname = opts.get("y", popts.get("y"))
                xs, ys = pair_columns(header, rows, xname, yname, keep)
                xs, ys = drop_nonpositive(xs, ys, log_x, log_y)
                if "marker" in opts:
                    ax.plot(xs, ys, linestyle="none", marker=opts["marker"],
                            markersize=4, alpha=0.7, label=label)
                else:
                    pts = sorted(zip(xs, ys))
                    ax.plot([p[0] for p in pts], [p[1] for p in pts], label=label)
            elif kind == "curve":
                chead, crows = load_csv(run_dir / opts["file"])
                xs, ys = pair_columns(chead, crows, opts["x"], opts["y"],
                                      [True] * len(crows))
                xs, ys = drop_nonpositive(xs, ys, log_x, log_y)
                ax.plot(xs, ys, linewidth=1.8, label=label)
            elif kind == "stem":
                values = load_vec(run_dir / opts["file"])
                marker = opts.get("marker", "o")
                container = ax.stem([float(i) for i in range(len(values))], values,
                                    basefmt=" ", label=label)
                plt.setp(container.markerline, marker=marker, markersize=4)
                plt.setp(container.stemlines, linewidth=0.7, alpha=0.6)
            elif kind == "hline":
                ax.axhline(float(opts["y"]), linestyle="--", linewidth=1.1,
                           color="0.3", label=label)
            elif kind == "vline":
                ax.axvline(float(opts["x"]), linestyle="--", linewidth=1.1,
                           color="0.3", label=label)
            else:
                raise SystemExit(f"unknown plot element '{kind}'")
        if log_x:
            ax.set_xscale("log")
        if log_y:
            ax.set_yscale("log")
        if "xlabel" in popts:
            ax.set_xlabel(popts["xlabel"])
        if "ylabel" in popts:
            ax.set_ylabel(popts["ylabel"])
        if "title" in popts:
            ax.set_title(popts["title"])
        if any(i[1].get("label") for i in items):
            ax.legend(fontsize=8)
        ax.grid(True, alpha=0.25)

    fig.tight_layout()
    fig.savefig(out_path, dpi=dpi)
    print(f"wrote {out_path}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("run_dir", help="finished run directory containing plot.txt")
    ap.add_argument("--out", help="output image path (default: RUN_DIR/plot.png)")
    ap.add_argument("--dpi", type=int, default=130)
    args = ap.parse_args()
    out = args.out or str(Path(args.run_dir) / "plot.png")
    render(args.run_dir, out, args.dpi)


if __name__ == "__main__":
    sys.exit(main())
