"""Run every JSON job in scripts/configs through the command-line interface.

CSV results are written next to each config (``<name>.csv``) unless --out-dir
is given.

    python scripts/run_configs.py [--out-dir results]
"""

import argparse
import pathlib
import sys

from planarcasimir.cli import main as cli_main

HERE = pathlib.Path(__file__).resolve().parent


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--configs", type=pathlib.Path, default=HERE / "configs")
    ap.add_argument("--out-dir", type=pathlib.Path, default=None)
    args = ap.parse_args()

    status = 0
    for cfg in sorted(args.configs.glob("*.json")):
        out_dir = args.out_dir or cfg.parent
        out_dir.mkdir(parents=True, exist_ok=True)
        out = out_dir / (cfg.stem + ".csv")
        code = cli_main(["run", str(cfg), "--out", str(out)])
        print(f"{cfg.name}: exit {code} -> {out}")
        status = max(status, code)
    return status


if __name__ == "__main__":
    sys.exit(main())
