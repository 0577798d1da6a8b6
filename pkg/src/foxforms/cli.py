"""``foxforms`` command line: run one verification suite, emit a JSON report.

Exit status: 0 when every check passes, 2 on a verification failure, 1 on a
usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from foxforms.suites import GROUPS, SUITES, SuiteConfig

log = logging.getLogger("foxforms")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="foxforms", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="suite", required=True, parser_class=_Parser)
    for name in SUITES:
        p = sub.add_parser(name)
        p.add_argument("--genus", type=int, default=2)
        p.add_argument("--group", choices=sorted(GROUPS), default="su2")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=100)
        p.add_argument("--h", type=float, default=1e-5)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--out", default=None, help="report path; stdout when omitted")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for trials")
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = SuiteConfig(**vars(args))
        if cfg.suite == "verify-cycle" and cfg.genus < 2:
            raise UsageError("verify-cycle needs genus >= 2 (Dehn's algorithm)")
    except (UsageError, ValueError) as exc:
        print(f"foxforms: error: {exc}", file=sys.stderr)
        return 1

    report = SUITES[cfg.suite](cfg)
    text = json.dumps(report.to_dict(), indent=2, sort_keys=True, default=float)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    status = "pass" if report.passed else "FAIL"
    log.info("%s: %s", cfg.suite, status)
    return 0 if report.passed else 2


def main() -> None:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
