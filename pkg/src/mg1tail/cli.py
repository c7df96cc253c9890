# coding=utf-8
#
# Copyright (C) 2026 by the mg1tail developers
#
# In case of reuse of this source code please do not remove this copyright.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
# GNU General Public License for more details.
#
# For more information on the GNU General Public License see:
# <http://www.gnu.org/licenses/>.


import argparse
import contextlib
import csv
import enum
import math
import sys

import numpy as np

from . import constants
from .approx import Approximator
from .cramer_poly import LambdaPoly
from .Debug import get_logger, log_levels, setLogLevel
from .dist import check_assumption
from .errors import ConfigError, MG1Error
from .queue_model import build_queue_model
from .run_config import PRESETS, RunConfig
from .rw import RwApprox
from .sim import ak_estimate
from .thresholds import ThresholdSet
from .Version import PACKAGE, VERSION

logger = get_logger(__file__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_NUMERIC = 4

LOG10 = math.log(10.0)
ASSUMPTION_GRID = np.geomspace(1.0, 1e6, 200)
SERIES_ORDER = 3


def fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, (float, np.floating)):
        return format(float(value), constants.FLOAT_FORMAT)
    return value


def create_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", nargs="+", metavar="SPEC", help="model JSON file, or inline: FAMILY key=value ...")
    common.add_argument("--config", help="run configuration JSON file; flags override its values")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--threads", type=int, help=f"worker threads (default: ${constants.THREADS_ENV} or all cores)")
    common.add_argument("--log-level", choices=list(log_levels), help="stderr log level")
    common.add_argument("--unit-mean", action="store_true", help="evaluate in units where the integrated-tail mean is 1")

    parser = argparse.ArgumentParser(prog=PACKAGE, description="Waiting-time tail approximations for M/G/1 queues with subexponential service.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", parents=[common], help="queue parameters, cumulants and Cramér coefficients")
    p.add_argument("--poly", action="store_true", help="also print the Lambda_rho coefficients and the u(rho) series")
    p.add_argument("--csv", action="store_true", help="write CSV instead of aligned text")

    p = sub.add_parser("thresholds", parents=[common], help="right inverses, K_r, M, N and rho* over an x grid")
    p.add_argument("--x", help="x grid: a,b,c | lo:hi:num | log:lo:hi:num")

    p = sub.add_parser("approx", parents=[common], help="Z_kappa, A_kappa and the heavy-tail/heavy-traffic approximations")
    p.add_argument("--rho", help="rho grid")
    p.add_argument("--x", help="x grid")
    p.add_argument("--simplified-heavy-tail", action="store_true", help="use F̄(x) in place of F̄(x - n mu) in the heavy-tail sum")

    p = sub.add_parser("rwtail", parents=[common], help="uniform approximation of P(S_n > x)")
    p.add_argument("--n", help="n grid")
    p.add_argument("--x", help="x grid")
    p.add_argument("--eps", type=float, help=f"indicator band epsilon (default {constants.EPS})")

    for name, text in (
        ("simulate", "conditional Monte Carlo estimate of P(W > x)"),
        ("compare", "approximations joined with simulation on x"),
        ("figure", "log10 comparison table for plotting"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--rho", help="single rho")
        p.add_argument("--x", help="x grid")
        p.add_argument("--reps", type=int, help=f"replications per point (default {constants.DEFAULT_REPS})")
        p.add_argument("--seed", type=int, help=f"RNG seed (default {constants.DEFAULT_SEED})")
        if name != "simulate":
            p.add_argument("--simplified-heavy-tail", action="store_true", help="use F̄(x) in the heavy-tail sum")
        if name == "figure":
            p.add_argument("--preset", choices=sorted(PRESETS), help="model, rho and x grid of a reference example")
    return parser


class Session:
    """One CLI run: the queue model, in mean-1 units if requested"""

    def __init__(self, cfg):
        self.cfg = cfg
        model = cfg.model
        self.scale = 1.0
        if cfg.unit_mean:
            self.scale = model.mean()
            model = model.unit_mean()
            logger.info("unit-mean scaling by 1/%g: %s", self.scale, model)
        self.qm = build_queue_model(model)
        self.failed = 0

    def local(self, x):
        return x / self.scale

    def single_rho(self):
        if len(self.cfg.rho) != 1:
            raise ConfigError(f"{self.cfg.command}: exactly one rho is required, got {self.cfg.rho}")
        return self.cfg.rho[0]

    def _estimate(self, rho, x):
        try:
            return ak_estimate(self.qm, rho, self.local(x), self.cfg.reps, self.cfg.seed, self.cfg.threads)
        except MG1Error as e:
            logger.error("simulation rho=%g x=%g: %s", rho, x, e)
            self.failed += 1
            return None

    def reports(self, rho_list):
        approximator = Approximator(self.qm, self.cfg.simplified_heavy_tail)
        reports = approximator.evaluate_grid(rho_list, [self.local(x) for x in self.cfg.x], self.cfg.threads)
        self.failed += sum(r.error is not None for r in reports)
        return reports

    # commands

    def params(self):
        qm = self.qm
        rows = [("family", qm.dist.kind)]
        rows += [(name, value) for name, value in qm.dist.params.items()]
        rows += [("mu", qm.mu), ("sigma2", qm.sigma2), ("r", qm.r), ("kappa", qm.kappa)]
        rows += [(f"gamma_{k}", g) for k, g in enumerate(qm.gamma, start=1)]
        rows += [(f"lambda_{j}", lam) for j, lam in enumerate(qm.lambdas, start=2)]
        report = check_assumption(qm.dist, ASSUMPTION_GRID)
        rows += [("a_r", report.a_r), ("min_tq", report.min_tq), ("min_q_over_log", report.min_q_over_log), ("assumption_ok", report.passed)]
        if self.cfg.poly:
            poly = LambdaPoly(qm)
            rows += [(f"c_{i}", c) for i, c in enumerate(poly.coeff, start=2)]
            rows += [(f"a_{j}", a) for j, a in enumerate(poly.a)]
            rows += [(f"b_{n}", b) for n, b in enumerate(poly.u_series_coeffs(SERIES_ORDER), start=1)]
        return ["name", "value"], rows

    def thresholds(self):
        self.cfg.require("x")
        ts = ThresholdSet(self.qm)
        rows = []
        for x in self.cfg.x:
            xl = self.local(x)
            try:
                rows.append((x, *ts.thresholds(xl), ts.omega1_inv(xl), ts.omega2_inv(xl), ts.b_inv(xl), ts.rho_star(xl), None))
            except MG1Error as e:
                logger.error("x=%g: %s", x, e)
                self.failed += 1
                rows.append((x, None, None, None, None, None, None, None, str(e)))
        if not self.failed:
            onset = ts.ordering_onset([self.local(x) for x in self.cfg.x])
            logger.info("K_r <= M <= N from x = %s on", None if onset is None else onset * self.scale)
        return ["x", "K_r", "M", "N", "omega1_inv", "omega2_inv", "b_inv", "rho_star", "error"], rows

    def approx(self):
        self.cfg.require("rho", "x")
        rows = []
        for r in self.reports(self.cfg.rho):
            rows.append((
                r.rho, r.x * self.scale, r.log_Z, r.log_A, r.log_heavy_tail, r.log_heavy_traffic,
                r.region, ";".join(r.terms.flags), r.regime, r.error,
            ))
        return ["rho", "x", "logZ", "logA", "log_ht", "log_htr", "region", "fallback_flags", "regime", "error"], rows

    def rwtail(self):
        self.cfg.require("n", "x")
        rw = RwApprox(self.qm, self.cfg.eps)
        rows = []
        for n in self.cfg.n:
            for x in self.cfg.x:
                try:
                    branch, value = rw.rw_tail_detail(self.local(x), n)
                    rows.append((n, x, branch, value, None))
                except MG1Error as e:
                    logger.error("n=%d x=%g: %s", n, x, e)
                    self.failed += 1
                    rows.append((n, x, None, None, str(e)))
        return ["n", "x", "branch", "log_value", "error"], rows

    def simulate(self):
        self.cfg.require("x")
        rho = self.single_rho()
        rows = []
        for x in self.cfg.x:
            est = self._estimate(rho, x)
            if est is None:
                rows.append((x, None, None, self.cfg.reps, self.cfg.seed))
            else:
                rows.append((x, est.estimate, est.std_error, est.reps, est.seed))
        return ["x", "est", "se", "reps", "seed"], rows

    def _joined(self):
        self.cfg.require("x")
        rho = self.single_rho()
        return [(r, self._estimate(rho, self.cfg.x[i])) for i, r in enumerate(self.reports([rho]))]

    def compare(self):
        rows = []
        for r, est in self._joined():
            value, se = (est.estimate, est.std_error) if est else (None, None)
            log_sim = None
            if value is not None:
                log_sim = math.log(value) if value > 0 else -math.inf
            rows.append((
                r.rho, r.x * self.scale, r.log_Z, r.log_A, r.log_heavy_tail, r.log_heavy_traffic,
                value, se, log_sim, r.transition, ";".join(r.terms.flags), r.error,
            ))
        return ["rho", "x", "logZ", "logA", "log_ht", "log_htr", "est", "se", "log_sim", "transition", "fallback_flags", "error"], rows

    def figure(self):
        rows = []
        for r, est in self._joined():
            log10_sim = None
            if est is not None:
                log10_sim = math.log10(est.estimate) if est.estimate > 0 else -math.inf
            rows.append((
                r.x * self.scale, log10_sim, r.log_Z / LOG10, r.log_A / LOG10,
                r.log_heavy_tail / LOG10, r.log_heavy_traffic / LOG10, r.transition, r.error,
            ))
        return ["x", "log10_sim", "log10_Z", "log10_A", "log10_ht", "log10_htr", "transition", "error"], rows


COMMANDS = {
    "params": Session.params,
    "thresholds": Session.thresholds,
    "approx": Session.approx,
    "rwtail": Session.rwtail,
    "simulate": Session.simulate,
    "compare": Session.compare,
    "figure": Session.figure,
}


def write_csv(header, rows, out=None):
    with contextlib.ExitStack() as stack:
        handle = stack.enter_context(open(out, "w", newline="", encoding="utf-8")) if out else sys.stdout
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def write_text(header, rows, out=None):
    """name/value rows as two aligned columns"""
    width = max([len(str(header[0]))] + [len(str(row[0])) for row in rows])
    with contextlib.ExitStack() as stack:
        handle = stack.enter_context(open(out, "w", encoding="utf-8")) if out else sys.stdout
        for row in rows:
            handle.write(f"{row[0]:<{width}}  {fmt(row[1])}\n")


def run(argv=None):
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if args.log_level:
        setLogLevel(args.log_level)
    logger.info("+++ Version: %s starts...", VERSION)

    flags = {k: v for k, v in vars(args).items() if k not in ("command", "log_level")}
    try:
        cfg = RunConfig.from_sources(args.command, flags)
        session = Session(cfg)
        header, rows = COMMANDS[args.command](session)
        emit = write_text if args.command == "params" and not cfg.csv else write_csv
        emit(header, rows, cfg.out)
    except ConfigError as e:
        logger.error("%s", e)
        return EXIT_CONFIG
    except MG1Error as e:
        logger.error("%s", e)
        return EXIT_NUMERIC
    except OSError as e:
        logger.error("cannot write output: %s", e)
        return EXIT_CONFIG
    except Exception as e:
        logger.error("unexpected %s: %s", type(e).__name__, e)
        return EXIT_NUMERIC
    if session.failed:
        logger.warning("%d rows failed", session.failed)
        return EXIT_NUMERIC
    return EXIT_OK


def main():
    sys.exit(run())
