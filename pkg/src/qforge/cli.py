"""Command line entry point: qforge <dims|crystal|tensor|cb|verify> --config PATH."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .cache import Cache, write_atomic
from .config import ConfigError, TASKS, load_config, require_dominant
from .rootdata import DatumError, degrees_up_to
from . import modules

EXIT_OK, EXIT_MATH, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("qforge")


def _fmt_deg(nu):
    return ",".join(map(str, nu))


def build_parser():
    p = argparse.ArgumentParser(prog="qforge", description="Exact computations with quantum group modules.")
    p.add_argument("task", choices=TASKS)
    p.add_argument("--config", required=True, help="job configuration file")
    p.add_argument("--depth", type=int, help="override [task] depth")
    p.add_argument("--out", help="output directory (default: [output] dir or ./qforge-out)")
    p.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    p.add_argument("--inject-fault", action="append", default=[], help=argparse.SUPPRESS)
    return p


class Runner:
    def __init__(self, job, out_dir, cache):
        self.job = job
        self.out = Path(out_dir)
        self.cache = cache
        self.datum = job.datum
        self.n = self.datum.rank
        self.written = []

    def store_for(self, datum):
        return self.cache.store(datum) if self.cache is not None else None

    def write(self, name, text):
        path = self.out / name
        write_atomic(path, text)
        self.written.append(str(path))

    def _umin_mods(self):
        from .uqminus import UMinus
        from .modules import Modules
        U = UMinus(self.datum, store=self.store_for(self.datum))
        return U, Modules(self.datum, umin=U)

    # tasks

    def dims(self):
        require_dominant(self.job)
        U, mods = self._umin_mods()
        ws = self.job.weights
        head = ["degree", "height", "U-"] + [f"V({_fmt_deg(w)})" for w in ws]
        lines = ["\t".join(head)]
        for nu in degrees_up_to(self.n, self.job.depth):
            row = [_fmt_deg(nu), str(sum(nu)), str(U.dim(nu))]
            row += [str(mods.v_lambda_dims_via_form(w, nu)) for w in ws]
            lines.append("\t".join(row))
        self.write("dims.tsv", "\n".join(lines) + "\n")
        return EXIT_OK

    def crystal(self):
        from .crystals import Crystals, CrystalDescriptor, CrystalFactor
        ws = self.job.weights or [(0,) * self.n]
        kinds = self.job.factors or ["inf"] * len(ws)
        factors = tuple(CrystalFactor(k, w) for k, w in zip(kinds, ws))
        cr = Crystals(self.datum)
        gen = cr.generate(CrystalDescriptor(factors, self.job.depth))
        self.write("crystal.dot", gen.export_dot())
        self.write("crystal.json", gen.export_json())
        bad = cr.check_axioms(gen)
        if bad:
            log.error("crystal axioms fail: %s", bad[0])
            return EXIT_MATH
        return EXIT_OK

    def tensor(self):
        from .framed import FramedAlgebra, FramedDescriptor
        if not self.job.blocks:
            raise ConfigError("[task] blocks: the tensor task needs a nonempty block sequence")
        desc = FramedDescriptor(tuple(self.job.blocks))
        F = FramedAlgebra(self.datum, store=self.store_for(self.datum),
                          framed_store=self.store_for(self.datum.frame()))
        rows = F.compare_graded_dims(desc, self.job.depth)
        lines = ["descriptor\tnu\tlhs_dim\trhs_dim\tstatus"]
        status = EXIT_OK
        for kind, label, nu, lhs, rhs, st in rows:
            lines.append(f"{kind}[{label}]\t{_fmt_deg(nu)}\t{lhs}\t{rhs}\t{st}")
            if st in ("MISMATCH", "VIOLATION", "greater"):
                status = EXIT_MATH
        self.write("tensor.tsv", "\n".join(lines) + "\n")
        return status

    def cb(self):
        from .canonical import Canonical, verify_signed
        if len(self.job.weights) != 2:
            raise ConfigError("[task] weights: the cb task needs [lambda2, lambda1]")
        require_dominant(self.job)
        lam2, lam1 = self.job.weights
        _, mods = self._umin_mods()
        can = Canonical(mods)
        doc = {"lambda2": list(lam2), "lambda1": list(lam1), "spaces": []}
        status = EXIT_OK
        for nu in degrees_up_to(self.n, self.job.depth):
            sp = can.space(lam2, lam1, nu)
            elems = sp.canonical_basis()
            entries = []
            for c in elems:
                entry = c.to_json()
                checks = verify_signed(sp, c.coords)
                entry["signed"] = dict(zip(("integral", "invariant", "norm"), checks))
                if not all(checks):
                    status = EXIT_MATH
                entries.append(entry)
            doc["spaces"].append({"degree": list(nu), "dim": sp.dim, "elements": entries})
        self.write("cb.json", json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return status

    def verify(self):
        from .harness import Harness
        results = Harness(self.job, store_for=self.store_for).run()
        lines = ["check\tstatus\tdetail"] + [r.line() for r in results]
        self.write("verify.tsv", "\n".join(lines) + "\n")
        for r in results:
            print(r.line())
        return EXIT_MATH if any(r.status == "fail" for r in results) else EXIT_OK


def run(job, out_dir=None, cache=None):
    """Run job.task and write its artifacts; returns (exit status, written paths)."""
    if job.task is None:
        raise ConfigError("[task] kind is required when running a job directly")
    runner = Runner(job, out_dir or job.out_dir or "qforge-out", cache)
    return getattr(runner, job.task)(), runner.written


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="qforge: %(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    for fault in args.inject_fault:
        if fault not in modules.KNOWN_FAULTS:
            parser.error(f"unknown fault {fault!r}")
        modules.FAULTS.add(fault)
    try:
        job = load_config(args.config)
        if job.task is not None and job.task != args.task:
            raise ConfigError(f"[task] kind is {job.task!r} but the subcommand is {args.task!r}")
        if args.depth is not None:
            if args.depth < 0:
                raise ConfigError("--depth must be >= 0")
            job.depth = args.depth
        job.task = args.task
        cache = None if args.no_cache else Cache()
        status, written = run(job, args.out, cache)
    except (ConfigError, DatumError) as exc:
        print(f"qforge: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qforge: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"qforge: error: {exc}", file=sys.stderr)
        return EXIT_MATH
    finally:
        for fault in args.inject_fault:
            modules.FAULTS.discard(fault)
    for path in written:
        print(f"wrote {path}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
