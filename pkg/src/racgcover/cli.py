"""Command line interface: build, verify, homology, racg, export."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .cache import HomologyCache, cached_homology, format_group
from .complex import ComplexError
from .instances import BundleError, build_instance, labelled_complex, verify_bundle
from .io import FormatError, dump_bundle, export_boundary_matrices, load_complex, read_bundle
from .racg import (Character, CoxeterPresentation, UnknownGeneratorError, apply_character, is_even,
                   kernel_index, length, normal_form)
from .smallcover import estimate_cells

log = logging.getLogger("racgcover")

DEFAULT_MAX_CELLS = 10 ** 6


@dataclass
class CommandConfig:
    command: str
    instance: str | None = None
    n: int = 3
    k: int = 2
    bundle: str | None = None
    path: str | None = None
    out: str | None = None
    cache: str | None = None
    seed: int = 0
    max_cells: int = DEFAULT_MAX_CELLS
    json: bool = False
    verbose: int = 0

    def validate(self):
        if self.command in ("build", "verify", "export") and self.instance is not None:
            if self.n < 2:
                raise ValueError("--n must be at least 2")
            if self.k < 2:
                raise ValueError("--k must be at least 2")
        if self.seed < 0 or self.seed >= 1 << 64:
            raise ValueError("--seed must be an unsigned 64-bit integer")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="racgcover", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, instance=True):
        if instance:
            sp.add_argument("--instance", choices=["twisted", "moore", "file"])
            sp.add_argument("--n", type=int, default=3)
            sp.add_argument("--k", type=int, default=2)
            sp.add_argument("--bundle", help="bundle file (with --instance file or alone)")
        sp.add_argument("--out")
        sp.add_argument("--cache", default=os.environ.get("RACGCOVER_CACHE"))
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--max-cells", type=int,
                        default=int(os.environ.get("RACGCOVER_MAX_CELLS", DEFAULT_MAX_CELLS)))
        sp.add_argument("--json", action="store_true")
        sp.add_argument("-v", "--verbose", action="count", default=0)

    common(sub.add_parser("build", help="build an instance bundle"))
    common(sub.add_parser("verify", help="verify a bundle; exit status 1 if a check fails"))
    h = sub.add_parser("homology", help="integral homology of a complex file")
    h.add_argument("path")
    common(h, instance=False)
    common(sub.add_parser("racg", help="normal forms and characters for words read from stdin"), instance=False)
    e = sub.add_parser("export", help="boundary matrices in coordinate format")
    e.add_argument("path", nargs="?", help="complex file")
    common(e)
    return p


def parse_args(argv=None) -> CommandConfig:
    ns = _parser().parse_args(argv)
    cfg = CommandConfig(command=ns.command, out=ns.out, cache=ns.cache, seed=ns.seed,
                        max_cells=ns.max_cells, json=ns.json, verbose=ns.verbose)
    for attr in ("instance", "n", "k", "bundle", "path"):
        if hasattr(ns, attr):
            setattr(cfg, attr, getattr(ns, attr))
    return cfg


def _load_bundle(cfg: CommandConfig):
    if cfg.bundle is not None and cfg.instance in (None, "file"):
        return read_bundle(cfg.bundle)
    if cfg.instance in ("twisted", "moore"):
        return build_instance(cfg.instance, cfg.n, cfg.k)
    raise ValueError("give --instance twisted|moore or --bundle PATH")


def _write(cfg: CommandConfig, text: str, out=None):
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        (out or sys.stdout).write(text)


def _cmd_build(cfg, out):
    b = _load_bundle(cfg)
    _write(cfg, dump_bundle(b), out)
    if cfg.out:
        print(f"wrote bundle n={b.n} k={b.k} f={b.L.f_vector} to {cfg.out}", file=out)
    return 0


def _cmd_verify(cfg, out):
    b = _load_bundle(cfg)
    K, _ = labelled_complex(b.L)
    est = estimate_cells(K, b.n + 1)
    if est > cfg.max_cells:
        print(f"refusing: the small cover would have about {est} top cells (cap {cfg.max_cells})",
              file=sys.stderr)
        return 2
    rep = verify_bundle(b, seed=cfg.seed, max_cells=cfg.max_cells)
    if cfg.out:
        Path(cfg.out).write_text(rep.to_json() + "\n")
    if cfg.json:
        out.write(rep.to_json() + "\n")
    else:
        out.write(rep.summary() + "\n")
    return 0 if rep.passed else 1


def _cmd_homology(cfg, out):
    X = load_complex(Path(cfg.path).read_text())
    cache = HomologyCache(cfg.cache) if cfg.cache else None
    recs = cached_homology(X, cache)
    if cfg.json:
        _write(cfg, json.dumps(recs, sort_keys=True) + "\n", out)
    else:
        _write(cfg, ", ".join(f"H{r['degree']} = {format_group(r)}" for r in recs) + "\n", out)
    return 0


def run_racg_script(text: str) -> list[str]:
    """Evaluate a racg script.

    Lines: ``generators a b ...``, ``commute a b``, ``character RANK a=BITS ...``
    and ``word a b ...``.  Each word line yields one output line.
    """
    gens, pairs, W, chi = None, [], None, None
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        try:
            if key == "generators":
                gens, pairs, W, chi = rest, [], None, None
            elif key == "commute":
                if len(rest) != 2:
                    raise ValueError("commute takes two generators")
                pairs.append(tuple(rest))
                W = None
            elif key == "character":
                rank = int(rest[0])
                vals = {}
                for tok in rest[1:]:
                    g, _, v = tok.partition("=")
                    vals[g] = int(v, 2)
                chi = Character(rank, vals)
            elif key == "word":
                if gens is None:
                    raise ValueError("no generators declared")
                if W is None:
                    W = CoxeterPresentation(gens, pairs)
                w = W.check_word(rest)
                nf = normal_form(W, w)
                parts = [f"nf = {W.format(nf) or '1'}", f"length = {length(W, w)}",
                         f"even = {str(is_even(W, w)).lower()}"]
                if chi is not None:
                    parts.append(f"character = {apply_character(chi, w):0{chi.rank}b}")
                    parts.append(f"kernel_index = {kernel_index(chi)}")
                out.append("; ".join(parts))
            else:
                raise ValueError(f"unknown directive {key!r}")
        except (ValueError, KeyError, IndexError) as exc:
            msg = exc.args[0] if isinstance(exc, KeyError) else exc
            raise FormatError(f"{msg}", no) from None
    return out


def _cmd_racg(cfg, out, stdin):
    lines = run_racg_script(stdin.read())
    _write(cfg, "".join(line + "\n" for line in lines), out)
    return 0


def _cmd_export(cfg, out):
    if cfg.path is not None:
        X = load_complex(Path(cfg.path).read_text())
    else:
        X = _load_bundle(cfg).L
    mats = export_boundary_matrices(X)
    if cfg.out:
        d = Path(cfg.out)
        d.mkdir(parents=True, exist_ok=True)
        for deg, text in mats.items():
            (d / f"boundary_{deg}.mtx").write_text(text)
        print(f"wrote {len(mats)} matrices to {d}", file=out)
    else:
        for deg, text in mats.items():
            out.write(f"% boundary {deg}\n{text}")
    return 0


def run(cfg: CommandConfig, out=None, stdin=None) -> int:
    out = out or sys.stdout
    stdin = stdin or sys.stdin
    logging.basicConfig(level=logging.WARNING - 10 * min(cfg.verbose, 2))
    try:
        cfg.validate()
        if cfg.command == "build":
            return _cmd_build(cfg, out)
        if cfg.command == "verify":
            return _cmd_verify(cfg, out)
        if cfg.command == "homology":
            return _cmd_homology(cfg, out)
        if cfg.command == "racg":
            return _cmd_racg(cfg, out, stdin)
        if cfg.command == "export":
            return _cmd_export(cfg, out)
        raise ValueError(f"unknown command {cfg.command}")
    except (FormatError, BundleError, ComplexError, UnknownGeneratorError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
