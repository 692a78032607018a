"""Command-line interface: ``tqft-quotients {rank,rep,surject,involve,selftest}``.

Exit codes: 0 success, 1 computational failure, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from jsonschema import ValidationError

from .cache import MatrixCache, canonical_json, matrix_document
from .config import ConfigError, RunConfig
from .cyclotomic import SplitPrimeSearchError, find_split_primes, split_prime
from .finite_groups import FqMatrix, group_order, reduce_matrix, sl_order, verify_surjectivity
from .involvement import FiniteGroupInput, InvalidGroupError, embed_into_psl, involvement_certificate
from .schemas import validate
from .spine import ladder_spine
from .skein import CONVENTION, DomainError, SkeinParams, verlinde_rank
from .tqft_rep import (
    RepMatrix,
    dehn_twist_matrix,
    det_check,
    generators,
    genus1_anomaly,
    genus1_matrices,
    hermitian_form,
    root_exponent,
    root_order,
    sl_normalize,
    verify_unitary,
)

log = logging.getLogger("tqft_quotients")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _config(args) -> RunConfig:
    overrides = {
        "p": args.p,
        "g": getattr(args, "g", None),
        "seed": getattr(args, "seed", None),
        "threshold": getattr(args, "threshold", None),
        "min_q": getattr(args, "min_q", None),
        "max_q": getattr(args, "max_q", None),
        "cache_dir": getattr(args, "cache_dir", None),
        "output_format": getattr(args, "format", None),
        "workers": getattr(args, "workers", None),
        "precision_ceiling": getattr(args, "precision_ceiling", None),
    }
    if getattr(args, "config", None):
        return RunConfig.from_file(args.config, **overrides)
    return RunConfig(**{k: v for k, v in overrides.items() if v is not None})


# -- rank ----------------------------------------------------------------------


def cmd_rank(args) -> int:
    cfg = _config(args)
    print(verlinde_rank(cfg.g, SkeinParams(cfg.p)))
    return EXIT_OK


# -- rep -----------------------------------------------------------------------


def generator_names(g: int) -> list[str]:
    if g == 1:
        return ["S", "T", "a1", "b1"]
    return ladder_spine(g).curve_names()


def build_generator(g: int, params: SkeinParams, name: str) -> RepMatrix:
    if g == 1 and name in ("S", "T"):
        return genus1_matrices(params)[name]
    M = dehn_twist_matrix(name, g, params)
    M.label = name
    return M


def cmd_rep(args) -> int:
    cfg = _config(args)
    params = SkeinParams(cfg.p)
    if args.generator not in generator_names(cfg.g):
        raise UsageError(f"unknown generator {args.generator!r}; choose from {generator_names(cfg.g)}")
    cache = MatrixCache(cfg.cache_dir)
    M, hit = cache.get_or_compute(cfg.g, cfg.p, args.generator, lambda: build_generator(cfg.g, params, args.generator))
    doc = matrix_document(M)
    validate(doc, "rep_matrix")
    H = hermitian_form(cfg.g, params, ceiling=cfg.precision_ceiling)
    d = det_check(M)
    report = {
        "schema_version": 1,
        "g": cfg.g,
        "p": cfg.p,
        "generator": args.generator,
        "N": M.N,
        "sha256": doc["sha256"],
        "unitary": verify_unitary(M, H),
        "determinant": d.to_json(),
        "determinant_exponent": root_exponent(d),
        "max_denominator": str(M.max_denominator()),
        "denominators_p_power": M.denominators_are_p_powers(),
        "cache_hit": hit,
        "experimental": M.experimental,
        "convention": CONVENTION,
        "matrix_file": args.matrix_out,
    }
    validate(report, "rep_report")
    if args.matrix_out:
        Path(args.matrix_out).write_text(canonical_json(doc) + "\n")
    _emit(_dump(report), args.out)
    return EXIT_OK if report["unitary"] else EXIT_FAIL


# -- surject -------------------------------------------------------------------


def _reduced_generators(g: int, p: int, q: int) -> list[FqMatrix]:
    params = SkeinParams(p)
    sp = split_prime(p, q)
    return [reduce_matrix(sl_normalize(M)[0], sp) for M in generators(g, params)]


def surjectivity_task(g: int, p: int, q: int, seed: int, threshold: int) -> dict:
    gens = _reduced_generators(g, p, q)
    N = gens[0].N
    mode = "exact" if q ** (N - 1) <= threshold else "evidence"
    cert = verify_surjectivity(gens, N, q, mode, p=p, g=g, seed=seed, threshold=threshold, convention=CONVENTION)
    return cert.to_json()


CSV_FIELDS = ["q", "mode", "N", "verdict", "order", "psl_image_order", "sl_order", "seed"]


def certificates_to_csv(certs: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for c in certs:
        w.writerow({k: c.get(k, "") for k in CSV_FIELDS})
    return buf.getvalue()


def run_surject(cfg: RunConfig, count: int) -> list[dict]:
    if count < 0:
        raise UsageError("count must be >= 0")
    if count == 0:
        return []
    primes = [sp.q for sp in find_split_primes(cfg.p, count, min_q=cfg.min_q, max_q=cfg.max_q)]
    jobs = [(cfg.g, cfg.p, q, cfg.seed, cfg.threshold) for q in primes]
    if cfg.workers == 1:
        certs = [surjectivity_task(*j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            certs = list(pool.map(surjectivity_task, *zip(*jobs)))
    certs.sort(key=lambda c: c["q"])
    for c in certs:
        validate(c, "surjectivity_certificate")
    return certs


def cmd_surject(args) -> int:
    cfg = _config(args)
    try:
        certs = run_surject(cfg, args.count)
    except SplitPrimeSearchError as exc:
        log.error("%s", exc)
        return EXIT_FAIL
    if cfg.output_format == "csv":
        _emit(certificates_to_csv(certs), args.out)
    else:
        _emit(_dump(certs), args.out)
    return EXIT_OK


# -- involve -------------------------------------------------------------------


def load_group(path: str) -> FiniteGroupInput:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read group file: {exc}") from None
    try:
        validate(doc, "group_input")
    except ValidationError as exc:
        raise InvalidGroupError([f"schema: {exc.message}"]) from None
    return FiniteGroupInput.from_json(doc)


def cmd_involve(args) -> int:
    cfg = _config(args)
    H = load_group(args.group)
    cert = involvement_certificate(H, cfg.g, cfg.p, q=args.q, seed=cfg.seed).to_json()
    validate(cert, "involvement_certificate")
    _emit(_dump(cert), args.out)
    return EXIT_OK if cert["injective"] else EXIT_FAIL


# -- selftest ------------------------------------------------------------------


def selftest() -> list[tuple[str, bool]]:
    """Fast sanity checks of every pipeline stage."""
    from . import exact_linalg as la

    out = []
    params = SkeinParams(7)
    out.append(("rank N_1(7) = 3", verlinde_rank(1, params) == 3))
    m = genus1_matrices(params)
    H = hermitian_form(1, params)
    out.append(("S, T unitary", verify_unitary(m["S"], H) and verify_unitary(m["T"], H)))
    out.append(("anomaly is a root of unity", root_order(genus1_anomaly(params)) is not None))
    out.append(("S^2 = 1", la.scalar_value(la.mat_mul(m["S"].entries, m["S"].entries)) == 1))
    q = 3
    std = [FqMatrix.from_rows(q, [[1, 1], [0, 1]]), FqMatrix.from_rows(q, [[0, q - 1], [1, 0]])]
    out.append(("|SL(2,3)| by Schreier-Sims", group_order(std) == sl_order(2, 3) == 24))
    z2 = FiniteGroupInput("Z2", table=[[0, 1], [1, 0]])
    out.append(("Z/2 embeds in PSL(3,3)", embed_into_psl(z2, 3).injective))
    return out


def cmd_selftest(args) -> int:
    results = selftest()
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return EXIT_OK if all(ok for _, ok in results) else EXIT_FAIL


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tqft-quotients", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, genus=True):
        sp.add_argument("--p", type=int, default=None, help="prime p = 3 mod 4 (default 7)")
        if genus:
            sp.add_argument("--g", type=int, default=None, help="genus (default 1)")
        sp.add_argument("--config", help="JSON file with RunConfig fields")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", help="write output here instead of stdout")

    sp = sub.add_parser("rank", help="print the dimension N_g(p)")
    common(sp)
    sp.set_defaults(func=cmd_rank)

    sp = sub.add_parser("rep", help="compute one generator matrix and check it")
    common(sp)
    sp.add_argument("generator", help="S, T, a1, b1 in genus one; Lickorish curve names otherwise")
    sp.add_argument("--matrix-out", help="write the matrix document here")
    sp.add_argument("--cache-dir", default=None)
    sp.add_argument("--precision-ceiling", type=int, default=None)
    sp.set_defaults(func=cmd_rep)

    sp = sub.add_parser("surject", help="surjectivity certificates at split primes")
    common(sp)
    sp.add_argument("count", type=int, help="number of split primes q = 1 mod p")
    sp.add_argument("--min-q", type=int, default=None)
    sp.add_argument("--max-q", type=int, default=None)
    sp.add_argument("--threshold", type=int, default=None, help="exact mode when q^(N-1) is at most this")
    sp.add_argument("--format", choices=["json", "csv"], default=None)
    sp.add_argument("--workers", type=int, default=None)
    sp.set_defaults(func=cmd_surject)

    sp = sub.add_parser("involve", help="embed a finite group into PSL(N, q)")
    common(sp)
    sp.add_argument("group", help="JSON file with a 'table' or 'permutations'")
    sp.add_argument("--q", type=int, default=None, help="odd prime (default: least prime = 1 mod p)")
    sp.set_defaults(func=cmd_involve)

    sp = sub.add_parser("selftest", help="run quick internal checks")
    sp.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InvalidGroupError as exc:
        sys.stderr.write(_dump({"error": "invalid group", "report": exc.report}))
        return EXIT_USAGE
    except (ConfigError, UsageError, DomainError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except Exception as exc:  # computational failure
        log.exception("computation failed: %s", exc)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
