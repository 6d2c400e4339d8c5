"""Command-line front end: ``cubicmoments <subcommand> [flags]``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from datetime import datetime, timezone
from pathlib import Path

from . import cache, constants, gauss, moments, plotting
from .config import RunConfig, dump_config, load_config, parse_config
from .fields import FieldCtx
from .lseries import family_l_polynomials, root_number
from .verify import SUITES, run_suites

SCHEMA = "cubicmoments.report/1"

PROVENANCE = {
    "first": "twisted first moment main term with h = 1",
    "twisted-first": "twisted first moment main term, h = C S^2 E^3",
    "mollified-first": "mollified first moment with kappa = 1 against A q^{g+2}",
    "second": "second moment sum |L(1/2,chi)|^2",
    "mollified-second": "mollified moment sum |L|^k |M|^{k kappa}",
    "census": "Cauchy-Schwarz lower bound for the non-vanishing count; tail counts N(V)",
    "constants": "explicit constants: eta, S_k, c_3 Euler product, first-moment floors",
    "gauss": "degree totals of cubic Gauss sums against their stated main term",
    "section7": "explicit optimization of the moment bound parameters (a, b, c, d, theta_J)",
}

KINDS = ("first", "twisted-first", "mollified-first", "second", "mollified-second", "table")


def _jsonable(x):
    return moments._jsonable(x)


def _stamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(_jsonable(doc), indent=2, sort_keys=True, allow_nan=False, default=str) + "\n"
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _tsv(rows: list[dict], out: str | None) -> None:
    if not rows:
        return
    keys = list(rows[0])
    lines = ["\t".join(keys)]
    for r in rows:
        lines.append("\t".join(_fmt(r[k]) for k in keys))
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, complex):
        return f"{v.real:.12g}{v.imag:+.12g}j"
    return str(v)


def _figure_path(out: str | None, suffix: str) -> Path | None:
    if not out:
        return None
    p = Path(out)
    return p.with_name(p.stem + suffix + ".png")


def _doc(command: str, cfg: RunConfig, results, provenance) -> dict:
    return {"schema": SCHEMA, "command": command, "config": dump_config(cfg).splitlines(),
            "timestamp": _stamp(), "provenance": provenance, "results": results}


def _load(cfg: RunConfig, g: int, with_l: bool = True):
    data, status = cache.load(cfg.q, g, cfg.cache_dir, with_l=with_l)
    logging.getLogger(__name__).info("q=%d g=%d: %d characters (%s)", cfg.q, g, data.size, status)
    return data, status


# ---- subcommands ---------------------------------------------------------------------

def cmd_family(cfg: RunConfig, args) -> int:
    rows = []
    for g in cfg.g:
        data, status = _load(cfg, g, with_l=False)
        rows.append({"q": cfg.q, "g": g, "count": data.size,
                     "normalized": data.size / data.scale,
                     "cache": str(cache.cache_path(cfg.q, g, cfg.cache_dir)), "status": status})
    _tsv(rows, None)
    return 0


def cmd_lvalues(cfg: RunConfig, args) -> int:
    summary = []
    for g in cfg.g:
        data, status = _load(cfg, g)
        out = None
        if cfg.out:
            out = str(Path(cfg.out).with_name(f"{Path(cfg.out).stem}_g{g}{Path(cfg.out).suffix or '.tsv'}"))
            polys = family_l_polynomials(data.fam, data.coeffs)
            rows = []
            for i, (F, L) in enumerate(zip(data.fam.moduli, polys)):
                w = root_number(L).value
                rows.append({"index": i, "modulus": " ".join(map(str, F)),
                             "L_re": float(data.L[i].real), "L_im": float(data.L[i].imag),
                             "abs": float(abs(data.L[i])), "zero": bool(data.zero[i]),
                             "omega_re": w.real, "omega_im": w.imag,
                             "coeffs": " ".join(f"{a},{b}" for a, b in data.coeffs[i].tolist())})
            _tsv(rows, out)
            plotting.central_values(data.L, _figure_path(out, ""), f"q={cfg.q}, g={g}")
        summary.append({"q": cfg.q, "g": g, "count": data.size, "exact_zeros": int(data.zero.sum()),
                        "status": status, "table": out or "-"})
    _tsv(summary, None)
    return 0


def cmd_verify(cfg: RunConfig, args) -> int:
    only = args.suite or None
    results = {}
    failed = 0
    print("g\tsuite\tstatus\tchecked\tfailures\tmax_error")
    for g in cfg.g:
        data, _ = _load(cfg, g)
        res = run_suites(data, seed=cfg.seed, only=only)
        results[str(g)] = [r.as_dict() for r in res]
        for r in res:
            print(f"{g}\t{r.row()}")
            failed += not r.ok
    n = sum(len(v) for v in results.values())
    print(f"# {n - failed}/{n} suites passed")
    if cfg.out:
        _emit(_doc("verify", cfg, results, {s: r["anchor"] for v in results.values() for r in v
                                            for s in [r["name"]]}), cfg.out)
    return 0 if failed == 0 else 1


def _parse_h(text: str | None) -> tuple[int, ...]:
    if not text:
        return (1,)
    return tuple(int(x) for x in text.replace(",", " ").split())


def moment_table(cfg: RunConfig) -> list[dict]:
    rows = []
    for g in cfg.g:
        data, _ = _load(cfg, g)
        fm = moments.first_moment(data)
        sm = moments.second_moment(data, 1)
        sched = cfg.schedule(g)
        mf = moments.mollified_first_moment(data, sched)
        rows.append({"q": cfg.q, "g": g, "count": data.size, "first": fm.value.real,
                     "first_prediction": fm.prediction, "first_ratio": fm.ratio,
                     "second_normalized": sm.normalized, "mollified_first": mf.value.real,
                     "mollified_ratio": mf.ratio, "A_mollified": mf.meta["A"]})
    return rows


def cmd_moments(cfg: RunConfig, args) -> int:
    kind = cfg.kind
    if kind == "table":
        rows = moment_table(cfg)
        if cfg.format == "tsv":
            _tsv(rows, cfg.out)
        else:
            _emit(_doc("moments", cfg, rows, {k: PROVENANCE[k] for k in ("first", "second", "mollified-first")}),
                  cfg.out)
        fig = _figure_path(cfg.out, "")
        if fig:
            plotting.moment_trend(rows, fig)
        return 0
    reports = []
    for g in cfg.g:
        data, _ = _load(cfg, g)
        sched = cfg.schedule(g)
        if kind == "first":
            rep = moments.first_moment(data)
        elif kind == "twisted-first":
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                rep = moments.twisted_first_moment(data, _parse_h(args.h))
            rep.meta["warnings"] = [str(w.message) for w in caught]
        elif kind == "mollified-first":
            rep = moments.mollified_first_moment(data, sched)
        elif kind == "second":
            rep = moments.second_moment(data, cfg.k)
        elif kind == "mollified-second":
            rep = moments.mollified_second_moment(data, cfg.k, cfg.kappa, sched)
        else:
            raise ValueError(f"unknown kind {kind!r}")
        reports.append(rep.as_dict())
    if cfg.format == "tsv":
        rows = []
        for r in reports:
            row = {k: v for k, v in r.items() if k not in ("exact", "meta", "value")}
            row["value_re"], row["value_im"] = r["value"]
            rows.append(row)
        _tsv(rows, cfg.out)
    else:
        _emit(_doc("moments", cfg, reports, {kind: PROVENANCE[kind]}), cfg.out)
    return 0


def cmd_census(cfg: RunConfig, args) -> int:
    out = []
    for g in cfg.g:
        data, _ = _load(cfg, g)
        rep = moments.census(data, cfg.schedule(g))
        d = rep.as_dict()
        d["cs_bound_ok"] = rep.cs_bound <= rep.nonvanishing
        d["tail_monotone"] = rep.tail_monotone
        out.append(d)
        fig = _figure_path(cfg.out, f"_tail_g{g}")
        if fig:
            plotting.tail_counts(rep.tail, rep.size, fig, f"q={cfg.q}, g={g}")
    if cfg.format == "tsv":
        rows = []
        for r in out:
            row = {k: v for k, v in r.items() if k not in ("tail", "first")}
            row["first_re"], row["first_im"] = r["first"]
            rows.append(row)
        _tsv(rows, cfg.out)
    else:
        _emit(_doc("census", cfg, out, {"census": PROVENANCE["census"]}), cfg.out)
    return 0


def constants_report(q: int) -> dict:
    res = constants.optimize_section7()
    head = constants.headline_constants(q, res)
    c3 = constants.c3(q, 10)
    ank = constants.a_nk(q ** -2, q ** -1.5, q, 10)
    return {
        "q": q,
        "eta": constants.eta_const(),
        "S_2": constants.s_k_const(2),
        "S_2_series": constants.s_k_series(2, q),
        "c3": c3.value, "c3_tail": c3.tail,
        "A_nK": ank.value, "A_nK_tail": ank.tail,
        "zeta_q_3/2": constants.zeta_q(1.5, q), "zeta_q_2": constants.zeta_q(2, q), "zeta_q_3": constants.zeta_q(3, q),
        "first_moment_constant": constants.zeta_q(1.5, q) / constants.zeta_q(3, q) * ank.value,
        **head,
    }


def cmd_constants(cfg: RunConfig, args) -> int:
    _emit(_doc("constants", cfg, constants_report(cfg.q), {"constants": PROVENANCE["constants"]}), cfg.out)
    return 0


def cmd_section7(cfg: RunConfig, args) -> int:
    res = constants.optimize_section7(k=cfg.k if args.k_set else 2, kappa=cfg.kappa)
    _emit(_doc("section7", cfg, res.as_dict(), {"section7": PROVENANCE["section7"]}), cfg.out)
    return 0


def cmd_gauss(cfg: RunConfig, args) -> int:
    """Always TSV: one row per degree."""
    ctx = FieldCtx(cfg.q)
    f = _parse_h(args.f)
    if not f or f[-1] == 0:
        raise ValueError("f must be a nonzero polynomial")
    lines = [gauss.TSV_HEADER]
    for d in args.d:
        if d < 0 or d > 3:
            raise ValueError("degree totals are enumerated for d in 0..3")
        lines.append(gauss.gauss_sum_degree_total(ctx, f, d).tsv_row())
    text = "\n".join(lines) + "\n"
    if cfg.out:
        Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


COMMANDS = {
    "family": cmd_family, "lvalues": cmd_lvalues, "verify": cmd_verify, "moments": cmd_moments,
    "census": cmd_census, "constants": cmd_constants, "section7": cmd_section7,
    "gauss": cmd_gauss,
}


def _q_arg(text: str) -> int:
    try:
        q = int(text)
        FieldCtx(q)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid q {text!r}: {exc}") from None
    return q


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value run configuration file")
    common.add_argument("--q", type=_q_arg, help="odd prime power with q ≡ 2 mod 3 (default 5)")
    common.add_argument("--g", type=int, nargs="+", help="even genera")
    common.add_argument("--cache-dir", help=f"cache root (else ${cache.ENV_VAR} or ~/.cache/cubicmoments)")
    common.add_argument("--threads", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output path; figures are written next to it")
    common.add_argument("--format", choices=("json", "tsv"))
    common.add_argument("--schedule", help="schedule config file (same key = value format)")
    common.add_argument("--mode", choices=("desk", "paper", "empty"))
    common.add_argument("--J", type=int)
    common.add_argument("--theta-J", type=float, dest="theta_J")
    common.add_argument("--b", type=float)
    common.add_argument("--kappa", type=float)
    common.add_argument("--k", type=float)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="cubicmoments", description="Cubic characters over F_q[T], q ≡ 2 mod 3: "
                                "L-values, moments, mollifiers and explicit constants.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("family", parents=[common], help="enumerate the family and write the cache")
    sub.add_parser("lvalues", parents=[common], help="compute L-polynomials and central values")
    v = sub.add_parser("verify", parents=[common], help="run the identity suites")
    v.add_argument("--suite", action="append", choices=SUITES)
    m = sub.add_parser("moments", parents=[common], help="moment reports")
    m.add_argument("--kind", choices=KINDS)
    m.add_argument("--h", help="twist polynomial over F_q, coefficient codes lowest first")
    sub.add_parser("census", parents=[common], help="non-vanishing census")
    sub.add_parser("constants", parents=[common], help="explicit constants as JSON")
    sub.add_parser("section7", parents=[common], help="parameter optimization as JSON")
    gs = sub.add_parser("gauss", parents=[common], help="Gauss-sum degree totals as TSV")
    gs.add_argument("--f", default="1", help="polynomial over F_q^2, coefficient codes lowest first")
    gs.add_argument("--d", type=int, nargs="+", default=[0, 1, 2])
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    keys = ("q", "g", "cache_dir", "threads", "seed", "out", "format", "mode", "J", "theta_J", "b", "kappa", "k")
    overrides = {k: getattr(args, k) for k in keys}
    overrides["kind"] = getattr(args, "kind", None)
    args.k_set = args.k is not None
    try:
        base = {}
        for path in (args.schedule, args.config):
            if path:
                base.update(parse_config(Path(path).read_text()))
        base.update({k: v for k, v in overrides.items() if v is not None})
        cfg = load_config(None, base)
    except (ValueError, OSError) as exc:
        parser.error(str(exc))
    try:
        return COMMANDS[args.command](cfg, args)
    except ValueError as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
