"""Command line front end.

Usage::

    freelocus [flags] COMMAND [EXPR | key=value ...]

Bare words without ``=`` are joined into a single expression for ``f``.  Keys may be
repeated (``f=x1 f=x2`` for an intersection, ``fj=... fj=...`` for a
certificate).  Exit codes: 0 affirmative, 1 negative, 2 inconclusive,
3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import evaluation as ev
from . import hermitian as herm
from . import linearize as lin
from . import slack
from . import structure as st
from .freealg import NotHereditaryQuadratic, NotScalar, as_matrix_poly
from .linalg import NotHermitian, hermitian_signature
from .parser import ParseError, parse, to_text
from .scalars import DEFAULT_PRIME, format_scalar

SCHEMA = "freelocus/1"

YES, NO, MAYBE, BAD = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    n_max: int = 3
    trials: int = 20
    prime: int = DEFAULT_PRIME
    certified: bool = False
    fmt: str = "json"

    def to_json(self):
        return {"seed": self.seed, "max_size": self.n_max, "trials": self.trials, "prime": self.prime,
                "mode": "certified" if self.certified else "montecarlo"}


# ---------------------------------------------------------------------------
# argument helpers


class Args:
    """key=value pairs; values stay text until a command asks for them."""

    def __init__(self, pairs):
        self.raw = {}
        for key, val in pairs:
            self.raw.setdefault(key, []).append(val)

    def text(self, key, default=None):
        vals = self.raw.get(key)
        if not vals:
            if default is None:
                raise InputError(f"missing argument {key}=...")
            return default
        if len(vals) > 1:
            raise InputError(f"argument {key} given more than once")
        return vals[0]

    def has(self, key):
        return key in self.raw

    def expr(self, key):
        return parse(self.text(key))

    def exprs(self, key):
        if key not in self.raw:
            raise InputError(f"missing argument {key}=...")
        return [parse(v) for v in self.raw[key]]

    def int(self, key, default):
        try:
            return int(self.text(key, str(default)))
        except ValueError:
            raise InputError(f"{key} must be an integer") from None

    def constant(self, key):
        m = as_matrix_poly(self.expr(key))
        if m.degree() > 0:
            raise InputError(f"{key} must be a constant matrix")
        return m.constant_term()

    def pencil(self, key):
        f = as_matrix_poly(self.expr(key))
        if f.degree() > 1:
            raise InputError(f"{key} must be a linear pencil (degree at most 1)")
        if f.nrows != f.ncols:
            raise InputError(f"{key} must be square")
        return lin.LinearPencil.from_matrix_poly(f)

    def point(self, prefix="X"):
        """X1=[..] X2=[..] ... as a star-mode tuple."""
        mats = []
        j = 1
        while self.has(f"{prefix}{j}"):
            mats.append(self.constant(f"{prefix}{j}"))
            j += 1
        if not mats:
            raise InputError(f"missing point {prefix}1=...")
        try:
            return ev.MatrixTuple(tuple(mats))
        except ValueError as exc:
            raise InputError(str(exc)) from None


def split_args(items):
    """key=value items; bare words are joined into one expression for f."""
    pairs = []
    loose = []
    for item in items:
        if "=" in item:
            key, val = item.split("=", 1)
            pairs.append((key.strip(), val))
        else:
            loose.append(item)
    if loose:
        if any(k == "f" for k, _ in pairs):
            raise InputError(f"positional expression given together with f=: {' '.join(loose)!r}")
        pairs.insert(0, ("f", " ".join(loose)))
    return Args(pairs)


# ---------------------------------------------------------------------------
# commands; each returns (exit code, result dict)


def cmd_full(a, cfg):
    f = a.expr("f")
    v = ev.fullness_test(f, cfg.n_max, cfg.trials, cfg.seed, prime=cfg.prime)
    if isinstance(v, ev.Full):
        return YES, v.to_json()
    out = v.to_json()
    fm = as_matrix_poly(f)
    if fm.nrows != fm.ncols:
        out.update(verdict="NotFull", certificate="non-square matrices are never full")
        return NO, out
    try:
        lin.epic_linearization(f)
    except lin.NotFull as exc:
        out.update(verdict="NotFull", certificate="common kernel of the pencil coefficients", note=str(exc))
        return NO, out
    return MAYBE, out


def cmd_unit(a, cfg):
    f = a.expr("f")
    v = ev.unit_test(f, cfg.n_max, cfg.trials, cfg.seed)
    if isinstance(v, ev.NotUnit):
        return NO, v.to_json()
    out = v.to_json()
    try:
        res = lin.epic_linearization(f)
    except lin.NotFull:
        return MAYBE, out
    if res.pencil.d == 0:
        out.update(verdict="Unit", certificate="epic pencil of size 0", alpha=format_scalar(res.alpha))
        return YES, out
    return MAYBE, out


def cmd_atom(a, cfg):
    v = st.is_atom(a.expr("f"), cfg.n_max + 1, cfg.trials, cfg.seed)
    return {"yes": YES, "no": NO}.get(v.status, MAYBE), v.to_json()


def cmd_blocks(a, cfg):
    try:
        d = st.atomic_blocks(a.expr("f"), cfg.n_max + 1, cfg.trials, cfg.seed)
    except st.BudgetExhausted as exc:
        return MAYBE, {"verdict": "inconclusive", "reason": str(exc)}
    except lin.NotFull as exc:
        return NO, {"verdict": "NotFull", "reason": str(exc)}
    out = d.to_json()
    out["verdict"] = "decomposed"
    out["atoms"] = sum(m for _, m in d.blocks)
    if d.point is not None:
        out["point"] = d.point.to_json()
    return YES, out


def cmd_linearize(a, cfg):
    f = a.expr("f")
    try:
        raw = lin.linearize(f, seed=cfg.seed)
    except lin.NotFull as exc:
        return NO, {"verdict": "NotFull", "reason": str(exc)}
    try:
        res = lin.minimize(raw.pencil, raw.alpha)
    except lin.NotFull as exc:
        return NO, {"verdict": "NotFull", "reason": str(exc), "higman": raw.to_json()}
    lin.verify_linearization(f, res, seed=cfg.seed)
    return YES, {"verdict": "linearized", "higman_size": raw.pencil.d, "epic": res.to_json(),
                 "verified_sizes": [1, 2, 3]}


def cmd_equiv(a, cfg):
    L, M = a.pencil("L"), a.pencil("M")
    w = st.pencil_equiv(L, M, cfg.seed)
    if w is None:
        return NO, {"verdict": "not-equivalent"}
    return YES, {"verdict": "equivalent", "witness": w.to_json()}


def cmd_stable_assoc(a, cfg):
    w = st.stable_assoc(a.expr("f"), a.expr("g"), cfg.n_max + 1, cfg.trials, cfg.seed)
    if w is None:
        return NO, {"verdict": "not-associated"}
    if isinstance(w, st.Inconclusive):
        return MAYBE, w.to_json()
    return YES, {"verdict": "associated", "witness": w.to_json()}


def _containment_code(status):
    return {"Proved": YES, "Refuted": NO}.get(status, MAYBE)


def cmd_contain(a, cfg):
    fs, h = a.exprs("f"), a.expr("h")
    mode = "certified" if cfg.certified else "montecarlo"
    kw = dict(n_max=cfg.n_max, trials=cfg.trials, seed=cfg.seed, mode=mode)
    if len(fs) == 1:
        v = st.locus_contains(fs[0], h, **kw)
        return _containment_code(v.status), v.to_json()
    j, v = st.contain_intersection(fs, h, **kw)
    out = v.to_json()
    out["index"] = j
    return _containment_code(v.status), out


def cmd_contain_real_analytic(a, cfg):
    v = herm.real_containment_analytic(a.expr("f"), a.expr("h"), cfg.n_max, cfg.trials, cfg.seed)
    return _containment_code(v.status), v.to_json()


def cmd_contain_real_hermitian(a, cfg):
    f, h = a.expr("f"), a.expr("h")
    w = herm.unsignatured_search(f, cfg.n_max, max(cfg.trials, 400), cfg.seed)
    if not isinstance(w, herm.UnsignaturedWitness):
        return MAYBE, {"verdict": "inconclusive", "reason": "no unsignatured witness", "search": w.to_json()}
    v = herm.real_containment_hermitian(f, h, w, cfg.n_max, cfg.trials, cfg.seed)
    out = v.to_json()
    out["unsignatured"] = w.to_json()
    return _containment_code(v.status), out


def cmd_gleich(a, cfg):
    r = herm.gleichstellensatz_analytic(a.pencil("L"), a.pencil("M"), cfg.seed)
    if r is None:
        return NO, {"verdict": "not-equivalent"}
    w, tag = r
    return YES, {"verdict": "equivalent", "via": tag, "witness": w.to_json()}


def cmd_gleich_hermitian(a, cfg):
    r = herm.gleichstellensatz_hermitian(a.pencil("L"), a.pencil("M"), seed=cfg.seed)
    if r is None:
        return NO, {"verdict": "not-equivalent"}
    return YES, {"verdict": "equivalent", **r.to_json()}


def cmd_signature(a, cfg):
    if a.has("H"):
        H = a.constant("H")
    else:
        H = herm.star_evaluate(a.expr("f"), a.point())
    s = hermitian_signature(H)
    return YES, {"verdict": "signature", "signature": s.to_json(), "size": H.nrows}


def cmd_unsignatured(a, cfg):
    w = herm.unsignatured_search(a.expr("f"), cfg.n_max, max(cfg.trials, 400), cfg.seed)
    if isinstance(w, (herm.UnsignaturedWitness, herm.KnownByMonicPencil)):
        return YES, w.to_json()
    return MAYBE, w.to_json()


def cmd_slack_reduce(a, cfg):
    nf = slack.reduce(a.expr("h"), a.expr("f"))
    return YES, {"verdict": "normal-form", "normal_form": to_text(nf)}


def cmd_slack_member(a, cfg):
    m = slack.is_member(a.expr("h"), a.expr("f"))
    return (YES if m.member else NO), m.to_json()


def _certificate(a):
    if a.has("cert"):
        try:
            data = json.loads(a.text("cert"))
        except json.JSONDecodeError as exc:
            raise InputError(f"certificate is not valid JSON: {exc}") from None
        if not isinstance(data, dict) or not {"f", "h", "fj"} <= set(data):
            raise InputError('certificate must be {"f": ..., "fj": [...], "h": ...}')
        return parse(data["h"]), parse(data["f"]), [parse(s) for s in data["fj"]]
    fjs = a.exprs("fj") if a.has("fj") else []
    return a.expr("h"), a.expr("f"), fjs


def cmd_psatz_verify(a, cfg):
    h, f, fjs = _certificate(a)
    try:
        r = slack.verify_psatz(h, f, slack.PsatzCertificate(fjs), seed=cfg.seed)
    except slack.NoPositivityWitness as exc:
        return MAYBE, {"verdict": "inconclusive", "reason": str(exc)}
    return (YES if r.accepted else NO), r.to_json()


def cmd_eval(a, cfg):
    f = a.expr("f")
    X = a.point()
    V = ev.evaluate(f, X)
    out = {"verdict": "value", "value": V.to_json(), "point": X.to_json()}
    if V.nrows == V.ncols:
        out["det"] = format_scalar(V.det())
    return YES, out


def cmd_probe_real(a, cfg):
    f, h = a.expr("f"), a.expr("h")
    fm = as_matrix_poly(f)
    n = a.int("n", 1)
    r = herm.real_line_probe(f, h, n, cfg.trials, cfg.seed, require_hermitian=fm.is_hermitian())
    if isinstance(r, herm.RealRefutation):
        return NO, r.to_json()
    return MAYBE, r.to_json()


COMMANDS = {
    "full": cmd_full,
    "unit": cmd_unit,
    "atom": cmd_atom,
    "blocks": cmd_blocks,
    "linearize": cmd_linearize,
    "equiv": cmd_equiv,
    "stable-assoc": cmd_stable_assoc,
    "contain": cmd_contain,
    "contain-real-analytic": cmd_contain_real_analytic,
    "contain-real-hermitian": cmd_contain_real_hermitian,
    "gleich": cmd_gleich,
    "gleich-hermitian": cmd_gleich_hermitian,
    "signature": cmd_signature,
    "unsignatured": cmd_unsignatured,
    "slack-reduce": cmd_slack_reduce,
    "slack-member": cmd_slack_member,
    "psatz-verify": cmd_psatz_verify,
    "eval": cmd_eval,
    "probe-real": cmd_probe_real,
}

# library errors that mean "bad input" rather than a bug
INPUT_ERRORS = (
    InputError,
    ParseError,
    NotHermitian,
    NotHereditaryQuadratic,
    NotScalar,
    ev.ArityMismatch,
    ev.ModeMismatch,
    ev.TooLarge,
    herm.NotAnalytic,
    herm.NotAtom,
    herm.InvalidWitness,
    slack.ConstantF,
    slack.SlackInF,
    slack.MalformedCertificate,
    lin.SingularConstantTerm,
)


def run(command, argv_items, cfg):
    """Execute one command; returns (exit code, JSON document)."""
    doc = {"schema": SCHEMA, "command": command, "config": cfg.to_json(), "seed": cfg.seed}
    try:
        if command not in COMMANDS:
            raise InputError(f"unknown command {command!r}")
        a = split_args(argv_items)
        doc["input"] = {k: v if len(v) > 1 else v[0] for k, v in sorted(a.raw.items())}
        code, result = COMMANDS[command](a, cfg)
    except INPUT_ERRORS as exc:
        code, result = BAD, {"verdict": "error", "error": type(exc).__name__, "message": str(exc)}
    except RecursionError:
        code, result = BAD, {"verdict": "error", "error": "RecursionError", "message": "expression nested too deeply"}
    doc["result"] = result
    doc["exit_code"] = code
    return code, doc


def render(doc, fmt):
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True)
    res = doc["result"]
    lines = [f"{doc['command']}: {res.get('verdict')} (exit {doc['exit_code']}, seed {doc['seed']})"]
    for key in sorted(res):
        if key == "verdict":
            continue
        lines.append(f"  {key}: {json.dumps(res[key], sort_keys=True)}")
    return "\n".join(lines)


def build_parser():
    p = argparse.ArgumentParser(prog="freelocus", description="Decision procedures for free loci of noncommutative polynomials.")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-size", type=int, default=3, dest="n_max")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("--certified", action="store_true")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
    p.set_defaults(fmt="json")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("args", nargs="*", help="EXPR or key=value")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        ns = parser.parse_intermixed_args(argv)
    except SystemExit as exc:
        return BAD if exc.code else 0
    if ns.seed < 0 or ns.n_max < 1 or ns.trials < 1:
        print("freelocus: --seed must be >= 0, --max-size and --trials >= 1", file=sys.stderr)
        return BAD
    cfg = RunConfig(ns.seed, ns.n_max, ns.trials, ns.prime, ns.certified, ns.fmt)
    code, doc = run(ns.command, ns.args, cfg)
    print(render(doc, cfg.fmt))
    if code == BAD:
        print(f"freelocus: {doc['result']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
