"""Command line front end: ``simpsec <command> [options]``.

Every report is a JSON document with ``"format": 1``; rationals are strings
``"p/q"``.  Exit codes: 0 success, 2 invalid input, 3 failed verification.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import chain_core as cc
from . import chern_weil as cw
from . import derham as dr
from . import secondary as se
from . import simplicial as sm

FORMAT = 1


class InputError(ValueError):
    """Malformed request or document; ``where`` locates the problem."""

    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


class VerifyFailure(AssertionError):
    pass


@dataclass
class RunRequest:
    command: str
    inputs: list = field(default_factory=list)
    group: Optional[str] = None
    space: Optional[str] = None
    groupoid: Optional[str] = None
    N: int = 3
    r: int = 1
    n: int = 0
    k: int = 1
    k_given: bool = False
    lam: str = "Z"
    filtration: str = "bete"
    model: str = "stot"
    suite: Optional[str] = None
    bundle: Optional[str] = None
    seed: int = 0
    output: Optional[str] = None


# ------------------------------------------------------------ documents

def _frac(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _get(doc: dict, key: str, where: str):
    if not isinstance(doc, dict) or key not in doc:
        raise InputError(where, f"missing field {key!r}")
    return doc[key]


def _label(x):
    return tuple(_label(y) for y in x) if isinstance(x, list) else x


def group_from_doc(doc: dict, where: str = "$") -> sm.FiniteGroup:
    els = [_label(e) for e in _get(doc, "elements", where)]
    rows = _get(doc, "table", where)
    if len(rows) != len(els) or any(len(r) != len(els) for r in rows):
        raise InputError(f"{where}.table", "table must be square of size |elements|")
    idx = {e: i for i, e in enumerate(els)}
    try:
        table = [[els[idx[_label(v)]] if _label(v) in idx else els[v] for v in row] for row in rows]
    except (IndexError, TypeError, KeyError):
        raise InputError(f"{where}.table", "entries must be elements or indices") from None
    try:
        return sm.FiniteGroup.from_table(els, table, doc.get("name", ""))
    except (ValueError, sm.SimplicialError) as e:
        raise InputError(where, str(e)) from None


def groupoid_from_doc(doc: dict, where: str = "$") -> sm.FiniteGroupoid:
    objs = [_label(o) for o in _get(doc, "objects", where)]
    mors = [_label(m) for m in _get(doc, "morphisms", where)]
    src = {_label(a): _label(b) for a, b in _get(doc, "source", where)}
    tgt = {_label(a): _label(b) for a, b in _get(doc, "target", where)}
    comp = {(_label(f), _label(g)): _label(h) for f, g, h in _get(doc, "compose", where)}
    ids = {_label(a): _label(b) for a, b in _get(doc, "identities", where)}
    try:
        return sm.FiniteGroupoid(objs, mors, src, tgt, comp, ids, doc.get("name", ""))
    except (ValueError, KeyError, sm.SimplicialError) as e:
        raise InputError(where, f"invalid groupoid: {e}") from None


def simplicial_set_from_doc(doc: dict, where: str = "$") -> sm.TruncatedSimplicialSet:
    sizes = _get(doc, "levels", where)
    faces = _get(doc, "faces", where)
    labels = doc.get("labels") or [list(range(s)) for s in sizes]
    labels = [[_label(x) for x in lv] for lv in labels]
    if len(faces) != len(sizes) - 1:
        raise InputError(f"{where}.faces", "need face tables for levels 1..N")
    for n, fl in enumerate(faces, start=1):
        if len(fl) != n + 1:
            raise InputError(f"{where}.faces[{n - 1}]", f"level {n} needs {n + 1} face maps")
        for i, tab in enumerate(fl):
            if len(tab) != sizes[n] or any(not isinstance(v, int) or not 0 <= v < sizes[n - 1] for v in tab):
                raise InputError(f"{where}.faces[{n - 1}][{i}]", "bad index table")
    degens = doc.get("degens")

    def face(n, i, x):
        return labels[n - 1][faces[n - 1][i][labels[n].index(x)]]

    def degen(n, i, x):
        return labels[n + 1][degens[n][i][labels[n].index(x)]]

    try:
        X = sm.simplicial_set(labels, face, degen if degens else None, doc.get("name", ""))
        X.check()
    except (sm.SimplicialError, IndexError, ValueError) as e:
        raise InputError(where, f"simplicial identities fail: {e}") from None
    return X


def simplicial_set_to_doc(X: sm.TruncatedSimplicialSet) -> dict:
    if not X.discrete:
        raise InputError("--space", "only levelwise discrete objects can be emitted")
    doc = {
        "kind": "simplicial_set",
        "name": X.name,
        "levels": X.level_sizes(),
        "labels": [[_jsonable(x) for x in lv.labels[0]] for lv in X.levels],
        "faces": [[list(f.maps[0]) for f in X.faces[n]] for n in range(1, X.N + 1)],
    }
    if X.degens is not None:
        doc["degens"] = [[list(s.maps[0]) for s in X.degens[n]] for n in range(X.N)]
    return doc


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


SPACES = {"point": sm.point, "circle": sm.minimal_circle, "torus": sm.torus_9}


def _named_group(name: str) -> sm.FiniteGroup:
    table = {"z2": lambda: sm.FiniteGroup.cyclic(2), "z3": lambda: sm.FiniteGroup.cyclic(3),
             "s3": sm.FiniteGroup.symmetric3}
    if name not in table:
        raise InputError("--group", f"unknown group {name!r}")
    return table[name]()


def _swap_groupoid() -> sm.FiniteGroupoid:
    G = sm.FiniteGroup.cyclic(2)
    return sm.action_groupoid(G, [0, 1], lambda g, x: (x + g) % 2)


def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise InputError(path, f"cannot read: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}", e.msg) from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise InputError(f"{path}$.format", f"expected {FORMAT}")
    if "kind" not in doc and isinstance(doc.get("report"), dict):
        doc = dict(doc["report"], format=FORMAT)   # a report emitted by `nerve`
    return doc


def _named_object(group, space, groupoid, N) -> sm.TruncatedSimplicialSet:
    if group:
        return sm.nerve(_named_group(group), N)
    if space:
        if space not in SPACES:
            raise InputError("--space", f"unknown space {space!r}")
        return sm.constant_object(SPACES[space](), N)
    if groupoid != "swap":
        raise InputError("--groupoid", f"unknown groupoid {groupoid!r}")
    return sm.nerve(_swap_groupoid(), N)


def object_from_doc(doc: dict, N: int, where: str) -> sm.TruncatedSimplicialSet:
    named = [k for k in ("group", "space", "groupoid") if k in doc and "kind" not in doc]
    if named:
        return _named_object(doc.get("group"), doc.get("space"), doc.get("groupoid"), N)
    kind = _get(doc, "kind", where)
    if kind == "group":
        return sm.nerve(group_from_doc(doc, where), N)
    if kind == "groupoid":
        return sm.nerve(groupoid_from_doc(doc, where), N)
    if kind == "complex":
        facets = _get(doc, "facets", where)
        try:
            K = sm.DeltaComplex.from_facets(facets)
        except (sm.SimplicialError, TypeError) as e:
            raise InputError(f"{where}.facets", str(e)) from None
        return sm.constant_object(K, N)
    if kind == "simplicial_set":
        return simplicial_set_from_doc(doc, where)
    raise InputError(f"{where}.kind", f"unknown kind {kind!r}")


def load_object(req: RunRequest) -> sm.TruncatedSimplicialSet:
    chosen = [x for x in (req.group, req.space, req.groupoid) if x] + list(req.inputs)
    if len(chosen) != 1:
        raise InputError("request", "choose exactly one of --group, --space, --groupoid, --input")
    if req.N < 1:
        raise InputError("--N", "truncation must be at least 1")
    if not req.inputs:
        return _named_object(req.group, req.space, req.groupoid, req.N)
    path = req.inputs[0]
    return object_from_doc(_read_json(path), req.N, f"{path}$")


# -------------------------------------------------------------- bundles

def _frac_list(v, where: str) -> list:
    try:
        return [Fraction(x) for x in v]
    except (TypeError, ValueError, ZeroDivisionError):
        raise InputError(where, "expected a list of rationals") from None


def bundle_from_doc(doc: dict, where: str = "$") -> cw.MultiplicativeBundle:
    """Bundle document: base object, curvature (forms or a total 2-cochain), optional (c, v) and omega."""
    N = int(doc.get("N", 3))
    X = object_from_doc(_get(doc, "base", where), N, f"{where}.base")
    M = se.Models(X, "Z")
    rank = int(doc.get("rank", 1))
    terms = _get(doc, "phi", where)
    try:
        phi = cw.InvariantPolynomial(rank, {tuple(t["exponents"]): Fraction(t["coeff"]) for t in terms})
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"{where}.phi", f"bad polynomial: {e}") from None
    try:
        if "curvature" in doc:
            F = [dr.CompatibleFormSequence.from_json(X, f, 2) for f in doc["curvature"]]
        else:
            cochains = _get(doc, "curvature_cochain", where)
            F = [dr.E_total(X, M.total_Q, 2, _frac_list(x, f"{where}.curvature_cochain")) for x in cochains]
    except (ValueError, KeyError, TypeError) as e:
        raise InputError(f"{where}.curvature", str(e)) from None
    if len(F) != rank:
        raise InputError(f"{where}.curvature", "need one curvature form per rank")
    if "c" in doc and "v" in doc:
        c = [_frac_list(x, f"{where}.c") for x in doc["c"]]
        v = [_frac_list(x, f"{where}.v") for x in doc["v"]]
    else:
        c, v = [], []
        for f in F:
            try:
                ci, vi = cw.integral_lift(M, 2, f.J_coords(M.total_Q, 2))
            except cw.NonIntegralError as e:
                raise InputError(f"{where}.curvature", str(e)) from None
            c.append(ci)
            v.append(vi)
    conn = cw.ConnectionPresentation(X, F, c, v, None, cw.AbelianStructureGroup(rank), M)
    omega = {}
    for key, f in (doc.get("omega") or {}).items():
        try:
            omega[int(key)] = dr.CompatibleFormSequence.from_json(X, f, 2 * int(key) - 1)
        except (ValueError, KeyError, TypeError) as e:
            raise InputError(f"{where}.omega.{key}", str(e)) from None
    try:
        fam = se.parse_filtration(doc.get("filtration", "bete"))
    except ValueError as e:
        raise InputError(f"{where}.filtration", str(e)) from None
    G = cw.MultiplicativeBundle(conn, phi, omega, fam)
    try:
        return G.validate()
    except (cw.VerificationError, ValueError) as e:
        raise InputError(where, f"invalid bundle: {e}") from None


def named_bundle(text: str, N: int) -> cw.MultiplicativeBundle:
    name, _, arg = text.partition(":")
    try:
        if name == "flat":
            return cw.flat_circle_bundle(Fraction(arg or "1/3"), max(N, 3))
        if name == "torus":
            return cw.torus_bundle(int(arg or 1), max(N, 3))
    except (ValueError, ZeroDivisionError):
        pass
    raise InputError("--bundle", "use flat:p/q or torus:n")


# ------------------------------------------------------------- commands

def _filtration(req: RunRequest) -> se.FiltrationFamily:
    try:
        return se.parse_filtration(req.filtration)
    except ValueError as e:
        raise InputError("--filtration", str(e)) from None


def _lam(req: RunRequest) -> str:
    if req.lam not in ("Z", "0"):
        raise InputError("--lambda", "use Z or 0")
    return req.lam


def _in_window(X, deg: int, flag: str):
    if not 0 <= deg <= X.N - 1:
        raise InputError(flag, f"degree {deg} outside the validity window 0..{X.N - 1}")


def _group_json(g) -> dict:
    return {"group": str(g), "free_rank": g.free_rank, "torsion": list(g.torsion),
            "rational_rank": g.rational_rank, "circle_rank": g.circle_rank}


def cmd_cohomology(req: RunRequest) -> dict:
    X = load_object(req)
    degrees = list(range(X.N))
    out = {"model": req.model, "object": X.name, "N": X.N}
    if req.model == "stot":
        ring = "Q" if req.lam == "Q" else "Z"
        T = cc.totalize(sm.cochain_double_complex(X, ring))
        out["ring"] = ring
        out["cohomology"] = {str(n): _group_json(T.complex.cohomology(n).group) for n in degrees}
    elif req.model == "wmodel":
        W = dr.whitney_model(X)
        out["cohomology"] = {str(n): _group_json(W.total.complex.cohomology(n).group) for n in degrees}
    elif req.model == "cone":
        C = se.mh_cone(X, _lam(req), _filtration(req), req.r)
        out.update({"r": req.r, "lambda": req.lam, "filtration": req.filtration})
        out["cohomology"] = {str(n): _group_json(C.cohomology(n).group) for n in degrees}
    else:
        raise InputError("--model", "use stot, wmodel or cone")
    return out


def cmd_nerve(req: RunRequest) -> dict:
    X = load_object(req)
    doc = simplicial_set_to_doc(X)
    return doc


def cmd_mh(req: RunRequest) -> dict:
    X = load_object(req)
    _in_window(X, 2 * req.r - req.n, "--r/--n")
    return se.mh_group(X, _lam(req), _filtration(req), req.r, req.n).to_json()


def cmd_dchar(req: RunRequest) -> dict:
    X = load_object(req)
    _in_window(X, req.k, "--k")
    return se.dchar_group(X, _lam(req), _filtration(req), req.k, req.r).to_json()


def _xi_class_report(G: cw.MultiplicativeBundle, k: Optional[int]) -> dict:
    xi = cw.xi_class(G, k)
    return {
        "mode": "class", "k": xi.k, "r": xi.r, "degree": xi.mh_degree,
        "cocycle": xi.is_cocycle(),
        "element": xi.element.to_json(),
        "integral_class": [_frac(x) for x in xi.integral_class()],
        "mh_trivial": xi.element.is_coboundary(),
        "dchar_order": xi.order(),
    }


def cmd_xi(req: RunRequest) -> dict:
    """``xi`` on a bundle (document or --bundle) gives its class; on an object, the map to MH."""
    if req.bundle or (req.inputs and _read_json(req.inputs[0]).get("kind") == "bundle"):
        if req.bundle and (req.inputs or req.group or req.space or req.groupoid):
            raise InputError("request", "--bundle cannot be combined with an object")
        G = named_bundle(req.bundle, req.N) if req.bundle else bundle_from_doc(_read_json(req.inputs[0]),
                                                                              f"{req.inputs[0]}$")
        k = req.k if req.k_given else None
        return _xi_class_report(G, k)
    X = load_object(req)
    _in_window(X, 2 * req.r - req.n, "--r/--n")
    rep = se.xi_map(X, _lam(req), _filtration(req), req.r, req.n)
    out = rep.to_json()
    out["mode"] = "map"
    out["ok"] = rep.ok
    if not rep.ok:
        raise VerifyFailure(json.dumps(out, sort_keys=True))
    return out


def cmd_les(req: RunRequest) -> dict:
    X = load_object(req)
    rep = se.mh_les(X, _lam(req), _filtration(req), req.r)
    out = {"r": req.r, "lambda": req.lam, "filtration": req.filtration,
           "nodes": [{"label": nd.label, "degree": nd.degree, "group": str(nd.group), "exact": nd.exact}
                     for nd in rep.les.nodes],
           "quotient_shift": {str(k): v for k, v in sorted(rep.quotient_check.items())},
           "exact": rep.ok}
    if not rep.ok:
        raise VerifyFailure(json.dumps(out, sort_keys=True))
    return out


# ---------------------------------------------------------- verify suites

def _suite_chain(rng) -> dict:
    fails = 0
    for _ in range(20):
        fails += cc.les_of_cone(cc.random_chain_map(rng), range(4)).failures
    oracle = {}
    for name, G, want in (("Z/2", sm.FiniteGroup.cyclic(2), ["Z", "0", "Z/2", "0"]),
                          ("Z/3", sm.FiniteGroup.cyclic(3), ["Z", "0", "Z/3", "0"])):
        T = cc.totalize(sm.cochain_double_complex(sm.nerve(G, 4), "Z"))
        got = [str(T.complex.cohomology(n).group) for n in range(4)]
        oracle[name] = got == want
    return {"les_failures": fails, "nerve_cohomology": oracle,
            "ok": fails == 0 and all(oracle.values())}


def _suite_derham(rng) -> dict:
    X = sm.constant_object(sm.minimal_circle(), 3)
    W = dr.whitney_model(X)
    T = W.total
    res = {"quasi_iso": {}}
    for name, Y in (("point", sm.constant_object(sm.point(), 3)), ("circle", X),
                    ("Z/2", sm.nerve(sm.FiniteGroup.cyclic(2), 3))):
        res["quasi_iso"][name] = dr.quasi_iso_report(Y).iso
    je = dj = True
    for k in (0, 1):
        for _ in range(3):
            x = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(T.complex.rank(k))]
            E = dr.E_total(X, T, k, x)
            je &= E.J_coords(T, k) == x
            w = dr.random_compatible_form(X, k, rng, T)
            dj &= w.d().J_coords(T, k + 1) == T.complex.apply(k, w.J_coords(T, k))
    res["J_after_E"] = je
    res["J_chain_map"] = dj
    res["ok"] = je and dj and all(res["quasi_iso"].values())
    return res


def _suite_secondary(rng) -> dict:
    X = sm.constant_object(sm.minimal_circle(), 3)
    Y = sm.nerve(sm.FiniteGroup.cyclic(2), 3)
    res = {}
    for name, Z in (("circle", X), ("Z/2", Y)):
        res[f"xi[{name}](1,0)"] = se.xi_map(Z, "Z", se.bete(), 1, 0).ok
        res[f"xi[{name}](1,1)"] = se.xi_map(Z, "Z", se.bete(), 1, 1).ok
        res[f"corollary[{name}]"] = se.corollary_check(Z, 1)[0]
        res[f"les[{name}]"] = se.mh_les(Z, "Z", se.bete(), 1).ok
    return {"checks": res, "ok": all(res.values())}


def _suite_chernweil(rng) -> dict:
    base = cw.flat_circle_bundle(Fraction(1, 3), 3)
    X, T = base.conn.X, base.conn.models.total_Q
    stokes = {}
    for q in (1, 2, 3):
        al = [[dr.random_compatible_form(X, 1, rng, T)] for _ in range(q)]
        fam = cw.ConnectionFamily(base.conn, al)
        stokes[str(q)] = cw.stokes_identity_check(cw.InvariantPolynomial.power(2), fam)
    xi = cw.xi_class(base)
    indep = cw.class_independence_and_invariance(base)
    res = {"stokes": stokes, "xi_cocycle": xi.is_cocycle(), "xi_order": xi.order(),
           "independence": indep}
    res["ok"] = all(stokes.values()) and res["xi_cocycle"] and res["xi_order"] == 3 and all(indep.values())
    return res


SUITES = {"chain": _suite_chain, "derham": _suite_derham, "secondary": _suite_secondary,
          "chernweil": _suite_chernweil}


def cmd_verify(req: RunRequest) -> dict:
    if req.suite not in SUITES:
        raise InputError("suite", f"unknown suite {req.suite!r}; choose from {sorted(SUITES)}")
    out = SUITES[req.suite](random.Random(req.seed))
    out.update({"suite": req.suite, "seed": req.seed})
    if not out["ok"]:
        raise VerifyFailure(json.dumps(out, sort_keys=True, default=str))
    return out


COMMANDS = {"cohomology": cmd_cohomology, "nerve": cmd_nerve, "mh": cmd_mh, "dchar": cmd_dchar,
            "xi": cmd_xi, "les": cmd_les, "verify": cmd_verify}


# ------------------------------------------------------------------ run

def threads() -> int:
    raw = os.environ.get("SIMPSEC_THREADS", "1")
    if not raw.isdigit() or int(raw) < 1:
        raise InputError("SIMPSEC_THREADS", "must be a positive integer")
    return int(raw)


def render(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, default=_default) + "\n"


def _default(x):
    if isinstance(x, Fraction):
        return _frac(x)
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def run(req: RunRequest) -> tuple[dict, int]:
    """Execute one request; returns the report document and the exit code."""
    try:
        threads()
        if req.command not in COMMANDS:
            raise InputError("command", f"unknown command {req.command!r}")
        body = COMMANDS[req.command](req)
        return {"format": FORMAT, "command": req.command, "status": "ok", "report": body}, 0
    except (InputError, se.WindowError) as e:
        return {"format": FORMAT, "command": req.command, "status": "invalid",
                "error": str(e), "where": getattr(e, "where", "request")}, 2
    except (VerifyFailure, cw.VerificationError, cw.NonIntegralError) as e:
        return {"format": FORMAT, "command": req.command, "status": "failed", "error": str(e)}, 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="simpsec", description="Secondary invariants of finite simplicial models.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("suite", nargs="?", help="suite name for 'verify'")
    p.add_argument("--input", action="append", default=[], help="JSON document describing the object")
    p.add_argument("--group", help="z2, z3 or s3 (nerve of the group)")
    p.add_argument("--space", help="point, circle or torus (constant object)")
    p.add_argument("--groupoid", help="swap (Z/2 acting freely on two points)")
    p.add_argument("--N", type=int, default=3, help="truncation level")
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--lambda", dest="lam", default="Z", help="Z or 0 (Q also accepted by cohomology)")
    p.add_argument("--filtration", default="bete", help="bete, bete+s, whole, zero or column")
    p.add_argument("--model", default="stot", help="cohomology model: stot, wmodel or cone")
    p.add_argument("--bundle", help="built-in bundle for 'xi': flat:p/q or torus:n")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="write the report here instead of stdout")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    req = RunRequest(command=args.command, inputs=args.input, group=args.group, space=args.space,
                     groupoid=args.groupoid, N=args.N, r=args.r, n=args.n, k=1 if args.k is None else args.k,
                     k_given=args.k is not None, lam=args.lam, bundle=args.bundle,
                     filtration=args.filtration, model=args.model, suite=args.suite, seed=args.seed,
                     output=args.output)
    doc, code = run(req)
    text = render(doc)
    if req.output:
        with open(req.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code == 2:
        sys.stderr.write(f"simpsec: {doc['error']}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
