"""Evaluate a parsed session and assemble the report document."""

import hashlib
import json

from .. import __version__
from ..algebra.field import GF, QQ
from ..algebra.modules import Ideal, PresentedModule
from ..algebra.ring import BaseRing
from ..cm import (CertReport, classify_cm_ring, construct_mcm, has_constant_amplitude,
                  has_maximal_depth, is_mcm_dgcomplex, is_mcm_dgcomplex_dual,
                  is_mcm_dgmodule, verify_abf, verify_init, DEFAULT_BOUND)
from ..dg.algebra import DGError, base_dg_ring, koszul_dg_ring, square_zero_extension
from ..dg.derived import gorenstein_dualizing, projective_dimension
from ..dg.module import (BoundError, algebra_as_module, h0_module, koszul_algebra_map,
                         koszul_dg_module, residue_field, restrict_module)
from ..local import (DepthConsistencyError, depth_report, koszul_depth,
                     local_cohomology_profile, xi_nonzero)
from .. import oracle

SCHEMA = "dgcm-report/1"

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_HYPOTHESIS = 2
EXIT_RESOURCE = 3
EXIT_PARSE = 4


class SessionError(RuntimeError):
    def __init__(self, msg, line):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def session_hash(text):
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class Env:
    """Objects bound by the declarations of a session."""

    def __init__(self):
        self.ring = None
        self.objects = {}

    def poly(self, text):
        return self.ring(text)

    def polys(self, args):
        return [self.poly(a.text) for a in args]

    def ideal_of(self, args):
        if len(args) == 1 and isinstance(self.objects.get(args[0].text), Ideal):
            return self.objects[args[0].text]
        return Ideal(self.ring, self.polys(args))


def _flat(groups):
    return [a for g in groups for a in g]


def _infer_koszul_map(R, S):
    """Coefficients with f_i = c * g_j for Koszul DG-rings R = K(f), S = K(g)."""
    ring = R.ring
    fs, gs = R.tag[1], S.tag[1]
    coeffs = []
    for f in fs:
        row = [0] * len(gs)
        for j, g in enumerate(gs):
            q = _scalar_ratio(ring, f, g)
            if q is not None:
                row[j] = q
                break
        else:
            raise DGError(f"cannot map {ring.format(f)} to a multiple of one Koszul element")
        coeffs.append(row)
    return coeffs


def _scalar_ratio(ring, f, g):
    ft, gt = getattr(f, "terms", f), getattr(g, "terms", g)
    if set(ft) != set(gt) or not ft:
        return None
    e = next(iter(ft))
    q = ring.field(ft[e]) * ring.field.inv(ring.field(gt[e]))
    if ring.p:
        q %= ring.p
    for m in ft:
        lhs = ring.field(ft[m])
        rhs = q * ring.field(gt[m])
        if ring.p:
            rhs %= ring.p
        if lhs != rhs:
            return None
    return q


def build(env, stmt):
    """Evaluate one declaration."""
    k, a = stmt.kind, stmt.args
    if k == "ring":
        vars_, ideal = a
        names, weights = [], []
        for v in vars_:
            n, _, w = v.text.partition(":")
            names.append(n)
            weights.append(int(w or 1))
        fld = env.field
        env.ring = BaseRing(fld, names, weights, [x.text for x in ideal] or None)
        env.objects[stmt.name] = env.ring
    elif k == "ideal":
        env.objects[stmt.name] = Ideal(env.ring, env.polys(a[0]))
    elif k == "dg":
        flat = _flat(a)
        if stmt.head == "koszul":
            R = koszul_dg_ring(env.ring, env.polys(flat[1:]))
        elif stmt.head == "sqzero":
            R = square_zero_extension(env.ring, env.objects[flat[1].text], int(flat[2].text))
        else:
            R = base_dg_ring(env.ring)
        R.name = stmt.name
        env.objects[stmt.name] = R
    elif k == "module":
        flat = _flat(a)
        obj = env.objects.get(flat[0].text) if flat else None
        h = stmt.head
        if h == "residue":
            M = residue_field(obj)
        elif h == "regular":
            M = algebra_as_module(obj)
        elif h == "dualizing":
            M = gorenstein_dualizing(obj)
        elif h == "quotient":
            I = env.ideal_of(flat[1:])
            if isinstance(obj, BaseRing):
                M = PresentedModule(obj, [0], [{(0, e): c for e, c in g.terms.items()}
                                               for g in I.gens])
            else:
                M = h0_module(obj, I)
        elif h == "shift":
            M = obj.shift(int(flat[1].text))
        elif h == "twist":
            M = obj.twist(int(flat[1].text))
        elif h == "koszul":
            M = koszul_dg_module(env.polys(flat[1:]), obj)
        elif h == "kquotient":
            # K(A; f) as an R-module along R -> K(A; f)
            S = koszul_dg_ring(env.ring, env.polys(flat[1:]))
            img = koszul_algebra_map(obj, S, _infer_koszul_map(obj, S))
            M = restrict_module(img, algebra_as_module(S), obj)
        else:
            R = env.objects[flat[1].text]
            img = koszul_algebra_map(R, obj.alg, _infer_koszul_map(R, obj.alg))
            M = restrict_module(img, obj, R)
        if not isinstance(M, PresentedModule):
            M.label = stmt.name
        env.objects[stmt.name] = M


def _simple(name, fn):
    rep = CertReport(name)
    try:
        fn(rep)
    except BoundError as e:
        rep.resource(e)
    return rep


def run_command(env, stmt, bound):
    """Execute a command; returns a CertReport."""
    flat = _flat(stmt.args)
    obj = [env.objects.get(a.text) for a in flat]
    c = stmt.name
    if c == "classify":
        return classify_cm_ring(obj[0])
    if c == "constant-amplitude":
        return has_constant_amplitude(obj[0])
    if c == "mcm-check":
        return is_mcm_dgcomplex(obj[0], obj[0].alg, bound)
    if c == "mcm-dual-check":
        return is_mcm_dgcomplex_dual(obj[0], obj[0].alg, None, bound)
    if c == "mcm-module":
        return is_mcm_dgmodule(obj[0], obj[0].alg, bound)
    if c == "maximal-depth":
        return has_maximal_depth(obj[0], obj[0].alg, bound)
    if c == "construct-mcm":
        try:
            M, rep = construct_mcm(obj[0], None, bound)
        except DGError as e:
            rep = CertReport("construct-mcm")
            rep.hypothesis("a dualizing module is available", False, str(e))
            M = None
        if stmt.head:
            env.objects[stmt.head] = M
        return rep
    if c == "verify abf":
        return verify_abf(obj[0], obj[1], bound)
    if c == "verify init":
        F = obj[0]
        return verify_init(F.alg, F, obj[1], bound)

    def depth_cmd(rep):
        I = obj[1] if len(obj) > 1 else None
        try:
            dr = depth_report(obj[0], I, bound)
        except DepthConsistencyError as e:
            rep.condition("inf RHom(k, M) = inf RGamma_m(M)", False, str(e))
            return
        rep.invariants["depth"] = dr["depth"]
        rep.bounds["rhom_window"] = dr["rhom_window"]
        if I is None:
            rep.condition("inf RHom(k, M) = inf RGamma_m(M)", True,
                          {"rhom": dr["rhom_route"], "torsion": dr["torsion_route"]})
        else:
            rep.invariants["ideal"] = [str(g) for g in I.gens]
            rep.condition("depth computed", True, {"rhom": dr["rhom_route"]})

    def profile_cmd(rep):
        prof = local_cohomology_profile(obj[0])
        rep.invariants["profile"] = prof.to_dict()
        rep.condition("profile computed", True)

    def pd_cmd(rep):
        info = projective_dimension(obj[0], bound)
        rep.invariants.update(pd=info["pd"], sup=info["sup"], inf_tensor=info["inf_tensor"],
                              minimal=info["minimal"],
                              tensor_dims={str(i): v for i, v in
                                           sorted(info["tensor_dims"].items())})
        rep.condition("pd computed", True)

    def xi_cmd(rep):
        try:
            cert = xi_nonzero(int(flat[1].text), obj[0], None, bound)
        except ValueError as e:
            rep.hypothesis("N is free over the base ring", False, str(e))
            return
        rep.invariants["xi"] = cert.to_dict()
        rep.condition(f"xi^{cert.index} is nonzero", cert.verdict, cert.rank)

    def kdepth_cmd(rep):
        sop = env.polys(flat[1:])
        try:
            v = koszul_depth(obj[0], sop, bound)
        except ValueError as e:
            rep.hypothesis("sequence is a system of parameters", False, str(e))
            return
        rep.invariants["koszul_depth"] = v
        rep.condition("koszul depth computed", True)

    table = {"depth": depth_cmd, "profile": profile_cmd, "pd": pd_cmd, "xi": xi_cmd,
             "koszul-depth": kdepth_cmd}
    return _simple(c, table[c])


def oracle_check(env, names):
    """Compare kernel cohomology with the dense oracle on every declared
    DG-ring and DG-module."""
    rep = CertReport("oracle-comparison")
    ring = env.ring
    for name in names:
        obj = env.objects.get(name)
        if obj is None or not hasattr(obj, "complex"):
            continue
        C = obj.complex()
        win = getattr(obj, "window", (None, None))
        degs = [i for i in C.degrees
                if (win[0] is None or i >= win[0]) and (win[1] is None or i <= win[1])]
        if ring.is_artinian and ring.nvars:
            ts = list(oracle.internal_range(C))
        else:
            tws = [t for i in C.degrees for t in C.tw(i)] or [0]
            ts = list(range(min(tws), min(tws) + 7))
        bad = []
        for i in sorted(degs):
            H = C.cohomology_at(i).module
            for t in ts:
                a = H.hilbert_function(t)
                b = oracle.cohomology_dim(C, i, t)
                if a != b:
                    bad.append({"degree": i, "internal": t, "kernel": a, "oracle": b})
        rep.condition(f"{name}: cohomology matches oracle", not bad,
                      {"degrees": degs, "internal_degrees": [ts[0], ts[-1]] if ts else [],
                       "mismatches": bad})
    return rep



def run_session(session, bound=None, use_oracle=False, fixture=None):
    """Run all commands; returns the report document (a plain dict)."""
    env = Env()
    env.field = QQ if session.field == "Q" else GF(int(session.field[1:]))
    b = bound if bound is not None else (session.bound or DEFAULT_BOUND)
    reports = []
    declared = []
    for st in session.statements:
        if st.kind in ("ring", "ideal", "dg", "module"):
            try:
                build(env, st)
            except BoundError as e:
                raise SessionError(str(e), st.line)
            except (DGError, ValueError) as e:
                raise SessionError(str(e), st.line)
            if st.kind in ("dg", "module"):
                declared.append(st.name)
        elif st.kind == "command":
            cb = st.bound if st.bound is not None else b
            rep = run_command(env, st, cb)
            entry = {"command": _command_text(st), "line": st.line, "report": rep.to_dict()}
            reports.append(entry)
            if st.head and env.objects.get(st.head) is not None:
                declared.append(st.head)
    if use_oracle:
        rep = oracle_check(env, declared)
        reports.append({"command": "oracle", "line": None, "report": rep.to_dict()})
    return {
        "schema": SCHEMA,
        "version": __version__,
        "fixture": fixture,
        "fixture_sha256": session_hash(session.source),
        "bound": b,
        "oracle": bool(use_oracle),
        "reports": reports,
        "summary": summarize(reports),
    }


def _command_text(st):
    txt = " ".join([st.name] + [a.text for g in st.args for a in g])
    txt += f" -> {st.head}" if st.head else ""
    return txt + (f" bound={st.bound}" if st.bound is not None else "")


def summarize(reports):
    counts = {"pass": 0, "fail": 0, "hypothesis-rejected": 0, "resource-bound": 0}
    for r in reports:
        counts[r["report"]["status"]] += 1
    return counts


def exit_code(doc):
    """0 if every verdict passes; otherwise the code of the most severe
    outcome, ordered resource bound > hypothesis rejection > failure."""
    s = doc["summary"]
    if s["resource-bound"]:
        return EXIT_RESOURCE
    if s["hypothesis-rejected"]:
        return EXIT_HYPOTHESIS
    if s["fail"]:
        return EXIT_FAIL
    return EXIT_PASS


def to_json(doc):
    return json.dumps(doc, sort_keys=True, indent=2, default=str) + "\n"


def _cell(v):
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, default=str)
    return str(v)


def to_table(doc):
    """Human-readable rendering; every value is copied from the document."""
    lines = [f"schema {doc['schema']}  version {doc['version']}  bound {doc['bound']}",
             f"fixture {doc['fixture']}  sha256 {doc['fixture_sha256']}"]
    for entry in doc["reports"]:
        r = entry["report"]
        lines.append("")
        lines.append(f"[{r['status']}] {entry['command']}  (line {entry['line']})")
        for h in r["hypotheses"]:
            lines.append(f"  hypothesis  {'ok ' if h['ok'] else 'NO '} {h['name']}")
        for c in r["conditions"]:
            lines.append(f"  condition   {'ok ' if c['ok'] else 'NO '} {c['name']}"
                         + (f"  {_cell(c['witness'])}" if c["witness"] is not None else ""))
        for k, v in sorted(r["invariants"].items()):
            lines.append(f"  {k:<22} {_cell(v)}")
        for k, v in sorted(r["bounds"].items()):
            lines.append(f"  bound {k:<16} {_cell(v)}")
        if r["resource_error"]:
            lines.append(f"  resource    {r['resource_error']}")
        for n in r["notes"]:
            lines.append(f"  note        {n}")
    s = doc["summary"]
    lines.append("")
    lines.append("summary " + "  ".join(f"{k}={s[k]}" for k in sorted(s)))
    return "\n".join(lines) + "\n"
