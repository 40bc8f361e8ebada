"""Session language: parser and printer.

A session is line oriented; ``#`` starts a comment.  Declarations::

    field Q | field F<p> | field Fp <p>
    ring A = poly(x, y:2) [/ (x^3, y^2)]
    dg R = koszul(A; x, x) | sqzero(A; N, 1) | base(A)
    module M = residue(R) | regular(R) | dualizing(R) | quotient(X; f, ...)
             | shift(M, s) | twist(M, t) | koszul(M; f, ...) | restrict(M; R)
             | kquotient(R; f, ...)
    ideal I = (f, g)
    bound 6

and commands (see ``COMMANDS``), each optionally ending in ``bound=N`` to
override the session bound.  ``report json|table`` selects the output mode.  Errors carry a 1-based line and column.
"""

import re
from dataclasses import dataclass, field as dc_field

from ..algebra.field import GF, QQ
from ..algebra.ring import BaseRing, PolyParseError, parse_poly


class DSLError(ValueError):
    def __init__(self, msg, line, col):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Arg:
    """An argument as written; ``col`` is ignored by equality."""
    text: str
    col: int = dc_field(default=0, compare=False)


@dataclass(frozen=True)
class Stmt:
    kind: str            # field ring dg module ideal bound report command
    name: str            # bound name, command name, field/report value
    head: str = ""       # constructor or command sub-keyword
    args: tuple = ()     # argument groups: tuple of tuples of Arg
    line: int = dc_field(default=0, compare=False)
    bound: int = None    # per-command override of the session bound


@dataclass
class Session:
    statements: list
    source: str = ""

    @property
    def field(self):
        return next((s.name for s in self.statements if s.kind == "field"), "Q")

    @property
    def bound(self):
        vals = [int(s.name) for s in self.statements if s.kind == "bound"]
        return vals[-1] if vals else None

    @property
    def output(self):
        vals = [s.name for s in self.statements if s.kind == "report"]
        return vals[-1] if vals else "json"

    @property
    def commands(self):
        return [s for s in self.statements if s.kind == "command"]

    def __eq__(self, other):
        return isinstance(other, Session) and self.statements == other.statements


# command name -> kinds of its positional arguments
COMMANDS = {
    "classify": ("dg",),
    "constant-amplitude": ("dg",),
    "depth": ("module", "ideal?"),
    "profile": ("module",),
    "pd": ("module",),
    "mcm-check": ("module",),
    "mcm-module": ("module",),
    "maximal-depth": ("module",),
    "mcm-dual-check": ("module",),
    "construct-mcm": ("dg",),
    "xi": ("module", "int"),
    "koszul-depth": ("module", "polys"),
    "verify abf": ("module", "module"),
    "verify init": ("module", "ideal"),
}

MODULE_CTORS = {
    "residue": ("dg",),
    "regular": ("dg",),
    "dualizing": ("dg",),
    "quotient": ("ring|dg", "polys|ideal"),
    "shift": ("module", "int"),
    "twist": ("module", "int"),
    "koszul": ("module", "polys"),
    "restrict": ("module", "dg"),
    "kquotient": ("dg", "polys"),
}

DG_CTORS = {
    "koszul": ("ring", "polys"),
    "sqzero": ("ring", "basemodule", "int"),
    "base": ("ring",),
}

_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


def _split_top(text, col0, seps):
    """Split ``text`` at top-level separators; returns [(piece, col)]."""
    out, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in seps and depth == 0:
            out.append((text[start:i], col0 + start))
            start = i + 1
    out.append((text[start:], col0 + start))
    res = []
    for piece, c in out:
        lead = len(piece) - len(piece.lstrip())
        res.append((piece.strip(), c + lead))
    return res


def _args(text, col0, line):
    """``a, b; c`` -> groups of Arg separated by ``;``."""
    groups = []
    for g, gc in _split_top(text, col0, ";"):
        items = []
        if g:
            for a, ac in _split_top(g, gc, ","):
                if not a:
                    raise DSLError("empty argument", line, ac)
                items.append(Arg(a, ac))
        groups.append(tuple(items))
    return tuple(groups)


def _call(text, col0, line):
    """``name(args)`` -> (name, groups)."""
    m = re.fullmatch(r"([A-Za-z][A-Za-z0-9_-]*)\s*\((.*)\)\s*", text, re.S)
    if not m:
        raise DSLError(f"expected a constructor call, got {text!r}", line, col0)
    return m.group(1), _args(m.group(2), col0 + m.start(2), line)


class _Parser:
    def __init__(self, text):
        self.text = text
        self.env = {}      # name -> kind
        self.stmts = []
        self.ring = None
        self.field = "Q"

    def error(self, msg, line, col):
        raise DSLError(msg, line, col)

    def bind(self, name, kind, line, col):
        if not _NAME.fullmatch(name):
            self.error(f"bad identifier {name!r}", line, col)
        if name in self.env:
            self.error(f"duplicate binding {name!r}", line, col)
        self.env[name] = kind

    def need(self, arg, kinds, line):
        kinds = kinds.split("|")
        got = self.env.get(arg.text)
        if got is None:
            self.error(f"unbound identifier {arg.text!r}", line, arg.col)
        if got not in kinds:
            self.error(f"{arg.text!r} is a {got}, expected {' or '.join(kinds)}", line, arg.col)
        return got

    def poly(self, arg, line):
        if self.ring is None:
            self.error("no ring declared", line, arg.col)
        try:
            parse_poly(arg.text, self.ring)
        except PolyParseError as e:
            self.error(e.msg, line, arg.col + e.col - 1)

    def integer(self, arg, line):
        if not re.fullmatch(r"-?\d+", arg.text):
            self.error(f"expected an integer, got {arg.text!r}", line, arg.col)

    def check_args(self, sig, groups, line, col, what):
        """Validate grouped arguments against a signature."""
        flat = []
        for g in groups:
            flat.extend(g)
        idx = 0
        for kind in sig:
            optional = kind.endswith("?")
            kind = kind.rstrip("?")
            if kind == "polys" or kind == "polys|ideal":
                rest = flat[idx:]
                if kind == "polys|ideal" and len(rest) == 1 and self.env.get(rest[0].text) == "ideal":
                    idx = len(flat)
                    continue
                for a in rest:
                    self.poly(a, line)
                idx = len(flat)
                continue
            if idx >= len(flat):
                if optional:
                    continue
                self.error(f"{what}: missing argument ({kind})", line, col)
            a = flat[idx]
            idx += 1
            if kind == "int":
                self.integer(a, line)
            else:
                self.need(a, kind, line)
        if idx < len(flat):
            self.error(f"{what}: unexpected argument {flat[idx].text!r}", line, flat[idx].col)

    def parse(self):
        for ln, raw in enumerate(self.text.splitlines(), 1):
            line = raw.split("#", 1)[0].rstrip()
            if not line.strip():
                continue
            col0 = len(line) - len(line.lstrip()) + 1
            self.statement(line.strip(), ln, col0)
        return Session(self.stmts, self.text)

    def statement(self, s, ln, c0):
        word = s.split(None, 1)[0]
        rest = s[len(word):]
        rc = c0 + len(word) + (len(rest) - len(rest.lstrip()))
        rest = rest.strip()
        if word == "field":
            self.field_decl(rest, ln, rc)
        elif word in ("ring", "dg", "module", "ideal"):
            m = re.fullmatch(r"([^=\s]+)\s*=\s*(.+)", rest, re.S)
            if not m:
                self.error(f"expected '{word} <name> = ...'", ln, rc)
            name, body = m.group(1), m.group(2)
            bc = rc + m.start(2)
            getattr(self, word + "_decl")(name, body, ln, rc, bc)
        elif word == "bound":
            if not re.fullmatch(r"\d+", rest) or int(rest) < 1:
                self.error("bound must be a positive integer", ln, rc)
            self.stmts.append(Stmt("bound", str(int(rest)), line=ln))
        elif word == "report":
            if rest not in ("json", "table"):
                self.error("report mode must be json or table", ln, rc)
            self.stmts.append(Stmt("report", rest, line=ln))
        else:
            self.command(word, rest, ln, c0, rc)

    def field_decl(self, rest, ln, rc):
        if self.ring is not None:
            self.error("field must come before the ring", ln, rc)
        m = re.fullmatch(r"Q|QQ|F(?:p\s+)?(\d+)", rest)
        if not m:
            self.error(f"unknown field {rest!r}", ln, rc)
        if m.group(1):
            p = int(m.group(1))
            try:
                GF(p)
            except ValueError:
                self.error(f"{p} is not prime", ln, rc)
            self.field = f"F{p}"
        else:
            self.field = "Q"
        self.stmts.append(Stmt("field", self.field, line=ln))

    def ring_decl(self, name, body, ln, nc, bc):
        if self.ring is not None:
            self.error("only one base ring per session", ln, nc)
        parts = _split_top(body, bc, "/")
        if len(parts) > 2:
            self.error("at most one quotient", ln, parts[2][1])
        head, hc = parts[0]
        fn, groups = _call(head, hc, ln)
        if fn != "poly" or len(groups) != 1 or not groups[0]:
            self.error("expected poly(<variables>)", ln, hc)
        names, weights = [], []
        for a in groups[0]:
            m = re.fullmatch(r"([A-Za-z][A-Za-z_]*)\s*(?::\s*(\d+))?", a.text)
            if not m or (m.group(2) is not None and int(m.group(2)) < 1):
                self.error(f"bad variable {a.text!r}", ln, a.col)
            names.append(m.group(1))
            weights.append(int(m.group(2) or 1))
        ideal = ()
        if len(parts) == 2:
            itext, ic = parts[1]
            m = re.fullmatch(r"\((.*)\)", itext, re.S)
            if not m:
                self.error("expected a parenthesised ideal", ln, ic)
            ideal = _args(m.group(1), ic + 1, ln)
            ideal = ideal[0] if ideal else ()
        fld = QQ if self.field == "Q" else GF(int(self.field[1:]))
        try:
            self.ring = BaseRing(fld, names, weights)
        except ValueError as e:
            self.error(str(e), ln, hc)
        for a in ideal:
            self.poly(a, ln)
        try:
            self.ring = BaseRing(fld, names, weights, [a.text for a in ideal] or None)
        except (ValueError, PolyParseError) as e:
            self.error(str(e), ln, bc)
        self.bind(name, "ring", ln, nc)
        vars_ = tuple(Arg(f"{n}:{w}" if w != 1 else n) for n, w in zip(names, weights))
        self.stmts.append(Stmt("ring", name, "poly", (vars_, tuple(ideal)), ln))

    def dg_decl(self, name, body, ln, nc, bc):
        fn, groups = _call(body, bc, ln)
        if fn not in DG_CTORS:
            self.error(f"unknown DG-ring constructor {fn!r}", ln, bc)
        self.check_args(DG_CTORS[fn], groups, ln, bc, fn)
        self.bind(name, "dg", ln, nc)
        self.stmts.append(Stmt("dg", name, fn, groups, ln))

    def module_decl(self, name, body, ln, nc, bc):
        fn, groups = _call(body, bc, ln)
        if fn not in MODULE_CTORS:
            self.error(f"unknown module constructor {fn!r}", ln, bc)
        self.check_args(MODULE_CTORS[fn], groups, ln, bc, fn)
        kind = "module"
        if fn == "quotient" and self.env.get(groups[0][0].text) == "ring":
            kind = "basemodule"
        self.bind(name, kind, ln, nc)
        self.stmts.append(Stmt("module", name, fn, groups, ln))

    def ideal_decl(self, name, body, ln, nc, bc):
        m = re.fullmatch(r"\((.*)\)", body, re.S)
        if not m:
            self.error("expected (f, g, ...)", ln, bc)
        groups = _args(m.group(1), bc + 1, ln)
        gens = groups[0] if groups else ()
        for a in gens:
            self.poly(a, ln)
        self.bind(name, "ideal", ln, nc)
        self.stmts.append(Stmt("ideal", name, "", (tuple(gens),), ln))

    def command(self, word, rest, ln, c0, rc):
        name = word
        if word == "verify":
            sub = rest.split(None, 1)
            if not sub or sub[0] not in ("abf", "init"):
                self.error("expected 'verify abf' or 'verify init'", ln, rc)
            name = f"verify {sub[0]}"
            tail = rest[len(sub[0]):]
            rc += len(sub[0]) + (len(tail) - len(tail.lstrip()))
            rest = tail.strip()
        if name not in COMMANDS:
            self.error(f"unknown command {word!r}", ln, c0)
        override = None
        m = re.search(r"(?:^|\s)bound\s*=\s*(\S*)\s*$", rest)
        if m:
            if not re.fullmatch(r"\d+", m.group(1)) or int(m.group(1)) < 1:
                self.error("bound must be a positive integer", ln, rc + m.start(1))
            override = int(m.group(1))
            rest = rest[:m.start()]
        target = None
        m = re.search(r"\s*->\s*([^\s]+)\s*$", rest)
        if m:
            if name != "construct-mcm":
                self.error("only construct-mcm binds a result", ln, rc + m.start())
            target = (m.group(1), rc + m.start(1))
            rest = rest[:m.start()]
        sig = COMMANDS[name]
        groups = _args_ws(rest, rc, ln, len(sig) - 1 if sig[-1] == "polys" else None)
        self.check_args(COMMANDS[name], groups, ln, rc, name)
        if target:
            self.bind(target[0], "module", ln, target[1])
        self.stmts.append(Stmt("command", name, target[0] if target else "", groups, ln,
                               override))


def _args_ws(text, col0, line, nfixed=None):
    """Command arguments as one group: whitespace separated, or, when
    ``nfixed`` is given, that many words followed by a comma list."""
    items = []
    pos = 0
    words = list(re.finditer(r"\S+", text))
    if nfixed is None:
        nfixed = len(words)
    for m in words[:nfixed]:
        items.append(Arg(m.group(0), col0 + m.start()))
        pos = m.end()
    tail = text[pos:]
    if tail.strip():
        for piece, pc in _split_top(tail, col0 + pos, ","):
            if not piece:
                raise DSLError("empty argument", line, pc)
            items.append(Arg(piece, pc))
    return (tuple(items),) if items else ()


def parse_session(text):
    """Parse session text; raises :class:`DSLError` with a location."""
    return _Parser(text).parse()


def format_session(session):
    """Canonical text of a session; parsing it gives back an equal session."""
    out = []
    for s in session.statements:
        def grp(gs, sep="; "):
            return sep.join(", ".join(a.text for a in g) for g in gs)
        if s.kind == "field":
            out.append(f"field {s.name}")
        elif s.kind == "ring":
            vars_, ideal = s.args
            line = f"ring {s.name} = poly({', '.join(a.text for a in vars_)})"
            if ideal:
                line += " / (" + ", ".join(a.text for a in ideal) + ")"
            out.append(line)
        elif s.kind in ("dg", "module"):
            out.append(f"{s.kind} {s.name} = {s.head}({grp(s.args)})")
        elif s.kind == "ideal":
            out.append(f"ideal {s.name} = ({grp(s.args)})")
        elif s.kind == "bound":
            out.append(f"bound {s.name}")
        elif s.kind == "report":
            out.append(f"report {s.name}")
        else:
            args = [a.text for g in s.args for a in g]
            sig = COMMANDS[s.name]
            if sig and sig[-1] == "polys":
                nfixed = len(sig) - 1
                txt = " ".join(args[:nfixed])
                if args[nfixed:]:
                    txt += " " + ", ".join(args[nfixed:])
            else:
                txt = " ".join(args)
            line = f"{s.name} {txt}".rstrip()
            if s.head:
                line += f" -> {s.head}"
            if s.bound is not None:
                line += f" bound={s.bound}"
            out.append(line)
    return "\n".join(out) + "\n"
