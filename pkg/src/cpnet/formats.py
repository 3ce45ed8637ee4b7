"""Line-oriented text formats for CP-nets and games.

CP-net documents::

    domain A = a, abar
    parents A = D
    cpt A:
      [D=d] : a > abar
      [D=dbar] : a > abar

Game documents declare players and then either explicit orders::

    player P1 = C1, N1
    prefs P1 | P2=C2 : N1 > C1

or a payoff table converted to orders per opponent profile::

    payoffs:
      (C1, C2) = 3, 3

``#`` starts a comment.  Serializers emit a canonical form that parses back
to an equal value.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod

from .core import (
    DEFAULT_MAX_TABLE_ROWS,
    NAME_RE,
    VALUE_RE,
    CPNet,
    CPNetError,
    decode,
    encode,
    validate,
)
from .game import Game, InvalidGameError, check_game, from_payoffs, opponents_of


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    kind: str
    message: str

    def __str__(self):
        return f"line {self.line}:{self.col}: {self.message}"


class DocumentError(CPNetError, ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = sorted(diagnostics, key=lambda d: (d.line, d.col))
        super().__init__("\n".join(str(d) for d in self.diagnostics))

    @property
    def size_limited(self) -> bool:
        return bool(self.diagnostics) and all(d.kind == "table-too-large" for d in self.diagnostics)


_KEYWORD = re.compile(r"\s*(domain|parents|cpt|player|prefs|payoffs)\b")


def _strip(raw: str) -> str:
    cut = raw.find("#")
    return (raw if cut < 0 else raw[:cut]).rstrip()


def _split(text: str, start: int, sep: str) -> list:
    """Split ``text`` on ``sep``; yields ``(token, 1-based column)`` pairs."""
    out = []
    pos = 0
    for part in text.split(sep):
        lead = len(part) - len(part.lstrip())
        out.append((part.strip(), start + pos + lead + 1))
        pos += len(part) + len(sep)
    return out


class _Collector:
    def __init__(self):
        self.diags = []

    def error(self, line, col, message, kind="syntax"):
        self.diags.append(Diagnostic(line, max(col, 1), kind, message))


def _tokens(c: _Collector, line: int, text: str, start: int, sep: str, pattern, what: str) -> list:
    items = _split(text, start, sep)
    good = []
    for tok, col in items:
        if not tok:
            c.error(line, col, f"empty {what}")
        elif not pattern.match(tok):
            c.error(line, col, f"invalid {what} {tok!r}")
        else:
            good.append((tok, col))
    return good


def _assignments(c: _Collector, line: int, text: str, start: int) -> list | None:
    """Parse ``N1=v1, N2=v2``; an all-blank text means no assignments."""
    if not text.strip():
        return []
    out = []
    ok = True
    for part, col in _split(text, start, ","):
        name, eq, value = part.partition("=")
        name, value = name.strip(), value.strip()
        if not eq or not NAME_RE.match(name) or not VALUE_RE.match(value):
            c.error(line, col, f"expected Name=value, got {part!r}")
            ok = False
            continue
        out.append((name, value, col))
    return out if ok else None


# CP-nets -----------------------------------------------------------------

_DOMAIN = re.compile(r"\s*domain\s+(?P<var>[^\s=]*)\s*=(?P<vals>.*)$")
_PARENTS = re.compile(r"\s*parents\s+(?P<var>[^\s=]*)\s*(?:=(?P<list>.*))?$")
_CPT = re.compile(r"\s*cpt\s+(?P<var>[^\s:]*)\s*:\s*$")
_ROW = re.compile(r"\s*(?:\[(?P<cond>[^\]]*)\]\s*)?:(?P<rank>.*)$")


def parse_cpnet(text: str, max_rows: int = DEFAULT_MAX_TABLE_ROWS) -> CPNet:
    """Parse a CP-net document or raise :class:`DocumentError`."""
    c = _Collector()
    domains = {}     # name -> (values, line, col)
    parents = {}     # name -> ([(parent, col)], line)
    cpts = {}        # name -> [header line, [(cond, ranking, line, col)]]
    current = None

    for lineno, raw in enumerate(text.split("\n"), 1):
        line = _strip(raw)
        if not line.strip():
            continue
        kw = _KEYWORD.match(line)
        if kw and kw.group(1) == "domain":
            current = None
            m = _DOMAIN.match(line)
            if not m:
                c.error(lineno, 1, "expected 'domain Name = v1, v2, ...'")
                continue
            var = m.group("var")
            if not NAME_RE.match(var):
                c.error(lineno, m.start("var") + 1, f"invalid variable name {var!r}")
                continue
            vals = _tokens(c, lineno, m.group("vals"), m.start("vals"), ",", VALUE_RE, "value")
            if var in domains:
                c.error(lineno, m.start("var") + 1, f"variable {var} declared twice", "duplicate-name")
                continue
            seen = set()
            for tok, col in vals:
                if tok in seen:
                    c.error(lineno, col, f"value {tok!r} repeated in domain of {var}", "duplicate-value")
                seen.add(tok)
            domains[var] = (list(dict.fromkeys(t for t, _ in vals)), lineno, m.start("var") + 1)
        elif kw and kw.group(1) == "parents":
            current = None
            m = _PARENTS.match(line)
            if not m or not NAME_RE.match(m.group("var") or ""):
                c.error(lineno, 1, "expected 'parents Name = P1, P2, ...'")
                continue
            var = m.group("var")
            body = m.group("list") or ""
            offset = m.start("list") if m.group("list") is not None else len(line)
            stripped = body.strip()
            if stripped.startswith("[") and stripped.endswith("]"):
                offset += body.index("[") + 1
                body = stripped[1:-1]
            if var in parents:
                c.error(lineno, m.start("var") + 1, f"parents of {var} declared twice", "duplicate-name")
                continue
            toks = _tokens(c, lineno, body, offset, ",", NAME_RE, "parent") if body.strip() else []
            parents[var] = (toks, lineno)
        elif kw and kw.group(1) == "cpt":
            m = _CPT.match(line)
            if not m or not NAME_RE.match(m.group("var")):
                c.error(lineno, 1, "expected 'cpt Name:'")
                current = None
                continue
            var = m.group("var")
            if var in cpts:
                c.error(lineno, m.start("var") + 1, f"second cpt block for {var}", "duplicate-name")
                current = None
                continue
            cpts[var] = [lineno, []]
            current = var
        elif kw:
            c.error(lineno, kw.start(1) + 1, f"keyword {kw.group(1)!r} is not valid in a CP-net document")
        else:
            m = _ROW.match(line)
            if not m:
                c.error(lineno, 1, "unrecognised line")
                continue
            if current is None:
                c.error(lineno, 1, "preference row outside a cpt block")
                continue
            cond_text = m.group("cond") or ""
            cond_start = m.start("cond") if m.group("cond") is not None else 0
            cond = _assignments(c, lineno, cond_text, cond_start)
            ranking = _tokens(c, lineno, m.group("rank"), m.start("rank"), ">", VALUE_RE, "value")
            if cond is None or not ranking:
                if not ranking:
                    c.error(lineno, m.start("rank") + 1, "empty ranking")
                continue
            cpts[current][1].append((cond, ranking, lineno, m.start() + 1))

    if not domains and not c.diags:
        c.error(1, 1, "no variables declared", "empty")
    if c.diags:
        raise DocumentError(c.diags)
    return _resolve_cpnet(c, domains, parents, cpts, max_rows)


def _resolve_cpnet(c, domains, parents, cpts, max_rows) -> CPNet:
    names = tuple(domains)
    index = {x: i for i, x in enumerate(names)}
    for var, (_, line) in parents.items():
        if var not in index:
            c.error(line, 1, f"parents declared for undeclared variable {var}", "bad-parent")
    for var, (line, _) in cpts.items():
        if var not in index:
            c.error(line, 1, f"cpt for undeclared variable {var}", "bad-parent")

    par_idx = []
    for var in names:
        toks, line = parents.get(var, ([], domains[var][1]))
        ps = []
        for p, col in toks:
            if p not in index:
                c.error(line, col, f"unknown parent {p} of {var}", "bad-parent")
            elif p == var:
                c.error(line, col, f"{var} cannot be its own parent", "bad-parent")
            elif index[p] in ps:
                c.error(line, col, f"parent {p} listed twice for {var}", "bad-parent")
            else:
                ps.append(index[p])
        par_idx.append(tuple(sorted(ps)))

    rows_out = []
    for i, var in enumerate(names):
        values, dline, dcol = domains[var]
        ps = par_idx[i]
        psizes = [len(domains[names[p]][0]) for p in ps]
        count = prod(psizes)
        if count > max_rows:
            c.error(dline, dcol, f"table for {var} needs {count} rows, limit {max_rows}", "table-too-large")
            rows_out.append(())
            continue
        if var not in cpts:
            c.error(dline, dcol, f"no cpt block for {var}", "missing-row")
            rows_out.append(())
            continue
        header, rows = cpts[var]
        table = [None] * count
        for cond, ranking, line, col in rows:
            key = _row_key(c, var, names, domains, ps, cond, line, col)
            order = _row_ranking(c, var, values, ranking, line)
            if key is None or order is None:
                continue
            if table[key] is not None:
                c.error(line, col, f"duplicate row for {var}", "duplicate-row")
                continue
            table[key] = order
        for key, r in enumerate(table):
            if r is None:
                digits = decode(key, psizes)
                label = ", ".join(f"{names[p]}={domains[names[p]][0][d]}" for p, d in zip(ps, digits))
                c.error(header, 1, f"missing row [{label}] for {var}", "missing-row")
        rows_out.append(tuple(table))
    if c.diags:
        raise DocumentError(c.diags)
    net = CPNet(names, tuple(tuple(domains[x][0]) for x in names), tuple(par_idx), tuple(rows_out))
    leftover = validate(net, max_rows)
    if leftover:  # pragma: no cover - resolution checks cover every invariant
        raise DocumentError([Diagnostic(1, 1, v.kind, str(v)) for v in leftover])
    return net


def _row_key(c, var, names, domains, ps, cond, line, col):
    expected = {names[p] for p in ps}
    given = {}
    ok = True
    for name, value, vcol in cond:
        if name not in expected:
            c.error(line, vcol, f"{name} is not a parent of {var}", "bad-row")
            ok = False
        elif name in given:
            c.error(line, vcol, f"{name} assigned twice", "bad-row")
            ok = False
        elif value not in domains[name][0]:
            c.error(line, vcol, f"{value!r} is not in the domain of {name}", "bad-row")
            ok = False
        else:
            given[name] = value
    if not ok:
        return None
    if set(given) != expected:
        missing = ", ".join(sorted(expected - set(given)))
        c.error(line, col, f"row for {var} does not assign parents: {missing}", "bad-row")
        return None
    digits = [domains[names[p]][0].index(given[names[p]]) for p in ps]
    return encode(digits, [len(domains[names[p]][0]) for p in ps])


def _row_ranking(c, var, values, ranking, line):
    seen = []
    ok = True
    for tok, col in ranking:
        if tok not in values:
            c.error(line, col, f"{tok!r} is not in the domain of {var}", "non-permutation")
            ok = False
        elif tok in seen:
            c.error(line, col, f"{tok!r} ranked twice", "non-permutation")
            ok = False
        else:
            seen.append(tok)
    if ok and len(seen) != len(values):
        missing = ", ".join(v for v in values if v not in seen)
        c.error(line, ranking[0][1], f"ranking for {var} omits {missing}", "non-permutation")
        ok = False
    return tuple(values.index(t) for t in seen) if ok else None


def serialize_cpnet(net: CPNet) -> str:
    """Canonical text: domains in variable order, then one block per variable."""
    net = net.canonical()
    out = [f"domain {x} = {', '.join(net.domains[i])}" for i, x in enumerate(net.names)]
    for i, x in enumerate(net.names):
        out.append("")
        ps = net.parents[i]
        if ps:
            out.append(f"parents {x} = {', '.join(net.names[p] for p in ps)}")
        out.append(f"cpt {x}:")
        psizes = net.parent_sizes(i)
        for key, ranking in enumerate(net.rows[i]):
            order = " > ".join(net.domains[i][v] for v in ranking)
            if ps:
                digits = decode(key, psizes)
                cond = ", ".join(f"{net.names[p]}={net.domains[p][d]}" for p, d in zip(ps, digits))
                out.append(f"  [{cond}] : {order}")
            else:
                out.append(f"  : {order}")
    return "\n".join(out) + "\n"


# games -------------------------------------------------------------------

_PLAYER = re.compile(r"\s*player\s+(?P<name>[^\s=]*)\s*=(?P<vals>.*)$")
_PREFS = re.compile(r"\s*prefs\s+(?P<name>[^\s|]*)\s*\|(?P<cond>[^:]*):(?P<rank>.*)$")
_PAYOFFS = re.compile(r"\s*payoffs\s*:\s*$")
_PAYROW = re.compile(r"\s*\((?P<profile>[^)]*)\)\s*=(?P<vals>.*)$")
_NUMBER = re.compile(r"[-+]?(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?(/\d+)?\Z")


def parse_game(text: str) -> Game:
    """Parse a game document or raise :class:`DocumentError`."""
    c = _Collector()
    players = {}    # name -> (strategies, line, col)
    prefs = []      # (player, cond, ranking, line, col)
    payoff_rows = []  # (profile tokens, values, line)
    payoff_line = None
    in_payoffs = False

    for lineno, raw in enumerate(text.split("\n"), 1):
        line = _strip(raw)
        if not line.strip():
            continue
        kw = _KEYWORD.match(line)
        if kw:
            in_payoffs = False
        if kw and kw.group(1) == "player":
            m = _PLAYER.match(line)
            if not m or not NAME_RE.match(m.group("name")):
                c.error(lineno, 1, "expected 'player Name = s1, s2, ...'")
                continue
            name = m.group("name")
            toks = _tokens(c, lineno, m.group("vals"), m.start("vals"), ",", VALUE_RE, "strategy")
            if name in players:
                c.error(lineno, m.start("name") + 1, f"player {name} declared twice", "duplicate-name")
                continue
            strategies = list(dict.fromkeys(t for t, _ in toks))
            if len(strategies) != len(toks):
                c.error(lineno, m.start("vals") + 1, f"player {name} repeats a strategy", "duplicate-value")
            players[name] = (strategies, lineno, m.start("name") + 1)
        elif kw and kw.group(1) == "prefs":
            m = _PREFS.match(line)
            if not m or not NAME_RE.match(m.group("name")):
                c.error(lineno, 1, "expected 'prefs Name | Opp=s, ... : s1 > s2 ...'")
                continue
            cond = _assignments(c, lineno, m.group("cond"), m.start("cond"))
            ranking = _tokens(c, lineno, m.group("rank"), m.start("rank"), ">", VALUE_RE, "strategy")
            if cond is not None and ranking:
                prefs.append((m.group("name"), cond, ranking, lineno, m.start("name") + 1))
        elif kw and kw.group(1) == "payoffs":
            if not _PAYOFFS.match(line):
                c.error(lineno, 1, "expected 'payoffs:'")
                continue
            if payoff_line is not None:
                c.error(lineno, 1, "second payoffs block")
                continue
            payoff_line = lineno
            in_payoffs = True
        elif kw:
            c.error(lineno, kw.start(1) + 1, f"keyword {kw.group(1)!r} is not valid in a game document")
        else:
            m = _PAYROW.match(line)
            if not m:
                c.error(lineno, 1, "unrecognised line")
                continue
            if not in_payoffs:
                c.error(lineno, 1, "payoff row outside a payoffs block")
                continue
            profile = _tokens(c, lineno, m.group("profile"), m.start("profile"), ",", VALUE_RE, "strategy")
            values = []
            for tok, col in _split(m.group("vals"), m.start("vals"), ","):
                if not _NUMBER.match(tok):
                    c.error(lineno, col, f"invalid payoff {tok!r}")
                    values = None
                    break
                try:
                    values.append(Fraction(tok))
                except (ValueError, ZeroDivisionError):
                    c.error(lineno, col, f"invalid payoff {tok!r}")
                    values = None
                    break
            if values is not None:
                payoff_rows.append((profile, values, lineno))

    if not players and not c.diags:
        c.error(1, 1, "no players declared", "empty")
    if prefs and payoff_line is not None:
        c.error(payoff_line, 1, "a game uses either prefs lines or a payoffs block, not both")
    if c.diags:
        raise DocumentError(c.diags)
    if payoff_line is not None:
        return _resolve_payoffs(c, players, payoff_rows, payoff_line)
    return _resolve_prefs(c, players, prefs)


def _resolve_prefs(c, players, prefs) -> Game:
    names = tuple(players)
    strategies = [players[x][0] for x in names]
    sizes = [len(s) for s in strategies]
    tables = [[None] * prod(opponents_of(sizes, i)) for i in range(len(names))]
    for who, cond, ranking, line, col in prefs:
        if who not in players:
            c.error(line, col, f"prefs for undeclared player {who}")
            continue
        i = names.index(who)
        opp = [j for j in range(len(names)) if j != i]
        given = {}
        ok = True
        for name, value, vcol in cond:
            if name not in players or name == who:
                c.error(line, vcol, f"{name} is not an opponent of {who}")
                ok = False
            elif name in given:
                c.error(line, vcol, f"{name} assigned twice")
                ok = False
            elif value not in players[name][0]:
                c.error(line, vcol, f"{value!r} is not a strategy of {name}")
                ok = False
            else:
                given[name] = value
        if ok and len(given) != len(opp):
            missing = ", ".join(names[j] for j in opp if names[j] not in given)
            c.error(line, col, f"profile for {who} does not assign {missing}")
            ok = False
        order = _row_ranking(c, who, strategies[i], ranking, line)
        if not ok or order is None:
            continue
        key = encode([players[names[j]][0].index(given[names[j]]) for j in opp], [sizes[j] for j in opp])
        if tables[i][key] is not None:
            c.error(line, col, f"duplicate order for {who} at this profile")
            continue
        tables[i][key] = order
    for i, who in enumerate(names):
        opp_sizes = opponents_of(sizes, i)
        for key, r in enumerate(tables[i]):
            if r is None:
                digits = decode(key, opp_sizes)
                opp = [j for j in range(len(names)) if j != i]
                label = ", ".join(f"{names[j]}={strategies[j][d]}" for j, d in zip(opp, digits))
                c.error(players[who][1], 1, f"incomplete profile coverage: no order for {who} at ({label})",
                        "missing-row")
    if c.diags:
        raise DocumentError(c.diags)
    return check_game(Game(names, tuple(tuple(s) for s in strategies), tuple(tuple(t) for t in tables)))


def _resolve_payoffs(c, players, rows, header) -> Game:
    names = tuple(players)
    strategies = [players[x][0] for x in names]
    n = len(names)
    table = {}
    for profile, values, line in rows:
        if len(profile) != n:
            c.error(line, 1, f"profile needs {n} strategies, got {len(profile)}")
            continue
        if len(values) != n:
            c.error(line, 1, f"expected {n} payoffs, got {len(values)}")
            continue
        idx = []
        for j, (tok, col) in enumerate(profile):
            if tok not in strategies[j]:
                c.error(line, col, f"{tok!r} is not a strategy of {names[j]}")
                break
            idx.append(strategies[j].index(tok))
        else:
            if tuple(idx) in table:
                c.error(line, 1, "duplicate payoff row")
                continue
            table[tuple(idx)] = values
    if c.diags:
        raise DocumentError(c.diags)
    for s in product(*(range(len(x)) for x in strategies)):
        if s not in table:
            label = ", ".join(strategies[j][v] for j, v in enumerate(s))
            c.error(header, 1, f"incomplete profile coverage: no payoffs for ({label})", "missing-row")
    if c.diags:
        raise DocumentError(c.diags)
    try:
        return from_payoffs(names, strategies, table)
    except InvalidGameError as exc:
        raise DocumentError([Diagnostic(header, 1, "tie", str(exc))]) from None


def serialize_game(g: Game) -> str:
    out = [f"player {p} = {', '.join(g.strategies[i])}" for i, p in enumerate(g.players)]
    out.append("")
    for i, p in enumerate(g.players):
        opp = [j for j in range(g.n) if j != i]
        opp_sizes = g.opponent_sizes(i)
        for key, ranking in enumerate(g.prefs[i]):
            digits = decode(key, opp_sizes)
            cond = ", ".join(f"{g.players[j]}={g.strategies[j][d]}" for j, d in zip(opp, digits))
            order = " > ".join(g.strategies[i][v] for v in ranking)
            out.append(f"prefs {p} | {cond} : {order}")
    return "\n".join(out) + "\n"
