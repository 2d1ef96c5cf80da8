"""Textual front end: the algebra-description format and the module
expression mini-language.

Algebra files are line oriented with '#' comments:

    field 32003
    vertices 1 2 3
    arrow a 1 2            # name source target
    rel g*d*b              # paths compose right to left
    rel g*a - g*b*a        # signed sums of parallel paths, optional
    rel 2*a*b + 3*c*d      #   integer coefficients

Module expressions denote direct sums, syzygies and named atoms:

    omega^1(D(2)) + omega^2(D(1))
    radq(1) + radq(2)
    S(1) + P(3) + Q(2) + mt(5)
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .algebra import Arrow, Quiver, Relation, build_algebra
from .errors import (IndexOutOfRange, MissingContext, NonParallelRelation,
                     ParseError, UnknownArrow)
from .modules import Module, direct_sum, syzygy, zero_module


# --- algebra files ---

@dataclass
class AlgebraSpec:
    prime: int
    vertex_count: int
    arrows: list[tuple[str, int, int]]
    relations: list[list[tuple[int, tuple[str, ...]]]]
    # relation terms keep function-order names (leftmost acts last)

    def with_prime(self, p: int) -> "AlgebraSpec":
        return AlgebraSpec(p, self.vertex_count, list(self.arrows),
                           [list(r) for r in self.relations])


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT = re.compile(r"\d+")


def _tokenize_rel(text: str, lineno: int):
    tokens = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch in "+-*":
            tokens.append((ch, pos))
            pos += 1
            continue
        m = _INT.match(text, pos)
        if m:
            tokens.append((int(m.group()), pos))
            pos = m.end()
            continue
        m = _IDENT.match(text, pos)
        if m:
            tokens.append((m.group(), pos))
            pos = m.end()
            continue
        raise ParseError(f"line {lineno}: unexpected character {ch!r}",
                         line=lineno, column=pos + 1, expected="term")
    return tokens


def _parse_rel_expr(text: str, lineno: int, col0: int,
                    arrow_names: set[str]) -> list[tuple[int, tuple[str, ...]]]:
    tokens = _tokenize_rel(text, lineno)
    terms: list[tuple[int, tuple[str, ...]]] = []
    i = 0
    sign = 1
    n = len(tokens)

    def err(msg, expected, at=None):
        column = col0 + (tokens[at][1] if at is not None and at < n else len(text)) + 1
        raise ParseError(f"line {lineno}: {msg}", line=lineno,
                         column=column, expected=expected)

    while i < n:
        coeff = sign
        tok, _ = tokens[i]
        if isinstance(tok, int):
            if i + 1 >= n or tokens[i + 1][0] != "*":
                err("coefficient must be followed by '*path'", "*", i + 1)
            coeff = sign * tok
            i += 2
        names = []
        expect_name = True
        while i < n:
            tok, _ = tokens[i]
            if expect_name:
                if not isinstance(tok, str) or tok in "+-*":
                    err("expected an arrow name", "identifier", i)
                if tok not in arrow_names:
                    raise UnknownArrow(
                        f"line {lineno}: unknown arrow {tok!r}", line=lineno)
                names.append(tok)
                i += 1
                expect_name = False
            elif tok == "*":
                i += 1
                expect_name = True
            else:
                break
        if expect_name:
            err("dangling '*'", "identifier", i)
        if len(names) < 2:
            raise ParseError(
                f"line {lineno}: path {'*'.join(names)} has length "
                f"{len(names)} < 2 (relations must lie in rad^2)",
                line=lineno, expected="path of length >= 2")
        terms.append((coeff, tuple(names)))
        if i < n:
            tok, _ = tokens[i]
            if tok == "+":
                sign = 1
            elif tok == "-":
                sign = -1
            else:
                err("expected '+' or '-' between terms", "+ or -", i)
            i += 1
            if i == n:
                err("trailing sign", "term", None)
    if not terms:
        raise ParseError(f"line {lineno}: empty relation", line=lineno,
                         expected="term")
    return terms


def parse_algebra_file(text: str) -> AlgebraSpec:
    prime = None
    vertex_count = None
    arrows: list[tuple[str, int, int]] = []
    arrow_names: set[str] = set()
    relations: list[list[tuple[int, tuple[str, ...]]]] = []
    stage = 0  # 0: field, 1: vertices, 2: arrows/rels

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        if head == "field":
            if stage != 0:
                raise ParseError(f"line {lineno}: 'field' must come first",
                                 line=lineno, expected="vertices")
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError(f"line {lineno}: usage: field <prime>",
                                 line=lineno, expected="prime")
            prime = int(parts[1])
            stage = 1
        elif head == "vertices":
            if stage != 1:
                raise ParseError(
                    f"line {lineno}: 'vertices' must follow 'field'",
                    line=lineno, expected="field first" if stage == 0 else "arrow/rel")
            try:
                nums = [int(x) for x in parts[1:]]
            except ValueError:
                raise ParseError(f"line {lineno}: vertices must be integers",
                                 line=lineno, expected="int+") from None
            if not nums or nums != list(range(1, len(nums) + 1)):
                raise ParseError(
                    f"line {lineno}: vertices must be 1..n in order",
                    line=lineno, expected="1 2 ... n")
            vertex_count = len(nums)
            stage = 2
        elif head == "arrow":
            if stage != 2:
                raise ParseError(f"line {lineno}: arrows come after vertices",
                                 line=lineno, expected="field/vertices first")
            if len(parts) != 4:
                raise ParseError(f"line {lineno}: usage: arrow <name> <src> <tgt>",
                                 line=lineno, expected="arrow name int int")
            name = parts[1]
            try:
                src, tgt = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"line {lineno}: endpoints must be integers",
                                 line=lineno, expected="int int") from None
            if not _IDENT.fullmatch(name):
                raise ParseError(f"line {lineno}: bad arrow name {name!r}",
                                 line=lineno, expected="identifier")
            if name in arrow_names:
                raise ParseError(f"line {lineno}: duplicate arrow {name!r}",
                                 line=lineno, expected="fresh name")
            if not (1 <= src <= vertex_count and 1 <= tgt <= vertex_count):
                raise ParseError(f"line {lineno}: endpoint out of range",
                                 line=lineno, expected=f"1..{vertex_count}")
            arrows.append((name, src, tgt))
            arrow_names.add(name)
        elif head == "rel":
            if stage != 2:
                raise ParseError(f"line {lineno}: relations come after vertices",
                                 line=lineno, expected="field/vertices first")
            col0 = raw.index("rel") + 3
            body = line[3:].strip()
            terms = _parse_rel_expr(body, lineno, col0, arrow_names)
            # parallelism check needs endpoints
            by_name = {nm: (s, t) for nm, s, t in arrows}
            ends = None
            for _, names in terms:
                src = by_name[names[-1]][0]
                tgt = by_name[names[0]][1]
                cur = src
                for nm in reversed(names):
                    s, t = by_name[nm]
                    if s != cur:
                        raise NonParallelRelation(
                            f"line {lineno}: path {'*'.join(names)} is not "
                            "composable", line=lineno)
                    cur = t
                if ends is None:
                    ends = (src, tgt)
                elif ends != (src, tgt):
                    raise NonParallelRelation(
                        f"line {lineno}: terms are not parallel", line=lineno)
            relations.append(terms)
        else:
            raise ParseError(f"line {lineno}: unknown directive {head!r}",
                             line=lineno,
                             expected="field, vertices, arrow or rel")
    if prime is None:
        raise ParseError("missing 'field' line", expected="field <prime>")
    if vertex_count is None:
        raise ParseError("missing 'vertices' line", expected="vertices 1..n")
    return AlgebraSpec(prime, vertex_count, arrows, relations)


def render_algebra_spec(spec: AlgebraSpec) -> str:
    lines = [f"field {spec.prime}",
             "vertices " + " ".join(str(i) for i in range(1, spec.vertex_count + 1))]
    for name, src, tgt in spec.arrows:
        lines.append(f"arrow {name} {src} {tgt}")
    for terms in spec.relations:
        parts = []
        for k, (coeff, names) in enumerate(terms):
            path = "*".join(names)
            mag = abs(coeff)
            body = path if mag == 1 else f"{mag}*{path}"
            if k == 0:
                parts.append(body if coeff > 0 else f"- {body}")
            else:
                parts.append(("+ " if coeff > 0 else "- ") + body)
        lines.append("rel " + " ".join(parts))
    return "\n".join(lines) + "\n"


def build_from_spec(spec: AlgebraSpec, length_cap: int = 32):
    quiver = Quiver(spec.vertex_count,
                    tuple(Arrow(n, s, t) for n, s, t in spec.arrows))
    rels = []
    for terms in spec.relations:
        rels.append(Relation(tuple(
            (coeff, tuple(reversed(names))) for coeff, names in terms)))
    return build_algebra(quiver, rels, p=spec.prime, length_cap=length_cap)


# --- module expressions ---

@dataclass
class ExprSum:
    parts: list


@dataclass
class ExprOmega:
    power: int
    inner: object


@dataclass
class ExprAtom:
    kind: str      # "S" | "P" | "D" | "Q" | "radq"
    index: int


@dataclass
class ExprCall:
    name: str
    args: list[int]


_EXPR_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([()^+,])|(.))")


def _tokenize_expr(text: str):
    tokens = []
    for m in _EXPR_TOKEN.finditer(text):
        num, ident, punct, bad = m.groups()
        if bad is not None and bad.strip():
            raise ParseError(f"unexpected character {bad!r} in module "
                             f"expression", column=m.start() + 1)
        if num is not None:
            tokens.append(("int", int(num), m.start()))
        elif ident is not None:
            tokens.append(("ident", ident, m.start()))
        elif punct is not None:
            tokens.append((punct, punct, m.start()))
    return tokens


class _ExprParser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize_expr(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, kind=None):
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of module expression "
                             f"{self.text!r}", expected=kind or "token")
        if kind is not None and tok[0] != kind:
            raise ParseError(
                f"expected {kind} at column {tok[2] + 1} in {self.text!r}",
                column=tok[2] + 1, expected=kind)
        self.pos += 1
        return tok

    def parse(self):
        expr = self.sum()
        if self.peek() is not None:
            tok = self.peek()
            raise ParseError(f"trailing input at column {tok[2] + 1} in "
                             f"{self.text!r}", column=tok[2] + 1)
        return expr

    def sum(self):
        parts = [self.factor()]
        while self.peek() and self.peek()[0] == "+":
            self.take("+")
            parts.append(self.factor())
        return parts[0] if len(parts) == 1 else ExprSum(parts)

    def factor(self):
        tok = self.take("ident")
        name = tok[1]
        if name == "omega":
            self.take("^")
            power = self.take("int")[1]
            self.take("(")
            inner = self.sum()
            self.take(")")
            return ExprOmega(power, inner)
        self.take("(")
        args = []
        if self.peek() and self.peek()[0] == "int":
            args.append(self.take("int")[1])
            while self.peek() and self.peek()[0] == ",":
                self.take(",")
                args.append(self.take("int")[1])
        self.take(")")
        if name in ("S", "P", "D", "Q", "radq"):
            if len(args) != 1:
                raise ParseError(f"{name}(...) takes one integer argument")
            return ExprAtom(name, args[0])
        return ExprCall(name, args)


def parse_module_expr(text: str):
    return _ExprParser(text).parse()


@dataclass
class EvalContext:
    algebra: object
    system: object = None            # StratSystem for D(i) re-use
    epss: object = None              # Epss for Q(i)
    corpus_builders: dict = field(default_factory=dict)


def eval_module_expr(expr, ctx: EvalContext) -> Module:
    from .algebra import projective, radical_power_quotient, simple
    from .strat import standard_modules

    alg = ctx.algebra
    n = alg.quiver.vertex_count
    if isinstance(expr, ExprSum):
        return direct_sum([eval_module_expr(e, ctx) for e in expr.parts],
                          algebra=alg)
    if isinstance(expr, ExprOmega):
        return syzygy(eval_module_expr(expr.inner, ctx), expr.power)
    if isinstance(expr, ExprAtom):
        if expr.kind == "radq":
            if expr.index < 1:
                raise IndexOutOfRange("radq(k) needs k >= 1")
            return radical_power_quotient(alg, expr.index)
        if not 1 <= expr.index <= n:
            raise IndexOutOfRange(
                f"{expr.kind}({expr.index}): index out of range 1..{n}")
        if expr.kind == "S":
            return simple(alg, expr.index)
        if expr.kind == "P":
            return projective(alg, expr.index)
        if expr.kind == "D":
            if ctx.system is not None:
                return ctx.system.module(expr.index)
            return standard_modules(alg)[expr.index - 1]
        if expr.kind == "Q":
            if ctx.epss is None:
                raise MissingContext("Q(i) needs an epss in context")
            if not 1 <= expr.index <= ctx.epss.system.size:
                raise IndexOutOfRange(f"Q({expr.index}): out of range")
            return ctx.epss.module(expr.index)
    if isinstance(expr, ExprCall):
        fn = ctx.corpus_builders.get(expr.name)
        if fn is None:
            raise MissingContext(
                f"no builder named {expr.name!r} in this context")
        return fn(*expr.args)
    raise TypeError(f"not a module expression: {expr!r}")
