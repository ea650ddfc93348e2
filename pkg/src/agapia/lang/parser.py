"""Recursive-descent parser for programs, interface types and value literals."""

from __future__ import annotations

from ..errors import ParseError
from ..iface import (
    SPATIAL,
    TEMPORAL,
    BaseT,
    BoolV,
    GroupStar,
    GroupUnion,
    IntV,
    InterfaceType,
    InterfaceValue,
    NIL_T,
    NIL_V,
    Simple,
    SimpleType,
    SimpleValue,
    StarT,
    StarV,
    TupleT,
    TupleV,
    UnionT,
)
from . import ast as A
from .lexer import Token, tokenize

_LOOP_KW = {"while_t": A.WhileT, "while_s": A.WhileS, "while_st": A.WhileST}
_PROGRAM_OPS = ("$", "%", "#")  # loosest first
_PROGRAM_NODE = {"$": A.DComp, "%": A.VSeq, "#": A.HPar}


def _describe(tok: Token) -> str:
    return "end of input" if tok.kind == "EOF" else repr(tok.text)


class Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0
        self.modules: dict[str, A.ModuleAst] = {}

    # -- token helpers -----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, *texts: str) -> bool:
        return self.tok.kind in ("OP", "KW") and self.tok.text in texts

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "EOF":
            self.i += 1
        return t

    def error(self, expected: str) -> ParseError:
        return ParseError(f"expected {expected}, found {_describe(self.tok)}", self.tok.pos)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(repr(text))
        return self.advance()

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def ident(self) -> str:
        if self.tok.kind != "IDENT":
            raise self.error("an identifier")
        return self.advance().text

    def integer(self) -> int:
        if self.tok.kind != "INT":
            raise self.error("an integer")
        return int(self.advance().text)

    def expect_eof(self):
        if self.tok.kind != "EOF":
            raise self.error("end of input")

    # -- interface types ---------------------------------------------------

    def itype(self) -> InterfaceType:
        """``;``-separated list of alternatives; a trailing ``;`` is allowed."""
        groups = list(self.ialt().groups)
        while self.at(";") and not self._ends_type(self.peek()):
            self.advance()
            groups.extend(self.ialt().groups)
        return InterfaceType(tuple(groups))

    @staticmethod
    def _ends_type(t: Token) -> bool:
        return t.kind == "EOF" or (t.kind == "OP" and t.text in (")", "}"))

    def ialt(self) -> InterfaceType:
        left = self.ituple()
        while self.accept("|"):
            right = self.ituple()
            ls, rs = _as_simple(left), _as_simple(right)
            if ls is not None and rs is not None:
                left = InterfaceType((Simple(UnionT(ls, rs)),))
            else:
                left = InterfaceType((GroupUnion(left, right),))
        return left

    def ituple(self) -> InterfaceType:
        first = self.ipostfix()
        parts = [first]
        # a comma followed by an identifier separates declarations instead
        while self.at(",") and self.peek().kind != "IDENT":
            self.advance()
            parts.append(self.ipostfix())
        if len(parts) == 1:
            return first
        items = []
        for p in parts:
            s = _as_simple(p)
            if s is None:
                raise ParseError("tuple components must be simple types", self.tok.pos)
            items.append(s)
        return InterfaceType((Simple(TupleT(tuple(items))),))

    def ipostfix(self) -> InterfaceType:
        t, grouped = self.iprimary()
        while self.accept("*"):
            s = _as_simple(t)
            if grouped or s is None:
                t = InterfaceType((GroupStar(t),))
            else:
                t = InterfaceType((Simple(StarT(s)),))
            grouped = False
        return t

    def iprimary(self) -> tuple[InterfaceType, bool]:
        tok = self.tok
        if self.accept("nil"):
            return InterfaceType((Simple(NIL_T),)), False
        if tok.kind == "KW" and tok.text in ("sn", "sb", "tn", "tb"):
            self.advance()
            return InterfaceType((Simple(BaseT(tok.text)),)), False
        if self.accept("("):
            inner = self.itype()
            grouped = False
            if self.accept(";"):
                grouped = True
            self.expect(")")
            return inner, grouped
        raise self.error("a type")

    def simple_type(self) -> SimpleType:
        pos = self.tok.pos
        t = self.ialt()
        s = _as_simple(t)
        if s is None:
            raise ParseError("expected a simple type", pos)
        return s

    # -- value literals ----------------------------------------------------

    def value_literal(self, world: str | None) -> InterfaceValue:
        items: list[SimpleValue] = []
        names: list[tuple[str, ...]] = []
        if self.tok.kind == "EOF":
            return InterfaceValue((), world)
        while True:
            name: tuple[str, ...] = ()
            if self.tok.kind == "IDENT" and self.peek().text == "=":
                name = (self.advance().text,)
                self.advance()
            v = self.simple_value()
            if self.at(","):
                comps = [v]
                while self.accept(","):
                    comps.append(self.simple_value())
                v = TupleV(tuple(comps))
            items.append(v)
            names.append(name)
            if not self.accept(";") or self.tok.kind == "EOF":
                break
        self.expect_eof()
        return InterfaceValue(tuple(items), world, tuple(names))

    def simple_value(self) -> SimpleValue:
        if self.accept("nil"):
            return NIL_V
        if self.accept("true"):
            return BoolV(True)
        if self.accept("false"):
            return BoolV(False)
        if self.accept("-"):
            return IntV(-self.integer())
        if self.tok.kind == "INT":
            return IntV(self.integer())
        if self.accept("("):
            comps = [self.simple_value()]
            while self.accept(","):
                comps.append(self.simple_value())
            self.expect(")")
            return comps[0] if len(comps) == 1 else TupleV(tuple(comps))
        if self.accept("["):
            elems = []
            if not self.at("]"):
                elems.append(self.simple_value())
                while self.accept(","):
                    elems.append(self.simple_value())
            self.expect("]")
            return StarV(tuple(elems))
        raise self.error("a value")

    # -- expressions -------------------------------------------------------

    def expr(self) -> A.Expr:
        return self.or_expr()

    def or_expr(self) -> A.Expr:
        e = self.and_expr()
        while self.accept("||"):
            e = A.BinOp("||", e, self.and_expr())
        return e

    def and_expr(self) -> A.Expr:
        e = self.cmp_expr()
        while self.accept("&&"):
            e = A.BinOp("&&", e, self.cmp_expr())
        return e

    def cmp_expr(self) -> A.Expr:
        e = self.add_expr()
        if self.tok.kind == "OP" and self.tok.text in A.COMPARE_OPS:
            op = self.advance().text
            e = A.BinOp(op, e, self.add_expr())
        return e

    def add_expr(self) -> A.Expr:
        e = self.mul_expr()
        while self.at("+", "-"):
            op = self.advance().text
            e = A.BinOp(op, e, self.mul_expr())
        return e

    def mul_expr(self) -> A.Expr:
        e = self.unary()
        while self.at("*", "/", "%"):
            op = self.advance().text
            e = A.BinOp(op, e, self.unary())
        return e

    def unary(self) -> A.Expr:
        if self.accept("!"):
            return A.Not(self.unary())
        if self.accept("-"):
            if self.tok.kind == "INT":
                return A.IntLit(-self.integer())
            return A.Neg(self.unary())
        return self.atom()

    def atom(self) -> A.Expr:
        tok = self.tok
        if tok.kind == "INT":
            return A.IntLit(self.integer())
        if self.accept("true"):
            return A.BoolLit(True)
        if self.accept("false"):
            return A.BoolLit(False)
        if tok.kind == "IDENT":
            return self.path()
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        raise self.error("an expression")

    def path(self) -> A.Var:
        name = self.ident()
        sels: list[A.Selector] = []
        while True:
            if self.accept("("):
                sels.append(A.Selector("group", self.integer()))
                self.expect(")")
            elif self.at(".", "@"):
                world = "s" if self.advance().text == "." else "t"
                if self.accept("["):
                    sels.append(A.Selector(world + "index", self.expr()))
                    self.expect("]")
                else:
                    sels.append(A.Selector(world + "field", self.integer()))
            else:
                return A.Var(name, tuple(sels))

    # -- module code -------------------------------------------------------

    def stmts(self) -> A.Stmt:
        """Statements up to (not including) the closing brace."""
        items: list[A.Stmt] = []
        while not self.at("}") and self.tok.kind != "EOF":
            if self.accept(";"):
                continue
            items.append(self.stmt())
            if not self.at("}") and self.tok.kind != "EOF":
                self.expect(";")
        return A.seq(*items) if items else A.NilStmt()

    def block_or_stmt(self) -> A.Stmt:
        if self.accept("{"):
            body = self.stmts()
            self.expect("}")
            return body
        return self.stmt()

    def stmt(self) -> A.Stmt:
        tok = self.tok
        if self.accept("nil") or self.accept("null"):
            return A.NilStmt()
        if self.accept("new"):
            name = self.ident()
            self.expect(":")
            return A.NewVar(name, self.simple_type())
        if self.accept("if"):
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            then = self.block_or_stmt()
            orelse: A.Stmt = A.NilStmt()
            if self.accept("else"):
                orelse = self.block_or_stmt()
            return A.IfStmt(cond, then, orelse)
        if self.accept("while"):
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            return A.WhileStmt(cond, self.block_or_stmt())
        if tok.kind == "IDENT":
            if self.peek().text == ":" and self.peek().kind == "OP":
                name = self.ident()
                self.advance()
                return A.NewVar(name, self.simple_type())
            target = self.path()
            if not (self.accept("=") or self.accept(":=")):
                raise self.error("'=' or ':='")
            return A.Assign(target, self.expr())
        raise self.error("a statement")

    def decls(self, keyword: str) -> tuple[tuple[str, SimpleType], ...]:
        self.expect("{")
        self.expect(keyword)
        out: list[tuple[str, SimpleType]] = []
        if self.accept("nil"):
            self.accept(";")
        else:
            while True:
                name = self.ident()
                self.expect(":")
                out.append((name, self.simple_type()))
                if not (self.accept(",") or self.accept(";")) or self.at("}"):
                    break
        self.expect("}")
        return tuple(out)

    def names(self, keyword: str) -> tuple[str, ...]:
        self.expect("{")
        self.expect(keyword)
        out: list[str] = []
        if self.accept("nil"):
            self.accept(";")
        else:
            while True:
                out.append(self.ident())
                if not (self.accept(",") or self.accept(";")) or self.at("}"):
                    break
        self.expect("}")
        return tuple(out)

    def module_def(self) -> A.ModuleAst:
        self.expect("module")
        pos = self.tok.pos
        name = self.ident()
        if name in self.modules:
            raise ParseError(f"module {name} defined twice", pos)
        listen = self.decls("listen")
        read = self.decls("read")
        self.expect("{")
        body = self.stmts()
        self.expect("}")
        speak = self.names("speak")
        write = self.names("write")
        m = A.ModuleAst(name, listen, read, body, speak, write, pos)
        self.modules[name] = m
        return m

    # -- programs ----------------------------------------------------------

    def program(self, level: int = 0) -> A.Program:
        if level == len(_PROGRAM_OPS):
            return self.program_atom()
        op = _PROGRAM_OPS[level]
        p = self.program(level + 1)
        while self.at(op):
            pos = self.advance().pos
            p = _PROGRAM_NODE[op](p, self.program(level + 1), pos)
        return p

    def program_atom(self) -> A.Program:
        tok = self.tok
        if self.accept("nil"):
            return A.NilProg()
        if tok.kind == "IDENT":
            self.advance()
            if tok.text not in self.modules:
                raise ParseError(f"undefined module {tok.text}", tok.pos)
            return A.ModuleRef(self.modules[tok.text], tok.pos)
        if self.accept("("):
            p = self.program()
            self.expect(")")
            return p
        if self.accept("if"):
            cond = self.guard()
            then = self.braced_program()
            self.expect("else")
            return A.IfProg(cond, then, self.braced_program(), tok.pos)
        if tok.kind == "KW" and tok.text in _LOOP_KW:
            self.advance()
            cond = self.guard()
            return _LOOP_KW[tok.text](cond, self.braced_program(), tok.pos)
        raise self.error("a program")

    def guard(self) -> A.Expr:
        self.expect("(")
        cond = self.expr()
        self.expect(")")
        return cond

    def braced_program(self) -> A.Program:
        self.expect("{")
        p = self.program()
        self.expect("}")
        return p

    def source(self) -> A.Source:
        while self.at("module"):
            self.module_def()
        prog: A.Program = A.NilProg()
        if self.tok.kind != "EOF":
            prog = self.program()
        self.expect_eof()
        return A.Source(prog, tuple(self.modules.values()))


def _as_simple(t: InterfaceType) -> SimpleType | None:
    if len(t.groups) == 1 and isinstance(t.groups[0], Simple):
        return t.groups[0].type
    return None


def parse(source: str) -> A.Source:
    """Parse a whole ``.agapia`` file."""
    return Parser(tokenize(source)).source()


def parse_program(source: str) -> A.Program:
    return parse(source).program


def parse_expr(text: str) -> A.Expr:
    p = Parser(tokenize(text))
    e = p.expr()
    p.expect_eof()
    return e


def parse_stmt(text: str) -> A.Stmt:
    p = Parser(tokenize(text))
    s = p.stmts()
    p.expect_eof()
    return s


def parse_type(text: str, world: str | None = None) -> InterfaceType:
    """Parse an interface type such as ``sn;(sn,sb)*;(tn;)*``."""
    p = Parser(tokenize(text))
    if p.tok.kind == "EOF":
        return InterfaceType((), world)
    t = p.itype()
    p.accept(";")
    p.expect_eof()
    return InterfaceType(t.groups, world) if world is not None else t


def parse_simple_type(text: str) -> SimpleType:
    p = Parser(tokenize(text))
    t = p.simple_type()
    p.expect_eof()
    return t


def parse_value(text: str, world: str | None = None) -> InterfaceValue:
    """Parse a value literal such as ``x=6;nil;(1,true);[1,2]``."""
    return Parser(tokenize(text)).value_literal(world)


def parse_spatial_value(text: str) -> InterfaceValue:
    return parse_value(text, SPATIAL)


def parse_temporal_value(text: str) -> InterfaceValue:
    return parse_value(text, TEMPORAL)
