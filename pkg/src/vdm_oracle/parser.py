"""Recursive-descent parser for the VDM++ subset.

Grammar (``{x}`` repeats, ``[x]`` optional; keywords case-insensitive)::

    document   = {typedef} class {{typedef} class}
    class      = "class" ID ["is subclass of" ID {"," ID}] {member | section}
                 "end" ID
    member     = [access] ID "=" type [";"]              -- state variable
               | "inv" ID "(" ID ")" "==" expr           -- class invariant
    section    = "types" {typedef} | "values" {valuedef}
               | "functions" {funcdef} | "operations" {opdef}
               | "instance variables" {ivar} | ("thread" | "sync") tokens
    typedef    = [access] ID ("=" type | "::" {ID ":" type})
                 ["inv" ID "==" expr] [";"]
    valuedef   = [access] ID [":" type] "=" expr [";"]
    ivar       = [access] ID ":" type [":=" expr] [";"]
    funcdef    = [access] ID ":" params ("->" | "+>") type
                 ID "(" [ID {"," ID}] ")" "==" expr ["pre" expr] ["post" expr] [";"]
    opdef      = [access] ID ":" params "==>" (type | "()")
                 ID "(" [ID {"," ID}] ")" "==" statement-tokens
                 ["pre" expr] ["post" expr] [";"]
    params     = "(" ")" | type1 {"*" type1}

    type       = union ["->" type]
    union      = product {"|" product}          -- quote literals only
    product    = postfix {"*" postfix}
    postfix    = atom {"*"}                     -- "N*" is seq of nat
    atom       = bool | nat | nat1 | int | rat | real | char | token | "N"
               | "set of" postfix | "seq of" postfix | "map" union "to" postfix
               | "compose" ID "of" {ID ":" type} "end"
               | QUOTE | "[" type "]" | "(" type ")" | ID

    expr       = or ["=>" expr]
    or         = and {"or" and}
    and        = neg {"and" neg}
    neg        = "not" neg | rel
    rel        = add [("=" | "<>" | "<" | "<=" | ">" | ">=" | "in set"
                      | "not in set" | "subset" | "psubset") add]
    add        = mul {("+" | "-" | "union" | "\\" | "^" | "++") mul}
    mul        = unary {("*" | "/" | "div" | "mod" | "inter") unary}
    unary      = ("-" | "len" | "hd" | "tl" | "elems" | "inds" | "card"
                  | "dom" | "rng" | "floor" | "abs") unary | postfix
    postfix    = primary {"." ID} | ID "(" args ")" {"." ID}
    primary    = NUMBER | CHAR | STRING | QUOTE | "true" | "false" | "nil"
               | ID | "(" expr ")" | "[" args "]" | "{" args "}"
               | "{" expr "|->" expr {"," expr "|->" expr} "}" | "{|->}"
               | "mk_" ID "(" args ")" | "is_" ID "(" expr ")"
               | "if" expr "then" expr {"elseif" expr "then" expr} "else" expr
               | "cases" expr (":" | "of") {pattern "->" expr [","]}
                 ["others" "->" expr] "end"
               | "let" ID "=" expr {"," ID "=" expr} "in" expr
               | ("forall" | "exists") ID "in set" expr ("&" | ".") expr

``let``, ``if`` and quantifier bodies extend as far right as possible, so a
``let`` inside an invariant scopes over the rest of the invariant. Type
definitions written before ``class`` belong to the class that follows.
General (non-quote) unions are rejected.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from . import scope
from .lexer import Diagnostic, ParseError, Token, _spell, tokenize
from .syntax import (
    BASIC_KINDS, RESULT, Apply, Binary, Binding, Basic, CaseBranch, Cases,
    ClassDef, CompositeType, Field, FieldSelect, FuncType, FunctionDef,
    IfThenElse, InstanceVar, Invariant, LetIn, Literal, MapEnum, MapType, Named,
    OperationDef, OptionalType, Pos, ProductType, Quantifier, QuoteType,
    QuoteUnion, RawSection, RecordCtor, SeqEnum, SeqType, SetEnum, SetType,
    TypeDef, TypeExpr, TypeJudgement, Unary, ValueDef, Var, children, walk,
)
from .values import Char, Quote, TRUE, FALSE, number

__all__ = [
    "ParseError", "parse_class", "parse_document", "parse_type_expr",
    "parse_expr",
]

ACCESS = ("public", "private", "protected")
SECTIONS = ("types", "values", "functions", "operations", "instance variables",
            "thread", "sync")
WORD_UNARY = ("len", "hd", "tl", "elems", "inds", "card", "dom", "rng", "floor", "abs")
REL_OPS = {"=": "=", "<>": "<>", "<": "<", "<=": "<=", ">": ">", ">=": ">=",
           "in set": "in-set", "not in set": "not-in-set", "subset": "subset",
           "psubset": "psubset"}
ADD_OPS = {"+": "+", "-": "-", "union": "union", "\\": "setdiff", "^": "concat",
           "++": "map-override"}
MUL_OPS = {"*": "*", "/": "/", "div": "div", "mod": "mod", "inter": "inter"}


class _EOF:
    kind = "eof"
    text = "<end of input>"

    def __init__(self, line: int, column: int):
        self.line = line
        self.column = column


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        lines = text.split("\n")
        self.eof = _EOF(len(lines), len(lines[-1]) + 1)
        self.i = 0
        self.nodot = False

    # -- token helpers ------------------------------------------------------

    def peek(self, k: int = 0):
        j = self.i + k
        return self.tokens[j] if j < len(self.tokens) else self.eof

    def at(self, *texts: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t.kind in ("keyword", "symbol") and t.text in texts

    def at_kind(self, kind: str, k: int = 0) -> bool:
        return self.peek(k).kind == kind

    def next(self):
        t = self.peek()
        if t is not self.eof:
            self.i += 1
        return t

    def accept(self, *texts: str):
        if self.at(*texts):
            return self.next()
        return None

    def expect(self, text: str, what: str | None = None):
        if self.at(text):
            return self.next()
        self.fail(f"expected {what or repr(text)}, found {self.describe(self.peek())}")

    def ident(self, what: str = "identifier") -> Token:
        if self.at_kind("identifier"):
            return self.next()
        self.fail(f"expected {what}, found {self.describe(self.peek())}")

    @staticmethod
    def describe(t) -> str:
        return t.text if t.kind == "eof" else f"{t.kind} {t.text!r}"

    def fail(self, message: str, tok=None):
        tok = tok or self.peek()
        raise ParseError([Diagnostic("error", message, tok.line, tok.column)])

    @staticmethod
    def pos(tok) -> Pos:
        return Pos(tok.line, tok.column)

    # -- document / class ---------------------------------------------------

    def document(self) -> list[ClassDef]:
        classes = []
        while self.peek() is not self.eof:
            pending = []
            while not self.at("class"):
                if self.peek() is self.eof:
                    self.fail("expected 'class'")
                pending.append(self.typedef(default_access="public"))
            classes.append(self.class_def(pending))
        if not classes:
            self.fail("expected 'class'")
        return classes

    def class_def(self, pending_types: list[TypeDef]) -> ClassDef:
        start = self.expect("class")
        name = self.ident("class name").text
        supers = []
        if self.accept("is subclass of"):
            supers.append(self.ident("superclass name").text)
            while self.accept(","):
                supers.append(self.ident("superclass name").text)
        parts = {"types": list(pending_types), "values": [], "functions": [],
                 "operations": [], "ivars": [], "raw": []}
        invariant = None
        section = None
        while not self.at("end"):
            t = self.peek()
            if t is self.eof:
                self.fail(f"missing 'end {name}'")
            if t.kind == "keyword" and t.text in SECTIONS:
                self.next()
                section = t.text
                if section in ("thread", "sync"):
                    parts["raw"].append(self.raw_section(section, name, t))
                    section = None
                continue
            if self.at("inv") and self.at_kind("identifier", k=1) and self.at("(", k=2):
                if invariant is not None:
                    self.fail("duplicate class invariant")
                invariant = self.class_invariant(name)
                continue
            if section is None:
                parts["ivars"].append(self.state_decl())
            elif section == "types":
                parts["types"].append(self.typedef())
            elif section == "values":
                parts["values"].append(self.valuedef())
            elif section == "functions":
                parts["functions"].append(self.funcdef())
            elif section == "operations":
                parts["operations"].append(self.opdef(name))
            elif section == "instance variables":
                parts["ivars"].append(self.ivar())
        self.next()
        end_tok = self.ident("class name after 'end'")
        if end_tok.text != name:
            self.fail(f"'end {end_tok.text}' does not close class {name}", end_tok)
        return ClassDef(
            name, tuple(supers),
            value_defs=tuple(parts["values"]),
            type_defs=tuple(parts["types"]),
            function_defs=tuple(parts["functions"]),
            instance_vars=tuple(parts["ivars"]),
            invariant=invariant,
            operations=tuple(parts["operations"]),
            raw_sections=tuple(parts["raw"]),
            pos=self.pos(start),
        )

    def access(self, default: str = "private") -> str:
        t = self.accept(*ACCESS)
        return t.text if t else default

    def class_invariant(self, class_name: str) -> Invariant:
        start = self.expect("inv")
        owner = self.ident()
        if owner.text != class_name:
            self.fail(f"invariant names {owner.text}, expected {class_name}", owner)
        self.expect("(")
        binder = self.ident("invariant binder").text
        self.expect(")")
        self.expect("==")
        return Invariant(binder, self.expr(), pos=self.pos(start))

    def state_decl(self) -> InstanceVar:
        start = self.peek()
        acc = self.access()
        name = self.ident("state variable name")
        self.expect("=", "'=' in state declaration")
        t = self.type_expr()
        self.accept(";")
        return InstanceVar(name.text, t, access=acc, pos=self.pos(start))

    def typedef(self, default_access: str = "private") -> TypeDef:
        start = self.peek()
        acc = self.access(default_access)
        name = self.ident("type name")
        if self.accept("::"):
            fields = self.field_list()
            body: TypeExpr = CompositeType(name.text, fields, pos=self.pos(name))
        else:
            self.expect("=", "'=' or '::' in type definition")
            body = self.type_expr()
        inv = None
        if self.at("inv") and self.at_kind("identifier", k=1) and self.at("==", k=2):
            inv_tok = self.next()
            binder = self.next().text
            self.next()
            inv = Invariant(binder, self.expr(), pos=self.pos(inv_tok))
        self.accept(";")
        return TypeDef(name.text, body, access=acc, invariant=inv, pos=self.pos(start))

    def field_list(self) -> tuple[Field, ...]:
        fields = []
        while self.at_kind("identifier") and self.at(":", k=1):
            ft = self.next()
            self.next()
            fields.append(Field(ft.text, self.type_expr(), pos=self.pos(ft)))
        return tuple(fields)

    def valuedef(self) -> ValueDef:
        start = self.peek()
        acc = self.access()
        name = self.ident("value name")
        vt = None
        if self.accept(":"):
            vt = self.type_expr()
        self.expect("=", "'=' in value definition")
        e = self.expr()
        self.accept(";")
        return ValueDef(name.text, e, access=acc, type=vt, pos=self.pos(start))

    def ivar(self) -> InstanceVar:
        start = self.peek()
        acc = self.access()
        name = self.ident("instance variable name")
        self.expect(":", "':' in instance variable definition")
        t = self.type_expr()
        init = None
        if self.accept(":="):
            init = self.expr()
        self.accept(";")
        return InstanceVar(name.text, t, access=acc, init=init, pos=self.pos(start))

    def signature_params(self, name: str) -> tuple[TypeExpr, ...]:
        if self.at("(") and self.at(")", k=1):
            self.next()
            self.next()
            return ()
        items = [self.postfix_type(stop=name)]
        while self.at("*") and self.starts_type(self.peek(1), name):
            self.next()
            items.append(self.postfix_type(stop=name))
        if len(items) == 1 and self.at("|"):
            self.fail("general union types are not supported")
        return tuple(items)

    def header_params(self, name: str) -> tuple[str, ...]:
        t = self.ident(f"definition of {name}")
        if t.text != name:
            self.fail(f"expected definition of {name}, found {t.text}", t)
        self.expect("(")
        params = []
        if not self.at(")"):
            params.append(self.ident("parameter name").text)
            while self.accept(","):
                params.append(self.ident("parameter name").text)
        self.expect(")")
        if len(set(params)) != len(params):
            self.fail(f"duplicate parameter name in {name}", t)
        self.expect("==")
        return tuple(params)

    def funcdef(self) -> FunctionDef:
        start = self.peek()
        acc = self.access()
        name = self.ident("function name")
        self.expect(":", "':' in function signature")
        ptypes = self.signature_params(name.text)
        if not self.accept("->", "+>"):
            self.fail(f"expected '->', found {self.describe(self.peek())}")
        rtype = self.type_expr(stop=name.text)
        params = self.header_params(name.text)
        if len(params) != len(ptypes):
            self.fail(f"{name.text} declares {len(ptypes)} parameter types "
                      f"but binds {len(params)} parameters", name)
        body = self.expr()
        pre = self.expr() if self.accept("pre") else None
        post = self.expr() if self.accept("post") else None
        self.accept(";")
        return FunctionDef(name.text, ptypes, rtype, params, body, access=acc,
                           pre=pre, post=post, pos=self.pos(start))

    def opdef(self, class_name: str) -> OperationDef:
        start = self.peek()
        acc = self.access()
        name = self.ident("operation name")
        self.expect(":", "':' in operation signature")
        ptypes = self.signature_params(name.text)
        self.expect("==>")
        if self.at("(") and self.at(")", k=1):
            self.next()
            self.next()
            rtype = None
        else:
            rtype = self.type_expr(stop=name.text)
        params = self.header_params(name.text)
        if len(params) != len(ptypes):
            self.fail(f"{name.text} declares {len(ptypes)} parameter types "
                      f"but binds {len(params)} parameters", name)
        body = self.statement_tokens(class_name)
        if not body:
            self.fail(f"operation {name.text} has an empty body")
        pre = self.expr() if self.accept("pre") else None
        post = self.expr() if self.accept("post") else None
        self.accept(";")
        return OperationDef(name.text, ptypes, rtype, params, body, access=acc,
                            pre=pre, post=post, pos=self.pos(start))

    def _member_boundary(self, class_name: str) -> bool:
        t = self.peek()
        if t is self.eof:
            return True
        if t.kind == "keyword" and t.text in SECTIONS + ACCESS + ("pre", "post"):
            return True
        if self.at("inv") and self.at_kind("identifier", k=1) and self.at("(", k=2):
            return True
        if self.at("end") and self.peek(1).kind == "identifier" and self.peek(1).text == class_name:
            return True
        return self.at_kind("identifier") and self.at(":", k=1)

    def statement_tokens(self, class_name: str) -> tuple[str, ...]:
        out = []
        depth = 0
        while True:
            if depth == 0 and (self._member_boundary(class_name) or self.at(";")):
                break
            t = self.peek()
            if t is self.eof:
                break
            if t.kind == "symbol" and t.text in "([{":
                depth += 1
            elif t.kind == "symbol" and t.text in ")]}":
                depth -= 1
            elif self.at("cases"):
                depth += 1
            elif self.at("end") and depth > 0:
                depth -= 1
            out.append(_spell(self.next()))
        return tuple(out)

    def raw_section(self, keyword: str, class_name: str, start) -> RawSection:
        out = []
        while not (self.at("end") and self.peek(1).kind == "identifier"
                   and self.peek(1).text == class_name):
            t = self.peek()
            if t is self.eof or (t.kind == "keyword" and t.text in SECTIONS):
                break
            out.append(_spell(self.next()))
        return RawSection(keyword, tuple(out), pos=self.pos(start))

    # -- types --------------------------------------------------------------

    def starts_type(self, t, stop: str | None = None) -> bool:
        if t.kind == "keyword":
            return t.text in BASIC_KINDS
        if t.kind == "identifier":
            return t.text != stop
        if t.kind == "quote-literal":
            return True
        return t.kind == "symbol" and t.text in ("[", "(")

    def type_expr(self, stop: str | None = None) -> TypeExpr:
        start = self.peek()
        union, params = self.union_type(stop)
        if self.accept("->", "+>"):
            result = self.type_expr(stop)
            return FuncType(params, result, pos=self.pos(start))
        return union

    def union_type(self, stop):
        """Returns the type plus the parameter list it denotes left of '->'."""
        start = self.peek()
        first, params = self.product_type(stop)
        if not self.at("|"):
            return first, params
        members = [first]
        while self.accept("|"):
            members.append(self.product_type(stop)[0])
        names = []
        for m in members:
            if not isinstance(m, QuoteType):
                self.fail("general union types are not supported; only unions "
                          "of quote literals are allowed", start)
            names.append(m.name)
        if len(set(names)) != len(names):
            self.fail("duplicate quote in union type", start)
        u = QuoteUnion(tuple(names), pos=self.pos(start))
        return u, (u,)

    def product_type(self, stop):
        start = self.peek()
        if self.at("(") and self.at(")", k=1):
            self.next()
            self.next()
            if not self.at("->", "+>"):
                self.fail("'()' is only valid as an empty parameter list")
            return ProductType((), pos=self.pos(start)), ()
        items = [self.postfix_type(stop)]
        while self.at("*") and self.starts_type(self.peek(1), stop):
            self.next()
            items.append(self.postfix_type(stop))
        if len(items) == 1:
            return items[0], (items[0],)
        return ProductType(tuple(items), pos=self.pos(start)), tuple(items)

    def postfix_type(self, stop=None) -> TypeExpr:
        start = self.peek()
        t = self.atom_type(stop)
        while self.at("*") and not self.starts_type(self.peek(1), stop):
            self.next()
            t = SeqType(t, pos=self.pos(start))
        return t

    def atom_type(self, stop=None) -> TypeExpr:
        t = self.peek()
        p = self.pos(t)
        if t.kind == "keyword" and t.text in BASIC_KINDS:
            self.next()
            return Basic(t.text, pos=p)
        if t.kind == "quote-literal":
            self.next()
            return QuoteType(t.text, pos=p)
        if self.accept("["):
            inner = self.type_expr(stop)
            self.expect("]")
            return OptionalType(inner, pos=p)
        if self.accept("("):
            inner = self.type_expr(stop)
            self.expect(")")
            return inner
        if t.kind == "identifier":
            self.next()
            word = t.text
            if word == "N":
                return Basic("nat", pos=p)
            if word in ("set", "seq") and self.accept("of"):
                elem = self.postfix_type(stop)
                return SetType(elem, pos=p) if word == "set" else SeqType(elem, pos=p)
            if word == "map" and self.starts_type(self.peek()):
                key, _ = self.union_type(stop)
                self.expect("to", "'to' in map type")
                return MapType(key, self.postfix_type(stop), pos=p)
            if word == "compose":
                tag = self.ident("record tag").text
                self.expect("of")
                fields = self.field_list()
                self.expect("end", "'end' closing compose type")
                return CompositeType(tag, fields, pos=p)
            return Named(word, pos=p)
        self.fail(f"expected a type, found {self.describe(t)}")

    # -- expressions --------------------------------------------------------

    def expr(self):
        start = self.peek()
        left = self.or_expr()
        if self.accept("=>"):
            return Binary("=>", left, self.expr(), pos=self.pos(start))
        return left

    def or_expr(self):
        start = self.peek()
        left = self.and_expr()
        while self.accept("or"):
            left = Binary("or", left, self.and_expr(), pos=self.pos(start))
        return left

    def and_expr(self):
        start = self.peek()
        left = self.not_expr()
        while self.accept("and"):
            left = Binary("and", left, self.not_expr(), pos=self.pos(start))
        return left

    def not_expr(self):
        start = self.peek()
        if self.accept("not"):
            return Unary("not", self.not_expr(), pos=self.pos(start))
        return self.rel_expr()

    def rel_expr(self):
        start = self.peek()
        left = self.add_expr()
        t = self.peek()
        if t.kind in ("symbol", "keyword") and t.text in REL_OPS:
            self.next()
            right = self.add_expr()
            left = Binary(REL_OPS[t.text], left, right, pos=self.pos(start))
        return left

    def add_expr(self):
        start = self.peek()
        left = self.mul_expr()
        while True:
            t = self.peek()
            if t.kind in ("symbol", "keyword") and t.text in ADD_OPS:
                self.next()
                left = Binary(ADD_OPS[t.text], left, self.mul_expr(), pos=self.pos(start))
            else:
                return left

    def mul_expr(self):
        start = self.peek()
        left = self.unary_expr()
        while True:
            t = self.peek()
            if t.kind in ("symbol", "keyword") and t.text in MUL_OPS:
                self.next()
                left = Binary(MUL_OPS[t.text], left, self.unary_expr(), pos=self.pos(start))
            else:
                return left

    def unary_expr(self):
        t = self.peek()
        if self.accept("-"):
            return Unary("neg", self.unary_expr(), pos=self.pos(t))
        if t.kind == "keyword" and t.text in WORD_UNARY:
            self.next()
            return Unary(t.text, self.unary_expr(), pos=self.pos(t))
        return self.postfix_expr()

    def postfix_expr(self):
        e = self.primary()
        while not self.nodot and self.at(".") and self.at_kind("identifier", k=1):
            dot = self.next()
            e = FieldSelect(e, self.next().text, pos=self.pos(dot))
        if self.at("(") and isinstance(e, (FieldSelect, Apply)):
            self.fail("application of a computed value is not supported")
        return e

    def args(self, close: str) -> tuple:
        items = []
        if not self.at(close):
            items.append(self.expr())
            while self.accept(","):
                items.append(self.expr())
        self.expect(close)
        return tuple(items)

    def grouped(self):
        """Parse a bracketed sub-expression with field selection re-enabled."""
        saved, self.nodot = self.nodot, False
        try:
            return self.expr()
        finally:
            self.nodot = saved

    def primary(self):
        t = self.peek()
        p = self.pos(t)
        k = t.kind
        if k == "number":
            self.next()
            text = t.text
            return Literal(number(Fraction(text)) if "." in text else int(text), pos=p)
        if k == "char-literal":
            self.next()
            return Literal(Char(t.text), pos=p)
        if k == "string-literal":
            self.next()
            return Literal(tuple(Char(c) for c in t.text), pos=p)
        if k == "quote-literal":
            self.next()
            return Literal(Quote(t.text), pos=p)
        if self.accept("true"):
            return Literal(TRUE, pos=p)
        if self.accept("false"):
            return Literal(FALSE, pos=p)
        if self.accept("nil"):
            return Literal(None, pos=p)
        if k == "identifier":
            return self.identifier_expr()
        if self.accept("("):
            saved, self.nodot = self.nodot, False
            try:
                e = self.expr()
            finally:
                self.nodot = saved
            self.expect(")")
            return e
        if self.accept("["):
            saved, self.nodot = self.nodot, False
            try:
                return SeqEnum(self.args("]"), pos=p)
            finally:
                self.nodot = saved
        if self.accept("{"):
            saved, self.nodot = self.nodot, False
            try:
                return self.brace_expr(p)
            finally:
                self.nodot = saved
        if self.at("if"):
            return self.if_expr()
        if self.at("cases"):
            return self.cases_expr()
        if self.at("let"):
            return self.let_expr()
        if self.at("forall", "exists"):
            return self.quantifier()
        self.fail(f"expected an expression, found {self.describe(t)}")

    def identifier_expr(self):
        t = self.next()
        p = self.pos(t)
        name = t.text
        if name.startswith("mk_") and self.at("("):
            self.next()
            saved, self.nodot = self.nodot, False
            try:
                return RecordCtor(name[3:], self.args(")"), pos=p)
            finally:
                self.nodot = saved
        if name.startswith("is_") and len(name) > 3 and self.at("("):
            self.next()
            target = name[3:]
            ty = Basic(target, pos=p) if target in BASIC_KINDS else Named(target, pos=p)
            operand = self.grouped()
            self.expect(")")
            return TypeJudgement(operand, ty, pos=p)
        if self.at("("):
            self.next()
            saved, self.nodot = self.nodot, False
            try:
                return Apply(name, self.args(")"), pos=p)
            finally:
                self.nodot = saved
        return Var(name, pos=p)

    def brace_expr(self, p):
        if self.accept("|->"):
            self.expect("}")
            return MapEnum((), pos=p)
        if self.accept("}"):
            return SetEnum((), pos=p)
        first = self.expr()
        if self.accept("|->"):
            pairs = [(first, self.expr())]
            while self.accept(","):
                k = self.expr()
                self.expect("|->")
                pairs.append((k, self.expr()))
            self.expect("}")
            return MapEnum(tuple(pairs), pos=p)
        items = [first]
        while self.accept(","):
            items.append(self.expr())
        self.expect("}")
        return SetEnum(tuple(items), pos=p)

    def if_expr(self):
        start = self.next()  # 'if' or 'elseif'
        cond = self.grouped()
        self.expect("then")
        then = self.grouped()
        if self.at("elseif"):
            return IfThenElse(cond, then, self.if_expr(), pos=self.pos(start))
        self.expect("else")
        return IfThenElse(cond, then, self.expr(), pos=self.pos(start))

    def pattern(self):
        t = self.peek()
        neg = self.accept("-")
        t = self.peek()
        if t.kind == "number":
            self.next()
            v = number(Fraction(t.text)) if "." in t.text else int(t.text)
            return -v if neg else v
        if neg:
            self.fail("expected a number after '-' in pattern")
        if t.kind == "quote-literal":
            self.next()
            return Quote(t.text)
        if t.kind == "char-literal":
            self.next()
            return Char(t.text)
        if t.kind == "string-literal":
            self.next()
            return tuple(Char(c) for c in t.text)
        if self.accept("true"):
            return TRUE
        if self.accept("false"):
            return FALSE
        if self.accept("nil"):
            return None
        self.fail(f"expected a value pattern, found {self.describe(t)}")

    def cases_expr(self):
        start = self.expect("cases")
        scrutinee = self.grouped()
        if not self.accept(":", "of"):
            self.fail(f"expected ':' after cases scrutinee, found {self.describe(self.peek())}")
        branches = []
        others = None
        while not self.at("end"):
            if self.accept("others"):
                self.expect("->")
                others = self.grouped()
                self.accept(",")
                if not self.at("end"):
                    self.fail("'others' must be the last cases branch")
                break
            bt = self.peek()
            pat = self.pattern()
            self.expect("->")
            branches.append(CaseBranch(pat, self.grouped(), pos=self.pos(bt)))
            self.accept(",")
        self.expect("end", "'end' closing cases")
        if not branches and others is None:
            self.fail("cases expression needs at least one branch", start)
        if not branches:
            self.fail("cases expression needs at least one value branch", start)
        return Cases(scrutinee, tuple(branches), others, pos=self.pos(start))

    def let_expr(self):
        start = self.expect("let")
        bindings = []
        while True:
            nt = self.ident("let-bound name")
            self.expect("=")
            bindings.append(Binding(nt.text, self.grouped(), pos=self.pos(nt)))
            if not self.accept(","):
                break
        self.expect("in")
        return LetIn(tuple(bindings), self.expr(), pos=self.pos(start))

    def quantifier(self):
        start = self.next()
        var = self.ident("bound variable").text
        self.expect("in set", "'in set' in quantifier binding")
        saved, self.nodot = self.nodot, True
        try:
            domain = self.expr()
        finally:
            self.nodot = saved
        if not self.accept("&", "."):
            self.fail(f"expected '&' in quantifier, found {self.describe(self.peek())}")
        return Quantifier(start.text, var, domain, self.expr(), pos=self.pos(start))


# -- checking -----------------------------------------------------------------


def _diag(message: str, node, fallback) -> Diagnostic:
    p = getattr(node, "pos", None) or fallback
    return Diagnostic("error", message, p.line, p.column)


def check_class(cls: ClassDef, library: Mapping[str, ClassDef] | None = None) -> list[Diagnostic]:
    """Static checks: duplicate members, unresolved type and value names."""
    here = cls.pos or Pos(1, 1)
    diags: list[Diagnostic] = []

    def dupes(items, key, label):
        seen = set()
        for it in items:
            k = key(it)
            if k in seen:
                diags.append(_diag(f"duplicate {label} {it.name}", it, here))
            seen.add(k)

    dupes(cls.type_defs, lambda t: t.name.casefold(), "type")
    dupes(cls.value_defs, lambda v: v.name, "value")
    dupes(cls.instance_vars, lambda v: v.name, "instance variable")
    dupes(cls.function_defs, lambda f: (f.name, f.param_types), "function")
    dupes(cls.operations, lambda o: (o.name, o.param_types), "operation")

    try:
        flat = scope.flatten(cls, library)
    except scope.UnknownClass as exc:
        diags.append(_diag(f"unknown superclass {exc.args[0]}", cls, here))
        return diags

    def check_type(t: TypeExpr):
        for ref in scope.named_refs(t):
            if scope.resolve_named(flat, ref.name) is None and not scope.is_class_name(flat, ref.name):
                diags.append(_diag(f"unresolved type {ref.name}", ref, here))

    record_tags = {"", "token"}
    for td in flat.type_defs:
        check_type(td.body)
        if isinstance(td.body, CompositeType):
            record_tags.add(td.body.tag)
    for td in flat.type_defs:
        _composite_tags(td.body, record_tags)
    for iv in flat.instance_vars:
        check_type(iv.declared_type)
    for vd in flat.value_defs:
        if vd.type is not None:
            check_type(vd.type)
    for fd in flat.function_defs:
        for t in fd.param_types + (fd.result_type,):
            check_type(t)
    for od in flat.operations:
        for t in od.param_types + ((od.result_type,) if od.result_type else ()):
            check_type(t)

    funcs = {f.name for f in flat.function_defs}
    globals_ = {v.name for v in flat.value_defs} | {v.name for v in flat.instance_vars} | funcs

    def check_expr(e, bound: frozenset, where: str):
        _check_expr(e, bound, globals_, funcs, record_tags, flat, diags, here, where)

    for td in cls.type_defs:
        if td.invariant is not None:
            check_expr(td.invariant.expr, frozenset({td.invariant.binder}), td.name)
    for vd in cls.value_defs:
        check_expr(vd.expr, frozenset(), vd.name)
    for iv in cls.instance_vars:
        if iv.init is not None:
            check_expr(iv.init, frozenset(), iv.name)
    for fd in cls.function_defs:
        params = frozenset(fd.params)
        check_expr(fd.body, params, fd.name)
        if fd.pre is not None:
            check_expr(fd.pre, params, fd.name)
        if fd.post is not None:
            check_expr(fd.post, params | {RESULT}, fd.name)
    for od in cls.operations:
        params = frozenset(od.params)
        if od.pre is not None:
            check_expr(od.pre, params, od.name)
        if od.post is not None:
            check_expr(od.post, params | {RESULT}, od.name)
    if cls.invariant is not None:
        check_expr(cls.invariant.expr, frozenset({cls.invariant.binder}), "invariant")
    return diags


def _composite_tags(t, tags: set):
    if isinstance(t, CompositeType):
        tags.add(t.tag)
        for f in t.fields:
            _composite_tags(f.type, tags)
    elif isinstance(t, (SetType, SeqType)):
        _composite_tags(t.elem, tags)
    elif isinstance(t, MapType):
        _composite_tags(t.key, tags)
        _composite_tags(t.val, tags)
    elif isinstance(t, ProductType):
        for x in t.items:
            _composite_tags(x, tags)
    elif isinstance(t, OptionalType):
        _composite_tags(t.inner, tags)


def _check_expr(e, bound, globals_, funcs, tags, cls, diags, here, where):
    def rec(x, b):
        _check_expr(x, b, globals_, funcs, tags, cls, diags, here, where)

    if isinstance(e, Var):
        if e.name not in bound and e.name not in globals_:
            diags.append(_diag(f"unresolved identifier {e.name} in {where}", e, here))
        return
    if isinstance(e, Apply):
        if e.callee not in bound and e.callee not in globals_:
            diags.append(_diag(f"unresolved function {e.callee} in {where}", e, here))
        for a in e.args:
            rec(a, bound)
        return
    if isinstance(e, RecordCtor):
        if e.tag not in tags:
            diags.append(_diag(f"unknown record type mk_{e.tag}", e, here))
        for a in e.args:
            rec(a, bound)
        return
    if isinstance(e, TypeJudgement):
        for ref in scope.named_refs(e.type):
            if scope.resolve_named(cls, ref.name) is None and not scope.is_class_name(cls, ref.name):
                diags.append(_diag(f"unresolved type {ref.name} in is_ test", ref, here))
        rec(e.operand, bound)
        return
    if isinstance(e, LetIn):
        b = bound
        for binding in e.bindings:
            rec(binding.value, b)
            b = b | {binding.name}
        rec(e.body, b)
        return
    if isinstance(e, Quantifier):
        rec(e.domain, bound)
        rec(e.predicate, bound | {e.var})
        return
    for c in children(e):
        rec(c, bound)


def _pre_mentions_result(cls: ClassDef) -> list[Diagnostic]:
    out = []
    here = cls.pos or Pos(1, 1)
    for fd in list(cls.function_defs) + list(cls.operations):
        if fd.pre is None:
            continue
        for node in walk(fd.pre):
            if isinstance(node, Var) and node.name == RESULT:
                out.append(_diag(f"precondition of {fd.name} refers to RESULT", node, here))
    return out


# -- entry points ---------------------------------------------------------------


def _guarded(fn, text: str):
    try:
        return fn()
    except ParseError:
        raise
    except RecursionError:
        raise ParseError([Diagnostic("error", "input nested too deeply", 1, 1)]) from None


def parse_document(text: str, library: Mapping[str, ClassDef] | None = None) -> list[ClassDef]:
    """Parse and check every class in ``text``.

    Superclasses resolve against the other classes in the same text and then
    ``library``. Raises :class:`ParseError` carrying positioned diagnostics.
    """
    def run():
        classes = Parser(text).document()
        known = dict(library or {})
        known.update({c.name: c for c in classes})
        diags = []
        seen = set()
        for c in classes:
            if c.name in seen:
                diags.append(_diag(f"duplicate class {c.name}", c, Pos(1, 1)))
            seen.add(c.name)
            diags += check_class(c, known)
            diags += _pre_mentions_result(c)
        if diags:
            raise ParseError(diags)
        return classes

    return _guarded(run, text)


def parse_class(text: str, library: Mapping[str, ClassDef] | None = None) -> ClassDef:
    """Parse source holding exactly one class."""
    classes = parse_document(text, library)
    if len(classes) != 1:
        c = classes[1] if classes else None
        raise ParseError([_diag("expected exactly one class", c, Pos(1, 1))])
    return classes[0]


def parse_type_expr(text: str) -> TypeExpr:
    """Parse a standalone type expression, e.g. ``"N*"`` or ``"map N to (N * N)"``."""
    def run():
        p = Parser(text)
        t = p.type_expr()
        if p.peek() is not p.eof:
            p.fail(f"unexpected {p.describe(p.peek())} after type")
        return t

    return _guarded(run, text)


def parse_expr(text: str):
    """Parse a standalone expression."""
    def run():
        p = Parser(text)
        e = p.expr()
        if p.peek() is not p.eof:
            p.fail(f"unexpected {p.describe(p.peek())} after expression")
        return e

    return _guarded(run, text)
