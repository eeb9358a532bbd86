"""Best-effort recursive-descent parser for Java compilation units.

The grammar coverage is pragmatic rather than compiler-grade: the tree it
builds exposes declarations, statements, expressions, type usages,
annotations and invocations with enough fidelity for pattern-based
counting. Localized syntax errors become ``error`` nodes and parsing
continues at the next synchronization point.
"""

from __future__ import annotations

from ..errors import ParseError
from .lexer import Token, tokenize
from .nodes import Node

PRIMITIVES = frozenset(
    ["boolean", "byte", "char", "short", "int", "long", "float", "double", "void"]
)

MODIFIER_WORDS = frozenset(
    [
        "public", "protected", "private", "static", "abstract", "final",
        "native", "synchronized", "transient", "volatile", "strictfp",
        "default",
    ]
)

ASSIGN_OPS = frozenset(
    ["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="]
)

# Outermost first; '<'/'>' double as generics brackets, handled upstream.
BINARY_LEVELS = [
    ("||",), ("&&",), ("|",), ("^",), ("&",), ("==", "!="),
    ("<", ">", "<=", ">=", "instanceof"), ("<<", ">>", ">>>"),
    ("+", "-"), ("*", "/", "%"),
]


def parse_java(source: str) -> Node:
    """Parse Java source text into a syntax tree.

    Raises :class:`ParseError` only for catastrophically unusable input
    (NUL bytes, i.e. binary data mislabeled as source). Anything else
    yields a tree, possibly containing ``error`` nodes.
    """
    nul = source.find("\x00")
    if nul >= 0:
        raise ParseError(f"binary content (NUL byte at offset {nul})", offset=nul)
    return _Parser(tokenize(source)).parse_compilation_unit()


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0

    # --- token helpers -------------------------------------------------

    def tok(self, ahead: int = 0) -> Token:
        i = self.pos + ahead
        return self.toks[i] if i < len(self.toks) else self.toks[-1]

    def at(self, text: str) -> bool:
        return self.tok().text == text and self.tok().kind != "eof"

    def at_kw(self, word: str) -> bool:
        return self.tok().is_kw(word)

    def eat(self) -> Token:
        t = self.tok()
        if t.kind != "eof":
            self.pos += 1
        return t

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def eof(self) -> bool:
        return self.tok().kind == "eof"

    # --- error recovery -------------------------------------------------

    def _recover(self, stop_at_brace: bool = True) -> Node:
        """Consume tokens into an error node until a sync point."""
        err = Node("error", self.tok().offset)
        depth = 0
        while not self.eof():
            t = self.tok()
            if depth == 0:
                if t.text == ";":
                    self.eat()
                    break
                if t.text == "}" and stop_at_brace:
                    break
            if t.text in "([{":
                depth += 1
            elif t.text in ")]}":
                if depth == 0 and t.text in ")]":
                    self.eat()
                    continue
                depth -= 1
            self.eat()
        return err

    # --- compilation unit -------------------------------------------------

    def parse_compilation_unit(self) -> Node:
        unit = Node("compilation_unit", 0)
        while not self.eof():
            start = self.pos
            if self.accept(";"):
                continue
            annotations = self._parse_annotations()
            if self.at_kw("package"):
                self.eat()
                name = self._qualified_name()
                self.accept(";")
                node = Node("package_declaration", self.tok().offset, {"name": name})
                node.children.extend(annotations)
                unit.children.append(node)
                continue
            if self.at_kw("import"):
                unit.children.append(self._parse_import())
                continue
            decl = self._parse_type_declaration(annotations)
            if decl is not None:
                unit.children.append(decl)
            if self.pos == start:
                unit.children.append(self._recover(stop_at_brace=False))
                if self.pos == start:
                    self.eat()
        return unit

    def _parse_import(self) -> Node:
        off = self.tok().offset
        self.eat()  # import
        is_static = self.at_kw("static") and bool(self.eat())
        parts = []
        wildcard = False
        while self.tok().kind in ("identifier", "keyword"):
            parts.append(self.eat().text)
            if not self.accept("."):
                break
            if self.accept("*"):
                wildcard = True
                break
        self.accept(";")
        return Node(
            "import_declaration",
            off,
            {"name": ".".join(parts), "static": is_static, "wildcard": wildcard},
        )

    # --- annotations & modifiers -------------------------------------------

    def _parse_annotations(self) -> list[Node]:
        out = []
        while self.at("@") and not self.tok(1).is_kw("interface"):
            out.append(self._parse_annotation())
        return out

    def _parse_annotation(self) -> Node:
        off = self.tok().offset
        self.eat()  # @
        qualified = self._qualified_name()
        node = Node(
            "annotation",
            off,
            {"name": qualified.rsplit(".", 1)[-1], "qualified": qualified},
        )
        if self.at("("):
            depth = 0
            while not self.eof():
                if self.at("@") and depth > 0:
                    node.children.append(self._parse_annotation())
                    continue
                t = self.eat()
                if t.text == "(":
                    depth += 1
                elif t.text == ")":
                    depth -= 1
                    if depth == 0:
                        break
        return node

    def _parse_modifiers(self, annotations: list[Node]) -> tuple[list[str], list[Node]]:
        mods: list[str] = []
        while True:
            if self.tok().kind == "keyword" and self.tok().text in MODIFIER_WORDS:
                mods.append(self.eat().text)
            elif self.at("@") and not self.tok(1).is_kw("interface"):
                annotations.append(self._parse_annotation())
            elif (self.tok().kind == "identifier" and self.tok().text == "sealed"
                  and self.tok(1).kind == "keyword"):
                self.eat()  # contextual 'sealed' before class/interface
            elif (self.tok().kind == "identifier" and self.tok().text == "non"
                  and self.tok(1).text == "-" and self.tok(2).text == "sealed"):
                self.eat()
                self.eat()
                self.eat()
            else:
                return mods, annotations

    def _qualified_name(self) -> str:
        parts = []
        while self.tok().kind == "identifier":
            parts.append(self.eat().text)
            if not (self.at(".") and self.tok(1).kind == "identifier"):
                break
            self.eat()
        return ".".join(parts)

    # --- type declarations ---------------------------------------------------

    def _parse_type_declaration(
        self, annotations: list[Node], premods: tuple[str, ...] | list[str] = ()
    ) -> Node | None:
        mods, annotations = self._parse_modifiers(annotations)
        mods = list(premods) + mods
        off = self.tok().offset

        if self.at("@") and self.tok(1).is_kw("interface"):
            self.eat()
            self.eat()
            name = self.eat().text if self.tok().kind == "identifier" else ""
            node = Node("annotation_declaration", off,
                        {"name": name, "modifiers": tuple(mods)})
            node.children.extend(annotations)
            self._parse_class_body(node, name)
            return node

        kw = None
        for word in ("class", "interface", "enum"):
            if self.at_kw(word):
                kw = word
                break
        if kw is None and (self.tok().kind == "identifier" and self.tok().text == "record"
                           and self.tok(1).kind == "identifier" and self.tok(2).text == "("):
            kw = "record"

        if kw is None:
            if mods or annotations:
                node = self._recover()
                node.children.extend(annotations)
                return node
            return None

        self.eat()  # class/interface/enum/record keyword
        name = self.eat().text if self.tok().kind == "identifier" else ""
        node = Node(
            {"class": "class_declaration", "interface": "interface_declaration",
             "enum": "enum_declaration", "record": "record_declaration"}[kw],
            off,
            {"name": name, "modifiers": tuple(mods), "generic": False},
        )
        node.children.extend(annotations)

        if self.at("<"):
            node.fields["generic"] = True
            self._skip_angles()
        if kw == "record" and self.at("("):
            params, _ = self._parse_params()
            node.fields["params"] = len(params)
            node.children.extend(params)
        if self.at_kw("extends"):
            self.eat()
            first = True
            while True:
                t = self._parse_type()
                if t is None:
                    break
                if first and kw == "class":
                    node.fields["superclass_name"] = _type_simple_name(t)
                node.children.append(t)
                first = False
                if not self.accept(","):
                    break
        if self.at_kw("implements"):
            self.eat()
            names = []
            while True:
                t = self._parse_type()
                if t is None:
                    break
                names.append(_type_simple_name(t))
                node.children.append(t)
                if not self.accept(","):
                    break
            node.fields["interface_names"] = tuple(names)

        if self.accept(";"):
            return node
        if kw == "enum":
            self._parse_enum_body(node, name)
        else:
            self._parse_class_body(node, name)
        return node

    def _parse_class_body(self, owner: Node, type_name: str) -> None:
        if not self.accept("{"):
            owner.children.append(self._recover())
            return
        while not self.eof() and not self.at("}"):
            start = self.pos
            member = self._parse_member(type_name)
            if member is not None:
                owner.children.append(member)
            if self.pos == start:
                owner.children.append(self._recover())
                if self.pos == start:
                    self.eat()
        self.accept("}")

    def _parse_enum_body(self, owner: Node, type_name: str) -> None:
        if not self.accept("{"):
            owner.children.append(self._recover())
            return
        # constants until ';' or '}'
        while not self.eof() and not self.at("}") and not self.at(";"):
            annos = self._parse_annotations()
            if self.tok().kind != "identifier":
                owner.children.append(self._recover())
                break
            off = self.tok().offset
            const = Node("enum_constant", off, {"name": self.eat().text})
            const.children.extend(annos)
            if self.at("("):
                const.children.extend(self._parse_args())
            if self.at("{"):
                self._parse_class_body(const, type_name)
            owner.children.append(const)
            if not self.accept(","):
                break
        if self.accept(";"):
            while not self.eof() and not self.at("}"):
                start = self.pos
                member = self._parse_member(type_name)
                if member is not None:
                    owner.children.append(member)
                if self.pos == start:
                    owner.children.append(self._recover())
                    if self.pos == start:
                        self.eat()
        self.accept("}")

    def _parse_member(self, type_name: str) -> Node | None:
        if self.accept(";"):
            return None
        annotations: list[Node] = []
        mods, annotations = self._parse_modifiers(annotations)
        off = self.tok().offset

        # initializer block
        if self.at("{"):
            node = Node("initializer_block", off, {"static": "static" in mods})
            node.children.append(self._parse_block())
            return node

        # nested type
        if (self.at_kw("class") or self.at_kw("interface") or self.at_kw("enum")
                or (self.at("@") and self.tok(1).is_kw("interface"))
                or (self.tok().kind == "identifier" and self.tok().text == "record"
                    and self.tok(1).kind == "identifier" and self.tok(2).text == "(")):
            return self._parse_type_declaration(annotations, mods)

        # generic method type parameters
        generic_method = False
        if self.at("<"):
            generic_method = True
            self._skip_angles()

        # constructor
        if (self.tok().kind == "identifier" and self.tok().text == type_name
                and self.tok(1).text == "("):
            name = self.eat().text
            params, varargs = self._parse_params()
            throws = self._parse_throws()
            node = Node(
                "constructor_declaration", off,
                {"name": name, "modifiers": tuple(mods), "params": len(params),
                 "varargs": varargs, "throws": throws},
            )
            node.children.extend(annotations)
            node.children.extend(params)
            node.children.extend(self._throws_types(throws))
            if self.at("{"):
                node.children.append(self._parse_block())
            else:
                self.accept(";")
            return node

        rtype = self._parse_type()
        if rtype is None:
            node = self._recover()
            node.children.extend(annotations)
            return node

        if self.tok().kind != "identifier":
            node = self._recover()
            node.fields["modifiers"] = tuple(mods)
            node.children.extend(annotations)
            node.children.append(rtype)
            return node

        name = self.eat().text
        if self.at("("):
            params, varargs = self._parse_params()
            while self.at("[") and self.tok(1).text == "]":
                self.eat()
                self.eat()
            throws = self._parse_throws()
            node = Node(
                "method_declaration", off,
                {"name": name, "modifiers": tuple(mods), "params": len(params),
                 "varargs": varargs, "throws": throws, "generic": generic_method,
                 "return_type_name": _type_simple_name(rtype)},
            )
            node.children.extend(annotations)
            node.children.append(rtype)
            node.children.extend(params)
            node.children.extend(self._throws_types(throws))
            if self.at_kw("default"):  # annotation-type member default value
                self.eat()
                node.children.append(self._parse_element_value())
            if self.at("{"):
                node.children.append(self._parse_block())
            else:
                self.accept(";")
            return node

        # field declaration
        node = Node("field_declaration", off, {"modifiers": tuple(mods)})
        node.children.extend(annotations)
        node.children.append(rtype)
        self._parse_declarators(node, name)
        return node

    def _parse_declarators(self, owner: Node, first_name: str) -> None:
        name = first_name
        while True:
            decl = Node("variable_declarator", self.tok().offset,
                        {"name": name, "has_init": False})
            while self.at("[") and self.tok(1).text == "]":
                self.eat()
                self.eat()
            if self.accept("="):
                decl.fields["has_init"] = True
                decl.children.append(self._parse_initializer())
            owner.children.append(decl)
            if self.accept(",") and self.tok().kind == "identifier":
                name = self.eat().text
                continue
            break
        self.accept(";")

    def _parse_initializer(self) -> Node:
        if self.at("{"):
            return self._parse_array_initializer()
        return self.parse_expression()

    def _parse_array_initializer(self) -> Node:
        off = self.tok().offset
        node = Node("array_initializer", off)
        self.eat()  # {
        while not self.eof() and not self.at("}"):
            start = self.pos
            node.children.append(self._parse_initializer())
            self.accept(",")
            if self.pos == start:
                self.eat()
        self.accept("}")
        return node

    def _parse_element_value(self) -> Node:
        if self.at("{"):
            return self._parse_array_initializer()
        return self.parse_expression()

    def _parse_params(self) -> tuple[list[Node], bool]:
        params: list[Node] = []
        varargs = False
        if not self.accept("("):
            return params, varargs
        while not self.eof() and not self.at(")"):
            start = self.pos
            annos = self._parse_annotations()
            while self.at_kw("final"):
                self.eat()
                annos.extend(self._parse_annotations())
            ptype = self._parse_type()
            if ptype is None:
                while not self.eof() and not self.at(",") and not self.at(")"):
                    if self.at("("):
                        self._skip_parens()
                    else:
                        self.eat()
                self.accept(",")
                continue
            if self.accept("..."):
                varargs = True
            pname = self.eat().text if self.tok().kind == "identifier" else ""
            while self.at("[") and self.tok(1).text == "]":
                self.eat()
                self.eat()
            p = Node("formal_parameter", ptype.offset, {"name": pname})
            p.children.extend(annos)
            p.children.append(ptype)
            params.append(p)
            self.accept(",")
            if self.pos == start:
                self.eat()
        self.accept(")")
        return params, varargs

    def _parse_throws(self) -> tuple[str, ...]:
        if not self.at_kw("throws"):
            return ()
        self.eat()
        names = []
        while self.tok().kind == "identifier":
            names.append(self._qualified_name())
            if not self.accept(","):
                break
        return tuple(names)

    def _throws_types(self, throws: tuple[str, ...]) -> list[Node]:
        return [
            Node("named_type", self.tok().offset,
                 {"name": q.rsplit(".", 1)[-1], "qualified": q})
            for q in throws
        ]

    # --- types -------------------------------------------------------------

    def _parse_type(self) -> Node | None:
        mark = self.pos
        t = self.tok()
        node: Node | None = None
        if t.kind == "keyword" and t.text in PRIMITIVES:
            self.eat()
            node = Node("primitive_type", t.offset, {"name": t.text})
        elif t.kind == "identifier":
            qualified = self._qualified_name()
            simple = qualified.rsplit(".", 1)[-1]
            if self.at("<"):
                args = self._parse_type_args()
                if args is None:
                    self.pos = mark
                    return None
                node = Node("generic_type", t.offset,
                            {"name": simple, "qualified": qualified})
                node.children.extend(args)
            else:
                node = Node("named_type", t.offset,
                            {"name": simple, "qualified": qualified})
        else:
            return None
        dims = 0
        while self.at("[") and self.tok(1).text == "]":
            self.eat()
            self.eat()
            dims += 1
        if dims:
            arr = Node("array_type", t.offset, {"dims": dims})
            arr.children.append(node)
            return arr
        return node

    def _parse_type_args(self) -> list[Node] | None:
        """Consume balanced angle brackets, extracting type names used inside."""
        mark = self.pos
        self.eat()  # <
        depth = 1
        names: list[Node] = []
        budget = 512
        while not self.eof() and budget:
            budget -= 1
            t = self.tok()
            if t.text == "<":
                depth += 1
            elif t.text in (">", ">>", ">>>"):
                depth -= len(t.text)
                if depth <= 0:
                    self.eat()
                    return names if depth == 0 else None
            elif t.text == ">=":
                self.pos = mark
                return None
            elif t.kind == "identifier":
                off = t.offset
                qualified = self._qualified_name()
                names.append(Node("named_type", off,
                                  {"name": qualified.rsplit(".", 1)[-1],
                                   "qualified": qualified}))
                continue
            elif t.text in (";", "{", "}", "(", ")", "=") or t.kind in ("string", "char"):
                self.pos = mark
                return None
            self.eat()
        self.pos = mark
        return None

    def _skip_angles(self) -> None:
        if self._parse_type_args() is None:
            # unbalanced; consume the single '<' and move on
            if self.at("<"):
                self.eat()

    def _skip_parens(self) -> None:
        depth = 0
        while not self.eof():
            t = self.eat()
            if t.text == "(":
                depth += 1
            elif t.text == ")":
                depth -= 1
                if depth <= 0:
                    return

    # --- statements ----------------------------------------------------------

    def _parse_block(self) -> Node:
        off = self.tok().offset
        node = Node("block", off)
        if not self.accept("{"):
            node.children.append(self._recover())
            return node
        while not self.eof() and not self.at("}"):
            start = self.pos
            node.children.append(self.parse_statement())
            if self.pos == start:
                self.eat()
        self.accept("}")
        return node

    def parse_statement(self) -> Node:
        t = self.tok()
        off = t.offset
        if t.text == "{":
            return self._parse_block()
        if self.accept(";"):
            return Node("empty_statement", off)
        if t.kind == "keyword":
            handler = getattr(self, f"_stmt_{t.text}", None)
            if handler is not None:
                return handler()
            if t.text in MODIFIER_WORDS or t.text in ("class", "interface", "enum"):
                return self._stmt_modified()
        if t.text == "@":
            return self._stmt_modified()
        if (t.kind == "identifier" and self.tok(1).text == ":"
                and self.tok(1).kind == "op" and self.tok(2).text != ":"):
            self.eat()
            self.eat()
            node = Node("labeled_statement", off, {"label": t.text})
            node.children.append(self.parse_statement())
            return node
        if (t.kind == "identifier" and t.text == "record"
                and self.tok(1).kind == "identifier" and self.tok(2).text == "("):
            decl = self._parse_type_declaration([])
            return decl if decl is not None else self._recover()
        if t.kind == "identifier" and t.text == "yield" and self.tok(1).text not in ("=", ".", "(", ";", "["):
            self.eat()
            node = Node("yield_statement", off)
            node.children.append(self.parse_expression())
            self.accept(";")
            return node
        local = self._try_local_var_decl([], [])
        if local is not None:
            return local
        node = Node("expression_statement", off)
        node.children.append(self.parse_expression())
        if not self.accept(";"):
            if not (self.at("}") or self.eof()):
                node.children.append(self._recover())
        return node

    def _stmt_modified(self) -> Node:
        annotations: list[Node] = []
        mods, annotations = self._parse_modifiers(annotations)
        if (self.at_kw("class") or self.at_kw("interface") or self.at_kw("enum")
                or (self.at("@") and self.tok(1).is_kw("interface"))):
            decl = self._parse_type_declaration(annotations, mods)
            return decl if decl is not None else self._recover()
        local = self._try_local_var_decl(mods, annotations)
        if local is not None:
            return local
        node = self._recover()
        node.children.extend(annotations)
        return node

    def _stmt_synchronized_after_mods(self, annotations: list[Node]) -> Node:
        node = Node("synchronized_statement", self.tok().offset)
        node.children.extend(annotations)
        if self.at("("):
            self.eat()
            node.children.append(self.parse_expression())
            self.accept(")")
        node.children.append(self._parse_block())
        return node

    def _try_local_var_decl(self, mods: list[str], annotations: list[Node]) -> Node | None:
        mark = self.pos
        vtype = self._parse_type()
        if vtype is None or self.tok().kind != "identifier":
            self.pos = mark
            return None
        name = self.tok(1).text
        if name not in ("=", ",", ";") and not (name == "[" and self.tok(2).text == "]"):
            if not (self.tok(1).text == ":" and self.tok(2).text != ":"):
                self.pos = mark
                return None
            self.pos = mark
            return None
        first = self.eat().text
        node = Node("local_variable_declaration", vtype.offset,
                    {"modifiers": tuple(mods)})
        node.children.extend(annotations)
        node.children.append(vtype)
        self._parse_declarators(node, first)
        return node

    def _stmt_if(self) -> Node:
        off = self.eat().offset
        node = Node("if_statement", off, {"has_else": False})
        if self.accept("("):
            node.children.append(self.parse_expression())
            self.accept(")")
        node.children.append(self.parse_statement())
        if self.at_kw("else"):
            self.eat()
            node.fields["has_else"] = True
            node.children.append(self.parse_statement())
        return node

    def _stmt_while(self) -> Node:
        off = self.eat().offset
        node = Node("while_statement", off)
        if self.accept("("):
            node.children.append(self.parse_expression())
            self.accept(")")
        node.children.append(self.parse_statement())
        return node

    def _stmt_do(self) -> Node:
        off = self.eat().offset
        node = Node("do_statement", off)
        node.children.append(self.parse_statement())
        if self.at_kw("while"):
            self.eat()
            if self.accept("("):
                node.children.append(self.parse_expression())
                self.accept(")")
        self.accept(";")
        return node

    def _stmt_for(self) -> Node:
        off = self.eat().offset
        if not self.accept("("):
            node = Node("for_statement", off)
            node.children.append(self._recover())
            return node
        # enhanced for: [final] Type name : expr
        mark = self.pos
        while self.at_kw("final") or self.at("@"):
            if self.at("@"):
                self._parse_annotation()
            else:
                self.eat()
        ftype = self._parse_type()
        if (ftype is not None and self.tok().kind == "identifier"
                and self.tok(1).text == ":" and self.tok(2).text != ":"):
            name = self.eat().text
            self.eat()  # :
            node = Node("enhanced_for_statement", off, {"name": name})
            node.children.append(ftype)
            node.children.append(self.parse_expression())
            self.accept(")")
            node.children.append(self.parse_statement())
            return node
        self.pos = mark
        node = Node("for_statement", off)
        if not self.accept(";"):
            init = self._try_local_var_decl([], [])
            if init is not None:
                node.children.append(init)  # consumes its ';'
            else:
                node.children.append(self.parse_expression())
                while self.accept(","):
                    node.children.append(self.parse_expression())
                self.accept(";")
        if not self.at(";"):
            node.children.append(self.parse_expression())
        self.accept(";")
        while not self.eof() and not self.at(")"):
            start = self.pos
            node.children.append(self.parse_expression())
            self.accept(",")
            if self.pos == start:
                self.eat()
        self.accept(")")
        node.children.append(self.parse_statement())
        return node

    def _stmt_switch(self) -> Node:
        off = self.eat().offset
        node = Node("switch_statement", off)
        if self.accept("("):
            node.children.append(self.parse_expression())
            self.accept(")")
        if not self.accept("{"):
            node.children.append(self._recover())
            return node
        while not self.eof() and not self.at("}"):
            start = self.pos
            if self.at_kw("case") or self.at_kw("default"):
                label = Node("case_label", self.tok().offset,
                             {"default": self.tok().text == "default"})
                self.eat()
                depth = 0
                while not self.eof():
                    t = self.tok()
                    if depth == 0 and t.text in (":", "->"):
                        self.eat()
                        break
                    if depth == 0 and t.text in ("{", "}"):
                        break
                    if t.text in "([":
                        depth += 1
                    elif t.text in ")]":
                        depth -= 1
                    self.eat()
                node.children.append(label)
            else:
                node.children.append(self.parse_statement())
            if self.pos == start:
                self.eat()
        self.accept("}")
        return node

    def _stmt_try(self) -> Node:
        off = self.eat().offset
        node = Node("try_statement", off, {"resources": 0})
        if self.at("("):
            self.eat()
            count = 0
            while not self.eof() and not self.at(")"):
                start = self.pos
                res = self._parse_resource()
                if res is not None:
                    node.children.append(res)
                    count += 1
                self.accept(";")
                if self.pos == start:
                    self.eat()
            self.accept(")")
            node.fields["resources"] = count
        node.children.append(self._parse_block())
        while self.at_kw("catch"):
            coff = self.eat().offset
            clause = Node("catch_clause", coff, {"types": 0})
            if self.accept("("):
                while self.at_kw("final") or self.at("@"):
                    if self.at("@"):
                        clause.children.append(self._parse_annotation())
                    else:
                        self.eat()
                ntypes = 0
                while True:
                    ctype = self._parse_type()
                    if ctype is None:
                        break
                    clause.children.append(ctype)
                    ntypes += 1
                    if not self.accept("|"):
                        break
                clause.fields["types"] = ntypes
                if self.tok().kind == "identifier":
                    clause.fields["name"] = self.eat().text
                self.accept(")")
            clause.children.append(self._parse_block())
            node.children.append(clause)
        if self.at_kw("finally"):
            foff = self.eat().offset
            fin = Node("finally_clause", foff)
            fin.children.append(self._parse_block())
            node.children.append(fin)
        return node

    def _parse_resource(self) -> Node | None:
        mark = self.pos
        while self.at_kw("final") or self.at("@"):
            if self.at("@"):
                self._parse_annotation()
            else:
                self.eat()
        rtype = self._parse_type()
        if rtype is not None and self.tok().kind == "identifier" and self.tok(1).text == "=":
            node = Node("resource", rtype.offset, {"name": self.eat().text})
            node.children.append(rtype)
            self.eat()  # =
            node.children.append(self.parse_expression())
            return node
        self.pos = mark
        # existing-variable resource (Java 9+): plain expression
        node = Node("resource", self.tok().offset)
        node.children.append(self.parse_expression())
        return node

    def _stmt_return(self) -> Node:
        off = self.eat().offset
        node = Node("return_statement", off)
        if not self.at(";") and not self.at("}"):
            node.children.append(self.parse_expression())
        self.accept(";")
        return node

    def _stmt_throw(self) -> Node:
        off = self.eat().offset
        node = Node("throw_statement", off)
        node.children.append(self.parse_expression())
        self.accept(";")
        return node

    def _stmt_break(self) -> Node:
        off = self.eat().offset
        node = Node("break_statement", off)
        if self.tok().kind == "identifier":
            node.fields["label"] = self.eat().text
        self.accept(";")
        return node

    def _stmt_continue(self) -> Node:
        off = self.eat().offset
        node = Node("continue_statement", off)
        if self.tok().kind == "identifier":
            node.fields["label"] = self.eat().text
        self.accept(";")
        return node

    def _stmt_assert(self) -> Node:
        off = self.eat().offset
        node = Node("assert_statement", off)
        node.children.append(self.parse_expression())
        if self.accept(":"):
            node.children.append(self.parse_expression())
        self.accept(";")
        return node

    def _stmt_synchronized(self) -> Node:
        self.eat()
        return self._stmt_synchronized_after_mods([])

    def _stmt_this(self) -> Node:
        return self._expression_statement()

    def _stmt_super(self) -> Node:
        return self._expression_statement()

    def _stmt_new(self) -> Node:
        return self._expression_statement()

    def _stmt_switch_kw(self) -> Node:  # pragma: no cover - alias safety
        return self._stmt_switch()

    def _expression_statement(self) -> Node:
        node = Node("expression_statement", self.tok().offset)
        node.children.append(self.parse_expression())
        self.accept(";")
        return node

    # --- expressions -----------------------------------------------------------

    def parse_expression(self) -> Node:
        return self._parse_assignment()

    def _parse_assignment(self) -> Node:
        lhs = self._parse_ternary()
        t = self.tok()
        if t.kind == "op" and t.text in ASSIGN_OPS:
            self.eat()
            node = Node("assignment_expression", t.offset, {"op": t.text})
            node.children.append(lhs)
            node.children.append(self._parse_assignment())
            return node
        return lhs

    def _parse_ternary(self) -> Node:
        cond = self._parse_binary(0)
        if self.at("?") and self.tok().kind == "op":
            off = self.eat().offset
            node = Node("ternary_expression", off)
            node.children.append(cond)
            node.children.append(self.parse_expression())
            self.accept(":")
            node.children.append(self._parse_ternary())
            return node
        return cond

    def _parse_binary(self, level: int) -> Node:
        if level >= len(BINARY_LEVELS):
            return self._parse_unary()
        ops = BINARY_LEVELS[level]
        left = self._parse_binary(level + 1)
        while True:
            t = self.tok()
            if t.is_kw("instanceof") and "instanceof" in ops:
                self.eat()
                node = Node("instanceof_expression", t.offset)
                node.children.append(left)
                itype = self._parse_type()
                if itype is not None:
                    node.children.append(itype)
                    if self.tok().kind == "identifier":  # pattern binding
                        self.eat()
                left = node
                continue
            if t.kind == "op" and t.text in ops and t.text != "instanceof":
                self.eat()
                node = Node("binary_expression", t.offset, {"op": t.text})
                node.children.append(left)
                node.children.append(self._parse_binary(level + 1))
                left = node
                continue
            return left

    def _parse_unary(self) -> Node:
        t = self.tok()
        if t.kind == "op" and t.text in ("!", "~", "+", "-", "++", "--"):
            self.eat()
            node = Node("unary_expression", t.offset, {"op": t.text, "prefix": True})
            node.children.append(self._parse_unary())
            return node
        if t.text == "(":
            cast = self._try_cast()
            if cast is not None:
                return cast
        return self._parse_postfix()

    def _try_cast(self) -> Node | None:
        mark = self.pos
        off = self.tok().offset
        self.eat()  # (
        ctype = self._parse_type()
        while ctype is not None and self.at("&"):  # intersection cast
            self.eat()
            extra = self._parse_type()
            if extra is None:
                ctype = None
        if ctype is None or not self.accept(")"):
            self.pos = mark
            return None
        nxt = self.tok()
        plausible = (
            ctype.kind in ("primitive_type", "array_type", "generic_type")
            or nxt.kind in ("identifier", "number", "string", "char")
            or nxt.text in ("(", "!", "~")
            or nxt.is_kw("new") or nxt.is_kw("this") or nxt.is_kw("super")
        )
        if not plausible:
            self.pos = mark
            return None
        node = Node("cast_expression", off)
        node.children.append(ctype)
        node.children.append(self._parse_unary())
        return node

    def _parse_postfix(self) -> Node:
        expr = self._parse_primary()
        while True:
            t = self.tok()
            if t.text == "." and self.tok(1).kind in ("identifier", "keyword"):
                nxt = self.tok(1)
                if nxt.is_kw("new"):
                    self.eat()
                    self.eat()
                    expr = self._parse_creation(t.offset)
                    continue
                if nxt.is_kw("class") or nxt.is_kw("this") or nxt.is_kw("super"):
                    self.eat()
                    self.eat()
                    continue
                if nxt.kind != "identifier":
                    break
                self.eat()
                seg = self.eat().text
                if self.at("("):
                    qualifier = expr.get("name") if expr.kind == "name" else None
                    node = Node("method_invocation", t.offset,
                                {"name": seg, "qualifier": qualifier})
                    node.children.append(expr)
                    node.children.extend(self._parse_args())
                    expr = node
                    continue
                if expr.kind == "name":
                    expr = Node("name", expr.offset,
                                {"name": expr.get("name") + "." + seg})
                else:
                    node = Node("field_access", t.offset, {"name": seg})
                    node.children.append(expr)
                    expr = node
                continue
            if t.text == "(" and expr.kind == "name":
                dotted = expr.get("name")
                simple = dotted.rsplit(".", 1)
                name = simple[-1]
                qualifier = simple[0] if len(simple) > 1 else None
                node = Node("method_invocation", t.offset,
                            {"name": name, "qualifier": qualifier})
                node.children.extend(self._parse_args())
                expr = node
                continue
            if t.text == "(" and expr.kind in ("this_expression", "super_expression"):
                node = Node("explicit_constructor_invocation", t.offset,
                            {"target": "this" if expr.kind == "this_expression" else "super"})
                node.children.extend(self._parse_args())
                expr = node
                continue
            if t.text == "::":
                self.eat()
                ref = "new" if self.at_kw("new") else (
                    self.tok().text if self.tok().kind == "identifier" else "")
                self.eat()
                qualifier = expr.get("name") if expr.kind == "name" else None
                node = Node("method_reference", t.offset,
                            {"name": ref, "qualifier": qualifier})
                node.children.append(expr)
                expr = node
                continue
            if t.text == "[":
                self.eat()
                node = Node("array_access", t.offset)
                node.children.append(expr)
                if not self.at("]"):
                    node.children.append(self.parse_expression())
                self.accept("]")
                expr = node
                continue
            if t.kind == "op" and t.text in ("++", "--"):
                self.eat()
                node = Node("unary_expression", t.offset, {"op": t.text, "prefix": False})
                node.children.append(expr)
                expr = node
                continue
            return expr
        return expr

    def _parse_primary(self) -> Node:
        t = self.tok()
        off = t.offset
        if t.kind in ("number", "string", "char"):
            self.eat()
            return Node("literal", off, {"type": t.kind, "text": t.text})
        if t.kind == "keyword":
            if t.text == "new":
                self.eat()
                return self._parse_creation(off)
            if t.text == "this":
                self.eat()
                return Node("this_expression", off)
            if t.text == "super":
                self.eat()
                return Node("super_expression", off)
            if t.text == "switch":
                return self._stmt_switch()
            if t.text in PRIMITIVES:
                self.eat()
                while self.at("[") and self.tok(1).text == "]":
                    self.eat()
                    self.eat()
                return Node("name", off, {"name": t.text})
            # keyword in expression position: give up gracefully
            self.eat()
            return Node("error", off)
        if t.text == "(":
            lam = self._try_lambda()
            if lam is not None:
                return lam
            self.eat()
            inner = self.parse_expression()
            self.accept(")")
            return inner
        if t.kind == "identifier":
            if self.tok(1).text == "->":
                self.eat()
                self.eat()
                node = Node("lambda_expression", off, {"params": 1})
                node.children.append(self._parse_lambda_body())
                return node
            self.eat()
            return Node("name", off, {"name": t.text})
        if t.text == "@":
            return self._parse_annotation()
        if t.text == "{":
            return self._parse_array_initializer()
        self.eat()
        return Node("error", off)

    def _try_lambda(self) -> Node | None:
        mark = self.pos
        depth = 0
        i = self.pos
        budget = 512
        while i < len(self.toks) and budget:
            budget -= 1
            text = self.toks[i].text
            if text == "(":
                depth += 1
            elif text == ")":
                depth -= 1
                if depth == 0:
                    break
            elif text in (";", "{", "}") or self.toks[i].kind == "eof":
                return None
            i += 1
        if depth != 0 or i + 1 >= len(self.toks) or self.toks[i + 1].text != "->":
            return None
        off = self.tok().offset
        nparams = 0
        self.eat()  # (
        while not self.at(")") and not self.eof():
            tk = self.eat()
            if tk.kind == "identifier" and self.tok().text in (",", ")"):
                nparams += 1
            elif tk.text == "<":
                self.pos -= 1
                self._skip_angles()
        self.accept(")")
        self.accept("->")
        node = Node("lambda_expression", off, {"params": nparams})
        node.children.append(self._parse_lambda_body())
        return node

    def _parse_lambda_body(self) -> Node:
        if self.at("{"):
            return self._parse_block()
        return self.parse_expression()

    def _parse_creation(self, off: int) -> Node:
        ctype = self._parse_type()
        if ctype is None:
            return self._recover()
        if ctype.kind == "array_type":  # new int[] {...}
            node = Node("array_creation", off, {"dims": ctype.get("dims", 1)})
            node.children.append(ctype.children[0])
            if self.at("{"):
                node.children.append(self._parse_array_initializer())
            return node
        if self.at("["):
            dims = 0
            sizes: list[Node] = []
            while self.accept("["):
                if not self.at("]"):
                    sizes.append(self.parse_expression())
                self.accept("]")
                dims += 1
            creation = Node("array_creation", off, {"dims": dims})
            creation.children.append(ctype)
            creation.children.extend(sizes)
            if self.at("{"):
                creation.children.append(self._parse_array_initializer())
            return creation
        node = Node("object_creation", off, {"anonymous": False,
                                             "type_name": _type_simple_name(ctype)})
        node.children.append(ctype)
        if self.at("("):
            node.children.extend(self._parse_args())
        if self.at("{"):
            node.fields["anonymous"] = True
            self._parse_class_body(node, _type_simple_name(ctype))
        return node

    def _parse_args(self) -> list[Node]:
        args: list[Node] = []
        if not self.accept("("):
            return args
        while not self.eof() and not self.at(")"):
            start = self.pos
            args.append(self.parse_expression())
            self.accept(",")
            if self.pos == start:
                self.eat()
        self.accept(")")
        return args


def _type_simple_name(t: Node) -> str:
    if t.kind == "array_type" and t.children:
        return _type_simple_name(t.children[0])
    return t.get("name", "")
