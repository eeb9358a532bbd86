"""Knowledge-unit detection over parsed Java source.

A single traversal of the syntax tree emits *events* (declaration uses,
statement kinds, expression kinds, type references, annotations and
invocations). Catalog patterns are pure predicates over events; a
capability counts each distinct node matched by any of its patterns
once, and a KU count is the sum of its capability counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .catalog import (
    KU_COUNT,
    AstPattern,
    CapabilityCatalog,
    CapabilityId,
    load_catalog,
)
from .javaparse.nodes import Node
from .javaparse.parser import parse_java

__all__ = [
    "parse_java",
    "detect_capabilities",
    "detect_kus",
    "ku_vector_from_hits",
]

_TYPE_DECLS = frozenset(
    [
        "class_declaration",
        "interface_declaration",
        "enum_declaration",
        "record_declaration",
        "annotation_declaration",
    ]
)

_MEMBER_KINDS = _TYPE_DECLS | frozenset(
    [
        "method_declaration",
        "field_declaration",
        "constructor_declaration",
        "initializer_block",
        "enum_constant",
    ]
)

_STATEMENT_KEYWORDS = {
    "if_statement": ("if",),
    "switch_statement": ("switch",),
    "while_statement": ("while",),
    "do_statement": ("do_while",),
    "for_statement": ("for",),
    "enhanced_for_statement": ("enhanced_for",),
    "break_statement": ("break",),
    "continue_statement": ("continue",),
    "throw_statement": ("throw",),
    "assert_statement": ("assert",),
    "synchronized_statement": ("synchronized",),
    "finally_clause": ("finally",),
}

_EXCEPTION_SUFFIXES = ("Exception", "Error", "Throwable")


@dataclass(frozen=True)
class _Event:
    category: str  # one of catalog.NODE_KINDS
    node_id: int
    keywords: frozenset[str] = frozenset()
    name: str | None = None
    qualified: str | None = None


@dataclass
class _Imports:
    explicit: dict[str, str] = field(default_factory=dict)
    wildcards: list[str] = field(default_factory=list)

    def consistent(self, name: str | None, qualified: str | None, prefix: str) -> bool:
        """Whether a use of ``name`` could resolve under ``prefix``.

        Fully-qualified uses are checked directly; simple names defer to
        an explicit import when one exists, and otherwise count (the
        binding may come from java.lang, the same package, or a wildcard).
        """
        if qualified and "." in qualified:
            head = qualified.split(".", 1)[0]
            if head and head[0].islower():
                return qualified == prefix or qualified.startswith(prefix + ".")
        if name:
            imported = self.explicit.get(name)
            if imported is not None:
                return imported == f"{prefix}.{name}" or imported.startswith(prefix + ".")
        return True


def _accessor_like(name: str, params: int, returning: bool) -> bool:
    for pre in ("get", "is"):
        if name.startswith(pre) and len(name) > len(pre) and name[len(pre)].isupper():
            return params == 0 and returning
    if name.startswith("set") and len(name) > 3 and name[3].isupper():
        return params == 1
    return False


def _first_body_statement(decl: Node) -> Node | None:
    for child in decl.children:
        if child.kind == "block":
            return child.children[0] if child.children else None
    return None


def _is_this_chain(decl: Node) -> bool:
    stmt = _first_body_statement(decl)
    if stmt is None or stmt.kind != "expression_statement" or not stmt.children:
        return False
    head = stmt.children[0]
    return head.kind == "explicit_constructor_invocation" and head.get("target") == "this"


def _qualifier_type_use(qualifier: str) -> tuple[str, str | None] | None:
    """Extract a plausible type reference from a dotted qualifier.

    ``Files`` -> (Files, None); ``java.nio.file.Files.x`` -> the first
    capitalized segment together with its package prefix. Returns None
    when every segment looks like a plain variable.
    """
    parts = qualifier.split(".")
    for i, part in enumerate(parts):
        if part and part[0].isupper():
            if i == 0:
                return part, None
            return part, ".".join(parts[: i + 1])
        if part and not part[0].islower():
            return None
    return None


class _Collector:
    def __init__(self) -> None:
        self.events: list[_Event] = []
        self.imports = _Imports()

    def emit(self, category: str, node: Node, keywords=(), name=None, qualified=None):
        self.events.append(
            _Event(category, id(node), frozenset(keywords), name, qualified)
        )

    # --- traversal --------------------------------------------------------

    def run(self, unit: Node) -> None:
        for child in unit.children:
            if child.kind == "import_declaration":
                self._register_import(child)
            elif child.kind in _TYPE_DECLS:
                self._visit_type(child, nested=False)
            else:
                self._visit(child, in_block=False)

    def _register_import(self, node: Node) -> None:
        name = node.get("name", "")
        if node.get("static"):
            return
        if node.get("wildcard"):
            self.imports.wildcards.append(name)
        elif name:
            self.imports.explicit[name] = name

    # Explicit imports are keyed by simple name for lookup.
    # (Fix-up applied after parsing the dotted form above.)

    def _visit_type(self, decl: Node, nested: bool, local: bool = False) -> None:
        kind = decl.kind
        name = decl.get("name", "")
        mods = set(decl.get("modifiers", ()))
        keywords = set(mods)
        if kind == "class_declaration":
            keywords.add("class")
        elif kind == "interface_declaration":
            keywords.add("interface")
        elif kind == "enum_declaration":
            keywords.add("enum")
        elif kind == "record_declaration":
            keywords.update(("class", "record"))
        else:
            keywords.add("annotation_type")
        if nested:
            keywords.add("member")
            if kind == "class_declaration":
                keywords.add("inner_class")
        if local and kind == "class_declaration":
            keywords.add("local_class")
        if decl.get("generic"):
            keywords.add("generic")
        superclass = decl.get("superclass_name")
        if superclass:
            keywords.add("subclass")
        if kind == "class_declaration" and (
            name.endswith(_EXCEPTION_SUFFIXES)
            or (superclass or "").endswith(_EXCEPTION_SUFFIXES)
        ):
            keywords.add("exception_class")

        members = [c for c in decl.children if c.kind in _MEMBER_KINDS]
        if kind == "class_declaration":
            if self._looks_immutable(mods, members):
                keywords.add("immutable_class")
            if self._looks_singleton(name, members):
                keywords.add("singleton_class")
        self.emit("declaration", decl, keywords, name=name)
        self._visit_body(decl, name, members)

    def _visit_body(self, decl: Node, type_name: str, members: list[Node]) -> None:
        overloaded = self._overload_names(members)
        n_ctors = sum(1 for m in members if m.kind == "constructor_declaration")
        for child in decl.children:
            if child.kind in _TYPE_DECLS:
                self._visit_type(child, nested=True)
            elif child.kind == "method_declaration":
                self._visit_method(child, overloaded)
            elif child.kind == "constructor_declaration":
                self._visit_constructor(child, n_ctors)
            elif child.kind == "field_declaration":
                self._visit_field(child)
            elif child.kind == "initializer_block":
                kw = {"initializer"} | ({"static"} if child.get("static") else set())
                self.emit("declaration", child, kw)
                for sub in child.children:
                    self._visit(sub, in_block=True)
            elif child.kind == "enum_constant":
                self.emit("declaration", child, {"enum_constant"}, name=child.get("name"))
                body = [c for c in child.children if c.kind in _MEMBER_KINDS]
                if body:
                    self._visit_body(child, type_name, body)
                for sub in child.children:
                    if sub.kind not in _MEMBER_KINDS:
                        self._visit(sub, in_block=True)
            else:
                self._visit(child, in_block=False)

    @staticmethod
    def _overload_names(members: list[Node]) -> set[str]:
        counts: dict[str, int] = {}
        for m in members:
            if m.kind == "method_declaration":
                n = m.get("name", "")
                counts[n] = counts.get(n, 0) + 1
        return {n for n, c in counts.items() if c > 1}

    @staticmethod
    def _looks_immutable(mods: set[str], members: list[Node]) -> bool:
        if "final" not in mods:
            return False
        fields = [m for m in members if m.kind == "field_declaration"]
        ctors = [m for m in members if m.kind == "constructor_declaration"]
        if not fields or not any(c.get("params", 0) >= 1 for c in ctors):
            return False
        return all("final" in f.get("modifiers", ()) for f in fields)

    @staticmethod
    def _looks_singleton(name: str, members: list[Node]) -> bool:
        ctors = [m for m in members if m.kind == "constructor_declaration"]
        if not any("private" in c.get("modifiers", ()) for c in ctors):
            return False
        for m in members:
            if "static" not in m.get("modifiers", ()):
                continue
            if m.kind == "field_declaration":
                for t in m.children:
                    if t.kind in ("named_type", "generic_type") and t.get("name") == name:
                        return True
            elif m.kind == "method_declaration" and m.get("return_type_name") == name:
                return True
        return False

    def _visit_method(self, decl: Node, overloaded: set[str]) -> None:
        name = decl.get("name", "")
        keywords = set(decl.get("modifiers", ())) | {"method", "member"}
        params = decl.get("params", 0)
        returning = decl.get("return_type_name") != "void"
        if params >= 1:
            keywords.add("parameterized")
        if returning:
            keywords.add("returning")
        if decl.get("varargs"):
            keywords.add("varargs")
        if decl.get("generic"):
            keywords.add("generic")
        if decl.get("throws"):
            keywords.add("throwing")
        if name in overloaded:
            keywords.add("overloaded_method")
        if _accessor_like(name, params, returning):
            keywords.add("accessor_method")
        self.emit("declaration", decl, keywords, name=name)
        for child in decl.children:
            self._visit(child, in_block=False)

    def _visit_constructor(self, decl: Node, n_ctors: int) -> None:
        keywords = set(decl.get("modifiers", ())) | {"constructor", "member"}
        if decl.get("params", 0) >= 1:
            keywords.add("parameterized")
        if decl.get("varargs"):
            keywords.add("varargs")
        if decl.get("throws"):
            keywords.add("throwing")
        if n_ctors > 1:
            keywords.add("overloaded_constructor")
        if _is_this_chain(decl):
            keywords.add("chained_constructor")
        self.emit("declaration", decl, keywords, name=decl.get("name"))
        for child in decl.children:
            self._visit(child, in_block=False)

    def _visit_field(self, decl: Node) -> None:
        keywords = set(decl.get("modifiers", ())) | {"field", "member"}
        self.emit("declaration", decl, keywords)
        for child in decl.children:
            self._visit(child, in_block=False)

    # --- statements / expressions / types -----------------------------------

    def _visit(self, node: Node, in_block: bool) -> None:
        kind = node.kind
        if kind in _TYPE_DECLS:
            self._visit_type(node, nested=False, local=in_block)
            return

        if kind in _STATEMENT_KEYWORDS:
            self.emit("statement", node, _STATEMENT_KEYWORDS[kind])
        elif kind == "try_statement":
            kw = ["try"]
            if node.get("resources", 0) > 0:
                kw.append("try_with_resources")
            self.emit("statement", node, kw)
        elif kind == "catch_clause":
            kw = ["catch"]
            if node.get("types", 0) > 1:
                kw.append("multi_catch")
            self.emit("statement", node, kw)
        elif kind == "local_variable_declaration":
            self.emit(
                "declaration", node,
                set(node.get("modifiers", ())) | {"variable"},
            )
        elif kind == "assignment_expression":
            self.emit("expression", node, ("assignment",))
        elif kind == "binary_expression":
            kw = ["binary"]
            if node.get("op") in ("==", "!="):
                kw.append("equality")
            self.emit("expression", node, kw)
        elif kind == "unary_expression":
            self.emit("expression", node, ("unary",))
        elif kind == "ternary_expression":
            self.emit("expression", node, ("ternary",))
        elif kind == "instanceof_expression":
            self.emit("expression", node, ("instanceof",))
        elif kind == "cast_expression":
            target = node.children[0] if node.children else None
            primitive = target is not None and target.kind == "primitive_type"
            self.emit(
                "expression", node,
                ("primitive_cast",) if primitive else ("reference_cast",),
            )
        elif kind == "lambda_expression":
            self.emit("expression", node, ("lambda",))
        elif kind == "array_access":
            self.emit("expression", node, ("array_access",))
        elif kind == "array_initializer":
            self.emit("expression", node, ("array_initializer",))
        elif kind == "array_creation":
            dims = node.get("dims", 1)
            self.emit(
                "expression", node,
                ("multidim_array_creation",) if dims >= 2 else ("array_creation",),
            )
        elif kind == "super_expression":
            self.emit("expression", node, ("super",))
        elif kind == "explicit_constructor_invocation":
            if node.get("target") == "super":
                self.emit("expression", node, ("super",))
        elif kind == "method_invocation":
            self.emit("invocation", node, name=node.get("name"))
            self._emit_qualifier_type(node)
            # the qualifier child duplicates the event above; skip it
            for child in self._non_qualifier_children(node):
                self._visit(child, in_block=in_block)
            return
        elif kind == "method_reference":
            self.emit("expression", node, ("method_reference",))
            ref = node.get("name")
            if ref == "new":
                qual = node.get("qualifier")
                if qual:
                    use = _qualifier_type_use(qual)
                    if use is not None:
                        self.emit("invocation", node, ("new",),
                                  name=use[0], qualified=use[1])
            elif ref:
                self.emit("invocation", node, name=ref)
            self._emit_qualifier_type(node)
            for child in self._non_qualifier_children(node):
                self._visit(child, in_block=in_block)
            return
        elif kind == "object_creation":
            ctype = node.children[0] if node.children else None
            qualified = ctype.get("qualified") if ctype is not None else None
            self.emit("invocation", node, ("new",),
                      name=node.get("type_name"), qualified=qualified)
            if node.get("anonymous"):
                self.emit("declaration", node, ("anonymous_class",),
                          name=node.get("type_name"))
                members = [c for c in node.children if c.kind in _MEMBER_KINDS]
                if members:
                    self._visit_body(node, node.get("type_name", ""), members)
                for child in node.children:
                    if child.kind not in _MEMBER_KINDS:
                        self._visit(child, in_block=False)
                return
        elif kind == "annotation":
            self.emit("annotation", node, name=node.get("name"),
                      qualified=node.get("qualified"))
        elif kind in ("named_type", "generic_type"):
            kw = ("generic",) if kind == "generic_type" else ()
            self.emit("type", node, kw, name=node.get("name"),
                      qualified=node.get("qualified"))
        elif kind == "array_type":
            dims = node.get("dims", 1)
            self.emit("type", node,
                      ("multidim_array",) if dims >= 2 else ("array",))
        elif kind == "name":
            text = node.get("name", "")
            if "." in text:
                use = _qualifier_type_use(text)
                if use is not None:
                    self.emit("type", node, name=use[0], qualified=use[1])

        inner_block = in_block or kind in ("block", "switch_statement")
        for child in node.children:
            self._visit(child, in_block=inner_block)

    @staticmethod
    def _non_qualifier_children(node: Node) -> list[Node]:
        kids = node.children
        if kids and kids[0].kind == "name" and kids[0].get("name") == node.get("qualifier"):
            return kids[1:]
        return kids

    def _emit_qualifier_type(self, node: Node) -> None:
        qual = node.get("qualifier")
        if not qual:
            return
        use = _qualifier_type_use(qual)
        if use is not None:
            self.emit("type", node, name=use[0], qualified=use[1])


def _fix_import_keys(imports: _Imports) -> _Imports:
    fixed = _Imports(wildcards=list(imports.wildcards))
    for qualified in imports.explicit.values():
        fixed.explicit[qualified.rsplit(".", 1)[-1]] = qualified
    return fixed


def _pattern_matches(pattern: AstPattern, event: _Event, imports: _Imports) -> bool:
    if pattern.node_kind != event.category:
        return False
    if pattern.keyword is not None:
        if not set(pattern.keyword.split()) <= event.keywords:
            return False
    if pattern.name is not None and event.name != pattern.name:
        return False
    if pattern.import_prefix is not None:
        if not imports.consistent(event.name, event.qualified, pattern.import_prefix):
            return False
    return True


def detect_capabilities(
    source: str, catalog: CapabilityCatalog | None = None
) -> dict[CapabilityId, int]:
    """Count capability evidence in one Java source file.

    Returns a mapping from every enabled capability to the number of
    distinct syntax nodes exhibiting it (zero entries included).
    """
    if catalog is None:
        catalog = load_catalog()
    unit = parse_java(source)
    collector = _Collector()
    collector.run(unit)
    imports = _fix_import_keys(collector.imports)

    out: dict[CapabilityId, int] = {}
    for rule in catalog.enabled_rules():
        matched: set[int] = set()
        for event in collector.events:
            if event.node_id in matched:
                continue
            for pattern in rule.patterns:
                if _pattern_matches(pattern, event, imports):
                    matched.add(event.node_id)
                    break
        out[rule.id] = len(matched)
    return out


def ku_vector_from_hits(hits: dict[CapabilityId, int]) -> list[int]:
    """Aggregate capability counts into the 28-slot KU vector."""
    vector = [0] * KU_COUNT
    for cap, count in hits.items():
        vector[cap.ku.index - 1] += count
    return vector


def detect_kus(source: str, catalog: CapabilityCatalog | None = None) -> list[int]:
    """KU vector (28 non-negative counts) for one Java source file."""
    return ku_vector_from_hits(detect_capabilities(source, catalog))
