"""Parser behaviour: shape of trees, error recovery, hard syntax."""

import pytest

from kurev.errors import ParseError
from kurev.javaparse import parse_java
from kurev.javaparse.lexer import tokenize


def kinds(tree):
    return [n.kind for n in tree.walk()]


def test_minimal_class():
    tree = parse_java("class A {}")
    decls = tree.find_all("class_declaration")
    assert len(decls) == 1
    assert decls[0].get("name") == "A"


def test_empty_file():
    tree = parse_java("")
    assert tree.kind == "compilation_unit"
    assert tree.children == []


def test_binary_input_raises_with_offset():
    with pytest.raises(ParseError) as exc:
        parse_java("class A {\x00}")
    assert exc.value.offset == 9


def test_unbalanced_brace_recovers():
    tree = parse_java("class A { void f() { if (x { } }")
    assert tree.find_all("class_declaration")
    # no crash is the contract; error nodes are allowed but not required
    assert tree.kind == "compilation_unit"


def test_garbage_produces_error_nodes():
    tree = parse_java("%%% ??? )))")
    assert tree.find_all("error")


def test_package_and_imports():
    tree = parse_java(
        "package a.b;\nimport java.util.List;\nimport java.util.*;\n"
        "import static java.lang.Math.max;\nclass C {}"
    )
    imports = tree.find_all("import_declaration")
    assert [i.get("name") for i in imports] == ["java.util.List", "java.util", "java.lang.Math.max"]
    assert imports[1].get("wildcard") and not imports[0].get("wildcard")
    assert imports[2].get("static")


def test_method_fields():
    tree = parse_java(
        "class C { public static <T> T pick(T a, T b, int... rest) throws E1, E2 { return a; } }"
    )
    m = tree.find_all("method_declaration")[0]
    assert m.get("name") == "pick"
    assert m.get("params") == 3
    assert m.get("varargs") is True
    assert m.get("generic") is True
    assert m.get("throws") == ("E1", "E2")
    assert set(m.get("modifiers")) == {"public", "static"}


def test_constructor_vs_method():
    tree = parse_java("class C { C() {} C make() { return new C(); } }")
    assert len(tree.find_all("constructor_declaration")) == 1
    assert len(tree.find_all("method_declaration")) == 1
    assert len(tree.find_all("object_creation")) == 1


def test_control_flow_statements():
    src = """
    class C {
      void f(int n) {
        while (n > 0) { n--; }
        do { n++; } while (n < 5);
        for (int i = 0; i < n; i++) { if (i == 2) break; else continue; }
        for (String s : names) {}
        switch (n) { case 1: break; default: break; }
        synchronized (this) {}
        assert n >= 0 : "neg";
      }
    }
    """
    tree = parse_java(src)
    for kind in [
        "while_statement", "do_statement", "for_statement",
        "enhanced_for_statement", "switch_statement",
        "synchronized_statement", "assert_statement", "if_statement",
    ]:
        assert tree.find_all(kind), kind
    assert len(tree.find_all("break_statement")) == 3
    assert len(tree.find_all("continue_statement")) == 1


def test_try_catch_finally_resources():
    src = """
    class C {
      void f() {
        try (Reader r = open(); Writer w = sink()) { use(r); }
        catch (IOException | SQLException e) { log(e); }
        catch (Exception e) { }
        finally { done(); }
      }
    }
    """
    tree = parse_java(src)
    t = tree.find_all("try_statement")[0]
    assert t.get("resources") == 2
    catches = tree.find_all("catch_clause")
    assert [c.get("types") for c in catches] == [2, 1]
    assert tree.find_all("finally_clause")


def test_generics_and_arrays():
    tree = parse_java(
        "class C { Map<String, List<Integer>> m; int[][] grid = new int[2][3]; }"
    )
    g = tree.find_all("generic_type")
    assert any(t.get("name") == "Map" for t in g)
    arr = tree.find_all("array_type")
    assert arr and arr[0].get("dims") == 2
    creation = tree.find_all("array_creation")[0]
    assert creation.get("dims") == 2


def test_lambdas_and_references():
    src = """
    class C {
      Runnable a = () -> run();
      Function<String, Integer> b = s -> s.length();
      BiFunction<Integer, Integer, Integer> c = (x, y) -> x + y;
      Supplier<List<String>> d = ArrayList::new;
      Function<String, String> e = String::trim;
    }
    """
    tree = parse_java(src)
    lambdas = tree.find_all("lambda_expression")
    assert sorted(l.get("params") for l in lambdas) == [0, 1, 2]
    refs = tree.find_all("method_reference")
    assert {r.get("name") for r in refs} == {"new", "trim"}
    assert {r.get("qualifier") for r in refs} == {"ArrayList", "String"}


def test_anonymous_class_and_enum():
    src = """
    enum Mode {
      FAST, SLOW { @Override public String toString() { return "s"; } };
      int cost() { return 1; }
    }
    class C { Runnable r = new Runnable() { public void run() {} }; }
    """
    tree = parse_java(src)
    assert len(tree.find_all("enum_constant")) == 2
    anon = [n for n in tree.find_all("object_creation") if n.get("anonymous")]
    assert len(anon) == 1 and anon[0].get("type_name") == "Runnable"


def test_casts_and_instanceof():
    tree = parse_java(
        "class C { void f(Object o) { int x = (int) 1.5; String s = (String) o;"
        " if (o instanceof Number) {} } }"
    )
    casts = tree.find_all("cast_expression")
    assert len(casts) == 2
    first_targets = [c.children[0].kind for c in casts]
    assert "primitive_type" in first_targets and "named_type" in first_targets
    assert tree.find_all("instanceof_expression")


def test_parenthesized_expression_not_cast():
    tree = parse_java("class C { int f(int a, int b) { return (a) + b; } }")
    assert not tree.find_all("cast_expression")


def test_less_than_not_generics():
    tree = parse_java("class C { boolean f(int a, int b) { return a < b && b > a; } }")
    ops = [n.get("op") for n in tree.find_all("binary_expression")]
    assert ops.count("<") == 1 and ops.count(">") == 1


def test_explicit_constructor_invocations():
    tree = parse_java("class C { C() { this(1); } C(int x) { super(); } }")
    targets = [n.get("target") for n in tree.find_all("explicit_constructor_invocation")]
    assert sorted(targets) == ["super", "this"]


def test_qualified_invocation_name_merging():
    tree = parse_java("class C { void f() { java.nio.file.Files.exists(p); } }")
    inv = tree.find_all("method_invocation")[0]
    assert inv.get("name") == "exists"
    assert inv.get("qualifier") == "java.nio.file.Files"


def test_annotations_with_arguments():
    tree = parse_java(
        '@Entity @Table(name = "t", schema = @Schema("s")) class C { @Id long id; }'
    )
    names = {a.get("name") for a in tree.find_all("annotation")}
    assert {"Entity", "Table", "Schema", "Id"} <= names


def test_text_block_and_string_escapes():
    src = 'class C { String a = """\nhello "x"\n"""; String b = "a\\"b"; }'
    tree = parse_java(src)
    assert len(tree.find_all("variable_declarator")) == 2


def test_lexer_numbers():
    toks = [t for t in tokenize("1_000 0x1F 1.5e-3 2f 3. x.y") if t.kind == "number"]
    assert [t.text for t in toks] == ["1_000", "0x1F", "1.5e-3", "2f", "3"]


def test_interface_and_record():
    tree = parse_java(
        "interface I<T> { T get(); default int n() { return 0; } }\n"
        "record Point(int x, int y) { int sum() { return x + y; } }"
    )
    assert tree.find_all("interface_declaration")[0].get("generic")
    rec = tree.find_all("record_declaration")[0]
    assert rec.get("params") == 2
