"""Frontend coverage sweep: every common construct must flow through the
whole pipeline without exceptions or ERROR recovery, and its graph must
survive a serialization round-trip."""

from __future__ import annotations

import pytest

from cssg.frontend import tokenize
from cssg.frontend.astnodes import Language, SourceUnit
from cssg.semgraph import deserialize, graph_for_unit, serialize

PYTHON_SNIPPETS = {
    "match": "def f(x):\n    match x:\n        case 0:\n            return 'zero'\n        case [a, b]:\n            return a + b\n        case _:\n            return None\n",
    "walrus": "while (n := int(input())) > 0:\n    print(n)\n",
    "fstring": "name = input()\nprint(f'hello {name} {len(name):>3}')\n",
    "decorator": "@wrap\ndef f():\n    return 1\n",
    "async": "import asyncio\nasync def main():\n    await asyncio.sleep(1)\n",
    "comprehension": "xs = [i * i for i in range(10) if i % 2]\nd = {k: v for k, v in pairs}\n",
    "starred": "a, *rest = [1, 2, 3]\nprint(rest)\n",
    "try_full": "try:\n    x = risky()\nexcept ValueError as e:\n    x = 0\nexcept Exception:\n    x = 1\nelse:\n    x += 1\nfinally:\n    print(x)\n",
    "global": "count = 0\ndef bump():\n    global count\n    count += 1\n",
    "class": "class Counter:\n    def __init__(self):\n        self.n = 0\n    def bump(self):\n        self.n += 1\n\nc = Counter()\nc.bump()\n",
    "lambda": "f = lambda x: x + 1\nprint(f(2))\n",
    "slices": "xs[1:3] = ys[::2]\nzs = xs[:]\n",
    "chained_compare": "if 0 <= x < n <= 100:\n    pass\n",
    "multi_with": "with open('a') as f, open('b') as g:\n    data = f.read() + g.read()\n",
    "del_assert": "del xs[0]\nassert xs, 'empty'\n",
    "generator": "def gen(n):\n    for i in range(n):\n        yield i * 2\n",
    "while_else": "while n > 0:\n    n -= 1\nelse:\n    print('done')\n",
    "for_else_break": "for i in range(9):\n    if i == 5:\n        break\nelse:\n    print('no break')\n",
    "ternary": "y = a if c else b\n",
    "nested_def": "def outer(n):\n    def inner(k):\n        return k + 1\n    return inner(n)\n",
}

JAVA_SNIPPETS = {
    "do_while": "class M { static int f(int n) { int i = 0; do { i++; } while (i < n); return i; } }",
    "switch": "class M { static String f(int x) { switch (x) { case 0: return \"a\"; case 1: case 2: return \"b\"; default: return \"c\"; } } }",
    "ternary_cast": "class M { static long f(Object o, int x) { long y = (long) x; return x > 0 ? y : -y; } }",
    "arrays": "class M { static int f() { int[] a = new int[10]; int[][] b = {{1,2},{3,4}}; a[0] = b[1][0]; return a[0]; } }",
    "lambda": "class M { static void f(java.util.List<Integer> xs) { xs.forEach(x -> System.out.println(x)); } }",
    "method_ref": "class M { static void f(java.util.List<String> xs) { xs.forEach(System.out::println); } }",
    "generics": "import java.util.*;\nclass M { static Map<String, List<Integer>> f() { Map<String, List<Integer>> m = new HashMap<>(); return m; } }",
    "nested_class": "class Outer { static class Inner { int get() { return 1; } } int use() { return new Inner().get(); } }",
    "interface": "interface Shape { double area(); }\nclass Box implements Shape { public double area() { return 1.0; } }",
    "foreach": "class M { static int sum(int[] xs) { int s = 0; for (int x : xs) { s += x; } return s; } }",
    "try_resources": "class M { static String f() { try (var r = open()) { return r.read(); } catch (Exception e) { return \"\"; } finally { log(); } } }",
    "labeled_break": "class M { static void f(int n) { outer: for (int i = 0; i < n; i++) { for (int j = 0; j < n; j++) { if (j > i) break outer; } } } }",
    "instanceof": "class M { static boolean f(Object o) { return o instanceof String s && !s.isEmpty(); } }",
    "anonymous": "class M { Runnable r = new Runnable() { public void run() { } }; }",
    "varargs": "class M { static int f(int... xs) { return xs.length; } }",
    "shifts": "class M { static int f(int x) { return x >> 2 | x << 1 ^ x >>> 3; } }",
    "string_concat": "class M { static String f(int n) { String s = \"v=\" + n + '!'; return s; } }",
    "conditional_decl": "class M { static int f(int a, int b) { int m = a > b ? a : b; return m; } }",
}


def _check(unit: SourceUnit) -> None:
    graph = graph_for_unit(unit)
    assert graph.node_count >= 2
    assert not [n for n in graph.nodes if n.label.detail == "error"], "unexpected ERROR recovery"
    blob = serialize(graph)
    assert serialize(deserialize(blob)) == blob
    assert len(tokenize(unit)) > 0


@pytest.mark.parametrize("name", sorted(PYTHON_SNIPPETS))
def test_python_construct(name):
    _check(SourceUnit(Language.PYTHON, PYTHON_SNIPPETS[name], name))


@pytest.mark.parametrize("name", sorted(JAVA_SNIPPETS))
def test_java_construct(name):
    _check(SourceUnit(Language.JAVA, JAVA_SNIPPETS[name], name))
