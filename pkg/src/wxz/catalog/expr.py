"""Entry expressions: ``+ - * / **int`` and ``sqrt`` over named parameters.

Expressions are Python-syntax strings parsed with :mod:`ast`; ``i`` is the
imaginary unit.  Anything outside that grammar is rejected at compile time.
"""

from __future__ import annotations

import ast
import copy
from functools import lru_cache
from typing import Mapping

from ..errors import IncompleteAssignment, ParseError
from ..scalar import I, Scalar, scalar_sqrt

RESERVED = {"i": I}
FUNCTIONS = {"sqrt": scalar_sqrt}


class _Validator(ast.NodeVisitor):
    def __init__(self, text):
        self.text = text
        self.names: set[str] = set()

    def generic_visit(self, node):
        raise ParseError(f"unsupported syntax {type(node).__name__}", repr(self.text))

    def visit_Expression(self, node):
        self.visit(node.body)

    def visit_BinOp(self, node):
        if not isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)):
            raise ParseError(f"operator {type(node.op).__name__} not allowed", repr(self.text))
        if isinstance(node.op, ast.Pow) and _int_literal(node.right) is None:
            raise ParseError("exponent must be an integer literal", repr(self.text))
        self.visit(node.left)
        if not isinstance(node.op, ast.Pow):
            self.visit(node.right)

    def visit_UnaryOp(self, node):
        if not isinstance(node.op, (ast.USub, ast.UAdd)):
            raise ParseError("only unary +/- allowed", repr(self.text))
        self.visit(node.operand)

    def visit_Constant(self, node):
        if not isinstance(node.value, int) or isinstance(node.value, bool):
            raise ParseError("only integer literals allowed", repr(self.text))

    def visit_Name(self, node):
        if node.id not in RESERVED:
            self.names.add(node.id)

    def visit_Call(self, node):
        if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
            raise ParseError("only sqrt(...) calls allowed", repr(self.text))
        if len(node.args) != 1 or node.keywords:
            raise ParseError("sqrt takes exactly one argument", repr(self.text))
        self.visit(node.args[0])


def _int_literal(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        v = _int_literal(node.operand)
        return None if v is None else -v
    return None


@lru_cache(maxsize=None)
def compile_expr(text: str):
    """Parse and validate; returns ``(tree, free_names)``."""
    try:
        tree = ast.parse(str(text).strip(), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse expression: {exc.msg}", repr(text)) from exc
    v = _Validator(text)
    v.visit(tree)
    return tree, frozenset(v.names)


def free_names(text: str) -> frozenset:
    return compile_expr(text)[1]


def _eval(node, env):
    if isinstance(node, ast.Expression):
        return _eval(node.body, env)
    if isinstance(node, ast.Constant):
        return Scalar(node.value)
    if isinstance(node, ast.Name):
        if node.id in RESERVED:
            return RESERVED[node.id]
        return env[node.id]
    if isinstance(node, ast.UnaryOp):
        v = _eval(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Call):
        return FUNCTIONS[node.func.id](_eval(node.args[0], env))
    left = _eval(node.left, env)
    op = node.op
    if isinstance(op, ast.Pow):
        return left ** _int_literal(node.right)
    right = _eval(node.right, env)
    if isinstance(op, ast.Add):
        return left + right
    if isinstance(op, ast.Sub):
        return left - right
    if isinstance(op, ast.Mult):
        return left * right
    return left / right


def evaluate(text, env: Mapping[str, Scalar]) -> Scalar:
    """Evaluate an expression string; raises IncompleteAssignment for unbound names."""
    if isinstance(text, Scalar):
        return text
    tree, names = compile_expr(str(text))
    missing = [n for n in names if n not in env]
    if missing:
        raise IncompleteAssignment(sorted(missing), where=repr(text))
    return _eval(tree, env)


class _Renamer(ast.NodeTransformer):
    def __init__(self, mapping):
        self.mapping = mapping

    def visit_Name(self, node):
        if node.id in self.mapping:
            return ast.copy_location(ast.Name(id=self.mapping[node.id], ctx=node.ctx), node)
        return node


def rename(text: str, mapping: Mapping[str, str]) -> str:
    """Rewrite free names of an expression; reserved names are left alone."""
    tree, names = compile_expr(str(text))
    if not names & set(mapping):
        return str(text)
    new = _Renamer({k: v for k, v in mapping.items() if k not in RESERVED}).visit(copy.deepcopy(tree))
    return ast.unparse(new)
