# compiler/dsl/__init__.py
from .parser import SyntaxContext, check_solidity_syntax, parse_contract, parse_expression_ast, parse_statement_syntax
from .classify import classify_expression
from .printer import render_ast, render_expression, render_statement
from .serializer import serialize_contract
