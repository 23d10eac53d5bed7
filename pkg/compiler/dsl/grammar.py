# compiler/dsl/grammar.py
# ─────────────────────────────────────────────────────────────────────────────
"""
LALR grammar for the FSM DSL and the embedded Solidity subset.

Three start symbols share one grammar:

* ``contract``  – a whole ``.fsm`` file
* ``expr_only`` – a single Solidity expression (guards, initializers)
* ``stmt_only`` – a single Solidity statement (transition actions)
"""

from __future__ import annotations

from functools import lru_cache

from lark import Lark

GRAMMAR = r"""
contract: "contract" IDENT "{" header_item* (state_decl item*)? "}"

?header_item: var_decl | struct_decl
?item: state_decl | var_decl | struct_decl | transition | timed_transition

state_decl: "state" initial_kw? IDENT ";"
!initial_kw: "initial"

var_decl: "var" visibility type_ref IDENT ("=" expr)? ";"
!visibility: "public" | "private"

struct_decl: "struct" IDENT "{" struct_field+ "}"
struct_field: type_ref IDENT ";"

transition: "transition" IDENT "{" from_clause to_clause tags_clause? input_clause? output_clause? guard_clause* do_block? "}"
timed_transition: "timed" "transition" IDENT "{" from_clause to_clause time_clause guard_clause* do_block? "}"

from_clause: "from" IDENT ";"
to_clause: "to" IDENT ";"
tags_clause: "tags" tag ("," tag)* ";"
!tag: "payable" | "admin" | "event"
input_clause: "input" param ("," param)* ";"
output_clause: "output" param ("," param)* ";"
param: type_ref IDENT
guard_clause: "guard" expr ";"
time_clause: "time" INT duration_unit? ";"
do_block: "do" "{" stmt* "}"

// ── types ────────────────────────────────────────────────────────────────
?type_ref: base_type
         | type_ref "[" "]"                         -> array_type
?base_type: elementary                              -> elementary_type
          | IDENT                                   -> struct_type
          | "mapping" "(" type_ref "=>" type_ref ")" -> mapping_type
!elementary: "uint" | "int" | "bool" | "address" | "bytes32" | "string"

// ── statements ───────────────────────────────────────────────────────────
stmt_only: stmt
?stmt: local_decl | assign_stmt | expr_stmt
local_decl: elementary IDENT ("=" expr)? ";"
assign_stmt: expr assign_op expr ";"
!assign_op: "=" | "+=" | "-=" | "*="
expr_stmt: expr ";"

// ── expressions ──────────────────────────────────────────────────────────
expr_only: expr
?expr: or_expr
?or_expr: and_expr (OR and_expr)*
?and_expr: eq_expr (AND eq_expr)*
?eq_expr: rel_expr ((EQ | NE) rel_expr)*
?rel_expr: bor_expr ((LE | GE | LT | GT) bor_expr)*
?bor_expr: bxor_expr (BOR bxor_expr)*
?bxor_expr: band_expr (BXOR band_expr)*
?band_expr: shift_expr (BAND shift_expr)*
?shift_expr: add_expr ((SHL | SHR) add_expr)*
?add_expr: mul_expr ((PLUS | MINUS) mul_expr)*
?mul_expr: pow_expr ((STAR | SLASH | PERCENT) pow_expr)*
?pow_expr: unary (POW pow_expr)?
?unary: (BANG | MINUS | TILDE) unary                -> unary_op
      | postfix
?postfix: atom
        | postfix "." IDENT                        -> member
        | postfix "[" expr "]"                     -> index
        | postfix "(" [call_args] ")"              -> call
call_args: expr ("," expr)*                        -> positional_args
         | "{" named_arg ("," named_arg)* "}"      -> named_args
named_arg: IDENT ":" expr
?atom: INT                                         -> int_lit
     | HEX                                         -> hex_lit
     | INT duration_unit                           -> duration
     | "true"                                      -> true_lit
     | "false"                                     -> false_lit
     | STRING                                      -> string_lit
     | IDENT                                       -> ident
     | elementary                                  -> type_name
     | "(" expr ")"
!duration_unit: "seconds" | "minutes" | "hours" | "days" | "weeks"

OR: "||"
AND: "&&"
EQ: "=="
NE: "!="
LE: "<="
GE: ">="
LT: "<"
GT: ">"
BOR: "|"
BXOR: "^"
BAND: "&"
SHL: "<<"
SHR: ">>"
PLUS: "+"
MINUS: "-"
STAR: "*"
SLASH: "/"
PERCENT: "%"
POW: "**"
BANG: "!"
TILDE: "~"

HEX.2: /0[xX][0-9a-fA-F]+/
INT: /[0-9]+/
IDENT: /[A-Za-z_][A-Za-z0-9_]*/
STRING: /"(\\.|[^"\\])*"/
COMMENT: /\/\/[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""


@lru_cache(maxsize=1)
def get_parser() -> Lark:
    return Lark(
        GRAMMAR,
        parser="lalr",
        start=["contract", "expr_only", "stmt_only"],
        maybe_placeholders=True,
    )
