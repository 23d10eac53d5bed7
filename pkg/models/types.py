# models/types.py
# ─────────────────────────────────────────────────────────────────────────────
"""Semantic type references for contract, input and output data."""

from __future__ import annotations

from typing import Annotated, Final, Literal, Union

from pydantic import BaseModel, ConfigDict, Field

# Elementary Solidity types the toolchain understands. Anything else named in
# a declaration is parsed as a struct reference and reported as E_UNKNOWN_TYPE
# when no struct of that name exists.
ELEMENTARY_TYPES: Final[tuple[str, ...]] = ("uint", "int", "bool", "address", "bytes32", "string")


class _TypeNode(BaseModel):
    model_config = ConfigDict(frozen=True)


class ElementaryType(_TypeNode):
    kind: Literal["elementary"] = "elementary"
    name: str


class MappingType(_TypeNode):
    kind: Literal["mapping"] = "mapping"
    key: "TypeRef"
    value: "TypeRef"


class ArrayType(_TypeNode):
    kind: Literal["array"] = "array"
    element: "TypeRef"


class StructRef(_TypeNode):
    kind: Literal["struct"] = "struct"
    name: str


TypeRef = Annotated[
    Union[ElementaryType, MappingType, ArrayType, StructRef],
    Field(discriminator="kind"),
]

MappingType.model_rebuild()
ArrayType.model_rebuild()

UINT: Final = ElementaryType(name="uint")
INT: Final = ElementaryType(name="int")
BOOL: Final = ElementaryType(name="bool")
ADDRESS: Final = ElementaryType(name="address")
BYTES32: Final = ElementaryType(name="bytes32")
STRING: Final = ElementaryType(name="string")


def render_type(t: TypeRef) -> str:
    """Solidity / DSL spelling of a type reference."""
    if isinstance(t, ElementaryType):
        return t.name
    if isinstance(t, MappingType):
        return f"mapping({render_type(t.key)} => {render_type(t.value)})"
    if isinstance(t, ArrayType):
        return f"{render_type(t.element)}[]"
    return t.name


def is_numeric(t: TypeRef | None) -> bool:
    return isinstance(t, ElementaryType) and t.name in ("uint", "int")
