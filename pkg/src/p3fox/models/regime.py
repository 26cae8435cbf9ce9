"""Model for the small-x classification record."""

from typing import Annotated, Any, Literal

from pydantic import AliasChoices, BaseModel, ConfigDict, Field, field_serializer, model_validator

SUBJECTTYPE = Literal["delta", "u"]


def complex_to_json(value: complex) -> float | list[float]:
    """Plain float for real values, [re, im] otherwise."""
    if value.imag == 0:
        return value.real
    return [value.real, value.imag]


class Regime(BaseModel):
    """Which piecewise case applies, with its exponent and coefficient.

    For subject "delta": Delta_n ~ coefficient (x/2)**exponent.
    For subject "u": u_n ~ coefficient (x/2)**exponent.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    subject: SUBJECTTYPE
    case_label: Annotated[
        int,
        Field(
            ge=1,
            le=4,
            serialization_alias="case",
            validation_alias=AliasChoices("case_label", "case"),
        ),
    ]
    j: int | None = None
    r_c: Annotated[int, Field(ge=0)]
    exponent: complex
    coefficient: complex

    @model_validator(mode="before")
    @classmethod
    def _coerce_pairs(cls, values: Any) -> Any:
        # [re, im] pairs written by complex_to_json
        if isinstance(values, dict):
            for key in ("exponent", "coefficient"):
                pair = values.get(key)
                if isinstance(pair, (list, tuple)) and len(pair) == 2:
                    values = {**values, key: complex(pair[0], pair[1])}
        return values

    @field_serializer("exponent", "coefficient")
    def _serialize_complex(self, value: complex):
        return complex_to_json(value)
