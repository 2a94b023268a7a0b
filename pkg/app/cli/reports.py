"""
Schéma du rapport (pydantic v2), version 1.

Les dimensions sont des entiers, les scalaires rationnels des chaînes "p/q".
Le JSON produit par model_dump_json se relit par RunReport.model_validate_json.
"""
from typing import Literal, Optional

from pydantic import BaseModel, Field, computed_field

SCHEMA_VERSION = 1


# ============================================================
# LIGNES PAR MODULE
# ============================================================

class DerivationRow(BaseModel):
    selector: str
    target: str
    N: int
    M: int
    n: int
    dim_der: int
    dim_inner: int
    dim_der_interior: int
    dim_inner_interior: int
    h1: int
    inner_contained: bool
    interior_equal: bool
    asserted: bool = True


class BiderivationRow(BaseModel):
    selector: str
    N: int
    M: int
    n: int
    symmetry: str
    dim_raw: int
    dim_interior: int
    contains_F1: Optional[bool] = None
    center_annihilation_ok: Optional[bool] = None
    factorises: Optional[bool] = None


class PostLieRow(BaseModel):
    selector: str
    N: int
    n: int
    sym_bider_dim_interior: int
    postlie_trivial: bool


class CenterReport(BaseModel):
    selector: str
    N: int
    center_dim: int
    basis: list[str]


class AlgebraInfo(BaseModel):
    name: str
    rank: int
    dim: int
    positive_roots: int
    dual_coxeter: str
    killing_determinant: str
    normalized_form: bool = False
    graded_dims: dict[str, int] = Field(default_factory=dict)


# ============================================================
# AFFIRMATIONS ET ENVELOPPE
# ============================================================

class ClaimResult(BaseModel):
    task: str
    anchor: str
    claim: str
    passed: bool
    dims: dict[str, int] = Field(default_factory=dict)
    detail: Optional[str] = None
    witness: list[str] = Field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        dims = ", ".join(f"{k}={v}" for k, v in self.dims.items())
        text = f"[{status}] {self.anchor}: {self.claim}"
        if dims:
            text += f" ({dims})"
        if self.detail:
            text += f" - {self.detail}"
        return text


class RunReport(BaseModel):
    schema_version: Literal[1] = SCHEMA_VERSION
    cartan_type: str
    window: int
    degrees: list[int]
    task: str
    selector: str
    seed: int
    algebra: Optional[AlgebraInfo] = None
    center: Optional[CenterReport] = None
    derivations: list[DerivationRow] = Field(default_factory=list)
    biderivations: list[BiderivationRow] = Field(default_factory=list)
    postlie: list[PostLieRow] = Field(default_factory=list)
    claims: list[ClaimResult] = Field(default_factory=list)

    # centre de degré 0 repris au premier niveau du JSON: {"center_dim": 2, "basis": ["K1", "K2"]}
    @computed_field
    @property
    def center_dim(self) -> Optional[int]:
        return self.center.center_dim if self.center else None

    @computed_field
    @property
    def basis(self) -> Optional[list[str]]:
        return self.center.basis if self.center else None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def to_text(self) -> str:
        head = f"affvir {self.cartan_type} N={self.window} task={self.task} selector={self.selector}"
        lines = [head] + [c.line() for c in self.claims]
        for c in self.claims:
            if not c.passed and c.witness:
                lines += [f"  witness {c.anchor}: {w}" for w in c.witness]
        total = len(self.claims)
        ok = sum(c.passed for c in self.claims)
        lines.append(f"{ok}/{total} claims passed")
        return "\n".join(lines)
