"""JSON experiment configuration. Unknown keys are rejected."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Annotated, Literal, Optional

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..constellation import Constellation, Family, NormMode, build
from ..errors import ConstellationError, HarnessError


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ConstellationSpec(_Strict):
    family: Family = Family.PSK_PAM
    m: int = Field(gt=0)
    k: Optional[int] = None
    norm: NormMode = NormMode.MEAN_POWER
    label: Optional[str] = None

    @model_validator(mode="after")
    def _buildable(self):
        try:
            self.build()
        except ConstellationError as exc:
            raise ValueError(f"{exc.code}: {exc}") from exc
        return self

    def build(self) -> Constellation:
        return build(self.family, self.m, self.k, self.norm)

    @property
    def slug(self) -> str:
        if self.family is Family.PSK_PAM:
            return f"pskpam_k{self.k}_n{self.m // self.k}"
        return f"{self.family.value}{self.m}"

    @property
    def display(self) -> str:
        return self.label or self.build().label


class DecoderOptions(_Strict):
    reestimate: bool = True
    receiver: Literal["auto", "two-step", "coherent"] = "auto"


class OutputPaths(_Strict):
    csv: Optional[str] = None
    svg: Optional[str] = None


def _check_grid(grid: list[float]) -> list[float]:
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("snr_db grid must be strictly increasing")
    return grid


SnrGrid = Annotated[list[float], AfterValidator(_check_grid)]


class ExperimentConfig(_Strict):
    constellation: ConstellationSpec
    phase_bound: float = Field(ge=0.0, le=3.141592653589793)
    snr_db: SnrGrid = Field(default_factory=list)
    trials_per_point: int = Field(ge=1)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    decoder: DecoderOptions = DecoderOptions()
    output: OutputPaths = OutputPaths()

    @property
    def receiver(self) -> str:
        if self.decoder.receiver != "auto":
            return self.decoder.receiver
        return "coherent" if self.constellation.family is Family.QAM else "two-step"

    @model_validator(mode="after")
    def _receiver_fits_family(self):
        if self.decoder.receiver == "two-step" and self.constellation.family is Family.QAM:
            raise ValueError("two-step decoding needs a psk-pam or psk constellation")
        return self


class AnalyticOverlay(_Strict):
    labels: list[str]
    mode: Literal["union", "dominant"] = "union"


class FigureConfig(_Strict):
    """A figure: several constellations simulated on one SNR grid."""

    name: str
    description: str = ""
    phase_bound: float = Field(ge=0.0, le=3.141592653589793)
    snr_db: SnrGrid
    trials_per_point: int = Field(ge=1)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    reestimate: bool = True
    series: list[ConstellationSpec] = Field(min_length=1)
    analytic: Optional[AnalyticOverlay] = None

    def experiments(self) -> list[ExperimentConfig]:
        return [
            ExperimentConfig(constellation=spec, phase_bound=self.phase_bound, snr_db=self.snr_db,
                             trials_per_point=self.trials_per_point, seed=self.seed,
                             decoder=DecoderOptions(reestimate=self.reestimate))
            for spec in self.series
        ]


def canonical_bytes(model: BaseModel) -> bytes:
    return json.dumps(model.model_dump(mode="json"), sort_keys=True, separators=(",", ":")).encode()


def content_hash(model: BaseModel) -> str:
    """Git blob hash of the canonical JSON form."""
    body = canonical_bytes(model)
    return hashlib.sha1(b"blob %d\0" % len(body) + body).hexdigest()


def _load(cls, path):
    path = Path(path)
    try:
        return cls.model_validate_json(path.read_text())
    except ValidationError as exc:
        raise HarnessError(f"{path}: {exc.errors()[0]['loc']}: {exc.errors()[0]['msg']}",
                           code="BAD_CONFIG") from exc


def load_experiment(path) -> ExperimentConfig:
    return _load(ExperimentConfig, path)


def load_figure(path) -> FigureConfig:
    return _load(FigureConfig, path)
