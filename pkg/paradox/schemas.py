import math
from typing import Annotated, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, FiniteFloat, PositiveFloat, PositiveInt, model_validator

from . import config

Probability = Annotated[float, Field(ge=0.0, le=1.0)]
OpenProbability = Annotated[float, Field(gt=0.0, lt=1.0)]
SampleSize = Annotated[int, Field(ge=1)]
Seed = Annotated[int, Field(ge=0, lt=2**64)]


class Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


# ----------------------------
# numerics
# ----------------------------
class QuadratureSettings(Frozen):
    abs_tol: PositiveFloat = config.QUAD_ABS_TOL
    rel_tol: PositiveFloat = config.QUAD_REL_TOL
    max_subdivisions: PositiveInt = config.QUAD_MAX_SUBDIVISIONS


class RootBracket(Frozen):
    lo: FiniteFloat
    hi: FiniteFloat
    tol: PositiveFloat = config.ROOT_TOL

    @model_validator(mode="after")
    def _ordered(self):
        if not self.lo < self.hi:
            raise ValueError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")
        return self


# ----------------------------
# point null
# ----------------------------
class Scenario(Frozen):
    """Known-variance normal sampling frame; ``z = (xbar - theta0) * sqrt(n) / sigma``."""

    theta0: FiniteFloat = config.DEFAULT_THETA0
    sigma: PositiveFloat = config.DEFAULT_SIGMA
    n: SampleSize
    z: FiniteFloat

    @property
    def standard_error(self) -> float:
        return self.sigma / math.sqrt(self.n)

    @property
    def xbar(self) -> float:
        return self.theta0 + self.z * self.standard_error

    @classmethod
    def from_mean(cls, theta0: float, sigma: float, n: int, xbar: float) -> "Scenario":
        return cls(theta0=theta0, sigma=sigma, n=n, z=(xbar - theta0) * math.sqrt(n) / sigma)


class UniformSlab(Frozen):
    kind: Literal["uniform"] = "uniform"
    width: PositiveFloat


class ConjugateSlab(Frozen):
    """Normal slab centred on theta0 with sd ``tau * sigma``."""

    kind: Literal["conjugate"] = "conjugate"
    tau: PositiveFloat


class PriorSpec(Frozen):
    mass_on_null: OpenProbability = config.DEFAULT_C
    slab: Annotated[Union[UniformSlab, ConjugateSlab], Field(discriminator="kind")]


class BayesReport(Frozen):
    bf01: float
    log_bf01: float
    posterior_h0: Probability
    posterior_odds: float
    scenario: Optional[Scenario] = None
    prior: Optional[PriorSpec] = None


class CalibrationSpec(Frozen):
    mode: Literal["literal", "odds-cancellation"]
    # k in literal mode, q in cancellation mode
    constant: PositiveFloat


# ----------------------------
# paradox analysis
# ----------------------------
class StrongContrastQuery(Frozen):
    alpha: Annotated[float, Field(gt=0.0, lt=0.5)]
    setup: Literal["lindley-uniform", "normal-conjugate"]
    c: OpenProbability = config.DEFAULT_C
    tau: PositiveFloat = config.DEFAULT_TAU
    sigma: PositiveFloat = config.DEFAULT_SIGMA
    quote_z: bool = False


class CurvePoint(Frozen):
    # sample sizes stay integers so they render undecorated
    abscissa: Union[int, float]
    posterior_h0: Probability
    p_value: Probability


class CurveSeries(Frozen):
    axis_label: str
    points: List[CurvePoint]

    @model_validator(mode="after")
    def _increasing(self):
        xs = [p.abscissa for p in self.points]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("curve abscissae must be strictly increasing")
        return self


class ConflictZone(Frozen):
    """|z| band where the point-null test rejects while P(H0 | data) clears a threshold."""

    z_lo: Optional[float] = None
    z_hi: Optional[float] = None
    empty: bool

    @model_validator(mode="after")
    def _bounds(self):
        if self.empty:
            if self.z_lo is not None or self.z_hi is not None:
                raise ValueError("an empty zone has no bounds")
        elif self.z_lo is None or self.z_hi is None or not self.z_lo < self.z_hi:
            raise ValueError("a nonempty zone needs z_lo < z_hi")
        return self

    def contains(self, z: float) -> bool:
        return not self.empty and self.z_lo <= abs(z) <= self.z_hi


class SimulationResult(Frozen):
    truth: Literal["null-true", "mixture"]
    reps: PositiveInt
    seed: Seed
    conflicts: int
    rate: Probability
    standard_error: float
    metadata: Dict[str, str] = {}


# ----------------------------
# interval null
# ----------------------------
class UniformPrior(Frozen):
    kind: Literal["uniform"] = "uniform"


class TruncatedNormalPrior(Frozen):
    """Normal centred on theta0, truncated to the region it is placed on."""

    kind: Literal["truncated-normal"] = "truncated-normal"
    scale: PositiveFloat


RegionPrior = Annotated[Union[UniformPrior, TruncatedNormalPrior], Field(discriminator="kind")]


class IntervalNullSpec(Frozen):
    """H0: |theta - theta0| <= delta against H1 on delta < |theta - theta0| <= outer_bound."""

    delta: PositiveFloat
    inside_prior: RegionPrior = UniformPrior()
    outside_prior: RegionPrior = UniformPrior()
    outer_bound: PositiveFloat

    @model_validator(mode="after")
    def _nested(self):
        if not self.delta < self.outer_bound:
            raise ValueError(f"need delta < outer_bound, got {self.delta} >= {self.outer_bound}")
        return self

    @classmethod
    def with_defaults(cls, delta: float, sigma: float, outer_bound: Optional[float] = None, **priors) -> "IntervalNullSpec":
        if outer_bound is None:
            outer_bound = 10.0 * max(delta, sigma)
        return cls(delta=delta, outer_bound=outer_bound, **priors)


class IntervalBayesFactor(Frozen):
    log_bf01: float
    log_numerator: float
    log_denominator: float
    # likelihood mass beyond theta0 +- outer_bound, left out of the H1 integral
    tail_mass: float

    @property
    def bf01(self) -> Optional[float]:
        if self.log_bf01 > 709.0:
            return None
        return math.exp(self.log_bf01)


class LaplaceExpansion(Frozen):
    log_bf01: float
    # n * delta^2 / (2 sigma^2): the term quoted when the cross term in sqrt(n) is ignored
    leading_term: float
    exponential_term: float
    log_term: float
    constant_term: float
    terms: str


class EquivalenceVerdict(Frozen):
    lower_t: float
    upper_t: float
    critical_value: float
    p_value: Probability
    concluded_equivalence: bool
    alpha: OpenProbability


Label = Literal["jl-conflict", "bartlett-inflated", "agreement-support-h0", "agreement-reject-h0", "indeterminate"]


class ParadoxClassification(Frozen):
    point_null_frequentist: Literal["reject", "retain"]
    point_null_p_value: Probability
    point_null_bayes_posterior: Probability
    interval_bayes_bf01: Optional[float]
    interval_log_bf01: float
    tost: EquivalenceVerdict
    point_null_label: Label
    interval_label: Label
    label: Label


# ----------------------------
# command line
# ----------------------------
class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    command: Literal["table1", "figure1", "analyze", "zone", "simulate", "calibrate"]
    alpha: Optional[float] = None
    alphas: Optional[List[float]] = None
    n: Optional[int] = None
    z: Optional[float] = None
    xbar: Optional[float] = None
    sigma: float = config.DEFAULT_SIGMA
    theta0: float = config.DEFAULT_THETA0
    c: float = config.DEFAULT_C
    tau: Optional[float] = None
    interval_width: Optional[float] = None
    delta: Optional[float] = None
    outer_bound: Optional[float] = None
    threshold: float = config.DEFAULT_THRESHOLD
    truth: Literal["null-true", "mixture"] = "null-true"
    seed: Seed = config.DEFAULT_SEED
    reps: PositiveInt = config.DEFAULT_REPS
    workers: PositiveInt = 1
    panel: Literal["A", "B"] = "A"
    grid: Optional[str] = None
    mode: Literal["literal", "odds-cancellation"] = "odds-cancellation"
    constant: PositiveFloat = 1.0
    quote_z: bool = False
    output_format: Literal["csv", "json"] = "csv"
    output_path: Optional[str] = None

    def inputs(self) -> dict:
        """Echo of the fields that shape the result (no output or threading plumbing)."""
        return self.model_dump(exclude={"output_format", "output_path", "workers"}, exclude_none=True)
