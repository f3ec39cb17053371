"""Core data models for sequences, pairs, training matrices and simulation results."""

import math
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class CorrelationKind(str, Enum):
    """Which correlation sum a profile holds."""
    AAC_SUM = "aac_sum"
    ACC_SUM = "acc_sum"
    PAC = "pac"
    PCC = "pcc"


class TransformKind(str, Enum):
    """Elementwise and index transforms on a sequence."""
    REVERSE = "reverse"
    CONJUGATE = "conjugate"
    NEGATE = "negate"
    SCALE = "scale"
    SHIFT = "shift"


class SeedVariant(str, Enum):
    """The two seed characteristic matrices."""
    PSI1 = "psi1"
    PSI2 = "psi2"


class BaselineKind(str, Enum):
    """Baseline training matrices compared against CZCP-seeded ones."""
    GCP16 = "gcp16"
    MSEQ31 = "mseq31"
    BARKER13 = "barker13"
    GOLD31 = "gold31"
    ZC32 = "zc32"
    RANDOM = "random"
    RANDOM_BLOCK = "random_block"


class ConstructKind(str, Enum):
    """Sequence constructions exposed by `construct`."""
    GBF = "gbf"
    DJ = "dj"
    CONSTRUCTION1 = "construction1"
    CONSTRUCTION2 = "construction2"
    DOUBLING = "doubling"
    PERFECT = "perfect"


class ReproduceTarget(str, Enum):
    """Published results that `reproduce` re-derives."""
    TABLE1 = "table1"
    EXAMPLE3 = "example3"
    EXAMPLE5 = "example5"
    EXAMPLE6 = "example6"
    FIG8A = "fig8a"
    FIG8B = "fig8b"


# Sequences and correlations
class QarySequence(BaseModel):
    """A length-N sequence over the q-th roots of unity, stored as phase exponents."""
    model_config = ConfigDict(frozen=True)

    q: int = Field(ge=1)
    phases: Tuple[int, ...]

    @field_validator("phases", mode="before")
    @classmethod
    def _coerce_phases(cls, value: Any) -> Tuple[int, ...]:
        if isinstance(value, np.ndarray):
            value = value.tolist()
        return tuple(int(p) for p in value)

    @model_validator(mode="after")
    def _check_alphabet(self) -> "QarySequence":
        if not self.phases:
            raise ValueError("sequence must have at least one entry")
        bad = [p for p in self.phases if not 0 <= p < self.q]
        if bad:
            raise ValueError(f"phases {bad[:5]} outside Z_{self.q}")
        return self

    @classmethod
    def binary(cls, signs: str) -> "QarySequence":
        """Build a binary sequence from a '+'/'-' string."""
        return cls(q=2, phases=[0 if c == "+" else 1 for c in signs])

    @classmethod
    def from_signs(cls, values) -> "QarySequence":
        """Build a binary sequence from +1/-1 values."""
        return cls(q=2, phases=[0 if v > 0 else 1 for v in values])

    def __len__(self) -> int:
        return len(self.phases)

    @property
    def n(self) -> int:
        return len(self.phases)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.phases, dtype=np.int64)

    @property
    def is_exact(self) -> bool:
        """True when every correlation value is a Gaussian integer."""
        return self.q in (1, 2, 4)

    def signs(self) -> np.ndarray:
        """The +1/-1 values of a binary sequence."""
        if self.q not in (1, 2):
            raise ValueError(f"signs() needs a binary sequence, got q={self.q}")
        return np.where(self.array == 0, 1, -1).astype(np.int64)

    def __str__(self) -> str:
        if self.q == 2:
            return "".join("+" if p == 0 else "-" for p in self.phases)
        return f"q={self.q}:" + ",".join(str(p) for p in self.phases)


class CorrelationValue(BaseModel):
    """A correlation value; exact Gaussian integer or floating point."""
    model_config = ConfigDict(frozen=True)

    re: Union[int, float]
    im: Union[int, float]
    exact: bool = True

    @classmethod
    def zero(cls, exact: bool = True) -> "CorrelationValue":
        return cls(re=0, im=0, exact=exact)

    @property
    def squared_magnitude(self) -> float:
        if self.exact:
            return int(self.re) ** 2 + int(self.im) ** 2
        return self.re**2 + self.im**2

    @property
    def magnitude(self) -> float:
        return math.hypot(self.re, self.im)

    @property
    def complex(self) -> complex:
        return complex(self.re, self.im)

    def is_zero(self, n: int = 1) -> bool:
        """Zero test: equality for exact values, |v| <= 1e-9*n otherwise."""
        if self.exact:
            return self.re == 0 and self.im == 0
        return self.magnitude <= 1e-9 * max(n, 1)

    def conjugate(self) -> "CorrelationValue":
        return CorrelationValue(re=self.re, im=-self.im, exact=self.exact)

    def __add__(self, other: "CorrelationValue") -> "CorrelationValue":
        exact = self.exact and other.exact
        re, im = self.re + other.re, self.im + other.im
        if exact:
            re, im = int(re), int(im)
        return CorrelationValue(re=re, im=im, exact=exact)

    def __neg__(self) -> "CorrelationValue":
        return CorrelationValue(re=-self.re, im=-self.im, exact=self.exact)

    def __str__(self) -> str:
        if self.exact:
            return f"{int(self.re)}{int(self.im):+d}j"
        return f"{self.re:.6g}{self.im:+.6g}j"


class CorrelationProfile(BaseModel):
    """Correlation values for tau = 0..N-1."""
    model_config = ConfigDict(frozen=True)

    kind: CorrelationKind
    values: Tuple[CorrelationValue, ...]

    def __len__(self) -> int:
        return len(self.values)

    def squared_magnitudes(self) -> List[float]:
        return [v.squared_magnitude for v in self.values]

    def magnitudes(self) -> List[float]:
        return [v.magnitude for v in self.values]

    def zero_at(self, tau: int) -> bool:
        return self.values[tau].is_zero(len(self.values))


# Pairs and sets
class SequencePair(BaseModel):
    """An ordered pair (a, b) of equal-length sequences over the same alphabet."""
    model_config = ConfigDict(frozen=True)

    a: QarySequence
    b: QarySequence

    @model_validator(mode="after")
    def _check_shape(self) -> "SequencePair":
        if len(self.a) != len(self.b):
            raise ValueError(f"pair lengths differ: {len(self.a)} != {len(self.b)}")
        if self.a.q != self.b.q:
            raise ValueError(f"pair alphabets differ: q={self.a.q} and q={self.b.q}")
        return self

    @classmethod
    def binary(cls, a: str, b: str) -> "SequencePair":
        return cls(a=QarySequence.binary(a), b=QarySequence.binary(b))

    @classmethod
    def from_phases(cls, q: int, a, b) -> "SequencePair":
        return cls(a=QarySequence(q=q, phases=a), b=QarySequence(q=q, phases=b))

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def q(self) -> int:
        return self.a.q


class CzcpCertificate(BaseModel):
    """The maximal zone width verified for a pair."""
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    z: int = Field(ge=0)
    perfect: bool = False

    @model_validator(mode="after")
    def _check_bounds(self) -> "CzcpCertificate":
        if self.z > self.n // 2:
            raise ValueError(f"zone width {self.z} exceeds N/2 for N={self.n}")
        if self.perfect and (self.n % 2 or self.z != self.n // 2):
            raise ValueError("a perfect certificate needs even N and Z = N/2")
        return self

    @property
    def is_czcp(self) -> bool:
        return self.z >= 1

    @property
    def front_zone(self) -> List[int]:
        return list(range(1, self.z + 1))

    @property
    def tail_zone(self) -> List[int]:
        return list(range(self.n - self.z, self.n))


class CzcSet(BaseModel):
    """M >= 2 equal-length sequences claimed to form an (N, Z)-CZCS."""
    model_config = ConfigDict(frozen=True)

    members: Tuple[QarySequence, ...]
    z: int = Field(ge=0)

    @property
    def m(self) -> int:
        return len(self.members)

    @property
    def n(self) -> int:
        return len(self.members[0])


# Generalized Boolean functions
class GBF(BaseModel):
    """A generalized Boolean function stored as its truth table."""
    model_config = ConfigDict(frozen=True)

    q: int = Field(ge=1)
    mu: int = Field(ge=1)
    truth_table: Tuple[int, ...]

    @field_validator("truth_table", mode="before")
    @classmethod
    def _coerce_table(cls, value: Any) -> Tuple[int, ...]:
        if isinstance(value, np.ndarray):
            value = value.tolist()
        return tuple(int(v) for v in value)

    @model_validator(mode="after")
    def _check_table(self) -> "GBF":
        if len(self.truth_table) != 2**self.mu:
            raise ValueError(f"truth table has {len(self.truth_table)} entries, expected {2**self.mu}")
        if any(not 0 <= v < self.q for v in self.truth_table):
            raise ValueError(f"truth table values must lie in Z_{self.q}")
        return self


class DJParams(BaseModel):
    """Parameters of the quadratic path-form GCP construction."""
    model_config = ConfigDict(frozen=True)

    q: int
    mu: int = Field(ge=1)
    pi: Tuple[int, ...]
    w: Tuple[int, ...]
    w0: int = 0
    w_prime: int = 0

    @model_validator(mode="after")
    def _check_params(self) -> "DJParams":
        if sorted(self.pi) != list(range(1, self.mu + 1)):
            raise ValueError(f"pi={list(self.pi)} is not a permutation of 1..{self.mu}")
        if len(self.w) != self.mu:
            raise ValueError(f"expected {self.mu} linear weights, got {len(self.w)}")
        if any(not 0 <= v < self.q for v in (*self.w, self.w0, self.w_prime)):
            raise ValueError(f"weights must lie in Z_{self.q}")
        return self


# Search
class SearchTask(BaseModel):
    """An exhaustive binary CZCP search request."""
    n: int = Field(ge=2)
    target_z: Optional[int] = None
    symmetry_reduction: bool = True
    worker_count: int = Field(default=1, ge=1)


class SearchResult(BaseModel):
    """Outcome of a maximal-Z search for one length."""
    n: int
    z_max: int
    witnesses: List[SequencePair] = Field(default_factory=list)
    solutions: int = 0
    explored: int = 0
    elapsed: float = 0.0
    symmetry_reduction: bool = True


class TableRow(BaseModel):
    """One row of the packaged width table re-derived and compared."""
    n: int
    expected_z: int
    found_z: Optional[int] = None
    pair_z: Optional[int] = None
    profiles_match: Optional[bool] = None
    matched: bool


class TableReport(BaseModel):
    """Result of re-deriving the packaged table of maximal zone widths."""
    rows: List[TableRow]

    @property
    def passed(self) -> bool:
        return all(row.matched for row in self.rows)

    @property
    def mismatches(self) -> List[int]:
        return [row.n for row in self.rows if not row.matched]


# Training matrices
class TrainingParams(BaseModel):
    """Dimensions (N_t, J, theta) of a training matrix and the channel delay lambda."""
    model_config = ConfigDict(frozen=True)

    n_t: int = Field(ge=1)
    j: int = Field(ge=1)
    theta: int = Field(ge=1)
    lam: int = Field(default=0, ge=0)

    @property
    def length(self) -> int:
        return self.n_t * self.j * self.theta

    @property
    def q_per_row(self) -> int:
        return self.j * self.theta

    @property
    def energy(self) -> int:
        return self.j * self.theta


class CharacteristicMatrix(BaseModel):
    """The N_t x J grid of non-zero training blocks."""
    model_config = ConfigDict(frozen=True)

    blocks: Tuple[Tuple[QarySequence, ...], ...]

    @model_validator(mode="after")
    def _check_grid(self) -> "CharacteristicMatrix":
        if not self.blocks or not self.blocks[0]:
            raise ValueError("characteristic matrix needs at least one block")
        width = len(self.blocks[0])
        theta = len(self.blocks[0][0])
        q = self.blocks[0][0].q
        for row in self.blocks:
            if len(row) != width:
                raise ValueError("every row needs the same number of sub-blocks")
            for block in row:
                if len(block) != theta or block.q != q:
                    raise ValueError("all blocks must share length and alphabet")
        return self

    @property
    def n_t(self) -> int:
        return len(self.blocks)

    @property
    def j(self) -> int:
        return len(self.blocks[0])

    @property
    def theta(self) -> int:
        return len(self.blocks[0][0])

    @property
    def q(self) -> int:
        return self.blocks[0][0].q

    def row(self, n: int) -> Tuple[QarySequence, ...]:
        return self.blocks[n]


class TrainingMatrix(BaseModel):
    """Sparse N_t x L pilot matrix with exactly one non-zero entry per column."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    entries: np.ndarray
    label: str = "custom"
    params: Optional[TrainingParams] = None

    @model_validator(mode="after")
    def _check_columns(self) -> "TrainingMatrix":
        if self.entries.ndim != 2:
            raise ValueError("training matrix must be two-dimensional")
        counts = np.count_nonzero(self.entries, axis=0)
        if np.any(counts != 1):
            bad = np.flatnonzero(counts != 1)
            raise ValueError(f"columns {bad[:5].tolist()} do not hold exactly one non-zero entry")
        if self.params is not None and self.params.length != self.entries.shape[1]:
            raise ValueError(f"params give L={self.params.length} but matrix has {self.entries.shape[1]} columns")
        return self

    @property
    def n_t(self) -> int:
        return self.entries.shape[0]

    @property
    def length(self) -> int:
        return self.entries.shape[1]

    @property
    def support(self) -> np.ndarray:
        """Row index of the non-zero entry in each column."""
        return np.argmax(self.entries != 0, axis=0)

    def row_energies(self) -> np.ndarray:
        return np.sum(np.abs(self.entries) ** 2, axis=1)

    @property
    def energy(self) -> float:
        return float(self.row_energies()[0])

    @property
    def is_gaussian_integer(self) -> bool:
        e = self.entries
        return bool(np.all(e.real == np.round(e.real)) and np.all(e.imag == np.round(e.imag)))


class StackedConvolutionMatrix(BaseModel):
    """X = [X_1 ... X_Nt], each X_n the L x (lambda+1) circulant columns of x_n."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    x: np.ndarray
    n_t: int
    lam: int

    @property
    def shape(self) -> Tuple[int, int]:
        return self.x.shape


class GramViolation(BaseModel):
    """A (i, j, tau) periodic correlation that should vanish but does not."""
    i: int
    j: int
    tau: int
    magnitude: float


class OptimalityReport(BaseModel):
    """Gram-matrix and periodic-correlation optimality verdicts."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    optimal: bool
    gram_optimal: bool
    pcc_optimal: bool
    energy: float
    gram: np.ndarray
    violations: List[GramViolation] = Field(default_factory=list)


class SeedCondition(BaseModel):
    """One correlation condition on a 2 x 2 seed, checked for tau = 1..lambda."""
    name: str
    holds: bool
    failing_shifts: List[int] = Field(default_factory=list)


# Simulation
class ChannelModel(BaseModel):
    """Uniform power delay profile with lambda + 1 unit-variance taps per antenna."""
    model_config = ConfigDict(frozen=True)

    n_t: int = Field(ge=1)
    lam: int = Field(ge=0)

    @property
    def size(self) -> int:
        return self.n_t * (self.lam + 1)


class ChannelRealization(BaseModel):
    """Stacked CIR vector h of length N_t(lambda+1)."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    h: np.ndarray
    model: ChannelModel


class SimConfig(BaseModel):
    """Monte-Carlo settings."""
    ebno_grid: List[float] = Field(default_factory=lambda: [0.0, 4.0, 8.0, 12.0, 16.0, 20.0])
    trials: int = Field(default=10_000, ge=1)
    rng_seed: int = Field(default=20200721, ge=0, lt=2**64)
    n_r: int = Field(default=1, ge=1)
    paths: int = Field(default=5, ge=1)
    workers: int = Field(default=1, ge=1)


class MseRecord(BaseModel):
    """One (EbNo, path count, matrix) point."""
    ebno_db: float
    paths: int
    matrix: str
    mse_empirical: float
    mse_min: float
    mse_theory: float
    gap_db: float
    trials: int
    failures: int = 0


class MseReport(BaseModel):
    """Records of a sweep plus the configuration that produced them."""
    config: SimConfig
    records: List[MseRecord] = Field(default_factory=list)

    def for_matrix(self, label: str) -> List[MseRecord]:
        return [r for r in self.records if r.matrix == label]


# CLI and reproduction
class CommandSpec(BaseModel):
    """A CLI invocation embedded in every result document."""
    subcommand: str
    flags: Dict[str, Any] = Field(default_factory=dict)
    output: Optional[str] = None


class ReproduceCheck(BaseModel):
    """One expected-versus-actual comparison."""
    name: str
    expected: str
    actual: str
    passed: bool


class ReproduceResult(BaseModel):
    """All checks for one reproduction target."""
    target: ReproduceTarget
    checks: List[ReproduceCheck] = Field(default_factory=list)
    artifacts: List[str] = Field(default_factory=list)

    @property
    def has_surprise(self) -> bool:
        return any(not c.passed for c in self.checks)

    @property
    def surprises(self) -> List[ReproduceCheck]:
        return [c for c in self.checks if not c.passed]
