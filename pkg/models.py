# -----------------------------------------------------------------------------
# Project: qnn_inference_sim
# Author: Md Samshad Rahman
# Year: 2025
# License: MIT License (See LICENSE file for details)
# Description: Pydantic models for encodings, polynomials, memory structures,
# convolution kernels, network specifications and verification reports.
# -----------------------------------------------------------------------------

from datetime import datetime, timezone
from typing import Any, Callable, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

import config
import linalg
from errors import BoundViolation, ContractViolation, DimensionMismatch


def _optional_cvector(value: Any) -> Optional[np.ndarray]:
    return None if value is None else linalg.as_cvector(value)


def _optional_cmatrix(value: Any) -> Optional[np.ndarray]:
    return None if value is None else linalg.as_cmatrix(value)


class Ledger(BaseModel):
    """
    The (alpha, ancillas, eps_bound) record that every encoding carries, plus a
    symbolic depth tag.
    """

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(..., description="Scale of the encoding.")
    ancillas: int = Field(..., ge=0, description="Ancilla qubits.")
    eps_bound: float = Field(..., ge=0.0, description="Guaranteed error bound.")
    depth_symbol: str = Field("O(1)", description="Asymptotic circuit depth tag.")

    @model_validator(mode="after")
    def _alpha_at_least_one(self) -> "Ledger":
        if self.alpha < 1.0 - config.BOUND_TOLERANCE:
            raise ContractViolation(f"Ledger scale {self.alpha} is below 1.")
        return self


class BlockEncoding(BaseModel):
    """
    A block-encoding: `block` is the exact top-left block (<0|_a (x) I) U (|0>_a (x) I)
    and alpha * block approximates `target` within eps_bound.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    block: np.ndarray
    alpha: float = Field(..., gt=0.0)
    ancillas: int = Field(..., ge=0)
    eps_bound: float = Field(0.0, ge=0.0)
    target: Optional[np.ndarray] = None
    realization: Optional[np.ndarray] = None
    depth: str = "O(1)"

    @field_validator("block", mode="before")
    @classmethod
    def _coerce_block(cls, value: Any) -> np.ndarray:
        mat = linalg.as_cmatrix(value)
        if mat.shape[0] != mat.shape[1]:
            raise DimensionMismatch(f"Encoded blocks are square, got {mat.shape}.")
        return mat

    @field_validator("target", mode="before")
    @classmethod
    def _coerce_target(cls, value: Any) -> Optional[np.ndarray]:
        return _optional_cmatrix(value)

    @field_validator("realization", mode="before")
    @classmethod
    def _coerce_realization(cls, value: Any) -> Optional[np.ndarray]:
        return _optional_cmatrix(value)

    @model_validator(mode="after")
    def _check_invariants(self) -> "BlockEncoding":
        Ledger(alpha=self.alpha, ancillas=self.ancillas, eps_bound=self.eps_bound)
        norm = linalg.spectral_norm(self.block)
        if norm > 1.0 + config.BLOCK_NORM_TOLERANCE:
            raise ContractViolation(f"Encoded block has spectral norm {norm:.12g} > 1.")
        if self.target is not None and self.target.shape != self.block.shape:
            raise DimensionMismatch(f"Target shape {self.target.shape} != block shape {self.block.shape}.")
        if self.realization is not None:
            expected = self.block.shape[0] * 2**self.ancillas
            if self.realization.shape != (expected, expected):
                raise DimensionMismatch(
                    f"Realization of shape {self.realization.shape} does not act on "
                    f"{self.ancillas} ancillas plus {self.n_qubits} qubits."
                )
            if not linalg.is_unitary(self.realization):
                raise ContractViolation("Realization is not unitary.")
            corner = self.realization[: self.block.shape[0], : self.block.shape[1]]
            if np.max(np.abs(corner - self.block)) > config.UNITARY_TOLERANCE:
                raise ContractViolation("Realization's top-left block differs from the block.")
        return self

    @property
    def n_qubits(self) -> int:
        return linalg.num_qubits(self.block.shape[0])

    @property
    def total_qubits(self) -> int:
        return self.n_qubits + self.ancillas

    @property
    def ledger(self) -> Ledger:
        return Ledger(alpha=self.alpha, ancillas=self.ancillas, eps_bound=self.eps_bound, depth_symbol=self.depth)

    def actual_error(self) -> Optional[float]:
        """Spectral distance ||target - alpha * block||_2, or None without a target."""
        if self.target is None:
            return None
        return linalg.spectral_norm(self.target - self.alpha * self.block)

    def check_bound(self, label: str = "block-encoding") -> float:
        """
        Asserts the ledger bound against the known target.

        Raises:
            BoundViolation: If the measured error exceeds eps_bound + BOUND_TOLERANCE.
        """
        err = self.actual_error()
        if err is None:
            return 0.0
        if err > self.eps_bound + config.BOUND_TOLERANCE:
            raise BoundViolation(f"{label}: error {err:.3e} exceeds bound {self.eps_bound:.3e}.")
        return err


class VectorEncoding(BaseModel):
    """
    A vector-encoding: `vec` is the exact leading column (<0|_a (x) I) U |0>_{a+n}
    and alpha * vec approximates the unit vector `target` within eps_bound.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    vec: np.ndarray
    alpha: float = Field(..., gt=0.0)
    ancillas: int = Field(..., ge=0)
    eps_bound: float = Field(0.0, ge=0.0)
    target: Optional[np.ndarray] = None
    realization: Optional[np.ndarray] = None
    depth: str = "O(1)"

    @field_validator("vec", mode="before")
    @classmethod
    def _coerce_vec(cls, value: Any) -> np.ndarray:
        return linalg.as_cvector(value)

    @field_validator("target", mode="before")
    @classmethod
    def _coerce_target(cls, value: Any) -> Optional[np.ndarray]:
        return _optional_cvector(value)

    @field_validator("realization", mode="before")
    @classmethod
    def _coerce_realization(cls, value: Any) -> Optional[np.ndarray]:
        return _optional_cmatrix(value)

    @model_validator(mode="after")
    def _check_invariants(self) -> "VectorEncoding":
        Ledger(alpha=self.alpha, ancillas=self.ancillas, eps_bound=self.eps_bound)
        norm = float(np.linalg.norm(self.vec))
        if norm > 1.0 + config.BLOCK_NORM_TOLERANCE:
            raise ContractViolation(f"Encoded vector has norm {norm:.12g} > 1.")
        if self.target is not None:
            if self.target.shape != self.vec.shape:
                raise DimensionMismatch(f"Target length {self.target.shape} != vec length {self.vec.shape}.")
            t_norm = float(np.linalg.norm(self.target))
            if abs(t_norm - 1.0) > config.BOUND_TOLERANCE:
                raise ContractViolation(f"Target has norm {t_norm:.12g}, expected 1.")
        if self.realization is not None:
            expected = self.vec.shape[0] * 2**self.ancillas
            if self.realization.shape != (expected, expected):
                raise DimensionMismatch(f"Realization of shape {self.realization.shape} has the wrong size.")
            if not linalg.is_unitary(self.realization):
                raise ContractViolation("Realization is not unitary.")
            column = self.realization[: self.vec.shape[0], 0]
            if np.max(np.abs(column - self.vec)) > config.UNITARY_TOLERANCE:
                raise ContractViolation("Realization's leading column differs from vec.")
        return self

    @property
    def n_qubits(self) -> int:
        return linalg.num_qubits(self.vec.shape[0])

    @property
    def total_qubits(self) -> int:
        return self.n_qubits + self.ancillas

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vec))

    @property
    def ledger(self) -> Ledger:
        return Ledger(alpha=self.alpha, ancillas=self.ancillas, eps_bound=self.eps_bound, depth_symbol=self.depth)

    def actual_error(self) -> Optional[float]:
        """||target - alpha * vec||_2, or None without a target."""
        if self.target is None:
            return None
        return float(np.linalg.norm(self.target - self.alpha * self.vec))

    def check_bound(self, label: str = "vector-encoding") -> float:
        """
        Asserts the ledger bound against the known target.

        Raises:
            BoundViolation: If the measured error exceeds eps_bound + BOUND_TOLERANCE.
        """
        err = self.actual_error()
        if err is None:
            return 0.0
        if err > self.eps_bound + config.BOUND_TOLERANCE:
            raise BoundViolation(f"{label}: error {err:.3e} exceeds bound {self.eps_bound:.3e}.")
        return err


class ChebyshevPoly(BaseModel):
    """
    A polynomial in the Chebyshev-T basis with its certificate.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    coeffs: np.ndarray
    parity: Literal["odd", "even", "none"]
    sup_bound: float = Field(..., ge=0.0, description="Certified max |P| on [-1, 1].")
    certified_eps: float = Field(0.0, ge=0.0, description="Certified approximation error.")
    interval_c: float = Field(1.0, gt=0.0, le=1.0, description="Certification interval [-c, c].")

    @field_validator("coeffs", mode="before")
    @classmethod
    def _coerce_coeffs(cls, value: Any) -> np.ndarray:
        coeffs = np.asarray(value, dtype=np.float64).reshape(-1)
        if coeffs.size == 0:
            raise ContractViolation("A polynomial needs at least one coefficient.")
        return coeffs

    @model_validator(mode="after")
    def _check_parity(self) -> "ChebyshevPoly":
        if self.parity == "odd" and np.any(self.coeffs[0::2] != 0.0):
            raise ContractViolation("Odd polynomial has even-degree coefficients.")
        if self.parity == "even" and np.any(self.coeffs[1::2] != 0.0):
            raise ContractViolation("Even polynomial has odd-degree coefficients.")
        return self

    @property
    def degree(self) -> int:
        return int(self.coeffs.shape[0] - 1)

    def __call__(self, x):
        return np.polynomial.chebyshev.chebval(x, self.coeffs)


class ClassicalQram(BaseModel):
    """Classical-data memory: `words[i]` holds a `word_bits`-bit integer."""

    model_config = ConfigDict(frozen=True)

    words: List[int]
    word_bits: int = Field(..., ge=1, le=62)

    @model_validator(mode="after")
    def _check_words(self) -> "ClassicalQram":
        linalg.num_qubits(len(self.words))
        limit = 2**self.word_bits
        for i, word in enumerate(self.words):
            if not 0 <= word < limit:
                raise ContractViolation(f"Word {word} at address {i} does not fit in {self.word_bits} bits.")
        return self

    @property
    def address_bits(self) -> int:
        return linalg.num_qubits(len(self.words))

    def write(self, addr: int, word: int) -> "ClassicalQram":
        """Returns a new memory with `word` stored at `addr`."""
        if not 0 <= addr < len(self.words):
            raise ContractViolation(f"Address {addr} out of range [0, {len(self.words)}).")
        words = list(self.words)
        words[addr] = int(word)
        return ClassicalQram(words=words, word_bits=self.word_bits)


class StatePrepTree(BaseModel):
    """
    Binary tree of partial squared norms over the leaves of x. levels[0] is the
    root (||x||^2) and levels[n] holds |x_i|^2.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    leaves: np.ndarray
    levels: List[np.ndarray]

    @field_validator("leaves", mode="before")
    @classmethod
    def _coerce_leaves(cls, value: Any) -> np.ndarray:
        return linalg.as_cvector(value)

    @model_validator(mode="after")
    def _check_tree(self) -> "StatePrepTree":
        n = linalg.num_qubits(self.leaves.shape[0])
        if len(self.levels) != n + 1:
            raise ContractViolation(f"Tree over 2^{n} leaves needs {n + 1} levels.")
        for depth in range(n):
            parent, child = self.levels[depth], self.levels[depth + 1]
            if parent.shape[0] != 2**depth or child.shape[0] != 2 ** (depth + 1):
                raise ContractViolation(f"Level {depth} has the wrong width.")
            if not np.allclose(parent, child[0::2] + child[1::2], rtol=1e-12, atol=1e-12):
                raise ContractViolation(f"Internal nodes at level {depth} are not sums of their children.")
        return self

    @property
    def n_qubits(self) -> int:
        return len(self.levels) - 1


class MatrixQramStructure(BaseModel):
    """Column decomposition W[:, j] = a_j w_j with d-bit arccos angle words."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    unit_columns: np.ndarray = Field(..., description="Matrix whose column j is w_j.")
    col_norms: np.ndarray
    angle_words: List[int]
    d: int = Field(..., ge=1, le=config.MAX_ANGLE_BITS)

    @field_validator("unit_columns", mode="before")
    @classmethod
    def _coerce_columns(cls, value: Any) -> np.ndarray:
        return linalg.as_cmatrix(value)

    @field_validator("col_norms", mode="before")
    @classmethod
    def _coerce_norms(cls, value: Any) -> np.ndarray:
        return np.asarray(value, dtype=np.float64).reshape(-1)

    @model_validator(mode="after")
    def _check_structure(self) -> "MatrixQramStructure":
        dim = self.unit_columns.shape[1]
        if self.col_norms.shape[0] != dim or len(self.angle_words) != dim:
            raise DimensionMismatch("Column norms and angle words must match the column count.")
        lengths = np.linalg.norm(self.unit_columns, axis=0)
        if np.max(np.abs(lengths - 1.0)) > config.UNITARY_TOLERANCE:
            raise ContractViolation("Stored columns are not unit vectors.")
        if np.any(self.col_norms < 0.0) or np.any(self.col_norms > 1.0):
            raise ContractViolation("Column norms must lie in [0, 1].")
        if any(not 0 <= b < 2**self.d for b in self.angle_words):
            raise ContractViolation(f"Angle words must fit in {self.d} bits.")
        return self

    @property
    def n_qubits(self) -> int:
        return linalg.num_qubits(self.unit_columns.shape[0])

    def reconstruct(self) -> np.ndarray:
        return self.unit_columns * self.col_norms[np.newaxis, :]


class ConvKernel(BaseModel):
    """Rank-4 filter tensor K[out-channel][in-channel][row][col]."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    K: np.ndarray

    @field_validator("K", mode="before")
    @classmethod
    def _coerce_kernel(cls, value: Any) -> np.ndarray:
        kernel = np.asarray(value, dtype=np.float64)
        if kernel.ndim != 4:
            raise DimensionMismatch(f"Kernel must be rank 4, got shape {kernel.shape}.")
        if not np.all(np.isfinite(kernel)):
            raise ContractViolation("Kernel has non-finite entries.")
        return kernel

    @model_validator(mode="after")
    def _check_shape(self) -> "ConvKernel":
        c_out, c_in, rows, cols = self.K.shape
        if c_out != c_in or rows != cols:
            raise DimensionMismatch(f"Kernel shape {self.K.shape} is not [C][C][D][D].")
        linalg.num_qubits(c_out)
        linalg.num_qubits(rows)
        return self

    @classmethod
    def padded(cls, raw: Any) -> "ConvKernel":
        """Zero-pads channels and filter sides up to powers of two."""
        kernel = np.asarray(raw, dtype=np.float64)
        if kernel.ndim != 4:
            raise DimensionMismatch(f"Kernel must be rank 4, got shape {kernel.shape}.")
        channels = _next_power_of_two(max(kernel.shape[0], kernel.shape[1]))
        width = _next_power_of_two(max(kernel.shape[2], kernel.shape[3]))
        out = np.zeros((channels, channels, width, width))
        out[: kernel.shape[0], : kernel.shape[1], : kernel.shape[2], : kernel.shape[3]] = kernel
        return cls(K=out)

    @property
    def C(self) -> int:
        return int(self.K.shape[0])

    @property
    def D(self) -> int:
        return int(self.K.shape[2])


class ConvMatrix(BaseModel):
    """Matrix form of a multi-filter convolution with its norm metadata."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray
    spectral_norm: float = Field(..., ge=0.0)
    kernel_l1: float = Field(..., ge=0.0)
    channels: int
    width: int

    @property
    def ratio(self) -> float:
        return self.kernel_l1 / self.spectral_norm if self.spectral_norm > 0 else float("inf")

    @property
    def ratio_bound_ok(self) -> bool:
        return self.ratio <= self.width * self.channels**1.5 * (1.0 + 1e-12)


class PoolingSpec(BaseModel):
    """Contiguous binning of an N-dimensional vector into C classes."""

    model_config = ConfigDict(frozen=True)

    c_bins: int = Field(..., ge=1)
    input_dim: int = Field(..., ge=1)

    @model_validator(mode="after")
    def _check_divisible(self) -> "PoolingSpec":
        linalg.num_qubits(self.c_bins)
        linalg.num_qubits(self.input_dim)
        if self.input_dim % self.c_bins != 0:
            raise ContractViolation(f"{self.c_bins} bins do not divide dimension {self.input_dim}.")
        return self

    @property
    def bin_size(self) -> int:
        return self.input_dim // self.c_bins


class ActivationMeta(BaseModel):
    """The function applied by an amplitude transform, with its Lipschitz data."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    func: Callable[[np.ndarray], np.ndarray]
    lipschitz: float = Field(..., gt=0.0)
    gamma_bound: float = Field(..., gt=0.0, description="Upper bound on max |p(x)/x|.")
    eps1: float = Field(..., gt=0.0)


class ResidualBlockSpec(BaseModel):
    """Skip-norm block parameters: weight_be encodes W / kappa with ||W||_2 <= 1."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    weight_be: BlockEncoding
    kappa: float = Field(2.0, ge=1.0, le=2.0)
    eps1: float = Field(..., gt=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_weight_norm(self) -> "ResidualBlockSpec":
        norm = self.kappa * self.weight_be.alpha * linalg.spectral_norm(self.weight_be.block)
        if norm > 1.0 + config.BOUND_TOLERANCE:
            raise ContractViolation(f"Weight has spectral norm {norm:.12g} > 1.")
        return self


class StackSpec(BaseModel):
    """k skip-norm blocks sharing one final error budget."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    blocks: List[ResidualBlockSpec] = Field(..., min_length=1)
    eps: float = Field(..., gt=0.0)

    @property
    def k(self) -> int:
        return len(self.blocks)

    def layer_budget(self, i: int) -> float:
        """delta_i = eps / 1424^(k-i), the error allowed after block i (1-based)."""
        return self.eps / config.STACK_ERROR_GROWTH ** (self.k - i)

    def layer_eps1(self, i: int) -> float:
        """Normalization accuracy for block i: 2 eps / 1424^k for the first, delta_(i-1) after."""
        if i == 1:
            return 2.0 * self.eps / config.STACK_ERROR_GROWTH**self.k
        return self.layer_budget(i - 1)


class NetworkSpec(BaseModel):
    """
    Declarative description of a residual convolutional network run.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str = Field("network", description="Label used in reports.")
    m: int = Field(..., ge=1, le=6, description="log2 of the image side M.")
    channels_in: int = Field(..., ge=1, description="Input channels before null-channel padding.")
    channel_fanout: int = Field(1, ge=1, description="Equal copies concatenated after loading.")
    k: int = Field(..., ge=1, description="Residual depth.")
    kernels: List[np.ndarray] = Field(..., description="One [C][C][D][D] tensor per block.")
    final_w: Optional[np.ndarray] = Field(None, description="Dense output-layer matrix.")
    c_bins: int = Field(..., ge=1, description="Number of output classes.")
    tau: float = Field(config.OUTPUT_TAU, gt=0.5, lt=1.0)
    epsilon: float = Field(1e-2, gt=0.0, le=1.0, description="Target l2 error on y.")
    regime: Literal[1, 2, 3] = 1
    d_paths: int = Field(1, ge=1, le=3, description="Bilinear paths tensored at the input.")
    seed: int = 0
    angle_bits: Optional[int] = Field(None, ge=1, le=config.MAX_ANGLE_BITS)
    input: Optional[np.ndarray] = Field(None, description="Input tensor [channels_in][M][M].")
    paths: Optional[List[np.ndarray]] = Field(None, description="Bilinear path vectors.")

    @field_validator("kernels", mode="before")
    @classmethod
    def _coerce_kernels(cls, value: Any) -> List[np.ndarray]:
        return [np.asarray(k, dtype=np.float64) for k in value]

    @field_validator("final_w", "input", mode="before")
    @classmethod
    def _coerce_array(cls, value: Any) -> Optional[np.ndarray]:
        if value is None:
            return None
        return np.asarray(value, dtype=np.complex128)

    @field_validator("paths", mode="before")
    @classmethod
    def _coerce_paths(cls, value: Any) -> Optional[List[np.ndarray]]:
        if value is None:
            return None
        return [np.asarray(p, dtype=np.complex128).reshape(-1) for p in value]

    @model_validator(mode="after")
    def _check_consistency(self) -> "NetworkSpec":
        if self.regime == 3 and self.final_w is not None:
            raise ValueError("Regime 3 networks have no final linear layer (final_w must be absent).")
        if len(self.kernels) != self.k:
            raise ValueError(f"Expected {self.k} kernels, got {len(self.kernels)}.")
        if not linalg.is_power_of_two(self.channel_fanout):
            raise ValueError("channel_fanout must be a power of two.")
        for i, kernel in enumerate(self.kernels):
            padded = ConvKernel.padded(kernel)
            if padded.C != self.conv_channels:
                raise ValueError(f"kernels[{i}] has {padded.C} channels after padding, expected {self.conv_channels}.")
        if not linalg.is_power_of_two(self.c_bins) or self.latent_dim % self.c_bins != 0:
            raise ValueError(f"c_bins={self.c_bins} must be a power of two dividing {self.latent_dim}.")
        if self.final_w is not None and self.final_w.shape != (self.latent_dim, self.latent_dim):
            raise ValueError(f"final_w must be {self.latent_dim}x{self.latent_dim}.")
        if self.d_paths > 1 and self.regime == 1:
            raise ValueError("Bilinear inputs are loaded without QRAM (regimes 2 and 3).")
        return self

    @property
    def side(self) -> int:
        return 2**self.m

    @property
    def padded_channels(self) -> int:
        return _next_power_of_two(self.channels_in)

    @property
    def conv_channels(self) -> int:
        return self.padded_channels * self.channel_fanout

    @property
    def input_dim(self) -> int:
        return self.padded_channels * self.side**2

    @property
    def latent_dim(self) -> int:
        return self.conv_channels * self.side**2


class StageRecord(BaseModel):
    """Per-stage ledger record of a pipeline or block invocation."""

    stage: str
    alpha: float
    ancillas: int
    eps_bound: float
    eps_actual: Optional[float] = None
    norm_floor: Optional[float] = None
    norm_value: Optional[float] = None
    passed: bool = True


class InferenceReport(BaseModel):
    """Verification record of one quantum inference run against the classical oracle."""

    network: str
    regime: int
    epsilon: float
    stages: List[StageRecord] = Field(default_factory=list)
    y_classical: List[float]
    y_quantum: List[float]
    histogram: Optional[List[int]] = None
    shots: int = 0
    l2_error: float = Field(..., ge=0.0)
    l1_error: float = Field(..., ge=0.0)
    argmax_agree: bool
    budget_notes: List[str] = Field(default_factory=list)
    conv_layers: List[Dict[str, Any]] = Field(default_factory=list, description="Per-layer convolution norms.")
    final_alpha: float
    final_ancillas: int
    final_eps_bound: float
    final_encoding: Optional[Dict[str, Any]] = Field(None, description="Encoding dump of the pooled state.")
    passed: bool
    generated_at: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())


class ComparisonSummary(BaseModel):
    l2_distance: float
    l1_distance: float
    argmax_agree: bool
    passed: bool
    stage_table: List[dict] = Field(default_factory=list)


class LemmaRecord(BaseModel):
    """One randomized case of a verification suite."""

    lemma: str
    case: int
    eps_bound: float
    eps_actual: float
    ledger_ok: bool
    passed: bool
    detail: str = ""


class RunConfig(BaseModel):
    """Validated command-line configuration."""

    model_config = ConfigDict(str_strip_whitespace=True)

    command: Literal["verify", "run", "build-qram"]
    config_path: Optional[str] = None
    mode: Literal["semantic", "circuit"] = "semantic"
    seed: int = config.DEFAULT_SEED
    out_path: Optional[str] = None
    cases: int = Field(config.DEFAULT_CASES, ge=1)
    shots: int = Field(config.DEFAULT_SHOTS, ge=0)
    rescale: bool = False
    angle_bits: int = Field(config.DEFAULT_ANGLE_BITS, ge=1, le=config.MAX_ANGLE_BITS)
    tolerance: Optional[float] = Field(None, gt=0.0, description="Override of BOUND_TOLERANCE.")
    inject_fault: Optional[str] = Field(None, description="Suite whose ledger scale is corrupted (test hook).")

    @model_validator(mode="after")
    def _check_paths(self) -> "RunConfig":
        if self.command in ("run", "build-qram") and not self.config_path:
            raise ValueError(f"'{self.command}' needs --config.")
        return self


def _next_power_of_two(value: int) -> int:
    return 1 << max(0, int(value) - 1).bit_length()


if __name__ == "__main__":
    sample = VectorEncoding(vec=[1.0, 0.0], alpha=1.0, ancillas=0, target=[1.0, 0.0])
    print(sample.ledger.model_dump_json(indent=2))
    print(PoolingSpec(c_bins=2, input_dim=8).bin_size)
