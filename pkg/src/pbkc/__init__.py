"""Pseudo-Boolean functions as tensor trains, tree tensor networks,
edge-valued decision diagrams and structured circuits, generic over five
semirings, with conversions and property checks verified against a dense
oracle."""

from .circuit import Circuit, Gate, Verdict
from .dense import DenseFunction, DenseTensor, contract, equal, tabulate, tabulate_all
from .errors import (
    DimMismatch,
    InvariantViolation,
    LengthMismatch,
    MissingOutputIndex,
    NonzeroToleranceOnExactSemiring,
    NotOrdered,
    NotStructured,
    ParseError,
    PbkcError,
    SemiringMismatch,
    ShapeMismatch,
    TooManyVariables,
    UnassignedVariable,
    UnsupportedConversion,
    UnsupportedFlavor,
    VariableNotInVtree,
)
from .evdd import Edge, Evdd
from .generate import GeneratorSpec, generate
from .io import Document, load, save
from .semiring import (
    BOOLEAN,
    COMPLEX128,
    FLOAT64,
    INTEGER,
    RATIONAL,
    Semiring,
    SemiringId,
    SemiringValue,
    get_semiring,
)
from .tt import TensorTrain
from .ttn import TreeTensorNetwork
from .vtree import Vtree

__version__ = "0.1.0"
