"""Exception hierarchy shared by every polylu module."""


class PolyLUError(Exception):
    """Base class for all solver errors."""


class EmptyMatrix(PolyLUError):
    """Matrix dimension is zero."""


class IndexOutOfRange(PolyLUError):
    """A row or column index falls outside [0, n)."""


class NonSquare(PolyLUError):
    """Input matrix is rectangular where a square one is required."""


class UnsupportedFormat(PolyLUError):
    """Matrix Market file uses an unsupported format/field/symmetry."""


class ParseError(PolyLUError):
    """Malformed Matrix Market content.  Carries the 1-based line number."""

    def __init__(self, message, line_no):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DimensionMismatch(PolyLUError):
    """Operand dimensions are incompatible."""


class LengthMismatch(PolyLUError):
    """A vector read from a file has the wrong number of entries."""


class StructurallySingular(PolyLUError):
    """No perfect matching exists on the nonzero bipartite graph.

    ``deficient_cols`` lists the columns left unmatched.
    """

    def __init__(self, deficient_cols):
        cols = list(deficient_cols)
        super().__init__(f"structurally singular: no match for columns {cols}")
        self.deficient_cols = cols


class ZeroDiagonal(PolyLUError):
    """A diagonal entry is structurally absent after permutation."""


class CycleDetected(PolyLUError):
    """Dependency graph has a cycle (internal bug, deps must point backward)."""


class NumericBreakdown(PolyLUError):
    """Zero pivot with perturbation disabled."""


class PatternMismatch(PolyLUError):
    """Refactorization input pattern differs from the analyzed pattern."""
