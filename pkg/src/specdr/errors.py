"""Exception hierarchy.

Every error raised by the toolkit derives from :class:`SpecdrError`, which is
itself a :class:`ValueError`. The ``family`` attribute groups errors for the
command line front end, which maps each family to a distinct exit code.
"""


class SpecdrError(ValueError):
    family = "input"
    hint = ""


# -- input validation ------------------------------------------------------

class NonFinite(SpecdrError):
    pass


class DimensionMismatch(SpecdrError):
    pass


class NonSymmetric(SpecdrError):
    pass


class AsymmetricInput(NonSymmetric):
    pass


class NegativeEntry(SpecdrError):
    pass


class NonzeroDiagonal(SpecdrError):
    pass


class NegativeCount(SpecdrError):
    pass


class EmptyMargin(SpecdrError):
    hint = "drop empty rows/columns (--drop-empty) before the analysis"

    def __init__(self, side, index):
        self.side = side
        self.index = index
        super().__init__(f"{side} {index} of the contingency table sums to zero")


class BadRank(SpecdrError):
    hint = "choose a rank between 1 and min(n, p)"


class ZeroColumn(SpecdrError):
    hint = "drop constant column or disable scaling"

    def __init__(self, column):
        self.column = column
        super().__init__(f"column {column} has (numerically) zero norm")


class EmptySpectrum(SpecdrError):
    pass


# -- numerical ---------------------------------------------------------------

class NumericalError(SpecdrError):
    family = "numerical"


class RankDeficient(NumericalError):
    hint = "the basis or sketch lost rank; lower the rank or change the seed"


class NotSpd(NumericalError):
    hint = "metrics must be symmetric positive definite; regularize explicitly"


class SingularBlock(NumericalError):
    hint = "a block has collinear columns; drop or combine them"

    def __init__(self, block, detail=""):
        self.block = block
        msg = f"Gram matrix of block {block} is numerically singular"
        super().__init__(msg + (f" ({detail})" if detail else ""))


# -- front end ---------------------------------------------------------------

class ConfigError(SpecdrError):
    family = "config"


class ParseError(SpecdrError):
    family = "parse"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column!r}")
        prefix = (", ".join(where) + ": ") if where else ""
        super().__init__(prefix + message)


class MixedType(ParseError):
    pass
