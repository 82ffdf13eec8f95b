"""Exception types raised by the library."""


class EntanglementError(Exception):
    """Base class for errors raised by entprod."""


class DomainError(EntanglementError, ValueError):
    """An argument lies outside the domain of an operation."""


class NotHermitianError(DomainError):
    def __init__(self, asymmetry: float, tol: float):
        self.asymmetry = asymmetry
        super().__init__(
            f"matrix is not Hermitian: max |H - H^+| = {asymmetry:.3e} exceeds {tol:.0e}"
        )


class TracelessOperator(EntanglementError):
    """The operator trace vanishes, so its non-entangling counterpart is undefined.

    The counterpart divides by ``Tr(A)**(N-1)`` and requires ``0 != |Tr A|``.
    """

    def __init__(self, trace: complex, norm: float, t: float | None = None):
        self.trace = trace
        self.norm = norm
        self.t = t
        where = "" if t is None else f" at t={t!r}"
        super().__init__(
            f"operator is (numerically) traceless{where}: |Tr A| = {abs(trace):.3e}"
            f" <= 1e-12 * ||A||_2 = {1e-12 * norm:.3e}; the condition 0 != |Tr A| is violated"
        )


class NumericalInstability(EntanglementError):
    """An extrapolation or iterative estimate failed to converge."""
