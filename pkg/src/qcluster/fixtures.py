"""Reference expansions and product identities used as exact test oracles.

Torus fixtures are frame-1 expansions written in the ``TorusElement`` text
form; product fixtures pair two expressions of :mod:`qcluster.expr` that
must agree in every frame.
"""
from __future__ import annotations

from dataclasses import dataclass

from .cluster import FrameLike
from .expr import evaluate
from .torus import TorusElement

__all__ = [
    "TorusFixture",
    "ProductFixture",
    "TORUS_FIXTURES",
    "PRODUCT_FIXTURES",
    "F2_AS_PRINTED",
    "F2_PRINTED_ONLY",
    "F2_COMPUTED_ONLY",
]

_QQ4 = "(q^(-3/2) + q^(-1/2) + q^(1/2) + q^(3/2))"
_Q5 = "(q^-2 + q^-1 + 2 + q + q^2)"


@dataclass(frozen=True)
class TorusFixture:
    name: str
    expression: str
    expansion: str

    def expected(self) -> TorusElement:
        return TorusElement.parse(self.expansion)

    def computed(self) -> TorusElement:
        return evaluate(self.expression, 1)


@dataclass(frozen=True)
class ProductFixture:
    name: str
    lhs: str
    rhs: str

    def difference(self, frame: FrameLike = 1) -> TorusElement:
        return evaluate(self.lhs, frame) - evaluate(self.rhs, frame)


TORUS_FIXTURES = (
    TorusFixture("X0", "X[0]", "(1,-1) + (0,-1)"),
    TorusFixture(
        "X-1",
        "X[-1]",
        f"(3,-4) + {_QQ4}*(2,-4) + {_Q5}*(1,-4) + {_QQ4}*(0,-4) + (-1,0) + (-1,-4)",
    ),
    TorusFixture(
        "X-2",
        "X[-2]",
        "(-1,1) + (2,-3) + (q^-1 + 1 + q)*(1,-3) + (q^-1 + 1 + q)*(0,-3) + (-1,-3)",
    ),
    TorusFixture("X3", "X[3]", "(-1,4) + (-1,0)"),
    TorusFixture("X4", "X[4]", "(-1,3) + (-1,-1) + (0,-1)"),
    TorusFixture("delta", "delta", "(-1,-2) + (-1,2) + (1,-2) + (q^(-1/2) + q^(1/2))*(0,-2)"),
    # the grouped term at (-1,-4) is printed as (-1,4) in the source display;
    # F_2 = delta^2 - 2 forces (-1,-4), see F2_AS_PRINTED
    TorusFixture(
        "F2",
        "F[2]",
        f"(-2,-4) + (q^-2 + q^2)*(-2,0) + {_Q5}*(0,-4) + {_QQ4}*(-1,-4) + {_QQ4}*(1,-4) + {_QQ4}*(-1,0)"
        " + (-2,4) + (2,-4)",
    ),
)

F2_AS_PRINTED = (
    f"(-2,-4) + (q^-2 + q^2)*(-2,0) + {_Q5}*(0,-4) + {_QQ4}*(-1,4) + {_QQ4}*(1,-4) + {_QQ4}*(-1,0)"
    " + (-2,4) + (2,-4)"
)
F2_PRINTED_ONLY = (-1, 4)
F2_COMPUTED_ONLY = (-1, -4)

PRODUCT_FIXTURES = (
    ProductFixture("X1X3", "X[1]*X[3]", "q^2*X[2]^4 + 1"),
    ProductFixture("X2X6", "X[2]*X[6]", "q*X[4]^2 + q^(-1/2)*delta"),
    ProductFixture("X1X4", "X[1]*X[4]", "q^(-1/2)*X[0] + q^(3/2)*X[2]^3"),
    ProductFixture(
        "X1X6", "X[1]*X[6]", "q^(-3/2)*X[-2] + (q^(-1/2) + q^(1/2) + q^(3/2))*X[2] + q^2*X[2]*X[3]"
    ),
    ProductFixture(
        "X1X5",
        "X[1]*X[5]",
        "q^4*X[3]^2 + (q^(1/2) + q^(3/2) + q^(5/2) + q^(7/2))*X[3] + q^-2*F[2] + (q^-2 + q^-1 + 2 + q + q^2)",
    ),
    ProductFixture(
        "X1F2", "X[1]*F[2]", "q^-2*X[-1] + q^2*X[3] + (q^(-3/2) + q^(-1/2) + q^(1/2) + q^(3/2))"
    ),
    ProductFixture("X2F2", "X[2]*F[2]", "q^-1*X[-2] + q*X[6]"),
    ProductFixture("X1delta", "X[1]*delta", "q^-1*X[0]^2 + q*X[2]^2"),
    ProductFixture(
        "delta-from-X1..X4",
        "delta",
        "q^-1*X[4]^2*X[1] - q^-2*(q^-1*X[3] + q^(-1/2) + q^(1/2))*X[2]^2",
    ),
    ProductFixture("X3F2", "X[3]*F[2]", "q^-2*X[1] + q^2*X[5] + (q^(-3/2) + q^(-1/2) + q^(1/2) + q^(3/2))"),
    ProductFixture("X2X2X0X0", "X[2]^2*X[0]^2", "q^-2*X[1]^2 + (q^(-3/2) + q^(-1/2))*X[1] + 1"),
    ProductFixture("X2X2delta", "X[2]^2*delta", "q^-1*X[1] + q*X[3] + (q^(-1/2) + q^(1/2))"),
    ProductFixture("X2X2X4X4", "X[2]^2*X[4]^2", "q^2*X[3]^2 + (q^(1/2) + q^(3/2))*X[3] + 1"),
)
