"""Parameter vector for the six-parameter positive-support family.

The density kernel is y^t6 * exp(-t1*y - (t2*y^t3 + t4)^t5) on y > 0.
Validity encodes the integrability of that kernel. General constraints:
t1, t2, t4 >= 0 (t1 and t2 not both zero), t6 > -1 when t1 > 0 or the inner
and outer powers share a sign, t6 < -1 when t1 = 0 and they differ. When t5
is a natural number the kernel is a polynomial exponent and t1, t2, t4 may
extend to negative values under case-by-case integrability conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .specfun import DomainError


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class ParamVector:
    t1: float
    t2: float
    t3: float
    t4: float
    t5: float
    t6: float

    def as_tuple(self) -> tuple[float, ...]:
        return (self.t1, self.t2, self.t3, self.t4, self.t5, self.t6)

    @property
    def theta5_natural(self) -> bool:
        return self.t5 >= 1 and float(self.t5).is_integer()

    def validity(self) -> tuple[bool, str]:
        """(is_valid, reason). Reason is '' when valid.

        A natural t5 relaxes the sign constraints on t1, t2, t4; the general
        rule still applies, so a vector is valid if either check passes.
        """
        if not all(math.isfinite(v) for v in self.as_tuple()):
            return False, "non-finite parameter"
        ok, why = self._validity_general()
        if ok or not self.theta5_natural:
            return ok, why
        return self._validity_natural_t5()

    def _validity_general(self) -> tuple[bool, str]:
        t1, t2, t3, t4, t5, t6 = self.as_tuple()
        if t1 < 0 or t2 < 0 or t4 < 0:
            return False, "t1, t2, t4 must be nonnegative for non-integer t5"
        if t1 == 0 and t2 == 0:
            return False, "t1 and t2 cannot both be zero"

        power_inactive = t2 == 0 or t3 == 0 or t5 == 0
        if power_inactive:
            if t1 <= 0:
                return False, "constant power term requires t1 > 0"
            if t2 == 0 and t4 == 0 and t5 < 0:
                return False, "0^t5 undefined for t5 < 0"
            if not t6 > -1:
                return False, "t6 must exceed -1 when t1 > 0"
            return True, ""

        if t1 > 0:
            if t6 > -1:
                return True, ""
            # t6 <= -1 is still integrable when the power term blows up at the
            # origin, i.e. (t2 y^t3)^t5 -> +inf as y -> 0 (needs t4 = 0)
            if t4 == 0 and t3 * t5 < 0:
                return True, ""
            return False, "t6 <= -1 with t1 > 0 needs t4 = 0 and t3*t5 < 0"

        # t1 == 0, active power term
        if t4 == 0:
            p = t3 * t5
            if p == 0:
                return False, "degenerate power term with t1 = 0"
            if not (t6 + 1) / p > 0:
                if _sign(t3) == _sign(t5):
                    return False, "t6 must exceed -1 when sign(t3) == sign(t5)"
                return False, "t6 must be below -1 when sign(t3) != sign(t5)"
            return True, ""
        # t1 == 0, t4 > 0: the power term tends to t4^t5 > 0 wherever the
        # t2-part vanishes, so integrability needs growth on both ends.
        if t3 > 0 and t5 > 0 and t6 > -1:
            return True, ""
        return False, "t1 = 0 with t4 > 0 requires t3 > 0, t5 > 0, t6 > -1"

    def _validity_natural_t5(self) -> tuple[bool, str]:
        t1, t2, t3, t4, t5, t6 = self.as_tuple()
        m = int(t5)
        if t2 == 0:
            # polynomial term collapses to the constant t4^m
            if t1 <= 0:
                return False, "t2 = 0 requires t1 > 0"
            if not t6 > -1:
                return False, "t6 must exceed -1"
            return True, ""
        if t3 < 0 and t2 < 0:
            return False, "t2 < 0 with t3 < 0 diverges at the origin"
        if m % 2 == 0:
            if t1 <= 0:
                return False, "even t5 requires t1 > 0"
            if not t6 > -1:
                return False, "t6 must exceed -1 when t1 > 0"
            return True, ""
        # odd m: tail dominance between the linear and the power term.
        p = t3 * m
        if p > 1:
            ok = t2 > 0
            why = "t3*t5 > 1 with odd t5 requires t2 > 0"
        elif p == 1:
            ok = (t1 + t2**m) > 0
            why = "t3*t5 = 1 with odd t5 requires t1 + t2^t5 > 0"
        else:
            ok = t1 > 0
            why = "t3*t5 < 1 with odd t5 requires t1 > 0"
        if not ok:
            return False, why
        if t1 < 0 and not p > 1:
            return False, "t1 < 0 requires a dominating power term"
        if t1 == 0 and t4 == 0:
            if not (t6 + 1) / p > 0:
                return False, "t6 + 1 and t3*t5 must share a sign when t1 = 0"
        elif not t6 > -1:
            return False, "t6 must exceed -1"
        return True, ""

    @property
    def is_valid(self) -> bool:
        return self.validity()[0]

    def require_valid(self) -> "ParamVector":
        ok, why = self.validity()
        if not ok:
            raise DomainError(f"invalid parameter vector {self.as_tuple()}: {why}")
        return self


def as_theta(obj) -> ParamVector:
    """Coerce a ParamVector or 6-sequence of reals to a ParamVector."""
    if isinstance(obj, ParamVector):
        return obj
    vals = tuple(float(v) for v in obj)
    if len(vals) != 6:
        raise DomainError(f"expected 6 parameters, got {len(vals)}")
    return ParamVector(*vals)
