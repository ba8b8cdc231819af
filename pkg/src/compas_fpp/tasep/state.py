from fractions import Fraction
from numbers import Real
from typing import Optional
from typing import Union

import numpy
from compas.data import Data

from compas_fpp.exceptions import ContractError
from compas_fpp.exceptions import ParameterError
from compas_fpp.types import BoolN

Rate = Union[float, Fraction]


class TasepState(Data):
    """Occupancy of the ``2K`` sites ``-K + 1 ... K`` of the exclusion process.

    Position ``p`` of the vector holds site ``j = p - K + 1``,
    so position 0 is the entry site ``-K + 1`` and the last position the exit site ``K``.
    The integer code of a state has bit ``p`` set iff position ``p`` is occupied.

    Parameters
    ----------
    occupancy : BoolN
        ``2K`` flags, ``True`` for a particle.

    Examples
    --------
    >>> state = TasepState.step_configuration(2)
    >>> state.occupancy.astype(int).tolist()
    [1, 1, 0, 0]
    >>> state.to_int()
    3
    >>> state.occupied(0), state.occupied(1)
    (True, False)

    """

    @property
    def __data__(self):
        return {"occupancy": self.occupancy.astype(int).tolist()}

    def __init__(self, occupancy: BoolN, name: Optional[str] = None):
        super(TasepState, self).__init__(name=name)
        occupancy = numpy.array(occupancy, dtype=bool).ravel()
        if occupancy.size < 2 or occupancy.size % 2 != 0:
            raise ContractError("A state has 2K sites, got {}.".format(occupancy.size))
        occupancy.flags.writeable = False
        self.occupancy = occupancy

    def __repr__(self):
        return "TasepState({})".format("".join("1" if x else "0" for x in self.occupancy))

    def __eq__(self, other):
        return isinstance(other, TasepState) and numpy.array_equal(self.occupancy, other.occupancy)

    def __hash__(self):
        return hash(self.occupancy.tobytes())

    @property
    def K(self) -> int:
        return self.occupancy.size // 2

    @property
    def particles(self) -> int:
        return int(self.occupancy.sum())

    def position(self, j: int) -> int:
        """Vector position of site ``j``."""
        if j < -self.K + 1 or j > self.K:
            raise ParameterError("Site {} is outside of [-{}, {}].".format(j, self.K - 1, self.K))
        return j + self.K - 1

    def occupied(self, j: int) -> bool:
        return bool(self.occupancy[self.position(j)])

    def to_int(self) -> int:
        return int(sum(1 << p for p in numpy.flatnonzero(self.occupancy)))

    @classmethod
    def from_int(cls, code: int, K: int) -> "TasepState":
        size = 2 * K
        if code < 0 or code >= 1 << size:
            raise ContractError("State code {} does not fit {} sites.".format(code, size))
        return cls([(code >> p) & 1 for p in range(size)])

    @classmethod
    def step_configuration(cls, K: int) -> "TasepState":
        """Particles exactly on the sites ``j <= 0``: the state of the initial profile ``|j|``."""
        return cls(numpy.arange(2 * K) < K)

    @classmethod
    def empty(cls, K: int) -> "TasepState":
        return cls(numpy.zeros(2 * K, dtype=bool))

    @classmethod
    def full(cls, K: int) -> "TasepState":
        return cls(numpy.ones(2 * K, dtype=bool))


def to_fraction(value) -> Fraction:
    """Exact rational value of a rate.

    Floats are read through their shortest decimal representation, so ``0.3`` becomes ``3/10``.

    Examples
    --------
    >>> to_fraction(0.3)
    Fraction(3, 10)

    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, Real) and float(value) == value and not isinstance(value, int):
        return Fraction(repr(float(value)))
    if isinstance(value, int):
        return Fraction(value)
    raise ParameterError("Cannot convert {!r} to an exact rational.".format(value))


def check_rate(value, name: str) -> Rate:
    if isinstance(value, Fraction):
        rate = value
    elif isinstance(value, Real):
        rate = float(value)
    else:
        raise ParameterError("The {} rate must be a real number: {!r}".format(name, value))
    if not 0 <= rate <= 1:
        raise ParameterError("The {} rate must lie in [0, 1]: {}".format(name, value))
    return rate


class TasepRates(Data):
    """Probabilities of the three kinds of events of one parallel update.

    Parameters
    ----------
    alpha : float | Fraction
        A particle jumps to the empty site on its right.
    beta : float | Fraction
        A particle enters at site ``-K + 1`` if it is empty.
    gamma : float | Fraction
        The particle on site ``K`` exits.

    Notes
    -----
    The percolation correspondence uses ``alpha = beta = gamma = eps``.

    """

    @property
    def __data__(self):
        return {"alpha": _encode(self.alpha), "beta": _encode(self.beta), "gamma": _encode(self.gamma)}

    @classmethod
    def __from_data__(cls, data):
        return cls(_decode(data["alpha"]), _decode(data["beta"]), _decode(data["gamma"]))

    def __init__(self, alpha: Rate, beta: Rate, gamma: Rate, name: Optional[str] = None):
        super(TasepRates, self).__init__(name=name)
        self.alpha = check_rate(alpha, "jump")
        self.beta = check_rate(beta, "entry")
        self.gamma = check_rate(gamma, "exit")

    def __repr__(self):
        return "TasepRates(alpha={}, beta={}, gamma={})".format(self.alpha, self.beta, self.gamma)

    def __eq__(self, other):
        return isinstance(other, TasepRates) and self.as_tuple() == other.as_tuple()

    def __hash__(self):
        return hash(self.as_tuple())

    def as_tuple(self):
        return (self.alpha, self.beta, self.gamma)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(rate, Fraction) for rate in self.as_tuple())

    @property
    def is_degenerate(self) -> bool:
        """True if some rate is 0 or 1."""
        return any(rate == 0 or rate == 1 for rate in self.as_tuple())

    @classmethod
    def from_eps(cls, eps: Rate) -> "TasepRates":
        return cls(eps, eps, eps)


def _encode(rate: Rate):
    if isinstance(rate, Fraction):
        return str(rate)
    return rate


def _decode(value) -> Rate:
    if isinstance(value, str):
        return Fraction(value)
    return value
