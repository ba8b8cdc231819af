from typing import Annotated
from typing import Literal
from typing import Sequence
from typing import Tuple
from typing import Union

import numpy as np
import numpy.typing as npt

BoolN = Union[
    Sequence[bool],
    Annotated[npt.NDArray[np.bool_], Literal["*"]],
]
"""An array-like object of open (True) / closed (False) or occupied / empty flags."""

IntN = Union[
    Sequence[int],
    Annotated[npt.NDArray[np.int64], Literal["*"]],
]
"""An array-like object of integer distances."""

Vertex = Tuple[int, int]
"""A lattice vertex ``(i, j)``: column (horizontal coordinate) first, row second."""
