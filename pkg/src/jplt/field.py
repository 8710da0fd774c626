"""Prime fields GF(p) and the server's message store.

Every value in the protocol lives in a prime field of odd size up to 2**61.
Messages are length-m vectors over GF(p); the protocol only ever combines
them GF(p)-linearly, coordinate by coordinate, so a message is just a numpy
row and no extension-field multiplication is needed anywhere.

All arrays hold canonical residues in [0, p). For p < 2**31 they are int64
(products fit in int64); beyond that they are object arrays of Python ints,
which keeps arithmetic exact at any size.
"""

from dataclasses import dataclass

import numpy as np

from .backend import work_dtype
from .errors import DimensionMismatch, InvalidField, ParamInvalid, ZeroInverse

MAX_MODULUS = 1 << 61

# Deterministic Miller-Rabin witness set for n < 2**64.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic primality test for 0 <= n < 2**64."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field GF(p) for a prime 2 <= p < 2**61."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not (2 <= self.p < MAX_MODULUS):
            raise InvalidField(f"modulus must be an int in [2, 2**61), got {self.p}")
        if not is_prime(self.p):
            raise InvalidField(f"modulus {self.p} is not prime")

    @property
    def dtype(self):
        return work_dtype(self.p)

    def residues(self, data, shape=None):
        """Coerce data to a canonical-residue array of this field's dtype."""
        arr = np.asarray(data, dtype=object) % self.p
        if self.dtype is not object:
            arr = arr.astype(np.int64)
        if shape is not None and arr.shape != shape:
            raise DimensionMismatch(f"expected shape {shape}, got {arr.shape}")
        return arr


def inv_mod(a, p):
    """Inverse of a mod p; ZeroInverse if a is 0 mod p."""
    a %= p
    if a == 0:
        raise ZeroInverse(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


def pow_mod(a, e, p):
    """a**e mod p for e >= 0, with 0**0 == 1."""
    if e < 0:
        raise ParamInvalid(f"exponent must be nonnegative, got {e}")
    return pow(a % p, e, p)


def linear_combination(coeffs, messages, p):
    """sum_i coeffs[i] * messages[i] mod p, one residue per coordinate.

    coeffs is length n, messages is n x m; returns a length-m vector.
    """
    coeffs = np.asarray(coeffs)
    messages = np.asarray(messages)
    if coeffs.ndim != 1 or messages.ndim != 2 or coeffs.shape[0] != messages.shape[0]:
        raise DimensionMismatch(
            f"coeffs {coeffs.shape} does not match messages {messages.shape}"
        )
    return ((coeffs[:, None] * messages) % p).sum(axis=0) % p


@dataclass(frozen=True, eq=False)
class Dataset:
    """K messages of m field elements each, held as a K x m residue array."""

    field: PrimeField
    messages: np.ndarray

    def __post_init__(self):
        msgs = np.asarray(self.messages)
        if msgs.ndim != 2 or msgs.shape[0] < 1 or msgs.shape[1] < 1:
            raise DimensionMismatch(
                f"messages must be a K x m array with K, m >= 1, got shape {msgs.shape}"
            )
        msgs = self.field.residues(msgs)
        msgs.setflags(write=False)
        object.__setattr__(self, "messages", msgs)

    @property
    def num_messages(self):
        return self.messages.shape[0]

    @property
    def msg_len(self):
        return self.messages.shape[1]


def random_dataset(field, num_messages, msg_len, rng):
    """Uniform random Dataset drawn from rng (numpy Generator)."""
    if num_messages < 1 or msg_len < 1:
        raise ParamInvalid("num_messages and msg_len must be >= 1")
    # p < 2**61 always fits numpy's int64 bound for the exclusive high end
    raw = rng.integers(field.p, size=(num_messages, msg_len), dtype=np.int64)
    return Dataset(field, raw)
