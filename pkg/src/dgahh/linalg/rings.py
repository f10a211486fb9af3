"""Coefficient rings: F_p, Z and F_p[u].

Ring objects are stateless descriptors; scalars are plain Python values.
F_p and Z scalars are ints (Z is arbitrary precision). F_p[u] scalars are
tuples of coefficients, lowest degree first, with no trailing zeros.
"""
from __future__ import annotations


class UnsupportedRingError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Ring:
    is_field = False
    kind = ""

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero()

    def from_int(self, n: int):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def key(self):
        raise NotImplementedError


class PrimeField(Ring):
    is_field = True
    kind = "Fp"

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def key(self):
        return ("Fp", self.p)

    def __repr__(self):
        return f"F_{self.p}"

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def divmod(self, a, b):
        return self.mul(a, self.inv(b)), 0

    def norm(self, a):
        return 0 if a == 0 else 1

    def is_unit(self, a):
        return a % self.p != 0

    def normalize(self, a):
        """Return (canonical associate, unit u) with canonical == a * u."""
        if a == 0:
            return 0, 1
        return 1, self.inv(a)

    def to_json(self, a):
        return a

    def from_json(self, v):
        return int(v) % self.p

    def fmt(self, a):
        return str(a)


class Integers(Ring):
    kind = "Z"

    def key(self):
        return ("Z",)

    def __repr__(self):
        return "Z"

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return int(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def divmod(self, a, b):
        return divmod(a, b)

    def norm(self, a):
        return abs(a)

    def is_unit(self, a):
        return a in (1, -1)

    def normalize(self, a):
        if a < 0:
            return -a, -1
        return a, 1

    def to_json(self, a):
        return a

    def from_json(self, v):
        return int(v)

    def fmt(self, a):
        return str(a)


class PolyRing(Ring):
    """F_p[u]; elements are coefficient tuples, constant term first."""

    kind = "FpPoly"

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def key(self):
        return ("FpPoly", self.p)

    def __repr__(self):
        return f"F_{self.p}[u]"

    def _trim(self, c):
        c = [x % self.p for x in c]
        while c and c[-1] == 0:
            c.pop()
        return tuple(c)

    def zero(self):
        return ()

    def one(self):
        return (1,)

    def u(self, k: int = 1, coeff: int = 1):
        return self._trim([0] * k + [coeff])

    def from_int(self, n):
        return self._trim([n])

    def add(self, a, b):
        n = max(len(a), len(b))
        return self._trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    def neg(self, a):
        return self._trim([-x for x in a])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return ()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return self._trim(out)

    def divmod(self, a, b):
        if not b:
            raise ZeroDivisionError("division by zero polynomial")
        inv_lead = pow(b[-1], self.p - 2, self.p)
        rem = list(a)
        q = [0] * max(len(a) - len(b) + 1, 0)
        for k in range(len(a) - len(b), -1, -1):
            c = rem[k + len(b) - 1] * inv_lead % self.p
            q[k] = c
            if c:
                for j, y in enumerate(b):
                    rem[k + j] = (rem[k + j] - c * y) % self.p
        return self._trim(q), self._trim(rem)

    def norm(self, a):
        return len(a) - 1 if a else -1

    def degree(self, a):
        return len(a) - 1 if a else -1

    def is_unit(self, a):
        return len(a) == 1

    def normalize(self, a):
        if not a:
            return (), (1,)
        inv = pow(a[-1], self.p - 2, self.p)
        return self.mul(a, (inv,)), (inv,)

    def to_json(self, a):
        return list(a)

    def from_json(self, v):
        if isinstance(v, int):
            return self._trim([v])
        return self._trim(list(v))

    def fmt(self, a):
        if not a:
            return "0"
        terms = []
        for k, c in enumerate(a):
            if not c:
                continue
            mono = "" if k == 0 else ("u" if k == 1 else f"u^{k}")
            if k == 0:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(reversed(terms))


ZZ = Integers()


def ring_to_json(ring: Ring) -> dict:
    if isinstance(ring, Integers):
        return {"kind": "Z"}
    return {"kind": ring.kind, "p": ring.p}


def ring_from_json(d: dict) -> Ring:
    kind = d.get("kind")
    if kind == "Z":
        return ZZ
    if kind == "Fp":
        return PrimeField(int(d["p"]))
    if kind == "FpPoly":
        return PolyRing(int(d["p"]))
    raise UnsupportedRingError(f"unknown ring kind {kind!r}")
