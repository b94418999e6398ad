"""Measurement structures: bases, tight frames, ETFs, SIC-POVMs, MUETF ensembles.

A :class:`Frame` is an ordered set of N unit vectors in C^d. A
:class:`MuetfEnsemble` is M frames of common (d, N) that are equiangular
within each member and mutually unbiased across members. Frames are never
trusted on construction; :func:`verify_frame` and :func:`verify_muetf`
produce a :class:`CertificationReport` that downstream code consults.
"""
import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import CertificationError, FrameFileError, ValidationError
from .scalarfn import as_probability_vector
from .states import as_state

CERT_TOL = 1e-9
FILE_KEYS = frozenset({"dim", "count", "frames"})


def equiangular_constant(d, n):
    """Squared overlap (N - d) / (d (N - 1)) of an N-vector ETF in C^d."""
    if n < d:
        raise ValidationError(f"need N >= d, got N={n}, d={d}")
    return 0.0 if n == d else (n - d) / (d * (n - 1))


def _phase_fixed(vectors):
    v = np.array(vectors, dtype=complex)
    for row in v:
        idx = int(np.argmax(np.abs(row) > 1e-12))
        z = row[idx]
        if z != 0:
            row *= abs(z) / z
    return v


@dataclass
class CertificationReport:
    """Outcome of a structural check. `passed` is True iff every check holds."""

    kind: str
    checks: dict
    deviations: dict
    tol: float = CERT_TOL
    frame_bounds: tuple = (float("nan"), float("nan"))
    worst: dict = field(default_factory=dict)
    members: list = field(default_factory=list)

    @property
    def passed(self):
        return all(self.checks.values())

    def __bool__(self):
        return self.passed

    def lines(self):
        out = [f"{self.kind}: {'PASS' if self.passed else 'FAIL'} (tol {self.tol:g})"]
        for name, ok in self.checks.items():
            dev = self.deviations.get(name)
            extra = f" max deviation {dev:.3e}" if dev is not None else ""
            where = self.worst.get(name)
            extra += f" at {where}" if where is not None and not ok else ""
            out.append(f"  {name:<16} {'ok' if ok else 'VIOLATED'}{extra}")
        s0, s1 = self.frame_bounds
        if not math.isnan(s0):
            out.append(f"  frame bounds     S0={s0:.12g} S1={s1:.12g}")
        for i, sub in enumerate(self.members):
            if not sub.passed:
                out.extend("  " + ln for ln in [f"member {i}:"] + sub.lines())
        return out

    def __str__(self):
        return "\n".join(self.lines())


class Frame:
    """N vectors in C^d, stored as the rows of an (N, d) array."""

    def __init__(self, vectors, name=None):
        v = np.array(vectors, dtype=complex)
        if v.ndim != 2 or v.shape[0] == 0 or v.shape[1] == 0:
            raise ValidationError(f"frame vectors must form an (N, d) array, got shape {v.shape}")
        if v.shape[0] < v.shape[1]:
            raise ValidationError(f"a frame needs N >= d, got N={v.shape[0]}, d={v.shape[1]}")
        v.setflags(write=False)
        self._vectors = v
        self.name = name

    @property
    def vectors(self):
        return self._vectors

    @property
    def dim(self):
        return self._vectors.shape[1]

    @property
    def count(self):
        return self._vectors.shape[0]

    @property
    def coherence_constant(self):
        return equiangular_constant(self.dim, self.count)

    def frame_operator(self):
        v = self._vectors
        return v.T @ v.conj()

    def povm(self):
        """Elements (d/N)|phi_j><phi_j| as an (N, d, d) array."""
        v = self._vectors
        return (self.dim / self.count) * np.einsum("ni,nj->nij", v, v.conj())

    def gram(self):
        return self._vectors.conj() @ self._vectors.T

    @cached_property
    def report(self):
        return verify_frame(self)

    @property
    def is_tight(self):
        r = self.report
        return r.checks["unit_norm"] and r.checks["tight"]

    @property
    def is_orthonormal(self):
        return self.count == self.dim and self.report.passed

    def __len__(self):
        return self.count

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        return f"Frame({label}dim={self.dim}, count={self.count})"


class MuetfEnsemble:
    """M frames of common (d, N); certified lazily through :attr:`report`."""

    def __init__(self, members, name=None):
        members = [m if isinstance(m, Frame) else Frame(m) for m in members]
        if not members:
            raise ValidationError("an ensemble needs at least one member")
        shapes = {(m.dim, m.count) for m in members}
        if len(shapes) != 1:
            raise ValidationError(f"ensemble members disagree on (d, N): {sorted(shapes)}")
        self.members = tuple(members)
        self.name = name
        stacked = np.stack([m.vectors for m in members])
        stacked.setflags(write=False)
        self._stacked = stacked

    @property
    def vectors(self):
        """(M, N, d) array of all member vectors."""
        return self._stacked

    @property
    def dim(self):
        return self.members[0].dim

    @property
    def count(self):
        return self.members[0].count

    @property
    def size(self):
        return len(self.members)

    @property
    def coherence_constant(self):
        return equiangular_constant(self.dim, self.count)

    @cached_property
    def report(self):
        return verify_muetf(self)

    def require_certified(self):
        if not self.report.passed:
            raise CertificationError(f"ensemble {self.name or ''} failed certification:\n{self.report}")
        return self

    def __len__(self):
        return self.size

    def __iter__(self):
        return iter(self.members)

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        return f"MuetfEnsemble({label}dim={self.dim}, count={self.count}, members={self.size})"


def as_ensemble(obj):
    if isinstance(obj, MuetfEnsemble):
        return obj
    if isinstance(obj, Frame):
        return MuetfEnsemble([obj], name=obj.name)
    if isinstance(obj, str):
        raise ValidationError(f"expected frames, got the string {obj!r}; see builtin_ensemble")
    return MuetfEnsemble(obj)


# constructions

def computational_basis(d):
    if d < 2:
        raise ValidationError(f"dimension must be >= 2, got {d}")
    return Frame(np.eye(d, dtype=complex), name=f"basis-{d}")


def qubit_mub_triple():
    """Hadamard, circular and computational bases of C^2, in that order."""
    s = 1 / math.sqrt(2)
    hadamard = Frame([[s, s], [s, -s]], name="hadamard")
    circular = Frame([[s, 1j * s], [s, -1j * s]], name="circular")
    return MuetfEnsemble([hadamard, circular, computational_basis(2)], name="mub2")


def _is_prime(n):
    return n >= 2 and all(n % p for p in range(2, math.isqrt(n) + 1))


def prime_mub_set(d):
    """Complete set of d+1 MUBs for an odd prime d.

    Basis mu (0 <= mu < d) has vectors with components
    omega**(mu k**2 + j k) / sqrt(d), omega = exp(2 pi i / d); the
    computational basis comes last.
    """
    if d % 2 == 0 or not _is_prime(d) or d > 31:
        raise ValidationError(f"prime_mub_set needs an odd prime d <= 31, got {d}")
    k = np.arange(d)
    members = []
    for mu in range(d):
        expo = (mu * k[None, :] ** 2 + k[:, None] * k[None, :]) % d
        members.append(Frame(np.exp(2j * np.pi * expo / d) / math.sqrt(d), name=f"quadratic-{mu}"))
    members.append(computational_basis(d))
    return MuetfEnsemble(members, name=f"mub-prime-{d}")


def simplex_etf(d):
    """d+1 equiangular unit vectors in C^d (the regular simplex).

    The standard basis of R^(d+1) is projected onto the complement of the
    all-ones vector and written in an orthonormal basis of that complement.
    """
    if d < 2:
        raise ValidationError(f"dimension must be >= 2, got {d}")
    seed = np.hstack([np.ones((d + 1, 1)), np.eye(d + 1)[:, :d]])
    q, _ = np.linalg.qr(seed)
    rows = q[:, 1:] * math.sqrt((d + 1) / d)
    return Frame(_phase_fixed(rows), name=f"simplex-{d}")


def qubit_sic():
    """Tetrahedral SIC-POVM vectors: |0> and (|0> + sqrt2 w^k |1>)/sqrt3, w = e^(2 pi i/3)."""
    w = np.exp(2j * np.pi / 3)
    r2, r3 = math.sqrt(2), math.sqrt(3)
    v = [[1, 0], [1 / r3, r2 / r3], [1 / r3, r2 * w / r3], [1 / r3, r2 * np.conj(w) / r3]]
    return Frame(v, name="sic2")


def builtin_ensemble(name):
    """Resolve mub2 | sic2 | mub-prime-D | simplex-D | basis-D.

    qubit-mub and qubit-sic are accepted as aliases of mub2 and sic2.
    """
    if name in ("mub2", "qubit-mub"):
        return qubit_mub_triple()
    if name in ("sic2", "qubit-sic"):
        return as_ensemble(qubit_sic())
    prefix, _, arg = name.rpartition("-")
    try:
        d = int(arg)
    except ValueError:
        raise ValidationError(f"unknown ensemble {name!r}") from None
    if prefix == "mub-prime":
        return prime_mub_set(d)
    if prefix == "simplex":
        return as_ensemble(simplex_etf(d))
    if prefix == "basis":
        return as_ensemble(computational_basis(d))
    raise ValidationError(f"unknown ensemble {name!r}")


# certification

def _worst_offdiag(sq, target):
    n = sq.shape[0]
    dev = np.abs(sq - target)
    dev[np.diag_indices(n)] = 0.0
    idx = np.unravel_index(np.argmax(dev), dev.shape)
    return float(dev[idx]), tuple(int(i) for i in idx)


def verify_frame(f, tol=CERT_TOL):
    """Check unit norms, the frame condition, tightness and equiangularity."""
    v = f.vectors
    d, n = f.dim, f.count
    norms = np.linalg.norm(v, axis=1)
    norm_dev = np.abs(norms - 1.0)
    eig = np.linalg.eigvalsh(f.frame_operator())
    s0, s1 = float(eig.min()), float(eig.max())
    tight_dev = float(np.max(np.abs(eig - n / d)))
    sq = np.abs(f.gram()) ** 2
    if n > 1:
        eq_dev, pair = _worst_offdiag(sq, equiangular_constant(d, n))
    else:
        eq_dev, pair = 0.0, None
    return CertificationReport(
        kind=f"frame {f.name or ''} (d={d}, N={n})".replace("  ", " "),
        checks={
            "unit_norm": bool(norm_dev.max() <= tol),
            "frame_condition": s0 > tol,
            "tight": tight_dev <= tol,
            "equiangular": eq_dev <= tol,
        },
        deviations={"unit_norm": float(norm_dev.max()), "tight": tight_dev, "equiangular": eq_dev},
        tol=tol,
        frame_bounds=(s0, s1),
        worst={"unit_norm": int(np.argmax(norm_dev)), "equiangular": pair},
    )


def verify_muetf(e, tol=CERT_TOL):
    """Check every member as an ETF and unbiasedness across members.

    The worst cross-member offender is reported as (mu, i, nu, j).
    """
    subs = [verify_frame(m, tol) for m in e.members]
    d = e.dim
    cross_dev, cross_at = 0.0, None
    v = e.vectors
    for mu in range(e.size):
        for nu in range(mu + 1, e.size):
            sq = np.abs(v[mu].conj() @ v[nu].T) ** 2
            dev = np.abs(sq - 1.0 / d)
            i, j = np.unravel_index(np.argmax(dev), dev.shape)
            if dev[i, j] > cross_dev or cross_at is None:
                cross_dev, cross_at = float(dev[i, j]), (mu, int(i), nu, int(j))
    within = max(s.deviations["equiangular"] for s in subs)
    within_at = None
    for mu, s in enumerate(subs):
        if s.deviations["equiangular"] == within and s.worst["equiangular"] is not None:
            i, j = s.worst["equiangular"]
            within_at = (mu, i, mu, j)
            break
    return CertificationReport(
        kind=f"ensemble {e.name or ''} (d={d}, N={e.count}, M={e.size})".replace("  ", " "),
        checks={
            "unit_norm": all(s.checks["unit_norm"] for s in subs),
            "tight": all(s.checks["tight"] and s.checks["frame_condition"] for s in subs),
            "equiangular": within <= tol,
            "unbiased": cross_dev <= tol,
        },
        deviations={
            "unit_norm": max(s.deviations["unit_norm"] for s in subs),
            "tight": max(s.deviations["tight"] for s in subs),
            "equiangular": within,
            "unbiased": cross_dev,
        },
        tol=tol,
        frame_bounds=(min(s.frame_bounds[0] for s in subs), max(s.frame_bounds[1] for s in subs)),
        worst={"equiangular": within_at, "unbiased": cross_at},
        members=subs,
    )


# probabilities

def outcome_probabilities(f, rho, allow_non_tight=False):
    """p_j = (d/N) <phi_j|rho|phi_j> for the POVM induced by a tight frame.

    A frame that is not tight does not give a normalised distribution; it is
    rejected unless `allow_non_tight` is set, in which case the raw values
    are returned unvalidated.
    """
    rho = as_state(rho)
    if f.dim != rho.dim:
        raise ValidationError(f"frame dimension {f.dim} != state dimension {rho.dim}")
    v = f.vectors
    vals = (f.dim / f.count) * np.real(np.einsum("ni,ij,nj->n", v.conj(), rho.matrix, v))
    if allow_non_tight:
        return vals
    if not f.is_tight:
        raise CertificationError(f"{f!r} is not a unit-norm tight frame; pass allow_non_tight=True")
    return as_probability_vector(vals)


# serialisation

def _num(x):
    return format(float(x), ".17g")


def dumps_frames(e):
    e = as_ensemble(e)
    frames_txt = []
    for m in e.members:
        vecs = ["[" + ", ".join(f"[{_num(z.real)}, {_num(z.imag)}]" for z in vec) + "]"
                for vec in m.vectors]
        frames_txt.append("    [\n      " + ",\n      ".join(vecs) + "\n    ]")
    return (
        "{\n"
        f'  "dim": {e.dim},\n'
        f'  "count": {e.count},\n'
        '  "frames": [\n' + ",\n".join(frames_txt) + "\n  ]\n}\n"
    )


def save_frames(e, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_frames(e))


def _parse_complex(entry, where):
    if (not isinstance(entry, list) or len(entry) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)):
        raise FrameFileError(f"{where}: expected [re, im], got {entry!r}")
    return complex(entry[0], entry[1])


def loads_frames(text, tol=CERT_TOL):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FrameFileError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise FrameFileError("top level must be an object")
    unknown = set(data) - FILE_KEYS
    missing = FILE_KEYS - set(data)
    if unknown:
        raise FrameFileError(f"unknown top-level keys: {sorted(unknown)}")
    if missing:
        raise FrameFileError(f"missing top-level keys: {sorted(missing)}")
    d, n, frames = data["dim"], data["count"], data["frames"]
    if not (isinstance(d, int) and isinstance(n, int)) or d < 1 or n < d:
        raise FrameFileError(f"dim/count must be integers with count >= dim >= 1, got {d!r}, {n!r}")
    if not isinstance(frames, list) or not frames:
        raise FrameFileError("'frames' must be a non-empty list")
    members = []
    for mu, fr in enumerate(frames):
        if not isinstance(fr, list) or len(fr) != n:
            raise FrameFileError(f"frame {mu}: expected {n} vectors")
        rows = []
        for j, vec in enumerate(fr):
            if not isinstance(vec, list) or len(vec) != d:
                got = len(vec) if isinstance(vec, list) else type(vec).__name__
                raise FrameFileError(f"frame {mu} vector {j}: expected {d} entries, got {got}")
            rows.append([_parse_complex(z, f"frame {mu} vector {j}") for z in vec])
        arr = np.array(rows, dtype=complex)
        norms = np.linalg.norm(arr, axis=1)
        bad = int(np.argmax(np.abs(norms - 1.0)))
        if abs(norms[bad] - 1.0) > tol:
            raise FrameFileError(f"frame {mu} vector {bad}: norm {norms[bad]:.12g} is not 1")
        members.append(Frame(arr, name=f"member-{mu}"))
    ens = MuetfEnsemble(members)
    ens.report  # certify on load
    return ens


def load_frames(path, tol=CERT_TOL):
    """Read a frame file; the returned ensemble carries its certification report."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    ens = loads_frames(text, tol)
    ens.name = str(path)
    return ens
