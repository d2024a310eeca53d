"""Hierarchically off-diagonal low-rank (HODLR) matrices and their arithmetic.

A square matrix is stored as a recursive 2 x 2 block partition: diagonal
blocks recurse (top-left gets floor(n/2) rows), off-diagonal blocks are
kept as factor pairs U V^H, and blocks of order <= leaf_size are dense.
For a matrix whose strictly off-diagonal submatrices all have rank <= k
("quasiseparable rank k"), every stored factor pair has rank <= k and the
arithmetic below runs in O(k m log m) for matrix-vector products and
O(k^2 m log^2 m) for multiply / invert / solve.

All operations are non-destructive; nodes are shared freely between
results, so treat HodlrMatrix instances as immutable.

Serialization: `write_hodlr` / `read_hodlr` use a line-oriented text
container. Header "HODLR-TEXT 1" and one "config tol leaf_size max_rank"
line, then a pre-order walk of the tree where each node is either

    LEAF
    <dense block in the shared matrix text format>

or

    BRANCH <n>
    <top-left subtree>
    <bottom-right subtree>
    LOWRANK <rank>          (top-right block: U then V payloads)
    <U matrix>  <V matrix>
    LOWRANK <rank>          (bottom-left block)
    <U matrix>  <V matrix>

A LOWRANK of rank 0 carries no payload lines.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import matrixio
from .dense import as_square_matrix
from .errors import InvalidInputError, RankOverflowError, SingularPivotError

_EPS = float(np.finfo(np.float64).eps)
# Blocks whose top singular value falls below SNAP_FACTOR * tol * (operand
# scale) during an add are pure cancellation noise and are dropped outright;
# relative-to-block truncation alone can never remove them.
_SNAP_FACTOR = 32.0
_NORM_SEED = 0x5EED


@dataclass(frozen=True)
class HodlrConfig:
    """Truncation and partition parameters.

    tol        relative threshold for dropping singular values in
               off-diagonal blocks (0 keeps everything nonzero)
    leaf_size  largest block order stored dense
    max_rank   hard cap on stored block ranks; None means min(n, 256),
               resolved per matrix
    """

    tol: float = _EPS
    leaf_size: int = 64
    max_rank: int | None = None

    def __post_init__(self):
        if not (0.0 <= self.tol < 1.0):
            raise InvalidInputError(f"tol must be in [0, 1), got {self.tol}")
        if self.leaf_size < 1:
            raise InvalidInputError(f"leaf_size must be positive, got {self.leaf_size}")
        if self.max_rank is not None and self.max_rank < 0:
            raise InvalidInputError(f"max_rank must be nonnegative, got {self.max_rank}")

    def effective_max_rank(self, n):
        return self.max_rank if self.max_rank is not None else min(n, 256)


class LowRankBlock:
    """Rectangular block stored as left @ right^H with r factor columns."""

    __slots__ = ("left", "right")

    def __init__(self, left, right):
        if left.shape[1] != right.shape[1]:
            raise InvalidInputError("factor column counts differ")
        self.left = left
        self.right = right

    @property
    def rank(self):
        return int(self.left.shape[1])

    @property
    def shape(self):
        return (self.left.shape[0], self.right.shape[0])

    def to_dense(self):
        return self.left @ self.right.conj().T

    def adjoint(self):
        return LowRankBlock(self.right, self.left)

    def scaled(self, s):
        if self.rank == 0:
            return self
        return LowRankBlock(self.left * s, self.right)

    @staticmethod
    def zero(rows, cols):
        return LowRankBlock(
            np.zeros((rows, 0), dtype=np.complex128),
            np.zeros((cols, 0), dtype=np.complex128),
        )


class HodlrMatrix:
    """A node of the recursive representation; the root doubles as the matrix."""

    __slots__ = ("n", "cfg", "dense", "top_left", "bottom_right", "top_right", "bottom_left")

    def __init__(self, n, cfg, dense=None, top_left=None, bottom_right=None,
                 top_right=None, bottom_left=None):
        self.n = n
        self.cfg = cfg
        self.dense = dense
        self.top_left = top_left
        self.bottom_right = bottom_right
        self.top_right = top_right
        self.bottom_left = bottom_left

    @property
    def is_leaf(self):
        return self.dense is not None

    @property
    def shape(self):
        return (self.n, self.n)

    @property
    def split(self):
        return self.n // 2

    def __matmul__(self, x):
        return hodlr_matvec(self, x)


def _truncate_factors(left, right, cfg, cap, path, drop_floor=0.0):
    """Recompress a factor pair: QR both sides, SVD the small core, re-truncate.

    drop_floor is an absolute threshold on retained singular values (the
    cancellation snap); 0 disables it. Raises RankOverflowError when the
    truncated rank still exceeds cap.
    """
    if left.shape[1] == 0:
        return LowRankBlock(left, right)
    qu, ru = np.linalg.qr(left, mode="reduced")
    qv, rv = np.linalg.qr(right, mode="reduced")
    core = ru @ rv.conj().T
    u, s, vh = np.linalg.svd(core, full_matrices=False)
    if s.size == 0 or s[0] <= drop_floor:
        return LowRankBlock.zero(left.shape[0], right.shape[0])
    keep = s > max(cfg.tol * s[0], drop_floor)
    r = int(np.count_nonzero(keep))
    if r > cap:
        raise RankOverflowError(
            f"block at {path or 'root'} has rank {r} after truncation, cap is {cap}",
            path=path,
        )
    return LowRankBlock(qu @ (u[:, :r] * s[:r]), qv @ vh[:r].conj().T)


def hodlr_from_dense(m, cfg=None, path="root"):
    """Compress a dense square matrix into HODLR form.

    Off-diagonal blocks are truncated at cfg.tol relative to each block's
    own largest singular value; ranks above cfg's cap raise
    RankOverflowError naming the offending block.
    """
    a = as_square_matrix(m)
    cfg = cfg if cfg is not None else HodlrConfig()
    cap = cfg.effective_max_rank(a.shape[0])
    return _from_dense(a, cfg, cap, path)


def _from_dense(a, cfg, cap, path):
    n = a.shape[0]
    if n <= cfg.leaf_size:
        return HodlrMatrix(n, cfg, dense=a.copy())
    p = n // 2
    svd_tr = _compress_dense_block(a[:p, p:], cfg, cap, path + ".top_right")
    svd_bl = _compress_dense_block(a[p:, :p], cfg, cap, path + ".bottom_left")
    return HodlrMatrix(
        n, cfg,
        top_left=_from_dense(a[:p, :p], cfg, cap, path + ".top_left"),
        bottom_right=_from_dense(a[p:, p:], cfg, cap, path + ".bottom_right"),
        top_right=svd_tr,
        bottom_left=svd_bl,
    )


def _compress_dense_block(block, cfg, cap, path):
    u, s, vh = np.linalg.svd(block, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return LowRankBlock.zero(block.shape[0], block.shape[1])
    r = int(np.count_nonzero(s > cfg.tol * s[0]))
    if r > cap:
        raise RankOverflowError(
            f"block at {path} has rank {r} after truncation, cap is {cap}", path=path
        )
    return LowRankBlock(u[:, :r] * s[:r], vh[:r].conj().T)


def hodlr_to_dense(h):
    if h.is_leaf:
        return h.dense.copy()
    p = h.split
    out = np.empty((h.n, h.n), dtype=np.complex128)
    out[:p, :p] = hodlr_to_dense(h.top_left)
    out[p:, p:] = hodlr_to_dense(h.bottom_right)
    out[:p, p:] = h.top_right.to_dense()
    out[p:, :p] = h.bottom_left.to_dense()
    return out


def hodlr_qsrank(h):
    """Largest stored factor rank over all off-diagonal blocks."""
    if h.is_leaf:
        return 0
    return max(
        h.top_right.rank,
        h.bottom_left.rank,
        hodlr_qsrank(h.top_left),
        hodlr_qsrank(h.bottom_right),
    )


def hodlr_depth(h):
    if h.is_leaf:
        return 0
    return 1 + max(hodlr_depth(h.top_left), hodlr_depth(h.bottom_right))


def _same_partition(a, b):
    if a.n != b.n or a.is_leaf != b.is_leaf:
        return False
    if a.is_leaf:
        return True
    return _same_partition(a.top_left, b.top_left) and _same_partition(
        a.bottom_right, b.bottom_right
    )


def _require_same_partition(a, b):
    if not _same_partition(a, b):
        raise InvalidInputError("operands have different HODLR partitions")


# ---------------------------------------------------------------------------
# products with dense vectors / tall matrices


def hodlr_matvec(h, x):
    """H @ x for a vector or tall dense matrix, in O(k n log n)."""
    arr = np.asarray(x, dtype=np.complex128)
    single = arr.ndim == 1
    if single:
        arr = arr[:, None]
    if arr.shape[0] != h.n:
        raise InvalidInputError(f"operand has {arr.shape[0]} rows, matrix order is {h.n}")
    out = _matmat(h, arr)
    return out[:, 0] if single else out


def _matmat(h, x):
    if h.is_leaf:
        return h.dense @ x
    p = h.split
    x1, x2 = x[:p], x[p:]
    top = _matmat(h.top_left, x1)
    if h.top_right.rank:
        top = top + h.top_right.left @ (h.top_right.right.conj().T @ x2)
    bot = _matmat(h.bottom_right, x2)
    if h.bottom_left.rank:
        bot = bot + h.bottom_left.left @ (h.bottom_left.right.conj().T @ x1)
    return np.vstack([top, bot])


def hodlr_adjoint(h):
    """Conjugate transpose, by structural swap; shares factor arrays."""
    if h.is_leaf:
        return HodlrMatrix(h.n, h.cfg, dense=h.dense.conj().T)
    return HodlrMatrix(
        h.n, h.cfg,
        top_left=hodlr_adjoint(h.top_left),
        bottom_right=hodlr_adjoint(h.bottom_right),
        top_right=h.bottom_left.adjoint(),
        bottom_left=h.top_right.adjoint(),
    )


def hodlr_scale(h, s):
    s = complex(s)
    if h.is_leaf:
        return HodlrMatrix(h.n, h.cfg, dense=h.dense * s)
    return HodlrMatrix(
        h.n, h.cfg,
        top_left=hodlr_scale(h.top_left, s),
        bottom_right=hodlr_scale(h.bottom_right, s),
        top_right=h.top_right.scaled(s),
        bottom_left=h.bottom_left.scaled(s),
    )


def hodlr_shift_diagonal(h, z):
    """H + z * I, touching dense leaves only."""
    z = complex(z)
    if h.is_leaf:
        return HodlrMatrix(h.n, h.cfg, dense=h.dense + z * np.eye(h.n))
    return HodlrMatrix(
        h.n, h.cfg,
        top_left=hodlr_shift_diagonal(h.top_left, z),
        bottom_right=hodlr_shift_diagonal(h.bottom_right, z),
        top_right=h.top_right,
        bottom_left=h.bottom_left,
    )


def hodlr_identity(n, cfg=None):
    cfg = cfg if cfg is not None else HodlrConfig()
    if n <= cfg.leaf_size:
        return HodlrMatrix(n, cfg, dense=np.eye(n, dtype=np.complex128))
    p = n // 2
    return HodlrMatrix(
        n, cfg,
        top_left=hodlr_identity(p, cfg),
        bottom_right=hodlr_identity(n - p, cfg),
        top_right=LowRankBlock.zero(p, n - p),
        bottom_left=LowRankBlock.zero(n - p, p),
    )


def hodlr_norm2_estimate(h, iterations=20):
    """Spectral norm estimate by power iteration on H^H H with a fixed seed.

    Heuristic: after the default 20 iterations the estimate sits in
    [sigma_1 / 2, sigma_1] for non-adversarial spectra; it never exceeds
    sigma_1 beyond roundoff.
    """
    rng = np.random.default_rng(_NORM_SEED)
    x = rng.standard_normal(h.n) + 1j * rng.standard_normal(h.n)
    nx = np.linalg.norm(x)
    if nx == 0.0:
        return 0.0
    x = x / nx
    adj = hodlr_adjoint(h)
    best = 0.0
    for _ in range(max(1, iterations)):
        y = hodlr_matvec(h, x)
        ny = np.linalg.norm(y)
        best = max(best, ny)
        if ny == 0.0:
            return 0.0
        z = hodlr_matvec(adj, y)
        nz = np.linalg.norm(z)
        if nz == 0.0:
            return best
        x = z / nz
    return float(best)


# ---------------------------------------------------------------------------
# addition


def hodlr_add(a, b, cfg=None):
    """A + B with re-truncation of every off-diagonal block.

    Factor pairs are concatenated and recompressed at cfg.tol; blocks whose
    whole content is cancellation noise (top singular value below
    32 * tol * (||A|| + ||B||)) are dropped to rank 0, so A + (-A)
    collapses to qsrank 0.
    """
    _require_same_partition(a, b)
    cfg = cfg if cfg is not None else a.cfg
    scale = hodlr_norm2_estimate(a) + hodlr_norm2_estimate(b)
    drop_floor = _SNAP_FACTOR * cfg.tol * scale
    cap = cfg.effective_max_rank(a.n)
    return _add(a, b, cfg, cap, drop_floor, "root")


def _add(a, b, cfg, cap, drop_floor, path):
    if a.is_leaf:
        return HodlrMatrix(a.n, cfg, dense=a.dense + b.dense)
    return HodlrMatrix(
        a.n, cfg,
        top_left=_add(a.top_left, b.top_left, cfg, cap, drop_floor, path + ".top_left"),
        bottom_right=_add(a.bottom_right, b.bottom_right, cfg, cap, drop_floor,
                          path + ".bottom_right"),
        top_right=_concat_truncate(a.top_right, b.top_right, cfg, cap, drop_floor,
                                   path + ".top_right"),
        bottom_left=_concat_truncate(a.bottom_left, b.bottom_left, cfg, cap, drop_floor,
                                     path + ".bottom_left"),
    )


def _concat_truncate(x, y, cfg, cap, drop_floor, path):
    if x.rank == 0 and y.rank == 0:
        return x
    left = np.hstack([x.left, y.left])
    right = np.hstack([x.right, y.right])
    return _truncate_factors(left, right, cfg, cap, path, drop_floor)


def _add_lowrank(h, u, v, cfg, cap, path):
    """H + U V^H for an n x r factor pair, recursing down the partition."""
    if u.shape[1] == 0:
        return h
    if h.is_leaf:
        return HodlrMatrix(h.n, cfg, dense=h.dense + u @ v.conj().T)
    p = h.split
    u1, u2 = u[:p], u[p:]
    v1, v2 = v[:p], v[p:]
    return HodlrMatrix(
        h.n, cfg,
        top_left=_add_lowrank(h.top_left, u1, v1, cfg, cap, path + ".top_left"),
        bottom_right=_add_lowrank(h.bottom_right, u2, v2, cfg, cap, path + ".bottom_right"),
        top_right=_truncate_factors(
            np.hstack([h.top_right.left, u1]),
            np.hstack([h.top_right.right, v2]),
            cfg, cap, path + ".top_right",
        ),
        bottom_left=_truncate_factors(
            np.hstack([h.bottom_left.left, u2]),
            np.hstack([h.bottom_left.right, v1]),
            cfg, cap, path + ".bottom_left",
        ),
    )


# ---------------------------------------------------------------------------
# multiplication


def hodlr_mul(a, b, cfg=None):
    """A @ B in HODLR arithmetic, O(k^2 n log^2 n)."""
    _require_same_partition(a, b)
    cfg = cfg if cfg is not None else a.cfg
    cap = cfg.effective_max_rank(a.n)
    return _mul(a, b, cfg, cap, "root")


def _mul(a, b, cfg, cap, path):
    if a.is_leaf:
        return HodlrMatrix(a.n, cfg, dense=a.dense @ b.dense)
    at, ab = a.top_right, a.bottom_left
    bt, bb = b.top_right, b.bottom_left

    # diagonal blocks: recursive product plus a low-rank cross term
    c11 = _mul(a.top_left, b.top_left, cfg, cap, path + ".top_left")
    if at.rank and bb.rank:
        c11 = _add_lowrank(c11, at.left @ (at.right.conj().T @ bb.left), bb.right,
                           cfg, cap, path + ".top_left")
    c22 = _mul(a.bottom_right, b.bottom_right, cfg, cap, path + ".bottom_right")
    if ab.rank and bt.rank:
        c22 = _add_lowrank(c22, ab.left @ (ab.right.conj().T @ bt.left), bt.right,
                           cfg, cap, path + ".bottom_right")

    # off-diagonal blocks: two factor pairs concatenated then recompressed
    if bt.rank or at.rank:
        c12 = _truncate_factors(
            np.hstack([_matmat(a.top_left, bt.left), at.left]),
            np.hstack([bt.right, _matmat(hodlr_adjoint(b.bottom_right), at.right)]),
            cfg, cap, path + ".top_right",
        )
    else:
        c12 = LowRankBlock.zero(a.split, a.n - a.split)
    if bb.rank or ab.rank:
        c21 = _truncate_factors(
            np.hstack([_matmat(a.bottom_right, bb.left), ab.left]),
            np.hstack([bb.right, _matmat(hodlr_adjoint(b.top_left), ab.right)]),
            cfg, cap, path + ".bottom_left",
        )
    else:
        c21 = LowRankBlock.zero(a.n - a.split, a.split)

    return HodlrMatrix(a.n, cfg, top_left=c11, bottom_right=c22,
                       top_right=c12, bottom_left=c21)


# ---------------------------------------------------------------------------
# inversion and solves (recursive 2 x 2 block Schur complement)


def _pivot_floor(h):
    return 1e-14 * hodlr_norm2_estimate(h)


def _leaf_lu(dense, floor, path):
    with warnings.catch_warnings():
        # the pivot check below raises loudly; scipy's singular-matrix
        # warning would only duplicate it
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(dense, check_finite=False)
    if np.min(np.abs(np.diag(lu))) <= floor:
        raise SingularPivotError(
            f"leaf at {path or 'root'} is numerically singular "
            f"(pivot <= {floor:.3e})", path=path,
        )
    return lu, piv


def hodlr_inverse(a, cfg=None):
    """A^{-1} in HODLR arithmetic.

    Recursive 2 x 2 block inversion: invert the leading block, form the
    trailing Schur complement as a low-rank correction of the trailing
    block, invert that, then assemble the four blocks of the inverse.
    Raises SingularPivotError (with the node path) when a dense leaf
    factorization meets a pivot below 1e-14 * ||A||_2.
    """
    cfg = cfg if cfg is not None else a.cfg
    cap = cfg.effective_max_rank(a.n)
    return _inverse(a, cfg, cap, _pivot_floor(a), "root")


def _inverse(h, cfg, cap, floor, path):
    if h.is_leaf:
        lu, piv = _leaf_lu(h.dense, floor, path)
        return HodlrMatrix(h.n, cfg,
                           dense=sla.lu_solve((lu, piv), np.eye(h.n, dtype=np.complex128)))
    inv11 = _inverse(h.top_left, cfg, cap, floor, path + ".top_left")
    u12, v12 = h.top_right.left, h.top_right.right
    u21, v21 = h.bottom_left.left, h.bottom_left.right

    w = _matmat(inv11, u12)                      # A11^{-1} U12
    s = _add_lowrank(h.bottom_right, -(u21 @ (v21.conj().T @ w)), v12,
                     cfg, cap, path + ".schur")
    sinv = _inverse(s, cfg, cap, floor, path + ".schur")

    y = _matmat(hodlr_adjoint(inv11), v21)       # A21 A11^{-1} = U21 Y^H
    sinv_u21 = _matmat(sinv, u21)
    top_right = _truncate_factors(-w, _matmat(hodlr_adjoint(sinv), v12),
                                  cfg, cap, path + ".top_right")
    bottom_left = _truncate_factors(-sinv_u21, y, cfg, cap, path + ".bottom_left")
    core = v12.conj().T @ sinv_u21               # V12^H S^{-1} U21
    top_left = _add_lowrank(inv11, w @ core, y, cfg, cap, path + ".top_left")
    return HodlrMatrix(h.n, cfg, top_left=top_left, bottom_right=sinv,
                       top_right=top_right, bottom_left=bottom_left)


def hodlr_solve(a, rhs, cfg=None):
    """Solve A x = rhs for a vector or multi-column right-hand side.

    Block forward elimination through the same Schur-complement recursion
    as hodlr_inverse, without materializing the inverse.
    """
    cfg = cfg if cfg is not None else a.cfg
    arr = np.asarray(rhs, dtype=np.complex128)
    single = arr.ndim == 1
    if single:
        arr = arr[:, None]
    if arr.shape[0] != a.n:
        raise InvalidInputError(f"rhs has {arr.shape[0]} rows, matrix order is {a.n}")
    cap = cfg.effective_max_rank(a.n)
    x = _solve(a, arr, cfg, cap, _pivot_floor(a), "root")
    return x[:, 0] if single else x


def _solve(h, b, cfg, cap, floor, path):
    if h.is_leaf:
        lu, piv = _leaf_lu(h.dense, floor, path)
        return sla.lu_solve((lu, piv), b)
    p = h.split
    q = b.shape[1]
    u12, v12 = h.top_right.left, h.top_right.right
    u21, v21 = h.bottom_left.left, h.bottom_left.right

    y = _solve(h.top_left, np.hstack([b[:p], u12]), cfg, cap, floor, path + ".top_left")
    x1p, w = y[:, :q], y[:, q:]
    s = _add_lowrank(h.bottom_right, -(u21 @ (v21.conj().T @ w)), v12,
                     cfg, cap, path + ".schur")
    t = b[p:] - u21 @ (v21.conj().T @ x1p)
    x2 = _solve(s, t, cfg, cap, floor, path + ".schur")
    x1 = x1p - w @ (v12.conj().T @ x2)
    return np.vstack([x1, x2])


# ---------------------------------------------------------------------------
# upper bounds used for cheap containment heuristics


def hodlr_abs_rowsum_bound(h):
    """Entrywise upper bound on the absolute row sums (>= ||H||_inf >= spectral radius)."""
    if h.is_leaf:
        return np.abs(h.dense).sum(axis=1)
    top = hodlr_abs_rowsum_bound(h.top_left)
    bot = hodlr_abs_rowsum_bound(h.bottom_right)
    if h.top_right.rank:
        top = top + np.abs(h.top_right.left) @ np.abs(h.top_right.right).sum(axis=0)
    if h.bottom_left.rank:
        bot = bot + np.abs(h.bottom_left.left) @ np.abs(h.bottom_left.right).sum(axis=0)
    return np.concatenate([top, bot])


# ---------------------------------------------------------------------------
# serialization


def write_hodlr(target, h):
    if hasattr(target, "write"):
        _write_hodlr_stream(target, h)
    else:
        with open(target, "w") as f:
            _write_hodlr_stream(f, h)


def _write_hodlr_stream(f, h):
    f.write("HODLR-TEXT 1\n")
    mr = h.cfg.max_rank if h.cfg.max_rank is not None else -1
    f.write(f"config {h.cfg.tol:.17g} {h.cfg.leaf_size} {mr}\n")
    _write_node(f, h)


def _write_node(f, h):
    if h.is_leaf:
        f.write("LEAF\n")
        matrixio.write_matrix(f, h.dense)
        return
    f.write(f"BRANCH {h.n}\n")
    _write_node(f, h.top_left)
    _write_node(f, h.bottom_right)
    for block in (h.top_right, h.bottom_left):
        f.write(f"LOWRANK {block.rank}\n")
        if block.rank:
            matrixio.write_matrix(f, block.left)
            matrixio.write_matrix(f, block.right)


def read_hodlr(source):
    if hasattr(source, "read"):
        return _read_hodlr_stream(source)
    with open(source) as f:
        return _read_hodlr_stream(f)


def _read_hodlr_stream(f):
    magic = f.readline().split()
    if magic[:1] != ["HODLR-TEXT"]:
        raise InvalidInputError(f"bad HODLR header {magic!r}")
    cfg_line = f.readline().split()
    if len(cfg_line) != 4 or cfg_line[0] != "config":
        raise InvalidInputError(f"bad HODLR config line {cfg_line!r}")
    mr = int(cfg_line[3])
    cfg = HodlrConfig(tol=float(cfg_line[1]), leaf_size=int(cfg_line[2]),
                      max_rank=None if mr < 0 else mr)
    return _read_node(f, cfg)


def _read_node(f, cfg):
    tag = f.readline().split()
    if not tag:
        raise InvalidInputError("truncated HODLR stream")
    if tag[0] == "LEAF":
        dense = matrixio.read_matrix(f)
        return HodlrMatrix(dense.shape[0], cfg, dense=dense)
    if tag[0] != "BRANCH":
        raise InvalidInputError(f"unexpected node tag {tag!r}")
    n = int(tag[1])
    top_left = _read_node(f, cfg)
    bottom_right = _read_node(f, cfg)
    blocks = []
    shapes = [(top_left.n, bottom_right.n), (bottom_right.n, top_left.n)]
    for rows, cols in shapes:
        rank_line = f.readline().split()
        if len(rank_line) != 2 or rank_line[0] != "LOWRANK":
            raise InvalidInputError(f"unexpected block tag {rank_line!r}")
        if int(rank_line[1]) == 0:
            blocks.append(LowRankBlock.zero(rows, cols))
        else:
            blocks.append(LowRankBlock(matrixio.read_matrix(f), matrixio.read_matrix(f)))
    return HodlrMatrix(n, cfg, top_left=top_left, bottom_right=bottom_right,
                       top_right=blocks[0], bottom_left=blocks[1])
