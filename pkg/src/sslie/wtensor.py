"""Coordinates on W(X)_n, the image of the full self-similar algebra in Der(X^{(x)n}).

A basis vector is x^{e_1} (x) ... (x) x^{e_k} (x) x^j D at depth k < n. Its index is
offset(k) + fidx*d + j, with fidx the base-d number e_1 e_2 ... e_k (first letter
most significant). The same numbering is produced by reading the matrix of an
element on the tensors 1 (x) .. (x) x (x) .. (x) 1, see `coords_of_matrix`.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .ground import ResourceError, matmul_mod, matpow_mod

DEFAULT_DIM_CAP = 400_000


class WLevel:
    def __init__(self, p: int, d: int, n: int, dim_cap: int = DEFAULT_DIM_CAP):
        if n < 0:
            raise ValueError("level must be >= 0")
        self.p, self.d, self.n = p, d, n
        self.offsets = [0]
        for k in range(n):
            self.offsets.append(self.offsets[-1] + d ** (k + 1))
        self.dim = self.offsets[-1]
        if self.dim > dim_cap:
            raise ResourceError(f"dim W(X)_{n} = {self.dim} exceeds the cap {dim_cap}")
        self.size = d**n
        self._decode_all()

    def _decode_all(self):
        d, n = self.d, self.n
        depth = np.zeros(self.dim, dtype=np.int64)
        exps = np.zeros((self.dim, max(n, 1)), dtype=np.int64)
        jj = np.zeros(self.dim, dtype=np.int64)
        for k in range(n):
            lo, hi = self.offsets[k], self.offsets[k + 1]
            loc = np.arange(hi - lo)
            depth[lo:hi] = k
            jj[lo:hi] = loc % d
            f = loc // d
            for i in range(k - 1, -1, -1):
                exps[lo:hi, i] = f % d
                f //= d
        self.depth, self.exps, self.jj = depth, exps, jj

    def index(self, k: int, exps, j: int) -> int:
        f = 0
        for e in exps:
            f = f * self.d + int(e)
        return self.offsets[k] + f * self.d + j

    def _index_arrays(self, depth, exps, jj):
        d = self.d
        f = np.zeros(len(depth), dtype=np.int64)
        for i in range(self.n):
            use = i < depth
            f = np.where(use, f * d + exps[:, i], f)
        offs = np.asarray(self.offsets, dtype=np.int64)[depth]
        return offs + f * d + jj

    def decode(self, idx: int):
        k = int(self.depth[idx])
        return k, tuple(int(e) for e in self.exps[idx, :k]), int(self.jj[idx])

    def label(self, idx: int) -> str:
        k, e, j = self.decode(idx)
        letters = ["1" if x == 0 else ("x" if x == 1 else f"x^{x}") for x in e]
        der = "D" if j == 0 else ("x*D" if j == 1 else f"x^{j}*D")
        return " # ".join(letters + [der])

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    # -- brackets of basis elements --------------------------------------
    def _bracket_term_all(self, k: int, f, a: int):
        """[g, u] for g = f (x) x^a D at depth k and every basis u.

        Returns (source indices, target indices, coefficients)."""
        d, p = self.d, self.p
        D, E, J = self.depth, self.exps, self.jj
        f = np.asarray(f, dtype=np.int64)
        src_all, tgt_all, val_all = [], [], []

        # same depth: (b - a) f*e (x) x^{a+b-1} D
        m = D == k
        if m.any():
            idx = np.nonzero(m)[0]
            e = E[idx, :k] + f[None, :]
            b = J[idx]
            jn = a + b - 1
            val = (b - a) % p
            ok = (e < d).all(axis=1) & (jn >= 0) & (jn < d) & (val != 0)
            idx, e, jn, val = idx[ok], e[ok], jn[ok], val[ok]
            if idx.size:
                ex = np.zeros((idx.size, self.exps.shape[1]), dtype=np.int64)
                ex[:, :k] = e
                tgt = self._index_arrays(np.full(idx.size, k), ex, jn)
                src_all.append(idx); tgt_all.append(tgt); val_all.append(val)

        # u deeper: g differentiates letter k of u's prefix
        m = D > k
        if m.any():
            idx = np.nonzero(m)[0]
            ex = E[idx].copy()
            ek = ex[:, k].copy()
            val = ek % p
            ex[:, :k] += f[None, :]
            ex[:, k] = a + ek - 1
            ok = (ek >= 1) & (val != 0) & (ex[:, : k + 1] < d).all(axis=1) & (ex[:, k] >= 0)
            idx, ex, val = idx[ok], ex[ok], val[ok]
            if idx.size:
                tgt = self._index_arrays(D[idx], ex, J[idx])
                src_all.append(idx); tgt_all.append(tgt); val_all.append(val)

        # u shallower, depth mu < k: [g,u] = -[u,g]; u differentiates letter mu of f
        m = D < k
        if m.any():
            idx = np.nonzero(m)[0]
            mu = D[idx]
            b = J[idx]
            fm = f[mu]
            val = (-fm) % p
            ex = np.zeros((idx.size, self.exps.shape[1]), dtype=np.int64)
            ex[:, :k] = f[None, :]
            cols = np.arange(self.exps.shape[1])[None, :]
            before = cols < mu[:, None]
            ex = np.where(before, ex + E[idx], ex)
            ex[np.arange(idx.size), mu] = b + fm - 1
            ok = (fm >= 1) & (val != 0) & (ex[:, :k] < d).all(axis=1) & (ex[np.arange(idx.size), mu] >= 0)
            idx, ex, val = idx[ok], ex[ok], val[ok]
            if idx.size:
                tgt = self._index_arrays(np.full(idx.size, k), ex, np.full(idx.size, a))
                src_all.append(idx); tgt_all.append(tgt); val_all.append(val)

        if not src_all:
            e = np.zeros(0, dtype=np.int64)
            return e, e, e
        return np.concatenate(src_all), np.concatenate(tgt_all), np.concatenate(val_all)

    def ad_matrix(self, g) -> sp.csr_matrix:
        """Sparse matrix of u -> [g, u] on coordinates."""
        g = np.asarray(g, dtype=np.int64) % self.p
        rows, cols, vals = [], [], []
        for gi in np.nonzero(g)[0]:
            k, f, a = self.decode(gi)
            s, t, v = self._bracket_term_all(k, f, a)
            rows.append(t); cols.append(s); vals.append(v * g[gi])
        if not rows:
            return sp.csr_matrix((self.dim, self.dim), dtype=np.int64)
        A = sp.coo_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(self.dim, self.dim), dtype=np.int64,
        ).tocsr()
        A.sum_duplicates()
        A.data %= self.p
        A.eliminate_zeros()
        return A

    def bracket(self, u, v) -> np.ndarray:
        u = np.asarray(u, dtype=np.int64) % self.p
        v = np.asarray(v, dtype=np.int64) % self.p
        if not u.any() or not v.any():
            return self.zero()
        # cheaper to build ad of the sparser operand
        if np.count_nonzero(u) <= np.count_nonzero(v):
            return (self.ad_matrix(u) @ v) % self.p
        return (-(self.ad_matrix(v) @ u)) % self.p

    # -- conversion to and from matrices --------------------------------
    def depth_block(self, vec, k: int, sparse: bool = False):
        """The d^{k+1} x d^{k+1} matrix of the depth-k part acting on the first k+1 letters.

        Only prefix monomials F present in vec are visited; x^F x^A = x^{A+F} needs
        digitwise sums below d, and then the index of A+F is the integer sum."""
        d, p = self.d, self.p
        lo = self.offsets[k]
        part = np.asarray(vec[lo: lo + d ** (k + 1)], dtype=np.int64).reshape(d**k, d) % p
        rows, cols, vals = [], [], []
        for F in np.nonzero(part.any(axis=1))[0]:
            A = _compatible_prefixes(d, k, int(F))
            B = A + F
            for j in range(d):
                c = int(part[F, j])
                if not c:
                    continue
                for beta in range(1, d):
                    tgt = beta - 1 + j
                    if tgt >= d or (c * beta) % p == 0:
                        continue
                    rows.append(B * d + tgt)
                    cols.append(A * d + beta)
                    vals.append(np.full(A.size, (c * beta) % p, dtype=np.int64))
        size = d ** (k + 1)
        if rows:
            T = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                              shape=(size, size)).tocsr()
            T.data %= p
            T.eliminate_zeros()
        else:
            T = sp.csr_matrix((size, size), dtype=np.int64)
        return T if sparse else T.toarray()

    def to_matrix(self, vec, sparse: bool = False):
        d, n, p = self.d, self.n, self.p
        vec = np.asarray(vec, dtype=np.int64) % p
        M = sp.csr_matrix((self.size, self.size), dtype=np.int64)
        for k in range(n):
            lo, hi = self.offsets[k], self.offsets[k + 1]
            if not vec[lo:hi].any():
                continue
            T = self.depth_block(vec, k, sparse=True)
            M = M + sp.kron(T, sp.identity(d ** (n - k - 1), dtype=np.int64, format="csr"), format="csr")
        M.data %= p
        M.eliminate_zeros()
        return M if sparse else M.toarray()

    def coords_of_matrix(self, M) -> np.ndarray:
        d, n = self.d, self.n
        parts = []
        for k in range(n):
            col = d ** (n - k - 1)
            rows = np.arange(d ** (k + 1)) * col
            if sp.issparse(M):
                parts.append(np.asarray(M[rows, col].toarray()).ravel())
            else:
                parts.append(np.asarray(M[rows, col]).ravel())
        return np.concatenate(parts).astype(np.int64) % self.p if parts else self.zero()

    def p_power(self, vec) -> np.ndarray:
        """Coordinates of M^p, reading only the n columns coords_of_matrix needs."""
        d, n, p = self.d, self.n, self.p
        if n == 0:
            return self.zero()
        M = self.to_matrix(vec, sparse=True)
        cols = [d ** (n - k - 1) for k in range(n)]
        V = np.zeros((self.size, n), dtype=np.int64)
        V[cols, np.arange(n)] = 1
        for _ in range(p):
            V = (M @ V) % p
        parts = [V[np.arange(d ** (k + 1)) * cols[k], k] for k in range(n)]
        return np.concatenate(parts) % p

    def p_power_dense(self, vec) -> np.ndarray:
        M = self.to_matrix(vec)
        return self.coords_of_matrix(matpow_mod(M, self.p, self.p))

    def matmul(self, A, B):
        return matmul_mod(A, B, self.p)

    # -- moving between levels --------------------------------------------
    def embed_child(self, child_vec, i: int) -> np.ndarray:
        """Coordinates of x^i (x) c at this level, for c given at level n-1."""
        out = self.zero()
        if self.n == 0:
            return out
        child = _level(self.p, self.d, self.n - 1)
        cv = np.asarray(child_vec, dtype=np.int64) % self.p
        nz = np.nonzero(cv)[0]
        if nz.size == 0:
            return out
        k = child.depth[nz]
        loc = nz - np.asarray(child.offsets, dtype=np.int64)[k]
        newloc = i * (self.d ** (k + 1)) + loc
        out[np.asarray(self.offsets, dtype=np.int64)[k + 1] + newloc] = cv[nz]
        return out

    def restrict(self, vec, m: int) -> np.ndarray:
        """Image at level m <= n: drop depths >= m."""
        lower = _level(self.p, self.d, m)
        return np.asarray(vec[: lower.dim], dtype=np.int64).copy()

    def der_vec(self, coeffs) -> np.ndarray:
        out = self.zero()
        if self.n:
            out[: self.d] = np.asarray(coeffs, dtype=np.int64) % self.p
        return out


@lru_cache(maxsize=1024)
def _compatible_prefixes(d: int, k: int, F: int) -> np.ndarray:
    """Indices A of length-k prefixes with a_i + f_i < d for every digit."""
    digits = []
    t = F
    for _ in range(k):
        digits.append(t % d)
        t //= d
    A = np.zeros(1, dtype=np.int64)
    for f in reversed(digits):
        A = (A[:, None] * d + np.arange(d - f, dtype=np.int64)[None, :]).ravel()
    A.setflags(write=False)
    return A


@lru_cache(maxsize=32)
def _level(p: int, d: int, n: int) -> WLevel:
    return WLevel(p, d, n)


def level(p: int, d: int, n: int) -> WLevel:
    return _level(p, d, n)
