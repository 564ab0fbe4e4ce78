"""Exact sparse row reduction.

Vectors are dicts ``column -> nonzero scalar`` with integer columns.  Rows
are kept with pivot equal to their smallest column and pivot coefficient 1,
so reduction only ever introduces larger columns; pivots are chosen in a
fixed column order which makes every choice below deterministic.
"""

import heapq

from .field import QQ


def axpy(y, a, x):
    """In place ``y += a * x``."""
    for k, v in x.items():
        s = y.get(k, 0) + a * v
        if s:
            y[k] = s
        else:
            y.pop(k, None)


class Echelon:
    """Incrementally built row echelon form.

    With ``track=True`` every stored row remembers which combination of the
    inserted vectors (labelled by the ``label`` passed to :meth:`add`) it
    equals, which is what solving ``x A = y`` and left kernels need.
    """

    def __init__(self, field=QQ, track=False):
        self.field = field
        self.track = track
        self.rows = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self):
        return len(self.rows)

    def pivots(self):
        return sorted(self.rows)

    def reduce(self, vec):
        """Reduce ``vec`` against the stored rows.

        Returns ``(residual, used)`` with
        ``residual = vec - sum(used[l] * inserted[l])`` when tracking.
        """
        vec = dict(vec)
        used = {}
        rows = self.rows
        heap = [k for k in vec if k in rows]
        heapq.heapify(heap)
        while heap:
            k = heapq.heappop(heap)
            c = vec.get(k)
            if not c:
                continue
            rv, rc = rows[k]
            axpy(vec, -c, rv)
            if self.track:
                axpy(used, c, rc)
            for kk in rv:
                if kk != k and kk in rows and kk in vec:
                    heapq.heappush(heap, kk)
        return vec, used

    def _store(self, res, combo):
        p = min(res)
        lead = res[p]
        if lead != 1:
            inv = self.field.inv(lead)
            res = {k: v * inv for k, v in res.items()}
            if combo is not None:
                combo = {l: v * inv for l, v in combo.items()}
        self.rows[p] = (res, combo)
        return res

    def add(self, vec, label=None):
        """Insert ``vec``; return the reduced new row, or None if dependent."""
        res, used = self.reduce(vec)
        if not res:
            return None
        combo = None
        if self.track:
            combo = {l: -c for l, c in used.items()}
            axpy(combo, 1, {label: 1})
        return self._store(res, combo)

    def contains(self, vec):
        return not self.reduce(vec)[0]

    def solve(self, vec):
        """Return a combination ``x`` of inserted vectors equal to ``vec``, or None."""
        res, combo = self.reduce(vec)
        if res:
            return None
        return {l: c for l, c in combo.items() if c}


def left_kernel(rows, field=QQ):
    """Basis of ``{x : sum_i x_i rows[i] = 0}`` (sparse, deterministic)."""
    ech = Echelon(field, track=True)
    basis = []
    for i, r in enumerate(rows):
        res, used = ech.reduce(r)
        kv = {l: -c for l, c in used.items()}
        axpy(kv, 1, {i: 1})
        if res:
            ech._store(res, kv)
        else:
            basis.append(kv)
    return basis


def rank(rows, field=QQ):
    ech = Echelon(field)
    for r in rows:
        ech.add(r)
    return ech.rank
