"""Streaming dimensionality reduction via incremental SVD.

Each batch updates the running mean and the top components by taking the
SVD of the previous components (scaled by their singular values) stacked
with the centered batch and a mean-correction row. A single-batch fit is
mathematically the exact PCA of that batch.
"""

from __future__ import annotations

import numpy as np

from .errors import BatchTooSmall, DimError


def _flip_signs(vt: np.ndarray) -> np.ndarray:
    """Fix each component's sign so its largest-magnitude entry is positive."""
    lead = np.abs(vt).argmax(axis=1)
    signs = np.sign(vt[np.arange(vt.shape[0]), lead])
    signs[signs == 0] = 1.0
    return vt * signs[:, None]


class IncrementalPCA:
    """Top ``out_dim`` principal components, updated one batch at a time.

    Attributes
    ----------
    mean : (d,) running feature mean
    components : (out_dim, d) orthonormal rows
    singular_values : (out_dim,) descending
    n_seen : samples consumed so far
    """

    def __init__(self, out_dim: int):
        if out_dim < 1:
            raise ValueError("out_dim must be >= 1")
        self.out_dim = out_dim
        self.mean: np.ndarray | None = None
        self.components: np.ndarray | None = None
        self.singular_values: np.ndarray | None = None
        self.n_seen = 0

    def partial_fit(self, batch) -> "IncrementalPCA":
        X = np.asarray(batch, dtype=np.float64)
        if X.ndim != 2:
            raise DimError("batch must be 2-D")
        n_new, d = X.shape
        if d < self.out_dim:
            raise DimError(f"input dim {d} < out_dim {self.out_dim}")
        if n_new < self.out_dim:
            raise BatchTooSmall(f"batch of {n_new} rows < out_dim {self.out_dim}")
        if self.mean is not None and d != self.mean.shape[0]:
            raise DimError(f"batch dim {d} != fitted dim {self.mean.shape[0]}")

        batch_mean = X.mean(axis=0)
        n_old = self.n_seen
        n_total = n_old + n_new
        centered = X - batch_mean
        if n_old == 0:
            stack = centered
            new_mean = batch_mean
        else:
            new_mean = (n_old * self.mean + n_new * batch_mean) / n_total
            # row accounting for the shift between the old and new means
            correction = np.sqrt(n_old * n_new / n_total) * (self.mean - batch_mean)
            stack = np.vstack([
                self.singular_values[:, None] * self.components,
                centered,
                correction,
            ])
        _, s, vt = np.linalg.svd(stack, full_matrices=False)
        vt = _flip_signs(vt)
        self.components = vt[: self.out_dim]
        self.singular_values = s[: self.out_dim]
        self.mean = new_mean
        self.n_seen = n_total
        return self

    def project(self, vectors) -> np.ndarray:
        """Center and project onto the fitted components."""
        if self.components is None:
            raise DimError("model has not seen any batch")
        X = np.asarray(vectors, dtype=np.float64)
        single = X.ndim == 1
        if single:
            X = X[None, :]
        if X.shape[1] != self.mean.shape[0]:
            raise DimError(f"vector dim {X.shape[1]} != fitted dim {self.mean.shape[0]}")
        out = (X - self.mean) @ self.components.T
        return out[0] if single else out


def fit_incremental_pca(batches, out_dim: int) -> IncrementalPCA:
    model = IncrementalPCA(out_dim)
    for batch in batches:
        model.partial_fit(batch)
    if model.n_seen == 0:
        raise BatchTooSmall("no batches supplied")
    return model


def project(model: IncrementalPCA, vectors) -> np.ndarray:
    return model.project(vectors)


def iter_batches(data: np.ndarray, batch_size: int, min_size: int):
    """Consecutive row slices; a short tail is folded into the previous batch."""
    n = data.shape[0]
    if n <= batch_size:
        yield data
        return
    starts = list(range(0, n, batch_size))
    if n - starts[-1] < min_size and len(starts) > 1:
        starts.pop()
    for i, start in enumerate(starts):
        end = starts[i + 1] if i + 1 < len(starts) else n
        yield data[start:end]
