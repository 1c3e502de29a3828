import numpy as np
import pytest


def make_clustered_chain(seed: int, n: int = 400, levels: int = 5, separation: float = 4.0):
    """Hand-rolled x -> y pair with multi-modal structure in x (test fixture
    data, independent of the package's generators)."""
    g = np.random.Generator(np.random.Philox(key=seed))
    latent = separation * (g.integers(0, levels, n).astype(np.float64) - (levels - 1) / 2)
    x = latent + g.normal(0.0, 1.0, n)
    y = x + g.normal(0.0, 1.0, n)
    return x, y


def write_corpus(directory, pairs):
    """Write pairNNNN.txt files plus pairmeta.txt.

    ``pairs`` is a list of (x, y, cause_is_x: bool, weight: float); ids are
    1-based positions.
    """
    directory.mkdir(parents=True, exist_ok=True)
    meta_lines = []
    for idx, (x, y, cause_is_x, weight) in enumerate(pairs, start=1):
        with open(directory / f"pair{idx:04d}.txt", "w") as fh:
            for xi, yi in zip(x, y):
                fh.write(f"{xi:.12g} {yi:.12g}\n")
        cause, effect = ("1 1", "2 2") if cause_is_x else ("2 2", "1 1")
        meta_lines.append(f"{idx:04d} {cause} {effect} {weight}")
    (directory / "pairmeta.txt").write_text("\n".join(meta_lines) + "\n")
    return directory


@pytest.fixture
def chain_corpus(tmp_path):
    """Two x-causes-y pairs with clear mixture structure."""
    x1, y1 = make_clustered_chain(seed=101)
    x2, y2 = make_clustered_chain(seed=202)
    return write_corpus(tmp_path / "corpus", [(x1, y1, True, 1.0), (x2, y2, True, 1.0)])
