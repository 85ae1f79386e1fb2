import os
from itertools import combinations_with_replacement
from multiprocessing import Pool
from pathlib import Path

import pandas as pd
import plotly.express as px
from loguru import logger

from clustertrop.classifier import ClassificationException, classify
from clustertrop.config import Config
from clustertrop.linalg import LinalgException
from clustertrop.monodromy import MonodromyException
from clustertrop.seeds import FanSeedSpec, SeedException
from clustertrop.surfaces import SurfaceException
from clustertrop.trop import TropException


def classify_triangle(triangle):
    d1, d2, d3 = triangle
    row = {"d1": d1, "d2": d2, "d3": d3, "charge": d1 + d2 + d3}
    try:
        report = classify(FanSeedSpec.triangle(d1, d2, d3), Config({}), with_group=False)
    except (
        ClassificationException,
        LinalgException,
        MonodromyException,
        SeedException,
        SurfaceException,
        TropException,
    ) as e:
        logger.warning(f"Triangle {triangle} failed: {e}")
        row.update({"class": "Error", "kodaira": None, "q_type": None})
        return row
    row.update(
        {
            "class": report.primary_class,
            "kodaira": str(report.kodaira),
            "q_type": str(report.q_type),
            "region": report.region.kind,
        }
    )
    return row


def grid_triangles(max_k: int = 5, n_workers: int = 4) -> pd.DataFrame:
    """Every triangle d1 >= d2 >= d3 >= 0 with d1 in [1, max_k]."""
    triangles = [
        tuple(sorted(t, reverse=True))
        for t in combinations_with_replacement(range(max_k + 1), 3)
        if max(t) > 0
    ]
    with Pool(processes=n_workers) as pool:
        rows = pool.map(classify_triangle, triangles)
    return pd.DataFrame(rows)


def plot_triangles():
    """
    Typical runtime: a few minutes for max_k = 5, mostly in the Q lattice roots
    """
    fig_dir = Path(__file__).parent.joinpath("figures")

    rdf = grid_triangles(max_k=5)

    csv_path = fig_dir.joinpath("triangles/triangles.csv")
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    rdf.to_csv(csv_path, index=False)

    fig = px.scatter(
        rdf.sort_values("charge"),
        x="charge",
        y="class",
        color="kodaira",
        hover_data=["d1", "d2", "d3", "q_type"],
        width=900,
        height=600,
        title="Triangles",
    )

    fig_path = fig_dir.joinpath("triangles/triangles.png")
    fig.write_image(fig_path)


if __name__ == "__main__":
    os.environ["LOGURU_LEVEL"] = "WARNING"
    plot_triangles()
