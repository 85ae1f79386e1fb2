from collections import defaultdict
from pathlib import Path
from typing import Union

import pandas as pd
import plotly.express as px
import plotly.graph_objects as go

from clustertrop.trop import DevelopingMap


def developing_dataframe(developing: DevelopingMap, sheets: int = 2) -> pd.DataFrame:
    return pd.DataFrame(developing.dump(sheets))


def plot_developing(developing: DevelopingMap, sheets: int = 2) -> go.Figure:
    """Images of the fan rays as segments from the origin, one color per sheet."""
    data = defaultdict(list)
    for row in developing.dump(sheets):
        for x, y in ((0, 0), (row["x"], row["y"])):
            data["x"].append(x)
            data["y"].append(y)
            data["sheet"].append(str(row["sheet"]))
            data["ray"].append(f"{row['sheet']}:{row['ray_index']}")

    df = pd.DataFrame(data=data)
    fig = px.line(
        df,
        x="x",
        y="y",
        color="sheet",
        line_group="ray",
        hover_name="ray",
        markers=True,
        title=f"Developing map, {sheets} sheets",
    )
    fig.update_yaxes(scaleanchor="x", scaleratio=1)
    return fig


def save_figure(fig: go.Figure, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.write_image(str(path))
    return path
