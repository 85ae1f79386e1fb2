import json
import uuid
from datetime import datetime
from fractions import Fraction
from pathlib import Path

import numpy as np

REPO_ROOT = Path(__file__).parent.parent.parent
LOGS_PATH = REPO_ROOT.joinpath("logs")
DEFAULT_CONFIG_FILE = REPO_ROOT.joinpath("clustertrop/config/default.yaml")


def rational_to_str(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def to_jsonable(obj):
    """Recursively turns exact values into plain JSON values.

    Fractions become "p/q" strings in lowest terms, integer types become ints,
    objects with a `dump` method are dumped first.
    """
    if hasattr(obj, "dump") and callable(obj.dump):
        return to_jsonable(obj.dump())
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        if obj.denominator == 1:
            return int(obj.numerator)
        return rational_to_str(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(key): to_jsonable(value) for key, value in obj.items()}
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    return str(obj)


def canonical_json(obj, compact=False) -> str:
    if compact:
        return json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"))
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=4)


def load_logs(log_path: str, relative_path=True) -> dict:
    full_path = Path(log_path)
    if relative_path:
        full_path = LOGS_PATH.joinpath(log_path)
    with open(full_path, "r") as f:
        logs = json.load(f)
    return logs


def save_logs(config, log_dict, compact=False) -> Path:
    log_path = LOGS_PATH.joinpath(
        f"{datetime.now().strftime('%m%d-%H%M%S')}_{str(uuid.uuid4())[:6]}.json"
    )
    log_path.parent.mkdir(parents=True, exist_ok=True)
    log_dict = dict(log_dict)
    log_dict["config"] = config.dump()
    with open(log_path, "w") as fp:
        fp.write(canonical_json(log_dict, compact=compact))
    return log_path
