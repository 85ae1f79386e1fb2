from functools import wraps
from pathlib import Path
from typing import List, Optional

import pandas as pd
import typer
import yaml
from loguru import logger
from omegaconf import OmegaConf

from clustertrop.classifier import (
    InconsistentCriteria,
    as_seed,
    audit_corpus,
    classify,
    modular_group,
)
from clustertrop.config import Config
from clustertrop.linalg import LinalgException, ade_type
from clustertrop.monodromy import (
    MonodromyException,
    MonodromyMismatch,
    kodaira_identify,
    monodromy_via_mutations,
)
from clustertrop.seeds import (
    FanSeedSpec,
    MalformedSeed,
    Seed,
    SeedException,
    make_coprime,
    maximally_factor,
    quiver_of,
)
from clustertrop.surfaces import SurfaceException, charge, q_eff_decomposition, q_form
from clustertrop.trop import (
    DevelopingMap,
    FanModel,
    TropException,
    WrapInconsistency,
    develop,
    sample_lines,
    trace_line,
)
from clustertrop.utils.plot import plot_developing, save_figure
from clustertrop.utils.utils import canonical_json

app = typer.Typer()

INPUT_ERRORS = (
    SeedException,
    LinalgException,
    SurfaceException,
    yaml.YAMLError,
    ValueError,
)
INCONSISTENCIES = (InconsistentCriteria, WrapInconsistency, MonodromyMismatch)

FAN_HELP = "Fan JSON, inline or as a path"
SEED_HELP = "Seed JSON, inline or as a path"
CFG_HELP = "YAML merged over the default config"


def _handle_errors(command):
    @wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except INCONSISTENCIES as e:
            typer.echo(f"Internal inconsistency: {e}", err=True)
            raise typer.Exit(code=2)
        except (MonodromyException, TropException, *INPUT_ERRORS) as e:
            typer.echo(f"Input error: {e}", err=True)
            raise typer.Exit(code=1)

    return wrapper


def _load(text: str):
    """Inline JSON/YAML, or the contents of the file it names."""
    stripped = text.strip()
    if not stripped.startswith(("{", "[")) and Path(stripped).is_file():
        with open(stripped, "r") as f:
            return yaml.safe_load(f)
    return yaml.safe_load(text)


def _source(fan: Optional[str], seed: Optional[str]):
    if (fan is None) == (seed is None):
        raise MalformedSeed("Pass exactly one of --fan and --seed")
    data = _load(fan if fan is not None else seed)
    if not isinstance(data, dict):
        raise MalformedSeed(f"Expected a JSON object, got {data!r}")
    if fan is not None:
        return FanSeedSpec.from_dict(data)
    return Seed.from_dict(data)


def _config(cfg: str = "", wrap_cutoff: Optional[int] = None, strict_gamma: bool = False):
    omegaconf = OmegaConf.load(cfg) if cfg else OmegaConf.create({})
    overrides = {}
    if wrap_cutoff is not None:
        overrides["trace"] = {"wrap_cutoff": wrap_cutoff}
    if strict_gamma:
        overrides["gamma"] = {"strict": True}
    return Config({"omegaconf": OmegaConf.merge(omegaconf, OmegaConf.create(overrides))})


def _word(word: str) -> List[int]:
    if not word.strip():
        return []
    try:
        return [int(x) for x in word.split(",")]
    except ValueError:
        raise MalformedSeed(f"Mutation word {word!r} is not a comma separated list of indices")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    else:
        typer.echo(text, nl=not text.endswith("\n"))


def _model(source, config: Config) -> FanModel:
    return FanModel.from_seed(as_seed(source), config.min_rays)


@app.command("classify")
@_handle_errors
def classify_command(
    fan: Optional[str] = typer.Option(None, help=FAN_HELP),
    seed: Optional[str] = typer.Option(None, help=SEED_HELP),
    wrap_cutoff: Optional[int] = typer.Option(None, min=1),
    strict_gamma: bool = typer.Option(False, help="Require frozen vectors to be permuted"),
    out: Optional[str] = typer.Option(None),
    cfg: str = typer.Option("", help=CFG_HELP),
):
    """Full cross-checked classification report."""
    config = _config(cfg, wrap_cutoff, strict_gamma)
    report = classify(_source(fan, seed), config)
    _emit(canonical_json(report), out)


@app.command()
@_handle_errors
def mutate(
    fan: Optional[str] = typer.Option(None, help=FAN_HELP),
    seed: Optional[str] = typer.Option(None, help=SEED_HELP),
    word: str = typer.Option("", help="Comma separated indices, e.g. 0,2"),
    out: Optional[str] = typer.Option(None),
):
    S = as_seed(_source(fan, seed)).mutate_word(_word(word))
    _emit(canonical_json(S.dump()), out)


@app.command()
@_handle_errors
def quiver(
    fan: Optional[str] = typer.Option(None, help=FAN_HELP),
    seed: Optional[str] = typer.Option(None, help=SEED_HELP),
    format: str = typer.Option("dot", help="dot or json"),
    out: Optional[str] = typer.Option(None),
):
    Q = quiver_of(as_seed(_source(fan, seed)))
    if format == "dot":
        _emit(Q.to_dot(), out)
    elif format == "json":
        _emit(canonical_json(Q), out)
    else:
        raise ValueError(f"Unsupported format {format} for quiver")


@app.command()
@_handle_errors
def monodromy(
    fan: Optional[str] = typer.Option(None, help=FAN_HELP),
    seed: Optional[str] = typer.Option(None, help=SEED_HELP),
    out: Optional[str] = typer.Option(None),
    cfg: str = typer.Option("", help=CFG_HELP),
):
    config = _config(cfg)
    S = as_seed(_source(fan, seed))
    model = FanModel.from_seed(S, config.min_rays)
    m_inv = DevelopingMap(model).monodromy_inverse()
    via_mutations = monodromy_via_mutations(S, model)
    if via_mutations != m_inv:
        raise MonodromyMismatch(f"Developing map gives {m_inv}, mutations give {via_mutations}")
    log = {
        "fan": model,
        "monodromy_inverse": m_inv,
        "monodromy": m_inv.inverse(),
        "kodaira": str(kodaira_identify(m_inv)),
    }
    _emit(canonical_json(log), out)


@app.command("develop")
@_handle_errors
def develop_command(
    fan: Optional[str] = typer.Option(None, help=FAN_HELP),
    seed: Optional[str] = typer.Option(None, help=SEED_HELP),
    sheets: Optional[int] = typer.Option(None, min=1),
    format: str = typer.Option("csv", help="csv, json or svg"),
    out: Optional[str] = typer.Option(None),
    cfg: str = typer.Option("", help=CFG_HELP),
):
    config = _config(cfg)
    sheets = sheets or config.sheets
    developing = develop(_model(_source(fan, seed), config), sheets)
    if format == "csv":
        _emit(pd.DataFrame(developing.dump(sheets)).to_csv(index=False), out)
    elif format == "json":
        _emit(canonical_json(developing.dump(sheets)), out)
    elif format == "svg":
        if not out:
            raise ValueError("SVG output needs --out")
        save_figure(plot_developing(developing, sheets), out)
        logger.info(f"Saved the developing map to {out}")
    else:
        raise ValueError(f"Unsupported format {format} for develop")


@app.command()
@_handle_errors
def trace(
    fan: Optional[str] = typer.Option(None, help=FAN_HELP),
    seed: Optional[str] = typer.Option(None, help=SEED_HELP),
    line: Optional[str] = typer.Option(
        None, help="[sheet, [px, py], [dx, dy]] in developing coordinates"
    ),
    wrap_cutoff: Optional[int] = typer.Option(None, min=1),
    format: str = typer.Option("json", help="json or csv"),
    out: Optional[str] = typer.Option(None),
    cfg: str = typer.Option("", help=CFG_HELP),
):
    """Traces one line, or random sample lines when --line is not given."""
    config = _config(cfg, wrap_cutoff)
    developing = DevelopingMap(_model(_source(fan, seed), config))
    if line is not None:
        start = _load(line)
        if not isinstance(start, list) or len(start) != 3:
            raise MalformedSeed(f"Line {line!r} is not [sheet, point, direction]")
        traces = [trace_line(developing, tuple(start), config.wrap_cutoff)]
    else:
        traces = sample_lines(
            developing,
            config.rng,
            config.omegaconf.trace.samples,
            config.wrap_cutoff,
        )
    if format == "json":
        _emit(canonical_json(traces), out)
    elif format == "csv":
        rows = [
            {
                "line": n,
                "ray_index": c.ray_index,
                "sheet": c.sheet,
                "x": str(c.point[0]),
                "y": str(c.point[1]),
            }
            for n, t in enumerate(traces)
            for c in t.crossings
        ]
        df = pd.DataFrame(rows, columns=["line", "ray_index", "sheet", "x", "y"])
        _emit(df.to_csv(index=False), out)
    else:
        raise ValueError(f"Unsupported format {format} for trace")


@app.command()
@_handle_errors
def qform(
    fan: Optional[str] = typer.Option(None, help=FAN_HELP),
    seed: Optional[str] = typer.Option(None, help=SEED_HELP),
    out: Optional[str] = typer.Option(None),
):
    S = as_seed(_source(fan, seed))
    Q = q_form(S)
    q_eff = q_eff_decomposition(S)
    log = {
        "gram": Q,
        "rank": Q.rank,
        "type": ade_type(Q),
        "q_eff": None if q_eff is None else str(q_eff),
    }
    _emit(canonical_json(log), out)


@app.command("charge")
@_handle_errors
def charge_command(
    fan: Optional[str] = typer.Option(None, help=FAN_HELP),
    seed: Optional[str] = typer.Option(None, help=SEED_HELP),
    cfg: str = typer.Option("", help=CFG_HELP),
):
    typer.echo(charge(_model(_source(fan, seed), _config(cfg))))


@app.command("modular-group")
@_handle_errors
def modular_group_command(
    fan: Optional[str] = typer.Option(None, help=FAN_HELP),
    seed: Optional[str] = typer.Option(None, help=SEED_HELP),
    strict_gamma: bool = typer.Option(False, help="Require frozen vectors to be permuted"),
    out: Optional[str] = typer.Option(None),
    cfg: str = typer.Option("", help=CFG_HELP),
):
    config = _config(cfg, strict_gamma=strict_gamma)
    S = as_seed(_source(fan, seed))
    model = FanModel.from_seed(S, config.min_rays)
    developing = DevelopingMap(model)
    group = modular_group(
        S,
        kodaira_identify(developing.monodromy_inverse()),
        strict=config.strict_gamma,
        max_word_length=config.max_word_length,
        max_states=config.max_states,
        max_generators=config.max_generators,
        developing=developing,
    )
    _emit(canonical_json(group), out)


@app.command()
@_handle_errors
def normalize(
    mode: str = typer.Argument(..., help="coprime or max-factor"),
    fan: Optional[str] = typer.Option(None, help=FAN_HELP),
    seed: Optional[str] = typer.Option(None, help=SEED_HELP),
    out: Optional[str] = typer.Option(None),
):
    S = as_seed(_source(fan, seed))
    if mode == "coprime":
        S = make_coprime(S)
    elif mode == "max-factor":
        S = maximally_factor(S)
    else:
        raise ValueError(f"Unknown normalization {mode}")
    _emit(canonical_json(S.dump()), out)


@app.command()
@_handle_errors
def audit(
    size: Optional[int] = typer.Option(None, min=1, help="Number of random fans"),
    out: Optional[str] = typer.Option(None),
    cfg: str = typer.Option("", help=CFG_HELP),
):
    """Classifies a random corpus and mutations of it, checking the criteria agree."""
    config = _config(cfg)
    if size is not None:
        config.omegaconf.corpus.size = size
    _emit(canonical_json(audit_corpus(config)), out)


if __name__ == "__main__":
    app()
