import typer
import yaml
from loguru import logger
from omegaconf import OmegaConf

from clustertrop.classifier import classify
from clustertrop.config import Config
from clustertrop.seeds import FanSeedSpec, Seed
from clustertrop.utils.utils import save_logs


def main(cfg: str = typer.Option("")):
    if cfg:
        omegaconf = OmegaConf.load(cfg)
        conf = Config({"omegaconf": omegaconf})
    else:
        conf = Config({})
    if conf.input_path is None:
        raise typer.BadParameter("The config needs an input.path to classify")

    with open(conf.input_path, "r") as f:
        data = yaml.safe_load(f)
    if conf.omegaconf.input.kind == "fan":
        source = FanSeedSpec.from_dict(data)
    else:
        source = Seed.from_dict(data)

    report = classify(source, conf)
    if conf.omegaconf.logs.save:
        log_path = save_logs(conf, {"report": report})
        logger.info(f"Saved the report to {log_path}")
    else:
        logger.info(f"{report.primary_class}")


if __name__ == "__main__":
    typer.run(main)
