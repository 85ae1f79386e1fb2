import random

import numpy as np
from loguru import logger
from omegaconf import OmegaConf

from clustertrop.utils.utils import DEFAULT_CONFIG_FILE, REPO_ROOT


# Configuration Reading Logic
class Config:
    def __init__(self, config):

        logger.info(f"Initializing config: {config}")

        default_omegaconf = OmegaConf.load(DEFAULT_CONFIG_FILE)
        custom_omegaconf = OmegaConf.create(config.get("omegaconf", {}))
        self.omegaconf = OmegaConf.merge(default_omegaconf, custom_omegaconf)

        self.global_seed = self.omegaconf.global_seed
        random.seed(self.global_seed)
        np.random.seed(self.global_seed)
        self.rng = np.random.default_rng(self.global_seed)

        # FANS AND LINES
        self.min_rays = self.omegaconf.fan.min_rays
        self.sheets = self.omegaconf.develop.sheets
        self.wrap_cutoff = self.omegaconf.trace.wrap_cutoff
        if self.wrap_cutoff < 1:
            raise ValueError(f"wrap_cutoff must be >= 1, got {self.wrap_cutoff}")

        # MODULAR GROUP SEARCH
        self.strict_gamma = self.omegaconf.gamma.strict
        self.max_word_length = self.omegaconf.gamma.max_word_length
        self.max_states = self.omegaconf.gamma.max_states
        self.max_generators = self.omegaconf.gamma.max_generators

        # QUIVERS
        self.max_forms = self.omegaconf.quiver.max_forms

        self.line_samples = self.omegaconf.classify.line_samples
        self.n_workers = self.omegaconf.classify.n_workers

        if self.omegaconf.input.path:
            self.input_path = REPO_ROOT.joinpath(self.omegaconf.input.path)
        else:
            self.input_path = None

    def dump(self) -> dict:
        return {"omegaconf": OmegaConf.to_container(self.omegaconf)}
