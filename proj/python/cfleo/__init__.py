# Copyright 2026 The cfleo Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Python front end for the cfleo simulator.

Configs are plain dicts using the same keys as the JSON config files.
"""

import json
import os

from . import _cfleo
from ._cfleo import (
    PowerSolution,
    angle_loss_db,
    brute_force_solve,
    closed_form_rate,
    config_keys,
    distance_loss_db,
    ga_solve,
    half_power_angle,
    noise_power_w,
    slant_range,
)

__version__ = _cfleo.__version__


def default_config():
    return json.loads(_cfleo.default_config())


def load_config(path):
    with open(path, encoding="utf-8") as f:
        return normalize_config(json.load(f))


def normalize_config(cfg):
    """Validates `cfg` and fills in every missing key with its default."""
    return json.loads(_cfleo.normalize_config(json.dumps(cfg)))


def run(cfg, threads=0):
    return _cfleo.run(json.dumps(cfg), threads)


def sweep(cfg, saps=(4, 8, 16, 24, 32), out_dir=None, threads=0):
    return _cfleo.sweep(json.dumps(cfg), list(saps), os.fspath(out_dir or ""), threads)


def verify(cfg, trials=100000):
    """List of (name, value, limit, passed) tuples."""
    return _cfleo.verify(json.dumps(cfg), trials)


__all__ = [
    "PowerSolution",
    "angle_loss_db",
    "brute_force_solve",
    "closed_form_rate",
    "config_keys",
    "default_config",
    "distance_loss_db",
    "ga_solve",
    "half_power_angle",
    "load_config",
    "noise_power_w",
    "normalize_config",
    "run",
    "slant_range",
    "sweep",
    "verify",
]
