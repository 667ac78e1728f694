"""
Utility functions: config profiles and table loading
"""
from __future__ import annotations
import os
import pathlib
import pandas as pd
import yaml
from cerberus import Validator
from typing import Any, Dict

PROFILE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "profiles")


class ConfigValidator(Validator):
    """Validator for the config profile; numbers written as "1e-3" are read by YAML as strings"""
    def _normalize_coerce_float(self, value):
        return float(value)


def load_profile(name: str) -> Dict[str, Any]:
    """Loads a cerberus validation schema from the packaged profiles"""
    with open(os.path.join(PROFILE_DIR, f"{name}.yml")) as fp:
        return yaml.load(fp, Loader=yaml.FullLoader)


def load_config(path: str | pathlib.Path) -> Dict[str, Any]:
    """
    Loads a YAML experiment config

    Parameters
    ----------
    path: str|path
        Location of the config file

    Returns
    -------
    dict
        Parsed config (empty file -> empty dict)
    """
    path = os.path.realpath(os.path.expanduser(os.path.expandvars(str(path))))

    if not os.path.exists(path):
        raise FileNotFoundError(f"Unable to find config file at specified location: {path}")
    elif os.path.splitext(path)[1] not in [".yml", ".yaml"]:
        raise ValueError(f"Invalid file extension for config file: {path}")

    with open(path) as fp:
        try:
            cfg = yaml.load(fp, Loader=yaml.FullLoader)
        except yaml.YAMLError as e:
            raise ValueError(f"Unable to parse config file {path}: {e}")

    if cfg is None:
        return {}
    elif not isinstance(cfg, dict):
        raise ValueError(f"Config file {path} must contain a mapping at the top level")

    return cfg


def load_runs(infile: str | pathlib.Path) -> pd.DataFrame:
    """Loads a per-run table written by the packager"""
    infile = str(infile)

    if infile.endswith(".csv") or infile.endswith(".csv.gz"):
        dat = pd.read_csv(infile, float_precision="round_trip")
    elif infile.endswith(".tsv") or infile.endswith(".tsv.gz"):
        dat = pd.read_csv(infile, sep="\t", float_precision="round_trip")
    else:
        raise ValueError(f"Unrecognized file format for {infile}!")

    return dat
