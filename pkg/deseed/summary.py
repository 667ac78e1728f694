"""
NFC summary statistics
"""
import pandas as pd
from typing import Dict, Optional, Sequence

STAT_KEYS = ["mean_nfc", "median_nfc", "stddev_nfc", "min_nfc", "max_nfc"]


def compute_nfc_summary(nfcs: Sequence[int]) -> Dict[str, Optional[float]]:
    """
    Computes NFC statistics over a set of (successful) runs

    Parameters
    ----------
    nfcs: sequence of int
        NFC of each successful run

    Returns
    -------
    dict
        mean/median/stddev/min/max; every value is None when `nfcs` is empty
    """
    # no successful runs: mark statistics as missing rather than zero
    if len(nfcs) == 0:
        return {key: None for key in STAT_KEYS}

    dat = pd.Series(list(nfcs), dtype="float64")

    return {
        "mean_nfc": float(dat.mean()),
        "median_nfc": float(dat.median()),
        "stddev_nfc": float(dat.std(ddof=0)),
        "min_nfc": float(dat.min()),
        "max_nfc": float(dat.max()),
    }


def success_rate(successes: Sequence[bool]) -> float:
    """Fraction of successful runs"""
    if len(successes) == 0:
        return 0.0

    return float(sum(bool(x) for x in successes) / len(successes))
