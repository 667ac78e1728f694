"""
deseed Packager class definition
"""
from __future__ import annotations
import json
import os
import pathlib
import altair as alt
import frictionless
import pandas as pd
from deseed import __version__
from deseed.harness import ExperimentReport
from typing import Any, Dict, List, Optional

RUN_COLUMNS = ["strategy", "run_index", "nfc", "best_value", "success"]
TRACE_COLUMNS = ["strategy", "run_index", "nfc", "best_value"]


class Packager:
    def __init__(self):
        """
        Creates a new deseed Packager instance
        """
        self._version = __version__

    def report_json(self, report: ExperimentReport) -> str:
        """Serializes a report as newline-terminated JSON"""
        return json.dumps(report.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def runs_csv(self, report: ExperimentReport) -> str:
        """Serializes the per-run table as CSV with a header row"""
        dat = pd.DataFrame(report.runs_table(), columns=RUN_COLUMNS)
        return dat.to_csv(index=False)

    def traces_csv(self, report: ExperimentReport) -> str:
        dat = pd.DataFrame(report.traces(), columns=TRACE_COLUMNS)
        return dat.to_csv(index=False)

    def trace_view(self, data_url: str) -> Dict[str, Any]:
        """
        Builds a vega-lite view plotting best value against NFC per strategy

        Parameters
        ----------
        data_url: str
            Location of the traces CSV, relative to the view file

        Returns
        -------
        dict
            vega-lite view dict
        """
        data = alt.Data(url=data_url, format=alt.DataFormat(type="csv"))

        chart = alt.Chart(data).mark_line().encode(
            x=alt.X("nfc:Q", title="NFC"),
            y=alt.Y("best_value:Q", title="best objective value"),
            color=alt.Color("strategy:N"),
            detail="run_index:N",
        ).properties(name="convergence")

        return chart.to_dict()

    def write_report(self, report: ExperimentReport, path: str | pathlib.Path, format="json"):
        """
        Writes a report to disk

        Parameters
        ----------
        report: ExperimentReport
            Report to write
        path: str|path
            Output file
        format: str
            "json" (full report) or "csv" (per-run table)
        """
        if format == "csv":
            contents = self.runs_csv(report)
        else:
            contents = self.report_json(report)

        self._write(path, contents)

    def write_traces(self, report: ExperimentReport, path: str | pathlib.Path):
        """
        Writes the traces CSV to `path` and a vega-lite view next to it
        (same stem, ".vl.json" suffix)

        Returns
        -------
        list
            Paths written
        """
        path = pathlib.Path(path)
        view_path = path.with_suffix(".vl.json")

        self._write(path, self.traces_csv(report))
        self._write(view_path, json.dumps(self.trace_view(path.name), indent=2, sort_keys=True) + "\n")

        return [path, view_path]

    def build_package(self, report: ExperimentReport, pkg_dir: str | pathlib.Path = "./",
                      include_traces=True,
                      annotations: Optional[List[str]] = None):
        """
        Builds a Frictionless data package holding an experiment's results

        Parameters
        ----------
        report: ExperimentReport
            Report to package
        pkg_dir: str|path
            [Optional] Location where the data package should be saved (default: "./")
        include_traces: bool
            [Optional] Whether to include convergence traces and their view (default: True)
        annotations: list
            [Optional] Free-text notes to embed in the package metadata
        """
        pkg_dir = os.path.realpath(os.path.expanduser(os.path.expandvars(str(pkg_dir))))
        os.makedirs(pkg_dir, exist_ok=True)

        # resources are written out first and "describe_package()" infers their schema
        self._write(os.path.join(pkg_dir, "report.json"), self.report_json(report))
        self._write(os.path.join(pkg_dir, "runs.csv"), self.runs_csv(report))

        views = []

        if include_traces:
            self._write(os.path.join(pkg_dir, "traces.csv"), self.traces_csv(report))
            views.append(self.trace_view("traces.csv"))

        pkg = frictionless.describe_package("*.csv", basepath=pkg_dir)

        pkg["deseed"] = {
            "version": self._version,
            "experiment": report.spec.to_dict(),
            "annot": list(annotations or []),
            "views": views,
        }

        with open(os.path.join(pkg_dir, "datapackage.json"), "w", encoding="utf-8") as fp:
            json.dump(pkg, fp, indent=2, sort_keys=True)

    def _write(self, path: str | pathlib.Path, contents: str):
        with open(path, "w", encoding="utf-8", newline="") as fp:
            fp.write(contents)
