"""
MLflow tracking for lamekit check runs.

Each `check all` run can be logged as one MLflow run: effective settings as
params, every numeric assertion as a metric and the RunReport as a JSON
artifact. Tracking is off unless enabled in config.
"""

from datetime import datetime
from typing import TYPE_CHECKING, Any, Dict, Optional

import mlflow
from loguru import logger

from ..config import get_settings
from ..config.settings import TrackingSettings

if TYPE_CHECKING:
    from ..cli.report import RunReport


def _flatten(params: Dict[str, Any], prefix: str = "") -> Dict[str, str]:
    flat: Dict[str, str] = {}
    for key, value in params.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, f"{name}."))
        else:
            flat[name] = str(value)
    return flat


class MLflowTracker:
    """MLflow tracker for lamekit check runs"""

    def __init__(self, settings: Optional[TrackingSettings] = None):
        settings = settings or get_settings().tracking
        self.tracking_uri = settings.tracking_uri
        self.experiment_name = settings.experiment_name
        self.run_name_prefix = settings.run_name_prefix

        mlflow.set_tracking_uri(self.tracking_uri)
        logger.info(f"MLflow tracking set to: {self.tracking_uri}")
        mlflow.set_experiment(self.experiment_name)
        logger.info(f"MLflow experiment set to: {self.experiment_name}")

    def start_run(self, run_name: Optional[str] = None, tags: Optional[Dict[str, str]] = None) -> str:
        """Start a new MLflow run"""
        if not run_name:
            run_name = f"{self.run_name_prefix}_{datetime.now().strftime('%Y%m%d_%H%M%S')}"

        run = mlflow.start_run(run_name=run_name, tags=tags)
        logger.info(f"Started MLflow run: {run.info.run_id}")
        return run.info.run_id

    def log_report(self, report: "RunReport") -> None:
        """Log a RunReport: parameters, one metric per assertion, the report itself"""
        mlflow.log_params(_flatten(report.parameters))
        metrics = {"wall_time_s": report.wall_time, "passed": int(report.passed)}
        for assertion in report.assertions:
            key = assertion.name.replace(" ", "_")
            if assertion.value is not None:
                metrics[f"{key}.value"] = float(assertion.value)
            metrics[f"{key}.passed"] = int(assertion.passed)
        mlflow.log_metrics(metrics)
        mlflow.log_dict(report.model_dump(mode="json"), artifact_file="run_report.json")

        failures = [a.name for a in report.assertions if not a.passed]
        if failures:
            mlflow.log_text("\n".join(failures), artifact_file="failures.txt")
        logger.info(f"Logged {report.command} report with {len(report.assertions)} assertions")

    def end_run(self):
        """End current MLflow run"""
        try:
            mlflow.end_run()
            logger.info("Ended MLflow run")
        except Exception as e:
            logger.warning(f"Failed to end MLflow run: {e}")

    def get_run_url(self, run_id: str) -> str:
        """Get URL for MLflow run"""
        if self.tracking_uri:
            return f"{self.tracking_uri}/#/experiments/{self.experiment_name}/runs/{run_id}"
        return f"Run ID: {run_id}"


# Global tracker instance (lazy initialization)
_tracker = None


def get_tracker() -> MLflowTracker:
    """Get or create the global tracker instance"""
    global _tracker
    if _tracker is None:
        _tracker = MLflowTracker()
    return _tracker


class TrackerProxy:
    """Proxy object that lazy-initializes the tracker on first use"""

    def __getattr__(self, name):
        return getattr(get_tracker(), name)


tracker = TrackerProxy()
