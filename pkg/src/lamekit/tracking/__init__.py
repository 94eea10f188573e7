"""
Optional MLflow tracking of check runs
"""

from .mlflow_tracker import MLflowTracker, get_tracker, tracker

__all__ = ["MLflowTracker", "get_tracker", "tracker"]
