"""
Logging system for GRANIT simulation runs
"""
import json
import logging
from pathlib import Path
from datetime import datetime
from typing import Dict, Any, List, Optional


class SimulationLogger:
    """Run logger: stdlib logging plus a structured event record"""

    def __init__(self, config: Dict[str, Any]):
        """
        Initialize logger

        Args:
            config: Logging section of the run configuration
                (keys: enabled, log_file, log_level)
        """
        self.config = config
        self.enabled = config.get("enabled", True)
        self.events: List[Dict[str, Any]] = []
        self.logger = logging.getLogger("GranitSimulation")

        if not self.enabled:
            return

        log_file = config.get("log_file", "logs/granit_simulation.log")
        log_level = config.get("log_level", "INFO")

        handlers: List[logging.Handler] = [logging.StreamHandler()]
        if log_file:
            log_path = Path(log_file)
            log_path.parent.mkdir(parents=True, exist_ok=True)
            handlers.append(logging.FileHandler(log_file))

        logging.basicConfig(
            level=getattr(logging, log_level.upper()),
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            handlers=handlers,
            force=True
        )

    def _record(self, kind: str, payload: Dict[str, Any]):
        entry = {
            "timestamp": datetime.now().isoformat(),
            "event": kind,
            **payload
        }
        self.events.append(entry)
        if self.enabled:
            self.logger.info(f"{kind}: {json.dumps(payload, default=str)}")

    def log_study_start(self, study: str, parameters: Dict[str, Any]):
        """Log the parameters a study subcommand starts with"""
        self._record("study_start", {"study": study, "parameters": parameters})

    def log_sweep(self, study: str, n_cells: int, workers: int, elapsed_s: float):
        """Log a completed parallel sweep"""
        self._record("sweep", {
            "study": study,
            "cells": n_cells,
            "workers": workers,
            "elapsed_s": round(elapsed_s, 3)
        })

    def log_result(self, study: str, summary: Dict[str, Any]):
        """Log the headline numbers of a study"""
        self._record("result", {"study": study, "summary": summary})

    def log_output(self, study: str, path: str):
        """Log a written output file"""
        self._record("output", {"study": study, "path": path})

    def get_summary(self) -> Dict[str, Any]:
        """Get summary of recorded events"""
        counts: Dict[str, int] = {}
        for entry in self.events:
            counts[entry["event"]] = counts.get(entry["event"], 0) + 1
        return {"total_events": len(self.events), "event_counts": counts}

    def save_logs(self, output_file: Optional[str] = None) -> str:
        """Save the structured event record to a JSON file"""
        if output_file is None:
            output_file = f"logs/granit_run_{datetime.now().strftime('%Y%m%d_%H%M%S')}.json"

        log_data = {
            "events": self.events,
            "summary": self.get_summary()
        }

        output_path = Path(output_file)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, 'w') as f:
            json.dump(log_data, f, indent=2, default=str)

        if self.enabled:
            self.logger.info(f"Logs saved to: {output_file}")
        return output_file
