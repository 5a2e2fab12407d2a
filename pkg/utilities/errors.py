"""
Exception hierarchy for the GRANIT simulation
"""


class GranitError(Exception):
    """Base class for all simulation errors"""


class ConfigError(GranitError):
    """Configuration file missing, malformed or failing validation"""

    def __init__(self, message: str, path: str = None, line: int = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}"
            if line is not None:
                location += f":{line}"
            location += ": "
        super().__init__(f"{location}{message}")


class DomainError(GranitError, ValueError):
    """Argument outside the physical domain of an operation"""


class IndexRangeError(GranitError, IndexError):
    """Quantum-state index outside the computed basis"""


class StepSizeError(GranitError, ValueError):
    """Integrator step violates the phase-per-step bound"""


class NoPeakError(GranitError):
    """Resonance curve has no maximum above the noise floor"""
