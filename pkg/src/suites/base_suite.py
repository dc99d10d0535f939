#!/usr/bin/env python
from abc import ABC, abstractmethod

import numpy as np


class VerificationSuite(ABC):
    """Base class for all verification suites

    Each suite checks the claims of one part of the library and returns
    its findings as a list of reporting.Check records.
    """

    def __init__(self, config, settings=None):
        """Initialize the suite

        Args:
            config: The RunConfig of this invocation
            settings: Optional per-suite settings dictionary
        """
        self.config = config
        self.settings = settings or {}
        self.name = "base"
        self.description = "Base verification suite"

    def setup(self):
        """Build the objects the checks share.

        Called once before run().
        """
        pass

    @abstractmethod
    def run(self):
        """Run the checks

        Returns:
            List of Check records
        """
        pass

    def cleanup(self):
        """Release anything setup() acquired."""
        pass

    def rng(self, offset=0):
        """Seeded generator; offsets keep independent draws apart"""
        return np.random.default_rng(self.config.seed + offset)

    def trials(self, default=None):
        """Probe count, overridable per suite with settings['trials']"""
        return int(self.settings.get("trials", default or self.config.trials))

    def check_name(self, claim):
        return f"{self.name}.{claim}"
