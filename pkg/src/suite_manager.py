#!/usr/bin/env python
import importlib
import logging
import time
import traceback

from .reporting import Check, FAIL
from .suites.base_suite import VerificationSuite

logger = logging.getLogger(__name__)


class SuiteManager:
    """Loads verification suites and runs them in order"""

    def __init__(self, run_config, config_manager=None):
        """Initialize the suite manager

        Args:
            run_config: RunConfig passed to every suite
            config_manager: Optional ConfigManager for per-suite settings
        """
        self.run_config = run_config
        self.config_manager = config_manager
        self.suites = {}
        self.load_errors = {}

    def load_suites(self, names):
        """Import and instantiate the named suites

        Args:
            names: Suite names; 'kmaps' loads src/suites/kmaps_suite.py

        Returns:
            List of names that failed to load
        """
        if not names:
            logger.warning("No suites requested")
            return []

        logger.info(f"Loading suites: {list(names)}")
        failed = []
        for suite_name in names:
            try:
                suite_module = importlib.import_module(f"{__package__}.suites.{suite_name}_suite")

                for attr_name in dir(suite_module):
                    attr = getattr(suite_module, attr_name)
                    if (isinstance(attr, type) and
                            issubclass(attr, VerificationSuite) and
                            attr is not VerificationSuite):
                        settings = {}
                        if self.config_manager is not None:
                            settings = self.config_manager.get_suite_config(suite_name)
                        self.suites[suite_name] = attr(self.run_config, settings)
                        logger.info(f"Loaded suite: {suite_name}")
                        break
                else:
                    logger.warning(f"No suite class found for {suite_name}")
                    self.load_errors[suite_name] = "no suite class found"
                    failed.append(suite_name)
            except Exception as e:
                logger.error(f"Error loading suite {suite_name}: {e}")
                logger.error(traceback.format_exc())
                self.load_errors[suite_name] = f"{type(e).__name__}: {e}"
                failed.append(suite_name)

        logger.info(f"Loaded {len(self.suites)} suites")
        return failed

    def run(self, timing):
        """Run every loaded suite

        A suite that raises contributes a failed '<suite>.crashed' check
        instead of stopping the run.

        Args:
            timing: Dict receiving wall-clock seconds per suite

        Returns:
            List of Check records in suite order
        """
        checks = [Check(f"{name}.crashed", FAIL, details={"error": error})
                  for name, error in self.load_errors.items()]
        for name, suite in self.suites.items():
            start = time.perf_counter()
            try:
                suite.setup()
                checks.extend(suite.run())
            except Exception as e:
                logger.error(f"Suite {name} crashed: {e}")
                logger.error(traceback.format_exc())
                checks.append(Check(f"{name}.crashed", FAIL, details={"error": f"{type(e).__name__}: {e}"}))
            finally:
                try:
                    suite.cleanup()
                except Exception as e:
                    logger.warning(f"Cleanup of suite {name} failed: {e}")
            timing[name] = round(time.perf_counter() - start, 6)
            logger.info(f"Suite {name} finished in {timing[name]:.3f}s")
        return checks
