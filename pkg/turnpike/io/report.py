"""
Module for experiment reports.

A :class:`Report` collects the parameters used, the measured values and the
pass/fail outcome of every enabled bound check. It is written twice: as
readable text (``report.txt``) and as ``key=value`` lines (``report.kv``).
"""
import logging
import os
from collections import namedtuple

logger = logging.getLogger('turnpike.io')

Check = namedtuple("Check", ["name", "passed", "detail"])


def _render(value):
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, (tuple, list)):
        return ",".join(_render(v) for v in value)
    return str(value)


class Report:
    """Values and bound checks of one experiment run."""

    def __init__(self, experiment):
        self.experiment = experiment
        self.parameters = {}
        self.values = {}
        self.checks = []

    def add_parameters(self, prefix, mapping):
        for key, value in mapping.items():
            self.parameters["%s.%s" % (prefix, key)] = value

    def add_value(self, key, value):
        self.values[key] = value

    def add_decay(self, prefix, decay):
        """Add the fields of a :class:`DecayReport` under ``prefix``."""
        for key, value in decay.as_dict().items():
            self.values["%s.%s" % (prefix, key)] = value

    def add_check(self, name, passed, detail=""):
        passed = bool(passed)
        self.checks.append(Check(name, passed, detail))
        if not passed:
            logger.warning("Check %s failed %s", name, detail)
        return passed

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def failed_checks(self):
        return [check.name for check in self.checks if not check.passed]

    def to_text(self):
        lines = ["experiment: %s" % self.experiment, "", "parameters:"]
        lines += ["  %s = %s" % (key, _render(value)) for key, value in self.parameters.items()]
        lines += ["", "values:"]
        lines += ["  %s = %s" % (key, _render(value)) for key, value in self.values.items()]
        lines += ["", "checks:"]
        for check in self.checks:
            status = "PASS" if check.passed else "FAIL"
            lines.append("  [%s] %s%s" % (status, check.name, " (%s)" % check.detail if check.detail else ""))
        lines += ["", "result: %s" % ("PASS" if self.passed else "FAIL")]
        return "\n".join(lines) + "\n"

    def to_kv(self):
        lines = ["experiment=%s" % self.experiment]
        lines += ["%s=%s" % (key, _render(value)) for key, value in self.parameters.items()]
        lines += ["%s=%s" % (key, _render(value)) for key, value in self.values.items()]
        lines += ["check.%s=%s" % (check.name, _render(check.passed)) for check in self.checks]
        lines.append("passed=%s" % _render(self.passed))
        return "\n".join(lines) + "\n"

    def write(self, directory):
        """Write ``report.txt`` and ``report.kv`` into ``directory``."""
        os.makedirs(directory, exist_ok=True)
        paths = []
        for name, text in (("report.txt", self.to_text()), ("report.kv", self.to_kv())):
            path = os.path.join(directory, name)
            with open(path, "w", newline="\n", encoding="utf-8") as handle:
                handle.write(text)
            paths.append(path)
        return paths
