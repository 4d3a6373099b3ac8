"""Certified norm intervals, functional sampling, index probes and the
inequality suites."""
from .bounds import Budget, norm_interval, norm_lower, norm_upper
from .certs import Certificate, NormInterval
from .sampling import alpha_probe, beta_probe, branch_probe, sample_functionals
from .suites import SUITES, SuiteReport, check_suite

__all__ = ["Budget", "Certificate", "NormInterval", "SUITES", "SuiteReport", "alpha_probe",
           "beta_probe", "branch_probe", "check_suite", "norm_interval", "norm_lower",
           "norm_upper", "sample_functionals"]
