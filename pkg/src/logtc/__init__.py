"""Exact combinatorics of log structures on toroidal crossing spaces."""

from .errors import LogtcError
from .gtc import GtcSpace, parse_gtc, serialize, validate_gtc
from .ls import LSSection, check_ls_section, joint_check, parse_section, wall_bundle
from .resolution import plan_resolution, resolve, verify_log_smooth

__version__ = "0.1.0"

__all__ = ["GtcSpace", "LSSection", "LogtcError", "check_ls_section", "joint_check",
           "parse_gtc", "parse_section", "plan_resolution", "resolve", "serialize",
           "validate_gtc", "verify_log_smooth", "wall_bundle"]
