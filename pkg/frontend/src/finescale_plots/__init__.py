"""Figure rendering for finescale JSON reports.

Strictly read-only: every number drawn or annotated comes from a report
field; nothing is recomputed here.
"""

__version__ = "0.1.0"
