# -*- coding: utf-8 -*-
"""
Hash Utils - v1.0.0
Impronta SHA-256 della forma canonica di uno schedule.
"""

import hashlib
import json

from analysis.schedule_analysis import Schedule
from loaders.schedule_loader import ScheduleLoader


class HashUtils:
    HASH_ALGORITHM = "sha256"

    @classmethod
    def schedule_hash(cls, schedule: Schedule) -> str:
        canonical = json.dumps(ScheduleLoader.to_dict(schedule), sort_keys=True, separators=(",", ":"))
        hasher = hashlib.new(cls.HASH_ALGORITHM)
        hasher.update(canonical.encode("utf-8"))
        return hasher.hexdigest()
