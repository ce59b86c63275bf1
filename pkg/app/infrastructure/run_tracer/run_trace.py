from datetime import datetime, timedelta, timezone

UTC = timezone.utc
from typing import Optional

from pydantic import BaseModel, computed_field, ConfigDict, Field, field_serializer, field_validator, model_validator

from app.core.exceptions.local_exceptions import CapacityExceededError


class RunTrace(BaseModel):
    """Timing and work counters of one solver run."""

    model_config = ConfigDict(validate_assignment=True)

    algorithm: Optional[str] = Field(default=None)

    # ---- timing ----
    started_at: Optional[datetime] = Field(default=None)
    finished_at: Optional[datetime] = Field(default=None)

    # ---- counters ----
    oracle_calls: int = Field(default=0, ge=0)
    steiner_calls: int = Field(default=0, ge=0)
    iterations: int = Field(default=0, ge=0)

    # ---- computed properties --------------------------------------------------
    @computed_field
    @property
    def elapsed_ms(self) -> Optional[int]:
        """Start → Finish"""
        if self.started_at is None or self.finished_at is None:
            return None
        return self._to_ms(self.finished_at - self.started_at)

    # ---- helpers -------------------------------------------------------------
    def mark_started(self, when: Optional[datetime] = None, *, force: bool = False) -> "RunTrace":
        if self.started_at is not None and not force:
            return self
        self.started_at = when or datetime.now(UTC)
        return self

    def mark_finished(self, when: Optional[datetime] = None, *, force: bool = False) -> "RunTrace":
        if self.finished_at is not None and not force:
            return self
        self.finished_at = when or datetime.now(UTC)
        return self

    def count_steiner(self, calls: int = 1) -> None:
        self.steiner_calls += calls

    def count_iteration(self) -> None:
        self.iterations += 1

    def check_deadline(self, max_seconds: Optional[float]) -> None:
        """Raises once the run has been going for longer than `max_seconds`."""
        if max_seconds is None or self.started_at is None:
            return
        spent = (datetime.now(UTC) - self.started_at).total_seconds()
        if spent > max_seconds:
            raise CapacityExceededError(
                "max_seconds", round(spent, 3), max_seconds,
            )

    # --- private helper: timedelta -> milliseconds (rounded) ---
    def _to_ms(self, delta: timedelta) -> int:
        return int(round(delta.total_seconds() * 1000))

    # ---- validation ----------------------------------------------------------
    @field_validator("started_at", "finished_at", mode="before")
    @classmethod
    def _ensure_datetime_and_aware(cls, v):
        if v is None:
            return v
        if isinstance(v, str):
            v = datetime.fromisoformat(v.replace("Z", "+00:00"))
        if not isinstance(v, datetime):
            raise TypeError("must be a datetime or ISO8601 string")
        if v.tzinfo is None or v.utcoffset() is None:
            raise ValueError("datetime must be timezone-aware")
        return v

    @model_validator(mode="after")
    def _check_order(self):
        if self.finished_at and self.started_at and self.finished_at < self.started_at:
            raise ValueError("finished_at cannot be before started_at")
        return self

    # ---- serialization -------------------------------------------------------
    @field_serializer("started_at", "finished_at")
    def _serialize_dt(self, dt: Optional[datetime]) -> Optional[str]:
        if dt is None:
            return None
        if dt.utcoffset() == timedelta(0):
            return dt.isoformat().replace("+00:00", "Z")
        return dt.isoformat()
