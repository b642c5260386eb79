from __future__ import annotations

from typing import ClassVar, Optional

from supercut.utils.constants import Errors, Status


class SupercutError(Exception):
    """
    Base class for all errors raised by the app.

    Subclasses set `message` to one of the `Errors` templates, and get
    initialized with the values that get formatted into it.
    """

    message: ClassVar[str] = "{}"

    def __init__(self, *values: object) -> None:
        super().__init__(self.message.format(*values))


class AdmissionError(SupercutError):
    pass


class NegativeCapacity(AdmissionError):
    message = Errors.NEGATIVE_CAPACITY


class BorderCapacity(AdmissionError):
    message = Errors.BORDER_CAPACITY


class CapacityOverflow(AdmissionError):
    message = Errors.CAPACITY_OVERFLOW


class ShapeMismatch(AdmissionError):
    message = Errors.SHAPE_MISMATCH


class InvalidSeeds(AdmissionError):
    message = Errors.INVALID_SEEDS


class InstantiationOverflow(AdmissionError):
    message = Errors.INSTANTIATION_OVERFLOW

    def __init__(self, pixel: int, lam: int) -> None:
        super().__init__(pixel, lam)
        self.pixel = pixel
        self.lam = lam


class ContractViolation(SupercutError):
    message = Errors.NON_MAXIMAL_FLOW


class SupergraphError(SupercutError):
    pass


class HeightMismatch(SupergraphError):
    message = Errors.HEIGHT_MISMATCH


class EmptySupergraph(SupergraphError):
    message = Errors.EMPTY_SUPERGRAPH


class DimensionMismatch(SupergraphError):
    message = Errors.DIMENSION_MISMATCH


class InvalidLayout(SupergraphError):
    message = Errors.INVALID_LAYOUT


class WireError(SupercutError):
    """Base class for everything that can go wrong while decoding a frame."""

    status: ClassVar[Status] = Status.MALFORMED_FRAME
    keeps_framing: ClassVar[bool] = False
    """True when the frame boundaries are still trustworthy after the error."""


class BadMagic(WireError):
    message = Errors.BAD_MAGIC
    status = Status.BAD_MAGIC


class UnknownVersion(WireError):
    message = Errors.UNKNOWN_VERSION
    status = Status.UNKNOWN_VERSION
    keeps_framing = True


class LengthMismatch(WireError):
    message = Errors.LENGTH_MISMATCH


class TruncatedFrame(LengthMismatch):
    pass


class OverlengthFrame(LengthMismatch):
    pass


class FrameTooLarge(WireError):
    message = Errors.FRAME_TOO_LARGE


class MalformedFrame(WireError):
    message = Errors.MALFORMED_FRAME
    keeps_framing = True


class CapacityOutOfRange(WireError):
    message = Errors.CAPACITY_OUT_OF_RANGE
    status = Status.CAPACITY_OUT_OF_RANGE
    keeps_framing = True


class RemoteError(SupercutError):
    pass


class TransportError(RemoteError):
    message = Errors.TRANSPORT


class RemoteTimeout(RemoteError):
    message = Errors.REMOTE_TIMEOUT


class RemoteStatusError(RemoteError):
    message = Errors.REMOTE_STATUS

    def __init__(self, endpoint: str, task_id: int, status: int) -> None:
        super().__init__(endpoint, task_id, status)
        self.task_id = task_id
        self.status = status


class IntegrityError(RemoteError):
    message = Errors.INTEGRITY


class SchedulingError(SupercutError):
    pass


class WorkerFailure(SchedulingError):
    message = Errors.WORKER_FAILURE


class BatchAborted(SchedulingError):
    message = Errors.BATCH_ABORTED

    def __init__(self, task_id: int, reason: object, cause: Optional[BaseException] = None) -> None:
        super().__init__(task_id, reason)
        self.task_id = task_id
        self.cause = cause


class ConfigError(SupercutError):
    message = Errors.CONFIG_ERROR


class UndefinedOverlap(SupercutError):
    message = Errors.OVERLAP_UNDEFINED


class SeedGridTooDense(SupercutError):
    message = Errors.SEED_GRID_TOO_DENSE


class ReportError(SupercutError):
    message = Errors.REPORT_ERROR
