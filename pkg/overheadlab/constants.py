from django.db.models import IntegerChoices, TextChoices


class FormulaMode(TextChoices):
    """How the outer tier sum of the request-overhead formula is read."""

    LITERAL = "literal"
    TIERED = "tiered"


class DerivativeMethod(TextChoices):
    ANALYTIC = "analytic"
    PAPER_LITERAL = "paper_literal"
    FINITE_DIFFERENCE = "finite_difference"


class PacketKind(TextChoices):
    RREQ = "RREQ"
    RREP = "RREP"
    RERR = "RERR"
    HELLO = "HELLO"
    ACK = "ACK"
    DATA = "DATA"

    @classmethod
    def control_kinds(cls) -> tuple:
        return (cls.RREQ, cls.RREP, cls.RERR, cls.HELLO, cls.ACK)


class EventKind(TextChoices):
    TRANSMIT = "transmit"
    RECEIVE = "receive"
    TIMER = "timer"
    MOVE = "move"
    FAIL = "fail"
    RECOVER = "recover"
    TRAFFIC = "traffic"


class Placement(TextChoices):
    GRID = "grid"
    UNIFORM_RANDOM = "uniform_random"


class SweepAxis(TextChoices):
    MOBILITY = "mobility"
    SCALABILITY = "scalability"
    TRAFFIC = "traffic"


class ExitCode(IntegerChoices):
    SUCCESS = 0
    VALIDATION = 2
    RUNTIME = 3


# packet header sizes in bytes, source routes add SOURCE_ROUTE_ENTRY_BYTES per node
PACKET_BASE_SIZES = {
    PacketKind.RREQ: 24,
    PacketKind.RREP: 20,
    PacketKind.RERR: 12,
    PacketKind.HELLO: 20,
    PacketKind.ACK: 8,
    PacketKind.DATA: 0,
}
SOURCE_ROUTE_ENTRY_BYTES = 4
RERR_ENTRY_BYTES = 8

CSV_SCHEMA_VERSION = 1
