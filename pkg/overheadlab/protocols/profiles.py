"""Feature flag profiles selecting protocol behavior on the shared engine."""
import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Mapping, Optional

from django.core.exceptions import ValidationError


@dataclass(frozen=True)
class ProtocolProfile:
    name: str
    source_routing: bool
    grat_rrep: bool
    route_cache_multi: bool
    hello_monitoring: bool
    promiscuous: bool
    local_repair: bool
    reuse_cached_routes: bool
    # per-hop ACK for each DATA packet
    ack_monitoring: bool = False
    # failed unicasts are reported back to the sender
    link_layer_feedback: bool = True

    @classmethod
    def flag_names(cls) -> list:
        return [f.name for f in fields(cls) if f.name != "name"]

    @classmethod
    def from_dict(cls, data: Mapping, name: str = None) -> "ProtocolProfile":
        if not isinstance(data, Mapping):
            raise ValidationError("profile must be a JSON object", code="invalid")
        name = str(data.get("name", name or "custom"))
        unknown = set(data) - set(cls.flag_names()) - {"name"}
        if unknown:
            raise ValidationError(
                "unknown profile flag(s): %s" % ", ".join(sorted(unknown)),
                code="invalid",
            )
        flags = {}
        for flag in cls.flag_names():
            if flag not in data:
                if flag in ("ack_monitoring", "link_layer_feedback"):
                    continue
                raise ValidationError(
                    "profile %s is missing flag %s" % (name, flag), code="required"
                )
            if not isinstance(data[flag], bool):
                raise ValidationError(
                    "profile flag %s must be true or false" % flag, code="invalid"
                )
            flags[flag] = data[flag]
        return cls(name=name, **flags)

    def to_dict(self) -> dict:
        return asdict(self)


AODV = ProtocolProfile(
    name="aodv",
    source_routing=False,
    grat_rrep=True,
    route_cache_multi=False,
    hello_monitoring=True,
    promiscuous=False,
    local_repair=True,
    reuse_cached_routes=False,
    ack_monitoring=False,
    link_layer_feedback=True,
)

DSR = ProtocolProfile(
    name="dsr",
    source_routing=True,
    grat_rrep=True,
    route_cache_multi=True,
    hello_monitoring=False,
    promiscuous=True,
    local_repair=False,
    reuse_cached_routes=True,
    ack_monitoring=True,
    link_layer_feedback=False,
)

DYMO = ProtocolProfile(
    name="dymo",
    source_routing=True,
    grat_rrep=False,
    route_cache_multi=False,
    hello_monitoring=False,
    promiscuous=False,
    local_repair=False,
    reuse_cached_routes=False,
    ack_monitoring=False,
    link_layer_feedback=True,
)

BUILTIN_PROFILES = {profile.name: profile for profile in (AODV, DSR, DYMO)}


def get_profile(name: str, custom: Optional[Mapping] = None) -> ProtocolProfile:
    """Resolve a profile by name.

    Accepts a built-in name, a name defined in custom, or ``custom:<file>``
    pointing to a JSON profile definition.
    """
    custom = custom or {}
    key = str(name).strip()
    if key.startswith("custom:"):
        path = Path(key[len("custom:") :])
        if not path.is_file():
            raise ValidationError("profile file %s not found" % path, code="not_found")
        try:
            with path.open("r", encoding="utf-8") as file:
                data = json.load(file)
        except json.JSONDecodeError as ex:
            raise ValidationError("profile file %s: %s" % (path, ex), code="invalid")
        return ProtocolProfile.from_dict(data, name=path.stem)
    if key in custom:
        return ProtocolProfile.from_dict(custom[key], name=key)
    try:
        return BUILTIN_PROFILES[key.lower()]
    except KeyError:
        raise ValidationError(
            "unknown protocol %s, use one of %s or custom:<file>"
            % (name, "|".join(BUILTIN_PROFILES)),
            code="invalid",
        )
