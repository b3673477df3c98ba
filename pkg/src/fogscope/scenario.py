"""Scenario schema, validation, preset catalog, and sweep grids.

A scenario file is a small YAML document; keys carry explicit units
(``uplink_throughput_bps``, ``energy_per_bit_j``) and unknown keys are
rejected.  The preset catalog transcribes the wireless/network/bitrate/
motor tables used throughout; its values are pinned by a checksum test.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, replace
from typing import Any, Optional

import yaml

from .flight import MotorParams
from .model import (CloudParams, FogNodeParams, NetworkParams, ValidationError,
                    WorkloadParams)


class ParseError(Exception):
    """Malformed scenario document; carries the line/column when known."""

    def __init__(self, message: str, line: Optional[int] = None,
                 column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class UnknownPreset(LookupError):
    """No preset with the requested name."""


@dataclass(frozen=True)
class Scenario:
    """Full parameterization of one fog-cloud configuration."""

    workload: WorkloadParams
    fog: FogNodeParams
    network: NetworkParams
    cloud: CloudParams
    name: str = "scenario"
    modification1_enabled: bool = False
    include_base_latency: bool = False

    def __post_init__(self):
        if not self.name:
            raise ValidationError("name: must be nonempty", field="name")


# ---------------------------------------------------------------------------
# Preset catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NetworkPreset:
    """Mobile network standard: uplink throughput plus a latency range."""

    name: str
    uplink_bps: float
    latency_range_s: tuple[float, float]

    def to_network_params(self, include_base_latency: bool = False,
                          noise_sigma: float = 0.0,
                          return_fraction: float = 0.1) -> NetworkParams:
        # downlink assumed symmetric; the source table reports uplink only
        base = (sum(self.latency_range_s) / 2.0) if include_base_latency else 0.0
        return NetworkParams(
            uplink_throughput=self.uplink_bps,
            downlink_throughput=self.uplink_bps,
            base_latency=base,
            noise_sigma=noise_sigma,
            return_fraction=return_fraction,
        )


@dataclass(frozen=True)
class BitrateRange:
    """Video bitrate envelope for a streaming resolution."""

    name: str
    min_bps: float
    max_bps: float


@dataclass(frozen=True)
class WirelessInfo:
    """Informational record about a short/medium-range wireless standard."""

    name: str
    coverage: str
    throughput: str
    frequency: str
    energy_efficiency: str


@dataclass(frozen=True)
class PresetCatalog:
    networks: dict[str, NetworkPreset]
    bitrates: dict[str, BitrateRange]
    motors: dict[str, MotorParams]
    wireless_info: dict[str, WirelessInfo]


CATALOG = PresetCatalog(
    networks={
        "gsm": NetworkPreset("gsm", 40e3, (0.6, 0.75)),
        "umts": NetworkPreset("umts", 384e3, (0.5, 0.75)),
        "hspa": NetworkPreset("hspa", 5.76e6, (0.15, 0.4)),
        "hspa_plus": NetworkPreset("hspa_plus", 11.5e6, (0.1, 0.2)),
    },
    bitrates={
        "360p": BitrateRange("360p", 400e3, 1e6),
        "480p": BitrateRange("480p", 500e3, 2e6),
        "720p": BitrateRange("720p", 1.5e6, 4e6),
        "1080p": BitrateRange("1080p", 3e6, 6e6),
    },
    motors={
        "x2212": MotorParams(
            kv_rpm_per_v=1250.0,
            no_load_current_a=0.6,
            resistance_ohm=0.079,
            max_power_w=390.0,
            prop_diameter_m=0.254,
            prop_pitch_m=0.119,
            efficiency_range=(0.75, 0.85),
        ),
    },
    # "hspa_info" keeps preset names unique; "hspa" is the network entry
    wireless_info={
        "bluetooth": WirelessInfo("bluetooth", "100 m", "22 Mbps",
                                  "LF 120-134 kHz / HF 13.56 MHz / UHF 850-960 MHz",
                                  "high"),
        "wifi": WirelessInfo("wifi", "0.1-2 km", "up to 300 Mbps", "2.4, 5 GHz",
                             "low"),
        "hspa_info": WirelessInfo("hspa_info", "5 km", "5.76-11 Mbps",
                                  "TDD 1.85-3.8 GHz / FDD 0.7-2.6 GHz",
                                  "depends on signal strength"),
        "zigbee": WirelessInfo("zigbee", "1.2-14 km", "0.25-72 Mbps",
                               "0.9, 1.2, 2.4 GHz", "depends on model"),
    },
)

_PRESET_SOURCES = {
    "networks": "mobile network standards table",
    "bitrates": "video bitrate table",
    "motors": "electric motor parameters table",
    "wireless_info": "wireless standards table",
}


def preset(name: str) -> Any:
    """Look up a preset by name across all catalog groups."""
    for group in (CATALOG.networks, CATALOG.bitrates, CATALOG.motors,
                  CATALOG.wireless_info):
        if name in group:
            return group[name]
    raise UnknownPreset(name)


def catalog_rows() -> list[tuple[str, str, str, str, str]]:
    """Flat (group, name, field, value, source) rows for the catalog dump."""
    rows = []
    for net in CATALOG.networks.values():
        src = _PRESET_SOURCES["networks"]
        rows.append(("networks", net.name, "uplink_bps", repr(net.uplink_bps), src))
        rows.append(("networks", net.name, "latency_min_s",
                     repr(net.latency_range_s[0]), src))
        rows.append(("networks", net.name, "latency_max_s",
                     repr(net.latency_range_s[1]), src))
    for br in CATALOG.bitrates.values():
        src = _PRESET_SOURCES["bitrates"]
        rows.append(("bitrates", br.name, "min_bps", repr(br.min_bps), src))
        rows.append(("bitrates", br.name, "max_bps", repr(br.max_bps), src))
    for name, motor in CATALOG.motors.items():
        src = _PRESET_SOURCES["motors"]
        rows.append(("motors", name, "kv_rpm_per_v", repr(motor.kv_rpm_per_v), src))
        rows.append(("motors", name, "no_load_current_a",
                     repr(motor.no_load_current_a), src))
        rows.append(("motors", name, "resistance_ohm",
                     repr(motor.resistance_ohm), src))
        rows.append(("motors", name, "max_power_w", repr(motor.max_power_w), src))
        rows.append(("motors", name, "prop_diameter_m",
                     repr(motor.prop_diameter_m), src))
        rows.append(("motors", name, "prop_pitch_m", repr(motor.prop_pitch_m), src))
        rows.append(("motors", name, "efficiency_min",
                     repr(motor.efficiency_range[0]), src))
        rows.append(("motors", name, "efficiency_max",
                     repr(motor.efficiency_range[1]), src))
    for info in CATALOG.wireless_info.values():
        src = _PRESET_SOURCES["wireless_info"]
        rows.append(("wireless_info", info.name, "coverage", info.coverage, src))
        rows.append(("wireless_info", info.name, "throughput", info.throughput, src))
        rows.append(("wireless_info", info.name, "frequency", info.frequency, src))
        rows.append(("wireless_info", info.name, "energy_efficiency",
                     info.energy_efficiency, src))
    return rows


def catalog_checksum() -> str:
    """sha256 over the canonical JSON form of the catalog rows."""
    payload = json.dumps(catalog_rows(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# Scenario document loading
# ---------------------------------------------------------------------------

def _number(section: str, mapping: dict, key: str, required: bool = False,
            default: float = 0.0) -> float:
    if key not in mapping:
        if required:
            raise ValidationError(f"{section}.{key}: missing required key",
                                  field=f"{section}.{key}")
        return default
    value = mapping.pop(key)
    if isinstance(value, str):
        # YAML 1.1 reads exponents without a sign ("1.5e6") as strings
        try:
            return float(value)
        except ValueError:
            pass
    elif not isinstance(value, bool) and isinstance(value, (int, float)):
        return float(value)
    raise ValidationError(f"{section}.{key}: expected a number, got "
                          f"{value!r}", field=f"{section}.{key}")


def _flag(mapping: dict, key: str, default: bool = False) -> bool:
    if key not in mapping:
        return default
    value = mapping.pop(key)
    if not isinstance(value, bool):
        raise ValidationError(f"{key}: expected true/false, got {value!r}",
                              field=key)
    return value


def _reject_unknown(section: str, mapping: dict) -> None:
    if mapping:
        key = sorted(mapping)[0]
        path = f"{section}.{key}" if section else key
        raise ValidationError(f"{path}: unknown key", field=path)


def _section(doc: dict, key: str) -> dict:
    if key not in doc:
        raise ValidationError(f"{key}: missing required section", field=key)
    value = doc.pop(key)
    if not isinstance(value, dict):
        raise ValidationError(f"{key}: expected a mapping", field=key)
    return dict(value)


def _wrap_field(section: str, exc: ValidationError) -> ValidationError:
    msg = exc.args[0] if exc.args else str(exc)
    field = f"{section}.{exc.field}" if exc.field else section
    return ValidationError(f"{section}.{msg}", field=field)


def load_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document.

    Raises ParseError for malformed YAML and ValidationError (naming the
    offending field) for schema or invariant violations.
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            raise ParseError(f"invalid scenario document: {exc}",
                             line=mark.line + 1, column=mark.column + 1) from exc
        raise ParseError(f"invalid scenario document: {exc}") from exc
    if doc is None:
        raise ParseError("empty scenario document")
    if not isinstance(doc, dict):
        raise ParseError("scenario document must be a mapping")
    doc = dict(doc)

    name = doc.pop("name", "scenario")
    if not isinstance(name, str) or not name:
        raise ValidationError("name: must be a nonempty string", field="name")
    modification1 = _flag(doc, "modification1_enabled")
    include_base = _flag(doc, "include_base_latency")

    work_map = _section(doc, "workload")
    try:
        workload = WorkloadParams(
            arrival_rate=_number("workload", work_map, "arrival_rate_pps",
                                 required=True),
            packet_size=_number("workload", work_map, "packet_size_bits",
                                required=True),
        )
    except ValidationError as exc:
        if exc.field and "." not in exc.field:
            raise _wrap_field("workload", exc) from exc
        raise
    _reject_unknown("workload", work_map)

    fog_map = _section(doc, "fog")
    try:
        fog = FogNodeParams(
            proc_capability=_number("fog", fog_map, "proc_capability_pps",
                                    required=True),
            energy_per_bit=_number("fog", fog_map, "energy_per_bit_j",
                                   required=True),
            idle_power=_number("fog", fog_map, "idle_power_w", required=True),
            tdp=_number("fog", fog_map, "tdp_w", required=True),
            tx_energy_per_bit=_number("fog", fog_map, "tx_energy_per_bit_j"),
        )
    except ValidationError as exc:
        if exc.field and "." not in exc.field:
            raise _wrap_field("fog", exc) from exc
        raise
    _reject_unknown("fog", fog_map)

    net_map = _section(doc, "network")
    try:
        network = _load_network(net_map, include_base)
    except ValidationError as exc:
        if exc.field and "." not in exc.field:
            raise _wrap_field("network", exc) from exc
        raise
    _reject_unknown("network", net_map)

    cloud_map = _section(doc, "cloud")
    try:
        cloud = CloudParams(
            proc_capability=_number("cloud", cloud_map, "proc_capability_bps",
                                    required=True),
        )
    except ValidationError as exc:
        if exc.field and "." not in exc.field:
            raise _wrap_field("cloud", exc) from exc
        raise
    _reject_unknown("cloud", cloud_map)

    _reject_unknown("", doc)
    return Scenario(workload=workload, fog=fog, network=network, cloud=cloud,
                    name=name, modification1_enabled=modification1,
                    include_base_latency=include_base)


def _load_network(net_map: dict, include_base: bool) -> NetworkParams:
    noise_sigma = _number("network", net_map, "noise_sigma", default=0.0)
    return_fraction = _number("network", net_map, "return_fraction", default=0.1)
    if "preset" in net_map:
        preset_name = net_map.pop("preset")
        if not isinstance(preset_name, str):
            raise ValidationError("preset: expected a preset name",
                                  field="preset")
        if preset_name not in CATALOG.networks:
            raise ValidationError(f"preset: unknown network preset "
                                  f"{preset_name!r}", field="preset")
        return CATALOG.networks[preset_name].to_network_params(
            include_base_latency=include_base,
            noise_sigma=noise_sigma,
            return_fraction=return_fraction,
        )
    return NetworkParams(
        uplink_throughput=_number("network", net_map, "uplink_throughput_bps",
                                  required=True),
        downlink_throughput=_number("network", net_map,
                                    "downlink_throughput_bps", required=True),
        base_latency=_number("network", net_map, "base_latency_s", default=0.0),
        noise_sigma=noise_sigma,
        return_fraction=return_fraction,
    )


def scenario_to_dict(s: Scenario) -> dict:
    """Schema-form dict with the network resolved to explicit values."""
    return {
        "name": s.name,
        "modification1_enabled": s.modification1_enabled,
        "include_base_latency": s.include_base_latency,
        "workload": {
            "arrival_rate_pps": s.workload.arrival_rate,
            "packet_size_bits": s.workload.packet_size,
        },
        "fog": {
            "proc_capability_pps": s.fog.proc_capability,
            "energy_per_bit_j": s.fog.energy_per_bit,
            "idle_power_w": s.fog.idle_power,
            "tdp_w": s.fog.tdp,
            "tx_energy_per_bit_j": s.fog.tx_energy_per_bit,
        },
        "network": {
            "uplink_throughput_bps": s.network.uplink_throughput,
            "downlink_throughput_bps": s.network.downlink_throughput,
            "base_latency_s": s.network.base_latency,
            "noise_sigma": s.network.noise_sigma,
            "return_fraction": s.network.return_fraction,
        },
        "cloud": {
            "proc_capability_bps": s.cloud.proc_capability,
        },
    }


def serialize_scenario(s: Scenario) -> str:
    """Canonical YAML form; load_scenario(serialize_scenario(s)) == s."""
    return yaml.safe_dump(scenario_to_dict(s), sort_keys=False,
                          default_flow_style=False)


def scenario_digest(s: Scenario) -> str:
    """Short checksum identifying the scenario contents."""
    blob = serialize_scenario(s).encode("utf-8")
    return "sha256:" + hashlib.sha256(blob).hexdigest()[:16]


def default_scenario() -> Scenario:
    """Desk-scale reference configuration used across tests and docs."""
    return Scenario(
        workload=WorkloadParams(arrival_rate=100.0, packet_size=12000.0),
        fog=FogNodeParams(proc_capability=100.0, energy_per_bit=1e-7,
                          idle_power=2.0, tdp=10.0, tx_energy_per_bit=0.0),
        network=NetworkParams(uplink_throughput=1.5e6,
                              downlink_throughput=1.5e6),
        cloud=CloudParams(proc_capability=3e6),
        name="default",
    )


# ---------------------------------------------------------------------------
# Sweep grids
# ---------------------------------------------------------------------------

# schema key -> (scenario attribute, dataclass field)
_FIELD_AXES = {
    "workload.arrival_rate_pps": ("workload", "arrival_rate"),
    "workload.packet_size_bits": ("workload", "packet_size"),
    "fog.proc_capability_pps": ("fog", "proc_capability"),
    "fog.energy_per_bit_j": ("fog", "energy_per_bit"),
    "fog.idle_power_w": ("fog", "idle_power"),
    "fog.tdp_w": ("fog", "tdp"),
    "fog.tx_energy_per_bit_j": ("fog", "tx_energy_per_bit"),
    "network.uplink_throughput_bps": ("network", "uplink_throughput"),
    "network.downlink_throughput_bps": ("network", "downlink_throughput"),
    "network.base_latency_s": ("network", "base_latency"),
    "network.noise_sigma": ("network", "noise_sigma"),
    "network.return_fraction": ("network", "return_fraction"),
    "cloud.proc_capability_bps": ("cloud", "proc_capability"),
}

GridAxes = list[tuple[str, list[str]]]


def parse_grid_spec(text: str) -> GridAxes:
    """Parse ``axis=v1,v2;axis2=v3,...`` into ordered (axis, values) pairs.

    Axes: ``network`` (preset names), ``bitrate`` (``<preset>_min`` /
    ``<preset>_max`` or a numeric bits/s value), ``v_fog_frac`` (fog
    capability as a fraction of the arrival rate), or any dotted scenario
    schema key.
    """
    axes: GridAxes = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        axis, sep, raw = part.partition("=")
        axis = axis.strip()
        values = [v.strip() for v in raw.split(",") if v.strip()]
        if not sep or not axis or not values:
            raise ValidationError(f"grid: malformed axis spec {part!r}",
                                  field="grid")
        axes.append((axis, values))
    return axes


def _parse_float(axis: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ValidationError(f"grid.{axis}: expected a number, got {value!r}",
                              field=f"grid.{axis}") from None


def _bitrate_bps(value: str) -> float:
    if "_" in value:
        name, _, bound = value.rpartition("_")
        if name in CATALOG.bitrates and bound in ("min", "max"):
            br = CATALOG.bitrates[name]
            return br.min_bps if bound == "min" else br.max_bps
    try:
        return float(value)
    except ValueError:
        raise ValidationError(
            f"grid.bitrate: expected <preset>_min, <preset>_max or a bits/s "
            f"value, got {value!r}", field="grid.bitrate") from None


def _apply_axis(s: Scenario, axis: str, value: str) -> Scenario:
    if axis == "network":
        if value not in CATALOG.networks:
            raise ValidationError(f"grid.network: unknown preset {value!r}",
                                  field="grid.network")
        net = CATALOG.networks[value].to_network_params(
            include_base_latency=s.include_base_latency,
            noise_sigma=s.network.noise_sigma,
            return_fraction=s.network.return_fraction,
        )
        return replace(s, network=net)
    if axis == "bitrate":
        rate = _bitrate_bps(value) / s.workload.packet_size
        return replace(s, workload=replace(s.workload, arrival_rate=rate))
    if axis == "v_fog_frac":
        frac = _parse_float(axis, value)
        capability = frac * s.workload.arrival_rate
        return replace(s, fog=replace(s.fog, proc_capability=capability))
    if axis in _FIELD_AXES:
        attr, field = _FIELD_AXES[axis]
        section = replace(getattr(s, attr), **{field: _parse_float(axis, value)})
        return replace(s, **{attr: section})
    raise ValidationError(f"grid: unknown axis {axis!r}", field="grid")


def sweep_grid(base: Scenario, axes: GridAxes) -> list[Scenario]:
    """Cartesian product of the axis values over the base scenario.

    Axes apply left to right (so ``v_fog_frac`` sees the arrival rate a
    preceding ``bitrate`` axis produced); ordering is lexicographic in
    axis declaration order.  An empty axis list yields just the base.
    """
    if not axes:
        return [base]
    scenarios = []
    names = [axis for axis, _ in axes]
    for combo in itertools.product(*(values for _, values in axes)):
        current = base
        for axis, value in zip(names, combo):
            current = _apply_axis(current, axis, value)
        label = ",".join(f"{a}={v}" for a, v in zip(names, combo))
        scenarios.append(replace(current, name=f"{base.name}[{label}]"))
    return scenarios
