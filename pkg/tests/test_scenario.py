"""Scenario loading, preset catalog transcription, and sweep grids."""

import textwrap
from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fogscope.model import ValidationError
from fogscope.scenario import (CATALOG, ParseError, UnknownPreset,
                               catalog_checksum, catalog_rows,
                               default_scenario, load_scenario,
                               parse_grid_spec, preset, scenario_digest,
                               serialize_scenario, sweep_grid)

# pins the table transcription; update only on a deliberate catalog change
CATALOG_CHECKSUM = \
    "15a0dbccf0819e03aa5d6415b40ebd215506b5618061ef39136f8058ab740228"

MINIMAL_DOC = textwrap.dedent("""\
    workload:
      arrival_rate_pps: 100
      packet_size_bits: 12000
    fog:
      proc_capability_pps: 100
      energy_per_bit_j: 1.0e-7
      idle_power_w: 2.0
      tdp_w: 10.0
    network:
      uplink_throughput_bps: 1.5e6
      downlink_throughput_bps: 1.5e6
    cloud:
      proc_capability_bps: 3.0e6
    """)


class TestLoadScenario:
    def test_minimal_document_applies_defaults(self):
        s = load_scenario(MINIMAL_DOC)
        assert s.network.return_fraction == 0.1
        assert s.network.base_latency == 0.0
        assert s.network.noise_sigma == 0.0
        assert s.fog.tx_energy_per_bit == 0.0
        assert s.modification1_enabled is False
        assert s.include_base_latency is False
        assert s.name == "scenario"

    def test_zero_packet_size_names_the_field(self):
        doc = MINIMAL_DOC.replace("packet_size_bits: 12000",
                                  "packet_size_bits: 0")
        with pytest.raises(ValidationError) as exc:
            load_scenario(doc)
        assert "workload.packet_size" in str(exc.value)

    def test_network_preset_reference(self):
        doc = MINIMAL_DOC.replace(
            "  uplink_throughput_bps: 1.5e6\n"
            "  downlink_throughput_bps: 1.5e6",
            "  preset: hspa_plus")
        s = load_scenario(doc)
        assert s.network.uplink_throughput == 11.5e6
        assert s.network.downlink_throughput == 11.5e6
        assert s.network.base_latency == 0.0

    def test_preset_with_base_latency_midpoint(self):
        doc = MINIMAL_DOC.replace(
            "  uplink_throughput_bps: 1.5e6\n"
            "  downlink_throughput_bps: 1.5e6",
            "  preset: gsm") + "include_base_latency: true\n"
        s = load_scenario(doc)
        assert s.network.base_latency == pytest.approx((0.6 + 0.75) / 2)

    def test_unknown_key_rejected(self):
        doc = MINIMAL_DOC + "bogus: 1\n"
        with pytest.raises(ValidationError) as exc:
            load_scenario(doc)
        assert "bogus" in str(exc.value)

    def test_unknown_nested_key_rejected(self):
        doc = MINIMAL_DOC.replace("  idle_power_w: 2.0",
                                  "  idle_power_w: 2.0\n  spare_key: 3")
        with pytest.raises(ValidationError) as exc:
            load_scenario(doc)
        assert "fog.spare_key" in str(exc.value)

    def test_missing_section(self):
        doc = MINIMAL_DOC.replace("cloud:\n  proc_capability_bps: 3.0e6\n", "")
        with pytest.raises(ValidationError) as exc:
            load_scenario(doc)
        assert "cloud" in str(exc.value)

    def test_malformed_yaml_reports_position(self):
        with pytest.raises(ParseError) as exc:
            load_scenario("workload: [unclosed\n  arrival_rate_pps: 1\n")
        assert exc.value.line is not None

    def test_non_mapping_document(self):
        with pytest.raises(ParseError):
            load_scenario("- just\n- a\n- list\n")
        with pytest.raises(ParseError):
            load_scenario("")

    def test_wrong_type_rejected(self):
        doc = MINIMAL_DOC.replace("arrival_rate_pps: 100",
                                  "arrival_rate_pps: fast")
        with pytest.raises(ValidationError) as exc:
            load_scenario(doc)
        assert "workload.arrival_rate_pps" in str(exc.value)

    def test_round_trip(self):
        s = load_scenario(MINIMAL_DOC)
        assert load_scenario(serialize_scenario(s)) == s

    def test_round_trip_default_scenario(self):
        s = default_scenario()
        assert load_scenario(serialize_scenario(s)) == s
        assert scenario_digest(s) == scenario_digest(
            load_scenario(serialize_scenario(s)))


class TestPresets:
    def test_network_table_values(self):
        assert preset("gsm").uplink_bps == 40000.0
        assert preset("gsm").latency_range_s == (0.6, 0.75)
        assert preset("umts").uplink_bps == 384e3
        assert preset("umts").latency_range_s == (0.5, 0.75)
        assert preset("hspa").uplink_bps == 5.76e6
        assert preset("hspa").latency_range_s == (0.15, 0.4)
        assert preset("hspa_plus").uplink_bps == 11.5e6
        assert preset("hspa_plus").latency_range_s == (0.1, 0.2)

    def test_bitrate_table_values(self):
        assert preset("360p").min_bps == 400e3
        assert preset("360p").max_bps == 1e6
        assert preset("480p").min_bps == 500e3
        assert preset("480p").max_bps == 2e6
        assert preset("720p").min_bps == 1.5e6
        assert preset("720p").max_bps == 4e6
        assert preset("1080p").min_bps == 3e6
        assert preset("1080p").max_bps == 6e6

    def test_motor_table_values(self):
        m = preset("x2212")
        assert m.kv_rpm_per_v == 1250.0
        assert m.no_load_current_a == 0.6
        assert m.resistance_ohm == 0.079
        assert m.max_power_w == 390.0
        assert m.prop_diameter_m == 0.254
        assert m.prop_pitch_m == 0.119
        assert m.efficiency_range == (0.75, 0.85)

    def test_wireless_info_records(self):
        assert preset("bluetooth").coverage == "100 m"
        assert preset("zigbee").throughput == "0.25-72 Mbps"
        assert preset("wifi").energy_efficiency == "low"
        assert preset("hspa_info").coverage == "5 km"

    def test_unknown_preset(self):
        with pytest.raises(UnknownPreset):
            preset("lte")

    def test_names_unique_across_groups(self):
        names = (list(CATALOG.networks) + list(CATALOG.bitrates)
                 + list(CATALOG.motors) + list(CATALOG.wireless_info))
        assert len(names) == len(set(names))

    def test_checksum_pinned(self):
        assert catalog_checksum() == CATALOG_CHECKSUM

    def test_rows_cover_all_presets(self):
        names = {row[1] for row in catalog_rows()}
        assert "hspa_plus" in names and "x2212" in names and "1080p" in names


class TestSweepGrid:
    def test_two_by_two_product_in_declared_order(self):
        axes = parse_grid_spec("network=gsm,hspa_plus;bitrate=360p_min,1080p_max")
        scenarios = sweep_grid(default_scenario(), axes)
        assert len(scenarios) == 4
        ups = [s.network.uplink_throughput for s in scenarios]
        assert ups == [40e3, 40e3, 11.5e6, 11.5e6]
        rates = [s.workload.arrival_rate for s in scenarios]
        assert rates == pytest.approx([400e3 / 12000, 6e6 / 12000] * 2)

    def test_empty_axis_list_yields_base(self):
        base = default_scenario()
        assert sweep_grid(base, []) == [base]

    def test_v_fog_fraction_grid(self):
        axes = parse_grid_spec("v_fog_frac=0.25,0.5,0.75,1.0")
        scenarios = sweep_grid(default_scenario(), axes)
        caps = [s.fog.proc_capability for s in scenarios]
        assert caps == [25.0, 50.0, 75.0, 100.0]

    def test_v_fog_fraction_tracks_bitrate_axis(self):
        axes = parse_grid_spec("bitrate=1080p_max;v_fog_frac=0.5")
        (s,) = sweep_grid(default_scenario(), axes)
        assert s.workload.arrival_rate == pytest.approx(500.0)
        assert s.fog.proc_capability == pytest.approx(250.0)

    def test_size_is_product_of_axis_lengths(self):
        axes = parse_grid_spec(
            "network=gsm,umts,hspa;v_fog_frac=0.25,1.0;"
            "workload.arrival_rate_pps=50,100")
        assert len(sweep_grid(default_scenario(), axes)) == 3 * 2 * 2

    def test_dotted_field_axis(self):
        axes = parse_grid_spec("network.uplink_throughput_bps=1e5,2e5")
        scenarios = sweep_grid(default_scenario(), axes)
        assert [s.network.uplink_throughput for s in scenarios] == [1e5, 2e5]

    def test_unknown_axis_rejected(self):
        with pytest.raises(ValidationError):
            sweep_grid(default_scenario(), parse_grid_spec("warp_factor=9"))

    def test_invalid_value_raises_validation_error(self):
        axes = parse_grid_spec("v_fog_frac=0.0")
        with pytest.raises(ValidationError):
            sweep_grid(default_scenario(), axes)

    def test_names_are_unique_and_labeled(self):
        axes = parse_grid_spec("network=gsm,hspa")
        names = [s.name for s in sweep_grid(default_scenario(), axes)]
        assert names == ["default[network=gsm]", "default[network=hspa]"]


@given(rate=st.floats(min_value=0.5, max_value=1e5),
       size=st.floats(min_value=1.0, max_value=1e6),
       uplink=st.floats(min_value=1.0, max_value=1e9),
       eta=st.floats(min_value=0.0, max_value=1.0),
       mod1=st.booleans())
def test_serialization_round_trip_property(rate, size, uplink, eta, mod1):
    base = default_scenario()
    s = replace(
        base,
        workload=replace(base.workload, arrival_rate=rate, packet_size=size),
        network=replace(base.network, uplink_throughput=uplink,
                        return_fraction=eta),
        modification1_enabled=mod1,
    )
    assert load_scenario(serialize_scenario(s)) == s
