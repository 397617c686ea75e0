#!/usr/bin/env python3
"""Regenerates the checked-in files under fixtures/.

Usage: python3 tools/make_fixtures.py [fixtures_dir]
"""
import json
import sys
from pathlib import Path

HEADER = "asn,value_spec,category,subtype,location,description\n"


def mirror_dictionary():
    rows = []
    cities = ["Paris", "London", "Frankfurt", "Amsterdam", "Madrid", "Milan",
              "Stockholm", "Vienna", "Warsaw", "Prague", "Zurich", "Brussels"]
    # 48 geolocation: 12 cities, 12 countries, 12 IXPs, 12 facilities
    for i, city in enumerate(cities):
        rows.append(f'3356,{2000 + i},geolocation,city,"{city}","learned in {city}"')
    for i, cc in enumerate(["FR", "GB", "DE", "NL", "ES", "IT", "SE", "AT", "PL", "CZ", "CH", "BE"]):
        rows.append(f'3356,{3000 + i},geolocation,country,"{cc}",""')
    for i, ixp in enumerate(["FranceIX", "LINX", "DE-CIX", "AMS-IX", "ESpanix", "MIX",
                             "Netnod", "VIX", "PLIX", "NIX.CZ", "SwissIX", "BNIX"]):
        rows.append(f'6939,{5000 + i},geolocation,ixp,"{ixp}","peering at {ixp}"')
    for i in range(12):
        rows.append(f'6939,{6000 + 10 * i}-{6009 + 10 * i},geolocation,facility,"Facility {i}",""')
    # 21 relationship
    roles = ["customer", "peer", "provider"]
    for i in range(21):
        asn = [1299, 2914, 3257][i // 7]
        rows.append(f"{asn},{100 + i},relationship,{roles[i % 3]},,")
    # 31 policy: 5 blackhole, 26 action
    for asn in [3356, 6939, 1299, 2914, 3257]:
        rows.append(f'{asn},666,blackhole,,,"RTBH"')
    actions = ["selective-advertisement", "local-preference", "prepend"]
    for i in range(26):
        rows.append(f"174,{7000 + i},action,{actions[i % 3]},,")
    assert len(rows) == 100
    return HEADER + "\n".join(rows) + "\n"


def valley_dictionary():
    rows = []
    for asn in [64496, 64500, 64501, 64502]:
        rows.append(f"{asn},100,relationship,customer,,")
        rows.append(f"{asn},200,relationship,peer,,")
        rows.append(f"{asn},300,relationship,provider,,")
    rows.append('64500,1000,geolocation,ixp,"FranceIX",')
    return HEADER + "\n".join(rows) + "\n"


def valley_paths():
    lines = []
    ts = 1519862400
    path = [64496, 64500, 64501, 64502]

    def rec(i, comms, type_="A"):
        r = {"ts": ts + i, "peer_asn": 64496, "peer_addr": "203.0.113.1", "type": type_,
             "prefix": f"10.{i >> 8}.{i & 255}.0/24"}
        if type_ == "A":
            r["as_path"] = path
            r["communities"] = comms
        return json.dumps(r, separators=(",", ":"))

    violating = {17, 52, 88}
    for i in range(100):
        if i in violating:
            # learned from a provider, exported to a provider
            comms = ["64496:100", "64500:300"]
        elif i % 3 == 0:
            comms = ["64496:100", "64500:100", "64501:100"]
        elif i % 3 == 1:
            comms = ["64496:300", "64500:200"]
        else:
            comms = ["64500:1000", "64501:300"]
        lines.append(rec(i, comms))
    # no relationship evidence: counted but not labeled
    for i in range(100, 105):
        lines.append(rec(i, ["64500:1000"]))
    for i in range(105, 107):
        lines.append(rec(i, None, "W"))
    return "\n".join(lines) + "\n"


T0 = 1519862400 + 3600


def scenarios():
    return {
        "scenario_ixp_outage.json": {
            "seed": 11, "baseline_routes": 1000, "background_updates": 200,
            "detector": {"threshold": 10},
            "injections": [{"kind": "ixp-outage", "at": T0 + 900, "routes": 100, "location": "FranceIX"}],
        },
        "scenario_threshold.json": {
            "seed": 12, "baseline_routes": 1000,
            "injections": [{"kind": "noise-flaps", "at": T0 + 1800, "routes": 10}],
        },
        "scenario_blackhole_burst.json": {
            "seed": 13, "baseline_routes": 1000,
            "injections": [{"kind": "blackhole-burst", "at": T0 + 600, "tagged": 50, "untagged": 500,
                            "spread": 3 * 86400}],
        },
        "scenario_mixed.json": {
            "seed": 14, "baseline_routes": 1000, "background_updates": 400, "malformed_lines": 20,
            "injections": [
                {"kind": "ixp-outage", "at": T0 + 300, "routes": 120, "location": "FranceIX"},
                {"kind": "blackhole-burst", "at": T0 + 2000, "tagged": 30, "untagged": 200, "spread": 90000},
                {"kind": "valley-violation", "at": T0 + 5000, "count": 5},
                {"kind": "noise-flaps", "at": T0 + 7000, "routes": 6},
            ],
        },
    }


def config():
    return {
        "dictionary": "scenario/dictionary.csv",
        "input": "scenario/updates.ndjson",
        "output_dir": "out",
        "bin_width": 60,
        "init_window": 3600,
        "threshold": 10,
        "reorder_slack": 30,
        "investigators": {"outage": True, "blackhole": True, "valley": True},
        "timeseries_locations": ["ixp:FranceIX"],
    }


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "fixtures")
    out.mkdir(parents=True, exist_ok=True)
    (out / "dictionary_mirror.csv").write_text(mirror_dictionary())
    (out / "valley_dictionary.csv").write_text(valley_dictionary())
    (out / "valley_paths.ndjson").write_text(valley_paths())
    for name, sc in scenarios().items():
        (out / name).write_text(json.dumps(sc, indent=2, sort_keys=True) + "\n")
    (out / "config.json").write_text(json.dumps(config(), indent=2) + "\n")


if __name__ == "__main__":
    main()
