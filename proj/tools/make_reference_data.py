#!/usr/bin/env python3
"""Assemble the reference dataset under data/reference/ from public sources.

Inputs (fetch once, then point this script at them):

  * world-countries (npm, mledoze/countries, ODbL): names, ISO codes,
    centroid lat/lng, area and per-country GeoJSON borders.
        npm pack world-countries && tar xzf world-countries-*.tgz
  * bokeh_sampledata (PyPI, BSD): Gapminder population / life expectancy /
    fertility tables (annual, 1964-2013) and UN WPP2012 quinquennial
    population by sex and five-year age group.
        pip download --no-deps bokeh_sampledata

Outputs:

  indicators.csv   country_name,iso3,indicator,1980,...,2014
  locations.csv    iso3,name,latitude,longitude
  borders.json     [{"iso3": "...", "rings": [[[lon, lat], ...], ...]}, ...]

See data/reference/SOURCES.md for how every indicator column is derived.
"""

import argparse
import csv
import io
import json
import math
import os
import zipfile

from shapely.geometry import LinearRing, Polygon

FIRST_YEAR, LAST_YEAR = 1980, 2014
YEARS = list(range(FIRST_YEAR, LAST_YEAR + 1))
# World Bank publishes net migration as five-year totals at these years.
MIGRATION_YEARS = list(range(1982, LAST_YEAR + 1, 5))

GAPMINDER_ALIASES = {
    "Central African Rep.": "CAF",
    "Congo, Dem. Rep.": "COD",
    "Congo, Rep.": "COG",
    "Czech Rep.": "CZE",
    "Dominican Rep.": "DOM",
    "Holy See": "VAT",
    "Hong Kong, China": "HKG",
    "Korea, Dem. Rep.": "PRK",
    "Korea, Rep.": "KOR",
    "Macao, China": "MAC",
    "Macedonia, FYR": "MKD",
    "Micronesia, Fed. Sts.": "FSM",
    "Saint-Pierre-et-Miquelon": "SPM",
    "Serbia excluding Kosovo": "SRB",
    "Turkey": "TUR",
    "Wallis et Futuna": "WLF",
    "West Bank and Gaza": "PSE",
    "Virgin Islands (U.S.)": "VIR",
    "Yemen, Rep.": "YEM",
    "Åland": "ALA",
    "Cocos Island": "CCK",
}

INDICATORS = [
    "total_population",
    "population_density",
    "population_growth",
    "crude_birth_rate",
    "crude_death_rate",
    "life_expectancy",
    "net_migration",
    "age_0_14",
    "age_15_64",
    "age_65_plus",
]


def load_world_countries(root):
    with open(os.path.join(root, "dist", "countries.json"), encoding="utf-8") as f:
        return json.load(f)


def name_index(countries):
    index = {}
    for c in countries:
        names = [c["name"]["common"], c["name"]["official"]] + c.get("altSpellings", [])
        for n in names:
            index.setdefault(n.lower(), c["cca3"])
    return index


def load_gapminder(wheel, member, index):
    with zipfile.ZipFile(wheel) as z:
        text = z.read("bokeh_sampledata/_data/" + member).decode("utf-8")
    rows = list(csv.reader(io.StringIO(text)))
    years = [int(y) for y in rows[0][1:]]
    table = {}
    for row in rows[1:]:
        iso3 = GAPMINDER_ALIASES.get(row[0]) or index.get(row[0].lower())
        if iso3 is None:
            continue
        series = {}
        for y, cell in zip(years, row[1:]):
            if cell.strip():
                series[y] = float(cell)
        table[iso3] = series
    return table


def load_wpp(wheel, ccn3_to_iso3):
    """{iso3: {year: {"total", "0_14", "15_64", "65p", "f15_49"}}} in thousands."""
    with zipfile.ZipFile(wheel) as z:
        raw = z.read("bokeh_sampledata/_data/WPP2012_SA_DB03_POPULATION_QUINQUENNIAL.csv")
    out = {}
    for r in csv.DictReader(io.StringIO(raw.decode("latin-1"))):
        iso3 = ccn3_to_iso3.get(r["LocID"].zfill(3))
        year = int(r["Time"])
        if iso3 is None or year < 1975 or year > 2015 or r["Variant"] != "Medium":
            continue
        start = int(r["AgeGrpStart"])
        value = float(r["Value"])
        slot = out.setdefault(iso3, {}).setdefault(
            year, {"total": 0.0, "0_14": 0.0, "15_64": 0.0, "65p": 0.0, "f15_49": 0.0})
        if r["Sex"] == "Both":
            continue
        slot["total"] += value
        if start < 15:
            slot["0_14"] += value
        elif start < 65:
            slot["15_64"] += value
        else:
            slot["65p"] += value
        if r["Sex"] == "Female" and 15 <= start < 50:
            slot["f15_49"] += value
    return out


def interpolate(samples, year):
    """Linear interpolation between five-yearly samples {year: value}."""
    if year in samples:
        return samples[year]
    lo = max(y for y in samples if y < year)
    hi = min(y for y in samples if y > year)
    t = (year - lo) / (hi - lo)
    return samples[lo] + t * (samples[hi] - samples[lo])


def extend_to(series, last):
    """Extend an annual series past its final year by repeating the last step."""
    out = dict(series)
    final = max(out)
    for y in range(final + 1, last + 1):
        out[y] = out[y - 1] + (out[y - 1] - out[y - 2])
    return out


def extend_ratio(series, last):
    out = dict(series)
    final = max(out)
    for y in range(final + 1, last + 1):
        out[y] = out[y - 1] * (out[y - 1] / out[y - 2])
    return out


def build_indicators(countries, gm_pop, gm_life, gm_fert, wpp):
    area = {c["cca3"]: c.get("area") for c in countries}
    common = {c["cca3"]: c["name"]["common"] for c in countries}
    rows = []
    for iso3 in sorted(gm_pop):
        pop_src = gm_pop[iso3]
        if not all(y in pop_src for y in range(MIGRATION_YEARS[0] - 10, 2014)):
            continue
        if iso3 not in common:
            continue
        pop = extend_ratio(pop_src, LAST_YEAR)
        values = {k: {} for k in INDICATORS}
        for y in YEARS:
            values["total_population"][y] = round(pop[y])
            if area.get(iso3):
                values["population_density"][y] = round(pop[y] / area[iso3], 3)
            values["population_growth"][y] = round(100.0 * math.log(pop[y] / pop[y - 1]), 3)

        life = gm_life.get(iso3)
        if life and all(y in life for y in range(MIGRATION_YEARS[0] - 5, 2014)):
            life = extend_to(life, LAST_YEAR)
            for y in YEARS:
                values["life_expectancy"][y] = round(life[y], 3)

        structure = wpp.get(iso3)
        if structure and all(y in structure for y in range(1980, 2016, 5)):
            share = {
                key: {yy: structure[yy][key] / structure[yy]["total"] for yy in structure}
                for key in ("0_14", "15_64", "65p", "f15_49")
            }
            for y in YEARS:
                values["age_0_14"][y] = round(100.0 * interpolate(share["0_14"], y), 3)
                values["age_15_64"][y] = round(100.0 * interpolate(share["15_64"], y), 3)
                values["age_65_plus"][y] = round(100.0 * interpolate(share["65p"], y), 3)

            fert = gm_fert.get(iso3)
            if fert and life and all(y in fert for y in range(MIGRATION_YEARS[0] - 5, 2014)):
                fert = extend_to(fert, LAST_YEAR)
                births, deaths = {}, {}
                for y in range(MIGRATION_YEARS[0] - 5, LAST_YEAR + 1):
                    # Births per year ~ TFR * women 15-49 / 35 reproductive years.
                    cbr = 1000.0 * fert[y] * interpolate(share["f15_49"], y) / 35.0
                    # Age-adjusted inverse life expectancy.
                    cdr = 1000.0 / life[y] * (0.55 + 2.2 * interpolate(share["65p"], y))
                    cdr = min(max(cdr, 1.5), 30.0)
                    if y >= FIRST_YEAR:
                        values["crude_birth_rate"][y] = round(cbr, 3)
                        values["crude_death_rate"][y] = round(cdr, 3)
                    births[y] = cbr * pop[y] / 1000.0
                    deaths[y] = cdr * pop[y] / 1000.0
                for y in MIGRATION_YEARS:
                    natural = sum(births[t] - deaths[t] for t in range(y - 4, y + 1))
                    values["net_migration"][y] = round((pop[y] - pop[y - 5]) - natural)

        for key in INDICATORS:
            if not values[key]:
                continue
            cells = []
            for y in YEARS:
                v = values[key].get(y)
                if v is None:
                    cells.append("")
                elif isinstance(v, int):
                    cells.append(str(v))
                else:
                    cells.append(repr(float(v)))
            rows.append([common[iso3], iso3, key] + cells)
    return rows


def simplify_ring(ring, tolerance):
    if len(ring) < 8:
        return ring
    simplified = LinearRing(ring).simplify(tolerance, preserve_topology=False)
    coords = [[round(x, 4), round(y, 4)] for x, y in simplified.coords]
    if len(coords) < 4 or Polygon(coords).area == 0.0:
        return [[round(x, 4), round(y, 4)] for x, y in ring]
    return coords


def build_borders(root, countries, tolerance):
    out = []
    for c in sorted(countries, key=lambda c: c["cca3"]):
        path = os.path.join(root, "data", c["cca3"].lower() + ".geo.json")
        if not os.path.exists(path):
            continue
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
        rings = []
        for feature in doc.get("features", []):
            geom = feature.get("geometry")
            if not geom:
                continue
            polys = geom["coordinates"] if geom["type"] == "MultiPolygon" else [geom["coordinates"]]
            for poly in polys:
                for ring in poly:
                    # Antarctica's pole-closing ring must keep its straight edges.
                    r = ring if c["cca3"] == "ATA" else simplify_ring(ring, tolerance)
                    if len(r) >= 4:
                        rings.append(r)
        if rings:
            out.append({"iso3": c["cca3"], "rings": rings})
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--world-countries", required=True, help="extracted npm package root")
    ap.add_argument("--bokeh-wheel", required=True, help="bokeh_sampledata wheel")
    ap.add_argument("--out", default="data/reference")
    ap.add_argument("--tolerance", type=float, default=0.02, help="ring simplification, degrees")
    args = ap.parse_args()

    countries = [c for c in load_world_countries(args.world_countries)
                 if len(c["cca3"]) == 3 and c["cca3"].isupper()]
    index = name_index(countries)
    ccn3 = {c["ccn3"]: c["cca3"] for c in countries if c.get("ccn3")}

    gm_pop = load_gapminder(args.bokeh_wheel, "gapminder_population.csv", index)
    gm_life = load_gapminder(args.bokeh_wheel, "gapminder_life_expectancy.csv", index)
    gm_fert = load_gapminder(args.bokeh_wheel, "gapminder_fertility.csv", index)
    wpp = load_wpp(args.bokeh_wheel, ccn3)

    borders = build_borders(args.world_countries, countries, args.tolerance)
    with_borders = {b["iso3"] for b in borders}
    os.makedirs(args.out, exist_ok=True)

    rows = [r for r in build_indicators(countries, gm_pop, gm_life, gm_fert, wpp)
            if r[1] in with_borders]
    with open(os.path.join(args.out, "indicators.csv"), "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["country_name", "iso3", "indicator"] + [str(y) for y in YEARS])
        w.writerows(rows)

    with open(os.path.join(args.out, "locations.csv"), "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["iso3", "name", "latitude", "longitude"])
        for c in sorted(countries, key=lambda c: c["cca3"]):
            if c["cca3"] in with_borders and c.get("latlng"):
                lat, lng = c["latlng"]
                w.writerow([c["cca3"], c["name"]["common"], lat, lng])

    with open(os.path.join(args.out, "borders.json"), "w", encoding="utf-8") as f:
        f.write("[\n")
        for i, b in enumerate(borders):
            f.write(json.dumps(b, separators=(",", ":")))
            f.write(",\n" if i + 1 < len(borders) else "\n")
        f.write("]\n")

    print(f"{len(borders)} border entries, {len(rows)} indicator rows, "
          f"{len({r[1] for r in rows})} countries with data")


if __name__ == "__main__":
    main()
