#!/usr/bin/env python3
"""Regenerates data/solar_system.json and data/jovian_moons.json.

Planets: Standish mean elements at J2000 (a, e, mean longitude L, longitude of
perihelion), inclination dropped. Galilean moons: Lieske E5 mean longitudes and
mean motions (as tabulated by Meeus, epoch JD 2443000.5) moved to J2000; the
semi-major axis is derived from the mean motion so the Keplerian period is the
observed one.
"""
import json
import math
import pathlib

AU = 149597870.7
MU_SUN = 1.32712440018e11
MU_JUP = 126686534.0

# name, symbol, mu, radius, rp factors, a [AU], e, L [deg], varpi [deg]
PLANETS = [
    ("Mercury", "Me", 22031.78, 2439.7, (1.1, 5.0), 0.38709927, 0.20563593, 252.25032350, 77.45779628),
    ("Venus", "V", 324858.59, 6051.8, (1.1, 5.0), 0.72333566, 0.00677672, 181.97909950, 131.60246718),
    ("Earth", "E", 398600.44, 6378.14, (1.1, 5.0), 1.00000261, 0.01671123, 100.46457166, 102.93768193),
    ("Mars", "Ma", 42828.37, 3396.19, (1.1, 5.0), 1.52371034, 0.09339410, -4.55343205, -23.94362959),
    ("Jupiter", "J", 126686534.0, 71492.0, (5.0, 100.0), 5.20288700, 0.04838624, 34.39644051, 14.72847983),
    ("Saturn", "S", 37931187.0, 60268.0, (1.1, 5.0), 9.53667594, 0.05386179, 49.95424423, 92.59887831),
    ("Uranus", "U", 5793939.0, 25559.0, (1.1, 5.0), 19.18916464, 0.04725744, 313.23810451, 170.95427630),
    ("Neptune", "N", 6836529.0, 24764.0, (1.1, 5.0), 30.06992276, 0.00859048, -55.12002969, 44.96476227),
]

# name, symbol, mu, radius, e, L0 [deg at JD 2443000.5], n [deg/day],
# perijove longitude p0 [deg at JD 2443000.5], perijove rate [deg/day]
MOONS = [
    ("Io", "I", 5959.916, 1821.6, 0.0041, 106.07719, 203.488955790, 97.0881, 0.16138586),
    ("Europa", "Eu", 3202.739, 1560.8, 0.0094, 175.73161, 101.374724735, 154.8663, 0.04726307),
    ("Ganymede", "G", 9887.834, 2631.2, 0.0013, 120.55883, 50.317609207, 188.1840, 0.00712734),
    ("Callisto", "C", 7179.289, 2410.3, 0.0074, 84.44459, 21.571071177, 335.2868, 0.00184000),
]
DAYS_1976_TO_J2000 = 2451545.0 - 2443000.5
# J2000.0 (JD 2451545.0) expressed as MJD2000 = JD - 2451544.5
J2000_MJD = 0.5


def body(name, symbol, mu, radius, rp, a, e, lon_peri_deg, mean_lon_deg, mu_central):
    return {
        "name": name,
        "symbol": symbol,
        "mu_body": mu,
        "radius": radius,
        "rp_min_factor": rp[0],
        "rp_max_factor": rp[1],
        "elements": {"a": a, "e": e, "lon_peri": math.radians(lon_peri_deg % 360.0), "mu": mu_central},
        "mean_anomaly_epoch": math.radians((mean_lon_deg - lon_peri_deg) % 360.0),
    }


def main():
    root = pathlib.Path(__file__).resolve().parent.parent / "data"
    root.mkdir(exist_ok=True)

    planets = [body(n, s, mu, r, rp, a * AU, e, w, L, MU_SUN) for n, s, mu, r, rp, a, e, L, w in PLANETS]
    (root / "solar_system.json").write_text(json.dumps(
        {"central_name": "Sun", "central_mu": MU_SUN, "t_ref": J2000_MJD, "bodies": planets}, indent=2) + "\n")

    moons = []
    for n, s, mu, r, e, l0, rate, p0, prate in MOONS:
        mean_lon = l0 + rate * DAYS_1976_TO_J2000
        peri = p0 + prate * DAYS_1976_TO_J2000
        n_rad_s = math.radians(rate) / 86400.0
        a = (MU_JUP / n_rad_s ** 2) ** (1.0 / 3.0)
        moons.append(body(n, s, mu, r, (1.0, 3.0), a, e, peri, mean_lon, MU_JUP))
    (root / "jovian_moons.json").write_text(json.dumps(
        {"central_name": "Jupiter", "central_mu": MU_JUP, "t_ref": J2000_MJD, "bodies": moons}, indent=2) + "\n")


if __name__ == "__main__":
    main()
