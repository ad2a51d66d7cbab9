"""Command-line front end: ``mtmm spectrum|transmissive|couplings|field-profile``.

Each command reads a JSON experiment configuration and writes CSV (default)
or a JSON record that also carries the fully resolved configuration.
Exit codes: 0 success, 1 invalid configuration, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import sys

import numpy as np

from .array import MembraneArray, find_transmissive_wavelengths, transmittance_spectrum
from .cavity import CavityConfig, resonance_at
from .errors import ConfigError, NumericalError
from .membrane import SlabMembrane
from .optomech import analytic_g_pm, expected_branch, extract_couplings, sign_branch
from .tmm_core import Gap, Stack, field_profile

SCHEMA_VERSION = "1"

# None marks a required field; sections absent here are rejected
SCHEMA = {
    "membrane": {"n": None, "l_nm": None},
    "array": {"count": None, "spacing_nm": None, "model": "full"},
    "cavity": {"length_nm": None, "finesse": None, "mirror_zeta": None, "center_offset_nm": 0.0},
    "scan": {"lambda_min_nm": None, "lambda_max_nm": None, "samples": 1000},
    "numerics": {"fd_step_fraction": 1e-6, "root_tol": 1e-10, "degeneracy_eps": 1e-3},
    "field": {"wavelength_nm": None, "root_index": 0, "parity": None, "branch": None,
              "window_wavelengths": 3.0, "samples_per_wavelength": 64,
              "background_samples": 400},
}
OPTIONAL_SECTIONS = ("cavity", "numerics", "field")
NULLABLE = {("cavity", "finesse"), ("cavity", "mirror_zeta"), ("field", "wavelength_nm"),
            ("field", "parity"), ("field", "branch")}


def _number(path, value, *, positive=True, integer=False, minimum=None):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    if integer and int(value) != value:
        raise ConfigError(f"{path}: expected an integer, got {value!r}")
    if not np.isfinite(value):
        raise ConfigError(f"{path}: must be finite")
    if positive and not value > 0:
        raise ConfigError(f"{path}: must be > 0, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{path}: must be >= {minimum}, got {value!r}")
    return int(value) if integer else float(value)


def resolve_config(raw):
    """Validate a configuration mapping and fill in defaults."""
    if not isinstance(raw, dict):
        raise ConfigError("<root>: expected an object")
    unknown = set(raw) - set(SCHEMA)
    if unknown:
        raise ConfigError(f"{sorted(unknown)[0]}: unknown section")
    cfg = {}
    for section, fields in SCHEMA.items():
        if section not in raw:
            if section in OPTIONAL_SECTIONS:
                if section != "cavity":
                    cfg[section] = dict(fields)
                continue
            raise ConfigError(f"{section}: missing section")
        given = raw[section]
        if not isinstance(given, dict):
            raise ConfigError(f"{section}: expected an object")
        bad = set(given) - set(fields)
        if bad:
            raise ConfigError(f"{section}.{sorted(bad)[0]}: unknown field")
        out = {}
        for key, default in fields.items():
            value = given.get(key, default)
            if value is None and (section, key) not in NULLABLE:
                raise ConfigError(f"{section}.{key}: required")
            out[key] = value
        cfg[section] = out

    m = cfg["membrane"]
    m["n"] = _number("membrane.n", m["n"], minimum=1)
    m["l_nm"] = _number("membrane.l_nm", m["l_nm"])
    a = cfg["array"]
    a["count"] = _number("array.count", a["count"], integer=True)
    a["spacing_nm"] = _number("array.spacing_nm", a["spacing_nm"])
    if a["model"] not in ("full", "thin-padded"):
        raise ConfigError(f"array.model: must be 'full' or 'thin-padded', got {a['model']!r}")
    s = cfg["scan"]
    s["lambda_min_nm"] = _number("scan.lambda_min_nm", s["lambda_min_nm"])
    s["lambda_max_nm"] = _number("scan.lambda_max_nm", s["lambda_max_nm"])
    if not s["lambda_min_nm"] < s["lambda_max_nm"]:
        raise ConfigError("scan.lambda_max_nm: must exceed scan.lambda_min_nm")
    s["samples"] = _number("scan.samples", s["samples"], integer=True, minimum=2)
    num = cfg["numerics"]
    for key in num:
        num[key] = _number(f"numerics.{key}", num[key])
    if "cavity" in cfg:
        c = cfg["cavity"]
        c["length_nm"] = _number("cavity.length_nm", c["length_nm"])
        if (c["finesse"] is None) == (c["mirror_zeta"] is None):
            raise ConfigError("cavity.finesse: give exactly one of finesse and mirror_zeta")
        if c["finesse"] is not None:
            c["finesse"] = _number("cavity.finesse", c["finesse"], minimum=1)
            if c["finesse"] == 1:
                raise ConfigError("cavity.finesse: must be > 1")
        else:
            c["mirror_zeta"] = _number("cavity.mirror_zeta", c["mirror_zeta"])
        c["center_offset_nm"] = _number("cavity.center_offset_nm", c["center_offset_nm"],
                                        positive=False)
        if not c["length_nm"] > 10 * _extent(cfg):
            raise ConfigError("cavity.length_nm: must exceed 10x the array extent")
    f = cfg["field"]
    if f["wavelength_nm"] is not None:
        f["wavelength_nm"] = _number("field.wavelength_nm", f["wavelength_nm"])
    f["root_index"] = _number("field.root_index", f["root_index"], integer=True, positive=False,
                              minimum=0)
    if f["parity"] not in (None, "odd", "even"):
        raise ConfigError(f"field.parity: must be 'odd' or 'even', got {f['parity']!r}")
    if f["branch"] not in (None, "plus", "minus"):
        raise ConfigError(f"field.branch: must be 'plus' or 'minus', got {f['branch']!r}")
    if f["parity"] is not None and f["branch"] is not None:
        raise ConfigError("field.branch: give at most one of parity and branch")
    if f["parity"] is None and f["branch"] is None:
        f["parity"] = "odd"
    f["window_wavelengths"] = _number("field.window_wavelengths", f["window_wavelengths"])
    f["samples_per_wavelength"] = _number("field.samples_per_wavelength",
                                          f["samples_per_wavelength"], integer=True, minimum=50)
    f["background_samples"] = _number("field.background_samples", f["background_samples"],
                                      integer=True, positive=False, minimum=0)
    return cfg


def _extent(cfg):
    a, m = cfg["array"], cfg["membrane"]
    return a["count"] * m["l_nm"] + (a["count"] - 1) * a["spacing_nm"]


def build_array(cfg, model=None):
    m, a = cfg["membrane"], cfg["array"]
    return MembraneArray(SlabMembrane(m["n"], m["l_nm"]), a["count"], a["spacing_nm"],
                         model or a["model"])


def build_cavity(cfg):
    if "cavity" not in cfg:
        raise ConfigError("cavity: section required for this command")
    c = cfg["cavity"]
    return CavityConfig(c["length_nm"], build_array(cfg), finesse=c["finesse"],
                        mirror_zeta=c["mirror_zeta"], center_offset=c["center_offset_nm"])


def _roots(cfg, array=None):
    s, num = cfg["scan"], cfg["numerics"]
    return find_transmissive_wavelengths(array or build_array(cfg), s["lambda_min_nm"],
                                         s["lambda_max_nm"], xtol=num["root_tol"],
                                         degeneracy_eps=num["degeneracy_eps"])


# --------------------------------------------------------------------------
# Commands; each returns (columns, rows)
# --------------------------------------------------------------------------

def cmd_spectrum(cfg):
    s = cfg["scan"]
    args = (s["lambda_min_nm"], s["lambda_max_nm"], s["samples"])
    lam, t_full = transmittance_spectrum(build_array(cfg, "full"), *args)
    _, t_thin = transmittance_spectrum(build_array(cfg, "thin-padded"), *args)
    rows = [(x, a, b, abs(a - b)) for x, a, b in zip(lam, t_full, t_thin)]
    return ["lambda_nm", "T_full", "T_thin_padded", "abs_diff"], rows


def cmd_transmissive(cfg):
    rows = [(r.wavelength, r.branch, r.zeta, r.degenerate) for r in _roots(cfg)]
    return ["lambda_nm", "branch", "zeta", "degenerate_flag"], rows


def cmd_couplings(cfg):
    cav = build_cavity(cfg)
    n = cav.count
    frac = cfg["numerics"]["fd_step_fraction"]
    cols = ["lambda_nm", "branch", "parity", "g_num_over_g", "g_ana_over_g", "rel_dev",
            "g_coll_over_g"] + [f"g{j + 1}_over_g" for j in range(n)]
    rows = []
    for root in _roots(cfg):
        for parity in ("odd", "even"):
            tuned, rec = resonance_at(cav, root.k, parity)
            res = extract_couplings(tuned, rec, step=frac * root.wavelength,
                                    strict=not root.degenerate)
            g_ana = rel = None
            if root.degenerate:
                branch = "degenerate"
            elif n == 2:
                branch = expected_branch(root.branch, parity)
                g_num = res.breathing_normalized
                if sign_branch(g_num, root.zeta) != branch:
                    raise NumericalError(f"branch/sign mismatch at {root.wavelength} nm")
                pair = analytic_g_pm(root.zeta, cav.array.spacing / tuned.length)
                g_ana = float(pair[0] if branch == "plus" else pair[1])
                rel = abs(g_num - g_ana) / abs(g_ana)
            else:
                branch = "unclassified"
            g_num = res.breathing_normalized if n == 2 else res.collective_normalized
            rows.append((root.wavelength, branch, parity, g_num, g_ana, rel,
                         res.collective_normalized, *res.normalized))
    return cols, rows


def _dense(centres, half_width, per_nm, lo, hi):
    pts = []
    for x0 in centres:
        a, b = max(lo, x0 - half_width), min(hi, x0 + half_width)
        pts.append(np.linspace(a, b, max(int(np.ceil((b - a) * per_nm)) + 1, 2)))
    return pts


def cmd_field_profile(cfg):
    f = cfg["field"]
    if "cavity" in cfg:
        cav = build_cavity(cfg)
        roots = [r for r in _roots(cfg) if not r.degenerate]
        if f["root_index"] >= len(roots):
            raise ConfigError(f"field.root_index: only {len(roots)} non-degenerate "
                              f"transmissive wavelengths in the scan window")
        root = roots[f["root_index"]]
        parity = f["parity"]
        if f["branch"] is not None:
            if cav.count != 2:
                raise ConfigError("field.branch: branch selection needs two membranes")
            parity = next(p for p in ("odd", "even")
                          if expected_branch(root.branch, p) == f["branch"])
        tuned, rec = resonance_at(cav, root.k, parity)
        k, lam = rec.k_res, rec.wavelength
        stack = tuned.stack()
        lm, lp = tuned.outer_gaps
        L = tuned.length
        centres = [0.0, lm, L / 2, L - lp, L]
    else:
        lam = f["wavelength_nm"]
        if lam is None:
            raise ConfigError("field.wavelength_nm: required without a cavity section")
        k = 2 * np.pi / lam
        arr = build_array(cfg)
        margin = f["window_wavelengths"] * lam
        stack = Stack([Gap(margin), *arr.elements(), Gap(margin)])
        L = stack.extent
        centres = [margin + x for x in np.cumsum([0.0] + [e.length for e in arr.elements()])]
    per_nm = f["samples_per_wavelength"] / lam
    pts = _dense(centres, f["window_wavelengths"] * lam, per_nm, 0.0, L)
    pts.append(np.linspace(0.0, L, f["background_samples"]))
    x = np.unique(np.concatenate(pts))
    prof = field_profile(stack, k, x)
    rows = list(zip(prof.position, prof.amplitude.real, prof.amplitude.imag, prof.intensity))
    return ["position_nm", "re", "im", "intensity"], rows


COMMANDS = {
    "spectrum": cmd_spectrum,
    "transmissive": cmd_transmissive,
    "couplings": cmd_couplings,
    "field-profile": cmd_field_profile,
}


# --------------------------------------------------------------------------
# Output
# --------------------------------------------------------------------------

def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, str):
        return v
    return repr(float(v))


def _json_value(v):
    if v is None or isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    return float(v)


def render_csv(columns, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def render_json(command, cfg, columns, rows):
    record = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config_echo": cfg,
        "columns": columns,
        "rows": [[_json_value(v) for v in row] for row in rows],
    }
    return json.dumps(record, indent=1) + "\n"


def run(command, raw_config, fmt="csv"):
    """Run `command` on a configuration mapping and return the rendered output."""
    cfg = resolve_config(copy.deepcopy(raw_config))
    columns, rows = COMMANDS[command](cfg)
    if fmt == "json":
        return render_json(command, cfg, columns, rows)
    return render_csv(columns, rows)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="mtmm", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="JSON experiment configuration")
    parser.add_argument("--out", help="write output here instead of standard output")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    args = parser.parse_args(argv)

    try:
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"mtmm: cannot read config: {exc}", file=sys.stderr)
        return 1
    if isinstance(raw, dict) and "config_echo" in raw:
        raw = raw["config_echo"]
    try:
        text = run(args.command, raw, args.format)
    except (ConfigError, ValueError) as exc:
        print(f"mtmm: invalid configuration: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"mtmm: numerical failure: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
