"""Scenario configuration: parsing, validation, overrides, serialization.

A configuration is a nested JSON document.  Unknown keys anywhere in the
tree are rejected so typos surface immediately.  The bundled ``paper_eq28``
configuration reproduces the rotational-system benchmark; variant scenarios
are derived from it with command-line overrides rather than duplicate files.
"""

from __future__ import annotations

import copy
import json
import math

import numpy as np

from .engine import PreviewConfig, Scenario, TriggerConfig
from .errors import ConfigError
from .observer import place_observer_poles
from .plant import (LtiPlant, SignalSpec, SineTerm, Window,
                    paper_disturbance, paper_plant, paper_reference)
from .synthesis import (DEFAULT_PARTITION, PARTITIONS, build_augmented,
                        synthesize_gains)

_SIGNAL_KEYS = {
    "kind": None,
    "terms": None,
    "windows": None,
    "step_time": None,
    "step_amplitude": None,
    "parts": None,
}

SCHEMA = {
    "plant": {"A": None, "B": None, "C": None, "B_omega": None},
    "mrc": {"w_a": None, "T": None},
    "eid": {"w_f": None, "enabled": None},
    "observer": {"L": None, "poles": None},
    "trigger": {"T1": None, "psi1": None, "psi2": None, "rho_lo": None,
                "rho_hi": None, "rho0": None, "kappa": None, "mode": None},
    "synthesis": {"Q_z": None, "R": None, "omega_c": None, "partition": None},
    "signals": {"reference": _SIGNAL_KEYS, "disturbance": _SIGNAL_KEYS},
    "sim": {"horizon": None, "h": None},
    "preview": {"t_r": None, "quad_step": None},
}

ROBUSTNESS_STEP_TIME = 21.0
ROBUSTNESS_STEP_AMPLITUDE = 4.5


def paper_config() -> dict:
    """The bundled rotational-system benchmark configuration.

    The integration step is 1e-4 s: the synthesized loop has a fast pole
    near -4000 rad/s, and the explicit fixed-step integrator needs
    |lambda| * h well below its stability bound (2.78) with headroom for
    accuracy, which a 1e-3 step does not provide.
    """
    plant = paper_plant()
    pi = math.pi
    return {
        "plant": {
            "A": plant.a.tolist(),
            "B": plant.b.tolist(),
            "C": plant.c.tolist(),
            "B_omega": None,
        },
        "mrc": {"w_a": 100.0, "T": 2.0},
        "eid": {"w_f": 100.0, "enabled": True},
        "observer": {"L": [[0.52], [2.215], [-0.245]]},
        "trigger": {"T1": 0.5, "psi1": None, "psi2": None,
                    "rho_lo": 0.01, "rho_hi": 0.99, "rho0": 0.01,
                    "kappa": 0.01, "mode": "adaptive"},
        "synthesis": {
            "Q_z": np.diag([100.0, 100.0, 100.0, 20000.0, 0.001]).tolist(),
            "R": [[1.0]],
            "omega_c": None,  # null: use the internal-model cutoff w_a
            "partition": DEFAULT_PARTITION,
        },
        "signals": {
            "reference": signal_to_dict(paper_reference()),
            "disturbance": signal_to_dict(paper_disturbance()),
        },
        "sim": {"horizon": 25.0, "h": 1e-4},
        "preview": {"t_r": 0.0, "quad_step": 0.005},
    }


BUNDLED = {"paper_eq28": paper_config}


def signal_to_dict(spec: SignalSpec) -> dict:
    out = {"kind": spec.kind}
    if spec.kind == "sum_of_sines":
        out["terms"] = [{"amplitude": tm.amplitude, "omega": tm.omega} for tm in spec.terms]
    elif spec.kind == "windowed_sum_of_sines":
        out["windows"] = [{"t_start": w.t_start, "t_end": w.t_end,
                           "terms": [{"amplitude": tm.amplitude, "omega": tm.omega}
                                     for tm in w.terms]}
                          for w in spec.windows]
    elif spec.kind == "step":
        out["step_time"] = spec.step_time
        out["step_amplitude"] = spec.step_amplitude
    elif spec.kind == "composite":
        out["parts"] = [signal_to_dict(p) for p in spec.parts]
    return out


def signal_from_dict(doc: dict) -> SignalSpec:
    kind = doc.get("kind", "zero")
    if kind == "sum_of_sines":
        return SignalSpec(kind=kind, terms=[SineTerm(t["amplitude"], t["omega"])
                                            for t in doc.get("terms", [])])
    if kind == "windowed_sum_of_sines":
        return SignalSpec(kind=kind, windows=[
            Window(w["t_start"], w["t_end"],
                   [SineTerm(t["amplitude"], t["omega"]) for t in w.get("terms", [])])
            for w in doc.get("windows", [])])
    if kind == "step":
        return SignalSpec(kind=kind, step_time=doc.get("step_time", 0.0),
                          step_amplitude=doc.get("step_amplitude", 0.0))
    if kind == "composite":
        return SignalSpec(kind=kind, parts=[signal_from_dict(p) for p in doc.get("parts", [])])
    if kind == "zero":
        return SignalSpec(kind="zero")
    raise ConfigError(f"unknown signal kind {kind!r}")


def _check_keys(doc: dict, schema: dict, path: str = "") -> None:
    for key, sub in doc.items():
        if key not in schema:
            raise ConfigError(f"unknown configuration key {path + key!r}")
        child = schema[key]
        if isinstance(child, dict) and isinstance(sub, dict):
            if child is _SIGNAL_KEYS or child == _SIGNAL_KEYS:
                continue  # signal bodies are validated by signal_from_dict
            _check_keys(sub, child, path + key + ".")


def validate_config(doc: dict) -> dict:
    """Structural validation; returns a deep copy with defaults filled in."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    _check_keys(doc, SCHEMA)
    merged = copy.deepcopy(paper_config())
    for section, body in doc.items():
        if isinstance(body, dict):
            merged[section].update(copy.deepcopy(body))
        else:
            merged[section] = copy.deepcopy(body)
    if merged["trigger"]["mode"] not in ("adaptive", "static", "continuous"):
        raise ConfigError(f"unknown trigger mode {merged['trigger']['mode']!r}")
    if merged["synthesis"]["partition"] not in PARTITIONS:
        raise ConfigError(f"partition must be one of {PARTITIONS}")
    q_z = np.array(merged["synthesis"]["Q_z"], dtype=float)
    if q_z.ndim != 2 or q_z.shape[0] != q_z.shape[1] \
            or np.min(np.linalg.eigvalsh(0.5 * (q_z + q_z.T))) <= 0.0:
        raise ConfigError("synthesis.Q_z must be symmetric positive definite")
    return merged


def load_config(source: str) -> dict:
    """Load a bundled configuration by name or a JSON file by path."""
    if source in BUNDLED:
        return BUNDLED[source]()
    with open(source, "r", encoding="utf-8") as fh:
        return validate_config(json.load(fh))


def serialize_config(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


_OVERRIDE_SUGAR = {
    "eid": ("eid", "enabled"),
    "mode": ("trigger", "mode"),
    "horizon": ("sim", "horizon"),
    "h": ("sim", "h"),
    "partition": ("synthesis", "partition"),
    "t_r": ("preview", "t_r"),
}


def _parse_value(text: str):
    lowered = text.lower()
    if lowered in ("on", "true", "yes"):
        return True
    if lowered in ("off", "false", "no"):
        return False
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(doc: dict, overrides: list[str]) -> dict:
    """Apply ``key=value`` overrides; command line beats config.

    Keys are dotted paths into the document; a few shorthands exist
    (``eid=off``, ``mode=static``, ``horizon=5``, ``h=1e-4``).  The special
    flag ``step_disturbance=on`` appends the robustness step input to the
    disturbance.
    """
    doc = copy.deepcopy(doc)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, _, raw = item.partition("=")
        value = _parse_value(raw)
        if key == "step_disturbance":
            if value:
                doc["signals"]["disturbance"] = {
                    "kind": "composite",
                    "parts": [doc["signals"]["disturbance"],
                              {"kind": "step",
                               "step_time": ROBUSTNESS_STEP_TIME,
                               "step_amplitude": ROBUSTNESS_STEP_AMPLITUDE}],
                }
            continue
        if key in _OVERRIDE_SUGAR:
            section, field = _OVERRIDE_SUGAR[key]
            doc[section][field] = value
            continue
        parts = key.split(".")
        node = doc
        for part in parts[:-1]:
            if not isinstance(node, dict) or part not in node:
                raise ConfigError(f"override path {key!r} does not exist")
            node = node[part]
        if not isinstance(node, dict):
            raise ConfigError(f"override path {key!r} does not exist")
        # a new leaf is fine if the schema admits it; validate_config decides
        node[parts[-1]] = value
    return validate_config(doc)


def build_plant(doc: dict) -> LtiPlant:
    p = doc["plant"]
    b_omega = p.get("B_omega")
    return LtiPlant(np.array(p["A"], dtype=float),
                    np.array(p["B"], dtype=float),
                    np.array(p["C"], dtype=float),
                    None if b_omega is None else np.array(b_omega, dtype=float))


def build_scenario(doc: dict):
    """Turn a validated configuration into a runnable scenario.

    Returns ``(scenario, context)`` where the context carries the
    augmentation and weights for synthesis reporting.
    """
    doc = validate_config(doc)
    plant = build_plant(doc)
    syn = doc["synthesis"]
    w_a = float(doc["mrc"]["w_a"])
    omega_c = w_a if syn["omega_c"] is None else float(syn["omega_c"])
    q_z = np.array(syn["Q_z"], dtype=float)
    r = np.array(syn["R"], dtype=float)
    aug = build_augmented(plant, omega_c)
    gains = synthesize_gains(aug, q_z, r, partition=syn["partition"])

    obs = doc["observer"]
    if obs.get("L") is not None:
        gains.observer_gain = np.array(obs["L"], dtype=float).reshape(plant.n, 1)
    elif obs.get("poles") is not None:
        gains.observer_gain = place_observer_poles(plant, [complex(p) if isinstance(p, str)
                                                           else p for p in obs["poles"]])
    else:
        raise ConfigError("observer section needs either L or poles")

    trig_doc = doc["trigger"]
    trigger = TriggerConfig(
        check_period=float(trig_doc["T1"]),
        rho0=float(trig_doc["rho0"]),
        rho_lo=float(trig_doc["rho_lo"]),
        rho_hi=float(trig_doc["rho_hi"]),
        kappa=float(trig_doc["kappa"]),
        psi1=None if trig_doc["psi1"] is None else np.array(trig_doc["psi1"], dtype=float),
        psi2=None if trig_doc["psi2"] is None else np.array(trig_doc["psi2"], dtype=float),
    )
    scenario = Scenario(
        plant=plant,
        gains=gains,
        reference=signal_from_dict(doc["signals"]["reference"]),
        disturbance=signal_from_dict(doc["signals"]["disturbance"]),
        w_a=w_a,
        period=float(doc["mrc"]["T"]),
        w_f=float(doc["eid"]["w_f"]),
        eid_enabled=bool(doc["eid"]["enabled"]),
        trigger=trigger,
        trigger_mode=trig_doc["mode"],
        horizon=float(doc["sim"]["horizon"]),
        h=float(doc["sim"]["h"]),
        preview=PreviewConfig(t_r=float(doc["preview"]["t_r"]),
                              quad_step=float(doc["preview"]["quad_step"])),
        augmented=aug,
        r_weight=r,
    )
    context = {"augmented": aug, "q_z": q_z, "r": r, "omega_c": omega_c, "config": doc}
    return scenario, context
