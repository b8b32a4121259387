"""Experiment configuration schema and validation.

Configs are JSON with a versioned "schema" field. validate_config returns
findings (JSON-pointer path, level, message) instead of raising, so the
CLI can report every problem at once; error-level findings block a run.
"""
import json
import numbers
from dataclasses import dataclass

PIPELINES = ("entanglement-storage", "state-tomo", "process-tomo", "bell",
             "afc-echo", "mode-scan", "capacity")

SCHEMA_VERSION = 1

# sections a pipeline cannot run without
REQUIRED_SECTIONS = {
    "entanglement-storage": ("source", "channel", "exposure"),
    "state-tomo": ("source", "exposure"),
    "process-tomo": ("process", "exposure"),
    "bell": ("source", "bell"),
    "afc-echo": ("comb", "pulse"),
    "mode-scan": ("scan", "pump"),
    "capacity": ("capacity",),
}

KNOWN_KEYS = {"schema", "pipeline", "seed", "out", "name", "source", "channel",
              "exposure", "comb", "pulse", "sweep", "pump", "scan", "bell",
              "process", "capacity", "comparison"}

COMB_SHAPES = ("square", "gaussian", "lorentzian")


@dataclass(frozen=True)
class Finding:
    path: str
    level: str  # "error" or "warning"
    message: str

    def __str__(self):
        return f"{self.level}: {self.path}: {self.message}"


def load_config(path):
    with open(path) as f:
        return json.load(f)


def _num(cfg, key, path, findings, lo=None, hi=None, required=True,
         integer=False):
    if key not in cfg:
        if required:
            findings.append(Finding(f"{path}/{key}", "error", "missing"))
        return None
    x = cfg[key]
    if isinstance(x, bool) or not isinstance(x, numbers.Real):
        findings.append(Finding(f"{path}/{key}", "error", "must be a number"))
        return None
    if integer and int(x) != x:
        findings.append(Finding(f"{path}/{key}", "error", "must be an integer"))
        return None
    if lo is not None and x < lo:
        findings.append(Finding(f"{path}/{key}", "error", f"must be >= {lo}, got {x}"))
    if hi is not None and x > hi:
        findings.append(Finding(f"{path}/{key}", "error", f"must be <= {hi}, got {x}"))
    return x


def _section(cfg, key, findings):
    sec = cfg.get(key)
    if sec is None:
        return None
    if not isinstance(sec, dict):
        findings.append(Finding(f"/{key}", "error", "must be an object"))
        return None
    return sec


def _validate_source(cfg, findings):
    sec = _section(cfg, "source", findings)
    if sec is None:
        return
    c = sec.get("c")
    if c is not None:
        if not isinstance(c, list) or len(c) != 3:
            findings.append(Finding("/source/c", "error",
                                    "must be a list of 3 amplitudes"))
        elif all(isinstance(x, numbers.Real) for x in c) and not any(c):
            findings.append(Finding("/source/c", "error", "all amplitudes zero"))
    _num(sec, "v", "/source", findings, lo=0.0, hi=1.0, required=False)
    _num(sec, "dephasing", "/source", findings, lo=0.0, required=False)


def _validate_channel(cfg, findings):
    sec = _section(cfg, "channel", findings)
    if sec is None:
        return
    if "physical" in sec:
        phys = sec["physical"]
        if not isinstance(phys, dict):
            findings.append(Finding("/channel/physical", "error", "must be an object"))
            return
        _num(phys, "finesse", "/channel/physical", findings, lo=1.0 + 1e-12)
        _num(phys, "delta", "/channel/physical", findings, lo=0.0)
        _num(phys, "w0", "/channel/physical", findings, lo=0.0)
        return
    eta = sec.get("eta")
    if isinstance(eta, dict):
        for k, val in eta.items():
            if not isinstance(val, numbers.Real) or not 0 <= val <= 1:
                findings.append(Finding(f"/channel/eta/{k}", "error",
                                        "efficiencies must lie in [0, 1]"))
    else:
        _num(sec, "eta", "/channel", findings, lo=0.0, hi=1.0)
    _num(sec, "sigma_theta", "/channel", findings, lo=0.0, required=False)
    _num(sec, "delta", "/channel", findings, lo=0.0, required=False)


def _validate_comb(sec, path, findings):
    _num(sec, "delta", path, findings, lo=0.0)
    f = _num(sec, "finesse", path, findings)
    if f is not None and f <= 1:
        findings.append(Finding(f"{path}/finesse", "error", f"must be > 1, got {f}"))
    _num(sec, "d", path, findings, lo=0.0)
    _num(sec, "d0", path, findings, lo=0.0, required=False)
    b = _num(sec, "bandwidth", path, findings, lo=0.0)
    delta = sec.get("delta")
    if (isinstance(b, numbers.Real) and isinstance(delta, numbers.Real)
            and b < 2 * delta):
        findings.append(Finding(f"{path}/bandwidth", "error",
                                "must hold at least two teeth (>= 2*delta)"))
    shape = sec.get("shape", "square")
    if shape not in COMB_SHAPES:
        findings.append(Finding(f"{path}/shape", "error",
                                f"must be one of {COMB_SHAPES}"))


def _validate_pump(sec, path, findings):
    shape = sec.get("shape", "gaussian")
    if shape not in ("gaussian", "super-gaussian"):
        findings.append(Finding(f"{path}/shape", "error",
                                "must be gaussian or super-gaussian"))
    _num(sec, "waist", path, findings, lo=0.0)
    _num(sec, "s0", path, findings, lo=0.0)
    _num(sec, "d_max", path, findings, lo=0.0)
    n = _num(sec, "n", path, findings, required=False, integer=True)
    if shape == "super-gaussian" and n is not None and n < 2:
        findings.append(Finding(f"{path}/n", "error", "super-gaussian n must be >= 2"))


def validate_config(cfg):
    """Schema findings for one config dict; empty list means runnable."""
    findings = []
    if not isinstance(cfg, dict):
        return [Finding("/", "error", "config must be a JSON object")]

    schema = cfg.get("schema")
    if schema != SCHEMA_VERSION:
        findings.append(Finding("/schema", "error",
                                f"expected schema {SCHEMA_VERSION}, got {schema!r}"))
    pipeline = cfg.get("pipeline")
    if pipeline not in PIPELINES:
        findings.append(Finding("/pipeline", "error",
                                f"must be one of {PIPELINES}, got {pipeline!r}"))
    if "seed" not in cfg:
        findings.append(Finding("/seed", "error",
                                "missing; reproducibility requires a seed"))
    else:
        _num(cfg, "seed", "", findings, lo=0, integer=True)

    for key in cfg:
        if key not in KNOWN_KEYS:
            findings.append(Finding(f"/{key}", "warning", "unknown key, ignored"))

    if pipeline in REQUIRED_SECTIONS:
        for sec in REQUIRED_SECTIONS[pipeline]:
            if sec not in cfg:
                findings.append(Finding(f"/{sec}", "error",
                                        f"required by pipeline {pipeline}"))

    _validate_source(cfg, findings)
    _validate_channel(cfg, findings)

    if "exposure" in cfg:
        e = _num(cfg, "exposure", "", findings)
        if isinstance(e, numbers.Real) and e <= 0:
            findings.append(Finding("/exposure", "error", "must be > 0"))

    sec = _section(cfg, "comb", findings)
    if sec is not None:
        _validate_comb(sec, "/comb", findings)
    sec = _section(cfg, "pulse", findings)
    if sec is not None:
        _num(sec, "fwhm", "/pulse", findings, lo=0.0)
        _num(sec, "center_freq", "/pulse", findings, required=False)
    sec = _section(cfg, "pump", findings)
    if sec is not None:
        _validate_pump(sec, "/pump", findings)
    sec = _section(cfg, "sweep", findings)
    if sec is not None:
        for key in ("finesses", "depths"):
            vals = sec.get(key)
            if vals is not None and (not isinstance(vals, list) or not vals):
                findings.append(Finding(f"/sweep/{key}", "error",
                                        "must be a non-empty list"))
    sec = _section(cfg, "scan", findings)
    if sec is not None:
        _num(sec, "l_max", "/scan", findings, lo=1, integer=True)
        _num(sec, "w0", "/scan", findings, lo=0.0)
        _num(sec, "finesse", "/scan", findings, required=False)
        if "sigma_theta" in sec:
            _num(sec, "sigma_theta", "/scan", findings, lo=0.0)
        elif "calibrate" in sec:
            cal = sec["calibrate"]
            if not isinstance(cal, dict):
                findings.append(Finding("/scan/calibrate", "error",
                                        "must be an object with l and V"))
            else:
                _num(cal, "l", "/scan/calibrate", findings, lo=1, integer=True)
                v = _num(cal, "V", "/scan/calibrate", findings)
                if isinstance(v, numbers.Real) and not 0 < v <= 1:
                    findings.append(Finding("/scan/calibrate/V", "error",
                                            "must lie in (0, 1]"))
        else:
            findings.append(Finding("/scan", "error",
                                    "needs sigma_theta or a calibrate block"))
    sec = _section(cfg, "bell", findings)
    if sec is not None:
        _num(sec, "restarts", "/bell", findings, lo=1, required=False, integer=True)
        _num(sec, "exposure", "/bell", findings, lo=0.0, required=False)
    sec = _section(cfg, "process", findings)
    if sec is not None:
        _num(sec, "analyzer_depolarizing", "/process", findings,
             lo=0.0, hi=1.0, required=False)
    sec = _section(cfg, "capacity", findings)
    if sec is not None:
        _num(sec, "bandwidth", "/capacity", findings, lo=0.0)
        _num(sec, "tooth_fwhm", "/capacity", findings, lo=0.0)
        _num(sec, "spectral_bw", "/capacity", findings, lo=0.0)
        _num(sec, "spatial_modes", "/capacity", findings, lo=1, integer=True)

    return findings


def has_errors(findings):
    return any(f.level == "error" for f in findings)
