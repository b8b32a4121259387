"""Shipped experiment configurations.

Each preset is a complete, validated config for one pipeline. Physical
numbers are representative calibrations: the source mixing weight 0.30375
pins the pair-state fidelity at 0.730, the comb (F=2, d=3, square) pins
the echo efficiency near 0.20 at a 40 ns delay, the dephasing calibration
pins the mode-25 visibility at 0.952, and the analyzer depolarizing weight
0.03375 pins the no-memory process fidelity at 0.970.
"""
import copy

# isotropic admixture weight giving pair-state fidelity (1-v) + v/9 = 0.730
V_MIX = 0.30375
# analyzer depolarizing weight giving process fidelity 1 - 8p/9 = 0.970
ANALYZER_P = 0.03375

_SQRT3 = 3 ** 0.5
_SOURCE = {"c": [1.0, -1.0, 1.0], "v": V_MIX}

_PRESETS = {
    "entanglement-storage": {
        "schema": 1,
        "pipeline": "entanglement-storage",
        "seed": 20301,
        "source": dict(_SOURCE),
        "channel": {"eta": 0.2, "sigma_theta": 0.0, "delta": 25e6},
        "exposure": 1e6,
        "bell": {"restarts": 20, "refine": False},
        "comparison": {"negativity": 0.643, "S": 2.150,
                       "label": "measured reference values"},
    },
    "state-tomo": {
        "schema": 1,
        "pipeline": "state-tomo",
        "seed": 20302,
        "source": dict(_SOURCE),
        "exposure": 1e5,
    },
    "process-tomo": {
        "schema": 1,
        "pipeline": "process-tomo",
        "seed": 20303,
        "process": {
            "analyzer_depolarizing": ANALYZER_P,
            "memory": {"eta": 0.2, "sigma_theta": 0.0, "delta": 25e6},
        },
        "exposure": 1e6,
    },
    "bell-test": {
        "schema": 1,
        "pipeline": "bell",
        "seed": 20304,
        "source": dict(_SOURCE),
        "bell": {"restarts": 20, "refine": False, "exposure": 1e5},
    },
    "afc-echo": {
        "schema": 1,
        "pipeline": "afc-echo",
        "seed": 20305,
        "comb": {"delta": 25e6, "finesse": 2.0, "d": 3.0, "d0": 0.0,
                 "bandwidth": 1e9, "shape": "square", "span": 4e9},
        "pulse": {"fwhm": 1e-8, "center_freq": 0.0},
        "sweep": {"finesses": [2.0, 3.0, 5.0, 10.0],
                  "depths": [0.5, 1.0, 2.0, 3.0, 4.0],
                  "shapes": ["square", "gaussian"]},
    },
    "mode-scan": {
        "schema": 1,
        "pipeline": "mode-scan",
        "seed": 20306,
        "scan": {"l_max": 25, "w0": 1.0, "finesse": 2.0, "d0": 0.0,
                 "shape": "square", "calibrate": {"l": 25, "V": 0.952}},
        # waist at the outermost mode ring, moderate saturation: efficiency
        # falls off with |l|
        "pump": {"shape": "gaussian", "waist": 12.5 ** 0.5, "s0": 1.0,
                 "d_max": 3.0},
    },
    "mode-scan-balanced": {
        "schema": 1,
        "pipeline": "mode-scan",
        "seed": 20307,
        "scan": {"l_max": 25, "w0": 1.0, "finesse": 2.0, "d0": 0.0,
                 "shape": "square", "calibrate": {"l": 25, "V": 0.952}},
        # wide, saturated super-gaussian pump: every ring sees d_max
        "pump": {"shape": "super-gaussian", "waist": 6.0, "s0": 1e4,
                 "d_max": 3.0, "n": 8},
    },
    "capacity": {
        "schema": 1,
        "pipeline": "capacity",
        "seed": 20308,
        "capacity": {"bandwidth": 1e9, "tooth_fwhm": 12.5e6,
                     "spectral_bw": 100e6, "spatial_modes": 51},
    },
}

DESCRIPTIONS = {
    "entanglement-storage": "store the calibrated pair state, tomograph in/out, certify",
    "state-tomo": "tomography of the calibrated source alone",
    "process-tomo": "qutrit process matrices without/with the memory",
    "bell-test": "optimize Bell settings, then finite-statistics estimate",
    "afc-echo": "echo trace for the 40 ns comb plus the analytic sweep grid",
    "mode-scan": "visibility and efficiency per OAM mode, falling efficiency",
    "mode-scan-balanced": "mode scan with a saturated flat-top pump",
    "capacity": "temporal/spectral/spatial mode-count bookkeeping",
}


def preset_names():
    return tuple(_PRESETS)


def get_preset(name):
    if name not in _PRESETS:
        raise KeyError(f"unknown preset {name!r}; have {', '.join(_PRESETS)}")
    cfg = copy.deepcopy(_PRESETS[name])
    cfg["name"] = name
    return cfg
