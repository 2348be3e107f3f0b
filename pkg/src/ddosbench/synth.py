"""Seeded synthetic flow generators.

Three generators with known structure:

* ``gen_blobs`` - two well separated volumetric profiles (linearly separable
  at moderate noise).
* ``gen_xor`` - two +-1 features whose label is the XOR of their signs; no
  single feature carries any information about the label.
* ``gen_iot_mix`` - overlapping classes, each a mixture of traffic profiles,
  so that the packet-size/duration interaction matters and nothing is
  perfectly separable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .flowdata import Dataset, FeatureMatrix, FlowRecord

BENIGN_CENTER = {"pkt_size_mean": 512.0, "pkt_rate": 50.0, "duration": 30.0}
DDOS_CENTER = {"pkt_size_mean": 100.0, "pkt_rate": 5000.0, "duration": 2.0}


@dataclass(frozen=True)
class SynthConfig:
    n_rows: int = 1000
    attack_fraction: float = 0.5
    seed: int = 0
    noise_sigma: float = 1.0

    def __post_init__(self):
        if self.n_rows < 4:
            raise ValueError(f"n_rows must be >= 4, got {self.n_rows}")
        if not 0.0 < self.attack_fraction < 1.0:
            raise ValueError(
                f"attack_fraction must be in (0, 1), got {self.attack_fraction}")
        if not self.noise_sigma >= 0.0:
            raise ValueError(f"noise_sigma must be >= 0, got {self.noise_sigma}")

    @property
    def n_attack(self) -> int:
        return int(math.floor(self.n_rows * self.attack_fraction + 0.5))


def _labels(cfg: SynthConfig, rng: np.random.Generator) -> np.ndarray:
    labels = np.zeros(cfg.n_rows, dtype=np.int64)
    labels[:cfg.n_attack] = 1
    return rng.permutation(labels)


def _records(size, rate, dur, proto, labels, name) -> Dataset:
    recs = tuple(
        FlowRecord(float(s), float(r), float(d), str(p), int(y))
        for s, r, d, p, y in zip(size, rate, dur, proto, labels)
    )
    return Dataset(recs, name)


def gen_blobs(cfg: SynthConfig) -> Dataset:
    rng = np.random.default_rng(cfg.seed)
    labels = _labels(cfg, rng)
    is_ddos = labels == 1
    cols = {}
    for name in ("pkt_size_mean", "pkt_rate", "duration"):
        center = np.where(is_ddos, DDOS_CENTER[name], BENIGN_CENTER[name])
        sigma = cfg.noise_sigma * center * 0.1
        cols[name] = np.maximum(center + sigma * rng.standard_normal(cfg.n_rows), 0.0)
    # benign mostly TCP, ddos mostly UDP
    majority = rng.random(cfg.n_rows) < 0.8
    proto = np.where(is_ddos == majority, "UDP", "TCP")
    return _records(cols["pkt_size_mean"], cols["pkt_rate"], cols["duration"],
                    proto, labels, f"blobs(seed={cfg.seed})")


def gen_xor(cfg: SynthConfig) -> FeatureMatrix:
    """XOR of two signs plus Gaussian noise with std ``noise_sigma``.

    Positives alternate between the (+,-) and (-,+) quadrants and negatives
    between (+,+) and (-,-), so every quadrant is equally populated when the
    classes are balanced.
    """
    rng = np.random.default_rng(cfg.seed)
    labels = _labels(cfg, rng)
    signs = np.empty((cfg.n_rows, 2))
    pos_quadrants = np.array([[1.0, -1.0], [-1.0, 1.0]])
    neg_quadrants = np.array([[1.0, 1.0], [-1.0, -1.0]])
    pos = np.flatnonzero(labels == 1)
    neg = np.flatnonzero(labels == 0)
    signs[pos] = pos_quadrants[np.arange(len(pos)) % 2]
    signs[neg] = neg_quadrants[np.arange(len(neg)) % 2]
    values = signs + cfg.noise_sigma * rng.standard_normal(signs.shape)
    return FeatureMatrix(values, ("x1", "x2"), labels)


# (weight, pkt_size_mean, duration) per traffic profile
_BENIGN_PROFILES = ((0.5, 1100.0, 40.0),   # bulk transfer / streaming
                    (0.5, 300.0, 8.0))     # short telemetry bursts
_DDOS_PROFILES = ((0.65, 300.0, 40.0),     # slow, long-lived floods
                  (0.35, 1100.0, 8.0))     # short amplification bursts
_MIX_RATE_CENTER = (900.0, 1100.0)         # benign, ddos
_MIX_RATE_SIGMA = 100.0
_MIX_PROFILE_SPREAD = 0.35
_MIX_PROTOCOLS = ("TCP", "UDP", "ICMP", "OTHER")
_MIX_PROTO_P = ((0.70, 0.20, 0.05, 0.05), (0.35, 0.45, 0.15, 0.05))


def gen_iot_mix(cfg: SynthConfig) -> Dataset:
    """Overlapping benign/ddos traffic.

    Packet rate alone separates the classes with centers two noise-sigmas
    apart. Packet size and duration follow per-class profile mixtures whose
    marginals overlap heavily; the informative signal is in their joint
    placement, which a per-feature independent model cannot see.
    """
    rng = np.random.default_rng(cfg.seed)
    labels = _labels(cfg, rng)
    n = cfg.n_rows
    size = np.empty(n)
    dur = np.empty(n)
    u_profile = rng.random(n)
    z = rng.standard_normal((n, 3))
    u_proto = rng.random(n)
    proto = np.empty(n, dtype=object)
    for cls, profiles in ((0, _BENIGN_PROFILES), (1, _DDOS_PROFILES)):
        rows = labels == cls
        edges = np.cumsum([w for w, _, _ in profiles])
        pick = np.minimum(np.searchsorted(edges, u_profile[rows], side="right"),
                          len(profiles) - 1)
        centers = np.array([(s, d) for _, s, d in profiles])[pick]
        spread = cfg.noise_sigma * _MIX_PROFILE_SPREAD * centers
        size[rows] = centers[:, 0] + spread[:, 0] * z[rows, 0]
        dur[rows] = centers[:, 1] + spread[:, 1] * z[rows, 1]
        proto_edges = np.cumsum(_MIX_PROTO_P[cls])
        proto_pick = np.minimum(np.searchsorted(proto_edges, u_proto[rows], side="right"),
                                len(_MIX_PROTOCOLS) - 1)
        proto[rows] = np.array(_MIX_PROTOCOLS, dtype=object)[proto_pick]
    rate_center = np.where(labels == 1, _MIX_RATE_CENTER[1], _MIX_RATE_CENTER[0])
    rate = rate_center + cfg.noise_sigma * _MIX_RATE_SIGMA * z[:, 2]
    return _records(np.maximum(size, 0.0), np.maximum(rate, 0.0),
                    np.maximum(dur, 0.0), proto, labels,
                    f"iot_mix(seed={cfg.seed})")


GENERATORS = {"blobs": gen_blobs, "xor": gen_xor, "iotmix": gen_iot_mix}
