"""Synthetic split generation for NSL-KDD and UNSW-NB15.

The real datasets cannot be redistributed with this package, so the test
suite (and any quick demo) runs on synthetic splits that are faithful to the
originals where the pipeline cares: file formats (headerless + trailing
difficulty column for NSL-KDD, header + id column for UNSW-NB15), raw label
vocabulary, per-class counts of the published dataset statistics table, a
constant feature, missing cells, the literal ``-`` service value, and
categories that appear only in the test split.

Feature values are class-conditional so trained models have signal. Scales
are chosen to respect the codec's round-trip tolerance: a feature either
stays small (|mean| <= ~8) or is bounded away from zero (floor >= mean/80),
which keeps the float32 quantization error within rel 1e-5 + abs 1e-6.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pandas as pd

from flow2img.ingest import TABLE1
from flow2img.schema import _NSL_GROUPS, builtin_schema

SPIKE_RATE = 5e-4  # class-independent huge outliers that stretch min-max


def _heavy(rng, n, mean, floor=20.0, spike_hi=1.0e6):
    """Positive heavy-tailed values with a hard floor and rare large spikes."""
    base = floor + rng.lognormal(mean=math.log(mean), sigma=0.8, size=n)
    spikes = rng.random(n) < SPIKE_RATE
    base[spikes] += rng.uniform(spike_hi / 2, spike_hi, size=spikes.sum())
    return base


def _interleave(rng, per_class_rows):
    """Concatenates per-class row dicts and shuffles them into one order."""
    order = rng.permutation(sum(len(v["__label__"]) for v in per_class_rows))
    merged = {
        key: np.concatenate([rows[key] for rows in per_class_rows])
        for key in per_class_rows[0]
    }
    return {key: arr[order] for key, arr in merged.items()}


def _sprinkle_missing(rng, df, columns, rate=1e-3):
    for col in columns:
        mask = rng.random(len(df)) < rate
        df[col] = df[col].astype(object)
        df.loc[mask, col] = ""


# ---------------------------------------------------------------- NSL-KDD

_NSL_SERVICES = [
    "http", "smtp", "ftp", "ftp_data", "telnet", "domain_u", "private",
    "pop_3", "ssh", "finger", "eco_i", "ecr_i", "imap4", "irc", "auth",
    "other", "time", "whois", "X11", "domain",
]
_NSL_TEST_ONLY_SERVICES = ["aol", "harvest", "urh_i"]
_NSL_FLAGS = ["SF", "S0", "REJ", "RSTR", "RSTO", "SH", "S1", "S2", "S3", "OTH"]

# per-class: (protocol probs over tcp/udp/icmp, duration hi, bytes mean,
#             count lambda, error-rate beta a/b)
_NSL_CLASS_PARAMS = {
    0: ((0.70, 0.25, 0.05), 12.0, 150.0, 4.0, (1, 12)),  # Normal
    1: ((0.90, 0.05, 0.05), 6.0, 320.0, 2.0, (2, 8)),    # R2L
    2: ((0.45, 0.20, 0.35), 1.0, 60.0, 8.0, (4, 6)),     # Probe
    3: ((0.80, 0.05, 0.15), 0.5, 600.0, 8.0, (8, 2)),    # DoS
    4: ((0.95, 0.03, 0.02), 8.0, 250.0, 2.0, (2, 10)),   # U2R
}


def _nsl_labels_for_class(cls_name: str, count: int, split: str) -> np.ndarray:
    if cls_name == "Normal":
        return np.full(count, "normal", dtype=object)
    names = list(_NSL_GROUPS[cls_name])
    if split == "train":
        # test-only attack names stay out of the training split
        test_only = {"apache2", "processtable", "udpstorm", "mailbomb", "worm",
                     "mscan", "saint", "sendmail", "named", "snmpgetattack",
                     "snmpguess", "xlock", "xsnoop", "httptunnel", "ps",
                     "sqlattack", "xterm"}
        names = [n for n in names if n not in test_only] or names[:1]
    return np.array([names[i % len(names)] for i in range(count)], dtype=object)


def _nsl_class_rows(rng, k, cls_name, count, split):
    proto_p, dur_hi, bytes_mean, lam, (beta_a, beta_b) = _NSL_CLASS_PARAMS[k]
    services = _NSL_SERVICES + (_NSL_TEST_ONLY_SERVICES if split == "test" else [])
    rows = {
        "duration": rng.uniform(0, dur_hi, count).round(2),
        "protocol_type": rng.choice(["tcp", "udp", "icmp"], size=count, p=proto_p),
        "service": rng.choice(services, size=count),
        "flag": rng.choice(_NSL_FLAGS, size=count),
        "src_bytes": _heavy(rng, count, bytes_mean).round(0),
        "dst_bytes": _heavy(rng, count, bytes_mean * 0.6).round(0),
        "land": rng.binomial(1, 0.01 if k == 0 else 0.03, count),
        "wrong_fragment": rng.binomial(2, 0.01, count),
        "urgent": rng.binomial(1, 0.005, count),
        "hot": rng.poisson(0.2 if k == 0 else 0.8, count),
        "num_failed_logins": rng.poisson(0.05 if k != 1 else 1.0, count),
        "logged_in": rng.binomial(1, 0.7 if k == 0 else 0.3, count),
        "num_compromised": rng.poisson(0.02 if k == 0 else 0.3, count),
        "root_shell": rng.binomial(1, 0.3 if k == 4 else 0.01, count),
        "su_attempted": rng.binomial(1, 0.2 if k == 4 else 0.005, count),
        "num_root": rng.poisson(1.0 if k == 4 else 0.05, count),
        "num_file_creations": rng.poisson(0.1, count),
        "num_shells": rng.binomial(1, 0.1 if k == 4 else 0.005, count),
        "num_access_files": rng.poisson(0.05, count),
        "num_outbound_cmds": np.zeros(count, dtype=np.int64),  # constant, as in the real files
        "is_host_login": rng.binomial(1, 0.001, count),
        "is_guest_login": rng.binomial(1, 0.15 if k == 1 else 0.01, count),
        "count": rng.poisson(lam, count),
        "srv_count": rng.poisson(lam * 0.7, count),
        "label": _nsl_labels_for_class(cls_name, count, split),
        "difficulty": rng.integers(0, 22, count),
    }
    for name in [
        "serror_rate", "srv_serror_rate", "rerror_rate", "srv_rerror_rate",
        "same_srv_rate", "diff_srv_rate", "srv_diff_host_rate",
    ]:
        rows[name] = rng.beta(beta_a, beta_b, count).round(4)
    # floor of 20 keeps these large-mean counts inside the round-trip bound
    rows["dst_host_count"] = rng.integers(20, 256, count)
    rows["dst_host_srv_count"] = rng.integers(20, 256, count)
    for name in [
        "dst_host_same_srv_rate", "dst_host_diff_srv_rate",
        "dst_host_same_src_port_rate", "dst_host_srv_diff_host_rate",
        "dst_host_serror_rate", "dst_host_srv_serror_rate",
        "dst_host_rerror_rate", "dst_host_srv_rerror_rate",
    ]:
        rows[name] = rng.beta(beta_a, beta_b, count).round(4)
    rows["__label__"] = rows["label"]
    return rows


def make_nslkdd(out_dir: str | Path, seed: int = 7, scale: float = 1.0) -> dict[str, Path]:
    """Writes KDDTrain.csv / KDDTest.csv (headerless) into out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    schema = builtin_schema("nslkdd")
    columns = schema.file_columns()
    class_names = ("Normal", "R2L", "Probe", "DoS", "U2R")
    paths = {}
    for si, split in enumerate(("train", "test")):
        rng = np.random.default_rng([seed, si])
        per_class = []
        for k, cls in enumerate(class_names):
            count = max(1, round(TABLE1["nslkdd"][cls][si] * scale))
            per_class.append(_nsl_class_rows(rng, k, cls, count, split))
        merged = _interleave(rng, per_class)
        merged.pop("__label__")
        df = pd.DataFrame({c: merged[c] for c in columns})
        _sprinkle_missing(rng, df, ["hot", "num_compromised"])
        path = out_dir / f"KDD{split.capitalize()}.csv"
        df.to_csv(path, index=False, header=False, float_format="%.10g")
        paths[split] = path
    return paths


# --------------------------------------------------------------- UNSW-NB15

_UNSW_PROTOS = ["tcp", "udp", "arp", "ospf", "icmp", "igmp", "rtp", "sctp"]
_UNSW_SERVICES = ["-", "http", "dns", "smtp", "ftp", "ftp-data", "ssh", "pop3"]
_UNSW_TEST_ONLY_SERVICES = ["irc", "radius"]
_UNSW_STATES = ["FIN", "INT", "CON", "REQ", "RST", "ACC", "CLO"]

# per-class means for the heavy signal features (sbytes, dbytes, sload,
# dload) and per-class beta shapes for the clean moderate-signal features.
# The clean features share one support across classes so only distribution
# shape separates them; the heavy features separate strongly but their
# global scale is dominated by the rare spikes.
# Normal, DoS, Reconnaissance, Shellcode, Worms
_UNSW_HEAVY_MEANS = (50.0, 1500.0, 750.0, 400.0, 1100.0)
_UNSW_CLEAN_BETA = ((2.0, 5.0), (3.6, 3.4), (3.2, 3.8), (2.9, 4.1), (3.9, 3.1))
_UNSW_CLEAN_SCALE = 8.0
_UNSW_SERVICE_P = (
    (0.30, 0.35, 0.15, 0.08, 0.05, 0.03, 0.02, 0.02),
    (0.60, 0.15, 0.05, 0.05, 0.05, 0.04, 0.03, 0.03),
    (0.55, 0.10, 0.20, 0.03, 0.05, 0.03, 0.02, 0.02),
    (0.70, 0.05, 0.05, 0.05, 0.05, 0.04, 0.03, 0.03),
    (0.40, 0.30, 0.05, 0.10, 0.05, 0.04, 0.03, 0.03),
)

_UNSW_CLEAN_FEATURES = ["rate", "sinpkt", "dinpkt", "sjit", "djit", "tcprtt"]
_UNSW_HEAVY_FEATURES = ["sbytes", "dbytes", "sload", "dload"]


def _unsw_class_rows(rng, k, cls_name, count, split):
    services = _UNSW_SERVICES + (_UNSW_TEST_ONLY_SERVICES if split == "test" else [])
    service_p = _UNSW_SERVICE_P[k] + ((0.0,) * len(_UNSW_TEST_ONLY_SERVICES) if split == "test" else ())
    if split == "test":
        # shave a little mass onto the test-only services
        service_p = np.array(service_p)
        service_p[-2:] = 0.01
        service_p[:8] *= (1 - 0.02) / service_p[:8].sum()
    rows = {
        "dur": rng.uniform(0, 6, count).round(4),
        "proto": rng.choice(_UNSW_PROTOS, size=count),
        "service": rng.choice(services, size=count, p=np.asarray(service_p)),
        "state": rng.choice(_UNSW_STATES, size=count),
        "spkts": rng.poisson(6, count),
        "dpkts": rng.poisson(4, count),
        "sttl": rng.choice([31, 62, 63, 254, 255], size=count),
        "dttl": rng.choice([20, 29, 60, 252, 253], size=count),
        "sloss": rng.poisson(0.5, count),
        "dloss": rng.poisson(0.4, count),
        "swin": rng.choice([0, 8], size=count),
        "stcpb": rng.uniform(0, 8, count).round(3),
        "dtcpb": rng.uniform(0, 8, count).round(3),
        "dwin": rng.choice([0, 8], size=count),
        "synack": rng.uniform(0, 2, count).round(5),
        "ackdat": rng.uniform(0, 2, count).round(5),
        "smean": 20 + rng.uniform(0, 200, count).round(1),
        "dmean": 20 + rng.uniform(0, 200, count).round(1),
        "trans_depth": rng.poisson(0.3, count),
        "response_body_len": _heavy(rng, count, 60.0).round(0),
        "ct_srv_src": rng.poisson(5, count),
        "ct_state_ttl": rng.integers(0, 7, count),
        "ct_dst_ltm": rng.poisson(4, count),
        "ct_src_dport_ltm": rng.poisson(3, count),
        "ct_dst_sport_ltm": rng.poisson(3, count),
        "ct_dst_src_ltm": rng.poisson(4, count),
        "is_ftp_login": rng.binomial(1, 0.05, count).astype(str),
        "ct_ftp_cmd": rng.poisson(0.1, count),
        "ct_flw_http_mthd": rng.poisson(0.4, count),
        "ct_src_ltm": rng.poisson(4, count),
        "ct_srv_dst": rng.poisson(5, count),
        "is_sm_ips_ports": rng.binomial(1, 0.02 if k == 0 else 0.1, count).astype(str),
        "attack_cat": np.full(count, cls_name, dtype=object),
        "label": np.full(count, 0 if cls_name == "Normal" else 1, dtype=np.int64),
    }
    for name in _UNSW_HEAVY_FEATURES:
        rows[name] = _heavy(rng, count, _UNSW_HEAVY_MEANS[k]).round(2)
    beta_a, beta_b = _UNSW_CLEAN_BETA[k]
    for name in _UNSW_CLEAN_FEATURES:
        rows[name] = (_UNSW_CLEAN_SCALE * rng.beta(beta_a, beta_b, count)).round(4)
    rows["__label__"] = rows["attack_cat"]
    return rows


def make_unsw(
    out_dir: str | Path,
    seed: int = 11,
    scale: float = 1.0,
    extra_dropped: int = 0,
) -> dict[str, Path]:
    """Writes UNSW_NB15_training-set.csv / UNSW_NB15_testing-set.csv.

    ``extra_dropped`` adds that many rows with out-of-scheme attack
    categories (Exploits/Fuzzers/Generic) to each split, exercising the
    multi-class drop path; the default keeps splits at the published counts
    exactly.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    schema = builtin_schema("unswnb15")
    class_names = ("Normal", "DoS", "Reconnaissance", "Shellcode", "Worms")
    paths = {}
    for si, split in enumerate(("train", "test")):
        rng = np.random.default_rng([seed, si])
        per_class = []
        for k, cls in enumerate(class_names):
            count = max(1, round(TABLE1["unswnb15"][cls][si] * scale))
            per_class.append(_unsw_class_rows(rng, k, cls, count, split))
        if extra_dropped:
            dropped = _unsw_class_rows(rng, 1, "DoS", extra_dropped, split)
            cats = rng.choice(["Exploits", "Fuzzers", "Generic"], size=extra_dropped)
            dropped["attack_cat"] = cats.astype(object)
            dropped["__label__"] = dropped["attack_cat"]
            per_class.append(dropped)
        merged = _interleave(rng, per_class)
        merged.pop("__label__")
        n = len(merged["dur"])
        df = pd.DataFrame({"id": np.arange(1, n + 1)})
        for f in schema.features:
            df[f.name] = merged[f.name]
        df["attack_cat"] = merged["attack_cat"]
        df["label"] = merged["label"]
        _sprinkle_missing(rng, df, ["sjit", "response_body_len"])
        name = "training-set" if split == "train" else "testing-set"
        path = out_dir / f"UNSW_NB15_{name}.csv"
        df.to_csv(path, index=False, float_format="%.10g")
        paths[split] = path
    return paths


def make_all(out_dir: str | Path, seed: int = 7, scale: float = 1.0) -> dict[str, Path]:
    out_dir = Path(out_dir)
    nsl = make_nslkdd(out_dir, seed=seed, scale=scale)
    unsw = make_unsw(out_dir, seed=seed + 4, scale=scale)
    return {
        "nslkdd_train": nsl["train"],
        "nslkdd_test": nsl["test"],
        "unswnb15_train": unsw["train"],
        "unswnb15_test": unsw["test"],
    }


if __name__ == "__main__":
    import sys

    target = sys.argv[1] if len(sys.argv) > 1 else "data/synth"
    for key, path in make_all(target).items():
        print(f"{key}: {path}")
