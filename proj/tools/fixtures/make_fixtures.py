#!/usr/bin/env python3
"""Regenerates the committed test fixtures under tests/fixtures/ from data/.

Run from the repository root:  python3 tools/fixtures/make_fixtures.py
Output is deterministic; rerunning must not change any committed file.
"""
import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2]
DATA = ROOT / "data"
OUT = ROOT / "tests" / "fixtures"

CATEGORIES = ["Anger", "Boredom", "Disgust", "Fear", "Happiness", "Neutral", "Sadness"]
CODES = {"Anger": "W", "Boredom": "L", "Disgust": "E", "Fear": "A",
         "Happiness": "F", "Neutral": "N", "Sadness": "T"}
TEXT_CODES = ["a01", "a02", "a04", "a05", "a07", "b01", "b02", "b03", "b09", "b10"]

# Matched count per category: n * published match rate, rounded.
MATCHED = {"Neutral": 52, "Sadness": 22, "Happiness": 21, "Anger": 37,
           "Fear": 19, "Boredom": 10, "Disgust": 0}
AVG_CONF = {"Neutral": 0.83, "Sadness": 0.80, "Happiness": 0.83, "Anger": 0.86,
            "Fear": 0.77, "Boredom": 0.81, "Disgust": 0.81}
MATCH_LABELS = {
    "Anger": ["Wut", "Verärgerung", "Ärger"],
    "Boredom": ["Langeweile"],
    "Disgust": ["Ekel"],
    "Fear": ["Angst", "Furcht"],
    "Happiness": ["Freude", "Begeisterung"],
    "Neutral": ["Sachlichkeit", "Neutral", "Ruhe"],
    "Sadness": ["Trauer", "Traurigkeit"],
}
MISS_LABELS = {
    "Anger": ["Entschlossenheit", "Aufregung", "Freude"],
    "Boredom": ["Sachlichkeit", "Ruhe", "Müdigkeit"],
    "Disgust": ["Verärgerung", "Verachtung", "Resignation"],
    "Fear": ["Verärgerung", "Traurigkeit", "Nervosität"],
    "Happiness": ["Überraschung", "Verärgerung", "Sachlichkeit"],
    "Neutral": ["Nachdenklichkeit", "Langeweile", "Traurigkeit"],
    "Sadness": ["Sachlichkeit", "Resignation", "Müdigkeit"],
}
AV = {"Anger": (0.8, -0.7), "Boredom": (-0.5, -0.2), "Disgust": (0.4, -0.7),
      "Fear": (0.7, -0.6), "Happiness": (0.7, 0.8), "Neutral": (0.0, 0.0),
      "Sadness": (-0.4, -0.7)}


def dump(path, obj):
    path.write_text(json.dumps(obj, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")


def emodb():
    table6 = json.loads((DATA / "table6_counts.json").read_text())
    by_cat = {c: [] for c in CATEGORIES}
    for row in table6["speakers"]:
        for cat in CATEGORIES:
            for j in range(row["counts"][cat]):
                name = f"{row['speaker']}{TEXT_CODES[j % 10]}{CODES[cat]}{'abcdef'[j // 10]}.wav"
                by_cat[cat].append(name)
    names = sorted(n for v in by_cat.values() for n in v)
    (OUT / "emodb_manifest.txt").write_text("\n".join(names) + "\n")

    annotations = {}
    for cat, files in by_cat.items():
        files = sorted(files)
        conf = AVG_CONF[cat]
        for k, name in enumerate(files):
            matched = k < MATCHED[cat]
            labels = MATCH_LABELS[cat] if matched else MISS_LABELS[cat]
            label = labels[k % len(labels)]
            # alternate +/-0.05 around the category mean; an odd tail sits on it
            if k == len(files) - 1 and len(files) % 2 == 1:
                c = conf
            else:
                c = conf + (0.05 if k % 2 == 0 else -0.05)
            a, v = AV[cat]
            annotations[name[:-4]] = {
                "primary_emotion": label,
                "secondary_emotion": None,
                "arousal": a,
                "valence": v,
                "rhetorical_function": "keines",
                "confidence": round(c, 2),
            }
    dump(OUT / "emodb_table2_annotations.json",
         {"annotations": dict(sorted(annotations.items()))})


def banaszak():
    rows = {r["segment_id"]: r for r in json.loads((DATA / "appendix_b.json").read_text())}
    segments, trust, llm = [], {}, {}
    for i in range(51):
        sid = f"s{i:04d}"
        row = rows.get(sid)
        segments.append({
            "segment_id": sid, "start_s": float(i), "end_s": float(i + 1),
            "transcript": row["transcript"] if row else "[transcript not published]",
            "e2v_probs": None, "e2v_point": None, "llm_annotation": None,
            "pathos": None, "relevant": True,
        })
        trust[sid] = {"pathos": row["pathos"] if row else None, "relevant": row is not None}
        if row:
            llm[sid] = row["llm_annotation"]
    dump(OUT / "banaszak_segments51.json", segments)
    dump(OUT / "banaszak_trust51.json", trust)
    dump(OUT / "banaszak_llm41.json", {"annotations": llm})


def e2v_sample():
    rng = random.Random(20260305)
    classes = ["angry", "disgusted", "fearful", "happy", "neutral", "other", "sad", "surprised"]
    out = {"_meta": {"model_id": "emotion2vec_plus_large", "model_version": "sample"}}
    for i in range(3, 9):
        raw = [rng.gammavariate(0.6, 1.0) for _ in classes]
        total = sum(raw)
        probs = [round(x / total, 9) for x in raw]
        probs[-1] = round(1.0 - sum(probs[:-1]), 9)
        out[f"s{i:04d}"] = dict(zip(classes, probs))
    dump(OUT / "e2v_probs_sample.json", out)


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    emodb()
    banaszak()
    e2v_sample()
