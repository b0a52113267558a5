#!/usr/bin/env python3
# tools/make_fixture.py
#
# Copyright 2026 The lcmeval Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the small synthetic campaign used by the tests.

Two directions, twelve segments each, three systems, two length ratios and
three annotators. Each system has a hidden quality level; hypotheses keep a
ratio-sized prefix of the reference with quality-dependent token noise, and
human ratings and external metric scores are noisy views of the per-cell
quality, so every metric correlates positively with the humans.
"""

import argparse
import json
import pathlib
import random

DIRECTIONS = ["en-zh", "zh-en"]
RATIOS = [0.8, 0.5]
SYSTEMS = ["length-emb", "target-emb", "trans-sum"]
ANNOTATORS = 3
TRAPS_PER_ANNOTATOR = 4
SEGMENTS = 12
SEED = 20221015

EN_WORDS = ("the a model system length output source target short long text meaning main content keeps "
            "translation control result word token sentence paper shows method data test fast slow good "
            "small large first last many few each every simple").split()
ZH_CHARS = list("我们的模型翻译长度控制输出文本内容主要信息保持句子方法数据测试结果系统简单大小快慢好")
SYSTEM_QUALITY = {"length-emb": 0.85, "target-emb": 0.75, "trans-sum": 0.55}


def target_is_cjk(direction):
    return direction.endswith("-zh")


def make_reference(rng, cjk):
    n = rng.randint(14, 24)
    if cjk:
        return "".join(rng.choice(ZH_CHARS) for _ in range(n))
    return " ".join(rng.choice(EN_WORDS) for _ in range(n))


def make_source(rng, cjk_source):
    return make_reference(rng, cjk_source)


def tokens(text, cjk):
    return list(text) if cjk else text.split()


def join(toks, cjk):
    return "".join(toks) if cjk else " ".join(toks)


def make_hypothesis(rng, reference, cjk, ratio, quality):
    ref = tokens(reference, cjk)
    keep = max(1, int(round(ratio * len(ref) + rng.uniform(-1.5, 1.5) * (1.0 - quality))))
    vocab = ZH_CHARS if cjk else EN_WORDS
    out = []
    for tok in ref[:keep]:
        out.append(tok if rng.random() < quality else rng.choice(vocab))
    return join(out, cjk), sum(1 for a, b in zip(out, ref) if a == b) / len(ref)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("out_dir", type=pathlib.Path)
    args = parser.parse_args()
    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)

    segments = []
    for direction in DIRECTIONS:
        prefix = direction.replace("-", "")
        for i in range(SEGMENTS):
            cjk = target_is_cjk(direction)
            segments.append({
                "seg_id": f"{prefix}-{i + 1:03d}",
                "direction": direction,
                "source_text": make_source(rng, not cjk),
                "reference_text": make_reference(rng, cjk),
            })

    hypotheses = []
    quality = {}
    for seg in segments:
        cjk = target_is_cjk(seg["direction"])
        for ratio in RATIOS:
            for system in SYSTEMS:
                q = min(1.0, max(0.05, SYSTEM_QUALITY[system] + rng.gauss(0.0, 0.12)))
                text, overlap = make_hypothesis(rng, seg["reference_text"], cjk, ratio, q)
                quality[(seg["direction"], ratio, system, seg["seg_id"])] = 0.5 * q + 0.5 * overlap / ratio
                hypotheses.append({
                    "system_id": system,
                    "seg_id": seg["seg_id"],
                    "direction": seg["direction"],
                    "length_ratio": ratio,
                    "text": text,
                })

    rows = ["annotator,seg_id,system,ratio,score,duration_s,is_trap,direction"]
    for direction in DIRECTIONS:
        seg_ids = [s["seg_id"] for s in segments if s["direction"] == direction]
        for ratio in RATIOS:
            trap_segs = rng.sample(seg_ids, TRAPS_PER_ANNOTATOR)
            for a in range(ANNOTATORS):
                annotator = f"{direction}-ann{a + 1}"
                bias = rng.uniform(-8.0, 8.0)
                scale = rng.uniform(0.8, 1.2)
                for seg_id in seg_ids:
                    for system in SYSTEMS:
                        q = quality[(direction, ratio, system, seg_id)]
                        score = round(max(0.0, min(100.0, 100.0 * q * scale + bias + rng.gauss(0.0, 9.0))))
                        duration = round(rng.uniform(15.0, 160.0) if rng.random() > 0.03 else rng.uniform(650, 900), 1)
                        rows.append(f"{annotator},{seg_id},{system},{ratio},{score},{duration},0,{direction}")
                for seg_id in trap_segs:
                    score = 0 if rng.random() < 0.7 else rng.randint(1, 35)
                    duration = round(rng.uniform(5.0, 60.0), 1)
                    rows.append(f"{annotator},{seg_id},trap,{ratio},{score},{duration},1,{direction}")

    score_lines = {}
    external = {
        ("COMET.wmt20-comet-da", ""): 0.10,
        ("BLEURT", ""): 0.08,
        ("BERTScore.bert-base-multilingual-cased", "L8-P"): 0.20,
        ("BERTScore.bert-base-multilingual-cased", "L8-R"): 0.06,
        ("BERTScore.bert-base-multilingual-cased", "L8-F1"): 0.12,
    }
    for direction in DIRECTIONS:
        for ratio in RATIOS:
            label = f"{direction}_{ratio}"
            lines = ["metric\tvariant\tsystem\tseg_id\tscore"]
            for (metric, variant), noise in external.items():
                for seg in segments:
                    if seg["direction"] != direction:
                        continue
                    for system in SYSTEMS:
                        q = quality[(direction, ratio, system, seg["seg_id"])]
                        lines.append(f"{metric}\t{variant}\t{system}\t{seg['seg_id']}\t{q + rng.gauss(0.0, noise):.6f}")
            score_lines[label] = lines

    with open(out / "segments.jsonl", "w", encoding="utf-8", newline="\n") as f:
        for s in segments:
            f.write(json.dumps(s, ensure_ascii=False) + "\n")
    with open(out / "hypotheses.jsonl", "w", encoding="utf-8", newline="\n") as f:
        for h in hypotheses:
            f.write(json.dumps(h, ensure_ascii=False) + "\n")
    (out / "ratings.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    conf = [
        "# synthetic fixture campaign",
        "directions = " + ", ".join(DIRECTIONS),
        "ratios = " + ", ".join(str(r) for r in RATIOS),
        "systems = " + ", ".join(SYSTEMS),
        f"annotators_per_task = {ANNOTATORS}",
        f"traps_per_annotator = {TRAPS_PER_ANNOTATOR}",
        "length_unit = characters",
        "seed = 42",
        "segments = segments.jsonl",
        "hypotheses = hypotheses.jsonl",
        "ratings = ratings.csv",
    ]
    for label, lines in score_lines.items():
        (out / f"scores_{label}.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
        direction, ratio = label.split("_")
        conf.append(f"scores = {direction}:{ratio}:scores_{label}.tsv")
    (out / "campaign.conf").write_text("\n".join(conf) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
