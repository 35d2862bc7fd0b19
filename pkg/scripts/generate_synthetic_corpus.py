#!/usr/bin/env python3
"""
Script to generate a synthetic corpus for trying out xbow

Writes openSMILE-shaped descriptor files (name;frameTime;13 LLDs), label
files with one continuous label per window instant, and a two-class
tweet-like text corpus laid out for "-attributes ncr0".
"""

import argparse
import os
import sys
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from typing import List, Sequence
import numpy as np
from faker import Faker
from xbow.formats.common import atomic_write, csv_writer, format_number
from xbow.services.bagging_service import window_count, window_instant

LLD_DIMS = 13
FRAME_STEP = 0.01

POSITIVE_MARKERS = ['sunshine', 'delight', 'wonderful', 'cheers', 'grateful', 'brilliant']
NEGATIVE_MARKERS = ['gloomy', 'dreadful', 'furious', 'awful', 'miserable', 'disaster']


def generate_lld_rows(names: Sequence[str], duration: float, dims: int = LLD_DIMS,
                      frame_step: float = FRAME_STEP, seed: int = 0) -> List[List[str]]:
    """Frames every `frame_step` seconds from 0 to `duration` for every instance"""
    rng = np.random.default_rng(seed)
    frame_count = int(round(duration / frame_step)) + 1
    rows = []
    for name in names:
        times = np.round(np.arange(frame_count) * frame_step, 6)
        centre = rng.normal(scale=3.0, size=dims)
        drift = np.sin(np.outer(times, rng.uniform(0.1, 1.0, size=dims)))
        values = centre + drift + rng.normal(scale=0.5, size=(frame_count, dims))
        for time, vector in zip(times, values):
            rows.append([name, format_number(time)] + [format_number(round(v, 6)) for v in vector])
    return rows


def lld_header(dims: int = LLD_DIMS) -> List[str]:
    return ['name', 'frameTime'] + [f'pcm_fftMag_mfcc_sma[{i}]' for i in range(dims)]


def generate_window_labels(names: Sequence[str], duration: float, hop: float,
                           frame_step: float = FRAME_STEP, seed: int = 0) -> List[List[str]]:
    """A label in [-1, 1] at every window instant k*hop up to the last frame"""
    rng = np.random.default_rng(seed)
    last_time = round((int(round(duration / frame_step))) * frame_step, 6)
    rows = []
    for name in names:
        phase = rng.uniform(0, 2 * np.pi)
        for k in range(window_count(last_time, hop)):
            instant = window_instant(k, hop)
            rows.append([name, format_number(instant), format_number(round(float(np.sin(phase + instant / 5)), 6))])
    return rows


def generate_text_rows(count: int, seed: int = 0, markers: int = 2) -> List[List[str]]:
    """name;class;user;text rows, half per class, each text carrying class-exclusive marker words"""
    fake = Faker()
    fake.seed_instance(seed)
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(count):
        positive = i % 2 == 0
        vocabulary = POSITIVE_MARKERS if positive else NEGATIVE_MARKERS
        words = fake.sentence(nb_words=8).rstrip('.').split()
        words += list(rng.choice(vocabulary, size=markers))
        rng.shuffle(words)
        rows.append([f'tweet_{i}', 'positive' if positive else 'negative', fake.user_name(), ' '.join(words)])
    return rows


def write_rows(path: str, rows: Sequence[Sequence[str]], header: Sequence[str] = ()):
    with atomic_write(path) as fh:
        writer = csv_writer(fh)
        if header:
            writer.writerow(header)
        writer.writerows(rows)


def main():
    """Write a train and a validation corpus"""
    parser = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    parser.add_argument('--out', default='synthetic', help='Output directory')
    parser.add_argument('--instances', type=int, default=3, help='Recordings per partition')
    parser.add_argument('--duration', type=float, default=30.0, help='Recording length in seconds')
    parser.add_argument('--documents', type=int, default=1000, help='Tweets per partition')
    parser.add_argument('--seed', type=int, default=0)
    args = parser.parse_args()

    os.makedirs(args.out, exist_ok=True)
    for offset, (partition, hop) in enumerate((('train', 0.8), ('valid', 0.04))):
        names = [f'{partition}_{i}' for i in range(args.instances)]
        seed = args.seed + offset
        write_rows(os.path.join(args.out, f'LLD_{partition}.csv'),
                   generate_lld_rows(names, args.duration, seed=seed), lld_header())
        write_rows(os.path.join(args.out, f'arousal_{partition}.csv'),
                   generate_window_labels(names, args.duration, hop, seed=seed))
        write_rows(os.path.join(args.out, f'tweets_{partition}.csv'),
                   generate_text_rows(args.documents, seed=seed))
        print(f"Wrote {partition} partition: {len(names)} recordings, {args.documents} tweets")

    print(f"\nCorpus written to {args.out}")


if __name__ == "__main__":
    main()
