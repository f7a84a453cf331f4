#!/usr/bin/env python3
"""Writes a seeded 1,000-line excerpt in the MTG-Jamendo autotagging TSV layout.

Rows carry genre, instrument and mood/theme tags drawn from the dataset's tag
vocabulary with mood-dependent preferences, so the tag statistics built from
it have a realistic shape. Usage: make_jamendo_excerpt.py OUT.tsv
"""
import random
import sys

MOODS = {
    # mood: (preferred instruments, preferred genres)
    "action": (["drums", "electricguitar", "synthesizer"], ["rock", "electronic", "soundtrack"]),
    "adventure": (["strings", "orchestra", "drums"], ["soundtrack", "orchestral"]),
    "advertising": (["synthesizer", "guitar", "piano"], ["pop", "electronic"]),
    "background": (["piano", "synthesizer", "pad"], ["ambient", "easylistening", "lounge"]),
    "ballad": (["piano", "voice", "acousticguitar"], ["pop", "singersongwriter"]),
    "calm": (["piano", "acousticguitar", "pad"], ["ambient", "classical", "newage"]),
    "children": (["piano", "bell", "guitar"], ["pop", "easylistening"]),
    "christmas": (["bell", "piano", "strings"], ["classical", "pop"]),
    "commercial": (["synthesizer", "guitar", "drums"], ["pop", "electronic"]),
    "cool": (["bass", "synthesizer", "drums"], ["electronic", "chillout", "funk"]),
    "corporate": (["piano", "synthesizer", "guitar"], ["pop", "easylistening"]),
    "dark": (["synthesizer", "cello", "pad"], ["ambient", "experimental", "electronic"]),
    "deep": (["synthesizer", "pad", "bass"], ["ambient", "electronic", "chillout"]),
    "documentary": (["piano", "strings", "pad"], ["soundtrack", "ambient"]),
    "drama": (["strings", "piano", "cello"], ["soundtrack", "classical"]),
    "dramatic": (["strings", "orchestra", "drums"], ["soundtrack", "orchestral"]),
    "dream": (["pad", "piano", "synthesizer"], ["ambient", "newage", "chillout"]),
    "emotional": (["piano", "strings", "violin"], ["classical", "soundtrack"]),
    "energetic": (["drums", "electricguitar", "synthesizer"], ["rock", "electronic", "dance"]),
    "epic": (["orchestra", "strings", "drums"], ["soundtrack", "orchestral"]),
    "fast": (["drums", "electricguitar", "bass"], ["rock", "metal", "electronic"]),
    "film": (["strings", "piano", "orchestra"], ["soundtrack", "classical"]),
    "fun": (["guitar", "drums", "synthesizer"], ["pop", "funk", "reggae"]),
    "funny": (["guitar", "piano", "bass"], ["pop", "funk"]),
    "game": (["synthesizer", "drummachine", "computer"], ["electronic", "soundtrack"]),
    "groovy": (["bass", "drums", "guitar"], ["funk", "electronic", "jazz"]),
    "happy": (["guitar", "piano", "acousticguitar"], ["pop", "folk", "easylistening"]),
    "heavy": (["electricguitar", "drums", "bass"], ["metal", "rock"]),
    "holiday": (["acousticguitar", "bell", "piano"], ["pop", "easylistening"]),
    "hopeful": (["piano", "strings", "acousticguitar"], ["soundtrack", "classical", "pop"]),
    "inspiring": (["piano", "strings", "guitar"], ["soundtrack", "pop", "orchestral"]),
    "love": (["piano", "voice", "acousticguitar"], ["pop", "singersongwriter"]),
    "meditative": (["pad", "flute", "bell"], ["ambient", "newage", "world"]),
    "melancholic": (["piano", "cello", "violin"], ["classical", "ambient", "soundtrack"]),
    "melodic": (["piano", "guitar", "synthesizer"], ["pop", "electronic", "classical"]),
    "motivational": (["drums", "piano", "synthesizer"], ["pop", "soundtrack", "electronic"]),
    "movie": (["orchestra", "strings", "piano"], ["soundtrack", "orchestral"]),
    "nature": (["acousticguitar", "flute", "pad"], ["ambient", "newage", "world"]),
    "party": (["drummachine", "synthesizer", "bass"], ["dance", "electronic", "house"]),
    "positive": (["guitar", "piano", "drums"], ["pop", "rock", "easylistening"]),
    "powerful": (["drums", "electricguitar", "orchestra"], ["rock", "soundtrack", "metal"]),
    "relaxing": (["piano", "pad", "acousticguitar"], ["ambient", "chillout", "lounge"]),
    "retro": (["synthesizer", "drummachine", "bass"], ["electronic", "funk", "disco"]),
    "romantic": (["piano", "violin", "acousticguitar"], ["classical", "pop", "jazz"]),
    "sad": (["piano", "cello", "strings"], ["classical", "ambient", "soundtrack"]),
    "sexy": (["saxophone", "bass", "piano"], ["jazz", "lounge", "rnb"]),
    "slow": (["piano", "pad", "acousticguitar"], ["ambient", "classical", "easylistening"]),
    "soft": (["piano", "acousticguitar", "flute"], ["easylistening", "ambient", "folk"]),
    "soundscape": (["pad", "synthesizer", "computer"], ["ambient", "experimental"]),
    "space": (["synthesizer", "pad", "computer"], ["ambient", "electronic", "experimental"]),
    "sport": (["drums", "electricguitar", "synthesizer"], ["rock", "electronic"]),
    "summer": (["acousticguitar", "guitar", "drums"], ["pop", "reggae", "latin"]),
    "trailer": (["orchestra", "drums", "strings"], ["soundtrack", "orchestral"]),
    "travel": (["acousticguitar", "guitar", "piano"], ["folk", "world", "pop"]),
    "upbeat": (["drums", "guitar", "synthesizer"], ["pop", "dance", "rock"]),
    "uplifting": (["piano", "synthesizer", "strings"], ["pop", "trance", "soundtrack"]),
}
ALL_INSTRUMENTS = sorted({i for ins, _ in MOODS.values() for i in ins})
ALL_GENRES = sorted({g for _, gs in MOODS.values() for g in gs})


def main(out_path: str) -> None:
    rng = random.Random(20240717)
    moods = sorted(MOODS)
    lines = ["TRACK_ID\tARTIST_ID\tALBUM_ID\tPATH\tDURATION\tTAGS"]
    track = 948
    for row in range(999):
        track += rng.randint(1, 40)
        artist = rng.randint(1, 3500)
        album = rng.randint(1, 11000)
        duration = round(rng.uniform(30.0, 600.0), 1)
        primary = moods[row % len(moods)] if row < len(moods) else rng.choice(moods)
        track_moods = [primary]
        if rng.random() < 0.3:
            extra = rng.choice(moods)
            if extra != primary:
                track_moods.append(extra)
        prefs_i, prefs_g = MOODS[primary]
        genres = []
        if rng.random() < 0.93:
            genres.append(rng.choice(prefs_g) if rng.random() < 0.8 else rng.choice(ALL_GENRES))
            if rng.random() < 0.35:
                g = rng.choice(ALL_GENRES)
                if g not in genres:
                    genres.append(g)
        instruments = []
        if rng.random() < 0.75:
            instruments.append(rng.choice(prefs_i) if rng.random() < 0.8 else rng.choice(ALL_INSTRUMENTS))
            if rng.random() < 0.4:
                i = rng.choice(ALL_INSTRUMENTS)
                if i not in instruments:
                    instruments.append(i)
        tags = [f"genre---{g}" for g in genres]
        tags += [f"instrument---{i}" for i in instruments]
        tags += [f"mood/theme---{m}" for m in track_moods]
        lines.append("\t".join([
            f"track_{track:07d}", f"artist_{artist:06d}", f"album_{album:06d}",
            f"{track % 100:02d}/{track}.mp3", f"{duration}", *tags,
        ]))
    with open(out_path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
