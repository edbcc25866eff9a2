"""Writes a tiny word2vec model (text + binary), a type ontology, and two CSV
files for trying the CLI. Vectors are clustered by topic so that related
words land near their type names."""

import json
import struct
from pathlib import Path

import numpy as np

HERE = Path(__file__).resolve().parent
DIM = 24

# type -> parent ("" for roots)
ONTOLOGY = {
    "Place": "",
    "BodyOfWater": "Place",
    "River": "BodyOfWater",
    "Lake": "BodyOfWater",
    "Settlement": "Place",
    "City": "Settlement",
    "Town": "Settlement",
    "Agent": "",
    "Person": "Agent",
    "Athlete": "Person",
    "BaseballPlayer": "Athlete",
    "SoccerPlayer": "Athlete",
    "Politician": "Person",
    "Food": "",
    "Beverage": "Food",
    "Wine": "Beverage",
    "Fruit": "Food",
}

# topic -> words drawn near it (type tokens included)
TOPICS = {
    "water": ["river", "lake", "stream", "creek", "bodyofwater", "water", "fraser", "elk", "peace", "bay"],
    "settlement": ["city", "town", "village", "settlement", "vancouver", "victoria", "kelowna", "nanaimo"],
    "place": ["place", "region", "area"],
    "baseball": ["baseball", "baseballplayer", "pitcher", "inning", "homer", "batting", "yankees"],
    "soccer": ["soccer", "soccerplayer", "goal", "striker", "midfielder"],
    "athlete": ["athlete", "player", "team", "league"],
    "politics": ["politician", "senator", "mayor", "election", "party"],
    "person": ["person", "agent", "name", "people"],
    "wine": ["wine", "merlot", "chardonnay", "vineyard", "winery", "pinot"],
    "beverage": ["beverage", "drink", "juice"],
    "fruit": ["fruit", "apple", "cherry", "peach"],
    "food": ["food"],
}
PARENT_TOPIC = {"water": "place", "settlement": "place", "baseball": "athlete", "soccer": "athlete",
                "athlete": "person", "politics": "person", "wine": "beverage", "beverage": "food",
                "fruit": "food"}


def main() -> None:
    rng = np.random.default_rng(2018)
    centers = {}
    for topic in ["place", "person", "food", "water", "settlement", "athlete", "politics",
                  "beverage", "fruit", "baseball", "soccer", "wine"]:
        base = rng.normal(size=DIM)
        parent = PARENT_TOPIC.get(topic)
        centers[topic] = base if parent is None else 0.8 * centers[parent] + 0.6 * base
    words = []
    for topic, toks in TOPICS.items():
        for t in toks:
            words.append((t, centers[topic] + 0.35 * rng.normal(size=DIM)))
    for t in ["the", "of", "and", "report", "total", "id", "code"]:
        words.append((t, rng.normal(size=DIM)))
    # Type tokens in CamelCase, as some vocabularies carry them.
    vocab = dict(words)
    for t in ["River", "Lake", "City", "Town", "Athlete", "Politician", "Wine", "Fruit"]:
        words.append((t, vocab[t.lower()] + 0.05 * rng.normal(size=DIM)))

    with open(HERE / "model.txt", "w") as f:
        f.write(f"{len(words)} {DIM}\n")
        for tok, v in words:
            f.write(tok + " " + " ".join(f"{x:.6f}" for x in v) + "\n")
    with open(HERE / "model.bin", "wb") as f:
        f.write(f"{len(words)} {DIM}\n".encode())
        for tok, v in words:
            f.write(tok.encode() + b" " + struct.pack(f"<{DIM}f", *v) + b"\n")

    with open(HERE / "ontology.tsv", "w") as f:
        for child, parent in ONTOLOGY.items():
            f.write(child + ("\t" + parent if parent else "") + "\n")

    (HERE / "coalfields.csv").write_text(
        "Coalfield,Report Id,Nearest Water\n"
        "Elk River,1001,Elk river\n"
        "Peace River,1002,Peace river\n"
        "Hat Creek,1003,Hat creek\n"
        "Fraser Lake,1004,Fraser lake\n"
    )
    (HERE / "baseball.csv").write_text(
        "Player,Team,Batting,Homer\n"
        "Pitcher one,Yankees,0.301,12\n"
        "Striker two,Yankees,0.255,3\n"
        "Pitcher three,Yankees,0.281,40\n"
    )
    (HERE / "wine.csv").write_text(
        "Winery,Region,Grape\n"
        "Okanagan Winery,Kelowna,Merlot\n"
        "Cherry Vineyard,Kelowna,Pinot\n"
        "Peach Winery,Victoria,Chardonnay\n"
    )
    with open(HERE / "corpus.jsonl", "w") as f:
        for path, truth in [("coalfields.csv", ["River", "BodyOfWater"]),
                            ("baseball.csv", ["BaseballPlayer", "Athlete"]),
                            ("wine.csv", ["Wine"])]:
            f.write(json.dumps({"path": path, "true_types": truth}) + "\n")


if __name__ == "__main__":
    main()
