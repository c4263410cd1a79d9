"""Seeded toy Nepali corpora with known word classes.

Words of one class share sentence frames, so a masked-LM can only learn the
class structure from co-occurrence. The ``regulated`` domain is news-like
(organisations, places, economy, sport); ``unregulated`` is social-media-like
(sentiment, food, animals, people). Evaluation frames are neutral: they never
occur in training text, so they carry no class signal of their own.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

LEXICON: dict[str, list[str]] = {
    "person": ["राम", "सीता", "हरि", "गीता", "श्याम", "कमला", "बिकास", "सरिता"],
    "place": ["काठमाडौं", "पोखरा", "धरान", "बुटवल", "जनकपुर", "विराटनगर", "नेपालगन्ज", "हेटौंडा"],
    "organisation": ["सरकार", "संसद", "अदालत", "आयोग", "मन्त्रालय", "प्रहरी", "सेना", "बैंक"],
    "economy": ["बजेट", "लगानी", "ऋण", "बचत", "मूल्य", "राजस्व", "निर्यात", "आयात"],
    "sport": ["फुटबल", "क्रिकेट", "भलिबल", "कबड्डी", "टेनिस", "ह्यान्डबल", "कराते", "पौडी"],
    "food": ["भात", "दाल", "तरकारी", "रोटी", "मासु", "दूध", "फलफूल", "अचार"],
    "animal": ["गाई", "कुकुर", "बिरालो", "बाख्रा", "भैंसी", "घोडा", "बाँदर", "हात्ती"],
    "positive": ["राम्रो", "असल", "सुन्दर", "मीठो", "उत्कृष्ट", "रमाइलो", "सफल", "खुसी"],
    "negative": ["नराम्रो", "खराब", "दुखी", "तितो", "कमजोर", "बेकार", "असफल", "निराश"],
}

TEMPLATES: dict[str, list[str]] = {
    "regulated": [
        "{organisation} ले {place} मा बैठक बोलायो",
        "{organisation} को निर्णय अनुसार काम सुरु भयो",
        "{organisation} ले नयाँ नियम ल्यायो",
        "{person} {place} तर्फ हिँड्यो",
        "{place} मा ठूलो भीड देखियो",
        "{place} को बाटो बन्द छ",
        "यस वर्ष {economy} ह्वात्तै बढ्यो",
        "अर्थ मन्त्रीले {economy} घटाउने बताए",
        "{economy} को अंक सार्वजनिक गरियो",
        "खेलाडीहरू {sport} खेल्न मैदान पुगे",
        "{sport} को फाइनल खेल रोमाञ्चक बन्यो",
        "राष्ट्रिय टोली {sport} प्रतियोगिता जित्यो",
        "आज नयाँ समाचार आयो",
    ],
    "unregulated": [
        "{person} ले बिहान {food} खायो",
        "आमाले {food} पकाउनुभयो",
        "भोक लाग्दा {food} खान मन लाग्छ",
        "{person} ले घरमा {animal} पाल्यो",
        "{animal} खेतमा चर्दै थियो",
        "{animal} लाई घाँस हालियो",
        "आजको दिन {positive} भयो हाँसो लाग्यो",
        "साथीसँग भेट {positive} रह्यो मन फुरुङ्ग भयो",
        "{positive} कुरा सुनेर मुस्कान आयो",
        "आजको दिन {negative} भयो आँसु झर्यो",
        "परीक्षा {negative} रह्यो मन भारी भयो",
        "{negative} कुरा सुनेर रिस उठ्यो",
        "{person} बारे कुरा गर्दा समय बित्यो",
    ],
}

# categories of the intrinsic sets and the extrinsic (news topic) task
INTRINSIC_SETS = {
    "Sentiment": ["positive", "negative"],
    "Relatedness": ["food", "animal", "sport"],
    "NamedEntity": ["person", "place", "organisation"],
}
NEWS_CLASSES = ["organisation", "economy", "sport"]
NEWS_FRAMES = [
    "{x} बारे नयाँ समाचार आयो",
    "{x} को बारेमा कुरा भयो",
    "आज {x} समाचार आयो",
]


def _fill(template: str, rng: random.Random) -> str:
    out = template
    for cat, words in LEXICON.items():
        key = "{" + cat + "}"
        while key in out:
            out = out.replace(key, rng.choice(words), 1)
    return out


def sentences(domain: str, n: int, seed: int = 0) -> list[str]:
    rng = random.Random(f"{domain}:{seed}")
    templates = TEMPLATES[domain]
    return [_fill(rng.choice(templates), rng) for _ in range(n)]


def two_domain_corpus(n_per_domain: int, seed: int = 0) -> dict[str, list[str]]:
    return {d: sentences(d, n_per_domain, seed) for d in TEMPLATES}


def labeled_words(set_name: str) -> list[tuple[str, str]]:
    return [(w, cat) for cat in INTRINSIC_SETS[set_name] for w in LEXICON[cat]]


@dataclass
class NewsSplit:
    train: list[tuple[str, str]]
    test: list[tuple[str, str]]


def news_classification(seed: int = 0) -> NewsSplit:
    """Topic-labelled sentences in neutral frames.

    Train and test use disjoint halves of every class's words, so a probe can
    only generalise through what the embeddings learned about the test words.
    """
    train, test = [], []
    for cat in NEWS_CLASSES:
        words = LEXICON[cat]
        for i, w in enumerate(words):
            target = train if i < len(words) // 2 else test
            for frame in NEWS_FRAMES:
                target.append((frame.format(x=w), cat))
    random.Random(seed).shuffle(train)
    random.Random(seed + 1).shuffle(test)
    return NewsSplit(train, test)


def write_fixtures(directory, n_per_domain: int = 200, seed: int = 0) -> dict[str, str]:
    """Write a complete input set for the pipeline; returns name -> relative file name."""
    from pathlib import Path

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    files = {}
    for domain, lines in two_domain_corpus(n_per_domain, seed).items():
        name = f"{domain}.txt"
        (directory / name).write_text("".join(s + "\n" for s in lines), encoding="utf-8")
        files[domain] = name
    for set_name in INTRINSIC_SETS:
        name = f"{set_name.lower()}.tsv"
        (directory / name).write_text(
            "".join(f"{w}\t{c}\n" for w, c in labeled_words(set_name)), encoding="utf-8"
        )
        files[set_name] = name
    split = news_classification(seed)
    for part in ("train", "test"):
        name = f"news_{part}.tsv"
        rows = getattr(split, part)
        (directory / name).write_text("".join(f"{t}\t{c}\n" for t, c in rows), encoding="utf-8")
        files[f"news_{part}"] = name
    return files
