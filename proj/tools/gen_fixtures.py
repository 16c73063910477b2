#!/usr/bin/env python3
"""Regenerates data/mini and data/agreement. Output is deterministic."""
import os
import random
import sys
from xml.sax.saxutils import escape

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data")

# Topic vocabularies (romanized Urdu plus a few English loan words).
TOPICS = {
    "smog": ["smog", "dhuan", "fazai", "alodgi", "lahore", "hawa", "saans", "beemari", "sardi", "dhund"],
    "cricket": ["cricket", "match", "team", "khiladi", "jeet", "haar", "stadium", "toss", "wicket", "run"],
    "flood": ["selab", "pani", "darya", "barish", "nuqsan", "gaon", "fasal", "madad", "ghar", "sindh"],
    "election": ["intikhab", "vote", "jamaat", "hukumat", "wazir", "parliament", "nataij", "muhim", "ummeedwar", "halqa"],
    "health": ["dengue", "machar", "bukhar", "hospital", "dawai", "ilaj", "doctor", "marz", "sehat", "tadabeer"],
    "economy": ["mehngai", "qeemat", "rupay", "dollar", "bazar", "budget", "tax", "karobar", "tijarat", "maeeshat"],
}
FILLER = ["ky", "ka", "ki", "hai", "hain", "aur", "mein", "se", "ko", "ne", "par", "bhi", "yeh", "woh"]
URDU_DOCS = [
    ("اسموگ لاہور", "لاہور میں اسموگ کی وجہ سے ہوا خراب ہے۔ لوگ بیمار ہو رہے ہیں، اور اسکول بند ہیں۔"),
    ("کرکٹ میچ", "پاکستان کی ٹیم نے میچ جیت لیا۔ کھلاڑی خوش ہیں؟ ہاں، بہت خوش۔"),
    ("سیلاب", "دریا میں پانی بڑھ گیا۔ گاؤں میں نقصان ہوا؛ مدد کی ضرورت ہے۔"),
]
# Inflected surface forms; lemma first.
LEMMA_GROUPS = [
    ("beemari", ["beemariyan", "beemarion"]),
    ("khiladi", ["khiladiyon", "khilarion"]),
    ("fasal", ["faslen", "faslon"]),
    ("dawai", ["dawaiyan", "dawaon"]),
    ("qeemat", ["qeematen", "qeematon"]),
    ("ghar", ["gharon", "ghron"]),
]


def mini(rng):
    out = os.path.join(ROOT, "mini")
    os.makedirs(out, exist_ok=True)
    inflect = {lemma: forms for lemma, forms in LEMMA_GROUPS}
    docs = []
    topics = list(TOPICS)
    n_latin = 30 - len(URDU_DOCS)
    for i in range(n_latin):
        topic = topics[i % len(topics)]
        vocab = TOPICS[topic]
        other = TOPICS[topics[(i + 1 + i // 6) % len(topics)]]

        def word():
            r = rng.random()
            if r < 0.55:
                w = rng.choice(vocab)
            elif r < 0.65:
                w = rng.choice(other)
            else:
                w = rng.choice(FILLER)
            if w in inflect and rng.random() < 0.5:
                w = rng.choice(inflect[w])
            return w

        title = " ".join(word() for _ in range(rng.randint(2, 5)))
        sents = []
        for _ in range(rng.randint(2, 5)):
            s = " ".join(word() for _ in range(rng.randint(5, 12)))
            sents.append(s + rng.choice([".", "۔", "?", "!", ","]))
        body = " ".join(sents)
        docs.append((title, body, topic))
    for t, b in URDU_DOCS:
        docs.append((t, b, "urdu"))
    order = list(range(len(docs)))
    ids = [f"URD-{1000 + 7 * k:04d}" for k in range(len(docs))]
    # Plant one exact duplicate pair (same content, different ids).
    docs[25] = (docs[3][0], docs[3][1], docs[3][2])
    with open(os.path.join(out, "docs.xml"), "w", encoding="utf-8") as f:
        f.write("<documents>\n")
        for k in order:
            t, b, topic = docs[k]
            f.write("  <document>\n")
            f.write(f"    <document_ID>{ids[k]}</document_ID>\n")
            if topic != "urdu":
                f.write(f"    <source>{topic}.example.pk</source>\n")
            f.write(f"    <title>{escape(t)}</title>\n")
            f.write(f"    <body>{escape(b)}</body>\n")
            f.write("  </document>\n")
        f.write("</documents>\n")

    queries = [
        ("Q01", "lahore smog ky asrat", "Effects of smog in Lahore."),
        ("Q02", "cricket match jeet", "Cricket match wins."),
        ("Q03", "selab mein fasal ka nuqsan", "Crop damage in floods."),
        ("Q04", "intikhab ky nataij", "Election results."),
        ("Q05", "dengue bukhar ka ilaj", "Dengue fever treatment."),
        ("Q06", "mehngai aur qeematon", "Inflation and prices."),
        ("Q07", "khiladiyon ki team", "Players of the team."),
        ("Q08", "hospital mein dawaiyan", "Medicine at hospitals."),
        ("Q09", "ky ka ki", "All stop words."),
        ("Q10", "ہوا اسموگ لاہور", "Smog in Lahore (Urdu script)."),
    ]
    with open(os.path.join(out, "stoplist.txt"), "w", encoding="utf-8") as f:
        f.write("# mini stop-list\n")
        for w in FILLER:
            f.write(w + "\n")
        for w in ["میں", "کی", "ہے", "ہیں", "اور", "نے", "کے"]:
            f.write(w + "\n")
    stop = set(FILLER)
    with open(os.path.join(out, "queries.xml"), "w", encoding="utf-8") as f:
        f.write("<queries>\n")
        for qid, title, desc in queries:
            words = title.split()
            f.write("  <query>\n")
            f.write(f"    <QID>{qid}</QID>\n")
            f.write(f"    <totalWords>{len(words)}</totalWords>\n")
            f.write(f"    <noOfWordsWithSWR>{sum(w not in stop for w in words)}</noOfWordsWithSWR>\n")
            f.write(f"    <title>{escape(title)}</title>\n")
            f.write(f"    <description>{escape(desc)}</description>\n")
            f.write("  </query>\n")
        f.write("</queries>\n")
    with open(os.path.join(out, "lemmas.tsv"), "w", encoding="utf-8") as f:
        for lemma, forms in LEMMA_GROUPS:
            for w in forms:
                f.write(f"{w}\t{lemma}\n")
    with open(os.path.join(out, "variants.tsv"), "w", encoding="utf-8") as f:
        for lemma, forms in LEMMA_GROUPS:
            f.write(f"{lemma}\t{','.join(forms)}\n")

    # Relevance: a document is relevant to a query if its topic matches.
    qtopic = {"Q01": "smog", "Q02": "cricket", "Q03": "flood", "Q04": "election",
              "Q05": "health", "Q06": "economy", "Q07": "cricket", "Q08": "health",
              "Q09": None, "Q10": "urdu-smog"}
    with open(os.path.join(out, "qrels.txt"), "w", encoding="utf-8") as f:
        lines = []
        for qid, _, _ in queries:
            topic = qtopic[qid]
            for k in range(len(docs)):
                if topic == "urdu-smog":
                    rel = 1 if (docs[k][2] == "smog" or k == n_latin) else 0
                elif topic is None:
                    rel = 0
                else:
                    rel = 1 if docs[k][2] == topic else 0
                if rel or rng.random() < 0.3:
                    lines.append(f"{qid} {ids[k]} {rel}")
        lines.sort()
        f.write("\n".join(lines) + "\n")


def agreement(rng):
    out = os.path.join(ROOT, "agreement")
    os.makedirs(out, exist_ok=True)
    a, b, c, d = 701, 31, 112, 252
    third_relevant = 92
    n = a + b + c + d
    keys = []
    qids = [f"Q{q:02d}" for q in range(1, 51)]
    per_query = [n // 50 + (1 if q < n % 50 else 0) for q in range(50)]
    doc = 0
    for q, count in zip(qids, per_query):
        for _ in range(count):
            keys.append((q, f"URD-{doc:04d}"))
            doc += 1
    cells = ["a"] * a + ["b"] * b + ["c"] * c + ["d"] * d
    rng.shuffle(cells)
    conflicts = [k for k, cell in zip(keys, cells) if cell in "bc"]
    rel3 = set(rng.sample(range(len(conflicts)), third_relevant))
    with open(os.path.join(out, "s1.qrels"), "w") as f1, \
         open(os.path.join(out, "s2.qrels"), "w") as f2:
        for (q, dd), cell in zip(keys, cells):
            f1.write(f"{q} {dd} {1 if cell in 'ac' else 0}\n")
            f2.write(f"{q} {dd} {1 if cell in 'ab' else 0}\n")
    with open(os.path.join(out, "s3.qrels"), "w") as f3:
        for i, (q, dd) in enumerate(conflicts):
            f3.write(f"{q} {dd} {1 if i in rel3 else 0}\n")


if __name__ == "__main__":
    mini(random.Random(2020))
    agreement(random.Random(143))
    sys.exit(0)
