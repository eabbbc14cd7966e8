#!/usr/bin/env python3
"""Regenerates the hybrid-vs-single-mode fixture in this directory.

Ten groups of three sections (one relevant, two distractors). Each group owns
two embedding dimensions, so groups never interact. Within a group the heading
cosine to the query and the content term frequency of the query term are set
per case:

  both   : relevant is first in both lists
  emb    : relevant first by heading, second by content
  bm25   : relevant first by content, second by heading
  neither: relevant second in both lists and loses the tie

Expected top-1 hits: bm25 6, embedding 7, hybrid 9.
"""
import json
import math
import pathlib

HERE = pathlib.Path(__file__).resolve().parent
CASES = ["both"] * 4 + ["emb"] * 3 + ["bm25"] * 2 + ["neither"]
DOC_LEN = 10
COS = {1: 0.95, 2: 0.8, 3: 0.6}

# (heading rank, content rank) for relevant, distractor a, distractor b.
RANKS = {
    "both": [(1, 1), (2, 2), (3, 3)],
    "emb": [(1, 2), (3, 1), (2, 3)],
    "bm25": [(2, 1), (1, 3), (3, 2)],
    "neither": [(2, 2), (1, 3), (3, 1)],
}
TF = {1: 3, 2: 2, 3: 1}


def main():
    dim = 2 * len(CASES)
    vectors = {}
    lexicon = ["filler"]
    pairs = []
    docs_dir = HERE / "docs"
    docs_dir.mkdir(exist_ok=True)
    manifest = []
    for g, case in enumerate(CASES):
        term = f"t{g}"
        lexicon.append(term)
        q = [0.0] * dim
        q[2 * g] = 1.0
        vectors[term] = q
        sections = []
        for role, (hr, cr) in zip(("r", "a", "b"), RANKS[case]):
            word = f"h{g}{role}"
            lexicon.append(word)
            c = COS[hr]
            v = [0.0] * dim
            v[2 * g] = c
            v[2 * g + 1] = math.sqrt(1 - c * c)
            vectors[word] = v
            tf = TF[cr]
            body = " ".join([term] * tf + ["filler"] * (DOC_LEN - tf))
            sections.append((role, word, body))
        # Relevant section position rotates so doc_id order carries no signal.
        shift = g % 3
        sections = sections[shift:] + sections[:shift]
        title = f"G{g}"
        with open(docs_dir / f"g{g}.txt", "w") as f:
            for _, word, body in sections:
                f.write(f"# {word}\n{body}\n\n")
        ordinal = [s[0] for s in sections].index("r") + 1
        pairs.append((term, f"{title}#{ordinal:03d}"))
        manifest.append({"path": f"docs/g{g}.txt", "country": "none", "title": title})

    with open(HERE / "lexicon.tsv", "w") as f:
        for w in lexicon:
            f.write(f"{w}\t100\tNCMN\n")
    (HERE / "stopwords.txt").write_text("# none\n")
    (HERE / "gazetteer.json").write_text("{}\n")
    with open(HERE / "embeddings.txt", "w") as f:
        f.write(f"{len(vectors)} {dim}\n")
        for w, v in vectors.items():
            f.write(w + " " + " ".join(f"{x:.6f}" for x in v) + "\n")
    with open(HERE / "manifest.json", "w") as f:
        json.dump(manifest, f, indent=1)
        f.write("\n")
    with open(HERE / "pairs.tsv", "w") as f:
        for q, d in pairs:
            f.write(f"{q}\t{d}\n")


if __name__ == "__main__":
    main()
