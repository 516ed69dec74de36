"""Scoring diagnosis mentions in free-text report snippets.

The extractor is deliberately boring: literal cue phrases, word boundaries,
sentence-scoped, nearest cue wins.  Boring means auditable — every score
below can be traced to one cue in one sentence.
"""

from glsmooth import default_lexicon, default_taxonomy, extract_findings, split_sentences

lexicon = default_lexicon()
taxonomy = default_taxonomy()
vocabulary = taxonomy.vocabulary()

REPORTS = [
    # graded confidence, one mention each
    "Findings likely represent pneumonia.",
    "Pneumonia cannot be excluded.",
    "No definite evidence of pleural effusion.",
    # conjunction: each mention picks up its nearest cue
    "No pleural effusion but likely pneumonia.",
    # a cue never leaks across a sentence boundary
    "No pneumothorax. Likely pneumonia.",
    # no cue at all: plain affirmative statement, scored +3
    "Pneumothorax, air collection in the right apex.",
    # nested cues: "no definite" must win over the embedded "no"
    "There is no convincing evidence of pneumothorax.",
]

for text in REPORTS:
    print(f"report: {text!r}")
    print(f"  sentences: {split_sentences(text)}")
    for f in extract_findings(text, lexicon, vocabulary):
        category = taxonomy.map_diagnosis(f.raw_phrase)
        cue = f.cue if f.cue is not None else "(none: affirmative default)"
        print(
            f"  sentence {f.sentence_index}: {f.raw_phrase!r} -> {category.value:<15}"
            f" u = {f.u:+d}   cue = {cue}"
        )
    print()

# The lexicon itself is data, not code: ship your own TSV to re-score
# everything under different conventions.
print(f"default lexicon: {len(lexicon)} cue patterns, e.g.")
for entry in lexicon.entries[:5]:
    print(f"  {entry.pattern!r} -> {entry.score:+d} ({entry.kind})")
