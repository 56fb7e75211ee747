#!/usr/bin/env python3
"""Generate the hand-designed fixture corpus under tests/fixtures/corpus.

Twenty abstracts with entity annotations and an interaction table,
covering every interaction type except demethylation (which stays empty
on purpose: sparse types must survive the pipeline). The expected
dataset counts in ground_truth.json are enumerated by hand here, not
computed with the library, so tests can use them as an independent
oracle.

Offsets are computed with str.find over title + " " + body; every
entity surface must occur as a whole token or generation aborts.
"""

from __future__ import annotations

import gzip
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape

OUT_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "corpus"

TOKEN_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-")


@dataclass
class Abstract:
    pmid: str
    title: str
    segments: list[str]
    entities: list[tuple[str, str]]  # (surface form, annotator gene id)
    pubtator_abstract_line: bool = True
    extra_mention_lines: list[str] = field(default_factory=list)

    @property
    def body(self) -> str:
        return " ".join(self.segments)

    @property
    def doc(self) -> str:
        return self.title + " " + self.body


def whole_token_occurrences(doc: str, surface: str) -> list[int]:
    out = []
    pos = doc.find(surface)
    while pos != -1:
        before_ok = pos == 0 or doc[pos - 1] not in TOKEN_CHARS
        after = pos + len(surface)
        after_ok = after == len(doc) or doc[after] not in TOKEN_CHARS
        if before_ok and after_ok:
            out.append(pos)
        pos = doc.find(surface, pos + 1)
    return out


ABSTRACTS = [
    Abstract(
        pmid="14707132",
        title="Protein kinase OXSR1 regulates downstream signalling in epithelial cells.",
        segments=[
            "We report that OXSR1 phosphorylated threonine 84 in the N-terminal "
            "regulatory domain of PAK1. In the same assays STK11 phosphorylated "
            "MARK2 on its activation loop. OXSR1 also bound PAK1 directly, and "
            "STK11 associated with MARK2 in pulldown experiments."
        ],
        entities=[("OXSR1", "9943"), ("PAK1", "5058"), ("STK11", "6794"), ("MARK2", "2011")],
    ),
    Abstract(
        pmid="22621922",
        title="ATM signals to the DNA damage checkpoint.",
        segments=[
            "Following ionizing radiation ATM phosphorylated TP53BP1 at multiple "
            "serine residues. Cells lacking ATM failed to recruit TP53BP1 to "
            "damage foci."
        ],
        entities=[("ATM", "472"), ("TP53BP1", "7158")],
    ),
    Abstract(
        pmid="9000003",
        title="KIN3A is a stress activated kinase.",
        segments=[
            "Recombinant KIN3A phosphorylated SUB3B on threonine 45 in vitro. "
            "The scaffold protein AUX3C recruited KIN3A to the membrane but was "
            "not a substrate. AUX3C also bound SUB3B."
        ],
        entities=[("KIN3A", "880003"), ("SUB3B", "990003"), ("AUX3C", "770003")],
    ),
    Abstract(
        pmid="9000004",
        title="KIN4A acts at the onset of mitosis.",
        segments=[
            "Purified KIN4A phosphorylated SUB4B at serine 12. The adaptor AUX4C "
            "tethered KIN4A near the nucleus without being modified. AUX4C "
            "co-purified with SUB4B."
        ],
        entities=[("KIN4A", "880004"), ("SUB4B", "990004"), ("AUX4C", "770004")],
    ),
    Abstract(
        pmid="9000005",
        title="KIN5A couples nutrient status to growth.",
        segments=[
            "KIN5A phosphorylated SUB5B within its C-terminal tail. AUX5C "
            "stabilized KIN5A but remained unmodified in our assays. AUX5C "
            "associated with SUB5B."
        ],
        entities=[("KIN5A", "880005"), ("SUB5B", "990005"), ("AUX5C", "770005")],
    ),
    Abstract(
        pmid="9000006",
        title="KIN6A controls cell cycle entry.",
        segments=[
            "In synchronized cultures KIN6A phosphorylated SUB6B during G1 "
            "phase. Depletion of KIN6A left SUB6B unmodified."
        ],
        entities=[("KIN6A", "880006"), ("SUB6B", "990006")],
    ),
    Abstract(
        pmid="9000007",
        title="A conserved kinase substrate pair in yeast.",
        segments=[
            "Genetic analysis showed that KIN7A phosphorylated SUB7B under "
            "osmotic stress. Loss of KIN7A abolished SUB7B modification."
        ],
        entities=[("KIN7A", "880007"), ("SUB7B", "990007")],
    ),
    Abstract(
        pmid="9000008",
        title="EP300 modifies the tumour suppressor TP53.",
        segments=[
            "We found that EP300 acetylated TP53 at carboxy-terminal lysines. "
            "HDAC1 reversed this mark in nuclear extracts, and HDAC1 "
            "co-immunoprecipitated with EP300."
        ],
        entities=[("EP300", "2033"), ("TP53", "7157"), ("HDAC1", "3065")],
    ),
    Abstract(
        pmid="9000009",
        title="KAT2B targets histone tails.",
        segments=[
            "Purified KAT2B acetylated HIST3H3 on lysine 14 in reconstituted "
            "nucleosomes. Mutant KAT2B failed to modify HIST3H3."
        ],
        entities=[("KAT2B", "8850"), ("HIST3H3", "8290")],
    ),
    Abstract(
        pmid="9000010",
        title="NAT10 is a cytoplasmic acetyltransferase.",
        segments=[
            "In differentiating neurons NAT10 acetylated TUBB3 along the "
            "microtubule lattice.",
            "SIRT2 antagonized this modification, and SIRT2 interacted with "
            "NAT10 in co-sedimentation assays.",
        ],
        entities=[("NAT10", "55226"), ("TUBB3", "10381"), ("SIRT2", "22933")],
    ),
    Abstract(
        pmid="9000011",
        title="SETD7 is a protein lysine methyltransferase.",
        segments=[
            "Biochemical assays demonstrated that SETD7 methylated TP53 at "
            "lysine 372. Modification by SETD7 stabilized TP53 in unstressed "
            "cells."
        ],
        entities=[("SETD7", "80854"), ("TP53", "7157")],
    ),
    Abstract(
        pmid="9000012",
        title="EZH2 silences developmental genes.",
        segments=[
            "The polycomb enzyme EZH2 methylated HIST2H3A at lysine 27. "
            "Catalytically dead EZH2 left HIST2H3A unmodified."
        ],
        entities=[("EZH2", "2146"), ("HIST2H3A", "333932")],
    ),
    Abstract(
        pmid="9000013",
        title="Opposing enzymes balance TP53 turnover.",
        segments=[
            "The ligase MDM2 ubiquitinated TP53 and marked it for degradation. "
            "In contrast USP7 deubiquitinated TP53 and extended its half life. "
            "MDM2 also bound USP7 in nuclear extracts."
        ],
        entities=[("MDM2", "4193"), ("TP53", "7157"), ("USP7", "7874")],
    ),
    Abstract(
        pmid="9000014",
        title="PTPN1 attenuates growth factor signalling.",
        segments=[
            "Upon receptor internalization PTPN1 dephosphorylated EGFR on "
            "activation loop tyrosines. Substrate trapping mutants of PTPN1 "
            "remained bound to EGFR."
        ],
        entities=[("PTPN1", "5770"), ("EGFR", "1956")],
    ),
    Abstract(
        pmid="9000015",
        title="DUSP6 restrains MAP kinase output.",
        segments=[
            "In reporter assays DUSP6 dephosphorylated MAPK1 within its "
            "activation segment. MAPK3 associated with DUSP6 but retained its "
            "activating marks, and MAPK3 formed dimers with MAPK1."
        ],
        entities=[("DUSP6", "1848"), ("MAPK1", "5594"), ("MAPK3", "5595")],
    ),
    Abstract(
        pmid="9000016",
        title="USP2 stabilizes a lipogenic enzyme.",
        segments=[
            "In prostate cells USP2 deubiquitinated FASN and blocked its "
            "proteasomal turnover. Knockdown of USP2 reduced FASN protein "
            "levels."
        ],
        entities=[("USP2", "9099"), ("FASN", "2194")],
    ),
    Abstract(
        pmid="9000017",
        title="AKT1 signalling in metabolic control.",
        segments=[
            "Active AKT1 interacted with GSK3B at the plasma membrane.GSK3B "
            "recruitment required intact AKT1 kinase activity."
        ],
        entities=[("AKT1", "207"), ("GSK3B", "2932")],
    ),
    Abstract(
        pmid="9000018",
        title="Conference proceedings on chromatin dynamics.",
        segments=[],
        entities=[],
        pubtator_abstract_line=False,
        extra_mention_lines=["9000018\t0\t5\tHDAC1\tGene\t3065"],
    ),
    Abstract(
        pmid="9000019",
        title="BRCA1 forms a nuclear complex.",
        segments=[
            "The RING protein BRCA1 heterodimerized with BARD1 in vivo. The "
            "neighbouring gene NBR2 shares a promoter region with BRCA1."
        ],
        entities=[("BRCA1", "672"), ("BARD1", "580"), ("NBR2", "10230")],
        extra_mention_lines=["9000019\t5\t10\tRAD51\tGene\t5888"],
    ),
    Abstract(
        pmid="9000020",
        title="CREBBP couples signalling to transcription.",
        segments=[
            "Nuclear CREBBP acetylated SMAD3 in response to ligand. The "
            "modification enhanced SMAD3 promoter occupancy."
        ],
        entities=[("CREBBP", "1387"), ("SMAD3", "4088")],
    ),
]

ID_MAP = {
    "9943": "O95747", "5058": "Q13153", "6794": "Q15831", "2011": "Q7KZI7",
    "472": "Q13315", "7158": "Q12888",
    "880003": "P80003", "990003": "P90003", "770003": "P70003",
    "880004": "P80004", "990004": "P90004", "770004": "P70004",
    "880005": "P80005", "990005": "P90005", "770005": "P70005",
    "880006": "P80006", "990006": "P90006",
    "880007": "P80007", "990007": "P90007",
    "2033": "Q09472", "7157": "P04637", "3065": "Q13547",
    "8850": "Q92831", "8290": "Q16695",
    "55226": "Q9H0A0", "10381": "Q13509", "22933": "Q8IXJ6",
    "80854": "Q8WTS6", "2146": "Q15910", "333932": "Q71DI3",
    "4193": "Q00987", "7874": "Q93009",
    "5770": "P18031", "1956": "P00533",
    "1848": "Q16828", "5594": "P28482", "5595": "P27361",
    "9099": "O75604", "2194": "P49327",
    "207": "P31749", "2932": "P49841",
    "1387": "Q92793", "4088": "P84022",
    "672": "P38398", "580": "Q99728",
    # 10230 (NBR2) and 5888 (RAD51) are deliberately not mapped.
}

TYPE_MAP_ROWS = [
    ("MI:0192", "acetylation"),
    ("acetylation reaction", "acetylation"),
    ("MI:0213", "methylation"),
    ("methylation reaction", "methylation"),
    ("MI:0871", "demethylation"),
    ("demethylation reaction", "demethylation"),
    ("MI:0217", "phosphorylation"),
    ("phosphorylation reaction", "phosphorylation"),
    ("MI:0203", "dephosphorylation"),
    ("dephosphorylation reaction", "dephosphorylation"),
    ("MI:0220", "ubiquitination"),
    ("ubiquitination reaction", "ubiquitination"),
    ("MI:0204", "deubiquitination"),
    ("deubiquitination reaction", "deubiquitination"),
]


def mitab_row(
    id_a: str,
    id_b: str,
    pmid: str,
    type_field: str,
    publication: str | None = None,
) -> str:
    columns = ["-"] * 15
    columns[0] = id_a
    columns[1] = id_b
    columns[6] = 'psi-mi:"MI:0045"(experimental interaction detection)'
    columns[8] = publication if publication is not None else f"pubmed:{pmid}"
    columns[9] = "taxid:9606(human)"
    columns[10] = "taxid:9606(human)"
    columns[11] = type_field
    columns[12] = 'psi-mi:"MI:0469"(IntAct)'
    return "\t".join(columns)


def typed(code: str, label: str) -> str:
    return f'psi-mi:"{code}"({label})'


MITAB_LINES = [
    "#ID(s) interactor A\tID(s) interactor B\tAlt. ID(s) interactor A\t"
    "Alt. ID(s) interactor B\tAlias(es) interactor A\tAlias(es) interactor B\t"
    "Interaction detection method(s)\tPublication 1st author(s)\t"
    "Publication Identifier(s)\tTaxid interactor A\tTaxid interactor B\t"
    "Interaction type(s)\tSource database(s)\tInteraction identifier(s)\t"
    "Confidence value(s)",
    mitab_row("uniprotkb:Q15831", "uniprotkb:Q7KZI7", "14707132",
              typed("MI:0217", "phosphorylation reaction")),
    mitab_row("uniprotkb:O95747", "uniprotkb:Q13153", "14707132",
              typed("MI:0407", "direct interaction")),
    mitab_row("uniprotkb:Q13315", "uniprotkb:Q12888", "22621922",
              typed("MI:0217", "phosphorylation reaction")),
    mitab_row("uniprotkb:P80003", "uniprotkb:P90003", "9000003",
              typed("MI:0217", "phosphorylation reaction")),
    mitab_row("uniprotkb:P80003", "uniprotkb:P90003", "9000003",
              typed("MI:0217", "phosphorylation reaction")),
    mitab_row("uniprotkb:P80004", "uniprotkb:P90004", "9000004",
              typed("MI:0217", "phosphorylation reaction")),
    mitab_row("uniprotkb:P80005", "uniprotkb:P90005", "9000005",
              typed("MI:0217", "phosphorylation reaction")),
    mitab_row("uniprotkb:P80006", "uniprotkb:P90006", "9000006",
              typed("MI:0217", "phosphorylation reaction")),
    mitab_row("uniprotkb:P80007", "uniprotkb:P90007", "9000007",
              typed("MI:0217", "phosphorylation reaction")),
    mitab_row("uniprotkb:Q09472", "uniprotkb:P04637", "9000008",
              typed("MI:0192", "acetylation reaction")),
    # Label-only term (no quoted code) exercises the fallback lookup.
    mitab_row("uniprotkb:Q92831", "uniprotkb:Q16695", "9000009",
              "psi-mi:MI:0192(acetylation reaction)"),
    mitab_row("uniprotkb:Q9H0A0", "uniprotkb:Q13509", "9000010",
              typed("MI:0192", "acetylation reaction")),
    mitab_row("uniprotkb:Q8WTS6", "uniprotkb:P04637", "9000011",
              typed("MI:0213", "methylation reaction")),
    mitab_row("uniprotkb:Q15910", "uniprotkb:Q71DI3", "9000012",
              typed("MI:0213", "methylation reaction")),
    mitab_row("uniprotkb:Q00987", "uniprotkb:P04637", "9000013",
              typed("MI:0220", "ubiquitination reaction")),
    mitab_row("uniprotkb:P04637", "uniprotkb:Q93009", "9000013",
              typed("MI:0204", "deubiquitination reaction")),
    mitab_row("uniprotkb:P18031", "uniprotkb:P00533", "9000014",
              typed("MI:0203", "dephosphorylation reaction")),
    mitab_row("uniprotkb:Q16828", "uniprotkb:P28482", "9000015",
              typed("MI:0203", "dephosphorylation reaction")),
    mitab_row("uniprotkb:O75604", "uniprotkb:P49327", "9000016",
              typed("MI:0204", "deubiquitination reaction")),
    # Three participants: dropped by the binary filter.
    mitab_row("uniprotkb:O75604", "uniprotkb:P49327|uniprotkb:P31040", "9000016",
              typed("MI:0204", "deubiquitination reaction")),
    # Second participant is never annotated in the abstract.
    mitab_row("uniprotkb:P31749", "uniprotkb:O43524", "9000017",
              typed("MI:0217", "phosphorylation reaction")),
    # Self pair: dropped by the binary filter.
    mitab_row("uniprotkb:P31749", "uniprotkb:P31749", "9000017",
              typed("MI:0217", "phosphorylation reaction")),
    # Publication without a pubmed identifier: skipped.
    mitab_row("uniprotkb:Q92793", "uniprotkb:P84022", "9000020",
              typed("MI:0192", "acetylation reaction"),
              publication="mint:MINT-7777"),
    # Too few columns: skipped.
    "uniprotkb:P99999\tuniprotkb:P99998\tpsi-mi:\"MI:0217\"(phosphorylation reaction)",
]

# Hand-enumerated expectations. Per pmid: {type: [positives, negatives]}.
GROUND_TRUTH = {
    "expected_skips": {
        "medline_missing_pmid": 1,
        "pubtator_missing_abstract": 1,
        "pubtator_span_mismatch": 1,
        "mitab_wrong_column_count": 1,
        "mitab_unparseable_publication": 1,
        "mitab_non_binary": 2,
        "mitab_duplicate_row": 1,
    },
    "kept_abstracts": 20,
    "kept_interactions": 19,
    "build_skips": {"positive_dropped_participant_absent": 1},
    "dataset": {
        "per_pmid": {
            "14707132": {"phosphorylation": [1, 5]},
            "22621922": {"phosphorylation": [1, 0]},
            "9000003": {"phosphorylation": [1, 2]},
            "9000004": {"phosphorylation": [1, 2]},
            "9000005": {"phosphorylation": [1, 2]},
            "9000006": {"phosphorylation": [1, 0]},
            "9000007": {"phosphorylation": [1, 0]},
            "9000008": {"acetylation": [1, 2]},
            "9000009": {"acetylation": [1, 0]},
            "9000010": {"acetylation": [1, 2]},
            "9000011": {"methylation": [1, 0]},
            "9000012": {"methylation": [1, 0]},
            "9000013": {"ubiquitination": [1, 2], "deubiquitination": [1, 2]},
            "9000014": {"dephosphorylation": [1, 0]},
            "9000015": {"dephosphorylation": [1, 2]},
            "9000016": {"deubiquitination": [1, 0]},
            "9000017": {"phosphorylation": [0, 1]},
        },
        "totals": {"positives": 17, "negatives": 22, "samples": 39, "pmids": 17},
        "by_type_positives": {
            "acetylation": 3, "methylation": 2, "demethylation": 0,
            "phosphorylation": 7, "dephosphorylation": 2,
            "ubiquitination": 1, "deubiquitination": 2,
        },
        "by_type_negatives": {
            "acetylation": 4, "methylation": 0, "demethylation": 0,
            "phosphorylation": 12, "dephosphorylation": 2,
            "ubiquitination": 2, "deubiquitination": 2,
        },
    },
    "binary": {"positives": 17, "negatives": 19, "pairs": 36},
    "split_pmid_counts": {"train": 14, "val": 1, "test": 2},
    "noisy_negative": {
        "pmid": "14707132",
        "participants": ["O95747", "Q13153"],
        "assoc_type": "phosphorylation",
        "masked_contains": "PROTEIN1 phosphorylated threonine 84",
    },
    "positive_example": {
        "pmid": "22621922",
        "participant1": "Q13315",
        "participant2": "Q12888",
        "label": "phosphorylation",
        "masked_contains": "PROTEIN1 phosphorylated PROTEIN2",
    },
    "planted_scan_positives": [
        ["22621922", "Q12888", "Q13315", "phosphorylation"],
        ["9000003", "P80003", "P90003", "phosphorylation"],
        ["9000004", "P80004", "P90004", "phosphorylation"],
        ["9000005", "P80005", "P90005", "phosphorylation"],
        ["9000006", "P80006", "P90006", "phosphorylation"],
        ["9000007", "P80007", "P90007", "phosphorylation"],
    ],
}


def build_pubtator(abstracts: list[Abstract]) -> str:
    blocks = []
    for ab in abstracts:
        lines = [f"{ab.pmid}|t|{ab.title}"]
        if ab.pubtator_abstract_line:
            lines.append(f"{ab.pmid}|a|{ab.body}")
        mentions = []
        for surface, gene_id in ab.entities:
            occurrences = whole_token_occurrences(ab.doc, surface)
            if not occurrences:
                raise SystemExit(
                    f"{ab.pmid}: surface {surface!r} never occurs as a whole token"
                )
            for start in occurrences:
                mentions.append((start, start + len(surface), surface, gene_id))
        mentions.sort()
        for start, end, surface, gene_id in mentions:
            lines.append(f"{ab.pmid}\t{start}\t{end}\t{surface}\tGene\t{gene_id}")
        lines.extend(ab.extra_mention_lines)
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def build_medline(abstracts: list[Abstract]) -> str:
    parts = ['<?xml version="1.0" encoding="UTF-8"?>', "<MedlineCitationSet>"]
    for ab in abstracts:
        parts.append("  <MedlineCitation>")
        parts.append(f"    <PMID>{ab.pmid}</PMID>")
        parts.append("    <Article>")
        parts.append(f"      <ArticleTitle>{escape(ab.title)}</ArticleTitle>")
        if ab.segments:
            parts.append("      <Abstract>")
            for seg in ab.segments:
                parts.append(f"        <AbstractText>{escape(seg)}</AbstractText>")
            parts.append("      </Abstract>")
        parts.append("    </Article>")
        parts.append("  </MedlineCitation>")
    # A citation without a PMID: skipped and counted by the parser.
    parts.append("  <MedlineCitation>")
    parts.append("    <Article>")
    parts.append("      <ArticleTitle>An untracked item.</ArticleTitle>")
    parts.append("    </Article>")
    parts.append("  </MedlineCitation>")
    parts.append("</MedlineCitationSet>")
    return "\n".join(parts) + "\n"


def main() -> int:
    OUT_DIR.mkdir(parents=True, exist_ok=True)

    doc19 = next(ab for ab in ABSTRACTS if ab.pmid == "9000019").doc
    if doc19[5:10] == "RAD51":
        raise SystemExit("bogus mention for 9000019 accidentally matches")

    pubtator = build_pubtator(ABSTRACTS)
    (OUT_DIR / "pubtator.txt").write_text(pubtator, encoding="utf-8")

    medline = build_medline(ABSTRACTS)
    (OUT_DIR / "medline.xml").write_text(medline, encoding="utf-8")
    with open(OUT_DIR / "medline.xml.gz", "wb") as out:
        with gzip.GzipFile(fileobj=out, mode="wb", filename="", mtime=0) as gz:
            gz.write(medline.encode("utf-8"))

    (OUT_DIR / "mitab.tsv").write_text("\n".join(MITAB_LINES) + "\n", encoding="utf-8")

    id_map_lines = ["# annotator gene id\tprotein id"]
    id_map_lines += [f"{k}\t{v}" for k, v in sorted(ID_MAP.items(), key=lambda kv: int(kv[0]))]
    (OUT_DIR / "id_map.tsv").write_text("\n".join(id_map_lines) + "\n", encoding="utf-8")

    type_lines = ["# term\tclass"] + [f"{k}\t{v}" for k, v in TYPE_MAP_ROWS]
    (OUT_DIR / "type_map.tsv").write_text("\n".join(type_lines) + "\n", encoding="utf-8")

    (OUT_DIR / "ground_truth.json").write_text(
        json.dumps(GROUND_TRUTH, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"wrote fixture corpus to {OUT_DIR}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
