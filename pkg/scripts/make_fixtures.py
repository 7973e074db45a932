#!/usr/bin/env python3
"""Regenerate the bundled fixture workspace under fixtures/.

The fixtures are small stand-ins for real data-to-text datasets: one
dataset per data type (key-value, graph, plain table, highlighted table),
a metadata-only manifest with real split sizes, pre-generated system
outputs, and a demo service config. Content is fully literal, so reruns
are byte-identical.
"""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")


def write_jsonl(path: Path, records) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records)
    path.write_text(lines, encoding="utf-8")


def kv(pairs, refs, properties=()):
    return {
        "type": "key_value",
        "payload": {"pairs": [list(p) for p in pairs]},
        "properties": [list(p) for p in properties],
        "references": list(refs),
    }


def graph(triples, refs, properties=()):
    return {
        "type": "graph",
        "payload": {"triples": [list(t) for t in triples]},
        "properties": [list(p) for p in properties],
        "references": list(refs),
    }


def table(cells, refs, properties=(), highlights=None, kind="table"):
    payload = {"cells": cells}
    if highlights:
        payload["highlights"] = [list(h) for h in highlights]
    return {
        "type": kind,
        "payload": payload,
        "properties": [list(p) for p in properties],
        "references": list(refs),
    }


def h(value):  # heading cell
    return {"value": value, "heading": True}


def c(value):  # plain cell
    return {"value": value}


E2E_MINI_DEV = [
    kv(
        [
            ("name", "Café Sicilia"),
            ("eatType", "coffee shop"),
            ("food", "Italian"),
            ("priceRange", "moderate"),
            ("area", "city centre"),
        ],
        ["Café Sicilia is a moderately priced Italian coffee shop in the city centre."],
    ),
    kv(
        [
            ("name", "The Punter"),
            ("eatType", "pub"),
            ("food", "English"),
            ("customer rating", "average"),
        ],
        [
            "The Punter is an English pub with an average customer rating.",
            "An average-rated pub called The Punter serves English food.",
        ],
    ),
    kv(
        [("name", "Aromi"), ("eatType", "coffee shop"), ("area", "riverside")],
        ["Aromi is a coffee shop on the riverside."],
    ),
    kv(
        [
            ("name", "Blue Spice"),
            ("priceRange", "more than £30"),
            ("customer rating", "5 out of 5"),
            ("familyFriendly", "no"),
        ],
        ["Blue Spice is a highly rated, expensive venue that is not family-friendly."],
    ),
    kv(
        [
            ("name", "The Wrestlers"),
            ("food", "Japanese"),
            ("priceRange", "less than £20"),
            ("familyFriendly", "yes"),
        ],
        ["The Wrestlers serves cheap Japanese food and welcomes families."],
    ),
]

E2E_MINI_TRAIN = [
    kv(
        [("name", "The Vaults"), ("eatType", "pub"), ("priceRange", "high")],
        ["The Vaults is an expensive pub."],
    ),
    kv(
        [("name", "The Cambridge Blue"), ("eatType", "restaurant"), ("food", "French")],
        ["The Cambridge Blue is a French restaurant."],
    ),
    kv(
        [("name", "Giraffe"), ("eatType", "restaurant"), ("area", "riverside")],
        ["Giraffe is a restaurant found by the river."],
    ),
]

WEBNLG_MINI_DEV = [
    graph(
        [
            ("Aarhus_Airport", "cityServed", "Aarhus"),
            ("Aarhus", "country", "Denmark"),
        ],
        ["Aarhus Airport serves the city of Aarhus in Denmark."],
        [("category", "Airport")],
    ),
    graph(
        [
            ("Alan_Shepard", "occupation", "Test_pilot"),
            ("Alan_Shepard", "birthPlace", "New_Hampshire"),
            ("Alan_Shepard", "selectedByNASA", "1959"),
        ],
        ["Alan Shepard, born in New Hampshire, was a test pilot picked by NASA in 1959."],
        [("category", "Astronaut")],
    ),
    graph(
        [("Above_the_Veil", "author", "Garth_Nix")],
        ["Above the Veil was written by Garth Nix."],
        [("category", "WrittenWork")],
    ),
    graph(
        [
            ("Adolfo_Suárez_Madrid–Barajas_Airport", "runwayLength", "4100.0"),
            ("Adolfo_Suárez_Madrid–Barajas_Airport", "location", "Madrid"),
        ],
        ["The Madrid-Barajas airport in Madrid has a runway length of 4100 metres."],
        [("category", "Airport")],
    ),
    graph(
        [
            ("Asam_pedas", "country", "Malaysia"),
            ("Asam_pedas", "mainIngredient", "Fish"),
            ("Malaysia", "capital", "Kuala_Lumpur"),
        ],
        ["Asam pedas is a fish dish from Malaysia, whose capital is Kuala Lumpur."],
        [("category", "Food")],
    ),
]

WEBNLG_MINI_TRAIN = [
    graph(
        [("Ajoblanco", "region", "Andalusia")],
        ["Ajoblanco comes from the Andalusia region."],
        [("category", "Food")],
    ),
    graph(
        [
            ("Audi_A1", "assembly", "Brussels"),
            ("Audi_A1", "engine", "1.2_L"),
        ],
        ["The Audi A1, assembled in Brussels, has a 1.2 litre engine."],
        [("category", "Transport")],
    ),
]

TOTTO_MINI_DEV = [
    table(
        [
            [h("Year"), h("Title"), h("Role")],
            [c("2005"), c("Pride & Prejudice"), c("Elizabeth Bennet")],
            [c("2007"), c("Atonement"), c("Cecilia Tallis")],
        ],
        ["In 2007 she played Cecilia Tallis in Atonement."],
        [("page_title", "Keira Knightley"), ("section_title", "Filmography")],
        highlights=[(2, 0), (2, 1), (2, 2)],
        kind="table_highlighted",
    ),
    table(
        [
            [{"value": "Team", "heading": True, "rowspan": 2},
             {"value": "Record", "heading": True, "colspan": 2},
             {"covered": [0, 1]}],
            [{"covered": [0, 0]}, h("Wins"), h("Losses")],
            [c("Lions"), c("10"), c("4")],
            [c("Tigers"), c("7"), c("7")],
        ],
        ["The Lions finished the season with 10 wins and 4 losses."],
        [("page_title", "1998 season"), ("section_title", "Standings")],
        highlights=[(2, 0), (2, 1), (2, 2)],
        kind="table_highlighted",
    ),
    table(
        [
            [h("Rank"), h("Nation"), h("Gold"), h("Total")],
            [c("1"), c("Norway"), c("14"), c("39")],
            [c("2"), c("Germany"), c("14"), c("31")],
            [c("3"), c("Canada"), c("11"), c("29")],
        ],
        ["Norway topped the medal table with 14 gold medals and 39 in total."],
        [("page_title", "2018 Winter Olympics"), ("section_title", "Medal table")],
        highlights=[(1, 1), (1, 2), (1, 3)],
        kind="table_highlighted",
    ),
    table(
        [
            [h("Single"), h("Year"), h("Peak position")],
            [c("Breathe"), c("2004"), c("4")],
            [c("Black Cherry"), c("2004"), c("17")],
        ],
        ["The single Breathe peaked at number 4 in 2004."],
        [("page_title", "Discography"), ("section_title", "Singles")],
        highlights=[(1, 0), (1, 2)],
        kind="table_highlighted",
    ),
    table(
        [
            [{"value": "Station", "heading": True},
             {"value": "Opened", "heading": True},
             {"value": "Platforms", "heading": True}],
            [c("Central"), c("1906"), c("25")],
            [c("Town Hall"), c("1932"), c("8")],
            [c("Museum"), c("1926"), c("2")],
        ],
        ["Central station opened in 1906 and has 25 platforms."],
        [("page_title", "Sydney railway stations"), ("section_title", "List")],
        highlights=[(1, 0), (1, 1), (1, 2)],
        kind="table_highlighted",
    ),
]

WIKISQL_MINI_DEV = [
    table(
        [
            [h("Player"), h("No."), h("Position")],
            [c("Antonio Lang"), c("21"), c("Guard-Forward")],
            [c("Voshon Lenard"), c("2"), c("Guard")],
            [c("Dan Majerle"), c("9"), c("Guard-Forward")],
        ],
        ["Antonio Lang wore number 21 and played as a guard-forward."],
        [("title", "Miami Heat all-time roster"),
         ("sql", "SELECT Position FROM roster WHERE Player = 'Antonio Lang'")],
    ),
    table(
        [
            [h("Date"), h("Opponent"), h("Score")],
            [c("May 1"), c("Rockets"), c("98-87")],
            [c("May 3"), c("Rockets"), c("91-103")],
        ],
        ["On May 1 the team beat the Rockets 98 to 87."],
        [("title", "1995 playoffs"),
         ("sql", "SELECT Score FROM games WHERE Date = 'May 1'")],
    ),
    table(
        [
            [h("Model"), h("Launch"), h("Cores")],
            [c("A100"), c("2020"), c("6912")],
            [c("V100"), c("2017"), c("5120")],
            [c("P100"), c("2016"), c("3584")],
        ],
        ["The A100, launched in 2020, has 6912 cores."],
        [("title", "Accelerator comparison"),
         ("sql", "SELECT Cores FROM gpus WHERE Model = 'A100'")],
    ),
    table(
        [
            [h("Country"), h("Capital")],
            [c("Peru"), c("Lima")],
            [c("Kenya"), c("Nairobi")],
            [c("Norway"), c("Oslo")],
            [c("Japan"), c("Tokyo")],
        ],
        ["Lima is the capital of Peru."],
        [("title", "Capitals"),
         ("sql", "SELECT Capital FROM countries WHERE Country = 'Peru'")],
    ),
    table(
        [
            [{"value": "Quarter", "heading": True},
             {"value": "Revenue", "heading": True, "colspan": 2},
             {"covered": [0, 1]}],
            [h(""), h("2022"), h("2023")],
            [c("Q1"), c("14.2"), c("18.1")],
            [c("Q2"), c("13.9"), c("19.4")],
        ],
        ["Revenue grew from 14.2 to 18.1 in the first quarter."],
        [("title", "Quarterly revenue"),
         ("sql", "SELECT Revenue FROM results WHERE Quarter = 'Q1'")],
    ),
]


def dataset_info(ds_id, name, description, homepage, license, data_type, split_sizes):
    return {
        "id": ds_id,
        "name": name,
        "description": description,
        "homepage": homepage,
        "license": license,
        "version": "1.0.0",
        "data_type": data_type,
        "split_sizes": split_sizes,
    }


OUTPUT_FILES = {
    "e2e_mini-dev-t5base.jsonl": [
        {"out": "Café Sicilia is an Italian coffee shop in the centre of the city."},
        {"out": "The Punter is a pub serving English food."},
        {"out": "Aromi is a riverside coffee shop."},
        {"out": "Blue Spice is an expensive venue rated 5 out of 5."},
        {"out": "The Wrestlers offers low-cost Japanese food for families."},
    ],
    "e2e_mini-dev-gpt2.jsonl": [
        {"index": 3, "out": "Blue Spice has a five star rating and high prices."},
        {"index": 1, "out": "The Punter is an average English pub."},
    ],
    "webnlg_mini-dev-t5base.jsonl": [
        {"out": "Aarhus airport serves Aarhus, Denmark."},
        {"out": "Alan Shepard was a test pilot from New Hampshire chosen by NASA in 1959."},
        {"out": "Garth Nix wrote Above the Veil."},
        {"out": "Madrid's Barajas airport has a 4100 metre runway."},
        {"out": "Asam pedas is a Malaysian fish dish."},
    ],
}

CONFIG_YAML = """\
host: 127.0.0.1
port: 8890
dataset_dir: datasets
output_dir: outputs
session_file: session.json
static_dir: ../frontend/dist
pipelines:
  - id: model_api
    processors: [model_api]
    params:
      prompt_template: "Describe the following data: {input}"
      endpoint: "http://127.0.0.1:9876/generate"
      timeout_ms: "10000"
  - id: rdf_graph
    processors: [rdf_graph]
"""


def main() -> int:
    if FIXTURES.exists():
        shutil.rmtree(FIXTURES)
    datasets = FIXTURES / "datasets"

    write_json(
        datasets / "e2e_mini" / "info.json",
        dataset_info(
            "e2e_mini",
            "E2E mini",
            "Restaurant descriptions from key-value meaning representations (sample).",
            "https://github.com/tuetschek/e2e-dataset",
            "CC BY-SA 4.0",
            "key_value",
            {"train": 3, "dev": 5},
        ),
    )
    write_jsonl(datasets / "e2e_mini" / "train.jsonl", E2E_MINI_TRAIN)
    write_jsonl(datasets / "e2e_mini" / "dev.jsonl", E2E_MINI_DEV)

    write_json(
        datasets / "webnlg_mini" / "info.json",
        dataset_info(
            "webnlg_mini",
            "WebNLG mini",
            "Verbalisations of subject-predicate-object triples (sample).",
            "https://webnlg-challenge.loria.fr",
            "CC BY-NC 4.0",
            "graph",
            {"train": 2, "dev": 5},
        ),
    )
    write_jsonl(datasets / "webnlg_mini" / "train.jsonl", WEBNLG_MINI_TRAIN)
    write_jsonl(datasets / "webnlg_mini" / "dev.jsonl", WEBNLG_MINI_DEV)

    write_json(
        datasets / "totto_mini" / "info.json",
        dataset_info(
            "totto_mini",
            "ToTTo mini",
            "Wikipedia tables with highlighted cells and one-sentence descriptions (sample).",
            "https://github.com/google-research-datasets/totto",
            "CC BY-SA 3.0",
            "table_highlighted",
            {"dev": 5},
        ),
    )
    write_jsonl(datasets / "totto_mini" / "dev.jsonl", TOTTO_MINI_DEV)

    write_json(
        datasets / "wikisql_mini" / "info.json",
        dataset_info(
            "wikisql_mini",
            "WikiSQL mini",
            "Plain tables with SQL queries carried as properties (sample).",
            "https://github.com/salesforce/WikiSQL",
            "BSD-3-Clause",
            "table",
            {"dev": 5},
        ),
    )
    write_jsonl(datasets / "wikisql_mini" / "dev.jsonl", WIKISQL_MINI_DEV)

    # Metadata-only manifest with the full dataset's real split sizes; no
    # example files ship with it.
    write_json(
        datasets / "e2e" / "info.json",
        dataset_info(
            "e2e",
            "E2E",
            "Restaurant domain key-value meaning representations (manifest only).",
            "https://github.com/tuetschek/e2e-dataset",
            "CC BY-SA 4.0",
            "key_value",
            {"train": 33525, "dev": 1484, "test": 1847},
        ),
    )

    for filename, records in OUTPUT_FILES.items():
        write_jsonl(FIXTURES / "outputs" / filename, records)

    (FIXTURES / "tabbench.yaml").write_text(CONFIG_YAML, encoding="utf-8")
    print(f"fixtures written to {FIXTURES}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
