"""Desk-scale retrieval evaluation: Top-n accuracy plus seeded benchmark
dataset generators.

Three dataset shapes are generated deterministically from a seed:

* movie   — 38 movies and 133 associated people, one context per movie,
            question-style cases ("who acted in <title>").
* animal  — 50 animal descriptions, cases built from trait subsets.
* defect  — a 28-defect synthetic catalog with images and rules, plus 88
            novice-style paraphrase queries over 5 focus defects (90
            drafted, two dropped as blanks).

Published accuracy numbers for datasets like these depend on proprietary
text and an external embedding model, so the harness treats accuracy as
report output, not a target: what is pinned down is structure (exact
entity counts, monotone top-n, oracle-exact ranks, byte-identical
reports per seed).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .embedding import EmbeddingProvider, embed_text
from .errors import EmptyCases, EmptyIndex
from .graph import NodeKind, PropertyGraph
from .index import VectorIndex

MISS = None  # rank sentinel: truth never appeared in the ranking


@dataclass(frozen=True)
class RetrievalCase:
    query: str
    truth_node_id: str

    def __post_init__(self) -> None:
        assert self.query and self.truth_node_id


@dataclass
class BenchmarkReport:
    dataset_name: str
    provider_name: str
    case_count: int
    top_n: dict[int, float]
    ranks: list[Optional[int]]

    def to_dict(self) -> dict:
        return {
            "dataset_name": self.dataset_name,
            "provider_name": self.provider_name,
            "case_count": self.case_count,
            "top_n": {str(n): acc for n, acc in sorted(self.top_n.items())},
            "ranks": list(self.ranks),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def to_table(self) -> str:
        lines = [f"dataset: {self.dataset_name}",
                 f"provider: {self.provider_name}",
                 f"cases: {self.case_count}",
                 "  n   top-n accuracy"]
        for n in sorted(self.top_n):
            lines.append(f"{n:>3}   {self.top_n[n]:.4f}")
        return "\n".join(lines)


def top_n_accuracy(ranks: Sequence[Optional[int]], n: int) -> float:
    """Fraction of cases whose truth ranked within the first n results."""
    if not ranks:
        raise EmptyCases("no ranks to score")
    if n < 1:
        raise ValueError("n must be >= 1")
    hits = sum(1 for r in ranks if r is not None and r <= n)
    return hits / len(ranks)


def run_retrieval_benchmark(index: VectorIndex, provider: EmbeddingProvider,
                            cases: Sequence[RetrievalCase], ns: Sequence[int],
                            dataset_name: str = "custom") -> BenchmarkReport:
    """Rank every case against the full index via the brute-force oracle.

    A case's rank is the 1-based position of the first context belonging
    to the truth node (its best context, when it has several).
    """
    if len(index) == 0:
        raise EmptyIndex("cannot benchmark an empty index")
    ranks: list[Optional[int]] = []
    for case in cases:
        ranking = index.brute_force_rank(embed_text(provider, case.query))
        rank = MISS
        for position, hit in enumerate(ranking, start=1):
            if hit.node_id == case.truth_node_id:
                rank = position
                break
        ranks.append(rank)
    return BenchmarkReport(
        dataset_name=dataset_name,
        provider_name=provider.name,
        case_count=len(cases),
        top_n={n: top_n_accuracy(ranks, n) for n in ns},
        ranks=ranks,
    )


# --- movie benchmark -------------------------------------------------------

_FIRST_NAMES = (
    "Ada", "Bruno", "Clara", "Denis", "Edith", "Felix", "Greta", "Hugo", "Ines",
    "Jonas", "Katia", "Lucas", "Mira", "Nils", "Odile", "Pavel", "Quentin",
    "Rosa", "Sven", "Talia", "Ugo", "Vera", "Willem", "Xenia", "Yann", "Zoe",
    "Anton", "Britt", "Cedric", "Dora", "Elias", "Flora", "Gaspard", "Hanna",
    "Igor", "Jules", "Kira", "Leon", "Marta", "Nora",
)
_LAST_NAMES = (
    "Arnold", "Baumann", "Chappuis", "Dubois", "Egger", "Favre", "Gerber",
    "Huber", "Imhof", "Jaccard", "Keller", "Lambert", "Maillard", "Nussbaum",
    "Oberson", "Perret", "Quartier", "Rochat", "Steiner", "Tissot", "Udry",
    "Vaucher", "Wyss", "Zbinden", "Aubert", "Berger", "Cornu", "Droz",
    "Emery", "Fontaine", "Gillard", "Hofer", "Isler", "Junod", "Kunz",
    "Leuba", "Monnier", "Nicolet", "Oppliger", "Piguet",
)
_TITLE_ADJECTIVES = (
    "Crimson", "Silent", "Last", "Hidden", "Broken", "Golden", "Frozen",
    "Burning", "Endless", "Forgotten", "Iron", "Hollow", "Distant", "Midnight",
)
_TITLE_NOUNS = (
    "Harbor", "Orchard", "Signal", "Meridian", "Furnace", "Archive", "Lantern",
    "Causeway", "Glacier", "Foundry", "Compass", "Station", "Veranda", "Quarry",
    "Summit", "Estuary", "Workshop", "Observatory", "Reservoir", "Junction",
)
_GENRES = ("heist", "courtroom", "survival", "espionage", "romance", "mystery",
           "road-trip", "coming-of-age", "disaster", "noir")
_THEMES = ("smugglers", "archivists", "lighthouse keepers", "chess prodigies",
           "volcanologists", "train conductors", "beekeepers", "cartographers",
           "glassblowers", "stunt pilots", "radio operators", "deep-sea divers",
           "clockmakers", "mountain guides", "typesetters", "falconers")

MOVIE_COUNT = 38
PERSON_COUNT = 133


@dataclass
class GeneratedBenchmark:
    """Dataset ready to install into a graph + index."""

    name: str
    nodes: list[dict] = field(default_factory=list)
    edges: list[tuple[str, str, str]] = field(default_factory=list)
    contexts: list[tuple[str, str]] = field(default_factory=list)  # (node_id, text)
    cases: list[RetrievalCase] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({
            "name": self.name,
            "nodes": self.nodes,
            "edges": [list(e) for e in self.edges],
            "contexts": [list(c) for c in self.contexts],
            "cases": [{"query": c.query, "truth_node_id": c.truth_node_id} for c in self.cases],
        }, sort_keys=True, separators=(",", ":"))

    def install(self, graph: PropertyGraph, index: VectorIndex,
                provider: EmbeddingProvider) -> None:
        for node in self.nodes:
            graph.upsert_node(node["id"], NodeKind(node["kind"]), node.get("props", {}))
        for src, rel, dst in self.edges:
            graph.add_edge(src, rel, dst)
        for node_id, text in self.contexts:
            index.index_context(node_id, text, provider)


def generate_movie_benchmark(seed: int) -> GeneratedBenchmark:
    rng = random.Random(f"movie-{seed}")
    bench = GeneratedBenchmark(name="movie")

    people = []
    seen = set()
    while len(people) < PERSON_COUNT:
        name = f"{rng.choice(_FIRST_NAMES)} {rng.choice(_LAST_NAMES)}"
        if name not in seen:
            seen.add(name)
            people.append(name)
    for name in people:
        bench.nodes.append({"id": f"person:{name}", "kind": "Generic",
                            "props": {"type": "person", "name": name}})

    titles = []
    seen_titles = set()
    while len(titles) < MOVIE_COUNT:
        title = f"The {rng.choice(_TITLE_ADJECTIVES)} {rng.choice(_TITLE_NOUNS)}"
        if title not in seen_titles:
            seen_titles.add(title)
            titles.append(title)

    # everyone must be associated with at least one movie
    unassigned = list(range(PERSON_COUNT))
    rng.shuffle(unassigned)

    for title in titles:
        year = rng.randint(1962, 2023)
        genre = rng.choice(_GENRES)
        theme = rng.choice(_THEMES)
        cast_size = rng.randint(2, 4)
        cast = []
        while unassigned and len(cast) < cast_size:
            cast.append(people[unassigned.pop()])
        while len(cast) < cast_size:
            extra = people[rng.randrange(PERSON_COUNT)]
            if extra not in cast:
                cast.append(extra)
        if unassigned:
            director = people[unassigned.pop()]
        else:
            director = people[rng.randrange(PERSON_COUNT)]
            while director in cast:
                director = people[rng.randrange(PERSON_COUNT)]
        movie_id = f"movie:{title}"
        description = f"A {genre} story about {theme}."
        context = (f"{title}. {description} Released in {year}. "
                   f"Starring {', '.join(cast)}. Directed by {director}.")
        bench.nodes.append({"id": movie_id, "kind": "Generic",
                            "props": {"type": "movie", "title": title, "year": year}})
        for actor in cast:
            bench.edges.append((f"person:{actor}", "acted_in", movie_id))
        bench.edges.append((f"person:{director}", "directed", movie_id))
        bench.contexts.append((movie_id, context))
        bench.cases.append(RetrievalCase(query=f"who acted in {title}",
                                         truth_node_id=movie_id))
        bench.cases.append(RetrievalCase(query=f"movie about {theme}",
                                         truth_node_id=movie_id))
    # leftover people (when every movie filled up from the pool early)
    while unassigned:
        person = people[unassigned.pop()]
        movie_id = f"movie:{titles[rng.randrange(MOVIE_COUNT)]}"
        bench.edges.append((f"person:{person}", "acted_in", movie_id))
    return bench


# --- animal benchmark --------------------------------------------------------

_ANIMALS = (
    "lynx", "marmot", "ibex", "chamois", "badger", "otter", "hedgehog", "stoat",
    "capercaillie", "kingfisher", "heron", "osprey", "kestrel", "raven",
    "viper", "salamander", "treefrog", "carp", "pike", "trout",
    "wolf", "brownbear", "wildboar", "reddeer", "roedeer", "hare", "dormouse",
    "beaver", "squirrel", "bat", "mole", "shrew", "weasel", "polecat",
    "eagleowl", "buzzard", "stork", "swift", "lapwing", "curlew",
    "grayling", "barbel", "crayfish", "dragonfly", "firebug", "stagbeetle",
    "hornet", "mantis", "glowworm", "papillon",
)
_SIZES = ("tiny", "small", "medium-sized", "large", "massive")
_COLORS = ("brown", "gray", "black", "white", "reddish", "golden", "spotted",
           "striped")
_HABITATS = ("alpine meadows", "dense forests", "riverbanks", "wetlands",
             "rocky cliffs", "hedgerows", "mountain lakes", "old orchards")
_FEATURES = ("tufted ears", "a bushy tail", "curved horns", "webbed feet",
             "sharp talons", "a long snout", "bright plumage", "powerful claws",
             "silent wings", "a forked tongue")
_DIETS = ("small rodents", "fresh fish", "alpine herbs", "insects and larvae",
          "berries and roots", "carrion", "frogs and worms", "seeds and nuts")

ANIMAL_COUNT = 50


def generate_animal_benchmark(seed: int) -> GeneratedBenchmark:
    rng = random.Random(f"animal-{seed}")
    bench = GeneratedBenchmark(name="animal")
    for name in _ANIMALS[:ANIMAL_COUNT]:
        size = rng.choice(_SIZES)
        color = rng.choice(_COLORS)
        habitat = rng.choice(_HABITATS)
        feature = rng.choice(_FEATURES)
        diet = rng.choice(_DIETS)
        node_id = f"animal:{name}"
        context = (f"The {name} is a {size} animal with {color} coloring. "
                   f"It lives in {habitat}. It has {feature} and feeds on {diet}.")
        bench.nodes.append({"id": node_id, "kind": "Generic",
                            "props": {"type": "animal", "name": name}})
        bench.contexts.append((node_id, context))
        bench.cases.append(RetrievalCase(
            query=f"a {size} animal with {feature} living in {habitat}",
            truth_node_id=node_id))
    return bench


# --- defect benchmark ----------------------------------------------------------

_DEFECT_NAMES = (
    "stain", "scratch", "dent", "burr", "crack", "chatter", "pitting",
    "discoloration", "warping", "burn", "flaking", "inclusion", "porosity",
    "waviness", "smear", "gouge", "haze", "blister", "ripple", "scuff",
    "tarnish", "fissure", "chip", "streak", "crater", "fold", "spatter",
    "delamination",
)
_DEFECT_COLORS = ("dark", "pale", "bluish", "rusty", "silvery", "yellowish",
                  "dull", "shiny")
_DEFECT_SHAPES = ("circular", "elongated", "jagged", "branching", "crescent",
                  "wavy", "clustered", "linear")
_DEFECT_TEXTURES = ("rough", "smooth", "raised", "recessed", "granular", "glossy")
_DEFECT_LOCATIONS = ("edge", "center", "corner", "bore", "flange", "groove")
_DEFECT_CATEGORIES = ("surface finish", "geometry", "material", "contamination")
_DEFECT_MACHINES = ("milling station 3", "cnc lathe 1", "surface grinder",
                    "anodizing line", "polishing cell", "drill press 7")
_NOVICE_TEMPLATES = (
    "i can see a {color} {shape} mark near the {location} of the plate",
    "there is some {color} {shape} damage around the {location}",
    "a {shape} {color} flaw shows up close to the {location} area",
)

DEFECT_COUNT = 28
FOCUS_DEFECTS = 5
QUESTIONNAIRE_RESPONDENTS = 6
DESCRIPTIONS_PER_DEFECT = 3
BLANK_RESPONSES = 2


@dataclass
class DefectBenchmark:
    catalog: dict
    images: dict[str, bytes]  # relative path -> bytes
    cases: list[RetrievalCase]
    focus_defects: list[str]

    def to_json(self) -> str:
        return json.dumps({
            "catalog": self.catalog,
            "images": {path: data.hex() for path, data in sorted(self.images.items())},
            "cases": [{"query": c.query, "truth_node_id": c.truth_node_id} for c in self.cases],
            "focus_defects": self.focus_defects,
        }, sort_keys=True, separators=(",", ":"))

    def materialize(self, directory: Path | str) -> Path:
        """Write catalog.json plus image files; returns the catalog path."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        for rel_path, data in self.images.items():
            target = directory / rel_path
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_bytes(data)
        catalog_path = directory / "catalog.json"
        catalog_path.write_text(json.dumps(self.catalog, indent=2, sort_keys=True))
        return catalog_path


def _defect_image(rng: random.Random, defect_index: int, size: int = 1024) -> bytes:
    """Synthetic image bytes with a defect-specific intensity signature.

    Each defect's intensities straddle one 32-wide histogram bin boundary at
    a defect-specific ratio, so every defect gets a distinct, separable
    intensity histogram (boundary choice x split ratio).
    """
    boundary = 32 * (1 + defect_index % 7)
    offset = 5 * (defect_index // 7) - 10
    center = boundary + offset
    return bytes(min(255, max(0, center + rng.randint(-12, 12))) for _ in range(size))


def generate_defect_benchmark(seed: int) -> DefectBenchmark:
    rng = random.Random(f"defect-{seed}")

    # distinct (color, shape, location) triple per defect keeps queries separable
    triples = []
    seen = set()
    while len(triples) < DEFECT_COUNT:
        triple = (rng.choice(_DEFECT_COLORS), rng.choice(_DEFECT_SHAPES),
                  rng.choice(_DEFECT_LOCATIONS))
        if triple not in seen:
            seen.add(triple)
            triples.append(triple)

    defects = []
    images: dict[str, bytes] = {}
    for i, name in enumerate(_DEFECT_NAMES[:DEFECT_COUNT]):
        color, shape, location = triples[i]
        texture = rng.choice(_DEFECT_TEXTURES)
        category = rng.choice(_DEFECT_CATEGORIES)
        machines = rng.sample(_DEFECT_MACHINES, rng.randint(1, 2))
        descriptions = [
            f"A {color} {shape} mark with {texture} edges located at the {location}.",
            f"{name.capitalize()} appears as {color} {shape} damage near the {location}.",
            f"Typically {texture} to the touch, {color} in tone and {shape} in outline, "
            f"found around the {location}.",
        ]
        image_paths = []
        for j in range(2):
            rel_path = f"images/{name}-{j}.bin"
            images[rel_path] = _defect_image(rng, i)
            image_paths.append(rel_path)
        defects.append({
            "id": f"defect:{name}",
            "name": name,
            "category": category,
            "machines": machines,
            "descriptions": descriptions,
            "images": image_paths,
            "measurement_instruction": f"Measure the {name} depth at the {location} "
                                       f"with the depth gauge.",
            "rules": [
                {"metric": "depth", "op": "LE", "threshold": 0.2,
                 "action": "Conform", "priority": 1},
                {"metric": "depth", "op": "GT", "threshold": 0.5,
                 "action": "Scrap", "priority": 2},
                {"metric": "depth", "op": "BETWEEN", "threshold": [0.2, 0.5],
                 "action": "Review", "priority": 3},
            ],
        })

    focus = sorted(rng.sample(range(DEFECT_COUNT), FOCUS_DEFECTS))
    drafts = []
    for defect_index in focus:
        color, shape, location = triples[defect_index]
        defect_id = defects[defect_index]["id"]
        for respondent in range(QUESTIONNAIRE_RESPONDENTS):
            for variant in range(DESCRIPTIONS_PER_DEFECT):
                template = _NOVICE_TEMPLATES[(respondent + variant) % len(_NOVICE_TEMPLATES)]
                drafts.append(RetrievalCase(
                    query=template.format(color=color, shape=shape, location=location),
                    truth_node_id=defect_id))
    blanks = set(rng.sample(range(len(drafts)), BLANK_RESPONSES))
    cases = [case for i, case in enumerate(drafts) if i not in blanks]

    return DefectBenchmark(
        catalog={"defects": defects},
        images=images,
        cases=cases,
        focus_defects=[defects[i]["id"] for i in focus],
    )
