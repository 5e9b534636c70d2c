"""Attribute schema, seed profiles, and run configuration.

A schema is an ordered list of categorical attributes, each value carrying a
population proportion (proportions per attribute sum to 1).  A profile picks
exactly one value per attribute; ten profiles exist and communities 0..9 map
onto them.  The whole bundle, plus pipeline knobs and file paths, travels as
one YAML-serializable :class:`GenerationConfig`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import yaml

from .errors import ConfigError

RANDOMNESS_LEVELS = {"low": 0.3, "medium": 0.5, "high": 0.7}
NUM_PROFILES = 10


@dataclass(frozen=True)
class Attribute:
    """One categorical attribute: ordered values with population shares."""

    name: str
    values: tuple[str, ...]
    proportions: tuple[float, ...]
    description: str = ""

    @property
    def num_values(self) -> int:
        return len(self.values)

    def index_of(self, label: str) -> int:
        try:
            return self.values.index(label)
        except ValueError:
            raise ConfigError(f"attribute {self.name!r} has no value {label!r}") from None

    def sample(self, rng, size: int) -> np.ndarray:
        """Draw ``size`` value codes according to the proportions."""
        cum = np.cumsum(np.asarray(self.proportions, np.float64))
        idx = np.searchsorted(cum, rng.random(size), side="right")
        return np.minimum(idx, self.num_values - 1).astype(np.int16)


@dataclass
class Profile:
    """A seed persona: one chosen value per schema attribute."""

    profile_id: int
    choices: dict[str, str]


@dataclass
class GenerationConfig:
    """Everything one data-generation run needs."""

    schema: list[Attribute]
    profiles: list[Profile]
    assignment: dict[int, int]
    seeds_percent: float = 11.0
    randomness: str = "low"
    diversity_p: float | None = None
    class_yes_proportion: float = 0.3
    rng_seed: int = 0
    graph_path: str | None = None
    communities_path: str | None = None
    output_dir: str = "resources/Output_files"
    output_base: str | None = None

    @property
    def p(self) -> float:
        """Diversity probability: explicit override or the randomness level."""
        if self.diversity_p is not None:
            return self.diversity_p
        try:
            return RANDOMNESS_LEVELS[self.randomness]
        except KeyError:
            raise ConfigError(f"unknown randomness level {self.randomness!r}") from None

    def attribute(self, name: str) -> Attribute:
        for attr in self.schema:
            if attr.name == name:
                return attr
        raise ConfigError(f"no attribute named {name!r}")

    def profile_by_id(self, pid: int) -> Profile:
        for prof in self.profiles:
            if prof.profile_id == pid:
                return prof
        raise ConfigError(f"no profile with id {pid}")

    def copy_with(self, **kw) -> "GenerationConfig":
        return replace(self, **kw)


def validate(config: GenerationConfig) -> list[str]:
    """Collect every rule violation; an empty list means the config is usable.

    Each message names the offending attribute, profile, or field so the
    report stands on its own.
    """
    problems: list[str] = []
    if not config.schema:
        problems.append("schema: no attributes defined")
    seen_names = set()
    for attr in config.schema:
        tag = f"attribute {attr.name!r}"
        if attr.name in seen_names:
            problems.append(f"{tag}: duplicate attribute name")
        seen_names.add(attr.name)
        if not attr.values:
            problems.append(f"{tag}: no values")
            continue
        if len(attr.values) != len(attr.proportions):
            problems.append(f"{tag}: {len(attr.values)} values but {len(attr.proportions)} proportions")
            continue
        if len(set(attr.values)) != len(attr.values):
            problems.append(f"{tag}: duplicate value labels")
        if any(p < 0.0 or p > 1.0 for p in attr.proportions):
            problems.append(f"{tag}: proportions must lie in [0, 1]")
        total = sum(attr.proportions)
        if abs(total - 1.0) > 1e-6:
            problems.append(f"{tag}: proportions sum to {total:.6f}, expected 1")
    if len(config.profiles) != NUM_PROFILES:
        problems.append(f"profiles: expected {NUM_PROFILES}, found {len(config.profiles)}")
    ids = [p.profile_id for p in config.profiles]
    if len(set(ids)) != len(ids):
        problems.append("profiles: duplicate profile ids")
    attr_names = [a.name for a in config.schema]
    for prof in config.profiles:
        tag = f"profile {prof.profile_id}"
        for name in attr_names:
            if name not in prof.choices:
                problems.append(f"{tag}: missing a choice for attribute {name!r}")
        for name, value in prof.choices.items():
            if name not in attr_names:
                problems.append(f"{tag}: choice for unknown attribute {name!r}")
            elif value not in config.attribute(name).values:
                problems.append(f"{tag}: value {value!r} not defined for attribute {name!r}")
    valid_ids = set(ids)
    for community in range(NUM_PROFILES):
        if community not in config.assignment:
            problems.append(f"assignment: community {community} has no profile")
    for community, pid in config.assignment.items():
        if community not in range(NUM_PROFILES):
            problems.append(f"assignment: community {community} out of range 0..9")
        if pid not in valid_ids:
            problems.append(f"assignment: community {community} maps to unknown profile {pid}")
    if not 0.0 < config.seeds_percent <= 50.0:
        problems.append(f"seeds_percent: {config.seeds_percent} outside (0, 50]")
    if config.diversity_p is None and config.randomness not in RANDOMNESS_LEVELS:
        problems.append(f"randomness: {config.randomness!r} not one of {sorted(RANDOMNESS_LEVELS)}")
    if config.diversity_p is not None and not 0.0 <= config.diversity_p <= 1.0:
        problems.append(f"diversity_p: {config.diversity_p} outside [0, 1]")
    if not 0.0 <= config.class_yes_proportion <= 1.0:
        problems.append(f"class_yes_proportion: {config.class_yes_proportion} outside [0, 1]")
    for label, path in (("graph", config.graph_path), ("communities", config.communities_path)):
        if path is not None and not Path(path).is_file():
            problems.append(f"paths.{label}: file not found: {path}")
    return problems


def config_to_dict(config: GenerationConfig) -> dict:
    return {
        "version": 1,
        "rng_seed": config.rng_seed,
        "seeds_percent": config.seeds_percent,
        "randomness": config.randomness,
        "diversity_p": config.diversity_p,
        "class_yes_proportion": config.class_yes_proportion,
        "paths": {
            "graph": config.graph_path,
            "communities": config.communities_path,
            "output_dir": config.output_dir,
            "output_base": config.output_base,
        },
        "attributes": [
            {
                "name": a.name,
                "description": a.description,
                "values": [
                    {"value": v, "proportion": p}
                    for v, p in zip(a.values, a.proportions)
                ],
            }
            for a in config.schema
        ],
        "profiles": [
            {"id": p.profile_id, "choices": dict(p.choices)} for p in config.profiles
        ],
        "assignment": {int(k): int(v) for k, v in config.assignment.items()},
    }


def _require(mapping, key, kind, context):
    if not isinstance(mapping, dict) or key not in mapping:
        raise ConfigError(f"{context}: missing required key {key!r}")
    value = mapping[key]
    if not isinstance(value, kind):
        raise ConfigError(f"{context}: key {key!r} must be {kind.__name__}")
    return value


def _config_from_dict(raw: dict, context: str) -> GenerationConfig:
    if not isinstance(raw, dict):
        raise ConfigError(f"{context}: top level must be a mapping")
    version = raw.get("version", 1)
    if version != 1:
        raise ConfigError(f"{context}: unsupported config version {version!r}")
    schema = []
    names = set()
    for entry in _require(raw, "attributes", list, context):
        name = _require(entry, "name", str, f"{context}: attribute")
        if name in names:
            raise ConfigError(f"{context}: duplicate attribute name {name!r}")
        names.add(name)
        values = []
        props = []
        for item in _require(entry, "values", list, f"{context}: attribute {name!r}"):
            values.append(_require(item, "value", str, f"{context}: attribute {name!r}"))
            prop = _require(item, "proportion", (int, float), f"{context}: attribute {name!r}")
            props.append(float(prop))
        schema.append(
            Attribute(
                name=name,
                values=tuple(values),
                proportions=tuple(props),
                description=str(entry.get("description", "")),
            )
        )
    profiles = []
    for entry in _require(raw, "profiles", list, context):
        pid = _require(entry, "id", int, f"{context}: profile")
        choices = _require(entry, "choices", dict, f"{context}: profile {pid}")
        profiles.append(Profile(profile_id=pid, choices={str(k): str(v) for k, v in choices.items()}))
    assignment_raw = _require(raw, "assignment", dict, context)
    assignment = {}
    for k, v in assignment_raw.items():
        try:
            assignment[int(k)] = int(v)
        except (TypeError, ValueError):
            raise ConfigError(f"{context}: assignment entries must be integers") from None
    paths = raw.get("paths") or {}
    if not isinstance(paths, dict):
        raise ConfigError(f"{context}: paths must be a mapping")
    diversity_p = raw.get("diversity_p")
    return GenerationConfig(
        schema=schema,
        profiles=profiles,
        assignment=assignment,
        seeds_percent=float(raw.get("seeds_percent", 11.0)),
        randomness=str(raw.get("randomness", "low")),
        diversity_p=None if diversity_p is None else float(diversity_p),
        class_yes_proportion=float(raw.get("class_yes_proportion", 0.3)),
        rng_seed=int(raw.get("rng_seed", 0)),
        graph_path=paths.get("graph"),
        communities_path=paths.get("communities"),
        output_dir=str(paths.get("output_dir", "resources/Output_files")),
        output_base=paths.get("output_base"),
    )


def load_config(path) -> GenerationConfig:
    """Parse a YAML run configuration.

    Structural problems (wrong types, duplicate attribute names, bad YAML)
    raise :class:`ConfigError` immediately; semantic rule violations are the
    domain of :func:`validate`.
    """
    path = str(path)
    try:
        with open(path, encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML: {exc}") from None
    return _config_from_dict(raw, path)


def save_config(config: GenerationConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(config_to_dict(config), fh, sort_keys=False, allow_unicode=True)


def default_schema() -> list[Attribute]:
    """The built-in demographic and interest schema."""
    return [
        Attribute(
            "Age",
            ("18-25", "26-35", "36-45", "46-55", "56-65", "66-75", "76-85"),
            (0.25, 0.25, 0.14, 0.10, 0.09, 0.09, 0.08),
            "Age bracket",
        ),
        Attribute("Gender", ("Male", "Female"), (0.50, 0.50), "Declared gender"),
        Attribute(
            "Residence",
            ("PaloAlto", "SantaBarbara", "Winthrop", "Boston", "Cambridge", "SanJose"),
            (0.12, 0.22, 0.19, 0.19, 0.19, 0.09),
            "Home town",
        ),
        Attribute(
            "Religion",
            (
                "Buddhist",
                "Christian",
                "Hindu",
                "Jewish",
                "Muslim",
                "Sikh",
                "TraditionalSpirituality",
                "OtherReligion",
                "NoReligiousAffiliation",
            ),
            (0.20, 0.22, 0.26, 0.09, 0.09, 0.02, 0.0, 0.0, 0.12),
            "Religious affiliation",
        ),
        Attribute(
            "MaritalStatus",
            ("Single", "Married", "Divorced", "Widowed"),
            (0.34, 0.34, 0.14, 0.18),
            "Marital status",
        ),
        Attribute(
            "Profession",
            (
                "Manager",
                "Professional",
                "Service",
                "Salesandoffice",
                "NaturalResourcesConstructionAndMaintenance",
                "ProductionTransportationAndMaterialMoving",
                "Student",
            ),
            (0.10, 0.26, 0.09, 0.41, 0.0, 0.0, 0.14),
            "Occupation group",
        ),
        Attribute(
            "PoliticalOrientation",
            ("FarLeft", "Left", "CenterLeft", "Center", "CenterRight", "Right", "FarRight"),
            (0.09, 0.20, 0.14, 0.30, 0.17, 0.095, 0.005),
            "Political leaning",
        ),
        Attribute(
            "SexualOrientation",
            ("Asexual", "Bisexual", "Heterosexual", "Homosexual"),
            (0.03, 0.05, 0.87, 0.05),
            "Sexual orientation",
        ),
        Attribute(
            "Like1",
            ("Entertainment", "Music Artist", "Drink Brand", "TV Show"),
            (0.35, 0.18, 0.14, 0.33),
            "First liked page category",
        ),
        Attribute(
            "Like2",
            ("Entertainment", "Music Artist", "TV Show", "Drink Brand"),
            (0.30, 0.30, 0.25, 0.15),
            "Second liked page category",
        ),
        Attribute(
            "Like3",
            ("Music Artist", "Entertainment", "Drink Brand", "Soccer Club"),
            (0.14, 0.23, 0.32, 0.31),
            "Third liked page category",
        ),
    ]


# Personas are picked so that, weighted by the size of the community each one
# lands on under default_assignment, the per-attribute mix stays close to the
# schema proportions.  That keeps the profile-driven and schema-driven parts
# of propagation pulling in the same direction, so repeated runs on one graph
# stay stable.
_DEFAULT_PROFILE_ROWS = [
    # Age, Gender, Residence, Religion, Marital, Profession, Political, Sexual, Like1, Like2, Like3
    ("36-45", "Male", "Boston", "NoReligiousAffiliation", "Married", "Salesandoffice", "Center", "Heterosexual", "TV Show", "Entertainment", "Drink Brand"),
    ("26-35", "Female", "Cambridge", "Buddhist", "Single", "Professional", "Center", "Heterosexual", "Entertainment", "TV Show", "Soccer Club"),
    ("18-25", "Male", "PaloAlto", "Christian", "Single", "Student", "CenterLeft", "Heterosexual", "Drink Brand", "Drink Brand", "Entertainment"),
    ("56-65", "Female", "Winthrop", "Hindu", "Single", "Salesandoffice", "CenterRight", "Heterosexual", "TV Show", "TV Show", "Soccer Club"),
    ("46-55", "Female", "Winthrop", "Muslim", "Married", "Professional", "CenterRight", "Heterosexual", "Music Artist", "TV Show", "Soccer Club"),
    ("66-75", "Female", "SanJose", "Jewish", "Married", "Professional", "FarLeft", "Heterosexual", "Entertainment", "TV Show", "Entertainment"),
    ("26-35", "Female", "Boston", "Buddhist", "Married", "Manager", "Right", "Bisexual", "Drink Brand", "Music Artist", "Music Artist"),
    ("76-85", "Male", "SantaBarbara", "Christian", "Widowed", "Manager", "Right", "Heterosexual", "TV Show", "Music Artist", "Music Artist"),
    ("26-35", "Female", "Cambridge", "Christian", "Widowed", "Service", "Center", "Homosexual", "Music Artist", "Music Artist", "Entertainment"),
    ("18-25", "Male", "SantaBarbara", "Hindu", "Divorced", "Salesandoffice", "Left", "Heterosexual", "Entertainment", "Entertainment", "Drink Brand"),
]


def default_profiles(schema=None) -> list[Profile]:
    schema = schema if schema is not None else default_schema()
    names = [a.name for a in schema]
    return [
        Profile(profile_id=i, choices=dict(zip(names, row)))
        for i, row in enumerate(_DEFAULT_PROFILE_ROWS)
    ]


def default_assignment() -> dict[int, int]:
    """Community -> profile map; communities 1 and 4 get the student and
    retiree personas used throughout the bundled examples."""
    return {0: 0, 1: 2, 2: 1, 3: 3, 4: 5, 5: 4, 6: 8, 7: 7, 8: 6, 9: 9}


def default_config() -> GenerationConfig:
    return GenerationConfig(
        schema=default_schema(),
        profiles=default_profiles(),
        assignment=default_assignment(),
    )
