"""Three-level topic hierarchy: domain > category > topic.

The registry file is plain JSON mapping domain names to categories, each
holding a list of leaf topic names. A full 8-domain / 3,500-topic fixture
ships with the package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping

from ..errors import DuplicateNameError, EmptyLevelError
from ..model import TopicPath


@dataclass(frozen=True)
class Category:
    name: str
    topics: tuple[str, ...]


@dataclass(frozen=True)
class Domain:
    name: str
    categories: tuple[Category, ...]


@dataclass(frozen=True)
class HierarchyCounts:
    domains: int
    categories: int
    topics: int


@dataclass(frozen=True)
class TopicHierarchy:
    domains: tuple[Domain, ...]

    def counts(self) -> HierarchyCounts:
        categories = sum(len(d.categories) for d in self.domains)
        topics = sum(len(c.topics) for d in self.domains for c in d.categories)
        return HierarchyCounts(len(self.domains), categories, topics)

    def leaves(self) -> tuple[TopicPath, ...]:
        return tuple(
            TopicPath(d.name, c.name, t)
            for d in self.domains
            for c in d.categories
            for t in c.topics
        )

    def contains(self, path: TopicPath) -> bool:
        for domain in self.domains:
            if domain.name != path.domain:
                continue
            for category in domain.categories:
                if category.name == path.category:
                    return path.topic in category.topics
        return False

    def domain_counts(self) -> dict[str, int]:
        return {d.name: sum(len(c.topics) for c in d.categories) for d in self.domains}


def _validate_unique(names, where: str):
    seen = set()
    for name in names:
        if name in seen:
            raise DuplicateNameError(f"{where}/{name}")
        seen.add(name)


def hierarchy_from_mapping(data: Mapping[str, Mapping[str, list[str]]]) -> TopicHierarchy:
    if not data:
        raise EmptyLevelError("(root)")
    _validate_unique(data.keys(), "(root)")
    domains = []
    for domain_name, categories in data.items():
        if not categories:
            raise EmptyLevelError(domain_name)
        _validate_unique(categories.keys(), domain_name)
        built = []
        for category_name, topics in categories.items():
            where = f"{domain_name}/{category_name}"
            if not topics:
                raise EmptyLevelError(where)
            _validate_unique(topics, where)
            built.append(Category(category_name, tuple(topics)))
        domains.append(Domain(domain_name, tuple(built)))
    return TopicHierarchy(tuple(domains))


def load_topic_hierarchy(path: str | Path) -> TopicHierarchy:
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    return hierarchy_from_mapping(data)


def packaged_hierarchy() -> TopicHierarchy:
    ref = resources.files(__package__).joinpath("fixtures/topic_hierarchy.json")
    return hierarchy_from_mapping(json.loads(ref.read_text(encoding="utf-8")))
