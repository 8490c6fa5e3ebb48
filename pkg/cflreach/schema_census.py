"""
JSON schema to grammar conversion and the linearity census.

Values are converted in continuation-passing style: ``convert(schema, K)``
yields a nonterminal deriving the value's tokens followed by whatever K
derives. Object properties, nested objects, fixed tuples and unions then
stay in a single chain with at most one nonterminal per rule. Variable
length arrays use the repetition ``Items -> Item | Item , Items`` and
permissive additional properties use the same shape, which is where
non-linearity comes from.
"""

import csv
import json
import logging
import re
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, NamedTuple, Optional, Set, Tuple, Union
from urllib.parse import unquote

import httpx
from typing_extensions import Final

from .exceptions import (
    CflReachError,
    NetworkError,
    RateLimitError,
    SchemaConversionError,
    TimeoutError,
    create_error_from_response,
)
from .grammar import Grammar, Production, Symbol, is_linear, nonterminal, terminal
from .models import (
    CensusReport,
    CensusRow,
    FeatureCount,
    FetchSettings,
    GrammarClass,
    SchemaFeature,
    SchemaRecord,
    SizeSummary,
    Split,
    SplitSummary,
)
from .utils import mean_or_zero, retry_with_backoff, summarize

logger = logging.getLogger(__name__)

INLINE_BUDGET: Final = 2000
MAX_UNROLL: Final = 64
DEFINITION_KEYS: Final = frozenset({"definitions", "$defs"})
STRUCTURAL_KEYS: Final = frozenset(
    {
        "type", "properties", "items", "prefixItems", "additionalProperties", "patternProperties",
        "enum", "const", "anyOf", "oneOf", "allOf", "$ref",
    }
)
DATA_KEYS: Final = frozenset({"enum", "const", "default", "examples"})
PROPERTY_MAP_KEYS: Final = frozenset({"properties", "patternProperties"})

PRIMITIVE_TERMINALS: Final = {
    "string": "STR",
    "integer": "NUM",
    "number": "NUM",
    "boolean": "BOOL",
    "null": "NULL",
}

SPLIT_ALIASES: Final = {
    "train": Split.TRAIN,
    "val": Split.VALIDATION,
    "valid": Split.VALIDATION,
    "validation": Split.VALIDATION,
    "test": Split.TEST,
}

CENSUS_HEADER: Final = ["id", "split", "class", "productions", "nonterminals", "bytes", "features"]


def _token(text: str) -> str:
    """Make ``text`` usable as a single grammar-file token"""
    return re.sub(r"[\s|]", lambda m: "\\u%04x" % ord(m.group()), text)


def _nonterminal_base(pointer: str) -> str:
    name = "root" + pointer[1:] if pointer.startswith("#") else pointer
    return re.sub(r"\s|\||->", "_", name)


def _escape_segment(segment: str) -> str:
    return segment.replace("~", "~0").replace("/", "~1")


def resolve_ref(root: Any, ref: str) -> Tuple[bool, str, Any]:
    """Resolve a local JSON pointer; returns (found, canonical pointer, target)"""
    if not isinstance(ref, str) or not ref.startswith("#"):
        return False, str(ref), None
    fragment = unquote(ref[1:])
    if fragment == "":
        return True, "#", root
    if not fragment.startswith("/"):
        return False, ref, None
    node = root
    for part in fragment[1:].split("/"):
        part = part.replace("~1", "/").replace("~0", "~")
        if isinstance(node, dict) and part in node:
            node = node[part]
        elif isinstance(node, list) and part.isdigit() and int(part) < len(node):
            node = node[int(part)]
        else:
            return False, ref, None
    return True, "#" + fragment, node


def schema_types(schema: Any) -> List[str]:
    """Declared types, or the type implied by the keywords present"""
    if not isinstance(schema, dict):
        return []
    declared = schema.get("type")
    if isinstance(declared, str):
        return [declared]
    if isinstance(declared, list):
        return [t for t in declared if isinstance(t, str)]
    if any(key in schema for key in ("properties", "additionalProperties", "patternProperties")):
        return ["object"]
    if "items" in schema or "prefixItems" in schema:
        return ["array"]
    return []


class ArrayShape(NamedTuple):
    kind: str  # "tuple" | "fixed" | "variable" | "opaque"
    items: Any = None
    count: int = 0


def array_shape(schema: Dict[str, Any]) -> ArrayShape:
    prefix = schema.get("prefixItems")
    if isinstance(prefix, list):
        return ArrayShape("tuple", prefix, len(prefix))
    items = schema.get("items")
    if isinstance(items, list):
        return ArrayShape("tuple", items, len(items))
    if items is None:
        return ArrayShape("opaque")
    if items is False:
        return ArrayShape("fixed", False, 0)
    low, high = schema.get("minItems"), schema.get("maxItems")
    if isinstance(low, int) and low == high and 0 <= low <= MAX_UNROLL:
        return ArrayShape("fixed", items, low)
    return ArrayShape("variable", items, low if isinstance(low, int) and low > 0 else 0)


def _is_trivial(schema: Any) -> bool:
    return schema is True or (isinstance(schema, dict) and not STRUCTURAL_KEYS & schema.keys())


def required_names(schema: Dict[str, Any]) -> List[str]:
    """Names listed in ``required``; draft-3 booleans count as none"""
    value = schema.get("required")
    if not isinstance(value, list):
        return []
    return [name for name in value if isinstance(name, str)]


def _merge_all_of(schema: Dict[str, Any]) -> Dict[str, Any]:
    merged = {k: v for k, v in schema.items() if k != "allOf"}
    properties = dict(merged["properties"]) if isinstance(merged.get("properties"), dict) else {}
    required = required_names(merged)
    for part in schema.get("allOf") or []:
        if not isinstance(part, dict):
            continue
        for key, value in part.items():
            if key == "properties" and isinstance(value, dict):
                for name, sub in value.items():
                    properties.setdefault(name, sub)
            elif key == "required":
                required.extend(r for r in required_names(part) if r not in required)
            else:
                merged.setdefault(key, value)
    if properties:
        merged["properties"] = properties
    if required:
        merged["required"] = required
    return merged


class _SchemaConverter:
    """Builds one grammar; not reusable across schemas"""

    def __init__(self, root: Any):
        self.root = root
        self.nonterminal_names: List[str] = []
        self.terminal_names: List[str] = []
        self.productions: List[Production] = []
        self.warnings: List[str] = []
        self._terminal_index: Dict[str, int] = {}
        self._taken: Set[str] = set()
        self._seen: Set[Production] = set()
        self._memo: Dict[Tuple[str, Optional[int]], int] = {}
        self._expanding: List[str] = []
        self._inlined = 0

    def warn(self, message: str) -> None:
        if message not in self.warnings:
            self.warnings.append(message)

    def new_nonterminal(self, base: str) -> int:
        name = base
        while name in self._taken:
            name += "'"
        self._taken.add(name)
        self.nonterminal_names.append(name)
        return len(self.nonterminal_names) - 1

    def t(self, name: str) -> Symbol:
        name = _token(name)
        if name not in self._terminal_index:
            self._terminal_index[name] = len(self.terminal_names)
            self.terminal_names.append(name)
            self._taken.add(name)
        return terminal(self._terminal_index[name])

    def rule(self, lhs: int, *rhs: Union[Symbol, int, None]) -> None:
        symbols = tuple(nonterminal(s) if isinstance(s, int) else s for s in rhs if s is not None)
        production = Production(lhs=lhs, rhs=symbols)
        if production not in self._seen:
            self._seen.add(production)
            self.productions.append(production)

    def build(self, start: int) -> Grammar:
        return Grammar(
            nonterminal_names=tuple(self.nonterminal_names),
            terminal_names=tuple(self.terminal_names),
            productions=tuple(self.productions),
            start=start,
        )

    # -- values -----------------------------------------------------------

    def convert(self, schema: Any, pointer: str, cont: Optional[int]) -> int:
        key = (pointer, cont)
        if key in self._memo:
            return self._memo[key]
        base = _nonterminal_base(pointer)
        x = self.new_nonterminal(base if cont is None else f"{base}~{cont}")
        self._memo[key] = x
        self._expand(x, schema, pointer, cont)
        return x

    def _expand(self, x: int, schema: Any, pointer: str, cont: Optional[int]) -> None:
        if schema is False:
            return
        if _is_trivial(schema):
            self.rule(x, self.t("ANY"), cont)
            return
        if not isinstance(schema, dict):
            raise SchemaConversionError(
                f"{pointer}: a schema must be an object or a boolean", "schema_conversion", {"pointer": pointer}
            )

        if "$ref" in schema:
            self._ref(x, schema["$ref"], cont)
            return

        if isinstance(schema.get("allOf"), list):
            self.warn("allOf merged shallowly")
            self._expand(x, _merge_all_of(schema), pointer + "/allOf", cont)
            return

        for union in ("anyOf", "oneOf"):
            options = schema.get(union)
            if isinstance(options, list):
                base = {k: v for k, v in schema.items() if k != union}
                for i, option in enumerate(options):
                    if isinstance(option, dict):
                        merged: Any = {**base, **option}
                    elif option is True:
                        merged = base if STRUCTURAL_KEYS & base.keys() else True
                    else:
                        merged = False
                    self.rule(x, self.convert(merged, f"{pointer}/{union}/{i}", cont))
                return

        if isinstance(schema.get("enum"), list):
            for value in schema["enum"]:
                self.rule(x, self.t("LIT:" + json.dumps(value, sort_keys=True)), cont)
            return
        if "const" in schema:
            self.rule(x, self.t("LIT:" + json.dumps(schema["const"], sort_keys=True)), cont)
            return

        types = schema_types(schema)
        if len(types) > 1:
            for name in types:
                self.rule(x, self.convert({**schema, "type": name}, f"{pointer}/type/{name}", cont))
            return
        if not types:
            self.rule(x, self.t("ANY"), cont)
            return

        kind = types[0]
        if kind == "object":
            self._object(x, schema, pointer, cont)
        elif kind == "array":
            self._array(x, schema, pointer, cont)
        elif kind in PRIMITIVE_TERMINALS:
            self.rule(x, self.t(PRIMITIVE_TERMINALS[kind]), cont)
        else:
            self.warn(f"unknown type {kind!r} treated as any value")
            self.rule(x, self.t("ANY"), cont)

    def _ref(self, x: int, ref: Any, cont: Optional[int]) -> None:
        found, target_pointer, target = resolve_ref(self.root, ref)
        if not found:
            self.warn(f"unresolved $ref {ref}")
            return

        if target_pointer in self._expanding or self._inlined >= INLINE_BUDGET:
            if self._inlined >= INLINE_BUDGET:
                self.warn("inline budget exhausted; $ref reuses definitions")
            self._expanding.append(target_pointer)
            try:
                definition = self.convert(target, target_pointer, None)
            finally:
                self._expanding.pop()
            self.rule(x, definition, cont)
            return

        self._inlined += 1
        self._expanding.append(target_pointer)
        try:
            inlined = self.convert(target, target_pointer, cont)
        finally:
            self._expanding.pop()
        self.rule(x, inlined)

    def _object(self, x: int, schema: Dict[str, Any], pointer: str, cont: Optional[int]) -> None:
        properties = schema.get("properties") if isinstance(schema.get("properties"), dict) else {}
        required = set(required_names(schema))
        base = _nonterminal_base(pointer) + (f"~{cont}" if cont is not None else "")

        extra_schema: Any = None
        additional = schema.get("additionalProperties")
        patterns = schema.get("patternProperties")
        if additional is True or isinstance(additional, dict):
            extra_schema = additional
        elif isinstance(patterns, dict) and patterns:
            extra_schema = True
        if extra_schema is not None:
            self.warn("permissive additionalProperties/patternProperties treated as repetition")

        close = self.new_nonterminal(f"{base}.close")
        self.rule(close, self.t("}"), cont)

        extra = None
        if extra_schema is not None:
            value = self.convert(extra_schema, pointer + "/additionalProperties", None)
            member = self.new_nonterminal(f"{base}.member")
            self.rule(member, self.t("KEY:"), value)
            extra = self.new_nonterminal(f"{base}.extra")
            self.rule(extra, member)
            self.rule(extra, member, self.t(","), extra)

        names = list(properties)
        n = len(names)
        # first[i]: nothing emitted yet; rest[i]: some property already emitted
        need_first = [False] * (n + 1)
        need_first[0] = True
        for i, name in enumerate(names):
            if need_first[i] and name not in required:
                need_first[i + 1] = True

        first: Dict[int, int] = {}
        rest: Dict[int, int] = {}
        for i in range(n, -1, -1):
            if i > 0:
                rest[i] = self.new_nonterminal(f"{base}.r{i}")
            if need_first[i]:
                first[i] = self.new_nonterminal(f"{base}.f{i}")

        if n > 0:
            self.rule(rest[n], close)
            if extra is not None:
                self.rule(rest[n], self.t(","), extra, close)
        if need_first[n]:
            self.rule(first[n], close)
            if extra is not None:
                self.rule(first[n], extra, close)

        for i in range(n - 1, -1, -1):
            name = names[i]
            key = self.t(json.dumps(name) + ":")
            value = self.convert(properties[name], f"{pointer}/properties/{_escape_segment(name)}", rest[i + 1])
            optional = name not in required
            if i > 0:
                self.rule(rest[i], self.t(","), key, value)
                if optional:
                    self.rule(rest[i], rest[i + 1])
            if need_first[i]:
                self.rule(first[i], key, value)
                if optional:
                    self.rule(first[i], first[i + 1])

        self.rule(x, self.t("{"), first[0])

    def _array(self, x: int, schema: Dict[str, Any], pointer: str, cont: Optional[int]) -> None:
        shape = array_shape(schema)
        if shape.kind == "opaque":
            self.rule(x, self.t("ARRAY"), cont)
            return

        base = _nonterminal_base(pointer) + (f"~{cont}" if cont is not None else "")
        if shape.kind == "variable":
            item = self.convert(shape.items, pointer + "/items", None)
            items = self.new_nonterminal(f"{base}.items")
            self.rule(items, item)
            self.rule(items, item, self.t(","), items)
            if shape.count == 0:
                self.rule(x, self.t("["), self.t("]"), cont)
            self.rule(x, self.t("["), items, self.t("]"), cont)
            return

        if shape.kind == "tuple":
            keyword = "prefixItems" if "prefixItems" in schema else "items"
            elements = [(sub, f"{pointer}/{keyword}/{i}") for i, sub in enumerate(shape.items)]
        else:
            elements = [(shape.items, pointer + "/items")] * shape.count

        nxt = self.new_nonterminal(f"{base}.close")
        self.rule(nxt, self.t("]"), cont)
        for i in range(len(elements) - 1, -1, -1):
            sub, sub_pointer = elements[i]
            value = self.convert(sub, sub_pointer, nxt)
            if i > 0:
                sep = self.new_nonterminal(f"{base}.e{i}")
                self.rule(sep, self.t(","), value)
                nxt = sep
            else:
                nxt = value
        self.rule(x, self.t("["), nxt)


def convert_schema(schema: Any) -> Tuple[Grammar, List[str]]:
    """Grammar for ``schema`` plus the conversion warnings"""
    if isinstance(schema, (str, bytes)):
        try:
            schema = json.loads(schema)
        except ValueError as e:
            raise SchemaConversionError(f"invalid JSON: {e}", "invalid_json") from e
    converter = _SchemaConverter(schema)
    converter._expanding.append("#")
    try:
        start = converter.convert(schema, "#", None)
    except RecursionError as e:
        raise SchemaConversionError("schema nesting too deep to convert", "schema_too_deep") from e
    return converter.build(start), converter.warnings


def schema_to_cfg(schema: Any) -> Grammar:
    grammar, _ = convert_schema(schema)
    return grammar


# ---------------------------------------------------------------------------
# Feature attribution
# ---------------------------------------------------------------------------


def _refs_below(node: Any) -> Set[str]:
    """Local $ref targets used in ``node``, not descending into definition tables or data"""
    found: Set[str] = set()
    stack = [node]
    while stack:
        current = stack.pop()
        if isinstance(current, list):
            stack.extend(current)
            continue
        if not isinstance(current, dict):
            continue
        ref = current.get("$ref")
        if isinstance(ref, str):
            found.add(ref)
        for key, value in current.items():
            if key in DEFINITION_KEYS or key in DATA_KEYS:
                continue
            if key in PROPERTY_MAP_KEYS and isinstance(value, dict):
                # property names are data, every value is a schema
                stack.extend(value.values())
            else:
                stack.append(value)
    return found


def has_recursive_ref(schema: Any) -> bool:
    """DFS for a cycle in the reference graph reachable from the root"""
    edges: Dict[str, List[str]] = {}
    pending = ["#"]
    targets: Dict[str, Any] = {"#": schema}
    while pending:
        pointer = pending.pop()
        if pointer in edges:
            continue
        edges[pointer] = []
        for ref in sorted(_refs_below(targets[pointer])):
            found, target_pointer, target = resolve_ref(schema, ref)
            if found:
                edges[pointer].append(target_pointer)
                targets.setdefault(target_pointer, target)
                pending.append(target_pointer)

    white, grey, black = 0, 1, 2
    color = {pointer: white for pointer in edges}
    stack: List[Tuple[str, int]] = [("#", 0)]
    color["#"] = grey
    while stack:
        pointer, index = stack.pop()
        if index < len(edges[pointer]):
            stack.append((pointer, index + 1))
            nxt = edges[pointer][index]
            if color[nxt] == grey:
                return True
            if color[nxt] == white:
                color[nxt] = grey
                stack.append((nxt, 0))
        else:
            color[pointer] = black
    return False


def _has_object_property(root: Any, properties: Dict[str, Any]) -> bool:
    for sub in properties.values():
        if isinstance(sub, dict) and isinstance(sub.get("$ref"), str):
            _, _, sub = resolve_ref(root, sub["$ref"])
        if "object" in schema_types(sub):
            return True
    return False


def schema_features(schema: Any) -> Set[SchemaFeature]:
    """Structural features reachable from the root, following $ref

    Keywords are read with the converter's precedence: ``$ref`` hides its
    siblings, then ``allOf``, ``anyOf``/``oneOf``, ``enum``/``const`` and
    finally ``type``. A feature is therefore only reported for parts of the
    schema that reach the grammar.
    """
    features: Set[SchemaFeature] = set()
    visited_refs: Set[str] = set()
    stack = [schema]
    while stack:
        node = stack.pop()
        if not isinstance(node, dict) or _is_trivial(node):
            continue

        if "$ref" in node:
            found, pointer, target = resolve_ref(schema, node["$ref"])
            if found and pointer not in visited_refs:
                visited_refs.add(pointer)
                stack.append(target)
            continue

        if isinstance(node.get("allOf"), list):
            stack.append(_merge_all_of(node))
            continue

        union = next((key for key in ("anyOf", "oneOf") if isinstance(node.get(key), list)), None)
        if union is not None:
            base = {k: v for k, v in node.items() if k != union}
            for option in node[union]:
                if isinstance(option, dict):
                    stack.append({**base, **option})
                elif option is True:
                    stack.append(base)
            continue

        if isinstance(node.get("enum"), list) or "const" in node:
            continue

        types = schema_types(node)
        if len(types) > 1:
            stack.extend({**node, "type": name} for name in types)
            continue

        kind = types[0] if types else None
        if kind == "object":
            properties = node["properties"] if isinstance(node.get("properties"), dict) else {}
            if _has_object_property(schema, properties):
                features.add(SchemaFeature.NESTED_OBJECT)
            stack.extend(properties.values())
            if isinstance(node.get("additionalProperties"), dict):
                stack.append(node["additionalProperties"])
        elif kind == "array":
            shape = array_shape(node)
            if shape.kind == "variable":
                features.add(SchemaFeature.VARIABLE_LENGTH_ARRAY)
                stack.append(shape.items)
            elif shape.kind == "tuple":
                stack.extend(shape.items)
            elif shape.kind == "fixed" and shape.count > 0:
                stack.append(shape.items)

    if has_recursive_ref(schema):
        features.add(SchemaFeature.RECURSIVE_REF)
    return features


def classify_schema(
    schema: Any,
    record_id: str = "schema",
    split: Split = Split.OTHER,
    dataset: str = "default",
    raw_size_bytes: Optional[int] = None,
) -> CensusRow:
    grammar, warnings = convert_schema(schema)
    if raw_size_bytes is None:
        raw_size_bytes = len(json.dumps(schema).encode("utf-8"))
    return CensusRow(
        id=record_id,
        split=split,
        dataset=dataset,
        grammar_class=GrammarClass.LINEAR if is_linear(grammar) else GrammarClass.GENERAL,
        production_count=len(grammar.productions),
        nonterminal_count=grammar.num_nonterminals,
        schema_bytes=raw_size_bytes,
        features=schema_features(schema),
        warnings=warnings,
    )


# ---------------------------------------------------------------------------
# Census
# ---------------------------------------------------------------------------


def _split_of(name: str) -> Optional[Split]:
    return SPLIT_ALIASES.get(name.lower())


def load_corpus(corpus_dir: Path, manifest: Optional[Path] = None) -> Tuple[List[SchemaRecord], int]:
    """Read every ``*.json`` below ``corpus_dir``; returns records and the skipped count"""
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {corpus_dir}")

    assignments: Dict[str, Split] = {}
    if manifest is not None:
        try:
            raw = json.loads(Path(manifest).read_text(encoding="utf-8"))
        except ValueError as e:
            raise SchemaConversionError(f"invalid split manifest: {e}", "invalid_manifest") from e
        for key, value in raw.items():
            assignments[key] = _split_of(str(value)) or Split.OTHER

    manifest_path = Path(manifest).resolve() if manifest is not None else None
    records: List[SchemaRecord] = []
    skipped = 0
    for path in sorted(corpus_dir.rglob("*.json")):
        if manifest_path is not None and path.resolve() == manifest_path:
            continue
        relative = path.relative_to(corpus_dir)
        record_id = relative.with_suffix("").as_posix()
        parts = relative.parts

        split = assignments.get(record_id) or assignments.get(relative.as_posix())
        dataset_parts = list(parts[:-1])
        if split is None:
            split = _split_of(parts[0]) if len(parts) > 1 else None
            if split is not None:
                dataset_parts = dataset_parts[1:]
            else:
                split = Split.OTHER
        elif dataset_parts and _split_of(dataset_parts[0]) is not None:
            dataset_parts = dataset_parts[1:]
        dataset = "/".join(dataset_parts) or "default"

        try:
            raw_bytes = path.read_bytes()
            document = json.loads(raw_bytes.decode("utf-8"))
        except (OSError, ValueError) as e:
            logger.warning("skipping %s: %s", relative.as_posix(), e)
            skipped += 1
            continue
        records.append(
            SchemaRecord(
                id=record_id, split=split, dataset=dataset, raw_size_bytes=len(raw_bytes), document=document
            )
        )
    return records, skipped


def _classify_record(record: SchemaRecord) -> Tuple[Optional[CensusRow], str]:
    try:
        row = classify_schema(
            record.document,
            record_id=record.id,
            split=record.split,
            dataset=record.dataset,
            raw_size_bytes=record.raw_size_bytes,
        )
        return row, ""
    except CflReachError as e:
        return None, f"{record.id}: {e.message}"
    except Exception as e:
        return None, f"{record.id}: {type(e).__name__}: {e}"


def _split_summary(name: str, rows: List[CensusRow]) -> SplitSummary:
    linear = [r for r in rows if r.grammar_class is GrammarClass.LINEAR]
    general = [r for r in rows if r.grammar_class is GrammarClass.GENERAL]

    def avg(group: List[CensusRow], attr: str) -> Optional[float]:
        return round(mean_or_zero([getattr(r, attr) for r in group]), 1) if group else None

    return SplitSummary(
        name=name,
        total=len(rows),
        linear=len(linear),
        general=len(general),
        avg_productions_linear=avg(linear, "production_count"),
        avg_productions_general=avg(general, "production_count"),
        avg_nonterminals_linear=avg(linear, "nonterminal_count"),
        avg_nonterminals_general=avg(general, "nonterminal_count"),
    )


def aggregate(rows: List[CensusRow], skipped: int = 0) -> CensusReport:
    rows = sorted(rows, key=lambda r: r.id)
    splits = []
    for split in Split:
        members = [r for r in rows if r.split is split]
        if members:
            splits.append(_split_summary(split.value, members))

    general = [r for r in rows if r.grammar_class is GrammarClass.GENERAL]
    linear = [r for r in rows if r.grammar_class is GrammarClass.LINEAR]
    features = []
    for feature in SchemaFeature:
        count = sum(1 for r in general if feature in r.features)
        percent = round(100.0 * count / len(general), 1) if general else 0.0
        features.append(FeatureCount(feature=feature, count=count, percent_of_general=percent))

    return CensusReport(
        rows=rows,
        splits=splits,
        total=_split_summary("total", rows),
        productions=SizeSummary(**summarize([r.production_count for r in rows])),
        nonterminals=SizeSummary(**summarize([r.nonterminal_count for r in rows])),
        avg_bytes_linear=round(mean_or_zero([r.schema_bytes for r in linear]), 1) if linear else None,
        avg_bytes_general=round(mean_or_zero([r.schema_bytes for r in general]), 1) if general else None,
        features=features,
        skipped=skipped,
    )


def run_census(corpus_dir: Path, manifest: Optional[Path] = None, workers: int = 1) -> CensusReport:
    """Classify every schema in ``corpus_dir`` and aggregate the results"""
    records, skipped = load_corpus(corpus_dir, manifest)

    if workers > 1 and len(records) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_classify_record, records, chunksize=16))
    else:
        results = [_classify_record(record) for record in records]

    rows: List[CensusRow] = []
    for row, problem in results:
        if row is None:
            logger.warning("skipping %s", problem)
            skipped += 1
        else:
            rows.append(row)

    report = aggregate(rows, skipped)
    logger.info(
        "census: total=%d linear=%d general=%d skipped=%d",
        report.total.total, report.total.linear, report.total.general, report.skipped,
    )
    return report


def _fmt(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.1f}"


def format_aggregate(report: CensusReport) -> str:
    lines = [
        f"{'split':<12}{'total':>8}{'linear':>8}{'general':>9}{'%linear':>9}"
        f"{'avg|P|L':>9}{'avg|P|G':>9}{'avg|N|L':>9}{'avg|N|G':>9}"
    ]
    for summary in report.splits + [report.total]:
        lines.append(
            f"{summary.name:<12}{summary.total:>8}{summary.linear:>8}{summary.general:>9}"
            f"{summary.percent_linear:>9.1f}{_fmt(summary.avg_productions_linear):>9}"
            f"{_fmt(summary.avg_productions_general):>9}{_fmt(summary.avg_nonterminals_linear):>9}"
            f"{_fmt(summary.avg_nonterminals_general):>9}"
        )
    lines.append("")
    for label, sizes in (("|P|", report.productions), ("|N|", report.nonterminals)):
        lines.append(
            f"{label} median={sizes.median:.1f} mean={sizes.mean:.1f} p95={sizes.p95:.1f} max={sizes.max:.0f}"
        )
    lines.append(
        f"avg schema bytes linear={_fmt(report.avg_bytes_linear)} general={_fmt(report.avg_bytes_general)}"
    )
    lines.append("")
    lines.append("features among non-linear schemas:")
    for feature in report.features:
        lines.append(f"  {feature.feature.value:<24}{feature.count:>8}{feature.percent_of_general:>8.1f}")
    lines.append("")
    lines.append(f"skipped files: {report.skipped}")
    return "\n".join(lines) + "\n"


def write_census(report: CensusReport, out_dir: Path) -> List[Path]:
    """Write census.csv, aggregate.txt and the two plot-data files"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    census_path = out_dir / "census.csv"
    with census_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(CENSUS_HEADER)
        for row in report.rows:
            writer.writerow(row.to_csv_fields())

    aggregate_path = out_dir / "aggregate.txt"
    aggregate_path.write_text(format_aggregate(report), encoding="utf-8")

    by_dataset: Dict[str, List[CensusRow]] = {}
    for row in report.rows:
        by_dataset.setdefault(row.dataset, []).append(row)
    dataset_path = out_dir / "class_by_dataset.csv"
    with dataset_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["dataset", "total", "linear", "general", "percent_linear"])
        for name in sorted(by_dataset):
            summary = _split_summary(name, by_dataset[name])
            writer.writerow([name, summary.total, summary.linear, summary.general, f"{summary.percent_linear:.1f}"])

    size_path = out_dir / "size_vs_class.csv"
    with size_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["id", "bytes", "class"])
        for row in report.rows:
            writer.writerow([row.id, row.schema_bytes, row.grammar_class.value])

    return [census_path, aggregate_path, dataset_path, size_path]


# ---------------------------------------------------------------------------
# Corpus download
# ---------------------------------------------------------------------------


def _request_page(
    client: httpx.Client, settings: FetchSettings, config: str, split: str, offset: int
) -> Dict[str, Any]:
    url = settings.base_url.rstrip("/") + "/rows"
    params = {
        "dataset": settings.dataset,
        "config": config,
        "split": split,
        "offset": offset,
        "length": settings.page_size,
    }
    try:
        response = client.get(url, params=params)
    except httpx.TimeoutException:
        raise TimeoutError("Request timed out")
    except httpx.NetworkError as e:
        raise NetworkError(f"Network error: {str(e)}")

    try:
        data = response.json()
    except ValueError:
        data = {"error": "Invalid JSON response"}

    if response.is_success:
        return data if isinstance(data, dict) else {}
    error = create_error_from_response(response.status_code, data if isinstance(data, dict) else {})
    if isinstance(error, RateLimitError):
        retry_after = _retry_after_seconds(response.headers.get("Retry-After"))
        if retry_after is not None:
            error.details["retry_after"] = retry_after
    raise error


def _retry_after_seconds(value: Any) -> Optional[float]:
    """Seconds form of a Retry-After header; HTTP dates are left to the backoff"""
    try:
        seconds = float(value)
    except (TypeError, ValueError):
        return None
    return seconds if seconds >= 0 else None


def _safe_filename(record_id: str) -> str:
    return re.sub(r"[^\w.-]", "_", record_id) or "schema"


def fetch_corpus(dest: Path, settings: Optional[FetchSettings] = None, client: Optional[httpx.Client] = None) -> int:
    """Download the benchmark schemas into ``dest/<split>/<dataset>/<id>.json``; returns the file count"""
    settings = settings or FetchSettings()
    dest = Path(dest)
    own_client = client is None
    if client is None:
        client = httpx.Client(timeout=settings.timeout, headers={"Accept": "application/json"})

    fetch_page = retry_with_backoff(_request_page, max_retries=settings.max_retries, base_delay=settings.backoff)
    written = 0
    try:
        for config in settings.configs:
            for split_name, split in settings.splits.items():
                offset = 0
                while True:
                    page = fetch_page(client, settings, config, split_name, offset)
                    rows = page.get("rows") or []
                    for item in rows:
                        row = item.get("row", item) if isinstance(item, dict) else {}
                        document = row.get(settings.schema_field)
                        if document is None:
                            continue
                        record_id = str(row.get(settings.id_field, f"{config}-{split_name}-{offset}"))
                        dataset = str(row.get(settings.dataset_field, config)) if settings.dataset_field else config
                        target = dest / split.value / _safe_filename(dataset) / f"{_safe_filename(record_id)}.json"
                        target.parent.mkdir(parents=True, exist_ok=True)
                        text = document if isinstance(document, str) else json.dumps(document)
                        target.write_text(text, encoding="utf-8")
                        written += 1
                    offset += len(rows)
                    total = page.get("num_rows_total", offset)
                    logger.debug("fetched %s/%s offset=%d of %s", config, split_name, offset, total)
                    if not rows or offset >= total:
                        break
    finally:
        if own_client:
            client.close()

    logger.info("fetched %d schemas into %s", written, dest)
    return written
