"""
Shared enums and data models for cflreach
"""

from enum import Enum
from typing import Any, Dict, FrozenSet, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class GrammarForm(str, Enum):
    GENERAL = "general"
    CNF = "cnf"
    LINEAR = "linear"
    TALNF = "talnf"


class IndexKind(str, Enum):
    SAT = "sat"
    LIN = "lin"
    LINDIST = "lindist"


class WitnessFormat(str, Enum):
    EXPLICIT = "explicit"
    SLP = "slp"


class GrammarClass(str, Enum):
    LINEAR = "Linear"
    GENERAL = "General"


class SchemaFeature(str, Enum):
    VARIABLE_LENGTH_ARRAY = "variable_length_array"
    NESTED_OBJECT = "nested_object"
    RECURSIVE_REF = "recursive_ref"


class Split(str, Enum):
    TRAIN = "train"
    VALIDATION = "validation"
    TEST = "test"
    OTHER = "other"


class BuildStats(BaseModel):
    """Counters recorded while building an index"""
    kind: IndexKind
    nonterminals: int = Field(ge=0)
    vertices: int = Field(ge=0)
    edges: int = Field(ge=0)
    true_entries: int = Field(default=0, ge=0)
    enqueued: int = Field(default=0, ge=0)
    dequeues: int = Field(default=0, ge=0)
    inner_iterations: int = Field(default=0, ge=0)
    triples_inspected: int = Field(default=0, ge=0)
    elapsed_seconds: float = Field(default=0.0, ge=0.0)

    model_config = ConfigDict(use_enum_values=False)

    def as_key_values(self) -> Dict[str, str]:
        """Flatten to the key=value pairs printed by the command line"""
        return {
            "index": self.kind.value,
            "nonterminals": str(self.nonterminals),
            "vertices": str(self.vertices),
            "edges": str(self.edges),
            "true_entries": str(self.true_entries),
            "enqueued": str(self.enqueued),
            "dequeues": str(self.dequeues),
            "inner_iterations": str(self.inner_iterations),
            "triples_inspected": str(self.triples_inspected),
            "wall_time": f"{self.elapsed_seconds:.6f}",
        }


# Census models
class SchemaRecord(BaseModel):
    """A JSON schema read from a corpus"""
    id: str
    split: Split = Split.OTHER
    dataset: str = "default"
    raw_size_bytes: int = Field(ge=0)
    document: Any = None


class CensusRow(BaseModel):
    """Classification of one converted schema"""
    id: str
    split: Split = Split.OTHER
    dataset: str = "default"
    grammar_class: GrammarClass
    production_count: int = Field(ge=0)
    nonterminal_count: int = Field(ge=0)
    schema_bytes: int = Field(ge=0)
    features: FrozenSet[SchemaFeature] = frozenset()
    warnings: List[str] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True)

    @field_validator("features", mode="before")
    @classmethod
    def coerce_features(cls, v):
        if v is None:
            return frozenset()
        return frozenset(v)

    def feature_list(self) -> List[str]:
        return sorted(f.value for f in self.features)

    def to_csv_fields(self) -> List[str]:
        return [
            self.id,
            self.split.value,
            self.grammar_class.value,
            str(self.production_count),
            str(self.nonterminal_count),
            str(self.schema_bytes),
            ";".join(self.feature_list()),
        ]


class SplitSummary(BaseModel):
    """Per-split row of the class distribution table"""
    name: str
    total: int = 0
    linear: int = 0
    general: int = 0
    avg_productions_linear: Optional[float] = None
    avg_productions_general: Optional[float] = None
    avg_nonterminals_linear: Optional[float] = None
    avg_nonterminals_general: Optional[float] = None

    @property
    def percent_linear(self) -> float:
        if self.total == 0:
            return 0.0
        return round(100.0 * self.linear / self.total, 1)


class SizeSummary(BaseModel):
    """Distribution of a size measure across schemas"""
    median: float = 0.0
    mean: float = 0.0
    p95: float = 0.0
    max: float = 0.0


class FeatureCount(BaseModel):
    feature: SchemaFeature
    count: int = 0
    percent_of_general: float = 0.0


class CensusReport(BaseModel):
    """Aggregate census output"""
    rows: List[CensusRow] = Field(default_factory=list)
    splits: List[SplitSummary] = Field(default_factory=list)
    total: SplitSummary = Field(default_factory=lambda: SplitSummary(name="total"))
    productions: SizeSummary = Field(default_factory=SizeSummary)
    nonterminals: SizeSummary = Field(default_factory=SizeSummary)
    avg_bytes_linear: Optional[float] = None
    avg_bytes_general: Optional[float] = None
    features: List[FeatureCount] = Field(default_factory=list)
    skipped: int = 0


class FetchSettings(BaseModel):
    """Where and how to download the benchmark schema corpus"""
    base_url: str = "https://datasets-server.huggingface.co"
    dataset: str = "epfl-dlab/JSONSchemaBench"
    configs: List[str] = Field(default_factory=lambda: ["default"])
    splits: Dict[str, Split] = Field(
        default_factory=lambda: {"train": Split.TRAIN, "val": Split.VALIDATION, "test": Split.TEST}
    )
    schema_field: str = "json_schema"
    id_field: str = "unique_id"
    dataset_field: Optional[str] = None
    page_size: int = Field(default=100, gt=0, le=100)
    timeout: float = Field(default=30.0, gt=0)
    max_retries: int = Field(default=3, ge=0)
    backoff: float = Field(default=1.0, ge=0)
