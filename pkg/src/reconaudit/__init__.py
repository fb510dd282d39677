"""reconaudit: training-set reconstruction audits for interpretable models.

Given a decision tree or rule list with per-path class counts, this package
reconstructs what the model's structure reveals about its training examples,
counts the compatible feature vectors per example exactly, and scores the leak
as an entropy ratio against an uninformed baseline. Self-contained greedy
learners, a brute-force certification oracle, Hungarian alignment against the
true data, and an experiment CLI round out the toolkit.
"""

from .alignment import AssignmentResult, SizeMismatch, assign, min_cost_assignment, pair_cost
from .counting import (
    CaptMemo,
    CeilingExceeded,
    capt_pair,
    capt_rule,
    count_excluding,
    num,
    oracle_check,
    oracle_worlds,
    worlds_per_example,
)
from .dataio import (
    BinarizationSpec,
    DegenerateColumn,
    EmptyFile,
    MissingLabel,
    RaggedRows,
    RawTable,
    binarize,
    load_csv,
    planted_rulelist_dataset,
    split,
    table_to_dataset,
    write_csv,
)
from .domain import (
    AttributeDomain,
    Condition,
    Conjunction,
    ContradictoryPath,
    DatasetSchema,
    DecisionPath,
    DecisionTreeModel,
    DeterministicDataset,
    EmptyCapture,
    RuleListModel,
    TRUE,
    conjoin,
    reduce_domain,
)
from .learners import (
    LearnerConfig,
    NonBinarySchema,
    SchemaMismatch,
    attach_supports,
    gini,
    model_size,
    train_greedy_rulelist,
    train_greedy_tree,
    training_accuracy,
)
from .metrics import (
    AuditReport,
    UndefinedForRuleLists,
    audit_model,
    dist_g,
    dist_legacy,
    exact_log2,
    leak_cdf,
    per_example_ratio,
    uninformed_bits,
)
from .modelio import DocumentError, load_model, model_from_text, model_to_text, save_model
from .reconstruction import (
    KnowledgeGroup,
    ReconstructionKnowledge,
    RuleExampleKnowledge,
    TreeExampleKnowledge,
    reconstruct,
    reconstruct_rulelist,
    reconstruct_tree,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
