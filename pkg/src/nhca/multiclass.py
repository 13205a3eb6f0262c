"""Multicategory strategies: one-against-all, binary tree, ternary structure.

Trees partition the class set recursively.  The binary tree clusters the
per-class mean vectors with 2-means so whole classes move together; the
ternary structure clusters raw samples, keeps classes concentrated in one
cluster as "focused" groups, and routes scattered classes to a middle
"ambiguous" group.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import as_matrix
from .binary import BinaryModel, HyperParams, fit_variant, signed_distance
from .errors import DegenerateClass, DegenerateData, LengthMismatch, NhcaError

OAA = "oaa"
BT = "bt"
TDS = "tds"
STRATEGIES = (OAA, BT, TDS)

KMEANS_MAX_ITER = 300
DEFAULT_SEED = 42
DEFAULT_FOCUS_THRESHOLD = 0.75


@dataclass(frozen=True)
class LabeledDataset:
    """Feature matrix with contiguous integer class labels 0..K-1."""

    features: np.ndarray
    labels: np.ndarray
    class_count: int

    def __post_init__(self):
        features = as_matrix(self.features, "features")
        labels = np.asarray(self.labels, dtype=np.int64).ravel()
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        if labels.shape[0] != features.shape[0]:
            raise LengthMismatch(
                f"{labels.shape[0]} labels for {features.shape[0]} rows")
        if self.class_count < 1:
            raise DegenerateClass("class_count must be at least 1")
        present = np.unique(labels)
        if present.size and (present[0] < 0 or present[-1] >= self.class_count):
            raise DegenerateClass("labels must lie in 0..class_count-1")
        if present.size != self.class_count:
            raise DegenerateClass("every class in 0..K-1 needs at least one sample")

    def rows_of(self, class_ids):
        mask = np.isin(self.labels, np.asarray(list(class_ids)))
        return self.features[mask], self.labels[mask]


@dataclass(frozen=True)
class KMeansResult:
    assignment: np.ndarray
    centers: np.ndarray
    inertia: float
    iterations: int


@dataclass(frozen=True)
class BtNode:
    """Internal binary-tree node; group 0 (+1 side) descends left."""

    model: BinaryModel
    classes_left: tuple
    classes_right: tuple
    left: "BtNode | int"
    right: "BtNode | int"


@dataclass(frozen=True)
class TdsNode:
    """Ternary node: per-group one-against-rest planes, children ordered (+1, 0, -1)."""

    group_labels: tuple  # subset of (1, 0, -1), in that order
    planes: tuple  # one Hyperplane per group
    group_classes: tuple  # tuple of class tuples, aligned with group_labels
    children: tuple  # TdsNode or int leaf, aligned with group_labels


@dataclass(frozen=True)
class MulticlassModel:
    strategy: str
    variant: str
    params: HyperParams
    class_count: int
    oaa_planes: tuple | None = None
    tree: "BtNode | TdsNode | int | None" = None
    converged: bool = True
    seed: int = DEFAULT_SEED
    focus_threshold: float = DEFAULT_FOCUS_THRESHOLD


def kmeans2(x, seed: int = DEFAULT_SEED) -> KMeansResult:
    """Two-cluster Lloyd iteration from a k-means++-style seeded start.

    Deterministic given the seed.  Stops when assignments stabilize or after
    300 iterations; an empty cluster is repaired by moving the point
    farthest from its center.
    """
    x = as_matrix(x, "X")
    if np.unique(x, axis=0).shape[0] < 2:
        raise DegenerateData("k-means needs at least two distinct rows")
    rng = np.random.default_rng(seed)
    m = x.shape[0]

    first = int(rng.integers(m))
    d2 = ((x - x[first]) ** 2).sum(axis=1)
    second = int(rng.choice(m, p=d2 / d2.sum()))
    centers = np.vstack([x[first], x[second]])

    assignment = np.zeros(m, dtype=np.int64)
    iterations = 0
    for _ in range(KMEANS_MAX_ITER):
        iterations += 1
        dists = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_assignment = dists.argmin(axis=1)
        for empty in (0, 1):
            if not (new_assignment == empty).any():
                worst = int(dists[np.arange(m), new_assignment].argmax())
                new_assignment[worst] = empty
        if iterations > 1 and (new_assignment == assignment).all():
            assignment = new_assignment
            break
        assignment = new_assignment
        centers = np.vstack([x[assignment == 0].mean(axis=0),
                             x[assignment == 1].mean(axis=0)])
    inertia = float(((x - centers[assignment]) ** 2).sum())
    return KMeansResult(assignment, centers, inertia, iterations)


def _class_list(data: LabeledDataset):
    return tuple(range(data.class_count))


def fit_oaa(data: LabeledDataset, variant: str, params: HyperParams) -> MulticlassModel:
    """One classifier per class against the union of the rest.

    Stores each classifier's positive-class plane; prediction picks the
    class of the nearest stored plane.
    """
    if data.class_count < 2:
        raise DegenerateClass("one-against-all needs at least two classes")
    planes = []
    converged = True
    for cls in range(data.class_count):
        own = data.features[data.labels == cls]
        rest = data.features[data.labels != cls]
        try:
            model = fit_variant(own, rest, variant, params)
        except (NhcaError, ValueError) as exc:
            raise type(exc)(f"class {cls}: {exc}") from exc
        planes.append(model.plane_pos)
        converged = converged and model.converged
    return MulticlassModel(OAA, variant, params, data.class_count,
                           oaa_planes=tuple(planes), converged=converged)


def _split_classes_by_means(features, labels, classes, seed):
    """Partition a class list in two by 2-means on the class means.

    Falls back to splitting the (sorted) class list in half when the means
    coincide and clustering is degenerate.
    """
    classes = sorted(classes)
    means = np.vstack([features[labels == c].mean(axis=0) for c in classes])
    try:
        assignment = kmeans2(means, seed).assignment
    except DegenerateData:
        half = (len(classes) + 1) // 2
        return tuple(classes[:half]), tuple(classes[half:])
    group0 = tuple(c for c, a in zip(classes, assignment) if a == 0)
    group1 = tuple(c for c, a in zip(classes, assignment) if a == 1)
    return group0, group1


def fit_bt(data: LabeledDataset, variant: str, params: HyperParams,
           seed: int = DEFAULT_SEED) -> MulticlassModel:
    """Binary tree of classifiers over recursive class bipartitions.

    Each node splits the classes present by 2-means on their mean vectors
    (classes are never divided across branches), trains the chosen binary
    variant with group 0 as +1 and group 1 as -1, and recurses until leaves
    hold single classes.  A K-class tree has exactly K-1 internal nodes.
    """
    if data.class_count < 2:
        raise DegenerateClass("the binary tree needs at least two classes")
    state = {"converged": True}

    def build(classes):
        if len(classes) == 1:
            return classes[0]
        group0, group1 = _split_classes_by_means(data.features, data.labels, classes, seed)
        a, _ = data.rows_of(group0)
        b, _ = data.rows_of(group1)
        model = fit_variant(a, b, variant, params)
        state["converged"] = state["converged"] and model.converged
        return BtNode(model, group0, group1, build(group0), build(group1))

    tree = build(_class_list(data))
    return MulticlassModel(BT, variant, params, data.class_count, tree=tree,
                           converged=state["converged"], seed=seed)


def fit_tds(data: LabeledDataset, variant: str, params: HyperParams,
            seed: int = DEFAULT_SEED,
            focus_threshold: float = DEFAULT_FOCUS_THRESHOLD) -> MulticlassModel:
    """Ternary decision structure over focused/ambiguous class groups.

    At each node, 2-means on the node's samples splits them in two; a class
    with at least ``focus_threshold`` of its samples in one cluster is
    focused to that cluster's group (+1 for cluster 0, -1 for cluster 1),
    anything more scattered lands in the ambiguous middle group (0).  One
    plane per nonempty group is trained one-against-rest.  Nodes where
    clustering makes no progress fall back to a class-mean bipartition.
    """
    if not 0.5 < focus_threshold <= 1.0:
        raise ValueError("focus_threshold must lie in (0.5, 1]")
    if data.class_count < 2:
        raise DegenerateClass("the ternary structure needs at least two classes")
    state = {"converged": True}

    def groups_from_clustering(features, labels, classes):
        try:
            assignment = kmeans2(features, seed).assignment
        except DegenerateData:
            return None
        groups = {1: [], 0: [], -1: []}
        for c in classes:
            in_cluster0 = int((assignment[labels == c] == 0).sum())
            total = int((labels == c).sum())
            frac = max(in_cluster0, total - in_cluster0) / total
            if frac >= focus_threshold:
                groups[1 if 2 * in_cluster0 >= total else -1].append(c)
            else:
                groups[0].append(c)
        nonempty = [(g, tuple(members)) for g, members in groups.items() if members]
        if len(nonempty) < 2:
            return None
        return nonempty

    def build(classes):
        if len(classes) == 1:
            return classes[0]
        features, labels = data.rows_of(classes)
        nonempty = groups_from_clustering(features, labels, classes)
        if nonempty is None:
            group0, group1 = _split_classes_by_means(data.features, data.labels,
                                                     classes, seed)
            nonempty = [(1, group0), (-1, group1)]
        planes = []
        for g, members in nonempty:
            own = features[np.isin(labels, members)]
            rest = features[~np.isin(labels, members)]
            model = fit_variant(own, rest, variant, params)
            state["converged"] = state["converged"] and model.converged
            planes.append(model.plane_pos)
        return TdsNode(tuple(g for g, _ in nonempty), tuple(planes),
                       tuple(members for _, members in nonempty),
                       tuple(build(members) for _, members in nonempty))

    tree = build(_class_list(data))
    return MulticlassModel(TDS, variant, params, data.class_count, tree=tree,
                           converged=state["converged"], seed=seed,
                           focus_threshold=focus_threshold)


def fit_strategy(data: LabeledDataset, variant: str, strategy: str,
                 params: HyperParams, seed: int = DEFAULT_SEED,
                 focus_threshold: float = DEFAULT_FOCUS_THRESHOLD) -> MulticlassModel:
    if strategy == OAA:
        return fit_oaa(data, variant, params)
    if strategy == BT:
        return fit_bt(data, variant, params, seed)
    if strategy == TDS:
        return fit_tds(data, variant, params, seed, focus_threshold)
    raise ValueError(f"unknown strategy {strategy!r}, expected one of {STRATEGIES}")


def predict_multiclass(model: MulticlassModel, x) -> int:
    """Class label for one point under the model's strategy."""
    if model.strategy == OAA:
        dists = [signed_distance(x, p) for p in model.oaa_planes]
        return int(np.argmin(dists))
    node = model.tree
    while not isinstance(node, (int, np.integer)):
        if isinstance(node, BtNode):
            d_pos = signed_distance(x, node.model.plane_pos)
            d_neg = signed_distance(x, node.model.plane_neg)
            node = node.left if d_pos <= d_neg else node.right
        else:
            dists = [signed_distance(x, p) for p in node.planes]
            node = node.children[int(np.argmin(dists))]
    return int(node)


def predict_many(model: MulticlassModel, xs) -> np.ndarray:
    xs = as_matrix(xs, "X")
    return np.array([predict_multiclass(model, row) for row in xs], dtype=np.int64)


def internal_node_count(tree) -> int:
    if isinstance(tree, (int, np.integer)):
        return 0
    if isinstance(tree, BtNode):
        return 1 + internal_node_count(tree.left) + internal_node_count(tree.right)
    return 1 + sum(internal_node_count(c) for c in tree.children)


def tree_height(tree) -> int:
    if isinstance(tree, (int, np.integer)):
        return 0
    children = (tree.left, tree.right) if isinstance(tree, BtNode) else tree.children
    return 1 + max(tree_height(c) for c in children)


def leaf_classes(tree) -> list:
    if isinstance(tree, (int, np.integer)):
        return [int(tree)]
    children = (tree.left, tree.right) if isinstance(tree, BtNode) else tree.children
    out = []
    for c in children:
        out.extend(leaf_classes(c))
    return out


def describe(model: MulticlassModel) -> str:
    """Readable dump of the model structure with class sets per node."""
    lines = [f"{model.strategy} / {model.variant} over {model.class_count} classes"]
    if model.strategy == OAA:
        for i, plane in enumerate(model.oaa_planes):
            lines.append(f"  class {i}: plane in {plane.space} space "
                         f"(dim {plane.weights.shape[0]})")
        return "\n".join(lines)

    def walk(node, indent, label):
        pad = "  " * indent
        if isinstance(node, (int, np.integer)):
            lines.append(f"{pad}{label}leaf: class {int(node)}")
            return
        if isinstance(node, BtNode):
            lines.append(f"{pad}{label}node: {list(node.classes_left)} vs "
                         f"{list(node.classes_right)}")
            walk(node.left, indent + 1, "+1 ")
            walk(node.right, indent + 1, "-1 ")
        else:
            sets = ", ".join(f"{g:+d}:{list(m)}" for g, m in
                             zip(node.group_labels, node.group_classes))
            lines.append(f"{pad}{label}node: {sets}")
            for g, child in zip(node.group_labels, node.children):
                walk(child, indent + 1, f"{g:+d} ")

    walk(model.tree, 1, "")
    return "\n".join(lines)
