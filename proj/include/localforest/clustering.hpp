#pragma once

#include <cstdint>
#include <vector>

#include "localforest/paths.hpp"

namespace lf {

struct SimilarityMatrix {
  int n = 0;
  std::vector<double> values;  // row-major n * n

  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n + j]; }
};

// Range-overlap similarity of two paths over the full feature space: a
// feature absent from both paths contributes 1, a feature present in both
// contributes intersection/union of the two intervals (0 when they do not
// overlap), a feature present in exactly one contributes 0; the sum is
// divided by the number of features. Missing interval ends are filled from
// the feature's global bounds. Symmetric, 1 on identical paths, in [0, 1].
double path_similarity(const Path& a, const Path& b,
                       const std::vector<FeatureMeta>& features);

SimilarityMatrix build_similarity_matrix(const std::vector<Path>& paths,
                                         const std::vector<FeatureMeta>& features);

struct Clustering {
  std::vector<int> medoids;     // path indices, in selection order
  std::vector<int> assignment;  // path index -> position in medoids
};

// Partitioning around medoids on distance 1 - similarity: greedy BUILD
// initialization, then best-improvement swaps, capped at 100. Both phases
// break ties by lowest index, so the result is deterministic.
Clustering pam_cluster(const SimilarityMatrix& matrix, int n_medoids);

// Clusters the paths and keeps whole clusters, largest first (ties by
// ascending medoid index), until at least `min_keep` paths are retained
// (min_keep <= 0 means the voting quorum for n_estimators trees). Returns
// the input unchanged when whole clusters cannot reach that floor. The seed
// is part of the contract but currently unused: both PAM phases are
// deterministic.
std::vector<Path> kmedoids_reduce(const SimilarityMatrix& matrix,
                                  const std::vector<Path>& paths,
                                  int n_estimators, int n_medoids,
                                  std::uint64_t seed, int min_keep = 0);

// Keeps a uniformly random subset of exactly `min_keep` paths (<= 0 means
// the voting quorum), preserving their original order. Deterministic for a
// fixed seed. Throws std::runtime_error when fewer paths than that exist.
std::vector<Path> random_trim(const std::vector<Path>& paths, int n_estimators,
                              std::uint64_t seed, int min_keep = 0);

}  // namespace lf
