#include "localforest/clustering.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "localforest/pipeline.hpp"
#include "localforest/rng.hpp"

namespace lf {

namespace {

using Bounds = std::map<int, FeatureRange>;

double similarity_from_bounds(const Bounds& a, const Bounds& b,
                              std::size_t n_features) {
  double sum = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  std::size_t present_in_either = 0;
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      // present only in a: contributes 0
      ++ia;
      ++present_in_either;
    } else if (ia == a.end() || ib->first < ia->first) {
      ++ib;
      ++present_in_either;
    } else {
      const FeatureRange& ra = ia->second;
      const FeatureRange& rb = ib->second;
      const double inter =
          std::min(ra.upper, rb.upper) - std::max(ra.lower, rb.lower);
      const double uni =
          std::max(ra.upper, rb.upper) - std::min(ra.lower, rb.lower);
      if (inter > 0.0 && uni != 0.0) sum += inter / uni;
      ++ia;
      ++ib;
      ++present_in_either;
    }
  }
  // Features outside both paths each contribute 1.
  sum += static_cast<double>(n_features - present_in_either);
  return sum / static_cast<double>(n_features);
}

}  // namespace

double path_similarity(const Path& a, const Path& b,
                       const std::vector<FeatureMeta>& features) {
  if (features.empty()) throw std::invalid_argument("empty feature space");
  return similarity_from_bounds(path_feature_bounds(a, features),
                                path_feature_bounds(b, features),
                                features.size());
}

SimilarityMatrix build_similarity_matrix(
    const std::vector<Path>& paths, const std::vector<FeatureMeta>& features) {
  const int n = static_cast<int>(paths.size());
  std::vector<Bounds> bounds;
  bounds.reserve(paths.size());
  for (const Path& p : paths) bounds.push_back(path_feature_bounds(p, features));

  SimilarityMatrix m;
  m.n = n;
  m.values.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double s = similarity_from_bounds(bounds[i], bounds[j],
                                              features.size());
      m.values[static_cast<std::size_t>(i) * n + j] = s;
      m.values[static_cast<std::size_t>(j) * n + i] = s;
    }
  }
  return m;
}

Clustering pam_cluster(const SimilarityMatrix& matrix, int n_medoids) {
  const int n = matrix.n;
  if (n < 1) throw std::invalid_argument("empty similarity matrix");
  if (n_medoids < 1 || n_medoids > n) {
    throw std::invalid_argument("n_medoids must be in [1, n]");
  }
  const auto dist = [&](int i, int j) { return 1.0 - matrix.at(i, j); };

  std::vector<int> medoids;
  std::vector<char> is_medoid(n, 0);
  std::vector<double> dnear(n, 0.0);

  // BUILD: start from the most central point, then greedily add the point
  // that lowers the total distance the most.
  {
    int best = 0;
    double best_total = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      double total = 0.0;
      for (int j = 0; j < n; ++j) total += dist(i, j);
      if (total < best_total) {
        best_total = total;
        best = i;
      }
    }
    medoids.push_back(best);
    is_medoid[best] = 1;
    for (int j = 0; j < n; ++j) dnear[j] = dist(j, best);
  }
  while (static_cast<int>(medoids.size()) < n_medoids) {
    int best = -1;
    double best_gain = -1.0;
    for (int c = 0; c < n; ++c) {
      if (is_medoid[c]) continue;
      double gain = 0.0;
      for (int j = 0; j < n; ++j) {
        const double d = dist(j, c);
        if (d < dnear[j]) gain += dnear[j] - d;
      }
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    medoids.push_back(best);
    is_medoid[best] = 1;
    for (int j = 0; j < n; ++j) dnear[j] = std::min(dnear[j], dist(j, best));
  }

  const int k = n_medoids;
  std::vector<int> near(n, 0);
  std::vector<double> dsec(n, 0.0);
  const auto recompute_assignment = [&] {
    for (int j = 0; j < n; ++j) {
      if (is_medoid[j]) {
        // A medoid belongs to its own cluster even when another medoid is
        // equally close.
        for (int p = 0; p < k; ++p) {
          if (medoids[p] == j) near[j] = p;
        }
        dnear[j] = 0.0;
        double second = std::numeric_limits<double>::infinity();
        for (int p = 0; p < k; ++p) {
          if (medoids[p] != j) second = std::min(second, dist(j, medoids[p]));
        }
        dsec[j] = second;
        continue;
      }
      int first = 0;
      double d1 = std::numeric_limits<double>::infinity();
      double d2 = std::numeric_limits<double>::infinity();
      for (int p = 0; p < k; ++p) {
        const double d = dist(j, medoids[p]);
        if (d < d1) {
          d2 = d1;
          d1 = d;
          first = p;
        } else if (d < d2) {
          d2 = d;
        }
      }
      near[j] = first;
      dnear[j] = d1;
      dsec[j] = d2;
    }
  };
  recompute_assignment();

  // SWAP: evaluate every (medoid, candidate) exchange in one pass per
  // candidate, apply the best strictly-improving one, stop after 100 swaps.
  std::vector<double> removal_delta(k, 0.0);
  for (int round = 0; round < 100 && k < n; ++round) {
    double best_delta = -1e-12;
    int best_pos = -1;
    int best_cand = -1;
    for (int h = 0; h < n; ++h) {
      if (is_medoid[h]) continue;
      double shared = 0.0;
      std::fill(removal_delta.begin(), removal_delta.end(), 0.0);
      for (int j = 0; j < n; ++j) {
        const double djh = dist(j, h);
        const double keep = std::min(0.0, djh - dnear[j]);
        shared += keep;
        // Losing j's own medoid re-homes it to the candidate or its second
        // choice; replace the shared term for that medoid.
        removal_delta[near[j]] += std::min(dsec[j], djh) - dnear[j] - keep;
      }
      for (int p = 0; p < k; ++p) {
        const double delta = shared + removal_delta[p];
        if (delta < best_delta) {
          best_delta = delta;
          best_pos = p;
          best_cand = h;
        }
      }
    }
    if (best_pos < 0) break;
    is_medoid[medoids[best_pos]] = 0;
    is_medoid[best_cand] = 1;
    medoids[best_pos] = best_cand;
    recompute_assignment();
  }

  Clustering result;
  result.medoids = std::move(medoids);
  result.assignment = std::move(near);
  return result;
}

std::vector<Path> kmedoids_reduce(const SimilarityMatrix& matrix,
                                  const std::vector<Path>& paths,
                                  int n_estimators, int n_medoids,
                                  std::uint64_t seed, int min_keep) {
  (void)seed;  // reserved; see pam_cluster's determinism note
  const int n = static_cast<int>(paths.size());
  if (n == 0) throw std::invalid_argument("no paths to cluster");
  if (matrix.n != n) {
    throw std::invalid_argument("similarity matrix does not match path count");
  }
  if (n_medoids < 1 || n_medoids > n) {
    throw std::invalid_argument("n_medoids must be in [1, |paths|]");
  }
  const int target = min_keep > 0 ? min_keep : quorum(n_estimators);

  const Clustering clustering = pam_cluster(matrix, n_medoids);
  const int k = static_cast<int>(clustering.medoids.size());
  std::vector<std::vector<int>> members(k);
  for (int j = 0; j < n; ++j) members[clustering.assignment[j]].push_back(j);

  std::vector<int> order(k);
  for (int p = 0; p < k; ++p) order[p] = p;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (members[a].size() != members[b].size()) {
      return members[a].size() > members[b].size();
    }
    return clustering.medoids[a] < clustering.medoids[b];
  });

  std::vector<int> kept;
  for (int pos : order) {
    kept.insert(kept.end(), members[pos].begin(), members[pos].end());
    if (static_cast<int>(kept.size()) >= target) break;
  }
  if (static_cast<int>(kept.size()) < target) return paths;

  std::vector<Path> result;
  result.reserve(kept.size());
  for (int idx : kept) result.push_back(paths[idx]);
  return result;
}

std::vector<Path> random_trim(const std::vector<Path>& paths, int n_estimators,
                              std::uint64_t seed, int min_keep) {
  const int n = static_cast<int>(paths.size());
  const int target = min_keep > 0 ? min_keep : quorum(n_estimators);
  if (n < target) {
    throw std::runtime_error("cannot trim " + std::to_string(n) +
                             " paths below the quorum of " +
                             std::to_string(target));
  }
  if (n == target) return paths;

  Rng rng(seed);
  std::vector<int> indices(n);
  for (int i = 0; i < n; ++i) indices[i] = i;
  // Partial Fisher-Yates: the first `target` entries are a uniform subset.
  for (int i = 0; i < target; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(target);
  std::sort(indices.begin(), indices.end());

  std::vector<Path> result;
  result.reserve(target);
  for (int idx : indices) result.push_back(paths[idx]);
  return result;
}

}  // namespace lf
